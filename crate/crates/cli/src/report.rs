use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub status: Status,
    pub value: String,
}

/// Outcome of one command. `status` is the worst item status; warnings do
/// not change the exit code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub items: Vec<Item>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            status: Status::Pass,
            items: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn push(&mut self, id: impl Into<String>, status: Status, value: impl Into<String>) {
        self.status = self.status.max(status);
        if status == Status::Fail {
            self.exit_code = self.exit_code.max(1);
        }
        self.items.push(Item {
            id: id.into(),
            status,
            value: value.into(),
        });
    }

    pub fn pass(&mut self, id: impl Into<String>, value: impl Into<String>) {
        self.push(id, Status::Pass, value);
    }

    pub fn check(&mut self, id: impl Into<String>, ok: bool, value: impl Into<String>) {
        self.push(id, if ok { Status::Pass } else { Status::Fail }, value);
    }

    pub fn value(&self, id: &str) -> Option<&str> {
        self.items.iter().find(|i| i.id == id).map(|i| i.value.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn render(&self) -> String {
        let width = self.items.iter().map(|i| i.id.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for i in &self.items {
            let pad = width - i.id.chars().count();
            out.push_str(&format!("{}  {}{}  {}\n", i.status, i.id, " ".repeat(pad), i.value));
        }
        out.push_str(&format!("{}: {}\n", self.command, self.status));
        out
    }
}
