mod common;

use common::{downsets, el, fig1_lattice};
use phaselog::conway::random::random_distributive_lattice;
use phaselog::{Lattice, LatticeDoc, LatticeError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn doc(elements: &[&str], covers: &[(&str, &str)], bottom: &str, top: &str) -> LatticeDoc {
    LatticeDoc {
        elements: elements.iter().map(|s| s.to_string()).collect(),
        covers: covers.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        bottom: bottom.into(),
        top: top.into(),
    }
}

#[test]
fn two_element_chain() {
    let l = Lattice::from_doc(&doc(&["0", "1"], &[("0", "1")], "0", "1")).unwrap();
    assert_eq!(l.len(), 2);
    assert!(l.leq(el(&l, "0"), el(&l, "1")).unwrap());
}

#[test]
fn cover_cycle_is_not_a_partial_order() {
    let err = Lattice::from_doc(&doc(&["a", "b"], &[("a", "b"), ("b", "a")], "a", "b")).unwrap_err();
    assert!(matches!(err, LatticeError::NotAPartialOrder(..)));
}

#[test]
fn fig1_matches_the_downset_model() {
    let l = fig1_lattice();
    let sets = downsets::all();
    assert_eq!(l.len(), 18);
    assert_eq!(sets.len(), 18);
    for &x in &sets {
        for &y in &sets {
            let (ex, ey) = (el(&l, &downsets::name(x)), el(&l, &downsets::name(y)));
            assert_eq!(l.leq(ex, ey).unwrap(), x & !y == 0, "{} ≤ {}", downsets::name(x), downsets::name(y));
            assert_eq!(l.name(l.join2(ex, ey).unwrap()), downsets::name(x | y));
            assert_eq!(l.name(l.meet2(ex, ey).unwrap()), downsets::name(x & y));
        }
    }
}

#[test]
fn reference_order_facts() {
    let l = fig1_lattice();
    let a = el(&l, "a");
    for above in ["J1a", "e", "b2", "b3"] {
        assert!(l.leq(a, el(&l, above)).unwrap(), "a ≤ {above}");
    }
    assert!(!l.leq(el(&l, "b1"), el(&l, "b2")).unwrap());
    assert_eq!(l.join(&[el(&l, "b2"), el(&l, "b3")]).unwrap(), el(&l, "J23"));
    assert_eq!(l.meet(&[el(&l, "e"), el(&l, "b2")]).unwrap(), a);
    assert!(l.is_distributive());
}

#[test]
fn bottom_is_below_everything_and_joins_are_idempotent() {
    let l = fig1_lattice();
    for x in l.elements() {
        assert!(l.leq(l.bottom(), x).unwrap());
        assert_eq!(l.join(&[x]).unwrap(), x);
        assert_eq!(l.meet(&[x, x]).unwrap(), x);
    }
}

#[test]
fn order_join_and_meet_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut lattices = vec![fig1_lattice().as_ref().clone()];
    lattices.extend((0..10).map(|_| random_distributive_lattice(&mut rng, 8)));
    for l in &lattices {
        let op = l.opposite();
        for x in l.elements() {
            for y in l.elements() {
                let leq = l.leq(x, y).unwrap();
                assert_eq!(leq, l.join2(x, y).unwrap() == y);
                assert_eq!(leq, l.meet2(x, y).unwrap() == x);
                let (ox, oy) = (op.element(l.name(x)).unwrap(), op.element(l.name(y)).unwrap());
                assert_eq!(op.name(op.meet2(ox, oy).unwrap()), l.name(l.join2(x, y).unwrap()));
            }
        }
    }
}

#[test]
fn distributivity_of_standard_lattices() {
    assert!(Lattice::chain(&["0", "1", "2", "3"]).unwrap().is_distributive());
    assert!(Lattice::powerset(&["p", "q", "r"]).unwrap().is_distributive());
    let m3 = Lattice::from_doc(&doc(
        &["0", "p", "q", "r", "1"],
        &[("0", "p"), ("0", "q"), ("0", "r"), ("p", "1"), ("q", "1"), ("r", "1")],
        "0",
        "1",
    ))
    .unwrap();
    assert!(!m3.is_distributive());
    let (p, q) = (el(&m3, "p"), el(&m3, "q"));
    assert!(matches!(m3.heyting_implies(p, q), Err(LatticeError::NotHeyting { .. })));
}

#[test]
fn heyting_basics() {
    let l = fig1_lattice();
    for y in l.elements() {
        assert_eq!(l.heyting_implies(l.bottom(), y).unwrap(), l.top());
        assert_eq!(l.heyting_implies(l.top(), y).unwrap(), y);
    }
    assert_eq!(l.heyting_neg(l.bottom()).unwrap(), l.top());
    assert_eq!(l.heyting_neg(l.top()).unwrap(), l.bottom());
}

#[test]
fn heyting_on_powersets_is_complement_union() {
    // element index = bitmask over the items
    for items in [&["p", "q"][..], &["p", "q", "r"][..]] {
        let l = Lattice::powerset(items).unwrap();
        let full = (1usize << items.len()) - 1;
        for a in 0..=full {
            for b in 0..=full {
                let got = l.heyting_implies(l.at(a), l.at(b)).unwrap();
                // brute force: the union of every c with a ∩ c ⊆ b
                let brute = (0..=full).filter(|c| a & c & !b == 0).fold(0, |acc, c| acc | c);
                assert_eq!(got.index(), brute);
                assert_eq!(brute, (full & !a) | b);
            }
            assert_eq!(l.heyting_neg(l.at(a)).unwrap().index(), full & !a);
        }
    }
    let l = Lattice::powerset(&["p", "q"]).unwrap();
    assert_eq!(l.name(l.heyting_implies(l.at(0b01), l.at(0b10)).unwrap()), l.name(l.at(0b10)));
}

#[test]
fn residuation_on_random_distributive_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let l = random_distributive_lattice(&mut rng, 8);
        for a in l.elements() {
            for b in l.elements() {
                let imp = l.heyting_implies(a, b).unwrap();
                for c in l.elements() {
                    let lhs = l.leq(l.meet2(a, c).unwrap(), b).unwrap();
                    assert_eq!(lhs, l.leq(c, imp).unwrap());
                }
            }
        }
    }
}
