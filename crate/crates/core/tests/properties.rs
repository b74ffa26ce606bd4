use std::sync::Arc;

use phaselog::conway::random::{random_distributive_lattice, random_game, random_strategy};
use phaselog::conway::{compose_strategies, copycat, dual_game, implication_game, tensor_game, validate_strategy};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_laws(seed in any::<u64>(), size in 2usize..=8) {
        let l = random_distributive_lattice(&mut ChaCha8Rng::seed_from_u64(seed), size);
        for x in l.elements() {
            for y in l.elements() {
                let (j, m) = (l.join2(x, y).unwrap(), l.meet2(x, y).unwrap());
                prop_assert_eq!(j, l.join2(y, x).unwrap());
                prop_assert_eq!(l.meet2(x, j).unwrap(), x);
                prop_assert_eq!(l.join2(x, m).unwrap(), x);
                let imp = l.heyting_implies(x, y).unwrap();
                prop_assert!(l.leq(l.meet2(x, imp).unwrap(), y).unwrap());
                for z in l.elements() {
                    let lhs = l.meet2(x, l.join2(y, z).unwrap()).unwrap();
                    let rhs = l.join2(m, l.meet2(x, z).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn game_constructions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_game(&mut rng, 5), random_game(&mut rng, 5));
        prop_assert_eq!(dual_game(&dual_game(&x)), x.clone());
        prop_assert_eq!(tensor_game(&x, &y).vertex_count(), x.vertex_count() * y.vertex_count());
        prop_assert_eq!(dual_game(&implication_game(&x, &y)), implication_game(&dual_game(&x), &dual_game(&y)));
    }

    #[test]
    fn composites_are_strategies(seed in any::<u64>(), rate in 0.3f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<_> = (0..3).map(|_| random_game(&mut rng, 4)).collect();
        let sigma = random_strategy(&mut rng, Arc::new(implication_game(&g[0], &g[1])), rate);
        let tau = random_strategy(&mut rng, Arc::new(implication_game(&g[1], &g[2])), rate);
        let rho = compose_strategies(&sigma, &tau).unwrap();
        prop_assert!(validate_strategy(rho.game(), rho.plays()).is_ok());
        prop_assert_eq!(compose_strategies(&sigma, &copycat(&g[1])).unwrap(), sigma);
    }
}
