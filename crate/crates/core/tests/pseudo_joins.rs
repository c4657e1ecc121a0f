use dirough::gen::random_lattice;
use dirough::grpd::{pseudo_joins, PseudoJoinMode};
use dirough::relsys::BoundSide;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn lattice_pseudo_join_is_the_least_upper_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    for _ in 0..100 {
        let base = rng.gen_range(2..=4);
        let sys = random_lattice(&mut rng, base);
        for a in sys.elements() {
            for b in sys.elements() {
                let ub = sys.upper_bounds(a, b, BoundSide::Upper).unwrap();
                let least: Vec<_> = ub.iter().filter(|&x| ub.iter().all(|y| sys.related(x, y))).collect();
                assert_eq!(least.len(), 1);
                let pj = pseudo_joins(&sys, a, b, PseudoJoinMode::Minimal).unwrap();
                assert_eq!(pj.iter().collect::<Vec<_>>(), least);
            }
        }
    }
}
