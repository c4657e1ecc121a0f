use dirough::gen::random_up_directed;
use dirough::grpd::{build_updir_groupoid, check_laws, verify_b_of_s, ChoiceMode, ChoiceStrategy, InducedKind};
use dirough::RelationalSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random up-directed systems, a third made reflexive and a third symmetric so that both
/// sides of each equivalence are exercised.
fn system(rng: &mut ChaCha8Rng) -> RelationalSystem {
    let n = rng.gen_range(3..=7);
    let base = random_up_directed(rng, n);
    let mut pairs: Vec<_> = base.pairs().collect();
    match rng.gen_range(0..3) {
        0 => pairs.extend((0..n).map(|x| (x, x))),
        1 => {
            let flipped: Vec<_> = pairs.iter().map(|&(a, b)| (b, a)).collect();
            pairs.extend(flipped);
        }
        _ => {}
    }
    RelationalSystem::numeric(n, pairs).unwrap()
}

fn strategies(seed: u64) -> Vec<ChoiceStrategy> {
    vec![
        ChoiceStrategy::new(ChoiceMode::MinIndex),
        ChoiceStrategy::new(ChoiceMode::MaxIndex),
        ChoiceStrategy::new(ChoiceMode::SeededRandom(seed)),
        ChoiceStrategy::pi(ChoiceMode::MinIndex),
    ]
}

#[test]
fn reflexivity_and_symmetry_correspond_to_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let (mut reflexive, mut symmetric) = (0, 0);
    for i in 0..500 {
        let sys = system(&mut rng);
        reflexive += sys.is_reflexive() as usize;
        symmetric += sys.is_symmetric() as usize;
        for s in strategies(i) {
            let g = build_updir_groupoid(&sys, &s).unwrap();
            let laws = check_laws(&g, &["idempotent", "symmetry"]).unwrap();
            assert_eq!(sys.is_reflexive(), laws["idempotent"].holds, "system {i}");
            assert_eq!(sys.is_symmetric(), laws["symmetry"].holds, "system {i}");
        }
    }
    assert!(reflexive > 100 && reflexive < 400);
    assert!(symmetric > 100 && symmetric < 400);
}

#[test]
fn construction_is_sound_and_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for i in 0..500 {
        let sys = system(&mut rng);
        for s in strategies(i) {
            let g = build_updir_groupoid(&sys, &s).unwrap();
            assert!(verify_b_of_s(&sys, &g).unwrap());
            assert!(g.relation_of(InducedKind::R).pairs().eq(sys.pairs()));
            assert!(g.relation_of(InducedKind::Rstar).is_up_directed());
        }
    }
}

#[test]
fn law_consequences_for_the_induced_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    for i in 0..500 {
        let sys = system(&mut rng);
        for s in strategies(i) {
            let g = build_updir_groupoid(&sys, &s).unwrap();
            let laws = check_laws(&g, &["associativity", "commutativity", "antisymmetry", "absorption"]).unwrap();
            let r = g.relation_of(InducedKind::R);
            if laws["associativity"].holds {
                assert!(r.is_transitive());
            }
            if laws["commutativity"].holds || laws["antisymmetry"].holds {
                assert!(r.is_antisymmetric());
            }
            if laws["absorption"].holds {
                assert!(r.pairs().eq(g.relation_of(InducedKind::Rstar).pairs()));
            }
        }
    }
}

#[test]
fn pi_constrained_products_factor_through_upper_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    for i in 0..200 {
        let sys = system(&mut rng);
        let g = build_updir_groupoid(&sys, &ChoiceStrategy::pi(ChoiceMode::SeededRandom(i))).unwrap();
        assert!(dirough::grpd::is_pi_constrained(&sys, &g));
    }
}

#[test]
fn not_up_directed_is_rejected() {
    let sys = RelationalSystem::numeric(2, [(0, 0), (1, 1)]).unwrap();
    assert!(build_updir_groupoid(&sys, &ChoiceStrategy::new(ChoiceMode::MinIndex)).is_err());
}
