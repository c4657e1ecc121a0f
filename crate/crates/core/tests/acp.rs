use dirough::acp::{AcpAlgebra, CarrierMode};
use dirough::gen::{random_up_directed, strategy};
use dirough::grpd::build_updir_groupoid;
use dirough::relsys::DEFAULT_CAP;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn subgroupoids_form_a_lattice_under_intersection_and_generated_union() {
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    for i in 0..300 {
        let n = rng.gen_range(1..=6);
        let sys = random_up_directed(&mut rng, n);
        let g = build_updir_groupoid(&sys, &strategy(i, i as u64)).unwrap();
        let su = g.subgroupoids(DEFAULT_CAP).unwrap();
        assert_eq!(su.members(), g.subgroupoids_brute(DEFAULT_CAP).unwrap().members());
        let m = su.members();
        for x in m {
            for y in m {
                let meet = x.intersection(y);
                let join = g.generate(&x.union(y));
                assert!(su.contains(&meet) && su.contains(&join));
                for z in m {
                    if x.is_subset(z) && y.is_subset(z) {
                        assert!(join.is_subset(z));
                    }
                }
            }
        }
    }
}

#[test]
fn realized_carrier_is_inside_the_formal_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    for i in 0..300 {
        let n = rng.gen_range(1..=6);
        let sys = random_up_directed(&mut rng, n);
        let g = build_updir_groupoid(&sys, &strategy(i, i as u64)).unwrap();
        let alg = AcpAlgebra::new(&g, DEFAULT_CAP).unwrap();
        let formal = alg.carrier(CarrierMode::Formal);
        for x in alg.carrier(CarrierMode::Realized) {
            assert!(formal.contains(&x));
            alg.validate(&x).unwrap();
        }
    }
}

#[test]
fn formal_audit_tier_one_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(902);
    for i in 0..300 {
        let n = rng.gen_range(1..=6);
        let sys = random_up_directed(&mut rng, n);
        let g = build_updir_groupoid(&sys, &strategy(i, i as u64)).unwrap();
        let report = AcpAlgebra::new(&g, DEFAULT_CAP).unwrap().audit(CarrierMode::Formal);
        for e in report.entries.iter().filter(|e| e.tier == 1) {
            assert!(e.verdict.holds(), "{} on instance {i}: {:?}", e.law, e.verdict);
        }
        for e in report.entries.iter().filter(|e| !e.verdict.holds()) {
            assert!(e.verdict.witness().is_some_and(|w| !w.is_empty()));
        }
    }
}
