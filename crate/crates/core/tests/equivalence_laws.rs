use dirough::gen::random_equivalence;
use dirough::grpd::{build_order_groupoid, check_laws, law, law_ids};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRINTED_TYPO: &str = "E0.9-printed";

fn listed_laws() -> Vec<&'static str> {
    law_ids()
        .into_iter()
        .filter(|id| id.starts_with('E') && *id != PRINTED_TYPO)
        .collect()
}

#[test]
fn e_laws_and_consequences_hold_on_equivalence_groupoids() {
    let ids = listed_laws();
    assert!(ids.contains(&"E5") && ids.contains(&"E0.14"));
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    for i in 0..500 {
        let n = rng.gen_range(1..=8);
        let sys = random_equivalence(&mut rng, n);
        let g = build_order_groupoid(&sys);
        for (id, v) in check_laws(&g, &ids).unwrap() {
            assert!(v.holds, "{id} fails on system {i}: {:?}", v.witness);
        }
    }
}

#[test]
fn printed_e09_is_refuted_with_a_replayable_witness() {
    let printed = law(PRINTED_TYPO).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    let mut refuted = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let g = build_order_groupoid(&random_equivalence(&mut rng, n));
        let v = printed.check(&g);
        if let Some(w) = &v.witness {
            refuted += 1;
            assert_eq!(printed.holds_at(&g, w), Some(false));
        }
    }
    assert!(refuted > 0);
}
