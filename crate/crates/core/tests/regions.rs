use dirough::gen::{random_up_directed, strategy};
use dirough::grpd::build_updir_groupoid;
use dirough::regions::{RegionKind, Regions};
use dirough::ElementSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn region_containments_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    for i in 0..200 {
        let n = rng.gen_range(3..=6);
        let sys = random_up_directed(&mut rng, n);
        let g = build_updir_groupoid(&sys, &strategy(i, i as u64)).unwrap();
        let r = Regions::new(&g, &sys).unwrap();
        for _ in 0..50 {
            let a = ElementSet::from_mask(n, rng.gen_range(0..1u64 << n));
            let b = ElementSet::from_mask(n, rng.gen_range(0..1u64 << n));
            let all: Vec<_> = r.all(&a, &b);
            let get = |k: RegionKind| all.iter().find(|(kk, _)| *kk == k).unwrap().1.clone();
            assert_eq!(get(RegionKind::O), get(RegionKind::O1).intersection(&get(RegionKind::O2)));
            assert!(get(RegionKind::O1).is_disjoint(&a));
            assert!(get(RegionKind::I1).is_subset(&a));
            assert!(get(RegionKind::I2).is_subset(&b));
            assert!(get(RegionKind::N).is_subset(&b));
        }
    }
}

/// Every product of an unrelated pair lands in exactly the regions its membership dictates.
#[test]
fn partition_audit_for_unrelated_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(801);
    for i in 0..200 {
        let n = rng.gen_range(3..=6);
        let sys = random_up_directed(&mut rng, n);
        let g = build_updir_groupoid(&sys, &strategy(i, i as u64)).unwrap();
        let r = Regions::new(&g, &sys).unwrap();
        for x in sys.elements() {
            for y in sys.elements() {
                if sys.related(x, y) {
                    continue;
                }
                let (a, b) = (ElementSet::singleton(n, x), ElementSet::singleton(n, y));
                let c = g.mul(x, y);
                let expect = |k: RegionKind| match k {
                    RegionKind::N => c == y,
                    RegionKind::O1 => !a.contains(c),
                    RegionKind::O2 => !b.contains(c),
                    RegionKind::I1 => a.contains(c),
                    RegionKind::I2 => b.contains(c),
                    RegionKind::O | RegionKind::OProse => !a.contains(c) && !b.contains(c),
                };
                for (k, set) in r.all(&a, &b) {
                    assert_eq!(set.contains(c), expect(k), "{k:?} for {x}·{y}={c}");
                }
            }
        }
    }
}
