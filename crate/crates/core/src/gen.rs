//! Seeded random instances: relations, up-directed systems, equivalences, lattice orders and
//! choice strategies.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grpd::{ChoiceMode, ChoiceStrategy};
use crate::relsys::RelationalSystem;
use crate::set::{mask_bits, ElementId};

/// Each ordered pair is related with probability `density`.
pub fn random_relation<R: Rng>(rng: &mut R, n: usize, density: f64) -> RelationalSystem {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    RelationalSystem::numeric(n, pairs).expect("ids in range")
}

/// A random relation, patched until every pair has a common successor.
pub fn random_up_directed<R: Rng>(rng: &mut R, n: usize) -> RelationalSystem {
    let density = rng.gen_range(0.15..0.6);
    let mut sys = random_relation(rng, n, density);
    while let Some((a, b)) = sys.non_directed_witness() {
        let c = rng.gen_range(0..n);
        let mut pairs: Vec<(ElementId, ElementId)> = sys.pairs().collect();
        pairs.push((a, c));
        pairs.push((b, c));
        sys = RelationalSystem::numeric(n, pairs).expect("ids in range");
    }
    sys
}

/// The equivalence of a random partition into at most `n` classes.
pub fn random_equivalence<R: Rng>(rng: &mut R, n: usize) -> RelationalSystem {
    let classes = rng.gen_range(1..=n.max(1));
    let class: Vec<usize> = (0..n).map(|_| rng.gen_range(0..classes)).collect();
    let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
    let pairs: Vec<_> = pairs.filter(|&(a, b)| class[a] == class[b]).collect();
    RelationalSystem::numeric(n, pairs).expect("ids in range")
}

/// Inclusion order on a random Moore family over a `base`-point set (`base ≤ 6`).
///
/// Intersections of random subsets together with the full set always form a lattice.
/// Elements are labelled by their member points, `{}` for the empty set.
pub fn random_lattice<R: Rng>(rng: &mut R, base: usize) -> RelationalSystem {
    assert!(base <= 6, "lattice base too large");
    let full = (1u64 << base) - 1;
    let mut family = vec![full];
    for _ in 0..rng.gen_range(1..=base + 2) {
        let m = rng.gen_range(0..=full);
        family.push(m);
    }
    loop {
        let mut added = false;
        let snapshot = family.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                if !family.contains(&(a & b)) {
                    family.push(a & b);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    family.sort_unstable();
    family.dedup();
    family.shuffle(rng);
    let labels = family
        .iter()
        .map(|&m| {
            let s: String = mask_bits(m).map(|i| (b'p' + i as u8) as char).collect();
            format!("{{{s}}}")
        })
        .collect();
    let pairs = (0..family.len())
        .flat_map(|a| (0..family.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| family[a] & !family[b] == 0);
    RelationalSystem::from_ids(labels, pairs.collect::<Vec<_>>()).expect("distinct masks")
}

/// The `i`-th of the rotating construction strategies: min, max, seeded, then their pi forms.
pub fn strategy(i: usize, seed: u64) -> ChoiceStrategy {
    let mode = match i % 3 {
        0 => ChoiceMode::MinIndex,
        1 => ChoiceMode::MaxIndex,
        _ => ChoiceMode::SeededRandom(seed),
    };
    if (i / 3) % 2 == 1 {
        ChoiceStrategy::pi(mode)
    } else {
        ChoiceStrategy::new(mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpd::{pseudo_joins, PseudoJoinMode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn up_directed_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=8 {
            for _ in 0..20 {
                assert!(random_up_directed(&mut rng, n).is_up_directed());
            }
        }
    }

    #[test]
    fn equivalences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let p = random_equivalence(&mut rng, 6).classify();
            assert!(p.reflexive && p.symmetric && p.transitive);
        }
    }

    #[test]
    fn lattices_have_unique_least_upper_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let sys = random_lattice(&mut rng, 4);
            let p = sys.classify();
            assert!(p.reflexive && p.antisymmetric && p.transitive && p.up_directed);
            for a in sys.elements() {
                for b in sys.elements() {
                    let pj = pseudo_joins(&sys, a, b, PseudoJoinMode::Minimal).unwrap();
                    assert_eq!(pj.len(), 1);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_system() {
        let a = random_up_directed(&mut ChaCha8Rng::seed_from_u64(9), 6);
        let b = random_up_directed(&mut ChaCha8Rng::seed_from_u64(9), 6);
        assert_eq!(a, b);
    }
}
