use serde::Serialize;

use crate::error::{Error, Result};
use crate::relsys::RelationalSystem;
use crate::set::{mask_bits, ElementId, ElementSet};

/// Which reading of the pseudo-join set `U_R^m(a,b)` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudoJoinMode {
    /// Minimal elements of `U_R(a,b)` under the reflexive-transitive closure of `R`.
    #[default]
    Minimal,
    /// Largest `M ⊆ U_R(a,b)` with `∀e,f∈M ∃g∈U_R(a,b)∖M: Reg ∧ Rfg`
    /// (lexicographically least among those of maximum size).
    Literal,
}

pub fn pseudo_joins(sys: &RelationalSystem, a: ElementId, b: ElementId, mode: PseudoJoinMode) -> Result<ElementSet> {
    let ub = sys.upper_bounds(a, b, crate::relsys::BoundSide::Upper)?;
    if ub.is_empty() {
        return Err(Error::EmptyPseudoJoins {
            a: sys.label(a).into(),
            b: sys.label(b).into(),
        });
    }
    Ok(pseudo_joins_of(&ub, &sys.reachability(), mode, sys))
}

pub(crate) fn pseudo_joins_of(
    ub: &ElementSet,
    reach: &[ElementSet],
    mode: PseudoJoinMode,
    sys: &RelationalSystem,
) -> ElementSet {
    match mode {
        PseudoJoinMode::Minimal => {
            let mut out = ElementSet::empty(ub.universe_size());
            for x in ub {
                // y strictly below x: y ≤* x and not x ≤* y
                let dominated = ub.iter().any(|y| reach[y].contains(x) && !reach[x].contains(y));
                if !dominated {
                    out.insert(x);
                }
            }
            out
        }
        PseudoJoinMode::Literal => literal(ub, sys),
    }
}

fn literal(ub: &ElementSet, sys: &RelationalSystem) -> ElementSet {
    let ids: Vec<ElementId> = ub.iter().collect();
    let k = ids.len();
    assert!(k < 31, "literal pseudo-join search needs fewer than 31 upper bounds");
    let n = ub.universe_size();
    let mut best: Option<ElementSet> = None;
    for m in 0u64..1 << k {
        let inside = ElementSet::from_ids(n, mask_bits(m).map(|i| ids[i]));
        let outside = ub.difference(&inside);
        let ok = inside.iter().all(|e| {
            inside
                .iter()
                .all(|f| outside.iter().any(|g| sys.related(e, g) && sys.related(f, g)))
        });
        if !ok {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => inside.len() > b.len() || (inside.len() == b.len() && inside.lex_cmp(b).is_lt()),
        };
        if better {
            best = Some(inside);
        }
    }
    best.unwrap_or_else(|| ElementSet::empty(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn order(n: usize, le: &[(usize, usize)]) -> RelationalSystem {
        let mut pairs: Vec<_> = (0..n).map(|x| (x, x)).collect();
        pairs.extend_from_slice(le);
        RelationalSystem::numeric(n, pairs).unwrap()
    }

    #[test]
    fn diamond_has_single_join() {
        // 0 = bottom, 1 = p, 2 = q, 3 = top
        let sys = order(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]);
        let pj = pseudo_joins(&sys, 1, 2, PseudoJoinMode::Minimal).unwrap();
        assert_eq!(pj, ElementSet::singleton(4, 3));
    }

    #[test]
    fn chain_join_is_larger_element() {
        let sys = order(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(
            pseudo_joins(&sys, 0, 1, PseudoJoinMode::Minimal).unwrap(),
            ElementSet::singleton(3, 1)
        );
    }

    #[test]
    fn fixture_cycle_keeps_both() {
        let sys = fixture::relation();
        let (a, b) = (sys.id("a").unwrap(), sys.id("b").unwrap());
        let pj = pseudo_joins(&sys, a, b, PseudoJoinMode::Minimal).unwrap();
        assert_eq!(sys.labels_of(&pj), vec!["c", "f"]);
    }

    #[test]
    fn literal_mode_on_chain() {
        // U(0,1) = {1,2}; {1} works because 2 is outside and above both copies of 1.
        let sys = order(3, &[(0, 1), (1, 2), (0, 2)]);
        let pj = pseudo_joins(&sys, 0, 1, PseudoJoinMode::Literal).unwrap();
        assert_eq!(pj, ElementSet::singleton(3, 1));
    }

    #[test]
    fn empty_upper_bounds_error() {
        let sys = RelationalSystem::numeric(2, [(0, 0)]).unwrap();
        assert!(matches!(
            pseudo_joins(&sys, 0, 1, PseudoJoinMode::Minimal),
            Err(Error::EmptyPseudoJoins { .. })
        ));
    }
}
