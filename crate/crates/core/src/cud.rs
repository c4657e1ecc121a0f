//! Closure under up-directedness: CUD sets, the partial closure `ð`, the CUD-algebraic
//! system and the CUD lower/upper approximations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::granule::{ensure_cap, minimal_sets, GranuleFamily, Provenance};
use crate::relsys::RelationalSystem;
use crate::set::{mask_bits, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Cud,
    Pi,
    /// Neighborhood approximations; used when the relation is not up-directed.
    Basic,
}

/// `(lower, upper, upper ∖ lower)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoughTuple {
    pub lower: ElementSet,
    pub upper: ElementSet,
    pub boundary: ElementSet,
    pub flavor: Flavor,
}

impl RoughTuple {
    pub fn new(lower: ElementSet, upper: ElementSet, flavor: Flavor) -> Self {
        let boundary = upper.difference(&lower);
        RoughTuple {
            lower,
            upper,
            boundary,
            flavor,
        }
    }

    pub fn satisfies_invariants(&self) -> bool {
        self.lower.is_subset(&self.upper) && self.boundary == self.upper.difference(&self.lower)
    }

    /// Equal lower and upper components.
    pub fn roughly_equal(&self, other: &Self) -> bool {
        self.lower == other.lower && self.upper == other.upper
    }
}

/// Reading of the restricted union in the CUD upper approximation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperMode {
    /// Union over `x ∈ A` of the inclusion-minimal CUD sets containing `x`.
    #[default]
    Pointwise,
    /// Union of the inclusion-minimal members of `{H ∈ 𝒞 : H ∩ A ≠ ∅}`.
    Collection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CudApprox {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CudasOp {
    /// `ð(A ∪ B)`
    Oplus,
    /// `ð(A ∩ B)`
    Odot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CudComparison {
    pub cud_subset: bool,
    pub cud_equal: bool,
}

/// `∀a,b∈A ∃c∈A: Rac ∧ Rbc`
pub fn is_cud(sys: &RelationalSystem, a: &ElementSet) -> bool {
    a.iter().all(|x| a.iter().all(|y| sys.ub(x, y).intersects(a)))
}

/// Every CUD subset of the universe, `∅` included.
pub fn cud_family(sys: &RelationalSystem, cap: usize) -> Result<GranuleFamily> {
    let n = sys.len();
    ensure_cap(n, cap)?;
    let succ: Vec<u64> = sys.elements().map(|x| sys.successors(x).to_mask()).collect();
    let members = (0u64..1 << n).filter(|&m| {
        mask_bits(m).all(|x| mask_bits(m).filter(|&y| y >= x).all(|y| succ[x] & succ[y] & m != 0))
    });
    Ok(GranuleFamily::new(
        n,
        members.map(|m| ElementSet::from_mask(n, m)),
        Provenance::Cud,
    ))
}

/// A relational system with its CUD family computed once.
///
/// Universes above the cap are accepted when the relation is reflexive: every singleton is
/// then CUD, which pins both approximations to the set itself; `ð` still needs the family.
#[derive(Clone, Debug)]
pub struct CudSpace<'a> {
    sys: &'a RelationalSystem,
    family: Option<GranuleFamily>,
    minimal_at: Vec<Vec<ElementSet>>,
    cap: usize,
}

impl<'a> CudSpace<'a> {
    pub fn new(sys: &'a RelationalSystem, cap: usize) -> Result<Self> {
        let family = match cud_family(sys, cap) {
            Ok(f) => Some(f),
            Err(e @ Error::CapExceeded { .. }) => {
                if sys.is_reflexive() {
                    None
                } else {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        };
        let minimal_at = match &family {
            Some(f) => sys.elements().map(|x| f.minimal_containing(x)).collect(),
            None => sys
                .elements()
                .map(|x| vec![ElementSet::singleton(sys.len(), x)])
                .collect(),
        };
        Ok(CudSpace {
            sys,
            family,
            minimal_at,
            cap,
        })
    }

    pub fn system(&self) -> &RelationalSystem {
        self.sys
    }

    fn family(&self) -> Result<&GranuleFamily> {
        self.family.as_ref().ok_or(Error::CapExceeded {
            size: self.sys.len(),
            cap: self.cap,
        })
    }

    pub fn granules(&self) -> Result<&GranuleFamily> {
        self.family()
    }

    /// Inclusion-minimal CUD sets containing `x`.
    pub fn minimal_granules(&self, x: usize) -> &[ElementSet] {
        &self.minimal_at[x]
    }

    /// Minimal CUD superset of `a`: smallest cardinality, then lexicographically least.
    pub fn eth(&self, a: &ElementSet) -> Result<ElementSet> {
        self.family()?
            .members()
            .iter()
            .find(|h| a.is_subset(h))
            .cloned()
            .ok_or_else(|| Error::NoCudSuperset(self.sys.format_set(a)))
    }

    pub fn cudas_op(&self, a: &ElementSet, b: &ElementSet, op: CudasOp) -> Result<ElementSet> {
        let fam = self.family()?;
        for x in [a, b] {
            if !fam.contains(x) {
                return Err(Error::NotCud(self.sys.format_set(x)));
            }
        }
        match op {
            CudasOp::Oplus => self.eth(&a.union(b)),
            CudasOp::Odot => self.eth(&a.intersection(b)),
        }
    }

    pub fn lower(&self, a: &ElementSet) -> ElementSet {
        match &self.family {
            Some(f) => f.union_within(a),
            None => a.clone(),
        }
    }

    pub fn upper(&self, a: &ElementSet, mode: UpperMode) -> ElementSet {
        let mut out = self.sys.empty_set();
        match mode {
            UpperMode::Pointwise => {
                for x in a {
                    for h in &self.minimal_at[x] {
                        out.union_with(h);
                    }
                }
            }
            UpperMode::Collection => {
                let hits: Vec<ElementSet> = match &self.family {
                    Some(f) => f.members().iter().filter(|h| h.intersects(a)).cloned().collect(),
                    None => a.iter().map(|x| ElementSet::singleton(self.sys.len(), x)).collect(),
                };
                for h in minimal_sets(hits) {
                    out.union_with(&h);
                }
            }
        }
        out
    }

    pub fn approx(&self, a: &ElementSet, op: CudApprox, mode: UpperMode) -> ElementSet {
        match op {
            CudApprox::Lower => self.lower(a),
            CudApprox::Upper => self.upper(a, mode),
        }
    }

    pub fn tuple(&self, a: &ElementSet, mode: UpperMode) -> RoughTuple {
        RoughTuple::new(self.lower(a), self.upper(a, mode), Flavor::Cud)
    }

    pub fn compare(&self, a: &ElementSet, b: &ElementSet, mode: UpperMode) -> CudComparison {
        let (ta, tb) = (self.tuple(a, mode), self.tuple(b, mode));
        CudComparison {
            cud_subset: ta.lower.is_subset(&tb.lower) && ta.upper.is_subset(&tb.upper),
            cud_equal: ta.roughly_equal(&tb),
        }
    }
}

pub fn eth_closure(sys: &RelationalSystem, a: &ElementSet, cap: usize) -> Result<ElementSet> {
    CudSpace::new(sys, cap)?.eth(a)
}

pub fn cudas_op(sys: &RelationalSystem, a: &ElementSet, b: &ElementSet, op: CudasOp, cap: usize) -> Result<ElementSet> {
    CudSpace::new(sys, cap)?.cudas_op(a, b, op)
}

pub fn approx_cud(sys: &RelationalSystem, a: &ElementSet, op: CudApprox, mode: UpperMode, cap: usize) -> Result<ElementSet> {
    Ok(CudSpace::new(sys, cap)?.approx(a, op, mode))
}

pub fn cud_tuple(sys: &RelationalSystem, a: &ElementSet, mode: UpperMode, cap: usize) -> Result<RoughTuple> {
    Ok(CudSpace::new(sys, cap)?.tuple(a, mode))
}

pub fn compare_cud(sys: &RelationalSystem, a: &ElementSet, b: &ElementSet, mode: UpperMode, cap: usize) -> Result<CudComparison> {
    Ok(CudSpace::new(sys, cap)?.compare(a, b, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn set(sys: &RelationalSystem, s: &str) -> ElementSet {
        sys.set_of(&s.chars().map(|c| c.to_string()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cud_membership() {
        let sys = fixture::relation();
        assert!(is_cud(&sys, &sys.empty_set()));
        assert!(is_cud(&sys, &set(&sys, "cf")));
        assert!(!is_cud(&sys, &set(&sys, "ab")));
    }

    #[test]
    fn fixture_family_matches_printed_list() {
        let sys = fixture::relation();
        let fam = cud_family(&sys, 16).unwrap();
        assert_eq!(fam.len(), 21);
        assert!(fam.contains(&sys.empty_set()));
        for printed in fixture::PRINTED_CUD_FAMILY {
            assert!(fam.contains(&fixture::printed_set(&sys, printed)), "{printed}");
        }
    }

    #[test]
    fn chain_family() {
        let sys = RelationalSystem::build(&["x", "y"], &[("x", "y"), ("y", "y")]).unwrap();
        let fam = cud_family(&sys, 16).unwrap();
        let want = [sys.empty_set(), set(&sys, "y"), set(&sys, "xy")];
        assert_eq!(fam.members(), &want);
    }

    #[test]
    fn eth_on_fixture() {
        let sys = fixture::relation();
        let sp = CudSpace::new(&sys, 16).unwrap();
        assert_eq!(sp.eth(&set(&sys, "ab")).unwrap(), set(&sys, "abc"));
        assert_eq!(sp.eth(&sys.empty_set()).unwrap(), sys.empty_set());
        assert_eq!(sp.eth(&set(&sys, "cf")).unwrap(), set(&sys, "cf"));
    }

    #[test]
    fn eth_without_superset() {
        let sys = RelationalSystem::build(&["x", "y"], &[("x", "x")]).unwrap();
        let sp = CudSpace::new(&sys, 16);
        assert!(sp.is_err() || sp.unwrap().eth(&set(&sys, "y")).is_err());
        let sys = RelationalSystem::build(&["x", "y"], &[("x", "y")]).unwrap();
        let sp = CudSpace::new(&sys, 16).unwrap();
        assert_eq!(sp.eth(&set(&sys, "x")), Err(Error::NoCudSuperset("{x}".into())));
    }

    #[test]
    fn cudas_on_fixture() {
        let sys = fixture::relation();
        let sp = CudSpace::new(&sys, 16).unwrap();
        assert_eq!(sp.cudas_op(&set(&sys, "c"), &set(&sys, "f"), CudasOp::Oplus).unwrap(), set(&sys, "cf"));
        assert_eq!(sp.cudas_op(&set(&sys, "ac"), &set(&sys, "bc"), CudasOp::Odot).unwrap(), set(&sys, "c"));
        let x = set(&sys, "abf");
        assert_eq!(sp.cudas_op(&x, &x, CudasOp::Oplus).unwrap(), x);
        assert!(matches!(
            sp.cudas_op(&set(&sys, "ab"), &x, CudasOp::Oplus),
            Err(Error::NotCud(_))
        ));
    }

    #[test]
    fn approximations_on_fixture() {
        let sys = fixture::relation();
        let sp = CudSpace::new(&sys, 16).unwrap();
        let a = set(&sys, "ebc");
        assert_eq!(sp.lower(&a), set(&sys, "bc"));
        assert_eq!(sp.upper(&a, UpperMode::Pointwise), set(&sys, "bcef"));
        assert_eq!(sp.upper(&a, UpperMode::Collection), set(&sys, "bcef"));
        let s = sys.full_set();
        assert_eq!(sp.upper(&s, UpperMode::Pointwise), s);
        assert_eq!(sp.upper(&s, UpperMode::Collection), set(&sys, "cf"));
    }

    #[test]
    fn tuples_on_fixture() {
        let sys = fixture::relation();
        let sp = CudSpace::new(&sys, 16).unwrap();
        let t = sp.tuple(&set(&sys, "ebc"), UpperMode::Pointwise);
        assert_eq!((t.lower, t.upper, t.boundary), (set(&sys, "bc"), set(&sys, "bcef"), set(&sys, "ef")));
        let e = sp.tuple(&sys.empty_set(), UpperMode::Pointwise);
        assert!(e.lower.is_empty() && e.upper.is_empty() && e.boundary.is_empty());
        let s = sp.tuple(&sys.full_set(), UpperMode::Pointwise);
        assert_eq!((s.lower.clone(), s.upper.clone()), (sys.full_set(), sys.full_set()));
        assert!(s.boundary.is_empty());
    }

    #[test]
    fn comparisons_on_fixture() {
        let sys = fixture::relation();
        let sp = CudSpace::new(&sys, 16).unwrap();
        let (bc, ebc) = (set(&sys, "bc"), set(&sys, "ebc"));
        assert!(sp.compare(&bc, &ebc, UpperMode::Pointwise).cud_subset);
        assert!(sp.compare(&ebc, &ebc, UpperMode::Pointwise).cud_equal);
    }

    #[test]
    fn reflexive_large_universe_uses_singletons() {
        let n = 40;
        let sys = RelationalSystem::numeric(n, (0..n).map(|x| (x, x))).unwrap();
        let sp = CudSpace::new(&sys, 16).unwrap();
        let a = ElementSet::from_ids(n, [3, 7, 30]);
        assert_eq!(sp.lower(&a), a);
        assert_eq!(sp.upper(&a, UpperMode::Pointwise), a);
        assert!(matches!(sp.eth(&a), Err(Error::CapExceeded { .. })));
        let bad = RelationalSystem::numeric(n, []).unwrap();
        assert!(matches!(CudSpace::new(&bad, 16), Err(Error::CapExceeded { .. })));
    }
}
