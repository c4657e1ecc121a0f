//! Pi-groupoidal approximations: lower by subgroupoids inside the set, upper by generation,
//! and the anti-lower upper approximation by minimal proper subgroupoid supersets.

use serde::Serialize;

use crate::cud::{Flavor, RoughTuple};
use crate::error::Result;
use crate::granule::{minimal_sets, GranuleFamily};
use crate::grpd::Groupoid;
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PiApprox {
    Lower,
    Upper,
    /// Anti-lower upper approximation.
    AntiLower,
}

/// `(A^{l_π}, Sg(A^{l_π}), A^{u_π})`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PgTuple {
    pub lower: ElementSet,
    pub generated_lower: ElementSet,
    pub upper: ElementSet,
}

impl PgTuple {
    pub fn acpg(&self) -> AcpgPair {
        AcpgPair {
            generated_lower: self.generated_lower.clone(),
            upper: self.upper.clone(),
        }
    }
}

/// `(Sg(A^{l_π}), A^{u_π})`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AcpgPair {
    pub generated_lower: ElementSet,
    pub upper: ElementSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PiComparison {
    pub pg_equal: bool,
    pub acpg_equal: bool,
}

/// A groupoid together with (optionally) its memoized subgroupoid family.
#[derive(Clone, Debug)]
pub struct PiSpace<'a> {
    g: &'a Groupoid,
    su: Option<GranuleFamily>,
}

impl<'a> PiSpace<'a> {
    /// Enumerates the subgroupoid family; fails above the cap.
    pub fn new(g: &'a Groupoid, cap: usize) -> Result<Self> {
        Ok(PiSpace {
            g,
            su: Some(g.subgroupoids(cap)?),
        })
    }

    /// No enumeration: every approximation is computed from generated subgroupoids of points
    /// and one-point extensions.
    pub fn local(g: &'a Groupoid) -> Self {
        PiSpace { g, su: None }
    }

    pub fn groupoid(&self) -> &Groupoid {
        self.g
    }

    pub fn subgroupoids(&self) -> Option<&GranuleFamily> {
        self.su.as_ref()
    }

    pub fn lower(&self, a: &ElementSet) -> ElementSet {
        match &self.su {
            Some(su) => su.union_within(a),
            None => lower_by_points(self.g, a),
        }
    }

    pub fn upper(&self, a: &ElementSet) -> ElementSet {
        self.g.generate(a)
    }

    pub fn anti_lower(&self, a: &ElementSet) -> ElementSet {
        if a.is_full() {
            return a.clone();
        }
        let candidates: Vec<ElementSet> = match &self.su {
            Some(su) => su.members().iter().filter(|h| a.is_proper_subset(h)).cloned().collect(),
            None => {
                if self.g.is_closed(a) {
                    a.complement()
                        .iter()
                        .map(|y| {
                            let mut s = a.clone();
                            s.insert(y);
                            self.g.generate(&s)
                        })
                        .collect()
                } else {
                    vec![self.g.generate(a)]
                }
            }
        };
        let mut out = ElementSet::empty(a.universe_size());
        for h in minimal_sets(candidates) {
            out.union_with(&h);
        }
        out
    }

    pub fn approx(&self, a: &ElementSet, op: PiApprox) -> ElementSet {
        match op {
            PiApprox::Lower => self.lower(a),
            PiApprox::Upper => self.upper(a),
            PiApprox::AntiLower => self.anti_lower(a),
        }
    }

    pub fn pg_tuple(&self, a: &ElementSet) -> PgTuple {
        let lower = self.lower(a);
        let generated_lower = self.g.generate(&lower);
        PgTuple {
            lower,
            generated_lower,
            upper: self.upper(a),
        }
    }

    /// `(A^{l_π}, A^{u_π}, A^{u_π} ∖ A^{l_π})`
    pub fn rough_tuple(&self, a: &ElementSet) -> RoughTuple {
        RoughTuple::new(self.lower(a), self.upper(a), Flavor::Pi)
    }

    pub fn compare(&self, a: &ElementSet, b: &ElementSet) -> PiComparison {
        let (ta, tb) = (self.pg_tuple(a), self.pg_tuple(b));
        PiComparison {
            pg_equal: ta == tb,
            acpg_equal: ta.acpg() == tb.acpg(),
        }
    }
}

/// Union of `Sg({x})` over the points of `a` whose generated subgroupoid stays inside `a`.
pub fn lower_by_points(g: &Groupoid, a: &ElementSet) -> ElementSet {
    let mut out = ElementSet::empty(a.universe_size());
    for x in a {
        if out.contains(x) {
            continue;
        }
        let s = g.generate(&ElementSet::singleton(a.universe_size(), x));
        if s.is_subset(a) {
            out.union_with(&s);
        }
    }
    out
}

pub fn approx_pi(g: &Groupoid, a: &ElementSet, op: PiApprox, cap: usize) -> Result<ElementSet> {
    if op == PiApprox::Upper {
        return Ok(g.generate(a));
    }
    Ok(PiSpace::new(g, cap)?.approx(a, op))
}

pub fn pg_tuple(g: &Groupoid, a: &ElementSet, cap: usize) -> Result<PgTuple> {
    Ok(PiSpace::new(g, cap)?.pg_tuple(a))
}

pub fn compare_pi(g: &Groupoid, a: &ElementSet, b: &ElementSet, cap: usize) -> Result<PiComparison> {
    Ok(PiSpace::new(g, cap)?.compare(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::relsys::RelationalSystem;

    fn set(sys: &RelationalSystem, s: &str) -> ElementSet {
        sys.set_of(&s.chars().map(|c| c.to_string()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn fixture_values() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let sp = PiSpace::new(&g, 16).unwrap();
        let a = set(&sys, "ebc");
        assert_eq!(sp.lower(&a), set(&sys, "c"));
        assert_eq!(sp.upper(&a), sys.full_set());
        assert_eq!(sp.anti_lower(&a), sys.full_set());
        let b = set(&sys, "b");
        assert_eq!(sp.lower(&b), sys.empty_set());
        assert_eq!(sp.upper(&b), set(&sys, "bf"));
        assert_eq!(sp.anti_lower(&b), set(&sys, "bf"));
    }

    #[test]
    fn pg_tuples() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let sp = PiSpace::new(&g, 16).unwrap();
        let t = sp.pg_tuple(&set(&sys, "ebc"));
        assert_eq!(t, PgTuple {
            lower: set(&sys, "c"),
            generated_lower: set(&sys, "c"),
            upper: sys.full_set()
        });
        let e = sp.pg_tuple(&sys.empty_set());
        assert!(e.lower.is_empty() && e.generated_lower.is_empty() && e.upper.is_empty());
    }

    #[test]
    fn comparisons() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let sp = PiSpace::new(&g, 16).unwrap();
        let (b, bf) = (set(&sys, "b"), set(&sys, "bf"));
        let c = sp.compare(&b, &bf);
        // lower components ∅ vs {b,f}; Sg(∅) = ∅, so the pairs differ as well
        assert!(!c.pg_equal);
        assert!(!c.acpg_equal);
        assert_eq!(sp.pg_tuple(&b).acpg().generated_lower, sys.empty_set());
        let same = sp.compare(&b, &b);
        assert!(same.pg_equal && same.acpg_equal);
    }

    #[test]
    fn local_matches_enumerated() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let full = PiSpace::new(&g, 16).unwrap();
        let local = PiSpace::local(&g);
        for m in 0u64..32 {
            let a = ElementSet::from_mask(5, m);
            assert_eq!(full.lower(&a), local.lower(&a), "{}", sys.format_set(&a));
            assert_eq!(full.anti_lower(&a), local.anti_lower(&a), "{}", sys.format_set(&a));
        }
    }
}
