//! Finite relational systems `⟨S, R⟩` and the operations that only need the relation:
//! neighborhoods, upper/lower bound sets, basic approximations, ideals, filters and morphisms.

mod table;
mod text;

pub use table::{derive_pawl_relation, InformationTable};
pub use text::{parse_relation, to_dot, to_relation_text};

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::{ElementId, ElementSet};

/// Default bound on universe size for operations that enumerate the power set.
pub const DEFAULT_CAP: usize = 16;
/// Largest cap accepted anywhere; exhaustive code works on single-word masks.
pub const MAX_CAP: usize = 30;

/// A finite universe with one binary relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalSystem {
    labels: Vec<String>,
    index: HashMap<String, ElementId>,
    /// `succ[x] = {y : Rxy}`
    succ: Vec<ElementSet>,
    /// `pred[x] = {y : Ryx}`
    pred: Vec<ElementSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborhoodKind {
    /// `[x] = {y : Ryx}`
    Direct,
    /// `[x]_i = {y : Rxy}`
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CognitiveKind {
    /// `ν_A(x) = {z : ∃h∈A, Rhz ∧ Rxz}`
    Idc,
    /// `η_A(x) = {z : ∃h∈A, Rhx ∧ Rzx}`
    Dc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSide {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasicApprox {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Ideal,
    Filter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismKind {
    None,
    Morphism,
    Strong,
}

/// Truth values of the first-order conditions on the relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceProfile {
    pub up_directed: bool,
    pub reflexive: bool,
    pub antisymmetric: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

impl RelationalSystem {
    /// Builds a system from labels and labelled pairs. Duplicate pairs collapse.
    pub fn build<S: AsRef<str>>(universe: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = universe.iter().map(|s| s.as_ref().to_string()).collect();
        let mut sys = Self::with_labels(labels)?;
        for (a, b) in pairs {
            let a = sys.id(a.as_ref())?;
            let b = sys.id(b.as_ref())?;
            sys.add_pair(a, b);
        }
        Ok(sys)
    }

    /// Builds a system from labels and id pairs.
    pub fn from_ids(labels: Vec<String>, pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Result<Self> {
        let mut sys = Self::with_labels(labels)?;
        let n = sys.len();
        for (a, b) in pairs {
            if a >= n {
                return Err(Error::InvalidElement(a));
            }
            if b >= n {
                return Err(Error::InvalidElement(b));
            }
            sys.add_pair(a, b);
        }
        Ok(sys)
    }

    /// Universe `0..n` labelled by the decimal ids.
    pub fn numeric(n: usize, pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Result<Self> {
        Self::from_ids((0..n).map(|i| i.to_string()).collect(), pairs)
    }

    fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        Ok(RelationalSystem {
            labels,
            index,
            succ: vec![ElementSet::empty(n); n],
            pred: vec![ElementSet::empty(n); n],
        })
    }

    fn add_pair(&mut self, a: ElementId, b: ElementId) {
        self.succ[a].insert(b);
        self.pred[b].insert(a);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x]
    }

    pub fn id(&self, label: &str) -> Result<ElementId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.len()
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.len())
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// Parses a list of labels into a set.
    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElementSet> {
        let mut s = self.empty_set();
        for l in labels {
            s.insert(self.id(l.as_ref())?);
        }
        Ok(s)
    }

    /// Parses `a,b,c` (blank entries ignored).
    pub fn parse_set(&self, csv: &str) -> Result<ElementSet> {
        let labels: Vec<&str> = csv.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        self.set_of(&labels)
    }

    /// Member labels in canonical order.
    pub fn labels_of(&self, set: &ElementSet) -> Vec<String> {
        set.iter().map(|x| self.labels[x].clone()).collect()
    }

    pub fn format_set(&self, set: &ElementSet) -> String {
        format!("{{{}}}", self.labels_of(set).join(","))
    }

    /// `Rab`
    pub fn related(&self, a: ElementId, b: ElementId) -> bool {
        self.succ[a].contains(b)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.elements()
            .flat_map(move |a| self.succ[a].iter().map(move |b| (a, b)))
    }

    pub fn pair_count(&self) -> usize {
        self.succ.iter().map(ElementSet::len).sum()
    }

    /// `{y : Rxy}`
    pub fn successors(&self, x: ElementId) -> &ElementSet {
        &self.succ[x]
    }

    /// `{y : Ryx}`
    pub fn predecessors(&self, x: ElementId) -> &ElementSet {
        &self.pred[x]
    }

    fn check(&self, x: ElementId) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidElement(x))
        }
    }

    pub fn neighborhood(&self, x: ElementId, kind: NeighborhoodKind) -> Result<ElementSet> {
        self.check(x)?;
        Ok(match kind {
            NeighborhoodKind::Direct => self.pred[x].clone(),
            NeighborhoodKind::Inverse => self.succ[x].clone(),
        })
    }

    /// Distributed cognitive neighborhoods of `x` relative to `a`.
    pub fn dc_neighborhood(&self, a: &ElementSet, x: ElementId, kind: CognitiveKind) -> Result<ElementSet> {
        self.check(x)?;
        let mut out = self.empty_set();
        match kind {
            CognitiveKind::Idc => {
                for h in a {
                    out.union_with(&self.succ[h]);
                }
                out.intersect_with(&self.succ[x]);
            }
            CognitiveKind::Dc => {
                if a.intersects(&self.pred[x]) {
                    out = self.pred[x].clone();
                }
            }
        }
        Ok(out)
    }

    /// `U_R(a,b)` for [`BoundSide::Upper`], `L_R(a,b)` for [`BoundSide::Lower`].
    pub fn upper_bounds(&self, a: ElementId, b: ElementId, side: BoundSide) -> Result<ElementSet> {
        self.check(a)?;
        self.check(b)?;
        Ok(match side {
            BoundSide::Upper => self.ub(a, b),
            BoundSide::Lower => self.pred[a].intersection(&self.pred[b]),
        })
    }

    /// `U_R(a,b)` without bounds checks.
    pub(crate) fn ub(&self, a: ElementId, b: ElementId) -> ElementSet {
        self.succ[a].intersection(&self.succ[b])
    }

    /// First pair (canonical order) with an empty upper-bound set.
    pub fn non_directed_witness(&self) -> Option<(ElementId, ElementId)> {
        for a in self.elements() {
            for b in a..self.len() {
                if self.succ[a].is_disjoint(&self.succ[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_up_directed(&self) -> bool {
        self.non_directed_witness().is_none()
    }

    pub(crate) fn require_up_directed(&self) -> Result<()> {
        match self.non_directed_witness() {
            None => Ok(()),
            Some((a, b)) => Err(Error::NotUpDirected {
                a: self.labels[a].clone(),
                b: self.labels[b].clone(),
            }),
        }
    }

    pub fn is_reflexive(&self) -> bool {
        self.elements().all(|x| self.related(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.related(b, a))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(a, b)| a == b || !self.related(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.elements().all(|a| {
            self.succ[a]
                .iter()
                .all(|b| self.succ[b].is_subset(&self.succ[a]))
        })
    }

    pub fn classify(&self) -> SpaceProfile {
        SpaceProfile {
            up_directed: self.is_up_directed(),
            reflexive: self.is_reflexive(),
            antisymmetric: self.is_antisymmetric(),
            symmetric: self.is_symmetric(),
            transitive: self.is_transitive(),
        }
    }

    /// `A^l = ⋃{[a] : [a] ⊆ A}` and `A^u = ⋃{[a] : [a] ∩ A ≠ ∅}`.
    pub fn approx_basic(&self, a: &ElementSet, op: BasicApprox) -> ElementSet {
        let mut out = self.empty_set();
        for x in self.elements() {
            let nbd = &self.pred[x];
            let take = match op {
                BasicApprox::Lower => nbd.is_subset(a),
                BasicApprox::Upper => nbd.intersects(a),
            };
            if take {
                out.union_with(nbd);
            }
        }
        out
    }

    /// `{b : ∃a,c∈A, Rab ∧ Rcb}`
    pub fn upper_cone(&self, a: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in a {
            for y in a {
                out.union_with(&self.ub(x, y));
            }
        }
        out
    }

    pub fn is_ideal_or_filter(&self, k: &ElementSet, kind: SetKind) -> bool {
        k.iter().all(|a| match kind {
            SetKind::Ideal => self.pred[a].is_subset(k),
            SetKind::Filter => self.succ[a].is_subset(k),
        })
    }

    /// Reflexive-transitive closure as successor sets: `reach[x] = {y : x ≤* y}`.
    pub fn reachability(&self) -> Vec<ElementSet> {
        let n = self.len();
        let mut reach: Vec<ElementSet> = self
            .elements()
            .map(|x| {
                let mut s = self.succ[x].clone();
                s.insert(x);
                s
            })
            .collect();
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = reach[k].clone();
            for r in reach.iter_mut() {
                if r.contains(k) {
                    r.union_with(&row_k);
                }
            }
        }
        reach
    }

    /// A copy extended by a fresh element `top` with `Rx top` for every `x` (including `top`).
    pub fn with_top(&self, top: &str) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.push(top.to_string());
        let t = self.len();
        let pairs: Vec<_> = self
            .pairs()
            .chain((0..=t).map(|x| (x, t)))
            .collect();
        Self::from_ids(labels, pairs)
    }
}

/// Checks `f` (indexed by source ids) as a map from `src` to `dst`.
///
/// Strong means every `Q`-pair `(c, e)` has preimages `a, b` with `f(a) = c`, `f(b) = e`.
pub fn check_morphism(f: &[ElementId], src: &RelationalSystem, dst: &RelationalSystem) -> Result<MorphismKind> {
    if f.len() != src.len() || f.iter().any(|&y| y >= dst.len()) {
        return Err(Error::PartialMap);
    }
    if !src.pairs().all(|(a, b)| dst.related(f[a], f[b])) {
        return Ok(MorphismKind::None);
    }
    let mut image = dst.empty_set();
    for &y in f {
        image.insert(y);
    }
    let strong = dst.pairs().all(|(c, e)| image.contains(c) && image.contains(e));
    Ok(if strong {
        MorphismKind::Strong
    } else {
        MorphismKind::Morphism
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn f() -> RelationalSystem {
        fixture::relation()
    }

    fn set(sys: &RelationalSystem, s: &str) -> ElementSet {
        sys.set_of(&s.chars().map(|c| c.to_string()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn build_errors() {
        let sys = RelationalSystem::build::<&str>(&["x"], &[]).unwrap();
        assert_eq!(sys.pair_count(), 0);
        assert_eq!(
            RelationalSystem::build(&["x"], &[("x", "y")]),
            Err(Error::UnknownLabel("y".into()))
        );
        assert_eq!(
            RelationalSystem::build::<&str>(&["x", "x"], &[]),
            Err(Error::DuplicateLabel("x".into()))
        );
    }

    #[test]
    fn duplicate_pairs_collapse() {
        let sys = RelationalSystem::build(&["x", "y"], &[("x", "y"), ("x", "y")]).unwrap();
        assert_eq!(sys.pair_count(), 1);
    }

    #[test]
    fn neighborhoods_on_fixture() {
        let sys = f();
        let nb = |l: &str| sys.neighborhood(sys.id(l).unwrap(), NeighborhoodKind::Direct).unwrap();
        assert_eq!(nb("b"), set(&sys, "cef"));
        assert_eq!(nb("e"), sys.empty_set());
        // The printed table shows {e,f} for [a]; the pair ca forces c in.
        assert_eq!(nb("a"), set(&sys, "cef"));
        assert_eq!(sys.neighborhood(9, NeighborhoodKind::Direct), Err(Error::InvalidElement(9)));
    }

    #[test]
    fn cognitive_neighborhoods() {
        let sys = f();
        for x in sys.elements() {
            assert!(sys.dc_neighborhood(&sys.empty_set(), x, CognitiveKind::Idc).unwrap().is_empty());
            let all = sys.dc_neighborhood(&sys.full_set(), x, CognitiveKind::Idc).unwrap();
            assert!(all.is_subset(sys.successors(x)));
            let dc = sys.dc_neighborhood(&sys.full_set(), x, CognitiveKind::Dc).unwrap();
            assert!(dc.is_subset(sys.predecessors(x)));
        }
        let e = sys.id("e").unwrap();
        assert_eq!(
            sys.dc_neighborhood(&set(&sys, "a"), e, CognitiveKind::Idc).unwrap(),
            set(&sys, "f")
        );
    }

    #[test]
    fn upper_bounds_on_fixture() {
        let sys = f();
        let ub = |a: &str, b: &str| {
            sys.upper_bounds(sys.id(a).unwrap(), sys.id(b).unwrap(), BoundSide::Upper)
                .unwrap()
        };
        assert_eq!(ub("a", "b"), set(&sys, "cf"));
        assert_eq!(ub("b", "c"), set(&sys, "cf"));
        assert_eq!(ub("c", "e"), set(&sys, "abf"));
    }

    #[test]
    fn numeric_example_upper_bounds() {
        let sys = fixture::numeric_example();
        let one = sys.id("1").unwrap();
        let two = sys.id("2").unwrap();
        let u = sys.upper_bounds(one, two, BoundSide::Upper).unwrap();
        // triples 151 and 251 put 1 among the common successors
        assert_eq!(sys.labels_of(&u), vec!["1", "3", "4", "5"]);
        assert!(sys.is_up_directed());
    }

    #[test]
    fn classify_fixture_and_identity() {
        let p = f().classify();
        assert!(p.up_directed);
        assert!(!p.reflexive);
        assert!(!p.antisymmetric);
        assert!(!p.transitive);
        assert!(!p.symmetric);

        let id = RelationalSystem::build(&["x", "y"], &[("x", "x"), ("y", "y")]).unwrap();
        assert_eq!(
            id.classify(),
            SpaceProfile {
                up_directed: false,
                reflexive: true,
                antisymmetric: true,
                symmetric: true,
                transitive: true
            }
        );
    }

    #[test]
    fn basic_approximations_on_fixture() {
        let sys = f();
        let a = set(&sys, "ebc");
        assert_eq!(sys.approx_basic(&a, BasicApprox::Lower), sys.empty_set());
        assert_eq!(sys.approx_basic(&a, BasicApprox::Upper), sys.full_set());
        assert_eq!(sys.approx_basic(&sys.empty_set(), BasicApprox::Lower), sys.empty_set());
    }

    #[test]
    fn ideals_and_filters() {
        let sys = f();
        assert!(sys.is_ideal_or_filter(&sys.empty_set(), SetKind::Ideal));
        assert!(sys.is_ideal_or_filter(&sys.full_set(), SetKind::Filter));
        assert!(!sys.is_ideal_or_filter(&set(&sys, "abc"), SetKind::Ideal));
    }

    #[test]
    fn morphisms() {
        let sys = f();
        let id: Vec<_> = sys.elements().collect();
        assert_eq!(check_morphism(&id, &sys, &sys), Ok(MorphismKind::Strong));
        let c = sys.id("c").unwrap();
        assert_eq!(check_morphism(&[c; 5], &sys, &sys), Ok(MorphismKind::Morphism));
        let (e, fid) = (sys.id("e").unwrap(), sys.id("f").unwrap());
        let mut swap = id.clone();
        swap.swap(e, fid);
        assert_eq!(check_morphism(&swap, &sys, &sys), Ok(MorphismKind::None));
        assert_eq!(check_morphism(&id[..3], &sys, &sys), Err(Error::PartialMap));
    }

    #[test]
    fn reachability_is_reflexive_transitive() {
        let sys = RelationalSystem::numeric(3, [(0, 1), (1, 2)]).unwrap();
        let r = sys.reachability();
        assert_eq!(r[0], ElementSet::full(3));
        assert_eq!(r[2], ElementSet::singleton(3, 2));
    }

    #[test]
    fn top_augmentation_is_up_directed() {
        let sys = RelationalSystem::numeric(3, [(0, 0)]).unwrap();
        assert!(!sys.is_up_directed());
        let t = sys.with_top("top").unwrap();
        assert!(t.is_up_directed());
        assert_eq!(t.len(), 4);
    }
}
