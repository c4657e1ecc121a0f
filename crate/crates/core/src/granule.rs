use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relsys::MAX_CAP;
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Cud,
    Subgroupoid,
    Other,
}

/// A family of subsets of one universe, kept in canonical order (cardinality, then lexicographic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GranuleFamily {
    universe: usize,
    members: Vec<ElementSet>,
    lookup: HashSet<ElementSet>,
    provenance: Provenance,
}

impl GranuleFamily {
    pub fn new(universe: usize, members: impl IntoIterator<Item = ElementSet>, provenance: Provenance) -> Self {
        let lookup: HashSet<ElementSet> = members.into_iter().collect();
        let mut members: Vec<ElementSet> = lookup.iter().cloned().collect();
        members.sort_by(|a, b| a.canonical_cmp(b));
        GranuleFamily {
            universe,
            members,
            lookup,
            provenance,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn members(&self) -> &[ElementSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &ElementSet) -> bool {
        self.lookup.contains(set)
    }

    /// Union of the members contained in `a`.
    pub fn union_within(&self, a: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.universe);
        for m in self.members.iter().filter(|m| m.is_subset(a)) {
            out.union_with(m);
        }
        out
    }

    /// Inclusion-minimal members among those accepted by `keep`.
    pub fn minimal_where(&self, keep: impl Fn(&ElementSet) -> bool) -> Vec<ElementSet> {
        minimal_sets(self.members.iter().filter(|m| keep(m)).cloned().collect())
    }

    pub fn minimal_members(&self) -> Vec<ElementSet> {
        self.minimal_where(|_| true)
    }

    /// Inclusion-minimal members containing `x`.
    pub fn minimal_containing(&self, x: ElementId) -> Vec<ElementSet> {
        self.minimal_where(|m| m.contains(x))
    }
}

/// Inclusion-minimal elements of a collection; output keeps canonical order.
pub fn minimal_sets(mut sets: Vec<ElementSet>) -> Vec<ElementSet> {
    sets.sort_by(|a, b| a.canonical_cmp(b));
    sets.dedup();
    let mut out: Vec<ElementSet> = Vec::new();
    // Canonical order lists every proper subset before its supersets.
    for s in sets {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out
}

pub(crate) fn ensure_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap.min(MAX_CAP) {
        Err(Error::CapExceeded {
            size,
            cap: cap.min(MAX_CAP),
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ids: &[usize]) -> ElementSet {
        ElementSet::from_ids(4, ids.iter().copied())
    }

    #[test]
    fn minimal_queries() {
        let fam = GranuleFamily::new(4, [s(&[0, 1]), s(&[1]), s(&[2, 3]), s(&[0, 1, 2, 3])], Provenance::Other);
        assert_eq!(fam.members()[0], s(&[1]));
        assert_eq!(fam.minimal_members(), vec![s(&[1]), s(&[2, 3])]);
        assert_eq!(fam.minimal_containing(0), vec![s(&[0, 1])]);
        assert_eq!(fam.union_within(&s(&[0, 1, 2])), s(&[0, 1]));
        assert!(fam.contains(&s(&[2, 3])));
    }

    #[test]
    fn cap_guard() {
        assert!(ensure_cap(16, 16).is_ok());
        assert_eq!(ensure_cap(17, 16), Err(Error::CapExceeded { size: 17, cap: 16 }));
        assert!(ensure_cap(40, 100).is_err());
    }
}
