//! Decision regions: the groupoid product over `A × B`, split by where each product lands.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grpd::{first_violation, Groupoid};
use crate::relsys::RelationalSystem;
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    N,
    O1,
    O2,
    I1,
    I2,
    O,
    /// Products in `U_R(a,b)` outside both `A` and `B`.
    OProse,
}

impl RegionKind {
    pub const ALL: [RegionKind; 7] = [
        RegionKind::N,
        RegionKind::O1,
        RegionKind::O2,
        RegionKind::I1,
        RegionKind::I2,
        RegionKind::O,
        RegionKind::OProse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionKind::N => "n",
            RegionKind::O1 => "o1",
            RegionKind::O2 => "o2",
            RegionKind::I1 => "i1",
            RegionKind::I2 => "i2",
            RegionKind::O => "o",
            RegionKind::OProse => "o_prose",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// A groupoid checked against its relational system.
#[derive(Clone, Copy, Debug)]
pub struct Regions<'a> {
    g: &'a Groupoid,
    sys: &'a RelationalSystem,
}

impl<'a> Regions<'a> {
    pub fn new(g: &'a Groupoid, sys: &'a RelationalSystem) -> Result<Self> {
        if let Some((a, b)) = first_violation(sys, g)? {
            return Err(Error::InconsistentGroupoid {
                a: sys.label(a).to_string(),
                b: sys.label(b).to_string(),
            });
        }
        Ok(Regions { g, sys })
    }

    pub fn region(&self, a_set: &ElementSet, b_set: &ElementSet, kind: RegionKind) -> ElementSet {
        let mut out = ElementSet::empty(self.sys.len());
        for a in a_set {
            for b in b_set {
                let c = self.g.mul(a, b);
                let keep = match kind {
                    RegionKind::N => c == b,
                    _ => {
                        let in_ub = self.sys.related(a, c) && self.sys.related(b, c);
                        in_ub
                            && match kind {
                                RegionKind::O1 => !a_set.contains(c),
                                RegionKind::O2 => !b_set.contains(c),
                                RegionKind::I1 => a_set.contains(c),
                                RegionKind::I2 => b_set.contains(c),
                                RegionKind::OProse => !a_set.contains(c) && !b_set.contains(c),
                                RegionKind::O => unreachable!(),
                                RegionKind::N => unreachable!(),
                            }
                    }
                };
                if keep {
                    out.insert(c);
                }
            }
        }
        out
    }

    fn eval(&self, a_set: &ElementSet, b_set: &ElementSet, kind: RegionKind) -> ElementSet {
        match kind {
            RegionKind::O => self
                .region(a_set, b_set, RegionKind::O1)
                .intersection(&self.region(a_set, b_set, RegionKind::O2)),
            k => self.region(a_set, b_set, k),
        }
    }

    /// Every region kind, in [`RegionKind::ALL`] order.
    pub fn all(&self, a_set: &ElementSet, b_set: &ElementSet) -> Vec<(RegionKind, ElementSet)> {
        RegionKind::ALL
            .into_iter()
            .map(|k| (k, self.eval(a_set, b_set, k)))
            .collect()
    }
}

pub fn region(
    g: &Groupoid,
    sys: &RelationalSystem,
    a: &ElementSet,
    b: &ElementSet,
    kind: RegionKind,
) -> Result<ElementSet> {
    Ok(Regions::new(g, sys)?.eval(a, b, kind))
}
