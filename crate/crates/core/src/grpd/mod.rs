//! Groupoids over a finite universe: Cayley tables built from relations, the relations they
//! induce, generated subgroupoids and the lattice of all subgroupoids.

mod laws;
mod pseudo;

pub use laws::{check_laws, law, law_ids, Law, LawReport, LawVerdict, Term};
pub use pseudo::{pseudo_joins, PseudoJoinMode};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::granule::{ensure_cap, GranuleFamily, Provenance};
use crate::relsys::RelationalSystem;
use crate::set::{mask_bits, ElementId, ElementSet};

/// A total binary operation on `0..n`, stored row-major: `table[a * n + b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    labels: Vec<String>,
    table: Vec<ElementId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChoiceMode {
    MinIndex,
    MaxIndex,
    /// Draws with ChaCha8 seeded by `seed`; index = `next_u64() % candidates`.
    SeededRandom(u64),
    /// A full Cayley table whose off-relation cells are taken as the choices.
    Explicit(Vec<ElementId>),
}

/// How `a·b` is picked from the candidates when `¬Rab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceStrategy {
    pub mode: ChoiceMode,
    /// Restrict candidates to pseudo-joins and make the pick a function of `U_R(a,b)`.
    pub pi_constrained: bool,
    pub pseudo_joins: PseudoJoinMode,
}

impl ChoiceStrategy {
    pub fn new(mode: ChoiceMode) -> Self {
        ChoiceStrategy {
            mode,
            pi_constrained: false,
            pseudo_joins: PseudoJoinMode::Minimal,
        }
    }

    pub fn pi(mode: ChoiceMode) -> Self {
        ChoiceStrategy {
            pi_constrained: true,
            ..Self::new(mode)
        }
    }

    pub fn explicit(g: &Groupoid) -> Self {
        Self::new(ChoiceMode::Explicit(g.table.clone()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InducedKind {
    /// `{(a,b) : ab = b}`
    R,
    /// `{(a,ab), (b,ab)}`
    Rstar,
}

impl Groupoid {
    pub fn from_table(labels: Vec<String>, table: Vec<ElementId>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "Cayley table has {} cells, expected {}",
                table.len(),
                n * n
            )));
        }
        if let Some(&bad) = table.iter().find(|&&c| c >= n) {
            return Err(Error::InvalidElement(bad));
        }
        Ok(Groupoid { labels, table })
    }

    /// Builds from a function on ids.
    pub fn from_fn(labels: Vec<String>, f: impl Fn(ElementId, ElementId) -> ElementId) -> Result<Self> {
        let n = labels.len();
        let table = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::from_table(labels, table)
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

    pub fn table(&self) -> &[ElementId] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.labels.len() + b]
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// Smallest subset containing `a` and closed under the operation.
    pub fn generate(&self, a: &ElementSet) -> ElementSet {
        let mut set = a.clone();
        let mut members: Vec<ElementId> = a.iter().collect();
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for j in 0..=i {
                let y = members[j];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if set.insert(p) {
                        members.push(p);
                    }
                }
            }
            i += 1;
        }
        set
    }

    pub fn is_closed(&self, a: &ElementSet) -> bool {
        a.iter().all(|x| a.iter().all(|y| a.contains(self.mul(x, y))))
    }

    fn closed_mask(&self, m: u64) -> bool {
        mask_bits(m).all(|x| mask_bits(m).all(|y| m >> self.mul(x, y) & 1 == 1))
    }

    /// Closure of `closed ∪ {y}` where `closed` is already closed.
    fn extend_mask(&self, closed: u64, y: ElementId) -> u64 {
        let mut set = closed | 1 << y;
        let mut members: Vec<ElementId> = mask_bits(closed).collect();
        let mut i = members.len();
        members.push(y);
        while i < members.len() {
            let x = members[i];
            for j in 0..=i {
                let z = members[j];
                for p in [self.mul(x, z), self.mul(z, x)] {
                    if set >> p & 1 == 0 {
                        set |= 1 << p;
                        members.push(p);
                    }
                }
            }
            i += 1;
        }
        set
    }

    /// All closed subsets, including `∅` and the universe.
    ///
    /// Grows closed sets by one-point extensions from `∅`; for `n <= 12` the result is
    /// cross-checked against a scan of every subset.
    pub fn subgroupoids(&self, cap: usize) -> Result<GranuleFamily> {
        let n = self.len();
        ensure_cap(n, cap)?;
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue = VecDeque::from([0u64]);
        seen.insert(0);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if x >> y & 1 == 1 {
                    continue;
                }
                let next = self.extend_mask(x, y);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        if n <= 12 {
            let brute: HashSet<u64> = (0u64..1 << n).filter(|&m| self.closed_mask(m)).collect();
            assert_eq!(seen, brute, "closure-seeded enumeration disagrees with the subset scan");
        }
        Ok(GranuleFamily::new(
            n,
            seen.into_iter().map(|m| ElementSet::from_mask(n, m)),
            Provenance::Subgroupoid,
        ))
    }

    /// Closed subsets found by testing every subset.
    pub fn subgroupoids_brute(&self, cap: usize) -> Result<GranuleFamily> {
        let n = self.len();
        ensure_cap(n, cap)?;
        Ok(GranuleFamily::new(
            n,
            (0u64..1 << n)
                .filter(|&m| self.closed_mask(m))
                .map(|m| ElementSet::from_mask(n, m)),
            Provenance::Subgroupoid,
        ))
    }

    pub fn relation_of(&self, kind: InducedKind) -> RelationalSystem {
        let n = self.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                match kind {
                    InducedKind::R => {
                        if ab == b {
                            pairs.push((a, b));
                        }
                    }
                    InducedKind::Rstar => {
                        pairs.push((a, ab));
                        pairs.push((b, ab));
                    }
                }
            }
        }
        RelationalSystem::from_ids(self.labels.clone(), pairs).expect("labels are unique")
    }

    /// Cayley table as CSV: header = column labels (leading corner cell), then one row per element.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("*");
        for l in &self.labels {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
        for a in 0..self.len() {
            out.push_str(&self.labels[a]);
            for b in 0..self.len() {
                let _ = write!(out, ",{}", self.labels[self.mul(a, b)]);
            }
            out.push('\n');
        }
        out
    }

    /// Parses a Cayley CSV. Column and row labels must list the same universe.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows: Vec<Vec<String>> = Vec::new();
        for rec in rdr.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        let header = rows.first().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty Cayley table".into(),
        })?;
        let labels: Vec<String> = header.iter().skip(1).cloned().collect();
        let index: HashMap<&str, ElementId> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != labels.len() {
            return Err(Error::Parse {
                line: 1,
                message: "duplicate column label".into(),
            });
        }
        let n = labels.len();
        let mut table = vec![usize::MAX; n * n];
        let mut seen_rows = ElementSet::empty(n);
        for (line, row) in rows.iter().enumerate().skip(1) {
            let parse = |l: &str| {
                index.get(l).copied().ok_or_else(|| Error::Parse {
                    line: line + 1,
                    message: format!("unknown label `{l}`"),
                })
            };
            if row.len() != n + 1 {
                return Err(Error::Parse {
                    line: line + 1,
                    message: format!("expected {} fields, found {}", n + 1, row.len()),
                });
            }
            let a = parse(&row[0])?;
            if !seen_rows.insert(a) {
                return Err(Error::Parse {
                    line: line + 1,
                    message: format!("duplicate row `{}`", row[0]),
                });
            }
            for b in 0..n {
                table[a * n + b] = parse(&row[b + 1])?;
            }
        }
        if seen_rows.len() != n {
            return Err(Error::Parse {
                line: rows.len(),
                message: "missing rows".into(),
            });
        }
        Self::from_table(labels, table)
    }

    /// Re-reads a table parsed with its own labels into the element order of `sys`.
    pub fn aligned_to(&self, sys: &RelationalSystem) -> Result<Self> {
        if self.len() != sys.len() {
            return Err(Error::UniverseMismatch {
                left: sys.len(),
                right: self.len(),
            });
        }
        let to_sys: Vec<ElementId> = self
            .labels
            .iter()
            .map(|l| sys.id(l))
            .collect::<Result<_>>()?;
        let mut from_sys = vec![0; self.len()];
        for (g, &s) in to_sys.iter().enumerate() {
            from_sys[s] = g;
        }
        Self::from_fn(sys.labels().to_vec(), |a, b| to_sys[self.mul(from_sys[a], from_sys[b])])
    }
}

/// `a·b = a` if `Rab`, else `b`.
pub fn build_order_groupoid(sys: &RelationalSystem) -> Groupoid {
    Groupoid::from_fn(sys.labels().to_vec(), |a, b| if sys.related(a, b) { a } else { b })
        .expect("ids come from the system")
}

/// A member of `B(S)`: `a·b = b` if `Rab`, otherwise a pick from `U_R(a,b)`
/// (from the pseudo-joins, as a function of `U_R(a,b)`, when `pi_constrained`).
pub fn build_updir_groupoid(sys: &RelationalSystem, strategy: &ChoiceStrategy) -> Result<Groupoid> {
    sys.require_up_directed()?;
    let n = sys.len();
    let reach = if strategy.pi_constrained {
        Some(sys.reachability())
    } else {
        None
    };
    if let ChoiceMode::Explicit(t) = &strategy.mode {
        if t.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "explicit table has {} cells, expected {}",
                t.len(),
                n * n
            )));
        }
    }
    let mut rng = match strategy.mode {
        ChoiceMode::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut by_set: HashMap<ElementSet, (ElementId, (ElementId, ElementId))> = HashMap::new();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let cell = &mut table[a * n + b];
            if sys.related(a, b) {
                if let ChoiceMode::Explicit(t) = &strategy.mode {
                    if t[a * n + b] != b {
                        return Err(invalid_choice(sys, a, b, t[a * n + b]));
                    }
                }
                *cell = b;
                continue;
            }
            let ub = sys.ub(a, b);
            if strategy.pi_constrained {
                if let Some(&(v, first)) = by_set.get(&ub) {
                    if let ChoiceMode::Explicit(t) = &strategy.mode {
                        if t[a * n + b] != v {
                            return Err(Error::PiConstraint {
                                a: sys.label(first.0).into(),
                                b: sys.label(first.1).into(),
                                c: sys.label(a).into(),
                                d: sys.label(b).into(),
                            });
                        }
                    }
                    *cell = v;
                    continue;
                }
            }
            let candidates = match &reach {
                Some(reach) => pseudo::pseudo_joins_of(&ub, reach, strategy.pseudo_joins, sys),
                None => ub.clone(),
            };
            let list: Vec<ElementId> = candidates.iter().collect();
            if list.is_empty() {
                return Err(Error::EmptyPseudoJoins {
                    a: sys.label(a).into(),
                    b: sys.label(b).into(),
                });
            }
            let v = match &strategy.mode {
                ChoiceMode::MinIndex => list[0],
                ChoiceMode::MaxIndex => list[list.len() - 1],
                ChoiceMode::SeededRandom(_) => {
                    let r = rng.as_mut().expect("seeded").next_u64();
                    list[(r % list.len() as u64) as usize]
                }
                ChoiceMode::Explicit(t) => {
                    let v = t[a * n + b];
                    if !candidates.contains(v) {
                        return Err(invalid_choice(sys, a, b, v));
                    }
                    v
                }
            };
            if strategy.pi_constrained {
                by_set.insert(ub, (v, (a, b)));
            }
            *cell = v;
        }
    }
    Groupoid::from_table(sys.labels().to_vec(), table)
}

fn invalid_choice(sys: &RelationalSystem, a: ElementId, b: ElementId, v: ElementId) -> Error {
    Error::InvalidChoice {
        a: sys.label(a).into(),
        b: sys.label(b).into(),
        value: sys.labels().get(v).cloned().unwrap_or_else(|| v.to_string()),
    }
}

/// Does every cell obey: `Rab ⇒ ab = b`, otherwise `ab ∈ U_R(a,b)`?
pub fn verify_b_of_s(sys: &RelationalSystem, g: &Groupoid) -> Result<bool> {
    Ok(first_violation(sys, g)?.is_none())
}

pub(crate) fn first_violation(sys: &RelationalSystem, g: &Groupoid) -> Result<Option<(ElementId, ElementId)>> {
    if sys.len() != g.len() {
        return Err(Error::UniverseMismatch {
            left: sys.len(),
            right: g.len(),
        });
    }
    for a in sys.elements() {
        for b in sys.elements() {
            let ab = g.mul(a, b);
            let ok = if sys.related(a, b) {
                ab == b
            } else {
                sys.related(a, ab) && sys.related(b, ab)
            };
            if !ok {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Do equal upper-bound sets of unrelated pairs always receive equal products?
pub fn is_pi_constrained(sys: &RelationalSystem, g: &Groupoid) -> bool {
    let mut seen: HashMap<ElementSet, ElementId> = HashMap::new();
    for a in sys.elements() {
        for b in sys.elements() {
            if sys.related(a, b) {
                continue;
            }
            let v = g.mul(a, b);
            if *seen.entry(sys.ub(a, b)).or_insert(v) != v {
                return false;
            }
        }
    }
    true
}
