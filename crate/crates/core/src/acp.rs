//! The ACP-rough algebra: pairs of nested subgroupoids with componentwise lattice
//! operations, a negation through complement interiors, and the induced order.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grpd::Groupoid;
use crate::piappr::PiSpace;
use crate::set::ElementSet;
use crate::verdict::{Verdict, WitnessBuilder};

/// `(first, second)` with both components closed and `first ⊆ second`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AcpElement {
    pub first: ElementSet,
    pub second: ElementSet,
}

impl AcpElement {
    pub fn new(first: ElementSet, second: ElementSet) -> Self {
        AcpElement { first, second }
    }

    pub fn bottom(n: usize) -> Self {
        Self::new(ElementSet::empty(n), ElementSet::empty(n))
    }

    pub fn top(n: usize) -> Self {
        Self::new(ElementSet::full(n), ElementSet::full(n))
    }

    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.first
            .canonical_cmp(&other.first)
            .then_with(|| self.second.canonical_cmp(&other.second))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierMode {
    /// All nested pairs of subgroupoids.
    #[default]
    Formal,
    /// `(Sg(A^{l_π}), A^{u_π})` over every subset `A`.
    Realized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcpBinary {
    Join,
    Meet,
}

/// The algebra over one groupoid, with its subgroupoid family enumerated once.
#[derive(Clone, Debug)]
pub struct AcpAlgebra<'a> {
    space: PiSpace<'a>,
}

impl<'a> AcpAlgebra<'a> {
    pub fn new(g: &'a Groupoid, cap: usize) -> Result<Self> {
        Ok(AcpAlgebra {
            space: PiSpace::new(g, cap)?,
        })
    }

    pub fn groupoid(&self) -> &Groupoid {
        self.space.groupoid()
    }

    fn n(&self) -> usize {
        self.groupoid().len()
    }

    pub fn validate(&self, x: &AcpElement) -> Result<()> {
        let g = self.groupoid();
        if x.first.universe_size() != self.n() || x.second.universe_size() != self.n() {
            return Err(Error::InvalidAcpElement("universe size".into()));
        }
        if !g.is_closed(&x.first) || !g.is_closed(&x.second) {
            return Err(Error::InvalidAcpElement("component not closed".into()));
        }
        if !x.first.is_subset(&x.second) {
            return Err(Error::InvalidAcpElement("first component not inside second".into()));
        }
        Ok(())
    }

    /// Canonically sorted carrier.
    pub fn carrier(&self, mode: CarrierMode) -> Vec<AcpElement> {
        let su = self.space.subgroupoids().expect("enumerated in new");
        let mut out: Vec<AcpElement> = match mode {
            CarrierMode::Formal => {
                let m = su.members();
                m.iter()
                    .flat_map(|x| {
                        m.iter()
                            .filter(move |y| x.is_subset(y))
                            .map(move |y| AcpElement::new(x.clone(), y.clone()))
                    })
                    .collect()
            }
            CarrierMode::Realized => {
                let n = self.n();
                let mut seen = std::collections::HashSet::new();
                (0u64..1 << n)
                    .map(|m| {
                        let t = self.space.pg_tuple(&ElementSet::from_mask(n, m));
                        AcpElement::new(t.generated_lower, t.upper)
                    })
                    .filter(|e| seen.insert(e.clone()))
                    .collect()
            }
        };
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    /// `A^♭`: union of the subgroupoids inside the complement of `a`.
    pub fn flat(&self, a: &ElementSet) -> ElementSet {
        self.space.lower(&a.complement())
    }

    /// `X ∗ Y`: union of the subgroupoids inside `X ∩ Y`.
    pub fn star(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        self.space.lower(&a.intersection(b))
    }

    fn sg(&self, a: &ElementSet) -> ElementSet {
        self.groupoid().generate(a)
    }

    pub(crate) fn join_unchecked(&self, x: &AcpElement, y: &AcpElement) -> AcpElement {
        AcpElement::new(self.sg(&x.first.union(&y.first)), self.sg(&x.second.union(&y.second)))
    }

    pub(crate) fn meet_unchecked(&self, x: &AcpElement, y: &AcpElement) -> AcpElement {
        AcpElement::new(
            self.sg(&self.star(&x.first, &y.first)),
            x.second.intersection(&y.second),
        )
    }

    pub(crate) fn neg_unchecked(&self, x: &AcpElement) -> AcpElement {
        AcpElement::new(self.sg(&self.flat(&x.second)), self.sg(&self.flat(&x.first)))
    }

    pub(crate) fn coprod_unchecked(&self, x: &AcpElement) -> AcpElement {
        AcpElement::new(self.sg(&x.first), self.sg(&x.second))
    }

    pub fn op(&self, x: &AcpElement, y: &AcpElement, op: AcpBinary) -> Result<AcpElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(match op {
            AcpBinary::Join => self.join_unchecked(x, y),
            AcpBinary::Meet => self.meet_unchecked(x, y),
        })
    }

    pub fn neg(&self, x: &AcpElement) -> Result<AcpElement> {
        self.validate(x)?;
        Ok(self.neg_unchecked(x))
    }

    pub fn coprod(&self, x: &AcpElement) -> Result<AcpElement> {
        self.validate(x)?;
        Ok(self.coprod_unchecked(x))
    }

    fn pair_witness(&self) -> WitnessBuilder<'_> {
        WitnessBuilder::new(self.groupoid().labels())
    }

    /// Checks A1–A6 and well-definedness over the carrier of the given mode.
    pub fn audit(&self, mode: CarrierMode) -> LawAuditReport {
        let t = Tables::new(self, mode);
        let lattice_tier = if mode == CarrierMode::Formal { 1 } else { 2 };
        let mut entries = vec![
            AuditEntry::new("well-defined", 1, t.well_defined(self)),
            AuditEntry::new("A1", lattice_tier, t.lattice(self)),
        ];
        let (mut a2, mut a4, mut a6) = (Verdict::Holds, Verdict::Holds, Verdict::Holds);
        for &x in &t.carrier {
            let e = t.element(x);
            if a2.holds() && !t.leq(x, t.neg(t.neg(x))) {
                a2 = w("x", &e, self.pair_witness()).fails();
            }
            if a4.holds() && !t.leq(x, t.coprod(x)) {
                a4 = w("x", &e, self.pair_witness()).fails();
            }
            if a6.holds() && !t.leq(t.neg(t.coprod(t.neg(x))), t.coprod(x)) {
                a6 = w("x", &e, self.pair_witness()).fails();
            }
        }
        let (mut a3, mut a5) = (Verdict::Holds, Verdict::Holds);
        'pairs: for &x in &t.carrier {
            for &y in &t.carrier {
                if !t.leq(x, y) {
                    continue;
                }
                let pair = || w("y", &t.element(y), w("x", &t.element(x), self.pair_witness()));
                if a3.holds() && !t.leq(t.coprod(x), t.coprod(y)) {
                    a3 = pair().fails();
                }
                if a5.holds() && !t.leq(t.neg(y), t.neg(x)) {
                    a5 = pair().fails();
                }
                if !a3.holds() && !a5.holds() {
                    break 'pairs;
                }
            }
        }
        entries.push(AuditEntry::new("A2", 2, a2));
        entries.push(AuditEntry::new("A3", 1, a3));
        entries.push(AuditEntry::new("A4", 1, a4));
        entries.push(AuditEntry::new("A5", 1, a5));
        entries.push(AuditEntry::new("A6", 2, a6));
        if mode == CarrierMode::Realized {
            entries.push(AuditEntry::new("realized-closure", 2, t.closure(self)));
        }
        LawAuditReport { mode, entries }
    }
}

/// Carrier elements as pairs of subgroupoid indices, with the operations tabulated on the
/// subgroupoid family.
struct Tables {
    su: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    k: usize,
    /// `Sg(Xi ∪ Xj)`
    join: Vec<usize>,
    /// `Sg(Xi ∗ Xj)`
    star: Vec<usize>,
    /// `Xi ∩ Xj`, if closed
    cap: Vec<Option<usize>>,
    /// `Sg(Xi^♭)`
    flat: Vec<usize>,
    /// `Sg(Xi)`
    sg: Vec<usize>,
    subset: Vec<bool>,
    carrier: Vec<(usize, usize)>,
    members: std::collections::HashSet<(usize, usize)>,
}

type Pair = (usize, usize);

impl Tables {
    fn new(alg: &AcpAlgebra<'_>, mode: CarrierMode) -> Self {
        let su: Vec<ElementSet> = alg.space.subgroupoids().expect("enumerated in new").members().to_vec();
        let index: HashMap<ElementSet, usize> = su.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let k = su.len();
        let idx = |s: &ElementSet| index[s];
        let mut join = vec![0; k * k];
        let mut star = vec![0; k * k];
        let mut cap = vec![None; k * k];
        let mut subset = vec![false; k * k];
        for i in 0..k {
            for j in 0..k {
                join[i * k + j] = idx(&alg.sg(&su[i].union(&su[j])));
                star[i * k + j] = idx(&alg.sg(&alg.star(&su[i], &su[j])));
                cap[i * k + j] = index.get(&su[i].intersection(&su[j])).copied();
                subset[i * k + j] = su[i].is_subset(&su[j]);
            }
        }
        let flat = su.iter().map(|s| idx(&alg.sg(&alg.flat(s)))).collect();
        let sg = su.iter().map(|s| idx(&alg.sg(s))).collect();
        let carrier: Vec<Pair> = alg.carrier(mode).iter().map(|e| (idx(&e.first), idx(&e.second))).collect();
        let members = carrier.iter().copied().collect();
        Tables {
            su,
            index,
            k,
            join,
            star,
            cap,
            flat,
            sg,
            subset,
            carrier,
            members,
        }
    }

    fn element(&self, x: Pair) -> AcpElement {
        AcpElement::new(self.su[x.0].clone(), self.su[x.1].clone())
    }

    fn sub(&self, i: usize, j: usize) -> bool {
        self.subset[i * self.k + j]
    }

    fn leq(&self, x: Pair, y: Pair) -> bool {
        self.sub(x.0, y.0) && self.sub(x.1, y.1)
    }

    fn valid(&self, x: Pair) -> bool {
        self.sub(x.0, x.1)
    }

    fn join(&self, x: Pair, y: Pair) -> Pair {
        (self.join[x.0 * self.k + y.0], self.join[x.1 * self.k + y.1])
    }

    fn meet(&self, x: Pair, y: Pair) -> Option<Pair> {
        Some((self.star[x.0 * self.k + y.0], self.cap[x.1 * self.k + y.1]?))
    }

    fn neg(&self, x: Pair) -> Pair {
        (self.flat[x.1], self.flat[x.0])
    }

    fn coprod(&self, x: Pair) -> Pair {
        (self.sg[x.0], self.sg[x.1])
    }

    fn op_witness(&self, alg: &AcpAlgebra<'_>, op: &str, x: Pair, y: Option<Pair>) -> Verdict {
        let mut b = w("x", &self.element(x), alg.pair_witness().text("op", op));
        if let Some(y) = y {
            b = w("y", &self.element(y), b);
        }
        b.fails()
    }

    fn well_defined(&self, alg: &AcpAlgebra<'_>) -> Verdict {
        for &x in &self.carrier {
            if !self.valid(self.neg(x)) {
                return self.op_witness(alg, "neg", x, None);
            }
            if !self.valid(self.coprod(x)) {
                return self.op_witness(alg, "coprod", x, None);
            }
            for &y in &self.carrier {
                if !self.valid(self.join(x, y)) {
                    return self.op_witness(alg, "join", x, Some(y));
                }
                if !self.meet(x, y).is_some_and(|m| self.valid(m)) {
                    return self.op_witness(alg, "meet", x, Some(y));
                }
            }
        }
        Verdict::Holds
    }

    /// The carrier sits inside the product of the subgroupoid lattice with itself and the
    /// operations act componentwise, so it is a bounded lattice once the subgroupoid tables
    /// give least upper and greatest lower bounds and the carrier is closed under them.
    fn lattice(&self, alg: &AcpAlgebra<'_>) -> Verdict {
        let n = alg.n();
        for (name, e) in [("bottom", AcpElement::bottom(n)), ("top", AcpElement::top(n))] {
            let present = match (self.index.get(&e.first), self.index.get(&e.second)) {
                (Some(&i), Some(&j)) => self.members.contains(&(i, j)),
                _ => false,
            };
            if !present {
                return alg.pair_witness().text("missing", name).fails();
            }
        }
        let k = self.k;
        let set_witness = |law: &str, i: usize, j: usize| {
            alg.pair_witness()
                .text("law", law)
                .set("X", &self.su[i])
                .set("Y", &self.su[j])
                .fails()
        };
        for i in 0..k {
            for j in 0..k {
                let jo = self.join[i * k + j];
                let Some(me) = self.cap[i * k + j] else {
                    return set_witness("meet-closed", i, j);
                };
                if self.star[i * k + j] != me {
                    return set_witness("star-is-meet", i, j);
                }
                if !(self.sub(i, jo) && self.sub(j, jo) && self.sub(me, i) && self.sub(me, j)) {
                    return set_witness("bound", i, j);
                }
                for z in 0..k {
                    if self.sub(i, z) && self.sub(j, z) && !self.sub(jo, z) {
                        return set_witness("least-upper-bound", i, j);
                    }
                    if self.sub(z, i) && self.sub(z, j) && !self.sub(z, me) {
                        return set_witness("greatest-lower-bound", i, j);
                    }
                }
            }
        }
        for &x in &self.carrier {
            for &y in &self.carrier {
                if !self.members.contains(&self.join(x, y)) {
                    return self.op_witness(alg, "join", x, Some(y));
                }
                if !self.meet(x, y).is_some_and(|m| self.members.contains(&m)) {
                    return self.op_witness(alg, "meet", x, Some(y));
                }
            }
        }
        Verdict::Holds
    }

    /// Closure of ⊔, ⊓ and ¬ over the carrier.
    fn closure(&self, alg: &AcpAlgebra<'_>) -> Verdict {
        for &x in &self.carrier {
            if !self.members.contains(&self.neg(x)) {
                return self.op_witness(alg, "neg", x, None);
            }
        }
        self.lattice(alg)
    }
}

fn w<'b>(name: &str, e: &AcpElement, b: WitnessBuilder<'b>) -> WitnessBuilder<'b> {
    b.pair(name, &e.first, &e.second)
}

/// `x₁ ⊆ y₁ ∧ x₂ ⊆ y₂`
pub fn acp_leq(x: &AcpElement, y: &AcpElement) -> bool {
    x.first.is_subset(&y.first) && x.second.is_subset(&y.second)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub law: String,
    pub tier: u8,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl AuditEntry {
    fn new(law: &str, tier: u8, verdict: Verdict) -> Self {
        AuditEntry {
            law: law.to_string(),
            tier,
            verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawAuditReport {
    pub mode: CarrierMode,
    pub entries: Vec<AuditEntry>,
}

impl LawAuditReport {
    pub fn get(&self, law: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.law == law)
    }

    pub fn holds(&self, law: &str) -> bool {
        self.get(law).is_some_and(|e| e.verdict.holds())
    }
}

pub fn acp_carrier(g: &Groupoid, mode: CarrierMode, cap: usize) -> Result<Vec<AcpElement>> {
    Ok(AcpAlgebra::new(g, cap)?.carrier(mode))
}

pub fn audit_acp_laws(g: &Groupoid, mode: CarrierMode, cap: usize) -> Result<LawAuditReport> {
    Ok(AcpAlgebra::new(g, cap)?.audit(mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::relsys::RelationalSystem;

    fn set(sys: &RelationalSystem, s: &str) -> ElementSet {
        sys.set_of(&s.chars().map(|c| c.to_string()).collect::<Vec<_>>()).unwrap()
    }

    fn el(sys: &RelationalSystem, a: &str, b: &str) -> AcpElement {
        AcpElement::new(set(sys, a), set(sys, b))
    }

    #[test]
    fn carriers_on_table2() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let alg = AcpAlgebra::new(&g, 16).unwrap();
        let formal = alg.carrier(CarrierMode::Formal);
        assert!(formal.contains(&el(&sys, "c", "ac")));
        let realized = alg.carrier(CarrierMode::Realized);
        for mode in [&formal, &realized] {
            assert!(mode.contains(&AcpElement::bottom(5)));
            assert!(mode.contains(&AcpElement::top(5)));
        }
        assert!(realized.iter().all(|x| formal.contains(x)));
    }

    #[test]
    fn operations_on_table2() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let alg = AcpAlgebra::new(&g, 16).unwrap();
        let x = el(&sys, "c", "cf");
        let y = el(&sys, "f", "bf");
        assert_eq!(alg.op(&x, &y, AcpBinary::Join).unwrap(), el(&sys, "cf", "bcf"));
        assert_eq!(alg.op(&x, &x, AcpBinary::Meet).unwrap(), x);
        assert_eq!(alg.op(&AcpElement::bottom(5), &x, AcpBinary::Join).unwrap(), x);
        assert!(acp_leq(&x, &el(&sys, "cf", "bcf")));
    }

    #[test]
    fn negation_on_table2() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let alg = AcpAlgebra::new(&g, 16).unwrap();
        // {b,e,f} is not closed (f·e = a); the subgroupoids inside it are {f} and {b,f}.
        assert_eq!(alg.neg(&el(&sys, "c", "ac")).unwrap(), el(&sys, "bf", "bf"));
        assert_eq!(alg.neg(&AcpElement::top(5)).unwrap(), AcpElement::bottom(5));
        assert_eq!(alg.neg(&AcpElement::bottom(5)).unwrap(), AcpElement::top(5));
    }

    #[test]
    fn coproduct_is_identity_on_valid_elements() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let alg = AcpAlgebra::new(&g, 16).unwrap();
        let x = el(&sys, "c", "ac");
        assert_eq!(alg.coprod(&x).unwrap(), x);
        assert_eq!(alg.coprod(&AcpElement::bottom(5)).unwrap(), AcpElement::bottom(5));
    }

    #[test]
    fn invalid_operands_rejected() {
        let sys = fixture::relation();
        let g = fixture::table2();
        let alg = AcpAlgebra::new(&g, 16).unwrap();
        assert!(alg.neg(&el(&sys, "b", "bf")).is_err());
        assert!(alg.neg(&el(&sys, "ac", "c")).is_err());
    }

    #[test]
    fn audit_table2_formal() {
        let g = fixture::table2();
        let r = audit_acp_laws(&g, CarrierMode::Formal, 16).unwrap();
        for law in ["well-defined", "A1", "A3", "A4", "A5"] {
            assert!(r.holds(law), "{law}: {:?}", r.get(law));
        }
        for e in &r.entries {
            if !e.verdict.holds() {
                assert!(e.verdict.witness().is_some_and(|w| !w.is_empty()));
            }
        }
    }

    #[test]
    fn audit_one_element() {
        let g = Groupoid::from_table(vec!["x".into()], vec![0]).unwrap();
        for mode in [CarrierMode::Formal, CarrierMode::Realized] {
            let r = audit_acp_laws(&g, mode, 16).unwrap();
            assert!(r.entries.iter().all(|e| e.verdict.holds()), "{r:?}");
        }
    }
}
