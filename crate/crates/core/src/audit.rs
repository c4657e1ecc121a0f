//! The claims registry: every approximation, closure and algebra claim, checked by brute force
//! on a given instance and on seeded random up-directed instances.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::acp::{AcpAlgebra, CarrierMode};
use crate::cud::{CudSpace, UpperMode};
use crate::error::Result;
use crate::fixture::{self, ErratumRecord};
use crate::gen;
use crate::grpd::{build_updir_groupoid, check_laws, verify_b_of_s, ChoiceMode, ChoiceStrategy, Groupoid, InducedKind};
use crate::piappr::PiSpace;
use crate::relsys::{BasicApprox, RelationalSystem, DEFAULT_CAP};
use crate::set::{full_mask, ElementSet};
use crate::verdict::{Verdict, Witness, WitnessBuilder, WitnessValue};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TierFilter {
    One,
    Two,
    #[default]
    All,
}

impl TierFilter {
    fn admits(self, tier: u8) -> bool {
        match self {
            TierFilter::One => tier == 1,
            TierFilter::Two => tier == 2,
            TierFilter::All => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClaimStatus {
    Holds,
    Fails { witness: Witness },
    Skipped { reason: String },
}

impl ClaimStatus {
    pub fn holds(&self) -> bool {
        matches!(self, ClaimStatus::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, ClaimStatus::Fails { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub group: String,
    pub tier: u8,
    #[serde(flatten)]
    pub status: ClaimStatus,
    /// Instances the claim was evaluated on.
    pub checked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeviationReport {
    pub instances: usize,
    pub claims: Vec<ClaimOutcome>,
    pub errata: Vec<ErratumRecord>,
}

impl DeviationReport {
    pub fn get(&self, id: &str) -> Option<&ClaimOutcome> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimOutcome> {
        self.claims.iter().filter(|c| c.status.fails())
    }
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub tier: TierFilter,
    pub random_instances: usize,
    pub seed: u64,
    /// Universe sizes of random instances.
    pub min_n: usize,
    pub max_n: usize,
    /// Random instances above this size get no groupoid.
    pub groupoid_max_n: usize,
    pub cap: usize,
    /// Subsets and pairs are enumerated exhaustively up to this size and sampled above it.
    pub exhaustive_n: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            tier: TierFilter::All,
            random_instances: 25,
            seed: 0,
            min_n: 3,
            max_n: 6,
            groupoid_max_n: 6,
            cap: DEFAULT_CAP,
            exhaustive_n: 8,
        }
    }
}

const SAMPLED_SETS: usize = 4096;
const SAMPLED_PAIRS: usize = 1 << 14;
const QUAD_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    L,
    U,
    Lcd,
    UcdPw,
    UcdCol,
    Eth,
    Lpi,
    Upi,
    Ua,
}

/// One instance with memoized operators over subset masks.
struct Ops<'a> {
    sys: &'a RelationalSystem,
    g: Option<&'a Groupoid>,
    n: usize,
    full: u64,
    cud: Option<CudSpace<'a>>,
    pi: Option<PiSpace<'a>>,
    cap: usize,
    sets: Vec<u64>,
    pairs: Vec<(u64, u64)>,
    memo: RefCell<HashMap<(Op, u64), u64>>,
    seed: u64,
}

impl<'a> Ops<'a> {
    fn new(sys: &'a RelationalSystem, g: Option<&'a Groupoid>, cfg: &AuditConfig, seed: u64) -> Self {
        let n = sys.len();
        let full = full_mask(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (sets, pairs) = if n <= cfg.exhaustive_n {
            let sets: Vec<u64> = (0..=full).collect();
            let pairs = sets.iter().flat_map(|&a| sets.iter().map(move |&b| (a, b))).collect();
            (sets, pairs)
        } else {
            let mut sets = vec![0, full];
            sets.extend((0..SAMPLED_SETS).map(|_| rng.gen::<u64>() & full));
            let pairs = (0..SAMPLED_PAIRS)
                .map(|i| {
                    let a = rng.gen::<u64>() & full;
                    let b = rng.gen::<u64>() & full;
                    // every other pair is nested so that monotony claims have premises
                    if i % 2 == 0 {
                        (a, b)
                    } else {
                        (a & b, b)
                    }
                })
                .collect();
            (sets, pairs)
        };
        let cud = if sys.is_up_directed() {
            CudSpace::new(sys, cfg.cap).ok()
        } else {
            None
        };
        let pi = g.and_then(|g| PiSpace::new(g, cfg.cap).ok());
        Ops {
            sys,
            g,
            n,
            full,
            cud,
            pi,
            cap: cfg.cap,
            sets,
            pairs,
            memo: RefCell::new(HashMap::new()),
            seed,
        }
    }

    fn set(&self, m: u64) -> ElementSet {
        ElementSet::from_mask(self.n, m)
    }

    fn op(&self, op: Op, m: u64) -> u64 {
        if let Some(&v) = self.memo.borrow().get(&(op, m)) {
            return v;
        }
        let a = self.set(m);
        let cud = || self.cud.as_ref().expect("claim requires the CUD family");
        let pi = || self.pi.as_ref().expect("claim requires the subgroupoid family");
        let out = match op {
            Op::L => self.sys.approx_basic(&a, BasicApprox::Lower),
            Op::U => self.sys.approx_basic(&a, BasicApprox::Upper),
            Op::Lcd => cud().lower(&a),
            Op::UcdPw => cud().upper(&a, UpperMode::Pointwise),
            Op::UcdCol => cud().upper(&a, UpperMode::Collection),
            Op::Eth => cud().eth(&a).expect("up-directed"),
            Op::Lpi => pi().lower(&a),
            Op::Upi => pi().upper(&a),
            Op::Ua => pi().anti_lower(&a),
        }
        .to_mask();
        self.memo.borrow_mut().insert((op, m), out);
        out
    }

    fn ucd(&self, mode: UpperMode, m: u64) -> u64 {
        match mode {
            UpperMode::Pointwise => self.op(Op::UcdPw, m),
            UpperMode::Collection => self.op(Op::UcdCol, m),
        }
    }

    fn witness(&self) -> WitnessBuilder<'_> {
        WitnessBuilder::for_system(self.sys)
    }

    fn unary(&self, pred: impl Fn(u64) -> bool) -> Verdict {
        match self.sets.iter().find(|&&a| !pred(a)) {
            None => Verdict::Holds,
            Some(&a) => self.witness().set("A", &self.set(a)).fails(),
        }
    }

    fn binary(&self, pred: impl Fn(u64, u64) -> bool) -> Verdict {
        match self.pairs.iter().find(|&&(a, b)| !pred(a, b)) {
            None => Verdict::Holds,
            Some(&(a, b)) => self.witness().set("A", &self.set(a)).set("B", &self.set(b)).fails(),
        }
    }

    /// A constant claim; `values` are reported when it fails.
    fn constant(&self, ok: bool, values: &[(&str, u64)]) -> Verdict {
        if ok {
            return Verdict::Holds;
        }
        values
            .iter()
            .fold(self.witness(), |w, (name, m)| w.set(name, &self.set(*m)))
            .fails()
    }

    fn cud_family(&self) -> Vec<u64> {
        let fam = self.cud.as_ref().and_then(|c| c.granules().ok());
        fam.map(|f| f.members().iter().map(ElementSet::to_mask).collect())
            .unwrap_or_default()
    }

    /// Operands from the CUD family: all pairs, or all quadruples when affordable.
    fn cud_pairs(&self) -> Vec<(u64, u64)> {
        let fam = self.cud_family();
        fam.iter().flat_map(|&a| fam.iter().map(move |&b| (a, b))).collect()
    }

    fn cud_quads(&self, f: impl Fn(u64, u64, u64, u64) -> bool) -> Verdict {
        let fam = self.cud_family();
        let k = fam.len();
        let check = |a: u64, b: u64, c: u64, e: u64| -> Option<Verdict> {
            if f(a, b, c, e) {
                return None;
            }
            let w = self.witness();
            let w = w.set("A", &self.set(a)).set("B", &self.set(b));
            Some(w.set("C", &self.set(c)).set("E", &self.set(e)).fails())
        };
        if k.pow(4) <= QUAD_LIMIT {
            for &a in &fam {
                for &b in &fam {
                    for &c in &fam {
                        for &e in &fam {
                            if let Some(v) = check(a, b, c, e) {
                                return v;
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0xc0de);
            for _ in 0..QUAD_LIMIT / 4 {
                let mut pick = || fam[rng.gen_range(0..k)];
                let (a, b, c, e) = (pick(), pick(), pick(), pick());
                if let Some(v) = check(a, b, c, e) {
                    return v;
                }
            }
        }
        Verdict::Holds
    }
}

fn sub(a: u64, b: u64) -> bool {
    a & !b == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Needs {
    Nothing,
    UpDirected,
    Cud,
    Groupoid,
    Subgroupoids,
}

type CheckFn = Box<dyn Fn(&Ops) -> Verdict + Send + Sync>;

struct Claim {
    id: String,
    tier: u8,
    needs: Needs,
    check: CheckFn,
}

impl Claim {
    fn group(&self) -> &str {
        self.id.split('.').next().unwrap_or(&self.id)
    }
}

fn claim(id: &str, tier: u8, needs: Needs, check: impl Fn(&Ops) -> Verdict + Send + Sync + 'static) -> Claim {
    Claim {
        id: id.to_string(),
        tier,
        needs,
        check: Box::new(check),
    }
}

fn lup_claims() -> Vec<Claim> {
    use Needs::UpDirected as N;
    use Op::{L, U};
    vec![
        claim("lup.l-id0", 1, N, |o| {
            o.unary(|a| {
                let l = o.op(L, a);
                o.op(L, l) == l && sub(l, a)
            })
        }),
        claim("lup.u-wid0", 1, N, |o| o.unary(|a| sub(o.op(U, a), o.op(U, o.op(U, a))))),
        claim("lup.lu-inc", 1, N, |o| {
            o.unary(|a| {
                let l = o.op(L, a);
                sub(l, o.op(U, l)) && sub(o.op(U, l), o.op(U, a))
            })
        }),
        claim("lup.l-mo", 1, N, |o| o.binary(|a, b| !sub(a, b) || sub(o.op(L, a), o.op(L, b)))),
        claim("lup.u-mo", 1, N, |o| o.binary(|a, b| !sub(a, b) || sub(o.op(U, a), o.op(U, b)))),
        claim("lup.bnd0", 1, N, |o| {
            let (ls, us) = (o.op(L, o.full), o.op(U, o.full));
            let (l0, u0) = (o.op(L, 0), o.op(U, 0));
            o.constant(
                ls == us && l0 == 0 && u0 == 0,
                &[("S^l", ls), ("S^u", us), ("∅^l", l0), ("∅^u", u0)],
            )
        }),
        claim("lup.u-union", 1, N, |o| o.binary(|a, b| o.op(U, a | b) == o.op(U, a) | o.op(U, b))),
        claim("lup.l-union", 1, N, |o| o.binary(|a, b| sub(o.op(L, a) | o.op(L, b), o.op(L, a | b)))),
        claim("lup.l-cap", 1, N, |o| o.binary(|a, b| sub(o.op(L, a & b), o.op(L, a) & o.op(L, b)))),
        claim("lup.u-cap", 1, N, |o| o.binary(|a, b| sub(o.op(U, a & b), o.op(U, a) & o.op(U, b)))),
        claim("nbd.nu1", 1, Needs::Nothing, |o| {
            let sys = o.sys;
            for e in sys.elements() {
                for f in sys.elements() {
                    let ub = sys.ub(e, f);
                    for a in sys.elements() {
                        let lhs = sys.related(e, a) && sys.related(f, a);
                        if lhs != ub.contains(a) {
                            let w = o.witness().element("e", e).element("f", f);
                            return w.element("a", a).fails();
                        }
                    }
                }
            }
            Verdict::Holds
        }),
        claim("nbd.upper-cone", 1, N, |o| {
            o.unary(|a| {
                let cone = o.sys.upper_cone(&o.set(a)).to_mask();
                sub(cone, o.op(U, a))
            })
        }),
    ]
}

fn cud_claims() -> Vec<Claim> {
    use Needs::Cud as C;
    use Op::{Eth, Lcd};
    let mut out = vec![
        claim("ccud.inclusion", 1, C, |o| o.unary(|a| sub(a, o.op(Eth, a)))),
        claim("ccud.idempotence", 1, C, |o| {
            o.unary(|a| {
                let e = o.op(Eth, a);
                o.op(Eth, e) == e
            })
        }),
        claim("ccud.bot-top", 1, C, |o| {
            let (b, t) = (o.op(Eth, 0), o.op(Eth, o.full));
            o.constant(b == 0 && t == o.full, &[("ð(∅)", b), ("ð(S)", t)])
        }),
        claim("ccud.cmo", 2, C, |o| {
            o.binary(|a, b| {
                let ea = o.op(Eth, a);
                !(a != b && sub(a, b) && sub(b, ea)) || sub(ea, o.op(Eth, b))
            })
        }),
    ];
    let plus = |o: &Ops, a: u64, b: u64| o.op(Eth, a | b);
    let dot = |o: &Ops, a: u64, b: u64| o.op(Eth, a & b);
    let on_family = |o: &Ops, f: &dyn Fn(u64, u64) -> bool| {
        match o.cud_pairs().into_iter().find(|&(a, b)| !f(a, b)) {
            None => Verdict::Holds,
            Some((a, b)) => o.witness().set("A", &o.set(a)).set("B", &o.set(b)).fails(),
        }
    };
    out.extend([
        claim("cudas.ic-odot", 1, C, move |o| {
            on_family(o, &|a, b| dot(o, a, b) == dot(o, b, a) && dot(o, a, a) == a)
        }),
        claim("cudas.ic-oplus", 1, C, move |o| {
            on_family(o, &|a, b| plus(o, a, b) == plus(o, b, a) && plus(o, a, a) == a)
        }),
        claim("cudas.inclusion+", 1, C, move |o| on_family(o, &|a, b| sub(a, plus(o, a, b)))),
        claim("cudas.inclusiondot", 2, C, move |o| on_family(o, &|a, b| sub(dot(o, a, b), a))),
        claim("cudas.cmo-plus", 2, C, move |o| {
            o.cud_quads(|a, b, c, e| {
                let ac = plus(o, a, c);
                !(sub(a, b) && sub(c, e) && sub(b | e, ac)) || sub(ac, plus(o, b, e))
            })
        }),
        claim("cudas.cmo-dot", 2, C, move |o| {
            o.cud_quads(|a, b, c, e| {
                let ac = dot(o, a, c);
                !(sub(a, b) && sub(c, e) && sub(b & e, ac)) || sub(ac, dot(o, b, e))
            })
        }),
    ]);
    for (prefix, mode, tier) in [
        ("cdbas.", UpperMode::Pointwise, 1),
        ("cdbas.collection.", UpperMode::Collection, 2),
    ] {
        let id = |name: &str| format!("{prefix}{name}");
        let u = move |o: &Ops, a: u64| o.ucd(mode, a);
        let mut add = |name: &str, f: Box<dyn Fn(&Ops) -> Verdict + Send + Sync>| {
            out.push(Claim {
                id: id(name),
                tier,
                needs: C,
                check: f,
            })
        };
        add(
            "cdInclusion",
            Box::new(move |o| o.unary(|a| sub(o.op(Lcd, a), a) && sub(a, u(o, a)))),
        );
        add("ucdpId", Box::new(move |o| o.unary(|a| sub(u(o, a), u(o, u(o, a))))));
        add(
            "lucdpId",
            Box::new(move |o| o.unary(|a| sub(o.op(Lcd, a), u(o, o.op(Lcd, a))))),
        );
        add("ulcdId", Box::new(move |o| o.unary(|a| o.op(Lcd, u(o, a)) == u(o, a))));
        add(
            "ucdmo",
            Box::new(move |o| o.binary(|a, b| !sub(a, b) || sub(u(o, a), u(o, b)))),
        );
        add(
            "ucdsadd",
            Box::new(move |o| o.binary(|a, b| sub(u(o, a) | u(o, b), u(o, a | b)))),
        );
        add(
            "ucdsmul",
            Box::new(move |o| o.binary(|a, b| sub(u(o, a & b), u(o, a) & u(o, b)))),
        );
        add(
            "cdbottom",
            Box::new(move |o| {
                let (l, up) = (o.op(Lcd, 0), u(o, 0));
                o.constant(l == 0 && up == 0, &[("∅^lcd", l), ("∅^ucd", up)])
            }),
        );
        add(
            "cdtop",
            Box::new(move |o| {
                let (l, up) = (o.op(Lcd, o.full), u(o, o.full));
                o.constant(l == o.full && up == o.full, &[("S^lcd", l), ("S^ucd", up)])
            }),
        );
        if mode == UpperMode::Pointwise {
            add(
                "lcdId",
                Box::new(|o| {
                    o.unary(|a| {
                        let l = o.op(Lcd, a);
                        o.op(Lcd, l) == l
                    })
                }),
            );
            add(
                "lcdmo",
                Box::new(|o| o.binary(|a, b| !sub(a, b) || sub(o.op(Lcd, a), o.op(Lcd, b)))),
            );
            add(
                "lcdsadd",
                Box::new(|o| o.binary(|a, b| sub(o.op(Lcd, a) | o.op(Lcd, b), o.op(Lcd, a | b)))),
            );
            add(
                "lcdsmul",
                Box::new(|o| o.binary(|a, b| sub(o.op(Lcd, a & b), o.op(Lcd, a) & o.op(Lcd, b)))),
            );
        }
    }
    out
}

fn groupoid_claims() -> Vec<Claim> {
    use Needs::Groupoid as G;
    let law = |g: &Groupoid, id: &str| check_laws(g, &[id]).expect("registered law")[id].holds;
    let same = |a: &RelationalSystem, b: &RelationalSystem| a.pairs().eq(b.pairs());
    let text = |o: &Ops, k: &str, v: String| o.witness().text(k, v).fails();
    vec![
        claim("grpd.b-of-s", 1, G, |o| {
            let g = o.g.expect("groupoid");
            match verify_b_of_s(o.sys, g) {
                Ok(true) => Verdict::Holds,
                _ => o.witness().text("groupoid", compact_table(g)).fails(),
            }
        }),
        claim("grpd.round-trip", 1, G, move |o| {
            let r = o.g.expect("groupoid").relation_of(InducedKind::R);
            if same(&r, o.sys) {
                Verdict::Holds
            } else {
                text(o, "relation_of", compact_relation(&r))
            }
        }),
        claim("grpd.rstar-up-directed", 1, G, move |o| {
            let r = o.g.expect("groupoid").relation_of(InducedKind::Rstar);
            match r.non_directed_witness() {
                None => Verdict::Holds,
                Some((a, b)) => o.witness().element("a", a).element("b", b).fails(),
            }
        }),
        claim("grpd.reflexive-iff-idempotent", 1, G, move |o| {
            let (r, l) = (o.sys.is_reflexive(), law(o.g.expect("groupoid"), "idempotent"));
            if r == l {
                Verdict::Holds
            } else {
                text(o, "reflexive/aa=a", format!("{r}/{l}"))
            }
        }),
        claim("grpd.symmetric-iff-law", 1, G, move |o| {
            let (r, l) = (o.sys.is_symmetric(), law(o.g.expect("groupoid"), "symmetry"));
            if r == l {
                Verdict::Holds
            } else {
                text(o, "symmetric/(ab)a=a", format!("{r}/{l}"))
            }
        }),
        claim("grpd.associative-transitive", 1, G, move |o| {
            let g = o.g.expect("groupoid");
            if !law(g, "associativity") || g.relation_of(InducedKind::R).is_transitive() {
                Verdict::Holds
            } else {
                text(o, "groupoid", compact_table(g))
            }
        }),
        claim("grpd.commutative-antisymmetric", 1, G, move |o| {
            let g = o.g.expect("groupoid");
            let premise = law(g, "commutativity") || law(g, "antisymmetry");
            if !premise || g.relation_of(InducedKind::R).is_antisymmetric() {
                Verdict::Holds
            } else {
                text(o, "groupoid", compact_table(g))
            }
        }),
        claim("grpd.absorption-coincide", 1, G, move |o| {
            let g = o.g.expect("groupoid");
            let (r, rs) = (g.relation_of(InducedKind::R), g.relation_of(InducedKind::Rstar));
            if !law(g, "absorption") || same(&r, &rs) {
                Verdict::Holds
            } else {
                text(o, "groupoid", compact_table(g))
            }
        }),
    ]
}

fn pi_claims() -> Vec<Claim> {
    use Needs::Subgroupoids as P;
    use Op::{Lpi, Ua, Upi};
    let sg = |o: &Ops, m: u64| o.op(Upi, m);
    vec![
        claim("pi9.piInclusion", 1, P, |o| o.unary(|a| sub(o.op(Lpi, a), a) && sub(a, o.op(Upi, a)))),
        claim("pi9.lpiId", 1, P, |o| {
            o.unary(|a| {
                let l = o.op(Lpi, a);
                o.op(Lpi, l) == l
            })
        }),
        claim("pi9.upipId", 1, P, |o| {
            o.unary(|a| {
                let u = o.op(Upi, a);
                o.op(Upi, u) == u
            })
        }),
        claim("pi9.lupipId", 2, P, |o| {
            o.unary(|a| {
                let l = o.op(Lpi, a);
                o.op(Upi, l) == l
            })
        }),
        claim("pi9.ulpiId", 1, P, |o| {
            o.unary(|a| {
                let u = o.op(Upi, a);
                o.op(Lpi, u) == u
            })
        }),
        claim("pi9.lpimo", 1, P, |o| o.binary(|a, b| !sub(a, b) || sub(o.op(Lpi, a), o.op(Lpi, b)))),
        claim("pi9.upimo", 1, P, |o| o.binary(|a, b| !sub(a, b) || sub(o.op(Upi, a), o.op(Upi, b)))),
        claim("pi9.lpisadd", 1, P, |o| {
            o.binary(|a, b| sub(o.op(Lpi, a) | o.op(Lpi, b), o.op(Lpi, a | b)))
        }),
        claim("pi9.upisadd", 1, P, |o| {
            o.binary(|a, b| sub(o.op(Upi, a) | o.op(Upi, b), o.op(Upi, a | b)))
        }),
        claim("pi9.lpismul", 1, P, |o| {
            o.binary(|a, b| sub(o.op(Lpi, a & b), o.op(Lpi, a) & o.op(Lpi, b)))
        }),
        claim("pi9.upismul", 1, P, |o| {
            o.binary(|a, b| sub(o.op(Upi, a & b), o.op(Upi, a) & o.op(Upi, b)))
        }),
        claim("pi9.pibottom", 1, P, |o| {
            let (l, u) = (o.op(Lpi, 0), o.op(Upi, 0));
            o.constant(l == 0 && u == 0, &[("∅^lπ", l), ("∅^uπ", u)])
        }),
        claim("pi9.pitop", 1, P, |o| {
            let (l, u) = (o.op(Lpi, o.full), o.op(Upi, o.full));
            o.constant(l == o.full && u == o.full, &[("S^lπ", l), ("S^uπ", u)])
        }),
        claim("sappr.sandwich", 1, P, move |o| {
            o.unary(|a| {
                let l = o.op(Lpi, a);
                let g = sg(o, l);
                sub(l, g) && sub(g, sg(o, a))
            })
        }),
        claim("aup.+piInclusion", 1, P, |o| {
            o.unary(|a| {
                let u = o.op(Upi, a);
                sub(o.op(Lpi, a), a) && sub(a, u) && sub(u, o.op(Ua, a))
            })
        }),
        claim("aup.uapIn", 1, P, |o| o.unary(|a| sub(o.op(Ua, a), o.op(Ua, o.op(Ua, a))))),
        claim("aup.luaIn", 1, P, |o| o.unary(|a| sub(o.op(Lpi, a), o.op(Ua, o.op(Lpi, a))))),
        claim("aup.ulaId", 1, P, |o| {
            o.unary(|a| {
                let u = o.op(Ua, a);
                o.op(Lpi, u) == u
            })
        }),
        claim("aup.uamo", 2, P, |o| o.binary(|a, b| !sub(a, b) || sub(o.op(Ua, a), o.op(Ua, b)))),
        claim("aup.uaadd", 2, P, |o| {
            o.binary(|a, b| sub(o.op(Ua, a) | o.op(Ua, b), o.op(Ua, a | b)))
        }),
        claim("aup.abottom", 1, P, |o| {
            let l = o.op(Lpi, 0);
            o.constant(l == 0, &[("∅^lπ", l)])
        }),
        claim("aup.atop", 1, P, |o| {
            let u = o.op(Ua, o.full);
            o.constant(u == o.full, &[("S^ua", u)])
        }),
        claim("pg.pg-implies-acpg", 1, P, move |o| {
            let tuple = |a: u64| {
                let l = o.op(Lpi, a);
                (l, sg(o, l), o.op(Upi, a))
            };
            o.binary(|a, b| {
                let (ta, tb) = (tuple(a), tuple(b));
                ta != tb || (ta.1, ta.2) == (tb.1, tb.2)
            })
        }),
    ]
}

fn acp_claims() -> Vec<Claim> {
    use Needs::Subgroupoids as P;
    let entry = |mode: CarrierMode, law: &'static str| {
        move |o: &Ops| -> Verdict {
            let alg = AcpAlgebra::new(o.g.expect("groupoid"), o.cap).expect("family enumerated");
            alg.audit(mode).get(law).map(|e| e.verdict.clone()).unwrap_or(Verdict::Holds)
        }
    };
    let mut out: Vec<Claim> = [("well-defined", 1), ("A1", 1), ("A2", 2), ("A3", 1), ("A4", 1), ("A5", 1), ("A6", 2)]
        .into_iter()
        .map(|(law, tier)| claim(&format!("acp.{law}"), tier, P, entry(CarrierMode::Formal, law)))
        .collect();
    out.push(claim("acp.realized-closure", 2, P, entry(CarrierMode::Realized, "realized-closure")));
    out.push(claim("acp.realized-subset", 1, P, |o| {
        let alg = AcpAlgebra::new(o.g.expect("groupoid"), o.cap).expect("family enumerated");
        let formal = alg.carrier(CarrierMode::Formal);
        match alg.carrier(CarrierMode::Realized).into_iter().find(|x| !formal.contains(x)) {
            None => Verdict::Holds,
            Some(x) => o.witness().pair("x", &x.first, &x.second).fails(),
        }
    }));
    out
}

fn registry() -> Vec<Claim> {
    let mut out = lup_claims();
    out.extend(cud_claims());
    out.extend(groupoid_claims());
    out.extend(pi_claims());
    out.extend(acp_claims());
    out
}

/// Every registered claim id with its tier.
pub fn claim_ids() -> Vec<(String, u8)> {
    registry().into_iter().map(|c| (c.id, c.tier)).collect()
}

fn compact_relation(sys: &RelationalSystem) -> String {
    let pairs: Vec<String> = sys
        .pairs()
        .map(|(a, b)| format!("{}{}", sys.label(a), sys.label(b)))
        .collect();
    format!("{{{}}} over {}", pairs.join(","), sys.labels().join(" "))
}

fn compact_table(g: &Groupoid) -> String {
    let n = g.len();
    (0..n)
        .map(|a| (0..n).map(|b| g.labels()[g.mul(a, b)].as_str()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A random instance of the audit: an up-directed system and, when small enough, a member of
/// `B(S)` built with the `i`-th rotating strategy. Replays exactly from `(cfg, i)`.
pub fn random_instance(cfg: &AuditConfig, i: usize) -> (u64, RelationalSystem, Option<Groupoid>) {
    let seed = cfg.seed.wrapping_add(i as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_n..=cfg.max_n.max(cfg.min_n));
    let sys = gen::random_up_directed(&mut rng, n);
    let g = (n <= cfg.groupoid_max_n)
        .then(|| build_updir_groupoid(&sys, &gen::strategy(i, rng.gen())).expect("up-directed"));
    (seed, sys, g)
}

struct Tally {
    status: Option<ClaimStatus>,
    checked: usize,
    skip_reason: Option<String>,
}

/// Runs the registry over the given instance (if any) and `cfg.random_instances` random ones.
///
/// A relation given without a groupoid is paired with its min-index member of `B(S)` when it
/// is up-directed.
pub fn audit_claims(
    sys: Option<&RelationalSystem>,
    g: Option<&Groupoid>,
    cfg: &AuditConfig,
) -> Result<DeviationReport> {
    let claims: Vec<Claim> = registry().into_iter().filter(|c| cfg.tier.admits(c.tier)).collect();
    let mut tallies: Vec<Tally> = claims
        .iter()
        .map(|_| Tally {
            status: None,
            checked: 0,
            skip_reason: None,
        })
        .collect();
    let given_sys = match (sys, g) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(g)) => Some(g.relation_of(InducedKind::R)),
        (None, None) => None,
    };
    let mut instances = 0;
    if let Some(sys) = &given_sys {
        let built = match g {
            Some(_) => None,
            None if sys.is_up_directed() => build_updir_groupoid(sys, &ChoiceStrategy::new(ChoiceMode::MinIndex)).ok(),
            None => None,
        };
        let g = g.or(built.as_ref());
        let extra = vec![("instance".to_string(), WitnessValue::Element("given".into()))];
        run_instance(&claims, &mut tallies, sys, g, cfg, cfg.seed, &extra);
        instances += 1;
    }
    for i in 0..cfg.random_instances {
        let (seed, sys, g) = random_instance(cfg, i);
        let mut extra = vec![
            ("instance".to_string(), WitnessValue::Element(format!("random #{i}"))),
            ("seed".to_string(), WitnessValue::Element(seed.to_string())),
            ("relation".to_string(), WitnessValue::Element(compact_relation(&sys))),
        ];
        if let Some(g) = &g {
            extra.push(("groupoid".to_string(), WitnessValue::Element(compact_table(g))));
        }
        run_instance(&claims, &mut tallies, &sys, g.as_ref(), cfg, seed, &extra);
        instances += 1;
    }
    let outcomes = claims
        .iter()
        .zip(tallies)
        .map(|(c, t)| ClaimOutcome {
            id: c.id.clone(),
            group: c.group().to_string(),
            tier: c.tier,
            status: match (t.status, t.checked) {
                (Some(s), _) => s,
                (None, 0) => ClaimStatus::Skipped {
                    reason: t.skip_reason.unwrap_or_else(|| "no instances".into()),
                },
                (None, _) => ClaimStatus::Holds,
            },
            checked: t.checked,
        })
        .collect();
    Ok(DeviationReport {
        instances,
        claims: outcomes,
        errata: fixture::section6().errata,
    })
}

fn run_instance(
    claims: &[Claim],
    tallies: &mut [Tally],
    sys: &RelationalSystem,
    g: Option<&Groupoid>,
    cfg: &AuditConfig,
    seed: u64,
    extra: &[(String, WitnessValue)],
) {
    let ops = Ops::new(sys, g, cfg, seed);
    let up = sys.is_up_directed();
    for (c, t) in claims.iter().zip(tallies.iter_mut()) {
        if t.status.is_some() {
            continue;
        }
        let missing = match c.needs {
            Needs::Nothing => None,
            Needs::UpDirected => (!up).then_some("relation is not up-directed"),
            Needs::Cud if !up => Some("relation is not up-directed"),
            Needs::Cud => ops.cud.is_none().then_some("CUD family above the cap"),
            Needs::Groupoid if !up => Some("relation is not up-directed"),
            Needs::Groupoid => ops.g.is_none().then_some("no groupoid"),
            Needs::Subgroupoids if !up => Some("relation is not up-directed"),
            Needs::Subgroupoids => ops.pi.is_none().then_some("no groupoid or subgroupoid family above the cap"),
        };
        if let Some(reason) = missing {
            t.skip_reason.get_or_insert_with(|| reason.to_string());
            continue;
        }
        t.checked += 1;
        if let Verdict::Fails { mut witness } = (c.check)(&ops) {
            for (k, v) in extra {
                witness.insert(k.clone(), v.clone());
            }
            t.status = Some(ClaimStatus::Fails { witness });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_report(tier: TierFilter) -> DeviationReport {
        let sys = fixture::relation();
        let g = fixture::table2();
        let cfg = AuditConfig {
            tier,
            random_instances: 0,
            ..AuditConfig::default()
        };
        audit_claims(Some(&sys), Some(&g), &cfg).unwrap()
    }

    #[test]
    fn fixture_tier_one_all_hold() {
        let r = fixture_report(TierFilter::One);
        for c in &r.claims {
            assert!(c.status.holds(), "{} {:?}", c.id, c.status);
        }
    }

    #[test]
    fn fixture_collection_cdtop_fails_with_witness() {
        let r = fixture_report(TierFilter::Two);
        let c = r.get("cdbas.collection.cdtop").unwrap();
        let w = match &c.status {
            ClaimStatus::Fails { witness } => witness,
            s => panic!("{s:?}"),
        };
        assert_eq!(w["S^ucd"], WitnessValue::Set(vec!["c".into(), "f".into()]));
    }

    #[test]
    fn one_element_system_all_hold() {
        let sys = RelationalSystem::numeric(1, [(0, 0)]).unwrap();
        let cfg = AuditConfig {
            random_instances: 0,
            ..AuditConfig::default()
        };
        let r = audit_claims(Some(&sys), None, &cfg).unwrap();
        for c in &r.claims {
            assert!(c.status.holds(), "{} {:?}", c.id, c.status);
        }
    }

    #[test]
    fn not_up_directed_skips() {
        let sys = RelationalSystem::numeric(2, [(0, 0), (1, 1)]).unwrap();
        let cfg = AuditConfig {
            random_instances: 0,
            ..AuditConfig::default()
        };
        let r = audit_claims(Some(&sys), None, &cfg).unwrap();
        assert!(r.get("nbd.nu1").unwrap().status.holds());
        assert!(matches!(r.get("ccud.inclusion").unwrap().status, ClaimStatus::Skipped { .. }));
    }

    #[test]
    fn random_tier_one_holds() {
        let cfg = AuditConfig {
            tier: TierFilter::One,
            random_instances: 40,
            seed: 11,
            ..AuditConfig::default()
        };
        let r = audit_claims(None, None, &cfg).unwrap();
        assert_eq!(r.instances, 40);
        for c in &r.claims {
            assert!(c.status.holds(), "{} {:?}", c.id, c.status);
            assert!(c.checked > 0);
        }
    }

    #[test]
    fn deterministic() {
        let cfg = AuditConfig {
            random_instances: 5,
            seed: 3,
            ..AuditConfig::default()
        };
        let a = audit_claims(None, None, &cfg).unwrap();
        let b = audit_claims(None, None, &cfg).unwrap();
        assert_eq!(a.claims, b.claims);
    }
}
