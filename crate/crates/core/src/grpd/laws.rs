//! Equational laws over a groupoid, checked by exhaustive assignment.
//!
//! Terms are written with single-letter variables, juxtaposition for the product and
//! left binding: `xazx` is `((xa)z)x`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grpd::Groupoid;
use crate::set::ElementId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    fn eval(&self, g: &Groupoid, env: &[ElementId]) -> ElementId {
        match self {
            Term::Var(i) => env[*i],
            Term::Mul(l, r) => g.mul(l.eval(g, env), r.eval(g, env)),
        }
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    vars: &'a mut Vec<char>,
}

impl Parser<'_> {
    fn sequence(&mut self) -> Option<Term> {
        let mut acc: Option<Term> = None;
        while let Some(&c) = self.chars.peek() {
            let t = match c {
                ')' => break,
                '(' => {
                    self.chars.next();
                    let inner = self.sequence()?;
                    if self.chars.next() != Some(')') {
                        return None;
                    }
                    inner
                }
                c if c.is_ascii_alphabetic() => {
                    self.chars.next();
                    let idx = match self.vars.iter().position(|&v| v == c) {
                        Some(i) => i,
                        None => {
                            self.vars.push(c);
                            self.vars.len() - 1
                        }
                    };
                    Term::Var(idx)
                }
                _ => return None,
            };
            acc = Some(match acc {
                None => t,
                Some(l) => Term::Mul(Box::new(l), Box::new(t)),
            });
        }
        acc
    }
}

fn parse_side(src: &str, vars: &mut Vec<char>) -> Term {
    let mut p = Parser {
        chars: src.chars().peekable(),
        vars,
    };
    let t = p.sequence();
    assert!(p.chars.next().is_none(), "unbalanced term `{src}`");
    t.unwrap_or_else(|| panic!("malformed term `{src}`"))
}

#[derive(Clone, Debug)]
enum LawShape {
    /// Conjunction of equations sharing one variable list.
    Equations(Vec<(Term, Term)>),
    /// For each `e`: `(∀a,x)(ex = ea → x = a)` iff `(∀x) xe = e`.
    LeftCancelIffRightNeutral,
}

/// A named law.
#[derive(Clone, Debug)]
pub struct Law {
    pub id: &'static str,
    pub text: &'static str,
    vars: Vec<char>,
    shape: LawShape,
}

impl Law {
    fn equations(id: &'static str, text: &'static str) -> Law {
        let mut vars = Vec::new();
        let eqs = text
            .split(';')
            .map(|eq| {
                let (l, r) = eq.split_once('=').expect("law needs `=`");
                (parse_side(l.trim(), &mut vars), parse_side(r.trim(), &mut vars))
            })
            .collect();
        Law {
            id,
            text,
            vars,
            shape: LawShape::Equations(eqs),
        }
    }

    pub fn variables(&self) -> &[char] {
        &self.vars
    }

    /// Re-evaluates a witness assignment (variable → label). `None` when the assignment does
    /// not bind every variable to a known label, or the law is not equational.
    pub fn holds_at(&self, g: &Groupoid, assignment: &BTreeMap<String, String>) -> Option<bool> {
        let LawShape::Equations(eqs) = &self.shape else {
            return None;
        };
        let env = self
            .vars
            .iter()
            .map(|v| {
                let label = assignment.get(&v.to_string())?;
                g.labels().iter().position(|l| l == label)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(eqs.iter().all(|(l, r)| l.eval(g, &env) == r.eval(g, &env)))
    }

    /// Exhaustive evaluation; the first failing assignment in odometer order is the witness.
    pub fn check(&self, g: &Groupoid) -> LawVerdict {
        let n = g.len();
        match &self.shape {
            LawShape::Equations(eqs) => {
                let k = self.vars.len();
                if n == 0 {
                    return LawVerdict::holds();
                }
                let mut env = vec![0; k];
                loop {
                    if eqs.iter().any(|(l, r)| l.eval(g, &env) != r.eval(g, &env)) {
                        return LawVerdict::fails(
                            self.vars
                                .iter()
                                .zip(&env)
                                .map(|(v, &x)| (v.to_string(), g.labels()[x].clone()))
                                .collect(),
                        );
                    }
                    // odometer, last variable fastest
                    let mut i = k;
                    loop {
                        if i == 0 {
                            return LawVerdict::holds();
                        }
                        i -= 1;
                        env[i] += 1;
                        if env[i] < n {
                            break;
                        }
                        env[i] = 0;
                    }
                }
            }
            LawShape::LeftCancelIffRightNeutral => {
                for e in 0..n {
                    let cancel = (0..n).all(|a| (0..n).all(|x| g.mul(e, x) != g.mul(e, a) || x == a));
                    let neutral = (0..n).all(|x| g.mul(x, e) == e);
                    if cancel != neutral {
                        return LawVerdict::fails(BTreeMap::from([("e".to_string(), g.labels()[e].clone())]));
                    }
                }
                LawVerdict::holds()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawVerdict {
    pub holds: bool,
    /// Variable → element label, for a failing assignment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
}

impl LawVerdict {
    fn holds() -> Self {
        LawVerdict {
            holds: true,
            witness: None,
        }
    }

    fn fails(w: BTreeMap<String, String>) -> Self {
        LawVerdict {
            holds: false,
            witness: Some(w),
        }
    }
}

pub type LawReport = BTreeMap<String, LawVerdict>;

const EQUATIONS: &[(&str, &str)] = &[
    ("E1", "xx=x"),
    ("E2", "x(az)=(xa)(xz)"),
    ("E3", "xax=x"),
    ("E4", "azxauz=auz"),
    ("E5", "u(azxa)z=uaz"),
    ("E0.1", "x(ax)=x"),
    ("E0.2", "x(xa)=xa"),
    ("E0.3", "(xa)a=xa"),
    ("E0.4", "x(xaz)=x(az)"),
    ("E0.5", "(xz)(az)=xz"),
    ("E0.6", "(xa)(zx)=xazx"),
    ("E0.7", "xazxa=xa"),
    ("E0.8", "xazaz=xaz"),
    // The printed list carries a stray `c` on the left; that form is kept under its own id.
    ("E0.9", "xazaxa=xaza"),
    ("E0.9-printed", "xcazaxa=xaza"),
    ("E0.10", "(xazx)(za)=x(za)"),
    ("E0.11", "x(az)a=xaza"),
    ("E0.12", "(xaz)(ax)=(xza)(zx)"),
    ("E0.13", "xazxz=xzaz"),
    ("idempotent", "aa=a"),
    ("absorption", "a(ab)=ab;b(ab)=ab"),
    ("symmetry", "(ab)a=a"),
    ("transitivity", "a((ab)c)=(ab)c"),
    ("associativity", "(ab)c=a(bc)"),
    ("commutativity", "ab=ba"),
    ("antisymmetry", "(ab)a=ab"),
];

/// The quasi-identity closing the consequence list.
pub const LEFT_CANCEL_LAW: &str = "E0.14";

/// Every registered law id, in registry order.
pub fn law_ids() -> Vec<&'static str> {
    let mut ids: Vec<&str> = EQUATIONS.iter().map(|(id, _)| *id).collect();
    let pos = ids.iter().position(|&i| i == "E0.13").expect("registered") + 1;
    ids.insert(pos, LEFT_CANCEL_LAW);
    ids
}

pub fn law(id: &str) -> Result<Law> {
    if id == LEFT_CANCEL_LAW {
        return Ok(Law {
            id: LEFT_CANCEL_LAW,
            text: "(∀a,x)(ex=ea → x=a) ⟺ (∀x) xe=e",
            vars: vec!['e'],
            shape: LawShape::LeftCancelIffRightNeutral,
        });
    }
    EQUATIONS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(i, t)| Law::equations(i, t))
        .ok_or_else(|| Error::UnknownLaw(id.to_string()))
}

pub fn check_laws<S: AsRef<str>>(g: &Groupoid, laws: &[S]) -> Result<LawReport> {
    let mut out = BTreeMap::new();
    for id in laws {
        let l = law(id.as_ref())?;
        out.insert(l.id.to_string(), l.check(g));
    }
    Ok(out)
}
