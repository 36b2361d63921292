//! Weak generating sets: which generators can be rebuilt from a seed set using only
//! n-th products, linear combinations and ∂.
//!
//! A generator q of weight t counts as recovered once the unit vector of ω(q) lies in
//! the span (at k̃ = 1) of the linear parts of derived elements of weight t. Linear parts
//! are the coefficients of the derivative-free single-factor monomials.

mod closure;
pub(crate) mod engine;
mod scripted;

use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, KPoly, RatFunc, Q};
use crate::half::Half;
use crate::json::{CoeffJson, GenJson};
use crate::liestruct::{GenIndex, LieData};
use crate::pvacore::PvaError;

pub use closure::{closure_search, default_caps, Caps, ClosureReport};
pub use engine::EngineCoeff;
pub use scripted::{preset_seeds, scripted_verify};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Big,
    Small,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Big => "big",
            Flavor::Small => "small",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "big" => Ok(Flavor::Big),
            "small" => Ok(Flavor::Small),
            _ => Err(format!("unknown flavor {s:?} (expected big or small)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WeakGenError {
    #[error("no weak generating schedule for {0}")]
    ScheduleInapplicable(String),
    #[error(transparent)]
    Pva(#[from] PvaError),
}

fn need(ld: &LieData, t: Half, i: usize, j: usize) -> Result<GenIndex, WeakGenError> {
    ld.cdata.find(t, i, j).ok_or_else(|| WeakGenError::ScheduleInapplicable(format!("{}: q{}^({},{}) does not exist", ld.ctx.spec(), t, i, j)))
}

fn half_sum(a: u32, b: u32) -> Half {
    Half::from_twice((a + b) as i32)
}

fn half_gap(a: u32, b: u32) -> Half {
    Half::from_twice((a as i32 - b as i32).abs()) + Half::ONE
}

/// The seed generators of the big or small weak generating set.
pub fn weak_set(ld: &LieData, flavor: Flavor) -> Result<Vec<GenIndex>, WeakGenError> {
    let ctx = &ld.ctx;
    let d = ctx.blocks().len();
    if d < 2 {
        return Err(WeakGenError::ScheduleInapplicable(format!("{}: a single Jordan block", ctx.spec())));
    }
    let m = |i: usize| ctx.m(i);
    let equal_top = m(1) == m(2);
    let mut out = Vec::new();
    match flavor {
        Flavor::Big => {
            for i in 1..d {
                let t = half_sum(m(i), m(i + 1));
                out.push(need(ld, t, i, i + 1)?);
                if i == 1 && equal_top {
                    out.push(need(ld, Half::int(m(1) as i32 - 1), 2, 1)?);
                } else {
                    out.push(need(ld, t, i + 1, i)?);
                }
            }
        }
        Flavor::Small => {
            // the diagonal seed sits in the largest block of either parity
            let l = if ctx.spec().is_super() {
                let other = ctx.spec().d1() + 1;
                if m(other) > m(1) {
                    other
                } else {
                    1
                }
            } else {
                1
            };
            if m(l) >= 3 {
                out.push(need(ld, Half::int(3), l, l)?);
            }
            if equal_top {
                out.push(need(ld, Half::int(2), 2, 1)?);
            }
            for i in 1..d {
                let t = half_gap(m(i), m(i + 1));
                out.push(need(ld, t, i, i + 1)?);
                if !(i == 1 && equal_top) {
                    out.push(need(ld, t, i + 1, i)?);
                }
            }
        }
    }
    Ok(out)
}

/// How a k̃-dependent coefficient behaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Genericity {
    IdenticallyZero,
    /// Nonzero at k̃ = 1; `zeros` lists the rational values where it vanishes, when known.
    NonzeroAtOne { zeros: Option<Vec<String>> },
    /// Vanishes at k̃ = 1, so the evaluation point is special.
    VanishingSet { zeros: Option<Vec<String>> },
    /// Has a pole at k̃ = 1.
    PoleAtOne,
}

impl Genericity {
    pub fn usable(&self) -> bool {
        matches!(self, Genericity::NonzeroAtOne { .. })
    }
}

fn roots_strings(p: &KPoly) -> Option<Vec<String>> {
    p.rational_roots().map(|r| r.iter().map(|x| x.to_string()).collect())
}

pub fn coefficient_genericity(c: &KPoly) -> Genericity {
    if c.is_czero() {
        return Genericity::IdenticallyZero;
    }
    let zeros = roots_strings(c);
    if c.eval(&Q::from_integer(1.into())) == Q::from_integer(0.into()) {
        Genericity::VanishingSet { zeros }
    } else {
        Genericity::NonzeroAtOne { zeros }
    }
}

/// Coefficient rings the engine runs over.
pub trait Classify: Coeff {
    /// How k̃ is treated by this ring.
    const KTILDE: &'static str;

    fn genericity(&self) -> Genericity;
}

impl Classify for Q {
    const KTILDE: &'static str = "fixed";

    fn genericity(&self) -> Genericity {
        coefficient_genericity(&KPoly::constant(self.clone()))
    }
}

impl Classify for KPoly {
    const KTILDE: &'static str = "symbolic";

    fn genericity(&self) -> Genericity {
        coefficient_genericity(self)
    }
}

impl Classify for RatFunc {
    const KTILDE: &'static str = "symbolic";

    fn genericity(&self) -> Genericity {
        if self.denom().eval(&Q::from_integer(1.into())) == Q::from_integer(0.into()) {
            return Genericity::PoleAtOne;
        }
        coefficient_genericity(self.numer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OpRecord {
    Seed { label: String },
    Product { left: usize, right: usize, n: usize },
    Combination { terms: Vec<(usize, CoeffJson)> },
}

/// One derived element: how it was built and its linear part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub rule: String,
    pub op: OpRecord,
    pub weight: Half,
    pub linear: Vec<(GenJson, CoeffJson)>,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recovery {
    pub gen: GenJson,
    pub label: String,
    /// Node carrying exactly ω(gen) as its linear part.
    pub node: usize,
    pub genericity: Vec<Genericity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub spec: String,
    pub mode: String,
    pub ktilde: String,
    pub seeds: Vec<String>,
    pub nodes: Vec<NodeRecord>,
    pub recovered: Vec<Recovery>,
    pub missing: Vec<GenJson>,
    pub products: usize,
    pub complete: bool,
}

impl DerivationReport {
    pub fn node(&self, id: usize) -> Option<&NodeRecord> {
        self.nodes.get(id)
    }

    pub fn nodes_by_rule<'a>(&'a self, rule: &'a str) -> impl Iterator<Item = &'a NodeRecord> + 'a {
        self.nodes.iter().filter(move |n| n.rule == rule)
    }

    /// Human-readable expression of how node `id` was built.
    ///
    /// Only earlier nodes are followed, so a decoded report with bad references prints `?`
    /// instead of looping.
    pub fn expression(&self, id: usize) -> String {
        self.expr_below(id, self.nodes.len())
    }

    fn expr_below(&self, id: usize, bound: usize) -> String {
        if id >= bound {
            return "?".into();
        }
        let sub = |i: usize| self.expr_below(i, id);
        match &self.nodes[id].op {
            OpRecord::Seed { label } => label.clone(),
            OpRecord::Product { left, right, n } => format!("({})_({}) ({})", sub(*left), n, sub(*right)),
            OpRecord::Combination { terms } => terms.iter().map(|(i, c)| format!("({c})·[{}]", sub(*i))).collect::<Vec<_>>().join(" + "),
        }
    }
}
