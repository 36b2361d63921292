use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use super::{Classify, DerivationReport, NodeRecord, OpRecord, Recovery, WeakGenError};
use crate::coeff::Field;
use crate::half::Half;
use crate::json::{GenJson, JsonCoeff};
use crate::liestruct::{GenIndex, LieData};
use crate::linalg::{SparseVec, SpanTracker};
use crate::pvacore::{extend_bracket, BracketTable, DiffPoly};
use crate::wbracket::WPoly;

pub trait EngineCoeff: Field + JsonCoeff + Classify {}
impl<C: Field + JsonCoeff + Classify> EngineCoeff for C {}

#[derive(Debug, Clone)]
pub(crate) enum Op<C> {
    Seed(String),
    Product { left: usize, right: usize, n: usize },
    Combination(Vec<(usize, C)>),
}

#[derive(Debug, Clone)]
pub(crate) struct Node<C: EngineCoeff> {
    pub op: Op<C>,
    pub rule: &'static str,
    pub elem: Arc<WPoly<C>>,
    pub weight: Half,
    pub linear: SparseVec<GenIndex, C>,
}

/// A requested product together with the generators it is meant to expose.
#[derive(Debug, Clone)]
pub(crate) struct Request {
    pub left: usize,
    pub right: usize,
    pub n: usize,
    pub rule: &'static str,
    pub targets: Vec<GenIndex>,
    /// Block pair a pair product belongs to, 0 otherwise.
    pub tag: usize,
}

/// Derived elements, the span of their linear parts per weight, and one representative
/// per recovered generator.
pub(crate) struct Store<'a, C: EngineCoeff> {
    pub ld: &'a LieData,
    pub nodes: Vec<Node<C>>,
    spans: BTreeMap<Half, SpanTracker<GenIndex, C>>,
    pub reps: BTreeMap<GenIndex, usize>,
    performed: HashSet<(usize, usize, usize)>,
    pub products: usize,
}

impl<'a, C: EngineCoeff> Store<'a, C> {
    pub fn new(ld: &'a LieData) -> Self {
        Store { ld, nodes: Vec::new(), spans: BTreeMap::new(), reps: BTreeMap::new(), performed: HashSet::new(), products: 0 }
    }

    pub fn rep(&self, g: Option<GenIndex>) -> Option<usize> {
        g.and_then(|g| self.reps.get(&g).copied())
    }

    pub fn rep_at(&self, t: Half, i: usize, j: usize) -> Option<usize> {
        self.rep(self.ld.cdata.find(t, i, j))
    }

    pub fn recovered(&self, g: &GenIndex) -> bool {
        self.reps.contains_key(g)
    }

    pub fn complete(&self) -> bool {
        self.ld.cdata.gens.iter().all(|g| self.recovered(g))
    }

    pub fn done(&self, left: usize, right: usize, n: usize) -> bool {
        self.performed.contains(&(left, right, n))
    }

    fn push(&mut self, op: Op<C>, rule: &'static str, elem: WPoly<C>, weight: Half) -> usize {
        let linear = elem.linear_term().into_iter().filter(|(_, c)| !c.is_czero()).collect();
        self.nodes.push(Node { op, rule, elem: Arc::new(elem), weight, linear });
        self.nodes.len() - 1
    }

    /// Adds a seed element; it must be homogeneous of positive weight.
    pub fn seed(&mut self, label: String, elem: WPoly<C>) -> Result<(usize, bool), WeakGenError> {
        let w = match elem.weight_of() {
            Ok(Some(w)) if w > Half::ZERO => w,
            _ => return Err(WeakGenError::ScheduleInapplicable(format!("seed {label} is not homogeneous of positive weight"))),
        };
        let id = self.push(Op::Seed(label), "seed", elem, w);
        let grew = self.absorb(id);
        Ok((id, grew))
    }

    pub fn add_product(&mut self, left: usize, right: usize, n: usize, rule: &'static str, elem: WPoly<C>) -> (usize, bool) {
        self.performed.insert((left, right, n));
        self.products += 1;
        let w = self.nodes[left].weight + self.nodes[right].weight - Half::int(n as i32 + 1);
        let id = self.push(Op::Product { left, right, n }, rule, elem, w);
        let grew = w > Half::ZERO && self.absorb(id);
        (id, grew)
    }

    /// Inserts the linear part of node `id`; returns whether the span grew. New
    /// representatives are built for every generator the larger span now reaches.
    fn absorb(&mut self, id: usize) -> bool {
        let w = self.nodes[id].weight;
        let lin = self.nodes[id].linear.clone();
        let grew = self.spans.entry(w).or_default().insert(id, lin);
        if !grew {
            return false;
        }
        let pending: Vec<GenIndex> = self.ld.cdata.gens.iter().filter(|g| g.t == w && !self.recovered(g)).copied().collect();
        for g in pending {
            let unit = SparseVec::from([(g, C::cone())]);
            let Some(combo) = self.spans[&w].express(&unit) else { continue };
            // the combination has to make sense at k̃ = 1
            if combo.values().any(|c| c.eval_one().is_none()) {
                continue;
            }
            let rep = if combo.len() == 1 && combo.values().next().is_some_and(|c| *c == C::cone()) {
                *combo.keys().next().unwrap()
            } else {
                let mut elem = DiffPoly::zero();
                for (i, c) in &combo {
                    elem.add_scaled(c, &self.nodes[*i].elem);
                }
                self.push(Op::Combination(combo.into_iter().collect()), "combination", elem, w)
            };
            self.reps.insert(g, rep);
        }
        true
    }

    /// Runs the requested products in parallel and absorbs them in request order.
    pub fn run<T: BracketTable<GenIndex, C> + Sync>(&mut self, table: &T, reqs: Vec<Request>) -> Result<Vec<(Request, usize, bool)>, WeakGenError> {
        let mut seen = HashSet::new();
        let reqs: Vec<Request> = reqs
            .into_iter()
            .filter(|r| !self.done(r.left, r.right, r.n) && r.targets.iter().any(|g| !self.recovered(g)) && seen.insert((r.left, r.right, r.n)))
            .collect();
        // one bracket per ordered pair serves every n requested from it
        let pairs: BTreeSet<(usize, usize)> = reqs.iter().map(|r| (r.left, r.right)).collect();
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let nodes = &self.nodes;
        let brackets: Vec<_> = pairs
            .par_iter()
            .map(|&(l, r)| extend_bracket(table, &nodes[l].elem, &nodes[r].elem).map(|b| ((l, r), b)))
            .collect::<Result<_, _>>()?;
        let brackets: BTreeMap<_, _> = brackets.into_iter().collect();
        let mut out = Vec::with_capacity(reqs.len());
        for r in reqs {
            let elem = brackets[&(r.left, r.right)].nth(r.n);
            let (id, grew) = self.add_product(r.left, r.right, r.n, r.rule, elem);
            out.push((r, id, grew));
        }
        Ok(out)
    }

    pub fn report(&self, mode: String, seeds: Vec<String>) -> DerivationReport {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| NodeRecord {
                id,
                rule: n.rule.to_string(),
                op: match &n.op {
                    Op::Seed(l) => OpRecord::Seed { label: l.clone() },
                    Op::Product { left, right, n } => OpRecord::Product { left: *left, right: *right, n: *n },
                    Op::Combination(t) => OpRecord::Combination { terms: t.iter().map(|(i, c)| (*i, c.to_json())).collect() },
                },
                weight: n.weight,
                linear: n.linear.iter().map(|(g, c)| (GenJson::encode(g), c.to_json())).collect(),
                terms: n.elem.len(),
            })
            .collect();
        let recovered = self
            .reps
            .iter()
            .map(|(g, &id)| {
                let genericity = match &self.nodes[id].op {
                    Op::Combination(t) => t.iter().map(|(_, c)| c.genericity()).collect(),
                    _ => vec![self.nodes[id].linear[g].genericity()],
                };
                Recovery { gen: GenJson::encode(g), label: g.to_string(), node: id, genericity }
            })
            .collect();
        let missing: Vec<GenJson> = self.ld.cdata.gens.iter().filter(|g| !self.recovered(g)).map(GenJson::encode).collect();
        DerivationReport {
            spec: self.ld.ctx.spec().to_string(),
            mode,
            ktilde: C::KTILDE.to_string(),
            seeds,
            nodes,
            recovered,
            complete: missing.is_empty(),
            missing,
            products: self.products,
        }
    }
}
