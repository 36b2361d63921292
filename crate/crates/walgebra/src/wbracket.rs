//! The closed λ-bracket between strong generators ω(q_j), summed over chains of
//! extended-basis indices, and the conformal vector.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{q, Coeff, Q};
use crate::half::Half;
use crate::liestruct::{GenIndex, LieData, SuperMatrix};
use crate::pvacore::{extend_bracket, BracketTable, DiffPoly, LambdaPoly, PvaError, TableMap};

pub type WPoly<C> = DiffPoly<GenIndex, C>;
pub type WLambda<C> = LambdaPoly<GenIndex, C>;

/// Rule for the global sign s(a,b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSign {
    /// s(a,b) = 1
    One,
    /// s(a,b) = (−1)^{p(a)p(b)}
    ParityProduct,
    /// s(a,b) = (−1)^{p(a)}
    ParityLeft,
    /// s(a,b) = (−1)^{p(b)}
    ParityRight,
}

/// Rule for the per-node sign s(j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSign {
    /// s(j) = 1
    One,
    /// s(j) = (−1)^{p(j)}
    Parity,
}

/// The signs s(a,b) and s(j) of the chain formula. Both are +1 on even elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignConvention {
    pub pair: PairSign,
    pub node: NodeSign,
}

impl SignConvention {
    /// The convention under which the super test algebras satisfy the PVA axioms and agree
    /// with the reduction oracle (see `dsreduction::survey_sign_conventions`).
    pub const SELECTED: SignConvention = SignConvention { pair: PairSign::ParityProduct, node: NodeSign::Parity };

    pub fn candidates() -> Vec<SignConvention> {
        let mut v = Vec::new();
        for pair in [PairSign::One, PairSign::ParityProduct, PairSign::ParityLeft, PairSign::ParityRight] {
            for node in [NodeSign::One, NodeSign::Parity] {
                v.push(SignConvention { pair, node });
            }
        }
        v
    }

    pub fn s_ab(&self, a: &GenIndex, b: &GenIndex) -> bool {
        match self.pair {
            PairSign::One => false,
            PairSign::ParityProduct => a.odd && b.odd,
            PairSign::ParityLeft => a.odd,
            PairSign::ParityRight => b.odd,
        }
    }

    pub fn s_j(&self, j: &GenIndex) -> bool {
        match self.node {
            NodeSign::One => false,
            NodeSign::Parity => j.odd,
        }
    }
}

impl Default for SignConvention {
    fn default() -> Self {
        Self::SELECTED
    }
}

/// (j, n) with q_j[n] ∈ g_alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainIndex {
    pub alpha: Half,
    pub j: GenIndex,
    pub n: usize,
}

pub type Chain = Vec<ChainIndex>;

/// All (j, n) with 0 ≤ n ≤ 2δ(j), sorted by stratum.
pub fn chain_nodes(ld: &LieData) -> Vec<ChainIndex> {
    let mut v = Vec::new();
    for j in &ld.cdata.gens {
        let dl = ld.cdata.delta[j];
        for n in 0..=ld.cdata.two_delta(j) {
            v.push(ChainIndex { alpha: Half::int(n as i32) - dl, j: *j, n });
        }
    }
    v.sort();
    v
}

/// Chains −t2−1 ≺ (j_0,n_0) ≺ ⋯ ≺ (j_p,n_p) ≺ t1, the empty chain first.
pub fn enumerate_chains(ld: &LieData, t1: Half, t2: Half) -> Vec<Chain> {
    let nodes = chain_nodes(ld);
    let mut out = vec![Vec::new()];
    fn extend(nodes: &[ChainIndex], cur: &mut Chain, t1: Half, out: &mut Vec<Chain>) {
        let last = cur.last().copied();
        for nd in nodes {
            if let Some(l) = last {
                if nd.alpha - l.alpha < Half::ONE {
                    continue;
                }
            }
            if nd.alpha > t1 - Half::ONE {
                continue;
            }
            cur.push(*nd);
            out.push(cur.clone());
            extend(nodes, cur, t1, out);
            cur.pop();
        }
    }
    let start: Vec<ChainIndex> = nodes.iter().copied().filter(|nd| nd.alpha >= -t2).collect();
    let mut cur = Vec::new();
    extend(&start, &mut cur, t1, &mut out);
    out
}

/// A factor `ω(m^♯) − s·k̃(λ+∂)` (or `− s·k̃λ` in last position).
#[derive(Debug, Clone)]
struct ChainFactor<C: Coeff> {
    omega: WPoly<C>,
    scalar: Q,
}

impl<C: Coeff> ChainFactor<C> {
    fn is_zero(&self) -> bool {
        self.omega.is_zero() && num_traits::Zero::is_zero(&self.scalar)
    }

    /// `(ω − s k̃ (λ+∂)) X`.
    fn apply(&self, x: &WLambda<C>) -> WLambda<C> {
        let mut out = x.mul_left(&self.omega);
        if !num_traits::Zero::is_zero(&self.scalar) {
            let k = C::ktilde().scale_q(&self.scalar).negated();
            let mut d = x.shift(1);
            d.add_assign(&x.partial());
            out.add_scaled(&k, &d);
        }
        out
    }

    /// `ω − s k̃ λ`.
    fn as_last(&self) -> WLambda<C> {
        let mut out = WLambda::constant(self.omega.clone());
        out.add_at(1, &WPoly::constant(C::ktilde().scale_q(&self.scalar).negated()));
        out
    }
}

struct Node {
    idx: ChainIndex,
    q_next: SuperMatrix,
    q_star: SuperMatrix,
}

/// Lazily evaluated bracket table of the strong generators.
pub struct MasterTable<C: Coeff> {
    ld: Arc<LieData>,
    conv: SignConvention,
    nodes: Vec<Node>,
    pos: BTreeMap<GenIndex, usize>,
    entries: Vec<OnceLock<Arc<WLambda<C>>>>,
    chains_from: Vec<OnceLock<Arc<Vec<WLambda<C>>>>>,
    mids: Vec<OnceLock<Arc<ChainFactor<C>>>>,
}

impl<C: Coeff> MasterTable<C> {
    pub fn new(ld: Arc<LieData>, conv: SignConvention) -> Self {
        let cd = &ld.cdata;
        let nodes: Vec<Node> = chain_nodes(&ld)
            .into_iter()
            .map(|idx| Node {
                idx,
                q_next: cd.q_n(&idx.j, idx.n + 1).cloned().unwrap_or_else(|| ld.ctx.zero()),
                q_star: cd.qstar_n(&idx.j, idx.n).cloned().expect("node within range"),
            })
            .collect();
        let pos = cd.gens.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let ng = cd.gens.len();
        let nn = nodes.len();
        MasterTable {
            conv,
            nodes,
            pos,
            entries: (0..ng * ng).map(|_| OnceLock::new()).collect(),
            chains_from: (0..ng).map(|_| OnceLock::new()).collect(),
            mids: (0..nn * nn).map(|_| OnceLock::new()).collect(),
            ld,
        }
    }

    pub fn lie(&self) -> &LieData {
        &self.ld
    }

    pub fn convention(&self) -> SignConvention {
        self.conv
    }

    pub fn gens(&self) -> &[GenIndex] {
        &self.ld.cdata.gens
    }

    /// ω(m^♯) as a linear differential polynomial.
    pub fn omega_sharp(&self, m: &SuperMatrix) -> WPoly<C> {
        let mut p = WPoly::zero();
        for (j, c) in self.ld.cdata.sharp_coords(&self.ld.ctx, m) {
            p.add_term(crate::pvacore::Monomial::single(crate::pvacore::Factor::new(j, 0)), C::from_q(&c));
        }
        p
    }

    fn factor(&self, left: &SuperMatrix, right: &SuperMatrix) -> ChainFactor<C> {
        if left.is_zero() || right.is_zero() {
            return ChainFactor { omega: WPoly::zero(), scalar: q(0) };
        }
        let ctx = &self.ld.ctx;
        ChainFactor { omega: self.omega_sharp(&ctx.bracket(left, right)), scalar: ctx.form(left, right) }
    }

    fn mid(&self, v: usize, w: usize) -> Arc<ChainFactor<C>> {
        self.mids[v * self.nodes.len() + w]
            .get_or_init(|| Arc::new(self.factor(&self.nodes[v].q_next, &self.nodes[w].q_star)))
            .clone()
    }

    /// S(v): signed sum over chain tails starting at node v and ending before t1 = δ(a).
    fn tails(&self, a: &GenIndex) -> Arc<Vec<WLambda<C>>> {
        let ia = self.pos[a];
        self.chains_from[ia]
            .get_or_init(|| {
                let am = &self.ld.cdata.basis_f[a];
                let t1 = self.ld.cdata.delta[a];
                let nn = self.nodes.len();
                let mut s: Vec<WLambda<C>> = vec![WLambda::zero(); nn];
                for v in (0..nn).rev() {
                    let node = &self.nodes[v];
                    if node.q_next.is_zero() {
                        continue;
                    }
                    let mut acc = WLambda::zero();
                    if node.idx.alpha <= t1 - Half::ONE {
                        let last = self.factor(&node.q_next, am);
                        if !last.is_zero() {
                            acc.add_assign(&last.as_last());
                        }
                    }
                    for w in v + 1..nn {
                        if self.nodes[w].idx.alpha - node.idx.alpha < Half::ONE || s[w].is_zero() {
                            continue;
                        }
                        let f = self.mid(v, w);
                        if f.is_zero() {
                            continue;
                        }
                        acc.add_assign(&f.apply(&s[w]));
                    }
                    if self.conv.s_j(&node.idx.j) {
                        acc = acc.neg();
                    }
                    s[v] = acc;
                }
                Arc::new(s)
            })
            .clone()
    }

    fn compute(&self, a: &GenIndex, b: &GenIndex) -> WLambda<C> {
        let cd = &self.ld.cdata;
        let ctx = &self.ld.ctx;
        let (am, bm) = (&cd.basis_f[a], &cd.basis_f[b]);
        let mut out = WLambda::constant(self.omega_sharp(&ctx.bracket(am, bm)));
        out.add_at(1, &WPoly::constant(C::ktilde().scale_q(&ctx.form(am, bm))));
        let t2 = cd.delta[b];
        let s = self.tails(a);
        let mut sum = WLambda::zero();
        for (v, node) in self.nodes.iter().enumerate() {
            if node.idx.alpha < -t2 || s[v].is_zero() {
                continue;
            }
            let f = self.factor(bm, &node.q_star);
            if f.is_zero() {
                continue;
            }
            sum.add_assign(&f.apply(&s[v]));
        }
        if self.conv.s_ab(a, b) {
            out.add_assign(&sum);
        } else {
            out = out.minus(&sum);
        }
        out
    }

    /// {ω(a)_λ ω(b)}.
    pub fn bracket(&self, a: &GenIndex, b: &GenIndex) -> Arc<WLambda<C>> {
        let i = self.pos[a] * self.ld.cdata.gens.len() + self.pos[b];
        self.entries[i].get_or_init(|| Arc::new(self.compute(a, b))).clone()
    }

    /// Evaluates every pair, in parallel.
    pub fn fill(&self) {
        let gens = self.gens().to_vec();
        let pairs: Vec<(GenIndex, GenIndex)> = gens.iter().flat_map(|a| gens.iter().map(move |b| (*a, *b))).collect();
        pairs.par_iter().for_each(|(a, b)| {
            self.bracket(a, b);
        });
    }

    /// Snapshot of the full table.
    pub fn to_map(&self) -> TableMap<GenIndex, C> {
        self.fill();
        let mut m = TableMap::new();
        for a in self.gens() {
            for b in self.gens() {
                m.insert(*a, *b, (*self.bracket(a, b)).clone());
            }
        }
        m
    }
}

impl<C: Coeff> BracketTable<GenIndex, C> for MasterTable<C> {
    fn generator_bracket(&self, a: &GenIndex, b: &GenIndex) -> Result<Arc<WLambda<C>>, PvaError> {
        if !self.pos.contains_key(a) || !self.pos.contains_key(b) {
            return Err(PvaError::MissingTableEntry(a.to_string(), b.to_string()));
        }
        Ok(self.bracket(a, b))
    }
}

/// {ω(a)_λ ω(b)} from the chain formula.
pub fn master_bracket<C: Coeff>(ld: &Arc<LieData>, conv: SignConvention, a: &GenIndex, b: &GenIndex) -> WLambda<C> {
    (*MasterTable::<C>::new(ld.clone(), conv).bracket(a, b)).clone()
}

/// The full table over all ordered pairs of J^f.
pub fn bracket_table<C: Coeff>(ld: &Arc<LieData>, conv: SignConvention) -> MasterTable<C> {
    let t = MasterTable::new(ld.clone(), conv);
    t.fill();
    t
}

/// L = ω(f) + ½ Σ_{J^f_0} ω(q_j) ω(q_j*).
pub fn conformal_vector<C: Coeff>(ld: &LieData) -> WPoly<C> {
    let cd = &ld.cdata;
    let lin = |m: &SuperMatrix| -> WPoly<C> {
        let mut p = WPoly::zero();
        for (j, c) in cd.sharp_coords(&ld.ctx, m) {
            p.add_assign(&WPoly::var(j).scale(&C::from_q(&c)));
        }
        p
    };
    let mut l = lin(&ld.ctx.f);
    let half = C::from_q(&crate::coeff::qf(1, 2));
    for j in &cd.gens {
        if cd.delta[j] != Half::ZERO {
            continue;
        }
        let prod = WPoly::var(*j).mul(&lin(&cd.basis_e[j]));
        l.add_scaled(&half, &prod);
    }
    l
}

/// Residuals of the conformal-vector identities.
#[derive(Debug, Clone)]
pub struct ConformalReport<C: Coeff> {
    /// (generator, n, L_(n) ω(g) − expected) for n = 0, 1.
    pub generator_residuals: Vec<(GenIndex, usize, WPoly<C>)>,
    /// {L_λ L} − (∂+2λ)L − (λ³ part), which must vanish.
    pub virasoro_residual: WLambda<C>,
    /// The λ³ coefficient of {L_λ L}; a constant when the check passes.
    pub central: WPoly<C>,
}

impl<C: Coeff> ConformalReport<C> {
    pub fn passes(&self) -> bool {
        self.generator_residuals.is_empty()
            && self.virasoro_residual.is_zero()
            && self.central.terms().keys().all(|m| m.is_const())
    }
}

/// Checks L_(0) = ∂ and L_(1) = Δ on every generator, and the Virasoro form of {L_λ L}.
pub fn conformal_check<C: Coeff, T: BracketTable<GenIndex, C> + ?Sized>(
    table: &T,
    l: &WPoly<C>,
    gens: &[GenIndex],
) -> Result<ConformalReport<C>, PvaError> {
    let mut generator_residuals = Vec::new();
    for g in gens {
        let w = WPoly::var(*g);
        let br = extend_bracket(table, l, &w)?;
        let r0 = br.get(0).minus(&w.partial());
        if !r0.is_zero() {
            generator_residuals.push((*g, 0, r0));
        }
        let delta = C::from_q(&g.t.to_rational());
        let r1 = br.get(1).minus(&w.scale(&delta));
        if !r1.is_zero() {
            generator_residuals.push((*g, 1, r1));
        }
    }
    let ll = extend_bracket(table, l, l)?;
    let central = ll.get(3);
    let mut expected = WLambda::constant(l.partial());
    expected.add_at(1, &l.scale(&C::from_int(2)));
    expected.add_at(3, &central);
    let virasoro_residual = ll.minus(&expected);
    Ok(ConformalReport { generator_residuals, virasoro_residual, central })
}
