//! First-principles construction of the W-algebra inside V(p): generators are solved from the
//! constraints ρ{n_λ W} = 0, brackets are computed in the affine PVA and mapped back through ρ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::coeff::{Coeff, RatFunc, Q};
use crate::half::Half;
use crate::linalg::{Echelon, SparseVec, SpanTracker};
use crate::liestruct::{GenIndex, LieData, SuperMatrix};
use crate::pvacore::{
    axiom_summary, extend_bracket, monomials_of_weight, BracketTable, DiffPoly, Factor, LambdaPoly, Monomial, PvaError,
    Symbol, TableMap,
};
use crate::wbracket::{MasterTable, SignConvention};

/// A basis vector of g used as a variable of V(g): the unit E_rc for r ≠ c, or
/// h_r = E_rr − ε_r E_11 for r = c ≥ 1 (0-based), ε_r the supertrace sign of row r.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VVar {
    pub w: Half,
    pub r: u8,
    pub c: u8,
    pub odd: bool,
}

impl VVar {
    pub fn is_diagonal(&self) -> bool {
        self.r == self.c
    }

    /// ad x eigenvalue.
    pub fn grade(&self) -> Half {
        Half::ONE - self.w
    }
}

impl fmt::Display for VVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_diagonal() {
            write!(f, "h{}", self.r + 1)
        } else {
            write!(f, "E{}_{}", self.r + 1, self.c + 1)
        }
    }
}

impl fmt::Debug for VVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Symbol for VVar {
    fn odd(&self) -> bool {
        self.odd
    }
    fn weight(&self) -> Half {
        self.w
    }
}

pub type VpPoly = DiffPoly<VVar, RatFunc>;
pub type VpLambda = LambdaPoly<VVar, RatFunc>;
pub type WExpr = DiffPoly<GenIndex, RatFunc>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DsError {
    #[error("NoSolution: constraint system for {0} is inconsistent")]
    NoSolution(String),
    #[error(transparent)]
    Pva(#[from] PvaError),
}

/// The affine PVA V(g), its reduction map ρ and the reduced bracket table.
pub struct DsContext {
    ld: Arc<LieData>,
    vars: Vec<VVar>,
    affine: TableMap<VVar, RatFunc>,
    reduced: TableMap<VVar, RatFunc>,
}

fn lin(coords: impl IntoIterator<Item = (VVar, Q)>) -> VpPoly {
    let mut p = VpPoly::zero();
    for (v, c) in coords {
        p.add_term(Monomial::single(Factor::new(v, 0)), RatFunc::from_q(&c));
    }
    p
}

impl DsContext {
    pub fn new(ld: Arc<LieData>) -> Self {
        let ctx = &ld.ctx;
        let n = ctx.n();
        let mut vars = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if r == c && r == 0 {
                    continue;
                }
                let grade = ctx.entry_grade(r, c);
                vars.push(VVar { w: Half::ONE - grade, r: r as u8, c: c as u8, odd: ctx.unit(r, c).parity() == Some(true) });
            }
        }
        vars.sort();
        let mut ds = DsContext { ld, vars, affine: TableMap::new(), reduced: TableMap::new() };
        let (mut affine, mut reduced) = (TableMap::new(), TableMap::new());
        for u in &ds.vars {
            for v in &ds.vars {
                let (mu, mv) = (ds.matrix(u), ds.matrix(v));
                let br = ds.ld.ctx.bracket(&mu, &mv);
                let mut lp = VpLambda::constant(ds.element(&br));
                lp.add_at(1, &VpPoly::constant(RatFunc::ktilde().scale_q(&ds.ld.ctx.form(&mu, &mv))));
                reduced.insert(*u, *v, ds.rho_lambda(&lp));
                affine.insert(*u, *v, lp);
            }
        }
        ds.affine = affine;
        ds.reduced = reduced;
        ds
    }

    pub fn lie(&self) -> &LieData {
        &self.ld
    }

    pub fn vars(&self) -> &[VVar] {
        &self.vars
    }

    /// Basis of p = ⊕_{i<1} g_i.
    pub fn p_vars(&self) -> Vec<VVar> {
        self.vars.iter().copied().filter(|v| v.grade() < Half::ONE).collect()
    }

    /// Basis of n = ⊕_{i>0} g_i.
    pub fn n_vars(&self) -> Vec<VVar> {
        self.vars.iter().copied().filter(|v| v.grade() > Half::ZERO).collect()
    }

    pub fn affine_table(&self) -> &TableMap<VVar, RatFunc> {
        &self.affine
    }

    pub fn reduced_table(&self) -> &TableMap<VVar, RatFunc> {
        &self.reduced
    }

    pub fn matrix(&self, v: &VVar) -> SuperMatrix {
        let ctx = &self.ld.ctx;
        let (r, c) = (v.r as usize, v.c as usize);
        let mut m = ctx.unit(r, c);
        if r == c {
            let eps = if r >= ctx.n1() { Q::from_integer((-1).into()) } else { Q::from_integer(1.into()) };
            m.add_entry(0, 0, &-eps);
        }
        m
    }

    /// Coordinates of an element of g in the variable basis.
    pub fn coords(&self, m: &SuperMatrix) -> BTreeMap<VVar, Q> {
        let mut out = BTreeMap::new();
        for v in &self.vars {
            let x = m.get(v.r as usize, v.c as usize);
            if !x.is_zero() {
                out.insert(*v, x);
            }
        }
        out
    }

    /// An element of g as a linear polynomial of V(g).
    pub fn element(&self, m: &SuperMatrix) -> VpPoly {
        lin(self.coords(m))
    }

    /// ρ(v) = π_p(v) + (f|v) on a variable.
    fn rho_var(&self, v: &VVar) -> VpPoly {
        let mut p = if v.grade() < Half::ONE { VpPoly::var(*v) } else { VpPoly::zero() };
        let fv = self.ld.ctx.form(&self.ld.ctx.f, &self.matrix(v));
        if !fv.is_zero() {
            p.add_assign(&VpPoly::constant(RatFunc::from_q(&fv)));
        }
        p
    }

    /// ρ extended as a differential algebra morphism.
    pub fn rho(&self, p: &VpPoly) -> VpPoly {
        p.substitute(|v| self.rho_var(v))
    }

    pub fn rho_lambda(&self, lp: &VpLambda) -> VpLambda {
        VpLambda::from_coeffs(lp.coeffs().iter().map(|c| self.rho(c)).collect())
    }

    /// {A_λ B} in V(g).
    pub fn affine_bracket(&self, a: &VpPoly, b: &VpPoly) -> Result<VpLambda, PvaError> {
        extend_bracket(&self.affine, a, b)
    }

    /// ρ{A_λ B} for A, B ∈ V(p).
    pub fn reduced_bracket(&self, a: &VpPoly, b: &VpPoly) -> Result<VpLambda, PvaError> {
        extend_bracket(&self.reduced, a, b)
    }

    /// The projection V(p) → V(g^f) induced by the sharp projection on p.
    pub fn project(&self, p: &VpPoly) -> WExpr {
        let cd = &self.ld.cdata;
        p.substitute(|v| {
            let mut e = WExpr::zero();
            for (j, c) in cd.sharp_coords(&self.ld.ctx, &self.matrix(v)) {
                e.add_assign(&WExpr::var(j).scale(&RatFunc::from_q(&c)));
            }
            e
        })
    }

    /// Solves for W_a: the linear part is pinned to a, the rest ranges over all weight-Δ_a
    /// monomials of matching parity; free parameters are set to zero in monomial order.
    pub fn solve_generator(&self, a: &GenIndex) -> Result<(VpPoly, Vec<String>), DsError> {
        let fixed = self.element(&self.ld.cdata.basis_f[a]);
        let p_vars = self.p_vars();
        let unknowns: Vec<Monomial<VVar>> = monomials_of_weight(&p_vars, a.t)
            .into_iter()
            .filter(|m| m.odd() == a.odd && !(m.degree() == 1 && m.factors()[0].dpow == 0))
            .collect();
        let per_n: Vec<Result<(VpLambda, Vec<VpLambda>), PvaError>> = self
            .n_vars()
            .par_iter()
            .map(|n| {
                let nv = VpPoly::var(*n);
                let b0 = self.reduced_bracket(&nv, &fixed)?;
                let bs = unknowns
                    .iter()
                    .map(|m| self.reduced_bracket(&nv, &VpPoly::monomial(m.clone(), RatFunc::cone())))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((b0, bs))
            })
            .collect();
        let mut rows: BTreeMap<(usize, usize, Monomial<VVar>), (SparseVec<usize, RatFunc>, RatFunc)> = BTreeMap::new();
        for (ni, r) in per_n.into_iter().enumerate() {
            let (b0, bs) = r?;
            for (lam, c) in b0.coeffs().iter().enumerate() {
                for (m, x) in c.terms() {
                    rows.entry((ni, lam, m.clone())).or_insert_with(|| (SparseVec::new(), RatFunc::czero())).1 = x.negated();
                }
            }
            for (col, b) in bs.iter().enumerate() {
                for (lam, c) in b.coeffs().iter().enumerate() {
                    for (m, x) in c.terms() {
                        rows.entry((ni, lam, m.clone()))
                            .or_insert_with(|| (SparseVec::new(), RatFunc::czero()))
                            .0
                            .insert(col, x.clone());
                    }
                }
            }
        }
        let mut ech = Echelon::new(unknowns.len());
        for (_, (row, rhs)) in rows {
            ech.add_equation(row, rhs).map_err(|_| DsError::NoSolution(a.to_string()))?;
        }
        let pinned = ech.free_columns().into_iter().map(|i| unknowns[i].to_string()).collect();
        let sol = ech.solve_zero_free();
        let mut w = fixed;
        for (m, x) in unknowns.into_iter().zip(sol) {
            if !x.is_czero() {
                w.add_term(m, x);
            }
        }
        Ok((w, pinned))
    }

    /// All generators, solved independently in parallel.
    pub fn solve_all(&self) -> Result<GeneratorSolution, DsError> {
        let gens = self.ld.cdata.gens.clone();
        let solved: Vec<Result<(VpPoly, Vec<String>), DsError>> = gens.par_iter().map(|a| self.solve_generator(a)).collect();
        let mut sol = GeneratorSolution::default();
        for (a, r) in gens.into_iter().zip(solved) {
            let (w, pinned) = r?;
            sol.gens.insert(a, w);
            if !pinned.is_empty() {
                sol.pinned.insert(a, pinned);
            }
        }
        Ok(sol)
    }

    /// ρ{n_λ W} for every n ∈ n, together with ρ{e_λ W}; all must vanish for W in the W-algebra.
    pub fn constraint_residuals(&self, w: &VpPoly) -> Result<Vec<(String, VpLambda)>, PvaError> {
        let mut out = Vec::new();
        for n in self.n_vars() {
            let r = self.reduced_bracket(&VpPoly::var(n), w)?;
            if !r.is_zero() {
                out.push((n.to_string(), r));
            }
        }
        let r = self.reduced_bracket(&self.element(&self.ld.ctx.e), w)?;
        if !r.is_zero() {
            out.push(("e".to_string(), r));
        }
        Ok(out)
    }
}

/// Solved generators W_a, with the monomials whose coefficients were pinned to zero.
#[derive(Debug, Clone, Default)]
pub struct GeneratorSolution {
    pub gens: BTreeMap<GenIndex, VpPoly>,
    pub pinned: BTreeMap<GenIndex, Vec<String>>,
}

impl GeneratorSolution {
    /// Substitutes a ↦ W_a.
    pub fn evaluate(&self, e: &WExpr) -> VpPoly {
        e.substitute(|g| self.gens[g].clone())
    }
}

/// Result of expressing an element of V(p) in the generators.
#[derive(Debug, Clone)]
pub struct Reexpressed {
    pub expr: WExpr,
    pub residual: VpPoly,
}

struct WeightSpace {
    monos: Vec<Monomial<GenIndex>>,
    span: SpanTracker<Monomial<VVar>, RatFunc>,
}

/// Inverts the substitution a ↦ W_a weight by weight, by linear elimination over the images
/// of all generator monomials.
pub struct Reexpressor<'a> {
    sol: &'a GeneratorSolution,
    syms: Vec<GenIndex>,
    spaces: Mutex<BTreeMap<Half, Arc<WeightSpace>>>,
}

impl<'a> Reexpressor<'a> {
    pub fn new(sol: &'a GeneratorSolution) -> Self {
        Reexpressor { sol, syms: sol.gens.keys().copied().collect(), spaces: Mutex::new(BTreeMap::new()) }
    }

    fn space(&self, w: Half) -> Arc<WeightSpace> {
        if let Some(s) = self.spaces.lock().unwrap().get(&w) {
            return s.clone();
        }
        let monos = if w == Half::ZERO { vec![Monomial::one()] } else { monomials_of_weight(&self.syms, w) };
        let mut span = SpanTracker::new();
        for (i, m) in monos.iter().enumerate() {
            let img = self.sol.evaluate(&WExpr::monomial(m.clone(), RatFunc::cone()));
            span.insert(i, img.into_terms().into_iter().collect());
        }
        let s = Arc::new(WeightSpace { monos, span });
        self.spaces.lock().unwrap().entry(w).or_insert(s).clone()
    }

    pub fn express(&self, p: &VpPoly) -> Reexpressed {
        let mut by_weight: BTreeMap<Half, SparseVec<Monomial<VVar>, RatFunc>> = BTreeMap::new();
        for (m, c) in p.terms() {
            by_weight.entry(m.weight()).or_default().insert(m.clone(), c.clone());
        }
        let mut expr = WExpr::zero();
        let mut residual = VpPoly::zero();
        for (w, v) in by_weight {
            let sp = self.space(w);
            match sp.span.express(&v) {
                Some(combo) => {
                    for (i, c) in combo {
                        expr.add_term(sp.monos[i].clone(), c);
                    }
                }
                None => {
                    for (m, c) in v {
                        residual.add_term(m, c);
                    }
                }
            }
        }
        Reexpressed { expr, residual }
    }
}

/// Expresses `p` in the generators of `sol`.
pub fn reexpress(sol: &GeneratorSolution, p: &VpPoly) -> Reexpressed {
    Reexpressor::new(sol).express(p)
}

/// A bracket entry that the corrected generators fail to reproduce.
#[derive(Debug, Clone)]
pub struct ReconcileFailure {
    pub a: GenIndex,
    pub b: GenIndex,
    /// Expressed reduced bracket minus the table entry.
    pub residual: LambdaPoly<GenIndex, RatFunc>,
    /// Parts of the reduced bracket outside the algebra generated by the W's.
    pub unexpressed: VpLambda,
}

#[derive(Debug, Clone)]
pub struct Reconciliation {
    /// C_a with W'_a = W_a + C_a; only nonzero corrections are listed.
    pub corrections: BTreeMap<GenIndex, VpPoly>,
    pub corrected: GeneratorSolution,
    pub pairs_checked: usize,
}

/// Aligns the solved generators with ω and checks every table entry against the reduced brackets.
///
/// ω(a) is the element of the W-algebra projecting to a under V(p) → V(g^f), so
/// W'_a = W_a − φ_a(W') with φ_a = π(W_a) − a, processed in order of weight.
pub fn reconcile<T: BracketTable<GenIndex, RatFunc> + ?Sized>(
    table: &T,
    ds: &DsContext,
    sol: &GeneratorSolution,
) -> Result<Reconciliation, ReconcileFailure> {
    let mut order: Vec<GenIndex> = sol.gens.keys().copied().collect();
    order.sort_by_key(|g| (g.t, *g));
    let mut corrected = GeneratorSolution { gens: BTreeMap::new(), pinned: sol.pinned.clone() };
    let mut corrections = BTreeMap::new();
    for a in &order {
        let w = &sol.gens[a];
        let phi = ds.project(w).minus(&WExpr::var(*a));
        debug_assert!(phi.symbols().iter().all(|g| g.t < a.t));
        let c = corrected.evaluate(&phi).neg();
        let wp = w.plus(&c);
        if !c.is_zero() {
            corrections.insert(*a, c);
        }
        corrected.gens.insert(*a, wp);
    }
    let rex = Reexpressor::new(&corrected);
    let pairs: Vec<(GenIndex, GenIndex)> = order.iter().flat_map(|a| order.iter().map(move |b| (*a, *b))).collect();
    let results: Vec<Option<ReconcileFailure>> = pairs
        .par_iter()
        .map(|(a, b)| {
            let fail = |residual, unexpressed| Some(ReconcileFailure { a: *a, b: *b, residual, unexpressed });
            let br = match ds.reduced_bracket(&corrected.gens[a], &corrected.gens[b]) {
                Ok(x) => x,
                Err(_) => return fail(LambdaPoly::zero(), VpLambda::zero()),
            };
            let expected = match table.generator_bracket(a, b) {
                Ok(x) => x,
                Err(_) => return fail(LambdaPoly::zero(), br),
            };
            let mut got = LambdaPoly::zero();
            let mut unexpressed = VpLambda::zero();
            for (n, c) in br.coeffs().iter().enumerate() {
                let r = rex.express(c);
                got.add_at(n, &r.expr);
                unexpressed.add_at(n, &r.residual);
            }
            let residual = got.minus(&expected);
            if residual.is_zero() && unexpressed.is_zero() {
                None
            } else {
                fail(residual, unexpressed)
            }
        })
        .collect();
    if let Some(f) = results.into_iter().flatten().next() {
        return Err(f);
    }
    Ok(Reconciliation { corrections, corrected, pairs_checked: pairs.len() })
}

/// Outcome of one sign convention on one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConventionSurvey {
    pub conv: SignConvention,
    pub skew_violations: usize,
    pub jacobi_violations: usize,
    pub oracle_agrees: bool,
}

impl ConventionSurvey {
    pub fn passes(&self) -> bool {
        self.skew_violations == 0 && self.jacobi_violations == 0 && self.oracle_agrees
    }
}

/// Runs every candidate sign convention through the axiom sweep and the reduction oracle.
pub fn survey_sign_conventions(ld: &Arc<LieData>) -> Result<Vec<ConventionSurvey>, DsError> {
    let ds = DsContext::new(ld.clone());
    let sol = ds.solve_all()?;
    let mut out = Vec::new();
    for conv in SignConvention::candidates() {
        let table: MasterTable<RatFunc> = MasterTable::new(ld.clone(), conv);
        table.fill();
        let s = axiom_summary(&table, &ld.cdata.gens)?;
        let oracle_agrees = reconcile(&table, &ds, &sol).is_ok();
        out.push(ConventionSurvey { conv, skew_violations: s.skew_violations, jacobi_violations: s.jacobi_violations, oracle_agrees });
    }
    Ok(out)
}

/// The unique passing convention across all the given algebras, if there is one.
pub fn select_sign_convention(algebras: &[Arc<LieData>]) -> Result<Option<SignConvention>, DsError> {
    let mut passing: BTreeSet<usize> = (0..SignConvention::candidates().len()).collect();
    for ld in algebras {
        let s = survey_sign_conventions(ld)?;
        passing.retain(|i| s[*i].passes());
    }
    let c = SignConvention::candidates();
    Ok(if passing.len() == 1 { Some(c[*passing.iter().next().unwrap()]) } else { None })
}
