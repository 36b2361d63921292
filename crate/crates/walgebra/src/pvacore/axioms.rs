use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bracket::{extend_bracket, BracketTable, PvaError};
use super::lambda::{binom, Lambda2, LambdaPoly};
use super::poly::{DiffPoly, Symbol};
use crate::coeff::Coeff;

#[derive(Debug, Clone)]
pub struct SkewViolation<S: Symbol, C: Coeff> {
    pub a: S,
    pub b: S,
    pub residual: LambdaPoly<S, C>,
}

#[derive(Debug, Clone)]
pub struct JacobiViolation<S: Symbol, C: Coeff> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub residual: Lambda2<S, C>,
}

/// Summary counts of an axiom sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSummary {
    pub pairs_checked: usize,
    pub skew_violations: usize,
    pub triples_checked: usize,
    pub jacobi_violations: usize,
}

fn sign<C: Coeff>(neg: bool) -> C {
    if neg {
        C::cone().negated()
    } else {
        C::cone()
    }
}

/// `{a_λ b} + (−1)^{p(a)p(b)} {b_{−λ−∂} a}` for two elements.
pub fn skew_residual<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    a: &DiffPoly<S, C>,
    b: &DiffPoly<S, C>,
) -> Result<LambdaPoly<S, C>, PvaError> {
    let mut res = LambdaPoly::zero();
    for pa in [false, true] {
        let ap = a.parity_part(pa);
        for pb in [false, true] {
            let bp = b.parity_part(pb);
            if ap.is_zero() || bp.is_zero() {
                continue;
            }
            let ab = extend_bracket(table, &ap, &bp)?;
            let ba = extend_bracket(table, &bp, &ap)?.at_neg_lambda_minus_partial();
            res.add_assign(&ab);
            res.add_scaled(&sign(pa && pb), &ba);
        }
    }
    Ok(res)
}

/// Checks `{a_λ b} = −(−1)^{p(a)p(b)} {b_{−λ−∂} a}` on all generator pairs.
pub fn check_skew<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    gens: &[S],
) -> Result<Vec<SkewViolation<S, C>>, PvaError> {
    let mut out = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            let ab = table.generator_bracket(a, b)?;
            let ba = table.generator_bracket(b, a)?.at_neg_lambda_minus_partial();
            let mut res = (*ab).clone();
            res.add_scaled(&sign(a.odd() && b.odd()), &ba);
            if !res.is_zero() {
                out.push(SkewViolation { a: a.clone(), b: b.clone(), residual: res });
            }
        }
    }
    Ok(out)
}

/// `{a_λ{b_μ c}} − {{a_λ b}_{λ+μ} c} − (−1)^{p(a)p(b)} {b_μ{a_λ c}}` for homogeneous elements.
pub fn jacobi_residual<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    a: &DiffPoly<S, C>,
    b: &DiffPoly<S, C>,
    c: &DiffPoly<S, C>,
) -> Result<Lambda2<S, C>, PvaError> {
    let pa = a.parity().unwrap_or(false);
    let pb = b.parity().unwrap_or(false);
    let mut res = Lambda2::default();
    // {a_λ {b_μ c}}
    let bc = extend_bracket(table, b, c)?;
    for (m, cm) in bc.coeffs().iter().enumerate() {
        let inner = extend_bracket(table, a, cm)?;
        for (n, d) in inner.coeffs().iter().enumerate() {
            res.add_at((n, m), d);
        }
    }
    // − {{a_λ b}_{λ+μ} c}
    let ab = extend_bracket(table, a, b)?;
    let minus = C::cone().negated();
    for (j, e) in ab.coeffs().iter().enumerate() {
        let inner = extend_bracket(table, e, c)?;
        for (l, f) in inner.coeffs().iter().enumerate() {
            for r in 0..=l {
                let k = C::from_q(&binom(l, r)).times(&minus);
                res.add_at((j + r, l - r), &f.scale(&k));
            }
        }
    }
    // − (−1)^{p(a)p(b)} {b_μ {a_λ c}}
    let ac = extend_bracket(table, a, c)?;
    let s = if pa && pb { C::cone() } else { minus.clone() };
    for (j, g) in ac.coeffs().iter().enumerate() {
        let inner = extend_bracket(table, b, g)?;
        for (m, h) in inner.coeffs().iter().enumerate() {
            res.add_at((j, m), &h.scale(&s));
        }
    }
    Ok(res)
}

/// Checks the Jacobi identity on all ordered generator triples.
pub fn check_jacobi<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    gens: &[S],
) -> Result<Vec<JacobiViolation<S, C>>, PvaError> {
    let triples: Vec<(S, S, S)> = gens
        .iter()
        .flat_map(|a| gens.iter().flat_map(move |b| gens.iter().map(move |c| (a.clone(), b.clone(), c.clone()))))
        .collect();
    let results: Vec<Result<Option<JacobiViolation<S, C>>, PvaError>> = triples
        .par_iter()
        .map(|(a, b, c)| {
            let res = jacobi_residual(table, &DiffPoly::var(a.clone()), &DiffPoly::var(b.clone()), &DiffPoly::var(c.clone()))?;
            Ok((!res.is_zero()).then(|| JacobiViolation { a: a.clone(), b: b.clone(), c: c.clone(), residual: res }))
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(v) = r? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Runs both sweeps and counts violations.
pub fn axiom_summary<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(table: &T, gens: &[S]) -> Result<AxiomSummary, PvaError> {
    let skew = check_skew(table, gens)?;
    let jac = check_jacobi(table, gens)?;
    Ok(AxiomSummary {
        pairs_checked: gens.len() * (gens.len() + 1) / 2,
        skew_violations: skew.len(),
        triples_checked: gens.len().pow(3),
        jacobi_violations: jac.len(),
    })
}
