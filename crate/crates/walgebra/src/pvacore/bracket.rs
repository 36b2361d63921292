use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use super::lambda::LambdaPoly;
use super::poly::{DiffPoly, Factor, Monomial, Symbol};
use crate::coeff::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PvaError {
    #[error("MissingTableEntry: {{{0} λ {1}}}")]
    MissingTableEntry(String, String),
}

/// λ-brackets between generators.
pub trait BracketTable<S: Symbol, C: Coeff>: Sync {
    fn generator_bracket(&self, a: &S, b: &S) -> Result<Arc<LambdaPoly<S, C>>, PvaError>;
}

/// A bracket table stored explicitly.
#[derive(Clone, Debug)]
pub struct TableMap<S: Symbol, C: Coeff> {
    entries: BTreeMap<(S, S), Arc<LambdaPoly<S, C>>>,
}

impl<S: Symbol, C: Coeff> Default for TableMap<S, C> {
    fn default() -> Self {
        TableMap { entries: BTreeMap::new() }
    }
}

impl<S: Symbol, C: Coeff> TableMap<S, C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: S, b: S, v: LambdaPoly<S, C>) {
        self.entries.insert((a, b), Arc::new(v));
    }

    pub fn get(&self, a: &S, b: &S) -> Option<&LambdaPoly<S, C>> {
        self.entries.get(&(a.clone(), b.clone())).map(|x| &**x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(S, S), &LambdaPoly<S, C>)> {
        self.entries.iter().map(|(k, v)| (k, &**v))
    }
}

impl<S: Symbol, C: Coeff> BracketTable<S, C> for TableMap<S, C> {
    fn generator_bracket(&self, a: &S, b: &S) -> Result<Arc<LambdaPoly<S, C>>, PvaError> {
        self.entries
            .get(&(a.clone(), b.clone()))
            .cloned()
            .ok_or_else(|| PvaError::MissingTableEntry(a.to_string(), b.to_string()))
    }
}

fn slice_monomial<S: Symbol>(fs: &[Factor<S>]) -> Monomial<S> {
    Monomial::from_factors(fs.to_vec()).expect("slice of a valid monomial").1
}

/// `{u_λ B}` for a generator `u`, by Leibniz and sesquilinearity on the right.
fn right_bracket<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    u: &S,
    b: &DiffPoly<S, C>,
) -> Result<LambdaPoly<S, C>, PvaError> {
    let mut cache: HashMap<Factor<S>, LambdaPoly<S, C>> = HashMap::new();
    let mut out = LambdaPoly::zero();
    for (mono, c) in b.terms() {
        let fs = mono.factors();
        for (k, x) in fs.iter().enumerate() {
            let br = match cache.get(x) {
                Some(v) => v.clone(),
                None => {
                    let v = table.generator_bracket(u, &x.sym)?.lambda_plus_partial_pow(x.dpow as usize);
                    cache.insert(x.clone(), v.clone());
                    v
                }
            };
            if br.is_zero() {
                continue;
            }
            let (before, _) = mono.odd_around(k);
            let neg = u.odd() && before % 2 == 1;
            let prefix = DiffPoly::monomial(slice_monomial(&fs[..k]), C::cone());
            let suffix = DiffPoly::monomial(slice_monomial(&fs[k + 1..]), C::cone());
            let term = LambdaPoly::from_coeffs(br.coeffs().iter().map(|p| prefix.mul(p).mul(&suffix)).collect());
            out.add_scaled(&if neg { c.negated() } else { c.clone() }, &term);
        }
    }
    Ok(out)
}

/// The λ-bracket `{A_λ B}` determined by the generator table through sesquilinearity,
/// the Leibniz rules and super skew-symmetry.
pub fn extend_bracket<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    a: &DiffPoly<S, C>,
    b: &DiffPoly<S, C>,
) -> Result<LambdaPoly<S, C>, PvaError> {
    let mut out = LambdaPoly::zero();
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    for pb in [false, true] {
        let bp = b.parity_part(pb);
        if bp.is_zero() {
            continue;
        }
        let mut right: HashMap<S, LambdaPoly<S, C>> = HashMap::new();
        for (mono, c) in a.terms() {
            for (k, y) in mono.factors().iter().enumerate() {
                let r = match right.get(&y.sym) {
                    Some(r) => r,
                    None => {
                        let v = right_bracket(table, &y.sym, &bp)?;
                        right.entry(y.sym.clone()).or_insert(v)
                    }
                };
                if r.is_zero() {
                    continue;
                }
                let ry = r.neg_lambda_pow(y.dpow as usize);
                let rest = DiffPoly::monomial(mono.without(k), C::cone());
                let (before, after) = mono.odd_around(k);
                let p_br = y.odd() ^ pb;
                let neg = (pb && after % 2 == 1) ^ (p_br && before % 2 == 1);
                let term = ry.apply_shifted_to(&rest);
                out.add_scaled(&if neg { c.negated() } else { c.clone() }, &term);
            }
        }
    }
    Ok(out)
}

/// `A_(n) B`.
pub fn nth_product<S: Symbol, C: Coeff, T: BracketTable<S, C> + ?Sized>(
    table: &T,
    a: &DiffPoly<S, C>,
    b: &DiffPoly<S, C>,
    n: usize,
) -> Result<DiffPoly<S, C>, PvaError> {
    Ok(extend_bracket(table, a, b)?.nth(n))
}
