use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::poly::{DiffPoly, Symbol};
use crate::coeff::{Coeff, Q};

pub(crate) fn binom(n: usize, k: usize) -> Q {
    if k > n {
        return Q::from_integer(BigInt::from(0));
    }
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(r)
}

pub(crate) fn factorial(n: usize) -> Q {
    Q::from_integer((1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k)))
}

/// Polynomial in λ with differential polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaPoly<S: Symbol, C: Coeff> {
    c: Vec<DiffPoly<S, C>>,
}

impl<S: Symbol, C: Coeff> Default for LambdaPoly<S, C> {
    fn default() -> Self {
        LambdaPoly { c: Vec::new() }
    }
}

impl<S: Symbol, C: Coeff> LambdaPoly<S, C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(mut c: Vec<DiffPoly<S, C>>) -> Self {
        while c.last().is_some_and(DiffPoly::is_zero) {
            c.pop();
        }
        LambdaPoly { c }
    }

    /// `p · λ^n`.
    pub fn monomial(p: DiffPoly<S, C>, n: usize) -> Self {
        let mut c = vec![DiffPoly::zero(); n + 1];
        c[n] = p;
        Self::from_coeffs(c)
    }

    pub fn constant(p: DiffPoly<S, C>) -> Self {
        Self::monomial(p, 0)
    }

    pub fn coeffs(&self) -> &[DiffPoly<S, C>] {
        &self.c
    }

    /// Coefficient of λ^n.
    pub fn get(&self, n: usize) -> DiffPoly<S, C> {
        self.c.get(n).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, n: usize) -> Option<&DiffPoly<S, C>> {
        self.c.get(n)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(DiffPoly::is_zero) {
            self.c.pop();
        }
    }

    /// Adds `p · λ^n`.
    pub fn add_at(&mut self, n: usize, p: &DiffPoly<S, C>) {
        if p.is_zero() {
            return;
        }
        if self.c.len() <= n {
            self.c.resize(n + 1, DiffPoly::zero());
        }
        self.c[n].add_assign(p);
        self.trim();
    }

    pub fn add_assign(&mut self, o: &Self) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), DiffPoly::zero());
        }
        for (i, p) in o.c.iter().enumerate() {
            self.c[i].add_assign(p);
        }
        self.trim();
    }

    pub fn add_scaled(&mut self, k: &C, o: &Self) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), DiffPoly::zero());
        }
        for (i, p) in o.c.iter().enumerate() {
            self.c[i].add_scaled(k, p);
        }
        self.trim();
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn minus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&C::cone().negated(), o);
        r
    }

    pub fn neg(&self) -> Self {
        LambdaPoly { c: self.c.iter().map(DiffPoly::neg).collect() }
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_coeffs(self.c.iter().map(|p| p.scale(k)).collect())
    }

    /// `p · self`, with `p` placed to the left of every coefficient.
    pub fn mul_left(&self, p: &DiffPoly<S, C>) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| p.mul(x)).collect())
    }

    /// `self · p`.
    pub fn mul_right(&self, p: &DiffPoly<S, C>) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.mul(p)).collect())
    }

    /// `λ^k · self`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![DiffPoly::zero(); k];
        c.extend(self.c.iter().cloned());
        LambdaPoly { c }
    }

    /// ∂ applied to every coefficient.
    pub fn partial(&self) -> Self {
        Self::from_coeffs(self.c.iter().map(DiffPoly::partial).collect())
    }

    /// `(λ+∂)^n self`, with ∂ acting on the coefficients.
    pub fn lambda_plus_partial_pow(&self, n: usize) -> Self {
        if n == 0 {
            return self.clone();
        }
        let mut out = Self::zero();
        for (j, b) in self.c.iter().enumerate() {
            let mut d = b.clone();
            for i in 0..=n {
                if d.is_zero() {
                    break;
                }
                out.add_at(j + n - i, &d.scale(&C::from_q(&binom(n, i))));
                d = d.partial();
            }
        }
        out
    }

    /// `(−λ)^n self`.
    pub fn neg_lambda_pow(&self, n: usize) -> Self {
        let s = self.shift(n);
        if n % 2 == 1 {
            s.neg()
        } else {
            s
        }
    }

    /// `Σ_j (−λ−∂)^j B_j` for `self = Σ_j λ^j B_j`, with ∂ acting on the `B_j`.
    pub fn at_neg_lambda_minus_partial(&self) -> Self {
        let mut out = Self::zero();
        for (j, b) in self.c.iter().enumerate() {
            let mut d = b.clone();
            for i in 0..=j {
                if d.is_zero() {
                    break;
                }
                let mut k = binom(j, i);
                if j % 2 == 1 {
                    k = -k;
                }
                out.add_at(j - i, &d.scale(&C::from_q(&k)));
                d = d.partial();
            }
        }
        out
    }

    /// `Σ_j B_j (λ+∂)^j r` for `self = Σ_j λ^j B_j`: the bracket with λ replaced by λ+∂,
    /// where ∂ acts on `r` only.
    pub fn apply_shifted_to(&self, r: &DiffPoly<S, C>) -> Self {
        let mut out = Self::zero();
        let mut derivs: Vec<DiffPoly<S, C>> = vec![r.clone()];
        for (j, b) in self.c.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            while derivs.len() <= j {
                let next = derivs.last().unwrap().partial();
                derivs.push(next);
            }
            for (i, d) in derivs.iter().enumerate().take(j + 1) {
                if d.is_zero() {
                    continue;
                }
                let term = b.mul(d).scale(&C::from_q(&binom(j, i)));
                out.add_at(j - i, &term);
            }
        }
        out
    }

    /// Convolution product, coefficients multiplied in order.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out.add_at(i + j, &a.mul(b));
            }
        }
        out
    }

    /// `a_(n) b = n! [λ^n]`.
    pub fn nth(&self, n: usize) -> DiffPoly<S, C> {
        self.get(n).scale(&C::from_q(&factorial(n)))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D + Copy) -> LambdaPoly<S, D> {
        LambdaPoly::from_coeffs(self.c.iter().map(|p| p.map_coeffs(f)).collect())
    }

    pub fn try_map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Option<D> + Copy) -> Option<LambdaPoly<S, D>> {
        Some(LambdaPoly::from_coeffs(self.c.iter().map(|p| p.try_map_coeffs(f)).collect::<Option<Vec<_>>>()?))
    }
}

impl<S: Symbol, C: Coeff> fmt::Display for LambdaPoly<S, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, p) in self.c.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "[{p}]")?,
                1 => write!(f, "λ[{p}]")?,
                _ => write!(f, "λ^{n}[{p}]")?,
            }
        }
        Ok(())
    }
}

/// Polynomial in two variables λ, μ with differential polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lambda2<S: Symbol, C: Coeff> {
    pub terms: BTreeMap<(usize, usize), DiffPoly<S, C>>,
}

impl<S: Symbol, C: Coeff> Default for Lambda2<S, C> {
    fn default() -> Self {
        Lambda2 { terms: BTreeMap::new() }
    }
}

impl<S: Symbol, C: Coeff> Lambda2<S, C> {
    pub fn add_at(&mut self, key: (usize, usize), p: &DiffPoly<S, C>) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_default();
        e.add_assign(p);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, k: &C, o: &Self) {
        for (key, p) in &o.terms {
            self.add_at(*key, &p.scale(k));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
