use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use smallvec::SmallVec;

use crate::coeff::Coeff;
use crate::half::Half;
use crate::liestruct::GenIndex;

/// A generator of a differential polynomial algebra.
pub trait Symbol: Ord + Clone + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn odd(&self) -> bool;
    fn weight(&self) -> Half;
}

impl Symbol for GenIndex {
    fn odd(&self) -> bool {
        self.odd
    }
    fn weight(&self) -> Half {
        self.t
    }
}

/// ∂^dpow applied to a symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Factor<S> {
    pub sym: S,
    pub dpow: u32,
}

impl<S: Symbol> Factor<S> {
    pub fn new(sym: S, dpow: u32) -> Self {
        Factor { sym, dpow }
    }

    pub fn odd(&self) -> bool {
        self.sym.odd()
    }

    pub fn weight(&self) -> Half {
        self.sym.weight() + Half::int(self.dpow as i32)
    }
}

impl<S: Symbol> fmt::Display for Factor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dpow {
            0 => write!(f, "{}", self.sym),
            1 => write!(f, "∂{}", self.sym),
            n => write!(f, "∂^{n}{}", self.sym),
        }
    }
}

/// Sorted product of factors; the total weight leads the ordering.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial<S> {
    weight: Half,
    factors: SmallVec<[Factor<S>; 4]>,
}

impl<S: Symbol> Monomial<S> {
    pub fn one() -> Self {
        Monomial { weight: Half::ZERO, factors: SmallVec::new() }
    }

    pub fn single(f: Factor<S>) -> Self {
        let weight = f.weight();
        let mut factors = SmallVec::new();
        factors.push(f);
        Monomial { weight, factors }
    }

    pub fn factors(&self) -> &[Factor<S>] {
        &self.factors
    }

    pub fn weight(&self) -> Half {
        self.weight
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_const(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn odd(&self) -> bool {
        self.factors.iter().filter(|f| f.odd()).count() % 2 == 1
    }

    /// Sorts an arbitrary factor list. Returns the sign flip and the monomial, or `None`
    /// when an odd factor repeats.
    pub fn from_factors(mut fs: Vec<Factor<S>>) -> Option<(bool, Self)> {
        let mut neg = false;
        // insertion sort, counting transpositions of odd factors
        for i in 1..fs.len() {
            let mut j = i;
            while j > 0 && fs[j - 1] > fs[j] {
                if fs[j - 1].odd() && fs[j].odd() {
                    neg = !neg;
                }
                fs.swap(j - 1, j);
                j -= 1;
            }
        }
        if fs.windows(2).any(|w| w[0] == w[1] && w[0].odd()) {
            return None;
        }
        let weight = fs.iter().fold(Half::ZERO, |acc, f| acc + f.weight());
        Some((neg, Monomial { weight, factors: fs.into_iter().collect() }))
    }

    /// Product of two sorted monomials.
    pub fn mul(&self, o: &Self) -> Option<(bool, Self)> {
        if self.factors.is_empty() {
            return Some((false, o.clone()));
        }
        if o.factors.is_empty() {
            return Some((false, self.clone()));
        }
        let a = &self.factors;
        let b = &o.factors;
        let mut odd_left_in_a = a.iter().filter(|f| f.odd()).count();
        let mut out: SmallVec<[Factor<S>; 4]> = SmallVec::with_capacity(a.len() + b.len());
        let mut neg = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i] <= b[j]);
            if take_a {
                if j < b.len() && a[i] == b[j] && a[i].odd() {
                    return None;
                }
                if a[i].odd() {
                    odd_left_in_a -= 1;
                }
                out.push(a[i].clone());
                i += 1;
            } else {
                if b[j].odd() && odd_left_in_a % 2 == 1 {
                    neg = !neg;
                }
                out.push(b[j].clone());
                j += 1;
            }
        }
        Some((neg, Monomial { weight: self.weight + o.weight, factors: out }))
    }

    /// The monomial with factor `k` removed; the rest stays sorted.
    pub fn without(&self, k: usize) -> Self {
        let mut factors = self.factors.clone();
        let f = factors.remove(k);
        Monomial { weight: self.weight - f.weight(), factors }
    }

    /// Odd factors strictly before and strictly after position `k`.
    pub fn odd_around(&self, k: usize) -> (usize, usize) {
        let before = self.factors[..k].iter().filter(|f| f.odd()).count();
        let after = self.factors[k + 1..].iter().filter(|f| f.odd()).count();
        (before, after)
    }
}

impl<S: Symbol> fmt::Display for Monomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Weight-homogeneity failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonHomogeneous;

/// Differential polynomial: a finite sum of coefficient × monomial, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffPoly<S: Symbol, C: Coeff> {
    terms: BTreeMap<Monomial<S>, C>,
}

impl<S: Symbol, C: Coeff> Default for DiffPoly<S, C> {
    fn default() -> Self {
        DiffPoly { terms: BTreeMap::new() }
    }
}

impl<S: Symbol, C: Coeff> DiffPoly<S, C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(sym: S) -> Self {
        Self::var_d(sym, 0)
    }

    pub fn var_d(sym: S, dpow: u32) -> Self {
        Self::monomial(Monomial::single(Factor::new(sym, dpow)), C::cone())
    }

    pub fn monomial(m: Monomial<S>, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Canonical form of a raw sum of coefficient × factor-list terms.
    pub fn normalize(raw: impl IntoIterator<Item = (C, Vec<Factor<S>>)>) -> Self {
        let mut p = Self::zero();
        for (c, fs) in raw {
            if let Some((neg, m)) = Monomial::from_factors(fs) {
                p.add_term(m, if neg { c.negated() } else { c });
            }
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial<S>, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial<S>, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, m: &Monomial<S>) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::czero)
    }

    pub fn add_term(&mut self, m: Monomial<S>, c: C) {
        if c.is_czero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                x.add_in(&c);
                if x.is_czero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, c: &C, o: &Self) {
        if c.is_czero() {
            return;
        }
        for (m, x) in &o.terms {
            self.add_term(m.clone(), x.times(c));
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }

    pub fn minus(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_scaled(&C::cone().negated(), o);
        p
    }

    pub fn neg(&self) -> Self {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_czero() {
            return Self::zero();
        }
        let mut p = Self::zero();
        for (m, x) in &self.terms {
            p.add_term(m.clone(), x.times(c));
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca.times(cb);
                    p.add_term(m, if neg { c.negated() } else { c });
                }
            }
        }
        p
    }

    /// Multiplies by a single monomial on the left.
    pub fn mul_monomial_left(&self, m: &Monomial<S>) -> Self {
        let mut p = Self::zero();
        for (mb, cb) in &self.terms {
            if let Some((neg, r)) = m.mul(mb) {
                p.add_term(r, if neg { cb.negated() } else { cb.clone() });
            }
        }
        p
    }

    /// ∂ acting as a derivation.
    pub fn partial(&self) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            for k in 0..m.factors.len() {
                let mut fs: Vec<Factor<S>> = m.factors.to_vec();
                fs[k].dpow += 1;
                if let Some((neg, r)) = Monomial::from_factors(fs) {
                    p.add_term(r, if neg { c.negated() } else { c.clone() });
                }
            }
        }
        p
    }

    pub fn partial_n(&self, n: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            if p.is_zero() {
                break;
            }
            p = p.partial();
        }
        p
    }

    /// The common weight of all monomials; `Ok(None)` for the zero polynomial.
    pub fn weight_of(&self) -> Result<Option<Half>, NonHomogeneous> {
        let mut it = self.terms.keys().map(|m| m.weight);
        let Some(w) = it.next() else { return Ok(None) };
        if it.all(|x| x == w) {
            Ok(Some(w))
        } else {
            Err(NonHomogeneous)
        }
    }

    /// Coefficients of the single-factor, underived monomials.
    pub fn linear_term(&self) -> BTreeMap<S, C> {
        self.terms
            .iter()
            .filter(|(m, _)| m.factors.len() == 1 && m.factors[0].dpow == 0)
            .map(|(m, c)| (m.factors[0].sym.clone(), c.clone()))
            .collect()
    }

    /// `Some(parity)` when every monomial has the same parity.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.odd());
        let p = it.next()?;
        it.all(|x| x == p).then_some(p)
    }

    pub fn parity_part(&self, odd: bool) -> Self {
        DiffPoly { terms: self.terms.iter().filter(|(m, _)| m.odd() == odd).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Part of weight exactly `w`.
    pub fn weight_part(&self, w: Half) -> Self {
        DiffPoly { terms: self.terms.iter().filter(|(m, _)| m.weight == w).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn symbols(&self) -> Vec<S> {
        let mut v: Vec<S> = self.terms.keys().flat_map(|m| m.factors.iter().map(|f| f.sym.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> DiffPoly<S, D> {
        let mut p = DiffPoly::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn try_map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Option<D>) -> Option<DiffPoly<S, D>> {
        let mut p = DiffPoly::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c)?);
        }
        Some(p)
    }

    /// The differential algebra morphism sending each symbol `s` to `image(s)`.
    pub fn substitute<T: Symbol>(&self, image: impl Fn(&S) -> DiffPoly<T, C>) -> DiffPoly<T, C> {
        let mut cache: HashMap<Factor<S>, DiffPoly<T, C>> = HashMap::new();
        let mut get = |f: &Factor<S>| -> DiffPoly<T, C> {
            if let Some(p) = cache.get(f) {
                return p.clone();
            }
            let p = image(&f.sym).partial_n(f.dpow);
            cache.insert(f.clone(), p.clone());
            p
        };
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            for f in m.factors.iter() {
                if acc.is_zero() {
                    break;
                }
                acc = acc.mul(&get(f));
            }
            out.add_assign(&acc);
        }
        out
    }
}

impl<S: Symbol, C: Coeff> fmt::Display for DiffPoly<S, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if m.is_const() { format!("({c})") } else { format!("({c})·{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Every monomial of total weight `w` in the given symbols and their derivatives.
/// All symbol weights must be positive.
pub fn monomials_of_weight<S: Symbol>(syms: &[S], w: Half) -> Vec<Monomial<S>> {
    let mut factors: Vec<Factor<S>> = Vec::new();
    for s in syms {
        assert!(s.weight() > Half::ZERO, "symbol of non-positive weight");
        let mut d = 0;
        while s.weight() + Half::int(d) <= w {
            factors.push(Factor::new(s.clone(), d as u32));
            d += 1;
        }
    }
    factors.sort();
    factors.dedup();
    fn rec<S: Symbol>(fs: &[Factor<S>], start: usize, left: Half, cur: &mut Vec<Factor<S>>, out: &mut Vec<Monomial<S>>) {
        if left == Half::ZERO {
            if let Some((_, m)) = Monomial::from_factors(cur.clone()) {
                out.push(m);
            }
            return;
        }
        for i in start..fs.len() {
            let f = &fs[i];
            if f.weight() > left {
                continue;
            }
            let next = if f.odd() { i + 1 } else { i };
            cur.push(f.clone());
            rec(fs, next, left - f.weight(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if w > Half::ZERO {
        rec(&factors, 0, w, &mut Vec::new(), &mut out);
    }
    out.sort();
    out.dedup();
    out
}
