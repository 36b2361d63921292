//! Coefficient rings: ℚ (level fixed to 1), ℚ[k̃] and ℚ(k̃).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Ring of coefficients for differential polynomials.
///
/// `ktilde` is the level symbol; fixed-level rings return 1.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn czero() -> Self;
    fn cone() -> Self;
    fn from_q(x: &Q) -> Self;
    fn ktilde() -> Self;
    fn is_czero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    fn add_in(&mut self, o: &Self) {
        *self = self.plus(o);
    }

    fn scale_q(&self, x: &Q) -> Self {
        self.times(&Self::from_q(x))
    }

    fn from_int(n: i64) -> Self {
        Self::from_q(&q(n))
    }

    /// Value at k̃ = 1, or `None` at a pole.
    fn eval_one(&self) -> Option<Q>;
}

/// Coefficient rings with division.
pub trait Field: Coeff {
    fn inv(&self) -> Self;
}

impl Coeff for Q {
    fn czero() -> Self {
        Zero::zero()
    }
    fn cone() -> Self {
        One::one()
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn ktilde() -> Self {
        One::one()
    }
    fn is_czero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn add_in(&mut self, o: &Self) {
        *self += o;
    }
    fn eval_one(&self) -> Option<Q> {
        Some(self.clone())
    }
}

impl Field for Q {
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Polynomial in k̃ with rational coefficients, dense and trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct KPoly {
    c: Vec<Q>,
}

impl KPoly {
    pub fn from_coeffs(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        KPoly { c }
    }

    pub fn constant(x: Q) -> Self {
        Self::from_coeffs(vec![x])
    }

    pub fn monomial(x: Q, pow: usize) -> Self {
        let mut c = vec![Q::zero(); pow + 1];
        c[pow] = x;
        Self::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.c.last()
    }

    pub fn is_const(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn const_term(&self) -> Q {
        self.c.first().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    fn scaled(&self, x: &Q) -> Self {
        if Zero::is_zero(x) {
            return KPoly::default();
        }
        KPoly { c: self.c.iter().map(|a| a * x).collect() }
    }

    pub fn make_monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scaled(&l.recip()),
            None => self.clone(),
        }
    }

    /// Euclidean division over ℚ.
    pub fn div_rem(&self, d: &KPoly) -> (KPoly, KPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.c[dd].recip();
        let mut r = self.c.clone();
        let mut quo = vec![Q::zero(); self.c.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] * &lead_inv;
            if !Zero::is_zero(&f) {
                let shift = top - dd;
                for (i, b) in d.c.iter().enumerate() {
                    r[shift + i] -= &f * b;
                }
                quo[shift] = f;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (KPoly::from_coeffs(quo), KPoly::from_coeffs(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &KPoly, b: &KPoly) -> KPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.c.is_empty() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.make_monic()
    }

    /// Rational roots, found by the rational root test on the integer-scaled polynomial.
    /// Returns `None` when the candidate set is too large to enumerate.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.c.is_empty() {
            return Some(roots);
        }
        // strip the factor k̃^m
        let zeros = p.c.iter().take_while(|a| Zero::is_zero(*a)).count();
        if zeros > 0 {
            roots.push(Q::zero());
            p = KPoly::from_coeffs(p.c[zeros..].to_vec());
        }
        let denom_lcm = p.c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = p.c.iter().map(|a| (a * Q::from_integer(denom_lcm.clone())).to_integer()).collect();
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        let small = |x: &BigInt| x.to_u64().filter(|v| *v <= 1_000_000_000);
        let (a0, an) = (small(&a0)?, small(&an)?);
        let divisors = |n: u64| -> Vec<u64> {
            let mut out = Vec::new();
            let mut i = 1u64;
            while i * i <= n {
                if n % i == 0 {
                    out.push(i);
                    if i * i != n {
                        out.push(n / i);
                    }
                }
                i += 1;
            }
            out
        };
        for num in divisors(a0) {
            for den in divisors(an) {
                for s in [1i64, -1] {
                    let cand = Q::new(BigInt::from(num) * BigInt::from(s), BigInt::from(den));
                    if !roots.contains(&cand) && Zero::is_zero(&p.eval(&cand)) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if Zero::is_zero(a) {
                continue;
            }
            if !first {
                write!(f, "{}", if a.is_negative() { " - " } else { " + " })?;
            } else if a.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let abs = a.abs();
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "k")?,
                _ => write!(f, "k^{i}")?,
            }
        }
        Ok(())
    }
}

impl Coeff for KPoly {
    fn czero() -> Self {
        KPoly::default()
    }
    fn cone() -> Self {
        KPoly::constant(Q::one())
    }
    fn from_q(x: &Q) -> Self {
        KPoly::constant(x.clone())
    }
    fn ktilde() -> Self {
        KPoly::monomial(Q::one(), 1)
    }
    fn is_czero(&self) -> bool {
        self.c.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        KPoly::from_coeffs(c)
    }
    fn times(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return KPoly::default();
        }
        if o.c.len() == 1 {
            return self.scaled(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scaled(&self.c[0]);
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        KPoly::from_coeffs(c)
    }
    fn negated(&self) -> Self {
        KPoly { c: self.c.iter().map(|a| -a).collect() }
    }
    fn scale_q(&self, x: &Q) -> Self {
        self.scaled(x)
    }
    fn eval_one(&self) -> Option<Q> {
        Some(self.c.iter().fold(Q::zero(), |acc, a| acc + a))
    }
}

/// Rational function in k̃: `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: KPoly,
    den: KPoly,
}

impl RatFunc {
    pub fn new(num: KPoly, den: KPoly) -> Self {
        assert!(!Coeff::is_czero(&den), "zero denominator");
        if Coeff::is_czero(&num) {
            return <RatFunc as Coeff>::czero();
        }
        if den.is_const() {
            let d = den.c[0].recip();
            return RatFunc { num: num.scaled(&d), den: <KPoly as Coeff>::cone() };
        }
        let g = KPoly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead().unwrap().recip();
        RatFunc { num: n.scaled(&l), den: d.scaled(&l) }
    }

    pub fn from_poly(p: KPoly) -> Self {
        RatFunc { num: p, den: <KPoly as Coeff>::cone() }
    }

    pub fn numer(&self) -> &KPoly {
        &self.num
    }

    pub fn denom(&self) -> &KPoly {
        &self.den
    }

    /// The polynomial value when the denominator is constant.
    pub fn to_poly(&self) -> Option<KPoly> {
        self.den.is_const().then(|| self.num.clone())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_const() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Coeff for RatFunc {
    fn czero() -> Self {
        RatFunc { num: KPoly::default(), den: <KPoly as Coeff>::cone() }
    }
    fn cone() -> Self {
        RatFunc::from_poly(<KPoly as Coeff>::cone())
    }
    fn from_q(x: &Q) -> Self {
        RatFunc::from_poly(KPoly::constant(x.clone()))
    }
    fn ktilde() -> Self {
        RatFunc::from_poly(<KPoly as Coeff>::ktilde())
    }
    fn is_czero(&self) -> bool {
        Coeff::is_czero(&self.num)
    }
    fn plus(&self, o: &Self) -> Self {
        if self.den == o.den {
            if self.den.is_const() {
                return RatFunc { num: self.num.plus(&o.num), den: self.den.clone() };
            }
            return RatFunc::new(self.num.plus(&o.num), self.den.clone());
        }
        let num = self.num.times(&o.den).plus(&o.num.times(&self.den));
        RatFunc::new(num, self.den.times(&o.den))
    }
    fn times(&self, o: &Self) -> Self {
        if self.den.is_const() && o.den.is_const() {
            return RatFunc { num: self.num.times(&o.num), den: self.den.clone() };
        }
        RatFunc::new(self.num.times(&o.num), self.den.times(&o.den))
    }
    fn negated(&self) -> Self {
        RatFunc { num: self.num.negated(), den: self.den.clone() }
    }
    fn scale_q(&self, x: &Q) -> Self {
        if Zero::is_zero(x) {
            return <RatFunc as Coeff>::czero();
        }
        RatFunc { num: self.num.scaled(x), den: self.den.clone() }
    }
    fn eval_one(&self) -> Option<Q> {
        let d = self.den.eval_one()?;
        if Zero::is_zero(&d) {
            return None;
        }
        Some(self.num.eval_one()? / d)
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        RatFunc::new(self.den.clone(), self.num.clone())
    }
}

/// Conversions between coefficient rings that keep exactness.
pub trait CoeffInto<T> {
    fn coeff_into(&self) -> Option<T>;
}

impl CoeffInto<RatFunc> for KPoly {
    fn coeff_into(&self) -> Option<RatFunc> {
        Some(RatFunc::from_poly(self.clone()))
    }
}

impl CoeffInto<KPoly> for RatFunc {
    fn coeff_into(&self) -> Option<KPoly> {
        self.to_poly()
    }
}

impl CoeffInto<Q> for KPoly {
    fn coeff_into(&self) -> Option<Q> {
        self.eval_one()
    }
}

impl CoeffInto<Q> for RatFunc {
    fn coeff_into(&self) -> Option<Q> {
        self.eval_one()
    }
}

impl<T: Clone> CoeffInto<T> for T {
    fn coeff_into(&self) -> Option<T> {
        Some(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(v: &[i64]) -> KPoly {
        KPoly::from_coeffs(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn poly_gcd_and_division() {
        // (k-1)(k+2) and (k-1)(k-3)
        let a = kp(&[-2, 1, 1]);
        let b = kp(&[3, -4, 1]);
        assert_eq!(KPoly::gcd(&a, &b), kp(&[-1, 1]));
        let (qq, r) = a.div_rem(&kp(&[-1, 1]));
        assert_eq!(qq, kp(&[2, 1]));
        assert!(Coeff::is_czero(&r));
    }

    #[test]
    fn ratfunc_normalizes() {
        let a = RatFunc::new(kp(&[-2, 1, 1]), kp(&[3, -4, 1]));
        assert_eq!(a.numer(), &kp(&[2, 1]));
        assert_eq!(a.denom(), &kp(&[-3, 1]));
        let s = a.plus(&a.negated());
        assert!(Coeff::is_czero(&s));
        assert_eq!(a.times(&a.inv()), <RatFunc as Coeff>::cone());
    }

    #[test]
    fn rational_roots_found() {
        // 2k^2 - k = k(2k - 1)
        let p = kp(&[0, -1, 2]);
        assert_eq!(p.rational_roots().unwrap(), vec![q(0), qf(1, 2)]);
        assert_eq!(kp(&[1, 0, 1]).rational_roots().unwrap(), Vec::<Q>::new());
    }

    #[test]
    fn display_poly() {
        assert_eq!(kp(&[3, 0, -1]).to_string(), "-k^2 + 3");
        assert_eq!(KPoly::default().to_string(), "0");
    }
}
