//! JSON encodings of coefficients, elements and λ-polynomials.
//!
//! Rationals travel as decimal strings so that nothing is lost to floating point.
//! Generators are `[t_num, t_den, i, j]`; parity is recovered from the algebra on decode.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, KPoly, RatFunc, Q};
use crate::half::Half;
use crate::liestruct::{CentralizerData, GenIndex};
use crate::pvacore::{DiffPoly, Factor, LambdaPoly};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("bad rational {0:?}")]
    BadRational(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("coefficient of the wrong kind: {0}")]
    WrongKind(String),
    #[error("derivative order {0} exceeds {MAX_DPOW}")]
    DpowTooLarge(u32),
}

/// Largest derivative order accepted on decode.
pub const MAX_DPOW: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl RationalJson {
    pub fn encode(x: &Q) -> Self {
        RationalJson { num: x.numer().to_string(), den: x.denom().to_string() }
    }

    pub fn decode(&self) -> Result<Q, JsonError> {
        let bad = || JsonError::BadRational(format!("{}/{}", self.num, self.den));
        let n: BigInt = self.num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = self.den.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    }
}

/// A coefficient: a rational, a polynomial in k̃ (ascending powers) or a ratio of two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(RationalJson),
    Poly { ktilde: Vec<RationalJson> },
    Ratio { numer: Vec<RationalJson>, denom: Vec<RationalJson> },
}

fn poly_json(p: &KPoly) -> Vec<RationalJson> {
    p.coeffs().iter().map(RationalJson::encode).collect()
}

fn poly_decode(v: &[RationalJson]) -> Result<KPoly, JsonError> {
    Ok(KPoly::from_coeffs(v.iter().map(RationalJson::decode).collect::<Result<_, _>>()?))
}

fn any_ratfunc(c: &CoeffJson) -> Result<RatFunc, JsonError> {
    Ok(match c {
        CoeffJson::Rational(r) => RatFunc::from_q(&r.decode()?),
        CoeffJson::Poly { ktilde } => RatFunc::from_poly(poly_decode(ktilde)?),
        CoeffJson::Ratio { numer, denom } => {
            let d = poly_decode(denom)?;
            if d.is_czero() {
                return Err(JsonError::BadRational("zero denominator polynomial".into()));
            }
            RatFunc::new(poly_decode(numer)?, d)
        }
    })
}

impl std::fmt::Display for CoeffJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match any_ratfunc(self) {
            Ok(r) => write!(f, "{r}"),
            Err(_) => write!(f, "?"),
        }
    }
}

/// Coefficient types with a JSON form.
pub trait JsonCoeff: Coeff {
    fn to_json(&self) -> CoeffJson;
    fn from_json(c: &CoeffJson) -> Result<Self, JsonError>;
}

impl JsonCoeff for Q {
    fn to_json(&self) -> CoeffJson {
        CoeffJson::Rational(RationalJson::encode(self))
    }

    fn from_json(c: &CoeffJson) -> Result<Self, JsonError> {
        let r = any_ratfunc(c)?;
        let p = r.to_poly().filter(|p| p.is_const()).ok_or_else(|| JsonError::WrongKind(format!("{r} is not a rational")))?;
        Ok(p.const_term())
    }
}

impl JsonCoeff for KPoly {
    fn to_json(&self) -> CoeffJson {
        CoeffJson::Poly { ktilde: poly_json(self) }
    }

    fn from_json(c: &CoeffJson) -> Result<Self, JsonError> {
        let r = any_ratfunc(c)?;
        r.to_poly().ok_or_else(|| JsonError::WrongKind(format!("{r} is not a polynomial")))
    }
}

impl JsonCoeff for RatFunc {
    fn to_json(&self) -> CoeffJson {
        match self.to_poly() {
            Some(p) => p.to_json(),
            None => CoeffJson::Ratio { numer: poly_json(self.numer()), denom: poly_json(self.denom()) },
        }
    }

    fn from_json(c: &CoeffJson) -> Result<Self, JsonError> {
        any_ratfunc(c)
    }
}

/// `[t_num, t_den, i, j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenJson(pub i64, pub i64, pub u8, pub u8);

impl GenJson {
    pub fn encode(g: &GenIndex) -> Self {
        let (n, d) = g.t.num_den();
        GenJson(n, d, g.i, g.j)
    }

    pub fn resolve(&self, cdata: &CentralizerData) -> Result<GenIndex, JsonError> {
        let unknown = || JsonError::UnknownGenerator(format!("[{}, {}, {}, {}]", self.0, self.1, self.2, self.3));
        let t = Half::from_frac(self.0, self.1).ok_or_else(unknown)?;
        cdata.find(t, self.2 as usize, self.3 as usize).ok_or_else(unknown)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub gen: GenJson,
    pub dpow: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub factors: Vec<FactorJson>,
}

/// A differential polynomial in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<TermJson>,
}

impl ElementJson {
    pub fn encode<C: JsonCoeff>(p: &DiffPoly<GenIndex, C>) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_json(),
                factors: m.factors().iter().map(|f| FactorJson { gen: GenJson::encode(&f.sym), dpow: f.dpow }).collect(),
            })
            .collect();
        ElementJson { terms }
    }

    pub fn decode<C: JsonCoeff>(&self, cdata: &CentralizerData) -> Result<DiffPoly<GenIndex, C>, JsonError> {
        let mut raw = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = C::from_json(&t.coeff)?;
            let fs = t
                .factors
                .iter()
                .map(|f| {
                    if f.dpow > MAX_DPOW {
                        return Err(JsonError::DpowTooLarge(f.dpow));
                    }
                    Ok(Factor::new(f.gen.resolve(cdata)?, f.dpow))
                })
                .collect::<Result<Vec<_>, JsonError>>()?;
            raw.push((c, fs));
        }
        Ok(DiffPoly::normalize(raw))
    }
}

/// A λ-polynomial as its coefficient list in ascending powers of λ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaJson {
    pub lambda: Vec<ElementJson>,
}

impl LambdaJson {
    pub fn encode<C: JsonCoeff>(p: &LambdaPoly<GenIndex, C>) -> Self {
        LambdaJson { lambda: p.coeffs().iter().map(ElementJson::encode).collect() }
    }

    pub fn decode<C: JsonCoeff>(&self, cdata: &CentralizerData) -> Result<LambdaPoly<GenIndex, C>, JsonError> {
        Ok(LambdaPoly::from_coeffs(self.lambda.iter().map(|e| e.decode(cdata)).collect::<Result<_, _>>()?))
    }
}

pub fn element_from_str<C: JsonCoeff>(s: &str, cdata: &CentralizerData) -> Result<DiffPoly<GenIndex, C>, JsonError> {
    let e: ElementJson = serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))?;
    e.decode(cdata)
}

pub fn element_to_string<C: JsonCoeff>(p: &DiffPoly<GenIndex, C>) -> String {
    serde_json::to_string(&ElementJson::encode(p)).expect("element serializes")
}
