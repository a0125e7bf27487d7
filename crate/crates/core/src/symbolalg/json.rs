//! Canonical on-disk polynomial format.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::coeff::{fmt_component, Coeff, Exact, Qi};
use super::monomial::Monomial;
use super::poly::{Frame, PolySymbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub xexp: Vec<u32>,
    pub kexp: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub n: usize,
    pub frame: Frame,
    pub terms: Vec<TermJson>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{}'", s));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parse `p/q`, `r*sqrt2` or `p/q±r/s*sqrt2` into `(a, b)` meaning `a + b√2`.
fn parse_exact_component(s: &str) -> Result<(BigRational, BigRational)> {
    let s = s.trim();
    if let Some(head) = s.strip_suffix("*sqrt2") {
        let split = head
            .char_indices()
            .skip(1)
            .filter(|(i, c)| (*c == '+' || *c == '-') && !head[..*i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        return match split {
            Some(i) => {
                let a = parse_rational(&head[..i])?;
                let b = parse_rational(head[i..].trim_start_matches('+'))?;
                Ok((a, b))
            }
            None => Ok((BigRational::zero(), parse_rational(head)?)),
        };
    }
    Ok((parse_rational(s)?, BigRational::zero()))
}

fn is_float_text(s: &str) -> bool {
    let t = s.trim().to_ascii_lowercase();
    !t.contains("sqrt2") && (t.contains('.') || t.contains('e') || t.contains("inf") || t.contains("nan"))
}

/// Decode a coefficient from its `re` and `im` strings.
pub fn parse_coeff(re: &str, im: &str) -> Result<Coeff> {
    if is_float_text(re) || is_float_text(im) {
        let f = |s: &str| -> Result<f64> {
            if is_float_text(s) {
                s.trim().parse().map_err(|_| Error::Parse(format!("bad float '{}'", s)))
            } else {
                let (a, b) = parse_exact_component(s)?;
                Ok(Coeff::from_rational(a, BigRational::zero()).to_complex().re
                    + Coeff::from_rational(b, BigRational::zero()).to_complex().re * std::f64::consts::SQRT_2)
            }
        };
        return Ok(Coeff::Float(Complex64::new(f(re)?, f(im)?)));
    }
    let (ar, br) = parse_exact_component(re)?;
    let (ai, bi) = parse_exact_component(im)?;
    Ok(Coeff::Exact(Exact::new(Qi::new(ar, ai), Qi::new(br, bi))))
}

/// Encode a coefficient as `(re, im)` strings.
pub fn format_coeff(c: &Coeff) -> (String, String) {
    match c {
        Coeff::Exact(e) => (fmt_component(&e.a.re, &e.b.re), fmt_component(&e.a.im, &e.b.im)),
        Coeff::Float(z) => (format!("{:?}", z.re), format!("{:?}", z.im)),
    }
}

impl From<&PolySymbol> for PolyJson {
    fn from(p: &PolySymbol) -> Self {
        PolyJson {
            n: p.n(),
            frame: p.frame(),
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| {
                    let (re, im) = format_coeff(c);
                    TermJson { xexp: m.xexp.clone(), kexp: m.kexp.clone(), re, im }
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for PolySymbol {
    type Error = Error;
    fn try_from(j: &PolyJson) -> Result<PolySymbol> {
        if j.n == 0 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        let mut p = PolySymbol::zero(j.n, j.frame);
        for t in &j.terms {
            if t.xexp.len() != j.n || t.kexp.len() != j.n {
                return Err(Error::DimensionMismatch { expected: j.n, found: t.xexp.len().max(t.kexp.len()) });
            }
            p.add_term(Monomial::new(t.xexp.clone(), t.kexp.clone()), parse_coeff(&t.re, &t.im)?);
        }
        Ok(p)
    }
}

impl Serialize for PolySymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolySymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        PolySymbol::try_from(&j).map_err(serde::de::Error::custom)
    }
}

pub fn to_json(p: &PolySymbol) -> String {
    serde_json::to_string_pretty(p).expect("polynomial serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<PolySymbol> {
    Ok(serde_json::from_str(s)?)
}
