//! Coefficient field for phase-space symbols.
//!
//! Exact coefficients live in Q(i)(√2): every value is `a + b·√2` with `a`, `b`
//! Gaussian rationals. Anything touched by a float becomes a `Complex64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn zero() -> Self {
        Qi::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Qi::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        Qi::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Qi::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Qi::new(&self.re / &n, -&self.im / &n))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Qi::new(&self.re * r, &self.im * r)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &Qi {
    type Output = Qi;
    fn add(self, o: &Qi) -> Qi {
        Qi::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Qi {
    type Output = Qi;
    fn sub(self, o: &Qi) -> Qi {
        Qi::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Qi {
    type Output = Qi;
    fn mul(self, o: &Qi) -> Qi {
        Qi::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi::new(-self.re.clone(), -self.im.clone())
    }
}

/// Exact element `a + b·√2` with `a, b ∈ Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exact {
    pub a: Qi,
    pub b: Qi,
}

impl Exact {
    pub fn new(a: Qi, b: Qi) -> Self {
        Exact { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Exact::new(self.a.conj(), self.b.conj())
    }

    pub fn inv(&self) -> Option<Self> {
        // (a + b√2)(a − b√2) = a² − 2b², which vanishes only at zero since √2 ∉ Q(i).
        let two = Qi::from_int(2);
        let den = &(&self.a * &self.a) - &(&two * &(&self.b * &self.b));
        let di = den.inv()?;
        Some(Exact::new(&self.a * &di, &(-&self.b) * &di))
    }

    pub fn to_complex(&self) -> Complex64 {
        self.a.to_complex() + self.b.to_complex() * std::f64::consts::SQRT_2
    }
}

/// A symbol coefficient.
#[derive(Clone, Debug)]
pub enum Coeff {
    Exact(Exact),
    Float(Complex64),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Exact(Exact::new(Qi::zero(), Qi::zero()))
    }

    pub fn one() -> Self {
        Coeff::from_int(1)
    }

    pub fn i() -> Self {
        Coeff::Exact(Exact::new(Qi::i(), Qi::zero()))
    }

    pub fn sqrt2() -> Self {
        Coeff::Exact(Exact::new(Qi::zero(), Qi::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::Exact(Exact::new(Qi::from_int(n), Qi::zero()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        Coeff::Exact(Exact::new(Qi::new(r, BigRational::zero()), Qi::zero()))
    }

    pub fn from_rational(re: BigRational, im: BigRational) -> Self {
        Coeff::Exact(Exact::new(Qi::new(re, im), Qi::zero()))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Coeff::Exact(Exact::new(
            Qi::new(
                BigRational::from_integer(re.into()),
                BigRational::from_integer(im.into()),
            ),
            Qi::zero(),
        ))
    }

    pub fn float(z: Complex64) -> Self {
        Coeff::Float(z)
    }

    pub fn real(x: f64) -> Self {
        Coeff::Float(Complex64::new(x, 0.0))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    /// True only for an exact zero; float coefficients are never dropped here.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Coeff::Exact(e) => e.is_zero(),
            Coeff::Float(z) => *z == Complex64::new(0.0, 0.0),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coeff::Exact(e) => e.to_complex(),
            Coeff::Float(z) => *z,
        }
    }

    pub fn to_float(&self) -> Coeff {
        Coeff::Float(self.to_complex())
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn conj(&self) -> Coeff {
        match self {
            Coeff::Exact(e) => Coeff::Exact(e.conj()),
            Coeff::Float(z) => Coeff::Float(z.conj()),
        }
    }

    pub fn inv(&self) -> Option<Coeff> {
        match self {
            Coeff::Exact(e) => e.inv().map(Coeff::Exact),
            Coeff::Float(z) => {
                if z.norm() == 0.0 {
                    None
                } else {
                    Some(Coeff::Float(z.inv()))
                }
            }
        }
    }

    /// Multiply by a small integer.
    pub fn mul_int(&self, n: i64) -> Coeff {
        self * &Coeff::from_int(n)
    }

    /// Divide by a nonzero integer.
    pub fn div_int(&self, n: i64) -> Coeff {
        self * &Coeff::ratio(1, n)
    }

    /// Exact real rational value, if this coefficient is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Coeff::Exact(e) if e.b.is_zero() && e.a.im.is_zero() => Some(e.a.re.clone()),
            _ => None,
        }
    }

    /// Exact equality for exact pairs; otherwise absolute tolerance `tol`.
    pub fn approx_eq(&self, o: &Coeff, tol: f64) -> bool {
        match (self, o) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => (self.to_complex() - o.to_complex()).norm() <= tol,
        }
    }

    pub fn pow(&self, k: u32) -> Coeff {
        let mut acc = Coeff::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for Coeff {
    fn eq(&self, o: &Coeff) -> bool {
        match (self, o) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => self.to_complex() == o.to_complex(),
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Exact(x), Coeff::Exact(y)) => Coeff::Exact(Exact::new(&x.a + &y.a, &x.b + &y.b)),
            _ => Coeff::Float(self.to_complex() + o.to_complex()),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Exact(x), Coeff::Exact(y)) => Coeff::Exact(Exact::new(&x.a - &y.a, &x.b - &y.b)),
            _ => Coeff::Float(self.to_complex() - o.to_complex()),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Exact(x), Coeff::Exact(y)) => {
                let two = Qi::from_int(2);
                let a = &(&x.a * &y.a) + &(&two * &(&x.b * &y.b));
                let b = &(&x.a * &y.b) + &(&x.b * &y.a);
                Coeff::Exact(Exact::new(a, b))
            }
            _ => Coeff::Float(self.to_complex() * o.to_complex()),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Exact(x) => Coeff::Exact(Exact::new(-&x.a, -&x.b)),
            Coeff::Float(z) => Coeff::Float(-z),
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render the real or imaginary component of an exact value in the on-disk
/// string form: `p/q`, `p/q*sqrt2` or `p/q+r/s*sqrt2`.
pub(crate) fn fmt_component(a: &BigRational, b: &BigRational) -> String {
    match (a.is_zero(), b.is_zero()) {
        (_, true) => fmt_rational(a),
        (true, false) => format!("{}*sqrt2", fmt_rational(b)),
        (false, false) => {
            let bs = fmt_rational(&b.abs());
            let sign = if b.is_negative() { "-" } else { "+" };
            format!("{}{}{}*sqrt2", fmt_rational(a), sign, bs)
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(e) => {
                let re = fmt_component(&e.a.re, &e.b.re);
                let im = fmt_component(&e.a.im, &e.b.im);
                if e.a.im.is_zero() && e.b.im.is_zero() {
                    write!(f, "{}", re)
                } else if e.a.re.is_zero() && e.b.re.is_zero() {
                    write!(f, "({})i", im)
                } else {
                    write!(f, "({}) + ({})i", re, im)
                }
            }
            Coeff::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{:?}", z.re)
                } else {
                    write!(f, "({:?} + {:?}i)", z.re, z.im)
                }
            }
        }
    }
}
