use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coeff::Coeff;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Coordinate frame of a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// Real canonical coordinates `(x, ξ)`.
    #[serde(rename = "xk")]
    Xk,
    /// Oscillator coordinates `(y, η)`.
    #[serde(rename = "yeta")]
    Yeta,
}

impl Frame {
    pub fn as_str(&self) -> &'static str {
        match self {
            Frame::Xk => "xk",
            Frame::Yeta => "yeta",
        }
    }

    pub(crate) fn names(&self) -> (&'static str, &'static str) {
        match self {
            Frame::Xk => ("x", "k"),
            Frame::Yeta => ("y", "eta"),
        }
    }
}

/// Sparse polynomial on phase space with no stored exact zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySymbol {
    n: usize,
    frame: Frame,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PolySymbol {
    pub fn zero(n: usize, frame: Frame) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        PolySymbol { n, frame, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, frame: Frame, c: Coeff) -> Self {
        PolySymbol::term(n, frame, Monomial::one(n), c)
    }

    pub fn term(n: usize, frame: Frame, m: Monomial, c: Coeff) -> Self {
        let mut p = PolySymbol::zero(n, frame);
        p.add_term(m, c);
        p
    }

    /// Position variable `x_{j+1}` (or `y_{j+1}`).
    pub fn var_x(n: usize, frame: Frame, j: usize) -> Self {
        PolySymbol::term(n, frame, Monomial::x(n, j), Coeff::one())
    }

    /// Momentum variable `ξ_{j+1}` (or `η_{j+1}`).
    pub fn var_k(n: usize, frame: Frame, j: usize) -> Self {
        PolySymbol::term(n, frame, Monomial::k(n, j), Coeff::one())
    }

    pub fn from_terms<I>(n: usize, frame: Frame, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut p = PolySymbol::zero(n, frame);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Coeff> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    /// Accumulate `c·m`, removing the entry if it cancels exactly.
    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        assert_eq!(m.n(), self.n, "monomial dimension mismatch");
        if c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = &*e + &c;
                if s.is_exact_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn check_compatible(&self, o: &PolySymbol) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: o.n });
        }
        if self.frame != o.frame {
            return Err(Error::FrameMismatch(format!(
                "{} vs {}",
                self.frame.as_str(),
                o.frame.as_str()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &PolySymbol) -> Result<PolySymbol> {
        self.check_compatible(o)?;
        Ok(self + o)
    }

    pub fn checked_sub(&self, o: &PolySymbol) -> Result<PolySymbol> {
        self.check_compatible(o)?;
        Ok(self - o)
    }

    pub fn checked_mul(&self, o: &PolySymbol) -> Result<PolySymbol> {
        self.check_compatible(o)?;
        Ok(self * o)
    }

    pub fn scale(&self, c: &Coeff) -> PolySymbol {
        PolySymbol::from_terms(
            self.n,
            self.frame,
            self.terms.iter().map(|(m, v)| (m.clone(), v * c)),
        )
    }

    pub fn pow(&self, k: u32) -> PolySymbol {
        let mut acc = PolySymbol::constant(self.n, self.frame, Coeff::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<F: Fn(&Monomial, &Coeff) -> Coeff>(&self, f: F) -> PolySymbol {
        PolySymbol::from_terms(
            self.n,
            self.frame,
            self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))),
        )
    }

    pub fn filter<F: Fn(&Monomial, &Coeff) -> bool>(&self, f: F) -> PolySymbol {
        PolySymbol::from_terms(
            self.n,
            self.frame,
            self.terms
                .iter()
                .filter(|(m, c)| f(m, c))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn to_float(&self) -> PolySymbol {
        self.map_coeffs(|_, c| c.to_float())
    }

    /// Drop float coefficients of modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> PolySymbol {
        self.filter(|_, c| c.is_exact() || c.abs() > tol)
    }

    /// Complex conjugate of every coefficient.
    pub fn conj_coeffs(&self) -> PolySymbol {
        self.map_coeffs(|_, c| c.conj())
    }

    /// Largest coefficient modulus of `self − o`.
    pub fn max_coeff_diff(&self, o: &PolySymbol) -> f64 {
        let d = self - o;
        d.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// Exact equality when both sides are exact; coefficientwise tolerance otherwise.
    pub fn approx_eq(&self, o: &PolySymbol, tol: f64) -> bool {
        if self.n != o.n || self.frame != o.frame {
            return false;
        }
        if self.is_exact() && o.is_exact() {
            return self == o;
        }
        self.max_coeff_diff(o) <= tol
    }

    /// ∂/∂x_j (position slot `j`).
    pub fn dx(&self, j: usize) -> PolySymbol {
        let mut out = PolySymbol::zero(self.n, self.frame);
        for (m, c) in &self.terms {
            let e = m.xexp[j];
            if e > 0 {
                let mut mm = m.clone();
                mm.xexp[j] -= 1;
                out.add_term(mm, c.mul_int(e as i64));
            }
        }
        out
    }

    /// ∂/∂ξ_j (momentum slot `j`).
    pub fn dk(&self, j: usize) -> PolySymbol {
        let mut out = PolySymbol::zero(self.n, self.frame);
        for (m, c) in &self.terms {
            let e = m.kexp[j];
            if e > 0 {
                let mut mm = m.clone();
                mm.kexp[j] -= 1;
                out.add_term(mm, c.mul_int(e as i64));
            }
        }
        out
    }

    /// Poisson bracket `{self, g} = Σ ∂_ξ self·∂_x g − ∂_x self·∂_ξ g`.
    ///
    /// Panics on incompatible operands; see [`poisson_bracket`] for the checked form.
    pub fn bracket(&self, g: &PolySymbol) -> PolySymbol {
        self.check_compatible(g).expect("bracket of incompatible symbols");
        let n = self.n;
        let mut out = PolySymbol::zero(n, self.frame);
        for (a, ca) in &self.terms {
            for (b, cb) in &g.terms {
                let cab = ca * cb;
                for j in 0..n {
                    let w = a.kexp[j] as i64 * b.xexp[j] as i64 - a.xexp[j] as i64 * b.kexp[j] as i64;
                    if w == 0 {
                        continue;
                    }
                    let mut m = a.mul(b);
                    m.xexp[j] -= 1;
                    m.kexp[j] -= 1;
                    out.add_term(m, cab.mul_int(w));
                }
            }
        }
        out
    }

    /// Evaluate at `(x₁..x_n, ξ₁..ξ_n)`, summing in monomial order.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Complex64]) -> Complex64 {
        let n = self.n;
        let maxd = self.degree() as usize;
        let mut pows = vec![vec![Complex64::new(1.0, 0.0); maxd + 1]; 2 * n];
        for (v, row) in pows.iter_mut().enumerate() {
            for e in 1..=maxd {
                row[e] = row[e - 1] * point[v];
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for j in 0..n {
                t *= pows[j][m.xexp[j] as usize] * pows[n + j][m.kexp[j] as usize];
            }
            acc += t;
        }
        acc
    }

    /// Evaluate at a real point.
    pub fn eval_real(&self, point: &[f64]) -> Complex64 {
        let p: Vec<Complex64> = point.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.eval_unchecked(&p)
    }

    /// Replace each position variable by `xs[j]` and momentum variable by `ks[j]`.
    /// The images must all share one dimension and frame, which becomes the result's.
    pub fn substitute(&self, xs: &[PolySymbol], ks: &[PolySymbol]) -> PolySymbol {
        assert_eq!(xs.len(), self.n);
        assert_eq!(ks.len(), self.n);
        let (n2, fr) = (xs[0].n, xs[0].frame);
        let maxd = self.degree() as usize;
        let table = |imgs: &[PolySymbol]| -> Vec<Vec<PolySymbol>> {
            imgs.iter()
                .map(|p| {
                    let mut row = vec![PolySymbol::constant(n2, fr, Coeff::one())];
                    for e in 1..=maxd {
                        let next = &row[e - 1] * p;
                        row.push(next);
                    }
                    row
                })
                .collect()
        };
        let xp = table(xs);
        let kp = table(ks);
        let mut out = PolySymbol::zero(n2, fr);
        for (m, c) in &self.terms {
            let mut t = PolySymbol::constant(n2, fr, c.clone());
            for j in 0..self.n {
                if m.xexp[j] > 0 {
                    t = &t * &xp[j][m.xexp[j] as usize];
                }
                if m.kexp[j] > 0 {
                    t = &t * &kp[j][m.kexp[j] as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> PolySymbol {
        self.filter(|m, _| m.degree() == d)
    }

    /// Human-readable rendering in grlex-descending order.
    pub fn to_expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let (xn, kn) = self.frame.names();
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("({})", c)
                } else {
                    format!("({})*{}", c, m.label(xn, kn))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl Add for &PolySymbol {
    type Output = PolySymbol;
    fn add(self, o: &PolySymbol) -> PolySymbol {
        self.check_compatible(o).expect("sum of incompatible symbols");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolySymbol {
    type Output = PolySymbol;
    fn sub(self, o: &PolySymbol) -> PolySymbol {
        self.check_compatible(o).expect("difference of incompatible symbols");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &PolySymbol {
    type Output = PolySymbol;
    fn mul(self, o: &PolySymbol) -> PolySymbol {
        self.check_compatible(o).expect("product of incompatible symbols");
        let mut out = PolySymbol::zero(self.n, self.frame);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        self.map_coeffs(|_, c| -c)
    }
}

/// Checked Poisson bracket `{f, g} = H_f g`.
pub fn poisson_bracket(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    f.check_compatible(g)?;
    Ok(f.bracket(g))
}

/// Checked evaluation.
pub fn evaluate(f: &PolySymbol, point: &[Complex64]) -> Result<Complex64> {
    f.evaluate(point)
}

/// The (p, q, r, w) expansion coefficients of a perturbed symbol.
#[derive(Clone, Debug)]
pub struct PerturbationSeries {
    pub p: PolySymbol,
    pub q: PolySymbol,
    pub r: PolySymbol,
    pub w: PolySymbol,
    pub epsilon: f64,
}

impl PerturbationSeries {
    pub fn new(p: PolySymbol, q: PolySymbol, r: PolySymbol, w: PolySymbol, epsilon: f64) -> Result<Self> {
        p.check_compatible(&q)?;
        p.check_compatible(&r)?;
        p.check_compatible(&w)?;
        if !(epsilon > 0.0) {
            return Err(Error::Precondition("epsilon must be positive".into()));
        }
        Ok(PerturbationSeries { p, q, r, w, epsilon })
    }

    /// `p + iεq + ε²r + iε³w` as one float symbol.
    pub fn full_symbol(&self) -> PolySymbol {
        let e = self.epsilon;
        let ie = Coeff::float(Complex64::new(0.0, e));
        let e2 = Coeff::real(e * e);
        let ie3 = Coeff::float(Complex64::new(0.0, e * e * e));
        let mut s = self.p.to_float();
        s = &s + &self.q.scale(&ie);
        s = &s + &self.r.scale(&e2);
        &s + &self.w.scale(&ie3)
    }
}
