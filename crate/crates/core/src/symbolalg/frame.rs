//! Oscillator coordinates `y = (x − iξ)/√2`, `η = (x + iξ)/(i√2)`.
//!
//! The substitution is symplectic, so `{y_j, η_j} = 1` and the bracket formula
//! is the same in both frames.

use super::coeff::Coeff;
use super::poly::{Frame, PolySymbol};
use crate::error::{Error, Result};

fn half_sqrt2() -> Coeff {
    &Coeff::sqrt2() * &Coeff::ratio(1, 2)
}

/// Rewrite a real-canonical symbol in `(y, η)`.
pub fn to_oscillator(f: &PolySymbol) -> Result<PolySymbol> {
    if f.frame() != Frame::Xk {
        return Err(Error::FrameMismatch("to_oscillator expects an xk symbol".into()));
    }
    let n = f.n();
    let s = half_sqrt2();
    let y = |j| PolySymbol::var_x(n, Frame::Yeta, j);
    let eta = |j| PolySymbol::var_k(n, Frame::Yeta, j);
    // x = (y + iη)/√2, ξ = (η + iy)/√2
    let xs: Vec<_> = (0..n)
        .map(|j| (&y(j) + &eta(j).scale(&Coeff::i())).scale(&s))
        .collect();
    let ks: Vec<_> = (0..n)
        .map(|j| (&eta(j) + &y(j).scale(&Coeff::i())).scale(&s))
        .collect();
    Ok(f.substitute(&xs, &ks))
}

/// Rewrite an oscillator-frame symbol in `(x, ξ)`.
pub fn from_oscillator(f: &PolySymbol) -> Result<PolySymbol> {
    if f.frame() != Frame::Yeta {
        return Err(Error::FrameMismatch("from_oscillator expects a yeta symbol".into()));
    }
    let n = f.n();
    let s = half_sqrt2();
    let x = |j| PolySymbol::var_x(n, Frame::Xk, j);
    let k = |j| PolySymbol::var_k(n, Frame::Xk, j);
    let mi = -&Coeff::i();
    // y = (x − iξ)/√2, η = (ξ − ix)/√2
    let ys: Vec<_> = (0..n)
        .map(|j| (&x(j) + &k(j).scale(&mi)).scale(&s))
        .collect();
    let etas: Vec<_> = (0..n)
        .map(|j| (&k(j) + &x(j).scale(&mi)).scale(&s))
        .collect();
    Ok(f.substitute(&ys, &etas))
}

/// `p₂ = Σ (λ_j/2)(x_j² + ξ_j²)` in the real frame.
pub fn harmonic_p2(lambda: &[i64]) -> PolySymbol {
    let n = lambda.len();
    let mut p = PolySymbol::zero(n, Frame::Xk);
    for (j, &l) in lambda.iter().enumerate() {
        let x = PolySymbol::var_x(n, Frame::Xk, j);
        let k = PolySymbol::var_k(n, Frame::Xk, j);
        p = &p + &(&(&x * &x) + &(&k * &k)).scale(&Coeff::ratio(l, 2));
    }
    p
}

/// `p₂ = Σ iλ_j y_j η_j` in the oscillator frame.
pub fn harmonic_p2_osc(lambda: &[i64]) -> PolySymbol {
    let n = lambda.len();
    let mut p = PolySymbol::zero(n, Frame::Yeta);
    for (j, &l) in lambda.iter().enumerate() {
        let y = PolySymbol::var_x(n, Frame::Yeta, j);
        let e = PolySymbol::var_k(n, Frame::Yeta, j);
        p = &p + &(&y * &e).scale(&Coeff::gaussian(0, l));
    }
    p
}

/// Convert to the requested frame (no-op if already there).
pub fn to_frame(f: &PolySymbol, frame: Frame) -> PolySymbol {
    match (f.frame(), frame) {
        (a, b) if a == b => f.clone(),
        (Frame::Xk, Frame::Yeta) => to_oscillator(f).expect("frame checked"),
        _ => from_oscillator(f).expect("frame checked"),
    }
}
