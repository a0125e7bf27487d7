use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolalg::{frame::to_frame, Coeff, Frame, PolySymbol};

/// Periodic flow of `p₂ = Σ (λ_j/2)(x_j² + ξ_j²)` with integer frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFlow {
    pub lambda: Vec<i64>,
    pub period: f64,
    pub k0: Option<Vec<i64>>,
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn minimal_relation(lambda: &[i64]) -> Option<Vec<i64>> {
    let n = lambda.len();
    if n < 2 {
        return None;
    }
    if n == 2 {
        let g = gcd_all(lambda);
        return Some(vec![lambda[1] / g, -lambda[0] / g]);
    }
    // Brute force over a box that always contains the pairwise relation.
    let bound = lambda.iter().copied().max().unwrap();
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut k = vec![-bound; n];
    loop {
        let dot: i64 = k.iter().zip(lambda).map(|(a, b)| a * b).sum();
        if dot == 0 && k.iter().any(|&v| v != 0) && gcd_all(&k) == 1 {
            let first = k.iter().find(|&&v| v != 0).copied().unwrap();
            if first > 0 {
                let norm: i64 = k.iter().map(|v| v * v).sum();
                let better = match &best {
                    None => true,
                    Some((bn, bk)) => norm < *bn || (norm == *bn && k > *bk),
                };
                if better {
                    best = Some((norm, k.clone()));
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return best.map(|b| b.1);
            }
            k[i] += 1;
            if k[i] > bound {
                k[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}

impl PeriodicFlow {
    pub fn new(lambda: Vec<i64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Precondition("frequency vector is empty".into()));
        }
        if lambda.iter().any(|&l| l <= 0) {
            return Err(Error::Precondition("frequencies must be positive integers".into()));
        }
        let g = gcd_all(&lambda);
        let k0 = minimal_relation(&lambda);
        Ok(PeriodicFlow { period: 2.0 * PI / g as f64, k0, lambda })
    }

    /// Parse `"1,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let lambda = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad frequency '{}'", t))))
            .collect::<Result<Vec<_>>>()?;
        PeriodicFlow::new(lambda)
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn gcd(&self) -> i64 {
        gcd_all(&self.lambda)
    }

    pub(crate) fn check(&self, f: &PolySymbol) -> Result<()> {
        if f.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: f.n() });
        }
        Ok(())
    }

    /// `p₂` in the oscillator frame.
    pub fn p2(&self) -> PolySymbol {
        crate::symbolalg::harmonic_p2_osc(&self.lambda)
    }
}

/// Compose with `exp(tH_{p₂})`: each `y^k η^m` picks up `e^{itλ·(k−m)}`.
pub fn flow_apply(flow: &PeriodicFlow, f: &PolySymbol, t: f64) -> Result<PolySymbol> {
    flow.check(f)?;
    if f.frame() != Frame::Yeta {
        return Err(Error::FrameMismatch("flow_apply expects an oscillator-frame symbol".into()));
    }
    Ok(f.map_coeffs(|m, c| {
        let ph = m.phase(&flow.lambda);
        if ph == 0 {
            c.clone()
        } else {
            c * &Coeff::float(Complex64::from_polar(1.0, ph as f64 * t))
        }
    }))
}

/// Run `op` in the oscillator frame and return in the caller's frame.
pub(crate) fn in_oscillator<F>(f: &PolySymbol, op: F) -> Result<PolySymbol>
where
    F: FnOnce(&PolySymbol) -> Result<PolySymbol>,
{
    let orig = f.frame();
    let g = op(&to_frame(f, Frame::Yeta))?;
    Ok(to_frame(&g, orig))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_and_relation() {
        let f = PeriodicFlow::new(vec![1, 2]).unwrap();
        assert_eq!(f.k0, Some(vec![2, -1]));
        assert!((f.period - 2.0 * PI).abs() < 1e-15);
        let g = PeriodicFlow::new(vec![2, 4]).unwrap();
        assert!((g.period - PI).abs() < 1e-15);
        let h = PeriodicFlow::new(vec![1, 2, 3]).unwrap();
        let k = h.k0.unwrap();
        assert_eq!(k.iter().zip(&h.lambda).map(|(a, b)| a * b).sum::<i64>(), 0);
        assert_eq!(k.iter().map(|v| v * v).sum::<i64>(), 3);
        assert!(PeriodicFlow::new(vec![1]).unwrap().k0.is_none());
    }

    #[test]
    fn half_period_negates_y() {
        let flow = PeriodicFlow::new(vec![1, 1]).unwrap();
        let y1 = PolySymbol::var_x(2, Frame::Yeta, 0);
        let g = flow_apply(&flow, &y1, PI).unwrap();
        assert!((g.coeff(&y1.terms().keys().next().unwrap().clone()).to_complex() + 1.0).norm() < 1e-15);
    }
}
