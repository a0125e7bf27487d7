//! Period profiles `T(E)`, the cumulative action `g` with `g′ = T/2π`, and its inverse `f`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PeriodProfile {
    /// `T(E) = T₀`, `g(E) = T₀E/2π`.
    Constant { period: f64 },
    /// Geodesic flow on the round sphere: `T(E) = π/√E`, `g(E) = √E − 1` (normalized by `g(1) = 0`).
    Sphere,
    /// Piecewise-linear `T` through the given points; `g(energies[0]) = 0`.
    Tabulated { energies: Vec<f64>, periods: Vec<f64> },
}

const TAU: f64 = 2.0 * std::f64::consts::PI;

impl PeriodProfile {
    pub fn build(self) -> Result<Self> {
        match &self {
            PeriodProfile::Constant { period } if !(*period > 0.0) => {
                Err(Error::Precondition("period must be positive".into()))
            }
            PeriodProfile::Tabulated { energies, periods } => {
                if energies.len() < 2 || energies.len() != periods.len() {
                    return Err(Error::Precondition("tabulated profile needs at least two (E, T) pairs".into()));
                }
                if energies.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Precondition("tabulated energies must increase".into()));
                }
                if periods.iter().any(|t| !(*t > 0.0)) {
                    return Err(Error::Precondition("g is not monotone: T must stay positive".into()));
                }
                Ok(self)
            }
            _ => Ok(self),
        }
    }

    pub fn period(&self, e: f64) -> f64 {
        match self {
            PeriodProfile::Constant { period } => *period,
            PeriodProfile::Sphere => std::f64::consts::PI / e.sqrt(),
            PeriodProfile::Tabulated { energies, periods } => {
                let i = segment(energies, e);
                let u = (e - energies[i]) / (energies[i + 1] - energies[i]);
                periods[i] + u * (periods[i + 1] - periods[i])
            }
        }
    }

    pub fn g(&self, e: f64) -> f64 {
        match self {
            PeriodProfile::Constant { period } => period * e / TAU,
            PeriodProfile::Sphere => e.sqrt() - 1.0,
            PeriodProfile::Tabulated { energies, periods } => {
                // exact integral of the linear interpolant
                let i = segment(energies, e);
                let mut acc = 0.0;
                for j in 0..i {
                    acc += 0.5 * (periods[j] + periods[j + 1]) * (energies[j + 1] - energies[j]);
                }
                acc += 0.5 * (periods[i] + self.period(e)) * (e - energies[i]);
                acc / TAU
            }
        }
    }

    /// Inverse of `g`.
    pub fn f(&self, xi: f64) -> f64 {
        match self {
            PeriodProfile::Constant { period } => TAU * xi / period,
            PeriodProfile::Sphere => (xi + 1.0) * (xi + 1.0),
            PeriodProfile::Tabulated { energies, .. } => {
                let (mut lo, mut hi) = (energies[0], *energies.last().unwrap());
                let (glo, ghi) = (self.g(lo), self.g(hi));
                // linear extrapolation outside the table
                if xi <= glo {
                    return lo + (xi - glo) * TAU / self.period(lo);
                }
                if xi >= ghi {
                    return hi + (xi - ghi) * TAU / self.period(hi);
                }
                let mut e = lo + (hi - lo) * (xi - glo) / (ghi - glo);
                for _ in 0..200 {
                    let r = self.g(e) - xi;
                    if r.abs() <= 1e-15 * (1.0 + xi.abs()) {
                        break;
                    }
                    if r > 0.0 {
                        hi = e;
                    } else {
                        lo = e;
                    }
                    let newton = e - r * TAU / self.period(e);
                    e = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
                }
                e
            }
        }
    }
}

fn segment(energies: &[f64], e: f64) -> usize {
    let n = energies.len();
    match energies.iter().position(|&x| x > e) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => n - 2,
    }
}

/// Build a profile and check it.
pub fn build_profile(kind: PeriodProfile) -> Result<PeriodProfile> {
    kind.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_two_pi_is_identity() {
        let p = build_profile(PeriodProfile::Constant { period: TAU }).unwrap();
        for e in [0.0, 0.5, 1.7] {
            assert_eq!(p.g(e), e);
            assert_eq!(p.f(e), e);
        }
    }

    #[test]
    fn sphere_action() {
        let p = PeriodProfile::Sphere;
        assert_eq!(p.g(1.0), 0.0);
        assert!((p.g(2.25) - 0.5).abs() < 1e-15);
        assert_eq!(p.f(0.5), 2.25);
    }

    #[test]
    fn tabulated_round_trip() {
        let p = build_profile(PeriodProfile::Tabulated { energies: vec![0.2, 1.0, 3.0], periods: vec![3.0, 2.0, 1.5] }).unwrap();
        for i in 0..=30 {
            let e = 0.5 + 1.5 * i as f64 / 30.0;
            assert!((p.f(p.g(e)) - e).abs() <= 1e-12);
        }
        assert!(build_profile(PeriodProfile::Tabulated { energies: vec![0.0, 1.0], periods: vec![1.0, -1.0] }).is_err());
    }
}
