//! Quasi-eigenvalue lattices for the torus theorems and the barrier-top resonances.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolalg::{to_oscillator, Frame, PolySymbol};

use super::action::{action_coordinates, ActionMap};
use super::profile::PeriodProfile;
use super::rectangles::{cluster_center, TorusData};

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Nondegenerate `Im ⟨s⟩`, `h ≪ ε` (vanishing subprincipal symbol).
    #[serde(rename = "thm3.1")]
    Thm31,
    /// Sub-cluster lattice, `h ≪ ε ≪ h^{1/2}`.
    #[serde(rename = "thm4.2")]
    Thm42,
    /// `h^{1/2} ≪ ε`, needs `⟨⟨t⟩⟩_∞`.
    #[serde(rename = "thm4.3")]
    Thm43,
    /// `ε ∼ h^{1/2}`, needs `⟨⟨t⟩⟩_∞` and `⟨⟨Im q₁⟩⟩_∞`.
    #[serde(rename = "thm4.4")]
    Thm44,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm3.1" => Ok(Regime::Thm31),
            "thm4.2" => Ok(Regime::Thm42),
            "thm4.3" => Ok(Regime::Thm43),
            "thm4.4" => Ok(Regime::Thm44),
            _ => Err(Error::Parse(format!("unknown regime `{s}`"))),
        }
    }
}

/// `c·ξ₁^i ξ₂^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionTerm {
    pub i: u32,
    pub j: u32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `⟨s⟩` as a function of the actions `ξ = (ξ₁, ξ₂)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SAvgModel {
    Zero,
    /// Polynomial in the actions.
    Action { terms: Vec<ActionTerm> },
    /// `⟨s⟩` given on the unit-energy reduced sphere as `s(y)`, homogeneous of degree
    /// `homogeneity` in `|ξ|`. The reduced sphere at energy `E` has radius `R = √E` and
    /// `ξ₂ = R·a(F R^{−homogeneity}) + (R − 1)A₀/2π`, where `a` is the unit-sphere action map
    /// normalized at `reference` on the band selected by `anchor`.
    ReducedSphere { s_reduced: PolySymbol, reference: f64, anchor: Option<[f64; 3]>, homogeneity: i32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiEigLattice {
    pub profile: PeriodProfile,
    pub torus: TorusData,
    pub h: f64,
    pub epsilon: f64,
    pub s_avg: SAvgModel,
    pub t_avg_inf: Option<f64>,
    pub im_q1_inf: Option<f64>,
    pub regime: Regime,
}

impl QuasiEigLattice {
    /// Check the regime's parameter range and required inputs.
    pub fn validate(&self) -> Result<()> {
        let (h, e) = (self.h, self.epsilon);
        if !(h > 0.0 && e > 0.0) {
            return Err(Error::Regime("h and ε must be positive".into()));
        }
        let sqrt_h = h.sqrt();
        let complex_s = matches!(&self.s_avg, SAvgModel::Action { terms } if terms.iter().any(|t| t.im != 0.0));
        match self.regime {
            Regime::Thm31 => {
                if !(h < e) {
                    return Err(Error::Regime("thm3.1 needs h ≪ ε".into()));
                }
            }
            Regime::Thm42 => {
                if !(h < e && e < sqrt_h) {
                    return Err(Error::Regime("thm4.2 needs h ≪ ε ≪ h^{1/2}".into()));
                }
            }
            Regime::Thm43 => {
                if !(e > sqrt_h) {
                    return Err(Error::Regime("thm4.3 needs h^{1/2} ≪ ε".into()));
                }
                if self.t_avg_inf.is_none() {
                    return Err(Error::Regime("thm4.3 needs ⟨⟨t⟩⟩_∞".into()));
                }
            }
            Regime::Thm44 => {
                let r = e / sqrt_h;
                if !(0.1..=10.0).contains(&r) {
                    return Err(Error::Regime("thm4.4 needs ε ∼ h^{1/2} (ratio within [0.1, 10])".into()));
                }
                if self.t_avg_inf.is_none() || self.im_q1_inf.is_none() {
                    return Err(Error::Regime("thm4.4 needs ⟨⟨t⟩⟩_∞ and ⟨⟨Im q₁⟩⟩_∞".into()));
                }
            }
        }
        if complex_s && self.regime != Regime::Thm31 {
            return Err(Error::Regime("the section-4 regimes need ⟨s⟩ real on the real domain".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KWindow {
    pub k1: (i64, i64),
    pub k2: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub k: [i64; 2],
    pub z: Complex64,
}

fn eval_action(terms: &[ActionTerm], xi1: f64, xi2: f64) -> Complex64 {
    terms
        .iter()
        .map(|t| Complex64::new(t.re, t.im) * xi1.powi(t.i as i32) * xi2.powi(t.j as i32))
        .sum()
}

/// Leading-order quasi-eigenvalues `f(ξ₁) + ε²⟨s⟩(ξ) + iε³⟨⟨t⟩⟩_∞ [+ hε⟨⟨Im q₁⟩⟩_∞]`
/// at `ξ = h(k − α/4) − S/2π`, skipping `k` outside the domain of the action map.
pub fn quasi_lattice(lat: &QuasiEigLattice, window: KWindow) -> Result<Vec<LatticePoint>> {
    lat.validate()?;
    let (h, e) = (lat.h, lat.epsilon);
    let mut im_shift = 0.0;
    if matches!(lat.regime, Regime::Thm43 | Regime::Thm44) {
        im_shift += e.powi(3) * lat.t_avg_inf.unwrap();
    }
    if lat.regime == Regime::Thm44 {
        im_shift += h * e * lat.im_q1_inf.unwrap();
    }
    let map: Option<(ActionMap, i32)> = match &lat.s_avg {
        SAvgModel::ReducedSphere { s_reduced, reference, anchor, homogeneity } => {
            Some((action_coordinates(s_reduced, *reference, *anchor)?, *homogeneity))
        }
        _ => None,
    };
    let ks: Vec<[i64; 2]> = (window.k1.0..=window.k1.1)
        .flat_map(|a| (window.k2.0..=window.k2.1).map(move |b| [a, b]))
        .collect();
    let points: Vec<Option<LatticePoint>> = ks
        .par_iter()
        .map(|&k| {
            let center = cluster_center(&lat.profile, &lat.torus, h, k[0]);
            let xi1 = lat.torus.xi(0, h, k[0]);
            let xi2 = lat.torus.xi(1, h, k[1]);
            let s = match (&lat.s_avg, &map) {
                (SAvgModel::Zero, _) => Complex64::new(0.0, 0.0),
                (SAvgModel::Action { terms }, _) => eval_action(terms, xi1, xi2),
                (SAvgModel::ReducedSphere { .. }, Some((m, deg))) => {
                    if !(center > 0.0) {
                        return Ok(None);
                    }
                    let r = center.sqrt();
                    let target = (xi2 - (r - 1.0) * m.reference_area / TAU) / r;
                    match m.level_for(target)? {
                        Some(f) => Complex64::new(f * r.powi(*deg), 0.0),
                        None => return Ok(None),
                    }
                }
                (SAvgModel::ReducedSphere { .. }, None) => unreachable!(),
            };
            let re = center + e * e * s.re;
            let im = e * e * s.im + im_shift;
            Ok(Some(LatticePoint { k, z: Complex64::new(re, im) }))
        })
        .collect::<Result<_>>()?;
    Ok(points.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierPoint {
    pub k: [i64; 2],
    #[serde(rename = "E")]
    pub e: Complex64,
    /// `⟨s⟩/p²`, the parabola coefficient through this point.
    pub ratio: f64,
    /// The critical value `A` whose exclusion zone contains the point.
    pub exclusion: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierParams {
    pub lambda: Vec<i64>,
    pub s_avg: PolySymbol,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub h: f64,
    pub epsilon: f64,
    pub torus: TorusData,
    /// Critical values `A` of `⟨s⟩` on `p₂⁻¹(1)`.
    pub critical: Vec<f64>,
    pub eta: f64,
}

/// Diagonal part of `⟨s⟩` as a function of the actions `I_j = (x_j² + ξ_j²)/2`:
/// `y^k η^k ↦ Π(−iI_j)^{k_j}`; off-diagonal resonant monomials are dropped.
pub fn diagonal_in_actions(s_avg: &PolySymbol) -> Result<impl Fn(&[f64]) -> Complex64> {
    let osc = match s_avg.frame() {
        Frame::Yeta => s_avg.clone(),
        Frame::Xk => to_oscillator(s_avg)?,
    };
    let terms: Vec<(Complex64, Vec<u32>)> = osc
        .terms()
        .iter()
        .filter(|(m, _)| m.xexp == m.kexp)
        .map(|(m, c)| (c.to_complex(), m.xexp.clone()))
        .collect();
    Ok(move |act: &[f64]| {
        terms
            .iter()
            .map(|(c, e)| {
                e.iter().zip(act).fold(*c, |acc, (&k, &i)| acc * Complex64::new(0.0, -i).powu(k))
            })
            .sum()
    })
}

/// Barrier-top resonances `E = E₀ − iε²(p(ξ₁) + iε²⟨s⟩(ξ))` with `h̃ = h/ε²` in the
/// quantization, for two degrees of freedom. The actions are `ξ₁ = p₂/gcd(λ)` and
/// `ξ₂ = I₁`. Points are tagged when `|⟨s⟩/p² − A| < η` for a critical value `A`.
pub fn barrier_lattice(params: &BarrierParams, window: KWindow) -> Result<Vec<BarrierPoint>> {
    if params.lambda.len() != 2 || params.s_avg.n() != 2 {
        return Err(Error::Precondition("barrier lattices are implemented for two degrees of freedom".into()));
    }
    let (l1, l2) = (params.lambda[0] as f64, params.lambda[1] as f64);
    let g = num_integer::gcd(params.lambda[0], params.lambda[1]) as f64;
    let s = diagonal_in_actions(&params.s_avg)?;
    let ht = params.h / (params.epsilon * params.epsilon);
    let e2 = params.epsilon * params.epsilon;
    let mut out = Vec::new();
    for k1 in window.k1.0..=window.k1.1 {
        for k2 in window.k2.0..=window.k2.1 {
            let xi1 = params.torus.xi(0, ht, k1);
            let xi2 = params.torus.xi(1, ht, k2);
            let i1 = xi2;
            let i2 = (g * xi1 - l1 * i1) / l2;
            if !(i1 >= 0.0 && i2 >= 0.0 && xi1 > 0.0) {
                continue;
            }
            let p = g * xi1;
            let sv = s(&[i1, i2]).re;
            let e = Complex64::new(params.e0 + e2 * e2 * sv, -e2 * p);
            let ratio = sv / (p * p);
            let exclusion = params.critical.iter().copied().find(|a| (ratio - a).abs() < params.eta);
            out.push(BarrierPoint { k: [k1, k2], e, ratio, exclusion });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::rectangles::cluster_rectangles;
    use crate::spectra::WidthConstants;
    use crate::symbolalg::parse_poly;

    fn lattice(s: SAvgModel, regime: Regime, h: f64, e: f64) -> QuasiEigLattice {
        QuasiEigLattice {
            profile: PeriodProfile::Sphere,
            torus: TorusData::sphere(0.0),
            h,
            epsilon: e,
            s_avg: s,
            t_avg_inf: None,
            im_q1_inf: None,
            regime,
        }
    }

    #[test]
    fn zero_corrections_reproduce_centers() {
        let h: f64 = 1e-2;
        let lat = lattice(SAvgModel::Zero, Regime::Thm42, h, h.powf(0.7));
        let pts = quasi_lattice(&lat, KWindow { k1: (90, 110), k2: (0, 0) }).unwrap();
        let rects = cluster_rectangles(&lat.profile, &lat.torus, h, lat.epsilon, (0.0, 10.0), WidthConstants::default());
        for p in &pts {
            let r = rects.rects.iter().find(|r| r.k1 == p.k[0]).unwrap();
            assert_eq!(p.z.re.to_bits(), r.center.to_bits());
            assert_eq!(p.z.im, 0.0);
        }
    }

    #[test]
    fn regime_checks() {
        let mut lat = lattice(SAvgModel::Zero, Regime::Thm43, 1e-2, 0.5);
        assert!(lat.validate().is_err());
        lat.t_avg_inf = Some(0.0);
        assert!(lat.validate().is_ok());
        lat.regime = Regime::Thm42;
        assert!(lat.validate().is_err());
    }

    #[test]
    fn sphere_subclusters_within_critical_range() {
        let h = 1.0 / 40.5;
        let s = parse_poly("3/8*x1^2 - 1/8", Some(3), Some(Frame::Xk)).unwrap();
        let model = SAvgModel::ReducedSphere { s_reduced: s.clone(), reference: 0.1, anchor: Some([1.0, 0.0, 0.0]), homogeneity: -2 };
        let a0 = action_coordinates(&s, 0.1, Some([1.0, 0.0, 0.0])).unwrap().reference_area;
        let mut lat = lattice(model, Regime::Thm42, h, h.powf(0.7));
        lat.torus = TorusData::sphere(a0);
        let pts = quasi_lattice(&lat, KWindow { k1: (40, 40), k2: (-40, 0) }).unwrap();
        assert!(pts.len() >= 30, "{}", pts.len());
        let e2 = lat.epsilon * lat.epsilon;
        for p in &pts {
            let v = (p.z.re - 1.0) / e2;
            // Bohr–Sommerfeld on the cap: y₁ = m/(k+½) with m = k + k₂
            let m = 40.0 + p.k[1] as f64;
            let y1 = m / 40.5;
            assert!((v - (0.375 * y1 * y1 - 0.125)).abs() < 1e-7, "{v} {y1}");
        }
    }

    #[test]
    fn barrier_tags_critical_parabolas() {
        let s = parse_poly("15/4*((x1^2 + k1^2)/2)^2", Some(2), Some(Frame::Xk)).unwrap();
        let params = BarrierParams {
            lambda: vec![1, 1],
            s_avg: s,
            e0: 1.0,
            h: 1e-3,
            epsilon: 0.1,
            torus: TorusData { s: [0.0, 0.0], alpha: [-2, -2] },
            critical: vec![0.0, 3.75],
            eta: 0.05,
        };
        let pts = barrier_lattice(&params, KWindow { k1: (0, 30), k2: (0, 30) }).unwrap();
        assert!(pts.iter().any(|p| p.exclusion == Some(0.0)));
        assert!(pts.iter().any(|p| p.exclusion == Some(3.75)));
        assert!(pts.iter().all(|p| -(p.e.im) / 0.01 >= 0.0));
    }
}
