//! Normalized action `ξ₂(F)` of the level curves `⟨s⟩ = F` on the reduced sphere.

use crate::error::{Error, Result};
use crate::sphere::{LevelCurve, ReducedHamiltonian};
use crate::symbolalg::PolySymbol;

const TAU: f64 = 2.0 * std::f64::consts::PI;
/// Samples per traced level curve (multiple of 4 for the area extrapolation).
pub const CURVE_SAMPLES: usize = 512;
const TRACE_TOL: f64 = 1e-12;

/// The map `F ↦ ξ₂(1, F) = −(A(F) − A(F₀))/2π` on one Morse band, where `A(F)` is the area
/// to the left of the level curve oriented by the flow `ẏ = ∇s × y`. With this orientation
/// `dξ₂/dF = T(F)/2π > 0`.
#[derive(Clone, Debug)]
pub struct ActionMap {
    h: ReducedHamiltonian,
    hi: [f64; 3],
    lo: [f64; 3],
    pub reference: f64,
    pub reference_area: f64,
    pub band: (f64, f64),
}

impl ActionMap {
    fn curve(&self, f: f64) -> Result<LevelCurve> {
        if !(f > self.band.0 && f < self.band.1) {
            return Err(Error::Precondition(format!("level {f} is not a regular value inside the band")));
        }
        let y0 = self.h.level_point(f, &self.hi, &self.lo)?;
        self.h.trace_orbit(&y0, CURVE_SAMPLES, TRACE_TOL)
    }

    /// Left area and period of the level curve `s = f`.
    pub fn area_and_period(&self, f: f64) -> Result<(f64, f64)> {
        let c = self.curve(f)?;
        Ok((c.left_area(), c.period))
    }

    pub fn xi2(&self, f: f64) -> Result<f64> {
        Ok(-(self.area_and_period(f)?.0 - self.reference_area) / TAU)
    }

    /// Level `F` with `ξ₂(F) = target`, by safeguarded Newton iteration using `dξ₂/dF = T/2π`.
    /// `None` when the target lies outside the band.
    pub fn level_for(&self, target: f64) -> Result<Option<f64>> {
        let (b0, b1) = self.band;
        let margin = 1e-6 * (b1 - b0);
        let (mut lo, mut hi) = (b0 + margin, b1 - margin);
        let (xlo, xhi) = (self.xi2(lo)?, self.xi2(hi)?);
        if target < xlo || target > xhi {
            return Ok(None);
        }
        let mut f = lo + (hi - lo) * (target - xlo) / (xhi - xlo);
        for _ in 0..100 {
            let (area, period) = self.area_and_period(f)?;
            let r = -(area - self.reference_area) / TAU - target;
            if r.abs() < 1e-13 {
                return Ok(Some(f));
            }
            if r > 0.0 {
                hi = f;
            } else {
                lo = f;
            }
            let newton = f - r * TAU / period;
            f = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 {
                return Ok(Some(f));
            }
        }
        Ok(Some(f))
    }
}

/// Action map of `s_reduced` on the Morse band between `anchor` (default: the maximum)
/// and the minimum, normalized at the regular value `f0`.
pub fn action_coordinates(s_reduced: &PolySymbol, f0: f64, anchor: Option<[f64; 3]>) -> Result<ActionMap> {
    let h = ReducedHamiltonian::new(s_reduced)?;
    let (max_pt, lo) = h.extremes();
    let hi = anchor.unwrap_or(max_pt);
    let band = (h.value(&lo), h.value(&hi));
    let mut map = ActionMap { h, hi, lo, reference: f0, reference_area: 0.0, band };
    map.reference_area = map.area_and_period(f0)?.0;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::{parse_poly, Frame};

    #[test]
    fn level_circles_closed_form() {
        let s = parse_poly("3/8*x1^2 - 1/8", Some(3), Some(Frame::Xk)).unwrap();
        let map = action_coordinates(&s, 0.1, Some([1.0, 0.0, 0.0])).unwrap();
        let c = |f: f64| ((8.0 * f + 1.0) / 3.0).sqrt();
        for f in [0.0, 0.05, 0.1, 0.2] {
            let want = c(f) - c(0.1);
            assert!((map.xi2(f).unwrap() - want).abs() < 1e-8, "{f}");
        }
        let f = map.level_for(0.05).unwrap().unwrap();
        assert!((c(f) - c(0.1) - 0.05).abs() < 1e-10);
    }
}
