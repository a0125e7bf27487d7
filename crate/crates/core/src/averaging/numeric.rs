use crate::error::{Error, Result};
use crate::symbolalg::{Coeff, PolySymbol};

use super::flow::{flow_apply, in_oscillator, PeriodicFlow};

pub const MAX_PANELS: usize = 1 << 16;
const TOL: f64 = 1e-11;

/// Composite Simpson weights on `[0, T]` with `panels` (even) intervals.
pub fn simpson_nodes(t_end: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = t_end / panels as f64;
    (0..=panels)
        .map(|i| {
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (i as f64 * h, w * h / 3.0)
        })
        .collect()
}

fn quadrature<W: Fn(f64) -> f64>(flow: &PeriodicFlow, g: &PolySymbol, panels: usize, weight: &W) -> Result<PolySymbol> {
    let mut acc = PolySymbol::zero(g.n(), g.frame());
    for (t, w) in simpson_nodes(flow.period, panels) {
        let ft = flow_apply(flow, g, t)?.to_float();
        acc = &acc + &ft.scale(&Coeff::real(w * weight(t)));
    }
    Ok(acc)
}

/// `∫₀ᵀ weight(t)·f∘exp(tH_{p₂}) dt` by Simpson's rule, doubling `panels` until
/// successive results agree to 1e−11 in max-coefficient norm.
pub fn weighted_average_numeric<W: Fn(f64) -> f64>(
    flow: &PeriodicFlow,
    f: &PolySymbol,
    panels: usize,
    weight: W,
) -> Result<PolySymbol> {
    flow.check(f)?;
    if panels < 8 || !panels.is_power_of_two() {
        return Err(Error::Precondition("panels must be a power of two and at least 8".into()));
    }
    in_oscillator(f, |g| {
        let mut n = panels;
        let mut prev = quadrature(flow, g, n, &weight)?;
        while n < MAX_PANELS {
            n *= 2;
            let cur = quadrature(flow, g, n, &weight)?;
            if cur.max_coeff_diff(&prev) < TOL {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::NoConvergence(format!(
            "Simpson averaging did not settle below {:e} with {} panels",
            TOL, MAX_PANELS
        )))
    })
}

/// Trajectory average by quadrature; the independent check on [`super::average`].
pub fn average_numeric(flow: &PeriodicFlow, f: &PolySymbol, panels: usize) -> Result<PolySymbol> {
    let t = flow.period;
    weighted_average_numeric(flow, f, panels, move |_| 1.0 / t)
}

/// `(1/T)∫₀ᵀ t·f∘exp(tH_{p₂}) dt` by quadrature.
pub fn g0_numeric(flow: &PeriodicFlow, f: &PolySymbol, panels: usize) -> Result<PolySymbol> {
    let t = flow.period;
    weighted_average_numeric(flow, f, panels, move |s| s / t)
}
