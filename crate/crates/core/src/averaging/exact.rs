use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::symbolalg::{Coeff, PolySymbol};

use super::flow::{in_oscillator, PeriodicFlow};

/// How `solve_homological` treats monomials that the flow leaves fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HomologicalMode {
    /// Resonant terms weighted by `T/2 = π/gcd(λ)`, reproducing `(1/T)∫₀ᵀ t·f∘Φ_t dt`.
    #[default]
    Weighted,
    /// Resonant terms dropped; the solution with vanishing trajectory average.
    Minimal,
}

/// Trajectory average: keep the monomials with `λ·(k − m) = 0`.
pub fn average(flow: &PeriodicFlow, f: &PolySymbol) -> Result<PolySymbol> {
    flow.check(f)?;
    in_oscillator(f, |g| Ok(g.filter(|m, _| m.phase(&flow.lambda) == 0)))
}

/// The non-resonant part `f − ⟨f⟩`.
pub fn oscillating_part(flow: &PeriodicFlow, f: &PolySymbol) -> Result<PolySymbol> {
    flow.check(f)?;
    in_oscillator(f, |g| Ok(g.filter(|m, _| m.phase(&flow.lambda) != 0)))
}

/// Labels of the resonant monomials of `f` (oscillator frame).
pub fn resonant_monomials(flow: &PeriodicFlow, f: &PolySymbol) -> Result<Vec<String>> {
    let a = average(flow, &crate::symbolalg::frame::to_frame(f, crate::symbolalg::Frame::Yeta))?;
    Ok(a.terms().iter().map(|(m, c)| format!("({})*{}", c, m.label("y", "eta"))).collect())
}

/// Reject inputs whose trajectory average does not vanish.
pub fn require_zero_average(flow: &PeriodicFlow, f: &PolySymbol) -> Result<()> {
    let a = average(flow, f)?;
    if a.is_zero() {
        Ok(())
    } else {
        Err(Error::NonzeroAverage { monomials: resonant_monomials(flow, f)? })
    }
}

fn weight_resonant(flow: &PeriodicFlow) -> Coeff {
    Coeff::real(PI / flow.gcd() as f64)
}

/// Solve `{p₂, G} = f − ⟨f⟩` monomial by monomial.
pub fn solve_homological(flow: &PeriodicFlow, f: &PolySymbol, mode: HomologicalMode) -> Result<PolySymbol> {
    flow.check(f)?;
    in_oscillator(f, |g| {
        let mut out = PolySymbol::zero(g.n(), g.frame());
        for (m, c) in g.terms() {
            let ph = m.phase(&flow.lambda);
            if ph != 0 {
                // c / (i·ph) = −i·c/ph
                out.add_term(m.clone(), &(c * &Coeff::gaussian(0, -1)) * &Coeff::ratio(1, ph));
            } else if mode == HomologicalMode::Weighted {
                out.add_term(m.clone(), c * &weight_resonant(flow));
            }
        }
        Ok(out)
    })
}

/// `G₀ = (1/T)∫₀ᵀ t·f∘exp(tH_{p₂}) dt`, evaluated in closed form per monomial:
/// `(1/T)∫₀ᵀ t e^{iφt} dt` equals `T/2` for `φ = 0` and
/// `(e^{iφT}(1/(iφ) + 1/(φ²T)) − 1/(φ²T))`, which collapses to `1/(iφ)`
/// because `φT ∈ 2πℤ` for every phase of an integer flow.
pub fn g0_weighted_average(flow: &PeriodicFlow, f: &PolySymbol) -> Result<PolySymbol> {
    flow.check(f)?;
    let g = flow.gcd();
    in_oscillator(f, |h| {
        let mut out = PolySymbol::zero(h.n(), h.frame());
        for (m, c) in h.terms() {
            let ph = m.phase(&flow.lambda);
            if ph == 0 {
                out.add_term(m.clone(), c * &Coeff::real(flow.period / 2.0));
            } else {
                debug_assert_eq!(ph % g, 0);
                // e^{iφT} = 1 exactly, so the two 1/(φ²T) terms cancel.
                out.add_term(m.clone(), &(c * &Coeff::gaussian(0, -1)) * &Coeff::ratio(1, ph));
            }
        }
        Ok(out)
    })
}
