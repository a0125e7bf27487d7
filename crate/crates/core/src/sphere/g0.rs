use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolalg::{Coeff, Frame, PolySymbol};

use super::radon::{check_sphere_symbol, radon_average, radon_z, reduce_to_circle_space};
use super::zcoords::{from_z, simplest, to_z, zbar_rules};

/// Gradient `(∇_x f, ∇_ξ f)` at `|ξ| = 1` of the extension of `f` that is
/// homogeneous of degree `kappa` in `ξ` (or of `f` itself when `kappa` is `None`).
fn gradient(f: &PolySymbol, kappa: Option<i64>) -> ([PolySymbol; 3], [PolySymbol; 3]) {
    let gx = [f.dx(0), f.dx(1), f.dx(2)];
    let mut gk = [f.dk(0), f.dk(1), f.dk(2)];
    if let Some(kap) = kappa {
        // ∂_ξ (m |ξ|^{κ−|b|}) = ∂_ξ m + (κ − |b|) m ξ at |ξ| = 1
        let corr = f.map_coeffs(|m, c| c.mul_int(kap - m.kdegree() as i64));
        for (j, g) in gk.iter_mut().enumerate() {
            *g = &*g + &(&corr * &PolySymbol::var_k(3, Frame::Xk, j));
        }
    }
    (gx, gk)
}

fn dot(a: &[PolySymbol; 3], b: &[PolySymbol; 3]) -> PolySymbol {
    (0..3).fold(PolySymbol::zero(3, Frame::Xk), |s, j| &s + &(&a[j] * &b[j]))
}

/// `{f, g}_Σ` at points of `Σ ∩ p⁻¹(1)`, where `f` and `g` stand for their
/// `ξ`-homogeneous extensions of the given degrees.
pub fn constrained_bracket_homogeneous(
    f: &PolySymbol,
    kf: Option<i64>,
    g: &PolySymbol,
    kg: Option<i64>,
) -> Result<PolySymbol> {
    check_sphere_symbol(f)?;
    check_sphere_symbol(g)?;
    let (fx, fk) = gradient(f, kf);
    let (gx, gk) = gradient(g, kg);
    let x: [PolySymbol; 3] = std::array::from_fn(|j| PolySymbol::var_x(3, Frame::Xk, j));
    let k: [PolySymbol; 3] = std::array::from_fn(|j| PolySymbol::var_k(3, Frame::Xk, j));
    let fg = &dot(&fk, &gx) - &dot(&fx, &gk);
    // {f,h₂} = ξ·∇_ξ f − x·∇_x f, {h₁,g} = −2x·∇_ξ g, {f,h₁} = 2x·∇_ξ f, {h₂,g} = x·∇_x g − ξ·∇_ξ g
    let f_h2 = &dot(&k, &fk) - &dot(&x, &fx);
    let h1_g = dot(&x, &gk).scale(&Coeff::from_int(-2));
    let f_h1 = dot(&x, &fk).scale(&Coeff::from_int(2));
    let h2_g = &dot(&x, &gx) - &dot(&k, &gk);
    let corr = &(&f_h2 * &h1_g) - &(&f_h1 * &h2_g);
    Ok(&fg + &corr.scale(&Coeff::ratio(1, 2)))
}

fn check_odd_position_symbol(q: &PolySymbol) -> Result<()> {
    check_sphere_symbol(q)?;
    if q.terms().keys().any(|m| m.kdegree() > 0) {
        return Err(Error::Precondition("sphere perturbations must depend on x only".into()));
    }
    if q.terms().keys().any(|m| m.degree() % 2 == 0) {
        return Err(Error::Precondition("sphere_g0 needs every monomial of odd degree".into()));
    }
    Ok(())
}

/// Solution of `H_p^Σ G₀ = q` on `p⁻¹(1)` for odd `q(x)`, as a polynomial whose
/// `ξ`-homogeneous extension of degree −1 is the generator.
pub fn sphere_g0(q: &PolySymbol) -> Result<PolySymbol> {
    check_odd_position_symbol(q)?;
    // Each z^β z̄^γ term of q is divided by 2i(|γ| − |β|).
    let zq = to_z(q);
    let g = zq.map_coeffs(|m, c| {
        let phase = m.kdegree() as i64 - m.xdegree() as i64;
        &(c * &Coeff::gaussian(0, -1)) * &Coeff::ratio(1, 2 * phase)
    });
    Ok(from_z(&simplest(&g, &zbar_rules())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SphereCorrection {
    pub sigma_form: PolySymbol,
    pub reduced_form: PolySymbol,
}

/// `⟨s⟩ = −½⟨{G₀, q}_Σ⟩` on `p⁻¹(1)` and its expression on the space of great circles.
pub fn sphere_second_correction(q: &PolySymbol) -> Result<SphereCorrection> {
    check_sphere_symbol(q)?;
    if q.is_zero() {
        let z = PolySymbol::zero(3, Frame::Xk);
        return Ok(SphereCorrection { sigma_form: z.clone(), reduced_form: z });
    }
    if !radon_average(q)?.is_zero() {
        let monos = radon_z(q).terms().iter().map(|(m, c)| format!("({})*{}", c, m.label("z", "zbar"))).collect();
        return Err(Error::NonzeroAverage { monomials: monos });
    }
    check_odd_position_symbol(q)?;
    let g0 = sphere_g0(q)?;
    let b = constrained_bracket_homogeneous(&g0, Some(-1), q, None)?;
    let s = radon_average(&b)?.scale(&Coeff::ratio(-1, 2));
    let reduced = reduce_to_circle_space(&s)?;
    Ok(SphereCorrection { sigma_form: s, reduced_form: reduced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::{parse_poly, reduce_on_shell};

    fn p(s: &str) -> PolySymbol {
        parse_poly(s, Some(3), Some(Frame::Xk)).unwrap()
    }

    #[test]
    fn g0_for_x1() {
        assert_eq!(sphere_g0(&p("x1")).unwrap(), p("-1/2*k1"));
    }

    #[test]
    fn g0_solves_homological_equation() {
        let geo = p("(x1^2+x2^2+x3^2)*(k1^2+k2^2+k3^2)");
        for s in ["x1", "x2", "x3", "x1^3", "x1*x2*x3", "x1^2*x3 - 2*x2^3"] {
            let q = p(s);
            let g0 = sphere_g0(&q).unwrap();
            let hg = constrained_bracket_homogeneous(&geo, None, &g0, Some(-1)).unwrap();
            assert!(reduce_on_shell(&(&hg - &q)).unwrap().is_zero(), "{}", s);
            assert!(radon_average(&g0).unwrap().is_zero());
        }
    }

    #[test]
    fn bracket_of_g0_with_x1() {
        let b = constrained_bracket_homogeneous(&p("-1/2*k1"), Some(-1), &p("x1"), None).unwrap();
        let want = p("1/2*(x1^2 - 1 + 2*k1^2)");
        assert!(reduce_on_shell(&(&b - &want)).unwrap().is_zero());
    }

    #[test]
    fn second_correction_for_x1() {
        let r = sphere_second_correction(&p("x1")).unwrap();
        assert_eq!(r.sigma_form, p("1/4 - 3/8*(x1^2 + k1^2)"));
        assert_eq!(r.reduced_form, p("3/8*x1^2 - 1/8"));
        let r3 = sphere_second_correction(&p("x3")).unwrap();
        assert_eq!(r3.reduced_form, p("3/8*x3^2 - 1/8"));
    }
}
