use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolalg::{reduce_on_unit_sphere, CompiledPoly, Coeff, Frame, PolySymbol};

use super::geometry::{geodesic_flow, random_sigma_point};
use super::zcoords::{balanced, balanced_to_y, from_z, shell_normal_z, simplest, to_z, unit_sphere_rules, zbar_rules};

pub(crate) fn check_sphere_symbol(q: &PolySymbol) -> Result<()> {
    if q.n() != 3 {
        return Err(Error::NotThreeDimensional(q.n()));
    }
    if q.frame() != Frame::Xk {
        return Err(Error::FrameMismatch("sphere symbols use the xk frame".into()));
    }
    Ok(())
}

/// Balanced (flow-invariant) part of `q` in z-coordinates, simplified with `z·z̄ = 2`.
pub(crate) fn radon_z(q: &PolySymbol) -> PolySymbol {
    let b = balanced(&to_z(q));
    let nf = shell_normal_z(&b);
    simplest(if nf.len() < b.len() { &nf } else { &b }, &zbar_rules())
}

/// Average of `q` over the great circles of `p⁻¹(1)`, as a symbol in `(x, ξ)`
/// valid on `Σ ∩ p⁻¹(1)`.
pub fn radon_average(q: &PolySymbol) -> Result<PolySymbol> {
    check_sphere_symbol(q)?;
    Ok(from_z(&radon_z(q)))
}

/// Numerical check that `f` is constant along the geodesic flow on `p⁻¹(1)`.
pub fn check_flow_invariant(f: &PolySymbol, samples: usize, tol: f64) -> Result<()> {
    let cf = CompiledPoly::new(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e0d_e51c);
    let scale = 1.0 + f.max_coeff();
    for _ in 0..samples {
        let p = random_sigma_point(&mut rng, 1.0);
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let q = geodesic_flow(&p, t)?;
        let d = (cf.eval(&p.coords()) - cf.eval(&q.coords())).norm();
        if d > tol * scale {
            return Err(Error::Precondition(format!(
                "symbol is not invariant under the geodesic flow (deviation {:e})",
                d
            )));
        }
    }
    Ok(())
}

/// Express a flow-invariant symbol on `p⁻¹(1)` as a polynomial in `y = x × ξ`
/// (stored in the position slots of an `n = 3` symbol).
pub fn reduce_to_circle_space(f: &PolySymbol) -> Result<PolySymbol> {
    check_sphere_symbol(f)?;
    check_flow_invariant(f, 100, 1e-10)?;
    Ok(simplest(&balanced_to_y(&balanced(&to_z(f))), &unit_sphere_rules()))
}

/// Pull a `y`-polynomial back to `Σ ∩ p⁻¹(1)` through `y = x × ξ`.
pub fn circle_pullback(g: &PolySymbol) -> PolySymbol {
    let x = |j| PolySymbol::var_x(3, Frame::Xk, j);
    let k = |j| PolySymbol::var_k(3, Frame::Xk, j);
    let ys: Vec<PolySymbol> = (0..3)
        .map(|j| {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            &(&x(a) * &k(b)) - &(&x(b) * &k(a))
        })
        .collect();
    let zero = PolySymbol::zero(3, Frame::Xk);
    g.substitute(&ys, &[zero.clone(), zero.clone(), zero])
}

/// Result of [`radon_schur_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchurReport {
    pub degree: u32,
    pub multiplier: f64,
    pub multiplier_exact: String,
    pub basis_size: usize,
    pub rank: usize,
}

/// Rational rotation `(I + K)(I + K + wwᵀ)/(1 + |w|²)` for the skew matrix of `w`.
fn cayley(w: [BigRational; 3]) -> [[BigRational; 3]; 3] {
    let z = BigRational::zero;
    let k = [
        [z(), -w[2].clone(), w[1].clone()],
        [w[2].clone(), z(), -w[0].clone()],
        [-w[1].clone(), w[0].clone(), z()],
    ];
    let n2: BigRational = w.iter().map(|a| a * a).fold(z(), |s, v| s + v);
    let den = BigRational::one() + n2;
    let id = |i: usize, j: usize| if i == j { BigRational::one() } else { z() };
    let mut a = [[z(), z(), z()], [z(), z(), z()], [z(), z(), z()]];
    let mut b = a.clone();
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = id(i, j) + &k[i][j];
            b[i][j] = id(i, j) + &k[i][j] + &w[i] * &w[j];
        }
    }
    let mut r = [[z(), z(), z()], [z(), z(), z()], [z(), z(), z()]];
    for i in 0..3 {
        for j in 0..3 {
            let s: BigRational = (0..3).map(|m| &a[i][m] * &b[m][j]).fold(z(), |s, v| s + v);
            r[i][j] = s / &den;
        }
    }
    r
}

/// Real and imaginary parts of `(a·x)^l` with `a = Re₁ + iRe₂` isotropic.
fn harmonic_pair(r: &[[BigRational; 3]; 3], l: u32) -> (PolySymbol, PolySymbol) {
    let mut ax = PolySymbol::zero(3, Frame::Xk);
    for j in 0..3 {
        let c = Coeff::from_rational(r[j][0].clone(), r[j][1].clone());
        ax = &ax + &PolySymbol::var_x(3, Frame::Xk, j).scale(&c);
    }
    let u = ax.pow(l);
    let uc = u.conj_coeffs();
    let re = (&u + &uc).scale(&Coeff::ratio(1, 2));
    let im = (&u - &uc).scale(&Coeff::gaussian(0, -1)).scale(&Coeff::ratio(1, 2));
    (re, im)
}

/// Apply the great-circle transform to harmonic polynomials of degree `l` and
/// confirm it acts as one scalar on all of them.
pub fn radon_schur_check(degree: u32) -> Result<SchurReport> {
    if degree > 8 {
        return Err(Error::Precondition("radon_schur_check supports degree ≤ 8".into()));
    }
    let l = degree;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c4u64 + l as u64);
    let mut basis = Vec::new();
    if l == 0 {
        basis.push(PolySymbol::constant(3, Frame::Xk, Coeff::one()));
    } else {
        for _ in 0..(l + 2) {
            let w = [0; 3].map(|_| {
                BigRational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=4)))
            });
            let (re, im) = harmonic_pair(&cayley(w), l);
            basis.push(re);
            basis.push(im);
        }
    }
    let mut mult: Option<Coeff> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut monos = std::collections::BTreeMap::new();
    let mut reduced = Vec::new();
    for h in &basis {
        let g = reduce_on_unit_sphere(&reduce_to_circle_space(&radon_average(h)?)?)?;
        let hr = reduce_on_unit_sphere(h)?;
        if hr.is_zero() {
            continue;
        }
        let (lm, lc) = hr.leading().unwrap();
        let mu = &g.coeff(lm) * &lc.inv().unwrap();
        if !g.approx_eq(&hr.scale(&mu), 1e-10) {
            return Err(Error::Invariant(format!("degree-{} harmonic is not an eigenfunction of the Radon transform", l)));
        }
        match &mult {
            None => mult = Some(mu),
            Some(m0) => {
                if !m0.approx_eq(&mu, 1e-10) {
                    return Err(Error::Invariant(format!("Radon multiplier varies across degree-{} harmonics: {} vs {}", l, m0, mu)));
                }
            }
        }
        for m in hr.terms().keys() {
            let len = monos.len();
            monos.entry(m.clone()).or_insert(len);
        }
        reduced.push(hr);
    }
    for hr in &reduced {
        let mut row = vec![0.0; monos.len()];
        for (m, c) in hr.terms() {
            row[monos[m]] = c.to_complex().re;
        }
        rows.push(row);
    }
    let rank = if rows.is_empty() {
        0
    } else {
        let mat = DMatrix::from_fn(rows.len(), monos.len(), |i, j| rows[i][j]);
        mat.rank(1e-9)
    };
    let m = mult.unwrap_or_else(Coeff::zero);
    Ok(SchurReport {
        degree: l,
        multiplier: m.to_complex().re,
        multiplier_exact: m.to_string(),
        basis_size: reduced.len(),
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::{parse_poly, reduce_on_shell};

    fn p(s: &str) -> PolySymbol {
        parse_poly(s, Some(3), Some(Frame::Xk)).unwrap()
    }

    #[test]
    fn product_average() {
        assert_eq!(radon_average(&p("x1*x2")).unwrap(), p("1/2*x1*x2 + 1/2*k1*k2"));
    }

    #[test]
    fn odd_symbols_average_to_zero() {
        for s in ["x1", "x1^3", "x1*x2*x3", "k2*x1^2"] {
            assert!(radon_average(&p(s)).unwrap().is_zero(), "{}", s);
        }
    }

    #[test]
    fn circle_space_forms() {
        let f = p("1/2*x1*x2 + 1/2*k1*k2");
        assert_eq!(reduce_to_circle_space(&f).unwrap(), p("-1/2*x1*x2"));
        let s = p("1/4 - 3/8*(x1^2 + k1^2)");
        assert_eq!(reduce_to_circle_space(&s).unwrap(), p("3/8*x1^2 - 1/8"));
        assert_eq!(reduce_to_circle_space(&p("k1^2+k2^2+k3^2")).unwrap(), p("1"));
    }

    #[test]
    fn pullback_agrees_on_shell() {
        let f = p("1/2*x1*x2 + 1/2*k1*k2");
        let g = reduce_to_circle_space(&f).unwrap();
        let back = circle_pullback(&g);
        assert!(reduce_on_shell(&(&back - &f)).unwrap().is_zero());
    }

    #[test]
    fn non_invariant_rejected() {
        assert!(reduce_to_circle_space(&p("x1^2")).is_err());
    }

    #[test]
    fn schur_multipliers() {
        let r2 = radon_schur_check(2).unwrap();
        assert_eq!(r2.multiplier_exact, "-1/2");
        assert_eq!(r2.rank, 5);
        assert_eq!(radon_schur_check(0).unwrap().multiplier, 1.0);
        assert_eq!(radon_schur_check(3).unwrap().multiplier, 0.0);
        assert_eq!(radon_schur_check(4).unwrap().multiplier_exact, "3/8");
    }
}
