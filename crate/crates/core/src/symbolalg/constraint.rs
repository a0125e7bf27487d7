//! Geometry of the constraint surface `Σ = {x² = 1, x·ξ = 0} ⊂ T*ℝ³`.

use std::sync::OnceLock;

use super::coeff::Coeff;
use super::poly::{Frame, PolySymbol};
use crate::error::{Error, Result};

fn var_x(j: usize) -> PolySymbol {
    PolySymbol::var_x(3, Frame::Xk, j)
}

fn var_k(j: usize) -> PolySymbol {
    PolySymbol::var_k(3, Frame::Xk, j)
}

fn one() -> PolySymbol {
    PolySymbol::constant(3, Frame::Xk, Coeff::one())
}

/// `h₁ = x² − 1`.
pub fn h1() -> PolySymbol {
    &x_squared() - &one()
}

/// `h₂ = x·ξ`.
pub fn h2() -> PolySymbol {
    (0..3).fold(PolySymbol::zero(3, Frame::Xk), |acc, j| &acc + &(&var_x(j) * &var_k(j)))
}

/// `|x|²`.
pub fn x_squared() -> PolySymbol {
    (0..3).fold(PolySymbol::zero(3, Frame::Xk), |acc, j| &acc + &(&var_x(j) * &var_x(j)))
}

/// `|ξ|²`, the geodesic Hamiltonian on Σ.
pub fn xi_squared() -> PolySymbol {
    (0..3).fold(PolySymbol::zero(3, Frame::Xk), |acc, j| &acc + &(&var_k(j) * &var_k(j)))
}

fn check_sigma(f: &PolySymbol) -> Result<()> {
    if f.n() != 3 {
        return Err(Error::NotThreeDimensional(f.n()));
    }
    if f.frame() != Frame::Xk {
        return Err(Error::FrameMismatch("constraint geometry needs the xk frame".into()));
    }
    Ok(())
}

/// Bracket of the restrictions to Σ:
/// `{f,g}_Σ = {f,g} + ½({f,h₂}{h₁,g} − {f,h₁}{h₂,g})`.
pub fn constrained_bracket(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    check_sigma(f)?;
    check_sigma(g)?;
    let (a, b) = (h1(), h2());
    let corr = &(&f.bracket(&b) * &a.bracket(g)) - &(&f.bracket(&a) * &b.bracket(g));
    Ok(&f.bracket(g) + &corr.scale(&Coeff::ratio(1, 2)))
}

fn monic(p: &PolySymbol) -> PolySymbol {
    match p.leading() {
        Some((_, c)) => p.scale(&c.inv().expect("nonzero leading coefficient")),
        None => p.clone(),
    }
}

/// Full reduction of `f` by `basis` in grlex order.
pub fn normal_form(f: &PolySymbol, basis: &[PolySymbol]) -> PolySymbol {
    let mut p = f.clone();
    let mut rem = PolySymbol::zero(f.n(), f.frame());
    while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let div = basis
            .iter()
            .find(|g| g.leading().map(|(lm, _)| lm.divides(&m)).unwrap_or(false));
        match div {
            Some(g) => {
                let (lm, lc) = g.leading().unwrap();
                let q = lm.quotient_of(&m);
                let factor = &c * &lc.inv().unwrap();
                let shifted = PolySymbol::from_terms(
                    g.n(),
                    g.frame(),
                    g.terms().iter().map(|(gm, gc)| (gm.mul(&q), &(-gc) * &factor)),
                );
                p = &p + &shifted;
                // Float leading terms may not cancel to an exact zero.
                let mut terms = p.into_terms();
                terms.remove(&m);
                p = PolySymbol::from_terms(f.n(), f.frame(), terms);
            }
            None => {
                rem.add_term(m.clone(), c);
                let mut terms = p.into_terms();
                terms.remove(&m);
                p = PolySymbol::from_terms(f.n(), f.frame(), terms);
            }
        }
    }
    rem
}

fn s_poly(f: &PolySymbol, g: &PolySymbol) -> PolySymbol {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let mf = PolySymbol::term(f.n(), f.frame(), fm.quotient_of(&l), fc.inv().unwrap());
    let mg = PolySymbol::term(g.n(), g.frame(), gm.quotient_of(&l), gc.inv().unwrap());
    &(&mf * f) - &(&mg * g)
}

/// Reduced Gröbner basis by Buchberger's algorithm (exact inputs).
pub fn groebner_basis(gens: &[PolySymbol]) -> Vec<PolySymbol> {
    let mut g: Vec<PolySymbol> = gens.iter().filter(|p| !p.is_zero()).map(monic).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..g.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (mi, mj) = (g[i].leading().unwrap().0, g[j].leading().unwrap().0);
        // Buchberger's coprime criterion.
        let coprime = mi.xexp.iter().zip(&mj.xexp).all(|(a, b)| *a == 0 || *b == 0)
            && mi.kexp.iter().zip(&mj.kexp).all(|(a, b)| *a == 0 || *b == 0);
        if coprime {
            continue;
        }
        let r = normal_form(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let k = g.len();
            g.push(monic(&r));
            for a in 0..k {
                pairs.push((a, k));
            }
        }
    }
    // Minimalize, then inter-reduce.
    let mut min: Vec<PolySymbol> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let lm = p.leading().unwrap().0;
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let lq = q.leading().unwrap().0;
            j != i && lq.divides(lm) && (lq != lm || j < i)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(min.len());
    for i in 0..min.len() {
        let others: Vec<PolySymbol> =
            min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let lead = PolySymbol::from_terms(
            min[i].n(),
            min[i].frame(),
            std::iter::once({
                let (m, c) = min[i].leading().unwrap();
                (m.clone(), c.clone())
            }),
        );
        let tail = &min[i] - &lead;
        out.push(&lead + &normal_form(&tail, &others));
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

fn sigma_basis() -> &'static [PolySymbol] {
    static GB: OnceLock<Vec<PolySymbol>> = OnceLock::new();
    GB.get_or_init(|| groebner_basis(&[h1(), h2()]))
}

fn shell_basis() -> &'static [PolySymbol] {
    static GB: OnceLock<Vec<PolySymbol>> = OnceLock::new();
    GB.get_or_init(|| groebner_basis(&[h1(), h2(), &xi_squared() - &one()]))
}

/// Canonical representative modulo the ideal `(h₁, h₂)`.
pub fn reduce_mod_constraints(f: &PolySymbol) -> Result<PolySymbol> {
    check_sigma(f)?;
    Ok(normal_form(f, sigma_basis()))
}

/// Canonical representative modulo `(h₁, h₂, ξ² − 1)`, i.e. on `Σ ∩ p⁻¹(1)`.
pub fn reduce_on_shell(f: &PolySymbol) -> Result<PolySymbol> {
    check_sigma(f)?;
    Ok(normal_form(f, shell_basis()))
}

/// Reduce a polynomial in `y` (stored in the position slots of an `n = 3` symbol)
/// modulo `|y|² − 1`.
pub fn reduce_on_unit_sphere(f: &PolySymbol) -> Result<PolySymbol> {
    check_sigma(f)?;
    if f.terms().keys().any(|m| m.kdegree() > 0) {
        return Err(Error::Precondition("unit-sphere reduction expects a polynomial in y only".into()));
    }
    Ok(normal_form(f, &[h1()]))
}

/// Whether `f` and `g` agree on Σ.
pub fn equal_on_sigma(f: &PolySymbol, g: &PolySymbol, tol: f64) -> Result<bool> {
    let d = reduce_mod_constraints(&(f - g))?;
    Ok(d.is_exact() && d.is_zero() || !d.is_exact() && d.max_coeff() <= tol)
}

/// Reduced Gröbner basis of `(h₁, h₂)` in grlex order.
pub fn sigma_groebner_basis() -> Vec<PolySymbol> {
    sigma_basis().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::symbolalg::Monomial;

    fn monomial_xk(xexp: [u32; 3], kexp: [u32; 3]) -> Monomial {
        Monomial::new(xexp.to_vec(), kexp.to_vec())
    }

    #[test]
    fn generators_reduce_to_zero() {
        assert!(reduce_mod_constraints(&h1()).unwrap().is_zero());
        assert!(reduce_mod_constraints(&h2()).unwrap().is_zero());
    }

    #[test]
    fn x2xi2_reduces_to_xi2() {
        let f = &x_squared() * &xi_squared();
        assert_eq!(
            reduce_mod_constraints(&f).unwrap(),
            reduce_mod_constraints(&xi_squared()).unwrap()
        );
    }

    #[test]
    fn h1_h2_bracket_is_minus_two() {
        let b = h1().bracket(&h2());
        let r = reduce_mod_constraints(&b).unwrap();
        assert_eq!(r, PolySymbol::constant(3, Frame::Xk, Coeff::from_int(-2)));
    }

    #[test]
    fn basis_is_groebner() {
        let gb = sigma_groebner_basis();
        for i in 0..gb.len() {
            for j in 0..i {
                assert!(normal_form(&s_poly(&gb[i], &gb[j]), &gb).is_zero());
            }
        }
    }

    #[test]
    fn shell_reduction_kills_xi_norm() {
        let f = &xi_squared() - &one();
        assert!(reduce_on_shell(&f).unwrap().is_zero());
        let m = PolySymbol::term(3, Frame::Xk, monomial_xk([1, 0, 0], [1, 0, 0]), Coeff::one());
        assert!(!reduce_on_shell(&m).unwrap().is_zero());
    }
}
