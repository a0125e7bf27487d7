//! Assembly of `P = −h²Δ + iεq(x)` on a truncated harmonic basis and its
//! splitting into reflection-symmetry sectors.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::{eigensolve, sort_eigenvalues};
use super::harmonics::{coordinate_matrix, Basis, Sparse};
use crate::error::{Error, Result};
use crate::symbolalg::{Frame, PolySymbol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereOperatorSpec {
    pub h: f64,
    pub epsilon: f64,
    pub q: PolySymbol,
    pub l_min: u32,
    pub l_max: u32,
    /// Extra degrees kept on both sides of `[l_min, l_max]`.
    pub pad: u32,
}

impl SphereOperatorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.q.n() != 3 {
            return Err(Error::NotThreeDimensional(self.q.n()));
        }
        if self.q.frame() != Frame::Xk {
            return Err(Error::FrameMismatch("the potential must be given in x, ξ".into()));
        }
        if self.q.terms().keys().any(|m| m.kdegree() > 0) {
            return Err(Error::Precondition("the potential must depend on x only".into()));
        }
        if !(self.h > 0.0 && self.epsilon >= 0.0 && self.h.is_finite() && self.epsilon.is_finite()) {
            return Err(Error::Precondition("need h > 0 and ε ≥ 0".into()));
        }
        if self.l_min > self.l_max {
            return Err(Error::Precondition("l_min > l_max".into()));
        }
        Ok(())
    }

    pub fn basis(&self) -> Basis {
        Basis::new(self.l_min.saturating_sub(self.pad), self.l_max + self.pad)
    }
}

/// `P = D + iεX` with `D = h²l(l+1)` diagonal and `X` the matrix of q.
#[derive(Clone, Debug)]
pub struct AssembledOperator {
    pub basis: Basis,
    pub h: f64,
    pub epsilon: f64,
    pub diag: Vec<f64>,
    pub x: Sparse,
    /// Sector index of every basis function.
    pub sector_of: Vec<usize>,
    pub sectors: Vec<Vec<usize>>,
}

/// Parities of `Y_{l,m}` under `x₁ ↦ −x₁`, `x₂ ↦ −x₂`, `x₃ ↦ −x₃`.
pub fn reflection_parities(l: u32, m: i64) -> [i8; 3] {
    let sgn = |k: i64| if k.rem_euclid(2) == 0 { 1i8 } else { -1 };
    let r1 = if m >= 0 { sgn(m) } else { -sgn(m) };
    let r2 = if m >= 0 { 1 } else { -1 };
    let r3 = sgn(l as i64 + m.abs());
    [r1, r2, r3]
}

/// Reflections `x_j ↦ −x_j` under which q is even.
pub fn invariant_reflections(q: &PolySymbol) -> [bool; 3] {
    let mut out = [true; 3];
    for m in q.terms().keys() {
        for (j, o) in out.iter_mut().enumerate() {
            if m.xexp[j] % 2 == 1 {
                *o = false;
            }
        }
    }
    out
}

fn q_matrix(q: &PolySymbol, basis: Basis) -> Sparse {
    let d = q.degree();
    let ext = Basis::new(basis.lo.saturating_sub(d), basis.hi + d);
    let n = ext.dim();
    let coords: Vec<Sparse> = (0..3).map(|j| coordinate_matrix(ext, j)).collect();
    let mut acc = Sparse::zero(n);
    let mut powers: BTreeMap<[u32; 3], Sparse> = BTreeMap::new();
    for (m, c) in q.terms() {
        let key = [m.xexp[0], m.xexp[1], m.xexp[2]];
        let term = powers.entry(key).or_insert_with(|| {
            let mut p = Sparse::identity(n);
            for (j, &e) in key.iter().enumerate() {
                for _ in 0..e {
                    p = p.mul(&coords[j]);
                }
            }
            p
        });
        acc.axpy(c.to_complex(), term);
    }
    let off = ext.index(basis.lo, -(basis.lo as i64));
    let mut out = Sparse::zero(basis.dim());
    for i in 0..basis.dim() {
        for (&j, &v) in acc.rows[i + off].range(off..off + basis.dim()) {
            if v != Complex64::default() {
                out.rows[i].insert(j - off, v);
            }
        }
    }
    out
}

pub fn assemble(spec: &SphereOperatorSpec) -> Result<AssembledOperator> {
    spec.validate()?;
    let basis = spec.basis();
    let n = basis.dim();
    let x = q_matrix(&spec.q, basis);
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let l = basis.label(i).0 as f64;
            spec.h * spec.h * l * (l + 1.0)
        })
        .collect();
    let inv = invariant_reflections(&spec.q);
    let mut keys: BTreeMap<[i8; 3], usize> = BTreeMap::new();
    let mut sector_of = Vec::with_capacity(n);
    for i in 0..n {
        let (l, m) = basis.label(i);
        let mut p = reflection_parities(l, m);
        for j in 0..3 {
            if !inv[j] {
                p[j] = 0;
            }
        }
        let next = keys.len();
        sector_of.push(*keys.entry(p).or_insert(next));
    }
    let mut sectors = vec![Vec::new(); keys.len()];
    for (i, &s) in sector_of.iter().enumerate() {
        sectors[s].push(i);
    }
    for (i, row) in x.rows.iter().enumerate() {
        for (&j, v) in row {
            if sector_of[i] != sector_of[j] && v.norm() > 1e-12 {
                return Err(Error::Invariant(format!("q couples symmetry sectors at ({i}, {j})")));
            }
        }
    }
    Ok(AssembledOperator { basis, h: spec.h, epsilon: spec.epsilon, diag, x, sector_of, sectors })
}

impl AssembledOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Dense block of `P` on the index set `idx`.
    pub fn block(&self, idx: &[usize]) -> DMatrix<Complex64> {
        let ie = Complex64::new(0.0, self.epsilon);
        let rows = self.x.restrict(idx);
        DMatrix::from_fn(idx.len(), idx.len(), |a, b| {
            let d = if a == b { Complex64::new(self.diag[idx[a]], 0.0) } else { Complex64::default() };
            d + ie * rows[a][b]
        })
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.block(&all)
    }

    /// Trace of `P`, computed from the diagonal entries.
    pub fn trace(&self) -> Complex64 {
        let ie = Complex64::new(0.0, self.epsilon);
        (0..self.dim()).map(|i| Complex64::new(self.diag[i], 0.0) + ie * self.x.get(i, i)).sum()
    }

    /// Eigenvalues of every sector block (in parallel), each sorted.
    pub fn eigenvalues_by_sector(&self) -> Result<Vec<Vec<Complex64>>> {
        self.sectors.par_iter().map(|idx| eigensolve(&self.block(idx))).collect()
    }

    /// All eigenvalues, merged and sorted.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        Ok(merge_sectors(&self.eigenvalues_by_sector()?))
    }
}

pub fn merge_sectors(parts: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut all: Vec<Complex64> = parts.iter().flatten().copied().collect();
    sort_eigenvalues(&mut all);
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::parse_poly;
    use crate::verify::harmonics::real_harmonic;
    use std::f64::consts::PI;

    #[test]
    fn parities_match_harmonics() {
        let (ct, phi) = (0.37, 0.81);
        for l in 0..6u32 {
            for m in -(l as i64)..=l as i64 {
                let y = real_harmonic(l, m, ct, phi);
                let p = reflection_parities(l, m);
                assert!((real_harmonic(l, m, ct, PI - phi) - p[0] as f64 * y).abs() < 1e-12);
                assert!((real_harmonic(l, m, ct, -phi) - p[1] as f64 * y).abs() < 1e-12);
                assert!((real_harmonic(l, m, -ct, phi) - p[2] as f64 * y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sectors_agree_with_full_matrix() {
        let q = parse_poly("x1^2*x3 + x2^2 + x3", Some(3), None).unwrap();
        let spec = SphereOperatorSpec { h: 0.2, epsilon: 0.3, q, l_min: 3, l_max: 5, pad: 3 };
        let op = assemble(&spec).unwrap();
        assert_eq!(op.sectors.len(), 4);
        let split = op.eigenvalues().unwrap();
        let full = eigensolve(&op.dense()).unwrap();
        assert_eq!(split.len(), full.len());
        for (a, b) in split.iter().zip(&full) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_potential_is_diagonal() {
        let q = parse_poly("0", Some(3), None).unwrap();
        let spec = SphereOperatorSpec { h: 0.5, epsilon: 1.0, q, l_min: 1, l_max: 2, pad: 0 };
        let op = assemble(&spec).unwrap();
        let eig = op.eigenvalues().unwrap();
        let want: Vec<f64> = [0.5, 0.5, 0.5, 1.5, 1.5, 1.5, 1.5, 1.5].to_vec();
        for (z, w) in eig.iter().zip(&want) {
            assert_eq!(z.re, *w);
            assert_eq!(z.im, 0.0);
        }
    }
}
