use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent pair `x^xexp · ξ^kexp` on T*ℝⁿ (or `y^xexp · η^kexp` in the oscillator frame).
///
/// Ordering is graded lexicographic on the concatenated exponent vector
/// `(x₁..x_n, ξ₁..ξ_n)`, so `x₁ > x₂ > … > ξ₁ > … > ξ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub xexp: Vec<u32>,
    pub kexp: Vec<u32>,
}

impl Monomial {
    pub fn new(xexp: Vec<u32>, kexp: Vec<u32>) -> Self {
        assert_eq!(xexp.len(), kexp.len(), "x and ξ exponent vectors differ in length");
        assert!(!xexp.is_empty(), "monomial dimension must be at least 1");
        Monomial { xexp, kexp }
    }

    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n], vec![0; n])
    }

    pub fn x(n: usize, j: usize) -> Self {
        let mut m = Monomial::one(n);
        m.xexp[j] = 1;
        m
    }

    pub fn k(n: usize, j: usize) -> Self {
        let mut m = Monomial::one(n);
        m.kexp[j] = 1;
        m
    }

    pub fn n(&self) -> usize {
        self.xexp.len()
    }

    pub fn degree(&self) -> u32 {
        self.xexp.iter().sum::<u32>() + self.kexp.iter().sum::<u32>()
    }

    pub fn xdegree(&self) -> u32 {
        self.xexp.iter().sum()
    }

    pub fn kdegree(&self) -> u32 {
        self.kexp.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            xexp: self.xexp.iter().zip(&o.xexp).map(|(a, b)| a + b).collect(),
            kexp: self.kexp.iter().zip(&o.kexp).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.xexp.iter().zip(&o.xexp).all(|(a, b)| a <= b)
            && self.kexp.iter().zip(&o.kexp).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial {
            xexp: o.xexp.iter().zip(&self.xexp).map(|(b, a)| b - a).collect(),
            kexp: o.kexp.iter().zip(&self.kexp).map(|(b, a)| b - a).collect(),
        }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial {
            xexp: self.xexp.iter().zip(&o.xexp).map(|(a, b)| *a.max(b)).collect(),
            kexp: self.kexp.iter().zip(&o.kexp).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Phase weight `λ·(xexp − kexp)`; in the oscillator frame the flow of
    /// `Σ iλ_j y_j η_j` multiplies this monomial by `e^{it·weight}`.
    pub fn phase(&self, lambda: &[i64]) -> i64 {
        self.xexp
            .iter()
            .zip(&self.kexp)
            .zip(lambda)
            .map(|((a, b), l)| l * (*a as i64 - *b as i64))
            .sum()
    }

    fn exps(&self) -> impl Iterator<Item = &u32> {
        self.xexp.iter().chain(self.kexp.iter())
    }

    pub fn label(&self, xname: &str, kname: &str) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (name, exps) in [(xname, &self.xexp), (kname, &self.kexp)] {
            for (j, e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{}{}", name, j + 1)),
                    _ => parts.push(format!("{}{}^{}", name, j + 1, e)),
                }
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.exps().cmp(o.exps()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label("x", "k"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_puts_x_before_xi() {
        let x1 = Monomial::x(3, 0);
        let x3 = Monomial::x(3, 2);
        let k1 = Monomial::k(3, 0);
        assert!(x1 > x3);
        assert!(x3 > k1);
        assert!(Monomial::one(3) < k1);
        assert!(k1.mul(&k1) > x1);
    }

    #[test]
    fn phase_weight() {
        let m = Monomial::new(vec![2, 0], vec![0, 1]);
        assert_eq!(m.phase(&[1, 2]), 0);
    }
}
