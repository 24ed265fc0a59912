use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::ntt::{negacyclic_schoolbook, NttPlan};
use crate::error::{Error, Result};
use crate::seed::uniform_below;

/// An element of `Z_q[X]/(X^n + 1)`, coefficients lowest degree first and
/// reduced into `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    n: usize,
    q: u64,
    coeffs: Vec<u64>,
}

impl RingElem {
    pub fn new(n: usize, q: u64, coeffs: Vec<u64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter("modulus must be at least 2".into()));
        }
        if coeffs.len() != n || n == 0 {
            return Err(Error::Dimension(alloc::format!(
                "expected {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self {
            n,
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        })
    }

    pub fn from_i64(n: usize, q: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(
            n,
            q,
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(q as i64) as u64)
                .collect(),
        )
    }

    pub fn zero(n: usize, q: u64) -> Self {
        Self {
            n,
            q,
            coeffs: vec![0; n],
        }
    }

    pub fn one(n: usize, q: u64) -> Self {
        Self::monomial(n, q, 0)
    }

    /// `X^i` (with `X^n = -1`).
    pub fn monomial(n: usize, q: u64, i: usize) -> Self {
        let mut e = Self::zero(n, q);
        let sign_flip = (i / n) % 2 == 1;
        e.coeffs[i % n] = if sign_flip { q - 1 } else { 1 };
        e
    }

    pub fn random<R: RngCore + ?Sized>(n: usize, q: u64, rng: &mut R) -> Self {
        Self {
            n,
            q,
            coeffs: (0..n).map(|_| uniform_below(rng, q)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Representatives in `(-q/2, q/2]`.
    pub fn centered(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .map(|&c| {
                if c > self.q / 2 {
                    c as i64 - self.q as i64
                } else {
                    c as i64
                }
            })
            .collect()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::InvalidParameter(alloc::format!(
                "ring mismatch: (n={}, q={}) vs (n={}, q={})",
                self.n,
                self.q,
                other.n,
                other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % self.q)
            .collect();
        Ok(Self {
            coeffs,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| (self.q - a) % self.q).collect();
        Self {
            coeffs,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }
}

/// Product in `Z_q[X]/(X^n + 1)`; uses the NTT when `n` is a power of two
/// and `q` is a prime `≡ 1 (mod 2n)`, schoolbook otherwise.
pub fn ring_mul(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.same_ring(b)?;
    let coeffs = if NttPlan::supports(a.n, a.q) {
        NttPlan::new(a.n, a.q)?.multiply(&a.coeffs, &b.coeffs)
    } else {
        negacyclic_schoolbook(&a.coeffs, &b.coeffs, a.q)
    };
    Ok(RingElem {
        coeffs,
        ..a.clone()
    })
}

/// Product with a prepared plan (or schoolbook when `plan` is `None`).
pub fn ring_mul_with(plan: Option<&NttPlan>, a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.same_ring(b)?;
    let coeffs = match plan {
        Some(p) if p.n() == a.n && p.q() == a.q => p.multiply(&a.coeffs, &b.coeffs),
        Some(_) => {
            return Err(Error::InvalidParameter(
                "plan does not match the ring".into(),
            ))
        }
        None => negacyclic_schoolbook(&a.coeffs, &b.coeffs, a.q),
    };
    Ok(RingElem {
        coeffs,
        ..a.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_squared_is_minus_one() {
        let x = RingElem::monomial(2, 7, 1);
        assert_eq!(ring_mul(&x, &x).unwrap().coeffs(), &[6, 0]);
    }

    #[test]
    fn one_plus_x_squared() {
        let a = RingElem::new(2, 7, vec![1, 1]).unwrap();
        assert_eq!(ring_mul(&a, &a).unwrap().coeffs(), &[0, 2]);
    }

    #[test]
    fn mismatched_rings() {
        let a = RingElem::one(2, 7);
        let b = RingElem::one(2, 5);
        assert!(ring_mul(&a, &b).is_err());
        assert!(RingElem::new(3, 7, vec![1, 2]).is_err());
    }

    #[test]
    fn monomial_wraps_with_sign() {
        assert_eq!(RingElem::monomial(4, 5, 5).coeffs(), &[0, 4, 0, 0]);
        assert_eq!(RingElem::monomial(4, 5, 9).coeffs(), &[0, 1, 0, 0]);
    }
}
