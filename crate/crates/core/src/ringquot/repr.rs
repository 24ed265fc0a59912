//! Matrix representations of ring elements and the module-lattice bases.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand_core::RngCore;

use super::elem::RingElem;
use super::ntt::negacyclic_schoolbook;
use crate::error::{Error, Result};
use crate::exactlat::{IntBasis, IntMatrix};
use crate::numth::is_prime;
use crate::seed::uniform_below;

/// `ρ(h)`: row `i` holds the coefficients of `X^i · h mod X^n + 1`, so that
/// `coeffs(b·h) = coeffs(b) · ρ(h)`. Wrapped coefficients carry a minus sign
/// (entries lie in `(-q, q)`). The matrix may be singular, hence not an
/// [`IntBasis`].
pub fn rho_matrix(h: &RingElem) -> IntMatrix {
    let n = h.n();
    let c = h.coeffs();
    IntMatrix::from_fn(n, n, |i, j| {
        if j >= i {
            BigInt::from(c[j - i])
        } else {
            -BigInt::from(c[j + n - i])
        }
    })
}

/// `σ_n = diag(1, -Ī_{n-1})` with `Ī` the anti-identity.
pub fn sigma_n(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| {
        if i == 0 && j == 0 {
            BigInt::one()
        } else if i > 0 && j > 0 && i + j == n {
            -BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// `ρ̄(h) = σ_n · ρ(h)`, a symmetric matrix.
pub fn bar_rho_matrix(h: &RingElem) -> IntMatrix {
    sigma_n(h.n()).mul(&rho_matrix(h)).expect("square factors")
}

/// A symmetric `k × k` matrix over `Z_q[X]/(X^n + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSymMat {
    n: usize,
    q: u64,
    k: usize,
    entries: Vec<RingElem>,
}

impl RingSymMat {
    /// Builds from row-major entries, checking symmetry and ring parameters.
    pub fn new(k: usize, entries: Vec<RingElem>) -> Result<Self> {
        if k == 0 || entries.len() != k * k {
            return Err(Error::Dimension(alloc::format!(
                "expected {} entries for k = {k}, got {}",
                k * k,
                entries.len()
            )));
        }
        let (n, q) = (entries[0].n(), entries[0].q());
        if entries.iter().any(|e| e.n() != n || e.q() != q) {
            return Err(Error::InvalidParameter(
                "entries live in different rings".into(),
            ));
        }
        for i in 0..k {
            for j in 0..i {
                if entries[i * k + j] != entries[j * k + i] {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "entry ({i},{j}) breaks symmetry"
                    )));
                }
            }
        }
        Ok(Self { n, q, k, entries })
    }

    /// Uniform symmetric matrix: the entries with `i ≤ j` are drawn in
    /// row-major order, coefficient by coefficient, and mirrored. `q` must
    /// be prime.
    pub fn sample<R: RngCore + ?Sized>(n: usize, k: usize, q: u64, rng: &mut R) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Self::sample_any_modulus(n, k, q, rng)
    }

    /// As [`RingSymMat::sample`] without the primality requirement.
    pub fn sample_any_modulus<R: RngCore + ?Sized>(
        n: usize,
        k: usize,
        q: u64,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 || k == 0 || q < 2 {
            return Err(Error::InvalidParameter("need n, k >= 1 and q >= 2".into()));
        }
        let mut entries = alloc::vec![RingElem::zero(n, q); k * k];
        for i in 0..k {
            for j in i..k {
                let coeffs = (0..n).map(|_| uniform_below(rng, q)).collect();
                let e = RingElem::new(n, q, coeffs)?;
                entries[j * k + i] = e.clone();
                entries[i * k + j] = e;
            }
        }
        Ok(Self { n, q, k, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.k + j]
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    fn lift(&self, f: impl Fn(&RingElem) -> IntMatrix) -> IntMatrix {
        let (n, k) = (self.n, self.k);
        let blocks: Vec<IntMatrix> = self.entries.iter().map(f).collect();
        IntMatrix::from_fn(n * k, n * k, |r, c| {
            blocks[(r / n) * k + c / n].get(r % n, c % n).clone()
        })
    }

    /// Blockwise `ρ(H)`.
    pub fn rho(&self) -> IntMatrix {
        self.lift(rho_matrix)
    }

    /// Blockwise `ρ̄(H)`.
    pub fn bar_rho(&self) -> IntMatrix {
        self.lift(bar_rho_matrix)
    }
}

fn q_ary_basis(top_right: &IntMatrix, q: u64) -> Result<IntBasis> {
    let m = top_right.nrows();
    let m = IntMatrix::from_blocks(
        &IntMatrix::identity(m),
        top_right,
        &IntMatrix::zeros(m, m),
        &IntMatrix::identity(m).scale(&BigInt::from(q)),
    )?;
    IntBasis::new(m)
}

/// `(M_H, M̄_H)`: `[[I, ρ(H)], [0, qI]]` and `[[I, ρ̄(H)], [0, qI]]`.
pub fn module_basis(h: &RingSymMat) -> Result<(IntBasis, IntBasis)> {
    Ok((q_ary_basis(&h.rho(), h.q)?, q_ary_basis(&h.bar_rho(), h.q)?))
}

/// `U = σ_n ⊕ … ⊕ σ_n ⊕ I_{nk}` with `k` copies of `σ_n`.
pub fn u_matrix(n: usize, k: usize) -> IntMatrix {
    let s = sigma_n(n);
    let id = IntMatrix::identity(n * k);
    let mut blocks: Vec<&IntMatrix> = (0..k).map(|_| &s).collect();
    blocks.push(&id);
    IntMatrix::direct_sum(&blocks)
}

/// `z = (z_1, z_2) ∈ L(M_H)`, i.e. `z_2 ≡ z_1 ρ(H) (mod q)` blockwise in
/// the ring.
pub fn module_membership(h: &RingSymMat, z: &[i64]) -> Result<bool> {
    let (n, k, q) = (h.n, h.k, h.q);
    if z.len() != 2 * n * k {
        return Err(Error::Dimension(alloc::format!(
            "expected a vector of length {}, got {}",
            2 * n * k,
            z.len()
        )));
    }
    let reduce =
        |s: &[i64]| -> Vec<u64> { s.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect() };
    for j in 0..k {
        let mut acc = alloc::vec![0u64; n];
        for i in 0..k {
            let zi = reduce(&z[i * n..(i + 1) * n]);
            let p = negacyclic_schoolbook(&zi, h.get(i, j).coeffs(), q);
            for (a, b) in acc.iter_mut().zip(p) {
                *a = (*a + b) % q;
            }
        }
        let z2 = reduce(&z[(k + j) * n..(k + j + 1) * n]);
        if acc != z2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::is_q_symplectic;
    use crate::seed::rng_from_seed;

    #[test]
    fn rho_n2() {
        let h = RingElem::new(2, 11, alloc::vec![3, 5]).unwrap();
        assert_eq!(
            rho_matrix(&h),
            IntMatrix::from_i64_rows(&[[3, 5], [-5, 3]]).unwrap()
        );
        assert_eq!(
            bar_rho_matrix(&h),
            IntMatrix::from_i64_rows(&[[3, 5], [5, -3]]).unwrap()
        );
        assert_eq!(
            sigma_n(2),
            IntMatrix::from_i64_rows(&[[1, 0], [0, -1]]).unwrap()
        );
        assert_eq!(rho_matrix(&RingElem::one(4, 11)), IntMatrix::identity(4));
    }

    #[test]
    fn bar_rho_symmetric() {
        let mut rng = rng_from_seed(3);
        for n in [1, 2, 3, 4, 8] {
            let h = RingElem::random(n, 97, &mut rng);
            let b = bar_rho_matrix(&h);
            assert_eq!(b, b.transpose());
        }
    }

    #[test]
    fn module_bases() {
        let mut rng = rng_from_seed(4);
        for (n, k) in [(2, 1), (2, 2), (4, 1), (3, 2)] {
            let h = RingSymMat::sample(n, k, 13, &mut rng).unwrap();
            let (m, mb) = module_basis(&h).unwrap();
            assert!(is_q_symplectic(&mb, 13).unwrap());
            let u = u_matrix(n, k);
            assert_eq!(u.mul(&m).unwrap().mul(&u).unwrap(), *mb.matrix());
            assert_eq!(
                u.mul(&u.transpose()).unwrap(),
                IntMatrix::identity(2 * n * k)
            );
            assert_eq!(m.det().unwrap(), BigInt::from(13u64.pow((n * k) as u32)));
            for r in 0..2 * n * k {
                let row: Vec<i64> = m.row(r).iter().map(|x| i64::try_from(x).unwrap()).collect();
                assert!(module_membership(&h, &row).unwrap());
            }
        }
    }

    #[test]
    fn membership_rejects_perturbation() {
        let mut rng = rng_from_seed(5);
        let h = RingSymMat::sample(2, 2, 7, &mut rng).unwrap();
        let mut z = alloc::vec![0i64; 8];
        z[0] = 1;
        for j in 0..2 {
            for (c, v) in h.get(0, j).coeffs().iter().enumerate() {
                z[4 + 2 * j + c] = *v as i64;
            }
        }
        assert!(module_membership(&h, &z).unwrap());
        z[5] += 1;
        assert!(!module_membership(&h, &z).unwrap());
        assert!(module_membership(&h, &[0; 7]).is_err());
    }

    #[test]
    fn symmetric_check() {
        let a = RingElem::one(2, 5);
        let b = RingElem::zero(2, 5);
        assert!(
            RingSymMat::new(2, alloc::vec![a.clone(), a.clone(), b.clone(), a.clone()]).is_err()
        );
        assert!(RingSymMat::new(2, alloc::vec![a.clone(), b.clone(), b, a]).is_ok());
        assert_eq!(
            RingSymMat::sample(2, 1, 9, &mut rng_from_seed(1)),
            Err(Error::NotPrime(9))
        );
    }
}
