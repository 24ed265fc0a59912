//! Negacyclic number-theoretic transform.
//!
//! The forward transform is Cooley–Tukey with the `ψ^i` twist merged into
//! the butterflies (output in bit-reversed order); the inverse is
//! Gentleman–Sande. Pointwise products in the transformed domain are
//! products modulo `X^n + 1`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numth::{inv_mod, is_prime, mul_mod, pow_mod};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NttPlan {
    n: usize,
    q: u64,
    psi: u64,
    n_inv: u64,
    psi_rev: Vec<u64>,
    psi_inv_rev: Vec<u64>,
}

fn bit_reverse(mut x: usize, bits: u32) -> usize {
    let mut r = 0;
    for _ in 0..bits {
        r = (r << 1) | (x & 1);
        x >>= 1;
    }
    r
}

impl NttPlan {
    /// Plan for `Z_q[X]/(X^n + 1)`; needs `n` a power of two and a prime
    /// `q ≡ 1 (mod 2n)`. `ψ` is `g^{(q-1)/(2n)}` for the smallest `g ≥ 2`
    /// that makes `ψ^n = -1`.
    pub fn new(n: usize, q: u64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(
                "NTT length must be a power of two".into(),
            ));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let two_n = 2 * n as u64;
        if !(q - 1).is_multiple_of(two_n) {
            return Err(Error::InvalidParameter(alloc::format!(
                "q = {q} is not 1 mod {two_n}"
            )));
        }
        let e = (q - 1) / two_n;
        let psi = (2..q)
            .map(|g| pow_mod(g, e, q))
            .find(|&psi| pow_mod(psi, n as u64, q) == q - 1)
            .ok_or(Error::SearchExhausted(q))?;
        Ok(Self::with_psi(n, q, psi))
    }

    fn with_psi(n: usize, q: u64, psi: u64) -> Self {
        let bits = n.trailing_zeros();
        let psi_inv = inv_mod(psi, q).expect("psi is a unit");
        let psi_rev = (0..n)
            .map(|i| pow_mod(psi, bit_reverse(i, bits) as u64, q))
            .collect();
        let psi_inv_rev = (0..n)
            .map(|i| pow_mod(psi_inv, bit_reverse(i, bits) as u64, q))
            .collect();
        Self {
            n,
            q,
            psi,
            n_inv: inv_mod(n as u64 % q, q).expect("n is a unit"),
            psi_rev,
            psi_inv_rev,
        }
    }

    pub fn supports(n: usize, q: u64) -> bool {
        n > 0
            && n.is_power_of_two()
            && q > 2 * n as u64
            && (q - 1).is_multiple_of(2 * n as u64)
            && is_prime(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }

    pub fn forward(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.n);
        let q = self.q;
        let mut t = self.n;
        let mut m = 1;
        while m < self.n {
            t /= 2;
            for i in 0..m {
                let j1 = 2 * i * t;
                let s = self.psi_rev[m + i];
                for j in j1..j1 + t {
                    let u = a[j];
                    let v = mul_mod(a[j + t], s, q);
                    a[j] = (u + v) % q;
                    a[j + t] = (u + q - v) % q;
                }
            }
            m *= 2;
        }
    }

    pub fn inverse(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.n);
        let q = self.q;
        let mut t = 1;
        let mut m = self.n;
        while m > 1 {
            let h = m / 2;
            let mut j1 = 0;
            for i in 0..h {
                let s = self.psi_inv_rev[h + i];
                for j in j1..j1 + t {
                    let u = a[j];
                    let v = a[j + t];
                    a[j] = (u + v) % q;
                    a[j + t] = mul_mod((u + q - v) % q, s, q);
                }
                j1 += 2 * t;
            }
            t *= 2;
            m = h;
        }
        for x in a.iter_mut() {
            *x = mul_mod(*x, self.n_inv, q);
        }
    }

    /// Product modulo `(X^n + 1, q)` of reduced coefficient vectors.
    pub fn multiply(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut fa = a.to_vec();
        let mut fb = b.to_vec();
        self.forward(&mut fa);
        self.forward(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = mul_mod(*x, *y, self.q);
        }
        self.inverse(&mut fa);
        fa
    }
}

/// Schoolbook product modulo `(X^n + 1, q)`.
pub fn negacyclic_schoolbook(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = alloc::vec![0u64; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let p = mul_mod(ai, bj, q);
            let k = i + j;
            if k < n {
                out[k] = (out[k] + p) % q;
            } else {
                out[k - n] = (out[k - n] + q - p) % q;
            }
        }
    }
    out
}

/// Exact product in `Z[X]/(X^n + 1)` of integer coefficient vectors.
pub fn negacyclic_exact_schoolbook(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = alloc::vec![0i128; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let p = ai as i128 * bj as i128;
            let k = i + j;
            if k < n {
                out[k] += p;
            } else {
                out[k - n] -= p;
            }
        }
    }
    out.into_iter().map(|x| x as i64).collect()
}

/// Exact integer negacyclic products through an NTT over a 62-bit prime
/// `P ≡ 1 (mod 2n)`, falling back to schoolbook when the coefficients
/// could reach `P/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactNegacyclic {
    plan: NttPlan,
}

impl ExactNegacyclic {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(
                "NTT length must be a power of two".into(),
            ));
        }
        let step = 2 * n as u64;
        let mut p = (1u64 << 62) / step * step + 1;
        while p > step {
            if p < 1 << 62 && is_prime(p) {
                return Ok(Self {
                    plan: NttPlan::new(n, p)?,
                });
            }
            p -= step;
        }
        Err(Error::SearchExhausted(1 << 62))
    }

    pub fn modulus(&self) -> u64 {
        self.plan.q
    }

    pub fn multiply(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let p = self.plan.q;
        let ma = a
            .iter()
            .map(|x| x.unsigned_abs() as u128)
            .max()
            .unwrap_or(0);
        let mb = b
            .iter()
            .map(|x| x.unsigned_abs() as u128)
            .max()
            .unwrap_or(0);
        let bound = ma.saturating_mul(mb).saturating_mul(a.len() as u128);
        if bound >= (p / 2) as u128 {
            return negacyclic_exact_schoolbook(a, b);
        }
        let lift =
            |v: &[i64]| -> Vec<u64> { v.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect() };
        self.plan
            .multiply(&lift(a), &lift(b))
            .into_iter()
            .map(|c| {
                if c > p / 2 {
                    c as i64 - p as i64
                } else {
                    c as i64
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{rng_from_seed, uniform_below};

    #[test]
    fn psi_has_order_2n() {
        for (n, q) in [(8usize, 17u64), (16, 97), (4, 17), (1, 3)] {
            let plan = NttPlan::new(n, q).unwrap();
            assert_eq!(pow_mod(plan.psi(), n as u64, q), q - 1);
            assert_eq!(pow_mod(plan.psi(), 2 * n as u64, q), 1);
        }
    }

    #[test]
    fn unsupported_parameters() {
        assert!(NttPlan::new(8, 5).is_err());
        assert!(NttPlan::new(6, 13).is_err());
        assert_eq!(NttPlan::new(8, 33), Err(Error::NotPrime(33)));
        assert!(!NttPlan::supports(8, 5));
        assert!(NttPlan::supports(8, 17));
    }

    #[test]
    fn round_trip_and_product() {
        let mut rng = rng_from_seed(11);
        for (n, q) in [(8usize, 17u64), (16, 97)] {
            let plan = NttPlan::new(n, q).unwrap();
            for _ in 0..100 {
                let a: Vec<u64> = (0..n).map(|_| uniform_below(&mut rng, q)).collect();
                let b: Vec<u64> = (0..n).map(|_| uniform_below(&mut rng, q)).collect();
                let mut t = a.clone();
                plan.forward(&mut t);
                plan.inverse(&mut t);
                assert_eq!(t, a);
                assert_eq!(plan.multiply(&a, &b), negacyclic_schoolbook(&a, &b, q));
            }
        }
    }

    #[test]
    fn exact_products() {
        let mut rng = rng_from_seed(12);
        let ex = ExactNegacyclic::new(16).unwrap();
        assert_eq!(ex.modulus() % 32, 1);
        for _ in 0..100 {
            let a: Vec<i64> = (0..16)
                .map(|_| uniform_below(&mut rng, 2001) as i64 - 1000)
                .collect();
            let b: Vec<i64> = (0..16)
                .map(|_| uniform_below(&mut rng, 2001) as i64 - 1000)
                .collect();
            assert_eq!(ex.multiply(&a, &b), negacyclic_exact_schoolbook(&a, &b));
        }
        let big = alloc::vec![i64::MAX / 4; 16];
        assert_eq!(
            ex.multiply(&big, &big),
            negacyclic_exact_schoolbook(&big, &big)
        );
    }
}
