//! Integral LLL reduction.
//!
//! All quantities are kept as integers: `d[i]` is the Gram determinant of the
//! first `i` basis vectors and `lam[i][j] = d[j+1] * mu[i][j]`. Divisions in
//! the update formulas are exact. The unimodular transform is tracked so that
//! coordinates found in the reduced basis can be mapped back to the input.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lattice::ScaledLattice;
use super::matrix::{dot, IntBasis, IntMatrix};
use crate::error::{Error, Result};

/// Exact Gram–Schmidt data: `B = (I + mu) B*` with `mu` strictly lower
/// triangular (the diagonal of `mu` is stored as zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSchmidtData {
    pub mu: Vec<Vec<BigRational>>,
    pub b_star_norms_sq: Vec<BigRational>,
}

impl GramSchmidtData {
    /// Exact Gram–Schmidt orthogonalization of the rows of `b`.
    pub fn of(b: &IntMatrix) -> Result<Self> {
        let k = b.nrows();
        let rows: Vec<Vec<BigRational>> = b.to_rational();
        let mut stars: Vec<Vec<BigRational>> = Vec::with_capacity(k);
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut norms = Vec::with_capacity(k);
        for i in 0..k {
            let mut s = rows[i].clone();
            for j in 0..i {
                let m = rat_dot(&rows[i], &stars[j]) / &norms[j];
                for (x, y) in s.iter_mut().zip(&stars[j]) {
                    *x = &*x - &m * y;
                }
                mu[i][j] = m;
            }
            let nsq = rat_dot(&s, &s);
            if nsq.is_zero() {
                return Err(Error::RankDeficient);
            }
            norms.push(nsq);
            stars.push(s);
        }
        Ok(Self {
            mu,
            b_star_norms_sq: norms,
        })
    }

    pub fn is_size_reduced(&self) -> bool {
        let half = BigRational::new(1.into(), 2.into());
        self.mu
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(|m| m.abs() <= half))
    }

    pub fn satisfies_lovasz(&self, delta: &BigRational) -> bool {
        (1..self.b_star_norms_sq.len()).all(|k| {
            let m = &self.mu[k][k - 1];
            self.b_star_norms_sq[k] >= (delta - m * m) * &self.b_star_norms_sq[k - 1]
        })
    }
}

fn rat_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Output of [`lll_reduce_with_transform`]: `reduced = transform · input`.
#[derive(Clone, Debug)]
pub struct LllOutput {
    pub reduced: IntBasis,
    pub transform: IntMatrix,
    pub gso: GramSchmidtData,
}

pub fn default_delta() -> BigRational {
    BigRational::new(3.into(), 4.into())
}

/// LLL-reduces the integer basis of `l` with parameter `delta ∈ (1/4, 1]`.
/// The scale is carried through unchanged.
pub fn lll_reduce(l: &ScaledLattice, delta: &BigRational) -> Result<ScaledLattice> {
    let out = lll_reduce_with_transform(l.basis(), delta)?;
    ScaledLattice::new(out.reduced, l.scale_sq().clone())
}

pub fn lll_reduce_with_transform(basis: &IntBasis, delta: &BigRational) -> Result<LllOutput> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *delta <= quarter || *delta > BigRational::one() {
        return Err(Error::InvalidParameter(
            "LLL delta must lie in (1/4, 1]".into(),
        ));
    }
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let k = basis.rank();
    let mut state = Integral {
        b: basis.to_rows(),
        h: IntMatrix::identity(k).to_rows(),
        d: vec![BigInt::zero(); k + 1],
        lam: vec![vec![BigInt::zero(); k]; k],
    };
    state.run(&p, &q)?;

    let gso = GramSchmidtData {
        mu: (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if j < i {
                            BigRational::new(state.lam[i][j].clone(), state.d[j + 1].clone())
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect(),
        b_star_norms_sq: (0..k)
            .map(|i| BigRational::new(state.d[i + 1].clone(), state.d[i].clone()))
            .collect(),
    };
    Ok(LllOutput {
        reduced: IntBasis::new(IntMatrix::from_rows(state.b)?)?,
        transform: IntMatrix::from_rows(state.h)?,
        gso,
    })
}

struct Integral {
    b: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

/// Nearest integer to `a / b` for `b > 0`, ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * two))
}

impl Integral {
    // Vector indices are 0-based; d[i + 1] belongs to vector i, d[0] = 1.
    fn run(&mut self, p: &BigInt, q: &BigInt) -> Result<()> {
        let n = self.b.len();
        self.d[0] = BigInt::one();
        self.d[1] = dot(&self.b[0], &self.b[0]);
        if self.d[1].is_zero() {
            return Err(Error::RankDeficient);
        }
        let mut k = 1;
        let mut kmax = 0;
        while k < n {
            if k > kmax {
                kmax = k;
                self.incorporate(k)?;
            }
            loop {
                self.reduce(k, k - 1);
                let lhs = q
                    * (&self.d[k + 1] * &self.d[k - 1] + &self.lam[k][k - 1] * &self.lam[k][k - 1]);
                let rhs = p * &self.d[k] * &self.d[k];
                if lhs < rhs {
                    self.swap(k, kmax);
                    k = k.saturating_sub(1).max(1);
                } else {
                    for l in (0..k.saturating_sub(1)).rev() {
                        self.reduce(k, l);
                    }
                    k += 1;
                    break;
                }
            }
        }
        Ok(())
    }

    fn incorporate(&mut self, k: usize) -> Result<()> {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i];
            }
            if j < k {
                self.lam[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::RankDeficient);
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    fn reduce(&mut self, k: usize, l: usize) {
        let two_lam = &self.lam[k][l] * BigInt::from(2);
        if two_lam.abs() <= self.d[l + 1] {
            return;
        }
        let r = round_div(&self.lam[k][l], &self.d[l + 1]);
        let (bl, hl) = (self.b[l].clone(), self.h[l].clone());
        for (x, y) in self.b[k].iter_mut().zip(&bl) {
            *x -= &r * y;
        }
        for (x, y) in self.h[k].iter_mut().zip(&hl) {
            *x -= &r * y;
        }
        self.lam[k][l] -= &r * &self.d[l + 1];
        for i in 0..l {
            let t = &r * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        self.h.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = core::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = core::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let big_b = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            self.lam[i][k - 1] = (&big_b * &t + &lam * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = big_b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::matrix::IntBasis;

    fn reduce(rows: &[&[i64]]) -> LllOutput {
        lll_reduce_with_transform(&IntBasis::from_i64_rows(rows).unwrap(), &default_delta())
            .unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let out = reduce(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(out.reduced.matrix(), &IntMatrix::identity(3));
    }

    #[test]
    fn two_dimensional_hand_trace() {
        // (1,0),(4,1): mu = 4 -> size-reduce second row to (0,1).
        let out = reduce(&[&[1, 0], &[4, 1]]);
        assert_eq!(dot(out.reduced.row(0), out.reduced.row(0)), BigInt::from(1));
        assert_eq!(
            out.reduced.matrix(),
            &IntMatrix::from_i64_rows(&[[1, 0], [0, 1]]).unwrap()
        );
    }

    #[test]
    fn transform_maps_input_to_output() {
        let rows: &[&[i64]] = &[&[1, 3, 7], &[0, 11, 2], &[5, 5, 13]];
        let input = IntBasis::from_i64_rows(rows).unwrap();
        let out = reduce(rows);
        assert_eq!(
            out.transform.mul(input.matrix()).unwrap(),
            *out.reduced.matrix()
        );
        assert_eq!(out.transform.det().unwrap().abs(), BigInt::one());
        assert_eq!(out.gso, GramSchmidtData::of(out.reduced.matrix()).unwrap());
        assert!(out.gso.is_size_reduced());
        assert!(out.gso.satisfies_lovasz(&default_delta()));
    }

    #[test]
    fn rejects_bad_delta() {
        let b = IntBasis::identity(2);
        let bad = BigRational::new(1.into(), 5.into());
        assert!(lll_reduce_with_transform(&b, &bad).is_err());
    }

    #[test]
    fn non_square_basis() {
        let out = reduce(&[&[3, 5, 7, 1], &[2, 4, 6, 0]]);
        assert_eq!(out.reduced.rank(), 2);
        assert!(out.gso.is_size_reduced());
    }
}
