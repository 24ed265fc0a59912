use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{dot, solve_left, IntBasis, IntMatrix};
use crate::error::{Error, Result};

/// The standard symplectic form `J_{2N} = [[0, I], [-I, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub dim_half: usize,
}

impl SymplecticForm {
    pub fn new(dim_half: usize) -> Self {
        Self { dim_half }
    }

    pub fn matrix(&self) -> IntMatrix {
        let n = self.dim_half;
        IntMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                BigInt::one()
            } else if i >= n && j + n == i {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// `u · J · v^T` for row vectors of length `2N`.
    pub fn pairing(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let n = self.dim_half;
        dot(&u[..n], &v[n..]) - dot(&u[n..], &v[..n])
    }
}

/// `M · J · M^T == q · J`, decided in exact integer arithmetic.
pub fn is_q_symplectic(m: &IntMatrix, q: u64) -> Result<bool> {
    if !m.is_square() || !m.nrows().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "q-symplectic test needs an even square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let form = SymplecticForm::new(m.nrows() / 2);
    let n = form.dim_half;
    let q = BigInt::from(q);
    for i in 0..m.nrows() {
        for j in 0..m.nrows() {
            let expected = if i < n && j == i + n {
                q.clone()
            } else if i >= n && j + n == i {
                -q.clone()
            } else {
                BigInt::zero()
            };
            if form.pairing(m.row(i), m.row(j)) != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The lattice `alpha · Z^k B` with `alpha^2 = scale_sq` rational.
///
/// Squared norms of lattice vectors are `scale_sq · ||c B||^2`, so all of
/// them are exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledLattice {
    basis: IntBasis,
    scale_sq: BigRational,
}

impl ScaledLattice {
    pub fn new(basis: IntBasis, scale_sq: BigRational) -> Result<Self> {
        if !scale_sq.is_positive() {
            return Err(Error::InvalidParameter("scale_sq must be positive".into()));
        }
        Ok(Self { basis, scale_sq })
    }

    pub fn unscaled(basis: IntBasis) -> Self {
        Self {
            basis,
            scale_sq: BigRational::one(),
        }
    }

    pub fn with_scale(basis: IntBasis, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Self::new(basis, BigRational::new(num.into(), den.into()))
    }

    pub fn basis(&self) -> &IntBasis {
        &self.basis
    }

    pub fn scale_sq(&self) -> &BigRational {
        &self.scale_sq
    }

    pub fn scale_f64(&self) -> f64 {
        libm::sqrt(rational_to_f64(&self.scale_sq))
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    /// The same integer basis with `scale_sq` multiplied by `factor_sq`.
    pub fn rescaled(&self, factor_sq: &BigRational) -> Result<Self> {
        Self::new(self.basis.clone(), &self.scale_sq * factor_sq)
    }

    pub fn vector(&self, coords: &[i64]) -> Result<Vec<BigInt>> {
        self.basis.left_mul_i64(coords)
    }

    pub fn norm_sq(&self, coords: &[i64]) -> Result<BigRational> {
        let v = self.vector(coords)?;
        Ok(&self.scale_sq * BigRational::from_integer(dot(&v, &v)))
    }

    /// Real coordinates of the lattice vector with the given coefficients.
    pub fn embed(&self, coords: &[i64]) -> Result<Vec<f64>> {
        let s = self.scale_f64();
        Ok(self
            .vector(coords)?
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN) * s)
            .collect())
    }

    /// |det| of the Gram matrix of the integer basis times `scale_sq^rank`,
    /// i.e. the squared covolume.
    pub fn covolume_sq(&self) -> Result<BigRational> {
        let g = self.basis.gram().det()?;
        let mut s = BigRational::from_integer(g.abs());
        for _ in 0..self.rank() {
            s *= &self.scale_sq;
        }
        Ok(s)
    }
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // Shift both to keep the quotient representable.
            let shift = n.bits().max(d.bits()).saturating_sub(1000);
            let a = (n >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let b = (d >> shift as usize).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub(crate) fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// The symplectic dual `L^x = { v in span : u J v^T in Z for all u in L }`.
///
/// For a square basis `B` the dual is generated by `B^{-T} J^T`; the rational
/// matrix is written as an integer basis with its content pulled into the
/// scale.
pub fn symplectic_dual_basis(l: &ScaledLattice) -> Result<ScaledLattice> {
    let b = l.basis();
    if !b.is_full_dimensional() || !b.rank().is_multiple_of(2) {
        return Err(Error::Dimension(
            "symplectic dual needs an even full-dimensional basis".into(),
        ));
    }
    let (inv, den) = b.inverse()?;
    let jt = SymplecticForm::new(b.rank() / 2).matrix().transpose();
    let raw = inv.transpose().mul(&jt)?;
    let content = raw.content();
    let int_basis = IntMatrix::from_fn(raw.nrows(), raw.ncols(), |i, j| raw.get(i, j) / &content);
    // (alpha B)^x = (1/alpha) (adj/den)^T J^T = (content / (alpha den)) * int_basis
    let factor = BigRational::new(content, den);
    let scale_sq = &factor * &factor / l.scale_sq();
    ScaledLattice::new(IntBasis::new(int_basis)?, scale_sq)
}

/// Whether the vector of `superlattice` with coefficients `coords` lies in `l`.
///
/// The ratio of the scales must be a rational square; the coordinates of the
/// vector with respect to `l` are then found by exact rational elimination
/// and tested for integrality.
pub fn lattice_contains(
    l: &ScaledLattice,
    coords: &[i64],
    superlattice: &ScaledLattice,
) -> Result<bool> {
    let ratio = rational_sqrt(&(superlattice.scale_sq() / l.scale_sq()))
        .ok_or(Error::IncommensurateScales)?;
    if l.ambient_dim() != superlattice.ambient_dim() {
        return Err(Error::Dimension("lattices live in different spaces".into()));
    }
    let v: Vec<BigRational> = superlattice
        .vector(coords)?
        .into_iter()
        .map(|x| BigRational::from_integer(x) * &ratio)
        .collect();
    Ok(match solve_left(l.basis(), &v)? {
        Some(x) => x.iter().all(BigRational::is_integer),
        None => false,
    })
}

/// Set equality by mutual containment of basis vectors.
pub fn same_lattice(a: &ScaledLattice, b: &ScaledLattice) -> Result<bool> {
    if a.rank() != b.rank() {
        return Ok(false);
    }
    let unit = |k: usize, i: usize| -> Vec<i64> { (0..k).map(|j| i64::from(i == j)).collect() };
    for i in 0..b.rank() {
        if !lattice_contains(a, &unit(b.rank(), i), b)? {
            return Ok(false);
        }
    }
    for i in 0..a.rank() {
        if !lattice_contains(b, &unit(a.rank(), i), a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(rows: &[&[i64]]) -> IntBasis {
        IntBasis::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn j_and_identity_are_symplectic() {
        for n in 1..4 {
            let j = SymplecticForm::new(n).matrix();
            assert!(is_q_symplectic(&j, 1).unwrap());
            assert!(is_q_symplectic(&IntMatrix::identity(2 * n), 1).unwrap());
            assert!(!is_q_symplectic(&IntMatrix::identity(2 * n), 2).unwrap());
            // J J^T = I and J^T = -J
            assert_eq!(j.mul(&j.transpose()).unwrap(), IntMatrix::identity(2 * n));
            assert_eq!(j.transpose(), j.scale(&BigInt::from(-1)));
        }
    }

    #[test]
    fn odd_dimension_is_an_error() {
        assert!(matches!(
            is_q_symplectic(&IntMatrix::identity(3), 1),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn dual_of_j_lattice_is_integer_lattice() {
        let l = ScaledLattice::unscaled(IntBasis::new(SymplecticForm::new(2).matrix()).unwrap());
        let d = symplectic_dual_basis(&l).unwrap();
        assert!(same_lattice(&d, &ScaledLattice::unscaled(IntBasis::identity(4))).unwrap());
    }

    #[test]
    fn dual_scales_inversely() {
        // 1/sqrt(3) * [[1,1],[0,3]] is symplectic; doubling it halves the dual.
        let b = basis(&[&[1, 1], &[0, 3]]);
        let l = ScaledLattice::with_scale(b.clone(), 1, 3).unwrap();
        assert!(same_lattice(&symplectic_dual_basis(&l).unwrap(), &l).unwrap());
        let l2 = ScaledLattice::with_scale(b, 4, 3).unwrap();
        let expected = ScaledLattice::with_scale(l.basis().clone(), 1, 12).unwrap();
        assert!(same_lattice(&symplectic_dual_basis(&l2).unwrap(), &expected).unwrap());
    }

    #[test]
    fn containment_mod_lambda() {
        // D = (1/sqrt(6)) L, S = sqrt(2/3) L = 2 D for L = L([[1,1],[0,3]]).
        let b = basis(&[&[1, 1], &[0, 3]]);
        let d = ScaledLattice::with_scale(b.clone(), 1, 6).unwrap();
        let s = ScaledLattice::with_scale(b, 2, 3).unwrap();
        for c0 in -3..=3i64 {
            for c1 in -3..=3i64 {
                let inside = lattice_contains(&s, &[c0, c1], &d).unwrap();
                assert_eq!(inside, c0 % 2 == 0 && c1 % 2 == 0, "({c0},{c1})");
            }
        }
        assert!(lattice_contains(&s, &[0, 0], &d).unwrap());
    }

    #[test]
    fn incommensurate_scales_rejected() {
        let b = basis(&[&[1, 0], &[0, 1]]);
        let a = ScaledLattice::with_scale(b.clone(), 1, 1).unwrap();
        let c = ScaledLattice::with_scale(b, 2, 1).unwrap();
        assert_eq!(
            lattice_contains(&a, &[1, 0], &c),
            Err(Error::IncommensurateScales)
        );
    }
}
