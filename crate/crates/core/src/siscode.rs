//! GKP codes from symmetric SIS and M-SIS lattices.
//!
//! For a symmetric `H` the lattice `L⊥(H) = {(z_1, z_2) : z_2 ≡ z_1 H (mod q)}`
//! has basis `M_H = [[I, H], [0, qI]]` and is `q`-symplectic. With `λ ≥ 2`
//! the code has stabilizer lattice `S = sqrt(λ/q) L⊥(H)` and decoder
//! lattice `D = (1/sqrt(λq)) L⊥(H)`, so `S = λD` and the distance is
//! `Δ = λ₁(L⊥(H)) / sqrt(λq)`.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::exactlat::{shortest_vector, IntBasis, IntMatrix, ScaledLattice, ENUMERATION_CAP};
use crate::numth::{
    factor_xn_plus_1, is_prime, sis_high_probability_failure, sis_high_probability_q,
    sis_prob_bound, sis_tail_failure, sis_tail_q, PolyModQ,
};
use crate::ringquot::{module_basis, RingSymMat};
use crate::seed::uniform_below;

/// Logical level used when none is given.
pub const DEFAULT_LAMBDA: u64 = 2;

/// A symmetric `n × n` matrix over `Z_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatModQ {
    n: usize,
    q: u64,
    entries: Vec<u64>,
}

impl SymMatModQ {
    /// Checks shape, range and symmetry; `q` must be prime.
    pub fn new(n: usize, q: u64, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Self::new_any_modulus(n, q, entries)
    }

    pub fn new_any_modulus(n: usize, q: u64, entries: Vec<u64>) -> Result<Self> {
        if n == 0 || q < 2 {
            return Err(Error::InvalidParameter("need n >= 1 and q >= 2".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Dimension(alloc::format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(x) = entries.iter().find(|&&x| x >= q) {
            return Err(Error::InvalidParameter(alloc::format!(
                "entry {x} is not reduced mod {q}"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "entry ({i},{j}) breaks symmetry"
                    )));
                }
            }
        }
        Ok(Self { n, q, entries })
    }

    /// Uniform symmetric matrix: entries with `i ≤ j` are drawn in row-major
    /// order and mirrored. `q` must be prime.
    pub fn sample<R: RngCore + ?Sized>(n: usize, q: u64, rng: &mut R) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Self::sample_any_modulus(n, q, rng)
    }

    /// As [`SymMatModQ::sample`] for any modulus `q ≥ 2`.
    pub fn sample_any_modulus<R: RngCore + ?Sized>(n: usize, q: u64, rng: &mut R) -> Result<Self> {
        if n == 0 || q < 2 {
            return Err(Error::InvalidParameter("need n >= 1 and q >= 2".into()));
        }
        let mut entries = alloc::vec![0u64; n * n];
        for i in 0..n {
            for j in i..n {
                let v = uniform_below(rng, q);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self { n, q, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| BigInt::from(self.get(i, j)))
    }
}

/// `M_H = [[I_n, H], [0, q I_n]]`.
pub fn build_basis(h: &SymMatModQ) -> IntBasis {
    let n = h.n;
    let m = IntMatrix::from_blocks(
        &IntMatrix::identity(n),
        &h.to_matrix(),
        &IntMatrix::zeros(n, n),
        &IntMatrix::identity(n).scale(&BigInt::from(h.q)),
    )
    .expect("blocks have matching shapes");
    IntBasis::new(m).expect("triangular with nonzero diagonal")
}

/// `z_2 ≡ z_1 H (mod q)`.
pub fn lattice_membership(h: &SymMatModQ, z: &[i64]) -> Result<bool> {
    let n = h.n;
    if z.len() != 2 * n {
        return Err(Error::Dimension(alloc::format!(
            "expected a vector of length {}, got {}",
            2 * n,
            z.len()
        )));
    }
    let q = h.q as i128;
    Ok((0..n).all(|j| {
        let s: i128 = (0..n).map(|i| z[i] as i128 * h.get(i, j) as i128).sum();
        (s - z[n + j] as i128).rem_euclid(q) == 0
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Sis(SymMatModQ),
    Module(RingSymMat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkpCode {
    lambda: u64,
    construction: Construction,
    basis: IntBasis,
    symplectic_basis: IntBasis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeDistance {
    /// `λ₁(L⊥(H))²`, an integer.
    pub lambda1_sq: BigInt,
    /// `Δ² = λ₁² / (λq)`.
    pub delta_sq: BigRational,
    pub delta: f64,
    /// Coordinates of a shortest vector with respect to `M_H`.
    pub coords: Vec<i64>,
}

impl GkpCode {
    pub fn new(construction: Construction, lambda: u64) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::InvalidParameter("lambda must be at least 2".into()));
        }
        let (basis, symplectic_basis) = match &construction {
            Construction::Sis(h) => {
                let b = build_basis(h);
                (b.clone(), b)
            }
            Construction::Module(h) => module_basis(h)?,
        };
        Ok(Self {
            lambda,
            construction,
            basis,
            symplectic_basis,
        })
    }

    pub fn sis(h: SymMatModQ, lambda: u64) -> Result<Self> {
        Self::new(Construction::Sis(h), lambda)
    }

    pub fn module(h: RingSymMat, lambda: u64) -> Result<Self> {
        Self::new(Construction::Module(h), lambda)
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// Modes for SIS codes, ring degree for module codes.
    pub fn n(&self) -> usize {
        match &self.construction {
            Construction::Sis(h) => h.n(),
            Construction::Module(h) => h.n(),
        }
    }

    /// Module rank (1 for SIS codes).
    pub fn k(&self) -> usize {
        match &self.construction {
            Construction::Sis(_) => 1,
            Construction::Module(h) => h.k(),
        }
    }

    /// Number of bosonic modes, `n·k`.
    pub fn modes(&self) -> usize {
        self.n() * self.k()
    }

    pub fn q(&self) -> u64 {
        match &self.construction {
            Construction::Sis(h) => h.q(),
            Construction::Module(h) => h.q(),
        }
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// `M_H`.
    pub fn basis(&self) -> &IntBasis {
        &self.basis
    }

    /// A `q`-symplectic basis of an isometric copy: `M_H` itself for SIS
    /// codes, `M̄_H` for module codes.
    pub fn symplectic_basis(&self) -> &IntBasis {
        &self.symplectic_basis
    }

    /// The upper-right block of `M_H`: `H` or `ρ(H)`.
    pub fn h_matrix(&self) -> IntMatrix {
        match &self.construction {
            Construction::Sis(h) => h.to_matrix(),
            Construction::Module(h) => h.rho(),
        }
    }

    pub fn h_matrix_i64(&self) -> Vec<Vec<i64>> {
        self.h_matrix()
            .to_i64_rows()
            .expect("entries are bounded by q")
    }

    fn scaled(&self, num: u64, den: u64) -> ScaledLattice {
        ScaledLattice::new(
            self.basis.clone(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
        .expect("positive scale")
    }

    /// `sqrt(λ/q) L⊥(H)`.
    pub fn stabilizer(&self) -> ScaledLattice {
        self.scaled(self.lambda, self.q())
    }

    /// `(1/sqrt(λq)) L⊥(H)`.
    pub fn decoder(&self) -> ScaledLattice {
        self.scaled(1, self.lambda * self.q())
    }

    /// `(1/sqrt(q)) L⊥(H)`.
    pub fn normalized_lattice(&self) -> ScaledLattice {
        self.scaled(1, self.q())
    }

    /// `λ^{nk}`.
    pub fn logical_dimension(&self) -> BigUint {
        BigUint::from(self.lambda).pow(self.modes() as u32)
    }

    /// Exact code distance; needs `2nk ≤ 32`.
    pub fn code_distance(&self) -> Result<CodeDistance> {
        let dim = 2 * self.modes();
        if dim > ENUMERATION_CAP {
            return Err(Error::Capacity {
                dim,
                cap: ENUMERATION_CAP,
            });
        }
        let sv = shortest_vector(&ScaledLattice::unscaled(self.basis.clone()))?;
        let lambda1_sq = sv.norm_sq.to_integer();
        let delta_sq = BigRational::new(lambda1_sq.clone(), BigInt::from(self.lambda * self.q()));
        let delta = libm::sqrt(crate::exactlat::rational_to_f64(&delta_sq));
        Ok(CodeDistance {
            lambda1_sq,
            delta_sq,
            delta,
            coords: sv.coords,
        })
    }

    pub fn bounds(&self, r: f64) -> BoundReport {
        bounds(self.modes() as u64, self.q(), self.lambda, r)
    }
}

/// Closed-form targets and bounds for an `n`-mode code.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub q: u64,
    pub lambda: u64,
    pub r: f64,
    /// `sqrt(n/(λπe))`.
    pub lower_target: f64,
    /// `sqrt(2n/λ)`.
    pub minkowski_upper: f64,
    /// `n / (2 sqrt(λ) sqrt(n/(πe)))`, the transference bound on the
    /// covering radius.
    pub covering_upper: f64,
    /// `σ_{2n}(r + sqrt(n/(2q)))^{2n}`.
    pub prob_bound: f64,
    pub q_is_prime: bool,
    /// `r sqrt(q) < q/2`.
    pub precondition_ok: bool,
    pub high_probability_q: f64,
    pub high_probability_failure: f64,
    pub tail_q: f64,
    pub tail_failure: f64,
}

impl BoundReport {
    /// The `e²/sqrt(2πn)` failure bound exceeds 1.
    pub fn high_probability_vacuous(&self) -> bool {
        self.high_probability_failure > 1.0
    }

    pub fn prob_bound_vacuous(&self) -> bool {
        self.prob_bound > 1.0
    }
}

pub fn lower_target(n: u64, lambda: u64) -> f64 {
    libm::sqrt(n as f64 / (lambda as f64 * PI * E))
}

pub fn minkowski_upper(n: u64, lambda: u64) -> f64 {
    libm::sqrt(2.0 * n as f64 / lambda as f64)
}

pub fn covering_upper(n: u64, lambda: u64) -> f64 {
    let target = libm::sqrt(n as f64 / (PI * E));
    n as f64 / (2.0 * libm::sqrt(lambda as f64) * target)
}

pub fn bounds(n: u64, q: u64, lambda: u64, r: f64) -> BoundReport {
    BoundReport {
        n,
        q,
        lambda,
        r,
        lower_target: lower_target(n, lambda),
        minkowski_upper: minkowski_upper(n, lambda),
        covering_upper: covering_upper(n, lambda),
        prob_bound: sis_prob_bound(n, q, r),
        q_is_prime: is_prime(q),
        precondition_ok: r * libm::sqrt(q as f64) < q as f64 / 2.0,
        high_probability_q: sis_high_probability_q(n),
        high_probability_failure: sis_high_probability_failure(n),
        tail_q: sis_tail_q(n),
        tail_failure: sis_tail_failure(n),
    }
}

/// Probability that a fixed `z = (z_1, z_2)` with `z_1 ≢ 0 (mod q)` lies in
/// `L⊥(H)` for uniform symmetric `H ∈ Z_q^{n×n}`, `q` prime: `q^{-n}`.
pub fn sis_membership_probability(n: usize, q: u64) -> f64 {
    libm::pow(q as f64, -(n as f64))
}

/// Exact membership probability of `z ∈ R^{2k}` in `L⊥(H)` for uniform
/// symmetric `H ∈ R_q^{k×k}`, `q` prime and coprime to `2n`.
///
/// Over each irreducible factor `p_j` of `X^n + 1` the condition is
/// `H z_1 = z_2` over `F_{q^{d_j}}`. Factors where both halves vanish are
/// free; one where only `z_1` vanishes makes the event impossible; every
/// other factor contributes `q^{-k d_j}`. Returns `(d_z, probability)`.
pub fn module_membership_probability(n: usize, k: usize, q: u64, z: &[i64]) -> Result<(u64, f64)> {
    if z.len() != 2 * n * k {
        return Err(Error::Dimension(alloc::format!(
            "expected a vector of length {}, got {}",
            2 * n * k,
            z.len()
        )));
    }
    let factors = factor_xn_plus_1(n, q)?;
    let blocks: Vec<PolyModQ> = z.chunks(n).map(|c| PolyModQ::from_i64(q, c)).collect();
    let mut d_z = 0;
    for p in &factors {
        let vanishes = |b: &[PolyModQ]| -> Result<bool> {
            for x in b {
                if !x.rem(p)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let (z1_zero, z2_zero) = (vanishes(&blocks[..k])?, vanishes(&blocks[k..])?);
        match (z1_zero, z2_zero) {
            (true, true) => {}
            (true, false) => return Ok((d_z, 0.0)),
            _ => d_z += p.degree().unwrap_or(0) as u64,
        }
    }
    Ok((d_z, libm::pow(q as f64, -((d_z * k as u64) as f64))))
}

/// `Δ` as an `f64` from the exact square.
pub fn delta_of(delta_sq: &BigRational) -> f64 {
    libm::sqrt(
        delta_sq.numer().to_f64().unwrap_or(f64::NAN)
            / delta_sq.denom().to_f64().unwrap_or(f64::NAN),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::{is_q_symplectic, lattice_contains, same_lattice};
    use crate::seed::rng_from_seed;

    #[test]
    fn basis_n1_q3() {
        let h = SymMatModQ::new(1, 3, alloc::vec![1]).unwrap();
        let b = build_basis(&h);
        assert_eq!(
            b.matrix(),
            &IntMatrix::from_i64_rows(&[[1, 1], [0, 3]]).unwrap()
        );
        assert!(is_q_symplectic(b.matrix(), 3).unwrap());
    }

    #[test]
    fn distance_n1_q3() {
        let h = SymMatModQ::new(1, 3, alloc::vec![1]).unwrap();
        let code = GkpCode::sis(h, 2).unwrap();
        let d = code.code_distance().unwrap();
        assert_eq!(d.lambda1_sq, BigInt::from(2));
        assert_eq!(d.delta_sq, BigRational::new(1.into(), 3.into()));
        assert_eq!(code.logical_dimension(), BigUint::from(2u32));
    }

    #[test]
    fn membership_examples() {
        let h = SymMatModQ::new(2, 5, alloc::vec![1, 2, 2, 3]).unwrap();
        assert!(lattice_membership(&h, &[1, 0, 1, 2]).unwrap());
        assert!(!lattice_membership(&h, &[1, 0, 1, 3]).unwrap());
        assert!(lattice_membership(&h, &[0, 0, 0, 0]).unwrap());
        assert!(lattice_membership(&h, &[1, 0]).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            SymMatModQ::new(1, 4, alloc::vec![1]),
            Err(Error::NotPrime(4))
        );
        assert!(SymMatModQ::new_any_modulus(1, 4, alloc::vec![1]).is_ok());
        assert!(SymMatModQ::new(2, 5, alloc::vec![1, 2, 3, 4]).is_err());
        assert!(SymMatModQ::new(1, 5, alloc::vec![5]).is_err());
        let h = SymMatModQ::new(1, 5, alloc::vec![1]).unwrap();
        assert!(GkpCode::sis(h, 1).is_err());
    }

    #[test]
    fn stabilizer_is_lambda_times_decoder() {
        let mut rng = rng_from_seed(8);
        let h = SymMatModQ::sample(2, 7, &mut rng).unwrap();
        let code = GkpCode::sis(h, 3).unwrap();
        let s = code.stabilizer();
        let scaled_d = code
            .decoder()
            .rescaled(&BigRational::from_integer(9.into()))
            .unwrap();
        assert!(same_lattice(&s, &scaled_d).unwrap());
        assert!(!lattice_contains(&s, &[1, 0, 0, 0], &code.decoder()).unwrap());
        assert!(lattice_contains(&s, &[3, 0, -6, 0], &code.decoder()).unwrap());
    }

    #[test]
    fn bound_arithmetic() {
        let b = bounds(7, 211, 2, 0.5);
        assert!((b.lower_target - 0.640_195).abs() < 1e-5);
        assert!((b.minkowski_upper - libm::sqrt(7.0)).abs() < 1e-12);
        assert!((b.covering_upper - 0.5 * libm::sqrt(PI * E * 3.5)).abs() < 1e-12);
        assert!(b.high_probability_vacuous());
        assert!(b.lower_target < b.minkowski_upper);
    }

    #[test]
    fn module_probabilities() {
        // X^2 + 1 is irreducible mod 3
        let (d, p) = module_membership_probability(2, 1, 3, &[1, 0, 2, 1]).unwrap();
        assert_eq!(d, 2);
        assert!((p - 1.0 / 9.0).abs() < 1e-15);
        // mod 5, X^2 + 1 = (X - 2)(X + 2); z_1 = X - 2 vanishes at one factor
        let (d, p) = module_membership_probability(2, 1, 5, &[-2, 1, 0, 0]).unwrap();
        assert_eq!(d, 1);
        assert!((p - 0.2).abs() < 1e-15);
        let (_, p) = module_membership_probability(2, 1, 5, &[-2, 1, 1, 0]).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn module_code_distance_matches_bar_basis() {
        let mut rng = rng_from_seed(9);
        let h = RingSymMat::sample(2, 1, 13, &mut rng).unwrap();
        let code = GkpCode::module(h, 2).unwrap();
        let a = code.code_distance().unwrap();
        let b = shortest_vector(&ScaledLattice::unscaled(code.symplectic_basis().clone())).unwrap();
        assert_eq!(BigRational::from_integer(a.lambda1_sq), b.norm_sq);
        assert_eq!(code.modes(), 2);
    }
}
