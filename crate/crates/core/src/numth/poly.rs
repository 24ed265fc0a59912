//! Dense polynomials over `F_q` and factorization of `X^n + 1`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use rand_core::RngCore;

use super::arith::{divisors, euler_phi, factorize, inv_mod, is_prime, mul_mod, mult_order};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, kind, rng_from_seed, uniform_below};

/// A polynomial over `Z_q`, coefficients lowest degree first. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyModQ {
    q: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for PolyModQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PolyModQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, c) => write!(f, "{c}X")?,
                (i, 1) => write!(f, "X^{i}")?,
                (i, c) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for PolyModQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for PolyModQ {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
            .then(self.q.cmp(&other.q))
    }
}

impl PolyModQ {
    pub fn new(q: u64, coeffs: Vec<u64>) -> Self {
        let mut p = Self {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    pub fn from_i64(q: u64, coeffs: &[i64]) -> Self {
        Self::new(
            q,
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(q as i64) as u64)
                .collect(),
        )
    }

    pub fn zero(q: u64) -> Self {
        Self {
            q,
            coeffs: Vec::new(),
        }
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, vec![1])
    }

    pub fn x(q: u64) -> Self {
        Self::new(q, vec![0, 1])
    }

    /// `X^n + 1`.
    pub fn xn_plus_one(n: usize, q: u64) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = 1;
        c[n] += 1;
        Self::new(q, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.q
            })
            .collect();
        Self::new(self.q, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.q,
            self.coeffs.iter().map(|&c| (self.q - c) % self.q).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.q);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.q)) % self.q;
            }
        }
        Self::new(self.q, c)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(
            self.q,
            self.coeffs.iter().map(|&c| mul_mod(c, s, self.q)).collect(),
        )
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = inv_mod(self.leading(), self.q).ok_or(Error::NotPrime(self.q))?;
        Ok(self.scale(inv))
    }

    /// Euclidean division; requires an invertible leading coefficient.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::InvalidParameter(
                "division by the zero polynomial".into(),
            ));
        }
        let inv = inv_mod(d.leading(), self.q).ok_or(Error::NotPrime(self.q))?;
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        if r.len() <= dd {
            return Ok((Self::zero(self.q), self.clone()));
        }
        let mut quo = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, self.q);
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let t = mul_mod(c, dj, self.q);
                r[i - dd + j] = (r[i - dd + j] + self.q - t) % self.q;
            }
        }
        Ok((Self::new(self.q, quo), Self::new(self.q, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.q, self.q))
            .collect();
        Self::new(self.q, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.q) + c) % self.q)
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, exp: &BigUint, m: &Self) -> Result<Self> {
        let mut acc = Self::one(self.q).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(m)?;
            if exp.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    fn frobenius(&self, m: &Self) -> Result<Self> {
        self.pow_mod(&BigUint::from(self.q), m)
    }
}

fn require_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(())
}

/// Rabin's irreducibility test over a prime field.
pub fn is_irreducible(f: &PolyModQ) -> Result<bool> {
    require_prime(f.q)?;
    let d = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    let f = f.monic()?;
    let x = PolyModQ::x(f.q);
    // x_pows[i] = X^{q^i} mod f
    let mut x_pows = vec![x.rem(&f)?];
    for i in 1..=d {
        let next = x_pows[i - 1].frobenius(&f)?;
        x_pows.push(next);
    }
    if !x_pows[d].sub(&x).rem(&f)?.is_zero() {
        return Ok(false);
    }
    for (p, _) in factorize(d as u64) {
        let g = x_pows[d / p as usize].sub(&x).gcd(&f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Square-free decomposition: pairs `(g, m)` with `f = lc · Π g^m`, each `g`
/// monic and square-free.
pub fn squarefree_decomposition(f: &PolyModQ) -> Result<Vec<(PolyModQ, usize)>> {
    require_prime(f.q)?;
    let q = f.q;
    let mut out = Vec::new();
    sff(&f.monic()?, 1, &mut out)?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    // Merge factors that arrived with equal multiplicity.
    let mut merged: Vec<(PolyModQ, usize)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, k)) if *k == m => *h = h.mul(&g),
            _ => merged.push((g, m)),
        }
    }
    debug_assert!(merged.iter().all(|(g, _)| g.q == q));
    Ok(merged)
}

fn sff(f: &PolyModQ, mult: usize, out: &mut Vec<(PolyModQ, usize)>) -> Result<()> {
    let q = f.q;
    if f.deg() == 0 {
        return Ok(());
    }
    let fp = f.derivative();
    if fp.is_zero() {
        // f = g(X^q) = g(X)^q over F_q.
        let step = q as usize;
        let g = PolyModQ::new(q, f.coeffs.iter().step_by(step).copied().collect());
        return sff(&g, mult * step, out);
    }
    let mut c = f.gcd(&fp)?;
    let mut w = f.div_rem(&c)?.0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.div_rem(&y)?.0;
        if !z.is_one() {
            out.push((z.monic()?, i * mult));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w)?.0;
    }
    if !c.is_one() {
        let step = q as usize;
        let g = PolyModQ::new(q, c.coeffs.iter().step_by(step).copied().collect());
        sff(&g, mult * step, out)?;
    }
    Ok(())
}

/// Distinct-degree factorization of a monic square-free polynomial:
/// pairs `(g, d)` where `g` is the product of all irreducible factors of
/// degree `d`.
pub fn distinct_degree_factorization(f: &PolyModQ) -> Result<Vec<(PolyModQ, usize)>> {
    require_prime(f.q)?;
    let mut rest = f.monic()?;
    let x = PolyModQ::x(f.q);
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.frobenius(&rest)?;
        let g = h.sub(&x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_rem(&g)?.0;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let deg = rest.deg();
        out.push((rest, deg));
    }
    Ok(out)
}

/// Cantor–Zassenhaus equal-degree splitting for odd `q`.
pub fn equal_degree_factorization<R: RngCore + ?Sized>(
    f: &PolyModQ,
    d: usize,
    rng: &mut R,
) -> Result<Vec<PolyModQ>> {
    require_prime(f.q)?;
    if f.q == 2 {
        return Err(Error::InvalidParameter(
            "equal-degree splitting needs odd q".into(),
        ));
    }
    let n = f.deg();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::InvalidParameter(
            "degree does not divide the polynomial degree".into(),
        ));
    }
    let f = f.monic()?;
    if n == d {
        return Ok(vec![f]);
    }
    let exp = (BigUint::from(f.q).pow(d as u32) - 1u32) >> 1;
    loop {
        let a = PolyModQ::new(f.q, (0..n).map(|_| uniform_below(rng, f.q)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = a.pow_mod(&exp, &f)?.sub(&PolyModQ::one(f.q));
        let g = b.gcd(&f)?;
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_rem(&g)?.0;
            let mut out = equal_degree_factorization(&g, d, rng)?;
            out.extend(equal_degree_factorization(&h, d, rng)?);
            return Ok(out);
        }
    }
}

/// Monic irreducible factors of `f` with multiplicity, sorted.
pub fn factor_poly<R: RngCore + ?Sized>(
    f: &PolyModQ,
    rng: &mut R,
) -> Result<Vec<(PolyModQ, usize)>> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f)? {
        for (h, d) in distinct_degree_factorization(&g)? {
            for p in equal_degree_factorization(&h, d, rng)? {
                out.push((p, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// One group of irreducible factors of `X^n + 1` coming from the cyclotomic
/// factor `Φ_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorGroup {
    pub d: u64,
    pub degree: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorShape {
    pub groups: Vec<FactorGroup>,
}

impl FactorShape {
    pub fn total_degree(&self) -> u64 {
        self.groups.iter().map(|g| g.degree * g.count).sum()
    }

    pub fn factor_count(&self) -> usize {
        self.groups.iter().map(|g| g.count as usize).sum()
    }

    /// Degrees of all irreducible factors, ascending.
    pub fn degrees(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .groups
            .iter()
            .flat_map(|g| core::iter::repeat_n(g.degree, g.count as usize))
            .collect();
        v.sort_unstable();
        v
    }
}

fn check_ring_modulus(n: usize, q: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    require_prime(q)?;
    if (2 * n as u64).gcd(&q) != 1 {
        return Err(Error::NotCoprime {
            a: q,
            m: 2 * n as u64,
        });
    }
    Ok(())
}

/// The factor degrees of `X^n + 1` mod `q` predicted from multiplicative
/// orders: `Φ_d` for `d | 2n, d ∤ n` splits into `φ(d)/ord_d(q)` factors
/// of degree `ord_d(q)`.
pub fn predict_factor_shape(n: usize, q: u64) -> Result<FactorShape> {
    check_ring_modulus(n, q)?;
    let n = n as u64;
    let mut groups = Vec::new();
    for d in divisors(2 * n) {
        if n.is_multiple_of(d) {
            continue;
        }
        let degree = mult_order(q % d, d)?;
        groups.push(FactorGroup {
            d,
            degree,
            count: euler_phi(d)? / degree,
        });
    }
    Ok(FactorShape { groups })
}

/// Monic irreducible factors of `X^n + 1` mod `q`, sorted by degree and
/// then coefficients. The equal-degree split is seeded from `(n, q)`.
pub fn factor_xn_plus_1(n: usize, q: u64) -> Result<Vec<PolyModQ>> {
    check_ring_modulus(n, q)?;
    let mut rng = rng_from_seed(derive_seed(kind::FACTOR_SPLIT, &[n as u64, q]));
    let f = PolyModQ::xn_plus_one(n, q);
    let mut out = Vec::new();
    for (h, d) in distinct_degree_factorization(&f)? {
        out.extend(equal_degree_factorization(&h, d, &mut rng)?);
    }
    out.sort();
    Ok(out)
}

pub fn product(q: u64, factors: &[PolyModQ]) -> PolyModQ {
    factors.iter().fold(PolyModQ::one(q), |acc, f| acc.mul(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_q5_linear_factors() {
        let f = factor_xn_plus_1(2, 5).unwrap();
        assert_eq!(
            f,
            vec![PolyModQ::new(5, vec![2, 1]), PolyModQ::new(5, vec![3, 1])]
        );
        let shape = predict_factor_shape(2, 5).unwrap();
        assert_eq!(
            shape.groups,
            vec![FactorGroup {
                d: 4,
                degree: 1,
                count: 2
            }]
        );
    }

    #[test]
    fn n1_is_x_plus_1() {
        for q in [3, 5, 7, 101] {
            assert_eq!(
                factor_xn_plus_1(1, q).unwrap(),
                vec![PolyModQ::new(q, vec![1, 1])]
            );
        }
    }

    #[test]
    fn n8_q5_two_quartics() {
        let f = factor_xn_plus_1(8, 5).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f
            .iter()
            .all(|p| p.degree() == Some(4) && is_irreducible(p).unwrap()));
        assert_eq!(product(5, &f), PolyModQ::xn_plus_one(8, 5));
        assert_eq!(predict_factor_shape(8, 5).unwrap().degrees(), vec![4, 4]);
    }

    #[test]
    fn x8_plus_1_mod_101() {
        let f = factor_xn_plus_1(8, 101).unwrap();
        assert_eq!(
            f,
            vec![
                PolyModQ::new(101, vec![10, 0, 0, 0, 1]),
                PolyModQ::new(101, vec![91, 0, 0, 0, 1])
            ]
        );
    }

    #[test]
    fn rejects_bad_modulus() {
        assert_eq!(factor_xn_plus_1(4, 9), Err(Error::NotPrime(9)));
        assert!(matches!(
            predict_factor_shape(3, 3),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn squarefree_of_repeated_factor() {
        // (X+1)^2 (X+2) mod 3 and (X+1)^3 = X^3 + 1 mod 3.
        let a = PolyModQ::new(3, vec![1, 1]);
        let b = PolyModQ::new(3, vec![2, 1]);
        let f = a.mul(&a).mul(&b);
        assert_eq!(
            squarefree_decomposition(&f).unwrap(),
            vec![(b.clone(), 1), (a.clone(), 2)]
        );
        let cube = a.mul(&a).mul(&a);
        assert_eq!(
            squarefree_decomposition(&cube).unwrap(),
            vec![(a.clone(), 3)]
        );
        let mut rng = rng_from_seed(1);
        assert_eq!(factor_poly(&cube, &mut rng).unwrap(), vec![(a, 3)]);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&PolyModQ::new(3, vec![1, 0, 1])).unwrap());
        assert!(!is_irreducible(&PolyModQ::new(5, vec![1, 0, 1])).unwrap());
        assert!(!is_irreducible(&PolyModQ::new(5, vec![3])).unwrap());
    }

    #[test]
    fn division_identity() {
        let a = PolyModQ::new(7, vec![3, 1, 4, 1, 5]);
        let b = PolyModQ::new(7, vec![2, 6, 3]);
        let (quo, r) = a.div_rem(&b).unwrap();
        assert_eq!(quo.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn display() {
        assert_eq!(
            alloc::format!("{}", PolyModQ::new(5, vec![2, 0, 1])),
            "X^2 + 2"
        );
    }
}
