//! Exact SVP/CVP by Schnorr–Euchner enumeration, and Babai's nearest plane.
//!
//! The basis is LLL-reduced once and kept as machine integers. The search
//! tree is walked with floating point Gram–Schmidt data and a small relative
//! slack on the radius, so no candidate at the optimal norm can be pruned;
//! every leaf is then re-evaluated in exact integer arithmetic. Ties are
//! broken by the lexicographic order of coordinates in the *input* basis.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::lattice::{rational_to_f64, ScaledLattice};
use super::lll::lll_reduce_with_transform;
use crate::error::{Error, Result};

/// Largest rank accepted by the enumeration routines.
pub const ENUMERATION_CAP: usize = 32;

const SVP_SLACK: f64 = 1e-7;
const CVP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestVector {
    /// Coordinates with respect to the input basis.
    pub coords: Vec<i64>,
    pub norm_sq: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosestVector {
    pub coords: Vec<i64>,
    pub dist_sq: f64,
}

/// A lattice prepared for repeated SVP/CVP/Babai queries.
#[derive(Clone, Debug)]
pub struct PreparedLattice {
    rank: usize,
    dim: usize,
    scale_sq: BigRational,
    scale: f64,
    reduced: Vec<Vec<i64>>,
    transform: Vec<Vec<i64>>,
    mu: Vec<Vec<f64>>,
    bstar_sq: Vec<f64>,
    bstar: Vec<Vec<f64>>,
}

fn to_i64_rows(rows: impl Iterator<Item = Vec<BigInt>>) -> Result<Vec<Vec<i64>>> {
    rows.map(|r| {
        r.iter()
            .map(|x| x.to_i64().ok_or(Error::Overflow("basis entry exceeds i64")))
            .collect()
    })
    .collect()
}

impl PreparedLattice {
    pub fn new(l: &ScaledLattice) -> Result<Self> {
        let delta = BigRational::new(99.into(), 100.into());
        let out = lll_reduce_with_transform(l.basis(), &delta)?;
        let rank = out.reduced.rank();
        let dim = out.reduced.ambient_dim();
        let rows = out.reduced.to_rational();
        let mut stars: Vec<Vec<BigRational>> = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut s = rows[i].clone();
            for (j, sj) in stars.iter().enumerate() {
                let m = &out.gso.mu[i][j];
                for (x, y) in s.iter_mut().zip(sj) {
                    *x = &*x - m * y;
                }
            }
            stars.push(s);
        }
        Ok(Self {
            rank,
            dim,
            scale_sq: l.scale_sq().clone(),
            scale: l.scale_f64(),
            reduced: to_i64_rows(out.reduced.to_rows().into_iter())?,
            transform: to_i64_rows(out.transform.to_rows().into_iter())?,
            mu: out
                .gso
                .mu
                .iter()
                .map(|r| r.iter().map(rational_to_f64).collect())
                .collect(),
            bstar_sq: out
                .gso
                .b_star_norms_sq
                .iter()
                .map(rational_to_f64)
                .collect(),
            bstar: stars
                .iter()
                .map(|r| r.iter().map(rational_to_f64).collect())
                .collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn check_cap(&self) -> Result<()> {
        if self.rank > ENUMERATION_CAP {
            return Err(Error::Capacity {
                dim: self.rank,
                cap: ENUMERATION_CAP,
            });
        }
        Ok(())
    }

    fn check_target(&self, target: &[f64]) -> Result<()> {
        if target.len() != self.dim {
            return Err(Error::Dimension(alloc::format!(
                "target has length {}, lattice lives in dimension {}",
                target.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Integer lattice vector with reduced-basis coordinates `x`.
    fn vector(&self, x: &[i64]) -> Vec<i128> {
        let mut v = vec![0i128; self.dim];
        for (xi, row) in x.iter().zip(&self.reduced) {
            if *xi != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a += *xi as i128 * *b as i128;
                }
            }
        }
        v
    }

    /// Input-basis coordinates of the reduced-basis coordinates `x`.
    fn input_coords(&self, x: &[i64]) -> Vec<i64> {
        let mut c = vec![0i128; self.rank];
        for (xi, row) in x.iter().zip(&self.transform) {
            if *xi != 0 {
                for (a, b) in c.iter_mut().zip(row) {
                    *a += *xi as i128 * *b as i128;
                }
            }
        }
        c.into_iter().map(|v| v as i64).collect()
    }

    /// Projections of an unscaled target onto the Gram–Schmidt directions.
    fn gso_coords(&self, t: &[f64]) -> Vec<f64> {
        self.bstar
            .iter()
            .zip(&self.bstar_sq)
            .map(|(b, n)| b.iter().zip(t).map(|(x, y)| x * y).sum::<f64>() / n)
            .collect()
    }

    fn center(&self, y: &[f64], x: &[i64], i: usize) -> f64 {
        let mut c = y[i];
        for j in i + 1..self.rank {
            c -= x[j] as f64 * self.mu[j][i];
        }
        c
    }

    /// Exact shortest nonzero vector.
    pub fn shortest_vector(&self) -> Result<ShortestVector> {
        self.check_cap()?;
        let n = self.rank;
        // Start from the shortest reduced basis row.
        let mut best: Option<(i128, Vec<i64>)> = None;
        for i in 0..n {
            let mut x = vec![0i64; n];
            x[i] = 1;
            self.offer_svp(&x, &mut best);
        }
        let mut search = Svp {
            lat: self,
            y: vec![0.0; n],
            x: vec![0; n],
            best,
        };
        search.descend(n, 0.0, true);
        let (norm, coords) = search.best.expect("nonempty basis");
        Ok(ShortestVector {
            coords,
            norm_sq: &self.scale_sq * BigRational::from_integer(BigInt::from(norm)),
        })
    }

    fn offer_svp(&self, x: &[i64], best: &mut Option<(i128, Vec<i64>)>) {
        let v = self.vector(x);
        let norm: i128 = v.iter().map(|a| a * a).sum();
        if norm == 0 {
            return;
        }
        let c = self.input_coords(x);
        let neg: Vec<i64> = c.iter().map(|a| -a).collect();
        let c = if neg < c { neg } else { c };
        let better = match best {
            None => true,
            Some((bn, bc)) => match norm.cmp(bn) {
                Ordering::Less => true,
                Ordering::Equal => c < *bc,
                Ordering::Greater => false,
            },
        };
        if better {
            *best = Some((norm, c));
        }
    }

    /// Babai nearest-plane coordinates (input basis) for a target in the
    /// scaled ambient space.
    pub fn babai(&self, target: &[f64]) -> Result<Vec<i64>> {
        self.check_target(target)?;
        let t: Vec<f64> = target.iter().map(|v| v / self.scale).collect();
        let y = self.gso_coords(&t);
        let mut x = vec![0i64; self.rank];
        for i in (0..self.rank).rev() {
            x[i] = round_half_away(self.center(&y, &x, i));
        }
        Ok(self.input_coords(&x))
    }

    /// Exact closest vector to `target` (scaled ambient space).
    pub fn closest_vector(&self, target: &[f64]) -> Result<ClosestVector> {
        self.check_cap()?;
        self.check_target(target)?;
        let t: Vec<f64> = target.iter().map(|v| v / self.scale).collect();
        let y = self.gso_coords(&t);
        let n = self.rank;
        let mut x = vec![0i64; n];
        for i in (0..n).rev() {
            x[i] = round_half_away(self.center(&y, &x, i));
        }
        let d = self.dist_sq(&t, &x);
        let mut search = Cvp {
            lat: self,
            t: &t,
            y,
            x: vec![0; n],
            best_dist: d,
            best_coords: self.input_coords(&x),
        };
        search.descend(n, 0.0);
        Ok(ClosestVector {
            coords: search.best_coords,
            dist_sq: search.best_dist * self.scale * self.scale,
        })
    }

    fn dist_sq(&self, t: &[f64], x: &[i64]) -> f64 {
        self.vector(x)
            .iter()
            .zip(t)
            .map(|(v, ti)| {
                let d = ti - *v as f64;
                d * d
            })
            .sum()
    }

    pub fn scale_sq(&self) -> &BigRational {
        &self.scale_sq
    }
}

/// Rounds to the nearest integer with ties away from zero.
pub fn round_half_away(v: f64) -> i64 {
    libm::round(v) as i64
}

/// Candidate offsets from the rounded center, nearest first.
fn zigzag(c: f64, d: i64) -> [i64; 2] {
    let a = libm::round(c) as i64;
    if c >= a as f64 {
        [a + d, a - d]
    } else {
        [a - d, a + d]
    }
}

struct Svp<'a> {
    lat: &'a PreparedLattice,
    y: Vec<f64>,
    x: Vec<i64>,
    best: Option<(i128, Vec<i64>)>,
}

impl Svp<'_> {
    fn bound(&self) -> f64 {
        let b = self.best.as_ref().map_or(f64::INFINITY, |(n, _)| *n as f64);
        b * (1.0 + SVP_SLACK) + 1e-9
    }

    /// `level` is the number of coordinates not yet fixed.
    fn descend(&mut self, level: usize, partial: f64, all_zero_above: bool) {
        if level == 0 {
            if !all_zero_above {
                let x = self.x.clone();
                self.lat.offer_svp(&x, &mut self.best);
            }
            return;
        }
        let i = level - 1;
        let c = self.lat.center(&self.y, &self.x, i);
        let bsq = self.lat.bstar_sq[i];
        let try_value = |s: &mut Self, xi: i64| -> bool {
            let d = xi as f64 - c;
            let p = partial + d * d * bsq;
            if p > s.bound() {
                return false;
            }
            s.x[i] = xi;
            s.descend(level - 1, p, all_zero_above && xi == 0);
            s.x[i] = 0;
            true
        };
        if all_zero_above {
            // Only one of v, -v is needed: the top nonzero coordinate is positive.
            let rad = libm::sqrt(((self.bound() - partial) / bsq).max(0.0));
            let lo = libm::ceil(c - rad).max(0.0) as i64;
            let mut xi = lo;
            while try_value(self, xi) || (xi as f64) < c {
                xi += 1;
            }
            return;
        }
        let a = libm::round(c) as i64;
        if !try_value(self, a) {
            return;
        }
        for d in 1.. {
            let [u, v] = zigzag(c, d);
            let ok_u = try_value(self, u);
            let ok_v = try_value(self, v);
            if !ok_u && !ok_v {
                break;
            }
        }
    }
}

struct Cvp<'a> {
    lat: &'a PreparedLattice,
    t: &'a [f64],
    y: Vec<f64>,
    x: Vec<i64>,
    best_dist: f64,
    best_coords: Vec<i64>,
}

impl Cvp<'_> {
    fn bound(&self) -> f64 {
        self.best_dist * (1.0 + CVP_TOL) + 1e-12
    }

    fn descend(&mut self, level: usize, partial: f64) {
        if level == 0 {
            let d = self.lat.dist_sq(self.t, &self.x);
            let tol = CVP_TOL * self.best_dist.max(1e-300);
            if d < self.best_dist - tol {
                self.best_dist = d;
                self.best_coords = self.lat.input_coords(&self.x);
            } else if d <= self.best_dist + tol {
                let c = self.lat.input_coords(&self.x);
                if c < self.best_coords {
                    self.best_dist = self.best_dist.min(d);
                    self.best_coords = c;
                }
            }
            return;
        }
        let i = level - 1;
        let c = self.lat.center(&self.y, &self.x, i);
        let bsq = self.lat.bstar_sq[i];
        let a = libm::round(c) as i64;
        let try_value = |s: &mut Self, xi: i64| -> bool {
            let d = xi as f64 - c;
            let p = partial + d * d * bsq;
            if p > s.bound() {
                return false;
            }
            s.x[i] = xi;
            s.descend(level - 1, p);
            s.x[i] = 0;
            true
        };
        if !try_value(self, a) {
            return;
        }
        for d in 1.. {
            let [u, v] = zigzag(c, d);
            let ok_u = try_value(self, u);
            let ok_v = try_value(self, v);
            if !ok_u && !ok_v {
                break;
            }
        }
    }
}

/// Exact λ₁(L)² together with a shortest vector's input coordinates.
pub fn shortest_vector(l: &ScaledLattice) -> Result<ShortestVector> {
    if l.rank() > ENUMERATION_CAP {
        return Err(Error::Capacity {
            dim: l.rank(),
            cap: ENUMERATION_CAP,
        });
    }
    PreparedLattice::new(l)?.shortest_vector()
}

pub fn closest_vector(l: &ScaledLattice, target: &[f64]) -> Result<ClosestVector> {
    if l.rank() > ENUMERATION_CAP {
        return Err(Error::Capacity {
            dim: l.rank(),
            cap: ENUMERATION_CAP,
        });
    }
    PreparedLattice::new(l)?.closest_vector(target)
}

pub fn babai_nearest_plane(l: &ScaledLattice, target: &[f64]) -> Result<Vec<i64>> {
    PreparedLattice::new(l)?.babai(target)
}

/// Squared distance between `target` and the lattice vector with input
/// coordinates `coords`.
pub fn distance_sq(l: &ScaledLattice, coords: &[i64], target: &[f64]) -> Result<f64> {
    let v = l.embed(coords)?;
    if v.len() != target.len() {
        return Err(Error::Dimension("target length mismatch".into()));
    }
    Ok(v.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::IntBasis;

    fn lat(rows: &[&[i64]], num: i64, den: i64) -> ScaledLattice {
        ScaledLattice::with_scale(IntBasis::from_i64_rows(rows).unwrap(), num, den).unwrap()
    }

    #[test]
    fn integer_lattice_svp() {
        let sv = shortest_vector(&lat(&[&[1, 0], &[0, 1]], 1, 1)).unwrap();
        assert_eq!(sv.norm_sq, BigRational::from_integer(1.into()));
    }

    #[test]
    fn sis_lattice_n1_q3() {
        let l = lat(&[&[1, 1], &[0, 3]], 1, 1);
        let sv = shortest_vector(&l).unwrap();
        assert_eq!(sv.norm_sq, BigRational::from_integer(2.into()));
        let v = l.vector(&sv.coords).unwrap();
        assert_eq!(v.iter().map(|x| x * x).sum::<BigInt>(), BigInt::from(2));
        let scaled = shortest_vector(&lat(&[&[1, 1], &[0, 3]], 1, 3)).unwrap();
        assert_eq!(scaled.norm_sq, BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn svp_tie_break_is_canonical() {
        // Z^2 has four unit vectors; the lexicographically smallest sign
        // representative of the lexicographically smallest pair wins.
        let sv = shortest_vector(&lat(&[&[1, 0], &[0, 1]], 1, 1)).unwrap();
        assert_eq!(sv.coords, vec![-1, 0]);
    }

    #[test]
    fn cvp_on_integer_lattice() {
        let l = lat(&[&[1, 0], &[0, 1]], 1, 1);
        let cv = closest_vector(&l, &[0.4, -0.3]).unwrap();
        assert_eq!(cv.coords, vec![0, 0]);
        assert!((cv.dist_sq - 0.25).abs() < 1e-12);
        let cv = closest_vector(&l, &[3.0, -2.0]).unwrap();
        assert_eq!(cv.coords, vec![3, -2]);
        assert_eq!(cv.dist_sq, 0.0);
    }

    #[test]
    fn babai_on_identity_rounds() {
        let l = lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 1, 1);
        assert_eq!(
            babai_nearest_plane(&l, &[1.4, -2.6, 0.2]).unwrap(),
            vec![1, -3, 0]
        );
    }

    #[test]
    fn cap_enforced() {
        let l = ScaledLattice::unscaled(IntBasis::identity(33));
        assert!(matches!(
            shortest_vector(&l),
            Err(Error::Capacity { dim: 33, cap: 32 })
        ));
        assert!(babai_nearest_plane(&l, &[0.0; 33]).is_ok());
    }

    #[test]
    fn skewed_basis_cvp() {
        let l = lat(&[&[1, 3, 7], &[0, 11, 2], &[5, 5, 13]], 1, 1);
        let p = PreparedLattice::new(&l).unwrap();
        let target = [4.3, 10.1, -7.7];
        let cv = p.closest_vector(&target).unwrap();
        let babai = p.babai(&target).unwrap();
        let db = distance_sq(&l, &babai, &target).unwrap();
        assert!(cv.dist_sq <= db * (1.0 + 1e-12));
        // Brute force over a generous box.
        let mut best = f64::INFINITY;
        for a in -20..=20 {
            for b in -20..=20 {
                for c in -20..=20 {
                    best = best.min(distance_sq(&l, &[a, b, c], &target).unwrap());
                }
            }
        }
        assert!((best - cv.dist_sq).abs() < 1e-9);
    }
}
