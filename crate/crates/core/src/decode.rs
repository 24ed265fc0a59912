//! Decoding Gaussian displacement errors.
//!
//! A trial samples `e ~ N(0, σ² I_{2nk})`, writes `√(λq)·e` in the basis
//! `M_H` as `t = w + f` with `w = ⌊t + ½⌋` and `f ∈ [-½, ½)^{2nk}`, and hands
//! the syndrome lift `f·M_H/√(λq)` (a representative of `e` modulo the
//! decoder lattice `D`) to a decoder. The decoder returns coordinates `u` of
//! a nearby point of `D`; the correction leaves the residual `(w + u)·D`,
//! which is a logical identity exactly when `w + u ≡ 0 (mod λ)`, i.e. when
//! it lies in `S = λD`.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::exactlat::{lattice_contains, round_half_away, PreparedLattice};
use crate::ringquot::{negacyclic_exact_schoolbook, ExactNegacyclic};
use crate::seed::{derive_seed, fill_gaussian, kind, rng_from_seed};
use crate::siscode::{Construction, GkpCode};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoder {
    Trivial,
    Babai,
}

impl Decoder {
    pub fn name(self) -> &'static str {
        match self {
            Decoder::Trivial => "trivial",
            Decoder::Babai => "babai",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "trivial" => Some(Decoder::Trivial),
            "babai" => Some(Decoder::Babai),
            _ => None,
        }
    }
}

/// How the integer product `c'·H_mat` is formed inside the trivial decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductPath {
    /// Dense matrix product with `H` or `ρ(H)`.
    Dense,
    /// Blockwise negacyclic products, schoolbook.
    Schoolbook,
    /// Blockwise negacyclic products through an exact NTT (power-of-two `n`).
    Ntt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeTrial {
    pub sigma: f64,
    pub error: Vec<f64>,
    pub syndrome_lift: Vec<f64>,
    /// `u`, the decoder output.
    pub decoder_coords: Vec<i64>,
    /// `w`, the integer part of the error's coordinates.
    pub coset_coords: Vec<i64>,
    /// `w + u`.
    pub residual_coords: Vec<i64>,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateCurvePoint {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub lambda: u64,
    pub decoder: Decoder,
    pub sigma: f64,
    pub trials: u64,
    pub failures: u64,
    pub p_err: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

/// 95% Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    let lo = if failures == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if failures == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

fn dense_product(c: &[i64], h: &[Vec<i64>]) -> Vec<i64> {
    let m = h.first().map_or(0, Vec::len);
    (0..m)
        .map(|j| {
            c.iter()
                .zip(h)
                .map(|(&ci, row)| ci as i128 * row[j] as i128)
                .sum::<i128>() as i64
        })
        .collect()
}

fn dense_product_f64(x: &[f64], h: &[Vec<i64>]) -> Vec<f64> {
    let m = h.first().map_or(0, Vec::len);
    (0..m)
        .map(|j| x.iter().zip(h).map(|(&xi, row)| xi * row[j] as f64).sum())
        .collect()
}

/// Rounding decoder in normalized form for `D = (1/√(λq)) L(M_H)`:
/// with `y = √(λq)·v`, `c' = ⌊y'⌉` and `c'' = ⌊(y'' - c'·H_mat)/q⌉`, ties
/// away from zero. `h_mat` is `H` (SIS) or `ρ(H)` (module).
///
/// If `v` is within `1/(2√(λq))` of `D`, the result is the coordinate vector
/// of the closest point.
pub fn bdd_trivial(h_mat: &[Vec<i64>], q: u64, lambda: u64, v: &[f64]) -> Vec<i64> {
    bdd_with(h_mat.len(), q, lambda, v, |c| dense_product(c, h_mat))
}

fn bdd_with(
    m: usize,
    q: u64,
    lambda: u64,
    v: &[f64],
    product: impl Fn(&[i64]) -> Vec<i64>,
) -> Vec<i64> {
    assert_eq!(v.len(), 2 * m, "target must have length 2m");
    let s = libm::sqrt((lambda * q) as f64);
    let y: Vec<f64> = v.iter().map(|x| s * x).collect();
    let c1: Vec<i64> = y[..m].iter().map(|&x| round_half_away(x)).collect();
    let p = product(&c1);
    let c2 = y[m..]
        .iter()
        .zip(&p)
        .map(|(&x, &pj)| round_half_away((x - pj as f64) / q as f64));
    c1.iter().copied().chain(c2).collect()
}

/// Per-code state shared across trials.
#[derive(Clone, Debug)]
pub struct DecodeContext {
    code: GkpCode,
    h: Vec<Vec<i64>>,
    ring_blocks: Option<Vec<Vec<i64>>>,
    exact: Option<ExactNegacyclic>,
    path: ProductPath,
    decoder_lattice: PreparedLattice,
}

impl DecodeContext {
    /// Uses the NTT path for module codes with power-of-two `n`, schoolbook
    /// for other module codes and the dense product for SIS codes.
    pub fn new(code: &GkpCode) -> Result<Self> {
        let path = match code.construction() {
            Construction::Sis(_) => ProductPath::Dense,
            Construction::Module(h) if h.n().is_power_of_two() => ProductPath::Ntt,
            Construction::Module(_) => ProductPath::Schoolbook,
        };
        Self::with_path(code, path)
    }

    pub fn with_path(code: &GkpCode, path: ProductPath) -> Result<Self> {
        let ring_blocks = match code.construction() {
            Construction::Module(h) => Some(
                h.entries()
                    .iter()
                    .map(|e| e.coeffs().iter().map(|&c| c as i64).collect())
                    .collect(),
            ),
            Construction::Sis(_) => None,
        };
        let exact = match path {
            ProductPath::Ntt => {
                if ring_blocks.is_none() {
                    return Err(Error::InvalidParameter(
                        "NTT products need a module code".into(),
                    ));
                }
                Some(ExactNegacyclic::new(code.n())?)
            }
            ProductPath::Schoolbook if ring_blocks.is_none() => {
                return Err(Error::InvalidParameter(
                    "ring products need a module code".into(),
                ));
            }
            _ => None,
        };
        Ok(Self {
            h: code.h_matrix_i64(),
            ring_blocks,
            exact,
            path,
            decoder_lattice: PreparedLattice::new(&code.decoder())?,
            code: code.clone(),
        })
    }

    pub fn code(&self) -> &GkpCode {
        &self.code
    }

    pub fn path(&self) -> ProductPath {
        self.path
    }

    /// Number of entries of `c'`, i.e. `nk`.
    fn m(&self) -> usize {
        self.h.len()
    }

    fn product(&self, c: &[i64]) -> Vec<i64> {
        let blocks = match (&self.path, &self.ring_blocks) {
            (ProductPath::Dense, _) | (_, None) => return dense_product(c, &self.h),
            (_, Some(b)) => b,
        };
        let (n, k) = (self.code.n(), self.code.k());
        let mut out = alloc::vec![0i64; n * k];
        for j in 0..k {
            for i in 0..k {
                let ci = &c[i * n..(i + 1) * n];
                let hij = &blocks[i * k + j];
                let p = match &self.exact {
                    Some(ex) => ex.multiply(ci, hij),
                    None => negacyclic_exact_schoolbook(ci, hij),
                };
                for (o, x) in out[j * n..(j + 1) * n].iter_mut().zip(p) {
                    *o += x;
                }
            }
        }
        out
    }

    /// [`bdd_trivial`] for this code, with the configured product path.
    pub fn bdd_trivial(&self, v: &[f64]) -> Vec<i64> {
        bdd_with(self.m(), self.code.q(), self.code.lambda(), v, |c| {
            self.product(c)
        })
    }

    /// Babai nearest plane on the decoder lattice.
    pub fn babai(&self, v: &[f64]) -> Result<Vec<i64>> {
        self.decoder_lattice.babai(v)
    }

    /// The decoder lattice, prepared for CVP queries.
    pub fn decoder_lattice(&self) -> &PreparedLattice {
        &self.decoder_lattice
    }

    /// Runs the pipeline on a given displacement.
    pub fn decode_error(
        &self,
        error: Vec<f64>,
        sigma: f64,
        decoder: Decoder,
    ) -> Result<DecodeTrial> {
        let m = self.m();
        if error.len() != 2 * m {
            return Err(Error::Dimension(alloc::format!(
                "expected an error of length {}, got {}",
                2 * m,
                error.len()
            )));
        }
        let q = self.code.q() as f64;
        let s = libm::sqrt((self.code.lambda() * self.code.q()) as f64);
        // t = s·e·M_H^{-1}, M_H^{-1} = [[I, -H/q], [0, I/q]]
        let e1h = dense_product_f64(&error[..m], &self.h);
        let t: Vec<f64> = error[..m]
            .iter()
            .map(|x| s * x)
            .chain(error[m..].iter().zip(&e1h).map(|(x, y)| s * (x - y) / q))
            .collect();
        let w: Vec<i64> = t.iter().map(|&x| libm::floor(x + 0.5) as i64).collect();
        let f: Vec<f64> = t.iter().zip(&w).map(|(x, &wi)| x - wi as f64).collect();
        let f1h = dense_product_f64(&f[..m], &self.h);
        let syndrome_lift: Vec<f64> = f[..m]
            .iter()
            .map(|x| x / s)
            .chain(f[m..].iter().zip(&f1h).map(|(x, y)| (y + q * x) / s))
            .collect();
        let u = match decoder {
            Decoder::Trivial => self.bdd_trivial(&syndrome_lift),
            Decoder::Babai => self.babai(&syndrome_lift)?,
        };
        let residual: Vec<i64> = w.iter().zip(&u).map(|(a, b)| a + b).collect();
        let lambda = self.code.lambda() as i64;
        let success = residual.iter().all(|r| r.rem_euclid(lambda) == 0);
        Ok(DecodeTrial {
            sigma,
            error,
            syndrome_lift,
            decoder_coords: u,
            coset_coords: w,
            residual_coords: residual,
            success,
        })
    }

    pub fn decode_trial<R: RngCore + ?Sized>(
        &self,
        sigma: f64,
        rng: &mut R,
        decoder: Decoder,
    ) -> Result<DecodeTrial> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter("sigma must be positive".into()));
        }
        let mut error = alloc::vec![0.0; 2 * self.m()];
        fill_gaussian(rng, sigma, &mut error);
        self.decode_error(error, sigma, decoder)
    }

    /// The trial driven by the sub-seed of trial `index`.
    pub fn seeded_trial(
        &self,
        sigma: f64,
        seed: u64,
        index: u64,
        decoder: Decoder,
    ) -> Result<DecodeTrial> {
        let mut rng = rng_from_seed(trial_seed(seed, index));
        self.decode_trial(sigma, &mut rng, decoder)
    }

    /// Success test by generic exact membership of the residual in `S`.
    pub fn residual_in_stabilizer(&self, residual: &[i64]) -> Result<bool> {
        lattice_contains(&self.code.stabilizer(), residual, &self.code.decoder())
    }

    pub fn error_rate(
        &self,
        sigma: f64,
        trials: u64,
        seed: u64,
        decoder: Decoder,
    ) -> Result<RateCurvePoint> {
        if trials == 0 {
            return Err(Error::InvalidParameter("need at least one trial".into()));
        }
        let mut failures = 0;
        for i in 0..trials {
            if !self.seeded_trial(sigma, seed, i, decoder)?.success {
                failures += 1;
            }
        }
        Ok(self.rate_point(sigma, trials, failures, seed, decoder))
    }

    /// Aggregates a failure count (possibly gathered in parallel).
    pub fn rate_point(
        &self,
        sigma: f64,
        trials: u64,
        failures: u64,
        seed: u64,
        decoder: Decoder,
    ) -> RateCurvePoint {
        let (ci_lo, ci_hi) = wilson_interval(failures, trials);
        RateCurvePoint {
            n: self.code.n(),
            k: self.code.k(),
            q: self.code.q(),
            lambda: self.code.lambda(),
            decoder,
            sigma,
            trials,
            failures,
            p_err: failures as f64 / trials as f64,
            ci_lo,
            ci_hi,
            seed,
        }
    }
}

/// Sub-seed of decoding trial `index` under `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    derive_seed(seed, &[kind::DECODE_TRIALS, index])
}

/// One trial on a fresh context.
pub fn decode_trial<R: RngCore + ?Sized>(
    code: &GkpCode,
    sigma: f64,
    rng: &mut R,
    decoder: Decoder,
) -> Result<DecodeTrial> {
    DecodeContext::new(code)?.decode_trial(sigma, rng, decoder)
}

pub fn error_rate(
    code: &GkpCode,
    sigma: f64,
    trials: u64,
    seed: u64,
    decoder: Decoder,
) -> Result<RateCurvePoint> {
    DecodeContext::new(code)?.error_rate(sigma, trials, seed, decoder)
}
