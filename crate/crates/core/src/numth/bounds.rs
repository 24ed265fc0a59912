//! Closed-form probability and volume bounds, evaluated in log space.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use num_integer::Integer;

use super::poly::{factor_xn_plus_1, product, PolyModQ};
use crate::error::{Error, Result};

/// Subset enumeration refuses factorizations with more factors than this.
pub const SUBSET_FACTOR_CAP: usize = 20;

/// `ln` of the volume of the unit ball in `R^d`.
pub fn ln_ball_volume(d: u64) -> f64 {
    let h = d as f64 / 2.0;
    h * libm::log(PI) - libm::lgamma(h + 1.0)
}

pub fn ball_volume(d: u64) -> f64 {
    libm::exp(ln_ball_volume(d))
}

/// Robbins' bounds on `ln d!`: `(lower, upper)`.
pub fn ln_factorial_bounds(d: u64) -> (f64, f64) {
    let x = d as f64;
    let base = 0.5 * libm::log(2.0 * PI * x) + x * (libm::log(x) - 1.0);
    (base + 1.0 / (12.0 * x + 1.0), base + 1.0 / (12.0 * x))
}

/// Bounds on `(1/σ_{2d})^{1/(2d)}` around `sqrt(d/(πe))`: `(lower, upper)`.
pub fn inv_ball_root_bounds(d: u64) -> (f64, f64) {
    let x = d as f64;
    let lower = libm::pow(libm::sqrt(2.0 * PI * x), 1.0 / (2.0 * x)) * libm::sqrt(x / (PI * E));
    (lower, lower * libm::exp(1.0 / (12.0 * x * x)))
}

/// Upper bound `σ_d (r + sqrt(d)/2)^d` on the number of integer points in a
/// closed ball of radius `r` in `R^d`.
pub fn integer_points_bound(d: u64, r: f64) -> f64 {
    libm::exp(ln_ball_volume(d) + d as f64 * libm::log(r + libm::sqrt(d as f64) / 2.0))
}

/// `ln` of `σ_{2n} (r + sqrt(n/(2q)))^{2n}`.
pub fn ln_sis_prob_bound(n: u64, q: u64, r: f64) -> f64 {
    let rho = r + libm::sqrt(n as f64 / (2.0 * q as f64));
    ln_ball_volume(2 * n) + 2.0 * n as f64 * libm::log(rho)
}

/// Probability bound for `λ₁(L⊥(H)) < r sqrt(q)` over random symmetric `H`.
pub fn sis_prob_bound(n: u64, q: u64, r: f64) -> f64 {
    libm::exp(ln_sis_prob_bound(n, q, r))
}

/// Smallest `q` for which the existence statement applies at slack `eps`:
/// `2n σ_{2n}^{1/n} / eps^2`.
pub fn sis_existence_q(n: u64, eps: f64) -> f64 {
    2.0 * n as f64 * libm::exp(ln_ball_volume(2 * n) / n as f64) / (eps * eps)
}

/// `q ≥ πen²/2` gives failure probability at most `e²/sqrt(2πn)`.
pub fn sis_high_probability_q(n: u64) -> f64 {
    PI * E * (n * n) as f64 / 2.0
}

pub fn sis_high_probability_failure(n: u64) -> f64 {
    E * E / libm::sqrt(2.0 * PI * n as f64)
}

/// `q ≥ 2πe n^{3/2}` gives failure probability at most `e^{-n^{1/4}}`.
pub fn sis_tail_q(n: u64) -> f64 {
    2.0 * PI * E * libm::pow(n as f64, 1.5)
}

pub fn sis_tail_failure(n: u64) -> f64 {
    libm::exp(-libm::pow(n as f64, 0.25))
}

/// `smd(n,k,q,r,d) = (2πkd)^{-1/2} (πe/(nk))^{kd} (r + sqrt(nk/(2q)))^{2kd}`.
pub fn smd(n: u64, k: u64, q: u64, r: f64, d: u64) -> f64 {
    libm::exp(ln_smd(n, k, q, r, d))
}

fn ln_smd(n: u64, k: u64, q: u64, r: f64, d: u64) -> f64 {
    let (nk, kd) = ((n * k) as f64, (k * d) as f64);
    let rho = r + libm::sqrt(nk / (2.0 * q as f64));
    -0.5 * libm::log(2.0 * PI * kd) + kd * libm::log(PI * E / nk) + 2.0 * kd * libm::log(rho)
}

/// The same term written through `γ`: `e^{-γdk} / sqrt(2πdk)`.
pub fn smd_from_gamma(k: u64, d: u64, gamma: f64) -> f64 {
    let kd = (k * d) as f64;
    libm::exp(-gamma * kd) / libm::sqrt(2.0 * PI * kd)
}

/// `γ` with `r + sqrt(nk/(2q)) = e^{-γ/2} sqrt(nk/(πe))`.
pub fn gamma_of(n: u64, k: u64, q: u64, r: f64) -> f64 {
    let nk = (n * k) as f64;
    let rho = r + libm::sqrt(nk / (2.0 * q as f64));
    -2.0 * libm::log(rho / libm::sqrt(nk / (PI * E)))
}

/// Radius guaranteed by `γ`: `sqrt(nk/(πe))(1-γ)` for `γ ≥ 0`, otherwise
/// `sqrt(nk/(πe))`.
pub fn r_guarantee(n: u64, k: u64, gamma: f64) -> f64 {
    let base = libm::sqrt((n * k) as f64 / (PI * E));
    if gamma >= 0.0 {
        base * (1.0 - gamma)
    } else {
        base
    }
}

/// `2πe/γ²`.
pub fn q_for_gamma(gamma: f64) -> f64 {
    2.0 * PI * E / (gamma * gamma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsetTerm {
    /// Indices into [`RingProbReport::factors`].
    pub subset: Vec<usize>,
    pub d_t: u64,
    pub g_t: u64,
    /// `p_T = X^{2^e} + 1`, so the `n/g_T` multiplicity is not applied.
    pub dropped_multiplicity: bool,
    /// Term with the Stirling-bounded ball volume.
    pub term: f64,
    /// Term with the exact ball volume `σ_{2kd_T}(d_T/n)^{kd_T}`.
    pub term_exact: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingProbReport {
    pub n: u64,
    pub k: u64,
    pub q: u64,
    pub r: f64,
    pub gamma: f64,
    pub r_guarantee: f64,
    pub factors: Vec<PolyModQ>,
    /// Sum of [`SubsetTerm::term`].
    pub epsilon: f64,
    /// Sum of [`SubsetTerm::term_exact`].
    pub epsilon_exact: f64,
    pub terms: Vec<SubsetTerm>,
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + libm::log(xs.iter().map(|x| libm::exp(x - m)).sum::<f64>())
}

/// Union bound on `Pr[λ₁(L⊥(H)) < r sqrt(q)]` for random symmetric
/// `H ∈ R_q^{k×k}`, summed over all nonempty sets of irreducible factors of
/// `X^n + 1` mod `q`.
pub fn epsilon_bound(n: u64, k: u64, q: u64, r: f64) -> Result<RingProbReport> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("n and k must be at least 1".into()));
    }
    if !(r > 0.0) || r * libm::sqrt(q as f64) >= q as f64 / 2.0 {
        return Err(Error::Precondition("need 0 < r and r*sqrt(q) < q/2".into()));
    }
    let factors = factor_xn_plus_1(n as usize, q)?;
    if factors.len() > SUBSET_FACTOR_CAP {
        return Err(Error::TooManyFactors {
            count: factors.len(),
            cap: SUBSET_FACTOR_CAP,
        });
    }
    let degs: Vec<u64> = factors
        .iter()
        .map(|f| f.degree().unwrap_or(0) as u64)
        .collect();
    let nk = (n * k) as f64;
    let rho = r + libm::sqrt(nk / (2.0 * q as f64));
    let mut terms = Vec::with_capacity((1usize << factors.len()) - 1);
    let (mut ln_terms, mut ln_exact) = (Vec::new(), Vec::new());
    for mask in 1usize..(1 << factors.len()) {
        let subset: Vec<usize> = (0..factors.len()).filter(|i| mask >> i & 1 == 1).collect();
        let d_t: u64 = subset.iter().map(|&i| degs[i]).sum();
        let g_t = n.gcd(&d_t);
        let dropped = d_t.is_power_of_two() && {
            let picked: Vec<PolyModQ> = subset.iter().map(|&i| factors[i].clone()).collect();
            product(q, &picked) == PolyModQ::xn_plus_one(d_t as usize, q)
        };
        let ln_mult = if dropped {
            0.0
        } else {
            libm::log((n / g_t) as f64)
        };
        let kd = (k * d_t) as f64;
        let ln_rho_part = 2.0 * kd * libm::log(rho);
        let ln_term =
            ln_mult - 0.5 * libm::log(2.0 * PI * kd) + kd * libm::log(PI * E / nk) + ln_rho_part;
        let ln_term_exact = ln_mult
            + ln_ball_volume(2 * k * d_t)
            + kd * libm::log(d_t as f64 / n as f64)
            + ln_rho_part;
        ln_terms.push(ln_term);
        ln_exact.push(ln_term_exact);
        terms.push(SubsetTerm {
            subset,
            d_t,
            g_t,
            dropped_multiplicity: dropped,
            term: libm::exp(ln_term),
            term_exact: libm::exp(ln_term_exact),
        });
    }
    let gamma = gamma_of(n, k, q, r);
    Ok(RingProbReport {
        n,
        k,
        q,
        r,
        gamma,
        r_guarantee: r_guarantee(n, k, gamma),
        factors,
        epsilon: libm::exp(log_sum_exp(&ln_terms)),
        epsilon_exact: libm::exp(log_sum_exp(&ln_exact)),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn ball_volumes() {
        assert!(close(ball_volume(2), PI, 1e-14));
        assert!(close(ball_volume(3), 4.0 * PI / 3.0, 1e-14));
        assert!(close(ball_volume(14), libm::pow(PI, 7.0) / 5040.0, 1e-13));
    }

    #[test]
    fn robbins_brackets_factorial() {
        let mut ln_fact = 0.0;
        for d in 1..60u64 {
            ln_fact += libm::log(d as f64);
            let (lo, hi) = ln_factorial_bounds(d);
            assert!(lo <= ln_fact + 1e-12 && ln_fact <= hi + 1e-12, "d={d}");
            let (a, b) = inv_ball_root_bounds(d);
            let v = libm::exp(-ln_ball_volume(2 * d) / (2.0 * d as f64));
            assert!(a <= v * (1.0 + 1e-12) && v <= b * (1.0 + 1e-12), "d={d}");
        }
    }

    #[test]
    fn high_probability_regime_of_sis_bound() {
        // r = sqrt(n/(πe)) at q = ceil(πen²/2) stays below e²/sqrt(2πn).
        for n in [2u64, 7, 20, 100] {
            let q = libm::ceil(sis_high_probability_q(n)) as u64;
            let r = libm::sqrt(n as f64 / (PI * E));
            assert!(
                sis_prob_bound(n, q, r) <= sis_high_probability_failure(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn single_factor_ring_matches_sis_bound() {
        for (k, q, r) in [(1u64, 101u64, 0.3), (2, 211, 0.5), (3, 401, 0.6)] {
            let rep = epsilon_bound(1, k, q, r).unwrap();
            assert_eq!(rep.terms.len(), 1);
            assert!(close(rep.epsilon_exact, sis_prob_bound(k, q, r), 1e-12));
            assert!(rep.terms[0].dropped_multiplicity);
        }
    }

    #[test]
    fn power_of_two_three_terms() {
        let gamma = 2.0 / libm::pow(8.0, 0.75);
        let q = 101;
        let r = libm::sqrt(8.0 / (PI * E)) * libm::exp(-gamma / 2.0)
            - libm::sqrt(8.0 / (2.0 * q as f64));
        let rep = epsilon_bound(8, 1, q, r).unwrap();
        let degs: Vec<u64> = rep.terms.iter().map(|t| t.d_t).collect();
        assert_eq!(degs, alloc::vec![4, 4, 8]);
        assert!(close(rep.gamma, gamma, 1e-12));
        let expected = 2.0 * smd_from_gamma(1, 4, gamma) * 2.0 + smd_from_gamma(1, 8, gamma);
        assert!(close(rep.epsilon, expected, 1e-12));
        assert!(rep.epsilon <= libm::exp(-libm::pow(8.0, 0.25)));
        let sum: f64 = rep.terms.iter().map(|t| t.term).sum();
        assert!(close(rep.epsilon, sum, 1e-12));
    }

    #[test]
    fn precondition_checked() {
        assert!(matches!(
            epsilon_bound(2, 1, 5, 2.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gamma_round_trip() {
        let (n, k) = (4u64, 2u64);
        let q = 701;
        for gamma in [-0.5, 0.0, 0.1, 0.4] {
            let r = libm::sqrt((n * k) as f64 / (PI * E)) * libm::exp(-gamma / 2.0)
                - libm::sqrt((n * k) as f64 / (2.0 * q as f64));
            assert!((gamma_of(n, k, q, r) - gamma).abs() < 1e-9);
            assert!(close(smd(n, k, q, r, 3), smd_from_gamma(k, 3, gamma), 1e-9));
        }
    }
}
