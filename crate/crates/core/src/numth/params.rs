//! Parameter families for the ring constructions and their validators.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use num_integer::Integer;

use super::arith::{factorize, is_prime, is_primitive_lambda_root};
use super::bounds::{epsilon_bound, q_for_gamma, r_guarantee, smd, SUBSET_FACTOR_CAP};
use super::poly::predict_factor_shape;
use crate::error::{Error, Result};

/// How far past the first candidate the prime search may scan.
pub const PRIME_SEARCH_WINDOW: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `n = 2^e`, `q ≡ 5 (mod 8)` or `q ≡ 3 (mod 16)`.
    PowerOfTwo,
    /// `n = 2^e p1 p2`, `e ∈ {0, 1}`, `gcd(p1 - 1, p2 - 1) = 2`, `q` a
    /// primitive λ-root modulo `2n`.
    TwoPrimes,
    /// `n = 2^e p`, `e ≥ 2`, `q` a primitive λ-root modulo `2n`.
    PowerOfTwoTimesPrime,
}

impl Family {
    pub const ALL: [Family; 3] = [
        Family::PowerOfTwo,
        Family::TwoPrimes,
        Family::PowerOfTwoTimesPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PowerOfTwo => "power-of-two",
            Family::TwoPrimes => "two-primes",
            Family::PowerOfTwoTimesPrime => "power-of-two-times-prime",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    /// The first family whose shape condition on `n` holds.
    pub fn detect(n: u64) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.shape_check(n).is_ok())
    }

    fn shape_check(self, n: u64) -> core::result::Result<String, String> {
        if n == 0 {
            return Err("n must be positive".into());
        }
        let e = n.trailing_zeros();
        let odd: Vec<(u64, u32)> = factorize(n >> e);
        match self {
            Family::PowerOfTwo => {
                if n.is_power_of_two() {
                    Ok(format!("n = 2^{e}"))
                } else {
                    Err(format!("n = {n} is not a power of two"))
                }
            }
            Family::TwoPrimes => {
                if e > 1 {
                    return Err(format!("n = {n} has 2-adic valuation {e} > 1"));
                }
                match odd.as_slice() {
                    [(p2, 1), (p1, 1)] => {
                        let g = (p1 - 1).gcd(&(p2 - 1));
                        if g == 2 {
                            Ok(format!(
                                "n = 2^{e}·{p1}·{p2}, gcd({}, {}) = 2",
                                p1 - 1,
                                p2 - 1
                            ))
                        } else {
                            Err(format!("gcd({}, {}) = {g} != 2", p1 - 1, p2 - 1))
                        }
                    }
                    _ => Err(format!(
                        "odd part of n = {n} is not a product of two distinct primes"
                    )),
                }
            }
            Family::PowerOfTwoTimesPrime => {
                if e < 2 {
                    return Err(format!("n = {n} has 2-adic valuation {e} < 2"));
                }
                match odd.as_slice() {
                    [(p, 1)] => Ok(format!("n = 2^{e}·{p}")),
                    _ => Err(format!("odd part of n = {n} is not a prime")),
                }
            }
        }
    }

    /// Whether `q` satisfies the family's congruence condition for `n`.
    pub fn admits_modulus(self, n: u64, q: u64) -> bool {
        if !is_prime(q) || q.gcd(&(2 * n)) != 1 {
            return false;
        }
        match self {
            Family::PowerOfTwo => q % 8 == 5 || q % 16 == 3,
            Family::TwoPrimes | Family::PowerOfTwoTimesPrime => {
                is_primitive_lambda_root(q % (2 * n), 2 * n).unwrap_or(false)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyValidation {
    pub family: Family,
    pub n: u64,
    pub q: u64,
    pub checks: Vec<Check>,
}

impl FamilyValidation {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Checks every hypothesis of `family` for `(n, q)`; never fails, the
/// outcome is in the returned checks.
pub fn validate_family(family: Family, n: u64, q: u64) -> FamilyValidation {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(Check {
            name: name.into(),
            ok,
            detail,
        })
    };
    let shape = family.shape_check(n);
    push("n_shape", shape.is_ok(), shape.unwrap_or_else(|e| e));
    push("q_prime", is_prime(q), format!("q = {q}"));
    push(
        "q_coprime_2n",
        q.gcd(&(2 * n.max(1))) == 1,
        format!("gcd({q}, {}) = {}", 2 * n, q.gcd(&(2 * n))),
    );
    match family {
        Family::PowerOfTwo => push(
            "q_congruence",
            q % 8 == 5 || q % 16 == 3,
            format!("q mod 8 = {}, q mod 16 = {}", q % 8, q % 16),
        ),
        _ => {
            let ok = n > 0
                && q.gcd(&(2 * n)) == 1
                && is_primitive_lambda_root(q % (2 * n), 2 * n).unwrap_or(false);
            push(
                "q_primitive_lambda_root",
                ok,
                format!("q = {q} modulo {}", 2 * n),
            );
        }
    }
    if n > 0 && is_prime(q) && q.gcd(&(2 * n)) == 1 {
        if let Ok(shape) = predict_factor_shape(n as usize, q) {
            let count = shape.factor_count();
            push(
                "factor_count",
                count <= SUBSET_FACTOR_CAP,
                format!("{count} irreducible factors, degrees {:?}", shape.degrees()),
            );
        }
    }
    FamilyValidation {
        family,
        n,
        q,
        checks,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingParameters {
    pub family: Family,
    pub n: u64,
    pub k: u64,
    pub gamma: f64,
    /// `2πe/γ²` before rounding to an admissible prime.
    pub q_real: f64,
    pub q_min: u64,
    pub r_guarantee: f64,
}

/// Smallest admissible prime `q ≥ 2πe/γ²` together with the radius that
/// `γ` guarantees.
pub fn select_ring_parameters(
    family: Family,
    n: u64,
    k: u64,
    gamma: f64,
) -> Result<RingParameters> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("n and k must be at least 1".into()));
    }
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter(
            "gamma must be finite and nonzero".into(),
        ));
    }
    if let Err(e) = family.shape_check(n) {
        return Err(Error::InvalidParameter(e));
    }
    let q_real = q_for_gamma(gamma);
    let start = libm::ceil(q_real).max(2.0) as u64;
    let end = start.saturating_add(PRIME_SEARCH_WINDOW);
    let q_min = (start..end)
        .find(|&q| family.admits_modulus(n, q))
        .ok_or(Error::SearchExhausted(end))?;
    Ok(RingParameters {
        family,
        n,
        k,
        gamma,
        q_real,
        q_min,
        r_guarantee: r_guarantee(n, k, gamma),
    })
}

/// Thresholds of the power-of-two family.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerOfTwoThresholds {
    pub gamma_high_probability: f64,
    pub q_high_probability: f64,
    pub failure_high_probability: f64,
    pub gamma_tail: f64,
    /// `πe(nk)^{3/2}/2`, which is `2πe/γ²` for the tail choice of `γ`.
    pub q_tail: f64,
    /// `2πe(nk)^{3/2}`, the larger threshold sometimes quoted for the same
    /// tail statement.
    pub q_tail_conservative: f64,
    pub failure_tail: f64,
}

pub fn power_of_two_thresholds(n: u64, k: u64) -> PowerOfTwoThresholds {
    let nk = (n * k) as f64;
    PowerOfTwoThresholds {
        gamma_high_probability: -2.0 / nk,
        q_high_probability: PI * E * nk * nk / 2.0,
        failure_high_probability: (E * E + 2.0 * libm::sqrt(2.0) * E) / libm::sqrt(2.0 * PI * nk),
        gamma_tail: 2.0 / libm::pow(nk, 0.75),
        q_tail: PI * E * libm::pow(nk, 1.5) / 2.0,
        q_tail_conservative: 2.0 * PI * E * libm::pow(nk, 1.5),
        failure_tail: libm::exp(-libm::pow(nk, 0.25)),
    }
}

/// Failure-probability summary for the two-primes family: the term of the
/// smallest factor `X^{2^e} + 1` plus the explicit tail bound
/// `511·n·smd(d_next)` over all other subsets, next to the full union bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPrimesProbability {
    pub dominant_degree: u64,
    pub dominant: f64,
    pub next_degree: u64,
    pub tail_bound: f64,
    pub epsilon: f64,
}

pub fn two_primes_probability(n: u64, k: u64, q: u64, r: f64) -> Result<TwoPrimesProbability> {
    let v = validate_family(Family::TwoPrimes, n, q);
    if !v.ok() {
        let failed: Vec<&str> = v
            .checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::InvalidParameter(format!(
            "two-primes hypotheses fail: {failed:?}"
        )));
    }
    let report = epsilon_bound(n, k, q, r)?;
    let dominant_degree = 1u64 << n.trailing_zeros();
    let is_dominant =
        |t: &super::bounds::SubsetTerm| t.d_t == dominant_degree && t.dropped_multiplicity;
    let dominant = report
        .terms
        .iter()
        .filter(|t| is_dominant(t))
        .map(|t| t.term)
        .sum();
    let next_degree = report
        .terms
        .iter()
        .filter(|t| !is_dominant(t))
        .map(|t| t.d_t)
        .min()
        .unwrap_or(n);
    let others = report.terms.iter().filter(|t| !is_dominant(t)).count() as f64;
    Ok(TwoPrimesProbability {
        dominant_degree,
        dominant,
        next_degree,
        tail_bound: others * n as f64 * smd(n, k, q, r, next_degree),
        epsilon: report.epsilon,
    })
}
