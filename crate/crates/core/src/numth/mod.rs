//! Number theory: totient, Carmichael function, multiplicative orders,
//! factorization of `X^n + 1` over `F_q`, probability evaluators and
//! parameter families.

mod arith;
mod bounds;
mod params;
mod poly;

pub use arith::{
    carmichael_lambda, divisors, euler_phi, factorize, inv_mod, is_prime, is_primitive_lambda_root,
    mul_mod, mult_order, next_prime, pow_mod,
};
pub use bounds::{
    ball_volume, epsilon_bound, gamma_of, integer_points_bound, inv_ball_root_bounds,
    ln_ball_volume, ln_factorial_bounds, ln_sis_prob_bound, q_for_gamma, r_guarantee,
    sis_existence_q, sis_high_probability_failure, sis_high_probability_q, sis_prob_bound,
    sis_tail_failure, sis_tail_q, smd, smd_from_gamma, RingProbReport, SubsetTerm,
    SUBSET_FACTOR_CAP,
};
pub use params::{
    power_of_two_thresholds, select_ring_parameters, two_primes_probability, validate_family,
    Check, Family, FamilyValidation, PowerOfTwoThresholds, RingParameters, TwoPrimesProbability,
    PRIME_SEARCH_WINDOW,
};
pub use poly::{
    distinct_degree_factorization, equal_degree_factorization, factor_poly, factor_xn_plus_1,
    is_irreducible, predict_factor_shape, product, squarefree_decomposition, FactorGroup,
    FactorShape, PolyModQ,
};
