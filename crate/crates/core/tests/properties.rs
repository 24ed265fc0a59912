use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use sisgkp_core::decode::{bdd_trivial, DecodeContext, Decoder};
use sisgkp_core::exactlat::{
    closest_vector, distance_sq, is_q_symplectic, lattice_contains, lll_reduce_with_transform,
    same_lattice, shortest_vector, symplectic_dual_basis, GramSchmidtData, IntBasis, IntMatrix,
    PreparedLattice, ScaledLattice,
};
use sisgkp_core::numth::{
    carmichael_lambda, euler_phi, factor_xn_plus_1, is_irreducible, mult_order,
    predict_factor_shape, product, PolyModQ,
};
use sisgkp_core::ringquot::{
    bar_rho_matrix, module_basis, negacyclic_schoolbook, rho_matrix, ring_mul, NttPlan, RingElem,
    RingSymMat,
};
use sisgkp_core::seed::rng_from_seed;
use sisgkp_core::siscode::{build_basis, lattice_membership, minkowski_upper, GkpCode, SymMatModQ};

const SMALL_PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 257];

fn sym_mat() -> impl Strategy<Value = SymMatModQ> {
    (
        1usize..=4,
        prop::sample::select(SMALL_PRIMES.to_vec()),
        any::<u64>(),
    )
        .prop_map(|(n, q, seed)| SymMatModQ::sample(n, q, &mut rng_from_seed(seed)).unwrap())
}

fn full_rank_basis(max_dim: usize, bound: i64) -> impl Strategy<Value = IntBasis> {
    (1..=max_dim)
        .prop_flat_map(move |d| prop::collection::vec(prop::collection::vec(-bound..=bound, d), d))
        .prop_filter_map("singular", |rows| IntBasis::from_i64_rows(&rows).ok())
}

fn brute_force_min(b: &IntBasis, range: i64) -> BigInt {
    let d = b.rank();
    let mut best: Option<BigInt> = None;
    let mut c = vec![-range; d];
    loop {
        if c.iter().any(|&x| x != 0) {
            let v = b.left_mul_i64(&c).unwrap();
            let n: BigInt = v.iter().map(|x| x * x).sum();
            if best.as_ref().is_none_or(|bb| n < *bb) {
                best = Some(n);
            }
        }
        let mut i = 0;
        while i < d {
            c[i] += 1;
            if c[i] <= range {
                break;
            }
            c[i] = -range;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    best.unwrap()
}

/// Any vector no longer than the shortest basis row has coefficients
/// `|c_i| ≤ ‖b_min‖·‖B^{-1} e_i‖`.
fn coefficient_bound(b: &IntBasis) -> i64 {
    let r_sq = b
        .rows()
        .map(|r| r.iter().map(|x| x * x).sum::<BigInt>())
        .min()
        .unwrap();
    let (adj, den) = b.inverse().unwrap();
    let d = b.rank();
    (0..d)
        .map(|i| {
            let col_sq: BigInt = (0..d).map(|j| adj.get(j, i) * adj.get(j, i)).sum();
            let bound_sq = BigRational::new(&r_sq * col_sq, &den * &den);
            bound_sq.to_f64().unwrap().sqrt().floor() as i64 + 1
        })
        .max()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sis_basis_is_q_symplectic(h in sym_mat()) {
        let b = build_basis(&h);
        prop_assert!(is_q_symplectic(b.matrix(), h.q()).unwrap());
        prop_assert_eq!(b.det().unwrap(), BigInt::from(h.q()).pow(h.n() as u32));
    }

    #[test]
    fn basis_rows_are_members(h in sym_mat()) {
        let rows = build_basis(&h).to_i64_rows().unwrap();
        for r in rows {
            prop_assert!(lattice_membership(&h, &r).unwrap());
        }
    }

    #[test]
    fn membership_matches_exact_containment(h in sym_mat(), z in prop::collection::vec(-20i64..=20, 8)) {
        let n = h.n();
        let z = &z[..2 * n];
        let b = build_basis(&h);
        let lat = ScaledLattice::unscaled(b);
        let ambient = ScaledLattice::unscaled(IntBasis::identity(2 * n));
        prop_assert_eq!(
            lattice_membership(&h, z).unwrap(),
            lattice_contains(&lat, z, &ambient).unwrap()
        );
    }

    #[test]
    fn symplectic_lattice_is_self_dual(h in sym_mat()) {
        let q = h.q() as i64;
        let l = ScaledLattice::with_scale(build_basis(&h), 1, q).unwrap();
        let dual = symplectic_dual_basis(&l).unwrap();
        prop_assert!(same_lattice(&l, &dual).unwrap());
    }

    #[test]
    fn lll_output_is_reduced_and_equivalent(b in full_rank_basis(5, 30)) {
        let delta = BigRational::new(3.into(), 4.into());
        let out = lll_reduce_with_transform(&b, &delta).unwrap();
        let gso = GramSchmidtData::of(out.reduced.matrix()).unwrap();
        prop_assert!(gso.is_size_reduced());
        prop_assert!(gso.satisfies_lovasz(&delta));
        prop_assert_eq!(out.transform.det().unwrap().abs(), BigInt::one());
        prop_assert_eq!(&out.transform.mul(b.matrix()).unwrap(), out.reduced.matrix());
    }

    #[test]
    fn svp_matches_brute_force(b in full_rank_basis(3, 6)) {
        let sv = shortest_vector(&ScaledLattice::unscaled(b.clone())).unwrap();
        prop_assert!(sv.norm_sq.is_integer());
        let range = coefficient_bound(&b);
        prop_assume!(range <= 15);
        prop_assert_eq!(sv.norm_sq.to_integer(), brute_force_min(&b, range));
        let v = b.left_mul_i64(&sv.coords).unwrap();
        prop_assert!(!v.iter().all(Zero::is_zero));
    }

    #[test]
    fn cvp_never_loses_to_babai(b in full_rank_basis(4, 12), t in prop::collection::vec(-30.0f64..30.0, 4)) {
        let l = ScaledLattice::with_scale(b.clone(), 1, 3).unwrap();
        let t = &t[..b.rank()];
        let p = PreparedLattice::new(&l).unwrap();
        let cvp = p.closest_vector(t).unwrap();
        let babai = p.babai(t).unwrap();
        let db = distance_sq(&l, &babai, t).unwrap();
        let dc = distance_sq(&l, &cvp.coords, t).unwrap();
        prop_assert!(dc <= db + 1e-9);
        prop_assert!((dc - cvp.dist_sq).abs() <= 1e-9 * (1.0 + dc));
    }

    #[test]
    fn distance_respects_minkowski(h in sym_mat(), lambda in 2u64..=4) {
        let code = GkpCode::sis(h, lambda).unwrap();
        let d = code.code_distance().unwrap();
        prop_assert!(d.delta <= minkowski_upper(code.modes() as u64, lambda) + 1e-12);
        let back = sisgkp_core::siscode::delta_of(&d.delta_sq);
        prop_assert!((back - d.delta).abs() <= 1e-12 * d.delta);
    }

    #[test]
    fn bdd_is_translation_covariant(
        h in sym_mat(),
        coords in prop::collection::vec(-50i64..=50, 8),
        v in prop::collection::vec(-2.0f64..2.0, 8),
    ) {
        let n = h.n();
        let q = h.q();
        let code = GkpCode::sis(h, 2).unwrap();
        let hm = code.h_matrix_i64();
        let v = &v[..2 * n];
        let c = &coords[..2 * n];
        let d = code.decoder().embed(c).unwrap();
        let shifted: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + b).collect();
        let base = bdd_trivial(&hm, q, 2, v);
        let moved = bdd_trivial(&hm, q, 2, &shifted);
        // Float rounding may differ when a coordinate sits on a .5 boundary;
        // such inputs have probability zero under this strategy.
        let expected: Vec<i64> = base.iter().zip(c).map(|(a, b)| a + b).collect();
        prop_assert_eq!(moved, expected);
    }

    #[test]
    fn planted_bdd_matches_cvp(
        h in sym_mat(),
        coords in prop::collection::vec(-5i64..=5, 8),
        dir in prop::collection::vec(-1.0f64..1.0, 8),
        frac in 0.0f64..0.99,
    ) {
        let n = h.n();
        let q = h.q();
        let code = GkpCode::sis(h, 2).unwrap();
        let radius = 1.0 / (2.0 * ((2 * q) as f64).sqrt());
        let dir = &dir[..2 * n];
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        let c = &coords[..2 * n];
        let p = code.decoder().embed(c).unwrap();
        let v: Vec<f64> = p.iter().zip(dir).map(|(a, d)| a + d / norm * radius * frac).collect();
        let got = bdd_trivial(&code.h_matrix_i64(), q, 2, &v);
        prop_assert_eq!(&got, &c.to_vec());
        prop_assert_eq!(closest_vector(&code.decoder(), &v).unwrap().coords, got);
    }

    #[test]
    fn success_flag_matches_generic_membership(h in sym_mat(), lambda in 2u64..=3, seed in any::<u64>()) {
        let code = GkpCode::sis(h, lambda).unwrap();
        let ctx = DecodeContext::new(&code).unwrap();
        for (i, d) in [Decoder::Trivial, Decoder::Babai].into_iter().enumerate() {
            let t = ctx.seeded_trial(0.4, seed, i as u64, d).unwrap();
            prop_assert_eq!(t.success, ctx.residual_in_stabilizer(&t.residual_coords).unwrap());
            let sum: Vec<i64> = t.coset_coords.iter().zip(&t.decoder_coords).map(|(a, b)| a + b).collect();
            prop_assert_eq!(&sum, &t.residual_coords);
        }
    }

    #[test]
    fn ntt_matches_schoolbook(
        (n, q) in prop::sample::select(vec![(8usize, 17u64), (16, 97), (4, 17), (32, 193)]),
        seed in any::<u64>(),
    ) {
        let mut rng = rng_from_seed(seed);
        let a = RingElem::random(n, q, &mut rng);
        let b = RingElem::random(n, q, &mut rng);
        let plan = NttPlan::new(n, q).unwrap();
        prop_assert_eq!(plan.multiply(a.coeffs(), b.coeffs()), negacyclic_schoolbook(a.coeffs(), b.coeffs(), q));
        let mut t = a.coeffs().to_vec();
        plan.forward(&mut t);
        plan.inverse(&mut t);
        prop_assert_eq!(t.as_slice(), a.coeffs());
    }

    #[test]
    fn rho_is_multiplicative(n in 1usize..=6, seed in any::<u64>()) {
        let q = 11;
        let mut rng = rng_from_seed(seed);
        let a = RingElem::random(n, q, &mut rng);
        let b = RingElem::random(n, q, &mut rng);
        let ab = ring_mul(&a, &b).unwrap();
        let lhs = rho_matrix(&ab);
        let rhs = rho_matrix(&a).mul(&rho_matrix(&b)).unwrap();
        for i in 0..n {
            for j in 0..n {
                let diff: BigInt = lhs.get(i, j) - rhs.get(i, j);
                prop_assert!((diff % BigInt::from(q)).is_zero());
            }
        }
        let bar = bar_rho_matrix(&a);
        prop_assert_eq!(&bar, &bar.transpose());
    }

    #[test]
    fn module_bar_basis_is_q_symplectic(
        (n, k) in prop::sample::select(vec![(2usize, 1usize), (4, 1), (2, 2), (3, 1)]),
        q in prop::sample::select(vec![3u64, 5, 13]),
        seed in any::<u64>(),
    ) {
        let h = RingSymMat::sample(n, k, q, &mut rng_from_seed(seed)).unwrap();
        let (m, mb) = module_basis(&h).unwrap();
        prop_assert!(is_q_symplectic(mb.matrix(), q).unwrap());
        let a = shortest_vector(&ScaledLattice::unscaled(m)).unwrap();
        let b = shortest_vector(&ScaledLattice::unscaled(mb)).unwrap();
        prop_assert_eq!(a.norm_sq, b.norm_sq);
    }

    #[test]
    fn factorization_reconstructs(
        n in prop::sample::select(vec![1usize, 2, 3, 4, 6, 8, 10, 12, 16]),
        q in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 29, 97, 101]),
    ) {
        prop_assume!(!(2 * n as u64).is_multiple_of(q));
        let f = factor_xn_plus_1(n, q).unwrap();
        prop_assert_eq!(product(q, &f), PolyModQ::xn_plus_one(n, q));
        for g in &f {
            prop_assert!(is_irreducible(g).unwrap());
        }
        let mut got: Vec<u64> = f.iter().map(|g| g.degree().unwrap() as u64).collect();
        got.sort_unstable();
        let mut want = predict_factor_shape(n, q).unwrap().degrees();
        want.sort_unstable();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn order_divides_carmichael(m in 2u64..5000, a in 1u64..5000) {
        prop_assume!(num_integer::gcd(a, m) == 1);
        let lam = carmichael_lambda(m).unwrap();
        prop_assert_eq!(lam % mult_order(a, m).unwrap(), 0);
        prop_assert_eq!(euler_phi(m).unwrap() % lam, 0);
    }
}

#[test]
fn identity_lattice_has_unit_minimum() {
    let l = ScaledLattice::unscaled(IntBasis::new(IntMatrix::identity(5)).unwrap());
    assert_eq!(shortest_vector(&l).unwrap().norm_sq, BigRational::one());
}
