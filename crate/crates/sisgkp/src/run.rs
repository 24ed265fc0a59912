//! Experiment runners.
//!
//! Every randomized unit draws from its own sub-seed
//! `derive_seed(master, [kind, grid_point, sample])` (see
//! [`sisgkp_core::seed`]), so outputs do not depend on the number of worker
//! threads: rayon only changes who computes a unit, and results are
//! collected in index order.

use anyhow::anyhow;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use sisgkp_core::decode::{DecodeContext, Decoder, RateCurvePoint};
use sisgkp_core::exactlat::ENUMERATION_CAP;
use sisgkp_core::numth::{
    epsilon_bound, power_of_two_thresholds, two_primes_probability, validate_family, Family,
    FamilyValidation,
};
use sisgkp_core::ringquot::RingSymMat;
use sisgkp_core::seed::{derive_seed, kind, rng_from_seed};
use sisgkp_core::siscode::{bounds, lower_target, minkowski_upper, GkpCode, SymMatModQ};

use crate::error::CliError;
use crate::format::{rational, CodeDocument, CsvBuf, SIGMA_CONVENTION};
use crate::spec::{ConstructionKind, ExperimentKind, ExperimentSpec, GridPoint};

/// A finished experiment: optional CSV rows plus a JSON document (the
/// summary, or the whole result for JSON-only experiments).
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub csv: Option<String>,
    pub json: Value,
    /// Some records failed validation; the CLI exits with status 2.
    pub validation_failed: bool,
}

pub fn run(spec: &ExperimentSpec, pool: &rayon::ThreadPool) -> Result<Output, CliError> {
    spec.validate()?;
    match spec.kind {
        ExperimentKind::DistanceSurvey => run_distance_survey(spec, pool),
        ExperimentKind::RingDistanceSurvey => run_ring_distance_survey(spec, pool),
        ExperimentKind::DecodeCurve => run_decode_curve(spec, pool),
        ExperimentKind::BoundTable => Ok(run_bound_table(spec)),
        ExperimentKind::ParamCheck => Ok(run_param_check(spec)),
    }
}

pub fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(e.into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyRow {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub lambda: u64,
    pub sample: Option<u64>,
    pub status: String,
    pub delta_sq: Option<BigRational>,
    pub delta: Option<f64>,
    pub above_bound: Option<bool>,
    pub seed: Option<u64>,
}

pub const SURVEY_HEADER: [&str; 10] = [
    "n",
    "k",
    "q",
    "lambda",
    "sample",
    "status",
    "delta_sq",
    "delta",
    "above_bound",
    "seed",
];

pub const DECODE_HEADER: [&str; 12] = [
    "n", "k", "q", "lambda", "decoder", "sigma", "trials", "failures", "p_err", "ci_lo", "ci_hi",
    "seed",
];

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, T::to_string)
}

impl SurveyRow {
    fn skipped(p: &GridPoint, status: String) -> Self {
        Self {
            n: p.n,
            k: p.k,
            q: p.q,
            lambda: p.lambda,
            sample: None,
            status,
            delta_sq: None,
            delta: None,
            above_bound: None,
            seed: None,
        }
    }

    pub fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.q.to_string(),
            self.lambda.to_string(),
            opt(&self.sample),
            self.status.clone(),
            self.delta_sq.as_ref().map(rational).unwrap_or_default(),
            opt(&self.delta),
            opt(&self.above_bound),
            opt(&self.seed),
        ]
    }

    fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "q": self.q, "lambda": self.lambda,
            "sample": self.sample, "status": self.status,
            "delta_sq": self.delta_sq.as_ref().map(rational),
            "delta": self.delta, "above_bound": self.above_bound, "seed": self.seed,
        })
    }
}

/// Samples the code of one survey unit from its sub-seed. SIS codes when
/// `k = 1` and `module` is false, module codes otherwise.
pub fn sample_code(
    n: usize,
    k: usize,
    q: u64,
    lambda: u64,
    module: bool,
    seed: u64,
) -> sisgkp_core::Result<GkpCode> {
    let mut rng = rng_from_seed(seed);
    if module {
        GkpCode::module(RingSymMat::sample_any_modulus(n, k, q, &mut rng)?, lambda)
    } else {
        GkpCode::sis(SymMatModQ::sample_any_modulus(n, q, &mut rng)?, lambda)
    }
}

/// One survey row, regenerated from its sub-seed alone.
pub fn survey_unit(
    p: &GridPoint,
    sample: u64,
    seed: u64,
    module: bool,
) -> sisgkp_core::Result<(SurveyRow, GkpCode)> {
    let code = sample_code(p.n, p.k, p.q, p.lambda, module, seed)?;
    let d = code.code_distance()?;
    let target = lower_target(p.modes() as u64, p.lambda);
    Ok((
        SurveyRow {
            n: p.n,
            k: p.k,
            q: p.q,
            lambda: p.lambda,
            sample: Some(sample),
            status: "ok".into(),
            above_bound: Some(d.delta > target),
            delta: Some(d.delta),
            delta_sq: Some(d.delta_sq),
            seed: Some(seed),
        },
        code,
    ))
}

pub fn survey_seed(master: u64, module: bool, point: u64, sample: u64) -> u64 {
    let k = if module {
        kind::RING_DISTANCE_SURVEY
    } else {
        kind::DISTANCE_SURVEY
    };
    derive_seed(master, &[k, point, sample])
}

fn validation_json(v: &FamilyValidation) -> Value {
    json!({
        "family": v.family.name(),
        "n": v.n,
        "q": v.q,
        "ok": v.ok(),
        "checks": v.checks.iter().map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail})).collect::<Vec<_>>(),
    })
}

/// Validates `(n, q)` against the first family whose shape fits `n`.
pub fn validate_ring_point(n: usize, q: u64) -> Result<FamilyValidation, String> {
    match Family::detect(n as u64) {
        Some(f) => Ok(validate_family(f, n as u64, q)),
        None => Err(format!("n = {n} fits no supported family")),
    }
}

fn point_summary(p: &GridPoint, rows: &[SurveyRow]) -> Value {
    let ok: Vec<&SurveyRow> = rows.iter().filter(|r| r.status == "ok").collect();
    let modes = p.modes() as u64;
    let mut base = json!({
        "n": p.n, "k": p.k, "q": p.q, "lambda": p.lambda,
        "samples": ok.len(),
        "target": lower_target(modes, p.lambda),
        "minkowski_upper": minkowski_upper(modes, p.lambda),
    });
    if ok.is_empty() {
        base["status"] = json!(rows.first().map_or("empty", |r| r.status.as_str()));
        return base;
    }
    let mut sorted = ok.clone();
    sorted.sort_by(|a, b| a.delta_sq.cmp(&b.delta_sq).then(a.sample.cmp(&b.sample)));
    let pick = |r: &SurveyRow| json!({"delta_sq": r.delta_sq.as_ref().map(rational), "delta": r.delta, "sample": r.sample});
    let above = ok.iter().filter(|r| r.above_bound == Some(true)).count();
    let upper = minkowski_upper(modes, p.lambda);
    let violations = ok
        .iter()
        .filter(|r| r.delta.is_some_and(|d| d > upper))
        .count();
    base["status"] = json!("ok");
    base["min"] = pick(sorted[0]);
    base["median"] = pick(sorted[(sorted.len() - 1) / 2]);
    base["max"] = pick(sorted[sorted.len() - 1]);
    base["above_bound_count"] = json!(above);
    base["above_bound_rate"] = json!(above as f64 / ok.len() as f64);
    base["minkowski_violations"] = json!(violations);
    base
}

fn survey(
    spec: &ExperimentSpec,
    pool: &rayon::ThreadPool,
    module: bool,
) -> Result<Output, CliError> {
    let samples = spec.samples();
    let points = spec.points();
    let mut validations: Vec<Option<Value>> = vec![None; points.len()];
    let mut blocked: Vec<Option<String>> = vec![None; points.len()];
    let mut validation_failed = false;
    for (i, p) in points.iter().enumerate() {
        if 2 * p.modes() > ENUMERATION_CAP {
            blocked[i] = Some("skipped: dimension cap".into());
            continue;
        }
        if module {
            match validate_ring_point(p.n, p.q) {
                Ok(v) => {
                    validations[i] = Some(validation_json(&v));
                    if !v.ok() {
                        let failed: Vec<&str> = v
                            .checks
                            .iter()
                            .filter(|c| !c.ok)
                            .map(|c| c.name.as_str())
                            .collect();
                        blocked[i] = Some(format!("invalid: {}", failed.join(" ")));
                    }
                }
                Err(e) => {
                    validations[i] = Some(json!({"ok": false, "error": e}));
                    blocked[i] = Some("invalid: n_shape".into());
                }
            }
            validation_failed |= blocked[i]
                .as_deref()
                .is_some_and(|s| s.starts_with("invalid"));
        }
    }
    let units: Vec<(usize, u64)> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| blocked[*i].is_none())
        .flat_map(|(i, _)| (0..samples).map(move |s| (i, s)))
        .collect();
    let computed: Vec<SurveyRow> = pool.install(|| {
        units
            .par_iter()
            .map(|&(i, s)| {
                let p = &points[i];
                survey_unit(p, s, survey_seed(spec.seed, module, p.index, s), module)
                    .map(|(row, _)| row)
            })
            .collect::<sisgkp_core::Result<Vec<_>>>()
    })?;
    let mut by_point: Vec<Vec<SurveyRow>> = vec![Vec::new(); points.len()];
    for (row, &(i, _)) in computed.into_iter().zip(&units) {
        by_point[i].push(row);
    }
    for (i, p) in points.iter().enumerate() {
        if let Some(status) = &blocked[i] {
            by_point[i].push(SurveyRow::skipped(p, status.clone()));
        }
    }
    let mut csv = CsvBuf::new(&header_comments(spec, samples), &SURVEY_HEADER);
    let mut all_rows = Vec::new();
    for rows in &by_point {
        for r in rows {
            csv.row(&r.fields());
            all_rows.push(r.to_json());
        }
    }
    let summaries: Vec<Value> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut s = point_summary(p, &by_point[i]);
            if let Some(v) = &validations[i] {
                s["validation"] = v.clone();
            }
            s
        })
        .collect();
    Ok(Output {
        csv: Some(csv.finish()),
        json: json!({
            "kind": if module { "ring_distance_survey" } else { "distance_survey" },
            "seed": spec.seed,
            "samples": samples,
            "sigma_convention": SIGMA_CONVENTION,
            "points": summaries,
            "rows": all_rows,
        }),
        validation_failed,
    })
}

fn header_comments(spec: &ExperimentSpec, samples: u64) -> Vec<String> {
    vec![
        format!(
            "sisgkp {:?} seed={} samples={}",
            spec.kind, spec.seed, samples
        ),
        SIGMA_CONVENTION.into(),
        "sub-seed = derive_seed(seed, [kind, grid_point, sample])".into(),
    ]
}

pub fn run_distance_survey(
    spec: &ExperimentSpec,
    pool: &rayon::ThreadPool,
) -> Result<Output, CliError> {
    survey(spec, pool, false)
}

pub fn run_ring_distance_survey(
    spec: &ExperimentSpec,
    pool: &rayon::ThreadPool,
) -> Result<Output, CliError> {
    survey(spec, pool, true)
}

/// The candidate with the largest distance (earliest on ties).
pub fn select_code(
    p: &GridPoint,
    master: u64,
    candidates: u64,
    module: bool,
    pool: &rayon::ThreadPool,
) -> Result<(GkpCode, u64, BigRational), CliError> {
    let found: Vec<(GkpCode, u64, BigRational)> = pool.install(|| {
        (0..candidates)
            .into_par_iter()
            .map(|c| {
                let seed = derive_seed(master, &[kind::DECODE_CANDIDATES, p.index, c]);
                let code = sample_code(p.n, p.k, p.q, p.lambda, module, seed)?;
                let d = code.code_distance()?;
                Ok((code, seed, d.delta_sq))
            })
            .collect::<sisgkp_core::Result<Vec<_>>>()
    })?;
    let mut best: Option<(GkpCode, u64, BigRational)> = None;
    for cand in found {
        if best.as_ref().is_none_or(|b| cand.2 > b.2) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| CliError::Internal(anyhow!("no candidates")))
}

/// Seed shared by the trials of every decode row of an experiment, so that
/// rows differing only in `q`, `σ` or the decoder see the same underlying
/// normal draws.
pub fn decode_trial_seed(master: u64) -> u64 {
    derive_seed(master, &[kind::DECODE_TRIALS])
}

pub fn parallel_error_rate(
    ctx: &DecodeContext,
    sigma: f64,
    trials: u64,
    seed: u64,
    decoder: Decoder,
    pool: &rayon::ThreadPool,
) -> Result<RateCurvePoint, CliError> {
    let outcomes: Vec<bool> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| ctx.seeded_trial(sigma, seed, i, decoder).map(|t| t.success))
            .collect::<sisgkp_core::Result<Vec<_>>>()
    })?;
    let failures = outcomes.iter().filter(|s| !**s).count() as u64;
    Ok(ctx.rate_point(sigma, trials, failures, seed, decoder))
}

pub fn rate_fields(p: &RateCurvePoint) -> Vec<String> {
    vec![
        p.n.to_string(),
        p.k.to_string(),
        p.q.to_string(),
        p.lambda.to_string(),
        p.decoder.name().into(),
        p.sigma.to_string(),
        p.trials.to_string(),
        p.failures.to_string(),
        p.p_err.to_string(),
        p.ci_lo.to_string(),
        p.ci_hi.to_string(),
        p.seed.to_string(),
    ]
}

pub fn run_decode_curve(
    spec: &ExperimentSpec,
    pool: &rayon::ThreadPool,
) -> Result<Output, CliError> {
    let trials = spec.samples();
    let decoders = spec.decoders()?;
    let module = spec.construction == ConstructionKind::Module;
    let points = spec.points();
    if let Some(p) = points.iter().find(|p| 2 * p.modes() > ENUMERATION_CAP) {
        return Err(CliError::Validation(format!(
            "n*k = {} exceeds the exact-distance cap used for code selection",
            p.modes()
        )));
    }
    let seed = decode_trial_seed(spec.seed);
    let mut csv = CsvBuf::new(&header_comments(spec, trials), &DECODE_HEADER);
    let mut summaries = Vec::new();
    let mut rows = Vec::new();
    for p in &points {
        let (code, code_seed, delta_sq) = select_code(p, spec.seed, spec.candidates, module, pool)?;
        let ctx = DecodeContext::new(&code)?;
        for &d in &decoders {
            for &sigma in &spec.grid.sigma {
                let r = parallel_error_rate(&ctx, sigma, trials, seed, d, pool)?;
                csv.row(&rate_fields(&r));
                rows.push(json!({
                    "n": r.n, "k": r.k, "q": r.q, "lambda": r.lambda, "decoder": r.decoder.name(),
                    "sigma": r.sigma, "trials": r.trials, "failures": r.failures, "p_err": r.p_err,
                    "ci_lo": r.ci_lo, "ci_hi": r.ci_hi, "seed": r.seed,
                }));
            }
        }
        summaries.push(json!({
            "n": p.n, "k": p.k, "q": p.q, "lambda": p.lambda,
            "candidates": spec.candidates,
            "code_seed": code_seed,
            "delta_sq": rational(&delta_sq),
            "code": serde_json::to_value(CodeDocument::from_code(&code, Some(code_seed))).expect("plain data"),
        }));
    }
    Ok(Output {
        csv: Some(csv.finish()),
        json: json!({
            "kind": "decode_curve",
            "seed": spec.seed,
            "trials": trials,
            "trial_seed": seed,
            "sigma_convention": SIGMA_CONVENTION,
            "points": summaries,
            "rows": rows,
        }),
        validation_failed: false,
    })
}

pub const BOUND_HEADER: [&str; 17] = [
    "n",
    "k",
    "q",
    "lambda",
    "r",
    "lower_target",
    "minkowski_upper",
    "covering_upper",
    "prob_bound",
    "prob_vacuous",
    "high_probability_q",
    "high_probability_failure",
    "high_probability_vacuous",
    "tail_q",
    "tail_failure",
    "precondition_ok",
    "ring_epsilon",
];

fn ring_bound_json(p: &GridPoint, r: f64) -> Value {
    let (n, k, q) = (p.n as u64, p.k as u64, p.q);
    let mut out = match epsilon_bound(n, k, q, r) {
        Ok(rep) => json!({
            "gamma": rep.gamma,
            "r_guarantee": rep.r_guarantee,
            "factor_degrees": rep.factors.iter().map(|f| f.degree().unwrap_or(0)).collect::<Vec<_>>(),
            "subsets": rep.terms.len(),
            "epsilon": rep.epsilon,
            "epsilon_exact": rep.epsilon_exact,
            "vacuous": rep.epsilon > 1.0,
        }),
        Err(e) => json!({"error": e.to_string()}),
    };
    match validate_ring_point(p.n, q) {
        Ok(v) => {
            out["validation"] = validation_json(&v);
            if v.ok() {
                match v.family {
                    Family::PowerOfTwo => {
                        let t = power_of_two_thresholds(n, k);
                        out["thresholds"] = json!({
                            "gamma_high_probability": t.gamma_high_probability,
                            "q_high_probability": t.q_high_probability,
                            "failure_high_probability": t.failure_high_probability,
                            "gamma_tail": t.gamma_tail,
                            "q_tail": t.q_tail,
                            "q_tail_conservative": t.q_tail_conservative,
                            "failure_tail": t.failure_tail,
                        });
                    }
                    Family::TwoPrimes => {
                        if let Ok(t) = two_primes_probability(n, k, q, r) {
                            out["two_primes"] = json!({
                                "dominant_degree": t.dominant_degree,
                                "dominant": t.dominant,
                                "next_degree": t.next_degree,
                                "tail_bound": t.tail_bound,
                                "epsilon": t.epsilon,
                            });
                        }
                    }
                    Family::PowerOfTwoTimesPrime => {}
                }
            }
        }
        Err(e) => out["validation"] = json!({"ok": false, "error": e}),
    }
    out
}

/// Closed-form bounds for every grid point and radius.
pub fn run_bound_table(spec: &ExperimentSpec) -> Output {
    let mut csv = CsvBuf::new(
        &[
            format!("sisgkp bound table seed={}", spec.seed),
            SIGMA_CONVENTION.into(),
        ],
        &BOUND_HEADER,
    );
    let mut rows = Vec::new();
    for p in spec.points() {
        let modes = p.modes() as u64;
        let radii = if spec.grid.r.is_empty() {
            vec![0.5 * (modes as f64 / (std::f64::consts::PI * std::f64::consts::E)).sqrt()]
        } else {
            spec.grid.r.clone()
        };
        for r in radii {
            let b = bounds(modes, p.q, p.lambda, r);
            let ring = (p.k > 1 || spec.construction == ConstructionKind::Module)
                .then(|| ring_bound_json(&p, r));
            let eps = ring.as_ref().and_then(|v| v["epsilon"].as_f64());
            csv.row(&[
                p.n.to_string(),
                p.k.to_string(),
                p.q.to_string(),
                p.lambda.to_string(),
                r.to_string(),
                b.lower_target.to_string(),
                b.minkowski_upper.to_string(),
                b.covering_upper.to_string(),
                b.prob_bound.to_string(),
                b.prob_bound_vacuous().to_string(),
                b.high_probability_q.to_string(),
                b.high_probability_failure.to_string(),
                b.high_probability_vacuous().to_string(),
                b.tail_q.to_string(),
                b.tail_failure.to_string(),
                b.precondition_ok.to_string(),
                opt(&eps),
            ]);
            rows.push(json!({
                "n": p.n, "k": p.k, "q": p.q, "lambda": p.lambda, "r": r,
                "modes": modes,
                "lower_target": b.lower_target,
                "minkowski_upper": b.minkowski_upper,
                "covering_upper": b.covering_upper,
                "prob_bound": b.prob_bound,
                "prob_vacuous": b.prob_bound_vacuous(),
                "q_is_prime": b.q_is_prime,
                "precondition_ok": b.precondition_ok,
                "high_probability_q": b.high_probability_q,
                "high_probability_failure": b.high_probability_failure,
                "high_probability_vacuous": b.high_probability_vacuous(),
                "tail_q": b.tail_q,
                "tail_failure": b.tail_failure,
                "ring": ring,
            }));
        }
    }
    Output {
        csv: Some(csv.finish()),
        json: json!({"kind": "bound_table", "seed": spec.seed, "sigma_convention": SIGMA_CONVENTION, "rows": rows}),
        validation_failed: false,
    }
}

/// Family validation for every `(n, q)` of the grid.
pub fn run_param_check(spec: &ExperimentSpec) -> Output {
    let mut seen = Vec::new();
    let mut rows = Vec::new();
    let mut failed = false;
    for p in spec.points() {
        if seen.contains(&(p.n, p.q)) {
            continue;
        }
        seen.push((p.n, p.q));
        match validate_ring_point(p.n, p.q) {
            Ok(v) => {
                failed |= !v.ok();
                rows.push(validation_json(&v));
            }
            Err(e) => {
                failed = true;
                rows.push(json!({"n": p.n, "q": p.q, "ok": false, "error": e}));
            }
        }
    }
    Output {
        csv: None,
        json: json!({"kind": "param_check", "validations": rows}),
        validation_failed: failed,
    }
}

/// Frequency of a fixed `z` in `L⊥(H)` over `draws` uniform symmetric `H`.
pub fn membership_frequency(
    n: usize,
    k: usize,
    q: u64,
    module: bool,
    z: &[i64],
    draws: u64,
    master: u64,
    pool: &rayon::ThreadPool,
) -> Result<u64, CliError> {
    let hits: Vec<bool> = pool.install(|| {
        (0..draws)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_from_seed(derive_seed(master, &[i]));
                if module {
                    let h = RingSymMat::sample_any_modulus(n, k, q, &mut rng)?;
                    sisgkp_core::ringquot::module_membership(&h, z)
                } else {
                    let h = SymMatModQ::sample_any_modulus(n, q, &mut rng)?;
                    sisgkp_core::siscode::lattice_membership(&h, z)
                }
            })
            .collect::<sisgkp_core::Result<Vec<_>>>()
    })?;
    Ok(hits.iter().filter(|h| **h).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Grid;

    fn grid(n: Vec<usize>, q: Vec<u64>) -> Grid {
        Grid {
            n,
            k: vec![1],
            q,
            lambda: vec![2],
            sigma: vec![],
            r: vec![],
        }
    }

    #[test]
    fn survey_rows_replay() {
        let mut spec = ExperimentSpec::new(
            ExperimentKind::DistanceSurvey,
            grid(vec![2, 3], vec![5]),
            11,
        );
        spec.samples = Some(4);
        let pool = pool(2).unwrap();
        let out = run(&spec, &pool).unwrap();
        let (_, rows) = crate::format::parse_csv(out.csv.as_ref().unwrap());
        assert_eq!(rows.len(), 8);
        let p = spec.points()[1];
        let seed: u64 = rows[5][9].parse().unwrap();
        let (row, _) = survey_unit(&p, 1, seed, false).unwrap();
        assert_eq!(row.fields(), rows[5]);
    }

    #[test]
    fn oversized_points_are_skipped() {
        let mut spec =
            ExperimentSpec::new(ExperimentKind::DistanceSurvey, grid(vec![17], vec![5]), 1);
        spec.samples = Some(2);
        let out = run(&spec, &pool(1).unwrap()).unwrap();
        assert!(out.csv.unwrap().contains("skipped: dimension cap"));
    }

    #[test]
    fn ring_survey_flags_invalid_points() {
        let mut g = grid(vec![4, 3], vec![701]);
        g.k = vec![1];
        let mut spec = ExperimentSpec::new(ExperimentKind::RingDistanceSurvey, g, 3);
        spec.samples = Some(3);
        let out = run(&spec, &pool(1).unwrap()).unwrap();
        assert!(out.validation_failed);
        assert_eq!(out.json["points"][0]["validation"]["ok"], json!(true));
        assert_eq!(out.json["points"][0]["samples"], json!(3));
        assert!(out.csv.unwrap().contains("invalid: "));
    }

    #[test]
    fn bound_table_flags_vacuous_failure() {
        let spec =
            ExperimentSpec::new(ExperimentKind::BoundTable, grid(vec![7, 100], vec![211]), 0);
        let out = run_bound_table(&spec);
        assert_eq!(out.json["rows"][0]["high_probability_vacuous"], json!(true));
        assert_eq!(
            out.json["rows"][1]["high_probability_vacuous"],
            json!(false)
        );
        let lt = out.json["rows"][0]["lower_target"].as_f64().unwrap();
        assert!((lt - 0.6402).abs() < 1e-3);
    }
}
