//! Experiment specifications.

use serde::{Deserialize, Serialize};
use sisgkp_core::decode::Decoder;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    DistanceSurvey,
    RingDistanceSurvey,
    DecodeCurve,
    BoundTable,
    ParamCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    #[default]
    Sis,
    Module,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Vec<usize>,
    #[serde(default = "one")]
    pub k: Vec<usize>,
    pub q: Vec<u64>,
    #[serde(default = "two")]
    pub lambda: Vec<u64>,
    #[serde(default)]
    pub sigma: Vec<f64>,
    /// Radii for the bound table; defaults to `sqrt(nk/(πe))/2` per point.
    #[serde(default)]
    pub r: Vec<f64>,
}

fn one() -> Vec<usize> {
    vec![1]
}

fn two() -> Vec<u64> {
    vec![2]
}

fn default_candidates() -> u64 {
    100
}

fn default_decoders() -> Vec<String> {
    vec!["trivial".into()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub grid: Grid,
    /// Codes per survey point, or trials per decode point.
    #[serde(default)]
    pub samples: Option<u64>,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
    /// Candidate codes per decode point; the one with the largest distance
    /// is kept.
    #[serde(default = "default_candidates")]
    pub candidates: u64,
    #[serde(default = "default_decoders")]
    pub decoders: Vec<String>,
    #[serde(default)]
    pub construction: ConstructionKind,
}

pub const DEFAULT_SURVEY_SAMPLES: u64 = 200;
pub const DEFAULT_DECODE_TRIALS: u64 = 1000;

/// One `(n, k, q, λ)` combination, in grid order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub index: u64,
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub lambda: u64,
}

impl GridPoint {
    pub fn modes(&self) -> usize {
        self.n * self.k
    }
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, grid: Grid, seed: u64) -> Self {
        Self {
            kind,
            grid,
            samples: None,
            seed,
            output: None,
            candidates: default_candidates(),
            decoders: default_decoders(),
            construction: ConstructionKind::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("experiment spec: {e}")))
    }

    pub fn samples(&self) -> u64 {
        self.samples.unwrap_or(match self.kind {
            ExperimentKind::DecodeCurve => DEFAULT_DECODE_TRIALS,
            _ => DEFAULT_SURVEY_SAMPLES,
        })
    }

    pub fn decoders(&self) -> Result<Vec<Decoder>, CliError> {
        self.decoders
            .iter()
            .map(|d| {
                Decoder::from_name(d)
                    .ok_or_else(|| CliError::Validation(format!("unknown decoder {d:?}")))
            })
            .collect()
    }

    /// Cartesian product, `n` outermost, then `k`, `q`, `λ`.
    pub fn points(&self) -> Vec<GridPoint> {
        let g = &self.grid;
        let mut out = Vec::new();
        for &n in &g.n {
            for &k in &g.k {
                for &q in &g.q {
                    for &lambda in &g.lambda {
                        out.push(GridPoint {
                            index: out.len() as u64,
                            n,
                            k,
                            q,
                            lambda,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Validation(m.into()));
        let g = &self.grid;
        if self.samples == Some(0) {
            return bad("samples must be at least 1");
        }
        if self.candidates == 0 {
            return bad("candidates must be at least 1");
        }
        if g.n.is_empty() || g.k.is_empty() || g.q.is_empty() || g.lambda.is_empty() {
            return bad("grid lists n, k, q and lambda must be nonempty");
        }
        if g.n.contains(&0) || g.k.contains(&0) {
            return bad("n and k must be positive");
        }
        if g.q.iter().any(|&q| q < 2) {
            return bad("q must be at least 2");
        }
        if g.lambda.iter().any(|&l| l < 2) {
            return bad("lambda must be at least 2");
        }
        if g.sigma
            .iter()
            .chain(&g.r)
            .any(|&x| !(x > 0.0 && x.is_finite()))
        {
            return bad("sigma and r values must be positive");
        }
        let sis = match self.kind {
            ExperimentKind::DistanceSurvey => true,
            ExperimentKind::DecodeCurve => self.construction == ConstructionKind::Sis,
            _ => false,
        };
        if sis && g.k != [1] {
            return bad("SIS codes have k = 1");
        }
        if self.kind == ExperimentKind::DecodeCurve {
            if g.sigma.is_empty() {
                return bad("decode curves need at least one sigma");
            }
            if self.decoders.is_empty() {
                return bad("no decoders given");
            }
            self.decoders()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_defaults() {
        let s = ExperimentSpec::from_json(
            r#"{"kind":"distance_survey","grid":{"n":[3,4],"q":[5]},"seed":7}"#,
        )
        .unwrap();
        assert_eq!(s.grid.k, [1]);
        assert_eq!(s.grid.lambda, [2]);
        assert_eq!(s.samples(), DEFAULT_SURVEY_SAMPLES);
        assert_eq!(s.points().len(), 2);
        s.validate().unwrap();
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ExperimentSpec::from_json(
            r#"{"kind":"distance_survey","grid":{"n":[3],"q":[5]}}"#
        )
        .is_err());
        let s = ExperimentSpec::from_json(
            r#"{"kind":"decode_curve","grid":{"n":[3],"q":[5]},"seed":1}"#,
        )
        .unwrap();
        assert!(s.validate().is_err());
        let s = ExperimentSpec::from_json(
            r#"{"kind":"decode_curve","grid":{"n":[3],"q":[5],"sigma":[0.1]},"seed":1,"decoders":["ml"]}"#,
        )
        .unwrap();
        assert!(s.validate().is_err());
        let s = ExperimentSpec::from_json(
            r#"{"kind":"distance_survey","grid":{"n":[3],"q":[5],"k":[2]},"seed":1}"#,
        )
        .unwrap();
        assert!(s.validate().is_err());
    }
}
