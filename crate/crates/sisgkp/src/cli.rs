//! Command-line interface.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sisgkp_core::decode::{DecodeContext, Decoder};
use sisgkp_core::numth::{select_ring_parameters, validate_family, Family};

use crate::error::CliError;
use crate::format::{CodeDocument, CsvBuf, SIGMA_CONVENTION};
use crate::run::{self, Output, SURVEY_HEADER};
use crate::spec::{ConstructionKind, ExperimentKind, ExperimentSpec, Grid, GridPoint};

#[derive(Parser, Debug)]
#[command(
    name = "sisgkp",
    version,
    about = "GKP codes from symmetric SIS and M-SIS lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact code distance of sampled SIS codes.
    Survey(ExperimentArgs),
    /// Exact λ₁ of sampled R-SIS / M-SIS lattices.
    RingSurvey(ExperimentArgs),
    /// Logical error rate versus σ for the best of several candidate codes.
    DecodeCurve(ExperimentArgs),
    /// Closed-form distance and probability bounds.
    Bounds(ExperimentArgs),
    /// Ring parameter families.
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Regenerates a single survey sample or decoding trial from its seed.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct ExperimentArgs {
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples per grid point (codes for surveys, trials for decode curves).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// ExperimentSpec document; explicit flags override its fields.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub decoder: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    /// Candidate codes per decode point.
    #[arg(long)]
    pub candidates: Option<u64>,
    /// Use module codes (decode curves and bound tables).
    #[arg(long)]
    pub module: bool,
}

#[derive(Subcommand, Debug)]
pub enum ParamsAction {
    /// Checks the hypotheses of a family for `(n, q)`.
    Validate {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest admissible prime for a target `γ`.
    Suggest {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReplayKind {
    Survey,
    RingSurvey,
    Decode,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long, value_enum)]
    pub kind: ReplayKind,
    /// The sub-seed printed in the row being replayed.
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub lambda: u64,
    /// Sample index (surveys) or trial index (decoding).
    #[arg(long, default_value_t = 0)]
    pub index: u64,
    /// Code document for decode replays.
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value = "trivial")]
    pub decoder: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Merges a `--grid` document with explicit flags.
pub fn build_spec(kind: ExperimentKind, a: &ExperimentArgs) -> Result<ExperimentSpec, CliError> {
    let mut spec = match &a.grid {
        Some(path) => {
            let s = ExperimentSpec::from_json(&read(path)?)?;
            if s.kind != kind {
                return Err(CliError::Validation(format!(
                    "grid file describes {:?}, not {:?}",
                    s.kind, kind
                )));
            }
            s
        }
        None => {
            // bound tables are closed-form, so they do not need a seed
            let seed = match (a.seed, kind) {
                (Some(s), _) => s,
                (None, ExperimentKind::BoundTable) => 0,
                (None, _) => return Err(CliError::Validation("--seed is required".into())),
            };
            ExperimentSpec::new(
                kind,
                Grid {
                    n: vec![],
                    k: vec![1],
                    q: vec![],
                    lambda: vec![2],
                    sigma: vec![],
                    r: vec![],
                },
                seed,
            )
        }
    };
    if kind != ExperimentKind::BoundTable && a.seed.is_none() {
        return Err(CliError::Validation("--seed is required".into()));
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    let g = &mut spec.grid;
    if !a.n.is_empty() {
        g.n = a.n.clone();
    }
    if !a.k.is_empty() {
        g.k = a.k.clone();
    }
    if !a.q.is_empty() {
        g.q = a.q.clone();
    }
    if !a.lambda.is_empty() {
        g.lambda = a.lambda.clone();
    }
    if !a.sigma.is_empty() {
        g.sigma = a.sigma.clone();
    }
    if !a.r.is_empty() {
        g.r = a.r.clone();
    }
    if a.samples.is_some() {
        spec.samples = a.samples;
    }
    if let Some(c) = a.candidates {
        spec.candidates = c;
    }
    if !a.decoder.is_empty() {
        spec.decoders = a.decoder.clone();
    }
    if a.module {
        spec.construction = ConstructionKind::Module;
    }
    if let Some(o) = &a.out {
        spec.output = Some(o.display().to_string());
    }
    spec.validate()?;
    Ok(spec)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

/// Summary file next to the CSV: `survey.csv` → `survey.summary.json`.
pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.json")
}

fn emit(out: &Output, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    match (format, &out.csv) {
        (Format::Csv, Some(csv)) => {
            write_text(path, csv)?;
            if let Some(p) = path {
                let mut summary = out.json.clone();
                if let Some(m) = summary.as_object_mut() {
                    m.remove("rows");
                }
                fs::write(summary_path(p), json_text(&summary))?;
            }
        }
        _ => write_text(path, &json_text(&out.json))?,
    }
    Ok(())
}

fn experiment(kind: ExperimentKind, a: &ExperimentArgs) -> Result<bool, CliError> {
    let spec = build_spec(kind, a)?;
    let pool = run::pool(a.jobs)?;
    let out = run::run(&spec, &pool)?;
    let path = spec.output.as_ref().map(PathBuf::from);
    emit(&out, a.format, path.as_deref())?;
    Ok(!out.validation_failed)
}

fn family_arg(name: &str) -> Result<Family, CliError> {
    Family::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        CliError::Validation(format!(
            "unknown family {name:?}; expected one of {}",
            known.join(", ")
        ))
    })
}

fn params(action: &ParamsAction) -> Result<bool, CliError> {
    match action {
        ParamsAction::Validate { family, n, q, out } => {
            let fam = match family {
                Some(f) => family_arg(f)?,
                None => Family::detect(*n).ok_or_else(|| {
                    CliError::Validation(format!("n = {n} fits no supported family"))
                })?,
            };
            let v = validate_family(fam, *n, *q);
            let doc = json!({
                "family": fam.name(), "n": n, "q": q, "ok": v.ok(),
                "checks": v.checks.iter().map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail})).collect::<Vec<_>>(),
            });
            write_text(out.as_deref(), &json_text(&doc))?;
            Ok(v.ok())
        }
        ParamsAction::Suggest {
            family,
            n,
            k,
            gamma,
            out,
        } => {
            let fam = family_arg(family)?;
            let p = select_ring_parameters(fam, *n, *k, *gamma)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let doc = json!({
                "family": p.family.name(), "n": p.n, "k": p.k, "gamma": p.gamma,
                "q_real": p.q_real, "q": p.q_min, "r_guarantee": p.r_guarantee,
            });
            write_text(out.as_deref(), &json_text(&doc))?;
            Ok(true)
        }
    }
}

fn replay(a: &ReplayArgs) -> Result<bool, CliError> {
    let need = |x: Option<u64>, name: &str| {
        x.ok_or_else(|| CliError::Validation(format!("--{name} is required")))
    };
    match a.kind {
        ReplayKind::Survey | ReplayKind::RingSurvey => {
            let module = a.kind == ReplayKind::RingSurvey;
            let n = need(a.n.map(|x| x as u64), "n")? as usize;
            let q = need(a.q, "q")?;
            if a.lambda < 2 || n == 0 || a.k == 0 || q < 2 || (!module && a.k != 1) {
                return Err(CliError::Validation("invalid n, k, q or lambda".into()));
            }
            let p = GridPoint {
                index: 0,
                n,
                k: a.k,
                q,
                lambda: a.lambda,
            };
            let (row, code) = run::survey_unit(&p, a.index, a.seed, module)?;
            let mut csv = CsvBuf::new(&[SIGMA_CONVENTION.into()], &SURVEY_HEADER);
            csv.row(&row.fields());
            let mut text = csv.finish();
            text.push_str(&CodeDocument::from_code(&code, Some(a.seed)).to_json());
            text.push('\n');
            write_text(a.out.as_deref(), &text)?;
        }
        ReplayKind::Decode => {
            let path = a
                .code
                .as_ref()
                .ok_or_else(|| CliError::Validation("--code is required".into()))?;
            let doc = CodeDocument::from_json(&read(path)?)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let code = doc
                .to_code()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let sigma = a
                .sigma
                .ok_or_else(|| CliError::Validation("--sigma is required".into()))?;
            let decoder = Decoder::from_name(&a.decoder)
                .ok_or_else(|| CliError::Validation(format!("unknown decoder {:?}", a.decoder)))?;
            let ctx = DecodeContext::new(&code)?;
            let t = ctx
                .seeded_trial(sigma, a.seed, a.index, decoder)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let doc = json!({
                "sigma": t.sigma, "seed": a.seed, "trial": a.index, "decoder": decoder.name(),
                "sigma_convention": SIGMA_CONVENTION,
                "error": t.error, "syndrome_lift": t.syndrome_lift,
                "decoder_coords": t.decoder_coords, "coset_coords": t.coset_coords,
                "residual_coords": t.residual_coords, "success": t.success,
            });
            write_text(a.out.as_deref(), &json_text(&doc))?;
        }
    }
    Ok(true)
}

pub fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Survey(a) => experiment(ExperimentKind::DistanceSurvey, a),
        Command::RingSurvey(a) => experiment(ExperimentKind::RingDistanceSurvey, a),
        Command::DecodeCurve(a) => experiment(ExperimentKind::DecodeCurve, a),
        Command::Bounds(a) => experiment(ExperimentKind::BoundTable, a),
        Command::Params { action } => params(action),
        Command::Replay(a) => replay(a),
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("sisgkp: {e:#}");
            e.exit_code()
        }
    }
}
