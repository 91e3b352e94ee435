//! Command-line surface: argument definitions, command dispatch and exit codes.

pub mod parse;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::engine::{compute_multitype, oracle_multitype, EngineError, EngineOptions, MultitypeResult, OracleError, OracleOptions};
use crate::models::{equivalence_map, verify_model_map, ModelError};
use crate::normalize::{regularize_and_normalize, NormalizeError};
use crate::poly_core::Jet;
use crate::weights::{homogeneous_part, is_adapted, validate_weight, Weight};

pub use parse::{parse_document, parse_equation, parse_expression, print_document, InputDocument, InputError, SyntaxError};

#[derive(Parser, Debug)]
#[command(name = "multitype", version, about = "Multitype, models and model equivalences of real hypersurfaces v = F(z, z̄, u)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Equation file (`n=<int>` and `v = <expr>` lines).
    #[arg(long)]
    pub input: PathBuf,
    /// Emit a JSON document instead of text.
    #[arg(long)]
    pub json: bool,
    /// Ordinary-degree truncation bound (default: twice the input degree).
    #[arg(long)]
    pub trunc: Option<u32>,
    /// Seed for randomized coordinate changes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Multitype, weight, generating sequence and multitype coordinates.
    Multitype(Common),
    /// Model in regular coordinates, normalized.
    Normalize(Common),
    /// The model polynomial and its weight.
    Model(Common),
    /// A verified map between the models of two inputs.
    Equiv {
        #[command(flatten)]
        common: Common,
        /// Second equation file.
        #[arg(long)]
        input2: PathBuf,
        /// Search-node budget.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
    /// Whether the input is adapted to a weight.
    CheckWeight {
        #[command(flatten)]
        common: Common,
        /// Comma-separated rationals, e.g. `1/4,1/6`.
        #[arg(long)]
        weight: String,
    },
    /// Brute-force multitype search over a bounded family.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Largest denominator of candidate weight entries.
        #[arg(long, default_value_t = 12)]
        denominator_bound: u32,
        /// Number of coordinate changes tried.
        #[arg(long, default_value_t = 400)]
        budget: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Input { path: String, source: InputError },
    #[error("invalid weight: {0}")]
    Weight(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("inputs have different multitype weights {0} and {1}; no model map exists")]
    WeightMismatch(Weight, Weight),
}

impl CliError {
    /// 1 I/O, 2 parse or malformed input, 3 realness, 4 infinite type,
    /// 5 truncation insufficient, 6 inconclusive or budget exhausted.
    pub fn exit_code(&self) -> i32 {
        use crate::transforms::TransformError;
        match self {
            CliError::Io { .. } => 1,
            CliError::Input { source: InputError::Syntax(_), .. } | CliError::Weight(_) => 2,
            CliError::Input { source: InputError::Realness(_), .. } => 3,
            CliError::Engine(e) => match e {
                EngineError::NotReal(_) => 3,
                EngineError::ConstantTerm | EngineError::NotTangent => 2,
                EngineError::InfiniteType { .. } => 4,
                EngineError::TruncationInsufficient { .. } | EngineError::Transform(TransformError::TruncationInsufficient { .. }) => 5,
                EngineError::SearchInconclusive { .. } | EngineError::Transform(_) => 6,
            },
            CliError::Normalize(NormalizeError::Transform(TransformError::TruncationInsufficient { .. })) => 5,
            CliError::Model(ModelError::Transform(TransformError::TruncationInsufficient { .. })) => 5,
            CliError::Normalize(_) | CliError::Model(_) | CliError::Oracle(_) | CliError::WeightMismatch(..) => 6,
        }
    }
}

fn read_input(path: &Path) -> Result<InputDocument, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: shown.clone(), message: e.to_string() })?;
    parse_document(&text).map_err(|source| CliError::Input { path: shown, source })
}

fn multitype_of(f: &Jet, common: &Common) -> Result<MultitypeResult, CliError> {
    Ok(compute_multitype(f, &EngineOptions { trunc: common.trunc, max_stages: None })?)
}

/// `f` itself when it is already a model for `weight`, else the engine's model.
fn model_for(f: &Jet, result: &MultitypeResult) -> (Jet, bool) {
    let one = num_traits::One::one();
    let own = homogeneous_part(&f.u_free(), &result.weight, &one);
    if own == *f && !f.has_pluriharmonic_terms() {
        (f.clone(), true)
    } else {
        (result.model.clone(), false)
    }
}

fn text_lines(lines: &[(&str, String)]) -> String {
    lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

/// Runs one command and returns its standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Multitype(c) => {
            let f = read_input(&c.input)?.equation;
            let r = multitype_of(&f, c)?;
            if c.json {
                return Ok(report::render(&report::multitype(&r)));
            }
            let mt: Vec<String> = r.multitype.iter().map(|e| e.to_string()).collect();
            Ok(text_lines(&[
                ("multitype", format!("({})", mt.join(", "))),
                ("weight", r.weight.to_string()),
                ("stages", r.traces.len().to_string()),
                ("model", r.model.to_string()),
                ("truncated", r.truncated.to_string()),
            ]))
        }
        Command::Model(c) => {
            let f = read_input(&c.input)?.equation;
            let r = multitype_of(&f, c)?;
            if c.json {
                return Ok(report::render(&json!({
                    "weight": report::weight(&r.weight),
                    "model": report::jet(&r.model),
                    "witness_map": report::chain(&r.chain),
                })));
            }
            Ok(text_lines(&[("weight", r.weight.to_string()), ("model", r.model.to_string())]))
        }
        Command::Normalize(c) => {
            let f = read_input(&c.input)?.equation;
            let r = multitype_of(&f, c)?;
            let n = regularize_and_normalize(&r.model, &r.weight, c.seed)?;
            if c.json {
                return Ok(report::render(&json!({
                    "weight": report::weight(&r.weight),
                    "model": report::jet(&r.model),
                    "normalization": report::normalization(&n),
                })));
            }
            let leading: Vec<String> = n.leading_terms.iter().map(|lt| format!("z{}: {}", lt.k + 1, lt.key())).collect();
            Ok(text_lines(&[
                ("weight", r.weight.to_string()),
                ("model", r.model.to_string()),
                ("normalized", n.normalized.to_string()),
                ("leading terms", leading.join("; ")),
                ("residual scalings", n.residuals.len().to_string()),
            ]))
        }
        Command::Equiv { common, input2, budget } => {
            let f = read_input(&common.input)?.equation;
            let g = read_input(input2)?.equation;
            let (rf, rg) = (multitype_of(&f, common)?, multitype_of(&g, common)?);
            if rf.weight != rg.weight {
                return Err(CliError::WeightMismatch(rf.weight, rg.weight));
            }
            let (p, p_own) = model_for(&f, &rf);
            let (q, q_own) = model_for(&g, &rg);
            let m = equivalence_map(&p, &q, &rf.weight, *budget)?;
            let verified = verify_model_map(&m, &p, &q).is_ok();
            if common.json {
                return Ok(report::render(&json!({
                    "weight": report::weight(&rf.weight),
                    "models": [
                        { "model": report::jet(&p), "input_is_model": p_own },
                        { "model": report::jet(&q), "input_is_model": q_own },
                    ],
                    "map": report::map(&m),
                    "verified": verified,
                })));
            }
            let (zs, w) = m.components();
            let mut lines = vec![("weight", rf.weight.to_string()), ("first model", p.to_string()), ("second model", q.to_string())];
            for (i, z) in zs.iter().enumerate() {
                lines.push(if i == 0 { ("map z", format!("z{} -> {z}", i + 1)) } else { ("    z", format!("z{} -> {z}", i + 1)) });
            }
            lines.push(("map w", format!("w -> {w}")));
            lines.push(("verified", verified.to_string()));
            Ok(text_lines(&lines))
        }
        Command::CheckWeight { common, weight } => {
            let f = read_input(&common.input)?.equation;
            let w = Weight::parse(weight).map_err(|e| CliError::Weight(e.to_string()))?;
            if w.n() != f.n() {
                return Err(CliError::Weight(format!("expected {} entries, got {}", f.n(), w.n())));
            }
            let valid = validate_weight(w.lambdas());
            let a = is_adapted(&f, &w);
            if common.json {
                let mut doc = report::adaptedness(&a);
                doc["weight"] = report::weight(&w);
                doc["valid"] = json!(valid.is_ok());
                if let Err(reason) = &valid {
                    doc["invalid_reason"] = json!(reason.to_string());
                }
                return Ok(report::render(&doc));
            }
            let mut out = format!("adapted: {}\n", if a.is_yes() { "yes" } else { "no" });
            if let crate::weights::Adaptedness::No(why) = &a {
                for k in &why.below_one {
                    out.push_str(&format!("  below weighted degree one: {k}\n"));
                }
                for k in &why.invalid_leading {
                    out.push_str(&format!("  pluriharmonic or u-dependent leading term: {k}\n"));
                }
                if why.empty_leading {
                    out.push_str("  weighted-degree-one part vanishes\n");
                }
            }
            if let Err(reason) = valid {
                out.push_str(&format!("weight is not valid: {reason}\n"));
            }
            Ok(out)
        }
        Command::Oracle { common, denominator_bound, budget } => {
            let f = read_input(&common.input)?.equation;
            let options = OracleOptions { denominator_bound: *denominator_bound, map_budget: *budget, trunc: common.trunc };
            let w = oracle_multitype(&f, &options)?;
            if common.json {
                return Ok(report::render(&json!({ "weight": report::weight(&w), "denominator_bound": denominator_bound })));
            }
            Ok(text_lines(&[("weight", w.to_string())]))
        }
    }
}
