//! `loopcalc` — exact string topology from the command line.
//!
//! Subcommands: `validate`, `betti`, `loop`, `hodge`, `check`,
//! `export-builtins`.  Models come from `--builtin <name>` or a positional
//! JSON path (mutually exclusive).  Exit codes: 0 success, 1 validation or
//! verification failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loopcalc_core::models::{builtin, load_model, BuiltinModel, LoadedModel};
use loopcalc_core::stringtop::{loop_algebra, LoopAlgebra};
use loopcalc_core::sullivan::{FreeLoopModel, SullivanModel};
use loopcalc_core::PdModel;

mod checks;
mod output;

use output::Format;

#[derive(Parser)]
#[command(name = "loopcalc", version, about = "Exact rational string topology calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Path to a model JSON file.
    #[arg(value_name = "MODEL", conflicts_with = "builtin")]
    path: Option<PathBuf>,
    /// Built-in model name (S2..S7, CP2, CP3, S2xS3, S2xS2, S3xS3).
    #[arg(long)]
    builtin: Option<String>,
    /// Maximum total degree; defaults to m + 10 for duality models.
    #[arg(short = 'N', long = "max-degree")]
    max_degree: Option<i64>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for deterministic subsampling of oversized check spaces.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pipeline {
    Hochschild,
    Sullivan,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom of a model and report violations.
    Validate(ModelArgs),
    /// Betti numbers of the free loop space, per pipeline.
    Betti {
        #[command(flatten)]
        model: ModelArgs,
        /// Which pipeline to run; defaults to everything the model supports.
        #[arg(long, value_enum)]
        pipeline: Option<Pipeline>,
    },
    /// Loop product table, BV operator and bracket on ℍ.
    Loop(ModelArgs),
    /// Hodge table (n, p) ↦ dim of the free loop cohomology.
    Hodge(ModelArgs),
    /// Run every verification suite applicable to the model.
    Check(ModelArgs),
    /// Write the built-in models to disk as JSON.
    ExportBuiltins {
        /// Target directory (default `./builtin-models`).
        dir: Option<PathBuf>,
    },
}

/// A resolved model: built-ins carry both pipelines, files carry one.
enum Source {
    Builtin(BuiltinModel),
    PdFile(String, PdModel),
    SullivanFile(String, SullivanModel),
}

impl Source {
    fn name(&self) -> &str {
        match self {
            Source::Builtin(b) => &b.name,
            Source::PdFile(n, _) | Source::SullivanFile(n, _) => n,
        }
    }

    fn pd(&self) -> Option<&PdModel> {
        match self {
            Source::Builtin(b) => Some(&b.pd),
            Source::PdFile(_, pd) => Some(pd),
            Source::SullivanFile(..) => None,
        }
    }

    fn sullivan(&self) -> Option<&SullivanModel> {
        match self {
            Source::Builtin(b) => Some(&b.sullivan),
            Source::SullivanFile(_, s) => Some(s),
            Source::PdFile(..) => None,
        }
    }
}

/// Exit code 2 for anything the user got wrong on the command line.
struct UsageError(String);

fn resolve(args: &ModelArgs) -> Result<Source, UsageError> {
    resolve_with(args, false)
}

/// The validate command loads without the validation gate so it can report
/// axiom violations itself with exit code 1.
fn resolve_raw(args: &ModelArgs) -> Result<Source, UsageError> {
    resolve_with(args, true)
}

fn resolve_with(args: &ModelArgs, raw: bool) -> Result<Source, UsageError> {
    match (&args.builtin, &args.path) {
        (Some(name), None) => builtin(name)
            .map(Source::Builtin)
            .map_err(|e| UsageError(e.to_string())),
        (None, Some(path)) => {
            let loaded = if raw {
                loopcalc_core::models::load_model_raw(path)
            } else {
                load_model(path)
            };
            match loaded {
                Ok(LoadedModel::Pd(name, pd)) => Ok(Source::PdFile(name, pd)),
                Ok(LoadedModel::Sullivan(name, s)) => Ok(Source::SullivanFile(name, s)),
                Err(e) => Err(UsageError(e.to_string())),
            }
        }
        (None, None) => Err(UsageError(
            "a model is required: pass a path or --builtin <name>".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap enforces exclusivity"),
    }
}

fn default_degree(source: &Source, args: &ModelArgs) -> i64 {
    args.max_degree
        .unwrap_or_else(|| source.pd().map_or(10, |pd| pd.dimension + 10))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::Validate(args) => {
            let source = resolve_raw(&args)?;
            cmd_validate(&source, args.format)
        }
        Command::Betti { model, pipeline } => {
            let source = resolve(&model)?;
            let n_max = default_degree(&source, &model);
            cmd_betti(&source, pipeline, n_max, model.format)
        }
        Command::Loop(args) => {
            let source = resolve(&args)?;
            let Some(pd) = source.pd() else {
                return Err(UsageError(
                    "the loop command needs a Poincaré duality model".into(),
                ));
            };
            let n_max = default_degree(&source, &args);
            if n_max < pd.dimension {
                return Err(UsageError(format!(
                    "max degree {n_max} is below the duality dimension m = {}",
                    pd.dimension
                )));
            }
            cmd_loop(source.name(), pd, n_max, args.format)
        }
        Command::Hodge(args) => {
            let source = resolve(&args)?;
            let Some(sullivan) = source.sullivan() else {
                return Err(UsageError("the hodge command needs a Sullivan model".into()));
            };
            let n_max = default_degree(&source, &args);
            cmd_hodge(source.name(), sullivan, n_max, args.format)
        }
        Command::Check(args) => {
            let source = resolve(&args)?;
            let n_max = default_degree(&source, &args);
            checks::cmd_check(&source, n_max, args.seed, args.format)
        }
        Command::ExportBuiltins { dir } => {
            let dir = dir.unwrap_or_else(|| PathBuf::from("builtin-models"));
            match loopcalc_core::models::export_builtins(&dir) {
                Ok(paths) => {
                    for p in paths {
                        println!("wrote {}", p.display());
                    }
                    Ok(true)
                }
                Err(e) => Err(UsageError(e.to_string())),
            }
        }
    }
}

fn cmd_validate(source: &Source, format: Format) -> Result<bool, UsageError> {
    let mut violations: Vec<(String, String, String)> = Vec::new();
    if let Some(pd) = source.pd() {
        for v in pd.validate().violations {
            violations.push(("pd-cdga".into(), v.axiom, v.witness));
        }
    }
    if let Some(s) = source.sullivan() {
        for v in s.validate().violations {
            violations.push(("sullivan".into(), v.axiom, v.witness));
        }
    }
    output::print_validation(source.name(), &violations, format);
    Ok(violations.is_empty())
}

fn cmd_betti(
    source: &Source,
    pipeline: Option<Pipeline>,
    n_max: i64,
    format: Format,
) -> Result<bool, UsageError> {
    let pipeline = pipeline.unwrap_or(match (source.pd(), source.sullivan()) {
        (Some(_), Some(_)) => Pipeline::Both,
        (Some(_), None) => Pipeline::Hochschild,
        _ => Pipeline::Sullivan,
    });
    let want_hochschild = matches!(pipeline, Pipeline::Hochschild | Pipeline::Both);
    let want_sullivan = matches!(pipeline, Pipeline::Sullivan | Pipeline::Both);
    if want_hochschild && source.pd().is_none() {
        return Err(UsageError(
            "hochschild pipeline requested without a duality model".into(),
        ));
    }
    if want_sullivan && source.sullivan().is_none() {
        return Err(UsageError(
            "sullivan pipeline requested without a Sullivan model".into(),
        ));
    }

    let hochschild: Option<Vec<usize>> = match (want_hochschild, source.pd()) {
        (true, Some(pd)) => {
            let hc = loopcalc_core::HochschildComplex::build(
                std::sync::Arc::new(pd.algebra().clone()),
                n_max,
            )
            .map_err(|e| UsageError(e.to_string()))?;
            let mut dims = Vec::new();
            for n in 0..=n_max {
                dims.push(
                    hc.complex()
                        .homology(n)
                        .map_err(|e| UsageError(e.to_string()))?
                        .dim,
                );
            }
            Some(dims)
        }
        _ => None,
    };
    let sullivan: Option<Vec<usize>> = match (want_sullivan, source.sullivan()) {
        (true, Some(s)) => {
            let flm = FreeLoopModel::build(s).map_err(|e| UsageError(e.to_string()))?;
            let betti = loopcalc_core::sullivan::loop_space_betti(&flm, n_max)
                .map_err(|e| UsageError(e.to_string()))?;
            Some(betti.into_iter().map(|(_, d)| d).collect())
        }
        _ => None,
    };

    output::print_betti(source.name(), n_max, &hochschild, &sullivan, format);
    let agree = match (&hochschild, &sullivan) {
        (Some(h), Some(s)) => h == s,
        _ => true,
    };
    Ok(agree)
}

fn cmd_loop(name: &str, pd: &PdModel, n_max: i64, format: Format) -> Result<bool, UsageError> {
    let la = loop_algebra(pd, n_max).map_err(|e| UsageError(e.to_string()))?;
    output::print_loop_algebra(name, &la, format);
    Ok(true)
}

fn cmd_hodge(
    name: &str,
    sullivan: &SullivanModel,
    n_max: i64,
    format: Format,
) -> Result<bool, UsageError> {
    let flm = FreeLoopModel::build(sullivan).map_err(|e| UsageError(e.to_string()))?;
    let table =
        loopcalc_core::sullivan::hodge_table(&flm, n_max).map_err(|e| UsageError(e.to_string()))?;
    output::print_hodge(name, &table, format);
    Ok(true)
}

/// The loop algebra as printable rows, shared by `loop` output and tests.
pub(crate) fn loop_rows(la: &LoopAlgebra) -> output::LoopRows {
    let mut basis = Vec::new();
    for p in la.degree_range() {
        if la.dim(p) > 0 {
            basis.push((p, (0..la.dim(p)).map(|i| la.basis_label(p, i)).collect()));
        }
    }
    let mut products = Vec::new();
    let mut brackets = Vec::new();
    for p in la.degree_range() {
        for q in la.degree_range() {
            for i in 0..la.dim(p) {
                for j in 0..la.dim(q) {
                    let x = la.basis_class(p, i);
                    let y = la.basis_class(q, j);
                    if let Some(z) = la.mul(&x, &y) {
                        products.push((
                            la.basis_label(p, i),
                            la.basis_label(q, j),
                            output::class_string(la, &z),
                        ));
                    }
                    if let Some(z) = la.bv_bracket(&x, &y) {
                        brackets.push((
                            la.basis_label(p, i),
                            la.basis_label(q, j),
                            output::class_string(la, &z),
                        ));
                    }
                }
            }
        }
    }
    let mut delta = Vec::new();
    for p in la.degree_range() {
        for i in 0..la.dim(p) {
            let x = la.basis_class(p, i);
            if let Some(dx) = la.delta(&x) {
                delta.push((la.basis_label(p, i), output::class_string(la, &dx)));
            }
        }
    }
    output::LoopRows {
        unit: output::class_string(la, &la.unit()),
        basis,
        products,
        delta,
        brackets,
    }
}
