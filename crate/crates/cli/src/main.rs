use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rectify_kit::manifest::{parse_window, FieldText};
use rectify_kit::ops::{Defaults, Op};
use rectify_kit::{load, run, select, CliError, RunOptions, EXIT_INPUT};

/// Run A∞/DG category and relative category checks described by a JSON manifest.
#[derive(Parser)]
#[command(name = "rectify-kit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the manifest's task list in declaration order.
    Run(Common),
    /// Check A∞ or functor relations, relative functor axioms, or well-formedness.
    Validate(Selected),
    /// Cohomology of every hom complex.
    Cohomology(Selected),
    /// Decide whether a functor is a quasi-equivalence.
    QuasiEquiv(Selected),
    /// Build the truncated bar-cobar stage and certify its differentials.
    Rectify(Selected),
    /// Unit map into a rectification stage.
    UnitCheck(Selected),
    /// Counit map out of a rectification stage (DG inputs).
    CounitCheck(Selected),
    /// Cohomology of the stages up to the length bound.
    Stabilize(Selected),
    /// Zigzag localization at the word bound.
    Localize(Selected),
    /// Component category of the hammock localization, compared with the localization.
    HammockPi0(Selected),
    /// Dwyer–Kan adjunction check.
    DkAdjunction(Selected),
    /// Whether an adjunction induces an equivalence of localizations.
    LocEquiv(Selected),
    /// Fibration predicate for a functor.
    Fibration(Selected),
}

#[derive(Args)]
struct Common {
    /// Manifest path.
    manifest: String,
    /// Field override: Q, F<p>, or a characteristic.
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    arity_bound: Option<usize>,
    #[arg(long)]
    length_bound: Option<usize>,
    #[arg(long)]
    word_bound: Option<usize>,
    /// Degree window LO:HI.
    #[arg(long, allow_hyphen_values = true)]
    degree_window: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<String>,
    /// Treat indeterminate outcomes as failures.
    #[arg(long)]
    strict: bool,
    /// Worker threads for independent tasks.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct Selected {
    #[command(flatten)]
    common: Common,
    /// Restrict to these entities (repeatable); default is every applicable entity.
    #[arg(long = "entity")]
    entities: Vec<String>,
}

impl Command {
    fn parts(&self) -> (&Common, Option<(Op, &[String])>) {
        let (op, s) = match self {
            Command::Run(c) => return (c, None),
            Command::Validate(s) => (Op::Validate, s),
            Command::Cohomology(s) => (Op::Cohomology, s),
            Command::QuasiEquiv(s) => (Op::QuasiEquiv, s),
            Command::Rectify(s) => (Op::Rectify, s),
            Command::UnitCheck(s) => (Op::UnitCheck, s),
            Command::CounitCheck(s) => (Op::CounitCheck, s),
            Command::Stabilize(s) => (Op::Stabilize, s),
            Command::Localize(s) => (Op::Localize, s),
            Command::HammockPi0(s) => (Op::HammockPi0, s),
            Command::DkAdjunction(s) => (Op::DkAdjunction, s),
            Command::LocEquiv(s) => (Op::LocEquiv, s),
            Command::Fibration(s) => (Op::Fibration, s),
        };
        (&s.common, Some((op, &s.entities)))
    }
}

fn options(c: &Common) -> Result<RunOptions, CliError> {
    let field = c.field.as_ref().map(|f| FieldText::Name(f.clone()).resolve().map_err(CliError::Flag)).transpose()?;
    let degree_window = c.degree_window.as_deref().map(parse_window).transpose().map_err(CliError::Flag)?;
    if let Some((lo, hi)) = degree_window {
        if lo > hi {
            return Err(CliError::Flag(format!("empty degree window {lo}:{hi}")));
        }
    }
    let defaults = Defaults { arity_bound: c.arity_bound, length_bound: c.length_bound, word_bound: c.word_bound, degree_window };
    Ok(RunOptions { field, defaults, strict: c.strict, jobs: c.jobs })
}

fn main_inner(cli: &Cli) -> Result<i32, CliError> {
    let (common, selection) = cli.command.parts();
    let opts = options(common)?;
    let mut manifest = load(&common.manifest, opts.field)?;
    if let Some((op, entities)) = selection {
        select(&mut manifest, op, entities)?;
    }
    let report = run(&manifest, &opts)?;
    let text = report.render();
    match &common.report {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("rectify-kit: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
