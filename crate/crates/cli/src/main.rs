use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use perfect_forms::report::{
    analyze_field, fields_in_range, file_name, has_valid_document, load_dir, save_document, verify_document,
    verify_type_collisions, write_stats, Violation,
};
use perfect_forms::Field;

#[derive(Parser, Debug)]
#[command(name = "perfect-forms", version, about = "Perfect binary Hermitian forms over imaginary quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate perfect forms and write one JSON report per field.
    Enumerate(EnumerateArgs),
    /// Summarize a directory of reports as CSV tables.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check stored reports. Prints violations as JSON on stdout.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        level: u8,
    },
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// A single field Q(sqrt(-d)).
    #[arg(long, conflicts_with_all = ["disc_max", "disc_range"])]
    d: Option<i64>,
    /// All fields with |disc| <= N (the default is 500).
    #[arg(long, conflicts_with = "disc_range")]
    disc_max: Option<u64>,
    /// All fields with A <= |disc| <= B.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    disc_range: Option<Vec<u64>>,
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    /// Worker threads; fields are distributed across them.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Recompute fields that already have a valid report.
    #[arg(long)]
    force: bool,
}

enum Outcome {
    Written(f64),
    Skipped,
    Failed(String),
}

fn selected_fields(args: &EnumerateArgs) -> Result<Vec<Field>> {
    if let Some(d) = args.d {
        return Ok(vec![Field::new(d)?]);
    }
    let (lo, hi) = match (&args.disc_range, args.disc_max) {
        (Some(r), _) => (r[0], r[1]),
        (None, Some(n)) => (1, n),
        (None, None) => (1, 500),
    };
    if lo > hi {
        bail!("empty discriminant range {lo}..{hi}");
    }
    Ok(fields_in_range(lo, hi))
}

fn enumerate(args: &EnumerateArgs) -> Result<bool> {
    let fields = selected_fields(args)?;
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        fields
            .par_iter()
            .map(|f| {
                let path = args.out.join(file_name(f));
                if !args.force && has_valid_document(&path, f) {
                    return Outcome::Skipped;
                }
                match analyze_field(f).and_then(|doc| save_document(&args.out, &doc).map(|_| doc)) {
                    Ok(doc) => Outcome::Written(doc.report.wall_time_seconds),
                    Err(e) => Outcome::Failed(e.to_string()),
                }
            })
            .collect()
    });

    let (mut written, mut skipped, mut failed) = (0, 0, 0);
    for (f, o) in fields.iter().zip(&outcomes) {
        match o {
            Outcome::Written(t) => {
                written += 1;
                eprintln!("disc {:>5}  done in {t:.2}s", f.discriminant);
            }
            Outcome::Skipped => skipped += 1,
            Outcome::Failed(e) => {
                failed += 1;
                eprintln!("disc {:>5}  FAILED: {e}", f.discriminant);
            }
        }
    }
    eprintln!("{} fields: {written} written, {skipped} skipped, {failed} failed", fields.len());
    Ok(failed == 0)
}

fn verify(input: &Path, level: u8) -> Result<bool> {
    let docs = load_dir(input)?;
    if docs.is_empty() {
        bail!("no reports in {}", input.display());
    }
    let mut violations: Vec<Violation> = docs.par_iter().flat_map(|d| verify_document(d, level)).collect();
    violations.extend(verify_type_collisions(&docs));
    println!("{}", serde_json::to_string_pretty(&violations)?);
    eprintln!("{} reports checked at level {level}: {} violations", docs.len(), violations.len());
    Ok(violations.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Enumerate(args) => enumerate(&args),
        Command::Stats { input, out } => {
            let docs = load_dir(&input)?;
            for p in write_stats(&docs, &out)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::Verify { input, level } => verify(&input, level),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
