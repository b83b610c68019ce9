//! `tspp`: expand the series, prove congruences from instance files, and run
//! the regression table.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 proof failure.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use tspp_core::instance::{EtaSpecFile, InstanceFile};
use tspp_core::prover::{parse_sequence_name, regression_suite, run_instance, ProverError, RegressionConfig};
use tspp_core::qseries::{eta_quotient, CoefficientRing, TruncatedSeries};
use tspp_core::tspp::sequence_series;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PROOF_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "tspp", version, about = "Congruences for the 1-shell TSPP counting function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first coefficients of a series as `n<TAB>value` lines.
    Expand {
        /// One of f, g, gap (g_{alpha,p}) or eta (needs --spec).
        #[arg(long)]
        seq: String,
        /// Largest exponent to print.
        #[arg(long)]
        order: usize,
        /// Reduce coefficients modulo this integer.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long)]
        alpha: Option<u32>,
        #[arg(long)]
        p: Option<u64>,
        /// TOML file with `M` and `r` describing an eta quotient.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prove the congruence described by an instance file and write a JSON report.
    Prove {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in regression table.
    Regress {
        /// Largest index of f for the modular oracle checks; 0 skips them.
        #[arg(long, default_value_t = 50_000)]
        oracle_max: usize,
        /// Largest index for the exact support and identity checks.
        #[arg(long, default_value_t = 5_000)]
        exact_max: usize,
        /// Largest index for the generator congruences.
        #[arg(long, default_value_t = 2_000)]
        generator_max: usize,
        /// Extra instance files to prove alongside the shipped ones.
        #[arg(long = "instance")]
        instances: Vec<PathBuf>,
    },
}

/// An error paired with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_USAGE, error: error.into() }
}

fn internal(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_CHECK_FAILED, error: error.into() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Expand { seq, order, modulus, alpha, p, spec, out } => {
            expand(&seq, order, modulus, alpha, p, spec.as_deref(), out.as_deref())
        }
        Command::Prove { instance, out } => prove(&instance, &out),
        Command::Regress { oracle_max, exact_max, generator_max, instances } => {
            regress(oracle_max, exact_max, generator_max, &instances)
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("tspp: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)
}

fn expand(
    seq: &str,
    order: usize,
    modulus: Option<u64>,
    alpha: Option<u32>,
    p: Option<u64>,
    spec: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let ring = match modulus {
        None => CoefficientRing::Integers,
        Some(u) => CoefficientRing::residues(u).map_err(usage)?,
    };
    let series = if seq == "eta" {
        let path = spec.ok_or_else(|| usage(anyhow::anyhow!("--seq eta needs --spec FILE")))?;
        let r = EtaSpecFile::parse(&read(path)?).with_context(|| format!("in {}", path.display())).map_err(usage)?;
        eta_quotient(&r, order, ring).map_err(usage)?
    } else {
        if spec.is_some() {
            return Err(usage(anyhow::anyhow!("--spec only applies to --seq eta")));
        }
        let sequence = parse_sequence_name(seq, alpha, p).map_err(|e| usage(anyhow::anyhow!(e)))?;
        sequence_series(sequence, order, ring).map_err(usage)?
    };

    match out {
        None => write_series(&series, io::stdout().lock()),
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display())).map_err(internal)?;
            write_series(&series, file)
        }
    }
    .map_err(internal)?;
    Ok(0)
}

fn write_series(series: &TruncatedSeries, sink: impl Write) -> Result<()> {
    let mut w = BufWriter::new(sink);
    if let Some(values) = series.residues() {
        for (n, c) in values.iter().enumerate() {
            writeln!(w, "{n}\t{c}")?;
        }
    } else {
        for n in 0..=series.order() {
            writeln!(w, "{n}\t{}", series.coeff(n))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn prove(instance: &Path, out: &Path) -> Result<u8, Failure> {
    let text = read(instance)?;
    let context = || format!("in {}", instance.display());
    let validated = InstanceFile::parse(&text).and_then(|f| f.validate()).with_context(context).map_err(usage)?;
    let report = match run_instance(&validated) {
        Ok(report) => report,
        Err(e @ (ProverError::InvalidInstance(_) | ProverError::Instance(_) | ProverError::MissingHints)) => {
            return Err(usage(anyhow::Error::new(e).context(context())))
        }
        Err(e) => return Err(internal(e)),
    };
    fs::write(out, report.to_json()).with_context(|| format!("cannot write {}", out.display())).map_err(internal)?;

    println!("{}: {}", report.claim, report.verdict);
    for cert in &report.certificates {
        println!(
            "  m = {}, orbit {:?}, floor(v) = {}, expansion order {}",
            cert.instance.m(),
            cert.orbit,
            cert.v_floor,
            cert.expansion_order.map_or("-".to_string(), |o| o.to_string())
        );
    }
    for cited in &report.assumed_citations {
        println!("  assumes {}", cited.label);
    }
    Ok(if report.verdict.is_success() { 0 } else { EXIT_PROOF_FAILED })
}

fn regress(oracle_max: usize, exact_max: usize, generator_max: usize, extra: &[PathBuf]) -> Result<u8, Failure> {
    let mut config = RegressionConfig { oracle_max, exact_max, generator_max, ..RegressionConfig::default() };
    for path in extra {
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        config.instances.push((name, read(path)?));
    }
    let summary = regression_suite(&config);
    print!("{}", summary.table());
    Ok(if summary.passed() { 0 } else { EXIT_CHECK_FAILED })
}
