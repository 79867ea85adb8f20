use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cmclass::cli::{
    default_sweep_bound, parse_field_spec, run_table, verdict_json, verify_reports, write_minus_report,
    write_reports, zeta_range_specs, Options, OutputFormat, TableKind, VerifyKind,
};
use cmclass::fieldlat::DEFAULT_MAX_DEGREE;
use cmclass::hminus::minus_class_number;
use cmclass::unitindex::hasse_unit_index;
use cmclass::Error;

#[derive(Parser)]
#[command(name = "cmclass", version, about = "Minus class numbers and unit indices of abelian CM-fields")]
struct Cli {
    /// Largest field degree any computation may build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    /// Exit nonzero when a table row fails.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for sweeps and tables (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

impl Format {
    fn get(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Human
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Hminus,
    Unitindex,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Masley,
    Metsankyla,
    V4,
    Counterexample,
    Martinet,
}

#[derive(Subcommand)]
enum Command {
    /// Hasse unit index Q(K) and the capitulation indicator.
    UnitIndex {
        #[arg(long)]
        field: String,
        #[arg(long = "override", value_parser = clap::value_parser!(u8).range(1..=2))]
        q_override: Option<u8>,
    },
    /// Minus class number h^-(K).
    Hminus {
        #[arg(long)]
        field: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        q_override: Option<u8>,
        #[command(flatten)]
        format: Format,
    },
    /// Run a theorem check or a sweep of checks.
    Verify {
        check: CheckArg,
        /// Check parameters: `masley m n`, `metsankyla L1 L2`, `v4 d1 d2`,
        /// `counterexample 1 d1 d2`, `counterexample 2 m`, `martinet p`.
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
        #[arg(long)]
        sweep: bool,
        /// Sweep bound (defaults depend on the check).
        #[arg(long)]
        max: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// One row per field.
    Table {
        kind: TableArg,
        /// Inclusive range of cyclotomic levels `a..b`; m = 2 mod 4 skipped.
        #[arg(long)]
        zeta_range: Option<String>,
        #[arg(long = "spec")]
        specs: Vec<String>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        q_override: Option<u8>,
        #[command(flatten)]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<u8, Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let write_json = |out: &mut dyn Write, v: &serde_json::Value| -> Result<(), Error> {
        writeln!(out, "{}", serde_json::to_string_pretty(v).expect("valid json"))
            .map_err(|e| Error::InvalidArgument(e.to_string()))
    };
    match cli.command {
        Command::UnitIndex { field, q_override } => {
            let k = parse_field_spec(&field)?.build(cli.max_degree)?;
            let v = hasse_unit_index(&k, q_override)?;
            write_json(&mut out, &verdict_json(&field, &k, &v))?;
            Ok(0)
        }
        Command::Hminus {
            field,
            q_override,
            format,
        } => {
            let k = parse_field_spec(&field)?.build(cli.max_degree)?;
            let r = minus_class_number(&k, q_override)?;
            write_minus_report(&field, &r, format.get(), &mut out)?;
            Ok(0)
        }
        Command::Verify {
            check,
            params,
            sweep,
            max,
            json,
        } => {
            let kind = match check {
                CheckArg::Masley => VerifyKind::Masley,
                CheckArg::Metsankyla => VerifyKind::Metsankyla,
                CheckArg::V4 => VerifyKind::V4,
                CheckArg::Counterexample => VerifyKind::Counterexample,
                CheckArg::Martinet => VerifyKind::Martinet,
            };
            let bound = sweep.then(|| max.unwrap_or_else(|| default_sweep_bound(kind)));
            let reports = verify_reports(kind, &params, bound, cli.max_degree)?;
            Ok(write_reports(&reports, json, &mut out)? as u8)
        }
        Command::Table {
            kind,
            zeta_range,
            mut specs,
            q_override,
            format,
        } => {
            if let Some(r) = zeta_range {
                let mut range = zeta_range_specs(&r)?;
                range.append(&mut specs);
                specs = range;
            }
            let opts = Options {
                max_degree: cli.max_degree,
                q_override,
                strict: cli.strict,
                format: format.get(),
            };
            let kind = match kind {
                TableArg::Hminus => TableKind::HMinus,
                TableArg::Unitindex => TableKind::UnitIndex,
            };
            Ok(run_table(kind, &specs, &opts, &mut out)? as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
