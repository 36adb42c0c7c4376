use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cwt_asymptotics::distributions::moment_sequence;
use cwt_asymptotics::error::Error;
use cwt_asymptotics::quadrature::QuadratureSpec;
use cwt_asymptotics::scenario::{
    builtin_scenario, list_builtins, load_scenario, moment_rows, parse_input_descriptor,
    parse_scenario, run_scenario, write_csv,
};
use cwt_asymptotics::transform::{cwt_direct, cwt_fourier};
use cwt_asymptotics::wavelets::Wavelet;

/// Wavelet transforms of distributions and their moment expansions.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Directory for CSV artifacts.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a built-in scenario by name).
    Run { scenario: String },
    /// List built-in wavelets, input kinds and scenarios.
    List,
    /// Print the moments of an input, e.g. `bump:center=0.3,radius=1`.
    Moments {
        input: String,
        #[arg(long)]
        up_to: usize,
    },
    /// Evaluate the transform of an input at one (a, b).
    Cwt {
        input: String,
        #[arg(long)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value = "mexican-hat")]
        wavelet: String,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Fourier,
    Both,
}

const DEFAULT_OUT_DIR: &str = "cwt-output";

/// Problems with what the user asked for exit with 2; failures while computing with 1.
fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Parse { .. }
        | Error::Config(_)
        | Error::Domain(_)
        | Error::Unsupported(_)
        | Error::Truncation { .. }
        | Error::MomentDivergence { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    exit_code(&e)
}

fn print_csv(header: &[&str], rows: &[Vec<String>]) {
    println!("{}", header.join(","));
    for row in rows {
        println!("{}", row.join(","));
    }
}

fn emit(
    out_dir: Option<&Path>,
    file: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), Error> {
    print_csv(header, rows);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        write_csv(&dir.join(file), header, rows)?;
    }
    Ok(())
}

fn run(scenario: &str, out_dir: &Path) -> ExitCode {
    let path = Path::new(scenario);
    let loaded = if !path.exists() {
        match builtin_scenario(scenario) {
            Some(text) => parse_scenario(text, Path::new(&format!("builtin:{scenario}"))),
            None => load_scenario(path),
        }
    } else {
        load_scenario(path)
    };
    let s = match loaded {
        Ok(s) => s,
        Err(e @ Error::Io { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => return fail(e),
    };
    let report = match run_scenario(&s, out_dir) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    print!("{}", report.summary());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("assertion failures in scenario {}:", report.scenario);
        eprint!("{}", report.failure_table());
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli.out_dir.as_deref();
    let result = match cli.command {
        Command::Run { scenario } => {
            return run(&scenario, out_dir.unwrap_or(Path::new(DEFAULT_OUT_DIR)));
        }
        Command::List => {
            print!("{}", list_builtins());
            Ok(())
        }
        Command::Moments { input, up_to } => parse_input_descriptor(&input).and_then(|f| {
            let m = moment_sequence(&f, up_to);
            if let Some(reason) = m.missing_reason() {
                eprintln!("note: {reason}");
            }
            emit(
                out_dir,
                "moments.csv",
                &["alpha", "moment", "provenance"],
                &moment_rows(&m),
            )
        }),
        Command::Cwt {
            input,
            a,
            b,
            wavelet,
            method,
        } => parse_input_descriptor(&input).and_then(|f| {
            let w = Wavelet::from_name(&wavelet)?;
            let spec = QuadratureSpec::default();
            let mut rows = Vec::new();
            if matches!(method, Method::Direct | Method::Both) {
                let p = cwt_direct(&f, &w, a, b, &spec)?;
                rows.push(vec![
                    format!("{:?}", p.a),
                    format!("{:?}", p.b),
                    format!("{:?}", p.value),
                    p.method.to_string(),
                ]);
            }
            if matches!(method, Method::Fourier | Method::Both) {
                let p = cwt_fourier(&f, &w, a, b, &spec)?;
                rows.push(vec![
                    format!("{:?}", p.a),
                    format!("{:?}", p.b),
                    format!("{:?}", p.value),
                    p.method.to_string(),
                ]);
            }
            emit(out_dir, "cwt.csv", &["a", "b", "value", "method"], &rows)
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
