//! Command dispatch for the `conal` binary. [`run`] never exits the process;
//! it returns the exit code so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 malformed
//! input or usage error.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use conal::cone::{cone_contains, is_generalized_pure, is_positive_vec, minkowski_norm, psi_matrix, GEOMETRY_TOL};
use conal::io::{
    parse_grid, parse_matrix, parse_measurement, parse_vector, round_sig, vector_json, write_csv, MatrixJson,
};
use conal::measurement::{apply_all_with, validate_kraus, Thresholds};
use conal::tradeoff::{self, VERIFY_TOL};
use conal::{build_basis, embed, selftest, ConalError, Execution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "conal",
    version,
    about = "Cone-coordinate tools for hermitian matrices and qubit measurements"
)]
struct Cli {
    /// Evaluate batches on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the scaled generalized Gell-Mann basis.
    Basis {
        #[arg(long)]
        dim: usize,
    },
    /// Map a hermitian matrix to its cone vector.
    Embed {
        #[arg(long)]
        dim: usize,
        /// Matrix JSON file, or `-` for stdin.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Report cone membership, positivity, purity and Minkowski norm.
    Check {
        /// Vector JSON file, or `-` for stdin.
        #[arg(long)]
        vector: PathBuf,
        #[arg(long, default_value_t = GEOMETRY_TOL)]
        tol: f64,
    },
    /// Print the real adjoint-action matrix of a complex matrix.
    Psi {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Apply a measurement to a state and print every outcome.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        measurement: PathBuf,
    },
    /// Write the information/disturbance sweep as CSV.
    Tradeoff {
        #[arg(long)]
        c: f64,
        /// `a:b:n`, n evenly spaced values from a to b.
        #[arg(long)]
        beta_grid: String,
        /// Cross-check every point against the end-to-end pipeline.
        #[arg(long)]
        verify: bool,
        /// Append per-outcome columns.
        #[arg(long)]
        extended: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the seeded property suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failed command with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<ConalError> for Failure {
    fn from(e: ConalError) -> Self {
        let code = match e {
            ConalError::Validation(_) | ConalError::Domain(_) => EXIT_INVALID,
            _ => EXIT_MALFORMED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_MALFORMED,
            message: format!("{}: {e}", path.display()),
        })?;
    }
    Ok(text)
}

fn in_context<T>(path: &Path, r: conal::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn print_json<W: Write>(out: &mut W, v: &Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values are finite"))?;
    Ok(EXIT_OK)
}

fn basis<W: Write>(out: &mut W, dim: usize) -> Outcome {
    let b = build_basis(dim)?;
    let matrices: Vec<MatrixJson> = b.matrices().iter().map(|m| MatrixJson::from_rows(&m.rows())).collect();
    print_json(out, &json!({ "dim": dim, "matrices": matrices }))
}

fn embed_cmd<W: Write>(out: &mut W, dim: usize, path: &Path) -> Outcome {
    let m = in_context(path, parse_matrix(&read_input(path)?))?;
    if m.dim != dim {
        return Err(ConalError::DimensionMismatch {
            expected: dim,
            found: m.dim,
        }
        .into());
    }
    let h = in_context(path, m.to_hermitian())?;
    print_json(out, &vector_json(&embed(&h, &build_basis(dim)?)?))
}

fn check<W: Write>(out: &mut W, path: &Path, tol: f64) -> Outcome {
    let v = in_context(path, parse_vector(&read_input(path)?))?;
    let basis = build_basis(v.dim())?;
    let in_cone = cone_contains(&v, tol);
    let positive = is_positive_vec(&v, &basis, tol)?;
    let pure = is_generalized_pure(&v, &basis, tol)?;
    let verdict = match (in_cone, positive, pure) {
        (false, _, _) => "outside cone",
        (true, true, true) => "generalized pure state",
        (true, true, false) => "positive",
        (true, false, _) => "inside cone, not positive",
    };
    print_json(
        out,
        &json!({
            "dim": v.dim(),
            "height": round_sig(v.height()),
            "minkowski_norm": round_sig(minkowski_norm(&v)),
            "in_cone": in_cone,
            "positive": positive,
            "generalized_pure": pure,
            "verdict": verdict,
        }),
    )
}

fn psi<W: Write>(out: &mut W, path: &Path) -> Outcome {
    let m = in_context(path, parse_matrix(&read_input(path)?).and_then(|m| m.to_complex()))?;
    let map = psi_matrix(&m, &build_basis(m.dim())?)?;
    print_json(
        out,
        &json!({
            "dim": m.dim(),
            "kind": map.source(),
            "rows": conal::io::real_rows_json(&map.rows()),
        }),
    )
}

fn measure<W: Write>(out: &mut W, state: &Path, meas: &Path, exec: Execution) -> Outcome {
    let rho = in_context(state, parse_matrix(&read_input(state)?).and_then(|m| m.to_hermitian()))?;
    let spec = in_context(meas, parse_measurement(&read_input(meas)?))?;
    let m = in_context(meas, spec.into_measurement())?;
    if m.dim() != rho.dim() {
        return Err(ConalError::DimensionMismatch {
            expected: m.dim(),
            found: rho.dim(),
        }
        .into());
    }
    let report = validate_kraus(m.kraus(), &Thresholds::default())?;
    let records = apply_all_with(&m, &rho, &build_basis(rho.dim())?, exec)?;
    let outcomes: Vec<Value> = records
        .iter()
        .map(|r| {
            json!({
                "index": r.index,
                "probability": round_sig(r.probability),
                "unrescaled": vector_json(&r.unrescaled),
                "rescaled": r.rescaled.as_ref().map(vector_json),
            })
        })
        .collect();
    print_json(
        out,
        &json!({
            "validation": {
                "completeness_residual": round_sig(report.completeness_residual),
                "min_eigenvalues": report.min_eigenvalues.iter().map(|&x| round_sig(x)).collect::<Vec<_>>(),
                "conal_sum": vector_json(&report.conal_sum),
                "passed": report.passed,
            },
            "outcomes": outcomes,
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn tradeoff_cmd<W: Write, E: Write>(
    out: &mut W,
    err: &mut E,
    c: f64,
    grid: &str,
    verify: bool,
    extended: bool,
    output: Option<&Path>,
    exec: Execution,
) -> Outcome {
    let betas = parse_grid(grid)?;
    if let Some(&b) = betas.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(ConalError::InvalidParameter {
            name: "beta",
            value: b,
            reason: "grid must stay within [0, 1]",
        }
        .into());
    }
    let sweep = tradeoff::sweep(c, &betas, verify, exec)?;
    match output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_csv(&mut file, &sweep.points, extended)?;
            file.flush()?;
        }
        None => write_csv(out, &sweep.points, extended)?,
    }
    if let Some(worst) = sweep.worst_residual {
        let ok = worst <= VERIFY_TOL;
        writeln!(
            err,
            "verify: {} points, worst residual {:.3e} (tolerance {:.0e}) {}",
            sweep.points.len(),
            worst,
            VERIFY_TOL,
            if ok { "ok" } else { "FAILED" }
        )?;
        if !ok {
            return Ok(EXIT_INVALID);
        }
    }
    Ok(EXIT_OK)
}

fn selftest_cmd<W: Write>(out: &mut W, seed: u64, exec: Execution) -> Outcome {
    let report = selftest::run(seed, exec);
    for c in &report.checks {
        writeln!(
            out,
            "{} {:<36} {:>4}/{:<4} worst {:.3e} (tol {:.0e})",
            if c.ok() { "PASS" } else { "FAIL" },
            c.name,
            c.passed,
            c.cases,
            c.worst,
            c.tolerance
        )?;
    }
    writeln!(
        out,
        "seed {}: {} passed, {} failed",
        seed,
        report.passed(),
        report.failed()
    )?;
    Ok(if report.failed() == 0 { EXIT_OK } else { EXIT_INVALID })
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match &cli.command {
        Command::Basis { dim } => basis(out, *dim),
        Command::Embed { dim, matrix } => embed_cmd(out, *dim, matrix),
        Command::Check { vector, tol } => check(out, vector, *tol),
        Command::Psi { matrix } => psi(out, matrix),
        Command::Measure { state, measurement } => measure(out, state, measurement, exec),
        Command::Tradeoff {
            c,
            beta_grid,
            verify,
            extended,
            output,
        } => tradeoff_cmd(out, err, *c, beta_grid, *verify, *extended, output.as_deref(), exec),
        Command::Selftest { seed } => selftest_cmd(out, *seed, exec),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
