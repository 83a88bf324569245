//! Command-line driver for `gfkit`.

mod dsl;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::construct::matrix_from_sequence;
use crate::gfengine::{b_sequence, gf2_for_system, gf_for_system, theta_inverse, theta_map, EqualitySpec};
use crate::oracle::{self, ConstraintSystem, SystemKind, VerifyReport};
use crate::series::{infer_product_form, ProductForm};

pub use dsl::{parse_system, render_system, ParseError, ParseErrorKind, SystemDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "gfkit",
    version,
    about = "Product generating functions for constrained compositions"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Truncation degree for oracle checks and expansions.
    #[arg(long, default_value_t = 25, global = true)]
    trunc: u64,

    /// Skip the empirical first-part check for rational systems.
    #[arg(long, global = true)]
    no_guard: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the generating function of a system.
    Gf {
        file: PathBuf,
        /// Do not cross-check against the oracle.
        #[arg(long)]
        no_verify: bool,
    },
    /// Print the odd/even two-variable generating function.
    Gf2 {
        file: PathBuf,
        #[arg(long)]
        no_verify: bool,
    },
    /// Compare the generating function (or a claimed product) with brute-force counts.
    Verify {
        file: PathBuf,
        /// Check `Π 1/(1-q^c_i)` instead of the derived form.
        #[arg(long, value_delimiter = ',')]
        claim: Option<Vec<u64>>,
    },
    /// Apply the bijection λ ↦ (b_i s_i), or its inverse with --parts.
    Theta {
        file: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "parts",
            required_unless_present = "parts"
        )]
        lambda: Option<Vec<BigInt>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        parts: Option<Vec<BigInt>>,
    },
    /// Build a constraint matrix whose generating function is Π 1/(1-q^c_i).
    Inverse {
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<u64>,
    },
    /// Inverse Euler transform of the brute-force series.
    Infer { file: PathBuf },
    /// Coefficients of the generating function up to --trunc.
    Expand { file: PathBuf },
}

struct Ctx<'a> {
    format: Format,
    trunc: u64,
    guard: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// A failure already reported, carrying its exit code.
struct Exit(i32);

type CmdResult = Result<i32, Exit>;

impl Ctx<'_> {
    fn fail(&mut self, msg: impl std::fmt::Display) -> Exit {
        let _ = writeln!(self.err, "error: {msg}");
        Exit(EXIT_ERROR)
    }

    fn emit_json(&mut self, v: &Value) {
        let _ = writeln!(self.out, "{}", serde_json::to_string(v).expect("json values serialize"));
    }

    fn load(&mut self, path: &PathBuf) -> Result<ConstraintSystem, Exit> {
        let text = std::fs::read_to_string(path).map_err(|e| self.fail(format!("{}: {e}", path.display())))?;
        parse_system(&text).map(|d| d.system).map_err(|e| {
            // compiler-style `path:line:col: kind: message`
            let _ = writeln!(self.err, "{}:{e}", path.display());
            Exit(EXIT_ERROR)
        })
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        trunc: cli.trunc,
        guard: !cli.no_guard,
        out,
        err,
    };
    let result = match &cli.command {
        Command::Gf { file, no_verify } => cmd_gf(&mut ctx, file, false, *no_verify),
        Command::Gf2 { file, no_verify } => cmd_gf(&mut ctx, file, true, *no_verify),
        Command::Verify { file, claim } => cmd_verify(&mut ctx, file, claim.as_deref()),
        Command::Theta { file, lambda, parts } => cmd_theta(&mut ctx, file, lambda.as_deref(), parts.as_deref()),
        Command::Inverse { seq } => cmd_inverse(&mut ctx, seq),
        Command::Infer { file } => cmd_infer(&mut ctx, file),
        Command::Expand { file } => cmd_expand(&mut ctx, file),
    };
    result.unwrap_or_else(|Exit(code)| code)
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn form_json(form: &ProductForm) -> (Value, Value) {
    let numerator: Vec<Value> = form
        .numerator()
        .terms()
        .map(|(&(dx, dy), c)| json!(strings([BigInt::from(dx), BigInt::from(dy), c.clone()])))
        .collect();
    let denominator: Vec<Value> = form
        .factor_multiset()
        .into_iter()
        .map(|((o, e), m)| json!(strings([o as u128, e as u128, m as u128])))
        .collect();
    (Value::Array(numerator), Value::Array(denominator))
}

fn mismatch_text(r: &VerifyReport) -> String {
    match &r.first_mismatch {
        None => format!("pass (verified to N={})", r.bound),
        Some(m) => {
            let at = if r.bivariate {
                format!("x^{}*y^{}", m.exponent.0, m.exponent.1)
            } else {
                format!("q^{}", m.exponent.0)
            };
            format!(
                "mismatch at {at}: oracle counts {}, generating function gives {}",
                m.expected, m.actual
            )
        }
    }
}

fn report_json(r: &VerifyReport) -> Value {
    json!({
        "pass": r.pass,
        "bound": r.bound.to_string(),
        "mismatch": r.first_mismatch.as_ref().map(|m| json!({
            "exponent": strings([m.exponent.0, m.exponent.1]),
            "expected": m.expected.to_string(),
            "actual": m.actual.to_string(),
        })),
    })
}

fn cmd_gf(ctx: &mut Ctx<'_>, file: &PathBuf, two_variable: bool, no_verify: bool) -> CmdResult {
    let sys = ctx.load(file)?;
    let form = if two_variable {
        gf2_for_system(&sys)
    } else {
        gf_for_system(&sys, ctx.guard)
    }
    .map_err(|e| ctx.fail(e))?;
    let b = b_sequence(&sys).map_err(|e| ctx.fail(e))?;
    let report = (!no_verify).then(|| oracle::verify(&form, &sys, ctx.trunc));
    let verified = report.as_ref().is_some_and(|r| r.pass);
    match ctx.format {
        Format::Json => {
            let (numerator, denominator) = form_json(&form);
            ctx.emit_json(&json!({
                "numerator": numerator,
                "denominator": denominator,
                "b": strings(&b),
                "verified": verified,
            }));
        }
        Format::Text => {
            let _ = writeln!(ctx.out, "b: {}", strings(&b).join(" "));
            let _ = writeln!(ctx.out, "{form}");
            if let Some(r) = &report {
                let _ = writeln!(ctx.out, "{}", mismatch_text(r));
            }
        }
    }
    Ok(match report {
        Some(r) if !r.pass => EXIT_MISMATCH,
        _ => EXIT_OK,
    })
}

fn cmd_verify(ctx: &mut Ctx<'_>, file: &PathBuf, claim: Option<&[u64]>) -> CmdResult {
    let sys = ctx.load(file)?;
    let form = match claim {
        Some(c) => ProductForm::pure_product(c),
        None => gf_for_system(&sys, ctx.guard),
    }
    .map_err(|e| ctx.fail(e))?;
    let report = oracle::verify(&form, &sys, ctx.trunc);
    match ctx.format {
        Format::Json => {
            let v = report_json(&report);
            ctx.emit_json(&v);
        }
        Format::Text => {
            let _ = writeln!(ctx.out, "{form}");
            let _ = writeln!(ctx.out, "{}", mismatch_text(&report));
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_theta(ctx: &mut Ctx<'_>, file: &PathBuf, lambda: Option<&[BigInt]>, parts: Option<&[BigInt]>) -> CmdResult {
    let sys = ctx.load(file)?;
    let SystemKind::IntegerMatrix { matrix, .. } = sys.kind() else {
        return Err(ctx.fail("theta needs an integer constraint matrix"));
    };
    let (label, result) = match (lambda, parts) {
        (Some(l), _) => ("parts", theta_map(matrix, l)),
        (None, Some(p)) => ("lambda", theta_inverse(matrix, p)),
        (None, None) => return Err(ctx.fail("give --lambda or --parts")),
    };
    let result = result.map_err(|e| ctx.fail(e))?;
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({ label: strings(&result) })),
        Format::Text => {
            let _ = writeln!(ctx.out, "{}", strings(&result).join(","));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_inverse(ctx: &mut Ctx<'_>, seq: &[u64]) -> CmdResult {
    let c = matrix_from_sequence(seq).map_err(|e| ctx.fail(e))?;
    let spec = if c.equality_first {
        EqualitySpec::new([0], vec![])
    } else {
        EqualitySpec::none()
    };
    let sys = ConstraintSystem::integer(c.matrix.clone(), spec).map_err(|e| ctx.fail(e))?;
    let target = ProductForm::pure_product(seq).map_err(|e| ctx.fail(e))?;
    let report = oracle::verify(&target, &sys, ctx.trunc);
    match ctx.format {
        Format::Json => {
            let rows: Vec<Vec<String>> = c.matrix.rows().iter().map(strings).collect();
            let (numerator, denominator) = form_json(&target);
            ctx.emit_json(&json!({
                "matrix": rows,
                "equality_first": c.equality_first,
                "numerator": numerator,
                "denominator": denominator,
                "b": strings(seq),
                "verified": report.pass,
            }));
        }
        Format::Text => {
            let _ = write!(ctx.out, "{}", render_system(&sys));
            if report.pass {
                let _ = writeln!(ctx.out, "verified to N={}", report.bound);
            } else {
                let _ = writeln!(ctx.out, "{}", mismatch_text(&report));
            }
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_infer(ctx: &mut Ctx<'_>, file: &PathBuf) -> CmdResult {
    let sys = ctx.load(file)?;
    let series = oracle::series_by_weight(&sys, ctx.trunc);
    let euler = infer_product_form(&series, ctx.trunc).map_err(|e| ctx.fail(e))?;
    let product = euler.to_product_form();
    match ctx.format {
        Format::Json => {
            let pairs: Vec<Vec<String>> = euler
                .multiplicities()
                .iter()
                .map(|(m, c)| vec![m.to_string(), c.to_string()])
                .collect();
            ctx.emit_json(&json!({
                "multiplicities": pairs,
                "product": product.as_ref().map(|p| p.to_string()),
                "bound": ctx.trunc.to_string(),
            }));
        }
        Format::Text => {
            let _ = writeln!(ctx.out, "{euler}");
            if let Some(p) = product {
                let _ = writeln!(ctx.out, "{p}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_expand(ctx: &mut Ctx<'_>, file: &PathBuf) -> CmdResult {
    let sys = ctx.load(file)?;
    let form = gf_for_system(&sys, ctx.guard).map_err(|e| ctx.fail(e))?;
    let coeffs = form.expand(ctx.trunc).univariate_coeffs();
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({ "coefficients": strings(&coeffs) })),
        Format::Text => {
            let _ = writeln!(ctx.out, "{}", strings(&coeffs).join(" "));
        }
    }
    Ok(EXIT_OK)
}
