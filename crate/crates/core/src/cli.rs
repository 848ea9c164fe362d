//! Subcommand drivers behind the `grassmann` binary.
//!
//! [`run`] never touches the process: it returns the exit code and the text
//! destined for stdout/stderr, which keeps the binary a three-line wrapper
//! and lets tests drive every subcommand in-process.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 domain error, 3 a
//! verification found a counterexample.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{verify_field_axioms, FieldReport, LawTally, SampleDomain};
use crate::expr::{self, EvalContext, Mode, Value};
use crate::exterior::{verify_anticommutation, AnticommutationReport};
use crate::matrix::{lemma_grid_check, verify_phi_homomorphism, GridReport, HomomorphismReport};
use crate::moyal::{build_kernel, moyal_commutator, moyal_expand, MultiPoly, StarKernel};
use crate::star::{
    check_odd, find_nonassociativity_witness_within, find_two_sided_identity, omega_within, star,
    verify_star_laws, AssociativityWitness, OddFunctionSpec, OddnessReport, OmegaMatrix,
    StarLawReport, ThetaLabel,
};
use crate::{ComplexValue, Error, Tolerance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

pub const DEFAULT_SEED: u64 = 0x5EED_0F7E;

#[derive(Debug, Parser)]
#[command(
    name = "grassmann",
    version,
    about = "Exterior algebra, nilpotent 2x2 representations, odd-function star products and Moyal expansions"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Absolute comparison tolerance
    #[arg(long, global = true, default_value_t = crate::complex::DEFAULT_EPSILON)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random sample
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, conflicts_with = "random_seed")]
    seed: u64,
    /// Draw a fresh seed from the OS instead of the fixed default
    #[arg(long, global = true)]
    random_seed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Anticommutation of generators and nilpotency of random odd elements
    CheckAnticommute {
        /// Check all generator pairs θi, θj with i, j up to this bound
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        generators: u32,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Random odd elements use generators θ1..θ<max-generators>
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=16))]
        max_generators: u32,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(0..=1_000_000))]
        coeff_bound: i64,
    },
    /// Field axioms for complex numbers and the homomorphism a+ib -> [[a,-b],[b,a]]
    RepVerify {
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Exhaustive check of the nilpotent-family uniqueness statement
    LemmaCheck {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=200))]
        grid: u32,
    },
    /// Oddness, anticommutation and groupoid structure of θ1*θ2 = F(z1-z2)
    StarEval {
        #[arg(long = "F", default_value = "identity")]
        function: String,
        /// Label pool for the star table and the groupoid searches
        #[arg(long, default_value = "0,0,1")]
        points: String,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Omega_ij = -2i F(z_i - z_j) over the given points
    OmegaTable {
        #[arg(long = "F", default_value = "identity")]
        function: String,
        #[arg(long)]
        points: String,
    },
    /// Moyal star product of two polynomials in x1..xn, n = number of points
    MoyalExpand {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long = "F", default_value = "identity")]
        function: String,
        #[arg(long)]
        points: String,
        /// Also report f*g - g*f
        #[arg(long)]
        commutator: bool,
    },
    /// Evaluate an expression
    Eval {
        expression: String,
        #[arg(long, value_enum, default_value_t = Mode::Exterior)]
        mode: Mode,
        #[arg(long = "F", default_value = "identity")]
        function: String,
        /// Bind a star-mode label, e.g. theta_1=2+i (repeatable)
        #[arg(long = "label")]
        labels: Vec<String>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Usage(_) | Error::InvalidOddFunction(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

struct Ctx {
    tol: Tolerance,
    format: Format,
    seed: u64,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn emit<T: Serialize>(
        &self,
        report: &T,
        text: impl FnOnce() -> String,
        failed: bool,
    ) -> Outcome {
        let stdout = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => text(),
        };
        Outcome {
            code: if failed { EXIT_COUNTEREXAMPLE } else { EXIT_OK },
            stdout,
            stderr: String::new(),
        }
    }
}

fn execute(cli: Cli) -> Result<Outcome, Error> {
    let tol = Tolerance::new(cli.global.tolerance).map_err(|e| Error::Usage(e.to_string()))?;
    Tolerance::set_global(tol);
    let seed = if cli.global.random_seed {
        rand::random()
    } else {
        cli.global.seed
    };
    let ctx = Ctx {
        tol,
        format: cli.global.format,
        seed,
    };
    match cli.command {
        Command::CheckAnticommute {
            generators,
            samples,
            max_generators,
            coeff_bound,
        } => check_anticommute(
            &ctx,
            generators,
            samples as usize,
            max_generators,
            coeff_bound,
        ),
        Command::RepVerify { samples } => rep_verify(&ctx, samples as usize),
        Command::LemmaCheck { grid } => lemma_check(&ctx, grid),
        Command::StarEval {
            function,
            points,
            samples,
        } => star_eval(&ctx, &function, &points, samples as usize),
        Command::OmegaTable { function, points } => omega_table(&ctx, &function, &points),
        Command::MoyalExpand {
            f,
            g,
            function,
            points,
            commutator,
        } => moyal(&ctx, &f, &g, &function, &points, commutator),
        Command::Eval {
            expression,
            mode,
            function,
            labels,
        } => eval(&ctx, &expression, mode, &function, &labels),
    }
}

fn tally_line(out: &mut String, t: &LawTally) {
    let _ = writeln!(
        out,
        "  {:<40} checked {:>7}  failures {:>5}  worst {:.3e}",
        t.law, t.checked, t.failures, t.worst_deviation
    );
}

fn check_anticommute(
    ctx: &Ctx,
    generators: u32,
    samples: usize,
    max_generators: u32,
    coeff_bound: i64,
) -> Result<Outcome, Error> {
    let report: AnticommutationReport = verify_anticommutation(
        &mut ctx.rng(),
        generators,
        samples,
        max_generators,
        coeff_bound,
        ctx.tol,
    )?;
    let failed = report.failures() > 0;
    Ok(ctx.emit(
        &report,
        || {
            let mut s = format!(
                "exterior algebra: generators <= {generators}, {samples} random odd elements over {max_generators} generators\n"
            );
            tally_line(&mut s, &report.generator_pairs);
            tally_line(&mut s, &report.odd_squares);
            tally_line(&mut s, &report.odd_pairs);
            let _ = writeln!(s, "{} counterexamples", report.failures());
            s
        },
        failed,
    ))
}

#[derive(Serialize)]
struct RepReport {
    seed: u64,
    field: Vec<FieldReport>,
    homomorphism: Vec<HomomorphismReport>,
}

fn rep_verify(ctx: &Ctx, samples: usize) -> Result<Outcome, Error> {
    let domains = [
        SampleDomain::IntegerGrid { bound: 10 },
        SampleDomain::Uniform { lo: -1.0, hi: 1.0 },
    ];
    let mut rng = ctx.rng();
    let field: Vec<FieldReport> = domains
        .iter()
        .map(|d| verify_field_axioms(&mut rng, samples, *d, ctx.tol))
        .collect();
    let homomorphism: Vec<HomomorphismReport> = domains
        .iter()
        .map(|d| verify_phi_homomorphism(&mut rng, samples, *d, ctx.tol))
        .collect();
    let failures: usize = field.iter().map(FieldReport::failures).sum::<usize>()
        + homomorphism
            .iter()
            .map(HomomorphismReport::failures)
            .sum::<usize>();
    let report = RepReport {
        seed: ctx.seed,
        field,
        homomorphism,
    };
    Ok(ctx.emit(
        &report,
        || {
            let mut s = String::new();
            for (f, h) in report.field.iter().zip(&report.homomorphism) {
                let _ = writeln!(s, "{:?}, {samples} samples", f.domain);
                for law in &f.laws {
                    tally_line(&mut s, law);
                }
                tally_line(&mut s, &h.additive);
                tally_line(&mut s, &h.multiplicative);
            }
            let _ = writeln!(s, "{failures} counterexamples");
            s
        },
        failures > 0,
    ))
}

fn lemma_check(ctx: &Ctx, grid: u32) -> Result<Outcome, Error> {
    let report: GridReport = lemma_grid_check(grid)?;
    let failed = !report.counterexamples.is_empty();
    Ok(ctx.emit(
        &report,
        || {
            let mut s = format!(
                "N(a,b) = [[ab, b^2], [-a^2, -ab]], a,b,c,d nonzero in [-{grid}, {grid}]\n"
            );
            let _ = writeln!(s, "pairs checked:      {}", report.pairs_checked);
            let _ = writeln!(s, "anticommuting:      {}", report.classes.anticommuting);
            let _ = writeln!(
                s,
                "non-anticommuting:  {}",
                report.classes.non_anticommuting
            );
            for c in &report.counterexamples {
                let _ = writeln!(s, "counterexample: {c:?}");
            }
            let _ = writeln!(s, "{} counterexamples", report.counterexamples.len());
            s
        },
        failed,
    ))
}

fn parse_function(text: &str) -> Result<OddFunctionSpec, Error> {
    text.parse()
}

#[derive(Serialize)]
struct StarEvalReport {
    function: OddFunctionSpec,
    seed: u64,
    oddness: OddnessReport,
    laws: StarLawReport,
    pool: Vec<ThetaLabel>,
    /// `table[a][b] = pool[a] * pool[b]`
    table: Vec<Vec<ComplexValue>>,
    nonassociativity_witness: Option<AssociativityWitness>,
    two_sided_identity: Option<usize>,
}

fn star_eval(ctx: &Ctx, function: &str, points: &str, samples: usize) -> Result<Outcome, Error> {
    let f = parse_function(function)?;
    let pool: Vec<ThetaLabel> = expr::parse_points(points)?
        .into_iter()
        .map(ThetaLabel::new)
        .collect();
    let domain = SampleDomain::Uniform { lo: -2.0, hi: 2.0 };
    let mut rng = ctx.rng();
    let oddness = check_odd(&f, &mut rng, samples, domain, ctx.tol)?;
    let laws = verify_star_laws(&f, &mut rng, samples, domain, ctx.tol);
    let table = pool
        .iter()
        .map(|&a| pool.iter().map(|&b| star(&f, a, b)).collect())
        .collect();
    let nonassociativity_witness = if pool.len() >= 3 {
        find_nonassociativity_witness_within(&f, &pool, ctx.tol)?
    } else {
        None
    };
    let two_sided_identity = find_two_sided_identity(&f, &pool, ctx.tol);
    let failed = !oddness.passed() || laws.failures() > 0;
    let report = StarEvalReport {
        function: f,
        seed: ctx.seed,
        oddness,
        laws,
        pool,
        table,
        nonassociativity_witness,
        two_sided_identity,
    };
    Ok(ctx.emit(
        &report,
        || {
            let mut s = format!("F = {}\n", report.function);
            let _ = writeln!(s, "  F(0) = 0: {}", report.oddness.zero_maps_to_zero);
            tally_line(&mut s, &report.oddness.oddness);
            tally_line(&mut s, &report.laws.anticommutation);
            tally_line(&mut s, &report.laws.self_product_zero);
            tally_line(&mut s, &report.laws.commutator_matches_omega);
            let _ = writeln!(s, "star table (row * column):");
            for (a, row) in report.pool.iter().zip(&report.table) {
                let cells: Vec<String> = row.iter().map(|z| z.to_string()).collect();
                let _ = writeln!(s, "  {a}: {}", cells.join("  "));
            }
            match &report.nonassociativity_witness {
                Some(w) => {
                    let _ = writeln!(
                        s,
                        "non-associative: ({} * {}) * {} = {}, {} * ({} * {}) = {}",
                        w.labels[0],
                        w.labels[1],
                        w.labels[2],
                        w.left,
                        w.labels[0],
                        w.labels[1],
                        w.labels[2],
                        w.right
                    );
                }
                None => {
                    let _ = writeln!(s, "no non-associativity witness in pool");
                }
            }
            match report.two_sided_identity {
                Some(i) => {
                    let _ = writeln!(s, "two-sided identity: {}", report.pool[i]);
                }
                None => {
                    let _ = writeln!(s, "no two-sided identity in pool");
                }
            }
            s
        },
        failed,
    ))
}

fn omega_table(ctx: &Ctx, function: &str, points: &str) -> Result<Outcome, Error> {
    let f = parse_function(function)?;
    let pts = expr::parse_points(points)?;
    let omega: OmegaMatrix = omega_within(&f, &pts, ctx.tol)?;
    Ok(ctx.emit(
        &omega,
        || {
            let mut s = format!("Omega_ij = -2i F(z_i - z_j), F = {f}\n");
            for (z, row) in omega.points.iter().zip(&omega.entries) {
                let cells: Vec<String> = row.iter().map(|w| w.to_string()).collect();
                let _ = writeln!(s, "  z = {z}: {}", cells.join("  "));
            }
            s
        },
        false,
    ))
}

#[derive(Serialize)]
struct MoyalReport {
    function: OddFunctionSpec,
    points: Vec<ComplexValue>,
    kernel: StarKernel,
    f: MultiPoly,
    g: MultiPoly,
    product: MultiPoly,
    orders: Vec<MultiPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    commutator: Option<MultiPoly>,
}

fn moyal(
    ctx: &Ctx,
    f_text: &str,
    g_text: &str,
    function: &str,
    points: &str,
    with_commutator: bool,
) -> Result<Outcome, Error> {
    let func = parse_function(function)?;
    let pts = expr::parse_points(points)?;
    let n = pts.len();
    let f = expr::parse_poly(f_text, n)?;
    let g = expr::parse_poly(g_text, n)?;
    let kernel = build_kernel(&func, &pts)?;
    let expansion = moyal_expand(&f, &g, &kernel)?;
    let commutator = if with_commutator {
        Some(moyal_commutator(&f, &g, &kernel)?)
    } else {
        None
    };
    let report = MoyalReport {
        function: func,
        points: pts,
        kernel,
        f,
        g,
        product: expansion.product,
        orders: expansion.orders,
        commutator,
    };
    Ok(ctx.emit(
        &report,
        || {
            let mut s = format!("f = {}\ng = {}\n", report.f, report.g);
            for (m, p) in report.orders.iter().enumerate() {
                let _ = writeln!(s, "  order {m}: {p}");
            }
            let _ = writeln!(s, "f*g = {}", report.product);
            if let Some(c) = &report.commutator {
                let _ = writeln!(s, "f*g - g*f = {c}");
            }
            s
        },
        false,
    ))
}

fn parse_label(text: &str) -> Result<(u32, ComplexValue), Error> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| Error::Usage(format!("--label expects theta_k=<complex>, got {text:?}")))?;
    let k = name
        .trim()
        .strip_prefix("theta_")
        .and_then(|k| k.parse::<u32>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::Usage(format!("bad label name {:?}", name.trim())))?;
    Ok((k, expr::parse_complex(value)?))
}

#[derive(Serialize)]
struct EvalReport<'a> {
    expression: &'a str,
    mode: Mode,
    result: Value,
}

fn eval(
    ctx: &Ctx,
    expression: &str,
    mode: Mode,
    function: &str,
    labels: &[String],
) -> Result<Outcome, Error> {
    let ast = expr::parse(expression)?;
    let labels = labels
        .iter()
        .map(|l| parse_label(l))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    let ectx = EvalContext {
        mode,
        function: parse_function(function)?,
        labels,
    };
    let result = expr::eval(&ast, &ectx)?;
    let report = EvalReport {
        expression,
        mode,
        result,
    };
    Ok(ctx.emit(
        &report,
        || format!("{} : {}\n", report.result, report.result.type_name()),
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run(["grassmann", "no-such-command"]).code, EXIT_USAGE);
        assert_eq!(
            run(["grassmann", "lemma-check", "--grid", "0"]).code,
            EXIT_USAGE
        );
        assert_eq!(
            run(["grassmann", "lemma-check", "--tolerance", "-1"]).code,
            EXIT_USAGE
        );
        assert_eq!(run(["grassmann", "--help"]).code, EXIT_OK);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(
            parse_label("theta_2=1+i").unwrap(),
            (2, ComplexValue::new(1., 1.).unwrap())
        );
        assert!(parse_label("theta_0=1").is_err());
        assert!(parse_label("x=1").is_err());
        assert!(parse_label("theta_1").is_err());
    }
}
