//! Command-line front end. [`run`] takes the argument list and output sinks
//! so it can be driven from tests; the binary is a thin wrapper around it.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::Rat;
use crate::forge::{self, CheckStatus, VerificationReport};
use crate::matrix::TMatrix;
use crate::patcher::{factor_simultaneous, verify_patch, PatchProblem};
use crate::random;
use crate::rootdata::RootDatum;
use crate::seed::Family;
use crate::series::TSeries;
use crate::tower::{self, PointSet, Reconstruction};
use crate::wire;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "galois-patch", version, about = "Build and verify differential equations with prescribed parameterized Galois group")]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct an equation bundle for a group and write it as JSON.
    Build {
        /// A1, A2, ..., A8 or C2.
        #[arg(long)]
        group: String,
        /// Comma-separated rationals; defaults to 0, 1, ..., 4m-1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<String>>,
        #[arg(long, default_value_t = forge::DEFAULT_PRECISION)]
        prec: i64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the local matrices as an input file for `factor`.
        #[arg(long)]
        factor_input: Option<PathBuf>,
    },
    /// Recompute every check of a bundle from its raw data.
    Verify { path: PathBuf },
    /// Factor matrices congruent to the identity mod t simultaneously.
    Factor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Springer identity for every root and the generation hypotheses.
    Rootcheck {
        #[arg(long)]
        group: String,
    },
    /// Search for a rational closed form of a series.
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        /// Degree bound in x; without it the standard schedule is used.
        #[arg(long)]
        dx: Option<usize>,
        /// Number of t-orders to use (default: the precision of the input).
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Seeded randomized checks of the series, inverse and JSON layers.
    Selftest {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if code == EXIT_PASS {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let res = pool.install(|| dispatch(&cli, out));
    match res {
        Ok(code) => code,
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Invalid input exits with 2; a computation that fails its contract with 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::FormatVersion(_)
        | Error::Io(_)
        | Error::InvalidPoints(_)
        | Error::InvalidPrecision(_)
        | Error::WrongPointCount { .. }
        | Error::UnsupportedGroup(_)
        | Error::UnknownRoot(_)
        | Error::Shape(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

enum CliError {
    Io(io::Error),
    Lib(Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult = std::result::Result<i32, CliError>;

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Build {
            group,
            points,
            prec,
            out: path,
            factor_input,
        } => cmd_build(group, points.as_deref(), *prec, path, factor_input.as_deref(), out),
        Command::Verify { path } => cmd_verify(path, out),
        Command::Factor { input, out: path } => cmd_factor(input, path.as_deref(), out),
        Command::Rootcheck { group } => cmd_rootcheck(group, out),
        Command::Reconstruct { input, dx, prec } => cmd_reconstruct(input, *dx, *prec, out),
        Command::Selftest { cases } => cmd_selftest(*cases, cli.rng_seed, out),
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn print_report(out: &mut dyn Write, rep: &VerificationReport) -> io::Result<()> {
    writeln!(out, "{:<26} {:<13} {:>5}", "check", "status", "order")?;
    for c in &rep.checks {
        let status = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inconclusive => "inconclusive",
            CheckStatus::Notice => "notice",
        };
        let order = c.verified_order.map(|o| o.to_string()).unwrap_or_else(|| "-".into());
        writeln!(out, "{:<26} {:<13} {:>5}", c.name, status, order)?;
        if c.status != CheckStatus::Pass {
            for n in &c.notes {
                writeln!(out, "    {n}")?;
            }
        }
    }
    writeln!(out, "overall: {}", if rep.overall_pass { "pass" } else { "FAIL" })
}

fn cmd_build(
    group: &str,
    points: Option<&[String]>,
    prec: i64,
    path: &Path,
    factor_input: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let rd = RootDatum::from_label(group)?;
    let ps = match points {
        Some(v) => PointSet::new(v.iter().map(|s| s.parse::<Rat>()).collect::<Result<_, _>>()?)?,
        None => forge::default_points(&rd),
    };
    let start = Instant::now();
    let bundle = forge::build(&rd, &ps, prec)?;
    writeln!(
        out,
        "{}: {} points, precision {}, {}x{} equation, {:.2?}",
        rd.label(),
        ps.len(),
        prec,
        rd.dim(),
        rd.dim(),
        start.elapsed()
    )?;
    write_file(path, &wire::to_json_string(&wire::bundle_to_file(&bundle)))?;
    if let Some(fp) = factor_input {
        let problem = PatchProblem {
            ps: ps.clone(),
            inputs: bundle.seeds.iter().map(|s| s.y_local.clone()).collect(),
            target: prec,
        };
        write_file(fp, &wire::to_json_string(&wire::factor_file(&problem)))?;
    }
    print_report(out, &bundle.report)?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(if bundle.report.overall_pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_verify(path: &Path, out: &mut dyn Write) -> CliResult {
    let file: wire::BundleFile = wire::from_json_str(&read_file(path)?)?;
    let bundle = wire::bundle_from_file(&file)?;
    let rep = forge::verify_bundle(&bundle);
    print_report(out, &rep)?;
    if rep.overall_pass != file.report.overall_pass {
        writeln!(
            out,
            "note: stored report says {}, recomputation says {}",
            file.report.overall_pass, rep.overall_pass
        )?;
    }
    Ok(if rep.overall_pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_factor(input: &Path, path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let file: wire::FactorFile = wire::from_json_str(&read_file(input)?)?;
    let (ps, mats, target) = wire::factor_inputs(&file)?;
    let problem = PatchProblem::new(ps.clone(), mats, target)?;
    let solution = factor_simultaneous(&problem)?;
    let rep = verify_patch(&problem, &solution);
    for p in &rep.points {
        writeln!(
            out,
            "point {} ({}): residual zero to order {}, Z in ring {}, Z = I mod t {}",
            p.index,
            ps.get(p.index),
            p.residual_order,
            p.z_in_fi_ring,
            p.z_identity_mod_t
        )?;
    }
    writeln!(out, "Y in F0 ring: {}", rep.y_in_f0_ring)?;
    writeln!(out, "overall: {}", if rep.pass() { "pass" } else { "FAIL" })?;
    if let Some(p) = path {
        let orders = rep.points.iter().map(|r| r.residual_order).collect();
        let f = wire::factor_result_file(&ps, &solution, orders, rep.pass());
        write_file(p, &wire::to_json_string(&f))?;
    }
    Ok(if rep.pass() { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_rootcheck(group: &str, out: &mut dyn Write) -> CliResult {
    let rd = RootDatum::from_label(group)?;
    let mut ok = true;
    writeln!(out, "{}: {} roots, {} positive", rd.label(), rd.roots().len(), rd.m())?;
    for r in rd.roots() {
        let holds = rd.springer_identity_check(&r)?;
        ok &= holds;
        writeln!(out, "root {:<14} springer {}", r.to_string(), if holds { "pass" } else { "FAIL" })?;
    }
    let descriptors: Vec<_> = rd
        .positive_roots()
        .iter()
        .flat_map(|a| {
            Family::ALL.iter().map(move |f| crate::rootdata::GroupDescriptor {
                root: if f.uses_negative_root() { a.neg() } else { a.clone() },
                multiplier: f.multiplier(),
            })
        })
        .collect();
    let rep = rd.propgen_hypothesis_check(&descriptors);
    ok &= rep.pass;
    writeln!(
        out,
        "generation hypotheses with {} seed descriptors: {}",
        descriptors.len(),
        if rep.pass { "pass" } else { "FAIL" }
    )?;
    for d in &rep.missing {
        writeln!(out, "    missing {d}")?;
    }
    Ok(if ok { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn print_series(out: &mut dyn Write, name: &str, s: &TSeries<Rat>) -> io::Result<()> {
    writeln!(out, "{name}:")?;
    for (e, c) in s.terms() {
        writeln!(out, "  t^{e}: {c:?}")?;
    }
    Ok(())
}

fn cmd_reconstruct(input: &Path, dx: Option<usize>, prec: Option<i64>, out: &mut dyn Write) -> CliResult {
    let file: wire::SeriesFile = wire::from_json_str(&read_file(input)?)?;
    let a = wire::series_from_json(&file.series, &file.points)?;
    let n = match prec.or(a.prec()) {
        Some(n) => n,
        None => return Err(Error::InvalidPrecision("exact input needs --prec".into()).into()),
    };
    let found: Option<Reconstruction<Rat>> = match dx {
        Some(d) => Some(tower::reconstruct(&a, d, n)?).filter(|r| r.success),
        None => tower::reconstruct_scheduled(&a, n),
    };
    match found {
        Some(r) => {
            writeln!(
                out,
                "certificate: Q a = P mod t^{}, degree bounds {:?}",
                r.verified_order, r.degree_bounds
            )?;
            print_series(out, "Q", &r.denominator)?;
            print_series(out, "P", &r.numerator)?;
            Ok(EXIT_PASS)
        }
        None => {
            let bound = dx.map_or_else(|| "schedule".to_string(), |d| format!("d_x <= {d}"));
            writeln!(out, "inconclusive at bounds ({bound}, N = {n})")?;
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

/// Counts of passing cases for one randomized property.
struct Tally {
    name: &'static str,
    ok: usize,
    total: usize,
}

fn cmd_selftest(cases: usize, seed: u64, out: &mut dyn Write) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = PointSet::consecutive(3);
    let mut tallies = Vec::new();

    let mut t = Tally { name: "dx and dt commute", ok: 0, total: cases };
    for _ in 0..cases {
        let s = random::series(&mut rng, &ps, 6);
        t.ok += usize::from(s.dx().dt() == s.dt().dx());
    }
    tallies.push(t);

    let k = cases.div_ceil(5);
    let mut t = Tally { name: "series inverse residual", ok: 0, total: k };
    for _ in 0..k {
        let s = random::unit_series(&mut rng, &ps, 5);
        t.ok += usize::from(s.inv().is_ok_and(|i| {
            let r = i.mul(&s).sub(&TSeries::one());
            r.is_zero() && r.prec() == s.prec()
        }));
    }
    tallies.push(t);

    let k = cases.div_ceil(20);
    let mut t = Tally { name: "matrix inverse residual", ok: 0, total: k };
    for _ in 0..k {
        let m = random::identity_mod_t(&mut rng, 2, &ps, 4);
        t.ok += usize::from(m.inv().is_ok_and(|i| {
            let r = i.mul(&m).sub(&TMatrix::identity(2));
            r.zero_order() >= 4
        }));
    }
    tallies.push(t);

    let k = cases.div_ceil(5);
    let mut t = Tally { name: "json round trip", ok: 0, total: k };
    for _ in 0..k {
        let s = random::series(&mut rng, &ps, 4);
        let text = wire::to_json_string(&wire::series_to_json(&s));
        let back = wire::from_json_str(&text).and_then(|j| wire::series_from_json(&j, ps.points()));
        t.ok += usize::from(back.is_ok_and(|b| {
            b == s && b.prec() == s.prec() && wire::to_json_string(&wire::series_to_json(&b)) == text
        }));
    }
    tallies.push(t);

    writeln!(out, "rng seed {seed}")?;
    for t in &tallies {
        writeln!(out, "{:<26} {}/{}", t.name, t.ok, t.total)?;
    }
    let pass = tallies.iter().all(|t| t.ok == t.total);
    writeln!(out, "overall: {}", if pass { "pass" } else { "FAIL" })?;
    Ok(if pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}
