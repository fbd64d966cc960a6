//! The `kaczeta` command-line front end.
//!
//! Every subcommand turns a [`RunConfig`] into a [`Table`] which is written
//! as JSON (17 significant digits) or CSV (12 significant digits, header row
//! always present). Library errors map onto exit codes through
//! [`exit_code`].

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{domain, Error, Result};
use crate::kacgutz::gtrace_closed;
use crate::model::{check_cap, partition_function_bruteforce, ModelParams};
use crate::ruelle::ruelle_trace_power;
use crate::spectral::{
    block_by_modulus, eigenvalues, find_real_zeros_poles, leading_predictions, spectrum, zeta, zeta_series_partial, Direction,
};
use crate::specialfns::Parity;
use crate::verify::{run_suite, SuiteOptions, BREAK_ME_PERTURBATION};
use crate::Complex64;

pub use config::{BetaSpec, OutputFormat, RunConfig};
pub use output::{Cell, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::ConvergenceDomain(_) => EXIT_VALIDATION,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Quadrature { .. } | Error::Eigensolve(_) | Error::PoleAt { .. } => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kaczeta",
    version,
    about = "Transfer-operator spectra, partition functions and zeta functions of Kac-Baker spin chains",
    after_help = "Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 enumeration cap exceeded, 4 numerical failure.\n\
                  KACZETA_MAX_N overrides the largest period n enumerated by brute force (default 24)."
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct SharedArgs {
    /// Number of interaction channels (defaults to the length of --lambda).
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Decay rates λ_l, comma separated; one value is broadcast to all channels.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1)]
    pub lambda: Option<Vec<f64>>,
    /// Couplings J_l, comma separated; one value is broadcast to all channels.
    #[arg(long = "J", global = true, value_delimiter = ',', num_args = 1)]
    pub coupling: Option<Vec<f64>>,
    /// Inverse temperature, or a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, conflicts_with = "beta_range")]
    pub beta: Option<Vec<f64>>,
    /// Inverse temperatures lo, lo+step, … ≤ hi.
    #[arg(long, global = true, value_name = "LO:HI:STEP", allow_hyphen_values = true, value_parser = BetaSpec::parse_range)]
    pub beta_range: Option<BetaSpec>,
    /// Largest period for partition and trace tables (rows n = 1..=N).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Truncation degree of the Hermite basis.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Zeta argument as re or re,im.
    #[arg(long, global = true, value_name = "RE[,IM]", allow_hyphen_values = true, value_parser = config::parse_complex)]
    pub z: Option<[f64; 2]>,
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,
    /// JSON file with RunConfig keys; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run on one worker thread unless --threads is given. Output is
    /// byte-identical across runs and thread counts in either case.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Plotdata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CrossCheck {
    Series,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brute-force Z_n(β) against ∏(1−λ_l^n)·trace L_β^n.
    Partition,
    /// trace L_β^n by the fixed-point formula and from the truncated matrix spectrum.
    Trace,
    /// Eigenvalues of the truncated operator with parity and tail gap.
    Spectrum {
        /// Keep only the K largest eigenvalues.
        #[arg(long)]
        top: Option<usize>,
        /// Write (x, y) CSV series of the top eigenvalues against β.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
    /// ζ_R(z, β) and its determinant factors.
    Zeta {
        /// Also evaluate the Taylor series exp(Σ zⁿZ_n/n).
        #[arg(long, value_enum)]
        cross_check: Option<CrossCheck>,
        /// Number of series terms for --cross-check series.
        #[arg(long, default_value_t = 18)]
        terms: usize,
    },
    /// Real β roots of every determinant factor over --beta-range.
    Zeros,
    /// Leading eigenvalues against their large-|β| branches.
    Asymptotics {
        /// Branches compared per parity.
        #[arg(long, default_value_t = 3)]
        top: usize,
    },
    /// Run the identity suite (fixed internal parameters; model flags are ignored).
    Verify {
        /// Perturb λ on one side of the partition identities; some checks must fail.
        #[arg(long)]
        break_me: bool,
        /// Run only these check ids.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        checks: Option<Vec<u32>>,
    },
}

impl SharedArgs {
    /// File (or default) configuration overridden by the flags present.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(m) = self.m {
            c.m = Some(m);
        }
        if let Some(l) = &self.lambda {
            c.lambda = l.clone();
        }
        if let Some(j) = &self.coupling {
            c.coupling = j.clone();
        }
        match (&self.beta, &self.beta_range) {
            (Some(b), _) if b.len() == 1 => c.beta = BetaSpec::Single(b[0]),
            (Some(b), _) => c.beta = BetaSpec::List(b.clone()),
            (None, Some(r)) => c.beta = r.clone(),
            (None, None) => {}
        }
        if let Some(n) = self.n {
            c.n = n;
        }
        if let Some(d) = self.degree {
            c.degree = Some(d);
        }
        if let Some(z) = self.z {
            c.z = z;
        }
        if let Some(o) = self.output {
            c.output = o;
        }
        c.deterministic |= self.deterministic;
        if let Some(t) = self.threads {
            c.threads = Some(t);
        }
        Ok(c)
    }
}

/// Entry point used by the binary.
pub fn run() -> std::process::ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    std::process::ExitCode::from(run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock()))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((table, config, failed)) => {
            let format = if table.command == "plotdata" { OutputFormat::Csv } else { config.output };
            if let Err(e) = table.write(format, &config, out) {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_NUMERICAL;
            }
            if failed {
                EXIT_VERIFY_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the parsed command; the flag reports a failed verification.
pub fn execute(cli: &Cli) -> Result<(Table, RunConfig, bool)> {
    let config = cli.shared.resolve()?;
    let threads = match (config.threads, config.deterministic) {
        (Some(0), _) => return Err(domain("--threads must be at least 1")),
        (Some(k), _) => Some(k),
        (None, true) => Some(1),
        (None, false) => None,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| domain(format!("cannot start worker pool: {e}")))?;
    let (table, failed) = pool.install(|| dispatch(&cli.command, &config))?;
    Ok((table, config, failed))
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<(Table, bool)> {
    if let Command::Verify { break_me, checks } = command {
        return Ok(cmd_verify(*break_me, checks.clone()));
    }
    let params = config.params()?;
    let table = match command {
        Command::Partition => cmd_partition(&params, config)?,
        Command::Trace => cmd_trace(&params, config)?,
        Command::Spectrum { top, emit: None } => cmd_spectrum(&params, config, *top)?,
        Command::Spectrum { top, emit: Some(Emit::Plotdata) } => cmd_plotdata(&params, config, top.unwrap_or(5))?,
        Command::Zeta { cross_check, terms } => cmd_zeta(&params, config, cross_check.map(|_| *terms))?,
        Command::Zeros => cmd_zeros(&params, config)?,
        Command::Asymptotics { top } => cmd_asymptotics(&params, config, *top)?,
        Command::Verify { .. } => unreachable!(),
    };
    Ok((table, false))
}

fn alpha_label<T: std::fmt::Display>(alpha: &[T]) -> String {
    let parts: Vec<String> = alpha.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn periods(config: &RunConfig) -> Result<std::ops::RangeInclusive<usize>> {
    if config.n == 0 {
        return Err(domain("n must be at least 1"));
    }
    check_cap(config.n)?;
    Ok(1..=config.n)
}

pub fn cmd_partition(params: &ModelParams, config: &RunConfig) -> Result<Table> {
    let mut t = Table::new("partition", &["beta", "n", "Z_n", "trace_product", "residual"]);
    let ns = periods(config)?;
    for beta in config.beta.values()? {
        for n in ns.clone() {
            let z = partition_function_bruteforce(params, beta, n)?;
            let scale: f64 = params.lambda().iter().map(|x| 1.0 - x.powi(n as i32)).product();
            let tr = scale * ruelle_trace_power(params, Complex64::new(beta, 0.0), n)?.re;
            t.push(vec![beta.into(), n.into(), z.into(), tr.into(), ((tr - z).abs() / z).into()]);
        }
    }
    Ok(t)
}

pub fn cmd_trace(params: &ModelParams, config: &RunConfig) -> Result<Table> {
    let mut t = Table::new(
        "trace",
        &["beta", "n", "degree", "fixed_point_trace", "matrix_trace", "rel_diff"],
    );
    let ns = periods(config)?;
    let degree = config.degree();
    for beta in config.beta.values()? {
        let (eigs, _) = spectrum(params, beta, degree)?;
        for n in ns.clone() {
            let fp = if n == 1 {
                gtrace_closed(params, beta)
            } else {
                ruelle_trace_power(params, Complex64::new(beta, 0.0), n)?.re
            };
            let mt: f64 = eigs.iter().map(|r| r.powi(n as i32)).sum();
            t.push(vec![
                beta.into(),
                n.into(),
                degree.into(),
                fp.into(),
                mt.into(),
                ((fp - mt).abs() / fp.abs()).into(),
            ]);
        }
    }
    Ok(t)
}

pub fn cmd_spectrum(params: &ModelParams, config: &RunConfig, top: Option<usize>) -> Result<Table> {
    let mut t = Table::new("spectrum", &["index", "eigenvalue", "parity", "beta", "degree", "tail_gap"]);
    for beta in config.beta.values()? {
        let s = eigenvalues(params, beta, config.degree())?;
        let count = top.unwrap_or(usize::MAX);
        for (k, (v, p)) in s.eigenvalues.iter().zip(&s.parities).take(count).enumerate() {
            t.push(vec![k.into(), (*v).into(), p.as_str().into(), beta.into(), s.degree.into(), s.tail_gap.into()]);
        }
    }
    Ok(t)
}

pub fn cmd_plotdata(params: &ModelParams, config: &RunConfig, top: usize) -> Result<Table> {
    let mut t = Table::new("plotdata", &["series", "x", "y"]);
    let betas = config.beta.values()?;
    let degree = config.degree();
    let spectra: Vec<Vec<f64>> = betas.iter().map(|&b| spectrum(params, b, degree).map(|s| s.0)).collect::<Result<_>>()?;
    for k in 0..top {
        for (beta, eigs) in betas.iter().zip(&spectra) {
            if let Some(v) = eigs.get(k) {
                t.push(vec![format!("rho_{k}").into(), (*beta).into(), (*v).into()]);
            }
        }
    }
    Ok(t)
}

pub fn cmd_zeta(params: &ModelParams, config: &RunConfig, series_terms: Option<usize>) -> Result<Table> {
    let mut t = Table::new("zeta", &["beta", "z_re", "z_im", "component", "exponent", "re", "im"]);
    let z = config.z()?;
    for beta in config.beta.values()? {
        let v = zeta(params, beta, z, config.degree())?;
        let mut row = |component: String, exponent: i32, w: Complex64| {
            t.push(vec![beta.into(), z.re.into(), z.im.into(), component.into(), exponent.into(), w.re.into(), w.im.into()]);
        };
        row("zeta".into(), 1, v.value);
        row(format!("zeta_degree_{}", v.degree.saturating_sub(4)), 1, v.value_coarse);
        for f in &v.factors {
            row(format!("det{}", alpha_label(&f.alpha)), f.exponent, f.determinant);
        }
        if let Some(terms) = series_terms {
            let s = zeta_series_partial(params, beta, z, terms)?;
            row(format!("series_{terms}"), 1, s);
            let rel = (s - v.value).norm() / v.value.norm();
            if rel > 1e-6 {
                t.warnings.push(format!("beta = {beta}: determinant and series values differ by {rel:.3e} (relative)"));
            }
        }
        if v.convergence_warning {
            t.warnings.push(format!(
                "beta = {beta}: zeta moved by more than 1e-6 between degrees {} and {}; raise --degree",
                v.degree.saturating_sub(4),
                v.degree
            ));
        }
    }
    Ok(t)
}

pub fn cmd_zeros(params: &ModelParams, config: &RunConfig) -> Result<Table> {
    let mut t = Table::new("zeros", &["beta", "alpha", "kind", "multiplicity", "factor_value"]);
    let BetaSpec::Range { lo, hi, step } = config.beta else {
        return Err(domain("zeros scans an interval; pass --beta-range LO:HI:STEP"));
    };
    config.beta.values()?;
    let z = config.z()?;
    if z.im != 0.0 {
        return Err(domain("zeros needs a real z"));
    }
    for r in find_real_zeros_poles(params, z.re, (lo, hi), config.degree(), step)? {
        t.push(vec![
            r.beta.into(),
            alpha_label(&r.alpha).into(),
            r.kind.as_str().into(),
            r.multiplicity.into(),
            r.factor_value.into(),
        ]);
    }
    Ok(t)
}

pub fn cmd_asymptotics(params: &ModelParams, config: &RunConfig, top: usize) -> Result<Table> {
    let mut t = Table::new(
        "asymptotics",
        &["beta", "direction", "parity", "index", "eigenvalue", "prediction", "rel_deviation"],
    );
    for beta in config.beta.values()? {
        let direction = if beta >= 0.0 { Direction::PlusInfinity } else { Direction::MinusInfinity };
        let label = if beta >= 0.0 { "+inf" } else { "-inf" };
        for parity in [Parity::Even, Parity::Odd] {
            let got = block_by_modulus(params, beta, config.degree(), parity)?;
            let want = leading_predictions(params, beta, direction, parity, top)?;
            for (k, (g, w)) in got.iter().zip(&want).enumerate() {
                t.push(vec![
                    beta.into(),
                    label.into(),
                    parity.as_str().into(),
                    k.into(),
                    (*g).into(),
                    (*w).into(),
                    ((g - w).abs() / w.abs()).into(),
                ]);
            }
        }
    }
    Ok(t)
}

pub fn cmd_verify(break_me: bool, checks: Option<Vec<u32>>) -> (Table, bool) {
    let options = SuiteOptions {
        lambda_perturbation: break_me.then_some(BREAK_ME_PERTURBATION),
        only: checks,
    };
    let mut t = Table::new("verify", &["id", "name", "passed", "metric", "tolerance", "detail"]);
    let outcomes = run_suite(&options);
    let failed = outcomes.iter().any(|o| !o.passed);
    for o in outcomes {
        t.push(vec![o.id.into(), o.name.into(), o.passed.into(), o.metric.into(), o.tolerance.into(), o.detail.into()]);
    }
    (t, failed)
}
