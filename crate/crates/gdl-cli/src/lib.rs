//! `gdl` command-line runner: wires function specs, caches, worker pools
//! and CSV/JSON emission around the core library. Exit codes: 0 success,
//! 2 usage, 3 numeric-domain, 4 capacity/overflow, 5 I/O.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdl_core::critical::{exceptional_scan, f_on_critical, fourth_moment, smoothed_series};
use gdl_core::error::Error;
use gdl_core::gcdsum;
use gdl_core::hfile::parse_h_file;
use gdl_core::local::FunctionSpec;
use gdl_core::mainterm::main_term_polynomial;
use gdl_core::pool::Pool;
use gdl_core::remainder::{
    envelope_scan, mean_square_integral, moment_sum, omega_witness_scan, remainder_scan,
    RemainderSample, ScanReport,
};
use gdl_core::summatory::summatory_fast;
use gdl_core::zeta::zeta_complex;
use gdl_core::{cache, table};
use num_complex::Complex64;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "gdl",
    about = "gcd-sum Dirichlet-series laboratory: exact coefficient sieves, \
             summatory functions, residue main terms, remainder scans and \
             critical-line zeta diagnostics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Built-in spec: f1, fstar, or pstar
    #[arg(long, default_value = "f1")]
    spec: String,
    /// Override the exponent M of the zeta(2s) factor
    #[arg(long)]
    m: Option<i32>,
    /// Custom H presentation file (`p: c0 c1 ...` lines); replaces --spec
    #[arg(long)]
    h_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write output here (atomically); default is standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format where both are meaningful
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value f(n) from the direct definition (built-ins) or the
    /// local Euler factors (custom specs)
    Values {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: u64,
    },
    /// Materialize the coefficient table f(1..N), optionally cached
    Coeffs {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, env = "GDL_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Main-term polynomial coefficients (c2, c1, c0) as JSON
    Mainterm {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact summatory value S_f(x) by the sublinear route
    Sum {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        xmax: u64,
    },
    /// Remainder samples over [xlo, xhi]: CSV rows plus scan maxima
    RemainderScan {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        xlo: u64,
        #[arg(long)]
        xhi: u64,
        #[arg(long, default_value_t = 1)]
        checkpoint_every: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Omega-direction suprema of the normalized remainder over [16, xmax]
    Omega {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        xmax: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Envelope-ratio maxima over [xlo, xhi)
    Envelope {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        xlo: u64,
        #[arg(long)]
        xhi: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Moment sum over n <= X of n^beta f(n)^2
    Moment {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long)]
        xmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smoothed mean-square integral of the remainder
    MsIntegral {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        y: f64,
        /// Upper integration bound
        #[arg(long)]
        xmax: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// zeta(sigma + it) by Euler-Maclaurin
    Zeta {
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smoothed Dirichlet series against F(1/2 + it)
    SmoothedCheck {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fourth moment of |zeta(1/2+it)| over [xlo, xhi] with mandatory
    /// step-halving report
    FourthMoment {
        #[arg(long)]
        xlo: f64,
        #[arg(long)]
        xhi: f64,
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        /// Integrate with the dt/t weight
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exceptional-set scan of |zeta(1+2it)| on [T, 2T]
    Exceptional {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

pub fn run() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; --help/--version land here too
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("gdl: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn resolve_spec(args: &SpecArgs) -> Result<FunctionSpec, Error> {
    let base = match &args.h_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let h = parse_h_file(&text)?;
            FunctionSpec::new(args.m.unwrap_or(0), h, "custom")?
        }
        None => match args.spec.as_str() {
            "f1" => FunctionSpec::f1(),
            "fstar" => FunctionSpec::fstar(),
            "pstar" => FunctionSpec::pstar(97, 4),
            other => {
                return Err(Error::Parse(format!(
                    "unknown spec `{other}` (expected f1, fstar, pstar, or --h-file)"
                )))
            }
        },
    };
    match args.m {
        Some(m) if args.h_file.is_none() => base.with_m(m),
        _ => Ok(base),
    }
}

fn make_pool(workers: Option<usize>) -> Result<Pool, Error> {
    let n = workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1)
    });
    Pool::new(n)
}

/// 17 significant digits, the serialization contract for CSV reals.
fn real17(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(output: &OutputArgs, content: &str) -> Result<(), Error> {
    match &output.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => write_atomic(path, content),
    }
}

fn write_atomic(path: &Path, content: &str) -> Result<(), Error> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
    }
    let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn scan_report_json(r: &ScanReport) -> serde_json::Value {
    json!({
        "x_lo": r.x_lo,
        "x_hi": r.x_hi,
        "sup_omega_ratio": r.sup_omega_ratio,
        "omega_argmax": r.omega_argmax,
        "sup_sqrt_ratio": r.sup_sqrt_ratio,
        "sqrt_argmax": r.sqrt_argmax,
        "envelope_max": r.envelope_max,
        "envelope_argmax": r.envelope_argmax,
        "samples": r.samples,
    })
}

fn scan_report_csv(r: &ScanReport) -> String {
    let mut s = String::from(
        "x_lo,x_hi,sup_omega_ratio,omega_argmax,sup_sqrt_ratio,sqrt_argmax,envelope_max,envelope_argmax,samples\n",
    );
    let _ = writeln!(
        s,
        "{},{},{},{},{},{},{},{},{}",
        r.x_lo,
        r.x_hi,
        real17(r.sup_omega_ratio),
        r.omega_argmax,
        real17(r.sup_sqrt_ratio),
        r.sqrt_argmax,
        real17(r.envelope_max),
        r.envelope_argmax,
        r.samples
    );
    s
}

fn samples_csv(samples: &[RemainderSample]) -> String {
    let mut s = String::from("x,S,main,delta,sqrt_ratio,omega_ratio,envelope_ratio\n");
    for r in samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.x as u64,
            r.s,
            real17(r.main.to_f64()),
            real17(r.delta.to_f64()),
            real17(r.sqrt_ratio),
            real17(r.omega_ratio),
            real17(r.envelope_ratio)
        );
    }
    s
}

fn report_and_emit(output: &OutputArgs, report: &ScanReport) -> Result<(), Error> {
    let content = match output.format {
        Format::Json => format!("{}\n", scan_report_json(report)),
        Format::Csv => scan_report_csv(report),
    };
    emit(output, &content)
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Values { spec, n } => {
            if n == 0 {
                return Err(Error::Domain("n must be >= 1".into()));
            }
            let value = direct_value(&spec, n)?;
            println!("{value}");
            Ok(())
        }
        Command::Coeffs { spec, n, cache_dir, output } => {
            let s = resolve_spec(&spec)?;
            let t = match &cache_dir {
                Some(dir) => match cache::load(dir, &s, n) {
                    Ok(t) => t,
                    Err(Error::Io(_)) => {
                        let t = table::coefficients_sieve(&s, n)?;
                        cache::store(dir, &t)?;
                        t
                    }
                    Err(e) => return Err(e),
                },
                None => table::coefficients_sieve(&s, n)?,
            };
            let content = match output.format {
                Format::Csv => {
                    let mut out = String::from("n,f\n");
                    for (i, v) in t.values().iter().enumerate() {
                        let _ = writeln!(out, "{},{}", i + 1, v);
                    }
                    out
                }
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "spec": s.label(),
                        "spec_hash": format!("{:016x}", t.spec_hash()),
                        "n": t.n(),
                        "values": t.values(),
                    })
                ),
            };
            emit(&output, &content)
        }
        Command::Mainterm { spec, output } => {
            let s = resolve_spec(&spec)?;
            let p = main_term_polynomial(&s)?;
            let content = format!(
                "{}\n",
                json!({
                    "M": s.m(),
                    "label": s.label(),
                    "c2": p.c2.to_f64(),
                    "c1": p.c1.to_f64(),
                    "c0": p.c0.to_f64(),
                    "precision_digits": 31,
                })
            );
            emit(&output, &content)
        }
        Command::Sum { spec, xmax } => {
            let s = resolve_spec(&spec)?;
            println!("{}", summatory_fast(&s, xmax)?);
            Ok(())
        }
        Command::RemainderScan { spec, xlo, xhi, checkpoint_every, workers, output } => {
            let s = resolve_spec(&spec)?;
            let pool = make_pool(workers)?;
            let (report, samples) = remainder_scan(&s, xlo, xhi, checkpoint_every, &pool)?;
            let content = match output.format {
                Format::Csv => samples_csv(&samples),
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "report": scan_report_json(&report),
                        "samples": samples
                            .iter()
                            .map(|r| json!({
                                "x": r.x,
                                "s": r.s.to_string(),
                                "main": r.main.to_f64(),
                                "delta": r.delta.to_f64(),
                                "sqrt_ratio": r.sqrt_ratio,
                                "omega_ratio": r.omega_ratio,
                                "envelope_ratio": r.envelope_ratio,
                            }))
                            .collect::<Vec<_>>(),
                    })
                ),
            };
            emit(&output, &content)
        }
        Command::Omega { spec, xmax, workers, output } => {
            let s = resolve_spec(&spec)?;
            let pool = make_pool(workers)?;
            let report = omega_witness_scan(&s, xmax, &pool)?;
            report_and_emit(&output, &report)
        }
        Command::Envelope { spec, xlo, xhi, workers, output } => {
            let s = resolve_spec(&spec)?;
            let pool = make_pool(workers)?;
            let report = envelope_scan(&s, xlo, xhi, &pool)?;
            report_and_emit(&output, &report)
        }
        Command::Moment { spec, beta, xmax, output } => {
            let s = resolve_spec(&spec)?;
            let v = moment_sum(&s, beta, xmax)?;
            let content = format!(
                "{}\n",
                json!({
                    "spec": s.label(),
                    "beta": beta,
                    "X": xmax,
                    "value": v.to_f64(),
                    "value_17sig": real17(v.to_f64()),
                })
            );
            emit(&output, &content)
        }
        Command::MsIntegral { spec, t, y, xmax, step, output } => {
            let s = resolve_spec(&spec)?;
            let r = mean_square_integral(&s, t, y, xmax, step)?;
            let content = format!(
                "{}\n",
                json!({
                    "T": t,
                    "y": y,
                    "u_max": xmax,
                    "step": r.step,
                    "value": r.value,
                    "evaluations": r.evaluations,
                    "sup_ratio": r.sup_ratio,
                    "tail_factor": r.tail_factor,
                    "tail_bound": r.tail_bound,
                    "log_power_ratio": r.log_power_ratio,
                })
            );
            emit(&output, &content)
        }
        Command::Zeta { sigma, t, output } => {
            let z = zeta_complex(Complex64::new(sigma, t))?;
            let content = format!(
                "{}\n",
                json!({
                    "sigma": sigma,
                    "t": t,
                    "value_re": z.re,
                    "value_im": z.im,
                    "err_bound": 1e-10,
                })
            );
            emit(&output, &content)
        }
        Command::SmoothedCheck { spec, t, y, n, output } => {
            let s = resolve_spec(&spec)?;
            if !s.h_is_identity() {
                return Err(Error::Domain(
                    "smoothed-check compares against F with H = 1; use a built-in spec".into(),
                ));
            }
            let series = smoothed_series(&s, Complex64::new(0.5, t), y, n)?;
            let f = f_on_critical(s.m(), t)?;
            let residual = (series.value - f).norm();
            let content = format!(
                "{}\n",
                json!({
                    "t": t,
                    "y": y,
                    "N": n,
                    "series_re": series.value.re,
                    "series_im": series.value.im,
                    "f_re": f.re,
                    "f_im": f.im,
                    "residual": residual,
                    "tail_bound": series.tail_bound,
                })
            );
            emit(&output, &content)
        }
        Command::FourthMoment { xlo, xhi, step, weighted, workers, output } => {
            let pool = make_pool(workers)?;
            let coarse = fourth_moment(xlo, xhi, step, weighted, &pool)?;
            let fine = fourth_moment(xlo, xhi, step / 2.0, weighted, &pool)?;
            let rel = if fine != 0.0 { ((coarse - fine) / fine).abs() } else { 0.0 };
            let leading = xhi * xhi.ln().powi(4) / (2.0 * std::f64::consts::PI.powi(2));
            let content = format!(
                "{}\n",
                json!({
                    "t_lo": xlo,
                    "t_hi": xhi,
                    "step": step,
                    "weighted": weighted,
                    "value": coarse,
                    "value_half_step": fine,
                    "step_halving_rel_change": rel,
                    "leading_term": leading,
                    "ratio_to_leading": fine / leading,
                })
            );
            emit(&output, &content)
        }
        Command::Exceptional { t, kappa, grid, workers, output } => {
            let pool = make_pool(workers)?;
            let r = exceptional_scan(t, kappa, grid, &pool)?;
            let content = match output.format {
                Format::Csv => {
                    let mut s = String::from("lo,hi\n");
                    for &(lo, hi) in r.set.intervals() {
                        let _ = writeln!(s, "{},{}", real17(lo), real17(hi));
                    }
                    s
                }
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "T": t,
                        "kappa": kappa,
                        "grid": r.grid,
                        "points": r.points,
                        "threshold": r.threshold,
                        "sup_abs": r.sup_abs,
                        "inf_abs": r.inf_abs,
                        "interval_count": r.set.count(),
                        "total_length": r.set.total_length(),
                        "intervals": r.set.intervals(),
                    })
                ),
            };
            emit(&output, &content)
        }
    }
}

/// `values` resolves built-ins by their direct gcd-sum definitions and
/// everything else multiplicatively from the local factors.
fn direct_value(args: &SpecArgs, n: u64) -> Result<String, Error> {
    if args.h_file.is_none() && args.m.is_none() {
        match args.spec.as_str() {
            "f1" => return Ok(gcdsum::gcd_sum_f1(n).to_string()),
            "fstar" => return Ok(gcdsum::gcd_sum_fstar(n).to_string()),
            "pstar" => return Ok(gcdsum::pillai_modified(n).to_string()),
            _ => {}
        }
    }
    let spec = resolve_spec(args)?;
    let mut acc = gdl_core::local::rat_int(1);
    for (p, a) in gdl_core::primes::factorize(n) {
        let series = spec.local_series(p, a as usize)?;
        acc *= series[a as usize].clone();
    }
    Ok(acc.to_string())
}
