//! Command-line surface: point evaluation, identity suites, scans, the
//! partition function, and the exact cocycle verifier, with JSON or CSV
//! output.
//!
//! Exit status: 0 when every assertion is within tolerance, 1 on an
//! assertion failure, 2 on a domain or usage error.

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use ellgamma::gamma::{gamma_ell, gamma_series, q_polynomial, wall_crossing_scan, PeriodPair};
use ellgamma::phase::{omega, semiclassical_check, PhasePoint, SemiclassicalParams};
use ellgamma::qseries::{dedekind_eta, theta, theta0};
use ellgamma::special::{dilog, gamma_trig, psi_fn};
use ellgamma::suites::{self, SuiteConfig, SUITE_NAMES};
use ellgamma::{EgError, Eval, PsiPolicy, TruncationPolicy};

mod output;
mod parse;

use output::{format_sig, EvalRecord, OutputFormat};
use parse::parse_complex;

#[derive(Parser)]
#[command(
    name = "ellgamma",
    about = "Elliptic gamma function toolkit: evaluators, identity suites, scans, and an exact cocycle verifier",
    version
)]
struct Cli {
    /// List the suites with the identities they check, then exit.
    #[arg(long, global = true)]
    list: bool,

    /// Residual tolerance for assertions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for the deterministic sample streams.
    #[arg(long, global = true, default_value_t = 2026)]
    seed: u64,

    /// Number of seeded samples per identity.
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Hard cap on series/product terms.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_terms: usize,

    /// Significant digits in printed numbers.
    #[arg(long, global = true, default_value_t = 15)]
    precision_digits: usize,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval {
        /// One of: gamma, gamma-series, theta, theta0, eta, omega, psi,
        /// dilog, q-poly, gamma-trig.
        function: String,
        /// Argument z (complex literal a+bi, or the keyword `center`).
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// First period tau (complex literal, `sqrt2`, or `golden`).
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// Second period sigma.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        /// Offset a (phase function).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Argument s (trigonometric gamma).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Argument x (dilogarithm).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Argument t (psi function).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Run one identity suite and report residuals.
    Check {
        /// Suite name; see --list.
        suite: String,
    },
    /// Parameter scans with one CSV row per grid point.
    Scan {
        /// One of: wall-crossing, semiclassical, asymptotic, baxter.
        scan: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        /// Comma-separated epsilon values.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<i64>,
        /// u grid start:end:steps.
        #[arg(long, allow_hyphen_values = true)]
        u_grid: Option<String>,
        /// Comma-separated ray scales for the asymptotic scan.
        #[arg(long, allow_hyphen_values = true)]
        scales: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Partition-function value and free energy.
    Baxter {
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Exact cocycle verification.
    Cocycle {
        #[command(subcommand)]
        action: CocycleAction,
    },
}

#[derive(Subcommand)]
enum CocycleAction {
    /// Run the full exact verification report.
    Verify,
}

fn main() {
    // die quietly when the consumer closes the pipe (head, etc.)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    });
}

fn run(cli: Cli) -> Result<i32, EgError> {
    if cli.list {
        for name in SUITE_NAMES {
            println!("{name}: {}", suites::suite_description(name));
        }
        return Ok(0);
    }
    let policy = TruncationPolicy {
        tol: cli.tol.min(1e-10),
        max_terms: cli.max_terms,
        tail_bound_mode: ellgamma::TailBoundMode::Geometric,
    };
    let digits = cli.precision_digits;
    match cli.command {
        None => {
            eprintln!("error: no command given (try --help or --list)");
            Ok(2)
        }
        Some(Command::Eval {
            function,
            z,
            tau,
            sigma,
            a,
            s,
            x,
            t,
        }) => {
            let ctx = EvalContext {
                z,
                tau,
                sigma,
                a,
                s,
                x,
                t,
            };
            let (value, method) = eval_function(&function, &ctx, &policy)?;
            let record = EvalRecord {
                function,
                value: value.value,
                method,
                terms_used: value.terms,
                tail_bound: value.tail_bound,
                tol: cli.tol,
                seed: cli.seed,
            };
            println!("{}", record.render(cli.format, digits));
            Ok(0)
        }
        Some(Command::Check { suite }) => {
            let cfg = SuiteConfig {
                tol: cli.tol,
                seed: cli.seed,
                samples: cli.samples,
            };
            let reports = suites::run_suite(&suite, &cfg)?;
            let all_pass = reports.iter().all(|r| r.pass);
            match cli.format {
                OutputFormat::Json => {
                    for r in &reports {
                        println!("{}", serde_json::to_string(r).unwrap());
                    }
                }
                OutputFormat::Csv => {
                    println!("identity,sample_index,z_re,z_im,abs_residual,rel_residual,tol,pass,skipped");
                    for r in &reports {
                        println!(
                            "{},{},{},{},{},{},{},{},{}",
                            r.identity,
                            r.sample_index,
                            format_sig(r.z_re, digits),
                            format_sig(r.z_im, digits),
                            format_sig(r.abs_residual, digits),
                            format_sig(r.rel_residual, digits),
                            format_sig(r.tol, digits),
                            r.pass,
                            r.skipped
                        );
                    }
                }
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        Some(Command::Scan {
            scan,
            z,
            tau,
            sigma,
            eps,
            beta,
            u_grid,
            scales,
            c,
        }) => run_scan(ScanArgs {
            scan,
            z,
            tau,
            sigma,
            eps,
            beta,
            u_grid,
            scales,
            c,
            policy,
            digits,
        }),
        Some(Command::Baxter { c, u, tau, sigma }) => {
            let u = parse_complex(&u, None)?;
            let tau = parse_complex(&tau, None)?;
            let sigma = parse_complex(&sigma, None)?;
            let (zv, f) = suites::baxter_free_energy(c, u, tau, sigma, &policy)?;
            match cli.format {
                OutputFormat::Json => println!(
                    "{{\"Z\":{{\"re\":{},\"im\":{}}},\"f\":{{\"re\":{},\"im\":{}}}}}",
                    format_sig(zv.re, digits),
                    format_sig(zv.im, digits),
                    format_sig(f.re, digits),
                    format_sig(f.im, digits)
                ),
                OutputFormat::Csv => {
                    println!("Z_re,Z_im,f_re,f_im");
                    println!(
                        "{},{},{},{}",
                        format_sig(zv.re, digits),
                        format_sig(zv.im, digits),
                        format_sig(f.re, digits),
                        format_sig(f.im, digits)
                    );
                }
            }
            Ok(0)
        }
        Some(Command::Cocycle {
            action: CocycleAction::Verify,
        }) => {
            let records = ellgamma::cocycle::verify_all(cli.samples.min(10), cli.seed, cli.tol);
            let all_ok = records.iter().all(|r| r.ok());
            match cli.format {
                OutputFormat::Json => {
                    for r in &records {
                        println!("{}", serde_json::to_string(r).unwrap());
                    }
                }
                OutputFormat::Csv => {
                    println!("name,status,detail");
                    for r in &records {
                        println!(
                            "{},{},{}",
                            r.name.replace(',', ";"),
                            r.status,
                            r.detail.clone().unwrap_or_default().replace(',', ";")
                        );
                    }
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

struct EvalContext {
    z: Option<String>,
    tau: Option<String>,
    sigma: Option<String>,
    a: Option<String>,
    s: Option<String>,
    x: Option<String>,
    t: Option<String>,
}

impl EvalContext {
    fn period(&self, which: &str) -> Result<Complex64, EgError> {
        let raw = match which {
            "tau" => self.tau.as_deref(),
            "sigma" => self.sigma.as_deref(),
            _ => None,
        }
        .ok_or_else(|| EgError::domain(format!("missing --{which}")))?;
        parse_complex(raw, None)
    }

    fn z_with_center(&self, center: Option<Complex64>) -> Result<Complex64, EgError> {
        let raw = self
            .z
            .as_deref()
            .ok_or_else(|| EgError::domain("missing --z"))?;
        parse_complex(raw, center)
    }
}

fn eval_function(
    function: &str,
    ctx: &EvalContext,
    policy: &TruncationPolicy,
) -> Result<(Eval, String), EgError> {
    match function {
        "gamma" | "gamma-series" => {
            let tau = ctx.period("tau")?;
            let sigma = ctx.period("sigma")?;
            let z = ctx.z_with_center(Some((tau + sigma) / 2.0))?;
            let periods = PeriodPair::new(tau, sigma);
            if function == "gamma" {
                Ok((gamma_ell(z, &periods, policy)?, "double-product".into()))
            } else {
                Ok((gamma_series(z, &periods, policy)?, "summation-formula".into()))
            }
        }
        "theta" => {
            let tau = ctx.period("tau")?;
            let z = ctx.z_with_center(None)?;
            Ok((theta(z, tau, policy)?, "symmetric-series".into()))
        }
        "theta0" => {
            let tau = ctx.period("tau")?;
            let z = ctx.z_with_center(None)?;
            Ok((theta0(z, tau, policy)?, "product".into()))
        }
        "eta" => {
            let tau = ctx.period("tau")?;
            Ok((dedekind_eta(tau, policy)?, "product".into()))
        }
        "omega" => {
            let tau = ctx.period("tau")?;
            let sigma = ctx.period("sigma")?;
            let z = ctx.z_with_center(Some((tau + sigma) / 2.0))?;
            let a = parse_complex(
                ctx.a.as_deref().ok_or_else(|| EgError::domain("missing --a"))?,
                None,
            )?;
            let p = PhasePoint {
                a,
                z,
                periods: PeriodPair::new(tau, sigma),
            };
            Ok((omega(&p, policy)?, "gamma-ratio".into()))
        }
        "psi" => {
            let t = parse_complex(
                ctx.t.as_deref().ok_or_else(|| EgError::domain("missing --t"))?,
                None,
            )?;
            let pol = PsiPolicy {
                series_tol: policy.tol,
                ..PsiPolicy::default()
            };
            Ok((psi_fn(t, &pol)?, "dilogarithm-series".into()))
        }
        "dilog" => {
            let x = parse_complex(
                ctx.x.as_deref().ok_or_else(|| EgError::domain("missing --x"))?,
                None,
            )?;
            Ok((dilog(x, policy)?, "power-series".into()))
        }
        "q-poly" => {
            let tau = ctx.period("tau")?;
            let sigma = ctx.period("sigma")?;
            let z = ctx.z_with_center(Some((tau + sigma) / 2.0))?;
            Ok((
                Eval::exact(q_polynomial(z, tau, sigma)?),
                "closed-form".into(),
            ))
        }
        "gamma-trig" => {
            let sigma = ctx.period("sigma")?;
            let s = parse_complex(
                ctx.s.as_deref().ok_or_else(|| EgError::domain("missing --s"))?,
                None,
            )?;
            Ok((gamma_trig(s, sigma, policy)?, "q-product".into()))
        }
        other => Err(EgError::domain(format!("unknown function '{other}'"))),
    }
}

struct ScanArgs {
    scan: String,
    z: Option<String>,
    tau: Option<String>,
    sigma: Option<String>,
    eps: Option<String>,
    beta: Option<i64>,
    u_grid: Option<String>,
    scales: Option<String>,
    c: f64,
    policy: TruncationPolicy,
    digits: usize,
}

fn run_scan(args: ScanArgs) -> Result<i32, EgError> {
    let parse_eps = |raw: &Option<String>| -> Result<Vec<f64>, EgError> {
        raw.as_deref()
            .ok_or_else(|| EgError::domain("missing --eps"))?
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| EgError::domain(format!("bad epsilon '{p}'")))
            })
            .collect()
    };
    match args.scan.as_str() {
        "wall-crossing" => {
            let tau = parse_complex(
                args.tau.as_deref().ok_or_else(|| EgError::domain("missing --tau"))?,
                None,
            )?;
            if tau.im != 0.0 {
                return Err(EgError::domain("wall-crossing scan wants a real --tau"));
            }
            let sigma = parse_complex(
                args.sigma.as_deref().ok_or_else(|| EgError::domain("missing --sigma"))?,
                None,
            )?;
            let z = parse_complex(
                args.z.as_deref().ok_or_else(|| EgError::domain("missing --z"))?,
                None,
            )?;
            let eps = parse_eps(&args.eps)?;
            let rows = wall_crossing_scan(z, tau.re, sigma, &eps, &args.policy)?;
            println!("eps,value_re,value_im");
            for (e, v) in rows {
                println!(
                    "{},{},{}",
                    format_sig(e, args.digits),
                    format_sig(v.re, args.digits),
                    format_sig(v.im, args.digits)
                );
            }
            Ok(0)
        }
        "semiclassical" => {
            let tau = parse_complex(
                args.tau.as_deref().ok_or_else(|| EgError::domain("missing --tau"))?,
                None,
            )?;
            let z = parse_complex(
                args.z.as_deref().ok_or_else(|| EgError::domain("missing --z"))?,
                None,
            )?;
            let beta = args.beta.ok_or_else(|| EgError::domain("missing --beta"))?;
            let eps = parse_eps(&args.eps)?;
            println!("eps,omega_re,omega_im,theta_pow_re,theta_pow_im,deviation");
            for e in eps {
                let (om, th, dev) = semiclassical_check(
                    &SemiclassicalParams { beta, eps: e, tau },
                    z,
                    &args.policy,
                )?;
                println!(
                    "{},{},{},{},{},{}",
                    format_sig(e, args.digits),
                    format_sig(om.re, args.digits),
                    format_sig(om.im, args.digits),
                    format_sig(th.re, args.digits),
                    format_sig(th.im, args.digits),
                    format_sig(dev, args.digits)
                );
            }
            Ok(0)
        }
        "asymptotic" => {
            // Γ(z,τ,τ) e^{iπQ(z;τ,τ)} along the shrinking ray τ = s·τ₀
            let tau0 = parse_complex(
                args.tau.as_deref().ok_or_else(|| EgError::domain("missing --tau"))?,
                None,
            )?;
            let z = parse_complex(
                args.z.as_deref().ok_or_else(|| EgError::domain("missing --z"))?,
                None,
            )?;
            let scales: Vec<f64> = args
                .scales
                .as_deref()
                .ok_or_else(|| EgError::domain("missing --scales"))?
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| EgError::domain(format!("bad scale '{p}'")))
                })
                .collect::<Result<_, _>>()?;
            let rows = ellgamma::special::corollary_asymptotic(z, tau0, &scales, &args.policy)?;
            println!("s,ratio_re,ratio_im,distance_to_one");
            for (sc, ratio) in rows {
                println!(
                    "{},{},{},{}",
                    format_sig(sc, args.digits),
                    format_sig(ratio.re, args.digits),
                    format_sig(ratio.im, args.digits),
                    format_sig((ratio - Complex64::new(1.0, 0.0)).norm(), args.digits)
                );
            }
            Ok(0)
        }
        "baxter" => {
            let tau = parse_complex(
                args.tau.as_deref().ok_or_else(|| EgError::domain("missing --tau"))?,
                None,
            )?;
            let sigma = parse_complex(
                args.sigma.as_deref().ok_or_else(|| EgError::domain("missing --sigma"))?,
                None,
            )?;
            let grid = args
                .u_grid
                .as_deref()
                .ok_or_else(|| EgError::domain("missing --u-grid start:end:steps"))?;
            let parts: Vec<&str> = grid.split(':').collect();
            if parts.len() != 3 {
                return Err(EgError::domain("u grid must be start:end:steps"));
            }
            let start: f64 = parts[0]
                .parse()
                .map_err(|_| EgError::domain("bad grid start"))?;
            let end: f64 = parts[1]
                .parse()
                .map_err(|_| EgError::domain("bad grid end"))?;
            let steps: usize = parts[2]
                .parse()
                .map_err(|_| EgError::domain("bad grid step count"))?;
            println!("u,Z_re,Z_im,f_re,f_im,status");
            for k in 0..=steps {
                let u = start + (end - start) * k as f64 / steps.max(1) as f64;
                match suites::baxter_free_energy(
                    args.c,
                    Complex64::new(u, 0.0),
                    tau,
                    sigma,
                    &args.policy,
                ) {
                    Ok((zv, f)) => println!(
                        "{},{},{},{},{},ok",
                        format_sig(u, args.digits),
                        format_sig(zv.re, args.digits),
                        format_sig(zv.im, args.digits),
                        format_sig(f.re, args.digits),
                        format_sig(f.im, args.digits)
                    ),
                    Err(e) => println!("{},,,,,\"{e}\"", format_sig(u, args.digits)),
                }
            }
            Ok(0)
        }
        other => Err(EgError::domain(format!("unknown scan '{other}'"))),
    }
}
