use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use epspect::eploc::{self, EpOptions};
use epspect::exactpoly::{parse_q, q_to_string, Q};
use epspect::lattice::{self, build_hamiltonian, hermiticity_flag, Convention, Hermiticity, ModelParams, RobinData};
use epspect::linalg;
use epspect::metric::{self, DysonKind};
use epspect::secular::{self, Branch, Param};
use epspect::sweep::{self, fmt_g17, Grid, SturmianKind, SweepSpec, Swept};

#[derive(Parser)]
#[command(name = "epspect", version, about = "Exceptional points and metrics of boundary-controlled lattice Hamiltonians")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Reality tolerance on |Im E| (default: EPSPECT_TOL or 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Width of certified root boxes.
    #[arg(long, global = true, default_value_t = 1e-12)]
    precision: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of one model.
    Spectrum(ModelArgs),
    /// Exact characteristic polynomial det(E - H) of the shifted model.
    Charpoly {
        #[arg(long)]
        n: usize,
        /// Rational value, or `u` to keep it symbolic.
        #[arg(long, default_value = "0")]
        u: String,
        /// Rational value of r^2, or `r2` to keep it symbolic.
        #[arg(long, default_value = "0")]
        r2: String,
    },
    /// Sturmian curves and reference-table checks.
    Sturmian {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CurveKind::R2)]
        kind: CurveKind,
        /// Compare r^2(E^2) against the reference table.
        #[arg(long)]
        check_table: bool,
        /// Check the factorized and nested-fraction forms.
        #[arg(long)]
        check_rearrangement: bool,
        /// Sample the curve on `lo:hi:count`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Exceptional points.
    Ep {
        #[command(subcommand)]
        command: EpCommand,
    },
    /// Hermitian metric and Dyson factor.
    Metric {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = FactorKind::HermitianSqrt)]
        factor: FactorKind,
    },
    /// Robin data (alpha, beta, h) to the corner parameter z.
    Robin {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        h: f64,
        /// Also report the spectrum of the N-site model with this z.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Parameter sweep.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum EpCommand {
    /// All EPs on the r = 0 slice.
    Locate {
        #[arg(long)]
        n: usize,
        /// Experimental: search the slice with this rational r^2 instead.
        #[arg(long)]
        r2: Option<String>,
    },
    /// Jordan-chain certificate at a given (u, E).
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        e: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        e_im: f64,
    },
    /// Discriminant in E as a polynomial in u, with its real roots.
    Discriminant {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    R2,
    UPlus,
    UMinus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FactorKind {
    HermitianSqrt,
    Triangular,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z_im: Option<f64>,
    #[arg(long)]
    unshifted: bool,
    /// ModelParams as a JSON file.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// SweepSpec as a JSON file; other sweep flags are then ignored.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    swept: Option<SweptArg>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    fixed: f64,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = 101)]
    count: usize,
    #[arg(long, value_enum)]
    sturmian: Option<CurveKind>,
    #[arg(long)]
    unshifted: bool,
    #[arg(long)]
    no_ep_markers: bool,
    /// Write a gnuplot script for the emitted data to this path.
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweptArg {
    R,
    U,
    #[value(name = "E_on_sturmian", alias = "e")]
    EOnSturmian,
}

enum Failure {
    Usage(String),
    Compute { kind: String, message: String },
}

impl Failure {
    fn compute<E: std::fmt::Debug + std::fmt::Display>(e: E) -> Failure {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
        Failure::Compute { kind, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute { kind, message }) => {
            eprintln!("{}", json!({ "error": kind, "message": message }));
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: String) -> CliResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(Failure::compute),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(Failure::compute)
        }
    }
}

fn emit_json(cli: &Cli, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).map_err(Failure::compute)?;
    s.push('\n');
    emit(cli, s)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn tol(cli: &Cli) -> CliResult<f64> {
    let t = cli.tol.unwrap_or_else(sweep::default_tol);
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(usage("--tol must be positive and finite"))
    }
}

fn precision(cli: &Cli) -> CliResult<f64> {
    if cli.precision > 0.0 && cli.precision.is_finite() {
        Ok(cli.precision)
    } else {
        Err(usage("--precision must be positive and finite"))
    }
}

fn model(args: &ModelArgs) -> CliResult<ModelParams> {
    let conv = if args.unshifted { Convention::Unshifted } else { Convention::Shifted };
    if let Some(path) = &args.params {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let n = args.n.ok_or_else(|| usage("--n is required"))?;
    let p = match (args.u, args.r, args.z_re, args.z_im) {
        (Some(u), Some(r), None, None) => ModelParams::with_shift(n, u, r),
        (None, None, Some(re), Some(im)) => ModelParams::with_z(n, Complex64::new(re, im)),
        _ => return Err(usage("give either --u and --r, or --z-re and --z-im")),
    };
    p.map(|p| p.convention(conv)).map_err(|e| usage(e.to_string()))
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(cli, args),
        Command::Charpoly { n, u, r2 } => cmd_charpoly(cli, *n, u, r2),
        Command::Sturmian { n, kind, check_table, check_rearrangement, grid } => {
            cmd_sturmian(cli, *n, *kind, *check_table, *check_rearrangement, grid.as_deref())
        }
        Command::Ep { command } => cmd_ep(cli, command),
        Command::Metric { model: m, factor } => cmd_metric(cli, m, *factor),
        Command::Robin { alpha, beta, h, n } => cmd_robin(cli, *alpha, *beta, *h, *n),
        Command::Sweep(args) => cmd_sweep(cli, args),
    }
}

fn cmd_spectrum(cli: &Cli, args: &ModelArgs) -> CliResult<()> {
    let p = model(args)?;
    let tol = tol(cli)?;
    let ev = secular::spectrum(&p).map_err(Failure::compute)?;
    let n_real = ev.iter().filter(|z| z.im.abs() <= tol).count();
    match cli.format {
        Format::Json => emit_json(
            cli,
            &json!({
                "params": p,
                "hermitian": hermiticity_flag(&p) == Hermiticity::Hermitian,
                "eigenvalues": ev.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "n_real": n_real,
            }),
        ),
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                ev.iter().enumerate().map(|(k, z)| vec![(k + 1).to_string(), fmt_g17(z.re), fmt_g17(z.im)]).collect();
            emit(cli, csv_text(&["index", "re", "im"], &rows))
        }
    }
}

fn param(s: &str, symbol: &str) -> CliResult<Param> {
    if s == symbol {
        Ok(Param::Symbol)
    } else {
        parse_q(s).map(Param::Value).ok_or_else(|| usage(format!("not a rational number: {s:?}")))
    }
}

fn cmd_charpoly(cli: &Cli, n: usize, u: &str, r2: &str) -> CliResult<()> {
    let sp = secular::secular_poly(n, param(u, "u")?, param(r2, "r2")?).map_err(Failure::compute)?;
    match cli.format {
        Format::Json => {
            let mut v = serde_json::to_value(&sp).map_err(Failure::compute)?;
            v["display"] = json!(sp.to_string());
            emit_json(cli, &v)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = match sp.numeric() {
                Some(p) => p.coeffs().iter().enumerate().map(|(k, c)| vec![k.to_string(), q_to_string(c)]).collect(),
                None => sp
                    .bivariate()
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let sym = sp.symbol().cloned().expect("symbolic");
                        vec![k.to_string(), format!("\"{}\"", c.clone().with_var(sym))]
                    })
                    .collect(),
            };
            emit(cli, csv_text(&["power", "coefficient"], &rows))
        }
    }
}

fn parse_grid(s: &str) -> CliResult<Grid> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("grid must be lo:hi:count, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(Grid::Range {
        lo: parts[0].parse().map_err(|_| bad())?,
        hi: parts[1].parse().map_err(|_| bad())?,
        count: parts[2].parse().map_err(|_| bad())?,
    })
}

fn sturmian_kind(k: CurveKind) -> SturmianKind {
    match k {
        CurveKind::R2 => SturmianKind::R2OfE2,
        CurveKind::UPlus => SturmianKind::UOfEPlus,
        CurveKind::UMinus => SturmianKind::UOfEMinus,
    }
}

fn cmd_sturmian(
    cli: &Cli,
    n: usize,
    kind: CurveKind,
    check_table: bool,
    check_rearrangement: bool,
    grid: Option<&str>,
) -> CliResult<()> {
    if check_table || check_rearrangement {
        let mut results = Vec::new();
        if check_table {
            results.push(("table", secular::check_table(n).map_err(Failure::compute)?));
        }
        if check_rearrangement {
            results.push(("rearrangement", secular::verify_rearrangement(n).map_err(Failure::compute)?));
        }
        let text = match cli.format {
            Format::Json => {
                let obj: serde_json::Map<String, Value> =
                    results.iter().map(|(k, v)| (k.to_string(), json!(if *v { "PASS" } else { "FAIL" }))).collect();
                format!("{}\n", json!({ "n": n, "checks": obj }))
            }
            Format::Csv => {
                let rows: Vec<Vec<String>> = results
                    .iter()
                    .map(|(k, v)| vec![n.to_string(), k.to_string(), if *v { "PASS" } else { "FAIL" }.into()])
                    .collect();
                csv_text(&["n", "check", "result"], &rows)
            }
        };
        emit(cli, text)?;
        return if results.iter().all(|(_, v)| *v) {
            Ok(())
        } else {
            Err(Failure::Compute { kind: "CheckFailed".into(), message: format!("N = {n} does not match") })
        };
    }
    if let Some(g) = grid {
        let table = sweep::sturmian_plotdata(n, sturmian_kind(kind), &parse_grid(g)?).map_err(Failure::compute)?;
        return emit_table(cli, &table, None);
    }
    let curve = match kind {
        CurveKind::R2 => secular::SturmianCurve::R2(secular::sturmian_r2(n).map_err(Failure::compute)?),
        CurveKind::UPlus => secular::SturmianCurve::U(secular::sturmian_u(n, Branch::Plus).map_err(Failure::compute)?),
        CurveKind::UMinus => {
            secular::SturmianCurve::U(secular::sturmian_u(n, Branch::Minus).map_err(Failure::compute)?)
        }
    };
    match cli.format {
        Format::Json => emit_json(cli, &serde_json::to_value(&curve).map_err(Failure::compute)?),
        Format::Csv => {
            let (num, den) = match &curve {
                secular::SturmianCurve::R2(c) => (c.curve.numerator().clone(), c.curve.denominator().clone()),
                secular::SturmianCurve::U(c) => (c.radicand.clone(), c.denominator.clone()),
            };
            let len = num.coeffs().len().max(den.coeffs().len());
            let rows: Vec<Vec<String>> = (0..len)
                .map(|k| vec![k.to_string(), q_to_string(&num.coeff(k)), q_to_string(&den.coeff(k))])
                .collect();
            let header = match curve {
                secular::SturmianCurve::R2(_) => ["power", "numerator", "denominator"],
                secular::SturmianCurve::U(_) => ["power", "radicand", "denominator"],
            };
            emit(cli, csv_text(&header, &rows))
        }
    }
}

fn cmd_ep(cli: &Cli, command: &EpCommand) -> CliResult<()> {
    let opts = EpOptions { precision: precision(cli)?, ..EpOptions::default() };
    match command {
        EpCommand::Locate { n, r2 } => {
            let r2: Q = match r2 {
                Some(s) => parse_q(s).ok_or_else(|| usage(format!("not a rational number: {s:?}")))?,
                None => Q::from_integer(0.into()),
            };
            let certs = eploc::locate_eps_at(*n, &r2, &opts).map_err(Failure::compute)?;
            match cli.format {
                Format::Json => emit_json(cli, &json!(certs.iter().map(|c| c.to_json()).collect::<Vec<_>>())),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = certs
                        .iter()
                        .map(|c| {
                            vec![
                                fmt_g17(c.u()),
                                fmt_g17(c.e().re),
                                fmt_g17(c.e().im),
                                c.algebraic_multiplicity().to_string(),
                                c.geometric_multiplicity().to_string(),
                                fmt_g17(c.jordan.relative_residual),
                            ]
                        })
                        .collect();
                    emit(cli, csv_text(&["u_star", "re_E", "im_E", "alg_mult", "geo_mult", "residual"], &rows))
                }
            }
        }
        EpCommand::Certify { n, u, e, e_im } => {
            let cert = eploc::certify(*n, *u, Complex64::new(*e, *e_im)).map_err(Failure::compute)?;
            match cli.format {
                Format::Json => emit_json(cli, &cert.to_json()),
                Format::Csv => emit(
                    cli,
                    csv_text(
                        &["u_star", "re_E", "im_E", "alg_mult", "geo_mult", "residual"],
                        &[vec![
                            fmt_g17(cert.u()),
                            fmt_g17(cert.e().re),
                            fmt_g17(cert.e().im),
                            cert.algebraic_multiplicity().to_string(),
                            cert.geometric_multiplicity().to_string(),
                            fmt_g17(cert.jordan.relative_residual),
                        ]],
                    ),
                ),
            }
        }
        EpCommand::Discriminant { n } => {
            let zero = Q::from_integer(0.into());
            let prof = eploc::discriminant_in_e_at(*n, &zero, &opts).map_err(Failure::compute)?;
            match cli.format {
                Format::Json => emit_json(cli, &serde_json::to_value(&prof).map_err(Failure::compute)?),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = prof
                        .real_roots
                        .iter()
                        .map(|b| {
                            let (lo, hi) = b.real_interval().expect("real root");
                            vec![fmt_g17(b.value()), q_to_string(lo), q_to_string(hi), b.multiplicity.to_string()]
                        })
                        .collect();
                    emit(cli, csv_text(&["u", "lo", "hi", "multiplicity"], &rows))
                }
            }
        }
    }
}

fn cmd_metric(cli: &Cli, args: &ModelArgs, factor: FactorKind) -> CliResult<()> {
    let p = model(args)?;
    let h = build_hamiltonian(&p);
    let sol = metric::solve_dieudonne(&h).map_err(Failure::compute)?;
    let kind = match factor {
        FactorKind::HermitianSqrt => DysonKind::HermitianSqrt,
        FactorKind::Triangular => DysonKind::Triangular,
    };
    let dyson = metric::dyson_factor(&sol.representative, kind).map_err(Failure::compute)?;
    match cli.format {
        Format::Json => {
            let mut v = sol.to_json();
            v["dyson"] = dyson.to_json();
            emit_json(cli, &v)
        }
        Format::Csv => {
            let mut rows = Vec::new();
            let packed = linalg::to_packed_lower(&sol.representative);
            let mut k = 0;
            for i in 0..p.n {
                for j in 0..=i {
                    rows.push(vec![i.to_string(), j.to_string(), fmt_g17(packed[k][0]), fmt_g17(packed[k][1])]);
                    k += 1;
                }
            }
            emit(cli, csv_text(&["row", "col", "re", "im"], &rows))
        }
    }
}

fn cmd_robin(cli: &Cli, alpha: f64, beta: f64, h: f64, n: Option<usize>) -> CliResult<()> {
    let z = lattice::robin_to_z(&RobinData { alpha, beta, h }).map_err(Failure::compute)?;
    let spectrum = match n {
        Some(n) => {
            let p = ModelParams::with_z(n, z).map_err(|e| usage(e.to_string()))?.convention(Convention::Unshifted);
            Some(secular::spectrum(&p).map_err(Failure::compute)?)
        }
        None => None,
    };
    match cli.format {
        Format::Json => {
            let mut v = json!({ "z": [z.re, z.im] });
            if let Some(s) = spectrum {
                v["eigenvalues"] = json!(s.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>());
            }
            emit_json(cli, &v)
        }
        Format::Csv => emit(cli, csv_text(&["z_re", "z_im"], &[vec![fmt_g17(z.re), fmt_g17(z.im)]])),
    }
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mut spec: SweepSpec =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if let Some(t) = cli.tol {
                spec.tol = t;
            }
            spec
        }
        None => {
            let n = args.n.ok_or_else(|| usage("--n is required"))?;
            let swept = match args.swept.ok_or_else(|| usage("--swept is required"))? {
                SweptArg::R => Swept::R,
                SweptArg::U => Swept::U,
                SweptArg::EOnSturmian => Swept::EOnSturmian,
            };
            let (lo, hi) = match (args.lo, args.hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => return Err(usage("--lo and --hi are required")),
            };
            let mut spec = SweepSpec::new(n, swept, args.fixed, Grid::Range { lo, hi, count: args.count });
            spec.tol = tol(cli)?;
            spec.sturmian = args.sturmian.map(sturmian_kind);
            spec.ep_markers = !args.no_ep_markers;
            if args.unshifted {
                spec.convention = Convention::Unshifted;
            }
            spec
        }
    };
    spec.grid.points().map_err(|e| usage(e.to_string()))?;
    let table = sweep::run_sweep_with_jobs(&spec, cli.jobs).map_err(Failure::compute)?;
    emit_table(cli, &table, args.plot_script.as_ref())
}

fn emit_table(cli: &Cli, table: &sweep::SweepTable, plot: Option<&PathBuf>) -> CliResult<()> {
    if let Some(path) = plot {
        let data = cli.out.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "sweep.csv".into());
        fs::write(path, sweep::plot_script(table, &data)).map_err(Failure::compute)?;
    }
    match cli.format {
        Format::Json => emit_json(cli, &serde_json::to_value(table).map_err(Failure::compute)?),
        Format::Csv => emit(cli, sweep::to_csv(table).map_err(Failure::compute)?),
    }
}
