//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 state is not
//! X-structured (only the Horodecki value is available), 4 the oracle
//! disagrees with the analytic maximum by more than 1e−3.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chsh::{
    bell_function, horodecki_bmax, horodecki_eigenvalues, x_state_eigenvalues, BellEigenvalues,
    CLASSICAL_BOUND,
};
use crate::dynamics::{
    crossing_roots, ewl_state, time_scan, uniform_grid, EwlParams, QModel, TimeScan,
};
use crate::error::Error;
use crate::numfmt::{fmt_sig, round_sig};
use crate::obp::{obp_set2, optimal_settings, AngleSettings};
use crate::oracle::{brute_force_bmax, certify_settings, OracleConfig};
use crate::qstate::{as_x_state, read_density_json, DensityFile, XState, DEFAULT_OFF_X_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_X: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

/// Largest tolerated `|oracle − analytic|` before `oracle-check` fails.
pub const ORACLE_AGREEMENT: f64 = 1e-3;

const VERSION_LINE: &str = concat!("# bellopt ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "bellopt", version, about = "Optimal CHSH-Bell settings for two-qubit states")]
pub struct Cli {
    /// Density-matrix JSON file (basis |11>, |10>, |01>, |00>).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write machine output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest magnitude tolerated outside the X pattern.
    #[arg(long, global = true)]
    pub off_x_tol: Option<f64>,
    /// Seed for the oracle's random restarts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print angles in degrees (computation stays in radians).
    #[arg(long, global = true)]
    pub degrees: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum Bell value, eigenvalues and violation verdict.
    Bmax,
    /// Optimal measurement angles for an X state.
    Angles,
    /// Time series of B_max and the optimal angles under amplitude damping.
    Scan {
        /// Extended Werner-like initial state ALPHA2,R,DELTA.
        #[arg(long, allow_hyphen_values = true)]
        ewl: Option<String>,
        /// exp:GAMMA | lorentz:LAMBDA,GAMMA0 | table:PATH
        #[arg(long)]
        qmodel: String,
        /// Last time of the uniform grid starting at 0.
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Crossing roots of u2 = u3 over an (alpha^2, r) grid.
    Surface {
        #[arg(long, default_value_t = 50)]
        n_alpha: usize,
        #[arg(long, default_value_t = 50)]
        n_r: usize,
    },
    /// Compare the analytic maximum with a brute-force search.
    OracleCheck {
        #[arg(long, default_value_t = 8)]
        grid_n: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        refine: usize,
    },
}

/// What a command produced: text for stdout, diagnostics, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        stderr.push('\n');
        Outcome { stdout: String::new(), stderr, code }
    }
}

fn input_error(e: Error) -> Outcome {
    Outcome::fail(EXIT_INPUT, format!("error: {e}"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text.trim_end())
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let mut out = match &cli.command {
        Command::Bmax => cmd_bmax(cli),
        Command::Angles => cmd_angles(cli),
        Command::Scan { ewl, qmodel, tmax, samples } => {
            cmd_scan(cli, ewl.as_deref(), qmodel, *tmax, *samples)
        }
        Command::Surface { n_alpha, n_r } => cmd_surface(cli, *n_alpha, *n_r),
        Command::OracleCheck { grid_n, restarts, refine } => {
            cmd_oracle_check(cli, *grid_n, *restarts, *refine)
        }
    };
    if let Some(path) = &cli.output {
        if out.code != EXIT_INPUT {
            if let Err(e) = std::fs::write(path, &out.stdout) {
                return input_error(e.into());
            }
            out.stdout.clear();
        }
    }
    out
}

fn load_input(cli: &Cli) -> Result<(DensityFile, f64), Outcome> {
    let path = cli
        .input
        .as_deref()
        .ok_or_else(|| Outcome::fail(EXIT_INPUT, "error: --input PATH is required"))?;
    let file = read_density_json(path).map_err(input_error)?;
    let tol = cli.off_x_tol.or(file.off_x_tol).unwrap_or(DEFAULT_OFF_X_TOL);
    if !(tol >= 0.0) {
        return Err(Outcome::fail(EXIT_INPUT, "error: --off-x-tol must be non-negative"));
    }
    Ok((file, tol))
}

fn num(v: f64) -> Value {
    json!(round_sig(v))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn fmt_list(vs: &[f64]) -> String {
    vs.iter().map(|v| fmt_sig(*v)).collect::<Vec<_>>().join(" ")
}

pub fn cmd_bmax(cli: &Cli) -> Outcome {
    let (file, tol) = match load_input(cli) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let (bmax, u, region, code) = match as_x_state(&file.rho, tol) {
        Ok(x) => {
            let u = x_state_eigenvalues(&x);
            (u.bmax(), [u.u1, u.u2, u.u3], Some(u.region.number()), EXIT_OK)
        }
        Err(Error::NotXStructured { .. }) => {
            let ev = horodecki_eigenvalues(&file.rho);
            (horodecki_bmax(&file.rho), ev, None, EXIT_NOT_X)
        }
        Err(e) => return input_error(e),
    };
    let violates = bmax > CLASSICAL_BOUND;
    let stdout = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "bmax": num(bmax),
            "u": u.iter().map(|v| num(*v)).collect::<Vec<_>>(),
            "region": region,
            "violates": violates,
        })),
        Format::Csv => format!(
            "bmax,u1,u2,u3,region,violates\n{},{},{},{},{},{}\n",
            fmt_sig(bmax),
            fmt_sig(u[0]),
            fmt_sig(u[1]),
            fmt_sig(u[2]),
            region.map(|r| r.to_string()).unwrap_or_default(),
            violates
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "bmax      {}", fmt_sig(bmax));
            let _ = writeln!(s, "u         {}", fmt_list(&u));
            match region {
                Some(r) => {
                    let _ = writeln!(s, "region    {r}");
                }
                None => {
                    let _ = writeln!(s, "region    none (state is not X-structured; Horodecki value only)");
                }
            }
            let _ = writeln!(s, "violates  {violates}");
            s
        }
    };
    Outcome { stdout, stderr: String::new(), code }
}

/// Angle set as printed: rounded values and the Bell value they reach.
/// `bell` prints at full precision so the printed angles re-verify it.
struct PrintedSet {
    set: u8,
    theta: [f64; 4],
    phi: [f64; 4],
    bell: f64,
}

fn printed(x: &XState, s: &AngleSettings) -> PrintedSet {
    let theta = s.theta.map(round_sig);
    let phi = s.phi.map(round_sig);
    let exact = AngleSettings { theta, phi, set_id: s.set_id };
    let bell = bell_function(&crate::qstate::x_to_dense(x), &exact.to_bell_settings());
    PrintedSet { set: s.set_id.number(), theta, phi, bell }
}

fn display_angles(vs: &[f64; 4], degrees: bool) -> [f64; 4] {
    if degrees {
        vs.map(f64::to_degrees)
    } else {
        *vs
    }
}

pub fn cmd_angles(cli: &Cli) -> Outcome {
    let (file, tol) = match load_input(cli) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let x = match as_x_state(&file.rho, tol) {
        Ok(x) => x,
        Err(e @ Error::NotXStructured { .. }) => {
            return Outcome::fail(
                EXIT_NOT_X,
                format!("error: {e}; horodecki bmax = {}", fmt_sig(horodecki_bmax(&file.rho))),
            )
        }
        Err(e) => return input_error(e),
    };
    let (active, u) = optimal_settings(&x);
    let mut sets = vec![printed(&x, &active)];
    if u.tie {
        sets.push(printed(&x, &obp_set2(&x)));
    }
    let bmax = u.bmax();
    let violates = bmax > CLASSICAL_BOUND;
    let units = if cli.degrees { "degrees" } else { "radians" };

    let stdout = match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let set_json = |p: &PrintedSet| {
                json!({
                    "set": p.set,
                    "theta": display_angles(&p.theta, cli.degrees).map(round_sig),
                    "phi": display_angles(&p.phi, cli.degrees).map(round_sig),
                    "bell": p.bell,
                })
            };
            let mut v = set_json(&sets[0]);
            let obj = v.as_object_mut().expect("object");
            obj.insert("tie".into(), json!(u.tie));
            obj.insert("units".into(), json!(units));
            obj.insert("bmax".into(), num(bmax));
            obj.insert("violates".into(), json!(violates));
            if let Some(alt) = sets.get(1) {
                obj.insert("alternate".into(), set_json(alt));
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("set,tie,theta1,theta1p,theta2,theta2p,phi1,phi1p,phi2,phi2p,bell\n");
            for p in &sets {
                let th = display_angles(&p.theta, cli.degrees);
                let ph = display_angles(&p.phi, cli.degrees);
                let cols: Vec<String> = th.iter().chain(ph.iter()).map(|v| fmt_sig(*v)).collect();
                let _ = writeln!(s, "{},{},{},{}", p.set, u.tie, cols.join(","), p.bell);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "set       {}", sets[0].set);
            let _ = writeln!(s, "tie       {}", u.tie);
            let _ = writeln!(s, "u         {}", fmt_list(&[u.u1, u.u2, u.u3]));
            for (i, p) in sets.iter().enumerate() {
                let label = if i == 0 { "active" } else { "alternate" };
                let _ = writeln!(s, "[{label} set {}] ({units}, order 1, 1', 2, 2')", p.set);
                let _ = writeln!(s, "theta     {}", fmt_list(&display_angles(&p.theta, cli.degrees)));
                let _ = writeln!(s, "phi       {}", fmt_list(&display_angles(&p.phi, cli.degrees)));
                let _ = writeln!(s, "bell      {}", p.bell);
            }
            let _ = writeln!(s, "bmax      {}", fmt_sig(bmax));
            let _ = writeln!(s, "violates  {violates}");
            s
        }
    };
    Outcome::ok(stdout)
}

fn parse_ewl(arg: &str) -> Result<EwlParams, Error> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("--ewl expects ALPHA2,R,DELTA, got {arg:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad number {p:?} in --ewl")))?;
    }
    EwlParams::new(v[0], v[1], v[2])
}

const SCAN_HEADER: &str =
    "t,q2,u1,u2,u3,B1,B2,bmax,active_set,theta1,theta1p,theta2,theta2p,phi1,phi1p,phi2,phi2p";

pub fn cmd_scan(cli: &Cli, ewl: Option<&str>, qmodel: &str, t_max: f64, samples: usize) -> Outcome {
    let x0 = match (ewl, cli.input.is_some()) {
        (Some(_), true) => {
            return Outcome::fail(EXIT_INPUT, "error: give either --ewl or --input, not both")
        }
        (Some(arg), false) => match parse_ewl(arg) {
            Ok(p) => ewl_state(&p),
            Err(e) => return input_error(e),
        },
        (None, true) => {
            let (file, tol) = match load_input(cli) {
                Ok(v) => v,
                Err(o) => return o,
            };
            match as_x_state(&file.rho, tol) {
                Ok(x) => x,
                Err(e @ Error::NotXStructured { .. }) => {
                    return Outcome::fail(EXIT_NOT_X, format!("error: {e}; scans need an X state"))
                }
                Err(e) => return input_error(e),
            }
        }
        (None, false) => return Outcome::fail(EXIT_INPUT, "error: scan needs --ewl or --input"),
    };
    let model = match QModel::parse_descriptor(qmodel) {
        Ok(m) => m,
        Err(e) => return input_error(e),
    };
    let grid = match uniform_grid(t_max, samples) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    let scan = match time_scan(&x0, &model, &grid) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let stderr: String = scan.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let stdout = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => scan_json(&scan, cli.degrees),
        _ => scan_csv(&scan, cli.degrees),
    };
    Outcome { stdout, stderr, code: EXIT_OK }
}

fn scan_row_values(u: &BellEigenvalues, s: &AngleSettings, degrees: bool) -> Vec<f64> {
    let mut v = vec![u.u1, u.u2, u.u3, u.b1(), u.b2(), u.bmax()];
    v.extend(display_angles(&s.theta, degrees));
    v.extend(display_angles(&s.phi, degrees));
    v
}

fn scan_csv(scan: &TimeScan, degrees: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{VERSION_LINE}");
    let _ = writeln!(s, "{SCAN_HEADER}");
    for r in &scan.records {
        let v = scan_row_values(&r.u, &r.settings, degrees);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_sig(r.t),
            fmt_sig(r.q2),
            fmt_sig(v[0]),
            fmt_sig(v[1]),
            fmt_sig(v[2]),
            fmt_sig(v[3]),
            fmt_sig(v[4]),
            fmt_sig(v[5]),
            r.active_set.number(),
            v[6..].iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(",")
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "# events");
    let _ = writeln!(s, "event,t,q2,bmax");
    for e in scan.events() {
        let _ = writeln!(s, "{},{},{},{}", e.kind, fmt_sig(e.t), fmt_sig(e.q2), fmt_sig(e.bmax));
    }
    for w in &scan.warnings {
        let _ = writeln!(s, "# warning: {w}");
    }
    s
}

fn scan_json(scan: &TimeScan, degrees: bool) -> String {
    let names: Vec<&str> = SCAN_HEADER.split(',').collect();
    let records: Vec<Value> = scan
        .records
        .iter()
        .map(|r| {
            let v = scan_row_values(&r.u, &r.settings, degrees);
            let mut obj = serde_json::Map::new();
            obj.insert(names[0].into(), num(r.t));
            obj.insert(names[1].into(), num(r.q2));
            for (i, name) in names[2..8].iter().enumerate() {
                obj.insert((*name).into(), num(v[i]));
            }
            obj.insert(names[8].into(), json!(r.active_set.number()));
            for (i, name) in names[9..].iter().enumerate() {
                obj.insert((*name).into(), num(v[6 + i]));
            }
            Value::Object(obj)
        })
        .collect();
    let events: Vec<Value> = scan
        .events()
        .map(|e| json!({"event": e.kind.to_string(), "t": num(e.t), "q2": num(e.q2), "bmax": num(e.bmax)}))
        .collect();
    let warnings: Vec<String> = scan.warnings.iter().map(|w| w.to_string()).collect();
    pretty(&json!({
        "version": env!("CARGO_PKG_VERSION"),
        "columns": names,
        "records": records,
        "events": events,
        "warnings": warnings,
    }))
}

/// `(α², r, roots)` over `α²_i = i/n_alpha`, `r_j = j/n_r`, `i, j ≥ 1`.
pub fn surface_rows(n_alpha: usize, n_r: usize) -> Vec<(f64, f64, Vec<f64>)> {
    let mut rows = Vec::with_capacity(n_alpha * n_r);
    for i in 1..=n_alpha {
        let alpha2 = i as f64 / n_alpha as f64;
        for j in 1..=n_r {
            let r = j as f64 / n_r as f64;
            let p = EwlParams { alpha2, r, delta: 0.0 };
            rows.push((alpha2, r, crossing_roots(&p)));
        }
    }
    rows
}

pub fn cmd_surface(cli: &Cli, n_alpha: usize, n_r: usize) -> Outcome {
    if n_alpha < 2 || n_r < 2 {
        return Outcome::fail(EXIT_INPUT, "error: --n-alpha and --n-r must be at least 2");
    }
    let rows = surface_rows(n_alpha, n_r);
    // roots print at full round-trip precision so they re-verify to 1e-10
    let stdout = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => pretty(&json!({
            "version": env!("CARGO_PKG_VERSION"),
            "rows": rows.iter().map(|(a, r, roots)| json!({
                "alpha2": num(*a),
                "r": num(*r),
                "roots": roots,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "{VERSION_LINE}");
            let _ = writeln!(s, "alpha2,r,x_root1,x_root2");
            for (a, r, roots) in &rows {
                let cell = |i: usize| roots.get(i).map(|x| format!("{x}")).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{}", fmt_sig(*a), fmt_sig(*r), cell(0), cell(1));
            }
            s
        }
    };
    Outcome::ok(stdout)
}

pub fn cmd_oracle_check(cli: &Cli, grid_n: usize, restarts: usize, refine: usize) -> Outcome {
    let (file, tol) = match load_input(cli) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let cfg = OracleConfig {
        grid_n,
        refine_iters: refine,
        restarts,
        seed: cli.seed.unwrap_or(0),
    };
    let result = match brute_force_bmax(&file.rho, &cfg) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let (analytic, source, margin) = match as_x_state(&file.rho, tol) {
        Ok(x) => {
            let (s, u) = optimal_settings(&x);
            (u.bmax(), "x-state", certify_settings(&file.rho, &s, &cfg))
        }
        Err(Error::NotXStructured { .. }) => {
            let s = AngleSettings::new(result.theta, result.phi, crate::chsh::Region::Set1);
            (horodecki_bmax(&file.rho), "horodecki", certify_settings(&file.rho, &s, &cfg))
        }
        Err(e) => return input_error(e),
    };
    let difference = result.bmax_est - analytic;
    let code = if difference.abs() > ORACLE_AGREEMENT { EXIT_ORACLE } else { EXIT_OK };
    let stdout = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "analytic": num(analytic),
            "analytic_source": source,
            "oracle": num(result.bmax_est),
            "difference": num(difference),
            "margin": num(margin),
            "evaluations": result.evaluations,
        })),
        Format::Csv => format!(
            "analytic,analytic_source,oracle,difference,margin,evaluations\n{},{},{},{},{},{}\n",
            fmt_sig(analytic),
            source,
            fmt_sig(result.bmax_est),
            fmt_sig(difference),
            fmt_sig(margin),
            result.evaluations
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "analytic    {} ({source})", fmt_sig(analytic));
            let _ = writeln!(s, "oracle      {}", fmt_sig(result.bmax_est));
            let _ = writeln!(s, "difference  {}", fmt_sig(difference));
            let _ = writeln!(s, "margin      {}", fmt_sig(margin));
            let _ = writeln!(s, "evaluations {}", result.evaluations);
            s
        }
    };
    let stderr = if code == EXIT_ORACLE {
        format!("error: oracle and analytic maximum differ by {}\n", fmt_sig(difference))
    } else {
        String::new()
    };
    Outcome { stdout, stderr, code }
}
