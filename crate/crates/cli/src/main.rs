//! `ecoepi` — scenario-driven front end for the periodic eco-epidemic
//! dynamics engine. See `ecoepi --help` for the subcommands; exit codes
//! are 0 success, 1 I/O, 2 parse/validation, 3 regime or hypothesis
//! mismatch, 4 solver failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ecoepi_core::endemic::{self, EndemicError, PeriodicOrbit};
use ecoepi_core::integrate::{integrate_system, Method};
use ecoepi_core::mawhin::{self, AlgebraicRoot, MawhinBounds, MawhinError};
use ecoepi_core::model::State;
use ecoepi_core::scenario::{parse_config, Scenario, ScenarioError};
use ecoepi_core::{aux_orbits, threshold};

#[derive(Parser)]
#[command(name = "ecoepi", version, about = "Periodic eco-epidemic model toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the threshold R by both routes and classify the regime
    Threshold {
        #[arg(long)]
        config: PathBuf,
        /// promote positive-average (C2) warnings to errors
        #[arg(long)]
        strict: bool,
    },
    /// Integrate the system from a named or literal initial condition
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// init name from the config, or literal S,I,Y
        #[arg(long)]
        init: String,
        /// integration horizon; defaults to the config's t_end
        #[arg(long)]
        t_end: Option<f64>,
        /// output spacing; defaults to the config's dt or omega/200
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Newton shooting for the endemic periodic orbit
    FindOrbit {
        #[arg(long)]
        config: PathBuf,
        /// literal S,I,Y seed for the shooting iteration
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the a priori bounds and the algebraic root system
    Bounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Full pipeline: threshold, orbits, bounds, trajectories, into a directory
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    Io(String),
    Config(ScenarioError),
    BadArgs(String),
    Mismatch(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(ScenarioError::Io { .. }) => 1,
            CliError::Config(_) | CliError::BadArgs(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) | CliError::BadArgs(m) | CliError::Mismatch(m) | CliError::Solver(m) => {
                write!(f, "{m}")
            }
            CliError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl From<EndemicError> for CliError {
    fn from(e: EndemicError) -> Self {
        match e {
            EndemicError::RegimeMismatch(_) => CliError::Mismatch(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<MawhinError> for CliError {
    fn from(e: MawhinError) -> Self {
        match e {
            MawhinError::HypothesisViolated(_) | MawhinError::RegimeMismatch(_) => {
                CliError::Mismatch(e.to_string())
            }
            _ => CliError::Solver(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("ECOEPI_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn load(config: &Path, strict: bool) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", config.display())))?;
    let base = config.parent().unwrap_or(Path::new("."));
    let sc = parse_config(&text, base, strict).map_err(CliError::Config)?;
    for w in &sc.warnings {
        eprintln!("warning: {w}");
    }
    Ok(sc)
}

fn parse_state(text: &str) -> Option<State> {
    let parts: Vec<f64> = text.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match parts[..] {
        [s, i, y] => Some(State::new(s, i, y)),
        _ => None,
    }
}

fn write_csv(path: &Path, samples: &[(f64, State)]) -> Result<(), CliError> {
    let mut out = String::from("t,S,I,Y\n");
    for (t, x) in samples {
        writeln!(out, "{t},{},{},{}", x.s, x.i, x.y).unwrap();
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Threshold { config, strict } => {
            let sc = load(&config, strict)?;
            print!("{}", threshold_text(&sc)?);
            Ok(())
        }
        Cmd::Simulate { config, init, t_end, dt, out } => {
            let sc = load(&config, false)?;
            let x0 = sc
                .initial_condition(&init)
                .or_else(|| parse_state(&init))
                .ok_or_else(|| CliError::BadArgs(format!("unknown init {init:?}")))?;
            let t_end = t_end.unwrap_or(sc.t_end);
            let dt = dt.or(sc.dt).unwrap_or(sc.omega / 200.0);
            let traj = integrate_system(&sc.coefficients, 0.0, x0, t_end, Method::default(), Some(dt))
                .map_err(|e| CliError::Solver(e.to_string()))?;
            write_csv(&out, &traj.samples)?;
            println!("wrote {} samples to {}", traj.samples.len(), out.display());
            Ok(())
        }
        Cmd::FindOrbit { config, seed, out } => {
            let sc = load(&config, false)?;
            let seed = match seed {
                None => None,
                Some(text) => Some(
                    parse_state(&text)
                        .ok_or_else(|| CliError::BadArgs(format!("bad seed {text:?}")))?,
                ),
            };
            let orbit = endemic::find_endemic_orbit(&sc.coefficients, seed)?;
            write_csv(&out, &orbit.samples)?;
            print!("{}", orbit_text(&orbit));
            println!("samples written to {}", out.display());
            Ok(())
        }
        Cmd::Bounds { config } => {
            let sc = load(&config, false)?;
            print!("{}", bounds_text(&sc)?);
            Ok(())
        }
        Cmd::Report { config, out } => {
            let sc = load(&config, false)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
            report(&sc, &out)
        }
    }
}

fn threshold_text(sc: &Scenario) -> Result<String, CliError> {
    let rep = threshold::compute_r(&sc.coefficients).map_err(|e| CliError::Solver(e.to_string()))?;
    let mut text = String::new();
    writeln!(text, "R (quadrature)  = {:.10}", rep.r_quadrature).unwrap();
    writeln!(text, "R (lambda root) = {:.10}", rep.r_lambda_root).unwrap();
    writeln!(text, "R (averages)    = {:.10}", rep.r_averages).unwrap();
    writeln!(text, "regime          = {:?}", rep.regime).unwrap();
    writeln!(text, "avg(beta*s0)    = {:.10}", rep.beta_s0_avg).unwrap();
    writeln!(text, "avg(c)          = {:.10}", rep.c_avg).unwrap();
    writeln!(text, "avg(eta*y0)     = {:.10}", rep.eta_y0_avg).unwrap();
    for d in &rep.diagnostics {
        writeln!(text, "note: {d}").unwrap();
    }
    Ok(text)
}

fn orbit_text(orbit: &PeriodicOrbit) -> String {
    let mut text = String::new();
    writeln!(
        text,
        "x0          = ({}, {}, {})",
        orbit.x0.s, orbit.x0.i, orbit.x0.y
    )
    .unwrap();
    writeln!(text, "residual    = {:.3e}", orbit.residual).unwrap();
    for (i, m) in orbit.multipliers.iter().enumerate() {
        writeln!(text, "multiplier {} = {m}", i + 1).unwrap();
    }
    writeln!(text, "stability   = {:?}", orbit.stability).unwrap();
    text
}

fn bounds_format(bounds: &MawhinBounds, root: &AlgebraicRoot) -> String {
    let mut text = String::new();
    writeln!(text, "A1 = {:.10}", bounds.a1).unwrap();
    writeln!(text, "A2 = {:.10}", bounds.a2).unwrap();
    writeln!(text, "B1 = {:.10}", bounds.b1).unwrap();
    writeln!(text, "B2 = {:.10}", bounds.b2).unwrap();
    writeln!(text, "theta1 = [{:.10}, {:.10}]", bounds.theta1.0, bounds.theta1.1).unwrap();
    writeln!(text, "theta2 = [{:.10}, {:.10}]", bounds.theta2.0, bounds.theta2.1).unwrap();
    writeln!(text, "theta3 = [{:.10}, {:.10}]", bounds.theta3.0, bounds.theta3.1).unwrap();
    writeln!(text, "permanence floor m = {:.10}", bounds.m).unwrap();
    let p = root.exp_root();
    writeln!(text, "algebraic root (p1, p2, p3) = ({}, {}, {})", root.p1, root.p2, root.p3).unwrap();
    writeln!(text, "algebraic root e^p         = ({}, {}, {})", p.s, p.i, p.y).unwrap();
    writeln!(
        text,
        "degree determinant = {:.10} (sign {})",
        root.determinant,
        if root.determinant < 0.0 { "negative" } else { "non-negative" }
    )
    .unwrap();
    writeln!(text, "M0 = {:.10}", root.m0).unwrap();
    for d in &root.diagnostics {
        writeln!(text, "note: {d}").unwrap();
    }
    text
}

fn bounds_text(sc: &Scenario) -> Result<String, CliError> {
    let root = mawhin::solve_algebraic_root(&sc.coefficients)?;
    let m = mawhin::estimate_permanence_floor(&sc.coefficients)?;
    let bounds = mawhin::compute_bounds(&sc.coefficients, m)?;
    Ok(bounds_format(&bounds, &root))
}

fn report(sc: &Scenario, dir: &Path) -> Result<(), CliError> {
    let params = &sc.coefficients;
    let mut summary = String::new();

    writeln!(summary, "== threshold ==").unwrap();
    summary.push_str(&threshold_text(sc)?);
    let rep = threshold::compute_r(params).map_err(|e| CliError::Solver(e.to_string()))?;

    writeln!(summary, "\n== disease-free orbits ==").unwrap();
    let (prey, both) = aux_orbits::disease_free_orbits(params)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    for (name, orbit) in [("O1 (prey only)", &prey), ("O2 (prey and predator)", &both)] {
        writeln!(
            summary,
            "{name}: x0 = ({}, {}, {}), return residual {:.3e}, infection multiplier {:.6}",
            orbit.initial.s,
            orbit.initial.i,
            orbit.initial.y,
            orbit.return_residual(),
            orbit.infection_multiplier()
        )
        .unwrap();
    }
    let s0 = aux_orbits::s0(params).map_err(|e| CliError::Solver(e.to_string()))?;
    let y0 = aux_orbits::y0(params).map_err(|e| CliError::Solver(e.to_string()))?;
    let n = 201;
    let df: Vec<(f64, State)> = (0..n)
        .map(|i| {
            let t = sc.omega * i as f64 / (n - 1) as f64;
            (t, State::new(s0.value(t), 0.0, y0.value(t)))
        })
        .collect();
    write_csv(&dir.join("orbit_o2.csv"), &df)?;

    match rep.regime {
        threshold::Regime::Permanence => {
            writeln!(summary, "\n== endemic orbit ==").unwrap();
            let orbit = endemic::find_endemic_orbit(params, None)?;
            summary.push_str(&orbit_text(&orbit));
            write_csv(&dir.join("endemic_orbit.csv"), &orbit.samples)?;

            writeln!(summary, "\n== a priori bounds ==").unwrap();
            summary.push_str(&bounds_text(sc)?);
        }
        _ => {
            writeln!(summary, "\nregime is not Permanence; endemic search and bounds skipped.")
                .unwrap();
        }
    }

    writeln!(summary, "\n== trajectories ==").unwrap();
    let dt = sc.dt.unwrap_or(sc.omega / 200.0);
    for (name, x0) in &sc.inits {
        let traj = integrate_system(params, 0.0, *x0, sc.t_end, Method::default(), Some(dt))
            .map_err(|e| CliError::Solver(e.to_string()))?;
        let file = dir.join(format!("sim_{name}.csv"));
        write_csv(&file, &traj.samples)?;
        let (_, end) = traj.last();
        writeln!(
            summary,
            "{name}: from ({}, {}, {}) to ({:.6}, {:.6}, {:.6}) at t = {}; {}",
            x0.s,
            x0.i,
            x0.y,
            end.s,
            end.i,
            end.y,
            sc.t_end,
            file.display()
        )
        .unwrap();
    }

    let summary_path = dir.join("summary.txt");
    std::fs::write(&summary_path, &summary)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", summary_path.display())))?;
    print!("{summary}");
    println!("\nreport written to {}", dir.display());
    Ok(())
}
