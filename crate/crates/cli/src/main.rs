use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use spinorbit::coherent::{default_identity_orders, identity_defect, j1_orbit_family, FamilyKind};
use spinorbit::orbit::scan_orbit_space;
use spinorbit::realified::psd_classify;
use spinorbit::spin_rep::euler_zyz;
use spinorbit::state::{octant_projection_j1, StateFile};
use spinorbit::verify::{run_verify, Fault, VerifyOptions};
use spinorbit::weyl::{build_fock, moment_table, FockStateFile};
use spinorbit::{build_rep, canonicalize, classify_orbit, eigenstate, invariants_f, C64};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "spinorbit", version, about = "SU(2) orbits, invariants and coherent states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the reproduction checks and print a table; exit 1 on any failure.
    Verify {
        /// Run a single named check block.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Write invariants of eigenstates and random states to CSV.
    Scan {
        #[arg(long)]
        j: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the orbit report and invariants of a state file as JSON.
    Classify {
        #[arg(long)]
        state: PathBuf,
    },
    /// Write the j = 1 octant projection of a family to CSV.
    Octant {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Representative angle of the |theta> family.
        #[arg(long, default_value_t = PI / 8.0)]
        theta: f64,
        /// Points per parameter axis.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the strata of the (f0, f1) plane to CSV.
    Psd {
        /// Grid points per unit in f0 and f1.
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the centered moment table of a Fock state as JSON.
    Moments {
        #[arg(long, default_value_t = 64)]
        ntrunc: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Print the resolution-of-identity defect of |j, m> as JSON.
    Identity {
        #[arg(long)]
        j: f64,
        #[arg(long)]
        fiducial: f64,
        /// Quadrature orders alpha,beta,gamma; defaults to (4j+2, 2j+2, 4j+2).
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    SigmaX,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    S2,
    Rp2,
    Theta,
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::S2 => "s2",
            FamilyArg::Rp2 => "rp2",
            FamilyArg::Theta => "theta",
        }
    }
}

/// Failure to be reported with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<ExitCode, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("spinorbit: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Verify { only, inject_fault } => verify(only, inject_fault),
        Command::Scan { j, samples, seed, out } => scan(j, samples, seed, &out),
        Command::Classify { state } => classify(&state),
        Command::Octant { family, theta, grid, out } => octant(family, theta, grid, &out),
        Command::Psd { grid, out } => psd(grid, &out),
        Command::Moments { ntrunc, hbar, state, max_order } => moments(ntrunc, hbar, &state, max_order),
        Command::Identity { j, fiducial, orders } => identity(j, fiducial, orders),
    }
}

fn verify(only: Option<String>, fault: Option<FaultArg>) -> CmdResult {
    let options = VerifyOptions { only, fault: fault.map(|FaultArg::SigmaX| Fault::CorruptSigmaX) };
    let reports = run_verify(&options)?;
    println!("spinorbit {VERSION} verify");
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    println!("{} of {} checks passed", reports.len() - failed.len(), reports.len());
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        println!("failed: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn header(out: &mut String, command: &str, config: &[(&str, String)]) {
    writeln!(out, "# spinorbit {VERSION} {command}").unwrap();
    for (k, v) in config {
        writeln!(out, "# {k} = {v}").unwrap();
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, text: &str) -> Result<(), UsageError> {
    fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn scan(j: f64, samples: usize, seed: u64, out: &Path) -> CmdResult {
    let rep = build_rep(j)?;
    let rows = scan_orbit_space(&rep, samples, seed)?;
    let mut text = String::new();
    header(
        &mut text,
        "scan",
        &[("j", rep.spin().to_string()), ("samples", samples.to_string()), ("seed", seed.to_string())],
    );
    text.push_str("f1,f2,f3,f4,f5,f6,f7,f8,orbit_dim,seed_kind\n");
    for r in &rows {
        for f in r.invariants.0 {
            text.push_str(&num(f));
            text.push(',');
        }
        writeln!(text, "{},{}", r.orbit_dim, r.seed_kind.as_str()).unwrap();
    }
    write_file(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn classify(path: &Path) -> CmdResult {
    let state = StateFile::from_json(&read_file(path)?)?.into_state()?;
    let rep = build_rep(state.j())?;
    let report = classify_orbit(&rep, &state)?;
    let f = invariants_f(&rep, &state)?;
    let value = json!({
        "j": state.j(),
        "report": report,
        "invariants": f.0,
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(ExitCode::SUCCESS)
}

fn octant(family: FamilyArg, theta: f64, grid: usize, out: &Path) -> CmdResult {
    if grid == 0 {
        return Err(UsageError("--grid must be positive".into()));
    }
    let mut text = String::new();
    let mut config = vec![("j", "1".to_string()), ("family", family.name().to_string()), ("grid", grid.to_string())];
    let states = match family {
        FamilyArg::S2 | FamilyArg::Rp2 => {
            let kind = if family == FamilyArg::S2 { FamilyKind::S2 } else { FamilyKind::RP2 };
            config.push(("parameters", "alpha = (pi/2) k/grid, k = 0..grid; beta = 2 pi l/grid, l < grid".into()));
            (0..=grid)
                .flat_map(|k| (0..grid).map(move |l| (k, l)))
                .map(|(k, l)| {
                    j1_orbit_family(kind, FRAC_PI_2 * k as f64 / grid as f64, 2.0 * PI * l as f64 / grid as f64)
                })
                .collect::<Vec<_>>()
        }
        FamilyArg::Theta => {
            config.push(("theta", num(theta)));
            config.push((
                "parameters",
                "U = exp(i a Jz) exp(i b Jy) exp(i g Jz); a, g = 2 pi k/grid; b = pi (k + 1/2)/grid".into(),
            ));
            let rep = build_rep(1.0)?;
            let fid = canonicalize(&[C64::new(theta.cos(), 0.0), C64::new(0.0, 0.0), C64::new(theta.sin(), 0.0)], 1.0)?;
            let angle = |k: usize| 2.0 * PI * k as f64 / grid as f64;
            let mut states = Vec::with_capacity(grid * grid * grid);
            for ia in 0..grid {
                for ib in 0..grid {
                    let b = PI * (ib as f64 + 0.5) / grid as f64;
                    for ig in 0..grid {
                        states.push(fid.transformed(&euler_zyz(&rep, angle(ia), b, angle(ig))));
                    }
                }
            }
            states
        }
    };
    header(&mut text, "octant", &config);
    text.push_str("absZ1,absZ2,u,v\n");
    for s in &states {
        let p = octant_projection_j1(s)?;
        writeln!(text, "{},{},{},{}", num(p.abs_z1), num(p.abs_z2), num(p.u), num(p.v)).unwrap();
    }
    write_file(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn psd(grid: usize, out: &Path) -> CmdResult {
    if grid == 0 {
        return Err(UsageError("--grid must be positive".into()));
    }
    let mut text = String::new();
    header(
        &mut text,
        "psd",
        &[
            ("grid", grid.to_string()),
            ("parameters", "f0 = i/grid in [0, 2]; f1 = k/grid - 1 in [-1, 4]".into()),
        ],
    );
    text.push_str("f0,f1,stratum,rank\n");
    let n = grid as f64;
    for i in 0..=2 * grid {
        for k in 0..=5 * grid {
            let (f0, f1) = (i as f64 / n, k as f64 / n - 1.0);
            let (stratum, rank) = psd_classify(f0, f1);
            writeln!(text, "{},{},{},{rank}", num(f0), num(f1), stratum.as_str()).unwrap();
        }
    }
    write_file(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn moments(ntrunc: usize, hbar: f64, path: &Path, max_order: usize) -> CmdResult {
    let fock = build_fock(ntrunc, hbar)?;
    let state = FockStateFile::from_json(&read_file(path)?)?.into_state(&fock)?;
    let table = moment_table(&fock, &state, max_order)?;
    let value = json!({
        "version": VERSION,
        "ntrunc": ntrunc,
        "hbar": hbar,
        "max_order": max_order,
        "qbar": table.qbar,
        "pbar": table.pbar,
        "M": table.entries,
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(ExitCode::SUCCESS)
}

fn identity(j: f64, m: f64, orders: Option<Vec<usize>>) -> CmdResult {
    let rep = build_rep(j)?;
    let fiducial = eigenstate(&rep, m)?;
    let [a, b, g] = match orders {
        Some(o) if o.len() == 3 => [o[0], o[1], o[2]],
        Some(o) => return Err(UsageError(format!("--orders takes three values, got {}", o.len()))),
        None => default_identity_orders(rep.spin()),
    };
    let check = identity_defect(&rep, &fiducial, a, b, g)?;
    let value = json!({
        "version": VERSION,
        "j": j,
        "fiducial_m": m,
        "orders": check.quadrature_orders,
        "defect": check.defect,
        "d_prime": check.d_prime,
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(ExitCode::SUCCESS)
}
