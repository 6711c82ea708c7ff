use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use orbitlab::cochar::ActionInstance;
use orbitlab::module::{generic_tuple, MatrixTuple};
use orbitlab::orbit::{
    destabilizer_search, is_orbit_closed, is_orbit_closed_full, torus_of_centralizer, verify, Certificate, OrbitError,
    SubgroupSpec, TorusOfSubgroup, DEFAULT_BOUND,
};
use orbitlab::torus::{SupportCertificate, WeightSupport};
use orbitlab::zoo::{self, SUITES};

/// Exact closed-orbit decisions for matrix group actions.
///
/// Exit status: 0 when a verdict was produced, 2 on a precondition
/// violation (including unreadable input), 3 on an internal inconsistency.
#[derive(Parser)]
#[command(name = "orbitlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide closedness of G·x for the full group of the instance.
    Closed { instance: PathBuf },
    /// Bounded destabilizer search for H·x.
    Destab {
        instance: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        /// Torus of H to search over; derived from the subgroup when absent.
        #[arg(long)]
        torus: Option<PathBuf>,
    },
    /// Decide whether the group generated by a tuple has a closed orbit on
    /// its generic tuple.
    Gcr { generators: PathBuf },
    /// Closedness of a torus orbit from the weight support of the point.
    Torus { support: PathBuf },
    /// The bundled instance corpus.
    Zoo {
        #[command(subcommand)]
        command: ZooCommand,
    },
    /// Recheck an orbit certificate, or a torus support certificate, from
    /// scratch.
    Verify { certificate: PathBuf },
}

#[derive(Subcommand)]
enum ZooCommand {
    List,
    Run {
        /// One of gl2, sl3, lemmas, theorems; all suites when absent.
        #[arg(long)]
        suite: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn precondition(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| precondition(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| precondition(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 3, message: e.to_string() })?;
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(())
}

fn default_torus(x: &ActionInstance, h: &SubgroupSpec) -> Result<TorusOfSubgroup, Failure> {
    match h {
        SubgroupSpec::CentralizerUnits { tuple } => Ok(torus_of_centralizer(tuple)?),
        _ => {
            let spec = x.spec().ok_or_else(|| precondition("instance has no entries"))?;
            Ok(TorusOfSubgroup::diagonal(spec, x.ambient_dim()))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Closed { instance } => {
            let x: ActionInstance = read_json(&instance)?;
            print_json(&is_orbit_closed(&x)?)
        }
        Command::Destab { instance, subgroup, bound, torus } => {
            let x: ActionInstance = read_json(&instance)?;
            let h: SubgroupSpec = read_json(&subgroup)?;
            let torus = match torus {
                Some(path) => read_json(&path)?,
                None => default_torus(&x, &h)?,
            };
            print_json(&destabilizer_search(&x, &h, &torus, bound)?)
        }
        Command::Gcr { generators } => {
            let t: MatrixTuple = read_json(&generators)?;
            print_json(&is_orbit_closed_full(&generic_tuple(&t).tuple)?)
        }
        Command::Torus { support } => {
            let s: WeightSupport = read_json(&support)?;
            print_json(&SupportCertificate::new(s))
        }
        Command::Zoo { command: ZooCommand::List } => {
            let entries = zoo::list().map_err(|e| Failure { code: 3, message: e.to_string() })?;
            for (id, description) in entries {
                println!("{id}\t{description}");
            }
            Ok(())
        }
        Command::Zoo { command: ZooCommand::Run { suite } } => {
            let names: Vec<String> = match suite {
                Some(s) => vec![s],
                None => SUITES.iter().map(|s| s.to_string()).collect(),
            };
            let mut reports = Vec::new();
            for name in &names {
                reports.push(zoo::run_suite(name).map_err(|e| precondition(e.to_string()))?);
            }
            let failed: Vec<String> =
                reports.iter().flat_map(|r| r.failures()).map(|f| format!("{}: {}", f.id, f.detail.join("; "))).collect();
            if reports.len() == 1 {
                print_json(&reports[0])?;
            } else {
                print_json(&reports)?;
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure { code: 3, message: format!("failing entries:\n{}", failed.join("\n")) })
            }
        }
        Command::Verify { certificate } => {
            let value: serde_json::Value = read_json(&certificate)?;
            let malformed = |e: serde_json::Error| Failure { code: 3, message: format!("{}: {e}", certificate.display()) };
            if value.get("support").is_some() {
                let c: SupportCertificate = serde_json::from_value(value).map_err(malformed)?;
                if !c.verify() {
                    return Err(Failure { code: 3, message: "convex certificate does not check".into() });
                }
                println!("certificate verified: {:?}", c.certificate.kind);
            } else {
                let c: Certificate = serde_json::from_value(value).map_err(malformed)?;
                verify(&c)?;
                println!("certificate verified: {:?}", c.verdict);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("orbitlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
