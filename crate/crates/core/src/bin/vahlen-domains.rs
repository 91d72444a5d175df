use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use vahlen_domains::chi_bridge::GroupSpec;
use vahlen_domains::domain::{compute_generators, DomainConfig, Status};
use vahlen_domains::io::{parse_fix, slice_result, verify_result, RunResult};

#[derive(Parser)]
#[command(name = "vahlen-domains", version, about = "Dirichlet-domain generators for Vahlen groups on hyperbolic 5-space")]
struct Cli {
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a generating set and write the result file.
    Run {
        /// `gamma4z`, `quat X Y` or `congruence M`.
        #[arg(long, num_args = 1..=3, allow_negative_numbers = true, required = true)]
        group: Vec<String>,
        /// Congruence level (alternative to `congruence M`).
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        norm_cap: Option<u32>,
        #[arg(long)]
        depth_cap: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay every certificate in a result file.
    Verify { result: PathBuf },
    /// Restrict the walls of a result to a 2D or 3D coordinate slice.
    Slice {
        result: PathBuf,
        #[arg(long)]
        fix: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_group(words: &[String], level: Option<u32>) -> Result<GroupSpec, String> {
    let ints = |s: &str| s.parse::<i64>().map_err(|_| format!("not an integer: {s}"));
    let spec = match words.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["gamma4z"] => match level {
            Some(level) => GroupSpec::Congruence { level },
            None => GroupSpec::Full,
        },
        ["congruence", m] => GroupSpec::Congruence { level: m.parse().map_err(|_| format!("bad level {m}"))? },
        ["congruence"] => GroupSpec::Congruence { level: level.ok_or("congruence needs a level")? },
        ["quat", x, y] => {
            if level.is_some() {
                return Err("--level applies to gamma4z only".into());
            }
            GroupSpec::QuatOrder { x: ints(x)?, y: ints(y)? }
        }
        _ => return Err(format!("unknown group {:?}", words.join(" "))),
    };
    spec.normalized().map_err(|e| e.to_string())
}

fn read_result(path: &Path) -> Result<RunResult, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Run { group, level, norm_cap, depth_cap, out } => {
            let spec = parse_group(&group, level)?;
            let mut cfg = DomainConfig::default();
            if let Some(k) = norm_cap {
                if k == 0 {
                    return Err("--norm-cap must be positive".into());
                }
                cfg.norm_cap = k;
            }
            if let Some(d) = depth_cap {
                if d == 0 {
                    return Err("--depth-cap must be positive".into());
                }
                cfg.limits.depth_cap = d;
            }
            let start = Instant::now();
            let set = compute_generators(spec, &cfg).map_err(|e| e.to_string())?;
            let result = RunResult::from_generator_set(&set, cfg);
            write_json(&out, &result)?;
            if cli.verbose > 0 {
                eprintln!("{} walls, last shell {}, {:.1?}", result.halfspaces().len(), result.last_norm, start.elapsed());
                for n in &result.notes {
                    eprintln!("note: {n}");
                }
            }
            println!("{spec}: {:?}, {} generators, N = {}", result.status, result.stabilizer.len() + result.generators.len(), result.stop_norm);
            Ok(match result.status {
                Status::Complete => ExitCode::SUCCESS,
                Status::Inconclusive => ExitCode::from(2),
            })
        }
        Cmd::Verify { result } => {
            let r = read_result(&result)?;
            let report = verify_result(&r).map_err(|e| format!("verification failed at {e}"))?;
            println!("ok: {report}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Slice { result, fix, out } => {
            let r = read_result(&result)?;
            let fix = parse_fix(&fix).map_err(|e| e.to_string())?;
            let slice = slice_result(&r, &fix).map_err(|e| e.to_string())?;
            write_json(&out, &slice)?;
            if cli.verbose > 0 {
                eprintln!("{} primitives in ({})", slice.primitives.len(), slice.free.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("VAHLEN_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
