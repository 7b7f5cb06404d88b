//! `relaymux` command line: multiplexing gain, AF capacity sweeps, rank
//! certificates and multi-terminal gains for a network file.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input, 3 failed assertion.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use relaymux::af::{AFConfig, BlockMode};
use relaymux::capacity::{ergodic_capacity, slope_from, Mode, Window};
use relaymux::certify::verify_certificate;
use relaymux::mincut::{min_vertex_cut, multiaccess_region, multicast_gain, multiplexing_gain, DEFAULT_MAX_SENDERS};
use relaymux::{parse_network, Network};

const SCHEMA_VERSION: u32 = 1;
const CSV_HEADER: &str = "p_db,mean_bits,stderr,samples,mode";

#[derive(Parser, Debug)]
#[command(name = "relaymux", version, about = "Multiplexing gain of multi-antenna relay networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximum multiplexing gain and a minimum vertex cut.
    Mux { network: PathBuf },
    /// Monte Carlo AF ergodic capacity over an SNR sweep.
    Simulate {
        network: PathBuf,
        /// SNR points in dB, increasing.
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        snr_db: Vec<f64>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, env = "RELAYMUX_SEED", default_value_t = 0)]
        seed: u64,
        /// Block length. Defaults to 1 for layered networks, 4 l_G otherwise.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        time_slots: Option<u64>,
        #[arg(long, value_enum, default_value_t = NoiseArg::White)]
        mode: NoiseArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Rank certificate from vertex-disjoint paths.
    Certify {
        network: PathBuf,
        /// Block length for unlayered networks (at least l_G). Defaults to 4 l_G.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        time_slots: Option<u64>,
    },
    /// Multi-access gain region for the file's `senders`.
    Region {
        network: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_SENDERS)]
        max_senders: usize,
    },
    /// Multicast gain to the file's `destinations`.
    Multicast { network: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NoiseArg {
    White,
    Colored,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Invalid(String),
    Assertion(String),
}

impl From<relaymux::Error> for Failure {
    fn from(e: relaymux::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct Input {
    net: Network,
    hash: String,
}

fn load(path: &Path) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| Failure::Invalid(format!("{} is not UTF-8", path.display())))?;
    let net = parse_network(&text)?;
    let hash = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(Input { net, hash })
}

fn report(command: &str, input: &Input, params: Value, outputs: impl Serialize) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": { "network_sha256": input.hash, "params": params },
        "outputs": outputs,
    });
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

fn mux(path: &Path) -> Result<String, Failure> {
    let input = load(path)?;
    let cut = min_vertex_cut(&input.net);
    let outputs = json!({
        "m": cut.capacity,
        "cut": cut.members,
        "nu": relaymux::mincut::vertex_disjoint_paths(&input.net).nu,
        "layered": input.net.is_layered(),
    });
    Ok(report("mux", &input, json!({}), outputs))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    path: &Path,
    snr_db: &[f64],
    samples: u64,
    seed: u64,
    time_slots: Option<u64>,
    mode: NoiseArg,
    format: Format,
) -> Result<String, Failure> {
    if snr_db.iter().any(|d| !d.is_finite() || *d <= 0.0) {
        return Err(Failure::Usage("--snr-db values must be positive (P > 1)".into()));
    }
    if snr_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Usage("--snr-db values must be strictly increasing".into()));
    }
    let input = load(path)?;
    let net = &input.net;
    let window = match time_slots {
        None => Window::default_for(net)?,
        Some(t) => {
            let block = if net.is_layered() { BlockMode::Layered } else { BlockMode::Causal };
            Window { time_slots: t as usize, block }
        }
    };
    let mode = match mode {
        NoiseArg::White => Mode::White,
        NoiseArg::Colored => Mode::Colored,
    };
    let mut rows = Vec::with_capacity(snr_db.len());
    for &db in snr_db {
        let cfg = AFConfig::from_db(db, window.time_slots)?.with_block(window.block);
        rows.push(ergodic_capacity(net, &cfg, samples, mode, seed)?);
    }
    let fit = if rows.len() >= 2 && rows.iter().all(|r| r.power > 2.0) {
        Some(slope_from(rows.clone(), window)?)
    } else {
        None
    };
    let mode_name = match mode {
        Mode::White => "white",
        Mode::Colored => "colored",
    };
    match format {
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for (db, r) in snr_db.iter().zip(&rows) {
                out.push_str(&format!("{db},{},{},{},{mode_name}\n", r.mean_bits, r.stderr, r.samples));
            }
            out.push_str(&format!("# network_sha256={}\n", input.hash));
            out.push_str(&format!("# seed={seed}\n"));
            out.push_str(&format!("# time_slots={}\n", window.time_slots));
            if let Some(f) = &fit {
                out.push_str(&format!("# slope={}\n# endpoint_slope={}\n", f.slope, f.endpoint_slope));
            }
            Ok(out.trim_end().to_string())
        }
        Format::Json => {
            let table: Vec<Value> = snr_db
                .iter()
                .zip(&rows)
                .map(|(db, r)| {
                    json!({"p_db": db, "mean_bits": r.mean_bits, "stderr": r.stderr, "samples": r.samples, "mode": mode_name})
                })
                .collect();
            let params = json!({
                "snr_db": snr_db, "samples": samples, "seed": seed,
                "time_slots": window.time_slots, "block": window.block, "mode": mode_name,
            });
            let outputs = json!({
                "rows": table,
                "slope": fit.as_ref().map(|f| f.slope),
                "endpoint_slope": fit.as_ref().map(|f| f.endpoint_slope),
            });
            Ok(report("simulate", &input, params, outputs))
        }
    }
}

fn certify(path: &Path, time_slots: Option<u64>) -> Result<String, Failure> {
    let input = load(path)?;
    let t = match time_slots {
        Some(t) => t as usize,
        None => 4 * input.net.longest_simple_path(relaymux::af::DEFAULT_PATH_SEARCH_CAP)?,
    };
    let cert = verify_certificate(&input.net, t)?;
    let text = report("certify", &input, json!({ "time_slots": t }), &cert);
    if cert.pass {
        Ok(text)
    } else {
        println!("{text}");
        Err(Failure::Assertion(format!("certificate rank {} differs from the expected {}", cert.rank, cert.expected_rank)))
    }
}

fn region(path: &Path, max_senders: usize) -> Result<String, Failure> {
    let input = load(path)?;
    let net = &input.net;
    let senders = net.senders().ok_or_else(|| Failure::Invalid("network file has no `senders` list".into()))?;
    let region = multiaccess_region(net, senders, net.destination(), max_senders)?;
    let constraints: Vec<Value> = region
        .constraints
        .iter()
        .map(|c| json!({ "senders": c.subset.iter().map(|&i| senders[i]).collect::<Vec<_>>(), "bound": c.bound }))
        .collect();
    let outputs = json!({ "senders": senders, "destination": net.destination(), "constraints": constraints });
    Ok(report("region", &input, json!({ "max_senders": max_senders }), outputs))
}

fn multicast(path: &Path) -> Result<String, Failure> {
    let input = load(path)?;
    let net = &input.net;
    let dests = net.destinations().ok_or_else(|| Failure::Invalid("network file has no `destinations` list".into()))?;
    let m = multicast_gain(net, dests)?;
    let per: Vec<Value> = dests
        .iter()
        .map(|&t| Ok(json!({ "destination": t, "m": multiplexing_gain(&net.with_terminals(net.source(), t)?) })))
        .collect::<Result<_, relaymux::Error>>()?;
    Ok(report("multicast", &input, json!({}), json!({ "m": m, "per_destination": per })))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Mux { network } => mux(network),
        Command::Simulate { network, snr_db, samples, seed, time_slots, mode, format } => {
            simulate(network, snr_db, *samples, *seed, *time_slots, *mode, *format)
        }
        Command::Certify { network, time_slots } => certify(network, *time_slots),
        Command::Region { network, max_senders } => region(network, *max_senders),
        Command::Multicast { network } => multicast(network),
    };
    // timing goes to stderr so stdout stays byte-identical across runs
    eprintln!("wall_time: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(3)
        }
    }
}
