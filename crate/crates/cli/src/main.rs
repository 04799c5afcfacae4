//! `pauliforge`: synthesize Pauli networks and Clifford circuits onto
//! limited-connectivity architectures, manage the Clifford databases behind
//! them, run benchmark sweeps, and verify circuits against each other.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pauliforge::arch::CouplingGraph;
use pauliforge::bench;
use pauliforge::cer::Cer;
use pauliforge::circuit::{Angle, Circuit};
use pauliforge::clifford_synth::{synthesize_clifford, CliffordSpec, CliffordVariant};
use pauliforge::db::{self, CliffordDb};
use pauliforge::pauli::{gf2_rank, PauliString};
use pauliforge::qasm;
use pauliforge::synth::{self, Method, SynthesisConfig, SynthesisReport, Target};
use pauliforge::verify;

#[derive(Parser)]
#[command(name = "pauliforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or verify Clifford databases.
    Db {
        #[command(subcommand)]
        command: DbCommand,
    },
    /// Synthesize a Pauli network for a target list.
    Synth(SynthArgs),
    /// Resynthesize a Clifford tableau.
    CliffSynth(CliffSynthArgs),
    /// Check equivalence or soundness of circuits.
    Verify(VerifyArgs),
    /// Run an experiment sweep from a spec file.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum DbCommand {
    /// Generate the standard seed set of database entries.
    Build {
        /// Shape selection; only the built-in "auto" set is defined.
        #[arg(long, default_value = "auto")]
        shapes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify every entry of a database file.
    Verify { path: PathBuf },
}

#[derive(Args)]
struct SynthArgs {
    /// ss | ls | mpls | mpr
    #[arg(long)]
    method: String,
    /// path:<n> | heavyhex:<d> | file:<path>
    #[arg(long)]
    arch: String,
    /// Clifford database file; a fresh in-memory database is used when
    /// neither this nor PAULIFORGE_DB is set.
    #[arg(long)]
    db: Option<PathBuf>,
    /// JSON list of {"pauli": "±XXYIZ", "angle": <float>|"theta_<l>"}.
    #[arg(long)]
    targets: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report output (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
    /// OpenQASM-2 export; rotation metadata lands in <path>.params.json.
    #[arg(long)]
    qasm: Option<PathBuf>,
    /// Generator cap for sublist selection.
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Args)]
struct CliffSynthArgs {
    /// paulipair | paulipair-uo | mpcs | mpcs-uo
    #[arg(long)]
    variant: String,
    #[arg(long)]
    arch: String,
    #[arg(long)]
    db: Option<PathBuf>,
    /// JSON {"z_rows": [...], "x_rows": [...]} with signed Pauli text rows.
    #[arg(long, name = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Logical qubits settled per round (1 or 2).
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    qasm: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit under test (.qasm; a sidecar <path>.params.json is picked up
    /// automatically).
    #[arg(long)]
    circuit: PathBuf,
    /// Reference: a targets JSON file or a second .qasm circuit.
    #[arg(long)]
    against: PathBuf,
    /// dense | tableau | sound
    #[arg(long)]
    mode: String,
    /// Comma-separated values binding theta_0, theta_1, ... for dense checks.
    #[arg(long)]
    thetas: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    db: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct TargetSpec {
    pauli: String,
    angle: AngleSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AngleSpec {
    Literal(f64),
    Named(String),
}

fn load_targets(path: &Path) -> anyhow::Result<Vec<Target>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let specs: Vec<TargetSpec> = serde_json::from_str(&text).context("targets json")?;
    specs
        .into_iter()
        .map(|s| {
            let pauli: PauliString = s.pauli.parse()?;
            let angle = match s.angle {
                AngleSpec::Literal(v) => Angle::Literal(v),
                AngleSpec::Named(name) => {
                    let index = name
                        .strip_prefix("theta_")
                        .and_then(|i| i.parse().ok())
                        .ok_or_else(|| {
                            pauliforge::Error::InvalidInput(format!(
                                "angle name {name:?} must look like theta_<index>"
                            ))
                        })?;
                    Angle::Symbolic { index, scale: 1.0 }
                }
            };
            Ok(Target { pauli, angle })
        })
        .collect::<pauliforge::Result<_>>()
        .map_err(Into::into)
}

fn load_db(explicit: Option<&Path>, default_seed: u64) -> anyhow::Result<CliffordDb> {
    let env_path = std::env::var_os("PAULIFORGE_DB").map(PathBuf::from);
    match explicit.or(env_path.as_deref()) {
        Some(path) if path.exists() => {
            CliffordDb::load(path).with_context(|| format!("loading database {path:?}"))
        }
        Some(path) => bail!("database file {path:?} does not exist"),
        None => Ok(CliffordDb::new(default_seed)),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn export_qasm(path: &Path, circuit: &Circuit) -> anyhow::Result<()> {
    let (text, sidecar) = qasm::export(circuit);
    std::fs::write(path, text)?;
    std::fs::write(
        path.with_extension("params.json"),
        serde_json::to_string_pretty(&sidecar)?,
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SynthOutput {
    method: String,
    arch: String,
    seed: u64,
    report: SynthesisReport,
    circuit: Circuit,
}

fn run_synth(args: SynthArgs) -> anyhow::Result<()> {
    let graph = CouplingGraph::from_spec(&args.arch)?;
    let db = load_db(args.db.as_deref(), 0)?;
    let targets = load_targets(&args.targets)?;
    let placed = synth::place_targets(&targets, graph.n_phys(), None)?;
    let (circuit, report) = match args.method.as_str() {
        "ss" | "ls" | "mpls" => {
            let method = match args.method.as_str() {
                "ss" => Method::Ss,
                "ls" => Method::Ls,
                _ => Method::Mpls,
            };
            let mut cfg = SynthesisConfig::new(method);
            cfg.seed = args.seed;
            if let Some(k) = args.k_max {
                cfg.k_max = k;
            }
            synth::synthesize(&placed, &graph, &db, &cfg)?
        }
        "mpr" => {
            // The resetted multi-Pauli routine expects one commuting family
            // spanned by at most four generators, like a double excitation.
            for a in &placed {
                for b in &placed {
                    if !a.pauli.commutes(&b.pauli)? {
                        bail!("mpr targets must be mutually commuting");
                    }
                }
            }
            let paulis: Vec<PauliString> = placed.iter().map(|t| t.pauli.clone()).collect();
            if gf2_rank(&paulis) > 4 {
                bail!("mpr targets must be spanned by at most four generators");
            }
            let circuit = synth::mpr::mpr_from_targets(&placed, &graph, &db, args.seed)?;
            let report = SynthesisReport::from_circuit(&circuit, placed.len());
            (circuit, report)
        }
        other => bail!("unknown method {other:?}"),
    };
    let sound = verify::pauli_network_sound(&circuit, &placed)?;
    if !sound.pass {
        bail!("internal error: synthesized circuit failed the soundness replay");
    }
    println!(
        "method={} cnots={} cnots_excl_final_clifford={} depth={}",
        args.method, report.total_cnots, report.cnots_excluding_final_clifford, report.depth
    );
    if let Some(path) = &args.qasm {
        export_qasm(path, &circuit)?;
    }
    if let Some(path) = &args.report {
        write_json(
            path,
            &SynthOutput {
                method: args.method,
                arch: args.arch,
                seed: args.seed,
                report,
                circuit,
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TableauFile {
    z_rows: Vec<String>,
    x_rows: Vec<String>,
}

#[derive(Serialize)]
struct CliffSynthOutput {
    variant: String,
    cnots: usize,
    depth: usize,
    permutation: Vec<usize>,
    circuit: Circuit,
}

fn run_cliff_synth(args: CliffSynthArgs) -> anyhow::Result<()> {
    let graph = CouplingGraph::from_spec(&args.arch)?;
    let db = load_db(args.db.as_deref(), 0)?;
    let text = std::fs::read_to_string(&args.input)?;
    let file: TableauFile = serde_json::from_str(&text).context("tableau json")?;
    let parse_rows = |rows: &[String]| -> pauliforge::Result<Vec<PauliString>> {
        rows.iter().map(|s| s.parse()).collect()
    };
    let source = Cer::from_rows(parse_rows(&file.z_rows)?, parse_rows(&file.x_rows)?)?;
    let variant = match args.variant.as_str() {
        "paulipair" => CliffordVariant::PauliPair,
        "paulipair-uo" => CliffordVariant::PauliPairUnordered,
        "mpcs" => CliffordVariant::Mpcs,
        "mpcs-uo" => CliffordVariant::MpcsUnordered,
        other => bail!("unknown variant {other:?}"),
    };
    let out = synthesize_clifford(
        &CliffordSpec {
            source,
            graph: &graph,
            variant,
            k: args.k,
            seed: args.seed,
        },
        &db,
    )?;
    println!(
        "variant={} cnots={} permutation={:?}",
        args.variant,
        out.circuit.cnot_count(),
        out.permutation
    );
    if let Some(path) = &args.qasm {
        export_qasm(path, &out.circuit)?;
    }
    if let Some(path) = &args.report {
        write_json(
            path,
            &CliffSynthOutput {
                variant: args.variant,
                cnots: out.circuit.cnot_count(),
                depth: out.circuit.depth(),
                permutation: out.permutation,
                circuit: out.circuit,
            },
        )?;
    }
    Ok(())
}

fn load_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let sidecar_path = path.with_extension("params.json");
    let sidecar = if sidecar_path.exists() {
        Some(serde_json::from_str(&std::fs::read_to_string(sidecar_path)?)?)
    } else {
        None
    };
    Ok(qasm::parse(&text, sidecar.as_ref())?)
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<()> {
    let circuit = load_circuit(&args.circuit)?;
    let thetas: Vec<f64> = match &args.thetas {
        None => Vec::new(),
        Some(list) => list
            .split(',')
            .map(|v| v.trim().parse().context("bad theta value"))
            .collect::<anyhow::Result<_>>()?,
    };
    let report = match args.mode.as_str() {
        "sound" => {
            let targets = load_targets(&args.against)?;
            let placed = synth::place_targets(&targets, circuit.n, None)?;
            verify::pauli_network_sound(&circuit, &placed)?
        }
        "dense" => {
            if args.against.extension().and_then(|e| e.to_str()) == Some("qasm") {
                let other = load_circuit(&args.against)?;
                let u = verify::dense::unitary(&circuit, &thetas)?;
                let v = verify::dense::unitary(&other, &thetas)?;
                verify::equivalent_up_to_phase(&u, &v, args.tol)?
            } else {
                let targets = load_targets(&args.against)?;
                let placed = synth::place_targets(&targets, circuit.n, None)?;
                verify::circuit_matches_targets(&circuit, &placed, &thetas, args.tol)?
            }
        }
        "tableau" => {
            let other = load_circuit(&args.against)?;
            verify::tableau_equal(&circuit, &other)?
        }
        other => bail!("unknown mode {other:?}"),
    };
    println!(
        "{}: {} (max deviation {:.3e}{})",
        args.mode,
        if report.pass { "PASS" } else { "FAIL" },
        report.max_deviation,
        report
            .witness
            .map(|w| format!(", witness at {w}"))
            .unwrap_or_default()
    );
    if !report.pass {
        std::process::exit(1);
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.spec)?;
    let spec: bench::ExperimentSpec = serde_json::from_str(&text).context("experiment spec")?;
    let db = load_db(args.db.as_deref(), 0)?;
    let report = bench::run_sweep(&spec, &db)?;
    write_json(&args.out, &report)?;
    if let Some(csv) = &args.csv {
        std::fs::write(csv, bench::report_to_csv(&report))?;
    }
    for agg in &report.aggregates {
        println!(
            "{:?}: runs={} mean_cnots={:.2} min={} max={}",
            agg.method, agg.runs, agg.mean_cnots, agg.min_cnots, agg.max_cnots
        );
    }
    Ok(())
}

fn run_db(command: DbCommand) -> anyhow::Result<()> {
    match command {
        DbCommand::Build { shapes, seed, out } => {
            if shapes != "auto" {
                bail!("only the built-in \"auto\" shape set is defined");
            }
            let built = db::build_database(seed)?;
            built.save(&out)?;
            println!("wrote {} entries to {:?}", built.len(), out);
            Ok(())
        }
        DbCommand::Verify { path } => {
            let loaded = CliffordDb::load(&path)?;
            // Loading re-verifies every entry; report and double-check here.
            let mut bad = 0;
            for entry in loaded.entries_snapshot() {
                if let Err(reason) = db::verify_entry(&entry.key, &entry.circuit) {
                    eprintln!("entry failed: {reason}");
                    bad += 1;
                }
            }
            println!("{} entries verified, {} failures", loaded.len(), bad);
            if bad > 0 {
                std::process::exit(1);
            }
            Ok(())
        }
    }
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Db { command } => run_db(command),
        Command::Synth(args) => run_synth(args),
        Command::CliffSynth(args) => run_cliff_synth(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
    }
}
