use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lpc_core::baseline;
use lpc_core::circuit::{Circuit, Gate, ResourceReport};
use lpc_core::cost::{self, CostParams};
use lpc_core::flow;
use lpc_core::lower;
use lpc_core::qaoa::{self, QaoaInstance};
use lpc_core::qft;
use lpc_core::sim;

#[derive(Parser)]
#[command(name = "lpc", version, about = "Linear parity compilation for LNN qubit chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a workload to a linear-nearest-neighbor circuit
    Compile {
        #[command(subcommand)]
        workload: CompileWorkload,
    },
    /// Check compiled circuits against dense statevector references
    Verify {
        #[command(subcommand)]
        workload: VerifyWorkload,
    },
    /// Tabulate resource counts or runtime estimates over a size range
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Fit a power law to transport/cooling samples from a CSV file
    Fit {
        /// CSV file with a header line `transport_s,cooling_s`
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum CompileWorkload {
    /// QAOA on a (possibly random) Ising instance
    Qaoa {
        #[command(flatten)]
        common: CompileCommon,
        /// Number of qubits (ignored when --instance is given)
        #[arg(long)]
        n: Option<usize>,
        /// Number of QAOA rounds for generated instances
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Seed for the generated instance
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read the instance from a JSON file instead of generating one
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Quantum Fourier transform
    Qft {
        #[command(flatten)]
        common: CompileCommon,
        /// Number of qubits
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct CompileCommon {
    /// Compilation method
    #[arg(long, value_enum, default_value_t = Method::Lpc)]
    method: Method,
    /// Lower to the native gate set with all two-qubit angles at pi/2
    #[arg(long)]
    fixed_angle: bool,
    /// Keep Rz/Rx gates whose angle is exactly zero
    #[arg(long)]
    keep_zero_rotations: bool,
    /// Print the parity-flow state after every two-qubit gate
    #[arg(long)]
    trace: bool,
    /// Output circuit file; a JSON resource report lands next to it
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum VerifyWorkload {
    /// Compare LPC and baseline QAOA against the long-range reference
    Qaoa {
        /// Number of qubits (at most 8)
        #[arg(long)]
        n: usize,
        /// Number of QAOA rounds
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Seed for the random instance
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare LPC and baseline QFT against the discrete Fourier matrix
    Qft {
        /// Number of qubits (at most 8)
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum SweepKind {
    /// Gate counts and depth per size and method
    Resources {
        #[command(flatten)]
        range: SweepRange,
        /// Workload to compile at each size
        #[arg(long, value_enum, default_value_t = Workload::Qaoa)]
        workload: Workload,
        /// Output CSV file
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Runtime estimates from the QCCD cost model
    Runtime {
        #[command(flatten)]
        range: SweepRange,
        /// JSON file overriding the default cost parameters
        #[arg(long)]
        cost_params: Option<PathBuf>,
        /// Output CSV file
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SweepRange {
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lpc,
    Baseline,
}

#[derive(Clone, Copy, ValueEnum)]
enum Workload {
    Qaoa,
    Qft,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Compile { workload } => run_compile(workload),
        Command::Verify { workload } => run_verify(workload),
        Command::Sweep { kind } => run_sweep(kind),
        Command::Fit { input } => run_fit(&input),
    }
}

fn load_instance(path: &Path) -> Result<QaoaInstance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading instance file {}", path.display()))?;
    let instance: QaoaInstance =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    instance.validate()?;
    Ok(instance)
}

fn run_compile(workload: CompileWorkload) -> Result<()> {
    match workload {
        CompileWorkload::Qaoa { common, n, p, seed, instance } => {
            let instance = match instance {
                Some(path) => load_instance(&path)?,
                None => {
                    let n = n.ok_or_else(|| anyhow!("--n is required without --instance"))?;
                    println!("generated random instance: n={n} p={p} seed={seed}");
                    QaoaInstance::random(n, p, seed)
                }
            };
            let result = match common.method {
                Method::Lpc => qaoa::compile_qaoa(&instance)?,
                Method::Baseline => baseline::compile_qaoa_baseline(&instance)?,
            };
            finish_compile(result.circuit, &result.final_flow, &common)
        }
        CompileWorkload::Qft { common, n } => {
            let result = match common.method {
                Method::Lpc => qft::compile_qft(n)?,
                Method::Baseline => baseline::route_qft(n)?,
            };
            finish_compile(result.circuit, &result.final_flow, &common)
        }
    }
}

fn finish_compile(
    mut circuit: Circuit,
    final_flow: &flow::FlowState,
    common: &CompileCommon,
) -> Result<()> {
    if common.trace {
        print_trace(&circuit)?;
    }
    if common.fixed_angle {
        circuit = lower::lower_cnot_to_rzz(&circuit);
        circuit = lower::fixed_angle_lowering(&circuit);
    }
    if !common.keep_zero_rotations {
        circuit = circuit.without_zero_rotations();
    }
    let report = circuit.report();
    fs::write(&common.out, lpc_core::circuit::to_text(&circuit))
        .with_context(|| format!("writing {}", common.out.display()))?;
    let report_path = sidecar_path(&common.out);
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    fs::write(&report_path, json)
        .with_context(|| format!("writing {}", report_path.display()))?;

    println!(
        "wrote {} ({} qubits, {} two-qubit gates, {} swaps, two-qubit depth {})",
        common.out.display(),
        report.num_qubits,
        report.n_2q,
        report.n_swap,
        report.two_qubit_depth
    );
    println!("wrote {}", report_path.display());
    if !final_flow.is_identity() {
        match final_flow.as_permutation() {
            Some(_) => println!("final flow is a wire permutation; outputs are relabeled"),
            None => println!("final flow carries parity labels; decode with CNOTs to read out"),
        }
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_owned()).unwrap_or_default();
    name.push(".json");
    out.with_file_name(name)
}

fn print_trace(circuit: &Circuit) -> Result<()> {
    let mut state = flow::FlowState::identity(circuit.num_qubits);
    println!("initial flow:");
    println!("{}", state.render());
    for gate in &circuit.gates {
        match *gate {
            Gate::Cnot(c, t) => {
                state.apply_cnot(c, t)?;
                println!("after CNOT {c} {t}:");
                println!("{}", state.render());
            }
            Gate::Swap(a, b) => {
                state.apply_swap(a, b)?;
                println!("after SWAP {a} {b}:");
                println!("{}", state.render());
            }
            _ => {}
        }
    }
    Ok(())
}

const FIDELITY_FLOOR: f64 = 1.0 - 1e-9;

fn run_verify(workload: VerifyWorkload) -> Result<()> {
    let mut all_ok = true;
    match workload {
        VerifyWorkload::Qaoa { n, p, seed } => {
            check_verify_size(n)?;
            let instance = QaoaInstance::random(n, p, seed);
            println!("instance: n={n} p={p} seed={seed}");
            let reference = sim::circuit_unitary(&qaoa::reference_circuit(&instance))?;

            let lpc = qaoa::compile_qaoa(&instance)?;
            all_ok &= report_fidelity("qaoa lpc", &lpc.circuit, &lpc.final_flow, &reference)?;

            let base = baseline::compile_qaoa_baseline(&instance)?;
            all_ok &=
                report_fidelity("qaoa baseline", &base.circuit, &base.final_flow, &reference)?;
        }
        VerifyWorkload::Qft { n } => {
            check_verify_size(n)?;
            let lpc = qft::compile_qft(n)?;
            let reversed = sim::bit_reversed_qft_matrix(n);
            all_ok &= report_fidelity("qft lpc", &lpc.circuit, &lpc.final_flow, &reversed)?;

            let base = baseline::route_qft(n)?;
            let plain = sim::qft_matrix(n);
            all_ok &= report_fidelity("qft baseline", &base.circuit, &base.final_flow, &plain)?;
        }
    }
    if !all_ok {
        bail!("fidelity below {FIDELITY_FLOOR}");
    }
    println!("all fidelities at least {FIDELITY_FLOOR}");
    Ok(())
}

fn check_verify_size(n: usize) -> Result<()> {
    if n > 8 {
        bail!("verify runs dense statevector checks and is limited to n <= 8");
    }
    Ok(())
}

fn report_fidelity(
    label: &str,
    circuit: &Circuit,
    final_flow: &flow::FlowState,
    reference: &sim::Unitary,
) -> Result<bool> {
    let plan = final_flow
        .decode_plan()
        .with_context(|| format!("{label}: planning the readout decode"))?;
    let decode = plan.to_circuit(circuit.num_qubits);
    let compiled = sim::compiled_unitary(circuit, &decode, &plan.layout)?;
    let fidelity = sim::phase_invariant_fidelity(&compiled, reference);
    let ok = fidelity >= FIDELITY_FLOOR;
    println!(
        "{label}: fidelity {:.12} {}",
        fidelity,
        if ok { "ok" } else { "FAIL" }
    );
    Ok(ok)
}

fn run_sweep(kind: SweepKind) -> Result<()> {
    match kind {
        SweepKind::Resources { range, workload, out } => {
            check_range(&range)?;
            let mut writer = csv::Writer::from_path(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            writer.write_record(["n", "method", "n_swap", "n_rzz", "n_2q_total", "two_qubit_depth"])?;
            for n in range.n_min..=range.n_max {
                for method in [Method::Lpc, Method::Baseline] {
                    let report = sweep_report(workload, method, n)?;
                    let name = match method {
                        Method::Lpc => "lpc",
                        Method::Baseline => "baseline",
                    };
                    writer.write_record([
                        n.to_string(),
                        name.to_string(),
                        report.n_swap.to_string(),
                        report.n_rzz.to_string(),
                        report.n_2q.to_string(),
                        report.two_qubit_depth.to_string(),
                    ])?;
                }
            }
            writer.flush()?;
            println!("wrote {}", out.display());
        }
        SweepKind::Runtime { range, cost_params, out } => {
            check_range(&range)?;
            let params = match cost_params {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                None => CostParams::default(),
            };
            let mut writer = csv::Writer::from_path(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            writer.write_record(["n", "t_run_standard_s", "t_transp_s", "t_cool_s", "t_run_lpc_s"])?;
            for n in range.n_min..=range.n_max {
                let instance = QaoaInstance::random(n, 1, 0);
                let standard = baseline::compile_qaoa_baseline(&instance)?.circuit.report();
                let lpc = qaoa::compile_qaoa(&instance)?.circuit.report();
                let est = cost::estimate(&standard, &lpc, &params);
                writer.write_record([
                    n.to_string(),
                    format!("{:.9}", est.t_run_standard_s),
                    format!("{:.9}", est.t_transport_s),
                    format!("{:.9}", est.t_cooling_s),
                    format!("{:.9}", est.t_run_lpc_s),
                ])?;
            }
            writer.flush()?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn check_range(range: &SweepRange) -> Result<()> {
    if range.n_min < 2 {
        bail!("--n-min must be at least 2");
    }
    if range.n_max < range.n_min {
        bail!("--n-max must be at least --n-min");
    }
    Ok(())
}

fn sweep_report(workload: Workload, method: Method, n: usize) -> Result<ResourceReport> {
    let circuit = match (workload, method) {
        (Workload::Qaoa, Method::Lpc) => qaoa::compile_qaoa(&QaoaInstance::random(n, 1, 0))?.circuit,
        (Workload::Qaoa, Method::Baseline) => {
            baseline::compile_qaoa_baseline(&QaoaInstance::random(n, 1, 0))?.circuit
        }
        (Workload::Qft, Method::Lpc) => qft::compile_qft(n)?.circuit,
        (Workload::Qft, Method::Baseline) => baseline::route_qft(n)?.circuit,
    };
    Ok(circuit.report())
}

fn run_fit(input: &Path) -> Result<()> {
    let mut reader = csv::Reader::from_path(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let headers = reader.headers()?.clone();
    let t_col = headers
        .iter()
        .position(|h| h == "transport_s")
        .ok_or_else(|| anyhow!("missing transport_s column"))?;
    let c_col = headers
        .iter()
        .position(|h| h == "cooling_s")
        .ok_or_else(|| anyhow!("missing cooling_s column"))?;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record?;
        let t: f64 = record
            .get(t_col)
            .ok_or_else(|| anyhow!("short row in {}", input.display()))?
            .trim()
            .parse()?;
        let c: f64 = record
            .get(c_col)
            .ok_or_else(|| anyhow!("short row in {}", input.display()))?
            .trim()
            .parse()?;
        points.push((t, c));
    }
    let fit = cost::fit_power_law(&points)?;
    println!("model: cooling_s = a * transport_s^b");
    println!("a = {:.6} +/- {:.6}", fit.a, fit.a_stderr);
    println!("b = {:.6} +/- {:.6}", fit.b, fit.b_stderr);
    Ok(())
}
