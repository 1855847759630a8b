//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal failure, 2 input error, 3 not
//! equivalent.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rust_decimal::Decimal;
use serde::Serialize;
use serde_json::json;

use crate::equivalence;
use crate::graph::{CoefficientPolicy, ColouredBipartiteGraph};
use crate::group::PermutationGroup;
use crate::models::{Boundary, Family, ModelSpec};
use crate::oracle::{self, DEFAULT_N_MAX};
use crate::pauli::Hamiltonian;
use crate::perm::Permutation;
use crate::solver::{self, ColouredGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;

/// Environment variable selecting quantised coefficient classes.
pub const EPS_VAR: &str = "SYMMETRA_COEFF_EPS";

#[derive(Debug, Parser)]
#[command(
    name = "symmetra",
    version,
    about = "Permutation symmetries of Pauli-string Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the qubit permutation symmetry group of a Hamiltonian.
    Find {
        /// Hamiltonian file, or `-` for standard input.
        input: PathBuf,
        #[arg(long)]
        json: bool,
        /// Omit wall-clock time so reports are byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
    /// Decide whether two Hamiltonians differ only by a qubit relabelling.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a benchmark model in the Hamiltonian text format.
    Model {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        lx: Option<usize>,
        #[arg(long)]
        ly: Option<usize>,
        /// Coupling, or comma-separated couplings per bond for tfim1d-inhom.
        #[arg(long = "J", alias = "j", value_delimiter = ',', allow_hyphen_values = true)]
        j: Vec<Decimal>,
        /// Field, or comma-separated fields per site for tfim1d-inhom.
        #[arg(long = "Omega", alias = "omega", value_delimiter = ',', allow_hyphen_values = true)]
        omega: Vec<Decimal>,
        #[arg(long, default_value = "periodic")]
        boundary: Boundary,
    },
    /// Compare the solver's group with brute-force enumeration.
    Verify {
        input: PathBuf,
        /// Run the oracle even beyond the qubit limit.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Export the coloured bipartite graph.
    Graph {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        /// Replace edge colours by coloured subdivision vertices.
        #[arg(long)]
        subdivide: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return e.exit_code();
        }
    };
    let policy = match std::env::var(EPS_VAR) {
        Ok(text) => match CoefficientPolicy::from_epsilon_str(&text) {
            Ok(p) => p,
            Err(e) => {
                let _ = writeln!(err, "error: {EPS_VAR}: {e}");
                return EXIT_INPUT;
            }
        },
        Err(_) => CoefficientPolicy::Exact,
    };
    match dispatch(cli.command, &policy, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, policy: &CoefficientPolicy, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Find { input, json, no_timing } => cmd_find(&input, json, no_timing, policy, out),
        Command::Equiv { a, b, json } => cmd_equiv(&a, &b, json, policy, out),
        Command::Model {
            family,
            n,
            lx,
            ly,
            j,
            omega,
            boundary,
        } => cmd_model(family, n, lx, ly, j, omega, boundary, out),
        Command::Verify { input, force, n_max } => cmd_verify(&input, force, n_max, policy, out),
        Command::Graph {
            input,
            format,
            subdivide,
        } => cmd_graph(&input, format, subdivide, policy, out),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Internal(format!("write failed: {e}"))
}

fn read_hamiltonian(path: &Path) -> Result<Hamiltonian, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    Hamiltonian::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn one_based_blocks(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.iter().map(|&i| i + 1).collect()).collect()
}

fn format_orbits(blocks: &[Vec<usize>]) -> String {
    one_based_blocks(blocks)
        .iter()
        .map(|b| {
            let inner: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", inner.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Serialize)]
struct FindReport {
    n: usize,
    num_terms: usize,
    generators: Vec<String>,
    group_order: String,
    orbits: Vec<Vec<usize>>,
    elapsed_ms: Option<f64>,
}

fn cmd_find(input: &Path, json: bool, no_timing: bool, policy: &CoefficientPolicy, out: &mut dyn Write) -> Outcome {
    let h = read_hamiltonian(input)?;
    let r = solver::find_symmetry_group(&h, policy).map_err(|e| Failure::Internal(e.to_string()))?;
    for g in &r.qubit_generators {
        if !equivalence::respects_classes(g, &h, &h, policy).map_err(|e| Failure::Internal(e.to_string()))? {
            return Err(Failure::Internal(format!("generator {g} is not a symmetry")));
        }
    }
    let report = FindReport {
        n: h.num_qubits(),
        num_terms: h.num_terms(),
        generators: r.qubit_generators.iter().map(|g| g.format_cycles()).collect(),
        group_order: r.order().to_string(),
        orbits: one_based_blocks(&r.group.orbits()),
        elapsed_ms: (!no_timing).then_some(r.elapsed.as_secs_f64() * 1e3),
    };
    if json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
        writeln!(out, "{text}").map_err(io_failure)?;
    } else {
        writeln!(out, "qubits: {}", report.n).map_err(io_failure)?;
        writeln!(out, "terms: {}", report.num_terms).map_err(io_failure)?;
        if report.generators.is_empty() {
            writeln!(out, "generators: (none)").map_err(io_failure)?;
        } else {
            writeln!(out, "generators:").map_err(io_failure)?;
            for g in &report.generators {
                writeln!(out, "  {g}").map_err(io_failure)?;
            }
        }
        writeln!(out, "order: {}", report.group_order).map_err(io_failure)?;
        writeln!(out, "orbits: {}", format_orbits(&r.group.orbits())).map_err(io_failure)?;
        if let Some(ms) = report.elapsed_ms {
            writeln!(out, "elapsed: {ms:.3} ms").map_err(io_failure)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_equiv(a: &Path, b: &Path, json: bool, policy: &CoefficientPolicy, out: &mut dyn Write) -> Outcome {
    let h1 = read_hamiltonian(a)?;
    let h2 = read_hamiltonian(b)?;
    if h1.num_qubits() != h2.num_qubits() {
        return Err(Failure::Input(format!(
            "qubit counts differ: {} has {}, {} has {}",
            a.display(),
            h1.num_qubits(),
            b.display(),
            h2.num_qubits()
        )));
    }
    let witness =
        equivalence::permutation_equivalent(&h1, &h2, policy).map_err(|e| Failure::Internal(e.to_string()))?;
    if json {
        let v = json!({
            "equivalent": witness.is_some(),
            "witness": witness.as_ref().map(|w| w.format_cycles()),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("static shape")).map_err(io_failure)?;
    } else {
        match &witness {
            Some(w) => writeln!(out, "equivalent: {w}"),
            None => writeln!(out, "not equivalent"),
        }
        .map_err(io_failure)?;
    }
    Ok(if witness.is_some() {
        EXIT_OK
    } else {
        EXIT_NOT_EQUIVALENT
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_model(
    family: Family,
    n: Option<usize>,
    lx: Option<usize>,
    ly: Option<usize>,
    j: Vec<Decimal>,
    omega: Vec<Decimal>,
    boundary: Boundary,
    out: &mut dyn Write,
) -> Outcome {
    let need_n = || n.ok_or_else(|| Failure::Input(format!("--n is required for {family}")));
    let mut spec = match family {
        Family::Tfim1d => ModelSpec::tfim_1d(need_n()?, boundary),
        Family::Tfim1dInhom => ModelSpec::tfim_1d_inhomogeneous(need_n()?, boundary),
        Family::HeisenbergMf => ModelSpec::heisenberg_mean_field(need_n()?),
        Family::Tfim2dSquare => {
            let side =
                |v: Option<usize>, name| v.ok_or_else(|| Failure::Input(format!("--{name} is required for tfim2d")));
            ModelSpec::tfim_2d_square(side(lx, "lx")?, side(ly, "ly")?)
        }
    };
    if !j.is_empty() {
        spec.j = j;
    }
    if !omega.is_empty() {
        spec.omega = omega;
    }
    let h = spec.build().map_err(|e| Failure::Input(e.to_string()))?;
    write!(out, "{}", h.serialize()).map_err(io_failure)?;
    Ok(EXIT_OK)
}

/// Outcome of comparing the solver's group with the oracle's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub solver_order: String,
    pub oracle_order: String,
    /// Every solver generator lies in the oracle group.
    pub solver_in_oracle: bool,
    /// Every oracle generator lies in the solver group.
    pub oracle_in_solver: bool,
}

impl VerifyReport {
    pub fn compare(solver: &PermutationGroup, oracle: &PermutationGroup) -> Self {
        let sifts =
            |gens: &[Permutation], into: &PermutationGroup| gens.iter().all(|g| into.contains(g).unwrap_or(false));
        VerifyReport {
            solver_order: solver.order().to_string(),
            oracle_order: oracle.order().to_string(),
            solver_in_oracle: sifts(solver.generators(), oracle),
            oracle_in_solver: sifts(oracle.generators(), solver),
        }
    }

    pub fn groups_equal(&self) -> bool {
        self.solver_order == self.oracle_order && self.solver_in_oracle && self.oracle_in_solver
    }

    /// 0 when the groups agree, otherwise the internal-failure code.
    pub fn exit_code(&self) -> i32 {
        if self.groups_equal() {
            EXIT_OK
        } else {
            EXIT_INTERNAL
        }
    }
}

fn cmd_verify(input: &Path, force: bool, n_max: usize, policy: &CoefficientPolicy, out: &mut dyn Write) -> Outcome {
    let h = read_hamiltonian(input)?;
    let n = h.num_qubits();
    if n > n_max && !force {
        return Err(Failure::Input(format!(
            "{n} qubits exceeds the brute-force limit of {n_max}; pass --force to run anyway"
        )));
    }
    if *policy != CoefficientPolicy::Exact {
        return Err(Failure::Input(format!(
            "verify compares exact term sets; unset {EPS_VAR}"
        )));
    }
    let solved = solver::find_symmetry_group(&h, policy).map_err(|e| Failure::Internal(e.to_string()))?;
    let brute = oracle::brute_force_group(&h, n_max.max(n)).map_err(|e| Failure::Input(e.to_string()))?;
    let report = VerifyReport::compare(&solved.group, &brute);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    writeln!(out, "solver order: {}", report.solver_order).map_err(io_failure)?;
    writeln!(out, "oracle order: {}", report.oracle_order).map_err(io_failure)?;
    writeln!(
        out,
        "solver generators in oracle group: {}",
        yes_no(report.solver_in_oracle)
    )
    .map_err(io_failure)?;
    writeln!(
        out,
        "oracle generators in solver group: {}",
        yes_no(report.oracle_in_solver)
    )
    .map_err(io_failure)?;
    writeln!(
        out,
        "{}",
        if report.groups_equal() {
            "groups equal"
        } else {
            "MISMATCH"
        }
    )
    .map_err(io_failure)?;
    Ok(report.exit_code())
}

fn coloured_graph_dot(g: &ColouredGraph) -> String {
    let mut s = String::from("graph subdivided {\n");
    for v in 0..g.num_vertices() {
        s.push_str(&format!("  v{v} [colour={}];\n", g.colour(v)));
    }
    for u in 0..g.num_vertices() {
        for &(w, _) in g.neighbours(u) {
            if u < w {
                s.push_str(&format!("  v{u} -- v{w};\n"));
            }
        }
    }
    s.push_str("}\n");
    s
}

fn coloured_graph_json(g: &ColouredGraph) -> serde_json::Value {
    let vertices: Vec<_> = (0..g.num_vertices())
        .map(|v| json!({"id": v, "colour": g.colour(v)}))
        .collect();
    let mut edges = Vec::new();
    for u in 0..g.num_vertices() {
        for &(w, _) in g.neighbours(u) {
            if u < w {
                edges.push(json!([u, w]));
            }
        }
    }
    json!({"vertices": vertices, "edges": edges})
}

fn cmd_graph(
    input: &Path,
    format: GraphFormat,
    subdivide: bool,
    policy: &CoefficientPolicy,
    out: &mut dyn Write,
) -> Outcome {
    let h = read_hamiltonian(input)?;
    let g = ColouredBipartiteGraph::build(&h, policy);
    let text = match (format, subdivide) {
        (GraphFormat::Dot, false) => g.to_dot(),
        (GraphFormat::Json, false) => {
            serde_json::to_string_pretty(&g.to_json()).map_err(|e| Failure::Internal(e.to_string()))? + "\n"
        }
        (GraphFormat::Dot, true) => coloured_graph_dot(&g.subdivided()),
        (GraphFormat::Json, true) => {
            serde_json::to_string_pretty(&coloured_graph_json(&g.subdivided())).expect("static shape") + "\n"
        }
    };
    out.write_all(text.as_bytes()).map_err(io_failure)?;
    Ok(EXIT_OK)
}
