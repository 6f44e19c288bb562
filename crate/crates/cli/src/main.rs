use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qtrees::builders::{self, VandermondeParams};
use qtrees::circuit::{self, parse_circuit, serialize_circuit};
use qtrees::formula::{self, parse_formula, serialize_formula, Formula};
use qtrees::gf2::{BitMatrix, Coset};
use qtrees::mots::{self, LeafConvention};
use qtrees::rank::{self, ChiMode};
use qtrees::state::{self, parse_tree, serialize_tree, AmplitudeVector, StateTree};
use qtrees::Error;

/// Environment variable naming a directory searched for input files that
/// do not exist relative to the working directory.
const FIXTURE_ENV: &str = "QTREES_FIXTURES";

#[derive(Parser)]
#[command(name = "qtrees", version, about = "Quantum state trees, formulas, coset tree sizes and rank experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Master seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial count for experiments (each command has its own default).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Largest qubit count for dense evaluation.
    #[arg(long, global = true, default_value_t = qtrees::DEFAULT_MAX_QUBITS)]
    max_qubits: usize,
    /// Leaf cost convention for tree-size computations.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Classical)]
    convention: Convention,
    /// Tolerance for checks made by the command-line tool.
    #[arg(long, global = true, default_value_t = qtrees::TOL)]
    tolerance: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Classical,
    Free,
}

impl From<Convention> for LeafConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Classical => LeafConvention::Classical,
            Convention::Free => LeafConvention::Free,
        }
    }
}

#[derive(Args)]
struct Io {
    /// Input file, `-` for stdin.
    input: String,
    /// Output file, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the amplitudes of a tree.
    Eval {
        #[command(flatten)]
        io: Io,
        /// Skip zero amplitudes.
        #[arg(long)]
        omit_zeros: bool,
    },
    /// Check the structural and normalization rules of a tree.
    Validate {
        #[command(flatten)]
        io: Io,
    },
    /// Print the strongest class of a tree.
    Classify {
        #[command(flatten)]
        io: Io,
    },
    /// Build a named state family.
    Build(BuildArgs),
    /// Convert between trees and multilinear formulas.
    Convert {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Qubit count when converting a formula (default: largest variable).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rebalance a formula to logarithmic depth.
    Balance {
        #[command(flatten)]
        io: Io,
        /// Print size and depth before and after to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Exact minimum manifestly orthogonal tree size of a coset state.
    Mots(MotsArgs),
    /// Compile an orthogonal tree into a preparation circuit.
    Compile {
        #[command(flatten)]
        io: Io,
        /// Simulate the result and print a fidelity report to stderr.
        #[arg(long)]
        verify: bool,
    },
    /// Simulate a circuit from the all-zero state.
    Simulate {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        omit_zeros: bool,
    },
    /// Seeded rank experiments.
    RankExp {
        #[command(subcommand)]
        exp: RankExp,
    },
    /// Binary Vandermonde matrix and its image weight.
    Vandermonde {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u32,
        /// Print statistics instead of the matrix.
        #[arg(long)]
        stats: bool,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Formula,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cat,
    Parity,
    ParityFourier,
    Cluster1d,
    Hamming,
    CosetSigma1,
    CosetFourier,
    Divisibility,
    Knill,
    Figure2,
    Threshold,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum BuildFormat {
    Tree,
    Amplitudes,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    /// Parity bit for parity families.
    #[arg(long, default_value_t = 0)]
    j: u8,
    /// Hamming weight, or threshold variable count.
    #[arg(long)]
    k: Option<usize>,
    /// Threshold value.
    #[arg(long)]
    h: Option<usize>,
    /// Modulus for the divisibility family.
    #[arg(long)]
    p: Option<u64>,
    /// Matrix file for coset families.
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, value_enum, default_value_t = BuildFormat::Tree)]
    format: BuildFormat,
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct MotsArgs {
    /// Matrix file (optionally with a right-hand side).
    #[arg(long, required_unless_present = "random")]
    matrix: Option<String>,
    /// Write a minimum-size witness tree.
    #[arg(long)]
    witness: Option<String>,
    /// Write the per-subset table as tab-separated text.
    #[arg(long)]
    table: Option<String>,
    /// Run the random-matrix experiment instead.
    #[arg(long, conflicts_with = "matrix")]
    random: bool,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Subcommand)]
enum RankExp {
    /// Random subgroup under random balanced partitions.
    Subgroup {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Full-rank frequency of random row submatrices.
    Vandermonde {
        #[arg(long, default_value_t = 15)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        d: u32,
        #[arg(long, default_value_t = 8)]
        c: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Restriction matrices of a coset indicator.
    Erasure {
        /// Matrix file; without it a random `k x n` subgroup is used.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        l: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Subset sums of powers of two modulo a prime.
    SubsetSum {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[arg(long, default_value_t = 0.2)]
        gamma: f64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Largest Schmidt rank of a tree or amplitude file.
    Chi {
        #[command(flatten)]
        io: Io,
        /// Number of sampled bipartitions (default: exhaustive up to 12 qubits).
        #[arg(long)]
        samples: Option<usize>,
    },
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn resolve(path: &str) -> PathBuf {
    let p = Path::new(path);
    if !p.exists() && p.is_relative() {
        if let Some(dir) = std::env::var_os(FIXTURE_ENV) {
            let alt = Path::new(&dir).join(p);
            if alt.exists() {
                return alt;
            }
        }
    }
    p.to_path_buf()
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(resolve(path))?)
    }
}

fn write_output(path: &str, text: &str) -> CliResult<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn read_tree(path: &str) -> CliResult<StateTree> {
    Ok(parse_tree(&read_input(path)?)?)
}

fn read_coset(path: &str) -> CliResult<Coset> {
    let (a, b) = BitMatrix::parse_text(&read_input(path)?)?;
    Ok(match b {
        Some(b) => Coset::new(a, b)?,
        None => Coset::subgroup(a),
    })
}

fn require<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| Failure::Usage(format!("missing required flag --{flag}")))
}

fn trials(g: &Global, default: usize) -> usize {
    g.trials.unwrap_or(default)
}

fn formula_vars(f: &Formula) -> usize {
    f.vars().max().max(1)
}

fn build(g: &Global, a: &BuildArgs) -> CliResult<()> {
    let n = || require(a.n, "n");
    if let Family::Threshold = a.family {
        let f = formula::build_threshold_formula(require(a.k, "k")?, require(a.h, "h")?)?;
        return write_output(&a.output, &serialize_formula(&f));
    }
    let tree = match a.family {
        Family::Cat => builders::build_cat(n()?)?,
        Family::Parity => builders::build_parity(n()?, a.j)?,
        Family::ParityFourier => builders::build_parity_fourier(n()?, a.j)?,
        Family::Cluster1d => builders::build_cluster1d(n()?)?,
        Family::Hamming => builders::build_hamming(n()?, require(a.k, "k")?)?,
        Family::CosetSigma1 => builders::build_coset_sigma1(&read_coset(&require(a.matrix.clone(), "matrix")?)?, g.max_qubits)?,
        Family::CosetFourier => {
            builders::build_coset_fourier_otree(&read_coset(&require(a.matrix.clone(), "matrix")?)?, g.max_qubits)?
        }
        Family::Divisibility => builders::build_divisibility_tree(n()?, require(a.p, "p")?)?,
        Family::Knill => builders::build_knill_tree(),
        Family::Figure2 => builders::build_figure2_tree(),
        Family::Threshold => unreachable!(),
    };
    let text = match a.format {
        BuildFormat::Tree => serialize_tree(&tree),
        BuildFormat::Amplitudes => state::evaluate(&tree, g.max_qubits)?.to_text(false),
    };
    write_output(&a.output, &text)
}

fn run_mots(g: &Global, a: &MotsArgs) -> CliResult<()> {
    let conv: LeafConvention = g.convention.into();
    if a.random {
        let rep = mots::mots_random_experiment(a.n, a.k, trials(g, 100), g.seed, conv)?;
        return write_output(&a.output, &rep.to_tsv());
    }
    let coset = read_coset(&require(a.matrix.clone(), "matrix")?)?;
    let r = mots::mots_coset_of(&coset, conv)?;
    let mut s = format!("value\t{}\n", r.value);
    s.push_str(&format!("columns\t{}\n", coset.n()));
    s.push_str(&format!("rank\t{}\n", coset.rank()));
    s.push_str(&format!("log2_size\t{}\n", coset.log2_size()));
    s.push_str(&format!("convention\t{}\n", conv.as_str()));
    if let Some(w) = &r.witness {
        s.push_str(&format!("witness_size\t{}\n", w.size()));
        s.push_str(&format!("witness_depth\t{}\n", w.depth()));
    }
    if let Some(path) = &a.witness {
        let w = r.witness.as_ref().ok_or(Error::Oversize {
            what: "witness tree (log2 coset size)",
            size: coset.log2_size(),
            limit: mots::WITNESS_CAP_LOG2,
        })?;
        write_output(path, &serialize_tree(w))?;
    }
    if let Some(path) = &a.table {
        write_output(path, &r.table.to_tsv())?;
    }
    write_output(&a.output, &s)
}

fn read_state(path: &str, g: &Global) -> CliResult<AmplitudeVector> {
    let src = read_input(path)?;
    if src.trim_start().starts_with('(') || src.trim_start().starts_with(';') {
        Ok(state::evaluate(&parse_tree(&src)?, g.max_qubits)?)
    } else {
        Ok(AmplitudeVector::from_text(&src)?)
    }
}

fn run_rank(g: &Global, exp: &RankExp) -> CliResult<()> {
    match exp {
        RankExp::Subgroup { n, output } => {
            let rep = rank::subgroup_rank_experiment(*n, trials(g, 2000), g.seed)?;
            write_output(output, &rep.to_tsv())
        }
        RankExp::Vandermonde { n, k, d, c, output } => {
            let p = VandermondeParams { n: *n, k: *k, d: *d, c: *c };
            let rep = rank::vandermonde_rank_experiment(p, trials(g, 2000), g.seed)?;
            write_output(output, &rep.to_tsv())
        }
        RankExp::Erasure { matrix, n, k, l, output } => {
            let coset = match matrix {
                Some(m) => read_coset(m)?,
                None => {
                    let mut rng = qtrees::rng::trial_rng(g.seed, u64::MAX);
                    Coset::subgroup(BitMatrix::random(*k, *n, &mut rng))
                }
            };
            let rep = rank::erasure_recoverability_check(&coset, *l, trials(g, 200), g.seed)?;
            write_output(output, &rep.to_tsv())
        }
        RankExp::SubsetSum { n, m, p, gamma, output } => {
            let rep = rank::subset_sum_coverage(*n, *m, *p, *gamma, trials(g, 500), g.seed)?;
            write_output(output, &rep.to_tsv())
        }
        RankExp::Chi { io, samples } => {
            let v = read_state(&io.input, g)?;
            let mode = match samples {
                Some(s) => ChiMode::Sampled { samples: *s, seed: g.seed },
                None => ChiMode::Auto,
            };
            let chi = rank::chi_max(&v, mode)?;
            write_output(&io.output, &format!("key\tvalue\nn\t{}\nchi\t{chi}\n", v.n()))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    if !(g.tolerance > 0.0 && g.tolerance < 1.0) {
        return Err(Failure::Usage(format!("--tolerance must lie in (0, 1), got {}", g.tolerance)));
    }
    match &cli.cmd {
        Cmd::Eval { io, omit_zeros } => {
            let v = state::evaluate(&read_tree(&io.input)?, g.max_qubits)?;
            write_output(&io.output, &v.to_text(*omit_zeros))
        }
        Cmd::Validate { io } => {
            let t = read_tree(&io.input)?;
            let vs = state::validate(&t, g.max_qubits);
            if vs.is_empty() {
                return write_output(&io.output, "valid\n");
            }
            let text: String = vs.iter().map(|v| format!("{v}\n")).collect();
            write_output(&io.output, &text)?;
            Err(Error::InvalidTree(format!("{} violation(s)", vs.len())).into())
        }
        Cmd::Classify { io } => {
            let c = state::classify(&read_tree(&io.input)?, g.max_qubits)?;
            write_output(&io.output, &format!("{}\n", c.as_str()))
        }
        Cmd::Build(a) => build(g, a),
        Cmd::Convert { io, to, n } => {
            let src = read_input(&io.input)?;
            let text = match to {
                ConvertTarget::Formula => serialize_formula(&formula::tree_to_formula(&parse_tree(&src)?)),
                ConvertTarget::Tree => {
                    let f = parse_formula(&src)?;
                    let n = n.unwrap_or_else(|| formula_vars(&f));
                    serialize_tree(&formula::formula_to_tree(&f, n)?)
                }
            };
            write_output(&io.output, &text)
        }
        Cmd::Balance { io, stats } => {
            let f = parse_formula(&read_input(&io.input)?)?;
            let b = formula::balance(&f)?;
            if *stats {
                eprintln!("size\t{}\t{}", f.size(), b.size());
                eprintln!("depth\t{}\t{}", f.depth(), b.depth());
            }
            write_output(&io.output, &serialize_formula(&b))
        }
        Cmd::Mots(a) => run_mots(g, a),
        Cmd::Compile { io, verify } => {
            let t = read_tree(&io.input)?;
            let c = circuit::compile(&t)?;
            if *verify {
                let rep = circuit::verify_prepare(&t)?;
                eprint!("{}", rep.to_tsv());
                if rep.fidelity < 1.0 - g.tolerance {
                    return Err(Error::InvalidTree(format!("fidelity {} below 1 - {}", rep.fidelity, g.tolerance)).into());
                }
            }
            write_output(&io.output, &serialize_circuit(&c))
        }
        Cmd::Simulate { io, omit_zeros } => {
            let c = parse_circuit(&read_input(&io.input)?)?;
            write_output(&io.output, &circuit::simulate(&c)?.to_text(*omit_zeros))
        }
        Cmd::RankExp { exp } => run_rank(g, exp),
        Cmd::Vandermonde { n, k, d, stats, output } => {
            let p = VandermondeParams { n: *n, k: *k, d: *d, c: 0 };
            let v = builders::build_binary_vandermonde(&p)?;
            if !stats {
                return write_output(output, &v.to_text());
            }
            let mut s = format!("key\tvalue\nrows\t{}\ncols\t{}\nrank\t{}\n", v.rows(), v.cols(), v.rank());
            if v.cols() <= 24 {
                s.push_str(&format!("min_image_weight\t{}\n", builders::min_image_weight(&v)?));
            }
            s.push_str(&format!("weight_bound\t{}\n", (n - k) << (d - 1)));
            write_output(output, &s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("ERROR {}: {}", e.code(), e.to_string().replace('\n', " "));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
