//! Command-line front end. Every subcommand builds a serializable result;
//! text output is rendered from the same value, so `--json` only changes the
//! presentation. Vertex labels are 1-based in all output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::catalog::{build_family, build_named, random_chordal, random_graph, FamilySpec};
use crate::cone::{
    decompose_extremal, parse_matrix, random_extremal, write_complex, write_real, AnyMatrix, ExtremalClass, Field,
    FieldTag, PatternMatrix, Tolerance,
};
use crate::graph::{edge_list, graph6, Graph, VertexSet};
use crate::recognize::{atom_decompose, classify_order_with_cap, f_decompose, AtomTree, FDecomposition, FVerdict, OrderClass};
use crate::selftest::{self, SelftestConfig, SelftestSummary, MAX_EXHAUSTIVE_N};
use crate::witness::{scan_forbidden, Family, Witness, DEFAULT_CAP, MAX_CAP};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "PSD_SPARSITY_THREADS";

#[derive(Debug, Parser)]
#[command(name = "psd-sparsity", version, about = "Sparsity order of graphs and extremal decompositions of PSD_G")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Numerical tolerance for rank, pattern, PSD and null-space cutoffs.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Largest host size the forbidden-subgraph search accepts.
    #[arg(long, global = true, value_name = "INT", default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Graph6,
    Edges,
}

#[derive(Debug, Args)]
struct GraphInput {
    /// Graph file (`-` for stdin).
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Input format; detected from the content when absent.
    #[arg(long)]
    format: Option<GraphFormat>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the sparsity order of each graph.
    Analyze(GraphInput),
    /// Clique cut-set decomposition.
    Atoms(GraphInput),
    /// Paired-clique certificate for membership in F, or an obstruction.
    Fdecomp(GraphInput),
    /// First forbidden induced subgraph of a family.
    Witness {
        #[command(flatten)]
        input: GraphInput,
        /// order2-complex | cliquesum-F | F
        #[arg(long, default_value = "order2-complex")]
        family: String,
    },
    /// Split a matrix in PSD_G into extremal summands.
    Decompose {
        #[command(flatten)]
        input: GraphInput,
        /// Matrix file: an `N real` or `N complex` header, then N rows.
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
    /// Build a catalog or random graph.
    Gen {
        /// Named graph: C5, P4, K4, K(2,3), D1..D6, petersen, octahedron, bowtie.
        #[arg(long, conflicts_with_all = ["family", "random", "chordal"])]
        name: Option<String>,
        /// Family spec such as f:k=3,x=1,1,1,y=1,1,1,z=2 or k3:z=1.
        #[arg(long, conflicts_with_all = ["random", "chordal"])]
        family: Option<String>,
        /// Random graph: n=INT,p=FLOAT.
        #[arg(long, conflicts_with = "chordal")]
        random: Option<String>,
        /// Random chordal graph: n=INT,clique=INT.
        #[arg(long)]
        chordal: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output format of the graph file.
        #[arg(long, default_value = "graph6")]
        format: GraphFormat,
        /// Graph file; the decomposition sidecar goes to FILE.json.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Seeded search for a certified extremal matrix.
    GenExtremal {
        /// chordal-rank1:N | k2-unitary:SIDE | k3-rank2 | cN-rank3 | dJ-rank3
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "complex")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Matrix file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Pattern graph file (graph6).
        #[arg(long, value_name = "FILE")]
        graph_out: Option<PathBuf>,
    },
    /// Recognizer/oracle equivalences, numeric suites and catalog goldens.
    Selftest {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Envelope shared by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    /// SHA-256 over the input files in flag order.
    pub input_digest: String,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip)]
    text: String,
    #[serde(skip)]
    exit: i32,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.exit
    }

    pub fn to_text(&self) -> String {
        let mut s = self.text.clone();
        writeln!(s, "# {} {} | input sha256:{} | command: {}", self.tool, self.version, self.input_digest, self.command.join(" ")).unwrap();
        if let Some(t) = self.timing_ms {
            writeln!(s, "# time: {t:.3} ms").unwrap();
        }
        s
    }
}

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs { hasher: Sha256::new() }
    }

    fn read(&mut self, path: &Path) -> Result<String> {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        } else {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        };
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

fn detect_format(text: &str) -> GraphFormat {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.split_whitespace().next() == Some("n") => GraphFormat::Edges,
        _ => GraphFormat::Graph6,
    }
}

fn read_graphs(inputs: &mut Inputs, g: &GraphInput) -> Result<Vec<Graph>> {
    let text = inputs.read(&g.graph)?;
    let graphs = match g.format.unwrap_or_else(|| detect_format(&text)) {
        GraphFormat::Graph6 => graph6::decode_all(&text)?,
        GraphFormat::Edges => vec![edge_list::parse(&text)?],
    };
    if graphs.is_empty() {
        bail!("{}: no graphs found", g.graph.display());
    }
    Ok(graphs)
}

fn read_single_graph(inputs: &mut Inputs, g: &GraphInput) -> Result<Graph> {
    let mut graphs = read_graphs(inputs, g)?;
    if graphs.len() != 1 {
        bail!("{}: expected one graph, found {}", g.graph.display(), graphs.len());
    }
    Ok(graphs.remove(0))
}

fn labels(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn join_labels(vs: &[usize]) -> String {
    labels(vs).iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Serialize)]
struct WitnessOut {
    pattern: String,
    /// Host vertices in pattern order.
    vertices: Vec<usize>,
    set: VertexSet,
}

impl WitnessOut {
    fn new(w: &Witness) -> Self {
        WitnessOut { pattern: w.pattern().name(), vertices: labels(w.vertices()), set: w.vertex_set() }
    }

    fn text(&self) -> String {
        format!("{} {}", self.pattern, self.set)
    }
}

#[derive(Debug, Serialize)]
struct SeparatorOut {
    clique: VertexSet,
    split_off: VertexSet,
    remainder: VertexSet,
}

#[derive(Debug, Serialize)]
struct AtomsOut {
    atoms: Vec<VertexSet>,
    separators: Vec<SeparatorOut>,
    elimination_order: Vec<usize>,
}

impl AtomsOut {
    fn new(t: &AtomTree) -> Self {
        AtomsOut {
            atoms: t.atoms.clone(),
            separators: t
                .separators
                .iter()
                .map(|s| SeparatorOut { clique: s.clique.clone(), split_off: s.split_off.clone(), remainder: s.remainder.clone() })
                .collect(),
            elimination_order: labels(&t.elimination_order),
        }
    }

    fn text(&self, s: &mut String) {
        writeln!(s, "atoms: {}", self.atoms.len()).unwrap();
        for (i, a) in self.atoms.iter().enumerate() {
            writeln!(s, "atom {}: {a}", i + 1).unwrap();
        }
        for sep in &self.separators {
            writeln!(s, "separator {}: {} | {}", sep.clique, sep.split_off, sep.remainder).unwrap();
        }
        writeln!(s, "elimination order: {}", join_labels(&self.elimination_order.iter().map(|v| v - 1).collect::<Vec<_>>())).unwrap();
    }
}

#[derive(Debug, Serialize)]
struct PairOut {
    x: VertexSet,
    y: VertexSet,
}

#[derive(Debug, Serialize)]
struct FDecompOut {
    k: usize,
    pairs: Vec<PairOut>,
    z: VertexSet,
}

impl FDecompOut {
    fn new(f: &FDecomposition) -> Self {
        FDecompOut {
            k: f.k(),
            pairs: f.pairs.iter().map(|(x, y)| PairOut { x: x.clone(), y: y.clone() }).collect(),
            z: f.z.clone(),
        }
    }

    fn text(&self, s: &mut String) {
        writeln!(s, "k: {}", self.k).unwrap();
        for (i, p) in self.pairs.iter().enumerate() {
            writeln!(s, "pair {}: X={} Y={}", i + 1, p.x, p.y).unwrap();
        }
        writeln!(s, "Z: {}", self.z).unwrap();
    }
}

#[derive(Debug, Serialize)]
struct AtomTagOut {
    vertices: VertexSet,
    tag: String,
}

#[derive(Debug, Serialize)]
struct AnalyzeOut {
    n: usize,
    order: OrderClass,
    chordal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    peo: Option<Vec<usize>>,
    atoms: Vec<AtomTagOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessOut>,
}

impl AnalyzeOut {
    fn text(&self, s: &mut String) {
        match (&self.order, &self.witness) {
            (OrderClass::One, _) => writeln!(s, "order: ONE (chordal)").unwrap(),
            (OrderClass::GreaterThanTwo, Some(w)) => writeln!(s, "order: GREATER_THAN_TWO; witness: {}", w.text()).unwrap(),
            (c, _) => writeln!(s, "order: {c}").unwrap(),
        }
        writeln!(s, "n: {}", self.n).unwrap();
        if let Some(peo) = &self.peo {
            writeln!(s, "peo: {}", peo.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).unwrap();
        }
        if let Some(w) = &self.witness {
            writeln!(s, "witness vertices: {}", w.vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).unwrap();
        }
        for (i, a) in self.atoms.iter().enumerate() {
            writeln!(s, "atom {}: {} {}", i + 1, a.vertices, a.tag).unwrap();
        }
    }
}

fn analyze_one(g: &Graph, cap: usize) -> Result<AnalyzeOut> {
    let v = classify_order_with_cap(g, cap)?;
    Ok(AnalyzeOut {
        n: g.n(),
        order: v.class,
        chordal: v.class == OrderClass::One,
        peo: v.peo.as_deref().map(labels),
        atoms: v.atoms.atoms.iter().zip(&v.tags).map(|(a, t)| AtomTagOut { vertices: a.clone(), tag: t.to_string() }).collect(),
        witness: v.witness.as_ref().map(WitnessOut::new),
    })
}

/// Renders one block per graph, headed by its index when there are several.
fn per_graph<T: Serialize>(items: &[T], render: impl Fn(&T, &mut String)) -> Result<(serde_json::Value, String)> {
    let mut text = String::new();
    for (i, it) in items.iter().enumerate() {
        if items.len() > 1 {
            writeln!(text, "## graph {}", i + 1).unwrap();
        }
        render(it, &mut text);
    }
    Ok((serde_json::json!({ "graphs": items }), text))
}

#[derive(Debug, Serialize)]
struct FdecompOut {
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<FDecompOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessOut>,
}

#[derive(Debug, Serialize)]
struct WitnessResult {
    family: String,
    witness: Option<WitnessOut>,
}

#[derive(Debug, Serialize)]
struct SummandOut {
    rank: usize,
    dimension: usize,
    matrix: String,
}

#[derive(Debug, Serialize)]
struct DecomposeOut {
    field: FieldTag,
    n: usize,
    summands: Vec<SummandOut>,
    max_rank: usize,
    /// `|X - sum of summands|_F / |X|_F`.
    residual: f64,
}

fn matrix_text<T: Field>(m: &DMatrix<T>) -> String {
    // the field tag decides which writer applies; the casts are exact
    match T::TAG {
        FieldTag::Real => write_real(&m.map(|z| z.real())),
        FieldTag::Complex => write_complex(&m.map(|z| Complex::new(z.real(), z.imaginary()))),
    }
}

fn decompose_in<T: Field>(g: Graph, m: DMatrix<T>, tol: &Tolerance) -> Result<DecomposeOut> {
    let n = m.nrows();
    if g.n() != n {
        bail!("shape mismatch: graph has {} vertices but the matrix is {n} x {n}", g.n());
    }
    let x = PatternMatrix::new(g, m, tol).context("tolerance violation")?;
    x.check_psd(tol).context("tolerance violation")?;
    let summands = decompose_extremal(&x, tol)?;
    let mut sum = DMatrix::<T>::zeros(n, n);
    for s in &summands {
        sum += s.matrix.matrix();
    }
    let norm = x.norm();
    let residual = if norm > 0.0 { (sum - x.matrix()).norm() / norm } else { 0.0 };
    Ok(DecomposeOut {
        field: T::TAG,
        n,
        max_rank: summands.iter().map(|s| s.rank).max().unwrap_or(0),
        summands: summands
            .iter()
            .map(|s| SummandOut { rank: s.rank, dimension: s.dimension, matrix: matrix_text(s.matrix.matrix()) })
            .collect(),
        residual,
    })
}

#[derive(Debug, Serialize)]
struct GenOut {
    graph6: String,
    n: usize,
    edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<FDecompOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    files: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ExtremalOut {
    class: String,
    field: FieldTag,
    seed: u64,
    attempts: usize,
    rank: usize,
    dimension: usize,
    graph6: String,
    matrix: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    files: Vec<String>,
}

/// `key=value` pairs separated by commas.
fn key_values(text: &str) -> Result<Vec<(String, String)>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| anyhow!("expected key=value, got \"{t}\""))
        })
        .collect()
}

fn value<T: std::str::FromStr>(kv: &[(String, String)], key: &str) -> Result<T> {
    let raw = kv.iter().find(|(k, _)| k == key).map(|(_, v)| v).ok_or_else(|| anyhow!("missing {key}="))?;
    raw.parse().map_err(|_| anyhow!("invalid value for {key}: \"{raw}\""))
}

fn write_file(path: &Path, text: &str, files: &mut Vec<String>) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    files.push(path.display().to_string());
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| anyhow!("{THREADS_ENV} must be a positive integer, got \"{raw}\""))?;
    if n == 0 {
        bail!("{THREADS_ENV} must be a positive integer, got \"{raw}\"");
    }
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cli: &Cli, command: Vec<String>) -> Result<Report> {
    configure_threads()?;
    let start = Instant::now();
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => bail!("--tol must be a positive finite number, got {t}"),
        Some(t) => Tolerance::with_base(t),
        None => Tolerance::default(),
    };
    if cli.cap > MAX_CAP {
        bail!("--cap {} exceeds the maximum {MAX_CAP}", cli.cap);
    }
    let cap = cli.cap;
    let mut inputs = Inputs::new();
    let mut exit = 0;
    let (result, text) = match &cli.command {
        Command::Analyze(input) => {
            let graphs = read_graphs(&mut inputs, input)?;
            let outs = graphs.iter().map(|g| analyze_one(g, cap)).collect::<Result<Vec<_>>>()?;
            per_graph(&outs, AnalyzeOut::text)?
        }
        Command::Atoms(input) => {
            let graphs = read_graphs(&mut inputs, input)?;
            let outs: Vec<AtomsOut> = graphs.iter().map(|g| AtomsOut::new(&atom_decompose(g))).collect();
            per_graph(&outs, AtomsOut::text)?
        }
        Command::Fdecomp(input) => {
            let graphs = read_graphs(&mut inputs, input)?;
            let outs: Vec<FdecompOut> = graphs
                .iter()
                .map(|g| match f_decompose(g) {
                    FVerdict::Member(f) => FdecompOut { member: true, decomposition: Some(FDecompOut::new(&f)), witness: None },
                    FVerdict::NotMember(w) => FdecompOut { member: false, decomposition: None, witness: Some(WitnessOut::new(&w)) },
                })
                .collect();
            per_graph(&outs, |o, s| {
                if let Some(d) = &o.decomposition {
                    writeln!(s, "F member: yes").unwrap();
                    d.text(s);
                }
                if let Some(w) = &o.witness {
                    writeln!(s, "F member: no; witness: {}", w.text()).unwrap();
                }
            })?
        }
        Command::Witness { input, family } => {
            let fam: Family = family.parse().map_err(|e: String| anyhow!(e))?;
            let graphs = read_graphs(&mut inputs, input)?;
            let outs = graphs
                .iter()
                .map(|g| Ok(WitnessResult { family: family.clone(), witness: scan_forbidden(g, fam, cap)?.as_ref().map(WitnessOut::new) }))
                .collect::<Result<Vec<_>>>()?;
            per_graph(&outs, |o, s| match &o.witness {
                Some(w) => {
                    writeln!(s, "witness: {}", w.text()).unwrap();
                    writeln!(s, "vertices: {}", w.vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).unwrap();
                }
                None => writeln!(s, "witness: none").unwrap(),
            })?
        }
        Command::Decompose { input, matrix } => {
            let g = read_single_graph(&mut inputs, input)?;
            let mtext = inputs.read(matrix)?;
            let out = match parse_matrix(&mtext).with_context(|| format!("parsing {}", matrix.display()))? {
                AnyMatrix::Real(m) => decompose_in::<f64>(g, m, &tol)?,
                AnyMatrix::Complex(m) => decompose_in::<Complex<f64>>(g, m, &tol)?,
            };
            let mut s = String::new();
            writeln!(s, "field: {}", out.field).unwrap();
            writeln!(s, "n: {}", out.n).unwrap();
            writeln!(s, "summands: {}", out.summands.len()).unwrap();
            writeln!(s, "max rank: {}", out.max_rank).unwrap();
            for (i, sm) in out.summands.iter().enumerate() {
                writeln!(s, "summand {}: rank {}, dimension {}", i + 1, sm.rank, sm.dimension).unwrap();
                s.push_str(&sm.matrix);
            }
            writeln!(s, "residual: {:e}", out.residual).unwrap();
            (serde_json::to_value(&out)?, s)
        }
        Command::Gen { name, family, random, chordal, seed, format, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (graph, decomposition) = if let Some(name) = name {
                (build_named(name, None)?, None)
            } else if let Some(spec) = family {
                let fam = build_family(&FamilySpec::parse(spec)?)?;
                (fam.graph, fam.decomposition)
            } else if let Some(spec) = random {
                let kv = key_values(spec)?;
                let n: usize = value(&kv, "n")?;
                let p: f64 = value(&kv, "p")?;
                if n == 0 || !(0.0..=1.0).contains(&p) {
                    bail!("random graph needs n >= 1 and 0 <= p <= 1");
                }
                (random_graph(n, p, &mut rng), None)
            } else if let Some(spec) = chordal {
                let kv = key_values(spec)?;
                let n: usize = value(&kv, "n")?;
                let clique: usize = value(&kv, "clique")?;
                if n == 0 {
                    bail!("chordal graph needs n >= 1");
                }
                (random_chordal(n, clique, &mut rng), None)
            } else {
                bail!("gen needs one of --name, --family, --random, --chordal");
            };
            let mut files = Vec::new();
            let decomposition = decomposition.as_ref().map(FDecompOut::new);
            if let Some(path) = out {
                let body = match format {
                    GraphFormat::Graph6 => format!("{}\n", graph6::encode(&graph)),
                    GraphFormat::Edges => edge_list::write(&graph),
                };
                write_file(path, &body, &mut files)?;
                if let Some(d) = &decomposition {
                    write_file(&sidecar_path(path), &format!("{}\n", serde_json::to_string_pretty(d)?), &mut files)?;
                }
            }
            let res = GenOut { graph6: graph6::encode(&graph), n: graph.n(), edges: graph.edge_count(), decomposition, files };
            let mut s = String::new();
            writeln!(s, "graph6: {}", res.graph6).unwrap();
            writeln!(s, "n: {}", res.n).unwrap();
            writeln!(s, "edges: {}", res.edges).unwrap();
            if let Some(d) = &res.decomposition {
                d.text(&mut s);
            }
            for f in &res.files {
                writeln!(s, "wrote: {f}").unwrap();
            }
            (serde_json::to_value(&res)?, s)
        }
        Command::GenExtremal { class, field, seed, out, graph_out } => {
            let class: ExtremalClass = class.parse().map_err(|e: String| anyhow!(e))?;
            let field: FieldTag = field.parse().map_err(|e: String| anyhow!(e))?;
            let (pattern, rank, dimension, attempts, matrix) = match field {
                FieldTag::Real => {
                    let r = random_extremal::<f64>(class, *seed, &tol)?;
                    (r.matrix.pattern().clone(), r.rank, r.dimension, r.attempts, matrix_text(r.matrix.matrix()))
                }
                FieldTag::Complex => {
                    let r = random_extremal::<Complex<f64>>(class, *seed, &tol)?;
                    (r.matrix.pattern().clone(), r.rank, r.dimension, r.attempts, matrix_text(r.matrix.matrix()))
                }
            };
            let mut files = Vec::new();
            if let Some(path) = out {
                write_file(path, &matrix, &mut files)?;
            }
            if let Some(path) = graph_out {
                write_file(path, &format!("{}\n", graph6::encode(&pattern)), &mut files)?;
            }
            let res = ExtremalOut {
                class: class.to_string(),
                field,
                seed: *seed,
                attempts,
                rank,
                dimension,
                graph6: graph6::encode(&pattern),
                matrix,
                files,
            };
            let mut s = String::new();
            writeln!(s, "class: {}", res.class).unwrap();
            writeln!(s, "field: {}", res.field).unwrap();
            writeln!(s, "seed: {}", res.seed).unwrap();
            writeln!(s, "attempts: {}", res.attempts).unwrap();
            writeln!(s, "rank: {}", res.rank).unwrap();
            writeln!(s, "dimension: {}", res.dimension).unwrap();
            writeln!(s, "graph6: {}", res.graph6).unwrap();
            s.push_str(&res.matrix);
            for f in &res.files {
                writeln!(s, "wrote: {f}").unwrap();
            }
            (serde_json::to_value(&res)?, s)
        }
        Command::Selftest { max_n, samples, seed } => {
            if *max_n > MAX_EXHAUSTIVE_N {
                bail!("--max-n {max_n} exceeds {MAX_EXHAUSTIVE_N}");
            }
            let summary = selftest::run(SelftestConfig { max_n: *max_n, samples: *samples, seed: *seed });
            if !summary.passed() {
                exit = 1;
            }
            let s = selftest_text(&summary);
            (serde_json::json!({ "passed": summary.passed(), "summary": summary }), s)
        }
    };
    let timing_ms = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(Report { tool: "psd-sparsity", version: VERSION, command, input_digest: inputs.digest(), result, timing_ms, text, exit })
}

fn selftest_text(summary: &SelftestSummary) -> String {
    let mut s = String::new();
    for suite in &summary.suites {
        writeln!(s, "suite {}: checked {}, failures {}", suite.name, suite.checked, suite.failures).unwrap();
        for e in &suite.examples {
            writeln!(s, "  {e}").unwrap();
        }
    }
    writeln!(s, "selftest: {}", if summary.passed() { "PASS" } else { "FAIL" }).unwrap();
    s
}

/// Parses `args` (without the program name) and runs the command. Returns
/// the process exit code: 0 on success, 1 when the self-test finds failures,
/// 2 on any input, cap or tolerance error.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let command: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("psd-sparsity")).chain(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, command) {
        Ok(report) => {
            let body = if cli.json {
                let mut j = serde_json::to_string_pretty(&report).expect("report serializes");
                j.push('\n');
                j
            } else {
                report.to_text()
            };
            if out.write_all(body.as_bytes()).is_err() {
                return 2;
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn format_detection() {
        assert_eq!(detect_format("n 3\n1 2\n"), GraphFormat::Edges);
        assert_eq!(detect_format("# c\nn 3\n"), GraphFormat::Edges);
        assert_eq!(detect_format("Dhc\n"), GraphFormat::Graph6);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("analyze"));
    }

    #[test]
    fn unknown_subcommand_exits_two() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
    }

    #[test]
    fn key_value_parsing() {
        let kv = key_values("n=8, p=0.5").unwrap();
        assert_eq!(value::<usize>(&kv, "n").unwrap(), 8);
        assert!(value::<usize>(&kv, "q").is_err());
        assert!(key_values("n8").is_err());
    }
}
