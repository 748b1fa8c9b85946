use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghforge_core::generate::{generate, Family, FamilyKind};
use ghforge_core::io::{emit_graph, emit_tree, parse_graph, parse_tree};
use ghforge_core::maxflow::flow_calls;
use ghforge_core::pipeline::{
    default_c, gh_tree_classic, gh_tree_fast, verify_gh_tree, FastConfig, FastStats,
};
use ghforge_core::{GhTree, SimpleGraph};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "ghforge",
    version,
    about = "Exact Gomory-Hu trees for simple graphs"
)]
struct Cli {
    /// Worker threads for library-level parallelism (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Gomory-Hu tree for a graph file.
    Build(BuildArgs),
    /// Check a tree against all-pairs max-flow values of a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Print the mincut value between two vertices (1-based ids).
    Query {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
    /// Run both algorithms over a generated family and emit CSV.
    Bench(BenchArgs),
    /// Write a generated graph.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Fast,
    Classic,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Fast => "fast",
            Algo::Classic => "classic",
        }
    }
}

#[derive(Args)]
struct Tuning {
    /// Connectivity threshold of the bootstrap tree (default: ceil(sqrt n)).
    #[arg(long)]
    c: Option<usize>,
    #[arg(long, env = "GHFORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Constant in the `ceil(c ln n / phi)` sampling round count.
    #[arg(long, default_value_t = 4.0)]
    rounds_constant: f64,
    /// Skip the max-flow confirmation of recorded cuts.
    #[arg(long)]
    no_confirm: bool,
}

impl Tuning {
    fn config(&self) -> FastConfig {
        FastConfig {
            seed: self.seed,
            rounds_constant: self.rounds_constant,
            confirm: !self.no_confirm,
            ..FastConfig::default()
        }
    }

    fn c_for(&self, n: usize) -> usize {
        self.c.unwrap_or_else(|| default_c(n))
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Fast)]
    algo: Algo,
    #[command(flatten)]
    tuning: Tuning,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    family: FamilyKind,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "fast,classic"
    )]
    algos: Vec<Algo>,
    #[command(flatten)]
    tuning: Tuning,
    /// Do not run the all-pairs verifier (the `verified` column reads `skipped`).
    #[arg(long)]
    no_verify: bool,
    /// Per-cluster refinement report (CSV) for fast runs.
    #[arg(long)]
    clusters: Option<PathBuf>,
    /// Recursion depth distribution (CSV) for fast runs.
    #[arg(long)]
    depths: Option<PathBuf>,
    /// Main CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    family: FamilyKind,
    /// Vertex count (gnp, regular-ish) or approximate size for defaults.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Clique size (barbell) or block size (planted-clusters).
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long = "blocks")]
    blocks: Option<usize>,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    p_out: Option<f64>,
    #[arg(long, env = "GHFORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

fn input<T>(r: anyhow::Result<T>) -> Result<T, InputError> {
    r.map_err(InputError)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<SimpleGraph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

fn load_tree(path: &Path) -> anyhow::Result<GhTree> {
    parse_tree(&read(path)?).with_context(|| format!("parsing tree {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header(cmd: &str, fields: &[(&str, String)]) {
    let mut line = format!("# ghforge {cmd}");
    for (k, v) in fields {
        write!(line, " {k}={v}").unwrap();
    }
    eprintln!("{line}");
}

fn tuning_fields(t: &Tuning, c: usize, jobs: usize) -> Vec<(&'static str, String)> {
    let cfg = t.config();
    vec![
        ("c", c.to_string()),
        ("seed", cfg.seed.to_string()),
        ("rounds_constant", cfg.rounds_constant.to_string()),
        ("retry_cap", cfg.retry_cap.to_string()),
        ("confirm", cfg.confirm.to_string()),
        ("cert_cap", cfg.partition.cert_cap.to_string()),
        (
            "backend",
            cfg.partition.backend.decomposer().name().to_string(),
        ),
        ("jobs", jobs.to_string()),
    ]
}

fn run_algo(
    g: &SimpleGraph,
    algo: Algo,
    t: &Tuning,
) -> anyhow::Result<(GhTree, Option<FastStats>)> {
    Ok(match algo {
        Algo::Fast => {
            let run = gh_tree_fast(g, t.c_for(g.n()), &t.config())?;
            (run.tree, Some(run.stats))
        }
        Algo::Classic => (gh_tree_classic(g)?, None),
    })
}

fn build(a: &BuildArgs, jobs: usize) -> Result<ExitCode, InputError> {
    let g = input(load_graph(&a.input))?;
    let mut fields = vec![
        ("input", a.input.display().to_string()),
        ("n", g.n().to_string()),
        ("m", g.m().to_string()),
        ("algo", a.algo.name().to_string()),
    ];
    fields.extend(tuning_fields(&a.tuning, a.tuning.c_for(g.n()), jobs));
    header("build", &fields);
    let before = flow_calls();
    let (tree, _) = input(run_algo(&g, a.algo, &a.tuning))?;
    eprintln!("# maxflow_calls={}", flow_calls() - before);
    input(write_out(a.out.as_deref(), &emit_tree(&tree)))?;
    Ok(ExitCode::SUCCESS)
}

fn verify(graph: &Path, tree: &Path) -> Result<ExitCode, InputError> {
    let g = input(load_graph(graph))?;
    let t = input(load_tree(tree))?;
    header(
        "verify",
        &[
            ("graph", graph.display().to_string()),
            ("tree", tree.display().to_string()),
        ],
    );
    let report = input(verify_gh_tree(&g, &t).map_err(Into::into))?;
    for m in report.mismatches.iter().take(20) {
        println!(
            "mismatch {} {} expected {} tree {}",
            m.u + 1,
            m.v + 1,
            m.expected,
            m.got
        );
    }
    println!(
        "pairs {} mismatches {}",
        report.pairs,
        report.mismatches.len()
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn query(tree: &Path, u: usize, v: usize) -> Result<ExitCode, InputError> {
    let t = input(load_tree(tree))?;
    if u == 0 || v == 0 {
        return Err(InputError(anyhow::anyhow!("vertex ids are 1-based")));
    }
    let value = input(t.query_mincut(u - 1, v - 1).map_err(Into::into))?;
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

struct BenchRow {
    csv: String,
    clusters: String,
    depths: Vec<usize>,
    verified: Option<bool>,
}

fn bench_one(a: &BenchArgs, n: usize, seed: u64, algo: Algo) -> anyhow::Result<BenchRow> {
    let g = generate(&a.family.sized(n), seed)?;
    let tuning = Tuning {
        c: a.tuning.c,
        seed: a.tuning.seed ^ seed,
        rounds_constant: a.tuning.rounds_constant,
        no_confirm: a.tuning.no_confirm,
    };
    let before = flow_calls();
    let start = Instant::now();
    let (tree, stats) = run_algo(&g, algo, &tuning)?;
    let wall = start.elapsed().as_secs_f64() * 1e3;
    let calls = flow_calls() - before;
    let verified = if a.no_verify {
        None
    } else {
        Some(verify_gh_tree(&g, &tree)?.passed())
    };
    let mut row = BenchRow {
        csv: format!(
            "{},{},{},{},{:.3},{}\n",
            g.n(),
            g.m(),
            algo.name(),
            calls,
            wall,
            verified.map_or("skipped".to_string(), |v| v.to_string())
        ),
        clusters: String::new(),
        depths: Vec::new(),
        verified,
    };
    if let Some(s) = stats {
        for c in &s.clusters {
            writeln!(
                row.clusters,
                "{},{},{},{},{},{:.6},{},{},{},{},{},{},{}",
                g.n(),
                seed,
                c.level_d,
                c.size,
                c.budget.sum_n,
                c.phi,
                c.rounds,
                c.max_terminals,
                c.ssc_invocations,
                c.max_ssc_flows,
                c.ssc_flow_bound(),
                c.within_bound(),
                c.refine_flows
            )
            .unwrap();
        }
        row.depths = s.depths;
    }
    Ok(row)
}

fn bench(a: &BenchArgs, jobs: usize) -> Result<ExitCode, InputError> {
    let mut fields = vec![
        ("family", a.family.to_string()),
        ("sizes", format!("{:?}", a.sizes)),
        ("seeds", format!("{:?}", a.seeds)),
        (
            "algos",
            a.algos
                .iter()
                .map(|x| x.name())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("verify", (!a.no_verify).to_string()),
    ];
    let c = a.tuning.c.map_or("sqrt".to_string(), |c| c.to_string());
    let mut tf = tuning_fields(&a.tuning, 0, jobs);
    tf[0].1 = c;
    fields.extend(tf);
    header("bench", &fields);

    let jobs_list: Vec<(usize, u64, Algo)> = a
        .sizes
        .iter()
        .flat_map(|&n| {
            a.seeds
                .iter()
                .flat_map(move |&s| a.algos.iter().map(move |&al| (n, s, al)))
        })
        .collect();
    let rows: Vec<anyhow::Result<BenchRow>> = jobs_list
        .par_iter()
        .map(|&(n, s, al)| bench_one(a, n, s, al))
        .collect();
    let rows = input(rows.into_iter().collect::<anyhow::Result<Vec<_>>>())?;

    let mut csv = String::from("n,m,algo,maxflow_calls,wall_ms,verified\n");
    let mut clusters = String::from(
        "n,seed,level_d,cluster_size,aux_vertices,phi,rounds,max_terminals,ssc_invocations,max_ssc_flows,flow_bound,within_bound,refine_flows\n",
    );
    let mut hist = std::collections::BTreeMap::<usize, usize>::new();
    for r in &rows {
        csv.push_str(&r.csv);
        clusters.push_str(&r.clusters);
        for &d in &r.depths {
            *hist.entry(d).or_default() += 1;
        }
    }
    input(write_out(a.out.as_deref(), &csv))?;
    if let Some(p) = &a.clusters {
        input(write_out(Some(p), &clusters))?;
    }
    let mut depth_csv = String::from("depth,count\n");
    for (d, k) in &hist {
        writeln!(depth_csv, "{d},{k}").unwrap();
    }
    if let Some(p) = &a.depths {
        input(write_out(Some(p), &depth_csv))?;
    }
    let summary: Vec<String> = hist.iter().map(|(d, k)| format!("{d}:{k}")).collect();
    eprintln!("# recursion depth distribution {}", summary.join(" "));
    Ok(if rows.iter().any(|r| r.verified == Some(false)) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn family_from(a: &GenerateArgs) -> anyhow::Result<Family> {
    let base = a.family.sized(a.n.unwrap_or(16));
    let need = |x: Option<usize>, what: &str| -> anyhow::Result<usize> {
        x.with_context(|| format!("--{what} is required for {}", a.family))
    };
    Ok(match base {
        Family::Gnp { p, .. } => Family::Gnp {
            n: need(a.n, "n")?,
            p: a.p.unwrap_or(p),
        },
        Family::Barbell { .. } => Family::Barbell {
            size: need(a.size, "size")?,
        },
        Family::Grid { .. } => Family::Grid {
            rows: need(a.rows, "rows")?,
            cols: need(a.cols, "cols")?,
        },
        Family::RegularIsh { degree, .. } => Family::RegularIsh {
            n: need(a.n, "n")?,
            degree: a.degree.unwrap_or(degree),
        },
        Family::PlantedClusters {
            clusters,
            size,
            p_in,
            p_out,
        } => Family::PlantedClusters {
            clusters: a.blocks.unwrap_or(clusters),
            size: a.size.unwrap_or(size),
            p_in: a.p_in.unwrap_or(p_in),
            p_out: a.p_out.unwrap_or(p_out),
        },
    })
}

fn generate_cmd(a: &GenerateArgs) -> Result<ExitCode, InputError> {
    let family = input(family_from(a))?;
    header(
        "generate",
        &[
            ("family", format!("{family:?}")),
            ("seed", a.seed.to_string()),
        ],
    );
    let g = input(generate(&family, a.seed).map_err(Into::into))?;
    input(write_out(a.out.as_deref(), &emit_graph(&g)))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode, InputError> {
    match &cli.cmd {
        Command::Build(a) => build(a, cli.jobs),
        Command::Verify { graph, tree } => verify(graph, tree),
        Command::Query { tree, u, v } => query(tree, *u, *v),
        Command::Bench(a) => bench(a, cli.jobs),
        Command::Generate(a) => generate_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global();
    if let Err(e) = pool {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
