use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use necsolve_core::graph::{Graph, VertexSet};
use necsolve_core::layout::{cut_widths, generate_layout, LayoutBuilder, LayoutStrategy, RootedLayout};
use necsolve_core::nec::{nec, Depth, DEFAULT_CAP};
use necsolve_core::problem::{catalog, CofiniteSet, Constraint, Direction, ProblemSpec};
use necsolve_core::solve::{solve, Outcome, Pruning, SolveOptions, SolveReport};
use necsolve_core::testkit::{gen_hk, gen_named, oracle_solve, randomize_weights, NamedGraph, ORACLE_CAP};
use necsolve_core::Error;

#[derive(Parser)]
#[command(name = "necsolve", version, about = "Exact layout-based solvers for constrained domination and cut problems")]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Append a human-readable summary.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Per-cut class counts and width bounds.
    NecStats(NecStatsArgs),
    /// Build a layout and report its widths.
    Layout(LayoutArgs),
    /// Emit a generated graph.
    Gen(GenArgs),
    /// Compare the solver with exhaustive search on random graphs.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct LayoutSource {
    /// Layout file.
    #[arg(long, conflicts_with = "layout_gen")]
    layout: Option<PathBuf>,
    /// linear | random | greedy:D
    #[arg(long, default_value = "linear")]
    layout_gen: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Catalog name, e.g. connected-dominating-set.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    direction: Option<String>,
    #[arg(long)]
    constraint: Option<String>,
    /// Comma-separated 1-indexed vertices.
    #[arg(long)]
    terminals: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    layout: LayoutSource,
    /// always | mim:BUDGET | rw | rwq
    #[arg(long, default_value = "always")]
    pruning: String,
    /// Reduce table entries while joining.
    #[arg(long)]
    streaming: bool,
    /// Print per-node table sizes as tab-separated rows.
    #[arg(long)]
    trace: bool,
    /// Search budget for induced-matching width; 0 skips it.
    #[arg(long, default_value_t = 100_000)]
    mim_budget: usize,
}

#[derive(Args)]
struct NecStatsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    layout: LayoutSource,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, default_value_t = 100_000)]
    mim_budget: usize,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    layout: LayoutSource,
    /// Write the layout here instead of embedding it in the record.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    mim_budget: usize,
}

#[derive(Args)]
struct GenArgs {
    /// path:N | cycle:N | grid:RxC | complete:N | random:N:P | hk:K:T
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random weights LO:HI.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// For hk: also write a layout with the cloned side as a subtree.
    #[arg(long)]
    layout_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability; by default cycles through 0.2, 0.35, 0.5.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value = "random")]
    layout_gen: String,
    #[arg(long, default_value = "always")]
    pruning: String,
}

enum Fail {
    Input(String),
    Cap(String),
    Other(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        if e.is_resource_cap() {
            Fail::Cap(e.to_string())
        } else if matches!(e, Error::Certificate(_)) {
            Fail::Other(e.to_string())
        } else {
            Fail::Input(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Fail>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Graph::parse(&read_file(path)?).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load_layout(g: &Graph, src: &LayoutSource) -> CliResult<RootedLayout> {
    let layout = match &src.layout {
        Some(path) => RootedLayout::parse(&read_file(path)?, g.n())
            .map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?,
        None => generate_layout(g, &LayoutStrategy::parse(&src.layout_gen, g.n(), src.seed)?)?,
    };
    layout.validate(g)?;
    Ok(layout)
}

fn parse_terminals(s: &str, n: usize) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let v: usize = t
                .trim()
                .parse()
                .map_err(|_| Fail::Input(format!("bad terminal '{t}'")))?;
            if v == 0 || v > n {
                return Err(Fail::Input(format!("terminal {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        })
        .collect()
}

fn build_spec(a: &ProblemArgs, n: usize) -> CliResult<ProblemSpec> {
    let mut spec = match &a.problem {
        Some(name) => {
            if a.sigma.is_some() || a.rho.is_some() {
                return Err(Fail::Input("--problem excludes --sigma/--rho".into()));
            }
            let mut s = catalog(name)?;
            if let Some(d) = &a.direction {
                s.direction = Direction::parse(d)?;
                s.name = None;
            }
            if let Some(c) = &a.constraint {
                s.constraint = Constraint::parse(c)?;
                s.name = None;
            }
            s
        }
        None => {
            let (Some(sigma), Some(rho)) = (&a.sigma, &a.rho) else {
                return Err(Fail::Input("give --problem or both --sigma and --rho".into()));
            };
            ProblemSpec::sigma_rho(
                CofiniteSet::parse(sigma)?,
                CofiniteSet::parse(rho)?,
                Direction::parse(a.direction.as_deref().unwrap_or("min"))?,
                Constraint::parse(a.constraint.as_deref().unwrap_or("connected"))?,
            )
        }
    };
    if let Some(t) = &a.terminals {
        spec.terminals = Some(parse_terminals(t, n)?);
    }
    Ok(spec)
}

fn one_indexed(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn widths_json(layout: &RootedLayout, g: &Graph, mim_budget: usize) -> Value {
    let w = cut_widths(layout, g, mim_budget > 0, mim_budget);
    json!({ "mw": w.mw, "rw": w.rw, "rwq": w.rwq, "mim": w.mim })
}

fn report_json(spec: &ProblemSpec, g: &Graph, widths: Value, rep: &SolveReport) -> Value {
    let max = |f: fn(&necsolve_core::solve::NodeStat) -> usize| rep.stats.iter().map(f).max().unwrap_or(0);
    let (status, value, witness) = match &rep.outcome {
        Outcome::Optimal(s) => ("optimal", json!(s.value), json!(one_indexed(&s.witness))),
        Outcome::Infeasible => ("infeasible", Value::Null, Value::Null),
    };
    json!({
        "problem": spec.display_name(),
        "n": g.n(),
        "m": g.edge_count(),
        "widths": widths,
        "status": status,
        "value": value,
        "witness": witness,
        "tables": {
            "max_classes": max(|s| s.classes),
            "max_entries": max(|s| s.entries),
            "max_members": max(|s| s.members),
            "max_family": max(|s| s.max_family),
            "max_parts": max(|s| s.max_parts),
        },
    })
}

fn emit(v: &Value) {
    println!("{v}");
}

fn cmd_solve(a: &SolveArgs, pretty: bool) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let layout = load_layout(&g, &a.layout)?;
    let spec = build_spec(&a.problem, g.n())?;
    let opts = SolveOptions {
        cap: None,
        pruning: Pruning::parse(&a.pruning)?,
        streaming: a.streaming,
    };
    let start = Instant::now();
    let rep = solve(&g, &layout, &spec, &opts)?;
    let elapsed = start.elapsed();
    emit(&report_json(&spec, &g, widths_json(&layout, &g, a.mim_budget), &rep));
    if a.trace {
        println!("node\tside\tclasses\tco_classes\tentries\tmembers\tmax_family\tmax_parts");
        for s in &rep.stats {
            println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s.node, s.side_size, s.classes, s.co_classes, s.entries, s.members, s.max_family, s.max_parts
            );
        }
    }
    if pretty {
        match &rep.outcome {
            Outcome::Optimal(s) => eprintln!(
                "{}: optimum {} with {} vertices ({:.3}s)",
                spec.display_name(),
                s.value,
                s.witness.len(),
                elapsed.as_secs_f64()
            ),
            Outcome::Infeasible => eprintln!("{}: infeasible ({:.3}s)", spec.display_name(), elapsed.as_secs_f64()),
        }
    }
    Ok(())
}

fn cmd_nec_stats(a: &NecStatsArgs, pretty: bool) -> CliResult<()> {
    if a.d == 0 {
        return Err(Fail::Input("--d must be at least 1".into()));
    }
    let g = load_graph(&a.graph)?;
    let layout = load_layout(&g, &a.layout)?;
    let widths = cut_widths(&layout, &g, a.mim_budget > 0, a.mim_budget);
    let all = g.vertex_set();
    let d = a.d;
    let mut rows = Vec::new();
    for x in 0..layout.node_count() {
        let side = layout.set(x);
        let co = side.complement_in(&all);
        let w = &widths.per_node[x];
        let cap = DEFAULT_CAP;
        let nd = nec(&g, side, Depth::Capped(d), cap)?;
        let nd_co = nec(&g, &co, Depth::Capped(d), cap)?;
        let nn = nec(&g, side, Depth::Exact, cap)?;
        let pow = |b: f64, e: f64| b.powf(e);
        let row = json!({
            "node": x,
            "side": side.len(),
            "nec_d": nd,
            "nec_d_co": nd_co,
            "nec_n": nn,
            "mw": w.mw,
            "rw": w.rw,
            "rwq": w.rwq,
            "mim": w.mim,
            "bound_mw": pow(d as f64 + 1.0, w.mw as f64),
            "bound_rwq": pow(d as f64 * w.rwq as f64 + 1.0, w.rwq as f64),
            "bound_rw": pow(2.0, (d as usize * w.rw * w.rw) as f64),
            "bound_nec_n": pow(g.n() as f64, w.rwq as f64),
        });
        emit(&row);
        rows.push(row);
    }
    if pretty {
        println!("node\tside\tnec_d\tnec_d_co\tnec_n\tmw\trw\trwq\tmim");
        for r in &rows {
            println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r["node"], r["side"], r["nec_d"], r["nec_d_co"], r["nec_n"], r["mw"], r["rw"], r["rwq"], r["mim"]
            );
        }
    }
    Ok(())
}

fn cmd_layout(a: &LayoutArgs, pretty: bool) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let layout = load_layout(&g, &a.layout)?;
    let text = layout.to_text();
    let mut rec = json!({ "n": g.n(), "nodes": layout.node_count(), "widths": widths_json(&layout, &g, a.mim_budget) });
    match &a.out {
        Some(path) => {
            write_file(path, &(text + "\n"))?;
            rec["file"] = json!(path.display().to_string());
        }
        None => rec["layout"] = json!(text),
    }
    emit(&rec);
    if pretty {
        println!("widths: {}", rec["widths"]);
    }
    Ok(())
}

/// Balanced subtree over `verts`.
fn balanced(b: &mut LayoutBuilder, verts: &[usize]) -> usize {
    if verts.len() == 1 {
        return b.leaf(verts[0]);
    }
    let (l, r) = verts.split_at(verts.len() / 2);
    let (l, r) = (balanced(b, l), balanced(b, r));
    b.join(l, r)
}

fn cmd_gen(a: &GenArgs) -> CliResult<()> {
    let mut layout = None;
    let g = if let Some(rest) = a.kind.strip_prefix("hk:") {
        let (k, t) = rest
            .split_once(':')
            .and_then(|(k, t)| Some((k.parse::<u32>().ok()?, t.parse::<usize>().ok()?)))
            .ok_or_else(|| Fail::Input(format!("bad hk spec '{}' (hk:K:T)", a.kind)))?;
        let h = gen_hk(k, t)?;
        let mut b = LayoutBuilder::new();
        let l = balanced(&mut b, &h.a_star.to_vec());
        let r = balanced(&mut b, &h.b_side.to_vec());
        let root = b.join(l, r);
        layout = Some(b.finish(h.graph.n(), root)?);
        h.graph
    } else {
        gen_named(&NamedGraph::parse(&a.kind, a.seed)?)?
    };
    let g = match &a.weights {
        Some(w) => {
            let (lo, hi) = w
                .split_once(':')
                .and_then(|(l, h)| Some((l.parse::<i64>().ok()?, h.parse::<i64>().ok()?)))
                .filter(|(l, h)| l <= h)
                .ok_or_else(|| Fail::Input(format!("bad weight range '{w}' (LO:HI)")))?;
            randomize_weights(g, lo, hi, a.seed)
        }
        None => g,
    };
    if let Some(path) = &a.layout_out {
        let l = layout.ok_or_else(|| Fail::Input("--layout-out is only available for hk graphs".into()))?;
        write_file(path, &(l.to_text() + "\n"))?;
    }
    match &a.out {
        Some(path) => write_file(path, &g.to_text()),
        None => {
            print!("{}", g.to_text());
            Ok(())
        }
    }
}

fn cmd_verify(a: &VerifyArgs, pretty: bool) -> CliResult<bool> {
    if a.n == 0 || a.n > ORACLE_CAP {
        return Err(Fail::Input(format!("--n must be in 1..={ORACLE_CAP}")));
    }
    let pruning = Pruning::parse(&a.pruning)?;
    let mut matched = 0;
    for i in 0..a.count {
        let seed = a.seed.wrapping_add(i as u64);
        let p = a.p.unwrap_or([0.2, 0.35, 0.5][i % 3]);
        let g = gen_named(&NamedGraph::Random { n: a.n, p, seed })?;
        let g = randomize_weights(g, 1, 10, seed);
        let spec = build_spec(&a.problem, g.n())?;
        let layout = generate_layout(&g, &LayoutStrategy::parse(&a.layout_gen, g.n(), seed)?)?;
        let opts = SolveOptions { pruning, ..SolveOptions::default() };
        let got = solve(&g, &layout, &spec, &opts)?.outcome.value();
        let want = oracle_solve(&g, &spec, ORACLE_CAP)?.best;
        let ok = got == want;
        matched += ok as usize;
        emit(&json!({ "instance": i, "seed": seed, "p": p, "solver": got, "oracle": want, "match": ok }));
    }
    let summary = format!("{matched}/{} match oracle", a.count);
    emit(&json!({ "matched": matched, "total": a.count, "summary": summary }));
    if pretty {
        println!("{summary}");
    }
    Ok(matched == a.count)
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.cmd {
        Cmd::Solve(a) => cmd_solve(a, cli.pretty).map(|_| true),
        Cmd::NecStats(a) => cmd_nec_stats(a, cli.pretty).map(|_| true),
        Cmd::Layout(a) => cmd_layout(a, cli.pretty).map(|_| true),
        Cmd::Gen(a) => cmd_gen(a).map(|_| true),
        Cmd::Verify(a) => cmd_verify(a, cli.pretty),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Cap(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Fail::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
