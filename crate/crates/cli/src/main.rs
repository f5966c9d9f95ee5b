//! `hamflow`: hamiltonian-cycle lattices of abelian Cayley graphs.
//!
//! Every subcommand builds one JSON value. `--json` prints it as is; the
//! default prints the same value as aligned text, so both modes carry the
//! same data. Exit status: 0 success, 1 mismatch or failed construction,
//! 2 invalid input (one `hamflow: error: invalid-input: ...` line on stderr).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use hamflow_core::cayley::{classify, predicted_quotients};
use hamflow_core::constructions::{self, catalog, ConstructionError};
use hamflow_core::dsl::{classify_walk, expand_text, walk_vertices, Bindings};
use hamflow_core::flows::{flow_from_json, membership_by_weighting};
use hamflow_core::ham::{enumerate_hamiltonian_cycles, EnumConfig, SpanConfig};
use hamflow_core::torus::{build_embedding, congruence_sweep};
use hamflow_core::verify::{compute_quotients, cross_validate_membership, run_suite, SuiteConfig, DEFAULT_SEED};
use hamflow_core::{CayleyGraph, Walk};

#[derive(Debug, Parser)]
#[command(name = "hamflow", version, about = "Hamiltonian cycles of abelian Cayley graphs as integer flows")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads for `verify`.
    #[arg(long, global = true, env = "HAMFLOW_JOBS")]
    jobs: Option<usize>,

    /// Report zero milliseconds per graph so reports are byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Group, e.g. `Z10` or `Z4xZ3`.
    #[arg(long)]
    group: String,

    /// Connection set, e.g. `2,8,3,7` or `(1,0),(3,0),(0,1),(0,2)`.
    #[arg(long)]
    conn: String,
}

impl GraphArgs {
    fn graph(&self) -> Result<CayleyGraph, CliError> {
        CayleyGraph::parse(&self.group, &self.conn).map_err(invalid)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the graph and state the predicted quotients.
    Classify(GraphArgs),

    /// Compute F/H and E/H and compare them with the prediction.
    Quotient(GraphArgs),

    /// List hamiltonian cycles.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,

        /// Stop after this many cycles.
        #[arg(long)]
        limit: Option<usize>,

        /// Print only the count.
        #[arg(long)]
        count_only: bool,
    },

    /// Check the predicted quotients over every small Cayley graph.
    Verify {
        /// Largest group order; also drops the degree-limited tier above it.
        #[arg(long)]
        max_order: Option<u64>,

        /// Largest degree.
        #[arg(long)]
        max_degree: Option<usize>,

        /// Give up on a graph after enumerating this many cycles.
        #[arg(long)]
        cycle_cap: Option<usize>,

        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Expand a path expression and classify the walk.
    Dsl {
        #[arg(long)]
        expr: String,

        #[command(flatten)]
        graph: GraphArgs,

        /// Bindings such as `m=3,r=0,t=2`.
        #[arg(long, default_value = "")]
        bind: String,
    },

    /// Build and verify a catalog cycle.
    Construct {
        /// Catalog entry; omit with `--list`.
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,

        #[arg(long, requires = "conn")]
        group: Option<String>,

        #[arg(long, requires = "group")]
        conn: Option<String>,

        #[arg(long, default_value = "")]
        bind: String,

        /// List the catalog.
        #[arg(long, conflicts_with_all = ["name", "group", "conn"])]
        list: bool,
    },

    /// Check the torus congruences on every short cycle and every hamiltonian cycle.
    Torus {
        #[command(flatten)]
        graph: GraphArgs,

        #[arg(long)]
        t: String,

        #[arg(long)]
        u: String,

        /// Longest non-hamiltonian cycle to check.
        #[arg(long, default_value_t = 12)]
        max_len: usize,

        /// Print every cycle, not just violations and the summary.
        #[arg(long)]
        all: bool,
    },

    /// Compare the weighting test of H with lattice membership.
    Membership {
        #[command(flatten)]
        graph: GraphArgs,

        /// Random flows to test.
        #[arg(long, default_value_t = 1000)]
        trials: usize,

        /// Draw only even flows.
        #[arg(long)]
        even_only: bool,

        /// Decide a single flow given as JSON `[{tail, gen, coeff}, ...]`.
        #[arg(long, conflicts_with_all = ["trials", "even_only"])]
        flow: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Io(String),
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Output value and whether the command's check passed.
type Outcome = Result<(Value, bool), CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("hamflow: error: invalid-input: {first}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok((value, ok)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                print!("{}", render_text(&value));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("hamflow: error: invalid-input: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("hamflow: error: io: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify(g) => cmd_classify(g),
        Command::Quotient(g) => cmd_quotient(g, cli.seed),
        Command::Enumerate { graph, limit, count_only } => cmd_enumerate(graph, *limit, *count_only),
        Command::Verify { max_order, max_degree, cycle_cap, out } => {
            let mut cfg = SuiteConfig { seed: cli.seed, timing: !cli.no_timing, ..SuiteConfig::default() };
            if let Some(m) = max_order {
                cfg.max_order = *m;
                cfg.extended = None;
            }
            cfg.max_degree = *max_degree;
            cfg.cycle_cap = *cycle_cap;
            if let Some(j) = cli.jobs {
                cfg.jobs = j.max(1);
            }
            cmd_verify(cfg, out.as_ref())
        }
        Command::Dsl { expr, graph, bind } => cmd_dsl(expr, graph, bind),
        Command::Construct { list: true, .. } => Ok((catalog_listing(), true)),
        Command::Construct { name, group, conn, bind, .. } => {
            let (Some(group), Some(conn)) = (group, conn) else {
                return Err(invalid("construct needs --group and --conn"));
            };
            let graph = GraphArgs { group: group.clone(), conn: conn.clone() };
            cmd_construct(name.as_deref().unwrap_or_default(), &graph, bind)
        }
        Command::Torus { graph, t, u, max_len, all } => cmd_torus(graph, t, u, *max_len, *all),
        Command::Membership { graph, trials, even_only, flow } => {
            cmd_membership(graph, *trials, *even_only, flow.as_ref(), cli.seed)
        }
    }
}

fn graph_header(x: &CayleyGraph) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("group".into(), json!(x.group().to_string()));
    m.insert("conn".into(), json!(x.conn().render(x.group())));
    m.insert("order".into(), json!(x.order()));
    m.insert("degree".into(), json!(x.degree()));
    m
}

fn cmd_classify(g: &GraphArgs) -> Outcome {
    let x = g.graph()?;
    let label = classify(&x);
    let (fh, eh) = predicted_quotients(&label).map_err(invalid)?;
    let mut m = graph_header(&x);
    m.insert("label".into(), json!(label.to_string()));
    m.insert("bipartite".into(), json!(label.bipartite));
    m.insert("exceptional".into(), json!(label.is_exceptional()));
    m.insert("predicted F/H".into(), json!(fh.to_string()));
    m.insert("predicted E/H".into(), json!(eh.to_string()));
    Ok((Value::Object(m), true))
}

fn cmd_quotient(g: &GraphArgs, seed: u64) -> Outcome {
    let x = g.graph()?;
    let label = classify(&x);
    let (efh, eeh) = predicted_quotients(&label).map_err(invalid)?;
    let q = compute_quotients(&x, &SpanConfig { seed, ..SpanConfig::default() }).map_err(invalid)?;
    let matched = q.pair.fh == efh && q.pair.eh == eeh;
    let mut m = graph_header(&x);
    m.insert("label".into(), json!(label.to_string()));
    m.insert("F/H".into(), json!(q.pair.fh.to_string()));
    m.insert("E/H".into(), json!(q.pair.eh.to_string()));
    m.insert("expected F/H".into(), json!(efh.to_string()));
    m.insert("expected E/H".into(), json!(eeh.to_string()));
    m.insert("computed".into(), serde_json::to_value(&q.pair).expect("json"));
    m.insert("ham_count".into(), json!(q.ham.ham_count));
    m.insert("exhaustive".into(), json!(q.ham.exhaustive));
    m.insert("verdict".into(), json!(if matched { "MATCH" } else { "MISMATCH" }));
    Ok((Value::Object(m), matched))
}

fn cmd_enumerate(g: &GraphArgs, limit: Option<usize>, count_only: bool) -> Outcome {
    let x = g.graph()?;
    let cfg = EnumConfig { cycle_limit: limit, ..EnumConfig::default() };
    let en = enumerate_hamiltonian_cycles(&x, &cfg).map_err(invalid)?;
    let mut m = graph_header(&x);
    m.insert("count".into(), json!(en.cycles.len()));
    m.insert("truncated".into(), json!(en.truncated));
    if !count_only {
        let walks: Vec<Value> = en.walks(&x).iter().map(|w| json!(w.render(x.group()))).collect();
        m.insert("cycles".into(), Value::Array(walks));
    }
    Ok((Value::Object(m), true))
}

fn cmd_verify(cfg: SuiteConfig, out: Option<&PathBuf>) -> Outcome {
    let report = run_suite(&cfg).map_err(invalid)?;
    let text = report.to_json();
    if let Some(path) = out {
        fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let ok = report.summary.mismatched == 0 && report.summary.truncated == 0;
    Ok((serde_json::from_str(&text).expect("report json"), ok))
}

fn walk_summary(x: &CayleyGraph, w: &Walk) -> Result<Map<String, Value>, CliError> {
    let verts = walk_vertices(x, w).map_err(invalid)?;
    let kind = classify_walk(x, w).map_err(invalid)?;
    let mut m = Map::new();
    m.insert("walk".into(), json!(w.render(x.group())));
    m.insert("length".into(), json!(w.len()));
    let names: Vec<String> = verts.iter().map(|&v| x.group().render_element(&x.vertex(v))).collect();
    m.insert("vertices".into(), json!(names.join(" ")));
    m.insert("kind".into(), json!(kind.to_string()));
    Ok(m)
}

fn cmd_dsl(expr: &str, g: &GraphArgs, bind: &str) -> Outcome {
    let x = g.graph()?;
    let b = Bindings::parse(x.group(), bind).map_err(invalid)?;
    let w = expand_text(expr, &b, x.group()).map_err(invalid)?;
    let mut m = graph_header(&x);
    m.insert("expr".into(), json!(expr));
    m.extend(walk_summary(&x, &w)?);
    Ok((Value::Object(m), true))
}

fn catalog_listing() -> Value {
    let rows: Vec<Value> = catalog()
        .iter()
        .map(|c| {
            let hyps: Vec<String> = c.hypotheses.iter().map(|h| h.to_string()).collect();
            let example = c
                .examples
                .first()
                .map(|e| format!("--group {} --conn '{}' --bind '{}'", e.group, e.conn, e.bind))
                .unwrap_or_default();
            json!({ "name": c.name, "params": c.params, "hypotheses": hyps.join("; "), "example": example })
        })
        .collect();
    json!({ "catalog": rows })
}

fn cmd_construct(name: &str, g: &GraphArgs, bind: &str) -> Outcome {
    let x = g.graph()?;
    let entry = constructions::lookup(name).map_err(invalid)?;
    let b = Bindings::parse(x.group(), bind).map_err(invalid)?;
    let mut m = graph_header(&x);
    m.insert("name".into(), json!(name));
    match constructions::realize(entry, &x, &b) {
        Ok((w, full)) => {
            m.insert("bindings".into(), json!(full.render(x.group())));
            m.extend(walk_summary(&x, &w)?);
            m.insert("verdict".into(), json!("HAMILTONIAN"));
            Ok((Value::Object(m), true))
        }
        Err(e @ ConstructionError::NotHamiltonianBug { .. }) => {
            m.insert("verdict".into(), json!("FAILED"));
            m.insert("reason".into(), json!(e.to_string()));
            Ok((Value::Object(m), false))
        }
        Err(e) => Err(invalid(e)),
    }
}

fn cmd_torus(g: &GraphArgs, t: &str, u: &str, max_len: usize, all: bool) -> Outcome {
    let x = g.graph()?;
    let t = x.group().parse_element(t).map_err(invalid)?;
    let u = x.group().parse_element(u).map_err(invalid)?;
    let emb = build_embedding(&x, &t, &u).map_err(invalid)?;
    let (rows, summary) = congruence_sweep(&x, &emb, max_len).map_err(invalid)?;
    let shown: Vec<Value> = rows
        .iter()
        .filter(|r| all || !r.report.holds())
        .map(|r| {
            let mut verts = r.vertices.clone();
            verts.pop();
            let w = hamflow_core::ham::cycle_walk(&x, &verts);
            let rep = &r.report;
            json!({
                "cycle": w.render(x.group()),
                "len": rep.len,
                "wt": rep.wt,
                "knot": rep.knot.to_string(),
                "essential": rep.essential,
                "imb": rep.imbalance,
                "verdict": if rep.holds() { "ok".to_string() } else { rep.violations.join("; ") },
            })
        })
        .collect();
    let mut m = graph_header(&x);
    m.insert("m".into(), json!(emb.m));
    m.insert("n".into(), json!(emb.n));
    m.insert("r".into(), json!(emb.r));
    m.insert("summary".into(), serde_json::to_value(&summary).expect("json"));
    m.insert("cycles".into(), Value::Array(shown));
    Ok((Value::Object(m), summary.violations == 0))
}

fn cmd_membership(g: &GraphArgs, trials: usize, even_only: bool, flow: Option<&PathBuf>, seed: u64) -> Outcome {
    let x = g.graph()?;
    let label = classify(&x);
    if !label.is_exceptional() {
        return Err(invalid(format!("{label} has no weighting characterization")));
    }
    let mut m = graph_header(&x);
    m.insert("label".into(), json!(label.to_string()));
    if let Some(path) = flow {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(invalid)?;
        let f = flow_from_json(&x, &value).map_err(invalid)?;
        let by_weighting = membership_by_weighting(&x, &label, &f).map_err(invalid)?;
        let q = compute_quotients(&x, &SpanConfig { seed, ..SpanConfig::default() }).map_err(invalid)?;
        let by_lattice = q.ham.lattice.contains(&q.basis.coords(&f)).map_err(invalid)?;
        m.insert("by_weighting".into(), json!(by_weighting));
        m.insert("by_lattice".into(), json!(by_lattice));
        return Ok((Value::Object(m), by_weighting == by_lattice));
    }
    let rep = cross_validate_membership(&x, &label, trials, seed, even_only).map_err(invalid)?;
    m.insert("trials".into(), json!(rep.trials));
    m.insert("members".into(), json!(rep.members));
    m.insert("discrepancies".into(), json!(rep.discrepancies.len()));
    m.insert("agreement".into(), json!(format!("{}/{}", rep.trials - rep.discrepancies.len(), rep.trials)));
    Ok((Value::Object(m), rep.discrepancies.is_empty()))
}

// ------------------------------------------------------------ text output

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

fn render_into(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, val) in m {
                match val {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(out, val, indent + 2);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_table(out, items, indent + 2);
                    }
                    Value::Array(items) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for i in items {
                            out.push_str(&format!("{pad}  {}\n", scalar(i)));
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k:<width$}  {}\n", scalar(val))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

/// Rows of objects as columns; nested values are printed as compact JSON.
fn render_table(out: &mut String, items: &[Value], indent: usize) {
    let pad = " ".repeat(indent);
    let Some(Value::Object(first)) = items.first() else { return };
    let cols: Vec<&String> = first.keys().collect();
    let cell = |item: &Value, c: &str| match item.get(c) {
        Some(v @ (Value::Object(_) | Value::Array(_))) => v.to_string(),
        Some(v) => scalar(v),
        None => "-".into(),
    };
    let widths: Vec<usize> =
        cols.iter().map(|c| items.iter().map(|i| cell(i, c).len()).max().unwrap_or(0).max(c.len())).collect();
    let line = |cells: Vec<String>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(cols.iter().map(|c| c.to_string()).collect()));
    for item in items {
        out.push_str(&line(cols.iter().map(|c| cell(item, c)).collect()));
    }
}
