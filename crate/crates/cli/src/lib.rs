//! `ujac` command-line front end: stable-graph listings, degree bijections,
//! E-polynomials of compactified universal Jacobians, and the self-test.

pub mod cache;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ujac_core::assembly::{chi_compactified, verify_independence, ChiResult, IndependenceReport};
use ujac_core::bijections::{build_bijection, Step};
use ujac_core::graphs::{automorphism_group, stable_pairs, GraphJson};
use ujac_core::interior::InteriorProvider;
use ujac_core::motives::EPolynomial;
use ujac_core::{selftest, Error, PicardGroup, StableGraph};

use cache::{Cache, Lookup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_MISSING_PLUGIN: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Leg profile `n1,n2,...`; the empty string means no legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda(pub Vec<usize>);

fn parse_lambda(s: &str) -> Result<Lambda, String> {
    if s.trim().is_empty() {
        return Ok(Lambda(Vec::new()));
    }
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad leg count {p:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if parts.contains(&0) {
        return Err("leg counts must be positive".into());
    }
    Ok(Lambda(parts))
}

/// Inclusive range `A..B`.
fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

#[derive(Debug, Parser)]
#[command(name = "ujac", version, about = "Exact E-polynomials of compactified universal Jacobians")]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Directory for cached results.
    #[arg(long, global = true, env = "UJAC_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Ignore the cache for this run.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Worker threads (default: all cores).
    #[arg(long, short = 'j', global = true)]
    pub jobs: Option<usize>,

    /// Interior class table for a genus >= 2 vertex type; repeatable.
    #[arg(long, global = true, value_name = "TABLE.json")]
    pub plugin: Vec<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List pairs (stable graph, connected spanning subgraph) with automorphism orders.
    Graphs {
        g: u32,
        #[arg(long, value_parser = parse_lambda, default_value = "")]
        lambda: Lambda,
    },
    /// Build the equivariant bijection between Picard torsors of a graph.
    #[command(allow_negative_numbers = true)]
    Bijection {
        /// Stable graph in the JSON graph format.
        graph: PathBuf,
        d1: i64,
        d2: i64,
        /// Check bijectivity and equivariance exhaustively.
        #[arg(long)]
        verify: bool,
    },
    /// E-polynomial of the compactified universal Jacobian.
    #[command(allow_negative_numbers = true)]
    Chi {
        g: u32,
        #[arg(long, value_parser = parse_lambda, default_value = "")]
        lambda: Lambda,
        #[arg(long, short = 'd', required_unless_present = "all_degrees", conflicts_with = "all_degrees")]
        degree: Option<i64>,
        /// Compute every admissible degree in A..B and compare.
        #[arg(long, value_parser = parse_range, value_name = "A..B")]
        all_degrees: Option<(i64, i64)>,
    },
    /// Run the acceptance suite and the cache consistency check.
    Selftest {
        /// Subset of criteria, e.g. 1,4,9.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InadmissibleDegree { .. } | Error::NotCoprime { .. } | Error::UnstableType { .. } | Error::InvalidGraph(_) | Error::Disconnected => {
            EXIT_PRECONDITION
        }
        Error::NeedsPluginTable { .. } | Error::Plugin(_) => EXIT_MISSING_PLUGIN,
        Error::Io(_) | Error::Json(_) => EXIT_PRECONDITION,
        _ => EXIT_INVARIANT,
    }
}

/// Rendered output plus the exit code it carries.
struct Rendered {
    text: String,
    code: i32,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered { text, code: EXIT_OK }
    }
}

type Outcome = Result<Rendered, Error>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PRECONDITION } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_INVARIANT;
        }
    };
    match pool.install(|| dispatch(&config)) {
        Ok(r) => {
            let _ = out.write_all(r.text.as_bytes());
            r.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn provider(config: &RunConfig) -> Result<InteriorProvider, Error> {
    let mut p = InteriorProvider::new();
    for path in &config.plugin {
        p.load_plugin(path)?;
    }
    Ok(p)
}

fn plugin_digest(config: &RunConfig) -> Result<String, Error> {
    let mut parts = Vec::new();
    for path in &config.plugin {
        parts.push(std::fs::read_to_string(path)?);
    }
    Ok(Cache::key(&parts.iter().map(String::as_str).collect::<Vec<_>>()))
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "text",
    }
}

fn colors_string(colors: &[usize]) -> String {
    colors.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Looks up or computes a rendered result. Only successful renders are stored.
fn cached(config: &RunConfig, parts: &[&str], compute: impl FnOnce() -> Outcome) -> Outcome {
    let Some(dir) = config.cache_dir.as_ref().filter(|_| !config.no_cache) else {
        return compute();
    };
    let cache = Cache::new(dir);
    let mut key_parts = parts.to_vec();
    let digest = plugin_digest(config)?;
    key_parts.push(&digest);
    key_parts.push(format_name(config.format));
    let key = Cache::key(&key_parts);
    if let (Lookup::Hit, Some(text)) = cache.get(&key) {
        return Ok(Rendered::ok(text));
    }
    let r = compute()?;
    if r.code == EXIT_OK {
        let _ = cache.put(&key, &r.text);
    }
    Ok(r)
}

fn dispatch(config: &RunConfig) -> Outcome {
    match &config.command {
        Command::Graphs { g, lambda } => {
            let parts = ["graphs", &g.to_string(), &colors_string(&lambda.0)];
            cached(config, &parts, || cmd_graphs(*g, &lambda.0, config.format))
        }
        Command::Bijection { graph, d1, d2, verify } => cmd_bijection(graph, *d1, *d2, *verify, config.format),
        Command::Chi { g, lambda, degree: Some(d), .. } => {
            let provider = provider(config)?;
            let parts = ["chi", &g.to_string(), &colors_string(&lambda.0), &d.to_string()];
            cached(config, &parts, || render_chi(&chi_compactified(*g, &lambda.0, *d, &provider)?, config.format))
        }
        Command::Chi { g, lambda, all_degrees: Some((a, b)), .. } => {
            let provider = provider(config)?;
            let parts = ["chi-all", &g.to_string(), &colors_string(&lambda.0), &format!("{a}..{b}")];
            cached(config, &parts, || cmd_chi_all(*g, &lambda.0, *a, *b, &provider, config.format))
        }
        Command::Chi { .. } => Err(Error::Invariant("chi needs --degree or --all-degrees".into())),
        Command::Selftest { criteria } => cmd_selftest(config, criteria),
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct PairJson {
    graph: GraphJson,
    subgraph: Vec<usize>,
    aut_order: usize,
    betti: i64,
    excluded_edges: usize,
}

pub fn cmd_graphs_json(g: u32, colors: &[usize]) -> Result<Vec<serde_json::Value>, Error> {
    stable_pairs(g, colors)?
        .iter()
        .map(|p| {
            Ok(serde_json::to_value(PairJson {
                graph: p.graph.to_json(),
                subgraph: p.sub.edge_indices(),
                aut_order: p.aut.order(),
                betti: p.sub.betti(),
                excluded_edges: p.sub.excluded_edges(),
            })?)
        })
        .collect()
}

fn cmd_graphs(g: u32, colors: &[usize], format: Format) -> Outcome {
    let pairs = stable_pairs(g, colors)?;
    let text = match format {
        Format::Json => pretty(&cmd_graphs_json(g, colors)?)?,
        Format::Csv => csv_table(
            &["index", "aut_order", "vertices", "edges", "subgraph_edges", "graph"],
            pairs
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    vec![
                        i.to_string(),
                        p.aut.order().to_string(),
                        p.graph.num_vertices().to_string(),
                        p.graph.num_edges().to_string(),
                        format!("{:?}", p.sub.edge_indices()),
                        serde_json::to_string(&p.graph.to_json()).expect("graph serializes"),
                    ]
                })
                .collect(),
        )?,
        Format::Text => {
            let mut s = String::new();
            for (i, p) in pairs.iter().enumerate() {
                s += &format!("{i}: |Aut| = {}  graph {}  spanning edges {:?}\n", p.aut.order(), p.graph, p.sub.edge_indices());
            }
            s += &format!("{} pairs\n", pairs.len());
            s
        }
    };
    Ok(Rendered::ok(text))
}

#[derive(Serialize)]
struct BijectionJson {
    graph: GraphJson,
    d1: i64,
    d2: i64,
    steps: Vec<Step>,
    set_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bijective: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivariant: Option<bool>,
    verdict: &'static str,
}

fn cmd_bijection(path: &PathBuf, d1: i64, d2: i64, verify: bool, format: Format) -> Outcome {
    let json: GraphJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let graph = StableGraph::from_json(&json)?;
    let b = build_bijection(&graph, d1, d2)?;
    let pic = PicardGroup::new(&graph.multigraph())?;
    let (bijective, equivariant) = if verify {
        let aut = automorphism_group(&graph, None);
        (Some(b.is_bijective(&pic)), Some(aut.iter().all(|phi| b.commutes_with(&pic, phi.vertex_permutation()))))
    } else {
        (None, None)
    };
    let pass = bijective.unwrap_or(true) && equivariant.unwrap_or(true);
    let verdict = match (verify, pass) {
        (false, _) => "BUILT",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    let report = BijectionJson { graph: graph.to_json(), d1, d2, steps: b.steps.clone(), set_size: pic.order(), bijective, equivariant, verdict };
    let steps: Vec<String> = b
        .steps
        .iter()
        .map(|s| match s {
            Step::Multiply(a) => format!("multiply by {a}"),
            Step::Translate(m) => format!("translate by {m}"),
        })
        .collect();
    let text = match format {
        Format::Json => pretty(&report)?,
        Format::Csv => csv_table(
            &["d1", "d2", "set_size", "steps", "verdict"],
            vec![vec![d1.to_string(), d2.to_string(), pic.order().to_string(), steps.join("; "), verdict.to_string()]],
        )?,
        Format::Text => format!("{d1} -> {d2} on {graph}: {}\n|Pic| = {}\n{verdict}\n", steps.join(", "), pic.order()),
    };
    Ok(Rendered { text, code: if pass { EXIT_OK } else { EXIT_INVARIANT } })
}

fn render_chi(r: &ChiResult, format: Format) -> Outcome {
    let e = r.e_polynomial()?;
    let quotient = r.quotient_motive()?.e_polynomial()?;
    let text = match format {
        Format::Json => pretty(&r.to_json()?)?,
        Format::Csv => csv_table(
            &["g", "lambda", "degree", "e_polynomial", "quotient_e_polynomial", "strata"],
            vec![vec![
                r.g.to_string(),
                colors_string(&r.colors),
                r.degree.to_string(),
                e.to_q_string(),
                quotient.to_q_string(),
                r.strata.len().to_string(),
            ]],
        )?,
        Format::Text => {
            let mut s = format!("type ({}, [{}]) degree {}\n", r.g, colors_string(&r.colors), r.degree);
            s += &format!("E = {}\n", e.to_q_string());
            if r.colors.iter().any(|&n| n > 1) {
                s += &format!("E/S_lambda = {}\n", quotient.to_q_string());
            }
            s += &format!("strata: {}\n", r.strata.len());
            s
        }
    };
    Ok(Rendered::ok(text))
}

fn distinct_polynomials(report: &IndependenceReport) -> Vec<EPolynomial> {
    let mut out: Vec<EPolynomial> = Vec::new();
    for e in report.degrees.iter().filter_map(|o| o.e_polynomial.as_ref()) {
        if !out.contains(e) {
            out.push(e.clone());
        }
    }
    out
}

fn cmd_chi_all(g: u32, colors: &[usize], a: i64, b: i64, provider: &InteriorProvider, format: Format) -> Outcome {
    let degrees: Vec<i64> = (a..=b).collect();
    let report = verify_independence(g, colors, &degrees, provider)?;
    let polys = distinct_polynomials(&report);
    let admissible: Vec<i64> = report.degrees.iter().filter(|o| o.admissible).map(|o| o.d).collect();
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    let code = match (admissible.is_empty(), report.pass) {
        (true, _) => EXIT_PRECONDITION,
        (false, true) => EXIT_OK,
        (false, false) => EXIT_INVARIANT,
    };
    let strings: Vec<String> = polys.iter().map(EPolynomial::to_q_string).collect();
    let text = match format {
        Format::Json => pretty(&json!({
            "type": [g, colors],
            "degrees": admissible,
            "rejected": report.rejected,
            "e_polynomials": polys,
            "report": report,
            "verdict": verdict,
        }))?,
        Format::Csv => csv_table(
            &["g", "lambda", "degrees", "rejected", "e_polynomials", "verdict"],
            vec![vec![g.to_string(), colors_string(colors), format!("{admissible:?}"), format!("{:?}", report.rejected), strings.join(" | "), verdict.into()]],
        )?,
        Format::Text => {
            let mut s = String::new();
            for p in &strings {
                s += &format!("E = {p}\n");
            }
            s += &format!("degrees {admissible:?}, rejected {:?}\n", report.rejected);
            for f in &report.failures {
                s += &format!("  {f}\n");
            }
            s += &format!("{verdict}\n");
            s
        }
    };
    Ok(Rendered { text, code })
}

/// Renders `(1, (1,1))` at `d = 0` directly and through the cache (miss, hit,
/// and after corrupting the stored entry); all four must agree byte for byte.
fn cache_check(config: &RunConfig, provider: &InteriorProvider) -> Result<Result<String, String>, Error> {
    let scratch;
    let dir = match &config.cache_dir {
        Some(d) => d.clone(),
        None => {
            scratch = std::env::temp_dir().join(format!("ujac-selftest-{}", std::process::id()));
            scratch.clone()
        }
    };
    let cache = Cache::new(&dir);
    let key = Cache::key(&["selftest-cache", "1", "1,1", "0"]);
    let compute = || -> Result<String, Error> { Ok(render_chi(&chi_compactified(1, &[1, 1], 0, provider)?, Format::Json)?.text) };
    let bypass = compute()?;
    let _ = std::fs::remove_file(cache.path(&key));
    let (first, l1) = cache.get_or_compute(&key, compute)?;
    let (second, l2) = cache.get_or_compute(&key, compute)?;
    std::fs::write(cache.path(&key), b"{\"key\": \"truncated")?;
    let (third, l3) = cache.get_or_compute(&key, compute)?;
    let (fourth, l4) = cache.get_or_compute(&key, compute)?;
    if config.cache_dir.is_none() {
        let _ = std::fs::remove_dir_all(&dir);
    }
    let lookups = [l1, l2, l3, l4];
    if lookups != [Lookup::Miss, Lookup::Hit, Lookup::Corrupt, Lookup::Hit] {
        return Ok(Err(format!("unexpected cache lookups {lookups:?}")));
    }
    if [&first, &second, &third, &fourth].iter().any(|x| **x != bypass) {
        return Ok(Err("cached output differs from bypass".into()));
    }
    Ok(Ok(format!("bypass, miss, hit and corrupted-entry recovery agree ({} bytes)", bypass.len())))
}

#[derive(Serialize)]
struct SelftestLine {
    id: String,
    name: String,
    pass: bool,
    detail: String,
    seconds: f64,
}

fn cmd_selftest(config: &RunConfig, criteria: &[u8]) -> Outcome {
    let provider = provider(config)?;
    let ids: Vec<u8> = if criteria.is_empty() { selftest::ALL.to_vec() } else { criteria.to_vec() };
    let mut lines = Vec::new();
    let mut text = String::new();
    for id in ids {
        let o = selftest::run(id, &provider);
        text += &format!("{o}\n");
        lines.push(SelftestLine { id: id.to_string(), name: selftest::name(id).into(), pass: o.pass, detail: o.detail, seconds: o.elapsed.as_secs_f64() });
    }
    let start = std::time::Instant::now();
    let (pass, detail) = match cache_check(config, &provider) {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    text += &format!("check cache [{}] {detail}\n", if pass { "PASS" } else { "FAIL" });
    lines.push(SelftestLine { id: "cache".into(), name: "cache".into(), pass, detail, seconds: start.elapsed().as_secs_f64() });
    let failed: Vec<String> = lines.iter().filter(|l| !l.pass).map(|l| format!("{} {}", l.id, l.name)).collect();
    let verdict = if failed.is_empty() { "PASS".to_string() } else { format!("FAIL: {}", failed.join(", ")) };
    text += &format!("{verdict}\n");
    let rendered = match config.format {
        Format::Text => text,
        Format::Json => pretty(&json!({ "checks": lines, "verdict": verdict }))?,
        Format::Csv => csv_table(
            &["id", "name", "pass", "detail", "seconds"],
            lines.iter().map(|l| vec![l.id.clone(), l.name.clone(), l.pass.to_string(), l.detail.clone(), format!("{:.3}", l.seconds)]).collect(),
        )?,
    };
    Ok(Rendered { text: rendered, code: if failed.is_empty() { EXIT_OK } else { EXIT_INVARIANT } })
}
