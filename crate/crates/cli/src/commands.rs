//! Subcommand bodies. Each returns the text to print and an exit status, so
//! the binary stays a thin shell and the output is easy to test.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayleigh_core::{
    effective_conductance, matrix_tree_value, minor_polynomial, prove, random_marked_pairs, random_multigraph,
    tree_polynomial, verify_rayleigh_identity, Certificate, EdgeId, EdgeSet, Error as CoreError, Multigraph,
    OrientedEdge, Polynomial, RationalWeights, SplitMix64, Validator,
};

use crate::graph_file::GraphFile;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DICHOTOMY: u8 = 3;

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

/// A command that could not run, with the exit status to report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = if matches!(e, CoreError::DichotomyViolation(_)) { EXIT_DICHOTOMY } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

pub type CommandResult = Result<Outcome, Failure>;

fn ok(stdout: String) -> CommandResult {
    Ok(Outcome { stdout, code: EXIT_OK })
}

fn marked(file: &GraphFile) -> Result<(OrientedEdge, OrientedEdge), Failure> {
    let e = file.mark_e.ok_or_else(|| Failure::usage("graph file has no `mark e` line"))?;
    let f = file.mark_f.ok_or_else(|| Failure::usage("graph file has no `mark f` line"))?;
    let orient = |id| file.orientation(id).ok_or_else(|| Failure::usage(format!("unknown edge {id}")));
    Ok((orient(e)?, orient(f)?))
}

/// Parses `contract=1,2` / `delete=5` items into the two edge sets.
pub fn minor_sets(file: &GraphFile, items: &[String]) -> Result<(EdgeSet, EdgeSet), Failure> {
    let (mut contract, mut delete) = (EdgeSet::new(), EdgeSet::new());
    for item in items {
        let (key, list) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("`{item}` is not contract=LIST or delete=LIST")))?;
        let target = match key {
            "contract" => &mut contract,
            "delete" => &mut delete,
            _ => return Err(Failure::usage(format!("unknown minor operation `{key}`"))),
        };
        for label in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let id = file.edge_id(label).ok_or_else(|| Failure::usage(format!("unknown edge `{label}`")))?;
            target.insert(id);
        }
    }
    Ok((contract, delete))
}

/// Tree polynomial of the graph, or of a minor of it.
pub fn poly(file: &GraphFile, minor: &[String]) -> CommandResult {
    let p = if minor.is_empty() {
        tree_polynomial(&file.graph)
    } else {
        let (contract, delete) = minor_sets(file, minor)?;
        minor_polynomial(&file.graph, &contract, &delete)?
    };
    ok(format!("{}\n", render(file, &p)))
}

fn render(file: &GraphFile, p: &Polynomial) -> String {
    p.display_with(|g| file.variable(g)).to_string()
}

/// The Rayleigh identity for the marked pair; exit 0 iff it holds.
pub fn verify(file: &GraphFile) -> CommandResult {
    let (e, f) = marked(file)?;
    let r = verify_rayleigh_identity(&file.graph, e, f)?;
    let rows: [(&str, &Polynomial); 10] = [
        ("contract e, delete f", &r.minors.contract_e_delete_f),
        ("contract f, delete e", &r.minors.contract_f_delete_e),
        ("contract e and f", &r.minors.contract_both),
        ("delete e and f", &r.minors.delete_both),
        ("X+", &r.x_plus),
        ("X-", &r.x_minus),
        ("difference", &r.difference),
        ("square", &r.square),
        ("expanded lhs", &r.expanded_lhs),
        ("expanded rhs", &r.expanded_rhs),
    ];
    let mut out = String::new();
    let _ = writeln!(out, "e: {}", file.render_oriented(e));
    let _ = writeln!(out, "f: {}", file.render_oriented(f));
    for (name, p) in rows {
        let _ = writeln!(out, "{name}: {}", render(file, p));
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    Ok(Outcome { stdout: out, code: if r.verdict { EXIT_OK } else { EXIT_FALSE } })
}

/// Effective conductance across the edge marked `e`, as an exact rational.
pub fn conductance(file: &GraphFile) -> CommandResult {
    let e = file.mark_e.ok_or_else(|| Failure::usage("graph file has no `mark e` line"))?;
    if file.graph.is_loop(e)? {
        return Err(CoreError::LoopEdge(e).into());
    }
    let value = effective_conductance(&file.graph, e, &file.weights).map_err(|err| match err {
        CoreError::MissingWeight(g) => Failure::usage(format!("no weight for edge `{}`", file.edge_label(g))),
        other => other.into(),
    })?;
    ok(format!("{value}\n"))
}

fn legend(file: &GraphFile) -> String {
    if !file.has_symbolic_names() {
        return String::new();
    }
    let edges: Vec<String> = file.graph.edge_ids().map(|id| format!("{id}={}", file.edge_label(id))).collect();
    let vertices: Vec<String> = file.graph.vertices().map(|v| format!("{v}={}", file.vertex_name(v))).collect();
    format!("edges {}\nvertices {}\n", edges.join(","), vertices.join(","))
}

/// Runs the prover; with `validate`, checks the certificate independently
/// and exits 1 if the check fails.
pub fn prove_file(file: &GraphFile, validate: bool) -> CommandResult {
    let (e, f) = marked(file)?;
    let cert: Certificate = prove(&file.graph, e, f)?;
    let mut out = legend(file);
    out.push_str(&cert.to_string());
    let mut code = EXIT_OK;
    if validate {
        match Validator::new().check(&file.graph, e, f, &cert) {
            Ok(()) => out.push_str("validation: pass\n"),
            Err(err) => {
                let _ = writeln!(out, "validation: fail ({err})");
                code = EXIT_FALSE;
            }
        }
    }
    Ok(Outcome { stdout: out, code })
}

/// Settings for a fuzz run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_vertices: u32,
    pub max_edges: u32,
    /// Marked pairs drawn per graph.
    pub pairs: usize,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    pass: usize,
    fail: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) -> bool {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
        ok
    }
}

fn weights_for(rng: &mut SplitMix64, g: &Multigraph) -> RationalWeights {
    g.edge_ids()
        .map(|id| {
            let num = BigInt::from(rng.between(1, 9));
            let den = BigInt::from(rng.between(1, 5));
            (id, BigRational::new(num, den))
        })
        .collect()
}

fn recurrence_holds(g: &Multigraph, t: &Polynomial, x: EdgeId) -> bool {
    let split = || -> Result<bool, CoreError> {
        let deleted = tree_polynomial(&g.delete_edge(x)?);
        let contracted = tree_polynomial(&g.contract_edge(x)?);
        Ok(*t == &deleted + &(&Polynomial::var(x) * &contracted))
    };
    split().unwrap_or(false)
}

/// Random connected multigraphs, each checked four ways: the identity on
/// sampled marked pairs, the matrix-tree oracle, deletion-contraction on
/// every non-loop edge, and prove plus validate on the sampled pairs.
///
/// A single generator stream drives everything in index order, so the
/// summary depends only on the configuration.
pub fn fuzz(cfg: &FuzzConfig) -> CommandResult {
    if cfg.max_vertices < 2 || cfg.max_edges < 1 {
        return Err(Failure::usage("fuzz needs --max-vertices of at least 2 and --max-edges of at least 1"));
    }
    let mut rng = SplitMix64::new(cfg.seed);
    let (mut verify, mut oracle, mut recurrence, mut proofs) =
        (Tally::default(), Tally::default(), Tally::default(), Tally::default());
    let mut dichotomy = 0usize;
    let mut failures = String::new();
    for index in 0..cfg.count {
        let g = random_multigraph(&mut rng, cfg.max_vertices, cfg.max_edges);
        let text = g.canonical_text();
        let pairs = random_marked_pairs(&mut rng, &g, cfg.pairs);
        let w = weights_for(&mut rng, &g);

        let t = tree_polynomial(&g);
        let agree = matches!((matrix_tree_value(&g, &w), t.evaluate(&w)), (Ok(a), Ok(b)) if a == b);
        if !oracle.record(agree) {
            let _ = writeln!(failures, "graph {index} oracle {text}");
        }
        for x in g.edges().filter(|x| !x.is_loop()) {
            if !recurrence.record(recurrence_holds(&g, &t, x.id)) {
                let _ = writeln!(failures, "graph {index} recurrence edge {} {text}", x.id);
            }
        }
        for &(e, f) in &pairs {
            let holds = verify_rayleigh_identity(&g, e, f).map(|r| r.verdict).unwrap_or(false);
            if !verify.record(holds) {
                let _ = writeln!(failures, "graph {index} verify e={e} f={f} {text}");
            }
            let proved = match prove(&g, e, f) {
                Ok(cert) => Validator::new().check(&g, e, f, &cert).map_err(|err| err.to_string()),
                Err(err) => {
                    if matches!(err, CoreError::DichotomyViolation(_)) {
                        dichotomy += 1;
                    }
                    Err(err.to_string())
                }
            };
            if let Err(msg) = &proved {
                let _ = writeln!(failures, "graph {index} prove e={e} f={f} {text}: {msg}");
            }
            proofs.record(proved.is_ok());
        }
    }
    let all = [verify, oracle, recurrence, proofs];
    let passed = all.iter().all(|t| t.fail == 0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "fuzz seed={} count={} max-vertices={} max-edges={} pairs={}",
        cfg.seed, cfg.count, cfg.max_vertices, cfg.max_edges, cfg.pairs
    );
    for (name, t) in ["verify", "oracle", "recurrence", "prove"].iter().zip(all) {
        let _ = writeln!(out, "{name}: {} pass, {} fail", t.pass, t.fail);
    }
    out.push_str(&failures);
    let _ = writeln!(out, "result: {}", if passed { "pass" } else { "fail" });
    let code = match (passed, dichotomy) {
        (true, _) => EXIT_OK,
        (false, 0) => EXIT_FALSE,
        (false, _) => EXIT_DICHOTOMY,
    };
    Ok(Outcome { stdout: out, code })
}
