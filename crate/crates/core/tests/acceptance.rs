//! Acceptance suite: one PASS/FAIL line per criterion, run as a single test so
//! the lines come out in order. Time limits are pinned below.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use rayleigh_core::proof::{Case4Tally, TypePolynomials, Validator};
use rayleigh_core::{
    check_certificate, effective_conductance, matrix_tree_value, monotonicity_probe, prove, random_marked_pairs,
    random_multigraph, tree_polynomial, validate_certificate, verify_rayleigh_identity, Certificate, EdgeId, Error,
    Multigraph, OrientedEdge, Polynomial, ProofNode, RationalWeights, Rule, SplitMix64, VertexId,
};

const K4_LIMIT: Duration = Duration::from_secs(1);
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(120);
const FUZZ_LIMIT: Duration = Duration::from_secs(300);

const FUZZ_SEED: u64 = 0x5EED_0003;
const ORACLE_SEED: u64 = 0x5EED_0004;
const PROBE_SEED: u64 = 0x5EED_0007;
const PROVER_SEED: u64 = 0x5EED_0008;

fn o(edge: u32, tail: u32, head: u32) -> OrientedEdge {
    OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head))
}

fn k4() -> Multigraph {
    Multigraph::from_edges(4, &[(1, 0, 1), (2, 1, 2), (3, 1, 3), (4, 0, 2), (5, 2, 3), (6, 0, 3)]).unwrap()
}

fn p(s: &str) -> Polynomial {
    s.parse().unwrap()
}

fn six(t: &TypePolynomials) -> [Polynomial; 6] {
    [
        t.contract_e_delete_f.clone(),
        t.contract_f_delete_e.clone(),
        t.contract_both.clone(),
        t.delete_both.clone(),
        t.x_plus.clone(),
        t.x_minus.clone(),
    ]
}

/// Every connected simple graph on `2..=5` labelled vertices, as an edge
/// subset of the complete graph, with at least two edges.
fn small_graphs() -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 2u32..=5 {
        let all: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 1u32..(1 << all.len()) {
            if mask.count_ones() < 2 {
                continue;
            }
            let edges: Vec<(u32, u32, u32)> = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .enumerate()
                .map(|(k, (_, &(u, v)))| (k as u32 + 1, u, v))
                .collect();
            let g = Multigraph::from_edges(n, &edges).unwrap();
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

/// Ordered pairs of distinct edges; `e` keeps its stored direction, `f` is
/// taken both ways.
fn all_marked_pairs(g: &Multigraph) -> Vec<(OrientedEdge, OrientedEdge)> {
    let edges: Vec<_> = g.edges().collect();
    let mut out = Vec::new();
    for a in &edges {
        for b in &edges {
            if a.id != b.id {
                let e = o(a.id.0, a.u.0, a.v.0);
                let f = o(b.id.0, b.u.0, b.v.0);
                out.push((e, f));
                out.push((e, f.reversed()));
            }
        }
    }
    out
}

fn fuzz_graphs(seed: u64, count: usize) -> Vec<Multigraph> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = random_multigraph(&mut rng, 7, 10);
        // three edges give at least six oriented pairs
        if g.edge_count() >= 3 {
            out.push(g);
        }
    }
    out
}

fn random_weights(rng: &mut SplitMix64, g: &Multigraph) -> RationalWeights {
    g.edge_ids()
        .map(|id| {
            let num = rng.between(1, 9) as i64;
            let den = rng.between(1, 5) as i64;
            (id, BigRational::new(num.into(), den.into()))
        })
        .collect()
}

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn line(&mut self, n: u32, name: &str, ok: bool, detail: String, took: Duration) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("[{verdict}] {n}. {name}: {detail} ({:.2?})", took);
        if !ok {
            self.failures.push(format!("{n}. {name}: {detail}"));
        }
    }
}

fn criterion_k4() -> (bool, String) {
    let printed = [
        (
            o(2, 2, 1),
            [
                "y3*y4 + y3*y5 + y4*y5 + y4*y6 + y5*y6",
                "y3*y4 + y3*y6 + y4*y5 + y4*y6 + y5*y6",
                "y3 + y5 + y6",
                "y3*(y4*y5 + y4*y6 + y5*y6)",
                "0",
                "y3*y4 + y4*y5 + y4*y6 + y5*y6",
            ],
        ),
        (
            o(5, 3, 2),
            [
                "(y2 + y4)*(y3 + y6)",
                "(y2 + y3)*(y4 + y6)",
                "y2 + y3 + y4 + y6",
                "y2*y3*y4 + y2*y3*y6 + y2*y4*y6 + y3*y4*y6",
                "y3*y4",
                "y2*y6",
            ],
        ),
    ];
    let mut matched = 0;
    for (f, want) in printed {
        let got = six(&TypePolynomials::new(&k4(), o(1, 0, 1), f).unwrap());
        matched += got.iter().zip(want).filter(|(g, w)| **g == p(w)).count();
    }
    (matched == 12, format!("{matched}/12 polynomials match"))
}

fn criterion_exhaustive(corpus: &[Multigraph]) -> (bool, String) {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for g in corpus {
        for (e, f) in all_marked_pairs(g) {
            checked += 1;
            match verify_rayleigh_identity(g, e, f) {
                Ok(r) if r.verdict => {}
                other => bad.push(format!("{} {e} {f}: {:?}", g.canonical_text(), other.map(|r| r.verdict))),
            }
        }
    }
    (bad.is_empty(), format!("{checked} marked pairs on {} graphs, {} false", corpus.len(), bad.len()))
}

fn criterion_fuzz() -> (bool, String) {
    let graphs = fuzz_graphs(FUZZ_SEED, 200);
    let mut rng = SplitMix64::new(FUZZ_SEED ^ 1);
    let (mut checked, mut bad, mut short) = (0, 0, 0);
    for g in &graphs {
        let pairs = random_marked_pairs(&mut rng, g, 5);
        if pairs.len() < 5 {
            short += 1;
        }
        for (e, f) in pairs {
            checked += 1;
            if !verify_rayleigh_identity(g, e, f).map(|r| r.verdict).unwrap_or(false) {
                bad += 1;
            }
        }
    }
    (bad == 0 && short == 0, format!("{checked} pairs on 200 graphs, {bad} false, {short} graphs under 5 pairs"))
}

fn criterion_oracle() -> (bool, String) {
    let graphs = fuzz_graphs(ORACLE_SEED, 100);
    let mut rng = SplitMix64::new(ORACLE_SEED ^ 1);
    let mut agree = 0;
    for g in &graphs {
        let w = random_weights(&mut rng, g);
        if matrix_tree_value(g, &w).unwrap() == tree_polynomial(g).evaluate(&w).unwrap() {
            agree += 1;
        }
    }
    (agree == 100, format!("{agree}/100 graphs agree"))
}

fn criterion_recurrence(corpus: &[Multigraph]) -> (bool, String) {
    let (mut checked, mut bad) = (0, 0);
    for g in corpus {
        let t = tree_polynomial(g);
        for x in g.edges().filter(|x| !x.is_loop()) {
            checked += 1;
            let deleted = tree_polynomial(&g.delete_edge(x.id).unwrap());
            let contracted = tree_polynomial(&g.contract_edge(x.id).unwrap());
            if t != &deleted + &(&Polynomial::var(x.id) * &contracted) {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{checked} edges, {bad} failures"))
}

fn criterion_base_values() -> (bool, String) {
    let c2 = Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap();
    let p3 = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
    let constants = |xs: [i64; 6]| xs.map(|x| Polynomial::constant(BigInt::from(x)));
    let c2_ok = six(&TypePolynomials::new(&c2, o(1, 0, 1), o(2, 1, 0)).unwrap()) == constants([1, 1, 0, 0, 1, 0]);
    let p3_ok = six(&TypePolynomials::new(&p3, o(1, 0, 1), o(2, 1, 2)).unwrap()) == constants([0, 0, 1, 0, 0, 0]);
    (c2_ok && p3_ok, format!("C2 {}, P3 {}", if c2_ok { "ok" } else { "wrong" }, if p3_ok { "ok" } else { "wrong" }))
}

fn criterion_probes() -> (bool, String) {
    let mut rng = SplitMix64::new(PROBE_SEED);
    let (mut done, mut bad) = (0, 0);
    while done < 100 {
        let g = random_multigraph(&mut rng, 7, 10);
        let Some((e, f)) = random_marked_pairs(&mut rng, &g, 1).pop() else { continue };
        if g.is_loop(e.edge).unwrap() {
            continue;
        }
        let w = random_weights(&mut rng, &g);
        let bump = BigRational::new(BigInt::from(rng.between(1, 7) as i64), BigInt::from(rng.between(1, 3) as i64));
        let raised = w.get(f.edge).unwrap() + bump;
        done += 1;
        let (before, after) = monotonicity_probe(&g, e.edge, f.edge, &w, &raised).unwrap();
        let r = verify_rayleigh_identity(&g, e, f).unwrap();
        let delta = r.difference.evaluate(&w).unwrap();
        let square = r.square.evaluate(&w).unwrap();
        // Y_e(y_f) = (a + b y_f) / (c + d y_f) has derivative delta / (c + d y_f)^2
        let monotone = after >= before;
        let conductance_ok = effective_conductance(&g, e.edge, &w).unwrap() == before;
        if !(monotone && delta >= BigRational::zero() && delta == square && conductance_ok) {
            bad += 1;
        }
    }
    (bad == 0, format!("{done} probes, {bad} failures"))
}

fn check_nodes(cert: &Certificate, case3: &mut usize, case4: &mut usize) -> Result<(), String> {
    let mut problem = None;
    cert.walk(&mut |n: &ProofNode| {
        match &n.rule {
            Rule::Case4 { tally, .. } => {
                *case4 += 1;
                let Case4Tally { l0, r0, orbits, h_classes, .. } = tally;
                if l0 != r0 || orbits != l0 || 2 * orbits != h_classes[5] {
                    problem.get_or_insert(format!("case4 tally {tally:?}"));
                }
            }
            Rule::Case3 { .. } => {
                *case3 += 1;
                let named = |s: &str| n.equalities.iter().any(|q| q.name == s && q.holds());
                if !(named("left sides add up") && named("right sides add up")) {
                    problem.get_or_insert("case3 without its add-up equalities".to_string());
                }
            }
            _ => {}
        }
        if n.equalities.iter().any(|q| !q.holds()) {
            problem.get_or_insert(format!("{} equality fails", n.rule.name()));
        }
    });
    problem.map_or(Ok(()), Err)
}

fn criterion_prover(corpus: &[Multigraph]) -> (bool, String) {
    let mut targets: Vec<(Multigraph, OrientedEdge, OrientedEdge)> = vec![
        (Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap(), o(1, 0, 1), o(2, 1, 0)),
        (Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap(), o(1, 0, 1), o(2, 1, 2)),
        (k4(), o(1, 0, 1), o(2, 2, 1)),
        (k4(), o(1, 0, 1), o(5, 3, 2)),
    ];
    for g in corpus {
        for (e, f) in all_marked_pairs(g) {
            targets.push((g.clone(), e, f));
        }
    }
    let mut rng = SplitMix64::new(PROVER_SEED ^ 1);
    for g in fuzz_graphs(PROVER_SEED, 50) {
        for (e, f) in random_marked_pairs(&mut rng, &g, 5) {
            targets.push((g.clone(), e, f));
        }
    }
    let (mut case3, mut case4, mut nodes) = (0, 0, 0);
    let mut failures: Vec<String> = Vec::new();
    let mut dichotomy = 0;
    for (g, e, f) in &targets {
        let outcome = prove(g, *e, *f).map_err(|err| {
            if matches!(err, Error::DichotomyViolation(_)) {
                dichotomy += 1;
            }
            err.to_string()
        });
        let outcome = outcome.and_then(|cert| {
            check_certificate(g, *e, *f, &cert).map_err(|err| err.to_string())?;
            nodes += cert.node_count();
            check_nodes(&cert, &mut case3, &mut case4)
        });
        if let Err(msg) = outcome {
            failures.push(format!("{} {e} {f}: {msg}", g.canonical_text()));
        }
    }
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    (
        failures.is_empty(),
        format!(
            "{} marked graphs, {nodes} nodes, {case3} case3 and {case4} case4 nodes, {} failures, {dichotomy} dichotomy violations",
            targets.len(),
            failures.len()
        ),
    )
}

/// Visits every integer a certificate records, in a fixed order, letting
/// `touch` change the `k`-th one.
fn for_each_count(cert: &mut Certificate, touch: &mut dyn FnMut(&mut BigInt)) {
    fn node(n: &mut ProofNode, touch: &mut dyn FnMut(&mut BigInt)) {
        touch(&mut n.lhs);
        touch(&mut n.rhs);
        for q in &mut n.equalities {
            touch(&mut q.lhs);
            touch(&mut q.rhs);
        }
        match &mut n.rule {
            Rule::BlockSplit { factor, .. } => touch(factor),
            Rule::Case4 { tally, .. } => {
                let t: &mut Case4Tally = tally;
                let fields = t.g_classes.iter_mut().chain(t.h_classes.iter_mut()).chain(t.gamma3.iter_mut()).chain([
                    &mut t.l0,
                    &mut t.r0,
                    &mut t.orbits,
                ]);
                for x in fields {
                    let mut b = BigInt::from(*x);
                    touch(&mut b);
                    *x = u64::try_from(b).unwrap_or(0);
                }
            }
            _ => {}
        }
        for c in &mut n.children {
            node(c, touch);
        }
    }
    for p in &mut cert.proofs {
        node(p, touch);
    }
}

fn collect_rules(cert: &Certificate, out: &mut std::collections::BTreeSet<&'static str>) {
    fn walk(n: &ProofNode, out: &mut std::collections::BTreeSet<&'static str>) {
        out.insert(n.rule.name());
        n.children.iter().for_each(|c| walk(c, out));
    }
    cert.proofs.iter().for_each(|p| walk(p, out));
}

fn criterion_mutation() -> (bool, String) {
    let wheel = Multigraph::from_edges(
        5,
        &[(1, 0, 1), (2, 2, 3), (3, 1, 2), (4, 3, 0), (5, 0, 4), (6, 1, 4), (7, 2, 4), (8, 3, 4)],
    )
    .unwrap();
    let bowtie =
        Multigraph::from_edges(5, &[(1, 0, 1), (2, 1, 2), (3, 0, 2), (4, 2, 3), (5, 3, 4), (6, 2, 4), (7, 0, 1)])
            .unwrap();
    // a cubic vertex off the marked edges, with a loop further down
    let cubic = Multigraph::from_edges(
        4,
        &[(1, 0, 1), (2, 0, 2), (3, 2, 3), (4, 1, 2), (5, 1, 2), (6, 0, 2), (7, 1, 1), (8, 1, 3), (9, 1, 3)],
    )
    .unwrap();
    // reaches a cubic four-vertex graph checked directly
    let direct = Multigraph::from_edges(
        4,
        &[
            (1, 0, 1),
            (2, 1, 2),
            (3, 1, 3),
            (4, 2, 3),
            (5, 2, 2),
            (6, 2, 3),
            (7, 1, 1),
            (8, 2, 3),
            (9, 0, 1),
            (10, 0, 2),
        ],
    )
    .unwrap();
    let doubled = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2), (3, 0, 2), (4, 0, 2)]).unwrap();
    let cases = [
        (k4(), o(1, 0, 1), o(2, 2, 1)),
        (k4(), o(1, 0, 1), o(5, 3, 2)),
        (wheel, o(1, 0, 1), o(2, 2, 3)),
        (bowtie, o(1, 0, 1), o(5, 3, 4)),
        (cubic, o(2, 0, 2), o(3, 3, 2)),
        (direct, o(8, 2, 3), o(9, 0, 1)),
        (doubled.clone(), o(4, 0, 2), o(3, 0, 2)),
        (doubled.clone(), o(1, 1, 0), o(3, 0, 2)),
        (doubled, o(2, 2, 1), o(1, 1, 0)),
    ];
    let mut rules = std::collections::BTreeSet::new();
    let (mut slots, mut caught) = (0usize, 0usize);
    let mut ok = true;
    for (g, e, f) in &cases {
        let cert = prove(g, *e, *f).unwrap();
        ok &= validate_certificate(g, *e, *f, &cert);
        collect_rules(&cert, &mut rules);
        // polynomials are memoized across the mutants of one certificate
        let mut checker = Validator::new();
        let mut total = 0;
        for_each_count(&mut cert.clone(), &mut |_| total += 1);
        for k in 0..total {
            let mut mutated = cert.clone();
            let mut i = 0;
            for_each_count(&mut mutated, &mut |x| {
                if i == k {
                    *x += BigInt::one();
                }
                i += 1;
            });
            slots += 1;
            if checker.check(g, *e, *f, &mutated).is_err() {
                caught += 1;
            }
        }
    }
    (
        ok && slots > 0 && caught == slots,
        format!("{caught}/{slots} single-count perturbations rejected across {} rules", rules.len()),
    )
}

#[test]
fn acceptance() {
    let mut report = Report { failures: Vec::new() };
    let timed = |f: &mut dyn FnMut() -> (bool, String)| {
        let t = Instant::now();
        let (ok, detail) = f();
        (ok, detail, t.elapsed())
    };

    let (ok, d, t) = timed(&mut criterion_k4);
    report.line(1, "K4 basis polynomials", ok && t < K4_LIMIT, d, t);

    let corpus = small_graphs();
    let (ok, d, t) = timed(&mut || criterion_exhaustive(&corpus));
    report.line(2, "identity on all small simple graphs", ok && t < EXHAUSTIVE_LIMIT, d, t);

    let (ok, d, t) = timed(&mut criterion_fuzz);
    report.line(3, "identity on fuzz multigraphs", ok && t < FUZZ_LIMIT, d, t);

    let (ok, d, t) = timed(&mut criterion_oracle);
    report.line(4, "matrix-tree oracle", ok, d, t);

    let (ok, d, t) = timed(&mut || criterion_recurrence(&corpus));
    report.line(5, "deletion-contraction recurrence", ok, d, t);

    let (ok, d, t) = timed(&mut criterion_base_values);
    report.line(6, "base values", ok, d, t);

    let (ok, d, t) = timed(&mut criterion_probes);
    report.line(7, "monotonicity probes", ok, d, t);

    let (ok, d, t) = timed(&mut || criterion_prover(&corpus));
    report.line(8, "prover certificates", ok, d, t);

    let (ok, d, t) = timed(&mut criterion_mutation);
    report.line(9, "certificate mutation", ok, d, t);

    assert!(report.failures.is_empty(), "failed criteria: {:#?}", report.failures);
}
