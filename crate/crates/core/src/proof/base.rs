//! Base graphs with printed polynomials, and the directly checked leaf.

use std::collections::BTreeMap;

use super::{PolyCheck, ProofNode, Prover, Rule, Scope, TypeCounts, TypePolynomials};
use crate::error::Result;
use crate::multigraph::{EdgeId, Multigraph, OrientedEdge, VertexId};
use crate::polynomial::Polynomial;

/// The marked graphs whose six polynomials are tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseKind {
    /// Two parallel edges forming a directed cycle.
    C2,
    /// A path of two edges.
    P3,
    /// Complete graph on a, b, c, d with `e = 1` a->b and `f = 2` c->b.
    K4Adjacent,
    /// Complete graph on a, b, c, d with `e = 1` a->b and `f = 5` d->c.
    K4Opposite,
}

impl BaseKind {
    pub const ALL: [BaseKind; 4] = [BaseKind::C2, BaseKind::P3, BaseKind::K4Adjacent, BaseKind::K4Opposite];

    pub fn rule_name(self) -> &'static str {
        match self {
            BaseKind::C2 => "base-C2",
            BaseKind::P3 => "base-P3",
            BaseKind::K4Adjacent | BaseKind::K4Opposite => "base-K4",
        }
    }
}

/// A tabulated marked graph. Vertices a, b, c, d are 0..3 and edges carry
/// their labels as ids: 1=ab, 2=bc, 3=bd, 4=ac, 5=cd, 6=ad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFixture {
    pub kind: BaseKind,
    pub graph: Multigraph,
    pub e: OrientedEdge,
    pub f: OrientedEdge,
    pub polynomials: TypePolynomials,
}

const K4_EDGES: [(u32, u32, u32); 6] = [(1, 0, 1), (2, 1, 2), (3, 1, 3), (4, 0, 2), (5, 2, 3), (6, 0, 3)];

/// Order: `T_e^f, T_f^e, T_ef, T^ef, X+, X-`.
fn printed(kind: BaseKind) -> [&'static str; 6] {
    match kind {
        BaseKind::C2 => ["1", "1", "0", "0", "1", "0"],
        BaseKind::P3 => ["0", "0", "1", "0", "0", "0"],
        BaseKind::K4Adjacent => [
            "y3*y4 + y3*y5 + y4*y5 + y4*y6 + y5*y6",
            "y3*y4 + y3*y6 + y4*y5 + y4*y6 + y5*y6",
            "y3 + y5 + y6",
            "y3*(y4*y5 + y4*y6 + y5*y6)",
            "0",
            "y3*y4 + y4*y5 + y4*y6 + y5*y6",
        ],
        BaseKind::K4Opposite => [
            "(y2 + y4)*(y3 + y6)",
            "(y2 + y3)*(y4 + y6)",
            "y2 + y3 + y4 + y6",
            "y2*y3*y4 + y2*y3*y6 + y2*y4*y6 + y3*y4*y6",
            "y3*y4",
            "y2*y6",
        ],
    }
}

fn parse(text: &str) -> Polynomial {
    text.parse().expect("printed base polynomial")
}

pub fn base_fixture(kind: BaseKind) -> BaseFixture {
    let o = |edge, tail, head| OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head));
    let (graph, e, f) = match kind {
        BaseKind::C2 => (Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]), o(1, 0, 1), o(2, 1, 0)),
        BaseKind::P3 => (Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]), o(1, 0, 1), o(2, 1, 2)),
        BaseKind::K4Adjacent => (Multigraph::from_edges(4, &K4_EDGES), o(1, 0, 1), o(2, 2, 1)),
        BaseKind::K4Opposite => (Multigraph::from_edges(4, &K4_EDGES), o(1, 0, 1), o(5, 3, 2)),
    };
    let [p0, p1, p2, p3, p4, p5] = printed(kind).map(parse);
    BaseFixture {
        kind,
        graph: graph.expect("fixture graph"),
        e,
        f,
        polynomials: TypePolynomials {
            contract_e_delete_f: p0,
            contract_f_delete_e: p1,
            contract_both: p2,
            delete_both: p3,
            x_plus: p4,
            x_minus: p5,
        },
    }
}

/// How a marked graph matches a fixture: the kind, each edge's fixture label,
/// and whether exactly one marked orientation disagrees (which swaps `X+`
/// with `X-`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BaseMatch {
    pub kind: BaseKind,
    pub labels: Vec<(EdgeId, u32)>,
    pub swapped: bool,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub(crate) fn match_base(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Option<BaseMatch> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    let ee = g.edge(e.edge).ok()?;
    let fe = g.edge(f.edge).ok()?;
    if ee.is_loop() || fe.is_loop() {
        return None;
    }
    let labels = vec![(e.edge, 1), (f.edge, 2)];
    if n == 2 && m == 2 {
        return Some(BaseMatch { kind: BaseKind::C2, labels, swapped: e.tail != f.head });
    }
    if n == 3 && m == 2 {
        let shared = [ee.u, ee.v].iter().filter(|x| fe.is_incident(**x)).count();
        return (shared == 1).then_some(BaseMatch { kind: BaseKind::P3, labels, swapped: false });
    }
    if n != 4 || m != 6 {
        return None;
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    let pairs: std::collections::BTreeSet<(VertexId, VertexId)> = g.edges().map(|x| (x.u, x.v)).collect();
    if pairs.len() != 6 || g.has_loops() {
        return None;
    }
    let adjacent = fe.is_incident(ee.u) || fe.is_incident(ee.v);
    let (kind, f_label, f_tail) = if adjacent { (BaseKind::K4Adjacent, 2, 2) } else { (BaseKind::K4Opposite, 5, 3) };
    let fixture_label = |x: usize, y: usize| {
        K4_EDGES
            .iter()
            .find(|&&(_, u, v)| (u as usize, v as usize) == (x.min(y), x.max(y)))
            .map(|&(id, _, _)| id)
            .expect("distinct vertices")
    };
    for perm in permutations(4) {
        let phi: BTreeMap<VertexId, usize> = verts.iter().copied().zip(perm).collect();
        let labels: Vec<(EdgeId, u32)> = g.edges().map(|x| (x.id, fixture_label(phi[&x.u], phi[&x.v]))).collect();
        let label_of = |id: EdgeId| labels.iter().find(|&&(x, _)| x == id).map(|&(_, l)| l);
        if label_of(e.edge) != Some(1) || label_of(f.edge) != Some(f_label) {
            continue;
        }
        let e_ok = phi[&e.tail] == 0;
        let f_ok = phi[&f.tail] == f_tail;
        return Some(BaseMatch { kind, labels, swapped: e_ok != f_ok });
    }
    None
}

/// The fixture's polynomials renamed onto `g` through `labels`.
pub(crate) fn renamed_fixture(found: &BaseMatch) -> TypePolynomials {
    let fx = base_fixture(found.kind).polynomials;
    let back: BTreeMap<u32, EdgeId> = found.labels.iter().map(|&(id, l)| (l, id)).collect();
    let r = |p: &Polynomial| p.rename(|x| back.get(&x.0).copied().unwrap_or(x));
    let (mut x_plus, mut x_minus) = (r(&fx.x_plus), r(&fx.x_minus));
    if found.swapped {
        std::mem::swap(&mut x_plus, &mut x_minus);
    }
    TypePolynomials {
        contract_e_delete_f: r(&fx.contract_e_delete_f),
        contract_f_delete_e: r(&fx.contract_f_delete_e),
        contract_both: r(&fx.contract_both),
        delete_both: r(&fx.delete_both),
        x_plus,
        x_minus,
    }
}

/// Each computed polynomial of `g` against the renamed fixture.
pub(crate) fn base_identities(actual: &TypePolynomials, expected: &TypePolynomials) -> Vec<PolyCheck> {
    let pairs = [
        ("Te^f", &actual.contract_e_delete_f, &expected.contract_e_delete_f),
        ("Tf^e", &actual.contract_f_delete_e, &expected.contract_f_delete_e),
        ("Tef", &actual.contract_both, &expected.contract_both),
        ("T^ef", &actual.delete_both, &expected.delete_both),
        ("X+", &actual.x_plus, &expected.x_plus),
        ("X-", &actual.x_minus, &expected.x_minus),
    ];
    pairs
        .into_iter()
        .map(|(name, a, b)| PolyCheck::new(format!("{name} matches the table"), a.clone(), b.clone()))
        .collect()
}

pub(crate) fn base_node(
    prover: &mut Prover,
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    scope: Scope,
    found: BaseMatch,
) -> Result<(ProofNode, TypeCounts)> {
    let expected = renamed_fixture(&found);
    let identities = base_identities(&TypePolynomials::new(g, e, f)?, &expected);
    let counts = TypeCounts::from_polynomials(&expected, &scope);
    let rule = Rule::Base { kind: found.kind, labels: found.labels, swapped: found.swapped };
    let node = prover.finish(g, e, f, scope, rule, counts.clone(), vec![], &[], identities, None)?;
    Ok((node, counts))
}

/// `T_e^f T_f^e - T_ef T^ef = (X+ - X-)^2` as polynomials.
pub(crate) fn direct_identities(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Vec<PolyCheck>> {
    let p = TypePolynomials::new(g, e, f)?;
    let difference = &(&p.contract_e_delete_f * &p.contract_f_delete_e) - &(&p.contract_both * &p.delete_both);
    let root = &p.x_plus - &p.x_minus;
    Ok(vec![PolyCheck::new("difference is the square", difference, &root * &root)])
}

pub(crate) fn direct_node(
    prover: &mut Prover,
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    scope: Scope,
) -> Result<(ProofNode, TypeCounts)> {
    let identities = direct_identities(g, e, f)?;
    let counts = prover.counts(g, e, f)?;
    let node = prover.finish(g, e, f, scope, Rule::Direct, counts.clone(), vec![], &[], identities, None)?;
    Ok((node, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrical::verify_rayleigh_identity;

    #[test]
    fn fixtures_match_enumeration() {
        for kind in BaseKind::ALL {
            let fx = base_fixture(kind);
            let computed = TypePolynomials::new(&fx.graph, fx.e, fx.f).unwrap();
            assert_eq!(computed, fx.polynomials, "{kind:?}");
            assert!(verify_rayleigh_identity(&fx.graph, fx.e, fx.f).unwrap().verdict);
        }
    }

    #[test]
    fn matches_relabelled_k4() {
        // K4 with vertices permuted and ids shuffled
        let g = Multigraph::from_edges(4, &[(10, 2, 3), (11, 0, 3), (12, 0, 1), (13, 1, 2), (14, 1, 3), (15, 0, 2)])
            .unwrap();
        let o = |edge, tail, head| OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head));
        for (e, f) in [(o(10, 2, 3), o(11, 0, 3)), (o(10, 3, 2), o(11, 0, 3)), (o(10, 2, 3), o(12, 1, 0))] {
            let found = match_base(&g, e, f).unwrap();
            let expected = renamed_fixture(&found);
            assert_eq!(TypePolynomials::new(&g, e, f).unwrap(), expected, "{e} {f}");
        }
    }

    #[test]
    fn rejects_other_graphs() {
        let o = |edge, tail, head| OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head));
        let doubled =
            Multigraph::from_edges(4, &[(1, 0, 1), (2, 1, 2), (3, 2, 3), (4, 0, 3), (5, 0, 1), (6, 2, 3)]).unwrap();
        assert_eq!(match_base(&doubled, o(1, 0, 1), o(3, 2, 3)), None);
        let tri = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2), (3, 0, 2)]).unwrap();
        assert_eq!(match_base(&tri, o(1, 0, 1), o(2, 1, 2)), None);
        let two_loops = Multigraph::from_edges(3, &[(1, 0, 1), (2, 2, 2)]).unwrap();
        assert_eq!(match_base(&two_loops, o(1, 0, 1), o(2, 2, 2)), None);
    }
}
