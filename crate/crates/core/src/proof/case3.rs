//! Cubic vertices off the marked edges: replace the vertex by one of the three
//! edges joining two of its neighbours.

use std::collections::BTreeSet;

use super::pairs::gamma;
use super::{ContributionPair, ProofNode, Prover, Rule, Scope, TypeCounts};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, OrientedEdge, VertexId};
use crate::spanning::check_marked_pair;

const RULE: &str = "case3";

fn fail(detail: impl Into<String>) -> Error {
    Error::Correspondence { rule: RULE, detail: detail.into() }
}

/// Index of the new edge joining spokes `i < j`: ab, ac, bc.
fn join_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        _ => 2,
    }
}

/// Spoke indices joined by each new edge.
const JOINED: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

/// The expansion at `v`: spokes in id order, new edge ids, and the three
/// graphs `G - v + new`.
#[derive(Debug, Clone)]
pub(crate) struct Expansion {
    pub spokes: [EdgeId; 3],
    pub new_edges: [EdgeId; 3],
    pub graphs: [Multigraph; 3],
}

pub(crate) fn expansion(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<Expansion> {
    let d = g.degree(v)?;
    let at = g.incident_edges(v);
    if d != 3 || at.len() != 3 || at.iter().any(|x| x.is_loop()) {
        return Err(Error::WrongDegree { vertex: v, actual: d, expected: 3 });
    }
    if [e.tail, e.head, f.tail, f.head].contains(&v) {
        return Err(Error::Precondition(format!("vertex {v} lies on a marked edge")));
    }
    let mut at = at;
    at.sort_by_key(|x| x.id);
    let spokes = [at[0].id, at[1].id, at[2].id];
    let ends: Vec<VertexId> = at.iter().map(|x| x.other_end(v).expect("incident")).collect();
    let max = g.max_edge_id().map_or(0, |x| x.0);
    let new_edges = [EdgeId(max + 1), EdgeId(max + 2), EdgeId(max + 3)];
    let w = g.delete_vertex(v)?;
    let mut graphs = Vec::with_capacity(3);
    for (k, [i, j]) in JOINED.iter().enumerate() {
        let mut h = w.clone();
        h.add_edge(new_edges[k], ends[*i], ends[*j])?;
        if !h.is_connected() {
            return Err(Error::Precondition(format!("{} is disconnected", h)));
        }
        graphs.push(h);
    }
    let graphs: [Multigraph; 3] = graphs.try_into().expect("three graphs");
    Ok(Expansion { spokes, new_edges, graphs })
}

impl Expansion {
    /// Image of a pair of `G` as `(graph index, pair)`.
    fn forward(&self, p: &ContributionPair) -> Result<(usize, ContributionPair)> {
        let in_a: Vec<usize> = (0..3).filter(|&i| p.a.contains(&self.spokes[i])).collect();
        let strip = |s: &EdgeSet| -> EdgeSet { s.iter().copied().filter(|x| !self.spokes.contains(x)).collect() };
        let (mut a, mut b) = (strip(&p.a), strip(&p.b));
        let k = match in_a.as_slice() {
            [i, j] => {
                let k = join_index(*i, *j);
                a.insert(self.new_edges[k]);
                k
            }
            [i] => {
                let rest: Vec<usize> = (0..3).filter(|x| x != i).collect();
                let k = join_index(rest[0], rest[1]);
                b.insert(self.new_edges[k]);
                k
            }
            _ => return Err(fail(format!("side A holds {} spokes", in_a.len()))),
        };
        Ok((k, ContributionPair { a, b, ty: p.ty }))
    }

    fn inverse(&self, k: usize, q: &ContributionPair) -> ContributionPair {
        let n = self.new_edges[k];
        let [i, j] = JOINED[k];
        let third = 3 - i - j;
        let (mut a, mut b) = (q.a.clone(), q.b.clone());
        let (with_new, other) = if a.remove(&n) { (&mut a, &mut b) } else { (&mut b, &mut a) };
        with_new.remove(&n);
        with_new.insert(self.spokes[i]);
        with_new.insert(self.spokes[j]);
        other.insert(self.spokes[third]);
        ContributionPair { a, b, ty: q.ty }
    }
}

pub(crate) fn case3_node(
    prover: &mut Prover,
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    v: VertexId,
) -> Result<(ProofNode, TypeCounts)> {
    check_marked_pair(g, e, f)?;
    let ex = expansion(g, e, f, v)?;
    let pairs = prover.pairs(g, e, f)?;
    let own: BTreeSet<ContributionPair> = pairs.iter().cloned().collect();
    let mut images: [BTreeSet<ContributionPair>; 3] = Default::default();
    for p in pairs.iter() {
        let (k, q) = ex.forward(p)?;
        if !images[k].insert(q) {
            return Err(fail("expansion map is not injective"));
        }
    }
    for (k, image) in images.iter().enumerate() {
        let h_pairs = prover.pairs(&ex.graphs[k], e, f)?;
        let h_set: BTreeSet<ContributionPair> = h_pairs.iter().cloned().collect();
        if h_set != *image {
            return Err(fail(format!("images in graph {k} differ from its pairs")));
        }
        for q in h_pairs.iter() {
            let back = ex.inverse(k, q);
            if !own.contains(&back) || ex.forward(&back)? != (k, q.clone()) {
                return Err(fail("inverse map disagrees"));
            }
        }
    }
    let mut children = Vec::with_capacity(3);
    let mut child_counts = Vec::with_capacity(3);
    for h in &ex.graphs {
        let (c, cc) = prover.prove_gamma(h, e, f)?;
        children.push(c);
        child_counts.push(cc);
    }
    let counts = TypeCounts::from_pairs(&pairs);
    let rule = Rule::Case3 { vertex: v, spokes: ex.spokes, new_edges: ex.new_edges };
    let scope = Scope::Monomial(gamma(g, e.edge, f.edge));
    let node = prover.finish(g, e, f, scope, rule, counts.clone(), children, &child_counts, vec![], None)?;
    Ok((node, counts))
}

/// Expands the cubic vertex `v` and proves the three resulting graphs.
pub fn case3_expand(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<ProofNode> {
    Ok(case3_node(&mut Prover::default(), g, e, f, v)?.0)
}
