//! Spanning trees, tree polynomials of minors, the signed forest classes
//! `X+`/`X-`, and a determinant-based matrix-tree oracle.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, OrientedEdge, VertexId};
use crate::polynomial::{Polynomial, RationalWeights};

/// A spanning tree, identified with its edge set.
pub type SpanningTree = EdgeSet;

/// Whether `e` and `f` run the same way around the cycle of `F + e + f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A forest `F` such that `F + e` and `F + f` are both spanning trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestWitness {
    pub forest: EdgeSet,
    /// The unique cycle of `F + e + f`, starting with `e` and listed in the
    /// direction `e` is traversed.
    pub cycle: Vec<EdgeId>,
    pub sign: Sign,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Graph relabelled onto dense vertex indices, loops dropped.
struct Dense {
    n: usize,
    edges: Vec<(EdgeId, usize, usize)>,
}

impl Dense {
    fn new(g: &Multigraph) -> Self {
        let index = g.vertex_index();
        let edges = g.edges().filter(|e| !e.is_loop()).map(|e| (e.id, index[&e.u], index[&e.v])).collect();
        Dense { n: g.vertex_count(), edges }
    }

    fn connects_with_rest(&self, uf: &UnionFind, from: usize) -> bool {
        let mut uf = UnionFind(uf.0.clone());
        let mut comps = (0..self.n).filter(|&x| uf.find(x) == x).count();
        for &(_, a, b) in &self.edges[from..] {
            if uf.union(a, b) {
                comps -= 1;
                if comps == 1 {
                    return true;
                }
            }
        }
        comps <= 1
    }

    fn enumerate(&self, idx: usize, uf: UnionFind, chosen: &mut Vec<EdgeId>, out: &mut Vec<SpanningTree>) {
        if chosen.len() + 1 == self.n {
            out.push(chosen.iter().copied().collect());
            return;
        }
        if self.edges.len() - idx < self.n - 1 - chosen.len() {
            return;
        }
        let (id, a, b) = self.edges[idx];
        let mut with = UnionFind(uf.0.clone());
        if with.union(a, b) {
            chosen.push(id);
            self.enumerate(idx + 1, with, chosen, out);
            chosen.pop();
        }
        if self.connects_with_rest(&uf, idx + 1) {
            self.enumerate(idx + 1, uf, chosen, out);
        }
    }
}

/// Every spanning tree of `g` exactly once, in lexicographic order of the
/// sorted edge-id lists. Empty when `g` is disconnected.
pub fn spanning_trees(g: &Multigraph) -> Vec<SpanningTree> {
    let dense = Dense::new(g);
    let mut out = Vec::new();
    if dense.n == 0 || !g.is_connected() {
        return out;
    }
    dense.enumerate(0, UnionFind::new(dense.n), &mut Vec::new(), &mut out);
    out
}

/// True iff `set` is the edge set of a spanning tree of `g`.
pub fn is_spanning_tree(g: &Multigraph, set: &EdgeSet) -> bool {
    if set.len() + 1 != g.vertex_count() {
        return false;
    }
    let index = g.vertex_index();
    let mut uf = UnionFind::new(index.len());
    for &id in set {
        match g.edge(id) {
            Ok(e) if uf.union(index[&e.u], index[&e.v]) => {}
            _ => return false,
        }
    }
    true
}

/// `T(G) = sum of y^T` over spanning trees; 0 if disconnected, 1 for a single
/// vertex.
pub fn tree_polynomial(g: &Multigraph) -> Polynomial {
    Polynomial::from_sets(&spanning_trees(g))
}

/// The graph `(G \ delete) / contract`, or `None` when a contracted edge is,
/// or becomes, a loop (no spanning tree of `G` can contain it).
pub fn minor(g: &Multigraph, contract: &EdgeSet, delete: &EdgeSet) -> Result<Option<Multigraph>> {
    for &id in contract.iter().chain(delete) {
        g.edge(id)?;
    }
    if let Some(&id) = contract.intersection(delete).next() {
        return Err(Error::OverlappingMinor(id));
    }
    let mut h = g.delete_edges(delete.iter().copied())?;
    for &c in contract {
        if h.is_loop(c)? {
            return Ok(None);
        }
        h = h.contract_edge(c)?;
    }
    Ok(Some(h))
}

/// Tree polynomial of `(G \ delete) / contract`: the sum of `y^(T - contract)`
/// over spanning trees `T` of `G` containing `contract` and avoiding `delete`.
pub fn minor_polynomial(g: &Multigraph, contract: &EdgeSet, delete: &EdgeSet) -> Result<Polynomial> {
    Ok(minor(g, contract, delete)?.map(|h| tree_polynomial(&h)).unwrap_or_else(Polynomial::zero))
}

/// Spanning trees of `(G \ delete) / contract` as edge sets of the minor.
pub fn minor_trees(g: &Multigraph, contract: &EdgeSet, delete: &EdgeSet) -> Result<Vec<SpanningTree>> {
    Ok(minor(g, contract, delete)?.map(|h| spanning_trees(&h)).unwrap_or_default())
}

/// Path in the forest `tree` from `from` to `to` as `(edge, from, to)` steps.
pub(crate) fn tree_path(
    g: &Multigraph,
    tree: &EdgeSet,
    from: VertexId,
    to: VertexId,
) -> Option<Vec<(EdgeId, VertexId, VertexId)>> {
    let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for &id in tree {
        let e = g.edge(id).ok()?;
        adj.entry(e.u).or_default().push((id, e.v));
        adj.entry(e.v).or_default().push((id, e.u));
    }
    let mut prev: BTreeMap<VertexId, (EdgeId, VertexId)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = std::collections::BTreeSet::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &(id, y) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(y) {
                prev.insert(y, (id, x));
                queue.push_back(y);
            }
        }
    }
    if !seen.contains(&to) {
        return None;
    }
    let mut path = Vec::new();
    let mut x = to;
    while x != from {
        let (id, p) = prev[&x];
        path.push((id, p, x));
        x = p;
    }
    path.reverse();
    Some(path)
}

/// Vertices reachable from `from` using only `edges`.
pub(crate) fn reachable(g: &Multigraph, edges: &EdgeSet, from: VertexId) -> std::collections::BTreeSet<VertexId> {
    let mut seen = std::collections::BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &id in edges {
            if let Ok(e) = g.edge(id) {
                if let Some(y) = e.other_end(x) {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    seen
}

/// Cycle and sign for a forest already known to lie in `X(G; e, f)`.
pub fn forest_cycle(g: &Multigraph, forest: &EdgeSet, e: OrientedEdge, f: OrientedEdge) -> Option<(Vec<EdgeId>, Sign)> {
    let mut with_f = forest.clone();
    with_f.insert(f.edge);
    // Walk e forwards, then return from head(e) to tail(e) through F + f.
    let back = tree_path(g, &with_f, e.head, e.tail)?;
    let mut cycle = vec![e.edge];
    let mut sign = None;
    for &(id, from, to) in &back {
        cycle.push(id);
        if id == f.edge {
            sign = Some(if from == f.tail && to == f.head { Sign::Plus } else { Sign::Minus });
        }
    }
    Some((cycle, sign?))
}

/// Checks `e != f` and that both orientations match `g`.
pub fn check_marked_pair(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<()> {
    g.check_orientation(e)?;
    g.check_orientation(f)?;
    if e.edge == f.edge {
        return Err(Error::SameEdge(e.edge));
    }
    Ok(())
}

/// Every `F` with `F + e` and `F + f` spanning trees, with its cycle and sign.
pub fn x_forests(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Vec<ForestWitness>> {
    check_marked_pair(g, e, f)?;
    if g.is_loop(e.edge)? || g.is_loop(f.edge)? {
        return Ok(Vec::new());
    }
    let contract = EdgeSet::from([e.edge]);
    let mut out = Vec::new();
    for forest in minor_trees(g, &contract, &EdgeSet::new())? {
        if forest.contains(&f.edge) {
            continue;
        }
        let mut with_f = forest.clone();
        with_f.insert(f.edge);
        if !is_spanning_tree(g, &with_f) {
            continue;
        }
        let (cycle, sign) = forest_cycle(g, &forest, e, f)
            .ok_or_else(|| Error::Precondition("forest of X(G;e,f) without a cycle through f".into()))?;
        out.push(ForestWitness { forest, cycle, sign });
    }
    Ok(out)
}

/// `(X+, X-)` summed from [`x_forests`].
pub fn x_polynomials(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<(Polynomial, Polynomial)> {
    let witnesses = x_forests(g, e, f)?;
    let pick = |s: Sign| Polynomial::from_sets(witnesses.iter().filter(|w| w.sign == s).map(|w| &w.forest));
    Ok((pick(Sign::Plus), pick(Sign::Minus)))
}

/// Weighted spanning-tree sum via the determinant of a reduced weighted
/// Laplacian. Loops are ignored; a disconnected graph gives 0.
pub fn matrix_tree_value(g: &Multigraph, w: &RationalWeights) -> Result<BigRational> {
    w.check_positive(g.edges().filter(|e| !e.is_loop()).map(|e| e.id))?;
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(BigRational::one());
    }
    let index = g.vertex_index();
    let size = n - 1;
    let mut lap = vec![vec![BigRational::zero(); size]; size];
    for e in g.edges().filter(|e| !e.is_loop()) {
        let y = w.get(e.id).ok_or(Error::MissingWeight(e.id))?;
        let (a, b) = (index[&e.u], index[&e.v]);
        // the last vertex's row and column are dropped
        if a < size {
            lap[a][a] += y;
        }
        if b < size {
            lap[b][b] += y;
        }
        if a < size && b < size {
            lap[a][b] -= y;
            lap[b][a] -= y;
        }
    }
    Ok(determinant(lap))
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let (upper, lower) = m.split_at_mut(r);
            for (target, pivot) in lower[0][col..n].iter_mut().zip(&upper[col][col..n]) {
                *target -= &factor * pivot;
            }
        }
    }
    det
}
