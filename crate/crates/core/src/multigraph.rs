//! Multigraphs with stable edge identities.
//!
//! Loops and parallel edges are first-class. Deletion and contraction return
//! new graphs and never renumber surviving edges, so polynomials computed on
//! minors share their variables with the parent graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of edges, ordered by id.
pub type EdgeSet = BTreeSet<EdgeId>;

/// An edge with its unordered endpoint pair, stored as `u <= v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn is_incident(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`; for a loop this is `x` itself.
    pub fn other_end(&self, x: VertexId) -> Option<VertexId> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }
}

/// An edge together with a chosen direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

impl OrientedEdge {
    pub fn new(edge: EdgeId, tail: VertexId, head: VertexId) -> Self {
        OrientedEdge { edge, tail, head }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge { edge: self.edge, tail: self.head, head: self.tail }
    }

    /// Renames endpoints after `removed` was merged into `kept` by a contraction.
    pub fn after_merge(self, removed: VertexId, kept: VertexId) -> Self {
        let map = |x: VertexId| if x == removed { kept } else { x };
        OrientedEdge { edge: self.edge, tail: map(self.tail), head: map(self.head) }
    }
}

impl fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}->{})", self.edge, self.tail, self.head)
    }
}

/// Block decomposition of a connected multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Edge sets of the blocks, ordered by their smallest edge id.
    pub blocks: Vec<EdgeSet>,
    pub cut_vertices: BTreeSet<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Multigraph {
    /// Graph on vertices `0..n` with no edges.
    pub fn with_vertices(n: u32) -> Self {
        Multigraph { vertices: (0..n).map(VertexId).collect(), edges: BTreeMap::new() }
    }

    /// Graph on vertices `0..n` with edges given as `(id, u, v)`.
    pub fn from_edges(n: u32, edges: &[(u32, u32, u32)]) -> Result<Self> {
        let mut g = Multigraph::with_vertices(n);
        for &(id, u, v) in edges {
            g.add_edge(EdgeId(id), VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<()> {
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(Error::UnknownVertex(x));
            }
        }
        if self.edges.contains_key(&id) {
            return Err(Error::DuplicateEdge(id));
        }
        self.edges.insert(id, (u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(&id, &(u, v))| Edge { id, u, v })
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, id: EdgeId) -> Result<Edge> {
        self.edges.get(&id).map(|&(u, v)| Edge { id, u, v }).ok_or(Error::UnknownEdge(id))
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn max_edge_id(&self) -> Option<EdgeId> {
        self.edges.keys().next_back().copied()
    }

    pub fn is_loop(&self, id: EdgeId) -> Result<bool> {
        Ok(self.edge(id)?.is_loop())
    }

    pub fn has_loops(&self) -> bool {
        self.edges.values().any(|(u, v)| u == v)
    }

    /// Default orientation of an edge: from its smaller to its larger endpoint.
    pub fn oriented(&self, id: EdgeId) -> Result<OrientedEdge> {
        let e = self.edge(id)?;
        Ok(OrientedEdge::new(id, e.u, e.v))
    }

    /// Checks that `o` names an edge of this graph and matches its endpoints.
    pub fn check_orientation(&self, o: OrientedEdge) -> Result<()> {
        let e = self.edge(o.edge)?;
        let ok = (e.u == o.tail && e.v == o.head) || (e.u == o.head && e.v == o.tail);
        if ok {
            Ok(())
        } else {
            Err(Error::BadOrientation { edge: o.edge, tail: o.tail, head: o.head })
        }
    }

    pub fn incident_edges(&self, v: VertexId) -> Vec<Edge> {
        self.edges().filter(|e| e.is_incident(v)).collect()
    }

    /// Number of edge endpoints at `v`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        if !self.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.edges.values().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum())
    }

    pub fn delete_edge(&self, g: EdgeId) -> Result<Self> {
        let mut out = self.clone();
        out.edges.remove(&g).ok_or(Error::UnknownEdge(g))?;
        Ok(out)
    }

    pub fn delete_edges<I: IntoIterator<Item = EdgeId>>(&self, ids: I) -> Result<Self> {
        let mut out = self.clone();
        for g in ids {
            out.edges.remove(&g).ok_or(Error::UnknownEdge(g))?;
        }
        Ok(out)
    }

    /// Contracts `g`, merging its larger endpoint into its smaller one.
    /// Contracting a loop deletes it. Edges parallel to `g` become loops.
    pub fn contract_edge(&self, g: EdgeId) -> Result<Self> {
        let e = self.edge(g)?;
        if e.is_loop() {
            return self.delete_edge(g);
        }
        let (keep, gone) = (e.u, e.v);
        let mut out = Multigraph { vertices: self.vertices.clone(), edges: BTreeMap::new() };
        out.vertices.remove(&gone);
        for (&id, &(a, b)) in &self.edges {
            if id == g {
                continue;
            }
            let a = if a == gone { keep } else { a };
            let b = if b == gone { keep } else { b };
            out.edges.insert(id, (a.min(b), a.max(b)));
        }
        Ok(out)
    }

    /// Removes `v` together with every edge incident with it.
    pub fn delete_vertex(&self, v: VertexId) -> Result<Self> {
        if !self.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        if self.vertices.len() == 1 {
            return Err(Error::EmptyGraph);
        }
        let mut out = self.clone();
        out.vertices.remove(&v);
        out.edges.retain(|_, &mut (a, b)| a != v && b != v);
        Ok(out)
    }

    /// Subgraph on the given vertex set keeping the listed edges.
    pub fn subgraph(&self, vertices: &BTreeSet<VertexId>, edges: &EdgeSet) -> Result<Self> {
        let mut out = Multigraph { vertices: vertices.clone(), edges: BTreeMap::new() };
        for &id in edges {
            let e = self.edge(id)?;
            out.add_edge(id, e.u, e.v)?;
        }
        Ok(out)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn component_count(&self) -> usize {
        let index = self.vertex_index();
        let mut parent: Vec<usize> = (0..index.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = index.len();
        for &(a, b) in self.edges.values() {
            let ra = find(&mut parent, index[&a]);
            let rb = find(&mut parent, index[&b]);
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps
    }

    pub(crate) fn vertex_index(&self) -> BTreeMap<VertexId, usize> {
        self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Blocks and cut vertices of a connected graph. Each loop is a block of
    /// its own; an edgeless single-vertex graph has one empty block.
    pub fn blocks_and_cut_vertices(&self) -> Result<BlockDecomposition> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let index = self.vertex_index();
        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); verts.len()];
        let mut blocks: Vec<EdgeSet> = Vec::new();
        for (&id, &(a, b)) in &self.edges {
            if a == b {
                blocks.push(std::iter::once(id).collect());
                continue;
            }
            adj[index[&a]].push((id, index[&b]));
            adj[index[&b]].push((id, index[&a]));
        }

        struct Tarjan<'a> {
            adj: &'a [Vec<(EdgeId, usize)>],
            disc: Vec<Option<usize>>,
            low: Vec<usize>,
            time: usize,
            stack: Vec<EdgeId>,
            blocks: Vec<EdgeSet>,
            cut: BTreeSet<usize>,
        }

        impl Tarjan<'_> {
            fn visit(&mut self, u: usize, parent: Option<EdgeId>) {
                self.disc[u] = Some(self.time);
                self.low[u] = self.time;
                self.time += 1;
                let mut children = 0;
                for &(id, w) in &self.adj[u] {
                    if Some(id) == parent {
                        continue;
                    }
                    match self.disc[w] {
                        None => {
                            children += 1;
                            self.stack.push(id);
                            self.visit(w, Some(id));
                            self.low[u] = self.low[u].min(self.low[w]);
                            let du = self.disc[u].unwrap_or(0);
                            if self.low[w] >= du {
                                if parent.is_some() {
                                    self.cut.insert(u);
                                }
                                let mut block = EdgeSet::new();
                                while let Some(top) = self.stack.pop() {
                                    block.insert(top);
                                    if top == id {
                                        break;
                                    }
                                }
                                self.blocks.push(block);
                            }
                        }
                        Some(dw) => {
                            if dw < self.disc[u].unwrap_or(0) {
                                self.stack.push(id);
                                self.low[u] = self.low[u].min(dw);
                            }
                        }
                    }
                }
                if parent.is_none() && children > 1 {
                    self.cut.insert(u);
                }
            }
        }

        let mut t = Tarjan {
            adj: &adj,
            disc: vec![None; verts.len()],
            low: vec![0; verts.len()],
            time: 0,
            stack: Vec::new(),
            blocks: Vec::new(),
            cut: BTreeSet::new(),
        };
        t.visit(0, None);
        blocks.extend(t.blocks);
        if blocks.is_empty() {
            blocks.push(EdgeSet::new());
        }
        blocks.sort_by_key(|b| b.iter().next().copied());
        Ok(BlockDecomposition { blocks, cut_vertices: t.cut.into_iter().map(|i| verts[i]).collect() })
    }

    /// Splits at the cut vertex `v` into the piece holding `anchor` (`v` plus
    /// the component of `G - v` that `anchor` reaches) and the rest. Both
    /// pieces contain `v`; loops at `v` go to the rest.
    pub fn split_at(&self, v: VertexId, anchor: EdgeId) -> Result<(Multigraph, Multigraph)> {
        let a = self.edge(anchor)?;
        if !self.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let start = if a.u != v { a.u } else { a.v };
        if start == v {
            return Err(Error::Precondition(format!("edge {anchor} is a loop at {v}")));
        }
        let mut piece = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for e in self.incident_edges(x) {
                if let Some(y) = e.other_end(x) {
                    if y != v && piece.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        let rest_vertices: BTreeSet<VertexId> = self.vertices.difference(&piece).copied().collect();
        piece.insert(v);
        if rest_vertices.len() <= 1 {
            return Err(Error::NoCutVertex);
        }
        let (mut h_edges, mut j_edges) = (EdgeSet::new(), EdgeSet::new());
        for (&id, &(x, y)) in &self.edges {
            if (x != v && piece.contains(&x)) || (y != v && piece.contains(&y)) {
                h_edges.insert(id);
            } else {
                j_edges.insert(id);
            }
        }
        Ok((self.subgraph(&piece, &h_edges)?, self.subgraph(&rest_vertices, &j_edges)?))
    }

    /// Canonical one-line description: vertices then `id:u-v` edges.
    pub fn canonical_text(&self) -> String {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        let es: Vec<String> = self.edges.iter().map(|(id, (u, v))| format!("{id}:{u}-{v}")).collect();
        format!("V[{}] E[{}]", vs.join(","), es.join(","))
    }

    /// Short stable hash of [`Multigraph::canonical_text`].
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        // a=0 b=1 c=2 d=3; 1=ab 2=bc 3=bd 4=ac 5=cd 6=ad
        Multigraph::from_edges(4, &[(1, 0, 1), (2, 1, 2), (3, 1, 3), (4, 0, 2), (5, 2, 3), (6, 0, 3)]).unwrap()
    }

    fn c2() -> Multigraph {
        Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap()
    }

    #[test]
    fn delete_examples() {
        let g = c2().delete_edge(EdgeId(1)).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_ids().collect::<Vec<_>>(), vec![EdgeId(2)]);

        let g = k4().delete_edge(EdgeId(1)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 5));

        let looped = Multigraph::from_edges(2, &[(1, 0, 1), (7, 1, 1)]).unwrap();
        let g = looped.delete_edge(EdgeId(7)).unwrap();
        assert!(g.has_vertex(VertexId(1)));
        assert!(!g.has_loops());

        assert_eq!(k4().delete_edge(EdgeId(9)), Err(Error::UnknownEdge(EdgeId(9))));
    }

    #[test]
    fn contract_examples() {
        let g = c2().contract_edge(EdgeId(1)).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.is_loop(EdgeId(2)).unwrap());

        let path = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
        let g = path.contract_edge(EdgeId(1)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(g.edge(EdgeId(2)).unwrap().u, VertexId(0));

        let g = k4().contract_edge(EdgeId(1)).unwrap().contract_edge(EdgeId(2)).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert!(g.is_loop(EdgeId(4)).unwrap());
        for id in [3, 5, 6] {
            let e = g.edge(EdgeId(id)).unwrap();
            assert_eq!((e.u, e.v), (VertexId(0), VertexId(3)));
        }
    }

    #[test]
    fn contracting_a_loop_deletes_it() {
        let g = Multigraph::from_edges(2, &[(1, 0, 1), (2, 1, 1)]).unwrap();
        assert_eq!(g.contract_edge(EdgeId(2)).unwrap(), g.delete_edge(EdgeId(2)).unwrap());
    }

    #[test]
    fn connectivity() {
        assert!(k4().is_connected());
        let two = Multigraph::from_edges(4, &[(1, 0, 1), (2, 2, 3)]).unwrap();
        assert!(!two.is_connected());
        assert!(Multigraph::with_vertices(1).is_connected());
    }

    #[test]
    fn blocks() {
        let d = k4().blocks_and_cut_vertices().unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert!(d.cut_vertices.is_empty());

        let bowtie =
            Multigraph::from_edges(5, &[(1, 0, 1), (2, 1, 2), (3, 0, 2), (4, 2, 3), (5, 3, 4), (6, 2, 4)]).unwrap();
        let d = bowtie.blocks_and_cut_vertices().unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.cut_vertices, [VertexId(2)].into_iter().collect());

        let p3 = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
        let d = p3.blocks_and_cut_vertices().unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.cut_vertices, [VertexId(1)].into_iter().collect());

        let two = Multigraph::from_edges(4, &[(1, 0, 1), (2, 2, 3)]).unwrap();
        assert_eq!(two.blocks_and_cut_vertices(), Err(Error::Disconnected));
    }

    #[test]
    fn degrees() {
        let g = k4();
        for v in g.vertices() {
            assert_eq!(g.degree(v).unwrap(), 3);
        }
        let looped = Multigraph::from_edges(1, &[(1, 0, 0)]).unwrap();
        assert_eq!(looped.degree(VertexId(0)).unwrap(), 2);
        assert_eq!(c2().degree(VertexId(1)).unwrap(), 2);
        assert_eq!(g.degree(VertexId(9)), Err(Error::UnknownVertex(VertexId(9))));
    }
}
