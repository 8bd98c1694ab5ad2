//! 4-valent vertices off the marked edges: replace the vertex by a perfect
//! matching of its four spokes, account for the surplus forest pairs with a
//! sign-reversing involution.

use std::collections::{BTreeMap, BTreeSet};

use super::pairs::{forest_sign, gamma};
use super::{Case4Tally, ContributionPair, PairType, ProofNode, Prover, Rule, Scope, Side, TypeCounts};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, OrientedEdge, VertexId};
use crate::spanning::{check_marked_pair, forest_cycle, reachable, tree_path};

const RULE: &str = "case4";

fn fail(detail: impl Into<String>) -> Error {
    Error::Correspondence { rule: RULE, detail: detail.into() }
}

/// Subcase of a pair of `G`, by how the spokes split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case4Subcase {
    /// Two spokes on each side.
    I,
    /// Three spokes on one side, tree type.
    IIa,
    /// Three spokes on one side, forest type, both marked edges leave `v`
    /// through the same spoke towards the lone spoke's end.
    IIb1,
    /// As `IIb1` but through different spokes.
    IIb2,
}

impl Case4Subcase {
    pub fn index(self) -> usize {
        self as usize
    }

    /// Number of images in the expanded graphs.
    pub fn images(self) -> usize {
        match self {
            Case4Subcase::I | Case4Subcase::IIb2 => 1,
            Case4Subcase::IIa | Case4Subcase::IIb1 => 2,
        }
    }
}

/// Subcase of a pair of an expanded graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HSubcase {
    /// The new edges lie on different sides.
    I,
    /// Both new edges on one side, tree type.
    Alpha,
    /// Both on one side, forest type, two spoke ends already joined.
    Beta,
    /// Forest type with the four ends apart and no new edge on the cycle.
    Gamma1,
    /// Exactly one new edge on the cycle.
    Gamma2,
    /// Both new edges on the cycle; these pairs have no preimage.
    Gamma3,
}

impl HSubcase {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn preimages(self) -> usize {
        match self {
            HSubcase::I | HSubcase::Gamma2 => 1,
            HSubcase::Alpha | HSubcase::Beta | HSubcase::Gamma1 => 2,
            HSubcase::Gamma3 => 0,
        }
    }

    /// Whether a pair of `G` in subcase `g` may correspond to this one.
    pub fn compatible(self, g: Case4Subcase) -> bool {
        matches!(
            (g, self),
            (Case4Subcase::I, HSubcase::I)
                | (Case4Subcase::IIa, HSubcase::Alpha)
                | (Case4Subcase::IIb1, HSubcase::Beta | HSubcase::Gamma1)
                | (Case4Subcase::IIb2, HSubcase::Gamma2)
        )
    }
}

/// How one pair of `G` maps into the expanded graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case4Classification {
    pub pair: ContributionPair,
    /// The side holding three spokes, if any.
    pub side: Option<Side>,
    pub subcase: Case4Subcase,
    /// First spoke on the path from `v` to the lone spoke's end in `S + e`.
    pub e_tilde: Option<EdgeId>,
    /// The same in `S + f`.
    pub f_tilde: Option<EdgeId>,
    /// `(matching index, pair)` images.
    pub images: Vec<(usize, ContributionPair)>,
}

/// Spoke index pairs in new-edge order: ab, ac, ad, bc, bd, cd.
const PAIRS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// New-edge indices of each perfect matching.
const MATCHINGS: [[usize; 2]; 3] = [[0, 5], [1, 4], [2, 3]];

fn pair_index(i: usize, j: usize) -> usize {
    let key = [i.min(j), i.max(j)];
    PAIRS.iter().position(|p| *p == key).expect("distinct spokes")
}

fn matching_of(pair: usize) -> usize {
    match pair {
        0 | 5 => 0,
        1 | 4 => 1,
        _ => 2,
    }
}

/// The expansion at `v`: spokes in id order, their far ends, the six new
/// edge ids and the three matched graphs.
#[derive(Debug, Clone)]
pub(crate) struct Expansion {
    pub spokes: [EdgeId; 4],
    pub ends: [VertexId; 4],
    pub new_edges: [EdgeId; 6],
    pub graphs: [Multigraph; 3],
    pub vertex: VertexId,
}

pub(crate) fn expansion(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<Expansion> {
    let d = g.degree(v)?;
    let mut at = g.incident_edges(v);
    if d != 4 || at.len() != 4 || at.iter().any(|x| x.is_loop()) {
        return Err(Error::WrongDegree { vertex: v, actual: d, expected: 4 });
    }
    if [e.tail, e.head, f.tail, f.head].contains(&v) {
        return Err(Error::Precondition(format!("vertex {v} lies on a marked edge")));
    }
    at.sort_by_key(|x| x.id);
    let spokes = [at[0].id, at[1].id, at[2].id, at[3].id];
    let ends = [0, 1, 2, 3].map(|i| at[i].other_end(v).expect("incident"));
    let max = g.max_edge_id().map_or(0, |x| x.0);
    let new_edges = [1, 2, 3, 4, 5, 6].map(|k| EdgeId(max + k));
    let w = g.delete_vertex(v)?;
    let mut graphs = Vec::with_capacity(3);
    for m in MATCHINGS {
        let mut h = w.clone();
        for p in m {
            let [i, j] = PAIRS[p];
            h.add_edge(new_edges[p], ends[i], ends[j])?;
        }
        if !h.is_connected() {
            return Err(Error::Precondition(format!("{h} is disconnected")));
        }
        graphs.push(h);
    }
    let graphs: [Multigraph; 3] = graphs.try_into().expect("three graphs");
    Ok(Expansion { spokes, ends, new_edges, graphs, vertex: v })
}

/// A pair with a side of an H graph; `o` is the opposite side.
type HPair = (usize, ContributionPair);

impl Expansion {
    fn spoke_index(&self, id: EdgeId) -> Option<usize> {
        self.spokes.iter().position(|&s| s == id)
    }

    fn strip(&self, s: &EdgeSet) -> EdgeSet {
        s.iter().copied().filter(|x| !self.spokes.contains(x)).collect()
    }

    fn with_new(&self, s: &EdgeSet, news: &[usize]) -> EdgeSet {
        let mut t = self.strip(s);
        t.extend(news.iter().map(|&p| self.new_edges[p]));
        t
    }

    /// Spoke index of the first edge on the path from `v` to the end of
    /// spoke `k` inside `tree`.
    fn first_spoke(&self, g: &Multigraph, tree: &EdgeSet, k: usize) -> Result<usize> {
        let path = tree_path(g, tree, self.vertex, self.ends[k])
            .ok_or_else(|| fail(format!("no path from {} to {} in the completion", self.vertex, self.ends[k])))?;
        let (first, _, _) = *path.first().ok_or_else(|| fail("empty path"))?;
        self.spoke_index(first).ok_or_else(|| fail(format!("path leaves {} through a non-spoke", self.vertex)))
    }

    pub fn classify_g(
        &self,
        g: &Multigraph,
        e: OrientedEdge,
        f: OrientedEdge,
        pair: &ContributionPair,
    ) -> Result<Case4Classification> {
        let in_a: Vec<usize> = (0..4).filter(|&i| pair.a.contains(&self.spokes[i])).collect();
        let in_b: Vec<usize> = (0..4).filter(|&i| pair.b.contains(&self.spokes[i])).collect();
        let ty = pair.ty;
        if in_a.len() == 2 {
            let (h, i, j, k) = (in_a[0], in_a[1], in_b[0], in_b[1]);
            let (pa, pb) = (pair_index(h, i), pair_index(j, k));
            let image = ContributionPair { a: self.with_new(&pair.a, &[pa]), b: self.with_new(&pair.b, &[pb]), ty };
            return Ok(Case4Classification {
                pair: pair.clone(),
                side: None,
                subcase: Case4Subcase::I,
                e_tilde: None,
                f_tilde: None,
                images: vec![(matching_of(pa), image)],
            });
        }
        let (side, three, k) = match (in_a.len(), in_b.len()) {
            (3, 1) => (Side::A, in_a, in_b[0]),
            (1, 3) => (Side::B, in_b, in_a[0]),
            (x, y) => return Err(fail(format!("spokes split {x}:{y}"))),
        };
        let s = pair.side(side);
        let o = pair.side(match side {
            Side::A => Side::B,
            Side::B => Side::A,
        });
        let build = |x: usize, y: usize, z: usize| -> (usize, ContributionPair) {
            let (p, q) = (pair_index(x, y), pair_index(z, k));
            let s2 = self.with_new(s, &[p, q]);
            (matching_of(p), ContributionPair::from_sides(side, s2, self.strip(o), ty))
        };
        let others = |h: usize| -> (usize, usize) {
            let rest: Vec<usize> = three.iter().copied().filter(|&x| x != h).collect();
            (rest[0], rest[1])
        };
        if !ty.is_forest_type() {
            let w = ty.completion(side, s, e.edge, f.edge);
            let h = self.first_spoke(g, &w, k)?;
            let (i, j) = others(h);
            return Ok(Case4Classification {
                pair: pair.clone(),
                side: Some(side),
                subcase: Case4Subcase::IIa,
                e_tilde: None,
                f_tilde: None,
                images: vec![build(h, i, j), build(h, j, i)],
            });
        }
        let plus = |x: EdgeId| {
            let mut t = s.clone();
            t.insert(x);
            t
        };
        let et = self.first_spoke(g, &plus(e.edge), k)?;
        let ft = self.first_spoke(g, &plus(f.edge), k)?;
        let (subcase, images) = if et == ft {
            let (i, j) = others(et);
            (Case4Subcase::IIb1, vec![build(et, i, j), build(et, j, i)])
        } else {
            let j = three.iter().copied().find(|&x| x != et && x != ft).expect("three spokes");
            (Case4Subcase::IIb2, vec![build(et, ft, j)])
        };
        Ok(Case4Classification {
            pair: pair.clone(),
            side: Some(side),
            subcase,
            e_tilde: Some(self.spokes[et]),
            f_tilde: Some(self.spokes[ft]),
            images,
        })
    }

    /// `(spoke index, vertex)` at each end of new edge `p`.
    fn new_ends(&self, p: usize) -> [(usize, VertexId); 2] {
        let [i, j] = PAIRS[p];
        [(i, self.ends[i]), (j, self.ends[j])]
    }

    /// Spoke indices `(inner, outer)` of new edge `n`: the inner end still
    /// reaches both ends of `other` once `n` is removed from `w`.
    fn inner_outer(&self, h: &Multigraph, w: &EdgeSet, n: usize, other: usize) -> Result<(usize, usize)> {
        let mut cut = w.clone();
        cut.remove(&self.new_edges[n]);
        let targets = self.new_ends(other);
        let reaches: Vec<usize> = self
            .new_ends(n)
            .iter()
            .filter(|(_, x)| {
                let r = reachable(h, &cut, *x);
                targets.iter().all(|(_, y)| r.contains(y))
            })
            .map(|&(i, _)| i)
            .collect();
        match reaches.as_slice() {
            [inner] => {
                let [a, b] = PAIRS[n];
                Ok((*inner, if *inner == a { b } else { a }))
            }
            _ => Err(fail(format!("new edge {} has {} inner ends", self.new_edges[n], reaches.len()))),
        }
    }

    fn spoke_set(&self, s: &EdgeSet, spokes: &[usize]) -> EdgeSet {
        let mut t = s.clone();
        t.extend(spokes.iter().map(|&i| self.spokes[i]));
        t
    }

    /// Subcase of a pair of graph `idx` and its preimages in `G`.
    pub fn classify_h(
        &self,
        idx: usize,
        e: OrientedEdge,
        f: OrientedEdge,
        q: &ContributionPair,
    ) -> Result<(HSubcase, Vec<ContributionPair>)> {
        let h = &self.graphs[idx];
        let [p1, p2] = MATCHINGS[idx];
        let (n1, n2) = (self.new_edges[p1], self.new_edges[p2]);
        let side_of = |n: EdgeId| if q.a.contains(&n) { Side::A } else { Side::B };
        let ty = q.ty;
        if side_of(n1) != side_of(n2) {
            let back = |s: &EdgeSet, p: usize| {
                let mut t = s.clone();
                t.remove(&self.new_edges[p]);
                self.spoke_set(&t, &PAIRS[p])
            };
            let (pa, pb) = if side_of(n1) == Side::A { (p1, p2) } else { (p2, p1) };
            return Ok((HSubcase::I, vec![ContributionPair { a: back(&q.a, pa), b: back(&q.b, pb), ty }]));
        }
        let side = side_of(n1);
        let s = q.side(side);
        let o = q.side(match side {
            Side::A => Side::B,
            Side::B => Side::A,
        });
        let mut rest = s.clone();
        rest.remove(&n1);
        rest.remove(&n2);
        let two = |w: &EdgeSet| -> Result<Vec<ContributionPair>> {
            let (in1, out1) = self.inner_outer(h, w, p1, p2)?;
            let (in2, out2) = self.inner_outer(h, w, p2, p1)?;
            Ok(vec![
                ContributionPair::from_sides(
                    side,
                    self.spoke_set(&rest, &[in1, out1, out2]),
                    self.spoke_set(o, &[in2]),
                    ty,
                ),
                ContributionPair::from_sides(
                    side,
                    self.spoke_set(&rest, &[out1, out2, in2]),
                    self.spoke_set(o, &[in1]),
                    ty,
                ),
            ])
        };
        if !ty.is_forest_type() {
            let w = ty.completion(side, s, e.edge, f.edge);
            return Ok((HSubcase::Alpha, two(&w)?));
        }
        let ends: Vec<VertexId> = [p1, p2].iter().flat_map(|&p| self.new_ends(p).map(|(_, x)| x)).collect();
        let joined = ends.iter().enumerate().any(|(i, x)| {
            let r = reachable(h, &rest, *x);
            ends.iter().skip(i + 1).any(|y| r.contains(y))
        });
        if joined {
            return Ok((HSubcase::Beta, two(s)?));
        }
        let (cycle, _) = forest_cycle(h, s, e, f).ok_or_else(|| fail("forest pair without a cycle"))?;
        let on1 = cycle.contains(&n1);
        let on2 = cycle.contains(&n2);
        let mut w = s.clone();
        w.insert(e.edge);
        w.insert(f.edge);
        match (on1, on2) {
            (false, false) => Ok((HSubcase::Gamma1, two(&w)?)),
            (true, true) => Ok((HSubcase::Gamma3, vec![])),
            _ => {
                let (on, off) = if on1 { (p1, p2) } else { (p2, p1) };
                let (off_in, off_out) = self.inner_outer(h, &w, off, on)?;
                let mut sp = PAIRS[on].to_vec();
                sp.push(off_out);
                let pre =
                    ContributionPair::from_sides(side, self.spoke_set(&rest, &sp), self.spoke_set(o, &[off_in]), ty);
                Ok((HSubcase::Gamma2, vec![pre]))
            }
        }
    }

    /// The partner of a gamma3 pair: the same pair with its two new edges
    /// re-matched so that the forest stays valid. Fails unless exactly one
    /// re-matching works and it reverses the sign on that side.
    fn involution(&self, idx: usize, e: OrientedEdge, f: OrientedEdge, q: &ContributionPair) -> Result<HPair> {
        let [p1, p2] = MATCHINGS[idx];
        let (n1, n2) = (self.new_edges[p1], self.new_edges[p2]);
        let side = if q.a.contains(&n1) { Side::A } else { Side::B };
        let s = q.side(side);
        let o = q.side(match side {
            Side::A => Side::B,
            Side::B => Side::A,
        });
        let mut rest = s.clone();
        rest.remove(&n1);
        rest.remove(&n2);
        let mut found = Vec::new();
        for m in (0..3).filter(|&m| m != idx) {
            let hm = &self.graphs[m];
            let mut s2 = rest.clone();
            s2.extend(MATCHINGS[m].iter().map(|&p| self.new_edges[p]));
            if let (Some(ss), Some(so)) = (forest_sign(hm, &s2, e, f), forest_sign(hm, o, e, f)) {
                let ty = match side {
                    Side::A => PairType::from_signs(ss, so),
                    Side::B => PairType::from_signs(so, ss),
                };
                found.push((m, ContributionPair::from_sides(side, s2, o.clone(), ty)));
            }
        }
        let [(m, partner)] = <[HPair; 1]>::try_from(found)
            .map_err(|v| fail(format!("gamma3 pair has {} valid re-matchings", v.len())))?;
        if Some(partner.ty) != q.ty.flip(side) {
            return Err(fail("re-matching does not reverse the sign"));
        }
        Ok((m, partner))
    }
}

pub(crate) fn case4_node(
    prover: &mut Prover,
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    v: VertexId,
) -> Result<(ProofNode, TypeCounts)> {
    check_marked_pair(g, e, f)?;
    let ex = expansion(g, e, f, v)?;
    let pairs = prover.pairs(g, e, f)?;
    let h_pairs = [0, 1, 2].map(|k| prover.pairs(&ex.graphs[k], e, f));
    let h_pairs = {
        let [a, b, c] = h_pairs;
        [a?, b?, c?]
    };
    let h_sets: Vec<BTreeSet<&ContributionPair>> = h_pairs.iter().map(|p| p.iter().collect()).collect();
    let mut tally = Case4Tally::default();

    // forward: each pair of G to its images
    let mut g_class: BTreeMap<&ContributionPair, Case4Subcase> = BTreeMap::new();
    let mut forward: BTreeSet<(ContributionPair, usize, ContributionPair)> = BTreeSet::new();
    for p in pairs.iter() {
        let c = ex.classify_g(g, e, f, p)?;
        if c.images.len() != c.subcase.images() {
            return Err(fail(format!("{:?} pair with {} images", c.subcase, c.images.len())));
        }
        for (k, img) in &c.images {
            if !h_sets[*k].contains(img) {
                return Err(fail(format!("image of a {:?} pair is not a pair of graph {k}", c.subcase)));
            }
            forward.insert((p.clone(), *k, img.clone()));
        }
        tally.g_classes[c.subcase.index()] += 1;
        g_class.insert(p, c.subcase);
    }

    // inverse: each pair of each H graph to its preimages
    let mut inverse: BTreeSet<(ContributionPair, usize, ContributionPair)> = BTreeSet::new();
    let mut gamma3: Vec<HPair> = Vec::new();
    for (k, hp) in h_pairs.iter().enumerate() {
        for q in hp.iter() {
            let (sub, pre) = ex.classify_h(k, e, f, q)?;
            if pre.len() != sub.preimages() {
                return Err(fail(format!("{sub:?} pair with {} preimages", pre.len())));
            }
            for p in &pre {
                let Some(gc) = g_class.get(p) else {
                    return Err(fail(format!("preimage of a {sub:?} pair is not a pair of G")));
                };
                if !sub.compatible(*gc) {
                    return Err(fail(format!("{gc:?} pair corresponds to a {sub:?} pair")));
                }
                inverse.insert((p.clone(), k, q.clone()));
            }
            tally.h_classes[sub.index()] += 1;
            if sub == HSubcase::Gamma3 {
                gamma3.push((k, q.clone()));
            }
        }
    }
    if forward != inverse {
        return Err(fail(format!(
            "forward and inverse correspondences differ ({} vs {} links)",
            forward.len(),
            inverse.len()
        )));
    }

    // the involution on gamma3 pairs
    let g3: BTreeSet<&HPair> = gamma3.iter().collect();
    for x in &gamma3 {
        let y = ex.involution(x.0, e, f, &x.1)?;
        if !g3.contains(&y) {
            return Err(fail("partner of a gamma3 pair is not a gamma3 pair"));
        }
        let z = ex.involution(y.0, e, f, &y.1)?;
        if &z != x || &y == x {
            return Err(fail("re-matching is not a fixed-point-free involution"));
        }
        tally.gamma3[super::type_index(x.1.ty)] += 1;
        if x.1.ty.is_mixed() {
            tally.l0 += 1;
        } else {
            tally.r0 += 1;
        }
        if *x < y {
            tally.orbits += 1;
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
    let rule = Rule::Case4 { vertex: v, spokes: ex.spokes, new_edges: ex.new_edges, tally };
    let scope = Scope::Monomial(gamma(g, e.edge, f.edge));
    let node = prover.finish(g, e, f, scope, rule, counts.clone(), children, &child_counts, vec![], None)?;
    Ok((node, counts))
}

/// Expands the 4-valent vertex `v` and proves the three matched graphs.
pub fn case4_expand(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<ProofNode> {
    Ok(case4_node(&mut Prover::default(), g, e, f, v)?.0)
}

/// Subcase and images of one pair of `G` under the expansion at `v`.
pub fn classify_case4_pair(
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    v: VertexId,
    pair: &ContributionPair,
) -> Result<Case4Classification> {
    check_marked_pair(g, e, f)?;
    expansion(g, e, f, v)?.classify_g(g, e, f, pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::contributions;

    fn o(edge: u32, tail: u32, head: u32) -> OrientedEdge {
        OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head))
    }

    /// Octahedron-like: vertex 4 joined to a 4-cycle 0-1-2-3 whose two
    /// opposite sides are the marked edges, plus the diagonals 0-2 and 1-3.
    fn wheel_graph() -> Multigraph {
        Multigraph::from_edges(
            5,
            &[(1, 0, 1), (2, 2, 3), (3, 1, 2), (4, 3, 0), (5, 0, 4), (6, 1, 4), (7, 2, 4), (8, 3, 4)],
        )
        .unwrap()
    }

    #[test]
    fn matchings_cover_each_pair_once() {
        let mut seen = [0; 6];
        for (k, m) in MATCHINGS.iter().enumerate() {
            for &p in m {
                seen[p] += 1;
                assert_eq!(matching_of(p), k);
            }
        }
        assert_eq!(seen, [1; 6]);
    }

    #[test]
    fn wheel_expands_consistently() {
        let g = wheel_graph();
        assert_eq!(g.edge_count() + 2, 2 * g.vertex_count());
        for (e, f) in [(o(1, 0, 1), o(2, 2, 3)), (o(1, 0, 1), o(2, 3, 2))] {
            let node = case4_expand(&g, e, f, VertexId(4)).unwrap();
            assert_eq!(node.lhs, node.rhs);
            let Rule::Case4 { tally, .. } = &node.rule else { panic!("rule") };
            assert_eq!(tally.l0, tally.r0);
            for p in contributions(&g, e, f).unwrap() {
                let c = classify_case4_pair(&g, e, f, VertexId(4), &p).unwrap();
                assert_eq!(c.images.len(), c.subcase.images());
            }
        }
    }

    #[test]
    fn rejects_marked_vertex() {
        let g = wheel_graph();
        assert!(case4_expand(&g, o(1, 0, 1), o(2, 2, 3), VertexId(0)).is_err());
    }
}
