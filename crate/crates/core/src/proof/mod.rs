//! Certificate-producing prover for the square identity.
//!
//! The identity is checked one monomial at a time. Each monomial is first
//! reduced to the all-ones monomial of a minor (deleting edges of exponent 0,
//! contracting edges of exponent 2), and the all-ones coefficient is then
//! established by a tree of local rules whose leaves are base graphs or
//! directly checked identities. Every node records integer equalities that
//! [`validate_certificate`] recomputes from the spanning-tree enumerator alone.

mod base;
mod case2;
mod case3;
mod case4;
mod pairs;
mod reduce;
mod render;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, OrientedEdge, VertexId};
use crate::polynomial::{ExponentVector, Polynomial};
use crate::spanning::check_marked_pair;

pub use base::{base_fixture, BaseKind};
pub use case2::case2_reduce;
pub use case3::case3_expand;
pub use case4::{case4_expand, classify_case4_pair, Case4Classification, Case4Subcase, HSubcase};
pub use pairs::{
    classify_pair, contributions, gamma, lhs_rhs_counts, ContributionPair, PairType, Side, TypePolynomials,
};
pub use reduce::{reduce_alpha, split_blocks, BlockSplit, Reduction, ReductionStep};
pub use validate::{check_certificate, validate_certificate, Validator};

/// Which coefficients a node speaks about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    /// The whole polynomial identity; counts are coefficient sums.
    Identity,
    Monomial(ExponentVector),
}

/// Which of the three degree-2 situations applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case2Kind {
    /// The vertex meets neither marked edge.
    Neither,
    /// The vertex meets exactly one marked edge.
    One,
    /// The vertex meets both marked edges.
    Both,
}

/// Bookkeeping of the 4-valent expansion.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Case4Tally {
    /// Pairs of `G` by subcase: i, ii-a, ii-b1, ii-b2.
    pub g_classes: [u64; 4],
    /// Pairs of the H graphs by subcase: i, alpha, beta, gamma1, gamma2, gamma3.
    pub h_classes: [u64; 6],
    /// gamma3 pairs by type, indexed like [`PairType::ALL`].
    pub gamma3: [u64; 6],
    pub l0: u64,
    pub r0: u64,
    /// Two-element orbits of the involution.
    pub orbits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Some edge is a loop, so the all-ones coefficient vanishes.
    Loop {
        edge: EdgeId,
    },
    TrivialDegree,
    /// A tabulated graph; `labels` maps edges to table labels and `swapped`
    /// records that exactly one marked orientation disagrees with the table.
    Base {
        kind: BaseKind,
        labels: Vec<(EdgeId, u32)>,
        swapped: bool,
    },
    /// A 4-vertex cubic multigraph other than the complete graph whose marked
    /// edges cover every vertex; checked as a polynomial identity.
    Direct,
    DeleteZero {
        edge: EdgeId,
    },
    ContractTwo {
        edge: EdgeId,
    },
    BlockSplit {
        vertex: VertexId,
        separated: bool,
        factor: BigInt,
    },
    Case2 {
        vertex: VertexId,
        kind: Case2Kind,
    },
    Case3 {
        vertex: VertexId,
        spokes: [EdgeId; 3],
        new_edges: [EdgeId; 3],
    },
    Case4 {
        vertex: VertexId,
        spokes: [EdgeId; 4],
        new_edges: [EdgeId; 6],
        tally: Case4Tally,
    },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Loop { .. } => "loop",
            Rule::TrivialDegree => "trivial-degree",
            Rule::Base { kind, .. } => kind.rule_name(),
            Rule::Direct => "direct",
            Rule::DeleteZero { .. } => "delete-α0",
            Rule::ContractTwo { .. } => "contract-α2",
            Rule::BlockSplit { .. } => "block-split",
            Rule::Case2 { kind: Case2Kind::Neither, .. } => "case2-i",
            Rule::Case2 { kind: Case2Kind::One, .. } => "case2-ii",
            Rule::Case2 { kind: Case2Kind::Both, .. } => "case2-iii",
            Rule::Case3 { .. } => "case3",
            Rule::Case4 { .. } => "case4",
        }
    }
}

/// A named integer equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equality {
    pub name: String,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl Equality {
    pub fn new(name: impl Into<String>, lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        Equality { name: name.into(), lhs: lhs.into(), rhs: rhs.into() }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// A named polynomial identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCheck {
    pub name: String,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

impl PolyCheck {
    pub fn new(name: impl Into<String>, lhs: Polynomial, rhs: Polynomial) -> Self {
        PolyCheck { name: name.into(), lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub graph: Multigraph,
    pub e: OrientedEdge,
    pub f: OrientedEdge,
    pub scope: Scope,
    pub rule: Rule,
    /// Left-side count at the scope.
    pub lhs: BigInt,
    /// Right-side count at the scope.
    pub rhs: BigInt,
    pub equalities: Vec<Equality>,
    pub identities: Vec<PolyCheck>,
    pub children: Vec<ProofNode>,
}

impl ProofNode {
    /// Number of nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofNode::size).sum::<usize>()
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a ProofNode)) {
        visit(self);
        for c in &self.children {
            c.walk(visit);
        }
    }
}

/// Proof of the identity for one marked graph: either a single whole-graph
/// base node, or one node per monomial of either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub fingerprint: String,
    pub e: OrientedEdge,
    pub f: OrientedEdge,
    pub proofs: Vec<ProofNode>,
}

impl Certificate {
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a ProofNode)) {
        for p in &self.proofs {
            p.walk(visit);
        }
    }

    pub fn node_count(&self) -> usize {
        self.proofs.iter().map(ProofNode::size).sum()
    }
}

/// Per-type counts at one scope.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct TypeCounts(pub [BigInt; 6]);

impl TypeCounts {
    pub fn from_pairs(pairs: &[ContributionPair]) -> Self {
        let mut out = TypeCounts::default();
        for p in pairs {
            out.0[type_index(p.ty)] += 1;
        }
        out
    }

    pub fn from_polynomials(polys: &TypePolynomials, scope: &Scope) -> Self {
        TypeCounts(PairType::ALL.map(|t| match scope {
            Scope::Monomial(alpha) => polys.count(t, alpha),
            Scope::Identity => polys.product(t).coefficient_sum(),
        }))
    }

    pub fn get(&self, t: PairType) -> &BigInt {
        &self.0[type_index(t)]
    }

    pub fn lhs(&self) -> BigInt {
        PairType::ALL.iter().filter(|t| t.is_left()).map(|&t| self.get(t).clone()).sum()
    }

    pub fn rhs(&self) -> BigInt {
        PairType::ALL.iter().filter(|t| !t.is_left()).map(|&t| self.get(t).clone()).sum()
    }
}

pub(crate) fn type_index(t: PairType) -> usize {
    PairType::ALL.iter().position(|&x| x == t).unwrap_or(0)
}

/// Everything a rule's equalities are stated in terms of.
pub(crate) struct StatementInputs<'a> {
    pub node: &'a TypeCounts,
    pub children: &'a [TypeCounts],
    /// `[y^gamma] T(G - v)^2` for the degree-2 rule with both marked edges.
    pub square_count: Option<&'a BigInt>,
}

/// The equalities a node with `rule` must carry. Shared by the prover, which
/// feeds it enumerated counts, and the validator, which feeds it counts
/// recomputed from polynomials.
pub(crate) fn statements(rule: &Rule, inp: &StatementInputs<'_>) -> Vec<Equality> {
    let n = inp.node;
    let sum_children = |side: fn(&TypeCounts) -> BigInt| -> BigInt { inp.children.iter().map(side).sum() };
    let zero = BigInt::zero();
    match rule {
        Rule::Loop { .. } | Rule::TrivialDegree => vec![
            Equality::new("left side vanishes", n.lhs(), zero.clone()),
            Equality::new("right side vanishes", n.rhs(), zero),
        ],
        Rule::Base { .. } | Rule::Direct => vec![Equality::new("sides agree", n.lhs(), n.rhs())],
        Rule::DeleteZero { .. } | Rule::ContractTwo { .. } => {
            let c = inp.children.first().cloned().unwrap_or_default();
            vec![
                Equality::new("left side transported", n.lhs(), c.lhs()),
                Equality::new("right side transported", n.rhs(), c.rhs()),
            ]
        }
        Rule::BlockSplit { separated: true, .. } => vec![Equality::new("sides agree", n.lhs(), n.rhs())],
        Rule::BlockSplit { factor, .. } => {
            let c = inp.children.first().cloned().unwrap_or_default();
            vec![
                Equality::new("left side factors", n.lhs(), factor * c.lhs()),
                Equality::new("right side factors", n.rhs(), factor * c.rhs()),
            ]
        }
        Rule::Case2 { kind: Case2Kind::Neither, .. } => {
            let c = inp.children.first().cloned().unwrap_or_default();
            vec![
                Equality::new("left side doubles", n.lhs(), c.lhs() * 2),
                Equality::new("right side doubles", n.rhs(), c.rhs() * 2),
            ]
        }
        Rule::Case2 { kind: Case2Kind::One, .. } => {
            let mut out: Vec<Equality> =
                [PairType::PlusMinus, PairType::MinusPlus, PairType::PlusPlus, PairType::MinusMinus]
                    .iter()
                    .map(|&t| Equality::new(format!("{t} vanishes"), n.get(t).clone(), zero.clone()))
                    .collect();
            out.push(Equality::new(
                "tree products agree",
                n.get(PairType::SplitTrees).clone(),
                n.get(PairType::JoinedTrees).clone(),
            ));
            out
        }
        Rule::Case2 { kind: Case2Kind::Both, .. } => {
            let sq = inp.square_count.cloned().unwrap_or_default();
            vec![
                Equality::new("left side is the square count", n.lhs(), sq.clone()),
                Equality::new("right side is the square count", n.rhs(), sq),
            ]
        }
        Rule::Case3 { .. } => {
            let mut out: Vec<Equality> = PairType::ALL
                .iter()
                .map(|&t| {
                    let total: BigInt = inp.children.iter().map(|c| c.get(t).clone()).sum();
                    Equality::new(format!("{t} pairs add up"), n.get(t).clone(), total)
                })
                .collect();
            out.push(Equality::new("left sides add up", n.lhs(), sum_children(TypeCounts::lhs)));
            out.push(Equality::new("right sides add up", n.rhs(), sum_children(TypeCounts::rhs)));
            out
        }
        Rule::Case4 { tally, .. } => {
            let mut out: Vec<Equality> = PairType::ALL
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let total: BigInt = inp.children.iter().map(|c| c.get(t).clone()).sum();
                    Equality::new(format!("{t} pairs add up with gamma3"), n.get(t) + tally.gamma3[i], total)
                })
                .collect();
            let g = &tally.gamma3;
            let (pm, mp, pp, mm) = (
                g[type_index(PairType::PlusMinus)],
                g[type_index(PairType::MinusPlus)],
                g[type_index(PairType::PlusPlus)],
                g[type_index(PairType::MinusMinus)],
            );
            let hc = &tally.h_classes;
            let gc = &tally.g_classes;
            let child_pairs: BigInt = inp.children.iter().map(|c| c.lhs() + c.rhs()).sum();
            out.extend([
                Equality::new("L0 counts mixed gamma3 pairs", tally.l0, pm + mp),
                Equality::new("R0 counts pure gamma3 pairs", tally.r0, pp + mm),
                Equality::new("left sides add up with L0", n.lhs() + tally.l0, sum_children(TypeCounts::lhs)),
                Equality::new("right sides add up with R0", n.rhs() + tally.r0, sum_children(TypeCounts::rhs)),
                Equality::new("L0 = R0", tally.l0, tally.r0),
                Equality::new("involution orbits cover gamma3", 2 * tally.orbits, hc[5]),
                Equality::new("each orbit has one mixed pair", tally.orbits, tally.l0),
                Equality::new("gamma3 types cover gamma3", g.iter().sum::<u64>(), hc[5]),
                Equality::new("pairs of G by subcase", gc.iter().sum::<u64>(), n.lhs() + n.rhs()),
                Equality::new("pairs of H by subcase", hc.iter().sum::<u64>(), child_pairs),
                Equality::new("subcase i is 1:1", gc[0], hc[0]),
                Equality::new("subcase ii-a is 2:2 with alpha", gc[1], hc[1]),
                Equality::new("subcase ii-b1 is 2:2 with beta and gamma1", gc[2], hc[2] + hc[3]),
                Equality::new("subcase ii-b2 is 1:1 with gamma2", gc[3], hc[4]),
            ]);
            out
        }
    }
}

/// The rule that applies to a marked graph at a monomial. Shared by the
/// prover and the validator so that both make the same choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Decision {
    Reduce(ReductionStep),
    Loop(EdgeId),
    Base(base::BaseMatch),
    TrivialDegree,
    BlockSplit(VertexId),
    Case2(VertexId),
    Case3(VertexId),
    Case4(VertexId),
    Direct,
}

pub(crate) fn decide(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, alpha: &ExponentVector) -> Result<Decision> {
    check_marked_pair(g, e, f)?;
    reduce::check_exponents(g, e.edge, f.edge, alpha)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(step) = reduce::next_step(g, e.edge, f.edge, alpha) {
        return Ok(Decision::Reduce(step));
    }
    if let Some(edge) = g.edges().find(|x| x.is_loop()).map(|x| x.id) {
        return Ok(Decision::Loop(edge));
    }
    if let Some(found) = base::match_base(g, e, f) {
        return Ok(Decision::Base(found));
    }
    let (n, m) = (g.vertex_count(), g.edge_count());
    if m + 2 != 2 * n {
        // both sides are homogeneous of degree 2(n-2), the monomial has degree m-2
        return Ok(Decision::TrivialDegree);
    }
    let blocks = g.blocks_and_cut_vertices()?;
    if let Some(&v) = blocks.cut_vertices.iter().next() {
        return Ok(Decision::BlockSplit(v));
    }
    for v in g.vertices() {
        if g.degree(v)? <= 1 {
            return Err(Error::Precondition(format!("vertex {v} of degree at most one in a block")));
        }
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v).ok() == Some(2)) {
        return Ok(Decision::Case2(v));
    }
    let ends: BTreeSet<VertexId> = [e.tail, e.head, f.tail, f.head].into_iter().collect();
    let cubic: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v).ok() == Some(3)).collect();
    if cubic.len() < 4 {
        return Err(Error::DichotomyViolation(format!("only {} vertices of degree three in {}", cubic.len(), g)));
    }
    if let Some(&v) = cubic.iter().find(|v| !ends.contains(v)) {
        return Ok(Decision::Case3(v));
    }
    let adjacent = ends.len() < 4;
    let others_quartic = g.vertices().filter(|v| !ends.contains(v)).all(|v| g.degree(v).ok() == Some(4));
    if adjacent || !others_quartic {
        return Err(Error::DichotomyViolation(format!(
            "no cubic vertex off e and f, and the 4-valent pattern fails in {g}"
        )));
    }
    Ok(match g.vertices().find(|v| !ends.contains(v)) {
        Some(v) => Decision::Case4(v),
        None => Decision::Direct,
    })
}

type Key = (Multigraph, OrientedEdge, OrientedEdge);

/// Prover state: a cache of enumerated contribution pairs.
#[derive(Default)]
pub(crate) struct Prover {
    cache: HashMap<Key, Rc<Vec<ContributionPair>>>,
}

impl Prover {
    pub fn pairs(&mut self, g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Rc<Vec<ContributionPair>>> {
        let key = (g.clone(), e, f);
        if let Some(p) = self.cache.get(&key) {
            return Ok(p.clone());
        }
        let p = Rc::new(contributions(g, e, f)?);
        self.cache.insert(key, p.clone());
        Ok(p)
    }

    pub fn counts(&mut self, g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<TypeCounts> {
        Ok(TypeCounts::from_pairs(&self.pairs(g, e, f)?))
    }

    /// Builds a node, attaching the rule's equalities and failing if any of
    /// them does not hold.
    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        &mut self,
        g: &Multigraph,
        e: OrientedEdge,
        f: OrientedEdge,
        scope: Scope,
        rule: Rule,
        counts: TypeCounts,
        children: Vec<ProofNode>,
        child_counts: &[TypeCounts],
        identities: Vec<PolyCheck>,
        square_count: Option<&BigInt>,
    ) -> Result<ProofNode> {
        let equalities = statements(&rule, &StatementInputs { node: &counts, children: child_counts, square_count });
        if let Some(bad) = equalities.iter().find(|q| !q.holds()) {
            return Err(Error::Correspondence {
                rule: rule.name(),
                detail: format!("{}: {} != {}", bad.name, bad.lhs, bad.rhs),
            });
        }
        if let Some(bad) = identities.iter().find(|p| p.lhs != p.rhs) {
            return Err(Error::Correspondence {
                rule: rule.name(),
                detail: format!("{}: {} != {}", bad.name, bad.lhs, bad.rhs),
            });
        }
        Ok(ProofNode {
            graph: g.clone(),
            e,
            f,
            scope,
            lhs: counts.lhs(),
            rhs: counts.rhs(),
            rule,
            equalities,
            identities,
            children,
        })
    }

    /// Proves the coefficient of `alpha` by reducing to an all-ones monomial.
    pub fn prove_monomial(
        &mut self,
        g: &Multigraph,
        e: OrientedEdge,
        f: OrientedEdge,
        alpha: &ExponentVector,
    ) -> Result<(ProofNode, TypeCounts)> {
        let step = match decide(g, e, f, alpha)? {
            Decision::Reduce(step) => step,
            d => return self.apply(g, e, f, d),
        };
        let (child_graph, ce, cf, child_alpha, rule) = match step {
            ReductionStep::Delete(x) => {
                let h = g.delete_edge(x)?;
                if h.component_count() != g.component_count() {
                    return Err(Error::Precondition(format!("deleting cut edge {x}")));
                }
                (h, e, f, alpha.clone(), Rule::DeleteZero { edge: x })
            }
            ReductionStep::Contract(x) => {
                let edge = g.edge(x)?;
                let h = g.contract_edge(x)?;
                let (ce, cf) = (e.after_merge(edge.v, edge.u), f.after_merge(edge.v, edge.u));
                (h, ce, cf, alpha.without(x), Rule::ContractTwo { edge: x })
            }
        };
        let (child, counts) = self.prove_monomial(&child_graph, ce, cf, &child_alpha)?;
        let node = self.finish(
            g,
            e,
            f,
            Scope::Monomial(alpha.clone()),
            rule,
            counts.clone(),
            vec![child],
            std::slice::from_ref(&counts),
            Vec::new(),
            None,
        )?;
        Ok((node, counts))
    }

    /// Proves the all-ones coefficient by the first applicable local rule.
    pub fn prove_gamma(&mut self, g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<(ProofNode, TypeCounts)> {
        self.prove_monomial(g, e, f, &gamma(g, e.edge, f.edge))
    }

    fn apply(
        &mut self,
        g: &Multigraph,
        e: OrientedEdge,
        f: OrientedEdge,
        d: Decision,
    ) -> Result<(ProofNode, TypeCounts)> {
        let scope = Scope::Monomial(gamma(g, e.edge, f.edge));
        match d {
            Decision::Reduce(_) => Err(Error::Precondition("reduction at the all-ones monomial".into())),
            Decision::Loop(edge) => {
                let counts = self.counts(g, e, f)?;
                let node =
                    self.finish(g, e, f, scope, Rule::Loop { edge }, counts.clone(), vec![], &[], vec![], None)?;
                Ok((node, counts))
            }
            Decision::Base(found) => base::base_node(self, g, e, f, scope, found),
            Decision::TrivialDegree => {
                let counts = self.counts(g, e, f)?;
                let node =
                    self.finish(g, e, f, scope, Rule::TrivialDegree, counts.clone(), vec![], &[], vec![], None)?;
                Ok((node, counts))
            }
            Decision::BlockSplit(v) => reduce::block_split_node(self, g, e, f, v),
            Decision::Case2(v) => case2::case2_node(self, g, e, f, v),
            Decision::Case3(v) => case3::case3_node(self, g, e, f, v),
            Decision::Case4(v) => case4::case4_node(self, g, e, f, v),
            Decision::Direct => base::direct_node(self, g, e, f, scope),
        }
    }
}

/// Support of both sides of the identity, in order.
pub(crate) fn identity_support(polys: &TypePolynomials) -> Vec<ExponentVector> {
    let support: BTreeSet<ExponentVector> =
        polys.left().terms().chain(polys.right().terms()).map(|(m, _)| m.clone()).collect();
    support.into_iter().collect()
}

/// Runs the prover on every monomial of either side of the identity, or
/// emits a single whole-identity node for a tabulated graph.
pub fn prove(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Certificate> {
    check_marked_pair(g, e, f)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut prover = Prover::default();
    let proofs = match base::match_base(g, e, f) {
        Some(found) => vec![base::base_node(&mut prover, g, e, f, Scope::Identity, found)?.0],
        None => {
            let polys = TypePolynomials::new(g, e, f)?;
            let mut out = Vec::new();
            for alpha in identity_support(&polys) {
                out.push(prover.prove_monomial(g, e, f, &alpha)?.0);
            }
            out
        }
    };
    Ok(Certificate { fingerprint: g.fingerprint(), e, f, proofs })
}
