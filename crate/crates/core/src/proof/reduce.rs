//! Monomial reductions and the cut-vertex split.

use num_bigint::BigInt;

use super::{PolyCheck, ProofNode, Prover, Rule, Scope, TypeCounts, TypePolynomials};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, OrientedEdge, VertexId};
use crate::polynomial::{ExponentVector, Polynomial};
use crate::spanning::{check_marked_pair, minor_polynomial, tree_polynomial};

use super::pairs::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStep {
    /// Exponent 0: the edge lies in neither side of any contributing pair.
    Delete(EdgeId),
    /// Exponent 2: the edge lies in both sides of every contributing pair.
    Contract(EdgeId),
}

/// A monomial transported down to the all-ones monomial of a minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub steps: Vec<ReductionStep>,
    pub graph: Multigraph,
    pub e: OrientedEdge,
    pub f: OrientedEdge,
    /// All-ones on the minor's edges other than `e`, `f`.
    pub alpha: ExponentVector,
}

pub(crate) fn check_exponents(g: &Multigraph, e: EdgeId, f: EdgeId, alpha: &ExponentVector) -> Result<()> {
    if alpha.get(e) != 0 || alpha.get(f) != 0 {
        return Err(Error::InvalidExponents("marked edges must have exponent 0".into()));
    }
    for (id, k) in alpha.iter() {
        if !g.has_edge(id) {
            return Err(Error::InvalidExponents(format!("edge {id} is not in the graph")));
        }
        if k > 2 {
            return Err(Error::InvalidExponents(format!("edge {id} has exponent {k} > 2")));
        }
    }
    Ok(())
}

/// The smallest-id edge other than `e`, `f` whose exponent is 0 or 2.
pub(crate) fn next_step(g: &Multigraph, e: EdgeId, f: EdgeId, alpha: &ExponentVector) -> Option<ReductionStep> {
    g.edge_ids().filter(|&id| id != e && id != f).find_map(|id| match alpha.get(id) {
        0 => Some(ReductionStep::Delete(id)),
        2 => Some(ReductionStep::Contract(id)),
        _ => None,
    })
}

/// Deletes exponent-0 edges and contracts exponent-2 edges in id order.
/// Refuses to delete a cut edge.
pub fn reduce_alpha(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, alpha: &ExponentVector) -> Result<Reduction> {
    check_marked_pair(g, e, f)?;
    check_exponents(g, e.edge, f.edge, alpha)?;
    let (mut g, mut e, mut f, mut alpha) = (g.clone(), e, f, alpha.clone());
    let mut steps = Vec::new();
    while let Some(step) = next_step(&g, e.edge, f.edge, &alpha) {
        match step {
            ReductionStep::Delete(x) => {
                let h = g.delete_edge(x)?;
                if h.component_count() != g.component_count() {
                    return Err(Error::Precondition(format!("deleting cut edge {x}")));
                }
                g = h;
            }
            ReductionStep::Contract(x) => {
                let edge = g.edge(x)?;
                g = g.contract_edge(x)?;
                e = e.after_merge(edge.v, edge.u);
                f = f.after_merge(edge.v, edge.u);
                alpha = alpha.without(x);
            }
        }
        steps.push(step);
    }
    Ok(Reduction { steps, graph: g, e, f, alpha })
}

/// The two pieces at a cut vertex with their verified factorizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSplit {
    pub vertex: VertexId,
    /// The piece holding `e`.
    pub h: Multigraph,
    pub j: Multigraph,
    /// True when `f` lies in `j`.
    pub separated: bool,
    pub identities: Vec<PolyCheck>,
}

/// Polynomial identities asserted by a split of `g` into `h` (holding `e`)
/// and `j`.
pub(crate) fn block_identities(
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    h: &Multigraph,
    j: &Multigraph,
    separated: bool,
) -> Result<Vec<PolyCheck>> {
    let tj = tree_polynomial(j);
    let whole = TypePolynomials::new(g, e, f)?;
    let mut out = vec![PolyCheck::new("T(G) = T(H)T(J)", tree_polynomial(g), &tree_polynomial(h) * &tj)];
    if !separated {
        let piece = TypePolynomials::new(h, e, f)?;
        out.push(PolyCheck::new("X+(G) = X+(H)T(J)", whole.x_plus, &piece.x_plus * &tj));
        out.push(PolyCheck::new("X-(G) = X-(H)T(J)", whole.x_minus, &piece.x_minus * &tj));
        return Ok(out);
    }
    let s = |ids: &[EdgeId]| ids.iter().copied().collect::<EdgeSet>();
    let none = s(&[]);
    let (ee, ff) = (s(&[e.edge]), s(&[f.edge]));
    let h_contract = minor_polynomial(h, &ee, &none)?;
    let h_delete = minor_polynomial(h, &none, &ee)?;
    let j_contract = minor_polynomial(j, &ff, &none)?;
    let j_delete = minor_polynomial(j, &none, &ff)?;
    out.extend([
        PolyCheck::new("X+(G) = 0", whole.x_plus, Polynomial::zero()),
        PolyCheck::new("X-(G) = 0", whole.x_minus, Polynomial::zero()),
        PolyCheck::new("Te^f(G) = Te(H)T^f(J)", whole.contract_e_delete_f, &h_contract * &j_delete),
        PolyCheck::new("Tf^e(G) = T^e(H)Tf(J)", whole.contract_f_delete_e, &h_delete * &j_contract),
        PolyCheck::new("Tef(G) = Te(H)Tf(J)", whole.contract_both, &h_contract * &j_contract),
        PolyCheck::new("T^ef(G) = T^e(H)T^f(J)", whole.delete_both, &h_delete * &j_delete),
    ]);
    Ok(out)
}

/// `[y^(1_J)] T(J)^2`: ordered pairs of spanning trees of `J` partitioning its
/// edges.
pub(crate) fn square_factor(j: &Multigraph) -> BigInt {
    let tj = tree_polynomial(j);
    let ones = ExponentVector::from_pairs(j.edge_ids().map(|id| (id, 1)));
    Polynomial::product_coefficient(&tj, &tj, &ones)
}

fn split_at_vertex(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<BlockSplit> {
    check_marked_pair(g, e, f)?;
    let (h, j) = g.split_at(v, e.edge)?;
    let separated = !h.has_edge(f.edge);
    let identities = block_identities(g, e, f, &h, &j, separated)?;
    if let Some(bad) = identities.iter().find(|p| p.lhs != p.rhs) {
        return Err(Error::Correspondence { rule: "block-split", detail: bad.name.clone() });
    }
    Ok(BlockSplit { vertex: v, h, j, separated, identities })
}

/// Splits at the smallest cut vertex and verifies the factorizations.
pub fn split_blocks(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<BlockSplit> {
    let blocks = g.blocks_and_cut_vertices()?;
    let v = *blocks.cut_vertices.iter().next().ok_or(Error::NoCutVertex)?;
    split_at_vertex(g, e, f, v)
}

pub(crate) fn block_split_node(
    prover: &mut Prover,
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    v: VertexId,
) -> Result<(ProofNode, TypeCounts)> {
    let split = split_at_vertex(g, e, f, v)?;
    let scope = Scope::Monomial(gamma(g, e.edge, f.edge));
    let counts = prover.counts(g, e, f)?;
    let factor = square_factor(&split.j);
    let rule = Rule::BlockSplit { vertex: v, separated: split.separated, factor };
    let (children, child_counts) = if split.separated {
        (vec![], vec![])
    } else {
        let (child, cc) = prover.prove_gamma(&split.h, e, f)?;
        (vec![child], vec![cc])
    };
    let node = prover.finish(g, e, f, scope, rule, counts.clone(), children, &child_counts, split.identities, None)?;
    Ok((node, counts))
}
