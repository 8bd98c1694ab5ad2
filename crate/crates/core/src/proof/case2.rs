//! Vertices of degree two.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::pairs::gamma;
use super::{
    Case2Kind, ContributionPair, PairType, PolyCheck, ProofNode, Prover, Rule, Scope, TypeCounts, TypePolynomials,
};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, OrientedEdge, VertexId};
use crate::polynomial::{ExponentVector, Polynomial};
use crate::spanning::{check_marked_pair, tree_polynomial};

const RULE: &str = "case2";

fn fail(detail: impl Into<String>) -> Error {
    Error::Correspondence { rule: RULE, detail: detail.into() }
}

/// The two edges at `v` and how many of them are marked.
pub(crate) fn classify(
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    v: VertexId,
) -> Result<([EdgeId; 2], Case2Kind)> {
    let d = g.degree(v)?;
    let at = g.incident_edges(v);
    if d != 2 || at.len() != 2 {
        return Err(Error::WrongDegree { vertex: v, actual: d, expected: 2 });
    }
    let ids = [at[0].id, at[1].id];
    let marked = ids.iter().filter(|&&x| x == e.edge || x == f.edge).count();
    let kind = match marked {
        0 => Case2Kind::Neither,
        1 => Case2Kind::One,
        _ => Case2Kind::Both,
    };
    Ok((ids, kind))
}

/// `T_e^f = T(G - v)`, `T_f^e = T(G - v)`, `T^ef = 0` and the signed forest
/// polynomials when both marked edges meet `v`.
pub(crate) fn both_identities(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<Vec<PolyCheck>> {
    let w = g.delete_vertex(v)?;
    let tw = tree_polynomial(&w);
    let p = TypePolynomials::new(g, e, f)?;
    // the cycle is e then f; it agrees with f exactly when one points in and the other out
    let coherent = (e.head == v) != (f.head == v);
    let (plus, minus) = if coherent { (tw.clone(), Polynomial::zero()) } else { (Polynomial::zero(), tw.clone()) };
    Ok(vec![
        PolyCheck::new("Te^f = T(G-v)", p.contract_e_delete_f, tw.clone()),
        PolyCheck::new("Tf^e = T(G-v)", p.contract_f_delete_e, tw),
        PolyCheck::new("T^ef = 0", p.delete_both, Polynomial::zero()),
        PolyCheck::new("X+ at v", p.x_plus, plus),
        PolyCheck::new("X- at v", p.x_minus, minus),
    ])
}

/// `[y^gamma] T(G - v)^2`.
pub(crate) fn square_count(g: &Multigraph, v: VertexId) -> Result<BigInt> {
    let w = g.delete_vertex(v)?;
    let tw = tree_polynomial(&w);
    let ones = ExponentVector::from_pairs(w.edge_ids().map(|id| (id, 1)));
    Ok(Polynomial::product_coefficient(&tw, &tw, &ones))
}

fn with(s: &crate::multigraph::EdgeSet, x: EdgeId) -> crate::multigraph::EdgeSet {
    let mut t = s.clone();
    t.insert(x);
    t
}

fn without(s: &crate::multigraph::EdgeSet, x: EdgeId) -> crate::multigraph::EdgeSet {
    let mut t = s.clone();
    t.remove(&x);
    t
}

pub(crate) fn case2_node(
    prover: &mut Prover,
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    v: VertexId,
) -> Result<(ProofNode, TypeCounts)> {
    check_marked_pair(g, e, f)?;
    let ([g1, g2], kind) = classify(g, e, f, v)?;
    let scope = Scope::Monomial(gamma(g, e.edge, f.edge));
    let pairs = prover.pairs(g, e, f)?;
    let counts = TypeCounts::from_pairs(&pairs);
    let rule = Rule::Case2 { vertex: v, kind };
    match kind {
        Case2Kind::Neither => {
            let w = g.delete_vertex(v)?;
            let lifted: BTreeSet<ContributionPair> = prover
                .pairs(&w, e, f)?
                .iter()
                .flat_map(|p| {
                    [
                        ContributionPair { a: with(&p.a, g1), b: with(&p.b, g2), ty: p.ty },
                        ContributionPair { a: with(&p.a, g2), b: with(&p.b, g1), ty: p.ty },
                    ]
                })
                .collect();
            let own: BTreeSet<ContributionPair> = pairs.iter().cloned().collect();
            if own != lifted || own.len() != pairs.len() {
                return Err(fail("pairs of G are not the two lifts of pairs of G - v"));
            }
            let (child, cc) = prover.prove_gamma(&w, e, f)?;
            let node = prover.finish(g, e, f, scope, rule, counts.clone(), vec![child], &[cc], vec![], None)?;
            Ok((node, counts))
        }
        Case2Kind::One => {
            let (marked_is_e, other) = if g1 == e.edge || g2 == e.edge {
                (true, if g1 == e.edge { g2 } else { g1 })
            } else {
                (false, if g1 == f.edge { g2 } else { g1 })
            };
            if pairs.iter().any(|p| p.ty.is_forest_type()) {
                return Err(fail("forest-type pair at a degree-two vertex on one marked edge"));
            }
            let mut image = BTreeSet::new();
            for p in pairs.iter().filter(|p| p.ty == PairType::SplitTrees) {
                let q = if marked_is_e {
                    ContributionPair { a: without(&p.b, other), b: with(&p.a, other), ty: PairType::JoinedTrees }
                } else {
                    ContributionPair { a: without(&p.a, other), b: with(&p.b, other), ty: PairType::JoinedTrees }
                };
                if !image.insert(q) {
                    return Err(fail("tree-product map is not injective"));
                }
            }
            let joined: BTreeSet<ContributionPair> =
                pairs.iter().filter(|p| p.ty == PairType::JoinedTrees).cloned().collect();
            if image != joined {
                return Err(fail("tree-product map is not onto the joined-tree pairs"));
            }
            let node = prover.finish(g, e, f, scope, rule, counts.clone(), vec![], &[], vec![], None)?;
            Ok((node, counts))
        }
        Case2Kind::Both => {
            let identities = both_identities(g, e, f, v)?;
            let sq = square_count(g, v)?;
            let node = prover.finish(g, e, f, scope, rule, counts.clone(), vec![], &[], identities, Some(&sq))?;
            Ok((node, counts))
        }
    }
}

/// Applies the degree-two rule at `v` and proves what remains.
pub fn case2_reduce(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, v: VertexId) -> Result<ProofNode> {
    Ok(case2_node(&mut Prover::default(), g, e, f, v)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(edge: u32, tail: u32, head: u32) -> OrientedEdge {
        OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head))
    }

    #[test]
    fn four_cycle_one_marked_edge() {
        let c4 = Multigraph::from_edges(4, &[(1, 0, 1), (2, 1, 2), (3, 2, 3), (4, 3, 0)]).unwrap();
        let node = case2_reduce(&c4, o(1, 0, 1), o(3, 2, 3), VertexId(1)).unwrap();
        assert_eq!(node.rule, Rule::Case2 { vertex: VertexId(1), kind: Case2Kind::One });
        assert!(node.equalities.iter().all(|q| q.holds()));
    }

    #[test]
    fn both_marked_at_a_path_vertex() {
        // path 0-1-2 of marked edges beside a double edge 0-2
        let g = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2), (3, 0, 2), (4, 0, 2)]).unwrap();
        for f in [o(2, 1, 2), o(2, 2, 1)] {
            let node = case2_reduce(&g, o(1, 0, 1), f, VertexId(1)).unwrap();
            assert_eq!(node.rule.name(), "case2-iii");
            assert_eq!(node.lhs, BigInt::from(2));
            assert_eq!(node.rhs, BigInt::from(2));
            assert!(node.identities.iter().all(|p| p.lhs == p.rhs));
        }
    }

    #[test]
    fn neither_marked_recurses() {
        // K4 plus a path 0-4-3
        let g = Multigraph::from_edges(
            5,
            &[(1, 0, 1), (2, 1, 2), (3, 1, 3), (4, 0, 2), (5, 2, 3), (6, 0, 3), (7, 0, 4), (8, 4, 3)],
        )
        .unwrap();
        let node = case2_reduce(&g, o(1, 0, 1), o(2, 2, 1), VertexId(4)).unwrap();
        assert_eq!(node.rule.name(), "case2-i");
        assert_eq!(node.children.len(), 1);
        assert_eq!(node.lhs, node.rhs);
        assert_eq!(node.lhs, BigInt::from(8));
    }

    #[test]
    fn rejects_wrong_degree() {
        let tri = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2), (3, 0, 2), (4, 0, 1)]).unwrap();
        assert!(matches!(case2_reduce(&tri, o(1, 0, 1), o(2, 1, 2), VertexId(0)), Err(Error::WrongDegree { .. })));
    }
}
