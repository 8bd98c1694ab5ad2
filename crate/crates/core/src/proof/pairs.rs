//! Contribution pairs `(A, B)` of the expanded identity and their six types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, OrientedEdge};
use crate::polynomial::{ExponentVector, Polynomial};
use crate::spanning::{
    check_marked_pair, forest_cycle, is_spanning_tree, minor_polynomial, minor_trees, x_forests, x_polynomials, Sign,
};

/// Which product of the identity a pair is counted in. The first three make up
/// the left side, the last three the right side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairType {
    /// `A + e` and `B + f` are spanning trees.
    SplitTrees,
    PlusMinus,
    MinusPlus,
    /// `A + e + f` and `B` are spanning trees.
    JoinedTrees,
    PlusPlus,
    MinusMinus,
}

/// One side of an ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl PairType {
    pub const ALL: [PairType; 6] = [
        PairType::SplitTrees,
        PairType::PlusMinus,
        PairType::MinusPlus,
        PairType::JoinedTrees,
        PairType::PlusPlus,
        PairType::MinusMinus,
    ];

    pub fn is_left(self) -> bool {
        matches!(self, PairType::SplitTrees | PairType::PlusMinus | PairType::MinusPlus)
    }

    pub fn is_forest_type(self) -> bool {
        self.signs().is_some()
    }

    pub fn is_mixed(self) -> bool {
        matches!(self, PairType::PlusMinus | PairType::MinusPlus)
    }

    pub fn signs(self) -> Option<(Sign, Sign)> {
        match self {
            PairType::PlusMinus => Some((Sign::Plus, Sign::Minus)),
            PairType::MinusPlus => Some((Sign::Minus, Sign::Plus)),
            PairType::PlusPlus => Some((Sign::Plus, Sign::Plus)),
            PairType::MinusMinus => Some((Sign::Minus, Sign::Minus)),
            _ => None,
        }
    }

    pub fn from_signs(a: Sign, b: Sign) -> PairType {
        match (a, b) {
            (Sign::Plus, Sign::Minus) => PairType::PlusMinus,
            (Sign::Minus, Sign::Plus) => PairType::MinusPlus,
            (Sign::Plus, Sign::Plus) => PairType::PlusPlus,
            (Sign::Minus, Sign::Minus) => PairType::MinusMinus,
        }
    }

    /// The same forest type with the sign on `side` reversed.
    pub fn flip(self, side: Side) -> Option<PairType> {
        let (a, b) = self.signs()?;
        Some(match side {
            Side::A => PairType::from_signs(a.flipped(), b),
            Side::B => PairType::from_signs(a, b.flipped()),
        })
    }

    /// Edges that turn `side` of a pair of this type into a spanning tree.
    pub fn completion(self, side: Side, set: &EdgeSet, e: EdgeId, f: EdgeId) -> EdgeSet {
        let mut out = set.clone();
        match (self, side) {
            (PairType::SplitTrees, Side::A) => {
                out.insert(e);
            }
            (PairType::SplitTrees, Side::B) => {
                out.insert(f);
            }
            (PairType::JoinedTrees, Side::A) => {
                out.insert(e);
                out.insert(f);
            }
            _ => {}
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            PairType::SplitTrees => "Te^f*Tf^e",
            PairType::PlusMinus => "X+X-",
            PairType::MinusPlus => "X-X+",
            PairType::JoinedTrees => "Tef*T^ef",
            PairType::PlusPlus => "X+X+",
            PairType::MinusMinus => "X-X-",
        }
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered partition of `E - {e, f}` counted under one type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContributionPair {
    pub a: EdgeSet,
    pub b: EdgeSet,
    pub ty: PairType,
}

impl ContributionPair {
    pub fn side(&self, side: Side) -> &EdgeSet {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    /// Builds a pair from the side holding `s` and the opposite side `o`.
    pub fn from_sides(side: Side, s: EdgeSet, o: EdgeSet, ty: PairType) -> Self {
        match side {
            Side::A => ContributionPair { a: s, b: o, ty },
            Side::B => ContributionPair { a: o, b: s, ty },
        }
    }
}

/// The six polynomials of the identity for one marked graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypePolynomials {
    pub contract_e_delete_f: Polynomial,
    pub contract_f_delete_e: Polynomial,
    pub contract_both: Polynomial,
    pub delete_both: Polynomial,
    pub x_plus: Polynomial,
    pub x_minus: Polynomial,
}

impl TypePolynomials {
    pub fn new(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Self> {
        check_marked_pair(g, e, f)?;
        let s = |ids: &[EdgeId]| ids.iter().copied().collect::<EdgeSet>();
        let (x_plus, x_minus) = x_polynomials(g, e, f)?;
        Ok(TypePolynomials {
            contract_e_delete_f: minor_polynomial(g, &s(&[e.edge]), &s(&[f.edge]))?,
            contract_f_delete_e: minor_polynomial(g, &s(&[f.edge]), &s(&[e.edge]))?,
            contract_both: minor_polynomial(g, &s(&[e.edge, f.edge]), &s(&[]))?,
            delete_both: minor_polynomial(g, &s(&[]), &s(&[e.edge, f.edge]))?,
            x_plus,
            x_minus,
        })
    }

    /// The two factors whose product counts pairs of type `t`.
    pub fn factors(&self, t: PairType) -> (&Polynomial, &Polynomial) {
        match t {
            PairType::SplitTrees => (&self.contract_e_delete_f, &self.contract_f_delete_e),
            PairType::PlusMinus => (&self.x_plus, &self.x_minus),
            PairType::MinusPlus => (&self.x_minus, &self.x_plus),
            PairType::JoinedTrees => (&self.contract_both, &self.delete_both),
            PairType::PlusPlus => (&self.x_plus, &self.x_plus),
            PairType::MinusMinus => (&self.x_minus, &self.x_minus),
        }
    }

    pub fn product(&self, t: PairType) -> Polynomial {
        let (p, q) = self.factors(t);
        p * q
    }

    pub fn count(&self, t: PairType, alpha: &ExponentVector) -> BigInt {
        let (p, q) = self.factors(t);
        Polynomial::product_coefficient(p, q, alpha)
    }

    /// `T_e^f T_f^e + 2 X+ X-`
    pub fn left(&self) -> Polynomial {
        PairType::ALL.iter().filter(|t| t.is_left()).map(|&t| self.product(t)).sum()
    }

    /// `T_ef T^ef + (X+)^2 + (X-)^2`
    pub fn right(&self) -> Polynomial {
        PairType::ALL.iter().filter(|t| !t.is_left()).map(|&t| self.product(t)).sum()
    }

    pub fn left_at(&self, alpha: &ExponentVector) -> BigInt {
        PairType::ALL.iter().filter(|t| t.is_left()).map(|&t| self.count(t, alpha)).sum()
    }

    pub fn right_at(&self, alpha: &ExponentVector) -> BigInt {
        PairType::ALL.iter().filter(|t| !t.is_left()).map(|&t| self.count(t, alpha)).sum()
    }
}

/// The all-ones exponent on `E - {e, f}`.
pub fn gamma(g: &Multigraph, e: EdgeId, f: EdgeId) -> ExponentVector {
    ExponentVector::from_pairs(g.edge_ids().filter(|&id| id != e && id != f).map(|id| (id, 1)))
}

fn others(g: &Multigraph, e: EdgeId, f: EdgeId) -> EdgeSet {
    g.edge_ids().filter(|&id| id != e && id != f).collect()
}

/// Every contribution pair at the all-ones monomial, ordered by type then `A`.
pub fn contributions(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Vec<ContributionPair>> {
    check_marked_pair(g, e, f)?;
    let rest = others(g, e.edge, f.edge);
    let s = |ids: &[EdgeId]| ids.iter().copied().collect::<EdgeSet>();
    let (ee, ff) = (e.edge, f.edge);
    let mut classes: BTreeMap<&str, Vec<EdgeSet>> = BTreeMap::new();
    classes.insert("e", minor_trees(g, &s(&[ee]), &s(&[ff]))?);
    classes.insert("f", minor_trees(g, &s(&[ff]), &s(&[ee]))?);
    classes.insert("ef", minor_trees(g, &s(&[ee, ff]), &s(&[]))?);
    classes.insert("none", minor_trees(g, &s(&[]), &s(&[ee, ff]))?);
    let witnesses = x_forests(g, e, f)?;
    classes.insert("+", witnesses.iter().filter(|w| w.sign == Sign::Plus).map(|w| w.forest.clone()).collect());
    classes.insert("-", witnesses.iter().filter(|w| w.sign == Sign::Minus).map(|w| w.forest.clone()).collect());
    let keys = |t: PairType| match t {
        PairType::SplitTrees => ("e", "f"),
        PairType::PlusMinus => ("+", "-"),
        PairType::MinusPlus => ("-", "+"),
        PairType::JoinedTrees => ("ef", "none"),
        PairType::PlusPlus => ("+", "+"),
        PairType::MinusMinus => ("-", "-"),
    };
    let mut out = Vec::new();
    for t in PairType::ALL {
        let (left, right) = keys(t);
        let right: BTreeSet<&EdgeSet> = classes[right].iter().collect();
        for a in &classes[left] {
            let b: EdgeSet = rest.difference(a).copied().collect();
            if right.contains(&b) {
                out.push(ContributionPair { a: a.clone(), b, ty: t });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(LHS, RHS)` at the all-ones monomial, counted over contribution pairs.
pub fn lhs_rhs_counts(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<(BigInt, BigInt)> {
    let pairs = contributions(g, e, f)?;
    let left = pairs.iter().filter(|p| p.ty.is_left()).count();
    Ok((BigInt::from(left), BigInt::from(pairs.len() - left)))
}

pub(crate) fn forest_sign(g: &Multigraph, s: &EdgeSet, e: OrientedEdge, f: OrientedEdge) -> Option<Sign> {
    let with = |x: EdgeId| {
        let mut t = s.clone();
        t.insert(x);
        t
    };
    if is_spanning_tree(g, &with(e.edge)) && is_spanning_tree(g, &with(f.edge)) {
        forest_cycle(g, s, e, f).map(|(_, sign)| sign)
    } else {
        None
    }
}

/// All types under which `(A, B)` contributes; empty when it contributes to
/// neither side.
pub fn classify_pair(
    g: &Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    a: &EdgeSet,
    b: &EdgeSet,
) -> Result<BTreeSet<PairType>> {
    check_marked_pair(g, e, f)?;
    let rest = others(g, e.edge, f.edge);
    let union: EdgeSet = a.union(b).copied().collect();
    if a.intersection(b).next().is_some() || union != rest {
        return Err(Error::NotAPartition);
    }
    let plus = |s: &EdgeSet, extra: &[EdgeId]| {
        let mut t = s.clone();
        t.extend(extra.iter().copied());
        t
    };
    let mut out = BTreeSet::new();
    if is_spanning_tree(g, &plus(a, &[e.edge])) && is_spanning_tree(g, &plus(b, &[f.edge])) {
        out.insert(PairType::SplitTrees);
    }
    if is_spanning_tree(g, &plus(a, &[e.edge, f.edge])) && is_spanning_tree(g, b) {
        out.insert(PairType::JoinedTrees);
    }
    if let (Some(sa), Some(sb)) = (forest_sign(g, a, e, f), forest_sign(g, b, e, f)) {
        out.insert(PairType::from_signs(sa, sb));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::VertexId;

    fn set(ids: &[u32]) -> EdgeSet {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    fn o(edge: u32, tail: u32, head: u32) -> OrientedEdge {
        OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head))
    }

    fn k4() -> Multigraph {
        Multigraph::from_edges(4, &[(1, 0, 1), (2, 1, 2), (3, 1, 3), (4, 0, 2), (5, 2, 3), (6, 0, 3)]).unwrap()
    }

    #[test]
    fn classify_examples() {
        let types = classify_pair(&k4(), o(1, 0, 1), o(2, 2, 1), &set(&[3, 4]), &set(&[5, 6])).unwrap();
        assert!(types.contains(&PairType::MinusMinus));

        let types = classify_pair(&k4(), o(1, 0, 1), o(5, 3, 2), &set(&[3, 4]), &set(&[2, 6])).unwrap();
        assert!(types.contains(&PairType::PlusMinus));

        let p3 = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
        assert!(classify_pair(&p3, o(1, 0, 1), o(2, 1, 2), &set(&[]), &set(&[])).unwrap().is_empty());

        assert_eq!(classify_pair(&k4(), o(1, 0, 1), o(2, 2, 1), &set(&[3]), &set(&[5, 6])), Err(Error::NotAPartition));
    }

    #[test]
    fn count_examples() {
        let c2 = Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap();
        let one = BigInt::from(1);
        assert_eq!(lhs_rhs_counts(&c2, o(1, 0, 1), o(2, 1, 0)).unwrap(), (one.clone(), one));
        let four = BigInt::from(4);
        assert_eq!(lhs_rhs_counts(&k4(), o(1, 0, 1), o(2, 2, 1)).unwrap(), (four.clone(), four));
        let p3 = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
        let zero = BigInt::from(0);
        assert_eq!(lhs_rhs_counts(&p3, o(1, 0, 1), o(2, 1, 2)).unwrap(), (zero.clone(), zero));
    }

    #[test]
    fn enumeration_agrees_with_classification_and_polynomials() {
        let g = k4();
        for (e, f) in [(o(1, 0, 1), o(2, 2, 1)), (o(1, 0, 1), o(5, 3, 2)), (o(3, 3, 1), o(4, 0, 2))] {
            let pairs = contributions(&g, e, f).unwrap();
            for p in &pairs {
                assert!(classify_pair(&g, e, f, &p.a, &p.b).unwrap().contains(&p.ty));
            }
            let polys = TypePolynomials::new(&g, e, f).unwrap();
            let gam = gamma(&g, e.edge, f.edge);
            for t in PairType::ALL {
                let n = pairs.iter().filter(|p| p.ty == t).count();
                assert_eq!(polys.count(t, &gam), BigInt::from(n), "{t}");
            }
        }
    }

    #[test]
    fn completions_and_flips() {
        let s = set(&[3]);
        let e = EdgeId(1);
        let f = EdgeId(2);
        assert_eq!(PairType::SplitTrees.completion(Side::A, &s, e, f), set(&[1, 3]));
        assert_eq!(PairType::SplitTrees.completion(Side::B, &s, e, f), set(&[2, 3]));
        assert_eq!(PairType::JoinedTrees.completion(Side::A, &s, e, f), set(&[1, 2, 3]));
        assert_eq!(PairType::JoinedTrees.completion(Side::B, &s, e, f), s);
        assert_eq!(PairType::PlusMinus.flip(Side::A), Some(PairType::MinusMinus));
        assert_eq!(PairType::PlusMinus.flip(Side::B), Some(PairType::PlusPlus));
        assert_eq!(PairType::SplitTrees.flip(Side::A), None);
    }
}
