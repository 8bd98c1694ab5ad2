//! Effective conductance, the Rayleigh difference, and the symbolic verifier
//! for the square identity.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, OrientedEdge};
use crate::polynomial::{Polynomial, RationalWeights};
use crate::spanning::{check_marked_pair, minor_polynomial, x_polynomials};

/// The four two-edge minors of `G` for a pair `e != f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMinors {
    /// `(G \ f) / e`
    pub contract_e_delete_f: Polynomial,
    /// `(G \ e) / f`
    pub contract_f_delete_e: Polynomial,
    /// `G / {e, f}`
    pub contract_both: Polynomial,
    /// `G \ {e, f}`
    pub delete_both: Polynomial,
}

impl PairMinors {
    pub fn new(g: &Multigraph, e: EdgeId, f: EdgeId) -> Result<Self> {
        if e == f {
            return Err(Error::SameEdge(e));
        }
        let s = |ids: &[EdgeId]| ids.iter().copied().collect::<EdgeSet>();
        Ok(PairMinors {
            contract_e_delete_f: minor_polynomial(g, &s(&[e]), &s(&[f]))?,
            contract_f_delete_e: minor_polynomial(g, &s(&[f]), &s(&[e]))?,
            contract_both: minor_polynomial(g, &s(&[e, f]), &s(&[]))?,
            delete_both: minor_polynomial(g, &s(&[]), &s(&[e, f]))?,
        })
    }

    /// `T_e^f T_f^e - T_ef T^ef`.
    pub fn difference(&self) -> Polynomial {
        &self.contract_e_delete_f * &self.contract_f_delete_e - &self.contract_both * &self.delete_both
    }
}

/// Everything the verifier computes for one oriented pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayleighReport {
    pub e: OrientedEdge,
    pub f: OrientedEdge,
    pub minors: PairMinors,
    pub x_plus: Polynomial,
    pub x_minus: Polynomial,
    /// `T_e^f T_f^e - T_ef T^ef`
    pub difference: Polynomial,
    /// `(X+ - X-)^2`
    pub square: Polynomial,
    /// `T_e^f T_f^e + 2 X+ X-`
    pub expanded_lhs: Polynomial,
    /// `T_ef T^ef + (X+)^2 + (X-)^2`
    pub expanded_rhs: Polynomial,
    /// Difference equals square, and the expanded sides agree.
    pub verdict: bool,
}

impl RayleighReport {
    /// Structured text with polynomials named by `name`.
    pub fn render_with(&self, name: &dyn Fn(EdgeId) -> String) -> String {
        let mut out = String::new();
        let rows: [(&str, &Polynomial); 10] = [
            ("contract e, delete f", &self.minors.contract_e_delete_f),
            ("contract f, delete e", &self.minors.contract_f_delete_e),
            ("contract e and f", &self.minors.contract_both),
            ("delete e and f", &self.minors.delete_both),
            ("X+", &self.x_plus),
            ("X-", &self.x_minus),
            ("difference", &self.difference),
            ("square", &self.square),
            ("expanded lhs", &self.expanded_lhs),
            ("expanded rhs", &self.expanded_rhs),
        ];
        let _ = writeln!(out, "e: {}({}->{})", name(self.e.edge), self.e.tail, self.e.head);
        let _ = writeln!(out, "f: {}({}->{})", name(self.f.edge), self.f.tail, self.f.head);
        for (label, p) in rows {
            let _ = writeln!(out, "{label}: {}", p.display_with(name));
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

impl std::fmt::Display for RayleighReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render_with(&|g| format!("y{g}")))
    }
}

fn require_connected(g: &Multigraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

/// `T(G \ e; w) / T(G / e; w)`; zero when `e` is a cut edge.
pub fn effective_conductance(g: &Multigraph, e: EdgeId, w: &RationalWeights) -> Result<BigRational> {
    require_connected(g)?;
    if g.is_loop(e)? {
        return Err(Error::LoopEdge(e));
    }
    w.check_positive(g.edge_ids().filter(|&id| id != e))?;
    let none = EdgeSet::new();
    let only_e = EdgeSet::from([e]);
    let num = minor_polynomial(g, &none, &only_e)?.evaluate(w)?;
    let den = minor_polynomial(g, &only_e, &none)?.evaluate(w)?;
    Ok(num / den)
}

/// The exact polynomial `T_e^f T_f^e - T_ef T^ef`.
pub fn rayleigh_difference(g: &Multigraph, e: EdgeId, f: EdgeId) -> Result<Polynomial> {
    Ok(PairMinors::new(g, e, f)?.difference())
}

/// Computes every polynomial of the identity and compares canonical forms.
pub fn verify_rayleigh_identity(g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<RayleighReport> {
    check_marked_pair(g, e, f)?;
    require_connected(g)?;
    let minors = PairMinors::new(g, e.edge, f.edge)?;
    let (x_plus, x_minus) = x_polynomials(g, e, f)?;
    let difference = minors.difference();
    let gap = &x_plus - &x_minus;
    let square = &gap * &gap;
    let two = Polynomial::constant(2.into());
    let expanded_lhs = &minors.contract_e_delete_f * &minors.contract_f_delete_e + &two * &(&x_plus * &x_minus);
    let expanded_rhs = &minors.contract_both * &minors.delete_both + &x_plus * &x_plus + &x_minus * &x_minus;
    let verdict = difference == square && expanded_lhs == expanded_rhs;
    Ok(RayleighReport { e, f, minors, x_plus, x_minus, difference, square, expanded_lhs, expanded_rhs, verdict })
}

/// `Y_e` as a function of `y_f` alone: `(a + b y_f) / (c + d y_f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFractional {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl LinearFractional {
    pub fn at(&self, y: &BigRational) -> BigRational {
        (&self.a + &self.b * y) / (&self.c + &self.d * y)
    }

    pub fn denominator(&self, y: &BigRational) -> BigRational {
        &self.c + &self.d * y
    }
}

/// Evaluates the four minors at `w` (the weight of `f` is ignored).
pub fn conductance_in_f(g: &Multigraph, e: EdgeId, f: EdgeId, w: &RationalWeights) -> Result<LinearFractional> {
    let m = PairMinors::new(g, e, f)?;
    Ok(LinearFractional {
        a: m.delete_both.evaluate(w)?,
        b: m.contract_f_delete_e.evaluate(w)?,
        c: m.contract_e_delete_f.evaluate(w)?,
        d: m.contract_both.evaluate(w)?,
    })
}

/// `(Y_e at w, Y_e at w with y_f raised to raised_f)`.
pub fn monotonicity_probe(
    g: &Multigraph,
    e: EdgeId,
    f: EdgeId,
    w: &RationalWeights,
    raised_f: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if e == f {
        return Err(Error::SameEdge(e));
    }
    g.edge(f)?;
    let current = w.get(f).ok_or(Error::MissingWeight(f))?;
    if !(*current > BigRational::zero()) {
        return Err(Error::NonPositiveWeight(f));
    }
    if raised_f <= current {
        return Err(Error::WeightNotIncreased(f));
    }
    let before = effective_conductance(g, e, w)?;
    let after = effective_conductance(g, e, &w.clone().with(f, raised_f.clone()))?;
    Ok((before, after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::VertexId;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn o(edge: u32, tail: u32, head: u32) -> OrientedEdge {
        OrientedEdge::new(EdgeId(edge), VertexId(tail), VertexId(head))
    }

    fn k4() -> Multigraph {
        Multigraph::from_edges(4, &[(1, 0, 1), (2, 1, 2), (3, 1, 3), (4, 0, 2), (5, 2, 3), (6, 0, 3)]).unwrap()
    }

    fn triangle() -> Multigraph {
        Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2), (3, 0, 2)]).unwrap()
    }

    #[test]
    fn conductance_examples() {
        let c2 = Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap();
        let w: RationalWeights = [(EdgeId(2), q(3, 2))].into_iter().collect();
        assert_eq!(effective_conductance(&c2, EdgeId(1), &w).unwrap(), q(3, 2));

        let w: RationalWeights = [(EdgeId(2), q(2, 1)), (EdgeId(3), q(3, 1))].into_iter().collect();
        assert_eq!(effective_conductance(&triangle(), EdgeId(1), &w).unwrap(), q(6, 5));

        let path = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
        let w: RationalWeights = [(EdgeId(2), q(1, 1))].into_iter().collect();
        assert!(effective_conductance(&path, EdgeId(1), &w).unwrap().is_zero());

        let looped = Multigraph::from_edges(1, &[(1, 0, 0)]).unwrap();
        assert_eq!(effective_conductance(&looped, EdgeId(1), &RationalWeights::new()), Err(Error::LoopEdge(EdgeId(1))));
    }

    #[test]
    fn difference_examples() {
        let c2 = Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap();
        assert_eq!(rayleigh_difference(&c2, EdgeId(1), EdgeId(2)).unwrap(), Polynomial::one());
        let p3 = Multigraph::from_edges(3, &[(1, 0, 1), (2, 1, 2)]).unwrap();
        assert!(rayleigh_difference(&p3, EdgeId(1), EdgeId(2)).unwrap().is_zero());
        assert_eq!(rayleigh_difference(&k4(), EdgeId(1), EdgeId(5)).unwrap(), p("(y3*y4 - y2*y6)^2"));
        assert_eq!(rayleigh_difference(&k4(), EdgeId(1), EdgeId(1)), Err(Error::SameEdge(EdgeId(1))));
    }

    #[test]
    fn verifier_examples() {
        let r = verify_rayleigh_identity(&k4(), o(1, 0, 1), o(2, 2, 1)).unwrap();
        assert!(r.verdict);
        assert!(r.x_plus.is_zero());
        assert_eq!(r.x_minus, p("y3*y4 + y4*y5 + y4*y6 + y5*y6"));

        let c2 = Multigraph::from_edges(2, &[(1, 0, 1), (2, 0, 1)]).unwrap();
        let r = verify_rayleigh_identity(&c2, o(1, 0, 1), o(2, 1, 0)).unwrap();
        assert!(r.verdict);
        assert_eq!(r.expanded_lhs, Polynomial::one());
        assert_eq!(r.expanded_rhs, Polynomial::one());

        let split = Multigraph::from_edges(3, &[(1, 0, 1)]).unwrap();
        assert_eq!(verify_rayleigh_identity(&split, o(1, 0, 1), o(1, 0, 1)), Err(Error::SameEdge(EdgeId(1))));
    }

    #[test]
    fn probe_examples() {
        let w: RationalWeights =
            [(EdgeId(1), q(1, 1)), (EdgeId(2), q(1, 1)), (EdgeId(3), q(1, 1))].into_iter().collect();
        let (before, after) = monotonicity_probe(&triangle(), EdgeId(1), EdgeId(2), &w, &q(2, 1)).unwrap();
        assert_eq!((before, after), (q(1, 2), q(2, 3)));

        let looped = Multigraph::from_edges(2, &[(1, 0, 1), (2, 1, 1), (3, 0, 1)]).unwrap();
        let (before, after) = monotonicity_probe(&looped, EdgeId(1), EdgeId(2), &w, &q(5, 1)).unwrap();
        assert_eq!(before, after);

        assert_eq!(
            monotonicity_probe(&triangle(), EdgeId(1), EdgeId(2), &w, &q(1, 2)),
            Err(Error::WeightNotIncreased(EdgeId(2)))
        );
    }

    #[test]
    fn linear_fractional_matches_conductance() {
        let w: RationalWeights = (1..=6).map(|i| (EdgeId(i), q(i as i64, 3))).collect();
        let form = conductance_in_f(&k4(), EdgeId(1), EdgeId(5), &w).unwrap();
        let direct = effective_conductance(&k4(), EdgeId(1), &w).unwrap();
        assert_eq!(form.at(&q(5, 3)), direct);
    }
}
