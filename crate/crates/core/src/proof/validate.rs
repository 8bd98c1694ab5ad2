//! Independent certificate checking.
//!
//! Every count is recomputed from the spanning-tree polynomials; nothing is
//! taken from the enumeration that produced the certificate. Rule choices
//! are re-derived and must agree with what was recorded.

use std::collections::HashMap;
use std::rc::Rc;

use super::pairs::gamma;
use super::{
    base, case2, case3, case4, decide, identity_support, reduce, statements, Case4Tally, Certificate, Decision,
    PolyCheck, ProofNode, Rule, Scope, StatementInputs, TypeCounts, TypePolynomials,
};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, OrientedEdge};
use crate::polynomial::ExponentVector;
use crate::spanning::check_marked_pair;

fn bad(detail: impl Into<String>) -> Error {
    Error::InvalidCertificate(detail.into())
}

type Key = (Multigraph, OrientedEdge, OrientedEdge);

/// Certificate checker that remembers the polynomials it has computed, so
/// checking many certificates over the same graphs stays cheap.
#[derive(Default)]
pub struct Validator {
    cache: HashMap<Key, Rc<TypePolynomials>>,
}

/// What a child node must be about.
struct Expect {
    graph: Multigraph,
    e: OrientedEdge,
    f: OrientedEdge,
    scope: Scope,
}

impl Expect {
    fn at_gamma(graph: Multigraph, e: OrientedEdge, f: OrientedEdge) -> Self {
        let scope = Scope::Monomial(gamma(&graph, e.edge, f.edge));
        Expect { graph, e, f, scope }
    }
}

fn same_identities(node: &ProofNode, expected: &[PolyCheck]) -> Result<()> {
    if node.identities != expected {
        return Err(bad(format!("{} node records different polynomial identities", node.rule.name())));
    }
    if let Some(p) = expected.iter().find(|p| p.lhs != p.rhs) {
        return Err(bad(format!("identity {} fails", p.name)));
    }
    Ok(())
}

impl Validator {
    pub fn new() -> Self {
        Validator::default()
    }

    /// Checks a certificate for `(g, e, f)`, failing with the first problem
    /// found.
    pub fn check(&mut self, g: &Multigraph, e: OrientedEdge, f: OrientedEdge, cert: &Certificate) -> Result<()> {
        check_marked_pair(g, e, f)?;
        if cert.fingerprint != g.fingerprint() {
            return Err(bad("fingerprint does not match the graph"));
        }
        if cert.e != e || cert.f != f {
            return Err(bad("certificate is for different marked edges"));
        }
        if let [only] = cert.proofs.as_slice() {
            if only.scope == Scope::Identity {
                self.node(only, &Expect { graph: g.clone(), e, f, scope: Scope::Identity })?;
                return Ok(());
            }
        }
        let polys = self.polys(g, e, f)?;
        let support = identity_support(&polys);
        if cert.proofs.len() != support.len() {
            return Err(bad(format!("{} monomial proofs for a support of {}", cert.proofs.len(), support.len())));
        }
        for (p, alpha) in cert.proofs.iter().zip(support) {
            self.node(p, &Expect { graph: g.clone(), e, f, scope: Scope::Monomial(alpha) })?;
        }
        Ok(())
    }

    fn polys(&mut self, g: &Multigraph, e: OrientedEdge, f: OrientedEdge) -> Result<Rc<TypePolynomials>> {
        let key = (g.clone(), e, f);
        if let Some(p) = self.cache.get(&key) {
            return Ok(p.clone());
        }
        let p = Rc::new(TypePolynomials::new(g, e, f)?);
        self.cache.insert(key, p.clone());
        Ok(p)
    }

    /// Checks `node` against what it must be about and returns its counts.
    fn node(&mut self, node: &ProofNode, want: &Expect) -> Result<TypeCounts> {
        let name = node.rule.name();
        if node.graph != want.graph || node.e != want.e || node.f != want.f || node.scope != want.scope {
            return Err(bad(format!("{name} node is not about the expected marked graph or monomial")));
        }
        let (g, e, f) = (&node.graph, node.e, node.f);
        let polys = self.polys(g, e, f)?;
        let counts = TypeCounts::from_polynomials(&polys, &node.scope);
        if node.lhs != counts.lhs() || node.rhs != counts.rhs() {
            return Err(bad(format!("{name} node records wrong side counts")));
        }
        let (children, identities, square) = match &node.scope {
            Scope::Identity => self.identity_rule(node)?,
            Scope::Monomial(alpha) => self.monomial_rule(node, alpha)?,
        };
        if node.children.len() != children.len() {
            return Err(bad(format!("{name} node has {} children, expected {}", node.children.len(), children.len())));
        }
        let mut child_counts = Vec::with_capacity(children.len());
        for (c, want) in node.children.iter().zip(&children) {
            child_counts.push(self.node(c, want)?);
        }
        let expected = statements(
            &node.rule,
            &StatementInputs { node: &counts, children: &child_counts, square_count: square.as_ref() },
        );
        if node.equalities != expected {
            return Err(bad(format!("{name} node records different equalities")));
        }
        if let Some(q) = expected.iter().find(|q| !q.holds()) {
            return Err(bad(format!("{name}: {} fails ({} != {})", q.name, q.lhs, q.rhs)));
        }
        same_identities(node, &identities)?;
        Ok(counts)
    }

    fn base_rule(&mut self, node: &ProofNode) -> Result<Vec<PolyCheck>> {
        let (g, e, f) = (&node.graph, node.e, node.f);
        let found = base::match_base(g, e, f).ok_or_else(|| bad("base node on a graph outside the table"))?;
        let Rule::Base { kind, labels, swapped } = &node.rule else {
            return Err(bad(format!("{} node where a base node is required", node.rule.name())));
        };
        if (*kind, labels, *swapped) != (found.kind, &found.labels, found.swapped) {
            return Err(bad("base node records a different match"));
        }
        let actual = self.polys(g, e, f)?;
        Ok(base::base_identities(&actual, &base::renamed_fixture(&found)))
    }

    #[allow(clippy::type_complexity)]
    fn identity_rule(&mut self, node: &ProofNode) -> Result<(Vec<Expect>, Vec<PolyCheck>, Option<num_bigint::BigInt>)> {
        Ok((vec![], self.base_rule(node)?, None))
    }

    #[allow(clippy::type_complexity)]
    fn monomial_rule(
        &mut self,
        node: &ProofNode,
        alpha: &ExponentVector,
    ) -> Result<(Vec<Expect>, Vec<PolyCheck>, Option<num_bigint::BigInt>)> {
        let (g, e, f) = (&node.graph, node.e, node.f);
        let decision = decide(g, e, f, alpha).map_err(|err| bad(format!("no rule applies: {err}")))?;
        let mismatch = || bad(format!("{} node where the rule choice differs", node.rule.name()));
        let none = (vec![], vec![], None);
        match (&decision, &node.rule) {
            (Decision::Reduce(reduce::ReductionStep::Delete(x)), Rule::DeleteZero { edge }) if x == edge => {
                let h = g.delete_edge(*x)?;
                if h.component_count() != g.component_count() {
                    return Err(bad(format!("edge {x} is a cut edge")));
                }
                Ok((vec![Expect { graph: h, e, f, scope: Scope::Monomial(alpha.clone()) }], vec![], None))
            }
            (Decision::Reduce(reduce::ReductionStep::Contract(x)), Rule::ContractTwo { edge }) if x == edge => {
                let ends = g.edge(*x)?;
                let h = g.contract_edge(*x)?;
                Ok((
                    vec![Expect {
                        graph: h,
                        e: e.after_merge(ends.v, ends.u),
                        f: f.after_merge(ends.v, ends.u),
                        scope: Scope::Monomial(alpha.without(*x)),
                    }],
                    vec![],
                    None,
                ))
            }
            (Decision::Loop(x), Rule::Loop { edge }) if x == edge => Ok(none),
            (Decision::Base(_), Rule::Base { .. }) => Ok((vec![], self.base_rule(node)?, None)),
            (Decision::TrivialDegree, Rule::TrivialDegree) => Ok(none),
            (Decision::Direct, Rule::Direct) => Ok((vec![], base::direct_identities(g, e, f)?, None)),
            (Decision::BlockSplit(v), Rule::BlockSplit { vertex, separated, factor }) if v == vertex => {
                let (h, j) = g.split_at(*v, e.edge)?;
                if *separated == h.has_edge(f.edge) {
                    return Err(bad("block split records the wrong side of f"));
                }
                if *factor != reduce::square_factor(&j) {
                    return Err(bad("block split records a wrong factor"));
                }
                let identities = reduce::block_identities(g, e, f, &h, &j, *separated)?;
                let children = if *separated { vec![] } else { vec![Expect::at_gamma(h, e, f)] };
                Ok((children, identities, None))
            }
            (Decision::Case2(v), Rule::Case2 { vertex, kind }) if v == vertex => {
                let (_, k) = case2::classify(g, e, f, *v)?;
                if k != *kind {
                    return Err(bad("degree-two node records the wrong kind"));
                }
                match k {
                    super::Case2Kind::Neither => Ok((vec![Expect::at_gamma(g.delete_vertex(*v)?, e, f)], vec![], None)),
                    super::Case2Kind::One => Ok(none),
                    super::Case2Kind::Both => {
                        Ok((vec![], case2::both_identities(g, e, f, *v)?, Some(case2::square_count(g, *v)?)))
                    }
                }
            }
            (Decision::Case3(v), Rule::Case3 { vertex, spokes, new_edges }) if v == vertex => {
                let ex = case3::expansion(g, e, f, *v)?;
                if ex.spokes != *spokes || ex.new_edges != *new_edges {
                    return Err(bad("cubic expansion records different edges"));
                }
                Ok((ex.graphs.into_iter().map(|h| Expect::at_gamma(h, e, f)).collect(), vec![], None))
            }
            (Decision::Case4(v), Rule::Case4 { vertex, spokes, new_edges, tally }) if v == vertex => {
                let ex = case4::expansion(g, e, f, *v)?;
                if ex.spokes != *spokes || ex.new_edges != *new_edges {
                    return Err(bad("4-valent expansion records different edges"));
                }
                check_tally(tally)?;
                Ok((ex.graphs.into_iter().map(|h| Expect::at_gamma(h, e, f)).collect(), vec![], None))
            }
            _ => Err(mismatch()),
        }
    }
}

/// The involution pairs mixed with pure gamma3 pairs, so it needs at least
/// as many orbits as mixed pairs; the remaining relations are equalities.
fn check_tally(t: &Case4Tally) -> Result<()> {
    if t.orbits > t.h_classes[5] {
        return Err(bad("more involution orbits than gamma3 pairs"));
    }
    Ok(())
}

/// Checks a certificate for `(g, e, f)`, failing with the first problem found.
pub fn check_certificate(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, cert: &Certificate) -> Result<()> {
    Validator::new().check(g, e, f, cert)
}

/// Whether the certificate proves the identity for `(g, e, f)`.
pub fn validate_certificate(g: &Multigraph, e: OrientedEdge, f: OrientedEdge, cert: &Certificate) -> bool {
    check_certificate(g, e, f, cert).is_ok()
}
