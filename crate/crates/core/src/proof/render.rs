//! Plain-text rendering of certificates.

use std::fmt::{self, Write as _};

use super::{Case2Kind, Certificate, ProofNode, Rule, Scope};
use crate::polynomial::Polynomial;

fn scope_text(scope: &Scope) -> String {
    match scope {
        Scope::Identity => "identity".to_string(),
        Scope::Monomial(alpha) => Polynomial::monomial(alpha.clone(), 1.into()).to_string(),
    }
}

fn list<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn rule_data(rule: &Rule) -> String {
    match rule {
        Rule::Loop { edge } => format!("edge={edge}"),
        Rule::TrivialDegree | Rule::Direct => String::new(),
        Rule::Base { kind, labels, swapped } => {
            let l: Vec<String> = labels.iter().map(|(id, l)| format!("{id}->{l}")).collect();
            format!("kind={kind:?} labels={} swapped={swapped}", l.join(","))
        }
        Rule::DeleteZero { edge } | Rule::ContractTwo { edge } => format!("edge={edge}"),
        Rule::BlockSplit { vertex, separated, factor } => {
            format!("vertex={vertex} separated={separated} factor={factor}")
        }
        Rule::Case2 { vertex, kind } => {
            let k = match kind {
                Case2Kind::Neither => "neither",
                Case2Kind::One => "one",
                Case2Kind::Both => "both",
            };
            format!("vertex={vertex} marked={k}")
        }
        Rule::Case3 { vertex, spokes, new_edges } => {
            format!("vertex={vertex} spokes={} new={}", list(spokes), list(new_edges))
        }
        Rule::Case4 { vertex, spokes, new_edges, tally } => format!(
            "vertex={vertex} spokes={} new={} G=[{}] H=[{}] gamma3=[{}] L0={} R0={} orbits={}",
            list(spokes),
            list(new_edges),
            list(&tally.g_classes),
            list(&tally.h_classes),
            list(&tally.gamma3),
            tally.l0,
            tally.r0,
            tally.orbits
        ),
    }
}

fn render_node(out: &mut String, node: &ProofNode, depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth);
    let data = rule_data(&node.rule);
    let sep = if data.is_empty() { "" } else { " " };
    writeln!(
        out,
        "{pad}{}{sep}{data} at {} lhs={} rhs={}",
        node.rule.name(),
        scope_text(&node.scope),
        node.lhs,
        node.rhs
    )?;
    writeln!(out, "{pad}  graph {} e={} f={}", node.graph.canonical_text(), node.e, node.f)?;
    for q in &node.equalities {
        writeln!(out, "{pad}  = {}: {} = {}", q.name, q.lhs, q.rhs)?;
    }
    for p in &node.identities {
        writeln!(out, "{pad}  ~ {}: {} = {}", p.name, p.lhs, p.rhs)?;
    }
    for c in &node.children {
        render_node(out, c, depth + 1)?;
    }
    Ok(())
}

impl fmt::Display for ProofNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        render_node(&mut out, self, 0)?;
        f.write_str(&out)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate {}", self.fingerprint)?;
        writeln!(f, "e {}", self.e)?;
        writeln!(f, "f {}", self.f)?;
        writeln!(f, "proofs {}", self.proofs.len())?;
        let mut out = String::new();
        for p in &self.proofs {
            render_node(&mut out, p, 0)?;
        }
        f.write_str(&out)
    }
}
