//! The line-oriented graph file.
//!
//! ```text
//! # comments and blank lines are ignored
//! vertex a
//! edge 1 a b
//! orient 1 b a
//! weight 1 3/2
//! mark e 1
//! mark f 2
//! ```
//!
//! Vertices may be implicit. When every edge label is a non-negative integer
//! the integer is the edge id, otherwise ids follow the order of the `edge`
//! lines starting at 1. Vertex names follow the same rule, with ids starting
//! at 0 in order of first appearance. An edge is oriented from its first
//! listed endpoint unless an `orient` line says otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rayleigh_core::{EdgeId, Multigraph, OrientedEdge, RationalWeights, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    E,
    F,
}

/// A parsed graph file with the names it was written in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Multigraph,
    vertex_names: BTreeMap<VertexId, String>,
    edge_labels: BTreeMap<EdgeId, String>,
    /// Orientation of every edge: the edge line's order or an `orient` line.
    orientations: BTreeMap<EdgeId, OrientedEdge>,
    /// Edges whose orientation came from an `orient` line.
    explicit: BTreeMap<EdgeId, OrientedEdge>,
    pub weights: RationalWeights,
    pub mark_e: Option<EdgeId>,
    pub mark_f: Option<EdgeId>,
}

enum Directive<'a> {
    Vertex(&'a str),
    Edge(&'a str, &'a str, &'a str),
    Orient(&'a str, &'a str, &'a str),
    Weight(&'a str, &'a str),
    Mark(Mark, &'a str),
}

fn directive<'a>(line: usize, words: &[&'a str]) -> Result<Directive<'a>, ParseError> {
    let arity = |n: usize| {
        if words.len() == n {
            Ok(())
        } else {
            err(line, format!("`{}` takes {} arguments, found {}", words[0], n - 1, words.len() - 1))
        }
    };
    match words[0] {
        "vertex" => arity(2).map(|_| Directive::Vertex(words[1])),
        "edge" => arity(4).map(|_| Directive::Edge(words[1], words[2], words[3])),
        "orient" => arity(4).map(|_| Directive::Orient(words[1], words[2], words[3])),
        "weight" => arity(3).map(|_| Directive::Weight(words[1], words[2])),
        "mark" => {
            arity(3)?;
            match words[1] {
                "e" => Ok(Directive::Mark(Mark::E, words[2])),
                "f" => Ok(Directive::Mark(Mark::F, words[2])),
                other => err(line, format!("mark must be `e` or `f`, found `{other}`")),
            }
        }
        other => err(line, format!("unknown directive `{other}`")),
    }
}

/// Name-to-id table following the numeric-or-first-appearance rule.
struct Names {
    ids: HashMap<String, u32>,
    names: BTreeMap<u32, String>,
}

impl Names {
    fn build(kind: &str, first: u32, all: &[(usize, &str)]) -> Result<Names, ParseError> {
        let numeric = all.iter().all(|(_, s)| s.parse::<u32>().is_ok());
        let mut out = Names { ids: HashMap::new(), names: BTreeMap::new() };
        for &(line, s) in all {
            if out.ids.contains_key(s) {
                continue;
            }
            let id = if numeric {
                let id = s.parse::<u32>().expect("checked numeric");
                if out.names.contains_key(&id) {
                    return err(line, format!("{kind} `{s}` repeats id {id}"));
                }
                id
            } else {
                first + out.names.len() as u32
            };
            out.ids.insert(s.to_string(), id);
            out.names.insert(id, if numeric { id.to_string() } else { s.to_string() });
        }
        Ok(out)
    }

    fn get(&self, kind: &str, line: usize, s: &str) -> Result<u32, ParseError> {
        self.ids.get(s).copied().ok_or_else(|| ParseError { line, msg: format!("unknown {kind} `{s}`") })
    }
}

impl FromStr for GraphFile {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            if !words.is_empty() {
                lines.push((i + 1, directive(i + 1, &words)?));
            }
        }

        // vertices are named by `vertex` and `edge` lines, edges by `edge` lines
        let mut vertex_refs = Vec::new();
        let mut edge_refs = Vec::new();
        for (line, d) in &lines {
            match d {
                Directive::Vertex(v) => vertex_refs.push((*line, *v)),
                Directive::Edge(id, u, v) => {
                    vertex_refs.extend([(*line, *u), (*line, *v)]);
                    edge_refs.push((*line, *id));
                }
                _ => {}
            }
        }
        let vertices = Names::build("vertex", 0, &vertex_refs)?;
        let edges = Names::build("edge", 1, &edge_refs)?;

        let mut graph = Multigraph::default();
        for &id in vertices.names.keys() {
            graph.add_vertex(VertexId(id));
        }
        let mut out = GraphFile {
            graph,
            vertex_names: vertices.names.iter().map(|(&id, s)| (VertexId(id), s.clone())).collect(),
            edge_labels: edges.names.iter().map(|(&id, s)| (EdgeId(id), s.clone())).collect(),
            orientations: BTreeMap::new(),
            explicit: BTreeMap::new(),
            weights: RationalWeights::new(),
            mark_e: None,
            mark_f: None,
        };
        let mut declared = std::collections::BTreeSet::new();
        for (line, d) in &lines {
            let line = *line;
            match d {
                Directive::Vertex(v) => {
                    if !declared.insert(vertices.get("vertex", line, v)?) {
                        return err(line, format!("vertex `{v}` declared twice"));
                    }
                }
                Directive::Edge(label, u, v) => {
                    let id = EdgeId(edges.get("edge", line, label)?);
                    let (u, v) =
                        (VertexId(vertices.get("vertex", line, u)?), VertexId(vertices.get("vertex", line, v)?));
                    if out.graph.has_edge(id) {
                        return err(line, format!("edge `{label}` declared twice"));
                    }
                    out.graph.add_edge(id, u, v).map_err(|e| ParseError { line, msg: e.to_string() })?;
                    out.orientations.insert(id, OrientedEdge::new(id, u, v));
                }
                _ => {}
            }
        }
        for (line, d) in &lines {
            let line = *line;
            match d {
                Directive::Orient(label, tail, head) => {
                    let id = EdgeId(edges.get("edge", line, label)?);
                    let o = OrientedEdge::new(
                        id,
                        VertexId(vertices.get("vertex", line, tail)?),
                        VertexId(vertices.get("vertex", line, head)?),
                    );
                    if out.graph.check_orientation(o).is_err() {
                        return err(line, format!("`{tail} {head}` are not the ends of edge `{label}`"));
                    }
                    if out.explicit.insert(id, o).is_some() {
                        return err(line, format!("edge `{label}` oriented twice"));
                    }
                    out.orientations.insert(id, o);
                }
                Directive::Weight(label, value) => {
                    let id = EdgeId(edges.get("edge", line, label)?);
                    let w: BigRational = value
                        .parse()
                        .map_err(|_| ParseError { line, msg: format!("weight `{value}` is not a rational p/q") })?;
                    if w <= BigRational::zero() {
                        return err(line, format!("weight of edge `{label}` must be positive"));
                    }
                    if out.weights.get(id).is_some() {
                        return err(line, format!("edge `{label}` weighted twice"));
                    }
                    out.weights.set(id, w);
                }
                Directive::Mark(which, label) => {
                    let id = EdgeId(edges.get("edge", line, label)?);
                    let slot = match which {
                        Mark::E => &mut out.mark_e,
                        Mark::F => &mut out.mark_f,
                    };
                    if slot.replace(id).is_some() {
                        return err(line, format!("edge {} marked twice", if which == &Mark::E { "e" } else { "f" }));
                    }
                }
                Directive::Vertex(_) | Directive::Edge(..) => {}
            }
        }
        if let (Some(e), Some(f)) = (out.mark_e, out.mark_f) {
            if e == f {
                let line = lines.iter().rev().find(|(_, d)| matches!(d, Directive::Mark(..))).map_or(0, |(l, _)| *l);
                return err(line, "marked edges e and f must be distinct");
            }
        }
        Ok(out)
    }
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        text.parse()
    }

    pub fn edge_label(&self, id: EdgeId) -> String {
        self.edge_labels.get(&id).cloned().unwrap_or_else(|| id.to_string())
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        self.vertex_names.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    /// The edge id written as `label` in the file.
    pub fn edge_id(&self, label: &str) -> Option<EdgeId> {
        self.edge_labels.iter().find(|(_, l)| l.as_str() == label).map(|(id, _)| *id)
    }

    /// Polynomial variable for an edge: `y` followed by its label.
    pub fn variable(&self, id: EdgeId) -> String {
        format!("y{}", self.edge_label(id))
    }

    pub fn orientation(&self, id: EdgeId) -> Option<OrientedEdge> {
        self.orientations.get(&id).copied()
    }

    /// Whether labels differ from the ids used internally.
    pub fn has_symbolic_names(&self) -> bool {
        self.edge_labels.iter().any(|(id, l)| id.to_string() != *l)
            || self.vertex_names.iter().any(|(v, n)| v.to_string() != *n)
    }

    pub fn render_oriented(&self, o: OrientedEdge) -> String {
        format!("{} {}->{}", self.edge_label(o.edge), self.vertex_name(o.tail), self.vertex_name(o.head))
    }
}

/// Canonical text: vertices, edges, orientations, weights and marks, each
/// in id order.
impl fmt::Display for GraphFile {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for v in self.graph.vertices() {
            writeln!(s, "vertex {}", self.vertex_name(v))?;
        }
        for id in self.graph.edge_ids() {
            let o = self.orientations[&id];
            let o = self.explicit.get(&id).map_or(o, |_| {
                let x = self.graph.edge(id).expect("own edge");
                OrientedEdge::new(id, x.u, x.v)
            });
            writeln!(s, "edge {} {} {}", self.edge_label(id), self.vertex_name(o.tail), self.vertex_name(o.head))?;
        }
        for o in self.explicit.values() {
            writeln!(
                s,
                "orient {} {} {}",
                self.edge_label(o.edge),
                self.vertex_name(o.tail),
                self.vertex_name(o.head)
            )?;
        }
        for (id, w) in self.weights.iter() {
            writeln!(s, "weight {} {}/{}", self.edge_label(id), w.numer(), w.denom())?;
        }
        if let Some(e) = self.mark_e {
            writeln!(s, "mark e {}", self.edge_label(e))?;
        }
        if let Some(f) = self.mark_f {
            writeln!(s, "mark f {}", self.edge_label(f))?;
        }
        out.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K4: &str = "\
# the complete graph on four vertices
edge 1 a b
edge 2 b c
edge 3 b d
edge 4 a c
edge 5 c d
edge 6 a d
orient 2 c b
mark e 1
mark f 2
";

    #[test]
    fn numeric_labels_are_ids_and_names_follow_appearance() {
        let g = GraphFile::parse(K4).unwrap();
        assert_eq!(g.graph.edge_count(), 6);
        assert_eq!(g.edge_label(EdgeId(5)), "5");
        assert_eq!(g.vertex_name(VertexId(0)), "a");
        assert_eq!(g.vertex_name(VertexId(3)), "d");
        assert_eq!(g.mark_e, Some(EdgeId(1)));
        let f = g.orientation(EdgeId(2)).unwrap();
        assert_eq!((f.tail, f.head), (VertexId(2), VertexId(1)));
        let e = g.orientation(EdgeId(1)).unwrap();
        assert_eq!((e.tail, e.head), (VertexId(0), VertexId(1)));
    }

    #[test]
    fn symbolic_labels_number_from_one() {
        let g = GraphFile::parse("edge e 0 1\nedge f 0 1\nweight f 3/2\nmark e e\n").unwrap();
        assert_eq!(g.edge_id("e"), Some(EdgeId(1)));
        assert_eq!(g.edge_id("f"), Some(EdgeId(2)));
        assert_eq!(g.variable(EdgeId(2)), "yf");
        assert!(g.graph.has_vertex(VertexId(0)) && g.graph.has_vertex(VertexId(1)));
        assert_eq!(g.weights.get(EdgeId(2)).unwrap().to_string(), "3/2");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("edge 1 a b\nedge 1 b c\n", 2, "declared twice"),
            ("edge 1 a b\n\nfrob 1\n", 3, "unknown directive"),
            ("edge 1 a b\nvertex c\norient 1 a c\n", 3, "not the ends"),
            ("edge 1 a b\norient 1 a z\n", 2, "unknown vertex"),
            ("edge 1 a b\nweight 1 -1/2\n", 2, "positive"),
            ("edge 1 a b\nweight 1 x\n", 2, "not a rational"),
            ("edge 1 a b\nweight 1 1/0\n", 2, "not a rational"),
            ("edge 1 a b\nmark e 2\n", 2, "unknown edge"),
            ("edge 1 a b\nedge 2 a b\nmark e 1\nmark f 1\n", 4, "distinct"),
            ("edge 1 a b\nmark g 1\n", 2, "`e` or `f`"),
            ("edge 1 a\n", 1, "takes 3 arguments"),
            ("vertex a\nvertex a\n", 2, "declared twice"),
            ("edge 1 a b\nmark e 1\nmark e 1\n", 3, "marked twice"),
            ("edge 01 a b\nedge 1 b c\n", 2, "repeats id"),
        ];
        for (text, line, msg) in cases {
            let e = GraphFile::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.msg.contains(msg), "{text:?}: {e}");
        }
    }

    #[test]
    fn serialization_is_canonical_and_round_trips() {
        let text = "mark f x\nweight x 4/6\nedge y q p\nvertex lonely\nedge x p q\norient y p q\nmark e y\n";
        let g = GraphFile::parse(text).unwrap();
        let s = g.to_string();
        assert_eq!(
            s,
            "vertex q\nvertex p\nvertex lonely\nedge y q p\nedge x p q\norient y p q\nweight x 2/3\nmark e y\nmark f x\n"
        );
        let again = GraphFile::parse(&s).unwrap();
        assert_eq!(again, g);
        assert_eq!(again.to_string(), s);
    }

    #[test]
    fn comments_and_isolated_vertices() {
        let g = GraphFile::parse("vertex 7   # alone\n\n  # nothing\n").unwrap();
        assert_eq!(g.graph.vertex_count(), 1);
        assert!(g.graph.has_vertex(VertexId(7)));
        assert_eq!(g.to_string(), "vertex 7\n");
    }
}
