//! Line-oriented text format:
//!
//! ```text
//! vertices: A B C
//! A -> B
//! B <-> C
//! # comment
//! A o-> C
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{Mark, MixedGraph};
use crate::error::{Error, Result};

const TOKENS: [(&str, Mark, Mark); 6] = [
    ("->", Mark::Tail, Mark::Arrow),
    ("<->", Mark::Arrow, Mark::Arrow),
    ("--", Mark::Tail, Mark::Tail),
    ("o->", Mark::Circle, Mark::Arrow),
    ("o-o", Mark::Circle, Mark::Circle),
    ("o--", Mark::Circle, Mark::Tail),
];

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl MixedGraph {
    /// Parses the text format, accepting every edge token including circles.
    pub fn parse(text: &str) -> Result<MixedGraph> {
        parse_impl(text, false)
    }

    pub fn read(path: &Path) -> Result<MixedGraph> {
        MixedGraph::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text: vertices in id order, edges sorted by id pair.
    pub fn to_text(&self) -> String {
        let mut out = String::from("vertices:");
        for l in self.labels() {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
        for (u, v, mu, mv) in self.edges() {
            let (a, b, tok) = edge_token(u, v, mu, mv);
            let _ = writeln!(out, "{} {} {}", self.label(a), tok, self.label(b));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// With `dag` set, an edge reversing an earlier directed edge is reported as
/// a cycle rather than a duplicate.
pub(super) fn parse_impl(text: &str, dag: bool) -> Result<MixedGraph> {
    let mut graph: Option<MixedGraph> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(g) = graph.as_mut() else {
            let rest = line
                .strip_prefix("vertices:")
                .ok_or_else(|| parse_err(lineno, "expected `vertices:` header"))?;
            let names: Vec<&str> = rest.split_whitespace().collect();
            graph = Some(MixedGraph::new(&names).map_err(|e| parse_err(lineno, e.to_string()))?);
            continue;
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [u, tok, v] = parts[..] else {
            return Err(parse_err(
                lineno,
                format!("expected `<u> <edge> <v>`, got `{line}`"),
            ));
        };
        let &(_, mu, mv) = TOKENS
            .iter()
            .find(|(t, _, _)| *t == tok)
            .ok_or_else(|| parse_err(lineno, format!("unknown edge token `{tok}`")))?;
        let u = g.vertex(u).map_err(|e| parse_err(lineno, e.to_string()))?;
        let v = g.vertex(v).map_err(|e| parse_err(lineno, e.to_string()))?;
        if dag && (mu, mv) == (Mark::Tail, Mark::Arrow) && g.is_parent(v, u) {
            return Err(Error::InvalidDag(format!(
                "line {lineno}: `{}` and `{}` form a 2-cycle",
                g.label(u),
                g.label(v)
            )));
        }
        g.add_edge(u, v, mu, mv)
            .map_err(|e| parse_err(lineno, e.to_string()))?;
    }
    graph.ok_or_else(|| Error::InvalidFormat("missing `vertices:` header".into()))
}

fn edge_token(u: usize, v: usize, mu: Mark, mv: Mark) -> (usize, usize, &'static str) {
    for &(tok, a, b) in &TOKENS {
        if (mu, mv) == (a, b) {
            return (u, v, tok);
        }
        if (mv, mu) == (a, b) {
            return (v, u, tok);
        }
    }
    unreachable!("every mark pair has a token")
}
