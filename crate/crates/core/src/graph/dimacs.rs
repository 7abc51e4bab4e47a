//! DIMACS `.col` reading and writing.
//!
//! ```text
//! c <comment>
//! p edge <n> <m>      exactly once, before any edge
//! e <u> <v>           1 <= u, v <= n, u != v
//! ```
//!
//! Tokens are whitespace separated; LF and CRLF line endings are accepted and
//! blank lines are skipped.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; for a missing problem line or an edge count
    /// mismatch this is the line after the last one.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("edge before problem line")]
    EdgeBeforeProblem,
    #[error("duplicate problem line")]
    DuplicateProblem,
    #[error("missing problem line")]
    MissingProblem,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("problem line declares {declared} edges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
}

pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let err = |kind| ParseError { line: line_no, kind };
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let mut tokens = line.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(err(ParseErrorKind::DuplicateProblem));
                }
                let fields: Vec<&str> = tokens.collect();
                let [format, n, m] = fields[..] else {
                    return Err(err(malformed(line)));
                };
                if format != "edge" {
                    return Err(err(malformed(line)));
                }
                let (Ok(n), Ok(m)) = (n.parse(), m.parse()) else {
                    return Err(err(malformed(line)));
                };
                header = Some((n, m));
            }
            "e" => {
                let fields: Vec<&str> = tokens.collect();
                let [u, v] = fields[..] else {
                    return Err(err(malformed(line)));
                };
                let (Ok(u), Ok(v)) = (u.parse::<usize>(), v.parse::<usize>()) else {
                    return Err(err(malformed(line)));
                };
                let Some((n, _)) = header else {
                    return Err(err(ParseErrorKind::EdgeBeforeProblem));
                };
                for vertex in [u, v] {
                    if vertex == 0 || vertex > n {
                        return Err(err(ParseErrorKind::VertexOutOfRange { vertex, n }));
                    }
                }
                if u == v {
                    return Err(err(ParseErrorKind::SelfLoop(u)));
                }
                let e = (u.min(v) - 1, u.max(v) - 1);
                if !seen.insert(e) {
                    return Err(err(ParseErrorKind::DuplicateEdge(u, v)));
                }
                edges.push(e);
            }
            _ => return Err(err(malformed(line))),
        }
    }

    let end = last_line + 1;
    let Some((n, m)) = header else {
        return Err(ParseError { line: end, kind: ParseErrorKind::MissingProblem });
    };
    if edges.len() != m {
        return Err(ParseError {
            line: end,
            kind: ParseErrorKind::EdgeCountMismatch { declared: m, found: edges.len() },
        });
    }
    Ok(Graph { n, edges })
}

fn malformed(line: &str) -> ParseErrorKind {
    ParseErrorKind::Malformed(line.trim().to_owned())
}

/// Canonical DIMACS text: the problem line, then edges in stored order,
/// 1-indexed with the smaller endpoint first.
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n, g.edges.len());
    for &(u, v) in &g.edges {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> (usize, ParseErrorKind) {
        let e = parse_dimacs(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn triangle() {
        let g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let g = parse_dimacs("c hello\r\n\r\np  edge 2 1\r\n  \r\ne 2  1\r\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn vertex_out_of_range() {
        assert_eq!(
            kind("p edge 2 1\ne 1 3\n"),
            (2, ParseErrorKind::VertexOutOfRange { vertex: 3, n: 2 })
        );
        assert_eq!(kind("p edge 2 1\ne 0 1\n").1, ParseErrorKind::VertexOutOfRange { vertex: 0, n: 2 });
    }

    #[test]
    fn edge_before_problem() {
        assert_eq!(kind("e 1 2\n"), (1, ParseErrorKind::EdgeBeforeProblem));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(kind("p edge 2 1\ne 1 1\n"), (2, ParseErrorKind::SelfLoop(1)));
        assert_eq!(kind("p edge 2 2\ne 1 2\ne 2 1\n"), (3, ParseErrorKind::DuplicateEdge(2, 1)));
        assert_eq!(
            kind("p edge 3 2\ne 1 2\n"),
            (3, ParseErrorKind::EdgeCountMismatch { declared: 2, found: 1 })
        );
        assert_eq!(kind("c nothing\n"), (2, ParseErrorKind::MissingProblem));
        assert_eq!(kind("p edge 2 0\np edge 2 0\n"), (2, ParseErrorKind::DuplicateProblem));
    }

    #[test]
    fn malformed_lines() {
        for text in ["p col 3 0\n", "p edge 3\n", "p edge 2 1\ne 1 x\n", "x 1 2\n", "p edge 2 1\ne 1 2 3\n"] {
            assert!(matches!(parse_dimacs(text).unwrap_err().kind, ParseErrorKind::Malformed(_)), "{text:?}");
        }
    }

    #[test]
    fn writer_is_canonical() {
        let text = "c x\np edge 3 2\ne 3 1\ne 2 3\n";
        let g = parse_dimacs(text).unwrap();
        let canon = write_dimacs(&g);
        assert_eq!(canon, "p edge 3 2\ne 1 3\ne 2 3\n");
        assert_eq!(write_dimacs(&parse_dimacs(&canon).unwrap()), canon);
    }
}
