//! Text graph format.
//!
//! ```text
//! # comment
//! graph 3
//! v a
//! v b
//! v c
//! e a b
//! e b c
//! ```
//!
//! `v` lines are optional. Without them the vertex ids are the ids named by
//! the edge lines (in order of first appearance), padded up to `n` with
//! `v0, v1, ..` skipping names already taken. `side <id> A|B` lines belong to
//! the cobipartite sidecar format and are skipped here.

use super::{Graph, GraphError};

/// Ids are non-empty and use only ASCII alphanumerics, `_`, `.` and `-`, and
/// never start with `-`.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('-')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut declared: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if n.is_none() {
            match tokens.as_slice() {
                ["graph", count] => {
                    let count = count
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad vertex count `{count}`")))?;
                    n = Some(count);
                    continue;
                }
                _ => return Err(parse_err(lineno, "expected header `graph <n>`")),
            }
        }
        match tokens.as_slice() {
            ["v", id] => {
                if !valid_id(id) {
                    return Err(GraphError::InvalidId(id.to_string()));
                }
                declared.push(id.to_string());
            }
            ["e", a, b] => edges.push((lineno, a.to_string(), b.to_string())),
            ["side", _, _] => {}
            ["graph", ..] => return Err(parse_err(lineno, "duplicate header")),
            _ => return Err(parse_err(lineno, format!("unrecognized line `{line}`"))),
        }
    }

    let n = n.ok_or_else(|| parse_err(0, "missing header `graph <n>`"))?;
    let ids = if declared.is_empty() {
        let mut ids: Vec<String> = Vec::new();
        for (lineno, a, b) in &edges {
            for id in [a, b] {
                if !valid_id(id) {
                    return Err(GraphError::InvalidId(id.clone()));
                }
                if !ids.contains(id) {
                    ids.push(id.clone());
                }
            }
            if ids.len() > n {
                return Err(parse_err(*lineno, format!("more than {n} distinct vertex ids")));
            }
        }
        let mut next = 0;
        while ids.len() < n {
            let candidate = format!("v{next}");
            next += 1;
            if !ids.contains(&candidate) {
                ids.push(candidate);
            }
        }
        ids
    } else {
        if declared.len() != n {
            return Err(parse_err(
                0,
                format!("header declares {n} vertices but {} `v` lines found", declared.len()),
            ));
        }
        declared
    };
    Graph::new(ids, edges.into_iter().map(|(_, a, b)| (a, b)))
}

/// Canonical text form: vertices sorted by id, edges sorted lexicographically.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n());
    for id in g.ids() {
        out.push_str(&format!("v {id}\n"));
    }
    for e in g.edges() {
        out.push_str(&format!("e {} {}\n", g.id(e.0), g.id(e.1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn single_edge() {
        let g = parse_graph("graph 2\ne a b").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.ids(), &["a", "b"]);
        assert_eq!(g.edges(), &[Edge(0, 1)]);
    }

    #[test]
    fn path_on_three() {
        let g = parse_graph("graph 3\ne a b\ne b c").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn self_loop_is_rejected() {
        assert_eq!(
            parse_graph("graph 1\ne a a"),
            Err(GraphError::SelfLoop("a".into()))
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graph("e a b"), Err(GraphError::Parse { .. })));
        assert!(matches!(
            parse_graph("graph 2\nv a\nv b\ne a c"),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            parse_graph("graph 2\ne a b\ne b a"),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            parse_graph("graph x"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("graph 1\ne a b"),
            Err(GraphError::Parse { .. })
        ));
    }

    #[test]
    fn default_ids_and_comments() {
        let g = parse_graph("# header next\ngraph 3 # three\n\ne v0 v2\n").unwrap();
        assert_eq!(g.ids(), &["v0", "v1", "v2"]);
        let canon = serialize_graph(&g);
        assert_eq!(canon, "graph 3\nv v0\nv v1\nv v2\ne v0 v2\n");
        assert_eq!(parse_graph(&canon).unwrap(), g);
    }

    #[test]
    fn side_lines_are_skipped() {
        let g = parse_graph("graph 2\ne a b\nside a A\nside b B\n").unwrap();
        assert_eq!(g.m(), 1);
    }
}
