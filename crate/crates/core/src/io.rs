//! Text formats. Graphs: `p ghcut <n> <m>` followed by `e <u> <v>` lines.
//! Trees: `t ghtree <n>` followed by `te <u> <v> <w>` lines. Ids are 1-based
//! on disk and lines starting with `c` are comments.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::tree::GhTree;
use std::collections::HashSet;
use std::fmt::Write;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('c') {
            return None;
        }
        Some((i + 1, l.split_whitespace().collect()))
    })
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| {
        parse_err(
            line,
            format!("{what} `{tok}` is not a non-negative integer"),
        )
    })
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v: usize = number(line, tok, "vertex id")?;
    if v == 0 || v > n {
        return Err(parse_err(line, format!("vertex id {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses the graph format into a validated simple graph.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `p ghcut` header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "ghcut" {
        return Err(parse_err(hl, "expected header `p ghcut <n> <m>`"));
    }
    let n: usize = number(hl, header[2], "vertex count")?;
    let m: usize = number(hl, header[3], "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = hl;
    for (ln, tokens) in lines {
        last_line = ln;
        if tokens[0] != "e" || tokens.len() != 3 {
            return Err(parse_err(ln, "expected `e <u> <v>`"));
        }
        let u = vertex(ln, tokens[1], n)?;
        let v = vertex(ln, tokens[2], n)?;
        if u == v {
            return Err(parse_err(ln, format!("self-loop at vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(ln, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    SimpleGraph::new(n, edges)
}

/// Writes a graph in the format read by [`parse_graph`], edges in stored order.
pub fn emit_graph(g: &SimpleGraph) -> String {
    let mut out = format!("p ghcut {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Writes a tree, edges sorted by `(u, v)`.
pub fn emit_tree(t: &GhTree) -> String {
    let mut out = format!("t ghtree {}\n", t.n());
    for &(u, v, w) in t.edges() {
        writeln!(out, "te {} {} {w}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses the tree format; the edges must form a spanning tree.
pub fn parse_tree(text: &str) -> Result<GhTree> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `t ghtree` header"))?;
    if header.len() != 3 || header[0] != "t" || header[1] != "ghtree" {
        return Err(parse_err(hl, "expected header `t ghtree <n>`"));
    }
    let n: usize = number(hl, header[2], "vertex count")?;
    let mut edges = Vec::new();
    for (ln, tokens) in lines {
        if tokens[0] != "te" || tokens.len() != 4 {
            return Err(parse_err(ln, "expected `te <u> <v> <w>`"));
        }
        let u = vertex(ln, tokens[1], n)?;
        let v = vertex(ln, tokens[2], n)?;
        let w: u64 = number(ln, tokens[3], "weight")?;
        edges.push((u, v, w));
    }
    GhTree::new(n, edges)
}
