//! Text formats. JSON is canonical; the edge list is for diffing by eye.
//!
//! Edge list: an optional run of `#` comment lines, a header, then one edge
//! (or arc) per line with space-separated vertices. Hypergraph headers are
//! `n r`; digraph headers are `n arcs` (or `n oriented`).

use std::fmt::Write;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::setsys::{make_digraph, make_hypergraph, Digraph, Hypergraph};

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn hypergraph_to_edgelist(h: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", h.n(), h.r());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn digraph_to_edgelist(d: &Digraph) -> String {
    let kind = if d.oriented() { "oriented" } else { "arcs" };
    let mut out = format!("{} {kind}\n", d.n());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::Parse(format!("line {line_no}: expected a vertex, got {t:?}")))
        })
        .collect()
}

pub fn hypergraph_from_edgelist(text: &str) -> Result<Hypergraph> {
    let mut lines = data_lines(text);
    let (no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let head = numbers(no, header)?;
    let [n, r] = head[..] else {
        return Err(Error::Parse(format!("line {no}: header must be \"n r\"")));
    };
    let edges = lines
        .map(|(no, l)| numbers(no, l))
        .collect::<Result<Vec<_>>>()?;
    make_hypergraph(n, r, edges)
}

pub fn digraph_from_edgelist(text: &str) -> Result<Digraph> {
    let mut lines = data_lines(text);
    let (no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty arc list".into()))?;
    let mut head = header.split_whitespace();
    let n = head
        .next()
        .and_then(|t| t.parse::<u32>().ok())
        .ok_or_else(|| {
            Error::Parse(format!(
                "line {no}: header must be \"n arcs\" or \"n oriented\""
            ))
        })?;
    let oriented = match head.next() {
        Some("arcs") | None => false,
        Some("oriented") => true,
        Some(t) => {
            return Err(Error::Parse(format!(
                "line {no}: unknown digraph kind {t:?}"
            )))
        }
    };
    let mut arcs = Vec::new();
    for (no, l) in lines {
        match numbers(no, l)?[..] {
            [u, v] => arcs.push((u, v)),
            _ => return Err(Error::Parse(format!("line {no}: an arc is two vertices"))),
        }
    }
    make_digraph(n, arcs, oriented)
}

/// Reads a hypergraph as JSON (when the text starts with `{`) or as an edge list.
pub fn read_hypergraph(text: &str) -> Result<Hypergraph> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        hypergraph_from_edgelist(text)
    }
}

/// Reads a digraph as JSON (when the text starts with `{`) or as an arc list.
pub fn read_digraph(text: &str) -> Result<Digraph> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        digraph_from_edgelist(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgelist_round_trip() {
        let h = make_hypergraph(5, 3, [[1, 2, 3], [3, 4, 5]]).unwrap();
        let text = hypergraph_to_edgelist(&h);
        assert_eq!(text, "5 3\n1 2 3\n3 4 5\n");
        assert_eq!(read_hypergraph(&format!("# note\n{text}")).unwrap(), h);
        let d = make_digraph(3, [(1, 2), (2, 3), (3, 1)], true).unwrap();
        assert_eq!(read_digraph(&digraph_to_edgelist(&d)).unwrap(), d);
    }

    #[test]
    fn json_tolerates_extra_keys() {
        let h: Hypergraph =
            read_hypergraph(r#"{"n":4,"r":2,"edges":[[2,1]],"provenance":{"strategy":"x"}}"#)
                .unwrap();
        assert_eq!(h.edges(), &[vec![1, 2]]);
    }

    #[test]
    fn malformed_input() {
        assert!(read_hypergraph("5\n1 2").is_err());
        assert!(read_hypergraph("4 2\n1 x").is_err());
        assert!(read_hypergraph("4 2\n1 2 3").is_err());
        assert!(read_digraph("3 arcs\n1 2 3").is_err());
        assert!(read_hypergraph("{\"n\":").is_err());
    }
}
