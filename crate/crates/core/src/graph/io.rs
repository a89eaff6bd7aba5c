//! Plain edge-list and DIMACS clique-format readers and writers.
//!
//! Edge list: first line `n m`, then `m` lines `u v` with 0-based ids.
//! DIMACS: `c` comment lines, one `p edge n m` line, then `e u v` lines with
//! 1-based ids. Writers emit edges in lexicographic order so output is
//! byte-stable.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::Graph;
use crate::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|e| parse_err(line, format!("bad {what}: {e}")))
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    w.write_all(edge_list_string(g).as_bytes())?;
    Ok(())
}

/// Reads an edge list. Blank lines are skipped; `line_offset` shifts
/// reported line numbers when the list is embedded in a larger file.
pub fn read_edge_list_from_lines<I>(lines: I, line_offset: usize) -> Result<Graph>
where
    I: IntoIterator<Item = std::io::Result<String>>,
{
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in lines.into_iter().enumerate() {
        let lineno = i + 1 + line_offset;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let a = parse_usize(toks.next(), lineno, "first field")?;
        let b = parse_usize(toks.next(), lineno, "second field")?;
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing fields"));
        }
        match header {
            None => header = Some((a, b)),
            Some(_) => edges.push((a, b, lineno)),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(line_offset + 1, "missing header line"))?;
    if edges.len() != m {
        return Err(parse_err(
            line_offset + 1,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    build(n, edges)
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    read_edge_list_from_lines(r.lines(), 0)
}

fn build(n: usize, edges: Vec<(usize, usize, usize)>) -> Result<Graph> {
    let mut g = Graph::empty(n);
    for (u, v, lineno) in edges {
        if u >= n || v >= n {
            return Err(parse_err(lineno, format!("edge ({u},{v}) outside 0..{n}")));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop at {u}")));
        }
        if g.has_edge(u, v) {
            return Err(parse_err(lineno, format!("duplicate edge ({u},{v})")));
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

pub fn dimacs_string(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p edge {} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn write_dimacs<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    w.write_all(dimacs_string(g).as_bytes())?;
    Ok(())
}

pub fn read_dimacs<R: BufRead>(r: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(parse_err(lineno, format!("unsupported format {other:?}"))),
                }
                let n = parse_usize(toks.next(), lineno, "vertex count")?;
                let m = parse_usize(toks.next(), lineno, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(parse_err(lineno, "edge before problem line"));
                }
                let u = parse_usize(toks.next(), lineno, "endpoint")?;
                let v = parse_usize(toks.next(), lineno, "endpoint")?;
                if u == 0 || v == 0 {
                    return Err(parse_err(lineno, "DIMACS vertices are 1-based"));
                }
                edges.push((u - 1, v - 1, lineno));
            }
            Some(tag) => return Err(parse_err(lineno, format!("unknown line tag {tag:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(1, "missing problem line"))?;
    if edges.len() != m {
        return Err(parse_err(1, format!("header declares {m} edges, found {}", edges.len())));
    }
    build(n, edges)
}

/// Reads either format, sniffing DIMACS by its `p`/`c` line tags.
pub fn read_any(text: &str) -> Result<Graph> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with('p') || first.starts_with('c') {
        read_dimacs(text.as_bytes())
    } else {
        read_edge_list(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_format_is_exact() {
        let g = Graph::cycle(4);
        assert_eq!(edge_list_string(&g), "4 4\n0 1\n0 3\n1 2\n2 3\n");
        assert_eq!(dimacs_string(&g), "p edge 4 4\ne 1 2\ne 1 4\ne 2 3\ne 3 4\n");
    }

    #[test]
    fn reads_dimacs_with_comments() {
        let text = "c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        assert_eq!(read_any(text).unwrap(), Graph::complete(3));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_edge_list("3 1\n0 3\n".as_bytes()).is_err());
        assert!(read_edge_list("3 2\n0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("3 2\n0 1\n1 0\n".as_bytes()).is_err());
        assert!(read_edge_list("3 1\n1 1\n".as_bytes()).is_err());
        assert!(read_dimacs("p edge 3 1\ne 0 1\n".as_bytes()).is_err());
        assert!(read_dimacs("e 1 2\n".as_bytes()).is_err());
        assert!(read_edge_list("".as_bytes()).is_err());
    }

    #[test]
    fn empty_graph_roundtrips() {
        let g = Graph::empty(0);
        assert_eq!(read_any(&edge_list_string(&g)).unwrap(), g);
        assert_eq!(read_any(&dimacs_string(&g)).unwrap(), g);
    }
}
