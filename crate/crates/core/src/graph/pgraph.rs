//! PGRAPH v1 text format.
//!
//! ```text
//! # comment
//! dim <d>
//! vertices <nu>
//! potential <vid> <q>
//! edge <u> <v> <n_1> ... <n_d>
//! ```

use std::fmt::Write;

use super::{Edge, FundamentalGraph, IndexVector};
use crate::error::{Error, Result};
use crate::report::fmt_real;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_graph(text: &str) -> Result<FundamentalGraph> {
    let mut dim: Option<usize> = None;
    let mut num_vertices: Option<usize> = None;
    let mut potentials: Vec<(usize, usize, f64)> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "dim" => {
                if toks.len() != 2 {
                    return Err(parse_err(lineno, "expected 'dim <d>'"));
                }
                if dim.is_some() {
                    return Err(parse_err(lineno, "duplicate dim line"));
                }
                let d: usize = parse_num(toks[1], lineno, "dimension")?;
                if d == 0 {
                    return Err(parse_err(lineno, "dimension must be positive"));
                }
                dim = Some(d);
            }
            "vertices" => {
                if toks.len() != 2 {
                    return Err(parse_err(lineno, "expected 'vertices <count>'"));
                }
                if num_vertices.is_some() {
                    return Err(parse_err(lineno, "duplicate vertices line"));
                }
                let n: usize = parse_num(toks[1], lineno, "vertex count")?;
                if n == 0 {
                    return Err(parse_err(lineno, "vertex count must be positive"));
                }
                num_vertices = Some(n);
            }
            "potential" => {
                if toks.len() != 3 {
                    return Err(parse_err(lineno, "expected 'potential <vid> <q>'"));
                }
                let v: usize = parse_num(toks[1], lineno, "vertex id")?;
                let q: f64 = parse_num(toks[2], lineno, "potential")?;
                if !q.is_finite() {
                    return Err(parse_err(lineno, "potential must be finite"));
                }
                if potentials.iter().any(|&(_, u, _)| u == v) {
                    return Err(parse_err(
                        lineno,
                        format!("duplicate potential for vertex {v}"),
                    ));
                }
                potentials.push((lineno, v, q));
            }
            "edge" => {
                let d = dim.ok_or_else(|| parse_err(lineno, "edge before dim"))?;
                if toks.len() < 3 {
                    return Err(parse_err(lineno, "expected 'edge <u> <v> <index...>'"));
                }
                let u: usize = parse_num(toks[1], lineno, "vertex id")?;
                let v: usize = parse_num(toks[2], lineno, "vertex id")?;
                let index = toks[3..]
                    .iter()
                    .map(|t| parse_num::<i64>(t, lineno, "index entry"))
                    .collect::<Result<Vec<_>>>()?;
                if index.len() != d {
                    return Err(parse_err(
                        lineno,
                        format!("index arity {} does not match dim {d}", index.len()),
                    ));
                }
                edges.push(Edge::new(u, v, IndexVector::new(index)));
            }
            other => return Err(parse_err(lineno, format!("unknown keyword '{other}'"))),
        }
    }

    let dim = dim.ok_or_else(|| parse_err(0, "missing dim line"))?;
    let n = num_vertices.ok_or_else(|| parse_err(0, "missing vertices line"))?;
    let mut potential = vec![0.0; n];
    for (lineno, v, q) in potentials {
        if v >= n {
            return Err(parse_err(lineno, format!("vertex id {v} out of range")));
        }
        potential[v] = q;
    }
    FundamentalGraph::new(dim, n, edges)?.with_potential(potential)
}

pub fn serialize_graph(g: &FundamentalGraph) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", g.dim()).unwrap();
    writeln!(out, "vertices {}", g.num_vertices()).unwrap();
    for (v, &q) in g.potential().iter().enumerate() {
        if q != 0.0 {
            writeln!(out, "potential {v} {}", fmt_real(q)).unwrap();
        }
    }
    for e in g.edges() {
        write!(out, "edge {} {}", e.tail, e.head).unwrap();
        for n in e.index.entries() {
            write!(out, " {n}").unwrap();
        }
        out.push('\n');
    }
    out
}
