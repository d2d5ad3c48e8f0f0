//! Text formats for graphs, triangulations and measurement curves.
//!
//! Graph files are ASCII decimal throughout: a header line "V E", then E
//! lines "u v". A triangulation appends a "faces F" separator and F lines
//! "a b c"; a rooted graph appends a trailer line "root r". Writers are
//! deterministic down to the byte, so regenerating an artifact from the same
//! seed reproduces it exactly. Curves go out as small CSVs with a header
//! row.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, SphereTriangulation};
use crate::profile::StepFunction;
use crate::sturm::SigmaProfile;

fn parse_token<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad number {tok:?}"),
    })
}

/// Splits a line into exactly `want` whitespace-separated numbers.
fn parse_row<const N: usize>(text: &str, line: usize) -> Result<[usize; N]> {
    let mut out = [0usize; N];
    let mut toks = text.split_whitespace();
    for slot in out.iter_mut() {
        let tok = toks.next().ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected {N} fields, got fewer"),
        })?;
        *slot = parse_token(tok, line)?;
    }
    if toks.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: format!("expected {N} fields, got more"),
        });
    }
    Ok(out)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.canonical_edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Reads the body shared by all graph formats and returns the graph plus
/// the 1-based line number of the first unread line.
fn read_graph_body<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
) -> Result<(Graph, usize)> {
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let [v, e] = parse_row::<2>(header, 1)?;
    let mut pairs = Vec::with_capacity(e);
    for k in 0..e {
        let line_no = k + 2;
        let row = lines.next().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected {e} edge lines, file ended early"),
        })?;
        let [a, b] = parse_row::<2>(row, line_no)?;
        pairs.push((a, b));
    }
    Ok((Graph::from_edge_list_with_vertices(v, &pairs)?, e + 2))
}

fn expect_end<'a>(mut lines: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match lines.find(|l| !l.trim().is_empty()) {
        None => Ok(()),
        Some(extra) => Err(Error::Parse {
            line,
            msg: format!("unexpected trailing content {extra:?}"),
        }),
    }
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines();
    let (g, next) = read_graph_body(&mut lines)?;
    expect_end(lines, next)?;
    Ok(g)
}

pub fn write_triangulation(t: &SphereTriangulation) -> String {
    let mut out = write_edge_list(&t.graph);
    let _ = writeln!(out, "faces {}", t.faces.len());
    for [a, b, c] in &t.faces {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}

pub fn read_triangulation(text: &str) -> Result<SphereTriangulation> {
    let mut lines = text.lines();
    let (graph, mut line_no) = read_graph_body(&mut lines)?;
    let sep = lines.next().ok_or_else(|| Error::Parse {
        line: line_no,
        msg: "missing \"faces F\" separator".into(),
    })?;
    let f = match sep.split_whitespace().collect::<Vec<_>>()[..] {
        ["faces", n] => parse_token::<usize>(n, line_no)?,
        _ => {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected \"faces F\", got {sep:?}"),
            })
        }
    };
    line_no += 1;
    let mut faces = Vec::with_capacity(f);
    for _ in 0..f {
        let row = lines.next().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected {f} face lines, file ended early"),
        })?;
        let [a, b, c] = parse_row::<3>(row, line_no)?;
        faces.push([a, b, c]);
        line_no += 1;
    }
    expect_end(lines, line_no)?;
    Ok(SphereTriangulation { graph, faces })
}

pub fn write_rooted(g: &Graph, root: usize) -> String {
    let mut out = write_edge_list(g);
    let _ = writeln!(out, "root {root}");
    out
}

pub fn read_rooted(text: &str) -> Result<(Graph, usize)> {
    let mut lines = text.lines();
    let (graph, line_no) = read_graph_body(&mut lines)?;
    let trailer = lines.next().ok_or_else(|| Error::Parse {
        line: line_no,
        msg: "missing \"root r\" trailer".into(),
    })?;
    let root = match trailer.split_whitespace().collect::<Vec<_>>()[..] {
        ["root", r] => parse_token::<usize>(r, line_no)?,
        _ => {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected \"root r\", got {trailer:?}"),
            })
        }
    };
    if root >= graph.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: root, len: graph.vertex_count() });
    }
    expect_end(lines, line_no + 1)?;
    Ok((graph, root))
}

/// One CSV row per constant piece of the step function.
pub fn step_function_csv(rho: &StepFunction) -> String {
    let mut out = String::from("t_start,t_end,value\n");
    for (lo, hi, v) in rho.pieces() {
        let _ = writeln!(out, "{},{},{v}", lo as f64 / 2.0, hi as f64 / 2.0);
    }
    out
}

pub fn sigma_csv(sigma: &SigmaProfile) -> String {
    let mut out = String::from("t,sigma\n");
    for (i, s) in sigma.samples().iter().enumerate() {
        let _ = writeln!(out, "{},{s}", i as f64 * sigma.h());
    }
    out
}

pub fn tv_csv(curve: &[(usize, f64)]) -> String {
    let mut out = String::from("t,tv\n");
    for (t, tv) in curve {
        let _ = writeln!(out, "{t},{tv}");
    }
    out
}
