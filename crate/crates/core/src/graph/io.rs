//! Text formats: whitespace-separated edge lists and DOT export.
//!
//! One record per line, `u v` (plain) or `u v c` (coloured), `#` starts a
//! comment. Writers emit a `# n=<count>` header so isolated trailing
//! vertices survive a round trip; the reader honours it when present and
//! otherwise infers `n` as max id + 1.

use super::{ColouredGraph, Graph};
use crate::{Colour, Error, Result, Vertex};
use std::io::{BufRead, Write};

/// Result of parsing an edge list: the colour column decides the type.
#[derive(Debug, Clone)]
pub enum LoadedGraph {
    Plain(Graph),
    Coloured(ColouredGraph),
}

impl LoadedGraph {
    pub fn graph(&self) -> &Graph {
        match self {
            LoadedGraph::Plain(g) => g,
            LoadedGraph::Coloured(cg) => cg.graph(),
        }
    }

    pub fn into_coloured(self) -> Option<ColouredGraph> {
        match self {
            LoadedGraph::Plain(_) => None,
            LoadedGraph::Coloured(cg) => Some(cg),
        }
    }
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# n={}", g.n())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn write_coloured_edge_list<W: Write>(cg: &ColouredGraph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# n={}", cg.n())?;
    for (i, &(u, v)) in cg.graph().edges().iter().enumerate() {
        writeln!(w, "{u} {v} {}", cg.colour_at(i))?;
    }
    Ok(())
}

/// Parses an edge list; all lines must agree on whether a colour column is
/// present. Loops, duplicate edges, and ragged records are [`Error::Parse`].
pub fn read_edge_list<R: BufRead>(r: R) -> Result<LoadedGraph> {
    let mut records: Vec<(usize, Vertex, Vertex, Option<Colour>)> = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut max_id = 0;
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = match line.split_once('#') {
            Some((before, comment)) => {
                if let Some(rest) = comment.trim().strip_prefix("n=") {
                    if declared_n.is_none() {
                        declared_n = Some(rest.trim().parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad vertex count in '# n={}'", rest.trim()),
                        })?);
                    }
                }
                before
            }
            None => &line,
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 'u v' or 'u v c', got {} fields", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not a non-negative integer: '{s}'"),
            })
        };
        let u = parse(fields[0])?;
        let v = parse(fields[1])?;
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("loop at vertex {u}"),
            });
        }
        let c = if fields.len() == 3 {
            Some(parse(fields[2])? as Colour)
        } else {
            None
        };
        max_id = max_id.max(u).max(v);
        records.push((lineno, u, v, c));
    }

    let n = match declared_n {
        Some(n) => {
            if !records.is_empty() && n <= max_id {
                return Err(Error::invalid(format!(
                    "declared n={n} but edge mentions vertex {max_id}"
                )));
            }
            n
        }
        None if records.is_empty() => 0,
        None => max_id + 1,
    };

    let coloured = match records.first() {
        Some(&(_, _, _, c)) => c.is_some(),
        None => false,
    };
    let mut g = Graph::empty(n);
    let mut colours = Vec::new();
    for &(lineno, u, v, c) in &records {
        if c.is_some() != coloured {
            return Err(Error::Parse {
                line: lineno,
                msg: "mixed coloured and uncoloured records".into(),
            });
        }
        if !g.add_edge(u, v) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("duplicate edge ({u},{v})"),
            });
        }
        if let Some(c) = c {
            colours.push((u.min(v), u.max(v), c));
        }
    }
    if coloured {
        // Edge insertion sorted the list; align colours by pair lookup.
        let mut by_index = vec![0; g.m()];
        for (u, v, c) in colours {
            by_index[g.edge_index(u, v).expect("edge was added")] = c;
        }
        Ok(LoadedGraph::Coloured(ColouredGraph::from_colour_vec(
            g, by_index,
        )?))
    } else {
        Ok(LoadedGraph::Plain(g))
    }
}

/// DOT export for visualisation; colours become edge labels when present.
pub fn write_dot<W: Write>(g: &Graph, colours: Option<&ColouredGraph>, mut w: W) -> std::io::Result<()> {
    writeln!(w, "graph G {{")?;
    for v in 0..g.n() {
        writeln!(w, "  {v};")?;
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        match colours {
            Some(cg) => writeln!(w, "  {u} -- {v} [label=\"{}\"];", cg.colour_at(i))?,
            None => writeln!(w, "  {u} -- {v};")?,
        }
    }
    writeln!(w, "}}")
}
