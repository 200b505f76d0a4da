use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{DropCounts, Graph};
use crate::error::{Error, Result};

/// What the loader saw besides the graph itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub data_lines: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
    /// Connected components of the loaded graph. Above one, `lambda1` stays
    /// at zero until every component holds at least one pin.
    pub components: usize,
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// Parses a whitespace-separated edge list.
///
/// Labels are opaque tokens mapped to `0..n` in first-seen order. Lines
/// starting with `#` or `%` and blank lines are skipped. Self-loops are
/// dropped before labels are assigned, so a token that only ever appears in
/// a self-loop is not a node.
pub fn load_edge_list(reader: impl BufRead) -> Result<(Graph, LoadReport)> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut data_lines = 0;
    let mut loops = 0;

    let mut intern = |token: &str| -> usize {
        if let Some(&i) = index.get(token) {
            return i;
        }
        let i = labels.len();
        labels.push(token.to_owned());
        index.insert(token.to_owned(), i);
        i
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || is_comment(trimmed) {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node labels, found {} tokens", trimmed.split_whitespace().count()),
                })
            }
        };
        data_lines += 1;
        if a == b {
            loops += 1;
            continue;
        }
        let a = intern(a);
        let b = intern(b);
        edges.push((a, b));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }

    let (graph, DropCounts { duplicate_edges, self_loops }) = Graph::from_labelled_edges(labels, edges)?;
    let report =
        LoadReport { data_lines, duplicate_edges, self_loops: self_loops + loops, components: graph.component_count() };
    Ok((graph, report))
}

pub fn load_edge_list_file(path: impl AsRef<Path>) -> Result<(Graph, LoadReport)> {
    let file = File::open(path.as_ref())?;
    load_edge_list(BufReader::new(file))
}

/// Writes `graph` as an edge list using its labels.
///
/// Edges are ordered so that reloading assigns the same indices whenever the
/// graph's index order is a first-seen order (always true for graphs that came
/// from [`load_edge_list`]). Isolated nodes cannot be expressed in this
/// format; their count is written as a comment.
pub fn write_edge_list(graph: &Graph, mut out: impl Write) -> Result<()> {
    let n = graph.node_count();
    writeln!(out, "# nodes {} edges {}", n, graph.edge_count())?;
    let isolated = (0..n).filter(|&v| graph.degree(v) == 0).count();
    if isolated > 0 {
        writeln!(out, "# isolated nodes omitted: {isolated}")?;
    }

    let mut emitted: Vec<Vec<bool>> = (0..n).map(|v| vec![false; graph.degree(v)]).collect();
    let slot = |a: usize, b: usize| graph.neighbors(a).binary_search(&b).unwrap();
    let mark = |emitted: &mut Vec<Vec<bool>>, a: usize, b: usize| {
        emitted[a][slot(a, b)] = true;
        emitted[b][slot(b, a)] = true;
    };
    let line = |out: &mut dyn Write, a: usize, b: usize| -> std::io::Result<()> {
        writeln!(out, "{} {}", graph.label(a), graph.label(b))
    };

    let mut introduced = vec![false; n];
    for t in 0..n {
        if introduced[t] || graph.degree(t) == 0 {
            continue;
        }
        let earlier = graph.neighbors(t).iter().copied().find(|&w| introduced[w] && !emitted[t][slot(t, w)]);
        if let Some(w) = earlier {
            line(&mut out, w, t)?;
            mark(&mut emitted, w, t);
            introduced[t] = true;
            continue;
        }
        // either pair t with the next node, or fall back to its smallest neighbor
        let partner =
            if t + 1 < n && graph.has_edge(t, t + 1) && !introduced[t + 1] { t + 1 } else { graph.neighbors(t)[0] };
        line(&mut out, t, partner)?;
        mark(&mut emitted, t, partner);
        introduced[t] = true;
        introduced[partner] = true;
    }
    for (a, b) in graph.edges() {
        if !emitted[a][slot(a, b)] {
            line(&mut out, a, b)?;
        }
    }
    Ok(())
}
