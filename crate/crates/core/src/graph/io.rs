use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::SparseGraph;
use crate::error::{DpcdError, Result};

/// Counters for entries the loaders normalized away.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
    pub zero_weights_dropped: usize,
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: SparseGraph,
    pub stats: LoadStats,
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    let w: f64 = tok
        .parse()
        .map_err(|_| DpcdError::parse(line, format!("invalid weight {tok:?}")))?;
    if !w.is_finite() {
        return Err(DpcdError::parse(line, format!("non-finite weight {tok:?}")));
    }
    if w < 0.0 {
        return Err(DpcdError::domain(format!("negative weight {w} at line {line}")));
    }
    Ok(w)
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| DpcdError::parse(line, format!("invalid node id {tok:?}")))
}

/// Reads whitespace-separated `u v [w]` lines with 0-based ids.
///
/// Lines starting with `#` or `%` are comments, except a `#nodes N` header
/// which fixes the node count. Repeated undirected pairs are summed.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<LoadedGraph> {
    let mut stats = LoadStats::default();
    let mut declared: Option<usize> = None;
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut max_id: Option<usize> = None;

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(count) = rest.trim_start().strip_prefix("nodes") {
                let n = count
                    .trim()
                    .parse()
                    .map_err(|_| DpcdError::parse(lineno, "malformed #nodes header"))?;
                declared = Some(n);
            }
            continue;
        }
        if trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(DpcdError::parse(
                lineno,
                format!("expected `u v [w]`, found {} fields", toks.len()),
            ));
        }
        let u = parse_id(toks[0], lineno)?;
        let v = parse_id(toks[1], lineno)?;
        let w = match toks.get(2) {
            Some(t) => parse_weight(t, lineno)?,
            None => 1.0,
        };
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        if u == v {
            stats.self_loops_dropped += 1;
            continue;
        }
        if w == 0.0 {
            stats.zero_weights_dropped += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        match weights.get_mut(&key) {
            Some(acc) => {
                *acc += w;
                stats.duplicates_merged += 1;
            }
            None => {
                weights.insert(key, w);
            }
        }
    }

    let n = match (declared, max_id) {
        (Some(n), Some(m)) if m >= n => {
            return Err(DpcdError::domain(format!(
                "node id {m} exceeds declared node count {n}"
            )))
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => 0,
    };
    if stats.self_loops_dropped > 0 {
        log::warn!("dropped {} self-loop(s)", stats.self_loops_dropped);
    }
    let graph = SparseGraph::from_canonical(n, weights.into_iter().map(|((i, j), w)| (i, j, w)).collect());
    Ok(LoadedGraph { graph, stats })
}

/// Reads a MatrixMarket coordinate matrix (real, integer or pattern;
/// symmetric or general). General matrices are symmetrized by averaging
/// `W_ij` and `W_ji`; ids are converted to 0-based.
pub fn load_matrix_market<R: BufRead>(source: R) -> Result<LoadedGraph> {
    let mut lines = source.lines().enumerate();
    let banner = match lines.next() {
        Some((_, l)) => l?,
        None => return Err(DpcdError::parse(1, "empty input")),
    };
    let fields: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(DpcdError::parse(1, "expected `%%MatrixMarket matrix coordinate <field> <symmetry>`"));
    }
    let pattern = match fields[3].as_str() {
        "pattern" => true,
        "real" | "integer" => false,
        other => return Err(DpcdError::parse(1, format!("unsupported field {other:?}"))),
    };
    let symmetric = match fields[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(DpcdError::parse(1, format!("unsupported symmetry {other:?}"))),
    };

    let mut header: Option<(usize, usize)> = None;
    let mut stats = LoadStats::default();
    let mut directed: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut seen = 0usize;

    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((n, nnz)) = header else {
            if toks.len() != 3 {
                return Err(DpcdError::parse(lineno, "expected size line `rows cols entries`"));
            }
            let dims: Vec<usize> = toks
                .iter()
                .map(|t| t.parse().map_err(|_| DpcdError::parse(lineno, format!("invalid size {t:?}"))))
                .collect::<Result<_>>()?;
            if dims[0] != dims[1] {
                return Err(DpcdError::parse(
                    lineno,
                    format!("adjacency must be square, got {}x{}", dims[0], dims[1]),
                ));
            }
            header = Some((dims[0], dims[2]));
            continue;
        };
        let expected = if pattern { 2 } else { 3 };
        if toks.len() != expected {
            return Err(DpcdError::parse(lineno, format!("expected {expected} fields, found {}", toks.len())));
        }
        seen += 1;
        if seen > nnz {
            return Err(DpcdError::parse(lineno, format!("more than the declared {nnz} entries")));
        }
        let i = parse_id(toks[0], lineno)?;
        let j = parse_id(toks[1], lineno)?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(DpcdError::parse(lineno, format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
        }
        let w = if pattern { 1.0 } else { parse_weight(toks[2], lineno)? };
        let (i, j) = (i - 1, j - 1);
        if i == j {
            stats.self_loops_dropped += 1;
            continue;
        }
        let key = if symmetric { (i.min(j), i.max(j)) } else { (i, j) };
        if let Some(acc) = directed.get_mut(&key) {
            *acc += w;
            stats.duplicates_merged += 1;
        } else {
            directed.insert(key, w);
        }
    }

    let Some((n, nnz)) = header else {
        return Err(DpcdError::parse(1, "missing size line"));
    };
    if seen < nnz {
        return Err(DpcdError::parse(0, format!("declared {nnz} entries, found {seen}")));
    }

    let mut undirected: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for ((i, j), w) in directed {
        if symmetric {
            undirected.insert((i, j), w);
        } else {
            *undirected.entry((i.min(j), i.max(j))).or_insert(0.0) += 0.5 * w;
        }
    }
    let mut edges = Vec::with_capacity(undirected.len());
    for ((i, j), w) in undirected {
        if w == 0.0 {
            stats.zero_weights_dropped += 1;
        } else {
            edges.push((i, j, w));
        }
    }
    Ok(LoadedGraph {
        graph: SparseGraph::from_canonical(n, edges),
        stats,
    })
}

/// Writes `#nodes N` followed by one `i j w` line per undirected edge.
/// Weights use the shortest representation that parses back to the same bits.
pub fn write_edge_list<W: Write>(graph: &SparseGraph, mut out: W) -> Result<()> {
    writeln!(out, "#nodes {}", graph.node_count())?;
    for &(i, j, w) in graph.edges() {
        writeln!(out, "{i} {j} {w}")?;
    }
    Ok(())
}

/// Writes a `real symmetric` MatrixMarket file (lower triangle, 1-based).
pub fn write_matrix_market<W: Write>(graph: &SparseGraph, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    let n = graph.node_count();
    writeln!(out, "{n} {n} {}", graph.edge_count())?;
    for &(i, j, w) in graph.edges() {
        writeln!(out, "{} {} {w}", j + 1, i + 1)?;
    }
    Ok(())
}
