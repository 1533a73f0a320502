//! Graph sources: named families, graph6 strings and files.

use std::fs;
use std::path::Path;

use alphatheta::graph::{named_graph, parse_edge_list, parse_graph6, Family};
use alphatheta::Graph;

/// Builds a graph from `NAME [PARAMS...]`.
pub fn family_graph(words: &[String]) -> Result<Graph, String> {
    let (name, params) = words.split_first().ok_or("--family needs a family name")?;
    let family: Family = name.parse().map_err(|e| format!("{}", e))?;
    let params = params
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| format!("family parameter {:?} is not a nonnegative integer", p)))
        .collect::<Result<Vec<_>, _>>()?;
    named_graph(family, &params).map_err(|e| e.to_string())
}

/// Reads a graph file, detecting the format: an edge list starts with two
/// integers `n m` on its first content line, anything else is graph6.
pub fn read_graph_file(path: &Path) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_graph_text(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

pub fn parse_graph_text(text: &str) -> Result<Graph, String> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    let looks_like_edges = {
        let mut tokens = first.split_whitespace();
        matches!((tokens.next(), tokens.next(), tokens.next()), (Some(a), Some(b), None)
            if a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok())
    };
    if looks_like_edges {
        parse_edge_list(text).map_err(|e| e.to_string())
    } else {
        parse_graph6(text.trim()).map_err(|e| e.to_string())
    }
}
