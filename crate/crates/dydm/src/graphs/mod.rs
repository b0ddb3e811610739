//! Undirected weighted graphs, their adjacency matrices, and file formats.

mod datasets;
mod wl;

pub use datasets::{
    gen_ego_graphs, gen_wl_bimodal, split_dataset, GraphDataset,
};
pub use wl::{wl_equivalent, wl_refine, ColorHistogram};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

/// Undirected weighted graph. Edges are stored as (u, v, w) with u <= v;
/// self-loops are permitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32, f64)>,
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    n: usize,
    edges: Vec<(u32, u32, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl Graph {
    pub fn new(n: usize, mut edges: Vec<(u32, u32, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("graph needs at least one vertex"));
        }
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
            if e.1 as usize >= n {
                return Err(Error::config(format!("edge ({}, {}) out of range", e.0, e.1)));
            }
            if !e.2.is_finite() {
                return Err(Error::numeric("edge weight must be finite"));
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        if edges.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::config("duplicate edge"));
        }
        Ok(Graph { n, edges })
    }

    pub fn from_unweighted(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        Graph::new(n, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }

    /// Neighbour lists under unweighted semantics; a self-loop makes a vertex
    /// its own neighbour (once).
    pub fn neighbors(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u as usize].push(v);
            if u != v {
                adj[v as usize].push(u);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    /// Unweighted degrees (self-loop counts once, matching the adjacency row
    /// sum).
    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors().iter().map(|a| a.len()).collect()
    }

    /// `Some(k)` when every vertex has exactly k neighbours.
    pub fn is_k_regular(&self) -> Option<usize> {
        let deg = self.degrees();
        let k = deg[0];
        deg.iter().all(|&d| d == k).then_some(k)
    }

    /// Adjacency matrix under a vertex ordering: entry (i, j) is the weight of
    /// the edge between `order[i]` and `order[j]`, zero for non-edges.
    /// `None` uses the identity order.
    pub fn adjacency_matrix(&self, order: Option<&[usize]>) -> Result<SymMatrix> {
        let position: Vec<usize> = match order {
            None => (0..self.n).collect(),
            Some(ord) => {
                if ord.len() != self.n {
                    return Err(Error::SizeMismatch(ord.len(), self.n));
                }
                let mut pos = vec![usize::MAX; self.n];
                for (i, &v) in ord.iter().enumerate() {
                    if v >= self.n || pos[v] != usize::MAX {
                        return Err(Error::config("order must be a bijection on [n]"));
                    }
                    pos[v] = i;
                }
                pos
            }
        };
        let mut m = SymMatrix::zeros(self.n);
        for &(u, v, w) in &self.edges {
            m.set(position[u as usize], position[v as usize], w);
        }
        Ok(m)
    }

    /// Relabels vertices: vertex v becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(perm.len(), self.n));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, w)| (perm[u as usize] as u32, perm[v as usize] as u32, w))
            .collect();
        Graph::new(self.n, edges)
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    stack.push(u as usize);
                }
            }
        }
        count == self.n
    }

    // Named constructions used by datasets and tests.

    pub fn cycle(n: usize) -> Graph {
        let edges = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect::<Vec<_>>();
        Graph::from_unweighted(n, &edges).unwrap()
    }

    pub fn path_graph(n: usize) -> Graph {
        let edges = (0..n as u32 - 1).map(|i| (i, i + 1)).collect::<Vec<_>>();
        Graph::from_unweighted(n, &edges).unwrap()
    }

    /// Star with `leaves` leaves around vertex 0.
    pub fn star(leaves: usize) -> Graph {
        let edges = (1..=leaves as u32).map(|i| (0, i)).collect::<Vec<_>>();
        Graph::from_unweighted(leaves + 1, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_unweighted(n, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a as u32 {
            for v in 0..b as u32 {
                edges.push((u, a as u32 + v));
            }
        }
        Graph::from_unweighted(a + b, &edges).unwrap()
    }

    /// Outer 5-cycle, inner pentagram, spokes between them. 3-regular on 10
    /// vertices, girth 5.
    pub fn petersen() -> Graph {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        Graph::from_unweighted(10, &edges).unwrap()
    }

    /// Two 5-cycles joined by rungs (C5 x K2). 3-regular on 10 vertices,
    /// girth 4, not isomorphic to the Petersen graph.
    pub fn pentagonal_prism() -> Graph {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (5, 6), (6, 7), (7, 8), (8, 9), (9, 5),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        ];
        Graph::from_unweighted(10, &edges).unwrap()
    }

    // JSON-lines serialization: {"n": .., "edges": [[u, v, w], ..],
    // "label": ..} per line.

    pub fn to_json_line(&self, label: Option<&str>) -> Result<String> {
        Ok(serde_json::to_string(&GraphRecord {
            n: self.n,
            edges: self.edges.clone(),
            label: label.map(str::to_owned),
        })?)
    }

    pub fn from_json_line(line: &str) -> Result<(Graph, Option<String>)> {
        let rec: GraphRecord = serde_json::from_str(line)?;
        Ok((Graph::new(rec.n, rec.edges)?, rec.label))
    }
}

/// Writes a dataset as JSON lines.
pub fn write_graphs(mut w: impl Write, dataset: &GraphDataset) -> Result<()> {
    for (g, label) in dataset.graphs.iter().zip(&dataset.labels) {
        writeln!(w, "{}", g.to_json_line(label.as_deref())?)?;
    }
    Ok(())
}

/// Reads a JSON-lines dataset.
pub fn read_graphs(r: impl BufRead) -> Result<GraphDataset> {
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (g, label) = Graph::from_json_line(&line)?;
        graphs.push(g);
        labels.push(label);
    }
    Ok(GraphDataset {
        graphs,
        labels,
        split: None,
    })
}

/// Parses a whitespace-separated edge list ("u v" per line, '%' or '#'
/// comments). Vertex ids are remapped to a dense range in sorted order;
/// duplicate edges collapse; weights default to 1.
pub fn parse_edge_list(r: impl BufRead) -> Result<Graph> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut ids: BTreeMap<u64, u32> = BTreeMap::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64> {
            tok.ok_or(Error::Parse {
                line: lineno + 1,
                message: "expected two vertex ids".into(),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line: lineno + 1,
                message: format!("{e}"),
            })
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        ids.entry(u).or_insert(0);
        ids.entry(v).or_insert(0);
        raw_edges.push((u, v));
    }
    if ids.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for (i, (_, v)) in ids.iter_mut().enumerate() {
        *v = i as u32;
    }
    let mut edges: Vec<(u32, u32)> = raw_edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (ids[&u], ids[&v]);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Graph::from_unweighted(ids.len(), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_sym;

    #[test]
    fn triangle_adjacency_identity_order() {
        let g = Graph::complete(3);
        let m = g.adjacency_matrix(None).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn edgeless_graph_is_the_zero_matrix() {
        let g = Graph::new(4, vec![]).unwrap();
        let m = g.adjacency_matrix(Some(&[3, 1, 0, 2])).unwrap();
        assert_eq!(m.frobenius_norm(), 0.0);
    }

    #[test]
    fn path_reversed_order_flips_both_axes() {
        let g = Graph::path_graph(3);
        let id = g.adjacency_matrix(None).unwrap();
        let rev = g.adjacency_matrix(Some(&[2, 1, 0])).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(rev.get(i, j), id.get(2 - i, 2 - j));
            }
        }
    }

    #[test]
    fn permuted_adjacency_is_a_conjugation() {
        // A_sigma = P A P^T for the permutation matrix with
        // P[i][order[i]] = 1.
        let g = Graph::petersen();
        let id = g.adjacency_matrix(None).unwrap().to_dense();
        let order: Vec<usize> = vec![4, 7, 1, 9, 0, 3, 2, 8, 5, 6];
        let m = g.adjacency_matrix(Some(&order)).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(m.get(i, j), id[order[i] * 10 + order[j]]);
            }
        }
    }

    #[test]
    fn regularity_probes() {
        assert_eq!(Graph::cycle(5).is_k_regular(), Some(2));
        assert_eq!(Graph::star(3).is_k_regular(), None);
        assert_eq!(Graph::complete_bipartite(3, 3).is_k_regular(), Some(3));
        assert_eq!(Graph::petersen().is_k_regular(), Some(3));
        assert_eq!(Graph::pentagonal_prism().is_k_regular(), Some(3));
    }

    #[test]
    fn named_pair_have_distinct_spectra() {
        let a = eig_sym(&Graph::petersen().adjacency_matrix(None).unwrap()).unwrap();
        let b = eig_sym(&Graph::pentagonal_prism().adjacency_matrix(None).unwrap()).unwrap();
        let dist: f64 = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        assert!(dist > 3.0, "spectra too close: {dist}");
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::new(3, vec![(0, 1, 0.5), (2, 2, -1.0)]).unwrap();
        let line = g.to_json_line(Some("A")).unwrap();
        let (back, label) = Graph::from_json_line(&line).unwrap();
        assert_eq!(back, g);
        assert_eq!(label.as_deref(), Some("A"));
    }

    #[test]
    fn edge_list_parsing_remaps_and_dedupes() {
        let src = "% comment\n7 3\n# another\n3 7\n7 12\n12 12\n";
        let g = parse_edge_list(src.as_bytes()).unwrap();
        assert_eq!(g.n(), 3); // ids 3, 7, 12
        assert_eq!(g.edges().len(), 3); // (3,7), (7,12), loop at 12
        assert!(matches!(
            parse_edge_list("1 x\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
