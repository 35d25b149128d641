//! Undirected graphs: edge-list parsing, the two builtin example graphs, and
//! a seeded planted-partition generator for community benchmarks.
//!
//! Edge-list format: ASCII text, `#`-prefixed comment lines, otherwise
//! `u v` with decimal, 0-based, contiguous ids. Graphs are validated to be
//! simple, symmetric and connected at construction; everything downstream
//! relies on that.

use alloc::collections::VecDeque;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Build from an explicit edge list; ids must be contiguous `0..n`.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { line: 0, site: u });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nb in adjacency.iter_mut() {
            nb.sort_unstable();
            nb.dedup();
        }
        let edge_count = adjacency.iter().map(|nb| nb.len()).sum::<usize>() / 2;
        let g = Graph { adjacency, edge_count };
        if let Some(missing) = g.adjacency.iter().position(|nb| nb.is_empty()) {
            // an isolated site either breaks contiguity or connectivity
            if n > 1 {
                return Err(Error::NonContiguousIds { expected: n, missing });
            }
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Parse the edge-list text format.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let u = parse_id(it.next(), line)?;
            let v = parse_id(it.next(), line)?;
            if it.next().is_some() {
                return Err(Error::EdgeListParse { line, msg: "expected exactly two ids".to_string() });
            }
            if u == v {
                return Err(Error::SelfLoop { line, site: u });
            }
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        Self::from_edges(&edges).map_err(|e| match e {
            // from_edges has no line information for self-loops
            Error::SelfLoop { site, .. } => Error::SelfLoop { line: 0, site },
            other => other,
        })
    }

    /// The builtin example graphs: `fig1` is a single edge on 2 sites,
    /// `fig2` two triangles `{0,1,2}`, `{3,4,5}` bridged by the edge `0-3`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "fig1" => Self::from_edges(&[(0, 1)]),
            "fig2" => Self::from_edges(&[(0, 1), (0, 2), (1, 2), (0, 3), (3, 4), (3, 5), (4, 5)]),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, site: usize) -> usize {
        self.adjacency[site].len()
    }

    pub fn neighbors(&self, site: usize) -> &[usize] {
        &self.adjacency[site]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nb)| {
            nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// `N(E)` for a site subset: all neighbors of members, minus the members.
    pub fn subset_neighborhood(&self, members: &[usize]) -> Result<Vec<usize>> {
        if members.is_empty() {
            return Err(Error::EmptyCliqueMembers);
        }
        let n = self.len();
        let mut mark = vec![false; n];
        for &s in members {
            if s >= n {
                return Err(Error::SiteOutOfRange { site: s, n });
            }
            mark[s] = true;
        }
        let mut out = Vec::new();
        for &s in members {
            for &t in &self.adjacency[s] {
                if !mark[t] {
                    mark[t] = true;
                    out.push(t);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or(Error::EdgeListParse { line, msg: "expected two ids".to_string() })?;
    tok.parse::<usize>().map_err(|_| Error::EdgeListParse {
        line,
        msg: alloc::format!("invalid id '{tok}'"),
    })
}

/// A planted-partition sample together with its ground-truth block labels.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    /// Block index of every site, in generation order.
    pub membership: Vec<usize>,
}

impl PlantedGraph {
    /// Sites grouped by block.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let nb = self.membership.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); nb];
        for (site, &b) in self.membership.iter().enumerate() {
            out[b].push(site);
        }
        out
    }
}

const PLANTED_MAX_ATTEMPTS: usize = 100;

/// Random graph with intra-block edge probability `p_in` and inter-block
/// `p_out`. Regenerated with a fresh sub-stream until connected; samples are
/// bit-identical for a fixed seed.
pub fn planted_partition(
    blocks: &[usize],
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<PlantedGraph> {
    if blocks.is_empty() || blocks.iter().any(|&b| b == 0) {
        return Err(Error::BadBlockSizes);
    }
    if !(0.0..=1.0).contains(&p_out) || !(p_out..=1.0).contains(&p_in) {
        return Err(Error::BadEdgeProbabilities);
    }
    let n: usize = blocks.iter().sum();
    let mut membership = Vec::with_capacity(n);
    for (b, &size) in blocks.iter().enumerate() {
        membership.extend(core::iter::repeat(b).take(size));
    }
    for attempt in 0..PLANTED_MAX_ATTEMPTS {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let p = if membership[u] == membership[v] { p_in } else { p_out };
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        match Graph::from_edges(&edges) {
            Ok(graph) if graph.len() == n => {
                return Ok(PlantedGraph { graph, membership });
            }
            _ => continue,
        }
    }
    Err(Error::ConnectivityUnattainable { attempts: PLANTED_MAX_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_small_chain() {
        let g = Graph::parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn parse_fig2_edge_list() {
        let g = Graph::parse_edge_list("0 1\n0 2\n1 2\n0 3\n3 4\n3 5\n4 5").unwrap();
        assert_eq!(g, Graph::builtin("fig2").unwrap());
        assert_eq!(g.len(), 6);
        assert_eq!(g.edge_count(), 7);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(Graph::parse_edge_list("0 0"), Err(Error::SelfLoop { line: 1, site: 0 })));
        assert_eq!(Graph::parse_edge_list("# nothing\n"), Err(Error::EmptyEdgeList));
        assert_eq!(Graph::parse_edge_list("0 1\n2 3"), Err(Error::Disconnected));
        assert!(matches!(Graph::parse_edge_list("0 2"), Err(Error::NonContiguousIds { .. })));
        assert!(matches!(Graph::parse_edge_list("0 1\n3 4"), Err(Error::NonContiguousIds { .. })));
        assert!(matches!(Graph::parse_edge_list("0 x"), Err(Error::EdgeListParse { line: 1, .. })));
    }

    #[test]
    fn comments_and_whitespace_ignored() {
        let g = Graph::parse_edge_list("# header\n  # indented comment\n0 1\n\n 1 2 \n").unwrap();
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn builtins() {
        let f1 = Graph::builtin("fig1").unwrap();
        assert_eq!((f1.len(), f1.edge_count()), (2, 1));
        let f2 = Graph::builtin("fig2").unwrap();
        assert_eq!((f2.len(), f2.edge_count()), (6, 7));
        assert!(matches!(Graph::builtin("fig3"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = Graph::builtin("fig2").unwrap();
        for u in 0..g.len() {
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn subset_neighborhoods_on_fig2() {
        let g = Graph::builtin("fig2").unwrap();
        assert_eq!(g.subset_neighborhood(&[1, 2]).unwrap(), vec![0]);
        assert_eq!(g.subset_neighborhood(&[0]).unwrap(), vec![1, 2, 3]);
        assert_eq!(g.subset_neighborhood(&[0, 1, 2]).unwrap(), vec![3]);
        assert_eq!(g.subset_neighborhood(&[]), Err(Error::EmptyCliqueMembers));
        assert!(matches!(g.subset_neighborhood(&[9]), Err(Error::SiteOutOfRange { site: 9, n: 6 })));
    }

    #[test]
    fn planted_partition_rejects_disconnected_setup() {
        let err = planted_partition(&[20, 20, 20], 1.0, 0.0, 1).unwrap_err();
        assert!(matches!(err, Error::ConnectivityUnattainable { .. }));
    }

    #[test]
    fn planted_partition_complete_graph() {
        let pg = planted_partition(&[3, 3], 1.0, 1.0, 9).unwrap();
        assert_eq!(pg.graph.len(), 6);
        assert_eq!(pg.graph.edge_count(), 15);
    }

    #[test]
    fn planted_partition_deterministic_and_connected() {
        let a = planted_partition(&[20, 20, 20], 0.5, 0.02, 7).unwrap();
        let b = planted_partition(&[20, 20, 20], 0.5, 0.02, 7).unwrap();
        assert_eq!(a.graph, b.graph);
        assert!(a.graph.is_connected());
        assert_eq!(a.blocks()[1], (20..40).collect::<Vec<_>>());
    }
}
