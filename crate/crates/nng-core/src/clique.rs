//! Clique machinery: every complete subgraph of all sizes >= 1, each with its
//! precomputed boundary `N(E)`. The Gibbs energy sums over this inventory, so
//! enumeration refuses up front when the count would blow up.
//!
//! Enumeration runs pivoting Bron-Kerbosch for the maximal cliques and then
//! expands their subsets with deduplication.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_CLIQUE_GUARD: usize = 1_000_000;

/// A complete subgraph together with its neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    members: Vec<usize>,
    boundary: Vec<usize>,
}

impl Clique {
    /// Validates completeness and computes the boundary.
    pub fn new(graph: &Graph, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyCliqueMembers);
        }
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if !graph.has_edge(u, v) {
                    return Err(Error::NotAClique);
                }
            }
        }
        let boundary = graph.subset_neighborhood(&members)?;
        Ok(Clique { members, boundary })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// All cliques of a graph, sizes 1 up to an optional cap, sorted by size then
/// lexicographically. Closed under taking nonempty subsets (when uncapped).
#[derive(Debug, Clone)]
pub struct CliqueInventory {
    cliques: Vec<Clique>,
    max_size: usize,
}

impl CliqueInventory {
    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Largest member count present.
    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn of_size(&self, size: usize) -> impl Iterator<Item = &Clique> {
        self.cliques.iter().filter(move |c| c.len() == size)
    }
}

/// Enumerate every clique of `graph` with at most `max_size` members
/// (unbounded when `None`), refusing if the estimated count exceeds `guard`.
pub fn enumerate_cliques(
    graph: &Graph,
    max_size: Option<usize>,
    guard: usize,
) -> Result<CliqueInventory> {
    let cap = max_size.unwrap_or(usize::MAX).max(1);
    let maximal = maximal_cliques(graph);

    // Overestimate: subsets of each maximal clique, ignoring sharing.
    let mut estimate: usize = 0;
    for m in &maximal {
        let size = m.len().min(cap).min(63);
        estimate = estimate.saturating_add((1usize << size) - 1);
        if estimate > guard.saturating_mul(4) {
            return Err(Error::CliqueGuardExceeded { estimate, guard });
        }
    }

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for m in &maximal {
        expand_subsets(m, cap, &mut seen, guard)?;
    }

    let mut cliques = Vec::with_capacity(seen.len());
    let mut max_seen = 0;
    for members in seen {
        max_seen = max_seen.max(members.len());
        let boundary = graph.subset_neighborhood(&members)?;
        cliques.push(Clique { members, boundary });
    }
    cliques.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(CliqueInventory { cliques, max_size: max_seen })
}

fn expand_subsets(
    members: &[usize],
    cap: usize,
    seen: &mut BTreeSet<Vec<usize>>,
    guard: usize,
) -> Result<()> {
    let m = members.len();
    if m <= 63 {
        for mask in 1u64..(1u64 << m) {
            if (mask.count_ones() as usize) > cap {
                continue;
            }
            let subset: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| members[i]).collect();
            seen.insert(subset);
            if seen.len() > guard {
                return Err(Error::CliqueGuardExceeded { estimate: seen.len(), guard });
            }
        }
        Ok(())
    } else {
        Err(Error::CliqueGuardExceeded { estimate: usize::MAX, guard })
    }
}

/// Pivoting Bron-Kerbosch over sorted neighbor lists.
fn maximal_cliques(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..n).collect();
    let x = Vec::new();
    bron_kerbosch(graph, &mut r, p, x, &mut out);
    out
}

fn bron_kerbosch(
    graph: &Graph,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // pivot: vertex of P u X with the most neighbors in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| graph.has_edge(u, v)).count())
        .expect("P u X nonempty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !graph.has_edge(pivot, v)).collect();

    let mut p = p;
    let mut x = x;
    for v in candidates {
        let nv = graph.neighbors(v);
        let p_next: Vec<usize> = p.iter().copied().filter(|u| nv.binary_search(u).is_ok()).collect();
        let x_next: Vec<usize> = x.iter().copied().filter(|u| nv.binary_search(u).is_ok()).collect();
        r.push(v);
        bron_kerbosch(graph, r, p_next, x_next, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn counts_by_size(inv: &CliqueInventory) -> Vec<usize> {
        (1..=inv.max_size()).map(|s| inv.of_size(s).count()).collect()
    }

    #[test]
    fn single_edge_inventory() {
        let g = Graph::builtin("fig1").unwrap();
        let inv = enumerate_cliques(&g, None, DEFAULT_CLIQUE_GUARD).unwrap();
        assert_eq!(inv.len(), 3);
        assert_eq!(counts_by_size(&inv), vec![2, 1]);
    }

    #[test]
    fn triangle_inventory() {
        let g = Graph::from_edges(&[(0, 1), (0, 2), (1, 2)]).unwrap();
        let inv = enumerate_cliques(&g, None, DEFAULT_CLIQUE_GUARD).unwrap();
        assert_eq!(inv.len(), 7);
        assert_eq!(counts_by_size(&inv), vec![3, 3, 1]);
    }

    #[test]
    fn fig2_inventory() {
        let g = Graph::builtin("fig2").unwrap();
        let inv = enumerate_cliques(&g, None, DEFAULT_CLIQUE_GUARD).unwrap();
        assert_eq!(counts_by_size(&inv), vec![6, 7, 2]);
        assert_eq!(inv.len(), 15);
    }

    #[test]
    fn subset_closure_and_disjoint_boundaries() {
        let g = Graph::builtin("fig2").unwrap();
        let inv = enumerate_cliques(&g, None, DEFAULT_CLIQUE_GUARD).unwrap();
        let all: BTreeSet<Vec<usize>> =
            inv.cliques().iter().map(|c| c.members().to_vec()).collect();
        for c in inv.cliques() {
            for drop in 0..c.len() {
                if c.len() > 1 {
                    let mut sub = c.members().to_vec();
                    sub.remove(drop);
                    assert!(all.contains(&sub), "missing subset {sub:?} of {:?}", c.members());
                }
            }
            for b in c.boundary() {
                assert!(!c.members().contains(b));
            }
        }
    }

    #[test]
    fn max_size_cap() {
        let g = Graph::builtin("fig2").unwrap();
        let inv = enumerate_cliques(&g, Some(2), DEFAULT_CLIQUE_GUARD).unwrap();
        assert_eq!(counts_by_size(&inv), vec![6, 7]);
    }

    #[test]
    fn guard_refuses_blowup() {
        let g = Graph::builtin("fig2").unwrap();
        assert!(matches!(
            enumerate_cliques(&g, None, 10),
            Err(Error::CliqueGuardExceeded { .. })
        ));
    }

    #[test]
    fn clique_validation() {
        let g = Graph::builtin("fig2").unwrap();
        assert!(Clique::new(&g, vec![0, 1, 2]).is_ok());
        assert_eq!(Clique::new(&g, vec![1, 3]), Err(Error::NotAClique));
        let c = Clique::new(&g, vec![1, 2]).unwrap();
        assert_eq!(c.boundary(), &[0]);
    }
}
