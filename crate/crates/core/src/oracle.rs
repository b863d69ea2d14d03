//! Exhaustive ground truth for small instances. Nothing here calls into the
//! engine beyond the shared data types.

use crate::error::{Error, Result};
use crate::hypergraph::{EulerTour, Hypergraph, VertexId, Walk};
use crate::incidence::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest edge count searched by the hypergraph oracles.
    pub max_edges: usize,
    /// Largest node count searched by the matching oracle.
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_edges: 10,
            max_nodes: 16,
        }
    }
}

fn check_edges(h: &Hypergraph, budget: &SearchBudget) -> Result<()> {
    if h.size() > budget.max_edges {
        return Err(Error::SearchBudget(format!(
            "{} edges exceed the limit of {}",
            h.size(),
            budget.max_edges
        )));
    }
    Ok(())
}

/// Whether choosing two vertices from every edge can leave every vertex
/// chosen an even number of times.
pub fn brute_family_exists(h: &Hypergraph, budget: &SearchBudget) -> Result<bool> {
    check_edges(h, budget)?;
    if h.is_empty() {
        return Ok(true);
    }
    let mut parity = vec![false; h.order()];
    fn choose(h: &Hypergraph, e: usize, parity: &mut Vec<bool>) -> bool {
        if e == h.size() {
            return parity.iter().all(|&odd| !odd);
        }
        let edge = h.edge(e);
        for i in 0..edge.len() {
            for j in i + 1..edge.len() {
                parity[edge[i]] = !parity[edge[i]];
                parity[edge[j]] = !parity[edge[j]];
                let found = choose(h, e + 1, parity);
                parity[edge[i]] = !parity[edge[i]];
                parity[edge[j]] = !parity[edge[j]];
                if found {
                    return true;
                }
            }
        }
        false
    }
    Ok(choose(h, 0, &mut parity))
}

/// An Euler tour by backtracking, in canonical form, or `None` if there is none.
pub fn brute_tour(h: &Hypergraph, budget: &SearchBudget) -> Result<Option<EulerTour>> {
    check_edges(h, budget)?;
    let m = h.size();
    if m < 2 {
        return Ok(None);
    }
    struct State<'a> {
        h: &'a Hypergraph,
        used: Vec<bool>,
        anchors: Vec<VertexId>,
        edges: Vec<usize>,
    }
    fn extend(s: &mut State) -> bool {
        let m = s.h.size();
        let x = *s.anchors.last().unwrap();
        if s.edges.len() == m {
            return x == s.anchors[0];
        }
        for e in 0..m {
            if s.used[e] || !s.h.edge(e).contains(&x) {
                continue;
            }
            for &y in s.h.edge(e) {
                if y == x {
                    continue;
                }
                // the last edge must return to the start
                if s.edges.len() + 1 == m && y != s.anchors[0] {
                    continue;
                }
                s.used[e] = true;
                s.edges.push(e);
                s.anchors.push(y);
                if extend(s) {
                    return true;
                }
                s.anchors.pop();
                s.edges.pop();
                s.used[e] = false;
            }
        }
        false
    }
    // every tour can be rotated to traverse edge 0 first
    let first = h.edge(0);
    for &a in first {
        for &b in first {
            if a == b {
                continue;
            }
            let mut s = State {
                h,
                used: vec![false; m],
                anchors: vec![a, b],
                edges: vec![0],
            };
            s.used[0] = true;
            if extend(&mut s) {
                return Ok(Some(EulerTour::new(
                    Walk::new(s.anchors, s.edges).canonical(),
                )));
            }
        }
    }
    Ok(None)
}

/// Size of a maximum matching by branch and bound.
pub fn brute_max_matching(g: &Graph, budget: &SearchBudget) -> Result<usize> {
    let n = g.node_count();
    if n > budget.max_nodes {
        return Err(Error::SearchBudget(format!(
            "{n} nodes exceed the limit of {}",
            budget.max_nodes
        )));
    }
    fn go(g: &Graph, free: &mut Vec<bool>, size: usize, best: &mut usize) {
        let remaining = free.iter().filter(|&&f| f).count();
        if size + remaining / 2 <= *best {
            return;
        }
        let Some(u) = (0..free.len()).find(|&u| free[u]) else {
            *best = size;
            return;
        };
        free[u] = false;
        for &w in g.neighbors(u) {
            if free[w] {
                free[w] = false;
                go(g, free, size + 1, best);
                free[w] = true;
            }
        }
        go(g, free, size, best);
        free[u] = true;
        *best = (*best).max(size);
    }
    let mut best = 0;
    go(g, &mut vec![true; n], 0, &mut best);
    Ok(best)
}

/// Nodes whose deletion separates two of their neighbours.
pub fn brute_cut_vertices(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    (0..n)
        .filter(|&u| {
            let nbrs = g.neighbors(u);
            let Some(&start) = nbrs.first() else {
                return false;
            };
            let mut seen = vec![false; n];
            seen[u] = true;
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(x) = queue.pop() {
                for &y in g.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push(y);
                    }
                }
            }
            nbrs.iter().any(|&w| !seen[w])
        })
        .collect()
}
