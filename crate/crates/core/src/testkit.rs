//! Small fixtures shared by the unit tests.

use std::sync::Arc;

use crate::family::FamilySubgraph;
use crate::genio::generators::gen_complete;
pub use crate::genio::generators::Lcg;
use crate::hypergraph::Hypergraph;
use crate::incidence::{build_incidence, Graph};

/// The Fano plane on `a..g`.
pub fn fano() -> Hypergraph {
    Hypergraph::new(
        ["a", "b", "c", "d", "e", "f", "g"],
        [
            ["a", "b", "c"],
            ["a", "d", "e"],
            ["a", "f", "g"],
            ["b", "d", "f"],
            ["b", "e", "g"],
            ["c", "d", "g"],
            ["c", "e", "f"],
        ],
    )
    .unwrap()
}

/// Two copies of the triple `abc`.
pub fn two_copies() -> Hypergraph {
    Hypergraph::new(["a", "b", "c"], [["a", "b", "c"], ["a", "b", "c"]]).unwrap()
}

pub fn complete3(n: usize) -> Hypergraph {
    gen_complete(n, 3).unwrap()
}

/// The four triples on `a..d` with the family `a e1 b e2 a`, `c e3 d e4 c`.
pub fn two_squares_cover() -> (Hypergraph, FamilySubgraph) {
    let h = Hypergraph::new(
        ["a", "b", "c", "d"],
        [
            ["a", "b", "c"],
            ["a", "b", "d"],
            ["a", "c", "d"],
            ["b", "c", "d"],
        ],
    )
    .unwrap();
    let gf = FamilySubgraph::from_incidences(
        Arc::new(build_incidence(&h)),
        [
            (0, 0),
            (1, 0),
            (0, 1),
            (1, 1),
            (2, 2),
            (3, 2),
            (2, 3),
            (3, 3),
        ],
    )
    .unwrap();
    (h, gf)
}

pub fn complete_graph(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All non-decreasing sequences of length `m` over `0..count`.
pub fn multisets(count: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, count: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in start..count {
            cur.push(x);
            go(x, count, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, count, m, &mut Vec::new(), &mut out);
    out
}
