//! Incidence graphs and the graph queries the merging argument relies on:
//! connected components, cut vertices and blocks.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::family::FamilySubgraph;
use crate::hypergraph::{EdgeId, Hypergraph, VertexId};

/// Simple undirected graph on nodes `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, dropping loops and parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
            if a != b {
                g.adj[a].push(b);
                g.adj[b].push(a);
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
            list.dedup();
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }
}

/// Bipartite incidence graph. Node `v` is v-vertex `v`; node `order + e` is
/// e-vertex `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceGraph {
    v_adj: Vec<Vec<EdgeId>>,
    e_adj: Vec<Vec<VertexId>>,
}

impl IncidenceGraph {
    pub fn v_count(&self) -> usize {
        self.v_adj.len()
    }

    pub fn e_count(&self) -> usize {
        self.e_adj.len()
    }

    /// Edges of the hypergraph containing `v`, ascending.
    pub fn v_neighbors(&self, v: VertexId) -> &[EdgeId] {
        &self.v_adj[v]
    }

    /// Vertices of edge `e`, ascending.
    pub fn e_neighbors(&self, e: EdgeId) -> &[VertexId] {
        &self.e_adj[e]
    }

    pub fn edge_lists(&self) -> &[Vec<VertexId>] {
        &self.e_adj
    }

    pub fn is_incident(&self, v: VertexId, e: EdgeId) -> bool {
        self.e_adj[e].binary_search(&v).is_ok()
    }

    pub fn incidence_count(&self) -> usize {
        self.e_adj.iter().map(Vec::len).sum()
    }

    pub fn v_node(&self, v: VertexId) -> usize {
        v
    }

    pub fn e_node(&self, e: EdgeId) -> usize {
        self.v_count() + e
    }

    /// All incidences `(v, e)`, ordered by edge then vertex.
    pub fn incidences(&self) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.e_adj
            .iter()
            .enumerate()
            .flat_map(|(e, vs)| vs.iter().map(move |&v| (v, e)))
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.v_count();
        Graph::from_edges(
            n + self.e_count(),
            self.incidences().map(|(v, e)| (v, n + e)),
        )
    }
}

pub fn build_incidence(h: &Hypergraph) -> IncidenceGraph {
    IncidenceGraph {
        v_adj: (0..h.order())
            .map(|v| h.incident_edges(v).to_vec())
            .collect(),
        e_adj: h.edges().to_vec(),
    }
}

/// A connected component as a sorted node list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    /// True for a single isolated node.
    pub trivial: bool,
}

/// Connected components, ordered by smallest node.
pub fn components(g: &Graph) -> Vec<Component> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut nodes = vec![s];
        let mut head = 0;
        while head < nodes.len() {
            let u = nodes[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    nodes.push(w);
                }
            }
        }
        nodes.sort_unstable();
        let trivial = nodes.len() == 1;
        out.push(Component { nodes, trivial });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Node sets of the blocks, each sorted. Isolated nodes form singleton blocks.
    pub blocks: Vec<Vec<usize>>,
    /// Sorted cut vertices.
    pub cut_vertices: Vec<usize>,
    /// Block-cut tree edges `(block index, cut vertex)`.
    pub block_tree: Vec<(usize, usize)>,
}

impl BlockDecomposition {
    pub fn is_cut_vertex(&self, u: usize) -> bool {
        self.cut_vertices.binary_search(&u).is_ok()
    }
}

/// Biconnected decomposition by the low-link depth-first traversal.
pub fn block_decomposition(g: &Graph) -> BlockDecomposition {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut time = 0;

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        if g.degree(root) == 0 {
            blocks.push(vec![root]);
            continue;
        }
        let mut root_children = 0;
        // (node, parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if let Some(&w) = g.neighbors(u).get(*next) {
                *next += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if parent == usize::MAX {
                continue;
            }
            low[parent] = low[parent].min(low[u]);
            if low[u] >= disc[parent] {
                if parent != root {
                    is_cut[parent] = true;
                }
                let mut block = BTreeSet::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.insert(a);
                    block.insert(b);
                    if (a, b) == (parent, u) {
                        break;
                    }
                }
                blocks.push(block.into_iter().collect());
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }

    let cut_vertices: Vec<usize> = (0..n).filter(|&u| is_cut[u]).collect();
    let mut block_tree = Vec::new();
    for (b, nodes) in blocks.iter().enumerate() {
        for &u in nodes {
            if is_cut[u] {
                block_tree.push((b, u));
            }
        }
    }
    BlockDecomposition {
        blocks,
        cut_vertices,
        block_tree,
    }
}

/// v-vertices of `component` that are not cut vertices of `gf`. An isolated
/// v-vertex is its own answer; a non-trivial component always has at least two.
pub fn non_cut_v_vertices(gf: &FamilySubgraph, component: &[VertexId]) -> Result<Vec<VertexId>> {
    let n = gf.host().v_count();
    if let Some(&v) = component.iter().find(|&&v| v >= n) {
        return Err(Error::UnknownVertex(v));
    }
    let blocks = block_decomposition(&gf.to_graph());
    let mut out: Vec<VertexId> = component
        .iter()
        .copied()
        .filter(|&v| !blocks.is_cut_vertex(v))
        .collect();
    out.sort_unstable();
    out.dedup();
    let nontrivial = component.iter().any(|&v| gf.v_degree(v) > 0);
    if nontrivial && out.len() < 2 {
        return Err(Error::CertificateViolation(
            "a non-trivial component has fewer than two non-cut v-vertices".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_cut_vertices;
    use crate::testkit::{fano, two_copies};
    use proptest::prelude::*;

    fn host_of(edges: Vec<Vec<usize>>, n: usize) -> std::sync::Arc<IncidenceGraph> {
        std::sync::Arc::new(build_incidence(
            &Hypergraph::with_numbered_vertices(n, edges).unwrap(),
        ))
    }

    #[test]
    fn non_cut_on_four_cycle() {
        let g = host_of(vec![vec![0, 1, 2], vec![0, 1, 2]], 3);
        let gf = FamilySubgraph::from_incidences(g, [(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(non_cut_v_vertices(&gf, &[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(non_cut_v_vertices(&gf, &[2]).unwrap(), vec![2]);
    }

    #[test]
    fn non_cut_on_two_squares_sharing_a_vertex() {
        // 0 e0 1 e1 0 and 0 e2 2 e3 0
        let g = host_of(
            vec![vec![0, 1, 3], vec![0, 1, 3], vec![0, 2, 3], vec![0, 2, 3]],
            4,
        );
        let gf = FamilySubgraph::from_incidences(
            g,
            [
                (0, 0),
                (1, 0),
                (0, 1),
                (1, 1),
                (0, 2),
                (2, 2),
                (0, 3),
                (2, 3),
            ],
        )
        .unwrap();
        assert_eq!(non_cut_v_vertices(&gf, &[0, 1, 2]).unwrap(), vec![1, 2]);
    }

    #[test]
    fn non_cut_on_six_cycle() {
        let g = host_of(vec![vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]], 4);
        let gf =
            FamilySubgraph::from_incidences(g, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)])
                .unwrap();
        assert_eq!(non_cut_v_vertices(&gf, &[0, 1, 2]).unwrap(), vec![0, 1, 2]);
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn incidence_of_single_edge_is_a_star() {
        let h = Hypergraph::new(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let g = build_incidence(&h);
        assert_eq!(g.incidence_count(), 3);
        let graph = g.to_graph();
        assert_eq!(graph.neighbors(g.e_node(0)), &[0, 1, 2]);
        for v in 0..3 {
            assert_eq!(graph.neighbors(v), &[3]);
        }
    }

    #[test]
    fn incidence_of_two_copies_is_complete_bipartite() {
        let g = build_incidence(&two_copies());
        assert_eq!(g.incidence_count(), 6);
        assert_eq!(g.to_graph().edge_count(), 6);
        for v in 0..3 {
            assert_eq!(g.v_neighbors(v), &[0, 1]);
        }
    }

    #[test]
    fn fano_incidence_is_three_regular() {
        let g = build_incidence(&fano());
        assert_eq!((g.v_count(), g.e_count(), g.incidence_count()), (7, 7, 21));
        let graph = g.to_graph();
        assert!((0..14).all(|u| graph.degree(u) == 3));
    }

    #[test]
    fn components_basic() {
        let comps = components(&Graph::new(3));
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.trivial));

        let h = Hypergraph::new(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let comps = components(&build_incidence(&h).to_graph());
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].trivial);

        // two disjoint 4-cycles
        let g = Graph::from_edges(
            8,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
            ],
        );
        let comps = components(&g);
        assert_eq!(comps.iter().filter(|c| !c.trivial).count(), 2);
    }

    #[test]
    fn blocks_of_path() {
        let d = block_decomposition(&Graph::from_edges(3, [(0, 1), (1, 2)]));
        let mut blocks = d.blocks.clone();
        blocks.sort();
        assert_eq!(blocks, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(d.cut_vertices, vec![1]);
    }

    #[test]
    fn blocks_of_cycle() {
        let d = block_decomposition(&cycle(4));
        assert_eq!(d.blocks, vec![vec![0, 1, 2, 3]]);
        assert!(d.cut_vertices.is_empty());
    }

    #[test]
    fn blocks_of_two_cycles_sharing_a_vertex() {
        let g = Graph::from_edges(
            7,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (0, 4),
                (4, 5),
                (5, 6),
                (6, 0),
            ],
        );
        let d = block_decomposition(&g);
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.cut_vertices, vec![0]);
        assert_eq!(d.block_tree.len(), 2);
    }

    fn random_graph(n: usize, bits: &[bool]) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits[k] {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, edges)
    }

    proptest! {
        #[test]
        fn cut_vertices_match_deletion_oracle(n in 1usize..10, bits in proptest::collection::vec(any::<bool>(), 45)) {
            let g = random_graph(n, &bits);
            let d = block_decomposition(&g);
            prop_assert_eq!(d.cut_vertices.clone(), brute_cut_vertices(&g));
        }

        #[test]
        fn every_edge_in_exactly_one_block(n in 1usize..10, bits in proptest::collection::vec(any::<bool>(), 45)) {
            let g = random_graph(n, &bits);
            let d = block_decomposition(&g);
            for (a, b) in g.edges() {
                let hits = d.blocks.iter().filter(|blk| blk.contains(&a) && blk.contains(&b)).count();
                prop_assert_eq!(hits, 1);
            }
            // the block-cut forest has one fewer edge than nodes per connected piece
            let comps = components(&g).len();
            let tree_nodes = d.blocks.len() + d.cut_vertices.len();
            prop_assert_eq!(d.block_tree.len() + comps, tree_nodes);
        }

        #[test]
        fn non_cut_count_at_least_largest_block(n in 2usize..10, bits in proptest::collection::vec(any::<bool>(), 45)) {
            let g = random_graph(n, &bits);
            let comps = components(&g);
            let d = block_decomposition(&g);
            let cuts = brute_cut_vertices(&g);
            for comp in comps.iter().filter(|c| !c.trivial) {
                let largest = d.blocks.iter().filter(|b| comp.nodes.contains(&b[0])).map(Vec::len).max().unwrap();
                let non_cut = comp.nodes.iter().filter(|u| !cuts.contains(u)).count();
                prop_assert!(non_cut >= largest);
            }
        }

        #[test]
        fn components_partition_nodes(n in 1usize..10, bits in proptest::collection::vec(any::<bool>(), 45)) {
            let g = random_graph(n, &bits);
            let comps = components(&g);
            let mut owner = vec![usize::MAX; n];
            for (i, c) in comps.iter().enumerate() {
                for &u in &c.nodes {
                    prop_assert_eq!(owner[u], usize::MAX);
                    owner[u] = i;
                }
            }
            prop_assert!(owner.iter().all(|&o| o != usize::MAX));
            for (a, b) in g.edges() {
                prop_assert_eq!(owner[a], owner[b]);
            }
        }
    }

    #[test]
    fn hypergraph_recoverable_from_incidence() {
        let h = fano();
        let g = build_incidence(&h);
        for e in 0..h.size() {
            assert_eq!(g.e_neighbors(e), h.edge(e));
        }
    }
}
