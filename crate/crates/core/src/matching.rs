//! Maximum-cardinality matching in general graphs (Edmonds' blossom
//! algorithm) and the gadget graph that turns the search for a family
//! subgraph into a perfect matching problem.
//!
//! Gadget layout for an incidence graph `G`:
//!
//! * an e-vertex of degree `d` becomes `d` stubs plus `d - 2` core nodes,
//!   each core adjacent to all of that e-vertex's stubs, so a perfect
//!   matching leaves exactly two stubs for incidence edges;
//! * a v-vertex of degree `d` becomes `d` pairwise adjacent stubs, plus one
//!   dummy adjacent to all of them when `d` is odd, so the number of stubs
//!   matched outward is even;
//! * each incidence `(v, e)` becomes one edge between its v-stub and e-stub.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::FamilySubgraph;
use crate::hypergraph::{EdgeId, VertexId};
use crate::incidence::{Graph, IncidenceGraph};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<usize>,
}

impl Matching {
    pub fn mate(&self, u: usize) -> Option<usize> {
        (self.mate[u] != NONE).then_some(self.mate[u])
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(|&m| m != NONE)
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.mate.get(a) == Some(&b)
    }

    /// Matched pairs `(a, b)` with `a < b`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(a, &b)| b != NONE && a < b)
            .map(|(a, &b)| (a, b))
            .collect()
    }

    /// True when every pair is an edge of `g` and no node is used twice.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.mate.len() == g.node_count()
            && self.mate.iter().enumerate().all(|(a, &b)| {
                b == NONE || (b < self.mate.len() && self.mate[b] == a && g.has_edge(a, b))
            })
    }
}

/// Maximum-cardinality matching. Roots are tried in ascending node order and
/// neighbours are scanned in adjacency order, so the result is deterministic.
pub fn max_matching(g: &Graph) -> Matching {
    Blossom::new(g).run()
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.node_count();
        Self {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            on_path: vec![false; n],
            queue: Vec::with_capacity(n),
        }
    }

    fn run(mut self) -> Matching {
        let n = self.g.node_count();
        // greedy start
        for u in 0..n {
            if self.mate[u] == NONE {
                if let Some(&w) = self.g.neighbors(u).iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[u] = w;
                    self.mate[w] = u;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] == NONE {
                if let Some(end) = self.find_path(root) {
                    self.augment(end);
                }
            }
        }
        Matching { mate: self.mate }
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.on_path.iter_mut().for_each(|x| *x = false);
        loop {
            a = self.base[a];
            self.on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.node_count();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for i in 0..self.g.neighbors(v).len() {
                let to = self.g.neighbors(v)[i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for u in 0..n {
                        if self.in_blossom[self.base[u]] {
                            self.base[u] = cur;
                            if !self.used[u] {
                                self.used[u] = true;
                                self.queue.push(u);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push(m);
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetNode {
    VertexStub { v: VertexId, slot: usize },
    ParityDummy { v: VertexId },
    EdgeStub { e: EdgeId, slot: usize },
    Core { e: EdgeId, index: usize },
}

#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub nodes: Vec<GadgetNode>,
    /// Gadget edge `(a, b)` with `a < b` carrying each incidence `(v, e)`.
    links: HashMap<(usize, usize), (VertexId, EdgeId)>,
    /// Gadget edge per incidence, in [`IncidenceGraph::incidences`] order.
    incidence_links: Vec<((VertexId, EdgeId), (usize, usize))>,
}

impl GadgetGraph {
    /// The incidence represented by gadget edge `(a, b)`; `None` for
    /// internal gadget edges.
    pub fn incidence_of(&self, a: usize, b: usize) -> Option<(VertexId, EdgeId)> {
        self.links.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn incidence_links(&self) -> &[((VertexId, EdgeId), (usize, usize))] {
        &self.incidence_links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Builds the gadget graph; fails when some e-vertex has degree below 2.
pub fn reduce_to_matching(g: &IncidenceGraph) -> Result<GadgetGraph> {
    if let Some(e) = (0..g.e_count()).find(|&e| g.e_neighbors(e).len() < 2) {
        return Err(Error::InfeasibleDegree(e));
    }
    let mut nodes = Vec::new();
    let mut e_stub_start = Vec::with_capacity(g.e_count());
    let mut edges = Vec::new();
    for e in 0..g.e_count() {
        let d = g.e_neighbors(e).len();
        let start = nodes.len();
        e_stub_start.push(start);
        nodes.extend((0..d).map(|slot| GadgetNode::EdgeStub { e, slot }));
        for index in 0..d - 2 {
            let core = nodes.len();
            nodes.push(GadgetNode::Core { e, index });
            edges.extend((start..start + d).map(|s| (s, core)));
        }
    }
    let mut v_stub_start = Vec::with_capacity(g.v_count());
    for v in 0..g.v_count() {
        let d = g.v_neighbors(v).len();
        let start = nodes.len();
        v_stub_start.push(start);
        nodes.extend((0..d).map(|slot| GadgetNode::VertexStub { v, slot }));
        for a in start..start + d {
            edges.extend((a + 1..start + d).map(|b| (a, b)));
        }
        if d % 2 == 1 {
            let dummy = nodes.len();
            nodes.push(GadgetNode::ParityDummy { v });
            edges.extend((start..start + d).map(|s| (s, dummy)));
        }
    }
    let mut links = HashMap::new();
    let mut incidence_links = Vec::with_capacity(g.incidence_count());
    for (v, e) in g.incidences() {
        let v_slot = g
            .v_neighbors(v)
            .binary_search(&e)
            .expect("incidence lists agree");
        let e_slot = g
            .e_neighbors(e)
            .binary_search(&v)
            .expect("incidence lists agree");
        let (a, b) = (e_stub_start[e] + e_slot, v_stub_start[v] + v_slot);
        let key = (a.min(b), a.max(b));
        edges.push(key);
        links.insert(key, (v, e));
        incidence_links.push(((v, e), key));
    }
    Ok(GadgetGraph {
        graph: Graph::from_edges(nodes.len(), edges),
        nodes,
        links,
        incidence_links,
    })
}

/// Reads a family subgraph off a perfect matching of the gadget graph:
/// incidence `(v, e)` is selected iff its gadget edge is matched.
pub fn extract_subgraph(
    g: &Arc<IncidenceGraph>,
    gg: &GadgetGraph,
    m: &Matching,
) -> Option<FamilySubgraph> {
    if !m.is_perfect() {
        return None;
    }
    let selected = gg
        .incidence_links
        .iter()
        .filter(|(_, (a, b))| m.contains(*a, *b))
        .map(|&(inc, _)| inc);
    FamilySubgraph::from_incidences(Arc::clone(g), selected).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::incidence::build_incidence;
    use crate::oracle::{brute_family_exists, brute_max_matching, SearchBudget};
    use crate::testkit::{complete_graph, fano, petersen, two_copies, Lcg};

    #[test]
    fn small_graphs() {
        assert_eq!(max_matching(&complete_graph(3)).size(), 1);
        let m = max_matching(&complete_graph(4));
        assert_eq!(m.size(), 2);
        assert!(m.is_perfect());
        let p = petersen();
        let m = max_matching(&p);
        assert_eq!(m.size(), 5);
        assert!(m.is_valid_for(&p));
    }

    #[test]
    fn odd_cycle_blossom() {
        // 5-cycle with a pendant: forces a blossom contraction
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]);
        let m = max_matching(&g);
        assert_eq!(m.size(), 3);
        assert!(m.is_valid_for(&g));
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = Lcg::new(7);
        let budget = SearchBudget::default();
        for _ in 0..300 {
            let n = 1 + rng.below(14);
            let p = rng.below(100);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.below(100) < p {
                        edges.push((a, b));
                    }
                }
            }
            let g = Graph::from_edges(n, edges);
            let m = max_matching(&g);
            assert!(m.is_valid_for(&g));
            assert_eq!(m.size(), brute_max_matching(&g, &budget).unwrap());
        }
    }

    #[test]
    fn gadget_shapes() {
        // one triple: 3 e-stubs + 1 core, each vertex of degree 1 gets a stub and a dummy
        let h = Hypergraph::new(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let gg = reduce_to_matching(&build_incidence(&h)).unwrap();
        let cores = gg
            .nodes
            .iter()
            .filter(|n| matches!(n, GadgetNode::Core { .. }))
            .count();
        let e_stubs = gg
            .nodes
            .iter()
            .filter(|n| matches!(n, GadgetNode::EdgeStub { .. }))
            .count();
        let dummies = gg
            .nodes
            .iter()
            .filter(|n| matches!(n, GadgetNode::ParityDummy { .. }))
            .count();
        assert_eq!((e_stubs, cores, dummies), (3, 1, 3));

        // two copies: every vertex has degree 2, stubs adjacent, no dummy
        let gg = reduce_to_matching(&build_incidence(&two_copies())).unwrap();
        assert_eq!(gg.node_count(), 14);
        let stubs: Vec<usize> = gg
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, GadgetNode::VertexStub { v: 0, .. }))
            .map(|(i, _)| i)
            .collect();
        assert_eq!(stubs.len(), 2);
        assert!(gg.graph.has_edge(stubs[0], stubs[1]));
        assert!(!gg
            .nodes
            .iter()
            .any(|n| matches!(n, GadgetNode::ParityDummy { .. })));
    }

    #[test]
    fn degree_three_vertex_gets_dummy() {
        let h = fano();
        let gg = reduce_to_matching(&build_incidence(&h)).unwrap();
        let stubs: Vec<usize> = (0..gg.node_count())
            .filter(|&i| matches!(gg.nodes[i], GadgetNode::VertexStub { v: 0, .. }))
            .collect();
        let dummy = (0..gg.node_count())
            .find(|&i| gg.nodes[i] == GadgetNode::ParityDummy { v: 0 })
            .unwrap();
        assert_eq!(stubs.len(), 3);
        for &s in &stubs {
            assert!(gg.graph.has_edge(s, dummy));
            assert!(stubs.iter().all(|&t| t == s || gg.graph.has_edge(s, t)));
        }
    }

    #[test]
    fn gadget_node_count_formula() {
        let h = fano();
        let g = build_incidence(&h);
        let gg = reduce_to_matching(&g).unwrap();
        let e_part: usize = (0..g.e_count())
            .map(|e| 2 * g.e_neighbors(e).len() - 2)
            .sum();
        let v_part: usize = (0..g.v_count()).map(|v| g.v_neighbors(v).len()).sum();
        let odd = (0..g.v_count())
            .filter(|&v| g.v_neighbors(v).len() % 2 == 1)
            .count();
        assert_eq!(gg.node_count(), e_part + v_part + odd);
        assert_eq!(gg.incidence_links().len(), 21);
    }

    #[test]
    fn infeasible_degree() {
        let h = Hypergraph::new(["a", "b"], [vec!["a", "b"], vec!["a"]]).unwrap();
        assert_eq!(
            reduce_to_matching(&build_incidence(&h)).unwrap_err(),
            Error::InfeasibleDegree(1)
        );
    }

    #[test]
    fn extract_from_two_copies() {
        let h = two_copies();
        let g = Arc::new(build_incidence(&h));
        let gg = reduce_to_matching(&g).unwrap();
        let m = max_matching(&gg.graph);
        assert!(m.is_perfect());
        let gf = extract_subgraph(&g, &gg, &m).unwrap();
        // parity forces both copies onto the same pair
        assert_eq!(gf.pair(0), gf.pair(1));
        assert_eq!(gf.selected().len(), 4);
    }

    #[test]
    fn extract_from_single_edge_fails() {
        let h = Hypergraph::new(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let g = Arc::new(build_incidence(&h));
        let gg = reduce_to_matching(&g).unwrap();
        let m = max_matching(&gg.graph);
        assert!(!m.is_perfect());
        assert!(extract_subgraph(&g, &gg, &m).is_none());
    }

    #[test]
    fn fano_subgraph_has_required_degrees() {
        let h = fano();
        assert!(brute_family_exists(&h, &SearchBudget::default()).unwrap());
        let g = Arc::new(build_incidence(&h));
        let gg = reduce_to_matching(&g).unwrap();
        let gf = extract_subgraph(&g, &gg, &max_matching(&gg.graph)).unwrap();
        for e in 0..7 {
            assert_eq!(gf.selected().iter().filter(|&&(_, f)| f == e).count(), 2);
        }
        assert!((0..7).all(|v| gf.v_degree(v) % 2 == 0));
    }

    #[test]
    fn gadget_perfect_iff_family_exists_small() {
        // all 3-uniform multisets with up to 4 edges on 5 vertices, plus mixed sizes on 4
        let triples: Vec<Vec<usize>> = crate::testkit::k_subsets(5, 3);
        let mut checked = 0;
        for m in 1..=4 {
            for combo in crate::testkit::multisets(triples.len(), m) {
                let edges: Vec<Vec<usize>> = combo.iter().map(|&i| triples[i].clone()).collect();
                let h = Hypergraph::with_numbered_vertices(5, edges).unwrap();
                let g = build_incidence(&h);
                let gg = reduce_to_matching(&g).unwrap();
                let perfect = max_matching(&gg.graph).is_perfect();
                assert_eq!(
                    perfect,
                    brute_family_exists(&h, &SearchBudget::default()).unwrap()
                );
                checked += 1;
            }
        }
        assert_eq!(checked, 1000);
        let sets: Vec<Vec<usize>> = (2..=4)
            .flat_map(|k| crate::testkit::k_subsets(6, k))
            .collect();
        let mut rng = Lcg::new(11);
        for _ in 0..400 {
            let m = 1 + rng.below(4);
            let edges: Vec<Vec<usize>> = (0..m)
                .map(|_| sets[rng.below(sets.len())].clone())
                .collect();
            let h = Hypergraph::with_numbered_vertices(6, edges).unwrap();
            let gg = reduce_to_matching(&build_incidence(&h)).unwrap();
            assert_eq!(
                max_matching(&gg.graph).is_perfect(),
                brute_family_exists(&h, &SearchBudget::default()).unwrap()
            );
        }
    }
}
