//! Euler families in certificate form: spanning subgraphs of the incidence
//! graph where every e-vertex has degree 2 and every v-vertex even degree.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::hypergraph::{verify_against, EdgeId, EulerFamily, VertexId, Walk};
use crate::incidence::{Graph, IncidenceGraph};
use crate::matching::{extract_subgraph, max_matching, reduce_to_matching};

/// Connected components of a family subgraph. Every e-vertex has degree 2,
/// so each component contains a v-vertex; components are numbered by their
/// smallest v-vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub v_comp: Vec<usize>,
    pub e_comp: Vec<usize>,
    /// Whether each component has at least one edge.
    pub nontrivial: Vec<bool>,
}

impl Partition {
    pub fn count(&self) -> usize {
        self.nontrivial.len()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.nontrivial.iter().filter(|&&x| x).count()
    }

    /// v-vertices per component, ascending.
    pub fn members(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.count()];
        for (v, &c) in self.v_comp.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// The subgraph `G_F` of the incidence graph corresponding to an Euler family.
#[derive(Clone)]
pub struct FamilySubgraph {
    host: Arc<IncidenceGraph>,
    /// The two selected vertices of each edge, ascending.
    pairs: Vec<[VertexId; 2]>,
    v_degree: Vec<usize>,
    partition: OnceLock<Partition>,
}

impl fmt::Debug for FamilySubgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilySubgraph")
            .field("pairs", &self.pairs)
            .finish()
    }
}

impl PartialEq for FamilySubgraph {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs && self.host == other.host
    }
}

impl Eq for FamilySubgraph {}

impl FamilySubgraph {
    /// Validates a selection of incidences against the degree conditions.
    pub fn from_incidences(
        host: Arc<IncidenceGraph>,
        selected: impl IntoIterator<Item = (VertexId, EdgeId)>,
    ) -> Result<Self> {
        let mut chosen: Vec<Vec<VertexId>> = vec![Vec::new(); host.e_count()];
        for (v, e) in selected {
            if e >= host.e_count() || v >= host.v_count() || !host.is_incident(v, e) {
                return Err(Error::CertificateViolation(format!(
                    "({v}, e{}) is not an incidence of the host",
                    e + 1
                )));
            }
            if !chosen[e].contains(&v) {
                chosen[e].push(v);
            }
        }
        let mut pairs = Vec::with_capacity(chosen.len());
        for (e, mut vs) in chosen.into_iter().enumerate() {
            if vs.len() != 2 {
                return Err(Error::CertificateViolation(format!(
                    "e-vertex e{} has degree {} instead of 2",
                    e + 1,
                    vs.len()
                )));
            }
            vs.sort_unstable();
            pairs.push([vs[0], vs[1]]);
        }
        let gf = Self::from_pairs_unchecked(host, pairs);
        if let Some(v) = (0..gf.v_degree.len()).find(|&v| gf.v_degree[v] % 2 == 1) {
            return Err(Error::CertificateViolation(format!(
                "v-vertex {v} has odd degree {}",
                gf.v_degree[v]
            )));
        }
        Ok(gf)
    }

    /// Pairs must be sorted incidences of their edge with even v-degrees.
    pub(crate) fn from_pairs_unchecked(
        host: Arc<IncidenceGraph>,
        pairs: Vec<[VertexId; 2]>,
    ) -> Self {
        let mut v_degree = vec![0; host.v_count()];
        for p in &pairs {
            v_degree[p[0]] += 1;
            v_degree[p[1]] += 1;
        }
        Self {
            host,
            pairs,
            v_degree,
            partition: OnceLock::new(),
        }
    }

    pub fn host(&self) -> &Arc<IncidenceGraph> {
        &self.host
    }

    pub fn pair(&self, e: EdgeId) -> [VertexId; 2] {
        self.pairs[e]
    }

    pub fn pairs(&self) -> &[[VertexId; 2]] {
        &self.pairs
    }

    pub fn contains(&self, v: VertexId, e: EdgeId) -> bool {
        self.pairs[e].contains(&v)
    }

    pub fn v_degree(&self, v: VertexId) -> usize {
        self.v_degree[v]
    }

    /// Selected incidences `(v, e)`, ordered by edge then vertex.
    pub fn selected(&self) -> Vec<(VertexId, EdgeId)> {
        self.pairs
            .iter()
            .enumerate()
            .flat_map(|(e, p)| [(p[0], e), (p[1], e)])
            .collect()
    }

    pub fn partition(&self) -> &Partition {
        self.partition
            .get_or_init(|| partition_of(self.v_degree.len(), &self.pairs))
    }

    pub fn nontrivial_count(&self) -> usize {
        self.partition().nontrivial_count()
    }

    pub fn component_count(&self) -> usize {
        self.partition().count()
    }

    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        (0..self.v_degree.len())
            .filter(|&v| self.v_degree[v] == 0)
            .collect()
    }

    /// The subgraph as a graph on the host's node numbering.
    pub fn to_graph(&self) -> Graph {
        let n = self.host.v_count();
        Graph::from_edges(
            n + self.host.e_count(),
            self.selected().into_iter().map(|(v, e)| (v, n + e)),
        )
    }

    /// Re-checks the degree conditions.
    pub fn check_invariants(&self) -> Result<()> {
        for (e, p) in self.pairs.iter().enumerate() {
            if p[0] == p[1] || !self.host.is_incident(p[0], e) || !self.host.is_incident(p[1], e) {
                return Err(Error::CertificateViolation(format!(
                    "e-vertex e{} does not have two distinct incident neighbours",
                    e + 1
                )));
            }
        }
        if let Some(v) = (0..self.v_degree.len()).find(|&v| self.v_degree[v] % 2 == 1) {
            return Err(Error::CertificateViolation(format!(
                "v-vertex {v} has odd degree"
            )));
        }
        Ok(())
    }
}

pub(crate) fn partition_of(order: usize, pairs: &[[VertexId; 2]]) -> Partition {
    let mut parent: Vec<usize> = (0..order).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut has_edge = vec![false; order];
    for p in pairs {
        let (a, b) = (find(&mut parent, p[0]), find(&mut parent, p[1]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
        has_edge[p[0]] = true;
    }
    let mut label = vec![usize::MAX; order];
    let mut v_comp = vec![0; order];
    let mut nontrivial = Vec::new();
    for v in 0..order {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = nontrivial.len();
            nontrivial.push(false);
        }
        v_comp[v] = label[r];
        if has_edge[v] {
            nontrivial[label[r]] = true;
        }
    }
    let e_comp = pairs.iter().map(|p| v_comp[p[0]]).collect();
    Partition {
        v_comp,
        e_comp,
        nontrivial,
    }
}

/// A family subgraph of `g` if one exists, via perfect matching on the gadget graph.
pub fn find_family_subgraph(g: &Arc<IncidenceGraph>) -> Option<FamilySubgraph> {
    let gadget = reduce_to_matching(g).ok()?;
    let m = max_matching(&gadget.graph);
    extract_subgraph(g, &gadget, &m)
}

/// One canonical closed trail per non-trivial component, by Hierholzer's
/// algorithm from the component's smallest v-vertex.
pub fn trails_from_subgraph(gf: &FamilySubgraph) -> Result<EulerFamily> {
    gf.check_invariants()?;
    let order = gf.host.v_count();
    let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); order];
    for (e, p) in gf.pairs.iter().enumerate() {
        adj[p[0]].push(e);
        adj[p[1]].push(e);
    }
    let mut next = vec![0usize; order];
    let mut used = vec![false; gf.pairs.len()];
    let mut components = Vec::new();
    for start in 0..order {
        if adj[start].is_empty() || adj[start].iter().all(|&e| used[e]) {
            continue;
        }
        let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
        let mut circuit: Vec<(VertexId, Option<EdgeId>)> = Vec::new();
        while let Some(&(v, _)) = stack.last() {
            while next[v] < adj[v].len() && used[adj[v][next[v]]] {
                next[v] += 1;
            }
            if let Some(&e) = adj[v].get(next[v]) {
                used[e] = true;
                let p = gf.pairs[e];
                let w = if p[0] == v { p[1] } else { p[0] };
                stack.push((w, Some(e)));
            } else {
                circuit.push(stack.pop().expect("stack is non-empty"));
            }
        }
        let anchors = circuit.iter().map(|&(v, _)| v).collect();
        let edges = circuit.iter().filter_map(|&(_, e)| e).collect();
        components.push(Walk::new(anchors, edges).canonical());
    }
    if used.iter().any(|u| !u) {
        return Err(Error::CertificateViolation(
            "some e-vertex was not reached by any trail".into(),
        ));
    }
    Ok(EulerFamily::new(components))
}

/// The subgraph selecting, for every traversal `u e w`, the incidences `ue`
/// and `we`.
pub fn subgraph_from_trails(g: &Arc<IncidenceGraph>, f: &EulerFamily) -> Result<FamilySubgraph> {
    let report = verify_against(g.v_count(), g.edge_lists(), f);
    if !report.valid {
        let reasons: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Error::CertificateViolation(reasons.join("; ")));
    }
    let mut pairs = vec![[0, 0]; g.e_count()];
    for walk in &f.components {
        for (i, &e) in walk.edges().iter().enumerate() {
            let (a, b) = (walk.anchors()[i], walk.anchors()[i + 1]);
            pairs[e] = [a.min(b), a.max(b)];
        }
    }
    let gf = FamilySubgraph::from_pairs_unchecked(Arc::clone(g), pairs);
    gf.check_invariants()?;
    Ok(gf)
}
