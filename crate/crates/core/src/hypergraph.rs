//! Hypergraph data model: vertices with opaque labels, a multiset of edges
//! addressed by index, walks and Euler families over them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a vertex; labels are kept alongside.
pub type VertexId = usize;
/// Index of an edge in the edge list. Equal edges keep distinct ids.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    /// Vertex lists, each sorted by id.
    edges: Vec<Vec<VertexId>>,
    /// Incident edge ids per vertex, ascending.
    incident: Vec<Vec<EdgeId>>,
}

impl Hypergraph {
    /// Builds a hypergraph from vertex labels and edges given as label lists.
    /// Vertex ids follow the order of `labels`.
    pub fn new<L, E, S>(labels: L, edges: E) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        E: IntoIterator,
        E::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = build_index(&labels)?;
        let mut id_edges = Vec::new();
        for edge in edges {
            let mut ids = Vec::new();
            for label in edge {
                let label = label.as_ref();
                let id = *index
                    .get(label)
                    .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
                ids.push(id);
            }
            id_edges.push(ids);
        }
        Self::assemble(labels, index, id_edges)
    }

    /// Builds a hypergraph from labels and edges given as vertex ids.
    pub fn from_ids<L>(labels: L, edges: Vec<Vec<VertexId>>) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = build_index(&labels)?;
        Self::assemble(labels, index, edges)
    }

    /// Vertices labelled `0..n` in decimal.
    pub fn with_numbered_vertices(n: usize, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        Self::from_ids((0..n).map(|i| i.to_string()), edges)
    }

    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, VertexId>,
        mut edges: Vec<Vec<VertexId>>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut incident = vec![Vec::new(); n];
        for (e, edge) in edges.iter_mut().enumerate() {
            if let Some(&bad) = edge.iter().find(|&&v| v >= n) {
                return Err(Error::UnknownVertex(bad));
            }
            edge.sort_unstable();
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex {
                    edge: e,
                    label: labels[w[0]].clone(),
                });
            }
            for &v in edge.iter() {
                incident[v].push(e);
            }
        }
        Ok(Self {
            labels,
            index,
            edges,
            incident,
        })
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn edge_contains(&self, e: EdgeId, v: VertexId) -> bool {
        self.edges[e].binary_search(&v).is_ok()
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    /// Number of edges containing `v`, counted with multiplicity.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.incident
            .get(v)
            .map(Vec::len)
            .ok_or(Error::UnknownVertex(v))
    }

    /// Common edge size, if every edge has the same cardinality.
    pub fn uniformity(&self) -> Option<usize> {
        let first = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == first).then_some(first)
    }

    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.len() == k)
    }

    /// Connected components of the hypergraph that contain at least one edge,
    /// as sorted vertex lists.
    pub fn edge_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.incident[s].is_empty() {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &e in &self.incident[v] {
                    for &w in &self.edges[e] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

fn build_index(labels: &[String]) -> Result<HashMap<String, VertexId>> {
    if labels.is_empty() {
        return Err(Error::NoVertices);
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if index.insert(label.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(index)
}

/// Result of [`validate_covering`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport {
    pub is_k_uniform: bool,
    pub is_covering: bool,
    /// First (k-1)-subset in lexicographic id order lying in no edge.
    pub witness_uncovered: Option<Vec<VertexId>>,
}

/// Checks whether `h` is a covering k-hypergraph: non-empty, k-uniform, and
/// every (k-1)-subset of vertices lies in at least one edge.
pub fn validate_covering(h: &Hypergraph, k: usize) -> Result<CoveringReport> {
    if k < 3 {
        return Err(Error::UniformityTooSmall(k));
    }
    let is_k_uniform = h.is_uniform(k);
    let witness_uncovered = first_uncovered(h, k - 1);
    Ok(CoveringReport {
        is_k_uniform,
        is_covering: is_k_uniform && !h.is_empty() && witness_uncovered.is_none(),
        witness_uncovered,
    })
}

fn first_uncovered(h: &Hypergraph, r: usize) -> Option<Vec<VertexId>> {
    let n = h.order();
    if r > n {
        return None;
    }
    let mut subset: Vec<VertexId> = (0..r).collect();
    loop {
        if !subset_covered(h, &subset) {
            return Some(subset);
        }
        // advance to the next r-combination in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if subset[i] < n - r + i {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        subset[i] += 1;
        for j in i + 1..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn subset_covered(h: &Hypergraph, subset: &[VertexId]) -> bool {
    let Some(&pivot) = subset.iter().min_by_key(|&&v| h.incident[v].len()) else {
        return !h.is_empty();
    };
    h.incident[pivot]
        .iter()
        .any(|&e| subset.iter().all(|&v| h.edge_contains(e, v)))
}

/// A walk `v0 e1 v1 e2 ... ek vk`. Anchors and edges are stored as given;
/// well-formedness against a hypergraph is checked by verification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    anchors: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Walk {
    pub fn new(anchors: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        Self { anchors, edges }
    }

    /// A closed walk given by its anchors `v0..v(k-1)` and edges `e1..ek`;
    /// the final return to `v0` is implied.
    pub fn closed(mut anchors: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        if let Some(&first) = anchors.first() {
            anchors.push(first);
        }
        Self { anchors, edges }
    }

    pub fn anchors(&self) -> &[VertexId] {
        &self.anchors
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn well_shaped(&self) -> bool {
        self.anchors.len() == self.edges.len() + 1
    }

    pub fn is_trail(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.well_shaped() && self.edges.iter().all(|e| seen.insert(*e))
    }

    pub fn is_closed(&self) -> bool {
        self.well_shaped() && self.edges.len() >= 2 && self.anchors.first() == self.anchors.last()
    }

    pub fn is_cycle(&self) -> bool {
        if !(self.is_closed() && self.is_trail()) {
            return false;
        }
        let mut seen = BTreeSet::new();
        self.anchors[..self.anchors.len() - 1]
            .iter()
            .all(|v| seen.insert(*v))
    }

    /// Anchors of a closed walk without the repeated final anchor.
    pub fn cyclic_anchors(&self) -> &[VertexId] {
        &self.anchors[..self.anchors.len().saturating_sub(1)]
    }

    /// Rotation/reflection-minimal form of a closed walk, comparing the
    /// interleaved sequence `v0, e1, v1, e2, ...`. Open walks are returned as is.
    pub fn canonical(&self) -> Walk {
        if !self.is_closed() {
            return self.clone();
        }
        let k = self.edges.len();
        let anchors = self.cyclic_anchors();
        let mut best: Option<Vec<usize>> = None;
        for start in 0..k {
            for forward in [true, false] {
                let mut seq = Vec::with_capacity(2 * k);
                for step in 0..k {
                    if forward {
                        seq.push(anchors[(start + step) % k]);
                        seq.push(self.edges[(start + step) % k]);
                    } else {
                        // v_start, e_start, v_{start-1}, e_{start-1}, ...
                        let a = (start + k - step) % k;
                        let e = (start + k - step + k - 1) % k;
                        seq.push(anchors[a]);
                        seq.push(self.edges[e]);
                    }
                }
                if best.as_ref().map_or(true, |b| seq < *b) {
                    best = Some(seq);
                }
            }
        }
        let seq = best.expect("closed walk has at least two edges");
        let anchors = seq.iter().step_by(2).copied().collect();
        let edges = seq.iter().skip(1).step_by(2).copied().collect();
        Walk::closed(anchors, edges)
    }

    /// Renders the walk with vertex labels and 1-based edge names.
    pub fn display<'a>(&'a self, h: &'a Hypergraph) -> impl fmt::Display + 'a {
        WalkDisplay { walk: self, h }
    }
}

struct WalkDisplay<'a> {
    walk: &'a Walk,
    h: &'a Hypergraph,
}

impl fmt::Display for WalkDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.walk.anchors.iter().enumerate() {
            if i > 0 {
                write!(f, " e{} ", self.walk.edges[i - 1] + 1)?;
            }
            f.write_str(self.h.label(v))?;
        }
        Ok(())
    }
}

/// A collection of closed trails that should jointly traverse every edge once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EulerFamily {
    pub components: Vec<Walk>,
}

impl EulerFamily {
    pub fn new(components: Vec<Walk>) -> Self {
        Self { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_tour(&self) -> bool {
        self.components.len() == 1
    }
}

/// A closed trail traversing every edge exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EulerTour(Walk);

impl EulerTour {
    /// Wraps a walk. Use [`verify_euler_object`] to certify it.
    pub fn new(walk: Walk) -> Self {
        Self(walk)
    }

    pub fn walk(&self) -> &Walk {
        &self.0
    }

    pub fn into_walk(self) -> Walk {
        self.0
    }

    pub fn into_family(self) -> EulerFamily {
        EulerFamily::new(vec![self.0])
    }

    pub fn as_family(&self) -> EulerFamily {
        EulerFamily::new(vec![self.0.clone()])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Anchor count is not edge count plus one.
    Malformed {
        component: usize,
    },
    EdgeOutOfRange {
        component: usize,
        position: usize,
    },
    AnchorOutOfRange {
        component: usize,
        position: usize,
    },
    AnchorNotInEdge {
        component: usize,
        position: usize,
    },
    /// Two consecutive anchors coincide.
    RepeatedAnchor {
        component: usize,
        position: usize,
    },
    NotClosed {
        component: usize,
    },
    /// Closed trails need at least two edges.
    TooShort {
        component: usize,
    },
    EdgeRepeated {
        edge: EdgeId,
        component: usize,
        position: usize,
    },
    SharedAnchor {
        vertex: VertexId,
        components: (usize, usize),
    },
    MissingEdge {
        edge: EdgeId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Malformed { component } => {
                write!(
                    f,
                    "trail {component}: anchor and edge counts do not alternate"
                )
            }
            Violation::EdgeOutOfRange {
                component,
                position,
            } => {
                write!(
                    f,
                    "trail {component}: edge at position {position} does not exist"
                )
            }
            Violation::AnchorOutOfRange {
                component,
                position,
            } => {
                write!(
                    f,
                    "trail {component}: anchor at position {position} does not exist"
                )
            }
            Violation::AnchorNotInEdge {
                component,
                position,
            } => write!(
                f,
                "trail {component}: edge at position {position} misses one of its anchors"
            ),
            Violation::RepeatedAnchor {
                component,
                position,
            } => write!(
                f,
                "trail {component}: consecutive anchors around position {position} coincide"
            ),
            Violation::NotClosed { component } => write!(f, "trail {component} is not closed"),
            Violation::TooShort { component } => {
                write!(f, "trail {component} has fewer than two edges")
            }
            Violation::EdgeRepeated {
                edge,
                component,
                position,
            } => write!(
                f,
                "edge e{} traversed again by trail {component} at position {position}",
                edge + 1
            ),
            Violation::SharedAnchor { vertex, components } => write!(
                f,
                "vertex {vertex} is an anchor of trails {} and {}",
                components.0, components.1
            ),
            Violation::MissingEdge { edge } => write!(f, "edge e{} is never traversed", edge + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks every Euler family condition of `f` against `h` and lists failures.
pub fn verify_euler_object(h: &Hypergraph, f: &EulerFamily) -> VerifyReport {
    verify_against(h.order(), h.edges(), f)
}

/// Verification core shared with the incidence-graph view, which carries the
/// same edge lists without labels.
pub(crate) fn verify_against(
    order: usize,
    edges: &[Vec<VertexId>],
    f: &EulerFamily,
) -> VerifyReport {
    let mut violations = Vec::new();
    let mut used: Vec<Option<usize>> = vec![None; edges.len()];
    let mut anchor_owner: Vec<Option<usize>> = vec![None; order];

    for (c, walk) in f.components.iter().enumerate() {
        if !walk.well_shaped() {
            violations.push(Violation::Malformed { component: c });
            continue;
        }
        let mut ok_anchors = true;
        for (i, &v) in walk.anchors.iter().enumerate() {
            if v >= order {
                violations.push(Violation::AnchorOutOfRange {
                    component: c,
                    position: i,
                });
                ok_anchors = false;
            }
        }
        for (i, &e) in walk.edges.iter().enumerate() {
            if e >= edges.len() {
                violations.push(Violation::EdgeOutOfRange {
                    component: c,
                    position: i,
                });
                continue;
            }
            if used[e].is_some() {
                violations.push(Violation::EdgeRepeated {
                    edge: e,
                    component: c,
                    position: i,
                });
            } else {
                used[e] = Some(c);
            }
            if !ok_anchors {
                continue;
            }
            let (a, b) = (walk.anchors[i], walk.anchors[i + 1]);
            if edges[e].binary_search(&a).is_err() || edges[e].binary_search(&b).is_err() {
                violations.push(Violation::AnchorNotInEdge {
                    component: c,
                    position: i,
                });
            }
            if a == b {
                violations.push(Violation::RepeatedAnchor {
                    component: c,
                    position: i,
                });
            }
        }
        if walk.edges.len() < 2 {
            violations.push(Violation::TooShort { component: c });
        }
        if walk.anchors.first() != walk.anchors.last() {
            violations.push(Violation::NotClosed { component: c });
        }
        if ok_anchors {
            let distinct: BTreeSet<VertexId> = walk.anchors.iter().copied().collect();
            for v in distinct {
                match anchor_owner[v] {
                    Some(other) if other != c => violations.push(Violation::SharedAnchor {
                        vertex: v,
                        components: (other, c),
                    }),
                    Some(_) => {}
                    None => anchor_owner[v] = Some(c),
                }
            }
        }
    }
    for (e, owner) in used.iter().enumerate() {
        if owner.is_none() {
            violations.push(Violation::MissingEdge { edge: e });
        }
    }
    VerifyReport {
        valid: violations.is_empty(),
        violations,
    }
}
