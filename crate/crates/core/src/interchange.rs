//! Interchanging cycles and the merging loop that turns an Euler family of a
//! covering 3-hypergraph into an Euler tour.
//!
//! A cycle `C` of the incidence graph is *interchanging* for a family
//! subgraph `G_F` when every e-vertex on `C` meets exactly one `G_F`-edge of
//! `C`. Replacing `G_F` by the symmetric difference `G_F Δ C` keeps every
//! e-vertex at degree 2 and every v-vertex at even degree, so the result is
//! again a family subgraph. A cycle is *diminishing* when the symmetric
//! difference has fewer non-trivial components.
//!
//! The merging loop repeatedly looks for a diminishing cycle:
//!
//! * **S1**, three or more components: one non-cut v-vertex per component,
//!   linked circularly through edges holding consecutive picks;
//! * **S2**, 4-cycles `v e1 u e2 v` whose `G_F`-edges sit in different components;
//! * **S3**, bounded enumeration of interchanging cycles by length.
//!
//! When none exists the loop fixes a pivot v-vertex and searches for
//! interchanging cycles that lower its `G_F`-degree without adding
//! components. If the current subgraph admits no such move either, it
//! explores subgraphs reachable through moves that leave both the component
//! count and the pivot degree unchanged, and commits the first path ending
//! in a move that lowers the potential (component count, pivot degree).

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::family::{partition_of, subgraph_from_trails, trails_from_subgraph, FamilySubgraph};
use crate::hypergraph::{
    validate_covering, verify_euler_object, EdgeId, EulerFamily, EulerTour, Hypergraph, VertexId,
    Walk,
};
use crate::incidence::{block_decomposition, build_incidence, IncidenceGraph};

/// A cycle `x0 e1 x1 e2 ... ek x0` of the incidence graph together with which
/// of its incidence-graph edges belong to `G_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterchangeCycle {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    /// `2i` is `(x_i, e_{i+1}) ∈ G_F`, `2i + 1` is `(x_{i+1}, e_{i+1}) ∈ G_F`.
    in_family: Vec<bool>,
}

impl InterchangeCycle {
    /// Tags `cycle` against `gf`; fails unless it is an interchanging cycle.
    pub fn new(gf: &FamilySubgraph, cycle: &Walk) -> Result<Self> {
        check_cycle(gf.host(), cycle)?;
        let c = Self::tagged(gf, cycle.cyclic_anchors().to_vec(), cycle.edges().to_vec());
        if !c.is_interchanging() {
            return Err(Error::Precondition("cycle is not interchanging".into()));
        }
        Ok(c)
    }

    fn tagged(gf: &FamilySubgraph, vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        let in_family = flags_of(gf, &vertices, &edges);
        Self {
            vertices,
            edges,
            in_family,
        }
    }

    fn is_interchanging(&self) -> bool {
        self.in_family.chunks(2).all(|f| f[0] != f[1])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn in_family(&self) -> &[bool] {
        &self.in_family
    }

    /// Number of e-vertices; the incidence-graph length is twice this.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_walk(&self) -> Walk {
        Walk::closed(self.vertices.clone(), self.edges.clone())
    }

    /// Change in the `G_F`-degree of `v` when this cycle is applied.
    pub fn degree_delta(&self, v: VertexId) -> isize {
        degree_delta(&self.vertices, &self.in_family, v)
    }
}

fn flags_of(gf: &FamilySubgraph, vertices: &[VertexId], edges: &[EdgeId]) -> Vec<bool> {
    let k = vertices.len();
    let mut flags = Vec::with_capacity(2 * k);
    for (i, &e) in edges.iter().enumerate() {
        flags.push(gf.contains(vertices[i], e));
        flags.push(gf.contains(vertices[(i + 1) % k], e));
    }
    flags
}

fn degree_delta(vertices: &[VertexId], flags: &[bool], v: VertexId) -> isize {
    let k = vertices.len();
    let Some(i) = vertices.iter().position(|&x| x == v) else {
        return 0;
    };
    // x_i meets e_{i+1} (flag 2i) and e_i (flag 2(i-1)+1)
    let inside = flags[2 * i] as isize + flags[2 * ((i + k - 1) % k) + 1] as isize;
    2 - 2 * inside
}

fn check_cycle(host: &IncidenceGraph, cycle: &Walk) -> Result<()> {
    if !cycle.is_cycle() {
        return Err(Error::NotACycle(
            "anchors or edges repeat, or the walk is open".into(),
        ));
    }
    for (i, &e) in cycle.edges().iter().enumerate() {
        let (a, b) = (cycle.anchors()[i], cycle.anchors()[i + 1]);
        if e >= host.e_count() || a >= host.v_count() || b >= host.v_count() {
            return Err(Error::NotACycle(format!("position {i} is out of range")));
        }
        if !host.is_incident(a, e) || !host.is_incident(b, e) {
            return Err(Error::NotACycle(format!("e{} misses an anchor", e + 1)));
        }
    }
    Ok(())
}

/// True iff every e-vertex on `c` touches exactly one `G_F`-edge of `c`.
pub fn is_interchanging(gf: &FamilySubgraph, c: &Walk) -> Result<bool> {
    check_cycle(gf.host(), c)?;
    let flags = flags_of(gf, c.cyclic_anchors(), c.edges());
    Ok(flags.chunks(2).all(|f| f[0] != f[1]))
}

/// `G_F Δ C`.
pub fn apply_interchange(gf: &FamilySubgraph, c: &InterchangeCycle) -> Result<FamilySubgraph> {
    if !c.is_interchanging() || flags_of(gf, &c.vertices, &c.edges) != c.in_family {
        return Err(Error::Precondition(
            "cycle is not interchanging for this family subgraph".into(),
        ));
    }
    let mut pairs = gf.pairs().to_vec();
    swap_along(&mut pairs, &c.vertices, &c.edges, &c.in_family);
    Ok(FamilySubgraph::from_pairs_unchecked(
        Arc::clone(gf.host()),
        pairs,
    ))
}

fn swap_along(
    pairs: &mut [[VertexId; 2]],
    vertices: &[VertexId],
    edges: &[EdgeId],
    flags: &[bool],
) {
    let k = vertices.len();
    for (i, &e) in edges.iter().enumerate() {
        let (x, y) = (vertices[i], vertices[(i + 1) % k]);
        let (out, inn) = if flags[2 * i] { (x, y) } else { (y, x) };
        let p = pairs[e];
        let keep = if p[0] == out { p[1] } else { p[0] };
        pairs[e] = [keep.min(inn), keep.max(inn)];
    }
}

/// Bounds for the cycle searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Longest interchanging cycle tried, in incidence-graph edges.
    pub max_cycle_len: usize,
    /// Longest cycle used for moves that keep the potential unchanged.
    pub plateau_cycle_len: usize,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_cycle_len: 12,
            plateau_cycle_len: 8,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    S1,
    S2,
    S3,
}

/// A diminishing cycle, which strategy found it, and the resulting subgraph.
#[derive(Debug, Clone)]
pub struct Diminishing {
    pub strategy: Strategy,
    pub cycle: InterchangeCycle,
    pub result: FamilySubgraph,
}

/// An interchanging cycle whose application leaves fewer non-trivial
/// components, trying S1, S2 and S3 in turn.
pub fn find_diminishing_cycle(
    gf: &FamilySubgraph,
    config: &SearchConfig,
) -> Result<Option<InterchangeCycle>> {
    Ok(find_diminishing(gf, config, &AtomicUsize::new(0))?.map(|d| d.cycle))
}

/// Like [`find_diminishing_cycle`], also reporting the strategy and result.
pub fn find_diminishing(
    gf: &FamilySubgraph,
    config: &SearchConfig,
    candidates: &AtomicUsize,
) -> Result<Option<Diminishing>> {
    if gf.nontrivial_count() < 2 {
        return Err(Error::Precondition(
            "a diminishing cycle needs at least two non-trivial components".into(),
        ));
    }
    if let Some((cycle, result)) = strategy_s1(gf) {
        return Ok(Some(Diminishing {
            strategy: Strategy::S1,
            cycle,
            result,
        }));
    }
    if let Some((cycle, result)) = strategy_s2(gf) {
        return Ok(Some(Diminishing {
            strategy: Strategy::S2,
            cycle,
            result,
        }));
    }
    let current = gf.nontrivial_count();
    let found = deepening_search(gf, config.max_cycle_len, config.execution, |vs, es| {
        candidates.fetch_add(1, Ordering::Relaxed);
        let (flags, pairs) = applied(gf, vs, es);
        let part = partition_of(gf.host().v_count(), &pairs);
        (part.nontrivial_count() < current).then(|| (vs.to_vec(), es.to_vec(), flags, pairs))
    });
    Ok(
        found.map(|(vertices, edges, in_family, pairs)| Diminishing {
            strategy: Strategy::S3,
            cycle: InterchangeCycle {
                vertices,
                edges,
                in_family,
            },
            result: FamilySubgraph::from_pairs_unchecked(Arc::clone(gf.host()), pairs),
        }),
    )
}

fn applied(gf: &FamilySubgraph, vs: &[VertexId], es: &[EdgeId]) -> (Vec<bool>, Vec<[VertexId; 2]>) {
    let flags = flags_of(gf, vs, es);
    let mut pairs = gf.pairs().to_vec();
    swap_along(&mut pairs, vs, es, &flags);
    (flags, pairs)
}

/// Non-cut v-vertices of each component of `gf`, components in partition order.
pub(crate) fn non_cut_by_component(gf: &FamilySubgraph) -> Vec<Vec<VertexId>> {
    let blocks = block_decomposition(&gf.to_graph());
    gf.partition()
        .members()
        .into_iter()
        .map(|vs| {
            vs.into_iter()
                .filter(|&v| !blocks.is_cut_vertex(v))
                .collect()
        })
        .collect()
}

/// S1: one non-cut v-vertex per component, linked circularly.
pub fn strategy_s1(gf: &FamilySubgraph) -> Option<(InterchangeCycle, FamilySubgraph)> {
    if gf.component_count() < 3 {
        return None;
    }
    let host = gf.host();
    let picks: Vec<VertexId> = non_cut_by_component(gf)
        .into_iter()
        .map(|vs| vs.first().copied())
        .collect::<Option<_>>()?;
    let t = picks.len();
    let mut edges = Vec::with_capacity(t);
    for i in 0..t {
        let (a, b) = (picks[i], picks[(i + 1) % t]);
        let e = host
            .v_neighbors(a)
            .iter()
            .copied()
            .find(|&e| host.is_incident(b, e) && !edges.contains(&e))?;
        edges.push(e);
    }
    let cycle = InterchangeCycle::tagged(gf, picks, edges);
    if !cycle.is_interchanging() {
        return None;
    }
    let result = apply_interchange(gf, &cycle).ok()?;
    (result.nontrivial_count() < gf.nontrivial_count()).then_some((cycle, result))
}

/// S2: 4-cycles `v e1 u e2 v` whose `G_F`-edges lie in distinct components.
pub fn strategy_s2(gf: &FamilySubgraph) -> Option<(InterchangeCycle, FamilySubgraph)> {
    let host = gf.host();
    let part = gf.partition();
    for v in 0..host.v_count() {
        let incident = host.v_neighbors(v);
        for (i, &e1) in incident.iter().enumerate() {
            for &u in host.e_neighbors(e1) {
                if u <= v || gf.contains(v, e1) == gf.contains(u, e1) {
                    continue;
                }
                for &e2 in &incident[i + 1..] {
                    if !host.is_incident(u, e2)
                        || gf.contains(v, e2) == gf.contains(u, e2)
                        || part.e_comp[e1] == part.e_comp[e2]
                    {
                        continue;
                    }
                    let cycle = InterchangeCycle::tagged(gf, vec![v, u], vec![e1, e2]);
                    let result = apply_interchange(gf, &cycle).ok()?;
                    if result.nontrivial_count() < gf.nontrivial_count() {
                        return Some((cycle, result));
                    }
                }
            }
        }
    }
    None
}

/// Checks the hypothesis of the component-linking lemma: every component of
/// `G_F` touched by `c` keeps at most one non-trivial component once the
/// edges of `c` are removed. When it holds, the touched components merge into
/// at most one non-trivial component of `G_F Δ C`.
pub fn touched_components_stay_linked(gf: &FamilySubgraph, c: &InterchangeCycle) -> bool {
    let host = gf.host();
    let part = gf.partition();
    let n = host.v_count();
    let k = c.vertices.len();
    let mut on_cycle = HashSet::new();
    for (i, &e) in c.edges.iter().enumerate() {
        on_cycle.insert((c.vertices[i], e));
        on_cycle.insert((c.vertices[(i + 1) % k], e));
    }
    // union-find over v-nodes 0..n and e-nodes n..n+m of G_F minus E(C)
    let mut parent: Vec<usize> = (0..n + host.e_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut has_edge = vec![false; parent.len()];
    for (v, e) in gf.selected() {
        if on_cycle.contains(&(v, e)) {
            continue;
        }
        let (a, b) = (find(&mut parent, v), find(&mut parent, n + e));
        parent[a] = b;
        has_edge[v] = true;
        has_edge[n + e] = true;
    }
    let mut touched: Vec<usize> = c.vertices.iter().map(|&v| part.v_comp[v]).collect();
    touched.sort_unstable();
    touched.dedup();
    touched.into_iter().all(|comp| {
        let nodes = (0..n).filter(|&v| part.v_comp[v] == comp).chain(
            (0..host.e_count())
                .filter(|&e| part.e_comp[e] == comp)
                .map(|e| n + e),
        );
        let mut roots: Vec<usize> = nodes
            .filter(|&x| has_edge[x])
            .map(|x| find(&mut parent, x))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() <= 1
    })
}

/// Enumerates interchanging cycles by increasing length and returns the
/// first hit of `visit`. Each cycle is visited once, from its smallest
/// v-vertex, in one direction.
fn deepening_search<R, F>(
    gf: &FamilySubgraph,
    max_len: usize,
    exec: Execution,
    visit: F,
) -> Option<R>
where
    R: Send,
    F: Fn(&[VertexId], &[EdgeId]) -> Option<R> + Sync + Send,
{
    let starts: Vec<VertexId> = (0..gf.host().v_count()).collect();
    (2..=max_len / 2).find_map(|k| {
        exec.find_map_first(&starts, |&s| {
            let mut vs = vec![s];
            let mut es = Vec::with_capacity(k);
            extend(
                gf,
                k,
                &mut vs,
                &mut es,
                &mut |v: &[VertexId], e: &[EdgeId]| visit(v, e),
            )
        })
    })
}

/// Every cycle with at most `max_len / 2` e-vertices accepted by `visit`,
/// shortest first.
fn collect_cycles<R, F>(gf: &FamilySubgraph, max_len: usize, exec: Execution, visit: F) -> Vec<R>
where
    R: Send,
    F: Fn(&[VertexId], &[EdgeId]) -> Option<R> + Sync + Send,
{
    let starts: Vec<VertexId> = (0..gf.host().v_count()).collect();
    (2..=max_len / 2)
        .flat_map(|k| {
            exec.flat_map(&starts, |&s| {
                let mut out = Vec::new();
                let mut vs = vec![s];
                let mut es = Vec::with_capacity(k);
                extend(
                    gf,
                    k,
                    &mut vs,
                    &mut es,
                    &mut |v: &[VertexId], e: &[EdgeId]| {
                        if let Some(r) = visit(v, e) {
                            out.push(r);
                        }
                        None::<()>
                    },
                );
                out
            })
        })
        .collect()
}

fn extend<R>(
    gf: &FamilySubgraph,
    k: usize,
    vs: &mut Vec<VertexId>,
    es: &mut Vec<EdgeId>,
    visit: &mut dyn FnMut(&[VertexId], &[EdgeId]) -> Option<R>,
) -> Option<R> {
    let host = gf.host();
    let s = vs[0];
    let x = *vs.last().expect("path starts at s");
    if vs.len() == k {
        for &e in host.v_neighbors(x) {
            if es.contains(&e) || !host.is_incident(s, e) || gf.contains(x, e) == gf.contains(s, e)
            {
                continue;
            }
            let mirrored = if k == 2 { e < es[0] } else { vs[1] > vs[k - 1] };
            if mirrored {
                continue;
            }
            es.push(e);
            let r = visit(vs, es);
            es.pop();
            if r.is_some() {
                return r;
            }
        }
        return None;
    }
    for &e in host.v_neighbors(x) {
        if es.contains(&e) {
            continue;
        }
        let x_in = gf.contains(x, e);
        for &y in host.e_neighbors(e) {
            if y <= s || vs.contains(&y) || gf.contains(y, e) == x_in {
                continue;
            }
            vs.push(y);
            es.push(e);
            let r = extend(gf, k, vs, es, visit);
            vs.pop();
            es.pop();
            if r.is_some() {
                return r;
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MergeStats {
    /// Interchanges committed plus plateau states expanded; this is what the
    /// budget limits.
    pub steps: usize,
    pub committed: usize,
    pub plateau_states: usize,
    /// Candidate cycles evaluated. Not reproducible under parallel execution,
    /// since workers may evaluate past the first hit.
    pub candidates: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub pivot_moves: usize,
    pub plateau_moves: usize,
    pub split_moves: usize,
    /// Times the loop held a subgraph with no diminishing cycle in reach.
    pub minimum_observations: usize,
}

impl MergeStats {
    pub fn absorb(&mut self, other: &MergeStats) {
        self.steps += other.steps;
        self.committed += other.committed;
        self.plateau_states += other.plateau_states;
        self.candidates += other.candidates;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self.pivot_moves += other.pivot_moves;
        self.plateau_moves += other.plateau_moves;
        self.split_moves += other.split_moves;
        self.minimum_observations += other.minimum_observations;
    }
}

/// State of a merge that ran out of budget or moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuckReport {
    pub pairs: Vec<[VertexId; 2]>,
    pub nontrivial: usize,
    pub pivot: VertexId,
    pub stats: MergeStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeConfig {
    pub search: SearchConfig,
    /// Maximum steps; defaults to `10 * |E|^2`.
    pub budget: Option<usize>,
    /// Defaults to a maximum-degree vertex, lowest id on ties.
    pub pivot: Option<VertexId>,
}

impl Default for MergeConfig {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            budget: None,
            pivot: None,
        }
    }
}

impl MergeConfig {
    pub fn budget_for(&self, edges: usize) -> usize {
        self.budget.unwrap_or(10 * edges * edges).max(1)
    }
}

pub fn default_pivot(host: &IncidenceGraph) -> VertexId {
    (0..host.v_count())
        .max_by_key(|&v| (host.v_neighbors(v).len(), std::cmp::Reverse(v)))
        .unwrap_or(0)
}

enum Move {
    Commit(Vec<InterchangeCycle>, FamilySubgraph),
}

/// Runs the merging loop until `G_F` has at most one non-trivial component.
///
/// With `covering` set, the input is taken to be a covering 3-hypergraph and
/// every time no diminishing cycle is found the subgraph is checked to have
/// exactly two non-trivial components and no isolated v-vertex.
pub fn merge_subgraph(
    mut gf: FamilySubgraph,
    config: &MergeConfig,
    covering: bool,
) -> Result<(FamilySubgraph, MergeStats)> {
    let host = Arc::clone(gf.host());
    let budget = config.budget_for(host.e_count());
    let pivot = config.pivot.unwrap_or_else(|| default_pivot(&host));
    if pivot >= host.v_count() {
        return Err(Error::UnknownVertex(pivot));
    }
    let mut stats = MergeStats::default();
    let candidates = AtomicUsize::new(0);
    let stuck = |gf: &FamilySubgraph, stats: &MergeStats, candidates: &AtomicUsize| {
        let mut stats = stats.clone();
        stats.candidates = candidates.load(Ordering::Relaxed);
        Error::BudgetExhausted {
            budget,
            report: Box::new(StuckReport {
                pairs: gf.pairs().to_vec(),
                nontrivial: gf.nontrivial_count(),
                pivot,
                stats,
            }),
        }
    };

    while gf.nontrivial_count() > 1 {
        if stats.steps >= budget {
            return Err(stuck(&gf, &stats, &candidates));
        }
        if let Some(d) = find_diminishing(&gf, &config.search, &candidates)? {
            match d.strategy {
                Strategy::S1 => stats.s1 += 1,
                Strategy::S2 => stats.s2 += 1,
                Strategy::S3 => stats.s3 += 1,
            }
            stats.steps += 1;
            stats.committed += 1;
            gf = d.result;
            continue;
        }
        stats.minimum_observations += 1;
        if covering && (gf.nontrivial_count() != 2 || !gf.isolated_vertices().is_empty()) {
            return Err(Error::CertificateViolation(format!(
                "no diminishing cycle, yet the family has {} components and {} isolated v-vertices",
                gf.nontrivial_count(),
                gf.isolated_vertices().len()
            )));
        }
        match pivot_search(&gf, pivot, config, budget, &mut stats, &candidates)? {
            Some(Move::Commit(path, result)) => {
                stats.steps += path.len();
                stats.committed += path.len();
                gf = result;
            }
            None => return Err(stuck(&gf, &stats, &candidates)),
        }
    }
    stats.candidates = candidates.load(Ordering::Relaxed);
    Ok((gf, stats))
}

enum Progress {
    Pivot,
    Split(InterchangeCycle),
}

/// Breadth-first search over subgraphs with the same component count and
/// pivot degree, stopping at the first one with a potential-lowering move.
fn pivot_search(
    root: &FamilySubgraph,
    pivot: VertexId,
    config: &MergeConfig,
    budget: usize,
    stats: &mut MergeStats,
    candidates: &AtomicUsize,
) -> Result<Option<Move>> {
    let host = Arc::clone(root.host());
    let n = host.v_count();
    let nontrivial = root.nontrivial_count();
    let total = root.component_count();
    let exec = config.search.execution;

    // (state, parent, cycle applied to parent)
    let mut states: Vec<(FamilySubgraph, usize, Option<InterchangeCycle>)> =
        vec![(root.clone(), usize::MAX, None)];
    let mut seen: HashSet<Vec<[VertexId; 2]>> = HashSet::new();
    seen.insert(root.pairs().to_vec());
    let mut head = 0;
    while head < states.len() {
        if stats.steps >= budget {
            return Ok(None);
        }
        stats.steps += 1;
        stats.plateau_states += 1;
        let state = states[head].0.clone();

        let progress = deepening_search(&state, config.search.max_cycle_len, exec, |vs, es| {
            candidates.fetch_add(1, Ordering::Relaxed);
            let (flags, pairs) = applied(&state, vs, es);
            let part = partition_of(n, &pairs);
            let cycle = || InterchangeCycle {
                vertices: vs.to_vec(),
                edges: es.to_vec(),
                in_family: flags.clone(),
            };
            if part.nontrivial_count() < nontrivial {
                return Some((cycle(), pairs, None));
            }
            if part.nontrivial_count() == nontrivial && degree_delta(vs, &flags, pivot) < 0 {
                return Some((cycle(), pairs, Some(Progress::Pivot)));
            }
            if part.count() >= 3 {
                let next = FamilySubgraph::from_pairs_unchecked(Arc::clone(&host), pairs.clone());
                if let Some((s1, merged)) = strategy_s1(&next) {
                    if merged.nontrivial_count() < nontrivial {
                        return Some((cycle(), merged.pairs().to_vec(), Some(Progress::Split(s1))));
                    }
                }
            }
            None
        });

        if let Some((cycle, pairs, kind)) = progress {
            let mut path = Vec::new();
            let mut at = head;
            while let Some(c) = states[at].2.clone() {
                path.push(c);
                at = states[at].1;
            }
            path.reverse();
            stats.plateau_moves += path.len();
            path.push(cycle);
            match kind {
                None => stats.s3 += 1,
                Some(Progress::Pivot) => stats.pivot_moves += 1,
                Some(Progress::Split(s1)) => {
                    stats.split_moves += 1;
                    stats.s1 += 1;
                    path.push(s1);
                }
            }
            let result = FamilySubgraph::from_pairs_unchecked(Arc::clone(&host), pairs);
            return Ok(Some(Move::Commit(path, result)));
        }

        let neighbours = collect_cycles(&state, config.search.plateau_cycle_len, exec, |vs, es| {
            candidates.fetch_add(1, Ordering::Relaxed);
            let (flags, pairs) = applied(&state, vs, es);
            if degree_delta(vs, &flags, pivot) != 0 {
                return None;
            }
            let part = partition_of(n, &pairs);
            (part.nontrivial_count() == nontrivial && part.count() == total).then(|| {
                (
                    InterchangeCycle {
                        vertices: vs.to_vec(),
                        edges: es.to_vec(),
                        in_family: flags,
                    },
                    pairs,
                )
            })
        });
        for (cycle, pairs) in neighbours {
            if seen.insert(pairs.clone()) {
                let next = FamilySubgraph::from_pairs_unchecked(Arc::clone(&host), pairs);
                states.push((next, head, Some(cycle)));
            }
        }
        head += 1;
    }
    Ok(None)
}

/// Result of [`merge_to_tour_with`].
#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub tour: EulerTour,
    pub stats: MergeStats,
}

/// Merges an Euler family of a covering 3-hypergraph with at least two edges
/// into an Euler tour.
pub fn merge_to_tour(
    h: &Hypergraph,
    f: &EulerFamily,
    pivot: Option<VertexId>,
) -> Result<EulerTour> {
    let config = MergeConfig {
        pivot,
        ..MergeConfig::default()
    };
    merge_to_tour_with(h, f, &config).map(|o| o.tour)
}

pub fn merge_to_tour_with(
    h: &Hypergraph,
    f: &EulerFamily,
    config: &MergeConfig,
) -> Result<MergeOutcome> {
    let report = validate_covering(h, 3)?;
    if !report.is_covering {
        return Err(Error::NotCovering { k: 3 });
    }
    if h.size() < 2 {
        return Err(Error::Precondition(
            "an Euler tour needs at least two edges".into(),
        ));
    }
    let verified = verify_euler_object(h, f);
    if !verified.valid {
        let reasons: Vec<String> = verified
            .violations
            .iter()
            .map(ToString::to_string)
            .collect();
        return Err(Error::CertificateViolation(reasons.join("; ")));
    }
    if let Some(pivot) = config.pivot {
        if pivot >= h.order() {
            return Err(Error::UnknownVertex(pivot));
        }
    }
    if f.is_tour() {
        return Ok(MergeOutcome {
            tour: EulerTour::new(f.components[0].clone()),
            stats: MergeStats::default(),
        });
    }
    if h.order() == 3 {
        return Ok(MergeOutcome {
            tour: order_three_tour(h.size()),
            stats: MergeStats::default(),
        });
    }
    let host = Arc::new(build_incidence(h));
    let gf = subgraph_from_trails(&host, f)?;
    let (gf, stats) = merge_subgraph(gf, config, true)?;
    let family = trails_from_subgraph(&gf)?;
    if !family.is_tour() {
        return Err(Error::CertificateViolation(format!(
            "merging ended with {} trails",
            family.len()
        )));
    }
    let tour = EulerTour::new(family.components.into_iter().next().expect("one trail"));
    Ok(MergeOutcome { tour, stats })
}

/// Tour of `m >= 2` copies of the triple on vertices 0, 1, 2: anchors
/// alternate 0 and 1, with a detour through 2 when `m` is odd.
pub fn order_three_tour(m: usize) -> EulerTour {
    assert!(m >= 2, "a closed trail needs two edges");
    let mut anchors: Vec<VertexId> = (0..m).map(|i| i % 2).collect();
    if m % 2 == 1 {
        anchors[m - 1] = 2;
    }
    EulerTour::new(Walk::closed(anchors, (0..m).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::find_family_subgraph;
    use crate::hypergraph::verify_euler_object;
    use crate::testkit::{complete3, fano, two_squares_cover};

    fn host(h: &Hypergraph) -> Arc<IncidenceGraph> {
        Arc::new(build_incidence(h))
    }

    #[test]
    fn interchanging_flags() {
        let (h, gf) = two_squares_cover();
        let (a, b, c) = (
            h.vertex("a").unwrap(),
            h.vertex("b").unwrap(),
            h.vertex("c").unwrap(),
        );
        // e1 and e2 both select a and b
        assert!(!is_interchanging(&gf, &Walk::closed(vec![a, b], vec![0, 1])).unwrap());
        // e1 selects a but not c, e3 selects c but not a
        assert!(is_interchanging(&gf, &Walk::closed(vec![a, c], vec![0, 2])).unwrap());
    }

    #[test]
    fn not_a_cycle() {
        let (_, gf) = two_squares_cover();
        assert!(matches!(
            is_interchanging(&gf, &Walk::closed(vec![0, 0], vec![0, 1])),
            Err(Error::NotACycle(_))
        ));
        assert!(matches!(
            is_interchanging(&gf, &Walk::new(vec![0, 1], vec![0])),
            Err(Error::NotACycle(_))
        ));
    }

    #[test]
    fn crossing_cycle_merges_two_squares() {
        let (h, gf) = two_squares_cover();
        assert_eq!(gf.nontrivial_count(), 2);
        let (a, c) = (h.vertex("a").unwrap(), h.vertex("c").unwrap());
        let cycle = InterchangeCycle::new(&gf, &Walk::closed(vec![a, c], vec![0, 2])).unwrap();
        let merged = apply_interchange(&gf, &cycle).unwrap();
        assert_eq!(merged.nontrivial_count(), 1);
        merged.check_invariants().unwrap();
        let fam = trails_from_subgraph(&merged).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.components[0].len(), 4);
        assert!(verify_euler_object(&h, &fam).valid);
        // involution
        let back_cycle = InterchangeCycle::new(&merged, &cycle.to_walk()).unwrap();
        assert_eq!(apply_interchange(&merged, &back_cycle).unwrap(), gf);
    }

    #[test]
    fn stale_cycle_rejected() {
        let (h, gf) = two_squares_cover();
        let (a, c) = (h.vertex("a").unwrap(), h.vertex("c").unwrap());
        let cycle = InterchangeCycle::new(&gf, &Walk::closed(vec![a, c], vec![0, 2])).unwrap();
        let merged = apply_interchange(&gf, &cycle).unwrap();
        assert!(matches!(
            apply_interchange(&merged, &cycle),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_component_has_nothing_to_diminish() {
        let h = fano();
        let gf = find_family_subgraph(&host(&h)).unwrap();
        if gf.nontrivial_count() == 1 {
            assert!(matches!(
                find_diminishing_cycle(&gf, &SearchConfig::default()),
                Err(Error::Precondition(_))
            ));
        }
    }

    #[test]
    fn order_three_tours() {
        let labels = ["a", "b", "c"];
        for m in 2..9 {
            let h = Hypergraph::new(labels, vec![labels; m]).unwrap();
            let t = order_three_tour(m);
            assert!(verify_euler_object(&h, &t.as_family()).valid, "m = {m}");
        }
    }

    #[test]
    fn merge_complete_five() {
        let h = complete3(5);
        let gf = find_family_subgraph(&host(&h)).unwrap();
        let fam = trails_from_subgraph(&gf).unwrap();
        let tour = merge_to_tour(&h, &fam, None).unwrap();
        assert_eq!(tour.walk().len(), 10);
        assert!(verify_euler_object(&h, &tour.as_family()).valid);
    }

    #[test]
    fn merge_keeps_existing_tour() {
        let h = complete3(4);
        let gf = find_family_subgraph(&host(&h)).unwrap();
        let fam = trails_from_subgraph(&gf).unwrap();
        let tour = merge_to_tour(&h, &fam, None).unwrap();
        let again = merge_to_tour(&h, &tour.as_family(), None).unwrap();
        assert_eq!(again, tour);
    }

    #[test]
    fn merge_rejects_non_covering() {
        let h = Hypergraph::new(["a", "b", "c", "d"], [["a", "b", "c"], ["a", "b", "c"]]).unwrap();
        let fam = EulerFamily::new(vec![Walk::closed(vec![0, 1], vec![0, 1])]);
        assert_eq!(
            merge_to_tour(&h, &fam, None),
            Err(Error::NotCovering { k: 3 })
        );
    }

    #[test]
    fn two_squares_merge_from_family() {
        let (h, gf) = two_squares_cover();
        let fam = trails_from_subgraph(&gf).unwrap();
        assert_eq!(fam.len(), 2);
        let tour = merge_to_tour(&h, &fam, None).unwrap();
        assert!(verify_euler_object(&h, &tour.as_family()).valid);
    }

    #[test]
    fn degree_delta_signs() {
        let (h, gf) = two_squares_cover();
        let (a, c) = (h.vertex("a").unwrap(), h.vertex("c").unwrap());
        let cycle = InterchangeCycle::new(&gf, &Walk::closed(vec![a, c], vec![0, 2])).unwrap();
        // a keeps one selected edge on C, so its degree is unchanged
        assert_eq!(cycle.degree_delta(a), 0);
        assert_eq!(cycle.degree_delta(h.vertex("b").unwrap()), 0);
    }

    fn all_interchanging(gf: &FamilySubgraph, max_len: usize) -> Vec<InterchangeCycle> {
        collect_cycles(gf, max_len, Execution::Sequential, |vs, es| {
            Some(InterchangeCycle::tagged(gf, vs.to_vec(), es.to_vec()))
        })
    }

    fn random_state(n: usize, seed: u64, walk: &[usize]) -> FamilySubgraph {
        let h = crate::genio::generators::gen_random_covering(n, 3, seed).unwrap();
        let mut gf = find_family_subgraph(&host(&h)).unwrap();
        for &pick in walk {
            let cycles = all_interchanging(&gf, 6);
            if cycles.is_empty() {
                break;
            }
            gf = apply_interchange(&gf, &cycles[pick % cycles.len()]).unwrap();
        }
        gf
    }

    /// Like `random_state`, but only takes steps that add components.
    fn split_state(n: usize, seed: u64, walk: &[usize]) -> FamilySubgraph {
        let h = crate::genio::generators::gen_random_covering(n, 3, seed).unwrap();
        let mut gf = find_family_subgraph(&host(&h)).unwrap();
        for &pick in walk {
            let splits: Vec<FamilySubgraph> = all_interchanging(&gf, 8)
                .iter()
                .map(|c| apply_interchange(&gf, c).unwrap())
                .filter(|next| next.nontrivial_count() > gf.nontrivial_count())
                .collect();
            if splits.is_empty() {
                break;
            }
            gf = splits[pick % splits.len()].clone();
        }
        gf
    }

    #[test]
    fn enumerated_cycles_are_distinct_and_interchanging() {
        let h = complete3(5);
        let gf = find_family_subgraph(&host(&h)).unwrap();
        let cycles = all_interchanging(&gf, 8);
        assert!(!cycles.is_empty());
        let mut seen = HashSet::new();
        for c in &cycles {
            assert!(c.is_interchanging());
            assert!(is_interchanging(&gf, &c.to_walk()).unwrap());
            assert!(seen.insert(c.to_walk().canonical()), "cycle listed twice");
        }
    }

    #[test]
    fn s1_cycles_satisfy_the_linking_hypothesis() {
        let (_, gf) = two_squares_cover();
        let (a, c) = (0, 2);
        let cycle = InterchangeCycle::new(&gf, &Walk::closed(vec![a, c], vec![0, 2])).unwrap();
        // a and c are not cut vertices, so removing the cycle leaves each square in one piece
        assert!(touched_components_stay_linked(&gf, &cycle));
    }

    proptest::proptest! {
        #[test]
        fn interchange_is_an_involution_with_the_degree_identity(
            n in 4usize..8,
            seed in 0u64..500,
            walk in proptest::collection::vec(0usize..1000, 0..4),
            pick in 0usize..1000,
        ) {
            let gf = random_state(n, seed, &walk);
            let cycles = all_interchanging(&gf, 8);
            proptest::prop_assume!(!cycles.is_empty());
            let c = &cycles[pick % cycles.len()];
            let next = apply_interchange(&gf, c).unwrap();
            proptest::prop_assert!(next.check_invariants().is_ok());
            for v in 0..gf.host().v_count() {
                proptest::prop_assert_eq!(
                    next.v_degree(v) as isize,
                    gf.v_degree(v) as isize + c.degree_delta(v)
                );
            }
            let back = InterchangeCycle::new(&next, &c.to_walk()).unwrap();
            proptest::prop_assert_eq!(apply_interchange(&next, &back).unwrap(), gf);
        }

        #[test]
        fn linking_hypothesis_leaves_one_component(
            n in 4usize..8,
            seed in 0u64..500,
            walk in proptest::collection::vec(0usize..1000, 0..4),
        ) {
            let gf = random_state(n, seed, &walk);
            let part = gf.partition().clone();
            for c in all_interchanging(&gf, 8) {
                if !touched_components_stay_linked(&gf, &c) {
                    continue;
                }
                let next = apply_interchange(&gf, &c).unwrap();
                let after = next.partition();
                let mut pieces: Vec<usize> = (0..gf.host().v_count())
                    .filter(|&v| c.vertices().iter().any(|&x| part.v_comp[x] == part.v_comp[v]))
                    .map(|v| after.v_comp[v])
                    .filter(|&comp| after.nontrivial[comp])
                    .collect();
                pieces.sort_unstable();
                pieces.dedup();
                proptest::prop_assert!(pieces.len() <= 1);
            }
        }

        #[test]
        fn diminishing_cycles_diminish(
            n in 5usize..9,
            seed in 0u64..500,
            walk in proptest::collection::vec(0usize..1000, 1..4),
        ) {
            let gf = split_state(n, seed, &walk);
            proptest::prop_assume!(gf.nontrivial_count() >= 2);
            let c = find_diminishing_cycle(&gf, &SearchConfig::default()).unwrap();
            let c = c.expect("a diminishing cycle within the default length");
            proptest::prop_assert!(apply_interchange(&gf, &c).unwrap().nontrivial_count() < gf.nontrivial_count());
        }
    }
}
