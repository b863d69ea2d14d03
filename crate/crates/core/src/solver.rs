//! End-to-end solving: reduce a covering k-hypergraph to a covering
//! 3-hypergraph by deleting vertices, find and merge an Euler family there,
//! and lift the tour back up.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::family::{find_family_subgraph, trails_from_subgraph};
use crate::hypergraph::{
    validate_covering, verify_euler_object, EdgeId, EulerFamily, EulerTour, Hypergraph,
    VerifyReport, VertexId, Walk,
};
use crate::incidence::build_incidence;
use crate::interchange::{merge_subgraph, merge_to_tour_with, MergeConfig, MergeStats};

/// How a reduced hypergraph relates to the one it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    /// Deleted vertex, as an id of the larger hypergraph.
    pub deleted_vertex: VertexId,
    /// Original edge id of every reduced edge.
    pub edge_map: Vec<EdgeId>,
    /// For each original edge that avoided the deleted vertex, the vertex
    /// dropped from it instead.
    pub dropped_vertex_per_edge: Vec<Option<VertexId>>,
    /// Original vertex id of every reduced vertex.
    pub vertex_map: Vec<VertexId>,
}

/// Deletes `v` from a covering (k+1)-hypergraph, `k >= 3`. Edges through `v`
/// lose `v`; every other edge loses its lowest-id vertex. The result is a
/// covering k-hypergraph with the same number of edges.
pub fn reduce_order(h: &Hypergraph, v: VertexId) -> Result<(Hypergraph, ReductionStep)> {
    if v >= h.order() {
        return Err(Error::UnknownVertex(v));
    }
    let big = h.uniformity().ok_or(Error::NotUniform { expected: 4 })?;
    if big < 4 {
        return Err(Error::UniformityTooSmall(big.saturating_sub(1)));
    }
    if !validate_covering(h, big)?.is_covering {
        return Err(Error::NotCovering { k: big });
    }
    let vertex_map: Vec<VertexId> = (0..h.order()).filter(|&u| u != v).collect();
    let new_id = |u: VertexId| if u < v { u } else { u - 1 };
    let mut edges = Vec::with_capacity(h.size());
    let mut dropped = Vec::with_capacity(h.size());
    for edge in h.edges() {
        let drop = if edge.contains(&v) {
            dropped.push(None);
            v
        } else {
            dropped.push(Some(edge[0]));
            edge[0]
        };
        edges.push(
            edge.iter()
                .filter(|&&u| u != drop)
                .map(|&u| new_id(u))
                .collect(),
        );
    }
    let labels = vertex_map.iter().map(|&u| h.label(u).to_string());
    let reduced = Hypergraph::from_ids(labels, edges)?;
    if !validate_covering(&reduced, big - 1)?.is_covering {
        return Err(Error::CertificateViolation(format!(
            "deleting a vertex left a hypergraph that is not a covering {}-hypergraph",
            big - 1
        )));
    }
    let step = ReductionStep {
        deleted_vertex: v,
        edge_map: (0..h.size()).collect(),
        dropped_vertex_per_edge: dropped,
        vertex_map,
    };
    Ok((reduced, step))
}

/// Maps a tour of the reduced hypergraph back onto `h`.
pub fn lift_tour(t: &EulerTour, step: &ReductionStep, h: &Hypergraph) -> Result<EulerTour> {
    let walk = t.walk();
    let anchors = walk
        .anchors()
        .iter()
        .map(|&a| {
            step.vertex_map
                .get(a)
                .copied()
                .ok_or(Error::UnknownVertex(a))
        })
        .collect::<Result<Vec<_>>>()?;
    let edges =
        walk.edges()
            .iter()
            .map(|&e| {
                step.edge_map.get(e).copied().ok_or_else(|| {
                    Error::CertificateViolation(format!("edge e{} out of range", e + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
    let lifted = EulerTour::new(Walk::new(anchors, edges));
    let report = verify_euler_object(h, &lifted.as_family());
    if !report.valid {
        let reasons: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Error::CertificateViolation(format!(
            "lifted tour does not verify: {}",
            reasons.join("; ")
        )));
    }
    Ok(lifted)
}

/// Every layer from a covering k-hypergraph down to a covering 3-hypergraph,
/// deleting the lowest-id vertex each time.
pub fn reduce_to_three(h: &Hypergraph) -> Result<Vec<(Hypergraph, ReductionStep)>> {
    let mut layers: Vec<(Hypergraph, ReductionStep)> = Vec::new();
    loop {
        let cur = layers.last().map_or(h, |(g, _)| g);
        match cur.uniformity() {
            Some(k) if k > 3 => {
                let layer = reduce_order(cur, 0)?;
                layers.push(layer);
            }
            _ => return Ok(layers),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// A verified Euler tour was found.
    Eulerian,
    /// An Euler family exists but no tour can: the edges are not connected.
    QuasiEulerianOnly,
    /// No Euler family exists, hence no tour either.
    Neither,
    /// An Euler family exists; merging it into a tour stalled. Nothing is
    /// claimed about tours.
    NotCoveringBestEffort,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Eulerian => "eulerian",
            Verdict::QuasiEulerianOnly => "quasi-eulerian-only",
            Verdict::Neither => "neither",
            Verdict::NotCoveringBestEffort => "not-covering-best-effort",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub verdict: Verdict,
    pub tour: Option<EulerTour>,
    pub family: Option<EulerFamily>,
    /// Verification of the tour if there is one, else of the family, else of
    /// the empty family.
    pub certificate: VerifyReport,
    pub reductions: usize,
    pub stats: MergeStats,
}

/// Decides what `h` admits, treating it as a covering k-hypergraph when it is
/// one and falling back to best effort otherwise.
pub fn solve(h: &Hypergraph, k: usize) -> Result<SolveResult> {
    solve_with(h, k, &MergeConfig::default())
}

pub fn solve_with(h: &Hypergraph, k: usize, config: &MergeConfig) -> Result<SolveResult> {
    if let Some(p) = config.pivot {
        if p >= h.order() {
            return Err(Error::UnknownVertex(p));
        }
    }
    let covering = k >= 3 && validate_covering(h, k)?.is_covering;
    if h.is_empty() {
        let family = EulerFamily::default();
        return Ok(SolveResult {
            verdict: Verdict::Eulerian,
            tour: None,
            certificate: verify_euler_object(h, &family),
            family: Some(family),
            reductions: 0,
            stats: MergeStats::default(),
        });
    }
    if h.size() == 1 {
        return Ok(neither(h));
    }
    if covering {
        solve_covering(h, config)
    } else {
        solve_best_effort(h, config)
    }
}

fn neither(h: &Hypergraph) -> SolveResult {
    SolveResult {
        verdict: Verdict::Neither,
        tour: None,
        family: None,
        certificate: verify_euler_object(h, &EulerFamily::default()),
        reductions: 0,
        stats: MergeStats::default(),
    }
}

fn solve_covering(h: &Hypergraph, config: &MergeConfig) -> Result<SolveResult> {
    let layers = reduce_to_three(h)?;
    let base = layers.last().map_or(h, |(g, _)| g);
    // carry the pivot down; a deleted pivot falls back to the default choice
    let mut pivot = config.pivot;
    for (_, step) in &layers {
        pivot = pivot.and_then(|p| step.vertex_map.iter().position(|&u| u == p));
    }
    let config = MergeConfig {
        pivot,
        ..config.clone()
    };
    let host = Arc::new(build_incidence(base));
    let gf = find_family_subgraph(&host).ok_or_else(|| {
        Error::CertificateViolation("a covering 3-hypergraph without an Euler family".into())
    })?;
    let family = trails_from_subgraph(&gf)?;
    let outcome = merge_to_tour_with(base, &family, &config)?;
    let mut tour = outcome.tour;
    for (i, (_, step)) in layers.iter().enumerate().rev() {
        let target = if i == 0 { h } else { &layers[i - 1].0 };
        tour = lift_tour(&tour, step, target)?;
    }
    let certificate = verify_euler_object(h, &tour.as_family());
    if !certificate.valid {
        return Err(Error::CertificateViolation(
            "final tour does not verify".into(),
        ));
    }
    Ok(SolveResult {
        verdict: Verdict::Eulerian,
        family: Some(tour.as_family()),
        tour: Some(tour),
        certificate,
        reductions: layers.len(),
        stats: outcome.stats,
    })
}

fn solve_best_effort(h: &Hypergraph, config: &MergeConfig) -> Result<SolveResult> {
    let host = Arc::new(build_incidence(h));
    let Some(gf) = find_family_subgraph(&host) else {
        return Ok(neither(h));
    };
    let family = trails_from_subgraph(&gf)?;
    let stalled = |family: EulerFamily, verdict: Verdict, stats: MergeStats| SolveResult {
        verdict,
        tour: None,
        certificate: verify_euler_object(h, &family),
        family: Some(family),
        reductions: 0,
        stats,
    };
    if h.edge_components().len() > 1 {
        return Ok(stalled(
            family,
            Verdict::QuasiEulerianOnly,
            MergeStats::default(),
        ));
    }
    if family.is_tour() {
        let tour = EulerTour::new(family.components[0].clone());
        return Ok(SolveResult {
            verdict: Verdict::Eulerian,
            certificate: verify_euler_object(h, &family),
            family: Some(family),
            tour: Some(tour),
            reductions: 0,
            stats: MergeStats::default(),
        });
    }
    match merge_subgraph(gf, config, false) {
        Ok((merged, stats)) => {
            let merged = trails_from_subgraph(&merged)?;
            let tour = EulerTour::new(merged.components[0].clone());
            let certificate = verify_euler_object(h, &tour.as_family());
            if !certificate.valid {
                return Err(Error::CertificateViolation(
                    "merged tour does not verify".into(),
                ));
            }
            Ok(SolveResult {
                verdict: Verdict::Eulerian,
                tour: Some(tour),
                family: Some(merged),
                certificate,
                reductions: 0,
                stats,
            })
        }
        Err(Error::BudgetExhausted { report, .. }) => Ok(stalled(
            family,
            Verdict::NotCoveringBestEffort,
            report.stats,
        )),
        Err(e) => Err(e),
    }
}

/// Solves independent instances, spreading them over threads when `exec`
/// asks for it. Output order follows input order.
pub fn solve_batch(
    items: &[Hypergraph],
    k: usize,
    config: &MergeConfig,
    exec: Execution,
) -> Vec<Result<SolveResult>> {
    exec.map(items, |h| solve_with(h, k, config))
}
