//! Euler tours and Euler families of hypergraphs.
//!
//! An Euler family is a set of closed trails, pairwise anchor-disjoint, that
//! together traverse every edge exactly once; an Euler tour is a family of
//! one trail. Families are found through a perfect matching on a gadget graph
//! built from the incidence graph, then merged into a tour by exchanging
//! edges along interchanging cycles. Covering k-hypergraphs with `k > 3` are
//! reduced to the 3-uniform case by deleting vertices.
//!
//! ```
//! use eulergraph::{gen_sts, solve, verify_euler_object, Verdict};
//!
//! let fano = gen_sts(7).unwrap();
//! let result = solve(&fano, 3).unwrap();
//! assert_eq!(result.verdict, Verdict::Eulerian);
//! let tour = result.tour.unwrap();
//! assert!(verify_euler_object(&fano, &tour.as_family()).valid);
//! ```

pub mod error;
pub mod exec;
pub mod family;
pub mod genio;
pub mod hypergraph;
pub mod incidence;
pub mod interchange;
pub mod matching;
pub mod oracle;
pub mod solver;

#[cfg(test)]
mod testkit;

pub use error::{Error, Result};
pub use exec::Execution;
pub use family::{
    find_family_subgraph, subgraph_from_trails, trails_from_subgraph, FamilySubgraph,
};
pub use genio::format::{
    emit, emit_family, emit_tour, parse, parse_family, parse_tour, ParseError,
};
pub use genio::generators::{gen_complete, gen_random_covering, gen_sts, Lcg};
pub use hypergraph::{
    validate_covering, verify_euler_object, CoveringReport, EdgeId, EulerFamily, EulerTour,
    Hypergraph, VerifyReport, VertexId, Violation, Walk,
};
pub use incidence::{build_incidence, IncidenceGraph};
pub use interchange::{
    apply_interchange, find_diminishing_cycle, is_interchanging, merge_to_tour, InterchangeCycle,
    MergeConfig, MergeStats, SearchConfig, StuckReport,
};
pub use matching::max_matching;
pub use solver::{
    lift_tour, reduce_order, solve, solve_batch, solve_with, ReductionStep, SolveResult, Verdict,
};
