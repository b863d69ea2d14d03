//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use eulergraph::{build_incidence, FamilySubgraph, Hypergraph, Lcg, Walk};

/// A random interchanging cycle of `gf` grown by a random walk, if one closes
/// within a few attempts.
pub fn random_interchanging_cycle(gf: &FamilySubgraph, rng: &mut Lcg) -> Option<Walk> {
    let host = gf.host();
    let n = host.v_count();
    for _ in 0..50 {
        let start = rng.below(n);
        let mut anchors = vec![start];
        let mut edges: Vec<usize> = Vec::new();
        for _ in 0..2 * host.e_count() {
            let x = *anchors.last().unwrap();
            // steps that keep the walk interchanging
            let mut moves = Vec::new();
            for &e in host.v_neighbors(x) {
                if edges.contains(&e) {
                    continue;
                }
                for &y in host.e_neighbors(e) {
                    if y != x && gf.contains(x, e) != gf.contains(y, e) {
                        moves.push((e, y));
                    }
                }
            }
            let closing: Vec<&(usize, usize)> =
                moves.iter().filter(|&&(_, y)| y == start).collect();
            if anchors.len() >= 2 && !closing.is_empty() {
                let &(e, _) = closing[rng.below(closing.len())];
                edges.push(e);
                return Some(Walk::closed(anchors, edges));
            }
            moves.retain(|&(_, y)| !anchors.contains(&y));
            if moves.is_empty() {
                break;
            }
            let (e, y) = moves[rng.below(moves.len())];
            edges.push(e);
            anchors.push(y);
        }
    }
    None
}

pub fn invariants_hold(gf: &FamilySubgraph) -> bool {
    let host = gf.host();
    let mut degree = vec![0usize; host.v_count()];
    for (e, p) in gf.pairs().iter().enumerate() {
        if p[0] == p[1] || !host.is_incident(p[0], e) || !host.is_incident(p[1], e) {
            return false;
        }
        degree[p[0]] += 1;
        degree[p[1]] += 1;
    }
    degree.iter().all(|d| d % 2 == 0)
}

/// Applies up to `rounds` random interchanges to `gf`.
pub fn scramble(mut gf: FamilySubgraph, rng: &mut Lcg, rounds: usize) -> FamilySubgraph {
    for _ in 0..rounds {
        let Some(walk) = random_interchanging_cycle(&gf, rng) else {
            break;
        };
        let c = eulergraph::InterchangeCycle::new(&gf, &walk).unwrap();
        gf = eulergraph::apply_interchange(&gf, &c).unwrap();
    }
    gf
}

/// Groups of 2 or 3 vertices, each carrying its own closed trail, padded with
/// doubled edges inside groups until every pair of vertices is covered.
pub fn grouped_family(rng: &mut Lcg, count: usize) -> (Hypergraph, FamilySubgraph) {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut n = 0;
    for _ in 0..count {
        let size = 2 + rng.below(2);
        groups.push((n..n + size).collect());
        n += size;
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut pairs: Vec<[usize; 2]> = Vec::new();
    let outside = |g: &[usize], rng: &mut Lcg| loop {
        let r = rng.below(n);
        if !g.contains(&r) {
            return r;
        }
    };
    for g in &groups {
        if g.len() == 2 {
            for _ in 0..2 {
                edges.push(vec![g[0], g[1], outside(g, rng)]);
                pairs.push([g[0], g[1]]);
            }
        } else {
            for i in 0..3 {
                let (a, b) = (g[i], g[(i + 1) % 3]);
                edges.push(vec![a, b, outside(g, rng)]);
                pairs.push([a.min(b), a.max(b)]);
            }
        }
    }
    let group_of = |v: usize| groups.iter().position(|g| g.contains(&v)).unwrap();
    for p in 0..n {
        for q in p + 1..n {
            if edges.iter().any(|e| e.contains(&p) && e.contains(&q)) {
                continue;
            }
            let mate = *groups[group_of(p)].iter().find(|&&x| x != p).unwrap();
            for _ in 0..2 {
                edges.push(vec![p, mate, q]);
                pairs.push([p.min(mate), p.max(mate)]);
            }
        }
    }
    let h = Hypergraph::with_numbered_vertices(n, edges).unwrap();
    let host = Arc::new(build_incidence(&h));
    let selected = pairs
        .iter()
        .enumerate()
        .flat_map(|(e, p)| [(p[0], e), (p[1], e)]);
    let gf = FamilySubgraph::from_incidences(host, selected).unwrap();
    (h, gf)
}
