//! Covering hypergraphs for tests and benchmarks. Vertices are labelled by
//! their decimal ids.
//!
//! Random instances use a 64-bit linear congruential generator so corpora can
//! be regenerated anywhere: `state = state * 6364136223846793005 +
//! 1442695040888963407 (mod 2^64)`, seeded by `state = seed` followed by one
//! step; each draw steps once and takes the high 32 bits, and a draw below
//! `b` is `(x * b) >> 32`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    const MUL: u64 = 6364136223846793005;
    const INC: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        let mut rng = Self { state: seed };
        rng.step();
        rng
    }

    fn step(&mut self) {
        self.state = self.state.wrapping_mul(Self::MUL).wrapping_add(Self::INC);
    }

    pub fn next_u32(&mut self) -> u32 {
        self.step();
        (self.state >> 32) as u32
    }

    /// Uniform-ish draw from `0..bound`; `bound` must fit in 32 bits.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(
            bound > 0 && bound <= u32::MAX as usize,
            "bound out of range"
        );
        ((self.next_u32() as u64 * bound as u64) >> 32) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 3 || n <= k {
        return Err(Error::InvalidParameters(format!(
            "need n > k >= 3, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// `r`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, r: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<VertexId> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < n - r + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Every `k`-subset of `n` vertices, lexicographically.
pub fn gen_complete(n: usize, k: usize) -> Result<Hypergraph> {
    check_nk(n, k)?;
    Hypergraph::with_numbered_vertices(n, subsets(n, k))
}

/// A Steiner triple system: Bose's construction for `n = 3 (mod 6)`,
/// Skolem's for `n = 1 (mod 6)`.
pub fn gen_sts(n: usize) -> Result<Hypergraph> {
    if n < 7 || (n % 6 != 1 && n % 6 != 3) {
        return Err(Error::InadmissibleOrder(n));
    }
    let triples = if n % 6 == 3 {
        bose(n / 6)
    } else {
        skolem(n / 6)
    };
    Hypergraph::with_numbered_vertices(n, triples)
}

/// Points `(x, i)` with `x` in `Z_{2t+1}` and `i` in `Z_3`, numbered `i(2t+1) + x`.
fn bose(t: usize) -> Vec<Vec<VertexId>> {
    let q = 2 * t + 1;
    let p = |x: usize, i: usize| (i % 3) * q + x;
    let op = |x: usize, y: usize| (x + y) * (t + 1) % q;
    let mut out = Vec::new();
    for x in 0..q {
        out.push(vec![p(x, 0), p(x, 1), p(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..q {
            for y in x + 1..q {
                out.push(vec![p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Points `(x, i)` with `x` in `Z_{2t}`, numbered `i(2t) + x`, and a point at
/// infinity numbered `6t`.
fn skolem(t: usize) -> Vec<Vec<VertexId>> {
    let q = 2 * t;
    let inf = 3 * q;
    let p = |x: usize, i: usize| (i % 3) * q + x;
    let op = |x: usize, y: usize| {
        let z = (x + y) % q;
        if z % 2 == 0 {
            z / 2
        } else {
            (z - 1) / 2 + t
        }
    };
    let mut out = Vec::new();
    for x in 0..t {
        out.push(vec![p(x, 0), p(x, 1), p(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..t {
            out.push(vec![inf, p(x + t, i), p(x, i + 1)]);
        }
    }
    for i in 0..3 {
        for x in 0..q {
            for y in x + 1..q {
                out.push(vec![p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Greedy random cover: walks the `(k-1)`-subsets in shuffled order and, for
/// each one not yet inside an edge, adds it together with a random extra vertex.
pub fn gen_random_covering(n: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    check_nk(n, k)?;
    let mut rng = Lcg::new(seed);
    let mut order = subsets(n, k - 1);
    rng.shuffle(&mut order);
    let mut covered: HashSet<Vec<VertexId>> = HashSet::new();
    let mut edges = Vec::new();
    for s in order {
        if covered.contains(&s) {
            continue;
        }
        let outside: Vec<VertexId> = (0..n).filter(|v| !s.contains(v)).collect();
        let mut edge = s;
        edge.push(outside[rng.below(outside.len())]);
        edge.sort_unstable();
        for skip in 0..k {
            let mut face = edge.clone();
            face.remove(skip);
            covered.insert(face);
        }
        edges.push(edge);
    }
    Hypergraph::with_numbered_vertices(n, edges)
}
