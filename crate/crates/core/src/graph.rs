//! Explicit finite-depth spidernet graphs and closed-walk counting at the
//! origin, in exact integer arithmetic.
//!
//! Two counting routes are provided: iteration of the adjacency operator on
//! an explicit [`SpidernetGraph`], and a stratum-profile recursion that only
//! uses the degree counts `ω_+`, `ω_0`, `ω_−` and therefore works for
//! parameters no simple graph can realize.

use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::models::SpidernetParams;

/// Refuse to materialize graphs larger than this many vertices.
pub const MAX_VERTICES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("no simple graph realizes S({a},{b},{c}): stratum {stratum} has {size} vertices but needs in-stratum degree {flat}")]
    InfeasibleWiring {
        a: u32,
        b: u32,
        c: u32,
        stratum: u32,
        size: usize,
        flat: u32,
    },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("graph depth {depth} too small for walks of length {n_max} (need {needed})")]
    DepthTooSmall {
        depth: u32,
        n_max: usize,
        needed: u32,
    },
    #[error("graph would have more than {MAX_VERTICES} vertices")]
    TooLarge,
}

/// A spidernet truncated at stratum `depth`. Vertex 0 is the origin.
///
/// Vertices of the last stratum have no upward neighbours; every other
/// vertex satisfies the spidernet degree conditions exactly.
#[derive(Debug, Clone)]
pub struct SpidernetGraph {
    params: SpidernetParams,
    depth: u32,
    strata: Vec<Range<usize>>,
    adjacency: Vec<Vec<usize>>,
}

/// Minimum depth so that walks of length `n` from the origin never feel the
/// truncation: they cannot reach beyond stratum `⌈n/2⌉`.
pub fn required_depth(n_max: usize) -> u32 {
    (n_max.div_ceil(2) + 1) as u32
}

impl SpidernetGraph {
    /// Builds the graph out to stratum `depth`.
    ///
    /// Vertex `i` of `V_k` has children `c·i .. c·i + c − 1` in `V_{k+1}`.
    /// Inside a stratum of size `m` the vertices form a circulant: for flat
    /// degree `2t`, `i ~ i ± 1, …, i ± t (mod m)`; for `2t + 1` additionally
    /// `i ~ i + m/2`, which needs `m` even.
    pub fn build(params: SpidernetParams, depth: u32) -> Result<Self, GraphError> {
        if depth == 0 {
            return Err(GraphError::ZeroDepth);
        }
        let flat = params.flat_degree();
        let mut strata: Vec<Range<usize>> = Vec::with_capacity(depth as usize + 1);
        strata.push(0..1);
        let mut total = 1usize;
        for k in 1..=depth {
            let size = params
                .stratum_size(k)
                .to_usize()
                .filter(|&s| s <= MAX_VERTICES)
                .ok_or(GraphError::TooLarge)?;
            let infeasible =
                flat > 0 && ((flat as usize) >= size || (flat % 2 == 1 && size % 2 == 1));
            if infeasible {
                return Err(GraphError::InfeasibleWiring {
                    a: params.a(),
                    b: params.b(),
                    c: params.c(),
                    stratum: k,
                    size,
                    flat,
                });
            }
            if total + size > MAX_VERTICES {
                return Err(GraphError::TooLarge);
            }
            strata.push(total..total + size);
            total += size;
        }

        let mut adjacency = vec![Vec::new(); total];
        let connect = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize| {
            adj[u].push(v);
            adj[v].push(u);
        };
        for child in strata[1].clone() {
            connect(&mut adjacency, 0, child);
        }
        let c = params.c() as usize;
        for k in 1..depth as usize {
            let (lower, upper) = (strata[k].clone(), strata[k + 1].start);
            for (i, u) in lower.enumerate() {
                for j in 0..c {
                    connect(&mut adjacency, u, upper + c * i + j);
                }
            }
        }
        let half = (flat / 2) as usize;
        for range in &strata[1..] {
            let m = range.len();
            for i in 0..m {
                for step in 1..=half {
                    // each circulant edge once, from its lower endpoint
                    connect(
                        &mut adjacency,
                        range.start + i,
                        range.start + (i + step) % m,
                    );
                }
                if flat % 2 == 1 && i < m / 2 {
                    connect(&mut adjacency, range.start + i, range.start + i + m / 2);
                }
            }
        }
        Ok(Self {
            params,
            depth,
            strata,
            adjacency,
        })
    }

    pub fn params(&self) -> SpidernetParams {
        self.params
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn strata(&self) -> &[Range<usize>] {
        &self.strata
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn stratum_of(&self, v: usize) -> usize {
        self.strata
            .iter()
            .position(|r| r.contains(&v))
            .expect("vertex index in range")
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks symmetry, irreflexivity, simplicity and the `ω` counts of every
    /// vertex; returns a description of the first violation.
    pub fn audit(&self) -> Result<(), String> {
        for (u, ns) in self.adjacency.iter().enumerate() {
            let mut sorted = ns.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != ns.len() {
                return Err(format!("vertex {u} has a multi-edge"));
            }
            if ns.contains(&u) {
                return Err(format!("vertex {u} has a loop"));
            }
            if let Some(v) = ns.iter().find(|&&v| !self.adjacency[v].contains(&u)) {
                return Err(format!("edge {u}-{v} is not symmetric"));
            }
        }
        let stratum: Vec<usize> = {
            let mut s = vec![0; self.vertex_count()];
            for (k, r) in self.strata.iter().enumerate() {
                for v in r.clone() {
                    s[v] = k;
                }
            }
            s
        };
        let p = self.params;
        for (u, ns) in self.adjacency.iter().enumerate() {
            let k = stratum[u];
            let count = |d: isize| {
                ns.iter()
                    .filter(|&&v| stratum[v] as isize - k as isize == d)
                    .count()
            };
            let (down, flat, up) = (count(-1), count(0), count(1));
            if ns.len() != down + flat + up {
                return Err(format!("vertex {u} has an edge skipping a stratum"));
            }
            let expected = if k == 0 {
                (0, 0, p.a() as usize)
            } else if k < self.depth as usize {
                (1, p.flat_degree() as usize, p.c() as usize)
            } else {
                (1, p.flat_degree() as usize, 0)
            };
            if (down, flat, up) != expected {
                return Err(format!(
                    "vertex {u} in stratum {k}: (ω−, ω0, ω+) = {:?}, expected {:?}",
                    (down, flat, up),
                    expected
                ));
            }
        }
        Ok(())
    }

    /// Closed walks at the origin of length `0..=n_max`, by iterating the
    /// adjacency operator on the indicator vector of the origin.
    pub fn closed_walk_counts(&self, n_max: usize) -> Result<Vec<BigUint>, GraphError> {
        let needed = required_depth(n_max);
        if self.depth < needed {
            return Err(GraphError::DepthTooSmall {
                depth: self.depth,
                n_max,
                needed,
            });
        }
        let mut v = vec![BigUint::zero(); self.vertex_count()];
        v[0] = BigUint::from(1u32);
        let mut counts = vec![v[0].clone()];
        for _ in 0..n_max {
            let mut next = vec![BigUint::zero(); v.len()];
            for (u, ns) in self.adjacency.iter().enumerate() {
                if v[u].is_zero() {
                    continue;
                }
                for &w in ns {
                    next[w] += &v[u];
                }
            }
            v = next;
            counts.push(v[0].clone());
        }
        Ok(counts)
    }
}

/// Closed walks at the origin via the stratum profile: a step up from the
/// origin has `a` choices, up elsewhere `c`, within a stratum `b − 1 − c`,
/// down exactly one.
pub fn profile_walk_counts(params: SpidernetParams, n_max: usize) -> Vec<BigUint> {
    let levels = n_max / 2 + 2;
    let a = BigUint::from(params.a());
    let c = BigUint::from(params.c());
    let flat = BigUint::from(params.flat_degree());
    let mut v = vec![BigUint::zero(); levels];
    v[0] = BigUint::from(1u32);
    let mut counts = vec![v[0].clone()];
    for _ in 0..n_max {
        let mut next = vec![BigUint::zero(); levels];
        for k in 0..levels {
            if v[k].is_zero() {
                continue;
            }
            if k + 1 < levels {
                let up = if k == 0 { &a } else { &c };
                next[k + 1] += &v[k] * up;
            }
            if k > 0 {
                next[k] += &v[k] * &flat;
                next[k - 1] += &v[k];
            }
        }
        v = next;
        counts.push(v[0].clone());
    }
    counts
}
