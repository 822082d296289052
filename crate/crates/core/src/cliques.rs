//! Exact counting of complete subgraphs.
//!
//! Counting walks a pivoting clique tree: at every node a pivot `u` of
//! maximum degree into the candidate set is chosen, and only `u` and the
//! candidates outside `N(u)` are branched on. Along the `u` branch the
//! pivot is optional, so a leaf reached with `r` forced vertices and `p`
//! pivots stands for exactly `C(p, j)` cliques of order `r + j` for each
//! `j`. Every clique of the graph is represented by exactly one leaf, so the
//! tree is small even for dense graphs where plain enumeration is hopeless.

use crate::graph::{Bits, Graph, MAX_ORDER};

/// `C(n, k)` for `n <= 64`, exact.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) stays below 2^128 for n <= 128, and the running
        // product is always divisible by (i + 1).
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `counts[s]` is the number of `s`-vertex complete subgraphs, `s = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueProfile {
    pub counts: Vec<u128>,
}

impl CliqueProfile {
    pub fn get(&self, s: usize) -> u128 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    /// Largest `s` with a nonzero count.
    pub fn clique_number(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }
}

struct Counter<'a> {
    adj: &'a [u64],
    /// `Some(s)`: only order-`s` cliques are wanted and subtrees that cannot
    /// reach or would overshoot `s` are cut.
    target: Option<usize>,
    counts: [u128; MAX_ORDER + 1],
}

impl Counter<'_> {
    fn walk(&mut self, cand: u64, forced: usize, pivots: usize) {
        if let Some(s) = self.target {
            if forced > s || forced + pivots + (cand.count_ones() as usize) < s {
                return;
            }
        }
        if cand == 0 {
            match self.target {
                Some(s) => self.counts[s] += binomial(pivots, s - forced),
                None => {
                    for j in 0..=pivots {
                        self.counts[forced + j] += binomial(pivots, j);
                    }
                }
            }
            return;
        }
        let pivot = Bits(cand)
            .max_by_key(|&u| ((self.adj[u] & cand).count_ones(), std::cmp::Reverse(u)))
            .expect("nonempty candidate set");
        let mut rest = cand;
        self.walk(cand & self.adj[pivot], forced, pivots + 1);
        rest &= !(1 << pivot);
        for v in Bits(cand & !self.adj[pivot] & !(1 << pivot)) {
            self.walk(rest & self.adj[v], forced + 1, pivots);
            rest &= !(1 << v);
        }
    }
}

/// Number of `s`-vertex complete subgraphs of `g` (`K_s(G)`).
pub fn count_cliques(g: &Graph, s: usize) -> u128 {
    match s {
        0 => 1,
        1 => g.order() as u128,
        2 => g.edge_count() as u128,
        _ if s > g.order() => 0,
        _ => {
            let mut c = Counter {
                adj: g.rows(),
                target: Some(s),
                counts: [0; MAX_ORDER + 1],
            };
            c.walk(g.vertex_mask(), 0, 0);
            c.counts[s]
        }
    }
}

pub fn clique_profile(g: &Graph) -> CliqueProfile {
    let mut c = Counter {
        adj: g.rows(),
        target: None,
        counts: [0; MAX_ORDER + 1],
    };
    c.walk(g.vertex_mask(), 0, 0);
    CliqueProfile {
        counts: c.counts[..=g.order()].to_vec(),
    }
}

/// Triangles through `v`, i.e. edges inside `N(v)`.
pub fn triangles_through_vertex(g: &Graph, v: usize) -> Result<u128, crate::graph::GraphError> {
    if v >= g.order() {
        return Err(crate::graph::GraphError::VertexOutOfRange {
            vertex: v,
            order: g.order(),
        });
    }
    let nbhd = g.neighbors(v);
    let twice: u32 = Bits(nbhd).map(|u| (g.neighbors(u) & nbhd).count_ones()).sum();
    Ok(twice as u128 / 2)
}

/// Order of a largest clique (0 for the null graph).
pub fn max_clique_order(g: &Graph) -> usize {
    fn grow(adj: &[u64], cand: u64, size: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let mut rest = cand;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(adj, rest & adj[v], size + 1, best);
        }
    }
    let mut best = 0;
    grow(g.rows(), g.vertex_mask(), 0, &mut best);
    best
}

/// True when `g` contains `K_s`; stops at the first clique found.
pub fn has_clique(g: &Graph, s: usize) -> bool {
    fn find(adj: &[u64], cand: u64, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        let mut rest = cand;
        while rest.count_ones() as usize >= need {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if find(adj, rest & adj[v], need - 1) {
                return true;
            }
        }
        false
    }
    find(g.rows(), g.vertex_mask(), s)
}

/// Vertex sets of all `s`-cliques, each as a mask, in increasing numeric order.
pub fn list_cliques(g: &Graph, s: usize) -> Vec<u64> {
    fn list(adj: &[u64], cand: u64, need: usize, acc: u64, out: &mut Vec<u64>) {
        if need == 0 {
            out.push(acc);
            return;
        }
        let mut rest = cand;
        while rest.count_ones() as usize >= need {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            list(adj, rest & adj[v], need - 1, acc | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    list(g.rows(), g.vertex_mask(), s, 0, &mut out);
    out.sort_unstable();
    out
}
