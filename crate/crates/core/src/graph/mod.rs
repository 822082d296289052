//! Small simple undirected graphs on at most 64 vertices.
//!
//! Every row of the adjacency matrix is a single `u64`, so neighbourhood
//! intersections, degree queries and induced subgraphs are word operations.
//! Graphs are plain `Copy` values: every "mutator" returns a new graph.

mod canon;
mod graph6;

pub use canon::{canonical_form, canonical_graph, canonical_labeling, is_isomorphic, CanonicalForm};
pub use graph6::{from_graph6, to_graph6, Graph6Error};

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_ORDER: usize = 64;

/// Vertex set of a graph or subgraph, one bit per vertex.
pub type VertexMask = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("order {0} exceeds the {MAX_ORDER}-vertex limit")]
    OrderTooLarge(usize),
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency rows are not a valid simple graph: {0}")]
    InvalidRows(&'static str),
}

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a mask in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Bits {}

/// A simple undirected graph with bit-row adjacency.
///
/// Invariants: rows are symmetric, the diagonal is clear and no bit at a
/// position `>= order` is set. Rows past `order` are all zero, so the derived
/// `Eq`/`Hash` compare graphs vertex for vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    order: u8,
    adj: [u64; MAX_ORDER],
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_ORDER {
            return Err(GraphError::OrderTooLarge(n));
        }
        Ok(Graph {
            order: n as u8,
            adj: [0; MAX_ORDER],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows, validating every invariant.
    pub fn from_rows(rows: &[u64]) -> Result<Self, GraphError> {
        let n = rows.len();
        if n > MAX_ORDER {
            return Err(GraphError::OrderTooLarge(n));
        }
        let valid = low_bits(n);
        let mut g = Self::empty(n)?;
        for (i, &row) in rows.iter().enumerate() {
            if row & !valid != 0 {
                return Err(GraphError::InvalidRows("bit beyond the vertex range"));
            }
            if row >> i & 1 == 1 {
                return Err(GraphError::SelfLoop(i));
            }
            g.adj[i] = row;
        }
        for i in 0..n {
            for j in Bits(rows[i]) {
                if rows[j] >> i & 1 == 0 {
                    return Err(GraphError::InvalidRows("adjacency is not symmetric"));
                }
            }
        }
        Ok(g)
    }

    /// Rows are trusted; callers inside the crate uphold the invariants.
    pub(crate) fn from_rows_unchecked(rows: &[u64]) -> Self {
        let mut adj = [0u64; MAX_ORDER];
        adj[..rows.len()].copy_from_slice(rows);
        let g = Graph {
            order: rows.len() as u8,
            adj,
        };
        debug_assert!(Graph::from_rows(g.rows()).is_ok());
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Adjacency rows for vertices `0..order`.
    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj[..self.order as usize]
    }

    #[inline]
    pub fn vertex_mask(&self) -> VertexMask {
        low_bits(self.order())
    }

    /// Neighbourhood of `v` as a bit mask. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexMask {
        assert!(v < self.order(), "vertex {v} out of range");
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && v < self.order() && self.adj[u] >> v & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows()
            .iter()
            .enumerate()
            .flat_map(|(u, &row)| Bits(row & !low_bits(u + 1)).map(move |v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.order()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = *self;
        g.set_edge(u, v);
        Ok(g)
    }

    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = *self;
        g.adj[u] &= !(1 << v);
        g.adj[v] &= !(1 << u);
        Ok(g)
    }

    /// `G \ v`: the induced subgraph on the remaining vertices, which keep
    /// their relative order.
    pub fn delete_vertex(&self, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(v)?;
        Ok(self.induced(self.vertex_mask() & !(1 << v)))
    }

    /// Induced subgraph on `keep`, relabelled `0..|keep|` in index order.
    pub fn induced(&self, keep: VertexMask) -> Self {
        let keep = keep & self.vertex_mask();
        let mut out = Graph {
            order: keep.count_ones() as u8,
            adj: [0; MAX_ORDER],
        };
        for (new_u, u) in Bits(keep).enumerate() {
            out.adj[new_u] = compress(self.adj[u] & keep, keep);
        }
        out
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of
    /// `0..order`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order(), "permutation length mismatch");
        let mut out = Graph {
            order: self.order,
            adj: [0; MAX_ORDER],
        };
        for (u, &pu) in perm.iter().enumerate() {
            let mut row = 0u64;
            for w in Bits(self.adj[u]) {
                row |= 1 << perm[w];
            }
            out.adj[pu] = row;
        }
        out
    }

    pub fn complement(&self) -> Self {
        let all = self.vertex_mask();
        let mut out = *self;
        for v in 0..self.order() {
            out.adj[v] = all & !self.adj[v] & !(1 << v);
        }
        out
    }

    /// Mask of vertices of degree zero.
    pub fn isolated_vertices(&self) -> VertexMask {
        Bits(self.vertex_mask())
            .filter(|&v| self.adj[v] == 0)
            .fold(0, |m, v| m | 1 << v)
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.order() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            })
        }
    }
}

/// Packs the bits of `bits` that lie in `keep` into the low positions.
#[inline]
fn compress(bits: u64, keep: u64) -> u64 {
    let mut out = 0u64;
    for (i, v) in Bits(keep).enumerate() {
        out |= (bits >> v & 1) << i;
    }
    out
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} \"{}\")", self.order(), to_graph6(self))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_graph6(self))
    }
}
