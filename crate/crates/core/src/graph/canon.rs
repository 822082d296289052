//! Canonical labelling by partition refinement and individualization.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, individualize each vertex of the first smallest
//! non-singleton cell in turn, recurse. Every leaf is a discrete partition,
//! i.e. a relabelling, and the canonical graph is the largest relabelled
//! adjacency matrix seen. Whenever two leaves produce the same matrix the
//! map between them is an automorphism, and the subtree containing the newer
//! leaf is an image of an already finished one, so the search jumps back to
//! the level where the two paths diverge.

use std::collections::HashMap;
use std::fmt;

use super::{graph6, Bits, Graph, MAX_ORDER};

/// Byte string identifying an isomorphism class: the order followed by the
/// packed upper triangle of the canonically relabelled graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0[0] as usize
    }

    /// The canonical representative itself.
    pub fn graph(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::empty(n).expect("stored order is valid");
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.0[1 + k / 8] >> (k % 8) & 1 == 1 {
                    g.set_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }

    fn from_canonical_graph(g: &Graph) -> Self {
        let n = g.order();
        let nbits = n * n.saturating_sub(1) / 2;
        let mut bytes = vec![0u8; 1 + nbits.div_ceil(8)];
        bytes[0] = n as u8;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if g.has_edge(i, j) {
                    bytes[1 + k / 8] |= 1 << (k % 8);
                }
                k += 1;
            }
        }
        CanonicalForm(bytes)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm(\"{}\")", graph6::to_graph6(&self.graph()))
    }
}

/// Refines the ordered partition `cells` in place to the coarsest equitable
/// partition below it. Cells are split where they stand and the fragments
/// are ordered by neighbour count, so the result is label-invariant.
fn refine(adj: &[u64], cells: &mut Vec<u64>) {
    let mut counts = [0u8; MAX_ORDER];
    loop {
        let mut changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = cells[w];
            let mut i = 0;
            while i < cells.len() {
                let cell = cells[i];
                if cell & (cell - 1) == 0 {
                    i += 1;
                    continue;
                }
                let mut lo = u8::MAX;
                let mut hi = 0u8;
                for v in Bits(cell) {
                    let c = (adj[v] & splitter).count_ones() as u8;
                    counts[v] = c;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo == hi {
                    i += 1;
                    continue;
                }
                let mut fragments: Vec<u64> = Vec::new();
                let mut level = lo;
                loop {
                    let mut frag = 0u64;
                    let mut next = u8::MAX;
                    for v in Bits(cell) {
                        let c = counts[v];
                        if c == level {
                            frag |= 1 << v;
                        } else if c > level && c < next {
                            next = c;
                        }
                    }
                    fragments.push(frag);
                    if next == u8::MAX {
                        break;
                    }
                    level = next;
                }
                let k = fragments.len();
                cells.splice(i..=i, fragments);
                i += k;
                changed = true;
            }
            w += 1;
        }
        if !changed {
            return;
        }
    }
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    seen: HashMap<Vec<u64>, Vec<usize>>,
    path: Vec<usize>,
}

impl Search<'_> {
    /// Explores the subtree below `cells`. Returns `Some(level)` when an
    /// automorphism shows everything down to `level` is already covered.
    fn explore(&mut self, cells: &[u64]) -> Option<usize> {
        let depth = self.path.len();
        if cells.len() == self.n {
            return self.leaf(cells);
        }
        let (target, size) = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.count_ones()))
            .filter(|&(_, s)| s > 1)
            .min_by_key(|&(i, s)| (s, i))
            .expect("partition is not discrete");
        debug_assert!(size > 1);
        for v in Bits(cells[target]) {
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cells[target] & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.adj, &mut child);
            self.path.push(v);
            let jump = self.explore(&child);
            self.path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u64]) -> Option<usize> {
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let cert = relabelled_rows(self.adj, &lab);
        if let Some(prev) = self.seen.get(&cert) {
            let diverge = prev
                .iter()
                .zip(&self.path)
                .position(|(a, b)| a != b)
                .expect("distinct leaves have distinct paths");
            return Some(diverge);
        }
        let better = match &self.best {
            None => true,
            Some((b, _)) => cert > *b,
        };
        if better {
            self.best = Some((cert.clone(), lab));
        }
        self.seen.insert(cert, self.path.clone());
        None
    }
}

fn relabelled_rows(adj: &[u64], lab: &[usize]) -> Vec<u64> {
    let mut pos = [0usize; MAX_ORDER];
    for (i, &v) in lab.iter().enumerate() {
        pos[v] = i;
    }
    lab.iter()
        .map(|&v| Bits(adj[v]).fold(0u64, |row, w| row | 1 << pos[w]))
        .collect()
}

/// Canonical ordering of the vertices: position `i` of the canonical graph is
/// vertex `lab[i]` of `g`.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.order();
    if n <= 1 {
        return (0..n).collect();
    }
    let adj = g.rows();
    let mut cells = vec![g.vertex_mask()];
    refine(adj, &mut cells);
    let mut search = Search {
        adj,
        n,
        best: None,
        seen: HashMap::new(),
        path: Vec::new(),
    };
    search.explore(&cells);
    search.best.expect("at least one leaf").1
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &Graph) -> Graph {
    let lab = canonical_labeling(g);
    let mut perm = vec![0usize; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        perm[v] = i;
    }
    g.permute(&perm)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    CanonicalForm::from_canonical_graph(&canonical_graph(g))
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.order() == h.order()
        && g.edge_count() == h.edge_count()
        && g.degree_sequence() == h.degree_sequence()
        && canonical_graph(g) == canonical_graph(h)
}
