//! Containment of `kF`: `k` pairwise vertex-disjoint, not necessarily
//! induced copies of a pattern graph `F`.
//!
//! Single copies are found by backtracking over an embedding plan that
//! places pattern vertices in order of connectivity to the already placed
//! ones. For `k >= 2` the host is first reduced to its copy supports (vertex
//! sets of size `|F|` spanning a copy of `F`), listed in increasing mask
//! order, and a packing of `k` disjoint supports is searched for; the first
//! packing found is the lexicographically least one.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cliques;
use crate::graph::{from_graph6, to_graph6, Bits, Graph, VertexMask};

/// Largest pattern order accepted.
pub const MAX_PATTERN_ORDER: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("pattern order must be between 1 and {MAX_PATTERN_ORDER}, got {0}")]
    BadOrder(usize),
    #[error("at position {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Structural shape of the base graph, used to pick fast paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    General,
}

fn classify(g: &Graph) -> Shape {
    let n = g.order();
    let e = g.edge_count();
    if e == n * (n - 1) / 2 {
        return Shape::Complete(n);
    }
    let connected = {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let next = Bits(frontier).fold(0, |m, v| m | g.neighbors(v)) & !seen;
            seen |= next;
            frontier = next;
        }
        seen == g.vertex_mask()
    };
    let degrees = g.degree_sequence();
    if connected && n >= 3 && e == n && degrees.iter().all(|&d| d == 2) {
        Shape::Cycle(n)
    } else if connected && e + 1 == n && degrees.iter().all(|&d| d <= 2) {
        Shape::Path(n)
    } else {
        Shape::General
    }
}

/// Vertex order and back-edges used to embed a pattern one vertex at a time.
#[derive(Clone, Debug)]
struct EmbeddingPlan {
    /// `order[t]` is the pattern vertex placed at step `t`.
    order: Vec<usize>,
    /// Steps `< t` whose vertices are adjacent to `order[t]`.
    back: Vec<Vec<usize>>,
    degree: Vec<u32>,
}

impl EmbeddingPlan {
    fn new(f: &Graph) -> Self {
        let m = f.order();
        let mut placed = 0u64;
        let mut order = Vec::with_capacity(m);
        while order.len() < m {
            let next = Bits(f.vertex_mask() & !placed)
                .max_by_key(|&v| {
                    (
                        (f.neighbors(v) & placed).count_ones(),
                        f.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("unplaced vertex");
            placed |= 1 << next;
            order.push(next);
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(t, &v)| (0..t).filter(|&p| f.has_edge(v, order[p])).collect())
            .collect();
        let degree = order.iter().map(|&v| f.degree(v) as u32).collect();
        EmbeddingPlan { order, back, degree }
    }

    /// Finds an embedding into `host` using only vertices in `allowed`.
    fn embed(&self, host: &Graph, allowed: VertexMask) -> Option<Vec<usize>> {
        let mut images = vec![0usize; self.order.len()];
        if self.extend(host.rows(), allowed, 0, 0, &mut images) {
            let mut map = vec![0usize; self.order.len()];
            for (t, &v) in self.order.iter().enumerate() {
                map[v] = images[t];
            }
            Some(map)
        } else {
            None
        }
    }

    fn extend(&self, adj: &[u64], allowed: u64, t: usize, used: u64, images: &mut [usize]) -> bool {
        if t == self.order.len() {
            return true;
        }
        let mut cand = allowed & !used;
        for &p in &self.back[t] {
            cand &= adj[images[p]];
        }
        let need = self.degree[t];
        for v in Bits(cand) {
            if (adj[v] & allowed).count_ones() < need {
                continue;
            }
            images[t] = v;
            if self.extend(adj, allowed, t + 1, used | 1 << v, images) {
                return true;
            }
        }
        false
    }
}

/// `k` vertex-disjoint copies of a base graph `F`.
#[derive(Clone, Debug)]
pub struct ForbiddenPattern {
    base: Graph,
    multiplicity: usize,
    shape: Shape,
    plan: EmbeddingPlan,
}

impl PartialEq for ForbiddenPattern {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.multiplicity == other.multiplicity
    }
}

impl Eq for ForbiddenPattern {}

impl ForbiddenPattern {
    pub fn new(base: Graph, multiplicity: usize) -> Result<Self, PatternError> {
        if multiplicity == 0 {
            return Err(PatternError::ZeroMultiplicity);
        }
        if base.order() == 0 || base.order() > MAX_PATTERN_ORDER {
            return Err(PatternError::BadOrder(base.order()));
        }
        Ok(ForbiddenPattern {
            base,
            multiplicity,
            shape: classify(&base),
            plan: EmbeddingPlan::new(&base),
        })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Vertices needed to host the whole pattern: `k * |V(F)|`.
    pub fn total_order(&self) -> usize {
        self.multiplicity * self.base.order()
    }

    /// The pattern as one graph `kF` (vertices of copy `i` are
    /// `i*|F| .. (i+1)*|F|`), if it fits in 64 vertices.
    pub fn as_graph(&self) -> Option<Graph> {
        let m = self.base.order();
        if self.total_order() > crate::graph::MAX_ORDER {
            return None;
        }
        let mut g = Graph::empty(self.total_order()).ok()?;
        for c in 0..self.multiplicity {
            for (u, v) in self.base.edges() {
                g.set_edge(c * m + u, c * m + v);
            }
        }
        Some(g)
    }

    /// Vertex sets of copies of the base graph, in increasing mask order.
    pub fn supports(&self, host: &Graph) -> Vec<VertexMask> {
        let m = self.base.order();
        if m > host.order() {
            return Vec::new();
        }
        if let Shape::Complete(r) = self.shape {
            return cliques::list_cliques(host, r);
        }
        let min_deg = (0..m).map(|v| self.base.degree(v)).min().unwrap_or(0);
        let f_edges = self.base.edge_count() as u32;
        let eligible: Vec<usize> = Bits(host.vertex_mask())
            .filter(|&v| host.degree(v) >= min_deg)
            .collect();
        let mut out = Vec::new();
        if eligible.len() < m {
            return out;
        }
        // Gosper's hack walks m-subsets of the eligible list in increasing
        // order; the index-to-vertex map is monotone so masks stay sorted.
        let mut sub: u64 = (1u64 << m) - 1;
        let limit = eligible.len();
        while limit == 64 || sub < 1u64 << limit {
            let mask = Bits(sub).fold(0u64, |acc, i| acc | 1 << eligible[i]);
            let ok_degrees = Bits(mask).all(|v| (host.neighbors(v) & mask).count_ones() as usize >= min_deg);
            if ok_degrees {
                let edges: u32 = Bits(mask).map(|v| (host.neighbors(v) & mask).count_ones()).sum::<u32>() / 2;
                if edges >= f_edges && self.plan.embed(host, mask).is_some() {
                    out.push(mask);
                }
            }
            if sub == 0 {
                break;
            }
            let c = sub & sub.wrapping_neg();
            let r = sub.wrapping_add(c);
            if r == 0 {
                break;
            }
            sub = (((r ^ sub) >> 2) / c) | r;
        }
        out
    }
}

impl fmt::Display for ForbiddenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity != 1 {
            write!(f, "{}", self.multiplicity)?;
        }
        let canonical_labelled = |g: Graph| g == self.base;
        match self.shape {
            Shape::Complete(r) => write!(f, "K{r}"),
            Shape::Cycle(l) if canonical_labelled(crate::constructions::cycle(l).unwrap()) => write!(f, "C{l}"),
            Shape::Path(l) if canonical_labelled(crate::constructions::path(l).unwrap()) => write!(f, "P{l}"),
            _ => write!(f, "g6:{}", to_graph6(&self.base)),
        }
    }
}

/// Parses the pattern micro-grammar: an optional decimal multiplicity
/// (optionally followed by `*`), then `K<d>`, `C<d>`, `P<d>` or
/// `g6:<graph6>`. Examples: `2C5`, `3K4`, `K3`, `2P4`, `2g6:Dhc`, `2*g6:Dhc`.
impl FromStr for ForbiddenPattern {
    type Err = PatternError;

    fn from_str(text: &str) -> Result<Self, PatternError> {
        let err = |position: usize, message: &str| PatternError::Parse {
            position,
            message: message.to_string(),
        };
        let digits = text.bytes().take_while(u8::is_ascii_digit).count();
        let multiplicity = if digits == 0 {
            1
        } else {
            text[..digits]
                .parse::<usize>()
                .map_err(|_| err(0, "multiplicity out of range"))?
        };
        let mut pos = digits;
        if digits > 0 && text[pos..].starts_with('*') {
            pos += 1;
        }
        let rest = &text[pos..];
        let base = if let Some(enc) = rest.strip_prefix("g6:") {
            from_graph6(enc).map_err(|e| err(pos + 3, &e.to_string()))?
        } else {
            let kind = rest.chars().next().ok_or_else(|| err(pos, "expected K, C, P or g6:"))?;
            let size_text = &rest[kind.len_utf8()..];
            if size_text.is_empty() || !size_text.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(pos + 1, "expected a decimal order"));
            }
            let size: usize = size_text.parse().map_err(|_| err(pos + 1, "order out of range"))?;
            if size == 0 || size > MAX_PATTERN_ORDER {
                return Err(err(pos + 1, "pattern order must be between 1 and 16"));
            }
            let built = match kind {
                'K' => crate::constructions::complete(size),
                'C' if size >= 3 => crate::constructions::cycle(size),
                'C' => return Err(err(pos + 1, "cycles need at least 3 vertices")),
                'P' => crate::constructions::path(size),
                _ => return Err(err(pos, "expected K, C, P or g6:")),
            };
            built.map_err(|e| err(pos + 1, &e.to_string()))?
        };
        ForbiddenPattern::new(base, multiplicity).map_err(|e| match e {
            PatternError::ZeroMultiplicity => err(0, "multiplicity must be at least 1"),
            other => other,
        })
    }
}

/// Injective map from pattern vertices to host vertices preserving edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    /// `map()[i]` is the host image of pattern vertex `i`.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self) -> VertexMask {
        self.map.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Checks injectivity and edge preservation in isolation.
    pub fn is_valid(&self, host: &Graph, f: &Graph) -> bool {
        self.map.len() == f.order()
            && self.map.iter().all(|&v| v < host.order())
            && self.image().count_ones() as usize == f.order()
            && f.edges().all(|(u, v)| host.has_edge(self.map[u], self.map[v]))
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().enumerate().map(|(i, v)| format!("{i}->{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A witness that `host` contains `f` as a subgraph, if one exists.
pub fn contains_subgraph(host: &Graph, f: &Graph) -> Option<Embedding> {
    if f.order() > host.order() {
        return None;
    }
    if f.order() == 0 {
        return Some(Embedding::new(Vec::new()));
    }
    EmbeddingPlan::new(f)
        .embed(host, host.vertex_mask())
        .map(Embedding::new)
}

fn pack(supports: &[u64], need: usize, start: usize, used: u64, chosen: &mut Vec<u64>) -> bool {
    if need == 0 {
        return true;
    }
    for i in start..supports.len() {
        if supports.len() - i < need {
            return false;
        }
        let s = supports[i];
        if s & used == 0 {
            chosen.push(s);
            if pack(supports, need - 1, i + 1, used | s, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// `k` pairwise disjoint copies of the base graph, lexicographically least
/// by their sequence of image masks, or `None` when `host` is `kF`-free.
pub fn find_disjoint_copies(host: &Graph, pattern: &ForbiddenPattern) -> Option<Vec<Embedding>> {
    if pattern.total_order() > host.order() {
        return None;
    }
    let supports = pattern.supports(host);
    let mut chosen = Vec::with_capacity(pattern.multiplicity);
    if !pack(&supports, pattern.multiplicity, 0, 0, &mut chosen) {
        return None;
    }
    Some(
        chosen
            .into_iter()
            .map(|mask| Embedding::new(pattern.plan.embed(host, mask).expect("support spans a copy")))
            .collect(),
    )
}

/// True when `host` has no `k` vertex-disjoint copies of the base graph.
pub fn is_free(host: &Graph, pattern: &ForbiddenPattern) -> bool {
    if pattern.total_order() > host.order() {
        return true;
    }
    let single = match pattern.shape {
        Shape::Complete(r) => cliques::has_clique(host, r),
        Shape::Cycle(l) => contains_cycle(host, l),
        Shape::Path(l) => contains_path(host, l),
        Shape::General => pattern.plan.embed(host, host.vertex_mask()).is_some(),
    };
    if !single {
        return true;
    }
    if pattern.multiplicity == 1 {
        return false;
    }
    let supports = pattern.supports(host);
    let mut chosen = Vec::with_capacity(pattern.multiplicity);
    !pack(&supports, pattern.multiplicity, 0, 0, &mut chosen)
}

/// Whether `host` contains a cycle on exactly `len >= 3` vertices.
pub fn contains_cycle(host: &Graph, len: usize) -> bool {
    fn walk(adj: &[u64], start: usize, at: usize, left: usize, avail: u64) -> bool {
        if left == 0 {
            return adj[at] >> start & 1 == 1;
        }
        for v in Bits(adj[at] & avail) {
            if walk(adj, start, v, left - 1, avail & !(1 << v)) {
                return true;
            }
        }
        false
    }
    if len < 3 || len > host.order() {
        return false;
    }
    let adj = host.rows();
    // Root each cycle at its smallest vertex.
    (0..host.order()).any(|s| {
        let above = host.vertex_mask() & !crate::graph::low_bits(s + 1);
        walk(adj, s, s, len - 1, above)
    })
}

/// Whether `host` contains a path on exactly `len >= 1` vertices.
pub fn contains_path(host: &Graph, len: usize) -> bool {
    fn walk(adj: &[u64], at: usize, left: usize, avail: u64) -> bool {
        if left == 0 {
            return true;
        }
        Bits(adj[at] & avail).any(|v| walk(adj, v, left - 1, avail & !(1 << v)))
    }
    if len == 0 {
        return true;
    }
    if len > host.order() {
        return false;
    }
    let all = host.vertex_mask();
    (0..host.order()).any(|s| walk(host.rows(), s, len - 1, all & !(1 << s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle, disjoint_union, join, path, turan_graph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pat(s: &str) -> ForbiddenPattern {
        s.parse().unwrap()
    }

    /// Oracle: try every injective map of `kF` into the host, extending one
    /// vertex at a time and checking edges to earlier vertices.
    fn tuple_oracle(host: &Graph, pattern: &ForbiddenPattern) -> bool {
        fn go(host: &Graph, kf: &Graph, t: usize, map: &mut Vec<usize>) -> bool {
            if t == kf.order() {
                return true;
            }
            for v in 0..host.order() {
                if map.contains(&v) {
                    continue;
                }
                if (0..t).all(|p| !kf.has_edge(p, t) || host.has_edge(map[p], v)) {
                    map.push(v);
                    if go(host, kf, t + 1, map) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        let kf = pattern.as_graph().unwrap();
        kf.order() <= host.order() && go(host, &kf, 0, &mut Vec::new())
    }

    fn check_witness(host: &Graph, pattern: &ForbiddenPattern, copies: &[Embedding]) {
        assert_eq!(copies.len(), pattern.multiplicity());
        let mut used = 0u64;
        for c in copies {
            assert!(c.is_valid(host, pattern.base()));
            assert_eq!(c.image() & used, 0);
            used |= c.image();
        }
    }

    #[test]
    fn grammar() {
        assert_eq!(pat("2C5").multiplicity(), 2);
        assert_eq!(pat("2C5").shape(), Shape::Cycle(5));
        assert_eq!(pat("K3").multiplicity(), 1);
        assert_eq!(pat("3K4").shape(), Shape::Complete(4));
        assert_eq!(pat("2P4").shape(), Shape::Path(4));
        assert_eq!(pat("2g6:Dhc").shape(), Shape::Cycle(5));
        assert_eq!(pat("2*g6:Dhc"), pat("2g6:Dhc"));
        assert_eq!(pat("2C5").to_string(), "2C5");
        assert_eq!(pat("1K3").to_string(), "K3");
        assert_eq!(pat("P2").shape(), Shape::Complete(2));
        for bad in ["", "2", "0K3", "C2", "X5", "K", "K3x", "K17", "2g6:D~", "g6:"] {
            assert!(bad.parse::<ForbiddenPattern>().is_err(), "{bad:?} should not parse");
        }
        match "2Q5".parse::<ForbiddenPattern>() {
            Err(PatternError::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_copy_examples() {
        assert!(contains_subgraph(&complete(4).unwrap(), &cycle(4).unwrap()).is_some());
        assert!(contains_subgraph(&turan_graph(10, 2).unwrap(), &complete(3).unwrap()).is_none());
        let host = join(&complete(1).unwrap(), &turan_graph(8, 2).unwrap()).unwrap();
        let c5 = cycle(5).unwrap();
        let w = contains_subgraph(&host, &c5).unwrap();
        assert!(w.is_valid(&host, &c5));
        assert!(contains_subgraph(&c5, &complete(6).unwrap()).is_none());
    }

    #[test]
    fn disjoint_copy_examples() {
        let nine = complete(9).unwrap();
        assert!(find_disjoint_copies(&nine, &pat("2C5")).is_none());
        assert!(is_free(&nine, &pat("2C5")));

        let two_triangles = disjoint_union(&complete(3).unwrap(), &complete(3).unwrap()).unwrap();
        let w = find_disjoint_copies(&two_triangles, &pat("2K3")).unwrap();
        check_witness(&two_triangles, &pat("2K3"), &w);
        assert_eq!(w[0].image(), 0b000111);
        assert_eq!(w[1].image(), 0b111000);

        let k5k1 = disjoint_union(&complete(5).unwrap(), &complete(1).unwrap()).unwrap();
        assert!(find_disjoint_copies(&k5k1, &pat("2K3")).is_none());

        let k6 = complete(6).unwrap();
        assert!(!is_free(&k6, &pat("2K3")));
        let w = find_disjoint_copies(&k6, &pat("2K3")).unwrap();
        // Lexicographically least: {0,1,2} then {3,4,5}.
        assert_eq!(
            w.iter().map(Embedding::image).collect::<Vec<_>>(),
            vec![0b000111, 0b111000]
        );
    }

    #[test]
    fn extremal_constructions_are_free() {
        for n in 10..=16 {
            let g = join(&complete(1).unwrap(), &turan_graph(n - 1, 2).unwrap()).unwrap();
            assert!(is_free(&g, &pat("2C5")), "n={n}");
            assert!(!is_free(&g, &pat("C5")));
        }
        for (n, r, k) in [(8, 3, 1), (9, 3, 2), (10, 4, 1), (12, 4, 2)] {
            let g = join(&complete(k).unwrap(), &turan_graph(n - k, r - 1).unwrap()).unwrap();
            let p = ForbiddenPattern::new(complete(r).unwrap(), k + 1).unwrap();
            assert!(is_free(&g, &p), "n={n} r={r} k={k}");
            let q = ForbiddenPattern::new(complete(r).unwrap(), k).unwrap();
            assert!(!is_free(&g, &q));
        }
    }

    #[test]
    fn cycles_and_paths() {
        let c5 = cycle(5).unwrap();
        assert!(contains_cycle(&c5, 5));
        assert!(!contains_cycle(&c5, 4));
        assert!(!contains_cycle(&turan_graph(6, 2).unwrap(), 5));
        assert!(contains_cycle(&complete(4).unwrap(), 4));
        assert!(contains_path(&c5, 5));
        assert!(!contains_path(&c5, 6));
        assert!(contains_path(&Graph::empty(1).unwrap(), 1));
        assert!(!contains_path(&Graph::empty(3).unwrap(), 2));
    }

    #[test]
    fn pigeonhole() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random(&mut rng, 9);
            assert!(is_free(&g, &pat("2C5")));
            assert!(is_free(&g, &pat("5K2")));
        }
    }

    fn random(rng: &mut ChaCha8Rng, n: usize) -> Graph {
        let p = rng.random_range(0.1..0.9);
        let mut g = Graph::empty(n).unwrap();
        for j in 1..n {
            for i in 0..j {
                if rng.random_bool(p) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    #[test]
    fn agrees_with_tuple_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let patterns: Vec<ForbiddenPattern> = ["C5", "K3", "2K3", "P4", "2P4", "C4", "2K2", "g6:CF", "2g6:CF"]
            .iter()
            .map(|s| pat(s))
            .collect();
        for _ in 0..200 {
            let n = rng.random_range(1..=8);
            let host = random(&mut rng, n);
            for p in &patterns {
                let want = !tuple_oracle(&host, p);
                assert_eq!(is_free(&host, p), want, "{host:?} {p}");
                match find_disjoint_copies(&host, p) {
                    Some(w) => {
                        assert!(!want);
                        check_witness(&host, p, &w);
                    }
                    None => assert!(want),
                }
                if p.multiplicity() == 1 {
                    assert_eq!(contains_subgraph(&host, p.base()).is_some(), !want);
                }
            }
        }
    }

    #[test]
    fn edge_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = pat("2P3");
        for _ in 0..200 {
            let host = random(&mut rng, 7);
            let (u, v) = (rng.random_range(0..7), rng.random_range(0..7));
            if u == v {
                continue;
            }
            let bigger = host.add_edge(u, v).unwrap();
            if !is_free(&host, &p) {
                assert!(!is_free(&bigger, &p));
            }
        }
    }

    #[test]
    fn shapes() {
        assert_eq!(classify(&path(1).unwrap()), Shape::Complete(1));
        assert_eq!(classify(&path(3).unwrap()), Shape::Path(3));
        assert_eq!(classify(&cycle(3).unwrap()), Shape::Complete(3));
        assert_eq!(classify(&cycle(6).unwrap()), Shape::Cycle(6));
        let two_paths = disjoint_union(&path(2).unwrap(), &path(2).unwrap()).unwrap();
        assert_eq!(classify(&two_paths), Shape::General);
    }
}
