//! Naive reference implementations used to cross-check the library. Nothing
//! here calls into `gturan` except for conversion from its graph type.

#![allow(dead_code)]

use gturan::graph::Graph;
use rand::Rng;

/// Dense boolean adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn empty(n: usize) -> Self {
        Dense {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn add(&mut self, u: usize, v: usize) {
        self.adj[u][v] = true;
        self.adj[v][u] = true;
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut d = Dense::empty(g.order());
        for u in 0..g.order() {
            for v in 0..g.order() {
                if u != v && g.has_edge(u, v) {
                    d.add(u, v);
                }
            }
        }
        d
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges()).unwrap()
    }

    /// Labelled graph number `code` in the ordering of `pairs(n)`.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut d = Dense::empty(n);
        for (i, (u, v)) in pairs(n).into_iter().enumerate() {
            if code >> i & 1 == 1 {
                d.add(u, v);
            }
        }
        d
    }

    pub fn code(&self) -> u64 {
        pairs(self.n)
            .into_iter()
            .enumerate()
            .filter(|&(_, (u, v))| self.adj[u][v])
            .map(|(i, _)| 1u64 << i)
            .sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        pairs(self.n).into_iter().filter(|&(u, v)| self.adj[u][v]).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut d = Dense::empty(self.n);
        for (u, v) in self.edges() {
            d.add(perm[u], perm[v]);
        }
        d
    }

    /// `k` disjoint copies.
    pub fn times(&self, k: usize) -> Self {
        let mut d = Dense::empty(self.n * k);
        for c in 0..k {
            for (u, v) in self.edges() {
                d.add(c * self.n + u, c * self.n + v);
            }
        }
        d
    }

    pub fn without(&self, x: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        let mut d = Dense::empty(self.n - 1);
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate() {
                if i < j && self.adj[u][v] {
                    d.add(i, j);
                }
            }
        }
        d
    }
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in 1..n {
        for u in 0..v {
            out.push((u, v));
        }
    }
    out
}

pub fn complete(n: usize) -> Dense {
    let mut d = Dense::empty(n);
    for (u, v) in pairs(n) {
        d.add(u, v);
    }
    d
}

pub fn cycle(n: usize) -> Dense {
    let mut d = Dense::empty(n);
    for i in 0..n {
        d.add(i, (i + 1) % n);
    }
    d
}

pub fn path(n: usize) -> Dense {
    let mut d = Dense::empty(n);
    for i in 1..n {
        d.add(i - 1, i);
    }
    d
}

pub fn random(rng: &mut impl Rng, n: usize, p: f64) -> Dense {
    let mut d = Dense::empty(n);
    for (u, v) in pairs(n) {
        if rng.random_bool(p) {
            d.add(u, v);
        }
    }
    d
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        out(cur);
        return;
    }
    for v in start..n {
        cur.push(v);
        subsets(n, k, v + 1, cur, out);
        cur.pop();
    }
}

pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k <= n {
        subsets(n, k, 0, &mut Vec::new(), &mut f);
    }
}

/// Number of `s`-subsets that are pairwise adjacent.
pub fn clique_count(g: &Dense, s: usize) -> u128 {
    let mut count = 0;
    for_each_subset(g.n, s, |set| {
        if set
            .iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| g.adj[u][v]))
        {
            count += 1;
        }
    });
    count
}

fn extend(host: &Dense, f: &Dense, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = map.len();
    if i == f.n {
        return true;
    }
    for x in 0..host.n {
        if used[x] || !(0..i).all(|j| !f.adj[i][j] || host.adj[map[j]][x]) {
            continue;
        }
        used[x] = true;
        map.push(x);
        if extend(host, f, map, used) {
            return true;
        }
        map.pop();
        used[x] = false;
    }
    false
}

/// Some injective map of `f` into `host` preserves every edge of `f`.
pub fn contains(host: &Dense, f: &Dense) -> bool {
    f.n <= host.n && extend(host, f, &mut Vec::new(), &mut vec![false; host.n])
}

/// Size of a largest matching: the lowest live vertex is either left
/// unmatched or matched to one of its live neighbours.
pub fn matching_number(g: &Dense) -> usize {
    fn go(g: &Dense, live: &mut Vec<bool>) -> usize {
        let Some(u) = (0..g.n).find(|&u| live[u]) else {
            return 0;
        };
        live[u] = false;
        let mut best = go(g, live);
        for v in 0..g.n {
            if live[v] && g.adj[u][v] {
                live[v] = false;
                best = best.max(1 + go(g, live));
                live[v] = true;
            }
        }
        live[u] = true;
        best
    }
    go(g, &mut vec![true; g.n])
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest labelled code over all relabellings.
pub fn min_code(g: &Dense, perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| g.relabel(p).code()).min().unwrap_or(0)
}

/// Number of unlabelled graphs on `n` vertices by Burnside's lemma: the
/// average over permutations of `2^(cycles on vertex pairs)`.
pub fn burnside_count(n: usize) -> u128 {
    let perms = permutations(n);
    let pair_list = pairs(n);
    let index = |u: usize, v: usize| pair_list.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let mut total: u128 = 0;
    for p in &perms {
        let mut seen = vec![false; pair_list.len()];
        let mut cycles = 0;
        for start in 0..pair_list.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                let (u, v) = pair_list[i];
                i = index(p[u], p[v]);
            }
        }
        total += 1u128 << cycles;
    }
    total / perms.len() as u128
}

/// Maximum of `score` over every labelled `free` graph on `n` vertices.
pub fn brute_max(n: usize, free: impl Fn(&Dense) -> bool, score: impl Fn(&Dense) -> u128) -> Option<u128> {
    let m = n * n.saturating_sub(1) / 2;
    (0..1u64 << m)
        .map(|code| Dense::from_code(n, code))
        .filter(|g| free(g))
        .map(|g| score(&g))
        .max()
}
