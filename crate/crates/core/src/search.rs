//! Exact `ex(n, K_s, kF)` by exhaustive isomorph-free search.
//!
//! Graphs are grown one vertex at a time: each representative on `m`
//! vertices is extended by a new vertex with every neighbourhood mask over
//! `0..m`, children are reduced to canonical form and deduplicated. Since
//! pattern containment survives adding vertices, only pattern-free graphs
//! are ever extended, and every pattern-free graph on `m + 1` vertices is a
//! child of a pattern-free graph on `m`.
//!
//! Within one parent, freeness is a down-set over neighbourhood masks, so
//! masks are visited from the top and a mask with a free one-bit superset is
//! free without a check. On the last level, when pruning is enabled, only
//! masks with no free one-bit superset are scored: every edge-maximal free
//! graph arises that way, and an edge-monotone objective attains its optimum
//! on one. The full set of maximizers is then recovered by deleting edges
//! from the ones found while the objective stays at the optimum.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cliques::count_cliques;
use crate::graph::{canonical_form, canonical_graph, to_graph6, CanonicalForm, Graph, MAX_ORDER};
use crate::patterns::{is_free, ForbiddenPattern};

/// Largest order the exhaustive engine accepts.
pub const EXHAUSTIVE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("n = {n} exceeds the exhaustive limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid search problem: {0}")]
    Invalid(String),
    #[error("no {pattern}-free graph on {n} vertices exists")]
    NoAdmissibleGraph { n: usize, pattern: String },
    #[error("search result failed its independent re-check: {0}")]
    Unsound(String),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

type ObjectiveFn = dyn Fn(&Graph) -> u128 + Send + Sync;

/// Quantity maximized over pattern-free graphs. Must be invariant under
/// relabelling.
#[derive(Clone)]
pub enum Objective {
    /// `K_s(G)`.
    Cliques(usize),
    /// `e(G) + K_3(G)`.
    EdgesPlusTriangles,
    Custom {
        name: String,
        edge_monotone: bool,
        f: Arc<ObjectiveFn>,
    },
}

impl Objective {
    pub fn custom(
        name: impl Into<String>,
        edge_monotone: bool,
        f: impl Fn(&Graph) -> u128 + Send + Sync + 'static,
    ) -> Self {
        Objective::Custom {
            name: name.into(),
            edge_monotone,
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, g: &Graph) -> u128 {
        match self {
            Objective::Cliques(s) => count_cliques(g, *s),
            Objective::EdgesPlusTriangles => g.edge_count() as u128 + count_cliques(g, 3),
            Objective::Custom { f, .. } => f(g),
        }
    }

    /// Whether adding an edge can never decrease the value.
    pub fn edge_monotone(&self) -> bool {
        match self {
            Objective::Cliques(_) | Objective::EdgesPlusTriangles => true,
            Objective::Custom { edge_monotone, .. } => *edge_monotone,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Objective::Cliques(s) => format!("K{s}"),
            Objective::EdgesPlusTriangles => "e+K3".to_string(),
            Objective::Custom { name, .. } => name.clone(),
        }
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Objective({})", self.name())
    }
}

/// An `ex(n, K_s, pattern)` instance.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub n: usize,
    pub s: usize,
    pub pattern: ForbiddenPattern,
}

impl SearchProblem {
    pub fn new(n: usize, s: usize, pattern: ForbiddenPattern) -> Self {
        SearchProblem { n, s, pattern }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Score only edge-maximal candidates on the last level. `None` picks
    /// the default: on for [`solve`], off for [`solve_functional`].
    pub prune: Option<bool>,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    /// Refuse instances above this order (never more than
    /// [`EXHAUSTIVE_LIMIT`]).
    pub max_n: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: None,
            threads: 0,
            max_n: EXHAUSTIVE_LIMIT,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub n: usize,
    pub pattern: ForbiddenPattern,
    pub objective: Objective,
    pub optimum: u128,
    /// Every maximizer up to isomorphism, sorted by canonical bytes.
    pub extremal: Vec<CanonicalForm>,
    /// Last-level labelled candidates whose objective was evaluated.
    pub graphs_examined: u64,
    pub elapsed: Duration,
    pub unique: bool,
    pub pruned: bool,
}

#[derive(Serialize)]
struct ProblemJson {
    n: usize,
    objective: String,
    pattern: String,
    pruned: bool,
}

#[derive(Serialize)]
struct OutcomeJson {
    problem: ProblemJson,
    optimum: String,
    extremal: Vec<String>,
    graphs_examined: u64,
    elapsed_ms: u64,
    unique: bool,
}

impl SearchOutcome {
    /// JSON document with sorted keys; extremal graphs in graph6.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = OutcomeJson {
            problem: ProblemJson {
                n: self.n,
                objective: self.objective.name(),
                pattern: self.pattern.to_string(),
                pruned: self.pruned,
            },
            optimum: self.optimum.to_string(),
            extremal: self.extremal.iter().map(|f| to_graph6(&f.graph())).collect(),
            graphs_examined: self.graphs_examined,
            elapsed_ms: self.elapsed.as_millis() as u64,
            unique: self.unique,
        };
        // Round-tripping through Value sorts the keys.
        serde_json::to_value(doc).expect("outcome serializes")
    }
}

/// Upper-triangle bit key of a graph on at most 11 vertices.
fn pack(g: &Graph) -> u64 {
    let mut key = 0u64;
    for (j, &row) in g.rows().iter().enumerate().skip(1) {
        let base = j * (j - 1) / 2;
        key |= (row & crate::graph::low_bits(j)) << base;
    }
    key
}

fn unpack(key: u64, n: usize) -> Graph {
    let mut rows = [0u64; MAX_ORDER];
    for j in 1..n {
        let base = j * (j - 1) / 2;
        let up = (key >> base) & crate::graph::low_bits(j);
        rows[j] |= up;
        for i in crate::graph::Bits(up) {
            rows[i] |= 1 << j;
        }
    }
    Graph::from_rows_unchecked(&rows[..n])
}

/// `parent` plus vertex `m = parent.order()` adjacent to `mask`.
#[inline]
fn child(parent: &Graph, mask: u64) -> Graph {
    let m = parent.order();
    let mut rows = [0u64; MAX_ORDER];
    rows[..m].copy_from_slice(parent.rows());
    rows[m] = mask;
    for v in crate::graph::Bits(mask) {
        rows[v] |= 1 << m;
    }
    Graph::from_rows_unchecked(&rows[..=m])
}

/// Visits the children of `parent` from the top mask down, reporting each
/// free child with whether it is maximal (no free one-bit superset).
fn for_each_free_child(parent: &Graph, pattern: Option<&ForbiddenPattern>, mut visit: impl FnMut(Graph, bool)) {
    let m = parent.order();
    let full = crate::graph::low_bits(m);
    let mut free = vec![0u64; (1usize << m).div_ceil(64)];
    let is_known = |free: &[u64], s: u64| free[(s >> 6) as usize] >> (s & 63) & 1 == 1;
    let mut s = full;
    loop {
        let missing = full & !s;
        let has_free_superset = crate::graph::Bits(missing).any(|u| is_known(&free, s | 1 << u));
        let g = child(parent, s);
        let ok = has_free_superset || pattern.is_none_or(|p| is_free(&g, p));
        if ok {
            free[(s >> 6) as usize] |= 1 << (s & 63);
            visit(g, !has_free_superset);
        }
        if s == 0 {
            break;
        }
        s -= 1;
    }
}

fn run_in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T, SearchError> {
    if threads == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
    Ok(pool.install(job))
}

/// Canonical keys of all pattern-free graphs on `m + 1` vertices, sorted.
fn next_level(level: &[u64], m: usize, pattern: Option<&ForbiddenPattern>) -> Vec<u64> {
    let set = level
        .par_iter()
        .fold(HashSet::new, |mut set, &key| {
            let parent = unpack(key, m);
            for_each_free_child(&parent, pattern, |g, _| {
                set.insert(pack(&canonical_graph(&g)));
            });
            set
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    let mut keys: Vec<u64> = set.into_iter().collect();
    keys.par_sort_unstable();
    keys
}

/// Canonical keys of all pattern-free graphs on `m` vertices.
fn free_level(m: usize, pattern: Option<&ForbiddenPattern>) -> Vec<u64> {
    let single = Graph::empty(1).expect("order 1");
    let mut level = if pattern.is_none_or(|p| is_free(&single, p)) {
        vec![0u64]
    } else {
        Vec::new()
    };
    for order in 1..m {
        level = next_level(&level, order, pattern);
    }
    level
}

fn check_n(n: usize, options: &SearchOptions) -> Result<(), SearchError> {
    let limit = options.max_n.min(EXHAUSTIVE_LIMIT);
    if n > limit {
        return Err(SearchError::TooLarge { n, limit });
    }
    Ok(())
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// sorted by packed canonical key.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, SearchError> {
    enumerate_free_graphs(n, None)
}

/// One representative per isomorphism class of `pattern`-free graphs.
pub fn enumerate_free_graphs(n: usize, pattern: Option<&ForbiddenPattern>) -> Result<Vec<Graph>, SearchError> {
    check_n(n, &SearchOptions::default())?;
    if n == 0 {
        return Ok(vec![Graph::empty(0).expect("order 0")]);
    }
    Ok(free_level(n, pattern).into_iter().map(|k| unpack(k, n)).collect())
}

#[derive(Default)]
struct Best {
    value: Option<u128>,
    graphs: Vec<Graph>,
    examined: u64,
}

impl Best {
    fn offer(&mut self, value: u128, g: Graph) {
        self.examined += 1;
        match self.value {
            Some(b) if value < b => {}
            Some(b) if value == b => self.graphs.push(g),
            _ => {
                self.value = Some(value);
                self.graphs.clear();
                self.graphs.push(g);
            }
        }
    }

    fn merge(mut self, mut other: Best) -> Best {
        let examined = self.examined + other.examined;
        let out = match (self.value, other.value) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) if a > b => self,
            (Some(a), Some(b)) if a < b => other,
            _ => {
                self.graphs.append(&mut other.graphs);
                self
            }
        };
        Best { examined, ..out }
    }
}

/// Maximizes `objective` over `pattern`-free graphs on `n` vertices.
pub fn solve_objective(
    n: usize,
    objective: &Objective,
    pattern: &ForbiddenPattern,
    prune: bool,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    check_n(n, options)?;
    if n == 0 {
        return Err(SearchError::Invalid("n must be at least 1".into()));
    }
    let start = Instant::now();
    let best = run_in_pool(options.threads, || {
        if n == 1 {
            let mut best = Best::default();
            let single = Graph::empty(1).expect("order 1");
            if is_free(&single, pattern) {
                best.offer(objective.eval(&single), single);
            }
            return best;
        }
        let level = free_level(n - 1, Some(pattern));
        level
            .par_iter()
            .fold(Best::default, |mut best, &key| {
                let parent = unpack(key, n - 1);
                for_each_free_child(&parent, Some(pattern), |g, maximal| {
                    if maximal || !prune {
                        best.offer(objective.eval(&g), g);
                    }
                });
                best
            })
            .reduce(Best::default, Best::merge)
    })?;

    let optimum = best.value.ok_or_else(|| SearchError::NoAdmissibleGraph {
        n,
        pattern: pattern.to_string(),
    })?;
    let mut extremal: BTreeSet<CanonicalForm> = best.graphs.iter().map(canonical_form).collect();
    if prune {
        let mut stack: Vec<Graph> = extremal.iter().map(CanonicalForm::graph).collect();
        while let Some(g) = stack.pop() {
            for (u, v) in g.edges() {
                let h = g.remove_edge(u, v).expect("edge endpoints are valid");
                if objective.eval(&h) == optimum {
                    let form = canonical_form(&h);
                    if !extremal.contains(&form) {
                        stack.push(form.graph());
                        extremal.insert(form);
                    }
                }
            }
        }
    }
    for form in &extremal {
        let g = form.graph();
        if !is_free(&g, pattern) || objective.eval(&g) != optimum {
            return Err(SearchError::Unsound(format!(
                "{} does not attain {optimum}",
                to_graph6(&g)
            )));
        }
    }
    let extremal: Vec<CanonicalForm> = extremal.into_iter().collect();
    Ok(SearchOutcome {
        n,
        pattern: pattern.clone(),
        objective: objective.clone(),
        optimum,
        unique: extremal.len() == 1,
        extremal,
        graphs_examined: best.examined,
        elapsed: start.elapsed(),
        pruned: prune,
    })
}

/// `ex(n, K_s, pattern)` with all extremal graphs. Pruning defaults on.
pub fn solve(problem: &SearchProblem, options: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    if problem.s == 0 {
        return Err(SearchError::Invalid("s must be at least 1".into()));
    }
    let prune = options.prune.unwrap_or(true);
    solve_objective(
        problem.n,
        &Objective::Cliques(problem.s),
        &problem.pattern,
        prune,
        options,
    )
}

/// Maximizes an arbitrary isomorphism-invariant objective. Pruning defaults
/// off; turning it on is sound only for edge-monotone objectives and is
/// refused otherwise.
pub fn solve_functional(
    n: usize,
    objective: &Objective,
    pattern: &ForbiddenPattern,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let prune = options.prune.unwrap_or(false);
    if prune && !objective.edge_monotone() {
        return Err(SearchError::Invalid(format!(
            "pruning needs an edge-monotone objective; {} is not declared monotone",
            objective.name()
        )));
    }
    solve_objective(n, objective, pattern, prune, options)
}

/// How a known construction compares with an exhaustive optimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionVerdict {
    /// Same order as the search and pattern-free.
    pub admissible: bool,
    pub value: u128,
    pub attains: bool,
    /// Attains and is the only extremal class.
    pub unique: bool,
    /// `optimum - value` (0 when it attains).
    pub gap: u128,
}

pub fn verify_against_construction(outcome: &SearchOutcome, expected: &Graph) -> ConstructionVerdict {
    let admissible = expected.order() == outcome.n && is_free(expected, &outcome.pattern);
    let value = outcome.objective.eval(expected);
    let form = canonical_form(expected);
    let attains = admissible && outcome.extremal.binary_search(&form).is_ok();
    ConstructionVerdict {
        admissible,
        value,
        attains,
        unique: attains && outcome.unique,
        gap: outcome.optimum.saturating_sub(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, disjoint_union, thm_2c5_graph, turan_graph};
    use crate::graph::is_isomorphic;

    fn pat(s: &str) -> ForbiddenPattern {
        s.parse().unwrap()
    }

    #[test]
    fn pack_round_trip() {
        for n in 0..=11 {
            let g = complete(n).unwrap();
            assert_eq!(unpack(pack(&g), n), g);
            let t = turan_graph(n, 3).unwrap();
            assert_eq!(unpack(pack(&t), n), t);
        }
    }

    #[test]
    fn small_class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
        assert_eq!(enumerate_graphs(0).unwrap().len(), 1);
        assert!(matches!(enumerate_graphs(11), Err(SearchError::TooLarge { .. })));
    }

    #[test]
    fn triangle_free_class_counts() {
        // Triangle-free graphs on n nodes: 1, 2, 3, 7, 14, 38, 107.
        let p = pat("K3");
        let counts: Vec<usize> = (1..=7)
            .map(|n| enumerate_free_graphs(n, Some(&p)).unwrap().len())
            .collect();
        // Oracle: filter the full enumeration.
        let filtered: Vec<usize> = (1..=7)
            .map(|n| enumerate_graphs(n).unwrap().iter().filter(|g| is_free(g, &p)).count())
            .collect();
        assert_eq!(counts, filtered);
        assert_eq!(counts, vec![1, 2, 3, 7, 14, 38, 107]);
    }

    #[test]
    fn zykov_at_six() {
        let out = solve(&SearchProblem::new(6, 3, pat("K4")), &SearchOptions::default()).unwrap();
        assert_eq!(out.optimum, 8);
        assert!(out.unique);
        let t = turan_graph(6, 3).unwrap();
        assert!(is_isomorphic(&out.extremal[0].graph(), &t));
        let v = verify_against_construction(&out, &t);
        assert!(v.attains && v.unique && v.admissible);
        assert_eq!(v.gap, 0);
    }

    #[test]
    fn matching_number_at_five() {
        let out = solve(&SearchProblem::new(5, 2, pat("2K2")), &SearchOptions::default()).unwrap();
        assert_eq!(out.optimum, 4);
    }

    #[test]
    fn pigeonhole_regime() {
        let out = solve(&SearchProblem::new(8, 3, pat("2C5")), &SearchOptions::default()).unwrap();
        assert_eq!(out.optimum, 56);
        assert!(out.unique);
        assert_eq!(out.extremal[0].graph(), complete(8).unwrap());
        let v = verify_against_construction(&out, &thm_2c5_graph(8).unwrap());
        assert!(v.admissible && !v.attains);
        assert_eq!((v.value, v.gap), (12, 44));
    }

    #[test]
    fn functional_objective() {
        let opts = SearchOptions::default();
        let out = solve_functional(4, &Objective::EdgesPlusTriangles, &pat("C5"), &opts).unwrap();
        assert_eq!(out.optimum, 10);
        assert!(!out.pruned);
        let v = verify_against_construction(&out, &turan_graph(4, 2).unwrap());
        assert!(!v.attains);
        assert_eq!(v.value, 4);
        let out2 = solve_functional(2, &Objective::EdgesPlusTriangles, &pat("C5"), &opts).unwrap();
        assert_eq!(out2.optimum, 1);

        let out5 = solve_functional(5, &Objective::EdgesPlusTriangles, &pat("C5"), &opts).unwrap();
        let k4k1 = disjoint_union(&complete(4).unwrap(), &complete(1).unwrap()).unwrap();
        assert!(is_free(&k4k1, &pat("C5")));
        assert_eq!(Objective::EdgesPlusTriangles.eval(&k4k1), 10);
        assert!(out5.optimum >= 10);
    }

    #[test]
    fn pruning_does_not_change_results() {
        let cases = [
            (6, 3, "K4"),
            (6, 2, "2K2"),
            (7, 3, "2K3"),
            (6, 3, "C4"),
            (6, 2, "P4"),
            (5, 3, "K3"),
        ];
        for (n, s, p) in cases {
            let prob = SearchProblem::new(n, s, pat(p));
            let on = solve(
                &prob,
                &SearchOptions {
                    prune: Some(true),
                    ..Default::default()
                },
            )
            .unwrap();
            let off = solve(
                &prob,
                &SearchOptions {
                    prune: Some(false),
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(on.optimum, off.optimum, "{n} {s} {p}");
            assert_eq!(on.extremal, off.extremal, "{n} {s} {p}");
            assert!(on.graphs_examined <= off.graphs_examined);
        }
    }

    #[test]
    fn non_monotone_objective_refuses_pruning() {
        let odd = Objective::custom("non-edges", false, |g: &Graph| {
            (g.order() * g.order().saturating_sub(1) / 2 - g.edge_count()) as u128
        });
        let opts = SearchOptions {
            prune: Some(true),
            ..Default::default()
        };
        assert!(matches!(
            solve_functional(4, &odd, &pat("K3"), &opts),
            Err(SearchError::Invalid(_))
        ));
        let out = solve_functional(4, &odd, &pat("K3"), &SearchOptions::default()).unwrap();
        assert_eq!(out.optimum, 6);
        assert!(out.unique);
    }

    #[test]
    fn nothing_is_free_of_a_single_vertex() {
        let err = solve(&SearchProblem::new(3, 1, pat("K1")), &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, SearchError::NoAdmissibleGraph { .. }));
    }

    #[test]
    fn limits() {
        let prob = SearchProblem::new(11, 3, pat("K4"));
        assert!(matches!(
            solve(&prob, &SearchOptions::default()),
            Err(SearchError::TooLarge { .. })
        ));
        let opts = SearchOptions {
            max_n: 5,
            ..Default::default()
        };
        let prob = SearchProblem::new(6, 3, pat("K4"));
        assert!(matches!(
            solve(&prob, &opts),
            Err(SearchError::TooLarge { n: 6, limit: 5 })
        ));
        let prob = SearchProblem::new(1, 1, pat("K2"));
        let out = solve(&prob, &SearchOptions::default()).unwrap();
        assert_eq!(out.optimum, 1);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let prob = SearchProblem::new(6, 2, pat("2P3"));
        let a = solve(
            &prob,
            &SearchOptions {
                threads: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let b = solve(
            &prob,
            &SearchOptions {
                threads: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            (a.optimum, &a.extremal, a.graphs_examined),
            (b.optimum, &b.extremal, b.graphs_examined)
        );
    }

    #[test]
    fn json_document() {
        let out = solve(&SearchProblem::new(5, 3, pat("K4")), &SearchOptions::default()).unwrap();
        let v = out.to_json();
        assert_eq!(v["optimum"], "4");
        assert_eq!(v["unique"], true);
        assert_eq!(v["problem"]["pattern"], "K4");
        assert_eq!(v["extremal"].as_array().unwrap().len(), 1);
        let text = serde_json::to_string(&v).unwrap();
        let keys: Vec<&str> = [
            "elapsed_ms",
            "extremal",
            "graphs_examined",
            "optimum",
            "problem",
            "unique",
        ]
        .to_vec();
        let mut last = 0;
        for k in keys {
            let at = text.find(&format!("\"{k}\"")).unwrap();
            assert!(at >= last);
            last = at;
        }
    }
}
