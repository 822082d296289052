//! Graph families and closed-form values.
//!
//! All arithmetic is exact `u128`/`i128`. Values that are only known to be
//! correct for large `n` carry that condition in their [`Validity`] and must
//! not be reported as unconditional.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cliques::binomial;
use crate::graph::{from_graph6, Graph, GraphError, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The range of `n` on which a closed-form value is the true extremal number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "threshold", rename_all = "snake_case")]
pub enum Validity {
    /// Exact for every `n`.
    AllN,
    /// Exact for `n` at or above the stated threshold.
    AtLeast(u128),
    /// Exact only for sufficiently large `n`; no threshold is known. Below
    /// it the value is the count of a construction, i.e. a lower bound.
    SufficientlyLarge,
}

impl Validity {
    /// `Some(true/false)` when it is known whether the value is exact at
    /// `n`, `None` when that depends on an unstated threshold.
    pub fn covers(&self, n: usize) -> Option<bool> {
        match *self {
            Validity::AllN => Some(true),
            Validity::AtLeast(t) => Some(n as u128 >= t),
            Validity::SufficientlyLarge => None,
        }
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::AllN => f.write_str("exact for all n"),
            Validity::AtLeast(t) => write!(f, "exact for n >= {t}"),
            Validity::SufficientlyLarge => f.write_str(
                "exact only for sufficiently large n (threshold unstated); construction lower bound otherwise",
            ),
        }
    }
}

/// An exact value together with where it is known to be the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaValue {
    pub value: u128,
    pub valid_for: Validity,
}

impl FormulaValue {
    fn new(value: u128, valid_for: Validity) -> Self {
        FormulaValue { value, valid_for }
    }
}

impl fmt::Display for FormulaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.valid_for)
    }
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n > MAX_ORDER {
        Err(GraphError::OrderTooLarge(n))
    } else {
        Ok(())
    }
}

pub fn complete(n: usize) -> Result<Graph, GraphError> {
    Ok(Graph::empty(n)?.complement())
}

/// `C_n` with edges `i -- (i+1) mod n`. Orders below 3 give the path.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    let mut g = path(n)?;
    if n >= 3 {
        g.set_edge(0, n - 1);
    }
    Ok(g)
}

/// `P_n` with edges `i -- i+1`.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n)?;
    for i in 1..n {
        g.set_edge(i - 1, i);
    }
    Ok(g)
}

/// Star on `n` vertices, centre 0 (so `K_{1,n-1}`).
pub fn star(n: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n)?;
    for i in 1..n {
        g.set_edge(0, i);
    }
    Ok(g)
}

/// Part sizes of `T_r(n)`: part `i` holds the vertices `v` with `v mod r == i`.
pub fn turan_part_sizes(n: usize, r: usize) -> Vec<usize> {
    assert!(r >= 1, "Turán graphs need at least one part");
    (0..r).map(|i| n / r + usize::from(i < n % r)).collect()
}

/// Balanced complete `r`-partite graph `T_r(n)`; `r >= n` gives `K_n`.
pub fn turan_graph(n: usize, r: usize) -> Result<Graph, FormulaError> {
    if r == 0 {
        return Err(FormulaError::Domain("Turán graph needs r >= 1".into()));
    }
    check_order(n)?;
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if u % r != v % r {
                g.set_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// `G + H`: disjoint union plus every edge between the two sides. `G` keeps
/// labels `0..|G|`, `H` is shifted past it.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let mut out = disjoint_union(g, h)?;
    let (a, b) = (g.order(), h.order());
    for u in 0..a {
        for v in a..a + b {
            out.set_edge(u, v);
        }
    }
    Ok(out)
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let (a, b) = (g.order(), h.order());
    check_order(a + b)?;
    let mut out = Graph::empty(a + b)?;
    for (u, v) in g.edges() {
        out.set_edge(u, v);
    }
    for (u, v) in h.edges() {
        out.set_edge(a + u, a + v);
    }
    Ok(out)
}

/// Elementary symmetric polynomial of degree `s` in `sizes`.
fn elementary_symmetric(sizes: &[usize], s: usize) -> u128 {
    let mut e = vec![0u128; s + 1];
    e[0] = 1;
    for &x in sizes {
        for j in (1..=s).rev() {
            e[j] += e[j - 1] * x as u128;
        }
    }
    e[s]
}

/// `K_s(T_r(n))`: choose `s` distinct parts and one vertex from each.
pub fn turan_clique_count(n: usize, r: usize, s: usize) -> Result<FormulaValue, FormulaError> {
    if r == 0 {
        return Err(FormulaError::Domain("Turán graph needs r >= 1".into()));
    }
    let value = elementary_symmetric(&turan_part_sizes(n, r), s);
    Ok(FormulaValue::new(value, Validity::AllN))
}

/// `floor((n-1)^2 / 4)`, the triangle count of `K_1 + T_2(n-1)`.
pub fn thm_2c5_value(n: usize) -> Result<FormulaValue, FormulaError> {
    if n == 0 {
        return Err(FormulaError::Domain("n must be at least 1".into()));
    }
    let m = (n - 1) as u128;
    Ok(FormulaValue::new(m * m / 4, Validity::SufficientlyLarge))
}

/// `K_1 + T_2(n-1)`.
pub fn thm_2c5_graph(n: usize) -> Result<Graph, FormulaError> {
    if n == 0 {
        return Err(FormulaError::Domain("n must be at least 1".into()));
    }
    Ok(join(&complete(1)?, &turan_graph(n - 1, 2)?)?)
}

fn check_kkr(n: usize, r: usize, k: usize) -> Result<(), FormulaError> {
    if r < 2 || k < 1 || n < k + r - 1 {
        return Err(FormulaError::Domain(format!(
            "need r >= 2, k >= 1 and n >= k + r - 1 (got n={n}, r={r}, k={k})"
        )));
    }
    Ok(())
}

/// `K_r(K_k + T_{r-1}(n-k)) = sum_i C(k, i) * K_{r-i}(T_{r-1}(n-k))`.
pub fn thm_kkr_value(n: usize, r: usize, k: usize) -> Result<FormulaValue, FormulaError> {
    check_kkr(n, r, k)?;
    let sizes = turan_part_sizes(n - k, r - 1);
    let value = (0..=r.min(k))
        .map(|i| binomial(k, i) * elementary_symmetric(&sizes, r - i))
        .sum();
    Ok(FormulaValue::new(value, Validity::SufficientlyLarge))
}

/// `K_k + T_{r-1}(n-k)`.
pub fn thm_kkr_graph(n: usize, r: usize, k: usize) -> Result<Graph, FormulaError> {
    check_kkr(n, r, k)?;
    Ok(join(&complete(k)?, &turan_graph(n - k, r - 1)?)?)
}

/// The two candidate extremal counts for `(k+1)K_2`-free graphs: the clique
/// `K_{2k+1}` and the join `K_k + independent set`.
pub fn erdos_gallai_branches(n: usize, k: usize) -> (u128, u128) {
    let clique = binomial(2 * k + 1, 2);
    let split = binomial(k, 2) + (k as u128) * (n.saturating_sub(k) as u128);
    (clique, split)
}

/// Maximum edge count of an `n`-vertex graph without `k+1` disjoint edges.
///
/// For `n >= 2k+1` this is the larger of the two branches. Below that no
/// graph on `n` vertices can hold `k+1` disjoint edges, so the answer is
/// `C(n, 2)`; taking the minimum with `C(n, 2)` covers both regimes.
pub fn erdos_gallai_value(n: usize, k: usize) -> Result<FormulaValue, FormulaError> {
    if k < 1 {
        return Err(FormulaError::Domain("k must be at least 1".into()));
    }
    let (clique, split) = erdos_gallai_branches(n, k);
    let value = clique.max(split).min(binomial(n, 2));
    Ok(FormulaValue::new(value, Validity::AllN))
}

/// Smallest `n` for which the `kP_l` value is claimed:
/// `2l + 2kl(ceil(l/2) + 1) C(l, floor(l/2))`.
pub fn bushaw_kettle_threshold(k: usize, l: usize) -> u128 {
    let (k, l128) = (k as u128, l as u128);
    2 * l128 + 2 * k * l128 * (l128.div_ceil(2) + 1) * binomial(l, l / 2)
}

/// Linear form `slope * n + intercept` of the `kP_l` value, with
/// `t = k*floor(l/2) - 1`: `C(t,2) + t(n-t) + lambda = t*n - t(t+1)/2 + lambda`.
pub fn bushaw_kettle_line(k: usize, l: usize) -> Result<(i128, i128), FormulaError> {
    check_bk(k, l)?;
    let t = (k * (l / 2) - 1) as i128;
    let lambda = (l % 2) as i128;
    Ok((t, lambda - t * (t + 1) / 2))
}

fn check_bk(k: usize, l: usize) -> Result<(), FormulaError> {
    if k < 2 || l < 4 {
        return Err(FormulaError::Domain(format!(
            "need k >= 2 and l >= 4 (got k={k}, l={l})"
        )));
    }
    Ok(())
}

/// `ex(n, kP_l) = C(t, 2) + t(n - t) + lambda` with `t = k*floor(l/2) - 1`,
/// `lambda = 1` for odd `l` and `0` for even `l`. Requires `n >= t`.
pub fn bushaw_kettle_value(n: usize, k: usize, l: usize) -> Result<FormulaValue, FormulaError> {
    check_bk(k, l)?;
    let t = k * (l / 2) - 1;
    if n < t {
        return Err(FormulaError::Domain(format!("need n >= k*floor(l/2) - 1 = {t}")));
    }
    let lambda = (l % 2) as u128;
    let value = binomial(t, 2) + (t as u128) * ((n - t) as u128) + lambda;
    Ok(FormulaValue::new(
        value,
        Validity::AtLeast(bushaw_kettle_threshold(k, l)),
    ))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at position {position}: {message}")]
pub struct ConstructionParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ConstructionParseError> {
        Err(ConstructionParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn expect(&mut self, c: char) -> Result<(), ConstructionParseError> {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<usize, ConstructionParseError> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.fail("expected a decimal number");
        }
        let value = self.rest()[..len]
            .parse()
            .or_else(|_| self.fail("number out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn numbers(&mut self, count: usize) -> Result<Vec<usize>, ConstructionParseError> {
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i > 0 {
                self.expect(',')?;
            }
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn construction(&mut self) -> Result<Graph, ConstructionParseError> {
        let start = self.pos;
        let name_len = self.rest().bytes().take_while(|b| b.is_ascii_alphanumeric()).count();
        let name = &self.text[start..start + name_len];
        self.pos += name_len;
        self.expect(':')?;
        let args_at = self.pos;
        let lift = |r: Result<Graph, String>| {
            r.map_err(|message| ConstructionParseError {
                position: args_at,
                message,
            })
        };
        match name {
            "turan" => {
                let a = self.numbers(2)?;
                lift(turan_graph(a[0], a[1]).map_err(|e| e.to_string()))
            }
            "thm2c5" => {
                let a = self.numbers(1)?;
                lift(thm_2c5_graph(a[0]).map_err(|e| e.to_string()))
            }
            "thmkkr" => {
                let a = self.numbers(3)?;
                lift(thm_kkr_graph(a[0], a[1], a[2]).map_err(|e| e.to_string()))
            }
            "K" | "C" | "P" | "S" | "E" => {
                let n = self.numbers(1)?[0];
                let built = match name {
                    "K" => complete(n),
                    "C" => cycle(n),
                    "P" => path(n),
                    "S" => star(n),
                    _ => Graph::empty(n),
                };
                lift(built.map_err(|e| e.to_string()))
            }
            "join" | "union" => {
                let g = self.construction()?;
                self.expect(',')?;
                let h = self.construction()?;
                let built = if name == "join" {
                    join(&g, &h)
                } else {
                    disjoint_union(&g, &h)
                };
                lift(built.map_err(|e| e.to_string()))
            }
            "g6" => {
                let len = self.rest().bytes().take_while(|b| (63..=126).contains(b)).count();
                let text = self.text;
                let enc = &text[self.pos..self.pos + len];
                self.pos += len;
                lift(from_graph6(enc).map_err(|e| e.to_string()))
            }
            _ => Err(ConstructionParseError {
                position: start,
                message: format!("unknown construction '{name}'"),
            }),
        }
    }
}

/// Builds a graph from a construction name: `turan:n,r`, `join:A,B`,
/// `union:A,B`, `thm2c5:n`, `thmkkr:n,r,k`, `K:n`, `C:n`, `P:n`, `S:n`
/// (star), `E:n` (edgeless) or `g6:<graph6>`. `A` and `B` are themselves
/// construction names, e.g. `join:K:1,C:5`.
pub fn parse_construction(text: &str) -> Result<Graph, ConstructionParseError> {
    let mut p = Parser {
        text: text.trim(),
        pos: 0,
    };
    let g = p.construction()?;
    if p.pos != p.text.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(g)
}
