//! Multi-hemirings with length-indexed products, infinitary valuations over
//! eventually periodic sequences, the real-valued weight structures (sup,
//! limsup, liminf, discounting, long-run average), lattice-derived ones, and
//! the regrouping counterexamples.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{run_laws, Check, Hemiring, Law, LawReport, Monoid, MultiHemiring, Sampler, AlgebraError};
use crate::automata::{omega_coeff_by_compilation, ProductAnalysis, ProductGraph};
use crate::instances::{parse_real, real_eq, render_real, Bool, Lattice};
use crate::series::{Coefficients, Estimate, OmegaCoefficients, OmegaSeries, OmegaWord, SeriesError};

pub const DEFAULT_DOUBLING_BLOCKS: usize = 24;
pub const DISC_TOLERANCE: f64 = 1e-12;
const MAX_VALUE_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValuationError {
    #[error("unknown valuation instance `{0}`")]
    Unknown(String),
    #[error("discount factor {0} is not in (0, 1)")]
    InvalidLambda(f64),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid weighted sequence: {0}")]
    InvalidSequence(String),
    #[error("strategy {strategy:?} is not supported by `{instance}`")]
    Unsupported { instance: String, strategy: TruncationStrategy },
    #[error("depth {0} is too small")]
    InvalidDepth(usize),
    #[error("lengths overflow at depth {0}")]
    Overflow(usize),
}

// ---------------------------------------------------------------------------
// Sequences and strategies

/// Eventually periodic sequence of `(length, value)` pairs: `prefix · block^ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSeq<E> {
    pub prefix: Vec<(u64, E)>,
    pub block: Vec<(u64, E)>,
}

impl<E: Clone> WeightedSeq<E> {
    pub fn new(prefix: Vec<(u64, E)>, block: Vec<(u64, E)>) -> Result<Self, ValuationError> {
        if block.is_empty() {
            return Err(ValuationError::InvalidSequence("repeated block is empty".into()));
        }
        if prefix.iter().chain(&block).any(|(n, _)| *n == 0) {
            return Err(ValuationError::InvalidSequence("lengths must be positive".into()));
        }
        Ok(WeightedSeq { prefix, block })
    }

    pub fn periodic(block: Vec<(u64, E)>) -> Result<Self, ValuationError> {
        Self::new(Vec::new(), block)
    }

    pub fn entries(&self) -> impl Iterator<Item = &(u64, E)> {
        self.prefix.iter().chain(self.block.iter().cycle())
    }

    pub fn first(&self) -> &(u64, E) {
        self.prefix.first().unwrap_or(&self.block[0])
    }

    /// The sequence without its first entry.
    pub fn tail(&self) -> Self {
        if self.prefix.is_empty() {
            let mut block = self.block.clone();
            block.rotate_left(1);
            WeightedSeq { prefix: Vec::new(), block }
        } else {
            WeightedSeq { prefix: self.prefix[1..].to_vec(), block: self.block.clone() }
        }
    }

    pub fn expand(&self, n: usize) -> Vec<(u64, E)> {
        self.entries().take(n).cloned().collect()
    }

    pub fn distinct(&self) -> impl Iterator<Item = &(u64, E)> {
        self.prefix.iter().chain(self.block.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TruncationStrategy {
    /// Closed form on the eventually periodic input.
    ExactLimit,
    /// First `depth` entries, with the instance's tail bound.
    Truncate { depth: usize },
    /// Entries `depth..2·depth`, for limit-type valuations.
    Window { depth: usize },
}

// ---------------------------------------------------------------------------
// The interface

pub trait OmegaValuation: MultiHemiring {
    fn name(&self) -> String;

    /// `a ·_{m,ω} b`.
    fn mul_omega(&self, a: &Self::Elem, m: u64, b: &Self::Elem) -> Self::Elem;

    fn val_omega(
        &self,
        seq: &WeightedSeq<Self::Elem>,
        strategy: TruncationStrategy,
    ) -> Result<Estimate<Self::Elem>, ValuationError>;

    fn value_sampler(&self, seed: u64) -> Sampler<Self::Elem>;

    /// Exact limit; every instance supports it.
    fn val_exact(&self, seq: &WeightedSeq<Self::Elem>) -> Self::Elem {
        self.val_omega(seq, TruncationStrategy::ExactLimit).expect("exact limits are always supported").value
    }
}

/// `val(d₁, …, dₙ)` induced by the products `·_{1,n}`.
pub fn induced_val<C: MultiHemiring>(c: &C, ds: &[C::Elem]) -> Result<C::Elem, ValuationError> {
    let (last, rest) = ds.split_last().ok_or(ValuationError::EmptySequence)?;
    let mut acc = last.clone();
    for (i, d) in rest.iter().enumerate().rev() {
        acc = c.mul_mn(d, 1, &acc, (ds.len() - 1 - i) as u64);
    }
    Ok(acc)
}

/// Left-nested combination `(…(d₁ ·_{m₁,m₂} d₂) ·_{m₁+m₂,m₃} …)` and its total length.
pub fn combine_group<C: MultiHemiring>(c: &C, group: &[(u64, C::Elem)]) -> (u64, C::Elem) {
    let mut len = group[0].0;
    let mut acc = group[0].1.clone();
    for (m, d) in &group[1..] {
        acc = c.mul_mn(&acc, len, d, *m);
        len += m;
    }
    (len, acc)
}

/// Groups consecutive entries: a group closes after entry `i` when `cut(i)`
/// holds or at the end of the slice.
fn group_entries<C: MultiHemiring>(c: &C, entries: &[(u64, C::Elem)], cut: &dyn Fn(usize) -> bool) -> Vec<(u64, C::Elem)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..entries.len() {
        if cut(i) || i + 1 == entries.len() {
            out.push(combine_group(c, &entries[start..=i]));
            start = i + 1;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Real-valued instances

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValuationKind {
    Sup,
    Limsup,
    Liminf,
    Disc { lambda: f64 },
    LimsupAvg,
}

/// Extended nonnegative reals under sup, with `−∞` as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealValuation {
    pub kind: ValuationKind,
}

impl RealValuation {
    pub fn new(kind: ValuationKind) -> Result<Self, ValuationError> {
        if let ValuationKind::Disc { lambda } = kind {
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(ValuationError::InvalidLambda(lambda));
            }
        }
        Ok(RealValuation { kind })
    }

    pub fn sup() -> Self {
        RealValuation { kind: ValuationKind::Sup }
    }

    pub fn limsup() -> Self {
        RealValuation { kind: ValuationKind::Limsup }
    }

    pub fn liminf() -> Self {
        RealValuation { kind: ValuationKind::Liminf }
    }

    pub fn limsup_avg() -> Self {
        RealValuation { kind: ValuationKind::LimsupAvg }
    }

    pub fn disc(lambda: f64) -> Result<Self, ValuationError> {
        Self::new(ValuationKind::Disc { lambda })
    }

    fn unsupported(&self, strategy: TruncationStrategy) -> ValuationError {
        ValuationError::Unsupported { instance: self.name(), strategy }
    }
}

fn pow(lambda: f64, n: u64) -> f64 {
    lambda.powf(n as f64)
}

fn disc_mul(lambda: f64, a: f64, m: u64, b: f64) -> f64 {
    a + pow(lambda, m) * b
}

fn avg_mul(a: f64, m: u64, b: f64, n: u64) -> f64 {
    if a == f64::INFINITY || b == f64::INFINITY {
        return f64::INFINITY;
    }
    let (m, n) = (m as f64, n as f64);
    (m * a + n * b) / (m + n)
}

impl Monoid for RealValuation {
    type Elem = f64;
    fn zero(&self) -> f64 {
        f64::NEG_INFINITY
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }
    fn equal(&self, a: &f64, b: &f64) -> bool {
        real_eq(*a, *b)
    }
    fn render(&self, a: &f64) -> String {
        render_real(*a)
    }
    fn parse(&self, text: &str) -> Result<f64, AlgebraError> {
        parse_real(text)
    }
    fn is_zero(&self, a: &f64) -> bool {
        *a == f64::NEG_INFINITY
    }
    fn nfold(&self, n: u64, a: &f64) -> f64 {
        if n == 0 {
            f64::NEG_INFINITY
        } else {
            *a
        }
    }
}

impl MultiHemiring for RealValuation {
    fn mul_mn(&self, a: &f64, m: u64, b: &f64, n: u64) -> f64 {
        if self.is_zero(a) || self.is_zero(b) {
            return f64::NEG_INFINITY;
        }
        match self.kind {
            ValuationKind::Sup | ValuationKind::Limsup | ValuationKind::Liminf => a.max(*b),
            ValuationKind::Disc { lambda } => disc_mul(lambda, *a, m, *b),
            ValuationKind::LimsupAvg => avg_mul(*a, m, *b, n),
        }
    }
}

impl OmegaValuation for RealValuation {
    fn name(&self) -> String {
        match self.kind {
            ValuationKind::Sup => "sup".into(),
            ValuationKind::Limsup => "limsup".into(),
            ValuationKind::Liminf => "liminf".into(),
            ValuationKind::Disc { lambda } => format!("disc({lambda})"),
            ValuationKind::LimsupAvg => "limsup-avg".into(),
        }
    }

    fn mul_omega(&self, a: &f64, m: u64, b: &f64) -> f64 {
        if self.is_zero(a) || self.is_zero(b) {
            return f64::NEG_INFINITY;
        }
        match self.kind {
            ValuationKind::Sup => a.max(*b),
            ValuationKind::LimsupAvg if *a == f64::INFINITY => f64::INFINITY,
            ValuationKind::Limsup | ValuationKind::Liminf | ValuationKind::LimsupAvg => *b,
            ValuationKind::Disc { lambda } => disc_mul(lambda, *a, m, *b),
        }
    }

    fn val_omega(&self, seq: &WeightedSeq<f64>, strategy: TruncationStrategy) -> Result<Estimate<f64>, ValuationError> {
        if seq.distinct().any(|(_, d)| self.is_zero(d)) {
            return Ok(Estimate::exact(f64::NEG_INFINITY));
        }
        let block_values = || seq.block.iter().map(|e| e.1);
        match (self.kind, strategy) {
            (ValuationKind::Sup, TruncationStrategy::ExactLimit) => {
                Ok(Estimate::exact(seq.distinct().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max)))
            }
            (ValuationKind::Limsup, TruncationStrategy::ExactLimit) => {
                Ok(Estimate::exact(block_values().fold(f64::NEG_INFINITY, f64::max)))
            }
            (ValuationKind::Liminf, TruncationStrategy::ExactLimit) => {
                Ok(Estimate::exact(block_values().fold(f64::INFINITY, f64::min)))
            }
            (ValuationKind::LimsupAvg, TruncationStrategy::ExactLimit) => {
                let (len, total) = seq.block.iter().fold((0u64, 0.0), |(l, s), (n, d)| (l + n, s + *n as f64 * d));
                if block_values().any(|d| d == f64::INFINITY) || seq.prefix.iter().any(|e| e.1 == f64::INFINITY) {
                    return Ok(Estimate::exact(f64::INFINITY));
                }
                Ok(Estimate::exact(total / len as f64))
            }
            (ValuationKind::Disc { lambda }, TruncationStrategy::ExactLimit) => {
                let mut offset = 0u64;
                let mut head = 0.0;
                for (n, d) in &seq.prefix {
                    head += pow(lambda, offset) * d;
                    offset += n;
                }
                let mut block = 0.0;
                let mut inner = 0u64;
                for (n, d) in &seq.block {
                    block += pow(lambda, inner) * d;
                    inner += n;
                }
                Ok(Estimate::exact(head + pow(lambda, offset) * block / (1.0 - pow(lambda, inner))))
            }
            (ValuationKind::Disc { lambda }, TruncationStrategy::Truncate { depth }) => {
                let max_w = seq.distinct().map(|e| e.1).fold(0.0, f64::max);
                let mut offset = 0u64;
                let mut sum = 0.0;
                for (n, d) in seq.entries().take(depth) {
                    sum += pow(lambda, offset) * d;
                    offset += n;
                }
                Ok(Estimate { value: sum, error_bound: Some(pow(lambda, offset) * max_w / (1.0 - lambda)) })
            }
            (ValuationKind::Limsup | ValuationKind::Liminf, TruncationStrategy::Window { depth }) => {
                if depth == 0 {
                    return Err(ValuationError::InvalidDepth(depth));
                }
                let window = seq.entries().skip(depth).take(depth).map(|e| e.1);
                let value = if self.kind == ValuationKind::Limsup {
                    window.fold(f64::NEG_INFINITY, f64::max)
                } else {
                    window.fold(f64::INFINITY, f64::min)
                };
                let settled = depth >= seq.prefix.len() && depth >= seq.block.len();
                Ok(Estimate { value, error_bound: Some(if settled { 0.0 } else { f64::INFINITY }) })
            }
            (ValuationKind::LimsupAvg, TruncationStrategy::Window { depth }) => {
                if depth == 0 {
                    return Err(ValuationError::InvalidDepth(depth));
                }
                let max_w = seq.distinct().map(|e| e.1).fold(0.0, f64::max);
                let (mut len, mut total) = (0u64, 0.0);
                for (n, d) in seq.entries().take(2 * depth) {
                    len += n;
                    total += *n as f64 * d;
                }
                let spread: u64 = seq.distinct().map(|e| e.0).sum();
                Ok(Estimate { value: total / len as f64, error_bound: Some(max_w * spread as f64 / len as f64) })
            }
            (_, s) => Err(self.unsupported(s)),
        }
    }

    fn value_sampler(&self, seed: u64) -> Sampler<f64> {
        Sampler::random(seed, |rng: &mut ChaCha8Rng| match rng.gen_range(0..20) {
            0 | 1 => f64::NEG_INFINITY,
            2 => f64::INFINITY,
            _ => f64::from(rng.gen_range(0..=16u32)) / 4.0,
        })
    }
}

impl Coefficients for RealValuation {
    fn letter_weight(&self) -> f64 {
        1.0
    }

    fn letter_multiple(&self, w: &f64) -> Option<u64> {
        if *w == f64::NEG_INFINITY {
            Some(0)
        } else if real_eq(*w, 1.0) {
            Some(1)
        } else {
            None
        }
    }

    /// Discounting reads `[w, 0, …, 0]`; the others read `[w; len]`.
    fn spread(&self, w: &f64, len: usize) -> Option<Vec<f64>> {
        if self.is_zero(w) || len == 0 {
            return None;
        }
        Some(match self.kind {
            ValuationKind::Disc { .. } => {
                let mut out = vec![0.0; len];
                out[0] = *w;
                out
            }
            _ => vec![*w; len],
        })
    }
}

impl ProductAnalysis for RealValuation {
    fn analyze(&self, g: &ProductGraph<f64>) -> Result<Estimate<f64>, SeriesError> {
        match self.kind {
            ValuationKind::Sup => Ok(Estimate::exact(sup_value(g))),
            ValuationKind::Limsup => Ok(Estimate::exact(limsup_value(g))),
            ValuationKind::Liminf => Ok(Estimate::exact(liminf_value(g))),
            ValuationKind::LimsupAvg => Ok(Estimate::exact(mean_payoff_value(g))),
            ValuationKind::Disc { lambda } => Ok(disc_value(g, lambda)),
        }
    }
}

impl OmegaCoefficients for RealValuation {
    fn omega_coeff(&self, f: &OmegaSeries<f64>, w: &OmegaWord) -> Result<Estimate<f64>, SeriesError> {
        omega_coeff_by_compilation(self, f, w)
    }
}

// ---------------------------------------------------------------------------
// Product-graph strategies for the real instances

fn reachable_starts(g: &ProductGraph<f64>) -> Vec<bool> {
    g.reachable_from(&g.start_nodes())
}

/// Largest weight on an edge that lies on some successful run.
fn sup_value(g: &ProductGraph<f64>) -> f64 {
    let good = g.good_nodes();
    let reach = reachable_starts(g);
    let mut best = f64::NEG_INFINITY;
    for v in (0..g.len()).filter(|&v| reach[v]) {
        for (u, w) in &g.edges[v] {
            if good[*u] {
                best = best.max(*w);
            }
        }
    }
    best
}

fn reachable_accepting(g: &ProductGraph<f64>, keep: &dyn Fn(&f64) -> bool) -> Vec<Vec<usize>> {
    let reach = reachable_starts(g);
    g.accepting_components(keep).into_iter().filter(|m| reach[m[0]]).collect()
}

fn internal_edges<'a>(g: &'a ProductGraph<f64>, members: &'a [usize]) -> impl Iterator<Item = (usize, usize, f64)> + 'a {
    let index: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    members
        .iter()
        .enumerate()
        .flat_map(move |(i, &v)| {
            let index = index.clone();
            g.edges[v].iter().filter_map(move |(u, w)| index.get(u).map(|&j| (i, j, *w)))
        })
}

/// Largest weight seen infinitely often on a successful run.
fn limsup_value(g: &ProductGraph<f64>) -> f64 {
    reachable_accepting(g, &|_| true)
        .iter()
        .flat_map(|m| internal_edges(g, m).map(|e| e.2).collect::<Vec<_>>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest threshold `t` such that a successful run eventually uses only
/// edges of weight at least `t`.
fn liminf_value(g: &ProductGraph<f64>) -> f64 {
    let mut weights: Vec<f64> = g.edges.iter().flatten().map(|e| e.1).collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    weights.dedup();
    for t in weights {
        if !reachable_accepting(g, &|w| *w >= t).is_empty() {
            return t;
        }
    }
    f64::NEG_INFINITY
}

/// Maximum cycle mean of a strongly connected member set (Karp).
pub fn max_cycle_mean(g: &ProductGraph<f64>, members: &[usize]) -> f64 {
    let edges: Vec<(usize, usize, f64)> = internal_edges(g, members).collect();
    if edges.is_empty() {
        return f64::NEG_INFINITY;
    }
    if edges.iter().any(|e| e.2 == f64::INFINITY) {
        return f64::INFINITY;
    }
    let s = members.len();
    let mut d = vec![vec![f64::NEG_INFINITY; s]; s + 1];
    d[0][0] = 0.0;
    for k in 1..=s {
        for &(i, j, w) in &edges {
            if d[k - 1][i] > f64::NEG_INFINITY {
                d[k][j] = d[k][j].max(d[k - 1][i] + w);
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    for v in 0..s {
        if d[s][v] == f64::NEG_INFINITY {
            continue;
        }
        let mut worst = f64::INFINITY;
        for k in (0..s).filter(|&k| d[k][v] > f64::NEG_INFINITY) {
            worst = worst.min((d[s][v] - d[k][v]) / (s - k) as f64);
        }
        best = best.max(worst);
    }
    best
}

fn mean_payoff_value(g: &ProductGraph<f64>) -> f64 {
    reachable_accepting(g, &|_| true).iter().map(|m| max_cycle_mean(g, m)).fold(f64::NEG_INFINITY, f64::max)
}

/// `depth` rounds of value iteration on the nodes that admit a successful
/// continuation, starting from zero. The bound `λ^N·maxW/(1−λ)` covers the
/// unexplored tail.
pub fn disc_value_iteration(g: &ProductGraph<f64>, lambda: f64, depth: usize) -> Estimate<f64> {
    let good = g.good_nodes();
    let starts: Vec<usize> = g.start_nodes().into_iter().filter(|&s| good[s]).collect();
    if starts.is_empty() {
        return Estimate::exact(f64::NEG_INFINITY);
    }
    let reach = g.reachable_from(&starts);
    let live = |v: usize| reach[v] && good[v];
    let max_w = (0..g.len())
        .filter(|&v| live(v))
        .flat_map(|v| g.edges[v].iter().filter(|e| good[e.0]).map(|e| e.1))
        .fold(0.0, f64::max);
    if max_w == f64::INFINITY {
        return Estimate::exact(f64::INFINITY);
    }
    let mut values = vec![0.0; g.len()];
    for _ in 0..depth {
        let mut next = vec![0.0; g.len()];
        for v in (0..g.len()).filter(|&v| live(v)) {
            next[v] = g.edges[v]
                .iter()
                .filter(|e| good[e.0])
                .map(|(u, w)| w + lambda * values[*u])
                .fold(f64::NEG_INFINITY, f64::max);
        }
        values = next;
    }
    let value = starts.iter().map(|&s| values[s]).fold(f64::NEG_INFINITY, f64::max);
    Estimate { value, error_bound: Some(pow(lambda, depth as u64) * max_w / (1.0 - lambda)) }
}

/// Iterates until the tail bound drops below [`DISC_TOLERANCE`].
fn disc_value(g: &ProductGraph<f64>, lambda: f64) -> Estimate<f64> {
    let probe = disc_value_iteration(g, lambda, 0);
    let max_w = match probe.error_bound {
        None => return probe,
        Some(b) => b * (1.0 - lambda),
    };
    let depth = if max_w <= 0.0 {
        1
    } else {
        let needed = (DISC_TOLERANCE * (1.0 - lambda) / max_w).ln() / lambda.ln();
        (needed.ceil().max(1.0) as usize).min(MAX_VALUE_ITERATIONS)
    };
    disc_value_iteration(g, lambda, depth)
}

// ---------------------------------------------------------------------------
// Structures derived from complete omega-hemirings

/// A hemiring with an infinitary product, evaluated on eventually periodic
/// sequences.
pub trait CompleteOmegaHemiring: Hemiring + Clone {
    fn name(&self) -> String;
    fn infinite_product(&self, prefix: &[Self::Elem], block: &[Self::Elem]) -> Self::Elem;
    fn samples(&self) -> Sampler<Self::Elem>;
    /// Weight sets whose union is the whole carrier, one per acceptance pass.
    fn atoms(&self) -> Vec<Self::Elem>;
}

impl CompleteOmegaHemiring for Bool {
    fn name(&self) -> String {
        "bool".into()
    }
    fn infinite_product(&self, prefix: &[bool], block: &[bool]) -> bool {
        prefix.iter().chain(block).all(|b| *b)
    }
    fn samples(&self) -> Sampler<bool> {
        Sampler::exhaustive(vec![false, true])
    }
    fn atoms(&self) -> Vec<bool> {
        vec![true]
    }
}

impl CompleteOmegaHemiring for Lattice {
    fn name(&self) -> String {
        format!("lattice({})", self.base())
    }
    fn infinite_product(&self, prefix: &[u32], block: &[u32]) -> u32 {
        prefix.iter().chain(block).fold(self.top(), |acc, x| acc & x)
    }
    fn samples(&self) -> Sampler<u32> {
        self.sampler()
    }
    fn atoms(&self) -> Vec<u32> {
        (0..self.base()).map(|i| 1u32 << i).collect()
    }
}

/// `a ·_{m,n} b = ab`, `a ·_{m,ω} b = ab`, and `val^ω` the infinite product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FromComplete<H> {
    pub hemiring: H,
}

impl<H: CompleteOmegaHemiring> Monoid for FromComplete<H> {
    type Elem = H::Elem;
    fn zero(&self) -> H::Elem {
        self.hemiring.zero()
    }
    fn add(&self, a: &H::Elem, b: &H::Elem) -> H::Elem {
        self.hemiring.add(a, b)
    }
    fn equal(&self, a: &H::Elem, b: &H::Elem) -> bool {
        self.hemiring.equal(a, b)
    }
    fn render(&self, a: &H::Elem) -> String {
        self.hemiring.render(a)
    }
    fn parse(&self, text: &str) -> Result<H::Elem, AlgebraError> {
        self.hemiring.parse(text)
    }
    fn nfold(&self, n: u64, a: &H::Elem) -> H::Elem {
        self.hemiring.nfold(n, a)
    }
}

impl<H: CompleteOmegaHemiring> MultiHemiring for FromComplete<H> {
    fn mul_mn(&self, a: &H::Elem, _m: u64, b: &H::Elem, _n: u64) -> H::Elem {
        self.hemiring.mul(a, b)
    }
}

impl<H: CompleteOmegaHemiring> OmegaValuation for FromComplete<H> {
    fn name(&self) -> String {
        format!("from-complete({})", self.hemiring.name())
    }
    fn mul_omega(&self, a: &H::Elem, _m: u64, b: &H::Elem) -> H::Elem {
        self.hemiring.mul(a, b)
    }
    fn val_omega(&self, seq: &WeightedSeq<H::Elem>, strategy: TruncationStrategy) -> Result<Estimate<H::Elem>, ValuationError> {
        if strategy != TruncationStrategy::ExactLimit {
            return Err(ValuationError::Unsupported { instance: self.name(), strategy });
        }
        let prefix: Vec<H::Elem> = seq.prefix.iter().map(|e| e.1.clone()).collect();
        let block: Vec<H::Elem> = seq.block.iter().map(|e| e.1.clone()).collect();
        if prefix.iter().chain(&block).any(|d| self.is_zero(d)) {
            return Ok(Estimate::exact(self.zero()));
        }
        Ok(Estimate::exact(self.hemiring.infinite_product(&prefix, &block)))
    }
    fn value_sampler(&self, _seed: u64) -> Sampler<H::Elem> {
        self.hemiring.samples()
    }
}

impl Coefficients for FromComplete<Bool> {
    fn letter_weight(&self) -> bool {
        true
    }
    fn unit_weight(&self) -> Option<bool> {
        Some(true)
    }
    fn letter_multiple(&self, w: &bool) -> Option<u64> {
        Some(u64::from(*w))
    }
}

impl Coefficients for FromComplete<Lattice> {
    fn letter_weight(&self) -> u32 {
        self.hemiring.top()
    }
    fn unit_weight(&self) -> Option<u32> {
        Some(self.hemiring.top())
    }
    fn letter_multiple(&self, w: &u32) -> Option<u64> {
        self.hemiring.letter_multiple(w)
    }
}

/// Büchi acceptance on the subgraph of edges above each atom.
fn atomwise_analysis<H: CompleteOmegaHemiring>(h: &H, g: &ProductGraph<H::Elem>) -> H::Elem {
    let mut acc = h.zero();
    for atom in h.atoms() {
        let sub = ProductGraph {
            states: g.states,
            positions: g.positions,
            k: g.k,
            edges: g
                .edges
                .iter()
                .map(|es| es.iter().filter(|(_, w)| h.equal(&h.mul(w, &atom), &atom)).cloned().collect())
                .collect(),
            starts: g.starts.clone(),
        };
        let good = sub.good_nodes();
        if sub.starts.iter().any(|&(s, _)| good[s]) {
            acc = h.add(&acc, &atom);
        }
    }
    acc
}

impl ProductAnalysis for FromComplete<Bool> {
    fn analyze(&self, g: &ProductGraph<bool>) -> Result<Estimate<bool>, SeriesError> {
        Ok(Estimate::exact(atomwise_analysis(&self.hemiring, g)))
    }
}

impl ProductAnalysis for FromComplete<Lattice> {
    fn analyze(&self, g: &ProductGraph<u32>) -> Result<Estimate<u32>, SeriesError> {
        Ok(Estimate::exact(atomwise_analysis(&self.hemiring, g)))
    }
}

impl OmegaCoefficients for FromComplete<Bool> {
    fn omega_coeff(&self, f: &OmegaSeries<bool>, w: &OmegaWord) -> Result<Estimate<bool>, SeriesError> {
        omega_coeff_by_compilation(self, f, w)
    }
}

impl OmegaCoefficients for FromComplete<Lattice> {
    fn omega_coeff(&self, f: &OmegaSeries<u32>, w: &OmegaWord) -> Result<Estimate<u32>, SeriesError> {
        omega_coeff_by_compilation(self, f, w)
    }
}

// ---------------------------------------------------------------------------
// Registry

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValuationParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_base: Option<u8>,
    /// Underlying complete hemiring for `from-complete`: `bool` or `lattice`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hemiring: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationManifest {
    pub name: String,
    #[serde(default)]
    pub params: ValuationParams,
    pub strategy: TruncationStrategy,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValuationInstance {
    Real(RealValuation),
    CompleteBool(FromComplete<Bool>),
    CompleteLattice(FromComplete<Lattice>),
}

pub const VALUATION_NAMES: [&str; 7] = ["sup", "limsup", "liminf", "disc", "limsup-avg", "lattice-inf", "from-complete"];

pub fn make_valuation_instance(name: &str, params: &ValuationParams) -> Result<ValuationInstance, ValuationError> {
    let lattice = || {
        Lattice::new(params.lattice_base.unwrap_or(3)).map_err(|e| ValuationError::InvalidParam(e.to_string()))
    };
    Ok(match name {
        "sup" => ValuationInstance::Real(RealValuation::sup()),
        "limsup" => ValuationInstance::Real(RealValuation::limsup()),
        "liminf" => ValuationInstance::Real(RealValuation::liminf()),
        "limsup-avg" | "avg" => ValuationInstance::Real(RealValuation::limsup_avg()),
        "disc" => ValuationInstance::Real(RealValuation::disc(params.lambda.unwrap_or(0.5))?),
        "lattice-inf" => ValuationInstance::CompleteLattice(FromComplete { hemiring: lattice()? }),
        "from-complete" => match params.hemiring.as_deref().unwrap_or("bool") {
            "bool" => ValuationInstance::CompleteBool(FromComplete { hemiring: Bool }),
            "lattice" => ValuationInstance::CompleteLattice(FromComplete { hemiring: lattice()? }),
            other => return Err(ValuationError::InvalidParam(format!("no complete omega-hemiring `{other}`"))),
        },
        other => return Err(ValuationError::Unknown(other.to_string())),
    })
}

impl ValuationInstance {
    pub fn name(&self) -> String {
        match self {
            ValuationInstance::Real(c) => c.name(),
            ValuationInstance::CompleteBool(c) => c.name(),
            ValuationInstance::CompleteLattice(c) => c.name(),
        }
    }

    pub fn multi_hemiring_laws(&self, seed: u64, trials: usize) -> LawReport {
        match self {
            ValuationInstance::Real(c) => multi_hemiring_laws(c, &draw_sampler(c, seed), trials),
            ValuationInstance::CompleteBool(c) => multi_hemiring_laws(c, &draw_sampler(c, seed), trials),
            ValuationInstance::CompleteLattice(c) => multi_hemiring_laws(c, &draw_sampler(c, seed), trials),
        }
    }

    pub fn omega_valuation_laws(&self, seed: u64, trials: usize) -> LawReport {
        match self {
            ValuationInstance::Real(c) => {
                let mut r = omega_valuation_laws(c, &draw_sampler(c, seed), trials);
                r.absorb(real_witness_laws(c));
                r
            }
            ValuationInstance::CompleteBool(c) => omega_valuation_laws(c, &draw_sampler(c, seed), trials),
            ValuationInstance::CompleteLattice(c) => omega_valuation_laws(c, &draw_sampler(c, seed), trials),
        }
    }

    pub fn complete_omega_hemiring_laws(&self, seed: u64, trials: usize) -> LawReport {
        match self {
            ValuationInstance::Real(c) => complete_omega_hemiring_laws(c, &draw_sampler(c, seed), trials),
            ValuationInstance::CompleteBool(c) => complete_omega_hemiring_laws(c, &draw_sampler(c, seed), trials),
            ValuationInstance::CompleteLattice(c) => complete_omega_hemiring_laws(c, &draw_sampler(c, seed), trials),
        }
    }
}

// ---------------------------------------------------------------------------
// Law suites

/// One sampled sequence entry: a length, up to three alternative values
/// (the first is the entry's value) and whether a regrouping cut follows it.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw<E> {
    pub len: u64,
    pub values: Vec<E>,
    pub cut: bool,
}

impl<E: Clone> Draw<E> {
    pub fn value(&self) -> &E {
        &self.values[0]
    }

    fn entry(&self) -> (u64, E) {
        (self.len, self.values[0].clone())
    }
}

pub fn draw_sampler<C: OmegaValuation>(c: &C, seed: u64) -> Sampler<Draw<C::Elem>> {
    let values = c.value_sampler(seed);
    Sampler::random(seed, move |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=3);
        Draw { len, values: (0..count).map(|_| values.pick(rng)).collect(), cut: rng.gen_bool(0.5) }
    })
}

fn render_draw<C: Monoid>(c: &C, d: &Draw<C::Elem>) -> String {
    let vals: Vec<String> = d.values.iter().map(|v| c.render(v)).collect();
    format!("({}, {}{})", d.len, vals.join("|"), if d.cut { ";" } else { "" })
}

fn seq_of<E: Clone>(prefix: &[Draw<E>], block: &[Draw<E>]) -> WeightedSeq<E> {
    WeightedSeq::new(prefix.iter().map(Draw::entry).collect(), block.iter().map(Draw::entry).collect())
        .expect("draws have positive lengths and the block is nonempty")
}

pub fn multi_hemiring_laws<C: MultiHemiring>(c: &C, sampler: &Sampler<Draw<C::Elem>>, trials: usize) -> LawReport {
    let laws: Vec<Law<'_, Draw<C::Elem>>> = vec![
        Law::new("indexed zero annihilation", 1, move |t: &[Draw<C::Elem>]| {
            let (z, a, m) = (c.zero(), t[0].value(), t[0].len);
            let l = c.add(&c.mul_mn(&z, m, a, 2), &c.mul_mn(a, 2, &z, m));
            Check::compare(c, &l, &z)
        }),
        Law::new("indexed associativity", 3, move |t: &[Draw<C::Elem>]| {
            let (a, b, d) = (t[0].value(), t[1].value(), t[2].value());
            let (k, m, n) = (t[0].len, t[1].len, t[2].len);
            let l = c.mul_mn(&c.mul_mn(a, k, b, m), k + m, d, n);
            let r = c.mul_mn(a, k, &c.mul_mn(b, m, d, n), m + n);
            Check::compare(c, &l, &r)
        }),
        Law::new("indexed left distributivity", 3, move |t: &[Draw<C::Elem>]| {
            let (a, b, d) = (t[0].value(), t[1].value(), t[2].value());
            let (m, n) = (t[0].len, t[1].len);
            let l = c.mul_mn(a, m, &c.add(b, d), n);
            let r = c.add(&c.mul_mn(a, m, b, n), &c.mul_mn(a, m, d, n));
            Check::compare(c, &l, &r)
        }),
        Law::new("indexed right distributivity", 3, move |t: &[Draw<C::Elem>]| {
            let (a, b, d) = (t[0].value(), t[1].value(), t[2].value());
            let (m, n) = (t[0].len, t[1].len);
            let l = c.mul_mn(&c.add(a, b), m, d, n);
            let r = c.add(&c.mul_mn(a, m, d, n), &c.mul_mn(b, m, d, n));
            Check::compare(c, &l, &r)
        }),
        Law::new("induced valuation splits", 4, move |t: &[Draw<C::Elem>]| {
            let ds: Vec<C::Elem> = t.iter().map(|d| d.value().clone()).collect();
            let whole = induced_val(c, &ds).expect("nonempty");
            let split = c.mul_mn(&induced_val(c, &ds[..2]).expect("nonempty"), 2, &induced_val(c, &ds[2..]).expect("nonempty"), 2);
            Check::compare(c, &whole, &split)
        }),
    ];
    run_laws("multi-hemiring", &laws, sampler, trials, &|d| render_draw(c, d))
}

/// Every choice of one value per distinct entry.
fn choices<E: Clone>(draws: &[Draw<E>]) -> Vec<Vec<E>> {
    let mut out: Vec<Vec<E>> = vec![Vec::new()];
    for d in draws {
        out = out
            .into_iter()
            .flat_map(|pick| {
                d.values.iter().map(move |v| {
                    let mut p = pick.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Regroups `prefix · block^ω` using the draws' cut flags. The block is
/// unrolled twice and always cut at its end, so the result stays periodic.
fn regroup_draws<C: MultiHemiring>(c: &C, prefix: &[Draw<C::Elem>], block: &[Draw<C::Elem>]) -> WeightedSeq<C::Elem> {
    let p: Vec<(u64, C::Elem)> = prefix.iter().map(Draw::entry).collect();
    let unrolled: Vec<&Draw<C::Elem>> = block.iter().chain(block.iter()).collect();
    let b: Vec<(u64, C::Elem)> = unrolled.iter().map(|d| d.entry()).collect();
    let gp = group_entries(c, &p, &|i| prefix[i].cut);
    let gb = group_entries(c, &b, &|i| unrolled[i].cut);
    WeightedSeq::new(gp, gb).expect("grouping keeps lengths positive")
}

pub fn omega_valuation_laws<C: OmegaValuation>(c: &C, sampler: &Sampler<Draw<C::Elem>>, trials: usize) -> LawReport {
    let laws: Vec<Law<'_, Draw<C::Elem>>> = vec![
        Law::new("mixed product zero", 1, move |t: &[Draw<C::Elem>]| {
            let (z, d, m) = (c.zero(), t[0].value(), t[0].len);
            let l = c.add(&c.mul_omega(&z, m, d), &c.mul_omega(d, m, &z));
            Check::compare(c, &l, &z)
        }),
        Law::new("mixed associativity", 3, move |t: &[Draw<C::Elem>]| {
            let (d, d1, d2) = (t[0].value(), t[1].value(), t[2].value());
            let (m, n) = (t[0].len, t[1].len);
            let l = c.mul_omega(d, m, &c.mul_omega(d1, n, d2));
            let r = c.mul_omega(&c.mul_mn(d, m, d1, n), m + n, d2);
            Check::compare(c, &l, &r)
        }),
        Law::new("mixed distributivity", 3, move |t: &[Draw<C::Elem>]| {
            let (d, m) = (t[0].value(), t[0].len);
            let sum = c.add(t[1].value(), t[2].value());
            let l1 = c.mul_omega(d, m, &sum);
            let r1 = c.add(&c.mul_omega(d, m, t[1].value()), &c.mul_omega(d, m, t[2].value()));
            let l2 = c.mul_omega(&sum, m, d);
            let r2 = c.add(&c.mul_omega(t[1].value(), m, d), &c.mul_omega(t[2].value(), m, d));
            let holds = c.equal(&l1, &r1) && c.equal(&l2, &r2);
            Check::values(holds, format!("{}; {}", c.render(&l1), c.render(&l2)), format!("{}; {}", c.render(&r1), c.render(&r2)))
        }),
        Law::new("omega valuation zero", 3, move |t: &[Draw<C::Elem>]| {
            let z = Draw { len: t[1].len, values: vec![c.zero()], cut: false };
            let v = c.val_exact(&seq_of(&t[..1], &[t[2].clone(), z]));
            Check::compare(c, &v, &c.zero())
        }),
        Law::new("omega unfolding", 4, move |t: &[Draw<C::Elem>]| {
            let mut holds = true;
            let (mut ls, mut rs) = (Vec::new(), Vec::new());
            for seq in [seq_of(&t[..1], &t[1..]), seq_of(&[], &t[..3])] {
                let (n1, d1) = seq.first().clone();
                let l = c.val_exact(&seq);
                let r = c.mul_omega(&d1, n1, &c.val_exact(&seq.tail()));
                holds &= c.equal(&l, &r);
                ls.push(c.render(&l));
                rs.push(c.render(&r));
            }
            Check::values(holds, ls.join("; "), rs.join("; "))
        }),
        Law::new("omega distributivity", 4, move |t: &[Draw<C::Elem>]| {
            let summed: Vec<Draw<C::Elem>> =
                t.iter().map(|d| Draw { len: d.len, values: vec![c.sum(&d.values)], cut: false }).collect();
            let l = c.val_exact(&seq_of(&summed[..2], &summed[2..]));
            let mut r = c.zero();
            for pick in choices(t) {
                let draws: Vec<Draw<C::Elem>> =
                    t.iter().zip(pick).map(|(d, v)| Draw { len: d.len, values: vec![v], cut: false }).collect();
                r = c.add(&r, &c.val_exact(&seq_of(&draws[..2], &draws[2..])));
            }
            Check::compare(c, &l, &r)
        }),
        Law::new("infinitary associativity", 5, move |t: &[Draw<C::Elem>]| {
            let l = c.val_exact(&regroup_draws(c, &t[..2], &t[2..]));
            let r = c.val_exact(&seq_of(&t[..2], &t[2..]));
            Check::compare(c, &l, &r)
        }),
    ];
    run_laws("omega-valuation", &laws, sampler, trials, &|d| render_draw(c, d))
}

/// The fixed regrouping witnesses: alternating `0, 1` paired up (exact), and
/// for the average instance the doubling sequence.
pub fn real_witness_laws(c: &RealValuation) -> LawReport {
    let mut report = LawReport::new("omega-valuation witnesses");
    let t = alternating_witness(c);
    report.trials += 1;
    if !c.equal(&t.first, &t.second) {
        report.failures.push(crate::algebra::LawFailure {
            law: "infinitary associativity (alternating witness)".into(),
            inputs: vec!["(1,0)(1,1) repeated, grouped in pairs".into()],
            lhs: c.render(&t.first),
            rhs: c.render(&t.second),
        });
    }
    if c.kind == ValuationKind::LimsupAvg {
        let t = counterexample_regroup_avg(DEFAULT_DOUBLING_BLOCKS);
        report.trials += 1;
        if (t.first - t.second).abs() > AVG_TOLERANCE {
            report.failures.push(crate::algebra::LawFailure {
                law: "infinitary associativity (doubling witness)".into(),
                inputs: vec![format!("doubling blocks of 0 and 1, {DEFAULT_DOUBLING_BLOCKS} blocks")],
                lhs: render_real(t.first),
                rhs: render_real(t.second),
            });
        }
    }
    report
}

/// Identities of a complete omega-hemiring, reading the product as `·_{1,1}`
/// and the infinite product as `val^ω` with unit lengths.
pub fn complete_omega_hemiring_laws<C: OmegaValuation>(c: &C, sampler: &Sampler<Draw<C::Elem>>, trials: usize) -> LawReport {
    let unit = |vals: &[C::Elem]| vals.iter().map(|v| (1u64, v.clone())).collect::<Vec<_>>();
    let product = move |prefix: &[C::Elem], block: &[C::Elem]| {
        c.val_exact(&WeightedSeq::new(unit(prefix), unit(block)).expect("nonempty block"))
    };
    let mul = move |a: &C::Elem, b: &C::Elem| c.mul_mn(a, 1, b, 1);
    let vals = |t: &[Draw<C::Elem>]| t.iter().map(|d| d.value().clone()).collect::<Vec<_>>();
    let laws: Vec<Law<'_, Draw<C::Elem>>> = vec![
        Law::new("product distributes over sums", 4, move |t: &[Draw<C::Elem>]| {
            let v = vals(t);
            let s = c.sum(&v[1..]);
            let l1 = mul(&v[0], &s);
            let r1 = c.sum(&v[1..].iter().map(|a| mul(&v[0], a)).collect::<Vec<_>>());
            let l2 = mul(&s, &v[0]);
            let r2 = c.sum(&v[1..].iter().map(|a| mul(a, &v[0])).collect::<Vec<_>>());
            let holds = c.equal(&l1, &r1) && c.equal(&l2, &r2);
            Check::values(holds, format!("{}; {}", c.render(&l1), c.render(&l2)), format!("{}; {}", c.render(&r1), c.render(&r2)))
        }),
        Law::new("infinite product unfolding", 4, move |t: &[Draw<C::Elem>]| {
            let v = vals(t);
            let l = mul(&v[0], &product(&v[1..2], &v[2..]));
            let r = product(&v[..2], &v[2..]);
            Check::compare(c, &l, &r)
        }),
        Law::new("infinite product grouping", 5, move |t: &[Draw<C::Elem>]| {
            let v = vals(t);
            let fold = |xs: &[C::Elem]| xs[1..].iter().fold(xs[0].clone(), |acc, x| mul(&acc, x));
            let cut_groups = |xs: &[C::Elem], ds: &[Draw<C::Elem>]| {
                let mut out = Vec::new();
                let mut start = 0;
                for i in 0..xs.len() {
                    if ds[i].cut || i + 1 == xs.len() {
                        out.push(fold(&xs[start..=i]));
                        start = i + 1;
                    }
                }
                out
            };
            let block2: Vec<C::Elem> = v[2..].iter().chain(&v[2..]).cloned().collect();
            let draws2: Vec<Draw<C::Elem>> = t[2..].iter().chain(&t[2..]).cloned().collect();
            let l = product(&cut_groups(&v[..2], &t[..2]), &cut_groups(&block2, &draws2));
            let r = product(&v[..2], &v[2..]);
            Check::compare(c, &l, &r)
        }),
        Law::new("infinite product distributivity", 4, move |t: &[Draw<C::Elem>]| {
            let sums: Vec<C::Elem> = t.iter().map(|d| c.sum(&d.values)).collect();
            let l = product(&sums[..2], &sums[2..]);
            let mut r = c.zero();
            for pick in choices(t) {
                r = c.add(&r, &product(&pick[..2], &pick[2..]));
            }
            Check::compare(c, &l, &r)
        }),
    ];
    run_laws("complete-omega-hemiring", &laws, sampler, trials, &|d| render_draw(c, d))
}

// ---------------------------------------------------------------------------
// Counterexamples

pub const AVG_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub depth: usize,
    pub first: f64,
    pub second: f64,
}

/// Partial values of two sides of an identity, per truncation depth, and
/// the final estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleTrace {
    pub name: String,
    pub first_label: String,
    pub second_label: String,
    pub points: Vec<TracePoint>,
    pub first: f64,
    pub second: f64,
}

impl CounterexampleTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// `(1,0)(1,1)` repeated: direct value against the pairwise regrouping.
pub fn alternating_witness(c: &RealValuation) -> CounterexampleTrace {
    let seq = WeightedSeq::periodic(vec![(1, 0.0), (1, 1.0)]).expect("valid");
    let grouped = WeightedSeq::periodic(vec![combine_group(c, &seq.block)]).expect("valid");
    let first = c.val_exact(&seq);
    let second = c.val_exact(&grouped);
    let points = (1..=8)
        .map(|depth| {
            let est = |s: &WeightedSeq<f64>, d: usize| match c.val_omega(s, TruncationStrategy::Window { depth: d }) {
                Ok(e) => e.value,
                Err(_) => c.val_exact(s),
            };
            TracePoint { depth, first: est(&seq, 2 * depth), second: est(&grouped, depth) }
        })
        .collect();
    CounterexampleTrace {
        name: "13.8c".into(),
        first_label: "direct".into(),
        second_label: "regrouped".into(),
        points,
        first,
        second,
    }
}

/// The liminf regrouping counterexample: direct value 0, regrouped value 1.
pub fn counterexample_regroup_liminf() -> CounterexampleTrace {
    alternating_witness(&RealValuation::liminf())
}

fn running_averages(entries: &[(u64, f64)]) -> Vec<f64> {
    let (mut len, mut total) = (0u64, 0.0);
    entries
        .iter()
        .map(|(n, d)| {
            len += n;
            total += *n as f64 * d;
            total / len as f64
        })
        .collect()
}

/// Doubling blocks `(1,0)^1 (1,1)^2 (1,0)^4 …` truncated to `blocks` blocks.
/// The direct estimate is the largest running average at a block end in the
/// second half; the regrouped one does the same on the sequence whose first
/// entry is the first block and whose later entries merge blocks in pairs.
pub fn counterexample_regroup_avg(blocks: usize) -> CounterexampleTrace {
    let c = RealValuation::limsup_avg();
    let blocks = blocks.clamp(2, 60);
    let block_entries: Vec<(u64, f64)> =
        (0..blocks).map(|j| combine_group(&c, &vec![(1u64, (j % 2) as f64); 1usize << j])).collect();
    let direct = running_averages(&block_entries);
    let mut grouped = vec![block_entries[0]];
    let mut j = 1;
    while j + 1 < blocks {
        grouped.push(combine_group(&c, &block_entries[j..j + 2]));
        j += 2;
    }
    let regrouped = running_averages(&grouped);
    let tail_max = |xs: &[f64]| xs[xs.len() / 2..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let points = (2..=blocks)
        .map(|b| {
            let groups = b.div_ceil(2).min(regrouped.len());
            TracePoint { depth: b, first: tail_max(&direct[..b]), second: tail_max(&regrouped[..groups]) }
        })
        .collect();
    CounterexampleTrace {
        name: "13.8e".into(),
        first_label: "direct".into(),
        second_label: "regrouped".into(),
        points,
        first: tail_max(&direct),
        second: tail_max(&regrouped),
    }
}

/// Block lengths for the product-omega counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// `nᵢ = 4^i`.
    Power4,
    /// `nᵢ = 2^{i(i+1)/2}`.
    Superexponential,
}

impl Schedule {
    pub fn length(&self, i: usize) -> Option<u64> {
        let exp = match self {
            Schedule::Power4 => 2 * i,
            Schedule::Superexponential => i * (i + 1) / 2,
        };
        1u64.checked_shl(u32::try_from(exp).ok()?).filter(|_| exp < 63)
    }
}

/// Closed form of the right-hand average at depth `k`.
pub fn product_omega_rhs_closed_form(schedule: Schedule, k: usize) -> Option<f64> {
    let s: u64 = (1..=k).map(|i| schedule.length(i)).sum::<Option<u64>>()?;
    let next = schedule.length(k + 1)? as f64;
    Some((s as f64 + next) / (2.0 * s as f64 + next))
}

/// `w = u₁v₁u₂v₂…` with `uᵢ = a^{nᵢ}` weighted 1 and `vᵢ = b^{nᵢ}` weighted 0.
/// The first side groups as `(uᵢvᵢ)`, the second as `u₁, (vᵢuᵢ₊₁)`; both are
/// averaged over the first `k` groups, for `k` up to `depth`.
pub fn counterexample_product_omega(depth: usize, schedule: Schedule) -> Result<CounterexampleTrace, ValuationError> {
    if depth < 4 {
        return Err(ValuationError::InvalidDepth(depth));
    }
    let c = RealValuation::limsup_avg();
    let n = |i: usize| schedule.length(i).ok_or(ValuationError::Overflow(i));
    let mut lhs_entries = Vec::new();
    let mut rhs_entries = vec![(n(1)?, 1.0)];
    let mut points = Vec::new();
    for k in 1..=depth {
        let (nk, nk1) = (n(k)?, n(k + 1)?);
        lhs_entries.push((nk + nk, c.mul_mn(&1.0, nk, &0.0, nk)));
        rhs_entries.push((nk + nk1, c.mul_mn(&0.0, nk, &1.0, nk1)));
        let first = *running_averages(&lhs_entries).last().expect("nonempty");
        let second = *running_averages(&rhs_entries).last().expect("nonempty");
        points.push(TracePoint { depth: k, first, second });
    }
    let last = points.last().expect("depth >= 4");
    Ok(CounterexampleTrace {
        name: "13.10".into(),
        first_label: "(rs)^w".into(),
        second_label: "r(sr)^w".into(),
        first: last.first,
        second: last.second,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_val_examples() {
        let avg = RealValuation::limsup_avg();
        assert!(real_eq(induced_val(&avg, &[1.0, 2.0, 3.0]).unwrap(), 2.0));
        let disc = RealValuation::disc(0.5).unwrap();
        assert!(real_eq(induced_val(&disc, &[1.0, 1.0, 1.0]).unwrap(), 1.75));
        assert_eq!(induced_val(&disc, &[3.5]).unwrap(), 3.5);
        assert_eq!(induced_val(&disc, &[]), Err(ValuationError::EmptySequence));
    }

    #[test]
    fn exact_limits() {
        let seq = WeightedSeq::new(vec![(1, 3.0)], vec![(1, 5.0)]).unwrap();
        assert_eq!(RealValuation::sup().val_exact(&seq), 5.0);
        let ones = WeightedSeq::periodic(vec![(1, 1.0)]).unwrap();
        assert!(real_eq(RealValuation::disc(0.5).unwrap().val_exact(&ones), 2.0));
        let with_zero = WeightedSeq::new(vec![(1, f64::NEG_INFINITY)], vec![(1, 1.0)]).unwrap();
        assert_eq!(RealValuation::limsup().val_exact(&with_zero), f64::NEG_INFINITY);
    }

    #[test]
    fn invalid_inputs() {
        assert!(RealValuation::disc(1.0).is_err());
        assert!(WeightedSeq::<f64>::new(vec![], vec![]).is_err());
        assert!(WeightedSeq::new(vec![(0, 1.0)], vec![(1, 1.0)]).is_err());
        assert!(make_valuation_instance("nosuch", &ValuationParams::default()).is_err());
    }

    #[test]
    fn disc_truncation_bound_decreases() {
        let c = RealValuation::disc(0.5).unwrap();
        let seq = WeightedSeq::new(vec![(2, 3.0)], vec![(1, 1.0), (3, 2.0)]).unwrap();
        let exact = c.val_exact(&seq);
        let mut last = f64::INFINITY;
        for depth in 0..30 {
            let e = c.val_omega(&seq, TruncationStrategy::Truncate { depth }).unwrap();
            let b = e.error_bound.unwrap();
            assert!(b <= last);
            assert!(exact - e.value <= b + 1e-12);
            last = b;
        }
    }

    #[test]
    fn lattice_product_is_meet() {
        let c = FromComplete { hemiring: Lattice::new(3).unwrap() };
        let seq = WeightedSeq::new(vec![(2, 0b111)], vec![(1, 0b011), (1, 0b110)]).unwrap();
        assert_eq!(c.val_exact(&seq), 0b010);
    }
}
