//! Weighted automata in matrix form `(α, M, β, k)` and run form
//! `(n, I, γ, F, k)`: behaviors, the product with a lasso, Kleene
//! compilation and state elimination.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, Monoid};
use crate::matrix::{Matrix, MatrixError, mat_omega_k, mat_plus_elim};
use crate::ratexpr::{Expr, ExprPair, FinExpr, OmegaExpr, eval_fin, eval_omega};
use crate::series::{
    Alphabet, Coefficients, Estimate, OmegaCoefficients, OmegaNode, OmegaSeries, OmegaWord, Relation, Series,
    SeriesError, SeriesHemiring, SeriesNode, SeriesPair, Word,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AutomataError {
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("the finitary behavior is not defined on the empty word")]
    EmptyWord,
    #[error("weight `{0}` is not a multiple of the letter weight")]
    NotExpressible(String),
    #[error("automaton JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition<E> {
    pub from: usize,
    pub to: usize,
    pub letter: char,
    pub weight: E,
}

/// `(α, M, β, k)` with `M` given by its letter transitions. States are
/// `0..n`; the repeated states are `0..k`. Initial and final vectors hold
/// multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixAutomaton<E> {
    pub n: usize,
    pub k: usize,
    pub alphabet: Alphabet,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub transitions: Vec<Transition<E>>,
}

impl<E: Clone> MatrixAutomaton<E> {
    pub fn new(
        n: usize,
        k: usize,
        alphabet: Alphabet,
        alpha: Vec<u64>,
        beta: Vec<u64>,
        transitions: Vec<Transition<E>>,
    ) -> Result<Self, AutomataError> {
        let invalid = |m: String| Err(AutomataError::Invalid(m));
        if k > n {
            return invalid(format!("k = {k} exceeds n = {n}"));
        }
        if alpha.len() != n || beta.len() != n {
            return invalid("initial and final vectors must have length n".into());
        }
        for t in &transitions {
            if t.from >= n || t.to >= n {
                return invalid(format!("transition {} -> {} out of range", t.from + 1, t.to + 1));
            }
            alphabet.check(&[t.letter]).map_err(|e| AutomataError::Invalid(e.to_string()))?;
        }
        Ok(MatrixAutomaton { n, k, alphabet, alpha, beta, transitions })
    }

    pub fn map_weights<F: Clone>(&self, phi: &dyn Fn(&E) -> F) -> MatrixAutomaton<F> {
        MatrixAutomaton {
            n: self.n,
            k: self.k,
            alphabet: self.alphabet.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition { from: t.from, to: t.to, letter: t.letter, weight: phi(&t.weight) })
                .collect(),
        }
    }

    /// State values after reading the single letter `a`.
    pub(crate) fn first_step<C: Coefficients<Elem = E>>(&self, c: &C, a: char) -> Vec<E> {
        let mut v = vec![c.zero(); self.n];
        for t in self.transitions.iter().filter(|t| t.letter == a && self.alpha[t.from] > 0) {
            v[t.to] = c.add(&v[t.to], &c.nfold(self.alpha[t.from], &t.weight));
        }
        v
    }

    /// Extends values for a prefix of length `len` by the letter `a`.
    pub(crate) fn step<C: Coefficients<Elem = E>>(&self, c: &C, v: &[E], a: char, len: u64) -> Vec<E> {
        let mut out = vec![c.zero(); self.n];
        for t in self.transitions.iter().filter(|t| t.letter == a) {
            if c.is_zero(&v[t.from]) {
                continue;
            }
            out[t.to] = c.add(&out[t.to], &c.mul_mn(&v[t.from], len, &t.weight, 1));
        }
        out
    }

    pub(crate) fn finish<C: Coefficients<Elem = E>>(&self, c: &C, v: &[E]) -> E {
        let mut acc = c.zero();
        for (p, x) in v.iter().enumerate() {
            if self.beta[p] > 0 {
                acc = c.add(&acc, &c.nfold(self.beta[p], x));
            }
        }
        acc
    }

    /// `M` as a matrix of polynomials in the letters.
    pub fn letter_matrix<C: Coefficients<Elem = E>>(&self, c: &C) -> Matrix<Series<E>> {
        let mut cells: Vec<std::collections::BTreeMap<Word, E>> = vec![Default::default(); self.n * self.n];
        for t in &self.transitions {
            let cell = &mut cells[t.from * self.n + t.to];
            let w = Word(vec![t.letter]);
            let v = match cell.get(&w) {
                Some(old) => c.add(old, &t.weight),
                None => t.weight.clone(),
            };
            cell.insert(w, v);
        }
        let entries = cells.into_iter().map(|m| if m.is_empty() { Series::zero() } else { Series::poly(m) }).collect();
        Matrix::new(self.n, self.n, entries).expect("n x n cells")
    }
}

// ---------------------------------------------------------------------------
// Finitary behavior

/// Coefficient of the finitary behavior at a nonempty word, by forward
/// dynamic programming over positions.
pub fn finitary_coeff<C: Coefficients>(c: &C, a: &MatrixAutomaton<C::Elem>, w: &[char]) -> Result<C::Elem, AutomataError> {
    if w.is_empty() {
        return Err(AutomataError::EmptyWord);
    }
    a.alphabet.check(w)?;
    let mut v = a.first_step(c, w[0]);
    for (i, &x) in w.iter().enumerate().skip(1) {
        v = a.step(c, &v, x, i as u64);
    }
    Ok(a.finish(c, &v))
}

/// The finitary behavior `αM⁺β` as a series, computed by matrix plus over
/// the letter matrix.
pub fn matrix_finitary_behavior<C: Coefficients + Clone>(c: &C, a: &MatrixAutomaton<C::Elem>) -> Result<Series<C::Elem>, AutomataError> {
    let h = SeriesHemiring::new(c.clone(), a.alphabet.clone());
    let mp = mat_plus_elim(&h, &a.letter_matrix(c))?;
    let mut acc = Series::zero();
    for i in 0..a.n {
        for j in 0..a.n {
            let m = a.alpha[i].saturating_mul(a.beta[j]);
            if m > 0 {
                acc = Series::sum(&acc, &Series::scalar(m, mp.get(i, j)));
            }
        }
    }
    Ok(acc)
}

/// The infinitary behavior `αM^{ω,k}` as an omega series.
pub fn matrix_infinitary_behavior<C>(c: &C, a: &MatrixAutomaton<C::Elem>) -> Result<OmegaSeries<C::Elem>, AutomataError>
where
    C: OmegaCoefficients + Clone,
    C::Elem: 'static,
{
    let pair = SeriesPair::new(c.clone(), a.alphabet.clone());
    let col = mat_omega_k(&pair, &a.letter_matrix(c), a.k)?;
    let mut acc = OmegaSeries::zero();
    for (i, v) in col.iter().enumerate() {
        acc = OmegaSeries::sum(&acc, &OmegaSeries::scalar(a.alpha[i], v));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Runs

/// A finite run: the visited states and the letters read.
#[derive(Debug, Clone, PartialEq)]
pub struct Run<E> {
    pub states: Vec<usize>,
    pub letters: Vec<char>,
    pub weights: Vec<E>,
}

/// Every run of `a` on `w` (not only successful ones). Exponential; for tests
/// on small inputs.
pub fn enumerate_runs<E: Clone>(a: &MatrixAutomaton<E>, w: &[char]) -> Vec<Run<E>> {
    let mut runs: Vec<Run<E>> =
        (0..a.n).map(|s| Run { states: vec![s], letters: Vec::new(), weights: Vec::new() }).collect();
    for &x in w {
        let mut next = Vec::new();
        for r in &runs {
            let last = *r.states.last().expect("runs start with a state");
            for t in a.transitions.iter().filter(|t| t.from == last && t.letter == x) {
                let mut r2 = r.clone();
                r2.states.push(t.to);
                r2.letters.push(x);
                r2.weights.push(t.weight.clone());
                next.push(r2);
            }
        }
        runs = next;
    }
    runs
}

/// `(n, I, γ, F, k)` with 0-1 initial and final sets.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAutomaton<E> {
    pub n: usize,
    pub k: usize,
    pub alphabet: Alphabet,
    pub initial: Vec<bool>,
    pub final_states: Vec<bool>,
    pub transitions: Vec<Transition<E>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviorPart {
    Finitary,
    Infinitary,
}

/// A run automaton contributing `multiplicity` times its behavior of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct RunComponent<E> {
    pub multiplicity: u64,
    pub part: BehaviorPart,
    pub automaton: RunAutomaton<E>,
}

pub fn to_matrix_automaton<E: Clone>(b: &RunAutomaton<E>) -> MatrixAutomaton<E> {
    MatrixAutomaton {
        n: b.n,
        k: b.k,
        alphabet: b.alphabet.clone(),
        alpha: b.initial.iter().map(|&x| u64::from(x)).collect(),
        beta: b.final_states.iter().map(|&x| u64::from(x)).collect(),
        transitions: b.transitions.clone(),
    }
}

/// Splits a matrix automaton into run automata with singleton initial and
/// final sets: `αᵢβⱼ` copies of `({i}, {j}, k = 0)` carry the finitary
/// behavior, `αᵢ` copies of `({i}, ∅, k)` the infinitary one.
pub fn to_run_automata<E: Clone>(a: &MatrixAutomaton<E>) -> Vec<RunComponent<E>> {
    let single = |i: usize| (0..a.n).map(|s| s == i).collect::<Vec<bool>>();
    let mut out = Vec::new();
    for i in (0..a.n).filter(|&i| a.alpha[i] > 0) {
        for j in (0..a.n).filter(|&j| a.beta[j] > 0) {
            out.push(RunComponent {
                multiplicity: a.alpha[i] * a.beta[j],
                part: BehaviorPart::Finitary,
                automaton: RunAutomaton {
                    n: a.n,
                    k: 0,
                    alphabet: a.alphabet.clone(),
                    initial: single(i),
                    final_states: single(j),
                    transitions: a.transitions.clone(),
                },
            });
        }
        out.push(RunComponent {
            multiplicity: a.alpha[i],
            part: BehaviorPart::Infinitary,
            automaton: RunAutomaton {
                n: a.n,
                k: a.k,
                alphabet: a.alphabet.clone(),
                initial: single(i),
                final_states: vec![false; a.n],
                transitions: a.transitions.clone(),
            },
        });
    }
    out
}

pub fn run_finitary_coeff<C: Coefficients>(c: &C, parts: &[RunComponent<C::Elem>], w: &[char]) -> Result<C::Elem, AutomataError> {
    let mut acc = c.zero();
    for p in parts.iter().filter(|p| p.part == BehaviorPart::Finitary) {
        let v = finitary_coeff(c, &to_matrix_automaton(&p.automaton), w)?;
        acc = c.add(&acc, &c.nfold(p.multiplicity, &v));
    }
    Ok(acc)
}

pub fn run_infinitary_coeff<C: ProductAnalysis>(
    c: &C,
    parts: &[RunComponent<C::Elem>],
    w: &OmegaWord,
) -> Result<Estimate<C::Elem>, AutomataError> {
    let mut acc = c.zero();
    let mut bound: Option<f64> = None;
    for p in parts.iter().filter(|p| p.part == BehaviorPart::Infinitary) {
        let e = infinitary_coeff(c, &to_matrix_automaton(&p.automaton), w)?;
        acc = c.add(&acc, &c.nfold(p.multiplicity, &e.value));
        if let Some(b) = e.error_bound {
            bound = Some(bound.map_or(b, |x| x.max(b)));
        }
    }
    Ok(Estimate { value: acc, error_bound: bound })
}

// ---------------------------------------------------------------------------
// Product with a lasso

/// The product of an automaton with the lasso graph of `u·v^ω`. Node
/// `s·positions + p` pairs state `s` with lasso position `p`; edges read the
/// letter at `p`.
#[derive(Debug, Clone)]
pub struct ProductGraph<E> {
    pub states: usize,
    pub positions: usize,
    pub k: usize,
    pub edges: Vec<Vec<(usize, E)>>,
    /// Start nodes with their initial multiplicities.
    pub starts: Vec<(usize, u64)>,
}

impl<E: Clone> ProductGraph<E> {
    pub fn build<C: Monoid<Elem = E>>(c: &C, a: &MatrixAutomaton<E>, w: &OmegaWord) -> Self {
        let positions = w.positions();
        let mut edges = vec![Vec::new(); a.n * positions];
        for t in &a.transitions {
            if c.is_zero(&t.weight) {
                continue;
            }
            for p in (0..positions).filter(|&p| w.letter_at(p) == t.letter) {
                edges[t.from * positions + p].push((t.to * positions + w.next(p), t.weight.clone()));
            }
        }
        let starts = (0..a.n).filter(|&s| a.alpha[s] > 0).map(|s| (s * positions, a.alpha[s])).collect();
        ProductGraph { states: a.n, positions, k: a.k, edges, starts }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_repeated(&self, node: usize) -> bool {
        node / self.positions < self.k
    }

    /// Strongly connected components (iterative Tarjan). Returns the component
    /// of each node and the member lists.
    pub fn sccs(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        sccs_of(self.len(), |v| self.edges[v].iter().map(|e| e.0))
    }

    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue: VecDeque<usize> = sources.iter().copied().collect();
        for &s in sources {
            seen[s] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.edges[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Nodes from which some node in `targets` is reachable.
    pub fn can_reach(&self, targets: &[bool]) -> Vec<bool> {
        let mut rev = vec![Vec::new(); self.len()];
        for (v, es) in self.edges.iter().enumerate() {
            for &(u, _) in es {
                rev[u].push(v);
            }
        }
        let mut seen = targets.to_vec();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&v| targets[v]).collect();
        while let Some(v) = queue.pop_front() {
            for &u in &rev[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Components that contain a cycle through a repeated node, restricted to
    /// edges accepted by `keep`.
    pub fn accepting_components(&self, keep: &dyn Fn(&E) -> bool) -> Vec<Vec<usize>> {
        let (_, members) = sccs_of(self.len(), |v| self.edges[v].iter().filter(|e| keep(&e.1)).map(|e| e.0));
        members
            .into_iter()
            .filter(|m| {
                let cyclic = m.len() > 1 || self.edges[m[0]].iter().any(|(u, w)| *u == m[0] && keep(w));
                cyclic && m.iter().any(|&v| self.is_repeated(v))
            })
            .collect()
    }

    /// Nodes from which an accepting infinite path exists.
    pub fn good_nodes(&self) -> Vec<bool> {
        let mut in_accepting = vec![false; self.len()];
        for m in self.accepting_components(&|_| true) {
            for v in m {
                in_accepting[v] = true;
            }
        }
        self.can_reach(&in_accepting)
    }

    pub fn start_nodes(&self) -> Vec<usize> {
        self.starts.iter().map(|s| s.0).collect()
    }
}

fn sccs_of<I: Iterator<Item = usize>>(n: usize, succ: impl Fn(usize) -> I) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root).collect(), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, next, i)) = call.last_mut() {
            let v = *v;
            if *i < next.len() {
                let u = next[*i];
                *i += 1;
                if index[u] == UNSEEN {
                    index[u] = counter;
                    low[u] = counter;
                    counter += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    call.push((u, succ(u).collect(), 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = members.len();
                    let mut m = Vec::new();
                    loop {
                        let x = stack.pop().expect("component on stack");
                        on_stack[x] = false;
                        comp[x] = id;
                        m.push(x);
                        if x == v {
                            break;
                        }
                    }
                    members.push(m);
                }
            }
        }
    }
    (comp, members)
}

/// Instance-specific evaluation of the infinitary behavior on a product graph.
pub trait ProductAnalysis: Coefficients {
    fn analyze(&self, g: &ProductGraph<Self::Elem>) -> Result<Estimate<Self::Elem>, SeriesError>;
}

/// Coefficient of the infinitary behavior at `w`.
pub fn infinitary_coeff<C: ProductAnalysis>(
    c: &C,
    a: &MatrixAutomaton<C::Elem>,
    w: &OmegaWord,
) -> Result<Estimate<C::Elem>, AutomataError> {
    a.alphabet.check(&w.letters())?;
    if a.k == 0 {
        return Ok(Estimate::exact(c.zero()));
    }
    Ok(c.analyze(&ProductGraph::build(c, a, w))?)
}

/// Omega coefficients of series by compiling to an automaton.
pub fn omega_coeff_by_compilation<C: ProductAnalysis>(
    c: &C,
    v: &OmegaSeries<C::Elem>,
    w: &OmegaWord,
) -> Result<Estimate<C::Elem>, SeriesError> {
    let alphabet = Alphabet::new(&w.letters());
    let a = compile_omega_series(c, v, &alphabet).map_err(|e| SeriesError::NotCompilable(e.to_string()))?;
    if a.k == 0 {
        return Ok(Estimate::exact(c.zero()));
    }
    c.analyze(&ProductGraph::build(c, &a, w))
}

impl ProductAnalysis for crate::instances::Bool {
    /// Büchi acceptance: a start node reaches a cycle through a repeated state.
    fn analyze(&self, g: &ProductGraph<bool>) -> Result<Estimate<bool>, SeriesError> {
        let good = g.good_nodes();
        Ok(Estimate::exact(g.starts.iter().any(|&(s, _)| good[s])))
    }
}

impl MatrixAutomaton<bool> {
    /// Pairs of lasso positions `(p, q)` such that a nonempty factor starting
    /// at `p` and ending before `q` is accepted.
    pub(crate) fn lasso_relation(&self, w: &OmegaWord) -> Relation {
        let positions = w.positions();
        let mut r = Relation::empty(positions);
        let g = ProductGraph::build(&crate::instances::Bool, self, w);
        for p in 0..positions {
            let sources: Vec<usize> = (0..self.n).filter(|&s| self.alpha[s] > 0).map(|s| s * positions + p).collect();
            let firsts: Vec<usize> = sources.iter().flat_map(|&v| g.edges[v].iter().map(|e| e.0)).collect();
            let seen = g.reachable_from(&firsts);
            for (v, &hit) in seen.iter().enumerate() {
                if hit && self.beta[v / positions] > 0 {
                    r.rows[p][v % positions] = true;
                }
            }
        }
        r
    }

    /// Lasso positions from which the automaton accepts the suffix.
    pub(crate) fn lasso_accepting_positions(&self, w: &OmegaWord) -> Vec<bool> {
        let positions = w.positions();
        let g = ProductGraph::build(&crate::instances::Bool, self, w);
        let good = g.good_nodes();
        (0..positions).map(|p| (0..self.n).any(|s| self.alpha[s] > 0 && good[s * positions + p])).collect()
    }
}

// ---------------------------------------------------------------------------
// Compilation

fn empty_automaton<E>(alphabet: &Alphabet) -> MatrixAutomaton<E> {
    MatrixAutomaton { n: 0, k: 0, alphabet: alphabet.clone(), alpha: Vec::new(), beta: Vec::new(), transitions: Vec::new() }
}

/// Places the states of `parts` side by side, listing every part's repeated
/// states first so that they form the prefix `0..Σk`.
fn juxtapose<E: Clone>(alphabet: &Alphabet, parts: &[&MatrixAutomaton<E>]) -> (MatrixAutomaton<E>, Vec<Vec<usize>>) {
    let k: usize = parts.iter().map(|a| a.k).sum();
    let mut maps = Vec::new();
    let (mut next_rep, mut next_rest) = (0, k);
    for a in parts {
        let map: Vec<usize> = (0..a.n)
            .map(|s| {
                if s < a.k {
                    next_rep += 1;
                    next_rep - 1
                } else {
                    next_rest += 1;
                    next_rest - 1
                }
            })
            .collect();
        maps.push(map);
    }
    let n = next_rest;
    let mut out = MatrixAutomaton {
        n,
        k,
        alphabet: alphabet.clone(),
        alpha: vec![0; n],
        beta: vec![0; n],
        transitions: Vec::new(),
    };
    for (a, map) in parts.iter().zip(&maps) {
        for s in 0..a.n {
            out.alpha[map[s]] = a.alpha[s];
            out.beta[map[s]] = a.beta[s];
        }
        out.transitions.extend(a.transitions.iter().map(|t| Transition {
            from: map[t.from],
            to: map[t.to],
            letter: t.letter,
            weight: t.weight.clone(),
        }));
    }
    (out, maps)
}

fn aut_sum<E: Clone>(alphabet: &Alphabet, a: &MatrixAutomaton<E>, b: &MatrixAutomaton<E>) -> MatrixAutomaton<E> {
    juxtapose(alphabet, &[a, b]).0
}

/// `[[M₁, M₁β₁α₂], [0, M₂]]` with `α = (α₁, 0)` and `β = (0, β₂)`.
fn aut_concat<C: Coefficients>(
    c: &C,
    alphabet: &Alphabet,
    a: &MatrixAutomaton<C::Elem>,
    b: &MatrixAutomaton<C::Elem>,
) -> MatrixAutomaton<C::Elem> {
    let (mut out, maps) = juxtapose(alphabet, &[a, b]);
    let (ma, mb) = (&maps[0], &maps[1]);
    for s in 0..a.n {
        out.beta[ma[s]] = 0;
    }
    for s in 0..b.n {
        out.alpha[mb[s]] = 0;
    }
    for t in a.transitions.iter().filter(|t| a.beta[t.to] > 0) {
        for j in (0..b.n).filter(|&j| b.alpha[j] > 0) {
            out.transitions.push(Transition {
                from: ma[t.from],
                to: mb[j],
                letter: t.letter,
                weight: c.nfold(a.beta[t.to] * b.alpha[j], &t.weight),
            });
        }
    }
    out
}

/// `M + Mβα`.
fn aut_plus<C: Coefficients>(c: &C, a: &MatrixAutomaton<C::Elem>) -> MatrixAutomaton<C::Elem> {
    let mut out = a.clone();
    for t in a.transitions.iter().filter(|t| a.beta[t.to] > 0) {
        for j in (0..a.n).filter(|&j| a.alpha[j] > 0) {
            out.transitions.push(Transition {
                from: t.from,
                to: j,
                letter: t.letter,
                weight: c.nfold(a.beta[t.to] * a.alpha[j], &t.weight),
            });
        }
    }
    out
}

/// A fresh repeated state `0` in front of `a`:
/// `[[αMβ, αM], [Mβ, M]]` with `α = e₁`, `β = 0`, `k = 1`.
fn aut_omega<C: Coefficients>(c: &C, a: &MatrixAutomaton<C::Elem>) -> MatrixAutomaton<C::Elem> {
    let n = a.n + 1;
    let mut out = MatrixAutomaton {
        n,
        k: 1,
        alphabet: a.alphabet.clone(),
        alpha: vec![0; n],
        beta: vec![0; n],
        transitions: Vec::new(),
    };
    out.alpha[0] = 1;
    for t in &a.transitions {
        let (from, to) = (t.from + 1, t.to + 1);
        out.transitions.push(Transition { from, to, letter: t.letter, weight: t.weight.clone() });
        let (ai, bj) = (a.alpha[t.from], a.beta[t.to]);
        if ai > 0 {
            out.transitions.push(Transition { from: 0, to, letter: t.letter, weight: c.nfold(ai, &t.weight) });
        }
        if bj > 0 {
            out.transitions.push(Transition { from, to: 0, letter: t.letter, weight: c.nfold(bj, &t.weight) });
        }
        if ai > 0 && bj > 0 {
            out.transitions.push(Transition { from: 0, to: 0, letter: t.letter, weight: c.nfold(ai * bj, &t.weight) });
        }
    }
    out
}

fn aut_monomial<C: Coefficients>(c: &C, alphabet: &Alphabet, w: &Word, coef: &C::Elem) -> Result<MatrixAutomaton<C::Elem>, AutomataError> {
    if w.is_empty() {
        return Err(SeriesError::NotProper.into());
    }
    let weights = c
        .spread(coef, w.len())
        .ok_or_else(|| SeriesError::NotCompilable(format!("monomial {w} needs a unit")))?;
    let n = w.len() + 1;
    let mut alpha = vec![0; n];
    let mut beta = vec![0; n];
    alpha[0] = 1;
    beta[n - 1] = 1;
    let transitions = w
        .letters()
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(i, (&letter, weight))| Transition { from: i, to: i + 1, letter, weight })
        .collect();
    MatrixAutomaton::new(n, 0, alphabet.clone(), alpha, beta, transitions)
}

/// Automaton whose finitary behavior is `f`.
pub fn compile_series<C: Coefficients>(c: &C, f: &Series<C::Elem>, alphabet: &Alphabet) -> Result<MatrixAutomaton<C::Elem>, AutomataError> {
    Ok(match f.node() {
        SeriesNode::Zero => empty_automaton(alphabet),
        SeriesNode::Poly(terms) => {
            let mut acc = empty_automaton(alphabet);
            for (w, coef) in terms {
                if c.is_zero(coef) || alphabet.check(w.letters()).is_err() {
                    continue;
                }
                acc = aut_sum(alphabet, &acc, &aut_monomial(c, alphabet, w, coef)?);
            }
            acc
        }
        SeriesNode::Sum(g, h) => aut_sum(alphabet, &compile_series(c, g, alphabet)?, &compile_series(c, h, alphabet)?),
        SeriesNode::Prod(g, h) => {
            if !g.is_proper() || !h.is_proper() {
                return Err(SeriesError::NotProper.into());
            }
            aut_concat(c, alphabet, &compile_series(c, g, alphabet)?, &compile_series(c, h, alphabet)?)
        }
        SeriesNode::Plus(g) => aut_plus(c, &compile_series(c, g, alphabet)?),
        SeriesNode::Scalar(m, g) => {
            let mut a = compile_series(c, g, alphabet)?;
            a.alpha.iter_mut().for_each(|x| *x = x.saturating_mul(*m));
            a
        }
        SeriesNode::Automaton(a) => {
            let mut a = (**a).clone();
            a.alphabet = alphabet.clone();
            a.k = 0;
            a
        }
    })
}

/// Automaton whose infinitary behavior is `v`.
pub fn compile_omega_series<C: Coefficients>(
    c: &C,
    v: &OmegaSeries<C::Elem>,
    alphabet: &Alphabet,
) -> Result<MatrixAutomaton<C::Elem>, AutomataError> {
    Ok(match v.node() {
        OmegaNode::Zero => empty_automaton(alphabet),
        OmegaNode::OmegaPow(f) => aut_omega(c, &compile_series(c, f, alphabet)?),
        OmegaNode::Act(f, u) => aut_concat(c, alphabet, &compile_series(c, f, alphabet)?, &compile_omega_series(c, u, alphabet)?),
        OmegaNode::Sum(x, y) => aut_sum(alphabet, &compile_omega_series(c, x, alphabet)?, &compile_omega_series(c, y, alphabet)?),
        OmegaNode::Scalar(m, u) => {
            let mut a = compile_omega_series(c, u, alphabet)?;
            a.alpha.iter_mut().for_each(|x| *x = x.saturating_mul(*m));
            a
        }
        OmegaNode::Automaton(a) => {
            let mut a = (**a).clone();
            a.alphabet = alphabet.clone();
            a
        }
    })
}

/// Compiles a finitary or omega expression. Finitary automata have `k = 0`;
/// omega automata have zero final vector.
pub fn compile<C: Coefficients>(c: &C, e: &Expr, alphabet: &Alphabet) -> Result<MatrixAutomaton<C::Elem>, AutomataError> {
    match e {
        Expr::Fin(f) => compile_series(c, &eval_fin(c, f), alphabet),
        Expr::Omega(v) => compile_omega_series(c, &eval_omega(c, v), alphabet),
    }
}

/// Expressions for `αM⁺β` and `αM^{ω,k}`, obtained by running the matrix
/// plus and restricted omega over expressions. Weights must be multiples of
/// the letter weight.
pub fn eliminate<C: Coefficients>(c: &C, a: &MatrixAutomaton<C::Elem>) -> Result<(Arc<FinExpr>, Arc<OmegaExpr>), AutomataError> {
    let first = *a.alphabet.letters().first().ok_or_else(|| AutomataError::Invalid("empty alphabet".into()))?;
    let pair = ExprPair::new(first);
    let h = &pair.hemiring;
    let mut m = Matrix::filled(a.n, a.n, h.zero());
    for t in &a.transitions {
        let mult = c.letter_multiple(&t.weight).ok_or_else(|| AutomataError::NotExpressible(c.render(&t.weight)))?;
        let term = h.nfold(mult, &FinExpr::letter(t.letter));
        let cell = h.add(m.get(t.from, t.to), &term);
        m.set(t.from, t.to, cell);
    }
    let mp = mat_plus_elim(h, &m)?;
    let mut fin = h.zero();
    for i in 0..a.n {
        for j in 0..a.n {
            let mult = a.alpha[i].saturating_mul(a.beta[j]);
            if mult > 0 {
                fin = h.add(&fin, &h.nfold(mult, mp.get(i, j)));
            }
        }
    }
    let col = mat_omega_k(&pair, &m, a.k)?;
    let module = &pair.module;
    let mut omega = module.zero();
    for (i, v) in col.iter().enumerate() {
        if a.alpha[i] > 0 {
            omega = module.add(&omega, &module.nfold(a.alpha[i], v));
        }
    }
    Ok((fin, omega))
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub from: usize,
    pub to: usize,
    pub letter: String,
    pub weight: String,
}

/// Serialized automaton. State indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub n: usize,
    pub k: usize,
    pub alphabet: Vec<String>,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub transitions: Vec<TransitionJson>,
}

pub fn automaton_to_json<C: Monoid>(c: &C, a: &MatrixAutomaton<C::Elem>) -> AutomatonJson {
    AutomatonJson {
        n: a.n,
        k: a.k,
        alphabet: a.alphabet.letters().iter().map(|x| x.to_string()).collect(),
        alpha: a.alpha.iter().map(u64::to_string).collect(),
        beta: a.beta.iter().map(u64::to_string).collect(),
        transitions: a
            .transitions
            .iter()
            .map(|t| TransitionJson {
                from: t.from + 1,
                to: t.to + 1,
                letter: t.letter.to_string(),
                weight: c.render(&t.weight),
            })
            .collect(),
    }
}

pub fn automaton_from_json<C: Monoid>(c: &C, j: &AutomatonJson) -> Result<MatrixAutomaton<C::Elem>, AutomataError>
where
    C::Elem: Clone,
{
    let json_err = |m: String| AutomataError::Json(m);
    let single = |s: &str| -> Result<char, AutomataError> {
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(ch), None) => Ok(ch),
            _ => Err(json_err(format!("`{s}` is not a single letter"))),
        }
    };
    let letters = j.alphabet.iter().map(|s| single(s)).collect::<Result<Vec<_>, _>>()?;
    let count = |s: &String| s.trim().parse::<u64>().map_err(|_| json_err(format!("`{s}` is not a natural number")));
    let alpha = j.alpha.iter().map(count).collect::<Result<Vec<_>, _>>()?;
    let beta = j.beta.iter().map(count).collect::<Result<Vec<_>, _>>()?;
    let mut transitions = Vec::new();
    for t in &j.transitions {
        if t.from == 0 || t.to == 0 {
            return Err(json_err("state indices are 1-based".into()));
        }
        transitions.push(Transition {
            from: t.from - 1,
            to: t.to - 1,
            letter: single(&t.letter)?,
            weight: c.parse(&t.weight)?,
        });
    }
    MatrixAutomaton::new(j.n, j.k, Alphabet::new(&letters), alpha, beta, transitions)
}

pub fn parse_automaton<C: Monoid>(c: &C, text: &str) -> Result<MatrixAutomaton<C::Elem>, AutomataError>
where
    C::Elem: Clone,
{
    let j: AutomatonJson = serde_json::from_str(text).map_err(|e| AutomataError::Json(e.to_string()))?;
    automaton_from_json(c, &j)
}
