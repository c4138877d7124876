//! Power series over finite and ultimately periodic words.
//!
//! A [`Series`] is an immutable DAG of constructors (polynomials, sums,
//! Cauchy products, plus, scalar multiples, automata). Coefficients are
//! computed on demand: either for a single word through a table over its
//! factors, or for every word up to a length bound at once.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    ConwayHemiring, Hemiring, LawFailure, LawReport, Monoid, MultiHemiring, PartialConwaySemiring, Sampler,
    Semiring,
};
use crate::automata::MatrixAutomaton;

pub const DEFAULT_BOUND: usize = 8;
pub const DEFAULT_LASSO_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("letter `{0}` is not in the alphabet")]
    ForeignLetter(char),
    #[error("series is not proper")]
    NotProper,
    #[error("the finitary behavior is not defined on the empty word")]
    EmptyWord,
    #[error("omega word has an empty period")]
    EmptyPeriod,
    #[error("cannot parse word `{0}`")]
    Parse(String),
    #[error("omega coefficients unavailable: {0}")]
    NoOmega(String),
    #[error("series cannot be compiled: {0}")]
    NotCompilable(String),
}

// ---------------------------------------------------------------------------
// Words

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<char>);

impl Word {
    pub fn new(letters: &str) -> Word {
        Word(letters.chars().collect())
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    /// Parses a bare letter string. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Word, SeriesError> {
        let letters: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if letters.iter().all(|c| c.is_ascii_lowercase()) {
            Ok(Word(letters))
        } else {
            Err(SeriesError::Parse(text.to_string()))
        }
    }
}

impl Borrow<[char]> for Word {
    fn borrow(&self) -> &[char] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            self.0.iter().try_for_each(|c| write!(f, "{c}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<char>);

impl Alphabet {
    pub fn new(letters: &[char]) -> Alphabet {
        let set: BTreeSet<char> = letters.iter().copied().collect();
        Alphabet(set.into_iter().collect())
    }

    pub fn from_str(letters: &str) -> Alphabet {
        Alphabet::new(&letters.chars().collect::<Vec<_>>())
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, c: char) -> Option<usize> {
        self.0.binary_search(&c).ok()
    }

    pub fn check(&self, w: &[char]) -> Result<(), SeriesError> {
        match w.iter().find(|c| self.index(**c).is_none()) {
            Some(c) => Err(SeriesError::ForeignLetter(*c)),
            None => Ok(()),
        }
    }

    /// All words of length at most `bound`, in shortlex order.
    pub fn words_upto(&self, bound: usize) -> Vec<Word> {
        let idx = WordIndex::new(self.clone(), bound);
        (0..idx.total()).map(|i| idx.word(i)).collect()
    }
}

/// Shortlex numbering of all words of length at most `bound`.
#[derive(Debug, Clone)]
pub struct WordIndex {
    alphabet: Alphabet,
    bound: usize,
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

impl WordIndex {
    pub fn new(alphabet: Alphabet, bound: usize) -> WordIndex {
        let k = alphabet.len();
        let mut powers = vec![1usize];
        for _ in 0..bound {
            powers.push(powers.last().unwrap() * k);
        }
        let mut offsets = vec![0usize];
        for len in 0..=bound {
            offsets.push(offsets[len] + powers[len]);
        }
        WordIndex { alphabet, bound, offsets, powers }
    }

    pub fn total(&self) -> usize {
        self.offsets[self.bound + 1]
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn split(&self, i: usize) -> (usize, usize) {
        let len = self.offsets.partition_point(|&o| o <= i) - 1;
        (len, i - self.offsets[len])
    }

    pub fn len_of(&self, i: usize) -> usize {
        self.split(i).0
    }

    pub fn word(&self, i: usize) -> Word {
        let (len, mut num) = self.split(i);
        let k = self.alphabet.len();
        let mut letters = vec![' '; len];
        for slot in letters.iter_mut().rev() {
            *slot = self.alphabet.0[num % k];
            num /= k;
        }
        Word(letters)
    }

    pub fn index_of(&self, w: &[char]) -> Option<usize> {
        if w.len() > self.bound {
            return None;
        }
        let mut num = 0;
        for c in w {
            num = num * self.alphabet.len() + self.alphabet.index(*c)?;
        }
        Some(self.offsets[w.len()] + num)
    }

    /// Index of the length-`p` prefix of the word with index `i`.
    fn prefix(&self, i: usize, p: usize) -> usize {
        let (len, num) = self.split(i);
        self.offsets[p] + num / self.powers[len - p]
    }

    /// Index of the length-`s` suffix of the word with index `i`.
    fn suffix(&self, i: usize, s: usize) -> usize {
        let (_, num) = self.split(i);
        self.offsets[s] + num % self.powers[s]
    }

    fn last_letter(&self, i: usize) -> usize {
        self.split(i).1 % self.alphabet.len()
    }
}

/// An ultimately periodic word `u·v^ω`, kept in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaWord {
    prefix: Word,
    period: Word,
}

impl OmegaWord {
    pub fn new(prefix: Word, period: Word) -> Result<OmegaWord, SeriesError> {
        if period.is_empty() {
            return Err(SeriesError::EmptyPeriod);
        }
        let mut v = period.0;
        let n = v.len();
        if let Some(d) = (1..n).find(|d| n % d == 0 && (0..n).all(|i| v[i] == v[i % d])) {
            v.truncate(d);
        }
        let mut u = prefix.0;
        while let (Some(&a), Some(&b)) = (u.last(), v.last()) {
            if a != b {
                break;
            }
            u.pop();
            v.rotate_right(1);
        }
        Ok(OmegaWord { prefix: Word(u), period: Word(v) })
    }

    /// Parses `u(v)^w` or `ua^w` (the last letter before `^w` is the period).
    pub fn parse(text: &str) -> Result<OmegaWord, SeriesError> {
        let err = || SeriesError::Parse(text.to_string());
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_suffix("^w").ok_or_else(err)?;
        let (u, v) = if let Some(inner) = body.strip_suffix(')') {
            let open = inner.rfind('(').ok_or_else(err)?;
            (&inner[..open], &inner[open + 1..])
        } else {
            let cut = body.char_indices().last().ok_or_else(err)?.0;
            (&body[..cut], &body[cut..])
        };
        let u = Word::parse(u).map_err(|_| err())?;
        let v = Word::parse(v).map_err(|_| err())?;
        OmegaWord::new(u, v)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// Number of lasso positions `|u| + |v|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn letter_at(&self, p: usize) -> char {
        if p < self.prefix.len() {
            self.prefix.0[p]
        } else {
            self.period.0[p - self.prefix.len()]
        }
    }

    pub fn next(&self, p: usize) -> usize {
        if p + 1 < self.positions() {
            p + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn letters(&self) -> Vec<char> {
        let mut all = self.prefix.0.clone();
        all.extend(&self.period.0);
        all
    }

    /// All canonical lassos with `|u| ≤ max_prefix` and `1 ≤ |v| ≤ max_period`.
    pub fn enumerate(alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Vec<OmegaWord> {
        let us = alphabet.words_upto(max_prefix);
        let vs: Vec<Word> = alphabet.words_upto(max_period).into_iter().filter(|w| !w.is_empty()).collect();
        let mut set = BTreeSet::new();
        for u in &us {
            for v in &vs {
                set.insert(OmegaWord::new(u.clone(), v.clone()).expect("period nonempty"));
            }
        }
        set.into_iter().collect()
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.prefix.0 {
            write!(f, "{c}")?;
        }
        write!(f, "(")?;
        for c in &self.period.0 {
            write!(f, "{c}")?;
        }
        write!(f, ")^w")
    }
}

// ---------------------------------------------------------------------------
// Coefficient structures

/// What a coefficient structure must provide to serve as series coefficients.
pub trait Coefficients: MultiHemiring {
    /// Weight carried by a bare letter.
    fn letter_weight(&self) -> Self::Elem;

    /// Multiplicative unit, needed for the empty word and multi-letter monomials.
    fn unit_weight(&self) -> Option<Self::Elem> {
        None
    }

    /// Writes a weight as an n-fold multiple of the letter weight, if possible.
    fn letter_multiple(&self, w: &Self::Elem) -> Option<u64>;

    /// Per-letter weights whose induced valuation is `w`, for a monomial of
    /// length `len ≥ 1`.
    fn spread(&self, w: &Self::Elem, len: usize) -> Option<Vec<Self::Elem>> {
        if len == 1 {
            return Some(vec![w.clone()]);
        }
        let unit = self.unit_weight()?;
        let mut out = vec![unit; len];
        out[0] = w.clone();
        Some(out)
    }
}

/// Estimate of an infinitary value. `error_bound` is present for truncated
/// evaluations and absent for exact ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<E> {
    pub value: E,
    pub error_bound: Option<f64>,
}

impl<E> Estimate<E> {
    pub fn exact(value: E) -> Self {
        Estimate { value, error_bound: None }
    }
}

/// Coefficient structures that can answer omega-coefficient queries.
pub trait OmegaCoefficients: Coefficients {
    fn omega_coeff(&self, f: &OmegaSeries<Self::Elem>, w: &OmegaWord) -> Result<Estimate<Self::Elem>, SeriesError>;
}

// ---------------------------------------------------------------------------
// Series

#[derive(Debug)]
pub enum SeriesNode<E> {
    Zero,
    Poly(BTreeMap<Word, E>),
    Sum(Series<E>, Series<E>),
    Prod(Series<E>, Series<E>),
    Plus(Series<E>),
    Scalar(u64, Series<E>),
    Automaton(Arc<MatrixAutomaton<E>>),
}

#[derive(Debug)]
pub struct Series<E> {
    node: Arc<SeriesNode<E>>,
    proper: bool,
}

impl<E> Clone for Series<E> {
    fn clone(&self) -> Self {
        Series { node: Arc::clone(&self.node), proper: self.proper }
    }
}

impl<E: Clone> Series<E> {
    fn wrap(node: SeriesNode<E>, proper: bool) -> Self {
        Series { node: Arc::new(node), proper }
    }

    pub fn zero() -> Self {
        Series::wrap(SeriesNode::Zero, true)
    }

    pub fn poly(terms: BTreeMap<Word, E>) -> Self {
        let proper = !terms.contains_key(&Word::empty());
        Series::wrap(SeriesNode::Poly(terms), proper)
    }

    pub fn monomial(word: Word, coefficient: E) -> Self {
        Series::poly(BTreeMap::from([(word, coefficient)]))
    }

    pub fn letter(a: char, weight: E) -> Self {
        Series::monomial(Word(vec![a]), weight)
    }

    pub fn sum(f: &Series<E>, g: &Series<E>) -> Self {
        if f.is_zero_node() {
            return g.clone();
        }
        if g.is_zero_node() {
            return f.clone();
        }
        Series::wrap(SeriesNode::Sum(f.clone(), g.clone()), f.proper && g.proper)
    }

    /// Cauchy product.
    pub fn prod(f: &Series<E>, g: &Series<E>) -> Self {
        if f.is_zero_node() || g.is_zero_node() {
            return Series::zero();
        }
        Series::wrap(SeriesNode::Prod(f.clone(), g.clone()), f.proper || g.proper)
    }

    pub fn plus(f: &Series<E>) -> Result<Self, SeriesError> {
        if !f.proper {
            return Err(SeriesError::NotProper);
        }
        if f.is_zero_node() {
            return Ok(Series::zero());
        }
        Ok(Series::wrap(SeriesNode::Plus(f.clone()), true))
    }

    pub fn scalar(n: u64, f: &Series<E>) -> Self {
        if n == 0 || f.is_zero_node() {
            return Series::zero();
        }
        if n == 1 {
            return f.clone();
        }
        Series::wrap(SeriesNode::Scalar(n, f.clone()), f.proper)
    }

    pub fn automaton(a: MatrixAutomaton<E>) -> Self {
        Series::wrap(SeriesNode::Automaton(Arc::new(a)), true)
    }

    pub fn node(&self) -> &SeriesNode<E> {
        &self.node
    }

    /// Marks a series whose empty-word coefficient is known to be zero as proper.
    fn assume_proper(&self) -> Self {
        Series { node: Arc::clone(&self.node), proper: true }
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn is_zero_node(&self) -> bool {
        matches!(*self.node, SeriesNode::Zero)
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.node) as *const () as usize
    }

    /// Rebuilds the DAG with every coefficient mapped through `phi`. Valid as a
    /// series morphism when `phi` is a semiring morphism.
    pub fn map_coefficients<F: Clone>(&self, phi: &dyn Fn(&E) -> F) -> Series<F> {
        let mut memo: HashMap<usize, Series<F>> = HashMap::new();
        self.map_rec(phi, &mut memo)
    }

    fn map_rec<F: Clone>(&self, phi: &dyn Fn(&E) -> F, memo: &mut HashMap<usize, Series<F>>) -> Series<F> {
        if let Some(s) = memo.get(&self.key()) {
            return s.clone();
        }
        let out = match &*self.node {
            SeriesNode::Zero => Series::zero(),
            SeriesNode::Poly(t) => Series::poly(t.iter().map(|(w, c)| (w.clone(), phi(c))).collect()),
            SeriesNode::Sum(f, g) => Series::sum(&f.map_rec(phi, memo), &g.map_rec(phi, memo)),
            SeriesNode::Prod(f, g) => Series::prod(&f.map_rec(phi, memo), &g.map_rec(phi, memo)),
            SeriesNode::Plus(f) => Series::plus(&f.map_rec(phi, memo)).expect("proper operand stays proper"),
            SeriesNode::Scalar(n, f) => Series::scalar(*n, &f.map_rec(phi, memo)),
            SeriesNode::Automaton(a) => Series::automaton(a.map_weights(phi)),
        };
        memo.insert(self.key(), out.clone());
        out
    }

    /// Compact structural rendering used in reports.
    pub fn describe(&self, render: &dyn Fn(&E) -> String) -> String {
        match &*self.node {
            SeriesNode::Zero => "0".into(),
            SeriesNode::Poly(t) => {
                let parts: Vec<String> = t.iter().map(|(w, c)| format!("{}{}", render(c), w)).collect();
                format!("{{{}}}", parts.join(", "))
            }
            SeriesNode::Sum(f, g) => format!("({} + {})", f.describe(render), g.describe(render)),
            SeriesNode::Prod(f, g) => format!("{}·{}", f.describe(render), g.describe(render)),
            SeriesNode::Plus(f) => format!("({})^+", f.describe(render)),
            SeriesNode::Scalar(n, f) => format!("{n}({})", f.describe(render)),
            SeriesNode::Automaton(a) => format!("aut[{} states]", a.n),
        }
    }
}

type Memo<E> = HashMap<usize, Rc<Vec<E>>>;

/// Coefficient of `f` at `w`.
pub fn coeff<C: Coefficients>(c: &C, f: &Series<C::Elem>, w: &[char]) -> C::Elem {
    let n = w.len();
    let mut memo = Memo::new();
    let t = factor_table(c, f, w, &mut memo);
    t[n].clone()
}

/// Coefficient of `f⁺` at `w` by the factorization recurrence.
pub fn series_plus<C: Coefficients>(c: &C, f: &Series<C::Elem>, w: &[char]) -> Result<C::Elem, SeriesError> {
    if !f.is_proper() {
        return Err(SeriesError::NotProper);
    }
    let n = w.len();
    if n == 0 {
        return Ok(c.zero());
    }
    let mut memo = Memo::new();
    let ft = factor_table(c, f, w, &mut memo);
    let at = |i: usize, j: usize| &ft[i * (n + 1) + j];
    // p[i] = coefficient of f⁺ on the suffix w[i..].
    let mut p = vec![c.zero(); n + 1];
    for i in (0..n).rev() {
        let mut acc = at(i, n).clone();
        for k in i + 1..n {
            let term = c.mul_mn(at(i, k), (k - i) as u64, &p[k], (n - k) as u64);
            acc = c.add(&acc, &term);
        }
        p[i] = acc;
    }
    Ok(p[0].clone())
}

/// Coefficients of `f` on every factor `w[i..j]`, stored at `i·(n+1) + j`.
fn factor_table<C: Coefficients>(c: &C, f: &Series<C::Elem>, w: &[char], memo: &mut Memo<C::Elem>) -> Rc<Vec<C::Elem>> {
    if let Some(t) = memo.get(&f.key()) {
        return Rc::clone(t);
    }
    let n = w.len();
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut t = vec![c.zero(); (n + 1) * (n + 1)];
    match f.node() {
        SeriesNode::Zero => {}
        SeriesNode::Poly(terms) => {
            for i in 0..=n {
                for j in i..=n {
                    if let Some(v) = terms.get(&w[i..j]) {
                        t[idx(i, j)] = v.clone();
                    }
                }
            }
        }
        SeriesNode::Sum(g, h) => {
            let (a, b) = (factor_table(c, g, w, memo), factor_table(c, h, w, memo));
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = c.add(&a[k], &b[k]);
            }
        }
        SeriesNode::Prod(g, h) => {
            let (a, b) = (factor_table(c, g, w, memo), factor_table(c, h, w, memo));
            for i in 0..=n {
                for j in i..=n {
                    let mut acc = c.zero();
                    for k in i..=j {
                        if (k == i && g.is_proper()) || (k == j && h.is_proper()) {
                            continue;
                        }
                        let term = c.mul_mn(&a[idx(i, k)], (k - i) as u64, &b[idx(k, j)], (j - k) as u64);
                        acc = c.add(&acc, &term);
                    }
                    t[idx(i, j)] = acc;
                }
            }
        }
        SeriesNode::Plus(g) => {
            let a = factor_table(c, g, w, memo);
            for j in 1..=n {
                for i in (0..j).rev() {
                    let mut acc = a[idx(i, j)].clone();
                    for k in i + 1..j {
                        let term = c.mul_mn(&a[idx(i, k)], (k - i) as u64, &t[idx(k, j)], (j - k) as u64);
                        acc = c.add(&acc, &term);
                    }
                    t[idx(i, j)] = acc;
                }
            }
        }
        SeriesNode::Scalar(m, g) => {
            let a = factor_table(c, g, w, memo);
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = c.nfold(*m, &a[k]);
            }
        }
        SeriesNode::Automaton(aut) => {
            for i in 0..n {
                let mut vec: Vec<C::Elem> = Vec::new();
                for j in i + 1..=n {
                    vec = if j == i + 1 { aut.first_step(c, w[i]) } else { aut.step(c, &vec, w[j - 1], (j - 1 - i) as u64) };
                    t[idx(i, j)] = aut.finish(c, &vec);
                }
            }
        }
    }
    let t = Rc::new(t);
    memo.insert(f.key(), Rc::clone(&t));
    t
}

/// Coefficients of `f` on every word of length at most `idx.bound()`, in
/// shortlex order.
pub fn truncation<C: Coefficients>(c: &C, idx: &WordIndex, f: &Series<C::Elem>) -> Vec<C::Elem> {
    let mut memo = Memo::new();
    let t = truncation_rec(c, idx, f, &mut memo);
    (*t).clone()
}

fn truncation_rec<C: Coefficients>(c: &C, idx: &WordIndex, f: &Series<C::Elem>, memo: &mut Memo<C::Elem>) -> Rc<Vec<C::Elem>> {
    if let Some(t) = memo.get(&f.key()) {
        return Rc::clone(t);
    }
    let total = idx.total();
    let mut t = vec![c.zero(); total];
    match f.node() {
        SeriesNode::Zero => {}
        SeriesNode::Poly(terms) => {
            for (w, v) in terms {
                if let Some(i) = idx.index_of(w.letters()) {
                    t[i] = v.clone();
                }
            }
        }
        SeriesNode::Sum(g, h) => {
            let (a, b) = (truncation_rec(c, idx, g, memo), truncation_rec(c, idx, h, memo));
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = c.add(&a[k], &b[k]);
            }
        }
        SeriesNode::Prod(g, h) => {
            let (a, b) = (truncation_rec(c, idx, g, memo), truncation_rec(c, idx, h, memo));
            for (i, slot) in t.iter_mut().enumerate() {
                let len = idx.len_of(i);
                let mut acc = c.zero();
                for p in 0..=len {
                    if (p == 0 && g.is_proper()) || (p == len && h.is_proper()) {
                        continue;
                    }
                    let term = c.mul_mn(&a[idx.prefix(i, p)], p as u64, &b[idx.suffix(i, len - p)], (len - p) as u64);
                    acc = c.add(&acc, &term);
                }
                *slot = acc;
            }
        }
        SeriesNode::Plus(g) => {
            let a = truncation_rec(c, idx, g, memo);
            for i in 1..total {
                let len = idx.len_of(i);
                let mut acc = a[i].clone();
                for p in 1..len {
                    let term = c.mul_mn(&a[idx.prefix(i, p)], p as u64, &t[idx.suffix(i, len - p)], (len - p) as u64);
                    acc = c.add(&acc, &term);
                }
                t[i] = acc;
            }
        }
        SeriesNode::Scalar(m, g) => {
            let a = truncation_rec(c, idx, g, memo);
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = c.nfold(*m, &a[k]);
            }
        }
        SeriesNode::Automaton(aut) => {
            let letters = idx.alphabet.letters();
            let mut states: Vec<Vec<C::Elem>> = vec![Vec::new(); total];
            for i in 1..total {
                let len = idx.len_of(i);
                let a = letters[idx.last_letter(i)];
                let v = if len == 1 {
                    aut.first_step(c, a)
                } else {
                    aut.step(c, &states[idx.prefix(i, len - 1)], a, (len - 1) as u64)
                };
                t[i] = aut.finish(c, &v);
                if len < idx.bound() {
                    states[i] = v;
                }
            }
        }
    }
    let t = Rc::new(t);
    memo.insert(f.key(), Rc::clone(&t));
    t
}

/// Compares coefficients on every word of length at most `bound`. A failure is
/// a definitive witness; success is evidence up to the bound only.
pub fn bounded_eq<C: Coefficients>(
    c: &C,
    alphabet: &Alphabet,
    f: &Series<C::Elem>,
    g: &Series<C::Elem>,
    bound: usize,
) -> LawReport {
    let idx = WordIndex::new(alphabet.clone(), bound);
    let (a, b) = (truncation(c, &idx, f), truncation(c, &idx, g));
    let mut report = LawReport::new(format!("bounded-equality[L<={bound}]"));
    report.trials = idx.total();
    for i in 0..idx.total() {
        if !c.equal(&a[i], &b[i]) {
            report.failures.push(LawFailure {
                law: "coefficient agreement".into(),
                inputs: vec![idx.word(i).to_string()],
                lhs: c.render(&a[i]),
                rhs: c.render(&b[i]),
            });
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Omega series

#[derive(Debug)]
pub enum OmegaNode<E> {
    Zero,
    OmegaPow(Series<E>),
    Act(Series<E>, OmegaSeries<E>),
    Sum(OmegaSeries<E>, OmegaSeries<E>),
    Scalar(u64, OmegaSeries<E>),
    Automaton(Arc<MatrixAutomaton<E>>),
}

#[derive(Debug)]
pub struct OmegaSeries<E> {
    node: Arc<OmegaNode<E>>,
}

impl<E> Clone for OmegaSeries<E> {
    fn clone(&self) -> Self {
        OmegaSeries { node: Arc::clone(&self.node) }
    }
}

impl<E: Clone> OmegaSeries<E> {
    fn wrap(node: OmegaNode<E>) -> Self {
        OmegaSeries { node: Arc::new(node) }
    }

    pub fn zero() -> Self {
        OmegaSeries::wrap(OmegaNode::Zero)
    }

    pub fn omega(f: &Series<E>) -> Result<Self, SeriesError> {
        if !f.is_proper() {
            return Err(SeriesError::NotProper);
        }
        if f.is_zero_node() {
            return Ok(OmegaSeries::zero());
        }
        Ok(OmegaSeries::wrap(OmegaNode::OmegaPow(f.clone())))
    }

    pub fn act(f: &Series<E>, v: &OmegaSeries<E>) -> Self {
        if f.is_zero_node() || v.is_zero_node() {
            return OmegaSeries::zero();
        }
        OmegaSeries::wrap(OmegaNode::Act(f.clone(), v.clone()))
    }

    pub fn sum(u: &OmegaSeries<E>, v: &OmegaSeries<E>) -> Self {
        if u.is_zero_node() {
            return v.clone();
        }
        if v.is_zero_node() {
            return u.clone();
        }
        OmegaSeries::wrap(OmegaNode::Sum(u.clone(), v.clone()))
    }

    pub fn scalar(n: u64, v: &OmegaSeries<E>) -> Self {
        if n == 0 || v.is_zero_node() {
            return OmegaSeries::zero();
        }
        if n == 1 {
            return v.clone();
        }
        OmegaSeries::wrap(OmegaNode::Scalar(n, v.clone()))
    }

    pub fn automaton(a: MatrixAutomaton<E>) -> Self {
        OmegaSeries::wrap(OmegaNode::Automaton(Arc::new(a)))
    }

    pub fn node(&self) -> &OmegaNode<E> {
        &self.node
    }

    pub fn is_zero_node(&self) -> bool {
        matches!(*self.node, OmegaNode::Zero)
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.node) as *const () as usize
    }

    pub fn describe(&self, render: &dyn Fn(&E) -> String) -> String {
        match &*self.node {
            OmegaNode::Zero => "0".into(),
            OmegaNode::OmegaPow(f) => format!("({})^w", f.describe(render)),
            OmegaNode::Act(f, v) => format!("{}·{}", f.describe(render), v.describe(render)),
            OmegaNode::Sum(u, v) => format!("({} + {})", u.describe(render), v.describe(render)),
            OmegaNode::Scalar(n, v) => format!("{n}({})", v.describe(render)),
            OmegaNode::Automaton(a) => format!("aut[{} states, k={}]", a.n, a.k),
        }
    }
}

// ---------------------------------------------------------------------------
// Boolean lasso evaluation
//
// For w = u·v^ω, the suffix of w starting at any position depends only on the
// position folded into 0..|u|+|v|. A finitary language L is summarized by the
// relation "some nonempty factor starting at p and ending at q lies in L";
// these relations compose like the language operations, and an omega language
// is summarized by the set of positions whose suffix it contains.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Relation {
    pub(crate) n: usize,
    pub(crate) rows: Vec<Vec<bool>>,
}

impl Relation {
    pub(crate) fn empty(n: usize) -> Self {
        Relation { n, rows: vec![vec![false; n]; n] }
    }

    fn union(&self, o: &Relation) -> Relation {
        let mut r = self.clone();
        for (i, row) in r.rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x |= o.rows[i][j];
            }
        }
        r
    }

    fn compose(&self, o: &Relation) -> Relation {
        let mut r = Relation::empty(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.rows[i][k] {
                    for j in 0..self.n {
                        r.rows[i][j] |= o.rows[k][j];
                    }
                }
            }
        }
        r
    }

    fn transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        for k in 0..self.n {
            for i in 0..self.n {
                if r.rows[i][k] {
                    for j in 0..self.n {
                        if r.rows[k][j] {
                            r.rows[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    fn image_into(&self, set: &[bool]) -> Vec<bool> {
        (0..self.n).map(|p| (0..self.n).any(|q| self.rows[p][q] && set[q])).collect()
    }

    /// Positions from which an infinite path exists.
    fn infinite_path_sources(&self) -> Vec<bool> {
        let closure = self.transitive_closure();
        let on_cycle: Vec<bool> = (0..self.n).map(|x| closure.rows[x][x]).collect();
        (0..self.n).map(|p| on_cycle[p] || (0..self.n).any(|q| closure.rows[p][q] && on_cycle[q])).collect()
    }
}

struct LassoEval<'w> {
    w: &'w OmegaWord,
    fin: HashMap<usize, Rc<Relation>>,
    inf: HashMap<usize, Rc<Vec<bool>>>,
}

impl<'w> LassoEval<'w> {
    fn relation(&mut self, f: &Series<bool>) -> Rc<Relation> {
        if let Some(r) = self.fin.get(&f.key()) {
            return Rc::clone(r);
        }
        let n = self.w.positions();
        let r = match f.node() {
            SeriesNode::Zero => Relation::empty(n),
            SeriesNode::Poly(terms) => {
                let mut r = Relation::empty(n);
                for (word, &c) in terms {
                    if !c || word.is_empty() {
                        continue;
                    }
                    for p in 0..n {
                        let mut q = p;
                        if word.letters().iter().all(|&a| {
                            let ok = self.w.letter_at(q) == a;
                            q = self.w.next(q);
                            ok
                        }) {
                            r.rows[p][q] = true;
                        }
                    }
                }
                r
            }
            SeriesNode::Sum(g, h) => self.relation(g).union(&self.relation(h)),
            SeriesNode::Prod(g, h) => self.relation(g).compose(&self.relation(h)),
            SeriesNode::Plus(g) => self.relation(g).transitive_closure(),
            SeriesNode::Scalar(m, g) => {
                if *m == 0 {
                    Relation::empty(n)
                } else {
                    (*self.relation(g)).clone()
                }
            }
            SeriesNode::Automaton(aut) => aut.lasso_relation(self.w),
        };
        let r = Rc::new(r);
        self.fin.insert(f.key(), Rc::clone(&r));
        r
    }

    fn positions(&mut self, v: &OmegaSeries<bool>) -> Rc<Vec<bool>> {
        if let Some(s) = self.inf.get(&v.key()) {
            return Rc::clone(s);
        }
        let n = self.w.positions();
        let s = match v.node() {
            OmegaNode::Zero => vec![false; n],
            OmegaNode::OmegaPow(f) => self.relation(f).infinite_path_sources(),
            OmegaNode::Act(f, u) => {
                let target = self.positions(u);
                self.relation(f).image_into(&target)
            }
            OmegaNode::Sum(a, b) => {
                let (x, y) = (self.positions(a), self.positions(b));
                x.iter().zip(y.iter()).map(|(p, q)| *p || *q).collect()
            }
            OmegaNode::Scalar(m, u) => {
                if *m == 0 {
                    vec![false; n]
                } else {
                    (*self.positions(u)).clone()
                }
            }
            OmegaNode::Automaton(aut) => aut.lasso_accepting_positions(self.w),
        };
        let s = Rc::new(s);
        self.inf.insert(v.key(), Rc::clone(&s));
        s
    }
}

/// Membership of `w` in a Boolean omega series.
pub fn lasso_member(v: &OmegaSeries<bool>, w: &OmegaWord) -> bool {
    let mut e = LassoEval { w, fin: HashMap::new(), inf: HashMap::new() };
    e.positions(v)[0]
}


// ---------------------------------------------------------------------------
// Series carriers

/// Proper series over `A⁺` with bounded equality.
#[derive(Debug, Clone)]
pub struct SeriesHemiring<C> {
    pub coefficients: C,
    pub alphabet: Alphabet,
    pub bound: usize,
}

impl<C: Coefficients> SeriesHemiring<C> {
    pub fn new(coefficients: C, alphabet: Alphabet) -> Self {
        SeriesHemiring { coefficients, alphabet, bound: DEFAULT_BOUND }
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn letter(&self, a: char) -> Series<C::Elem> {
        Series::letter(a, self.coefficients.letter_weight())
    }

    pub fn words(&self, words: &[&str]) -> Series<C::Elem> {
        let w = self.coefficients.letter_weight();
        let one = self.coefficients.unit_weight().unwrap_or_else(|| w.clone());
        Series::poly(
            words
                .iter()
                .map(|s| (Word::new(s), if s.chars().count() == 1 { w.clone() } else { one.clone() }))
                .collect(),
        )
    }

    pub fn coeff(&self, f: &Series<C::Elem>, w: &str) -> Result<C::Elem, SeriesError> {
        let w = Word::parse(w)?;
        self.alphabet.check(w.letters())?;
        Ok(coeff(&self.coefficients, f, w.letters()))
    }

    pub fn bounded_eq(&self, f: &Series<C::Elem>, g: &Series<C::Elem>) -> LawReport {
        bounded_eq(&self.coefficients, &self.alphabet, f, g, self.bound)
    }

    /// Random small series: polynomials combined by sum, product, plus and
    /// scalars, up to nesting depth 2.
    pub fn sampler(&self, seed: u64) -> Sampler<Series<C::Elem>>
    where
        C: Clone + 'static,
    {
        let c = self.coefficients.clone();
        let letters = self.alphabet.letters().to_vec();
        Sampler::random(seed, move |rng| random_series(&c, &letters, rng, 2))
    }
}

pub fn random_series<C: Coefficients>(c: &C, letters: &[char], rng: &mut ChaCha8Rng, depth: usize) -> Series<C::Elem> {
    let leaf = |rng: &mut ChaCha8Rng| -> Series<C::Elem> {
        if rng.gen_bool(0.08) {
            return Series::zero();
        }
        let terms = rng.gen_range(1..=2);
        let mut map = BTreeMap::new();
        for _ in 0..terms {
            let len = rng.gen_range(1..=2);
            let w: Vec<char> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            let weight = if len == 1 { c.letter_weight() } else { c.unit_weight().unwrap_or_else(|| c.letter_weight()) };
            let mult = rng.gen_range(1..=2);
            map.insert(Word(w), c.nfold(mult, &weight));
        }
        Series::poly(map)
    };
    if depth == 0 || rng.gen_bool(0.4) {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => Series::sum(&random_series(c, letters, rng, depth - 1), &random_series(c, letters, rng, depth - 1)),
        1 => Series::prod(&random_series(c, letters, rng, depth - 1), &random_series(c, letters, rng, depth - 1)),
        2 => Series::plus(&random_series(c, letters, rng, depth - 1)).expect("generated series are proper"),
        _ => Series::scalar(rng.gen_range(0..=2), &random_series(c, letters, rng, depth - 1)),
    }
}

impl<C: Coefficients> Monoid for SeriesHemiring<C> {
    type Elem = Series<C::Elem>;
    fn zero(&self) -> Self::Elem {
        Series::zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Series::sum(a, b)
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.bounded_eq(a, b).passed()
    }
    fn render(&self, a: &Self::Elem) -> String {
        a.describe(&|e| self.coefficients.render(e))
    }
    fn nfold(&self, n: u64, a: &Self::Elem) -> Self::Elem {
        Series::scalar(n, a)
    }
}

impl<C: Coefficients> Hemiring for SeriesHemiring<C> {
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Series::prod(a, b)
    }
}

impl<C: Coefficients> ConwayHemiring for SeriesHemiring<C> {
    fn plus(&self, a: &Self::Elem) -> Self::Elem {
        Series::plus(a).expect("elements of the proper series hemiring are proper")
    }
}

/// Series over `A*` (empty word allowed), with star on proper series.
#[derive(Debug, Clone)]
pub struct SeriesSemiring<C: Monoid> {
    pub coefficients: C,
    pub alphabet: Alphabet,
    pub bound: usize,
    one: Series<<C as Monoid>::Elem>,
}

impl<C: Coefficients> SeriesSemiring<C> {
    pub fn new(coefficients: C, alphabet: Alphabet) -> Result<Self, crate::algebra::AlgebraError> {
        let unit = coefficients.unit_weight().ok_or(crate::algebra::AlgebraError::NoUnit)?;
        let one = Series::monomial(Word::empty(), unit);
        Ok(SeriesSemiring { coefficients, alphabet, bound: DEFAULT_BOUND, one })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }
}

impl<C: Coefficients> Monoid for SeriesSemiring<C> {
    type Elem = Series<C::Elem>;
    fn zero(&self) -> Self::Elem {
        Series::zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Series::sum(a, b)
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        bounded_eq(&self.coefficients, &self.alphabet, a, b, self.bound).passed()
    }
    fn render(&self, a: &Self::Elem) -> String {
        a.describe(&|e| self.coefficients.render(e))
    }
    fn nfold(&self, n: u64, a: &Self::Elem) -> Self::Elem {
        Series::scalar(n, a)
    }
}

impl<C: Coefficients> Hemiring for SeriesSemiring<C> {
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Series::prod(a, b)
    }
    fn unit(&self) -> Option<Self::Elem> {
        Some(self.one.clone())
    }
}

impl<C: Coefficients> Semiring for SeriesSemiring<C> {
    fn one(&self) -> Self::Elem {
        self.one.clone()
    }
}

impl<C: Coefficients> PartialConwaySemiring for SeriesSemiring<C> {
    fn in_ideal(&self, a: &Self::Elem) -> bool {
        a.is_proper() || self.coefficients.is_zero(&coeff(&self.coefficients, a, &[]))
    }

    fn ideal_star(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if !self.in_ideal(a) {
            return None;
        }
        Some(Series::sum(&self.one, &Series::plus(&a.assume_proper()).ok()?))
    }
}

/// Omega series with equality by agreement on lassos `|u| ≤ max_prefix`,
/// `1 ≤ |v| ≤ max_period`.
#[derive(Debug, Clone)]
pub struct OmegaSeriesModule<C> {
    pub coefficients: C,
    pub alphabet: Alphabet,
    pub max_prefix: usize,
    pub max_period: usize,
}

impl<C: OmegaCoefficients> OmegaSeriesModule<C> {
    pub fn lassos(&self) -> Vec<OmegaWord> {
        OmegaWord::enumerate(&self.alphabet, self.max_prefix, self.max_period)
    }

    pub fn coeff(&self, v: &OmegaSeries<C::Elem>, w: &OmegaWord) -> Result<Estimate<C::Elem>, SeriesError> {
        self.alphabet.check(&w.letters())?;
        self.coefficients.omega_coeff(v, w)
    }

    /// Lasso-by-lasso comparison.
    pub fn bounded_eq(&self, a: &OmegaSeries<C::Elem>, b: &OmegaSeries<C::Elem>) -> LawReport {
        let mut report = LawReport::new(format!("lasso-equality[|u|<={},|v|<={}]", self.max_prefix, self.max_period));
        for w in self.lassos() {
            report.trials += 1;
            let (x, y) = (self.coefficients.omega_coeff(a, &w), self.coefficients.omega_coeff(b, &w));
            let agree = match (&x, &y) {
                (Ok(x), Ok(y)) => estimates_agree(&self.coefficients, x, y),
                _ => false,
            };
            if !agree {
                let show = |r: &Result<Estimate<C::Elem>, SeriesError>| match r {
                    Ok(e) => self.coefficients.render(&e.value),
                    Err(err) => err.to_string(),
                };
                report.failures.push(LawFailure {
                    law: "lasso agreement".into(),
                    inputs: vec![w.to_string()],
                    lhs: show(&x),
                    rhs: show(&y),
                });
            }
        }
        report
    }
}

/// Equality of estimates, widened by any reported truncation bounds.
pub fn estimates_agree<C: Monoid>(c: &C, x: &Estimate<C::Elem>, y: &Estimate<C::Elem>) -> bool
where
    C::Elem: 'static,
{
    if c.equal(&x.value, &y.value) {
        return true;
    }
    let slack = x.error_bound.unwrap_or(0.0) + y.error_bound.unwrap_or(0.0);
    if slack == 0.0 {
        return false;
    }
    match (as_f64(&x.value), as_f64(&y.value)) {
        (Some(a), Some(b)) => (a - b).abs() <= slack + crate::algebra::REAL_TOLERANCE,
        _ => false,
    }
}

fn as_f64<E: 'static>(e: &E) -> Option<f64> {
    (e as &dyn std::any::Any).downcast_ref::<f64>().copied()
}

impl<C: OmegaCoefficients> Monoid for OmegaSeriesModule<C>
where
    C::Elem: 'static,
{
    type Elem = OmegaSeries<C::Elem>;
    fn zero(&self) -> Self::Elem {
        OmegaSeries::zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        OmegaSeries::sum(a, b)
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.bounded_eq(a, b).passed()
    }
    fn render(&self, a: &Self::Elem) -> String {
        a.describe(&|e| self.coefficients.render(e))
    }
    fn nfold(&self, n: u64, a: &Self::Elem) -> Self::Elem {
        OmegaSeries::scalar(n, a)
    }
}

/// `(D⟨⟨A⁺⟩⟩, D⟨⟨A^ω⟩⟩)` with action by left concatenation and omega power.
#[derive(Debug, Clone)]
pub struct SeriesPair<C> {
    pub hemiring: SeriesHemiring<C>,
    pub module: OmegaSeriesModule<C>,
}

impl<C: OmegaCoefficients + Clone> SeriesPair<C>
where
    C::Elem: 'static,
{
    pub fn new(coefficients: C, alphabet: Alphabet) -> Self {
        SeriesPair {
            hemiring: SeriesHemiring::new(coefficients.clone(), alphabet.clone()),
            module: OmegaSeriesModule {
                coefficients,
                alphabet,
                max_prefix: DEFAULT_LASSO_BOUND,
                max_period: DEFAULT_LASSO_BOUND,
            },
        }
    }

    pub fn with_bounds(mut self, word_bound: usize, max_prefix: usize, max_period: usize) -> Self {
        self.hemiring.bound = word_bound;
        self.module.max_prefix = max_prefix;
        self.module.max_period = max_period;
        self
    }
}

impl<C: OmegaCoefficients> crate::algebra::HemimodulePair for SeriesPair<C>
where
    C::Elem: 'static,
{
    type H = SeriesHemiring<C>;
    type V = OmegaSeriesModule<C>;
    fn hemiring(&self) -> &Self::H {
        &self.hemiring
    }
    fn module(&self) -> &Self::V {
        &self.module
    }
    fn act(&self, a: &Series<C::Elem>, v: &OmegaSeries<C::Elem>) -> OmegaSeries<C::Elem> {
        OmegaSeries::act(a, v)
    }
    fn omega(&self, a: &Series<C::Elem>) -> OmegaSeries<C::Elem> {
        OmegaSeries::omega(a).expect("elements of the proper series hemiring are proper")
    }
}

/// The ε-free regular languages over `alphabet` as proper Boolean series.
pub fn language_instance(alphabet: Alphabet) -> SeriesHemiring<crate::instances::Bool> {
    SeriesHemiring::new(crate::instances::Bool, alphabet)
}

/// `(P(A⁺), P(A^ω))` with lasso-bounded equality on the omega side.
pub fn language_pair(alphabet: Alphabet) -> SeriesPair<crate::instances::Bool> {
    SeriesPair::new(crate::instances::Bool, alphabet)
}

pub fn nat_series_instance(alphabet: Alphabet) -> SeriesHemiring<crate::instances::Nat> {
    SeriesHemiring::new(crate::instances::Nat, alphabet)
}

/// Checks `x = ax + b` for `x = a⁺b + b`, and that it is the only solution up
/// to the bound: a solution's coefficient at `w` is forced by its coefficients
/// on shorter words.
pub fn unique_fixed_point_check<C: Coefficients>(
    h: &SeriesHemiring<C>,
    a: &Series<C::Elem>,
    b: &Series<C::Elem>,
) -> LawReport {
    let mut report = crate::algebra::iterative_fixed_point_check(h, a, b);
    let c = &h.coefficients;
    let idx = WordIndex::new(h.alphabet.clone(), h.bound);
    let (ta, tb) = (truncation(c, &idx, a), truncation(c, &idx, b));
    let mut forced = vec![c.zero(); idx.total()];
    for i in 1..idx.total() {
        let len = idx.len_of(i);
        let mut acc = tb[i].clone();
        for p in 1..len {
            let term = c.mul_mn(&ta[idx.prefix(i, p)], p as u64, &forced[idx.suffix(i, len - p)], (len - p) as u64);
            acc = c.add(&acc, &term);
        }
        forced[i] = acc;
    }
    let solution = truncation(c, &idx, &h.star_then(a, b));
    report.trials += idx.total();
    for i in 0..idx.total() {
        if !c.equal(&forced[i], &solution[i]) {
            report.failures.push(LawFailure {
                law: "unique solution".into(),
                inputs: vec![idx.word(i).to_string()],
                lhs: c.render(&solution[i]),
                rhs: c.render(&forced[i]),
            });
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Coefficient impls for the discrete instances

impl Coefficients for crate::instances::Bool {
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

impl Coefficients for crate::instances::Nat {
    fn letter_weight(&self) -> u64 {
        1
    }
    fn unit_weight(&self) -> Option<u64> {
        Some(1)
    }
    fn letter_multiple(&self, w: &u64) -> Option<u64> {
        Some(*w)
    }
}

impl Coefficients for crate::instances::MinPlus {
    fn letter_weight(&self) -> crate::instances::Tropical {
        crate::instances::Tropical::Fin(0)
    }
    fn unit_weight(&self) -> Option<crate::instances::Tropical> {
        Some(crate::instances::Tropical::Fin(0))
    }
    fn letter_multiple(&self, w: &crate::instances::Tropical) -> Option<u64> {
        match w {
            crate::instances::Tropical::Inf => Some(0),
            crate::instances::Tropical::Fin(0) => Some(1),
            _ => None,
        }
    }
}

impl Coefficients for crate::instances::Lattice {
    fn letter_weight(&self) -> u32 {
        self.top()
    }
    fn unit_weight(&self) -> Option<u32> {
        Some(self.top())
    }
    fn letter_multiple(&self, w: &u32) -> Option<u64> {
        match *w {
            0 => Some(0),
            x if x == self.top() => Some(1),
            _ => None,
        }
    }
}

impl OmegaCoefficients for crate::instances::Bool {
    fn omega_coeff(&self, f: &OmegaSeries<bool>, w: &OmegaWord) -> Result<Estimate<bool>, SeriesError> {
        Ok(Estimate::exact(lasso_member(f, w)))
    }
}
