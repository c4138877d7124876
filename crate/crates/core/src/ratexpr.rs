//! Rational and omega-rational expressions: syntax, parser, printer and
//! evaluation into series.
//!
//! Grammar:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor+
//! factor := atom ('^+' | '^w')*
//! atom   := INT? LETTER | INT? '(' expr ')'
//! ```
//!
//! An omega factor may only end a term, and sums may not mix finitary and
//! omega terms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ConwayHemiring, HemimodulePair, Hemiring, Monoid};
use crate::series::{Alphabet, Coefficients, OmegaSeries, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FinExpr {
    Letter(char),
    Scalar(u64, Arc<FinExpr>),
    Sum(Arc<FinExpr>, Arc<FinExpr>),
    Prod(Arc<FinExpr>, Arc<FinExpr>),
    Plus(Arc<FinExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OmegaExpr {
    OmegaPow(Arc<FinExpr>),
    ActProd(Arc<FinExpr>, Arc<OmegaExpr>),
    OmegaSum(Arc<OmegaExpr>, Arc<OmegaExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Fin(Arc<FinExpr>),
    Omega(Arc<OmegaExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("position {0}: ^+ applied to an omega expression")]
    PlusOnOmega(usize),
    #[error("position {0}: ^w applied to an omega expression")]
    OmegaOnOmega(usize),
    #[error("position {0}: scalar applied to an omega expression")]
    ScalarOnOmega(usize),
    #[error("position {0}: sum mixes finitary and omega terms")]
    MixedSum(usize),
    #[error("position {0}: an omega factor must end its term")]
    OmegaNotLast(usize),
    #[error("expected a finitary expression")]
    ExpectedFinitary,
    #[error("expected an omega expression")]
    ExpectedOmega,
    #[error("letter `{0}` is not in the alphabet")]
    ForeignLetter(char),
}

impl FinExpr {
    pub fn letter(a: char) -> Arc<FinExpr> {
        Arc::new(FinExpr::Letter(a))
    }

    pub fn scalar(n: u64, e: &Arc<FinExpr>) -> Arc<FinExpr> {
        Arc::new(FinExpr::Scalar(n, e.clone()))
    }

    pub fn sum(a: &Arc<FinExpr>, b: &Arc<FinExpr>) -> Arc<FinExpr> {
        Arc::new(FinExpr::Sum(a.clone(), b.clone()))
    }

    pub fn prod(a: &Arc<FinExpr>, b: &Arc<FinExpr>) -> Arc<FinExpr> {
        Arc::new(FinExpr::Prod(a.clone(), b.clone()))
    }

    pub fn plus(a: &Arc<FinExpr>) -> Arc<FinExpr> {
        Arc::new(FinExpr::Plus(a.clone()))
    }

    fn collect_letters(&self, out: &mut Vec<char>) {
        match self {
            FinExpr::Letter(a) => out.push(*a),
            FinExpr::Scalar(_, e) | FinExpr::Plus(e) => e.collect_letters(out),
            FinExpr::Sum(a, b) | FinExpr::Prod(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
        }
    }
}

impl OmegaExpr {
    pub fn omega(f: &Arc<FinExpr>) -> Arc<OmegaExpr> {
        Arc::new(OmegaExpr::OmegaPow(f.clone()))
    }

    pub fn act(f: &Arc<FinExpr>, v: &Arc<OmegaExpr>) -> Arc<OmegaExpr> {
        Arc::new(OmegaExpr::ActProd(f.clone(), v.clone()))
    }

    pub fn sum(a: &Arc<OmegaExpr>, b: &Arc<OmegaExpr>) -> Arc<OmegaExpr> {
        Arc::new(OmegaExpr::OmegaSum(a.clone(), b.clone()))
    }

    fn collect_letters(&self, out: &mut Vec<char>) {
        match self {
            OmegaExpr::OmegaPow(f) => f.collect_letters(out),
            OmegaExpr::ActProd(f, v) => {
                f.collect_letters(out);
                v.collect_letters(out);
            }
            OmegaExpr::OmegaSum(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
        }
    }
}

impl Expr {
    pub fn letters(&self) -> Vec<char> {
        let mut out = Vec::new();
        match self {
            Expr::Fin(f) => f.collect_letters(&mut out),
            Expr::Omega(v) => v.collect_letters(&mut out),
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<(), ExprError> {
        match self.letters().into_iter().find(|c| alphabet.index(*c).is_none()) {
            Some(c) => Err(ExprError::ForeignLetter(c)),
            None => Ok(()),
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Expr::Omega(_))
    }
}

// ---------------------------------------------------------------------------
// Printer

fn write_atom(f: &mut fmt::Formatter<'_>, e: &FinExpr) -> fmt::Result {
    match e {
        FinExpr::Letter(a) => write!(f, "{a}"),
        FinExpr::Scalar(n, inner) => match &**inner {
            FinExpr::Letter(a) => write!(f, "{n}{a}"),
            other => write!(f, "{n}({other})"),
        },
        other => write!(f, "({other})"),
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, e: &FinExpr) -> fmt::Result {
    match e {
        FinExpr::Plus(inner) => {
            write_atom(f, inner)?;
            write!(f, "^+")
        }
        FinExpr::Sum(..) | FinExpr::Prod(..) => write!(f, "({e})"),
        other => write_atom(f, other),
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, e: &FinExpr) -> fmt::Result {
    match e {
        FinExpr::Prod(a, b) => {
            write_term(f, a)?;
            write_factor(f, b)
        }
        other => write_factor(f, other),
    }
}

impl fmt::Display for FinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinExpr::Sum(a, b) => {
                write!(f, "{a} + ")?;
                write_term(f, b)
            }
            other => write_term(f, other),
        }
    }
}

fn write_omega_term(f: &mut fmt::Formatter<'_>, e: &OmegaExpr) -> fmt::Result {
    match e {
        OmegaExpr::OmegaPow(inner) => {
            write_atom(f, inner)?;
            write!(f, "^w")
        }
        OmegaExpr::ActProd(a, v) => {
            write_term(f, a)?;
            match &**v {
                OmegaExpr::OmegaPow(_) => write_omega_term(f, v),
                other => write!(f, "({other})"),
            }
        }
        OmegaExpr::OmegaSum(..) => write!(f, "({e})"),
    }
}

impl fmt::Display for OmegaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaExpr::OmegaSum(a, b) => {
                write!(f, "{a} + ")?;
                write_omega_term(f, b)
            }
            other => write_omega_term(f, other),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Fin(e) => write!(f, "{e}"),
            Expr::Omega(e) => write!(f, "{e}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let chars = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, at: 0, text }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.text.len(), |c| c.0)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '(')
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos();
        let mut acc = self.term()?;
        while self.peek() == Some('+') {
            self.bump();
            let pos = self.pos();
            let t = self.term()?;
            acc = match (acc, t) {
                (Expr::Fin(a), Expr::Fin(b)) => Expr::Fin(FinExpr::sum(&a, &b)),
                (Expr::Omega(a), Expr::Omega(b)) => Expr::Omega(OmegaExpr::sum(&a, &b)),
                _ => return Err(ExprError::MixedSum(if pos > start { pos } else { start })),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        if !self.starts_atom() {
            return self.syntax("expected a letter, integer or '('");
        }
        let mut prefix: Option<Arc<FinExpr>> = None;
        loop {
            let pos = self.pos();
            match self.factor()? {
                Expr::Fin(f) => {
                    prefix = Some(match prefix {
                        Some(p) => FinExpr::prod(&p, &f),
                        None => f,
                    });
                }
                Expr::Omega(v) => {
                    if self.starts_atom() {
                        return Err(ExprError::OmegaNotLast(pos));
                    }
                    return Ok(Expr::Omega(match prefix {
                        Some(p) => OmegaExpr::act(&p, &v),
                        None => v,
                    }));
                }
            }
            if !self.starts_atom() {
                return Ok(Expr::Fin(prefix.expect("at least one factor")));
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.atom()?;
        while self.peek() == Some('^') {
            let pos = self.pos();
            self.bump();
            e = match (self.bump(), e) {
                (Some('+'), Expr::Fin(f)) => Expr::Fin(FinExpr::plus(&f)),
                (Some('+'), Expr::Omega(_)) => return Err(ExprError::PlusOnOmega(pos)),
                (Some('w'), Expr::Fin(f)) => Expr::Omega(OmegaExpr::omega(&f)),
                (Some('w'), Expr::Omega(_)) => return Err(ExprError::OmegaOnOmega(pos)),
                _ => {
                    self.at -= 1;
                    return self.syntax("expected '+' or 'w' after '^'");
                }
            };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let mut scalar: Option<u64> = None;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let mut n: u64 = 0;
            while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                n = match n.checked_mul(10).and_then(|x| x.checked_add(u64::from(d))) {
                    Some(v) => v,
                    None => return self.syntax("integer too large"),
                };
                self.bump();
            }
            scalar = Some(n);
        }
        let inner = match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.bump();
                Expr::Fin(FinExpr::letter(c))
            }
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.bump() != Some(')') {
                    self.at -= 1;
                    return self.syntax("expected ')'");
                }
                e
            }
            _ => return self.syntax("expected a letter or '('"),
        };
        match (scalar, inner) {
            (None, e) => Ok(e),
            (Some(n), Expr::Fin(f)) => Ok(Expr::Fin(FinExpr::scalar(n, &f))),
            (Some(_), Expr::Omega(_)) => Err(ExprError::ScalarOnOmega(pos)),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_fin(text: &str) -> Result<Arc<FinExpr>, ExprError> {
    match parse(text)? {
        Expr::Fin(f) => Ok(f),
        Expr::Omega(_) => Err(ExprError::ExpectedFinitary),
    }
}

pub fn parse_omega(text: &str) -> Result<Arc<OmegaExpr>, ExprError> {
    match parse(text)? {
        Expr::Omega(v) => Ok(v),
        Expr::Fin(_) => Err(ExprError::ExpectedOmega),
    }
}

// ---------------------------------------------------------------------------
// Evaluation

fn key<T>(e: &Arc<T>) -> usize {
    Arc::as_ptr(e) as *const () as usize
}

/// Homomorphic evaluation into series; shared subexpressions map to shared
/// series nodes.
pub fn eval_fin<C: Coefficients>(c: &C, e: &Arc<FinExpr>) -> Series<C::Elem> {
    let mut memo = HashMap::new();
    eval_fin_rec(c, e, &mut memo)
}

fn eval_fin_rec<C: Coefficients>(c: &C, e: &Arc<FinExpr>, memo: &mut HashMap<usize, Series<C::Elem>>) -> Series<C::Elem> {
    if let Some(s) = memo.get(&key(e)) {
        return s.clone();
    }
    let s = match &**e {
        FinExpr::Letter(a) => Series::letter(*a, c.letter_weight()),
        FinExpr::Scalar(n, x) => Series::scalar(*n, &eval_fin_rec(c, x, memo)),
        FinExpr::Sum(a, b) => Series::sum(&eval_fin_rec(c, a, memo), &eval_fin_rec(c, b, memo)),
        FinExpr::Prod(a, b) => Series::prod(&eval_fin_rec(c, a, memo), &eval_fin_rec(c, b, memo)),
        FinExpr::Plus(a) => Series::plus(&eval_fin_rec(c, a, memo)).expect("expressions denote proper series"),
    };
    memo.insert(key(e), s.clone());
    s
}

pub fn eval_omega<C: Coefficients>(c: &C, e: &Arc<OmegaExpr>) -> OmegaSeries<C::Elem> {
    let mut fin = HashMap::new();
    let mut inf = HashMap::new();
    eval_omega_rec(c, e, &mut fin, &mut inf)
}

fn eval_omega_rec<C: Coefficients>(
    c: &C,
    e: &Arc<OmegaExpr>,
    fin: &mut HashMap<usize, Series<C::Elem>>,
    inf: &mut HashMap<usize, OmegaSeries<C::Elem>>,
) -> OmegaSeries<C::Elem> {
    if let Some(s) = inf.get(&key(e)) {
        return s.clone();
    }
    let s = match &**e {
        OmegaExpr::OmegaPow(f) => OmegaSeries::omega(&eval_fin_rec(c, f, fin)).expect("expressions denote proper series"),
        OmegaExpr::ActProd(f, v) => OmegaSeries::act(&eval_fin_rec(c, f, fin), &eval_omega_rec(c, v, fin, inf)),
        OmegaExpr::OmegaSum(a, b) => OmegaSeries::sum(&eval_omega_rec(c, a, fin, inf), &eval_omega_rec(c, b, fin, inf)),
    };
    inf.insert(key(e), s.clone());
    s
}

/// Evaluates a parsed expression, rejecting letters outside the alphabet.
pub fn eval_in<C: Coefficients>(c: &C, e: &Expr, alphabet: &Alphabet) -> Result<EvalResult<C::Elem>, SeriesError> {
    if let Err(ExprError::ForeignLetter(x)) = e.check_alphabet(alphabet) {
        return Err(SeriesError::ForeignLetter(x));
    }
    Ok(match e {
        Expr::Fin(f) => EvalResult::Fin(eval_fin(c, f)),
        Expr::Omega(v) => EvalResult::Omega(eval_omega(c, v)),
    })
}

#[derive(Debug, Clone)]
pub enum EvalResult<E> {
    Fin(Series<E>),
    Omega(OmegaSeries<E>),
}

// ---------------------------------------------------------------------------
// Random expressions

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprKind {
    Finitary,
    Omega,
}

/// Seeded random expression of depth at most `max_depth` (at least 1).
pub fn random_expr(seed: u64, max_depth: usize, kind: ExprKind, letters: &[char]) -> Expr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ExprKind::Finitary => Expr::Fin(random_fin(&mut rng, max_depth, letters)),
        ExprKind::Omega => Expr::Omega(random_omega(&mut rng, max_depth, letters)),
    }
}

/// Node kinds are chosen uniformly while depth remains; depth 1 is a letter.
pub fn random_fin(rng: &mut ChaCha8Rng, depth: usize, letters: &[char]) -> Arc<FinExpr> {
    let letter = |rng: &mut ChaCha8Rng| FinExpr::letter(letters[rng.gen_range(0..letters.len())]);
    if depth <= 1 {
        return letter(rng);
    }
    match rng.gen_range(0..5) {
        0 => letter(rng),
        1 => FinExpr::scalar(rng.gen_range(0..=3), &random_fin(rng, depth - 1, letters)),
        2 => FinExpr::sum(&random_fin(rng, depth - 1, letters), &random_fin(rng, depth - 1, letters)),
        3 => FinExpr::prod(&random_fin(rng, depth - 1, letters), &random_fin(rng, depth - 1, letters)),
        _ => FinExpr::plus(&random_fin(rng, depth - 1, letters)),
    }
}

pub fn random_omega(rng: &mut ChaCha8Rng, depth: usize, letters: &[char]) -> Arc<OmegaExpr> {
    if depth <= 1 {
        return OmegaExpr::omega(&FinExpr::letter(letters[rng.gen_range(0..letters.len())]));
    }
    match rng.gen_range(0..3) {
        0 => OmegaExpr::omega(&random_fin(rng, depth - 1, letters)),
        1 => OmegaExpr::act(&random_fin(rng, depth - 1, letters), &random_omega(rng, depth - 1, letters)),
        _ => OmegaExpr::sum(&random_omega(rng, depth - 1, letters), &random_omega(rng, depth - 1, letters)),
    }
}

// ---------------------------------------------------------------------------
// Expressions as a hemiring-hemimodule pair (no simplification beyond zero)

/// Finitary expressions under syntactic operations. Zero is written `0a`.
#[derive(Debug, Clone)]
pub struct ExprHemiring {
    zero: Arc<FinExpr>,
}

#[derive(Debug, Clone)]
pub struct ExprModule {
    zero: Arc<OmegaExpr>,
}

#[derive(Debug, Clone)]
pub struct ExprPair {
    pub hemiring: ExprHemiring,
    pub module: ExprModule,
}

impl ExprPair {
    pub fn new(letter: char) -> Self {
        let zero = FinExpr::scalar(0, &FinExpr::letter(letter));
        let module_zero = OmegaExpr::act(&zero, &OmegaExpr::omega(&FinExpr::letter(letter)));
        ExprPair { hemiring: ExprHemiring { zero }, module: ExprModule { zero: module_zero } }
    }
}

fn fin_is_zero(e: &FinExpr) -> bool {
    matches!(e, FinExpr::Scalar(0, _))
}

fn omega_is_zero(e: &OmegaExpr) -> bool {
    matches!(e, OmegaExpr::ActProd(f, _) if fin_is_zero(f))
}

impl Monoid for ExprHemiring {
    type Elem = Arc<FinExpr>;
    fn zero(&self) -> Self::Elem {
        self.zero.clone()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if fin_is_zero(a) {
            b.clone()
        } else if fin_is_zero(b) {
            a.clone()
        } else {
            FinExpr::sum(a, b)
        }
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
    fn render(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        fin_is_zero(a)
    }
    fn nfold(&self, n: u64, a: &Self::Elem) -> Self::Elem {
        match n {
            0 => self.zero(),
            1 => a.clone(),
            _ if fin_is_zero(a) => a.clone(),
            _ => FinExpr::scalar(n, a),
        }
    }
}

impl Hemiring for ExprHemiring {
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if fin_is_zero(a) || fin_is_zero(b) {
            self.zero()
        } else {
            FinExpr::prod(a, b)
        }
    }
}

impl ConwayHemiring for ExprHemiring {
    fn plus(&self, a: &Self::Elem) -> Self::Elem {
        if fin_is_zero(a) {
            self.zero()
        } else {
            FinExpr::plus(a)
        }
    }
}

impl Monoid for ExprModule {
    type Elem = Arc<OmegaExpr>;
    fn zero(&self) -> Self::Elem {
        self.zero.clone()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if omega_is_zero(a) {
            b.clone()
        } else if omega_is_zero(b) {
            a.clone()
        } else {
            OmegaExpr::sum(a, b)
        }
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
    fn render(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        omega_is_zero(a)
    }
}

impl HemimodulePair for ExprPair {
    type H = ExprHemiring;
    type V = ExprModule;
    fn hemiring(&self) -> &ExprHemiring {
        &self.hemiring
    }
    fn module(&self) -> &ExprModule {
        &self.module
    }
    fn act(&self, a: &Arc<FinExpr>, v: &Arc<OmegaExpr>) -> Arc<OmegaExpr> {
        if fin_is_zero(a) || omega_is_zero(v) {
            self.module.zero()
        } else {
            OmegaExpr::act(a, v)
        }
    }
    fn omega(&self, a: &Arc<FinExpr>) -> Arc<OmegaExpr> {
        if fin_is_zero(a) {
            self.module.zero()
        } else {
            OmegaExpr::omega(a)
        }
    }
}
