//! Carrier contracts and the executable law suites.
//!
//! A carrier is a value (not a type) so that equality can depend on runtime
//! configuration such as a tolerance or a word-length bound.

use std::fmt::Debug;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 42;

/// Absolute tolerance used by real-valued carriers.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("carrier has no multiplicative unit")]
    NoUnit,
    #[error("cannot parse `{0}` as a carrier element")]
    Parse(String),
}

pub type Elem<C> = <C as Monoid>::Elem;

/// Commutative monoid with carrier-supplied equality and string codec.
pub trait Monoid: Send + Sync {
    type Elem: Clone + Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;

    fn parse(&self, text: &str) -> Result<Self::Elem, AlgebraError> {
        Err(AlgebraError::Parse(text.to_string()))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.equal(a, &self.zero())
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// n-fold sum, computed by doubling.
    fn nfold(&self, n: u64, a: &Self::Elem) -> Self::Elem {
        let mut acc = self.zero();
        let mut base = a.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }
}

pub trait Hemiring: Monoid {
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// The multiplicative unit, if the carrier has one.
    fn unit(&self) -> Option<Self::Elem> {
        None
    }
}

pub trait Semiring: Hemiring {
    fn one(&self) -> Self::Elem;
}

pub trait ConwayHemiring: Hemiring {
    fn plus(&self, a: &Self::Elem) -> Self::Elem;

    /// `x*y`, read as `x⁺y + y`.
    fn star_then(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(&self.mul(&self.plus(x), y), y)
    }

    /// `yx*`, read as `y + yx⁺`.
    fn then_star(&self, y: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.add(y, &self.mul(y, &self.plus(x)))
    }
}

pub trait ConwaySemiring: Semiring {
    fn star(&self, a: &Self::Elem) -> Self::Elem;
}

/// Semiring with a star defined on an ideal.
pub trait PartialConwaySemiring: Semiring {
    fn in_ideal(&self, a: &Self::Elem) -> bool;
    fn ideal_star(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

/// Length-indexed product family `a ·_{m,n} b`.
pub trait MultiHemiring: Monoid {
    fn mul_mn(&self, a: &Self::Elem, m: u64, b: &Self::Elem, n: u64) -> Self::Elem;
}

/// A Conway hemiring acting on a commutative monoid, with an omega power.
pub trait HemimodulePair: Send + Sync {
    type H: ConwayHemiring;
    type V: Monoid;

    fn hemiring(&self) -> &Self::H;
    fn module(&self) -> &Self::V;
    fn act(&self, a: &Elem<Self::H>, v: &Elem<Self::V>) -> Elem<Self::V>;
    fn omega(&self, a: &Elem<Self::H>) -> Elem<Self::V>;

    /// `x*v`, read as `x⁺v + v`.
    fn star_act(&self, x: &Elem<Self::H>, v: &Elem<Self::V>) -> Elem<Self::V> {
        let h = self.hemiring();
        self.module().add(&self.act(&h.plus(x), v), v)
    }
}

/// Conway semiring obtained from a Conway hemiring with unit via `s* = 1 + s⁺`.
#[derive(Debug, Clone)]
pub struct StarFromPlus<C: ConwayHemiring> {
    inner: C,
    one: C::Elem,
}

pub fn star_from_plus<C: ConwayHemiring>(c: C) -> Result<StarFromPlus<C>, AlgebraError> {
    let one = c.unit().ok_or(AlgebraError::NoUnit)?;
    Ok(StarFromPlus { inner: c, one })
}

impl<C: ConwayHemiring> StarFromPlus<C> {
    pub fn inner(&self) -> &C {
        &self.inner
    }
}

impl<C: ConwayHemiring> Monoid for StarFromPlus<C> {
    type Elem = C::Elem;
    fn zero(&self) -> Self::Elem {
        self.inner.zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.inner.add(a, b)
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.inner.equal(a, b)
    }
    fn render(&self, a: &Self::Elem) -> String {
        self.inner.render(a)
    }
    fn parse(&self, text: &str) -> Result<Self::Elem, AlgebraError> {
        self.inner.parse(text)
    }
}

impl<C: ConwayHemiring> Hemiring for StarFromPlus<C> {
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.inner.mul(a, b)
    }
    fn unit(&self) -> Option<Self::Elem> {
        Some(self.one.clone())
    }
}

impl<C: ConwayHemiring> Semiring for StarFromPlus<C> {
    fn one(&self) -> Self::Elem {
        self.one.clone()
    }
}

impl<C: ConwayHemiring> ConwaySemiring for StarFromPlus<C> {
    fn star(&self, a: &Self::Elem) -> Self::Elem {
        self.inner.add(&self.one, &self.inner.plus(a))
    }
}

impl<C: ConwayHemiring> ConwayHemiring for StarFromPlus<C> {
    fn plus(&self, a: &Self::Elem) -> Self::Elem {
        self.inner.plus(a)
    }
}

/// Conway hemiring obtained from a Conway semiring via `s⁺ = ss*`.
#[derive(Debug, Clone)]
pub struct PlusFromStar<C: ConwaySemiring>(pub C);

pub fn plus_from_star<C: ConwaySemiring>(c: C) -> PlusFromStar<C> {
    PlusFromStar(c)
}

impl<C: ConwaySemiring> Monoid for PlusFromStar<C> {
    type Elem = C::Elem;
    fn zero(&self) -> Self::Elem {
        self.0.zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.add(a, b)
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.0.equal(a, b)
    }
    fn render(&self, a: &Self::Elem) -> String {
        self.0.render(a)
    }
    fn parse(&self, text: &str) -> Result<Self::Elem, AlgebraError> {
        self.0.parse(text)
    }
}

impl<C: ConwaySemiring> Hemiring for PlusFromStar<C> {
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.mul(a, b)
    }
    fn unit(&self) -> Option<Self::Elem> {
        Some(self.0.one())
    }
}

impl<C: ConwaySemiring> Semiring for PlusFromStar<C> {
    fn one(&self) -> Self::Elem {
        self.0.one()
    }
}

impl<C: ConwaySemiring> ConwaySemiring for PlusFromStar<C> {
    fn star(&self, a: &Self::Elem) -> Self::Elem {
        self.0.star(a)
    }
}

impl<C: ConwaySemiring> ConwayHemiring for PlusFromStar<C> {
    fn plus(&self, a: &Self::Elem) -> Self::Elem {
        self.0.mul(a, &self.0.star(a))
    }
}

// ---------------------------------------------------------------------------
// Reports and sampling

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawFailure {
    pub law: String,
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub suite: String,
    pub trials: usize,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>) -> Self {
        LawReport { suite: suite.into(), trials: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_laws(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.failures.iter().map(|f| f.law.as_str()).collect();
        names.dedup();
        names
    }

    /// Appends another report's failures and trial count.
    pub fn absorb(&mut self, other: LawReport) {
        self.trials += other.trials;
        self.failures.extend(other.failures);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Result of evaluating one law on one tuple.
#[derive(Debug, Clone)]
pub struct Check {
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Check {
    pub fn compare<M: Monoid + ?Sized>(m: &M, lhs: &M::Elem, rhs: &M::Elem) -> Check {
        let holds = m.equal(lhs, rhs);
        let (l, r) = if holds { (String::new(), String::new()) } else { (m.render(lhs), m.render(rhs)) };
        Check { holds, lhs: l, rhs: r }
    }

    pub fn values(holds: bool, lhs: String, rhs: String) -> Check {
        Check { holds, lhs, rhs }
    }
}

type Generator<E> = Arc<dyn Fn(&mut ChaCha8Rng) -> E + Send + Sync>;

/// Seeded random generator or an exhaustive element list.
#[derive(Clone)]
pub enum Sampler<E> {
    Random { seed: u64, gen: Generator<E> },
    Exhaustive(Vec<E>),
}

impl<E: Clone> Sampler<E> {
    pub fn random(seed: u64, gen: impl Fn(&mut ChaCha8Rng) -> E + Send + Sync + 'static) -> Self {
        Sampler::Random { seed, gen: Arc::new(gen) }
    }

    pub fn exhaustive(elems: Vec<E>) -> Self {
        Sampler::Exhaustive(elems)
    }

    /// Tuples of the given arity. Random samplers draw `trials` tuples; exhaustive
    /// samplers enumerate every tuple and ignore `trials`.
    pub fn tuples(&self, arity: usize, trials: usize) -> Vec<Vec<E>> {
        if arity == 0 {
            return vec![Vec::new()];
        }
        match self {
            Sampler::Random { seed, gen } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(arity as u64));
                (0..trials).map(|_| (0..arity).map(|_| gen(&mut rng)).collect()).collect()
            }
            Sampler::Exhaustive(elems) => {
                let mut out: Vec<Vec<E>> = vec![Vec::new()];
                for _ in 0..arity {
                    out = out
                        .into_iter()
                        .flat_map(|t| {
                            elems.iter().map(move |e| {
                                let mut t2 = t.clone();
                                t2.push(e.clone());
                                t2
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }

    /// One sample drawn with an external generator.
    pub fn pick(&self, rng: &mut ChaCha8Rng) -> E {
        match self {
            Sampler::Random { gen, .. } => gen(rng),
            Sampler::Exhaustive(elems) => elems[rng.gen_range(0..elems.len())].clone(),
        }
    }

    /// A flat list of `n` samples (exhaustive samplers cycle through their list).
    pub fn draw(&self, n: usize) -> Vec<E> {
        match self {
            Sampler::Random { seed, gen } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..n).map(|_| gen(&mut rng)).collect()
            }
            Sampler::Exhaustive(elems) => elems.iter().cycle().take(n).cloned().collect(),
        }
    }
}

pub struct Law<'a, E> {
    pub name: &'static str,
    pub arity: usize,
    pub check: Box<dyn Fn(&[E]) -> Check + 'a>,
}

impl<'a, E> Law<'a, E> {
    pub fn new(name: &'static str, arity: usize, check: impl Fn(&[E]) -> Check + 'a) -> Self {
        Law { name, arity, check: Box::new(check) }
    }
}

/// Evaluates every law on sampled tuples. `trials` counts tuples per law.
pub fn run_laws<E: Clone>(
    suite: &str,
    laws: &[Law<'_, E>],
    sampler: &Sampler<E>,
    trials: usize,
    render: &dyn Fn(&E) -> String,
) -> LawReport {
    let mut report = LawReport::new(suite);
    let max_arity = laws.iter().map(|l| l.arity).max().unwrap_or(0);
    let mut cache: Vec<Option<Vec<Vec<E>>>> = vec![None; max_arity + 1];
    for law in laws {
        let tuples = cache[law.arity].get_or_insert_with(|| sampler.tuples(law.arity, trials));
        report.trials = report.trials.max(tuples.len());
        for t in tuples.iter() {
            let c = (law.check)(t);
            if !c.holds {
                report.failures.push(LawFailure {
                    law: law.name.to_string(),
                    inputs: t.iter().map(render).collect(),
                    lhs: c.lhs,
                    rhs: c.rhs,
                });
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Law suites

fn hemiring_axioms<'a, C: Hemiring>(c: &'a C) -> Vec<Law<'a, C::Elem>> {
    vec![
        Law::new("additive associativity", 3, move |t: &[C::Elem]| {
            let l = c.add(&c.add(&t[0], &t[1]), &t[2]);
            let r = c.add(&t[0], &c.add(&t[1], &t[2]));
            Check::compare(c, &l, &r)
        }),
        Law::new("additive commutativity", 2, move |t: &[C::Elem]| {
            Check::compare(c, &c.add(&t[0], &t[1]), &c.add(&t[1], &t[0]))
        }),
        Law::new("additive zero", 1, move |t: &[C::Elem]| {
            Check::compare(c, &c.add(&t[0], &c.zero()), &t[0])
        }),
        Law::new("multiplicative associativity", 3, move |t: &[C::Elem]| {
            let l = c.mul(&c.mul(&t[0], &t[1]), &t[2]);
            let r = c.mul(&t[0], &c.mul(&t[1], &t[2]));
            Check::compare(c, &l, &r)
        }),
        Law::new("left distributivity", 3, move |t: &[C::Elem]| {
            let l = c.mul(&t[0], &c.add(&t[1], &t[2]));
            let r = c.add(&c.mul(&t[0], &t[1]), &c.mul(&t[0], &t[2]));
            Check::compare(c, &l, &r)
        }),
        Law::new("right distributivity", 3, move |t: &[C::Elem]| {
            let l = c.mul(&c.add(&t[0], &t[1]), &t[2]);
            let r = c.add(&c.mul(&t[0], &t[2]), &c.mul(&t[1], &t[2]));
            Check::compare(c, &l, &r)
        }),
        Law::new("zero annihilation", 1, move |t: &[C::Elem]| {
            let z = c.zero();
            let l = c.add(&c.mul(&z, &t[0]), &c.mul(&t[0], &z));
            Check::compare(c, &l, &z)
        }),
    ]
}

/// Semiring axioms plus the star identities: sum star, product star and their
/// consequences, ending with `0* = 1`.
pub fn conway_semiring_laws<C: ConwaySemiring>(c: &C, sampler: &Sampler<C::Elem>, trials: usize) -> LawReport {
    let mut laws = hemiring_axioms(c);
    laws.push(Law::new("unit", 1, move |t: &[C::Elem]| {
        let one = c.one();
        let l = c.add(&c.mul(&one, &t[0]), &c.mul(&t[0], &one));
        Check::compare(c, &l, &c.add(&t[0], &t[0]))
    }));
    laws.push(Law::new("sum star identity", 2, move |t: &[C::Elem]| {
        let (x, y) = (&t[0], &t[1]);
        let l = c.star(&c.add(x, y));
        let xs = c.star(x);
        let r = c.mul(&c.star(&c.mul(&xs, y)), &xs);
        Check::compare(c, &l, &r)
    }));
    laws.push(Law::new("product star identity", 2, move |t: &[C::Elem]| {
        let (x, y) = (&t[0], &t[1]);
        let l = c.star(&c.mul(x, y));
        let r = c.add(&c.one(), &c.mul(&c.mul(x, &c.star(&c.mul(y, x))), y));
        Check::compare(c, &l, &r)
    }));
    laws.push(Law::new("dual sum star identity", 2, move |t: &[C::Elem]| {
        let (x, y) = (&t[0], &t[1]);
        let l = c.star(&c.add(x, y));
        let xs = c.star(x);
        let r = c.mul(&xs, &c.star(&c.mul(y, &xs)));
        Check::compare(c, &l, &r)
    }));
    laws.push(Law::new("star shift identity", 2, move |t: &[C::Elem]| {
        let (x, y) = (&t[0], &t[1]);
        let l = c.mul(&c.star(&c.mul(x, y)), x);
        let r = c.mul(x, &c.star(&c.mul(y, x)));
        Check::compare(c, &l, &r)
    }));
    laws.push(Law::new("left star fixed point", 1, move |t: &[C::Elem]| {
        let x = &t[0];
        let l = c.add(&c.mul(x, &c.star(x)), &c.one());
        Check::compare(c, &l, &c.star(x))
    }));
    laws.push(Law::new("right star fixed point", 1, move |t: &[C::Elem]| {
        let x = &t[0];
        let l = c.add(&c.mul(&c.star(x), x), &c.one());
        Check::compare(c, &l, &c.star(x))
    }));
    laws.push(Law::new("star commutation", 1, move |t: &[C::Elem]| {
        let x = &t[0];
        Check::compare(c, &c.mul(x, &c.star(x)), &c.mul(&c.star(x), x))
    }));
    laws.push(Law::new("zero star identity", 0, move |_: &[C::Elem]| {
        Check::compare(c, &c.star(&c.zero()), &c.one())
    }));
    run_laws("conway-semiring", &laws, sampler, trials, &|e| c.render(e))
}

/// Hemiring axioms plus the plus identities, ending with `0⁺ = 0`.
pub fn conway_hemiring_laws<C: ConwayHemiring>(c: &C, sampler: &Sampler<C::Elem>, trials: usize) -> LawReport {
    let mut laws = hemiring_axioms(c);
    laws.push(Law::new("sum plus identity", 2, move |t: &[C::Elem]| {
        let (x, y) = (&t[0], &t[1]);
        let l = c.plus(&c.add(x, y));
        let z = c.star_then(x, y);
        let r = c.add(&c.then_star(&c.plus(&z), x), &c.plus(x));
        Check::compare(c, &l, &r)
    }));
    laws.push(Law::new("simplified product plus identity", 2, move |t: &[C::Elem]| {
        let (x, y) = (&t[0], &t[1]);
        let l = c.mul(&c.plus(&c.mul(x, y)), x);
        let r = c.mul(x, &c.plus(&c.mul(y, x)));
        Check::compare(c, &l, &r)
    }));
    laws.push(Law::new("left plus fixed point", 1, move |t: &[C::Elem]| {
        let x = &t[0];
        let l = c.add(&c.mul(x, &c.plus(x)), x);
        Check::compare(c, &l, &c.plus(x))
    }));
    laws.push(Law::new("right plus fixed point", 1, move |t: &[C::Elem]| {
        let x = &t[0];
        let l = c.add(&c.mul(&c.plus(x), x), x);
        Check::compare(c, &l, &c.plus(x))
    }));
    laws.push(Law::new("plus commutation", 1, move |t: &[C::Elem]| {
        let x = &t[0];
        Check::compare(c, &c.mul(&c.plus(x), x), &c.mul(x, &c.plus(x)))
    }));
    laws.push(Law::new("zero plus identity", 0, move |_: &[C::Elem]| {
        Check::compare(c, &c.plus(&c.zero()), &c.zero())
    }));
    run_laws("conway-hemiring", &laws, sampler, trials, &|e| c.render(e))
}

/// Module axioms, the sum/product omega identities, the omega fixed point and
/// the two star-omega shift identities, ending with `0^ω = 0`.
pub fn hemimodule_pair_laws<P: HemimodulePair>(
    p: &P,
    sampler: &Sampler<Elem<P::H>>,
    trials: usize,
) -> LawReport {
    let h = p.hemiring();
    let v = p.module();
    let cmp = move |l: &Elem<P::V>, r: &Elem<P::V>| Check::compare(v, l, r);
    let laws: Vec<Law<'_, Elem<P::H>>> = vec![
        Law::new("action left distributivity", 3, move |t: &[Elem<P::H>]| {
            let w = p.omega(&t[2]);
            let l = p.act(&h.add(&t[0], &t[1]), &w);
            let r = v.add(&p.act(&t[0], &w), &p.act(&t[1], &w));
            cmp(&l, &r)
        }),
        Law::new("action right distributivity", 3, move |t: &[Elem<P::H>]| {
            let (w1, w2) = (p.omega(&t[1]), p.omega(&t[2]));
            let l = p.act(&t[0], &v.add(&w1, &w2));
            let r = v.add(&p.act(&t[0], &w1), &p.act(&t[0], &w2));
            cmp(&l, &r)
        }),
        Law::new("action associativity", 3, move |t: &[Elem<P::H>]| {
            let w = p.omega(&t[2]);
            let l = p.act(&h.mul(&t[0], &t[1]), &w);
            let r = p.act(&t[0], &p.act(&t[1], &w));
            cmp(&l, &r)
        }),
        Law::new("action zero", 1, move |t: &[Elem<P::H>]| {
            let l = v.add(&p.act(&h.zero(), &p.omega(&t[0])), &p.act(&t[0], &v.zero()));
            cmp(&l, &v.zero())
        }),
        Law::new("sum omega identity", 2, move |t: &[Elem<P::H>]| {
            let (x, y) = (&t[0], &t[1]);
            let l = p.omega(&h.add(x, y));
            let z = h.star_then(x, y);
            let r = v.add(&p.star_act(&z, &p.omega(x)), &p.omega(&z));
            cmp(&l, &r)
        }),
        Law::new("product omega identity", 2, move |t: &[Elem<P::H>]| {
            let (x, y) = (&t[0], &t[1]);
            let l = p.omega(&h.mul(x, y));
            let r = p.act(x, &p.omega(&h.mul(y, x)));
            cmp(&l, &r)
        }),
        Law::new("omega fixed point", 1, move |t: &[Elem<P::H>]| {
            let x = &t[0];
            cmp(&p.act(x, &p.omega(x)), &p.omega(x))
        }),
        Law::new("left star omega identity", 2, move |t: &[Elem<P::H>]| {
            let (x, y) = (&t[0], &t[1]);
            let l = p.omega(&h.star_then(x, y));
            let r = p.star_act(x, &p.omega(&h.then_star(y, x)));
            cmp(&l, &r)
        }),
        Law::new("right star omega identity", 2, move |t: &[Elem<P::H>]| {
            let (x, y) = (&t[0], &t[1]);
            let l = p.omega(&h.then_star(y, x));
            let r = p.act(y, &p.omega(&h.star_then(x, y)));
            cmp(&l, &r)
        }),
        Law::new("zero omega identity", 0, move |_: &[Elem<P::H>]| cmp(&p.omega(&h.zero()), &v.zero())),
    ];
    run_laws("hemimodule", &laws, sampler, trials, &|e| h.render(e))
}

/// The three derived star identities relating `(s₁*s₂)*` and `s₂*(s₁⁺s₂⁺)*`.
pub fn derived_star_laws<C: ConwaySemiring>(c: &C, sampler: &Sampler<C::Elem>, trials: usize) -> LawReport {
    let plus = move |x: &C::Elem| c.mul(x, &c.star(x));
    let laws: Vec<Law<'_, C::Elem>> = vec![
        Law::new("star of starred product", 2, move |t: &[C::Elem]| {
            let (s1, s2) = (&t[0], &t[1]);
            let l = c.star(&c.mul(&c.star(s1), s2));
            let r = c.mul(&c.star(s2), &c.star(&c.mul(&plus(s1), &plus(s2))));
            Check::compare(c, &l, &r)
        }),
        Law::new("starred product expansion", 2, move |t: &[C::Elem]| {
            let (s1, s2) = (&t[0], &t[1]);
            let inner = c.star(&c.mul(&plus(s1), &plus(s2)));
            let l = c.mul(&c.star(s2), &inner);
            let r = c.add(&c.mul(&c.mul(&c.star(s1), &plus(s2)), &inner), &c.one());
            Check::compare(c, &l, &r)
        }),
        Law::new("star of starred product expansion", 2, move |t: &[C::Elem]| {
            let (s1, s2) = (&t[0], &t[1]);
            let inner = c.star(&c.mul(&plus(s1), &plus(s2)));
            let l = c.star(&c.mul(&c.star(s1), s2));
            let r = c.add(&c.mul(&c.mul(&c.star(s1), &plus(s2)), &inner), &c.one());
            Check::compare(c, &l, &r)
        }),
    ];
    run_laws("derived-star", &laws, sampler, trials, &|e| c.render(e))
}

/// Auxiliary omega identities for pairs whose hemiring also carries a star.
pub fn derived_omega_laws<P>(p: &P, sampler: &Sampler<Elem<P::H>>, trials: usize) -> LawReport
where
    P: HemimodulePair,
    P::H: ConwaySemiring,
{
    let h = p.hemiring();
    let v = p.module();
    let plus = move |x: &Elem<P::H>| h.mul(x, &h.star(x));
    let laws: Vec<Law<'_, Elem<P::H>>> = vec![
        Law::new("omega exchange of starred products", 2, move |t: &[Elem<P::H>]| {
            let (y, a) = (&t[0], &t[1]);
            let ysay = h.mul(&h.mul(&h.star(y), &plus(a)), y);
            let l = p.act(&h.mul(&h.star(&ysay), &h.star(y)), &p.omega(a));
            let asya = h.mul(&h.mul(&h.star(a), &plus(y)), a);
            let r = p.act(&h.star(&asya), &p.omega(a));
            Check::compare(v, &l, &r)
        }),
        Law::new("omega absorption of starred products", 2, move |t: &[Elem<P::H>]| {
            let (y, a) = (&t[0], &t[1]);
            let ysay = h.mul(&h.mul(&h.star(y), &plus(a)), y);
            let l = p.act(&h.star(&ysay), &p.omega(y));
            let r = p.act(&h.star(&h.mul(&h.star(y), a)), &p.omega(y));
            Check::compare(v, &l, &r)
        }),
        Law::new("omega symmetry of starred products", 2, move |t: &[Elem<P::H>]| {
            let (y, a) = (&t[0], &t[1]);
            let ysay = h.mul(&h.mul(&h.star(y), &plus(a)), y);
            let asya = h.mul(&h.mul(&h.star(a), &plus(y)), a);
            Check::compare(v, &p.omega(&ysay), &p.omega(&asya))
        }),
    ];
    run_laws("derived-omega", &laws, sampler, trials, &|e| h.render(e))
}

/// Checks that `a⁺b + b` solves `x = ax + b`.
pub fn iterative_fixed_point_check<C: ConwayHemiring>(c: &C, a: &C::Elem, b: &C::Elem) -> LawReport {
    let mut report = LawReport::new("iterative-fixed-point");
    report.trials = 1;
    let x = c.star_then(a, b);
    let rhs = c.add(&c.mul(a, &x), b);
    let check = Check::compare(c, &x, &rhs);
    if !check.holds {
        report.failures.push(LawFailure {
            law: "fixed point".into(),
            inputs: vec![c.render(a), c.render(b)],
            lhs: check.lhs,
            rhs: check.rhs,
        });
    }
    report
}

/// Star identities restricted to the ideal. The sampler must produce ideal
/// elements; a law is reported as failing if a star is undefined.
pub fn partial_conway_laws<C: PartialConwaySemiring>(c: &C, sampler: &Sampler<C::Elem>, trials: usize) -> LawReport {
    let star = move |x: &C::Elem| c.ideal_star(x);
    let undefined = || Check::values(false, "undefined".into(), String::new());
    let laws: Vec<Law<'_, C::Elem>> = vec![
        Law::new("ideal closure", 2, move |t: &[C::Elem]| {
            let ok = c.in_ideal(&t[0])
                && c.in_ideal(&c.add(&t[0], &t[1]))
                && c.in_ideal(&c.mul(&t[0], &t[1]))
                && c.in_ideal(&c.mul(&t[1], &t[0]));
            Check::values(ok, String::new(), String::new())
        }),
        Law::new("partial sum star identity", 2, move |t: &[C::Elem]| {
            let (a, b) = (&t[0], &t[1]);
            match (star(&c.add(a, b)), star(a), star(&c.mul(&star(a).unwrap_or_else(|| c.zero()), b))) {
                (Some(l), Some(sa), Some(inner)) => Check::compare(c, &l, &c.mul(&inner, &sa)),
                _ => undefined(),
            }
        }),
        Law::new("partial product star identity", 2, move |t: &[C::Elem]| {
            let (a, b) = (&t[0], &t[1]);
            match (star(&c.mul(a, b)), star(&c.mul(b, a))) {
                (Some(l), Some(ba)) => Check::compare(c, &l, &c.add(&c.one(), &c.mul(&c.mul(a, &ba), b))),
                _ => undefined(),
            }
        }),
        Law::new("partial star fixed point", 1, move |t: &[C::Elem]| {
            let a = &t[0];
            match star(a) {
                Some(s) => {
                    let l = c.add(&c.one(), &c.mul(a, &s));
                    let r = c.add(&c.one(), &c.mul(&s, a));
                    let first = Check::compare(c, &s, &l);
                    if first.holds { Check::compare(c, &s, &r) } else { first }
                }
                None => undefined(),
            }
        }),
    ];
    run_laws("partial-conway", &laws, sampler, trials, &|e| c.render(e))
}
