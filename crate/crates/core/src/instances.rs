use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    conway_hemiring_laws, conway_semiring_laws, derived_omega_laws, derived_star_laws, hemimodule_pair_laws,
    AlgebraError, ConwayHemiring, ConwaySemiring, HemimodulePair, Hemiring, LawReport, Monoid, MultiHemiring,
    Sampler, Semiring, REAL_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("unknown instance `{0}`")]
    Unknown(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("suite `{suite}` is not available for instance `{instance}`")]
    UnsupportedSuite { instance: String, suite: String },
}

macro_rules! constant_multi_hemiring {
    ($t:ty) => {
        impl MultiHemiring for $t {
            fn mul_mn(&self, a: &Self::Elem, _m: u64, b: &Self::Elem, _n: u64) -> Self::Elem {
                self.mul(a, b)
            }
        }
    };
}

macro_rules! plus_via_star {
    ($t:ty) => {
        impl ConwayHemiring for $t {
            fn plus(&self, a: &Self::Elem) -> Self::Elem {
                self.mul(a, &self.star(a))
            }
        }
    };
}

/// The omega power of a carrier acting on itself.
pub trait SelfOmega: ConwayHemiring {
    fn self_omega(&self, a: &Self::Elem) -> Self::Elem;
}

/// `(C, C)` with the action given by multiplication.
#[derive(Debug, Clone)]
pub struct SelfPair<C>(pub C);

impl<C: SelfOmega> HemimodulePair for SelfPair<C> {
    type H = C;
    type V = C;
    fn hemiring(&self) -> &C {
        &self.0
    }
    fn module(&self) -> &C {
        &self.0
    }
    fn act(&self, a: &C::Elem, v: &C::Elem) -> C::Elem {
        self.0.mul(a, v)
    }
    fn omega(&self, a: &C::Elem) -> C::Elem {
        self.0.self_omega(a)
    }
}

// ---------------------------------------------------------------------------
// Boolean

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Bool;

impl Monoid for Bool {
    type Elem = bool;
    fn zero(&self) -> bool {
        false
    }
    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn equal(&self, a: &bool, b: &bool) -> bool {
        a == b
    }
    fn render(&self, a: &bool) -> String {
        if *a { "1" } else { "0" }.to_string()
    }
    fn parse(&self, text: &str) -> Result<bool, AlgebraError> {
        match text.trim() {
            "1" | "true" => Ok(true),
            "0" | "false" => Ok(false),
            other => Err(AlgebraError::Parse(other.to_string())),
        }
    }
    fn nfold(&self, n: u64, a: &bool) -> bool {
        n > 0 && *a
    }
}

impl Hemiring for Bool {
    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn unit(&self) -> Option<bool> {
        Some(true)
    }
}

impl Semiring for Bool {
    fn one(&self) -> bool {
        true
    }
}

impl ConwaySemiring for Bool {
    fn star(&self, _a: &bool) -> bool {
        true
    }
}

plus_via_star!(Bool);
constant_multi_hemiring!(Bool);

impl SelfOmega for Bool {
    fn self_omega(&self, a: &bool) -> bool {
        *a
    }
}

impl Bool {
    pub fn sampler(&self) -> Sampler<bool> {
        Sampler::exhaustive(vec![false, true])
    }
}

// ---------------------------------------------------------------------------
// Natural numbers

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Nat;

impl Monoid for Nat {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        a.saturating_add(*b)
    }
    fn equal(&self, a: &u64, b: &u64) -> bool {
        a == b
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, text: &str) -> Result<u64, AlgebraError> {
        text.trim().parse().map_err(|_| AlgebraError::Parse(text.to_string()))
    }
    fn nfold(&self, n: u64, a: &u64) -> u64 {
        n.saturating_mul(*a)
    }
}

impl Hemiring for Nat {
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a.saturating_mul(*b)
    }
    fn unit(&self) -> Option<u64> {
        Some(1)
    }
}

impl Semiring for Nat {
    fn one(&self) -> u64 {
        1
    }
}

constant_multi_hemiring!(Nat);

impl Nat {
    pub fn sampler(&self, seed: u64) -> Sampler<u64> {
        Sampler::random(seed, |rng| rng.gen_range(0..10))
    }
}

// ---------------------------------------------------------------------------
// Min-plus

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tropical {
    Fin(u64),
    Inf,
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::Fin(v) => write!(f, "{v}"),
            Tropical::Inf => write!(f, "inf"),
        }
    }
}

pub const MINPLUS_DEFAULT_CAP: u64 = (1 << 31) - 1;

/// `(ℕ ∪ {∞}, min, +, ∞, 0)`; finite sums saturate at `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinPlus {
    pub cap: u64,
}

impl Default for MinPlus {
    fn default() -> Self {
        MinPlus { cap: MINPLUS_DEFAULT_CAP }
    }
}

impl MinPlus {
    pub fn fin(&self, v: u64) -> Tropical {
        Tropical::Fin(v.min(self.cap))
    }

    pub fn sampler(&self, seed: u64) -> Sampler<Tropical> {
        Sampler::random(seed, |rng| {
            if rng.gen_bool(0.1) {
                Tropical::Inf
            } else {
                Tropical::Fin(rng.gen_range(0..20))
            }
        })
    }
}

impl Monoid for MinPlus {
    type Elem = Tropical;
    fn zero(&self) -> Tropical {
        Tropical::Inf
    }
    fn add(&self, a: &Tropical, b: &Tropical) -> Tropical {
        *a.min(b)
    }
    fn equal(&self, a: &Tropical, b: &Tropical) -> bool {
        a == b
    }
    fn render(&self, a: &Tropical) -> String {
        a.to_string()
    }
    fn parse(&self, text: &str) -> Result<Tropical, AlgebraError> {
        match text.trim() {
            "inf" => Ok(Tropical::Inf),
            t => t.parse::<u64>().map(|v| self.fin(v)).map_err(|_| AlgebraError::Parse(t.to_string())),
        }
    }
    fn nfold(&self, n: u64, a: &Tropical) -> Tropical {
        if n == 0 {
            Tropical::Inf
        } else {
            *a
        }
    }
}

impl Hemiring for MinPlus {
    fn mul(&self, a: &Tropical, b: &Tropical) -> Tropical {
        match (a, b) {
            (Tropical::Fin(x), Tropical::Fin(y)) => self.fin(x.saturating_add(*y)),
            _ => Tropical::Inf,
        }
    }
    fn unit(&self) -> Option<Tropical> {
        Some(Tropical::Fin(0))
    }
}

impl Semiring for MinPlus {
    fn one(&self) -> Tropical {
        Tropical::Fin(0)
    }
}

impl ConwaySemiring for MinPlus {
    fn star(&self, _a: &Tropical) -> Tropical {
        Tropical::Fin(0)
    }
}

plus_via_star!(MinPlus);
constant_multi_hemiring!(MinPlus);

impl SelfOmega for MinPlus {
    /// Infinite sum of copies of `a`: zero stays zero, anything positive diverges.
    fn self_omega(&self, a: &Tropical) -> Tropical {
        match a {
            Tropical::Fin(0) => Tropical::Fin(0),
            _ => Tropical::Inf,
        }
    }
}

// ---------------------------------------------------------------------------
// Extended nonnegative reals under sup

/// `{x ≥ 0} ∪ {−∞, ∞}` with sup; `−∞` is the zero.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ExtReal;

pub fn real_eq(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        (a - b).abs() <= REAL_TOLERANCE
    }
}

pub fn render_real(a: f64) -> String {
    if a == f64::INFINITY {
        "inf".into()
    } else if a == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{a}")
    }
}

pub fn parse_real(text: &str) -> Result<f64, AlgebraError> {
    match text.trim() {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => match t.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
            _ => Err(AlgebraError::Parse(t.to_string())),
        },
    }
}

impl Monoid for ExtReal {
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
    fn nfold(&self, n: u64, a: &f64) -> f64 {
        if n == 0 {
            f64::NEG_INFINITY
        } else {
            *a
        }
    }
}

// ---------------------------------------------------------------------------
// Finite distributive lattice

pub const LATTICE_MAX_BASE: u8 = 5;

/// Subsets of `{a, b, …}` (at most five letters) as bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    base: u8,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice { base: 3 }
    }
}

impl Lattice {
    pub fn new(base: u8) -> Result<Self, InstanceError> {
        if base == 0 || base > LATTICE_MAX_BASE {
            return Err(InstanceError::InvalidParam(format!("lattice base size {base} not in 1..=5")));
        }
        Ok(Lattice { base })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn top(&self) -> u32 {
        (1u32 << self.base) - 1
    }

    pub fn elements(&self) -> Vec<u32> {
        (0..=self.top()).collect()
    }

    pub fn sampler(&self) -> Sampler<u32> {
        Sampler::exhaustive(self.elements())
    }

    /// Uniform random elements, for checks whose arity makes enumeration too slow.
    pub fn random_sampler(&self, seed: u64) -> Sampler<u32> {
        let top = self.top();
        Sampler::random(seed, move |rng| rng.gen_range(0..=top))
    }
}

impl Monoid for Lattice {
    type Elem = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        a | b
    }
    fn equal(&self, a: &u32, b: &u32) -> bool {
        a == b
    }
    fn render(&self, a: &u32) -> String {
        let items: Vec<String> = (0..self.base)
            .filter(|i| a & (1 << i) != 0)
            .map(|i| ((b'a' + i) as char).to_string())
            .collect();
        format!("{{{}}}", items.join(","))
    }
    fn parse(&self, text: &str) -> Result<u32, AlgebraError> {
        let err = || AlgebraError::Parse(text.to_string());
        let inner = text.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(err)?;
        let mut mask = 0u32;
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let mut chars = item.chars();
            let c = chars.next().ok_or_else(err)?;
            if chars.next().is_some() || !c.is_ascii_lowercase() {
                return Err(err());
            }
            let i = c as u8 - b'a';
            if i >= self.base {
                return Err(err());
            }
            mask |= 1 << i;
        }
        Ok(mask)
    }
    fn nfold(&self, n: u64, a: &u32) -> u32 {
        if n == 0 {
            0
        } else {
            *a
        }
    }
}

impl Hemiring for Lattice {
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        a & b
    }
    fn unit(&self) -> Option<u32> {
        Some(self.top())
    }
}

impl Semiring for Lattice {
    fn one(&self) -> u32 {
        self.top()
    }
}

impl ConwaySemiring for Lattice {
    fn star(&self, _a: &u32) -> u32 {
        self.top()
    }
}

plus_via_star!(Lattice);
constant_multi_hemiring!(Lattice);

impl SelfOmega for Lattice {
    fn self_omega(&self, a: &u32) -> u32 {
        *a
    }
}

// ---------------------------------------------------------------------------
// Registry

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_base: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minplus_cap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Bool(Bool),
    Nat(Nat),
    MinPlus(MinPlus),
    ExtReal(ExtReal),
    Lattice(Lattice),
}

pub const INSTANCE_NAMES: [&str; 5] = ["bool", "nat", "minplus", "extreal", "lattice"];

pub fn make_instance(name: &str, params: &InstanceParams) -> Result<Instance, InstanceError> {
    match name {
        "bool" => Ok(Instance::Bool(Bool)),
        "nat" => Ok(Instance::Nat(Nat)),
        "minplus" => {
            let cap = params.minplus_cap.unwrap_or(MINPLUS_DEFAULT_CAP);
            if cap == 0 {
                return Err(InstanceError::InvalidParam("minplus cap must be positive".into()));
            }
            Ok(Instance::MinPlus(MinPlus { cap }))
        }
        "extreal" => Ok(Instance::ExtReal(ExtReal)),
        "lattice" => Ok(Instance::Lattice(Lattice::new(params.lattice_base.unwrap_or(3))?)),
        other => Err(InstanceError::Unknown(other.to_string())),
    }
}

fn conway_suites<C>(c: C, sampler: &Sampler<C::Elem>, suite: &str, trials: usize) -> Option<LawReport>
where
    C: ConwaySemiring + SelfOmega + Clone,
{
    match suite {
        "conway-semiring" => {
            let mut r = conway_semiring_laws(&c, sampler, trials);
            r.absorb(derived_star_laws(&c, sampler, trials));
            r.suite = suite.into();
            Some(r)
        }
        "conway-hemiring" => Some(conway_hemiring_laws(&crate::algebra::plus_from_star(c), sampler, trials)),
        "hemimodule" => {
            let p = SelfPair(c);
            let mut r = hemimodule_pair_laws(&p, sampler, trials);
            r.absorb(derived_omega_laws(&p, sampler, trials));
            r.suite = suite.into();
            Some(r)
        }
        _ => None,
    }
}

impl Instance {
    pub fn name(&self) -> &'static str {
        match self {
            Instance::Bool(_) => "bool",
            Instance::Nat(_) => "nat",
            Instance::MinPlus(_) => "minplus",
            Instance::ExtReal(_) => "extreal",
            Instance::Lattice(_) => "lattice",
        }
    }

    /// Runs a named law suite with the instance's default sampler.
    pub fn run_suite(&self, suite: &str, trials: usize, seed: u64) -> Result<LawReport, InstanceError> {
        let unsupported = || InstanceError::UnsupportedSuite { instance: self.name().into(), suite: suite.into() };
        let report = match self {
            Instance::Bool(c) => conway_suites(*c, &c.sampler(), suite, trials),
            Instance::MinPlus(c) => conway_suites(*c, &c.sampler(seed), suite, trials),
            Instance::Lattice(c) => conway_suites(*c, &c.sampler(), suite, trials),
            Instance::Nat(_) | Instance::ExtReal(_) => None,
        };
        report.ok_or_else(unsupported)
    }
}
