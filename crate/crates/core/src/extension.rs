//! The extension `S₀ ⊕ H` of a Conway hemiring by a semiring acting on it.

use std::marker::PhantomData;

use crate::algebra::{
    Check, ConwayHemiring, ConwaySemiring, Elem, HemimodulePair, Hemiring, Law, LawReport, Monoid,
    PartialConwaySemiring, Sampler, Semiring, run_laws,
};

pub const DEFAULT_VALIDATION_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtensionError {
    #[error("star is only defined on the ideal (scalar part must be zero)")]
    OutsideIdeal,
    #[error("compatibility conditions fail: {}", .0.failed_laws().join(", "))]
    Incompatible(LawReport),
}

/// Left and right actions of `S₀` on `H`.
pub trait BiAction<S: Semiring, H: Hemiring>: Send + Sync {
    fn left(&self, s: &S, h: &H, x: &S::Elem, a: &H::Elem) -> H::Elem;
    fn right(&self, s: &S, h: &H, a: &H::Elem, x: &S::Elem) -> H::Elem;
}

/// Scalars acting by repeated addition: `n·a = a·n = a + ⋯ + a`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NatAction;

pub fn biaction_nat() -> NatAction {
    NatAction
}

impl<H: Hemiring> BiAction<crate::instances::Nat, H> for NatAction {
    fn left(&self, _: &crate::instances::Nat, h: &H, x: &u64, a: &H::Elem) -> H::Elem {
        h.nfold(*x, a)
    }
    fn right(&self, _: &crate::instances::Nat, h: &H, a: &H::Elem, x: &u64) -> H::Elem {
        h.nfold(*x, a)
    }
}

impl<H: Hemiring> BiAction<crate::instances::Bool, H> for NatAction {
    fn left(&self, _: &crate::instances::Bool, h: &H, x: &bool, a: &H::Elem) -> H::Elem {
        h.nfold(u64::from(*x), a)
    }
    fn right(&self, _: &crate::instances::Bool, h: &H, a: &H::Elem, x: &bool) -> H::Elem {
        h.nfold(u64::from(*x), a)
    }
}

/// `S₀` acting on the module side, with the omega power of scalars.
pub trait ScalarOmega<S: Semiring, V: Monoid>: Send + Sync {
    fn act(&self, s: &S, v: &V, x: &S::Elem, w: &V::Elem) -> V::Elem;
    fn omega(&self, s: &S, v: &V, x: &S::Elem) -> V::Elem;
}

/// Repeated addition on the module side, with every scalar omega power zero.
/// For `𝔹` acting on omega languages this is the choice `1^ω = ∅`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroScalarOmega;

impl<V: Monoid> ScalarOmega<crate::instances::Bool, V> for ZeroScalarOmega {
    fn act(&self, _: &crate::instances::Bool, v: &V, x: &bool, w: &V::Elem) -> V::Elem {
        v.nfold(u64::from(*x), w)
    }
    fn omega(&self, _: &crate::instances::Bool, v: &V, _: &bool) -> V::Elem {
        v.zero()
    }
}

impl<V: Monoid> ScalarOmega<crate::instances::Nat, V> for ZeroScalarOmega {
    fn act(&self, _: &crate::instances::Nat, v: &V, x: &u64, w: &V::Elem) -> V::Elem {
        v.nfold(*x, w)
    }
    fn omega(&self, _: &crate::instances::Nat, v: &V, _: &u64) -> V::Elem {
        v.zero()
    }
}

/// Element `x ⊕ a` of the direct sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSum<X, A> {
    pub scalar: X,
    pub ideal: A,
}

#[derive(Debug, Clone)]
pub struct ExtensionAlgebra<S, H, B> {
    pub s0: S,
    pub h: H,
    pub action: B,
}

type Ext<S, H> = FormalSum<Elem<S>, Elem<H>>;

impl<S: Semiring, H: ConwayHemiring, B: BiAction<S, H>> ExtensionAlgebra<S, H, B> {
    pub fn new(s0: S, h: H, action: B) -> Self {
        ExtensionAlgebra { s0, h, action }
    }

    /// Builds the extension after checking the action laws and compatibility
    /// on `trials` samples.
    pub fn validated(
        s0: S,
        h: H,
        action: B,
        sampler: &Sampler<Ext<S, H>>,
        trials: usize,
    ) -> Result<Self, ExtensionError>
    where
        Elem<S>: Clone,
        Elem<H>: Clone,
    {
        let ext = ExtensionAlgebra::new(s0, h, action);
        let report = biaction_laws(&ext, sampler, trials);
        if report.passed() {
            Ok(ext)
        } else {
            Err(ExtensionError::Incompatible(report))
        }
    }

    pub fn elem(&self, scalar: Elem<S>, ideal: Elem<H>) -> Ext<S, H> {
        FormalSum { scalar, ideal }
    }

    pub fn scalar(&self, x: Elem<S>) -> Ext<S, H> {
        FormalSum { scalar: x, ideal: self.h.zero() }
    }

    pub fn ideal(&self, a: Elem<H>) -> Ext<S, H> {
        FormalSum { scalar: self.s0.zero(), ideal: a }
    }

    fn left(&self, x: &Elem<S>, a: &Elem<H>) -> Elem<H> {
        self.action.left(&self.s0, &self.h, x, a)
    }

    fn right(&self, a: &Elem<H>, x: &Elem<S>) -> Elem<H> {
        self.action.right(&self.s0, &self.h, a, x)
    }

    /// `(0, a)* = (1, a⁺)`.
    pub fn partial_star(&self, s: &Ext<S, H>) -> Result<Ext<S, H>, ExtensionError> {
        if !self.s0.is_zero(&s.scalar) {
            return Err(ExtensionError::OutsideIdeal);
        }
        Ok(FormalSum { scalar: self.s0.one(), ideal: self.h.plus(&s.ideal) })
    }

    /// Random elements from samplers of the two components.
    pub fn sampler(&self, seed: u64, scalars: Sampler<Elem<S>>, ideals: Sampler<Elem<H>>) -> Sampler<Ext<S, H>>
    where
        Elem<S>: Clone + Send + Sync + 'static,
        Elem<H>: Clone + Send + Sync + 'static,
    {
        Sampler::random(seed, move |rng| FormalSum { scalar: scalars.pick(rng), ideal: ideals.pick(rng) })
    }

    /// Samples restricted to the ideal `{0} × H`.
    pub fn ideal_sampler(&self, seed: u64, ideals: Sampler<Elem<H>>) -> Sampler<Ext<S, H>>
    where
        Elem<S>: Clone + Send + Sync + 'static,
        Elem<H>: Clone + Send + Sync + 'static,
    {
        let zero = self.s0.zero();
        Sampler::random(seed, move |rng| FormalSum { scalar: zero.clone(), ideal: ideals.pick(rng) })
    }
}

impl<S: Semiring, H: ConwayHemiring, B: BiAction<S, H>> Monoid for ExtensionAlgebra<S, H, B> {
    type Elem = Ext<S, H>;
    fn zero(&self) -> Self::Elem {
        FormalSum { scalar: self.s0.zero(), ideal: self.h.zero() }
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        FormalSum { scalar: self.s0.add(&a.scalar, &b.scalar), ideal: self.h.add(&a.ideal, &b.ideal) }
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.s0.equal(&a.scalar, &b.scalar) && self.h.equal(&a.ideal, &b.ideal)
    }
    fn render(&self, a: &Self::Elem) -> String {
        format!("{} ⊕ {}", self.s0.render(&a.scalar), self.h.render(&a.ideal))
    }
}

impl<S: Semiring, H: ConwayHemiring, B: BiAction<S, H>> Hemiring for ExtensionAlgebra<S, H, B> {
    /// `(x, a)(y, b) = (xy, xb + ay + ab)`.
    fn mul(&self, s: &Self::Elem, t: &Self::Elem) -> Self::Elem {
        let ideal = self.h.add(
            &self.h.add(&self.left(&s.scalar, &t.ideal), &self.right(&s.ideal, &t.scalar)),
            &self.h.mul(&s.ideal, &t.ideal),
        );
        FormalSum { scalar: self.s0.mul(&s.scalar, &t.scalar), ideal }
    }
    fn unit(&self) -> Option<Self::Elem> {
        Some(self.one())
    }
}

impl<S: Semiring, H: ConwayHemiring, B: BiAction<S, H>> Semiring for ExtensionAlgebra<S, H, B> {
    fn one(&self) -> Self::Elem {
        FormalSum { scalar: self.s0.one(), ideal: self.h.zero() }
    }
}

impl<S: Semiring, H: ConwayHemiring, B: BiAction<S, H>> PartialConwaySemiring for ExtensionAlgebra<S, H, B> {
    fn in_ideal(&self, a: &Self::Elem) -> bool {
        self.s0.is_zero(&a.scalar)
    }
    fn ideal_star(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.partial_star(a).ok()
    }
}

impl<S: ConwaySemiring, H: ConwayHemiring, B: BiAction<S, H>> ConwaySemiring for ExtensionAlgebra<S, H, B> {
    /// `(x + a)* = (x*a)*x* = (x*, (x*a)⁺x*)`.
    fn star(&self, s: &Self::Elem) -> Self::Elem {
        let xs = self.s0.star(&s.scalar);
        let b = self.left(&xs, &s.ideal);
        let bp = self.h.plus(&b);
        FormalSum { scalar: xs.clone(), ideal: self.right(&bp, &xs) }
    }
}

impl<S: ConwaySemiring, H: ConwayHemiring, B: BiAction<S, H>> ConwayHemiring for ExtensionAlgebra<S, H, B> {
    fn plus(&self, s: &Self::Elem) -> Self::Elem {
        self.mul(s, &self.star(s))
    }
}

/// `(S₀ ⊕ H, V)` for a hemimodule pair `(H, V)`, with the omega
/// `(x + a)^ω = (x*a)*x^ω + (x*a)^ω`.
pub struct ExtensionPair<S, P: HemimodulePair, B, O> {
    pub ext: ExtensionAlgebra<S, P::H, B>,
    pub pair: P,
    pub scalar_omega: O,
}

impl<S, P, B, O> ExtensionPair<S, P, B, O>
where
    S: ConwaySemiring,
    P: HemimodulePair,
    B: BiAction<S, P::H>,
    O: ScalarOmega<S, P::V>,
    P::H: Clone,
{
    pub fn new(s0: S, pair: P, action: B, scalar_omega: O) -> Self {
        let ext = ExtensionAlgebra::new(s0, pair.hemiring().clone(), action);
        ExtensionPair { ext, pair, scalar_omega }
    }
}

impl<S, P, B, O> ExtensionPair<S, P, B, O>
where
    S: ConwaySemiring,
    P: HemimodulePair,
    B: BiAction<S, P::H>,
    O: ScalarOmega<S, P::V>,
{
    pub fn full_omega(&self, s: &Ext<S, P::H>) -> Elem<P::V> {
        let e = &self.ext;
        let xs = e.s0.star(&s.scalar);
        let b = e.left(&xs, &s.ideal);
        let xw = self.scalar_omega.omega(&e.s0, self.pair.module(), &s.scalar);
        self.pair.module().add(&self.pair.star_act(&b, &xw), &self.pair.omega(&b))
    }
}

impl<S, P, B, O> HemimodulePair for ExtensionPair<S, P, B, O>
where
    S: ConwaySemiring,
    P: HemimodulePair,
    B: BiAction<S, P::H>,
    O: ScalarOmega<S, P::V>,
{
    type H = ExtensionAlgebra<S, P::H, B>;
    type V = P::V;
    fn hemiring(&self) -> &Self::H {
        &self.ext
    }
    fn module(&self) -> &Self::V {
        self.pair.module()
    }
    fn act(&self, s: &Ext<S, P::H>, v: &Elem<P::V>) -> Elem<P::V> {
        let m = self.pair.module();
        m.add(&self.scalar_omega.act(&self.ext.s0, m, &s.scalar, v), &self.pair.act(&s.ideal, v))
    }
    fn omega(&self, s: &Ext<S, P::H>) -> Elem<P::V> {
        self.full_omega(s)
    }
}

/// Left/right action laws, the mixed associativity `(xa)y = x(ay)` and the
/// compatibility conditions `(xa)⁺x = x(ax)⁺`, `(ax)⁺a = a(xa)⁺`. Tuples are
/// drawn from `sampler`; scalar and ideal parts are used independently.
pub fn biaction_laws<S, H, B>(ext: &ExtensionAlgebra<S, H, B>, sampler: &Sampler<Ext<S, H>>, trials: usize) -> LawReport
where
    S: Semiring,
    H: ConwayHemiring,
    B: BiAction<S, H>,
    Elem<S>: Clone,
    Elem<H>: Clone,
{
    let (s, h) = (&ext.s0, &ext.h);
    let l = move |x: &Elem<S>, a: &Elem<H>| ext.left(x, a);
    let r = move |a: &Elem<H>, x: &Elem<S>| ext.right(a, x);
    let cmp = move |x: &Elem<H>, y: &Elem<H>| Check::compare(h, x, y);
    type T<S, H> = [Ext<S, H>];
    let laws: Vec<Law<'_, Ext<S, H>>> = vec![
        Law::new("left action scalar distributivity", 2, move |t: &T<S, H>| {
            let a = &t[0].ideal;
            cmp(&l(&s.add(&t[0].scalar, &t[1].scalar), a), &h.add(&l(&t[0].scalar, a), &l(&t[1].scalar, a)))
        }),
        Law::new("left action ideal distributivity", 2, move |t: &T<S, H>| {
            let x = &t[0].scalar;
            cmp(&l(x, &h.add(&t[0].ideal, &t[1].ideal)), &h.add(&l(x, &t[0].ideal), &l(x, &t[1].ideal)))
        }),
        Law::new("left action associativity", 2, move |t: &T<S, H>| {
            let a = &t[0].ideal;
            cmp(&l(&s.mul(&t[0].scalar, &t[1].scalar), a), &l(&t[0].scalar, &l(&t[1].scalar, a)))
        }),
        Law::new("left action product", 2, move |t: &T<S, H>| {
            let x = &t[0].scalar;
            cmp(&l(x, &h.mul(&t[0].ideal, &t[1].ideal)), &h.mul(&l(x, &t[0].ideal), &t[1].ideal))
        }),
        Law::new("left action unit and zero", 1, move |t: &T<S, H>| {
            let a = &t[0].ideal;
            let first = cmp(&l(&s.one(), a), a);
            if !first.holds {
                return first;
            }
            cmp(&h.add(&l(&s.zero(), a), &l(&t[0].scalar, &h.zero())), &h.zero())
        }),
        Law::new("right action scalar distributivity", 2, move |t: &T<S, H>| {
            let a = &t[0].ideal;
            cmp(&r(a, &s.add(&t[0].scalar, &t[1].scalar)), &h.add(&r(a, &t[0].scalar), &r(a, &t[1].scalar)))
        }),
        Law::new("right action ideal distributivity", 2, move |t: &T<S, H>| {
            let x = &t[0].scalar;
            cmp(&r(&h.add(&t[0].ideal, &t[1].ideal), x), &h.add(&r(&t[0].ideal, x), &r(&t[1].ideal, x)))
        }),
        Law::new("right action associativity", 2, move |t: &T<S, H>| {
            let a = &t[0].ideal;
            cmp(&r(a, &s.mul(&t[0].scalar, &t[1].scalar)), &r(&r(a, &t[0].scalar), &t[1].scalar))
        }),
        Law::new("right action product", 2, move |t: &T<S, H>| {
            let x = &t[0].scalar;
            cmp(&r(&h.mul(&t[0].ideal, &t[1].ideal), x), &h.mul(&t[0].ideal, &r(&t[1].ideal, x)))
        }),
        Law::new("right action unit and zero", 1, move |t: &T<S, H>| {
            let a = &t[0].ideal;
            let first = cmp(&r(a, &s.one()), a);
            if !first.holds {
                return first;
            }
            cmp(&h.add(&r(a, &s.zero()), &r(&h.zero(), &t[0].scalar)), &h.zero())
        }),
        Law::new("mixed action associativity", 2, move |t: &T<S, H>| {
            let (x, a, y) = (&t[0].scalar, &t[0].ideal, &t[1].scalar);
            cmp(&r(&l(x, a), y), &l(x, &r(a, y)))
        }),
        Law::new("mixed action product", 2, move |t: &T<S, H>| {
            let (a, x, b) = (&t[0].ideal, &t[0].scalar, &t[1].ideal);
            cmp(&h.mul(&r(a, x), b), &h.mul(a, &l(x, b)))
        }),
        Law::new("plus compatibility (xa)⁺x = x(ax)⁺", 1, move |t: &T<S, H>| {
            let (x, a) = (&t[0].scalar, &t[0].ideal);
            cmp(&r(&h.plus(&l(x, a)), x), &l(x, &h.plus(&r(a, x))))
        }),
        Law::new("plus compatibility (ax)⁺a = a(xa)⁺", 1, move |t: &T<S, H>| {
            let (x, a) = (&t[0].scalar, &t[0].ideal);
            cmp(&h.mul(&h.plus(&r(a, x)), a), &h.mul(a, &h.plus(&l(x, a))))
        }),
    ];
    run_laws("biaction", &laws, sampler, trials, &|e| ext.render(e))
}

/// Omega compatibility `(xa)^ω = x(ax)^ω` for an extension pair.
pub fn omega_compatibility_laws<S, P, B, O>(
    ep: &ExtensionPair<S, P, B, O>,
    sampler: &Sampler<Ext<S, P::H>>,
    trials: usize,
) -> LawReport
where
    S: ConwaySemiring,
    P: HemimodulePair,
    B: BiAction<S, P::H>,
    O: ScalarOmega<S, P::V>,
{
    let e = &ep.ext;
    let v = ep.pair.module();
    let laws: Vec<Law<'_, Ext<S, P::H>>> = vec![Law::new("omega compatibility (xa)^ω = x(ax)^ω", 1, move |t: &[Ext<S, P::H>]| {
        let (x, a) = (&t[0].scalar, &t[0].ideal);
        let lhs = ep.pair.omega(&e.left(x, a));
        let rhs = ep.scalar_omega.act(&e.s0, v, x, &ep.pair.omega(&e.right(a, x)));
        Check::compare(v, &lhs, &rhs)
    })];
    run_laws("omega-compatibility", &laws, sampler, trials, &|el| e.render(el))
}

/// `τ(x + a) = xφ + aψ` into a partial Conway semiring.
pub struct ExtMorphism<'a, S: Monoid, H: Monoid, T: Monoid> {
    phi: Box<dyn Fn(&S::Elem) -> T::Elem + 'a>,
    psi: Box<dyn Fn(&H::Elem) -> T::Elem + 'a>,
    target: &'a T,
    _marker: PhantomData<(S, H)>,
}

impl<'a, S: Monoid, H: Monoid, T: Monoid> ExtMorphism<'a, S, H, T> {
    pub fn apply(&self, s: &FormalSum<S::Elem, H::Elem>) -> T::Elem {
        self.target.add(&(self.phi)(&s.scalar), &(self.psi)(&s.ideal))
    }
}

/// Builds `τ` after sampling the compatibility conditions
/// `(xφ)(aψ) = (xa)ψ` and `(aψ)(xφ) = (ax)ψ`; a failure is returned with its
/// witnesses.
pub fn ext_morphism<'a, S, H, B, T>(
    ext: &'a ExtensionAlgebra<S, H, B>,
    target: &'a T,
    phi: impl Fn(&Elem<S>) -> Elem<T> + 'a,
    psi: impl Fn(&Elem<H>) -> Elem<T> + 'a,
    sampler: &Sampler<Ext<S, H>>,
    trials: usize,
) -> Result<ExtMorphism<'a, S, H, T>, ExtensionError>
where
    S: Semiring,
    H: ConwayHemiring,
    B: BiAction<S, H>,
    T: PartialConwaySemiring,
    Elem<S>: Clone,
    Elem<H>: Clone,
{
    let report = {
        let (phi, psi) = (&phi, &psi);
        let laws: Vec<Law<'_, Ext<S, H>>> = vec![
            Law::new("left compatibility", 1, move |t: &[Ext<S, H>]| {
                let (x, a) = (&t[0].scalar, &t[0].ideal);
                Check::compare(target, &target.mul(&phi(x), &psi(a)), &psi(&ext.left(x, a)))
            }),
            Law::new("right compatibility", 1, move |t: &[Ext<S, H>]| {
                let (x, a) = (&t[0].scalar, &t[0].ideal);
                Check::compare(target, &target.mul(&psi(a), &phi(x)), &psi(&ext.right(a, x)))
            }),
            Law::new("ideal image", 1, move |t: &[Ext<S, H>]| {
                Check::values(target.in_ideal(&psi(&t[0].ideal)), String::new(), String::new())
            }),
        ];
        run_laws("morphism-compatibility", &laws, sampler, trials, &|e| ext.render(e))
    };
    if !report.passed() {
        return Err(ExtensionError::Incompatible(report));
    }
    Ok(ExtMorphism { phi: Box::new(phi), psi: Box::new(psi), target, _marker: PhantomData })
}

/// Checks that `τ` preserves sum, product, zero, one, the ideal and star on
/// ideal elements.
pub fn morphism_laws<S, H, B, T>(
    ext: &ExtensionAlgebra<S, H, B>,
    tau: &ExtMorphism<'_, S, H, T>,
    sampler: &Sampler<Ext<S, H>>,
    trials: usize,
) -> LawReport
where
    S: Semiring,
    H: ConwayHemiring,
    B: BiAction<S, H>,
    T: PartialConwaySemiring,
{
    let t = tau.target;
    let laws: Vec<Law<'_, Ext<S, H>>> = vec![
        Law::new("preserves sum", 2, move |x: &[Ext<S, H>]| {
            Check::compare(t, &tau.apply(&ext.add(&x[0], &x[1])), &t.add(&tau.apply(&x[0]), &tau.apply(&x[1])))
        }),
        Law::new("preserves product", 2, move |x: &[Ext<S, H>]| {
            Check::compare(t, &tau.apply(&ext.mul(&x[0], &x[1])), &t.mul(&tau.apply(&x[0]), &tau.apply(&x[1])))
        }),
        Law::new("preserves constants", 0, move |_: &[Ext<S, H>]| {
            let z = Check::compare(t, &tau.apply(&ext.zero()), &t.zero());
            if z.holds { Check::compare(t, &tau.apply(&ext.one()), &t.one()) } else { z }
        }),
        Law::new("preserves ideal star", 1, move |x: &[Ext<S, H>]| {
            let a = ext.ideal(x[0].ideal.clone());
            let image = tau.apply(&a);
            match (ext.partial_star(&a), t.ideal_star(&image)) {
                (Ok(s), Some(ts)) => Check::compare(t, &tau.apply(&s), &ts),
                _ => Check::values(false, "undefined".into(), String::new()),
            }
        }),
    ];
    run_laws("morphism", &laws, sampler, trials, &|e| ext.render(e))
}
