//! Values of the local Whittaker newform on the coset representatives `g_{t,ℓ,v}`.
//!
//! `W(g_{t,ℓ,v}) = Σ_{χ ∈ 𝔛_{≤ℓ}} c_{t,ℓ}(χ) χ(v)` with closed forms for the coefficients
//! `c_{t,ℓ}(χ)`. Values are tracked exactly where the closed forms pin them down (up to the
//! recorded [`Ambiguity`]) and by valuation otherwise. Valuations are normalized with
//! `val_p(p) = 1`; every character here lives over `Q_p`, so `q = p`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{phi, pow};
use crate::characters::{enumerate_chars, AdditiveChar, LocalChar};
use crate::cyclotomic::{CycNum, ScaledCyclotomic};
use crate::error::{invalid, precondition, Error, Result};
use crate::ext::{q, qi, ExtRational, Q};
use crate::gauss::{eps_factor, eps_valuation, gauss_bruteforce, scaled_valuation};
use crate::reps::{twist_minimal_range, Kind, Pi0, RepDescriptor};

/// Exact evaluation is attempted only while every character involved has `φ(p^level)` at most
/// this; beyond it the padic embedding gets too wide and terms are tracked by valuation.
pub const EXACT_LIMIT: u64 = 64;

/// How much of an exact value is actually known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambiguity {
    None,
    Sign,
    /// Up to a root of unity (always of valuation 0).
    RootOfUnity,
    /// Up to an unspecified `p`-adic unit such as an unknown power `q^{σn}` with `val = 0`.
    Unit,
    /// One of the listed candidates, up to a common sign.
    OneOf,
}

/// A coset representative `g_{t,ℓ,v}` for `K_1(p^a)`, with `v` reduced mod `p^{min(ℓ, a-ℓ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetIndex {
    pub t: i64,
    pub ell: u32,
    pub v: i64,
}

impl CosetIndex {
    pub fn new(a: u32, p: u64, t: i64, ell: u32, v: i64) -> Result<CosetIndex> {
        if ell > a {
            return Err(invalid(format!("ℓ = {ell} exceeds a(π) = {a}")));
        }
        let m = pow(p, ell.min(a - ell)) as i64;
        if m == 1 {
            return Ok(CosetIndex { t, ell, v: 1 });
        }
        if v.rem_euclid(p as i64) == 0 {
            return Err(invalid(format!("v = {v} is not a unit at {p}")));
        }
        Ok(CosetIndex { t, ell, v: v.rem_euclid(m) })
    }

    /// Index with `v = 1`.
    pub fn at(a: u32, t: i64, ell: u32) -> CosetIndex {
        assert!(ell <= a);
        CosetIndex { t, ell, v: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WhittakerVal {
    pub valuation: ExtRational,
    #[serde(serialize_with = "ser_opt_scaled")]
    pub exact: Option<ScaledCyclotomic>,
    pub ambiguity: Ambiguity,
    /// `valuation` is only a lower bound (possible cancellation or an unresolved `σ` power).
    pub lower_bound_only: bool,
    #[serde(serialize_with = "ser_scaled_vec")]
    pub candidates: Vec<ScaledCyclotomic>,
}

fn ser_opt_scaled<S: serde::Serializer>(x: &Option<ScaledCyclotomic>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_scaled_vec<S: serde::Serializer>(x: &[ScaledCyclotomic], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

impl WhittakerVal {
    pub fn zero() -> WhittakerVal {
        WhittakerVal {
            valuation: ExtRational::Inf,
            exact: Some(ScaledCyclotomic::zero()),
            ambiguity: Ambiguity::None,
            lower_bound_only: false,
            candidates: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_inf() && !self.lower_bound_only
    }

    /// Whether `valuation` is the true valuation.
    pub fn valuation_is_exact(&self) -> bool {
        !self.lower_bound_only
    }

    fn from_term(term: Term) -> WhittakerVal {
        WhittakerVal {
            valuation: ExtRational::Fin(term.val),
            exact: term.value,
            ambiguity: term.amb,
            lower_bound_only: term.lower,
            candidates: vec![],
        }
    }

    fn reflected(mut self) -> WhittakerVal {
        if matches!(self.ambiguity, Ambiguity::None | Ambiguity::Sign) && !self.is_zero() {
            self.ambiguity = Ambiguity::RootOfUnity;
        }
        self
    }
}

/// One nonzero Fourier coefficient.
#[derive(Clone, Debug)]
struct Term {
    val: Q,
    lower: bool,
    value: Option<ScaledCyclotomic>,
    amb: Ambiguity,
}

impl Term {
    fn exact(val: Q, value: Option<ScaledCyclotomic>, amb: Ambiguity) -> Term {
        Term { val, lower: false, value, amb }
    }

    fn bound(val: Q) -> Term {
        Term { val, lower: true, value: None, amb: Ambiguity::Unit }
    }
}

/// `(t, ℓ) ↦ (t + 2ℓ - a, a - ℓ)`; the value changes by `±ζ` and `v` by a sign.
pub fn atkin_lehner_reflect(t: i64, ell: u32, a: u32) -> (i64, u32) {
    assert!(ell <= a, "ℓ = {ell} exceeds a = {a}");
    (t + 2 * ell as i64 - a as i64, a - ell)
}

/// `W(g_{t,ℓ,v})` for `ℓ ∈ {0, a}`.
pub fn boundary_value(pi: &RepDescriptor, t: i64, ell: u32) -> Result<WhittakerVal> {
    let a = pi.conductor();
    if a == 0 {
        return Err(invalid("conductor exponent must be positive"));
    }
    if ell != 0 && ell != a {
        return Err(invalid(format!("ℓ = {ell} is not a boundary index for a = {a}")));
    }
    let s = t + ell as i64;
    let e = if a == 1 && s >= -1 {
        -(1 + s)
    } else if a > 1 && s == -(a as i64) {
        0
    } else {
        return Ok(WhittakerVal::zero());
    };
    let value = ScaledCyclotomic::new(CycNum::one(), pi.p(), qi(e));
    Ok(WhittakerVal {
        valuation: ExtRational::int(e),
        exact: Some(value),
        ambiguity: Ambiguity::RootOfUnity,
        lower_bound_only: false,
        candidates: vec![],
    })
}

/// Whether `W(g_{t,ℓ,v}) = 0` is forced, given the conductor `a0` of a twist-minimal twist.
pub fn is_vanishing(pi: &RepDescriptor, a0: u32, t: i64, ell: u32) -> bool {
    let a = pi.conductor() as i64;
    let l = ell as i64;
    let m = a.max(2 * l);
    let sc = pi.is_supercuspidal();
    let half = 2 * l == a;
    if t < -m || (t > -m && !half) || (sc && t > -(a0 as i64)) || (pi.p() != 2 && sc && t != -m) {
        return true;
    }
    if pi.p() != 2 || !half {
        return false;
    }
    let a0 = a0 as i64;
    match pi.kind() {
        Kind::Type1a { .. } | Kind::Type1b { .. } => (a0 < a && t <= -a) || (a0 <= a - 2 && t <= -a + 1),
        Kind::Type3 { .. } | Kind::Type4 { .. } => t <= -a + 1,
        Kind::Type5 { .. } => t <= -a + 2,
        Kind::Type2 { .. } => false,
    }
}

/// Conductors a twist-minimal twist of `π` may have.
pub fn twist_minimal_conductors(pi: &RepDescriptor) -> Vec<u32> {
    match pi.kind() {
        Kind::Type1b { base, .. } => vec![match base {
            Pi0::Pi3 => 3,
            Pi0::Pi7 => 7,
        }],
        Kind::Type1a { .. } if !pi.is_twist_minimal() => twist_minimal_range(pi.conductor()),
        _ => vec![pi.conductor()],
    }
}

fn eps(chi: &LocalChar) -> ScaledCyclotomic {
    static CACHE: OnceLock<Mutex<HashMap<LocalChar, ScaledCyclotomic>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(chi) {
        return e.clone();
    }
    let e = eps_factor(chi, &AdditiveChar::standard(chi.p()));
    cache.lock().unwrap().insert(chi.clone(), e.clone());
    e
}

/// `val_p ε(½, χ)`.
fn ve(chi: &LocalChar) -> Q {
    eps_valuation(chi, 1).expect("tame characters have a Teichmüller exponent").finite().cloned().unwrap()
}

fn qpow(p: u64, e: Q) -> ScaledCyclotomic {
    ScaledCyclotomic::new(CycNum::one(), p, e)
}

fn rat(x: Q) -> ScaledCyclotomic {
    ScaledCyclotomic::from_cyc(CycNum::from_q(&x))
}

/// Applies the unresolved factor `q^{-nσ}` to a coefficient of valuation `val`.
fn with_sigma(val: Q, value: Option<ScaledCyclotomic>, amb: Ambiguity, n: i64, sv: &Q) -> Term {
    if n == 0 {
        Term::exact(val, value, amb)
    } else if sv.is_zero() {
        Term::exact(val, None, Ambiguity::Unit)
    } else {
        Term::bound(val - qi(n.abs()) * sv)
    }
}

/// The nonzero coefficient `c_{t,ℓ}(χ)` of a type with closed forms, `1 ≤ ℓ ≤ a/2`.
fn coeff_term(pi: &RepDescriptor, t: i64, ell: u32, chi: &LocalChar, exact: bool, sv: &Q) -> Result<Option<Term>> {
    let p = pi.p();
    let a = pi.conductor();
    let l = ell as i64;
    let qm1 = qi(p as i64 - 1);
    let one_over_qm1 = Q::one() / &qm1;
    let chi = &chi.unit_part();
    let trivial = chi.is_trivial();
    let ac = chi.conductor();
    let want = |f: &dyn Fn() -> ScaledCyclotomic| if exact { Some(f()) } else { None };
    match pi.kind() {
        Kind::Type2 { .. } => Err(invalid("Type 2 has conductor 1; use boundary_value")),
        Kind::Type1a { .. } | Kind::Type1b { .. } => {
            if trivial {
                if t != -(a as i64) || ell != 1 {
                    return Ok(None);
                }
                let scale = if matches!(pi.kind(), Kind::Type1a { .. }) { -one_over_qm1.clone() } else { -Q::one() };
                return Ok(Some(Term::exact(Q::zero(), want(&|| rat(scale.clone())), Ambiguity::Sign)));
            }
            if ac != ell {
                return Ok(None);
            }
            let (tc, known) = pi.twist_conductor(chi);
            if !known {
                return Err(Error::Undetermined(format!("a(χπ) for χ = {chi} is not determined by {pi}")));
            }
            if t != -(tc as i64) {
                return Ok(None);
            }
            let base_val = qi(1) - q(l, 2);
            let value = || eps(chi).mul(&qpow(p, base_val.clone())).scale(&one_over_qm1);
            if chi.is_quadratic_on_units() {
                return Ok(Some(Term::exact(&base_val + ve(chi), want(&value), Ambiguity::Sign)));
            }
            if a == 2 {
                return Ok(Some(Term::bound(q(-1, 2) + q(1, p as i64 - 1))));
            }
            Ok(Some(Term::exact(&base_val + ve(chi), want(&value), Ambiguity::RootOfUnity)))
        }
        Kind::Type3 { mu } | Kind::Type4 { mu, .. } => {
            let mu = &mu.unit_part();
            let amu = mu.conductor();
            if trivial {
                if t != -2 * amu as i64 || ell != 1 {
                    return Ok(None);
                }
                let s = mu.eval_unit(-1).sign().unwrap();
                return Ok(Some(Term::exact(Q::zero(), want(&|| rat(qi(-s) / &qm1)), Ambiguity::None)));
            }
            if chi.same_as(mu) {
                if ell != amu {
                    return Ok(None);
                }
                let em = ve(mu);
                let type4 = matches!(pi.kind(), Kind::Type4 { .. });
                return Ok(match t {
                    -2 => Some(Term::exact(
                        q(-l, 2) + &em,
                        want(&|| eps(mu).mul(&qpow(p, q(-l, 2))).scale(&one_over_qm1)),
                        Ambiguity::None,
                    )),
                    -1 if type4 => Some(Term::bound(q(-(l + 1), 2) + &em - sv)),
                    t if t >= 0 && type4 => Some(Term::bound(q(-(t + l + 2), 2) + &em - qi(t + 2) * sv)),
                    t if t >= -1 => {
                        let e = -(qi(t + 2) + q(l, 2));
                        Some(Term::exact(
                            &e + &em,
                            want(&|| eps(mu).mul(&qpow(p, e.clone())).scale(&-qi(p as i64 + 1))),
                            Ambiguity::None,
                        ))
                    }
                    _ => None,
                });
            }
            let cm = chi.inv().mul(mu);
            if ac != ell || t != -2 * chi.mul(mu).conductor() as i64 {
                return Ok(None);
            }
            let base = qi(1) - q(l, 2);
            let val = &base + qi(2) * ve(&cm) + ve(chi);
            let value = || {
                let e = eps(&cm);
                e.mul(&e).mul(&eps(chi)).mul(&qpow(p, base.clone())).scale(&one_over_qm1)
            };
            Ok(Some(Term::exact(val, want(&value), Ambiguity::None)))
        }
        Kind::Type5 { mu, .. } => {
            let mu = &mu.unit_part();
            let amu = mu.conductor();
            let amu2 = mu.pow(2).conductor() as i64;
            if trivial {
                if t != -2 * amu as i64 || ell != 1 {
                    return Ok(None);
                }
                let s = mu.eval_unit(-1).sign().expect("μ(-1) = ±1");
                return Ok(Some(Term::exact(Q::zero(), want(&|| rat(qi(-s) / &qm1)), Ambiguity::None)));
            }
            let side = if chi.same_as(mu) {
                Some(1i64)
            } else if chi.same_as(&mu.inv()) {
                Some(-1)
            } else {
                None
            };
            if let Some(s) = side {
                if ell != amu {
                    return Ok(None);
                }
                let (m2, m1) = (mu.pow(-2 * s), mu.pow(s));
                let base = ve(&m2) + ve(&m1);
                let prod = || eps(&m2).mul(&eps(&m1));
                if t == -amu2 - 1 {
                    let e = -q(l - 1, 2);
                    let value = || prod().mul(&qpow(p, e.clone())).scale(&-one_over_qm1.clone());
                    return Ok(Some(with_sigma(&base + &e, want(&value), Ambiguity::None, s * (1 - amu2), sv)));
                }
                if t >= -amu2 {
                    let e = -q(t + l + amu2, 2);
                    let value = || prod().mul(&qpow(p, e.clone()));
                    return Ok(Some(with_sigma(&base + &e, want(&value), Ambiguity::None, -s * (t + 2 * amu2), sv)));
                }
                return Ok(None);
            }
            let (c1, c2) = (chi.mul(mu).conductor() as i64, chi.mul(&mu.inv()).conductor() as i64);
            if ac != ell || t != -c1 - c2 {
                return Ok(None);
            }
            let (x1, x2) = (chi.inv().mul(&mu.inv()), chi.inv().mul(mu));
            let base = qi(1) - q(l, 2);
            let val = ve(&x1) + ve(&x2) + ve(chi) + &base;
            let value = || eps(&x1).mul(&eps(&x2)).mul(&eps(chi)).mul(&qpow(p, base.clone())).scale(&one_over_qm1);
            Ok(Some(with_sigma(val, want(&value), Ambiguity::None, c2 - c1, sv)))
        }
    }
}

fn check_half_range(pi: &RepDescriptor, ell: u32) -> Result<()> {
    if ell == 0 || 2 * ell > pi.conductor() {
        return Err(precondition(format!("closed forms need 1 ≤ ℓ ≤ a/2, got ℓ = {ell}, a = {}", pi.conductor())));
    }
    Ok(())
}

fn exact_feasible(pi: &RepDescriptor, ell: u32) -> bool {
    let level = pi.mu().map_or(ell, |m| m.conductor().max(ell));
    phi(pow(pi.p(), level)) <= EXACT_LIMIT
}

/// `c_{t,ℓ}(χ)` for Types 1a, 3, 4 and 5 and `1 ≤ ℓ ≤ a/2`, with `σ` entering through `sv`.
pub fn coeff_c(pi: &RepDescriptor, t: i64, ell: u32, chi: &LocalChar, sv: &Q) -> Result<WhittakerVal> {
    if matches!(pi.kind(), Kind::Type1b { .. } | Kind::Type2 { .. }) {
        return Err(invalid(format!("no closed-form coefficients for {}; use assemble_w", pi.tag())));
    }
    check_half_range(pi, ell)?;
    if chi.p() != pi.p() || chi.conductor() > ell || !chi.value_at_p().is_one() {
        return Err(precondition(format!("{chi} is not in 𝔛_≤{ell}")));
    }
    if let Kind::Type3 { mu } | Kind::Type4 { mu, .. } | Kind::Type5 { mu, .. } = pi.kind() {
        if !mu.value_at_p().is_one() && matches!(pi.kind(), Kind::Type3 { .. }) {
            return Err(precondition("Type 3 coefficients assume μ(p) = 1"));
        }
    }
    let exact = exact_feasible(pi, ell);
    Ok(match coeff_term(pi, t, ell, chi, exact, sv)? {
        Some(term) => WhittakerVal::from_term(term),
        None => WhittakerVal::zero(),
    })
}

/// `W(g_{t,ℓ,v})`. Values at `ℓ > a/2` come from the reflected index.
pub fn assemble_w(pi: &RepDescriptor, idx: &CosetIndex, sv: &Q, exact: bool) -> Result<WhittakerVal> {
    let a = pi.conductor();
    let (t, ell) = (idx.t, idx.ell);
    if ell > a {
        return Err(invalid(format!("ℓ = {ell} exceeds a(π) = {a}")));
    }
    if ell == 0 || ell == a {
        return boundary_value(pi, t, ell);
    }
    if 2 * ell > a {
        let (t2, l2) = atkin_lehner_reflect(t, ell, a);
        let idx2 = CosetIndex::new(a, pi.p(), t2, l2, -idx.v)?;
        return Ok(assemble_w(pi, &idx2, sv, exact)?.reflected());
    }
    if twist_minimal_conductors(pi).into_iter().all(|a0| is_vanishing(pi, a0, t, ell)) {
        return Ok(WhittakerVal::zero());
    }
    let exact = exact && exact_feasible(pi, ell);
    let mut terms = vec![];
    for chi in enumerate_chars(pi.p(), ell) {
        if let Some(mut term) = coeff_term(pi, t, ell, &chi, exact, sv)? {
            let cv = chi.eval_unit(idx.v).to_cyc();
            term.value = term.value.map(|v| v.mul_cyc(&cv));
            terms.push(term);
        }
    }
    combine(pi.p(), terms)
}

const MAX_SIGNS: usize = 6;

fn combine(p: u64, terms: Vec<Term>) -> Result<WhittakerVal> {
    if terms.is_empty() {
        return Ok(WhittakerVal::zero());
    }
    let resolvable = terms
        .iter()
        .all(|x| !x.lower && x.value.is_some() && matches!(x.amb, Ambiguity::None | Ambiguity::Sign));
    let signed: Vec<usize> = (0..terms.len()).filter(|&i| terms[i].amb == Ambiguity::Sign).collect();
    if resolvable && signed.len() <= MAX_SIGNS {
        if terms.len() == 1 {
            let x = &terms[0];
            let value = x.value.clone().unwrap();
            let v = scaled_valuation(p, &value)?;
            if v != ExtRational::Fin(x.val.clone()) {
                return Err(Error::Consistency(format!("closed-form valuation {} but value {value} has {v}", x.val)));
            }
            return Ok(WhittakerVal::from_term(x.clone()));
        }
        let k = signed.len();
        let patterns = if k == 0 { 1 } else { 1usize << (k - 1) };
        let mut cands = vec![];
        for mask in 0..patterns {
            let mut sum = ScaledCyclotomic::zero();
            for (i, x) in terms.iter().enumerate() {
                let mut v = x.value.clone().unwrap();
                if let Some(j) = signed.iter().position(|&s| s == i) {
                    if j > 0 && mask >> (j - 1) & 1 == 1 {
                        v = v.scale(&-Q::one());
                    }
                }
                sum = sum.add(&v);
            }
            cands.push(sum);
        }
        let vals = cands.iter().map(|c| scaled_valuation(p, c)).collect::<Result<Vec<_>>>()?;
        let min = vals.iter().min().unwrap().clone();
        let agree = vals.iter().all(|v| *v == min);
        let amb = match k {
            0 => Ambiguity::None,
            _ if cands.len() == 1 => Ambiguity::Sign,
            _ => Ambiguity::OneOf,
        };
        return Ok(WhittakerVal {
            valuation: min,
            exact: if agree { Some(cands[0].clone()) } else { None },
            ambiguity: amb,
            lower_bound_only: !agree,
            candidates: if amb == Ambiguity::OneOf { cands } else { vec![] },
        });
    }
    let min = terms.iter().map(|x| &x.val).min().unwrap().clone();
    let at_min: Vec<&Term> = terms.iter().filter(|x| x.val == min).collect();
    let lower = at_min.len() > 1 || at_min[0].lower;
    let (exact, amb) = if terms.len() == 1 {
        (terms[0].value.clone(), terms[0].amb)
    } else {
        (None, Ambiguity::Unit)
    };
    Ok(WhittakerVal { valuation: ExtRational::Fin(min), exact, ambiguity: amb, lower_bound_only: lower, candidates: vec![] })
}

/// A lower bound for `val_p W(g_{t,ℓ,v})`, or an equality where the theorem states one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: ExtRational,
    pub equality: bool,
}

impl Bound {
    fn ge(q: Q) -> Bound {
        Bound { value: ExtRational::Fin(q), equality: false }
    }

    fn eq(value: ExtRational) -> Bound {
        Bound { value, equality: true }
    }

    fn vanishing() -> Bound {
        Bound::eq(ExtRational::Inf)
    }

    /// Whether an actual valuation is consistent with this bound.
    pub fn admits(&self, val: &ExtRational) -> bool {
        if self.equality {
            *val == self.value
        } else {
            *val >= self.value
        }
    }
}

fn strongest(rows: Vec<Q>) -> Option<Bound> {
    rows.into_iter().max().map(Bound::ge)
}

/// The odd-`p` bound at `(t, ℓ)`; `None` when no row applies.
pub fn bound_t1(pi: &RepDescriptor, idx: &CosetIndex, f_res: u32, sv: &Q) -> Option<Bound> {
    let p = pi.p();
    assert!(p != 2, "bound_t1 is for odd p");
    let a = pi.conductor() as i64;
    assert!(a >= 2, "bound_t1 needs a(π) ≥ 2");
    let (t, l) = (idx.t, idx.ell as i64);
    if is_vanishing(pi, pi.conductor(), t, idx.ell) {
        return Some(Bound::vanishing());
    }
    let f = qi(f_res as i64);
    let tame = q(1, 2) + q(1, p as i64 - 1);
    let mut rows = vec![];
    if l == 0 || l == a || ((l == 1 || l == a - 1) && a > 2) {
        rows.push(Q::zero());
    }
    let half = 2 * l == a;
    if !half && !(l == 0 || l == 1 || l == a - 1 || l == a) {
        rows.push(&f * (qi(1) - q(l.min(a - l), 2)));
    }
    if l == 1 && a == 2 && t == -2 {
        rows.push(-&f + (&f / qi(2)).min(tame.clone()));
    }
    if half && a > 2 && t == -a {
        rows.push(&f * (qi(1) - q(a, 4)));
    }
    if half {
        let tail = (-&f * q(t + 1, 2)).min(tame.clone());
        match pi.kind() {
            Kind::Type1a { .. } if a == 2 => rows.push(-&f + &tame),
            Kind::Type3 { .. } => rows.push(-&f * q(t + 4, 2) + tail),
            Kind::Type4 { .. } => rows.push(-&f - qi(t + 2) * sv + tail),
            Kind::Type5 { .. } if a == 2 => rows.push(-&f * q(t + 4, 2) + &tame - qi(t + 2) * sv),
            Kind::Type5 { .. } => rows.push(-&f * q((t + a).max(a / 2 - 2), 2) - qi(t + a) * sv),
            _ => {}
        }
    }
    strongest(rows)
}

/// The `p = 2` bound at `(t, ℓ)` for a twist-minimal conductor `a0`; `None` when no row applies.
pub fn bound_t2(pi: &RepDescriptor, a0: u32, idx: &CosetIndex, sv: &Q) -> Option<Bound> {
    assert_eq!(pi.p(), 2, "bound_t2 is for p = 2");
    let a = pi.conductor() as i64;
    assert!(a >= 2, "bound_t2 needs a(π) ≥ 2");
    let (t, l) = (idx.t, idx.ell as i64);
    if is_vanishing(pi, a0, t, idx.ell) {
        return Some(Bound::vanishing());
    }
    let half = 2 * l == a;
    let mut rows = vec![];
    if [0, 1, a - 1, a].contains(&l) {
        rows.push(Q::zero());
    } else if !half {
        rows.push(qi(1) - q(l.min(a - l), 2));
    }
    if (l == 3 || l == a - 3) && a > 6 {
        rows.push(Q::zero());
    }
    if half && a > 2 {
        match pi.kind() {
            Kind::Type1a { .. } | Kind::Type1b { .. } => {
                rows.push(qi(1) - q(a, 4));
                if (a == 6 || a == 8) && t == -a + 1 {
                    rows.push(Q::zero());
                }
            }
            Kind::Type3 { .. } => {
                let v = match (a, t) {
                    (4, t) if t >= -2 => ExtRational::Fin(-qi(t + 3)),
                    (6, t) if t >= -2 => ExtRational::Fin(-(qi(t) + q(7, 2))),
                    (6, -4) => ExtRational::frac(-1, 2),
                    _ => ExtRational::Inf,
                };
                return Some(Bound::eq(v));
            }
            Kind::Type4 { .. } => {
                return Some(match (a, t) {
                    (4, t) if t >= -2 => Bound::ge(-q(t + 4, 2) - qi(t + 2) * sv),
                    (6, t) if t >= -2 => Bound::ge(-q(t + 5, 2) - qi(t + 2) * sv),
                    (6, -4) => Bound::eq(ExtRational::frac(-1, 2)),
                    _ => Bound::vanishing(),
                });
            }
            Kind::Type5 { .. } => {
                let s = qi(t + a - 2) * sv;
                if t >= -a / 2 {
                    rows.push(q(1 - t - a, 2) - s);
                } else if t > -a + 2 {
                    rows.push(q(4 - a, 4) - s);
                } else {
                    return Some(Bound::vanishing());
                }
            }
            Kind::Type2 { .. } => {}
        }
    }
    strongest(rows)
}

/// The local bound for `π` at `(t, ℓ)`, weakest over the possible twist-minimal conductors.
pub fn local_bound(pi: &RepDescriptor, idx: &CosetIndex, sv: &Q) -> Option<Bound> {
    if pi.conductor() == 1 {
        return boundary_value(pi, idx.t, idx.ell).ok().map(|w| Bound::eq(w.valuation));
    }
    if pi.p() != 2 {
        return bound_t1(pi, idx, 1, sv);
    }
    let bounds: Vec<Bound> = twist_minimal_conductors(pi).into_iter().filter_map(|a0| bound_t2(pi, a0, idx, sv)).collect();
    let weakest = bounds.iter().min_by(|x, y| x.value.cmp(&y.value))?;
    if bounds.iter().all(|b| b == weakest) {
        return Some(weakest.clone());
    }
    Some(Bound { value: weakest.value.clone(), equality: false })
}

type Laurent = BTreeMap<i64, CycNum>;

fn laurent_add(acc: &mut Laurent, k: i64, x: &CycNum) {
    let e = acc.entry(k).or_insert_with(|| CycNum::zero(1));
    *e = &*e + x;
}

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            laurent_add(&mut out, i + j, &(x * y));
        }
    }
    out
}

/// `c_{t,ℓ}(χ)` for Type 3 in terms of Gauss sums; valid for every `0 ≤ ℓ ≤ a`.
fn type3_gauss_form(mu: &LocalChar, t: i64, ell: u32, chi: &LocalChar) -> ScaledCyclotomic {
    let p = mu.p();
    let g = gauss_bruteforce(&chi.inv(), -(ell as i64)).value;
    if chi.same_as(mu) {
        return match t {
            -2 => g.scale(&q(1, p as i64)),
            t if t >= -1 => g.mul(&qpow(p, -qi(3 + t))).scale(&-qi((p * p) as i64 - 1)),
            _ => ScaledCyclotomic::zero(),
        };
    }
    if t != -2 * chi.mul(mu).conductor() as i64 {
        return ScaledCyclotomic::zero();
    }
    let e = eps(&chi.inv().mul(mu));
    e.mul(&e).mul(&g)
}

/// Checks the basic identity for Type 3 at `(ℓ, χ)` as an identity of Laurent polynomials in
/// `X = q^{½-s}`, using the closed-form coefficients where they apply (`1 ≤ ℓ ≤ a/2`) and the
/// Gauss-sum form otherwise.
pub fn verify_basic_identity(pi: &RepDescriptor, ell: u32, chi: &LocalChar) -> Result<bool> {
    let Kind::Type3 { mu } = pi.kind() else {
        return Err(precondition("the basic identity is checked for Type 3 only"));
    };
    if !mu.value_at_p().is_one() {
        return Err(precondition("normalize μ(p) = 1 first"));
    }
    let (p, a) = (pi.p(), pi.conductor());
    if ell > a {
        return Err(precondition(format!("ℓ = {ell} exceeds a(π) = {a}")));
    }
    if chi.p() != p || chi.conductor() > ell || !chi.value_at_p().is_one() {
        return Err(precondition(format!("{chi} is not in 𝔛_≤{ell}")));
    }
    let chi = chi.unit_part();
    let closed = ell >= 1 && 2 * ell <= a;
    let (tmin, tmax) = (-2 * a as i64 - 2, 6i64);
    let mut coeffs = BTreeMap::new();
    for t in tmin..=tmax {
        let c = if closed {
            match coeff_term(pi, t, ell, &chi, true, &Q::zero())? {
                Some(term) => term.value.expect("Type 3 values are exact"),
                None => ScaledCyclotomic::zero(),
            }
        } else {
            type3_gauss_form(mu, t, ell, &chi)
        };
        coeffs.insert(t, c);
    }
    let twist = chi.mul(mu);
    let pq = |n: i64, d: i64| CycNum::from_q(&q(n, d));
    let (eps_pi, shift, lhs_l, rhs_l) = if twist.conductor() == 0 {
        let lhs: Laurent = [(0, pq(1, 1)), (1, pq(-1, p as i64))].into();
        let rhs: Laurent = [(0, pq(1, 1)), (-1, pq(-1, p as i64))].into();
        (CycNum::from_int(-1), 1, lhs, rhs)
    } else {
        let e = eps(&twist);
        let one: Laurent = [(0, pq(1, 1))].into();
        (e.mul(&e).to_cyc(), 2 * twist.conductor() as i64, one.clone(), one)
    };
    let mut series = Laurent::new();
    for (t, c) in &coeffs {
        if !c.is_zero() {
            laurent_add(&mut series, t + shift, &(&eps_pi * &c.to_cyc()));
        }
    }
    let lhs = laurent_mul(&lhs_l, &series);
    let g = gauss_bruteforce(&chi.inv(), -(ell as i64)).value.to_cyc();
    let rhs: Laurent = rhs_l.iter().map(|(k, x)| (*k, x * &g)).collect();
    // The truncated series is exact in degrees up to tmax + shift.
    let top = tmax + shift;
    let lo = tmin + shift - 1;
    let zero = CycNum::zero(1);
    let matches = (lo..=top).all(|k| lhs.get(&k).unwrap_or(&zero) == rhs.get(&k).unwrap_or(&zero));
    // Tail beyond the window: a geometric progression of ratio 1/q from t = -1 on.
    let tail = twist.conductor() != 0
        || (-1..tmax).all(|t| coeffs[&(t + 1)] == coeffs[&t].scale(&q(1, p as i64)));
    Ok(matches && tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::q2_quadratic;
    use crate::reps::{representatives, type1b_enumerate};

    fn type3(p: u64, mu: LocalChar) -> RepDescriptor {
        RepDescriptor::new(p, Kind::Type3 { mu }).unwrap()
    }

    fn val_at(pi: &RepDescriptor, t: i64, ell: u32) -> WhittakerVal {
        assemble_w(pi, &CosetIndex::at(pi.conductor(), t, ell), &Q::zero(), true).unwrap()
    }

    #[test]
    fn reflection_is_an_involution() {
        assert_eq!(atkin_lehner_reflect(-4, 1, 4), (-6, 3));
        assert_eq!(atkin_lehner_reflect(-5, 0, 5), (-10, 5));
        for a in 1..8 {
            for l in 0..=a {
                for t in -10..3 {
                    let (t2, l2) = atkin_lehner_reflect(t, l, a);
                    assert_eq!(atkin_lehner_reflect(t2, l2, a), (t, l));
                }
            }
        }
    }

    #[test]
    fn boundary_cases() {
        let st = RepDescriptor::new(3, Kind::Type2 { sign: 1 }).unwrap();
        assert_eq!(boundary_value(&st, 0, 0).unwrap().valuation, ExtRational::int(-1));
        let sc = crate::reps::type1a_with_conductor(3, 3).unwrap();
        assert_eq!(boundary_value(&sc, -3, 0).unwrap().valuation, ExtRational::zero());
        assert!(boundary_value(&sc, -2, 0).unwrap().is_zero());
        assert!(boundary_value(&sc, -3, 1).is_err());
    }

    #[test]
    fn q2_type3_table() {
        let b2 = type3(2, q2_quadratic(2));
        assert_eq!(val_at(&b2, -2, 2).valuation, ExtRational::int(-1));
        for t in -1..5 {
            assert_eq!(val_at(&b2, t, 2).valuation, ExtRational::int(-(t + 3)));
        }
        assert!(val_at(&b2, -3, 2).is_zero());
        for mask in [4, 6] {
            let pi = type3(2, q2_quadratic(mask));
            assert_eq!(val_at(&pi, -4, 3).valuation, ExtRational::frac(-1, 2));
            assert_eq!(val_at(&pi, -2, 3).valuation, ExtRational::frac(-3, 2));
            assert!(val_at(&pi, -3, 3).is_zero());
            for t in -1..5 {
                assert_eq!(val_at(&pi, t, 3).valuation, ExtRational::Fin(-(qi(t) + q(7, 2))));
            }
        }
    }

    #[test]
    fn type1b_two_character_sum() {
        let pi7 = type1b_enumerate().into_iter().find(|r| r.conductor() == 7).unwrap();
        let w = val_at(&pi7, -7, 3);
        assert_eq!(w.valuation, ExtRational::zero());
        assert_eq!(w.ambiguity, Ambiguity::OneOf);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for c in &w.candidates {
            let (re, im) = c.to_cyc().complex_embed(30).to_f64();
            assert!((re.abs() - r).abs() < 1e-9 && (im.abs() - r).abs() < 1e-9, "{c}");
        }
    }

    #[test]
    fn closed_forms_match_gauss_form() {
        for (p, mask_or_level) in [(2u64, 2u8), (2, 4), (2, 6), (3, 0), (5, 0)] {
            let mu = if p == 2 { q2_quadratic(mask_or_level) } else { crate::reps::ramified_quadratics(p)[0].clone() };
            let pi = type3(p, mu.clone());
            let a = pi.conductor();
            for ell in 1..=a / 2 {
                for chi in enumerate_chars(p, ell) {
                    for t in -2 * a as i64 - 1..4 {
                        let closed = coeff_term(&pi, t, ell, &chi, true, &Q::zero()).unwrap();
                        let closed = closed.map_or(ScaledCyclotomic::zero(), |x| x.value.unwrap());
                        assert_eq!(closed, type3_gauss_form(&mu, t, ell, &chi), "p={p} ℓ={ell} χ={chi} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn basic_identity_type3() {
        let b2 = type3(2, q2_quadratic(2));
        assert!(verify_basic_identity(&b2, 1, &LocalChar::trivial(2)).unwrap());
        let mu3 = crate::reps::ramified_quadratics(3)[0].clone();
        let pi3 = type3(3, mu3.clone());
        assert!(verify_basic_identity(&pi3, 1, &mu3).unwrap());
        for (p, pi) in [(2, b2.clone()), (2, type3(2, q2_quadratic(4))), (3, pi3.clone())] {
            for ell in 0..=pi.conductor() {
                for chi in enumerate_chars(p, ell) {
                    assert!(verify_basic_identity(&pi, ell, &chi).unwrap(), "{pi} ℓ={ell} χ={chi}");
                }
            }
        }
        let wide = q2_quadratic(4);
        assert!(matches!(verify_basic_identity(&b2, 1, &wide), Err(Error::Precondition(_))));
    }

    #[test]
    fn vanishing_rows() {
        let sc = crate::reps::type1a_with_conductor(5, 4).unwrap();
        assert!(is_vanishing(&sc, 4, -5, 1));
        assert!(is_vanishing(&sc, 4, -3, 1));
        assert!(!is_vanishing(&sc, 4, -4, 1));
        let mu = crate::characters::chars_of_conductor(2, 4).into_iter().find(|m| !m.pow(2).is_trivial()).unwrap();
        let t5 = RepDescriptor::new(2, Kind::Type5 { mu, sigma_val: None }).unwrap();
        assert!(is_vanishing(&t5, 8, -6, 4));
        assert!(!is_vanishing(&t5, 8, -5, 4));
    }

    #[test]
    fn bound_examples() {
        let sc = crate::reps::type1a_with_conductor(3, 6).unwrap();
        assert_eq!(bound_t1(&sc, &CosetIndex::at(6, -6, 0), 1, &Q::zero()).unwrap().value, ExtRational::zero());
        assert_eq!(bound_t1(&sc, &CosetIndex::at(6, -6, 2), 1, &Q::zero()).unwrap().value, ExtRational::zero());
        let mu3 = crate::reps::ramified_quadratics(3)[0].clone();
        let b = bound_t1(&type3(3, mu3), &CosetIndex::at(2, -2, 1), 1, &Q::zero()).unwrap();
        assert_eq!(b.value, ExtRational::frac(-1, 2));
        let mu = crate::characters::chars_of_conductor(2, 4).into_iter().find(|m| !m.pow(2).is_trivial()).unwrap();
        let t5 = RepDescriptor::new(2, Kind::Type5 { mu, sigma_val: Some(Q::zero()) }).unwrap();
        assert_eq!(bound_t2(&t5, 8, &CosetIndex::at(8, -6, 4), &Q::zero()).unwrap().value, ExtRational::Inf);
        assert_eq!(bound_t2(&t5, 8, &CosetIndex::at(8, -5, 4), &Q::zero()).unwrap().value, ExtRational::int(-1));
        let sc2 = crate::reps::type1a_with_conductor(2, 8).unwrap();
        assert_eq!(bound_t2(&sc2, 7, &CosetIndex::at(8, -7, 4), &Q::zero()).unwrap().value, ExtRational::zero());
        assert_eq!(bound_t2(&sc2, 7, &CosetIndex::at(8, -8, 3), &Q::zero()).unwrap().value, ExtRational::zero());
    }

    #[test]
    fn assembled_values_respect_bounds() {
        for p in [2u64, 3, 5] {
            for a in 2..=6u32 {
                for pi in representatives(p, a, &[Some(Q::zero())]).unwrap() {
                    for ell in 0..=a {
                        for t in -2 * a as i64 - 1..3 {
                            let idx = CosetIndex::at(a, t, ell);
                            let w = match assemble_w(&pi, &idx, &Q::zero(), true) {
                                Ok(w) => w,
                                Err(Error::Undetermined(_)) => continue,
                                Err(e) => panic!("{pi} {idx:?}: {e}"),
                            };
                            if w.lower_bound_only {
                                continue;
                            }
                            if let Some(b) = local_bound(&pi, &idx, &Q::zero()) {
                                assert!(b.admits(&w.valuation), "{pi} t={t} ℓ={ell}: {} vs {b:?}", w.valuation);
                            }
                        }
                    }
                }
            }
        }
    }
}
