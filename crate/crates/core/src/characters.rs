//! Characters of `Q_p^×`, of `F_{p^f}^×`, and additive characters of `Q_p` with trivial conductor.
//!
//! Character values are roots of unity, handled as elements of `Q/Z` ([`Rou`]) so that products
//! and comparisons stay in machine integers; [`Rou::to_cyc`] gives the cyclotomic number.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{digits, is_prime, least_primitive_root_p2, mod_pow, pow, rem};
use crate::cyclotomic::CycNum;
use crate::error::{invalid, Error, Result};
use crate::ext::Q;
use crate::finite_field::FiniteField;

/// `exp(2πi·num/den)`, reduced with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rou {
    num: u64,
    den: u64,
}

impl Rou {
    pub fn new(num: i64, den: u64) -> Rou {
        assert!(den > 0);
        let n = rem(num, den);
        let g = n.gcd(&den);
        Rou { num: n / g, den: den / g }
    }

    pub const ONE: Rou = Rou { num: 0, den: 1 };
    pub const MINUS_ONE: Rou = Rou { num: 1, den: 2 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(self, o: Rou) -> Rou {
        let den = self.den.lcm(&o.den);
        Rou::new((self.num * (den / self.den) + o.num * (den / o.den)) as i64, den)
    }

    pub fn inv(self) -> Rou {
        Rou::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, e: i64) -> Rou {
        Rou::new((self.num as i128 * e as i128).rem_euclid(self.den as i128) as i64, self.den)
    }

    /// `±1` if the value is real.
    pub fn sign(&self) -> Option<i64> {
        match self.den {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_cyc(self) -> CycNum {
        CycNum::root(self.den, self.num as i64)
    }
}

/// Generators of `(Z/p^n)^×` with their orders.
#[derive(Debug)]
pub struct UnitGroup {
    pub p: u64,
    pub n: u32,
    pub modulus: u64,
    pub gens: Vec<(u64, u64)>,
    dlog: HashMap<u64, Vec<u64>>,
}

impl UnitGroup {
    pub fn get(p: u64, n: u32) -> Arc<UnitGroup> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<UnitGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&(p, n)) {
            return g.clone();
        }
        let g = Arc::new(Self::build(p, n));
        cache.lock().unwrap().insert((p, n), g.clone());
        g
    }

    fn build(p: u64, n: u32) -> UnitGroup {
        let modulus = pow(p, n);
        let gens: Vec<(u64, u64)> = match (p, n) {
            (_, 0) => vec![],
            (2, 1) => vec![],
            (2, 2) => vec![(3, 2)],
            (2, _) => vec![(modulus - 1, 2), (5, pow(2, n - 2))],
            _ => vec![(least_primitive_root_p2(p) % modulus, pow(p, n - 1) * (p - 1))],
        };
        let mut dlog = HashMap::new();
        let mut stack: Vec<(u64, Vec<u64>)> = vec![(1 % modulus.max(2), vec![])];
        for &(g, ord) in &gens {
            let mut next = Vec::new();
            for (base, exps) in &stack {
                let mut x = *base;
                for k in 0..ord {
                    let mut e = exps.clone();
                    e.push(k);
                    next.push((x, e));
                    x = x * g % modulus;
                }
            }
            stack = next;
        }
        for (x, e) in stack {
            dlog.insert(x % modulus.max(1), e);
        }
        UnitGroup { p, n, modulus, gens, dlog }
    }

    pub fn order(&self) -> u64 {
        self.gens.iter().map(|g| g.1).product()
    }

    /// Exponents of `u` with respect to the generators; `u` must be prime to `p`.
    pub fn dlog(&self, u: i64) -> Vec<u64> {
        if self.gens.is_empty() {
            return vec![];
        }
        let r = rem(u, self.modulus);
        self.dlog
            .get(&r)
            .unwrap_or_else(|| panic!("{u} is not a unit mod {}", self.modulus))
            .clone()
    }

    /// All unit residues in `[1, p^n]`.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.modulus).filter(move |u| u % self.p != 0)
    }
}

pub fn char_group(p: u64, n: u32) -> Vec<(u64, u64)> {
    UnitGroup::get(p, n).gens.clone()
}

/// A character of `Q_p^×`: a character of `(Z/p^n)^×` together with its value at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalChar {
    p: u64,
    level: u32,
    exps: Vec<u64>,
    at_p: Rou,
}

impl LocalChar {
    pub fn new(p: u64, level: u32, exps: Vec<u64>) -> Result<LocalChar> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let g = UnitGroup::get(p, level);
        if exps.len() != g.gens.len() {
            return Err(invalid(format!(
                "level {level} over Q_{p} needs {} generator exponents, got {}",
                g.gens.len(),
                exps.len()
            )));
        }
        let exps = exps.iter().zip(&g.gens).map(|(&e, &(_, o))| e % o).collect();
        Ok(LocalChar { p, level, exps, at_p: Rou::ONE })
    }

    pub fn trivial(p: u64) -> LocalChar {
        LocalChar { p, level: 0, exps: vec![], at_p: Rou::ONE }
    }

    /// The same character on units with `χ(p)` replaced.
    pub fn with_value_at_p(&self, v: Rou) -> LocalChar {
        LocalChar { at_p: v, ..self.clone() }
    }

    /// The restriction to units, extended by `χ(p) = 1`.
    pub fn unit_part(&self) -> LocalChar {
        self.with_value_at_p(Rou::ONE)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn value_at_p(&self) -> Rou {
        self.at_p
    }

    pub fn at_level(&self, n: u32) -> LocalChar {
        assert!(n >= self.level, "characters are never truncated");
        if n == self.level {
            return self.clone();
        }
        let old = UnitGroup::get(self.p, self.level);
        let new = UnitGroup::get(self.p, n);
        let exps = new
            .gens
            .iter()
            .map(|&(g, ord)| {
                let v = self.eval_unit(g as i64);
                v.num * (ord / v.den)
            })
            .collect();
        debug_assert!(old.order() <= new.order());
        LocalChar { p: self.p, level: n, exps, at_p: self.at_p }
    }

    /// `χ(u)` for a unit `u`.
    pub fn eval_unit(&self, u: i64) -> Rou {
        let g = UnitGroup::get(self.p, self.level);
        let d = g.dlog(u);
        let den: u64 = g.gens.iter().map(|x| x.1).fold(1, |a, b| a.lcm(&b));
        let num: u64 = d
            .iter()
            .zip(&self.exps)
            .zip(&g.gens)
            .map(|((&k, &e), &(_, o))| (k * e % o) * (den / o))
            .sum();
        Rou::new(num as i64, den)
    }

    /// `χ(x)` for a nonzero rational `x`.
    pub fn eval(&self, x: &Q) -> Rou {
        assert!(!x.is_zero());
        let (v, unit) = split_p(x, self.p);
        let m = pow(self.p, self.level.max(1));
        let r = unit_mod(&unit, m);
        self.at_p.pow(v).mul(self.eval_unit(r as i64))
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor() == 0
    }

    /// `a(χ)`: 0 if trivial on units, else the least `m ≥ 1` with `χ(1 + p^m Z_p) = 1`.
    pub fn conductor(&self) -> u32 {
        if self.exps.iter().all(|&e| e == 0) {
            return 0;
        }
        let n = self.level;
        let vp = |e: u64| {
            let mut v = 0;
            let mut e = e;
            while e.is_multiple_of(self.p) {
                e /= self.p;
                v += 1;
            }
            v
        };
        if self.p != 2 {
            // 1 + p^m is generated by g^{(p-1)p^{m-1}}.
            return n - vp(self.exps[0]).min(n - 1);
        }
        match self.exps.len() {
            1 => 2,
            _ if self.exps[1] == 0 => 2,
            // 1 + 2^m is generated by 5^{2^{m-2}} for m ≥ 2.
            _ => n - vp(self.exps[1]),
        }
    }

    /// `a(χ)` straight from the definition, by scanning `1 + p^m Z_p` at every `m`.
    pub fn conductor_by_scan(&self) -> u32 {
        let g = UnitGroup::get(self.p, self.level);
        if g.units().all(|u| self.eval_unit(u as i64).is_one()) {
            return 0;
        }
        let trivial_from = |m: u32| {
            let step = pow(self.p, m);
            (0..g.modulus / step).all(|x| self.eval_unit((1 + x * step) as i64).is_one())
        };
        (1..=self.level).find(|&m| trivial_from(m)).expect("trivial at its level")
    }

    pub fn mul(&self, o: &LocalChar) -> LocalChar {
        assert_eq!(self.p, o.p);
        let n = self.level.max(o.level);
        let (a, b) = (self.at_level(n), o.at_level(n));
        let g = UnitGroup::get(self.p, n);
        let exps = a.exps.iter().zip(&b.exps).zip(&g.gens).map(|((x, y), &(_, ord))| (x + y) % ord);
        LocalChar { p: self.p, level: n, exps: exps.collect(), at_p: a.at_p.mul(b.at_p) }
    }

    pub fn inv(&self) -> LocalChar {
        let g = UnitGroup::get(self.p, self.level);
        let exps = self.exps.iter().zip(&g.gens).map(|(&e, &(_, o))| (o - e) % o);
        LocalChar { p: self.p, level: self.level, exps: exps.collect(), at_p: self.at_p.inv() }
    }

    pub fn pow(&self, k: i64) -> LocalChar {
        let g = UnitGroup::get(self.p, self.level);
        let exps = self
            .exps
            .iter()
            .zip(&g.gens)
            .map(|(&e, &(_, o))| (e as i128 * k as i128).rem_euclid(o as i128) as u64);
        LocalChar { p: self.p, level: self.level, exps: exps.collect(), at_p: self.at_p.pow(k) }
    }

    /// Equality as characters of `Q_p^×`, independent of the stored level.
    pub fn same_as(&self, o: &LocalChar) -> bool {
        let n = self.level.max(o.level);
        self.at_level(n) == o.at_level(n)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0) && self.at_p.is_one()
    }

    /// Order on units.
    pub fn unit_order(&self) -> u64 {
        let g = UnitGroup::get(self.p, self.level);
        self.exps
            .iter()
            .zip(&g.gens)
            .map(|(&e, &(_, o))| o / e.gcd(&o))
            .fold(1, |a, b| a.lcm(&b))
    }

    pub fn is_quadratic_on_units(&self) -> bool {
        self.unit_order() <= 2
    }

    /// The `β`-label of a character of `Q_2^×` with `χ² = 1`, as a bit mask
    /// (`1` = β₀, `2` = β₂, `4` = β₃).
    pub fn beta_mask(&self) -> Option<u8> {
        if self.p != 2 || !self.pow(2).is_trivial() {
            return None;
        }
        let n = self.level.max(3);
        let c = self.at_level(n);
        let minus = c.eval_unit(-1).sign()?;
        let five = c.eval_unit(5).sign()?;
        let mut mask = 0;
        if self.at_p == Rou::MINUS_ONE {
            mask |= 1;
        }
        if minus == -1 {
            mask |= 2;
        }
        if five == -1 {
            mask |= 4;
        }
        Some(mask)
    }
}

impl fmt::Display for LocalChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(mask) = self.beta_mask() {
            return f.write_str(&beta_label(mask));
        }
        write!(f, "chi[p={}, level={}, exps={:?}", self.p, self.level, self.exps)?;
        if !self.at_p.is_one() {
            write!(f, ", chi(p)=e({}/{})", self.at_p.num, self.at_p.den)?;
        }
        f.write_str("]")
    }
}

/// Splits a nonzero rational as `p^v · unit`.
pub fn split_p(x: &Q, p: u64) -> (i64, Q) {
    let pb = BigInt::from(p);
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut v = 0i64;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    while d.is_multiple_of(&pb) {
        d /= &pb;
        v -= 1;
    }
    (v, Q::new(n, d))
}

/// A `p`-adic unit rational reduced modulo `m`.
pub fn unit_mod(u: &Q, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let n = u.numer().mod_floor(&mb);
    let d = u.denom().mod_floor(&mb);
    let dinv = d.extended_gcd(&mb).x.mod_floor(&mb);
    (n * dinv).mod_floor(&mb).to_u64().unwrap()
}

/// All characters of `(Z/p^n)^×` with `χ(p) = 1`, i.e. `𝔛_{≤ n}`.
pub fn enumerate_chars(p: u64, n: u32) -> Vec<LocalChar> {
    let g = UnitGroup::get(p, n);
    let mut out = vec![vec![]];
    for &(_, ord) in &g.gens {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u64>| {
                (0..ord).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|exps| LocalChar { p, level: n, exps, at_p: Rou::ONE })
        .collect()
}

/// `𝔛_n`: characters with `χ(p) = 1` and conductor exactly `n`.
pub fn chars_of_conductor(p: u64, n: u32) -> Vec<LocalChar> {
    enumerate_chars(p, n).into_iter().filter(|c| c.conductor() == n).collect()
}

pub fn beta_label(mask: u8) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut s = String::new();
    for (bit, name) in [(1, "b0"), (2, "b2"), (4, "b3")] {
        if mask & bit != 0 {
            s.push_str(name);
        }
    }
    s
}

pub fn parse_beta_mask(s: &str) -> Result<u8> {
    let s = s.trim();
    if s == "1" {
        return Ok(0);
    }
    let mut mask = 0;
    let mut rest = s;
    while !rest.is_empty() {
        let bit = match rest.get(..2) {
            Some("b0") => 1,
            Some("b2") => 2,
            Some("b3") => 4,
            _ => return Err(Error::Parse(format!("bad quadratic label {s:?}"))),
        };
        mask |= bit;
        rest = &rest[2..];
    }
    Ok(mask)
}

/// The quadratic character of `Q_2^×` with the given `β`-mask. β₂ cuts out `Q_2(√-1)`
/// (`β₂(-1) = -1`, `β₂(5) = 1`), β₃ has `β₃(-1) = 1`, `β₃(5) = -1`, β₀ is unramified with `β₀(2) = -1`.
pub fn q2_quadratic(mask: u8) -> LocalChar {
    let e_minus = u64::from(mask & 2 != 0);
    let e_five = u64::from(mask & 4 != 0);
    let at_p = if mask & 1 != 0 { Rou::MINUS_ONE } else { Rou::ONE };
    LocalChar { p: 2, level: 3, exps: vec![e_minus, e_five], at_p }
}

impl FromStr for LocalChar {
    type Err = Error;
    /// `b2`, `b0b3`, … over `Q_2`, or `p:level:e1,e2` for explicit generator exponents.
    fn from_str(s: &str) -> Result<LocalChar> {
        if let Ok(mask) = parse_beta_mask(s) {
            return Ok(q2_quadratic(mask));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("bad character spec {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let p = parts[0].parse().map_err(|_| bad())?;
        let level = parts[1].parse().map_err(|_| bad())?;
        let exps = if parts[2].is_empty() {
            vec![]
        } else {
            parts[2].split(',').map(|e| e.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        LocalChar::new(p, level, exps)
    }
}

/// `ψ = a·ψ_std` with `ψ_std(x) = exp(2πi·{x})`, `{x}` the `p`-adic fractional part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdditiveChar {
    pub p: u64,
    pub shift: i64,
}

impl AdditiveChar {
    pub fn standard(p: u64) -> AdditiveChar {
        AdditiveChar { p, shift: 1 }
    }

    pub fn eval(&self, x: &Q) -> Rou {
        psi_std(self.p, &(x * Q::from_integer(self.shift.into())))
    }
}

/// `ψ_std(x)` for `x ∈ Q`: if `x = n / (p^m d)` with `p ∤ d`, the value is `ζ_{p^m}^{n d^{-1}}`.
pub fn psi_std(p: u64, x: &Q) -> Rou {
    if x.is_zero() {
        return Rou::ONE;
    }
    let pb = BigInt::from(p);
    let mut d = x.denom().clone();
    let mut m = 0u32;
    while d.is_multiple_of(&pb) {
        d /= &pb;
        m += 1;
    }
    if m == 0 {
        return Rou::ONE;
    }
    let pm = pb.pow(m);
    let dinv = d.extended_gcd(&pm).x;
    let e = (x.numer() * dinv).mod_floor(&pm);
    Rou::new(e.to_i64().expect("psi argument too large"), pow(p, m))
}

/// `χ = ω^{-α}` on `F_{p^f}^×`, where `ω` sends the distinguished generator to `e^{2πi/(q-1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFieldChar {
    pub p: u64,
    pub f: u32,
    pub alpha: u64,
}

impl FiniteFieldChar {
    pub fn new(p: u64, f: u32, alpha: u64) -> Result<FiniteFieldChar> {
        let q = pow(p, f);
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FiniteFieldChar { p, f, alpha: alpha % (q - 1) })
    }

    pub fn all(p: u64, f: u32) -> Vec<FiniteFieldChar> {
        let q = pow(p, f);
        (0..q - 1).map(|alpha| FiniteFieldChar { p, f, alpha }).collect()
    }

    pub fn q(&self) -> u64 {
        pow(self.p, self.f)
    }

    /// `s(χ)`: the base-`p` digit sum of `α`.
    pub fn digit_sum(&self) -> u64 {
        digits(self.alpha, self.p, self.f as usize).iter().sum()
    }

    pub fn eval(&self, field: &FiniteField, a: u64) -> Rou {
        let q1 = self.q() - 1;
        Rou::new(-((self.alpha as i128 * field.log(a) as i128 % q1 as i128) as i64), q1)
    }

    pub fn inv(&self) -> FiniteFieldChar {
        let q1 = self.q() - 1;
        FiniteFieldChar { alpha: (q1 - self.alpha) % q1, ..self.clone() }
    }

    pub fn mul(&self, o: &FiniteFieldChar) -> FiniteFieldChar {
        let q1 = self.q() - 1;
        FiniteFieldChar { alpha: (self.alpha + o.alpha) % q1, ..self.clone() }
    }

    /// `χ ∘ N` on `F_{p^{f e}}`: `α ↦ α (q^e - 1)/(q - 1)`.
    pub fn compose_norm(&self, e: u32) -> FiniteFieldChar {
        let q = self.q();
        let big = pow(self.p, self.f * e);
        let factor = (big - 1) / (q - 1);
        FiniteFieldChar { p: self.p, f: self.f * e, alpha: self.alpha * factor % (big - 1) }
    }
}

/// `α` with `χ = ω^{-α}` for a tamely ramified character of `Q_p^×` viewed on `F_p^×`.
pub fn tame_alpha(chi: &LocalChar) -> Result<FiniteFieldChar> {
    if chi.conductor() > 1 {
        return Err(invalid("character is wildly ramified"));
    }
    let p = chi.p();
    let field = FiniteField::new(p, 1)?;
    let v = chi.eval_unit(field.generator as i64);
    // χ(γ) = ζ_{p-1}^{-α}
    let k = v.num as i64 * ((p - 1) / v.den) as i64;
    FiniteFieldChar::new(p, 1, rem(-k, p - 1))
}

pub fn is_unit(u: i64, p: u64) -> bool {
    u.rem_euclid(p as i64) != 0
}

/// Euler-criterion Legendre symbol, for odd `p`.
pub fn legendre(a: i64, p: u64) -> i64 {
    match mod_pow(rem(a, p), (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::q;

    #[test]
    fn unit_group_generators() {
        assert_eq!(char_group(3, 2), vec![(2, 6)]);
        assert_eq!(char_group(2, 3), vec![(7, 2), (5, 2)]);
        assert_eq!(char_group(5, 1), vec![(2, 4)]);
        assert!(char_group(2, 1).is_empty());
        assert_eq!(char_group(2, 2), vec![(3, 2)]);
    }

    #[test]
    fn q2_quadratics() {
        let b2 = q2_quadratic(2);
        let b3 = q2_quadratic(4);
        assert_eq!(b2.conductor(), 2);
        assert_eq!(b3.conductor(), 3);
        assert_eq!(q2_quadratic(6).conductor(), 3);
        assert_eq!(b2.eval_unit(-1), Rou::MINUS_ONE);
        assert_eq!(b3.eval_unit(5), Rou::MINUS_ONE);
        assert_eq!(b3.eval_unit(-1), Rou::ONE);
        assert_eq!(b3.eval_unit(3), Rou::MINUS_ONE);
        assert_eq!(b3.eval_unit(7), Rou::ONE);
        let b0 = q2_quadratic(1);
        assert!(b0.is_unramified());
        assert_eq!(b0.eval(&q(2, 1)), Rou::MINUS_ONE);
        assert_eq!(b2.mul(&b3).beta_mask(), Some(6));
        assert_eq!("b0b2".parse::<LocalChar>().unwrap().beta_mask(), Some(3));
        assert_eq!(chars_of_conductor(2, 1).len(), 0);
        assert_eq!(chars_of_conductor(2, 2).iter().map(|c| c.beta_mask()).collect::<Vec<_>>(), vec![Some(2)]);
        assert_eq!(chars_of_conductor(2, 3).len(), 2);
    }

    #[test]
    fn conductor_formula_matches_scan() {
        for (p, n) in [(2u64, 2u32), (2, 3), (2, 5), (3, 3), (5, 2), (7, 2)] {
            for chi in enumerate_chars(p, n) {
                assert_eq!(chi.conductor(), chi.conductor_by_scan(), "{chi}");
            }
        }
    }

    #[test]
    fn digit_sums() {
        assert_eq!(FiniteFieldChar::new(3, 2, 5).unwrap().digit_sum(), 3);
        assert_eq!(FiniteFieldChar::new(7, 1, 3).unwrap().digit_sum(), 3);
        assert_eq!(FiniteFieldChar::new(5, 2, 0).unwrap().digit_sum(), 0);
    }

    #[test]
    fn additive_character() {
        assert_eq!(psi_std(2, &q(1, 4)), Rou::new(1, 4));
        assert_eq!(psi_std(2, &q(1, 8)), Rou::new(1, 8));
        assert_eq!(psi_std(3, &q(7, 1)), Rou::ONE);
        // 1/6 = 1/(3·2): exponent 2^{-1} mod 3 = 2.
        assert_eq!(psi_std(3, &q(1, 6)), Rou::new(2, 3));
    }

    #[test]
    fn multiplicativity_small_levels() {
        for (p, n) in [(2, 4), (3, 3), (5, 2)] {
            let g = UnitGroup::get(p, n);
            for chi in enumerate_chars(p, n) {
                for u in g.units() {
                    for v in g.units() {
                        let uv = (u * v % g.modulus) as i64;
                        assert_eq!(chi.eval_unit(uv), chi.eval_unit(u as i64).mul(chi.eval_unit(v as i64)));
                    }
                }
            }
        }
    }
}
