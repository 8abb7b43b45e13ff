//! A fixed embedding of cyclotomic numbers into a finite-precision model of
//! `O = Z_p[u, t] / (g(u), E(t))`, where `g` cuts out the unramified extension of degree `f` and
//! `E(t) = Φ_{p^k}(1 + t)` is Eisenstein, so `1 + t` is a primitive `p^k`-th root of unity.
//!
//! Everything is computed modulo `p^B`. Valuations are normalized by `val(p) = 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, mult_order, phi, pow};
use crate::cyclotomic::CycNum;
use crate::error::{invalid, Error, Result};
use crate::ext::{ExtRational, Q};
use crate::finite_field::FiniteField;

pub const DEFAULT_PRECISION: u32 = 64;

/// Working precision `B`: the `MANIN_PRECISION` environment variable if set, else 64.
pub fn default_precision() -> u32 {
    static B: OnceLock<u32> = OnceLock::new();
    *B.get_or_init(|| {
        std::env::var("MANIN_PRECISION")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&b: &u32| b >= 8)
            .unwrap_or(DEFAULT_PRECISION)
    })
}

type Unram = Vec<BigInt>;

#[derive(Debug)]
pub struct PadicContext {
    pub p: u64,
    pub f: u32,
    pub k: u32,
    pub b: u32,
    /// Ramification index `φ(p^k)`.
    pub e: usize,
    modulus: BigInt,
    g: Vec<BigInt>,
    /// Coefficients of `E(t)`, low degree first, monic of degree `e`.
    eis: Vec<BigInt>,
    teich_gen: Unram,
    pub field: Arc<FiniteField>,
}

/// Element of the model ring: `coords[j]` is the coefficient of `t^j`, itself a polynomial in `u`.
#[derive(Clone, Debug)]
pub struct PadicElement {
    ctx: Arc<PadicContext>,
    coords: Vec<Unram>,
    prec: u32,
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..n {
        let next = &row[i] * BigInt::from(n - i) / BigInt::from(i + 1);
        row.push(next);
    }
    row
}

impl PadicContext {
    pub fn new(p: u64, f: u32, k: u32, b: u32) -> Result<Arc<PadicContext>> {
        Self::with_generator_rank(p, f, k, b, 0)
    }

    /// Context built on the `rank`-th generator of the residue field. Only tests use a rank
    /// other than 0, to probe independence from the choice of embedding.
    pub fn with_generator_rank(
        p: u64,
        f: u32,
        k: u32,
        b: u32,
        rank: usize,
    ) -> Result<Arc<PadicContext>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u32, u32, usize), Arc<PadicContext>>>> =
            OnceLock::new();
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 || b < 8 {
            return Err(invalid(format!("need f ≥ 1 and B ≥ 8, got f={f}, B={b}")));
        }
        let key = (p, f, k, b, rank);
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let field = FiniteField::with_generator_rank(p, f, rank)?;
        let modulus = BigInt::from(p).pow(b);
        let g: Vec<BigInt> = field.modulus.iter().map(|&c| BigInt::from(c)).collect();
        let e = if k == 0 { 1 } else { phi(pow(p, k)) as usize };
        let eis = if k == 0 {
            vec![BigInt::zero(), BigInt::one()]
        } else {
            // Φ_{p^k}(x) = Σ_{i<p} x^{i p^{k-1}}, evaluated at x = 1 + t.
            let step = pow(p, k - 1) as usize;
            let mut out = vec![BigInt::zero(); e + 1];
            for i in 0..p as usize {
                for (j, c) in binomial_row(i * step).into_iter().enumerate() {
                    out[j] += c;
                }
            }
            out
        };
        let mut ctx = PadicContext {
            p,
            f,
            k,
            b,
            e,
            modulus,
            g,
            eis,
            teich_gen: vec![],
            field,
        };
        let seed: Unram = ctx.field.coords(ctx.field.generator).into_iter().map(BigInt::from).collect();
        ctx.teich_gen = ctx.teichmuller(seed);
        let ctx = Arc::new(ctx);
        cache.lock().unwrap().insert(key, ctx.clone());
        Ok(ctx)
    }

    /// Teichmüller lift: the fixed point of `x ↦ x^q` above the given residue.
    fn teichmuller(&self, seed: Unram) -> Unram {
        let q = pow(self.p, self.f);
        let mut x = seed;
        for _ in 0..=self.b + 1 {
            let next = self.u_pow(&x, q);
            if next == x {
                return x;
            }
            x = next;
        }
        panic!("Teichmüller iteration did not stabilize");
    }

    fn reduce_int(&self, x: BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    fn u_mul(&self, a: &Unram, b: &Unram) -> Unram {
        let f = self.f as usize;
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for i in (f..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..f {
                prod[i - f + j] -= &c * &self.g[j];
            }
        }
        prod.truncate(f);
        prod.into_iter().map(|c| self.reduce_int(c)).collect()
    }

    fn u_pow(&self, a: &Unram, mut e: u64) -> Unram {
        let mut base = a.clone();
        let mut acc = self.u_const(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.u_mul(&acc, &base);
            }
            base = self.u_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn u_const(&self, c: BigInt) -> Unram {
        let mut v = vec![BigInt::zero(); self.f as usize];
        v[0] = self.reduce_int(c);
        v
    }

    fn element(self: &Arc<Self>, coords: Vec<Unram>) -> PadicElement {
        PadicElement { ctx: self.clone(), coords, prec: self.b }
    }

    pub fn zero(self: &Arc<Self>) -> PadicElement {
        self.element(vec![self.u_const(BigInt::zero()); self.e])
    }

    pub fn from_int(self: &Arc<Self>, n: &BigInt) -> PadicElement {
        let mut coords = vec![self.u_const(BigInt::zero()); self.e];
        coords[0] = self.u_const(n.clone());
        self.element(coords)
    }

    /// The uniformizer `t = ζ_{p^k} - 1`; zero when `k = 0`.
    pub fn uniformizer(self: &Arc<Self>) -> PadicElement {
        self.t_power(1)
    }

    fn t_power(self: &Arc<Self>, j: usize) -> PadicElement {
        let mut coords = vec![self.u_const(BigInt::zero()); self.e.max(j + 1)];
        coords[j] = self.u_const(BigInt::one());
        self.element(self.reduce_t(coords))
    }

    fn reduce_t(&self, mut coords: Vec<Unram>) -> Vec<Unram> {
        let e = self.e;
        for n in (e..coords.len()).rev() {
            let c = std::mem::replace(&mut coords[n], vec![BigInt::zero(); self.f as usize]);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            for j in 0..e {
                if self.eis[j].is_zero() {
                    continue;
                }
                for (dst, src) in coords[n - e + j].iter_mut().zip(&c) {
                    *dst -= src * &self.eis[j];
                }
            }
        }
        coords.truncate(e);
        coords
            .into_iter()
            .map(|v| v.into_iter().map(|c| self.reduce_int(c)).collect())
            .collect()
    }

    /// Image of `ζ_M^j`. Requires `M | p^k (p^f - 1)`.
    pub fn embed_root(self: &Arc<Self>, m: u64, j: i64) -> Result<PadicElement> {
        let powers = self.root_powers(m)?;
        Ok(powers[j.rem_euclid(m as i64) as usize].clone())
    }

    /// All powers `ζ_M^0, …, ζ_M^{M-1}`, cached per context.
    fn root_powers(self: &Arc<Self>, m: u64) -> Result<Arc<Vec<PadicElement>>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<Vec<PadicElement>>>>> =
            OnceLock::new();
        let key = (Arc::as_ptr(self) as usize, m);
        let cache = CACHE.get_or_init(Default::default);
        if let Some(v) = cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let zeta = self.primitive_root(m)?;
        let mut out = Vec::with_capacity(m as usize);
        let mut x = self.from_int(&BigInt::one());
        for _ in 0..m {
            out.push(x.clone());
            x = &x * &zeta;
        }
        let out = Arc::new(out);
        cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn primitive_root(self: &Arc<Self>, m: u64) -> Result<PadicElement> {
        let s = if m == 0 { 0 } else { m.trailing_zeros_base(self.p) };
        let m_prime = m / pow(self.p, s);
        let q1 = pow(self.p, self.f) - 1;
        if s > self.k || !q1.is_multiple_of(m_prime) {
            return Err(invalid(format!(
                "ζ_{m} does not live in the context (p={}, f={}, k={})",
                self.p, self.f, self.k
            )));
        }
        let tame = self.element({
            let mut c = vec![self.u_const(BigInt::zero()); self.e];
            c[0] = self.u_pow(&self.teich_gen, q1 / m_prime);
            c
        });
        if s == 0 {
            return Ok(tame);
        }
        let one_plus_t = &self.from_int(&BigInt::one()) + &self.t_power(1);
        let wild = one_plus_t.pow(pow(self.p, self.k - s));
        // ζ_M = ζ_{m'}^a ζ_{p^s}^b with a p^s + b m' = 1.
        let ps = pow(self.p, s) as i64;
        let eg = ps.extended_gcd(&(m_prime as i64));
        let a = eg.x.rem_euclid(m_prime as i64) as u64;
        let b = eg.y.rem_euclid(ps) as u64;
        Ok(&tame.pow(a) * &wild.pow(b))
    }

    /// Image of a `p`-integral cyclotomic number.
    pub fn embed(self: &Arc<Self>, x: &CycNum) -> Result<PadicElement> {
        let den = x.denominator();
        if den.is_multiple_of(&BigInt::from(self.p)) {
            return Err(invalid("denominator divisible by p; use valuation_of_cyc"));
        }
        let num = self.embed_numerator(x)?;
        let inv = mod_inverse(den, &self.modulus).expect("p-adic unit");
        Ok(num.scale_int(&inv))
    }

    fn embed_numerator(self: &Arc<Self>, x: &CycNum) -> Result<PadicElement> {
        let powers = self.root_powers(x.modulus())?;
        let mut acc = self.zero();
        for (i, c) in x.numerators().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &powers[i].scale_int(c);
            }
        }
        Ok(acc)
    }
}

trait TrailingBase {
    fn trailing_zeros_base(self, p: u64) -> u32;
}

impl TrailingBase for u64 {
    fn trailing_zeros_base(mut self, p: u64) -> u32 {
        let mut s = 0;
        while self.is_multiple_of(p) {
            self /= p;
            s += 1;
        }
        s
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

impl PadicElement {
    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    /// Number of `p`-adic digits known; starts at `B` and drops with each `t`-division.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coords(&self) -> &[Vec<BigInt>] {
        &self.coords
    }

    fn scale_int(&self, c: &BigInt) -> PadicElement {
        let coords = self
            .coords
            .iter()
            .map(|v| v.iter().map(|x| self.ctx.reduce_int(x * c)).collect())
            .collect();
        PadicElement { ctx: self.ctx.clone(), coords, prec: self.prec }
    }

    pub fn pow(&self, mut e: u64) -> PadicElement {
        let mut base = self.clone();
        let mut acc = self.ctx.from_int(&BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn digit_valuation(&self, c: &BigInt) -> Option<u32> {
        if c.is_zero() {
            return None;
        }
        let p = BigInt::from(self.ctx.p);
        let mut c = c.clone();
        let mut v = 0;
        while v < self.prec && c.is_multiple_of(&p) {
            c /= &p;
            v += 1;
        }
        (v < self.prec).then_some(v)
    }

    /// `val(x) = min_j (val_p(c_j) + j/e)`: the `t^j` for `j < e` have distinct valuations mod 1,
    /// so no cancellation is possible. Returns `+∞` when every digit below the precision is 0.
    pub fn valuation(&self) -> ExtRational {
        let e = self.ctx.e as i64;
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(j, v)| {
                let vu = v.iter().filter_map(|c| self.digit_valuation(c)).min()?;
                Some(Q::new((vu as i64 * e + j as i64).into(), e.into()))
            })
            .min()
            .map_or(ExtRational::Inf, ExtRational::Fin)
    }

    /// `x / t` for `x` divisible by `t`. Costs one digit of precision.
    pub fn div_t(&self) -> Result<PadicElement> {
        let ctx = &self.ctx;
        if ctx.k == 0 {
            return Err(invalid("no ramified layer: t is zero"));
        }
        let p = BigInt::from(ctx.p);
        if self.coords[0].iter().any(|c| !c.is_multiple_of(&p)) {
            return Err(invalid("element is not divisible by t"));
        }
        // p = t·h(t) with h = -(E_1 + E_2 t + … + t^{e-1}).
        let c0: Unram = self.coords[0].iter().map(|c| c / &p).collect();
        let mut out = vec![ctx.u_const(BigInt::zero()); ctx.e];
        for j in 0..ctx.e {
            let hj = -&ctx.eis[j + 1];
            for (dst, src) in out[j].iter_mut().zip(&c0) {
                *dst += src * &hj;
            }
            if j + 1 < ctx.e {
                for (dst, src) in out[j].iter_mut().zip(&self.coords[j + 1]) {
                    *dst += src;
                }
            }
        }
        let coords = out
            .into_iter()
            .map(|v| v.into_iter().map(|c| ctx.reduce_int(c)).collect())
            .collect();
        Ok(PadicElement { ctx: ctx.clone(), coords, prec: self.prec.saturating_sub(1) })
    }

    /// Valuation by repeated `t`-division, the slow path used to cross-check [`Self::valuation`].
    pub fn valuation_by_division(&self) -> ExtRational {
        let e = self.ctx.e as i64;
        let p = BigInt::from(self.ctx.p);
        let mut x = self.clone();
        let mut steps = 0i64;
        loop {
            if x.valuation().is_inf() {
                return ExtRational::Inf;
            }
            if x.coords[0].iter().any(|c| !c.is_multiple_of(&p)) {
                return ExtRational::frac(steps, e);
            }
            x = if self.ctx.k == 0 {
                let coords = x.coords.iter().map(|v| v.iter().map(|c| c / &p).collect()).collect();
                PadicElement { ctx: x.ctx.clone(), coords, prec: x.prec.saturating_sub(1) }
            } else {
                x.div_t().expect("divisibility checked above")
            };
            steps += 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_inf()
    }
}

impl PartialEq for PadicElement {
    fn eq(&self, other: &PadicElement) -> bool {
        (self - other).is_zero()
    }
}

impl std::ops::Add for &PadicElement {
    type Output = PadicElement;
    fn add(self, rhs: &PadicElement) -> PadicElement {
        let ctx = &self.ctx;
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| ctx.reduce_int(x + y)).collect())
            .collect();
        PadicElement { ctx: ctx.clone(), coords, prec: self.prec.min(rhs.prec) }
    }
}

impl std::ops::Sub for &PadicElement {
    type Output = PadicElement;
    fn sub(self, rhs: &PadicElement) -> PadicElement {
        self + &rhs.scale_int(&BigInt::from(-1))
    }
}

impl std::ops::Mul for &PadicElement {
    type Output = PadicElement;
    fn mul(self, rhs: &PadicElement) -> PadicElement {
        let ctx = &self.ctx;
        let e = ctx.e;
        let mut prod = vec![vec![BigInt::zero(); ctx.f as usize]; 2 * e - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.iter().all(Zero::is_zero) {
                    continue;
                }
                let ab = ctx.u_mul(a, b);
                for (dst, src) in prod[i + j].iter_mut().zip(ab) {
                    *dst += src;
                }
            }
        }
        let coords = ctx.reduce_t(prod);
        PadicElement { ctx: ctx.clone(), coords, prec: self.prec.min(rhs.prec) }
    }
}

/// The context `(p, f, k)` in which `Q(ζ_M)` embeds: `M = p^k m'` with `f = ord_{m'}(p)`.
pub fn context_for_modulus(p: u64, m: u64, b: u32) -> Result<Arc<PadicContext>> {
    let k = m.trailing_zeros_base(p);
    let m_prime = m / pow(p, k);
    let f = if m_prime == 1 { 1 } else { mult_order(p % m_prime, m_prime) as u32 };
    PadicContext::new(p, f, k, b)
}

/// `val_p` of a cyclotomic number under the fixed embedding, with `val_p(p) = 1`.
pub fn valuation_of_cyc(p: u64, x: &CycNum) -> Result<ExtRational> {
    valuation_of_cyc_with(p, x, default_precision(), 0)
}

pub fn valuation_of_cyc_with(p: u64, x: &CycNum, b: u32, rank: usize) -> Result<ExtRational> {
    if x.is_zero() {
        return Ok(ExtRational::Inf);
    }
    let base = context_for_modulus(p, x.modulus(), b)?;
    let ctx = PadicContext::with_generator_rank(p, base.f, base.k, b, rank)?;
    let num = ctx.embed_numerator(x)?;
    let v = num.valuation();
    if v.is_inf() {
        return Err(Error::Undetermined(format!(
            "valuation exceeds the working precision B = {b}"
        )));
    }
    let den_val = factor_valuation(x.denominator(), p);
    Ok(v - Q::from_integer(den_val.into()))
}

fn factor_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    v
}

/// `val_p` of a rational.
pub fn valuation_of_q(p: u64, x: &Q) -> ExtRational {
    if x.is_zero() {
        return ExtRational::Inf;
    }
    ExtRational::int(factor_valuation(x.numer(), p) - factor_valuation(x.denom(), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::q;

    #[test]
    fn eisenstein_polynomials() {
        let c = PadicContext::new(3, 1, 1, 20).unwrap();
        assert_eq!(c.e, 2);
        assert_eq!(c.eis, vec![3.into(), 3.into(), 1.into()]);
        let c = PadicContext::new(2, 1, 3, 20).unwrap();
        let want: Vec<BigInt> = [2, 4, 6, 4, 1].into_iter().map(BigInt::from).collect();
        assert_eq!(c.eis, want);
        let c = PadicContext::new(5, 2, 0, 20).unwrap();
        assert_eq!(c.e, 1);
    }

    #[test]
    fn roots_of_unity_embed_correctly() {
        let c = PadicContext::new(3, 1, 0, 20).unwrap();
        let m1 = c.embed_root(2, 1).unwrap();
        assert_eq!(m1, c.from_int(&BigInt::from(-1)));
        let c = PadicContext::new(5, 1, 0, 20).unwrap();
        let i = c.embed_root(4, 1).unwrap();
        assert_eq!(&i * &i, c.from_int(&BigInt::from(-1)));
        assert_eq!(i.coords()[0][0].mod_floor(&BigInt::from(5)), BigInt::from(2));
        let c = PadicContext::new(3, 1, 1, 20).unwrap();
        let z = c.embed_root(3, 1).unwrap();
        let one_plus_t = &c.from_int(&BigInt::one()) + &c.t_power(1);
        assert_eq!(z, one_plus_t);
    }

    #[test]
    fn valuations() {
        let z3 = |j| CycNum::root(3, j);
        assert_eq!(valuation_of_cyc(3, &CycNum::from_int(3)).unwrap(), ExtRational::int(1));
        assert_eq!(valuation_of_cyc(3, &(&z3(1) + &z3(2))).unwrap(), ExtRational::int(0));
        assert_eq!(valuation_of_cyc(3, &(&z3(1) - &z3(2))).unwrap(), ExtRational::frac(1, 2));
        assert_eq!(
            valuation_of_cyc(3, &(&z3(1) - &CycNum::one())).unwrap(),
            ExtRational::frac(1, 2)
        );
        let x = CycNum::from_q(&q(2, 9));
        assert_eq!(valuation_of_cyc(3, &x).unwrap(), ExtRational::int(-2));
    }

    #[test]
    fn teichmuller_is_fixed_by_frobenius() {
        for (p, f) in [(3, 2), (5, 2), (2, 2), (7, 1)] {
            let c = PadicContext::new(p, f, 0, 24).unwrap();
            let q = pow(p, f);
            assert_eq!(c.u_pow(&c.teich_gen, q), c.teich_gen);
            assert_eq!(c.u_pow(&c.teich_gen, q - 1), c.u_const(BigInt::one()));
        }
    }

    #[test]
    fn division_agrees_with_direct_valuation() {
        let c = PadicContext::new(2, 1, 3, 24).unwrap();
        let t = c.t_power(1);
        let x = &t.pow(5) + &c.from_int(&BigInt::from(8));
        assert_eq!(x.valuation(), x.valuation_by_division());
        assert_eq!(x.valuation(), ExtRational::frac(5, 4));
        assert!(x.div_t().unwrap().precision() < x.precision());
    }
}
