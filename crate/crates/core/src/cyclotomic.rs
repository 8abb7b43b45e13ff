//! Exact arithmetic in cyclotomic fields `Q(ζ_M)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(M)-1}` as integer numerators over a
//! common positive denominator. Operands with different moduli are lifted to the lcm first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor, phi};
use crate::ext::Q;

/// `Φ_M = x^d + Σ tail`, with the tail kept sparse: most moduli met here are prime powers
/// times small numbers, whose cyclotomic polynomials have few terms.
struct CycPoly {
    degree: usize,
    tail: Vec<(usize, i64)>,
}

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<CycPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_poly(m: u64) -> Arc<CycPoly> {
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let primes: Vec<u64> = factor(m).into_iter().map(|(p, _)| p).collect();
    let rad: u64 = primes.iter().product();
    // Φ_{np}(x) = Φ_n(x^p) / Φ_n(x) for p ∤ n.
    let mut cur: Vec<i128> = vec![-1, 1];
    for &p in &primes {
        let mut stretched = vec![0i128; (cur.len() - 1) * p as usize + 1];
        for (i, &c) in cur.iter().enumerate() {
            stretched[i * p as usize] = c;
        }
        cur = exact_div_monic(stretched, &cur);
    }
    let k = (m / rad) as usize;
    let degree = (cur.len() - 1) * k;
    debug_assert_eq!(degree as u64, phi(m));
    let tail = cur[..cur.len() - 1]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i * k, i64::try_from(c).expect("cyclotomic coefficient overflow")))
        .collect();
    let poly = Arc::new(CycPoly { degree, tail });
    poly_cache().lock().unwrap().insert(m, poly.clone());
    poly
}

fn exact_div_monic(mut num: Vec<i128>, den: &[i128]) -> Vec<i128> {
    let d = den.len() - 1;
    let mut quot = vec![0i128; num.len() - d];
    for i in (d..num.len()).rev() {
        let c = num[i];
        if c == 0 {
            continue;
        }
        quot[i - d] = c;
        for (j, &dj) in den.iter().enumerate() {
            num[i - d + j] -= c * dj;
        }
    }
    debug_assert!(num.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

fn reduce_big(m: u64, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let poly = cyclotomic_poly(m);
    let d = poly.degree;
    for i in (d..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for &(j, pj) in &poly.tail {
            v[i - d + j] -= &c * pj;
        }
    }
    v.resize(d, BigInt::zero());
    v
}

fn reduce_small(m: u64, mut v: Vec<i128>) -> Option<Vec<i128>> {
    let poly = cyclotomic_poly(m);
    let d = poly.degree;
    for i in (d..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        v[i] = 0;
        for &(j, pj) in &poly.tail {
            let t = c.checked_mul(pj as i128)?;
            v[i - d + j] = v[i - d + j].checked_sub(t)?;
        }
    }
    v.resize(d, 0);
    Some(v)
}

fn to_small(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|c| c.to_i64()).collect()
}

fn poly_mul_reduce(m: u64, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if let (Some(sa), Some(sb)) = (to_small(a), to_small(b)) {
        let ma = sa.iter().map(|c| c.unsigned_abs() as u128).max().unwrap_or(0);
        let mb = sb.iter().map(|c| c.unsigned_abs() as u128).max().unwrap_or(0);
        let terms = a.len().min(b.len()) as u128;
        if ma.checked_mul(mb).and_then(|x| x.checked_mul(terms)).is_some_and(|x| x < 1 << 100) {
            let mut prod = vec![0i128; a.len() + b.len() - 1];
            for (i, &x) in sa.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in sb.iter().enumerate() {
                    prod[i + j] += x as i128 * y as i128;
                }
            }
            if let Some(r) = reduce_small(m, prod) {
                return r.into_iter().map(BigInt::from).collect();
            }
        }
    }
    let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    reduce_big(m, prod)
}

/// An element of `Q(ζ_M)`.
#[derive(Clone, Debug)]
pub struct CycNum {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    fn build(m: u64, raw: Vec<BigInt>, den: BigInt) -> CycNum {
        assert!(m >= 1 && !den.is_zero());
        let num = reduce_big(m, raw);
        let mut out = CycNum { m, num, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(m: u64) -> CycNum {
        CycNum { m, num: vec![BigInt::zero(); phi(m) as usize], den: BigInt::one() }
    }

    pub fn one() -> CycNum {
        Self::from_q(&Q::one())
    }

    pub fn from_int(n: i64) -> CycNum {
        Self::from_q(&Q::from_integer(n.into()))
    }

    pub fn from_q(x: &Q) -> CycNum {
        CycNum { m: 1, num: vec![x.numer().clone()], den: x.denom().clone() }.normalized()
    }

    fn normalized(mut self) -> CycNum {
        self.normalize();
        self
    }

    /// `ζ_M^j`, any integer `j`.
    pub fn root(m: u64, j: i64) -> CycNum {
        assert!(m >= 1, "modulus must be positive");
        let j = j.rem_euclid(m as i64) as usize;
        let mut v = vec![BigInt::zero(); j + 1];
        v[j] = BigInt::one();
        Self::build(m, v, BigInt::one())
    }

    /// `(Σ_j c_j ζ_M^j) / den` for an arbitrary-length coefficient vector.
    pub fn from_power_sum(m: u64, coeffs: Vec<BigInt>, den: BigInt) -> CycNum {
        let mut v = coeffs;
        if v.is_empty() {
            v.push(BigInt::zero());
        }
        Self::build(m, v, den)
    }

    /// Sum of `counts[j]·ζ_M^j` where `counts` has length `M`. Used to accumulate character sums.
    pub fn from_histogram(m: u64, counts: &[i64], den: i64) -> CycNum {
        assert_eq!(counts.len() as u64, m);
        if let Some(r) = reduce_small(m, counts.iter().map(|&c| c as i128).collect()) {
            let mut out = CycNum {
                m,
                num: r.into_iter().map(BigInt::from).collect(),
                den: BigInt::from(den),
            };
            out.normalize();
            return out;
        }
        Self::build(m, counts.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(den))
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeffs(&self) -> Vec<Q> {
        self.num.iter().map(|c| Q::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == CycNum::one()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| Q::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn lift(&self, m: u64) -> CycNum {
        assert!(m.is_multiple_of(self.m), "cannot lift modulus {} to {}", self.m, m);
        if m == self.m {
            return self.clone();
        }
        let k = (m / self.m) as usize;
        let mut v = vec![BigInt::zero(); (self.num.len() - 1) * k + 1];
        for (i, c) in self.num.iter().enumerate() {
            v[i * k] = c.clone();
        }
        CycNum { m, num: reduce_big(m, v), den: self.den.clone() }
    }

    fn align(&self, other: &CycNum) -> (CycNum, CycNum) {
        let m = self.m.lcm(&other.m);
        (self.lift(m), other.lift(m))
    }

    pub fn scale(&self, x: &Q) -> CycNum {
        let num = self.num.iter().map(|c| c * x.numer()).collect();
        CycNum { m: self.m, num, den: &self.den * x.denom() }.normalized()
    }

    pub fn pow(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The automorphism `ζ ↦ ζ^k`, `gcd(k, M) = 1`.
    pub fn galois(&self, k: i64) -> CycNum {
        let m = self.m as i64;
        assert_eq!(k.gcd(&m), 1, "{k} is not a unit mod {m}");
        let mut v = vec![BigInt::zero(); self.m as usize];
        for (i, c) in self.num.iter().enumerate() {
            v[(i as i64 * k).rem_euclid(m) as usize] += c;
        }
        Self::build(self.m, v, self.den.clone())
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm over `Q[x]`.
    pub fn inv(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        let poly = cyclotomic_poly(self.m);
        let mut modulus: Vec<Q> = vec![Q::zero(); poly.degree + 1];
        modulus[poly.degree] = Q::one();
        for &(j, c) in &poly.tail {
            modulus[j] = Q::from_integer(c.into());
        }
        let a: Vec<Q> = self.coeffs();
        let (g, s) = qpoly_xgcd(trim(a), trim(modulus));
        // g is a nonzero constant because Φ_M is irreducible.
        debug_assert_eq!(g.len(), 1);
        let inv_g = Q::one() / &g[0];
        let s: Vec<Q> = s.into_iter().map(|c| c * &inv_g).collect();
        let den = s.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = s.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Some(Self::build(self.m, num, den))
    }

    /// Complex value under `ζ_M ↦ e^{2πi/M}`, correct to about `digits` decimal places.
    pub fn complex_embed(&self, digits: u32) -> ComplexApprox {
        let bits = digits * 10 / 3 + 8;
        let work = bits + 48 + 64 - self.m.leading_zeros();
        let one = BigInt::one() << work;
        let theta = (pi_fixed(work) * 2) / BigInt::from(self.m);
        let (c, s) = cos_sin_fixed(&theta, work);
        let (mut wr, mut wi) = (one.clone(), BigInt::zero());
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        for coeff in &self.num {
            re += coeff * &wr;
            im += coeff * &wi;
            let nr = (&wr * &c - &wi * &s) >> work;
            let ni = (&wr * &s + &wi * &c) >> work;
            wr = nr;
            wi = ni;
        }
        let shift = work - bits;
        ComplexApprox {
            re: (re >> shift) / &self.den,
            im: (im >> shift) / &self.den,
            bits,
        }
    }

    /// Decides whether the element is a root of unity; returns `(order, exponent)` with
    /// `self = exp(2πi·exponent/order)` and `gcd(exponent, order) = 1`.
    pub fn root_of_unity(&self) -> Option<(u64, u64)> {
        if !self.is_integral() || self.is_zero() {
            return None;
        }
        let mm = self.m.lcm(&2);
        let me = self.lift(mm);
        let z = self.complex_embed(12);
        let (re, im) = z.to_f64();
        let spread: f64 = self.num.iter().map(|c| c.to_f64().unwrap_or(f64::MAX).abs()).sum();
        if ((re * re + im * im).sqrt() - 1.0).abs() > 1e-9 * (1.0 + spread) {
            return None;
        }
        let turn = im.atan2(re) / std::f64::consts::TAU;
        let guess = ((turn * mm as f64).round() as i64).rem_euclid(mm as i64) as u64;
        let hit = std::iter::once(guess)
            .chain((0..mm).filter(|&j| j != guess))
            .find(|&j| CycNum::root(mm, j as i64) == me)?;
        let g = hit.gcd(&mm);
        Some((mm / g, hit / g))
    }
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn qpoly_sub_mul(a: &[Q], q: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = a.to_vec();
    let need = q.len() + b.len() - 1;
    if out.len() < need {
        out.resize(need, Q::zero());
    }
    for (i, x) in q.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(out)
}

fn qpoly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![Q::zero()], r);
    }
    let lead = b[db].clone();
    let mut quot = vec![Q::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let c = &r[i] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[i - db + j] -= &c * bj;
        }
        quot[i - db] = c;
    }
    r.truncate(db.max(1));
    (trim(quot), trim(r))
}

/// Returns `(g, s)` with `s·a ≡ g (mod b)`.
fn qpoly_xgcd(a: Vec<Q>, b: Vec<Q>) -> (Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Q::one()], vec![Q::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (quot, rem) = qpoly_divrem(&r0, &r1);
        let s2 = qpoly_sub_mul(&s0, &quot, &s1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        if self.m == other.m {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = self.align(other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNum {}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        let (a, b) = self.align(rhs);
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        CycNum { m: a.m, num, den: &a.den * &b.den }.normalized()
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { m: self.m, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        let (a, b) = self.align(rhs);
        let num = poly_mul_reduce(a.m, &a.num, &b.num);
        CycNum { m: a.m, num, den: &a.den * &b.den }.normalized()
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: CycNum) -> CycNum {
                (&self).$f(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*z{}", self.m),
                _ => format!("({c})*z{}^{i}", self.m),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// A fixed-point complex number `(re + i·im) / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: BigInt,
    pub im: BigInt,
    pub bits: u32,
}

impl ComplexApprox {
    pub fn to_f64(&self) -> (f64, f64) {
        let scale = 2f64.powi(self.bits as i32);
        let f = |x: &BigInt| {
            let shift = x.bits().saturating_sub(60);
            (x >> shift).to_f64().unwrap() * 2f64.powi(shift as i32) / scale
        };
        (f(&self.re), f(&self.im))
    }

    /// `|z|²` of the approximation, as an exact rational.
    pub fn abs_sq(&self) -> Q {
        let n = &self.re * &self.re + &self.im * &self.im;
        Q::new(n, BigInt::one() << (2 * self.bits))
    }
}

/// `π·2^bits` by Machin's formula.
fn pi_fixed(bits: u32) -> BigInt {
    let guard = 16;
    let w = bits + guard;
    let atan_inv = |x: u64| {
        let one = BigInt::one() << w;
        let x2 = BigInt::from(x * x);
        let mut term = one / BigInt::from(x);
        let mut sum = term.clone();
        let mut k = 1u64;
        while !term.is_zero() {
            term /= &x2;
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            k += 1;
        }
        sum
    };
    (atan_inv(5) * 16 - atan_inv(239) * 4) >> guard
}

fn cos_sin_fixed(x: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let (mut c, mut s) = (BigInt::zero(), BigInt::zero());
    let mut term = one;
    let mut n = 0u64;
    while !term.is_zero() {
        match n % 4 {
            0 => c += &term,
            1 => s += &term,
            2 => c -= &term,
            _ => s -= &term,
        }
        n += 1;
        term = ((term * x) >> bits) / BigInt::from(n);
    }
    (c, s)
}

/// `√p` as an element of a cyclotomic field, positive under the standard embedding.
pub fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        return &CycNum::root(8, 1) + &CycNum::root(8, 7);
    }
    // The quadratic Gauss sum is √p for p ≡ 1 mod 4 and i√p for p ≡ 3 mod 4.
    let mut v = vec![BigInt::zero(); p as usize];
    for a in 1..p {
        let leg = if crate::arith::mod_pow(a, (p - 1) / 2, p) == 1 { 1 } else { -1 };
        v[a as usize] = BigInt::from(leg);
    }
    let g = CycNum::from_power_sum(p, v, BigInt::one());
    if p % 4 == 1 {
        g
    } else {
        &g * &CycNum::root(4, 3)
    }
}

/// `q^{1/2}` for `q = p^f`.
pub fn sqrt_prime_power(p: u64, f: u32) -> CycNum {
    let half = CycNum::from_q(&Q::from_integer(BigInt::from(p).pow(f / 2)));
    if f.is_multiple_of(2) {
        half
    } else {
        &half * &sqrt_prime(p)
    }
}

/// `unit · qbase^{qexp}` with `qexp ∈ ½Z`, kept canonical with `qexp ∈ {0, ½}`.
#[derive(Clone, Debug)]
pub struct ScaledCyclotomic {
    unit: CycNum,
    qbase: u64,
    qexp: Q,
}

impl ScaledCyclotomic {
    pub fn new(unit: CycNum, qbase: u64, qexp: Q) -> ScaledCyclotomic {
        assert!(qbase >= 1);
        assert!(
            (&qexp * Q::from_integer(2.into())).is_integer(),
            "q-exponent {qexp} is not a half integer"
        );
        let mut out = ScaledCyclotomic { unit, qbase, qexp };
        out.canonicalize();
        out
    }

    pub fn from_cyc(unit: CycNum) -> ScaledCyclotomic {
        ScaledCyclotomic { unit, qbase: 1, qexp: Q::zero() }
    }

    pub fn zero() -> ScaledCyclotomic {
        Self::from_cyc(CycNum::from_int(0))
    }

    fn canonicalize(&mut self) {
        if self.unit.is_zero() || self.qbase == 1 {
            self.qexp = Q::zero();
            return;
        }
        let whole = self.qexp.floor();
        if !whole.is_zero() {
            let e = whole.to_integer().to_i64().expect("q-exponent out of range");
            let base = Q::from_integer(BigInt::from(self.qbase));
            let factor = if e >= 0 {
                Q::from_integer(base.numer().pow(e as u32))
            } else {
                Q::one() / Q::from_integer(base.numer().pow((-e) as u32))
            };
            self.unit = self.unit.scale(&factor);
            self.qexp -= whole;
        }
    }

    pub fn unit(&self) -> &CycNum {
        &self.unit
    }

    pub fn qbase(&self) -> u64 {
        self.qbase
    }

    pub fn qexp(&self) -> &Q {
        &self.qexp
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    fn qbase_factored(&self) -> (u64, u32) {
        let f = factor(self.qbase);
        assert_eq!(f.len(), 1, "qbase {} is not a prime power", self.qbase);
        f[0]
    }

    /// The value as a plain cyclotomic number, adjoining `√q` when `qexp = ½`.
    pub fn to_cyc(&self) -> CycNum {
        if self.qexp.is_zero() {
            return self.unit.clone();
        }
        let (p, f) = self.qbase_factored();
        &self.unit * &sqrt_prime_power(p, f)
    }

    pub fn mul(&self, other: &ScaledCyclotomic) -> ScaledCyclotomic {
        let qbase = match (self.qbase, other.qbase) {
            (1, b) | (b, 1) => b,
            (a, b) => {
                assert_eq!(a, b, "mixing q-bases");
                a
            }
        };
        ScaledCyclotomic::new(&self.unit * &other.unit, qbase, &self.qexp + &other.qexp)
    }

    pub fn scale(&self, x: &Q) -> ScaledCyclotomic {
        ScaledCyclotomic { unit: self.unit.scale(x), ..self.clone() }.recanonicalized()
    }

    pub fn mul_cyc(&self, x: &CycNum) -> ScaledCyclotomic {
        ScaledCyclotomic { unit: &self.unit * x, ..self.clone() }.recanonicalized()
    }

    fn recanonicalized(mut self) -> Self {
        self.canonicalize();
        self
    }

    pub fn add(&self, other: &ScaledCyclotomic) -> ScaledCyclotomic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.qexp == other.qexp && self.qbase == other.qbase {
            return ScaledCyclotomic::new(&self.unit + &other.unit, self.qbase, self.qexp.clone());
        }
        ScaledCyclotomic::from_cyc(&self.to_cyc() + &other.to_cyc())
    }

    pub fn conj(&self) -> ScaledCyclotomic {
        ScaledCyclotomic { unit: self.unit.conj(), ..self.clone() }
    }

    pub fn pow(&self, e: u64) -> ScaledCyclotomic {
        (0..e).fold(ScaledCyclotomic::from_cyc(CycNum::one()), |acc, _| acc.mul(self))
    }
}

impl PartialEq for ScaledCyclotomic {
    fn eq(&self, other: &ScaledCyclotomic) -> bool {
        if self.qexp == other.qexp && (self.qbase == other.qbase || self.qexp.is_zero()) {
            return self.unit == other.unit;
        }
        self.to_cyc() == other.to_cyc()
    }
}

impl fmt::Display for ScaledCyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.qexp.is_zero() {
            write!(f, "{}", self.unit)
        } else {
            write!(f, "({})*{}^({})", self.unit, self.qbase, self.qexp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::q;

    fn z(m: u64, j: i64) -> CycNum {
        CycNum::root(m, j)
    }

    #[test]
    fn small_fields() {
        assert!(z(1, 0).is_one());
        assert_eq!(z(4, 1).coeffs(), vec![q(0, 1), q(1, 1)]);
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(-1));
        assert_eq!(&z(8, 1) * &z(8, 1), z(4, 1));
        let i = z(4, 1);
        let one = CycNum::one();
        assert_eq!(&(&one + &i) * &(&one - &i), CycNum::from_int(2));
    }

    #[test]
    fn quartic_gauss_combination_squares_to_eight() {
        let s = &(&z(8, 1) - &z(8, 3)) - &(&z(8, 5) - &z(8, 7));
        assert_eq!(&s * &s, CycNum::from_int(8));
        let (re, im) = s.scale(&q(1, 4)).complex_embed(20).to_f64();
        assert!((re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 && im.abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(CycNum::one().root_of_unity(), Some((1, 0)));
        assert_eq!((-&z(4, 1)).root_of_unity(), Some((4, 3)));
        assert_eq!(CycNum::from_int(2).root_of_unity(), None);
        assert_eq!((-&z(5, 2)).root_of_unity(), Some((10, 9)));
        assert_eq!((&z(3, 1) + &z(3, 1)).root_of_unity(), None);
    }

    #[test]
    fn embedding_values() {
        let (re, im) = z(4, 1).complex_embed(20).to_f64();
        assert!(re.abs() < 1e-18 && (im - 1.0).abs() < 1e-18);
        let (re, _) = (&z(3, 1) + &z(3, 2)).complex_embed(20).to_f64();
        assert!((re + 1.0).abs() < 1e-18);
    }

    #[test]
    fn inverse_and_sqrt() {
        let a = &CycNum::from_int(3) + &z(7, 2);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        for p in [2, 3, 5, 7, 11, 13] {
            let r = sqrt_prime(p);
            assert_eq!(&r * &r, CycNum::from_int(p as i64));
            let (re, im) = r.complex_embed(10).to_f64();
            assert!((re - (p as f64).sqrt()).abs() < 1e-9 && im.abs() < 1e-9);
        }
    }

    #[test]
    fn scaled_values_canonicalize() {
        let half = ScaledCyclotomic::new(CycNum::one(), 2, q(1, 2));
        let sq = half.mul(&half);
        assert_eq!(sq, ScaledCyclotomic::from_cyc(CycNum::from_int(2)));
        assert_eq!(sq.qexp(), &Q::zero());
        let x = ScaledCyclotomic::new(CycNum::one(), 3, q(-3, 2));
        assert_eq!(x.qexp(), &q(1, 2));
        assert_eq!(x.unit(), &CycNum::from_q(&q(1, 9)));
    }
}
