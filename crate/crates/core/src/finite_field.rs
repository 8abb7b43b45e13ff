//! Small finite fields `F_{p^f}` with log tables.
//!
//! An element is indexed by the integer whose base-`p` digits (least significant first) are its
//! coordinates in the basis `1, u, …, u^{f-1}`, where `u` is a root of the modulus `g`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{digits, is_prime, pow};
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct FiniteField {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// Monic modulus, low degree first, length `f + 1`.
    pub modulus: Vec<u64>,
    /// The chosen generator of `F_q^×` (see [`FiniteField::with_generator_rank`]).
    pub generator: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
    trace: Vec<u64>,
}

fn poly_mulmod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let f = g.len() - 1;
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (f..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..f {
            prod[i - f + j] = (prod[i - f + j] + (p - c) * g[j]) % p;
        }
        prod[i] = 0;
    }
    prod.truncate(f);
    prod
}

fn has_root_or_factor(g: &[u64], p: u64) -> bool {
    let f = g.len() - 1;
    // Trial division by every monic polynomial of degree 1..=f/2.
    for d in 1..=f / 2 {
        for idx in 0..pow(p, d as u32) {
            let mut h = digits(idx, p, d);
            h.push(1);
            let mut r = g.to_vec();
            for i in (d..r.len()).rev() {
                let c = r[i];
                if c == 0 {
                    continue;
                }
                for j in 0..=d {
                    r[i - d + j] = (r[i - d + j] + (p - c) * h[j] % p) % p;
                }
            }
            if r[..d].iter().all(|&c| c == 0) {
                return true;
            }
        }
    }
    false
}

/// Least monic irreducible polynomial of degree `f`, tails compared constant term first.
fn least_irreducible(p: u64, f: u32) -> Vec<u64> {
    let total = pow(p, f);
    for idx in 0..total {
        // Most significant base-p digit is the constant term, so increasing idx walks the
        // lexicographic order with c_0 compared first.
        let mut tail = digits(idx, p, f as usize);
        tail.reverse();
        let mut g = tail;
        g.push(1);
        if f == 1 || (g[0] != 0 && !has_root_or_factor(&g, p)) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u64, f: u32) -> Result<Arc<FiniteField>> {
        Self::with_generator_rank(p, f, 0)
    }

    /// Field whose distinguished generator is the `rank`-th generator of `F_q^×` in index order.
    /// Rank 0 is the canonical choice used everywhere else.
    pub fn with_generator_rank(p: u64, f: u32, rank: usize) -> Result<Arc<FiniteField>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32, usize), Arc<FiniteField>>>> =
            OnceLock::new();
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::Invalid("residue degree must be positive".into()));
        }
        let cache = CACHE.get_or_init(Default::default);
        if let Some(ff) = cache.lock().unwrap().get(&(p, f, rank)) {
            return Ok(ff.clone());
        }
        let ff = Arc::new(Self::build(p, f, rank));
        cache.lock().unwrap().insert((p, f, rank), ff.clone());
        Ok(ff)
    }

    fn build(p: u64, f: u32, rank: usize) -> FiniteField {
        let q = pow(p, f);
        let modulus = least_irreducible(p, f);
        let to_vec = |n: u64| digits(n, p, f as usize);
        let from_vec = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c);
        let order_is_full = |g: u64| {
            let gv = to_vec(g);
            let mut x = gv.clone();
            let mut k = 1;
            while from_vec(&x) != 1 {
                x = poly_mulmod(&x, &gv, &modulus, p);
                k += 1;
            }
            k == q - 1
        };
        let generator = (1..q)
            .filter(|&g| order_is_full(g))
            .nth(rank)
            .expect("generator rank out of range");
        let gv = to_vec(generator);
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u64; q as usize];
        let mut x = to_vec(1);
        for k in 0..q - 1 {
            let idx = from_vec(&x);
            exp.push(idx);
            log[idx as usize] = k;
            x = poly_mulmod(&x, &gv, &modulus, p);
        }
        let mut ff = FiniteField { p, f, q, modulus, generator, exp, log, trace: vec![] };
        ff.trace = (0..q).map(|a| ff.compute_trace(a)).collect();
        ff
    }

    fn compute_trace(&self, a: u64) -> u64 {
        let mut acc = vec![0u64; self.f as usize];
        let mut x = a;
        for _ in 0..self.f {
            let v = self.coords(x);
            for (s, c) in acc.iter_mut().zip(v) {
                *s = (*s + c) % self.p;
            }
            x = self.pow(x, self.p);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    pub fn coords(&self, a: u64) -> Vec<u64> {
        digits(a, self.p, self.f as usize)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let k = (self.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128) as u64;
        self.exp[k as usize]
    }

    /// Discrete log to the distinguished generator; `a ≠ 0`.
    pub fn log(&self, a: u64) -> u64 {
        assert!(a != 0 && a < self.q, "log of {a}");
        self.log[a as usize]
    }

    pub fn gen_pow(&self, k: u64) -> u64 {
        self.exp[(k % (self.q - 1)) as usize]
    }

    pub fn trace(&self, a: u64) -> u64 {
        self.trace[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_and_generators() {
        let f9 = FiniteField::new(3, 2).unwrap();
        // x² + 1 is the least irreducible quadratic over F_3 with c_0 compared first.
        assert_eq!(f9.modulus, vec![1, 0, 1]);
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(f5.generator, 2);
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.modulus, vec![1, 1, 1]);
        assert!(FiniteField::new(4, 1).is_err());
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let ff = FiniteField::new(5, 2).unwrap();
        let add = |a: u64, b: u64| {
            let (x, y) = (ff.coords(a), ff.coords(b));
            x.iter().zip(&y).rev().fold(0, |acc, (c, d)| acc * 5 + (c + d) % 5)
        };
        for a in 0..ff.q {
            for b in 0..ff.q {
                assert_eq!(ff.trace(add(a, b)), (ff.trace(a) + ff.trace(b)) % 5);
            }
        }
        assert!((0..ff.q).any(|a| ff.trace(a) == 1));
    }
}
