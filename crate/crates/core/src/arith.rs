//! Machine-integer number theory used throughout: primality, factoring, units mod n.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn vp(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

pub fn phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn pow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("prime power overflows u64")
}

/// `p^e` as a signed value, for residue arithmetic that goes negative.
pub fn ipow(p: u64, e: u32) -> i64 {
    pow(p, e) as i64
}

pub fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut base = (b % m) as u128;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

pub fn rem(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    let m = m as i64;
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m) as u64)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let upper: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&d| d * d != n).collect();
    out.extend(upper);
    out
}

/// Multiplicative order of `a` modulo `m`, for `gcd(a, m) = 1`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    let n = phi(m);
    divisors(n)
        .into_iter()
        .find(|&d| mod_pow(a, d, m) == 1 % m)
        .expect("a unit has finite order")
}

/// Least positive primitive root mod `p²`, odd `p`. It is a primitive root mod every `p^n`.
pub fn least_primitive_root_p2(p: u64) -> u64 {
    let m = p * p;
    let n = phi(m);
    (2..m)
        .find(|&g| g % p != 0 && mult_order(g, m) == n)
        .expect("odd prime squares have primitive roots")
}

/// Base-`p` digits, least significant first.
pub fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_facts() {
        assert_eq!(factor(2 * 2 * 2 * 2 * 2 * 3), vec![(2, 5), (3, 1)]);
        assert_eq!(phi(9), 6);
        assert_eq!(phi(1), 1);
        assert_eq!(least_primitive_root_p2(3), 2);
        assert_eq!(least_primitive_root_p2(5), 2);
        assert_eq!(least_primitive_root_p2(7), 3);
        assert_eq!(mod_inv(3, 8), Some(3));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(digits(5, 3, 2), vec![2, 1]);
    }
}
