//! Global bounds for Fourier expansions of newforms at cusps of `X_0(N)` and the resulting
//! divisibility constraints on Manin constants.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{factor, is_prime};
use crate::error::{invalid, Error, Result};
use crate::ext::{q, qi, ExtRational, Q};
use crate::modcurve::integrality_threshold;
use crate::reps::RepDescriptor;
use crate::whittaker::{local_bound, CosetIndex};

/// A positive integer with its factorization, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredInt {
    factors: Vec<(u64, u32)>,
    value: u128,
}

impl FactoredInt {
    pub fn new(mut factors: Vec<(u64, u32)>) -> Result<FactoredInt> {
        factors.sort();
        let mut merged: Vec<(u64, u32)> = vec![];
        for (p, e) in factors {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ if e > 0 => merged.push((p, e)),
                _ => {}
            }
        }
        let mut value: u128 = 1;
        for &(p, e) in &merged {
            for _ in 0..e {
                value = value.checked_mul(p as u128).ok_or_else(|| invalid("integer too large"))?;
            }
        }
        Ok(FactoredInt { factors: merged, value })
    }

    pub fn from_u64(n: u64) -> Result<FactoredInt> {
        if n == 0 {
            return Err(invalid("expected a positive integer"));
        }
        FactoredInt::new(factor(n))
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn val(&self, p: u64) -> u32 {
        self.factors.iter().find(|f| f.0 == p).map_or(0, |f| f.1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| f.0)
    }
}

impl FromStr for FactoredInt {
    type Err = Error;

    /// Accepts `96`, `2^5*3` or `2^5 * 3`.
    fn from_str(s: &str) -> Result<FactoredInt> {
        let mut factors = vec![];
        for tok in s.split('*').map(str::trim) {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
                None => (tok, 1),
            };
            let n: u64 = base.parse().map_err(|_| Error::Parse(format!("bad factor {tok:?}")))?;
            if n == 0 {
                return Err(Error::Parse("zero factor".into()));
            }
            for (p, e) in factor(n) {
                factors.push((p, e * exp));
            }
        }
        FactoredInt::new(factors)
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

fn check_vals(val_n: u32, val_l: u32) -> Result<()> {
    if val_l > val_n {
        return Err(invalid(format!("val_p L = {val_l} exceeds val_p N = {val_n}")));
    }
    Ok(())
}

/// `val_p(N / gcd(L², N))`.
fn width_val(val_n: u32, val_l: u32) -> i64 {
    val_n as i64 - (2 * val_l).min(val_n) as i64
}

/// Lower bound for `val_p(f|_c)`, `f` a newform of weight `k` and `c` a cusp with `val_p L = val_l`.
pub fn newform_cusp_bound(p: u64, k: u32, val_n: u32, val_l: u32) -> Result<ExtRational> {
    check_vals(val_n, val_l)?;
    if k == 0 || k % 2 == 1 {
        return Err(invalid(format!("weight {k} must be even and positive")));
    }
    let g = val_l.min(val_n - val_l);
    let half = 2 * val_l == val_n;
    let general = if g == 0 || (g == 1 && val_n > 2) {
        Q::zero()
    } else if half && val_l == 1 {
        q(-1, 2)
    } else {
        qi(1) - q(g as i64, 2)
    };
    let mut s = general;
    if p == 2 {
        let strong = if half && val_l == 1 {
            Some(Q::zero())
        } else if half && (2..=4).contains(&val_l) {
            Some(q(k as i64, 2))
        } else if half && val_l > 4 {
            Some(q(k as i64, 2) + qi(1) - q(val_n as i64, 4))
        } else if g == 3 && val_n > 6 {
            Some(Q::zero())
        } else {
            None
        };
        if let Some(x) = strong {
            s = s.max(x);
        }
    }
    Ok(ExtRational::Fin(s - q(k as i64 * width_val(val_n, val_l), 2)))
}

/// The weight-2 table, in terms of `val_p(N/L)`; checked against [`newform_cusp_bound`].
pub fn weight2_bound(p: u64, val_n: u32, val_l: u32) -> Result<ExtRational> {
    check_vals(val_n, val_l)?;
    let g = val_l.min(val_n - val_l) as i64;
    let half = 2 * val_l == val_n;
    let s = if g == 0 {
        Q::zero()
    } else if val_l == 1 && val_n == 2 {
        q(1, 2).max(q(1, p as i64 - 1))
    } else if g == 1 {
        qi(1)
    } else if p == 2 && half && (2..=4).contains(&val_l) {
        qi(1) + q(val_n as i64, 2)
    } else if p == 2 && half {
        qi(2) + q(val_n as i64, 4)
    } else if p == 2 && g == 3 && val_n > 6 {
        qi(3)
    } else {
        qi(1) + q(g, 2)
    };
    let out = ExtRational::Fin(s - qi(val_n as i64 - val_l as i64));
    let general = newform_cusp_bound(p, 2, val_n, val_l)?;
    if out != general {
        return Err(Error::Consistency(format!(
            "weight-2 table gives {out} but the general bound gives {general} at p={p}, val N={val_n}, val L={val_l}"
        )));
    }
    Ok(out)
}

/// Scan length for `τ`; past it the combined candidates no longer decrease.
pub fn tau_cutoff(val_n: u32, k: u32) -> i64 {
    2 * val_n as i64 + 2 * k as i64 + 4
}

/// `-(k/2) val_p(N/gcd(L²,N)) + min_τ (kτ/2 + local bound at t = τ - max(val N, 2 val L))`.
pub fn localglobal_combine(pi: &RepDescriptor, k: u32, val_n: u32, val_l: u32) -> Result<ExtRational> {
    check_vals(val_n, val_l)?;
    if pi.conductor() != val_n || val_n == 0 {
        return Err(invalid(format!("a(π) = {} does not match val_p N = {val_n}", pi.conductor())));
    }
    let sv = pi.sigma_val(k);
    let shift = val_n.max(2 * val_l) as i64;
    let mut best = ExtRational::Inf;
    for tau in 0..=tau_cutoff(val_n, k) {
        let idx = CosetIndex::at(val_n, tau - shift, val_l);
        let b = local_bound(pi, &idx, &sv)
            .ok_or_else(|| Error::Undetermined(format!("no local bound row for {pi} at t = {}, ℓ = {val_l}", idx.t)))?;
        if let ExtRational::Fin(v) = b.value {
            let cand = ExtRational::Fin(v + q(k as i64 * tau, 2));
            best = best.min(cand);
        }
    }
    Ok(match best {
        ExtRational::Fin(v) => ExtRational::Fin(v - q(k as i64 * width_val(val_n, val_l), 2)),
        ExtRational::Inf => ExtRational::Inf,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalSingularity {
    Rational,
    /// The sufficient criterion does not apply; nothing is claimed.
    Unknown,
}

/// Whether `X_0(N)` over `Z_(p)` is known to have rational singularities.
pub fn rational_singularity(p: u64, n: &FactoredInt) -> RationalSingularity {
    let has = |r: u64, m: u64| n.primes().any(|q| q % m == r);
    let ok = match p {
        2 => n.val(2) <= 2 || has(3, 4),
        3 => n.val(3) <= 2 || has(2, 3),
        _ => true,
    };
    if ok {
        RationalSingularity::Rational
    } else {
        RationalSingularity::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    X0,
    X1,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "x0" | "gamma0" => Ok(Family::X0),
            "x1" | "gamma1" => Ok(Family::X1),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected x0 or x1)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ManinRow {
    pub p: u64,
    pub val_n: u32,
    pub val_deg: u32,
    pub correction: u32,
    /// Upper bound for `val_p(c_φ)`.
    pub bound: u32,
    pub rational_singularity: RationalSingularity,
    /// `p² | N`, `p ∤ deg φ` and no correction: `p` cannot divide `c_φ`.
    pub additive_prime_eliminated: bool,
}

/// Per-prime upper bounds for `val_p(c_φ)` over the primes dividing `N · deg φ`.
pub fn manin_report(n: &FactoredInt, deg: &FactoredInt, family: Family) -> Vec<ManinRow> {
    let mut primes: Vec<u64> = n.primes().chain(deg.primes()).collect();
    primes.sort();
    primes.dedup();
    primes
        .into_iter()
        .map(|p| {
            let (val_n, val_deg) = (n.val(p), deg.val(p));
            let rs = rational_singularity(p, n);
            let correction = match family {
                Family::X1 => 0,
                Family::X0 if p <= 3 && val_n >= 3 && rs == RationalSingularity::Unknown => 1,
                Family::X0 => 0,
            };
            ManinRow {
                p,
                val_n,
                val_deg,
                correction,
                bound: val_deg + correction,
                rational_singularity: rs,
                additive_prime_eliminated: val_n >= 2 && val_deg == 0 && correction == 0,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityRow {
    pub val_l: u32,
    pub bound: ExtRational,
    pub threshold: ExtRational,
    pub margin: ExtRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityCheck {
    pub p: u64,
    pub val_n: u32,
    pub holds: bool,
    pub rows: Vec<IntegralityRow>,
}

/// Whether the weight-2 bound reaches the integrality threshold at every cusp denominator.
pub fn integrality_check(p: u64, val_n: u32) -> Result<IntegralityCheck> {
    let mut rows = vec![];
    for val_l in 0..=val_n {
        let bound = weight2_bound(p, val_n, val_l)?;
        let threshold = integrality_threshold(p, val_n, val_l)?;
        let margin = ExtRational::Fin(bound.finite().unwrap() - threshold.finite().unwrap());
        rows.push(IntegralityRow { val_l, bound, threshold, margin });
    }
    let holds = rows.iter().all(|r| r.margin >= ExtRational::zero());
    Ok(IntegralityCheck { p, val_n, holds, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::representatives;

    #[test]
    fn general_bound_examples() {
        assert_eq!(newform_cusp_bound(3, 2, 2, 1).unwrap(), ExtRational::frac(-1, 2));
        assert_eq!(newform_cusp_bound(2, 2, 6, 3).unwrap(), ExtRational::int(1));
        assert_eq!(newform_cusp_bound(7, 4, 3, 0).unwrap(), ExtRational::int(-6));
    }

    #[test]
    fn weight2_examples() {
        assert_eq!(weight2_bound(2, 5, 1).unwrap(), ExtRational::int(-3));
        assert_eq!(weight2_bound(3, 2, 1).unwrap(), ExtRational::frac(-1, 2));
        assert_eq!(weight2_bound(2, 8, 4).unwrap(), ExtRational::int(1));
        for p in [2u64, 3, 5, 7, 11, 13] {
            for n in 0..=12 {
                for l in 0..=n {
                    weight2_bound(p, n, l).unwrap();
                }
            }
        }
    }

    #[test]
    fn width_shifted_bound_is_symmetric() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for k in [2u32, 4, 6] {
                for n in 0..=10 {
                    for l in 0..=n {
                        let shifted = |l| {
                            newform_cusp_bound(p, k, n, l).unwrap().finite().unwrap() + q((k as i64) * width_val(n, l), 2)
                        };
                        assert_eq!(shifted(l), shifted(n - l), "p={p} k={k} n={n} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn local_global_examples() {
        let sc = crate::reps::type1a_with_conductor(5, 2).unwrap();
        assert_eq!(localglobal_combine(&sc, 2, 2, 1).unwrap(), ExtRational::Fin(q(-1, 2) + q(1, 4)));
        let b2 = RepDescriptor::new(2, crate::reps::Kind::Type3 { mu: crate::characters::q2_quadratic(2) }).unwrap();
        assert_eq!(localglobal_combine(&b2, 2, 4, 2).unwrap(), ExtRational::int(1));
        let st = RepDescriptor::new(3, crate::reps::Kind::Type2 { sign: -1 }).unwrap();
        assert_eq!(localglobal_combine(&st, 2, 1, 0).unwrap(), ExtRational::int(-1));
        assert_eq!(localglobal_combine(&st, 2, 1, 1).unwrap(), ExtRational::zero());
    }

    #[test]
    fn local_global_dominates() {
        for p in [2u64, 3, 5] {
            for n in 1..=6u32 {
                for k in [2u32, 4] {
                    let svs = [Some(Q::zero()), Some(q(k as i64 - 1, 2))];
                    for pi in representatives(p, n, &svs).unwrap() {
                        for l in 0..=n {
                            let lg = localglobal_combine(&pi, k, n, l).unwrap();
                            let nb = newform_cusp_bound(p, k, n, l).unwrap();
                            assert!(lg >= nb, "{pi} k={k} l={l}: {lg} < {nb}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn singularities_and_reports() {
        let f = |s: &str| s.parse::<FactoredInt>().unwrap();
        assert_eq!(rational_singularity(7, &f("7^5")), RationalSingularity::Rational);
        assert_eq!(rational_singularity(3, &f("27*7")), RationalSingularity::Unknown);
        assert_eq!(rational_singularity(2, &f("12")), RationalSingularity::Rational);
        let at = |n: &str, fam, p| manin_report(&f(n), &f("1"), fam).into_iter().find(|r| r.p == p).unwrap().correction;
        assert_eq!(at("27", Family::X0, 3), 1);
        assert_eq!(at("27", Family::X1, 3), 0);
        assert_eq!(at("2^5*3", Family::X0, 2), 0);
        assert_eq!(at("2^5*5", Family::X0, 2), 1);
    }

    #[test]
    fn factored_parsing() {
        let n: FactoredInt = "2^5 * 3".parse().unwrap();
        assert_eq!(n.value(), 96);
        assert_eq!(n.to_string(), "2^5*3");
        assert_eq!("96".parse::<FactoredInt>().unwrap(), n);
        assert!("2^x".parse::<FactoredInt>().is_err());
        assert!("4^2".parse::<FactoredInt>().unwrap().val(2) == 4);
    }

    #[test]
    fn integrality() {
        let c = integrality_check(5, 2).unwrap();
        assert!(c.holds);
        let margins: Vec<ExtRational> = c.rows.iter().map(|r| r.margin.clone()).collect();
        assert_eq!(margins, vec![ExtRational::zero(), ExtRational::frac(1, 4), ExtRational::zero()]);
        assert!(integrality_check(3, 0).unwrap().holds);
        for p in [2u64, 3, 5, 7, 11, 13] {
            for n in 0..=10 {
                assert!(integrality_check(p, n).unwrap().holds, "p={p} n={n}");
            }
        }
    }
}
