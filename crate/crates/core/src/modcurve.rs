//! Cusps of `X_0(N)` and the components of its mod-`p` fiber they reduce to.
//!
//! A cusp class is recorded by its denominator `L | N`; its reduction at `p` lies on the
//! `(val_p L, val_p(N/L))`-component.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{divisors, factor, phi, pow, vp};
use crate::error::{invalid, Result};
use crate::ext::{q, qi, ExtRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CuspClass {
    pub n: u64,
    pub l: u64,
}

impl CuspClass {
    pub fn new(n: u64, l: u64) -> Result<CuspClass> {
        check_divisor(n, l)?;
        Ok(CuspClass { n, l })
    }

    pub fn width(&self) -> u64 {
        self.n / (self.l * self.l).gcd(&self.n)
    }

    pub fn count(&self) -> u64 {
        phi(self.l.gcd(&(self.n / self.l)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub p: u64,
    pub a: u32,
    pub b: u32,
}

fn check_divisor(n: u64, l: u64) -> Result<()> {
    if n == 0 || l == 0 || !n.is_multiple_of(l) {
        return Err(invalid(format!("{l} does not divide {n}")));
    }
    Ok(())
}

pub fn width(n: u64, l: u64) -> Result<u64> {
    Ok(CuspClass::new(n, l)?.width())
}

/// Number of cusps with denominator `L`.
pub fn cusp_count(n: u64, l: u64) -> Result<u64> {
    Ok(CuspClass::new(n, l)?.count())
}

/// Total number of cusps of `X_0(N)` from the prime-power closed form.
pub fn total_cusps(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .map(|(p, k)| if k % 2 == 0 { pow(p, k / 2 - 1) * (p + 1) } else { 2 * pow(p, k / 2) })
        .product()
}

pub fn component_of_cusp(p: u64, n: u64, l: u64) -> Result<Component> {
    check_divisor(n, l)?;
    Ok(Component { p, a: vp(l, p), b: vp(n / l, p) })
}

/// `e_{(a,b)} = φ(p^{min(a,b)})`.
pub fn ram_index(c: &Component) -> u64 {
    phi(pow(c.p, c.a.min(c.b)))
}

/// Valuation of the different at the cusp on the `(a, b)`-component.
pub fn different_val(c: &Component) -> u64 {
    let (p, a, b) = (c.p, c.a as u64, c.b as u64);
    if b == 0 {
        0
    } else if a == 0 {
        b
    } else {
        pow(p, c.a.min(c.b) - 1) * (p * b - b - 1)
    }
}

/// The valuation a Fourier expansion at a cusp with `val_p L = val_l` must reach.
pub fn integrality_threshold(p: u64, val_n: u32, val_l: u32) -> Result<ExtRational> {
    if val_l > val_n {
        return Err(invalid(format!("val_p L = {val_l} exceeds val_p N = {val_n}")));
    }
    Ok(if val_l == 0 {
        ExtRational::int(-(val_n as i64))
    } else if val_l == val_n {
        ExtRational::zero()
    } else {
        ExtRational::Fin(-qi((val_n - val_l) as i64) + q(1, p as i64 - 1))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalCuspData {
    pub p: u64,
    pub a: u32,
    pub b: u32,
    pub ram_index: u64,
    pub different: u64,
    pub threshold: ExtRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspRow {
    pub denominator: u64,
    pub width: u64,
    pub count: u64,
    pub local: Vec<LocalCuspData>,
}

/// One row per denominator, with local data at `p` (or at every `p | N`).
pub fn cusp_table(n: u64, p: Option<u64>) -> Result<Vec<CuspRow>> {
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    let primes: Vec<u64> = match p {
        Some(p) if !crate::arith::is_prime(p) => return Err(crate::Error::NotPrime(p)),
        Some(p) => vec![p],
        None => factor(n).into_iter().map(|x| x.0).collect(),
    };
    divisors(n)
        .into_iter()
        .map(|l| {
            let c = CuspClass::new(n, l)?;
            let local = primes
                .iter()
                .map(|&p| {
                    let comp = component_of_cusp(p, n, l)?;
                    Ok(LocalCuspData {
                        p,
                        a: comp.a,
                        b: comp.b,
                        ram_index: ram_index(&comp),
                        different: different_val(&comp),
                        threshold: integrality_threshold(p, vp(n, p), comp.a)?,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(CuspRow { denominator: l, width: c.width(), count: c.count(), local })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycNum;
    use crate::padic::valuation_of_cyc;

    #[test]
    fn widths_and_counts() {
        assert_eq!(width(20, 2).unwrap(), 5);
        assert_eq!(width(36, 36).unwrap(), 1);
        assert_eq!(width(36, 1).unwrap(), 36);
        assert_eq!(cusp_count(49, 7).unwrap(), 6);
        assert_eq!(cusp_count(36, 36).unwrap(), 1);
        assert!(width(20, 3).is_err());
    }

    #[test]
    fn cusp_partition() {
        for n in 1..=10_000u64 {
            let by_denominator: u64 = divisors(n).iter().map(|&l| cusp_count(n, l).unwrap()).sum();
            assert_eq!(by_denominator, total_cusps(n), "N = {n}");
        }
    }

    #[test]
    fn components_and_differents() {
        assert_eq!(component_of_cusp(2, 32, 2).unwrap(), Component { p: 2, a: 1, b: 4 });
        let c = |p, a, b| Component { p, a, b };
        assert_eq!(ram_index(&c(3, 1, 1)), 2);
        assert_eq!(ram_index(&c(2, 2, 3)), 2);
        assert_eq!(different_val(&c(5, 0, 3)), 3);
        assert_eq!(different_val(&c(5, 3, 0)), 0);
        assert_eq!(different_val(&c(2, 1, 1)), 0);
        assert_eq!(integrality_threshold(3, 5, 2).unwrap(), ExtRational::frac(-5, 2));
    }

    #[test]
    fn threshold_is_minus_different_over_index() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for val_n in 0..=10u32 {
                for val_l in 0..=val_n {
                    let comp = c_of(p, val_l, val_n - val_l);
                    let lhs = ExtRational::frac(-(different_val(&comp) as i64), ram_index(&comp) as i64);
                    assert_eq!(lhs, integrality_threshold(p, val_n, val_l).unwrap());
                }
            }
        }
    }

    fn c_of(p: u64, a: u32, b: u32) -> Component {
        Component { p, a, b }
    }

    #[test]
    fn different_tower() {
        for p in [2u64, 3, 5] {
            for b in 1..=6u32 {
                for a in 1..=b {
                    let lhs = different_val(&c_of(p, a, b));
                    let rhs = (b - a) as u64 * phi(pow(p, a)) + different_val(&c_of(p, a, a));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn cyclotomic_different() {
        for p in [2u64, 3, 5] {
            for b in 1..=4u32 {
                if phi(pow(p, b)) > 128 {
                    continue;
                }
                let m = pow(p, b);
                let step = pow(p, b - 1) as i64;
                // Φ'_{p^b}(ζ) = Σ_k k p^{b-1} ζ^{k p^{b-1} - 1}.
                let deriv = (1..p as i64).fold(CycNum::zero(m), |acc, k| {
                    &acc + &CycNum::root(m, k * step - 1).scale(&qi(k * step))
                });
                let v = valuation_of_cyc(p, &deriv).unwrap();
                let e = qi(phi(m) as i64);
                assert_eq!(v.scale(&e), ExtRational::int(different_val(&c_of(p, b, b)) as i64));
            }
        }
    }
}
