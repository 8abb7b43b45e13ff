//! Gauss sums over `Q_p` and finite fields, GL(1) epsilon factors, and the root-of-unity
//! property of normalized Gauss sums for wildly ramified characters.
//!
//! All sums are with respect to the normalized measure `∫_{Z_p^×} d^×y = 1`, so
//! `𝔊(x, χ) = φ(p^m)^{-1} Σ_{y mod p^m} χ(y) ψ(xy)` for `m` large enough.

use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{phi, pow};
use crate::characters::{psi_std, split_p, AdditiveChar, FiniteFieldChar, LocalChar, Rou, UnitGroup};
use crate::cyclotomic::{CycNum, ScaledCyclotomic};
use crate::error::{invalid, Error, Result};
use crate::ext::{q, qi, ExtRational, Q};
use crate::finite_field::FiniteField;
use crate::padic::{valuation_of_cyc, valuation_of_q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    BruteForce,
    ClosedForm,
}

#[derive(Clone, Debug)]
pub struct GaussValue {
    pub value: ScaledCyclotomic,
    pub provenance: Provenance,
    p: u64,
}

impl GaussValue {
    /// `val_p` of the value through the fixed embedding.
    pub fn valuation(&self) -> Result<ExtRational> {
        scaled_valuation(self.p, &self.value)
    }
}

/// `val_p(unit · qbase^{qexp})` with `qbase` a power of `p` (or 1).
pub fn scaled_valuation(p: u64, x: &ScaledCyclotomic) -> Result<ExtRational> {
    if x.is_zero() {
        return Ok(ExtRational::Inf);
    }
    let v = valuation_of_cyc(p, x.unit())?;
    let base = match valuation_of_q(p, &qi(x.qbase() as i64)) {
        ExtRational::Fin(b) => b,
        ExtRational::Inf => unreachable!(),
    };
    Ok(v + base * x.qexp())
}

/// Sums `Σ w(y)` over `y` in the unit group mod `p^m`, where each `w(y)` is a root of unity.
fn rou_sum(modulus_hint: u64, terms: impl Iterator<Item = Rou>, den: i64) -> CycNum {
    let terms: Vec<Rou> = terms.collect();
    let m = terms.iter().fold(modulus_hint.max(1), |acc, r| acc.lcm(&r.order()));
    let mut counts = vec![0i64; m as usize];
    for r in terms {
        counts[(r.num() * (m / r.order())) as usize] += 1;
    }
    CycNum::from_histogram(m, &counts, den)
}

/// `𝔊_ψ(p^{x_val}, χ)` by direct summation, `ψ = ψ_std`.
pub fn gauss_bruteforce(chi: &LocalChar, x_val: i64) -> GaussValue {
    gauss_bruteforce_psi(chi, &AdditiveChar::standard(chi.p()), x_val)
}

pub fn gauss_bruteforce_psi(chi: &LocalChar, psi: &AdditiveChar, x_val: i64) -> GaussValue {
    let p = chi.p();
    let m = (chi.level() as i64).max(-x_val).max(0) as u32;
    let value = if m == 0 {
        CycNum::one()
    } else {
        let g = UnitGroup::get(p, m);
        let x = if x_val >= 0 { qi(pow(p, x_val as u32) as i64) } else { q(1, pow(p, (-x_val) as u32) as i64) };
        let terms = g.units().map(|y| chi.eval_unit(y as i64).mul(psi.eval(&(&x * qi(y as i64)))));
        rou_sum(1, terms, phi(pow(p, m)) as i64)
    };
    GaussValue { value: ScaledCyclotomic::from_cyc(value), provenance: Provenance::BruteForce, p }
}

/// `𝔊_ψ(x, χ)` for any nonzero rational `x`, via `𝔊(p^v u, χ) = χ(u)^{-1} 𝔊(p^v, χ)`.
pub fn gauss_at(chi: &LocalChar, x: &Q) -> Result<GaussValue> {
    if x.is_zero() {
        return Err(invalid("Gauss sum at x = 0"));
    }
    let (v, u) = split_p(x, chi.p());
    let mut g = gauss_bruteforce(chi, v);
    let twist = chi.unit_part().eval(&u).inv();
    g.value = g.value.mul_cyc(&twist.to_cyc());
    Ok(g)
}

/// The classical Gauss sum `g(χ) = -Σ_{a ∈ F^×} χ(a) ψ̄(a)` with `ψ(a) = ζ_p^{Tr a}`.
pub fn finite_field_gauss(chi: &FiniteFieldChar) -> Result<CycNum> {
    let field = FiniteField::new(chi.p, chi.f)?;
    let terms = (1..field.q).map(|a| chi.eval(&field, a).mul(Rou::new(-(field.trace(a) as i64), chi.p)));
    Ok(-rou_sum((field.q - 1) * chi.p, terms, 1))
}

/// Stickelberger: `val_p g(χ) = s(χ)/(p-1)`.
pub fn stickelberger_val(chi: &FiniteFieldChar) -> ExtRational {
    ExtRational::frac(chi.digit_sum() as i64, chi.p as i64 - 1)
}

/// `ε(½, χ, ψ)`, including an unramified twist (through `χ(p)`) and the shift of `ψ`.
pub fn eps_factor(chi: &LocalChar, psi: &AdditiveChar) -> ScaledCyclotomic {
    let p = chi.p();
    let a = chi.conductor();
    if a == 0 {
        return ScaledCyclotomic::from_cyc(CycNum::one());
    }
    let g = gauss_bruteforce(&chi.unit_part().inv(), -(a as i64));
    let unit = g.value.unit().scale(&qi(p as i64 - 1));
    let twist = chi.value_at_p().pow(a as i64).mul(chi.eval_unit(psi.shift));
    ScaledCyclotomic::new(&unit * &twist.to_cyc(), p, q(a as i64, 2) - qi(1))
}

/// `ε(s, χ, ψ) = ε(½, χ, ψ) q^{-a(χ)(s-½)}` for `s ∈ ½Z`.
pub fn eps_at_s(chi: &LocalChar, psi: &AdditiveChar, s: &Q) -> Result<ScaledCyclotomic> {
    let a = chi.conductor() as i64;
    let shift = -(s - q(1, 2)) * qi(a);
    if !(&shift * qi(2)).is_integer() {
        return Err(invalid(format!("ε at s = {s} leaves Q(ζ, √p)")));
    }
    let half = eps_factor(chi, psi);
    Ok(half.mul(&ScaledCyclotomic::new(CycNum::one(), chi.p(), shift)))
}

/// `val_p ε(½, χ∘N, ψ)` over the unramified extension of residue degree `f_res`.
pub fn eps_valuation(chi: &LocalChar, f_res: u32) -> Result<ExtRational> {
    let a = chi.conductor();
    if a != 1 || chi.unit_part().pow(2).is_trivial() {
        return Ok(ExtRational::zero());
    }
    let s = crate::characters::tame_alpha(&chi.unit_part().inv())?.digit_sum();
    let f = f_res as i64;
    Ok(ExtRational::from(q(-f, 2) + q(f * s as i64, chi.p() as i64 - 1)))
}

/// A unit `u` (least representative mod `p^{⌈a/2⌉}`) linearizing `χ` near 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitWitness {
    pub u: u64,
    pub conductor: u32,
    /// Whether the quadratic refinement (odd `p`, odd `a`) was imposed and checked.
    pub quadratic_refinement: bool,
}

fn psi(p: u64, x: Q) -> Rou {
    psi_std(p, &x)
}

/// Checks the linearization identities for a candidate `u`.
fn linearizes(chi: &LocalChar, u: u64, quadratic: bool) -> bool {
    let p = chi.p();
    let a = chi.conductor();
    let pp = |e: u32| pow(p, e) as i64;
    let ui = qi(u as i64);
    if a.is_multiple_of(2) {
        let h = a / 2;
        (0..pp(h)).all(|x| chi.eval_unit(1 + pp(h) * x) == psi(p, &ui * q(x, pp(h))))
    } else if !quadratic {
        let (lo, hi) = ((a - 1) / 2, a.div_ceil(2));
        (0..pp(lo)).all(|x| chi.eval_unit(1 + pp(hi) * x) == psi(p, &ui * q(x, pp(lo))))
    } else {
        let (lo, hi) = ((a - 1) / 2, a.div_ceil(2));
        (0..pp(hi)).all(|x| {
            let arg = q(x, pp(hi)) - q(x * x, 2 * p as i64);
            chi.eval_unit(1 + pp(lo) * x) == psi(p, &ui * arg)
        })
    }
}

pub fn find_u(chi: &LocalChar) -> Result<UnitWitness> {
    let p = chi.p();
    let a = chi.conductor();
    if a < 2 {
        return Err(invalid(format!("linearizing unit needs a(χ) ≥ 2, got {a}")));
    }
    let quadratic = p != 2 && a % 2 == 1;
    let range = pow(p, a.div_ceil(2));
    let u = (1..range)
        .filter(|u| u % p != 0)
        .find(|&u| linearizes(chi, u, false) && (!quadratic || linearizes(chi, u, true)))
        .ok_or_else(|| Error::Consistency(format!("no linearizing unit for {chi}")))?;
    Ok(UnitWitness { u, conductor: a, quadratic_refinement: quadratic })
}

/// `𝔊_ψ(p^{-a}, χ)` from the linearizing unit, `a = a(χ) ≥ 2`.
pub fn gauss_closed_form(chi: &LocalChar) -> Result<GaussValue> {
    let p = chi.p();
    let w = find_u(chi)?;
    let a = w.conductor;
    let ui = w.u as i64;
    let pa = pow(p, a) as i64;
    let lead = psi(p, q(-ui, pa));
    let chi_u = chi.unit_part();
    let (sum, qexp) = if a % 2 == 0 {
        (lead.mul(chi_u.eval_unit(-ui)).to_cyc(), qi(1) - q(a as i64, 2))
    } else {
        let lo = pow(p, (a - 1) / 2) as i64;
        let hi = pow(p, a.div_ceil(2)) as i64;
        let terms = (0..p as i64).map(|t| {
            chi_u.eval_unit(-ui - ui * t * lo).mul(psi(p, q(-ui * t, hi))).mul(lead)
        });
        (rou_sum(1, terms, 1), -q(a as i64 - 1, 2))
    };
    let value = ScaledCyclotomic::new(sum.scale(&q(1, p as i64 - 1)), p, qexp);
    Ok(GaussValue { value, provenance: Provenance::ClosedForm, p })
}

/// For `a(χ) ≥ 2`, `z = q^{a/2-1}(q-1)𝔊_ψ(p^{-a}, χ)` is a root of unity. Returns the
/// `(order, exponent)` of `z²`, which lies in `Q(ζ)`.
pub fn root_of_unity_certificate(chi: &LocalChar) -> Result<(u64, u64)> {
    let p = chi.p();
    let a = chi.conductor();
    if a < 2 {
        return Err(invalid(format!("certificate needs a(χ) ≥ 2, got {a}")));
    }
    let g = gauss_bruteforce(&chi.unit_part(), -(a as i64));
    let unit = g.value.unit().scale(&qi(p as i64 - 1));
    let z2 = unit.pow(2).scale(&Q::from_integer(num_bigint::BigInt::from(p).pow(a - 2)));
    z2.root_of_unity()
        .ok_or_else(|| Error::Consistency(format!("normalized Gauss sum of {chi} is not a root of unity")))
}

/// The value of `ε(½, χ, ψ_std)` for the quadratic characters of `Q_2^×`, keyed by β-mask.
pub fn q2_eps_table() -> Vec<(u8, ScaledCyclotomic)> {
    (0..8u8)
        .map(|mask| (mask, eps_factor(&crate::characters::q2_quadratic(mask), &AdditiveChar::standard(2))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{chars_of_conductor, enumerate_chars, q2_quadratic};

    fn i() -> CycNum {
        CycNum::root(4, 1)
    }

    #[test]
    fn q2_gauss_sums() {
        let g = gauss_bruteforce(&q2_quadratic(2), -2);
        assert_eq!(g.value.to_cyc(), i());
        let r2 = crate::cyclotomic::sqrt_prime(2);
        let g = gauss_bruteforce(&q2_quadratic(4), -3);
        assert_eq!(&g.value.to_cyc() * &r2, CycNum::one());
        let g = gauss_bruteforce(&q2_quadratic(6), -3);
        assert_eq!(&g.value.to_cyc() * &r2, i());
        assert!(gauss_bruteforce(&q2_quadratic(4), -1).value.is_zero());
    }

    #[test]
    fn q2_epsilons() {
        let psi = AdditiveChar::standard(2);
        let eps = |m| eps_factor(&q2_quadratic(m), &psi).to_cyc();
        assert_eq!(eps(2), i());
        assert_eq!(eps(4), CycNum::one());
        assert_eq!(eps(6), i());
        assert_eq!(eps(1), CycNum::one());
        assert_eq!(eps(0), CycNum::one());
        // β₀ twists multiply by β₀(2)^{a} = (-1)^a.
        assert_eq!(eps(3), i());
        assert_eq!(eps(5), -&CycNum::one());
    }

    #[test]
    fn case_table() {
        for (p, n) in [(2u64, 4u32), (3, 3), (5, 2)] {
            for chi in enumerate_chars(p, n) {
                let a = chi.conductor() as i64;
                for x_val in -5..=1 {
                    let g = gauss_bruteforce(&chi, x_val).value;
                    let expect_zero = if a == 0 { x_val < -1 } else { x_val != -a };
                    assert_eq!(g.is_zero(), expect_zero, "{chi} at {x_val}");
                    if a == 0 && x_val >= 0 {
                        assert!(g.to_cyc().is_one());
                    }
                    if a == 0 && x_val == -1 {
                        assert_eq!(g.to_cyc(), CycNum::from_q(&q(-1, p as i64 - 1)));
                    }
                }
            }
        }
    }

    #[test]
    fn duality() {
        let psi = |p| AdditiveChar::standard(p);
        for (p, n) in [(2u64, 3u32), (3, 3), (5, 2)] {
            for chi in enumerate_chars(p, n) {
                let lhs = eps_factor(&chi, &psi(p)).mul(&eps_factor(&chi.inv(), &psi(p)));
                assert_eq!(lhs.to_cyc(), chi.eval_unit(-1).to_cyc(), "{chi}");
            }
        }
    }

    #[test]
    fn closed_form_matches() {
        for (p, a) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
            for chi in chars_of_conductor(p, a) {
                let b = gauss_bruteforce(&chi, -(a as i64)).value;
                let c = gauss_closed_form(&chi).unwrap().value;
                assert_eq!(b, c, "{chi}");
            }
        }
    }

    #[test]
    fn finite_field_basics() {
        let triv = FiniteFieldChar::new(3, 1, 0).unwrap();
        assert!(finite_field_gauss(&triv).unwrap().is_one());
        let quad3 = FiniteFieldChar::new(3, 1, 1).unwrap();
        let g = finite_field_gauss(&quad3).unwrap();
        assert_eq!(&g * &g, CycNum::from_int(-3));
        let quad5 = FiniteFieldChar::new(5, 1, 2).unwrap();
        let g = finite_field_gauss(&quad5).unwrap();
        assert_eq!(&g * &g, CycNum::from_int(5));
    }

    #[test]
    fn stickelberger_small() {
        for (p, f) in [(3u64, 1u32), (5, 1), (2, 2)] {
            for chi in FiniteFieldChar::all(p, f) {
                let g = finite_field_gauss(&chi).unwrap();
                assert_eq!(valuation_of_cyc(p, &g).unwrap(), stickelberger_val(&chi), "{chi:?}");
            }
        }
    }

    #[test]
    fn tame_epsilon_valuation() {
        for p in [3u64, 5, 7] {
            for chi in chars_of_conductor(p, 1) {
                let e = eps_factor(&chi, &AdditiveChar::standard(p));
                let direct = scaled_valuation(p, &e).unwrap();
                if chi.pow(2).is_trivial() {
                    assert_eq!(eps_valuation(&chi, 1).unwrap(), ExtRational::zero());
                } else {
                    assert_eq!(eps_valuation(&chi, 1).unwrap(), direct, "{chi}");
                }
            }
        }
    }
}
