//! Descriptors of ramified irreducible admissible infinite-dimensional representations of
//! `GL_2(Q_p)` with trivial central character, their conductors, twists, and GL(1) data.
//!
//! Type 1a: dihedral supercuspidal from `ξ` on a quadratic `E/Q_p`.
//! Type 1b: the sixteen nondihedral supercuspidals over `Q_2` (twists of `π₃`, `π₇`).
//! Type 2: `St ⊗ μ`, `μ` unramified quadratic.
//! Type 3: `St ⊗ μ`, `μ` ramified quadratic.
//! Type 4: `π(μ|·|^σ, μ|·|^{-σ})`, `μ` ramified quadratic.
//! Type 5: `π(μ|·|^σ, μ^{-1}|·|^{-σ})`, `μ` ramified with `μ² ≠ 1`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::arith::is_prime;
use crate::characters::{beta_label, chars_of_conductor, parse_beta_mask, q2_quadratic, LocalChar, Rou};
use crate::cyclotomic::{CycNum, ScaledCyclotomic};
use crate::error::{invalid, Error, Result};
use crate::ext::{parse_q, q, qi, Q};
use crate::gauss::eps_factor;
use crate::characters::AdditiveChar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pi0 {
    Pi3,
    Pi7,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `a = f_E·a(ξ) + d_E`, `disc = d_E` (0 for unramified `E`).
    Type1a { ramified: bool, a_xi: u32, disc: u32 },
    /// Twist bits: 1 = β₀, 2 = β₂, 4 = β₃.
    Type1b { base: Pi0, twist: u8 },
    Type2 { sign: i8 },
    Type3 { mu: LocalChar },
    Type4 { mu: LocalChar, sigma_val: Option<Q> },
    Type5 { mu: LocalChar, sigma_val: Option<Q> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KindTag {
    Type1a,
    Type1b,
    Type2,
    Type3,
    Type4,
    Type5,
}

impl fmt::Display for KindTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KindTag::Type1a => "type1a",
            KindTag::Type1b => "type1b",
            KindTag::Type2 => "type2",
            KindTag::Type3 => "type3",
            KindTag::Type4 => "type4",
            KindTag::Type5 => "type5",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDescriptor {
    p: u64,
    kind: Kind,
    a: u32,
}

fn pi3_conductor(twist: u8) -> u32 {
    match twist & 6 {
        0 => 3,
        2 => 4,
        _ => 6,
    }
}

fn check_ramified_quadratic(mu: &LocalChar) -> Result<()> {
    if mu.conductor() == 0 || !mu.unit_part().pow(2).is_trivial() {
        return Err(invalid(format!("{mu} is not a ramified quadratic character")));
    }
    if !mu.value_at_p().pow(2).is_one() {
        return Err(invalid("central character must be trivial"));
    }
    Ok(())
}

fn check_sigma(s: &Option<Q>) -> Result<()> {
    match s {
        Some(v) if v.is_negative() => Err(invalid("sigma_val is an absolute value")),
        _ => Ok(()),
    }
}

impl RepDescriptor {
    pub fn new(p: u64, kind: Kind) -> Result<RepDescriptor> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let a = match &kind {
            Kind::Type1a { ramified, a_xi, disc } => {
                if *a_xi == 0 {
                    return Err(invalid("a(ξ) must be positive"));
                }
                let a = if *ramified {
                    let ok = if p == 2 { matches!(disc, 2 | 3) } else { *disc == 1 };
                    if !ok {
                        return Err(invalid(format!("discriminant exponent {disc} impossible over Q_{p}")));
                    }
                    a_xi + disc
                } else {
                    if *disc != 0 {
                        return Err(invalid("unramified E has discriminant exponent 0"));
                    }
                    2 * a_xi
                };
                if p == 2 && (a == 3 || a == 7) {
                    return Err(invalid(format!("no dihedral supercuspidal of conductor {a} over Q_2")));
                }
                a
            }
            Kind::Type1b { base, twist } => {
                if p != 2 {
                    return Err(invalid("nondihedral supercuspidals with trivial central character need p = 2"));
                }
                if *twist > 7 {
                    return Err(invalid("twist mask out of range"));
                }
                match base {
                    Pi0::Pi3 => pi3_conductor(*twist),
                    Pi0::Pi7 => 7,
                }
            }
            Kind::Type2 { sign } => {
                if sign.abs() != 1 {
                    return Err(invalid("μ(p) must be ±1"));
                }
                1
            }
            Kind::Type3 { mu } => {
                check_ramified_quadratic(mu)?;
                2 * mu.conductor()
            }
            Kind::Type4 { mu, sigma_val } => {
                check_ramified_quadratic(mu)?;
                check_sigma(sigma_val)?;
                2 * mu.conductor()
            }
            Kind::Type5 { mu, sigma_val } => {
                if mu.conductor() == 0 {
                    return Err(invalid("Type 5 needs a ramified μ"));
                }
                if mu.unit_part().pow(2).is_trivial() {
                    return Err(invalid("Type 5 needs μ² ≠ 1"));
                }
                check_sigma(sigma_val)?;
                2 * mu.conductor()
            }
        };
        let mu_p = match &kind {
            Kind::Type3 { mu } | Kind::Type4 { mu, .. } | Kind::Type5 { mu, .. } => Some(mu.p()),
            _ => None,
        };
        if mu_p.is_some_and(|mp| mp != p) {
            return Err(invalid("μ lives over a different prime"));
        }
        Ok(RepDescriptor { p, kind, a })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn tag(&self) -> KindTag {
        match self.kind {
            Kind::Type1a { .. } => KindTag::Type1a,
            Kind::Type1b { .. } => KindTag::Type1b,
            Kind::Type2 { .. } => KindTag::Type2,
            Kind::Type3 { .. } => KindTag::Type3,
            Kind::Type4 { .. } => KindTag::Type4,
            Kind::Type5 { .. } => KindTag::Type5,
        }
    }

    /// `a(π)`.
    pub fn conductor(&self) -> u32 {
        self.a
    }

    pub fn is_supercuspidal(&self) -> bool {
        matches!(self.kind, Kind::Type1a { .. } | Kind::Type1b { .. })
    }

    pub fn mu(&self) -> Option<&LocalChar> {
        match &self.kind {
            Kind::Type3 { mu } | Kind::Type4 { mu, .. } | Kind::Type5 { mu, .. } => Some(mu),
            _ => None,
        }
    }

    /// `|val_p(q^σ)|`, with `None` resolved to the general bound `(k-1)/2`.
    pub fn sigma_val(&self, k: u32) -> Q {
        match &self.kind {
            Kind::Type4 { sigma_val, .. } | Kind::Type5 { sigma_val, .. } => {
                sigma_val.clone().unwrap_or_else(|| q(k as i64 - 1, 2))
            }
            _ => Q::zero(),
        }
    }

    pub fn explicit_sigma_val(&self) -> Option<&Q> {
        match &self.kind {
            Kind::Type4 { sigma_val, .. } | Kind::Type5 { sigma_val, .. } => sigma_val.as_ref(),
            _ => None,
        }
    }

    /// Whether `a(π)` is minimal among twists.
    pub fn is_twist_minimal(&self) -> bool {
        match &self.kind {
            Kind::Type1a { .. } => self.p != 2 || self.a % 2 == 1 || self.a == 2,
            Kind::Type1b { .. } => self.a == 3 || self.a == 7,
            _ => false,
        }
    }

    /// Upper bound for `a(χπ)` and whether it is attained.
    pub fn twist_conductor(&self, chi: &LocalChar) -> (u32, bool) {
        let ac = chi.conductor();
        if ac == 0 {
            return (self.a, true);
        }
        match &self.kind {
            Kind::Type2 { .. } => (2 * ac, true),
            Kind::Type3 { mu } => {
                let c = chi.mul(mu).conductor();
                (if c == 0 { 1 } else { 2 * c }, true)
            }
            Kind::Type4 { mu, .. } => (2 * chi.mul(mu).conductor(), true),
            Kind::Type5 { mu, .. } => (chi.mul(mu).conductor() + chi.mul(&mu.inv()).conductor(), true),
            Kind::Type1b { base, twist } if chi.beta_mask().is_some() => {
                let t = twist ^ chi.beta_mask().unwrap();
                let a = match base {
                    Pi0::Pi3 => pi3_conductor(t),
                    Pi0::Pi7 => 7,
                };
                (a, true)
            }
            _ => {
                let bound = self.a.max(2 * ac);
                (bound, 2 * ac != self.a || self.is_twist_minimal())
            }
        }
    }

    /// The descriptor of `χπ` when it stays inside the table of describable types.
    pub fn twist_by_quadratic(&self, mask: u8) -> Result<RepDescriptor> {
        match &self.kind {
            Kind::Type1b { base, twist } => RepDescriptor::new(2, Kind::Type1b { base: *base, twist: twist ^ mask }),
            _ => Err(invalid("quadratic relabelling is only tabulated for Type 1b")),
        }
    }

    /// `χπ ⊗` data: `ε(½, χπ, ψ_std)`, `L(s, χπ)` and `a(χπ)`.
    pub fn eps_l_data(&self, chi: &LocalChar) -> Result<EpsL> {
        let psi = AdditiveChar::standard(self.p);
        let one = || ScaledCyclotomic::from_cyc(CycNum::one());
        let sq = |c: &LocalChar| {
            let e = eps_factor(c, &psi);
            e.mul(&e)
        };
        match &self.kind {
            Kind::Type1a { .. } | Kind::Type1b { .. } => Err(Error::Undetermined(
                "ε of a supercuspidal twist is only known up to a fourth root of unity".into(),
            )),
            Kind::Type2 { sign } => {
                let nu = chi.with_value_at_p(chi.value_at_p().mul(sign_rou(*sign)));
                Ok(steinberg_data(&nu, &sq))
            }
            Kind::Type3 { mu } => Ok(steinberg_data(&chi.mul(mu), &sq)),
            Kind::Type4 { mu, .. } => {
                let cm = chi.mul(mu);
                if cm.conductor() == 0 {
                    let alpha = cm.value_at_p();
                    return Ok(EpsL {
                        eps: one(),
                        sigma_power: Q::zero(),
                        conductor: 0,
                        l_factor: LFactor::Characters(vec![(alpha, -1), (alpha, 1)]),
                    });
                }
                Ok(EpsL { eps: sq(&cm), sigma_power: Q::zero(), conductor: 2 * cm.conductor(), l_factor: LFactor::One })
            }
            Kind::Type5 { mu, .. } => {
                let (c1, c2) = (chi.mul(mu), chi.mul(&mu.inv()));
                let (a1, a2) = (c1.conductor(), c2.conductor());
                let mut factors = vec![];
                if a1 == 0 {
                    factors.push((c1.value_at_p(), -1));
                }
                if a2 == 0 {
                    factors.push((c2.value_at_p(), 1));
                }
                Ok(EpsL {
                    eps: eps_factor(&c1, &psi).mul(&eps_factor(&c2, &psi)),
                    sigma_power: qi(a2 as i64 - a1 as i64),
                    conductor: a1 + a2,
                    l_factor: if factors.is_empty() { LFactor::One } else { LFactor::Characters(factors) },
                })
            }
        }
    }
}

fn sign_rou(s: i8) -> Rou {
    if s < 0 {
        Rou::MINUS_ONE
    } else {
        Rou::ONE
    }
}

fn steinberg_data(nu: &LocalChar, sq: &dyn Fn(&LocalChar) -> ScaledCyclotomic) -> EpsL {
    if nu.conductor() == 0 {
        let alpha = nu.value_at_p();
        return EpsL {
            eps: ScaledCyclotomic::from_cyc(-alpha.to_cyc()),
            sigma_power: Q::zero(),
            conductor: 1,
            l_factor: LFactor::Steinberg(alpha),
        };
    }
    EpsL { eps: sq(nu), sigma_power: Q::zero(), conductor: 2 * nu.conductor(), l_factor: LFactor::One }
}

/// `L(s, χπ)` in the shapes that occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LFactor {
    One,
    /// `1 / (1 - α q^{-1/2-s})`.
    Steinberg(Rou),
    /// `Π 1 / (1 - α q^{e σ - s})` over the listed `(α, e)`.
    Characters(Vec<(Rou, i8)>),
}

/// `ε(½, χπ, ψ_std) = eps · q^{σ·sigma_power}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsL {
    pub eps: ScaledCyclotomic,
    pub sigma_power: Q,
    pub conductor: u32,
    pub l_factor: LFactor,
}

/// Candidate conductors of a twist-minimal twist of a Type 1 representation over `Q_2`.
pub fn twist_minimal_range(a: u32) -> Vec<u32> {
    if a % 2 == 1 || a == 2 {
        vec![a]
    } else if a >= 8 {
        vec![a - 2, a - 1]
    } else {
        (2..a).collect()
    }
}

/// The sixteen nondihedral supercuspidals of `GL_2(Q_2)` with trivial central character.
pub fn type1b_enumerate() -> Vec<RepDescriptor> {
    [Pi0::Pi3, Pi0::Pi7]
        .into_iter()
        .flat_map(|base| (0..8u8).map(move |twist| RepDescriptor::new(2, Kind::Type1b { base, twist }).unwrap()))
        .collect()
}

/// Whether a dihedral supercuspidal with trivial central character can have conductor `a`.
pub fn dihedral_conductor_possible(p: u64, a: u32) -> bool {
    a >= 2 && !(p == 2 && (a == 3 || a == 7))
}

/// Kinds with conductor exponent `val_p(N)`.
pub fn admissible_types(p: u64, val_n: u32) -> Result<Vec<KindTag>> {
    if val_n == 0 {
        return Err(invalid("the prime does not divide the level"));
    }
    if val_n == 1 {
        return Ok(vec![KindTag::Type2]);
    }
    let a = val_n;
    let mut out = vec![];
    if dihedral_conductor_possible(p, a) {
        out.push(KindTag::Type1a);
    }
    if p == 2 && matches!(a, 3 | 4 | 6 | 7) {
        out.push(KindTag::Type1b);
    }
    let quad = if p == 2 { matches!(a, 4 | 6) } else { a == 2 };
    if quad {
        out.push(KindTag::Type3);
        out.push(KindTag::Type4);
    }
    let type5 = a.is_multiple_of(2)
        && if p == 2 {
            a >= 8
        } else {
            a >= 4 || p >= 5
        };
    if type5 {
        out.push(KindTag::Type5);
    }
    Ok(out)
}

/// Ramified quadratic characters of `Q_p^×` with `μ(p) = 1`.
pub fn ramified_quadratics(p: u64) -> Vec<LocalChar> {
    let max = if p == 2 { 3 } else { 1 };
    (1..=max)
        .flat_map(|n| chars_of_conductor(p, n))
        .filter(|c| c.pow(2).is_trivial())
        .collect()
}

/// Concrete descriptors covering every admissible kind at conductor `val_n`.
pub fn representatives(p: u64, val_n: u32, sigma_vals: &[Option<Q>]) -> Result<Vec<RepDescriptor>> {
    let mut out = vec![];
    for tag in admissible_types(p, val_n)? {
        match tag {
            KindTag::Type2 => {
                for sign in [1, -1] {
                    out.push(RepDescriptor::new(p, Kind::Type2 { sign })?);
                }
            }
            KindTag::Type1a => out.push(type1a_with_conductor(p, val_n)?),
            KindTag::Type1b => out.extend(type1b_enumerate().into_iter().filter(|r| r.a == val_n)),
            KindTag::Type3 | KindTag::Type4 => {
                for mu in ramified_quadratics(p).into_iter().filter(|m| 2 * m.conductor() == val_n) {
                    if tag == KindTag::Type3 {
                        out.push(RepDescriptor::new(p, Kind::Type3 { mu })?);
                    } else {
                        for s in sigma_vals {
                            out.push(RepDescriptor::new(p, Kind::Type4 { mu: mu.clone(), sigma_val: s.clone() })?);
                        }
                    }
                }
            }
            KindTag::Type5 => {
                let mu = chars_of_conductor(p, val_n / 2)
                    .into_iter()
                    .find(|m| !m.pow(2).is_trivial())
                    .expect("admissibility guarantees a non-quadratic μ");
                for s in sigma_vals {
                    out.push(RepDescriptor::new(p, Kind::Type5 { mu: mu.clone(), sigma_val: s.clone() })?);
                }
            }
        }
    }
    Ok(out)
}

/// A dihedral descriptor of conductor `a`: unramified `E` for even `a`, ramified otherwise.
pub fn type1a_with_conductor(p: u64, a: u32) -> Result<RepDescriptor> {
    let kind = if a.is_multiple_of(2) {
        Kind::Type1a { ramified: false, a_xi: a / 2, disc: 0 }
    } else if p == 2 {
        Kind::Type1a { ramified: true, a_xi: a - 2, disc: 2 }
    } else {
        Kind::Type1a { ramified: true, a_xi: a - 1, disc: 1 }
    };
    RepDescriptor::new(p, kind)
}

fn mu_to_string(mu: &LocalChar) -> String {
    if let Some(mask) = mu.beta_mask() {
        return beta_label(mask);
    }
    let exps: Vec<String> = mu.exps().iter().map(|e| e.to_string()).collect();
    format!("{}:{}", mu.level(), exps.join("/"))
}

fn parse_mu(p: u64, s: &str) -> Result<LocalChar> {
    if p == 2 {
        if let Ok(mask) = parse_beta_mask(s) {
            return Ok(q2_quadratic(mask));
        }
    }
    if s == "legendre" && p != 2 {
        return ramified_quadratics(p).into_iter().next().ok_or_else(|| invalid("no quadratic"));
    }
    let bad = || Error::Parse(format!("bad μ {s:?}; expected LEVEL:E1[/E2] or a β-label"));
    let (level, exps) = s.split_once(':').ok_or_else(bad)?;
    let level = level.parse().map_err(|_| bad())?;
    let exps = exps
        .split(['/', '.'])
        .map(|e| e.parse().map_err(|_| bad()))
        .collect::<Result<Vec<u64>>>()?;
    LocalChar::new(p, level, exps)
}

impl fmt::Display for RepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        let sig = |s: &Option<Q>| s.as_ref().map(|v| format!(",sigma={v}")).unwrap_or_default();
        match &self.kind {
            Kind::Type1a { ramified, a_xi, disc } => {
                if *ramified {
                    write!(f, "type1a:p={p},ramified,a_xi={a_xi},disc={disc}")
                } else {
                    write!(f, "type1a:p={p},a_xi={a_xi}")
                }
            }
            Kind::Type1b { base, twist } => {
                let b = if *base == Pi0::Pi3 { "pi3" } else { "pi7" };
                if *twist == 0 {
                    write!(f, "type1b:{b}")
                } else {
                    write!(f, "type1b:{b}*{}", beta_label(*twist))
                }
            }
            Kind::Type2 { sign } => write!(f, "type2:p={p},sign={sign}"),
            Kind::Type3 { mu } => write!(f, "type3:p={p},mu={}", mu_to_string(mu)),
            Kind::Type4 { mu, sigma_val } => write!(f, "type4:p={p},mu={}{}", mu_to_string(mu), sig(sigma_val)),
            Kind::Type5 { mu, sigma_val } => write!(f, "type5:p={p},mu={}{}", mu_to_string(mu), sig(sigma_val)),
        }
    }
}

impl FromStr for RepDescriptor {
    type Err = Error;

    /// `type1a:p=3,a=4`, `type1a:p=2,ramified,a_xi=3,disc=2`, `type1b:pi7*b0b2`,
    /// `type2:p=5,sign=-1`, `type3:p=2,mu=b2`, `type4:p=3,mu=legendre,sigma=1/2`,
    /// `type5:p=5,mu=1:1`.
    fn from_str(s: &str) -> Result<RepDescriptor> {
        let s = s.trim();
        let (head, body) = s.split_once(':').ok_or_else(|| Error::Parse(format!("bad representation {s:?}")))?;
        let head = head.to_ascii_lowercase();
        if head == "type1b" {
            let (base, twist) = match body.split_once('*') {
                Some((b, t)) => (b, parse_beta_mask(t)?),
                None => (body, 0),
            };
            let base = match base.trim() {
                "pi3" => Pi0::Pi3,
                "pi7" => Pi0::Pi7,
                other => return Err(Error::Parse(format!("unknown base {other:?}"))),
            };
            return RepDescriptor::new(2, Kind::Type1b { base, twist });
        }
        let mut p = None;
        let mut fields = std::collections::HashMap::new();
        let mut flags = vec![];
        for part in body.split(',') {
            let part = part.trim();
            match part.split_once('=') {
                Some(("p", v)) => p = Some(v.parse::<u64>().map_err(|_| Error::Parse(format!("bad prime {v:?}")))?),
                Some((k, v)) => {
                    fields.insert(k.to_string(), v.to_string());
                }
                None => flags.push(part.to_string()),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("missing p=".into()))?;
        let num = |k: &str| -> Result<Option<i64>> {
            fields.get(k).map(|v| v.parse().map_err(|_| Error::Parse(format!("bad {k}={v}")))).transpose()
        };
        let sigma = fields.get("sigma").map(|v| parse_q(v)).transpose()?;
        let mu = || -> Result<LocalChar> {
            let m = fields.get("mu").ok_or_else(|| Error::Parse("missing mu=".into()))?;
            parse_mu(p, m)
        };
        match head.as_str() {
            "type1a" => {
                let ramified = flags.iter().any(|f| f == "ramified");
                if let Some(a) = num("a")? {
                    if num("a_xi")?.is_none() && !ramified {
                        return type1a_with_conductor(p, a as u32);
                    }
                }
                let a_xi = num("a_xi")?.ok_or_else(|| Error::Parse("type1a needs a= or a_xi=".into()))? as u32;
                let disc = num("disc")?.unwrap_or(if !ramified { 0 } else if p == 2 { 2 } else { 1 }) as u32;
                RepDescriptor::new(p, Kind::Type1a { ramified, a_xi, disc })
            }
            "type2" => RepDescriptor::new(p, Kind::Type2 { sign: num("sign")?.unwrap_or(1) as i8 }),
            "type3" => RepDescriptor::new(p, Kind::Type3 { mu: mu()? }),
            "type4" => RepDescriptor::new(p, Kind::Type4 { mu: mu()?, sigma_val: sigma }),
            "type5" => RepDescriptor::new(p, Kind::Type5 { mu: mu()?, sigma_val: sigma }),
            other => Err(Error::Parse(format!("unknown type {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(s: &str) -> RepDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn conductors() {
        assert_eq!(rep("type3:p=2,mu=b2").conductor(), 4);
        assert_eq!(rep("type3:p=2,mu=b3").conductor(), 6);
        assert_eq!(rep("type1b:pi3*b2").conductor(), 4);
        assert_eq!(rep("type1b:pi3*b0b2").conductor(), 4);
        assert_eq!(rep("type1b:pi3*b3").conductor(), 6);
        assert_eq!(rep("type1b:pi3*b0").conductor(), 3);
        assert_eq!(rep("type1b:pi7*b0b2").conductor(), 7);
        assert_eq!(rep("type2:p=3,sign=-1").conductor(), 1);
        assert_eq!(rep("type1a:p=3,a=4").conductor(), 4);
        assert!("type1a:p=2,ramified,a_xi=1,disc=2".parse::<RepDescriptor>().is_err());
        assert!("type5:p=2,mu=b2".parse::<RepDescriptor>().is_err());
        assert!("type3:p=3,mu=1:1".parse::<RepDescriptor>().is_ok());
        assert!("type5:p=3,mu=1:1".parse::<RepDescriptor>().is_err());
        assert_eq!(type1b_enumerate().len(), 16);
    }

    #[test]
    fn display_round_trip() {
        for s in ["type3:p=2,mu=b2", "type1b:pi7*b0b2", "type4:p=3,mu=1:1,sigma=1/2", "type5:p=5,mu=1:1", "type2:p=7,sign=-1"] {
            let r = rep(s);
            assert_eq!(rep(&r.to_string()), r);
        }
    }

    #[test]
    fn twisting() {
        let pi3 = rep("type1b:pi3");
        assert_eq!(pi3.twist_conductor(&q2_quadratic(4)), (6, true));
        assert_eq!(pi3.twist_conductor(&q2_quadratic(2)), (4, true));
        let t4 = rep("type1a:p=5,a=4");
        let chi1 = &chars_of_conductor(5, 1)[0];
        assert_eq!(t4.twist_conductor(chi1), (4, true));
        assert_eq!(t4.twist_conductor(&LocalChar::trivial(5)), (4, true));
        assert_eq!(twist_minimal_range(7), vec![7]);
        assert_eq!(twist_minimal_range(8), vec![6, 7]);
        assert_eq!(twist_minimal_range(2), vec![2]);
        assert_eq!(twist_minimal_range(6), vec![2, 3, 4, 5]);
    }

    #[test]
    fn admissible() {
        use KindTag::*;
        assert_eq!(admissible_types(5, 1).unwrap(), vec![Type2]);
        assert_eq!(admissible_types(5, 2).unwrap(), vec![Type1a, Type3, Type4, Type5]);
        assert_eq!(admissible_types(3, 2).unwrap(), vec![Type1a, Type3, Type4]);
        assert_eq!(admissible_types(2, 3).unwrap(), vec![Type1b]);
        assert_eq!(admissible_types(2, 8).unwrap(), vec![Type1a, Type5]);
        assert!(admissible_types(2, 0).is_err());
    }

    #[test]
    fn epsilon_squares_to_one() {
        for p in [2u64, 3, 5] {
            for mu in ramified_quadratics(p) {
                let reps = [
                    RepDescriptor::new(p, Kind::Type3 { mu: mu.clone() }).unwrap(),
                    RepDescriptor::new(p, Kind::Type4 { mu: mu.clone(), sigma_val: None }).unwrap(),
                ];
                for r in reps {
                    let e = r.eps_l_data(&LocalChar::trivial(p)).unwrap().eps;
                    assert!(e.mul(&e).to_cyc().is_one(), "{r}");
                }
            }
        }
    }

    #[test]
    fn steinberg_twist_by_mu() {
        let r = rep("type3:p=3,mu=1:1");
        let mu = r.mu().unwrap().clone();
        let d = r.eps_l_data(&mu).unwrap();
        assert_eq!(d.conductor, 1);
        assert_eq!(d.eps.to_cyc(), CycNum::from_int(-1));
        assert_eq!(d.l_factor, LFactor::Steinberg(Rou::ONE));
        let t4 = rep("type4:p=2,mu=b3");
        let d = t4.eps_l_data(&q2_quadratic(4)).unwrap();
        assert!(d.eps.to_cyc().is_one());
    }
}
