//! Measured-valuation records, their verification against the global bounds, bound tables and
//! the self-test behind `manin selftest`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{divisors, is_prime, pow, vp};
use crate::error::{invalid, Error, Result};
use crate::ext::{parse_q, ExtRational};
use crate::manin::{integrality_check, localglobal_combine, newform_cusp_bound, weight2_bound};
use crate::modcurve::{component_of_cusp, cusp_count, different_val, integrality_threshold, ram_index, width};

pub const TABLE1: &str = include_str!("../data/table1.jsonl");
pub const TABLE2: &str = include_str!("../data/table2.jsonl");

/// A measured `val_p(f|_c)` for a weight-`k` newform of level `N` at a cusp with `val_p L = val_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasuredRecord {
    pub label: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: u32,
    pub p: u64,
    #[serde(rename = "valL")]
    pub val_l: u32,
    #[serde(serialize_with = "ser_fraction")]
    pub measured: ExtRational,
}

fn ser_fraction<S: Serializer>(x: &ExtRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        ExtRational::Fin(q) => s.collect_str(&format_args!("{}/{}", q.numer(), q.denom())),
        ExtRational::Inf => s.serialize_str("inf"),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    label: String,
    #[serde(rename = "N")]
    n: u64,
    k: u32,
    p: u64,
    #[serde(rename = "valL")]
    val_l: Option<u32>,
    cusp: Option<String>,
    measured: String,
}

impl MeasuredRecord {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("N must be positive"));
        }
        if self.k == 0 || self.k % 2 == 1 {
            return Err(invalid(format!("weight {} must be even and positive", self.k)));
        }
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        let val_n = vp(self.n, self.p);
        if self.val_l > val_n {
            return Err(invalid(format!("valL = {} exceeds val_{} N = {val_n}", self.val_l, self.p)));
        }
        Ok(())
    }

    /// The bound the record is checked against.
    pub fn bound(&self) -> Result<ExtRational> {
        let val_n = vp(self.n, self.p);
        if self.k == 2 {
            weight2_bound(self.p, val_n, self.val_l)
        } else {
            newform_cusp_bound(self.p, self.k, val_n, self.val_l)
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// `val_p L` of a cusp written `a/L`.
fn cusp_val(cusp: &str, p: u64) -> Result<u32> {
    let den = match cusp.split_once('/') {
        Some((_, d)) => d.trim(),
        None => "1",
    };
    let l: u64 = den.parse().map_err(|_| Error::Parse(format!("bad cusp {cusp:?}")))?;
    if l == 0 {
        return Err(Error::Parse(format!("bad cusp {cusp:?}")));
    }
    Ok(vp(l, p))
}

pub fn parse_record(line: &str) -> Result<MeasuredRecord> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
    let val_l = match (raw.val_l, &raw.cusp) {
        (Some(v), _) => v,
        (None, Some(c)) => cusp_val(c, raw.p)?,
        (None, None) => return Err(Error::Parse("missing valL (or cusp)".into())),
    };
    let measured = match raw.measured.trim() {
        "inf" | "∞" => ExtRational::Inf,
        s => ExtRational::Fin(parse_q(s)?),
    };
    let rec = MeasuredRecord { label: raw.label, n: raw.n, k: raw.k, p: raw.p, val_l, measured };
    rec.validate()?;
    Ok(rec)
}

#[derive(Clone, Debug, Serialize)]
pub struct Malformed {
    pub line: usize,
    pub message: String,
}

/// Parses JSON lines; blank lines and `#` comments are skipped, bad lines are collected.
pub fn parse_jsonl(text: &str) -> (Vec<(usize, MeasuredRecord)>, Vec<Malformed>) {
    let mut good = vec![];
    let mut bad = vec![];
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match parse_record(t) {
            Ok(r) => good.push((i + 1, r)),
            Err(e) => bad.push(Malformed { line: i + 1, message: e.to_string() }),
        }
    }
    (good, bad)
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordResult {
    pub line: usize,
    pub label: String,
    pub p: u64,
    #[serde(rename = "valL")]
    pub val_l: u32,
    pub measured: ExtRational,
    pub bound: ExtRational,
    pub pass: bool,
    pub sharp: bool,
}

/// Records sharing `(label, p, valL)` must agree: the valuation depends only on `val_p L`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupCheck {
    pub label: String,
    pub p: u64,
    #[serde(rename = "valL")]
    pub val_l: u32,
    pub values: Vec<ExtRational>,
    pub consistent: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub records: usize,
    pub pass: usize,
    pub fail: usize,
    pub sharp: usize,
    pub malformed: usize,
    pub inconsistent_groups: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DatasetReport {
    pub results: Vec<RecordResult>,
    pub groups: Vec<GroupCheck>,
    pub malformed: Vec<Malformed>,
    pub summary: Summary,
}

impl DatasetReport {
    pub fn verified(&self) -> bool {
        self.summary.fail == 0 && self.summary.inconsistent_groups == 0
    }

    /// 0 ok, 1 verification failure, 2 malformed input.
    pub fn exit_code(&self) -> i32 {
        if !self.verified() {
            1
        } else if self.summary.malformed > 0 {
            2
        } else {
            0
        }
    }

    pub fn all_sharp(&self) -> bool {
        self.summary.sharp == self.summary.records
    }
}

pub fn verify_records(records: &[(usize, MeasuredRecord)], malformed: Vec<Malformed>) -> DatasetReport {
    let mut results = vec![];
    let mut bad = malformed;
    let mut grouped: BTreeMap<(String, u64, u32), Vec<ExtRational>> = BTreeMap::new();
    for (line, r) in records {
        let bound = match r.bound() {
            Ok(b) => b,
            Err(e) => {
                bad.push(Malformed { line: *line, message: e.to_string() });
                continue;
            }
        };
        grouped.entry((r.label.clone(), r.p, r.val_l)).or_default().push(r.measured.clone());
        results.push(RecordResult {
            line: *line,
            label: r.label.clone(),
            p: r.p,
            val_l: r.val_l,
            pass: r.measured >= bound,
            sharp: r.measured == bound,
            measured: r.measured.clone(),
            bound,
        });
    }
    let groups: Vec<GroupCheck> = grouped
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|((label, p, val_l), values)| {
            let consistent = values.iter().all(|v| v == &values[0]);
            GroupCheck { label, p, val_l, values, consistent }
        })
        .collect();
    bad.sort_by_key(|m| m.line);
    let summary = Summary {
        records: results.len(),
        pass: results.iter().filter(|r| r.pass).count(),
        fail: results.iter().filter(|r| !r.pass).count(),
        sharp: results.iter().filter(|r| r.sharp).count(),
        malformed: bad.len(),
        inconsistent_groups: groups.iter().filter(|g| !g.consistent).count(),
    };
    DatasetReport { results, groups, malformed: bad, summary }
}

pub fn verify_dataset(text: &str) -> DatasetReport {
    let (good, bad) = parse_jsonl(text);
    verify_records(&good, bad)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    #[serde(rename = "valL")]
    pub val_l: u32,
    /// Width of the cusps with denominator `p^valL`.
    pub width: u64,
    /// Number of cusps whose denominator has `p`-valuation `valL`.
    pub count: u64,
    pub component: (u32, u32),
    pub different: u64,
    pub threshold: ExtRational,
    pub bound: ExtRational,
    /// `bound - threshold`; the threshold concerns weight 2 only.
    pub margin: Option<ExtRational>,
}

/// One row per `valL` in `0..=val_p N`.
pub fn emit_bound_table(n: u64, k: u32, p: u64) -> Result<Vec<BoundRow>> {
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let val_n = vp(n, p);
    let divs = divisors(n);
    (0..=val_n)
        .map(|val_l| {
            let l = pow(p, val_l);
            let comp = component_of_cusp(p, n, l)?;
            let count = divs.iter().filter(|&&d| vp(d, p) == val_l).map(|&d| cusp_count(n, d)).sum::<Result<u64>>()?;
            let threshold = integrality_threshold(p, val_n, val_l)?;
            let bound = if k == 2 { weight2_bound(p, val_n, val_l)? } else { newform_cusp_bound(p, k, val_n, val_l)? };
            let margin = match (&bound, &threshold, k) {
                (ExtRational::Fin(b), ExtRational::Fin(t), 2) => Some(ExtRational::Fin(b - t)),
                _ => None,
            };
            Ok(BoundRow {
                val_l,
                width: width(n, l)?,
                count,
                component: (comp.a, comp.b),
                different: different_val(&comp),
                threshold,
                bound,
                margin,
            })
        })
        .collect()
}

/// Whether the row's threshold equals `-different / ram_index` of its component.
pub fn row_is_coherent(p: u64, row: &BoundRow) -> bool {
    let comp = crate::modcurve::Component { p, a: row.component.0, b: row.component.1 };
    ExtRational::frac(-(row.different as i64), ram_index(&comp) as i64) == row.threshold
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, f: impl FnOnce() -> Result<Vec<String>>) -> CheckResult {
    match f() {
        Ok(problems) if problems.is_empty() => CheckResult { name: name.into(), passed: true, detail: "ok".into() },
        Ok(problems) => CheckResult { name: name.into(), passed: false, detail: problems.join("; ") },
        Err(e) => CheckResult { name: name.into(), passed: false, detail: e.to_string() },
    }
}

/// Every record must be well formed, PASS and SHARP, and survive a JSONL round trip.
pub fn table_problems(text: &str) -> Vec<String> {
    let report = verify_dataset(text);
    let mut out: Vec<String> = report.malformed.iter().map(|m| format!("line {}: {}", m.line, m.message)).collect();
    for r in &report.results {
        if !r.sharp {
            out.push(format!("{} valL={}: measured {} but bound {}", r.label, r.val_l, r.measured, r.bound));
        }
    }
    for g in report.groups.iter().filter(|g| !g.consistent) {
        out.push(format!("{} valL={}: disagreeing values", g.label, g.val_l));
    }
    let (good, _) = parse_jsonl(text);
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    for ((_, r), orig) in good.iter().zip(lines) {
        if r.to_json_line() != orig {
            out.push(format!("round trip changed {orig}"));
        }
    }
    out
}

/// Runs the invariant suite and the bundled tables.
pub fn selftest(quick: bool) -> SelftestReport {
    selftest_with(&[("table1", TABLE1), ("table2", TABLE2)], quick)
}

pub fn selftest_with(tables: &[(&str, &str)], quick: bool) -> SelftestReport {
    let primes: &[u64] = if quick { &[2, 3, 5] } else { &[2, 3, 5, 7, 11, 13] };
    let max_n: u32 = if quick { 6 } else { 10 };
    let mut checks = vec![];
    for (name, text) in tables {
        checks.push(check(&format!("bundled {name}"), || Ok(table_problems(text))));
    }
    checks.push(check("weight-2 table against general bound", || {
        for &p in primes {
            for n in 0..=max_n {
                for l in 0..=n {
                    weight2_bound(p, n, l)?;
                }
            }
        }
        Ok(vec![])
    }));
    checks.push(check("integrality at weight 2", || {
        let mut out = vec![];
        for &p in primes {
            for n in 0..=max_n {
                if !integrality_check(p, n)?.holds {
                    out.push(format!("p={p} valN={n}"));
                }
            }
        }
        Ok(out)
    }));
    checks.push(check("bound symmetry", || {
        let mut out = vec![];
        for &p in primes {
            for k in [2u32, 4, 6] {
                for n in 0..=max_n {
                    for l in 0..=n {
                        let shift = |l: u32| -> Result<ExtRational> {
                            let w = n as i64 - (2 * l).min(n) as i64;
                            Ok(newform_cusp_bound(p, k, n, l)? + ExtRational::frac(k as i64 * w, 2))
                        };
                        if shift(l)? != shift(n - l)? {
                            out.push(format!("p={p} k={k} valN={n} valL={l}"));
                        }
                    }
                }
            }
        }
        Ok(out)
    }));
    checks.push(check("threshold coherence", || {
        let mut out = vec![];
        for &p in primes {
            for n in [p.pow(max_n.min(4)), 4 * p * p, 36] {
                for row in emit_bound_table(n, 2, p)? {
                    if !row_is_coherent(p, &row) {
                        out.push(format!("N={n} p={p} valL={}", row.val_l));
                    }
                }
            }
        }
        Ok(out)
    }));
    checks.push(check("local-global dominance", || {
        let (ps, top): (&[u64], u32) = if quick { (&[2, 3], 4) } else { (&[2, 3, 5, 7], 8) };
        let mut out = vec![];
        for &p in ps {
            for n in 1..=top {
                for k in [2u32, 4] {
                    let svs = [Some(crate::ext::Q::from_integer(0.into())), Some(crate::ext::q(k as i64 - 1, 2))];
                    for pi in crate::reps::representatives(p, n, &svs)? {
                        for l in 0..=n {
                            if localglobal_combine(&pi, k, n, l)? < newform_cusp_bound(p, k, n, l)? {
                                out.push(format!("{pi} k={k} valL={l}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }));
    checks.push(check("Q_2 quadratic epsilon factors", || {
        let i = crate::cyclotomic::ScaledCyclotomic::from_cyc(crate::cyclotomic::CycNum::root(4, 1));
        let one = crate::cyclotomic::ScaledCyclotomic::from_cyc(crate::cyclotomic::CycNum::one());
        let table = crate::gauss::q2_eps_table();
        let want = [(2u8, &i), (4, &one), (6, &i)];
        Ok(want
            .iter()
            .filter(|(m, v)| table.iter().find(|e| e.0 == *m).map(|e| &e.1) != Some(*v))
            .map(|(m, _)| format!("mask {m}"))
            .collect())
    }));
    checks.push(check("Stickelberger valuations", || {
        let mut out = vec![];
        let ps: &[u64] = if quick { &[2, 3] } else { &[2, 3, 5, 7] };
        for &p in ps {
            for chi in crate::characters::FiniteFieldChar::all(p, 1) {
                let g = crate::gauss::finite_field_gauss(&chi)?;
                if crate::padic::valuation_of_cyc(p, &g)? != crate::gauss::stickelberger_val(&chi) {
                    out.push(format!("p={p} alpha={chi:?}"));
                }
            }
        }
        Ok(out)
    }));
    checks.push(check("cusp partition", || {
        let top = if quick { 500 } else { 3000 };
        Ok((1..=top)
            .filter(|&n| {
                divisors(n).iter().map(|&l| cusp_count(n, l).unwrap()).sum::<u64>() != crate::modcurve::total_cusps(n)
            })
            .map(|n| format!("N={n}"))
            .collect())
    }));
    SelftestReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_are_sharp() {
        for t in [TABLE1, TABLE2] {
            let r = verify_dataset(t);
            assert!(r.verified() && r.all_sharp(), "{:?}", r.summary);
            assert_eq!(r.exit_code(), 0);
        }
        assert_eq!(verify_dataset(TABLE1).summary.records, 16);
        assert_eq!(verify_dataset(TABLE2).summary.records, 9);
    }

    #[test]
    fn examples_pass_sharply() {
        let r = verify_dataset(
            r#"{"label":"24a","N":24,"k":2,"p":2,"valL":1,"measured":"-1/1"}
{"label":"128b","N":128,"k":2,"p":2,"cusp":"1/8","measured":"-1"}
{"label":"162d","N":162,"k":2,"p":3,"valL":2,"measured":"0/1"}"#,
        );
        assert_eq!(r.summary.sharp, 3);
        assert!(r.verified());
    }

    #[test]
    fn failures_and_malformed_lines() {
        let r = verify_dataset(
            r#"{"label":"x","N":32,"k":2,"p":2,"valL":1,"measured":"-4/1"}
not json
{"label":"y","N":32,"k":2,"p":2,"valL":6,"measured":"0/1"}
{"label":"z","N":32,"k":2,"p":2,"valL":1,"measured":"-2/1"}
{"label":"z","N":32,"k":2,"p":2,"valL":1,"measured":"-3/1"}"#,
        );
        assert_eq!(r.summary.malformed, 2);
        assert_eq!(r.summary.fail, 1);
        assert_eq!(r.summary.inconsistent_groups, 1);
        assert_eq!(r.exit_code(), 1);
        let only_bad = verify_dataset("{}\n");
        assert_eq!(only_bad.exit_code(), 2);
    }

    #[test]
    fn jsonl_round_trip() {
        for t in [TABLE1, TABLE2] {
            let (recs, bad) = parse_jsonl(t);
            assert!(bad.is_empty());
            let out: String = recs.iter().map(|(_, r)| r.to_json_line() + "\n").collect();
            assert_eq!(out, t);
        }
    }

    #[test]
    fn bound_tables() {
        let rows = emit_bound_table(32, 2, 2).unwrap();
        let b: Vec<String> = rows.iter().map(|r| r.bound.to_string()).collect();
        assert_eq!(b, ["-5", "-3", "-1", "0", "0", "0"]);
        assert!(rows.iter().all(|r| r.margin.as_ref().unwrap() >= &ExtRational::zero()));
        let rows = emit_bound_table(27, 2, 3).unwrap();
        let b: Vec<String> = rows.iter().map(|r| r.bound.to_string()).collect();
        assert_eq!(b, ["-3", "-1", "0", "0"]);
        let rows = emit_bound_table(35, 2, 2).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].bound, ExtRational::zero());
        assert_eq!(rows[0].count, crate::modcurve::total_cusps(35));
    }

    #[test]
    fn selftest_detects_corruption() {
        assert!(selftest(true).passed());
        let bad = TABLE1.replacen("\"-3/1\"", "\"-2/1\"", 1);
        let r = selftest_with(&[("table1", &bad)], true);
        assert!(!r.passed());
        assert!(r.checks[0].detail.contains("32a"));
    }
}
