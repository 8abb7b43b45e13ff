use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use manin::characters::{FiniteFieldChar, LocalChar};
use manin::dataset::{emit_bound_table, selftest, verify_dataset};
use manin::gauss::{
    eps_factor, finite_field_gauss, find_u, gauss_bruteforce, gauss_closed_form, root_of_unity_certificate,
    scaled_valuation, stickelberger_val,
};
use manin::manin::{manin_report, Family, FactoredInt};
use manin::modcurve::cusp_table;
use manin::reps::RepDescriptor;
use manin::whittaker::{assemble_w, local_bound, CosetIndex};
use manin::{Error, ExtRational};

#[derive(Parser)]
#[command(name = "manin", version, about = "Valuation bounds for newforms at cusps of X_0(N) and Manin constants")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Working p-adic precision (read by the library at first use).
    #[arg(long, env = "MANIN_PRECISION", global = true, hide_env_values = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bound table per cusp denominator valuation.
    Bound {
        n: u64,
        #[arg(short, long, default_value_t = 2)]
        k: u32,
        /// Restrict to one prime (default: every p | N).
        #[arg(short, long)]
        p: Option<u64>,
    },
    /// Per-prime bounds on the Manin constant of a modular parametrization.
    Manin {
        /// Level, e.g. `96` or `2^5*3`.
        n: String,
        /// Modular degree, possibly factored.
        #[arg(default_value = "1")]
        deg: String,
        #[arg(long, default_value = "x0")]
        family: String,
    },
    /// Gauss sum, epsilon factor and certificates for a character of Q_p^×.
    Gauss {
        /// `b2`, `b0b3`, ... over Q_2, or `p:level:e1,e2`.
        chi: Option<String>,
        /// Finite-field character `p:f:alpha` instead.
        #[arg(long, conflicts_with = "chi")]
        field: Option<String>,
    },
    /// Cusps of X_0(N) with local component data.
    Cusps {
        n: u64,
        #[arg(short, long)]
        p: Option<u64>,
    },
    /// Whittaker newform valuations along a column of cosets.
    Whittaker {
        /// e.g. `type3:p=2,mu=b2` or `type1a:p=3,a=4`.
        rep: String,
        #[arg(short, long)]
        ell: u32,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        t_min: i64,
        #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
        t_max: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        v: i64,
        #[arg(short, long, default_value_t = 2)]
        k: u32,
    },
    /// Check measured valuations (JSON lines; `-` for stdin) against the bounds.
    Verify { file: String },
    /// Run the invariant suite and the bundled tables.
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

/// `println!` that tolerates a closed stdout (e.g. piping into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::Consistency(_)) { 1 } else { 2 };
        Failure(code, e.to_string())
    }
}

type Out = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = cli.precision {
        std::env::set_var("MANIN_PRECISION", b.to_string());
    }
    let res = match cli.cmd {
        Cmd::Bound { n, k, p } => bound(n, k, p, cli.json),
        Cmd::Manin { n, deg, family } => run_manin(&n, &deg, &family, cli.json),
        Cmd::Gauss { chi, field } => gauss(chi, field, cli.json),
        Cmd::Cusps { n, p } => cusps(n, p, cli.json),
        Cmd::Whittaker { rep, ell, t_min, t_max, v, k } => whittaker(&rep, ell, t_min..=t_max, v, k, cli.json),
        Cmd::Verify { file } => verify(&file, cli.json),
        Cmd::Selftest { quick } => run_selftest(quick, cli.json),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn bound(n: u64, k: u32, p: Option<u64>, as_json: bool) -> Out {
    let primes: Vec<u64> = match p {
        _ if n == 0 => return Err(Failure(2, "N must be positive".into())),
        Some(p) => vec![p],
        None if n == 1 => return Err(Failure(2, "N = 1 has no prime divisors; pass --p".into())),
        None => manin::arith::factor(n).into_iter().map(|f| f.0).collect(),
    };
    let mut all = vec![];
    for p in primes {
        all.push((p, emit_bound_table(n, k, p)?));
    }
    if as_json {
        let v: Vec<_> = all.iter().map(|(p, rows)| json!({"N": n, "k": k, "p": p, "rows": rows})).collect();
        print_json(&v);
        return Ok(0);
    }
    for (p, rows) in all {
        out!("N = {n}, k = {k}, p = {p}");
        out!("{:>5} {:>8} {:>6} {:>9} {:>9} {:>10} {:>8} {:>8}", "valL", "width", "cusps", "component", "different", "threshold", "bound", "margin");
        for r in rows {
            let margin = r.margin.map_or("-".to_string(), |m| m.to_string());
            let comp = format!("({},{})", r.component.0, r.component.1);
            out!(
                "{:>5} {:>8} {:>6} {:>9} {:>9} {:>10} {:>8} {:>8}",
                r.val_l, r.width, r.count, comp, r.different, r.threshold.to_string(), r.bound.to_string(), margin
            );
        }
    }
    Ok(0)
}

fn run_manin(n: &str, deg: &str, family: &str, as_json: bool) -> Out {
    let n: FactoredInt = n.parse()?;
    let deg: FactoredInt = deg.parse()?;
    let family: Family = family.parse()?;
    let rows = manin_report(&n, &deg, family);
    if as_json {
        print_json(&json!({"N": n.to_string(), "deg": deg.to_string(), "family": family, "rows": rows}));
        return Ok(0);
    }
    out!("N = {n}, deg = {deg}, family = {family:?}");
    out!("{:>4} {:>6} {:>8} {:>10} {:>6} {:>10}  note", "p", "val N", "val deg", "correction", "bound", "rat. sing.");
    for r in rows {
        let note = if r.additive_prime_eliminated { "p does not divide c" } else { "" };
        out!(
            "{:>4} {:>6} {:>8} {:>10} {:>6} {:>10}  {note}",
            r.p,
            r.val_n,
            r.val_deg,
            r.correction,
            r.bound,
            format!("{:?}", r.rational_singularity).to_lowercase()
        );
    }
    Ok(0)
}

fn gauss(chi: Option<String>, field: Option<String>, as_json: bool) -> Out {
    if let Some(spec) = field {
        let parts: Vec<u64> = spec
            .split(':')
            .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad field character {spec:?}"))))
            .collect::<Result<_, _>>()?;
        let [p, f, alpha] = parts[..] else {
            return Err(Failure(2, format!("expected p:f:alpha, got {spec:?}")));
        };
        let chi = FiniteFieldChar::new(p, f as u32, alpha)?;
        let g = finite_field_gauss(&chi)?;
        let val = manin::padic::valuation_of_cyc(p, &g)?;
        let expected = stickelberger_val(&chi);
        let ok = val == expected;
        if as_json {
            print_json(&json!({"p": p, "f": f, "alpha": alpha, "valuation": val, "digit_sum_valuation": expected, "agree": ok}));
        } else {
            out!("finite-field Gauss sum over F_{}^{f}, alpha = {alpha}", p);
            out!("valuation {val}, digit sum / (p-1) = {expected}: {}", if ok { "agree" } else { "DISAGREE" });
        }
        return Ok(if ok { 0 } else { 1 });
    }
    let spec = chi.ok_or_else(|| Failure(2, "give a character or --field".into()))?;
    let chi: LocalChar = spec.parse()?;
    let p = chi.p();
    let a = chi.conductor();
    let brute = gauss_bruteforce(&chi, -(a as i64));
    let brute_val = brute.valuation()?;
    let eps = eps_factor(&chi, &manin::characters::AdditiveChar::standard(p));
    let eps_val = scaled_valuation(p, &eps)?;
    let mut ok = true;
    let (mut closed, mut unit, mut cert) = (None, None, None);
    if a >= 2 {
        let cf = gauss_closed_form(&chi)?;
        ok &= cf.value == brute.value;
        closed = Some(cf.value == brute.value);
        unit = Some(find_u(&chi)?.u);
        cert = Some(root_of_unity_certificate(&chi)?);
    }
    if as_json {
        print_json(&json!({
            "character": chi.to_string(), "conductor": a,
            "gauss": brute.value.to_string(), "gauss_valuation": brute_val,
            "closed_form_agrees": closed, "linearizing_unit": unit,
            "root_of_unity_square": cert.map(|(o, e)| json!({"order": o, "exponent": e})),
            "eps": eps.to_string(), "eps_valuation": eps_val,
        }));
    } else {
        out!("χ = {chi}, a(χ) = {a}");
        out!("G(p^-a, χ) = {}   (val {brute_val})", brute.value);
        if let (Some(c), Some(u), Some((o, e))) = (closed, unit, cert) {
            out!("closed form {} (u = {u}); z² = ζ_{o}^{e}", if c { "agrees" } else { "DISAGREES" });
        }
        out!("ε(½, χ, ψ) = {eps}   (val {eps_val})");
    }
    Ok(if ok { 0 } else { 1 })
}

fn cusps(n: u64, p: Option<u64>, as_json: bool) -> Out {
    let rows = cusp_table(n, p)?;
    if as_json {
        print_json(&rows);
        return Ok(0);
    }
    out!("X_0({n}): {} cusps", rows.iter().map(|r| r.count).sum::<u64>());
    for r in rows {
        let local: Vec<String> = r
            .local
            .iter()
            .map(|l| format!("p={} ({},{}) e={} d={} thr={}", l.p, l.a, l.b, l.ram_index, l.different, l.threshold))
            .collect();
        out!("L={:<6} width={:<6} count={:<4} {}", r.denominator, r.width, r.count, local.join("  "));
    }
    Ok(0)
}

fn whittaker(rep: &str, ell: u32, ts: std::ops::RangeInclusive<i64>, v: i64, k: u32, as_json: bool) -> Out {
    let pi: RepDescriptor = rep.parse()?;
    let a = pi.conductor();
    let sv = pi.sigma_val(k);
    let mut rows = vec![];
    let mut ok = true;
    for t in ts {
        let idx = CosetIndex::new(a, pi.p(), t, ell, v)?;
        let w = assemble_w(&pi, &idx, &sv, true)?;
        let b = local_bound(&pi, &idx, &sv);
        if let Some(b) = &b {
            ok &= !w.valuation_is_exact() || b.admits(&w.valuation);
        }
        rows.push((t, w, b));
    }
    if as_json {
        let v: Vec<_> = rows
            .iter()
            .map(|(t, w, b)| {
                json!({"t": t, "value": w, "bound": b.as_ref().map(|b| b.value.clone()), "bound_is_equality": b.as_ref().map(|b| b.equality)})
            })
            .collect();
        print_json(&json!({"rep": pi.to_string(), "a": a, "ell": ell, "rows": v}));
    } else {
        out!("{pi}, a(π) = {a}, ℓ = {ell}, v = {v}");
        out!("{:>4} {:>10} {:>6} {:>10}", "t", "val W", "exact", "bound");
        for (t, w, b) in &rows {
            let bound = match b {
                Some(b) if b.equality => format!("= {}", b.value),
                Some(b) => format!(">= {}", b.value),
                None => "-".into(),
            };
            let exact = if w.valuation_is_exact() { "yes" } else { "lower" };
            out!("{t:>4} {:>10} {exact:>6} {bound:>10}", w.valuation.to_string());
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn verify(file: &str, as_json: bool) -> Out {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(2, e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| Failure(2, format!("{file}: {e}")))?
    };
    let report = verify_dataset(&text);
    if as_json {
        print_json(&report);
    } else {
        for r in &report.results {
            let status = match (r.pass, r.sharp) {
                (true, true) => "PASS SHARP",
                (true, false) => "PASS",
                _ => "FAIL",
            };
            out!("{:<10} {:<8} p={:<3} valL={:<2} measured {:>6}  bound {:>6}", status, r.label, r.p, r.val_l, r.measured.to_string(), r.bound.to_string());
        }
        for g in report.groups.iter().filter(|g| !g.consistent) {
            let vals: Vec<String> = g.values.iter().map(ExtRational::to_string).collect();
            out!("INCONSISTENT {} p={} valL={}: {}", g.label, g.p, g.val_l, vals.join(", "));
        }
        for m in &report.malformed {
            out!("MALFORMED line {}: {}", m.line, m.message);
        }
        let s = &report.summary;
        out!(
            "{} records: {} pass ({} sharp), {} fail, {} malformed, {} inconsistent groups",
            s.records, s.pass, s.sharp, s.fail, s.malformed, s.inconsistent_groups
        );
    }
    Ok(report.exit_code() as u8)
}

fn run_selftest(quick: bool, as_json: bool) -> Out {
    let report = selftest(quick);
    if as_json {
        print_json(&report);
    } else {
        for c in &report.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            if c.passed {
                out!("{status} {}", c.name);
            } else {
                out!("{status} {}: {}", c.name, c.detail);
            }
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}
