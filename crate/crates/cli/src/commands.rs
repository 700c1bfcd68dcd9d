//! Rendering of the single-shot subcommands.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use pierce_core::dyadic::{check_arch_bound, profile_pair, ScaleExponent};
use pierce_core::exponent::{exponent_budget, gamma, optimize_gamma, ExponentPoint};
use pierce_core::pmax::{pmax_dp, pmax_dp_with_digest};
use pierce_core::ratio::fmt_ratio;
use pierce_core::witness::{arithmetic_witness, validate_witness, WitnessReport};
use pierce_core::{pierce_digits, reconstruct, trajectory};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::Format;

/// Rendered output plus the exit code it calls for.
pub struct Rendered {
    pub text: String,
    pub code: i32,
    pub note: Option<String>,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered {
            text,
            code: 0,
            note: None,
        }
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn joined(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn expand(a: u64, n: u64, format: Format) -> CliResult<Rendered> {
    if a > n {
        return Err(CliError::Usage(format!("expand needs a <= n (a = {a}, n = {n})")));
    }
    let t = trajectory(a, n, None)?;
    let e = pierce_digits(a, n)?;
    let back = reconstruct(&e)?;
    let want = BigRational::new(a.into(), n.into());
    if back != want {
        return Err(CliError::Failure(format!(
            "reconstruction gave {} instead of {}",
            fmt_ratio(&back),
            fmt_ratio(&want)
        )));
    }
    let text = match format {
        Format::Text => format!(
            "a={a} n={n} P={}\nterms: {}\nquotients: {}\ndigits: {}\nreconstruction: {}\n",
            t.length(),
            joined(t.terms()),
            joined(t.quotients()),
            joined(e.digits()),
            fmt_ratio(&back)
        ),
        Format::Csv => {
            let mut s = String::from("j,a_j,quotient,digit\n");
            for (j, &x) in t.terms().iter().enumerate() {
                let q = t.quotients().get(j).map(u64::to_string).unwrap_or_default();
                let d = e.digits().get(j).map(u64::to_string).unwrap_or_default();
                let _ = writeln!(s, "{j},{x},{q},{d}");
            }
            s
        }
        Format::Json => json_text(&json!({
            "a": a,
            "n": n,
            "length": t.length(),
            "terms": t.terms(),
            "quotients": t.quotients(),
            "digits": e.digits(),
            "reconstruction": fmt_ratio(&back),
        })),
    };
    Ok(Rendered::ok(text))
}

pub fn pmax(n: u64, with_digest: bool, format: Format) -> CliResult<Rendered> {
    let r = if with_digest {
        pmax_dp_with_digest(n)?
    } else {
        pmax_dp(n)?
    };
    let text = match format {
        Format::Text => {
            let mut s = format!("n={} pmax={} argmax={}\n", r.n, r.pmax, r.argmax);
            if let Some(d) = &r.table_digest {
                let _ = writeln!(s, "table_sha256={d}");
            }
            s
        }
        Format::Csv => match &r.table_digest {
            Some(d) => format!(
                "n,pmax,argmax,table_sha256\n{},{},{},{d}\n",
                r.n, r.pmax, r.argmax
            ),
            None => format!("n,pmax,argmax\n{},{},{}\n", r.n, r.pmax, r.argmax),
        },
        Format::Json => {
            let mut v = json!({"n": r.n, "pmax": r.pmax, "argmax": r.argmax});
            if let Some(d) = &r.table_digest {
                v["table_sha256"] = json!(d);
            }
            json_text(&v)
        }
    };
    Ok(Rendered::ok(text))
}

fn scale_label(i: ScaleExponent) -> String {
    if i < 0 {
        format!("1/{}", 1u64 << (-i))
    } else {
        (BigInt::one() << i as usize).to_string()
    }
}

pub fn profile(a: u64, n: u64, format: Format) -> CliResult<Rendered> {
    let p = profile_pair(a, n)?;
    let report = check_arch_bound(&p);
    let pass = report.pass();
    let text = match format {
        Format::Text => {
            let mut s = format!("a={a} n={n} length={} buckets={}\n", p.total(), report.rows.len());
            let _ = writeln!(
                s,
                "{:>10} {:>12} {:>6} {:>16} {:>5}",
                "A_exponent", "A", "T", "bound", "pass"
            );
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{:>10} {:>12} {:>6} {:>16} {:>5}",
                    r.exponent,
                    scale_label(r.exponent),
                    r.count,
                    fmt_ratio(&r.bound),
                    r.pass
                );
            }
            let _ = writeln!(s, "archbound: {}", if pass { "pass" } else { "FAIL" });
            s
        }
        Format::Csv => {
            let mut s = String::from("n,A_exponent,T,bound,pass\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{n},{},{},{},{}",
                    r.exponent,
                    r.count,
                    fmt_ratio(&r.bound),
                    r.pass
                );
            }
            s
        }
        Format::Json => json_text(&json!({
            "a": a,
            "n": n,
            "length": p.total(),
            "buckets": report.rows.iter().map(|r| json!({
                "A_exponent": r.exponent,
                "A": scale_label(r.exponent),
                "T": r.count,
                "bound": fmt_ratio(&r.bound),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
            "pass": pass,
        })),
    };
    Ok(Rendered {
        text,
        code: if pass { 0 } else { 1 },
        note: None,
    })
}

fn render_point(p: &ExponentPoint, extra: Option<(&str, Value)>, format: Format) -> String {
    let overall = exponent_budget(&p.delta, &p.lambda).overall;
    match format {
        Format::Text => format!(
            "delta={} lambda={} gamma={}\n",
            fmt_ratio(&p.delta),
            fmt_ratio(&p.lambda),
            fmt_ratio(&p.gamma)
        ),
        Format::Csv => {
            let f: Vec<String> = p.forms.iter().map(fmt_ratio).collect();
            format!(
                "delta,lambda,form1,form2,form3,gamma,feasible,overall_exponent\n{},{},{},{},{},{}\n",
                fmt_ratio(&p.delta),
                fmt_ratio(&p.lambda),
                f.join(","),
                fmt_ratio(&p.gamma),
                p.feasible(),
                fmt_ratio(&overall)
            )
        }
        Format::Json => {
            let mut v = json!({
                "delta": fmt_ratio(&p.delta),
                "lambda": fmt_ratio(&p.lambda),
                "forms": p.forms.iter().map(fmt_ratio).collect::<Vec<_>>(),
                "gamma": fmt_ratio(&p.gamma),
                "feasible": p.feasible(),
                "overall_exponent": fmt_ratio(&overall),
            });
            if let Some((k, x)) = extra {
                v[k] = x;
            }
            json_text(&v)
        }
    }
}

pub fn gamma_at(delta: &BigRational, lambda: &BigRational, format: Format) -> CliResult<Rendered> {
    let p = gamma(delta, lambda);
    let note =
        (!p.feasible()).then(|| "note: point violates delta < 1/18 or lambda <= 1/3 - delta".to_string());
    Ok(Rendered {
        text: render_point(&p, None, format),
        code: 0,
        note,
    })
}

pub fn gamma_optimize(format: Format) -> CliResult<Rendered> {
    let opt = optimize_gamma();
    let note = opt
        .on_strict_boundary
        .then(|| "note: optimum lies on delta = 1/18, excluded by the strict hypothesis".to_string());
    let text = render_point(
        &opt.point,
        Some(("on_strict_boundary", json!(opt.on_strict_boundary))),
        format,
    );
    Ok(Rendered { text, code: 0, note })
}

fn witness_rows(r: &WitnessReport) -> Vec<Value> {
    r.per_k
        .iter()
        .map(|s| {
            json!({
                "k": s.k,
                "a_k": s.a_k,
                "b_lower": fmt_ratio(s.b_bracket.lo()),
                "b_upper": fmt_ratio(s.b_bracket.hi()),
                "bound_k_factorial": s.bound.to_string(),
                "pass": s.pass(),
            })
        })
        .collect()
}

pub fn witness_archimedean(n: u64, c: f64, format: Format) -> CliResult<Rendered> {
    let r = validate_witness(n, c)?;
    let text = match format {
        Format::Text => {
            let mut s = format!(
                "n={} start={} observed_length={} c={} predicted_floor={:.4} required_k={} validated_k={} max_valid_k={}\n",
                r.n, r.start, r.observed_length, r.c, r.predicted_floor, r.required_k, r.validated_k, r.max_valid_k
            );
            let _ = writeln!(
                s,
                "{:>4} {:>20} {:>9} {:>26} {:>22} {:>5}",
                "k", "a_k", "quotient", "b_k (approx)", "k!", "pass"
            );
            for st in &r.per_k {
                let _ = writeln!(
                    s,
                    "{:>4} {:>20} {:>9} {:>26.6} {:>22} {:>5}",
                    st.k,
                    st.a_k,
                    st.quotient,
                    st.b_bracket.midpoint_f64(),
                    st.bound,
                    st.pass()
                );
            }
            let _ = writeln!(
                s,
                "witness: {}",
                if r.complete() { "complete" } else { "INCOMPLETE" }
            );
            s
        }
        Format::Csv => {
            let mut s = String::from("k,a_k,b_lower,b_upper,bound_k_factorial,pass\n");
            for st in &r.per_k {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    st.k,
                    st.a_k,
                    fmt_ratio(st.b_bracket.lo()),
                    fmt_ratio(st.b_bracket.hi()),
                    st.bound,
                    st.pass()
                );
            }
            s
        }
        Format::Json => json_text(&json!({
            "n": r.n,
            "start": r.start,
            "observed_length": r.observed_length,
            "validated_k": r.validated_k,
            "predicted_floor": r.predicted_floor,
            "c": r.c,
            "per_k": witness_rows(&r),
        })),
    };
    let note = (!r.complete()).then(|| {
        format!(
            "finding: steps verified only up to k = {} < {}; largest valid c = {:.4}",
            r.max_valid_k,
            r.required_k,
            r.max_valid_c()
        )
    });
    Ok(Rendered {
        text,
        code: if r.complete() { 0 } else { 1 },
        note,
    })
}

pub fn witness_arithmetic(m: u64, format: Format) -> CliResult<Rendered> {
    let w = arithmetic_witness(m).map_err(|e| match e {
        pierce_core::Error::Overflow(msg) => CliError::Usage(msg),
        other => other.into(),
    })?;
    let length = w.orbit.len() - 1;
    let text = match format {
        Format::Text => format!(
            "m={} n={} start={} length={length}\norbit: {}\n",
            w.m,
            w.n,
            w.start,
            joined(&w.orbit)
        ),
        Format::Csv => format!("m,n,start,length\n{},{},{},{length}\n", w.m, w.n, w.start),
        Format::Json => {
            json_text(&json!({"m": w.m, "n": w.n, "start": w.start, "length": length, "orbit": w.orbit}))
        }
    };
    Ok(Rendered::ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_worked_example() {
        let r = expand(13, 35, Format::Text).unwrap();
        assert_eq!(
            r.text,
            "a=13 n=35 P=6\nterms: 13 9 8 3 2 1 0\nquotients: 2 3 4 11 17 35\ndigits: 2 3 4 11 17 35\nreconstruction: 13/35\n"
        );
        assert!(expand(35, 35, Format::Text).unwrap().text.contains("digits: 1\n"));
        assert!(expand(22, 35, Format::Text)
            .unwrap()
            .text
            .starts_with("a=22 n=35 P=7\n"));
        assert!(matches!(expand(36, 35, Format::Text), Err(CliError::Usage(_))));
    }

    #[test]
    fn gamma_outputs() {
        assert_eq!(
            gamma_optimize(Format::Text).unwrap().text,
            "delta=2/177 lambda=2/59 gamma=2/177\n"
        );
        let csv = gamma_at(
            &BigRational::new(2.into(), 177.into()),
            &BigRational::new(6.into(), 177.into()),
            Format::Csv,
        )
        .unwrap()
        .text;
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "2/177,2/59,2/177,2/177,2/177,2/177,true,19/59"
        );
        let json: Value = serde_json::from_str(&gamma_optimize(Format::Json).unwrap().text).unwrap();
        assert_eq!(json["overall_exponent"], "19/59");
    }

    #[test]
    fn profile_has_five_buckets() {
        let r = profile(13, 35, Format::Csv).unwrap();
        assert_eq!(r.text.lines().count(), 6);
        assert_eq!(r.code, 0);
    }

    #[test]
    fn arithmetic_witness_output() {
        assert_eq!(
            witness_arithmetic(10, Format::Csv).unwrap().text,
            "m,n,start,length\n10,2519,10,10\n"
        );
    }
}
