//! JSON interchange. Integers are written as decimal strings; on input both
//! strings and plain JSON integers are accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::engine::{ExpansionEvent, PartialQuotients};
use crate::error::{McfError, Result};
use crate::exact::{NumberField, RationalInterval, RealValue};
use crate::periodic::{CubicCertificate, PeriodicSpec};
use crate::transcendence::{EntryRule, QuasiPeriodicSpec, ScheduleEntry};

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_bigint_matrix<S: Serializer>(x: &[[BigInt; 3]; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for row in x {
        seq.serialize_element(&row.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    }
    seq.end()
}

pub fn int_value(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn ints_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

pub fn rational_str(q: &BigRational) -> String {
    q.to_string()
}

pub fn interval_value(iv: &RationalInterval) -> Value {
    json!({ "lo": rational_str(iv.lo()), "hi": rational_str(iv.hi()) })
}

pub fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| McfError::input(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integral number")),
        _ => Err(McfError::input(format!("expected an integer, found {v}"))),
    }
}

pub fn parse_bigints(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| McfError::input(format!("expected an array of integers, found {v}")))?
        .iter()
        .map(parse_bigint)
        .collect()
}

/// `"p/q"`, `"p"` or a JSON integer.
pub fn parse_rational(v: &Value) -> Result<BigRational> {
    let s = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(_) => return parse_bigint(v).map(BigRational::from_integer),
        _ => return Err(McfError::input(format!("expected a rational, found {v}"))),
    };
    parse_rational_str(&s)
}

pub fn parse_rational_str(s: &str) -> Result<BigRational> {
    let bad = || McfError::input(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(McfError::input("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| McfError::input(format!("missing field `{key}`")))
}

pub fn real_from_json(v: &Value) -> Result<RealValue> {
    let obj = v.as_object().ok_or_else(|| McfError::input("a real value must be a JSON object"))?;
    let kind = field(obj, "kind")?.as_str().ok_or_else(|| McfError::input("`kind` must be a string"))?;
    match kind {
        "rational" => {
            let num = parse_bigint(field(obj, "num")?)?;
            let den = match obj.get("den") {
                Some(d) => parse_bigint(d)?,
                None => BigInt::from(1),
            };
            if den.is_zero() {
                return Err(McfError::input("zero denominator"));
            }
            Ok(RealValue::Rational(BigRational::new(num, den)))
        }
        "algebraic" => {
            let minpoly = parse_bigints(field(obj, "minpoly")?)?;
            let lo = parse_rational(field(obj, "lo")?)?;
            let hi = parse_rational(field(obj, "hi")?)?;
            let k = NumberField::new(minpoly, RationalInterval::new(lo, hi)?)?;
            let coords = match obj.get("coords") {
                Some(c) => c
                    .as_array()
                    .ok_or_else(|| McfError::input("`coords` must be an array"))?
                    .iter()
                    .map(parse_rational)
                    .collect::<Result<Vec<_>>>()?,
                None => vec![BigRational::zero(), BigRational::from_integer(1.into())],
            };
            Ok(k.element(coords)?.into())
        }
        "decimal" => {
            let d = field(obj, "digits")?.as_str().ok_or_else(|| McfError::input("`digits` must be a string"))?;
            RealValue::decimal(d)
        }
        other => Err(McfError::input(format!("unknown real kind `{other}`"))),
    }
}

/// Inputs file: either an array of real values or `{"inputs": [...]}`.
pub fn inputs_from_json(v: &Value) -> Result<Vec<RealValue>> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(o) => field(o, "inputs")?.as_array().ok_or_else(|| McfError::input("`inputs` must be an array"))?,
        _ => return Err(McfError::input("expected an array of real values")),
    };
    if arr.is_empty() {
        return Err(McfError::input("at least one input is needed"));
    }
    arr.iter().map(real_from_json).collect()
}

pub fn real_to_json(x: &RealValue) -> Value {
    match x {
        RealValue::Rational(q) => json!({ "kind": "rational", "num": int_value(q.numer()), "den": int_value(q.denom()) }),
        RealValue::Algebraic(e) => {
            let iv = e.field().root_interval();
            json!({
                "kind": "algebraic",
                "minpoly": ints_value(e.field().min_poly()),
                "lo": rational_str(iv.lo()),
                "hi": rational_str(iv.hi()),
                "coords": e.coords().iter().map(|c| Value::String(rational_str(c))).collect::<Vec<_>>(),
            })
        }
        RealValue::Oracle(o) => {
            let iv = o.current();
            json!({ "kind": "enclosure", "lo": rational_str(iv.lo()), "hi": rational_str(iv.hi()) })
        }
    }
}

/// `{"seqs": [[…], …]}`, `[[…], …]`, or `{"a": […], "b": […]}` for `m = 2`.
pub fn pq_from_json(v: &Value) -> Result<PartialQuotients> {
    let seqs = match v {
        Value::Array(a) => a.iter().map(parse_bigints).collect::<Result<Vec<_>>>()?,
        Value::Object(o) => {
            if let Some(s) = o.get("seqs") {
                s.as_array()
                    .ok_or_else(|| McfError::input("`seqs` must be an array"))?
                    .iter()
                    .map(parse_bigints)
                    .collect::<Result<Vec<_>>>()?
            } else {
                vec![parse_bigints(field(o, "a")?)?, parse_bigints(field(o, "b")?)?]
            }
        }
        _ => return Err(McfError::input("expected partial quotients")),
    };
    if let (Some(Value::Object(o)), Some(m)) = (Some(v), v.get("m").and_then(Value::as_u64)) {
        let _ = o;
        if m as usize != seqs.len() {
            return Err(McfError::input(format!("`m` is {m} but {} sequences were given", seqs.len())));
        }
    }
    PartialQuotients::new(seqs)
}

pub fn pq_to_json(pq: &PartialQuotients) -> Value {
    json!({ "m": pq.m(), "seqs": pq.seqs().iter().map(|s| ints_value(s)).collect::<Vec<_>>() })
}

pub fn event_to_json(e: &ExpansionEvent) -> Value {
    match e {
        ExpansionEvent::Step { n, a, width } => {
            let mut o = json!({ "n": n, "a": ints_value(a), "event": "step" });
            if let Some(w) = width {
                o["width"] = Value::String(rational_str(w));
            }
            o
        }
        ExpansionEvent::Interruption { n, value, dim_after } => {
            json!({ "n": n, "event": "interruption", "value": int_value(value), "dim_after": dim_after })
        }
    }
}

pub fn spec_to_json(s: &PeriodicSpec) -> Value {
    json!({
        "pre_a": ints_value(&s.pre_a),
        "pre_b": ints_value(&s.pre_b),
        "per_a": ints_value(&s.per_a),
        "per_b": ints_value(&s.per_b),
    })
}

pub fn certificate_to_json(c: &CubicCertificate) -> Value {
    let quartet = |q: &[BigInt; 4]| ints_value(q);
    let poly = |q: &[BigInt; 4]| Value::String(poly_string(q));
    json!({
        "spec": spec_to_json(&c.spec),
        "x_matrix": serde_json::to_value(&c.x).expect("serializable"),
        "poly_alpha": quartet(&c.poly_alpha),
        "poly_beta": quartet(&c.poly_beta),
        "poly_alpha_text": poly(&c.poly_alpha),
        "poly_beta_text": poly(&c.poly_beta),
        "height_alpha": int_value(&c.height_alpha),
        "height_beta": int_value(&c.height_beta),
        "c_last": int_value(&c.c_last),
        "bound": c.bound.as_ref().map(int_value),
        "bound_holds": c.bound_holds(),
        "alpha": real_to_json(&RealValue::Algebraic(c.alpha.clone())),
        "beta": real_to_json(&RealValue::Algebraic(c.beta.clone())),
        "alpha_interval": interval_value(&c.alpha_interval),
        "beta_interval": interval_value(&c.beta_interval),
        "matched_quotients": c.matched,
        "residual_ok": c.residual_ok,
    })
}

/// `x^3 - 2x^2 - x - 1` from `(A, B, C, D)`.
pub fn poly_string(q: &[BigInt; 4]) -> String {
    let mut out = String::new();
    for (i, c) in q.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let deg = 3 - i;
        let neg = c < &BigInt::zero();
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let one = mag == BigInt::from(1);
        match deg {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !one {
                    out.push_str(&mag.to_string());
                }
                out.push('x');
                if deg > 1 {
                    out.push_str(&format!("^{deg}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `[{"n": 1, "r": 2, "lambda": "3"}, …]`, optionally under `"schedule"`.
pub fn schedule_from_json(v: &Value) -> Result<Vec<ScheduleEntry>> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(o) => field(o, "schedule")?.as_array().ok_or_else(|| McfError::input("`schedule` must be an array"))?,
        _ => return Err(McfError::input("expected a schedule array")),
    };
    arr.iter()
        .map(|e| {
            let o = e.as_object().ok_or_else(|| McfError::input("schedule entries must be objects"))?;
            let small = |k: &str| -> Result<usize> {
                parse_bigint(field(o, k)?)?
                    .try_into()
                    .map_err(|_| McfError::input(format!("`{k}` out of range")))
            };
            Ok(ScheduleEntry { n: small("n")?, r: small("r")?, lambda: parse_bigint(field(o, "lambda")?)? })
        })
        .collect()
}

pub fn schedule_to_json(s: &[ScheduleEntry]) -> Value {
    Value::Array(s.iter().map(|e| json!({ "n": e.n, "r": e.r, "lambda": int_value(&e.lambda) })).collect())
}

/// `{"rules": ["const:2", "const:1"]}` or a bare array of rule strings.
pub fn base_from_json(v: &Value) -> Result<Vec<EntryRule>> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(o) => field(o, "rules")?.as_array().ok_or_else(|| McfError::input("`rules` must be an array"))?,
        _ => return Err(McfError::input("expected base rules")),
    };
    arr.iter()
        .map(|r| r.as_str().ok_or_else(|| McfError::input("rules are strings like const:1"))?.parse())
        .collect()
}

pub fn quasi_spec_from_json(schedule: &Value, base: &Value) -> Result<QuasiPeriodicSpec> {
    let base = base_from_json(base)?;
    Ok(QuasiPeriodicSpec { m: base.len(), schedule: schedule_from_json(schedule)?, base })
}
