//! JSON and LaTeX forms of Laurent polynomials and partitions.

use std::collections::BTreeMap;

use octarec_core::laurent::{LaurentPoly, Monomial, VarTable};
use octarec_core::num_bigint::BigInt;
use octarec_core::{AlgebraError, Partition};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "octarec/1";

#[derive(Debug)]
pub enum FormatError {
    Algebra(AlgebraError),
    Shape(&'static str),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Algebra(e) => e.fmt(f),
            FormatError::Shape(what) => write!(f, "malformed JSON: {}", what),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<AlgebraError> for FormatError {
    fn from(e: AlgebraError) -> Self {
        FormatError::Algebra(e)
    }
}

/// `{"terms":[{"coeff":"<decimal>","exps":{"<name>":<int>}}]}`
pub fn poly_to_json(p: &LaurentPoly, table: &VarTable) -> Result<Value, FormatError> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut exps = Map::new();
        for &(v, e) in m.exponents() {
            let name = table.name(v).ok_or(AlgebraError::UnknownVar(v))?;
            exps.insert(name.to_string(), json!(e));
        }
        terms.push(json!({"coeff": c.to_string(), "exps": exps}));
    }
    Ok(json!({ "terms": terms }))
}

pub fn poly_from_json(v: &Value, table: &mut VarTable) -> Result<LaurentPoly, FormatError> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or(FormatError::Shape("missing terms"))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let coeff: BigInt = t
            .get("coeff")
            .and_then(Value::as_str)
            .and_then(|s| s.parse().ok())
            .ok_or(FormatError::Shape("bad coeff"))?;
        let exps = t
            .get("exps")
            .and_then(Value::as_object)
            .ok_or(FormatError::Shape("bad exps"))?;
        let mut m = Vec::with_capacity(exps.len());
        for (name, e) in exps {
            let e = e
                .as_i64()
                .and_then(|e| i32::try_from(e).ok())
                .ok_or(FormatError::Shape("bad exponent"))?;
            m.push((table.intern(name), e));
        }
        out.push((Monomial::from_exponents(m), coeff));
    }
    Ok(LaurentPoly::from_terms(out))
}

pub fn partition_to_json(p: &Partition) -> Value {
    json!(p.parts())
}

pub fn partition_from_json(v: &Value) -> Result<Partition, FormatError> {
    let parts = v
        .as_array()
        .ok_or(FormatError::Shape("partition must be an array"))?
        .iter()
        .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()))
        .collect::<Option<Vec<u32>>>()
        .ok_or(FormatError::Shape("parts must be integers"))?;
    Partition::new(parts).map_err(|_| FormatError::Shape("not a partition"))
}

/// `theta[1,2]` → `\theta_{1,2}`, `aux[3]` → `\mathrm{aux}_{3}`.
pub fn latex_name(name: &str) -> String {
    let (base, idx) = match name.find('[') {
        Some(i) => (&name[..i], name[i + 1..].trim_end_matches(']')),
        None => return name.to_string(),
    };
    let base = match base {
        "theta" => "\\theta".to_string(),
        "x" | "t" => base.to_string(),
        other => format!("\\mathrm{{{}}}", other),
    };
    format!("{}_{{{}}}", base, idx)
}

/// Fraction-free Laurent form with explicit negative powers.
pub fn poly_to_latex(p: &LaurentPoly, table: &VarTable) -> Result<String, FormatError> {
    if p.is_zero() {
        return Ok("0".to_string());
    }
    let mut s = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        let neg = c.sign() == octarec_core::num_bigint::Sign::Minus;
        if idx == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.magnitude().to_string();
        let mut parts = Vec::new();
        if mag != "1" || m.is_one() {
            parts.push(mag);
        }
        for &(v, e) in m.exponents() {
            let name = latex_name(table.name(v).ok_or(AlgebraError::UnknownVar(v))?);
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{}^{{{}}}", name, e));
            }
        }
        s.push_str(&parts.join(" "));
    }
    Ok(s)
}

pub fn table_to_json(table: &VarTable) -> Value {
    Value::Array(table.iter().map(|(_, n)| json!(n)).collect())
}

/// Canonical re-serialization used for byte-identical comparisons.
pub fn canonical(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let sorted: BTreeMap<&String, Value> =
                    m.iter().map(|(k, x)| (k, sort(x))).collect();
                let mut out = Map::new();
                for (k, x) in sorted {
                    out.insert(k.clone(), x);
                }
                Value::Object(out)
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string_pretty(&sort(v)).unwrap_or_default()
}
