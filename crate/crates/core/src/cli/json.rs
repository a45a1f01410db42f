//! Self-describing JSON documents. Every document carries the schema
//! version and the precision profile; integers are decimal strings.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::bdr::{BdrElement, BdrRing, PrecisionProfile};
use crate::coeffs::{Elem, Matrix, RingCtx};
use crate::error::{Error, Result};
use crate::rh::{Cocycle, TConnection, ToricMatrix, TwistTag};
use crate::toric::ToricElement;

pub const SCHEMA_VERSION: u64 = 1;

/// A parsed payload.
#[derive(Debug, Clone)]
pub enum Payload {
    Bdr(BdrElement),
    Toric(ToricElement),
    BdrMatrix(Matrix<BdrElement>),
    ToricMatrix(ToricMatrix),
    Cocycle(Cocycle),
    Connection(TConnection),
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn dec(x: i64) -> Value {
    Value::String(x.to_string())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    let f = get(v, key)?;
    match f {
        Value::String(s) => s.parse().map_err(|_| bad(format!("`{key}` is not a decimal integer"))),
        Value::Number(n) => n.as_i64().ok_or_else(|| bad(format!("`{key}` is not an integer"))),
        _ => Err(bad(format!("`{key}` is not an integer"))),
    }
}

fn get_arr<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    get(v, key)?.as_array().ok_or_else(|| bad(format!("`{key}` is not an array")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| bad(format!("`{key}` is not a string")))
}

pub fn profile_to_json(p: &PrecisionProfile) -> Value {
    json!({ "p": p.p, "k": p.k, "N": p.n, "alpha": p.alpha, "s": p.s, "n_max": p.n_max })
}

pub fn profile_from_json(v: &Value) -> Result<PrecisionProfile> {
    let u = |key: &str| get_i64(v, key).and_then(|x| u64::try_from(x).map_err(|_| bad(format!("`{key}` is negative"))));
    let prof = PrecisionProfile {
        p: u("p")?,
        k: u("k")? as u32,
        n: u("N")? as u32,
        alpha: u("alpha")? as u32,
        s: u("s")? as usize,
        n_max: u("n_max")? as u32,
    };
    prof.validate()?;
    Ok(prof)
}

pub fn elem_to_json(x: &Elem) -> Value {
    let (val, num) = x.digits();
    if x.is_zero() {
        return json!({ "abs": dec(x.abs_prec()) });
    }
    json!({
        "scale_exp": dec(val),
        "abs": dec(x.abs_prec()),
        "coeffs": num.iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>(),
    })
}

pub fn elem_from_json(ring: &Arc<RingCtx>, v: &Value) -> Result<Elem> {
    let abs = get_i64(v, "abs")?;
    if v.get("coeffs").is_none() {
        return Ok(Elem::zero_prec(ring, abs));
    }
    let val = get_i64(v, "scale_exp")?;
    let num = get_arr(v, "coeffs")?
        .iter()
        .map(|c| c.as_str().and_then(|s| s.parse::<u64>().ok()).ok_or_else(|| bad("coefficient is not a decimal string")))
        .collect::<Result<Vec<_>>>()?;
    if num.len() != ring.rank() {
        return Err(bad(format!("expected {} coefficients, found {}", ring.rank(), num.len())));
    }
    Ok(Elem::from_parts(ring, val, abs, num))
}

pub fn bdr_to_json(x: &BdrElement) -> Value {
    json!({ "digits": x.digits().iter().map(elem_to_json).collect::<Vec<_>>() })
}

pub fn bdr_from_json(ring: &BdrRing, v: &Value) -> Result<BdrElement> {
    let digits = get_arr(v, "digits")?;
    if digits.len() != ring.alpha() as usize {
        return Err(bad(format!("expected {} t-digits, found {}", ring.alpha(), digits.len())));
    }
    Ok(BdrElement::from_digits(digits.iter().map(|d| elem_from_json(ring.cyclo(), d)).collect::<Result<_>>()?))
}

pub fn toric_to_json(x: &ToricElement) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(e, c)| json!({ "exp": e.iter().map(|&a| dec(a)).collect::<Vec<_>>(), "coeff": bdr_to_json(c) }))
        .collect();
    json!({ "d": x.dim(), "level": x.level(), "terms": terms })
}

pub fn toric_from_json(ring: &Arc<BdrRing>, v: &Value) -> Result<ToricElement> {
    let d = get_i64(v, "d")? as usize;
    let level = get_i64(v, "level")? as u32;
    if level > ring.profile().k {
        return Err(Error::LevelExceedsK { level, k: ring.profile().k });
    }
    let mut out = ToricElement::zero(ring, d);
    for term in get_arr(v, "terms")? {
        let exp = get_arr(term, "exp")?
            .iter()
            .map(|a| a.as_str().and_then(|s| s.parse::<i64>().ok()).ok_or_else(|| bad("exponent is not a decimal string")))
            .collect::<Result<Vec<_>>>()?;
        if exp.len() != d {
            return Err(bad("exponent length differs from d"));
        }
        let c = bdr_from_json(ring, get(term, "coeff")?)?;
        out = out.add(&ToricElement::monomial(ring, d, level, exp, c));
    }
    Ok(out)
}

fn matrix_to_json<T: Clone>(m: &Matrix<T>, entry: &str, f: impl Fn(&T) -> Value) -> Value {
    json!({
        "entry": entry,
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(f).collect::<Vec<_>>(),
    })
}

fn matrix_from_json<T: Clone>(v: &Value, entry: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Matrix<T>> {
    if get_str(v, "entry")? != entry {
        return Err(bad(format!("expected a matrix of {entry} entries")));
    }
    let (r, c) = (get_i64(v, "rows")? as usize, get_i64(v, "cols")? as usize);
    let entries = get_arr(v, "entries")?;
    if entries.len() != r * c || r == 0 || c == 0 {
        return Err(bad("matrix dimensions do not match its entries"));
    }
    let parsed = entries.iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_fn(r, c, |i, j| parsed[i * c + j].clone()))
}

fn toric_matrix_json(m: &ToricMatrix) -> Value {
    matrix_to_json(m, "toric", toric_to_json)
}

fn toric_matrix_parse(ring: &Arc<BdrRing>, v: &Value) -> Result<ToricMatrix> {
    matrix_from_json(v, "toric", |e| toric_from_json(ring, e))
}

pub fn payload_to_json(p: &Payload) -> Value {
    let mut obj = match p {
        Payload::Bdr(x) => bdr_to_json(x),
        Payload::Toric(x) => toric_to_json(x),
        Payload::BdrMatrix(m) => matrix_to_json(m, "bdr", bdr_to_json),
        Payload::ToricMatrix(m) => toric_matrix_json(m),
        Payload::Cocycle(c) => json!({
            "d": c.dim(),
            "rank": c.rank(),
            "scale": dec(c.scale()),
            "twist": c.twist().name(),
            "mats": c.mats().iter().map(toric_matrix_json).collect::<Vec<_>>(),
        }),
        Payload::Connection(c) => json!({
            "d": c.dim(),
            "rank": c.rank(),
            "mats": c.mats().iter().map(toric_matrix_json).collect::<Vec<_>>(),
        }),
    };
    let tag = match p {
        Payload::Bdr(_) => "bdr",
        Payload::Toric(_) => "toric",
        Payload::BdrMatrix(_) | Payload::ToricMatrix(_) => "matrix",
        Payload::Cocycle(_) => "cocycle",
        Payload::Connection(_) => "connection",
    };
    obj.as_object_mut().unwrap().insert("type".into(), Value::String(tag.into()));
    obj
}

pub fn payload_from_json(ring: &Arc<BdrRing>, v: &Value) -> Result<Payload> {
    let mats = |v: &Value| -> Result<Vec<ToricMatrix>> { get_arr(v, "mats")?.iter().map(|m| toric_matrix_parse(ring, m)).collect() };
    Ok(match get_str(v, "type")? {
        "bdr" => Payload::Bdr(bdr_from_json(ring, v)?),
        "toric" => Payload::Toric(toric_from_json(ring, v)?),
        "matrix" => match get_str(v, "entry")? {
            "bdr" => Payload::BdrMatrix(matrix_from_json(v, "bdr", |e| bdr_from_json(ring, e))?),
            "toric" => Payload::ToricMatrix(toric_matrix_parse(ring, v)?),
            other => return Err(bad(format!("unknown matrix entry type `{other}`"))),
        },
        "cocycle" => {
            let twist: TwistTag = get_str(v, "twist")?.parse()?;
            Payload::Cocycle(Cocycle::with_scale(ring, get_i64(v, "scale")?, twist, mats(v)?)?)
        }
        "connection" => Payload::Connection(TConnection::new(ring, mats(v)?)?),
        other => return Err(bad(format!("unknown payload type `{other}`"))),
    })
}

/// A full document: version, profile and payload.
pub fn document(profile: &PrecisionProfile, payload: &Payload) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("profile".into(), profile_to_json(profile));
    m.insert("payload".into(), payload_to_json(payload));
    Value::Object(m)
}

/// Parse a document, building the ring of its profile.
pub fn parse_document(v: &Value) -> Result<(Arc<BdrRing>, Payload)> {
    let version = get(v, "schema_version")?.as_u64().ok_or_else(|| bad("`schema_version` is not an integer"))?;
    if version != SCHEMA_VERSION {
        return Err(bad(format!("unsupported schema_version {version}")));
    }
    let ring = BdrRing::new(profile_from_json(get(v, "profile")?)?)?;
    let payload = payload_from_json(&ring, get(v, "payload")?)?;
    Ok((ring, payload))
}

pub fn to_string(profile: &PrecisionProfile, payload: &Payload) -> String {
    serde_json::to_string_pretty(&document(profile, payload)).expect("JSON values always serialize")
}

pub fn from_str(s: &str) -> Result<(Arc<BdrRing>, Payload)> {
    let v: Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
    parse_document(&v)
}
