//! JSON forms of matrices, generator pairs, automorphism witnesses and
//! certificates. Every binary64 is written as a decimal with 17 significant
//! digits so it reads back bit-exactly.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::certify::Certificate;
use crate::error::{Error, Result};
use crate::frames::CirculantPair;
use crate::harmonic::AutomorphismWitness;
use crate::linalg::{ComplexMatrix, Role, C64};

fn bad(msg: impl Into<String>) -> Error {
    Error::UnsupportedInput(msg.into())
}

/// A finite binary64 as a 17-significant-digit JSON number.
pub fn num(x: f64) -> Result<Value> {
    if !x.is_finite() {
        return Err(bad(format!("cannot serialize non-finite value {x}")));
    }
    let n = Number::from_str(&format!("{x:.16e}")).map_err(|e| bad(e.to_string()))?;
    Ok(Value::Number(n))
}

fn nums(xs: impl IntoIterator<Item = f64>) -> Result<Value> {
    Ok(Value::Array(xs.into_iter().map(num).collect::<Result<Vec<_>>>()?))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn get_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{what} is not a number")))
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("\"{key}\" is not a count")))
}

fn get_vec(v: &Value, key: &str) -> Result<Vec<f64>> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("\"{key}\" is not an array")))?
        .iter()
        .map(|x| get_f64(x, key))
        .collect()
}

fn get_kind<'a>(v: &'a Value) -> Result<&'a str> {
    get(v, "kind")?.as_str().ok_or_else(|| bad("\"kind\" is not a string"))
}

pub fn matrix_to_json(a: &ComplexMatrix) -> Result<Value> {
    let rows = |f: fn(&C64) -> f64| -> Result<Value> {
        Ok(Value::Array((0..a.rows()).map(|i| nums(a.row(i).iter().map(f))).collect::<Result<Vec<_>>>()?))
    };
    Ok(json!({
        "kind": a.role().as_str(),
        "rows": a.rows(),
        "cols": a.cols(),
        "re": rows(|z| z.re)?,
        "im": rows(|z| z.im)?,
    }))
}

pub fn matrix_from_json(v: &Value) -> Result<ComplexMatrix> {
    let role = Role::parse(get_kind(v)?).ok_or_else(|| bad("unknown matrix kind"))?;
    let (r, c) = (get_usize(v, "rows")?, get_usize(v, "cols")?);
    let grid = |key: &str| -> Result<Vec<f64>> {
        let rows = get(v, key)?.as_array().ok_or_else(|| bad(format!("\"{key}\" is not an array")))?;
        if rows.len() != r {
            return Err(bad(format!("\"{key}\" has {} rows, expected {r}", rows.len())));
        }
        let mut out = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad(format!("row of \"{key}\" is not an array")))?;
            if row.len() != c {
                return Err(bad(format!("row of \"{key}\" has {} entries, expected {c}", row.len())));
            }
            for x in row {
                out.push(get_f64(x, key)?);
            }
        }
        Ok(out)
    };
    let (re, im) = (grid("re")?, grid("im")?);
    let data = re.into_iter().zip(im).map(|(a, b)| C64::new(a, b)).collect();
    Ok(ComplexMatrix::from_vec(r, c, data)?.with_role(role))
}

pub fn pair_to_json(p: &CirculantPair) -> Result<Value> {
    Ok(json!({
        "kind": "circulant-generators",
        "d": p.d(),
        "t": 2,
        "x_re": nums(p.x.iter().map(|z| z.re))?,
        "x_im": nums(p.x.iter().map(|z| z.im))?,
        "y_re": nums(p.y.iter().map(|z| z.re))?,
        "y_im": nums(p.y.iter().map(|z| z.im))?,
    }))
}

pub fn pair_from_json(v: &Value) -> Result<CirculantPair> {
    if get_kind(v)? != "circulant-generators" {
        return Err(bad("expected kind \"circulant-generators\""));
    }
    let d = get_usize(v, "d")?;
    let cx = |re: &str, im: &str| -> Result<Vec<C64>> {
        let (a, b) = (get_vec(v, re)?, get_vec(v, im)?);
        if a.len() != d || b.len() != d {
            return Err(bad(format!("generator length differs from d = {d}")));
        }
        Ok(a.into_iter().zip(b).map(|(r, i)| C64::new(r, i)).collect())
    };
    CirculantPair::new(cx("x_re", "x_im")?, cx("y_re", "y_im")?)
}

pub fn witness_to_json(w: &AutomorphismWitness, m: usize, t: usize) -> Result<Value> {
    Ok(json!({
        "sigma": w.sigma,
        "c_re": nums(w.c.iter().map(|z| z.re))?,
        "c_im": nums(w.c.iter().map(|z| z.im))?,
        "m": m,
        "t": t,
    }))
}

/// Witness plus its `(m, t)`.
pub fn witness_from_json(v: &Value) -> Result<(AutomorphismWitness, usize, usize)> {
    let sigma = get(v, "sigma")?
        .as_array()
        .ok_or_else(|| bad("\"sigma\" is not an array"))?
        .iter()
        .map(|x| x.as_u64().map(|i| i as usize).ok_or_else(|| bad("sigma entry is not an index")))
        .collect::<Result<Vec<_>>>()?;
    let (re, im) = (get_vec(v, "c_re")?, get_vec(v, "c_im")?);
    if re.len() != im.len() {
        return Err(bad("c_re and c_im differ in length"));
    }
    let c = re.into_iter().zip(im).map(|(a, b)| C64::new(a, b)).collect();
    let w = AutomorphismWitness::new(sigma, c)?;
    Ok((w, get_usize(v, "m")?, get_usize(v, "t")?))
}

/// SHA-256 of the little-endian bytes of a real vector.
pub fn digest_f64(v: &[f64]) -> String {
    let mut h = Sha256::new();
    for x in v {
        h.update(x.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn digest_bytes(b: &[u8]) -> String {
    hex::encode(Sha256::digest(b))
}

fn bound(x: f64, direction: &str) -> Result<Value> {
    Ok(json!({ "value": num(x)?, "direction": direction }))
}

pub fn certificate_to_json(c: &Certificate) -> Result<Value> {
    Ok(json!({
        "kind": "certificate",
        "version": crate::VERSION,
        "d": c.d,
        "x0": nums(c.x0.iter().copied())?,
        "x0_sha256": digest_f64(&c.x0),
        "delta": num(c.delta)?,
        "epsilon": num(c.epsilon)?,
        "bound_st_minus_i": bound(c.bound_st_minus_i, "upper")?,
        "bound_t_norm": bound(c.bound_t_norm, "upper")?,
        "bound_f_x0": bound(c.bound_f_x0, "upper")?,
        "f_abs_bound": bound(c.f_abs_bound, "upper")?,
        "lhs_upper": bound(c.lhs_upper, "upper")?,
        "rhs_lower": bound(c.rhs_lower, "lower")?,
        "verified": c.verified,
        "kernel_dim": c.kernel_dim,
    }))
}

pub fn certificate_from_json(v: &Value) -> Result<Certificate> {
    if get_kind(v)? != "certificate" {
        return Err(bad("expected kind \"certificate\""));
    }
    let x0 = get_vec(v, "x0")?;
    if let Some(digest) = v.get("x0_sha256").and_then(Value::as_str) {
        if digest != digest_f64(&x0) {
            return Err(bad("x0 digest mismatch"));
        }
    }
    let bnd = |key: &str| -> Result<f64> { get_f64(get(get(v, key)?, "value")?, key) };
    Ok(Certificate {
        d: get_usize(v, "d")?,
        x0,
        delta: get_f64(get(v, "delta")?, "delta")?,
        epsilon: get_f64(get(v, "epsilon")?, "epsilon")?,
        bound_st_minus_i: bnd("bound_st_minus_i")?,
        bound_t_norm: bnd("bound_t_norm")?,
        bound_f_x0: bnd("bound_f_x0")?,
        f_abs_bound: bnd("f_abs_bound")?,
        lhs_upper: bnd("lhs_upper")?,
        rhs_lower: bnd("rhs_lower")?,
        verified: get(v, "verified")?.as_bool().ok_or_else(|| bad("\"verified\" is not a bool"))?,
        kernel_dim: get_usize(v, "kernel_dim")?,
    })
}

/// Provenance of one command invocation. The digest covers everything but
/// the wall time so repeated runs agree.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub input_digests: Vec<String>,
    pub output_digests: Vec<String>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, seeds: Vec<u64>) -> Self {
        RunManifest {
            command_line,
            seeds,
            version: crate::VERSION.to_string(),
            input_digests: Vec::new(),
            output_digests: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    fn stable_json(&self) -> Value {
        json!({
            "command_line": self.command_line,
            "seeds": self.seeds,
            "version": self.version,
            "input_digests": self.input_digests,
        })
    }

    /// Digest of the reproducible part; outputs embed it, so it cannot
    /// depend on them.
    pub fn digest(&self) -> String {
        digest_bytes(self.stable_json().to_string().as_bytes())
    }

    pub fn to_json(&self) -> Value {
        let mut m = match self.stable_json() {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        m.insert("kind".into(), json!("run-manifest"));
        m.insert("digest".into(), json!(self.digest()));
        m.insert("output_digests".into(), json!(self.output_digests));
        m.insert("wall_time_s".into(), num(self.wall_time_s).unwrap_or(Value::Null));
        Value::Object(m)
    }
}

/// Adds `"manifest": digest` to an object.
pub fn stamp(mut v: Value, manifest: &RunManifest) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("manifest".into(), json!(manifest.digest()));
    }
    v
}

pub fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-prints to the path and returns the SHA-256 of the written bytes.
pub fn write_json(path: &std::path::Path, v: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, &text)?;
    Ok(digest_bytes(text.as_bytes()))
}
