//! Surface, holonomy, period, framing, and path documents.
//!
//! The surface format is a single JSON document with fields `polygons`
//! (arrays of `[num, den]` rational coordinate pairs), `pairings`
//! (`[[p, e], [q, f]]`), and `options`. Canonical serialization keeps keys
//! in that order and writes rationals reduced with positive denominator, so
//! reports and digests are byte-reproducible.

use super::{EdgeRef, Mode, SpecOptions, SurfaceSpec};
use crate::framing::{CurvePath, Framing, PathSegment};
use crate::holonomy::{CharVal, HolonomyData, Order, Period, PeriodVector};
use crate::num::{CRat, Rat};
use num::bigint::BigInt;

use serde_json::Value;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Schema(String),
}

fn schema(msg: impl Into<String>) -> FormatError {
    FormatError::Schema(msg.into())
}

// --- writing ---------------------------------------------------------------

fn write_rat(out: &mut String, r: &Rat) {
    // Ratio keeps the denominator positive and the fraction reduced.
    let _ = write!(out, "[{},{}]", r.numer(), r.denom());
}

fn write_point(out: &mut String, p: &CRat) {
    out.push('[');
    write_rat(out, &p.re);
    out.push(',');
    write_rat(out, &p.im);
    out.push(']');
}

/// Canonical serialization of a surface spec.
pub fn surface_to_json(spec: &SurfaceSpec) -> String {
    let mut out = String::new();
    out.push_str("{\"polygons\":[");
    for (i, poly) in spec.polygons.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, v) in poly.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write_point(&mut out, v);
        }
        out.push(']');
    }
    out.push_str("],\"pairings\":[");
    for (i, (a, b)) in spec.pairings.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "[[{},{}],[{},{}]]",
            a.polygon, a.edge, b.polygon, b.edge
        );
    }
    let _ = write!(
        out,
        "],\"options\":{{\"forget_removable\":{},\"mode\":\"{}\"}}}}",
        spec.options.forget_removable,
        match spec.options.mode {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    );
    out
}

// --- parsing ---------------------------------------------------------------

fn as_bigint(v: &Value) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| schema(format!("expected integer, got {n}"))),
        _ => Err(schema(format!("expected integer, got {v}"))),
    }
}

fn as_rat(v: &Value) -> Result<Rat, FormatError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema("rational must be a [num, den] pair"))?;
    if arr.len() != 2 {
        return Err(schema("rational must be a [num, den] pair"));
    }
    let num = as_bigint(&arr[0])?;
    let den = as_bigint(&arr[1])?;
    if den.is_zero() {
        return Err(schema("rational with zero denominator"));
    }
    Ok(Rat::new(num, den))
}

use num::Zero;

fn as_point(v: &Value) -> Result<CRat, FormatError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema("coordinate must be a pair of rationals"))?;
    if arr.len() != 2 {
        return Err(schema("coordinate must be a pair of rationals"));
    }
    Ok(CRat::new(as_rat(&arr[0])?, as_rat(&arr[1])?))
}

fn as_usize(v: &Value) -> Result<usize, FormatError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(format!("expected index, got {v}")))
}

pub fn surface_from_json(text: &str) -> Result<SurfaceSpec, FormatError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let polygons = root
        .get("polygons")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing polygons array"))?
        .iter()
        .map(|poly| {
            poly.as_array()
                .ok_or_else(|| schema("polygon must be an array of coordinates"))?
                .iter()
                .map(as_point)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pairings = root
        .get("pairings")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing pairings array"))?
        .iter()
        .map(|p| {
            let pair = p
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| schema("pairing must be [[p,e],[q,f]]"))?;
            let side = |v: &Value| -> Result<EdgeRef, FormatError> {
                let arr = v
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| schema("edge reference must be [polygon, edge]"))?;
                Ok(EdgeRef {
                    polygon: as_usize(&arr[0])?,
                    edge: as_usize(&arr[1])?,
                })
            };
            Ok((side(&pair[0])?, side(&pair[1])?))
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let mut options = SpecOptions::default();
    if let Some(opts) = root.get("options") {
        if let Some(f) = opts.get("forget_removable") {
            options.forget_removable = f
                .as_bool()
                .ok_or_else(|| schema("forget_removable must be a bool"))?;
        }
        if let Some(m) = opts.get("mode") {
            options.mode = match m.as_str() {
                Some("exact") => Mode::Exact,
                Some("float") => Mode::Float,
                _ => return Err(schema("mode must be \"exact\" or \"float\"")),
            };
        }
    }
    Ok(SurfaceSpec {
        polygons,
        pairings,
        options,
    })
}

// --- holonomy documents ----------------------------------------------------

fn write_charval(out: &mut String, c: &CharVal) {
    match c {
        CharVal::Exact(r) => {
            out.push_str("{\"modulus\":");
            write_rat(out, r);
            out.push_str(",\"angle_pi\":[0,1]}");
        }
        CharVal::Approx { re, im } => {
            let _ = write!(out, "{{\"re\":\"{re}\",\"im\":\"{im}\"}}");
        }
    }
}

fn write_order(out: &mut String, m: &Order) {
    match m {
        Order::Exact { re, rho } => {
            out.push_str("{\"re\":");
            write_rat(out, re);
            out.push_str(",\"rho\":");
            write_rat(out, rho);
            out.push('}');
        }
        Order::Approx { re, im } => {
            let _ = write!(out, "{{\"re\":\"{re}\",\"im\":\"{im}\"}}");
        }
    }
}

/// Holonomy document. `chi` values carry exact modulus and angle when
/// available; `m` is printed both as decimal pairs and in exact form.
pub fn holonomy_to_json(h: &HolonomyData) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"genus\":{},\"n\":{},\"chi\":[", h.genus, h.n());
    for (i, c) in h.chi.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_charval(&mut out, c);
    }
    out.push_str("],\"chi_punctures\":[");
    for (i, c) in h.chi_punctures.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_charval(&mut out, c);
    }
    out.push_str("],\"m\":[");
    for (i, m) in h.m.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[\"{}\",\"{}\"]", m.re_f64(), m.im_f64());
    }
    out.push_str("],\"m_exact\":[");
    for (i, m) in h.m.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_order(&mut out, m);
    }
    out.push_str("]}");
    out
}

fn charval_from_json(v: &Value) -> Result<CharVal, FormatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("character value must be an object"))?;
    if let Some(modulus) = obj.get("modulus") {
        let m = as_rat(modulus)?;
        if let Some(a) = obj.get("angle_pi") {
            let angle = as_rat(a)?;
            if !angle.is_zero() {
                // a unit-circle angle makes the value complex
                let theta = std::f64::consts::PI * crate::num::rat_to_f64(&angle);
                let md = crate::num::rat_to_f64(&m);
                return Ok(CharVal::Approx {
                    re: md * theta.cos(),
                    im: md * theta.sin(),
                });
            }
        }
        Ok(CharVal::Exact(m))
    } else {
        let re = decimal_field(obj, "re")?;
        let im = decimal_field(obj, "im")?;
        Ok(CharVal::Approx { re, im })
    }
}

fn decimal_field(
    obj: &serde_json::Map<String, Value>,
    key: &str,
) -> Result<f64, FormatError> {
    match obj.get(key) {
        Some(Value::String(s)) => s
            .parse::<f64>()
            .map_err(|_| schema(format!("bad decimal string {s}"))),
        Some(Value::Number(n)) => n
            .as_f64()
            .ok_or_else(|| schema(format!("bad number for {key}"))),
        _ => Err(schema(format!("missing field {key}"))),
    }
}

fn order_from_json(v: &Value) -> Result<Order, FormatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("order must be an object"))?;
    if let Some(rho) = obj.get("rho") {
        Ok(Order::Exact {
            re: as_rat(obj.get("re").ok_or_else(|| schema("order missing re"))?)?,
            rho: as_rat(rho)?,
        })
    } else {
        Ok(Order::Approx {
            re: decimal_field(obj, "re")?,
            im: decimal_field(obj, "im")?,
        })
    }
}

pub fn holonomy_from_json(text: &str) -> Result<HolonomyData, FormatError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let genus = root
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("missing genus"))? as usize;
    let chi = root
        .get("chi")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing chi"))?
        .iter()
        .map(charval_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let chi_punctures = root
        .get("chi_punctures")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing chi_punctures"))?
        .iter()
        .map(charval_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let m = root
        .get("m_exact")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing m_exact"))?
        .iter()
        .map(order_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HolonomyData {
        chi,
        chi_punctures,
        m,
        genus,
    })
}

// --- period vectors ----------------------------------------------------------

pub fn period_vector_to_json(alpha: &PeriodVector) -> String {
    let mut out = String::new();
    out.push_str("{\"periods\":[");
    for (i, p) in alpha.periods.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        match p {
            Period::Exact { mul, turns } => {
                out.push_str("{\"mul\":");
                write_rat(&mut out, mul);
                out.push_str(",\"turns\":");
                write_rat(&mut out, turns);
                out.push('}');
            }
            Period::Approx { re, im } => {
                let _ = write!(out, "{{\"re\":\"{re}\",\"im\":\"{im}\"}}");
            }
        }
    }
    out.push_str("],\"residues\":[");
    for (i, r) in alpha.residues.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_order(&mut out, r);
    }
    out.push_str("]}");
    out
}

pub fn period_vector_from_json(text: &str) -> Result<PeriodVector, FormatError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let periods = root
        .get("periods")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing periods"))?
        .iter()
        .map(|v| {
            let obj = v
                .as_object()
                .ok_or_else(|| schema("period must be an object"))?;
            if let Some(mul) = obj.get("mul") {
                Ok(Period::Exact {
                    mul: as_rat(mul)?,
                    turns: as_rat(
                        obj.get("turns")
                            .ok_or_else(|| schema("period missing turns"))?,
                    )?,
                })
            } else {
                Ok(Period::Approx {
                    re: decimal_field(obj, "re")?,
                    im: decimal_field(obj, "im")?,
                })
            }
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let residues = root
        .get("residues")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing residues"))?
        .iter()
        .map(order_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PeriodVector { periods, residues })
}

// --- framings and paths -------------------------------------------------------

pub fn framing_to_json(f: &Framing, reps: Option<&[CurvePath]>) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"genus\":{},\"n\":{},\"tau\":[", f.genus, f.n());
    for (i, t) in f.tau.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{t}");
    }
    out.push_str("],\"r\":[");
    for (i, r) in f.r.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{r}");
    }
    out.push(']');
    if let Some(reps) = reps {
        out.push_str(",\"representatives\":[");
        for (i, rep) in reps.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_path_body(&mut out, rep);
        }
        out.push(']');
    }
    out.push('}');
    out
}

pub fn framing_from_json(text: &str) -> Result<Framing, FormatError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let ints = |key: &str| -> Result<Vec<i64>, FormatError> {
        root.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| schema(format!("missing {key}")))?
            .iter()
            .map(|v| v.as_i64().ok_or_else(|| schema("expected integer")))
            .collect()
    };
    let genus = root
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("missing genus"))? as usize;
    let tau = ints("tau")?;
    let r = ints("r")?;
    if tau.len() != 2 * genus {
        return Err(schema("tau length must be 2·genus"));
    }
    Ok(Framing { tau, r, genus })
}

fn write_path_body(out: &mut String, path: &CurvePath) {
    let _ = write!(out, "{{\"closed\":{},\"segments\":[", path.closed);
    for (i, seg) in path.segments.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{{\"polygon\":{},\"start\":", seg.polygon);
        write_point(out, &seg.start);
        out.push_str(",\"end\":");
        write_point(out, &seg.end);
        out.push('}');
    }
    out.push_str("]}");
}

pub fn path_to_json(path: &CurvePath) -> String {
    let mut out = String::new();
    write_path_body(&mut out, path);
    out
}

pub fn path_from_json(text: &str) -> Result<CurvePath, FormatError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    path_from_value(&root)
}

pub fn path_from_value(root: &Value) -> Result<CurvePath, FormatError> {
    let closed = root
        .get("closed")
        .and_then(Value::as_bool)
        .unwrap_or(true);
    let segments = root
        .get("segments")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing segments"))?
        .iter()
        .map(|v| {
            let obj = v
                .as_object()
                .ok_or_else(|| schema("segment must be an object"))?;
            Ok(PathSegment {
                polygon: as_usize(
                    obj.get("polygon")
                        .ok_or_else(|| schema("segment missing polygon"))?,
                )?,
                start: as_point(
                    obj.get("start")
                        .ok_or_else(|| schema("segment missing start"))?,
                )?,
                end: as_point(obj.get("end").ok_or_else(|| schema("segment missing end"))?)?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(CurvePath { segments, closed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::surface::corpus;

    #[test]
    fn surface_round_trip() {
        for spec in [
            corpus::square_torus(),
            corpus::regular_2n_gon(4).unwrap(),
            corpus::chamber_surface(rat(3, 2)).unwrap(),
            corpus::troyanov_family(rat(1, 4)).unwrap(),
        ] {
            let text = surface_to_json(&spec);
            let parsed = surface_from_json(&text).unwrap();
            assert_eq!(surface_to_json(&parsed), text);
            assert_eq!(parsed.polygons, spec.polygons);
            assert_eq!(parsed.pairings, spec.pairings);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(surface_from_json("{").is_err());
        assert!(surface_from_json("{\"polygons\":[]}").is_err());
        assert!(
            surface_from_json("{\"polygons\":[],\"pairings\":[],\"options\":{\"mode\":\"x\"}}")
                .is_err()
        );
    }

    #[test]
    fn holonomy_round_trip() {
        use crate::holonomy::{character, homology_basis};
        use crate::surface::build_surface;
        let s = build_surface(corpus::chamber_surface(rat(5, 2)).unwrap()).unwrap();
        let basis = homology_basis(&s).unwrap();
        let h = character(&s, &basis).unwrap();
        let text = holonomy_to_json(&h);
        let parsed = holonomy_from_json(&text).unwrap();
        assert_eq!(parsed, h);
    }

    #[test]
    fn big_integer_coordinates_survive() {
        let text = r#"{"polygons":[[[[ 123456789012345678901234567890,1],[0,1]],[[1,1],[0,1]],[[1,1],[1,1]]]],"pairings":[],"options":{}}"#;
        // malformed as a surface (unmatched edges), but coordinates parse
        let parsed = surface_from_json(text).unwrap();
        let v = &parsed.polygons[0][0];
        assert_eq!(
            v.re.numer().to_string(),
            "123456789012345678901234567890"
        );
    }
}
