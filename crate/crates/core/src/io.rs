//! JSON encodings of the library's inputs and results.
//!
//! Rationals are written as `"p/q"` strings (integers as `"p"`); readers also
//! accept JSON integers. Formats:
//!
//! * polygon or support: `[[i, j], ...]`
//! * tropical polynomial: `[{"exp": [i, j], "val": "p/q"}, ...]`
//! * points: `[["p/q", "p/q"], ...]`

use serde_json::{json, Map, Value};

use crate::cuspidal::CuspidalRecord;
use crate::enumeration::{CountResult, NodalAmoebaRecord};
use crate::lattice_geom::{LatticePoint, LatticePolygon};
use crate::rational::{format_rational, parse_rational, Rational, RationalPoint};
use crate::tropical_curve::{Subdivision, TropicalCurve, TropicalPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("malformed input: {0}")]
pub struct IoError(pub String);

fn malformed(what: impl Into<String>) -> IoError {
    IoError(what.into())
}

fn array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>, IoError> {
    value.as_array().ok_or_else(|| malformed(format!("{what} must be an array")))
}

fn integer(value: &Value, what: &str) -> Result<i64, IoError> {
    value.as_i64().ok_or_else(|| malformed(format!("{what} must be an integer")))
}

pub fn read_rational(value: &Value) -> Result<Rational, IoError> {
    match value {
        Value::String(s) => parse_rational(s).map_err(|e| malformed(e.0)),
        Value::Number(n) => n
            .as_i64()
            .map(|v| Rational::from_integer(v.into()))
            .ok_or_else(|| malformed(format!("{n} is not an integer; write fractions as \"p/q\""))),
        other => Err(malformed(format!("expected a rational, found {other}"))),
    }
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Integer vectors of any common length.
pub fn read_exponents(value: &Value) -> Result<Vec<Vec<i64>>, IoError> {
    array(value, "support")?
        .iter()
        .map(|row| array(row, "exponent")?.iter().map(|v| integer(v, "exponent entry")).collect())
        .collect()
}

pub fn read_lattice_points(value: &Value) -> Result<Vec<LatticePoint>, IoError> {
    read_exponents(value)?
        .into_iter()
        .map(|e| match e.as_slice() {
            &[i, j] => Ok(LatticePoint::new(i, j)),
            _ => Err(malformed("lattice points need two coordinates")),
        })
        .collect()
}

/// A polygon given by its vertices, or by any point set whose convex hull is meant.
pub fn read_polygon(value: &Value) -> Result<LatticePolygon, IoError> {
    let pts = read_lattice_points(value)?;
    LatticePolygon::convex_hull(&pts).map_err(|e| malformed(e.to_string()))
}

pub fn read_polynomial(value: &Value) -> Result<TropicalPolynomial, IoError> {
    let terms = array(value, "polynomial")?
        .iter()
        .map(|term| {
            let obj = term.as_object().ok_or_else(|| malformed("terms are objects"))?;
            let exp = obj.get("exp").ok_or_else(|| malformed("term without \"exp\""))?;
            let exp = array(exp, "exp")?
                .iter()
                .map(|v| integer(v, "exponent entry"))
                .collect::<Result<Vec<_>, _>>()?;
            let val = read_rational(obj.get("val").ok_or_else(|| malformed("term without \"val\""))?)?;
            Ok((exp, val))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    TropicalPolynomial::new(terms).map_err(|e| malformed(e.to_string()))
}

/// Points of any common dimension.
pub fn read_vectors(value: &Value) -> Result<Vec<Vec<Rational>>, IoError> {
    array(value, "points")?
        .iter()
        .map(|p| array(p, "point")?.iter().map(read_rational).collect())
        .collect()
}

pub fn read_points(value: &Value) -> Result<Vec<RationalPoint>, IoError> {
    read_vectors(value)?
        .into_iter()
        .map(|p| match <[Rational; 2]>::try_from(p) {
            Ok([x, y]) => Ok(RationalPoint::new(x, y)),
            Err(_) => Err(malformed("plane points need two coordinates")),
        })
        .collect()
}

pub fn lattice_point_value(p: LatticePoint) -> Value {
    json!([p.i, p.j])
}

pub fn polygon_value(p: &LatticePolygon) -> Value {
    Value::Array(p.vertices().iter().map(|&v| lattice_point_value(v)).collect())
}

pub fn point_value(p: &RationalPoint) -> Value {
    json!([rational_value(&p.x), rational_value(&p.y)])
}

pub fn points_value(points: &[RationalPoint]) -> Value {
    Value::Array(points.iter().map(point_value).collect())
}

pub fn polynomial_value(f: &TropicalPolynomial) -> Value {
    Value::Array(
        f.terms()
            .map(|(exp, val)| json!({"exp": exp, "val": rational_value(val)}))
            .collect(),
    )
}

pub fn subdivision_value(s: &Subdivision) -> Value {
    let mut obj = Map::new();
    obj.insert("polygon".into(), polygon_value(s.polygon()));
    obj.insert(
        "vertices".into(),
        Value::Array(s.vertices().iter().map(|&v| lattice_point_value(v)).collect()),
    );
    obj.insert(
        "cells".into(),
        Value::Array(s.cells().iter().map(|c| polygon_value(&c.polygon)).collect()),
    );
    obj.insert(
        "edges".into(),
        Value::Array(
            s.edges()
                .iter()
                .map(|e| {
                    json!({
                        "ends": [lattice_point_value(s.vertices()[e.ends[0]]), lattice_point_value(s.vertices()[e.ends[1]])],
                        "length": e.lattice_length(),
                    })
                })
                .collect(),
        ),
    );
    if let Some(lift) = s.lift() {
        obj.insert("lift".into(), Value::Array(lift.iter().map(rational_value).collect()));
    }
    Value::Object(obj)
}

pub fn curve_value(c: &TropicalCurve) -> Value {
    json!({
        "vertices": c.vertices().iter().map(point_value).collect::<Vec<_>>(),
        "bounded_edges": c.bounded_edges().iter().map(|e| json!({
            "from": e.from,
            "to": e.to,
            "direction": lattice_point_value(e.direction),
            "weight": e.weight,
        })).collect::<Vec<_>>(),
        "rays": c.rays().iter().map(|r| json!({
            "vertex": r.vertex,
            "direction": lattice_point_value(r.direction),
            "weight": r.weight,
        })).collect::<Vec<_>>(),
    })
}

/// Corner locus together with its dual subdivision and the normalized polynomial.
pub fn tropicalization_value(f: &TropicalPolynomial, c: &TropicalCurve) -> Value {
    json!({
        "polynomial": polynomial_value(&f.normalized()),
        "curve": curve_value(c),
        "subdivision": subdivision_value(c.dual()),
    })
}

fn assignment_value(s: &Subdivision, assignment: &[usize]) -> Value {
    Value::Array(
        assignment
            .iter()
            .map(|&e| {
                let [a, b] = s.edges()[e].ends;
                json!([lattice_point_value(s.vertices()[a]), lattice_point_value(s.vertices()[b])])
            })
            .collect(),
    )
}

fn result_header<R>(kind: &str, result: &CountResult<R>) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(kind));
    obj.insert("polygon".into(), polygon_value(&result.polygon));
    obj.insert("nodes".into(), json!(result.n_nodes));
    obj.insert("point_count".into(), json!(result.points.len()));
    obj.insert("points".into(), points_value(result.points.points()));
    if let Some(seed) = result.points.seed() {
        obj.insert("seed".into(), json!(seed));
    }
    obj.insert("total".into(), json!(result.total));
    obj
}

pub fn nodal_record_value(rec: &NodalAmoebaRecord) -> Value {
    json!({
        "subdivision": subdivision_value(&rec.subdivision),
        "curve": curve_value(&rec.curve),
        "assignment": assignment_value(&rec.subdivision, &rec.assignment),
        "weight": rec.weight,
        "irreducible": rec.irreducible,
        "welschinger_sign": rec.welschinger_sign,
    })
}

/// `kind` is `"nodal"` or `"welschinger"`.
pub fn nodal_result_value(kind: &str, result: &CountResult) -> Value {
    let mut obj = result_header(kind, result);
    obj.insert(
        "records".into(),
        Value::Array(result.records.iter().map(nodal_record_value).collect()),
    );
    Value::Object(obj)
}

pub fn cuspidal_record_value(rec: &CuspidalRecord) -> Value {
    json!({
        "subdivision": subdivision_value(&rec.subdivision),
        "curve": curve_value(&rec.curve),
        "assignment": assignment_value(&rec.subdivision, &rec.assignment),
        "pattern": rec.pattern.kind.name(),
        "factor": rec.factor,
        "weight": rec.weight,
    })
}

pub fn cuspidal_result_value(result: &CountResult<CuspidalRecord>) -> Value {
    let mut obj = result_header("cuspidal", result);
    obj.insert(
        "records".into(),
        Value::Array(result.records.iter().map(cuspidal_record_value).collect()),
    );
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn rationals_round_trip() {
        let r = ratio(-7, 3);
        assert_eq!(read_rational(&rational_value(&r)).unwrap(), r);
        assert_eq!(read_rational(&json!(4)).unwrap(), ratio(4, 1));
        assert!(read_rational(&json!(0.5)).is_err());
        assert!(read_rational(&json!("1/0")).is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let value = json!([{"exp": [0, 0], "val": "1/2"}, {"exp": [1, 0], "val": 0}, {"exp": [0, 1], "val": "-3"}]);
        let f = read_polynomial(&value).unwrap();
        assert_eq!(read_polynomial(&polynomial_value(&f)).unwrap(), f);
        assert!(read_polynomial(&json!([{"exp": [0, 0]}])).is_err());
    }

    #[test]
    fn polygons_and_points() {
        let p = read_polygon(&json!([[0, 0], [3, 0], [0, 3], [1, 1]])).unwrap();
        assert_eq!(p, LatticePolygon::standard_triangle(3));
        assert!(read_polygon(&json!([[0, 0], [1, 1]])).is_err());
        let pts = read_points(&json!([["1/2", "3"], [0, -1]])).unwrap();
        assert_eq!(read_points(&points_value(&pts)).unwrap(), pts);
        assert!(read_points(&json!([[1]])).is_err());
    }
}
