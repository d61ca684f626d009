//! JSON polytope documents: `{"name": optional string, "vertices": [[x,y,z], ...]}`.
//!
//! Coordinates must be written as integer literals. Anything else (floats,
//! scientific notation, strings) is rejected rather than rounded, so a
//! document that parses is exact by construction.

use nonspan_core::geom::Point3;
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

pub struct PolytopeDocument {
    pub name: Option<String>,
    pub vertices: Vec<Point3>,
}

pub fn parse(text: &str) -> Result<PolytopeDocument, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = v
        .as_object()
        .ok_or("the document must be a JSON object")?;
    for key in obj.keys() {
        if key != "name" && key != "vertices" {
            return Err(format!("unknown field {key:?}"));
        }
    }
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err("\"name\" must be a string".into()),
    };
    let rows = obj
        .get("vertices")
        .ok_or("missing field \"vertices\"")?
        .as_array()
        .ok_or("\"vertices\" must be an array")?;
    if rows.is_empty() {
        return Err("\"vertices\" is empty".into());
    }
    let mut vertices = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let triple = match row.as_array() {
            Some(t) if t.len() == 3 => t,
            _ => return Err(format!("vertex {i} must be a triple [x, y, z]")),
        };
        let mut c = triple.iter().map(|x| coordinate(x, i));
        vertices.push(Point3::new(
            c.next().unwrap()?,
            c.next().unwrap()?,
            c.next().unwrap()?,
        ));
    }
    Ok(PolytopeDocument { name, vertices })
}

fn coordinate(v: &Value, vertex: usize) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| format!("vertex {vertex}: {n} is not an integer")),
        other => Err(format!(
            "vertex {vertex}: coordinates must be integers, got {other}"
        )),
    }
}

/// Exact JSON number for an arbitrary-precision integer.
pub fn number(b: &BigInt) -> Number {
    serde_json::from_str(&b.to_string()).expect("integer literal")
}

pub fn point_value(p: &Point3) -> Value {
    Value::Array(vec![
        Value::Number(number(&p.x)),
        Value::Number(number(&p.y)),
        Value::Number(number(&p.z)),
    ])
}

pub fn to_value(name: Option<&str>, vertices: &[Point3]) -> Value {
    let mut obj = Map::new();
    if let Some(name) = name {
        obj.insert("name".into(), Value::String(name.into()));
    }
    obj.insert(
        "vertices".into(),
        Value::Array(vertices.iter().map(point_value).collect()),
    );
    Value::Object(obj)
}
