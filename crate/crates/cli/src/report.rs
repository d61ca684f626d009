//! Rendering of analyze/classify reports, as aligned text and as JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nonspan_core::classify::{ClassificationResult, Verdict};
use nonspan_core::equiv::AffineUnimodularMap;
use nonspan_core::geom::{LatticePolytope3, Point3};
use nonspan_core::invariants::{empty_tetrahedra, verify_partition, InvariantProfile};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::doc::{number, point_value};

fn input_lines(name: Option<&str>, vertex_count: usize, text: &mut String, obj: &mut Map<String, Value>) {
    match name {
        Some(n) => {
            let _ = writeln!(text, "input: {n} ({vertex_count} vertices)");
        }
        None => {
            let _ = writeln!(text, "input: {vertex_count} vertices");
        }
    }
    let mut input = Map::new();
    if let Some(n) = name {
        input.insert("name".into(), Value::String(n.into()));
    }
    input.insert("vertex_count".into(), json!(vertex_count));
    obj.insert("input".into(), Value::Object(input));
}

fn profile_lines(p: &InvariantProfile, text: &mut String, obj: &mut Map<String, Value>) {
    let _ = writeln!(text, "size n: {}", p.n);
    let _ = writeln!(text, "interior points n0: {}", p.n0);
    let _ = writeln!(text, "normalized volume V: {}", p.volume);
    let _ = writeln!(text, "sublattice index q: {}", p.index);
    let _ = writeln!(text, "width: {} along {}", p.width, p.width_functional);
    let _ = writeln!(text, "h*: {}", p.hstar);
    obj.insert("n".into(), json!(p.n));
    obj.insert("n0".into(), json!(p.n0));
    obj.insert("volume".into(), Value::Number(number(&p.volume)));
    obj.insert("index".into(), Value::Number(number(&p.index)));
    obj.insert("width".into(), Value::Number(number(&p.width)));
    obj.insert("width_functional".into(), point_value(&p.width_functional));
    obj.insert(
        "hstar".into(),
        Value::Array(
            p.hstar
                .coefficients()
                .iter()
                .map(|c| Value::Number(number(c)))
                .collect(),
        ),
    );
}

fn volume_multiset(volumes: &[BigInt]) -> (String, Value) {
    let mut counts: BTreeMap<&BigInt, usize> = BTreeMap::new();
    for v in volumes {
        *counts.entry(v).or_insert(0) += 1;
    }
    let parts: Vec<String> = counts
        .iter()
        .map(|(v, k)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect();
    let pairs: Vec<Value> = counts
        .iter()
        .map(|(v, k)| Value::Array(vec![Value::Number(number(v)), json!(k)]))
        .collect();
    (format!("{{{}}}", parts.join(", ")), Value::Array(pairs))
}

/// The analyze report: invariant profile, empty-tetrahedra census,
/// partition verdict.
pub fn analyze(
    name: Option<&str>,
    vertex_count: usize,
    p: &LatticePolytope3,
    profile: &InvariantProfile,
) -> (String, Value) {
    let mut text = String::new();
    let mut obj = Map::new();
    input_lines(name, vertex_count, &mut text, &mut obj);
    profile_lines(profile, &mut text, &mut obj);

    let tetra = empty_tetrahedra(p);
    let volumes: Vec<BigInt> = tetra.iter().map(|t| t.volume.clone()).collect();
    let (mtext, mjson) = volume_multiset(&volumes);
    let _ = writeln!(text, "empty tetrahedra: {} with volumes {}", tetra.len(), mtext);
    obj.insert(
        "empty_tetrahedra".into(),
        json!({"count": tetra.len(), "volumes": mjson}),
    );

    let certified = verify_partition(p);
    let _ = writeln!(
        text,
        "volume partition: {}",
        if certified { "certified" } else { "not found" }
    );
    obj.insert("partition_certified".into(), json!(certified));
    (text, Value::Object(obj))
}

fn map_value(m: &AffineUnimodularMap) -> (String, Value) {
    let a = m.matrix();
    let rows: Vec<String> = (0..3)
        .map(|i| format!("[{}, {}, {}]", a.get(i, 0), a.get(i, 1), a.get(i, 2)))
        .collect();
    let text = format!("x -> A x + t, A = [{}], t = {}", rows.join(", "), m.translation());
    let matrix: Vec<Value> = (0..3)
        .map(|i| {
            Value::Array(
                (0..3)
                    .map(|j| Value::Number(number(a.get(i, j))))
                    .collect(),
            )
        })
        .collect();
    let value = json!({"matrix": matrix, "translation": point_value(m.translation())});
    (text, value)
}

/// The classify report. Returns the process exit code along with the two
/// renderings: 4 for a contradiction, 0 otherwise.
pub fn classify(
    name: Option<&str>,
    vertex_count: usize,
    r: &ClassificationResult,
) -> (String, Value, u8) {
    let mut text = String::new();
    let mut obj = Map::new();
    input_lines(name, vertex_count, &mut text, &mut obj);
    profile_lines(&r.profile, &mut text, &mut obj);

    let mut code = 0;
    let verdict: Value = match &r.verdict {
        Verdict::Spanning {
            has_unimodular_tetra,
            witness,
            e51_match,
        } => {
            let _ = writeln!(text, "verdict: spanning (q = 1)");
            match witness {
                Some(w) => {
                    let vs: Vec<String> = w.vertices.iter().map(Point3::to_string).collect();
                    let _ = writeln!(text, "unimodular tetrahedron: {}", vs.join(", "));
                }
                None => {
                    let label = e51_match.map(|t| t.label()).unwrap_or("none");
                    let _ = writeln!(text, "unimodular tetrahedron: none (matches {label})");
                }
            }
            json!({
                "kind": "spanning",
                "has_unimodular_tetrahedron": has_unimodular_tetra,
                "unimodular_tetrahedron": witness
                    .as_ref()
                    .map(|w| Value::Array(w.vertices.iter().map(point_value).collect())),
                "e51_match": e51_match.map(|t| t.label()),
            })
        }
        Verdict::WidthOne { p, q, a, b } => {
            let _ = writeln!(text, "verdict: width one, T({p},{q},{a},{b})");
            json!({
                "kind": "width_one",
                "p": Value::Number(number(p)),
                "q": Value::Number(number(q)),
                "a": Value::Number(number(a)),
                "b": Value::Number(number(b)),
            })
        }
        Verdict::Family {
            tag,
            params,
            isomorphism,
        } => {
            let (mtext, mjson) = map_value(isomorphism);
            let _ = writeln!(text, "verdict: family {} {}", tag.label(), params);
            let _ = writeln!(text, "isomorphism onto the representative: {mtext}");
            let mut v = Map::new();
            v.insert("kind".into(), json!("family"));
            v.insert("tag".into(), json!(tag.label()));
            v.insert("a".into(), json!(params.a));
            v.insert("b".into(), json!(params.b));
            if let Some(k) = params.k {
                v.insert("k".into(), json!(k));
            }
            v.insert("isomorphism".into(), mjson);
            Value::Object(v)
        }
        Verdict::Exception { tag, isomorphism } => {
            let (mtext, mjson) = map_value(isomorphism);
            let _ = writeln!(text, "verdict: exception {}", tag.label());
            let _ = writeln!(text, "isomorphism onto the representative: {mtext}");
            json!({"kind": "exception", "tag": tag.label(), "isomorphism": mjson})
        }
        Verdict::ContradictsClassification { reason } => {
            code = 4;
            let _ = writeln!(text, "verdict: CONTRADICTS CLASSIFICATION");
            let _ = writeln!(text, "reason: {reason}");
            json!({"kind": "contradicts_classification", "reason": reason})
        }
    };
    obj.insert("verdict".into(), verdict);
    (text, Value::Object(obj), code)
}
