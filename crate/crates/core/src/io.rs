//! Versioned JSON renderings of complexes, families, chains and plot data.
//! Rationals are strings `"p/q"` (or `"p"` for integers).

use serde_json::{json, Value};

use crate::complex::Complex;
use crate::cycles::Chain;
use crate::exterior::mask_indices;
use crate::pph::ConstructiveFamily;
use crate::scalar::{fmt_rational, ExactField};

pub const COMPLEX_FORMAT: &str = "pph-complex/1";
pub const FAMILY_FORMAT: &str = "pph-family/1";
pub const CHAIN_FORMAT: &str = "pph-chain/1";
pub const PLOT_FORMAT: &str = "pph-plot/1";

pub fn rational<S: ExactField>(x: &S) -> Value {
    Value::String(fmt_rational(x))
}

pub fn vector<S: ExactField>(v: &[S]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

fn vectors<S: ExactField>(vs: &[Vec<S>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

pub fn complex_json<S: ExactField>(c: &Complex<S>) -> Value {
    let cells: Vec<Value> = c
        .cells
        .iter()
        .map(|cell| {
            json!({
                "id": cell.id,
                "dim": cell.dim,
                "vertices": vectors(&cell.vertices),
                "rays": vectors(&cell.rays),
                "lineality": vectors(&cell.lineality),
                "facets": cell.facets.iter().map(|(f, s)| json!([f, s])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "format": COMPLEX_FORMAT,
        "ambient": c.ambient,
        "window": c.window.as_ref().map(rational),
        "counts": c.count_by_dim(),
        "cells": cells,
    })
}

pub fn family_json<S: ExactField>(fam: &ConstructiveFamily<S>, names: &[String], exprs: &[String]) -> Value {
    let assignment: Vec<Value> = fam
        .assignment
        .iter()
        .map(|(top, pieces)| {
            json!({
                "cell": top,
                "pieces": pieces.iter().map(|a| json!({"gradient": vector(&a.gradient), "constant": rational(&a.constant)})).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "format": FAMILY_FORMAT,
        "n": fam.n,
        "functions": names.iter().zip(exprs).map(|(n, e)| json!({"name": n, "expr": e})).collect::<Vec<_>>(),
        "complex": complex_json(&fam.complex),
        "assignment": assignment,
    })
}

/// Basis `dx_i` names in `(x1, y1, x2, …)` order.
pub fn differential_name(i: usize) -> String {
    format!("d{}{}", if i % 2 == 0 { 'x' } else { 'y' }, i / 2 + 1)
}

pub fn chain_json<S: ExactField>(x: &Chain<S>, names: &[String]) -> Value {
    let var = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("h{}", i + 1));
    let frames: Vec<Value> = x
        .frames
        .iter()
        .map(|(cell, frame)| {
            let terms: Vec<Value> = frame
                .iter()
                .map(|t| {
                    let form: Vec<Value> = t
                        .form
                        .coeffs()
                        .iter()
                        .map(|(m, c)| {
                            let basis: Vec<String> = mask_indices(*m).into_iter().map(differential_name).collect();
                            json!({"basis": basis.join("^"), "value": rational(c)})
                        })
                        .collect();
                    json!({"coeff": t.coeff.render(&var), "form": form})
                })
                .collect();
            json!({"cell": cell, "terms": terms})
        })
        .collect();
    json!({"format": CHAIN_FORMAT, "dim": x.dim, "degree": x.degree, "frames": frames})
}

/// Vertices and edges of a windowed complex, with the frames of an
/// optional chain living on them (by clipped cell).
pub fn plot_json<S: ExactField>(clipped: &Complex<S>, chain: Option<(&Chain<S>, &[String])>) -> Value {
    let vertices: Vec<Value> = clipped.cells_of_dim(0).map(|c| json!({"id": c.id, "at": vector(&c.vertices[0])})).collect();
    let edges: Vec<Value> = clipped
        .cells_of_dim(1)
        .map(|c| json!({"id": c.id, "ends": vectors(&c.vertices), "origin": c.origin.first()}))
        .collect();
    let mut out = json!({
        "format": PLOT_FORMAT,
        "ambient": clipped.ambient,
        "window": clipped.window.as_ref().map(rational),
        "vertices": vertices,
        "edges": edges,
    });
    if let Some((x, names)) = chain {
        let mut cells = Vec::new();
        for c in clipped.cells_of_dim(x.dim) {
            if let Some(o) = c.origin.first() {
                if x.frames.contains_key(o) {
                    cells.push(json!({"id": c.id, "origin": o, "vertices": vectors(&c.vertices)}));
                }
            }
        }
        out["chain"] = chain_json(x, names);
        out["support"] = Value::Array(cells);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corner::corner_locus_function;
    use crate::pph::PLExpr;
    use crate::scalar::int;
    use crate::Q;

    #[test]
    fn chain_format() {
        let f = PLExpr::Max(vec![PLExpr::constant(2, int(0)), PLExpr::coordinate(2, 0)]);
        let fam = ConstructiveFamily::<Q>::build(1, vec![f]).unwrap();
        let x = corner_locus_function(&fam, 0).unwrap();
        let v = chain_json(&x, &["h".to_string()]);
        assert_eq!(v["format"], CHAIN_FORMAT);
        assert_eq!(v["dim"], 1);
        assert_eq!(v["frames"][0]["terms"][0]["form"][0]["basis"], "dy1");
        let c = complex_json(&fam.complex);
        assert_eq!(c["counts"], json!([0, 1, 2]));
    }
}
