//! JSON documents for densities, cakes, pieces and divisions.
//!
//! Every document carries `"schema": "fairsquare/1"`. Infinite coordinates
//! are written as the strings `"inf"` and `"-inf"`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{CakeBase, CakeDomain, Piece, Point, Rect, Square, Staircase, Walls};
use crate::measure::GridDensity;
use crate::protocols::{
    AgentResult, Allocation, Bound, Division, DivisionReport, Normalization, PieceFamily, Query, QueryKind,
};

pub const SCHEMA: &str = "fairsquare/1";

fn err(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

pub fn num(x: f64) -> Value {
    if x == f64::INFINITY {
        json!("inf")
    } else if x == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    }
}

pub fn get_num(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| err("number out of range")),
        Value::String(s) if s == "inf" || s == "+inf" => Ok(f64::INFINITY),
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        _ => Err(err(format!("expected a number, got {}", v))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(format!("missing field '{}'", key)))
}

fn num_field(v: &Value, key: &str) -> Result<f64> {
    get_num(field(v, key)?)
}

fn nums(v: &Value) -> Result<Vec<f64>> {
    v.as_array().ok_or_else(|| err(format!("expected an array, got {}", v)))?.iter().map(get_num).collect()
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| err(format!("field '{}' must be a string", key)))
}

/// Rejects documents declaring another schema; a missing schema is accepted.
pub fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(s) => Err(err(format!("unsupported schema {}", s))),
    }
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| err(e.to_string()))
}

pub fn density_to_json(d: &GridDensity<f64>) -> Value {
    json!({
        "schema": SCHEMA,
        "xs": d.xs().iter().map(|x| num(*x)).collect::<Vec<_>>(),
        "ys": d.ys().iter().map(|y| num(*y)).collect::<Vec<_>>(),
        "cells": d.cells().iter().map(|r| r.iter().map(|c| num(*c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn density_from_json(v: &Value) -> Result<GridDensity<f64>> {
    check_schema(v)?;
    let xs = nums(field(v, "xs")?)?;
    let ys = nums(field(v, "ys")?)?;
    let cells = field(v, "cells")?
        .as_array()
        .ok_or_else(|| err("cells must be an array of rows"))?
        .iter()
        .map(nums)
        .collect::<Result<Vec<_>>>()?;
    GridDensity::new(xs, ys, cells)
}

/// A single density, or `{"agents": [{"id": .., "density": {..}}, ..]}`.
/// Agents without an id are numbered from `first_id` in order.
pub fn agents_from_json(v: &Value, first_id: usize) -> Result<Vec<(usize, GridDensity<f64>)>> {
    check_schema(v)?;
    match v.get("agents") {
        None => Ok(vec![(first_id, density_from_json(v)?)]),
        Some(list) => list
            .as_array()
            .ok_or_else(|| err("agents must be an array"))?
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let id = match a.get("id") {
                    Some(x) => x.as_u64().ok_or_else(|| err("agent id must be a nonnegative integer"))? as usize,
                    None => first_id + i,
                };
                Ok((id, density_from_json(a.get("density").unwrap_or(a))?))
            })
            .collect(),
    }
}

fn rect_json(r: &Rect<f64>) -> Value {
    json!([num(r.xmin), num(r.ymin), num(r.xmax), num(r.ymax)])
}

fn rect_from(v: &Value) -> Result<Rect<f64>> {
    let a = nums(v)?;
    if a.len() != 4 {
        return Err(err("a rectangle is [xmin, ymin, xmax, ymax]"));
    }
    Ok(Rect::new(a[0], a[1], a[2], a[3]))
}

fn points_json(p: &[Point<f64>]) -> Value {
    Value::Array(p.iter().map(|q| json!([num(q.x), num(q.y)])).collect())
}

fn points_from(v: &Value) -> Result<Vec<Point<f64>>> {
    v.as_array()
        .ok_or_else(|| err("expected an array of points"))?
        .iter()
        .map(|q| {
            let a = nums(q)?;
            if a.len() != 2 {
                return Err(err("a point is [x, y]"));
            }
            Ok(Point::new(a[0], a[1]))
        })
        .collect()
}

fn square_json(s: &Square<f64>) -> Value {
    json!({"x": num(s.x), "y": num(s.y), "side": num(s.side)})
}

fn square_from(v: &Value) -> Result<Square<f64>> {
    Ok(Square::new(num_field(v, "x")?, num_field(v, "y")?, num_field(v, "side")?))
}

pub fn piece_to_json(p: &Piece<f64>) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(p.kind()));
    match p {
        Piece::Square(s) => {
            if let Value::Object(o) = square_json(s) {
                m.extend(o);
            }
        }
        Piece::Rect(r) | Piece::HalfPlane(r) | Piece::QuarterPlane(r) => {
            m.insert("rect".into(), rect_json(r));
        }
        Piece::LShape { outer, notch } => {
            m.insert("outer".into(), rect_json(outer));
            m.insert("notch".into(), rect_json(notch));
        }
        Piece::Staircase(s) => {
            m.insert("corners".into(), points_json(&s.corners));
        }
        Piece::FfdPolygon(v) => {
            m.insert("vertices".into(), points_json(v));
        }
        Piece::SquarePair(a, b) => {
            m.insert("squares".into(), json!([square_json(a), square_json(b)]));
        }
    }
    Value::Object(m)
}

pub fn piece_from_json(v: &Value) -> Result<Piece<f64>> {
    let kind = str_field(v, "kind")?;
    Ok(match kind {
        "square" => Piece::Square(square_from(v)?),
        "rect" => Piece::Rect(rect_from(field(v, "rect")?)?),
        "half_plane" => Piece::HalfPlane(rect_from(field(v, "rect")?)?),
        "quarter_plane" => Piece::QuarterPlane(rect_from(field(v, "rect")?)?),
        "lshape" => Piece::LShape { outer: rect_from(field(v, "outer")?)?, notch: rect_from(field(v, "notch")?)? },
        "staircase" => Piece::Staircase(Staircase::new(points_from(field(v, "corners")?)?)?),
        "ffd_polygon" => Piece::FfdPolygon(points_from(field(v, "vertices")?)?),
        "square_pair" => {
            let s = field(v, "squares")?.as_array().ok_or_else(|| err("squares must be an array"))?;
            if s.len() != 2 {
                return Err(err("a square pair has two squares"));
            }
            Piece::SquarePair(square_from(&s[0])?, square_from(&s[1])?)
        }
        _ => return Err(err(format!("unknown piece kind '{}'", kind))),
    })
}

fn walls_json(w: &Walls) -> Value {
    json!({"left": w.left, "right": w.right, "bottom": w.bottom, "top": w.top})
}

fn walls_from(v: &Value) -> Result<Walls> {
    let b = |k: &str| v.get(k).and_then(Value::as_bool).unwrap_or(false);
    if !v.is_object() {
        return Err(err("walls must be an object of booleans"));
    }
    Ok(Walls { left: b("left"), right: b("right"), bottom: b("bottom"), top: b("top") })
}

pub fn cake_to_json(c: &CakeDomain<f64>) -> Value {
    let base = match &c.base {
        CakeBase::Rect(r) => json!({"rect": rect_json(r)}),
        CakeBase::Staircase(s) => json!({"staircase": points_json(&s.corners)}),
        CakeBase::GridRegion { xs, ys, mask } => json!({"grid": {
            "xs": xs.iter().map(|x| num(*x)).collect::<Vec<_>>(),
            "ys": ys.iter().map(|y| num(*y)).collect::<Vec<_>>(),
            "mask": mask,
        }}),
        CakeBase::Polygon(p) => json!({"polygon": points_json(p)}),
    };
    json!({"schema": SCHEMA, "base": base, "walls": walls_json(&c.walls)})
}

pub fn cake_from_json(v: &Value) -> Result<CakeDomain<f64>> {
    check_schema(v)?;
    let b = field(v, "base")?;
    let base = if let Some(r) = b.get("rect") {
        CakeBase::Rect(rect_from(r)?)
    } else if let Some(s) = b.get("staircase") {
        CakeBase::Staircase(Staircase::new(points_from(s)?)?)
    } else if let Some(g) = b.get("grid") {
        let xs = nums(field(g, "xs")?)?;
        let ys = nums(field(g, "ys")?)?;
        let mask: Vec<Vec<bool>> = serde_json::from_value(field(g, "mask")?.clone()).map_err(|e| err(e.to_string()))?;
        if mask.len() + 1 != ys.len() || mask.iter().any(|r| r.len() + 1 != xs.len()) {
            return Err(err("grid mask shape does not match its cuts"));
        }
        CakeBase::GridRegion { xs, ys, mask }
    } else if let Some(p) = b.get("polygon") {
        CakeBase::Polygon(points_from(p)?)
    } else {
        return Err(err("cake base must be one of rect, staircase, grid, polygon"));
    };
    Ok(CakeDomain { base, walls: walls_from(field(v, "walls")?)? })
}

pub fn family_from_name(s: &str) -> Result<PieceFamily> {
    Ok(match s {
        "squares" => PieceFamily::Squares,
        "fat-rects" => PieceFamily::FatRects,
        "square-pairs" => PieceFamily::SquarePairs,
        "ffdp" => PieceFamily::Ffdp,
        _ => return Err(err(format!("unknown piece family '{}'", s))),
    })
}

fn query_json(q: &Query) -> Value {
    json!({
        "kind": match q.kind { QueryKind::Eval => "eval", QueryKind::Mark => "mark" },
        "agent": q.agent,
        "piece": q.piece.as_ref().map(piece_to_json),
        "target": q.target.map(num),
        "response": num(q.response),
    })
}

fn query_from(v: &Value) -> Result<Query> {
    let kind = match str_field(v, "kind")? {
        "eval" => QueryKind::Eval,
        "mark" => QueryKind::Mark,
        k => return Err(err(format!("unknown query kind '{}'", k))),
    };
    let opt = |k: &str| v.get(k).filter(|x| !x.is_null());
    Ok(Query {
        kind,
        agent: field(v, "agent")?.as_u64().ok_or_else(|| err("agent must be an integer"))? as usize,
        piece: opt("piece").map(piece_from_json).transpose()?,
        target: opt("target").map(get_num).transpose()?,
        response: num_field(v, "response")?,
    })
}

/// The whole division: report header, one entry per agent, the query log and notes.
pub fn division_to_json(div: &Division, cake: &CakeDomain<f64>, family: PieceFamily) -> Value {
    let r = &div.report;
    json!({
        "schema": SCHEMA,
        "procedure": r.procedure,
        "family": family.name(),
        "n": r.n,
        "bound": {"num": num(r.bound.num), "den": num(r.bound.den), "value": num(r.bound.value())},
        "constants": r.constants.map(|(e, f)| json!([e, f])),
        "normalization": match r.normalization { Normalization::Absolute => "absolute", Normalization::Relative => "relative" },
        "cake": cake_to_json(cake),
        "allocation": r.results.iter().map(|a| json!({
            "agent": a.agent,
            "piece": piece_to_json(&a.piece),
            "value": num(a.value),
            "total": num(a.total),
            "fraction": num(a.fraction),
        })).collect::<Vec<_>>(),
        "queries": r.queries.iter().map(query_json).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

pub struct DivisionDoc {
    pub division: Division,
    pub cake: CakeDomain<f64>,
    pub family: PieceFamily,
}

pub fn division_from_json(v: &Value) -> Result<DivisionDoc> {
    check_schema(v)?;
    let b = field(v, "bound")?;
    let bound = Bound { num: num_field(b, "num")?, den: num_field(b, "den")? };
    let constants = match v.get("constants") {
        Some(Value::Array(a)) if a.len() == 2 => {
            let g = |x: &Value| x.as_i64().ok_or_else(|| err("constants must be integers"));
            Some((g(&a[0])?, g(&a[1])?))
        }
        None | Some(Value::Null) => None,
        Some(_) => return Err(err("constants must be [E, F] or null")),
    };
    let normalization = match v.get("normalization").and_then(Value::as_str).unwrap_or("absolute") {
        "absolute" => Normalization::Absolute,
        "relative" => Normalization::Relative,
        s => return Err(err(format!("unknown normalization '{}'", s))),
    };
    let mut assignments = BTreeMap::new();
    let mut results = Vec::new();
    for a in field(v, "allocation")?.as_array().ok_or_else(|| err("allocation must be an array"))? {
        let agent = field(a, "agent")?.as_u64().ok_or_else(|| err("agent must be an integer"))? as usize;
        let piece = piece_from_json(field(a, "piece")?)?;
        if assignments.insert(agent, piece.clone()).is_some() {
            return Err(err(format!("agent {} appears twice", agent)));
        }
        results.push(AgentResult {
            agent,
            piece,
            value: a.get("value").map(get_num).transpose()?.unwrap_or(f64::NAN),
            total: a.get("total").map(get_num).transpose()?.unwrap_or(f64::NAN),
            fraction: a.get("fraction").map(get_num).transpose()?.unwrap_or(f64::NAN),
        });
    }
    let queries = match v.get("queries") {
        Some(Value::Array(q)) => q.iter().map(query_from).collect::<Result<Vec<_>>>()?,
        _ => Vec::new(),
    };
    let notes = match v.get("notes") {
        Some(Value::Array(n)) => n.iter().filter_map(|s| s.as_str().map(String::from)).collect(),
        _ => Vec::new(),
    };
    let report = DivisionReport {
        procedure: v.get("procedure").and_then(Value::as_str).unwrap_or("unknown").to_string(),
        n: results.len(),
        bound,
        constants,
        normalization,
        results,
        queries,
        notes,
    };
    Ok(DivisionDoc {
        division: Division { allocation: Allocation { assignments }, report },
        cake: cake_from_json(field(v, "cake")?)?,
        family: family_from_name(v.get("family").and_then(Value::as_str).unwrap_or("squares"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{divide_four_walls, verify, Agent};
    use crate::Tolerances;

    #[test]
    fn infinite_numbers_are_strings() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(get_num(&json!("-inf")).unwrap(), f64::NEG_INFINITY);
        assert!(get_num(&json!("x")).is_err());
    }

    #[test]
    fn density_round_trip_and_validation() {
        let d = GridDensity::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], vec![vec![1.0, 2.0]]).unwrap();
        let v = density_to_json(&d);
        assert_eq!(v["schema"], json!(SCHEMA));
        assert_eq!(density_from_json(&v).unwrap(), d);
        let bad = json!({"xs": [0.0, 1.0], "ys": [0.0, 1.0], "cells": [[-1.0]]});
        assert!(density_from_json(&bad).is_err());
        let shape = json!({"xs": [0.0, 1.0], "ys": [0.0, 1.0], "cells": [[1.0, 2.0]]});
        assert!(density_from_json(&shape).is_err());
        let other = json!({"schema": "fairsquare/0", "xs": [0.0, 1.0], "ys": [0.0, 1.0], "cells": [[1.0]]});
        assert!(density_from_json(&other).is_err());
    }

    #[test]
    fn pieces_and_cakes_round_trip() {
        let inf = f64::INFINITY;
        let pieces = vec![
            Piece::square(0.0, 0.0, 1.0),
            Piece::rect(0.0, 0.0, 2.0, 1.0),
            Piece::QuarterPlane(Rect::new(0.0, 0.0, inf, inf)),
            Piece::HalfPlane(Rect::new(-inf, 0.0, inf, inf)),
            Piece::LShape { outer: Rect::unit(), notch: Rect::new(0.5, 0.5, 1.0, 1.0) },
            Piece::Staircase(Staircase::new(vec![Point::new(0.0, 1.0), Point::new(1.0, 0.0)]).unwrap()),
            Piece::FfdPolygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]),
            Piece::SquarePair(Square::new(0.0, 0.0, 0.5), Square::new(0.5, 0.5, 0.5)),
        ];
        for p in pieces {
            assert_eq!(piece_from_json(&piece_to_json(&p)).unwrap(), p);
        }
        let cakes = vec![
            CakeDomain::square(1.0),
            CakeDomain::rect(Rect::new(0.0, 0.0, inf, inf), Walls { left: true, bottom: true, ..Walls::none() }),
            CakeDomain { base: CakeBase::GridRegion { xs: vec![0.0, 1.0, 2.0], ys: vec![0.0, 1.0], mask: vec![vec![true, false]] }, walls: Walls::all() },
            crate::protocols::rait(0.0, 0.0, 1.0),
        ];
        for c in cakes {
            let text = serde_json::to_string(&cake_to_json(&c)).unwrap();
            assert_eq!(cake_from_json(&parse(&text).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn division_round_trip_verifies() {
        let cake = CakeDomain::square(1.0);
        let ag: Vec<Agent> = (0..3)
            .map(|i| Agent::new(i, GridDensity::uniform(&Rect::new(0.1 * i as f64, 0.0, 0.5 + 0.1 * i as f64, 1.0), 1.0).unwrap()))
            .collect();
        let div = divide_four_walls(&ag, &cake).unwrap();
        let text = serde_json::to_string_pretty(&division_to_json(&div, &cake, PieceFamily::Squares)).unwrap();
        let doc = division_from_json(&parse(&text).unwrap()).unwrap();
        assert_eq!(doc.cake, cake);
        assert_eq!(doc.division.allocation, div.allocation);
        assert_eq!(doc.division.report.queries, div.report.queries);
        verify(&doc.division, &ag, &doc.cake, doc.family, &Tolerances::default()).unwrap();
    }
}
