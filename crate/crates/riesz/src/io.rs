//! JSON, Matrix Market and CSV formats for elements, spectral sets and certificates.
//!
//! Complex numbers are `[re, im]` pairs everywhere.

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::algebra_core::{AlgebraElement, Base, BlockElement, BlockLayout, BlockSpec, DiagonalElement, Lane, Poly, Rational, Region, TailRule, TailShape};
use crate::error::{Error, Result};
use crate::gdr::GdrCertificate;
use crate::spectra::set::{PointKind, PointSequence, SpectralPoint};
use crate::spectra::SpectralSet;
use crate::C64;

/// Samples per region and per sequence in plot CSV output.
const PLOT_REGION_SAMPLES: usize = 256;
const PLOT_SEQUENCE_SAMPLES: u64 = 64;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn complex_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|z| complex_json(*z)).collect())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("`{what}` must be a number")))
}

fn complex(v: &Value, what: &str) -> Result<C64> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(C64::new(number(&a[0], what)?, number(&a[1], what)?)),
        Value::Number(_) => Ok(C64::new(number(v, what)?, 0.0)),
        _ => Err(parse_err(format!("`{what}` must be [re, im]"))),
    }
}

fn complex_vec(v: &Value, what: &str) -> Result<Vec<C64>> {
    v.as_array().ok_or_else(|| parse_err(format!("`{what}` must be a list")))?.iter().map(|z| complex(z, what)).collect()
}

fn kind(v: &Value) -> Result<&str> {
    field(v, "kind")?.as_str().ok_or_else(|| parse_err("`kind` must be a string"))
}

fn poly_json(p: &Poly) -> Value {
    complex_list(p.coeffs())
}

pub fn region_json(r: &Region) -> Value {
    match r {
        Region::Point(z) => json!({"kind": "point", "z": complex_json(*z)}),
        Region::Segment(a, b) => json!({"kind": "segment", "a": complex_json(*a), "b": complex_json(*b)}),
        Region::Circle { center, radius } => json!({"kind": "circle", "center": complex_json(*center), "radius": radius}),
        Region::Disc { center, radius } => json!({"kind": "disc", "center": complex_json(*center), "radius": radius}),
        Region::Image { base, map } => json!({"kind": "image", "base": region_json(base), "num": poly_json(map.num()), "den": poly_json(map.den())}),
    }
}

fn positive(v: &Value, what: &str) -> Result<f64> {
    let r = number(v, what)?;
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(parse_err(format!("`{what}` must be positive")))
    }
}

pub fn parse_region(v: &Value) -> Result<Region> {
    Ok(match kind(v)? {
        "point" => Region::Point(complex(field(v, "z")?, "z")?),
        "segment" => Region::Segment(complex(field(v, "a")?, "a")?, complex(field(v, "b")?, "b")?),
        "circle" => Region::circle(complex(field(v, "center")?, "center")?, positive(field(v, "radius")?, "radius")?),
        "disc" => Region::disc(complex(field(v, "center")?, "center")?, positive(field(v, "radius")?, "radius")?),
        "image" => parse_region(field(v, "base")?)?.map(&parse_rational(v)?),
        k => return Err(parse_err(format!("unknown region kind `{k}`"))),
    })
}

fn parse_rational(v: &Value) -> Result<Rational> {
    let num = Poly::new(complex_vec(field(v, "num")?, "num")?);
    let den = match v.get("den") {
        Some(d) => Poly::new(complex_vec(d, "den")?),
        None => Poly::constant(C64::new(1.0, 0.0)),
    };
    if den.is_zero() {
        return Err(parse_err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn base_json(b: &Base) -> Value {
    match b {
        Base::Constant => json!({"kind": "constant"}),
        Base::Geometric { ratio } => json!({"kind": "geometric", "ratio": complex_json(*ratio)}),
        Base::Power { exponent } => json!({"kind": "power", "exponent": exponent}),
        Base::Dense { region, seed, conj } => json!({"kind": "dense", "region": region_json(region), "seed": seed, "conj": conj}),
    }
}

fn parse_base(v: &Value) -> Result<Base> {
    Ok(match kind(v)? {
        "constant" => Base::Constant,
        "geometric" => {
            let ratio = complex(field(v, "ratio")?, "ratio")?;
            if !(ratio.norm() < 1.0) {
                return Err(parse_err("geometric ratio must satisfy |ratio| < 1"));
            }
            Base::Geometric { ratio }
        }
        "power" => Base::Power { exponent: positive(field(v, "exponent")?, "exponent")? },
        "dense" => Base::Dense {
            region: parse_region(field(v, "region")?)?,
            seed: field(v, "seed")?.as_u64().ok_or_else(|| parse_err("`seed` must be a non-negative integer"))?,
            conj: v.get("conj").and_then(Value::as_bool).unwrap_or(false),
        },
        k => return Err(parse_err(format!("unknown base kind `{k}`"))),
    })
}

pub fn tail_json(t: &TailRule) -> Value {
    match t.shape() {
        TailShape::Zero => json!({"kind": "zero"}),
        TailShape::Constant(c) => json!({"kind": "constant", "c": complex_json(c)}),
        TailShape::Geometric { c, alpha, ratio } => {
            json!({"kind": "geometric", "c": complex_json(c), "alpha": complex_json(alpha), "ratio": complex_json(ratio)})
        }
        TailShape::Power { c, alpha, exponent } => {
            json!({"kind": "power", "c": complex_json(c), "alpha": complex_json(alpha), "exponent": exponent})
        }
        TailShape::Dense { region, seed } => json!({"kind": "dense", "region": region_json(&region), "seed": seed}),
        TailShape::Rational => json!({
            "kind": "rational",
            "base": base_json(t.base()),
            "num": poly_json(t.map().num()),
            "den": poly_json(t.map().den()),
        }),
    }
}

pub fn parse_tail(v: &Value) -> Result<TailRule> {
    let opt_c = |key: &str| -> Result<C64> { v.get(key).map_or(Ok(C64::new(0.0, 0.0)), |z| complex(z, key)) };
    Ok(match kind(v)? {
        "zero" => TailRule::zero(),
        "constant" => TailRule::constant(complex(field(v, "c")?, "c")?),
        "geometric" => TailRule::geometric(opt_c("c")?, complex(field(v, "alpha")?, "alpha")?, complex(field(v, "ratio")?, "ratio")?)
            .map_err(|e| parse_err(e.to_string()))?,
        "power" => TailRule::power(opt_c("c")?, complex(field(v, "alpha")?, "alpha")?, number(field(v, "exponent")?, "exponent")?)
            .map_err(|e| parse_err(e.to_string()))?,
        "dense" => TailRule::dense(
            parse_region(field(v, "region")?)?,
            field(v, "seed")?.as_u64().ok_or_else(|| parse_err("`seed` must be a non-negative integer"))?,
        ),
        "rational" => TailRule::from_parts(parse_base(field(v, "base")?)?, parse_rational(v)?),
        k => return Err(parse_err(format!("unknown tail kind `{k}`"))),
    })
}

fn matrix_json(m: &DMatrix<C64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

fn parse_matrix(v: &Value, dim: usize) -> Result<DMatrix<C64>> {
    let rows = v.as_array().ok_or_else(|| parse_err("block must be a list of rows"))?;
    if rows.len() != dim {
        return Err(parse_err(format!("block has {} rows, layout says {dim}", rows.len())));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = complex_vec(row, "block entry")?;
        if row.len() != dim {
            return Err(parse_err(format!("row {i} has {} entries, layout says {dim}", row.len())));
        }
        for (j, z) in row.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m)
}

pub fn element_json(a: &AlgebraElement) -> Value {
    match a {
        AlgebraElement::Block(b) => json!({
            "backend": "block",
            "layout": b.layout().blocks().iter().map(|s| json!({"dim": s.dim, "ideal": s.ideal})).collect::<Vec<_>>(),
            "blocks": b.blocks().iter().map(matrix_json).collect::<Vec<_>>(),
        }),
        AlgebraElement::Diagonal(d) => json!({
            "backend": "diagonal",
            "lanes": d.lanes().iter().map(|l| json!({"prefix": complex_list(&l.prefix), "tail": tail_json(&l.tail)})).collect::<Vec<_>>(),
        }),
    }
}

pub fn parse_element(v: &Value) -> Result<AlgebraElement> {
    let backend = field(v, "backend")?.as_str().ok_or_else(|| parse_err("`backend` must be a string"))?;
    let invalid = |e: Error| parse_err(e.to_string());
    match backend {
        "block" => {
            let layout = field(v, "layout")?.as_array().ok_or_else(|| parse_err("`layout` must be a list"))?;
            let specs = layout
                .iter()
                .map(|s| {
                    let dim = field(s, "dim")?.as_u64().ok_or_else(|| parse_err("`dim` must be a positive integer"))? as usize;
                    let ideal = field(s, "ideal")?.as_bool().ok_or_else(|| parse_err("`ideal` must be a boolean"))?;
                    Ok(BlockSpec { dim, ideal })
                })
                .collect::<Result<Vec<_>>>()?;
            let layout = BlockLayout::new(specs).map_err(invalid)?;
            let blocks = field(v, "blocks")?.as_array().ok_or_else(|| parse_err("`blocks` must be a list"))?;
            if blocks.len() != layout.len() {
                return Err(parse_err(format!("{} blocks for a layout of {}", blocks.len(), layout.len())));
            }
            let mats = blocks.iter().zip(layout.blocks()).map(|(m, s)| parse_matrix(m, s.dim)).collect::<Result<Vec<_>>>()?;
            Ok(BlockElement::new(layout, mats).map_err(invalid)?.into())
        }
        "diagonal" => {
            let lanes = field(v, "lanes")?.as_array().ok_or_else(|| parse_err("`lanes` must be a list"))?;
            let lanes = lanes
                .iter()
                .map(|l| {
                    let prefix = match l.get("prefix") {
                        Some(p) => complex_vec(p, "prefix")?,
                        None => Vec::new(),
                    };
                    Ok(Lane::new(prefix, parse_tail(field(l, "tail")?)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(DiagonalElement::new(lanes).map_err(invalid)?.into())
        }
        other => Err(parse_err(format!("unknown backend `{other}`"))),
    }
}

/// Single non-ideal block from a Matrix Market `array` or `coordinate` file (real or complex).
pub fn parse_matrix_market(text: &str) -> Result<AlgebraElement> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty Matrix Market file"))?.to_ascii_lowercase();
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() < 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err("missing %%MatrixMarket matrix header"));
    }
    let (format, field_kind, symmetry) = (words[2], words[3], words[4]);
    let is_complex = match field_kind {
        "complex" => true,
        "real" | "integer" => false,
        f => return Err(parse_err(format!("unsupported field `{f}`"))),
    };
    if symmetry != "general" {
        return Err(parse_err(format!("unsupported symmetry `{symmetry}`")));
    }
    let mut body = lines.filter(|l| !l.starts_with('%'));
    let size: Vec<usize> = body
        .next()
        .ok_or_else(|| parse_err("missing size line"))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(format!("bad size entry `{t}`"))))
        .collect::<Result<_>>()?;
    let nums = |line: &str| -> Result<Vec<f64>> { line.split_whitespace().map(|t| t.parse().map_err(|_| parse_err(format!("bad number `{t}`")))).collect() };
    let value = |v: &[f64]| if is_complex { C64::new(v[0], v[1]) } else { C64::new(v[0], 0.0) };
    let width = if is_complex { 2 } else { 1 };
    let (rows, cols) = match size.as_slice() {
        [r, c] | [r, c, _] => (*r, *c),
        _ => return Err(parse_err("size line needs rows and columns")),
    };
    if rows != cols || rows == 0 {
        return Err(parse_err(format!("matrix must be square and nonempty, got {rows}x{cols}")));
    }
    let mut m = DMatrix::zeros(rows, cols);
    match format {
        "array" => {
            let mut k = 0;
            for line in body {
                let v = nums(line)?;
                if v.len() != width {
                    return Err(parse_err(format!("array entry `{line}` needs {width} numbers")));
                }
                if k >= rows * cols {
                    return Err(parse_err("too many array entries"));
                }
                m[(k % rows, k / rows)] = value(&v);
                k += 1;
            }
            if k != rows * cols {
                return Err(parse_err(format!("expected {} entries, found {k}", rows * cols)));
            }
        }
        "coordinate" => {
            for line in body {
                let v = nums(line)?;
                if v.len() != 2 + width {
                    return Err(parse_err(format!("coordinate entry `{line}` needs {} numbers", 2 + width)));
                }
                let (i, j) = (v[0] as usize, v[1] as usize);
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(format!("entry ({i}, {j}) out of range")));
                }
                m[(i - 1, j - 1)] = value(&v[2..]);
            }
        }
        f => return Err(parse_err(format!("unsupported format `{f}`"))),
    }
    let layout = BlockLayout::new(vec![BlockSpec { dim: rows, ideal: false }]).map_err(|e| parse_err(e.to_string()))?;
    Ok(BlockElement::new(layout, vec![m]).map_err(|e| parse_err(e.to_string()))?.into())
}

/// Element from file contents: JSON, or Matrix Market when the text starts with `%%MatrixMarket`.
pub fn parse_element_text(text: &str) -> Result<AlgebraElement> {
    if text.trim_start().to_ascii_lowercase().starts_with("%%matrixmarket") {
        return parse_matrix_market(text);
    }
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    parse_element(&v)
}

fn point_json(p: &SpectralPoint) -> Value {
    let kind = match p.kind {
        PointKind::Isolated => "isolated",
        PointKind::Embedded => "embedded",
    };
    json!({"z": complex_json(p.z), "kind": kind})
}

pub fn spectral_set_json(s: &SpectralSet) -> Value {
    let mut m = Map::new();
    m.insert("points".into(), Value::Array(s.points.iter().map(point_json).collect()));
    m.insert("regions".into(), Value::Array(s.regions.iter().map(region_json).collect()));
    m.insert(
        "sequences".into(),
        Value::Array(s.sequences.iter().map(|q| json!({"tail": tail_json(&q.rule), "start": q.start, "limit": complex_json(q.limit())})).collect()),
    );
    Value::Object(m)
}

pub fn parse_spectral_set(v: &Value) -> Result<SpectralSet> {
    let list = |key: &str| -> Result<Vec<Value>> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(a)) => Ok(a.clone()),
            Some(_) => Err(parse_err(format!("`{key}` must be a list"))),
        }
    };
    let points = list("points")?
        .iter()
        .map(|p| {
            let kind = match p.get("kind").and_then(Value::as_str).unwrap_or("isolated") {
                "isolated" => PointKind::Isolated,
                "embedded" => PointKind::Embedded,
                k => return Err(parse_err(format!("unknown point kind `{k}`"))),
            };
            Ok(SpectralPoint { z: complex(field(p, "z")?, "z")?, kind })
        })
        .collect::<Result<Vec<_>>>()?;
    let regions = list("regions")?.iter().map(parse_region).collect::<Result<Vec<_>>>()?;
    let sequences = list("sequences")?
        .iter()
        .map(|q| {
            let rule = parse_tail(field(q, "tail")?)?;
            if !rule.is_sequence() {
                return Err(parse_err("sequence tails must be geometric or power"));
            }
            let start = field(q, "start")?.as_u64().ok_or_else(|| parse_err("`start` must be a positive integer"))?.max(1);
            Ok(PointSequence { rule, start })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSet { points, regions, sequences })
}

/// Certificate residuals and the idempotent `p = 1 - ab`; the inverse itself is written separately.
pub fn certificate_json(c: &GdrCertificate) -> Value {
    json!({
        "idempotent": element_json(&c.idempotent),
        "idempotent_norm": c.idempotent.norm(),
        "residual_comm": c.residual_comm,
        "residual_inner": c.residual_inner,
        "riesz_defect": c.riesz_defect,
        "valid": c.valid,
        "window_n": c.window_n,
        "xi": c.xi.map(complex_json),
    })
}

/// Plot rows `re,im,label` for labelled sets; regions and sequences are sampled.
pub fn plot_csv(sets: &[(&str, &SpectralSet)]) -> String {
    let mut out = String::from("re,im,label\n");
    for (label, set) in sets {
        for z in set.samples(PLOT_REGION_SAMPLES, PLOT_SEQUENCE_SAMPLES) {
            out.push_str(&format!("{},{},{label}\n", z.re, z.im));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn diagonal_round_trip() {
        let d: AlgebraElement = DiagonalElement::new(vec![
            Lane::new(vec![c(0.0), C64::new(1.0, 2.0)], TailRule::power(c(0.5), c(1.0), 2.0).unwrap()),
            Lane::new(vec![], TailRule::dense(Region::disc(c(2.0), 0.5), 4)),
            Lane::new(vec![], TailRule::geometric(c(1.0), c(0.2), c(0.5)).unwrap().reciprocal()),
        ])
        .unwrap()
        .into();
        let v = element_json(&d);
        assert_eq!(parse_element(&v).unwrap(), d);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(parse_element_text(&text).unwrap(), d);
    }

    #[test]
    fn block_round_trip() {
        let layout = BlockLayout::new(vec![BlockSpec { dim: 2, ideal: true }, BlockSpec { dim: 1, ideal: false }]).unwrap();
        let b: AlgebraElement = BlockElement::new(
            layout,
            vec![DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), C64::new(0.0, -3.5), c(0.0)]), DMatrix::from_element(1, 1, c(2.0))],
        )
        .unwrap()
        .into();
        assert_eq!(parse_element(&element_json(&b)).unwrap(), b);
    }

    #[test]
    fn matrix_market_array_and_coordinate() {
        let arr = "%%MatrixMarket matrix array complex general\n% comment\n2 2\n1 0\n0 0\n2 0\n0 1\n";
        let a = parse_matrix_market(arr).unwrap();
        let m = &a.as_block().unwrap().blocks()[0];
        assert_eq!(m[(0, 1)], c(2.0));
        assert_eq!(m[(1, 1)], C64::new(0.0, 1.0));
        let coo = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 2\n2 2 5\n";
        let b = parse_matrix_market(coo).unwrap();
        assert_eq!(b.as_block().unwrap().blocks()[0][(1, 1)], c(5.0));
        assert!(matches!(parse_matrix_market("%%MatrixMarket matrix array complex general\n2 3\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for text in [
            "{",
            r#"{"backend":"tensor"}"#,
            r#"{"backend":"diagonal","lanes":[{"tail":{"kind":"geometric","alpha":[1,0],"ratio":[2,0]}}]}"#,
            r#"{"backend":"block","layout":[{"dim":2,"ideal":false}],"blocks":[[[[1,0]]]]}"#,
        ] {
            assert!(matches!(parse_element_text(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn spectral_set_round_trip() {
        let s = SpectralSet {
            points: vec![SpectralPoint { z: c(0.0), kind: PointKind::Isolated }],
            regions: vec![Region::circle(c(1.0), 1.0)],
            sequences: vec![PointSequence { rule: TailRule::power(c(0.0), c(1.0), 1.0).unwrap(), start: 3 }],
        };
        assert_eq!(parse_spectral_set(&spectral_set_json(&s)).unwrap(), s);
    }

    #[test]
    fn plot_rows_are_labelled() {
        let s = SpectralSet::from_points(&[c(0.0), c(2.0)], 1e-8);
        let csv = plot_csv(&[("sigma", &s)]);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().ends_with(",sigma"));
    }
}
