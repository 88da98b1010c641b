//! JSON and CSV formats for clouds, solutions and covers.

use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::clustering::ClusteringSolution;
use crate::cover::CoverSolution;
use crate::error::{Error, Result};
use crate::geometry::{AffineFlat, Hyperplane, PointRecord, WeightedPointCloud};
use crate::scalar::{Rational, Scalar, ScalarMode};

/// A cloud whose scalar regime is only known after reading it.
#[derive(Debug, Clone, PartialEq)]
pub enum DynCloud {
    Rational(WeightedPointCloud<Rational>),
    Float(WeightedPointCloud<f64>),
}

impl DynCloud {
    pub fn mode(&self) -> ScalarMode {
        match self {
            DynCloud::Rational(_) => ScalarMode::Rational,
            DynCloud::Float(_) => ScalarMode::Float,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DynCloud::Rational(c) => c.dim(),
            DynCloud::Float(c) => c.dim(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DynCloud::Rational(c) => cloud_to_json(c),
            DynCloud::Float(c) => cloud_to_json(c),
        }
    }

    pub fn into_rational(self) -> Result<WeightedPointCloud<Rational>> {
        match self {
            DynCloud::Rational(c) => Ok(c),
            DynCloud::Float(_) => Err(Error::ModeMismatch { expected: ScalarMode::Rational, found: ScalarMode::Float }),
        }
    }

    /// Float view; rational coordinates are rounded to the nearest double.
    pub fn to_float(&self) -> WeightedPointCloud<f64> {
        match self {
            DynCloud::Float(c) => c.clone(),
            DynCloud::Rational(c) => {
                let records = c
                    .records()
                    .iter()
                    .map(|r| PointRecord {
                        coords: r.coords.iter().map(|q| num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)).collect(),
                        mult: r.mult.clone(),
                    })
                    .collect();
                WeightedPointCloud::new(c.dim(), records).expect("same shape")
            }
        }
    }
}

fn mult_json(m: &BigUint) -> Value {
    serde_json::from_str::<serde_json::Number>(&m.to_string()).map(Value::Number).expect("integer literal")
}

fn parse_mult(v: &Value) -> Result<BigUint> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(Error::Parse(format!("bad multiplicity {other}"))),
    };
    BigUint::from_str(&text).map_err(|_| Error::Parse(format!("bad multiplicity {text:?}")))
}

pub fn vector_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn cloud_to_json<S: Scalar>(cloud: &WeightedPointCloud<S>) -> Value {
    let points: Vec<Value> = cloud
        .records()
        .iter()
        .map(|r| json!({"coords": vector_json(&r.coords), "mult": mult_json(&r.mult)}))
        .collect();
    json!({"dim": cloud.dim(), "scalar": S::MODE.as_str(), "points": points})
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn usize_field(obj: &Value, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("{key} must be a nonnegative integer")))
}

pub fn parse_vector<S: Scalar>(v: &Value) -> Result<Vec<S>> {
    array(v, "vector")?.iter().map(S::from_json).collect()
}

fn typed_cloud<S: Scalar>(dim: usize, points: &[Value]) -> Result<WeightedPointCloud<S>> {
    let records = points
        .iter()
        .map(|p| {
            let coords = parse_vector::<S>(field(p, "coords")?)?;
            let mult = match p.get("mult") {
                Some(m) => parse_mult(m)?,
                None => BigUint::from(1u32),
            };
            Ok(PointRecord { coords, mult })
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedPointCloud::new(dim, records)
}

pub fn cloud_from_json(v: &Value) -> Result<DynCloud> {
    let dim = usize_field(v, "dim")?;
    let mode: ScalarMode = field(v, "scalar")?
        .as_str()
        .ok_or_else(|| Error::Parse("scalar must be a string".into()))?
        .parse()?;
    let points = array(field(v, "points")?, "points")?;
    Ok(match mode {
        ScalarMode::Rational => DynCloud::Rational(typed_cloud(dim, points)?),
        ScalarMode::Float => DynCloud::Float(typed_cloud(dim, points)?),
    })
}

/// Float CSV: one point per row. A header row is optional; a last column
/// named `mult` holds multiplicities.
pub fn cloud_from_csv(text: &str) -> Result<WeightedPointCloud<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for row in reader.records() {
        rows.push(row.map_err(|e| Error::Parse(e.to_string()))?);
    }
    let mut has_mult = false;
    if let Some(first) = rows.first() {
        if first.iter().any(|f| f.parse::<f64>().is_err()) {
            has_mult = first.iter().next_back() == Some("mult");
            rows.remove(0);
        }
    }
    let width = rows.first().map_or(0, |r| r.len());
    let dim = if has_mult { width.saturating_sub(1) } else { width };
    let records = rows
        .iter()
        .map(|row| {
            if row.len() != width {
                return Err(Error::DimensionMismatch { expected: width, found: row.len() });
            }
            let coords = row
                .iter()
                .take(dim)
                .map(|f| f.parse::<f64>().map_err(|_| Error::Parse(format!("bad float {f:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let mult = if has_mult {
                BigUint::from_str(&row[dim]).map_err(|_| Error::Parse(format!("bad multiplicity {:?}", &row[dim])))?
            } else {
                BigUint::from(1u32)
            };
            Ok(PointRecord { coords, mult })
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedPointCloud::new(dim.max(1), records)
}

/// JSON if the text starts with `{`, CSV otherwise.
pub fn parse_cloud(text: &str) -> Result<DynCloud> {
    if text.trim_start().starts_with('{') {
        cloud_from_json(&serde_json::from_str(text)?)
    } else {
        cloud_from_csv(text).map(DynCloud::Float)
    }
}

pub fn flat_to_json<S: Scalar>(flat: &AffineFlat<S>) -> Value {
    json!({
        "basis": Value::Array(flat.basis().iter().map(|c| vector_json(c)).collect()),
        "offset": vector_json(flat.offset()),
    })
}

pub fn flat_from_json<S: Scalar>(v: &Value, rel_tol: f64) -> Result<AffineFlat<S>> {
    let basis = array(field(v, "basis")?, "basis")?.iter().map(parse_vector).collect::<Result<Vec<_>>>()?;
    let offset = parse_vector(field(v, "offset")?)?;
    AffineFlat::new(basis, offset, rel_tol)
}

pub fn solution_to_json<S: Scalar>(solution: &ClusteringSolution<S>, k: usize, r: usize) -> Value {
    json!({
        "k": k,
        "r": r,
        "cost": solution.cost.to_json(),
        "flats": Value::Array(solution.flats.iter().map(flat_to_json).collect()),
        "assignment": solution.assignment,
    })
}

pub fn solution_from_json<S: Scalar>(v: &Value, rel_tol: f64) -> Result<ClusteringSolution<S>> {
    let flats = array(field(v, "flats")?, "flats")?
        .iter()
        .map(|f| flat_from_json(f, rel_tol))
        .collect::<Result<Vec<_>>>()?;
    let assignment = array(field(v, "assignment")?, "assignment")?
        .iter()
        .map(|a| a.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("bad assignment".into())))
        .collect::<Result<Vec<_>>>()?;
    let cost = S::from_json(field(v, "cost")?)?;
    Ok(ClusteringSolution { flats, assignment, cost })
}

pub fn hyperplanes_to_json(hyperplanes: &[Hyperplane]) -> Value {
    Value::Array(hyperplanes.iter().map(|h| json!(h.to_strings())).collect())
}

pub fn cover_to_json(solution: &CoverSolution) -> Value {
    json!({"k": solution.hyperplanes.len(), "hyperplanes": hyperplanes_to_json(&solution.hyperplanes)})
}

/// Accepts either a cover document or a bare list of coefficient lists.
pub fn hyperplanes_from_json(v: &Value) -> Result<Vec<Hyperplane>> {
    let list = match v {
        Value::Object(_) => field(v, "hyperplanes")?,
        other => other,
    };
    array(list, "hyperplanes")?
        .iter()
        .map(|h| {
            let texts = array(h, "hyperplane")?
                .iter()
                .map(|c| match c {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(Error::Parse(format!("bad coefficient {other}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Hyperplane::parse(&texts)
        })
        .collect()
}

/// Deterministic pretty printing with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn rational_cloud_round_trip() {
        let cloud = WeightedPointCloud::new(
            2,
            vec![PointRecord::new(vec![frac(3, 2), int(-7)], 4u32), PointRecord::single(vec![int(0), int(1)])],
        )
        .unwrap();
        let v = cloud_to_json(&cloud);
        assert_eq!(v["points"][0]["coords"], json!(["3/2", "-7"]));
        assert_eq!(v["scalar"], "rational");
        assert_eq!(cloud_from_json(&v).unwrap(), DynCloud::Rational(cloud));
    }

    #[test]
    fn huge_multiplicities_survive() {
        let m = BigUint::from(10u32).pow(90);
        let cloud = WeightedPointCloud::new(1, vec![PointRecord::new(vec![int(1)], m.clone())]).unwrap();
        let text = serde_json::to_string(&cloud_to_json(&cloud)).unwrap();
        let back = parse_cloud(&text).unwrap().into_rational().unwrap();
        assert_eq!(back.records()[0].mult, m);
    }

    #[test]
    fn csv_with_and_without_header() {
        let plain = cloud_from_csv("1.5,2\n3,4\n").unwrap();
        assert_eq!(plain.dim(), 2);
        assert_eq!(plain.len(), 2);
        let weighted = cloud_from_csv("x,y,mult\n1,2,3\n").unwrap();
        assert_eq!(weighted.dim(), 2);
        assert_eq!(weighted.records()[0].mult, BigUint::from(3u32));
        assert!(cloud_from_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn float_cloud_and_mode_errors() {
        let v = json!({"dim": 1, "scalar": "float", "points": [{"coords": [0.5], "mult": 1}]});
        let c = cloud_from_json(&v).unwrap();
        assert_eq!(c.mode(), ScalarMode::Float);
        assert!(matches!(c.into_rational(), Err(Error::ModeMismatch { .. })));
    }

    #[test]
    fn hyperplane_lists_parse() {
        let v = json!({"k": 1, "hyperplanes": [["-1", "0", "1"]]});
        let hs = hyperplanes_from_json(&v).unwrap();
        assert_eq!(hs[0], Hyperplane::axis(2, 1, &int(1)).unwrap());
    }
}
