//! JSON documents. Every document is an object whose `schema` field names
//! its kind and version; the remaining fields are the payload.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use rigidlab::numeric::{Backend, Biquad, Coord, FloatScalar, Point};
use rigidlab::phi::Orientation;
use rigidlab::plane::PointSet;

pub const POINTSET: &str = "rigidlab/pointset/v1";
pub const RELATION: &str = "rigidlab/relation/v1";
pub const ORIENTATION: &str = "rigidlab/orientation/v1";
pub const PHI: &str = "rigidlab/phi/v1";
pub const HOMS: &str = "rigidlab/homs/v1";
pub const RIGIDITY: &str = "rigidlab/rigidity/v1";
pub const CERTIFICATE: &str = "rigidlab/certificate/v1";
pub const WITNESS: &str = "rigidlab/witness/v1";
pub const MIN_WITNESS: &str = "rigidlab/min-witness/v1";
pub const PRODUCT: &str = "rigidlab/product/v1";
pub const VERIFY: &str = "rigidlab/verify/v1";
pub const CRITERION: &str = "rigidlab/criterion/v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected a {expected} document, found {found}")]
    Schema { expected: String, found: String },
    #[error("document payload must be a JSON object")]
    NotObject,
    #[error("{0}")]
    Invalid(String),
}

/// Renders `body` (which must serialize to an object) with its schema tag.
/// Keys come out sorted, so equal payloads give equal bytes.
pub fn to_document<T: Serialize>(schema: &str, body: &T) -> Result<String, IoError> {
    let Value::Object(mut map) = serde_json::to_value(body)? else {
        return Err(IoError::NotObject);
    };
    map.insert("schema".into(), Value::String(schema.into()));
    let mut s = serde_json::to_string_pretty(&Value::Object(map))?;
    s.push('\n');
    Ok(s)
}

/// Parses a document, checks its schema tag and returns the payload.
pub fn from_document<T: DeserializeOwned>(schema: &str, text: &str) -> Result<T, IoError> {
    let Value::Object(mut map) = serde_json::from_str(text)? else {
        return Err(IoError::NotObject);
    };
    let found = match map.remove("schema") {
        Some(Value::String(s)) => s,
        Some(other) => other.to_string(),
        None => "no schema".into(),
    };
    if found != schema {
        return Err(IoError::Schema { expected: schema.into(), found });
    }
    Ok(serde_json::from_value(Value::Object(map))?)
}

/// The schema tag of a document, if it has one.
pub fn schema_of(text: &str) -> Option<String> {
    let v: Value = serde_json::from_str(text).ok()?;
    v.get("schema")?.as_str().map(str::to_string)
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.into(), source })
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    use std::io::Write;
    let err = |source| IoError::File { path: path.into(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
struct PointsBody<C> {
    backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    points: Vec<Point<C>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<(usize, usize)>>,
}

fn tolerance_of<C: Coord>(ps: &PointSet<C>) -> Option<f64> {
    (C::BACKEND == Backend::Float).then(|| ps.iter().map(|p| p.x.tolerance().max(p.y.tolerance())).fold(0.0, f64::max))
}

/// A point set read from disk, on whichever backend the file names.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoints {
    Exact(PointSet<Biquad>),
    Float(PointSet<FloatScalar>),
}

impl AnyPoints {
    pub fn len(&self) -> usize {
        match self {
            AnyPoints::Exact(p) => p.len(),
            AnyPoints::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn pointset_document<C: Coord>(ps: &PointSet<C>) -> Result<String, IoError> {
    let body = PointsBody { backend: C::BACKEND, tolerance: tolerance_of(ps), points: ps.points().to_vec(), pairs: None };
    to_document(POINTSET, &body)
}

fn points_from<C: Coord>(body: PointsBody<C>) -> Result<PointSet<C>, IoError> {
    let tau = body.tolerance.unwrap_or(rigidlab::numeric::DEFAULT_TOLERANCE);
    let n = body.points.len();
    let ps = PointSet::from_points(body.points.into_iter().map(|p| p.with_tolerance(tau)));
    if ps.len() != n {
        return Err(IoError::Invalid(format!("{} duplicate points", n - ps.len())));
    }
    Ok(ps)
}

type Pairs = Vec<(usize, usize)>;

fn read_points(schema: &str, text: &str) -> Result<(AnyPoints, Option<Pairs>), IoError> {
    let raw: Value = from_document(schema, text)?;
    let backend: Backend = serde_json::from_value(raw.get("backend").cloned().unwrap_or(Value::Null))?;
    Ok(match backend {
        Backend::Exact => {
            let mut body: PointsBody<Biquad> = serde_json::from_value(raw)?;
            let pairs = body.pairs.take();
            (AnyPoints::Exact(points_from(body)?), pairs)
        }
        Backend::Float => {
            let mut body: PointsBody<FloatScalar> = serde_json::from_value(raw)?;
            let pairs = body.pairs.take();
            (AnyPoints::Float(points_from(body)?), pairs)
        }
    })
}

pub fn read_pointset(text: &str) -> Result<AnyPoints, IoError> {
    Ok(read_points(POINTSET, text)?.0)
}

pub fn orientation_document<C: Coord>(o: &Orientation<C>) -> Result<String, IoError> {
    let body = PointsBody {
        backend: C::BACKEND,
        tolerance: tolerance_of(o.base()),
        points: o.base().points().to_vec(),
        pairs: Some(o.pairs().iter().copied().collect()),
    };
    to_document(ORIENTATION, &body)
}

/// An orientation read from disk, checked against the membership rules.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyOrientation {
    Exact(Orientation<Biquad>),
    Float(Orientation<FloatScalar>),
}

pub fn read_orientation(text: &str) -> Result<AnyOrientation, IoError> {
    let (pts, pairs) = read_points(ORIENTATION, text)?;
    let pairs = pairs.unwrap_or_default().into_iter().collect();
    let bad = |e: rigidlab::phi::PhiError| IoError::Invalid(e.to_string());
    Ok(match pts {
        AnyPoints::Exact(p) => AnyOrientation::Exact(Orientation::new(p, pairs).map_err(bad)?),
        AnyPoints::Float(p) => AnyOrientation::Float(Orientation::new(p, pairs).map_err(bad)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigidlab::phi::orientation_from_bits;
    use rigidlab::plane::lattice_ball;
    use rigidlab::relations::RelStruct;

    #[test]
    fn pointset_round_trip() {
        let b = lattice_ball::<Biquad>(1, true);
        let doc = pointset_document(&b).unwrap();
        assert_eq!(schema_of(&doc).as_deref(), Some(POINTSET));
        assert_eq!(read_pointset(&doc).unwrap(), AnyPoints::Exact(b.clone()));
        let f = b.to_float(1e-7);
        let AnyPoints::Float(back) = read_pointset(&pointset_document(&f).unwrap()).unwrap() else { panic!() };
        assert!(back.same_as(&f));
        assert_eq!(back[2].x.tol, 1e-7);
    }

    #[test]
    fn orientation_round_trip() {
        let b = lattice_ball::<Biquad>(1, true);
        let o = orientation_from_bits(&b, |k| k % 3 == 0).unwrap();
        let doc = orientation_document(&o).unwrap();
        assert_eq!(read_orientation(&doc).unwrap(), AnyOrientation::Exact(o));
    }

    #[test]
    fn relation_round_trip() {
        let r = RelStruct::directed_cycle(3);
        let doc = to_document(RELATION, &r).unwrap();
        assert_eq!(from_document::<RelStruct>(RELATION, &doc).unwrap(), r);
    }

    #[test]
    fn schema_mismatch_is_reported() {
        let doc = to_document(RELATION, &RelStruct::empty(1)).unwrap();
        assert!(matches!(read_pointset(&doc), Err(IoError::Schema { .. })));
        assert!(matches!(from_document::<RelStruct>(RELATION, "[1]"), Err(IoError::NotObject)));
        let bad_pair = to_document(RELATION, &RelStruct::new(2, [(0, 1)]).unwrap()).unwrap().replace("\"n\": 2", "\"n\": 1");
        assert!(from_document::<RelStruct>(RELATION, &bad_pair).is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
