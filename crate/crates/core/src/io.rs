//! JSON file formats.
//!
//! All coordinates travel as strings — "p/q" fractions or exact decimal
//! strings — and parse back to the same rationals, so exactness survives
//! serialization and files can be hand-edited. Emission uses the canonical
//! "p" / "p/q" form.
//!
//! Instance: `{"d": int, "k": int, "sets": [[[coord, ...], ...], ...]}`.
//! Certificate: `{"bipartitions": [[[idx...],[idx...]], ...],
//! "L_basis": [[coord; d]; d−k] (column-major), "p": [coord; d−k],
//! "weights": [[[w...],[w...]], ...], "residual": number}`.
//! Points file (radon subcommand): `{"points": [[coord, ...], ...]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::RatMat;
use crate::scalar::{format_rat, parse_rat, Rat};
use crate::solver::{Bipartition, Certificate, Instance, SetSplit};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid data: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse(e.to_string())
    }
}

impl From<crate::error::GeomError> for IoError {
    fn from(e: crate::error::GeomError) -> Self {
        IoError::Parse(e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    d: usize,
    k: usize,
    sets: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    bipartitions: Vec<(Vec<usize>, Vec<usize>)>,
    #[serde(rename = "L_basis")]
    l_basis: Vec<Vec<String>>,
    p: Vec<String>,
    weights: Vec<(Vec<String>, Vec<String>)>,
    residual: f64,
}

#[derive(Serialize, Deserialize)]
struct PointsWire {
    points: Vec<Vec<String>>,
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn rats(v: &[String]) -> Result<Vec<Rat>, IoError> {
    v.iter().map(|s| Ok(parse_rat(s)?)).collect()
}

pub fn instance_to_json(instance: &Instance) -> String {
    let wire = InstanceWire {
        d: instance.d(),
        k: instance.k(),
        sets: instance
            .sets()
            .iter()
            .map(|set| set.iter().map(|p| strings(p)).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("serializable") + "\n"
}

pub fn instance_from_json(text: &str) -> Result<Instance, IoError> {
    let wire: InstanceWire = serde_json::from_str(text)?;
    let sets = wire
        .sets
        .iter()
        .map(|set| set.iter().map(|p| rats(p)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Instance::new(wire.d, wire.k, sets).map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    let wire = CertificateWire {
        bipartitions: cert
            .bipartitions
            .splits
            .iter()
            .map(|s| (s.first.clone(), s.second.clone()))
            .collect(),
        l_basis: cert
            .l_basis
            .columns()
            .iter()
            .map(|c| strings(c))
            .collect(),
        p: strings(&cert.common_point),
        weights: cert
            .weights
            .iter()
            .map(|(a, b)| (strings(a), strings(b)))
            .collect(),
        residual: cert.residual,
    };
    serde_json::to_string_pretty(&wire).expect("serializable") + "\n"
}

pub fn certificate_from_json(text: &str) -> Result<Certificate, IoError> {
    let wire: CertificateWire = serde_json::from_str(text)?;
    if wire.l_basis.is_empty() {
        return Err(IoError::Invalid("empty L_basis".into()));
    }
    let cols = wire
        .l_basis
        .iter()
        .map(|c| rats(c))
        .collect::<Result<Vec<_>, _>>()?;
    let d = cols[0].len();
    if cols.iter().any(|c| c.len() != d) {
        return Err(IoError::Invalid("ragged L_basis columns".into()));
    }
    let splits = wire
        .bipartitions
        .into_iter()
        .map(|(a, b)| SetSplit { first: a, second: b })
        .collect();
    let weights = wire
        .weights
        .iter()
        .map(|(a, b)| Ok((rats(a)?, rats(b)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Certificate {
        bipartitions: Bipartition { splits },
        l_basis: RatMat::from_cols(&cols),
        common_point: rats(&wire.p)?,
        weights,
        residual: wire.residual,
    })
}

pub fn points_to_json(points: &[Vec<Rat>]) -> String {
    let wire = PointsWire {
        points: points.iter().map(|p| strings(p)).collect(),
    };
    serde_json::to_string_pretty(&wire).expect("serializable") + "\n"
}

pub fn points_from_json(text: &str) -> Result<Vec<Vec<Rat>>, IoError> {
    let wire: PointsWire = serde_json::from_str(text)?;
    if wire.points.is_empty() {
        return Err(IoError::Invalid("no points".into()));
    }
    let dim = wire.points[0].len();
    if dim == 0 {
        return Err(IoError::Invalid("zero-dimensional points".into()));
    }
    if wire.points.iter().any(|p| p.len() != dim) {
        return Err(IoError::Invalid("points of mixed dimension".into()));
    }
    wire.points.iter().map(|p| rats(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_gadget, gen_random, Distribution, GadgetSpec};
    use crate::scalar::{rat, rat_int};

    #[test]
    fn instance_round_trip_is_exact() {
        let instance = gen_random(3, 1, Distribution::UnitCube, 7).unwrap();
        let json = instance_to_json(&instance);
        let back = instance_from_json(&json).unwrap();
        assert_eq!(instance, back);
    }

    #[test]
    fn certificate_round_trip_is_exact() {
        let (_, cert) = gen_gadget(&GadgetSpec::standard(3, 2).unwrap()).unwrap();
        let json = certificate_to_json(&cert);
        let back = certificate_from_json(&json).unwrap();
        assert_eq!(cert, back);
        assert!(json.contains("L_basis"));
    }

    #[test]
    fn parses_decimal_and_fraction_coordinates() {
        let text = r#"{"d": 2, "k": 0, "sets": [[["0.5","1/3"],["1","0"],["0","1"],["2","2"]]]}"#;
        let inst = instance_from_json(text).unwrap();
        assert_eq!(inst.sets()[0][0][0], rat(1, 2));
        assert_eq!(inst.sets()[0][0][1], rat(1, 3));
    }

    #[test]
    fn rejects_malformed_instance() {
        assert!(instance_from_json("{").is_err());
        assert!(instance_from_json(r#"{"d": 2, "k": 5, "sets": []}"#).is_err());
        // Wrong cardinality: d=2, k=0 needs 4 points.
        assert!(
            instance_from_json(r#"{"d": 2, "k": 0, "sets": [[["0","0"]]]}"#).is_err()
        );
        // Unparseable coordinate.
        assert!(instance_from_json(
            r#"{"d": 2, "k": 0, "sets": [[["x","0"],["1","0"],["0","1"],["2","2"]]]}"#
        )
        .is_err());
    }

    #[test]
    fn points_file_round_trip() {
        let pts = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat(1, 2), rat(-3, 4)],
        ];
        let back = points_from_json(&points_to_json(&pts)).unwrap();
        assert_eq!(pts, back);
        assert!(points_from_json(r#"{"points": []}"#).is_err());
        assert!(points_from_json(r#"{"points": [["1"],["1","2"]]}"#).is_err());
    }
}
