//! JSON domain descriptions.

use super::{make_ball, make_ellipsoid, make_polydisc, Domain2, Extent, Shadow};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Extent as written in a domain file: a number, or `"inf"` / `null` for
/// an unbounded axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtentSpec {
    Value(f64),
    Text(String),
}

impl ExtentSpec {
    fn to_extent(&self) -> Result<Extent> {
        match self {
            ExtentSpec::Value(v) if v.is_infinite() => Ok(Extent::Unbounded),
            ExtentSpec::Value(v) => Ok(Extent::Finite(*v)),
            ExtentSpec::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" => Ok(Extent::Unbounded),
                other => Err(Error::Parse(format!("bad extent {other:?}"))),
            },
        }
    }
}

/// `{"type":"polydisc","r":[1,1]}`, `{"type":"ball","r":1}`,
/// `{"type":"ellipsoid","p":[0.5,0.5]}` or
/// `{"type":"profile","points":[[x,y],...],"xmax":..,"ymax":..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainSpec {
    Polydisc { r: [f64; 2] },
    Ball { r: f64 },
    Ellipsoid { p: [f64; 2] },
    Profile {
        points: Vec<[f64; 2]>,
        #[serde(default)]
        xmax: Option<ExtentSpec>,
        #[serde(default)]
        ymax: Option<ExtentSpec>,
    },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain2> {
        match self {
            DomainSpec::Polydisc { r } => make_polydisc(r[0], r[1]),
            DomainSpec::Ball { r } => make_ball(*r),
            DomainSpec::Ellipsoid { p } => make_ellipsoid(p[0], p[1]),
            DomainSpec::Profile { points, xmax, ymax } => {
                let pts = points.iter().map(|p| (p[0], p[1])).collect();
                let xmax = xmax.as_ref().map(ExtentSpec::to_extent).transpose()?;
                let ymax = ymax.as_ref().map(ExtentSpec::to_extent).transpose()?;
                Shadow::sampled(pts, xmax, ymax).map(Domain2::Reinhardt)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Domain2> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)?.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point2;

    #[test]
    fn parses_all_variants() {
        let d = DomainSpec::from_json(r#"{"type":"polydisc","r":[1.0,2.0]}"#).unwrap().build().unwrap();
        assert!(d.contains(&Point2::real(0.9, 1.9)));
        let d = DomainSpec::from_json(r#"{"type":"ball","r":1.0}"#).unwrap().build().unwrap();
        assert!(!d.contains(&Point2::real(0.8, 0.7)));
        let d = DomainSpec::from_json(r#"{"type":"ellipsoid","p":[0.5,0.5]}"#).unwrap().build().unwrap();
        assert!(d.contains(&Point2::real(0.4, 0.5)));
        let d = DomainSpec::from_json(r#"{"type":"profile","points":[[0,1],[1,0]],"xmax":1,"ymax":1}"#)
            .unwrap()
            .build()
            .unwrap();
        assert!(d.contains(&Point2::real(0.2, 0.7)));
        let d = DomainSpec::from_json(r#"{"type":"profile","points":[[1,0]],"xmax":1,"ymax":"inf"}"#)
            .unwrap()
            .build()
            .unwrap();
        assert!(!d.is_bounded());
    }

    #[test]
    fn rejects_malformed() {
        assert!(DomainSpec::from_json(r#"{"type":"cube"}"#).is_err());
        assert!(DomainSpec::from_json(r#"{"type":"ball","r":-1}"#).unwrap().build().is_err());
        assert!(DomainSpec::from_json(r#"{"type":"profile","points":[[0,1]],"xmax":"big"}"#)
            .unwrap()
            .build()
            .is_err());
    }
}
