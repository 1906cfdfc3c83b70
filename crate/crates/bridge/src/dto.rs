//! JSON wire formats.
//!
//! Rationals serialize as `"numerator/denominator"` strings in lowest
//! terms with a positive denominator (zero is `"0/1"`), so documents
//! round-trip bit-exactly. Set indices are 1-based on the wire and shifted
//! to the crate-internal 0-based form at this boundary. Grid points appear
//! as plain integer vectors; the enclosing document carries the
//! resolution.
//!
//! Serialization is deterministic: field order is fixed by the structs,
//! entry lists are emitted in lexicographic order, and documents are
//! pretty-printed with a trailing newline.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use antipode_core::{
    BigInt, ConstructionError, CoverError, CoverKind, CoverSpec, CoverStats, CoverageReport,
    ExtendedCover, FaceAssignment, GeometryError, GridPoint, IndexSet, KkmReport,
    NondegeneracyReport, PipelineOutcome, PipelineReport, Provenance, Rational, SimplexPoint,
    StarCertificate, SweepRow, Violation,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("unknown cover kind {0:?}")]
    UnknownKind(String),
    #[error("cover kind {kind:?} requires field {field:?}")]
    MissingField { kind: &'static str, field: &'static str },
    #[error("set index {0} out of range (wire indices are 1-based)")]
    BadIndex(usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

pub fn rational_to_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational_from_str(text: &str) -> Result<Rational, FormatError> {
    let bad = || FormatError::BadRational(text.to_owned());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer.trim()).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom.trim()).map_err(|_| bad())?;
    if denom <= BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

fn simplex_to_wire(point: &SimplexPoint) -> Vec<String> {
    point.coords().iter().map(rational_to_string).collect()
}

fn simplex_from_wire(coords: &[String]) -> Result<SimplexPoint, FormatError> {
    let coords = coords
        .iter()
        .map(|c| rational_from_str(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimplexPoint::new(coords)?)
}

fn points_to_wire(points: &[GridPoint]) -> Vec<Vec<i64>> {
    points.iter().map(|p| p.k().to_vec()).collect()
}

fn indices_to_wire(set: IndexSet) -> Vec<usize> {
    set.iter().map(|i| i + 1).collect()
}

fn indices_from_wire(wire: &[usize]) -> Result<IndexSet, FormatError> {
    wire.iter()
        .map(|&i| match i {
            0 => Err(FormatError::BadIndex(0)),
            _ => Ok(i - 1),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Cover specs

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSpecDoc {
    pub dim: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extras: Option<Vec<ExtraDoc>>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<GridEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtraDoc {
    pub set: usize,
    pub face: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridEntryDoc {
    pub point: Vec<i64>,
    pub sets: Vec<usize>,
}

impl CoverSpecDoc {
    pub fn from_spec(spec: &CoverSpec) -> Self {
        let mut doc = CoverSpecDoc {
            dim: spec.dim,
            kind: String::new(),
            target: None,
            extras: None,
            n: None,
            entries: None,
            name: spec.name.clone(),
            seed: spec.seed,
        };
        match &spec.kind {
            CoverKind::Ratio { target } => {
                doc.kind = "ratio".into();
                doc.target = Some(simplex_to_wire(target));
            }
            CoverKind::DegenerateRatio { target, extras } => {
                doc.kind = "degenerate_ratio".into();
                doc.target = Some(simplex_to_wire(target));
                doc.extras = Some(
                    extras
                        .iter()
                        .map(|e| ExtraDoc {
                            set: e.set + 1,
                            face: e.face + 1,
                        })
                        .collect(),
                );
            }
            CoverKind::GridLabeling {
                resolution,
                entries,
            } => {
                doc.kind = "grid".into();
                doc.n = Some(*resolution);
                doc.entries = Some(
                    entries
                        .iter()
                        .map(|(p, s)| GridEntryDoc {
                            point: p.k().to_vec(),
                            sets: indices_to_wire(*s),
                        })
                        .collect(),
                );
            }
        }
        doc
    }

    pub fn into_spec(self) -> Result<CoverSpec, FormatError> {
        let kind = match self.kind.as_str() {
            "ratio" => {
                let target = self.target.as_deref().ok_or(FormatError::MissingField {
                    kind: "ratio",
                    field: "target",
                })?;
                CoverKind::Ratio {
                    target: simplex_from_wire(target)?,
                }
            }
            "degenerate_ratio" => {
                let target = self.target.as_deref().ok_or(FormatError::MissingField {
                    kind: "degenerate_ratio",
                    field: "target",
                })?;
                let extras = self
                    .extras
                    .unwrap_or_default()
                    .iter()
                    .map(|e| {
                        if e.set == 0 || e.face == 0 {
                            return Err(FormatError::BadIndex(0));
                        }
                        Ok(FaceAssignment {
                            set: e.set - 1,
                            face: e.face - 1,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                CoverKind::DegenerateRatio {
                    target: simplex_from_wire(target)?,
                    extras,
                }
            }
            "grid" => {
                let n = self.n.ok_or(FormatError::MissingField {
                    kind: "grid",
                    field: "N",
                })?;
                let entries = self.entries.ok_or(FormatError::MissingField {
                    kind: "grid",
                    field: "entries",
                })?;
                let entries = entries
                    .into_iter()
                    .map(|e| {
                        let point = GridPoint::new(e.point, n)?;
                        let sets = indices_from_wire(&e.sets)?;
                        Ok::<_, FormatError>((point, sets))
                    })
                    .collect::<Result<BTreeMap<_, _>, _>>()?;
                CoverKind::GridLabeling {
                    resolution: n,
                    entries,
                }
            }
            other => return Err(FormatError::UnknownKind(other.to_owned())),
        };
        let spec = CoverSpec {
            dim: self.dim,
            kind,
            name: self.name,
            seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn spec_to_json(spec: &CoverSpec) -> String {
    finish(serde_json::to_string_pretty(&CoverSpecDoc::from_spec(spec)).expect("serializable"))
}

pub fn spec_from_json(text: &str) -> Result<CoverSpec, FormatError> {
    let doc: CoverSpecDoc = serde_json::from_str(text)?;
    doc.into_spec()
}

// ---------------------------------------------------------------------------
// Verify reports

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReportDoc {
    pub schema: String,
    pub dim: usize,
    pub resolution: u32,
    pub passed: bool,
    pub checks: VerifyChecksDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyChecksDoc {
    pub cover: PointCheckDoc,
    pub kkm: PointCheckDoc,
    pub nondegenerate: SetCheckDoc,
}

/// A check whose witnesses are bare grid points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointCheckDoc {
    pub passed: bool,
    pub witnesses: Vec<Vec<i64>>,
}

/// A check whose witnesses are (grid point, set index) pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetCheckDoc {
    pub passed: bool,
    pub witnesses: Vec<SetWitnessDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetWitnessDoc {
    pub point: Vec<i64>,
    pub set: usize,
}

pub fn verify_report_doc(
    dim: usize,
    coverage: &CoverageReport,
    kkm: &KkmReport,
    nondegenerate: &NondegeneracyReport,
) -> VerifyReportDoc {
    let passed = coverage.passed() && kkm.passed() && nondegenerate.passed();
    VerifyReportDoc {
        schema: "verify-report/v1".into(),
        dim,
        resolution: coverage.resolution,
        passed,
        checks: VerifyChecksDoc {
            cover: PointCheckDoc {
                passed: coverage.passed(),
                witnesses: points_to_wire(&coverage.uncovered),
            },
            kkm: PointCheckDoc {
                passed: kkm.passed(),
                witnesses: points_to_wire(&kkm.violations),
            },
            nondegenerate: SetCheckDoc {
                passed: nondegenerate.passed(),
                witnesses: nondegenerate
                    .violations
                    .iter()
                    .map(|(p, i)| SetWitnessDoc {
                        point: p.k().to_vec(),
                        set: i + 1,
                    })
                    .collect(),
            },
        },
    }
}

// ---------------------------------------------------------------------------
// Pipeline reports

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineReportDoc {
    pub schema: String,
    pub dim: usize,
    pub resolution: u32,
    pub thickened: bool,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kkm_points: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<CoverStatsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverStatsDoc {
    pub sphere_points: usize,
    pub top_points: usize,
    pub bottom_points: usize,
    pub set_sizes: Vec<usize>,
}

impl CoverStatsDoc {
    fn from_stats(stats: &CoverStats) -> Self {
        CoverStatsDoc {
            sphere_points: stats.sphere_points,
            top_points: stats.top_points,
            bottom_points: stats.bottom_points,
            set_sizes: stats.set_sizes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViolationDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<SetWitnessDoc>,
}

pub fn pipeline_report_doc(dim: usize, report: &PipelineReport) -> PipelineReportDoc {
    let mut doc = PipelineReportDoc {
        schema: "pipeline-report/v1".into(),
        dim,
        resolution: report.resolution,
        thickened: report.thickened,
        outcome: String::new(),
        kkm_points: None,
        stats: None,
        violation: None,
    };
    match &report.outcome {
        PipelineOutcome::KkmPointsFound { points } => {
            doc.outcome = "kkm_points_found".into();
            doc.kkm_points = Some(points.iter().map(simplex_to_wire).collect());
        }
        PipelineOutcome::AntipodeFreeCoverBuilt { stats } => {
            doc.outcome = "antipode_free_cover_built".into();
            doc.stats = Some(CoverStatsDoc::from_stats(stats));
        }
        PipelineOutcome::Violation(violation) => {
            doc.outcome = "violation".into();
            doc.violation = Some(match violation {
                Violation::CoverageGap { points } => ViolationDoc {
                    kind: "coverage_gap".into(),
                    points: points_to_wire(points),
                    pairs: Vec::new(),
                },
                Violation::AntipodePairs { pairs } => ViolationDoc {
                    kind: "antipode_pairs".into(),
                    points: Vec::new(),
                    pairs: pairs
                        .iter()
                        .map(|(i, p)| SetWitnessDoc {
                            point: p.k().to_vec(),
                            set: i + 1,
                        })
                        .collect(),
                },
            });
        }
    }
    doc
}

// ---------------------------------------------------------------------------
// Oracle and sweep reports

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReportDoc {
    pub schema: String,
    pub dim: usize,
    pub resolution: u32,
    pub intersection: Vec<Vec<i64>>,
    pub exposure: Vec<Vec<i64>>,
    pub stars: Vec<StarDoc>,
    pub best_star_distance: Option<String>,
    pub duality_holds: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StarDoc {
    pub center: Vec<i64>,
    pub radius: String,
    pub covered_indices: Vec<usize>,
}

impl StarDoc {
    pub fn from_certificate(cert: &StarCertificate) -> Self {
        StarDoc {
            center: cert.center.k().to_vec(),
            radius: format!("1/{}", cert.center.resolution()),
            covered_indices: indices_to_wire(cert.covered),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRowDoc {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "intersectionCount")]
    pub intersection_count: usize,
    #[serde(rename = "exposureCount")]
    pub exposure_count: usize,
    #[serde(rename = "starCount")]
    pub star_count: usize,
    #[serde(rename = "bestStarDistance")]
    pub best_star_distance: Option<String>,
}

impl SweepRowDoc {
    pub fn from_row(row: &SweepRow) -> Self {
        SweepRowDoc {
            n: row.resolution,
            intersection_count: row.intersection_count,
            exposure_count: row.exposure_count,
            star_count: row.star_count,
            best_star_distance: row.best_star_distance.as_ref().map(rational_to_string),
        }
    }
}

// ---------------------------------------------------------------------------
// Extended cover fixtures

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendedCoverDoc {
    pub schema: String,
    pub dim: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub entries: Vec<ExtendedEntryDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendedEntryDoc {
    pub point: Vec<i64>,
    /// Indices contributed by the projected sets, 1-based.
    pub d: Vec<usize>,
    /// Indices contributed by the bottom sets, 1-based.
    pub e: Vec<usize>,
}

impl ExtendedCoverDoc {
    pub fn from_extension(extension: &ExtendedCover) -> Self {
        ExtendedCoverDoc {
            schema: "extended-cover/v1".into(),
            dim: extension.dim(),
            n: extension.resolution(),
            entries: extension
                .iter()
                .map(|(p, prov)| ExtendedEntryDoc {
                    point: p.k().to_vec(),
                    d: indices_to_wire(prov.projected),
                    e: indices_to_wire(prov.bottom),
                })
                .collect(),
        }
    }

    pub fn into_extension(self) -> Result<ExtendedCover, FormatError> {
        let entries = self
            .entries
            .into_iter()
            .map(|e| {
                let point = GridPoint::new(e.point, self.n)?;
                let prov = Provenance {
                    projected: indices_from_wire(&e.d)?,
                    bottom: indices_from_wire(&e.e)?,
                };
                Ok::<_, FormatError>((point, prov))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        Ok(ExtendedCover::from_parts(self.dim, self.n, entries)?)
    }
}

/// Pretty-prints any document with the canonical trailing newline.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    finish(serde_json::to_string_pretty(doc).expect("serializable"))
}

fn finish(mut json: String) -> String {
    json.push('\n');
    json
}

#[cfg(test)]
mod tests {
    use super::*;
    use antipode_core::rational;

    fn simplex(coords: &[(i64, i64)]) -> SimplexPoint {
        SimplexPoint::new(coords.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
    }

    #[test]
    fn rational_strings_are_canonical() {
        assert_eq!(rational_to_string(&rational(1, 2)), "1/2");
        assert_eq!(rational_to_string(&rational(2, 4)), "1/2");
        assert_eq!(rational_to_string(&rational(0, 5)), "0/1");
        assert_eq!(rational_to_string(&rational(-3, 6)), "-1/2");
        assert_eq!(rational_from_str("7").unwrap(), rational(7, 1));
        assert_eq!(rational_from_str("-2/8").unwrap(), rational(-1, 4));
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("a/b").is_err());
    }

    #[test]
    fn ratio_spec_round_trips() {
        let spec = CoverSpec::ratio(2, simplex(&[(1, 2), (1, 4), (1, 4)]));
        let json = spec_to_json(&spec);
        let back = spec_from_json(&json).unwrap();
        assert_eq!(back, spec);
        assert_eq!(spec_to_json(&back), json);
    }

    #[test]
    fn degenerate_spec_round_trips_with_wire_indices() {
        let spec = CoverSpec::degenerate_ratio(
            2,
            simplex(&[(1, 3), (1, 3), (1, 3)]),
            vec![FaceAssignment { set: 2, face: 2 }],
        );
        let json = spec_to_json(&spec);
        // Internal index 2 appears as 3 on the wire.
        assert!(json.contains("\"set\": 3"));
        assert_eq!(spec_from_json(&json).unwrap(), spec);
    }

    #[test]
    fn grid_spec_round_trips() {
        use antipode_core::{enumerate_grid, GridDomain};
        let entries: BTreeMap<GridPoint, IndexSet> = enumerate_grid(1, 2, GridDomain::TopFacet)
            .unwrap()
            .into_iter()
            .map(|g| {
                let s: IndexSet = (0..2).filter(|&i| g.k()[i] > 0).collect();
                (g, s)
            })
            .collect();
        let spec = CoverSpec::grid_labeling(1, 2, entries);
        let json = spec_to_json(&spec);
        assert_eq!(spec_from_json(&json).unwrap(), spec);
    }

    #[test]
    fn malformed_specs_are_rejected() {
        assert!(spec_from_json("{not json").is_err());
        assert!(spec_from_json("{\"dim\": 2, \"kind\": \"mystery\"}").is_err());
        assert!(spec_from_json("{\"dim\": 2, \"kind\": \"ratio\"}").is_err());
        // Non-interior target fails core validation at the boundary.
        let json = r#"{"dim": 2, "kind": "ratio", "target": ["1/2", "1/2", "0/1"]}"#;
        assert!(matches!(
            spec_from_json(json),
            Err(FormatError::Cover(CoverError::TargetNotInterior))
        ));
    }

    #[test]
    fn extension_fixture_round_trips() {
        let cover =
            antipode_core::Cover::ratio(2, simplex(&[(1, 2), (1, 4), (1, 4)])).unwrap();
        let ext = antipode_core::assemble_extended(&cover, 3).unwrap();
        let doc = ExtendedCoverDoc::from_extension(&ext);
        let back = doc.into_extension().unwrap();
        assert_eq!(back, ext);
    }
}
