//! Extension of a cover of the top facet to the whole sphere grid, and the
//! dichotomy pipeline built on it.
//!
//! Given a cover `C_0, .., C_d` of the top facet, the extension works
//! facet by facet:
//!
//! - on the bottom facet, the complement sets `B_i = {y : -y ∉ C_i}`
//!   (and their closed shrink `E_i`, identical at grid scale) cover
//!   everything except the antipodes of common intersection points — the
//!   *exposure set*;
//! - over the rest of the sphere, the pullbacks `D_i` of the cover under
//!   the top projection extend each set across the middle band;
//! - the union family `A_i = D_i ∪ E_i` covers the whole sphere grid
//!   exactly when the exposure set is empty, and for non-degenerate covers
//!   it contains no antipodal grid pair.
//!
//! [`run_pipeline`] ties this together: it thickens degenerate covers,
//! reports the antipodes of exposed points as common intersection points
//! when there are any, and otherwise assembles the extension and scans it
//! exhaustively. A [`Violation`] outcome means a scan failed — that is a
//! self-test of the construction, not an expected result for well-formed
//! covers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cover::{verify_kkm, verify_nondegenerate, Cover};
use crate::geometry::{
    enumerate_grid, GeometryError, GridDomain, GridPoint, Region, SimplexPoint,
};
use crate::indices::IndexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// The extension only exists when no bottom grid point is exposed.
    #[error("{} bottom grid points are exposed; the cover has common intersection points", exposed.len())]
    ExposureNonEmpty { exposed: Vec<GridPoint> },
    /// The pipeline requires the KKM condition up front.
    #[error("KKM condition fails at {} top grid points", violations.len())]
    KkmPrecondition { violations: Vec<GridPoint> },
    /// Raw extension parts must cover the sphere grid exactly.
    #[error("extension entries must cover the sphere grid exactly ({missing} missing, {unexpected} unexpected)")]
    ExtensionDomainMismatch { missing: usize, unexpected: usize },
    #[error("extension carries indices out of range for {sets} sets")]
    ExtensionIndexOutOfRange { sets: usize },
}

/// Index sets attached to the grid points of one facet family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetSets {
    resolution: u32,
    entries: BTreeMap<GridPoint, IndexSet>,
}

impl FacetSets {
    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, point: &GridPoint) -> Option<IndexSet> {
        self.entries.get(point).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GridPoint, IndexSet)> {
        self.entries.iter().map(|(p, s)| (p, *s))
    }
}

/// Builds the complement sets on the bottom facet: a bottom grid point `y`
/// belongs to `B_i` exactly when its antipode is outside `C_i`.
pub fn build_bottom_complements(
    cover: &Cover,
    resolution: u32,
) -> Result<FacetSets, GeometryError> {
    let bottom = enumerate_grid(cover.dim(), resolution, GridDomain::BottomFacet)?;
    let entries = bottom
        .into_iter()
        .map(|y| {
            let mirrored = y
                .antipode()
                .to_simplex()
                .expect("antipode of a bottom point is a top point");
            let sets = (0..cover.set_count())
                .filter(|&i| !cover.contains(i, &mirrored))
                .collect();
            (y, sets)
        })
        .collect();
    Ok(FacetSets {
        resolution,
        entries,
    })
}

/// The closed shrink of the bottom complements. At grid resolution the
/// shrink has no room to act, so the sets coincide with
/// [`build_bottom_complements`]; the non-degeneracy they inherit
/// (`y_i = 0 ⟹ y ∈ E_i`) is checked by [`verify_construction`].
pub fn build_bottom_closed(cover: &Cover, resolution: u32) -> Result<FacetSets, GeometryError> {
    build_bottom_complements(cover, resolution)
}

/// Pulls the cover back through the top projection over every grid point
/// with positive part: `x ∈ D_i` iff the projection of `x` lies in `C_i`.
/// The projected point is an off-grid rational, answered by the cover's
/// membership oracle directly.
pub fn build_projected(cover: &Cover, resolution: u32) -> Result<FacetSets, GeometryError> {
    let sphere = enumerate_grid(cover.dim(), resolution, GridDomain::Sphere)?;
    let entries = sphere
        .into_iter()
        .filter(|g| g.region() != Region::Bottom)
        .map(|g| {
            let image = g
                .embed()
                .project_to_top()
                .expect("positive part is nonzero off the bottom facet");
            let sets = cover.membership(&image);
            (g, sets)
        })
        .collect();
    Ok(FacetSets {
        resolution,
        entries,
    })
}

/// Bottom grid points covered by no complement set. Their antipodes are
/// exactly the common intersection points of the cover on the top grid.
pub fn exposure_set(cover: &Cover, resolution: u32) -> Result<Vec<GridPoint>, GeometryError> {
    let complements = build_bottom_complements(cover, resolution)?;
    Ok(complements
        .iter()
        .filter(|(_, sets)| sets.is_empty())
        .map(|(p, _)| p.clone())
        .collect())
}

/// Per-index provenance of extended membership: whether an index arrived
/// through the projected sets, the bottom sets, or (only in hand-built
/// fixtures) both.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Provenance {
    pub projected: IndexSet,
    pub bottom: IndexSet,
}

impl Provenance {
    pub fn all(&self) -> IndexSet {
        self.projected.union(self.bottom)
    }
}

/// The extended cover `A_i = D_i ∪ E_i` over the whole sphere grid, with
/// provenance per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedCover {
    dim: usize,
    resolution: u32,
    entries: BTreeMap<GridPoint, Provenance>,
}

impl ExtendedCover {
    /// Rebuilds an extension from raw per-point entries, validating that
    /// they cover the sphere grid exactly. Meant for fixtures and
    /// deserialization; [`assemble_extended`] is the constructive route.
    pub fn from_parts(
        dim: usize,
        resolution: u32,
        entries: BTreeMap<GridPoint, Provenance>,
    ) -> Result<Self, ConstructionError> {
        let sphere = enumerate_grid(dim, resolution, GridDomain::Sphere)?;
        let missing = sphere.iter().filter(|p| !entries.contains_key(p)).count();
        let unexpected = entries.len() + missing - sphere.len();
        if missing > 0 || unexpected > 0 {
            return Err(ConstructionError::ExtensionDomainMismatch {
                missing,
                unexpected,
            });
        }
        let sets = dim + 1;
        if entries
            .values()
            .any(|p| p.all().iter().any(|i| i >= sets))
        {
            return Err(ConstructionError::ExtensionIndexOutOfRange { sets });
        }
        Ok(ExtendedCover {
            dim,
            resolution,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set_count(&self) -> usize {
        self.dim + 1
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn membership(&self, point: &GridPoint) -> IndexSet {
        self.entries
            .get(point)
            .map(|p| p.all())
            .unwrap_or(IndexSet::EMPTY)
    }

    pub fn provenance(&self, point: &GridPoint) -> Option<&Provenance> {
        self.entries.get(point)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GridPoint, &Provenance)> {
        self.entries.iter()
    }

    /// Grid points with empty membership. Empty for every extension built
    /// by [`assemble_extended`].
    pub fn coverage_gaps(&self) -> Vec<GridPoint> {
        self.entries
            .iter()
            .filter(|(_, p)| p.all().is_empty())
            .map(|(g, _)| g.clone())
            .collect()
    }

    /// Cardinality of each extended set over the grid.
    pub fn set_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0usize; self.set_count()];
        for prov in self.entries.values() {
            for i in prov.all().iter() {
                sizes[i] += 1;
            }
        }
        sizes
    }
}

/// Assembles the extended cover from the projected and bottom families.
///
/// Fails with [`ConstructionError::ExposureNonEmpty`] when some bottom
/// point is exposed — the pipeline is expected to have branched to the
/// intersection outcome before asking for the extension.
pub fn assemble_extended(
    cover: &Cover,
    resolution: u32,
) -> Result<ExtendedCover, ConstructionError> {
    let projected = build_projected(cover, resolution)?;
    let bottom = build_bottom_closed(cover, resolution)?;

    let exposed: Vec<GridPoint> = bottom
        .iter()
        .filter(|(_, sets)| sets.is_empty())
        .map(|(p, _)| p.clone())
        .collect();
    if !exposed.is_empty() {
        return Err(ConstructionError::ExposureNonEmpty { exposed });
    }

    let mut entries = BTreeMap::new();
    for (point, sets) in projected.iter() {
        entries.insert(
            point.clone(),
            Provenance {
                projected: sets,
                bottom: IndexSet::EMPTY,
            },
        );
    }
    for (point, sets) in bottom.iter() {
        entries.insert(
            point.clone(),
            Provenance {
                projected: IndexSet::EMPTY,
                bottom: sets,
            },
        );
    }
    ExtendedCover::from_parts(cover.dim(), resolution, entries)
}

/// All `(i, x)` with `x` and its antipode both in the extended set `i`,
/// reported once per pair with `x` the lexicographically smaller point,
/// ordered by `(x, i)`.
pub fn antipode_pairs(extension: &ExtendedCover) -> Vec<(usize, GridPoint)> {
    let mut pairs = Vec::new();
    for (point, prov) in extension.iter() {
        let opposite = point.antipode();
        if *point >= opposite {
            continue;
        }
        let shared = prov.all().intersection(extension.membership(&opposite));
        for i in shared.iter() {
            pairs.push((i, point.clone()));
        }
    }
    pairs.sort_by(|a, b| (&a.1, a.0).cmp(&(&b.1, b.0)));
    pairs
}

/// Checks the structural facts the extension depends on, over every grid
/// point of the given resolution:
///
/// - the projected sets cover every point with positive part;
/// - on the top facet the projected sets equal the cover exactly;
/// - projected membership forces the matching coordinate to be at least
///   `1/N` (the grid form of strict positivity);
/// - a bottom point with `y_i = 0` always belongs to the closed bottom
///   set `i` (what the closedness of the union rests on).
///
/// All four hold whenever the cover is non-degenerate at the resolution;
/// feeding a degenerate cover directly produces witnesses.
pub fn verify_construction(
    cover: &Cover,
    resolution: u32,
) -> Result<ConstructionReport, GeometryError> {
    let projected = build_projected(cover, resolution)?;
    let bottom = build_bottom_closed(cover, resolution)?;

    let mut projection_cover = Vec::new();
    let mut top_restriction = Vec::new();
    let mut positive_support = Vec::new();
    for (point, sets) in projected.iter() {
        if sets.is_empty() {
            projection_cover.push(point.clone());
        }
        if point.region() == Region::Top {
            let direct = cover.membership(&point.to_simplex().expect("top point"));
            if direct != sets {
                top_restriction.push(point.clone());
            }
        }
        for i in sets.iter() {
            if point.k()[i] < 1 {
                positive_support.push((point.clone(), i));
            }
        }
    }

    let mut bottom_closure = Vec::new();
    for (point, sets) in bottom.iter() {
        for i in 0..cover.set_count() {
            if point.k()[i] == 0 && !sets.contains(i) {
                bottom_closure.push((point.clone(), i));
            }
        }
    }

    Ok(ConstructionReport {
        resolution,
        projection_cover,
        top_restriction,
        positive_support,
        bottom_closure,
    })
}

/// Witnesses from [`verify_construction`], one list per checked fact;
/// every list empty means the check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionReport {
    pub resolution: u32,
    /// Points with positive part in no projected set.
    pub projection_cover: Vec<GridPoint>,
    /// Top points where projected membership differs from the cover.
    pub top_restriction: Vec<GridPoint>,
    /// Pairs `(x, i)` with `i` projected at `x` but `x_i < 1/N`.
    pub positive_support: Vec<(GridPoint, usize)>,
    /// Pairs `(y, i)` with `y_i = 0` but `i` missing from the bottom set.
    pub bottom_closure: Vec<(GridPoint, usize)>,
}

impl ConstructionReport {
    pub fn all_passed(&self) -> bool {
        self.projection_cover.is_empty()
            && self.top_restriction.is_empty()
            && self.positive_support.is_empty()
            && self.bottom_closure.is_empty()
    }
}

/// A failed exhaustive scan of an assembled extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Grid points with no extended membership at all.
    CoverageGap { points: Vec<GridPoint> },
    /// Antipodal pairs sharing an extended set.
    AntipodePairs { pairs: Vec<(usize, GridPoint)> },
}

/// Scans an extension for coverage gaps and antipodal pairs. `None` means
/// the extension is a genuine antipode-free cover of the sphere grid.
pub fn violation_scan(extension: &ExtendedCover) -> Option<Violation> {
    let gaps = extension.coverage_gaps();
    if !gaps.is_empty() {
        return Some(Violation::CoverageGap { points: gaps });
    }
    let pairs = antipode_pairs(extension);
    if !pairs.is_empty() {
        return Some(Violation::AntipodePairs { pairs });
    }
    None
}

/// Grid size and per-set cardinality summary of an assembled extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStats {
    pub sphere_points: usize,
    pub top_points: usize,
    pub bottom_points: usize,
    /// Cardinality of each extended set.
    pub set_sizes: Vec<usize>,
}

impl CoverStats {
    pub fn from_extension(extension: &ExtendedCover) -> CoverStats {
        let mut top_points = 0;
        let mut bottom_points = 0;
        for (point, _) in extension.iter() {
            match point.region() {
                Region::Top => top_points += 1,
                Region::Bottom => bottom_points += 1,
                Region::Middle => {}
            }
        }
        CoverStats {
            sphere_points: extension.len(),
            top_points,
            bottom_points,
            set_sizes: extension.set_sizes(),
        }
    }
}

/// How a pipeline run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineOutcome {
    /// The cover has common intersection points on the grid; they are
    /// returned directly (the antipodes of the exposed bottom points).
    KkmPointsFound { points: Vec<SimplexPoint> },
    /// No grid intersection: the extension was assembled and passed the
    /// exhaustive coverage and antipode scans.
    AntipodeFreeCoverBuilt { stats: CoverStats },
    /// A scan failed. Unreachable for correctly built covers; reaching it
    /// signals a convention or implementation bug.
    Violation(Violation),
}

/// Outcome of [`run_pipeline`] at one resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub outcome: PipelineOutcome,
    pub resolution: u32,
    /// Whether the cover was thickened before extending.
    pub thickened: bool,
}

impl PipelineReport {
    pub fn is_violation(&self) -> bool {
        matches!(self.outcome, PipelineOutcome::Violation(_))
    }
}

/// Runs the whole construction at one resolution:
///
/// 1. requires the KKM condition (error otherwise);
/// 2. thickens the cover if it fails non-degeneracy;
/// 3. if some bottom point is exposed, reports the antipodes of the
///    exposed points — the grid common-intersection points;
/// 4. otherwise assembles the extension and scans it exhaustively,
///    reporting either the antipode-free cover or a [`Violation`].
pub fn run_pipeline(cover: &Cover, resolution: u32) -> Result<PipelineReport, ConstructionError> {
    let kkm = verify_kkm(cover, resolution)?;
    if !kkm.passed() {
        return Err(ConstructionError::KkmPrecondition {
            violations: kkm.violations,
        });
    }

    let mut thickened = false;
    let mut working = cover.clone();
    if !verify_nondegenerate(&working, resolution)?.passed() {
        working = working.thicken();
        thickened = true;
    }

    let exposed = exposure_set(&working, resolution)?;
    if !exposed.is_empty() {
        let points = exposed
            .iter()
            .map(|y| {
                y.antipode()
                    .to_simplex()
                    .expect("antipode of a bottom point is a top point")
            })
            .collect();
        return Ok(PipelineReport {
            outcome: PipelineOutcome::KkmPointsFound { points },
            resolution,
            thickened,
        });
    }

    let extension = assemble_extended(&working, resolution)?;
    let outcome = match violation_scan(&extension) {
        Some(violation) => PipelineOutcome::Violation(violation),
        None => PipelineOutcome::AntipodeFreeCoverBuilt {
            stats: CoverStats::from_extension(&extension),
        },
    };
    Ok(PipelineReport {
        outcome,
        resolution,
        thickened,
    })
}
