//! Covers of the simplex by `d + 1` sets, the KKM cover conditions, and
//! collar thickening.
//!
//! A KKM cover of `Δ^d` is a family `C_0, .., C_d` covering the simplex so
//! that every point `x` belongs to some `C_i` with `x_i > 0`. A cover is
//! non-degenerate when membership in `C_i` forces `x_i > 0` outright; a
//! non-degenerate cover of the whole simplex is automatically a KKM cover.
//!
//! Covers here are membership predicates answerable at arbitrary rational
//! simplex points, not just grid points, because the construction layer
//! queries them at off-grid images of the top projection and the collar
//! map. Three backends are provided:
//!
//! - ratio covers `C_i = {x : x_i/p_i ≥ x_j/p_j ∀j}` around an interior
//!   target `p`, the canonical test family whose common intersection is
//!   exactly `{p}`;
//! - degenerate ratio covers, which additionally grant whole faces
//!   `{x_j = 0}` to chosen sets, deliberately breaking non-degeneracy;
//! - grid labelings, which extend a per-grid-point label table to all
//!   rational points by taking the union of the labels of every nearest
//!   grid point under the L∞ distance (ties included), so labeled sets
//!   behave like closed sets at grid scale.
//!
//! [`Cover::thicken`] repairs a degenerate cover: it pulls every
//! membership query through the collar map, keeping plain membership on
//! the shrunken inner copy of the simplex but additionally requiring
//! `x_i > 0` over the thickened boundary. The result is non-degenerate and
//! introduces no new common points beyond the images of the old ones.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{
    collar_pull, enumerate_grid, GeometryError, GridDomain, GridPoint, SimplexPoint, MAX_DIM,
};
use crate::indices::IndexSet;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// Ratio covers need a strictly interior target.
    #[error("ratio cover target must have strictly positive coordinates")]
    TargetNotInterior,
    #[error("target has {actual} coordinates, cover dimension wants {expected}")]
    TargetDimensionMismatch { expected: usize, actual: usize },
    #[error("set index {set} out of range for {sets} sets")]
    SetIndexOutOfRange { set: usize, sets: usize },
    #[error("face coordinate {face} out of range for {coords} coordinates")]
    FaceIndexOutOfRange { face: usize, coords: usize },
    /// Grid labelings must label exactly the top-facet grid points.
    #[error("grid labeling must cover the top facet exactly ({missing} missing, {unexpected} unexpected)")]
    LabelingDomainMismatch { missing: usize, unexpected: usize },
    #[error("grid labeling entry at resolution {actual}, labeling declares {expected}")]
    LabelingResolutionMismatch { expected: u32, actual: u32 },
}

/// Grants the whole face `{x : x_face = 0}` to set `set`. Used to build
/// deliberately degenerate covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceAssignment {
    pub set: usize,
    pub face: usize,
}

/// The constructive recipe behind a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverKind {
    Ratio {
        target: SimplexPoint,
    },
    DegenerateRatio {
        target: SimplexPoint,
        extras: Vec<FaceAssignment>,
    },
    GridLabeling {
        resolution: u32,
        entries: BTreeMap<GridPoint, IndexSet>,
    },
}

/// A declarative cover description: enough to rebuild the cover, and the
/// unit the wire format serializes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub dim: usize,
    pub kind: CoverKind,
    pub name: Option<String>,
    pub seed: Option<u64>,
}

impl CoverSpec {
    pub fn ratio(dim: usize, target: SimplexPoint) -> Self {
        CoverSpec {
            dim,
            kind: CoverKind::Ratio { target },
            name: None,
            seed: None,
        }
    }

    pub fn degenerate_ratio(dim: usize, target: SimplexPoint, extras: Vec<FaceAssignment>) -> Self {
        CoverSpec {
            dim,
            kind: CoverKind::DegenerateRatio { target, extras },
            name: None,
            seed: None,
        }
    }

    pub fn grid_labeling(
        dim: usize,
        resolution: u32,
        entries: BTreeMap<GridPoint, IndexSet>,
    ) -> Self {
        CoverSpec {
            dim,
            kind: CoverKind::GridLabeling {
                resolution,
                entries,
            },
            name: None,
            seed: None,
        }
    }

    /// The ratio target, when the spec has one.
    pub fn target(&self) -> Option<&SimplexPoint> {
        match &self.kind {
            CoverKind::Ratio { target } | CoverKind::DegenerateRatio { target, .. } => {
                Some(target)
            }
            CoverKind::GridLabeling { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), CoverError> {
        if self.dim < 1 || self.dim > MAX_DIM {
            return Err(GeometryError::DimensionOutOfRange { dim: self.dim }.into());
        }
        let sets = self.dim + 1;
        match &self.kind {
            CoverKind::Ratio { target } => validate_target(self.dim, target),
            CoverKind::DegenerateRatio { target, extras } => {
                validate_target(self.dim, target)?;
                for extra in extras {
                    if extra.set >= sets {
                        return Err(CoverError::SetIndexOutOfRange {
                            set: extra.set,
                            sets,
                        });
                    }
                    if extra.face >= sets {
                        return Err(CoverError::FaceIndexOutOfRange {
                            face: extra.face,
                            coords: sets,
                        });
                    }
                }
                Ok(())
            }
            CoverKind::GridLabeling {
                resolution,
                entries,
            } => {
                let top = enumerate_grid(self.dim, *resolution, GridDomain::TopFacet)?;
                for point in entries.keys() {
                    if point.resolution() != *resolution {
                        return Err(CoverError::LabelingResolutionMismatch {
                            expected: *resolution,
                            actual: point.resolution(),
                        });
                    }
                }
                let missing = top.iter().filter(|p| !entries.contains_key(p)).count();
                let unexpected = entries
                    .keys()
                    .filter(|p| p.to_simplex().is_none() || p.dim() != self.dim)
                    .count();
                if missing > 0 || unexpected > 0 || entries.len() != top.len() {
                    return Err(CoverError::LabelingDomainMismatch {
                        missing,
                        unexpected: entries.len() + missing - top.len(),
                    });
                }
                for labels in entries.values() {
                    if let Some(i) = labels.iter().find(|&i| i >= sets) {
                        return Err(CoverError::SetIndexOutOfRange { set: i, sets });
                    }
                }
                Ok(())
            }
        }
    }
}

fn validate_target(dim: usize, target: &SimplexPoint) -> Result<(), CoverError> {
    if target.dim() != dim {
        return Err(CoverError::TargetDimensionMismatch {
            expected: dim + 1,
            actual: target.dim() + 1,
        });
    }
    if !target.is_interior() {
        return Err(CoverError::TargetNotInterior);
    }
    Ok(())
}

/// A cover of `Δ^d` by `d + 1` sets with an exact membership oracle over
/// rational simplex points.
///
/// Immutable after construction; membership queries are pure and safe to
/// issue concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    spec: CoverSpec,
    collar_layers: u32,
}

impl Cover {
    /// Builds the cover described by a validated spec.
    pub fn from_spec(spec: CoverSpec) -> Result<Self, CoverError> {
        spec.validate()?;
        Ok(Cover {
            spec,
            collar_layers: 0,
        })
    }

    /// The canonical test family around an interior target `p`:
    /// `C_i = {x : x_i/p_i ≥ x_j/p_j ∀j}`. Non-degenerate, KKM, and its
    /// common intersection is exactly `{p}`.
    pub fn ratio(dim: usize, target: SimplexPoint) -> Result<Self, CoverError> {
        Cover::from_spec(CoverSpec::ratio(dim, target))
    }

    /// A ratio cover plus whole faces granted to chosen sets, producing a
    /// KKM cover that fails non-degeneracy.
    pub fn degenerate_ratio(
        dim: usize,
        target: SimplexPoint,
        extras: Vec<FaceAssignment>,
    ) -> Result<Self, CoverError> {
        Cover::from_spec(CoverSpec::degenerate_ratio(dim, target, extras))
    }

    /// A cover driven by a label table over the top-facet grid; membership
    /// at an arbitrary rational point is the union of the labels of all
    /// nearest grid points under L∞ distance.
    pub fn from_grid_labeling(
        dim: usize,
        resolution: u32,
        entries: BTreeMap<GridPoint, IndexSet>,
    ) -> Result<Self, CoverError> {
        Cover::from_spec(CoverSpec::grid_labeling(dim, resolution, entries))
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn set_count(&self) -> usize {
        self.spec.dim + 1
    }

    pub fn spec(&self) -> &CoverSpec {
        &self.spec
    }

    pub fn is_thickened(&self) -> bool {
        self.collar_layers > 0
    }

    /// Repairs degeneracy by thickening the boundary: membership at `y`
    /// pulls `y` back through the collar map to `(x, t)`; at height zero
    /// the original membership applies, at positive heights membership
    /// additionally requires `x_i > 0`.
    ///
    /// For covers satisfying the KKM condition this keeps the condition,
    /// makes the cover non-degenerate, and moves each old common point `q`
    /// to the image of `(q, 0)` without creating common points at positive
    /// heights.
    pub fn thicken(self) -> Cover {
        Cover {
            spec: self.spec,
            collar_layers: self.collar_layers + 1,
        }
    }

    /// Whether `point` belongs to set `set`.
    pub fn contains(&self, set: usize, point: &SimplexPoint) -> bool {
        debug_assert!(set < self.set_count());
        debug_assert_eq!(point.dim(), self.dim());
        self.contains_at(self.collar_layers, set, point)
    }

    /// Membership of `point` in every set at once.
    pub fn membership(&self, point: &SimplexPoint) -> IndexSet {
        (0..self.set_count())
            .filter(|&i| self.contains(i, point))
            .collect()
    }

    fn contains_at(&self, layers: u32, set: usize, point: &SimplexPoint) -> bool {
        if layers == 0 {
            return self.base_contains(set, point);
        }
        let collar = collar_pull(point);
        if collar.height().is_zero() {
            self.contains_at(layers - 1, set, collar.base())
        } else {
            collar.base().coords()[set].is_positive()
                && self.contains_at(layers - 1, set, collar.base())
        }
    }

    fn base_contains(&self, set: usize, point: &SimplexPoint) -> bool {
        match &self.spec.kind {
            CoverKind::Ratio { target } => ratio_contains(target, set, point),
            CoverKind::DegenerateRatio { target, extras } => {
                ratio_contains(target, set, point)
                    || extras
                        .iter()
                        .any(|e| e.set == set && point.coords()[e.face].is_zero())
            }
            CoverKind::GridLabeling { entries, .. } => {
                nearest_labels(entries, point).contains(set)
            }
        }
    }
}

/// `x ∈ C_i` iff `x_i/p_i` attains the maximum of the coordinate ratios,
/// compared exactly by cross-multiplication.
fn ratio_contains(target: &SimplexPoint, set: usize, point: &SimplexPoint) -> bool {
    let x = point.coords();
    let p = target.coords();
    (0..x.len()).all(|j| &x[set] * &p[j] >= &x[j] * &p[set])
}

/// Union of the labels of every grid point at minimal L∞ distance from
/// `point`, ties included.
fn nearest_labels(entries: &BTreeMap<GridPoint, IndexSet>, point: &SimplexPoint) -> IndexSet {
    let mut best: Option<Rational> = None;
    let mut acc = IndexSet::EMPTY;
    for (grid, labels) in entries {
        let candidate = grid
            .to_simplex()
            .expect("labeling entries live on the top facet");
        let dist = linf_distance(point.coords(), candidate.coords());
        match &best {
            Some(b) if dist > *b => {}
            Some(b) if dist == *b => acc = acc.union(*labels),
            _ => {
                best = Some(dist);
                acc = *labels;
            }
        }
    }
    acc
}

fn linf_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Outcome of the plain coverage check: every top grid point must belong
/// to at least one set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub resolution: u32,
    /// Top grid points belonging to no set.
    pub uncovered: Vec<GridPoint>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Outcome of the KKM condition check: every top grid point `x` must
/// belong to some `C_i` with `x_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KkmReport {
    pub resolution: u32,
    /// Top grid points with no witnessing set.
    pub violations: Vec<GridPoint>,
}

impl KkmReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of the non-degeneracy check: no top grid point `x` may belong
/// to a `C_i` with `x_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegeneracyReport {
    pub resolution: u32,
    /// Pairs `(x, i)` with `x ∈ C_i` but `x_i = 0`.
    pub violations: Vec<(GridPoint, usize)>,
}

impl NondegeneracyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the cover's sets jointly cover the top-facet grid.
pub fn verify_cover(cover: &Cover, resolution: u32) -> Result<CoverageReport, GeometryError> {
    let top = enumerate_grid(cover.dim(), resolution, GridDomain::TopFacet)?;
    let uncovered = top
        .into_iter()
        .filter(|g| {
            let x = g.to_simplex().expect("top facet point");
            cover.membership(&x).is_empty()
        })
        .collect();
    Ok(CoverageReport {
        resolution,
        uncovered,
    })
}

/// Checks the KKM condition on the top-facet grid.
pub fn verify_kkm(cover: &Cover, resolution: u32) -> Result<KkmReport, GeometryError> {
    let top = enumerate_grid(cover.dim(), resolution, GridDomain::TopFacet)?;
    let violations = top
        .into_iter()
        .filter(|g| {
            let x = g.to_simplex().expect("top facet point");
            !(0..cover.set_count()).any(|i| g.k()[i] > 0 && cover.contains(i, &x))
        })
        .collect();
    Ok(KkmReport {
        resolution,
        violations,
    })
}

/// Checks non-degeneracy on the top-facet grid.
pub fn verify_nondegenerate(
    cover: &Cover,
    resolution: u32,
) -> Result<NondegeneracyReport, GeometryError> {
    let top = enumerate_grid(cover.dim(), resolution, GridDomain::TopFacet)?;
    let mut violations = Vec::new();
    for g in top {
        let x = g.to_simplex().expect("top facet point");
        for i in 0..cover.set_count() {
            if g.k()[i] == 0 && cover.contains(i, &x) {
                violations.push((g.clone(), i));
            }
        }
    }
    Ok(NondegeneracyReport {
        resolution,
        violations,
    })
}
