//! Exact rational geometry of the simplex `Δ^d` and the L1 sphere `Σ^d`.
//!
//! `Σ^d` is the set of points in `R^{d+1}` whose coordinate magnitudes sum
//! to 1 — the boundary of the `(d+1)`-crosspolytope, an octahedron surface
//! for `d = 2`. Its facets are simplices, one per orthant; the facet with
//! all coordinates nonnegative is a copy of `Δ^d` and is called the top
//! facet here, its antipodal image the bottom facet, and the rest of the
//! sphere the middle band.
//!
//! Everything is computed over [`Rational`], so facet classification,
//! antipodality, and the projection formulas below are exact identities,
//! not approximations. Grids of resolution `N` are the integer vectors `k`
//! with `Σ|k_i| = N`, embedded as `k/N`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

// Shared Display body for coordinate points: "(1/2, -1/4, 1/4)".
macro_rules! fmt_point_display {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "(")?;
            for (i, c) in self.coords.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    };
}

/// Largest supported dimension `d`. Grid sizes grow as `O(N^d)`; this cap
/// keeps exhaustive enumeration at desk scale.
pub const MAX_DIM: usize = 6;

/// Largest supported grid resolution `N`.
pub const MAX_RESOLUTION: u32 = 64;

/// Builds the rational `numer/denom`.
///
/// Panics if `denom` is zero.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// L1 distance between two coordinate vectors of equal length.
pub fn l1_distance(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(Rational::zero(), |acc, t| acc + t)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    /// Coordinate magnitudes of a sphere point must sum to exactly 1.
    #[error("coordinate magnitudes must sum to 1 on the sphere")]
    NotOnSphere,
    /// Simplex coordinates must be nonnegative and sum to exactly 1.
    #[error("coordinates must be nonnegative and sum to 1 on the simplex")]
    NotOnSimplex,
    /// The top projection is undefined where the positive part vanishes.
    #[error("top projection is undefined on the bottom facet")]
    ProjectionUndefined,
    /// Collar points with positive height must be based on the boundary.
    #[error("collar point with positive height must have a boundary base")]
    InvalidCollar,
    /// Supported dimensions are `1..=MAX_DIM`.
    #[error("dimension {dim} out of supported range 1..={MAX_DIM}")]
    DimensionOutOfRange { dim: usize },
    /// Supported resolutions are `1..=MAX_RESOLUTION`.
    #[error("resolution {resolution} out of supported range 1..={MAX_RESOLUTION}")]
    ResolutionOutOfRange { resolution: u32 },
    /// Grid vectors must satisfy `Σ|k_i| = N`.
    #[error("grid vector magnitudes must sum to the resolution")]
    InvalidGridVector,
}

fn check_coord_count(len: usize) -> Result<(), GeometryError> {
    if len < 2 || len > MAX_DIM + 1 {
        return Err(GeometryError::DimensionOutOfRange {
            dim: len.wrapping_sub(1),
        });
    }
    Ok(())
}

fn check_resolution(resolution: u32) -> Result<(), GeometryError> {
    if resolution < 1 || resolution > MAX_RESOLUTION {
        return Err(GeometryError::ResolutionOutOfRange { resolution });
    }
    Ok(())
}

/// Coarse location of a sphere point relative to the top/bottom facets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// All coordinates nonnegative: the copy of `Δ^d` where `Σ x_i = 1`.
    Top,
    /// All coordinates nonpositive: the facet antipodal to the top.
    Bottom,
    /// Mixed signs: the middle band.
    Middle,
}

/// A point of the L1 sphere `Σ^d`: `Σ|x_i| = 1` exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpherePoint {
    coords: Vec<Rational>,
}

impl SpherePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, GeometryError> {
        check_coord_count(coords.len())?;
        let norm = coords
            .iter()
            .fold(Rational::zero(), |acc, c| acc + c.abs());
        if !norm.is_one() {
            return Err(GeometryError::NotOnSphere);
        }
        Ok(SpherePoint { coords })
    }

    fn raw(coords: Vec<Rational>) -> Self {
        SpherePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The point `-x`. An involution.
    pub fn antipode(&self) -> SpherePoint {
        SpherePoint::raw(self.coords.iter().map(|c| -c).collect())
    }

    /// Sum of the strictly positive coordinates. Zero exactly on the
    /// bottom facet.
    pub fn positive_sum(&self) -> Rational {
        self.coords
            .iter()
            .filter(|c| c.is_positive())
            .fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn region(&self) -> Region {
        let any_negative = self.coords.iter().any(|c| c.is_negative());
        let any_positive = self.coords.iter().any(|c| c.is_positive());
        match (any_positive, any_negative) {
            (_, false) => Region::Top,
            (false, true) => Region::Bottom,
            (true, true) => Region::Middle,
        }
    }

    /// Projects onto the top facet: `x_i ↦ max(x_i, 0) / positive_sum(x)`.
    ///
    /// Fixes the top facet pointwise, and the image coordinate is positive
    /// exactly where the input coordinate is. Undefined on the bottom
    /// facet, where the positive part vanishes.
    pub fn project_to_top(&self) -> Result<SimplexPoint, GeometryError> {
        let pos = self.positive_sum();
        if pos.is_zero() {
            return Err(GeometryError::ProjectionUndefined);
        }
        let coords = self
            .coords
            .iter()
            .map(|c| {
                if c.is_positive() {
                    c / &pos
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(SimplexPoint::raw(coords))
    }
}

impl fmt::Display for SpherePoint {
    fmt_point_display!();
}

/// A point of the standard simplex `Δ^d`: coordinates nonnegative and
/// summing to 1 exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexPoint {
    coords: Vec<Rational>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, GeometryError> {
        check_coord_count(coords.len())?;
        if coords.iter().any(|c| c.is_negative()) {
            return Err(GeometryError::NotOnSimplex);
        }
        let sum = coords.iter().fold(Rational::zero(), |acc, c| acc + c);
        if !sum.is_one() {
            return Err(GeometryError::NotOnSimplex);
        }
        Ok(SimplexPoint { coords })
    }

    fn raw(coords: Vec<Rational>) -> Self {
        SimplexPoint { coords }
    }

    /// The barycenter of `Δ^d`: every coordinate `1/(d+1)`.
    pub fn barycenter(dim: usize) -> Result<Self, GeometryError> {
        check_coord_count(dim + 1)?;
        let b = rational(1, (dim + 1) as i64);
        Ok(SimplexPoint::raw(vec![b; dim + 1]))
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Reinterprets the point as a point of the sphere's top facet.
    pub fn to_sphere(&self) -> SpherePoint {
        SpherePoint::raw(self.coords.clone())
    }

    /// True if some coordinate is zero, i.e. the point lies on `∂Δ^d`.
    pub fn on_boundary(&self) -> bool {
        self.coords.iter().any(|c| c.is_zero())
    }

    /// Whether every coordinate is strictly positive.
    pub fn is_interior(&self) -> bool {
        !self.on_boundary()
    }

    /// Radial position of the point on the ray from the barycenter `b`
    /// through it: returns `(r, z)` with `r = 1 - (d+1)·min_i y_i` in
    /// `[0, 1]` and, when `r > 0`, the boundary point `z = b + (y - b)/r`
    /// hit by the ray. The barycenter itself has `r = 0` and no `z`.
    pub fn radial_depth(&self) -> (Rational, Option<SimplexPoint>) {
        let n1 = self.coords.len() as i64;
        let min = self.coords.iter().min().expect("nonempty coords");
        let r = Rational::one() - Rational::from_integer(BigInt::from(n1)) * min;
        if r.is_zero() {
            return (r, None);
        }
        let b = rational(1, n1);
        let z = self
            .coords
            .iter()
            .map(|y| &b + (y - &b) / &r)
            .collect::<Vec<_>>();
        (r, Some(SimplexPoint::raw(z)))
    }
}

impl fmt::Display for SimplexPoint {
    fmt_point_display!();
}

/// A point of the thickened simplex: a base point plus a height `t` in
/// `[0, 1]`, where positive heights exist only over the boundary `∂Δ^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollarPoint {
    base: SimplexPoint,
    height: Rational,
}

impl CollarPoint {
    pub fn new(base: SimplexPoint, height: Rational) -> Result<Self, GeometryError> {
        if height.is_negative() || height > Rational::one() {
            return Err(GeometryError::InvalidCollar);
        }
        if height.is_positive() && !base.on_boundary() {
            return Err(GeometryError::InvalidCollar);
        }
        Ok(CollarPoint { base, height })
    }

    fn raw(base: SimplexPoint, height: Rational) -> Self {
        CollarPoint { base, height }
    }

    pub fn base(&self) -> &SimplexPoint {
        &self.base
    }

    pub fn height(&self) -> &Rational {
        &self.height
    }
}

/// Flattens a collar point into `Δ^d`: `(x, t) ↦ b + ((1+t)/2)(x - b)`.
///
/// The base copy of the simplex (height 0) shrinks onto the inner half of
/// every ray from the barycenter, and the collar over the boundary covers
/// the outer half; the outer boundary (height 1) stays fixed. The map is
/// injective on valid collar points and inverted exactly by
/// [`collar_pull`].
pub fn collar_push(point: &CollarPoint) -> SimplexPoint {
    let n1 = point.base.coords().len() as i64;
    let b = rational(1, n1);
    let scale = (Rational::one() + &point.height) / rational(2, 1);
    let coords = point
        .base
        .coords()
        .iter()
        .map(|x| &b + &scale * (x - &b))
        .collect();
    SimplexPoint::raw(coords)
}

/// Inverts [`collar_push`]: radial depth at most 1/2 maps back to the base
/// copy (height 0), larger depths to the collar over the boundary point on
/// the same ray. On the seam, depth exactly 1/2, the height-0 branch
/// applies.
pub fn collar_pull(point: &SimplexPoint) -> CollarPoint {
    let (r, boundary) = point.radial_depth();
    let half = rational(1, 2);
    if r <= half {
        let n1 = point.coords().len() as i64;
        let b = rational(1, n1);
        let base = point
            .coords()
            .iter()
            .map(|y| y * rational(2, 1) - &b)
            .collect::<Vec<_>>();
        CollarPoint::raw(SimplexPoint::raw(base), Rational::zero())
    } else {
        let height = &r * rational(2, 1) - Rational::one();
        CollarPoint::raw(boundary.expect("depth > 1/2 is nonzero"), height)
    }
}

/// A grid point of resolution `N`: an integer vector `k` with
/// `Σ|k_i| = N`, embedded on the sphere as `k/N`.
///
/// Ordering is lexicographic in `k`, which is the order every enumeration
/// and report in this crate uses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    k: Vec<i64>,
    resolution: u32,
}

impl GridPoint {
    pub fn new(k: Vec<i64>, resolution: u32) -> Result<Self, GeometryError> {
        check_coord_count(k.len())?;
        check_resolution(resolution)?;
        let total: i64 = k.iter().map(|v| v.abs()).sum();
        if total != i64::from(resolution) {
            return Err(GeometryError::InvalidGridVector);
        }
        Ok(GridPoint { k, resolution })
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn dim(&self) -> usize {
        self.k.len() - 1
    }

    /// The embedded sphere point `k/N`.
    pub fn embed(&self) -> SpherePoint {
        let n = i64::from(self.resolution);
        SpherePoint::raw(self.k.iter().map(|&v| rational(v, n)).collect())
    }

    /// The embedded simplex point, if the grid point lies on the top facet.
    pub fn to_simplex(&self) -> Option<SimplexPoint> {
        if self.k.iter().any(|&v| v < 0) {
            return None;
        }
        let n = i64::from(self.resolution);
        Some(SimplexPoint::raw(
            self.k.iter().map(|&v| rational(v, n)).collect(),
        ))
    }

    pub fn antipode(&self) -> GridPoint {
        GridPoint {
            k: self.k.iter().map(|&v| -v).collect(),
            resolution: self.resolution,
        }
    }

    pub fn region(&self) -> Region {
        let any_negative = self.k.iter().any(|&v| v < 0);
        let any_positive = self.k.iter().any(|&v| v > 0);
        match (any_positive, any_negative) {
            (_, false) => Region::Top,
            (false, true) => Region::Bottom,
            (true, true) => Region::Middle,
        }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.k.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")/{}", self.resolution)
    }
}

/// Which part of the sphere grid to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridDomain {
    /// All of `Σ^d`.
    Sphere,
    /// Points with all coordinates nonnegative.
    TopFacet,
    /// Points with all coordinates nonpositive.
    BottomFacet,
}

/// Enumerates the grid of resolution `N` over the requested domain, in
/// lexicographic order of the integer vectors. The top facet has exactly
/// `C(N+d, d)` points.
pub fn enumerate_grid(
    dim: usize,
    resolution: u32,
    domain: GridDomain,
) -> Result<Vec<GridPoint>, GeometryError> {
    check_coord_count(dim + 1)?;
    check_resolution(resolution)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dim + 1);
    fill_grid(
        &mut prefix,
        i64::from(resolution),
        dim + 1,
        domain,
        resolution,
        &mut out,
    );
    Ok(out)
}

fn fill_grid(
    prefix: &mut Vec<i64>,
    remaining: i64,
    slots: usize,
    domain: GridDomain,
    resolution: u32,
    out: &mut Vec<GridPoint>,
) {
    let (lo, hi) = match domain {
        GridDomain::Sphere => (-remaining, remaining),
        GridDomain::TopFacet => (0, remaining),
        GridDomain::BottomFacet => (-remaining, 0),
    };
    if slots == 1 {
        // The last coordinate must absorb the whole remaining magnitude.
        let mut push = |v: i64| {
            prefix.push(v);
            out.push(GridPoint {
                k: prefix.clone(),
                resolution,
            });
            prefix.pop();
        };
        if remaining == 0 {
            push(0);
        } else {
            if lo == -remaining {
                push(-remaining);
            }
            if hi == remaining {
                push(remaining);
            }
        }
        return;
    }
    for v in lo..=hi {
        prefix.push(v);
        fill_grid(prefix, remaining - v.abs(), slots - 1, domain, resolution, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(coords: &[(i64, i64)]) -> SpherePoint {
        SpherePoint::new(coords.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
    }

    fn simplex(coords: &[(i64, i64)]) -> SimplexPoint {
        SimplexPoint::new(coords.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
    }

    #[test]
    fn sphere_point_validates_l1_norm() {
        assert!(SpherePoint::new(vec![rational(1, 2), rational(1, 2)]).is_ok());
        assert!(SpherePoint::new(vec![rational(-1, 2), rational(1, 2)]).is_ok());
        assert_eq!(
            SpherePoint::new(vec![rational(1, 2), rational(1, 4)]).unwrap_err(),
            GeometryError::NotOnSphere
        );
    }

    #[test]
    fn antipode_negates_and_involutes() {
        let p = sphere(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.antipode().coords(), sphere(&[(-1, 1), (0, 1), (0, 1)]).coords());
        let q = sphere(&[(-1, 3), (-1, 3), (-1, 3)]);
        assert_eq!(q.antipode(), sphere(&[(1, 3), (1, 3), (1, 3)]));
        assert_eq!(q.antipode().antipode(), q);
    }

    #[test]
    fn antipode_involution_on_whole_grid() {
        for p in enumerate_grid(2, 4, GridDomain::Sphere).unwrap() {
            assert_eq!(p.antipode().antipode(), p);
            assert_eq!(p.embed().antipode(), p.antipode().embed());
        }
    }

    #[test]
    fn positive_sum_examples() {
        assert_eq!(
            sphere(&[(1, 2), (-1, 4), (1, 4)]).positive_sum(),
            rational(3, 4)
        );
        // Top facet points always have positive part 1.
        assert_eq!(sphere(&[(1, 4), (1, 4), (1, 2)]).positive_sum(), rational(1, 1));
        assert_eq!(
            sphere(&[(-1, 2), (-1, 2), (0, 1)]).positive_sum(),
            Rational::zero()
        );
    }

    #[test]
    fn region_classification() {
        assert_eq!(sphere(&[(1, 3), (1, 3), (1, 3)]).region(), Region::Top);
        assert_eq!(sphere(&[(-1, 1), (0, 1), (0, 1)]).region(), Region::Bottom);
        assert_eq!(sphere(&[(1, 2), (-1, 2), (0, 1)]).region(), Region::Middle);
        // Points with zeros but no negatives count as top.
        assert_eq!(sphere(&[(1, 1), (0, 1), (0, 1)]).region(), Region::Top);
    }

    #[test]
    fn projection_matches_frozen_example() {
        let p = sphere(&[(1, 2), (-1, 4), (1, 4)]);
        let f = p.project_to_top().unwrap();
        assert_eq!(f, simplex(&[(2, 3), (0, 1), (1, 3)]));
    }

    #[test]
    fn projection_fixes_top_facet() {
        let p = sphere(&[(1, 4), (1, 4), (1, 2)]);
        assert_eq!(p.project_to_top().unwrap().coords(), p.coords());
    }

    #[test]
    fn projection_undefined_on_bottom() {
        let p = sphere(&[(-1, 2), (-1, 2), (0, 1)]);
        assert_eq!(
            p.project_to_top().unwrap_err(),
            GeometryError::ProjectionUndefined
        );
    }

    #[test]
    fn grid_counts() {
        // Octahedron vertices.
        assert_eq!(enumerate_grid(2, 1, GridDomain::Sphere).unwrap().len(), 6);
        // Stars and bars: C(3+2, 2) = 10.
        assert_eq!(enumerate_grid(2, 3, GridDomain::TopFacet).unwrap().len(), 10);
        // Direct enumeration of |k1| + |k2| = 2.
        assert_eq!(enumerate_grid(1, 2, GridDomain::Sphere).unwrap().len(), 8);
    }

    #[test]
    fn grid_enumeration_is_lexicographic_and_antipode_closed() {
        let pts = enumerate_grid(2, 3, GridDomain::Sphere).unwrap();
        for w in pts.windows(2) {
            assert!(w[0] < w[1]);
        }
        for p in &pts {
            assert!(pts.binary_search(&p.antipode()).is_ok());
        }
    }

    #[test]
    fn grid_validation_bounds() {
        assert!(matches!(
            enumerate_grid(7, 2, GridDomain::Sphere),
            Err(GeometryError::DimensionOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_grid(2, 0, GridDomain::Sphere),
            Err(GeometryError::ResolutionOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_grid(2, 65, GridDomain::Sphere),
            Err(GeometryError::ResolutionOutOfRange { .. })
        ));
        assert!(GridPoint::new(vec![1, 1, 1], 4).is_err());
    }

    #[test]
    fn radial_depth_examples() {
        let b = SimplexPoint::barycenter(2).unwrap();
        let (r, z) = b.radial_depth();
        assert!(r.is_zero());
        assert!(z.is_none());

        let corner = simplex(&[(1, 1), (0, 1), (0, 1)]);
        let (r, z) = corner.radial_depth();
        assert!(r.is_one());
        assert_eq!(z.unwrap(), corner);

        let y = simplex(&[(1, 2), (1, 4), (1, 4)]);
        let (r, z) = y.radial_depth();
        assert_eq!(r, rational(1, 4));
        let z = z.unwrap();
        // Ray from the barycenter through y exits at a boundary point.
        assert_eq!(z, simplex(&[(1, 1), (0, 1), (0, 1)]));
        assert!(z.on_boundary());
    }

    #[test]
    fn collar_push_fixed_points() {
        let b = SimplexPoint::barycenter(2).unwrap();
        let c = CollarPoint::new(b.clone(), Rational::zero()).unwrap();
        assert_eq!(collar_push(&c), b);

        let x = simplex(&[(1, 2), (1, 2), (0, 1)]);
        let c = CollarPoint::new(x.clone(), Rational::one()).unwrap();
        assert_eq!(collar_push(&c), x);
    }

    #[test]
    fn collar_invariant_enforced() {
        let interior = SimplexPoint::barycenter(2).unwrap();
        assert_eq!(
            CollarPoint::new(interior, rational(1, 2)).unwrap_err(),
            GeometryError::InvalidCollar
        );
        let x = simplex(&[(1, 2), (1, 2), (0, 1)]);
        assert!(CollarPoint::new(x.clone(), rational(3, 2)).is_err());
        assert!(CollarPoint::new(x, rational(-1, 2)).is_err());
    }

    #[test]
    fn collar_round_trip_on_grid() {
        // push ∘ pull is the identity on Δ^d.
        for d in 1..=3usize {
            for g in enumerate_grid(d, 4, GridDomain::TopFacet).unwrap() {
                let y = g.to_simplex().unwrap();
                assert_eq!(collar_push(&collar_pull(&y)), y);
            }
        }
    }

    #[test]
    fn collar_seam_uses_height_zero() {
        // A point at radial depth exactly 1/2 pulls back to height 0.
        let y = simplex(&[(1, 6), (1, 6), (2, 3)]);
        assert_eq!(y.radial_depth().0, rational(1, 2));
        let c = collar_pull(&y);
        assert!(c.height().is_zero());
        assert_eq!(c.base(), &simplex(&[(0, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn l1_distance_symmetric() {
        let a = simplex(&[(1, 2), (1, 4), (1, 4)]);
        let b = simplex(&[(1, 3), (1, 3), (1, 3)]);
        assert_eq!(l1_distance(a.coords(), b.coords()), rational(1, 3));
        assert_eq!(
            l1_distance(a.coords(), b.coords()),
            l1_distance(b.coords(), a.coords())
        );
    }
}
