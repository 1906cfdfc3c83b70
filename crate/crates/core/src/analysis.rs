//! Independent oracles and approximation, kept deliberately separate from
//! the construction layer so the two can check each other:
//!
//! - [`brute_intersection`] enumerates the common intersection on the top
//!   grid directly, without going through bottom complements;
//! - [`antipode_scan`] re-finds antipodal pairs in an extension with a
//!   different traversal than
//!   [`antipode_pairs`](crate::construction::antipode_pairs);
//! - [`star_certificates`] localize an off-grid intersection point by
//!   panchromatic closed stars;
//! - [`resolution_sweep`] tabulates all of the above across resolutions.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::construction::ExtendedCover;
use crate::cover::{Cover, CoverError, CoverSpec};
use crate::geometry::{
    enumerate_grid, l1_distance, GeometryError, GridDomain, GridPoint, Region,
};
use crate::indices::IndexSet;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// All top grid points belonging to every cover set, in lexicographic
/// order. The direct route to the grid common intersection.
pub fn brute_intersection(
    cover: &Cover,
    resolution: u32,
) -> Result<Vec<GridPoint>, GeometryError> {
    let top = enumerate_grid(cover.dim(), resolution, GridDomain::TopFacet)?;
    Ok(top
        .into_iter()
        .filter(|g| {
            let x = g.to_simplex().expect("top facet point");
            (0..cover.set_count()).all(|i| cover.contains(i, &x))
        })
        .collect())
}

/// Re-finds the antipodal pairs of an extension by iterating the bottom
/// and middle points and testing each point against its antipode (every
/// antipodal pair has an endpoint there). Output matches
/// [`antipode_pairs`](crate::construction::antipode_pairs) exactly:
/// one entry per pair, smaller endpoint first, ordered by `(point, set)`.
pub fn antipode_scan(extension: &ExtendedCover) -> Vec<(usize, GridPoint)> {
    let mut found: BTreeSet<(GridPoint, usize)> = BTreeSet::new();
    for (point, prov) in extension.iter() {
        if point.region() == Region::Top {
            continue;
        }
        let opposite = point.antipode();
        let shared = prov.all().intersection(extension.membership(&opposite));
        for i in shared.iter() {
            let canonical = core::cmp::min(point.clone(), opposite.clone());
            found.insert((canonical, i));
        }
    }
    found.into_iter().map(|(p, i)| (i, p)).collect()
}

/// A top grid point whose closed star — the point plus its in-facet
/// neighbors at steps `(e_a - e_b)/N` — meets every cover set. The star
/// has L1 radius `2/N`, so certificates localize an intersection point
/// even when it lies off the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCertificate {
    pub center: GridPoint,
    /// The indices the star meets: always the full index set.
    pub covered: IndexSet,
}

/// All panchromatic closed stars of the top grid, in lexicographic order
/// of their centers.
pub fn star_certificates(
    cover: &Cover,
    resolution: u32,
) -> Result<Vec<StarCertificate>, GeometryError> {
    let top = enumerate_grid(cover.dim(), resolution, GridDomain::TopFacet)?;
    let sets = cover.set_count();
    let mut certificates = Vec::new();
    for center in top {
        let star = closed_star(&center);
        let covered: IndexSet = (0..sets)
            .filter(|&i| {
                star.iter()
                    .any(|g| cover.contains(i, &g.to_simplex().expect("top facet point")))
            })
            .collect();
        if covered == IndexSet::full(sets) {
            certificates.push(StarCertificate { center, covered });
        }
    }
    Ok(certificates)
}

/// The center plus every `center + e_a - e_b` that stays on the top facet.
fn closed_star(center: &GridPoint) -> Vec<GridPoint> {
    let mut pts = Vec::new();
    pts.push(center.clone());
    let coords = center.k().len();
    for a in 0..coords {
        for b in 0..coords {
            if a == b || center.k()[b] < 1 {
                continue;
            }
            let mut k = center.k().to_vec();
            k[a] += 1;
            k[b] -= 1;
            pts.push(
                GridPoint::new(k, center.resolution())
                    .expect("star step preserves the grid identity"),
            );
        }
    }
    pts
}

/// One resolution's worth of sweep data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub resolution: u32,
    /// Size of the grid common intersection.
    pub intersection_count: usize,
    /// Size of the exposure set; always equals `intersection_count`, but
    /// computed through the bottom complements as a cross-check.
    pub exposure_count: usize,
    /// Number of panchromatic closed stars.
    pub star_count: usize,
    /// L1 distance from the best star center to the spec's target, when
    /// the spec has one and a certificate exists.
    pub best_star_distance: Option<Rational>,
}

/// Computes one sweep row for a cover spec at one resolution. Rebuilds the
/// cover from the spec so rows are independent and may be computed in
/// parallel.
pub fn sweep_row(spec: &CoverSpec, resolution: u32) -> Result<SweepRow, AnalysisError> {
    let cover = Cover::from_spec(spec.clone())?;
    let intersection = brute_intersection(&cover, resolution)?;
    let exposure = crate::construction::exposure_set(&cover, resolution)?;
    let stars = star_certificates(&cover, resolution)?;
    let best_star_distance = spec.target().and_then(|target| {
        stars
            .iter()
            .map(|c| {
                l1_distance(
                    c.center
                        .to_simplex()
                        .expect("star centers live on the top facet")
                        .coords(),
                    target.coords(),
                )
            })
            .min()
    });
    Ok(SweepRow {
        resolution,
        intersection_count: intersection.len(),
        exposure_count: exposure.len(),
        star_count: stars.len(),
        best_star_distance,
    })
}

/// Sweeps a cover spec across resolutions, one row per requested `N`, in
/// the order given. Rows never extrapolate; they present per-resolution
/// counts only.
pub fn resolution_sweep(
    spec: &CoverSpec,
    resolutions: &[u32],
) -> Result<Vec<SweepRow>, AnalysisError> {
    resolutions.iter().map(|&n| sweep_row(spec, n)).collect()
}

/// Convenience for tests and reports: the L1 distance of the best star
/// center to a target, if any certificate exists.
pub fn best_star_distance(
    stars: &[StarCertificate],
    target: &crate::geometry::SimplexPoint,
) -> Option<Rational> {
    stars
        .iter()
        .map(|c| {
            l1_distance(
                c.center.to_simplex().expect("top facet point").coords(),
                target.coords(),
            )
        })
        .min()
        .filter(|_| !stars.is_empty())
        .map(|d| if d.is_zero() { Rational::zero() } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::assemble_extended;
    use crate::geometry::{rational, SimplexPoint};

    fn simplex(coords: &[(i64, i64)]) -> SimplexPoint {
        SimplexPoint::new(coords.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
    }

    fn grid(k: &[i64], n: u32) -> GridPoint {
        GridPoint::new(k.to_vec(), n).unwrap()
    }

    fn skew_cover() -> Cover {
        Cover::ratio(2, simplex(&[(1, 2), (1, 4), (1, 4)])).unwrap()
    }

    #[test]
    fn brute_intersection_frozen_examples() {
        let barycentric = Cover::ratio(2, SimplexPoint::barycenter(2).unwrap()).unwrap();
        assert_eq!(
            brute_intersection(&barycentric, 3).unwrap(),
            vec![grid(&[1, 1, 1], 3)]
        );
        assert_eq!(
            brute_intersection(&skew_cover(), 4).unwrap(),
            vec![grid(&[2, 1, 1], 4)]
        );
        assert!(brute_intersection(&skew_cover(), 3).unwrap().is_empty());
    }

    #[test]
    fn scan_agrees_on_clean_extension() {
        let ext = assemble_extended(&skew_cover(), 3).unwrap();
        assert!(antipode_scan(&ext).is_empty());
        assert_eq!(antipode_scan(&ext), crate::construction::antipode_pairs(&ext));
    }

    #[test]
    fn star_certificates_frozen_at_n3() {
        // Independently derived: the six panchromatic stars of the skew
        // ratio cover at N=3, best center at the barycenter, distance 1/3.
        let stars = star_certificates(&skew_cover(), 3).unwrap();
        let centers: Vec<_> = stars.iter().map(|s| s.center.clone()).collect();
        assert_eq!(
            centers,
            vec![
                grid(&[1, 0, 2], 3),
                grid(&[1, 1, 1], 3),
                grid(&[1, 2, 0], 3),
                grid(&[2, 0, 1], 3),
                grid(&[2, 1, 0], 3),
                grid(&[3, 0, 0], 3),
            ]
        );
        let best = best_star_distance(&stars, &simplex(&[(1, 2), (1, 4), (1, 4)]));
        assert_eq!(best, Some(rational(1, 3)));
    }

    #[test]
    fn star_certificate_contains_on_grid_target() {
        let stars = star_certificates(&skew_cover(), 4).unwrap();
        assert!(stars.iter().any(|s| s.center == grid(&[2, 1, 1], 4)));
        let best = best_star_distance(&stars, &simplex(&[(1, 2), (1, 4), (1, 4)]));
        assert_eq!(best, Some(Rational::zero()));
    }

    #[test]
    fn missing_index_everywhere_gives_no_certificates() {
        // A labeling that never uses set 0 cannot have a panchromatic
        // star.
        let entries: alloc::collections::BTreeMap<_, _> =
            enumerate_grid(2, 3, GridDomain::TopFacet)
                .unwrap()
                .into_iter()
                .map(|g| (g, IndexSet::singleton(1)))
                .collect();
        let cover = Cover::from_grid_labeling(2, 3, entries).unwrap();
        assert!(star_certificates(&cover, 3).unwrap().is_empty());
    }

    #[test]
    fn sweep_counts_track_target_divisibility() {
        let spec = CoverSpec::ratio(2, simplex(&[(1, 2), (1, 4), (1, 4)]));
        let rows = resolution_sweep(&spec, &[3, 4, 8]).unwrap();
        let counts: Vec<_> = rows.iter().map(|r| r.intersection_count).collect();
        assert_eq!(counts, vec![0, 1, 1]);
        for row in &rows {
            assert_eq!(row.intersection_count, row.exposure_count);
            assert!(row.star_count > 0);
        }
        assert_eq!(rows[0].best_star_distance, Some(rational(1, 3)));
        assert_eq!(rows[1].best_star_distance, Some(Rational::zero()));
    }

    #[test]
    fn sweep_of_barycenter_target_always_intersects() {
        let spec = CoverSpec::ratio(2, SimplexPoint::barycenter(2).unwrap());
        let rows = resolution_sweep(&spec, &[3, 6, 9]).unwrap();
        assert!(rows.iter().all(|r| r.intersection_count == 1));
    }
}
