//! Property-based invariants across the geometry and cover layers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use antipode_core::{
    antipode_pairs, antipode_scan, brute_intersection, collar_pull, collar_push, enumerate_grid,
    exposure_set, rational, verify_cover, verify_kkm, verify_nondegenerate, CollarPoint, Cover,
    ExtendedCover, GridDomain, GridPoint, IndexSet, Provenance, Rational, Region, SimplexPoint,
    SpherePoint,
};

fn nonzero_coords(dim: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-20i64..=20, 1i64..=12), dim + 1)
        .prop_filter("needs a nonzero coordinate", |cs| {
            cs.iter().any(|&(n, _)| n != 0)
        })
}

/// Any nonzero rational vector normalizes exactly onto the sphere.
fn sphere_point(dim: usize) -> impl Strategy<Value = SpherePoint> {
    nonzero_coords(dim).prop_map(|cs| {
        let raw: Vec<Rational> = cs.iter().map(|&(n, d)| rational(n, d)).collect();
        let norm = raw.iter().fold(Rational::zero(), |a, c| a + c.abs());
        SpherePoint::new(raw.into_iter().map(|c| c / &norm).collect()).unwrap()
    })
}

fn simplex_point(dim: usize) -> impl Strategy<Value = SimplexPoint> {
    proptest::collection::vec((0i64..=20, 1i64..=12), dim + 1)
        .prop_filter("needs a positive coordinate", |cs| {
            cs.iter().any(|&(n, _)| n > 0)
        })
        .prop_map(|cs| {
            let raw: Vec<Rational> = cs.iter().map(|&(n, d)| rational(n, d)).collect();
            let sum = raw.iter().fold(Rational::zero(), |a, c| a + c);
            SimplexPoint::new(raw.into_iter().map(|c| c / &sum).collect()).unwrap()
        })
}

fn interior_target(dim: usize) -> impl Strategy<Value = SimplexPoint> {
    proptest::collection::vec(1i64..=12, dim + 1).prop_map(|parts| {
        let total: i64 = parts.iter().sum();
        SimplexPoint::new(parts.iter().map(|&p| rational(p, total)).collect()).unwrap()
    })
}

/// A collar point: either height 0 over anywhere, or positive height over
/// a boundary point (one coordinate forced to zero).
fn collar_point(dim: usize) -> impl Strategy<Value = CollarPoint> {
    prop_oneof![
        simplex_point(dim).prop_map(|p| CollarPoint::new(p, Rational::zero()).unwrap()),
        (simplex_point(dim), 0..=dim, 0i64..=8).prop_map(move |(p, zero_at, h)| {
            let mut cs: Vec<Rational> = p.coords().to_vec();
            let removed = cs[zero_at].clone();
            cs[zero_at] = Rational::zero();
            let keep = Rational::one() - &removed;
            let base = if keep.is_zero() {
                // Degenerate rescale; fall back to a vertex off the zeroed slot.
                let mut vertex = vec![Rational::zero(); cs.len()];
                vertex[(zero_at + 1) % cs.len()] = Rational::one();
                SimplexPoint::new(vertex).unwrap()
            } else {
                SimplexPoint::new(cs.into_iter().map(|c| c / &keep).collect()).unwrap()
            };
            CollarPoint::new(base, rational(h, 8)).unwrap()
        }),
    ]
}

fn random_labeling(dim: usize, n: u32) -> impl Strategy<Value = BTreeMap<GridPoint, IndexSet>> {
    let top = enumerate_grid(dim, n, GridDomain::TopFacet).unwrap();
    let count = top.len();
    proptest::collection::vec(1u8..(1 << (dim + 1)), count).prop_map(move |masks| {
        top.iter()
            .cloned()
            .zip(masks.iter().map(|&m| {
                (0..=dim).filter(|&i| m & (1 << i) != 0).collect::<IndexSet>()
            }))
            .collect()
    })
}

proptest! {
    #[test]
    fn antipode_is_an_involution(p in sphere_point(2)) {
        prop_assert_eq!(p.antipode().antipode(), p);
    }

    #[test]
    fn bottom_region_iff_zero_positive_sum(p in sphere_point(3)) {
        prop_assert_eq!(p.region() == Region::Bottom, p.positive_sum().is_zero());
    }

    #[test]
    fn projection_invariants(p in sphere_point(3)) {
        prop_assume!(!p.positive_sum().is_zero());
        let f = p.project_to_top().unwrap();
        let sum = f.coords().iter().fold(Rational::zero(), |a, c| a + c);
        prop_assert!(sum.is_one());
        for (fi, xi) in f.coords().iter().zip(p.coords()) {
            prop_assert!(!fi.is_negative());
            prop_assert_eq!(fi.is_positive(), xi.is_positive());
        }
    }

    #[test]
    fn projection_fixes_top_points(q in simplex_point(2)) {
        let f = q.to_sphere().project_to_top().unwrap();
        prop_assert_eq!(f, q);
    }

    #[test]
    fn collar_pull_inverts_push(c in collar_point(2)) {
        let pushed = collar_push(&c);
        let pulled = collar_pull(&pushed);
        prop_assert_eq!(pulled.base(), c.base());
        prop_assert_eq!(pulled.height(), c.height());
    }

    #[test]
    fn collar_push_inverts_pull(y in simplex_point(3)) {
        prop_assert_eq!(collar_push(&collar_pull(&y)), y);
    }

    #[test]
    fn top_grid_count_is_binomial(dim in 1usize..=4, n in 1u32..=8) {
        let pts = enumerate_grid(dim, n, GridDomain::TopFacet).unwrap();
        let expected = binomial(BigInt::from(n as usize + dim), BigInt::from(dim));
        prop_assert_eq!(BigInt::from(pts.len()), expected);
    }

    #[test]
    fn sphere_grid_sorted_and_antipode_closed(dim in 1usize..=3, n in 1u32..=6) {
        let pts = enumerate_grid(dim, n, GridDomain::Sphere).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for p in &pts {
            prop_assert!(pts.binary_search(&p.antipode()).is_ok());
        }
    }

    #[test]
    fn ratio_target_belongs_to_every_set(target in interior_target(2)) {
        let cover = Cover::ratio(2, target.clone()).unwrap();
        prop_assert_eq!(cover.membership(&target), IndexSet::full(3));
    }

    #[test]
    fn ratio_cover_checks_pass(target in interior_target(2), n in 1u32..=8) {
        let cover = Cover::ratio(2, target).unwrap();
        prop_assert!(verify_cover(&cover, n).unwrap().passed());
        prop_assert!(verify_kkm(&cover, n).unwrap().passed());
        prop_assert!(verify_nondegenerate(&cover, n).unwrap().passed());
    }

    /// Coverage plus non-degeneracy imply the KKM condition, for covers of
    /// every backend.
    #[test]
    fn coverage_and_nondegeneracy_imply_kkm(entries in random_labeling(2, 3)) {
        let cover = Cover::from_grid_labeling(2, 3, entries).unwrap();
        let covered = verify_cover(&cover, 3).unwrap().passed();
        let nondegenerate = verify_nondegenerate(&cover, 3).unwrap().passed();
        if covered && nondegenerate {
            prop_assert!(verify_kkm(&cover, 3).unwrap().passed());
        }
    }

    /// The exposure set always equals the antipodal image of the grid
    /// intersection, for arbitrary (even degenerate) covers: the two are
    /// computed along different code paths.
    #[test]
    fn exposure_duality_on_random_labelings(entries in random_labeling(2, 3)) {
        let cover = Cover::from_grid_labeling(2, 3, entries).unwrap();
        let exposed = exposure_set(&cover, 3).unwrap();
        let mut mirrored: Vec<GridPoint> = brute_intersection(&cover, 3)
            .unwrap()
            .iter()
            .map(|p| p.antipode())
            .collect();
        mirrored.sort();
        prop_assert_eq!(exposed, mirrored);
    }

    /// The two antipode scanners agree on arbitrary extensions, including
    /// ones no cover could produce.
    #[test]
    fn antipode_scanners_agree(masks in proptest::collection::vec(0u8..8, 38)) {
        let sphere = enumerate_grid(2, 3, GridDomain::Sphere).unwrap();
        let entries: BTreeMap<GridPoint, Provenance> = sphere
            .into_iter()
            .zip(masks)
            .map(|(p, m)| {
                let sets: IndexSet = (0..3).filter(|&i| m & (1 << i) != 0).collect();
                let prov = if p.region() == Region::Bottom {
                    Provenance { projected: IndexSet::EMPTY, bottom: sets }
                } else {
                    Provenance { projected: sets, bottom: IndexSet::EMPTY }
                };
                (p, prov)
            })
            .collect();
        let ext = ExtendedCover::from_parts(2, 3, entries).unwrap();
        prop_assert_eq!(antipode_pairs(&ext), antipode_scan(&ext));
    }

    /// Grid-labeled membership at any rational point is exactly the union
    /// of the labels of the nearest grid points, re-derived here from the
    /// raw table.
    #[test]
    fn nearest_label_convention(entries in random_labeling(1, 4), q in simplex_point(1)) {
        let cover = Cover::from_grid_labeling(1, 4, entries.clone()).unwrap();
        let best = entries
            .keys()
            .map(|g| {
                let s = g.to_simplex().unwrap();
                q.coords()
                    .iter()
                    .zip(s.coords())
                    .map(|(a, b)| (a - b).abs())
                    .max()
                    .unwrap()
            })
            .min()
            .unwrap();
        let mut expected = IndexSet::EMPTY;
        for (g, labels) in &entries {
            let s = g.to_simplex().unwrap();
            let dist = q
                .coords()
                .iter()
                .zip(s.coords())
                .map(|(a, b)| (a - b).abs())
                .max()
                .unwrap();
            if dist == best {
                expected = expected.union(*labels);
            }
        }
        prop_assert_eq!(cover.membership(&q), expected);
    }
}
