//! Exact rational machinery for covers of the standard simplex and their
//! antipode-free extensions to the sphere of the L1 norm.
//!
//! Everything here is computed with arbitrary-precision rationals, so
//! membership, antipodality, and intersection questions are decided exactly
//! rather than up to a floating-point tolerance. The crate is organized
//! around four layers:
//!
//! - [`geometry`]: points of the simplex `Δ^d` and the L1 sphere `Σ^d`,
//!   integer grids of resolution `N`, facet classification, the projection
//!   of the sphere onto its top facet, and the collar map used to thicken
//!   a simplex boundary.
//! - [`cover`]: covers of `Δ^d` by `d+1` membership predicates, the KKM
//!   cover conditions, and the collar thickening that repairs degenerate
//!   covers.
//! - [`construction`]: extension of an intersection-free cover of the top
//!   facet to an antipode-free cover of the whole sphere grid, exposure
//!   sets, and the end-to-end pipeline.
//! - [`analysis`]: independent oracles (brute-force intersection, a second
//!   antipode scanner), closed-star certificates for off-grid intersection
//!   points, and resolution sweeps.
//!
//! The crate is `no_std` (with `alloc`) and performs no IO; serialization
//! and the command-line front end live in the companion `antipode-bridge`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod construction;
pub mod cover;
pub mod geometry;
pub mod indices;

/// Exact rational scalar used for every coordinate and threshold.
pub type Rational = num_rational::BigRational;

pub use num_bigint::BigInt;

pub use analysis::{
    antipode_scan, best_star_distance, brute_intersection, resolution_sweep, star_certificates,
    sweep_row, AnalysisError, StarCertificate, SweepRow,
};
pub use construction::{
    antipode_pairs, assemble_extended, build_bottom_closed, build_bottom_complements,
    build_projected, exposure_set, run_pipeline, verify_construction, violation_scan,
    ConstructionError, ConstructionReport, CoverStats, ExtendedCover, FacetSets, PipelineOutcome,
    PipelineReport, Provenance, Violation,
};
pub use cover::{
    verify_cover, verify_kkm, verify_nondegenerate, Cover, CoverError, CoverKind, CoverSpec,
    CoverageReport, FaceAssignment, KkmReport, NondegeneracyReport,
};
pub use geometry::{
    collar_pull, collar_push, enumerate_grid, l1_distance, rational, CollarPoint, GeometryError,
    GridDomain, GridPoint, Region, SimplexPoint, SpherePoint, MAX_DIM, MAX_RESOLUTION,
};
pub use indices::IndexSet;
