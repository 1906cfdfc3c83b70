//! Seeded generation of cover specs.
//!
//! The same seed always produces the same spec, byte for byte once
//! serialized: the generator is a fixed-algorithm ChaCha stream and the
//! wire format is deterministic.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use antipode_core::{rational, CoverError, CoverSpec, FaceAssignment, SimplexPoint, MAX_DIM};

/// Largest denominator of generated ratio targets.
pub const MAX_TARGET_DENOMINATOR: i64 = 12;

/// Generates a ratio cover spec with a random interior target of
/// denominator at most [`MAX_TARGET_DENOMINATOR`], or a degenerate variant
/// that additionally grants one whole face to a set.
pub fn generate_spec(dim: usize, seed: u64, degenerate: bool) -> Result<CoverSpec, CoverError> {
    if dim < 1 || dim > MAX_DIM {
        return Err(antipode_core::GeometryError::DimensionOutOfRange { dim }.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // A composition of q into d+1 positive parts: an interior target with
    // every coordinate a_i/q, so denominators divide q <= 12.
    let q = rng.random_range((dim as i64 + 1).max(2)..=MAX_TARGET_DENOMINATOR);
    let mut cuts: Vec<i64> = sample(&mut rng, (q - 1) as usize, dim)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(q);
    let coords = cuts
        .windows(2)
        .map(|w| rational(w[1] - w[0], q))
        .collect::<Vec<_>>();
    let target = SimplexPoint::new(coords).expect("composition sums to q");

    let mut spec = if degenerate {
        // Grant one whole face to a set. Any (set, face) pair forces a
        // degeneracy witness when d >= 2; for d = 1 only set == face does
        // (the face {x_j = 0} is the opposite vertex, already in its own
        // set with a positive coordinate).
        let face = rng.random_range(0..=dim);
        let set = if dim == 1 {
            face
        } else {
            rng.random_range(0..=dim)
        };
        CoverSpec::degenerate_ratio(dim, target, vec![FaceAssignment { set, face }])
    } else {
        CoverSpec::ratio(dim, target)
    };
    spec.name = Some(format!(
        "{}-d{dim}-seed{seed}",
        if degenerate { "degenerate-ratio" } else { "ratio" }
    ));
    spec.seed = Some(seed);
    spec.validate()?;
    Ok(spec)
}
