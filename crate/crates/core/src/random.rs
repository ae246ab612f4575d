//! Seeded generators of small semigroupoids and relational functors.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::relational::RelationalFunctor;
use crate::semigroupoid::{ArrowSet, Semigroupoid};
use crate::transformation::{StateSet, Transformation, TransformationSemigroupoid};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const SEED_VAR: &str = "SGPOID_SEED";
pub const MAX_ARROWS: usize = 8;

/// The seed from `SGPOID_SEED`, or the default when unset or unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A transformation semigroupoid with 1 to 3 objects of 1 to 3 states each,
/// generated by 1 to 3 random typed maps and closing to at most `MAX_ARROWS` arrows.
pub fn random_ts(rng: &mut impl Rng) -> TransformationSemigroupoid {
    loop {
        let sizes: Vec<usize> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(1..=3))
            .collect();
        let sets: Vec<StateSet> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                StateSet::new(
                    format!("X{}", i + 1),
                    (0..n).map(|s| format!("{s}_{}", i + 1)),
                )
            })
            .collect();
        let generators = (0..rng.gen_range(1..=3))
            .map(|g| {
                let dom = rng.gen_range(0..sizes.len());
                let cod = rng.gen_range(0..sizes.len());
                let mapping = (0..sizes[dom])
                    .map(|_| rng.gen_range(0..sizes[cod]))
                    .collect();
                (format!("g{g}"), Transformation::new(dom, cod, mapping))
            })
            .collect();
        let ts = TransformationSemigroupoid::generate_closure(sets, generators)
            .expect("generators are typed by construction");
        if ts.arrow_count() <= MAX_ARROWS {
            return ts;
        }
    }
}

pub fn random_semigroupoid(rng: &mut impl Rng) -> Arc<Semigroupoid> {
    Arc::new(random_ts(rng).abstract_().clone())
}

/// `X→Y ↦ hom(X, Y)`: the type semigroupoid related back to every arrow of each type.
pub fn types_inverse(s: Arc<Semigroupoid>) -> RelationalFunctor {
    let types = RelationalFunctor::to_types(s.clone());
    let pre = types.preimages().expect("every type is inhabited");
    RelationalFunctor::new(types.target_arc().clone(), s, pre).expect("well-typed arrow map")
}

/// A random relation from `s` into `t`, retried until it is a valid surjective functor.
pub fn search_functor(
    rng: &mut impl Rng,
    s: &Arc<Semigroupoid>,
    t: &Arc<Semigroupoid>,
    attempts: usize,
) -> Option<RelationalFunctor> {
    let targets: Vec<usize> = (0..t.arrow_count()).collect();
    (0..attempts).find_map(|_| {
        let map: Vec<ArrowSet> = (0..s.arrow_count())
            .map(|_| {
                let k = rng.gen_range(1..=targets.len().min(2));
                targets.choose_multiple(rng, k).copied().collect()
            })
            .collect();
        let phi = RelationalFunctor::new(s.clone(), t.clone(), map).ok()?;
        (phi.is_valid() && phi.classify().surjective).then_some(phi)
    })
}

/// One random functor out of `s`, valid and surjective.
pub fn functor_from(rng: &mut impl Rng, s: Arc<Semigroupoid>) -> RelationalFunctor {
    match rng.gen_range(0..4) {
        0 => RelationalFunctor::identity(s),
        1 => RelationalFunctor::to_trivial(s),
        2 => RelationalFunctor::to_types(s),
        _ => {
            let t = random_semigroupoid(rng);
            search_functor(rng, &s, &t, 200).unwrap_or_else(|| RelationalFunctor::to_types(s))
        }
    }
}

/// A valid surjective functor between random semigroupoids with at most `MAX_ARROWS` arrows.
pub fn random_functor(rng: &mut impl Rng) -> RelationalFunctor {
    let s = random_semigroupoid(rng);
    if rng.gen_bool(0.2) {
        types_inverse(s)
    } else {
        functor_from(rng, s)
    }
}

/// Two composable random functors.
pub fn random_chain(rng: &mut impl Rng) -> (RelationalFunctor, RelationalFunctor) {
    let first = random_functor(rng);
    let second = functor_from(rng, first.target_arc().clone());
    (first, second)
}
