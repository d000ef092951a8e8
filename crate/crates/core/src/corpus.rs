//! Seeded random presentations for differential testing.

use rand::Rng;

use crate::gammoid::DigraphRep;
use crate::ground::SetSystem;
use crate::set::{Element, ElementSet};

/// Each ordered pair becomes an arc with probability `arc_p`; each vertex is
/// a sink with probability `sink_p`.
pub fn random_digraph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    arc_p: f64,
    sink_p: f64,
) -> DigraphRep {
    let mut out = vec![ElementSet::empty(n); n];
    let mut sinks = ElementSet::empty(n);
    for (u, out_u) in out.iter_mut().enumerate() {
        for v in 0..n {
            if u != v && rng.gen_bool(arc_p) {
                out_u.insert(Element::new(v));
            }
        }
        if rng.gen_bool(sink_p) {
            sinks.insert(Element::new(u));
        }
    }
    DigraphRep::from_out_sets(n, out, sinks).expect("generated arcs are valid")
}

/// `sets` sets, each containing every element independently with
/// probability `p`.
pub fn random_set_system<R: Rng + ?Sized>(rng: &mut R, n: usize, sets: usize, p: f64) -> SetSystem {
    let family = (0..sets)
        .map(|_| ElementSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(p))))
        .collect();
    SetSystem::new(n, family).expect("generated sets are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generation_is_reproducible() {
        let a = random_digraph(&mut ChaCha8Rng::seed_from_u64(7), 8, 0.3, 0.4);
        let b = random_digraph(&mut ChaCha8Rng::seed_from_u64(7), 8, 0.3, 0.4);
        assert_eq!(a, b);
        let s = random_set_system(&mut ChaCha8Rng::seed_from_u64(7), 6, 3, 0.5);
        assert_eq!(
            s,
            random_set_system(&mut ChaCha8Rng::seed_from_u64(7), 6, 3, 0.5)
        );
    }
}
