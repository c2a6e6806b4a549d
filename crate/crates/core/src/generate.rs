//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::pattern::{Coloring, Label};
use crate::{Error, Result};

/// The single generator type behind every `seed` argument.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)`, pairs visited in lexicographic order.
pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Unsupported(format!("edge probability {p} outside [0, 1]")));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

pub fn gnp_seeded(n: usize, p: f64, seed: u64) -> Result<Graph> {
    gnp(n, p, &mut rng(seed))
}

/// Uniform labels from `0..h` for every vertex.
pub fn random_coloring<R: Rng>(n: usize, h: usize, rng: &mut R) -> Coloring {
    let labels = (0..n).map(|_| rng.gen_range(0..h) as Label).collect();
    Coloring::new(labels, h).expect("labels in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_and_determinism() {
        assert_eq!(gnp_seeded(0, 0.5, 1).unwrap().vertex_count(), 0);
        assert_eq!(gnp_seeded(5, 1.0, 1).unwrap(), Graph::complete(5));
        assert_eq!(gnp_seeded(9, 0.4, 7).unwrap(), gnp_seeded(9, 0.4, 7).unwrap());
        assert!(gnp_seeded(3, 1.5, 0).is_err());
    }
}
