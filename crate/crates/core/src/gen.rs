//! Seeded random instances. The same seed and parameters always produce the
//! same instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cobip::{cobip_from_mask, CobipInstance};
use crate::graph::Graph;
use crate::reduction::RbdsInstance;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph on `n` vertices with edge probability `density`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(density.clamp(0.0, 1.0)) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_pairs(n, &pairs).expect("indices in range")
}

/// Random connected graph: a random spanning tree plus random extra edges.
pub fn random_connected_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((r.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && r.random_bool(density.clamp(0.0, 1.0)) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_pairs(n, &pairs).expect("indices in range")
}

/// Random red-blue instance with ids `r1..` and `b1..`. Every blue gets at
/// least one red neighbour.
pub fn random_rbds(r: usize, b: usize, density: f64, k: usize, seed: u64) -> RbdsInstance {
    let mut rg = rng(seed);
    let mut edges = Vec::new();
    for q in 1..=b {
        let mut any = false;
        for p in 1..=r {
            if rg.random_bool(density.clamp(0.0, 1.0)) {
                edges.push((format!("r{p}"), format!("b{q}")));
                any = true;
            }
        }
        if !any && r > 0 {
            let p = rg.random_range(1..=r);
            edges.push((format!("r{p}"), format!("b{q}")));
        }
    }
    RbdsInstance {
        reds: (1..=r).map(|p| format!("r{p}")).collect(),
        blues: (1..=b).map(|q| format!("b{q}")).collect(),
        edges,
        k,
    }
}

/// Random cobipartite graph with sides of size `p` and `q` (`p * q <= 64`),
/// normalized.
pub fn random_cobipartite(p: usize, q: usize, density: f64, seed: u64) -> CobipInstance {
    assert!(p * q <= 64, "cross pattern must fit in 64 bits");
    let mut r = rng(seed);
    let mut mask = 0u64;
    for bit in 0..p * q {
        if r.random_bool(density.clamp(0.0, 1.0)) {
            mask |= 1 << bit;
        }
    }
    cobip_from_mask(p, q, mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::serialize_graph;

    #[test]
    fn reproducible() {
        assert_eq!(serialize_graph(&random_graph(9, 0.4, 7)), serialize_graph(&random_graph(9, 0.4, 7)));
        assert_ne!(serialize_graph(&random_graph(9, 0.4, 7)), serialize_graph(&random_graph(9, 0.4, 8)));
        assert_eq!(random_rbds(4, 3, 0.3, 2, 1), random_rbds(4, 3, 0.3, 2, 1));
        assert_eq!(random_cobipartite(3, 4, 0.5, 2), random_cobipartite(3, 4, 0.5, 2));
    }

    #[test]
    fn shapes() {
        for seed in 0..20 {
            assert!(random_connected_graph(8, 0.1, seed).is_connected());
            let inst = random_rbds(3, 4, 0.2, 1, seed);
            assert!(inst.blue_neighbours().unwrap().iter().all(|nb| !nb.is_empty()));
            let c = random_cobipartite(4, 4, 0.5, seed);
            assert_eq!(c.g.n(), 8);
            assert!(c.p() <= c.q());
        }
    }
}
