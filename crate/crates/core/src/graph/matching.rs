use petgraph::algo::matching::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use super::{Edge, Graph};

/// A set of vertex-disjoint graph edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<Edge>,
}

impl Matching {
    pub fn pairs(&self) -> &[Edge] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `mate[v]` is the vertex matched to `v`.
    pub fn mates(&self, n: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; n];
        for e in &self.pairs {
            mate[e.0] = Some(e.1);
            mate[e.1] = Some(e.0);
        }
        mate
    }
}

/// Maximum cardinality matching of a general graph (Edmonds' blossom algorithm).
pub fn max_matching(g: &Graph) -> Matching {
    let mut pg: UnGraph<(), ()> = UnGraph::with_capacity(g.n(), g.m());
    let nodes: Vec<NodeIndex> = (0..g.n()).map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(nodes[e.0], nodes[e.1], ());
    }
    let m = maximum_matching(&pg);
    let mut pairs: Vec<Edge> = m
        .edges()
        .map(|(a, b)| Edge::new(a.index(), b.index()))
        .collect();
    pairs.sort();
    Matching { pairs }
}

/// Maximum bipartite matching by augmenting paths (Kuhn).
///
/// `adjacent(l, r)` says whether left item `l` may be matched to right item
/// `r`. Returns `assign[l] = Some(r)` for matched left items. Left items are
/// processed in order and right items are tried in ascending order, so the
/// result is deterministic.
pub fn bipartite_matching(
    left: usize,
    right: usize,
    adjacent: impl Fn(usize, usize) -> bool,
) -> Vec<Option<usize>> {
    let adj: Vec<Vec<usize>> = (0..left)
        .map(|l| (0..right).filter(|&r| adjacent(l, r)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for l in 0..left {
        let mut seen = vec![false; right];
        augment(l, &adj, &mut owner, &mut seen);
    }
    let mut assign = vec![None; left];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = o {
            assign[*l] = Some(r);
        }
    }
    assign
}

fn augment(l: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &r in &adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        match owner[r] {
            None => {
                owner[r] = Some(l);
                return true;
            }
            Some(other) => {
                if augment(other, adj, owner, seen) {
                    owner[r] = Some(l);
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_matching_size(g: &Graph) -> usize {
        let m = g.m();
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let mut used = vec![false; g.n()];
            let mut ok = true;
            for (i, e) in g.edges().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    if used[e.0] || used[e.1] {
                        ok = false;
                        break;
                    }
                    used[e.0] = true;
                    used[e.1] = true;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn small_examples() {
        let k2 = Graph::from_pairs(2, &[(0, 1)]).unwrap();
        let p4 = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c5 = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(max_matching(&k2).len(), 1);
        assert_eq!(max_matching(&p4).len(), 2);
        assert_eq!(max_matching(&c5).len(), 2);
        for g in [&p4, &c5] {
            assert_eq!(max_matching(g).len(), brute_force_matching_size(g));
        }
    }

    #[test]
    fn matching_pairs_are_disjoint_edges() {
        let g = Graph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
            .unwrap();
        let m = max_matching(&g);
        assert_eq!(m.len(), 3);
        let mut used = [false; 6];
        for e in m.pairs() {
            assert!(g.has_edge(e.0, e.1));
            assert!(!used[e.0] && !used[e.1]);
            used[e.0] = true;
            used[e.1] = true;
        }
    }

    #[test]
    fn kuhn_finds_perfect_matching() {
        // left 0 -> {0,1}, left 1 -> {0}
        let a = bipartite_matching(2, 2, |l, r| l == 0 || r == 0);
        assert_eq!(a, vec![Some(1), Some(0)]);
    }
}
