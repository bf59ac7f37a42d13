use std::collections::VecDeque;

use super::{max_matching, two_coloring, Edge, Graph, GraphError, VertexSet};

/// Default vertex-count limit for [`mvc_exact`].
pub const DEFAULT_MVC_LIMIT: usize = 24;

const BRUTE_FORCE_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub size: usize,
    pub witness: VertexSet,
}

pub fn is_vertex_cover(g: &Graph, s: &VertexSet) -> bool {
    uncovered_edge(g, s).is_none()
}

/// First edge (canonical order) with no endpoint in `s`.
pub fn uncovered_edge(g: &Graph, s: &VertexSet) -> Option<Edge> {
    g.edges()
        .iter()
        .copied()
        .find(|e| !s.contains(e.0) && !s.contains(e.1))
}

pub fn mvc_exact(g: &Graph) -> Result<CoverResult, GraphError> {
    mvc_exact_with_limit(g, DEFAULT_MVC_LIMIT)
}

pub fn mvc_exact_with_limit(g: &Graph, limit: usize) -> Result<CoverResult, GraphError> {
    if g.n() > limit {
        return Err(GraphError::SizeLimit { n: g.n(), limit });
    }
    Ok(mvc_branch_and_bound(g))
}

/// Exhaustive search over subsets in order of increasing size.
pub fn mvc_brute_force(g: &Graph) -> Result<CoverResult, GraphError> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(GraphError::SizeLimit {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut masks: Vec<u32> = (0u32..1 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let s: VertexSet = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        if is_vertex_cover(g, &s) {
            return Ok(CoverResult {
                size: s.len(),
                witness: s,
            });
        }
    }
    unreachable!("the full vertex set is a cover")
}

/// Branch and bound on a maximum-degree vertex with degree-0/1 reductions and a
/// greedy-matching lower bound. No size limit is enforced here.
pub fn mvc_branch_and_bound(g: &Graph) -> CoverResult {
    let mut best = VertexSet::full(g.n());
    let alive = VertexSet::full(g.n());
    search(g, alive, VertexSet::new(), &mut best);
    CoverResult {
        size: best.len(),
        witness: best,
    }
}

fn alive_degree(g: &Graph, alive: &VertexSet, v: usize) -> usize {
    g.neighbors(v).iter().filter(|&&w| alive.contains(w)).count()
}

fn search(g: &Graph, mut alive: VertexSet, mut cover: VertexSet, best: &mut VertexSet) {
    // degree 0 / degree 1 reductions to fixpoint
    loop {
        let mut changed = false;
        for v in alive.to_vec() {
            if !alive.contains(v) {
                continue;
            }
            match alive_degree(g, &alive, v) {
                0 => {
                    alive.remove(v);
                    changed = true;
                }
                1 => {
                    let w = *g.neighbors(v).iter().find(|&&w| alive.contains(w)).unwrap();
                    cover.insert(w);
                    alive.remove(w);
                    alive.remove(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if cover.len() >= best.len() {
        return;
    }
    if alive.is_empty() {
        *best = cover;
        return;
    }
    // greedy maximal matching on the remaining graph bounds the remaining cover size
    let mut used = VertexSet::new();
    let mut bound = 0;
    for v in &alive {
        if used.contains(v) {
            continue;
        }
        if let Some(&w) = g
            .neighbors(v)
            .iter()
            .find(|&&w| alive.contains(w) && !used.contains(w))
        {
            used.insert(v);
            used.insert(w);
            bound += 1;
        }
    }
    if cover.len() + bound >= best.len() {
        return;
    }
    let v = alive
        .iter()
        .max_by_key(|&v| (alive_degree(g, &alive, v), std::cmp::Reverse(v)))
        .unwrap();

    let mut with_v = cover.clone();
    with_v.insert(v);
    let mut rest = alive.clone();
    rest.remove(v);
    search(g, rest, with_v, best);

    let mut with_nbrs = cover;
    let mut rest = alive;
    rest.remove(v);
    for &w in g.neighbors(v) {
        if rest.contains(w) {
            with_nbrs.insert(w);
            rest.remove(w);
        }
    }
    search(g, rest, with_nbrs, best);
}

/// Minimum vertex cover of a bipartite graph through König's theorem.
pub fn mvc_bipartite(g: &Graph) -> Result<CoverResult, GraphError> {
    let color = two_coloring(g).ok_or(GraphError::NotBipartite)?;
    let matching = max_matching(g);
    let mate = matching.mates(g.n());
    // alternating BFS from free left vertices
    let mut reached = vec![false; g.n()];
    let mut queue: VecDeque<usize> = (0..g.n())
        .filter(|&v| !color[v] && mate[v].is_none())
        .collect();
    for &v in &queue {
        reached[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        if !color[v] {
            for &w in g.neighbors(v) {
                if mate[v] != Some(w) && !reached[w] {
                    reached[w] = true;
                    queue.push_back(w);
                }
            }
        } else if let Some(w) = mate[v] {
            if !reached[w] {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }
    let witness: VertexSet = (0..g.n())
        .filter(|&v| if color[v] { reached[v] } else { !reached[v] })
        .collect();
    debug_assert_eq!(witness.len(), matching.len());
    Ok(CoverResult {
        size: witness.len(),
        witness,
    })
}

/// Both endpoints of a maximum matching: a vertex cover of size at most `2 mvc`.
pub fn two_matching_cover(g: &Graph) -> VertexSet {
    max_matching(g)
        .pairs()
        .iter()
        .flat_map(|e| [e.0, e.1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_pairs(n, e).unwrap()
    }

    fn p3() -> Graph {
        g(3, &[(0, 1), (1, 2)])
    }

    fn p4() -> Graph {
        g(4, &[(0, 1), (1, 2), (2, 3)])
    }

    fn star4() -> Graph {
        g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        g(n, &e)
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn cover_checks() {
        assert!(is_vertex_cover(&p3(), &set(&[1])));
        assert!(!is_vertex_cover(&p3(), &set(&[0])));
        assert_eq!(uncovered_edge(&p3(), &set(&[0])), Some(Edge(1, 2)));
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert!(is_vertex_cover(&c4, &set(&[0, 2])));
    }

    #[test]
    fn exact_sizes() {
        assert_eq!(mvc_exact(&k(4)).unwrap().size, 3);
        assert_eq!(mvc_exact(&p4()).unwrap().size, 2);
        assert_eq!(mvc_brute_force(&p4()).unwrap().size, 2);
        assert_eq!(mvc_exact(&star4()).unwrap().size, 1);
        assert!(matches!(
            mvc_exact(&g(25, &[])),
            Err(GraphError::SizeLimit { n: 25, limit: 24 })
        ));
    }

    #[test]
    fn bipartite_cover() {
        let mut e = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                e.push((u, v));
            }
        }
        let k33 = g(6, &e);
        let r = mvc_bipartite(&k33).unwrap();
        assert_eq!(r.size, 3);
        assert!(is_vertex_cover(&k33, &r.witness));
        assert_eq!(mvc_bipartite(&p4()).unwrap().size, 2);
        assert_eq!(mvc_bipartite(&g(3, &[])).unwrap().size, 0);
        assert_eq!(mvc_bipartite(&k(3)), Err(GraphError::NotBipartite));
    }

    #[test]
    fn matching_cover() {
        assert_eq!(two_matching_cover(&g(2, &[(0, 1)])).len(), 2);
        assert_eq!(two_matching_cover(&p4()), set(&[0, 1, 2, 3]));
        assert_eq!(two_matching_cover(&star4()).len(), 2);
    }
}
