use super::{Budget, Config, GameError};
use crate::graph::{Graph, VertexSet};

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// All vertex covers with exactly `k` vertices, in lexicographic order of
/// their sorted member lists.
///
/// Fails if `C(n, k)` exceeds the configuration budget.
pub fn vertex_covers_of_size(
    g: &Graph,
    k: usize,
    budget: &Budget,
) -> Result<Vec<Config>, GameError> {
    let n = g.n();
    let total = binomial(n, k);
    if total > budget.configs as u128 {
        return Err(GameError::Budget {
            what: "size-k configurations",
            needed: total,
            limit: budget.configs,
        });
    }
    let mut out = Vec::new();
    if k <= n {
        extend(g, 0, k, &mut VertexSet::new(), &VertexSet::new(), &mut out);
    }
    Ok(out)
}

/// Depth-first search choosing members in increasing order. `required`
/// holds vertices forced into the cover by an earlier exclusion.
fn extend(
    g: &Graph,
    pos: usize,
    remaining: usize,
    chosen: &mut VertexSet,
    required: &VertexSet,
    out: &mut Vec<Config>,
) {
    let n = g.n();
    if remaining == 0 {
        let forced_later = required.iter().any(|v| v >= pos && !chosen.contains(v));
        let edge_in_tail = g.edges().iter().any(|e| e.0 >= pos && e.1 >= pos);
        if !forced_later && !edge_in_tail {
            out.push(chosen.clone());
        }
        return;
    }
    let mut req = required.clone();
    for x in pos..n {
        if n - x < remaining {
            break;
        }
        chosen.insert(x);
        extend(g, x + 1, remaining - 1, chosen, &req, out);
        chosen.remove(x);

        // from here on x is excluded
        if req.contains(x) {
            break;
        }
        let mut dead = false;
        for &w in g.neighbors(x) {
            if w < x {
                if !chosen.contains(w) {
                    dead = true;
                    break;
                }
            } else {
                req.insert(w);
            }
        }
        if dead {
            break;
        }
        let pending = req.iter().filter(|&v| v > x && !chosen.contains(v)).count();
        if pending > remaining {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_vertex_cover;

    fn brute(g: &Graph, k: usize) -> Vec<Config> {
        let n = g.n();
        let mut out: Vec<Config> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|v| m & (1 << v) != 0).collect::<VertexSet>())
            .filter(|s| is_vertex_cover(g, s))
            .collect();
        out.sort();
        out
    }

    fn set(v: &[usize]) -> Config {
        v.iter().copied().collect()
    }

    #[test]
    fn small_examples() {
        let b = Budget::default();
        let p3 = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(vertex_covers_of_size(&p3, 1, &b).unwrap(), vec![set(&[1])]);
        let k3 = Graph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(vertex_covers_of_size(&k3, 2, &b).unwrap().len(), 3);
        let p4 = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let covers = vertex_covers_of_size(&p4, 2, &b).unwrap();
        assert_eq!(covers, vec![set(&[0, 2]), set(&[1, 2]), set(&[1, 3])]);
        assert!(!covers.contains(&set(&[0, 1])));
    }

    #[test]
    fn matches_brute_force() {
        let g = Graph::from_pairs(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (2, 6)],
        )
        .unwrap();
        for k in 0..=7 {
            assert_eq!(
                vertex_covers_of_size(&g, k, &Budget::default()).unwrap(),
                brute(&g, k),
                "k={k}"
            );
        }
        let edgeless = Graph::from_pairs(3, &[]).unwrap();
        assert_eq!(vertex_covers_of_size(&edgeless, 0, &Budget::default()).unwrap(), vec![set(&[])]);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::from_pairs(30, &[]).unwrap();
        let tight = Budget {
            configs: 100,
            ..Budget::default()
        };
        assert!(matches!(
            vertex_covers_of_size(&g, 3, &tight),
            Err(GameError::Budget { .. })
        ));
        assert_eq!(binomial(30, 3), 4060);
        assert_eq!(binomial(3, 5), 0);
    }
}
