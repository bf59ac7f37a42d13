use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classes {
    pub bipartite: bool,
    pub split: bool,
    pub cobipartite: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "inf"),
        }
    }
}

/// A proper 2-coloring (`false`/`true` per vertex), if one exists. Each
/// component's smallest vertex gets `false`.
pub fn two_coloring(g: &Graph) -> Option<Vec<bool>> {
    let n = g.n();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for &w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(Option::unwrap).collect())
}

pub fn is_bipartite(g: &Graph) -> bool {
    two_coloring(g).is_some()
}

/// Split recognition from the degree sequence (Hammer and Simeone).
pub fn is_split(g: &Graph) -> bool {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let m = d
        .iter()
        .enumerate()
        .filter(|&(i, &di)| di >= i)
        .map(|(i, _)| i + 1)
        .max()
        .unwrap_or(0);
    let head: usize = d[..m].iter().sum();
    let tail: usize = d[m..].iter().sum();
    head == m * m.saturating_sub(1) + tail
}

pub fn classify(g: &Graph) -> Classes {
    Classes {
        bipartite: is_bipartite(g),
        split: is_split(g),
        cobipartite: is_bipartite(&g.complement()),
    }
}

pub fn diameter(g: &Graph) -> Diameter {
    let n = g.n();
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for &d in &dist {
            if d == usize::MAX {
                return Diameter::Infinite;
            }
            best = best.max(d);
        }
    }
    Diameter::Finite(best)
}
