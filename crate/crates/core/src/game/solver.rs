use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{
    has_neighborhood_bijection, legal_transition_unchecked, reach, vertex_covers_of_size, Budget,
    Config, GameError, MovePlan,
};
use crate::graph::{mvc_branch_and_bound, uncovered_edge, Edge, Graph};

/// The defender's winning region for a fixed guard count, with positional
/// policies for both players.
#[derive(Clone, Debug)]
pub struct SafeSet {
    k: usize,
    edges: Vec<Edge>,
    members: Vec<Config>,
    index: HashMap<Config, usize>,
    /// `policy[member][edge position]`
    policy: Vec<Vec<(usize, MovePlan)>>,
    killers: HashMap<Config, Edge>,
    covers: usize,
    sweeps: usize,
}

impl SafeSet {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Safe configurations in canonical order.
    pub fn members(&self) -> &[Config] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: &Config) -> bool {
        self.index.contains_key(c)
    }

    /// Number of size-k vertex covers the elimination started from.
    pub fn cover_count(&self) -> usize {
        self.covers
    }

    /// Elimination sweeps that deleted at least one configuration.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// The edge that eliminated `c`, if `c` was a size-k cover outside the set.
    pub fn killer(&self, c: &Config) -> Option<Edge> {
        self.killers.get(c).copied()
    }

    pub fn killers(&self) -> &HashMap<Config, Edge> {
        &self.killers
    }

    /// The stored defender answer for `c` under attack on `attacked`.
    pub fn defender_step(&self, c: &Config, attacked: Edge) -> Result<(MovePlan, Config), GameError> {
        let &i = self.index.get(c).ok_or(GameError::NotSafe)?;
        let pos = self
            .edges
            .binary_search(&attacked)
            .map_err(|_| GameError::NotAnEdge(format!("{attacked:?}")))?;
        let (j, plan) = &self.policy[i][pos];
        Ok((plan.clone(), self.members[*j].clone()))
    }

    /// An attack that wins against `c`: an uncovered edge if there is one,
    /// otherwise the recorded killer.
    pub fn attacker_step(&self, c: &Config) -> Result<Edge, GameError> {
        if let Some(e) = self.edges.iter().copied().find(|e| !c.contains(e.0) && !c.contains(e.1)) {
            return Ok(e);
        }
        if self.contains(c) {
            return Err(GameError::SafeConfig);
        }
        if c.len() != self.k {
            return Err(GameError::SizeMismatch {
                from: c.len(),
                to: self.k,
            });
        }
        self.killer(c)
            .ok_or_else(|| GameError::Policy("configuration has no recorded killer".into()))
    }

    /// Header `safe k=<k> count=<m>` followed by one sorted id list per member.
    pub fn dump(&self, g: &Graph) -> String {
        let mut out = format!("safe k={} count={}\n", self.k, self.members.len());
        for c in &self.members {
            out.push_str(&g.format_set(c));
            out.push('\n');
        }
        out
    }
}

/// Greatest fixed point of the size-k vertex covers under "every attack has a
/// legal answer back into the set".
pub fn safe_set(g: &Graph, k: usize, budget: &Budget) -> Result<SafeSet, GameError> {
    let covers = vertex_covers_of_size(g, k, budget)?;
    let count = covers.len();
    let pairs = (count as u128) * (count as u128);
    if pairs > budget.transitions as u128 {
        return Err(GameError::Budget {
            what: "transition tests",
            needed: pairs,
            limit: budget.transitions,
        });
    }
    let edges = g.edges().to_vec();

    // successors[i][e]: covers reachable from cover i while defending edge e
    let successors: Vec<Vec<Vec<u32>>> = covers
        .par_iter()
        .map(|c| {
            let r = reach(g, c);
            let candidates: Vec<usize> = (0..count)
                .filter(|&j| covers[j].is_subset(&r) && has_neighborhood_bijection(g, c, &covers[j]))
                .collect();
            edges
                .iter()
                .map(|&e| {
                    candidates
                        .iter()
                        .filter(|&&j| legal_transition_unchecked(g, c, &covers[j], e).is_some())
                        .map(|&j| j as u32)
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut alive = vec![true; count];
    let mut killer: Vec<Option<usize>> = vec![None; count];
    let mut sweeps = 0;
    loop {
        let doomed: Vec<(usize, usize)> = (0..count)
            .into_par_iter()
            .filter(|&i| alive[i])
            .filter_map(|i| {
                successors[i]
                    .iter()
                    .position(|s| !s.iter().any(|&j| alive[j as usize]))
                    .map(|pos| (i, pos))
            })
            .collect();
        if doomed.is_empty() {
            break;
        }
        sweeps += 1;
        for (i, pos) in doomed {
            alive[i] = false;
            killer[i] = Some(pos);
        }
    }

    let survivors: Vec<usize> = (0..count).filter(|&i| alive[i]).collect();
    let position: HashMap<usize, usize> = survivors.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let policy: Vec<Vec<(usize, MovePlan)>> = survivors
        .par_iter()
        .map(|&i| {
            edges
                .iter()
                .enumerate()
                .map(|(pos, &e)| {
                    let j = successors[i][pos]
                        .iter()
                        .map(|&j| j as usize)
                        .find(|&j| alive[j])
                        .expect("survivor has a safe answer to every attack");
                    let plan = legal_transition_unchecked(g, &covers[i], &covers[j], e)
                        .expect("successor lists hold legal transitions");
                    (position[&j], plan)
                })
                .collect()
        })
        .collect();

    let mut killers = HashMap::new();
    let mut members = Vec::with_capacity(survivors.len());
    for (i, c) in covers.into_iter().enumerate() {
        match killer[i] {
            Some(pos) => {
                killers.insert(c, edges[pos]);
            }
            None => members.push(c),
        }
    }
    let index = members.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    Ok(SafeSet {
        k,
        edges,
        members,
        index,
        policy,
        killers,
        covers: count,
        sweeps,
    })
}

pub fn defender_policy_step(
    s: &SafeSet,
    c: &Config,
    attacked: Edge,
) -> Result<(MovePlan, Config), GameError> {
    s.defender_step(c, attacked)
}

/// The exact attacker's move against `c` with `k` guards.
pub fn attacker_policy_step(g: &Graph, k: usize, c: &Config, budget: &Budget) -> Result<Edge, GameError> {
    if let Some(e) = uncovered_edge(g, c) {
        return Ok(e);
    }
    safe_set(g, k, budget)?.attacker_step(c)
}

#[derive(Clone, Debug)]
pub struct EvcResult {
    pub mvc: usize,
    /// `None` when no tested guard count wins, which happens only if `k_max`
    /// stopped the search below the true value.
    pub evc: Option<usize>,
    pub win_profile: BTreeMap<usize, bool>,
    /// The safe set at `evc`.
    pub safe_set: Option<SafeSet>,
    pub warnings: Vec<String>,
}

/// Computes the win profile for every `k` from `mvc` up to `2 mvc` (capped by
/// `n` and by `k_max`) and reports the smallest winning `k`.
///
/// Running out of budget before a winning `k` is found is an error; running
/// out afterwards truncates the profile with a warning.
pub fn evc_exact(g: &Graph, k_max: Option<usize>, budget: &Budget) -> Result<EvcResult, GameError> {
    let mvc = mvc_branch_and_bound(g).size;
    let bound = (2 * mvc).min(g.n());
    let hi = k_max.map_or(bound, |m| m.min(bound));
    let mut result = EvcResult {
        mvc,
        evc: None,
        win_profile: BTreeMap::new(),
        safe_set: None,
        warnings: Vec::new(),
    };
    for k in mvc..=hi {
        let s = match safe_set(g, k, budget) {
            Ok(s) => s,
            Err(e @ GameError::Budget { .. }) if result.evc.is_some() => {
                result
                    .warnings
                    .push(format!("win profile truncated at k={k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let win = !s.is_empty();
        result.win_profile.insert(k, win);
        if win && result.evc.is_none() {
            result.evc = Some(k);
            result.safe_set = Some(s);
        }
    }
    let profile: Vec<(usize, bool)> = result.win_profile.iter().map(|(&k, &w)| (k, w)).collect();
    for w in profile.windows(2) {
        if w[0].1 && !w[1].1 {
            result.warnings.push(format!(
                "non-monotone win profile: win at k={}, loss at k={}",
                w[0].0, w[1].0
            ));
        }
    }
    if result.evc.is_none() && hi == bound {
        result
            .warnings
            .push(format!("no winning guard count up to {bound}"));
    }
    Ok(result)
}
