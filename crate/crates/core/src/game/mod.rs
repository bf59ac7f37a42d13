//! The eternal vertex cover game in the set model: one guard per vertex,
//! every guard may move along one edge per round, and some guard must cross
//! the attacked edge.

mod budget;
mod enumerate;
mod play;
mod solver;
mod trace;

use thiserror::Error;

use crate::graph::{bipartite_matching, Edge, Graph, GraphError, VertexSet};

pub use budget::Budget;
pub use enumerate::{binomial, vertex_covers_of_size};
pub use play::{
    simulate, AllButOneDefender, Attacker, Defender, ExactAttacker, ExactDefender,
    GreedyDefender, RandomAttacker, Response, SimError, SimOutcome, Verdict,
};
pub use solver::{
    attacker_policy_step, defender_policy_step, evc_exact, safe_set, EvcResult, SafeSet,
};
pub use trace::{format_trace, parse_trace, replay_trace, TraceEvent, TraceRecord};

/// Guard positions: the set of occupied vertices.
pub type Config = VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("configurations differ in size ({from} vs {to})")]
    SizeMismatch { from: usize, to: usize },
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),
    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u64,
    },
    #[error("configuration is not in the safe set")]
    NotSafe,
    #[error("configuration is safe; the attacker has no winning edge")]
    SafeConfig,
    #[error("illegal move: {0}")]
    Illegal(#[from] IllegalMove),
    #[error("initial configuration has {got} guards, expected {expected}")]
    StartSize { expected: usize, got: usize },
    #[error("{0}")]
    Policy(String),
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
}

/// Why a proposed guard movement is not a legal defense.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IllegalMove {
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("neighborhood violation: {from} -> {to} is not along an edge")]
    NeighborhoodViolation { from: String, to: String },
    #[error("no guard crosses the attacked edge {0}")]
    NoCrossing(String),
}

impl IllegalMove {
    /// Short machine-readable class name.
    pub fn class(&self) -> &'static str {
        match self {
            IllegalMove::NotBijection(_) => "not_a_bijection",
            IllegalMove::NeighborhoodViolation { .. } => "neighborhood_violation",
            IllegalMove::NoCrossing(_) => "no_crossing",
        }
    }
}

/// One round's guard movement: where every guard goes, and which guard
/// crosses the attacked edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MovePlan {
    assignment: Vec<(usize, usize)>,
    crossing: (usize, usize),
}

impl MovePlan {
    /// Full assignment `origin -> destination`, sorted by origin. Guards that
    /// stay appear as `(v, v)`.
    pub fn assignment(&self) -> &[(usize, usize)] {
        &self.assignment
    }

    pub fn crossing(&self) -> (usize, usize) {
        self.crossing
    }

    /// Guards that actually move.
    pub fn moves(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().copied().filter(|(a, b)| a != b)
    }

    /// The configuration after the move.
    pub fn target(&self) -> Config {
        self.assignment.iter().map(|&(_, b)| b).collect()
    }

    pub fn format(&self, g: &Graph) -> String {
        self.moves()
            .map(|(a, b)| format!("{}->{}", g.id(a), g.id(b)))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Builds and validates a plan from the guards that move; everyone else stays.
    pub fn from_moves(
        g: &Graph,
        current: &Config,
        moves: &[(usize, usize)],
        attacked: Edge,
    ) -> Result<MovePlan, IllegalMove> {
        let mut dest: Vec<(usize, usize)> = current.iter().map(|v| (v, v)).collect();
        let mut moved = VertexSet::new();
        for &(from, to) in moves {
            if !current.contains(from) {
                return Err(IllegalMove::NotBijection(format!(
                    "no guard on {}",
                    g.id(from)
                )));
            }
            if !moved.insert(from) {
                return Err(IllegalMove::NotBijection(format!(
                    "guard on {} moves twice",
                    g.id(from)
                )));
            }
            if from != to && !g.has_edge(from, to) {
                return Err(IllegalMove::NeighborhoodViolation {
                    from: g.id(from).to_string(),
                    to: g.id(to).to_string(),
                });
            }
            let slot = dest.iter_mut().find(|(a, _)| *a == from).unwrap();
            slot.1 = to;
        }
        let mut seen = VertexSet::new();
        for &(_, to) in &dest {
            if !seen.insert(to) {
                return Err(IllegalMove::NotBijection(format!(
                    "two guards end on {}",
                    g.id(to)
                )));
            }
        }
        let Edge(u, v) = attacked;
        let crossing = dest
            .iter()
            .copied()
            .find(|&p| p == (u, v) || p == (v, u))
            .ok_or_else(|| IllegalMove::NoCrossing(g.format_edge(attacked)))?;
        Ok(MovePlan {
            assignment: dest,
            crossing,
        })
    }

    /// Re-checks this plan against a graph, a starting configuration and the attacked edge.
    pub fn check(&self, g: &Graph, current: &Config, attacked: Edge) -> Result<Config, IllegalMove> {
        let moves: Vec<(usize, usize)> = self.moves().collect();
        let plan = MovePlan::from_moves(g, current, &moves, attacked)?;
        if plan.assignment != self.assignment {
            return Err(IllegalMove::NotBijection(
                "assignment does not cover the current guards".into(),
            ));
        }
        Ok(plan.target())
    }
}

/// Decides whether the guards can move from `from` to `to` while defending
/// `attacked`, returning a witnessing plan.
///
/// For each orientation `x -> y` of the attacked edge (smaller index first)
/// with `x` in `from` and `y` in `to`, the remaining guards must be matched
/// perfectly into the remaining targets along closed neighborhoods.
pub fn is_legal_transition(
    g: &Graph,
    from: &Config,
    to: &Config,
    attacked: Edge,
) -> Result<Option<MovePlan>, GameError> {
    if from.len() != to.len() {
        return Err(GameError::SizeMismatch {
            from: from.len(),
            to: to.len(),
        });
    }
    if g.edge_position(attacked).is_none() {
        return Err(GameError::NotAnEdge(format!("{attacked:?}")));
    }
    Ok(legal_transition_unchecked(g, from, to, attacked))
}

pub(crate) fn legal_transition_unchecked(
    g: &Graph,
    from: &Config,
    to: &Config,
    attacked: Edge,
) -> Option<MovePlan> {
    let Edge(u, v) = attacked;
    let left_all: Vec<usize> = from.to_vec();
    let right_all: Vec<usize> = to.to_vec();
    for (x, y) in [(u, v), (v, u)] {
        if !from.contains(x) || !to.contains(y) {
            continue;
        }
        let left: Vec<usize> = left_all.iter().copied().filter(|&a| a != x).collect();
        let right: Vec<usize> = right_all.iter().copied().filter(|&b| b != y).collect();
        let assign = bipartite_matching(left.len(), right.len(), |l, r| {
            g.closed_neighborhood(left[l]).contains(right[r])
        });
        if assign.iter().all(Option::is_some) {
            let mut assignment: Vec<(usize, usize)> = left
                .iter()
                .zip(&assign)
                .map(|(&a, r)| (a, right[r.unwrap()]))
                .collect();
            assignment.push((x, y));
            assignment.sort_unstable();
            return Some(MovePlan {
                assignment,
                crossing: (x, y),
            });
        }
    }
    None
}

/// Whether some bijection along closed neighborhoods exists at all, ignoring
/// the crossing requirement.
pub(crate) fn has_neighborhood_bijection(g: &Graph, from: &Config, to: &Config) -> bool {
    let left = from.to_vec();
    let right = to.to_vec();
    bipartite_matching(left.len(), right.len(), |l, r| {
        g.closed_neighborhood(left[l]).contains(right[r])
    })
    .iter()
    .all(Option::is_some)
}

/// Union of the closed neighborhoods of `config`: every vertex a guard can reach.
pub(crate) fn reach(g: &Graph, config: &Config) -> VertexSet {
    let mut out = VertexSet::new();
    for v in config {
        out.union_with(g.closed_neighborhood(v));
    }
    out
}
