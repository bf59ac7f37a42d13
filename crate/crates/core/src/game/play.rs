use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Config, GameError, MovePlan, SafeSet, TraceRecord};
use crate::graph::{is_vertex_cover, mvc_branch_and_bound, uncovered_edge, Edge, Graph};

/// A defender's answer to one attack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub plan: MovePlan,
    pub next: Config,
    /// Strategy-specific label for the new position, e.g. a cover template.
    pub annotation: Option<String>,
}

pub trait Defender {
    fn initial(&mut self, g: &Graph) -> Result<Config, GameError>;

    /// `Ok(None)` means the defender has no legal answer and loses.
    fn respond(&mut self, g: &Graph, current: &Config, attacked: Edge) -> Result<Option<Response>, GameError>;
}

pub trait Attacker {
    fn attack(&mut self, g: &Graph, current: &Config) -> Result<Edge, GameError>;
}

fn plain(plan: MovePlan) -> Response {
    Response {
        next: plan.target(),
        plan,
        annotation: None,
    }
}

/// Plays the stored safe-set policy.
#[derive(Clone, Debug)]
pub struct ExactDefender {
    safe: Arc<SafeSet>,
}

impl ExactDefender {
    pub fn new(safe: Arc<SafeSet>) -> Self {
        ExactDefender { safe }
    }
}

impl Defender for ExactDefender {
    fn initial(&mut self, _g: &Graph) -> Result<Config, GameError> {
        self.safe.members().first().cloned().ok_or(GameError::NotSafe)
    }

    fn respond(&mut self, g: &Graph, current: &Config, attacked: Edge) -> Result<Option<Response>, GameError> {
        if self.safe.contains(current) {
            let (plan, next) = self.safe.defender_step(current, attacked)?;
            return Ok(Some(Response {
                plan,
                next,
                annotation: None,
            }));
        }
        // off-policy position: any legal way back into the safe set
        Ok(self
            .safe
            .members()
            .iter()
            .find_map(|c2| super::legal_transition_unchecked(g, current, c2, attacked))
            .map(plain))
    }
}

/// Crosses the attacked edge and, if that uncovers something, pulls one
/// neighboring guard into the vacated vertex.
#[derive(Clone, Debug)]
pub struct GreedyDefender {
    k: usize,
}

impl GreedyDefender {
    pub fn new(k: usize) -> Self {
        GreedyDefender { k }
    }
}

impl Defender for GreedyDefender {
    fn initial(&mut self, g: &Graph) -> Result<Config, GameError> {
        let mut c: Config = mvc_branch_and_bound(g).witness.iter().take(self.k).collect();
        for v in 0..g.n() {
            if c.len() >= self.k {
                break;
            }
            c.insert(v);
        }
        if c.len() != self.k {
            return Err(GameError::StartSize {
                expected: self.k,
                got: c.len(),
            });
        }
        Ok(c)
    }

    fn respond(&mut self, g: &Graph, current: &Config, attacked: Edge) -> Result<Option<Response>, GameError> {
        let Edge(u, v) = attacked;
        if current.contains(u) && current.contains(v) {
            let plan = MovePlan::from_moves(g, current, &[(u, v), (v, u)], attacked)?;
            return Ok(Some(plain(plan)));
        }
        let Some((x, y)) = [(u, v), (v, u)].into_iter().find(|&(x, _)| current.contains(x)) else {
            return Ok(None);
        };
        let single = MovePlan::from_moves(g, current, &[(x, y)], attacked)?;
        if is_vertex_cover(g, &single.target()) {
            return Ok(Some(plain(single)));
        }
        for &z in g.neighbors(x) {
            if z == y || !current.contains(z) {
                continue;
            }
            if let Ok(plan) = MovePlan::from_moves(g, current, &[(x, y), (z, x)], attacked) {
                if is_vertex_cover(g, &plan.target()) {
                    return Ok(Some(plain(plan)));
                }
            }
        }
        Ok(Some(plain(single)))
    }
}

/// Guards on every vertex but one. An attack on the empty vertex pulls the
/// guard across; any other attack is answered by an exchange.
#[derive(Clone, Debug, Default)]
pub struct AllButOneDefender;

impl AllButOneDefender {
    pub fn step(g: &Graph, current: &Config, attacked: Edge) -> Result<(MovePlan, usize), GameError> {
        if current.len() + 1 != g.n() {
            return Err(GameError::Policy(format!(
                "all-but-one needs {} guards, found {}",
                g.n().saturating_sub(1),
                current.len()
            )));
        }
        let empty = (0..g.n()).find(|&v| !current.contains(v)).unwrap();
        let Edge(u, v) = attacked;
        if attacked.touches(empty) {
            let y = attacked.other(empty);
            let plan = MovePlan::from_moves(g, current, &[(y, empty)], attacked)?;
            Ok((plan, y))
        } else {
            let plan = MovePlan::from_moves(g, current, &[(u, v), (v, u)], attacked)?;
            Ok((plan, empty))
        }
    }
}

impl Defender for AllButOneDefender {
    fn initial(&mut self, g: &Graph) -> Result<Config, GameError> {
        Ok((1..g.n()).collect())
    }

    fn respond(&mut self, g: &Graph, current: &Config, attacked: Edge) -> Result<Option<Response>, GameError> {
        let (plan, empty) = AllButOneDefender::step(g, current, attacked)?;
        Ok(Some(Response {
            next: plan.target(),
            plan,
            annotation: Some(format!("AllButOne({})", g.id(empty))),
        }))
    }
}

/// Attacks an uncovered edge if possible, then the recorded killer edge, and
/// otherwise the first edge.
#[derive(Clone, Debug)]
pub struct ExactAttacker {
    safe: Arc<SafeSet>,
}

impl ExactAttacker {
    pub fn new(safe: Arc<SafeSet>) -> Self {
        ExactAttacker { safe }
    }
}

impl Attacker for ExactAttacker {
    fn attack(&mut self, g: &Graph, current: &Config) -> Result<Edge, GameError> {
        if let Some(e) = uncovered_edge(g, current) {
            return Ok(e);
        }
        if let Some(e) = self.safe.killer(current) {
            return Ok(e);
        }
        g.edges()
            .first()
            .copied()
            .ok_or_else(|| GameError::Policy("graph has no edges".into()))
    }
}

/// Seeded random attacker. Uncovered edges are always preferred.
#[derive(Clone, Debug)]
pub struct RandomAttacker {
    rng: ChaCha8Rng,
}

impl RandomAttacker {
    pub fn new(seed: u64) -> Self {
        RandomAttacker {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Attacker for RandomAttacker {
    fn attack(&mut self, g: &Graph, current: &Config) -> Result<Edge, GameError> {
        let edges = g.edges();
        if edges.is_empty() {
            return Err(GameError::Policy("graph has no edges".into()));
        }
        let open: Vec<Edge> = edges
            .iter()
            .copied()
            .filter(|e| !current.contains(e.0) && !current.contains(e.1))
            .collect();
        if !open.is_empty() {
            return Ok(open[self.rng.random_range(0..open.len())]);
        }
        Ok(edges[self.rng.random_range(0..edges.len())])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Survived { rounds: usize },
    Lost { round: usize, edge: Edge },
}

#[derive(Clone, Debug)]
pub struct SimOutcome {
    pub verdict: Verdict,
    pub initial: Config,
    pub trace: Vec<TraceRecord>,
}

impl SimOutcome {
    pub fn final_config(&self) -> &Config {
        self.trace.last().map_or(&self.initial, |r| &r.config)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("round {round}: {source}")]
pub struct SimError {
    pub round: usize,
    pub source: GameError,
}

/// Plays up to `rounds` rounds. Every answer is re-validated against the game
/// rules; a policy that proposes an illegal move is an error, not a loss.
pub fn simulate(
    g: &Graph,
    k: usize,
    defender: &mut dyn Defender,
    attacker: &mut dyn Attacker,
    rounds: usize,
) -> Result<SimOutcome, SimError> {
    let fail = |round| move |source| SimError { round, source };
    let initial = defender.initial(g).map_err(fail(0))?;
    if initial.len() != k || initial.last().is_some_and(|v| v >= g.n()) {
        return Err(SimError {
            round: 0,
            source: GameError::StartSize {
                expected: k,
                got: initial.len(),
            },
        });
    }
    let mut current = initial.clone();
    let mut trace = Vec::new();
    for round in 1..=rounds {
        let edge = attacker.attack(g, &current).map_err(fail(round))?;
        if g.edge_position(edge).is_none() {
            return Err(SimError {
                round,
                source: GameError::NotAnEdge(format!("{edge:?}")),
            });
        }
        let Some(resp) = defender.respond(g, &current, edge).map_err(fail(round))? else {
            return Ok(SimOutcome {
                verdict: Verdict::Lost { round, edge },
                initial,
                trace,
            });
        };
        let next = resp
            .plan
            .check(g, &current, edge)
            .map_err(|e| fail(round)(e.into()))?;
        if next != resp.next {
            return Err(SimError {
                round,
                source: GameError::Policy("response target differs from its move plan".into()),
            });
        }
        trace.push(TraceRecord {
            round,
            attacked: edge,
            plan: resp.plan,
            config: next.clone(),
            annotation: resp.annotation,
        });
        current = next;
    }
    Ok(SimOutcome {
        verdict: Verdict::Survived { rounds },
        initial,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{safe_set, Budget};

    fn p3() -> Graph {
        Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn k2_exact_survives() {
        let g = Graph::from_pairs(2, &[(0, 1)]).unwrap();
        let s = Arc::new(safe_set(&g, 1, &Budget::default()).unwrap());
        let out = simulate(
            &g,
            1,
            &mut ExactDefender::new(s.clone()),
            &mut ExactAttacker::new(s),
            100,
        )
        .unwrap();
        assert_eq!(out.verdict, Verdict::Survived { rounds: 100 });
        assert_eq!(out.trace.len(), 100);
    }

    #[test]
    fn p3_one_guard_loses_fast() {
        let g = p3();
        let s = Arc::new(safe_set(&g, 1, &Budget::default()).unwrap());
        let out = simulate(&g, 1, &mut GreedyDefender::new(1), &mut ExactAttacker::new(s), 10).unwrap();
        match out.verdict {
            Verdict::Lost { round, .. } => assert!(round <= 2),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn p3_two_guards_random_attacks() {
        let g = p3();
        let s = Arc::new(safe_set(&g, 2, &Budget::default()).unwrap());
        let out = simulate(&g, 2, &mut ExactDefender::new(s), &mut RandomAttacker::new(7), 1000).unwrap();
        assert_eq!(out.verdict, Verdict::Survived { rounds: 1000 });
    }

    #[test]
    fn all_but_one_survives() {
        let g = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]).unwrap();
        let out = simulate(&g, 4, &mut AllButOneDefender, &mut RandomAttacker::new(3), 2000).unwrap();
        assert_eq!(out.verdict, Verdict::Survived { rounds: 2000 });
        assert!(out.trace.iter().all(|r| is_vertex_cover(&g, &r.config)));
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let run = |seed| {
            simulate(&g, 3, &mut AllButOneDefender, &mut RandomAttacker::new(seed), 50)
                .unwrap()
                .trace
                .iter()
                .map(|r| r.attacked)
                .collect::<Vec<_>>()
        };
        assert_eq!(run(11), run(11));
        assert_ne!(run(11), run(12));
    }

    #[test]
    fn bad_start_is_reported() {
        let g = p3();
        let err = simulate(&g, 1, &mut AllButOneDefender, &mut RandomAttacker::new(0), 5).unwrap_err();
        assert_eq!(err.round, 0);
    }
}
