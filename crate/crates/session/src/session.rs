use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use evc_core::cobip::{evc_cobip, find_sides, normalize, parse_sides, CobipDefender};
use evc_core::game::{
    evc_exact, format_trace, is_legal_transition, safe_set, AllButOneDefender, Attacker, Budget, Config,
    Defender, ExactDefender, GameError, IllegalMove, MovePlan, RandomAttacker, TraceEvent, TraceRecord,
};
use evc_core::graph::{is_vertex_cover, parse_graph, serialize_graph, Edge, Graph};
use evc_core::reduction::{
    build_reduction, preprocess_rbds, rbds_oracle, Artifact, NiceDefender, Preprocessed, RbdsInstance,
    Variant,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    HumanAttacker,
    HumanDefender,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefenderSource {
    Exact,
    ReductionNice,
    Cobipartite,
    AllButOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Live,
    DefenderLost,
    Closed,
}

/// Body of `POST /sessions`. Which fields are needed depends on the
/// defender source: `graph` for all but `reduction-nice`, `sides` for
/// `cobipartite` (or `side` lines inside `graph`), and `rbds` for
/// `reduction-nice`.
#[derive(Clone, Debug, Deserialize)]
pub struct CreateRequest {
    #[serde(default)]
    pub graph: Option<String>,
    #[serde(default)]
    pub k: Option<usize>,
    pub mode: Mode,
    pub defender_source: DefenderSource,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sides: Option<String>,
    #[serde(default)]
    pub rbds: Option<RbdsInstance>,
    #[serde(default)]
    pub variant: Option<Variant>,
    /// 1-based reds; found by brute force when absent.
    #[serde(default)]
    pub dom: Option<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),
    #[error("defender source not applicable: {0}")]
    Inapplicable(String),
    #[error("{0}")]
    Budget(String),
    #[error("session is closed")]
    Closed,
    #[error("{0}")]
    WrongState(String),
    #[error("illegal move: {0}")]
    Illegal(IllegalMove),
    #[error("internal error: {0}")]
    Internal(String),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownSession(_) => "unknown_session",
            SessionError::BadRequest(_) => "bad_request",
            SessionError::NotAnEdge(_) => "not_an_edge",
            SessionError::Inapplicable(_) => "inapplicable_source",
            SessionError::Budget(_) => "budget_exceeded",
            SessionError::Closed => "session_closed",
            SessionError::WrongState(_) => "wrong_state",
            SessionError::Illegal(m) => m.class(),
            SessionError::Internal(_) => "internal",
        }
    }

    /// HTTP status for this error.
    pub fn status(&self) -> u16 {
        match self {
            SessionError::UnknownSession(_) => 404,
            SessionError::BadRequest(_) => 400,
            SessionError::Closed => 410,
            SessionError::WrongState(_) => 409,
            SessionError::NotAnEdge(_)
            | SessionError::Inapplicable(_)
            | SessionError::Budget(_)
            | SessionError::Illegal(_) => 422,
            SessionError::Internal(_) => 500,
        }
    }

    pub fn detail(&self) -> serde_json::Value {
        match self {
            SessionError::Illegal(m) => serde_json::json!({ "reason": m.class(), "explanation": m.to_string() }),
            SessionError::UnknownSession(id) => serde_json::json!({ "id": id }),
            _ => serde_json::Value::Null,
        }
    }
}

fn game_error(e: GameError) -> SessionError {
    match e {
        GameError::Budget { .. } => SessionError::Budget(e.to_string()),
        other => SessionError::Inapplicable(other.to_string()),
    }
}

/// Read-only snapshot of a session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub graph: String,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub k: usize,
    pub mode: Mode,
    pub defender_source: DefenderSource,
    pub seed: u64,
    pub initial: Vec<String>,
    pub config: Vec<String>,
    pub round: usize,
    pub status: Status,
    pub pending_attack: Option<(String, String)>,
    pub trace_len: usize,
    pub annotation: Option<String>,
    /// Vertex roles for reduced instances.
    pub roles: Option<BTreeMap<String, String>>,
    /// Clique side (`A` or `B`) per vertex for cobipartite sessions.
    pub sides: Option<BTreeMap<String, String>>,
}

/// Result of one accepted attack or defense.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundResult {
    /// `None` when the defender had no move.
    pub event: Option<TraceEvent>,
    pub round: usize,
    pub status: Status,
    pub config: Vec<String>,
    pub pending_attack: Option<(String, String)>,
}

pub struct Session {
    id: String,
    g: Graph,
    k: usize,
    mode: Mode,
    source: DefenderSource,
    seed: u64,
    initial: Config,
    config: Config,
    round: usize,
    status: Status,
    pending: Option<Edge>,
    trace: Vec<TraceRecord>,
    defender: Box<dyn Defender + Send>,
    attacker: RandomAttacker,
    roles: Option<BTreeMap<String, String>>,
    sides: Option<BTreeMap<String, String>>,
}

impl Session {
    pub fn create(id: String, req: &CreateRequest, budget: &Budget) -> Result<Session, SessionError> {
        let parsed = || -> Result<Graph, SessionError> {
            let text = req
                .graph
                .as_deref()
                .ok_or_else(|| SessionError::BadRequest("`graph` is required".into()))?;
            parse_graph(text).map_err(|e| SessionError::BadRequest(e.to_string()))
        };
        let check_k = |k: usize, what: &str| -> Result<usize, SessionError> {
            match req.k {
                Some(given) if given != k => Err(SessionError::Inapplicable(format!(
                    "{what} plays with {k} guards, requested {given}"
                ))),
                _ => Ok(k),
            }
        };
        let mut roles = None;
        let mut sides = None;
        let (g, k, defender): (Graph, usize, Box<dyn Defender + Send>) = match req.defender_source {
            DefenderSource::Exact => {
                let g = parsed()?;
                let k = match req.k {
                    Some(k) => k,
                    None => evc_exact(&g, None, budget)
                        .map_err(game_error)?
                        .evc
                        .ok_or_else(|| SessionError::Inapplicable("no winning guard count found".into()))?,
                };
                let safe = safe_set(&g, k, budget).map_err(game_error)?;
                if safe.is_empty() {
                    return Err(SessionError::Inapplicable(format!("safe set with {k} guards is empty")));
                }
                (g, k, Box::new(ExactDefender::new(Arc::new(safe))))
            }
            DefenderSource::AllButOne => {
                let g = parsed()?;
                if g.n() == 0 {
                    return Err(SessionError::Inapplicable("graph has no vertices".into()));
                }
                let k = check_k(g.n() - 1, "all-but-one")?;
                (g, k, Box::new(AllButOneDefender))
            }
            DefenderSource::Cobipartite => {
                let g = parsed()?;
                let text = req.sides.as_deref().or(req.graph.as_deref()).unwrap_or("");
                let (mut a, mut b) = parse_sides(&g, text).map_err(|e| SessionError::BadRequest(e.to_string()))?;
                if a.is_empty() && b.is_empty() {
                    (a, b) = find_sides(&g).map_err(|e| SessionError::Inapplicable(e.to_string()))?;
                }
                let inst = normalize(&g, &a, &b).map_err(|e| SessionError::Inapplicable(e.to_string()))?;
                let (value, _) = evc_cobip(&inst).map_err(|e| SessionError::Inapplicable(e.to_string()))?;
                let k = check_k(value, "the cobipartite strategy")?;
                sides = Some(
                    (0..g.n())
                        .map(|v| {
                            let side = if inst.side_a.contains(v) { "A" } else { "B" };
                            (g.id(v).to_string(), side.to_string())
                        })
                        .collect(),
                );
                let d = CobipDefender::new(Arc::new(inst)).map_err(|e| SessionError::Inapplicable(e.to_string()))?;
                (g, k, Box::new(d))
            }
            DefenderSource::ReductionNice => {
                let inst = req
                    .rbds
                    .as_ref()
                    .ok_or_else(|| SessionError::BadRequest("`rbds` is required".into()))?;
                let norm = match preprocess_rbds(inst).map_err(|e| SessionError::BadRequest(e.to_string()))? {
                    Preprocessed::Normalized(n) => n,
                    Preprocessed::TrivialYes(why) | Preprocessed::TrivialNo(why) => {
                        return Err(SessionError::Inapplicable(format!("trivial instance: {why}")))
                    }
                };
                let dom = match &req.dom {
                    Some(d) => d.clone(),
                    None => rbds_oracle(&norm, budget)
                        .map_err(|e| SessionError::Budget(e.to_string()))?
                        .ok_or_else(|| SessionError::Inapplicable("no dominating set within budget k".into()))?,
                };
                let ri = build_reduction(&norm, req.variant.unwrap_or(Variant::Bipartite))
                    .map_err(|e| SessionError::Inapplicable(e.to_string()))?;
                let k = check_k(ri.ell, "the nice-cover strategy")?;
                roles = Some(Artifact::new(&ri).sidecar.roles);
                let g = ri.h.clone();
                let d = NiceDefender::new(Arc::new(ri), &dom).map_err(|e| SessionError::Inapplicable(e.to_string()))?;
                (g, k, Box::new(d))
            }
        };
        let mut defender = defender;
        let initial = defender.initial(&g).map_err(game_error)?;
        if initial.len() != k {
            return Err(SessionError::Internal(format!(
                "defender starts with {} guards, expected {k}",
                initial.len()
            )));
        }
        let mut session = Session {
            id,
            k,
            mode: req.mode,
            source: req.defender_source,
            seed: req.seed,
            config: initial.clone(),
            initial,
            round: 0,
            status: Status::Live,
            pending: None,
            trace: Vec::new(),
            defender,
            attacker: RandomAttacker::new(req.seed),
            roles,
            sides,
            g,
        };
        if session.mode == Mode::HumanDefender {
            if session.g.m() == 0 {
                return Err(SessionError::BadRequest("graph has no edges to attack".into()));
            }
            session.announce()?;
        }
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn initial(&self) -> &Config {
        &self.initial
    }

    fn ids(&self, c: &Config) -> Vec<String> {
        c.iter().map(|v| self.g.id(v).to_string()).collect()
    }

    fn edge_ids(&self, e: Edge) -> (String, String) {
        (self.g.id(e.0).to_string(), self.g.id(e.1).to_string())
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            graph: serialize_graph(&self.g),
            vertices: self.g.ids().to_vec(),
            edges: self.g.edges().iter().map(|&e| self.edge_ids(e)).collect(),
            k: self.k,
            mode: self.mode,
            defender_source: self.source,
            seed: self.seed,
            initial: self.ids(&self.initial),
            config: self.ids(&self.config),
            round: self.round,
            status: self.status,
            pending_attack: self.pending.map(|e| self.edge_ids(e)),
            trace_len: self.trace.len(),
            annotation: self.trace.last().and_then(|r| r.annotation.clone()),
            roles: self.roles.clone(),
            sides: self.sides.clone(),
        }
    }

    /// Comment header of the trace file.
    pub fn trace_header(&self) -> String {
        format!(
            "# session {} k {} initial {}\n",
            self.id,
            self.k,
            self.g.format_set(&self.initial)
        )
    }

    pub fn trace_text(&self) -> String {
        self.trace_header() + &format_trace(&self.g, &self.trace)
    }

    fn result(&self) -> RoundResult {
        RoundResult {
            event: self.trace.last().filter(|r| r.round == self.round).map(|r| r.event(&self.g)),
            round: self.round,
            status: self.status,
            config: self.ids(&self.config),
            pending_attack: self.pending.map(|e| self.edge_ids(e)),
        }
    }

    fn require_live(&self, mode: Mode) -> Result<(), SessionError> {
        match self.status {
            Status::Closed => return Err(SessionError::Closed),
            Status::DefenderLost => return Err(SessionError::WrongState("the defender has already lost".into())),
            Status::Live => {}
        }
        if self.mode != mode {
            return Err(SessionError::WrongState(match mode {
                Mode::HumanAttacker => "this session expects defenses, not attacks".into(),
                Mode::HumanDefender => "this session expects attacks, not defenses".into(),
            }));
        }
        Ok(())
    }

    fn edge(&self, u: &str, v: &str) -> Result<Edge, SessionError> {
        self.g
            .edge_by_ids(u, v)
            .ok_or_else(|| SessionError::NotAnEdge(format!("{u}-{v}")))
    }

    fn announce(&mut self) -> Result<(), SessionError> {
        let e = self
            .attacker
            .attack(&self.g, &self.config)
            .map_err(|e| SessionError::Internal(e.to_string()))?;
        self.pending = Some(e);
        Ok(())
    }

    fn apply(&mut self, attacked: Edge, plan: MovePlan, annotation: Option<String>) -> Result<(), SessionError> {
        let next = plan.target();
        if is_legal_transition(&self.g, &self.config, &next, attacked)
            .map_err(|e| SessionError::Internal(e.to_string()))?
            .is_none()
        {
            return Err(SessionError::Internal("accepted plan failed revalidation".into()));
        }
        self.round += 1;
        self.config = next;
        self.trace.push(TraceRecord {
            round: self.round,
            attacked,
            plan,
            config: self.config.clone(),
            annotation,
        });
        if !is_vertex_cover(&self.g, &self.config) {
            self.status = Status::DefenderLost;
        }
        Ok(())
    }

    /// Human attack; the engine defends.
    pub fn attack(&mut self, u: &str, v: &str) -> Result<RoundResult, SessionError> {
        self.require_live(Mode::HumanAttacker)?;
        let e = self.edge(u, v)?;
        let resp = self
            .defender
            .respond(&self.g, &self.config, e)
            .map_err(|err| SessionError::Internal(err.to_string()))?;
        match resp {
            None => {
                self.status = Status::DefenderLost;
                Ok(RoundResult {
                    event: None,
                    ..self.result()
                })
            }
            Some(r) => {
                r.plan
                    .check(&self.g, &self.config, e)
                    .map_err(|err| SessionError::Internal(format!("engine produced an illegal plan: {err}")))?;
                self.apply(e, r.plan, r.annotation)?;
                Ok(self.result())
            }
        }
    }

    /// Human defense against the announced attack; the engine then attacks again.
    pub fn defend(&mut self, moves: &[(String, String)]) -> Result<RoundResult, SessionError> {
        self.require_live(Mode::HumanDefender)?;
        let e = self
            .pending
            .ok_or_else(|| SessionError::WrongState("no attack has been announced".into()))?;
        let idx = |id: &str| {
            self.g
                .index_of(id)
                .ok_or_else(|| SessionError::BadRequest(format!("unknown vertex `{id}`")))
        };
        let moves = moves
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, SessionError>>()?;
        let plan = MovePlan::from_moves(&self.g, &self.config, &moves, e).map_err(SessionError::Illegal)?;
        self.apply(e, plan, None)?;
        if self.status == Status::Live {
            self.announce()?;
        } else {
            self.pending = None;
        }
        Ok(self.result())
    }

    pub fn close(&mut self) -> Result<(), SessionError> {
        if self.status == Status::Closed {
            return Err(SessionError::Closed);
        }
        self.status = Status::Closed;
        self.pending = None;
        Ok(())
    }
}
