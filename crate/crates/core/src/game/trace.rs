//! Line-delimited game traces: `round,u v,a->b;c->d,x y z[,annotation]`.
//! Lines starting with `#` are comments.

use serde::{Deserialize, Serialize};

use super::{Config, GameError, MovePlan};
use crate::graph::{Edge, Graph};

/// One played round, in index form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub round: usize,
    pub attacked: Edge,
    pub plan: MovePlan,
    pub config: Config,
    pub annotation: Option<String>,
}

impl TraceRecord {
    pub fn format(&self, g: &Graph) -> String {
        let mut line = format!(
            "{},{} {},{},{}",
            self.round,
            g.id(self.attacked.0),
            g.id(self.attacked.1),
            self.plan.format(g),
            g.format_set(&self.config)
        );
        if let Some(a) = &self.annotation {
            line.push(',');
            line.push_str(a);
        }
        line
    }

    pub fn event(&self, g: &Graph) -> TraceEvent {
        TraceEvent {
            round: self.round,
            attacked: (g.id(self.attacked.0).to_string(), g.id(self.attacked.1).to_string()),
            moves: self
                .plan
                .moves()
                .map(|(a, b)| (g.id(a).to_string(), g.id(b).to_string()))
                .collect(),
            config: self.config.iter().map(|v| g.id(v).to_string()).collect(),
            annotation: self.annotation.clone(),
        }
    }
}

/// One trace line, in id form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub round: usize,
    pub attacked: (String, String),
    pub moves: Vec<(String, String)>,
    pub config: Vec<String>,
    pub annotation: Option<String>,
}

pub fn format_trace(g: &Graph, records: &[TraceRecord]) -> String {
    records.iter().map(|r| r.format(g) + "\n").collect()
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>, GameError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| GameError::Trace {
            line: no + 1,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.splitn(5, ',').collect();
        if fields.len() < 4 {
            return Err(err("expected round,edge,moves,config"));
        }
        let round = fields[0].trim().parse().map_err(|_| err("bad round number"))?;
        let ends: Vec<&str> = fields[1].split_whitespace().collect();
        let [a, b] = ends[..] else {
            return Err(err("attacked edge needs two ids"));
        };
        let mut moves = Vec::new();
        for m in fields[2].split(';').map(str::trim).filter(|m| !m.is_empty()) {
            let (from, to) = m.split_once("->").ok_or_else(|| err("move needs `->`"))?;
            moves.push((from.trim().to_string(), to.trim().to_string()));
        }
        out.push(TraceEvent {
            round,
            attacked: (a.to_string(), b.to_string()),
            moves,
            config: fields[3].split_whitespace().map(str::to_string).collect(),
            annotation: fields.get(4).map(|s| s.to_string()),
        });
    }
    Ok(out)
}

/// Replays parsed events from `initial`, checking every move and every
/// recorded configuration. Returns the final configuration.
pub fn replay_trace(g: &Graph, initial: &Config, events: &[TraceEvent]) -> Result<Config, GameError> {
    let mut current = initial.clone();
    for (i, ev) in events.iter().enumerate() {
        let mismatch = |message: String| GameError::Trace {
            line: i + 1,
            message,
        };
        let attacked = g
            .edge_by_ids(&ev.attacked.0, &ev.attacked.1)
            .ok_or_else(|| GameError::NotAnEdge(format!("{} {}", ev.attacked.0, ev.attacked.1)))?;
        let idx = |id: &str| {
            g.index_of(id)
                .ok_or_else(|| GameError::Graph(crate::graph::GraphError::UnknownVertex(id.to_string())))
        };
        let moves = ev
            .moves
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, GameError>>()?;
        let next = MovePlan::from_moves(g, &current, &moves, attacked)?.target();
        let recorded = ev
            .config
            .iter()
            .map(|id| idx(id))
            .collect::<Result<Config, GameError>>()?;
        if next != recorded {
            return Err(mismatch(format!(
                "moves lead to `{}`, trace records `{}`",
                g.format_set(&next),
                g.format_set(&recorded)
            )));
        }
        current = next;
    }
    Ok(current)
}
