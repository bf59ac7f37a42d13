use super::{ReducedInstance, ReductionError, Role};
use crate::game::{Config, SafeSet};

/// Reads a dominating set off a winning position that holds the backup
/// vertex: every guarded red, plus the smallest red neighbour of each blue
/// whose dependent holds a guard. Returns 1-based reds.
pub fn extract_from_config(ri: &ReducedInstance, c: &Config) -> Result<Vec<usize>, ReductionError> {
    if !c.contains(ri.dagger()) {
        return Err(ReductionError::Extraction("position does not guard the backup vertex".into()));
    }
    let mut picked = Vec::new();
    for v in c {
        match ri.role(v) {
            Role::Red(q) => picked.push(q),
            Role::Dep(p, _) => picked.push(ri.red_neighbours(p).next().expect("every blue has a red neighbour")),
            _ => {}
        }
    }
    picked.sort_unstable();
    picked.dedup();
    if picked.len() > ri.k() {
        return Err(ReductionError::Extraction(format!(
            "{} reds extracted, budget is {}",
            picked.len(),
            ri.k()
        )));
    }
    for p in 1..=ri.b() {
        if !ri.red_neighbours(p).any(|q| picked.contains(&q)) {
            return Err(ReductionError::NotDominating(ri.source.blues[p - 1].clone()));
        }
    }
    Ok(picked)
}

/// Extracts a dominating set from a nonempty safe set at `k = ell`. If the
/// first safe position lacks the backup vertex, the bridge is attacked first.
pub fn extract_dominating_set(ri: &ReducedInstance, s: &SafeSet) -> Result<Vec<usize>, ReductionError> {
    let first = s.members().first().ok_or(ReductionError::EmptySafeSet)?;
    if s.k() != ri.ell {
        return Err(ReductionError::Extraction(format!(
            "safe set has {} guards, expected ell = {}",
            s.k(),
            ri.ell
        )));
    }
    if first.contains(ri.dagger()) {
        return extract_from_config(ri, first);
    }
    let (_, next) = s.defender_step(first, ri.bridge())?;
    extract_from_config(ri, &next)
}
