use std::sync::Arc;

use super::{EdgeKind, ReducedInstance, ReductionError, Role};
use crate::game::{Config, Defender, GameError, MovePlan, Response};
use crate::graph::{Edge, Graph};

/// Which extra vertex a nice cover holds on top of `B`, the universal vertex
/// and the guarded reds `S*`. Numbers are 1-based; `w` is a vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NiceKind {
    Backup,
    Dep { blue: usize, w: usize },
    DepStar { w: usize },
    Red { j: usize },
}

/// A nice vertex cover: `B + star + S* + extra`, of size `b + k + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NiceCover {
    pub kind: NiceKind,
    /// `S*`: exactly `k` reds, 1-based and ascending.
    pub dom: Vec<usize>,
}

impl NiceCover {
    pub fn materialize(&self, ri: &ReducedInstance) -> Config {
        let mut c = ri.core();
        for &q in &self.dom {
            c.insert(ri.red(q));
        }
        c.insert(match self.kind {
            NiceKind::Backup => ri.dagger(),
            NiceKind::Dep { w, .. } | NiceKind::DepStar { w } => w,
            NiceKind::Red { j } => ri.red(j),
        });
        c
    }

    pub fn label(&self, ri: &ReducedInstance) -> String {
        match self.kind {
            NiceKind::Backup => "Backup".into(),
            NiceKind::Dep { w, .. } => format!("Dep({})", ri.h.id(w)),
            NiceKind::DepStar { w } => format!("DepStar({})", ri.h.id(w)),
            NiceKind::Red { j } => format!("Red(v{j})"),
        }
    }

    fn with(&self, kind: NiceKind) -> NiceCover {
        NiceCover {
            kind,
            dom: self.dom.clone(),
        }
    }
}

/// `dom` padded to exactly `k` reds with the smallest unused ones, after
/// checking that it dominates every blue.
fn complete_dom(ri: &ReducedInstance, dom: &[usize]) -> Result<Vec<usize>, ReductionError> {
    let mut s: Vec<usize> = dom.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.iter().any(|&q| q == 0 || q > ri.r()) {
        return Err(ReductionError::Invalid("red number out of range".into()));
    }
    if s.len() > ri.k() {
        return Err(ReductionError::Invalid(format!(
            "{} reds exceed the budget k = {}",
            s.len(),
            ri.k()
        )));
    }
    for p in 1..=ri.b() {
        if !ri.red_neighbours(p).any(|q| s.contains(&q)) {
            return Err(ReductionError::NotDominating(ri.source.blues[p - 1].clone()));
        }
    }
    let mut q = 1;
    while s.len() < ri.k() {
        if !s.contains(&q) {
            s.push(q);
        }
        q += 1;
    }
    s.sort_unstable();
    Ok(s)
}

/// Every nice cover for the dominating set `dom`: the backup cover, all
/// dependent covers (blue types first, then the universal type), and the red
/// covers.
pub fn nice_cover_families(ri: &ReducedInstance, dom: &[usize]) -> Result<Vec<NiceCover>, ReductionError> {
    let dom = complete_dom(ri, dom)?;
    let mk = |kind| NiceCover {
        kind,
        dom: dom.clone(),
    };
    let mut out = vec![mk(NiceKind::Backup)];
    for i in 1..=ri.b() {
        out.extend(ri.dependents(i).iter().map(|&w| mk(NiceKind::Dep { blue: i, w })));
    }
    out.extend(ri.star_dependents().iter().map(|&w| mk(NiceKind::DepStar { w })));
    out.extend((1..=ri.r()).filter(|j| !dom.contains(j)).map(|j| mk(NiceKind::Red { j })));
    Ok(out)
}

/// Recognizes `c` as the nice cover for `dom` (padded as in
/// [`nice_cover_families`]). For a fixed `S*` the templates are disjoint, so
/// at most one matches.
pub fn classify_cover(ri: &ReducedInstance, dom: &[usize], c: &Config) -> Option<NiceCover> {
    let dom = complete_dom(ri, dom).ok()?;
    if c.len() != ri.ell {
        return None;
    }
    let mut base = ri.core();
    for &q in &dom {
        base.insert(ri.red(q));
    }
    if !base.is_subset(c) {
        return None;
    }
    let extra = c.difference(&base);
    let x = extra.iter().next()?;
    let kind = match ri.role(x) {
        Role::Backup => NiceKind::Backup,
        Role::Dep(i, _) => NiceKind::Dep { blue: i, w: x },
        Role::DepStar(_) => NiceKind::DepStar { w: x },
        Role::Red(j) => NiceKind::Red { j },
        Role::Blue(_) | Role::Universal => return None,
    };
    Some(NiceCover { kind, dom })
}

/// One defended attack: the guard movement, the resulting nice cover, and a
/// label naming the case that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceMove {
    pub plan: MovePlan,
    pub next: NiceCover,
    pub case: &'static str,
}

/// Defends `attacked` from the nice cover `nc` so that the guards end on
/// another nice cover with the same `S*`. Existential choices of a
/// dominating red take the smallest one.
pub fn defend_nice(ri: &ReducedInstance, nc: &NiceCover, attacked: Edge) -> Result<NiceMove, ReductionError> {
    let kind = ri
        .kind(attacked)
        .ok_or_else(|| GameError::NotAnEdge(ri.h.format_edge(attacked)))?;
    let in_s = |q: usize| nc.dom.contains(&q);
    let dom = |p: usize| {
        ri.red_neighbours(p)
            .find(|q| nc.dom.contains(q))
            .expect("S* dominates every blue")
    };
    let (v, u) = (|q| ri.red(q), |p| ri.blue(p));
    let (star, dagger) = (ri.star(), ri.dagger());
    let (a, b) = (attacked.0, attacked.1);
    let exchange = vec![(a, b), (b, a)];
    let same = nc.clone();

    // endpoints by role
    let structural = || match (ri.role(a), ri.role(b)) {
        (Role::Red(q), Role::Blue(p)) | (Role::Blue(p), Role::Red(q)) => (q, p),
        _ => unreachable!("structural edges join a red and a blue"),
    };
    let sliding = || if ri.role(a) == Role::Universal || matches!(ri.role(a), Role::Blue(_)) { b } else { a };
    let supplier = || match (ri.role(a), ri.role(b)) {
        (Role::Red(i), _) | (_, Role::Red(i)) => i,
        _ => unreachable!("supplier edges touch a red"),
    };

    let (moves, next, case): (Vec<(usize, usize)>, NiceCover, &'static str) = match (nc.kind, kind) {
        (_, EdgeKind::Clique) => (exchange, same, "clique/exchange"),

        (NiceKind::Backup, EdgeKind::Structural) => {
            let (q, p) = structural();
            if in_s(q) {
                (exchange, same, "backup/structural/exchange")
            } else {
                let r = dom(p);
                (
                    vec![(u(p), v(q)), (v(r), u(p)), (star, v(r)), (dagger, star)],
                    nc.with(NiceKind::Red { j: q }),
                    "backup/structural/cascade",
                )
            }
        }
        (NiceKind::Backup, EdgeKind::Sliding(Some(i))) => {
            let z = sliding();
            let q = dom(i);
            (
                vec![(u(i), z), (v(q), u(i)), (star, v(q)), (dagger, star)],
                nc.with(NiceKind::Dep { blue: i, w: z }),
                "backup/sliding/cascade",
            )
        }
        (NiceKind::Backup, EdgeKind::Sliding(None)) => {
            let z = sliding();
            (
                vec![(star, z), (dagger, star)],
                nc.with(NiceKind::DepStar { w: z }),
                "backup/sliding-star",
            )
        }
        (NiceKind::Backup, EdgeKind::Supplier) => {
            let i = supplier();
            if in_s(i) {
                (exchange, same, "backup/supplier/exchange")
            } else {
                (
                    vec![(star, v(i)), (dagger, star)],
                    nc.with(NiceKind::Red { j: i }),
                    "backup/supplier/shift",
                )
            }
        }
        (NiceKind::Backup, EdgeKind::Bridge) => (exchange, same, "backup/bridge/exchange"),

        (NiceKind::Red { j }, EdgeKind::Structural) => {
            let (q, p) = structural();
            if in_s(q) || q == j {
                (exchange, same, "red/structural/exchange")
            } else {
                let r = dom(p);
                (
                    vec![(u(p), v(q)), (v(r), u(p)), (star, v(r)), (v(j), star)],
                    nc.with(NiceKind::Red { j: q }),
                    "red/structural/cascade",
                )
            }
        }
        (NiceKind::Red { j }, EdgeKind::Sliding(Some(i))) => {
            let z = sliding();
            let r = dom(i);
            (
                vec![(u(i), z), (v(r), u(i)), (star, v(r)), (v(j), star)],
                nc.with(NiceKind::Dep { blue: i, w: z }),
                "red/sliding/cascade",
            )
        }
        (NiceKind::Red { j }, EdgeKind::Sliding(None)) => {
            let z = sliding();
            (
                vec![(star, z), (v(j), star)],
                nc.with(NiceKind::DepStar { w: z }),
                "red/sliding-star",
            )
        }
        (NiceKind::Red { j }, EdgeKind::Supplier) => {
            let i = supplier();
            if in_s(i) || i == j {
                (exchange, same, "red/supplier/exchange")
            } else {
                (
                    vec![(star, v(i)), (v(j), star)],
                    nc.with(NiceKind::Red { j: i }),
                    "red/supplier/shift",
                )
            }
        }
        (NiceKind::Red { j }, EdgeKind::Bridge) => (
            vec![(star, dagger), (v(j), star)],
            nc.with(NiceKind::Backup),
            "red/bridge",
        ),

        (NiceKind::Dep { blue: j, w }, EdgeKind::Structural) => {
            let (q, p) = structural();
            if in_s(q) {
                (exchange, same, "dep/structural/exchange")
            } else if p == j {
                (
                    vec![(u(j), v(q)), (w, u(j))],
                    nc.with(NiceKind::Red { j: q }),
                    "dep/structural/own-blue",
                )
            } else {
                let r = dom(p);
                if ri.blue_adjacent(r, j) {
                    (
                        vec![(u(p), v(q)), (v(r), u(p)), (u(j), v(r)), (w, u(j))],
                        nc.with(NiceKind::Red { j: q }),
                        "dep/structural/shared-dominator",
                    )
                } else {
                    let s = dom(j);
                    (
                        vec![
                            (u(p), v(q)),
                            (v(r), u(p)),
                            (star, v(r)),
                            (v(s), star),
                            (u(j), v(s)),
                            (w, u(j)),
                        ],
                        nc.with(NiceKind::Red { j: q }),
                        "dep/structural/via-star",
                    )
                }
            }
        }
        (NiceKind::Dep { blue: j, w }, EdgeKind::Sliding(Some(i))) => {
            let z = sliding();
            if i == j && z == w {
                (exchange, same, "dep/sliding/exchange")
            } else if i == j {
                (
                    vec![(u(j), z), (w, u(j))],
                    nc.with(NiceKind::Dep { blue: j, w: z }),
                    "dep/sliding/same-blue",
                )
            } else {
                let (q, r) = (dom(i), dom(j));
                if q == r {
                    (
                        vec![(u(i), z), (v(q), u(i)), (u(j), v(q)), (w, u(j))],
                        nc.with(NiceKind::Dep { blue: i, w: z }),
                        "dep/sliding/common-dominator",
                    )
                } else {
                    (
                        vec![
                            (u(i), z),
                            (v(q), u(i)),
                            (star, v(q)),
                            (v(r), star),
                            (u(j), v(r)),
                            (w, u(j)),
                        ],
                        nc.with(NiceKind::Dep { blue: i, w: z }),
                        "dep/sliding/distinct-dominators",
                    )
                }
            }
        }
        (NiceKind::Dep { blue: j, w }, EdgeKind::Sliding(None)) => {
            let z = sliding();
            let r = dom(j);
            (
                vec![(star, z), (v(r), star), (u(j), v(r)), (w, u(j))],
                nc.with(NiceKind::DepStar { w: z }),
                "dep/sliding-star",
            )
        }
        (NiceKind::Dep { blue: j, w }, EdgeKind::Supplier) => {
            let i = supplier();
            if in_s(i) {
                (exchange, same, "dep/supplier/exchange")
            } else {
                let q = dom(j);
                (
                    vec![(star, v(i)), (v(q), star), (u(j), v(q)), (w, u(j))],
                    nc.with(NiceKind::Red { j: i }),
                    "dep/supplier/cascade",
                )
            }
        }
        (NiceKind::Dep { blue: j, w }, EdgeKind::Bridge) => {
            let q = dom(j);
            (
                vec![(star, dagger), (v(q), star), (u(j), v(q)), (w, u(j))],
                nc.with(NiceKind::Backup),
                "dep/bridge",
            )
        }

        (NiceKind::DepStar { w }, EdgeKind::Structural) => {
            let (q, p) = structural();
            if in_s(q) {
                (exchange, same, "depstar/structural/exchange")
            } else {
                let r = dom(p);
                (
                    vec![(u(p), v(q)), (v(r), u(p)), (star, v(r)), (w, star)],
                    nc.with(NiceKind::Red { j: q }),
                    "depstar/structural/cascade",
                )
            }
        }
        (NiceKind::DepStar { w }, EdgeKind::Sliding(Some(i))) => {
            let z = sliding();
            let q = dom(i);
            (
                vec![(u(i), z), (v(q), u(i)), (star, v(q)), (w, star)],
                nc.with(NiceKind::Dep { blue: i, w: z }),
                "depstar/sliding/cascade",
            )
        }
        (NiceKind::DepStar { w }, EdgeKind::Sliding(None)) => {
            let z = sliding();
            if z == w {
                (exchange, same, "depstar/sliding-star/exchange")
            } else {
                (
                    vec![(star, z), (w, star)],
                    nc.with(NiceKind::DepStar { w: z }),
                    "depstar/sliding-star/shift",
                )
            }
        }
        (NiceKind::DepStar { w }, EdgeKind::Supplier) => {
            let i = supplier();
            if in_s(i) {
                (exchange, same, "depstar/supplier/exchange")
            } else {
                (
                    vec![(star, v(i)), (w, star)],
                    nc.with(NiceKind::Red { j: i }),
                    "depstar/supplier/shift",
                )
            }
        }
        (NiceKind::DepStar { w }, EdgeKind::Bridge) => (
            vec![(star, dagger), (w, star)],
            nc.with(NiceKind::Backup),
            "depstar/bridge",
        ),
    };

    let current = nc.materialize(ri);
    let plan = MovePlan::from_moves(&ri.h, &current, &moves, attacked).map_err(GameError::from)?;
    if plan.target() != next.materialize(ri) {
        return Err(ReductionError::NotNice(format!(
            "case {case} lands on {} instead of {}",
            ri.h.format_set(&plan.target()),
            next.label(ri)
        )));
    }
    Ok(NiceMove { plan, next, case })
}

/// Defender that starts on the backup cover and answers every attack with
/// [`defend_nice`].
#[derive(Clone, Debug)]
pub struct NiceDefender {
    ri: Arc<ReducedInstance>,
    dom: Vec<usize>,
}

impl NiceDefender {
    pub fn new(ri: Arc<ReducedInstance>, dom: &[usize]) -> Result<Self, ReductionError> {
        let dom = complete_dom(&ri, dom)?;
        Ok(NiceDefender { ri, dom })
    }

    pub fn start(&self) -> NiceCover {
        NiceCover {
            kind: NiceKind::Backup,
            dom: self.dom.clone(),
        }
    }
}

impl Defender for NiceDefender {
    fn initial(&mut self, _g: &Graph) -> Result<Config, GameError> {
        Ok(self.start().materialize(&self.ri))
    }

    fn respond(&mut self, _g: &Graph, current: &Config, attacked: Edge) -> Result<Option<Response>, GameError> {
        let nc = classify_cover(&self.ri, &self.dom, current).ok_or_else(|| {
            GameError::Policy(format!("`{}` is not a nice cover", self.ri.h.format_set(current)))
        })?;
        let mv = defend_nice(&self.ri, &nc, attacked).map_err(|e| GameError::Policy(e.to_string()))?;
        Ok(Some(Response {
            next: mv.plan.target(),
            plan: mv.plan,
            annotation: Some(mv.next.label(&self.ri)),
        }))
    }
}

/// Outcome of running the case machine on every (nice cover, edge) pair.
#[derive(Clone, Debug, Default)]
pub struct ClosureReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Defends every edge of `H` from every nice cover over `dom` and checks that
/// the plan is legal, ends on the nice cover it names, and keeps a connected
/// cover connected.
pub fn check_nice_closure(ri: &ReducedInstance, dom: &[usize]) -> Result<ClosureReport, ReductionError> {
    let mut report = ClosureReport::default();
    for nc in nice_cover_families(ri, dom)? {
        let c = nc.materialize(ri);
        let was_connected = super::check_connected_cover(ri, &c);
        for &e in ri.h.edges() {
            report.checked += 1;
            let label = format!("{} on {}", nc.label(ri), ri.h.format_edge(e));
            let mv = match defend_nice(ri, &nc, e) {
                Ok(mv) => mv,
                Err(err) => {
                    report.failures.push(format!("{label}: {err}"));
                    continue;
                }
            };
            let next = mv.next.materialize(ri);
            let legal = mv.plan.check(&ri.h, &c, e).is_ok_and(|t| t == next);
            let nice = classify_cover(ri, dom, &next).as_ref() == Some(&mv.next);
            let connected = !was_connected || super::check_connected_cover(ri, &next);
            if !(legal && nice && connected) {
                report
                    .failures
                    .push(format!("{label}: legal {legal} nice {nice} connected {connected}"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_legal_transition;
    use crate::graph::is_vertex_cover;
    use crate::reduction::tests::inst;
    use crate::reduction::{build_reduction, check_connected_cover, Variant};

    fn yes_instance(variant: Variant) -> ReducedInstance {
        build_reduction(&inst(3, 2, &[(1, 1), (1, 2), (2, 2), (3, 1)], 1), variant).unwrap()
    }

    #[test]
    fn family_counts() {
        let ri = yes_instance(Variant::Bipartite);
        let fam = nice_cover_families(&ri, &[1]).unwrap();
        assert_eq!(fam.len(), 1 + 2 * 7 + 7 + 2);
        for nc in &fam {
            let c = nc.materialize(&ri);
            assert_eq!(c.len(), ri.ell);
            assert!(is_vertex_cover(&ri.h, &c));
            assert_eq!(classify_cover(&ri, &[1], &c).as_ref(), Some(nc));
        }
        assert!(nice_cover_families(&ri, &[2]).is_err());
    }

    #[test]
    fn classify_rejects_non_templates() {
        let ri = yes_instance(Variant::Bipartite);
        let mut c = nice_cover_families(&ri, &[1]).unwrap()[0].materialize(&ri);
        c.remove(ri.star());
        c.insert(ri.red(2));
        assert_eq!(classify_cover(&ri, &[1], &c), None);
    }

    #[test]
    fn documented_moves() {
        let ri = yes_instance(Variant::Bipartite);
        let backup = nice_cover_families(&ri, &[1]).unwrap()[0].clone();
        let mv = defend_nice(&ri, &backup, ri.bridge()).unwrap();
        assert_eq!(mv.next.kind, NiceKind::Backup);
        assert_eq!(mv.plan.moves().count(), 2);

        let w = ri.star_dependents()[0];
        let mv = defend_nice(&ri, &backup, Edge::new(ri.star(), w)).unwrap();
        assert_eq!(mv.next.kind, NiceKind::DepStar { w });
        let mut moves: Vec<_> = mv.plan.moves().collect();
        moves.sort();
        let mut expected = vec![(ri.star(), w), (ri.dagger(), ri.star())];
        expected.sort();
        assert_eq!(moves, expected);

        let red = NiceCover {
            kind: NiceKind::Red { j: 2 },
            dom: vec![1],
        };
        let mv = defend_nice(&ri, &red, ri.bridge()).unwrap();
        assert_eq!(mv.next.kind, NiceKind::Backup);
        assert!(mv.plan.moves().any(|m| m == (ri.star(), ri.dagger())));
        assert!(mv.plan.moves().any(|m| m == (ri.red(2), ri.star())));
    }

    #[test]
    fn closed_on_every_pair() {
        for variant in [Variant::Bipartite, Variant::Split] {
            let ri = yes_instance(variant);
            for nc in nice_cover_families(&ri, &[1]).unwrap() {
                let c = nc.materialize(&ri);
                for &e in ri.h.edges() {
                    let mv = defend_nice(&ri, &nc, e).unwrap();
                    let next = mv.next.materialize(&ri);
                    assert!(is_legal_transition(&ri.h, &c, &next, e).unwrap().is_some());
                    assert_eq!(classify_cover(&ri, &[1], &next), Some(mv.next.clone()));
                    assert!(check_connected_cover(&ri, &next));
                }
            }
        }
    }
}
