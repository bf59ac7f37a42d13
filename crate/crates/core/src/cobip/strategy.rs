use std::sync::Arc;

use super::{analyze, Branch, CobipError, CobipInstance, CoverTemplate, PartitionAnalysis};
use crate::game::{AllButOneDefender, Config, Defender, GameError, MovePlan, Response};
use crate::graph::{is_vertex_cover, Edge, Graph};

/// The templates a branch's strategy keeps the guards on.
pub fn template_family(inst: &CobipInstance, an: &PartitionAnalysis) -> Vec<CoverTemplate> {
    if an.branch.uses_all_but_one() {
        return (0..inst.g.n()).map(CoverTemplate::AllButOne).collect();
    }
    let v = View::new(inst, false);
    let keep = |i: usize, j: usize| -> bool {
        match an.branch {
            Branch::BigOneEdge => {
                let (ea, eb) = v.single_cross_edge().expect("one cross edge");
                i != ea && j != eb
            }
            Branch::BigSingleA => Some(i) != v.single_active_a(),
            Branch::BigSingleB => Some(j) != View::new(inst, true).single_active_a(),
            _ => inst.friends(i, j),
        }
    };
    (0..inst.p())
        .flat_map(|i| (0..inst.q()).map(move |j| (i, j)))
        .filter(|&(i, j)| keep(i, j))
        .map(|(i, j)| CoverTemplate::Sij(i, j))
        .collect()
}

/// The first template of the branch's family.
pub fn initial_template(inst: &CobipInstance, an: &PartitionAnalysis) -> CoverTemplate {
    template_family(inst, an)
        .into_iter()
        .next()
        .expect("every branch has a template")
}

/// One round of the constructive strategy: the guards stand on `ct` and
/// `attacked` is hit. Returns the validated plan and the next template.
pub fn defend_cobip(
    inst: &CobipInstance,
    an: &PartitionAnalysis,
    ct: CoverTemplate,
    attacked: Edge,
) -> Result<(MovePlan, CoverTemplate), CobipError> {
    let g = &inst.g;
    if g.edge_position(attacked).is_none() {
        return Err(CobipError::NotAnEdge(format!("{attacked:?}")));
    }
    let mismatch = || CobipError::Template {
        template: ct.label(inst),
        branch: an.branch,
    };
    let current = ct.materialize(inst);
    if let CoverTemplate::AllButOne(_) = ct {
        if !an.branch.uses_all_but_one() {
            return Err(mismatch());
        }
        let (plan, empty) = AllButOneDefender::step(g, &current, attacked)?;
        return Ok((plan, CoverTemplate::AllButOne(empty)));
    }
    if an.branch.uses_all_but_one() || !template_family(inst, an).contains(&ct) {
        return Err(mismatch());
    }
    let CoverTemplate::Sij(i, j) = ct else { unreachable!() };
    let Edge(u, w) = attacked;
    let (moves, next) = if current.contains(u) && current.contains(w) {
        (vec![(u, w), (w, u)], (i, j))
    } else {
        let v = View::new(inst, false);
        let hit = v.classify(i, j, attacked)?;
        match an.branch {
            Branch::P1Isolated | Branch::Q2NoCross | Branch::P2NoCross | Branch::BigNoCross => {
                no_cross(&v, i, j, hit)?
            }
            Branch::Q2Unique => unique(&v, i, j, hit)?,
            Branch::P2Disjoint => two_row(&v, i, j, hit, false)?,
            Branch::P2Partial => two_row(&v, i, j, hit, true)?,
            Branch::BigOneEdge => one_edge(&v, i, j, hit)?,
            Branch::BigSomeGlobals => some_globals(&v, i, j, hit)?,
            Branch::BigSingleA => single_active(&v, i, j, hit)?,
            Branch::BigSingleB => {
                let f = View::new(inst, true);
                let (moves, (x, y)) = single_active(&f, j, i, hit.flip())?;
                (moves, (y, x))
            }
            Branch::BigSpread => spread(&v, i, j, hit)?,
            b => unreachable!("{b} uses all-but-one"),
        }
    };
    let plan = MovePlan::from_moves(g, &current, &moves, attacked)?;
    let next_ct = CoverTemplate::Sij(next.0, next.1);
    let target = next_ct.materialize(inst);
    if plan.target() != target || !is_vertex_cover(g, &target) {
        return Err(CobipError::Strategy(format!(
            "{} under attack on {} lands off {}",
            ct.label(inst),
            g.format_edge(attacked),
            next_ct.label(inst)
        )));
    }
    Ok((plan, next_ct))
}

/// Where an attacked edge with one empty endpoint lies, relative to the empty
/// pair `a_i`, `b_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Hit {
    /// `a_r a_i`.
    InA(usize),
    /// `b_s b_j`.
    InB(usize),
    /// `a_i b_s`.
    CrossAtA(usize),
    /// `a_r b_j`.
    CrossAtB(usize),
}

impl Hit {
    fn flip(self) -> Hit {
        match self {
            Hit::InA(r) => Hit::InB(r),
            Hit::InB(s) => Hit::InA(s),
            Hit::CrossAtA(s) => Hit::CrossAtB(s),
            Hit::CrossAtB(r) => Hit::CrossAtA(r),
        }
    }
}

type Moves = (Vec<(usize, usize)>, (usize, usize));

/// The two sides seen in either orientation, so mirrored cases reuse one
/// implementation. Positions are into the (possibly swapped) sides.
struct View<'a> {
    g: &'a Graph,
    a: &'a [usize],
    b: &'a [usize],
}

impl<'a> View<'a> {
    fn new(inst: &'a CobipInstance, flipped: bool) -> View<'a> {
        let (a, b) = if flipped {
            (inst.b_vertices(), inst.a_vertices())
        } else {
            (inst.a_vertices(), inst.b_vertices())
        };
        View { g: &inst.g, a, b }
    }

    fn adj(&self, i: usize, j: usize) -> bool {
        self.g.has_edge(self.a[i], self.b[j])
    }

    fn global_b(&self, j: usize) -> bool {
        (0..self.a.len()).all(|i| self.adj(i, j))
    }

    fn first_a(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        (0..self.a.len()).find(|&i| pred(i))
    }

    fn first_b(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        (0..self.b.len()).find(|&j| pred(j))
    }

    fn single_cross_edge(&self) -> Option<(usize, usize)> {
        let i = self.first_a(|i| (0..self.b.len()).any(|j| self.adj(i, j)))?;
        Some((i, self.first_b(|j| self.adj(i, j))?))
    }

    /// The only vertex of the first side with cross edges, if there is one.
    fn single_active_a(&self) -> Option<usize> {
        let active: Vec<usize> = (0..self.a.len())
            .filter(|&i| (0..self.b.len()).any(|j| self.adj(i, j)))
            .collect();
        (active.len() == 1).then(|| active[0])
    }

    fn classify(&self, i: usize, j: usize, e: Edge) -> Result<Hit, CobipError> {
        let (x, y) = (self.a[i], self.b[j]);
        let other = if e.touches(x) { e.other(x) } else { e.other(y) };
        let pos_a = self.a.iter().position(|&v| v == other);
        let pos_b = self.b.iter().position(|&v| v == other);
        Ok(match (e.touches(x), pos_a, pos_b) {
            (true, Some(r), _) => Hit::InA(r),
            (true, _, Some(s)) if s != j => Hit::CrossAtA(s),
            (false, _, Some(s)) => Hit::InB(s),
            (false, Some(r), _) => Hit::CrossAtB(r),
            _ => return Err(CobipError::Strategy("attack on an uncovered edge".into())),
        })
    }

    fn mv_a(&self, from: usize, to: usize) -> (usize, usize) {
        (self.a[from], self.a[to])
    }

    fn mv_b(&self, from: usize, to: usize) -> (usize, usize) {
        (self.b[from], self.b[to])
    }

    fn mv_ab(&self, from: usize, to: usize) -> (usize, usize) {
        (self.a[from], self.b[to])
    }

    fn mv_ba(&self, from: usize, to: usize) -> (usize, usize) {
        (self.b[from], self.a[to])
    }
}

fn missing(what: &str) -> CobipError {
    CobipError::Strategy(what.to_string())
}

/// No cross edges: the guard on the other endpoint slides into the hole.
fn no_cross(v: &View, i: usize, j: usize, hit: Hit) -> Result<Moves, CobipError> {
    match hit {
        Hit::InA(r) => Ok((vec![v.mv_a(r, i)], (r, j))),
        Hit::InB(s) => Ok((vec![v.mv_b(s, j)], (i, s))),
        _ => Err(missing("cross edge in a branch without cross edges")),
    }
}

/// `p = q = 2` with a perfect cross matching: every attack moves to the
/// opposite template.
fn unique(v: &View, i: usize, j: usize, hit: Hit) -> Result<Moves, CobipError> {
    let (o, jo) = (1 - i, 1 - j);
    let moves = match hit {
        Hit::InA(_) => vec![v.mv_a(o, i), v.mv_b(jo, j)],
        Hit::InB(_) => vec![v.mv_b(jo, j), v.mv_a(o, i)],
        Hit::CrossAtA(_) => vec![v.mv_ba(jo, i), v.mv_ab(o, j)],
        Hit::CrossAtB(_) => vec![v.mv_ab(o, j), v.mv_ba(jo, i)],
    };
    Ok((moves, (o, jo)))
}

/// Membership of `b_s` relative to the empty `a_i` and the other `a_o`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    OnlyEmpty,
    OnlyOther,
    Both,
    Neither,
}

/// `p = 2 < q` with both rows active. `partial` selects the moves for a
/// nonempty shared neighbourhood.
fn two_row(v: &View, i: usize, j: usize, hit: Hit, partial: bool) -> Result<Moves, CobipError> {
    let o = 1 - i;
    let part = |s: usize| match (v.adj(i, s), v.adj(o, s)) {
        (true, false) => Part::OnlyEmpty,
        (false, true) => Part::OnlyOther,
        (true, true) => Part::Both,
        (false, false) => Part::Neither,
    };
    let first = |ok: &dyn Fn(Part) -> bool, skip: usize| {
        v.first_b(|s| s != skip && ok(part(s)))
            .ok_or_else(|| missing("no vertex of the required part"))
    };
    match hit {
        Hit::InA(_) => {
            let mut moves = vec![v.mv_a(o, i)];
            if part(j) == Part::Neither {
                return Ok((moves, (o, j)));
            }
            let k = if partial {
                first(&|p| matches!(p, Part::OnlyEmpty | Part::Neither), j)?
            } else {
                first(&|p| p == Part::OnlyEmpty, j)?
            };
            moves.push(v.mv_b(k, j));
            Ok((moves, (o, k)))
        }
        Hit::InB(k) => match part(k) {
            Part::OnlyOther | Part::Neither => Ok((vec![v.mv_b(k, j)], (i, k))),
            Part::OnlyEmpty => Ok((vec![v.mv_b(k, j), v.mv_a(o, i)], (o, k))),
            Part::Both => {
                let mut moves = vec![v.mv_b(k, j)];
                if let Ok(r) = first(&|p| matches!(p, Part::OnlyOther | Part::Neither), j) {
                    moves.push(v.mv_b(r, k));
                    Ok((moves, (i, r)))
                } else {
                    let r = first(&|p| p == Part::OnlyEmpty, j)?;
                    moves.extend([v.mv_b(r, k), v.mv_a(o, i)]);
                    Ok((moves, (o, r)))
                }
            }
        },
        Hit::CrossAtA(k) if part(k) == Part::OnlyEmpty => {
            let mut moves = vec![v.mv_ba(k, i)];
            if part(j) == Part::OnlyOther {
                moves.push(v.mv_ab(o, j));
                return Ok((moves, (o, k)));
            }
            let r = if partial {
                first(&|p| matches!(p, Part::OnlyOther | Part::Both), j)?
            } else {
                first(&|p| p == Part::OnlyOther, j)?
            };
            moves.extend([v.mv_b(r, k), v.mv_ab(o, r)]);
            Ok((moves, (o, j)))
        }
        Hit::CrossAtA(k) => {
            let mut moves = vec![v.mv_ba(k, i)];
            if part(j) == Part::Neither {
                moves.push(v.mv_ab(o, k));
                return Ok((moves, (o, j)));
            }
            let r = first(&|p| matches!(p, Part::OnlyEmpty | Part::Neither), j)?;
            moves.extend([v.mv_b(r, k), v.mv_ab(o, j)]);
            Ok((moves, (o, r)))
        }
        Hit::CrossAtB(_) => {
            let mut moves = vec![v.mv_ab(o, j)];
            if let Ok(k) = first(&|p| p == Part::OnlyEmpty, j) {
                moves.push(v.mv_ba(k, i));
                return Ok((moves, (o, k)));
            }
            let k = first(&|p| p == Part::Neither, j)?;
            let r = first(&|p| p == Part::Both, j)?;
            moves.extend([v.mv_ba(r, o), v.mv_b(k, r)]);
            Ok((moves, (i, k)))
        }
    }
}

/// A single cross edge `a_e b_e`; the holes stay away from its endpoints.
fn one_edge(v: &View, i: usize, j: usize, hit: Hit) -> Result<Moves, CobipError> {
    let (ea, eb) = v.single_cross_edge().ok_or_else(|| missing("cross edge"))?;
    match hit {
        Hit::InA(r) if r != ea => Ok((vec![v.mv_a(r, i)], (r, j))),
        Hit::InA(_) => {
            let r = v.first_a(|r| r != ea && r != i).ok_or_else(|| missing("third vertex in A"))?;
            Ok((vec![v.mv_a(ea, i), v.mv_a(r, ea)], (r, j)))
        }
        Hit::InB(s) if s != eb => Ok((vec![v.mv_b(s, j)], (i, s))),
        Hit::InB(_) => {
            let s = v.first_b(|s| s != eb && s != j).ok_or_else(|| missing("third vertex in B"))?;
            Ok((vec![v.mv_b(eb, j), v.mv_b(s, eb)], (i, s)))
        }
        _ => Err(missing("cross edge at a hole")),
    }
}

/// At least two cross edges and some, but not all but one, vertices of `B`
/// global. Holes stay on friend pairs with `b_j` non-global.
fn some_globals(v: &View, i: usize, j: usize, hit: Hit) -> Result<Moves, CobipError> {
    let friend = |r: usize, s: usize| !v.adj(r, s);
    let first_friend_of_a = |r: usize, skip: usize| {
        v.first_b(|s| s != skip && friend(r, s))
            .ok_or_else(|| missing("friend in B"))
    };
    let first_friend_of_b = |s: usize, skip: usize| {
        v.first_a(|r| r != skip && friend(r, s))
            .ok_or_else(|| missing("friend in A"))
    };
    let global = || v.first_b(|s| v.global_b(s)).ok_or_else(|| missing("global vertex in B"));
    match hit {
        Hit::InA(r) => {
            let mut moves = vec![v.mv_a(r, i)];
            if friend(r, j) {
                return Ok((moves, (r, j)));
            }
            let s = first_friend_of_a(r, j)?;
            moves.push(v.mv_b(s, j));
            Ok((moves, (r, s)))
        }
        Hit::InB(s) if !v.global_b(s) => {
            let mut moves = vec![v.mv_b(s, j)];
            if friend(i, s) {
                return Ok((moves, (i, s)));
            }
            let r = first_friend_of_b(s, i)?;
            moves.push(v.mv_a(r, i));
            Ok((moves, (r, s)))
        }
        Hit::InB(s) => {
            let mut moves = vec![v.mv_b(s, j)];
            if let Ok(t) = first_friend_of_a(i, j) {
                moves.push(v.mv_b(t, s));
                return Ok((moves, (i, t)));
            }
            let t = v
                .first_b(|t| t != j && !v.global_b(t))
                .ok_or_else(|| missing("second non-global vertex"))?;
            let r = first_friend_of_b(t, i)?;
            moves.extend([v.mv_b(t, s), v.mv_a(r, i)]);
            Ok((moves, (r, t)))
        }
        Hit::CrossAtA(s) if !v.global_b(s) => {
            let r = first_friend_of_b(s, i)?;
            let gl = global()?;
            Ok((vec![v.mv_ba(s, i), v.mv_b(gl, j), v.mv_ab(r, gl)], (r, s)))
        }
        Hit::CrossAtA(s) => {
            let mut moves = vec![v.mv_ba(s, i)];
            if let Ok(r) = first_friend_of_b(j, i) {
                moves.push(v.mv_ab(r, s));
                return Ok((moves, (r, j)));
            }
            let r = v.first_a(|r| r != i).ok_or_else(|| missing("second vertex in A"))?;
            let t = first_friend_of_a(r, j)?;
            moves.extend([v.mv_b(t, j), v.mv_ab(r, s)]);
            Ok((moves, (r, t)))
        }
        Hit::CrossAtB(r) => {
            let mut moves = vec![v.mv_ab(r, j)];
            let t = v
                .first_b(|t| t != j && !v.global_b(t))
                .ok_or_else(|| missing("second non-global vertex"))?;
            if friend(r, t) {
                let gl = global()?;
                moves.extend([v.mv_ba(gl, i), v.mv_b(t, gl)]);
                Ok((moves, (r, t)))
            } else if friend(i, t) {
                moves.push(v.mv_ba(t, r));
                Ok((moves, (i, t)))
            } else {
                let s = first_friend_of_b(t, i)?;
                moves.extend([v.mv_ba(t, r), v.mv_a(s, i)]);
                Ok((moves, (s, t)))
            }
        }
    }
}

/// No globals and a single vertex `a_e` of the first side with cross edges;
/// the hole in that side never sits on `a_e`.
fn single_active(v: &View, i: usize, j: usize, hit: Hit) -> Result<Moves, CobipError> {
    let e = v.single_active_a().ok_or_else(|| missing("single active vertex"))?;
    match hit {
        Hit::InA(r) if r != e => Ok((vec![v.mv_a(r, i)], (r, j))),
        Hit::InA(_) => {
            let r = v.first_a(|r| r != e && r != i).ok_or_else(|| missing("third vertex"))?;
            Ok((vec![v.mv_a(e, i), v.mv_a(r, e)], (r, j)))
        }
        Hit::InB(s) => Ok((vec![v.mv_b(s, j)], (i, s))),
        Hit::CrossAtB(_) => {
            let s = v
                .first_b(|s| s != j && v.adj(e, s))
                .ok_or_else(|| missing("second neighbour of the active vertex"))?;
            Ok((vec![v.mv_ab(e, j), v.mv_ba(s, e)], (i, s)))
        }
        Hit::CrossAtA(_) => Err(missing("cross edge at an inactive vertex")),
    }
}

/// No globals, and cross edges at two or more vertices on each side.
fn spread(v: &View, i: usize, j: usize, hit: Hit) -> Result<Moves, CobipError> {
    let friend = |r: usize, s: usize| !v.adj(r, s);
    match hit {
        Hit::InA(r) => {
            let mut moves = vec![v.mv_a(r, i)];
            if friend(r, j) {
                return Ok((moves, (r, j)));
            }
            let s = v.first_b(|s| friend(r, s)).ok_or_else(|| missing("friend in B"))?;
            moves.push(v.mv_b(s, j));
            Ok((moves, (r, s)))
        }
        Hit::InB(s) => {
            let mut moves = vec![v.mv_b(s, j)];
            if friend(i, s) {
                return Ok((moves, (i, s)));
            }
            let r = v.first_a(|r| friend(r, s)).ok_or_else(|| missing("friend in A"))?;
            moves.push(v.mv_a(r, i));
            Ok((moves, (r, s)))
        }
        Hit::CrossAtA(s) => spread_cross(v, i, j, s),
        Hit::CrossAtB(r) => {
            let (ga, gb) = (v.b, v.a);
            let f = View { g: v.g, a: ga, b: gb };
            let (moves, (x, y)) = spread_cross(&f, j, i, r)?;
            Ok((moves, (y, x)))
        }
    }
}

/// Attack on `a_i b_s`: `b_s` fills `a_i`, and another active `a_r` refills `B`.
fn spread_cross(v: &View, i: usize, j: usize, s: usize) -> Result<Moves, CobipError> {
    let friend = |r: usize, t: usize| !v.adj(r, t);
    let mut moves = vec![v.mv_ba(s, i)];
    let r = v
        .first_a(|r| r != i && (0..v.b.len()).any(|t| v.adj(r, t)))
        .ok_or_else(|| missing("second active vertex"))?;
    if v.adj(r, s) {
        moves.push(v.mv_ab(r, s));
        if friend(r, j) {
            return Ok((moves, (r, j)));
        }
        let t = v.first_b(|t| friend(r, t)).ok_or_else(|| missing("friend in B"))?;
        moves.push(v.mv_b(t, j));
        Ok((moves, (r, t)))
    } else if v.adj(r, j) {
        moves.push(v.mv_ab(r, j));
        Ok((moves, (r, s)))
    } else {
        let t = v.first_b(|t| v.adj(r, t)).ok_or_else(|| missing("neighbour in B"))?;
        moves.extend([v.mv_b(t, j), v.mv_ab(r, t)]);
        Ok((moves, (r, s)))
    }
}

/// Plays the constructive strategy of the instance's branch, starting from
/// the first template of its family.
#[derive(Clone, Debug)]
pub struct CobipDefender {
    inst: Arc<CobipInstance>,
    an: PartitionAnalysis,
    current: CoverTemplate,
}

impl CobipDefender {
    pub fn new(inst: Arc<CobipInstance>) -> Result<CobipDefender, CobipError> {
        let an = analyze(&inst)?;
        let current = initial_template(&inst, &an);
        Ok(CobipDefender { inst, an, current })
    }

    pub fn guards(&self) -> usize {
        self.current.materialize(&self.inst).len()
    }

    pub fn template(&self) -> CoverTemplate {
        self.current
    }
}

impl Defender for CobipDefender {
    fn initial(&mut self, _g: &Graph) -> Result<Config, GameError> {
        Ok(self.current.materialize(&self.inst))
    }

    fn respond(&mut self, _g: &Graph, current: &Config, attacked: Edge) -> Result<Option<Response>, GameError> {
        if *current != self.current.materialize(&self.inst) {
            return Err(GameError::Policy(format!(
                "guards left template {}",
                self.current.label(&self.inst)
            )));
        }
        let (plan, next) = defend_cobip(&self.inst, &self.an, self.current, attacked)
            .map_err(|e| GameError::Policy(e.to_string()))?;
        self.current = next;
        Ok(Some(Response {
            next: plan.target(),
            plan,
            annotation: Some(next.label(&self.inst)),
        }))
    }
}

/// Defends every edge from every template of the family and checks that the
/// answer is legal and lands back in the family. Returns the number of
/// (template, edge) pairs checked.
pub fn check_closure(inst: &CobipInstance) -> Result<usize, CobipError> {
    let an = analyze(inst)?;
    let family = template_family(inst, &an);
    let mut checked = 0;
    for &ct in &family {
        let c = ct.materialize(inst);
        if !is_vertex_cover(&inst.g, &c) {
            return Err(CobipError::Strategy(format!("{} is not a cover", ct.label(inst))));
        }
        for &e in inst.g.edges() {
            let fail = |what: &str| {
                CobipError::Strategy(format!(
                    "{} {} on {}: {what}",
                    an.branch,
                    ct.label(inst),
                    inst.g.format_edge(e)
                ))
            };
            let (plan, next) = defend_cobip(inst, &an, ct, e).map_err(|err| fail(&err.to_string()))?;
            if plan.check(&inst.g, &c, e).map_err(|err| fail(&err.to_string()))? != next.materialize(inst) {
                return Err(fail("plan does not reach the named template"));
            }
            if !family.contains(&next) {
                return Err(fail("answer leaves the template family"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobip::{all_small_cobipartite, cobip_from_mask};
    use crate::game::{is_legal_transition, simulate, RandomAttacker, Verdict};

    fn raw(p: usize, q: usize, cross: &[(usize, usize)]) -> CobipInstance {
        let mask = cross.iter().fold(0u64, |m, &(i, j)| m | 1 << (i * q + j));
        cobip_from_mask(p, q, mask)
    }

    fn closure(inst: &CobipInstance) {
        let an = analyze(inst).unwrap();
        for ct in template_family(inst, &an) {
            let c = ct.materialize(inst);
            assert!(is_vertex_cover(&inst.g, &c), "{}", ct.label(inst));
            for &e in inst.g.edges() {
                let (plan, next) = defend_cobip(inst, &an, ct, e).unwrap_or_else(|err| {
                    panic!("{} {} {}: {err}", an.branch, ct.label(inst), inst.g.format_edge(e))
                });
                assert_eq!(plan.check(&inst.g, &c, e).unwrap(), next.materialize(inst));
                assert!(template_family(inst, &an).contains(&next));
                assert!(is_legal_transition(&inst.g, &c, &plan.target(), e).unwrap().is_some());
            }
        }
    }

    #[test]
    fn closure_on_small_instances() {
        for inst in all_small_cobipartite(6) {
            closure(&inst);
        }
    }

    #[test]
    fn closure_on_every_big_branch() {
        for inst in all_small_cobipartite(7).filter(|i| i.p() >= 3) {
            closure(&inst);
        }
    }

    #[test]
    fn no_cross_slide() {
        let inst = raw(3, 3, &[]);
        let an = analyze(&inst).unwrap();
        let e = Edge::new(inst.a(0), inst.a(2));
        let (plan, next) = defend_cobip(&inst, &an, CoverTemplate::Sij(0, 1), e).unwrap();
        assert_eq!(plan.moves().collect::<Vec<_>>(), vec![(inst.a(2), inst.a(0))]);
        assert_eq!(next, CoverTemplate::Sij(2, 1));
    }

    #[test]
    fn single_edge_detour() {
        let inst = raw(3, 3, &[(0, 0)]);
        let an = analyze(&inst).unwrap();
        assert_eq!(an.branch, Branch::BigOneEdge);
        let e = Edge::new(inst.a(0), inst.a(1));
        let (plan, next) = defend_cobip(&inst, &an, CoverTemplate::Sij(1, 1), e).unwrap();
        let mut moves: Vec<_> = plan.moves().collect();
        moves.sort_unstable();
        assert_eq!(moves, vec![(inst.a(0), inst.a(1)), (inst.a(2), inst.a(0))]);
        assert_eq!(next, CoverTemplate::Sij(2, 1));
        let off = defend_cobip(&inst, &an, CoverTemplate::Sij(0, 1), e);
        assert!(matches!(off, Err(CobipError::Template { .. })));
    }

    #[test]
    fn all_but_one_crosses_into_hole() {
        let inst = raw(1, 3, &[(0, 0)]);
        let an = analyze(&inst).unwrap();
        let (x, y) = (inst.a(0), inst.b(0));
        let (plan, next) = defend_cobip(&inst, &an, CoverTemplate::AllButOne(x), Edge::new(x, y)).unwrap();
        assert_eq!(plan.moves().collect::<Vec<_>>(), vec![(y, x)]);
        assert_eq!(next, CoverTemplate::AllButOne(y));
        let bad = defend_cobip(&inst, &an, CoverTemplate::Sij(0, 1), Edge::new(x, y));
        assert!(matches!(bad, Err(CobipError::Template { .. })));
    }

    #[test]
    fn defender_survives_random_attacks() {
        for mask in [0b000_011_110u64, 0b001_010_100, 0b011_001_000_000] {
            let inst = Arc::new(cobip_from_mask(3, 4, mask));
            let mut d = CobipDefender::new(inst.clone()).unwrap();
            let k = d.guards();
            let mut att = RandomAttacker::new(mask);
            let out = simulate(&inst.g, k, &mut d, &mut att, 500).unwrap();
            assert_eq!(out.verdict, Verdict::Survived { rounds: 500 });
        }
    }
}
