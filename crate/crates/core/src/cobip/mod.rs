//! Eternal vertex cover on cobipartite graphs: two cliques `A` and `B` joined
//! by an arbitrary set of cross edges. After normalization no vertex of `A`
//! is adjacent to all of `B` and `p <= q`, and the value of the game follows
//! from a short decision tree over the cross pattern.
//!
//! Side positions (`a_i`, `b_j`) are 0-based indices into the sorted sides.

mod strategy;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{Config, GameError, IllegalMove};
use crate::graph::{two_coloring, Graph, GraphError, VertexSet};

pub use strategy::{check_closure, defend_cobip, initial_template, template_family, CobipDefender};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobipError {
    #[error("sides do not partition the vertices: {0}")]
    Partition(String),
    #[error("side {0} is not a clique")]
    NotClique(char),
    #[error("instance is not normalized")]
    NotNormalized,
    #[error("sides line {line}: {message}")]
    Sides { line: usize, message: String },
    #[error("template {template} does not fit branch {branch}")]
    Template { template: String, branch: Branch },
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),
    #[error("no move for {0}")]
    Strategy(String),
    #[error("graph is not cobipartite")]
    NotCobipartite,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Illegal(#[from] IllegalMove),
}

/// A graph whose vertices split into two cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobipInstance {
    pub g: Graph,
    pub side_a: VertexSet,
    pub side_b: VertexSet,
    pub normalized: bool,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl CobipInstance {
    /// Checks that the sides partition the vertices into two cliques.
    pub fn new(g: Graph, side_a: VertexSet, side_b: VertexSet) -> Result<CobipInstance, CobipError> {
        if side_a.intersects(&side_b) {
            return Err(CobipError::Partition(format!(
                "{} on both sides",
                g.format_set(&side_a.intersection(&side_b))
            )));
        }
        if side_a.len() + side_b.len() != g.n() || side_a.iter().chain(&side_b).any(|v| v >= g.n()) {
            let missing: VertexSet = (0..g.n())
                .filter(|&v| !side_a.contains(v) && !side_b.contains(v))
                .collect();
            return Err(CobipError::Partition(format!("{} on no side", g.format_set(&missing))));
        }
        if !g.is_clique(&side_a) {
            return Err(CobipError::NotClique('A'));
        }
        if !g.is_clique(&side_b) {
            return Err(CobipError::NotClique('B'));
        }
        Ok(CobipInstance {
            a: side_a.to_vec(),
            b: side_b.to_vec(),
            g,
            side_a,
            side_b,
            normalized: false,
        })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// Vertex `a_i`.
    pub fn a(&self, i: usize) -> usize {
        self.a[i]
    }

    /// Vertex `b_j`.
    pub fn b(&self, j: usize) -> usize {
        self.b[j]
    }

    pub fn a_vertices(&self) -> &[usize] {
        &self.a
    }

    pub fn b_vertices(&self) -> &[usize] {
        &self.b
    }

    /// `b_j` is a friend of `a_i` when they are not adjacent.
    pub fn friends(&self, i: usize, j: usize) -> bool {
        !self.g.has_edge(self.a[i], self.b[j])
    }

    /// Number of edges between the sides.
    pub fn cross_edges(&self) -> usize {
        self.a
            .iter()
            .map(|&x| self.b.iter().filter(|&&y| self.g.has_edge(x, y)).count())
            .sum()
    }

    /// `side <id> A|B` lines, in id order.
    pub fn sides_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.g.n() {
            let side = if self.side_a.contains(v) { 'A' } else { 'B' };
            out.push_str(&format!("side {} {side}\n", self.g.id(v)));
        }
        out
    }
}

/// Reads `side <id> A|B` lines; every other line is ignored, so the sides
/// may share a file with the graph.
pub fn parse_sides(g: &Graph, text: &str) -> Result<(VertexSet, VertexSet), CobipError> {
    let mut a = VertexSet::new();
    let mut b = VertexSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() != Some(&"side") {
            continue;
        }
        let err = |message: String| CobipError::Sides {
            line: lineno + 1,
            message,
        };
        let [_, id, side] = tokens.as_slice() else {
            return Err(err("expected `side <id> A|B`".into()));
        };
        let v = g
            .index_of(id)
            .ok_or_else(|| err(format!("unknown vertex `{id}`")))?;
        if a.contains(v) || b.contains(v) {
            return Err(err(format!("vertex `{id}` listed twice")));
        }
        match *side {
            "A" | "a" => a.insert(v),
            "B" | "b" => b.insert(v),
            other => return Err(err(format!("unknown side `{other}`"))),
        };
    }
    Ok((a, b))
}

/// Sides from a 2-coloring of the complement; the first vertex goes to `A`.
/// An edgeless complement puts everything in `B`.
pub fn find_sides(g: &Graph) -> Result<(VertexSet, VertexSet), CobipError> {
    let colors = two_coloring(&g.complement()).ok_or(CobipError::NotCobipartite)?;
    let mut a = VertexSet::new();
    let mut b = VertexSet::new();
    if g.is_clique(&VertexSet::full(g.n())) {
        return Ok((a, VertexSet::full(g.n())));
    }
    for (v, &c) in colors.iter().enumerate() {
        if c {
            b.insert(v);
        } else {
            a.insert(v);
        }
    }
    Ok((a, b))
}

/// Moves every vertex of `A` adjacent to all of `B` into `B` (in id order)
/// and swaps the sides when `p > q`, until neither applies.
pub fn normalize(g: &Graph, side_a: &VertexSet, side_b: &VertexSet) -> Result<CobipInstance, CobipError> {
    let mut inst = CobipInstance::new(g.clone(), side_a.clone(), side_b.clone())?;
    let (mut a, mut b) = (side_a.clone(), side_b.clone());
    loop {
        let mut changed = false;
        for v in a.to_vec() {
            if b.iter().all(|y| g.has_edge(v, y)) {
                a.remove(v);
                b.insert(v);
                changed = true;
            }
        }
        if a.len() > b.len() {
            std::mem::swap(&mut a, &mut b);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    inst.a = a.to_vec();
    inst.b = b.to_vec();
    inst.side_a = a;
    inst.side_b = b;
    inst.normalized = true;
    Ok(inst)
}

/// Which rule of the characterization decides the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `p = 0`: a single clique.
    Clique,
    /// `p = 1`, `a_1` has no neighbour in `B`.
    P1Isolated,
    /// `p = 1`, `a_1` has a neighbour in `B`.
    P1Adjacent,
    /// `p = q = 2`, no cross edges.
    Q2NoCross,
    /// `p = q = 2`, each `a_i` has exactly one neighbour and they differ.
    Q2Unique,
    /// `p = q = 2`, `a_1` and `a_2` share their only neighbour.
    Q2Common,
    /// `p = q = 2`, exactly one `a_i` has a neighbour.
    Q2OneSided,
    /// `p = 2 < q`, no cross edges.
    P2NoCross,
    /// `p = 2 < q`, exactly one `a_i` has neighbours.
    P2OneSided,
    /// `p = 2 < q`, both have neighbours and none is shared (`B3` empty).
    P2Disjoint,
    /// `p = 2 < q`, `1 <= |B3| <= q - 2`.
    P2Partial,
    /// `p = 2 < q`, `|B3| = q - 1`.
    P2Saturated,
    /// `p >= 3`, no cross edges.
    BigNoCross,
    /// `p >= 3`, exactly one cross edge.
    BigOneEdge,
    /// `p >= 3`, at least two cross edges, one non-global vertex in `B`.
    BigOneNonglobal,
    /// `p >= 3`, at least two cross edges, between 1 and `q - 2` globals in `B`.
    BigSomeGlobals,
    /// `p >= 3`, no globals in `B`, a single vertex of `A` has cross edges.
    BigSingleA,
    /// `p >= 3`, no globals in `B`, a single vertex of `B` has cross edges.
    BigSingleB,
    /// `p >= 3`, no globals in `B`, cross edges on at least two vertices per side.
    BigSpread,
}

impl Branch {
    pub const ALL: [Branch; 19] = [
        Branch::Clique,
        Branch::P1Isolated,
        Branch::P1Adjacent,
        Branch::Q2NoCross,
        Branch::Q2Unique,
        Branch::Q2Common,
        Branch::Q2OneSided,
        Branch::P2NoCross,
        Branch::P2OneSided,
        Branch::P2Disjoint,
        Branch::P2Partial,
        Branch::P2Saturated,
        Branch::BigNoCross,
        Branch::BigOneEdge,
        Branch::BigOneNonglobal,
        Branch::BigSomeGlobals,
        Branch::BigSingleA,
        Branch::BigSingleB,
        Branch::BigSpread,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Branch::Clique => "clique",
            Branch::P1Isolated => "p1-isolated",
            Branch::P1Adjacent => "p1-adjacent",
            Branch::Q2NoCross => "q2-no-cross",
            Branch::Q2Unique => "q2-unique",
            Branch::Q2Common => "q2-common",
            Branch::Q2OneSided => "q2-one-sided",
            Branch::P2NoCross => "p2-no-cross",
            Branch::P2OneSided => "p2-one-sided",
            Branch::P2Disjoint => "p2-disjoint",
            Branch::P2Partial => "p2-partial",
            Branch::P2Saturated => "p2-saturated",
            Branch::BigNoCross => "big-no-cross",
            Branch::BigOneEdge => "big-one-edge",
            Branch::BigOneNonglobal => "big-one-nonglobal",
            Branch::BigSomeGlobals => "big-some-globals",
            Branch::BigSingleA => "big-single-a",
            Branch::BigSingleB => "big-single-b",
            Branch::BigSpread => "big-spread",
        }
    }

    /// Branches needing `n - 1` guards, defended by the all-but-one strategy.
    /// For a clique this is also the minimum cover size.
    pub fn uses_all_but_one(self) -> bool {
        matches!(
            self,
            Branch::Clique
                | Branch::P1Adjacent
                | Branch::Q2Common
                | Branch::Q2OneSided
                | Branch::P2OneSided
                | Branch::P2Saturated
                | Branch::BigOneNonglobal
        )
    }

    /// Whether the game value equals the minimum cover size.
    pub fn mvc_suffices(self) -> bool {
        self == Branch::Clique || !self.uses_all_but_one()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Branch, String> {
        Branch::ALL
            .into_iter()
            .find(|b| b.tag() == s)
            .ok_or_else(|| format!("unknown branch `{s}`"))
    }
}

/// Friend and global structure of a normalized instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionAnalysis {
    /// Vertices of `B` adjacent to all of `A`.
    pub globals_b: VertexSet,
    /// Non-neighbours on the opposite side, for every vertex.
    pub friends: BTreeMap<usize, VertexSet>,
    /// For `p = 2`: `B1` (only `a_1`), `B2` (only `a_2`), `B3` (both), `B4` (neither).
    pub b_parts: Option<[VertexSet; 4]>,
    pub nonglobal_b_count: usize,
    pub cross_edges: usize,
    pub branch: Branch,
}

pub fn analyze(inst: &CobipInstance) -> Result<PartitionAnalysis, CobipError> {
    if !inst.normalized {
        return Err(CobipError::NotNormalized);
    }
    let g = &inst.g;
    let mut friends: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for &x in inst.a_vertices() {
        friends.insert(x, inst.b_vertices().iter().copied().filter(|&y| !g.has_edge(x, y)).collect());
    }
    for &y in inst.b_vertices() {
        friends.insert(y, inst.a_vertices().iter().copied().filter(|&x| !g.has_edge(x, y)).collect());
    }
    let globals_b: VertexSet = inst
        .b_vertices()
        .iter()
        .copied()
        .filter(|y| friends[y].is_empty())
        .collect();
    let b_parts = (inst.p() == 2).then(|| {
        let mut parts: [VertexSet; 4] = Default::default();
        for &y in inst.b_vertices() {
            let part = match (g.has_edge(inst.a(0), y), g.has_edge(inst.a(1), y)) {
                (true, false) => 0,
                (false, true) => 1,
                (true, true) => 2,
                (false, false) => 3,
            };
            parts[part].insert(y);
        }
        parts
    });
    let nonglobal_b_count = inst.q() - globals_b.len();
    let cross_edges = inst.cross_edges();
    let mut an = PartitionAnalysis {
        globals_b,
        friends,
        b_parts,
        nonglobal_b_count,
        cross_edges,
        branch: Branch::Clique,
    };
    an.branch = decide(inst, &an);
    Ok(an)
}

fn decide(inst: &CobipInstance, an: &PartitionAnalysis) -> Branch {
    let g = &inst.g;
    let (p, q) = (inst.p(), inst.q());
    let a_deg: Vec<usize> = inst
        .a_vertices()
        .iter()
        .map(|&x| inst.b_vertices().iter().filter(|&&y| g.has_edge(x, y)).count())
        .collect();
    let a_active = a_deg.iter().filter(|&&d| d > 0).count();
    let b_active = inst
        .b_vertices()
        .iter()
        .filter(|&&y| inst.a_vertices().iter().any(|&x| g.has_edge(x, y)))
        .count();
    match p {
        0 => Branch::Clique,
        1 if a_deg[0] == 0 => Branch::P1Isolated,
        1 => Branch::P1Adjacent,
        2 if q == 2 => match (a_deg[0], a_deg[1]) {
            (0, 0) => Branch::Q2NoCross,
            (1, 1) if b_active == 2 => Branch::Q2Unique,
            (1, 1) => Branch::Q2Common,
            _ => Branch::Q2OneSided,
        },
        2 => {
            let parts = an.b_parts.as_ref().expect("p = 2");
            if an.cross_edges == 0 {
                Branch::P2NoCross
            } else if a_active == 1 {
                Branch::P2OneSided
            } else if parts[2].is_empty() {
                Branch::P2Disjoint
            } else if parts[2].len() + 1 == q {
                Branch::P2Saturated
            } else {
                Branch::P2Partial
            }
        }
        _ => {
            if an.cross_edges == 0 {
                Branch::BigNoCross
            } else if an.cross_edges == 1 {
                Branch::BigOneEdge
            } else if an.nonglobal_b_count == 1 {
                Branch::BigOneNonglobal
            } else if !an.globals_b.is_empty() {
                Branch::BigSomeGlobals
            } else if a_active == 1 {
                Branch::BigSingleA
            } else if b_active == 1 {
                Branch::BigSingleB
            } else {
                Branch::BigSpread
            }
        }
    }
}

/// Minimum vertex cover size of a normalized instance.
pub fn mvc_cobip(inst: &CobipInstance) -> Result<usize, CobipError> {
    if !inst.normalized {
        return Err(CobipError::NotNormalized);
    }
    Ok(if inst.p() == 0 {
        inst.q().saturating_sub(1)
    } else {
        inst.p() + inst.q() - 2
    })
}

/// A minimum cover: `S_ij` for the first friend pair, or the clique minus
/// its first vertex.
pub fn mvc_witness(inst: &CobipInstance) -> Result<Config, CobipError> {
    if !inst.normalized {
        return Err(CobipError::NotNormalized);
    }
    if inst.p() == 0 {
        return Ok(inst.side_b.iter().skip(1).collect());
    }
    (0..inst.p())
        .flat_map(|i| (0..inst.q()).map(move |j| (i, j)))
        .find(|&(i, j)| inst.friends(i, j))
        .map(|(i, j)| CoverTemplate::Sij(i, j).materialize(inst))
        .ok_or(CobipError::NotNormalized)
}

/// Eternal vertex cover number and the deciding branch.
pub fn evc_cobip(inst: &CobipInstance) -> Result<(usize, Branch), CobipError> {
    let an = analyze(inst)?;
    let (p, q) = (inst.p(), inst.q());
    let value = if an.branch.uses_all_but_one() {
        p + q - 1
    } else {
        p + q - 2
    };
    Ok((value, an.branch))
}

/// A guard position used by the constructive strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverTemplate {
    /// Every vertex except `a_i` and `b_j` (side positions).
    Sij(usize, usize),
    /// Every vertex except `x` (a vertex index).
    AllButOne(usize),
}

impl CoverTemplate {
    pub fn materialize(&self, inst: &CobipInstance) -> Config {
        match *self {
            CoverTemplate::Sij(i, j) => (0..inst.g.n())
                .filter(|&v| v != inst.a(i) && v != inst.b(j))
                .collect(),
            CoverTemplate::AllButOne(x) => (0..inst.g.n()).filter(|&v| v != x).collect(),
        }
    }

    pub fn label(&self, inst: &CobipInstance) -> String {
        match *self {
            CoverTemplate::Sij(i, j) => format!("S({},{})", inst.g.id(inst.a(i)), inst.g.id(inst.b(j))),
            CoverTemplate::AllButOne(x) => format!("AllButOne({})", inst.g.id(x)),
        }
    }
}

/// Every cobipartite instance with `1 <= p + q <= max_n` and `p <= q`, one per
/// cross pattern, normalized. Side `A` vertices are named `a0, a1, ..` and
/// side `B` vertices `b0, b1, ..`.
pub fn all_small_cobipartite(max_n: usize) -> impl Iterator<Item = CobipInstance> {
    (1..=max_n)
        .flat_map(|n| (0..=n / 2).map(move |p| (p, n - p)))
        .flat_map(|(p, q)| (0u64..1 << (p * q)).map(move |mask| cobip_from_mask(p, q, mask)))
}

/// The normalized instance with sides of size `p` and `q` whose cross edge
/// `a_i b_j` is present iff bit `i * q + j` of `mask` is set.
pub fn cobip_from_mask(p: usize, q: usize, mask: u64) -> CobipInstance {
    let ids: Vec<String> = (0..p)
        .map(|i| format!("a{i}"))
        .chain((0..q).map(|j| format!("b{j}")))
        .collect();
    let mut edges = Vec::new();
    for i in 0..p {
        for i2 in i + 1..p {
            edges.push((format!("a{i}"), format!("a{i2}")));
        }
        for j in 0..q {
            if mask >> (i * q + j) & 1 == 1 {
                edges.push((format!("a{i}"), format!("b{j}")));
            }
        }
    }
    for j in 0..q {
        for j2 in j + 1..q {
            edges.push((format!("b{j}"), format!("b{j2}")));
        }
    }
    let g = Graph::new(ids, edges).expect("well-formed ids");
    let a: VertexSet = (0..p).filter_map(|i| g.index_of(&format!("a{i}"))).collect();
    let b: VertexSet = (0..q).filter_map(|j| g.index_of(&format!("b{j}"))).collect();
    normalize(&g, &a, &b).expect("sides are cliques")
}
