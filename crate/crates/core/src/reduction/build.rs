use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{RbdsInstance, ReductionError};
use crate::game::{binomial, vertex_covers_of_size, Budget, Config};
use crate::graph::{
    diameter, is_bipartite, is_split, is_vertex_cover, max_matching, Diameter, Edge, Graph,
    VertexSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Bipartite,
    Split,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Bipartite => "bipartite",
            Variant::Split => "split",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bipartite" => Ok(Variant::Bipartite),
            "split" => Ok(Variant::Split),
            _ => Err(format!("unknown variant `{s}`")),
        }
    }
}

/// Role of a vertex of the reduced graph. Numbers are 1-based, as in the
/// vertex names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Red(usize),
    Blue(usize),
    /// `Dep(i, j)`: the `j`-th dependent of blue `i`.
    Dep(usize, usize),
    DepStar(usize),
    Universal,
    Backup,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Red(i) => write!(f, "red:{i}"),
            Role::Blue(i) => write!(f, "blue:{i}"),
            Role::Dep(i, j) => write!(f, "dep:{i}:{j}"),
            Role::DepStar(j) => write!(f, "depstar:{j}"),
            Role::Universal => f.write_str("universal"),
            Role::Backup => f.write_str("backup"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Structural,
    /// Sliding edge at blue `i`; `None` for the universal vertex.
    Sliding(Option<usize>),
    Supplier,
    Bridge,
    Clique,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::Structural => f.write_str("structural"),
            EdgeKind::Sliding(Some(i)) => write!(f, "sliding:{i}"),
            EdgeKind::Sliding(None) => f.write_str("sliding:star"),
            EdgeKind::Supplier => f.write_str("supplier"),
            EdgeKind::Bridge => f.write_str("bridge"),
            EdgeKind::Clique => f.write_str("clique"),
        }
    }
}

/// The reduced graph `H` with its guard budget and annotations.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub h: Graph,
    pub ell: usize,
    pub variant: Variant,
    /// The normalized source instance (its `k` is the clamped budget).
    pub source: RbdsInstance,
    pub warnings: Vec<String>,
    roles: Vec<Role>,
    kinds: Vec<EdgeKind>,
    reds: Vec<usize>,
    blues: Vec<usize>,
    deps: Vec<Vec<usize>>,
    dstar: Vec<usize>,
    star: usize,
    dagger: usize,
    /// Sorted 0-based red positions adjacent to each blue.
    adj: Vec<Vec<usize>>,
}

impl ReducedInstance {
    pub fn r(&self) -> usize {
        self.reds.len()
    }

    pub fn b(&self) -> usize {
        self.blues.len()
    }

    pub fn k(&self) -> usize {
        self.source.k
    }

    /// Size of each dependent set.
    pub fn dependents_per_set(&self) -> usize {
        self.dstar.len()
    }

    pub fn role(&self, v: usize) -> Role {
        self.roles[v]
    }

    pub fn kind(&self, e: Edge) -> Option<EdgeKind> {
        self.h.edge_position(e).map(|p| self.kinds[p])
    }

    /// Vertex of red `i` (1-based).
    pub fn red(&self, i: usize) -> usize {
        self.reds[i - 1]
    }

    /// Vertex of blue `i` (1-based).
    pub fn blue(&self, i: usize) -> usize {
        self.blues[i - 1]
    }

    /// Dependents of blue `i` (1-based).
    pub fn dependents(&self, i: usize) -> &[usize] {
        &self.deps[i - 1]
    }

    pub fn star_dependents(&self) -> &[usize] {
        &self.dstar
    }

    pub fn star(&self) -> usize {
        self.star
    }

    pub fn dagger(&self) -> usize {
        self.dagger
    }

    /// 1-based reds adjacent to blue `p` (1-based), ascending.
    pub fn red_neighbours(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[p - 1].iter().map(|r| r + 1)
    }

    pub fn blue_adjacent(&self, red: usize, blue: usize) -> bool {
        self.adj[blue - 1].contains(&(red - 1))
    }

    /// `B` together with the universal vertex.
    pub fn core(&self) -> VertexSet {
        let mut s: VertexSet = self.blues.iter().copied().collect();
        s.insert(self.star);
        s
    }

    pub fn bridge(&self) -> Edge {
        Edge::new(self.star, self.dagger)
    }
}

/// Builds `H` from a normalized instance.
///
/// Vertices: reds `v{i}`, blues `u{i}`, `b^2+3` dependents `w{i}_{j}` per
/// blue, `b^2+3` dependents `wstar_{j}` of the universal vertex `star`, and
/// the backup vertex `dagger`. The budget is `ell = b + k + 2`.
pub fn build_reduction(inst: &RbdsInstance, variant: Variant) -> Result<ReducedInstance, ReductionError> {
    let adj = inst.blue_neighbours()?;
    let (r, b, k) = (inst.r(), inst.b(), inst.k);
    if let Some(p) = adj.iter().position(Vec::is_empty) {
        return Err(ReductionError::NotNormalized(format!(
            "blue `{}` has no red neighbour",
            inst.blues[p]
        )));
    }
    if b < 2 || k >= b || k > r {
        return Err(ReductionError::NotNormalized(format!(
            "needs b >= 2 and k < b and k <= r (r={r}, b={b}, k={k})"
        )));
    }
    let d = b * b + 3;

    let mut names: Vec<(String, Role)> = Vec::new();
    names.extend((1..=r).map(|i| (format!("v{i}"), Role::Red(i))));
    names.extend((1..=b).map(|i| (format!("u{i}"), Role::Blue(i))));
    for i in 1..=b {
        names.extend((1..=d).map(|j| (format!("w{i}_{j}"), Role::Dep(i, j))));
    }
    names.extend((1..=d).map(|j| (format!("wstar_{j}"), Role::DepStar(j))));
    names.push(("star".into(), Role::Universal));
    names.push(("dagger".into(), Role::Backup));

    let mut edges: Vec<(String, String, EdgeKind)> = Vec::new();
    for (p, reds) in adj.iter().enumerate() {
        for &q in reds {
            edges.push((format!("v{}", q + 1), format!("u{}", p + 1), EdgeKind::Structural));
        }
    }
    for i in 1..=b {
        for j in 1..=d {
            edges.push((format!("u{i}"), format!("w{i}_{j}"), EdgeKind::Sliding(Some(i))));
        }
    }
    for j in 1..=d {
        edges.push(("star".into(), format!("wstar_{j}"), EdgeKind::Sliding(None)));
    }
    for i in 1..=r {
        edges.push((format!("v{i}"), "star".into(), EdgeKind::Supplier));
    }
    edges.push(("star".into(), "dagger".into(), EdgeKind::Bridge));
    if variant == Variant::Split {
        let mut clique: Vec<String> = (1..=b).map(|i| format!("u{i}")).collect();
        clique.push("star".into());
        for x in 0..clique.len() {
            for y in x + 1..clique.len() {
                edges.push((clique[x].clone(), clique[y].clone(), EdgeKind::Clique));
            }
        }
    }

    let h = Graph::new(
        names.iter().map(|(n, _)| n.clone()),
        edges.iter().map(|(a, c, _)| (a.clone(), c.clone())),
    )?;
    let at = |name: &str| h.index_of(name).expect("vertex was declared");
    let mut roles = vec![Role::Universal; h.n()];
    for (name, role) in &names {
        roles[at(name)] = *role;
    }
    let mut kinds = vec![EdgeKind::Structural; h.m()];
    for (a, c, kind) in &edges {
        let pos = h.edge_position(Edge::new(at(a), at(c))).expect("edge was declared");
        kinds[pos] = *kind;
    }

    let mut warnings = Vec::new();
    if !inst.graph()?.is_connected() {
        warnings.push("source instance is disconnected".to_string());
    }
    Ok(ReducedInstance {
        ell: b + k + 2,
        variant,
        source: inst.clone(),
        warnings,
        reds: (1..=r).map(|i| at(&format!("v{i}"))).collect(),
        blues: (1..=b).map(|i| at(&format!("u{i}"))).collect(),
        deps: (1..=b)
            .map(|i| (1..=d).map(|j| at(&format!("w{i}_{j}"))).collect())
            .collect(),
        dstar: (1..=d).map(|j| at(&format!("wstar_{j}"))).collect(),
        star: at("star"),
        dagger: at("dagger"),
        roles,
        kinds,
        adj,
        h,
    })
}

/// Whether `c` induces a connected subgraph of `H`.
pub fn check_connected_cover(ri: &ReducedInstance, c: &Config) -> bool {
    ri.h.induces_connected(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Failed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, ok: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            status: if ok { CheckStatus::Passed } else { CheckStatus::Failed },
            detail,
        });
    }
}

/// Checks the structural claims about `H`. Failures are reported, not raised.
///
/// The cover-containment claim is checked by enumerating every vertex cover
/// of size at most `ell` when that fits in `budget`; otherwise it is skipped.
pub fn verify_instance(ri: &ReducedInstance, budget: &Budget) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let (r, b, k) = (ri.r(), ri.b(), ri.k());
    let n = ri.h.n();
    let expected = r + b * b * b + b * b + 4 * b + 5;
    rep.push("vertex_count", n == expected, format!("|V(H)| = {n}, formula gives {expected}"));
    rep.push("ell", ri.ell == b + k + 2, format!("ell = {}, b + k + 2 = {}", ri.ell, b + k + 2));
    let d = b * b + 3;
    let sizes_ok = ri.deps.iter().all(|c| c.len() == d) && ri.dstar.len() == d;
    rep.push("dependent_sets", sizes_ok, format!("each dependent set has {d} vertices"));

    let core = ri.core();
    let matching = max_matching(&ri.h).len();
    let witness_ok = is_vertex_cover(&ri.h, &core);
    rep.push(
        "mvc",
        witness_ok && matching == b + 1,
        format!("B + star is a cover: {witness_ok}; maximum matching size {matching}; mvc = {}", b + 1),
    );

    let sizes = (0..=ri.ell).map(|s| binomial(n, s)).max().unwrap_or(0);
    if sizes <= budget.configs as u128 {
        let mut total = 0usize;
        let mut offenders = 0usize;
        for s in 0..=ri.ell {
            match vertex_covers_of_size(&ri.h, s, budget) {
                Ok(covers) => {
                    total += covers.len();
                    offenders += covers.iter().filter(|c| !core.is_subset(c)).count();
                }
                Err(e) => {
                    offenders = usize::MAX;
                    rep.push("covers_contain_core", false, e.to_string());
                    break;
                }
            }
        }
        if offenders != usize::MAX {
            rep.push(
                "covers_contain_core",
                offenders == 0,
                format!("{total} covers of size <= {} enumerated, {offenders} miss B + star", ri.ell),
            );
        }
    } else {
        rep.checks.push(Check {
            name: "covers_contain_core".into(),
            status: CheckStatus::Skipped,
            detail: format!("C({n}, s) exceeds the enumeration budget"),
        });
    }

    match ri.variant {
        Variant::Bipartite => {
            let bip = is_bipartite(&ri.h);
            rep.push("bipartite", bip, format!("bipartite: {bip}"));
            let diam = diameter(&ri.h);
            rep.push("diameter", diam <= Diameter::Finite(6), format!("diameter {diam}"));
        }
        Variant::Split => {
            let split = is_split(&ri.h);
            rep.push("split", split, format!("split: {split}"));
        }
    }
    rep
}
