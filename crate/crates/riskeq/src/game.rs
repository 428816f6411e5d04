//! Game arenas: ownership, exact transition probabilities, terminal payoffs.
//!
//! Vertices are indexed in lexicographic id order, players in declaration
//! order; every algorithm in the crate that scans "in canonical order" means
//! these two orders. Edges get global ids `edge_base[v] + position`, which is
//! what [`EdgeSet`] bitsets are keyed by.

use crate::rational::Rational;
use num::{One, Zero};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

/// Role of a vertex: a player picks the successor, chance draws it from a
/// fixed exact distribution, or the play stops and pays each player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexKind {
    Controlled(usize),
    Stochastic,
    /// Payoff per player, indexed like `Game::players`.
    Terminal(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    players: Vec<String>,
    vertex_ids: Vec<String>,
    kinds: Vec<VertexKind>,
    succ: Vec<Vec<usize>>,
    /// Parallel to `succ`; non-empty exactly for stochastic vertices.
    prob: Vec<Vec<Rational>>,
    /// Reverse adjacency: `pred[w]` lists `(v, position)` with `succ[v][position] == w`.
    pred: Vec<Vec<(usize, usize)>>,
    initial: usize,
    edge_base: Vec<usize>,
    edge_count: usize,
    note: Option<String>,
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid game:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

/// Violations make a game unusable; warnings (unreachable vertices) do not.
#[derive(Debug, Clone, Default)]
pub struct Validation {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Accumulates named vertices and players, then checks every structural
/// invariant at once in [`GameBuilder::build`].
#[derive(Debug, Default)]
pub struct GameBuilder {
    players: Vec<String>,
    vertices: Vec<(String, RawVertex)>,
    initial: Option<String>,
    note: Option<String>,
    extra_violations: Vec<String>,
}

#[derive(Debug)]
enum RawVertex {
    Controlled { owner: String, edges: Vec<String> },
    Stochastic { edges: Vec<(String, Rational)> },
    Terminal { payoff: BTreeMap<String, Rational> },
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn player(&mut self, name: impl Into<String>) -> &mut Self {
        self.players.push(name.into());
        self
    }

    pub fn controlled(
        &mut self,
        id: impl Into<String>,
        owner: impl Into<String>,
        edges: impl IntoIterator<Item = impl Into<String>>,
    ) -> &mut Self {
        self.vertices.push((
            id.into(),
            RawVertex::Controlled {
                owner: owner.into(),
                edges: edges.into_iter().map(Into::into).collect(),
            },
        ));
        self
    }

    pub fn stochastic(
        &mut self,
        id: impl Into<String>,
        edges: impl IntoIterator<Item = (impl Into<String>, Rational)>,
    ) -> &mut Self {
        self.vertices.push((
            id.into(),
            RawVertex::Stochastic {
                edges: edges.into_iter().map(|(w, p)| (w.into(), p)).collect(),
            },
        ));
        self
    }

    /// Stochastic vertex with the uniform distribution over `edges`.
    pub fn stochastic_uniform(
        &mut self,
        id: impl Into<String>,
        edges: impl IntoIterator<Item = impl Into<String>>,
    ) -> &mut Self {
        let targets: Vec<String> = edges.into_iter().map(Into::into).collect();
        let n = targets.len().max(1);
        let p = Rational::new(One::one(), num::BigInt::from(n));
        self.stochastic(id, targets.into_iter().map(|w| (w, p.clone())))
    }

    pub fn terminal(
        &mut self,
        id: impl Into<String>,
        payoff: impl IntoIterator<Item = (impl Into<String>, Rational)>,
    ) -> &mut Self {
        self.vertices.push((
            id.into(),
            RawVertex::Terminal {
                payoff: payoff.into_iter().map(|(p, x)| (p.into(), x)).collect(),
            },
        ));
        self
    }

    pub fn initial(&mut self, id: impl Into<String>) -> &mut Self {
        self.initial = Some(id.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.note = Some(text.into());
        self
    }

    /// Records a violation found outside the builder (e.g. by a document
    /// reader) so it is reported together with the structural ones.
    pub fn violation(&mut self, message: impl Into<String>) -> &mut Self {
        self.extra_violations.push(message.into());
        self
    }

    pub fn build(self) -> Result<Game, GameError> {
        let mut violations = self.extra_violations;

        let mut player_index: BTreeMap<&str, usize> = BTreeMap::new();
        if self.players.is_empty() {
            violations.push("no players declared".to_string());
        }
        for (i, p) in self.players.iter().enumerate() {
            if p == "stochastic" {
                violations.push("player name \"stochastic\" is reserved".to_string());
            }
            if player_index.insert(p, i).is_some() {
                violations.push(format!("duplicate player \"{p}\""));
            }
        }

        // Lexicographic id order is the canonical vertex order.
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].0.cmp(&self.vertices[b].0));
        let mut vertex_index: BTreeMap<&str, usize> = BTreeMap::new();
        for (slot, &raw) in order.iter().enumerate() {
            let id = self.vertices[raw].0.as_str();
            if vertex_index.insert(id, slot).is_some() {
                violations.push(format!("duplicate vertex \"{id}\""));
            }
        }
        if self.vertices.is_empty() {
            violations.push("no vertices declared".to_string());
        }

        let n = order.len();
        let p = self.players.len();
        let mut kinds = Vec::with_capacity(n);
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut prob: Vec<Vec<Rational>> = vec![Vec::new(); n];

        for (slot, &raw) in order.iter().enumerate() {
            let (id, rv) = &self.vertices[raw];
            let resolve = |w: &str| vertex_index.get(w).copied();
            match rv {
                RawVertex::Controlled { owner, edges } => {
                    let owner_ix = player_index.get(owner.as_str()).copied();
                    if owner_ix.is_none() {
                        violations.push(format!("vertex \"{id}\": unknown owner \"{owner}\""));
                    }
                    kinds.push(VertexKind::Controlled(owner_ix.unwrap_or(0)));
                    for w in edges {
                        match resolve(w) {
                            Some(t) => succ[slot].push(t),
                            None => violations.push(format!(
                                "vertex \"{id}\": edge to unknown vertex \"{w}\""
                            )),
                        }
                    }
                    if edges.is_empty() {
                        violations.push(format!("vertex \"{id}\": non-terminal without edges"));
                    }
                }
                RawVertex::Stochastic { edges } => {
                    kinds.push(VertexKind::Stochastic);
                    let mut sum = Rational::zero();
                    for (w, pr) in edges {
                        match resolve(w) {
                            Some(t) => {
                                succ[slot].push(t);
                                if *pr <= Rational::zero() {
                                    violations.push(format!(
                                        "vertex \"{id}\": non-positive probability on edge to \"{w}\""
                                    ));
                                }
                                sum += pr;
                                prob[slot].push(pr.clone());
                            }
                            None => violations.push(format!(
                                "vertex \"{id}\": edge to unknown vertex \"{w}\""
                            )),
                        }
                    }
                    if edges.is_empty() {
                        violations.push(format!("vertex \"{id}\": non-terminal without edges"));
                    } else if !sum.is_one() {
                        violations.push(format!(
                            "vertex \"{id}\": probabilities sum to {}, not 1",
                            crate::rational::format_rational(&sum)
                        ));
                    }
                }
                RawVertex::Terminal { payoff } => {
                    let mut vals = vec![Rational::zero(); p];
                    for (who, x) in payoff {
                        match player_index.get(who.as_str()) {
                            Some(&i) => vals[i] = x.clone(),
                            None => violations.push(format!(
                                "vertex \"{id}\": payoff for unknown player \"{who}\""
                            )),
                        }
                    }
                    for name in player_index.keys() {
                        if !payoff.contains_key(*name) {
                            violations
                                .push(format!("vertex \"{id}\": missing payoff for \"{name}\""));
                        }
                    }
                    kinds.push(VertexKind::Terminal(vals));
                }
            }
            // Duplicate successors would make edge identity ambiguous.
            let mut seen = succ[slot].clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                violations.push(format!("vertex \"{id}\": duplicate edge target"));
            }
        }

        let initial = match &self.initial {
            None => {
                violations.push("no initial vertex declared".to_string());
                0
            }
            Some(id) => match vertex_index.get(id.as_str()) {
                Some(&v) => v,
                None => {
                    violations.push(format!("unknown initial vertex \"{id}\""));
                    0
                }
            },
        };

        if !violations.is_empty() {
            return Err(GameError::Invalid(violations));
        }

        let mut edge_base = Vec::with_capacity(n);
        let mut edge_count = 0usize;
        for s in &succ {
            edge_base.push(edge_count);
            edge_count += s.len();
        }
        let mut pred: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (v, s) in succ.iter().enumerate() {
            for (k, &w) in s.iter().enumerate() {
                pred[w].push((v, k));
            }
        }

        Ok(Game {
            players: self.players,
            vertex_ids: order
                .iter()
                .map(|&raw| self.vertices[raw].0.clone())
                .collect(),
            kinds,
            succ,
            prob,
            pred,
            initial,
            edge_base,
            edge_count,
            note: self.note,
        })
    }
}

impl Game {
    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_ids
            .binary_search_by(|x| x.as_str().cmp(id))
            .ok()
    }

    pub fn kind(&self, v: usize) -> &VertexKind {
        &self.kinds[v]
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        matches!(self.kinds[v], VertexKind::Terminal(_))
    }

    pub fn owner(&self, v: usize) -> Option<usize> {
        match self.kinds[v] {
            VertexKind::Controlled(i) => Some(i),
            _ => None,
        }
    }

    pub fn payoff(&self, v: usize) -> Option<&[Rational]> {
        match &self.kinds[v] {
            VertexKind::Terminal(x) => Some(x),
            _ => None,
        }
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, w: usize) -> &[(usize, usize)] {
        &self.pred[w]
    }

    /// Probability of the edge at `position` out of a stochastic vertex.
    pub fn edge_prob(&self, v: usize, position: usize) -> &Rational {
        &self.prob[v][position]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn edge_id(&self, v: usize, position: usize) -> usize {
        debug_assert!(position < self.succ[v].len());
        self.edge_base[v] + position
    }

    /// Source vertex and position of a global edge id.
    pub fn edge_source(&self, eid: usize) -> (usize, usize) {
        let v = match self.edge_base.binary_search(&eid) {
            Ok(mut i) => {
                // Skip over vertices without edges that share the base.
                while self.succ[i].is_empty() {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        (v, eid - self.edge_base[v])
    }

    pub fn find_edge(&self, v: usize, w: usize) -> Option<usize> {
        self.succ[v]
            .iter()
            .position(|&x| x == w)
            .map(|k| self.edge_id(v, k))
    }

    pub fn terminal_mask(&self) -> Vec<bool> {
        (0..self.vertex_count()).map(|v| self.is_terminal(v)).collect()
    }
}

/// Set of edges, keyed by global edge id.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeSet {
    words: Vec<u64>,
    len: usize,
}

impl EdgeSet {
    pub fn full(g: &Game) -> Self {
        let len = g.edge_count();
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        if len == 0 {
            words.clear();
        }
        EdgeSet { words, len }
    }

    pub fn empty(g: &Game) -> Self {
        let len = g.edge_count();
        EdgeSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn contains(&self, eid: usize) -> bool {
        debug_assert!(eid < self.len);
        self.words[eid / 64] >> (eid % 64) & 1 == 1
    }

    pub fn insert(&mut self, eid: usize) {
        debug_assert!(eid < self.len);
        self.words[eid / 64] |= 1 << (eid % 64);
    }

    pub fn remove(&mut self, eid: usize) {
        debug_assert!(eid < self.len);
        self.words[eid / 64] &= !(1 << (eid % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Kept successors of `v`: `(position, target)` pairs.
    pub fn kept<'a>(
        &'a self,
        g: &'a Game,
        v: usize,
    ) -> impl Iterator<Item = (usize, usize)> + 'a {
        let base = g.edge_base[v];
        g.successors(v)
            .iter()
            .enumerate()
            .filter(move |(k, _)| self.contains(base + k))
            .map(|(k, &w)| (k, w))
    }

    pub fn kept_count(&self, g: &Game, v: usize) -> usize {
        self.kept(g, v).count()
    }

    /// A support is valid when stochastic vertices keep every edge and other
    /// non-terminal vertices keep at least one.
    pub fn is_valid_support(&self, g: &Game) -> bool {
        (0..g.vertex_count()).all(|v| match g.kind(v) {
            VertexKind::Terminal(_) => true,
            VertexKind::Stochastic => self.kept_count(g, v) == g.successors(v).len(),
            VertexKind::Controlled(_) => self.kept_count(g, v) >= 1,
        })
    }

    /// Edges as `(source, target)` vertex pairs, in edge-id order.
    pub fn pairs(&self, g: &Game) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.count());
        for v in 0..g.vertex_count() {
            for (_, w) in self.kept(g, v) {
                out.push((v, w));
            }
        }
        out
    }
}

impl std::fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EdgeSet[{}/{}]", self.count(), self.len)
    }
}

/// Re-checks every structural invariant and reports unreachable vertices as
/// warnings. Games built through [`GameBuilder`] always pass; the function
/// exists for documents assembled by other means and for diagnostics.
pub fn validate(g: &Game) -> Validation {
    let mut val = Validation::default();
    let p = g.player_count();
    if p == 0 {
        val.violations.push("no players declared".to_string());
    }
    for v in 0..g.vertex_count() {
        let id = g.vertex_id(v);
        match g.kind(v) {
            VertexKind::Terminal(x) => {
                if !g.successors(v).is_empty() {
                    val.violations
                        .push(format!("vertex \"{id}\": terminal with edges"));
                }
                if x.len() != p {
                    val.violations
                        .push(format!("vertex \"{id}\": payoff arity mismatch"));
                }
            }
            VertexKind::Stochastic => {
                if g.successors(v).is_empty() {
                    val.violations
                        .push(format!("vertex \"{id}\": non-terminal without edges"));
                }
                let sum: Rational = g.prob[v].iter().cloned().sum();
                if !g.successors(v).is_empty() && !sum.is_one() {
                    val.violations.push(format!(
                        "vertex \"{id}\": probabilities sum to {}, not 1",
                        crate::rational::format_rational(&sum)
                    ));
                }
                if g.prob[v].iter().any(|q| *q <= Rational::zero()) {
                    val.violations
                        .push(format!("vertex \"{id}\": non-positive probability"));
                }
            }
            VertexKind::Controlled(i) => {
                if *i >= p {
                    val.violations
                        .push(format!("vertex \"{id}\": owner index out of range"));
                }
                if g.successors(v).is_empty() {
                    val.violations
                        .push(format!("vertex \"{id}\": non-terminal without edges"));
                }
            }
        }
    }
    let seen = reachable(g, &EdgeSet::full(g), g.initial());
    for (v, ok) in seen.iter().enumerate() {
        if !ok {
            val.warnings.push(format!(
                "vertex \"{}\" is unreachable from the initial vertex",
                g.vertex_id(v)
            ));
        }
    }
    val
}

/// Vertices reachable from `from` along kept edges.
pub fn reachable(g: &Game, keep: &EdgeSet, from: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        for (_, w) in keep.kept(g, v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Vertices with a kept path into `targets` (targets included).
pub fn backward_reachable(g: &Game, keep: &EdgeSet, targets: &[bool]) -> Vec<bool> {
    let mut seen = targets.to_vec();
    let mut queue: VecDeque<usize> = (0..g.vertex_count()).filter(|&v| seen[v]).collect();
    while let Some(w) = queue.pop_front() {
        for &(v, k) in g.predecessors(w) {
            if !seen[v] && keep.contains(g.edge_id(v, k)) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

#[derive(Debug, Error)]
pub enum RestrictError {
    #[error("restriction drops edges of stochastic vertex \"{0}\"")]
    StochasticCut(String),
    #[error("restriction leaves vertex \"{0}\" without edges")]
    EmptiedVertex(String),
}

/// Materializes the subgame that keeps exactly the edges in `keep`.
pub fn restrict_edges(g: &Game, keep: &EdgeSet) -> Result<Game, RestrictError> {
    let mut b = GameBuilder::new();
    for p in g.players() {
        b.player(p.clone());
    }
    b.initial(g.vertex_id(g.initial()));
    if let Some(n) = g.note() {
        b.note(n);
    }
    for v in 0..g.vertex_count() {
        let id = g.vertex_id(v);
        match g.kind(v) {
            VertexKind::Terminal(x) => {
                b.terminal(
                    id,
                    g.players()
                        .iter()
                        .cloned()
                        .zip(x.iter().cloned())
                        .collect::<Vec<_>>(),
                );
            }
            VertexKind::Stochastic => {
                if keep.kept_count(g, v) != g.successors(v).len() {
                    return Err(RestrictError::StochasticCut(id.to_string()));
                }
                b.stochastic(
                    id,
                    g.successors(v)
                        .iter()
                        .enumerate()
                        .map(|(k, &w)| (g.vertex_id(w).to_string(), g.edge_prob(v, k).clone()))
                        .collect::<Vec<_>>(),
                );
            }
            VertexKind::Controlled(i) => {
                let kept: Vec<String> = keep
                    .kept(g, v)
                    .map(|(_, w)| g.vertex_id(w).to_string())
                    .collect();
                if kept.is_empty() {
                    return Err(RestrictError::EmptiedVertex(id.to_string()));
                }
                b.controlled(id, g.players()[*i].clone(), kept);
            }
        }
    }
    Ok(b.build().expect("restriction of a valid game stays valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn two_player_line() -> Game {
        let mut b = GameBuilder::new();
        b.player("circle").player("square");
        b.controlled("a", "circle", ["b", "t1"]);
        b.controlled("b", "square", ["a", "t2"]);
        b.terminal("t1", [("circle", rat_int(1)), ("square", rat_int(2))]);
        b.terminal("t2", [("circle", rat_int(2)), ("square", rat_int(1))]);
        b.initial("a");
        b.build().unwrap()
    }

    #[test]
    fn vertices_are_indexed_lexicographically() {
        let g = two_player_line();
        let ids: Vec<&str> = (0..g.vertex_count()).map(|v| g.vertex_id(v)).collect();
        assert_eq!(ids, ["a", "b", "t1", "t2"]);
        assert_eq!(g.initial(), 0);
        assert_eq!(g.owner(1), Some(1));
        assert_eq!(g.payoff(2).unwrap()[0], rat_int(1));
    }

    #[test]
    fn edge_ids_and_sources_agree() {
        let g = two_player_line();
        assert_eq!(g.edge_count(), 4);
        for v in 0..g.vertex_count() {
            for k in 0..g.successors(v).len() {
                assert_eq!(g.edge_source(g.edge_id(v, k)), (v, k));
            }
        }
    }

    #[test]
    fn builder_collects_all_violations() {
        let mut b = GameBuilder::new();
        b.player("p").player("p");
        b.controlled("a", "ghost", ["zzz"]);
        b.stochastic("s", [("a", rat(1, 3)), ("a", rat(1, 3))]);
        b.terminal("t", [("q", rat_int(0))]);
        b.initial("nowhere");
        let err = b.build().unwrap_err();
        let GameError::Invalid(v) = err else {
            panic!("expected invalid")
        };
        let text = v.join("\n");
        for needle in [
            "duplicate player",
            "unknown owner",
            "unknown vertex \"zzz\"",
            "sum to 2/3",
            "duplicate edge target",
            "unknown player \"q\"",
            "missing payoff for \"p\"",
            "unknown initial vertex",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
        }
    }

    #[test]
    fn validate_warns_about_unreachable_vertices() {
        let mut b = GameBuilder::new();
        b.player("p");
        b.controlled("a", "p", ["t"]);
        b.controlled("orphan", "p", ["t"]);
        b.terminal("t", [("p", rat_int(0))]);
        b.initial("a");
        let g = b.build().unwrap();
        let val = validate(&g);
        assert!(val.is_valid());
        assert_eq!(val.warnings.len(), 1);
        assert!(val.warnings[0].contains("orphan"));
    }

    #[test]
    fn reachability_respects_the_edge_set() {
        let g = two_player_line();
        let full = EdgeSet::full(&g);
        assert_eq!(reachable(&g, &full, 0), vec![true; 4]);

        let mut keep = full.clone();
        keep.remove(g.find_edge(0, 1).unwrap()); // drop a -> b
        let seen = reachable(&g, &keep, 0);
        assert_eq!(seen, vec![true, false, true, false]);

        // b still reaches t1 along the kept path b -> a -> t1.
        let back = backward_reachable(&g, &keep, &[false, false, true, false]);
        assert_eq!(back, vec![true, true, true, false]);
    }

    #[test]
    fn restrict_edges_checks_support_validity() {
        let g = two_player_line();
        let mut keep = EdgeSet::full(&g);
        keep.remove(g.find_edge(0, 1).unwrap());
        let sub = restrict_edges(&g, &keep).unwrap();
        assert_eq!(sub.successors(0), &[2]); // a keeps only t1
        assert_eq!(sub.edge_count(), 3);

        let mut empty_a = EdgeSet::full(&g);
        empty_a.remove(g.find_edge(0, 1).unwrap());
        empty_a.remove(g.find_edge(0, 2).unwrap());
        assert!(restrict_edges(&g, &empty_a).is_err());
        assert!(!empty_a.is_valid_support(&g));
    }

    #[test]
    fn full_and_empty_edge_sets() {
        let g = two_player_line();
        let full = EdgeSet::full(&g);
        assert_eq!(full.count(), 4);
        assert!(full.is_valid_support(&g));
        let empty = EdgeSet::empty(&g);
        assert_eq!(empty.count(), 0);
        assert!(empty.is_subset(&full));
        assert!(!full.is_subset(&empty));
        assert_eq!(full.pairs(&g), vec![(0, 1), (0, 2), (1, 0), (1, 3)]);
    }
}
