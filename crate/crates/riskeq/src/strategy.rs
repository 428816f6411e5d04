//! Strategy profiles: positional, stationary, finite-memory, and succinct
//! edge-set certificates.

use crate::game::{EdgeSet, Game};
use crate::rational::{format_rational, Rational};
use num::{One, Zero};
use std::collections::BTreeMap;

/// How an edge-set profile turns into behavior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSemantics {
    /// Randomize over the kept edges afresh at every visit.
    StationaryUniform,
    /// Draw one kept edge uniformly on the first visit, repeat it forever.
    CommitOnFirstVisit,
}

/// Succinct certificate: a support of kept edges plus the semantics under
/// which everyone plays it. Off-support deviations are met with adversarial
/// punishment, which is why verification goes through the certificate
/// conditions rather than an explicit product.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSetProfile {
    pub support: EdgeSet,
    pub semantics: EdgeSemantics,
}

/// One fixed successor position per controlled vertex. Entries may be left
/// unset; that only becomes an error if such a vertex is reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalProfile {
    /// `choice[v]` = index into `g.successors(v)`.
    pub choice: Vec<Option<usize>>,
}

impl PositionalProfile {
    pub fn new(g: &Game) -> Self {
        PositionalProfile { choice: vec![None; g.vertex_count()] }
    }

    pub fn violations(&self, g: &Game) -> Vec<String> {
        let mut out = Vec::new();
        if self.choice.len() != g.vertex_count() {
            out.push("positional profile sized for a different game".to_string());
            return out;
        }
        for (v, k) in self.choice.iter().enumerate() {
            if let Some(k) = *k {
                if g.owner(v).is_none() {
                    out.push(format!("move given for non-controlled vertex {}", g.vertex_id(v)));
                } else if k >= g.successors(v).len() {
                    out.push(format!("move out of range at vertex {}", g.vertex_id(v)));
                }
            }
        }
        out
    }
}

/// One probability distribution over successor positions per controlled
/// vertex, stored sparsely as `(position, probability)` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryProfile {
    /// `rows[v]` lists the support of the distribution at `v`, positions
    /// strictly ascending, probabilities positive and summing to one. An
    /// empty row means the strategy is unspecified there.
    pub rows: Vec<Vec<(usize, Rational)>>,
}

impl StationaryProfile {
    pub fn new(g: &Game) -> Self {
        StationaryProfile { rows: vec![Vec::new(); g.vertex_count()] }
    }

    /// Everyone randomizes uniformly over their kept edges.
    pub fn uniform_over(g: &Game, support: &EdgeSet) -> Self {
        let mut rows = vec![Vec::new(); g.vertex_count()];
        for (v, row) in rows.iter_mut().enumerate() {
            if g.owner(v).is_some() {
                let kept: Vec<usize> = support.kept(g, v).map(|(k, _)| k).collect();
                let share = Rational::one() / Rational::from_integer((kept.len() as i64).into());
                *row = kept.into_iter().map(|k| (k, share.clone())).collect();
            }
        }
        StationaryProfile { rows }
    }

    pub fn violations(&self, g: &Game) -> Vec<String> {
        let mut out = Vec::new();
        if self.rows.len() != g.vertex_count() {
            out.push("stationary profile sized for a different game".to_string());
            return out;
        }
        for (v, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let id = g.vertex_id(v);
            if g.owner(v).is_none() {
                out.push(format!("distribution given for non-controlled vertex {id}"));
                continue;
            }
            let mut sum = Rational::zero();
            let mut last: Option<usize> = None;
            for (k, p) in row {
                if *k >= g.successors(v).len() {
                    out.push(format!("distribution entry out of range at vertex {id}"));
                }
                if last.is_some_and(|prev| *k <= prev) {
                    out.push(format!("distribution entries out of order at vertex {id}"));
                }
                last = Some(*k);
                if *p <= Rational::zero() {
                    out.push(format!("non-positive probability at vertex {id}"));
                }
                sum += p;
            }
            if sum != Rational::one() {
                out.push(format!("probabilities at vertex {id} sum to {}", format_rational(&sum)));
            }
        }
        out
    }

    /// Support of the distribution at `v` as successor positions.
    pub fn support_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter().map(|(k, _)| *k)
    }
}

/// A collective finite-memory profile: one shared memory structure whose
/// output prescribes every player's move. The memory advances on the vertex
/// being left, so the move at a vertex is taken with the memory accumulated
/// strictly before arriving there was updated with it.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMemoryProfile {
    pub state_names: Vec<String>,
    pub initial: usize,
    /// `(state, vertex) -> state`, consumed whenever the play leaves
    /// `vertex` while the memory is in `state`.
    pub update: BTreeMap<(usize, usize), usize>,
    /// `(state, controlled vertex) ->` weighted successor positions, each
    /// weight positive, summing to one.
    pub output: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl FiniteMemoryProfile {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn update_of(&self, s: usize, v: usize) -> Option<usize> {
        self.update.get(&(s, v)).copied()
    }

    pub fn output_of(&self, s: usize, v: usize) -> Option<&[(usize, Rational)]> {
        self.output.get(&(s, v)).map(|row| row.as_slice())
    }

    /// Wrap a positional profile as a single-state memory structure.
    pub fn from_positional(g: &Game, p: &PositionalProfile) -> Self {
        let mut update = BTreeMap::new();
        let mut output = BTreeMap::new();
        for v in 0..g.vertex_count() {
            if !g.is_terminal(v) {
                update.insert((0, v), 0);
            }
            if let Some(k) = p.choice[v] {
                output.insert((0, v), vec![(k, Rational::one())]);
            }
        }
        FiniteMemoryProfile {
            state_names: vec!["s".to_string()],
            initial: 0,
            update,
            output,
        }
    }

    pub fn violations(&self, g: &Game) -> Vec<String> {
        let mut out = Vec::new();
        if self.state_names.is_empty() {
            out.push("memory profile declares no states".to_string());
            return out;
        }
        {
            let mut sorted = self.state_names.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != self.state_names.len() {
                out.push("duplicate memory state name".to_string());
            }
        }
        if self.initial >= self.state_count() {
            out.push("initial memory state out of range".to_string());
        }
        for (&(s, v), &t) in &self.update {
            if s >= self.state_count() || t >= self.state_count() || v >= g.vertex_count() {
                out.push("update row out of range".to_string());
            }
        }
        for (&(s, v), row) in &self.output {
            if s >= self.state_count() || v >= g.vertex_count() {
                out.push("output row out of range".to_string());
                continue;
            }
            let id = g.vertex_id(v);
            if g.owner(v).is_none() {
                out.push(format!("output given for non-controlled vertex {id}"));
                continue;
            }
            if row.is_empty() {
                out.push(format!("empty output distribution at vertex {id}"));
                continue;
            }
            let mut sum = Rational::zero();
            let mut last: Option<usize> = None;
            for (k, p) in row {
                if *k >= g.successors(v).len() {
                    out.push(format!("output entry out of range at vertex {id}"));
                }
                if last.is_some_and(|prev| *k <= prev) {
                    out.push(format!("output entries out of order at vertex {id}"));
                }
                last = Some(*k);
                if *p <= Rational::zero() {
                    out.push(format!("non-positive output probability at vertex {id}"));
                }
                sum += p;
            }
            if sum != Rational::one() {
                out.push(format!(
                    "output probabilities at vertex {id} sum to {}",
                    format_rational(&sum)
                ));
            }
        }
        out
    }
}

/// Any of the supported profile shapes.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategyProfile {
    Positional(PositionalProfile),
    Stationary(StationaryProfile),
    Memory(FiniteMemoryProfile),
    EdgeSet(EdgeSetProfile),
}

impl StrategyProfile {
    pub fn kind_name(&self) -> &'static str {
        match self {
            StrategyProfile::Positional(_) => "positional",
            StrategyProfile::Stationary(_) => "stationary",
            StrategyProfile::Memory(_) => "memory",
            StrategyProfile::EdgeSet(_) => "edgeset",
        }
    }

    pub fn violations(&self, g: &Game) -> Vec<String> {
        match self {
            StrategyProfile::Positional(p) => p.violations(g),
            StrategyProfile::Stationary(p) => p.violations(g),
            StrategyProfile::Memory(p) => p.violations(g),
            StrategyProfile::EdgeSet(p) => {
                let mut out = Vec::new();
                if !p.support.is_valid_support(g) {
                    out.push(
                        "support must keep every stochastic edge and at least one edge \
                         per controlled vertex"
                            .to_string(),
                    );
                }
                out
            }
        }
    }

    /// Number of memory states of the profile as represented. Commit
    /// semantics conceptually needs one state per committed choice rather
    /// than the saturated product counted here; the succinct certificate is
    /// what gets verified, so this is reported as written.
    pub fn certificate_size(&self, g: &Game) -> u64 {
        match self {
            StrategyProfile::Positional(_) | StrategyProfile::Stationary(_) => 1,
            StrategyProfile::Memory(m) => m.state_count() as u64,
            StrategyProfile::EdgeSet(p) => match p.semantics {
                EdgeSemantics::StationaryUniform => 1,
                EdgeSemantics::CommitOnFirstVisit => (0..g.vertex_count())
                    .filter(|&v| g.owner(v).is_some())
                    .map(|v| p.support.kept_count(g, v).max(1) as u64)
                    .try_fold(1u64, |acc, c| acc.checked_mul(c))
                    .unwrap_or(u64::MAX),
            },
        }
    }
}

/// Upper bound on the memory any equilibrium certificate ever needs, in
/// terms of vertex count `n` and player count `p`.
pub fn memory_bound(n: usize, p: usize) -> u64 {
    (3 * n * p + p + 1).saturating_sub(2 * n) as u64
}
