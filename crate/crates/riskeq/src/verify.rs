//! Evaluating strategy profiles and checking equilibrium claims.
//!
//! Explicit profiles (positional, stationary, finite-memory) induce a finite
//! Markov chain over memory-vertex pairs. Extreme-risk values read off the
//! chain's positive-probability payoff support, and the best deviation of a
//! player comes from a decision process in which that player is freed while
//! everyone else keeps following the profile. Edge-set profiles are never
//! expanded into a product; they are checked as succinct certificates.
//! Entropic stationary profiles reduce to expectations of transformed
//! payoffs, evaluated in binary64.

use crate::game::{reachable, Game, GameError, VertexKind};
use crate::json::ConstraintBox;
use crate::qual::{
    adversarial_values, committed_positive_payoffs, mdp_best_xr, stationary_positive_payoffs,
    sure_safe_region, InducedMdp, MdpState,
};
use crate::rational::{rational_to_f64, Rational};
use crate::risk::{modified_reward, Base, RiskAssignment, XrMode};
use crate::strategy::{
    memory_bound, EdgeSemantics, EdgeSetProfile, FiniteMemoryProfile, StationaryProfile,
    StrategyProfile,
};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Iteration tolerance used by the entropic checker unless overridden.
pub const DEFAULT_ER_TOL: f64 = 1e-9;
/// Sweep cap for the entropic best-response iteration unless overridden.
pub const DEFAULT_ER_CAP: u64 = 1_000_000;

fn check_player_count(g: &Game, risk: &RiskAssignment) -> Result<(), GameError> {
    if risk.player_count() != g.player_count() {
        return Err(GameError::Invalid(vec![format!(
            "risk assignment covers {} players but the game has {}",
            risk.player_count(),
            g.player_count()
        )]));
    }
    Ok(())
}

fn check_shape(g: &Game, p: &StrategyProfile) -> Result<(), GameError> {
    let shape = p.violations(g);
    if shape.is_empty() {
        Ok(())
    } else {
        Err(GameError::Invalid(shape))
    }
}

fn check_bounds(g: &Game, bounds: Option<&ConstraintBox>) -> Result<(), GameError> {
    if let Some(b) = bounds {
        let problems = b.check_against(g);
        if !problems.is_empty() {
            return Err(GameError::Invalid(problems));
        }
    }
    Ok(())
}

/// Every explicit profile is a finite-memory profile; positional and
/// stationary ones need a single state. Edge-set profiles with stationary
/// semantics expand to the uniform stationary profile over their support;
/// commit semantics has no small chain and is rejected here.
fn as_memory(g: &Game, p: &StrategyProfile) -> Result<FiniteMemoryProfile, GameError> {
    match p {
        StrategyProfile::Positional(p) => Ok(FiniteMemoryProfile::from_positional(g, p)),
        StrategyProfile::Stationary(s) => Ok(memory_from_stationary(g, s)),
        StrategyProfile::Memory(m) => Ok(m.clone()),
        StrategyProfile::EdgeSet(e) => match e.semantics {
            EdgeSemantics::StationaryUniform => Ok(memory_from_stationary(
                g,
                &StationaryProfile::uniform_over(g, &e.support),
            )),
            EdgeSemantics::CommitOnFirstVisit => Err(GameError::Invalid(vec![
                "an edge-set profile with commit semantics has no stationary chain; \
                 check it as a certificate instead"
                    .to_string(),
            ])),
        },
    }
}

fn memory_from_stationary(g: &Game, sigma: &StationaryProfile) -> FiniteMemoryProfile {
    let mut update = BTreeMap::new();
    let mut output = BTreeMap::new();
    for v in 0..g.vertex_count() {
        if !g.is_terminal(v) {
            update.insert((0, v), 0);
        }
        if !sigma.rows[v].is_empty() {
            output.insert((0, v), sigma.rows[v].clone());
        }
    }
    FiniteMemoryProfile {
        state_names: vec!["s".to_string()],
        initial: 0,
        update,
        output,
    }
}

/// A profile only has to be defined where play can actually go, so gaps
/// surface as errors during product construction, named after the pair that
/// was hit. Single-state wrappers drop the redundant state from the message.
fn pair_missing(g: &Game, m: &FiniteMemoryProfile, s: usize, v: usize, what: &str) -> GameError {
    let msg = if m.state_count() == 1 {
        format!("{what} undefined at reachable vertex {}", g.vertex_id(v))
    } else {
        format!(
            "{what} undefined at reachable pair ({}, {})",
            m.state_names[s],
            g.vertex_id(v)
        )
    };
    GameError::Invalid(vec![msg])
}

/// The Markov chain a concrete profile induces. States are memory-vertex
/// pairs discovered from the initial pair, so every state is reachable, and
/// every listed transition has positive probability. Terminal states have no
/// transitions.
#[derive(Debug, Clone)]
pub struct ProductChain {
    /// `(memory state, vertex)` per chain state; state 0 is initial.
    pub states: Vec<(usize, usize)>,
    pub trans: Vec<Vec<(usize, Rational)>>,
}

impl ProductChain {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn vertex(&self, s: usize) -> usize {
        self.states[s].1
    }
}

/// Expand a profile into its induced chain. Fails on profiles that leave a
/// reachable memory-vertex pair without an update or a reachable controlled
/// vertex without a move.
pub fn induced_chain(g: &Game, p: &StrategyProfile) -> Result<ProductChain, GameError> {
    check_shape(g, p)?;
    build_chain(g, &as_memory(g, p)?)
}

fn build_chain(g: &Game, m: &FiniteMemoryProfile) -> Result<ProductChain, GameError> {
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut states = vec![(m.initial, g.initial())];
    index.insert(states[0], 0);
    let mut trans: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut at = 0;
    while at < states.len() {
        let (s, v) = states[at];
        at += 1;
        if g.is_terminal(v) {
            trans.push(Vec::new());
            continue;
        }
        let s2 = m
            .update_of(s, v)
            .ok_or_else(|| pair_missing(g, m, s, v, "memory update"))?;
        let moves: Vec<(usize, Rational)> = match g.kind(v) {
            VertexKind::Stochastic => (0..g.successors(v).len())
                .map(|k| (k, g.edge_prob(v, k).clone()))
                .collect(),
            _ => m
                .output_of(s, v)
                .ok_or_else(|| pair_missing(g, m, s, v, "move distribution"))?
                .to_vec(),
        };
        let mut row = Vec::with_capacity(moves.len());
        for (k, p) in moves {
            let key = (s2, g.successors(v)[k]);
            let next = states.len();
            let t = *index.entry(key).or_insert(next);
            if t == next {
                states.push(key);
            }
            row.push((t, p));
        }
        trans.push(row);
    }
    Ok(ProductChain { states, trans })
}

/// Payoff vectors realized with positive probability: every reachable
/// terminal's payoff, plus the zero vector exactly when some state cannot
/// reach a terminal at all (from such a state the play never stops, and the
/// state itself is hit with positive probability).
pub fn chain_payoff_support(g: &Game, chain: &ProductChain) -> Vec<Vec<Rational>> {
    let n = chain.len();
    let mut absorbed: Vec<bool> = (0..n).map(|s| g.is_terminal(chain.vertex(s))).collect();
    loop {
        let mut grew = false;
        for s in 0..n {
            if !absorbed[s] && chain.trans[s].iter().any(|&(t, _)| absorbed[t]) {
                absorbed[s] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let mut set: BTreeSet<Vec<Rational>> = chain
        .states
        .iter()
        .filter_map(|&(_, v)| g.payoff(v).map(<[Rational]>::to_vec))
        .collect();
    if absorbed.iter().any(|a| !a) {
        set.insert(vec![Rational::zero(); g.player_count()]);
    }
    set.into_iter().collect()
}

fn extreme_of(support: &[Vec<Rational>], i: usize, mode: XrMode) -> Rational {
    let column = support.iter().map(|x| &x[i]);
    match mode {
        XrMode::Pessimist => column.min(),
        XrMode::Optimist => column.max(),
    }
    .expect("a payoff support is never empty")
    .clone()
}

fn extreme_tags(g: &Game, risk: &RiskAssignment) -> Result<Vec<XrMode>, GameError> {
    check_player_count(g, risk)?;
    (0..g.player_count())
        .map(|i| {
            risk.xr_mode(i).ok_or_else(|| {
                GameError::Invalid(vec![format!(
                    "player {} is entropic; extreme-risk analysis needs extreme tags, \
                     entropic profiles go through the stationary entropic checker",
                    g.players()[i]
                )])
            })
        })
        .collect()
}

/// Extreme-risk value vector a profile delivers from the initial vertex.
/// Explicit profiles go through their induced chain; edge-set profiles read
/// the payoff support of their semantics straight off the support graph.
pub fn xr_of_profile(
    g: &Game,
    p: &StrategyProfile,
    risk: &RiskAssignment,
) -> Result<Vec<Rational>, GameError> {
    let modes = extreme_tags(g, risk)?;
    check_shape(g, p)?;
    let support = match p {
        StrategyProfile::EdgeSet(e) => match e.semantics {
            EdgeSemantics::StationaryUniform => stationary_positive_payoffs(g, &e.support),
            EdgeSemantics::CommitOnFirstVisit => committed_positive_payoffs(g, &e.support),
        },
        _ => chain_payoff_support(g, &build_chain(g, &as_memory(g, p)?)?),
    };
    Ok(modes
        .iter()
        .enumerate()
        .map(|(i, &mode)| extreme_of(&support, i, mode))
        .collect())
}

/// How a single player can deviate: a positional policy on the product of
/// the profile's memory with the game, which is all the generality a best
/// deviation ever needs.
#[derive(Debug, Clone)]
pub struct DeviationWitness {
    /// Memory-state name and vertex per product state; entry 0 is initial.
    pub states: Vec<(String, usize)>,
    /// Chosen successor position at the product states where the deviator
    /// moves; `None` elsewhere or where the choice is irrelevant.
    pub choice: Vec<Option<usize>>,
}

/// Decision process player `i` faces when everyone else sticks to the
/// profile: at `i`'s own vertices every original edge is available, at other
/// controlled vertices the profile's move support is followed, stochastic
/// vertices branch as in the game. The memory advances on the vertices the
/// play actually visits, deviating or not.
fn deviation_product(
    g: &Game,
    m: &FiniteMemoryProfile,
    i: usize,
) -> Result<(InducedMdp, Vec<(usize, usize)>), GameError> {
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut labels = vec![(m.initial, g.initial())];
    index.insert(labels[0], 0);
    let mut states: Vec<MdpState> = Vec::new();
    let mut at = 0;
    while at < labels.len() {
        let (s, v) = labels[at];
        at += 1;
        if let Some(x) = g.payoff(v) {
            states.push(MdpState::Stop(x[i].clone()));
            continue;
        }
        let s2 = m
            .update_of(s, v)
            .ok_or_else(|| pair_missing(g, m, s, v, "memory update"))?;
        let (free, positions): (bool, Vec<usize>) = match g.kind(v) {
            VertexKind::Controlled(j) if *j == i => (true, (0..g.successors(v).len()).collect()),
            VertexKind::Controlled(_) => (
                false,
                m.output_of(s, v)
                    .ok_or_else(|| pair_missing(g, m, s, v, "move distribution"))?
                    .iter()
                    .map(|&(k, _)| k)
                    .collect(),
            ),
            VertexKind::Stochastic => (false, (0..g.successors(v).len()).collect()),
            VertexKind::Terminal(_) => unreachable!("terminals were handled above"),
        };
        let succ: Vec<usize> = positions
            .into_iter()
            .map(|k| {
                let key = (s2, g.successors(v)[k]);
                let next = labels.len();
                let t = *index.entry(key).or_insert(next);
                if t == next {
                    labels.push(key);
                }
                t
            })
            .collect();
        states.push(if free {
            MdpState::Choice(succ)
        } else {
            MdpState::Chance(succ)
        });
    }
    Ok((InducedMdp { states, initial: 0 }, labels))
}

/// Best extreme-risk value player `i` can reach by deviating unilaterally
/// against the profile, with a witness policy. The profile must prescribe
/// behavior on every pair reachable under the deviation, not just on-path.
pub fn best_deviation(
    g: &Game,
    p: &StrategyProfile,
    i: usize,
    risk: &RiskAssignment,
) -> Result<(Rational, DeviationWitness), GameError> {
    check_player_count(g, risk)?;
    let mode = risk.xr_mode(i).ok_or_else(|| {
        GameError::Invalid(vec![format!(
            "player {} is entropic; extreme-risk analysis needs extreme tags, \
             entropic profiles go through the stationary entropic checker",
            g.players()[i]
        )])
    })?;
    check_shape(g, p)?;
    if matches!(p, StrategyProfile::EdgeSet(_)) {
        return Err(GameError::Invalid(vec![
            "an edge-set profile is checked as a certificate, not by product deviation analysis"
                .to_string(),
        ]));
    }
    let m = as_memory(g, p)?;
    let (mdp, labels) = deviation_product(g, &m, i)?;
    let (value, choice) = mdp_best_xr(&mdp, mode);
    let witness = DeviationWitness {
        states: labels
            .into_iter()
            .map(|(s, v)| (m.state_names[s].clone(), v))
            .collect(),
        choice,
    };
    Ok((value, witness))
}

/// Outcome of checking a profile: what it pays, what each player could grab
/// alone, and whether that makes it stable (and inside the bounds, if given).
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub xr: Vec<Rational>,
    pub best_deviation: Vec<Rational>,
    /// One witness per player for explicit profiles; empty entries for
    /// edge-set certificates, whose deviations are bounded instead of built.
    pub deviation_witnesses: Vec<Option<DeviationWitness>>,
    /// No player gains by deviating alone.
    pub is_equilibrium: bool,
    /// Whether the delivered values lie in the supplied box; `None` without
    /// a box.
    pub constraints_met: Option<bool>,
    /// Memory states of the profile as represented.
    pub certificate_size: u64,
    /// Whether `certificate_size` stays within the generic bound that some
    /// equilibrium of this game size always satisfies. Informational: a
    /// larger profile can still be a perfectly good equilibrium.
    pub within_memory_bound: bool,
}

/// Full equilibrium check of a profile. Explicit profiles are compared
/// against every player's best product deviation; edge-set profiles are
/// dispatched to the certificate conditions.
pub fn verify_profile(
    g: &Game,
    p: &StrategyProfile,
    risk: &RiskAssignment,
    bounds: Option<&ConstraintBox>,
) -> Result<VerifyReport, GameError> {
    if let StrategyProfile::EdgeSet(e) = p {
        return verify_edgeset_certificate(g, e, risk, bounds);
    }
    check_bounds(g, bounds)?;
    let xr = xr_of_profile(g, p, risk)?;
    let mut best = Vec::with_capacity(g.player_count());
    let mut witnesses = Vec::with_capacity(g.player_count());
    for i in 0..g.player_count() {
        let (value, witness) = best_deviation(g, p, i, risk)?;
        best.push(value);
        witnesses.push(Some(witness));
    }
    let is_equilibrium = best.iter().zip(&xr).all(|(b, x)| b <= x);
    let constraints_met = bounds.map(|b| b.contains(g, &xr));
    let certificate_size = p.certificate_size(g);
    let within_memory_bound =
        certificate_size <= memory_bound(g.vertex_count(), g.player_count());
    Ok(VerifyReport {
        xr,
        best_deviation: best,
        deviation_witnesses: witnesses,
        is_equilibrium,
        constraints_met,
        certificate_size,
        within_memory_bound,
    })
}

/// Check an edge-set profile as a succinct certificate. Requires every
/// player to be an optimist; that is the setting in which a support plus a
/// punishment rule pins down the whole profile.
///
/// The conditions, with `z` the per-player maximum of the support's payoff
/// set under the declared semantics:
///
/// - off-support deviations are deterred: at every support-reachable
///   controlled vertex, the owner's adversarial optimist value on the full
///   game is at most the owner's `z`;
/// - under stationary semantics, a player whose `z` is negative must not
///   reach a region of the support where that player can keep the play
///   going forever against everyone else's kept edges, since never stopping
///   would pay 0 and beat `z`. Commit semantics needs no such check: a
///   committed trap region already puts 0 into the payoff set.
///
/// Bounds, when given, are checked against `z` itself.
pub fn verify_edgeset_certificate(
    g: &Game,
    prof: &EdgeSetProfile,
    risk: &RiskAssignment,
    bounds: Option<&ConstraintBox>,
) -> Result<VerifyReport, GameError> {
    check_player_count(g, risk)?;
    if !risk.is_all_optimist() {
        return Err(GameError::Invalid(vec![
            "edge-set certificates apply only when every player is an optimist".to_string(),
        ]));
    }
    let wrapped = StrategyProfile::EdgeSet(prof.clone());
    check_shape(g, &wrapped)?;
    check_bounds(g, bounds)?;

    let payoffs = match prof.semantics {
        EdgeSemantics::StationaryUniform => stationary_positive_payoffs(g, &prof.support),
        EdgeSemantics::CommitOnFirstVisit => committed_positive_payoffs(g, &prof.support),
    };
    let z: Vec<Rational> = (0..g.player_count())
        .map(|i| extreme_of(&payoffs, i, XrMode::Optimist))
        .collect();

    let reach = reachable(g, &prof.support, g.initial());
    let mut deterred = true;
    for (i, zi) in z.iter().enumerate() {
        let val = adversarial_values(g, i, XrMode::Optimist);
        for v in 0..g.vertex_count() {
            if reach[v] && g.owner(v) == Some(i) && val[v] > *zi {
                deterred = false;
            }
        }
    }

    let mut trap_free = true;
    if prof.semantics == EdgeSemantics::StationaryUniform {
        for (i, zi) in z.iter().enumerate() {
            if *zi >= Rational::zero() {
                continue;
            }
            let mine: Vec<bool> = (0..g.vertex_count())
                .map(|v| g.owner(v) == Some(i))
                .collect();
            let trap = sure_safe_region(g, &prof.support, &g.terminal_mask(), &mine);
            if (0..g.vertex_count()).any(|v| trap[v] && reach[v]) {
                trap_free = false;
            }
        }
    }

    let is_equilibrium = deterred && trap_free;
    let constraints_met = bounds.map(|b| b.contains(g, &z));
    let certificate_size = wrapped.certificate_size(g);
    let within_memory_bound =
        certificate_size <= memory_bound(g.vertex_count(), g.player_count());
    Ok(VerifyReport {
        xr: z.clone(),
        best_deviation: z,
        deviation_witnesses: vec![None; g.player_count()],
        is_equilibrium,
        constraints_met,
        certificate_size,
        within_memory_bound,
    })
}

/// Exact distribution over the ways a chain can end: per terminal vertex the
/// probability of absorbing there, plus the mass that never terminates.
#[derive(Debug, Clone)]
pub struct Absorption {
    /// `(terminal vertex, probability)`, vertex order, positive entries only.
    pub terminals: Vec<(usize, Rational)>,
    pub nonterminating: Rational,
}

/// Absorption probabilities of a product chain from its initial state, by
/// Gaussian elimination over the rationals. States that cannot reach any
/// terminal contribute their mass to `nonterminating`.
pub fn absorption(g: &Game, chain: &ProductChain) -> Absorption {
    let n = chain.len();
    let term: Vec<bool> = (0..n).map(|s| g.is_terminal(chain.vertex(s))).collect();
    let mut live = term.clone();
    loop {
        let mut grew = false;
        for s in 0..n {
            if !live[s] && chain.trans[s].iter().any(|&(t, _)| live[t]) {
                live[s] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }

    let terminals: Vec<usize> = (0..n).filter(|&s| term[s]).collect();
    let by_vertex = |hit: Vec<(usize, Rational)>| {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (s, p) in hit {
            if !p.is_zero() {
                *acc.entry(chain.vertex(s)).or_insert_with(Rational::zero) += p;
            }
        }
        let total: Rational = acc.values().cloned().sum();
        Absorption {
            terminals: acc.into_iter().collect(),
            nonterminating: Rational::one() - total,
        }
    };

    if term[0] {
        return by_vertex(vec![(0, Rational::one())]);
    }
    if !live[0] {
        return by_vertex(Vec::new());
    }

    // One unknown per live transient state, one right-hand column per
    // terminal state: x = Q x + B, transitions into dead states dropped.
    let transient: Vec<usize> = (0..n).filter(|&s| live[s] && !term[s]).collect();
    let col: BTreeMap<usize, usize> = transient.iter().enumerate().map(|(c, &s)| (s, c)).collect();
    let tcol: BTreeMap<usize, usize> = terminals.iter().enumerate().map(|(c, &s)| (s, c)).collect();
    let rows = transient.len();
    let width = rows + terminals.len();
    let mut a: Vec<Vec<Rational>> = vec![vec![Rational::zero(); width]; rows];
    for (r, &s) in transient.iter().enumerate() {
        a[r][r] = Rational::one();
        for (t, p) in &chain.trans[s] {
            if let Some(&c) = col.get(t) {
                a[r][c] -= p;
            } else if let Some(&c) = tcol.get(t) {
                a[r][rows + c] += p;
            }
        }
    }

    // Gauss-Jordan; a pivot always exists because I - Q is nonsingular when
    // every state involved reaches absorption with positive probability.
    for c in 0..rows {
        let pivot = (c..rows)
            .find(|&r| !a[r][c].is_zero())
            .expect("absorbing chain system is nonsingular");
        a.swap(c, pivot);
        let inv = a[c][c].clone();
        for x in &mut a[c] {
            *x /= &inv;
        }
        let pivot_row = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, px) in row.iter_mut().zip(&pivot_row) {
                    *x -= px * &f;
                }
            }
        }
    }

    let r0 = col[&0];
    by_vertex(
        terminals
            .iter()
            .enumerate()
            .map(|(j, &s)| (s, a[r0][rows + j].clone()))
            .collect(),
    )
}

/// Payoff distribution player `i` faces, with the never-terminating mass
/// folded into a zero-payoff atom.
pub fn player_distribution(
    g: &Game,
    abs: &Absorption,
    i: usize,
) -> crate::risk::FinitePayoffDistribution {
    let mut atoms: Vec<(Rational, Rational)> = abs
        .terminals
        .iter()
        .map(|(v, p)| (g.payoff(*v).expect("absorbing states are terminal")[i].clone(), p.clone()))
        .collect();
    if !abs.nonterminating.is_zero() {
        atoms.push((Rational::zero(), abs.nonterminating.clone()));
    }
    crate::risk::FinitePayoffDistribution::new(atoms)
        .expect("absorption probabilities are positive and sum to one")
}

/// Failure modes of the entropic checker, separated because hitting the
/// sweep cap is an inconclusive outcome, not a bad input.
#[derive(Debug, thiserror::Error)]
pub enum ErseError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("best-response value iteration did not converge within {cap} sweeps (residual {residual:e})")]
    NoConvergence { cap: u64, residual: f64 },
}

/// Outcome of checking a stationary profile under entropic risk. Values are
/// binary64 throughout; `transformed` and `best_response` live on the
/// transformed-payoff scale where equilibrium comparisons happen, `values`
/// are the entropic certainty equivalents players actually see.
#[derive(Debug, Clone)]
pub struct ErseReport {
    pub values: Vec<f64>,
    pub transformed: Vec<f64>,
    pub best_response: Vec<f64>,
    pub is_equilibrium: bool,
    pub constraints_met: Option<bool>,
    /// Most sweeps any best-response iteration needed.
    pub sweeps: u64,
}

fn transformed_payoff(x: &Rational, base: Option<&Base>, rho: &Rational) -> f64 {
    if rho.is_zero() {
        rational_to_f64(x)
    } else {
        modified_reward(x, base.expect("base checked before transforming"), rho)
    }
}

fn inverse_transform(value: f64, base: Option<&Base>, rho: &Rational) -> f64 {
    if rho.is_zero() {
        return value;
    }
    let r = rational_to_f64(rho);
    let arg = if r > 0.0 { 1.0 - value } else { 1.0 + value };
    -arg.ln() / (r * base.expect("base checked before transforming").ln())
}

/// Vertices in play when `i` deviates: `i` may use any edge, everyone else
/// follows the profile's support.
fn deviation_reach(g: &Game, sigma: &StationaryProfile, i: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    seen[g.initial()] = true;
    let mut stack = vec![g.initial()];
    while let Some(v) = stack.pop() {
        if g.is_terminal(v) {
            continue;
        }
        let step = |k: usize| g.successors(v)[k];
        let nexts: Vec<usize> = match g.kind(v) {
            VertexKind::Controlled(j) if *j != i => sigma.support_at(v).map(step).collect(),
            _ => (0..g.successors(v).len()).map(step).collect(),
        };
        for w in nexts {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Check a stationary profile for equilibrium under entropic risk. Each
/// player's comparison happens on their transformed payoffs, where the
/// entropic value of a distribution orders exactly like the expectation:
/// the profile's expected transformed payoff is computed from exact
/// absorption probabilities, the best response by synchronous value
/// iteration until the sup-norm residual drops below `tol` (at most `cap`
/// sweeps). The equilibrium verdict allows a deviation gain of `tol`.
pub fn verify_stationary_erse(
    g: &Game,
    sigma: &StationaryProfile,
    risk: &RiskAssignment,
    bounds: Option<&ConstraintBox>,
    tol: f64,
    cap: u64,
) -> Result<ErseReport, ErseError> {
    check_player_count(g, risk)?;
    let rhos: Vec<Rational> = (0..g.player_count())
        .map(|i| match risk.tag(i) {
            crate::risk::RiskTag::Entropic(r) => Ok(r.clone()),
            crate::risk::RiskTag::Extreme(_) => Err(GameError::Invalid(vec![format!(
                "player {} has an extreme tag; this checker handles entropic players only",
                g.players()[i]
            )])),
        })
        .collect::<Result<_, _>>()?;
    if risk.base().is_none() && rhos.iter().any(|r| !r.is_zero()) {
        return Err(GameError::Invalid(vec![
            "entropic players with nonzero rate need a base".to_string(),
        ])
        .into());
    }
    let profile = StrategyProfile::Stationary(sigma.clone());
    check_shape(g, &profile)?;
    check_bounds(g, bounds)?;

    let base = risk.base();
    let n = g.vertex_count();
    let players = g.player_count();

    // Transformed terminal payoffs, one row per player; 0 elsewhere, which
    // is also the worth of never terminating since the transform fixes 0.
    let h: Vec<Vec<f64>> = (0..players)
        .map(|i| {
            (0..n)
                .map(|v| {
                    g.payoff(v)
                        .map_or(0.0, |x| transformed_payoff(&x[i], base, &rhos[i]))
                })
                .collect()
        })
        .collect();

    let chain = build_chain(g, &memory_from_stationary(g, sigma))?;
    let abs = absorption(g, &chain);
    let transformed: Vec<f64> = (0..players)
        .map(|i| {
            abs.terminals
                .iter()
                .map(|(v, p)| rational_to_f64(p) * h[i][*v])
                .sum()
        })
        .collect();

    let mut best_response = Vec::with_capacity(players);
    let mut sweeps_used = 0u64;
    for (i, hi) in h.iter().enumerate() {
        let active = deviation_reach(g, sigma, i);
        for (v, live) in active.iter().enumerate() {
            if *live
                && !g.is_terminal(v)
                && g.owner(v).is_some_and(|j| j != i)
                && sigma.rows[v].is_empty()
            {
                return Err(GameError::Invalid(vec![format!(
                    "no move prescribed at vertex {}, reachable when {} deviates",
                    g.vertex_id(v),
                    g.players()[i]
                )])
                .into());
            }
        }
        let mut value: Vec<f64> = hi.clone();
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for sweep in 1..=cap {
            let mut next = value.clone();
            for v in 0..n {
                if !active[v] || g.is_terminal(v) {
                    continue;
                }
                next[v] = match g.kind(v) {
                    VertexKind::Controlled(j) if *j == i => g
                        .successors(v)
                        .iter()
                        .map(|&w| value[w])
                        .fold(f64::NEG_INFINITY, f64::max),
                    VertexKind::Controlled(_) => sigma.rows[v]
                        .iter()
                        .map(|(k, p)| rational_to_f64(p) * value[g.successors(v)[*k]])
                        .sum(),
                    VertexKind::Stochastic => (0..g.successors(v).len())
                        .map(|k| {
                            rational_to_f64(g.edge_prob(v, k)) * value[g.successors(v)[k]]
                        })
                        .sum(),
                    VertexKind::Terminal(_) => unreachable!("skipped above"),
                };
            }
            residual = value
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            value = next;
            if residual < tol {
                converged = true;
                sweeps_used = sweeps_used.max(sweep);
                break;
            }
        }
        if !converged {
            return Err(ErseError::NoConvergence { cap, residual });
        }
        best_response.push(value[g.initial()]);
    }

    let is_equilibrium = best_response
        .iter()
        .zip(&transformed)
        .all(|(b, e)| *b <= *e + tol);
    let values: Vec<f64> = (0..players)
        .map(|i| inverse_transform(transformed[i], base, &rhos[i]))
        .collect();
    let constraints_met = bounds.map(|b| {
        let lo = b.lower_vec(g);
        let hi = b.upper_vec(g);
        (0..players).all(|i| {
            lo[i]
                .as_ref()
                .is_none_or(|q| rational_to_f64(q) - tol <= values[i])
                && hi[i]
                    .as_ref()
                    .is_none_or(|q| values[i] <= rational_to_f64(q) + tol)
        })
    });
    Ok(ErseReport {
        values,
        transformed,
        best_response,
        is_equilibrium,
        constraints_met,
        sweeps: sweeps_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{EdgeSet, GameBuilder};
    use crate::rational::{rat, rat_int};
    use crate::risk::RiskTag;
    use crate::strategy::PositionalProfile;
    use crate::testutil::{
        coin_profile, crossing_profile, lottery, naive_temptation_profile, two_exits,
        two_exits_coin, two_exits_temptation,
    };

    fn positional(g: &Game, moves: &[(&str, &str)]) -> StrategyProfile {
        let mut p = PositionalProfile::new(g);
        for (from, to) in moves {
            let v = g.vertex_index(from).unwrap();
            let w = g.vertex_index(to).unwrap();
            p.choice[v] = g.successors(v).iter().position(|&x| x == w);
        }
        StrategyProfile::Positional(p)
    }

    #[test]
    fn whoever_the_coin_picks_should_leave() {
        let g = two_exits_coin();
        let p = StrategyProfile::Memory(coin_profile(&g));
        let risk = RiskAssignment::all_pessimist(2);
        let report = verify_profile(&g, &p, &risk, None).unwrap();
        assert_eq!(report.xr, vec![rat_int(1), rat_int(1)]);
        assert_eq!(report.best_deviation, vec![rat_int(1), rat_int(1)]);
        assert!(report.is_equilibrium);
        assert_eq!(report.constraints_met, None);
        assert_eq!(report.certificate_size, 3);
        assert!(report.within_memory_bound);
    }

    #[test]
    fn crossing_hands_each_player_to_the_other_exit() {
        let g = two_exits_temptation();
        let p = StrategyProfile::Memory(crossing_profile(&g));
        let risk = RiskAssignment::all_pessimist(2);
        let mut bounds = ConstraintBox::unconstrained();
        for name in ["circle", "square"] {
            bounds.lower.insert(name.to_string(), rat_int(1));
            bounds.upper.insert(name.to_string(), rat_int(1));
        }
        let report = verify_profile(&g, &p, &risk, Some(&bounds)).unwrap();
        assert_eq!(report.xr, vec![rat_int(1), rat_int(1)]);
        assert!(report.is_equilibrium);
        assert_eq!(report.constraints_met, Some(true));
    }

    #[test]
    fn ignoring_the_temptation_is_not_stable() {
        let g = two_exits_temptation();
        let p = StrategyProfile::Positional(naive_temptation_profile(&g));
        let risk = RiskAssignment::all_pessimist(2);
        let report = verify_profile(&g, &p, &risk, None).unwrap();
        assert_eq!(report.xr, vec![rat_int(1), rat_int(1)]);
        assert_eq!(report.best_deviation, vec![rat_int(2), rat_int(2)]);
        assert!(!report.is_equilibrium);
    }

    #[test]
    fn uniform_chatter_lets_everyone_wait_out_the_good_exit() {
        // Full-support uniform play on the 2-cycle: each pessimist denies
        // their own exit and collects the opponent's eventually-certain one.
        let g = two_exits();
        let sigma = StationaryProfile::uniform_over(&g, &EdgeSet::full(&g));
        let p = StrategyProfile::Stationary(sigma);
        let risk = RiskAssignment::all_pessimist(2);
        let report = verify_profile(&g, &p, &risk, None).unwrap();
        assert_eq!(report.xr, vec![rat_int(1), rat_int(1)]);
        assert_eq!(report.best_deviation, vec![rat_int(2), rat_int(2)]);
        assert!(!report.is_equilibrium);
    }

    #[test]
    fn one_state_memory_agrees_with_positional() {
        let g = two_exits();
        let moves = [("a", "b"), ("b", "t2")];
        let p = positional(&g, &moves);
        let StrategyProfile::Positional(inner) = &p else { unreachable!() };
        let m = StrategyProfile::Memory(FiniteMemoryProfile::from_positional(&g, inner));
        let risk = RiskAssignment::all_pessimist(2);
        let a = verify_profile(&g, &p, &risk, None).unwrap();
        let b = verify_profile(&g, &m, &risk, None).unwrap();
        assert_eq!(a.xr, b.xr);
        assert_eq!(a.best_deviation, b.best_deviation);
        assert_eq!(a.is_equilibrium, b.is_equilibrium);
        assert_eq!(a.certificate_size, b.certificate_size);
    }

    #[test]
    fn rescaling_probabilities_changes_no_verdict() {
        let g = two_exits_coin();
        let a = g.vertex_index("a").unwrap();
        let b = g.vertex_index("b").unwrap();
        let mut light = StationaryProfile::new(&g);
        light.rows[a] = vec![(0, rat(1, 3)), (1, rat(2, 3))];
        light.rows[b] = vec![(0, rat(1, 2)), (1, rat(1, 2))];
        let mut heavy = StationaryProfile::new(&g);
        heavy.rows[a] = vec![(0, rat(9, 10)), (1, rat(1, 10))];
        heavy.rows[b] = vec![(0, rat(99, 100)), (1, rat(1, 100))];
        let risk = RiskAssignment::all_pessimist(2);
        let ra = verify_profile(&g, &StrategyProfile::Stationary(light), &risk, None).unwrap();
        let rb = verify_profile(&g, &StrategyProfile::Stationary(heavy), &risk, None).unwrap();
        assert_eq!(ra.xr, rb.xr);
        assert_eq!(ra.best_deviation, rb.best_deviation);
        assert_eq!(ra.is_equilibrium, rb.is_equilibrium);
    }

    #[test]
    fn gaps_are_reported_with_the_pair_that_was_hit() {
        let g = two_exits();
        let p = positional(&g, &[("a", "b")]);
        let err = induced_chain(&g, &p).unwrap_err();
        assert!(
            err.to_string().contains("move distribution undefined at reachable vertex b"),
            "{err}"
        );

        let g = two_exits_coin();
        let mut m = coin_profile(&g);
        m.update.remove(&(1, g.vertex_index("b").unwrap()));
        let err =
            best_deviation(&g, &StrategyProfile::Memory(m), 0, &RiskAssignment::all_pessimist(2))
                .unwrap_err();
        assert!(err.to_string().contains("(sa, b)"), "{err}");
    }

    #[test]
    fn chain_support_includes_zero_only_for_possible_nontermination() {
        let g = two_exits();
        let looping = positional(&g, &[("a", "b"), ("b", "a")]);
        let chain = induced_chain(&g, &looping).unwrap();
        assert_eq!(chain_payoff_support(&g, &chain), vec![vec![rat_int(0), rat_int(0)]]);

        let exits = positional(&g, &[("a", "b"), ("b", "t2")]);
        let chain = induced_chain(&g, &exits).unwrap();
        assert_eq!(chain_payoff_support(&g, &chain), vec![vec![rat_int(2), rat_int(1)]]);
    }

    #[test]
    fn edge_set_support_and_its_expansion_agree() {
        let g = two_exits();
        let full = EdgeSet::full(&g);
        let risk = RiskAssignment::all_optimist(2);
        let as_set = StrategyProfile::EdgeSet(EdgeSetProfile {
            support: full.clone(),
            semantics: EdgeSemantics::StationaryUniform,
        });
        let expanded = StrategyProfile::Stationary(StationaryProfile::uniform_over(&g, &full));
        assert_eq!(
            xr_of_profile(&g, &as_set, &risk).unwrap(),
            xr_of_profile(&g, &expanded, &risk).unwrap()
        );
    }

    #[test]
    fn full_support_certificate_carries_the_high_payoffs() {
        let g = two_exits();
        let risk = RiskAssignment::all_optimist(2);
        let mut bounds = ConstraintBox::unconstrained();
        for name in ["circle", "square"] {
            bounds.lower.insert(name.to_string(), rat_int(2));
            bounds.upper.insert(name.to_string(), rat_int(2));
        }
        for semantics in [EdgeSemantics::StationaryUniform, EdgeSemantics::CommitOnFirstVisit] {
            let prof = EdgeSetProfile { support: EdgeSet::full(&g), semantics };
            let report = verify_edgeset_certificate(&g, &prof, &risk, Some(&bounds)).unwrap();
            assert_eq!(report.xr, vec![rat_int(2), rat_int(2)], "{semantics:?}");
            assert!(report.is_equilibrium, "{semantics:?}");
            assert_eq!(report.constraints_met, Some(true), "{semantics:?}");
        }
    }

    #[test]
    fn negative_cycle_support_splits_the_two_semantics() {
        // Cutting the b exit leaves payoff -1 as the only terminal. Under
        // stationary semantics the circle player can spin in the a-b cycle
        // forever for 0 instead, so the certificate must be rejected; under
        // commit semantics the cycle is itself an outcome, z = 0, and the
        // certificate stands.
        let mut b = GameBuilder::new();
        b.player("circle").player("square");
        b.controlled("a", "circle", ["b", "t1"]);
        b.controlled("b", "square", ["a", "t2"]);
        b.terminal("t1", [("circle", rat_int(-1)), ("square", rat_int(-1))]);
        b.terminal("t2", [("circle", rat_int(-2)), ("square", rat_int(-3))]);
        b.initial("a");
        let g = b.build().unwrap();
        let risk = RiskAssignment::all_optimist(2);

        let a = g.vertex_index("a").unwrap();
        let bv = g.vertex_index("b").unwrap();
        let mut support = EdgeSet::empty(&g);
        support.insert(g.edge_id(a, 0));
        support.insert(g.edge_id(a, 1));
        support.insert(g.edge_id(bv, 0));

        let stationary = EdgeSetProfile {
            support: support.clone(),
            semantics: EdgeSemantics::StationaryUniform,
        };
        let report = verify_edgeset_certificate(&g, &stationary, &risk, None).unwrap();
        assert_eq!(report.xr, vec![rat_int(-1), rat_int(-1)]);
        assert!(!report.is_equilibrium);

        let commit = EdgeSetProfile { support, semantics: EdgeSemantics::CommitOnFirstVisit };
        let report = verify_edgeset_certificate(&g, &commit, &risk, None).unwrap();
        assert_eq!(report.xr, vec![rat_int(0), rat_int(0)]);
        assert!(report.is_equilibrium);
    }

    #[test]
    fn absorption_resolves_loops_exactly() {
        let g = lottery();
        let gamble = positional(&g, &[("b", "c")]);
        let chain = induced_chain(&g, &gamble).unwrap();
        let abs = absorption(&g, &chain);
        let t1 = g.vertex_index("t1").unwrap();
        let t2 = g.vertex_index("t2").unwrap();
        assert_eq!(abs.terminals, vec![(t1, rat(1, 40)), (t2, rat(39, 40))]);
        assert!(abs.nonterminating.is_zero());

        let d = player_distribution(&g, &abs, 0);
        assert_eq!(d.atoms(), &[(rat_int(0), rat(39, 40)), (rat_int(40), rat(1, 40))]);

        let g2 = two_exits();
        let looping = positional(&g2, &[("a", "b"), ("b", "a")]);
        let chain = induced_chain(&g2, &looping).unwrap();
        let abs = absorption(&g2, &chain);
        assert!(abs.terminals.is_empty());
        assert!(abs.nonterminating.is_one());
    }

    fn risk_pick() -> Game {
        let mut b = GameBuilder::new();
        b.player("solo");
        b.controlled("a", "solo", ["safe", "gamble"]);
        b.stochastic("gamble", [("zero", rat(1, 2)), ("three", rat(1, 2))]);
        b.terminal("safe", [("solo", rat_int(1))]);
        b.terminal("zero", [("solo", rat_int(0))]);
        b.terminal("three", [("solo", rat_int(3))]);
        b.initial("a");
        b.build().unwrap()
    }

    fn pick(g: &Game, to: &str) -> StationaryProfile {
        let a = g.vertex_index("a").unwrap();
        let k = g
            .successors(a)
            .iter()
            .position(|&w| w == g.vertex_index(to).unwrap())
            .unwrap();
        let mut sigma = StationaryProfile::new(g);
        sigma.rows[a] = vec![(k, Rational::one())];
        sigma
    }

    #[test]
    fn risk_aversion_flips_the_preferred_exit() {
        let g = risk_pick();
        let averse = RiskAssignment::new(
            Some(Base::NaturalE),
            vec![RiskTag::Entropic(rat_int(4))],
        );
        let neutral = RiskAssignment::new(Some(Base::NaturalE), vec![RiskTag::Entropic(rat_int(0))]);

        let r = verify_stationary_erse(&g, &pick(&g, "safe"), &averse, None, 1e-9, 10_000).unwrap();
        assert!(r.is_equilibrium);
        assert!((r.values[0] - 1.0).abs() < 1e-9, "{}", r.values[0]);

        let r = verify_stationary_erse(&g, &pick(&g, "gamble"), &averse, None, 1e-9, 10_000).unwrap();
        assert!(!r.is_equilibrium);
        assert!(r.best_response[0] > r.transformed[0]);

        // Risk-neutrally the gamble is worth 3/2 and wins.
        let r = verify_stationary_erse(&g, &pick(&g, "gamble"), &neutral, None, 1e-9, 10_000).unwrap();
        assert!(r.is_equilibrium);
        assert!((r.values[0] - 1.5).abs() < 1e-12);
        let r = verify_stationary_erse(&g, &pick(&g, "safe"), &neutral, None, 1e-9, 10_000).unwrap();
        assert!(!r.is_equilibrium);
    }

    #[test]
    fn sweep_cap_is_reported_as_nonconvergence() {
        let g = risk_pick();
        let risk = RiskAssignment::new(Some(Base::NaturalE), vec![RiskTag::Entropic(rat_int(4))]);
        let err = verify_stationary_erse(&g, &pick(&g, "safe"), &risk, None, 1e-9, 1).unwrap_err();
        assert!(matches!(err, ErseError::NoConvergence { cap: 1, .. }), "{err}");
    }
}
