//! Ground truth by exhaustive enumeration on small instances. Candidate
//! strategies are listed explicitly and judged with plain graph searches;
//! none of the analytical fixpoint machinery is used here, so agreement
//! between the two routes is meaningful evidence for both.

use crate::game::{EdgeSet, Game, GameError, VertexKind};
use crate::json::ConstraintBox;
use crate::rational::Rational;
use crate::risk::{RiskAssignment, XrMode};
use crate::strategy::{
    EdgeSemantics, EdgeSetProfile, PositionalProfile, StationaryProfile, StrategyProfile,
};
use num::Zero;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default bound on how many candidates an enumeration may visit.
pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

/// Variable limit for [`brute_sat`]: past this the truth table is too big.
pub const SAT_VAR_CAP: usize = 20;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Game(#[from] GameError),
    /// Distinct from a `No` answer: the search space was never explored.
    #[error("{count} candidates exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
}

/// Which finite strategy class to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyClass {
    /// One successor per controlled vertex.
    Positional,
    /// One non-empty successor subset per controlled vertex, mixed
    /// uniformly. Sound for extreme risk, which only sees supports.
    StationarySupport,
}

#[derive(Debug, Clone)]
pub enum OracleOutcome {
    Yes {
        profile: StrategyProfile,
        values: Vec<Rational>,
    },
    No,
}

impl OracleOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleOutcome::Yes { .. })
    }
}

/// Odometer over mixed-radix digits, counting with the last digit fastest,
/// so assignments come out in lexicographic order. No limits means a single
/// empty assignment.
struct Odometer {
    digits: Vec<usize>,
    limits: Vec<usize>,
    fresh: bool,
}

impl Odometer {
    fn new(limits: Vec<usize>) -> Self {
        Odometer { digits: vec![0; limits.len()], limits, fresh: true }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if self.fresh {
            self.fresh = false;
            return Some(&self.digits);
        }
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.limits[k] {
                return Some(&self.digits);
            }
            self.digits[k] = 0;
        }
        None
    }
}

fn count_assignments(limits: &[usize]) -> u128 {
    limits
        .iter()
        .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128))
        .unwrap_or(u128::MAX)
}

fn check_cap(limits: &[usize], cap: u64) -> Result<(), OracleError> {
    let count = count_assignments(limits);
    if count > cap as u128 {
        Err(OracleError::CapExceeded { count, cap })
    } else {
        Ok(())
    }
}

fn xr_modes(g: &Game, risk: &RiskAssignment) -> Result<Vec<XrMode>, GameError> {
    if risk.player_count() != g.player_count() {
        return Err(GameError::Invalid(vec![format!(
            "risk assignment covers {} players but the game has {}",
            risk.player_count(),
            g.player_count()
        )]));
    }
    (0..g.player_count())
        .map(|i| {
            risk.xr_mode(i).ok_or_else(|| {
                GameError::Invalid(vec![format!(
                    "player {} is entropic; enumeration handles extreme players only",
                    g.players()[i]
                )])
            })
        })
        .collect()
}

/// Payoff vectors with positive probability when every vertex moves along
/// exactly the listed successor positions: the payoffs of the terminals the
/// walk can reach, plus zero when it can reach a spot from which no listed
/// path leads to any terminal.
fn outcome_support(g: &Game, kept: &[Vec<usize>], from: usize) -> Vec<Vec<Rational>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if g.is_terminal(v) {
            continue;
        }
        for &k in &kept[v] {
            let w = g.successors(v)[k];
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let mut live: Vec<bool> = (0..n).map(|v| g.is_terminal(v)).collect();
    loop {
        let mut grew = false;
        for v in 0..n {
            if live[v] || g.is_terminal(v) {
                continue;
            }
            if kept[v].iter().any(|&k| live[g.successors(v)[k]]) {
                live[v] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for (v, _) in seen.iter().enumerate().filter(|(_, s)| **s) {
        if let Some(x) = g.payoff(v) {
            out.insert(x.to_vec());
        }
    }
    if (0..n).any(|v| seen[v] && !live[v]) {
        out.insert(vec![Rational::zero(); g.player_count()]);
    }
    out.into_iter().collect()
}

fn extreme(outcomes: &[Vec<Rational>], i: usize, mode: XrMode) -> Rational {
    let column = outcomes.iter().map(|x| &x[i]);
    match mode {
        XrMode::Pessimist => column.min(),
        XrMode::Optimist => column.max(),
    }
    .expect("an outcome support is never empty")
    .clone()
}

fn xr_vector(outcomes: &[Vec<Rational>], modes: &[XrMode]) -> Vec<Rational> {
    modes
        .iter()
        .enumerate()
        .map(|(i, m)| extreme(outcomes, i, *m))
        .collect()
}

/// Move lists with every position kept everywhere.
fn kept_everything(g: &Game) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .map(|v| (0..g.successors(v).len()).collect())
        .collect()
}

fn player_slots(g: &Game, i: usize) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| g.owner(v) == Some(i)).collect()
}

/// Best value player `i` can reach against the fixed rest of `kept` with one
/// deterministic choice per own vertex, drawn from the full edge set.
fn best_deviation_value(
    g: &Game,
    kept: &[Vec<usize>],
    i: usize,
    mode: XrMode,
    from: usize,
) -> Rational {
    let mine = player_slots(g, i);
    let limits: Vec<usize> = mine.iter().map(|&v| g.successors(v).len()).collect();
    let mut odo = Odometer::new(limits);
    let mut trial = kept.to_vec();
    let mut best: Option<Rational> = None;
    while let Some(digits) = odo.advance() {
        for (&v, &k) in mine.iter().zip(digits) {
            trial[v] = vec![k];
        }
        let val = extreme(&outcome_support(g, &trial, from), i, mode);
        if best.as_ref().is_none_or(|b| val > *b) {
            best = Some(val);
        }
    }
    best.expect("the empty deviation is always enumerated")
}

/// Search the class for an equilibrium whose values fall inside the box,
/// in lexicographic candidate order (vertices by index, then successor
/// position, subsets by ascending bitmask). Returns the first hit.
pub fn oracle_constrained_existence(
    g: &Game,
    risk: &RiskAssignment,
    bounds: &ConstraintBox,
    cls: StrategyClass,
    cap: u64,
) -> Result<OracleOutcome, OracleError> {
    let modes = xr_modes(g, risk)?;
    let controlled: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.owner(v).is_some()).collect();
    let limits: Vec<usize> = controlled
        .iter()
        .map(|&v| {
            let d = g.successors(v).len();
            match cls {
                StrategyClass::Positional => d,
                StrategyClass::StationarySupport => {
                    1usize.checked_shl(d as u32).map_or(usize::MAX, |x| x - 1)
                }
            }
        })
        .collect();
    check_cap(&limits, cap)?;

    let base = kept_everything(g);
    let mut odo = Odometer::new(limits);
    'next: while let Some(digits) = odo.advance() {
        let mut kept = base.clone();
        for (&v, &d) in controlled.iter().zip(digits) {
            kept[v] = match cls {
                StrategyClass::Positional => vec![d],
                StrategyClass::StationarySupport => {
                    let mask = d + 1;
                    (0..g.successors(v).len()).filter(|k| mask >> k & 1 == 1).collect()
                }
            };
        }
        let values = xr_vector(&outcome_support(g, &kept, g.initial()), &modes);
        if !bounds.contains(g, &values) {
            continue;
        }
        for (i, mode) in modes.iter().enumerate() {
            if best_deviation_value(g, &kept, i, *mode, g.initial()) > values[i] {
                continue 'next;
            }
        }
        let profile = match cls {
            StrategyClass::Positional => {
                let mut choice = vec![None; g.vertex_count()];
                for (&v, &d) in controlled.iter().zip(odo.digits.iter()) {
                    choice[v] = Some(d);
                }
                StrategyProfile::Positional(PositionalProfile { choice })
            }
            StrategyClass::StationarySupport => {
                let mut support = EdgeSet::full(g);
                for &v in &controlled {
                    for k in 0..g.successors(v).len() {
                        if !kept[v].contains(&k) {
                            support.remove(g.edge_id(v, k));
                        }
                    }
                }
                StrategyProfile::Stationary(StationaryProfile::uniform_over(g, &support))
            }
        };
        return Ok(OracleOutcome::Yes { profile, values });
    }
    Ok(OracleOutcome::No)
}

/// Adversarial value of every vertex for player `i` by raw enumeration: the
/// worst the coalition of everyone else can positionally force, against the
/// best positional reply. Positional choices on both sides suffice for
/// extreme risk.
pub fn oracle_adversarial_table(
    g: &Game,
    i: usize,
    mode: XrMode,
    cap: u64,
) -> Result<Vec<Rational>, OracleError> {
    let n = g.vertex_count();
    let coalition: Vec<usize> =
        (0..n).filter(|&v| g.owner(v).is_some_and(|j| j != i)).collect();
    let mine = player_slots(g, i);
    let all_limits: Vec<usize> = coalition
        .iter()
        .chain(&mine)
        .map(|&v| g.successors(v).len())
        .collect();
    check_cap(&all_limits, cap)?;

    let base = kept_everything(g);
    let mut table: Vec<Option<Rational>> = vec![None; n];
    let mut outer = Odometer::new(coalition.iter().map(|&v| g.successors(v).len()).collect());
    while let Some(cdigits) = outer.advance() {
        let mut kept = base.clone();
        for (&v, &k) in coalition.iter().zip(cdigits) {
            kept[v] = vec![k];
        }
        let mut reply: Vec<Option<Rational>> = vec![None; n];
        let mut inner = Odometer::new(mine.iter().map(|&v| g.successors(v).len()).collect());
        while let Some(mdigits) = inner.advance() {
            for (&v, &k) in mine.iter().zip(mdigits) {
                kept[v] = vec![k];
            }
            for (v, slot) in reply.iter_mut().enumerate() {
                let val = extreme(&outcome_support(g, &kept, v), i, mode);
                if slot.as_ref().is_none_or(|b| val > *b) {
                    *slot = Some(val);
                }
            }
        }
        for (slot, r) in table.iter_mut().zip(reply) {
            let r = r.expect("every vertex gets a reply value");
            if slot.as_ref().is_none_or(|b| r < *b) {
                *slot = Some(r);
            }
        }
    }
    Ok(table.into_iter().map(|x| x.expect("every vertex gets a value")).collect())
}

pub fn oracle_adversarial_value(
    g: &Game,
    v: usize,
    i: usize,
    mode: XrMode,
    cap: u64,
) -> Result<Rational, OracleError> {
    Ok(oracle_adversarial_table(g, i, mode, cap)?.swap_remove(v))
}

/// Greatest region of non-terminals where controlled vertices can keep some
/// listed move inside and stochastic vertices keep all of them inside. A
/// play entering it can be kept away from terminals forever.
fn huddle_region(g: &Game, kept: &[Vec<usize>]) -> Vec<bool> {
    let mut inside: Vec<bool> = (0..g.vertex_count()).map(|v| !g.is_terminal(v)).collect();
    loop {
        let mut shrank = false;
        for v in 0..g.vertex_count() {
            if !inside[v] {
                continue;
            }
            let stays = |k: &usize| inside[g.successors(v)[*k]];
            let ok = match g.kind(v) {
                VertexKind::Stochastic => kept[v].iter().all(stays),
                _ => kept[v].iter().any(stays),
            };
            if !ok {
                inside[v] = false;
                shrank = true;
            }
        }
        if !shrank {
            break;
        }
    }
    inside
}

fn bfs_reach(g: &Game, kept: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if g.is_terminal(v) {
            continue;
        }
        for &k in &kept[v] {
            let w = g.successors(v)[k];
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Exhaust every support (stochastic vertices keep everything, controlled
/// ones any non-empty subset) under both certificate semantics, looking for
/// an equilibrium with values inside the box. All players must be optimists.
pub fn oracle_edgeset_existence(
    g: &Game,
    risk: &RiskAssignment,
    bounds: &ConstraintBox,
    cap: u64,
) -> Result<OracleOutcome, OracleError> {
    let modes = xr_modes(g, risk)?;
    if modes.iter().any(|m| *m != XrMode::Optimist) {
        return Err(OracleError::Game(GameError::Invalid(vec![
            "support certificates are enumerated for all-optimist games only".into(),
        ])));
    }
    let controlled: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.owner(v).is_some()).collect();
    let limits: Vec<usize> = controlled
        .iter()
        .map(|&v| 1usize.checked_shl(g.successors(v).len() as u32).map_or(usize::MAX, |x| x - 1))
        .collect();
    check_cap(&limits, cap)?;

    // Full-edge hostility values, used to price off-support deviations: a
    // support deters them exactly when each reachable vertex pays its owner
    // at least what the owner could extract under punishment.
    let mut hostility: Vec<Vec<Rational>> = Vec::new();
    for i in 0..g.player_count() {
        hostility.push(oracle_adversarial_table(g, i, XrMode::Optimist, cap)?);
    }

    let base = kept_everything(g);
    let mut odo = Odometer::new(limits);
    while let Some(digits) = odo.advance() {
        let mut kept = base.clone();
        for (&v, &d) in controlled.iter().zip(digits) {
            let mask = d + 1;
            kept[v] = (0..g.successors(v).len()).filter(|k| mask >> k & 1 == 1).collect();
        }
        let reach = bfs_reach(g, &kept, g.initial());
        let mut terminal_payoffs: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for (v, _) in reach.iter().enumerate().filter(|(_, r)| **r) {
            if let Some(x) = g.payoff(v) {
                terminal_payoffs.insert(x.to_vec());
            }
        }
        let huddle = huddle_region(g, &kept);
        let live = {
            let mut live: Vec<bool> = (0..g.vertex_count()).map(|v| g.is_terminal(v)).collect();
            loop {
                let mut grew = false;
                for v in 0..g.vertex_count() {
                    if !live[v] && kept[v].iter().any(|&k| live[g.successors(v)[k]]) {
                        live[v] = true;
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            live
        };
        for semantics in [EdgeSemantics::CommitOnFirstVisit, EdgeSemantics::StationaryUniform] {
            let mut outcomes: Vec<Vec<Rational>> = terminal_payoffs.iter().cloned().collect();
            let stuck = match semantics {
                // Committing play gets stranded iff some one-shot selection
                // within the support can trap it: exactly when the support
                // reaches a region it can huddle in forever.
                EdgeSemantics::CommitOnFirstVisit => {
                    (0..g.vertex_count()).any(|v| reach[v] && huddle[v])
                }
                // Re-randomizing play explores the whole support, so it is
                // stranded iff it reaches a vertex with no way out at all.
                EdgeSemantics::StationaryUniform => {
                    (0..g.vertex_count()).any(|v| reach[v] && !live[v])
                }
            };
            if stuck {
                outcomes.push(vec![Rational::zero(); g.player_count()]);
                outcomes.sort();
                outcomes.dedup();
            }
            if outcomes.is_empty() {
                continue;
            }
            let values = xr_vector(&outcomes, &modes);
            if !bounds.contains(g, &values) {
                continue;
            }
            // Off-support deviations are priced by full hostility.
            let deterred = (0..g.vertex_count()).all(|v| {
                !reach[v]
                    || g.owner(v).is_none_or(|i| hostility[i][v] <= values[i])
            });
            if !deterred {
                continue;
            }
            // Under re-randomizing semantics a player may also roam within
            // the support; committing play cannot beat its own outcome set.
            if semantics == EdgeSemantics::StationaryUniform {
                let roam_beats = (0..g.player_count()).any(|i| {
                    let mine = player_slots(g, i);
                    let limits: Vec<usize> = mine.iter().map(|&v| kept[v].len()).collect();
                    let mut odo = Odometer::new(limits);
                    let mut trial = kept.clone();
                    while let Some(digits) = odo.advance() {
                        for (&v, &k) in mine.iter().zip(digits) {
                            trial[v] = vec![kept[v][k]];
                        }
                        let val =
                            extreme(&outcome_support(g, &trial, g.initial()), i, XrMode::Optimist);
                        if val > values[i] {
                            return true;
                        }
                    }
                    for &v in &mine {
                        trial[v] = kept[v].clone();
                    }
                    false
                });
                if roam_beats {
                    continue;
                }
            }
            let mut support = EdgeSet::full(g);
            for &v in &controlled {
                for k in 0..g.successors(v).len() {
                    if !kept[v].contains(&k) {
                        support.remove(g.edge_id(v, k));
                    }
                }
            }
            return Ok(OracleOutcome::Yes {
                profile: StrategyProfile::EdgeSet(EdgeSetProfile { support, semantics }),
                values,
            });
        }
    }
    Ok(OracleOutcome::No)
}

/// A conjunction of three-literal clauses over DIMACS-style variables:
/// positive literal k means variable k, negative means its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeCnf {
    pub vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

/// Truth-table satisfiability, for formulas small enough to exhaust.
pub fn brute_sat(cnf: &ThreeCnf) -> Result<bool, OracleError> {
    if cnf.vars > SAT_VAR_CAP {
        return Err(OracleError::CapExceeded {
            count: 1u128 << cnf.vars.min(127),
            cap: 1 << SAT_VAR_CAP,
        });
    }
    let holds = |m: u32, lit: i32| {
        let v = lit.unsigned_abs() as usize - 1;
        (m >> v & 1 == 1) == (lit > 0)
    };
    Ok((0..1u32 << cnf.vars)
        .any(|m| cnf.clauses.iter().all(|cl| cl.iter().any(|&lit| holds(m, lit)))))
}

/// Read a DIMACS CNF file with clauses of at most three literals. Shorter
/// clauses are padded by repeating their last literal, which preserves
/// satisfiability.
pub fn parse_dimacs(text: &str) -> Result<ThreeCnf, String> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(format!("line {}: second header", lineno + 1));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let (vars, count) = match parts.as_slice() {
                ["cnf", v, c] => (
                    v.parse::<usize>().map_err(|_| format!("line {}: bad variable count", lineno + 1))?,
                    c.parse::<usize>().map_err(|_| format!("line {}: bad clause count", lineno + 1))?,
                ),
                _ => return Err(format!("line {}: expected `p cnf <vars> <clauses>`", lineno + 1)),
            };
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(format!("line {}: clause before the header", lineno + 1));
        };
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| format!("line {}: bad literal {:?}", lineno + 1, tok))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(format!("line {}: empty clause", lineno + 1));
                }
                if current.len() > 3 {
                    return Err(format!(
                        "line {}: clause has {} literals, at most 3 supported",
                        lineno + 1,
                        current.len()
                    ));
                }
                while current.len() < 3 {
                    current.push(*current.last().expect("clause is non-empty"));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(format!(
                        "line {}: literal {} out of range, only {} variables declared",
                        lineno + 1,
                        lit,
                        vars
                    ));
                }
                current.push(lit);
            }
        }
    }
    let Some((vars, declared)) = header else {
        return Err("missing `p cnf` header".into());
    };
    if !current.is_empty() {
        return Err("unterminated clause at end of input".into());
    }
    if clauses.len() != declared {
        return Err(format!(
            "header declares {} clauses but {} were given",
            declared,
            clauses.len()
        ));
    }
    Ok(ThreeCnf { vars, clauses })
}
