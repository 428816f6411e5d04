//! Constrained equilibrium existence when every player is an optimist: is
//! there an equilibrium whose value vector lies inside a given box?
//!
//! Both deciders prune edges. A round evaluates the profile that randomizes
//! over the kept edges, finds the vertices where some owner's adversarial
//! value beats what the profile pays them, and severs every kept edge into
//! the region that cannot avoid those vertices; if the initial vertex itself
//! cannot avoid them the answer is No. The two routes differ in how the
//! profile treats revisits. With non-negative upper bounds, committing to the
//! first draw is safe and cycling is allowed. When some upper bound is
//! negative the players must terminate almost surely, so the profile
//! re-randomizes at every visit, odd rounds additionally sever the regions
//! that cannot cooperatively terminate, and a final pass strips the edges a
//! player could ride to dodge termination without changing anyone's value.

use crate::game::{reachable, EdgeSet, Game, GameError, VertexKind};
use crate::json::ConstraintBox;
use crate::qual::{
    adversarial_values, almost_sure_reach, committed_positive_payoffs, positive_attractor,
    stationary_positive_payoffs,
};
use crate::rational::Rational;
use crate::risk::{RiskAssignment, XrMode};
use crate::strategy::{EdgeSemantics, EdgeSetProfile};
use num::Zero;

/// Verdict of the constrained-existence deciders. `Yes` carries a support
/// whose induced profile is an equilibrium with the stated values, all
/// inside the requested box.
#[derive(Debug, Clone)]
pub enum SolveResult {
    Yes {
        profile: EdgeSetProfile,
        values: Vec<Rational>,
    },
    No,
}

impl SolveResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, SolveResult::Yes { .. })
    }
}

/// Dispatch on the box: committing semantics can only help when no upper
/// bound forbids the payoff of an endless play, so any negative upper bound
/// routes to the almost-surely-terminating decider.
pub fn solve_optimist(
    g: &Game,
    bounds: &ConstraintBox,
    risk: &RiskAssignment,
) -> Result<SolveResult, GameError> {
    if risk.player_count() != g.player_count() {
        return Err(GameError::Invalid(vec![format!(
            "risk assignment covers {} players but the game has {}",
            risk.player_count(),
            g.player_count()
        )]));
    }
    if !risk.is_all_optimist() {
        return Err(GameError::Invalid(vec![
            "the constrained solver requires every player to be an optimist".into(),
        ]));
    }
    if cycle_friendly(g, bounds) {
        solve_cycle_friendly(g, bounds)
    } else {
        solve_cycle_averse(g, bounds)
    }
}

fn cycle_friendly(g: &Game, bounds: &ConstraintBox) -> bool {
    bounds
        .upper_vec(g)
        .iter()
        .all(|y| y.as_ref().is_none_or(|y| *y >= Rational::zero()))
}

fn check_box(g: &Game, bounds: &ConstraintBox) -> Result<(), GameError> {
    let violations = bounds.check_against(g);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(GameError::Invalid(violations))
    }
}

/// Terminals whose payoff exceeds someone's upper bound. Any acceptable
/// profile must avoid them almost surely.
fn forbidden_terminals(g: &Game, upper: &[Option<Rational>]) -> Vec<bool> {
    (0..g.vertex_count())
        .map(|v| {
            g.payoff(v).is_some_and(|x| {
                x.iter()
                    .zip(upper)
                    .any(|(xi, y)| y.as_ref().is_some_and(|y| xi > y))
            })
        })
        .collect()
}

/// Adversarial optimist value of each controlled vertex for its owner, over
/// the full edge set. These price the off-support deviations: a deviator is
/// met with full hostility, so a support deters them exactly when it pays
/// the owner at least this much everywhere the play can go.
fn owner_values(g: &Game) -> Vec<Option<Rational>> {
    let mut val = vec![None; g.vertex_count()];
    for i in 0..g.player_count() {
        let vi = adversarial_values(g, i, XrMode::Optimist);
        for (v, slot) in val.iter_mut().enumerate() {
            if g.owner(v) == Some(i) {
                *slot = Some(vi[v].clone());
            }
        }
    }
    val
}

fn optimist_maxima(payoffs: &[Vec<Rational>], players: usize) -> Vec<Rational> {
    (0..players)
        .map(|i| {
            payoffs
                .iter()
                .map(|x| &x[i])
                .max()
                .expect("a payoff support is never empty")
                .clone()
        })
        .collect()
}

/// Controlled vertices whose owner's adversarial value beats what the
/// current support pays them: the launch pads of profitable deviations.
fn sore_spots(g: &Game, val: &[Option<Rational>], z: &[Rational]) -> Vec<bool> {
    (0..g.vertex_count())
        .map(|v| {
            g.owner(v).is_some_and(|i| {
                val[v].as_ref().expect("controlled vertices have adversarial values") > &z[i]
            })
        })
        .collect()
}

/// Remove every kept edge entering `region` from outside it. Sources inside
/// keep all their edges, so the region itself is untouched; sources outside
/// a positive attractor always retain a successor outside it (controlled
/// ones dodge by definition, stochastic ones never straddle the boundary).
fn sever_into(g: &Game, keep: &mut EdgeSet, region: &[bool]) -> usize {
    let crossing: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| !region[v])
        .flat_map(|v| {
            keep.kept(g, v)
                .filter(|&(_, w)| region[w])
                .map(|(k, _)| g.edge_id(v, k))
                .collect::<Vec<_>>()
        })
        .collect();
    for &e in &crossing {
        keep.remove(e);
    }
    crossing.len()
}

/// Decider for boxes whose upper bounds are all non-negative. The witness
/// has everyone draw a kept edge per vertex once and repeat it forever;
/// endless plays pay zero, which no upper bound forbids here.
pub fn solve_cycle_friendly(g: &Game, bounds: &ConstraintBox) -> Result<SolveResult, GameError> {
    check_box(g, bounds)?;
    if !cycle_friendly(g, bounds) {
        return Err(GameError::Invalid(vec![
            "a negative upper bound needs the almost-surely-terminating decider".into(),
        ]));
    }
    let upper = bounds.upper_vec(g);
    let lower = bounds.lower_vec(g);
    let val = owner_values(g);

    let mut keep = EdgeSet::full(g);
    let bad = forbidden_terminals(g, &upper);
    let hot = positive_attractor(g, &keep, &bad);
    if hot[g.initial()] {
        return Ok(SolveResult::No);
    }
    sever_into(g, &mut keep, &hot);

    let values = loop {
        let z = optimist_maxima(&committed_positive_payoffs(g, &keep), g.player_count());
        let hot = positive_attractor(g, &keep, &sore_spots(g, &val, &z));
        if hot[g.initial()] {
            return Ok(SolveResult::No);
        }
        if sever_into(g, &mut keep, &hot) == 0 {
            break z;
        }
    };

    let floor_met = values
        .iter()
        .zip(&lower)
        .all(|(zi, x)| x.as_ref().is_none_or(|x| zi >= x));
    Ok(if floor_met {
        SolveResult::Yes {
            profile: EdgeSetProfile {
                support: keep,
                semantics: EdgeSemantics::CommitOnFirstVisit,
            },
            values,
        }
    } else {
        SolveResult::No
    })
}

/// Decider for boxes with a negative upper bound, which force almost-sure
/// termination. The witness re-randomizes at every visit; odd rounds sever
/// the regions from which termination cannot be guaranteed even with
/// everyone cooperating.
pub fn solve_cycle_averse(g: &Game, bounds: &ConstraintBox) -> Result<SolveResult, GameError> {
    check_box(g, bounds)?;
    if cycle_friendly(g, bounds) {
        return Err(GameError::Invalid(vec![
            "every upper bound is non-negative; use the committing decider".into(),
        ]));
    }
    let upper = bounds.upper_vec(g);
    let lower = bounds.lower_vec(g);
    let val = owner_values(g);
    let controlled: Vec<bool> = (0..g.vertex_count())
        .map(|v| g.owner(v).is_some())
        .collect();
    let nobody = vec![false; g.vertex_count()];
    let terminals = g.terminal_mask();

    let mut keep = EdgeSet::full(g);
    let bad = forbidden_terminals(g, &upper);
    let hot = positive_attractor(g, &keep, &bad);
    if hot[g.initial()] {
        return Ok(SolveResult::No);
    }
    sever_into(g, &mut keep, &hot);

    // Alternate deviation rounds (even) and termination rounds (odd) until a
    // full round of each removes nothing. A termination round's region is
    // already closed under the positive attractor, so it is severed as is.
    let mut z: Option<Vec<Rational>> = None;
    let mut round = 0usize;
    let mut removed_last = usize::MAX;
    loop {
        round += 1;
        let removed = if round.is_multiple_of(2) {
            let zz = optimist_maxima(&stationary_positive_payoffs(g, &keep), g.player_count());
            let hot = positive_attractor(g, &keep, &sore_spots(g, &val, &zz));
            if hot[g.initial()] {
                return Ok(SolveResult::No);
            }
            z = Some(zz);
            sever_into(g, &mut keep, &hot)
        } else {
            let win = almost_sure_reach(g, &keep, &controlled, &nobody, &terminals).win;
            let limbo: Vec<bool> = win.iter().map(|w| !w).collect();
            if limbo[g.initial()] {
                return Ok(SolveResult::No);
            }
            sever_into(g, &mut keep, &limbo)
        };
        if removed == 0 && removed_last == 0 {
            break;
        }
        removed_last = removed;
    }
    let values = z.expect("a deviation round always runs before the loop settles");

    let floor_met = values
        .iter()
        .zip(&lower)
        .all(|(zi, x)| x.as_ref().is_none_or(|x| zi >= x));
    if !floor_met {
        return Ok(SolveResult::No);
    }

    let keep = final_refinements(g, keep);
    debug_assert_eq!(
        optimist_maxima(&stationary_positive_payoffs(g, &keep), g.player_count()),
        values,
        "refinements must not move any value"
    );
    Ok(SolveResult::Yes {
        profile: EdgeSetProfile {
            support: keep,
            semantics: EdgeSemantics::StationaryUniform,
        },
        values,
    })
}

/// Strip redundant edges from a support that terminates almost surely. An
/// edge goes when its source has another kept choice, everything its target
/// leads to stays reachable from the start without it, and its source can
/// still reach some terminal without it. This closes the last deviation
/// loophole of the re-randomizing profile: an edge a player could take to
/// keep the play alive while the rest of the support already covers every
/// payoff. Removal preserves the reachable terminal set, hence every value.
pub fn final_refinements(g: &Game, mut keep: EdgeSet) -> EdgeSet {
    while let Some(e) = removable_edge(g, &keep) {
        keep.remove(e);
    }
    keep
}

fn removable_edge(g: &Game, keep: &EdgeSet) -> Option<usize> {
    let terminals = g.terminal_mask();
    for u in 0..g.vertex_count() {
        if matches!(g.kind(u), VertexKind::Stochastic) || keep.kept_count(g, u) < 2 {
            continue;
        }
        let kept: Vec<(usize, usize)> = keep.kept(g, u).collect();
        for (k, v) in kept {
            let e = g.edge_id(u, k);
            let mut without = keep.clone();
            without.remove(e);
            let from_u = reachable(g, &without, u);
            if !from_u.iter().zip(&terminals).any(|(r, t)| *r && *t) {
                continue;
            }
            let from_v = reachable(g, &without, v);
            let from_start = reachable(g, &without, g.initial());
            let covered = (0..g.vertex_count())
                .all(|t| !(terminals[t] && from_v[t]) || from_start[t]);
            if covered {
                return Some(e);
            }
        }
    }
    None
}
