//! Building one stationary extreme-risk equilibrium for games with
//! non-negative payoffs, by iterated support refinement.
//!
//! Starting from the full edge set, each round evaluates the uniform profile
//! over the current support and asks every pessimist in turn: can you force,
//! almost surely and without leaving the support, strictly more than the
//! profile gives you? The first player who can marks the region where they
//! cannot, and every reachable edge into that region is severed, which both
//! removes the threat and raises that player's delivered value. When no
//! pessimist can force an improvement the support is returned; optimists
//! need no rounds of their own because the maximum of the payoff set is
//! theirs already.

use crate::game::{reachable, EdgeSet, Game, GameError};
use crate::qual::{
    deviation_mdp_within_support, mdp_almost_sure_reach, stationary_positive_payoffs,
};
use crate::rational::Rational;
use crate::risk::{RiskAssignment, XrMode};
use crate::strategy::{EdgeSemantics, EdgeSetProfile};
use num::Zero;

/// A constructed equilibrium: the support to randomize over, the extreme-risk
/// value it delivers per player, and the value snapshots of every refinement
/// round (the last snapshot equals `values`).
#[derive(Debug, Clone)]
pub struct XrseOutcome {
    pub profile: EdgeSetProfile,
    pub values: Vec<Rational>,
    /// One entry per round, each the per-player value of the round's
    /// support. Pessimist coordinates never decrease along this sequence.
    pub history: Vec<Vec<Rational>>,
}

fn support_values(g: &Game, keep: &EdgeSet, modes: &[XrMode]) -> Vec<Rational> {
    let payoffs = stationary_positive_payoffs(g, keep);
    modes
        .iter()
        .enumerate()
        .map(|(i, mode)| {
            let column = payoffs.iter().map(|x| &x[i]);
            match mode {
                XrMode::Pessimist => column.min(),
                XrMode::Optimist => column.max(),
            }
            .expect("a payoff support is never empty")
            .clone()
        })
        .collect()
}

/// Construct a stationary extreme-risk equilibrium. Requires every payoff to
/// be non-negative and every player to carry an extreme tag; under those
/// hypotheses the refinement loop always lands on an equilibrium support.
pub fn construct_xrse(g: &Game, risk: &RiskAssignment) -> Result<XrseOutcome, GameError> {
    if risk.player_count() != g.player_count() {
        return Err(GameError::Invalid(vec![format!(
            "risk assignment covers {} players but the game has {}",
            risk.player_count(),
            g.player_count()
        )]));
    }
    let modes: Vec<XrMode> = (0..g.player_count())
        .map(|i| {
            risk.xr_mode(i).ok_or_else(|| {
                GameError::Invalid(vec![format!(
                    "player {} is entropic; the construction handles extreme players only",
                    g.players()[i]
                )])
            })
        })
        .collect::<Result<_, _>>()?;
    for v in 0..g.vertex_count() {
        if let Some(x) = g.payoff(v) {
            if let Some(i) = x.iter().position(|c| *c < Rational::zero()) {
                return Err(GameError::Invalid(vec![format!(
                    "terminal {} pays {} a negative amount; the construction requires \
                     non-negative payoffs",
                    g.vertex_id(v),
                    g.players()[i]
                )]));
            }
        }
    }

    let pessimists = risk.pessimists();
    let mut keep = EdgeSet::full(g);
    let mut history = Vec::new();
    loop {
        let values = support_values(g, &keep, &modes);
        history.push(values.clone());
        let reach = reachable(g, &keep, g.initial());

        // First pessimist who can force, within the support, almost surely
        // more than the support pays them.
        let escape = pessimists.iter().find_map(|&i| {
            let mdp = deviation_mdp_within_support(g, &keep, i);
            let target: Vec<bool> = (0..g.vertex_count())
                .map(|v| g.payoff(v).is_some_and(|x| x[i] > values[i]))
                .collect();
            let (win, _) = mdp_almost_sure_reach(&mdp, &target);
            win[g.initial()].then_some(win)
        });
        let Some(win) = escape else {
            let values = history.last().expect("at least one round ran").clone();
            return Ok(XrseOutcome {
                profile: EdgeSetProfile {
                    support: keep,
                    semantics: EdgeSemantics::StationaryUniform,
                },
                values,
                history,
            });
        };

        // Sever every reachable edge from the escaping side into the
        // complement. Vertices that cannot escape keep all their edges (a
        // non-escaping vertex never has an escaping successor to lose, and
        // chance vertices that escape only ever lead to escaping vertices),
        // so the support stays valid.
        let mut removed = 0usize;
        for v in 0..g.vertex_count() {
            if !reach[v] || !win[v] {
                continue;
            }
            let into: Vec<usize> = keep
                .kept(g, v)
                .filter(|&(_, w)| !win[w])
                .map(|(k, _)| g.edge_id(v, k))
                .collect();
            for e in into {
                keep.remove(e);
                removed += 1;
            }
        }
        // The value a pessimist falls back to is realized somewhere the
        // profile can reach, and that place is in the complement, so an
        // escaping initial vertex always has a crossing edge to lose.
        assert!(removed > 0, "an escaping player always has an edge to sever");
        debug_assert!(keep.is_valid_support(g));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameBuilder;
    use crate::rational::{rat, rat_int};
    use crate::risk::RiskTag;
    use crate::strategy::StrategyProfile;
    use crate::testutil::{lottery, two_exits, two_exits_coin, two_exits_temptation};
    use crate::verify::verify_profile;

    fn assert_is_equilibrium(g: &Game, out: &XrseOutcome, risk: &RiskAssignment) {
        let p = StrategyProfile::EdgeSet(out.profile.clone());
        let report = verify_profile(g, &p, risk, None);
        // The certificate checker wants optimists; cross-check pessimist
        // outputs by expanding to the uniform stationary profile instead.
        let report = match report {
            Ok(r) => r,
            Err(_) => {
                let sigma = crate::strategy::StationaryProfile::uniform_over(g, &out.profile.support);
                verify_profile(g, &StrategyProfile::Stationary(sigma), risk, None).unwrap()
            }
        };
        assert!(report.is_equilibrium, "{:?}", report);
        assert_eq!(report.xr, out.values);
    }

    #[test]
    fn cycle_with_two_exits_severs_one_exit() {
        let g = two_exits();
        let risk = RiskAssignment::all_pessimist(2);
        let out = construct_xrse(&g, &risk).unwrap();
        // The first pessimist can force the opponent's exit and gets it;
        // the remaining support feeds everything through that exit.
        assert_eq!(out.values, vec![rat_int(2), rat_int(1)]);
        let a = g.vertex_index("a").unwrap();
        assert!(!out.profile.support.contains(g.edge_id(a, 1)), "a -> t1 should be gone");
        assert_eq!(out.profile.support.count(), 3);
        assert_is_equilibrium(&g, &out, &risk);
    }

    #[test]
    fn coin_version_cuts_both_refusals() {
        let g = two_exits_coin();
        let risk = RiskAssignment::all_pessimist(2);
        let out = construct_xrse(&g, &risk).unwrap();
        assert_is_equilibrium(&g, &out, &risk);
        // Pessimist values never decrease between rounds.
        for pair in out.history.windows(2) {
            for (before, after) in pair[0].iter().zip(&pair[1]) {
                assert!(before <= after);
            }
        }
    }

    #[test]
    fn all_optimists_keep_the_full_support() {
        let g = two_exits_temptation();
        let risk = RiskAssignment::all_optimist(2);
        let out = construct_xrse(&g, &risk).unwrap();
        assert_eq!(out.profile.support.count(), g.edge_count());
        assert_eq!(out.values, vec![rat_int(2), rat_int(2)]);
        assert_eq!(out.history.len(), 1);
        assert_is_equilibrium(&g, &out, &risk);
    }

    #[test]
    fn single_player_lottery_prefers_the_sure_exit() {
        let g = lottery();
        let risk = RiskAssignment::all_pessimist(1);
        let out = construct_xrse(&g, &risk).unwrap();
        // Keeping the gamble leaves payoff 0 in the support, so the
        // construction cuts down to the safe exit worth 1.
        assert_eq!(out.values, vec![rat_int(1)]);
        assert_is_equilibrium(&g, &out, &risk);
    }

    #[test]
    fn rejects_negative_payoffs_and_entropic_players() {
        let mut b = GameBuilder::new();
        b.player("circle");
        b.controlled("a", "circle", ["t"]);
        b.terminal("t", [("circle", rat_int(-1))]);
        b.initial("a");
        let g = b.build().unwrap();
        let err = construct_xrse(&g, &RiskAssignment::all_pessimist(1)).unwrap_err();
        assert!(err.to_string().contains("non-negative"), "{err}");

        let g = two_exits();
        let risk = RiskAssignment::new(
            Some(crate::risk::Base::NaturalE),
            vec![RiskTag::Entropic(rat(1, 2)), RiskTag::Extreme(XrMode::Pessimist)],
        );
        let err = construct_xrse(&g, &risk).unwrap_err();
        assert!(err.to_string().contains("entropic"), "{err}");
    }
}
