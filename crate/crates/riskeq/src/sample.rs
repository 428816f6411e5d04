//! Seeded random instances for stress tests: games, risk assignments,
//! constraint boxes, stationary profiles, and two-player arenas. Every
//! generator is deterministic in the caller's RNG, so a fixed seed pins the
//! whole batch.

use crate::game::{Game, GameBuilder};
use crate::json::ConstraintBox;
use crate::rational::{rat, Rational};
use crate::risk::{RiskAssignment, RiskTag, XrMode};
use crate::strategy::StationaryProfile;
use rand::seq::index::sample;
use rand::Rng;

const ROSTER: [&str; 8] = [
    "circle", "square", "triangle", "diamond", "star", "hex", "ring", "cross",
];

/// Random game with the requested shape. Non-terminal vertices are named
/// v0, v1, ... (v0 is initial), terminals t0, t1, ...; roughly a quarter of
/// the non-terminals come out stochastic, out-degrees run 1 to 3 with
/// distinct targets (self-loops allowed), and payoff numerators stay within
/// [-8, 8] over denominators 1 to 4 (non-negative unless allowed).
pub fn random_game(
    rng: &mut impl Rng,
    players: usize,
    non_terminals: usize,
    terminals: usize,
    allow_negative: bool,
) -> Game {
    assert!(
        (1..=ROSTER.len()).contains(&players) && non_terminals >= 1 && terminals >= 1,
        "unusable shape"
    );
    let total = non_terminals + terminals;
    let id_of = |ix: usize| {
        if ix < non_terminals {
            format!("v{ix}")
        } else {
            format!("t{}", ix - non_terminals)
        }
    };
    let mut b = GameBuilder::new();
    for name in ROSTER.iter().take(players) {
        b.player(*name);
    }
    for v in 0..non_terminals {
        let degree = rng.random_range(1..=3.min(total));
        let picks = sample(rng, total, degree);
        if rng.random_ratio(1, 4) {
            let weights: Vec<i64> = (0..degree).map(|_| rng.random_range(1..=4)).collect();
            let mass: i64 = weights.iter().sum();
            b.stochastic(
                id_of(v),
                picks
                    .iter()
                    .zip(&weights)
                    .map(|(ix, &w)| (id_of(ix), rat(w, mass))),
            );
        } else {
            let owner = ROSTER[rng.random_range(0..players)];
            b.controlled(id_of(v), owner, picks.iter().map(id_of));
        }
    }
    let low = if allow_negative { -8 } else { 0 };
    for t in 0..terminals {
        let payoff: Vec<(&str, Rational)> = ROSTER
            .iter()
            .take(players)
            .map(|&p| (p, rat(rng.random_range(low..=8), rng.random_range(1..=4))))
            .collect();
        b.terminal(id_of(non_terminals + t), payoff);
    }
    b.initial("v0");
    b.build().expect("generated games are structurally valid")
}

/// Fair coin per player between pessimist and optimist.
pub fn random_risk(rng: &mut impl Rng, players: usize) -> RiskAssignment {
    let tags = (0..players)
        .map(|_| {
            RiskTag::Extreme(if rng.random_bool(0.5) {
                XrMode::Pessimist
            } else {
                XrMode::Optimist
            })
        })
        .collect();
    RiskAssignment::new(None, tags)
}

/// Random non-empty interval constraints: each player independently gets no
/// bound, one side, or both sides (ordered), with half-integer endpoints
/// spanning the generator's payoff range.
pub fn random_box(rng: &mut impl Rng, g: &Game) -> ConstraintBox {
    fn pick(rng: &mut impl Rng) -> Rational {
        rat(rng.random_range(-10..=12), 2)
    }
    let mut cb = ConstraintBox::unconstrained();
    for p in g.players() {
        match rng.random_range(0..4) {
            0 => {}
            1 => {
                cb.lower.insert(p.clone(), pick(rng));
            }
            2 => {
                cb.upper.insert(p.clone(), pick(rng));
            }
            _ => {
                let mut a = pick(rng);
                let mut z = pick(rng);
                if a > z {
                    std::mem::swap(&mut a, &mut z);
                }
                cb.lower.insert(p.clone(), a);
                cb.upper.insert(p.clone(), z);
            }
        }
    }
    cb
}

/// Two-player deterministic arena: every vertex controlled, out-degrees 1 to
/// 3, plus one or two target vertices. Returns the arena and the targets as
/// indices into it. The first player ("runner") is the one the reachability
/// reduction pays at the targets.
pub fn random_arena(rng: &mut impl Rng, vertices: usize) -> (Game, Vec<usize>) {
    assert!(vertices >= 2, "an arena needs at least two vertices");
    let mut b = GameBuilder::new();
    b.player("runner").player("blocker");
    for v in 0..vertices {
        let owner = if rng.random_bool(0.5) { "runner" } else { "blocker" };
        let degree = rng.random_range(1..=3.min(vertices));
        let picks = sample(rng, vertices, degree);
        b.controlled(format!("v{v}"), owner, picks.iter().map(|w| format!("v{w}")));
    }
    b.initial("v0");
    let arena = b.build().expect("generated arenas are structurally valid");
    let goal_count = rng.random_range(1..=2);
    let targets = sample(rng, vertices, goal_count)
        .iter()
        .map(|k| {
            arena
                .vertex_index(&format!("v{k}"))
                .expect("every sampled vertex was just built")
        })
        .collect();
    (arena, targets)
}

/// Random stationary profile: each controlled vertex randomizes over a
/// random non-empty subset of its successors with random positive weights.
pub fn random_stationary(rng: &mut impl Rng, g: &Game) -> StationaryProfile {
    let mut p = StationaryProfile::new(g);
    for v in 0..g.vertex_count() {
        if g.owner(v).is_none() {
            continue;
        }
        let degree = g.successors(v).len();
        let size = rng.random_range(1..=degree);
        let mut positions: Vec<usize> = sample(rng, degree, size).iter().collect();
        positions.sort_unstable();
        p.rows[v] = weigh(rng, &positions);
    }
    p
}

/// The same supports as `p`, with fresh random probabilities.
pub fn rescale_stationary(
    rng: &mut impl Rng,
    g: &Game,
    p: &StationaryProfile,
) -> StationaryProfile {
    let mut out = StationaryProfile::new(g);
    for (v, row) in p.rows.iter().enumerate() {
        if !row.is_empty() {
            let positions: Vec<usize> = row.iter().map(|&(k, _)| k).collect();
            out.rows[v] = weigh(rng, &positions);
        }
    }
    out
}

fn weigh(rng: &mut impl Rng, positions: &[usize]) -> Vec<(usize, Rational)> {
    let weights: Vec<i64> = (0..positions.len()).map(|_| rng.random_range(1..=9)).collect();
    let mass: i64 = weights.iter().sum();
    positions
        .iter()
        .zip(&weights)
        .map(|(&k, &w)| (k, rat(w, mass)))
        .collect()
}
