//! Builders for the small example games and profiles used across unit tests.

use crate::game::{Game, GameBuilder};
use crate::rational::{rat, rat_int, Rational};
use crate::strategy::{FiniteMemoryProfile, PositionalProfile};
use num::One;
use std::collections::BTreeMap;

/// One player ("circle"), a self-looping stochastic start, then a choice
/// between a safe payoff 1 and a 1/40 lottery on payoff 40.
pub fn lottery() -> Game {
    let mut b = GameBuilder::new();
    b.player("circle");
    b.stochastic("a", [("a", rat(1, 2)), ("b", rat(1, 2))]);
    b.controlled("b", "circle", ["c", "t3"]);
    b.stochastic("c", [("t1", rat(1, 40)), ("t2", rat(39, 40))]);
    b.terminal("t1", [("circle", rat_int(40))]);
    b.terminal("t2", [("circle", rat_int(0))]);
    b.terminal("t3", [("circle", rat_int(1))]);
    b.initial("a");
    b.build().unwrap()
}

/// Two players on a 2-cycle; each can exit to a terminal that favors the
/// other player.
pub fn two_exits() -> Game {
    let mut b = GameBuilder::new();
    b.player("circle").player("square");
    b.controlled("a", "circle", ["b", "t1"]);
    b.controlled("b", "square", ["a", "t2"]);
    b.terminal("t1", [("circle", rat_int(1)), ("square", rat_int(2))]);
    b.terminal("t2", [("circle", rat_int(2)), ("square", rat_int(1))]);
    b.initial("a");
    b.build().unwrap()
}

/// [`two_exits`] preceded by a public coin that decides who moves first.
pub fn two_exits_coin() -> Game {
    let mut b = GameBuilder::new();
    b.player("circle").player("square");
    b.stochastic("c", [("a", rat(1, 2)), ("b", rat(1, 2))]);
    b.controlled("a", "circle", ["b", "t1"]);
    b.controlled("b", "square", ["a", "t2"]);
    b.terminal("t1", [("circle", rat_int(1)), ("square", rat_int(2))]);
    b.terminal("t2", [("circle", rat_int(2)), ("square", rat_int(1))]);
    b.initial("c");
    b.build().unwrap()
}

fn memory_profile(
    g: &Game,
    states: &[&str],
    update: &[(&str, &str, &str)],
    output: &[(&str, &str, &str)],
) -> FiniteMemoryProfile {
    let vx = |id: &str| g.vertex_index(id).unwrap();
    let si = |name: &str| states.iter().position(|s| *s == name).unwrap();
    let mut u = BTreeMap::new();
    for &(s, vertex, t) in update {
        u.insert((si(s), vx(vertex)), si(t));
    }
    let mut o = BTreeMap::new();
    for &(s, vertex, to) in output {
        let v = vx(vertex);
        let k = g.successors(v).iter().position(|&w| w == vx(to)).unwrap();
        o.insert((si(s), v), vec![(k, Rational::one())]);
    }
    FiniteMemoryProfile {
        state_names: states.iter().map(|s| s.to_string()).collect(),
        initial: 0,
        update: u,
        output: o,
    }
}

/// Memory profile on [`two_exits_coin`]: whoever the coin picks exits right
/// away; if they refuse, the other player bounces the play back forever.
pub fn coin_profile(g: &Game) -> FiniteMemoryProfile {
    memory_profile(
        g,
        &["s0", "sa", "sb"],
        &[
            ("s0", "c", "s0"),
            ("s0", "a", "sa"),
            ("s0", "b", "sb"),
            ("sa", "a", "sa"),
            ("sa", "b", "sa"),
            ("sa", "c", "sa"),
            ("sb", "a", "sb"),
            ("sb", "b", "sb"),
            ("sb", "c", "sb"),
        ],
        &[
            ("s0", "a", "t1"),
            ("s0", "b", "t2"),
            ("sa", "a", "t1"),
            ("sa", "b", "a"),
            ("sb", "a", "b"),
            ("sb", "b", "t2"),
        ],
    )
}

/// Memory profile on [`two_exits_temptation`]: the player the coin picks
/// hands the play across, the other one exits, and whoever entered is paid
/// the larger reward. Refusing to exit is met with an endless bounce.
pub fn crossing_profile(g: &Game) -> FiniteMemoryProfile {
    memory_profile(
        g,
        &["s0", "sd", "se"],
        &[
            ("s0", "c", "s0"),
            ("s0", "d", "sd"),
            ("s0", "e", "se"),
            ("sd", "a", "sd"),
            ("sd", "b", "sd"),
            ("se", "a", "se"),
            ("se", "b", "se"),
        ],
        &[
            ("s0", "d", "a"),
            ("s0", "e", "b"),
            ("sd", "a", "b"),
            ("sd", "b", "t2"),
            ("se", "a", "t1"),
            ("se", "b", "a"),
        ],
    )
}

/// The profile on [`two_exits_temptation`] that pretends the temptation is
/// not there: each entry vertex walks in and takes its own exit.
pub fn naive_temptation_profile(g: &Game) -> PositionalProfile {
    let vx = |id: &str| g.vertex_index(id).unwrap();
    let mut p = PositionalProfile::new(g);
    for (from, to) in [("d", "a"), ("a", "t1"), ("e", "b"), ("b", "t2")] {
        let v = vx(from);
        p.choice[v] = g.successors(v).iter().position(|&w| w == vx(to));
    }
    p
}

/// [`two_exits_coin`] with an entry vertex per player that can defect to a
/// tempting terminal paying both players 2.
pub fn two_exits_temptation() -> Game {
    let mut b = GameBuilder::new();
    b.player("circle").player("square");
    b.stochastic("c", [("d", rat(1, 2)), ("e", rat(1, 2))]);
    b.controlled("d", "circle", ["t3", "a"]);
    b.controlled("e", "square", ["t3", "b"]);
    b.controlled("a", "circle", ["b", "t1"]);
    b.controlled("b", "square", ["a", "t2"]);
    b.terminal("t1", [("circle", rat_int(1)), ("square", rat_int(2))]);
    b.terminal("t2", [("circle", rat_int(2)), ("square", rat_int(1))]);
    b.terminal("t3", [("circle", rat_int(2)), ("square", rat_int(2))]);
    b.initial("c");
    b.build().unwrap()
}

#[cfg(test)]
mod fixture_pins {
    use super::*;
    use crate::json::{parse_strategy, serialize_game};
    use crate::strategy::StrategyProfile;

    fn fixture(name: &str) -> String {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
        std::fs::read_to_string(format!("{dir}/{name}")).unwrap()
    }

    /// The shipped fixture files stay byte-identical to the builders here.
    #[test]
    fn fixture_documents_match_the_builders() {
        for (name, game) in [
            ("lottery.json", lottery()),
            ("two_exits.json", two_exits()),
            ("two_exits_coin.json", two_exits_coin()),
            ("two_exits_temptation.json", two_exits_temptation()),
        ] {
            assert_eq!(fixture(name), serialize_game(&game), "{name} drifted");
        }
        let g = two_exits_coin();
        let p = parse_strategy(&fixture("coin_first_exit_profile.json"), &g).unwrap();
        assert_eq!(p, StrategyProfile::Memory(coin_profile(&g)));
        let g = two_exits_temptation();
        let p = parse_strategy(&fixture("crossing_profile.json"), &g).unwrap();
        assert_eq!(p, StrategyProfile::Memory(crossing_profile(&g)));
        let p = parse_strategy(&fixture("naive_temptation_profile.json"), &g).unwrap();
        assert_eq!(p, StrategyProfile::Positional(naive_temptation_profile(&g)));
    }
}
