//! Qualitative winning-region analyses: attractors, safety regions,
//! almost-sure reachability, and the threshold engine built on them.
//!
//! Everything in this module is support-determined. Only the set of kept
//! edges matters; exact probabilities never enter any computation, which is
//! what keeps the whole pipeline inside exact arithmetic.

use crate::game::{backward_reachable, reachable, EdgeSet, Game, VertexKind};
use crate::rational::Rational;
use crate::risk::XrMode;
use num::Zero;
use std::collections::BTreeSet;

/// Least set containing `target` and closed under backward derivation over
/// the kept edges: an existential vertex joins once one kept successor is in,
/// a universal vertex joins once all of them are. Terminals join only through
/// `target`.
///
/// A universal non-terminal without kept successors joins immediately (it
/// cannot avoid anything); valid supports never produce one.
pub fn attractor_with(g: &Game, keep: &EdgeSet, target: &[bool], exist: &[bool]) -> Vec<bool> {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    let mut pending = vec![0usize; n];
    let mut queue: Vec<usize> = Vec::new();
    for v in 0..n {
        if target[v] {
            inside[v] = true;
            queue.push(v);
        } else if !g.is_terminal(v) && !exist[v] {
            pending[v] = keep.kept_count(g, v);
            if pending[v] == 0 {
                inside[v] = true;
                queue.push(v);
            }
        }
    }
    while let Some(w) = queue.pop() {
        for &(v, k) in g.predecessors(w) {
            if inside[v] || g.is_terminal(v) || !keep.contains(g.edge_id(v, k)) {
                continue;
            }
            if exist[v] {
                inside[v] = true;
                queue.push(v);
            } else {
                pending[v] -= 1;
                if pending[v] == 0 {
                    inside[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    inside
}

/// Vertices from which every strategy profile over the kept edges reaches
/// `target` with positive probability: stochastic vertices are existential
/// (any branch infects), controlled vertices universal (one escaping choice
/// is enough to dodge).
pub fn positive_attractor(g: &Game, keep: &EdgeSet, target: &[bool]) -> Vec<bool> {
    let exist: Vec<bool> = (0..g.vertex_count())
        .map(|v| matches!(g.kind(v), VertexKind::Stochastic))
        .collect();
    attractor_with(g, keep, target, &exist)
}

/// Greatest set disjoint from `avoid` in which every controlled vertex keeps
/// some edge inside and every stochastic vertex keeps all of them inside.
/// Terminals outside `avoid` belong to the set. Exact complement of
/// [`positive_attractor`].
pub fn cooperative_safety(g: &Game, keep: &EdgeSet, avoid: &[bool]) -> Vec<bool> {
    positive_attractor(g, keep, avoid).iter().map(|&b| !b).collect()
}

/// Greatest region avoiding `bad` in which `controller` vertices can choose
/// to stay and every other vertex is forced to stay. Inside it no play ever
/// touches `bad`, no matter what the remaining vertices do.
pub fn sure_safe_region(g: &Game, keep: &EdgeSet, bad: &[bool], controller: &[bool]) -> Vec<bool> {
    let exist: Vec<bool> = (0..g.vertex_count())
        .map(|v| !controller[v] && !g.is_terminal(v))
        .collect();
    attractor_with(g, keep, bad, &exist).iter().map(|&b| !b).collect()
}

/// Outcome of an almost-sure reachability analysis.
pub struct ReachResult {
    pub win: Vec<bool>,
    /// Kept-successor position to take at each winning `controller` vertex.
    /// Following it reaches the target with probability 1 from anywhere in
    /// `win`; entries elsewhere are `None`.
    pub policy: Vec<Option<usize>>,
}

/// Vertices from which the `controller` side can reach `target` with
/// probability 1 over the kept edges, whatever the `hostile` vertices do.
/// Every other non-terminal vertex acts as chance: all of its kept edges are
/// taken with positive probability.
///
/// Greatest fixpoint of a least fixpoint. The inner pass ranks vertices by
/// how they make progress: controller picks a ranked-down successor, hostile
/// has only ranked-down successors, chance keeps all successors inside the
/// outer candidate and has some ranked-down branch. The outer pass shrinks
/// the candidate until it stabilizes.
pub fn almost_sure_reach(
    g: &Game,
    keep: &EdgeSet,
    controller: &[bool],
    hostile: &[bool],
    target: &[bool],
) -> ReachResult {
    let n = g.vertex_count();
    let mut x: Vec<bool> = vec![true; n];
    let mut policy: Vec<Option<usize>> = vec![None; n];
    loop {
        let mut y: Vec<bool> = target.to_vec();
        policy.fill(None);
        loop {
            let mut grew = false;
            for v in 0..n {
                if y[v] || !x[v] || g.is_terminal(v) {
                    continue;
                }
                if controller[v] {
                    if let Some((k, _)) = keep.kept(g, v).find(|&(_, w)| y[w]) {
                        y[v] = true;
                        policy[v] = Some(k);
                        grew = true;
                    }
                } else if hostile[v] {
                    let mut any = false;
                    let mut all = true;
                    for (_, w) in keep.kept(g, v) {
                        any = true;
                        all &= y[w];
                    }
                    if any && all {
                        y[v] = true;
                        grew = true;
                    }
                } else {
                    let mut any = false;
                    let mut stays = true;
                    let mut progresses = false;
                    for (_, w) in keep.kept(g, v) {
                        any = true;
                        stays &= x[w];
                        progresses |= y[w];
                    }
                    if any && stays && progresses {
                        y[v] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if y == x {
            return ReachResult { win: x, policy };
        }
        x = y;
    }
}

/// Payoff vectors arising with positive probability when everybody plays a
/// stationary strategy with exactly this support: the payoffs of reachable
/// terminals, plus the zero vector when some reachable vertex cannot reach
/// any terminal at all (from there re-randomization never escapes).
/// Canonically sorted and deduplicated.
pub fn stationary_positive_payoffs(g: &Game, support: &EdgeSet) -> Vec<Vec<Rational>> {
    let seen = reachable(g, support, g.initial());
    let term_reach = backward_reachable(g, support, &g.terminal_mask());
    let mut set: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for (v, ok) in seen.iter().enumerate() {
        if *ok {
            if let Some(x) = g.payoff(v) {
                set.insert(x.to_vec());
            }
        }
    }
    if (0..g.vertex_count()).any(|v| seen[v] && !term_reach[v]) {
        set.insert(vec![Rational::zero(); g.player_count()]);
    }
    set.into_iter().collect()
}

/// Payoff vectors arising with positive probability when every vertex commits
/// once and for all to one kept edge, drawn with positive probability from
/// its kept set. Reachable terminals all qualify (commit along a simple
/// path); the zero vector qualifies exactly when a reachable vertex can enter
/// a region whose committed choices trap the play away from all terminals,
/// which is [`cooperative_safety`] against the terminals.
pub fn committed_positive_payoffs(g: &Game, keep: &EdgeSet) -> Vec<Vec<Rational>> {
    let seen = reachable(g, keep, g.initial());
    let mut set: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for (v, ok) in seen.iter().enumerate() {
        if *ok {
            if let Some(x) = g.payoff(v) {
                set.insert(x.to_vec());
            }
        }
    }
    let trap = cooperative_safety(g, keep, &g.terminal_mask());
    if (0..g.vertex_count()).any(|v| seen[v] && trap[v]) {
        set.insert(vec![Rational::zero(); g.player_count()]);
    }
    set.into_iter().collect()
}

/// One state of a decision process distilled from a game: the analyzed player
/// resolves `Choice` states, `Chance` states branch with positive probability
/// to every listed successor, `Stop` states absorb and pay.
#[derive(Clone, Debug, PartialEq)]
pub enum MdpState {
    Choice(Vec<usize>),
    Chance(Vec<usize>),
    Stop(Rational),
}

/// Decision process over abstract state indices.
pub struct InducedMdp {
    pub states: Vec<MdpState>,
    pub initial: usize,
}

impl InducedMdp {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        match &self.states[s] {
            MdpState::Choice(w) | MdpState::Chance(w) => w,
            MdpState::Stop(_) => &[],
        }
    }

    pub fn is_stop(&self, s: usize) -> bool {
        matches!(self.states[s], MdpState::Stop(_))
    }
}

/// The decision process player `i` faces against a stationary profile with
/// this support: `i`'s own vertices keep the full original action set while
/// every other vertex, stochastic or not, behaves as chance over its kept
/// edges. States are indexed by vertex.
pub fn deviation_mdp_from_support(g: &Game, keep: &EdgeSet, i: usize) -> InducedMdp {
    let states = (0..g.vertex_count())
        .map(|v| match g.kind(v) {
            VertexKind::Terminal(x) => MdpState::Stop(x[i].clone()),
            VertexKind::Controlled(j) if *j == i => MdpState::Choice(g.successors(v).to_vec()),
            _ => MdpState::Chance(keep.kept(g, v).map(|(_, w)| w).collect()),
        })
        .collect();
    InducedMdp { states, initial: g.initial() }
}

/// Like [`deviation_mdp_from_support`], but `i` too is confined to the kept
/// edges. This is the right process for reasoning about what a player can do
/// without ever leaving an agreed support.
pub fn deviation_mdp_within_support(g: &Game, keep: &EdgeSet, i: usize) -> InducedMdp {
    let states = (0..g.vertex_count())
        .map(|v| match g.kind(v) {
            VertexKind::Terminal(x) => MdpState::Stop(x[i].clone()),
            VertexKind::Controlled(j) if *j == i => {
                MdpState::Choice(keep.kept(g, v).map(|(_, w)| w).collect())
            }
            _ => MdpState::Chance(keep.kept(g, v).map(|(_, w)| w).collect()),
        })
        .collect();
    InducedMdp { states, initial: g.initial() }
}

/// States from which the chooser reaches `target` with probability 1.
/// Same fixpoint as [`almost_sure_reach`] without a hostile side. Also
/// returns the choice to take at each winning `Choice` state.
pub fn mdp_almost_sure_reach(m: &InducedMdp, target: &[bool]) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = m.len();
    let mut x: Vec<bool> = vec![true; n];
    let mut policy: Vec<Option<usize>> = vec![None; n];
    loop {
        let mut y: Vec<bool> = target.to_vec();
        policy.fill(None);
        loop {
            let mut grew = false;
            for s in 0..n {
                if y[s] || !x[s] {
                    continue;
                }
                match &m.states[s] {
                    MdpState::Stop(_) => {}
                    MdpState::Choice(succ) => {
                        if let Some(k) = succ.iter().position(|&w| y[w]) {
                            y[s] = true;
                            policy[s] = Some(k);
                            grew = true;
                        }
                    }
                    MdpState::Chance(succ) => {
                        if !succ.is_empty()
                            && succ.iter().all(|&w| x[w])
                            && succ.iter().any(|&w| y[w])
                        {
                            y[s] = true;
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if y == x {
            return (x, policy);
        }
        x = y;
    }
}

/// Greatest set of states avoiding `bad` in which every `Choice` state keeps
/// some successor inside and every `Chance` state keeps all of them inside.
/// `Stop` states qualify exactly when they are not bad.
pub fn mdp_sure_safe(m: &InducedMdp, bad: &[bool]) -> Vec<bool> {
    let n = m.len();
    let mut safe: Vec<bool> = (0..n).map(|s| !bad[s]).collect();
    loop {
        let mut shrunk = false;
        for s in 0..n {
            if !safe[s] {
                continue;
            }
            let keep = match &m.states[s] {
                MdpState::Stop(_) => true,
                MdpState::Choice(succ) => succ.iter().any(|&w| safe[w]),
                MdpState::Chance(succ) => succ.iter().all(|&w| safe[w]),
            };
            if !keep {
                safe[s] = false;
                shrunk = true;
            }
        }
        if !shrunk {
            break;
        }
    }
    safe
}

/// States that can reach the target set along some path. Every chance branch
/// has positive probability, so plain graph reachability is exact here.
fn mdp_can_reach(m: &InducedMdp, target: &[bool]) -> Vec<bool> {
    let n = m.len();
    let mut seen = target.to_vec();
    loop {
        let mut grew = false;
        for s in 0..n {
            if !seen[s] && m.successors(s).iter().any(|&w| seen[w]) {
                seen[s] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    seen
}

/// Choice policy that walks toward `target` along shortest paths, staying
/// put (first successor inside) once `stay_in` holds.
fn mdp_policy_toward(m: &InducedMdp, target: &[bool], stay_in: Option<&[bool]>) -> Vec<Option<usize>> {
    let n = m.len();
    let mut dist: Vec<usize> = (0..n).map(|s| if target[s] { 0 } else { usize::MAX }).collect();
    let mut frontier: Vec<usize> = (0..n).filter(|&s| target[s]).collect();
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for (s, ds) in dist.iter_mut().enumerate() {
            if *ds == usize::MAX && m.successors(s).iter().any(|&w| frontier.contains(&w)) {
                *ds = d;
                next.push(s);
            }
        }
        frontier = next;
    }
    (0..n)
        .map(|s| match &m.states[s] {
            MdpState::Choice(succ) => {
                if let Some(region) = stay_in {
                    if region[s] {
                        return succ.iter().position(|&w| region[w]);
                    }
                }
                if dist[s] == usize::MAX || dist[s] == 0 {
                    None
                } else {
                    succ.iter().position(|&w| dist[w] < dist[s])
                }
            }
            _ => None,
        })
        .collect()
}

/// Best extreme-risk value the chooser can guarantee from the initial state,
/// with a positional witness policy. Pessimist asks for the worst payoff over
/// positive-probability outcomes, optimist for the best; unresolved infinite
/// runs pay zero.
pub fn mdp_best_xr(m: &InducedMdp, mode: XrMode) -> (Rational, Vec<Option<usize>>) {
    let mut candidates: BTreeSet<Rational> = m
        .states
        .iter()
        .filter_map(|s| match s {
            MdpState::Stop(x) => Some(x.clone()),
            _ => None,
        })
        .collect();
    candidates.insert(Rational::zero());
    for x in candidates.into_iter().rev() {
        let positive = x > Rational::zero();
        let good: Vec<bool> = m
            .states
            .iter()
            .map(|s| matches!(s, MdpState::Stop(y) if *y >= x))
            .collect();
        match (mode, positive) {
            (XrMode::Optimist, true) => {
                let can = mdp_can_reach(m, &good);
                if can[m.initial] {
                    return (x, mdp_policy_toward(m, &good, None));
                }
            }
            (XrMode::Optimist, false) => {
                // Payoff at least x is certain inside the safe region, and a
                // single positive-probability path into it already suffices.
                let bad: Vec<bool> = m
                    .states
                    .iter()
                    .map(|s| matches!(s, MdpState::Stop(y) if *y < x))
                    .collect();
                let safe = mdp_sure_safe(m, &bad);
                let can = mdp_can_reach(m, &safe);
                if can[m.initial] {
                    return (x, mdp_policy_toward(m, &safe, Some(&safe)));
                }
            }
            (XrMode::Pessimist, true) => {
                let (win, policy) = mdp_almost_sure_reach(m, &good);
                if win[m.initial] {
                    return (x, policy);
                }
            }
            (XrMode::Pessimist, false) => {
                let bad: Vec<bool> = m
                    .states
                    .iter()
                    .map(|s| matches!(s, MdpState::Stop(y) if *y < x))
                    .collect();
                let safe = mdp_sure_safe(m, &bad);
                if safe[m.initial] {
                    let policy = (0..m.len())
                        .map(|s| match &m.states[s] {
                            MdpState::Choice(succ) if safe[s] => {
                                succ.iter().position(|&w| safe[w])
                            }
                            _ => None,
                        })
                        .collect();
                    return (x, policy);
                }
            }
        }
    }
    unreachable!("the smallest candidate always verifies");
}

/// Distinct player-`i` terminal payoffs together with zero, descending.
/// These are the only values any extreme-risk quantity can take.
pub fn threshold_candidates(g: &Game, i: usize) -> Vec<Rational> {
    let mut set: BTreeSet<Rational> = (0..g.vertex_count())
        .filter_map(|v| g.payoff(v).map(|x| x[i].clone()))
        .collect();
    set.insert(Rational::zero());
    set.into_iter().rev().collect()
}

/// Extreme-risk value player `i` can guarantee from each vertex when every
/// other player colludes against them, over the full edge set. Used as the
/// punishment level in certificates.
pub fn adversarial_values(g: &Game, i: usize, mode: XrMode) -> Vec<Rational> {
    let n = g.vertex_count();
    let full = EdgeSet::full(g);
    let controller: Vec<bool> = (0..n).map(|v| g.owner(v) == Some(i)).collect();
    let hostile: Vec<bool> = (0..n)
        .map(|v| matches!(g.kind(v), VertexKind::Controlled(j) if *j != i))
        .collect();
    let exist_i: Vec<bool> = (0..n)
        .map(|v| controller[v] || matches!(g.kind(v), VertexKind::Stochastic))
        .collect();
    let mut val: Vec<Option<Rational>> = vec![None; n];
    for x in threshold_candidates(g, i) {
        let win: Vec<bool> = if x > Rational::zero() {
            let good: Vec<bool> = (0..n)
                .map(|v| matches!(g.payoff(v), Some(y) if y[i] >= x))
                .collect();
            match mode {
                XrMode::Optimist => attractor_with(g, &full, &good, &exist_i),
                XrMode::Pessimist => almost_sure_reach(g, &full, &controller, &hostile, &good).win,
            }
        } else {
            // Nontermination pays 0 >= x, so guaranteeing x only requires
            // never crossing into a worse terminal.
            let bad: Vec<bool> = (0..n)
                .map(|v| matches!(g.payoff(v), Some(y) if y[i] < x))
                .collect();
            let safe = sure_safe_region(g, &full, &bad, &controller);
            match mode {
                XrMode::Optimist => attractor_with(g, &full, &safe, &exist_i),
                XrMode::Pessimist => safe,
            }
        };
        for v in 0..n {
            if val[v].is_none() && win[v] {
                val[v] = Some(x.clone());
            }
        }
    }
    val.into_iter()
        .map(|x| x.expect("the smallest candidate wins everywhere"))
        .collect()
}

/// Single-vertex view of [`adversarial_values`].
pub fn adversarial_value(g: &Game, v: usize, i: usize, mode: XrMode) -> Rational {
    adversarial_values(g, i, mode)[v].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameBuilder;
    use crate::rational::{rat, rat_int};
    use crate::testutil::{lottery, two_exits, two_exits_coin};

    fn mask(g: &Game, ids: &[&str]) -> Vec<bool> {
        let mut m = vec![false; g.vertex_count()];
        for id in ids {
            m[g.vertex_index(id).unwrap()] = true;
        }
        m
    }

    fn names(g: &Game, set: &[bool]) -> Vec<String> {
        (0..g.vertex_count())
            .filter(|&v| set[v])
            .map(|v| g.vertex_id(v).to_string())
            .collect()
    }

    #[test]
    fn attractor_and_safety_are_complements() {
        let g = two_exits();
        let full = EdgeSet::full(&g);
        let avoid = mask(&g, &["t1"]);
        let safe = cooperative_safety(&g, &full, &avoid);
        assert_eq!(names(&g, &safe), ["a", "b", "t2"]);
        let attr = positive_attractor(&g, &full, &avoid);
        for v in 0..g.vertex_count() {
            assert_ne!(attr[v], safe[v]);
        }
        // Both players can exit before the other terminal as well.
        let both = positive_attractor(&g, &full, &mask(&g, &["t1", "t2"]));
        assert_eq!(names(&g, &both), ["t1", "t2"]);
    }

    #[test]
    fn stochastic_branches_infect_the_attractor() {
        let g = lottery();
        let full = EdgeSet::full(&g);
        let attr = positive_attractor(&g, &full, &mask(&g, &["t1"]));
        // c reaches t1 with probability 1/40; b can still dodge via t3.
        assert_eq!(names(&g, &attr), ["c", "t1"]);
        let coop = cooperative_safety(&g, &full, &g.terminal_mask());
        assert!(coop.iter().all(|&b| !b), "every run eventually exits");
    }

    #[test]
    fn sure_safety_lets_the_controller_steer() {
        let g = two_exits();
        let full = EdgeSet::full(&g);
        let circle: Vec<bool> = (0..g.vertex_count()).map(|v| g.owner(v) == Some(0)).collect();
        let safe = sure_safe_region(&g, &full, &mask(&g, &["t2"]), &circle);
        // a picks t1; b belongs to the other player and may fall into t2.
        assert_eq!(names(&g, &safe), ["a", "t1"]);
    }

    #[test]
    fn almost_sure_reach_distinguishes_chance_from_luck() {
        let g = lottery();
        let full = EdgeSet::full(&g);
        let circle: Vec<bool> = (0..g.vertex_count()).map(|v| g.owner(v) == Some(0)).collect();
        let none = vec![false; g.vertex_count()];

        // Only a positive-probability branch leads to t1, so no sure win.
        let r = almost_sure_reach(&g, &full, &circle, &none, &mask(&g, &["t1"]));
        assert_eq!(names(&g, &r.win), ["t1"]);

        // Both lottery outcomes are in the target: commit to the lottery.
        let r = almost_sure_reach(&g, &full, &circle, &none, &mask(&g, &["t1", "t2"]));
        assert_eq!(names(&g, &r.win), ["a", "b", "c", "t1", "t2"]);
        let b = g.vertex_index("b").unwrap();
        assert_eq!(g.successors(b)[r.policy[b].unwrap()], g.vertex_index("c").unwrap());

        // The safe exit is a choice away.
        let r = almost_sure_reach(&g, &full, &circle, &none, &mask(&g, &["t3"]));
        assert_eq!(names(&g, &r.win), ["a", "b", "t3"]);
        assert_eq!(g.successors(b)[r.policy[b].unwrap()], g.vertex_index("t3").unwrap());
    }

    #[test]
    fn hostile_vertices_must_be_cornered() {
        let g = two_exits();
        let full = EdgeSet::full(&g);
        let circle: Vec<bool> = (0..g.vertex_count()).map(|v| g.owner(v) == Some(0)).collect();
        let square: Vec<bool> = (0..g.vertex_count()).map(|v| g.owner(v) == Some(1)).collect();
        let r = almost_sure_reach(&g, &full, &circle, &square, &mask(&g, &["t1"]));
        // Square escapes through t2 rather than hand the play back.
        assert_eq!(names(&g, &r.win), ["a", "t1"]);
        let r = almost_sure_reach(&g, &full, &circle, &square, &mask(&g, &["t1", "t2"]));
        assert_eq!(names(&g, &r.win), ["a", "b", "t1", "t2"]);
    }

    #[test]
    fn hostile_two_cycle_is_not_won() {
        // Two hostile vertices passing the play between themselves never
        // have to take their exits, even though every exit is a target.
        let mut b = GameBuilder::new();
        b.player("i").player("j");
        b.controlled("h1", "j", ["h2", "t1"]);
        b.controlled("h2", "j", ["h1", "t2"]);
        b.terminal("t1", [("i", rat_int(1)), ("j", rat_int(0))]);
        b.terminal("t2", [("i", rat_int(1)), ("j", rat_int(0))]);
        b.initial("h1");
        let g = b.build().unwrap();
        let full = EdgeSet::full(&g);
        let none = vec![false; g.vertex_count()];
        let hostile: Vec<bool> = (0..g.vertex_count()).map(|v| g.owner(v) == Some(1)).collect();
        let r = almost_sure_reach(&g, &full, &none, &hostile, &mask(&g, &["t1", "t2"]));
        assert_eq!(names(&g, &r.win), ["t1", "t2"]);
    }

    #[test]
    fn stationary_payoff_sets_follow_the_support() {
        let g = two_exits();
        let full = EdgeSet::full(&g);
        let one = rat_int(1);
        let two = rat_int(2);
        assert_eq!(
            stationary_positive_payoffs(&g, &full),
            vec![vec![one.clone(), two.clone()], vec![two.clone(), one.clone()]]
        );

        // Keep only the cycle: the play never terminates.
        let mut cycle = EdgeSet::empty(&g);
        let a = g.vertex_index("a").unwrap();
        let b = g.vertex_index("b").unwrap();
        cycle.insert(g.edge_id(a, 0));
        cycle.insert(g.edge_id(b, 0));
        let zero = vec![Rational::zero(), Rational::zero()];
        assert_eq!(stationary_positive_payoffs(&g, &cycle), vec![zero.clone()]);

        // Stationary play re-randomizes out of the cycle once one exit is
        // kept; a committed draw can still lock the cycle in forever.
        let mut one_exit = cycle.clone();
        one_exit.insert(g.edge_id(a, 1));
        assert_eq!(
            stationary_positive_payoffs(&g, &one_exit),
            vec![vec![one.clone(), two.clone()]]
        );
        assert_eq!(
            committed_positive_payoffs(&g, &one_exit),
            vec![zero.clone(), vec![one.clone(), two.clone()]]
        );
        assert_eq!(
            committed_positive_payoffs(&g, &full),
            vec![
                zero.clone(),
                vec![one.clone(), two.clone()],
                vec![two.clone(), one.clone()]
            ]
        );
    }

    #[test]
    fn lottery_payoff_set_reads_off_the_terminals() {
        let g = lottery();
        let full = EdgeSet::full(&g);
        assert_eq!(
            stationary_positive_payoffs(&g, &full),
            vec![vec![rat_int(0)], vec![rat_int(1)], vec![rat_int(40)]]
        );
    }

    #[test]
    fn deviation_process_spans_both_risk_attitudes() {
        let g = lottery();
        let full = EdgeSet::full(&g);
        let m = deviation_mdp_from_support(&g, &full, 0);
        let b = g.vertex_index("b").unwrap();

        let (pess, policy) = mdp_best_xr(&m, XrMode::Pessimist);
        assert_eq!(pess, rat_int(1));
        assert_eq!(g.successors(b)[policy[b].unwrap()], g.vertex_index("t3").unwrap());

        let (opt, policy) = mdp_best_xr(&m, XrMode::Optimist);
        assert_eq!(opt, rat_int(40));
        assert_eq!(g.successors(b)[policy[b].unwrap()], g.vertex_index("c").unwrap());
    }

    #[test]
    fn negative_stops_fall_back_to_looping() {
        // The chooser prefers circling forever (payoff 0) to both exits.
        let m = InducedMdp {
            states: vec![
                MdpState::Choice(vec![0, 1, 2]),
                MdpState::Stop(rat_int(-1)),
                MdpState::Stop(rat_int(-3)),
            ],
            initial: 0,
        };
        let (pess, policy) = mdp_best_xr(&m, XrMode::Pessimist);
        assert_eq!(pess, rat_int(0));
        assert_eq!(policy[0], Some(0));
        let (opt, _) = mdp_best_xr(&m, XrMode::Optimist);
        assert_eq!(opt, rat_int(0));

        // Forced to stop eventually: a chance state may exit to -1.
        let m = InducedMdp {
            states: vec![
                MdpState::Chance(vec![0, 1]),
                MdpState::Stop(rat_int(-1)),
            ],
            initial: 0,
        };
        let (pess, _) = mdp_best_xr(&m, XrMode::Pessimist);
        assert_eq!(pess, rat_int(-1));
        // The loop still has positive probability of lasting any finite
        // time, but not forever, so 0 is out of reach for the optimist too.
        let (opt, _) = mdp_best_xr(&m, XrMode::Optimist);
        assert_eq!(opt, rat_int(-1));
    }

    #[test]
    fn optimist_value_dominates_pessimist_value() {
        let g = two_exits_coin();
        let full = EdgeSet::full(&g);
        for i in 0..g.player_count() {
            let m = deviation_mdp_from_support(&g, &full, i);
            let (opt, _) = mdp_best_xr(&m, XrMode::Optimist);
            let (pess, _) = mdp_best_xr(&m, XrMode::Pessimist);
            assert!(opt >= pess);
        }
    }

    #[test]
    fn adversarial_values_on_the_lottery() {
        let g = lottery();
        let idx = |id: &str| g.vertex_index(id).unwrap();
        let pess = adversarial_values(&g, 0, XrMode::Pessimist);
        assert_eq!(pess[idx("a")], rat_int(1));
        assert_eq!(pess[idx("b")], rat_int(1));
        assert_eq!(pess[idx("c")], rat_int(0));
        assert_eq!(pess[idx("t1")], rat_int(40));
        let opt = adversarial_values(&g, 0, XrMode::Optimist);
        assert_eq!(opt[idx("a")], rat_int(40));
        assert_eq!(opt[idx("b")], rat_int(40));
        assert_eq!(opt[idx("c")], rat_int(40));
        assert_eq!(opt[idx("t3")], rat_int(1));
    }

    #[test]
    fn adversarial_values_with_a_real_opponent() {
        let g = two_exits();
        let idx = |id: &str| g.vertex_index(id).unwrap();
        // Whoever is trapped in the cycle can still take their own exit.
        let circle = adversarial_values(&g, 0, XrMode::Pessimist);
        assert_eq!(circle[idx("a")], rat_int(1));
        assert_eq!(circle[idx("b")], rat_int(1));
        let square = adversarial_values(&g, 1, XrMode::Pessimist);
        assert_eq!(square[idx("a")], rat_int(1));
        assert_eq!(square[idx("b")], rat_int(1));
        // Hoping does not help: the opponent simply never takes the exit
        // that favors us, so even the optimist only counts on their own.
        let circle = adversarial_values(&g, 0, XrMode::Optimist);
        assert_eq!(circle[idx("a")], rat_int(1));
        assert_eq!(circle[idx("b")], rat_int(1));
    }

    #[test]
    fn adversarial_pessimist_can_prefer_nontermination() {
        // Exits pay negative; the guaranteed level is the 0 of looping.
        let mut b = GameBuilder::new();
        b.player("i").player("j");
        b.controlled("u", "i", ["w", "x1"]);
        b.controlled("w", "j", ["u", "x2"]);
        b.terminal("x1", [("i", rat_int(-1)), ("j", rat_int(0))]);
        b.terminal("x2", [("i", rat(-1, 2)), ("j", rat_int(0))]);
        b.initial("u");
        let g = b.build().unwrap();
        let idx = |id: &str| g.vertex_index(id).unwrap();
        let pess = adversarial_values(&g, 0, XrMode::Pessimist);
        // From u the loop is not safe: j may exit to x2 at any time. Staying
        // clear of the worst exit is all i can force.
        assert_eq!(pess[idx("u")], rat(-1, 2));
        let opt = adversarial_values(&g, 0, XrMode::Optimist);
        assert_eq!(opt[idx("u")], rat(-1, 2));
    }

    #[test]
    fn probabilities_never_change_qualitative_output() {
        let mut b = GameBuilder::new();
        b.player("circle");
        b.stochastic("a", [("a", rat(9, 10)), ("b", rat(1, 10))]);
        b.controlled("b", "circle", ["c", "t3"]);
        b.stochastic("c", [("t1", rat(1, 2)), ("t2", rat(1, 2))]);
        b.terminal("t1", [("circle", rat_int(40))]);
        b.terminal("t2", [("circle", rat_int(0))]);
        b.terminal("t3", [("circle", rat_int(1))]);
        b.initial("a");
        let rescaled = b.build().unwrap();
        let g = lottery();
        let full = EdgeSet::full(&g);
        assert_eq!(
            stationary_positive_payoffs(&g, &full),
            stationary_positive_payoffs(&rescaled, &EdgeSet::full(&rescaled))
        );
        for mode in [XrMode::Pessimist, XrMode::Optimist] {
            assert_eq!(adversarial_values(&g, 0, mode), adversarial_values(&rescaled, 0, mode));
        }
    }
}
