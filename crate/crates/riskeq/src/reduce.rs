//! Instance transformers: the certainty-equivalent payoff rewrite that turns
//! entropic equilibrium questions into expectation (Nash) questions, gadget
//! generators that encode satisfiability and alternating reachability as
//! constrained-equilibrium questions, and an SMT-LIB encoding of stationary
//! equilibrium existence on a fixed support.

use crate::game::{reachable, EdgeSet, Game, GameBuilder, GameError, VertexKind};
use crate::json::{serialize_game, ConstraintBox};
use crate::oracle::ThreeCnf;
use crate::rational::{format_rational, parse_rational, rat, rat_int, Rational};
use crate::risk::{modified_reward, Base, RiskAssignment};
use num::bigint::BigInt;
use num::{BigUint, One, Signed, Zero};
use serde_json::Value;

fn base_label(base: &Base) -> String {
    match base {
        Base::NaturalE => "e".to_string(),
        Base::Exact(b) => format_rational(b),
    }
}

fn check_base(base: &Base, errs: &mut Vec<String>) {
    if let Base::Exact(b) = base {
        if *b <= Rational::one() {
            errs.push(format!(
                "base {} does not exceed one, so the transform is not monotone",
                format_rational(b)
            ));
        }
    }
}

/// Payoff for one player in the expectation form: rate zero keeps the payoff
/// (those players already judge by expectation), anything else becomes the
/// binary64 value of the monotone transform, carried as the exact rational
/// the shortest decimal form denotes.
fn transformed_payoff(
    z: &Rational,
    base: &Base,
    rho: &Rational,
    player: &str,
    terminal: &str,
) -> Result<Rational, GameError> {
    if rho.is_zero() {
        return Ok(z.clone());
    }
    let h = modified_reward(z, base, rho);
    if !h.is_finite() {
        return Err(GameError::Invalid(vec![format!(
            "transformed payoff for player \"{player}\" at terminal \"{terminal}\" \
             overflows binary64"
        )]));
    }
    Ok(parse_rational(&format!("{h:?}")).expect("a finite binary64 prints as an exact decimal"))
}

/// Rewrite of the game in which an expectation-maximizing (Nash) reading of
/// the payoffs agrees with the entropic reading of the original: each payoff
/// is replaced by its certainty-equivalent transform at binary64 precision.
/// The graph, probabilities, and player list are unchanged.
pub fn er_to_nash(g: &Game, base: &Base, rho: &[Rational]) -> Result<Game, GameError> {
    let mut errs = Vec::new();
    if rho.len() != g.player_count() {
        errs.push(format!(
            "{} rates given but the game has {} players",
            rho.len(),
            g.player_count()
        ));
    }
    check_base(base, &mut errs);
    if !errs.is_empty() {
        return Err(GameError::Invalid(errs));
    }

    let mut b = GameBuilder::new();
    for p in g.players() {
        b.player(p.clone());
    }
    for v in 0..g.vertex_count() {
        let id = g.vertex_id(v).to_string();
        match g.kind(v) {
            VertexKind::Controlled(i) => {
                let succ: Vec<String> =
                    g.successors(v).iter().map(|&w| g.vertex_id(w).to_string()).collect();
                b.controlled(id, g.players()[*i].clone(), succ);
            }
            VertexKind::Stochastic => {
                let succ: Vec<(String, Rational)> = g
                    .successors(v)
                    .iter()
                    .enumerate()
                    .map(|(k, &w)| (g.vertex_id(w).to_string(), g.edge_prob(v, k).clone()))
                    .collect();
                b.stochastic(id, succ);
            }
            VertexKind::Terminal(x) => {
                let pay = g
                    .players()
                    .iter()
                    .zip(x)
                    .zip(rho)
                    .map(|((p, z), r)| {
                        transformed_payoff(z, base, r, p, g.vertex_id(v))
                            .map(|t| (p.clone(), t))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                b.terminal(id, pay);
            }
        }
    }
    b.initial(g.vertex_id(g.initial()).to_string());
    let rates: Vec<String> = rho.iter().map(format_rational).collect();
    b.note(format!(
        "expectation form of a risk-sensitive game: payoffs are binary64 certainty \
         equivalents under base {} with rates [{}]; profiles maximizing expectation \
         here correspond to entropic-risk equilibria of the source game",
        base_label(base),
        rates.join(", ")
    ));
    b.build()
}

/// Decimal form of a rational whose denominator divides a power of ten,
/// shortest (no trailing zeros): 17/32 becomes "0.53125".
fn decimal_string(r: &Rational) -> Option<String> {
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let k = twos.max(fives);
    if k == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = (r.numer().abs() * BigInt::from(10).pow(k)) / r.denom();
    let mut digits = scaled.to_string();
    let width = k as usize + 1;
    if digits.len() < width {
        digits = format!("{}{}", "0".repeat(width - digits.len()), digits);
    }
    let point = digits.len() - k as usize;
    let (int_part, frac_part) = digits.split_at(point);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if r.numer().is_negative() { "-" } else { "" };
    if frac_part.is_empty() {
        Some(format!("{sign}{int_part}"))
    } else {
        Some(format!("{sign}{int_part}.{frac_part}"))
    }
}

/// The serialized game with every terminal payoff that has a finite decimal
/// form written as a decimal string ("0.75" rather than "3/4"). Lossless:
/// parsing the document reproduces the game exactly.
pub fn decimal_game_document(g: &Game) -> Value {
    let mut root: Value =
        serde_json::from_str(&serialize_game(g)).expect("serialized games are valid JSON");
    for vertex in root["vertices"].as_array_mut().expect("games serialize a vertex list") {
        if let Some(map) = vertex.get_mut("terminal").and_then(Value::as_object_mut) {
            for payoff in map.values_mut() {
                let exact = payoff
                    .as_str()
                    .and_then(|s| parse_rational(s).ok())
                    .expect("serialized payoffs are rational strings");
                if let Some(dec) = decimal_string(&exact) {
                    *payoff = Value::String(dec);
                }
            }
        }
    }
    root
}

/// Read an arena document: ordinary game JSON carrying an extra `"target"`
/// list of vertex ids. Returns the game and the target indices.
pub fn parse_arena(text: &str) -> Result<(Game, Vec<usize>), GameError> {
    let mut root: Value = serde_json::from_str(text).map_err(|e| GameError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let targets_value = root
        .as_object_mut()
        .and_then(|m| m.remove("target"))
        .ok_or_else(|| GameError::Invalid(vec!["missing \"target\" list".to_string()]))?;
    let game = crate::json::parse_game(&root.to_string())?;
    let list = targets_value
        .as_array()
        .ok_or_else(|| GameError::Invalid(vec!["\"target\" must be a list".to_string()]))?;
    let mut targets = Vec::new();
    let mut errs = Vec::new();
    for item in list {
        match item.as_str() {
            None => errs.push("\"target\" entries must be vertex ids".to_string()),
            Some(id) => match game.vertex_index(id) {
                None => errs.push(format!("target \"{id}\" is not a vertex")),
                Some(v) => {
                    if !targets.contains(&v) {
                        targets.push(v);
                    }
                }
            },
        }
    }
    if !errs.is_empty() {
        return Err(GameError::Invalid(errs));
    }
    Ok((game, targets))
}

/// Freeze an alternating two-player arena into a constrained-equilibrium
/// instance: targets become terminals paying the first player 1 and the
/// second -1, both players are optimists, and the box pins exactly (1, -1).
/// The answer is Yes precisely when the first player can force a target.
pub fn gen_reachability_instance(
    arena: &Game,
    targets: &[usize],
) -> Result<(Game, RiskAssignment, ConstraintBox), GameError> {
    let mut errs = Vec::new();
    if arena.player_count() != 2 {
        errs.push(format!(
            "the arena needs exactly two players, not {}",
            arena.player_count()
        ));
    }
    for v in 0..arena.vertex_count() {
        match arena.kind(v) {
            VertexKind::Stochastic => errs.push(format!(
                "vertex \"{}\" is stochastic; the arena must be deterministic",
                arena.vertex_id(v)
            )),
            VertexKind::Terminal(_) => errs.push(format!(
                "vertex \"{}\" is already terminal; targets are the only terminals",
                arena.vertex_id(v)
            )),
            VertexKind::Controlled(_) => {}
        }
    }
    if targets.is_empty() {
        errs.push("the target set is empty".to_string());
    }
    for &t in targets {
        if t >= arena.vertex_count() {
            errs.push(format!("target index {t} out of range"));
        }
    }
    if !errs.is_empty() {
        return Err(GameError::Invalid(errs));
    }

    let mut is_target = vec![false; arena.vertex_count()];
    for &t in targets {
        is_target[t] = true;
    }
    let reacher = arena.players()[0].clone();
    let avoider = arena.players()[1].clone();
    let mut b = GameBuilder::new();
    b.player(reacher.clone()).player(avoider.clone());
    for (v, &hit) in is_target.iter().enumerate() {
        let id = arena.vertex_id(v).to_string();
        if hit {
            b.terminal(id, [(reacher.clone(), rat_int(1)), (avoider.clone(), rat_int(-1))]);
        } else if let VertexKind::Controlled(i) = arena.kind(v) {
            let succ: Vec<String> =
                arena.successors(v).iter().map(|&w| arena.vertex_id(w).to_string()).collect();
            b.controlled(id, arena.players()[*i].clone(), succ);
        }
    }
    b.initial(arena.vertex_id(arena.initial()).to_string());
    b.note(format!(
        "alternating-reachability arena with targets frozen as terminals; \
         \"{reacher}\" is paid 1 and \"{avoider}\" -1 exactly at the targets"
    ));
    let game = b.build()?;
    let mut bounds = ConstraintBox::default();
    bounds.lower.insert(reacher.clone(), rat_int(1));
    bounds.upper.insert(reacher, rat_int(1));
    bounds.lower.insert(avoider.clone(), rat_int(-1));
    bounds.upper.insert(avoider, rat_int(-1));
    Ok((game, RiskAssignment::all_optimist(2), bounds))
}

fn literal_key(lit: i32) -> String {
    if lit > 0 {
        format!("x{lit}")
    } else {
        format!("nx{}", -lit)
    }
}

/// Build the satisfiability gadget: a game of pessimists in which an
/// equilibrium holding the "auditor" player at exactly 2 exists precisely
/// when the formula is satisfiable. One picker and one gate player per
/// literal, one player per clause, and the vertexless auditor.
pub fn gen_threesat_game(
    cnf: &ThreeCnf,
) -> Result<(Game, RiskAssignment, ConstraintBox), GameError> {
    let n = cnf.vars;
    let m = cnf.clauses.len();
    let mut errs = Vec::new();
    if n == 0 {
        errs.push("the formula has no variables".to_string());
    }
    if m == 0 {
        errs.push("the formula has no clauses".to_string());
    }
    for (j, clause) in cnf.clauses.iter().enumerate() {
        for &lit in clause {
            if lit == 0 || lit.unsigned_abs() as usize > n {
                errs.push(format!("clause {} holds literal {lit} out of range", j + 1));
            }
        }
    }
    if !errs.is_empty() {
        return Err(GameError::Invalid(errs));
    }

    let literals: Vec<i32> = (1..=n as i32).flat_map(|k| [k, -k]).collect();
    let mut b = GameBuilder::new();
    let mut names: Vec<String> = Vec::new();
    for &l in &literals {
        names.push(format!("pick_{}", literal_key(l)));
    }
    for &l in &literals {
        names.push(format!("gate_{}", literal_key(l)));
    }
    for j in 1..=m {
        names.push(format!("clause_{j}"));
    }
    names.push("auditor".to_string());
    for name in &names {
        b.player(name.clone());
    }

    // All-but-one payoff vectors: `loser` is paid `short`, the rest 2.
    let spread = |loser: &str, short: i64| -> Vec<(String, Rational)> {
        names
            .iter()
            .map(|p| (p.clone(), rat_int(if p == loser { short } else { 2 })))
            .collect::<Vec<_>>()
    };

    for k in 1..=n {
        let x = literal_key(k as i32);
        let nx = literal_key(-(k as i32));
        b.controlled(
            format!("pick_{x}"),
            format!("pick_{x}"),
            [format!("coin_{x}"), format!("pick_{nx}")],
        );
        b.controlled(
            format!("pick_{nx}"),
            format!("pick_{nx}"),
            [format!("coin_{nx}"), "sink".to_string()],
        );
        let next =
            if k < n { format!("pick_x{}", k + 1) } else { "draw".to_string() };
        b.controlled(format!("gate_{x}"), format!("gate_{x}"), [next.clone(), "slip".to_string()]);
        b.controlled(format!("gate_{nx}"), format!("gate_{nx}"), [next, "slip".to_string()]);
    }
    for &l in &literals {
        let key = literal_key(l);
        let bar = literal_key(-l);
        b.stochastic(
            format!("coin_{key}"),
            [(format!("fee_{key}"), rat(1, 2)), (format!("gate_{bar}"), rat(1, 2))],
        );
    }
    b.stochastic_uniform("draw", (1..=m).map(|j| format!("clause_{j}")));
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let mut exits: Vec<String> = Vec::new();
        for &lit in clause {
            let t = format!("toll_{}", literal_key(lit));
            if !exits.contains(&t) {
                exits.push(t);
            }
        }
        b.controlled(format!("clause_{}", j + 1), format!("clause_{}", j + 1), exits);
    }
    for &l in &literals {
        let key = literal_key(l);
        b.terminal(format!("fee_{key}"), spread(&format!("pick_{key}"), 1));
        b.terminal(format!("toll_{key}"), spread(&format!("gate_{key}"), 1));
    }
    b.terminal("slip", spread("auditor", 0));
    b.terminal(
        "sink",
        names.iter().map(|p| (p.clone(), rat_int(0))).collect::<Vec<_>>(),
    );
    b.initial("pick_x1");
    b.note(
        "satisfiability gadget: an equilibrium that holds the auditor at exactly 2 \
         exists precisely when the encoded formula is satisfiable",
    );
    let game = b.build()?;

    let risk = RiskAssignment::all_pessimist(game.player_count());
    let mut bounds = ConstraintBox::default();
    for p in game.players() {
        bounds.upper.insert(p.clone(), rat_int(2));
        bounds
            .lower
            .insert(p.clone(), rat_int(if p == "auditor" { 2 } else { 0 }));
    }
    Ok((game, risk, bounds))
}

/// Vertices that can reach a seed vertex inside the kept edges.
fn backward_reach(g: &Game, keep: &EdgeSet, seed: &[bool]) -> Vec<bool> {
    let mut hit = seed.to_vec();
    loop {
        let mut grew = false;
        for v in 0..g.vertex_count() {
            if hit[v] || g.is_terminal(v) {
                continue;
            }
            if keep.kept(g, v).any(|(_, w)| hit[w]) {
                hit[v] = true;
                grew = true;
            }
        }
        if !grew {
            return hit;
        }
    }
}

/// SMT-LIB v2 constant in Real syntax: numerals are unsigned, so signs and
/// fractions become unary minus and division terms.
fn smt_rat(r: &Rational) -> String {
    let core = if r.denom().is_one() {
        r.numer().abs().to_string()
    } else {
        format!("(/ {} {})", r.numer().abs(), r.denom())
    };
    if r.numer().is_negative() {
        format!("(- {core})")
    } else {
        core
    }
}

struct Script {
    lines: Vec<String>,
    fresh: usize,
}

impl Script {
    fn new() -> Self {
        Script { lines: Vec::new(), fresh: 0 }
    }

    fn comment(&mut self, text: &str) {
        self.lines.push(format!("; {text}"));
    }

    fn raw(&mut self, line: String) {
        self.lines.push(line);
    }

    fn declare(&mut self, name: &str) {
        self.lines.push(format!("(declare-const {name} Real)"));
    }

    fn assert(&mut self, term: String) {
        self.lines.push(format!("(assert {term})"));
    }

    fn fresh(&mut self, prefix: &str) -> String {
        let name = format!("{prefix}{}", self.fresh);
        self.fresh += 1;
        name
    }

    /// Term equal to `base^n` for n >= 1, built from squaring variables and
    /// one product accumulator per set bit, so the script stays logarithmic
    /// in n.
    fn integer_power(&mut self, base: &str, n: &BigUint) -> String {
        if n.is_one() {
            return base.to_string();
        }
        let top = n.bits() - 1;
        let mut squares: Vec<String> = vec![base.to_string()];
        for k in 1..=top {
            let sq = self.fresh("s");
            self.declare(&sq);
            let prev = &squares[(k - 1) as usize];
            self.assert(format!("(= {sq} (* {prev} {prev}))"));
            squares.push(sq);
        }
        let mut acc: Option<String> = None;
        for k in 0..=top {
            if !n.bit(k) {
                continue;
            }
            let factor = squares[k as usize].clone();
            acc = Some(match acc {
                None => factor,
                Some(a) => {
                    let prod = self.fresh("g");
                    self.declare(&prod);
                    self.assert(format!("(= {prod} (* {a} {factor}))"));
                    prod
                }
            });
        }
        acc.expect("n >= 1 has a set bit")
    }

    /// Term equal to `base^(n/d)` for a positive integer literal base. Roots
    /// are fresh positive variables pinned by a power equation.
    fn power_root(&mut self, base: &BigUint, n: &BigUint, d: &BigUint) -> String {
        if base.is_one() {
            return "1".to_string();
        }
        let whole = self.integer_power(&base.to_string(), n);
        if d.is_one() {
            return whole;
        }
        let root = self.fresh("y");
        self.declare(&root);
        self.assert(format!("(> {root} 0)"));
        let raised = self.integer_power(&root, d);
        self.assert(format!("(= {raised} {whole})"));
        root
    }

    /// Term equal to `beta^e` for nonzero rational e and rational beta > 1.
    fn rational_power(&mut self, beta: &Rational, e: &Rational) -> String {
        let numer = e.numer().magnitude().clone();
        let denom = e.denom().magnitude().clone();
        let (top, bottom) = if e.numer().is_positive() {
            (beta.numer().magnitude(), beta.denom().magnitude())
        } else {
            (beta.denom().magnitude(), beta.numer().magnitude())
        };
        let upper = self.power_root(top, &numer, &denom);
        let lower = self.power_root(bottom, &numer, &denom);
        if lower == "1" {
            return upper;
        }
        let value = self.fresh("c");
        self.declare(&value);
        self.assert(format!("(> {value} 0)"));
        self.assert(format!("(= (* {value} {lower}) {upper})"));
        value
    }
}

/// Emit an SMT-LIB v2 script that is satisfiable exactly when some
/// stationary profile with the given support is an entropic-risk equilibrium
/// whose initial values lie in the box. The caller guesses the support; the
/// script carries one probability variable per edge, one chain-value and one
/// best-reply variable per player and vertex, and auxiliary variables that
/// keep every payoff transform polynomial in its bit-length.
pub fn emit_etr(
    g: &Game,
    base: &Base,
    rho: &[Rational],
    support: &EdgeSet,
    bounds: &ConstraintBox,
) -> Result<String, GameError> {
    let mut errs = Vec::new();
    if rho.len() != g.player_count() {
        errs.push(format!(
            "{} rates given but the game has {} players",
            rho.len(),
            g.player_count()
        ));
    } else {
        for (i, r) in rho.iter().enumerate() {
            if r.is_zero() {
                errs.push(format!(
                    "player \"{}\" has rate zero, which asks for plain expectation; \
                     rewrite the game with the expectation transform and use Nash tooling",
                    g.players()[i]
                ));
            }
        }
    }
    check_base(base, &mut errs);
    if !support.is_valid_support(g) {
        errs.push(
            "the edge set is not a valid support: stochastic vertices keep every edge, \
             controlled vertices at least one"
                .to_string(),
        );
    }
    errs.extend(bounds.check_against(g));
    if !errs.is_empty() {
        return Err(GameError::Invalid(errs));
    }

    let n = g.vertex_count();
    let reach = reachable(g, support, g.initial());
    let live_terminal: Vec<bool> = (0..n).map(|v| reach[v] && g.is_terminal(v)).collect();
    let fertile = backward_reach(g, support, &live_terminal);

    let mut s = Script::new();
    s.comment("existence of a stationary equilibrium profile on a fixed support");
    s.comment(&format!("base {}", base_label(base)));
    for (i, p) in g.players().iter().enumerate() {
        s.comment(&format!("player {i} = \"{p}\" (rate {})", format_rational(&rho[i])));
    }
    for v in 0..n {
        let kind = match g.kind(v) {
            VertexKind::Controlled(i) => format!("owned by \"{}\"", g.players()[*i]),
            VertexKind::Stochastic => "stochastic".to_string(),
            VertexKind::Terminal(_) => "terminal".to_string(),
        };
        s.comment(&format!("vertex {v} = \"{}\" ({kind})", g.vertex_id(v)));
    }
    let kept_list: Vec<String> = (0..n)
        .flat_map(|v| {
            support
                .kept(g, v)
                .map(|(_, w)| format!("{} -> {}", g.vertex_id(v), g.vertex_id(w)))
                .collect::<Vec<_>>()
        })
        .collect();
    s.comment(&format!("support: {}", kept_list.join(", ")));
    s.comment("p_<v>_<w>: probability the profile moves from vertex v to w");
    s.comment("r_<i>_<v>: player i's transformed value under the profile, from v");
    s.comment("m_<i>_<v>: player i's best transformed reply value, from v");
    s.comment("vertices that cannot reach a terminal inside the support have their");
    s.comment("r value pinned to 0: never terminating is worth the transform of 0,");
    s.comment("which is 0");
    if matches!(base, Base::NaturalE) {
        s.comment("the base is Euler's number, so transforms use the nonstandard");
        s.comment("(exp ...) operator; the solver must handle real exponentiation");
    }
    s.raw("(set-logic QF_NRA)".to_string());

    // Probability block: simplex rows, stochastic pinning, support shape.
    for v in 0..n {
        if g.is_terminal(v) {
            continue;
        }
        let names: Vec<String> =
            g.successors(v).iter().map(|&w| format!("p_{v}_{w}")).collect();
        for name in &names {
            s.declare(name);
            s.assert(format!("(>= {name} 0)"));
            s.assert(format!("(<= {name} 1)"));
        }
        if names.len() == 1 {
            s.assert(format!("(= {} 1)", names[0]));
        } else {
            s.assert(format!("(= (+ {}) 1)", names.join(" ")));
        }
        for (k, &w) in g.successors(v).iter().enumerate() {
            let name = format!("p_{v}_{w}");
            if matches!(g.kind(v), VertexKind::Stochastic) {
                s.assert(format!("(= {name} {})", smt_rat(g.edge_prob(v, k))));
            } else if support.contains(g.edge_id(v, k)) {
                s.assert(format!("(> {name} 0)"));
            } else {
                s.assert(format!("(= {name} 0)"));
            }
        }
    }

    // Transformed payoff terms, one auxiliary chain per distinct exponent.
    let mut cache: std::collections::BTreeMap<Rational, String> = Default::default();
    let mut payoff_term = |s: &mut Script, i: usize, z: &Rational| -> String {
        let e = -(&rho[i] * z);
        if e.is_zero() {
            return "0".to_string();
        }
        let c = match cache.get(&e) {
            Some(c) => c.clone(),
            None => {
                let c = match base {
                    Base::NaturalE => format!("(exp {})", smt_rat(&e)),
                    Base::Exact(beta) => s.rational_power(beta, &e),
                };
                cache.insert(e.clone(), c.clone());
                c
            }
        };
        if rho[i].is_positive() {
            format!("(- 1 {c})")
        } else {
            format!("(- {c} 1)")
        }
    };

    let weighted_sum = |vars: &dyn Fn(usize) -> String, v: usize| -> String {
        let terms: Vec<String> = g
            .successors(v)
            .iter()
            .map(|&w| format!("(* p_{v}_{w} {})", vars(w)))
            .collect();
        if terms.len() == 1 {
            terms.into_iter().next().expect("one term")
        } else {
            format!("(+ {})", terms.join(" "))
        }
    };

    // Chain values: terminal payoffs where the profile can terminate,
    // linear flow equations elsewhere, 0 where no terminal is in reach.
    for i in 0..g.player_count() {
        for v in 0..n {
            s.declare(&format!("r_{i}_{v}"));
        }
        for v in 0..n {
            if live_terminal[v] {
                let t = payoff_term(&mut s, i, &g.payoff(v).expect("terminal")[i]);
                s.assert(format!("(= r_{i}_{v} {t})"));
            } else if fertile[v] {
                let sum = weighted_sum(&|w| format!("r_{i}_{w}"), v);
                s.assert(format!("(= r_{i}_{v} {sum})"));
            } else {
                s.assert(format!("(= r_{i}_{v} 0)"));
            }
        }
    }

    // Best replies: every terminal keeps its payoff, the player's vertices
    // dominate each outgoing edge, everyone else's flow is linear.
    for i in 0..g.player_count() {
        for v in 0..n {
            s.declare(&format!("m_{i}_{v}"));
        }
        for v in 0..n {
            match g.kind(v) {
                VertexKind::Terminal(x) => {
                    let t = payoff_term(&mut s, i, &x[i]);
                    s.assert(format!("(= m_{i}_{v} {t})"));
                }
                VertexKind::Controlled(owner) if *owner == i => {
                    for &w in g.successors(v) {
                        s.assert(format!("(>= m_{i}_{v} m_{i}_{w})"));
                    }
                }
                _ => {
                    let sum = weighted_sum(&|w| format!("m_{i}_{w}"), v);
                    s.assert(format!("(= m_{i}_{v} {sum})"));
                }
            }
        }
    }

    // Box on the initial chain values, and no profitable replies.
    let v0 = g.initial();
    for (i, lo) in bounds.lower_vec(g).iter().enumerate() {
        if let Some(lo) = lo {
            let t = payoff_term(&mut s, i, lo);
            s.assert(format!("(<= {t} r_{i}_{v0})"));
        }
    }
    for (i, hi) in bounds.upper_vec(g).iter().enumerate() {
        if let Some(hi) = hi {
            let t = payoff_term(&mut s, i, hi);
            s.assert(format!("(<= r_{i}_{v0} {t})"));
        }
    }
    for i in 0..g.player_count() {
        s.assert(format!("(<= m_{i}_{v0} r_{i}_{v0})"));
    }
    s.raw("(check-sat)".to_string());
    Ok(s.lines.join("\n") + "\n")
}
