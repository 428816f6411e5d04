//! JSON documents: games, constraint boxes, risk assignments.
//!
//! Numbers are exact: the accepted forms are fraction strings like "39/40",
//! integer strings, integer literals, and exact decimal strings ("0.25").
//! Float literals are rejected so that no document silently loses precision.

use crate::game::{EdgeSet, Game, GameBuilder, GameError};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::risk::{Base, RiskAssignment, RiskTag, XrMode};
use crate::strategy::{
    EdgeSemantics, EdgeSetProfile, FiniteMemoryProfile, PositionalProfile, StationaryProfile,
    StrategyProfile,
};
use num::One;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Closed per-player payoff intervals; a missing bound is unbounded.
/// Keyed by player name so a box can be parsed before the game is known;
/// resolve against a concrete game with [`ConstraintBox::lower_vec`] and
/// [`ConstraintBox::upper_vec`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintBox {
    pub lower: BTreeMap<String, Rational>,
    pub upper: BTreeMap<String, Rational>,
}

impl ConstraintBox {
    pub fn unconstrained() -> Self {
        Self::default()
    }

    pub fn lower_vec(&self, g: &Game) -> Vec<Option<Rational>> {
        g.players()
            .iter()
            .map(|p| self.lower.get(p).cloned())
            .collect()
    }

    pub fn upper_vec(&self, g: &Game) -> Vec<Option<Rational>> {
        g.players()
            .iter()
            .map(|p| self.upper.get(p).cloned())
            .collect()
    }

    /// Problems that only show up against a concrete game: bounds for
    /// unknown players, or an empty interval.
    pub fn check_against(&self, g: &Game) -> Vec<String> {
        let mut out = Vec::new();
        for name in self.lower.keys().chain(self.upper.keys()) {
            if g.player_index(name).is_none() {
                let msg = format!("constraint for unknown player \"{name}\"");
                if !out.contains(&msg) {
                    out.push(msg);
                }
            }
        }
        for (name, lo) in &self.lower {
            if let Some(hi) = self.upper.get(name) {
                if lo > hi {
                    out.push(format!(
                        "empty interval for \"{name}\": lower {} > upper {}",
                        format_rational(lo),
                        format_rational(hi)
                    ));
                }
            }
        }
        out
    }

    /// Does the payoff vector `x` (indexed like `g.players()`) lie in the box?
    pub fn contains(&self, g: &Game, x: &[Rational]) -> bool {
        g.players().iter().enumerate().all(|(i, p)| {
            self.lower.get(p).is_none_or(|lo| *lo <= x[i])
                && self.upper.get(p).is_none_or(|hi| x[i] <= *hi)
        })
    }
}

fn syntax_error(err: &serde_json::Error) -> GameError {
    GameError::Syntax {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

/// Exact number out of a JSON value: strings via [`parse_rational`],
/// integer literals directly, float literals rejected.
fn rational_value(v: &Value, ctx: &str, violations: &mut Vec<String>) -> Option<Rational> {
    match v {
        Value::String(s) => match parse_rational(s) {
            Ok(q) => Some(q),
            Err(e) => {
                violations.push(format!("{ctx}: {e}"));
                None
            }
        },
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Some(Rational::from_integer(u.into()))
            } else {
                violations.push(format!(
                    "{ctx}: float literal {n} is not exact, write it as a string like \"1/2\""
                ));
                None
            }
        }
        other => {
            violations.push(format!("{ctx}: expected a number, got {other}"));
            None
        }
    }
}

fn as_object<'a>(
    v: &'a Value,
    ctx: &str,
    violations: &mut Vec<String>,
) -> Option<&'a Map<String, Value>> {
    match v.as_object() {
        Some(m) => Some(m),
        None => {
            violations.push(format!("{ctx}: expected an object"));
            None
        }
    }
}

fn as_str<'a>(v: &'a Value, ctx: &str, violations: &mut Vec<String>) -> Option<&'a str> {
    match v.as_str() {
        Some(s) => Some(s),
        None => {
            violations.push(format!("{ctx}: expected a string"));
            None
        }
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], ctx: &str, violations: &mut Vec<String>) {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            violations.push(format!("{ctx}: unknown key \"{key}\""));
        }
    }
}

/// Reads a game document. Malformed JSON is a position-annotated syntax
/// error; a well-formed document that breaks the game invariants yields the
/// full list of violations.
pub fn parse_game(text: &str) -> Result<Game, GameError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
    let mut violations = Vec::new();
    let mut b = GameBuilder::new();

    let Some(root) = doc.as_object() else {
        return Err(GameError::Invalid(vec![
            "document root must be an object".to_string(),
        ]));
    };
    check_keys(
        root,
        &["players", "initial", "vertices", "note"],
        "document",
        &mut violations,
    );

    match root.get("players") {
        Some(Value::Array(names)) => {
            for (k, n) in names.iter().enumerate() {
                if let Some(s) = as_str(n, &format!("players[{k}]"), &mut violations) {
                    b.player(s);
                }
            }
        }
        Some(other) => violations.push(format!("\"players\": expected an array, got {other}")),
        None => violations.push("missing \"players\"".to_string()),
    }

    match root.get("initial") {
        Some(v) => {
            if let Some(s) = as_str(v, "\"initial\"", &mut violations) {
                b.initial(s);
            }
        }
        None => violations.push("missing \"initial\"".to_string()),
    }

    if let Some(v) = root.get("note") {
        if let Some(s) = as_str(v, "\"note\"", &mut violations) {
            b.note(s);
        }
    }

    match root.get("vertices") {
        Some(Value::Array(entries)) => {
            for (k, entry) in entries.iter().enumerate() {
                let ctx = format!("vertices[{k}]");
                let Some(obj) = as_object(entry, &ctx, &mut violations) else {
                    continue;
                };
                let Some(id) = obj
                    .get("id")
                    .and_then(|v| v.as_str())
                    .map(str::to_string)
                else {
                    violations.push(format!("{ctx}: missing string \"id\""));
                    continue;
                };
                let ctx = format!("vertex \"{id}\"");
                if let Some(term) = obj.get("terminal") {
                    check_keys(obj, &["id", "terminal"], &ctx, &mut violations);
                    let Some(map) = as_object(term, &format!("{ctx}: \"terminal\""), &mut violations)
                    else {
                        continue;
                    };
                    let mut payoff = Vec::new();
                    for (player, val) in map {
                        if let Some(q) = rational_value(
                            val,
                            &format!("{ctx}: payoff for \"{player}\""),
                            &mut violations,
                        ) {
                            payoff.push((player.clone(), q));
                        }
                    }
                    b.terminal(id, payoff);
                    continue;
                }

                check_keys(obj, &["id", "owner", "edges"], &ctx, &mut violations);
                let Some(owner) = obj
                    .get("owner")
                    .and_then(|v| v.as_str())
                    .map(str::to_string)
                else {
                    violations.push(format!("{ctx}: missing string \"owner\""));
                    continue;
                };
                let edges = match obj.get("edges") {
                    Some(Value::Array(e)) => e.as_slice(),
                    Some(other) => {
                        violations
                            .push(format!("{ctx}: \"edges\" must be an array, got {other}"));
                        continue;
                    }
                    None => {
                        violations.push(format!("{ctx}: missing \"edges\""));
                        continue;
                    }
                };

                if owner == "stochastic" {
                    let mut dist = Vec::new();
                    for (j, e) in edges.iter().enumerate() {
                        let ectx = format!("{ctx}: edges[{j}]");
                        match e {
                            Value::Object(m) => {
                                check_keys(m, &["to", "prob"], &ectx, &mut violations);
                                let to = m.get("to").and_then(|v| v.as_str());
                                let prob = m.get("prob");
                                match (to, prob) {
                                    (Some(to), Some(pv)) => {
                                        if let Some(q) =
                                            rational_value(pv, &ectx, &mut violations)
                                        {
                                            dist.push((to.to_string(), q));
                                        }
                                    }
                                    _ => violations.push(format!(
                                        "{ectx}: stochastic edge needs \"to\" and \"prob\""
                                    )),
                                }
                            }
                            _ => violations.push(format!(
                                "{ectx}: stochastic edge needs an object with \"to\" and \"prob\""
                            )),
                        }
                    }
                    b.stochastic(id, dist);
                } else {
                    let mut targets = Vec::new();
                    for (j, e) in edges.iter().enumerate() {
                        let ectx = format!("{ctx}: edges[{j}]");
                        match e {
                            Value::String(s) => targets.push(s.clone()),
                            Value::Object(m) => {
                                if m.contains_key("prob") {
                                    violations.push(format!(
                                        "{ectx}: probability on an edge of a controlled vertex"
                                    ));
                                } else if let Some(to) = m.get("to").and_then(|v| v.as_str()) {
                                    targets.push(to.to_string());
                                } else {
                                    violations.push(format!("{ectx}: expected a vertex id"));
                                }
                            }
                            _ => violations.push(format!("{ectx}: expected a vertex id")),
                        }
                    }
                    b.controlled(id, owner, targets);
                }
            }
        }
        Some(other) => violations.push(format!("\"vertices\": expected an array, got {other}")),
        None => violations.push("missing \"vertices\"".to_string()),
    }

    for v in violations {
        b.violation(v);
    }
    b.build()
}

/// Pretty document in the same format [`parse_game`] reads; parsing it back
/// reproduces the game exactly (rationals are emitted as strings).
pub fn serialize_game(g: &Game) -> String {
    let vertices: Vec<Value> = (0..g.vertex_count())
        .map(|v| {
            let id = g.vertex_id(v);
            match g.kind(v) {
                crate::game::VertexKind::Terminal(x) => {
                    let payoff: Map<String, Value> = g
                        .players()
                        .iter()
                        .zip(x)
                        .map(|(p, q)| (p.clone(), Value::String(format_rational(q))))
                        .collect();
                    json!({"id": id, "terminal": payoff})
                }
                crate::game::VertexKind::Stochastic => {
                    let edges: Vec<Value> = g
                        .successors(v)
                        .iter()
                        .enumerate()
                        .map(|(k, &w)| {
                            json!({
                                "to": g.vertex_id(w),
                                "prob": format_rational(g.edge_prob(v, k)),
                            })
                        })
                        .collect();
                    json!({"id": id, "owner": "stochastic", "edges": edges})
                }
                crate::game::VertexKind::Controlled(i) => {
                    let edges: Vec<Value> = g
                        .successors(v)
                        .iter()
                        .map(|&w| Value::String(g.vertex_id(w).to_string()))
                        .collect();
                    json!({"id": id, "owner": g.players()[*i], "edges": edges})
                }
            }
        })
        .collect();

    let mut root = json!({
        "players": g.players(),
        "initial": g.vertex_id(g.initial()),
        "vertices": vertices,
    });
    if let Some(n) = g.note() {
        root["note"] = Value::String(n.to_string());
    }
    serde_json::to_string_pretty(&root).expect("serializing a JSON tree cannot fail")
}

/// Reads a constraint document `{"lower": {...}, "upper": {...}}`. A bound
/// may be the token "inf" or "-inf", which means the side is unbounded, the
/// same as omitting the entry.
pub fn parse_constraints(text: &str) -> Result<ConstraintBox, GameError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
    let mut violations = Vec::new();
    let mut cb = ConstraintBox::unconstrained();

    let Some(root) = doc.as_object() else {
        return Err(GameError::Invalid(vec![
            "constraint document root must be an object".to_string(),
        ]));
    };
    check_keys(root, &["lower", "upper"], "constraint document", &mut violations);

    for (key, unbounded_token) in [("lower", "-inf"), ("upper", "inf")] {
        let Some(side) = root.get(key) else { continue };
        let Some(map) = as_object(side, &format!("\"{key}\""), &mut violations) else {
            continue;
        };
        for (player, val) in map {
            let ctx = format!("{key} bound for \"{player}\"");
            if let Some(s) = val.as_str() {
                let tok = s.trim();
                if tok.eq_ignore_ascii_case(unbounded_token)
                    || (key == "upper" && tok.eq_ignore_ascii_case("+inf"))
                {
                    continue;
                }
                if tok.eq_ignore_ascii_case("inf") || tok.eq_ignore_ascii_case("-inf") {
                    violations.push(format!("{ctx}: {tok} makes the interval empty"));
                    continue;
                }
            }
            if let Some(q) = rational_value(val, &ctx, &mut violations) {
                if key == "lower" {
                    cb.lower.insert(player.clone(), q);
                } else {
                    cb.upper.insert(player.clone(), q);
                }
            }
        }
    }

    for (player, lo) in &cb.lower {
        if let Some(hi) = cb.upper.get(player) {
            if lo > hi {
                violations.push(format!(
                    "empty interval for \"{player}\": lower {} > upper {}",
                    format_rational(lo),
                    format_rational(hi)
                ));
            }
        }
    }

    if violations.is_empty() {
        Ok(cb)
    } else {
        Err(GameError::Invalid(violations))
    }
}

/// Constraint box back to its document form. Finite bounds only; unbounded
/// sides are simply absent, which [`parse_constraints`] reads back as such.
pub fn serialize_constraints(cb: &ConstraintBox) -> String {
    let side = |m: &BTreeMap<String, Rational>| {
        Value::Object(
            m.iter()
                .map(|(p, q)| (p.clone(), Value::String(format_rational(q))))
                .collect(),
        )
    };
    let root = json!({
        "lower": side(&cb.lower),
        "upper": side(&cb.upper),
    });
    serde_json::to_string_pretty(&root).expect("serializing a JSON tree cannot fail")
}

/// Reads a risk document `{"base": ..., "players": {...}}` and resolves it
/// against the game's player list. Every player must be tagged
/// "pessimist", "optimist", or `{"rho": ...}`; `base` is required exactly
/// when some player has a rho tag.
pub fn parse_risk(text: &str, g: &Game) -> Result<RiskAssignment, GameError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
    let mut violations = Vec::new();

    let Some(root) = doc.as_object() else {
        return Err(GameError::Invalid(vec![
            "risk document root must be an object".to_string(),
        ]));
    };
    check_keys(root, &["base", "players"], "risk document", &mut violations);

    let base = match root.get("base") {
        None => None,
        Some(Value::String(s)) if s.trim() == "e" => Some(Base::NaturalE),
        Some(v) => rational_value(v, "\"base\"", &mut violations).and_then(|q| {
            if q > Rational::from_integer(1.into()) {
                Some(Base::Exact(q))
            } else {
                violations.push(format!(
                    "\"base\": must exceed 1, got {}",
                    format_rational(&q)
                ));
                None
            }
        }),
    };

    let mut tags: Vec<Option<RiskTag>> = vec![None; g.player_count()];
    match root.get("players") {
        Some(Value::Object(map)) => {
            for (name, val) in map {
                let Some(i) = g.player_index(name) else {
                    violations.push(format!("risk tag for unknown player \"{name}\""));
                    continue;
                };
                let ctx = format!("risk tag for \"{name}\"");
                let tag = match val {
                    Value::String(s) => match s.trim() {
                        "pessimist" => Some(RiskTag::Extreme(XrMode::Pessimist)),
                        "optimist" => Some(RiskTag::Extreme(XrMode::Optimist)),
                        other => {
                            violations.push(format!(
                                "{ctx}: expected \"pessimist\", \"optimist\", or {{\"rho\": ...}}, got \"{other}\""
                            ));
                            None
                        }
                    },
                    Value::Object(m) => {
                        check_keys(m, &["rho"], &ctx, &mut violations);
                        match m.get("rho") {
                            Some(rv) => rational_value(rv, &format!("{ctx}: rho"), &mut violations)
                                .map(RiskTag::Entropic),
                            None => {
                                violations.push(format!("{ctx}: missing \"rho\""));
                                None
                            }
                        }
                    }
                    other => {
                        violations.push(format!("{ctx}: unexpected value {other}"));
                        None
                    }
                };
                tags[i] = tag;
            }
        }
        Some(other) => violations.push(format!("\"players\": expected an object, got {other}")),
        None => violations.push("missing \"players\"".to_string()),
    }

    for (i, t) in tags.iter().enumerate() {
        if t.is_none() {
            violations.push(format!("no risk tag for player \"{}\"", g.players()[i]));
        }
    }
    let tags: Vec<RiskTag> = tags.into_iter().flatten().collect();
    let needs_base = tags.iter().any(|t| matches!(t, RiskTag::Entropic(_)));
    if needs_base && base.is_none() {
        violations.push("\"base\" is required when any player has a rho tag".to_string());
    }

    if violations.is_empty() {
        Ok(RiskAssignment::new(base, tags))
    } else {
        Err(GameError::Invalid(violations))
    }
}

/// Risk assignment back to its document form, tags keyed by player name.
pub fn serialize_risk(risk: &RiskAssignment, g: &Game) -> String {
    let mut root = Map::new();
    if let Some(b) = risk.base() {
        let label = match b {
            Base::NaturalE => "e".to_string(),
            Base::Exact(q) => format_rational(q),
        };
        root.insert("base".to_string(), Value::String(label));
    }
    let players: Map<String, Value> = g
        .players()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let tag = match risk.tag(i) {
                RiskTag::Extreme(XrMode::Pessimist) => Value::String("pessimist".to_string()),
                RiskTag::Extreme(XrMode::Optimist) => Value::String("optimist".to_string()),
                RiskTag::Entropic(r) => json!({ "rho": format_rational(r) }),
            };
            (name.clone(), tag)
        })
        .collect();
    root.insert("players".to_string(), Value::Object(players));
    serde_json::to_string_pretty(&Value::Object(root)).expect("serializing a JSON tree cannot fail")
}

/// Successor position for an edge named by target id, with diagnostics.
fn succ_position(g: &Game, v: usize, to: &str, ctx: &str, violations: &mut Vec<String>) -> Option<usize> {
    let Some(w) = g.vertex_index(to) else {
        violations.push(format!("{ctx}: unknown vertex \"{to}\""));
        return None;
    };
    let k = g.successors(v).iter().position(|&x| x == w);
    if k.is_none() {
        violations.push(format!("{ctx}: the game has no edge {} -> {to}", g.vertex_id(v)));
    }
    k
}

/// Weighted successor rows out of an array of `{"to": ..., "prob": ...}`
/// entries. Either every entry carries a probability (summing to one) or
/// none does, in which case the distribution is uniform.
fn parse_move_distribution(
    rows: &[Value],
    g: &Game,
    v: usize,
    ctx: &str,
    violations: &mut Vec<String>,
) -> Option<Vec<(usize, Rational)>> {
    let before = violations.len();
    let mut entries: Vec<(usize, Option<Rational>)> = Vec::new();
    for row in rows {
        let Some(obj) = as_object(row, ctx, violations) else { continue };
        check_keys(obj, &["to", "prob"], ctx, violations);
        let Some(to) = obj.get("to").and_then(|t| t.as_str()) else {
            violations.push(format!("{ctx}: every entry needs a \"to\" string"));
            continue;
        };
        let Some(k) = succ_position(g, v, to, ctx, violations) else { continue };
        let prob = obj
            .get("prob")
            .and_then(|p| rational_value(p, &format!("{ctx} -> {to}"), violations));
        if entries.iter().any(|(other, _)| *other == k) {
            violations.push(format!("{ctx}: duplicate entry for successor \"{to}\""));
        }
        entries.push((k, prob));
    }
    if entries.is_empty() {
        violations.push(format!("{ctx}: empty distribution"));
    }
    let with_prob = entries.iter().filter(|(_, p)| p.is_some()).count();
    if with_prob != 0 && with_prob != entries.len() {
        violations.push(format!(
            "{ctx}: either all entries carry \"prob\" or none does"
        ));
    }
    if violations.len() > before {
        return None;
    }
    let share = Rational::one() / Rational::from_integer((entries.len() as i64).into());
    let mut out: Vec<(usize, Rational)> = entries
        .into_iter()
        .map(|(k, p)| (k, p.unwrap_or_else(|| share.clone())))
        .collect();
    out.sort_by_key(|(k, _)| *k);
    Some(out)
}

/// Reads a strategy document and resolves it against the game. The accepted
/// kinds are "positional", "stationary", "edgeset", and "memory".
pub fn parse_strategy(text: &str, g: &Game) -> Result<StrategyProfile, GameError> {
    let root: Value = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
    let mut violations = Vec::new();
    let profile = strategy_from_value(&root, g, &mut violations);
    match profile {
        Some(p) if violations.is_empty() => {
            let late = p.violations(g);
            if late.is_empty() {
                Ok(p)
            } else {
                Err(GameError::Invalid(late))
            }
        }
        _ => {
            if violations.is_empty() {
                violations.push("unreadable strategy document".to_string());
            }
            Err(GameError::Invalid(violations))
        }
    }
}

fn strategy_from_value(root: &Value, g: &Game, violations: &mut Vec<String>) -> Option<StrategyProfile> {
    let obj = as_object(root, "strategy", violations)?;
    let kind = obj.get("kind").and_then(|k| k.as_str());
    match kind {
        Some("positional") => {
            check_keys(obj, &["kind", "moves"], "positional strategy", violations);
            let Some(moves) = obj.get("moves") else {
                violations.push("missing \"moves\"".to_string());
                return None;
            };
            let moves = as_object(moves, "\"moves\"", violations)?;
            let mut p = PositionalProfile::new(g);
            for (id, to) in moves {
                let ctx = format!("move at \"{id}\"");
                let Some(v) = g.vertex_index(id) else {
                    violations.push(format!("{ctx}: unknown vertex"));
                    continue;
                };
                if g.owner(v).is_none() {
                    violations.push(format!("{ctx}: vertex is not controlled"));
                    continue;
                }
                let Some(to) = as_str(to, &ctx, violations) else { continue };
                p.choice[v] = succ_position(g, v, to, &ctx, violations);
            }
            Some(StrategyProfile::Positional(p))
        }
        Some("stationary") => {
            check_keys(obj, &["kind", "moves"], "stationary strategy", violations);
            let Some(moves) = obj.get("moves") else {
                violations.push("missing \"moves\"".to_string());
                return None;
            };
            let moves = as_object(moves, "\"moves\"", violations)?;
            let mut p = StationaryProfile::new(g);
            for (id, rows) in moves {
                let ctx = format!("distribution at \"{id}\"");
                let Some(v) = g.vertex_index(id) else {
                    violations.push(format!("{ctx}: unknown vertex"));
                    continue;
                };
                if g.owner(v).is_none() {
                    violations.push(format!("{ctx}: vertex is not controlled"));
                    continue;
                }
                let Some(rows) = rows.as_array() else {
                    violations.push(format!("{ctx}: expected an array"));
                    continue;
                };
                if let Some(dist) = parse_move_distribution(rows, g, v, &ctx, violations) {
                    p.rows[v] = dist;
                }
            }
            Some(StrategyProfile::Stationary(p))
        }
        Some("edgeset") => {
            check_keys(obj, &["kind", "semantics", "support"], "edgeset strategy", violations);
            let semantics = match obj.get("semantics").and_then(|s| s.as_str()) {
                Some("stationary") => EdgeSemantics::StationaryUniform,
                Some("commit") => EdgeSemantics::CommitOnFirstVisit,
                other => {
                    violations.push(format!(
                        "\"semantics\" must be \"stationary\" or \"commit\", got {other:?}"
                    ));
                    return None;
                }
            };
            let Some(pairs) = obj.get("support").and_then(|s| s.as_array()) else {
                violations.push("\"support\" must be an array of [from, to] pairs".to_string());
                return None;
            };
            let mut support = EdgeSet::empty(g);
            for pair in pairs {
                let ok = pair.as_array().and_then(|p| {
                    let [from, to] = p.as_slice() else { return None };
                    let from = from.as_str()?;
                    let to = to.as_str()?;
                    let v = g.vertex_index(from)?;
                    let eid = g.find_edge(v, g.vertex_index(to)?)?;
                    Some(eid)
                });
                match ok {
                    Some(eid) => support.insert(eid),
                    None => violations.push(format!("support entry {pair} is not a game edge")),
                }
            }
            Some(StrategyProfile::EdgeSet(EdgeSetProfile { support, semantics }))
        }
        Some("memory") => {
            check_keys(
                obj,
                &["kind", "states", "initial", "update", "output"],
                "memory strategy",
                violations,
            );
            let state_names: Vec<String> = match obj.get("states").and_then(|s| s.as_array()) {
                Some(rows) => rows
                    .iter()
                    .filter_map(|r| as_str(r, "\"states\"", violations))
                    .map(str::to_string)
                    .collect(),
                None => {
                    violations.push("\"states\" must be an array of names".to_string());
                    return None;
                }
            };
            let state_index = |name: &str, ctx: &str, violations: &mut Vec<String>| {
                let i = state_names.iter().position(|s| s == name);
                if i.is_none() {
                    violations.push(format!("{ctx}: unknown memory state \"{name}\""));
                }
                i
            };
            let initial = obj
                .get("initial")
                .and_then(|s| s.as_str())
                .and_then(|name| state_index(name, "\"initial\"", violations))
                .unwrap_or_else(|| {
                    violations.push("missing or unknown \"initial\" state".to_string());
                    0
                });
            let mut update = BTreeMap::new();
            for row in obj.get("update").and_then(|u| u.as_array()).map_or(&[] as &[Value], |a| a) {
                let parts: Option<(&str, &str, &str)> = row.as_array().and_then(|r| {
                    let [a, b, c] = r.as_slice() else { return None };
                    Some((a.as_str()?, b.as_str()?, c.as_str()?))
                });
                let Some((from, vertex, to)) = parts else {
                    violations.push(format!("update row {row} is not a [state, vertex, state] triple"));
                    continue;
                };
                let ctx = format!("update [{from}, {vertex}, {to}]");
                let Some(s) = state_index(from, &ctx, violations) else { continue };
                let Some(t) = state_index(to, &ctx, violations) else { continue };
                let Some(v) = g.vertex_index(vertex) else {
                    violations.push(format!("{ctx}: unknown vertex \"{vertex}\""));
                    continue;
                };
                if update.insert((s, v), t).is_some() {
                    violations.push(format!("{ctx}: duplicate update row"));
                }
            }
            let mut output = BTreeMap::new();
            for row in obj.get("output").and_then(|o| o.as_array()).map_or(&[] as &[Value], |a| a) {
                let parts = row.as_array().and_then(|r| {
                    let [a, b, c] = r.as_slice() else { return None };
                    Some((a.as_str()?, b.as_str()?, c.as_array()?))
                });
                let Some((state, vertex, dist)) = parts else {
                    violations.push(format!(
                        "output row {row} is not a [state, vertex, moves] triple"
                    ));
                    continue;
                };
                let ctx = format!("output [{state}, {vertex}]");
                let Some(s) = state_index(state, &ctx, violations) else { continue };
                let Some(v) = g.vertex_index(vertex) else {
                    violations.push(format!("{ctx}: unknown vertex \"{vertex}\""));
                    continue;
                };
                if g.owner(v).is_none() {
                    violations.push(format!("{ctx}: vertex is not controlled"));
                    continue;
                }
                if let Some(d) = parse_move_distribution(dist, g, v, &ctx, violations) {
                    if output.insert((s, v), d).is_some() {
                        violations.push(format!("{ctx}: duplicate output row"));
                    }
                }
            }
            Some(StrategyProfile::Memory(FiniteMemoryProfile {
                state_names,
                initial,
                update,
                output,
            }))
        }
        other => {
            violations.push(format!(
                "\"kind\" must be \"positional\", \"stationary\", \"edgeset\", or \"memory\", got {other:?}"
            ));
            None
        }
    }
}

/// Pretty document in the format [`parse_strategy`] reads; probabilities are
/// always written out, rows are in canonical order.
pub fn serialize_strategy(p: &StrategyProfile, g: &Game) -> String {
    let dist_value = |v: usize, row: &[(usize, Rational)]| -> Value {
        Value::Array(
            row.iter()
                .map(|(k, prob)| {
                    json!({
                        "to": g.vertex_id(g.successors(v)[*k]),
                        "prob": format_rational(prob),
                    })
                })
                .collect(),
        )
    };
    let value = match p {
        StrategyProfile::Positional(p) => {
            let mut moves = Map::new();
            for (v, k) in p.choice.iter().enumerate() {
                if let Some(k) = *k {
                    moves.insert(
                        g.vertex_id(v).to_string(),
                        Value::String(g.vertex_id(g.successors(v)[k]).to_string()),
                    );
                }
            }
            json!({ "kind": "positional", "moves": moves })
        }
        StrategyProfile::Stationary(p) => {
            let mut moves = Map::new();
            for (v, row) in p.rows.iter().enumerate() {
                if !row.is_empty() {
                    moves.insert(g.vertex_id(v).to_string(), dist_value(v, row));
                }
            }
            json!({ "kind": "stationary", "moves": moves })
        }
        StrategyProfile::EdgeSet(p) => {
            let support: Vec<Value> = p
                .support
                .pairs(g)
                .into_iter()
                .map(|(v, w)| json!([g.vertex_id(v), g.vertex_id(w)]))
                .collect();
            let semantics = match p.semantics {
                EdgeSemantics::StationaryUniform => "stationary",
                EdgeSemantics::CommitOnFirstVisit => "commit",
            };
            json!({ "kind": "edgeset", "semantics": semantics, "support": support })
        }
        StrategyProfile::Memory(m) => {
            let update: Vec<Value> = m
                .update
                .iter()
                .map(|(&(s, v), &t)| {
                    json!([m.state_names[s], g.vertex_id(v), m.state_names[t]])
                })
                .collect();
            let output: Vec<Value> = m
                .output
                .iter()
                .map(|(&(s, v), row)| {
                    json!([m.state_names[s], g.vertex_id(v), dist_value(v, row)])
                })
                .collect();
            json!({
                "kind": "memory",
                "states": m.state_names,
                "initial": m.state_names[m.initial],
                "update": update,
                "output": output,
            })
        }
    };
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    text
}
