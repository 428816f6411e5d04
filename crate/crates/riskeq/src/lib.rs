//! Solver and verification toolkit for multiplayer stochastic games with
//! terminal rewards and risk-sensitive players.
//!
//! A game is a finite directed graph whose vertices are either controlled by a
//! player, resolved by chance with exact rational probabilities, or terminal
//! with an exact payoff per player. Plays that never reach a terminal vertex
//! pay everyone zero. Players judge the induced payoff distribution through a
//! risk attitude: a *pessimist* values a distribution at the worst payoff that
//! has positive probability, an *optimist* at the best, and an *entropic*
//! player at an exponential certainty equivalent with rate `rho` (rate zero
//! being plain expectation).
//!
//! The crate provides:
//!
//! - [`game`] and [`json`]: arena representation, exact JSON round-tripping,
//!   validation, edge-set restriction and reachability ([`json::parse_game`],
//!   [`game::validate`], [`game::restrict_edges`], [`game::reachable`]);
//! - [`risk`]: risk functionals on finite payoff distributions
//!   ([`risk::extreme_risk`], [`risk::entropic_risk`],
//!   [`risk::modified_reward`]);
//! - [`qual`]: qualitative (support-level) analyses — cooperative safety,
//!   positive-probability attractors, payoff sets of uniformly mixed and of
//!   committed randomized profiles, and exact adversarial values
//!   ([`qual::adversarial_value`], [`qual::mdp_best_xr`]);
//! - [`xrse`]: equilibrium construction for non-negative payoffs by iterated
//!   edge removal ([`xrse::construct_xrse`]);
//! - [`optimist`]: constrained-equilibrium decision procedures for games in
//!   which every player is an optimist ([`optimist::solve_optimist`]);
//! - [`verify`]: strategy-profile evaluation and equilibrium checking,
//!   including finite-memory profiles and entropic stationary profiles
//!   ([`verify::verify_profile`], [`verify::verify_stationary_erse`]);
//! - [`oracle`]: brute-force ground truth by exhaustive enumeration, for
//!   cross-checking the analytical routines ([`oracle::oracle_constrained_existence`]);
//! - [`reduce`]: reductions and external encodings — expectation games via the
//!   monotone reward transform, satisfiability and reachability instances,
//!   and SMT-LIB emission of stationary-equilibrium constraints
//!   ([`reduce::er_to_nash`], [`reduce::emit_etr`]);
//! - [`sample`]: seeded random instance generation for testing and fuzzing.

pub mod game;
pub mod json;
pub mod optimist;
pub mod oracle;
pub mod qual;
pub mod rational;
pub mod reduce;
pub mod risk;
pub mod sample;
pub mod strategy;
#[cfg(test)]
pub(crate) mod testutil;
pub mod verify;
pub mod xrse;

pub use game::{reachable, restrict_edges, validate, EdgeSet, Game, VertexKind};
pub use json::{
    parse_constraints, parse_game, parse_risk, parse_strategy, serialize_constraints,
    serialize_game, serialize_risk, serialize_strategy, ConstraintBox,
};
pub use optimist::{solve_optimist, SolveResult};
pub use oracle::{
    brute_sat, oracle_adversarial_value, oracle_constrained_existence, oracle_edgeset_existence,
    parse_dimacs, OracleError, OracleOutcome, StrategyClass, ThreeCnf, DEFAULT_ORACLE_CAP,
};
pub use rational::Rational;
pub use reduce::{
    decimal_game_document, emit_etr, er_to_nash, gen_reachability_instance, gen_threesat_game,
    parse_arena,
};
pub use risk::{Base, RiskAssignment, RiskTag, XrMode};
pub use sample::{
    random_arena, random_box, random_game, random_risk, random_stationary, rescale_stationary,
};
pub use strategy::{
    EdgeSemantics, EdgeSetProfile, FiniteMemoryProfile, PositionalProfile, StationaryProfile,
    StrategyProfile,
};
pub use verify::{verify_profile, verify_stationary_erse, ErseReport, VerifyReport};
pub use xrse::{construct_xrse, XrseOutcome};
