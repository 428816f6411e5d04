//! Risk measures on finite payoff distributions.
//!
//! Extreme risk is support-determined and exact: a pessimist values a random
//! payoff at the worst outcome that has positive probability, an optimist at
//! the best. Entropic risk is the smooth family between those extremes,
//! evaluated in binary64 with an extremal-exponent shift so that no valid
//! input produces an infinity.

use crate::rational::{rational_to_f64, Rational};
use num::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XrMode {
    Pessimist,
    Optimist,
}

/// Per-player attitude: extreme (exact, support-based) or entropic with a
/// risk parameter. `rho = 0` means plain expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RiskTag {
    Extreme(XrMode),
    Entropic(Rational),
}

/// Logarithm base for entropic risk; must exceed 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    NaturalE,
    Exact(Rational),
}

impl Base {
    /// Natural log of the base, as binary64.
    pub fn ln(&self) -> f64 {
        match self {
            Base::NaturalE => 1.0,
            Base::Exact(q) => rational_to_f64(q).ln(),
        }
    }
}

/// Risk attitude of every player, indexed like the game's player list.
/// The base is present exactly when some player is entropic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskAssignment {
    base: Option<Base>,
    tags: Vec<RiskTag>,
}

impl RiskAssignment {
    pub fn new(base: Option<Base>, tags: Vec<RiskTag>) -> Self {
        RiskAssignment { base, tags }
    }

    pub fn all_pessimist(players: usize) -> Self {
        Self::new(None, vec![RiskTag::Extreme(XrMode::Pessimist); players])
    }

    pub fn all_optimist(players: usize) -> Self {
        Self::new(None, vec![RiskTag::Extreme(XrMode::Optimist); players])
    }

    pub fn player_count(&self) -> usize {
        self.tags.len()
    }

    pub fn tag(&self, i: usize) -> &RiskTag {
        &self.tags[i]
    }

    pub fn tags(&self) -> &[RiskTag] {
        &self.tags
    }

    pub fn base(&self) -> Option<&Base> {
        self.base.as_ref()
    }

    pub fn xr_mode(&self, i: usize) -> Option<XrMode> {
        match &self.tags[i] {
            RiskTag::Extreme(m) => Some(*m),
            RiskTag::Entropic(_) => None,
        }
    }

    pub fn has_entropic(&self) -> bool {
        self.tags.iter().any(|t| matches!(t, RiskTag::Entropic(_)))
    }

    pub fn is_all_extreme(&self) -> bool {
        !self.has_entropic()
    }

    pub fn is_all_optimist(&self) -> bool {
        self.tags
            .iter()
            .all(|t| matches!(t, RiskTag::Extreme(XrMode::Optimist)))
    }

    /// Indices of pessimistic players, in player order.
    pub fn pessimists(&self) -> Vec<usize> {
        (0..self.tags.len())
            .filter(|&i| matches!(self.tags[i], RiskTag::Extreme(XrMode::Pessimist)))
            .collect()
    }
}

/// Probability distribution with finite support: `(payoff, probability)`
/// atoms with strictly positive probabilities summing to 1. Construction
/// merges duplicate payoffs and sorts atoms by payoff, so the first atom is
/// the pessimist's value and the last the optimist's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePayoffDistribution {
    atoms: Vec<(Rational, Rational)>,
}

impl FinitePayoffDistribution {
    pub fn new(
        atoms: impl IntoIterator<Item = (Rational, Rational)>,
    ) -> Result<Self, String> {
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (x, p) in atoms {
            if p <= Rational::zero() {
                return Err(format!(
                    "non-positive probability {} for payoff {}",
                    crate::rational::format_rational(&p),
                    crate::rational::format_rational(&x)
                ));
            }
            match merged.binary_search_by(|(y, _)| y.cmp(&x)) {
                Ok(i) => merged[i].1 += p,
                Err(i) => merged.insert(i, (x, p)),
            }
        }
        let total: Rational = merged.iter().map(|(_, p)| p.clone()).sum();
        if merged.is_empty() || !num::One::is_one(&total) {
            return Err(format!(
                "probabilities sum to {}, not 1",
                crate::rational::format_rational(&total)
            ));
        }
        Ok(FinitePayoffDistribution { atoms: merged })
    }

    pub fn point(x: Rational) -> Self {
        FinitePayoffDistribution {
            atoms: vec![(x, num::One::one())],
        }
    }

    /// Atoms sorted by payoff ascending.
    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn expectation(&self) -> Rational {
        self.atoms.iter().map(|(x, p)| x * p).sum()
    }
}

/// Worst (pessimist) or best (optimist) payoff in the support. Exact.
pub fn extreme_risk(d: &FinitePayoffDistribution, mode: XrMode) -> Rational {
    match mode {
        XrMode::Pessimist => d.atoms.first().unwrap().0.clone(),
        XrMode::Optimist => d.atoms.last().unwrap().0.clone(),
    }
}

/// Entropic risk −(1/ρ)·log_β(Σ p_k β^{−ρ x_k}), with ρ = 0 evaluated as the
/// exact expectation. The sum is always computed relative to its largest
/// exponent, so intermediate values stay in [0, 1] and no valid input
/// overflows to infinity.
pub fn entropic_risk(d: &FinitePayoffDistribution, base: &Base, rho: &Rational) -> f64 {
    if rho.is_zero() {
        return rational_to_f64(&d.expectation());
    }
    let ln_b = base.ln();
    let r = rational_to_f64(rho);
    let exponents: Vec<f64> = d
        .atoms
        .iter()
        .map(|(x, _)| -r * rational_to_f64(x) * ln_b)
        .collect();
    let a = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !a.is_finite() {
        // Exponent magnitude beyond binary64: the dominating atom decides,
        // which is the support extreme on the side the sign of rho favors.
        // Saturate so even unrepresentable payoffs stay finite.
        let mode = if r > 0.0 {
            XrMode::Pessimist
        } else {
            XrMode::Optimist
        };
        return rational_to_f64(&extreme_risk(d, mode)).clamp(f64::MIN, f64::MAX);
    }
    let s: f64 = d
        .atoms
        .iter()
        .zip(&exponents)
        .map(|((_, p), &e)| rational_to_f64(p) * (e - a).exp())
        .sum();
    -(a + s.ln()) / (r * ln_b)
}

/// Order-preserving payoff transform with fixed point 0: for ρ > 0 it is
/// 1 − β^{−ρx}, for ρ < 0 it is β^{−ρx} − 1. A distribution's entropic risk
/// clears a threshold r exactly when the expected transformed payoff clears
/// the transformed threshold, which reduces entropic comparisons to
/// expectation comparisons.
pub fn modified_reward(x: &Rational, base: &Base, rho: &Rational) -> f64 {
    assert!(!rho.is_zero(), "transform undefined for rho = 0");
    let e = -rational_to_f64(rho) * rational_to_f64(x) * base.ln();
    if rho > &Rational::zero() {
        -e.exp_m1()
    } else {
        e.exp_m1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lottery() -> FinitePayoffDistribution {
        FinitePayoffDistribution::new([(rat_int(40), rat(1, 40)), (rat_int(0), rat(39, 40))])
            .unwrap()
    }

    fn random_distribution(rng: &mut ChaCha8Rng, atoms: usize) -> FinitePayoffDistribution {
        // Random payoffs in [-10, 10] with a random positive rational weight
        // each, normalized by the total.
        let weights: Vec<i64> = (0..atoms).map(|_| rng.random_range(1..100)).collect();
        let total: i64 = weights.iter().sum();
        FinitePayoffDistribution::new(weights.iter().map(|&w| {
            (
                rat(rng.random_range(-40..=40), rng.random_range(1..=4)),
                rat(w, total),
            )
        }))
        .unwrap()
    }

    #[test]
    fn extreme_risk_reads_the_support() {
        let d = lottery();
        assert_eq!(extreme_risk(&d, XrMode::Optimist), rat_int(40));
        assert_eq!(extreme_risk(&d, XrMode::Pessimist), rat_int(0));
        let point = FinitePayoffDistribution::point(rat_int(1));
        assert_eq!(extreme_risk(&point, XrMode::Optimist), rat_int(1));
        assert_eq!(extreme_risk(&point, XrMode::Pessimist), rat_int(1));
    }

    #[test]
    fn construction_merges_and_validates() {
        let d = FinitePayoffDistribution::new([
            (rat_int(1), rat(1, 4)),
            (rat_int(0), rat(1, 2)),
            (rat_int(1), rat(1, 4)),
        ])
        .unwrap();
        assert_eq!(d.atoms(), &[(rat_int(0), rat(1, 2)), (rat_int(1), rat(1, 2))]);

        assert!(FinitePayoffDistribution::new([(rat_int(1), rat(1, 2))]).is_err());
        assert!(FinitePayoffDistribution::new([(rat_int(1), rat_int(0)), (rat_int(0), rat_int(1))])
            .is_err());
    }

    #[test]
    fn entropic_risk_of_a_point_mass_is_the_payoff() {
        for c in [rat_int(0), rat_int(7), rat(-3, 2), rat_int(40)] {
            let d = FinitePayoffDistribution::point(c.clone());
            for rho in [rat_int(0), rat_int(1), rat_int(-2), rat(1, 3)] {
                for base in [Base::NaturalE, Base::Exact(rat(5, 2))] {
                    let m = entropic_risk(&d, &base, &rho);
                    let expected = rational_to_f64(&c);
                    assert!(
                        (m - expected).abs() <= 1e-12 * expected.abs().max(1.0),
                        "point mass {expected} at rho {rho}: got {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_rho_is_the_exact_expectation() {
        let m = entropic_risk(&lottery(), &Base::NaturalE, &rat_int(0));
        assert_eq!(m, 1.0);
    }

    #[test]
    fn lottery_at_rho_one_matches_direct_evaluation() {
        let m = entropic_risk(&lottery(), &Base::NaturalE, &rat_int(1));
        // Same quantity computed the straightforward way, no shift.
        let direct = -((1.0f64 / 40.0) * (-40.0f64).exp() + 39.0 / 40.0).ln();
        assert!((m - direct).abs() <= 1e-12, "{m} vs {direct}");
        assert!((m - 0.0253178).abs() < 1e-7);
    }

    #[test]
    fn shift_prevents_overflow_on_extreme_parameters() {
        let d = FinitePayoffDistribution::new([
            (rat_int(1_000_000), rat(1, 2)),
            (rat_int(0), rat(1, 2)),
        ])
        .unwrap();
        for rho in [rat_int(50), rat_int(-50), rat_int(5000)] {
            let m = entropic_risk(&d, &Base::NaturalE, &rho);
            assert!(m.is_finite(), "rho {rho} gave {m}");
        }
        // Exponent beyond binary64 range: falls back to the dominating atom.
        let huge = Rational::from_integer(num::BigInt::from(10).pow(320));
        let d2 = FinitePayoffDistribution::new([
            (-huge.clone(), rat(1, 2)),
            (rat_int(0), rat(1, 2)),
        ])
        .unwrap();
        assert!(entropic_risk(&d2, &Base::NaturalE, &rat_int(1)).is_finite());
    }

    #[test]
    fn sandwich_between_the_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = random_distribution(&mut rng, 4);
            let lo = rational_to_f64(&extreme_risk(&d, XrMode::Pessimist));
            let hi = rational_to_f64(&extreme_risk(&d, XrMode::Optimist));
            for rho in [rat_int(-20), rat_int(-1), rat_int(0), rat(1, 2), rat_int(30)] {
                let m = entropic_risk(&d, &Base::NaturalE, &rho);
                assert!(
                    lo - 1e-9 <= m && m <= hi + 1e-9,
                    "{m} outside [{lo}, {hi}] at rho {rho}"
                );
            }
        }
    }

    #[test]
    fn monotone_under_pointwise_payoff_increase() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let d1 = random_distribution(&mut rng, 4);
            let bump = rat(rng.random_range(1..=10), 4);
            let d2 = FinitePayoffDistribution::new(
                d1.atoms().iter().map(|(x, p)| (x + &bump, p.clone())),
            )
            .unwrap();
            for rho in [rat_int(-3), rat_int(0), rat_int(2)] {
                let m1 = entropic_risk(&d1, &Base::NaturalE, &rho);
                let m2 = entropic_risk(&d2, &Base::NaturalE, &rho);
                assert!(m1 <= m2 + 1e-9, "bump by {bump} decreased {m1} to {m2}");
            }
        }
    }

    #[test]
    fn translative_in_the_shift_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let d = random_distribution(&mut rng, 3);
            let c = rat(rng.random_range(-20..=20), 2);
            let shifted = FinitePayoffDistribution::new(
                d.atoms().iter().map(|(x, p)| (x + &c, p.clone())),
            )
            .unwrap();
            for rho in [rat_int(-2), rat(1, 2), rat_int(4)] {
                let lhs = entropic_risk(&shifted, &Base::NaturalE, &rho);
                let rhs = entropic_risk(&d, &Base::NaturalE, &rho) + rational_to_f64(&c);
                assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn converges_to_the_extremes_for_large_risk_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..30 {
            let d = random_distribution(&mut rng, 4);
            for (rho, mode) in [
                (rat_int(50), XrMode::Pessimist),
                (rat_int(200), XrMode::Pessimist),
                (rat_int(-50), XrMode::Optimist),
                (rat_int(-200), XrMode::Optimist),
            ] {
                let xr = rational_to_f64(&extreme_risk(&d, mode));
                let m = entropic_risk(&d, &Base::NaturalE, &rho);
                // The atom at the extreme keeps weight >= its probability in
                // the exponential sum, which caps the gap by -ln(p)/|rho|.
                let p_extreme = match mode {
                    XrMode::Pessimist => &d.atoms().first().unwrap().1,
                    XrMode::Optimist => &d.atoms().last().unwrap().1,
                };
                let cap = -rational_to_f64(p_extreme).ln() / rational_to_f64(&rho).abs();
                assert!(
                    (m - xr).abs() <= cap + 1e-9,
                    "|{m} - {xr}| > {cap} at rho {rho}"
                );
            }
        }
    }

    #[test]
    fn transform_examples_and_shape() {
        for (rho, base) in [
            (rat_int(1), Base::NaturalE),
            (rat_int(-2), Base::NaturalE),
            (rat(1, 3), Base::Exact(rat_int(2))),
        ] {
            assert_eq!(modified_reward(&rat_int(0), &base, &rho), 0.0);
        }
        let h = modified_reward(&rat_int(1), &Base::NaturalE, &rat_int(1));
        assert!((h - (1.0 - (-1.0f64).exp())).abs() <= 1e-15);
        assert!((h - 0.6321206).abs() < 1e-7);
        let h = modified_reward(&rat_int(1), &Base::NaturalE, &rat_int(-1));
        assert!((h - (1.0f64.exp() - 1.0)).abs() <= 1e-15);
        assert!((h - 1.7182818).abs() < 1e-7);

        for rho in [rat(1, 2), rat_int(3), rat(-1, 2), rat_int(-4)] {
            let mut prev = f64::NEG_INFINITY;
            for x in -8..=8 {
                let h = modified_reward(&rat(x, 2), &Base::NaturalE, &rho);
                assert!(h > prev, "not increasing at x={x}/2, rho={rho}");
                prev = h;
            }
        }
    }

    #[test]
    fn transform_reduces_threshold_comparisons_to_expectations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = Base::NaturalE;
        let mut checked = 0;
        for _ in 0..200 {
            let d = random_distribution(&mut rng, 3);
            let rho = rat(rng.random_range(1..=8), 2);
            let r = rat(rng.random_range(-30..=30), 3);
            let m = entropic_risk(&d, &base, &rho);
            let lhs: f64 = d
                .atoms()
                .iter()
                .map(|(x, p)| rational_to_f64(p) * modified_reward(x, &base, &rho))
                .sum();
            let rhs = 1.0
                - (-rational_to_f64(&rho) * rational_to_f64(&r)).exp();
            // Only decide cases clearly away from the boundary; there the
            // two comparisons must agree.
            if (m - rational_to_f64(&r)).abs() > 1e-9 {
                assert_eq!(
                    m >= rational_to_f64(&r),
                    lhs >= rhs,
                    "threshold {r} vs measure {m}"
                );
                checked += 1;
            }
        }
        assert!(checked > 150, "too few decisive samples: {checked}");
    }
}
