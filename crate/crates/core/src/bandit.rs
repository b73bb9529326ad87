//! Upper Confidence Bound policies over hypothesis arms.
//!
//! Plain UCB selects `argmax_j μ_j + c·sqrt(ln p / n_j)`; the discounted
//! variant (D-UCB) geometrically decays both reward and play statistics so
//! the policy tracks nonstationary rewards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-arm reward/plays statistics with exploration constant `c` and
/// discount `gamma`. Plays are real-valued to support discounting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BanditState {
    reward_sums: Vec<f64>,
    plays: Vec<f64>,
    total_plays: f64,
    pub c: f64,
    pub gamma: f64,
}

impl BanditState {
    pub fn new(arms: usize, c: f64, gamma: f64) -> Self {
        assert!(arms > 0, "bandit needs at least one arm");
        assert!(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
        Self {
            reward_sums: vec![0.0; arms],
            plays: vec![0.0; arms],
            total_plays: 0.0,
            c,
            gamma,
        }
    }

    pub fn arms(&self) -> usize {
        self.plays.len()
    }

    pub fn plays(&self, arm: usize) -> f64 {
        self.plays[arm]
    }

    pub fn total_plays(&self) -> f64 {
        self.total_plays
    }

    /// Mean reward of an arm; 0 for unplayed arms.
    pub fn mean(&self, arm: usize) -> f64 {
        if self.plays[arm] > 0.0 {
            self.reward_sums[arm] / self.plays[arm]
        } else {
            0.0
        }
    }

    /// UCB value of an arm; unplayed arms get `+inf`. `ln p` is clamped to 0
    /// from below so discounted totals below 1 keep the bonus real-valued.
    pub fn ucb(&self, arm: usize) -> f64 {
        if self.plays[arm] <= 0.0 {
            return f64::INFINITY;
        }
        let exploration = (self.total_plays.max(1.0).ln() / self.plays[arm]).sqrt();
        self.mean(arm) + self.c * exploration
    }

    /// Arm with the maximal UCB value. Unplayed arms are selected first in
    /// ascending index order; finite ties break to the lowest index.
    pub fn select(&self) -> usize {
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        for arm in 0..self.arms() {
            let value = self.ucb(arm);
            if value > best_value {
                best = arm;
                best_value = value;
            }
        }
        best
    }

    /// Records one play of `arm` with the given reward in `[0, 1]`.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.arms() {
            return Err(Error::NoArms);
        }
        if !(0.0..=1.0).contains(&reward) || !reward.is_finite() {
            return Err(Error::RewardOutOfRange(reward));
        }
        self.reward_sums[arm] += reward;
        self.plays[arm] += 1.0;
        self.total_plays += 1.0;
        Ok(())
    }

    /// Discounts all reward and play statistics by `gamma`.
    pub fn discount(&mut self) {
        if self.gamma == 1.0 {
            return;
        }
        for sum in &mut self.reward_sums {
            *sum *= self.gamma;
        }
        for plays in &mut self.plays {
            *plays *= self.gamma;
        }
        self.total_plays *= self.gamma;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_arm_is_always_selected() {
        let mut state = BanditState::new(1, 0.5, 1.0);
        assert_eq!(state.select(), 0);
        state.update(0, 0.3).unwrap();
        assert_eq!(state.select(), 0);
    }

    #[test]
    fn unplayed_arm_has_infinite_bonus() {
        let mut state = BanditState::new(2, 0.5, 1.0);
        state.update(0, 0.5).unwrap();
        assert_eq!(state.select(), 1);
    }

    #[test]
    fn ucb_values_match_closed_form() {
        let mut state = BanditState::new(2, 0.5, 1.0);
        for _ in 0..5 {
            state.update(0, 0.9).unwrap();
            state.update(1, 0.5).unwrap();
        }
        // mu = (0.9, 0.5), n = (5, 5), p = 10, c = 0.5.
        let bonus = 0.5 * (10.0f64.ln() / 5.0).sqrt();
        assert!((state.ucb(0) - (0.9 + bonus)).abs() < 1e-12);
        assert!((state.ucb(1) - (0.5 + bonus)).abs() < 1e-12);
        assert!((state.ucb(0) - 1.2393).abs() < 1e-3);
        assert!((state.ucb(1) - 0.8393).abs() < 1e-3);
        assert_eq!(state.select(), 0);
    }

    #[test]
    fn update_accumulates_means() {
        let mut state = BanditState::new(1, 0.5, 1.0);
        state.update(0, 0.7).unwrap();
        assert!((state.mean(0) - 0.7).abs() < 1e-12);
        assert_eq!(state.plays(0), 1.0);
        let mut state = BanditState::new(1, 0.5, 1.0);
        state.update(0, 0.4).unwrap();
        state.update(0, 0.8).unwrap();
        assert!((state.mean(0) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_reward() {
        let mut state = BanditState::new(1, 0.5, 1.0);
        assert!(state.update(0, 1.2).is_err());
        assert!(state.update(0, -0.1).is_err());
        assert!(state.update(0, f64::NAN).is_err());
    }

    #[test]
    fn discount_scales_statistics_and_keeps_means() {
        let mut state = BanditState::new(2, 0.5, 0.9);
        state.update(0, 0.6).unwrap();
        state.update(0, 0.6).unwrap();
        for _ in 0..4 {
            state.update(1, 0.3).unwrap();
        }
        let mean0 = state.mean(0);
        let mean1 = state.mean(1);
        state.discount();
        assert!((state.plays(0) - 1.8).abs() < 1e-12);
        assert!((state.plays(1) - 3.6).abs() < 1e-12);
        assert!((state.total_plays() - 5.4).abs() < 1e-12);
        assert!((state.mean(0) - mean0).abs() < 1e-12);
        assert!((state.mean(1) - mean1).abs() < 1e-12);
    }

    #[test]
    fn gamma_one_discount_is_noop() {
        let mut state = BanditState::new(2, 0.5, 1.0);
        state.update(0, 0.5).unwrap();
        let before = state.clone();
        state.discount();
        assert_eq!(before.plays(0), state.plays(0));
        assert_eq!(before.total_plays(), state.total_plays());
    }

    #[test]
    fn total_plays_invariant_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut state = BanditState::new(4, 0.5, 0.95);
        for _ in 0..200 {
            let arm = state.select();
            state.update(arm, rng.random_range(0.0..1.0)).unwrap();
            if rng.random::<f64>() < 0.3 {
                state.discount();
            }
            let sum: f64 = (0..state.arms()).map(|a| state.plays(a)).sum();
            assert!((sum - state.total_plays()).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_exploration_is_greedy_after_first_round() {
        let mut state = BanditState::new(3, 0.0, 1.0);
        state.update(0, 0.2).unwrap();
        state.update(1, 0.9).unwrap();
        state.update(2, 0.5).unwrap();
        for _ in 0..10 {
            let arm = state.select();
            assert_eq!(arm, 1);
            state.update(arm, 0.9).unwrap();
        }
    }

    /// Stationary Bernoulli bandit: UCB concentrates on the best arm.
    #[test]
    fn ucb_regret_on_stationary_arms() {
        let means = [0.8, 0.6, 0.6, 0.6, 0.6];
        let mut total_best_share = 0.0;
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut state = BanditState::new(5, 0.5, 1.0);
            let mut best_in_tail = 0usize;
            for pull in 0..1000 {
                let arm = state.select();
                let reward = if rng.random::<f64>() < means[arm] { 1.0 } else { 0.0 };
                state.update(arm, reward).unwrap();
                if pull >= 900 && arm == 0 {
                    best_in_tail += 1;
                }
            }
            total_best_share += best_in_tail as f64 / 100.0;
        }
        let avg = total_best_share / 20.0;
        assert!(avg > 0.8, "best-arm share {avg}");
    }

    /// Mean swap halfway: D-UCB adapts, undiscounted UCB lags.
    #[test]
    fn discounted_ucb_adapts_to_mean_swap() {
        let mut ducb_share = 0.0;
        let mut ucb_share = 0.0;
        for seed in 0..20u64 {
            for (discounted, share) in [(true, &mut ducb_share), (false, &mut ucb_share)] {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let gamma = if discounted { 0.9 } else { 1.0 };
                let mut state = BanditState::new(2, 0.5, gamma);
                let mut hits = 0usize;
                for pull in 0..1000 {
                    let means = if pull < 500 { [0.8, 0.4] } else { [0.4, 0.8] };
                    let arm = state.select();
                    let reward = if rng.random::<f64>() < means[arm] { 1.0 } else { 0.0 };
                    state.update(arm, reward).unwrap();
                    state.discount();
                    if pull >= 600 && arm == 1 {
                        hits += 1;
                    }
                }
                *share += hits as f64 / 400.0;
            }
        }
        ducb_share /= 20.0;
        ucb_share /= 20.0;
        assert!(ducb_share > 0.7, "D-UCB share {ducb_share}");
        assert!(ducb_share > ucb_share, "D-UCB {ducb_share} vs UCB {ucb_share}");
    }
}
