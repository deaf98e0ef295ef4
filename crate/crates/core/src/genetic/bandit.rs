/// Discounted UCB1 over a fixed action set.
#[derive(Clone, Debug, PartialEq)]
pub struct BanditState {
    pub gamma: f64,
    /// Discounted reward sums.
    pub rewards: Vec<f64>,
    /// Discounted play counts.
    pub counts: Vec<f64>,
}

impl BanditState {
    pub fn new(actions: usize, gamma: f64) -> Self {
        BanditState {
            gamma,
            rewards: vec![0.0; actions],
            counts: vec![0.0; actions],
        }
    }

    pub fn num_actions(&self) -> usize {
        self.counts.len()
    }

    /// Unplayed actions first in index order, then the largest upper
    /// confidence bound (ties to the smaller index).
    pub fn select(&self) -> usize {
        if let Some(a) = self.counts.iter().position(|&n| n == 0.0) {
            return a;
        }
        let total: f64 = self.counts.iter().sum();
        let ln = total.ln();
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (a, (&r, &n)) in self.rewards.iter().zip(&self.counts).enumerate() {
            let val = r / n + (2.0 * ln / n).sqrt();
            if val > best_val {
                best = a;
                best_val = val;
            }
        }
        best
    }

    pub fn update(&mut self, action: usize, reward: f64) {
        for (r, n) in self.rewards.iter_mut().zip(self.counts.iter_mut()) {
            *r *= self.gamma;
            *n *= self.gamma;
        }
        self.rewards[action] += reward;
        self.counts[action] += 1.0;
    }
}

pub fn ucb1_select(bandit: &BanditState) -> usize {
    bandit.select()
}

pub fn ucb1_update(bandit: &mut BanditState, action: usize, reward: f64) {
    bandit.update(action, reward);
}

/// Improvement of the offspring over the main parent, in percent.
pub fn improvement_reward(parent_cost: f64, offspring_cost: f64) -> f64 {
    100.0 * (parent_cost - offspring_cost) / parent_cost
}
