use crate::model::{Instance, ModelError};

/// Instance-level normalisers for the penalty terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingConstants {
    /// Average distance-to-time ratio over all arcs.
    pub gamma: f64,
    /// `2 * max c - min c` over all arcs between distinct nodes.
    pub theta: f64,
}

pub fn scaling_constants(inst: &Instance) -> Result<ScalingConstants, ModelError> {
    let n = inst.num_nodes();
    if n < 2 {
        return Err(ModelError::InvalidInstance("need at least two nodes".into()));
    }
    let (mut sum_c, mut sum_t) = (0.0, 0.0);
    let (mut max_c, mut min_c) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let c = inst.dist(i, j);
            sum_c += c;
            sum_t += inst.time(i, j);
            max_c = max_c.max(c);
            min_c = min_c.min(c);
        }
    }
    if !(sum_c > 0.0) || !(sum_t > 0.0) {
        return Err(ModelError::InvalidInstance(
            "distance or travel-time matrix is identically zero".into(),
        ));
    }
    Ok(ScalingConstants {
        gamma: sum_c / sum_t,
        theta: 2.0 * max_c - min_c,
    })
}

pub const LAMBDA_MIN: f64 = 0.01;
pub const LAMBDA_MAX: f64 = 10_000.0;

/// Adaptive coefficients for the time-window, capacity, duration and depot
/// penalty terms, in that order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenaltyState {
    pub lambda: [f64; 4],
    pub kappa: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for PenaltyState {
    fn default() -> Self {
        PenaltyState::new(0.5)
    }
}

impl PenaltyState {
    pub fn new(kappa: f64) -> Self {
        PenaltyState {
            lambda: [1.0; 4],
            kappa,
            min: LAMBDA_MIN,
            max: LAMBDA_MAX,
        }
    }

    pub fn adapt(&mut self, violated: [bool; 4]) {
        for (l, v) in self.lambda.iter_mut().zip(violated) {
            let next = if v { *l / self.kappa } else { *l * self.kappa };
            *l = next.clamp(self.min, self.max);
        }
    }
}

pub fn adapt_penalties(penalties: &PenaltyState, violated: [bool; 4]) -> PenaltyState {
    let mut p = *penalties;
    p.adapt(violated);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FleetLimits, Node, Variant};

    #[test]
    fn adaptation_steps() {
        let p = PenaltyState::new(0.5);
        let q = adapt_penalties(&p, [true, false, true, false]);
        assert_eq!(q.lambda, [2.0, 0.5, 2.0, 0.5]);
    }

    #[test]
    fn adaptation_is_clamped() {
        let mut p = PenaltyState::new(0.5);
        for _ in 0..100 {
            p.adapt([true, false, true, false]);
        }
        assert_eq!(p.lambda, [LAMBDA_MAX, LAMBDA_MIN, LAMBDA_MAX, LAMBDA_MIN]);
    }

    #[test]
    fn gamma_is_one_when_time_equals_distance() {
        let depots = vec![Node::depot(0, 0.0, 0.0)];
        let customers = vec![
            Node::customer(1, 3.0, 4.0, 1.0, 0.0),
            Node::customer(2, 6.0, 8.0, 1.0, 0.0),
        ];
        let limits = FleetLimits {
            vehicles_per_depot: None,
            capacity: 5.0,
            max_duration: None,
        };
        let inst = Instance::euclidean("g", Variant::Mdvrp, depots, customers, limits).unwrap();
        let k = scaling_constants(&inst).unwrap();
        assert_eq!(k.gamma, 1.0);
        // arcs: 5, 5, 10
        assert_eq!(k.theta, 15.0);
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let depots = vec![Node::depot(0, 1.0, 1.0)];
        let customers = vec![Node::customer(1, 1.0, 1.0, 1.0, 0.0)];
        let limits = FleetLimits {
            vehicles_per_depot: None,
            capacity: 5.0,
            max_duration: None,
        };
        let inst = Instance::euclidean("z", Variant::Mdvrp, depots, customers, limits).unwrap();
        assert!(scaling_constants(&inst).is_err());
    }
}
