//! Granular neighborhoods: arc pruning by time windows and correlated
//! neighbor lists.

use crate::eval::ScalingConstants;
use crate::model::Instance;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeighborConfig {
    pub theta: usize,
    /// Weight of the waiting term.
    pub alpha: f64,
    /// Weight of the lateness term.
    pub beta: f64,
}

impl Default for NeighborConfig {
    fn default() -> Self {
        NeighborConfig {
            theta: 50,
            alpha: 1.0,
            beta: 10.0,
        }
    }
}

/// Correlation of arc `i -> j`; lower is better. Not symmetric.
pub fn correlation(i: usize, j: usize, consts: &ScalingConstants, cfg: &NeighborConfig, inst: &Instance) -> f64 {
    let a = inst.node(i);
    let b = inst.node(j);
    let t = inst.time(i, j);
    let wait = (b.earliest - a.latest - a.service - t).max(0.0);
    // With two infinite deadlines the difference is NaN; `max` maps it to 0.
    let late = (a.latest + a.service + t - b.latest).max(0.0);
    inst.dist(i, j) + consts.gamma * (cfg.alpha * wait + cfg.beta * late)
}

/// Whether `j` can ever be served right after `i` without lateness.
#[inline]
fn arc_feasible(i: usize, j: usize, inst: &Instance) -> bool {
    let a = inst.node(i);
    a.earliest + a.service + inst.time(i, j) <= inst.node(j).latest
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborLists {
    n: usize,
    lists: Vec<Vec<usize>>,
    reverse: Vec<Vec<usize>>,
    mask: Vec<bool>,
}

impl NeighborLists {
    pub fn build(inst: &Instance, cfg: &NeighborConfig, consts: &ScalingConstants) -> Self {
        let n = inst.num_nodes();
        let mut mask = vec![true; n * n];
        for i in inst.customers() {
            for j in inst.customers() {
                mask[i * n + j] = i != j && arc_feasible(i, j, inst);
            }
        }
        let mut lists = vec![Vec::new(); n];
        for i in inst.customers() {
            let mut cand: Vec<(f64, usize)> = inst
                .customers()
                .filter(|&j| mask[i * n + j])
                .map(|j| (correlation(i, j, consts, cfg, inst), j))
                .collect();
            cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            cand.truncate(cfg.theta);
            lists[i] = cand.into_iter().map(|(_, j)| j).collect();
        }
        let mut reverse = vec![Vec::new(); n];
        for (i, l) in lists.iter().enumerate() {
            for &j in l {
                reverse[j].push(i);
            }
        }
        NeighborLists {
            n,
            lists,
            reverse,
            mask,
        }
    }

    /// Customers correlated with `i`, most correlated first. Empty for depots.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    /// Customers whose lists contain `j`.
    pub fn reverse_neighbors(&self, j: usize) -> &[usize] {
        &self.reverse[j]
    }

    /// Arc validity; arcs touching a depot are always valid.
    #[inline]
    pub fn valid(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::scaling_constants;
    use crate::model::{FleetLimits, Node, Variant};

    fn limits() -> FleetLimits {
        FleetLimits {
            vehicles_per_depot: None,
            capacity: 100.0,
            max_duration: None,
        }
    }

    #[test]
    fn windowless_correlation_is_distance() {
        let depots = vec![Node::depot(0, 0.0, 0.0)];
        let customers = (1..6).map(|k| Node::customer(k, k as f64, 0.0, 1.0, 0.0)).collect();
        let inst = Instance::euclidean("w", Variant::Mdvrp, depots, customers, limits()).unwrap();
        let k = scaling_constants(&inst).unwrap();
        let cfg = NeighborConfig {
            theta: 4,
            ..Default::default()
        };
        assert_eq!(correlation(1, 3, &k, &cfg, &inst), 2.0);
        let nl = NeighborLists::build(&inst, &cfg, &k);
        assert_eq!(nl.neighbors(3), &[2, 4, 1, 5]);
        assert_eq!(nl.neighbors(1), &[2, 3, 4, 5]);
        assert!(nl.neighbors(0).is_empty());
    }

    #[test]
    fn late_term_weighted() {
        // c = 5, l_i + s_i + t_ij - l_j = 2, so 5 + 1 * 10 * 2 = 25.
        let depots = vec![Node::depot(0, 0.0, 0.0).with_window(0.0, 1000.0)];
        let customers = vec![
            Node::customer(1, 0.0, 0.0, 1.0, 0.0).with_window(0.0, 10.0),
            Node::customer(2, 3.0, 4.0, 1.0, 0.0).with_window(0.0, 13.0),
        ];
        let inst = Instance::euclidean("l", Variant::Mdvrptw, depots, customers, limits()).unwrap();
        let k = ScalingConstants {
            gamma: 1.0,
            theta: 10.0,
        };
        assert_eq!(correlation(1, 2, &k, &NeighborConfig::default(), &inst), 25.0);
    }

    #[test]
    fn pruned_arcs_never_listed() {
        let depots = vec![Node::depot(0, 0.0, 0.0).with_window(0.0, 1000.0)];
        let customers = vec![
            Node::customer(1, 0.0, 1.0, 1.0, 5.0).with_window(100.0, 200.0),
            Node::customer(2, 0.0, 2.0, 1.0, 5.0).with_window(0.0, 50.0),
            Node::customer(3, 0.0, 3.0, 1.0, 5.0).with_window(0.0, 300.0),
        ];
        let inst = Instance::euclidean("p", Variant::Mdvrptw, depots, customers, limits()).unwrap();
        let k = scaling_constants(&inst).unwrap();
        let nl = NeighborLists::build(&inst, &NeighborConfig::default(), &k);
        assert!(!nl.valid(1, 2));
        assert!(!nl.neighbors(1).contains(&2));
        assert_eq!(nl.neighbors(1), &[3]);
        assert!(nl.valid(0, 2) && nl.valid(2, 0));
    }
}
