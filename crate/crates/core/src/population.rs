//! Fitness-and-distance survivor selection.

use std::collections::HashSet;

use crate::genetic::route_edges;
use crate::model::{Instance, Solution};

/// Number of nearest members averaged by [`population_distance`].
pub const NEAREST: usize = 5;

pub fn edge_set(sol: &Solution, inst: &Instance) -> HashSet<(usize, usize)> {
    sol.routes.iter().flat_map(|r| route_edges(r, inst)).collect()
}

fn set_distance(a: &HashSet<(usize, usize)>, b: &HashSet<(usize, usize)>) -> f64 {
    let denom = a.len().max(b.len());
    if denom == 0 {
        return 0.0;
    }
    let shared = a.intersection(b).count();
    100.0 * (1.0 - shared as f64 / denom as f64)
}

/// Percentage of edges not shared by two solutions.
pub fn solution_distance(s1: &Solution, s2: &Solution, inst: &Instance) -> f64 {
    set_distance(&edge_set(s1, inst), &edge_set(s2, inst))
}

/// Mean distance from member `k` to its nearest other members.
fn mean_nearest(row: &[f64], k: usize) -> f64 {
    let mut d: Vec<f64> = row
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, &x)| x)
        .collect();
    if d.is_empty() {
        return 0.0;
    }
    d.sort_by(f64::total_cmp);
    d.truncate(NEAREST);
    d.iter().sum::<f64>() / d.len() as f64
}

/// Average distance of `members[k]` to its five nearest other members.
pub fn population_distance(k: usize, members: &[Solution], inst: &Instance) -> f64 {
    let own = edge_set(&members[k], inst);
    let row: Vec<f64> = members.iter().map(|m| set_distance(&own, &edge_set(m, inst))).collect();
    mean_nearest(&row, k)
}

/// Ranks (0 = first) of `keys` under the given order. Among equal keys the
/// newer member (larger index) ranks first, so the oldest loses ties.
fn ranks(keys: &[f64], descending: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| {
        let o = keys[a].total_cmp(&keys[b]);
        (if descending { o.reverse() } else { o }).then(b.cmp(&a))
    });
    let mut r = vec![0; keys.len()];
    for (rank, &i) in idx.iter().enumerate() {
        r[i] = rank;
    }
    r
}

/// Biased fitness from costs (lower is better) and diversity contributions
/// (higher is better). Higher values mean fitter members.
pub fn biased_fitness(costs: &[f64], diversity: &[f64], xi: f64) -> Vec<f64> {
    let n = costs.len() as f64;
    let rf = ranks(costs, false);
    let rd = ranks(diversity, true);
    rf.iter()
        .zip(&rd)
        .map(|(&a, &b)| (n - a as f64) / n + xi * (n - b as f64) / n)
        .collect()
}

/// A population whose members carry their penalised cost.
#[derive(Clone, Debug)]
pub struct Population {
    pub members: Vec<Solution>,
    pub costs: Vec<f64>,
    pub mu: usize,
    pub xi: f64,
    edges: Vec<HashSet<(usize, usize)>>,
}

impl Population {
    pub fn new(mu: usize, xi: f64) -> Self {
        Population {
            members: Vec::new(),
            costs: Vec::new(),
            mu,
            xi,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, sol: Solution, cost: f64, inst: &Instance) {
        self.edges.push(edge_set(&sol, inst));
        self.members.push(sol);
        self.costs.push(cost);
    }

    /// Grows by one offspring and selects back to `mu` once `1.5 mu` is reached.
    pub fn add(&mut self, sol: Solution, cost: f64, inst: &Instance) {
        self.push(sol, cost, inst);
        if self.len() >= self.mu + self.mu / 2 {
            self.select_survivors();
        }
    }

    /// Updates the stored costs, e.g. after the penalty weights changed.
    pub fn recost(&mut self, f: impl Fn(&Solution) -> f64) {
        self.costs = self.members.iter().map(f).collect();
    }

    fn distance_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = set_distance(&self.edges[i], &self.edges[j]);
                m[i][j] = d;
                m[j][i] = d;
            }
        }
        m
    }

    pub fn fitness(&self) -> Vec<f64> {
        let m = self.distance_matrix();
        let div: Vec<f64> = (0..self.len()).map(|k| mean_nearest(&m[k], k)).collect();
        biased_fitness(&self.costs, &div, self.xi)
    }

    /// Removes the least fit member, recomputing fitness each time, until
    /// `mu` remain. Ties remove the oldest member.
    pub fn select_survivors(&mut self) {
        while self.len() > self.mu {
            let chi = self.fitness();
            let mut worst = 0;
            for k in 1..chi.len() {
                if chi[k] < chi[worst] {
                    worst = k;
                }
            }
            self.members.remove(worst);
            self.costs.remove(worst);
            self.edges.remove(worst);
        }
    }

    /// Index of the member with the lowest cost.
    pub fn best(&self) -> Option<usize> {
        (0..self.len()).min_by(|&a, &b| self.costs[a].total_cmp(&self.costs[b]))
    }
}

/// Shrinks `members` (with costs) to `mu` by iterative biased-fitness removal.
pub fn survivor_selection(
    members: Vec<Solution>,
    costs: Vec<f64>,
    mu: usize,
    xi: f64,
    inst: &Instance,
) -> Vec<Solution> {
    let mut p = Population::new(mu, xi);
    for (s, c) in members.into_iter().zip(costs) {
        p.push(s, c, inst);
    }
    p.select_survivors();
    p.members
}
