//! Subsequence attributes closed under concatenation.
//!
//! Every route fragment is summarised by distance, load, duration (travel,
//! service and waiting), the earliest and latest start of its first visit
//! that achieve that duration without extra time warp, and the accumulated
//! time warp. Merging two fragments only needs the two summaries and the
//! connecting arc, so any move that rearranges a constant number of
//! fragments is evaluated in constant time.

use crate::model::Instance;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeqAttr {
    pub dist: f64,
    pub load: f64,
    pub duration: f64,
    pub earliest: f64,
    pub latest: f64,
    pub time_warp: f64,
    pub first: usize,
    pub last: usize,
}

impl SeqAttr {
    /// Identity element of [`concat`].
    pub const EMPTY: SeqAttr = SeqAttr {
        dist: 0.0,
        load: 0.0,
        duration: 0.0,
        earliest: 0.0,
        latest: f64::INFINITY,
        time_warp: 0.0,
        first: NONE,
        last: NONE,
    };

    #[inline]
    pub fn single(node: usize, inst: &Instance) -> SeqAttr {
        let n = inst.node(node);
        SeqAttr {
            dist: 0.0,
            load: n.demand,
            duration: n.service,
            earliest: n.earliest,
            latest: n.latest,
            time_warp: 0.0,
            first: node,
            last: node,
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.first == NONE
    }

    /// Attributes of `self` followed by `other`.
    #[inline]
    pub fn then(&self, other: &SeqAttr, inst: &Instance) -> SeqAttr {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        let travel = inst.time(self.last, other.first);
        let delta = self.duration - self.time_warp + travel;
        let wait = (other.earliest - delta - self.latest).max(0.0);
        let warp = (self.earliest + delta - other.latest).max(0.0);
        SeqAttr {
            dist: self.dist + inst.dist(self.last, other.first) + other.dist,
            load: self.load + other.load,
            duration: self.duration + other.duration + travel + wait,
            earliest: (other.earliest - delta).max(self.earliest) - wait,
            latest: (other.latest - delta).min(self.latest) + warp,
            time_warp: self.time_warp + other.time_warp + warp,
            first: self.first,
            last: other.last,
        }
    }

    /// Attributes of the reversed sequence when every window is the full
    /// horizon and both matrices are symmetric; only the endpoints swap.
    #[inline]
    pub fn reversed_windowless(&self) -> SeqAttr {
        SeqAttr {
            first: self.last,
            last: self.first,
            ..*self
        }
    }

    /// Left fold of single-node attributes over `nodes`.
    pub fn of_sequence(nodes: impl IntoIterator<Item = usize>, inst: &Instance) -> SeqAttr {
        nodes
            .into_iter()
            .fold(SeqAttr::EMPTY, |acc, n| acc.then(&SeqAttr::single(n, inst), inst))
    }
}

#[inline]
pub fn single_attr(node: usize, inst: &Instance) -> SeqAttr {
    SeqAttr::single(node, inst)
}

#[inline]
pub fn concat(a: &SeqAttr, b: &SeqAttr, inst: &Instance) -> SeqAttr {
    a.then(b, inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FleetLimits, Node, Variant};

    fn line_instance(variant: Variant) -> Instance {
        let depots = vec![Node::depot(0, 0.0, 0.0).with_window(0.0, 1000.0)];
        let customers = vec![
            Node::customer(1, 4.0, 0.0, 5.0, 10.0).with_window(50.0, 60.0),
            Node::customer(2, 8.0, 0.0, 3.0, 0.0).with_window(0.0, 30.0),
        ];
        let limits = FleetLimits {
            vehicles_per_depot: None,
            capacity: 10.0,
            max_duration: None,
        };
        Instance::euclidean("line", variant, depots, customers, limits).unwrap()
    }

    #[test]
    fn depot_single() {
        let inst = line_instance(Variant::Mdvrptw);
        let a = single_attr(0, &inst);
        assert_eq!((a.dist, a.load, a.duration, a.time_warp), (0.0, 0.0, 0.0, 0.0));
        assert_eq!((a.earliest, a.latest), (0.0, 1000.0));
    }

    #[test]
    fn customer_single() {
        let inst = line_instance(Variant::Mdvrptw);
        let a = single_attr(1, &inst);
        assert_eq!((a.load, a.duration, a.earliest, a.latest), (5.0, 10.0, 50.0, 60.0));
    }

    #[test]
    fn windowless_variant_has_full_horizon() {
        let inst = line_instance(Variant::Mdvrp);
        let a = single_attr(1, &inst);
        assert_eq!(a.earliest, 0.0);
        assert!(a.latest.is_infinite());
    }

    #[test]
    fn empty_is_identity() {
        let inst = line_instance(Variant::Mdvrptw);
        let x = single_attr(0, &inst).then(&single_attr(1, &inst), &inst);
        assert_eq!(concat(&x, &SeqAttr::EMPTY, &inst), x);
        assert_eq!(concat(&SeqAttr::EMPTY, &x, &inst), x);
    }

    #[test]
    fn windowless_pair_adds_travel() {
        let depots = vec![Node::depot(0, 0.0, 0.0)];
        let customers = vec![
            Node::customer(1, 1.0, 0.0, 1.0, 0.0),
            Node::customer(2, 5.0, 0.0, 1.0, 0.0),
        ];
        let limits = FleetLimits {
            vehicles_per_depot: None,
            capacity: 10.0,
            max_duration: None,
        };
        let inst = Instance::euclidean("t", Variant::Mdvrp, depots, customers, limits).unwrap();
        let a = concat(&single_attr(1, &inst), &single_attr(2, &inst), &inst);
        assert_eq!(a.duration, 4.0);
        assert_eq!(a.time_warp, 0.0);
        assert_eq!(a.dist, 4.0);
    }

    #[test]
    fn late_arrival_accumulates_warp() {
        let inst = line_instance(Variant::Mdvrptw);
        // Customer 1 is served at 50 at the earliest; reaching customer 2 at 64
        // is 34 units past its deadline of 30.
        let a = SeqAttr::of_sequence([1, 2], &inst);
        assert!((a.time_warp - 34.0).abs() < 1e-12);
    }
}
