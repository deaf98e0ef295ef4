//! Candidate generation restricted to granular neighborhoods.

use crate::eval::Piece;
use crate::model::{Instance, Solution};
use crate::neighborhood::NeighborLists;

use super::cache::UNROUTED;
use super::moves::{Move, MoveOperator, ReplaceMode};

pub(crate) fn positions(sol: &Solution, inst: &Instance) -> Vec<(usize, usize)> {
    let mut p = vec![UNROUTED; inst.num_nodes()];
    for (ri, r) in sol.routes.iter().enumerate() {
        for (k, &c) in r.customers().iter().enumerate() {
            p[c] = (ri, k);
        }
    }
    p
}

/// All candidate moves of one operator, sorted canonically and deduplicated.
pub fn enumerate(sol: &Solution, op: MoveOperator, nbr: &NeighborLists, inst: &Instance) -> Vec<Move> {
    let pos = positions(sol, inst);
    let mut out = Vec::new();
    enumerate_into(sol, &pos, op, nbr, inst, None, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// Appends candidates to `out`, unordered and possibly repeated. With
/// `dirty`, only moves touching a flagged route are produced. Empty routes
/// are never touched.
pub(crate) fn enumerate_into(
    sol: &Solution,
    pos: &[(usize, usize)],
    op: MoveOperator,
    nbr: &NeighborLists,
    inst: &Instance,
    dirty: Option<&[bool]>,
    out: &mut Vec<Move>,
) {
    let first = out.len();
    let mut g = Gen {
        sol,
        pos,
        inst,
        sym: inst.variant().symmetric(),
        dirty,
        out,
    };
    match op {
        MoveOperator::Relocate => g.relocate(nbr),
        MoveOperator::Swap => g.swap(nbr),
        MoveOperator::TwoOptStar => g.two_opt_star(nbr),
        MoveOperator::TwoOpt => {
            if !inst.variant().has_time_windows() {
                g.two_opt(nbr)
            }
        }
        MoveOperator::DepotInsert => g.depot_insert(),
        MoveOperator::DepotReplace => g.depot_replace(),
    }
    if inst.variant().has_time_windows() {
        let mut k = first;
        for i in first..out.len() {
            if respects_mask(&out[i], sol, nbr, inst) {
                out[k] = out[i];
                k += 1;
            }
        }
        out.truncate(k);
    }
}

/// Whether every customer-to-customer arc created at a fragment junction is
/// allowed by the pruning mask.
pub fn respects_mask(mv: &Move, sol: &Solution, nbr: &NeighborLists, inst: &Instance) -> bool {
    let plan = mv.plan(sol, inst);
    for nr in &plan.added {
        let mut prev = nr.depart;
        for p in &nr.pieces {
            let (first, last) = match *p {
                Piece::Node(v) => (v, v),
                Piece::Run {
                    route,
                    start,
                    end,
                    reversed,
                } => {
                    let c = sol.routes[route].customers();
                    if reversed {
                        for k in (start + 1..end).rev() {
                            if !nbr.valid(c[k], c[k - 1]) {
                                return false;
                            }
                        }
                        (c[end - 1], c[start])
                    } else {
                        (c[start], c[end - 1])
                    }
                }
            };
            if !nbr.valid(prev, first) {
                return false;
            }
            prev = last;
        }
    }
    true
}

struct Gen<'a> {
    sol: &'a Solution,
    pos: &'a [(usize, usize)],
    inst: &'a Instance,
    sym: bool,
    dirty: Option<&'a [bool]>,
    out: &'a mut Vec<Move>,
}

impl Gen<'_> {
    fn len(&self, r: usize) -> usize {
        self.sol.routes[r].len()
    }

    fn hot(&self, r: usize) -> bool {
        self.dirty.is_none_or(|d| d[r])
    }

    fn emit(&mut self, mv: Move) {
        if self.dirty.is_none() || mv.routes().iter().any(|&r| self.hot(r)) {
            self.out.push(mv);
        }
    }

    fn routed(&self, c: usize) -> Option<(usize, usize)> {
        match self.pos[c] {
            UNROUTED => None,
            p => Some(p),
        }
    }

    /// Neighbor pairs `(u, v)` with both ends routed and at least one of them
    /// on a dirty route.
    fn pairs(&self, nbr: &NeighborLists) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for (r, route) in self.sol.routes.iter().enumerate() {
            if !self.hot(r) {
                continue;
            }
            for (i, &u) in route.customers().iter().enumerate() {
                for &v in nbr.neighbors(u) {
                    if let Some(pv) = self.routed(v) {
                        out.push(((r, i), pv));
                    }
                }
                if self.dirty.is_some() {
                    // Pairs whose first end sits on a clean route.
                    for &w in nbr.reverse_neighbors(u) {
                        if let Some(pw) = self.routed(w).filter(|p| !self.hot(p.0)) {
                            out.push((pw, (r, i)));
                        }
                    }
                }
            }
        }
        out
    }

    fn push_relocate(&mut self, from: usize, start: usize, len: usize, reversed: bool, to: usize, mut pos: usize) {
        let n = self.len(from);
        if start + len > n || (reversed && (len < 2 || !self.sym)) {
            return;
        }
        if from == to {
            if pos > start && pos < start + len {
                return;
            }
            if pos == start + len {
                pos = start;
            }
            if pos == start && !reversed {
                return;
            }
        }
        self.emit(Move::Relocate {
            from,
            start,
            len,
            reversed,
            to,
            pos,
        });
    }

    fn relocate(&mut self, nbr: &NeighborLists) {
        for ((ru, iu), (rv, iv)) in self.pairs(nbr) {
            // Segment ending at u, inserted right before v.
            for l in 1..=2 {
                if iu + 1 >= l {
                    self.push_relocate(ru, iu + 1 - l, l, false, rv, iv);
                }
            }
            self.push_relocate(ru, iu, 2, true, rv, iv);
            // Segment starting at v, inserted right after u.
            for l in 1..=2 {
                self.push_relocate(rv, iv, l, false, ru, iu + 1);
            }
            if iv >= 1 {
                self.push_relocate(rv, iv - 1, 2, true, ru, iu + 1);
            }
        }
        // Route boundaries, next to a depot.
        let m = self.sol.routes.len();
        for from in 0..m {
            for to in 0..m {
                if !(self.hot(from) || self.hot(to)) || self.len(to) == 0 {
                    continue;
                }
                let end = self.len(to);
                for start in 0..self.len(from) {
                    for l in 1..=2 {
                        for rev in [false, true] {
                            self.push_relocate(from, start, l, rev, to, 0);
                            self.push_relocate(from, start, l, rev, to, end);
                        }
                    }
                }
            }
        }
    }

    fn push_swap(&mut self, a: (usize, usize, usize, bool), b: (usize, usize, usize, bool)) {
        let (a, b) = if (a.0, a.1) <= (b.0, b.1) { (a, b) } else { (b, a) };
        if a.1 + a.2 > self.len(a.0) || b.1 + b.2 > self.len(b.0) {
            return;
        }
        if a.0 == b.0 && a.1 + a.2 > b.1 {
            return;
        }
        if (a.3 && a.2 < 2) || (b.3 && b.2 < 2) {
            return;
        }
        self.emit(Move::Swap {
            r1: a.0,
            s1: a.1,
            l1: a.2,
            rev1: a.3,
            r2: b.0,
            s2: b.1,
            l2: b.2,
            rev2: b.3,
        });
    }

    fn swap(&mut self, nbr: &NeighborLists) {
        let revs: &[bool] = if self.sym { &[false, true] } else { &[false] };
        for ((ru, iu), (rv, iv)) in self.pairs(nbr) {
            // The segment ending at u takes the place of the segment ending
            // just before v, so u comes to precede v.
            if iv == 0 {
                continue;
            }
            let ip = iv - 1;
            for la in 1..=2 {
                if iu + 1 < la {
                    continue;
                }
                for lb in 1..=2 {
                    if ip + 1 < lb {
                        continue;
                    }
                    for &ra in revs {
                        for &rb in revs {
                            self.push_swap((ru, iu + 1 - la, la, ra), (rv, ip + 1 - lb, lb, rb));
                        }
                    }
                }
            }
        }
    }

    fn push_two_opt_star(&mut self, r1: usize, cut1: usize, r2: usize, cut2: usize) {
        if r1 == r2 {
            return;
        }
        let (r1, cut1, r2, cut2) = if r1 < r2 {
            (r1, cut1, r2, cut2)
        } else {
            (r2, cut2, r1, cut1)
        };
        let (a, b) = (&self.sol.routes[r1], &self.sol.routes[r2]);
        if a.is_empty() || b.is_empty() {
            return;
        }
        // Swapping only the end depots, or whole routes between equal
        // start depots, changes nothing.
        if cut1 == a.len() && cut2 == b.len() && (self.inst.open_routes() || a.arrive() == b.arrive()) {
            return;
        }
        if cut1 == 0 && cut2 == 0 && a.depart() == b.depart() {
            return;
        }
        self.emit(Move::TwoOptStar { r1, cut1, r2, cut2 });
    }

    fn two_opt_star(&mut self, nbr: &NeighborLists) {
        for ((ru, iu), (rv, iv)) in self.pairs(nbr) {
            self.push_two_opt_star(ru, iu + 1, rv, iv);
        }
        let m = self.sol.routes.len();
        for c in self.inst.customers() {
            let Some((rc, ic)) = self.routed(c) else { continue };
            let hot = self.hot(rc);
            for r in 0..m {
                if !(hot || self.hot(r)) {
                    continue;
                }
                // depot of r followed by c, and c followed by the end depot of r
                self.push_two_opt_star(r, 0, rc, ic);
                let end = self.len(r);
                self.push_two_opt_star(rc, ic + 1, r, end);
            }
        }
    }

    fn two_opt(&mut self, nbr: &NeighborLists) {
        for ((ru, iu), (rv, iv)) in self.pairs(nbr) {
            if ru != rv {
                continue;
            }
            let (i, j) = if iu < iv { (iu + 1, iv) } else { (iv + 1, iu) };
            if i < j {
                self.emit(Move::TwoOpt { route: ru, i, j });
            }
        }
        for r in 0..self.sol.routes.len() {
            if !self.hot(r) {
                continue;
            }
            let n = self.len(r);
            for k in 1..n {
                self.emit(Move::TwoOpt { route: r, i: 0, j: k });
                self.emit(Move::TwoOpt {
                    route: r,
                    i: n - 1 - k,
                    j: n - 1,
                });
            }
        }
    }

    fn depot_insert(&mut self) {
        let open = self.inst.open_routes();
        for r in 0..self.sol.routes.len() {
            if !self.hot(r) {
                continue;
            }
            let route = &self.sol.routes[r];
            let (len, dep, arr) = (route.len(), route.depart(), route.arrive());
            for d in self.inst.depots() {
                for pos in 0..len {
                    if pos == 0 && d == dep && (open || d == arr) {
                        continue;
                    }
                    self.emit(Move::DepotInsert {
                        route: r,
                        pos,
                        depot: d,
                    });
                }
            }
        }
    }

    fn depot_replace(&mut self) {
        let open = self.inst.open_routes();
        for r in 0..self.sol.routes.len() {
            if !self.hot(r) || self.len(r) == 0 {
                continue;
            }
            let (dep, arr) = (self.sol.routes[r].depart(), self.sol.routes[r].arrive());
            for d in self.inst.depots() {
                if d != dep {
                    self.emit(Move::DepotReplace {
                        route: r,
                        depot: d,
                        mode: ReplaceMode::Depart,
                    });
                }
                if open {
                    continue;
                }
                if d != arr {
                    self.emit(Move::DepotReplace {
                        route: r,
                        depot: d,
                        mode: ReplaceMode::Arrive,
                    });
                }
                if d != dep || d != arr {
                    self.emit(Move::DepotReplace {
                        route: r,
                        depot: d,
                        mode: ReplaceMode::Both,
                    });
                }
            }
        }
    }
}
