use smallvec::{smallvec, SmallVec};

use crate::eval::{MovePlan, NewRoute, Piece};
use crate::model::{Instance, Solution};

/// Neighborhood families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveOperator {
    Relocate,
    Swap,
    TwoOptStar,
    TwoOpt,
    DepotInsert,
    DepotReplace,
}

impl MoveOperator {
    pub const ALL: [MoveOperator; 6] = [
        MoveOperator::Relocate,
        MoveOperator::Swap,
        MoveOperator::TwoOptStar,
        MoveOperator::TwoOpt,
        MoveOperator::DepotInsert,
        MoveOperator::DepotReplace,
    ];

    /// Operators used for a given instance; 2-opt is skipped with time windows.
    pub fn enabled(inst: &Instance) -> Vec<MoveOperator> {
        Self::ALL
            .into_iter()
            .filter(|op| *op != MoveOperator::TwoOpt || !inst.variant().has_time_windows())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReplaceMode {
    Depart,
    Arrive,
    Both,
}

/// One neighborhood transition. Positions index customer lists of the
/// solution the move was enumerated on. The derived order is the canonical
/// tie-break: operator, then route indices, then positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    /// Moves `customers[start..start + len]` of `from` so that it starts at
    /// index `pos` of `to` (index into the unmodified `to`).
    Relocate {
        from: usize,
        start: usize,
        len: usize,
        reversed: bool,
        to: usize,
        pos: usize,
    },
    /// Exchanges two disjoint segments; `(r1, s1) < (r2, s2)`.
    Swap {
        r1: usize,
        s1: usize,
        l1: usize,
        rev1: bool,
        r2: usize,
        s2: usize,
        l2: usize,
        rev2: bool,
    },
    /// Joins `r1[..cut1]` with `r2[cut2..]` and `r2[..cut2]` with `r1[cut1..]`.
    TwoOptStar {
        r1: usize,
        cut1: usize,
        r2: usize,
        cut2: usize,
    },
    /// Reverses `customers[i..=j]`.
    TwoOpt { route: usize, i: usize, j: usize },
    /// Splits off `customers[pos..]` into a new route served from `depot`.
    DepotInsert { route: usize, pos: usize, depot: usize },
    DepotReplace {
        route: usize,
        depot: usize,
        mode: ReplaceMode,
    },
}

fn run(route: usize, start: usize, end: usize, reversed: bool) -> Piece {
    Piece::Run {
        route,
        start,
        end,
        reversed,
    }
}

fn push_run(pieces: &mut SmallVec<[Piece; 5]>, route: usize, start: usize, end: usize, reversed: bool) {
    if start < end {
        pieces.push(run(route, start, end, reversed));
    }
}

impl Move {
    pub fn operator(&self) -> MoveOperator {
        match self {
            Move::Relocate { .. } => MoveOperator::Relocate,
            Move::Swap { .. } => MoveOperator::Swap,
            Move::TwoOptStar { .. } => MoveOperator::TwoOptStar,
            Move::TwoOpt { .. } => MoveOperator::TwoOpt,
            Move::DepotInsert { .. } => MoveOperator::DepotInsert,
            Move::DepotReplace { .. } => MoveOperator::DepotReplace,
        }
    }

    /// Packed identity, equal exactly when the moves are equal as long as
    /// every index stays below 2^16.
    pub(crate) fn key(&self) -> u128 {
        let pack = |tag: u128, xs: &[usize]| xs.iter().fold(tag, |acc, &x| (acc << 16) | x as u128);
        match *self {
            Move::Relocate {
                from,
                start,
                len,
                reversed,
                to,
                pos,
            } => pack(0, &[from, start, len, reversed as usize, to, pos]),
            Move::Swap {
                r1,
                s1,
                l1,
                rev1,
                r2,
                s2,
                l2,
                rev2,
            } => pack(
                1,
                &[r1, s1, l1 | (rev1 as usize) << 8, r2, s2, l2 | (rev2 as usize) << 8],
            ),
            Move::TwoOptStar { r1, cut1, r2, cut2 } => pack(2, &[r1, cut1, r2, cut2]),
            Move::TwoOpt { route, i, j } => pack(3, &[route, i, j]),
            Move::DepotInsert { route, pos, depot } => pack(4, &[route, pos, depot]),
            Move::DepotReplace { route, depot, mode } => pack(5, &[route, depot, mode as usize]),
        }
    }

    /// Indices of the routes this move modifies.
    pub fn routes(&self) -> SmallVec<[usize; 2]> {
        match *self {
            Move::Relocate { from, to, .. } if from != to => smallvec![from, to],
            Move::Relocate { from, .. } => smallvec![from],
            Move::Swap { r1, r2, .. } if r1 != r2 => smallvec![r1, r2],
            Move::Swap { r1, .. } => smallvec![r1],
            Move::TwoOptStar { r1, r2, .. } => smallvec![r1, r2],
            Move::TwoOpt { route, .. } | Move::DepotInsert { route, .. } | Move::DepotReplace { route, .. } => {
                smallvec![route]
            }
        }
    }

    /// Fragment description of the routes after the move.
    pub fn plan(&self, sol: &Solution, inst: &Instance) -> MovePlan {
        let mut plan = MovePlan {
            removed: self.routes(),
            added: SmallVec::new(),
        };
        self.visit(sol, inst, |depart, arrive, pieces| {
            plan.added.push(NewRoute {
                depart,
                arrive,
                pieces: SmallVec::from_slice(pieces),
            })
        });
        plan
    }

    /// Calls `f(depart, arrive, pieces)` for every route after the move, in
    /// the order of [`Move::routes`]; extra routes come last.
    pub fn visit(&self, sol: &Solution, inst: &Instance, mut f: impl FnMut(usize, usize, &[Piece])) {
        let r = |i: usize| &sol.routes[i];
        let mut a: SmallVec<[Piece; 5]> = SmallVec::new();
        let mut b: SmallVec<[Piece; 5]> = SmallVec::new();
        match *self {
            Move::Relocate {
                from,
                start,
                len,
                reversed,
                to,
                pos,
            } => {
                let end = start + len;
                let n = r(from).len();
                let seg = run(from, start, end, reversed);
                if from != to {
                    push_run(&mut a, from, 0, start, false);
                    push_run(&mut a, from, end, n, false);
                    push_run(&mut b, to, 0, pos, false);
                    b.push(seg);
                    push_run(&mut b, to, pos, r(to).len(), false);
                    f(r(from).depart(), r(from).arrive(), &a);
                    f(r(to).depart(), r(to).arrive(), &b);
                } else {
                    if pos <= start {
                        push_run(&mut a, from, 0, pos, false);
                        a.push(seg);
                        push_run(&mut a, from, pos, start, false);
                        push_run(&mut a, from, end, n, false);
                    } else {
                        push_run(&mut a, from, 0, start, false);
                        push_run(&mut a, from, end, pos, false);
                        a.push(seg);
                        push_run(&mut a, from, pos, n, false);
                    }
                    f(r(from).depart(), r(from).arrive(), &a);
                }
            }
            Move::Swap {
                r1,
                s1,
                l1,
                rev1,
                r2,
                s2,
                l2,
                rev2,
            } => {
                let seg_a = run(r1, s1, s1 + l1, rev1);
                let seg_b = run(r2, s2, s2 + l2, rev2);
                if r1 != r2 {
                    push_run(&mut a, r1, 0, s1, false);
                    a.push(seg_b);
                    push_run(&mut a, r1, s1 + l1, r(r1).len(), false);
                    push_run(&mut b, r2, 0, s2, false);
                    b.push(seg_a);
                    push_run(&mut b, r2, s2 + l2, r(r2).len(), false);
                    f(r(r1).depart(), r(r1).arrive(), &a);
                    f(r(r2).depart(), r(r2).arrive(), &b);
                } else {
                    push_run(&mut a, r1, 0, s1, false);
                    a.push(seg_b);
                    push_run(&mut a, r1, s1 + l1, s2, false);
                    a.push(seg_a);
                    push_run(&mut a, r1, s2 + l2, r(r1).len(), false);
                    f(r(r1).depart(), r(r1).arrive(), &a);
                }
            }
            Move::TwoOptStar { r1, cut1, r2, cut2 } => {
                push_run(&mut a, r1, 0, cut1, false);
                push_run(&mut a, r2, cut2, r(r2).len(), false);
                push_run(&mut b, r2, 0, cut2, false);
                push_run(&mut b, r1, cut1, r(r1).len(), false);
                f(r(r1).depart(), r(r2).arrive(), &a);
                f(r(r2).depart(), r(r1).arrive(), &b);
            }
            Move::TwoOpt { route, i, j } => {
                push_run(&mut a, route, 0, i, false);
                a.push(run(route, i, j + 1, true));
                push_run(&mut a, route, j + 1, r(route).len(), false);
                f(r(route).depart(), r(route).arrive(), &a);
            }
            Move::DepotInsert { route, pos, depot } => {
                push_run(&mut a, route, 0, pos, false);
                push_run(&mut b, route, pos, r(route).len(), false);
                f(r(route).depart(), r(route).arrive(), &a);
                f(depot, depot, &b);
            }
            Move::DepotReplace { route, depot, mode } => {
                let (mut depart, mut arrive) = (r(route).depart(), r(route).arrive());
                match mode {
                    ReplaceMode::Depart => depart = depot,
                    ReplaceMode::Arrive => arrive = depot,
                    ReplaceMode::Both => (depart, arrive) = (depot, depot),
                }
                if inst.open_routes() {
                    arrive = depart;
                }
                push_run(&mut a, route, 0, r(route).len(), false);
                f(depart, arrive, &a);
            }
        }
    }
}
