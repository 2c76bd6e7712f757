//! Forbidden paths: relation chains, their maximality, forbidden cycles,
//! and the global and finitistic dimension formulas built on them.
//!
//! All functions assume a gentle pair, so every arrow has at most one
//! relation successor and at most one relation predecessor.

use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::quiver::{ArrowId, BoundQuiver, VertexId};
use crate::walks::{pair_is_valid, Letter};

/// A dimension value; `Infinite` is the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DimValue {
    Finite(usize),
    Infinite,
}

impl DimValue {
    pub fn is_finite(self) -> bool {
        matches!(self, DimValue::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            DimValue::Finite(n) => Some(n),
            DimValue::Infinite => None,
        }
    }

    pub fn succ(self) -> DimValue {
        self + DimValue::Finite(1)
    }
}

impl Add for DimValue {
    type Output = DimValue;

    fn add(self, rhs: DimValue) -> DimValue {
        match (self, rhs) {
            (DimValue::Finite(a), DimValue::Finite(b)) => DimValue::Finite(a + b),
            _ => DimValue::Infinite,
        }
    }
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Finite(n) => write!(f, "{n}"),
            DimValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ForbiddenKind {
    /// A vertex with exactly one arrow in and one out, composing to a relation.
    ZeroLength {
        vertex: VertexId,
        in_arrow: ArrowId,
        out_arrow: ArrowId,
    },
    Positive(Vec<ArrowId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ForbiddenPath {
    pub kind: ForbiddenKind,
    pub left_maximal: bool,
    pub right_maximal: bool,
}

impl ForbiddenPath {
    fn chain(bq: &BoundQuiver, arrows: Vec<ArrowId>) -> Self {
        let first = arrows[0];
        let last = arrows[arrows.len() - 1];
        ForbiddenPath {
            left_maximal: bq.relation_predecessors(first).next().is_none(),
            right_maximal: bq.relation_successors(last).next().is_none(),
            kind: ForbiddenKind::Positive(arrows),
        }
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            ForbiddenKind::ZeroLength { .. } => 0,
            ForbiddenKind::Positive(arrows) => arrows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arrows(&self) -> &[ArrowId] {
        match &self.kind {
            ForbiddenKind::ZeroLength { .. } => &[],
            ForbiddenKind::Positive(arrows) => arrows,
        }
    }

    pub fn is_maximal(&self) -> bool {
        self.left_maximal && self.right_maximal
    }

    pub fn source(&self, bq: &BoundQuiver) -> VertexId {
        match &self.kind {
            ForbiddenKind::ZeroLength { vertex, .. } => *vertex,
            ForbiddenKind::Positive(arrows) => bq.source(arrows[0]),
        }
    }

    pub fn target(&self, bq: &BoundQuiver) -> VertexId {
        match &self.kind {
            ForbiddenKind::ZeroLength { vertex, .. } => *vertex,
            ForbiddenKind::Positive(arrows) => bq.target(arrows[arrows.len() - 1]),
        }
    }

    pub fn display(&self, bq: &BoundQuiver) -> String {
        match &self.kind {
            ForbiddenKind::ZeroLength { vertex, .. } => format!("e({})", bq.vertex_name(*vertex)),
            ForbiddenKind::Positive(arrows) => arrows.iter().map(|&a| bq.arrow_name(a)).collect::<Vec<_>>().join(" "),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenScan {
    pub paths: Vec<ForbiddenPath>,
    /// Some chain of length `cap` still had a relation successor.
    pub truncated: bool,
}

fn relation_successor(bq: &BoundQuiver, a: ArrowId) -> Option<ArrowId> {
    bq.relation_successors(a).next()
}

fn relation_predecessor(bq: &BoundQuiver, a: ArrowId) -> Option<ArrowId> {
    bq.relation_predecessors(a).next()
}

fn zero_length_paths(bq: &BoundQuiver) -> Vec<ForbiddenPath> {
    bq.vertex_ids()
        .filter_map(|v| match (bq.in_arrows(v), bq.out_arrows(v)) {
            ([a], [b]) if bq.is_relation(*a, *b) => Some(ForbiddenPath {
                kind: ForbiddenKind::ZeroLength { vertex: v, in_arrow: *a, out_arrow: *b },
                left_maximal: true,
                right_maximal: true,
            }),
            _ => None,
        })
        .collect()
}

/// All forbidden paths of length at most `cap`: every relation chain
/// (single arrows included) followed by the zero-length ones.
pub fn forbidden_paths(bq: &BoundQuiver, cap: usize) -> ForbiddenScan {
    let mut paths = Vec::new();
    let mut truncated = false;
    for a in bq.arrow_ids() {
        let mut chain = vec![a];
        while chain.len() <= cap {
            paths.push(ForbiddenPath::chain(bq, chain.clone()));
            match relation_successor(bq, chain[chain.len() - 1]) {
                Some(b) if chain.len() < cap => chain.push(b),
                Some(_) => {
                    truncated = true;
                    break;
                }
                None => break,
            }
        }
    }
    paths.extend(zero_length_paths(bq));
    ForbiddenScan { paths, truncated }
}

/// Chains that are both left and right maximal, then the zero-length paths.
pub fn maximal_forbidden_paths(bq: &BoundQuiver) -> Vec<ForbiddenPath> {
    let mut out = Vec::new();
    for a in bq.arrow_ids() {
        if relation_predecessor(bq, a).is_some() {
            continue;
        }
        // no predecessor, so the chain cannot run into a forbidden cycle
        let mut chain = vec![a];
        while let Some(b) = relation_successor(bq, chain[chain.len() - 1]) {
            chain.push(b);
        }
        out.push(ForbiddenPath::chain(bq, chain));
    }
    out.extend(zero_length_paths(bq));
    out
}

/// Oriented cycles whose cyclically consecutive pairs are all relations,
/// each listed once starting from its smallest arrow.
pub fn forbidden_cycles(bq: &BoundQuiver) -> Vec<Vec<ArrowId>> {
    let mut out = Vec::new();
    for a in bq.arrow_ids() {
        let mut cycle = vec![a];
        let mut cur = a;
        let closed = loop {
            match relation_successor(bq, cur) {
                Some(b) if b == a => break true,
                Some(b) if b < a || cycle.contains(&b) || cycle.len() > bq.arrow_count() => break false,
                Some(b) => {
                    cycle.push(b);
                    cur = b;
                }
                None => break false,
            }
        };
        if closed {
            out.push(cycle);
        }
    }
    out
}

/// Infinite iff a forbidden cycle exists, else the longest forbidden path.
pub fn global_dimension(bq: &BoundQuiver) -> DimValue {
    if !forbidden_cycles(bq).is_empty() {
        return DimValue::Infinite;
    }
    let longest = forbidden_paths(bq, bq.arrow_count()).paths.iter().map(ForbiddenPath::len).max();
    DimValue::Finite(longest.unwrap_or(0))
}

/// The longest maximal forbidden path.
pub fn finitistic_dimension(bq: &BoundQuiver) -> usize {
    maximal_forbidden_paths(bq).iter().map(ForbiddenPath::len).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// chains ending at the vertex
    Into,
    /// chains starting at the vertex
    OutOf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Continuation {
    pub path: Option<ForbiddenPath>,
    pub unbounded: bool,
}

impl Continuation {
    const NONE: Continuation = Continuation { path: None, unbounded: false };

    /// 0 when there is no compatible chain.
    pub fn value(&self) -> DimValue {
        if self.unbounded {
            DimValue::Infinite
        } else {
            DimValue::Finite(self.path.as_ref().map_or(0, ForbiddenPath::len))
        }
    }
}

/// The relation chain meeting `v` on `side` that is compatible with the
/// string letter `away` leaving `v`.
///
/// A chain into `v` ending with `f` is compatible when `f away` is a valid
/// string; a chain out of `v` starting with `f` when `f^-1 away` is. The
/// chain is extended away from `v` as far as relations allow; running into
/// a forbidden cycle makes it unbounded. Without `away`, every candidate
/// counts and the longest wins.
pub fn forbidden_continuation(bq: &BoundQuiver, v: VertexId, side: Side, away: Option<Letter>) -> Continuation {
    let candidates: Vec<ArrowId> = match side {
        Side::Into => bq.in_arrows(v).to_vec(),
        Side::OutOf => bq.out_arrows(v).to_vec(),
    };
    candidates
        .into_iter()
        .filter(|&f| {
            let c = match side {
                Side::Into => Letter::forward(f),
                Side::OutOf => Letter::inverse(f),
            };
            away.is_none_or(|x| pair_is_valid(bq, c, x))
        })
        .map(|f| relation_chain(bq, f, side))
        .max_by_key(Continuation::value)
        .unwrap_or(Continuation::NONE)
}

/// The relation chain through `f`, extended away from the vertex on
/// `side` (backwards for `Into`, forwards for `OutOf`).
pub fn relation_chain(bq: &BoundQuiver, f: ArrowId, side: Side) -> Continuation {
    let mut chain = vec![f];
    loop {
        let cur = chain[chain.len() - 1];
        let next = match side {
            Side::Into => relation_predecessor(bq, cur),
            Side::OutOf => relation_successor(bq, cur),
        };
        match next {
            None => break,
            Some(g) if chain.contains(&g) => return Continuation { path: None, unbounded: true },
            Some(g) => chain.push(g),
        }
    }
    if side == Side::Into {
        chain.reverse();
    }
    Continuation { path: Some(ForbiddenPath::chain(bq, chain)), unbounded: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(rels: &[&[&str]]) -> BoundQuiver {
        BoundQuiver::from_names(
            &["1", "2", "3", "4", "5"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5")],
            rels,
        )
        .unwrap()
    }

    fn pinwheel_9() -> BoundQuiver {
        BoundQuiver::from_names(
            &["1", "2", "3", "4", "5", "6", "7", "8", "9"],
            &[
                ("a12", "1", "2"),
                ("a23", "2", "3"),
                ("a31", "3", "1"),
                ("a41", "4", "1"),
                ("a52", "5", "2"),
                ("a63", "6", "3"),
                ("a74", "7", "4"),
                ("a85", "8", "5"),
                ("a96", "9", "6"),
            ],
            &[&["a12", "a23"], &["a23", "a31"], &["a31", "a12"], &["a74", "a41"], &["a85", "a52"], &["a96", "a63"]],
        )
        .unwrap()
    }

    fn shown(bq: &BoundQuiver, ps: &[ForbiddenPath]) -> Vec<String> {
        ps.iter().map(|p| p.display(bq)).collect()
    }

    #[test]
    fn a5_two_rel_paths() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        let scan = forbidden_paths(&bq, 10);
        assert!(!scan.truncated);
        let mut lens: Vec<usize> = scan.paths.iter().map(ForbiddenPath::len).collect();
        lens.sort();
        // e(2) and e(4) qualify as zero-length forbidden paths
        assert_eq!(lens, [0, 0, 1, 1, 1, 1, 2, 2]);
        assert_eq!(shown(&bq, &maximal_forbidden_paths(&bq)), ["a b", "c d", "e(2)", "e(4)"]);
        assert_eq!(global_dimension(&bq), DimValue::Finite(2));
        assert_eq!(finitistic_dimension(&bq), 2);
    }

    #[test]
    fn relation_free_paths_have_length_one() {
        let bq = linear(&[]);
        assert!(forbidden_paths(&bq, 5).paths.iter().all(|p| p.len() == 1));
        assert_eq!(global_dimension(&bq), DimValue::Finite(1));
    }

    #[test]
    fn a5_one_rel_maximal() {
        let bq = linear(&[&["b", "c"]]);
        assert_eq!(shown(&bq, &maximal_forbidden_paths(&bq)), ["a", "b c", "d", "e(3)"]);
    }

    #[test]
    fn pinwheel_cycles_and_truncation() {
        let bq = pinwheel_9();
        assert!(forbidden_paths(&bq, 3).truncated);
        let cycles = forbidden_cycles(&bq);
        assert_eq!(cycles.len(), 1);
        let names: Vec<&str> = cycles[0].iter().map(|&a| bq.arrow_name(a)).collect();
        assert_eq!(names, ["a12", "a23", "a31"]);
        assert_eq!(global_dimension(&bq), DimValue::Infinite);
        assert_eq!(finitistic_dimension(&bq), 2);
        let maximal = shown(&bq, &maximal_forbidden_paths(&bq));
        assert_eq!(maximal, ["a74 a41", "a85 a52", "a96 a63", "e(4)", "e(5)", "e(6)"]);
    }

    #[test]
    fn vertex_only_quiver() {
        let bq = BoundQuiver::from_names(&["1"], &[], &[]).unwrap();
        assert_eq!(global_dimension(&bq), DimValue::Finite(0));
        assert_eq!(finitistic_dimension(&bq), 0);
    }

    #[test]
    fn continuations() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        let v3 = bq.vertex("3").unwrap();
        let into = forbidden_continuation(&bq, v3, Side::Into, None);
        assert_eq!(into.path.as_ref().unwrap().display(&bq), "a b");
        assert_eq!(into.value(), DimValue::Finite(2));
        let pin = pinwheel_9();
        let c = forbidden_continuation(&pin, pin.vertex("1").unwrap(), Side::Into, None);
        assert!(c.unbounded);
        let free = linear(&[]);
        let c = forbidden_continuation(&free, free.vertex("1").unwrap(), Side::Into, None);
        assert_eq!(c, Continuation::NONE);
    }

    #[test]
    fn dim_value_order_and_sum() {
        assert!(DimValue::Finite(100) < DimValue::Infinite);
        assert_eq!(DimValue::Finite(2) + DimValue::Finite(1), DimValue::Finite(3));
        assert_eq!(DimValue::Finite(2) + DimValue::Infinite, DimValue::Infinite);
    }
}
