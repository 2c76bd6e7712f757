//! Letters, string and band words, enumeration, and the letter-transition
//! graph.
//!
//! A forward letter `a` walks from `s(a)` to `t(a)`, an inverse letter
//! `a^-1` from `t(a)` to `s(a)`. Word validity is a property of consecutive
//! letter pairs only, which the transition graph exploits.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::quiver::{ArrowId, BoundQuiver, VertexId};

/// An arrow or its formal inverse. Ordered by arrow declaration order,
/// forward before inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: ArrowId,
    pub inverse: bool,
}

impl Letter {
    pub fn forward(arrow: ArrowId) -> Self {
        Letter { arrow, inverse: false }
    }

    pub fn inverse(arrow: ArrowId) -> Self {
        Letter { arrow, inverse: true }
    }

    pub fn is_forward(self) -> bool {
        !self.inverse
    }

    pub fn flip(self) -> Self {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    pub fn source(self, bq: &BoundQuiver) -> VertexId {
        if self.inverse {
            bq.target(self.arrow)
        } else {
            bq.source(self.arrow)
        }
    }

    pub fn target(self, bq: &BoundQuiver) -> VertexId {
        if self.inverse {
            bq.source(self.arrow)
        } else {
            bq.target(self.arrow)
        }
    }

    /// Dense index in `0..2 * arrow_count`.
    pub fn index(self) -> usize {
        2 * self.arrow.0 + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter { arrow: ArrowId(i / 2), inverse: i % 2 == 1 }
    }

    pub fn all(bq: &BoundQuiver) -> impl Iterator<Item = Letter> {
        (0..2 * bq.arrow_count()).map(Letter::from_index)
    }

    pub fn display(self, bq: &BoundQuiver) -> String {
        if self.inverse {
            format!("{}^-1", bq.arrow_name(self.arrow))
        } else {
            bq.arrow_name(self.arrow).to_string()
        }
    }
}

/// A string: a trivial walk at a vertex or a nonempty letter sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StringWord {
    Trivial(VertexId),
    Walk(Vec<Letter>),
}

impl StringWord {
    /// Builds a word; an empty letter list is rejected because it does not
    /// determine a vertex.
    pub fn walk(letters: Vec<Letter>) -> Self {
        assert!(!letters.is_empty(), "use StringWord::Trivial for length zero");
        StringWord::Walk(letters)
    }

    // no is_empty: a trivial string has length zero but is not empty
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, StringWord::Trivial(_))
    }

    pub fn letters(&self) -> &[Letter] {
        match self {
            StringWord::Trivial(_) => &[],
            StringWord::Walk(ls) => ls,
        }
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters().first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters().last().copied()
    }

    pub fn source(&self, bq: &BoundQuiver) -> VertexId {
        match self {
            StringWord::Trivial(v) => *v,
            StringWord::Walk(ls) => ls[0].source(bq),
        }
    }

    pub fn target(&self, bq: &BoundQuiver) -> VertexId {
        match self {
            StringWord::Trivial(v) => *v,
            StringWord::Walk(ls) => ls[ls.len() - 1].target(bq),
        }
    }

    /// Vertex visited at each walk position `0..=len`.
    pub fn vertices(&self, bq: &BoundQuiver) -> Vec<VertexId> {
        let mut out = vec![self.source(bq)];
        out.extend(self.letters().iter().map(|l| l.target(bq)));
        out
    }

    pub fn display(&self, bq: &BoundQuiver) -> String {
        match self {
            StringWord::Trivial(v) => format!("e({})", bq.vertex_name(*v)),
            StringWord::Walk(ls) => ls.iter().map(|l| l.display(bq)).collect::<Vec<_>>().join(" "),
        }
    }

    /// The same walk in the opposite quiver: each letter changes direction.
    pub fn transport(&self) -> StringWord {
        match self {
            StringWord::Trivial(v) => StringWord::Trivial(*v),
            StringWord::Walk(ls) => StringWord::Walk(ls.iter().map(|l| l.flip()).collect()),
        }
    }
}

/// Length first, then the letter sequence; trivial words by vertex.
impl Ord for StringWord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (StringWord::Trivial(a), StringWord::Trivial(b)) => a.cmp(b),
            (StringWord::Trivial(_), StringWord::Walk(_)) => Ordering::Less,
            (StringWord::Walk(_), StringWord::Trivial(_)) => Ordering::Greater,
            (StringWord::Walk(a), StringWord::Walk(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        }
    }
}

impl PartialOrd for StringWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StringAxiom {
    /// consecutive letters not composable
    S1,
    /// a relation read in either direction
    S2,
    /// a letter followed by its own inverse
    S3,
}

impl fmt::Display for StringAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The failing axiom and the index of the second letter of the bad pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("{axiom} violated at letter {index}")]
pub struct StringViolation {
    pub axiom: StringAxiom,
    pub index: usize,
}

/// Checks a two-letter junction.
pub fn check_pair(bq: &BoundQuiver, x: Letter, y: Letter) -> Result<(), StringAxiom> {
    if x.target(bq) != y.source(bq) {
        return Err(StringAxiom::S1);
    }
    let relation = match (x.inverse, y.inverse) {
        (false, false) => bq.is_relation(x.arrow, y.arrow),
        (true, true) => bq.is_relation(y.arrow, x.arrow),
        _ => false,
    };
    if relation {
        return Err(StringAxiom::S2);
    }
    if y == x.flip() {
        return Err(StringAxiom::S3);
    }
    Ok(())
}

pub fn pair_is_valid(bq: &BoundQuiver, x: Letter, y: Letter) -> bool {
    check_pair(bq, x, y).is_ok()
}

pub fn is_valid_string(bq: &BoundQuiver, letters: &[Letter]) -> Result<(), StringViolation> {
    for (i, w) in letters.windows(2).enumerate() {
        check_pair(bq, w[0], w[1]).map_err(|axiom| StringViolation { axiom, index: i + 1 })?;
    }
    Ok(())
}

pub fn word_is_valid(bq: &BoundQuiver, w: &StringWord) -> bool {
    is_valid_string(bq, w.letters()).is_ok()
}

pub fn inverse(w: &StringWord) -> StringWord {
    match w {
        StringWord::Trivial(v) => StringWord::Trivial(*v),
        StringWord::Walk(ls) => StringWord::Walk(ls.iter().rev().map(|l| l.flip()).collect()),
    }
}

/// The smaller of `w` and its inverse.
pub fn canonical_string(w: &StringWord) -> StringWord {
    let inv = inverse(w);
    if inv < *w {
        inv
    } else {
        w.clone()
    }
}

/// A band word, stored as its letter cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandWord {
    letters: Vec<Letter>,
}

impl BandWord {
    /// Checks the band axioms and stores the word in canonical form.
    pub fn new(bq: &BoundQuiver, letters: Vec<Letter>) -> Result<Self, BandDefect> {
        is_band(bq, &letters)?;
        Ok(canonical_band(&BandWord { letters }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The rotation starting at letter `t`.
    pub fn rotation(&self, t: usize) -> Vec<Letter> {
        let n = self.letters.len();
        (0..n).map(|i| self.letters[(t + i) % n]).collect()
    }

    pub fn as_string(&self) -> StringWord {
        StringWord::Walk(self.letters.clone())
    }

    pub fn display(&self, bq: &BoundQuiver) -> String {
        self.as_string().display(bq)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum BandDefect {
    #[error("a band has length at least one")]
    Empty,
    #[error("word is not a string: {0}")]
    NotString(StringViolation),
    #[error("walk is not closed")]
    NotClosed,
    #[error("word is a proper power")]
    ProperPower,
    #[error("wrap-around junction violates {0}")]
    BadJunction(StringAxiom),
}

pub fn is_band(bq: &BoundQuiver, letters: &[Letter]) -> Result<(), BandDefect> {
    let n = letters.len();
    if n == 0 {
        return Err(BandDefect::Empty);
    }
    is_valid_string(bq, letters).map_err(BandDefect::NotString)?;
    if letters[n - 1].target(bq) != letters[0].source(bq) {
        return Err(BandDefect::NotClosed);
    }
    check_pair(bq, letters[n - 1], letters[0]).map_err(BandDefect::BadJunction)?;
    let proper_power = (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|i| letters[i] == letters[i % d]));
    if proper_power {
        return Err(BandDefect::ProperPower);
    }
    Ok(())
}

/// Minimum over all rotations of the word and of its inverse.
pub fn canonical_band(b: &BandWord) -> BandWord {
    let inv: Vec<Letter> = b.letters.iter().rev().map(|l| l.flip()).collect();
    let inv = BandWord { letters: inv };
    let n = b.letters.len();
    (0..n)
        .flat_map(|t| [b.rotation(t), inv.rotation(t)])
        .min()
        .map(|letters| BandWord { letters })
        .unwrap_or_else(|| b.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration exceeded the cap of {cap} words")]
pub struct CapExceeded {
    pub cap: usize,
}

/// Hard limit on the number of words enumeration will hold.
pub const ENUMERATION_CAP: usize = 2_000_000;

/// Every valid letter sequence of length `1..=max_len`, grouped by length.
fn all_walks(bq: &BoundQuiver, max_len: usize) -> Result<Vec<Vec<Vec<Letter>>>, CapExceeded> {
    let graph = TransitionGraph::new(bq);
    let mut layers: Vec<Vec<Vec<Letter>>> = Vec::new();
    if max_len == 0 {
        return Ok(layers);
    }
    let mut total = 0usize;
    let mut current: Vec<Vec<Letter>> = Letter::all(bq).map(|l| vec![l]).collect();
    for len in 1..=max_len {
        total += current.len();
        if total > ENUMERATION_CAP {
            return Err(CapExceeded { cap: ENUMERATION_CAP });
        }
        let next = if len < max_len {
            current
                .iter()
                .flat_map(|w| {
                    let last = *w.last().expect("nonempty");
                    graph.successors(last).iter().map(move |&y| {
                        let mut e = w.clone();
                        e.push(y);
                        e
                    })
                })
                .collect()
        } else {
            Vec::new()
        };
        layers.push(std::mem::replace(&mut current, next));
    }
    Ok(layers)
}

/// Canonical representatives of all strings of length at most `max_len`,
/// trivial strings included, sorted.
pub fn enumerate_strings(bq: &BoundQuiver, max_len: usize) -> Result<Vec<StringWord>, CapExceeded> {
    let mut out: Vec<StringWord> = bq.vertex_ids().map(StringWord::Trivial).collect();
    for layer in all_walks(bq, max_len)? {
        let mut classes: Vec<StringWord> =
            layer.into_iter().map(StringWord::Walk).filter(|w| canonical_string(w) == *w).collect();
        classes.sort();
        out.extend(classes);
    }
    Ok(out)
}

/// Canonical bands of length at most `max_len`, sorted by length then
/// letters.
pub fn enumerate_bands(bq: &BoundQuiver, max_len: usize) -> Result<Vec<BandWord>, CapExceeded> {
    let mut found = BTreeSet::new();
    for layer in all_walks(bq, max_len)? {
        for w in layer {
            if is_band(bq, &w).is_ok() {
                found.insert(canonical_band(&BandWord { letters: w }));
            }
        }
    }
    let mut out: Vec<BandWord> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Directed graph on letters; `x -> y` iff `x y` is a valid string.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    succ: Vec<Vec<Letter>>,
    reach: Vec<Vec<bool>>,
}

impl TransitionGraph {
    pub fn new(bq: &BoundQuiver) -> Self {
        let n = 2 * bq.arrow_count();
        let succ: Vec<Vec<Letter>> = (0..n)
            .map(|i| {
                let x = Letter::from_index(i);
                Letter::all(bq).filter(|&y| pair_is_valid(bq, x, y)).collect()
            })
            .collect();
        let reach = (0..n)
            .map(|start| {
                let mut seen = vec![false; n];
                let mut queue: VecDeque<usize> = succ[start].iter().map(|y| y.index()).collect();
                while let Some(i) = queue.pop_front() {
                    if std::mem::replace(&mut seen[i], true) {
                        continue;
                    }
                    queue.extend(succ[i].iter().map(|y| y.index()));
                }
                seen
            })
            .collect();
        TransitionGraph { succ, reach }
    }

    pub fn successors(&self, x: Letter) -> &[Letter] {
        &self.succ[x.index()]
    }

    pub fn letter_count(&self) -> usize {
        self.succ.len()
    }

    /// A path of at least one edge from `x` to `y`.
    pub fn reach(&self, x: Letter, y: Letter) -> bool {
        self.reach[x.index()][y.index()]
    }

    /// True iff the graph has a directed cycle, i.e. some band exists.
    pub fn has_cycle(&self) -> bool {
        (0..self.succ.len()).any(|i| self.reach[i][i])
    }
}

pub fn transition_graph(bq: &BoundQuiver) -> TransitionGraph {
    TransitionGraph::new(bq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron_bridge() -> BoundQuiver {
        BoundQuiver::from_names(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b1", "2", "3"), ("b2", "2", "3"), ("c", "3", "4")],
            &[&["a", "b1"], &["b2", "c"]],
        )
        .unwrap()
    }

    fn linear(rels: &[&[&str]]) -> BoundQuiver {
        BoundQuiver::from_names(
            &["1", "2", "3", "4", "5"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5")],
            rels,
        )
        .unwrap()
    }

    fn f(bq: &BoundQuiver, name: &str) -> Letter {
        Letter::forward(bq.arrow_id(name).unwrap())
    }

    fn i(bq: &BoundQuiver, name: &str) -> Letter {
        Letter::inverse(bq.arrow_id(name).unwrap())
    }

    #[test]
    fn kron_bridge_string_is_valid() {
        let bq = kron_bridge();
        let w = [f(&bq, "b2"), i(&bq, "b1"), f(&bq, "b2")];
        assert_eq!(is_valid_string(&bq, &w), Ok(()));
    }

    #[test]
    fn backtrack_is_s3() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        let w = [f(&bq, "a"), i(&bq, "a")];
        assert_eq!(is_valid_string(&bq, &w), Err(StringViolation { axiom: StringAxiom::S3, index: 1 }));
    }

    #[test]
    fn relation_is_s2_both_ways() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        assert_eq!(is_valid_string(&bq, &[f(&bq, "a"), f(&bq, "b")]).unwrap_err().axiom, StringAxiom::S2);
        assert_eq!(is_valid_string(&bq, &[i(&bq, "b"), i(&bq, "a")]).unwrap_err().axiom, StringAxiom::S2);
        assert_eq!(is_valid_string(&bq, &[f(&bq, "a"), f(&bq, "c")]).unwrap_err().axiom, StringAxiom::S1);
    }

    #[test]
    fn inverse_and_canonical() {
        let bq = kron_bridge();
        let w = StringWord::walk(vec![f(&bq, "b2"), i(&bq, "b1"), f(&bq, "b2")]);
        let inv = inverse(&w);
        assert_eq!(inv, StringWord::walk(vec![i(&bq, "b2"), f(&bq, "b1"), i(&bq, "b2")]));
        assert_eq!(inverse(&inv), w);
        assert_eq!(canonical_string(&w), canonical_string(&inv));
        let t = StringWord::Trivial(VertexId(2));
        assert_eq!(inverse(&t), t);
        let c = canonical_string(&w);
        assert_eq!(canonical_string(&c), c);
    }

    #[test]
    fn kron_bridge_band() {
        let bq = kron_bridge();
        let b = [f(&bq, "b1"), i(&bq, "b2")];
        assert_eq!(is_band(&bq, &b), Ok(()));
        let squared = [b[0], b[1], b[0], b[1]];
        assert_eq!(is_band(&bq, &squared), Err(BandDefect::ProperPower));
        let rotated = BandWord::new(&bq, vec![b[1], b[0]]).unwrap();
        assert_eq!(rotated, BandWord::new(&bq, b.to_vec()).unwrap());
        assert_eq!(canonical_band(&rotated), rotated);
        let bands = enumerate_bands(&bq, 6).unwrap();
        assert_eq!(bands.len(), 1);
        assert_eq!(bands[0].display(&bq), "b1 b2^-1");
    }

    #[test]
    fn linear_quiver_has_no_bands() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        assert!(enumerate_bands(&bq, 8).unwrap().is_empty());
        assert!(!transition_graph(&bq).has_cycle());
    }

    #[test]
    fn enumeration_counts() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        assert_eq!(enumerate_strings(&bq, 0).unwrap().len(), 5);
        assert_eq!(enumerate_strings(&bq, 1).unwrap().len(), 9);
        // two-letter strings: bc only (ab and cd are relations)
        assert_eq!(enumerate_strings(&bq, 2).unwrap().len(), 10);
    }

    #[test]
    fn canonical_forms_are_distinct_on_a5_one_rel() {
        let bq = linear(&[&["b", "c"]]);
        let words = enumerate_strings(&bq, 4).unwrap();
        let set: BTreeSet<_> = words.iter().cloned().collect();
        assert_eq!(set.len(), words.len());
        assert!(words.iter().all(|w| canonical_string(w) == *w));
    }

    #[test]
    fn transition_edges_match_pairs() {
        let bq = linear(&[&["a", "b"], &["c", "d"]]);
        let g = transition_graph(&bq);
        assert!(!g.successors(f(&bq, "a")).contains(&i(&bq, "c")));
        for x in Letter::all(&bq) {
            assert!(g.successors(x).len() <= 2);
        }
    }
}
