//! Projective and injective dimensions of string and band modules.
//!
//! The syzygy of a string module `M(w)` is a direct sum of one projective
//! `P(v)` for every interior valley `v` of the walk and at most one direct
//! string module at each end. The end summand at `s(w)` is `M(tail(x))`,
//! where `x` is the arrow out of `s(w)` such that `x^-1 w` is a string; the
//! right end is symmetric. Since every end summand is a tail, projective
//! dimensions reduce to a memo table over arrows. Injective dimensions run
//! the same machinery on the opposite quiver.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::forbidden::{
    finitistic_dimension, forbidden_continuation, global_dimension, maximal_forbidden_paths, Continuation, DimValue,
    ForbiddenPath, Side,
};
use crate::quiver::{
    opposite, strong_sinks, strong_sources, validate_gentle, ArrowId, BoundQuiver, GentleReport, VertexId,
};
use crate::walks::{
    canonical_string, enumerate_strings, inverse, is_valid_string, pair_is_valid, BandWord, CapExceeded, Letter,
    StringViolation, StringWord, TransitionGraph,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleRef {
    StringModule(StringWord),
    BandModule(BandWord, usize),
    ProjectiveAt(VertexId),
    InjectiveAt(VertexId),
    SimpleAt(VertexId),
}

impl ModuleRef {
    /// The string word behind a string-type reference.
    pub fn string_word(&self, bq: &BoundQuiver) -> Option<StringWord> {
        match self {
            ModuleRef::StringModule(w) => Some(w.clone()),
            ModuleRef::ProjectiveAt(v) => Some(projective_string(bq, *v)),
            ModuleRef::InjectiveAt(v) => Some(injective_string(bq, *v)),
            ModuleRef::SimpleAt(v) => Some(StringWord::Trivial(*v)),
            ModuleRef::BandModule(..) => None,
        }
    }

    pub fn display(&self, bq: &BoundQuiver) -> String {
        match self {
            ModuleRef::StringModule(w) => w.display(bq),
            ModuleRef::BandModule(b, n) => format!("band({}; n={n})", b.display(bq)),
            ModuleRef::ProjectiveAt(v) => format!("P({})", bq.vertex_name(*v)),
            ModuleRef::InjectiveAt(v) => format!("E({})", bq.vertex_name(*v)),
            ModuleRef::SimpleAt(v) => format!("S({})", bq.vertex_name(*v)),
        }
    }
}

/// Walk positions that are sources of the walk, left to right.
pub fn tops(bq: &BoundQuiver, w: &StringWord) -> Vec<VertexId> {
    positions(bq, w, |incoming, outgoing| incoming.is_none_or(|l| l.inverse) && outgoing.is_none_or(|l| l.is_forward()))
}

/// Walk positions that are sinks of the walk, left to right.
pub fn socs(bq: &BoundQuiver, w: &StringWord) -> Vec<VertexId> {
    positions(bq, w, |incoming, outgoing| incoming.is_none_or(|l| l.is_forward()) && outgoing.is_none_or(|l| l.inverse))
}

fn positions(bq: &BoundQuiver, w: &StringWord, keep: impl Fn(Option<Letter>, Option<Letter>) -> bool) -> Vec<VertexId> {
    let ls = w.letters();
    w.vertices(bq)
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| keep(i.checked_sub(1).map(|j| ls[j]), ls.get(i).copied()))
        .map(|(_, v)| v)
        .collect()
}

/// Interior walk positions entered by a forward letter and left by an
/// inverse one.
pub fn interior_valleys(bq: &BoundQuiver, w: &StringWord) -> Vec<VertexId> {
    let ls = w.letters();
    (1..ls.len()).filter(|&i| ls[i - 1].is_forward() && ls[i].inverse).map(|i| ls[i - 1].target(bq)).collect()
}

/// Interior walk positions entered by an inverse letter and left by a
/// forward one.
pub fn interior_peaks(bq: &BoundQuiver, w: &StringWord) -> Vec<VertexId> {
    let ls = w.letters();
    (1..ls.len()).filter(|&i| ls[i - 1].inverse && ls[i].is_forward()).map(|i| ls[i - 1].target(bq)).collect()
}

/// The maximal relation-free path from `t(x)` whose first arrow does not
/// form a relation with `x`.
pub fn tail(bq: &BoundQuiver, x: ArrowId) -> StringWord {
    let mut letters = Vec::new();
    let mut cur = x;
    while let Some(next) = bq.free_successors(cur).next() {
        letters.push(Letter::forward(next));
        cur = next;
        if letters.len() > bq.arrow_count() {
            panic!("relation-free cycle; validate the bound quiver first");
        }
    }
    if letters.is_empty() {
        StringWord::Trivial(bq.target(x))
    } else {
        StringWord::Walk(letters)
    }
}

/// `x` followed by its tail.
pub fn branch(bq: &BoundQuiver, x: ArrowId) -> Vec<Letter> {
    let mut letters = vec![Letter::forward(x)];
    letters.extend_from_slice(tail(bq, x).letters());
    letters
}

/// `P(v)` as a string word in canonical form.
pub fn projective_string(bq: &BoundQuiver, v: VertexId) -> StringWord {
    let word = match bq.out_arrows(v) {
        [] => StringWord::Trivial(v),
        [x] => StringWord::Walk(branch(bq, *x)),
        [x, y, ..] => {
            let mut letters = inverse(&StringWord::Walk(branch(bq, *x))).letters().to_vec();
            letters.extend(branch(bq, *y));
            StringWord::Walk(letters)
        }
    };
    canonical_string(&word)
}

/// `E(v)` as a string word in canonical form.
pub fn injective_string(bq: &BoundQuiver, v: VertexId) -> StringWord {
    canonical_string(&projective_string(&opposite(bq), v).transport())
}

/// A direct string end summand `M(tail(hook))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndSummand {
    pub hook: ArrowId,
    pub word: StringWord,
}

/// The shape `L ⊕ P(v_1) ⊕ ... ⊕ R` of a syzygy. For a cosyzygy the
/// interior vertices index injectives and the end words are cotails.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SyzygyDecomposition {
    pub left: Option<EndSummand>,
    pub interior: Vec<VertexId>,
    pub right: Option<EndSummand>,
}

impl SyzygyDecomposition {
    pub fn is_zero(&self) -> bool {
        self.left.is_none() && self.right.is_none() && self.interior.is_empty()
    }

    pub fn ends(&self) -> impl Iterator<Item = &EndSummand> {
        self.left.iter().chain(self.right.iter())
    }
}

/// The arrow `x` out of `s(w)` with `x^-1 w` a string.
fn left_hook(bq: &BoundQuiver, w: &StringWord) -> Option<ArrowId> {
    let first = w.first()?;
    let v = first.source(bq);
    bq.out_arrows(v).iter().copied().find(|&x| pair_is_valid(bq, Letter::inverse(x), first))
}

fn end_summand(bq: &BoundQuiver, hook: Option<ArrowId>) -> Option<EndSummand> {
    hook.map(|hook| EndSummand { hook, word: tail(bq, hook) })
}

pub fn syzygy(bq: &BoundQuiver, w: &StringWord) -> Result<SyzygyDecomposition, StringViolation> {
    is_valid_string(bq, w.letters())?;
    Ok(syzygy_unchecked(bq, w))
}

fn syzygy_unchecked(bq: &BoundQuiver, w: &StringWord) -> SyzygyDecomposition {
    match w {
        StringWord::Trivial(v) => {
            // the radical of P(v); the first out-arrow fills the right slot
            let outs = bq.out_arrows(*v);
            SyzygyDecomposition {
                left: end_summand(bq, outs.get(1).copied()),
                interior: Vec::new(),
                right: end_summand(bq, outs.first().copied()),
            }
        }
        StringWord::Walk(_) => SyzygyDecomposition {
            left: end_summand(bq, left_hook(bq, w)),
            interior: interior_valleys(bq, w),
            right: end_summand(bq, left_hook(bq, &inverse(w))),
        },
    }
}

/// Cokernel of the injective envelope, read back from a syzygy on the
/// opposite quiver.
pub fn cosyzygy(bq: &BoundQuiver, w: &StringWord) -> Result<SyzygyDecomposition, StringViolation> {
    is_valid_string(bq, w.letters())?;
    let d = syzygy_unchecked(&opposite(bq), &w.transport());
    let back = |e: EndSummand| EndSummand { hook: e.hook, word: e.word.transport() };
    Ok(SyzygyDecomposition { left: d.left.map(back), interior: d.interior, right: d.right.map(back) })
}

#[derive(Debug, Clone, Error)]
pub enum HomologyError {
    #[error("bound quiver is not gentle ({} violations)", .0.violations.len())]
    NotGentle(GentleReport),
    #[error(transparent)]
    InvalidString(#[from] StringViolation),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// Projective dimension of every tail module, one entry per arrow.
#[derive(Clone, Debug)]
struct TailTable {
    pd: Vec<DimValue>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    Fresh,
    InProgress,
    Done(DimValue),
}

impl TailTable {
    fn build(bq: &BoundQuiver) -> Self {
        let mut marks = vec![Mark::Fresh; bq.arrow_count()];
        for x in bq.arrow_ids() {
            Self::visit(bq, x, &mut marks);
        }
        let pd = marks
            .into_iter()
            .map(|m| match m {
                Mark::Done(d) => d,
                _ => unreachable!("every arrow visited"),
            })
            .collect();
        TailTable { pd }
    }

    fn visit(bq: &BoundQuiver, x: ArrowId, marks: &mut [Mark]) -> DimValue {
        match marks[x.0] {
            Mark::Done(d) => return d,
            Mark::InProgress => return DimValue::Infinite,
            Mark::Fresh => {}
        }
        marks[x.0] = Mark::InProgress;
        let d = syzygy_unchecked(bq, &tail(bq, x));
        let value = if d.is_zero() {
            DimValue::Finite(0)
        } else {
            d.ends().map(|e| Self::visit(bq, e.hook, marks)).fold(DimValue::Finite(0), DimValue::max).succ()
        };
        marks[x.0] = Mark::Done(value);
        value
    }

    fn pd(&self, bq: &BoundQuiver, w: &StringWord) -> DimValue {
        let d = syzygy_unchecked(bq, w);
        if d.is_zero() {
            return DimValue::Finite(0);
        }
        d.ends().map(|e| self.pd[e.hook.0]).fold(DimValue::Finite(0), DimValue::max).succ()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Iteration,
    ClosedForm,
    BandRule,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Iteration => "iteration",
            Method::ClosedForm => "closed_form",
            Method::BandRule => "band_rule",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub pd: DimValue,
    pub id: DimValue,
    pub sum: DimValue,
    pub method: Method,
    pub oracle_checked: bool,
}

/// Dimension engine for one gentle pair. Immutable once built, so it can be
/// shared across threads.
#[derive(Clone, Debug)]
pub struct HomologyEngine {
    bq: BoundQuiver,
    op: BoundQuiver,
    proj: TailTable,
    inj: TailTable,
}

impl HomologyEngine {
    pub fn new(bq: &BoundQuiver) -> Result<Self, HomologyError> {
        let report = validate_gentle(bq);
        if !report.is_gentle() {
            return Err(HomologyError::NotGentle(report));
        }
        let op = opposite(bq);
        Ok(HomologyEngine { proj: TailTable::build(bq), inj: TailTable::build(&op), bq: bq.clone(), op })
    }

    pub fn quiver(&self) -> &BoundQuiver {
        &self.bq
    }

    pub fn opposite(&self) -> &BoundQuiver {
        &self.op
    }

    /// Projective dimension of `M(tail(x))`.
    pub fn tail_proj_dim(&self, x: ArrowId) -> DimValue {
        self.proj.pd[x.0]
    }

    pub fn string_proj_dim(&self, w: &StringWord) -> DimValue {
        self.proj.pd(&self.bq, w)
    }

    pub fn string_inj_dim(&self, w: &StringWord) -> DimValue {
        self.inj.pd(&self.op, &w.transport())
    }

    pub fn proj_dim(&self, m: &ModuleRef) -> DimValue {
        match m.string_word(&self.bq) {
            Some(w) => self.string_proj_dim(&w),
            None => DimValue::Finite(1),
        }
    }

    pub fn inj_dim(&self, m: &ModuleRef) -> DimValue {
        match m.string_word(&self.bq) {
            Some(w) => self.string_inj_dim(&w),
            None => DimValue::Finite(1),
        }
    }

    pub fn dims(&self, m: &ModuleRef) -> HomReport {
        let (pd, id) = (self.proj_dim(m), self.inj_dim(m));
        let method = if matches!(m, ModuleRef::BandModule(..)) { Method::BandRule } else { Method::Iteration };
        HomReport { pd, id, sum: pd + id, method, oracle_checked: false }
    }
}

/// The four end numbers: chains into (`u`) and out of (`d`) each end of a
/// string, compatible with the string's end letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointProfile {
    pub u_l: Continuation,
    pub d_l: Continuation,
    pub u_r: Continuation,
    pub d_r: Continuation,
}

pub fn endpoint_profile(bq: &BoundQuiver, w: &StringWord) -> EndpointProfile {
    let (l, r) = (w.source(bq), w.target(bq));
    let (away_l, away_r) = (w.first(), w.last().map(Letter::flip));
    EndpointProfile {
        u_l: forbidden_continuation(bq, l, Side::Into, away_l),
        d_l: forbidden_continuation(bq, l, Side::OutOf, away_l),
        u_r: forbidden_continuation(bq, r, Side::Into, away_r),
        d_r: forbidden_continuation(bq, r, Side::OutOf, away_r),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub profile: EndpointProfile,
    pub pd: DimValue,
    pub id: DimValue,
    pub applicable: bool,
}

/// `pd = max(d_L, d_R)` and `id = max(u_L, u_R)`. Applicable to a trivial
/// string, and to a longer one when every end has a compatible chain on
/// both sides.
pub fn closed_form_dims(bq: &BoundQuiver, w: &StringWord) -> ClosedForm {
    let profile = endpoint_profile(bq, w);
    let present = |c: &Continuation| c.unbounded || c.path.is_some();
    let applicable =
        w.is_trivial() || [&profile.u_l, &profile.d_l, &profile.u_r, &profile.d_r].into_iter().all(present);
    ClosedForm {
        pd: profile.d_l.value().max(profile.d_r.value()),
        id: profile.u_l.value().max(profile.u_r.value()),
        profile,
        applicable,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HbMode {
    Exhaustive { max_len: usize },
    EndpointExact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbResult {
    pub value: DimValue,
    pub witness: Option<ModuleRef>,
    pub exact: bool,
}

/// A shortest cycle of the transition graph, as a band.
pub fn find_band(bq: &BoundQuiver) -> Option<BandWord> {
    let graph = TransitionGraph::new(bq);
    let mut best: Option<Vec<Letter>> = None;
    for start in Letter::all(bq) {
        if !graph.reach(start, start) {
            continue;
        }
        let mut parent: HashMap<Letter, Letter> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        'bfs: while let Some(x) = queue.pop_front() {
            for &y in graph.successors(x) {
                if y == start {
                    let mut cycle = vec![x];
                    while let Some(&p) = parent.get(cycle.last().unwrap()) {
                        cycle.push(p);
                    }
                    cycle.reverse();
                    if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                        best = Some(cycle);
                    }
                    break 'bfs;
                }
                if y != start && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
    }
    best.map(|letters| BandWord::new(bq, letters).expect("a shortest transition cycle is a band"))
}

struct HbBest {
    value: usize,
    witness: Option<ModuleRef>,
}

impl HbBest {
    fn offer(&mut self, pd: DimValue, id: DimValue, m: impl FnOnce() -> ModuleRef) {
        if let DimValue::Finite(s) = pd + id {
            if self.witness.is_none() || s > self.value {
                self.value = s;
                self.witness = Some(m());
            }
        }
    }
}

/// Supremum of `pd + id` over indecomposables with both dimensions finite.
pub fn hb_dim(engine: &HomologyEngine, mode: HbMode) -> Result<HbResult, CapExceeded> {
    let bq = engine.quiver();
    let mut best = HbBest { value: 0, witness: None };
    let exact = match mode {
        HbMode::Exhaustive { max_len } => {
            for w in enumerate_strings(bq, max_len)? {
                best.offer(engine.string_proj_dim(&w), engine.string_inj_dim(&w), || ModuleRef::StringModule(w));
            }
            false
        }
        HbMode::EndpointExact => {
            for v in bq.vertex_ids() {
                let w = StringWord::Trivial(v);
                best.offer(engine.string_proj_dim(&w), engine.string_inj_dim(&w), || ModuleRef::StringModule(w));
            }
            for w in end_class_representatives(bq) {
                best.offer(engine.string_proj_dim(&w), engine.string_inj_dim(&w), || {
                    ModuleRef::StringModule(canonical_string(&w))
                });
            }
            true
        }
    };
    if let Some(band) = find_band(bq) {
        best.offer(DimValue::Finite(1), DimValue::Finite(1), || ModuleRef::BandModule(band, 1));
    }
    Ok(HbResult { value: DimValue::Finite(best.value), witness: best.witness, exact })
}

/// State of a walk for the purposes of its dimensions: the last letter and
/// whether an interior valley or peak has been passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct EndState {
    last: Letter,
    valley: bool,
    peak: bool,
}

/// One shortest string for every reachable (first letter, end state)
/// class. Strings of positive length in one class share `pd` and `id`.
pub fn end_class_representatives(bq: &BoundQuiver) -> Vec<StringWord> {
    let graph = TransitionGraph::new(bq);
    let mut out = Vec::new();
    for first in Letter::all(bq) {
        let start = EndState { last: first, valley: false, peak: false };
        let mut parent: HashMap<EndState, Option<EndState>> = HashMap::from([(start, None)]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for &y in graph.successors(s.last) {
                let next = EndState {
                    last: y,
                    valley: s.valley || (s.last.is_forward() && y.inverse),
                    peak: s.peak || (s.last.inverse && y.is_forward()),
                };
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some(s));
                    order.push(next);
                    queue.push_back(next);
                }
            }
        }
        for s in order {
            let mut letters = vec![s.last];
            let mut cur = s;
            while let Some(Some(p)) = parent.get(&cur) {
                letters.push(p.last);
                cur = *p;
            }
            letters.reverse();
            out.push(StringWord::Walk(letters));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundHypotheses {
    pub sources_ok: bool,
    pub sinks_ok: bool,
    /// maximal forbidden paths of length at least two not starting at a
    /// strong source
    pub source_witnesses: Vec<ForbiddenPath>,
    /// the same for ending at a strong sink
    pub sink_witnesses: Vec<ForbiddenPath>,
}

impl BoundHypotheses {
    pub fn either(&self) -> bool {
        self.sources_ok || self.sinks_ok
    }
}

pub fn check_bound_hypotheses(bq: &BoundQuiver) -> BoundHypotheses {
    let long: Vec<ForbiddenPath> = maximal_forbidden_paths(bq).into_iter().filter(|p| p.len() >= 2).collect();
    let (sources, sinks) = (strong_sources(bq), strong_sinks(bq));
    let source_witnesses: Vec<_> = long.iter().filter(|p| !sources.contains(&p.source(bq))).cloned().collect();
    let sink_witnesses: Vec<_> = long.iter().filter(|p| !sinks.contains(&p.target(bq))).cloned().collect();
    BoundHypotheses {
        sources_ok: source_witnesses.is_empty(),
        sinks_ok: sink_witnesses.is_empty(),
        source_witnesses,
        sink_witnesses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `hb.dim <= 2 gl.dim - 1`, finite global dimension
    GlobalDimension,
    /// `hb.dim <= 2 f.dim - 1`, infinite global dimension
    FinitisticDimension,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub hb: HbResult,
    pub gldim: DimValue,
    pub findim: usize,
    pub hypotheses: BoundHypotheses,
    /// which inequality applies, with its right-hand side
    pub asserted: Option<(BoundKind, usize)>,
    pub holds: bool,
}

/// Evaluates hb.dim and the applicable upper bound. `holds` is true when no
/// bound applies.
pub fn verify_bound(engine: &HomologyEngine) -> BoundCheck {
    let bq = engine.quiver();
    let hb = hb_dim(engine, HbMode::EndpointExact).expect("endpoint mode does not enumerate");
    let gldim = global_dimension(bq);
    let findim = finitistic_dimension(bq);
    let hypotheses = check_bound_hypotheses(bq);
    let asserted = if !hypotheses.either() {
        None
    } else {
        match gldim {
            DimValue::Finite(g) if g >= 2 => Some((BoundKind::GlobalDimension, 2 * g - 1)),
            DimValue::Infinite if findim >= 2 => Some((BoundKind::FinitisticDimension, 2 * findim - 1)),
            _ => None,
        }
    };
    let holds = asserted.is_none_or(|(_, bound)| hb.value <= DimValue::Finite(bound));
    BoundCheck { hb, gldim, findim, hypotheses, asserted, holds }
}
