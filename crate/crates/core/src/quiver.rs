//! Quivers with quadratic monomial relations, and the gentle-pair checks.
//!
//! Composition is written left to right: the path `ab` exists when
//! `t(a) = s(b)`, and a relation `(a, b)` kills that path.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("undeclared vertex `{0}`")]
    UnknownVertex(String),
    #[error("undeclared arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation not composable: t({0}) != s({1})")]
    NotComposable(String, String),
    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),
    #[error("empty relation")]
    EmptyRelation,
}

/// A finite quiver; vertices and arrows keep their declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, QuiverError> {
        if self.vertex_index.contains_key(name) {
            return Err(QuiverError::DuplicateVertex(name.to_string()));
        }
        let id = VertexId(self.vertices.len());
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<ArrowId, QuiverError> {
        if self.arrow_index.contains_key(name) {
            return Err(QuiverError::DuplicateArrow(name.to_string()));
        }
        let source = self.vertex(source)?;
        let target = self.vertex(target)?;
        Ok(self.push_arrow(name.to_string(), source, target))
    }

    fn push_arrow(&mut self, name: String, source: VertexId, target: VertexId) -> ArrowId {
        let id = ArrowId(self.arrows.len());
        self.arrow_index.insert(name.clone(), id);
        self.arrows.push(Arrow { name, source, target });
        id
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, QuiverError> {
        self.vertex_index.get(name).copied().ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId, QuiverError> {
        self.arrow_index.get(name).copied().ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(ArrowId)
    }
}

/// A quiver together with monomial relations.
///
/// Length-two relations live in `relations`; any generator of another length
/// is kept in `other_generators` so that validation can report it as a G4
/// violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiver {
    quiver: Quiver,
    relations: BTreeSet<(ArrowId, ArrowId)>,
    other_generators: Vec<Vec<ArrowId>>,
    out_arrows: Vec<Vec<ArrowId>>,
    in_arrows: Vec<Vec<ArrowId>>,
}

impl BoundQuiver {
    pub fn new(quiver: Quiver) -> Self {
        let mut out_arrows = vec![Vec::new(); quiver.vertex_count()];
        let mut in_arrows = vec![Vec::new(); quiver.vertex_count()];
        for a in quiver.arrow_ids() {
            let arrow = quiver.arrow(a);
            out_arrows[arrow.source.0].push(a);
            in_arrows[arrow.target.0].push(a);
        }
        Self { quiver, relations: BTreeSet::new(), other_generators: Vec::new(), out_arrows, in_arrows }
    }

    /// Convenience constructor from names; each relation is a list of arrow
    /// names read as a left-to-right path.
    pub fn from_names(
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        relations: &[&[&str]],
    ) -> Result<Self, QuiverError> {
        let mut q = Quiver::new();
        for v in vertices {
            q.add_vertex(v)?;
        }
        for (name, s, t) in arrows {
            q.add_arrow(name, s, t)?;
        }
        let mut bq = BoundQuiver::new(q);
        for rel in relations {
            bq.add_relation_by_names(rel)?;
        }
        Ok(bq)
    }

    pub fn add_relation_by_names(&mut self, names: &[&str]) -> Result<(), QuiverError> {
        let ids = names.iter().map(|n| self.quiver.arrow_id(n)).collect::<Result<Vec<_>, _>>()?;
        self.add_relation(&ids)
    }

    pub fn add_relation(&mut self, path: &[ArrowId]) -> Result<(), QuiverError> {
        if path.is_empty() {
            return Err(QuiverError::EmptyRelation);
        }
        for w in path.windows(2) {
            if self.target(w[0]) != self.source(w[1]) {
                return Err(QuiverError::NotComposable(
                    self.arrow_name(w[0]).to_string(),
                    self.arrow_name(w[1]).to_string(),
                ));
            }
        }
        let duplicate = if path.len() == 2 {
            !self.relations.insert((path[0], path[1]))
        } else if self.other_generators.iter().any(|g| g == path) {
            true
        } else {
            self.other_generators.push(path.to_vec());
            false
        };
        if duplicate {
            let names: Vec<&str> = path.iter().map(|&a| self.arrow_name(a)).collect();
            return Err(QuiverError::DuplicateRelation(names.join(" ")));
        }
        Ok(())
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrow_count()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.quiver.vertex_ids()
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.quiver.arrow_ids()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        self.quiver.vertex_name(v)
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.quiver.arrow(a).name
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, QuiverError> {
        self.quiver.vertex(name)
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId, QuiverError> {
        self.quiver.arrow_id(name)
    }

    pub fn source(&self, a: ArrowId) -> VertexId {
        self.quiver.arrow(a).source
    }

    pub fn target(&self, a: ArrowId) -> VertexId {
        self.quiver.arrow(a).target
    }

    pub fn out_arrows(&self, v: VertexId) -> &[ArrowId] {
        &self.out_arrows[v.0]
    }

    pub fn in_arrows(&self, v: VertexId) -> &[ArrowId] {
        &self.in_arrows[v.0]
    }

    /// Length-two relations in sorted order.
    pub fn relations(&self) -> impl Iterator<Item = (ArrowId, ArrowId)> + '_ {
        self.relations.iter().copied()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn other_generators(&self) -> &[Vec<ArrowId>] {
        &self.other_generators
    }

    pub fn is_relation(&self, a: ArrowId, b: ArrowId) -> bool {
        self.relations.contains(&(a, b))
    }

    /// Arrows `b` with `ab` a relation.
    pub fn relation_successors(&self, a: ArrowId) -> impl Iterator<Item = ArrowId> + '_ {
        let t = self.target(a);
        self.out_arrows(t).iter().copied().filter(move |&b| self.is_relation(a, b))
    }

    /// Arrows `c` with `ca` a relation.
    pub fn relation_predecessors(&self, a: ArrowId) -> impl Iterator<Item = ArrowId> + '_ {
        let s = self.source(a);
        self.in_arrows(s).iter().copied().filter(move |&c| self.is_relation(c, a))
    }

    /// Arrows `b` composable after `a` with `ab` not a relation.
    pub fn free_successors(&self, a: ArrowId) -> impl Iterator<Item = ArrowId> + '_ {
        let t = self.target(a);
        self.out_arrows(t).iter().copied().filter(move |&b| !self.is_relation(a, b))
    }

    /// Arrows `c` composable before `a` with `ca` not a relation.
    pub fn free_predecessors(&self, a: ArrowId) -> impl Iterator<Item = ArrowId> + '_ {
        let s = self.source(a);
        self.in_arrows(s).iter().copied().filter(move |&c| !self.is_relation(c, a))
    }

    /// Whether a path (given as arrows) contains one of the monomial
    /// generators as a consecutive subpath.
    pub fn path_is_zero(&self, path: &[ArrowId]) -> bool {
        if path.windows(2).any(|w| self.is_relation(w[0], w[1])) {
            return true;
        }
        self.other_generators.iter().any(|g| path.windows(g.len()).any(|w| w == g.as_slice()))
    }

    /// Whether `path` can be extended by `next` without hitting a generator.
    pub fn extends_nonzero(&self, path: &[ArrowId], next: ArrowId) -> bool {
        if let Some(&last) = path.last() {
            if self.target(last) != self.source(next) || self.is_relation(last, next) {
                return false;
            }
        }
        self.other_generators.iter().all(|g| {
            let k = g.len();
            if k > path.len() + 1 || g[k - 1] != next {
                return true;
            }
            path[path.len() + 1 - k..] != g[..k - 1]
        })
    }

    pub fn opposite(&self) -> BoundQuiver {
        opposite(self)
    }
}

/// Name of an arrow in the opposite quiver. Stripping-or-appending the
/// suffix keeps the renaming an involution.
pub fn opposite_name(name: &str) -> String {
    match name.strip_suffix("_op") {
        Some(base) => base.to_string(),
        None => format!("{name}_op"),
    }
}

/// The opposite bound quiver: arrows reversed, each relation `(a, b)`
/// becomes `(b_op, a_op)`. Vertex and arrow order are preserved, so ids
/// carry over unchanged.
pub fn opposite(bq: &BoundQuiver) -> BoundQuiver {
    let mut q = Quiver::new();
    for v in bq.vertex_ids() {
        q.add_vertex(bq.vertex_name(v)).expect("vertex names are unique");
    }
    for a in bq.arrow_ids() {
        let arrow = bq.quiver.arrow(a);
        q.push_arrow(opposite_name(&arrow.name), arrow.target, arrow.source);
    }
    let mut op = BoundQuiver::new(q);
    for (a, b) in bq.relations() {
        op.relations.insert((b, a));
    }
    for g in &bq.other_generators {
        op.other_generators.push(g.iter().rev().copied().collect());
    }
    op
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ViolationCode {
    G1,
    G2,
    G3,
    G4,
    FD,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationCode::G1 => "G1",
            ViolationCode::G2 => "G2",
            ViolationCode::G3 => "G3",
            ViolationCode::G4 => "G4",
            ViolationCode::FD => "FD",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub witness: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GentleReport {
    pub violations: Vec<Violation>,
}

impl GentleReport {
    pub fn is_gentle(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> BTreeSet<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }
}

/// Checks G1–G4 and finite dimensionality, collecting every violation.
pub fn validate_gentle(bq: &BoundQuiver) -> GentleReport {
    let mut violations = Vec::new();
    let arrow_names = |xs: &[ArrowId]| xs.iter().map(|&a| bq.arrow_name(a).to_string()).collect::<Vec<_>>();

    for v in bq.vertex_ids() {
        let (outd, ind) = (bq.out_arrows(v).len(), bq.in_arrows(v).len());
        if outd > 2 || ind > 2 {
            violations.push(Violation {
                code: ViolationCode::G1,
                witness: vec![bq.vertex_name(v).to_string()],
                message: format!("vertex {} has out-degree {outd} and in-degree {ind}", bq.vertex_name(v)),
            });
        }
    }

    for a in bq.arrow_ids() {
        let after: Vec<_> = bq.free_successors(a).collect();
        let before: Vec<_> = bq.free_predecessors(a).collect();
        for (side, xs) in [("after", &after), ("before", &before)] {
            if xs.len() > 1 {
                let mut witness = vec![bq.arrow_name(a).to_string()];
                witness.extend(arrow_names(xs));
                violations.push(Violation {
                    code: ViolationCode::G2,
                    witness,
                    message: format!(
                        "arrow {} has {} relation-free continuations {side} it",
                        bq.arrow_name(a),
                        xs.len()
                    ),
                });
            }
        }
    }

    for a in bq.arrow_ids() {
        let after: Vec<_> = bq.relation_successors(a).collect();
        let before: Vec<_> = bq.relation_predecessors(a).collect();
        for (side, xs) in [("after", &after), ("before", &before)] {
            if xs.len() > 1 {
                let mut witness = vec![bq.arrow_name(a).to_string()];
                witness.extend(arrow_names(xs));
                violations.push(Violation {
                    code: ViolationCode::G3,
                    witness,
                    message: format!("arrow {} is in {} relations {side} it", bq.arrow_name(a), xs.len()),
                });
            }
        }
    }

    for g in bq.other_generators() {
        violations.push(Violation {
            code: ViolationCode::G4,
            witness: arrow_names(g),
            message: format!("relation generator of length {} (only length two allowed)", g.len()),
        });
    }

    for cycle in relation_free_cycles(bq) {
        violations.push(Violation {
            code: ViolationCode::FD,
            message: format!("relation-free oriented cycle {}", arrow_names(&cycle).join(" ")),
            witness: arrow_names(&cycle),
        });
    }

    GentleReport { violations }
}

/// One relation-free oriented cycle per strongly connected component of the
/// "composable and not a relation" graph on arrows.
fn relation_free_cycles(bq: &BoundQuiver) -> Vec<Vec<ArrowId>> {
    let n = bq.arrow_count();
    let succ: Vec<Vec<ArrowId>> = bq.arrow_ids().map(|a| bq.free_successors(a).collect()).collect();
    let comp = strongly_connected(n, &succ);
    let mut seen_comp = BTreeSet::new();
    let mut cycles = Vec::new();
    for a in bq.arrow_ids() {
        let c = comp[a.0];
        let nontrivial = succ[a.0].iter().any(|b| comp[b.0] == c);
        if !nontrivial || !seen_comp.insert(c) {
            continue;
        }
        // walk inside the component until an arrow repeats
        let mut path = vec![a];
        let mut pos: HashMap<ArrowId, usize> = HashMap::from([(a, 0)]);
        let mut cur = a;
        loop {
            let next = *succ[cur.0].iter().find(|b| comp[b.0] == c).expect("component is strongly connected");
            if let Some(&i) = pos.get(&next) {
                cycles.push(path[i..].to_vec());
                break;
            }
            pos.insert(next, path.len());
            path.push(next);
            cur = next;
        }
    }
    cycles
}

/// Tarjan's algorithm, iterative; returns a component index per node.
fn strongly_connected(n: usize, succ: &[Vec<ArrowId>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut child)) = work.last_mut() {
            if *child == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(w) = succ[v].get(*child).map(|b| b.0) {
                *child += 1;
                if index[w] == UNSEEN {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("stack holds v");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Sources with out-degree at most one (isolated vertices included).
pub fn strong_sources(bq: &BoundQuiver) -> Vec<VertexId> {
    bq.vertex_ids().filter(|&v| bq.in_arrows(v).is_empty() && bq.out_arrows(v).len() <= 1).collect()
}

/// Sinks with in-degree at most one (isolated vertices included).
pub fn strong_sinks(bq: &BoundQuiver) -> Vec<VertexId> {
    bq.vertex_ids().filter(|&v| bq.out_arrows(v).is_empty() && bq.in_arrows(v).len() <= 1).collect()
}

/// True iff some relation `(a1, a2)` passes through `v`.
pub fn vertex_with_relation(bq: &BoundQuiver, v: VertexId) -> bool {
    bq.in_arrows(v).iter().any(|&a| bq.out_arrows(v).iter().any(|&b| bq.is_relation(a, b)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("bounds must be at least one vertex")]
    EmptyBounds,
    #[error("no gentle pair found after {0} attempts")]
    Exhausted(usize),
}

const GENERATION_ATTEMPTS: usize = 64;

/// A pseudo-random gentle pair, deterministic in `seed`.
///
/// Arrows are sampled under the degree bounds of G1, each vertex then
/// pairs its incoming with its outgoing arrows into relation and
/// non-relation slots, and relation-free cycles are broken by deleting an
/// arrow and re-pairing.
pub fn random_gentle(seed: u64, max_vertices: usize, max_arrows: usize) -> Result<BoundQuiver, GenerationError> {
    if max_vertices == 0 {
        return Err(GenerationError::EmptyBounds);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_ATTEMPTS {
        let n = rng.gen_range(1..=max_vertices);
        let target_arrows = rng.gen_range(0..=max_arrows.min(2 * n));
        let mut arrows: Vec<(usize, usize)> = Vec::new();
        let mut outd = vec![0usize; n];
        let mut ind = vec![0usize; n];
        let mut tries = 0;
        while arrows.len() < target_arrows && tries < 50 * (target_arrows + 1) {
            tries += 1;
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            // loops are rare in practice; keep them but make them unlikely
            if s == t && rng.gen_bool(0.8) {
                continue;
            }
            if outd[s] < 2 && ind[t] < 2 {
                outd[s] += 1;
                ind[t] += 1;
                arrows.push((s, t));
            }
        }
        loop {
            let relations = pair_relations(n, &arrows, &mut rng);
            let bq = build_random(n, &arrows, &relations);
            let cycles = relation_free_cycles(&bq);
            match cycles.first() {
                None => {
                    if validate_gentle(&bq).is_gentle() {
                        return Ok(bq);
                    }
                    break;
                }
                Some(cycle) => {
                    let victim = cycle[rng.gen_range(0..cycle.len())];
                    arrows.remove(victim.0);
                }
            }
        }
    }
    Err(GenerationError::Exhausted(GENERATION_ATTEMPTS))
}

fn pair_relations(n: usize, arrows: &[(usize, usize)], rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut relations = Vec::new();
    for v in 0..n {
        let ins: Vec<usize> = (0..arrows.len()).filter(|&i| arrows[i].1 == v).collect();
        let outs: Vec<usize> = (0..arrows.len()).filter(|&i| arrows[i].0 == v).collect();
        match (ins.len(), outs.len()) {
            (0, _) | (_, 0) => {}
            (1, 1) => {
                if rng.gen_bool(0.5) {
                    relations.push((ins[0], outs[0]));
                }
            }
            (1, 2) => relations.push((ins[0], outs[rng.gen_range(0..2)])),
            (2, 1) => relations.push((ins[rng.gen_range(0..2)], outs[0])),
            _ => {
                let flip = rng.gen_bool(0.5) as usize;
                relations.push((ins[0], outs[flip]));
                relations.push((ins[1], outs[1 - flip]));
            }
        }
    }
    relations
}

fn build_random(n: usize, arrows: &[(usize, usize)], relations: &[(usize, usize)]) -> BoundQuiver {
    let mut q = Quiver::new();
    for v in 0..n {
        q.add_vertex(&(v + 1).to_string()).expect("fresh names");
    }
    for (i, &(s, t)) in arrows.iter().enumerate() {
        q.push_arrow(format!("x{}", i + 1), VertexId(s), VertexId(t));
    }
    let mut bq = BoundQuiver::new(q);
    for &(a, b) in relations {
        bq.relations.insert((ArrowId(a), ArrowId(b)));
    }
    bq
}
