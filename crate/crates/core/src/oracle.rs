//! Explicit representations over a prime field and dimensions computed from
//! minimal projective resolutions.
//!
//! A representation assigns a space to each vertex and to each arrow `a` a
//! matrix of shape `dim t(a) x dim s(a)` acting on column vectors. A path
//! `ab` acts as `V_b * V_a`, so a relation `(a, b)` requires that product to
//! vanish.

use std::collections::HashMap;

use thiserror::Error;

use crate::forbidden::DimValue;
use crate::homology::{injective_string, projective_string, HomologyEngine, ModuleRef};
use crate::quiver::{opposite, ArrowId, BoundQuiver, VertexId};
use crate::walks::{
    enumerate_bands, enumerate_strings, is_band, is_valid_string, BandDefect, BandWord, CapExceeded, StringViolation,
    StringWord,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("band eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error("band block size must be at least one")]
    EmptyBlock,
    #[error(transparent)]
    InvalidString(#[from] StringViolation),
    #[error(transparent)]
    InvalidBand(#[from] BandDefect),
    #[error("relation {0} {1} does not act as zero")]
    RelationViolated(String, String),
    #[error("more than {0} nonzero paths; the algebra looks infinite dimensional")]
    TooManyPaths(usize),
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
}

pub const DEFAULT_PRIME: u64 = 101;
pub const SECOND_PRIME: u64 = 32003;

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { p: DEFAULT_PRIME }
    }
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self, OracleError> {
        let prime = (2..(1 << 31)).contains(&p) && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if prime {
            Ok(FieldSpec { p })
        } else {
            Err(OracleError::NotPrime(p))
        }
    }

    pub fn prime(self) -> u64 {
        self.p
    }

    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(self, a: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, rhs: &Matrix, f: FieldSpec) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Matrix {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self, f: FieldSpec) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(pr * self.cols + c, row * self.cols + c);
            }
            let inv = f.inv(self.get(row, col));
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: FieldSpec) -> usize {
        self.clone().rref(f).len()
    }

    /// Columns spanning the null space.
    pub fn nullspace(&self, f: FieldSpec) -> Matrix {
        let mut r = self.clone();
        let pivots = r.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.sub(0, r.get(i, fc)));
            }
        }
        out
    }

    /// The unique `X` with `self * X = rhs`, when `self` has full column
    /// rank and `rhs` lies in its column space.
    pub fn solve(&self, rhs: &Matrix, f: FieldSpec) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "shape mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.cols {
                aug.set(i, self.cols + j, rhs.get(i, j));
            }
        }
        let pivots = aug.rref(f);
        if pivots.len() != self.cols || pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, aug.get(i, self.cols + j));
            }
        }
        Some(x)
    }
}

/// A finite-dimensional representation of a bound quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub mats: Vec<Matrix>,
}

impl Representation {
    pub fn zero(bq: &BoundQuiver) -> Self {
        Representation { dims: vec![0; bq.vertex_count()], mats: bq.arrow_ids().map(|_| Matrix::zeros(0, 0)).collect() }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn dim_at(&self, v: VertexId) -> usize {
        self.dims[v.0]
    }

    /// Checks matrix shapes and that every relation acts as zero.
    pub fn check(&self, bq: &BoundQuiver, f: FieldSpec) -> Result<(), OracleError> {
        for a in bq.arrow_ids() {
            let m = &self.mats[a.0];
            let shape = (self.dims[bq.target(a).0], self.dims[bq.source(a).0]);
            assert_eq!((m.rows, m.cols), shape, "arrow {} has the wrong shape", bq.arrow_name(a));
        }
        for (a, b) in bq.relations() {
            if !self.mats[b.0].mul(&self.mats[a.0], f).is_zero() {
                return Err(OracleError::RelationViolated(bq.arrow_name(a).to_string(), bq.arrow_name(b).to_string()));
            }
        }
        for g in bq.other_generators() {
            let mut acc = Matrix::identity(self.dims[bq.source(g[0]).0]);
            for &a in g {
                acc = self.mats[a.0].mul(&acc, f);
            }
            if !acc.is_zero() {
                let names: Vec<&str> = g.iter().map(|&a| bq.arrow_name(a)).collect();
                return Err(OracleError::RelationViolated(names.join(" "), String::new()));
            }
        }
        Ok(())
    }

    /// The dual representation, over the opposite quiver.
    pub fn dual(&self) -> Representation {
        Representation { dims: self.dims.clone(), mats: self.mats.iter().map(Matrix::transpose).collect() }
    }
}

/// Builds a representation from basis positions (one vertex each) and
/// arrow actions `(arrow, from position, to position, block)`, with every
/// position carrying `n` copies.
fn assemble(
    bq: &BoundQuiver,
    vertices: &[VertexId],
    n: usize,
    actions: &[(ArrowId, usize, usize, Matrix)],
) -> Representation {
    let mut dims = vec![0; bq.vertex_count()];
    let offsets: Vec<usize> = vertices
        .iter()
        .map(|v| {
            let o = dims[v.0];
            dims[v.0] += n;
            o
        })
        .collect();
    let mut mats: Vec<Matrix> =
        bq.arrow_ids().map(|a| Matrix::zeros(dims[bq.target(a).0], dims[bq.source(a).0])).collect();
    for (a, from, to, block) in actions {
        let m = &mut mats[a.0];
        for i in 0..n {
            for j in 0..n {
                let v = block.get(i, j);
                if v != 0 {
                    m.set(offsets[*to] + i, offsets[*from] + j, v);
                }
            }
        }
    }
    Representation { dims, mats }
}

/// One basis vector per walk position; each letter acts by 1 between its
/// two positions.
pub fn string_rep(bq: &BoundQuiver, w: &StringWord, f: FieldSpec) -> Result<Representation, OracleError> {
    is_valid_string(bq, w.letters())?;
    let vertices = w.vertices(bq);
    let actions: Vec<_> = w
        .letters()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let (from, to) = if l.inverse { (i + 1, i) } else { (i, i + 1) };
            (l.arrow, from, to, Matrix::identity(1))
        })
        .collect();
    let rep = assemble(bq, &vertices, 1, &actions);
    rep.check(bq, f)?;
    Ok(rep)
}

/// Band module: `n` copies of each position of the cycle, identity blocks on
/// all letters but the closing one, which acts by the Jordan block
/// `lambda * I + N`.
pub fn band_rep(
    bq: &BoundQuiver,
    b: &BandWord,
    n: usize,
    lambda: u64,
    f: FieldSpec,
) -> Result<Representation, OracleError> {
    if n == 0 {
        return Err(OracleError::EmptyBlock);
    }
    if lambda.is_multiple_of(f.p) {
        return Err(OracleError::ZeroEigenvalue);
    }
    is_band(bq, b.letters())?;
    let m = b.len();
    let vertices: Vec<VertexId> = b.letters().iter().map(|l| l.source(bq)).collect();
    let mut jordan = Matrix::identity(n);
    for i in 0..n {
        jordan.set(i, i, lambda % f.p);
        if i + 1 < n {
            jordan.set(i, i + 1, 1);
        }
    }
    let actions: Vec<_> = b
        .letters()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let next = (i + 1) % m;
            let block = if i + 1 == m { jordan.clone() } else { Matrix::identity(n) };
            let (from, to) = if l.inverse { (next, i) } else { (i, next) };
            (l.arrow, from, to, block)
        })
        .collect();
    let rep = assemble(bq, &vertices, n, &actions);
    rep.check(bq, f)?;
    Ok(rep)
}

const PATH_LIMIT: usize = 100_000;

/// Nonzero paths starting at `v`, `e_v` first, in depth-first order.
fn paths_from(bq: &BoundQuiver, v: VertexId) -> Result<Vec<Vec<ArrowId>>, OracleError> {
    let mut out = vec![Vec::new()];
    let mut stack = vec![Vec::new()];
    while let Some(p) = stack.pop() {
        let end = p.last().map_or(v, |&a| bq.target(a));
        for &a in bq.out_arrows(end).iter().rev() {
            if bq.extends_nonzero(&p, a) {
                let mut q = p.clone();
                q.push(a);
                out.push(q.clone());
                stack.push(q);
                if out.len() > PATH_LIMIT {
                    return Err(OracleError::TooManyPaths(PATH_LIMIT));
                }
            }
        }
    }
    Ok(out)
}

fn path_end(bq: &BoundQuiver, v: VertexId, p: &[ArrowId]) -> VertexId {
    p.last().map_or(v, |&a| bq.target(a))
}

/// `P(v)` with the basis of nonzero paths starting at `v`.
pub fn projective_rep(bq: &BoundQuiver, v: VertexId, f: FieldSpec) -> Result<Representation, OracleError> {
    let paths = paths_from(bq, v)?;
    let vertices: Vec<VertexId> = paths.iter().map(|p| path_end(bq, v, p)).collect();
    let index: HashMap<&[ArrowId], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut actions = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for &a in bq.out_arrows(vertices[i]) {
            let mut q = p.clone();
            q.push(a);
            if let Some(&j) = index.get(q.as_slice()) {
                actions.push((a, i, j, Matrix::identity(1)));
            }
        }
    }
    let rep = assemble(bq, &vertices, 1, &actions);
    rep.check(bq, f)?;
    Ok(rep)
}

/// `E(v)`, the dual of the opposite quiver's `P(v)`.
pub fn injective_rep(bq: &BoundQuiver, v: VertexId, f: FieldSpec) -> Result<Representation, OracleError> {
    let rep = projective_rep(&opposite(bq), v, f)?.dual();
    rep.check(bq, f)?;
    Ok(rep)
}

/// Sum of the images of all arrows ending at `v`, as spanning columns.
fn radical_columns(bq: &BoundQuiver, rep: &Representation, v: VertexId) -> Vec<Vec<u64>> {
    bq.in_arrows(v)
        .iter()
        .flat_map(|&a| {
            let m = &rep.mats[a.0];
            (0..m.cols).map(move |c| m.column(c))
        })
        .collect()
}

/// Multiplicity of each simple in `rep / rad rep`.
pub fn top_of(bq: &BoundQuiver, rep: &Representation, f: FieldSpec) -> Vec<usize> {
    bq.vertex_ids()
        .map(|v| {
            let cols = radical_columns(bq, rep, v);
            rep.dims[v.0] - Matrix::from_columns(rep.dims[v.0], &cols).rank(f)
        })
        .collect()
}

/// Multiplicity of each simple in the socle of `rep`.
pub fn socle_of(bq: &BoundQuiver, rep: &Representation, f: FieldSpec) -> Vec<usize> {
    top_of(&opposite(bq), &rep.dual(), f)
}

/// A projective cover `P -> M` together with its kernel.
#[derive(Clone, Debug)]
pub struct Cover {
    /// cover multiplicity per vertex
    pub multiplicities: Vec<usize>,
    pub cover_dims: Vec<usize>,
    pub kernel: Representation,
    /// the kernel lies in the radical of the cover
    pub minimal: bool,
}

/// Generators of the top: basis vectors extending a basis of the radical.
fn top_generators(bq: &BoundQuiver, rep: &Representation, f: FieldSpec) -> Vec<(VertexId, Vec<u64>)> {
    let mut gens = Vec::new();
    for v in bq.vertex_ids() {
        let d = rep.dims[v.0];
        let mut cols = radical_columns(bq, rep, v);
        let mut rank = Matrix::from_columns(d, &cols).rank(f);
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            cols.push(e.clone());
            let r = Matrix::from_columns(d, &cols).rank(f);
            if r > rank {
                rank = r;
                gens.push((v, e));
            } else {
                cols.pop();
            }
        }
    }
    gens
}

/// A basis element of a cover summand: its generator, the path from the
/// generator, and the image of that path in the module.
type CoverBasis = (usize, Vec<ArrowId>, Vec<u64>);

pub fn minimal_cover(bq: &BoundQuiver, rep: &Representation, f: FieldSpec) -> Result<Cover, OracleError> {
    let gens = top_generators(bq, rep, f);
    let mut multiplicities = vec![0; bq.vertex_count()];
    let mut basis: Vec<Vec<CoverBasis>> = vec![Vec::new(); bq.vertex_count()];
    for (j, (v, g)) in gens.iter().enumerate() {
        multiplicities[v.0] += 1;
        for p in paths_from(bq, *v)? {
            let mut image = g.clone();
            let mut at = *v;
            for &a in &p {
                image = rep.mats[a.0].mul(&Matrix::from_columns(rep.dims[at.0], &[image]), f).column(0);
                at = bq.target(a);
            }
            basis[at.0].push((j, p, image));
        }
    }
    let cover_dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let index: Vec<HashMap<(usize, &[ArrowId]), usize>> =
        basis.iter().map(|b| b.iter().enumerate().map(|(i, (j, p, _))| ((*j, p.as_slice()), i)).collect()).collect();

    let kernels: Vec<Matrix> = bq
        .vertex_ids()
        .map(|u| {
            let images: Vec<Vec<u64>> = basis[u.0].iter().map(|(_, _, im)| im.clone()).collect();
            Matrix::from_columns(rep.dims[u.0], &images).nullspace(f)
        })
        .collect();

    let minimal = bq.vertex_ids().all(|u| {
        let k = &kernels[u.0];
        basis[u.0]
            .iter()
            .enumerate()
            .filter(|(_, (_, p, _))| p.is_empty())
            .all(|(i, _)| (0..k.cols).all(|c| k.get(i, c) == 0))
    });

    let mut mats = Vec::new();
    for a in bq.arrow_ids() {
        let (s, t) = (bq.source(a), bq.target(a));
        let mut cover_a = Matrix::zeros(cover_dims[t.0], cover_dims[s.0]);
        for (i, (j, p, _)) in basis[s.0].iter().enumerate() {
            if bq.extends_nonzero(p, a) {
                let mut q = p.clone();
                q.push(a);
                let target = index[t.0][&(*j, q.as_slice())];
                cover_a.set(target, i, 1);
            }
        }
        let image = cover_a.mul(&kernels[s.0], f);
        let x = kernels[t.0].solve(&image, f).expect("the kernel is a subrepresentation");
        mats.push(x);
    }
    let kernel = Representation { dims: kernels.iter().map(Matrix::cols).collect(), mats };
    kernel.check(bq, f)?;
    Ok(Cover { multiplicities, cover_dims, kernel, minimal })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleDim {
    Finite(usize),
    AtLeast(usize),
}

impl OracleDim {
    pub fn finite_value(self) -> Option<usize> {
        match self {
            OracleDim::Finite(n) => Some(n),
            OracleDim::AtLeast(_) => None,
        }
    }

    /// Pairs `AtLeast` with `Infinite`.
    pub fn agrees_with(self, d: DimValue) -> bool {
        match (self, d) {
            (OracleDim::Finite(a), DimValue::Finite(b)) => a == b,
            (OracleDim::AtLeast(_), DimValue::Infinite) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    pub cover_multiplicities: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub steps: Vec<ResolutionStep>,
    pub terminated: bool,
    pub depth_cap: usize,
}

impl ResolutionTrace {
    pub fn dim(&self) -> OracleDim {
        if self.terminated {
            OracleDim::Finite(self.steps.len() - 1)
        } else {
            OracleDim::AtLeast(self.depth_cap)
        }
    }

    pub fn all_minimal(&self) -> bool {
        self.steps.iter().all(|s| s.minimal)
    }
}

/// Minimal projective resolution, stopped after `depth_cap` nonzero kernels.
pub fn resolve(
    bq: &BoundQuiver,
    rep: &Representation,
    depth_cap: usize,
    f: FieldSpec,
) -> Result<ResolutionTrace, OracleError> {
    let mut steps = Vec::new();
    let mut module = rep.clone();
    for _ in 0..depth_cap.max(1) {
        let cover = minimal_cover(bq, &module, f)?;
        steps.push(ResolutionStep {
            cover_multiplicities: cover.multiplicities,
            kernel_dims: cover.kernel.dims.clone(),
            minimal: cover.minimal,
        });
        if cover.kernel.is_zero() {
            return Ok(ResolutionTrace { steps, terminated: true, depth_cap });
        }
        module = cover.kernel;
    }
    Ok(ResolutionTrace { steps, terminated: false, depth_cap })
}

pub fn pd_oracle(
    bq: &BoundQuiver,
    rep: &Representation,
    depth_cap: usize,
    f: FieldSpec,
) -> Result<OracleDim, OracleError> {
    Ok(resolve(bq, rep, depth_cap, f)?.dim())
}

/// Injective dimension as the projective dimension of the dual module.
pub fn id_oracle(
    bq: &BoundQuiver,
    rep: &Representation,
    depth_cap: usize,
    f: FieldSpec,
) -> Result<OracleDim, OracleError> {
    pd_oracle(&opposite(bq), &rep.dual(), depth_cap, f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRun {
    pub n: usize,
    pub lambda: u64,
    pub pd: OracleDim,
    pub id: OracleDim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaReport {
    pub runs: Vec<LambdaRun>,
}

impl LambdaReport {
    pub fn all_one(&self) -> bool {
        self.runs.iter().all(|r| r.pd == OracleDim::Finite(1) && r.id == OracleDim::Finite(1))
    }
}

/// Oracle dimensions of `B(n, lambda)` for `n` in {1, 2} and three nonzero
/// eigenvalues.
pub fn lambda_independence(bq: &BoundQuiver, b: &BandWord, f: FieldSpec) -> Result<LambdaReport, OracleError> {
    let lambdas = [1, 2, f.prime() - 1];
    let mut runs = Vec::new();
    for n in [1, 2] {
        for lambda in lambdas {
            let rep = band_rep(bq, b, n, lambda, f)?;
            runs.push(LambdaRun { n, lambda, pd: pd_oracle(bq, &rep, 10, f)?, id: id_oracle(bq, &rep, 10, f)? });
        }
    }
    Ok(LambdaReport { runs })
}

/// Whether `P(v)` built from paths and from its string word agree on
/// dimension vector and top, and likewise for `E(v)`.
pub fn indecomposable_projectives_match(bq: &BoundQuiver, f: FieldSpec) -> Result<bool, OracleError> {
    for v in bq.vertex_ids() {
        let p = projective_rep(bq, v, f)?;
        let ps = string_rep(bq, &projective_string(bq, v), f)?;
        let e = injective_rep(bq, v, f)?;
        let es = string_rep(bq, &injective_string(bq, v), f)?;
        if p.dims != ps.dims
            || top_of(bq, &p, f) != top_of(bq, &ps, f)
            || e.dims != es.dims
            || socle_of(bq, &e, f) != socle_of(bq, &es, f)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A module on which the combinatorial and oracle dimensions differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub module: ModuleRef,
    pub prime: u64,
    pub combinatorial: (DimValue, DimValue),
    pub oracle: (OracleDim, OracleDim),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgreementSummary {
    /// modules compared (each against every prime)
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// resolution steps whose cover was not minimal
    pub non_minimal: usize,
}

#[derive(Debug, Error)]
pub enum AgreementError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// Compares `(pd, id)` from the engine with the oracle for every string and
/// band up to `max_len` (bands with `n` in {1, 2}), over each field.
pub fn check_agreement(
    engine: &HomologyEngine,
    max_len: usize,
    depth_cap: usize,
    fields: &[FieldSpec],
) -> Result<AgreementSummary, AgreementError> {
    let bq = engine.quiver();
    let op = engine.opposite();
    let mut summary = AgreementSummary::default();
    let mut modules: Vec<ModuleRef> =
        enumerate_strings(bq, max_len)?.into_iter().map(ModuleRef::StringModule).collect();
    for b in enumerate_bands(bq, max_len)? {
        modules.push(ModuleRef::BandModule(b.clone(), 1));
        modules.push(ModuleRef::BandModule(b, 2));
    }
    for m in modules {
        let combinatorial = (engine.proj_dim(&m), engine.inj_dim(&m));
        let mut bad = None;
        for &f in fields {
            let rep = match &m {
                ModuleRef::BandModule(b, n) => band_rep(bq, b, *n, 2, f)?,
                other => string_rep(bq, &other.string_word(bq).expect("string module"), f)?,
            };
            let pd = resolve(bq, &rep, depth_cap, f)?;
            let id = resolve(op, &rep.dual(), depth_cap, f)?;
            summary.non_minimal += pd.steps.iter().chain(&id.steps).filter(|s| !s.minimal).count();
            let oracle = (pd.dim(), id.dim());
            if bad.is_none() && !(oracle.0.agrees_with(combinatorial.0) && oracle.1.agrees_with(combinatorial.1)) {
                bad = Some(Mismatch { module: m.clone(), prime: f.prime(), combinatorial, oracle });
            }
        }
        summary.checked += 1;
        summary.mismatches.extend(bad);
    }
    Ok(summary)
}
