//! Finite-dimensional algebras, bimodules over a base algebra, tensor
//! products over the base and the cyclic quotient Π with its flip.
//!
//! Tensor spaces are quotients of the flat 𝕂-tensor space. Basis tuples use
//! a mixed-radix index with the first factor most significant. Every
//! quotient basis element is represented by a single tuple, so maps are
//! defined on tuples and projected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::qlinalg::{
    normalize, quotient_by_rows, QuotientSpace, Rational, RationalMatrix, SparseVec,
};
use crate::report::Report;

pub type Tuple = Vec<usize>;
/// A linear combination of basis tuples.
pub type Lin = Vec<(Tuple, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("tensor factors do not share the same base algebra")]
    MismatchedBase,
    #[error("basis size {size} exceeds the guard {guard}")]
    GuardExceeded { size: usize, guard: usize },
    #[error("map is not well defined on the quotient: {0}")]
    IllDefined(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

/// Default cap on ambient tensor basis sizes.
pub const DEFAULT_GUARD: usize = 100_000;

/// Merge equal tuples and drop zero coefficients.
pub fn collect_lin(terms: Lin) -> Lin {
    let mut acc: BTreeMap<Tuple, Rational> = BTreeMap::new();
    for (t, c) in terms {
        *acc.entry(t).or_default() += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Multilinear expansion of a tuple of vectors.
pub fn expand(parts: &[&[(usize, Rational)]]) -> Lin {
    let mut out: Lin = vec![(Vec::with_capacity(parts.len()), Rational::one())];
    for part in parts {
        let mut next = Vec::with_capacity(out.len() * part.len());
        for (t, c) in &out {
            for (i, v) in part.iter() {
                let mut t2 = t.clone();
                t2.push(*i);
                next.push((t2, c * v));
            }
        }
        out = next;
    }
    out
}

/// Replace slot `k` of every tuple in `terms` by the vector `f(entry)`.
pub fn map_slot(terms: &Lin, k: usize, f: impl Fn(usize) -> SparseVec) -> Lin {
    let mut out = Vec::new();
    for (t, c) in terms {
        for (i, v) in f(t[k]) {
            let mut t2 = t.clone();
            t2[k] = i;
            out.push((t2, c * &v));
        }
    }
    out
}

/// A finite-dimensional associative unital algebra given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAlgebra {
    pub labels: Vec<String>,
    /// `mul[i * dim + j]` is the product of basis elements `i` and `j`.
    mul: Vec<SparseVec>,
    pub unit: SparseVec,
}

impl FinAlgebra {
    pub fn new(labels: Vec<String>, mul: Vec<Vec<SparseVec>>, unit: SparseVec) -> Self {
        let n = labels.len();
        assert!(
            mul.len() == n && mul.iter().all(|r| r.len() == n),
            "structure constants must be dim × dim"
        );
        FinAlgebra {
            labels,
            mul: mul.into_iter().flatten().map(normalize).collect(),
            unit: normalize(unit),
        }
    }

    /// The ground field.
    pub fn field() -> Self {
        FinAlgebra::new(
            vec!["1".into()],
            vec![vec![vec![(0, Rational::one())]]],
            vec![(0, Rational::one())],
        )
    }

    /// 𝕂^n with its basis of orthogonal idempotents.
    pub fn diagonal(labels: Vec<String>) -> Self {
        let n = labels.len();
        let mul = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            vec![(i, Rational::one())]
                        } else {
                            vec![]
                        }
                    })
                    .collect()
            })
            .collect();
        FinAlgebra::new(labels, mul, (0..n).map(|i| (i, Rational::one())).collect())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i * self.dim() + j]
    }

    pub fn mul_basis_mut(&mut self, i: usize, j: usize) -> &mut SparseVec {
        let n = self.dim();
        &mut self.mul[i * n + j]
    }

    pub fn product(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> SparseVec {
        let mut terms = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, z) in self.mul_basis(*i, *j) {
                    terms.push((*k, &xy * z));
                }
            }
        }
        normalize(terms)
    }

    /// Matrix of `v ↦ a·v`.
    pub fn left_mult(&self, a: &[(usize, Rational)]) -> RationalMatrix {
        let cols = (0..self.dim())
            .map(|j| self.product(a, &[(j, Rational::one())]))
            .collect();
        RationalMatrix::from_columns(self.dim(), cols)
    }

    /// Matrix of `v ↦ v·a`.
    pub fn right_mult(&self, a: &[(usize, Rational)]) -> RationalMatrix {
        let cols = (0..self.dim())
            .map(|j| self.product(&[(j, Rational::one())], a))
            .collect();
        RationalMatrix::from_columns(self.dim(), cols)
    }

    /// True when the basis consists of orthogonal idempotents summing to 1.
    pub fn has_idempotent_basis(&self) -> bool {
        let n = self.dim();
        let unit_ok = self.unit == (0..n).map(|i| (i, Rational::one())).collect::<SparseVec>();
        unit_ok
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    let p = self.mul_basis(i, j);
                    if i == j {
                        p.as_slice() == [(i, Rational::one())]
                    } else {
                        p.is_empty()
                    }
                })
            })
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A unital algebra map given by its matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: FinAlgebra,
    pub target: FinAlgebra,
    pub matrix: RationalMatrix,
}

impl AlgebraMorphism {
    pub fn apply(&self, v: &[(usize, Rational)]) -> SparseVec {
        self.matrix.apply(v)
    }
}

/// A bimodule over a base algebra, stored as one action matrix per base
/// basis element on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    pub base: FinAlgebra,
    pub labels: Vec<String>,
    /// `left[r]`: m ↦ r·m.
    pub left: Vec<RationalMatrix>,
    /// `right[r]`: m ↦ m·r.
    pub right: Vec<RationalMatrix>,
}

impl Bimodule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// The base algebra as a bimodule over itself.
    pub fn regular(r: &FinAlgebra) -> Self {
        let e = |i: usize| vec![(i, Rational::one())];
        Bimodule {
            base: r.clone(),
            labels: r.labels.clone(),
            left: (0..r.dim()).map(|i| r.left_mult(&e(i))).collect(),
            right: (0..r.dim()).map(|i| r.right_mult(&e(i))).collect(),
        }
    }

    /// The target of an algebra map with actions by multiplication.
    pub fn from_morphism(phi: &AlgebraMorphism) -> Self {
        let t = &phi.target;
        let r = &phi.source;
        let img = |i: usize| phi.apply(&[(i, Rational::one())]);
        Bimodule {
            base: r.clone(),
            labels: t.labels.clone(),
            left: (0..r.dim()).map(|i| t.left_mult(&img(i))).collect(),
            right: (0..r.dim()).map(|i| t.right_mult(&img(i))).collect(),
        }
    }

    pub fn act_left(&self, r: &[(usize, Rational)], m: &[(usize, Rational)]) -> SparseVec {
        let mut out = Vec::new();
        for (i, c) in r {
            for (k, v) in self.left[*i].apply(m) {
                out.push((k, c * &v));
            }
        }
        normalize(out)
    }

    pub fn act_right(&self, m: &[(usize, Rational)], r: &[(usize, Rational)]) -> SparseVec {
        let mut out = Vec::new();
        for (i, c) in r {
            for (k, v) in self.right[*i].apply(m) {
                out.push((k, c * &v));
            }
        }
        normalize(out)
    }

    /// For an idempotent-basis base algebra, the pair `(a, b)` with
    /// `e_a·m·e_b = m` for every basis vector, if every basis vector is homogeneous.
    pub fn grading(&self) -> Option<Vec<(usize, usize)>> {
        if !self.base.has_idempotent_basis() {
            return None;
        }
        (0..self.dim())
            .map(|m| {
                let unit = [(m, Rational::one())];
                let side = |acts: &[RationalMatrix]| {
                    let mut found = None;
                    for (a, act) in acts.iter().enumerate() {
                        let v = act.apply(&unit);
                        if v.as_slice() == unit {
                            if found.is_some() {
                                return None;
                            }
                            found = Some(a);
                        } else if !v.is_empty() {
                            return None;
                        }
                    }
                    found
                };
                Some((side(&self.left)?, side(&self.right)?))
            })
            .collect()
    }
}

/// A coring: a bimodule with coassociative counital comultiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coring {
    pub carrier: Bimodule,
    /// C → C⊗_R C, in the coordinates of `TensorSpace::tensor(&[C, C])`.
    pub delta: RationalMatrix,
    /// C → R.
    pub eps: RationalMatrix,
}

/// The n-fold tensor product over the base, or its cyclic quotient Π, as a
/// quotient of the flat 𝕂-tensor space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpace {
    pub dims: Vec<usize>,
    strides: Vec<usize>,
    pub quotient: QuotientSpace,
    pub cyclic: bool,
    /// Whether the idempotent-grading shortcut produced this space.
    pub graded: bool,
}

impl TensorSpace {
    /// `m_1 ⊗_R … ⊗_R m_k`.
    pub fn tensor(ms: &[&Bimodule], guard: usize) -> Result<Self, AlgError> {
        Self::build(ms, false, guard, true)
    }

    /// `Π(m_1 ⊗_R … ⊗_R m_k)`.
    pub fn cyclic(ms: &[&Bimodule], guard: usize) -> Result<Self, AlgError> {
        Self::build(ms, true, guard, true)
    }

    /// Same spaces, always through the general cokernel construction.
    pub fn generic(ms: &[&Bimodule], cyclic: bool, guard: usize) -> Result<Self, AlgError> {
        Self::build(ms, cyclic, guard, false)
    }

    fn build(
        ms: &[&Bimodule],
        cyclic: bool,
        guard: usize,
        allow_graded: bool,
    ) -> Result<Self, AlgError> {
        assert!(!ms.is_empty(), "empty tensor product");
        if ms.iter().any(|m| m.base != ms[0].base) {
            return Err(AlgError::MismatchedBase);
        }
        let dims: Vec<usize> = ms.iter().map(|m| m.dim()).collect();
        let mut size: usize = 1;
        for &d in &dims {
            size = size
                .checked_mul(d)
                .filter(|&s| s <= guard)
                .ok_or(AlgError::GuardExceeded {
                    size: dims.iter().fold(1usize, |a, &d| a.saturating_mul(d)),
                    guard,
                })?;
        }
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut space = TensorSpace {
            dims,
            strides,
            quotient: QuotientSpace::by_coordinates(&vec![false; size]),
            cyclic,
            graded: false,
        };
        let gradings: Option<Vec<Vec<(usize, usize)>>> = if allow_graded {
            ms.iter().map(|m| m.grading()).collect()
        } else {
            None
        };
        if let Some(gr) = gradings {
            let k = ms.len();
            let killed: Vec<bool> = (0..size)
                .map(|idx| {
                    let t = space.tuple(idx);
                    let inner = (0..k - 1).any(|p| gr[p][t[p]].1 != gr[p + 1][t[p + 1]].0);
                    inner || (cyclic && gr[k - 1][t[k - 1]].1 != gr[0][t[0]].0)
                })
                .collect();
            space.quotient = QuotientSpace::by_coordinates(&killed);
            space.graded = true;
        } else {
            let rows = space.balancing_relations(ms, cyclic);
            space.quotient = quotient_by_rows(size, &rows);
        }
        Ok(space)
    }

    fn balancing_relations(&self, ms: &[&Bimodule], cyclic: bool) -> Vec<SparseVec> {
        let k = ms.len();
        let r = &ms[0].base;
        let mut rows = Vec::new();
        let pairs: Vec<(usize, usize)> = (0..k - 1)
            .map(|p| (p, p + 1))
            .chain(if cyclic { Some((k - 1, 0)) } else { None })
            .collect();
        for idx in 0..self.ambient_dim() {
            let t = self.tuple(idx);
            for &(p, q) in &pairs {
                for ri in 0..r.dim() {
                    // (…, m_p·r, …, m_q, …) − (…, m_p, …, r·m_q, …)
                    let mut terms = Vec::new();
                    for (i, v) in ms[p].right[ri].column(t[p]) {
                        let mut u = t.clone();
                        u[p] = *i;
                        terms.push((self.index(&u), v.clone()));
                    }
                    for (i, v) in ms[q].left[ri].column(t[q]) {
                        let mut u = t.clone();
                        u[q] = *i;
                        terms.push((self.index(&u), -v));
                    }
                    let row = normalize(terms);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.quotient.ambient_dim
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn index(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn tuple(&self, mut idx: usize) -> Tuple {
        let mut t = vec![0; self.dims.len()];
        for (slot, &s) in t.iter_mut().zip(&self.strides) {
            *slot = idx / s;
            idx %= s;
        }
        t
    }

    /// The tuple representing quotient basis element `k`.
    pub fn basis_tuple(&self, k: usize) -> Tuple {
        self.tuple(self.quotient.representatives()[k])
    }

    pub fn project_tuple(&self, t: &[usize]) -> &[(usize, Rational)] {
        self.quotient.class_of(self.index(t))
    }

    pub fn project(&self, lin: &Lin) -> SparseVec {
        let mut terms = Vec::new();
        for (t, c) in lin {
            for (k, v) in self.project_tuple(t) {
                terms.push((*k, c * v));
            }
        }
        normalize(terms)
    }

    /// Lift a quotient vector to tuples via representatives.
    pub fn lift(&self, v: &[(usize, Rational)]) -> Lin {
        v.iter()
            .map(|(k, c)| (self.basis_tuple(*k), c.clone()))
            .collect()
    }

    /// Relations spanning the kernel of the projection, as tuple combinations.
    pub fn relations(&self) -> Vec<Lin> {
        self.quotient
            .relation_basis
            .to_sparse_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|(i, c)| (self.tuple(i), c)).collect())
            .collect()
    }

    /// The tensor product (not Π) as a bimodule with the outer actions.
    pub fn as_bimodule(&self, ms: &[&Bimodule]) -> Bimodule {
        let r = &ms[0].base;
        let last = ms.len() - 1;
        let act = |slot: usize, m: &Bimodule, left: bool, ri: usize| {
            let acts = if left { &m.left } else { &m.right };
            induced_map(
                self,
                self,
                |t| {
                    map_slot(&vec![(t.to_vec(), Rational::one())], slot, |i| {
                        acts[ri].column(i).to_vec()
                    })
                },
                false,
            )
            .expect("unchecked")
        };
        Bimodule {
            base: r.clone(),
            labels: (0..self.dim())
                .map(|k| format!("{:?}", self.basis_tuple(k)))
                .collect(),
            left: (0..r.dim()).map(|ri| act(0, ms[0], true, ri)).collect(),
            right: (0..r.dim())
                .map(|ri| act(last, ms[last], false, ri))
                .collect(),
        }
    }
}

/// The matrix of the map induced on quotients by a map on basis tuples.
/// With `check`, the images of all relations must vanish.
pub fn induced_map(
    src: &TensorSpace,
    tgt: &TensorSpace,
    f: impl Fn(&[usize]) -> Lin,
    check: bool,
) -> Result<RationalMatrix, AlgError> {
    let cols: Vec<SparseVec> = (0..src.dim())
        .map(|k| tgt.project(&f(&src.basis_tuple(k))))
        .collect();
    if check {
        for rel in src.relations() {
            let mut img = Vec::new();
            for (t, c) in &rel {
                for (u, v) in f(t) {
                    img.push((u, c * &v));
                }
            }
            if !tgt.project(&img).is_empty() {
                return Err(AlgError::IllDefined(format!(
                    "relation through {:?}",
                    rel[0].0
                )));
            }
        }
    }
    Ok(RationalMatrix::from_columns(tgt.dim(), cols))
}

/// View a matrix out of a tensor space as a map on tuples.
pub fn apply_on_tuple(
    m: &RationalMatrix,
    src: &TensorSpace,
    tgt: &TensorSpace,
    t: &[usize],
) -> Lin {
    tgt.lift(&m.apply(src.project_tuple(t)))
}

/// `m_1 ⊗_R … ⊗_R m_k` with the outer actions, the surjection from the flat
/// tensor space, and the representative tuples of the chosen basis.
pub fn tensor_over_r(
    ms: &[&Bimodule],
    guard: usize,
) -> Result<(Bimodule, RationalMatrix, Vec<Tuple>), AlgError> {
    let space = TensorSpace::tensor(ms, guard)?;
    let basis = (0..space.dim()).map(|k| space.basis_tuple(k)).collect();
    Ok((
        space.as_bimodule(ms),
        space.quotient.projection.clone(),
        basis,
    ))
}

/// Π of the tensor product, its projection from the flat space, and the
/// flip sending the class of `x_1⊗…⊗x_n` to that of `x_2⊗…⊗x_n⊗x_1`.
pub fn pi_and_flip(
    ms: &[&Bimodule],
    guard: usize,
) -> Result<(TensorSpace, RationalMatrix), AlgError> {
    let src = TensorSpace::cyclic(ms, guard)?;
    let mut rotated: Vec<&Bimodule> = ms[1..].to_vec();
    rotated.push(ms[0]);
    let tgt = TensorSpace::cyclic(&rotated, guard)?;
    let flip = induced_map(
        &src,
        &tgt,
        |t| {
            let mut u = t[1..].to_vec();
            u.push(t[0]);
            vec![(u, Rational::one())]
        },
        true,
    )?;
    Ok((src, flip))
}

fn lin_combination(acts: &[RationalMatrix], r: &[(usize, Rational)], n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for (i, c) in r {
        m = m.combine(&acts[*i], c);
    }
    m
}

pub fn validate_algebra(a: &FinAlgebra) -> Report {
    let mut rep = Report::new();
    let n = a.dim();
    let e = |i: usize| vec![(i, Rational::one())];
    for i in 0..n {
        for j in 0..n {
            let ij = a.mul_basis(i, j).clone();
            for k in 0..n {
                let lhs = a.product(&ij, &e(k));
                let rhs = a.product(&e(i), a.mul_basis(j, k));
                if lhs != rhs {
                    rep.push(
                        "associativity",
                        format!("({},{},{})", a.labels[i], a.labels[j], a.labels[k]),
                    );
                }
            }
        }
        if a.product(&a.unit, &e(i)) != e(i) || a.product(&e(i), &a.unit) != e(i) {
            rep.push("unit", a.labels[i].clone());
        }
    }
    rep
}

pub fn validate_morphism(f: &AlgebraMorphism) -> Report {
    let mut rep = Report::new();
    if f.matrix.shape() != (f.target.dim(), f.source.dim()) {
        rep.push("shape", format!("{:?}", f.matrix.shape()));
        return rep;
    }
    if f.apply(&f.source.unit) != f.target.unit {
        rep.push("unit preserved", "1".into());
    }
    let e = |i: usize| vec![(i, Rational::one())];
    for i in 0..f.source.dim() {
        for j in 0..f.source.dim() {
            let lhs = f.apply(f.source.mul_basis(i, j));
            let rhs = f.target.product(&f.apply(&e(i)), &f.apply(&e(j)));
            if lhs != rhs {
                rep.push(
                    "multiplicative",
                    format!("({},{})", f.source.labels[i], f.source.labels[j]),
                );
            }
        }
    }
    rep
}

pub fn validate_bimodule(m: &Bimodule) -> Report {
    let mut rep = Report::new();
    let r = &m.base;
    let n = m.dim();
    if m.left.len() != r.dim() || m.right.len() != r.dim() {
        rep.push("shape", "one action matrix per base element".into());
        return rep;
    }
    let id = RationalMatrix::identity(n);
    if lin_combination(&m.left, &r.unit, n) != id {
        rep.push("left unit", String::new());
    }
    if lin_combination(&m.right, &r.unit, n) != id {
        rep.push("right unit", String::new());
    }
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            let prod = r.mul_basis(i, j);
            if m.left[i].mul(&m.left[j]) != lin_combination(&m.left, prod, n) {
                rep.push(
                    "left associativity",
                    format!("({},{})", r.labels[i], r.labels[j]),
                );
            }
            if m.right[j].mul(&m.right[i]) != lin_combination(&m.right, prod, n) {
                rep.push(
                    "right associativity",
                    format!("({},{})", r.labels[i], r.labels[j]),
                );
            }
            if m.left[i].mul(&m.right[j]) != m.right[j].mul(&m.left[i]) {
                rep.push(
                    "actions commute",
                    format!("({},{})", r.labels[i], r.labels[j]),
                );
            }
        }
    }
    rep
}

pub fn validate_coring(c: &Coring, guard: usize) -> Report {
    let mut rep = validate_bimodule(&c.carrier);
    if !rep.is_ok() {
        return rep;
    }
    let m = &c.carrier;
    let r = &m.base;
    let rmod = Bimodule::regular(r);
    let (cc, ccc) = match (
        TensorSpace::tensor(&[m, m], guard),
        TensorSpace::tensor(&[m, m, m], guard),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            rep.push("tensor space", e.to_string());
            return rep;
        }
    };
    if c.delta.shape() != (cc.dim(), m.dim()) || c.eps.shape() != (r.dim(), m.dim()) {
        rep.push("shape", "coproduct or counit".into());
        return rep;
    }
    let cc_bim = cc.as_bimodule(&[m, m]);
    for ri in 0..r.dim() {
        if c.delta.mul(&m.left[ri]) != cc_bim.left[ri].mul(&c.delta) {
            rep.push("coproduct left-linear", r.labels[ri].clone());
        }
        if c.delta.mul(&m.right[ri]) != cc_bim.right[ri].mul(&c.delta) {
            rep.push("coproduct right-linear", r.labels[ri].clone());
        }
        if c.eps.mul(&m.left[ri]) != rmod.left[ri].mul(&c.eps) {
            rep.push("counit left-linear", r.labels[ri].clone());
        }
        if c.eps.mul(&m.right[ri]) != rmod.right[ri].mul(&c.eps) {
            rep.push("counit right-linear", r.labels[ri].clone());
        }
    }
    let delta_tuple = |i: usize| cc.lift(c.delta.column(i));
    let left_first = induced_map(
        &cc,
        &ccc,
        |t| {
            delta_tuple(t[0])
                .into_iter()
                .map(|(u, v)| (vec![u[0], u[1], t[1]], v))
                .collect()
        },
        true,
    );
    let left_second = induced_map(
        &cc,
        &ccc,
        |t| {
            delta_tuple(t[1])
                .into_iter()
                .map(|(u, v)| (vec![t[0], u[0], u[1]], v))
                .collect()
        },
        true,
    );
    match (left_first, left_second) {
        (Ok(a), Ok(b)) => {
            let lhs = a.mul(&c.delta);
            let rhs = b.mul(&c.delta);
            for j in 0..m.dim() {
                if lhs.column(j) != rhs.column(j) {
                    rep.push("coassociativity", m.labels[j].clone());
                }
            }
        }
        _ => rep.push("coassociativity", "Δ⊗C not well defined".into()),
    }
    // (ε⊗C)Δ(c) = ε(c_1)·c_2 and (C⊗ε)Δ(c) = c_1·ε(c_2)
    for j in 0..m.dim() {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (t, v) in delta_tuple(j) {
            for (k, x) in m.act_left(c.eps.column(t[0]), &[(t[1], v.clone())]) {
                left.push((k, x));
            }
            for (k, x) in m.act_right(&[(t[0], v.clone())], c.eps.column(t[1])) {
                right.push((k, x));
            }
        }
        let e = vec![(j, Rational::one())];
        if normalize(left) != e {
            rep.push("left counit", m.labels[j].clone());
        }
        if normalize(right) != e {
            rep.push("right counit", m.labels[j].clone());
        }
    }
    rep
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    basis: Vec<String>,
    mul: Vec<(String, String, BTreeMap<String, Rational>)>,
    unit: BTreeMap<String, Rational>,
}

pub(crate) fn vec_to_map(labels: &[String], v: &[(usize, Rational)]) -> BTreeMap<String, Rational> {
    v.iter()
        .map(|(i, c)| (labels[*i].clone(), c.clone()))
        .collect()
}

pub(crate) fn map_to_vec(
    labels: &[String],
    m: &BTreeMap<String, Rational>,
) -> Result<SparseVec, String> {
    let mut out = Vec::new();
    for (k, c) in m {
        let i = labels
            .iter()
            .position(|l| l == k)
            .ok_or_else(|| format!("unknown basis label {k}"))?;
        out.push((i, c.clone()));
    }
    Ok(normalize(out))
}

impl Serialize for FinAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut mul = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = self.mul_basis(i, j);
                if !p.is_empty() {
                    mul.push((
                        self.labels[i].clone(),
                        self.labels[j].clone(),
                        vec_to_map(&self.labels, p),
                    ));
                }
            }
        }
        AlgebraJson {
            basis: self.labels.clone(),
            mul,
            unit: vec_to_map(&self.labels, &self.unit),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = AlgebraJson::deserialize(d)?;
        let n = j.basis.len();
        let mut mul = vec![vec![Vec::new(); n]; n];
        for (a, b, v) in &j.mul {
            let ia = j
                .basis
                .iter()
                .position(|l| l == a)
                .ok_or_else(|| D::Error::custom(format!("unknown {a}")))?;
            let ib = j
                .basis
                .iter()
                .position(|l| l == b)
                .ok_or_else(|| D::Error::custom(format!("unknown {b}")))?;
            mul[ia][ib] = map_to_vec(&j.basis, v).map_err(D::Error::custom)?;
        }
        let unit = map_to_vec(&j.basis, &j.unit).map_err(D::Error::custom)?;
        Ok(FinAlgebra::new(j.basis, mul, unit))
    }
}

#[derive(Serialize, Deserialize)]
struct BimoduleJson {
    base: FinAlgebra,
    basis: Vec<String>,
    left: BTreeMap<String, RationalMatrix>,
    right: BTreeMap<String, RationalMatrix>,
}

impl Serialize for Bimodule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let lab = &self.base.labels;
        BimoduleJson {
            base: self.base.clone(),
            basis: self.labels.clone(),
            left: self
                .left
                .iter()
                .enumerate()
                .map(|(i, m)| (lab[i].clone(), m.clone()))
                .collect(),
            right: self
                .right
                .iter()
                .enumerate()
                .map(|(i, m)| (lab[i].clone(), m.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bimodule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = BimoduleJson::deserialize(d)?;
        let get = |m: &BTreeMap<String, RationalMatrix>, l: &String| {
            m.get(l)
                .cloned()
                .ok_or_else(|| D::Error::custom(format!("missing action of {l}")))
        };
        let left = j
            .base
            .labels
            .iter()
            .map(|l| get(&j.left, l))
            .collect::<Result<_, _>>()?;
        let right = j
            .base
            .labels
            .iter()
            .map(|l| get(&j.right, l))
            .collect::<Result<_, _>>()?;
        Ok(Bimodule {
            base: j.base,
            labels: j.basis,
            left,
            right,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 𝕂[ℤ/n] with basis g^0..g^{n-1}.
    pub(crate) fn cyclic_group_algebra(n: usize) -> FinAlgebra {
        let mul = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| vec![((i + j) % n, Rational::one())])
                    .collect()
            })
            .collect();
        FinAlgebra::new(
            (0..n).map(|i| format!("g{i}")).collect(),
            mul,
            vec![(0, Rational::one())],
        )
    }

    /// 2×2 matrices with matrix units e_ij, as a bimodule over the diagonal.
    fn matrix_units() -> Bimodule {
        let r = FinAlgebra::diagonal(vec!["a".into(), "b".into()]);
        // basis e00, e01, e10, e11; e_ij has grade (i, j)
        let left = (0..2)
            .map(|a| {
                let targets: Vec<Option<usize>> = (0..4)
                    .map(|k| if k / 2 == a { Some(k) } else { None })
                    .collect();
                RationalMatrix::from_index_map(4, &targets)
            })
            .collect();
        let right = (0..2)
            .map(|b| {
                let targets: Vec<Option<usize>> = (0..4)
                    .map(|k| if k % 2 == b { Some(k) } else { None })
                    .collect();
                RationalMatrix::from_index_map(4, &targets)
            })
            .collect();
        Bimodule {
            base: r,
            labels: vec!["e00".into(), "e01".into(), "e10".into(), "e11".into()],
            left,
            right,
        }
    }

    #[test]
    fn group_algebra_is_valid_and_perturbation_is_caught() {
        let a = cyclic_group_algebra(3);
        assert!(validate_algebra(&a).is_ok());
        let mut bad = a.clone();
        *bad.mul_basis_mut(1, 1) = vec![(1, Rational::one())];
        let rep = validate_algebra(&bad);
        assert!(rep.findings.iter().any(|f| f.check == "associativity"));
    }

    #[test]
    fn matrix_units_tensor_dims_fast_and_generic_agree() {
        let m = matrix_units();
        assert!(validate_bimodule(&m).is_ok());
        let fast = TensorSpace::tensor(&[&m, &m], DEFAULT_GUARD).unwrap();
        let slow = TensorSpace::generic(&[&m, &m], false, DEFAULT_GUARD).unwrap();
        assert!(fast.graded && !slow.graded);
        assert_eq!(fast.dim(), 8);
        assert_eq!(
            fast.quotient.representatives(),
            slow.quotient.representatives()
        );
        let pf = TensorSpace::cyclic(&[&m], DEFAULT_GUARD).unwrap();
        let ps = TensorSpace::generic(&[&m], true, DEFAULT_GUARD).unwrap();
        assert_eq!((pf.dim(), ps.dim()), (2, 2));
        let p3 = TensorSpace::cyclic(&[&m, &m, &m], DEFAULT_GUARD).unwrap();
        let g3 = TensorSpace::generic(&[&m, &m, &m], true, DEFAULT_GUARD).unwrap();
        assert_eq!(p3.dim(), g3.dim());
    }

    #[test]
    fn unit_object() {
        let m = matrix_units();
        let r = Bimodule::regular(&m.base);
        let (mr, _, _) = tensor_over_r(&[&m, &r], DEFAULT_GUARD).unwrap();
        assert_eq!(mr.dim(), m.dim());
        assert!(validate_bimodule(&mr).is_ok());
    }

    #[test]
    fn field_tensor_has_no_relations() {
        let a = cyclic_group_algebra(2);
        let phi = AlgebraMorphism {
            source: FinAlgebra::field(),
            target: a.clone(),
            matrix: RationalMatrix::from_columns(2, vec![vec![(0, Rational::one())]]),
        };
        assert!(validate_morphism(&phi).is_ok());
        let b = Bimodule::from_morphism(&phi);
        assert_eq!(
            TensorSpace::tensor(&[&b, &b], DEFAULT_GUARD).unwrap().dim(),
            4
        );
        let (pi, flip) = pi_and_flip(&[&b, &b], DEFAULT_GUARD).unwrap();
        assert_eq!(pi.dim(), 4);
        assert!(flip.mul(&flip).is_identity());
    }

    #[test]
    fn flip_power_is_identity() {
        let m = matrix_units();
        let (pi, flip) = pi_and_flip(&[&m, &m, &m], DEFAULT_GUARD).unwrap();
        assert!(flip.pow(3).is_identity());
        assert_eq!(pi.dim(), 2 * 2 * 2);
    }

    #[test]
    fn json_round_trip() {
        let a = cyclic_group_algebra(3);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<FinAlgebra>(&s).unwrap(), a);
        let m = matrix_units();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Bimodule>(&s).unwrap(), m);
    }
}
