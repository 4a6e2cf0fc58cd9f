//! Strongly graded algebras over a finite groupoid, viewed as Galois
//! extensions of their identity-degree subalgebra `S = ⊕_x T_x`.
//!
//! The canonical map `can: T⊗_S T → T⊗_R B`, `t'⊗t ↦ t't⊗deg(t)`, is built
//! as a matrix and inverted. From it come `T_S = T/[S,T]` with the
//! Miyashita-Ulbrich action and the maps `ω_n` from the relative cyclic
//! object `Z_*(T/S)` to the cyclic simplex `Z_*(B, T_S)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra_cat::{
    induced_map, map_to_vec, vec_to_map, AlgError, AlgebraMorphism, Bimodule, FinAlgebra, Lin,
    TensorSpace,
};
use crate::ayd::GradedBModule;
use crate::complexes::{hh_hc, ComplexError, ParaCyclicModule};
use crate::groupoid_alg::{FinGroupoid, GroupoidBialgebroid, Side};
use crate::groupoid_homology::{
    burghelea_dims, cyclic_simplex, GroupoidNf, HomologyError, HomologyReport,
};
use crate::qlinalg::{
    inverse, normalize, quotient_by_rows, rank, Rational, RationalMatrix, SparseVec,
};
use crate::report::Report;
use crate::transposition::{canonical_relative, relative_cyclic_object, TranspositionError};

#[derive(Debug, thiserror::Error)]
pub enum GaloisError {
    #[error("not a Galois extension: {0:?}")]
    Invalid(Report),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Transposition(#[from] TranspositionError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn e(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

/// A groupoid-graded algebra with a homogeneous basis and strong-grading
/// witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StronglyGradedAlgebra {
    pub bialgebroid: GroupoidBialgebroid,
    pub algebra: FinAlgebra,
    /// Degree of each basis vector.
    pub grading: Vec<usize>,
    /// `witnesses[g]`: pairs `(a, b)`, `a ∈ T_{g⁻¹}`, `b ∈ T_g`, with
    /// `Σ ab = 1_{T_{s(g)}}`.
    pub witnesses: Vec<Vec<(SparseVec, SparseVec)>>,
}

impl StronglyGradedAlgebra {
    /// `T = B`, graded by itself, with witnesses `(g⁻¹, g)`.
    pub fn from_bialgebroid(bd: &GroupoidBialgebroid) -> Self {
        let g = &bd.groupoid;
        StronglyGradedAlgebra {
            bialgebroid: bd.clone(),
            algebra: bd.b.clone(),
            grading: (0..g.n_morphisms()).collect(),
            witnesses: (0..g.n_morphisms())
                .map(|h| vec![(e(g.inv(h)), e(h))])
                .collect(),
        }
    }

    pub fn groupoid(&self) -> &FinGroupoid {
        &self.bialgebroid.groupoid
    }

    /// Basis indices of `T_g`.
    pub fn component(&self, g: usize) -> Vec<usize> {
        (0..self.grading.len())
            .filter(|&i| self.grading[i] == g)
            .collect()
    }

    /// `(morphism, dim T_g)` for the nonzero components.
    pub fn components(&self) -> Vec<(usize, usize)> {
        let mut counts = BTreeMap::new();
        for &g in &self.grading {
            *counts.entry(g).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }

    /// `1_{T_x}`, the part of the unit in degree `id_x`.
    pub fn unit_at(&self, x: usize) -> SparseVec {
        let id = self.groupoid().id(x);
        self.algebra
            .unit
            .iter()
            .filter(|(k, _)| self.grading[*k] == id)
            .cloned()
            .collect()
    }

    fn is_identity(&self, h: usize) -> bool {
        let g = self.groupoid();
        g.id(g.src(h)) == h
    }

    fn homogeneous_of(&self, v: &[(usize, Rational)], h: usize) -> bool {
        v.iter().all(|(k, _)| self.grading.get(*k) == Some(&h))
    }

    pub fn to_json_value(&self) -> Value {
        let g = self.groupoid();
        let lab = &self.algebra.labels;
        let json = GradedJson {
            groupoid: g.clone(),
            components: self
                .components()
                .into_iter()
                .map(|(h, d)| (g.name(h).to_string(), d))
                .collect(),
            algebra: self.algebra.clone(),
            grading: self
                .grading
                .iter()
                .enumerate()
                .map(|(i, &h)| (lab[i].clone(), g.name(h).to_string()))
                .collect(),
            witnesses: self
                .witnesses
                .iter()
                .enumerate()
                .map(|(h, ws)| {
                    let pairs = ws
                        .iter()
                        .map(|(a, b)| (vec_to_map(lab, a), vec_to_map(lab, b)))
                        .collect();
                    (g.name(h).to_string(), pairs)
                })
                .collect(),
        };
        serde_json::to_value(json).expect("plain data")
    }

    pub fn from_json_str(s: &str) -> Result<Self, String> {
        let j: GradedJson = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let bd = crate::groupoid_alg::build_bialgebroid(&j.groupoid);
        let g = &bd.groupoid;
        let lab = &j.algebra.labels;
        let mut grading = Vec::with_capacity(lab.len());
        for l in lab {
            let name = j
                .grading
                .get(l)
                .ok_or_else(|| format!("basis vector {l} has no degree"))?;
            grading.push(
                g.morphism_index(name)
                    .ok_or_else(|| format!("unknown morphism {name}"))?,
            );
        }
        let mut witnesses = vec![Vec::new(); g.n_morphisms()];
        for (name, pairs) in &j.witnesses {
            let h = g
                .morphism_index(name)
                .ok_or_else(|| format!("unknown morphism {name}"))?;
            for (a, b) in pairs {
                witnesses[h].push((map_to_vec(lab, a)?, map_to_vec(lab, b)?));
            }
        }
        let t = StronglyGradedAlgebra {
            bialgebroid: bd.clone(),
            algebra: j.algebra,
            grading,
            witnesses,
        };
        let declared: Vec<(usize, usize)> = j
            .components
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(name, &d)| {
                g.morphism_index(name)
                    .map(|h| (h, d))
                    .ok_or_else(|| format!("unknown morphism {name}"))
            })
            .collect::<Result<_, _>>()?;
        let mut declared = declared;
        declared.sort_unstable();
        if declared != t.components() {
            return Err("components disagree with the grading".into());
        }
        Ok(t)
    }
}

type NamedVec = BTreeMap<String, Rational>;

#[derive(Serialize, Deserialize)]
struct GradedJson {
    groupoid: FinGroupoid,
    components: BTreeMap<String, usize>,
    algebra: FinAlgebra,
    grading: BTreeMap<String, String>,
    witnesses: BTreeMap<String, Vec<(NamedVec, NamedVec)>>,
}

/// `S ⊂ T` with the inclusion, and the spaces the canonical map lives on.
struct Setup {
    incl: AlgebraMorphism,
    /// `T` as an `S`-bimodule by multiplication.
    t_s: Bimodule,
    tst: TensorSpace,
    /// `T⊗_R B`, with `e_x` acting on `T` by `1_{T_x}` on the right and on
    /// `B` by right multiplication.
    trb: TensorSpace,
    can: RationalMatrix,
}

impl Setup {
    /// `1_T⊗_R h`.
    fn one_tensor(&self, t: &StronglyGradedAlgebra, h: usize) -> SparseVec {
        self.trb.project(
            &t.algebra
                .unit
                .iter()
                .map(|(u, c)| (vec![*u, h], c.clone()))
                .collect(),
        )
    }
}

/// `S = ⊕_x T_x` and its inclusion. Products leaving `S` are dropped here
/// and reported by the validator.
fn subalgebra(t: &StronglyGradedAlgebra) -> AlgebraMorphism {
    let idx: Vec<usize> = (0..t.grading.len())
        .filter(|&i| t.is_identity(t.grading[i]))
        .collect();
    let mut pos = vec![usize::MAX; t.grading.len()];
    for (k, &i) in idx.iter().enumerate() {
        pos[i] = k;
    }
    let restrict = |v: &[(usize, Rational)]| -> SparseVec {
        v.iter()
            .filter(|(k, _)| pos[*k] != usize::MAX)
            .map(|(k, c)| (pos[*k], c.clone()))
            .collect()
    };
    let mul = idx
        .iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| restrict(t.algebra.mul_basis(i, j)))
                .collect()
        })
        .collect();
    let s = FinAlgebra::new(
        idx.iter().map(|&i| t.algebra.labels[i].clone()).collect(),
        mul,
        restrict(&t.algebra.unit),
    );
    let matrix = RationalMatrix::from_index_map(
        t.grading.len(),
        &idx.iter().map(|&i| Some(i)).collect::<Vec<_>>(),
    );
    AlgebraMorphism {
        source: s,
        target: t.algebra.clone(),
        matrix,
    }
}

fn setup(t: &StronglyGradedAlgebra, guard: usize) -> Result<Setup, AlgError> {
    let bd = &t.bialgebroid;
    let g = &bd.groupoid;
    let a = &t.algebra;
    let incl = subalgebra(t);
    let t_s = Bimodule::from_morphism(&incl);
    let t_r = Bimodule {
        base: bd.r.clone(),
        labels: a.labels.clone(),
        left: (0..g.n_objects())
            .map(|x| a.left_mult(&t.unit_at(x)))
            .collect(),
        right: (0..g.n_objects())
            .map(|x| a.right_mult(&t.unit_at(x)))
            .collect(),
    };
    let b_r = bd.carrier(Side::Right);
    let tst = TensorSpace::tensor(&[&t_s, &t_s], guard)?;
    let trb = TensorSpace::tensor(&[&t_r, &b_r], guard)?;
    let can = induced_map(
        &tst,
        &trb,
        |tup| {
            a.mul_basis(tup[0], tup[1])
                .iter()
                .map(|(p, c)| (vec![*p, t.grading[tup[1]]], c.clone()))
                .collect()
        },
        true,
    )?;
    Ok(Setup {
        incl,
        t_s,
        tst,
        trb,
        can,
    })
}

/// Grading, unit and strongness checks, then bijectivity of `can`, the
/// witnesses as `can⁻¹(1⊗g)`, and the pentagon identity on every morphism.
pub fn validate_galois(t: &StronglyGradedAlgebra, guard: usize) -> Report {
    let mut rep = Report::new();
    let g = t.groupoid();
    let a = &t.algebra;
    let n = a.dim();
    if t.grading.len() != n || t.grading.iter().any(|&h| h >= g.n_morphisms()) {
        rep.push(
            "grading",
            format!("{} degrees for {} basis vectors", t.grading.len(), n),
        );
        return rep;
    }
    if t.witnesses.len() != g.n_morphisms() {
        rep.push(
            "witnesses",
            format!(
                "{} witness lists for {} morphisms",
                t.witnesses.len(),
                g.n_morphisms()
            ),
        );
        return rep;
    }
    let lab = |i: usize| a.labels[i].as_str();
    for i in 0..n {
        for j in 0..n {
            let want = g.compose(t.grading[i], t.grading[j]);
            if let Some((k, _)) = a
                .mul_basis(i, j)
                .iter()
                .find(|(k, _)| Some(t.grading[*k]) != want)
            {
                rep.push(
                    "multiplicativity",
                    format!(
                        "{}·{} has the term {} of degree {}",
                        lab(i),
                        lab(j),
                        lab(*k),
                        g.name(t.grading[*k])
                    ),
                );
            }
            let (si, sj) = (t.is_identity(t.grading[i]), t.is_identity(t.grading[j]));
            if si
                && sj
                && a.mul_basis(i, j)
                    .iter()
                    .any(|(k, _)| !t.is_identity(t.grading[*k]))
            {
                rep.push("S closed", format!("{}·{}", lab(i), lab(j)));
            }
        }
    }
    if let Some((k, _)) = a.unit.iter().find(|(k, _)| !t.is_identity(t.grading[*k])) {
        rep.push(
            "unit decomposition",
            format!("unit has the term {} of non-identity degree", lab(*k)),
        );
    }
    for i in 0..n {
        let h = t.grading[i];
        if a.product(&t.unit_at(g.tgt(h)), &e(i)) != e(i)
            || a.product(&e(i), &t.unit_at(g.src(h))) != e(i)
        {
            rep.push(
                "unit decomposition",
                format!("1_T(x) does not fix {}", lab(i)),
            );
        }
    }
    for h in 0..g.n_morphisms() {
        let mut sum = Vec::new();
        for (wa, wb) in &t.witnesses[h] {
            if !t.homogeneous_of(wa, g.inv(h)) || !t.homogeneous_of(wb, h) {
                rep.push("witness degree", g.name(h).to_string());
                continue;
            }
            sum.extend(a.product(wa, wb));
        }
        if normalize(sum) != t.unit_at(g.src(h)) {
            rep.push(
                "strongness",
                format!("Σ a_i b_i ≠ 1 at the source of {}", g.name(h)),
            );
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    let s = match setup(t, guard) {
        Ok(s) => s,
        Err(err) => {
            rep.push("tensor space", err.to_string());
            return rep;
        }
    };
    let can_inv = match inverse(&s.can) {
        Some(m) => m,
        None => {
            let (r, c) = s.can.shape();
            rep.push(
                "can bijective",
                format!("rank {} of a {r}×{c} matrix", rank(&s.can)),
            );
            return rep;
        }
    };
    if !can_inv.mul(&s.can).is_identity() || !s.can.mul(&can_inv).is_identity() {
        rep.push("can inverse", "can⁻¹ is not a two-sided inverse".into());
    }
    for h in 0..g.n_morphisms() {
        let lhs = can_inv.apply(&s.one_tensor(t, h));
        let mut terms: Lin = Vec::new();
        for (wa, wb) in &t.witnesses[h] {
            for (i, c) in wa {
                for (j, d) in wb {
                    terms.push((vec![*i, *j], c * d));
                }
            }
        }
        if lhs != s.tst.project(&terms) {
            rep.push(
                "index notation",
                format!("can⁻¹(1⊗{}) differs from the witnesses", g.name(h)),
            );
        }
    }
    pentagon(t, &s, &can_inv, guard, &mut rep);
    rep
}

/// `b^{−[0]}⊗_R b^{−[1]}⊗_S b^{+} = (b_+)^{−}⊗_R b_−⊗_S (b_+)^{+}` in
/// `(T⊗_R B)⊗_S T`, for every basis morphism `b`.
fn pentagon(
    t: &StronglyGradedAlgebra,
    s: &Setup,
    can_inv: &RationalMatrix,
    guard: usize,
    rep: &mut Report,
) {
    let bd = &t.bialgebroid;
    let g = &bd.groupoid;
    let a = &t.algebra;
    let sa = &s.incl.source;
    let act = |left: bool, si: usize| {
        let sv = s.incl.apply(&e(si));
        induced_map(
            &s.trb,
            &s.trb,
            |tup| {
                let p = if left {
                    a.product(&sv, &e(tup[0]))
                } else {
                    a.product(&e(tup[0]), &sv)
                };
                p.into_iter().map(|(k, c)| (vec![k, tup[1]], c)).collect()
            },
            true,
        )
    };
    let sides = (0..sa.dim())
        .map(|si| Ok((act(true, si)?, act(false, si)?)))
        .collect::<Result<Vec<_>, AlgError>>();
    let sides = match sides {
        Ok(v) => v,
        Err(err) => {
            rep.push("pentagon", format!("S-action on T⊗_R B: {err}"));
            return;
        }
    };
    let trb_s = Bimodule {
        base: sa.clone(),
        labels: (0..s.trb.dim())
            .map(|k| format!("{:?}", s.trb.basis_tuple(k)))
            .collect(),
        left: sides.iter().map(|p| p.0.clone()).collect(),
        right: sides.into_iter().map(|p| p.1).collect(),
    };
    let pent = match TensorSpace::tensor(&[&trb_s, &s.t_s], guard) {
        Ok(p) => p,
        Err(err) => {
            rep.push("pentagon", err.to_string());
            return;
        }
    };
    let bb = bd.bb(Side::Right);
    let dom = bd.theta_domain();
    for h in 0..g.n_morphisms() {
        let mut lhs: Lin = Vec::new();
        for (tup, c) in s.tst.lift(&can_inv.apply(&s.one_tensor(t, h))) {
            for (k, d) in s.trb.project_tuple(&[tup[0], t.grading[tup[0]]]) {
                lhs.push((vec![*k, tup[1]], &c * d));
            }
        }
        let one_h: Lin = bd
            .one()
            .iter()
            .map(|(u, c)| (vec![*u, h], c.clone()))
            .collect();
        let mut rhs: Lin = Vec::new();
        for (pair, c) in dom.lift(&bd.theta_inv.apply(&bb.project(&one_h))) {
            let (minus, plus) = (pair[0], pair[1]);
            for (tup, d) in s.tst.lift(&can_inv.apply(&s.one_tensor(t, plus))) {
                for (k, f) in s.trb.project_tuple(&[tup[0], minus]) {
                    rhs.push((vec![*k, tup[1]], &c * &d * f));
                }
            }
        }
        if pent.project(&lhs) != pent.project(&rhs) {
            rep.push("pentagon", g.name(h).to_string());
        }
    }
}

/// `T_S` together with the projection `p_T: T → T_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsData {
    pub module: GradedBModule,
    pub projection: RationalMatrix,
}

/// `T/[S,T]` on the loops, acted on by `g▷p(v) = Σ_i p(b_i v a_i)`.
/// Non-loop components must vanish in the quotient.
pub fn ts_data(t: &StronglyGradedAlgebra) -> Result<TsData, GaloisError> {
    let g = t.groupoid();
    let a = &t.algebra;
    let s_idx: Vec<usize> = (0..t.grading.len())
        .filter(|&i| t.is_identity(t.grading[i]))
        .collect();
    let mut pieces = Vec::new();
    for (h, _) in t.components() {
        let idx = t.component(h);
        let mut local = vec![usize::MAX; a.dim()];
        for (k, &i) in idx.iter().enumerate() {
            local[i] = k;
        }
        let mut rows = Vec::new();
        for &si in &s_idx {
            for &i in &idx {
                let mut v = a.mul_basis(si, i).clone();
                v.extend(a.mul_basis(i, si).iter().map(|(k, c)| (*k, -c)));
                let v: SparseVec = normalize(v)
                    .into_iter()
                    .map(|(k, c)| (local[k], c))
                    .collect();
                if v.iter().any(|(k, _)| *k == usize::MAX) {
                    let mut rep = Report::new();
                    rep.push(
                        "multiplicativity",
                        format!("commutator leaves T({})", g.name(h)),
                    );
                    return Err(GaloisError::Invalid(rep));
                }
                if !v.is_empty() {
                    rows.push(v);
                }
            }
        }
        let q = quotient_by_rows(idx.len(), &rows);
        if !g.is_loop(h) {
            if q.dim() > 0 {
                let mut rep = Report::new();
                rep.push(
                    "non-loop component",
                    format!("T({}) survives modulo [S,T] in dim {}", g.name(h), q.dim()),
                );
                return Err(GaloisError::Invalid(rep));
            }
            continue;
        }
        if q.dim() > 0 {
            pieces.push((h, idx, q));
        }
    }
    let total: usize = pieces.iter().map(|p| p.2.dim()).sum();
    let mut cols = vec![Vec::new(); a.dim()];
    let mut reps = Vec::new();
    let mut offset = 0;
    for (_, idx, q) in &pieces {
        for (k, &i) in idx.iter().enumerate() {
            cols[i] = q
                .class_of(k)
                .iter()
                .map(|(r, c)| (r + offset, c.clone()))
                .collect();
        }
        reps.extend(q.representatives().iter().map(|&r| idx[r]));
        offset += q.dim();
    }
    let projection = RationalMatrix::from_columns(total, cols);
    let action = (0..g.n_morphisms())
        .map(|h| {
            let cols = reps
                .iter()
                .map(|&r| {
                    let mut v = Vec::new();
                    for (wa, wb) in &t.witnesses[h] {
                        v.extend(a.product(&a.product(wb, &e(r)), wa));
                    }
                    projection.apply(&normalize(v))
                })
                .collect();
            RationalMatrix::from_columns(total, cols)
        })
        .collect();
    let comps = pieces.iter().map(|p| (p.0, p.2.dim())).collect();
    Ok(TsData {
        module: GradedBModule::new(t.bialgebroid.clone(), comps, action),
        projection,
    })
}

/// The stable aYD module `T_S` of a validated Galois extension.
pub fn ts_module(t: &StronglyGradedAlgebra, guard: usize) -> Result<GradedBModule, GaloisError> {
    require_galois(t, guard)?;
    Ok(ts_data(t)?.module)
}

fn require_galois(t: &StronglyGradedAlgebra, guard: usize) -> Result<(), GaloisError> {
    let rep = validate_galois(t, guard);
    if rep.is_ok() {
        Ok(())
    } else {
        Err(GaloisError::Invalid(rep))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaReport {
    /// `omega[n]: Z_n(T/S) → Z_n(B, T_S)`.
    pub omega: Vec<RationalMatrix>,
    pub relative: ParaCyclicModule,
    pub simplex: ParaCyclicModule,
    pub findings: Report,
}

/// Image of `t_0⊗…⊗t_n` (basis vectors) under `ω_n`, in normal-form
/// coordinates, added into `out`.
fn omega_terms(
    t: &StronglyGradedAlgebra,
    ts: &TsData,
    nf: &GroupoidNf<'_>,
    tup: &[usize],
    coef: &Rational,
    out: &mut SparseVec,
) {
    let g = t.groupoid();
    let n = tup.len() - 1;
    // slot k-1 carries h_k∘…∘h_n
    let mut slots = Vec::with_capacity(n + 1);
    let mut acc: Option<usize> = None;
    for k in (1..=n).rev() {
        let h = t.grading[tup[k]];
        let next = match acc {
            None => Some(h),
            Some(a) => g.compose(h, a),
        };
        let Some(a) = next else { return };
        slots.push(a);
        acc = Some(a);
    }
    slots.reverse();
    let mut prod = e(tup[0]);
    for &i in &tup[1..] {
        prod = t.algebra.product(&prod, &e(i));
    }
    for (j, c) in ts.projection.apply(&prod) {
        let mut full = slots.clone();
        full.push(g.id(nf.source(j)));
        nf.push(&full, j, &(coef * &c), out);
    }
}

/// The maps `ω_n`, `n ≤ n_max`, checked for bijectivity and for commuting
/// with every face, degeneracy and cyclic operator; also checks the
/// witness formula for `α_1⁻¹`.
pub fn omega_iso(
    t: &StronglyGradedAlgebra,
    n_max: usize,
    guard: usize,
) -> Result<OmegaReport, GaloisError> {
    require_galois(t, guard)?;
    let ts = ts_data(t)?;
    let s = setup(t, guard)?;
    let (x, v) = canonical_relative(&s.incl, guard)?;
    let relative = relative_cyclic_object(&s.incl, &v, &x, n_max, guard)?;
    let simplex = cyclic_simplex(&ts.module, n_max, guard)?.module;
    let nf = GroupoidNf::new(&ts.module, n_max);
    let mut findings = Report::new();
    let mut omega = Vec::new();
    for n in 0..=n_max {
        let mut ms: Vec<&Bimodule> = vec![&s.t_s; n + 1];
        ms.push(&x);
        let space = TensorSpace::cyclic(&ms, guard)?;
        let f = |tup: &[usize]| -> SparseVec {
            let mut out = Vec::new();
            for (p, c) in t.algebra.product(&e(tup[n]), &s.incl.apply(&e(tup[n + 1]))) {
                let mut u = tup[..n].to_vec();
                u.push(p);
                omega_terms(t, &ts, &nf, &u, &c, &mut out);
            }
            normalize(out)
        };
        let cols = (0..space.dim()).map(|k| f(&space.basis_tuple(k))).collect();
        for rel in space.relations() {
            let mut img = Vec::new();
            for (tup, c) in &rel {
                img.extend(f(tup).into_iter().map(|(k, d)| (k, c * &d)));
            }
            if !normalize(img).is_empty() {
                findings.push(
                    "well defined",
                    format!("degree {n}, relation through {:?}", rel[0].0),
                );
                break;
            }
        }
        let m = RationalMatrix::from_columns(nf.dim(n), cols);
        let (r, c) = m.shape();
        if r != c || rank(&m) != r {
            findings.push(
                "bijective",
                format!("degree {n}: rank {} of {r}×{c}", rank(&m)),
            );
        }
        omega.push(m);
    }
    for n in 1..=n_max {
        for k in 0..=n {
            if omega[n - 1].mul(&relative.faces[n][k]) != simplex.faces[n][k].mul(&omega[n]) {
                findings.push("face", format!("d_{k} in degree {n}"));
            }
        }
    }
    if let (Some(ds), Some(dt)) = (&relative.degeneracies, &simplex.degeneracies) {
        for n in 0..n_max {
            for k in 0..=n {
                if omega[n + 1].mul(&ds[n][k]) != dt[n][k].mul(&omega[n]) {
                    findings.push("degeneracy", format!("s_{k} in degree {n}"));
                }
            }
        }
    }
    if let (Some(cs), Some(ct)) = (&relative.cyclic, &simplex.cyclic) {
        for n in 0..=n_max {
            if omega[n].mul(&cs[n]) != ct[n].mul(&omega[n]) {
                findings.push("cyclic", format!("t_{n}"));
            }
        }
    }
    let alpha_inv = induced_map(
        &s.trb,
        &s.tst,
        |tup| {
            let mut out = Vec::new();
            for (wa, wb) in &t.witnesses[tup[1]] {
                for (p, c) in t.algebra.product(&e(tup[0]), wa) {
                    for (q, d) in wb {
                        out.push((vec![p, *q], &c * d));
                    }
                }
            }
            out
        },
        true,
    )?;
    if !s.can.mul(&alpha_inv).is_identity() || !alpha_inv.mul(&s.can).is_identity() {
        findings.push(
            "alpha inverse",
            "t⊗g ↦ Σ t a_i⊗b_i does not invert α_1".into(),
        );
    }
    Ok(OmegaReport {
        omega,
        relative,
        simplex,
        findings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeComparison {
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
    pub via_orbits: HomologyReport,
    pub agree: bool,
}

/// Relative HH/HC of `T ⊃ S` from `Z_*(T/S)` against the orbit formula
/// applied to `T_S`.
pub fn relative_compare(
    t: &StronglyGradedAlgebra,
    n_max: usize,
    guard: usize,
) -> Result<RelativeComparison, GaloisError> {
    require_galois(t, guard)?;
    let ts = ts_data(t)?;
    let incl = subalgebra(t);
    let (x, v) = canonical_relative(&incl, guard)?;
    let relative = relative_cyclic_object(&incl, &v, &x, n_max, guard)?;
    let (hh, hc) = hh_hc(&relative)?;
    let via_orbits = burghelea_dims(&ts.module, n_max)?;
    let agree = hh == via_orbits.hh && hc == via_orbits.hc;
    Ok(RelativeComparison {
        hh,
        hc,
        via_orbits,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_cat::DEFAULT_GUARD;
    use crate::ayd::{adjoint_module, validate_ayd};
    use crate::groupoid_alg::build_bialgebroid;

    fn regular(g: &FinGroupoid) -> StronglyGradedAlgebra {
        StronglyGradedAlgebra::from_bialgebroid(&build_bialgebroid(g))
    }

    /// M_2(ℚ) graded by ℤ/2: diagonal even, off-diagonal odd.
    fn matrices_over_c2() -> StronglyGradedAlgebra {
        let bd = build_bialgebroid(&FinGroupoid::cyclic_group(2));
        let g = &bd.groupoid;
        let (id, s) = (g.id(0), (0..2).find(|&h| h != g.id(0)).unwrap());
        // e11, e12, e21, e22
        let idx = |i: usize, j: usize| 2 * i + j;
        let mul = (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| {
                        if a % 2 == b / 2 {
                            e(idx(a / 2, b % 2))
                        } else {
                            vec![]
                        }
                    })
                    .collect()
            })
            .collect();
        let labels = ["e11", "e12", "e21", "e22"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let algebra = FinAlgebra::new(
            labels,
            mul,
            vec![(0, Rational::one()), (3, Rational::one())],
        );
        let grading = vec![id, s, s, id];
        let mut witnesses = vec![Vec::new(); 2];
        witnesses[id] = vec![(e(0), e(0)), (e(3), e(3))];
        witnesses[s] = vec![(e(1), e(2)), (e(2), e(1))];
        StronglyGradedAlgebra {
            bialgebroid: bd,
            algebra,
            grading,
            witnesses,
        }
    }

    #[test]
    fn regular_extensions_are_galois() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            let rep = validate_galois(&regular(&g), DEFAULT_GUARD);
            assert!(rep.is_ok(), "{rep:?}");
        }
    }

    #[test]
    fn misplaced_product_is_flagged() {
        let mut t = regular(&FinGroupoid::cyclic_group(2));
        let s = 1 - t.groupoid().id(0);
        *t.algebra.mul_basis_mut(s, s) = e(s);
        let rep = validate_galois(&t, DEFAULT_GUARD);
        assert!(rep.has("multiplicativity"), "{rep:?}");
    }

    #[test]
    fn scaled_witness_is_flagged() {
        let mut t = regular(&FinGroupoid::cyclic_group(2));
        t.witnesses[1][0].0 = vec![(t.witnesses[1][0].0[0].0, Rational::from_int(2))];
        let rep = validate_galois(&t, DEFAULT_GUARD);
        assert!(rep.has("strongness"), "{rep:?}");
    }

    #[test]
    fn ts_of_regular_is_adjoint() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            let t = regular(&g);
            let m = ts_module(&t, DEFAULT_GUARD).unwrap();
            assert_eq!(m, adjoint_module(&t.bialgebroid));
        }
    }

    #[test]
    fn ts_of_i2_swaps_the_identities() {
        let t = regular(&FinGroupoid::pair(2));
        let m = ts_module(&t, DEFAULT_GUARD).unwrap();
        let g = t.groupoid();
        assert_eq!(m.dim(), 2);
        assert!(m.components.iter().all(|&(l, _)| g.id(g.src(l)) == l));
        let f = (0..g.n_morphisms())
            .find(|&h| g.src(h) == 0 && g.tgt(h) == 1)
            .unwrap();
        assert_eq!(m.action[f], RationalMatrix::from_i64(&[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn graded_matrices() {
        let t = matrices_over_c2();
        assert!(validate_galois(&t, DEFAULT_GUARD).is_ok());
        let m = ts_module(&t, DEFAULT_GUARD).unwrap();
        assert_eq!(m.components, vec![(t.groupoid().id(0), 2)]);
        assert!(validate_ayd(&m, true).is_ok());
        let om = omega_iso(&t, 3, DEFAULT_GUARD).unwrap();
        assert!(om.findings.is_ok(), "{:?}", om.findings);
        let cmp = relative_compare(&t, 4, DEFAULT_GUARD).unwrap();
        assert!(cmp.agree, "{cmp:?}");
    }

    #[test]
    fn omega_is_a_cyclic_isomorphism() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            let om = omega_iso(&regular(&g), 3, DEFAULT_GUARD).unwrap();
            assert!(om.findings.is_ok(), "{:?}", om.findings);
        }
        let om = omega_iso(&regular(&FinGroupoid::cyclic_group(2)), 3, DEFAULT_GUARD).unwrap();
        let dims: Vec<usize> = om.omega.iter().map(|m| m.cols()).collect();
        assert_eq!(dims, vec![2, 4, 8, 16]);
    }

    #[test]
    fn omega_zero_is_the_projection() {
        let t = regular(&FinGroupoid::cyclic_group(2));
        let om = omega_iso(&t, 0, DEFAULT_GUARD).unwrap();
        let ts = ts_data(&t).unwrap();
        assert_eq!(om.omega[0], ts.projection);
    }

    #[test]
    fn relative_homology_matches_orbits() {
        let cases = [
            (FinGroupoid::cyclic_group(2), vec![2, 0, 2]),
            (FinGroupoid::pair(2), vec![1, 0, 1]),
            (FinGroupoid::symmetric3(), vec![3, 0, 3]),
        ];
        for (g, hc) in cases {
            let cmp = relative_compare(&regular(&g), 3, DEFAULT_GUARD).unwrap();
            assert!(cmp.agree, "{cmp:?}");
            assert_eq!(cmp.hc, hc);
        }
    }

    #[test]
    fn json_roundtrip() {
        let t = matrices_over_c2();
        let s = serde_json::to_string(&t.to_json_value()).unwrap();
        assert_eq!(StronglyGradedAlgebra::from_json_str(&s).unwrap(), t);
    }
}
