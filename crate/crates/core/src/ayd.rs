//! Loop-graded modules over a groupoid bialgebroid and their anti
//! Yetter-Drinfel'd conditions.
//!
//! A module stores its action, one matrix per morphism, and a grading of
//! the basis by loops. The coaction is `m ↦ m⊗l` for `m` in the `l`
//! component.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::algebra_cat::{apply_on_tuple, Bimodule, TensorSpace, DEFAULT_GUARD};
use crate::groupoid_alg::{loops_orbits, GroupoidBialgebroid, Side};
use crate::qlinalg::{Rational, RationalMatrix, SparseVec};
use crate::report::Report;

fn e(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBModule {
    pub bialgebroid: GroupoidBialgebroid,
    /// `(loop, dimension)` sorted by loop index; zero dimensions dropped.
    pub components: Vec<(usize, usize)>,
    pub action: Vec<RationalMatrix>,
}

impl GradedBModule {
    /// Sorts the components and drops empty ones. The action must already be
    /// written in the sorted basis.
    pub fn new(
        bialgebroid: GroupoidBialgebroid,
        mut components: Vec<(usize, usize)>,
        action: Vec<RationalMatrix>,
    ) -> Self {
        components.retain(|c| c.1 > 0);
        components.sort_unstable();
        GradedBModule {
            bialgebroid,
            components,
            action,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.1).sum()
    }

    /// The loop grading each basis vector.
    pub fn grading(&self) -> Vec<usize> {
        self.components
            .iter()
            .flat_map(|&(l, d)| std::iter::repeat_n(l, d))
            .collect()
    }

    /// Basis positions of the `l` component.
    pub fn range_of(&self, l: usize) -> std::ops::Range<usize> {
        let mut off = 0;
        for &(c, d) in &self.components {
            if c == l {
                return off..off + d;
            }
            off += d;
        }
        off..off
    }

    /// Coordinate projector onto the sum of the given components.
    pub fn projector(&self, loops: &[usize]) -> RationalMatrix {
        let n = self.dim();
        let keep: Vec<Option<usize>> = self
            .grading()
            .iter()
            .enumerate()
            .map(|(i, l)| loops.contains(l).then_some(i))
            .collect();
        RationalMatrix::from_index_map(n, &keep)
    }

    /// The `R`-bimodule underlying both the action and the coaction.
    pub fn base_bimodule(&self) -> Bimodule {
        let g = &self.bialgebroid.groupoid;
        let acts: Vec<RationalMatrix> = (0..g.n_objects())
            .map(|x| self.action[g.id(x)].clone())
            .collect();
        Bimodule {
            base: self.bialgebroid.r.clone(),
            labels: self.basis_labels(),
            left: acts.clone(),
            right: acts,
        }
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let g = &self.bialgebroid.groupoid;
        let mut out = Vec::new();
        for &(l, d) in &self.components {
            for i in 0..d {
                out.push(format!("m[{}]{i}", g.name(l)));
            }
        }
        out
    }

    /// Submodule on the listed components, with the action restricted.
    pub fn restrict(&self, loops: &[usize]) -> GradedBModule {
        let idx: Vec<usize> = self
            .grading()
            .iter()
            .enumerate()
            .filter(|(_, l)| loops.contains(l))
            .map(|(i, _)| i)
            .collect();
        let comps = self
            .components
            .iter()
            .filter(|c| loops.contains(&c.0))
            .cloned()
            .collect();
        let action = self
            .action
            .iter()
            .map(|a| a.select_rows(&idx).select_columns(&idx))
            .collect();
        GradedBModule::new(self.bialgebroid.clone(), comps, action)
    }

    pub fn to_json_value(&self) -> Value {
        let g = &self.bialgebroid.groupoid;
        let comps: BTreeMap<String, usize> = self
            .components
            .iter()
            .map(|&(l, d)| (g.name(l).to_string(), d))
            .collect();
        let action: BTreeMap<String, RationalMatrix> = self
            .action
            .iter()
            .enumerate()
            .map(|(h, a)| (g.name(h).to_string(), a.clone()))
            .collect();
        serde_json::json!({ "components": comps, "action": action })
    }

    pub fn from_json_str(bd: &GroupoidBialgebroid, s: &str) -> Result<Self, String> {
        #[derive(Deserialize)]
        struct Raw {
            components: BTreeMap<String, usize>,
            action: BTreeMap<String, RationalMatrix>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let g = &bd.groupoid;
        let mut comps = Vec::new();
        for (name, d) in raw.components {
            let l = g
                .morphism_index(&name)
                .ok_or_else(|| format!("unknown morphism {name}"))?;
            comps.push((l, d));
        }
        let mut action = Vec::new();
        for h in 0..g.n_morphisms() {
            action.push(
                raw.action
                    .get(g.name(h))
                    .cloned()
                    .ok_or_else(|| format!("missing action of {}", g.name(h)))?,
            );
        }
        if raw.action.len() != g.n_morphisms() {
            return Err("action names unknown morphisms".into());
        }
        Ok(GradedBModule::new(bd.clone(), comps, action))
    }
}

/// Module axioms, the specialized aYD conditions and optionally stability,
/// followed by the general compatibility equation checked on matrices.
pub fn validate_ayd(m: &GradedBModule, check_stable: bool) -> Report {
    let mut rep = specialized_check(m, check_stable);
    if rep.has("action shape") || rep.has("action count") {
        return rep;
    }
    rep.merge("general", raw_check(m, check_stable));
    rep
}

/// Conditions in loop-graded form: the identities act by the source
/// idempotents, `h` sends the `l` component into the `hlh⁻¹` component,
/// and with stability `l` fixes its own component.
pub fn specialized_check(m: &GradedBModule, check_stable: bool) -> Report {
    let mut rep = Report::new();
    let g = &m.bialgebroid.groupoid;
    let n = m.dim();
    if m.action.len() != g.n_morphisms() {
        rep.push(
            "action count",
            format!(
                "{} matrices for {} morphisms",
                m.action.len(),
                g.n_morphisms()
            ),
        );
        return rep;
    }
    if m.action.iter().any(|a| a.shape() != (n, n)) {
        rep.push("action shape", format!("expected {n}×{n}"));
        return rep;
    }
    for &(l, _) in &m.components {
        if !g.is_loop(l) {
            rep.push("grading by loops", g.name(l).to_string());
        }
    }
    let mut sum = RationalMatrix::zeros(n, n);
    for x in 0..g.n_objects() {
        sum = sum.add(&m.action[g.id(x)]);
    }
    if !sum.is_identity() {
        rep.push("unit law", "Σ identities does not act as identity".into());
    }
    for p in 0..g.n_morphisms() {
        for q in 0..g.n_morphisms() {
            let lhs = m.action[p].mul(&m.action[q]);
            let ok = match g.compose(p, q) {
                Some(pq) => lhs == m.action[pq],
                None => lhs.is_zero(),
            };
            if !ok {
                rep.push("associativity", format!("({},{})", g.name(p), g.name(q)));
            }
        }
    }
    let grading = m.grading();
    for (i, &l) in grading.iter().enumerate() {
        for x in 0..g.n_objects() {
            let want = if g.src(l) == x { e(i) } else { Vec::new() };
            if m.action[g.id(x)].column(i) != want.as_slice() {
                rep.push(
                    "(i) base idempotents",
                    format!("{} on m{i} in {}", g.name(g.id(x)), g.name(l)),
                );
            }
        }
        for h in 0..g.n_morphisms() {
            let target = g.conjugate(h, l);
            let bad = m.action[h]
                .column(i)
                .iter()
                .any(|(k, _)| Some(grading[*k]) != target);
            if bad {
                rep.push(
                    "(ii) conjugation grading",
                    format!("{} on m{i} in {}", g.name(h), g.name(l)),
                );
            }
        }
        if check_stable && m.action[l].column(i) != e(i).as_slice() {
            rep.push("stability", format!("{} on m{i}", g.name(l)));
        }
    }
    rep
}

/// `(b▷x)^[0]⊗(b▷x)^[1] = b^(1)_+▷x^[0] ⊗ b^(2) x^[1] b^(1)_-` in `M⊗_R B`,
/// evaluated with the stored coproduct and inverse canonical map.
pub fn raw_check(m: &GradedBModule, check_stable: bool) -> Report {
    let mut rep = Report::new();
    let bd = &m.bialgebroid;
    let g = &bd.groupoid;
    let mb = m.base_bimodule();
    let carrier = bd.carrier(Side::Right);
    let Ok(mxb) = TensorSpace::tensor(&[&mb, &carrier], DEFAULT_GUARD) else {
        rep.push("tensor space", "guard exceeded".into());
        return rep;
    };
    let b1 = TensorSpace::tensor(&[&carrier], DEFAULT_GUARD).expect("single factor");
    let bb = bd.bb(Side::Right);
    let dom = bd.theta_domain();
    let grading = m.grading();
    let coact = |v: &[(usize, Rational)]| -> SparseVec {
        mxb.project(
            &v.iter()
                .map(|(i, c)| (vec![*i, grading[*i]], c.clone()))
                .collect(),
        )
    };
    // x·r = ζ(r)▷x and r·x = ξ(r)▷x, with r·x read off the coaction
    for (i, &l) in grading.iter().enumerate() {
        for x in 0..g.n_objects() {
            let via_coaction = if bd.eps.column(l).iter().any(|(y, _)| *y == x) {
                e(i)
            } else {
                Vec::new()
            };
            if m.action[g.id(x)].column(i) != via_coaction.as_slice() {
                rep.push(
                    "base actions coincide",
                    format!("e_{} on m{i}", g.objects[x]),
                );
            }
        }
    }
    for h in 0..g.n_morphisms() {
        for i in 0..m.dim() {
            let lhs = coact(&m.action[h].apply(&e(i)));
            let mut rhs = Vec::new();
            for (d, c) in apply_on_tuple(&bd.delta, &b1, &bb, &[h]) {
                // θ⁻¹(1⊗b^(1)) = b^(1)_- ⊗ b^(1)_+
                let one_b: Vec<(Vec<usize>, Rational)> = bd
                    .one()
                    .iter()
                    .map(|(u, a)| (vec![*u, d[0]], a.clone()))
                    .collect();
                let inv = bd.theta_inv.apply(&bb.project(&one_b));
                for (tup, f) in dom.lift(&inv) {
                    let (minus, plus) = (tup[0], tup[1]);
                    let mid =
                        bd.b.product(&bd.b.product(&e(d[1]), &e(grading[i])), &e(minus));
                    for (j, a) in m.action[plus].column(i) {
                        for (k, v) in &mid {
                            rhs.push((vec![*j, *k], &(&c * &f) * &(a * v)));
                        }
                    }
                }
            }
            if lhs != mxb.project(&rhs) {
                rep.push("compatibility", format!("{} on m{i}", g.name(h)));
            }
        }
    }
    if check_stable {
        for (i, &l) in grading.iter().enumerate() {
            if m.action[l].column(i) != e(i).as_slice() {
                rep.push("stability", format!("m{i}"));
            }
        }
    }
    rep
}

/// `h▷l = hlh⁻¹` on the span of the loops.
pub fn adjoint_module(bd: &GroupoidBialgebroid) -> GradedBModule {
    let g = &bd.groupoid;
    let loops = g.loops();
    let mut sorted = loops.clone();
    sorted.sort_unstable();
    let pos = |l: usize| sorted.binary_search(&l).expect("loop");
    let action = (0..g.n_morphisms())
        .map(|h| {
            let t: Vec<Option<usize>> =
                sorted.iter().map(|&l| g.conjugate(h, l).map(pos)).collect();
            RationalMatrix::from_index_map(sorted.len(), &t)
        })
        .collect();
    GradedBModule::new(bd.clone(), sorted.iter().map(|&l| (l, 1)).collect(), action)
}

/// One line at each identity, `h` moving the line at `s(h)` to the line at `t(h)`.
pub fn trivial_module(bd: &GroupoidBialgebroid) -> GradedBModule {
    let adj = adjoint_module(bd);
    let ids = bd.groupoid.identities.clone();
    adj.restrict(&ids)
}

/// `ℚ` at the identity of a one-object groupoid, every morphism acting as 1.
pub fn trivial_at_identity(bd: &GroupoidBialgebroid, x: usize) -> GradedBModule {
    let g = &bd.groupoid;
    let action = (0..g.n_morphisms())
        .map(|h| {
            if g.src(h) == x && g.tgt(h) == x {
                RationalMatrix::identity(1)
            } else {
                RationalMatrix::zeros(1, 1)
            }
        })
        .collect();
    GradedBModule::new(bd.clone(), vec![(g.id(x), 1)], action)
}

/// Piece of a module supported on one adjoint orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPiece {
    pub transversal: usize,
    pub members: Vec<usize>,
    /// Coset representatives in `B(s(l))`, one per member.
    pub coset_reps: Vec<usize>,
    pub centralizer: Vec<usize>,
    /// `M_[l]` as a module in its own right.
    pub sub: GradedBModule,
    /// Coordinate inclusion `M_[l] → M`.
    pub inclusion: RationalMatrix,
    /// Centralizer action on `M_l`, one matrix per centralizer element.
    pub centralizer_action: Vec<RationalMatrix>,
    /// `φ: B(s(l))⊗_{B_l}M_l → M_[l]`, domain basis `(rep, m)` rep-major.
    pub phi: RationalMatrix,
    pub psi: RationalMatrix,
}

/// Split a validated module along adjoint orbits and induce each piece
/// from the centralizer.
pub fn decompose_and_induce(m: &GradedBModule) -> Result<Vec<OrbitPiece>, Report> {
    let rep = validate_ayd(m, false);
    if !rep.is_ok() {
        return Err(rep);
    }
    let g = &m.bialgebroid.groupoid;
    let data = loops_orbits(g);
    let grading = m.grading();
    let mut out = Vec::new();
    for o in &data.orbits {
        let sub = m.restrict(&o.members);
        if sub.dim() == 0 {
            continue;
        }
        let l = o.transversal;
        let idx: Vec<usize> = grading
            .iter()
            .enumerate()
            .filter(|(_, x)| o.members.contains(x))
            .map(|(i, _)| i)
            .collect();
        let inclusion = RationalMatrix::from_index_map(
            m.dim(),
            &idx.iter().map(|&i| Some(i)).collect::<Vec<_>>(),
        );
        let ml = sub.range_of(l);
        let ml_idx: Vec<usize> = ml.clone().collect();
        let centralizer_action = o
            .centralizer
            .iter()
            .map(|&c| sub.action[c].select_rows(&ml_idx).select_columns(&ml_idx))
            .collect();
        let dl = ml.len();
        // φ(r⊗m) = r▷m
        let mut phi_cols = Vec::new();
        for &r in &o.coset_reps {
            for &j in &ml_idx {
                phi_cols.push(sub.action[r].column(j).to_vec());
            }
        }
        let phi = RationalMatrix::from_columns(sub.dim(), phi_cols);
        // ψ(m) = r ⊗ r⁻¹▷m for m in the rlr⁻¹ component
        let mut psi_cols = Vec::new();
        for (i, &lp) in sub.grading().iter().enumerate() {
            let k = o.members.iter().position(|&x| x == lp).expect("member");
            let r = o.coset_reps[k];
            let v = sub.action[g.inv(r)].apply(&e(i));
            let col: SparseVec = v
                .into_iter()
                .map(|(p, c)| {
                    let within = p - ml.start;
                    (k * dl + within, c)
                })
                .collect();
            psi_cols.push(col);
        }
        let psi = RationalMatrix::from_columns(o.coset_reps.len() * dl, psi_cols);
        out.push(OrbitPiece {
            transversal: l,
            members: o.members.clone(),
            coset_reps: o.coset_reps.clone(),
            centralizer: o.centralizer.clone(),
            sub,
            inclusion,
            centralizer_action,
            phi,
            psi,
        });
    }
    Ok(out)
}

/// Checks on a decomposition: dimensions, projectors and `φψ = ψφ = id`.
pub fn check_decomposition(m: &GradedBModule, pieces: &[OrbitPiece]) -> Report {
    let mut rep = Report::new();
    let total: usize = pieces.iter().map(|p| p.sub.dim()).sum();
    if total != m.dim() {
        rep.push("dimensions", format!("{total} vs {}", m.dim()));
    }
    let mut sum = RationalMatrix::zeros(m.dim(), m.dim());
    for p in pieces {
        let name = m.bialgebroid.groupoid.name(p.transversal).to_string();
        let proj = m.projector(&p.members);
        if proj.mul(&proj) != proj {
            rep.push("projector idempotent", name.clone());
        }
        sum = sum.add(&proj);
        for a in &m.action {
            if a.mul(&proj) != proj.mul(a) {
                rep.push("submodule", name.clone());
                break;
            }
        }
        if !p.phi.mul(&p.psi).is_identity() || !p.psi.mul(&p.phi).is_identity() {
            rep.push("induction isomorphism", name.clone());
        }
        rep.merge(&format!("piece {name}"), validate_ayd(&p.sub, false));
    }
    if !sum.is_identity() {
        rep.push("projectors sum", String::new());
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseAydReport {
    pub findings: Report,
    pub module: Option<GradedBModule>,
}

/// A character `χ: B → R` and a grouplike `g` as an aYD structure on `R`:
/// `b▷r = χ(bζ(r))`, `r ↦ 1⊗gξ(r)`.
pub fn ayd_on_base(
    bd: &GroupoidBialgebroid,
    chi: &RationalMatrix,
    grouplike: &[(usize, Rational)],
) -> BaseAydReport {
    let mut rep = Report::new();
    let g = &bd.groupoid;
    let (nb, nr) = (bd.b.dim(), bd.r.dim());
    if chi.shape() != (nr, nb) {
        rep.push("shape", format!("χ is {:?}", chi.shape()));
        return BaseAydReport {
            findings: rep,
            module: None,
        };
    }
    let b = &bd.b;
    let r = &bd.r;
    let z = |v: &[(usize, Rational)]| bd.embed(v);
    for x in 0..nr {
        for k in 0..nb {
            // χ(ζ(r)b) = χ(b)r
            if chi.apply(&b.product(&z(&e(x)), &e(k))) != r.product(chi.column(k), &e(x)) {
                rep.push(
                    "χ(ζ(r)b) = χ(b)r",
                    format!("{} {}", g.objects[x], g.name(k)),
                );
            }
        }
    }
    for p in 0..nb {
        for q in 0..nb {
            let lhs = chi.apply(b.mul_basis(p, q));
            let rhs = chi.apply(&b.product(&e(p), &z(chi.column(q))));
            if lhs != rhs {
                rep.push(
                    "χ(bb') = χ(bζ(χ(b')))",
                    format!("{} {}", g.name(p), g.name(q)),
                );
            }
        }
    }
    if chi.apply(&b.unit) != r.unit {
        rep.push("χ(1) = 1", String::new());
    }
    let bb = bd.bb(Side::Right);
    let b1 =
        TensorSpace::tensor(&[&bd.carrier(Side::Right)], DEFAULT_GUARD).expect("single factor");
    let dom = bd.theta_domain();
    let dg = bd.delta.apply(grouplike);
    let gg: Vec<(Vec<usize>, Rational)> = grouplike
        .iter()
        .flat_map(|(p, a)| grouplike.iter().map(move |(q, c)| (vec![*p, *q], a * c)))
        .collect();
    if dg != bb.project(&gg) {
        rep.push("grouplike coproduct", String::new());
    }
    if bd.eps.apply(grouplike) != r.unit {
        rep.push("grouplike counit", String::new());
    }
    for x in 0..nr {
        // ε(ξ(r)g) = χ(ξ(r))
        if bd.eps.apply(&b.product(&z(&e(x)), grouplike)) != chi.apply(&z(&e(x))) {
            rep.push("ε(ξ(r)g) = χ(ξ(r))", g.objects[x].clone());
        }
    }
    for k in 0..nb {
        // gξ(χ(b)) = b^(2) g b^(1)_- ζ(χ(b^(1)_+))
        let lhs = b.product(grouplike, &z(chi.column(k)));
        let mut rhs = Vec::new();
        for (d, c) in apply_on_tuple(&bd.delta, &b1, &bb, &[k]) {
            let one_b: Vec<(Vec<usize>, Rational)> = bd
                .one()
                .iter()
                .map(|(u, a)| (vec![*u, d[0]], a.clone()))
                .collect();
            for (tup, f) in dom.lift(&bd.theta_inv.apply(&bb.project(&one_b))) {
                let t = b.product(
                    &b.product(&b.product(&e(d[1]), grouplike), &e(tup[0])),
                    &z(chi.column(tup[1])),
                );
                rhs.extend(t.into_iter().map(|(p, v)| (p, &(&c * &f) * &v)));
            }
        }
        if lhs != crate::qlinalg::normalize(rhs) {
            rep.push("gξ(χ(b)) compatibility", g.name(k).to_string());
        }
    }
    for x in 0..nr {
        if chi.apply(&b.product(grouplike, &z(&e(x)))) != e(x) {
            rep.push("stability χ(gξ(r)) = r", g.objects[x].clone());
        }
    }
    if !rep.is_ok() {
        return BaseAydReport {
            findings: rep,
            module: None,
        };
    }
    // e_x is graded by the component of g with source x
    let mut comps = Vec::new();
    for x in 0..nr {
        let part = b.product(grouplike, &z(&e(x)));
        match part.as_slice() {
            [(l, c)] if c.is_one() => comps.push((*l, x)),
            _ => {
                rep.push("grouplike components", g.objects[x].clone());
                return BaseAydReport {
                    findings: rep,
                    module: None,
                };
            }
        }
    }
    comps.sort_unstable();
    let order: Vec<usize> = comps.iter().map(|c| c.1).collect();
    let pos = |x: usize| order.iter().position(|&y| y == x).expect("object");
    let action = (0..nb)
        .map(|k| {
            let cols = order
                .iter()
                .map(|&x| {
                    chi.apply(&b.product(&e(k), &z(&e(x))))
                        .into_iter()
                        .map(|(y, c)| (pos(y), c))
                        .collect()
                })
                .collect();
            RationalMatrix::from_columns(nr, cols)
        })
        .collect();
    let module = GradedBModule::new(bd.clone(), comps.iter().map(|c| (c.0, 1)).collect(), action);
    rep.merge("induced module", validate_ayd(&module, true));
    let ok = rep.is_ok();
    BaseAydReport {
        findings: rep,
        module: ok.then_some(module),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid_alg::{build_bialgebroid, FinGroupoid};

    fn bd(g: FinGroupoid) -> GroupoidBialgebroid {
        build_bialgebroid(&g)
    }

    #[test]
    fn adjoint_modules_are_stable() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            let m = adjoint_module(&bd(g));
            assert!(
                validate_ayd(&m, true).is_ok(),
                "{:?}",
                validate_ayd(&m, true)
            );
        }
        let c2 = adjoint_module(&bd(FinGroupoid::cyclic_group(2)));
        assert_eq!(c2.components, vec![(0, 1), (1, 1)]);
        assert!(c2.action[1].is_identity());
        let i2 = adjoint_module(&bd(FinGroupoid::pair(2)));
        assert_eq!(i2.dim(), 2);
        let f = i2.bialgebroid.groupoid.morphism_index("a->b").unwrap();
        assert_eq!(i2.action[f].column(0), e(1).as_slice());
    }

    #[test]
    fn zero_identity_breaks_unit_law() {
        let b = bd(FinGroupoid::cyclic_group(2));
        let m = GradedBModule::new(
            b,
            vec![(1, 1)],
            vec![RationalMatrix::zeros(1, 1), RationalMatrix::identity(1)],
        );
        let rep = validate_ayd(&m, true);
        assert!(rep.has("unit law"));
    }

    #[test]
    fn specialized_and_general_checks_agree() {
        let b = bd(FinGroupoid::symmetric3());
        let good = adjoint_module(&b);
        assert!(specialized_check(&good, true).is_ok() && raw_check(&good, true).is_ok());
        // move one transposition's image into the wrong component
        let mut bad = good.clone();
        let h = 1;
        let mut a = bad.action[h].clone();
        let col = a.column(1).to_vec();
        a.set(col[0].0, 1, Rational::zero());
        a.set(0, 1, Rational::one());
        bad.action[h] = a;
        assert_eq!(
            specialized_check(&bad, false).has("(ii) conjugation grading"),
            raw_check(&bad, false).has("compatibility")
        );
        assert!(raw_check(&bad, false).has("compatibility"));
        let unstable = trivial_at_identity(&b, 0);
        let mut flipped = unstable.clone();
        flipped.components = vec![(1, 1)];
        assert!(!specialized_check(&flipped, false).is_ok());
        assert!(!raw_check(&flipped, false).is_ok());
    }

    #[test]
    fn s3_adjoint_splits_by_class() {
        let m = adjoint_module(&bd(FinGroupoid::symmetric3()));
        let pieces = decompose_and_induce(&m).unwrap();
        let dims: Vec<usize> = pieces.iter().map(|p| p.sub.dim()).collect();
        assert_eq!(dims, vec![1, 3, 2]);
        assert!(check_decomposition(&m, &pieces).is_ok());
        for p in &pieces {
            assert!(validate_ayd(&p.sub, true).is_ok());
        }
    }

    #[test]
    fn single_orbit_and_zero_module() {
        let b = bd(FinGroupoid::pair(2));
        let m = adjoint_module(&b);
        let pieces = decompose_and_induce(&m).unwrap();
        assert_eq!(pieces.len(), 1);
        assert!(check_decomposition(&m, &pieces).is_ok());
        let zero = GradedBModule::new(b.clone(), vec![], vec![RationalMatrix::zeros(0, 0); 4]);
        assert!(decompose_and_induce(&zero).unwrap().is_empty());
    }

    #[test]
    fn modular_pairs_on_c2() {
        let b = bd(FinGroupoid::cyclic_group(2));
        let chi = b.eps.clone();
        let r = ayd_on_base(&b, &chi, &b.one());
        assert!(r.findings.is_ok(), "{:?}", r.findings);
        assert!(r.module.is_some());
        let r = ayd_on_base(&b, &chi, &e(1));
        assert!(r.findings.is_ok(), "{:?}", r.findings);
        assert_eq!(r.module.unwrap().components, vec![(1, 1)]);
        let sum = vec![(0, Rational::one()), (1, Rational::one())];
        let r = ayd_on_base(&b, &chi, &sum);
        assert!(r.findings.has("grouplike coproduct"));
    }

    #[test]
    fn json_round_trip() {
        let b = bd(FinGroupoid::symmetric3());
        let m = adjoint_module(&b);
        let s = serde_json::to_string(&m.to_json_value()).unwrap();
        assert_eq!(GradedBModule::from_json_str(&b, &s).unwrap(), m);
    }
}
