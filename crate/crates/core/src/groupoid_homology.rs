//! Cyclic simplices `B^{⊗_R n+1}⊗_B M` of a groupoid algebra with
//! coefficients in a stable aYD module, their Hochschild and cyclic
//! homology, and the centralizer-group route to the same numbers.
//!
//! Normal form: since `(g_0,…,g_n)⊗m = (g_0g_n⁻¹,…,g_{n−1}g_n⁻¹, id)⊗g_n▷m`,
//! degree `n` has basis `B(y)^n × {m_j}` where `y` is the source of the
//! loop grading `m_j`.

use serde::Serialize;

use crate::algebra_cat::{AlgError, TensorSpace, DEFAULT_GUARD};
use crate::ayd::{decompose_and_induce, validate_ayd, GradedBModule, OrbitPiece};
use crate::complexes::{hh_hc, homology_dims, ChainComplex, ComplexError, ParaCyclicModule};
use crate::groupoid_alg::{FinGroupoid, Side};
use crate::qlinalg::{normalize, rank, Rational, RationalMatrix, SparseVec};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("coefficients fail the aYD conditions: {0:?}")]
    NotAyd(Report),
    #[error("coefficients are not stable: {0:?}")]
    NotStable(Report),
    #[error("basis of size {needed} exceeds the guard {guard}")]
    Guard { needed: usize, guard: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("constructions disagree: {0}")]
    Mismatch(String),
    #[error("unknown orbit {0}")]
    UnknownOrbit(usize),
}

fn pow(b: usize, n: usize) -> usize {
    b.checked_pow(n as u32).unwrap_or(usize::MAX)
}

/// Mixed-radix digits of `t` in base `b`, most significant first.
fn digits(mut t: usize, b: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = t % b;
        t /= b;
    }
    out
}

/// Normal-form indexing for `B^{⊗_R n+1}⊗_B M`.
pub(crate) struct GroupoidNf<'a> {
    g: &'a FinGroupoid,
    act: &'a [RationalMatrix],
    grading: Vec<usize>,
    from_src: Vec<Vec<usize>>,
    pos: Vec<usize>,
    /// `offsets[n][j]`, with one trailing entry holding the dimension.
    offsets: Vec<Vec<usize>>,
}

impl<'a> GroupoidNf<'a> {
    pub(crate) fn new(m: &'a GradedBModule, top: usize) -> Self {
        let g = &m.bialgebroid.groupoid;
        let from_src: Vec<Vec<usize>> = (0..g.n_objects()).map(|x| g.from_source(x)).collect();
        let mut pos = vec![0; g.n_morphisms()];
        for list in &from_src {
            for (i, &h) in list.iter().enumerate() {
                pos[h] = i;
            }
        }
        let grading = m.grading();
        let offsets = (0..=top)
            .map(|n| {
                let mut acc = 0usize;
                let mut row = Vec::with_capacity(grading.len() + 1);
                for &l in &grading {
                    row.push(acc);
                    acc = acc.saturating_add(pow(from_src[g.src(l)].len(), n));
                }
                row.push(acc);
                row
            })
            .collect();
        GroupoidNf {
            g,
            act: &m.action,
            grading,
            from_src,
            pos,
            offsets,
        }
    }

    pub(crate) fn dim(&self, n: usize) -> usize {
        *self.offsets[n].last().expect("sentinel")
    }

    pub(crate) fn source(&self, j: usize) -> usize {
        self.g.src(self.grading[j])
    }

    fn index(&self, prefix: &[usize], j: usize) -> usize {
        let b = self.from_src[self.source(j)].len();
        self.offsets[prefix.len()][j] + prefix.iter().fold(0, |acc, &h| acc * b + self.pos[h])
    }

    fn basis(&self, n: usize, k: usize) -> (Vec<usize>, usize) {
        let j = self.offsets[n].partition_point(|&o| o <= k) - 1;
        let list = &self.from_src[self.source(j)];
        let prefix = digits(k - self.offsets[n][j], list.len(), n)
            .into_iter()
            .map(|d| list[d])
            .collect();
        (prefix, j)
    }

    /// Image of `(g_0,…,g_n)⊗m_j`, added into `out`.
    pub(crate) fn push(&self, tup: &[usize], j: usize, coef: &Rational, out: &mut SparseVec) {
        let y = self.source(j);
        if tup.iter().any(|&h| self.g.src(h) != y) {
            return;
        }
        let (last, rest) = tup.split_last().expect("nonempty tuple");
        let back = self.g.inv(*last);
        let prefix: Vec<usize> = rest
            .iter()
            .map(|&h| self.g.compose(h, back).expect("common source"))
            .collect();
        for (jj, c) in self.act[*last].column(j) {
            out.push((self.index(&prefix, *jj), coef * c));
        }
    }

    fn operator(
        &self,
        src: usize,
        tgt: usize,
        f: impl Fn(&[usize], usize) -> Vec<usize>,
    ) -> RationalMatrix {
        let one = Rational::one();
        let cols = (0..self.dim(src))
            .map(|k| {
                let (prefix, j) = self.basis(src, k);
                let mut full = prefix;
                full.push(self.g.id(self.source(j)));
                let mut out = Vec::new();
                self.push(&f(&full, j), j, &one, &mut out);
                normalize(out)
            })
            .collect();
        RationalMatrix::from_columns(self.dim(tgt), cols)
    }

    fn module(&self, top: usize) -> ParaCyclicModule {
        let mut faces = vec![Vec::new()];
        for n in 1..=top {
            faces.push(
                (0..=n)
                    .map(|k| {
                        self.operator(n, n - 1, |t, _| {
                            let mut v = t.to_vec();
                            v.remove(k);
                            v
                        })
                    })
                    .collect(),
            );
        }
        let degeneracies = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        self.operator(n, n + 1, |t, _| {
                            let mut v = t.to_vec();
                            v.insert(k, t[k]);
                            v
                        })
                    })
                    .collect()
            })
            .collect();
        let cyclic = (0..=top)
            .map(|n| {
                self.operator(n, n, |t, j| {
                    // (g_n∘l, g_0, …, g_{n−1})
                    let l = self.grading[j];
                    let mut v = vec![self.g.compose(t[n], l).expect("loop at the common source")];
                    v.extend_from_slice(&t[..n]);
                    v
                })
            })
            .collect();
        ParaCyclicModule {
            dims: (0..=top).map(|n| self.dim(n)).collect(),
            faces,
            degeneracies: Some(degeneracies),
            cyclic: Some(cyclic),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSimplex {
    pub module: ParaCyclicModule,
    /// Degree-`n` basis: `(g_0,…,g_{n−1}; j)` standing for
    /// `(g_0,…,g_{n−1},id)⊗m_j`.
    pub basis: Vec<Vec<(Vec<usize>, usize)>>,
    /// Dimensions of the cokernel presentation over the `⊗_R` space.
    pub cokernel_dims: Vec<usize>,
    pub stable: bool,
}

/// The cyclic simplex in degrees `0..=top`, with the cokernel dimensions
/// checked against the normal form.
pub fn cyclic_simplex(
    m: &GradedBModule,
    top: usize,
    guard: usize,
) -> Result<CyclicSimplex, HomologyError> {
    let rep = validate_ayd(m, false);
    if !rep.is_ok() {
        return Err(HomologyError::NotAyd(rep));
    }
    let stable = validate_ayd(m, true).is_ok();
    let nf = GroupoidNf::new(m, top);
    let needed = (0..=top)
        .map(|n| nf.dim(n))
        .fold(0usize, usize::saturating_add);
    if needed > guard {
        return Err(HomologyError::Guard { needed, guard });
    }
    let module = nf.module(top);
    let basis = (0..=top)
        .map(|n| (0..nf.dim(n)).map(|k| nf.basis(n, k)).collect())
        .collect();
    let cokernel_dims = (0..=top)
        .map(|n| cokernel_dim(m, n, guard))
        .collect::<Result<Vec<_>, _>>()?;
    if cokernel_dims != module.dims {
        return Err(HomologyError::Mismatch(format!(
            "cokernel dims {cokernel_dims:?} vs normal form {:?}",
            module.dims
        )));
    }
    Ok(CyclicSimplex {
        module,
        basis,
        cokernel_dims,
        stable,
    })
}

/// `dim` of `B^{⊗_R n+1}⊗_B M` as the cokernel of `z◁b⊗m − z⊗b▷m`.
pub fn cokernel_dim(m: &GradedBModule, n: usize, guard: usize) -> Result<usize, HomologyError> {
    let bd = &m.bialgebroid;
    let g = &bd.groupoid;
    let carrier = bd.carrier(Side::Right);
    let factors = vec![&carrier; n + 1];
    let space = TensorSpace::tensor(&factors, guard).map_err(|e| match e {
        AlgError::GuardExceeded { size, .. } => HomologyError::Guard {
            needed: size,
            guard,
        },
        other => HomologyError::Mismatch(other.to_string()),
    })?;
    let dm = m.dim();
    let ambient = space.dim() * dm;
    if ambient > guard {
        return Err(HomologyError::Guard {
            needed: ambient,
            guard,
        });
    }
    let mut rows = Vec::new();
    for k in 0..space.dim() {
        let z = space.basis_tuple(k);
        for b in 0..g.n_morphisms() {
            let moved: Option<Vec<usize>> = z.iter().map(|&h| g.compose(h, b)).collect();
            let zb: SparseVec = moved
                .map(|t| space.project_tuple(&t).to_vec())
                .unwrap_or_default();
            for j in 0..dm {
                let mut row: SparseVec = zb.iter().map(|(p, c)| (p * dm + j, c.clone())).collect();
                row.extend(m.action[b].column(j).iter().map(|(q, c)| (k * dm + q, -c)));
                let row = normalize(row);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    Ok(ambient - rank(&RationalMatrix::from_sparse_rows(ambient, &rows)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitHomology {
    pub transversal: String,
    pub centralizer_order: usize,
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
    pub orbits: Vec<OrbitHomology>,
    pub method: String,
}

fn require_stable(m: &GradedBModule) -> Result<(), HomologyError> {
    let rep = validate_ayd(m, false);
    if !rep.is_ok() {
        return Err(HomologyError::NotAyd(rep));
    }
    let rep = validate_ayd(m, true);
    if !rep.is_ok() {
        return Err(HomologyError::NotStable(rep));
    }
    Ok(())
}

fn pieces(m: &GradedBModule) -> Result<Vec<OrbitPiece>, HomologyError> {
    decompose_and_induce(m).map_err(HomologyError::NotAyd)
}

/// Homology dims in degrees `0..top` of the cyclic simplex, in total and
/// per adjoint orbit.
pub fn homology(
    m: &GradedBModule,
    top: usize,
    guard: usize,
) -> Result<HomologyReport, HomologyError> {
    require_stable(m)?;
    let z = cyclic_simplex(m, top, guard)?;
    let (hh, hc) = hh_hc(&z.module)?;
    let mut orbits = Vec::new();
    for p in pieces(m)? {
        let zp = cyclic_simplex(&p.sub, top, guard)?;
        let (h1, h2) = hh_hc(&zp.module)?;
        orbits.push(OrbitHomology {
            transversal: m.bialgebroid.groupoid.name(p.transversal).to_string(),
            centralizer_order: p.centralizer.len(),
            hh: h1,
            hc: h2,
        });
    }
    let sum = |f: fn(&OrbitHomology) -> &Vec<usize>| -> Vec<usize> {
        (0..top)
            .map(|n| orbits.iter().map(|o| f(o)[n]).sum())
            .collect()
    };
    if sum(|o| &o.hh) != hh || sum(|o| &o.hc) != hc {
        return Err(HomologyError::Mismatch(
            "orbit pieces do not sum to the total".into(),
        ));
    }
    Ok(HomologyReport {
        hh,
        hc,
        orbits,
        method: "direct".into(),
    })
}

/// A finite group by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    pub labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FinGroup {
    /// Panics unless `mul` is a group table.
    pub fn from_table(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Self {
        let n = labels.len();
        let identity = (0..n)
            .find(|&a| (0..n).all(|b| mul[a][b] == b && mul[b][a] == b))
            .expect("identity element");
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == identity).expect("inverse"))
            .collect();
        FinGroup {
            labels,
            mul,
            identity,
            inverse,
        }
    }

    /// The given loops at one object, closed under composition.
    pub fn from_loops(g: &FinGroupoid, elems: &[usize]) -> Self {
        let pos = |h: usize| {
            elems
                .iter()
                .position(|&x| x == h)
                .expect("closed under composition")
        };
        let mul = elems
            .iter()
            .map(|&a| {
                elems
                    .iter()
                    .map(|&b| pos(g.compose(a, b).expect("same object")))
                    .collect()
            })
            .collect();
        FinGroup::from_table(elems.iter().map(|&h| g.name(h).to_string()).collect(), mul)
    }

    pub fn cyclic(n: usize) -> Self {
        FinGroup::from_table(
            (0..n).map(|i| format!("g{i}")).collect(),
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    /// `G/⟨a⟩` for central `a`, with the coset of each element.
    pub fn quotient_by(&self, a: usize) -> (FinGroup, Vec<usize>) {
        let mut sub = vec![self.identity];
        let mut x = a;
        while x != self.identity {
            sub.push(x);
            x = self.mul[x][a];
        }
        let mut coset = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for gi in 0..self.order() {
            if coset[gi] != usize::MAX {
                continue;
            }
            for &s in &sub {
                coset[self.mul[gi][s]] = reps.len();
            }
            reps.push(gi);
        }
        let mul = reps
            .iter()
            .map(|&p| reps.iter().map(|&q| coset[self.mul[p][q]]).collect())
            .collect();
        let labels = reps
            .iter()
            .map(|&p| format!("{}⟨{}⟩", self.labels[p], self.labels[a]))
            .collect();
        (FinGroup::from_table(labels, mul), coset)
    }
}

/// Group homology in degrees `0..top` from the inhomogeneous bar complex
/// `G^n ⊗ M`, with `M` a right module through `m·g = g⁻¹▷m`.
pub fn group_homology_bar(
    group: &FinGroup,
    action: &[RationalMatrix],
    top: usize,
) -> Result<Vec<usize>, HomologyError> {
    let q = group.order();
    let dm = action.first().map_or(0, RationalMatrix::rows);
    let dims: Vec<usize> = (0..=top).map(|n| pow(q, n) * dm).collect();
    let mut boundaries = Vec::new();
    for n in 1..=top {
        let cols = (0..dims[n])
            .map(|k| {
                let (t, j) = (k / dm, k % dm);
                let gs = digits(t, q, n);
                let enc = |v: &[usize]| v.iter().fold(0, |acc, &x| acc * q + x);
                let mut out: SparseVec = Vec::new();
                // m·g_1 ⊗ [g_2|…|g_n]
                let rest = enc(&gs[1..]);
                for (jj, c) in action[group.inv(gs[0])].column(j) {
                    out.push((rest * dm + jj, c.clone()));
                }
                for i in 0..n - 1 {
                    let mut v = gs.clone();
                    v.splice(i..i + 2, [group.mul(gs[i], gs[i + 1])]);
                    let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                    out.push((enc(&v) * dm + j, Rational::from_int(sign)));
                }
                let sign = if n % 2 == 0 { 1 } else { -1 };
                out.push((enc(&gs[..n - 1]) * dm + j, Rational::from_int(sign)));
                normalize(out)
            })
            .collect();
        boundaries.push(RationalMatrix::from_columns(dims[n - 1], cols));
    }
    Ok(homology_dims(&ChainComplex::new(dims, boundaries)?)?)
}

/// One adjoint orbit's contribution to the closed formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurgheleaTerm {
    pub finite_order: bool,
    /// `H_*(G_l, M_l)`.
    pub group: Vec<usize>,
    /// `H_*(G_l/⟨l⟩, M_l)`.
    pub quotient: Vec<usize>,
}

/// `HH_n = Σ H_n(G_l)`, `HC_n = Σ_finite Σ_i H_{n−2i}(G_l/⟨l⟩) + Σ_infinite H_n(G_l/⟨l⟩)`.
pub fn burghelea_combine(terms: &[BurgheleaTerm], top: usize) -> (Vec<usize>, Vec<usize>) {
    let mut hh = vec![0; top];
    let mut hc = vec![0; top];
    for t in terms {
        for n in 0..top {
            hh[n] += t.group[n];
            if t.finite_order {
                hc[n] += (0..=n / 2).map(|i| t.quotient[n - 2 * i]).sum::<usize>();
            } else {
                hc[n] += t.quotient[n];
            }
        }
    }
    (hh, hc)
}

/// Homology dims from centralizer group homology.
pub fn burghelea_dims(m: &GradedBModule, top: usize) -> Result<HomologyReport, HomologyError> {
    require_stable(m)?;
    let g = &m.bialgebroid.groupoid;
    let mut terms = Vec::new();
    let mut orbits = Vec::new();
    for p in pieces(m)? {
        let group = FinGroup::from_loops(g, &p.centralizer);
        let l = p
            .centralizer
            .iter()
            .position(|&c| c == p.transversal)
            .expect("l centralizes itself");
        let (quot, coset) = group.quotient_by(l);
        let mut qaction = vec![None; quot.order()];
        for (i, a) in p.centralizer_action.iter().enumerate() {
            match &qaction[coset[i]] {
                None => qaction[coset[i]] = Some(a.clone()),
                Some(b) if b == a => {}
                Some(_) => {
                    return Err(HomologyError::Mismatch(
                        "action does not descend to the quotient".into(),
                    ))
                }
            }
        }
        let qaction: Vec<RationalMatrix> = qaction
            .into_iter()
            .map(|a| a.expect("every coset hit"))
            .collect();
        let term = BurgheleaTerm {
            finite_order: true,
            group: group_homology_bar(&group, &p.centralizer_action, top)?,
            quotient: group_homology_bar(&quot, &qaction, top)?,
        };
        let (hh, hc) = burghelea_combine(std::slice::from_ref(&term), top);
        orbits.push(OrbitHomology {
            transversal: g.name(p.transversal).to_string(),
            centralizer_order: group.order(),
            hh,
            hc,
        });
        terms.push(term);
    }
    let (hh, hc) = burghelea_combine(&terms, top);
    Ok(HomologyReport {
        hh,
        hc,
        orbits,
        method: "burghelea".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub direct: HomologyReport,
    pub burghelea: HomologyReport,
    pub agree: bool,
}

pub fn compare(m: &GradedBModule, top: usize, guard: usize) -> Result<Comparison, HomologyError> {
    let direct = homology(m, top, guard)?;
    let burghelea = burghelea_dims(m, top)?;
    let agree =
        direct.hh == burghelea.hh && direct.hc == burghelea.hc && direct.orbits == burghelea.orbits;
    Ok(Comparison {
        direct,
        burghelea,
        agree,
    })
}

/// `H_*` of the complex `C^{⊗n+1}`, `δ = Σ(−1)^i ∂_i`, for the coalgebra
/// `C = B(x)` with `Δg = g⊗g`, `ε(g) = 1`, degrees `0..top`.
pub fn resolution_homology(
    g: &FinGroupoid,
    x: usize,
    top: usize,
) -> Result<Vec<usize>, HomologyError> {
    let q = g.from_source(x).len();
    let dims: Vec<usize> = (0..=top).map(|n| pow(q, n + 1)).collect();
    let mut boundaries = Vec::new();
    for n in 1..=top {
        let cols = (0..dims[n])
            .map(|k| {
                let d = digits(k, q, n + 1);
                let out = (0..=n)
                    .map(|i| {
                        let mut v = d.clone();
                        v.remove(i);
                        let idx = v.iter().fold(0, |acc, &x| acc * q + x);
                        (idx, Rational::from_int(if i % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect();
                normalize(out)
            })
            .collect();
        boundaries.push(RationalMatrix::from_columns(dims[n - 1], cols));
    }
    Ok(homology_dims(&ChainComplex::new(dims, boundaries)?)?)
}

/// Group-side cyclic module `B(x)^{⊗n+1}⊗_{B_l}M_l` and its comparison
/// with the groupoid side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReduction {
    pub transversal: usize,
    pub group_side: ParaCyclicModule,
    pub groupoid_side: ParaCyclicModule,
    /// Group side to groupoid side, per degree.
    pub iso: Vec<RationalMatrix>,
    pub findings: Report,
}

struct GroupNf<'a> {
    g: &'a FinGroupoid,
    piece: &'a OrbitPiece,
    list: Vec<usize>,
    pos: Vec<usize>,
    dl: usize,
}

impl GroupNf<'_> {
    fn dim(&self, n: usize) -> usize {
        pow(self.list.len(), n) * self.piece.coset_reps.len() * self.dl
    }

    /// Basis `(g_0,…,g_{n−1}, r_k)⊗m_j`, ordered by `(k, j, prefix)`.
    fn basis(&self, n: usize, idx: usize) -> (Vec<usize>, usize, usize) {
        let per = pow(self.list.len(), n);
        let (kj, t) = (idx / per, idx % per);
        let prefix = digits(t, self.list.len(), n)
            .into_iter()
            .map(|d| self.list[d])
            .collect();
        (prefix, kj / self.dl, kj % self.dl)
    }

    fn index(&self, prefix: &[usize], k: usize, j: usize) -> usize {
        let per = pow(self.list.len(), prefix.len());
        (k * self.dl + j) * per
            + prefix
                .iter()
                .fold(0, |acc, &h| acc * self.list.len() + self.pos[h])
    }

    /// `(g_0,…,g_n)⊗_{B_l} m_j`: write `g_n = r c` and move `c` across.
    fn push(&self, tup: &[usize], j: usize, coef: &Rational, out: &mut SparseVec) {
        let (last, rest) = tup.split_last().expect("nonempty");
        let p = self.piece;
        let (k, c) = p
            .coset_reps
            .iter()
            .enumerate()
            .find_map(|(k, &r)| {
                let c = self.g.compose(self.g.inv(r), *last)?;
                p.centralizer.iter().position(|&z| z == c).map(|ci| (k, ci))
            })
            .expect("coset decomposition");
        let cinv = self.g.inv(p.centralizer[c]);
        let prefix: Vec<usize> = rest
            .iter()
            .map(|&h| self.g.compose(h, cinv).expect("same source"))
            .collect();
        for (jj, v) in p.centralizer_action[c].column(j) {
            out.push((self.index(&prefix, k, *jj), coef * v));
        }
    }

    fn operator(
        &self,
        src: usize,
        tgt: usize,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> RationalMatrix {
        let one = Rational::one();
        let cols = (0..self.dim(src))
            .map(|i| {
                let (mut t, k, j) = self.basis(src, i);
                t.push(self.piece.coset_reps[k]);
                let mut out = Vec::new();
                self.push(&f(&t), j, &one, &mut out);
                normalize(out)
            })
            .collect();
        RationalMatrix::from_columns(self.dim(tgt), cols)
    }
}

/// Build both sides for one orbit and check the per-degree isomorphism
/// against every face, degeneracy and cyclic operator.
pub fn reduce_to_group(
    m: &GradedBModule,
    orbit: usize,
    top: usize,
    guard: usize,
) -> Result<GroupReduction, HomologyError> {
    require_stable(m)?;
    let all = pieces(m)?;
    let piece = all.get(orbit).ok_or(HomologyError::UnknownOrbit(orbit))?;
    let g = &m.bialgebroid.groupoid;
    let l = piece.transversal;
    let x = g.src(l);
    let list = g.from_source(x);
    let mut pos = vec![0; g.n_morphisms()];
    for (i, &h) in list.iter().enumerate() {
        pos[h] = i;
    }
    let dl = piece.sub.range_of(l).len();
    let nf = GroupNf {
        g,
        piece,
        list,
        pos,
        dl,
    };
    let groupoid_side = cyclic_simplex(&piece.sub, top, guard)?.module;
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        faces.push(
            (0..=n)
                .map(|k| {
                    nf.operator(n, n - 1, |t| {
                        let mut v = t.to_vec();
                        v.remove(k);
                        v
                    })
                })
                .collect(),
        );
    }
    let degeneracies = (0..top)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    nf.operator(n, n + 1, |t| {
                        let mut v = t.to_vec();
                        v.insert(k, t[k]);
                        v
                    })
                })
                .collect()
        })
        .collect();
    let cyclic = (0..=top)
        .map(|n| {
            nf.operator(n, n, |t| {
                let mut v = vec![g.compose(t[n], l).expect("source x")];
                v.extend_from_slice(&t[..n]);
                v
            })
        })
        .collect();
    let group_side = ParaCyclicModule {
        dims: (0..=top).map(|n| nf.dim(n)).collect(),
        faces,
        degeneracies: Some(degeneracies),
        cyclic: Some(cyclic),
    };
    // (g_0,…,g_n)⊗_{B_l} m ↦ (g_0,…,g_n)⊗_B m
    let gnf = GroupoidNf::new(&piece.sub, top);
    let start = piece.sub.range_of(l).start;
    let one = Rational::one();
    let iso: Vec<RationalMatrix> = (0..=top)
        .map(|n| {
            let cols = (0..nf.dim(n))
                .map(|i| {
                    let (mut t, k, j) = nf.basis(n, i);
                    t.push(piece.coset_reps[k]);
                    let mut out = Vec::new();
                    gnf.push(&t, start + j, &one, &mut out);
                    normalize(out)
                })
                .collect();
            RationalMatrix::from_columns(gnf.dim(n), cols)
        })
        .collect();
    let findings = check_chain_iso(&group_side, &groupoid_side, &iso);
    Ok(GroupReduction {
        transversal: l,
        group_side,
        groupoid_side,
        iso,
        findings,
    })
}

/// `iso` square and invertible in every degree and intertwining all
/// faces, degeneracies and cyclic operators.
pub fn check_chain_iso(
    a: &ParaCyclicModule,
    b: &ParaCyclicModule,
    iso: &[RationalMatrix],
) -> Report {
    let mut rep = Report::new();
    for (n, f) in iso.iter().enumerate() {
        if f.shape() != (b.dims[n], a.dims[n]) || f.rows() != f.cols() || rank(f) != f.rows() {
            rep.push("bijective", format!("degree {n}"));
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    for n in 1..a.faces.len() {
        for k in 0..=n {
            if iso[n - 1].mul(&a.faces[n][k]) != b.faces[n][k].mul(&iso[n]) {
                rep.push("faces", format!("d_{k} in degree {n}"));
            }
        }
    }
    if let (Some(sa), Some(sb)) = (&a.degeneracies, &b.degeneracies) {
        for (n, row) in sa.iter().enumerate() {
            for k in 0..row.len() {
                if iso[n + 1].mul(&sa[n][k]) != sb[n][k].mul(&iso[n]) {
                    rep.push("degeneracies", format!("s_{k} in degree {n}"));
                }
            }
        }
    }
    if let (Some(ta), Some(tb)) = (&a.cyclic, &b.cyclic) {
        for n in 0..ta.len() {
            if iso[n].mul(&ta[n]) != tb[n].mul(&iso[n]) {
                rep.push("cyclic", format!("t_{n}"));
            }
        }
    }
    rep
}

/// Default guard for basis sizes in this module.
pub const GUARD: usize = DEFAULT_GUARD;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ayd::{adjoint_module, trivial_at_identity};
    use crate::complexes::{validate_paracyclic, Mode};
    use crate::groupoid_alg::{build_bialgebroid, GroupoidBialgebroid};

    fn bd(g: FinGroupoid) -> GroupoidBialgebroid {
        build_bialgebroid(&g)
    }

    #[test]
    fn c2_trivial_dims_and_cyclic_map() {
        let b = bd(FinGroupoid::cyclic_group(2));
        let z = cyclic_simplex(&trivial_at_identity(&b, 0), 3, GUARD).unwrap();
        assert_eq!(z.module.dims, vec![1, 2, 4, 8]);
        let adj = adjoint_module(&b);
        let z = cyclic_simplex(&adj, 3, GUARD).unwrap();
        assert!(validate_paracyclic(&z.module, Mode::Cyclic).is_empty());
        // (e,e)⊗m_σ ↦ (σ,e)⊗m_σ
        let k = z.basis[1].iter().position(|b| *b == (vec![0], 1)).unwrap();
        let img = z.module.cyclic.as_ref().unwrap()[1].column(k).to_vec();
        let want = z.basis[1].iter().position(|b| *b == (vec![1], 1)).unwrap();
        assert_eq!(img, vec![(want, Rational::one())]);
    }

    #[test]
    fn homology_oracles() {
        let c2 = homology(&adjoint_module(&bd(FinGroupoid::cyclic_group(2))), 3, GUARD).unwrap();
        assert_eq!(
            (c2.hh.clone(), c2.hc.clone()),
            (vec![2, 0, 0], vec![2, 0, 2])
        );
        let i2 = homology(&adjoint_module(&bd(FinGroupoid::pair(2))), 3, GUARD).unwrap();
        assert_eq!((i2.hh, i2.hc), (vec![1, 0, 0], vec![1, 0, 1]));
        let b = bd(FinGroupoid::cyclic_group(2));
        let zero = GradedBModule::new(b, vec![], vec![RationalMatrix::zeros(0, 0); 2]);
        let z = homology(&zero, 3, GUARD).unwrap();
        assert_eq!((z.hh, z.hc), (vec![0; 3], vec![0; 3]));
    }

    #[test]
    fn bar_complex_small_groups() {
        let triv = |n: usize| vec![RationalMatrix::identity(1); n];
        assert_eq!(
            group_homology_bar(&FinGroup::cyclic(2), &triv(2), 3).unwrap(),
            vec![1, 0, 0]
        );
        let g = FinGroupoid::symmetric3();
        let s3 = FinGroup::from_loops(&g, &(0..6).collect::<Vec<_>>());
        assert_eq!(group_homology_bar(&s3, &triv(6), 3).unwrap(), vec![1, 0, 0]);
        // sign representation of C2: no coinvariants
        let sign = vec![
            RationalMatrix::identity(1),
            RationalMatrix::identity(1).scale(&Rational::from_int(-1)),
        ];
        assert_eq!(
            group_homology_bar(&FinGroup::cyclic(2), &sign, 2).unwrap()[0],
            0
        );
    }

    #[test]
    fn closed_formula_matches_direct() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            let c = compare(&adjoint_module(&bd(g)), 3, GUARD).unwrap();
            assert!(c.agree, "{c:?}");
        }
        let s3 = bd(FinGroupoid::symmetric3());
        let c = compare(&trivial_at_identity(&s3, 0), 4, GUARD).unwrap();
        assert_eq!(c.direct.hc, vec![1, 0, 1, 0]);
        assert!(c.agree);
    }

    #[test]
    fn infinite_order_branch_with_mocked_tables() {
        let t = BurgheleaTerm {
            finite_order: false,
            group: vec![1, 1, 0, 0],
            quotient: vec![1, 0, 0, 0],
        };
        assert_eq!(
            burghelea_combine(std::slice::from_ref(&t), 4),
            (vec![1, 1, 0, 0], vec![1, 0, 0, 0])
        );
        let f = BurgheleaTerm {
            finite_order: true,
            ..t.clone()
        };
        assert_eq!(burghelea_combine(&[f, t], 4).1, vec![2, 0, 1, 0]);
    }

    #[test]
    fn unstable_coefficients_are_rejected() {
        let b = bd(FinGroupoid::cyclic_group(2));
        // M_σ = ℚ with σ acting by −1
        let m = GradedBModule::new(
            b,
            vec![(1, 1)],
            vec![
                RationalMatrix::identity(1),
                RationalMatrix::identity(1).scale(&Rational::from_int(-1)),
            ],
        );
        assert!(matches!(
            burghelea_dims(&m, 3),
            Err(HomologyError::NotStable(_))
        ));
        let z = cyclic_simplex(&m, 2, GUARD).unwrap();
        assert!(!z.stable);
        assert!(validate_paracyclic(&z.module, Mode::Para).is_empty());
        assert!(!validate_paracyclic(&z.module, Mode::Cyclic).is_empty());
    }

    #[test]
    fn group_reduction_commutes() {
        let b = bd(FinGroupoid::pair(2));
        let r = reduce_to_group(&adjoint_module(&b), 0, 3, GUARD).unwrap();
        assert!(r.findings.is_ok(), "{:?}", r.findings);
        assert_eq!(r.group_side.dims, vec![2, 4, 8, 16]);
        let c2 = bd(FinGroupoid::cyclic_group(2));
        let adj = adjoint_module(&c2);
        let r = reduce_to_group(&adj, 1, 3, GUARD).unwrap();
        assert!(r.findings.is_ok());
        assert_eq!(r.group_side.dims, vec![1, 2, 4, 8]);
        let s3 = adjoint_module(&bd(FinGroupoid::symmetric3()));
        for o in 0..3 {
            assert!(reduce_to_group(&s3, o, 3, GUARD).unwrap().findings.is_ok());
        }
    }

    #[test]
    fn resolutions_are_acyclic() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            for x in 0..g.n_objects() {
                assert_eq!(resolution_homology(&g, x, 4).unwrap(), vec![1, 0, 0, 0]);
            }
        }
    }
}
