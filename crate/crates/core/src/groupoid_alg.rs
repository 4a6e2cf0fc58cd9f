//! Finite groupoids, their groupoid algebras as bialgebroids over the
//! algebra of functions on objects, adjoint orbits of loops, and action
//! groupoids of G-sets.
//!
//! Composition `f∘g` means "g then f" and is defined when `src(f) = tgt(g)`.
//! The algebra product of basis elements is `f·g = f∘g` or zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra_cat::{
    apply_on_tuple, collect_lin, validate_coring, AlgebraMorphism, Bimodule, Coring, FinAlgebra,
    Lin, TensorSpace, DEFAULT_GUARD,
};
use crate::qlinalg::{inverse, normalize, Rational, RationalMatrix, SparseVec};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupoidError {
    #[error("groupoid has no objects")]
    NoObjects,
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("missing composite for composable pair ({0}, {1})")]
    MissingComposite(String, String),
    #[error("composite given for non-composable pair ({0}, {1})")]
    NotComposable(String, String),
    #[error("composite of ({0}, {1}) has wrong source or target")]
    BadComposite(String, String),
    #[error("identity {0} is not an identity morphism")]
    BadIdentity(String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("{0} has no inverse")]
    NoInverse(String),
    #[error("invalid group or action: {0}")]
    BadAction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite groupoid with a complete composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    compose: Vec<Option<usize>>,
    inverse: Vec<usize>,
}

impl FinGroupoid {
    /// Build and validate. `compose` lists `(f, g, f∘g)` by morphism index.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: &[(usize, usize, usize)],
    ) -> Result<Self, GroupoidError> {
        if objects.is_empty() {
            return Err(GroupoidError::NoObjects);
        }
        let n = morphisms.len();
        let name = |i: usize| morphisms[i].name.clone();
        let mut table = vec![None; n * n];
        for &(f, g, fg) in compose {
            if morphisms[f].src != morphisms[g].tgt {
                return Err(GroupoidError::NotComposable(name(f), name(g)));
            }
            if morphisms[fg].src != morphisms[g].src || morphisms[fg].tgt != morphisms[f].tgt {
                return Err(GroupoidError::BadComposite(name(f), name(g)));
            }
            table[f * n + g] = Some(fg);
        }
        for f in 0..n {
            for g in 0..n {
                if morphisms[f].src == morphisms[g].tgt && table[f * n + g].is_none() {
                    return Err(GroupoidError::MissingComposite(name(f), name(g)));
                }
            }
        }
        for (x, &i) in identities.iter().enumerate() {
            let ok = morphisms[i].src == x
                && morphisms[i].tgt == x
                && (0..n).all(|g| {
                    (morphisms[g].tgt != x || table[i * n + g] == Some(g))
                        && (morphisms[g].src != x || table[g * n + i] == Some(g))
                });
            if !ok {
                return Err(GroupoidError::BadIdentity(name(i)));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = table[f * n + g] else { continue };
                for h in 0..n {
                    let Some(gh) = table[g * n + h] else { continue };
                    if table[fg * n + h] != table[f * n + gh] {
                        return Err(GroupoidError::NotAssociative(name(f), name(g), name(h)));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for f in 0..n {
            let (s, t) = (morphisms[f].src, morphisms[f].tgt);
            inv[f] = (0..n)
                .find(|&g| {
                    table[f * n + g] == Some(identities[t])
                        && table[g * n + f] == Some(identities[s])
                })
                .ok_or_else(|| GroupoidError::NoInverse(name(f)))?;
        }
        Ok(FinGroupoid {
            objects,
            morphisms,
            identities,
            compose: table,
            inverse: inv,
        })
    }

    /// One-object groupoid of a finite group given by its multiplication table.
    pub fn from_group(
        elements: &[String],
        mul: &[(usize, usize, usize)],
    ) -> Result<Self, GroupoidError> {
        let n = elements.len();
        let mut table = vec![usize::MAX; n * n];
        for &(a, b, ab) in mul {
            table[a * n + b] = ab;
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
            .ok_or_else(|| GroupoidError::BadAction("group has no identity element".into()))?;
        let morphisms = elements
            .iter()
            .map(|s| Morphism {
                name: s.clone(),
                src: 0,
                tgt: 0,
            })
            .collect();
        FinGroupoid::new(vec!["*".into()], morphisms, vec![e], mul)
    }

    /// ℤ/n with elements `g0 … g{n-1}`; `g0` is the identity.
    pub fn cyclic_group(n: usize) -> Self {
        let names: Vec<String> = (0..n)
            .map(|i| {
                if n == 2 && i == 1 {
                    "s".into()
                } else {
                    format!("g{i}")
                }
            })
            .collect();
        let names: Vec<String> = names
            .into_iter()
            .enumerate()
            .map(|(i, s)| if i == 0 { "e".into() } else { s })
            .collect();
        let mul: Vec<_> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b, (a + b) % n)))
            .collect();
        Self::from_group(&names, &mul).expect("cyclic group")
    }

    /// The symmetric group on three letters, elements in one-line notation.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let names: Vec<String> = perms
            .iter()
            .map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1))
            .collect();
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
        let mut mul = Vec::new();
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                // (a∘b)(i) = a(b(i))
                mul.push((a, b, idx([pa[pb[0]], pa[pb[1]], pa[pb[2]]])));
            }
        }
        Self::from_group(&names, &mul).expect("symmetric group")
    }

    /// The pair groupoid on `n` objects: exactly one morphism between any two.
    pub fn pair(n: usize) -> Self {
        let objects: Vec<String> = (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        let idx = |s: usize, t: usize| s * n + t;
        let morphisms = (0..n * n)
            .map(|k| {
                let (s, t) = (k / n, k % n);
                let name = if s == t {
                    format!("id_{}", objects[s])
                } else {
                    format!("{}->{}", objects[s], objects[t])
                };
                Morphism {
                    name,
                    src: s,
                    tgt: t,
                }
            })
            .collect();
        let identities = (0..n).map(|x| idx(x, x)).collect();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // (b→c)∘(a→b) = a→c
                    compose.push((idx(b, c), idx(a, b), idx(a, c)));
                }
            }
        }
        FinGroupoid::new(objects, morphisms, identities, &compose).expect("pair groupoid")
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn src(&self, g: usize) -> usize {
        self.morphisms[g].src
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.morphisms[g].tgt
    }

    pub fn name(&self, g: usize) -> &str {
        &self.morphisms[g].name
    }

    pub fn id(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// `f∘g` when defined.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f * self.n_morphisms() + g]
    }

    pub fn is_loop(&self, g: usize) -> bool {
        self.src(g) == self.tgt(g)
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.n_morphisms())
            .filter(|&g| self.is_loop(g))
            .collect()
    }

    /// `h∘l∘h⁻¹` when `src(h) = src(l)` and `l` is a loop.
    pub fn conjugate(&self, h: usize, l: usize) -> Option<usize> {
        let hl = self.compose(h, l)?;
        self.compose(hl, self.inv(h))
    }

    /// Morphisms with source `x`, in input order.
    pub fn from_source(&self, x: usize) -> Vec<usize> {
        (0..self.n_morphisms())
            .filter(|&g| self.src(g) == x)
            .collect()
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Connected components as lists of objects.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n_objects()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n_objects() {
            if comp[x] != usize::MAX {
                continue;
            }
            let c = out.len();
            let members: Vec<usize> = self.from_source(x).iter().map(|&g| self.tgt(g)).collect();
            let mut members = members;
            members.sort_unstable();
            members.dedup();
            for &y in &members {
                comp[y] = c;
            }
            out.push(members);
        }
        out
    }

    /// The groupoid algebra, basis = morphisms.
    pub fn algebra(&self) -> FinAlgebra {
        let n = self.n_morphisms();
        let mul = (0..n)
            .map(|f| {
                (0..n)
                    .map(|g| {
                        self.compose(f, g)
                            .map(|h| vec![(h, Rational::one())])
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        let unit = self
            .identities
            .iter()
            .map(|&i| (i, Rational::one()))
            .collect();
        FinAlgebra::new(
            self.morphisms.iter().map(|m| m.name.clone()).collect(),
            mul,
            unit,
        )
    }

    /// Whether a bijection on objects and morphisms identifies the two groupoids.
    pub fn is_isomorphic(&self, other: &FinGroupoid) -> bool {
        if self.n_objects() != other.n_objects() || self.n_morphisms() != other.n_morphisms() {
            return false;
        }
        let n = self.n_objects();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if self.iso_over_objects(other, &perm) {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn iso_over_objects(&self, other: &FinGroupoid, obj: &[usize]) -> bool {
        // backtracking over morphism assignments respecting endpoints
        let m = self.n_morphisms();
        let mut map = vec![usize::MAX; m];
        let mut used = vec![false; m];
        fn go(
            a: &FinGroupoid,
            b: &FinGroupoid,
            obj: &[usize],
            k: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == a.n_morphisms() {
                return (0..k).all(|f| {
                    (0..k).all(|g| match a.compose(f, g) {
                        Some(fg) => b.compose(map[f], map[g]) == Some(map[fg]),
                        None => true,
                    })
                });
            }
            for c in 0..b.n_morphisms() {
                if used[c] || b.src(c) != obj[a.src(k)] || b.tgt(c) != obj[a.tgt(k)] {
                    continue;
                }
                if a.identities.contains(&k) != b.identities.contains(&c) {
                    continue;
                }
                // partial check against already assigned morphisms
                let ok = (0..k).all(|f| {
                    let pairs = [(f, k), (k, f), (k, k)];
                    pairs.iter().all(|&(x, y)| match a.compose(x, y) {
                        Some(xy) if xy <= k && x <= k && y <= k => {
                            let mx = if x == k { c } else { map[x] };
                            let my = if y == k { c } else { map[y] };
                            let mxy = if xy == k { c } else { map[xy] };
                            b.compose(mx, my) == Some(mxy)
                        }
                        _ => true,
                    })
                });
                if !ok {
                    continue;
                }
                map[k] = c;
                used[c] = true;
                if go(a, b, obj, k + 1, map, used) {
                    return true;
                }
                used[c] = false;
            }
            map[k] = usize::MAX;
            false
        }
        go(self, other, obj, 0, &mut map, &mut used)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Serialize, Deserialize)]
struct GroupoidJson {
    objects: Vec<String>,
    morphisms: Vec<MorphismJson>,
    identities: BTreeMap<String, String>,
    compose: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    name: String,
    src: String,
    tgt: String,
}

impl FinGroupoid {
    pub fn from_json_str(s: &str) -> Result<Self, String> {
        let j: GroupoidJson = serde_json::from_str(s).map_err(|e| e.to_string())?;
        Self::from_json(j).map_err(|e| format!("validation: {e}"))
    }

    fn from_json(j: GroupoidJson) -> Result<Self, GroupoidError> {
        let obj = |s: &str| {
            j.objects
                .iter()
                .position(|o| o == s)
                .ok_or_else(|| GroupoidError::UnknownLabel(s.into()))
        };
        let mut names: Vec<&str> = Vec::new();
        let mut morphisms = Vec::new();
        for m in &j.morphisms {
            if names.contains(&m.name.as_str()) {
                return Err(GroupoidError::DuplicateLabel(m.name.clone()));
            }
            names.push(&m.name);
            morphisms.push(Morphism {
                name: m.name.clone(),
                src: obj(&m.src)?,
                tgt: obj(&m.tgt)?,
            });
        }
        let mor = |s: &str| {
            names
                .iter()
                .position(|n| *n == s)
                .ok_or_else(|| GroupoidError::UnknownLabel(s.into()))
        };
        let identities = j
            .objects
            .iter()
            .map(|o| {
                j.identities
                    .get(o)
                    .ok_or_else(|| GroupoidError::UnknownLabel(o.clone()))
                    .and_then(|m| mor(m))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let compose = j
            .compose
            .iter()
            .map(|(f, g, fg)| Ok((mor(f)?, mor(g)?, mor(fg)?)))
            .collect::<Result<Vec<_>, GroupoidError>>()?;
        FinGroupoid::new(j.objects.clone(), morphisms, identities, &compose)
    }
}

/// Strict validation failure of a groupoid description, for reporting.
pub fn groupoid_json_error(s: &str) -> Option<GroupoidError> {
    let j: GroupoidJson = serde_json::from_str(s).ok()?;
    FinGroupoid::from_json(j).err()
}

impl Serialize for FinGroupoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| MorphismJson {
                name: m.name.clone(),
                src: self.objects[m.src].clone(),
                tgt: self.objects[m.tgt].clone(),
            })
            .collect();
        let identities = self
            .identities
            .iter()
            .enumerate()
            .map(|(x, &i)| (self.objects[x].clone(), self.name(i).to_string()))
            .collect();
        let mut compose = Vec::new();
        for f in 0..self.n_morphisms() {
            for g in 0..self.n_morphisms() {
                if let Some(fg) = self.compose(f, g) {
                    compose.push((
                        self.name(f).into(),
                        self.name(g).into(),
                        self.name(fg).into(),
                    ));
                }
            }
        }
        GroupoidJson {
            objects: self.objects.clone(),
            morphisms,
            identities,
            compose,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinGroupoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GroupoidJson::deserialize(d)?;
        FinGroupoid::from_json(j).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Right,
    Left,
}

/// Which side of a morphism an idempotent of the base acts on when it
/// multiplies from the left (target) or from the right (source).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mult {
    Left,
    Right,
}

/// The groupoid algebra with its bialgebroid and ×_R-Hopf structure maps.
///
/// Right structure: the base acts on both sides by right multiplication,
/// `Δg = g⊗g`, `ε(g) = src(g)`. Left structure: both actions by left
/// multiplication, `Δg = g⊗g`, `ε(g) = tgt(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidBialgebroid {
    pub groupoid: FinGroupoid,
    pub b: FinAlgebra,
    pub r: FinAlgebra,
    /// e_x ↦ id_x; the same map serves as both base embeddings.
    pub xi_zeta: AlgebraMorphism,
    pub delta: RationalMatrix,
    pub eps: RationalMatrix,
    pub delta_left: RationalMatrix,
    pub eps_left: RationalMatrix,
    /// B⊗_{R^op}B → B⊗_R B.
    pub theta: RationalMatrix,
    pub theta_inv: RationalMatrix,
}

/// Build the bialgebroid of a validated groupoid.
pub fn build_bialgebroid(g: &FinGroupoid) -> GroupoidBialgebroid {
    let b = g.algebra();
    let r = FinAlgebra::diagonal(g.objects.clone());
    let xi = RationalMatrix::from_index_map(
        b.dim(),
        &g.identities.iter().map(|&i| Some(i)).collect::<Vec<_>>(),
    );
    let xi_zeta = AlgebraMorphism {
        source: r.clone(),
        target: b.clone(),
        matrix: xi,
    };
    let mut out = GroupoidBialgebroid {
        groupoid: g.clone(),
        b,
        r,
        xi_zeta,
        delta: RationalMatrix::zeros(0, 0),
        eps: RationalMatrix::zeros(0, 0),
        delta_left: RationalMatrix::zeros(0, 0),
        eps_left: RationalMatrix::zeros(0, 0),
        theta: RationalMatrix::zeros(0, 0),
        theta_inv: RationalMatrix::zeros(0, 0),
    };
    let n = g.n_morphisms();
    let one = |t: Vec<usize>| vec![(t, Rational::one())];
    let bb = out.bb(Side::Right);
    let bb_left = out.bb(Side::Left);
    let dom = out.theta_domain();
    out.delta = RationalMatrix::from_columns(
        bb.dim(),
        (0..n).map(|x| bb.project(&one(vec![x, x]))).collect(),
    );
    out.delta_left = RationalMatrix::from_columns(
        bb_left.dim(),
        (0..n).map(|x| bb_left.project(&one(vec![x, x]))).collect(),
    );
    out.eps = RationalMatrix::from_index_map(
        g.n_objects(),
        &(0..n).map(|x| Some(g.src(x))).collect::<Vec<_>>(),
    );
    out.eps_left = RationalMatrix::from_index_map(
        g.n_objects(),
        &(0..n).map(|x| Some(g.tgt(x))).collect::<Vec<_>>(),
    );
    out.theta = RationalMatrix::from_columns(
        bb.dim(),
        (0..dom.dim())
            .map(|k| {
                let t = dom.basis_tuple(k);
                let gg = g.compose(t[0], t[1]).expect("domain pairs are composable");
                bb.project(&one(vec![gg, t[1]]))
            })
            .collect(),
    );
    out.theta_inv = RationalMatrix::from_columns(
        dom.dim(),
        (0..bb.dim())
            .map(|k| {
                let t = bb.basis_tuple(k);
                let h = g.compose(t[0], g.inv(t[1])).expect("common source pairs");
                dom.project(&one(vec![h, t[1]]))
            })
            .collect(),
    );
    out
}

impl GroupoidBialgebroid {
    /// B as a base bimodule with the given multiplication sides.
    pub fn b_as(&self, left: Mult, right: Mult) -> Bimodule {
        let g = &self.groupoid;
        let act = |m: Mult, x: usize| {
            let targets: Vec<Option<usize>> = (0..g.n_morphisms())
                .map(|h| {
                    let end = match m {
                        Mult::Left => g.tgt(h),
                        Mult::Right => g.src(h),
                    };
                    (end == x).then_some(h)
                })
                .collect();
            RationalMatrix::from_index_map(g.n_morphisms(), &targets)
        };
        Bimodule {
            base: self.r.clone(),
            labels: self.b.labels.clone(),
            left: (0..g.n_objects()).map(|x| act(left, x)).collect(),
            right: (0..g.n_objects()).map(|x| act(right, x)).collect(),
        }
    }

    /// The underlying coring bimodule of the given structure.
    pub fn carrier(&self, side: Side) -> Bimodule {
        match side {
            Side::Right => self.b_as(Mult::Right, Mult::Right),
            Side::Left => self.b_as(Mult::Left, Mult::Left),
        }
    }

    pub fn bb(&self, side: Side) -> TensorSpace {
        let c = self.carrier(side);
        TensorSpace::tensor(&[&c, &c], DEFAULT_GUARD).expect("small tensor")
    }

    /// B⊗_{R^op}B: the first factor balanced on the right against the
    /// second on the left, both by multiplication.
    pub fn theta_domain(&self) -> TensorSpace {
        let m = self.b_as(Mult::Left, Mult::Right);
        TensorSpace::tensor(&[&m, &m], DEFAULT_GUARD).expect("small tensor")
    }

    pub fn coring(&self, side: Side) -> Coring {
        let (delta, eps) = match side {
            Side::Right => (self.delta.clone(), self.eps.clone()),
            Side::Left => (self.delta_left.clone(), self.eps_left.clone()),
        };
        Coring {
            carrier: self.carrier(side),
            delta,
            eps,
        }
    }

    pub fn one(&self) -> SparseVec {
        self.b.unit.clone()
    }

    /// ξ(r) = ζ(r) as a vector in B.
    pub fn embed(&self, r: &[(usize, Rational)]) -> SparseVec {
        self.xi_zeta.apply(r)
    }

    fn mul(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> SparseVec {
        self.b.product(a, b)
    }
}

fn e(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

/// Apply a product-like map slotwise to linear combinations of pairs.
fn pair_terms(lin: &Lin) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
    lin.iter().map(|(t, c)| (t[0], t[1], c))
}

/// Check the bialgebroid axioms of the chosen side and, for the right side,
/// the ×_R-Hopf identities.
pub fn validate_hopf_axioms(bd: &GroupoidBialgebroid, side: Side) -> Report {
    let mut rep = Report::new();
    let g = &bd.groupoid;
    let n = g.n_morphisms();
    let nobj = g.n_objects();
    let coring = bd.coring(side);
    rep.merge("coring", validate_coring(&coring, DEFAULT_GUARD));
    let bmod = TensorSpace::tensor(&[&coring.carrier], DEFAULT_GUARD).expect("single factor");
    let bb = bd.bb(side);
    let delta = |x: usize| apply_on_tuple(&coring.delta, &bmod, &bb, &[x]);
    let delta_vec = |v: &[(usize, Rational)]| -> Lin {
        let mut out = Vec::new();
        for (x, c) in v {
            for (t, w) in delta(*x) {
                out.push((t, c * &w));
            }
        }
        collect_lin(out)
    };
    // products of pairs: (a⊗b)(a'⊗b') slotwise
    let pair_mul = |l: &Lin, r: &Lin| -> Lin {
        let mut out = Vec::new();
        for (a, b, c) in pair_terms(l) {
            for (a2, b2, c2) in pair_terms(r) {
                let cc = c * c2;
                for (p, v) in bd.mul(&e(a), &e(a2)) {
                    for (q, w) in bd.mul(&e(b), &e(b2)) {
                        out.push((vec![p, q], &cc * &v * &w));
                    }
                }
            }
        }
        out
    };
    let eps_vec = |v: &[(usize, Rational)]| coring.eps.apply(v);
    let one = bd.one();
    let one_one = bb.project(&pair_mul(&vec![(vec![0, 0], Rational::zero())], &vec![]));
    let _ = one_one;

    // (ii) Δ(1) = 1⊗1 and multiplicativity
    let unit_pairs: Lin = one
        .iter()
        .flat_map(|(i, c)| one.iter().map(move |(j, d)| (vec![*i, *j], c * d)))
        .collect();
    if bb.project(&delta_vec(&one)) != bb.project(&unit_pairs) {
        rep.push("coproduct unital", String::new());
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = bb.project(&delta_vec(&bd.mul(&e(x), &e(y))));
            let rhs = bb.project(&pair_mul(&delta(x), &delta(y)));
            if lhs != rhs {
                rep.push(
                    "coproduct multiplicative",
                    format!("({},{})", g.name(x), g.name(y)),
                );
            }
        }
    }
    // (iii) counit
    if eps_vec(&one) != bd.r.unit {
        rep.push("counit unital", String::new());
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = eps_vec(&bd.mul(&e(x), &e(y)));
            let rhs = match side {
                Side::Right => eps_vec(&bd.mul(&bd.embed(&eps_vec(&e(x))), &e(y))),
                Side::Left => eps_vec(&bd.mul(&e(x), &bd.embed(&eps_vec(&e(y))))),
            };
            if lhs != rhs {
                rep.push(
                    "counit multiplicative",
                    format!("({},{})", g.name(x), g.name(y)),
                );
            }
        }
    }
    // (i) Takeuchi condition
    for x in 0..n {
        for r in 0..nobj {
            let er = bd.embed(&e(r));
            let d = delta(x);
            let (lhs, rhs): (Lin, Lin) = match side {
                Side::Right => (
                    slot_mul(bd, &d, 0, &er, true),
                    slot_mul(bd, &d, 1, &er, true),
                ),
                Side::Left => (
                    slot_mul(bd, &d, 0, &er, false),
                    slot_mul(bd, &d, 1, &er, false),
                ),
            };
            if bb.project(&lhs) != bb.project(&rhs) {
                rep.push(
                    "Takeuchi condition",
                    format!("({},{})", g.name(x), g.objects[r]),
                );
            }
        }
    }
    // module compatibility of the coproduct
    for x in 0..n {
        for r1 in 0..nobj {
            for r2 in 0..nobj {
                for r3 in 0..nobj {
                    for r4 in 0..nobj {
                        let (a1, a2, a3, a4) = (
                            bd.embed(&e(r1)),
                            bd.embed(&e(r2)),
                            bd.embed(&e(r3)),
                            bd.embed(&e(r4)),
                        );
                        let arg = bd.mul(&bd.mul(&bd.mul(&bd.mul(&a1, &a2), &e(x)), &a3), &a4);
                        let lhs = bb.project(&delta_vec(&arg));
                        let d = delta(x);
                        let rhs = match side {
                            Side::Right => {
                                // ζ(r2) b⁽¹⁾ ζ(r4) ⊗ ξ(r1) b⁽²⁾ ξ(r3)
                                let t =
                                    slot_mul(bd, &slot_mul(bd, &d, 0, &a2, true), 0, &a4, false);
                                slot_mul(bd, &slot_mul(bd, &t, 1, &a1, true), 1, &a3, false)
                            }
                            Side::Left => {
                                // ξ(r1) b₍₁₎ ξ(r3) ⊗ ζ(r2) b₍₂₎ ζ(r4)
                                let t =
                                    slot_mul(bd, &slot_mul(bd, &d, 0, &a1, true), 0, &a3, false);
                                slot_mul(bd, &slot_mul(bd, &t, 1, &a2, true), 1, &a4, false)
                            }
                        };
                        if lhs != bb.project(&rhs) {
                            rep.push(
                                "coproduct module compatibility",
                                format!("({},{},{},{},{})", g.name(x), r1, r2, r3, r4),
                            );
                        }
                    }
                }
            }
        }
    }
    if side == Side::Right {
        hopf_identities(bd, &mut rep);
    }
    rep
}

/// Multiply slot `k` of every pair by `a`, from the left if `left`.
fn slot_mul(
    bd: &GroupoidBialgebroid,
    lin: &Lin,
    k: usize,
    a: &[(usize, Rational)],
    left: bool,
) -> Lin {
    let mut out = Vec::new();
    for (t, c) in lin {
        let v = if left {
            bd.mul(a, &e(t[k]))
        } else {
            bd.mul(&e(t[k]), a)
        };
        for (i, w) in v {
            let mut u = t.clone();
            u[k] = i;
            out.push((u, c * &w));
        }
    }
    out
}

fn hopf_identities(bd: &GroupoidBialgebroid, rep: &mut Report) {
    let g = &bd.groupoid;
    let n = g.n_morphisms();
    let dom = bd.theta_domain();
    let bb = bd.bb(Side::Right);
    let right = bd.b_as(Mult::Right, Mult::Right);
    let mixed = bd.b_as(Mult::Left, Mult::Right);
    let single = TensorSpace::tensor(&[&right], DEFAULT_GUARD).expect("single factor");

    // bijectivity
    let td = bd.theta.mul(&bd.theta_inv);
    let dt = bd.theta_inv.mul(&bd.theta);
    if bd.theta.shape() != (bb.dim(), dom.dim()) || bd.theta_inv.shape() != (dom.dim(), bb.dim()) {
        rep.push("theta shape", format!("{:?}", bd.theta.shape()));
        return;
    }
    if !td.is_identity() || !dt.is_identity() || inverse(&bd.theta).is_none() {
        rep.push(
            "theta bijective",
            "θ∘θ⁻¹ or θ⁻¹∘θ differs from the identity".into(),
        );
    }
    let delta = |x: usize| apply_on_tuple(&bd.delta, &single, &bb, &[x]);
    // θ agrees with b⊗b' ↦ b b'⁽¹⁾ ⊗ b'⁽²⁾
    for k in 0..dom.dim() {
        let t = dom.basis_tuple(k);
        let formula = bb.project(&slot_mul(bd, &delta(t[1]), 0, &e(t[0]), true));
        if bd.theta.column(k) != formula.as_slice() {
            rep.push(
                "theta formula",
                format!("({},{})", g.name(t[0]), g.name(t[1])),
            );
        }
    }
    let one = bd.one();
    // b₋⊗b₊ as pairs in the domain
    let mp_vec = |v: &[(usize, Rational)]| -> Lin {
        let mut arg = Vec::new();
        for (i, c) in &one {
            for (j, d) in v {
                arg.push((vec![*i, *j], c * d));
            }
        }
        dom.lift(&bd.theta_inv.apply(&bb.project(&arg)))
    };
    let mp = |x: usize| mp_vec(&e(x));
    let one_x = |x: usize| -> Lin { one.iter().map(|(i, c)| (vec![*i, x], c.clone())).collect() };
    for x in 0..n {
        let name = g.name(x).to_string();
        // (i) b₋ b₊⁽¹⁾ ⊗ b₊⁽²⁾ = 1 ⊗ b
        let mut lhs = Vec::new();
        for (t, c) in mp(x) {
            for (u, v) in slot_mul(bd, &delta(t[1]), 0, &e(t[0]), true) {
                lhs.push((u, &c * &v));
            }
        }
        if bb.project(&lhs) != bb.project(&one_x(x)) {
            rep.push("identity (i)", name.clone());
        }
        // (ii) b⁽¹⁾ b⁽²⁾₋ ⊗ b⁽²⁾₊ = 1 ⊗ b
        let mut lhs = Vec::new();
        for (t, c) in delta(x) {
            for (u, v) in slot_mul(bd, &mp(t[1]), 0, &e(t[0]), true) {
                lhs.push((u, &c * &v));
            }
        }
        if dom.project(&lhs) != dom.project(&one_x(x)) {
            rep.push("identity (ii)", name.clone());
        }
        // (iii) (bb')₋ ⊗ (bb')₊ = b'₋ b₋ ⊗ b₊ b'₊
        for y in 0..n {
            let lhs = dom.project(&mp_vec(&bd.mul(&e(x), &e(y))));
            let mut rhs = Vec::new();
            for (t, c) in mp(x) {
                for (u, d) in mp(y) {
                    for (p, v) in bd.mul(&e(u[0]), &e(t[0])) {
                        for (q, w) in bd.mul(&e(t[1]), &e(u[1])) {
                            rhs.push((vec![p, q], &c * &d * &v * &w));
                        }
                    }
                }
            }
            if lhs != dom.project(&rhs) {
                rep.push("identity (iii)", format!("({},{})", name, g.name(y)));
            }
        }
        // (v) b₋ ⊗ b₊⁽¹⁾ ⊗ b₊⁽²⁾ = b⁽¹⁾₋ ⊗ b⁽¹⁾₊ ⊗ b⁽²⁾ in B⊗_{R^op}B⊗_R B
        let v_space = TensorSpace::tensor(
            &[
                &mixed,
                &bd.b_as(Mult::Left, Mult::Right),
                &bd.b_as(Mult::Right, Mult::Right),
            ],
            DEFAULT_GUARD,
        )
        .expect("small tensor");
        let mut lhs = Vec::new();
        for (t, c) in mp(x) {
            for (u, v) in delta(t[1]) {
                lhs.push((vec![t[0], u[0], u[1]], &c * &v));
            }
        }
        let mut rhs = Vec::new();
        for (t, c) in delta(x) {
            for (u, v) in mp(t[0]) {
                rhs.push((vec![u[0], u[1], t[1]], &c * &v));
            }
        }
        if v_space.project(&lhs) != v_space.project(&rhs) {
            rep.push("identity (v)", name.clone());
        }
        // (vi) b₋⁽¹⁾ ⊗ b₋⁽²⁾ ⊗ b₊ = b₊₋ ⊗ b₋ ⊗ b₊₊ in B⊗_R B⊗_{R^op}B
        let vi_space = TensorSpace::tensor(
            &[
                &bd.b_as(Mult::Right, Mult::Right),
                &bd.b_as(Mult::Right, Mult::Right),
                &mixed,
            ],
            DEFAULT_GUARD,
        )
        .expect("small tensor");
        let mut lhs = Vec::new();
        for (t, c) in mp(x) {
            for (u, v) in delta(t[0]) {
                lhs.push((vec![u[0], u[1], t[1]], &c * &v));
            }
        }
        let mut rhs = Vec::new();
        for (t, c) in mp(x) {
            for (u, v) in mp(t[1]) {
                rhs.push((vec![u[0], t[0], u[1]], &c * &v));
            }
        }
        if vi_space.project(&lhs) != vi_space.project(&rhs) {
            rep.push("identity (vi)", name.clone());
        }
        // (vii) b = ζ(ε(b₋)) b₊
        let mut acc = Vec::new();
        for (t, c) in mp(x) {
            let z = bd.embed(&bd.eps.apply(&e(t[0])));
            for (k, v) in bd.mul(&z, &e(t[1])) {
                acc.push((k, &c * &v));
            }
        }
        if normalize(acc) != e(x) {
            rep.push("identity (vii)", name.clone());
        }
        // (viii) b₋ b₊ = ξ(ε(b))
        let mut acc = Vec::new();
        for (t, c) in mp(x) {
            for (k, v) in bd.mul(&e(t[0]), &e(t[1])) {
                acc.push((k, &c * &v));
            }
        }
        if normalize(acc) != bd.embed(&bd.eps.apply(&e(x))) {
            rep.push("identity (viii)", name.clone());
        }
        // (ix) ζ(r) b₋ ⊗ b₊ = b₋ ⊗ b₊ ζ(r)
        for r in 0..g.n_objects() {
            let z = bd.embed(&e(r));
            let lhs = slot_mul(bd, &mp(x), 0, &z, true);
            let rhs = slot_mul(bd, &mp(x), 1, &z, false);
            if dom.project(&lhs) != dom.project(&rhs) {
                rep.push("identity (ix)", format!("({},{})", name, g.objects[r]));
            }
        }
    }
    // (iv) 1₋ ⊗ 1₊ = 1 ⊗ 1
    let unit_pairs: Lin = one
        .iter()
        .flat_map(|(i, c)| one.iter().map(move |(j, d)| (vec![*i, *j], c * d)))
        .collect();
    if dom.project(&mp_vec(&one)) != dom.project(&unit_pairs) {
        rep.push("identity (iv)", String::new());
    }
}

/// An adjoint orbit of loops with its centralizer data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// First loop of the orbit in input order.
    pub transversal: usize,
    pub members: Vec<usize>,
    /// Loops at the transversal's object commuting with it.
    pub centralizer: Vec<usize>,
    /// For each member `l'`, the first morphism `h` (input order) with
    /// source at the transversal's object and `h l h⁻¹ = l'`.
    pub coset_reps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopData {
    pub loops: Vec<usize>,
    pub orbits: Vec<Orbit>,
    /// `sources[x]`: morphisms with source `x`.
    pub sources: Vec<Vec<usize>>,
}

impl LoopData {
    pub fn orbit_of(&self, l: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.members.contains(&l))
    }
}

pub fn loops_orbits(g: &FinGroupoid) -> LoopData {
    let loops = g.loops();
    let mut seen = vec![false; g.n_morphisms()];
    let mut orbits = Vec::new();
    for &l in &loops {
        if seen[l] {
            continue;
        }
        let x = g.src(l);
        let mut members = Vec::new();
        let mut coset_reps = Vec::new();
        for h in g.from_source(x) {
            let c = g.conjugate(h, l).expect("source matches");
            if !members.contains(&c) {
                members.push(c);
                coset_reps.push(h);
            }
        }
        // members in input order, reps permuted alongside
        let mut pairs: Vec<(usize, usize)> = members.into_iter().zip(coset_reps).collect();
        pairs.sort_unstable();
        for &(m, _) in &pairs {
            seen[m] = true;
        }
        let centralizer = g
            .from_source(x)
            .into_iter()
            .filter(|&h| g.is_loop(h) && g.conjugate(h, l) == Some(l))
            .collect();
        orbits.push(Orbit {
            transversal: l,
            members: pairs.iter().map(|p| p.0).collect(),
            centralizer,
            coset_reps: pairs.iter().map(|p| p.1).collect(),
        });
    }
    let sources = (0..g.n_objects()).map(|x| g.from_source(x)).collect();
    LoopData {
        loops,
        orbits,
        sources,
    }
}

/// Freeness of `B(src l)` over the centralizer algebra: the coset
/// representatives times the centralizer enumerate `B(src l)` exactly once.
pub fn check_orbit_freeness(g: &FinGroupoid, o: &Orbit) -> bool {
    let x = g.src(o.transversal);
    let bx = g.from_source(x);
    if o.coset_reps.len() * o.centralizer.len() != bx.len() {
        return false;
    }
    let mut hit = vec![0usize; g.n_morphisms()];
    for &h in &o.coset_reps {
        for &c in &o.centralizer {
            match g.compose(h, c) {
                Some(hc) => hit[hc] += 1,
                None => return false,
            }
        }
    }
    bx.iter().all(|&m| hit[m] == 1)
}

/// A finite group acting on the left of a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    pub group: FinGroupoid,
    pub set: Vec<String>,
    /// `action[g * |set| + x] = g·x`.
    action: Vec<usize>,
}

impl GSet {
    pub fn new(
        group: FinGroupoid,
        set: Vec<String>,
        action: &[(usize, usize, usize)],
    ) -> Result<Self, GroupoidError> {
        if group.n_objects() != 1 {
            return Err(GroupoidError::BadAction(
                "group must have exactly one object".into(),
            ));
        }
        let ns = set.len();
        let ng = group.n_morphisms();
        let mut table = vec![usize::MAX; ng * ns];
        for &(g, x, gx) in action {
            table[g * ns + x] = gx;
        }
        if let Some(k) = table.iter().position(|&v| v == usize::MAX) {
            return Err(GroupoidError::BadAction(format!(
                "missing action of {} on {}",
                group.name(k / ns),
                set[k % ns]
            )));
        }
        let e = group.id(0);
        for x in 0..ns {
            if table[e * ns + x] != x {
                return Err(GroupoidError::BadAction(format!(
                    "identity moves {}",
                    set[x]
                )));
            }
            for a in 0..ng {
                for b in 0..ng {
                    let ab = group.compose(a, b).expect("group");
                    if table[a * ns + table[b * ns + x]] != table[ab * ns + x] {
                        return Err(GroupoidError::BadAction(format!(
                            "({},{}) on {}",
                            group.name(a),
                            group.name(b),
                            set[x]
                        )));
                    }
                }
            }
        }
        Ok(GSet {
            group,
            set,
            action: table,
        })
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.set.len() + x]
    }

    /// ℤ/2 swapping two points.
    pub fn swap() -> Self {
        let g = FinGroupoid::cyclic_group(2);
        GSet::new(
            g,
            vec!["a".into(), "b".into()],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
        )
        .expect("swap")
    }

    /// ℤ/2 acting trivially on two points.
    pub fn trivial_pair() -> Self {
        let g = FinGroupoid::cyclic_group(2);
        GSet::new(
            g,
            vec!["a".into(), "b".into()],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)],
        )
        .expect("trivial")
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    elements: Vec<String>,
    mul: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize)]
struct GSetJson {
    group: GroupJson,
    set: Vec<String>,
    action: Vec<(String, String, String)>,
}

impl GSet {
    pub fn from_json_str(s: &str) -> Result<Self, String> {
        let j: GSetJson = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let el = |s: &str| {
            j.group
                .elements
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| format!("unknown element {s}"))
        };
        let pt = |s: &str| {
            j.set
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| format!("unknown point {s}"))
        };
        let mul = j
            .group
            .mul
            .iter()
            .map(|(a, b, c)| Ok((el(a)?, el(b)?, el(c)?)))
            .collect::<Result<Vec<_>, String>>()?;
        let group = FinGroupoid::from_group(&j.group.elements, &mul).map_err(|e| e.to_string())?;
        let action = j
            .action
            .iter()
            .map(|(g, x, y)| Ok((el(g)?, pt(x)?, pt(y)?)))
            .collect::<Result<Vec<_>, String>>()?;
        GSet::new(group, j.set.clone(), &action).map_err(|e| e.to_string())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let g = &self.group;
        let elements: Vec<String> = (0..g.n_morphisms())
            .map(|i| g.name(i).to_string())
            .collect();
        let mut mul = Vec::new();
        for a in 0..g.n_morphisms() {
            for b in 0..g.n_morphisms() {
                mul.push((
                    elements[a].clone(),
                    elements[b].clone(),
                    elements[g.compose(a, b).expect("group")].clone(),
                ));
            }
        }
        let mut action = Vec::new();
        for a in 0..g.n_morphisms() {
            for x in 0..self.set.len() {
                action.push((
                    elements[a].clone(),
                    self.set[x].clone(),
                    self.set[self.act(a, x)].clone(),
                ));
            }
        }
        serde_json::to_value(GSetJson {
            group: GroupJson { elements, mul },
            set: self.set.clone(),
            action,
        })
        .expect("serializable")
    }
}

/// Result of comparing the action groupoid algebra with the twisted
/// semigroup algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub is_cocycle: bool,
    pub normalized: bool,
    pub algebras_equal: bool,
}

/// The action groupoid: objects the set, morphisms `(x, g): x → g·x`.
pub fn action_groupoid(gs: &GSet) -> (FinGroupoid, CocycleReport) {
    let g = &gs.group;
    let ns = gs.set.len();
    let ng = g.n_morphisms();
    // morphism (x, g) has index x * ng + g
    let idx = |x: usize, a: usize| x * ng + a;
    let morphisms: Vec<Morphism> = (0..ns * ng)
        .map(|k| {
            let (x, a) = (k / ng, k % ng);
            Morphism {
                name: format!("({},{})", gs.set[x], g.name(a)),
                src: x,
                tgt: gs.act(a, x),
            }
        })
        .collect();
    let identities = (0..ns).map(|x| idx(x, g.id(0))).collect();
    let mut compose = Vec::new();
    for x in 0..ns {
        for a in 0..ng {
            for y in 0..ns {
                for b in 0..ng {
                    // (x,a)∘(y,b) = (y, ab) when x = b·y
                    if x == gs.act(b, y) {
                        compose.push((
                            idx(x, a),
                            idx(y, b),
                            idx(y, g.compose(a, b).expect("group")),
                        ));
                    }
                }
            }
        }
    }
    let gpd = FinGroupoid::new(gs.set.clone(), morphisms, identities, &compose)
        .expect("action groupoid is valid");

    // ω((x,g),(y,h)) = 1 iff h·y = x; semigroup product (x,g)(y,h) = (y,gh)
    let n = ns * ng;
    let omega = |p: usize, q: usize| -> i64 { i64::from(gs.act(q % ng, q / ng) == p / ng) };
    let smul = |p: usize, q: usize| idx(q / ng, g.compose(p % ng, q % ng).expect("group"));
    let mut is_cocycle = true;
    for p1 in 0..n {
        for p2 in 0..n {
            for p3 in 0..n {
                if omega(p1, p2) * omega(smul(p1, p2), p3)
                    != omega(p2, p3) * omega(p1, smul(p2, p3))
                {
                    is_cocycle = false;
                }
            }
        }
    }
    let units: Vec<usize> = (0..ns).map(|x| idx(x, g.id(0))).collect();
    let mut normalized = true;
    for p in 0..n {
        for q in 0..n {
            let delta = i64::from(p == q);
            let left: i64 = units
                .iter()
                .filter(|&&u| smul(u, p) == q)
                .map(|&u| omega(u, p))
                .sum();
            let right: i64 = units
                .iter()
                .filter(|&&u| smul(p, u) == q)
                .map(|&u| omega(p, u))
                .sum();
            if left != delta || right != delta {
                normalized = false;
            }
        }
    }
    let alg = gpd.algebra();
    let algebras_equal = (0..n).all(|p| {
        (0..n).all(|q| {
            let twisted: SparseVec = if omega(p, q) == 0 {
                vec![]
            } else {
                vec![(smul(p, q), Rational::from_int(omega(p, q)))]
            };
            *alg.mul_basis(p, q) == twisted
        })
    }) && alg.unit
        == units
            .iter()
            .map(|&u| (u, Rational::one()))
            .collect::<SparseVec>();
    (
        gpd,
        CocycleReport {
            is_cocycle,
            normalized,
            algebras_equal,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_groupoid_is_rejected() {
        assert_eq!(
            FinGroupoid::new(vec![], vec![], vec![], &[]),
            Err(GroupoidError::NoObjects)
        );
    }

    #[test]
    fn c2_theta_value() {
        let g = FinGroupoid::cyclic_group(2);
        let bd = build_bialgebroid(&g);
        assert_eq!((bd.b.dim(), bd.r.dim()), (2, 1));
        let dom = bd.theta_domain();
        let bb = bd.bb(Side::Right);
        let k = (0..dom.dim())
            .find(|&k| dom.basis_tuple(k) == vec![1, 1])
            .unwrap();
        let img = bb.lift(bd.theta.column(k));
        assert_eq!(img, vec![(vec![0, 1], Rational::one())]);
    }

    #[test]
    fn pair_groupoid_unit() {
        let g = FinGroupoid::pair(2);
        let bd = build_bialgebroid(&g);
        assert_eq!(bd.b.dim(), 4);
        let names: Vec<&str> = bd.b.unit.iter().map(|(i, _)| g.name(*i)).collect();
        assert_eq!(names, vec!["id_a", "id_b"]);
    }

    #[test]
    fn axioms_hold_on_both_sides() {
        for g in [
            FinGroupoid::cyclic_group(2),
            FinGroupoid::pair(2),
            FinGroupoid::symmetric3(),
        ] {
            let bd = build_bialgebroid(&g);
            let r = validate_hopf_axioms(&bd, Side::Right);
            assert!(r.is_ok(), "{:?}", r);
            let l = validate_hopf_axioms(&bd, Side::Left);
            assert!(l.is_ok(), "{:?}", l);
        }
    }

    #[test]
    fn zeroed_theta_entry_is_caught() {
        let bd0 = build_bialgebroid(&FinGroupoid::pair(2));
        let mut bd = bd0.clone();
        let (r, c) = (0..bd.theta.cols())
            .find_map(|c| bd.theta.column(c).first().map(|(r, _)| (*r, c)))
            .unwrap();
        bd.theta.set(r, c, Rational::zero());
        assert!(validate_hopf_axioms(&bd, Side::Right).has("theta bijective"));
    }

    #[test]
    fn orbit_data() {
        let i2 = loops_orbits(&FinGroupoid::pair(2));
        assert_eq!(i2.loops.len(), 2);
        assert_eq!(i2.orbits.len(), 1);
        assert_eq!(i2.orbits[0].centralizer.len(), 1);
        assert_eq!(i2.sources[0].len(), 2);
        let c2 = loops_orbits(&FinGroupoid::cyclic_group(2));
        assert_eq!(c2.orbits.len(), 2);
        assert!(c2.orbits.iter().all(|o| o.centralizer.len() == 2));
        let s3g = FinGroupoid::symmetric3();
        let s3 = loops_orbits(&s3g);
        let orders: Vec<usize> = s3.orbits.iter().map(|o| o.centralizer.len()).collect();
        assert_eq!(orders, vec![6, 2, 3]);
        for o in &s3.orbits {
            assert!(check_orbit_freeness(&s3g, o));
        }
    }

    #[test]
    fn action_groupoids() {
        let (swap, rep) = action_groupoid(&GSet::swap());
        assert!(rep.is_cocycle && rep.normalized && rep.algebras_equal);
        assert!(swap.is_isomorphic(&FinGroupoid::pair(2)));
        let (triv, rep) = action_groupoid(&GSet::trivial_pair());
        assert!(rep.is_cocycle && rep.normalized && rep.algebras_equal);
        assert_eq!(triv.components().len(), 2);
        let one = FinGroupoid::from_group(&["e".to_string()], &[(0, 0, 0)]).unwrap();
        let gs = GSet::new(one.clone(), vec!["a".into()], &[(0, 0, 0)]).unwrap();
        let (pt, _) = action_groupoid(&gs);
        assert!(pt.is_isomorphic(&one));
    }

    #[test]
    fn json_round_trip_and_missing_composite() {
        let g = FinGroupoid::symmetric3();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(FinGroupoid::from_json_str(&s).unwrap(), g);
        let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
        v["compose"].as_array_mut().unwrap().pop();
        let err = groupoid_json_error(&v.to_string()).unwrap();
        assert!(matches!(err, GroupoidError::MissingComposite(_, _)));
        let gs = GSet::swap();
        assert_eq!(
            GSet::from_json_str(&gs.to_json_value().to_string()).unwrap(),
            gs
        );
    }
}
