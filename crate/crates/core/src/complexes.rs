//! Chain complexes, para-(co)cyclic modules and the Hochschild and Connes
//! λ-complexes built from them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::qlinalg::{quotient_by_rows, rank, QuotientSpace, Rational, RationalMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("boundary composite d_{degree}∘d_{} is nonzero", degree + 1)]
    NotAComplex { degree: usize },
    #[error("induced boundary on the λ-quotient is not well defined in degree {degree}")]
    IllDefinedBoundary { degree: usize },
    #[error("missing operators: {0}")]
    Missing(&'static str),
    #[error("shape mismatch in degree {degree}: {what}")]
    Shape { degree: usize, what: String },
}

/// A bounded chain complex `dims[0] ← dims[1] ← … ← dims[max_degree]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    /// `boundaries[n - 1]` is `d_n`, a `dims[n-1] × dims[n]` matrix.
    pub boundaries: Vec<RationalMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<RationalMatrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() || boundaries.len() + 1 != dims.len() {
            return Err(ComplexError::Shape {
                degree: 0,
                what: "need one boundary per positive degree".into(),
            });
        }
        for (k, d) in boundaries.iter().enumerate() {
            let n = k + 1;
            if d.shape() != (dims[n - 1], dims[n]) {
                return Err(ComplexError::Shape {
                    degree: n,
                    what: format!("boundary shape {:?}", d.shape()),
                });
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn boundary(&self, n: usize) -> &RationalMatrix {
        &self.boundaries[n - 1]
    }

    /// First degree `n` with `d_n ∘ d_{n+1} ≠ 0`.
    pub fn check_square_zero(&self) -> Result<(), ComplexError> {
        for n in 1..self.max_degree() {
            if !self.boundary(n).mul(self.boundary(n + 1)).is_zero() {
                return Err(ComplexError::NotAComplex { degree: n });
            }
        }
        Ok(())
    }
}

/// Homology dimensions in degrees `0..max_degree`.
pub fn homology_dims(c: &ChainComplex) -> Result<Vec<usize>, ComplexError> {
    c.check_square_zero()?;
    let ranks: Vec<usize> = c.boundaries.iter().map(rank).collect();
    let rank_of = |n: usize| {
        if n == 0 || n > ranks.len() {
            0
        } else {
            ranks[n - 1]
        }
    };
    Ok((0..c.max_degree())
        .map(|n| c.dims[n] - rank_of(n) - rank_of(n + 1))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Para,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Hochschild,
    ConnesLambda,
}

/// One violated identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub degree: usize,
    pub identity: String,
    /// Largest absolute numerator of the residual matrix.
    #[serde(serialize_with = "ser_bigint")]
    pub residual: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

struct Checker {
    out: Vec<Violation>,
}

impl Checker {
    fn eq(&mut self, degree: usize, identity: String, lhs: &RationalMatrix, rhs: &RationalMatrix) {
        if lhs.shape() != rhs.shape() {
            self.out.push(Violation {
                degree,
                identity: format!("{identity} (shape)"),
                residual: BigInt::from(-1),
            });
            return;
        }
        let r = lhs.sub(rhs);
        if !r.is_zero() {
            self.out.push(Violation {
                degree,
                identity,
                residual: r.max_abs_numerator(),
            });
        }
    }
}

/// Simplicial module with faces, optional degeneracies and an optional
/// para-cyclic operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaCyclicModule {
    pub dims: Vec<usize>,
    /// `faces[n][k] = d_k : X_n → X_{n-1}`, `0 ≤ k ≤ n`; `faces[0]` is empty.
    pub faces: Vec<Vec<RationalMatrix>>,
    /// `degeneracies[n][k] = s_k : X_n → X_{n+1}`, `0 ≤ k ≤ n`, for `n < max_degree`.
    pub degeneracies: Option<Vec<Vec<RationalMatrix>>>,
    /// `cyclic[n] = t_n : X_n → X_n`.
    pub cyclic: Option<Vec<RationalMatrix>>,
}

/// Cosimplicial module with cofaces, codegeneracies and a para-cocyclic operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaCocyclicModule {
    pub dims: Vec<usize>,
    /// `cofaces[n][k] = d_k : X^{n-1} → X^n`, `0 ≤ k ≤ n`; `cofaces[0]` is empty.
    pub cofaces: Vec<Vec<RationalMatrix>>,
    /// `codegeneracies[n][k] = s_k : X^{n+1} → X^n`, `0 ≤ k ≤ n`, for `n < max_degree`.
    pub codegeneracies: Vec<Vec<RationalMatrix>>,
    /// `cocyclic[n] = w_n : X^n → X^n`.
    pub cocyclic: Vec<RationalMatrix>,
}

impl ParaCyclicModule {
    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// The constant cyclic module: every space one-dimensional and every
    /// operator the identity.
    pub fn trivial(max_degree: usize) -> Self {
        let one = || RationalMatrix::identity(1);
        ParaCyclicModule {
            dims: vec![1; max_degree + 1],
            faces: (0..=max_degree)
                .map(|n| {
                    if n == 0 {
                        vec![]
                    } else {
                        (0..=n).map(|_| one()).collect()
                    }
                })
                .collect(),
            degeneracies: Some(
                (0..max_degree)
                    .map(|n| (0..=n).map(|_| one()).collect())
                    .collect(),
            ),
            cyclic: Some((0..=max_degree).map(|_| one()).collect()),
        }
    }

    fn hochschild_boundary(&self, n: usize) -> RationalMatrix {
        let mut b = RationalMatrix::zeros(self.dims[n - 1], self.dims[n]);
        for (k, d) in self.faces[n].iter().enumerate() {
            b = b.combine(d, &Rational::from_int(if k % 2 == 0 { 1 } else { -1 }));
        }
        b
    }
}

/// Check the simplicial identities and, when present, the para-cyclic
/// compatibilities; mode `Cyclic` also requires `t_n^{n+1} = id`.
pub fn validate_paracyclic(m: &ParaCyclicModule, mode: Mode) -> Vec<Violation> {
    let mut ck = Checker { out: Vec::new() };
    let top = m.max_degree();
    let d = |n: usize, k: usize| &m.faces[n][k];
    for n in 2..=top {
        for j in 1..=n {
            for i in 0..j {
                ck.eq(
                    n,
                    format!("d{i}∘d{j}=d{}∘d{i}", j - 1),
                    &d(n - 1, i).mul(d(n, j)),
                    &d(n - 1, j - 1).mul(d(n, i)),
                );
            }
        }
    }
    if let Some(degs) = &m.degeneracies {
        let s = |n: usize, k: usize| &degs[n][k];
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    ck.eq(
                        n,
                        format!("s{i}∘s{j}=s{}∘s{i}", j + 1),
                        &s(n + 1, i).mul(s(n, j)),
                        &s(n + 1, j + 1).mul(s(n, i)),
                    );
                }
            }
        }
        for n in 0..top {
            let id = RationalMatrix::identity(m.dims[n]);
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = d(n + 1, i).mul(s(n, j));
                    if i == j || i == j + 1 {
                        ck.eq(n, format!("d{i}∘s{j}=id"), &lhs, &id);
                    } else if i < j {
                        ck.eq(
                            n,
                            format!("d{i}∘s{j}=s{}∘d{i}", j - 1),
                            &lhs,
                            &s(n - 1, j - 1).mul(d(n, i)),
                        );
                    } else {
                        ck.eq(
                            n,
                            format!("d{i}∘s{j}=s{j}∘d{}", i - 1),
                            &lhs,
                            &s(n - 1, j).mul(d(n, i - 1)),
                        );
                    }
                }
            }
        }
    }
    if let Some(ts) = &m.cyclic {
        let t = |n: usize| &ts[n];
        for n in 1..=top {
            ck.eq(n, "d0∘t=dn".into(), &d(n, 0).mul(t(n)), d(n, n));
            for k in 1..=n {
                ck.eq(
                    n,
                    format!("d{k}∘t=t∘d{}", k - 1),
                    &d(n, k).mul(t(n)),
                    &t(n - 1).mul(d(n, k - 1)),
                );
            }
        }
        if let Some(degs) = &m.degeneracies {
            let s = |n: usize, k: usize| &degs[n][k];
            for n in 0..top {
                ck.eq(
                    n,
                    "s0∘t=t²∘sn".into(),
                    &s(n, 0).mul(t(n)),
                    &t(n + 1).mul(t(n + 1)).mul(s(n, n)),
                );
                for k in 1..=n {
                    ck.eq(
                        n,
                        format!("s{k}∘t=t∘s{}", k - 1),
                        &s(n, k).mul(t(n)),
                        &t(n + 1).mul(s(n, k - 1)),
                    );
                }
            }
        }
        for n in 0..=top {
            if rank(t(n)) != m.dims[n] {
                ck.out.push(Violation {
                    degree: n,
                    identity: "t invertible".into(),
                    residual: BigInt::from(0),
                });
            }
            if mode == Mode::Cyclic {
                ck.eq(
                    n,
                    "t^(n+1)=id".into(),
                    &t(n).pow(n + 1),
                    &RationalMatrix::identity(m.dims[n]),
                );
            }
        }
    } else if mode == Mode::Cyclic {
        ck.out.push(Violation {
            degree: 0,
            identity: "cyclic operator missing".into(),
            residual: BigInt::from(0),
        });
    }
    ck.out
}

impl ParaCocyclicModule {
    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }
}

/// Check the cosimplicial identities and the para-cocyclic compatibilities;
/// mode `Cyclic` also requires `w_n^{n+1} = id`.
pub fn validate_paracocyclic(m: &ParaCocyclicModule, mode: Mode) -> Vec<Violation> {
    let mut ck = Checker { out: Vec::new() };
    let top = m.max_degree();
    let d = |n: usize, k: usize| &m.cofaces[n][k];
    let s = |n: usize, k: usize| &m.codegeneracies[n][k];
    let w = |n: usize| &m.cocyclic[n];
    for n in 2..=top {
        for j in 1..=n {
            for i in 0..j {
                ck.eq(
                    n,
                    format!("d{j}∘d{i}=d{i}∘d{}", j - 1),
                    &d(n, j).mul(d(n - 1, i)),
                    &d(n, i).mul(d(n - 1, j - 1)),
                );
            }
        }
    }
    for n in 0..top.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                ck.eq(
                    n,
                    format!("s{j}∘s{i}=s{i}∘s{}", j + 1),
                    &s(n, j).mul(s(n + 1, i)),
                    &s(n, i).mul(s(n + 1, j + 1)),
                );
            }
        }
    }
    for n in 0..top {
        let id = RationalMatrix::identity(m.dims[n]);
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = s(n, j).mul(d(n + 1, i));
                if i == j || i == j + 1 {
                    ck.eq(n, format!("s{j}∘d{i}=id"), &lhs, &id);
                } else if i < j {
                    ck.eq(
                        n,
                        format!("s{j}∘d{i}=d{i}∘s{}", j - 1),
                        &lhs,
                        &d(n, i).mul(s(n - 1, j - 1)),
                    );
                } else {
                    ck.eq(
                        n,
                        format!("s{j}∘d{i}=d{}∘s{j}", i - 1),
                        &lhs,
                        &d(n, i - 1).mul(s(n - 1, j)),
                    );
                }
            }
        }
    }
    for n in 1..=top {
        ck.eq(n, "w∘d0=dn".into(), &w(n).mul(d(n, 0)), d(n, n));
        for k in 1..=n {
            ck.eq(
                n,
                format!("w∘d{k}=d{}∘w", k - 1),
                &w(n).mul(d(n, k)),
                &d(n, k - 1).mul(w(n - 1)),
            );
        }
    }
    for n in 0..top {
        ck.eq(
            n,
            "w∘s0=sn∘w²".into(),
            &w(n).mul(s(n, 0)),
            &s(n, n).mul(&w(n + 1).mul(w(n + 1))),
        );
        for k in 1..=n {
            ck.eq(
                n,
                format!("w∘s{k}=s{}∘w", k - 1),
                &w(n).mul(s(n, k)),
                &s(n, k - 1).mul(w(n + 1)),
            );
        }
    }
    for n in 0..=top {
        if rank(w(n)) != m.dims[n] {
            ck.out.push(Violation {
                degree: n,
                identity: "w invertible".into(),
                residual: BigInt::from(0),
            });
        }
        if mode == Mode::Cyclic {
            ck.eq(
                n,
                "w^(n+1)=id".into(),
                &w(n).pow(n + 1),
                &RationalMatrix::identity(m.dims[n]),
            );
        }
    }
    ck.out
}

/// λ-coinvariants of every degree: the quotient by the image of `id − (−1)^n t_n`.
pub fn lambda_quotients(m: &ParaCyclicModule) -> Result<Vec<QuotientSpace>, ComplexError> {
    let ts = m
        .cyclic
        .as_ref()
        .ok_or(ComplexError::Missing("cyclic operators"))?;
    Ok((0..=m.max_degree())
        .map(|n| {
            let sign = Rational::from_int(if n % 2 == 0 { -1 } else { 1 });
            let rel = RationalMatrix::identity(m.dims[n]).combine(&ts[n], &sign);
            let rows: Vec<SparseVec> = rel.columns().to_vec();
            quotient_by_rows(m.dims[n], &rows)
        })
        .collect())
}

/// Hochschild complex (`b = Σ (−1)^k d_k`) or Connes' λ-complex.
pub fn to_complex(m: &ParaCyclicModule, variant: Variant) -> Result<ChainComplex, ComplexError> {
    let top = m.max_degree();
    let bs: Vec<RationalMatrix> = (1..=top).map(|n| m.hochschild_boundary(n)).collect();
    for n in 1..top {
        if !bs[n - 1].mul(&bs[n]).is_zero() {
            return Err(ComplexError::NotAComplex { degree: n });
        }
    }
    match variant {
        Variant::Hochschild => ChainComplex::new(m.dims.clone(), bs),
        Variant::ConnesLambda => {
            let qs = lambda_quotients(m)?;
            let ts = m.cyclic.as_ref().expect("checked by lambda_quotients");
            let mut out = Vec::with_capacity(top);
            for n in 1..=top {
                let sign = Rational::from_int(if n % 2 == 0 { -1 } else { 1 });
                let rel = RationalMatrix::identity(m.dims[n]).combine(&ts[n], &sign);
                if !qs[n - 1].projection.mul(&bs[n - 1]).mul(&rel).is_zero() {
                    return Err(ComplexError::IllDefinedBoundary { degree: n });
                }
                out.push(qs[n - 1].projection.mul(&bs[n - 1]).mul(&qs[n].section));
            }
            ChainComplex::new(qs.iter().map(QuotientSpace::dim).collect(), out)
        }
    }
}

/// Hochschild and cyclic homology dimensions in degrees `0..max_degree`.
pub fn hh_hc(m: &ParaCyclicModule) -> Result<(Vec<usize>, Vec<usize>), ComplexError> {
    let hh = homology_dims(&to_complex(m, Variant::Hochschild)?)?;
    let hc = homology_dims(&to_complex(m, Variant::ConnesLambda)?)?;
    Ok((hh, hc))
}

fn op_map(ops: &[Vec<RationalMatrix>], offset: usize) -> BTreeMap<String, RationalMatrix> {
    let mut out = BTreeMap::new();
    for (n, row) in ops.iter().enumerate() {
        for (k, op) in row.iter().enumerate() {
            out.insert(format!("{},{k}", n + offset), op.clone());
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    dims: Vec<usize>,
    faces: BTreeMap<String, RationalMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degeneracies: Option<BTreeMap<String, RationalMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cyclic: Option<BTreeMap<String, RationalMatrix>>,
}

fn parse_key(k: &str) -> Option<(usize, usize)> {
    let (a, b) = k.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn unpack_ops(
    map: &BTreeMap<String, RationalMatrix>,
    degrees: impl Iterator<Item = usize>,
) -> Result<Vec<Vec<RationalMatrix>>, String> {
    let mut out = Vec::new();
    for n in degrees {
        let mut row = Vec::new();
        if n > 0 || map.keys().any(|k| parse_key(k) == Some((0, 0))) {
            for k in 0..=n {
                let key = format!("{n},{k}");
                row.push(
                    map.get(&key)
                        .cloned()
                        .ok_or_else(|| format!("missing operator {key}"))?,
                );
            }
        }
        out.push(row);
    }
    Ok(out)
}

impl Serialize for ParaCyclicModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let faces = op_map(&self.faces, 0);
        let degeneracies = self.degeneracies.as_ref().map(|d| op_map(d, 0));
        let cyclic = self.cyclic.as_ref().map(|ts| {
            ts.iter()
                .enumerate()
                .map(|(n, t)| (n.to_string(), t.clone()))
                .collect()
        });
        ModuleJson {
            dims: self.dims.clone(),
            faces,
            degeneracies,
            cyclic,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParaCyclicModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = ModuleJson::deserialize(d)?;
        if j.dims.is_empty() {
            return Err(D::Error::custom("dims must be non-empty"));
        }
        let top = j.dims.len() - 1;
        let faces = unpack_ops(&j.faces, 0..=top).map_err(D::Error::custom)?;
        let degeneracies = match &j.degeneracies {
            Some(m) => Some(unpack_ops(m, 0..top).map_err(D::Error::custom)?),
            None => None,
        };
        let cyclic = match &j.cyclic {
            Some(m) => Some(
                (0..=top)
                    .map(|n| {
                        m.get(&n.to_string())
                            .cloned()
                            .ok_or_else(|| D::Error::custom(format!("missing cyclic {n}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Ok(ParaCyclicModule {
            dims: j.dims,
            faces,
            degeneracies,
            cyclic,
        })
    }
}

impl Serialize for ParaCocyclicModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let faces = op_map(&self.cofaces, 0);
        let degeneracies = Some(op_map(&self.codegeneracies, 0));
        let cyclic = Some(
            self.cocyclic
                .iter()
                .enumerate()
                .map(|(n, t)| (n.to_string(), t.clone()))
                .collect(),
        );
        ModuleJson {
            dims: self.dims.clone(),
            faces,
            degeneracies,
            cyclic,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_of_point_and_exact_pair() {
        let c = ChainComplex::new(vec![1], vec![]).unwrap();
        assert_eq!(homology_dims(&c).unwrap(), Vec::<usize>::new());
        let c = ChainComplex::new(vec![1, 0], vec![RationalMatrix::zeros(1, 0)]).unwrap();
        assert_eq!(homology_dims(&c).unwrap(), vec![1]);
        let c = ChainComplex::new(
            vec![1, 1, 0],
            vec![RationalMatrix::identity(1), RationalMatrix::zeros(1, 0)],
        )
        .unwrap();
        assert_eq!(homology_dims(&c).unwrap(), vec![0, 0]);
    }

    #[test]
    fn non_complex_is_reported_with_degree() {
        let c = ChainComplex::new(
            vec![1, 1, 1],
            vec![RationalMatrix::identity(1), RationalMatrix::identity(1)],
        )
        .unwrap();
        assert_eq!(
            homology_dims(&c),
            Err(ComplexError::NotAComplex { degree: 1 })
        );
    }

    #[test]
    fn trivial_module_lambda_dims() {
        let m = ParaCyclicModule::trivial(5);
        assert!(validate_paracyclic(&m, Mode::Cyclic).is_empty());
        let lam = to_complex(&m, Variant::ConnesLambda).unwrap();
        assert_eq!(lam.dims, vec![1, 0, 1, 0, 1, 0]);
        assert_eq!(homology_dims(&lam).unwrap(), vec![1, 0, 1, 0, 1]);
        let hh = to_complex(&m, Variant::Hochschild).unwrap();
        assert_eq!(homology_dims(&hh).unwrap(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn degree_zero_identity_is_valid() {
        let m = ParaCyclicModule {
            dims: vec![3],
            faces: vec![vec![]],
            degeneracies: Some(vec![]),
            cyclic: Some(vec![RationalMatrix::identity(3)]),
        };
        assert!(validate_paracyclic(&m, Mode::Para).is_empty());
        assert!(validate_paracyclic(&m, Mode::Cyclic).is_empty());
    }

    #[test]
    fn perturbed_face_breaks_hochschild() {
        let mut m = ParaCyclicModule::trivial(3);
        m.faces[3][1] = RationalMatrix::identity(1).scale(&Rational::from_int(2));
        assert!(!validate_paracyclic(&m, Mode::Para).is_empty());
        assert!(matches!(
            to_complex(&m, Variant::Hochschild),
            Err(ComplexError::NotAComplex { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = ParaCyclicModule::trivial(2);
        let s = serde_json::to_string(&m).unwrap();
        let back: ParaCyclicModule = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
