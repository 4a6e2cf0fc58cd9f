use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Sort by index, merge duplicates and drop zeros.
pub fn normalize(mut terms: Vec<(usize, Rational)>) -> SparseVec {
    if terms.len() <= 1 {
        terms.retain(|(_, v)| !v.is_zero());
        return terms;
    }
    terms.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (i, v) in terms {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += v,
            _ => {
                if let Some((_, acc)) = out.last() {
                    if acc.is_zero() {
                        out.pop();
                    }
                }
                out.push((i, v));
            }
        }
    }
    if let Some((_, acc)) = out.last() {
        if acc.is_zero() {
            out.pop();
        }
    }
    out
}

/// a + c·b for sparse vectors.
pub fn axpy(a: &[(usize, Rational)], c: &Rational, b: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Exact rational matrix, stored column-major and sparse.
///
/// Column `j` is the image of the `j`-th basis vector, so a matrix with
/// `rows = m`, `cols = n` is a linear map from an n-dimensional space to an
/// m-dimensional one and `f.mul(&g)` is the composite `f ∘ g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        RationalMatrix {
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Columns need not be normalized; they are normalized here.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Self {
        let cols = columns.len();
        let columns: Vec<SparseVec> = columns.into_iter().map(normalize).collect();
        for c in &columns {
            if let Some((i, _)) = c.last() {
                assert!(*i < rows, "row index {i} out of range {rows}");
            }
        }
        RationalMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_sparse_rows(cols: usize, rows: &[SparseVec]) -> Self {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); cols];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                assert!(*c < cols, "column index {c} out of range {cols}");
                if !v.is_zero() {
                    columns[*c].push((r, v.clone()));
                }
            }
        }
        RationalMatrix {
            rows: rows.len(),
            cols,
            columns,
        }
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[Vec<Rational>]) -> Self {
        assert_eq!(data.len(), rows, "row count mismatch");
        let sparse: Vec<SparseVec> = data
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "column count mismatch");
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(cols, &sparse)
    }

    pub fn from_i64(data: &[&[i64]]) -> Self {
        let cols = data.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Rational>> = data
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
            .collect();
        Self::from_dense(data.len(), cols, &rows)
    }

    /// Permutation-like matrix sending basis vector j to `targets[j]` (or to 0).
    pub fn from_index_map(rows: usize, targets: &[Option<usize>]) -> Self {
        let columns = targets
            .iter()
            .map(|t| t.map(|i| vec![(i, Rational::one())]).unwrap_or_default())
            .collect();
        Self::from_columns(rows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => {
                if v.is_zero() {
                    col.remove(k);
                } else {
                    col[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    col.insert(k, (r, v));
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1.is_one())
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i].push((j, v.clone()));
            }
        }
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// Row-major sparse view.
    pub fn to_sparse_rows(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    /// Image of a sparse vector.
    pub fn apply(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut terms = Vec::new();
        for (j, c) in v {
            for (i, a) in &self.columns[*j] {
                terms.push((*i, a * c));
            }
        }
        normalize(terms)
    }

    /// Composite `self ∘ other`.
    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        RationalMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &RationalMatrix) -> RationalMatrix {
        self.combine(other, &Rational::from_int(-1))
    }

    /// self + c·other.
    pub fn combine(&self, other: &RationalMatrix, c: &Rational) -> RationalMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(a, c, b))
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        if c.is_zero() {
            return RationalMatrix::zeros(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect())
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    pub fn pow(&self, k: usize) -> RationalMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = RationalMatrix::identity(self.rows);
        for _ in 0..k {
            acc = self.mul(&acc);
        }
        acc
    }

    /// Largest absolute numerator over all entries; zero for the zero matrix.
    pub fn max_abs_numerator(&self) -> BigInt {
        let mut best = BigInt::zero();
        for col in &self.columns {
            for (_, v) in col {
                let a = v.numer().abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> RationalMatrix {
        let columns = idx.iter().map(|&j| self.columns[j].clone()).collect();
        RationalMatrix {
            rows: self.rows,
            cols: idx.len(),
            columns,
        }
    }

    /// Keep only the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> RationalMatrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut c: SparseVec = col
                    .iter()
                    .filter(|(i, _)| pos[*i] != usize::MAX)
                    .map(|(i, v)| (pos[*i], v.clone()))
                    .collect();
                c.sort_by_key(|(i, _)| *i);
                c
            })
            .collect();
        RationalMatrix {
            rows: idx.len(),
            cols: self.cols,
            columns,
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &RationalMatrix) -> RationalMatrix {
        let mut columns = self.columns.clone();
        for col in &other.columns {
            columns.push(
                col.iter()
                    .map(|(i, v)| (i + self.rows, v.clone()))
                    .collect(),
            );
        }
        RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }
}

/// Row-major JSON: an array of rows, each an array of rational strings.
impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.rows == 0 {
            // keep the column count recoverable for empty matrices
            let empty: Vec<Vec<Rational>> = Vec::new();
            return (self.cols, empty).serialize(s);
        }
        self.to_dense().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rows(Vec<Vec<Rational>>),
            Empty((usize, Vec<Vec<Rational>>)),
        }
        match Repr::deserialize(d)? {
            Repr::Rows(rows) => {
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(serde::de::Error::custom("ragged matrix rows"));
                }
                Ok(RationalMatrix::from_dense(rows.len(), cols, &rows))
            }
            Repr::Empty((cols, _)) => Ok(RationalMatrix::zeros(0, cols)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges_and_drops_zeros() {
        let v = normalize(vec![
            (3, Rational::from_int(1)),
            (1, Rational::from_int(2)),
            (3, Rational::from_int(-1)),
            (1, Rational::from_int(1)),
        ]);
        assert_eq!(v, vec![(1, Rational::from_int(3))]);
    }

    #[test]
    fn product_is_composition() {
        let a = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), RationalMatrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(b.mul(&b), RationalMatrix::identity(2));
    }

    #[test]
    fn json_is_row_major_strings() {
        let a =
            RationalMatrix::from_dense(1, 2, &[vec![Rational::new(1, 2), Rational::from_int(-3)]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1/2","-3"]]"#);
        let back: RationalMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let e = RationalMatrix::zeros(0, 3);
        let back: RationalMatrix =
            serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }
}
