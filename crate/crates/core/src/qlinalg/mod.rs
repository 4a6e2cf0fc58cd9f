//! Exact linear algebra over the rationals.

mod elim;
mod matrix;
mod rational;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

pub use matrix::{axpy, normalize, RationalMatrix, SparseVec};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected} columns, got {got}")]
    Shape { expected: usize, got: usize },
}

fn integer_row(v: &[(usize, Rational)]) -> Vec<(usize, BigInt)> {
    let mut l = BigInt::one();
    for (_, x) in v {
        l = l.lcm(x.denom());
    }
    v.iter()
        .map(|(c, x)| (*c, x.numer() * (&l / x.denom())))
        .collect()
}

fn rational_rows(rows: Vec<Vec<(usize, BigInt)>>) -> Vec<SparseVec> {
    rows.into_iter()
        .map(|r| {
            let p = r[0].1.clone();
            r.into_iter()
                .map(|(c, v)| (c, Rational::from_parts(v, p.clone())))
                .collect()
        })
        .collect()
}

/// Rank of a matrix.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // rank(m) = rank(mᵀ): the stored columns serve as rows
    let rows: Vec<_> = m
        .columns()
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| integer_row(c))
        .collect();
    elim::rank(&rows, m.rows())
}

/// Reduced row echelon form of the row space spanned by `rows`.
///
/// Returns (pivot columns, rows with unit pivots), sorted by pivot column.
pub fn rref(ncols: usize, rows: &[SparseVec]) -> (Vec<usize>, Vec<SparseVec>) {
    let ints: Vec<_> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| integer_row(r))
        .collect();
    let reduced = rational_rows(elim::rref(&ints, ncols));
    let pivots = reduced.iter().map(|r| r[0].0).collect();
    (pivots, reduced)
}

/// Rank and a basis of the kernel of `m`; kernel vectors are the rows of the
/// returned matrix, one per non-pivot column, with a 1 in that column and 0 in
/// every other non-pivot column.
pub fn rank_kernel(m: &RationalMatrix) -> (usize, RationalMatrix) {
    let (pivots, k) = kernel_with_pivots(m);
    (pivots.len(), k)
}

fn kernel_with_pivots(m: &RationalMatrix) -> (Vec<usize>, RationalMatrix) {
    let n = m.cols();
    let (pivots, rows) = rref(n, &m.to_sparse_rows());
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut free_pos = vec![usize::MAX; n];
    for (k, &f) in free.iter().enumerate() {
        free_pos[f] = k;
    }
    let mut kernel: Vec<Vec<(usize, Rational)>> =
        free.iter().map(|&f| vec![(f, Rational::one())]).collect();
    for (row, &p) in rows.iter().zip(&pivots) {
        for (c, v) in row.iter().skip(1) {
            kernel[free_pos[*c]].push((p, -v));
        }
    }
    let kernel: Vec<SparseVec> = kernel.into_iter().map(normalize).collect();
    (pivots, RationalMatrix::from_sparse_rows(n, &kernel))
}

/// Inverse of a square matrix, or `None` when it is singular.
pub fn inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let augmented: Vec<SparseVec> = m
        .to_sparse_rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.push((n + i, Rational::one()));
            r
        })
        .collect();
    let (pivots, rows) = rref(2 * n, &augmented);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    let inv_rows: Vec<SparseVec> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .filter(|(c, _)| *c >= n)
                .map(|(c, v)| (c - n, v))
                .collect()
        })
        .collect();
    Some(RationalMatrix::from_sparse_rows(n, &inv_rows))
}

/// The quotient of 𝕂^ambient_dim by the span of a set of relation vectors,
/// with quotient coordinates given by the non-pivot columns of the reduced
/// echelon form of the relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    pub ambient_dim: usize,
    /// Rows: reduced echelon basis of the relation subspace.
    pub relation_basis: RationalMatrix,
    /// ambient → quotient coordinates.
    pub projection: RationalMatrix,
    /// quotient → ambient; basis vector k maps to the ambient unit vector `free[k]`.
    pub section: RationalMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl QuotientSpace {
    fn assemble(ambient_dim: usize, pivots: Vec<usize>, rows: Vec<SparseVec>) -> Self {
        let mut is_pivot = vec![false; ambient_dim];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
        let mut free_pos = vec![usize::MAX; ambient_dim];
        for (k, &f) in free.iter().enumerate() {
            free_pos[f] = k;
        }
        let mut proj_cols: Vec<SparseVec> = vec![Vec::new(); ambient_dim];
        for &f in &free {
            proj_cols[f] = vec![(free_pos[f], Rational::one())];
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            proj_cols[p] = row
                .iter()
                .skip(1)
                .map(|(c, v)| (free_pos[*c], -v))
                .collect();
        }
        let q = free.len();
        let section = RationalMatrix::from_index_map(
            ambient_dim,
            &free.iter().map(|&f| Some(f)).collect::<Vec<_>>(),
        );
        QuotientSpace {
            ambient_dim,
            relation_basis: RationalMatrix::from_sparse_rows(ambient_dim, &rows),
            projection: RationalMatrix::from_columns(q, proj_cols),
            section,
            pivots,
            free,
        }
    }

    /// Quotient by the coordinate subspace spanned by the unit vectors `e_j`
    /// with `killed[j]`.
    pub fn by_coordinates(killed: &[bool]) -> Self {
        let pivots: Vec<usize> = (0..killed.len()).filter(|&j| killed[j]).collect();
        let rows = pivots.iter().map(|&p| vec![(p, Rational::one())]).collect();
        Self::assemble(killed.len(), pivots, rows)
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient indices representing the quotient basis.
    pub fn representatives(&self) -> &[usize] {
        &self.free
    }

    pub fn relation_pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Quotient coordinates of the ambient unit vector `e_j`.
    pub fn class_of(&self, j: usize) -> &[(usize, Rational)] {
        self.projection.column(j)
    }

    pub fn project(&self, v: &[(usize, Rational)]) -> SparseVec {
        self.projection.apply(v)
    }
}

/// Quotient of 𝕂^ambient_dim by the row span of `relations`.
pub fn quotient_space(
    ambient_dim: usize,
    relations: &RationalMatrix,
) -> Result<QuotientSpace, LinalgError> {
    if relations.cols() != ambient_dim {
        return Err(LinalgError::Shape {
            expected: ambient_dim,
            got: relations.cols(),
        });
    }
    Ok(quotient_by_rows(ambient_dim, &relations.to_sparse_rows()))
}

/// Quotient of 𝕂^ambient_dim by the span of the given sparse vectors.
pub fn quotient_by_rows(ambient_dim: usize, rows: &[SparseVec]) -> QuotientSpace {
    let (pivots, reduced) = rref(ambient_dim, rows);
    QuotientSpace::assemble(ambient_dim, pivots, reduced)
}

/// A subspace given by a basis in the form produced by [`rank_kernel`]:
/// coordinates of a member are its entries at the `coords` positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient_dim: usize,
    /// ambient × dim; columns are the basis vectors.
    pub inclusion: RationalMatrix,
    coords: Vec<usize>,
    coord_pos: Vec<usize>,
}

impl Subspace {
    /// Kernel of `m` as a subspace of its domain.
    pub fn kernel_of(m: &RationalMatrix) -> Self {
        let (pivots, k) = kernel_with_pivots(m);
        let mut is_pivot = vec![false; m.cols()];
        for p in pivots {
            is_pivot[p] = true;
        }
        let coords: Vec<usize> = (0..m.cols()).filter(|&c| !is_pivot[c]).collect();
        debug_assert_eq!(coords.len(), k.rows());
        let mut coord_pos = vec![usize::MAX; m.cols()];
        for (i, &c) in coords.iter().enumerate() {
            coord_pos[c] = i;
        }
        Subspace {
            ambient_dim: m.cols(),
            inclusion: k.transpose(),
            coords,
            coord_pos,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// A left inverse of `inclusion`: read off the coordinate positions.
    pub fn coordinate_projection(&self) -> RationalMatrix {
        let targets: Vec<Option<usize>> = self
            .coord_pos
            .iter()
            .map(|&p| (p != usize::MAX).then_some(p))
            .collect();
        RationalMatrix::from_index_map(self.dim(), &targets)
    }

    /// Coordinates of `v`, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[(usize, Rational)]) -> Option<SparseVec> {
        let coords: SparseVec = v
            .iter()
            .filter(|(c, _)| self.coord_pos[*c] != usize::MAX)
            .map(|(c, x)| (self.coord_pos[*c], x.clone()))
            .collect();
        let back = self.inclusion.apply(&coords);
        (back.as_slice() == v).then_some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_kernel_identity_and_rank_one() {
        let (r, k) = rank_kernel(&RationalMatrix::identity(2));
        assert_eq!((r, k.rows()), (2, 0));
        let m = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let (r, k) = rank_kernel(&m);
        assert_eq!(r, 1);
        assert_eq!(k.rows(), 1);
        // (2,-1) up to scale: k = (-2, 1)
        let v = &k.to_dense()[0];
        assert_eq!(
            &v[0] * &Rational::from_int(-1),
            &v[1] * &Rational::from_int(2)
        );
        assert!(m.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn empty_rows_give_full_kernel() {
        let (r, k) = rank_kernel(&RationalMatrix::zeros(0, 3));
        assert_eq!((r, k.rows()), (0, 3));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_space(3, &RationalMatrix::zeros(0, 3)).unwrap();
        assert_eq!(q.dim(), 3);
        assert!(q.projection.is_identity());
        let q = quotient_space(2, &RationalMatrix::from_i64(&[&[1, -1]])).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.class_of(0), q.class_of(1));
        let q = quotient_space(2, &RationalMatrix::from_i64(&[&[1, 1], &[1, 2]])).unwrap();
        assert_eq!(q.dim(), 0);
        assert!(quotient_space(3, &RationalMatrix::from_i64(&[&[1, 1]])).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inverse(&RationalMatrix::from_i64(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn subspace_coordinates() {
        let m = RationalMatrix::from_i64(&[&[1, -1, 0]]);
        let s = Subspace::kernel_of(&m);
        assert_eq!(s.dim(), 2);
        let v = vec![
            (0, Rational::from_int(3)),
            (1, Rational::from_int(3)),
            (2, Rational::from_int(5)),
        ];
        let c = s.coordinates(&v).unwrap();
        assert_eq!(s.inclusion.apply(&c), v);
        assert!(s.coordinates(&[(0, Rational::one())]).is_none());
    }
}
