//! Fraction-free sparse row reduction over the integers.
//!
//! Every routine first runs in `i128` with checked arithmetic and reruns in
//! `BigInt` when an intermediate value overflows.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type Row<T> = Vec<(usize, T)>;

pub(crate) trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        // leave headroom so that negation and gcd never hit i128::MIN
        b.to_i128().filter(|v| v.unsigned_abs() < (1u128 << 120))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn convert<T: Ring>(rows: &[Row<BigInt>]) -> Option<Vec<Row<T>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|(c, v)| T::from_big(v).map(|t| (*c, t)))
                .collect::<Option<Row<T>>>()
        })
        .collect()
}

/// Divide by the content and make the leading entry positive.
fn primitive<T: Ring>(row: &mut Row<T>) -> Option<()> {
    if row.is_empty() {
        return Some(());
    }
    let mut g = row[0].1.gcd(&row[0].1);
    for (_, v) in row.iter().skip(1) {
        if g.is_unit() {
            break;
        }
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = g.neg()?;
    }
    if !g.is_unit() || g.is_negative() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
    Some(())
}

/// `fa·r − fb·p`, chosen so that column `col` cancels. Also returns the
/// columns present in the result but absent from `r`.
fn eliminate<T: Ring>(r: &Row<T>, p: &Row<T>, col: usize) -> Option<(Row<T>, Vec<usize>)> {
    let a = &p[p.binary_search_by_key(&col, |(c, _)| *c).ok()?].1;
    let b = &r[r.binary_search_by_key(&col, |(c, _)| *c).ok()?].1;
    let g = a.gcd(b);
    let fa = a.div_exact(&g);
    let fb = b.div_exact(&g);
    let mut out = Vec::with_capacity(r.len() + p.len());
    let mut fresh = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        if j >= p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push((r[i].0, r[i].1.mul(&fa)?));
            i += 1;
        } else if i >= r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, p[j].1.mul(&fb)?.neg()?));
            fresh.push(p[j].0);
            j += 1;
        } else {
            let v = r[i].1.mul(&fa)?.sub(&p[j].1.mul(&fb)?)?;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    primitive(&mut out)?;
    Some((out, fresh))
}

fn rank_with<T: Ring>(mut rows: Vec<Row<T>>, ncols: usize) -> Option<usize> {
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut queue = BTreeSet::new();
    for (k, r) in rows.iter_mut().enumerate() {
        primitive(r)?;
        for (c, _) in r.iter() {
            col_rows[*c].push(k);
        }
        if !r.is_empty() {
            queue.insert((r.len(), k));
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut rank = 0;
    while let Some((_, piv)) = queue.pop_first() {
        alive[piv] = false;
        let prow = std::mem::take(&mut rows[piv]);
        if prow.is_empty() {
            continue;
        }
        // sparsest column, preferring unit pivots
        let &(col, _) = prow
            .iter()
            .min_by_key(|(c, v)| (col_rows[*c].len(), !v.is_unit()))
            .expect("non-empty pivot row");
        rank += 1;
        let targets = std::mem::take(&mut col_rows[col]);
        for r in targets {
            if !alive[r] || rows[r].binary_search_by_key(&col, |(c, _)| *c).is_err() {
                continue;
            }
            let old_len = rows[r].len();
            let (new, fresh) = eliminate(&rows[r], &prow, col)?;
            for c in fresh {
                col_rows[c].push(r);
            }
            queue.remove(&(old_len, r));
            if new.is_empty() {
                alive[r] = false;
            } else {
                queue.insert((new.len(), r));
            }
            rows[r] = new;
        }
    }
    Some(rank)
}

pub(crate) fn rank(rows: &[Row<BigInt>], ncols: usize) -> usize {
    if let Some(small) = convert::<i128>(rows) {
        if let Some(r) = rank_with(small, ncols) {
            return r;
        }
    }
    rank_with(rows.to_vec(), ncols).expect("big integer elimination cannot overflow")
}

/// Reduced echelon form: pivots chosen as the first nonzero entry of each
/// incoming row, in input order. Rows are returned sorted by pivot column,
/// each with a positive pivot and no other pivot column present.
fn rref_with<T: Ring>(rows: Vec<Row<T>>, ncols: usize) -> Option<Vec<Row<T>>> {
    let mut pivot_of = vec![usize::MAX; ncols];
    let mut basis: Vec<Row<T>> = Vec::new();
    for mut r in rows {
        primitive(&mut r)?;
        while let Some(&(c, _)) = r.first() {
            let p = pivot_of[c];
            if p == usize::MAX {
                pivot_of[c] = basis.len();
                basis.push(r);
                break;
            }
            r = eliminate(&r, &basis[p], c)?.0;
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(basis[k][0].0));
    for &k in &order {
        loop {
            let lead = basis[k][0].0;
            let hit = basis[k]
                .iter()
                .skip(1)
                .map(|(c, _)| *c)
                .find(|&c| pivot_of[c] != usize::MAX);
            let Some(c) = hit else { break };
            let other = pivot_of[c];
            debug_assert!(basis[other][0].0 == c && c > lead);
            let reduced = eliminate(&basis[k], &basis[other], c)?.0;
            basis[k] = reduced;
        }
    }
    basis.sort_by_key(|r| r[0].0);
    Some(basis)
}

pub(crate) fn rref(rows: &[Row<BigInt>], ncols: usize) -> Vec<Row<BigInt>> {
    if let Some(small) = convert::<i128>(rows) {
        if let Some(r) = rref_with(small, ncols) {
            return r
                .into_iter()
                .map(|row| row.into_iter().map(|(c, v)| (c, v.to_big())).collect())
                .collect();
        }
    }
    rref_with(rows.to_vec(), ncols).expect("big integer elimination cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(data: &[&[i64]]) -> Vec<Row<BigInt>> {
        data.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, BigInt::from(*v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank(&rows(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&rows(&[&[1, 0], &[0, 1]]), 2), 2);
        assert_eq!(rank(&rows(&[&[0, 0, 0]]), 3), 0);
        assert_eq!(rank(&rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, -1]]), 3), 2);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = 1i64 << 62;
        let data = rows(&[&[big, big - 1, 3], &[big - 1, big, 5], &[7, big - 3, big]]);
        let mut m = data.clone();
        for r in &mut m {
            for (_, v) in r.iter_mut() {
                *v = &*v * BigInt::from(big) * BigInt::from(big);
            }
        }
        assert_eq!(rank(&m, 3), rank(&data, 3));
        assert_eq!(rref(&m, 3).len(), 3);
    }

    #[test]
    fn rref_is_reduced() {
        let r = rref(&rows(&[&[0, 2, 4], &[1, 1, 1], &[1, 2, 3]]), 3);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0][0].0, 0);
        assert_eq!(r[1][0].0, 1);
        assert!(r[0].iter().all(|(c, _)| *c != 1));
    }
}
