//! Exact integer matrix kernel.
//!
//! Everything here works on arbitrary-precision integers. Generator vectors
//! are stored as the *columns* of an [`IntMatrix`], so an `e × m` matrix holds
//! `m` vectors of `ℤᵉ`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Above this many maximal minors the gcd is read off a lattice basis instead.
const MINOR_ENUMERATION_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}×{cols} matrix", entries.len())));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds the matrix whose columns are `columns`.
    pub fn from_columns(columns: &[Vec<BigInt>]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Dimension("no columns".into()));
        };
        let rows = first.len();
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns have different lengths".into()));
        }
        let cols = columns.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in columns {
                entries.push(c[r].clone());
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| BigInt::from(x))).collect();
        Self::new(r, c, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Copy of `self` with column `c` replaced by `v`.
    pub fn with_replaced_column(&self, c: usize, v: &[BigInt]) -> Result<Self> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} does not fit a matrix with {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = self.clone();
        for (r, x) in v.iter().enumerate() {
            *out.get_mut(r, c) = x.clone();
        }
        Ok(out)
    }

    /// Copy of `self` with `v` appended as a new last column.
    pub fn with_appended_column(&self, v: &[BigInt]) -> Result<Self> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} does not fit a matrix with {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut cols = self.columns();
        cols.push(v.to_vec());
        Self::from_columns(&cols)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<BigInt>> = idx.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(&cols).expect("selected at least one column of equal length")
    }

    pub fn negated(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| -x).collect() }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot multiply a {}×{} matrix by a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum()).collect())
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a non-square {}×{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| (0..n).map(|c| m.get(r, c).clone()).collect()).collect();
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Sylvester's identity guarantees exact division.
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -det } else { det })
}

/// `rows[target] -= q·rows[source]`, from column `from` on.
fn subtract_row(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt, from: usize) {
    let (t, s) = if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t[from..].iter_mut().zip(&s[from..]) {
        *x -= q * y;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`.
///
/// Returns the nonzero echelon rows: row `i` has its pivot strictly right of
/// row `i-1`'s pivot, pivots are positive and entries above a pivot are
/// reduced into `[0, pivot)`.
fn hermite_rows(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivot_row = 0;
    for col in 0..dim {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in this column becomes the pivot
            let best = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                subtract_row(&mut rows, r, pivot_row, &q, col);
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for x in rows[pivot_row].iter_mut() {
                    *x = -&*x;
                }
            }
            for r in 0..pivot_row {
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                if !q.is_zero() {
                    subtract_row(&mut rows, r, pivot_row, &q, col);
                }
            }
            pivot_row += 1;
        }
        rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    }
    rows.truncate(pivot_row);
    rows
}

/// Rank of the integer vectors (as a lattice, equivalently over ℚ).
pub fn rank(vectors: &[Vec<BigInt>]) -> usize {
    let dim = vectors.first().map_or(0, Vec::len);
    hermite_rows(vectors, dim).len()
}

/// Hermite-normal-form basis of the lattice generated by `vectors`, one basis
/// vector per column. The basis is triangular, so `|det|` is the product of
/// the diagonal and equals [`gcd_maximal_minors`] of the input.
pub fn lattice_basis(vectors: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let Some(first) = vectors.first() else {
        return Err(Error::Dimension("no vectors".into()));
    };
    let dim = first.len();
    if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::Dimension("vectors must share a positive length".into()));
    }
    let rows = hermite_rows(vectors, dim);
    if rows.len() < dim {
        return Err(Error::RankDeficient { rank: rows.len(), dim });
    }
    IntMatrix::from_columns(&rows)
}

/// Gcd of all maximal (`e × e`) minors of an `e × m` matrix, `e ≤ m`.
pub fn gcd_maximal_minors(m: &IntMatrix) -> Result<BigInt> {
    let e = m.rows;
    if e > m.cols {
        return Err(Error::Dimension(format!("maximal minors need rows ≤ cols, got {}×{}", m.rows, m.cols)));
    }
    if binomial_exceeds(m.cols, e, MINOR_ENUMERATION_LIMIT) {
        return Ok(match lattice_basis(&m.columns()) {
            Ok(basis) => determinant(&basis)?.abs(),
            Err(Error::RankDeficient { .. }) => BigInt::zero(),
            Err(err) => return Err(err),
        });
    }
    let mut g = BigInt::zero();
    for idx in (0..m.cols).combinations(e) {
        let minor = determinant(&m.select_columns(&idx))?;
        g = g.gcd(&minor);
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

fn binomial_exceeds(n: usize, k: usize, limit: usize) -> bool {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > limit as u128 {
            return true;
        }
    }
    false
}

/// Solves `B·λ = v` over the integers by Cramer's rule. Returns `None` when
/// the unique rational solution is not integral.
pub fn solve_square_integer(b: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let det = determinant(b)?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let mut out = Vec::with_capacity(b.cols);
    for i in 0..b.cols {
        let d_i = determinant(&b.with_replaced_column(i, v)?)?;
        let (q, r) = d_i.div_rem(&det);
        if !r.is_zero() {
            return Ok(None);
        }
        out.push(q);
    }
    Ok(Some(out))
}

/// Classical adjugate, `adj(B)·B = det(B)·I`.
pub fn adjugate(b: &IntMatrix) -> Result<IntMatrix> {
    if !b.is_square() {
        return Err(Error::Dimension("adjugate of a non-square matrix".into()));
    }
    let n = b.rows;
    if n == 1 {
        return Ok(IntMatrix::identity(1));
    }
    let mut entries = vec![BigInt::zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            let minor: Vec<BigInt> = (0..n)
                .filter(|&i| i != r)
                .flat_map(|i| (0..n).filter(|&j| j != c).map(move |j| (i, j)))
                .map(|(i, j)| b.get(i, j).clone())
                .collect();
            let det = determinant(&IntMatrix::new(n - 1, n - 1, minor)?)?;
            // adj[c][r] = (-1)^{r+c} M_{r,c}
            entries[c * n + r] = if (r + c) % 2 == 0 { det } else { -det };
        }
    }
    IntMatrix::new(n, n, entries)
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cols(v: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_columns(&v.iter().map(|c| to_big(c)).collect::<Vec<_>>()).unwrap()
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&cols(&[&[1, 3], &[3, 2]])).unwrap(), BigInt::from(-7));
        assert_eq!(determinant(&IntMatrix::identity(3)).unwrap(), BigInt::from(1));
        assert_eq!(determinant(&cols(&[&[4, 6], &[6, 3]])).unwrap(), BigInt::from(-24));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = cols(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-5));
        let singular = cols(&[&[1, 2], &[2, 4]]);
        assert!(determinant(&singular).unwrap().is_zero());
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = cols(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert!(matches!(determinant(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn gcd_minors_examples() {
        assert_eq!(gcd_maximal_minors(&cols(&[&[8, 0], &[0, 8], &[2, 2]])).unwrap(), BigInt::from(16));
        assert_eq!(gcd_maximal_minors(&cols(&[&[8, 0], &[0, 8], &[2, 2], &[12, 8]])).unwrap(), BigInt::from(8));
        assert_eq!(gcd_maximal_minors(&cols(&[&[4, 6], &[6, 3], &[8, 10], &[3, 4]])).unwrap(), BigInt::from(1));
        let rank1 = cols(&[&[1, 1], &[2, 2], &[3, 3]]);
        assert!(gcd_maximal_minors(&rank1).unwrap().is_zero());
    }

    #[test]
    fn gcd_minors_rejects_tall_matrix() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        assert!(matches!(gcd_maximal_minors(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn large_column_count_uses_basis_route() {
        // 2 × 40 gives C(40,2) = 780 minors, above the enumeration limit
        let vs: Vec<Vec<i64>> = (0..40).map(|i| vec![6 * (i + 1), 10 * (i % 7) + 4]).collect();
        let refs: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
        let m = cols(&refs);
        let mut g = BigInt::zero();
        for idx in (0..40).combinations(2) {
            g = g.gcd(&determinant(&m.select_columns(&idx)).unwrap());
        }
        assert_eq!(gcd_maximal_minors(&m).unwrap(), g);
    }

    #[test]
    fn lattice_basis_examples() {
        let b = lattice_basis(&[to_big(&[4]), to_big(&[6])]).unwrap();
        assert_eq!(b, cols(&[&[2]]));
        let b = lattice_basis(&[to_big(&[8, 0]), to_big(&[0, 8]), to_big(&[2, 2])]).unwrap();
        assert_eq!(determinant(&b).unwrap().abs(), BigInt::from(16));
        let b = lattice_basis(&[to_big(&[1, 3]), to_big(&[3, 2]), to_big(&[1, 1])]).unwrap();
        assert_eq!(determinant(&b).unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn lattice_basis_rank_deficient() {
        let err = lattice_basis(&[to_big(&[1, 2]), to_big(&[2, 4])]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, dim: 2 }));
    }

    #[test]
    fn solve_examples() {
        let b = cols(&[&[1, 3], &[3, 2]]);
        assert_eq!(solve_square_integer(&b, &to_big(&[1, 1])).unwrap(), None);
        let v = to_big(&[5, -3, 11]);
        assert_eq!(solve_square_integer(&IntMatrix::identity(3), &v).unwrap(), Some(v));
        assert_eq!(solve_square_integer(&cols(&[&[2]]), &to_big(&[2])).unwrap(), Some(to_big(&[1])));
    }

    #[test]
    fn solve_singular() {
        let b = cols(&[&[1, 2], &[2, 4]]);
        assert!(matches!(solve_square_integer(&b, &to_big(&[1, 1])), Err(Error::Singular)));
    }

    #[test]
    fn adjugate_identity() {
        let b = cols(&[&[4, 6], &[6, 3]]);
        let adj = adjugate(&b).unwrap();
        let det = determinant(&b).unwrap();
        for c in 0..2 {
            let col = adj.mul_vec(&b.column(c)).unwrap();
            for (r, x) in col.iter().enumerate() {
                assert_eq!(*x, if r == c { det.clone() } else { BigInt::zero() });
            }
        }
    }

    fn square(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-30i64..30, n), n)
    }

    fn full_rank_vectors() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..4).prop_flat_map(|e| prop::collection::vec(prop::collection::vec(-12i64..12, e), e..e + 4))
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(m in (1usize..5).prop_flat_map(square)) {
            let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let mat = IntMatrix::from_i64_rows(&refs).unwrap();
            prop_assert_eq!(determinant(&mat).unwrap(), BigInt::from(cofactor_det(&m)));
        }

        #[test]
        fn basis_determinant_is_minor_gcd(vs in full_rank_vectors()) {
            let big: Vec<Vec<BigInt>> = vs.iter().map(|v| to_big(v)).collect();
            let g = gcd_maximal_minors(&IntMatrix::from_columns(&big).unwrap()).unwrap();
            match lattice_basis(&big) {
                Ok(b) => prop_assert_eq!(determinant(&b).unwrap().abs(), g),
                Err(Error::RankDeficient { .. }) => prop_assert!(g.is_zero()),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn minor_gcd_invariant_under_combinations(vs in full_rank_vectors(), coeffs in prop::collection::vec(-5i64..5, 8)) {
            let mut big: Vec<Vec<BigInt>> = vs.iter().map(|v| to_big(v)).collect();
            let g = gcd_maximal_minors(&IntMatrix::from_columns(&big).unwrap()).unwrap();
            let e = big[0].len();
            let combo: Vec<BigInt> = (0..e)
                .map(|r| big.iter().zip(&coeffs).map(|(v, &c)| &v[r] * c).sum())
                .collect();
            big.push(combo);
            prop_assert_eq!(gcd_maximal_minors(&IntMatrix::from_columns(&big).unwrap()).unwrap(), g);
        }

        #[test]
        fn solve_round_trip(m in (1usize..5).prop_flat_map(square), lambda in prop::collection::vec(-50i64..50, 4)) {
            let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let b = IntMatrix::from_i64_rows(&refs).unwrap();
            prop_assume!(!determinant(&b).unwrap().is_zero());
            let lam = to_big(&lambda[..b.cols()]);
            let v = b.mul_vec(&lam).unwrap();
            prop_assert_eq!(solve_square_integer(&b, &v).unwrap(), Some(lam));
        }
    }
}
