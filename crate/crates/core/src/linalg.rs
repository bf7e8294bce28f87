//! Dense exact linear algebra over a [`Field`].
//!
//! Subspaces are passed around as matrices whose columns span them. Helpers
//! that return a subspace always return a basis (independent columns).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::field::{Field, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        Self::from_vec(rows, cols, vals.iter().map(|&v| F::from_i64(v)).collect())
    }

    /// A single column.
    pub fn column(v: Vec<F>) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cur = std::mem::replace(&mut out[(i, j)], F::zero());
                        out[(i, j)] = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        let data = self.data.iter().map(|a| a.clone() * c.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack_all(rows: usize, parts: &[Matrix<F>]) -> Self {
        parts.iter().fold(Self::zeros(rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn vstack_all(cols: usize, parts: &[Matrix<F>]) -> Self {
        parts.iter().fold(Self::zeros(0, cols), |acc, m| acc.vstack(m))
    }

    pub fn block_diag(parts: &[Matrix<F>]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out[(r0 + i, c0 + j)] = m[(i, j)].clone();
                }
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out[(oi, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (oj, &j) in cols.iter().enumerate() {
                out[(i, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn trace(&self) -> F {
        assert!(self.is_square());
        (0..self.rows).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form (Gauss-Jordan).
    pub fn rref(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = std::mem::replace(&mut m[(r, j)], F::zero());
                    m[(r, j)] = v * inv.clone();
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let sub = factor.clone() * m[(r, j)].clone();
                    let v = std::mem::replace(&mut m[(i, j)], F::zero());
                    m[(i, j)] = v - sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Columns spanning `{x : self * x = 0}`.
    pub fn kernel(&self) -> Self {
        let Echelon { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k[(f, idx)] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, idx)] = -r[(row, f)].clone();
            }
        }
        k
    }

    /// A basis of the column space, chosen among the columns of `self`.
    pub fn column_basis(&self) -> Self {
        let pivots = self.rref().pivots;
        self.select_cols(&pivots)
    }

    /// Solve `self * X = rhs`; `None` if inconsistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = self.hstack(rhs);
        let Echelon { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Self::identity(self.rows));
        let Echelon { matrix: r, pivots } = aug.rref();
        if pivots.len() < self.rows || pivots[self.rows - 1] >= self.cols {
            return None;
        }
        Some(r.submatrix(0..self.rows, self.cols..2 * self.cols))
    }

    /// `L` with `L * self = I`, for a matrix of full column rank.
    pub fn left_inverse(&self) -> Option<Self> {
        let lt = self.transpose().solve(&Self::identity(self.cols))?;
        Some(lt.transpose())
    }

    /// Determinant by elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let sub = factor.clone() * m[(c, j)].clone();
                    let v = std::mem::replace(&mut m[(i, j)], F::zero());
                    m[(i, j)] = v - sub;
                }
            }
        }
        det
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.rows == 0 || self.pow(self.rows).is_zero()
    }

    /// Flatten row-major into a single column vector.
    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }
}

// ---------------------------------------------------------------------------
// Subspaces (as column spans)

/// Basis of the span of the columns.
pub fn span_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.column_basis()
}

/// `span(sub) ⊆ span(sup)`.
pub fn span_contains<F: Field>(sup: &Matrix<F>, sub: &Matrix<F>) -> bool {
    if sub.cols() == 0 {
        return true;
    }
    sup.hstack(sub).rank() == sup.rank()
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersect<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(n, 0);
    }
    let a = a.column_basis();
    let k = a.hstack(&b.scale(&-F::one())).kernel();
    let coeffs = k.submatrix(0..a.cols(), 0..k.cols());
    a.mul(&coeffs).column_basis()
}

/// Basis of `{x : map * x ∈ span(target)}`.
pub fn preimage<F: Field>(map: &Matrix<F>, target: &Matrix<F>) -> Matrix<F> {
    let n = map.cols();
    let k = map.hstack(&target.scale(&-F::one())).kernel();
    k.submatrix(0..n, 0..k.cols()).column_basis()
}

/// Standard basis vectors completing `span(sub)` to the whole space, in index order.
pub fn complement<F: Field>(sub: &Matrix<F>) -> Matrix<F> {
    let n = sub.rows();
    let pivots = sub.column_basis().transpose().rref().pivots;
    let rest: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    Matrix::identity(n).select_cols(&rest)
}

/// Image of `map` as a column basis.
pub fn image<F: Field>(map: &Matrix<F>) -> Matrix<F> {
    map.column_basis()
}

// ---------------------------------------------------------------------------
// Eigenvalue candidates

/// Characteristic polynomial `det(xI - m)`, coefficients from the constant term up.
/// Uses a Hessenberg reduction; valid over any field.
pub fn char_poly<F: Field>(m: &Matrix<F>) -> Vec<F> {
    assert!(m.is_square());
    let n = m.rows();
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let piv_row = col + 1;
        let Some(i) = (piv_row..n).find(|&i| !h[(i, col)].is_zero()) else {
            continue;
        };
        if i != piv_row {
            h.swap_rows(i, piv_row);
            for r in 0..n {
                h.data.swap(r * n + i, r * n + piv_row);
            }
        }
        let t_inv = h[(piv_row, col)].inv().expect("nonzero");
        for i in piv_row + 1..n {
            let u = h[(i, col)].clone() * t_inv.clone();
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let s = u.clone() * h[(piv_row, j)].clone();
                let v = std::mem::replace(&mut h[(i, j)], F::zero());
                h[(i, j)] = v - s;
            }
            for r in 0..n {
                let s = u.clone() * h[(r, i)].clone();
                let v = std::mem::replace(&mut h[(r, piv_row)], F::zero());
                h[(r, piv_row)] = v + s;
            }
        }
    }
    // p[k] = char poly of leading k x k block
    let mut polys: Vec<Vec<F>> = vec![vec![F::one()]];
    for k in 1..=n {
        let hk = h[(k - 1, k - 1)].clone();
        let prev = &polys[k - 1];
        let mut pk = vec![F::zero(); k + 1];
        for (d, c) in prev.iter().enumerate() {
            pk[d + 1] = pk[d + 1].clone() + c.clone();
            pk[d] = pk[d].clone() - hk.clone() * c.clone();
        }
        let mut t = F::one();
        for i in 1..k {
            t = t * h[(k - i, k - i - 1)].clone();
            let coeff = t.clone() * h[(k - i - 1, k - 1)].clone();
            if coeff.is_zero() {
                continue;
            }
            for (d, c) in polys[k - i - 1].iter().enumerate() {
                pk[d] = pk[d].clone() - coeff.clone() * c.clone();
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

pub fn eval_poly<F: Field>(coeffs: &[F], x: &F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Largest absolute value for which divisors are enumerated in the rational root search.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots of a polynomial with rational coefficients (constant term first).
/// Returns `None` when the coefficients are too large for the divisor search.
pub fn rational_roots(coeffs: &[Q]) -> Option<Vec<Q>> {
    let mut c: Vec<Q> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Q::zero());
        c.drain(..lead_zeros);
    }
    if c.len() <= 1 {
        return Some(roots);
    }
    let lcm = c.iter().fold(BigInt::from(1), |acc, x| acc.lcm(&x.numer_denom().1));
    let ints: Vec<BigInt> = c
        .iter()
        .map(|x| {
            let (n, d) = x.numer_denom();
            n * (&lcm / d)
        })
        .collect();
    let a0 = ints[0].abs().to_u64().filter(|&v| v <= ROOT_SEARCH_LIMIT)?;
    let an = ints.last().unwrap().abs().to_u64().filter(|&v| v <= ROOT_SEARCH_LIMIT)?;
    let (dp, dq) = (divisors(a0), divisors(an));
    let mut seen = std::collections::HashSet::new();
    for p in &dp {
        for q in &dq {
            for sign in [1i64, -1] {
                let cand = Q::new(sign * *p as i64, *q as i64);
                if seen.insert(cand.clone()) && eval_poly(&c, &cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

impl<F: Field> Matrix<F> {
    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    fn q(rows: usize, cols: usize, v: &[i64]) -> Matrix<Q> {
        Matrix::from_i64(rows, cols, v)
    }

    #[test]
    fn kernel_and_rank() {
        let m = q(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let m = q(2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let b = q(2, 1, &[3, 2]);
        assert_eq!(m.solve(&b).unwrap(), q(2, 1, &[1, 1]));
        assert!(q(2, 2, &[1, 1, 1, 1]).solve(&q(2, 1, &[1, 0])).is_none());
        assert_eq!(m.det(), Q::one());
    }

    #[test]
    fn subspace_ops() {
        let e1 = q(3, 1, &[1, 0, 0]);
        let e12 = q(3, 2, &[1, 0, 0, 1, 0, 0]);
        let e23 = q(3, 2, &[0, 0, 1, 0, 0, 1]);
        assert!(span_contains(&e12, &e1));
        assert!(!span_contains(&e23, &e1));
        let i = intersect(&e12, &e23);
        assert_eq!(i.cols(), 1);
        assert!(span_contains(&q(3, 1, &[0, 1, 0]), &i));
        assert_eq!(complement(&e12), q(3, 1, &[0, 0, 1]));
        let proj = q(1, 3, &[1, 1, 0]);
        let pre = preimage(&proj, &Matrix::zeros(1, 0));
        assert_eq!(pre.cols(), 2);
    }

    #[test]
    fn rational_root_search() {
        // (x - 2)(x + 1/3) x = x^3 - 5/3 x^2 - 2/3 x
        let c = vec![Q::zero(), Q::new(-2, 3), Q::new(-5, 3), Q::one()];
        let mut r = rational_roots(&c).unwrap();
        r.sort_by_key(|x| x.to_string());
        assert_eq!(r, vec![Q::new(-1, 3), Q::zero(), Q::from_i64(2)]);
    }

    fn det_oracle<F: Field>(m: &Matrix<F>, x: &F) -> F {
        let n = m.rows();
        Matrix::identity(n).scale(x).sub(m).det()
    }

    proptest! {
        #[test]
        fn char_poly_agrees_with_determinant(v in proptest::collection::vec(-3i64..4, 16), x in -5i64..6) {
            let m = q(4, 4, &v);
            let cp = char_poly(&m);
            prop_assert_eq!(cp.len(), 5);
            let at = eval_poly(&cp, &Q::from_i64(x));
            prop_assert_eq!(at, det_oracle(&m, &Q::from_i64(x)));
        }

        #[test]
        fn char_poly_over_f3(v in proptest::collection::vec(0i64..3, 9), x in 0i64..3) {
            let m: Matrix<Fp<3>> = Matrix::from_i64(3, 3, &v);
            let cp = char_poly(&m);
            prop_assert_eq!(eval_poly(&cp, &Fp::new(x)), det_oracle(&m, &Fp::new(x)));
        }

        #[test]
        fn rank_nullity(v in proptest::collection::vec(-2i64..3, 20)) {
            let m = q(4, 5, &v);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.cols(), 5);
            prop_assert!(m.mul(&k).is_zero());
        }
    }
}
