//! Dense exact linear algebra over a field, integer Hermite normal forms, and
//! echelonized rational subspaces.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclotomic::CycNum;

pub type Mat<T> = Vec<Vec<T>>;

/// Field operations needed by the elimination routines.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_elt() -> Self;
    fn one_elt() -> Self;
    fn is_zero_elt(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Inverse of a nonzero element.
    fn finv(&self) -> Self;
}

impl Scalar for BigRational {
    fn zero_elt() -> Self {
        Zero::zero()
    }
    fn one_elt() -> Self {
        One::one()
    }
    fn is_zero_elt(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.recip()
    }
}

impl Scalar for CycNum {
    fn zero_elt() -> Self {
        CycNum::zero()
    }
    fn one_elt() -> Self {
        CycNum::one()
    }
    fn is_zero_elt(&self) -> bool {
        CycNum::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn fsub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn fmul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn fneg(&self) -> Self {
        self.neg_ref()
    }
    fn finv(&self) -> Self {
        self.inv().expect("inverse of a nonzero element")
    }
}

pub fn zeros<T: Scalar>(rows: usize, cols: usize) -> Mat<T> {
    vec![vec![T::zero_elt(); cols]; rows]
}

pub fn identity<T: Scalar>(n: usize) -> Mat<T> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one_elt();
    }
    m
}

pub fn transpose<T: Clone>(m: &Mat<T>) -> Mat<T> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero_elt();
                    for k in 0..inner {
                        if !row[k].is_zero_elt() && !b[k][j].is_zero_elt() {
                            acc = acc.fadd(&row[k].fmul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &Mat<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            let mut acc = T::zero_elt();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero_elt() && !y.is_zero_elt() {
                    acc = acc.fadd(&x.fmul(y));
                }
            }
            acc
        })
        .collect()
}

pub fn mat_sub<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.fsub(y)).collect())
        .collect()
}

pub fn mat_add<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.fadd(y)).collect())
        .collect()
}

pub fn mat_scale<T: Scalar>(a: &Mat<T>, c: &T) -> Mat<T> {
    a.iter()
        .map(|r| r.iter().map(|x| x.fmul(c)).collect())
        .collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref<T: Scalar>(m: &Mat<T>) -> (Mat<T>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero_elt()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].finv();
        for x in a[r].iter_mut() {
            if !x.is_zero_elt() {
                *x = x.fmul(&inv);
            }
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero_elt() {
                let f = a[i][c].clone();
                for j in c..cols {
                    if !a[r][j].is_zero_elt() {
                        let d = f.fmul(&a[r][j]);
                        a[i][j] = a[i][j].fsub(&d);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r.max(0));
    (a, pivots)
}

pub fn rank<T: Scalar>(m: &Mat<T>) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<T: Scalar>(m: &Mat<T>, cols: usize) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero_elt(); cols];
            x[f] = T::one_elt();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = r[i][f].fneg();
            }
            x
        })
        .collect()
}

/// Some solution of `a x = b` (free variables set to zero), or `None` if the
/// system is inconsistent.
pub fn solve_least<T: Scalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let aug: Mat<T> = a
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![T::zero_elt(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][cols].clone();
    }
    Some(x)
}

/// Unique solution of a square nonsingular system.
pub fn solve<T: Scalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    if rank(a) != a.len() {
        return None;
    }
    solve_least(a, b)
}

pub fn det<T: Scalar>(m: &Mat<T>) -> T {
    let n = m.len();
    let mut a = m.clone();
    let mut d = T::one_elt();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero_elt()) else {
            return T::zero_elt();
        };
        if p != c {
            a.swap(p, c);
            d = d.fneg();
        }
        d = d.fmul(&a[c][c]);
        let inv = a[c][c].finv();
        for i in c + 1..n {
            if !a[i][c].is_zero_elt() {
                let f = a[i][c].fmul(&inv);
                for j in c..n {
                    if !a[c][j].is_zero_elt() {
                        let t = f.fmul(&a[c][j]);
                        a[i][j] = a[i][j].fsub(&t);
                    }
                }
            }
        }
    }
    d
}

pub fn inverse<T: Scalar>(m: &Mat<T>) -> Option<Mat<T>> {
    let n = m.len();
    let aug: Mat<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one_elt() } else { T::zero_elt() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Integer matrices

/// Row Hermite normal form `H = U m` with `U` unimodular. Returns `(H, U, rank)`;
/// the first `rank` rows of `H` are nonzero with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hnf_with_transform(m: &Mat<BigInt>) -> (Mat<BigInt>, Mat<BigInt>, usize) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut u: Mat<BigInt> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = pivot else { break };
            a.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    row_axpy(&mut a, i, r, &q);
                    row_axpy(&mut u, i, r, &q);
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
            for x in u[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                row_axpy(&mut a, i, r, &q);
                row_axpy(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (a, u, r)
}

/// row[i] -= q * row[src]
fn row_axpy(m: &mut Mat<BigInt>, i: usize, src: usize, q: &BigInt) {
    let s = m[src].clone();
    for (x, y) in m[i].iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Canonical HNF basis (nonzero rows only).
pub fn hnf(m: &Mat<BigInt>) -> Mat<BigInt> {
    let (h, _, r) = hnf_with_transform(m);
    h.into_iter().take(r).collect()
}

/// Z-basis of `{x in Z^rows : x m = 0}`.
pub fn integer_left_kernel(m: &Mat<BigInt>) -> Mat<BigInt> {
    let (_, u, r) = hnf_with_transform(m);
    let basis: Mat<BigInt> = u.into_iter().skip(r).collect();
    if basis.is_empty() {
        return basis;
    }
    hnf(&basis)
}

pub fn int_det(m: &Mat<BigInt>) -> BigInt {
    let q: Mat<BigRational> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    det(&q).to_integer()
}

/// Scales rational rows to integers; returns `(integer rows, denominator)`.
pub fn clear_denominators(m: &Mat<BigRational>) -> (Mat<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for row in m {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let ints = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    (ints, den)
}

// ---------------------------------------------------------------------------

/// An echelonized basis of a `Q`-subspace of `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalSubspaceBasis {
    ambient_dim: usize,
    #[serde(skip)]
    rows: Mat<BigRational>,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl RationalSubspaceBasis {
    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<BigRational>]) -> Self {
        if vectors.is_empty() {
            return RationalSubspaceBasis {
                ambient_dim,
                rows: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let (rows, pivots) = rref(&vectors.to_vec());
        RationalSubspaceBasis {
            ambient_dim,
            rows,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &Mat<BigRational> {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates w.r.t. the echelon rows, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let coords: Vec<BigRational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.combine(&coords);
        (back.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn combine(&self, coords: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.ambient_dim];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Self::from_vectors(self.ambient_dim, &all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{int, rat};

    fn im(rows: &[&[i64]]) -> Mat<BigInt> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_is_canonical_and_transform_is_correct() {
        let m = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u, r) = hnf_with_transform(&m);
        assert_eq!(r, 3);
        // U m = H
        let um: Mat<BigInt> = u
            .iter()
            .map(|row| {
                (0..3)
                    .map(|j| (0..3).map(|k| &row[k] * &m[k][j]).sum())
                    .collect()
            })
            .collect();
        assert_eq!(um, h);
        assert_eq!(h, im(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
        assert_eq!(int_det(&u).abs(), BigInt::one());
    }

    #[test]
    fn left_kernel() {
        let m = im(&[&[1, 0], &[0, 1], &[1, 1]]);
        let k = integer_left_kernel(&m);
        assert_eq!(k, im(&[&[1, 1, -1]]));
    }

    #[test]
    fn rational_rref_and_solve() {
        let a = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
        let x = solve(&a, &[int(5), int(6)]).unwrap();
        assert_eq!(x, vec![int(-4), rat(9, 2)]);
        assert_eq!(det(&a), int(-2));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        let sing = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rank(&sing), 1);
        assert!(solve_least(&sing, &[int(1), int(3)]).is_none());
        assert_eq!(nullspace(&sing, 2), vec![vec![int(-2), int(1)]]);
    }

    #[test]
    fn subspace_coordinates() {
        let s = RationalSubspaceBasis::from_vectors(3, &[vec![int(1), int(1), int(0)], vec![int(2), int(2), int(0)]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.coordinates(&[int(3), int(3), int(0)]), Some(vec![int(3)]));
        assert!(!s.contains(&[int(1), int(0), int(0)]));
    }
}
