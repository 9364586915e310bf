//! Helpers for vectors and matrices with cyclotomic entries, and their
//! flattening into rational coordinates.

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::{euler_phi, lcm, CycNum};
use crate::linalg::{self, Mat};

pub type CycVec = Vec<CycNum>;
pub type CycMat = Mat<CycNum>;

pub fn conductor_of_vec(v: &[CycNum]) -> usize {
    v.iter().fold(1, |acc, x| lcm(acc, x.conductor()))
}

pub fn conductor_of_mat(m: &CycMat) -> usize {
    m.iter().fold(1, |acc, r| lcm(acc, conductor_of_vec(r)))
}

pub fn lift_vec(v: &[CycNum], n: usize) -> CycVec {
    v.iter().map(|x| x.lift(n)).collect()
}

pub fn lift_mat(m: &CycMat, n: usize) -> CycMat {
    m.iter().map(|r| lift_vec(r, n)).collect()
}

/// Concatenated power-basis coordinates in `Q(zeta_n)`.
pub fn flatten(v: &[CycNum], n: usize) -> Vec<BigRational> {
    v.iter().flat_map(|x| x.lift(n).coeffs().to_vec()).collect()
}

pub fn unflatten(flat: &[BigRational], dim: usize, n: usize) -> CycVec {
    let phi = euler_phi(n);
    debug_assert_eq!(flat.len(), dim * phi);
    (0..dim)
        .map(|i| CycNum::new(n, flat[i * phi..(i + 1) * phi].to_vec()).expect("phi-length slice"))
        .collect()
}

pub fn apply(m: &CycMat, v: &[CycNum]) -> CycVec {
    linalg::mat_vec(m, v)
}

pub fn scale_vec(c: &CycNum, v: &[CycNum]) -> CycVec {
    v.iter().map(|x| c.mul_ref(x)).collect()
}

pub fn add_vec(a: &[CycNum], b: &[CycNum]) -> CycVec {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn sub_vec(a: &[CycNum], b: &[CycNum]) -> CycVec {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn is_zero_vec(v: &[CycNum]) -> bool {
    v.iter().all(CycNum::is_zero)
}

pub fn conj_vec(v: &[CycNum]) -> CycVec {
    v.iter().map(CycNum::conjugate).collect()
}

pub fn conj_transpose(m: &CycMat) -> CycMat {
    linalg::transpose(m)
        .into_iter()
        .map(|r| conj_vec(&r))
        .collect()
}

pub fn rational_vec(v: &[i64]) -> CycVec {
    v.iter().map(|&x| CycNum::from_int(x)).collect()
}

pub fn rational_mat(rows: &[&[i64]]) -> CycMat {
    rows.iter().map(|r| rational_vec(r)).collect()
}

/// `v^H gram u`: linear in `u`, conjugate-linear in `v`.
pub fn hermitian(gram: &CycMat, u: &[CycNum], v: &[CycNum]) -> CycNum {
    let gu = linalg::mat_vec(gram, u);
    let mut acc = CycNum::zero();
    for (x, y) in v.iter().zip(&gu) {
        acc = acc.add_ref(&x.conjugate().mul_ref(y));
    }
    acc
}

/// Matrix over `Q` of the action `v -> m v` on flattened coordinates at
/// conductor `n` (`flatten(m v) = A flatten(v)`).
pub fn rational_action(m: &CycMat, n: usize) -> Mat<BigRational> {
    let dim = m.len();
    let phi = euler_phi(n);
    let size = dim * phi;
    let mut a = vec![vec![BigRational::zero(); size]; size];
    for p in 0..dim {
        for k in 0..phi {
            let mut e = vec![CycNum::zero(); dim];
            e[p] = CycNum::zeta_pow(n, k as i64);
            let img = flatten(&apply(m, &e), n);
            for (i, x) in img.into_iter().enumerate() {
                a[i][p * phi + k] = x;
            }
        }
    }
    a
}

pub fn cyc_rank(vectors: &[CycVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    linalg::rank(&vectors.to_vec())
}

pub fn identity_mat(n: usize) -> CycMat {
    linalg::identity(n)
}

pub fn is_identity(m: &CycMat) -> bool {
    m.iter().enumerate().all(|(i, r)| {
        r.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}
