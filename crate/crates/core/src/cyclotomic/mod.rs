//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! A [`CycNum`] stores its coordinates in the power basis
//! `1, zeta, ..., zeta^(phi(N)-1)` reduced modulo the `N`-th cyclotomic
//! polynomial, so equal field elements of the same conductor have identical
//! coefficient vectors. Values of different conductors are lifted to the lcm
//! conductor before any binary operation.

mod basis;
mod numeric;
mod serial;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use basis::{cyclotomic_polynomial, euler_phi, lcm};
pub use numeric::ComplexApprox;
pub use serial::parse_cycnum;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: usize,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum {
            conductor: 1,
            coeffs: vec![Rational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        CycNum {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// Builds a value from raw power-basis coordinates.
    pub fn new(conductor: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        let phi = euler_phi(conductor);
        if coeffs.len() != phi {
            return Err(Error::InvalidInput(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycNum { conductor, coeffs })
    }

    /// `zeta_n^k`, reduced.
    pub fn zeta_pow(n: usize, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        Self::from_exponents(n, &[(e, Rational::one())])
    }

    pub fn zeta(n: usize) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// `sum q_k zeta_n^k` for arbitrary exponents `k`.
    pub fn from_exponents(n: usize, terms: &[(usize, Rational)]) -> Self {
        let b = basis::basis(n);
        let mut coeffs = vec![Rational::zero(); b.phi];
        for (k, q) in terms {
            if q.is_zero() {
                continue;
            }
            for &(i, c) in &b.powers[k % n] {
                coeffs[i] += q * BigInt::from(c);
            }
        }
        CycNum {
            conductor: n,
            coeffs,
        }
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Re-expresses the value in `Q(zeta_m)`; `m` must be a multiple of the conductor.
    pub fn lift(&self, m: usize) -> CycNum {
        if m == self.conductor {
            return self.clone();
        }
        assert!(
            m % self.conductor == 0,
            "cannot lift conductor {} to {m}",
            self.conductor
        );
        let step = m / self.conductor;
        let terms: Vec<(usize, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k * step, c.clone()))
            .collect();
        Self::from_exponents(m, &terms)
    }

    fn aligned(&self, other: &CycNum) -> (CycNum, CycNum, usize) {
        let m = lcm(self.conductor, other.conductor);
        (self.lift(m), other.lift(m), m)
    }

    pub fn add_ref(&self, other: &CycNum) -> CycNum {
        if self.conductor == other.conductor {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect();
            return CycNum {
                conductor: self.conductor,
                coeffs,
            };
        }
        let (a, b, _) = self.aligned(other);
        a.add_ref(&b)
    }

    pub fn sub_ref(&self, other: &CycNum) -> CycNum {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul_ref(&self, other: &CycNum) -> CycNum {
        if self.conductor != other.conductor {
            if let Some(q) = self.as_rational() {
                return other.scale(&q);
            }
            if let Some(q) = other.as_rational() {
                return self.scale(&q);
            }
            let (a, b, _) = self.aligned(other);
            return a.mul_ref(&b);
        }
        let n = self.conductor;
        let b = basis::basis(n);
        let mut out = vec![Rational::zero(); b.phi];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for &(t, c) in &b.powers[(i + j) % n] {
                    out[t] += &xy * BigInt::from(c);
                }
            }
        }
        CycNum {
            conductor: n,
            coeffs: out,
        }
    }

    /// Matrix of multiplication by `self` on the power basis (columns are images).
    fn multiplication_matrix(&self) -> Mat<Rational> {
        let n = self.conductor;
        let phi = self.coeffs.len();
        let mut m = vec![vec![Rational::zero(); phi]; phi];
        for j in 0..phi {
            let col = self.mul_ref(&CycNum::zeta_pow(n, j as i64));
            for i in 0..phi {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m
    }

    /// Multiplicative inverse, by solving the linear system `self * y = 1`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rational(q.recip()).lift(self.conductor));
        }
        let m = self.multiplication_matrix();
        let mut rhs = vec![Rational::zero(); m.len()];
        rhs[0] = Rational::one();
        let y = linalg::solve(&m, &rhs).ok_or(Error::DivisionByZero)?;
        Ok(CycNum {
            conductor: self.conductor,
            coeffs: y,
        })
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Image under `zeta -> zeta^k`; `k` must be coprime to the conductor.
    pub fn galois(&self, k: i64) -> CycNum {
        let n = self.conductor as i64;
        let terms: Vec<(usize, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (((e as i64) * k).rem_euclid(n) as usize, c.clone()))
            .collect();
        Self::from_exponents(self.conductor, &terms)
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> CycNum {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// `|x|^2 = x * conj(x)`, a totally real value.
    pub fn norm_sq(&self) -> CycNum {
        self.mul_ref(&self.conjugate())
    }

    /// Monic minimal polynomial over `Q`, lowest degree first.
    pub fn minimal_polynomial(&self) -> Vec<Rational> {
        let phi = self.coeffs.len();
        // Find the first power that is a Q-combination of the lower ones.
        let mut powers: Vec<Vec<Rational>> = vec![CycNum::one().lift(self.conductor).coeffs];
        let mut cur = CycNum::one().lift(self.conductor);
        for _ in 0..=phi {
            cur = cur.mul_ref(self);
            // columns = previous powers, solve for the new one
            let cols = powers.len();
            let mut m = vec![vec![Rational::zero(); cols]; phi];
            for (j, p) in powers.iter().enumerate() {
                for i in 0..phi {
                    m[i][j] = p[i].clone();
                }
            }
            if let Some(sol) = linalg::solve_least(&m, &cur.coeffs) {
                let mut poly: Vec<Rational> = sol.into_iter().map(|c| -c).collect();
                poly.push(Rational::one());
                return poly;
            }
            powers.push(cur.coeffs.clone());
        }
        unreachable!("degree cannot exceed phi(N)")
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial().len() - 1
    }

    /// Approximation under `zeta_N -> exp(2 pi i / N)` with a rigorous error bound.
    pub fn numeric_embed(&self, precision: u32) -> ComplexApprox {
        numeric::embed(self, precision.max(53))
    }

    /// Sign of a real value, decided exactly (zero test is exact; nonzero values
    /// are separated from zero by refining the embedding precision).
    pub fn real_sign(&self) -> Result<i8> {
        if !self.is_real() {
            return Err(Error::Precondition("sign of a non-real value".into()));
        }
        if self.is_zero() {
            return Ok(0);
        }
        let mut prec = 64;
        loop {
            let a = self.numeric_embed(prec);
            if a.re.abs() > a.bound {
                return Ok(if a.re.is_positive() { 1 } else { -1 });
            }
            prec *= 2;
            if prec > 1 << 16 {
                return Err(Error::Consistency(
                    "nonzero real value not separated from zero".into(),
                ));
            }
        }
    }

    pub fn is_positive_real(&self) -> Result<bool> {
        Ok(self.real_sign()? > 0)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            self.coeffs == other.coeffs
        } else {
            let (a, b, _) = self.aligned(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycNum {}

impl From<Rational> for CycNum {
    fn from(q: Rational) -> Self {
        CycNum::from_rational(q)
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                self.$inner(rhs)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$inner(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "z{}", self.conductor)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Polynomial evaluation with rational coefficients (lowest degree first).
pub fn eval_poly(poly: &[Rational], x: &CycNum) -> CycNum {
    let mut acc = CycNum::zero();
    for c in poly.iter().rev() {
        acc = acc.mul_ref(x).add_ref(&CycNum::from_rational(c.clone()));
    }
    acc
}

/// `sqrt(d)` for a fundamental discriminant `d`, realized as a quadratic
/// Gauss sum in `Q(zeta_|d|)`.
pub fn sqrt_fundamental_discriminant(d: i64) -> CycNum {
    let m = d.unsigned_abs() as usize;
    let terms: Vec<(usize, Rational)> = (1..m)
        .filter_map(|a| {
            let s = kronecker(d, a as i64);
            (s != 0).then(|| (a, int(s)))
        })
        .collect();
    CycNum::from_exponents(m, &terms)
}

/// Kronecker symbol `(d / n)` for `n > 0`.
pub fn kronecker(d: i64, n: i64) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut result = 1i64;
    while n % 2 == 0 {
        n /= 2;
        let r = d.rem_euclid(8);
        if d % 2 == 0 {
            return 0;
        }
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    result * jacobi(d, n)
}

fn jacobi(a: i64, n: i64) -> i64 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Fundamental discriminant of `Q(sqrt(t))` for a nonzero rational `t` that is
/// not a square.
pub fn quadratic_field_discriminant(t: &Rational) -> i64 {
    // sqrt(p/q) generates the same field as sqrt(p*q)
    let v = t.numer() * t.denom();
    let v: i64 = i64::try_from(v).expect("discriminant out of range");
    let mut sf = v.signum();
    let mut m = v.abs();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            sf *= p;
        }
        p += 1;
    }
    sf *= m;
    if sf.rem_euclid(4) == 1 {
        sf
    } else {
        4 * sf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, k: i64) -> CycNum {
        CycNum::zeta_pow(n, k)
    }

    #[test]
    fn i_squared() {
        assert_eq!(z(4, 1) * z(4, 1), CycNum::from_int(-1));
    }

    #[test]
    fn primitive_cube_roots_sum() {
        assert_eq!(z(3, 1) + z(3, 2), CycNum::from_int(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let x = CycNum::one() + z(5, 1);
        let y = x.inv().unwrap();
        assert!((y * x).is_one());
        assert!(matches!(CycNum::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn cross_conductor_lifts() {
        // i * zeta_3 lives in Q(zeta_12)
        let p = z(4, 1) * z(3, 1);
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, z(12, 3 + 4));
        assert_eq!(z(6, 2), z(3, 1));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(4, 1).conjugate(), -z(4, 1));
        assert_eq!(CycNum::from_rational(rat(3, 7)).conjugate(), CycNum::from_rational(rat(3, 7)));
        let x = z(7, 1) + CycNum::from_int(2) * z(7, 3);
        assert_eq!(x.conjugate().conjugate(), x);
        assert_ne!(x.conjugate(), x);
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(z(3, 1).minimal_polynomial(), vec![int(1), int(1), int(1)]);
        assert_eq!(CycNum::from_int(5).minimal_polynomial(), vec![int(-5), int(1)]);
        let sqrt2 = z(8, 1) + z(8, -1);
        assert_eq!(sqrt2.minimal_polynomial(), vec![int(-2), int(0), int(1)]);
        assert_eq!(z(5, 1).degree(), 4);
    }

    #[test]
    fn gauss_sums() {
        for d in [-3i64, -4, -7, -8, -11, 5, 8, 12] {
            let s = sqrt_fundamental_discriminant(d);
            assert_eq!(s.mul_ref(&s), CycNum::from_int(d), "d = {d}");
        }
    }

    #[test]
    fn field_discriminants() {
        assert_eq!(quadratic_field_discriminant(&int(-1)), -4);
        assert_eq!(quadratic_field_discriminant(&int(-3)), -3);
        assert_eq!(quadratic_field_discriminant(&int(-2)), -8);
        assert_eq!(quadratic_field_discriminant(&int(-12)), -3);
        assert_eq!(quadratic_field_discriminant(&rat(-1, 2)), -8);
        assert_eq!(quadratic_field_discriminant(&int(-7)), -7);
    }

    #[test]
    fn signs() {
        let sqrt2 = z(8, 1) + z(8, -1);
        assert_eq!(sqrt2.real_sign().unwrap(), 1);
        assert_eq!((CycNum::from_int(1) - sqrt2.clone()).real_sign().unwrap(), -1);
        // 1 + zeta_5 + zeta_5^-1 = golden ratio
        let phi = CycNum::one() + z(5, 1) + z(5, -1);
        assert_eq!(phi.real_sign().unwrap(), 1);
        assert!(z(4, 1).real_sign().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(format!("{}", CycNum::zero()), "0");
        assert_eq!(format!("{}", z(3, 2)), "-1 - z3");
    }
}
