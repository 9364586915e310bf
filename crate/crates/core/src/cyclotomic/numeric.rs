//! Fixed-point complex embedding, used only for diagnostics and for
//! separating a known-nonzero real value from zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CycNum;

/// `re + i im` with `|true - approx| <= bound` in each coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexApprox {
    pub re: BigRational,
    pub im: BigRational,
    pub bound: BigRational,
}

impl ComplexApprox {
    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::NAN)
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64().unwrap_or(f64::NAN)
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::INFINITY)
    }
}

const GUARD: u32 = 64;

struct Fixed {
    bits: u32,
    one: BigInt,
}

impl Fixed {
    fn new(bits: u32) -> Self {
        Fixed {
            bits,
            one: BigInt::one() << bits,
        }
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    /// atan(1/x) for an integer x > 1.
    fn atan_inv(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = &self.one / &x;
        let mut sum = BigInt::zero();
        let mut k = 0i64;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &x2;
            k += 1;
        }
        sum
    }

    fn pi(&self) -> BigInt {
        BigInt::from(16) * self.atan_inv(5) - BigInt::from(4) * self.atan_inv(239)
    }

    /// (cos t, sin t) for |t| <= pi by Taylor series.
    fn cos_sin(&self, t: &BigInt) -> (BigInt, BigInt) {
        let t2 = self.mul(t, t);
        let mut cos = BigInt::zero();
        let mut term = self.one.clone();
        let mut j = 0i64;
        while !term.is_zero() {
            cos += &term;
            term = -self.mul(&term, &t2) / BigInt::from((2 * j + 1) * (2 * j + 2));
            j += 1;
        }
        let mut sin = BigInt::zero();
        let mut term = t.clone();
        let mut j = 1i64;
        while !term.is_zero() {
            sin += &term;
            term = -self.mul(&term, &t2) / BigInt::from((2 * j) * (2 * j + 1));
            j += 1;
        }
        (cos, sin)
    }
}

pub(super) fn embed(x: &CycNum, precision: u32) -> ComplexApprox {
    let n = x.conductor() as i64;
    let fx = Fixed::new(precision + GUARD);
    let two_pi = fx.pi() * BigInt::from(2);
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let mut abs_sum = BigRational::zero();
    for (k, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        abs_sum += c.abs();
        let mut k = k as i64;
        if 2 * k > n {
            k -= n;
        }
        let angle = &two_pi * BigInt::from(k) / BigInt::from(n);
        let (cos, sin) = fx.cos_sin(&angle);
        re += cos * c.numer() / c.denom();
        im += sin * c.numer() / c.denom();
    }
    let scale = fx.one.clone();
    let bound = (BigRational::one() + abs_sum)
        / BigRational::from_integer(BigInt::one() << (precision - 1));
    ComplexApprox {
        re: BigRational::new(re, scale.clone()),
        im: BigRational::new(im, scale),
        bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn roots_of_unity() {
        let i = CycNum::zeta(4).numeric_embed(53);
        assert!(close(i.re_f64(), 0.0) && close(i.im_f64(), 1.0));
        let m1 = CycNum::from_int(-1).numeric_embed(53);
        assert!(close(m1.re_f64(), -1.0) && close(m1.im_f64(), 0.0));
        let w = CycNum::zeta(3).numeric_embed(53);
        assert!(close(w.re_f64(), -0.5));
        assert!(close(w.im_f64(), 3f64.sqrt() / 2.0));
    }

    #[test]
    fn high_precision_bound_is_tight() {
        let x = CycNum::zeta(8) + CycNum::zeta_pow(8, -1);
        let a = x.numeric_embed(200);
        // (sqrt 2)^2 = 2 up to the stated error
        let sq = &a.re * &a.re;
        let err = (sq - BigRational::from_integer(BigInt::from(2))).abs();
        assert!(err < BigRational::new(BigInt::one(), BigInt::one() << 190));
    }
}
