//! Per-conductor tables: the cyclotomic polynomial and the power-basis
//! reduction of every exponent `0..N`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;

/// Reduction data for `Q(zeta_N)`.
#[derive(Debug)]
pub struct CycBasis {
    pub phi: usize,
    /// `powers[k]` is `zeta_N^k` reduced mod `Phi_N`, stored sparsely.
    pub powers: Vec<Vec<(usize, i64)>>,
}

static CACHE: OnceLock<RwLock<HashMap<usize, Arc<CycBasis>>>> = OnceLock::new();

pub fn basis(conductor: usize) -> Arc<CycBasis> {
    assert!(conductor > 0, "conductor must be positive");
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(b) = cache.read().expect("basis cache poisoned").get(&conductor) {
        return Arc::clone(b);
    }
    let built = Arc::new(CycBasis::build(conductor));
    let mut guard = cache.write().expect("basis cache poisoned");
    Arc::clone(guard.entry(conductor).or_insert(built))
}

pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

/// `Phi_n` with integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_divide(&num, &div);
        }
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl CycBasis {
    fn build(conductor: usize) -> Self {
        let cyclotomic = cyclotomic_polynomial(conductor);
        let phi = cyclotomic.len() - 1;
        debug_assert_eq!(phi, euler_phi(conductor));
        let mut powers = Vec::with_capacity(conductor);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..conductor {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect(),
            );
            // multiply by x and reduce the overflow coefficient
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * cyclotomic[i];
                }
            }
        }
        CycBasis { phi, powers }
    }
}
