//! JSON form `{"conductor": N, "coeffs": [["p","q"], ...]}` and a short text
//! syntax for command-line scalars.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{int, CycNum, Rational};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Repr {
    conductor: usize,
    coeffs: Vec<(String, String)>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            conductor: self.conductor(),
            coeffs: self
                .coeffs()
                .iter()
                .map(|q| (q.numer().to_string(), q.denom().to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|(p, q)| {
                let p: BigInt = p.parse().map_err(D::Error::custom)?;
                let q: BigInt = q.parse().map_err(D::Error::custom)?;
                if q == BigInt::from(0) {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(Rational::new(p, q))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycNum::new(r.conductor, coeffs).map_err(D::Error::custom)
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_term(t: &str) -> Result<CycNum> {
    let t = t.trim();
    let bad = || Error::InvalidInput(format!("bad scalar term {t:?}"));
    let (coef, atom) = match t.split_once('*') {
        Some((c, a)) => (parse_rational(c)?, a.trim()),
        None if t.starts_with('z') || t == "i" => (int(1), t),
        None => return Ok(CycNum::from_rational(parse_rational(t)?)),
    };
    let root = if atom == "i" {
        CycNum::zeta(4)
    } else {
        let rest = atom
            .strip_prefix("zeta")
            .or_else(|| atom.strip_prefix('z'))
            .ok_or_else(bad)?;
        let (n, k) = match rest.split_once('^') {
            Some((n, k)) => (n, k.trim().parse::<i64>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        CycNum::zeta_pow(n, k)
    };
    Ok(root.scale(&coef))
}

/// Parses either the JSON form or a sum of terms such as `i`, `zeta3`,
/// `1 + 2*z8^3`, `-1/2*zeta12^5`.
pub fn parse_cycnum(s: &str) -> Result<CycNum> {
    let s = s.trim();
    if s.starts_with('{') {
        return Ok(serde_json::from_str(s)?);
    }
    if s.is_empty() {
        return Err(Error::InvalidInput("empty scalar".into()));
    }
    // split on top-level + and -, keeping the sign with the term
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut prev = ' ';
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() && prev != '^' && prev != '*' {
            terms.push(std::mem::take(&mut cur));
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc = CycNum::zero();
    for t in terms {
        let t = t.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let x = parse_term(body)?;
        acc = if neg { acc.sub_ref(&x) } else { acc.add_ref(&x) };
    }
    Ok(acc)
}
