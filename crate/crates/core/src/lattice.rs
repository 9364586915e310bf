//! Finitely generated subgroups of `C^n` with cyclotomic coordinates, kept in
//! Hermite normal form over a rational coordinate system of their `Q`-span,
//! and rank-two lattices in `C`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::cyclotomic::{euler_phi, lcm, quadratic_field_discriminant, CycNum, Rational};
use crate::error::{Error, Result};
use crate::group::GroupRep;
use crate::linalg::{self, Mat, RationalSubspaceBasis};
use crate::vector::{self, CycVec};

#[derive(Clone, Debug)]
pub struct ZLattice {
    dim: usize,
    conductor: usize,
    ambient: RationalSubspaceBasis,
    basis: Mat<BigInt>,
    denominator: BigInt,
    recipe: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(k) => Some(k),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Index {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Index::Finite(k) => int_value(k).serialize(s),
            Index::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn int_value(k: &BigInt) -> Value {
    match i64::try_from(k) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(k.to_string()),
    }
}

fn to_rational_rows(m: &Mat<BigInt>) -> Mat<Rational> {
    m.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

impl ZLattice {
    /// The `Z`-span of `vectors` in `C^n`.
    pub fn from_generators(vectors: &[CycVec]) -> Result<Self> {
        let dim = vectors
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("no generators".into()))?;
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("generators of different lengths".into()));
        }
        let n = vectors.iter().fold(1, |acc, v| lcm(acc, vector::conductor_of_vec(v)));
        let flat: Vec<Vec<Rational>> = vectors.iter().map(|v| vector::flatten(v, n)).collect();
        Self::from_flat(dim, n, &flat)
    }

    /// The zero lattice in `C^dim`.
    pub fn zero(dim: usize) -> Self {
        ZLattice {
            dim,
            conductor: 1,
            ambient: RationalSubspaceBasis::from_vectors(dim, &[]),
            basis: Vec::new(),
            denominator: BigInt::one(),
            recipe: None,
        }
    }

    fn from_flat(dim: usize, conductor: usize, flat: &[Vec<Rational>]) -> Result<Self> {
        let size = dim * euler_phi(conductor);
        let ambient = RationalSubspaceBasis::from_vectors(size, flat);
        if ambient.dim() == 0 {
            let mut z = Self::zero(dim);
            z.conductor = conductor;
            z.ambient = ambient;
            return Ok(z);
        }
        let coords: Mat<Rational> = flat
            .iter()
            .map(|v| ambient.coordinates(v).expect("generator lies in its own span"))
            .collect();
        let (ints, den) = linalg::clear_denominators(&coords);
        let h = linalg::hnf(&ints);
        let content = h.iter().flatten().fold(den.clone(), |g, x| g.gcd(x));
        let basis: Mat<BigInt> = h
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &content).collect())
            .collect();
        let lat = ZLattice {
            dim,
            conductor,
            ambient,
            basis,
            denominator: den / &content,
            recipe: None,
        };
        debug_assert_eq!(lat.basis.len(), lat.ambient.dim());
        let rank = lat.rank();
        let real_rank = lat.real_rank();
        if real_rank < rank {
            return Err(Error::NotDiscrete { rank, real_rank });
        }
        Ok(lat)
    }

    /// Rank of the basis over `R`, computed as the rank of `[v | conj v]`.
    fn real_rank(&self) -> usize {
        let rows: Vec<CycVec> = self
            .basis_vectors()
            .into_iter()
            .map(|v| {
                let mut r = v.clone();
                r.extend(vector::conj_vec(&v));
                r
            })
            .collect();
        vector::cyc_rank(&rows)
    }

    pub fn with_recipe(mut self, tag: &str) -> Self {
        self.recipe = Some(tag.to_string());
        self
    }

    pub fn recipe(&self) -> Option<&str> {
        self.recipe.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn ambient(&self) -> &RationalSubspaceBasis {
        &self.ambient
    }

    pub fn hnf_basis(&self) -> &Mat<BigInt> {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Ambient coordinate vectors as elements of `C^n`.
    pub fn ambient_vectors(&self) -> Vec<CycVec> {
        self.ambient
            .rows()
            .iter()
            .map(|r| vector::unflatten(r, self.dim, self.conductor))
            .collect()
    }

    fn flat_basis(&self) -> Mat<Rational> {
        let den = Rational::from_integer(self.denominator.clone());
        to_rational_rows(&self.basis)
            .iter()
            .map(|r| {
                let c: Vec<Rational> = r.iter().map(|x| x / &den).collect();
                self.ambient.combine(&c)
            })
            .collect()
    }

    pub fn basis_vectors(&self) -> Vec<CycVec> {
        self.flat_basis()
            .iter()
            .map(|r| vector::unflatten(r, self.dim, self.conductor))
            .collect()
    }

    /// The same lattice with coordinates in `Q(zeta_m)`; `m` must be a
    /// multiple of the current conductor.
    pub fn lift(&self, m: usize) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        let flat: Vec<Vec<Rational>> = self
            .basis_vectors()
            .iter()
            .map(|v| vector::flatten(v, m))
            .collect();
        let mut out = Self::from_flat(self.dim, m, &flat).expect("lifting preserves discreteness");
        out.recipe = self.recipe.clone();
        out
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "lattices in C^{} and C^{}",
                self.dim, other.dim
            )));
        }
        let m = lcm(self.conductor, other.conductor);
        Ok((self.lift(m), other.lift(m)))
    }

    /// Integer coordinates of `v` in the HNF basis, if `v` is in the lattice.
    pub fn lattice_coordinates(&self, v: &[CycNum]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let m = lcm(self.conductor, vector::conductor_of_vec(v));
        if m != self.conductor {
            return self.lift(m).lattice_coordinates(v);
        }
        let flat = vector::flatten(v, m);
        let c = self.ambient.coordinates(&flat)?;
        if self.rank() == 0 {
            return Some(Vec::new());
        }
        let den = Rational::from_integer(self.denominator.clone());
        let target: Vec<Rational> = c.iter().map(|x| x * &den).collect();
        let ht = linalg::transpose(&to_rational_rows(&self.basis));
        let x = linalg::solve_least(&ht, &target)?;
        x.into_iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        self.lattice_coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Self) -> bool {
        self.basis_vectors().iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let mut flat = a.flat_basis();
        flat.extend(b.flat_basis());
        Self::from_flat(a.dim, a.conductor, &flat)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let fa = a.flat_basis();
        let fb = b.flat_basis();
        if fa.is_empty() || fb.is_empty() {
            let mut z = Self::zero(a.dim);
            z = z.lift(a.conductor);
            return Ok(z);
        }
        let mut stacked = fa.clone();
        stacked.extend(fb.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let (ints, _) = linalg::clear_denominators(&stacked);
        let ker = linalg::integer_left_kernel(&ints);
        let vecs: Vec<Vec<Rational>> = ker
            .iter()
            .map(|x| combine_rows(&x[..fa.len()], &fa))
            .collect();
        Self::from_flat(a.dim, a.conductor, &vecs)
    }

    /// Sublattice of vectors `sum x_i b_i` with every functional value
    /// `sum x_i f(b_i)` equal to zero.
    fn kernel_of_functionals(&self, values: &[CycVec]) -> Result<Self> {
        let flat = self.flat_basis();
        if flat.is_empty() {
            return Ok(self.clone());
        }
        let m = values
            .iter()
            .fold(self.conductor, |acc, v| lcm(acc, vector::conductor_of_vec(v)));
        let rows: Mat<Rational> = values.iter().map(|v| vector::flatten(v, m)).collect();
        if rows.first().is_none_or(|r| r.is_empty()) {
            return Ok(self.clone());
        }
        let (ints, _) = linalg::clear_denominators(&rows);
        let ker = linalg::integer_left_kernel(&ints);
        let vecs: Vec<Vec<Rational>> = ker.iter().map(|x| combine_rows(x, &flat)).collect();
        let mut out = Self::from_flat(self.dim, self.conductor, &vecs)?;
        out.recipe = None;
        Ok(out)
    }

    /// `self ∩ span_C(vectors)`.
    pub fn intersect_complex_span(&self, vectors: &[CycVec]) -> Result<Self> {
        let ann = annihilator(vectors, self.dim);
        let values: Vec<CycVec> = self
            .basis_vectors()
            .iter()
            .map(|b| ann.iter().map(|a| dot(a, b)).collect())
            .collect();
        self.kernel_of_functionals(&values)
    }

    /// `self ∩ span_R(vectors)`.
    pub fn intersect_real_span(&self, vectors: &[CycVec]) -> Result<Self> {
        let doubled: Vec<CycVec> = vectors.iter().map(|w| realify(w)).collect();
        let ann = annihilator(&doubled, 2 * self.dim);
        let values: Vec<CycVec> = self
            .basis_vectors()
            .iter()
            .map(|b| {
                let bb = realify(b);
                ann.iter().map(|a| dot(a, &bb)).collect()
            })
            .collect();
        self.kernel_of_functionals(&values)
    }

    /// `[self : sub]`, requiring `sub ⊆ self`.
    pub fn index(&self, sub: &Self) -> Result<Index> {
        let coords: Option<Mat<BigInt>> = sub
            .basis_vectors()
            .iter()
            .map(|b| self.lattice_coordinates(b))
            .collect();
        let coords = coords.ok_or(Error::NotContained)?;
        if sub.rank() < self.rank() {
            return Ok(Index::Infinite);
        }
        if self.rank() == 0 {
            return Ok(Index::Finite(BigInt::one()));
        }
        Ok(Index::Finite(linalg::int_det(&coords).abs()))
    }

    pub fn scale(&self, c: &CycNum) -> Result<Self> {
        if self.rank() == 0 {
            return Ok(self.clone());
        }
        let vecs: Vec<CycVec> = self
            .basis_vectors()
            .iter()
            .map(|b| vector::scale_vec(c, b))
            .collect();
        Self::from_generators(&vecs)
    }

    pub fn image(&self, m: &vector::CycMat) -> Result<Self> {
        if self.rank() == 0 {
            return Ok(self.clone());
        }
        let vecs: Vec<CycVec> = self
            .basis_vectors()
            .iter()
            .map(|b| vector::apply(m, b))
            .collect();
        Self::from_generators(&vecs)
    }

    /// `g(b) ∈ Λ` for every generator `g` and basis vector `b`.
    pub fn invariance_check(&self, group: &GroupRep) -> bool {
        if group.dimension() != self.dim {
            return false;
        }
        let basis = self.basis_vectors();
        group
            .generators()
            .iter()
            .all(|g| basis.iter().all(|b| self.contains(&vector::apply(g, b))))
    }

    pub fn to_json(&self) -> Value {
        #[derive(Serialize)]
        struct Repr<'a> {
            conductor: usize,
            dimension: usize,
            rank: usize,
            ambient: Vec<CycVec>,
            basis: Vec<Vec<Value>>,
            denominator: Value,
            #[serde(skip_serializing_if = "Option::is_none")]
            recipe: Option<&'a str>,
        }
        serde_json::to_value(Repr {
            conductor: self.conductor,
            dimension: self.dim,
            rank: self.rank(),
            ambient: self.ambient_vectors(),
            basis: self
                .basis
                .iter()
                .map(|r| r.iter().map(int_value).collect())
                .collect(),
            denominator: int_value(&self.denominator),
            recipe: self.recipe.as_deref(),
        })
        .expect("lattice serializes")
    }
}

impl PartialEq for ZLattice {
    fn eq(&self, other: &Self) -> bool {
        match self.common(other) {
            Ok((a, b)) => a.ambient == b.ambient && a.basis == b.basis && a.denominator == b.denominator,
            Err(_) => false,
        }
    }
}

impl Serialize for ZLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn combine_rows(x: &[BigInt], rows: &Mat<Rational>) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); rows.first().map_or(0, Vec::len)];
    for (c, r) in x.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        let c = Rational::from_integer(c.clone());
        for (o, y) in out.iter_mut().zip(r) {
            *o += &c * y;
        }
    }
    out
}

fn dot(a: &[CycNum], b: &[CycNum]) -> CycNum {
    a.iter()
        .zip(b)
        .fold(CycNum::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

fn realify(v: &[CycNum]) -> CycVec {
    let mut r = v.to_vec();
    r.extend(vector::conj_vec(v));
    r
}

/// Basis of `{a : a·w = 0 for all w}`.
fn annihilator(vectors: &[CycVec], dim: usize) -> Vec<CycVec> {
    let rows: Vec<CycVec> = vectors.iter().filter(|v| !vector::is_zero_vec(v)).cloned().collect();
    linalg::nullspace(&rows, dim)
}

// ---------------------------------------------------------------------------

/// `Γ = Z γ1 + Z γ2` in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankTwoLattice {
    g1: CycNum,
    g2: CycNum,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MultiplierRing {
    Integers,
    ImaginaryQuadraticOrder {
        discriminant: i64,
        conductor: i64,
        field_discriminant: i64,
        /// `Z + Z·generator` is the ring.
        generator: CycNum,
    },
}

impl MultiplierRing {
    pub fn discriminant(&self) -> Option<i64> {
        match self {
            MultiplierRing::Integers => None,
            MultiplierRing::ImaginaryQuadraticOrder { discriminant, .. } => Some(*discriminant),
        }
    }

    pub fn field_discriminant(&self) -> Option<i64> {
        match self {
            MultiplierRing::Integers => None,
            MultiplierRing::ImaginaryQuadraticOrder {
                field_discriminant, ..
            } => Some(*field_discriminant),
        }
    }

    pub fn is_cm(&self) -> bool {
        !matches!(self, MultiplierRing::Integers)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsogenyWitness {
    /// `c Γ' ⊆ Γ`.
    pub c: CycNum,
    #[serde(serialize_with = "ser_bigint")]
    pub index: BigInt,
}

fn ser_bigint<S: serde::Serializer>(k: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    int_value(k).serialize(s)
}

impl Serialize for RankTwoLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (a, b) = self.generators();
        [a, b].serialize(s)
    }
}

impl RankTwoLattice {
    pub fn new(g1: CycNum, g2: CycNum) -> Result<Self> {
        if g1.is_zero() {
            return Err(Error::NotDiscrete { rank: 2, real_rank: 1 });
        }
        let tau = g2.try_div(&g1)?;
        if tau.is_real() {
            return Err(Error::NotDiscrete { rank: 2, real_rank: 1 });
        }
        Ok(RankTwoLattice { g1, g2 })
    }

    pub fn generators(&self) -> (&CycNum, &CycNum) {
        (&self.g1, &self.g2)
    }

    pub fn tau(&self) -> CycNum {
        self.g2.try_div(&self.g1).expect("g1 nonzero")
    }

    /// Real coordinates `(u, v)` with `z = u γ1 + v γ2`, when both are rational.
    pub fn coordinates(&self, z: &CycNum) -> Option<(Rational, Rational)> {
        let w = z.try_div(&self.g1).ok()?;
        let tau = self.tau();
        let v = w
            .sub_ref(&w.conjugate())
            .try_div(&tau.sub_ref(&tau.conjugate()))
            .ok()?;
        let u = w.sub_ref(&v.mul_ref(&tau));
        Some((u.as_rational()?, v.as_rational()?))
    }

    pub fn contains(&self, z: &CycNum) -> bool {
        self.coordinates(z)
            .is_some_and(|(u, v)| u.is_integer() && v.is_integer())
    }

    /// `c Γ ⊆ Γ`.
    pub fn is_multiplier(&self, c: &CycNum) -> bool {
        self.contains(&c.mul_ref(&self.g1)) && self.contains(&c.mul_ref(&self.g2))
    }

    pub fn multiplier_ring(&self) -> MultiplierRing {
        let tau = self.tau();
        let poly = tau.minimal_polynomial();
        if poly.len() != 3 {
            return MultiplierRing::Integers;
        }
        // t^2 + p t + q; the primitive integer equation is a t^2 + b t + c
        let (q, p) = (&poly[0], &poly[1]);
        let a = p.denom().lcm(q.denom());
        let ar = Rational::from_integer(a.clone());
        let b = (p * &ar).to_integer();
        let c = (q * &ar).to_integer();
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        let disc = i64::try_from(disc).expect("discriminant fits in i64");
        let field = quadratic_field_discriminant(&Rational::from_integer(disc.into()));
        let f2 = disc / field;
        let conductor = (f2 as f64).sqrt().round() as i64;
        debug_assert_eq!(conductor * conductor, f2);
        MultiplierRing::ImaginaryQuadraticOrder {
            discriminant: disc,
            conductor,
            field_discriminant: field,
            generator: tau.scale(&ar),
        }
    }

    /// Some nonzero `c` with `c Γ' ⊆ Γ` of finite index, if `QΓ'` and `QΓ` are
    /// homothetic.
    pub fn isogeny_test(&self, other: &RankTwoLattice) -> Option<IsogenyWitness> {
        let c = if self.coordinates(&other.g1).is_some() && self.coordinates(&other.g2).is_some() {
            CycNum::one()
        } else {
            // x1 γ1 + x2 γ2 = α, x3 γ1 + x4 γ2 = β, α γ2' − β γ1' = 0
            let terms = [
                self.g1.mul_ref(&other.g2),
                self.g2.mul_ref(&other.g2),
                self.g1.mul_ref(&other.g1).neg_ref(),
                self.g2.mul_ref(&other.g1).neg_ref(),
            ];
            let m = terms.iter().fold(1, |acc, t| lcm(acc, t.conductor()));
            let cols: Vec<Vec<Rational>> = terms.iter().map(|t| t.lift(m).coeffs().to_vec()).collect();
            let system = linalg::transpose(&cols);
            let ker = linalg::nullspace(&system, 4);
            let x = ker.first()?;
            let alpha = self.g1.scale(&x[0]).add_ref(&self.g2.scale(&x[1]));
            alpha.try_div(&other.g1).ok()?
        };
        // clear denominators, then remove common content
        let coords = [
            self.coordinates(&c.mul_ref(&other.g1))?,
            self.coordinates(&c.mul_ref(&other.g2))?,
        ];
        let all = [&coords[0].0, &coords[0].1, &coords[1].0, &coords[1].1];
        let den = all.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = all
            .iter()
            .map(|q| (*q * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let scale = Rational::new(den, content.clone());
        let ints: Vec<BigInt> = ints.iter().map(|x| x / &content).collect();
        let index = (&ints[0] * &ints[3] - &ints[1] * &ints[2]).abs();
        Some(IsogenyWitness {
            c: c.scale(&scale),
            index,
        })
    }

    pub fn to_zlattice(&self) -> ZLattice {
        ZLattice::from_generators(&[vec![self.g1.clone()], vec![self.g2.clone()]])
            .expect("rank-two lattice is discrete")
    }
}
