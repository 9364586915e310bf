//! Quaternion algebras over Q, the complex tori `H_R / O` with complex
//! structure given by right multiplication by some `c` with `c^2 = -1`, and
//! their endomorphism rings.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::{int, quadratic_field_discriminant, sqrt_fundamental_discriminant, CycNum, Rational};
use crate::error::{Error, Result};
use crate::forge::{self, ImaginaryQuadraticOrder, OrderSplitting};
use crate::lattice::ZLattice;
use crate::linalg::{self, Mat};
use crate::schur::{BilinearType, CharacterProfile, FieldClass};
use crate::vector::{self, CycMat, CycVec};

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// `(a, b / Q)`: `i^2 = a`, `j^2 = b`, `ij = -ji = k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuatAlgebra {
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    Definite,
    Indefinite,
}

/// `x0 + x1 i + x2 j + x3 k` with cyclotomic (usually real) coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuatElement(pub [CycNum; 4]);

impl QuatElement {
    pub fn new(x: [CycNum; 4]) -> Self {
        QuatElement(x)
    }

    pub fn rational(x: [i64; 4]) -> Self {
        QuatElement(x.map(CycNum::from_int))
    }

    pub fn from_rationals(x: &[Rational]) -> Self {
        QuatElement(std::array::from_fn(|k| CycNum::from_rational(x[k].clone())))
    }

    pub fn coords(&self) -> &[CycNum; 4] {
        &self.0
    }

    pub fn is_pure(&self) -> bool {
        self.0[0].is_zero()
    }

    pub fn as_rationals(&self) -> Option<[Rational; 4]> {
        let v: Vec<Rational> = self.0.iter().map(CycNum::as_rational).collect::<Option<_>>()?;
        Some(std::array::from_fn(|k| v[k].clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        QuatElement(std::array::from_fn(|k| self.0[k].add_ref(&other.0[k])))
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        QuatElement(std::array::from_fn(|k| self.0[k].mul_ref(c)))
    }
}

impl QuatAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidInput("quaternion parameters must be nonzero".into()));
        }
        Ok(QuatAlgebra { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(int(a), int(b))
    }

    pub fn hamilton() -> Self {
        QuatAlgebra { a: int(-1), b: int(-1) }
    }

    pub fn definiteness(&self) -> Definiteness {
        if self.a.is_negative() && self.b.is_negative() {
            Definiteness::Definite
        } else {
            Definiteness::Indefinite
        }
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let a = CycNum::from_rational(self.a.clone());
        let b = CycNum::from_rational(self.b.clone());
        let ab = a.mul_ref(&b);
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        let p = |u: &CycNum, v: &CycNum| u.mul_ref(v);
        QuatElement([
            p(x0, y0)
                .add_ref(&a.mul_ref(&p(x1, y1)))
                .add_ref(&b.mul_ref(&p(x2, y2)))
                .sub_ref(&ab.mul_ref(&p(x3, y3))),
            p(x0, y1)
                .add_ref(&p(x1, y0))
                .sub_ref(&b.mul_ref(&p(x2, y3)))
                .add_ref(&b.mul_ref(&p(x3, y2))),
            p(x0, y2)
                .add_ref(&p(x2, y0))
                .add_ref(&a.mul_ref(&p(x1, y3)))
                .sub_ref(&a.mul_ref(&p(x3, y1))),
            p(x0, y3).add_ref(&p(x3, y0)).add_ref(&p(x1, y2)).sub_ref(&p(x2, y1)),
        ])
    }

    /// `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn reduced_norm(&self, x: &QuatElement) -> CycNum {
        let [x0, x1, x2, x3] = &x.0;
        let ab = &self.a * &self.b;
        x0.mul_ref(x0)
            .sub_ref(&x1.mul_ref(x1).scale(&self.a))
            .sub_ref(&x2.mul_ref(x2).scale(&self.b))
            .add_ref(&x3.mul_ref(x3).scale(&ab))
    }

    /// Square of a pure quaternion `r1 i + r2 j + r3 k`.
    pub fn pure_square(&self, r: &[Rational; 3]) -> Rational {
        &self.a * &r[0] * &r[0] + &self.b * &r[1] * &r[1] - &self.a * &self.b * &r[2] * &r[2]
    }

    fn basis_element(k: usize) -> QuatElement {
        let mut x = [0i64; 4];
        x[k] = 1;
        QuatElement::rational(x)
    }

    /// Matrix of `v -> q v` on coordinate columns.
    pub fn left_mult(&self, q: &QuatElement) -> CycMat {
        let cols: Vec<QuatElement> = (0..4).map(|c| self.mul(q, &Self::basis_element(c))).collect();
        (0..4).map(|r| (0..4).map(|c| cols[c].0[r].clone()).collect()).collect()
    }

    /// Matrix of `v -> v q` on coordinate columns.
    pub fn right_mult(&self, q: &QuatElement) -> CycMat {
        let cols: Vec<QuatElement> = (0..4).map(|c| self.mul(&Self::basis_element(c), q)).collect();
        (0..4).map(|r| (0..4).map(|c| cols[c].0[r].clone()).collect()).collect()
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SubfieldWitness {
    /// `(r1, r2, r3)` with `x = r1 i + r2 j + r3 k`.
    pub x: QuatElement,
    #[serde(serialize_with = "ser_rational")]
    pub t: Rational,
    pub discriminant: i64,
}

fn rationals_up_to(bound: u64) -> Vec<Rational> {
    let b = bound as i64;
    let mut out = vec![int(0)];
    for h in 1..=b {
        let mut layer = Vec::new();
        for d in 1..=h {
            for n in 0..=h {
                if n.max(d) != h || n == 0 {
                    continue;
                }
                let q = Rational::new(n.into(), d.into());
                if q.denom() == &BigInt::from(d) && !layer.contains(&q) {
                    layer.push(q.clone());
                    layer.push(-q);
                }
            }
        }
        out.extend(layer);
    }
    out
}

/// Pure quaternions `x = r1 i + r2 j + r3 k` of height at most `bound`,
/// smallest height first, with fewest nonzero coordinates first within a
/// height.
fn pure_candidates(bound: u64) -> Vec<[Rational; 3]> {
    let qs = rationals_up_to(bound);
    let height = |q: &Rational| q.numer().abs().max(q.denom().clone());
    let mut all: Vec<(BigInt, usize, [usize; 3], [usize; 3])> = Vec::new();
    for (i1, r1) in qs.iter().enumerate() {
        for (i2, r2) in qs.iter().enumerate() {
            for (i3, r3) in qs.iter().enumerate() {
                let r = [r1, r2, r3];
                let nz = r.iter().filter(|q| !q.is_zero()).count();
                if nz == 0 {
                    continue;
                }
                let h = r.iter().map(|q| height(q)).max().expect("three");
                // zero coordinates sort last so that i precedes j precedes k
                let key = [i1, i2, i3].map(|i| if i == 0 { usize::MAX } else { i });
                all.push((h, nz, key, [i1, i2, i3]));
            }
        }
    }
    all.sort();
    all.into_iter()
        .map(|(_, _, _, [a, b, c])| [qs[a].clone(), qs[b].clone(), qs[c].clone()])
        .collect()
}

fn pure(r: &[Rational; 3]) -> QuatElement {
    QuatElement::from_rationals(&[int(0), r[0].clone(), r[1].clone(), r[2].clone()])
}

/// First pure quaternion `x` (height at most `bound`) with `x^2 = t < 0`,
/// giving the imaginary quadratic subfield `Q(x) = Q(sqrt t)` of `H`.
pub fn imaginary_quadratic_subfield(h: &QuatAlgebra, bound: u64) -> Result<SubfieldWitness> {
    imaginary_quadratic_subfields(h, bound)
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoWitness(format!("no imaginary quadratic subfield up to height {bound}")))
}

/// One witness for each distinct imaginary quadratic subfield found up to
/// height `bound`, in search order.
pub fn imaginary_quadratic_subfields(h: &QuatAlgebra, bound: u64) -> Vec<SubfieldWitness> {
    let mut out: Vec<SubfieldWitness> = Vec::new();
    for r in pure_candidates(bound) {
        let t = h.pure_square(&r);
        if !t.is_negative() {
            continue;
        }
        let disc = quadratic_field_discriminant(&t);
        if out.iter().any(|w| w.discriminant == disc) {
            continue;
        }
        out.push(SubfieldWitness {
            x: pure(&r),
            t,
            discriminant: disc,
        });
    }
    out
}

// ---------------------------------------------------------------------------

/// A full-rank subring of `H`, given by a `Z`-basis of coordinate vectors.
#[derive(Clone, Debug, Serialize)]
pub struct QuatOrder {
    #[serde(skip)]
    pub basis: Vec<[Rational; 4]>,
    pub lattice: ZLattice,
}

impl QuatOrder {
    pub fn new(h: &QuatAlgebra, basis: Vec<[Rational; 4]>) -> Result<Self> {
        let vecs: Vec<CycVec> = basis
            .iter()
            .map(|v| v.iter().map(|q| CycNum::from_rational(q.clone())).collect())
            .collect();
        let lattice = ZLattice::from_generators(&vecs)?;
        if basis.len() != 4 || lattice.rank() != 4 {
            return Err(Error::InvalidInput("an order needs a Z-basis of four elements".into()));
        }
        if !lattice.contains(&QuatElement::rational([1, 0, 0, 0]).0) {
            return Err(Error::InvalidInput("order does not contain 1".into()));
        }
        for x in &vecs {
            for y in &vecs {
                let p = h.mul(&QuatElement::new(to4(x)), &QuatElement::new(to4(y)));
                if !lattice.contains(&p.0) {
                    return Err(Error::InvalidInput("lattice is not closed under multiplication".into()));
                }
            }
        }
        Ok(QuatOrder { basis, lattice })
    }

    /// `Z<1, i, j, k>`.
    pub fn lipschitz(h: &QuatAlgebra) -> Result<Self> {
        let e = |k: usize| std::array::from_fn(|m| if m == k { int(1) } else { int(0) });
        Self::new(h, (0..4).map(e).collect())
    }

    /// Basis as matrix columns.
    fn basis_matrix(&self) -> Mat<Rational> {
        (0..4).map(|r| (0..4).map(|c| self.basis[c][r].clone()).collect()).collect()
    }
}

fn to4(v: &[CycNum]) -> [CycNum; 4] {
    std::array::from_fn(|k| v[k].clone())
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Direction {
    /// `c` is a positive or negative real multiple of the rational pure
    /// quaternion `x`, so `c ∈ R F` with `F = Q(x)`.
    Rational {
        x: QuatElement,
        #[serde(serialize_with = "ser_rational")]
        t: Rational,
        field_discriminant: i64,
        positive: bool,
    },
    Generic,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuatTorus {
    pub algebra: QuatAlgebra,
    pub order: QuatOrder,
    pub c: QuatElement,
    /// Right multiplication by `c` on coordinate columns.
    pub j: CycMat,
    pub direction: Direction,
}

fn classify_direction(h: &QuatAlgebra, c: &QuatElement) -> Result<Direction> {
    let p = &c.0[1..];
    let lead = p.iter().position(|x| !x.is_zero()).expect("c is not real");
    let ratios: Option<Vec<Rational>> = p.iter().map(|x| x.try_div(&p[lead]).ok()?.as_rational()).collect();
    let Some(r) = ratios else {
        return Ok(Direction::Generic);
    };
    // primitive integer direction
    let den = r.iter().fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
    let ints: Vec<BigInt> = r.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| num_integer::gcd(acc, v.clone()));
    let x: [Rational; 3] = std::array::from_fn(|k| Rational::from_integer(&ints[k] / &g));
    let t = h.pure_square(&x);
    if !t.is_negative() {
        return Err(Error::Consistency("square of the direction of c is not negative".into()));
    }
    let lambda = p[lead].try_div(&CycNum::from_rational(x[lead].clone()))?;
    Ok(Direction::Rational {
        field_discriminant: quadratic_field_discriminant(&t),
        x: pure(&x),
        t,
        positive: lambda.real_sign()? > 0,
    })
}

/// The torus `H_R / O` with complex structure `v -> v c`.
pub fn build_quat_torus(h: &QuatAlgebra, order: QuatOrder, c: QuatElement) -> Result<QuatTorus> {
    if !c.0.iter().all(CycNum::is_real) {
        return Err(Error::InvalidInput("c must have real coordinates".into()));
    }
    let sq = h.mul(&c, &c);
    if sq != QuatElement::rational([-1, 0, 0, 0]) {
        return Err(Error::InvalidInput(format!("c^2 = {} + ... is not -1", sq.0[0])));
    }
    let direction = classify_direction(h, &c)?;
    let j = h.right_mult(&c);
    let neg_id = linalg::mat_scale(&vector::identity_mat(4), &CycNum::from_int(-1));
    if linalg::mat_mul(&j, &j) != neg_id {
        return Err(Error::Consistency("J^2 != -1".into()));
    }
    Ok(QuatTorus {
        algebra: h.clone(),
        order,
        c,
        j,
        direction,
    })
}

/// `(i + sqrt2 j) / sqrt3`, with coordinates in `Q(ζ24)`.
pub fn generic_c() -> QuatElement {
    let sqrt2 = CycNum::zeta(8).add_ref(&CycNum::zeta_pow(8, -1));
    let sqrt3 = CycNum::zeta(12).add_ref(&CycNum::zeta_pow(12, -1));
    let third = Rational::new(1.into(), 3.into());
    let c1 = sqrt3.scale(&third);
    let c2 = sqrt2.mul_ref(&sqrt3).scale(&third);
    QuatElement::new([CycNum::zero(), c1, c2, CycNum::zero()])
}

/// Hamilton quaternions, Lipschitz order, `c = i`.
pub fn preset(name: &str) -> Result<QuatTorus> {
    let h = QuatAlgebra::hamilton();
    let o = QuatOrder::lipschitz(&h)?;
    match name {
        "example-non-generic" => build_quat_torus(&h, o, generic_c()),
        "example-non-c-i" => build_quat_torus(&h, o, QuatElement::rational([0, 1, 0, 0])),
        other => Err(Error::InvalidInput(format!("unknown quaternion torus {other:?}"))),
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EndTag {
    OrderInDefiniteQuaternion,
    OrderInM2OfImaginaryQuadratic { discriminant: i64 },
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbelianVerdict {
    Abelian,
    NotAbelian,
    /// Either not abelian, or isomorphic to a product of mutually isogenous
    /// elliptic curves.
    Disjunction,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndomorphismRing {
    /// `Z`-basis as rational 4x4 matrices on coordinate columns.
    #[serde(serialize_with = "ser_mats")]
    pub basis: Vec<Mat<Rational>>,
    pub rank: usize,
    pub tag: EndTag,
    /// Every basis element is a left multiplication `v -> q v`.
    pub left_multiplications: bool,
    /// The map `u -> u(1)` is a ring isomorphism onto the order, checked on
    /// structure constants.
    pub matches_order: bool,
    pub verdict: AbelianVerdict,
}

fn ser_mats<S: Serializer>(ms: &[Mat<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<Vec<String>>> = ms
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect())
        .collect();
    v.serialize(s)
}

fn to_cyc(m: &Mat<Rational>) -> CycMat {
    m.iter().map(|r| r.iter().map(|q| CycNum::from_rational(q.clone())).collect()).collect()
}

/// Rational 4x4 matrices commuting with `j`, as vectors in `Q^16`.
fn rational_commutant(j: &CycMat) -> Vec<Vec<Rational>> {
    let n = vector::conductor_of_mat(j);
    let jl = vector::lift_mat(j, n);
    let width = crate::cyclotomic::euler_phi(n);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            // (X J - J X)[r][c] = Σ_k X[r][k] J[k][c] - J[r][k] X[k][c]
            let mut eq = vec![vec![int(0); 16]; width];
            for k in 0..4 {
                for (e, q) in jl[k][c].coeffs().iter().enumerate() {
                    eq[e][r * 4 + k] += q;
                }
                for (e, q) in jl[r][k].coeffs().iter().enumerate() {
                    eq[e][k * 4 + c] -= q;
                }
            }
            rows.extend(eq);
        }
    }
    linalg::nullspace(&rows, 16)
}

fn flat_to_mat(v: &[Rational]) -> Mat<Rational> {
    v.chunks(4).map(<[Rational]>::to_vec).collect()
}

fn mat_to_flat(m: &Mat<Rational>) -> Vec<Rational> {
    m.iter().flatten().cloned().collect()
}

/// Rational matrices commuting with `J` and mapping the order lattice into
/// itself.
pub fn torus_endomorphisms(t: &QuatTorus) -> Result<EndomorphismRing> {
    let b = t.order.basis_matrix();
    let b_inv = linalg::inverse(&b).ok_or_else(|| Error::Consistency("singular order basis".into()))?;
    let bc = to_cyc(&b);
    let b_inv_c = to_cyc(&b_inv);
    // work in order coordinates, where preserving the lattice means integrality
    let j_local = linalg::mat_mul(&b_inv_c, &linalg::mat_mul(&t.j, &bc));
    let space: Vec<CycVec> = rational_commutant(&j_local)
        .iter()
        .map(|v| v.iter().map(|q| CycNum::from_rational(q.clone())).collect())
        .collect();
    let unit: Vec<CycVec> = (0..16)
        .map(|k| (0..16).map(|m| CycNum::from_int(i64::from(m == k))).collect())
        .collect();
    let integral = ZLattice::from_generators(&unit)?.intersect_complex_span(&space)?;
    let basis: Vec<Mat<Rational>> = integral
        .basis_vectors()
        .iter()
        .map(|v| {
            let y = flat_to_mat(&v.iter().map(|x| x.as_rational().expect("rational")).collect::<Vec<_>>());
            linalg::mat_mul(&b, &linalg::mat_mul(&y, &b_inv))
        })
        .collect();
    let rank = basis.len();

    // closure and identity
    let id: Mat<Rational> = linalg::identity(4);
    let in_ring = |m: &Mat<Rational>| -> bool {
        let y = linalg::mat_mul(&b_inv, &linalg::mat_mul(m, &b));
        let v: CycVec = mat_to_flat(&y).into_iter().map(CycNum::from_rational).collect();
        integral.contains(&v)
    };
    if !in_ring(&id) {
        return Err(Error::Consistency("endomorphism ring lacks the identity".into()));
    }
    for x in &basis {
        for y in &basis {
            if !in_ring(&linalg::mat_mul(x, y)) {
                return Err(Error::Consistency("endomorphism ring is not closed".into()));
            }
        }
    }

    let h = &t.algebra;
    let one = [int(1), int(0), int(0), int(0)];
    let images: Vec<QuatElement> = basis
        .iter()
        .map(|m| QuatElement::from_rationals(&linalg::mat_vec(m, &one)))
        .collect();
    let left_multiplications = basis
        .iter()
        .zip(&images)
        .all(|(m, q)| to_cyc(m) == h.left_mult(q));
    let matches_order = left_multiplications && rank == 4 && {
        let gens: Vec<CycVec> = images.iter().map(|q| q.0.to_vec()).collect();
        let same_lattice = ZLattice::from_generators(&gens)? == t.order.lattice;
        same_lattice
            && basis.iter().zip(&images).all(|(x, qx)| {
                basis.iter().zip(&images).all(|(y, qy)| {
                    let xy = linalg::mat_mul(x, y);
                    QuatElement::from_rationals(&linalg::mat_vec(&xy, &one)) == h.mul(qx, qy)
                })
            })
    };

    let tag = if rank == 4 && left_multiplications && h.definiteness() == Definiteness::Definite {
        EndTag::OrderInDefiniteQuaternion
    } else if rank == 8 {
        match imaginary_center(&basis) {
            Some(d) => EndTag::OrderInM2OfImaginaryQuadratic { discriminant: d },
            None => EndTag::Other,
        }
    } else {
        EndTag::Other
    };
    let verdict = match tag {
        EndTag::OrderInDefiniteQuaternion => AbelianVerdict::NotAbelian,
        EndTag::OrderInM2OfImaginaryQuadratic { .. } => AbelianVerdict::Abelian,
        EndTag::Other => AbelianVerdict::Undetermined,
    };
    Ok(EndomorphismRing {
        basis,
        rank,
        tag,
        left_multiplications,
        matches_order,
        verdict,
    })
}

/// Discriminant of the center when it is an imaginary quadratic field.
fn imaginary_center(basis: &[Mat<Rational>]) -> Option<i64> {
    let k = basis.len();
    // Σ a_m X_m commuting with every X_l
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for xl in basis {
        let comms: Vec<Vec<Rational>> = basis
            .iter()
            .map(|xm| mat_to_flat(&linalg::mat_sub(&linalg::mat_mul(xm, xl), &linalg::mat_mul(xl, xm))))
            .collect();
        for e in 0..16 {
            rows.push((0..k).map(|m| comms[m][e].clone()).collect());
        }
    }
    let center: Vec<Mat<Rational>> = linalg::nullspace(&rows, k)
        .iter()
        .map(|a| {
            a.iter()
                .zip(basis)
                .fold(linalg::zeros::<Rational>(4, 4), |acc, (c, x)| {
                    linalg::mat_add(&acc, &linalg::mat_scale(x, c))
                })
        })
        .collect();
    if center.len() != 2 {
        return None;
    }
    let id: Mat<Rational> = linalg::identity(4);
    let z = center.iter().find(|z| !is_scalar(z))?;
    let tr = (0..4).fold(int(0), |acc, i| acc + &z[i][i]) / int(4);
    let w = linalg::mat_sub(z, &linalg::mat_scale(&id, &tr));
    let w2 = linalg::mat_mul(&w, &w);
    if !is_scalar(&w2) || !w2[0][0].is_negative() {
        return None;
    }
    Some(quadratic_field_discriminant(&w2[0][0]))
}

fn is_scalar(m: &Mat<Rational>) -> bool {
    (0..4).all(|r| (0..4).all(|c| if r == c { m[r][c] == m[0][0] } else { m[r][c].is_zero() }))
}

// ---------------------------------------------------------------------------

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let (n, d) = (q.numer(), q.denom());
    if n.is_negative() {
        return None;
    }
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// `C`-coordinates of a torus whose `c` has rational direction `x`:
/// `h = α + y β` with `α, β ∈ Q(x)` and `y` anticommuting with `x`, sent to
/// `(α, β)` with `x -> ± sqrt(t)` so that right multiplication by `c` becomes
/// multiplication by `i`.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexModel {
    pub y: QuatElement,
    pub lattice: ZLattice,
    pub field_discriminant: i64,
}

pub fn complex_model(t: &QuatTorus) -> Result<ComplexModel> {
    let Direction::Rational {
        x,
        t: tx,
        field_discriminant: d,
        positive,
    } = &t.direction
    else {
        return Err(Error::Precondition("c has no rational direction".into()));
    };
    let h = &t.algebra;
    let xr = x.as_rationals().expect("rational direction");
    // y pure with a x1 y1 + b x2 y2 - ab x3 y3 = 0
    let functional = vec![vec![
        &h.a * &xr[1],
        &h.b * &xr[2],
        -(&h.a * &h.b * &xr[3]),
    ]];
    let ys = linalg::nullspace(&functional, 3);
    let yr = &ys[0];
    let y = QuatElement::from_rationals(&[int(0), yr[0].clone(), yr[1].clone(), yr[2].clone()]);
    let yx = h.mul(&y, x);
    let one = QuatElement::rational([1, 0, 0, 0]);
    let cols = [&one, x, &y, &yx];
    let m: CycMat = (0..4).map(|r| (0..4).map(|c| cols[c].0[r].clone()).collect()).collect();

    let q = rational_sqrt(&(tx / int(*d))).ok_or_else(|| Error::Consistency("t/D is not a square".into()))?;
    let mut s = sqrt_fundamental_discriminant(*d).scale(&q);
    let im2 = s.sub_ref(&s.conjugate()).mul_ref(&CycNum::zeta_pow(4, -1));
    if (im2.real_sign()? > 0) != *positive {
        s = s.neg_ref();
    }
    let embed = |v: &QuatElement| -> Result<CycVec> {
        let a = linalg::solve(&m, &v.0).ok_or_else(|| Error::Consistency("singular quaternion basis".into()))?;
        Ok(vec![a[0].add_ref(&a[1].mul_ref(&s)), a[2].add_ref(&a[3].mul_ref(&s))])
    };
    let mut gens = Vec::new();
    for bv in &t.order.basis {
        let v = QuatElement::from_rationals(bv);
        let z = embed(&v)?;
        let zc = embed(&h.mul(&v, &t.c))?;
        if zc != vector::scale_vec(&CycNum::zeta(4), &z) {
            return Err(Error::Consistency("complex model does not intertwine J with i".into()));
        }
        gens.push(z);
    }
    Ok(ComplexModel {
        y,
        lattice: ZLattice::from_generators(&gens)?.with_recipe("quaternion-torus"),
        field_discriminant: *d,
    })
}

/// Splitting of a rational-direction torus over the maximal order of `F`.
pub fn split_rational_direction(t: &QuatTorus) -> Result<(ComplexModel, OrderSplitting)> {
    let model = complex_model(t)?;
    let order = ImaginaryQuadraticOrder::from_discriminant(model.field_discriminant)?;
    let split = forge::split_as_order_module(&model.lattice, &order)?;
    Ok((model, split))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TorusEvidence {
    /// The lattice splits over an imaginary quadratic order into mutually
    /// isogenous factors.
    SplitIntoCmCurves { field_discriminant: i64, factors: usize },
    Endomorphisms { tag: EndTag, rank: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct RatLVerdict {
    pub n_even: bool,
    pub bilinear: BilinearType,
    /// The algebra `End_QG(W)`: indefinite in the orthogonal case, definite
    /// in the symplectic case.
    pub commutant: Definiteness,
    pub verdict: AbelianVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<TorusEvidence>,
}

pub fn ratl_verdict(profile: &CharacterProfile, n: usize, evidence: Option<TorusEvidence>) -> Result<RatLVerdict> {
    if profile.schur_index != 2 {
        return Err(Error::Precondition(format!("Schur index {} != 2", profile.schur_index)));
    }
    if profile.field != FieldClass::Rational {
        return Err(Error::Consistency("Schur index 2 with a non-rational character".into()));
    }
    if n % 2 != 0 {
        return Err(Error::Consistency("Schur index 2 in odd dimension".into()));
    }
    let from_evidence = |e: &TorusEvidence| match e {
        TorusEvidence::SplitIntoCmCurves { .. } => AbelianVerdict::Abelian,
        TorusEvidence::Endomorphisms { tag, .. } => match tag {
            EndTag::OrderInDefiniteQuaternion => AbelianVerdict::NotAbelian,
            EndTag::OrderInM2OfImaginaryQuadratic { .. } => AbelianVerdict::Abelian,
            EndTag::Other => AbelianVerdict::Undetermined,
        },
    };
    let (commutant, verdict) = match profile.bilinear {
        BilinearType::Orthogonal => {
            if evidence.as_ref().map(from_evidence) == Some(AbelianVerdict::NotAbelian) {
                return Err(Error::Consistency("orthogonal type but torus evidence says not abelian".into()));
            }
            (Definiteness::Indefinite, AbelianVerdict::Abelian)
        }
        BilinearType::Symplectic => {
            let v = match evidence.as_ref().map(from_evidence) {
                None | Some(AbelianVerdict::Undetermined) => AbelianVerdict::Disjunction,
                Some(v) => v,
            };
            (Definiteness::Definite, v)
        }
        BilinearType::Complex => {
            return Err(Error::Consistency("rational character with complex type".into()));
        }
    };
    Ok(RatLVerdict {
        n_even: true,
        bilinear: profile.bilinear,
        commutant,
        verdict,
        evidence,
    })
}
