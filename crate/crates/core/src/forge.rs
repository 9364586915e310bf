//! Constructing invariant lattices, and saturating and splitting lattices as
//! modules over imaginary-quadratic orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::cyclotomic::{int, quadratic_field_discriminant, sqrt_fundamental_discriminant, CycNum, Rational};
use crate::error::{Error, Result};
use crate::group::GroupRep;
use crate::lattice::{Index, IsogenyWitness, RankTwoLattice, ZLattice};
use crate::linalg::{self, RationalSubspaceBasis};
use crate::schur::{self, FieldClass};
use crate::vector::{self, CycVec};

/// `Z + Z ω` inside `Q(ζ_N)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImaginaryQuadraticOrder {
    pub discriminant: i64,
    pub omega: CycNum,
    pub euclidean: bool,
}

const EUCLIDEAN: [i64; 5] = [-3, -4, -7, -8, -11];

impl ImaginaryQuadraticOrder {
    /// The order of discriminant `disc = f^2 d` with `d` fundamental.
    pub fn from_discriminant(disc: i64) -> Result<Self> {
        if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidInput(format!("{disc} is not a negative discriminant")));
        }
        let d = quadratic_field_discriminant(&int(disc));
        let f2 = disc / d;
        let f = (f2 as f64).sqrt().round() as i64;
        let max = match d {
            -4 => CycNum::zeta(4),
            -3 => CycNum::zeta(3),
            -8 => CycNum::zeta(8).add_ref(&CycNum::zeta_pow(8, 3)),
            -7 => CycNum::from_exponents(7, &[(1, int(1)), (2, int(1)), (4, int(1))]),
            -11 => {
                let qr: Vec<(usize, Rational)> = [1, 3, 4, 5, 9].iter().map(|&k| (k, int(1))).collect();
                CycNum::from_exponents(11, &qr)
            }
            _ => CycNum::from_int(d)
                .add_ref(&sqrt_fundamental_discriminant(d))
                .scale(&Rational::new(1.into(), 2.into())),
        };
        let order = ImaginaryQuadraticOrder {
            discriminant: disc,
            omega: max.scale(&int(f)),
            euclidean: EUCLIDEAN.contains(&disc),
        };
        debug_assert_eq!(order.computed_discriminant(), disc);
        Ok(order)
    }

    /// `ω^2 = tr ω - nm`.
    fn trace_norm(&self) -> (Rational, Rational) {
        let p = self.omega.minimal_polynomial();
        (-p[1].clone(), p[0].clone())
    }

    pub fn computed_discriminant(&self) -> i64 {
        let (t, n) = self.trace_norm();
        let d = &t * &t - int(4) * n;
        i64::try_from(d.to_integer()).expect("small discriminant")
    }

    pub fn field_discriminant(&self) -> i64 {
        quadratic_field_discriminant(&int(self.discriminant))
    }

    pub fn element(&self, x: &Rational, y: &Rational) -> CycNum {
        CycNum::from_rational(x.clone()).add_ref(&self.omega.scale(y))
    }

    /// `(x, y)` with `z = x + y ω`, if `z ∈ Q(ω)`.
    pub fn coordinates(&self, z: &CycNum) -> Option<(Rational, Rational)> {
        RankTwoLattice::new(CycNum::one(), self.omega.clone())
            .expect("omega is not real")
            .coordinates(z)
    }

    pub fn contains(&self, z: &CycNum) -> bool {
        self.coordinates(z)
            .is_some_and(|(x, y)| x.is_integer() && y.is_integer())
    }

    pub fn norm(&self, x: &Rational, y: &Rational) -> Rational {
        let (t, n) = self.trace_norm();
        x * x + t * x * y + n * y * y
    }

    /// Element of the order nearest to `z ∈ Q(ω)` in the norm.
    fn round(&self, z: &CycNum) -> CycNum {
        let (x, y) = self.coordinates(z).expect("quotient lies in the field");
        let mut best: Option<(Rational, BigInt, BigInt)> = None;
        let fx = x.floor().to_integer();
        let fy = y.floor().to_integer();
        for dx in -1..=2 {
            for dy in -1..=2 {
                let qx = &fx + BigInt::from(dx);
                let qy = &fy + BigInt::from(dy);
                let rx = &x - Rational::from_integer(qx.clone());
                let ry = &y - Rational::from_integer(qy.clone());
                let nr = self.norm(&rx, &ry);
                if best.as_ref().is_none_or(|(b, _, _)| nr < *b) {
                    best = Some((nr, qx, qy));
                }
            }
        }
        let (_, qx, qy) = best.expect("candidates");
        self.element(&Rational::from_integer(qx), &Rational::from_integer(qy))
    }

    fn norm_of(&self, z: &CycNum) -> Rational {
        let (x, y) = self.coordinates(z).expect("element of the field");
        self.norm(&x, &y)
    }
}

// ---------------------------------------------------------------------------

/// `Σ_g Z g(w)` over the witness vectors of a `Q`-form.
pub fn construct_rank_n(g: &GroupRep, qform: &[CycVec]) -> Result<ZLattice> {
    if qform.is_empty() {
        return Err(Error::NotAForm("empty witness".into()));
    }
    if schur::character_field_basis(g).len() != 1 || !schur::is_character_field_form(g, qform) {
        return Err(Error::NotAForm("witness is not a G-stable Q-form of V".into()));
    }
    let vecs: Vec<CycVec> = g
        .elements()
        .iter()
        .flat_map(|m| qform.iter().map(move |w| vector::apply(m, w)))
        .collect();
    let lat = ZLattice::from_generators(&vecs)?;
    if lat.rank() != g.dimension() {
        return Err(Error::Consistency(format!(
            "orbit lattice of a Q-form has rank {} != n",
            lat.rank()
        )));
    }
    Ok(lat.with_recipe("Zn"))
}

/// `Λ + cΛ`.
pub fn extend_rank_2n(lat: &ZLattice, c: &CycNum) -> Result<ZLattice> {
    if c.is_real() {
        return Err(Error::Precondition("c must be non-real".into()));
    }
    let out = lat.sum(&lat.scale(c)?)?;
    if out.rank() != 2 * lat.rank() {
        return Err(Error::Precondition(format!(
            "Λ + cΛ has rank {} rather than {}",
            out.rank(),
            2 * lat.rank()
        )));
    }
    Ok(out.with_recipe("ds"))
}

/// `Σ_g O g(v)`.
pub fn orbit_lattice_over_order(g: &GroupRep, order: &ImaginaryQuadraticOrder, v: &[CycNum]) -> Result<ZLattice> {
    match schur::classify_character_field(g) {
        FieldClass::ImaginaryQuadratic { discriminant } if discriminant == order.field_discriminant() => {}
        other => {
            return Err(Error::Precondition(format!(
                "character field {other:?} does not match the order of discriminant {}",
                order.discriminant
            )))
        }
    }
    if v.len() != g.dimension() || vector::is_zero_vec(v) {
        return Err(Error::InvalidInput("starting vector must be a nonzero vector of V".into()));
    }
    let mut vecs = Vec::new();
    for m in g.elements() {
        let w = vector::apply(m, v);
        vecs.push(vector::scale_vec(&order.omega, &w));
        vecs.push(w);
    }
    Ok(ZLattice::from_generators(&vecs)?.with_recipe("O"))
}

/// Same construction with a `Q`-form vector picked by the Schur-index descent.
pub fn orbit_lattice_from_witness(g: &GroupRep, order: &ImaginaryQuadraticOrder, seed: u64) -> Result<ZLattice> {
    let schur = schur::schur_index(g, seed)?;
    if schur.m != 1 {
        return Err(Error::Precondition(format!("Schur index {} != 1", schur.m)));
    }
    orbit_lattice_over_order(g, order, &schur.witness[0])
}

pub fn is_order_stable(lat: &ZLattice, order: &ImaginaryQuadraticOrder) -> bool {
    lat.basis_vectors()
        .iter()
        .all(|b| lat.contains(&vector::scale_vec(&order.omega, b)))
}

/// `Λ + ωΛ`, with `[Λ + ωΛ : Λ]`.
pub fn order_saturate(lat: &ZLattice, order: &ImaginaryQuadraticOrder) -> Result<(ZLattice, BigInt)> {
    let out = lat.sum(&lat.scale(&order.omega)?)?;
    match out.index(lat)? {
        Index::Finite(k) => Ok((out.with_recipe("saturate"), k)),
        Index::Infinite => Err(Error::Consistency(
            "order saturation has infinite index over the lattice".into(),
        )),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderSplitting {
    /// `Λ = O v_1 ⊕ ... ⊕ O v_k`.
    pub basis: Vec<CycVec>,
    /// `O v_j` as a lattice in the line `C v_j`, in the coordinate along `v_j`.
    pub factors: Vec<RankTwoLattice>,
    /// Coordinates of each `v_j` over the chosen `Q(ω)`-basis `u_1..u_k` of `QΛ`.
    pub change_of_basis: Vec<Vec<CycNum>>,
    pub field_basis: Vec<CycVec>,
    /// `(j, k, witness)` for `c·factor_k ⊆ factor_j`.
    pub isogenies: Vec<(usize, usize, IsogenyWitness)>,
}

/// `O`-basis of an `O`-stable lattice over a Euclidean order.
pub fn split_as_order_module(lat: &ZLattice, order: &ImaginaryQuadraticOrder) -> Result<OrderSplitting> {
    if !order.euclidean {
        return Err(Error::OutOfScope(format!(
            "splitting over the non-Euclidean order of discriminant {}",
            order.discriminant
        )));
    }
    if !is_order_stable(lat, order) {
        return Err(Error::Precondition("lattice is not stable under the order".into()));
    }
    let basis = lat.basis_vectors();
    let n = [lat.conductor(), order.omega.conductor()]
        .iter()
        .fold(1, |a, &b| crate::cyclotomic::lcm(a, b));
    let size = lat.dimension() * crate::cyclotomic::euler_phi(n);

    // Q(ω)-basis u_1..u_k of QΛ
    let mut chosen: Vec<CycVec> = Vec::new();
    let mut span_rows: Vec<Vec<Rational>> = Vec::new();
    for b in &basis {
        let fb = vector::flatten(b, n);
        if RationalSubspaceBasis::from_vectors(size, &span_rows).contains(&fb) {
            continue;
        }
        span_rows.push(fb);
        span_rows.push(vector::flatten(&vector::scale_vec(&order.omega, b), n));
        chosen.push(b.clone());
    }
    let k = chosen.len();
    // columns u_1, ω u_1, u_2, ω u_2, ...
    let cols = linalg::transpose(&span_rows);
    let mut rows: Vec<Vec<CycNum>> = Vec::new();
    let mut den = BigInt::one();
    for b in &basis {
        let x = linalg::solve_least(&cols, &vector::flatten(b, n))
            .ok_or_else(|| Error::Consistency("lattice vector outside its Q(ω)-span".into()))?;
        for q in &x {
            den = den.lcm(q.denom());
        }
        rows.push(x.chunks(2).map(|c| order.element(&c[0], &c[1])).collect());
    }
    let dr = Rational::from_integer(den.clone());
    let mut rows: Vec<Vec<CycNum>> = rows
        .into_iter()
        .map(|r| r.iter().map(|a| a.scale(&dr)).collect())
        .collect();

    // Euclidean echelon form over O
    let mut r0 = 0;
    for c in 0..k {
        loop {
            let piv = (r0..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| order.norm_of(&rows[i][c]).cmp(&order.norm_of(&rows[j][c])));
            let Some(p) = piv else { break };
            rows.swap(r0, p);
            let mut done = true;
            for i in r0 + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = order.round(&rows[i][c].try_div(&rows[r0][c])?);
                let pr = rows[r0].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x = x.sub_ref(&q.mul_ref(y));
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        r0 += 1;
    }
    rows.truncate(k);
    let inv_den = Rational::new(BigInt::one(), den);
    let change: Vec<Vec<CycNum>> = rows
        .iter()
        .map(|r| r.iter().map(|a| a.scale(&inv_den)).collect())
        .collect();
    let out_basis: Vec<CycVec> = change
        .iter()
        .map(|coef| {
            coef.iter()
                .zip(&chosen)
                .fold(vec![CycNum::zero(); lat.dimension()], |acc, (a, u)| {
                    vector::add_vec(&acc, &vector::scale_vec(a, u))
                })
        })
        .collect();

    // direct-sum certificate
    let gens: Vec<CycVec> = out_basis
        .iter()
        .flat_map(|v| [v.clone(), vector::scale_vec(&order.omega, v)])
        .collect();
    let rebuilt = ZLattice::from_generators(&gens)?;
    if rebuilt != *lat || rebuilt.rank() != 2 * k {
        return Err(Error::Consistency("order basis does not regenerate the lattice".into()));
    }
    let factors: Vec<RankTwoLattice> = (0..k)
        .map(|_| RankTwoLattice::new(CycNum::one(), order.omega.clone()))
        .collect::<Result<_>>()?;
    let mut isogenies = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let w = factors[a]
                .isogeny_test(&factors[b])
                .ok_or_else(|| Error::Consistency("factors over one order are not isogenous".into()))?;
            isogenies.push((a, b, w));
        }
    }
    Ok(OrderSplitting {
        basis: out_basis,
        factors,
        change_of_basis: change,
        field_basis: chosen,
        isogenies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::MultiplierRing;
    use crate::schur::DEFAULT_SEED;
    use crate::vector::rational_vec;

    fn z2() -> ZLattice {
        ZLattice::from_generators(&[rational_vec(&[1, 0]), rational_vec(&[0, 1])]).unwrap()
    }

    #[test]
    fn orders() {
        for d in [-3, -4, -7, -8, -11, -15, -16, -20, -12] {
            let o = ImaginaryQuadraticOrder::from_discriminant(d).unwrap();
            assert_eq!(o.computed_discriminant(), d, "{d}");
            assert_eq!(o.euclidean, EUCLIDEAN.contains(&d));
        }
        assert!(ImaginaryQuadraticOrder::from_discriminant(-5).is_err());
        let o = ImaginaryQuadraticOrder::from_discriminant(-3).unwrap();
        assert_eq!(o.omega, CycNum::zeta(3));
    }

    #[test]
    fn rank_n_constructions() {
        for (name, expected) in [
            ("S3", vec![rational_vec(&[1, 0]), rational_vec(&[0, 1])]),
            ("Weyl-B2", vec![rational_vec(&[1, 0]), rational_vec(&[0, 1])]),
        ] {
            let g = catalog::group(name).unwrap();
            let w = schur::schur_index(&g, DEFAULT_SEED).unwrap().witness;
            let lat = construct_rank_n(&g, &w).unwrap();
            assert_eq!(lat.rank(), 2);
            assert!(lat.invariance_check(&g));
            // orbit of a standard vector gives the root (resp. standard) lattice
            let root = construct_rank_n(&g, &[rational_vec(&[1, 0]), rational_vec(&[0, 1])]).unwrap();
            assert_eq!(root, ZLattice::from_generators(&expected).unwrap());
        }
        let triv = crate::group::close_group(&[vector::identity_mat(1)], 10).unwrap();
        let lat = construct_rank_n(&triv, &[rational_vec(&[1])]).unwrap();
        assert_eq!(lat, ZLattice::from_generators(&[rational_vec(&[1])]).unwrap());
        let q8 = catalog::group("Q8").unwrap();
        assert!(matches!(
            construct_rank_n(&q8, &[rational_vec(&[1, 0]), rational_vec(&[0, 1])]),
            Err(Error::NotAForm(_))
        ));
    }

    #[test]
    fn ds_extension() {
        let i = CycNum::zeta(4);
        let gi2 = extend_rank_2n(&z2(), &i).unwrap();
        assert_eq!(gi2.rank(), 4);
        assert_eq!(gi2.recipe(), Some("ds"));
        let a2 = catalog::group("Weyl-A2").unwrap();
        let l = extend_rank_2n(&z2(), &CycNum::zeta(3)).unwrap();
        assert_eq!(l.rank(), 4);
        assert!(l.invariance_check(&a2));
        assert!(matches!(
            extend_rank_2n(&z2(), &CycNum::from_rational(Rational::new(1.into(), 2.into()))),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn orbit_lattices() {
        let c4 = catalog::group("C4").unwrap();
        let zi = ImaginaryQuadraticOrder::from_discriminant(-4).unwrap();
        let l = orbit_lattice_over_order(&c4, &zi, &rational_vec(&[1])).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l, ZLattice::from_generators(&[rational_vec(&[1]), vec![CycNum::zeta(4)]]).unwrap());

        let g4 = catalog::group("G4").unwrap();
        let ze = ImaginaryQuadraticOrder::from_discriminant(-3).unwrap();
        let l = orbit_lattice_from_witness(&g4, &ze, DEFAULT_SEED).unwrap();
        assert_eq!(l.rank(), 4);
        assert!(l.invariance_check(&g4));
        let (sat, k) = order_saturate(&l, &ze).unwrap();
        assert_eq!(k, BigInt::one());
        assert_eq!(sat, l);

        let s3 = catalog::group("S3").unwrap();
        assert!(matches!(
            orbit_lattice_over_order(&s3, &zi, &rational_vec(&[1, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn saturation() {
        let zi = ImaginaryQuadraticOrder::from_discriminant(-4).unwrap();
        let l = ZLattice::from_generators(&[rational_vec(&[1]), vec![CycNum::zeta(4).scale(&int(2))]]).unwrap();
        let (sat, k) = order_saturate(&l, &zi).unwrap();
        assert_eq!(k, BigInt::from(2));
        assert!(is_order_stable(&sat, &zi));
        let (again, k) = order_saturate(&sat, &zi).unwrap();
        assert_eq!((again, k), (sat, BigInt::one()));
    }

    #[test]
    fn splitting() {
        let zi = ImaginaryQuadraticOrder::from_discriminant(-4).unwrap();
        let gi2 = extend_rank_2n(&z2(), &CycNum::zeta(4)).unwrap();
        let s = split_as_order_module(&gi2, &zi).unwrap();
        assert_eq!(s.factors.len(), 2);
        for f in &s.factors {
            assert_eq!(f.multiplier_ring().discriminant(), Some(-4));
        }
        assert_eq!(s.isogenies.len(), 1);

        let g4 = catalog::group("G4").unwrap();
        let ze = ImaginaryQuadraticOrder::from_discriminant(-3).unwrap();
        let l = orbit_lattice_from_witness(&g4, &ze, DEFAULT_SEED).unwrap();
        let s = split_as_order_module(&l, &ze).unwrap();
        assert_eq!(s.factors.len(), 2);
        for f in &s.factors {
            assert!(matches!(
                f.multiplier_ring(),
                MultiplierRing::ImaginaryQuadraticOrder { discriminant: -3, .. }
            ));
        }

        let o5 = ImaginaryQuadraticOrder::from_discriminant(-20).unwrap();
        assert!(matches!(split_as_order_module(&gi2, &o5), Err(Error::OutOfScope(_))));
        let not_stable = ZLattice::from_generators(&[rational_vec(&[1]), vec![CycNum::zeta(4).scale(&int(2))]]).unwrap();
        assert!(matches!(split_as_order_module(&not_stable, &zi), Err(Error::Precondition(_))));
    }

    #[test]
    fn splitting_a_skew_lattice() {
        // Z[i]-module generated by (1, i) and (0, 1+i) has O-basis of size 2
        let zi = ImaginaryQuadraticOrder::from_discriminant(-4).unwrap();
        let i = CycNum::zeta(4);
        let a = vec![CycNum::one(), i.clone()];
        let b = vec![CycNum::zero(), CycNum::one().add_ref(&i)];
        let gens = vec![a.clone(), vector::scale_vec(&i, &a), b.clone(), vector::scale_vec(&i, &b)];
        let l = ZLattice::from_generators(&gens).unwrap();
        let s = split_as_order_module(&l, &zi).unwrap();
        assert_eq!(s.basis.len(), 2);
    }
}
