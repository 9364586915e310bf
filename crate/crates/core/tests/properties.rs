//! Randomized invariants with fixed seeds.

use invlat::catalog::{self, EntryKind};
use invlat::cyclotomic::{int, rat, CycNum, Rational};
use invlat::lattice::{Index, MultiplierRing, RankTwoLattice, ZLattice};
use invlat::linalg;
use invlat::quaternion::{QuatAlgebra, QuatElement};
use invlat::vector::{self, CycVec};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn gaussian(a: i64, b: i64) -> CycNum {
    CycNum::from_int(a).add_ref(&CycNum::zeta(4).scale(&int(b)))
}

/// Four vectors of `Z[i]^2`, flattened as `(a, b)` pairs.
fn gaussian_vectors(k: usize) -> impl Strategy<Value = Vec<CycVec>> {
    prop::collection::vec(prop::collection::vec((-4i64..=4, -4i64..=4), 2), k)
        .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(|(a, b)| gaussian(a, b)).collect()).collect())
}

fn int_matrix(k: usize, r: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-r..=r, k), k)
}

fn combine(basis: &[CycVec], t: &[Vec<i64>]) -> Vec<CycVec> {
    t.iter()
        .map(|row| {
            row.iter().zip(basis).fold(vec![CycNum::zero(); basis[0].len()], |acc, (c, b)| {
                vector::add_vec(&acc, &vector::scale_vec(&CycNum::from_int(*c), b))
            })
        })
        .collect()
}

fn int_det(t: &[Vec<i64>]) -> BigInt {
    let m: Vec<Vec<BigInt>> = t.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    linalg::int_det(&m)
}

#[test]
fn index_multiplicativity_on_nested_triples() {
    let strat = (gaussian_vectors(4), int_matrix(4, 3), int_matrix(4, 3));
    runner(200, 1)
        .run(&strat, |(gens, t1, t2)| {
            let l1 = ZLattice::from_generators(&gens).unwrap();
            prop_assume!(l1.rank() == 4);
            prop_assume!(int_det(&t1) != BigInt::from(0) && int_det(&t2) != BigInt::from(0));
            let b1 = l1.basis_vectors();
            let b2 = combine(&b1, &t1);
            let l2 = ZLattice::from_generators(&b2).unwrap();
            let l3 = ZLattice::from_generators(&combine(&b2, &t2)).unwrap();
            let i12 = l1.index(&l2).unwrap();
            let i23 = l2.index(&l3).unwrap();
            let i13 = l1.index(&l3).unwrap();
            let (Index::Finite(a), Index::Finite(b), Index::Finite(c)) = (i12, i23, i13) else {
                panic!("infinite index between full-rank lattices");
            };
            prop_assert_eq!(&a * &b, c.clone());
            // the oracle: |det| of the transition matrices
            prop_assert_eq!(a, num_traits::Signed::abs(&int_det(&t1)));
            prop_assert_eq!(c, num_traits::Signed::abs(&(int_det(&t1) * int_det(&t2))));
            Ok(())
        })
        .unwrap();
}

#[test]
fn hnf_is_idempotent() {
    let strat = (1usize..6, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r));
    runner(200, 2)
        .run(&strat, |rows| {
            let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let h = linalg::hnf(&m);
            prop_assert_eq!(linalg::hnf(&h), h.clone());
            let (h2, u, rank) = linalg::hnf_with_transform(&m);
            prop_assert_eq!(mat_mul_int(&u, &m), h2.clone());
            prop_assert_eq!(linalg::int_det(&u).magnitude().clone(), BigInt::from(1).magnitude().clone());
            prop_assert_eq!(rank, linalg::rank(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<Vec<Rational>>>()));
            // lattice built from its own basis is unchanged
            let vecs: Vec<CycVec> = rows.iter().map(|r| vector::rational_vec(r)).collect();
            let l = ZLattice::from_generators(&vecs).unwrap();
            prop_assert_eq!(ZLattice::from_generators(&l.basis_vectors()).unwrap(), l);
            Ok(())
        })
        .unwrap();
}

#[test]
fn second_isomorphism_theorem() {
    let strat = (gaussian_vectors(3), gaussian_vectors(3));
    runner(60, 3)
        .run(&strat, |(a, b)| {
            let (Ok(l), Ok(m)) = (ZLattice::from_generators(&a), ZLattice::from_generators(&b)) else {
                return Ok(());
            };
            let s = l.sum(&m).unwrap();
            let i = l.intersect(&m).unwrap();
            prop_assert!(l.is_sublattice_of(&s) && m.is_sublattice_of(&s));
            prop_assert!(i.is_sublattice_of(&l) && i.is_sublattice_of(&m));
            prop_assert_eq!(s.index(&l).unwrap(), m.index(&i).unwrap());
            Ok(())
        })
        .unwrap();
}

/// `ω` generating the maximal order of `Q(sqrt -3)`, `Q(i)`, `Q(sqrt -2)`, `Q(sqrt -7)`.
fn omegas() -> Vec<CycNum> {
    let z = CycNum::zeta;
    vec![
        z(3),
        z(4),
        z(8).add_ref(&CycNum::zeta_pow(8, 3)),
        CycNum::from_exponents(7, &[(1, int(1)), (2, int(1)), (4, int(1))]),
    ]
}

fn field_element(w: &CycNum, a: i64, b: i64) -> CycNum {
    CycNum::from_int(a).add_ref(&w.scale(&int(b)))
}

#[test]
fn multiplier_ring_against_box_search() {
    let strat = (0usize..5, (-3i64..=3, -3i64..=3), (-3i64..=3, -3i64..=3), 1i64..=2);
    runner(100, 4)
        .run(&strat, |(k, (a1, b1), (a2, b2), d)| {
            prop_assume!(a1 * b2 - a2 * b1 != 0);
            let (g, w) = if k < 4 {
                let w = omegas()[k].clone();
                let g1 = field_element(&w, a1, b1);
                let g2 = field_element(&w, a2, b2).scale(&rat(1, d));
                (RankTwoLattice::new(g1, g2).unwrap(), w)
            } else {
                // τ of degree four: no complex multiplication
                let w = CycNum::zeta(5);
                let g2 = field_element(&w, a2, b2.max(1));
                (RankTwoLattice::new(CycNum::from_int(a1.abs().max(1)), g2).unwrap(), w)
            };
            let ring = g.multiplier_ring();
            let in_ring = |c: &CycNum| match &ring {
                MultiplierRing::Integers => c.as_rational().is_some_and(|q| q.is_integer()),
                MultiplierRing::ImaginaryQuadraticOrder { generator, .. } => RankTwoLattice::new(CycNum::one(), generator.clone())
                    .unwrap()
                    .contains(c),
            };
            // brute force over a box of field elements
            let mut found = 0;
            for x in -3i64..=3 {
                for y in -3i64..=3 {
                    for den in 1..=2 {
                        let c = field_element(&w, x, y).scale(&rat(1, den));
                        let (p, q) = g.generators();
                        let mult = g.contains(&c.mul_ref(p)) && g.contains(&c.mul_ref(q));
                        prop_assert_eq!(mult, in_ring(&c), "c = {}", c);
                        found += usize::from(mult);
                    }
                }
            }
            prop_assert!(found >= 7);
            if let MultiplierRing::ImaginaryQuadraticOrder { generator, discriminant, .. } = &ring {
                prop_assert!(g.is_multiplier(generator));
                let sq = generator.mul_ref(generator);
                prop_assert!(in_ring(&sq));
                let p = generator.minimal_polynomial();
                prop_assert_eq!(&p[1] * &p[1] - int(4) * &p[0], int(*discriminant));
            }
            Ok(())
        })
        .unwrap();
}

fn catalog_groups() -> Vec<invlat::group::GroupRep> {
    catalog::catalog()
        .iter()
        .filter(|e| e.kind == EntryKind::Group)
        .map(|e| catalog::group(e.name).unwrap())
        .collect()
}

#[test]
fn character_norms_are_integers() {
    for g in catalog_groups() {
        let n = g.character_norm().unwrap();
        assert!(n.is_integer());
        assert_eq!(n, int(1));
    }
}

#[test]
fn invariant_hermitian_forms_are_exact() {
    for g in catalog_groups() {
        let f = g.invariant_hermitian();
        assert!(f.is_hermitian());
        assert!(f.is_positive_definite().unwrap());
        for m in g.elements() {
            let lhs = linalg::mat_mul(&vector::conj_transpose(m), &linalg::mat_mul(&f.gram, m));
            assert_eq!(lhs, f.gram);
        }
    }
}

fn cyc(n: usize, coeffs: &[i64]) -> CycNum {
    let terms: Vec<(usize, Rational)> = coeffs.iter().enumerate().map(|(k, &c)| (k, int(c))).collect();
    CycNum::from_exponents(n, &terms)
}

#[test]
fn cyclotomic_field_axioms() {
    let strat = (
        prop::sample::select(vec![3usize, 4, 5, 7, 8, 12, 15]),
        prop::collection::vec(-5i64..=5, 6),
        prop::collection::vec(-5i64..=5, 6),
        prop::collection::vec(-5i64..=5, 6),
    );
    runner(100, 5)
        .run(&strat, |(n, a, b, c)| {
            let (x, y, z) = (cyc(n, &a), cyc(n, &b), cyc(n, &c));
            prop_assert_eq!(x.mul_ref(&y).mul_ref(&z), x.mul_ref(&y.mul_ref(&z)));
            prop_assert_eq!(x.mul_ref(&y.add_ref(&z)), x.mul_ref(&y).add_ref(&x.mul_ref(&z)));
            prop_assert_eq!(x.mul_ref(&y).conjugate(), x.conjugate().mul_ref(&y.conjugate()));
            if !x.is_zero() {
                prop_assert!(x.inv().unwrap().mul_ref(&x).is_one());
                prop_assert!(x.norm_sq().is_positive_real().unwrap());
            }
            // mixed conductors lift to the lcm
            let w = CycNum::zeta(9);
            prop_assert_eq!(x.add_ref(&w).sub_ref(&w), x.clone());
            let p = x.minimal_polynomial();
            prop_assert!(invlat::cyclotomic::eval_poly(&p, &x).is_zero());
            Ok(())
        })
        .unwrap();
}

#[test]
fn quaternion_norm_is_multiplicative() {
    let strat = (
        (-5i64..=5, -5i64..=5).prop_filter("nonzero", |(a, b)| *a != 0 && *b != 0),
        prop::array::uniform4(-4i64..=4),
        prop::array::uniform4(-4i64..=4),
    );
    runner(100, 6)
        .run(&strat, |((a, b), x, y)| {
            let h = QuatAlgebra::from_ints(a, b).unwrap();
            let (x, y) = (QuatElement::rational(x), QuatElement::rational(y));
            prop_assert_eq!(h.reduced_norm(&h.mul(&x, &y)), h.reduced_norm(&x).mul_ref(&h.reduced_norm(&y)));
            // definiteness is an isomorphism invariant
            let d = h.definiteness();
            prop_assert_eq!(QuatAlgebra::from_ints(b, a).unwrap().definiteness(), d);
            prop_assert_eq!(QuatAlgebra::from_ints(a, -a * b).unwrap().definiteness(), d);
            Ok(())
        })
        .unwrap();
}

fn mat_mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}
