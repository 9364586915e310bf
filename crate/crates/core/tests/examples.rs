//! Worked instances for each public operation.

use invlat::catalog;
use invlat::cyclotomic::{int, rat, CycNum};
use invlat::error::Error;
use invlat::forge::{self, ImaginaryQuadraticOrder};
use invlat::group::close_group;
use invlat::lattice::{Index, MultiplierRing, RankTwoLattice, ZLattice};
use invlat::linalg;
use invlat::quaternion::{self, Definiteness, QuatAlgebra, QuatElement};
use invlat::reflection;
use invlat::schur::{self, BilinearType, Clause, FieldClass, DEFAULT_SEED};
use invlat::vector::{rational_mat, rational_vec, scale_vec, CycVec};

fn z(n: usize) -> CycNum {
    CycNum::zeta(n)
}

fn lat(v: &[CycVec]) -> ZLattice {
    ZLattice::from_generators(v).unwrap()
}

fn z2() -> ZLattice {
    lat(&[rational_vec(&[1, 0]), rational_vec(&[0, 1])])
}

fn gaussian_square() -> ZLattice {
    forge::extend_rank_2n(&z2(), &z(4)).unwrap()
}

#[test]
fn field_arithmetic() {
    assert_eq!(z(4).mul_ref(&z(4)), CycNum::from_int(-1));
    assert_eq!(z(3).add_ref(&CycNum::zeta_pow(3, 2)), CycNum::from_int(-1));
    let x = CycNum::one().add_ref(&z(5));
    assert!(x.inv().unwrap().mul_ref(&x).is_one());
    assert!(matches!(CycNum::zero().inv(), Err(Error::DivisionByZero)));
}

#[test]
fn conjugation() {
    assert_eq!(z(4).conjugate(), z(4).neg_ref());
    let q = CycNum::from_rational(rat(3, 7));
    assert_eq!(q.conjugate(), q);
    let x = z(7).add_ref(&CycNum::zeta_pow(7, 3).scale(&int(2)));
    assert_eq!(x.conjugate().conjugate(), x);
}

#[test]
fn minimal_polynomials() {
    assert_eq!(z(3).minimal_polynomial(), vec![int(1), int(1), int(1)]);
    assert_eq!(CycNum::from_int(5).minimal_polynomial(), vec![int(-5), int(1)]);
    let s2 = z(8).add_ref(&CycNum::zeta_pow(8, -1));
    assert_eq!(s2.minimal_polynomial(), vec![int(-2), int(0), int(1)]);
}

#[test]
fn numeric_embedding() {
    let e = z(4).numeric_embed(64);
    assert!(e.re_f64().abs() < 1e-12 && (e.im_f64() - 1.0).abs() < 1e-12);
    let e = CycNum::from_int(-1).numeric_embed(64);
    assert!((e.re_f64() + 1.0).abs() < 1e-12);
    let e = z(3).numeric_embed(64);
    assert!((e.re_f64() + 0.5).abs() < 1e-12 && (e.im_f64() - 0.8660254037844386).abs() < 1e-12);
    assert!(e.bound_f64() < 1e-15);
}

#[test]
fn closures_and_characters() {
    assert_eq!(catalog::group("Q8").unwrap().order(), 8);
    assert_eq!(catalog::group("G4").unwrap().order(), 24);
    let id = rational_mat(&[&[1, 0], &[0, 1]]);
    let triv = close_group(&[id.clone()], 10).unwrap();
    assert_eq!(triv.order(), 1);
    assert_eq!(triv.character(), vec![CycNum::from_int(2)]);
    let cert = triv.irreducibility_check().unwrap();
    assert!(!cert.irreducible);
    assert_eq!(cert.norm, int(4));
    let q8 = catalog::group("Q8").unwrap();
    let cert = q8.irreducibility_check().unwrap();
    assert!(cert.irreducible && cert.norm == int(1));
    let mut chi: Vec<i64> = q8.character().iter().map(|c| c.as_rational().unwrap().to_integer().try_into().unwrap()).collect();
    chi.sort();
    assert_eq!(chi, vec![-2, 0, 0, 0, 0, 0, 0, 2]);
    assert!(catalog::group("S3").unwrap().irreducibility_check().unwrap().irreducible);
}

#[test]
fn hermitian_forms() {
    let q8 = catalog::group("Q8").unwrap();
    let f = q8.invariant_hermitian();
    let g = &f.gram;
    assert_eq!(g[0][1], CycNum::zero());
    assert_eq!(g[0][0], g[1][1]);
    let s3 = catalog::group("S3").unwrap();
    let f = s3.invariant_hermitian();
    let ratio = f.gram[0][0].try_div(&f.gram[0][1]).unwrap();
    assert_eq!(ratio, CycNum::from_int(-2));
    assert_eq!(f.gram[0][0], f.gram[1][1]);
    assert!(f.is_positive_definite().unwrap());
}

#[test]
fn reflection_inventories() {
    let b2 = catalog::group("B2").unwrap();
    let r = b2.find_reflections();
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|x| x.eigenvalue == CycNum::from_int(-1)));
    assert!(catalog::group("Q8").unwrap().find_reflections().is_empty());
    let g4 = catalog::group("G4").unwrap();
    let r = g4.find_reflections();
    assert_eq!(r.len(), 8);
    assert!(r.iter().all(|x| x.eigenvalue == z(3) || x.eigenvalue == CycNum::zeta_pow(3, 2)));
}

#[test]
fn lattice_construction() {
    let l = lat(&[rational_vec(&[1, 0]), rational_vec(&[0, 1]), rational_vec(&[1, 1])]);
    assert_eq!(l.rank(), 2);
    assert_eq!(l, z2());
    let gi = lat(&[vec![CycNum::one()], vec![z(4)]]);
    assert_eq!(gi.rank(), 2);
    let s2 = z(8).add_ref(&CycNum::zeta_pow(8, -1));
    assert!(matches!(
        ZLattice::from_generators(&[vec![CycNum::one()], vec![s2]]),
        Err(Error::NotDiscrete { .. })
    ));
}

#[test]
fn sums_intersections_indices() {
    let two = z2().scale(&CycNum::from_int(2)).unwrap();
    assert_eq!(z2().sum(&two).unwrap(), z2());
    assert_eq!(z2().intersect(&two).unwrap(), two);
    assert_eq!(z2().index(&two).unwrap(), Index::Finite(4.into()));
    assert_eq!(z2().index(&z2()).unwrap(), Index::Finite(1.into()));

    let a = lat(&[vec![CycNum::one()]]);
    let b = lat(&[vec![z(4)]]);
    let gi = lat(&[vec![CycNum::one()], vec![z(4)]]);
    assert_eq!(a.sum(&b).unwrap(), gi);
    let e3 = lat(&[vec![CycNum::one()], vec![z(3)], vec![CycNum::zeta_pow(3, 2)]]);
    assert_eq!(e3.rank(), 2);
    assert_eq!(e3, lat(&[vec![CycNum::one()], vec![z(3)]]));

    assert_eq!(gi.intersect_real_span(&[vec![CycNum::one()]]).unwrap(), a);
    let half = CycNum::from_rational(rat(1, 2));
    let l = lat(&[rational_vec(&[1, 0]), rational_vec(&[0, 1]), vec![half.clone(), half.clone()]]);
    let diag = l.intersect_complex_span(&[rational_vec(&[1, 1])]).unwrap();
    assert_eq!(diag, lat(&[vec![half.clone(), half]]));

    let one_plus_i = CycNum::one().add_ref(&z(4));
    let sub = gi.scale(&one_plus_i).unwrap();
    assert_eq!(gi.index(&sub).unwrap(), Index::Finite(2.into()));
    assert!(matches!(sub.index(&gi), Err(Error::NotContained)));
}

#[test]
fn invariance() {
    let q8 = catalog::group("Q8").unwrap();
    assert!(gaussian_square().invariance_check(&q8));
    // rotation by 45 degrees
    let c = z(8).add_ref(&CycNum::zeta_pow(8, -1)).scale(&rat(1, 2));
    let rot = close_group(&[vec![vec![c.clone(), c.neg_ref()], vec![c.clone(), c]]], 100).unwrap();
    assert_eq!(rot.order(), 8);
    assert!(!z2().invariance_check(&rot));
    let a2 = catalog::group("A2").unwrap();
    assert!(z2().invariance_check(&a2));
}

#[test]
fn multiplier_rings() {
    let g = RankTwoLattice::new(CycNum::one(), z(4)).unwrap();
    assert_eq!(g.multiplier_ring().discriminant(), Some(-4));
    let g2 = RankTwoLattice::new(CycNum::one(), z(4).scale(&int(2))).unwrap();
    match g2.multiplier_ring() {
        MultiplierRing::ImaginaryQuadraticOrder { discriminant, conductor, .. } => {
            assert_eq!((discriminant, conductor), (-16, 2));
        }
        other => panic!("{other:?}"),
    }
    let g5 = RankTwoLattice::new(CycNum::one(), z(5)).unwrap();
    assert_eq!(g5.multiplier_ring(), MultiplierRing::Integers);
}

#[test]
fn isogenies() {
    let g = RankTwoLattice::new(CycNum::one(), z(4)).unwrap();
    let g2 = RankTwoLattice::new(CycNum::one(), z(4).scale(&int(2))).unwrap();
    let w = g.isogeny_test(&g2).unwrap();
    assert!(w.c.is_one());
    assert_eq!(w.index, 2.into());
    let e = RankTwoLattice::new(CycNum::one(), z(3)).unwrap();
    assert!(g.isogeny_test(&e).is_none());
    let u = z(3);
    let ue = RankTwoLattice::new(u.clone(), u.mul_ref(&z(3))).unwrap();
    let w = e.isogeny_test(&ue).unwrap();
    assert_eq!(w.index, 1.into());
}

#[test]
fn character_profiles() {
    assert_eq!(schur::classify_character_field(&catalog::group("Q8").unwrap()), FieldClass::Rational);
    assert_eq!(
        schur::classify_character_field(&catalog::group("G4").unwrap()),
        FieldClass::ImaginaryQuadratic { discriminant: -3 }
    );
    assert_eq!(
        schur::classify_character_field(&catalog::group("C5").unwrap()),
        FieldClass::Other { degree: 4, real: false }
    );
    assert_eq!(schur::frobenius_schur_indicator(&catalog::group("Q8").unwrap()).unwrap(), -1);
    assert_eq!(schur::bilinear_type(&catalog::group("S3").unwrap()).unwrap().kind, BilinearType::Orthogonal);
    assert_eq!(schur::frobenius_schur_indicator(&catalog::group("C4").unwrap()).unwrap(), 0);
}

#[test]
fn schur_indices_and_dimensions() {
    for (name, m, dim) in [("S3", 1, 2), ("Q8", 2, 4), ("G4", 1, 4)] {
        let r = schur::schur_index(&catalog::group(name).unwrap(), DEFAULT_SEED).unwrap();
        assert_eq!((r.m, r.simple_dimension), (m, dim), "{name}");
        assert!(r.is_certified());
    }
}

#[test]
fn gcd_shortcut() {
    for name in ["S3", "B2", "G4", "A2"] {
        assert_eq!(schur::gcd_kernel_shortcut(&catalog::group(name).unwrap()).unwrap().gcd, 1, "{name}");
    }
    assert!(schur::gcd_kernel_shortcut(&catalog::group("Q8").unwrap()).is_none());
    assert!(schur::gcd_kernel_shortcut(&catalog::group("C3").unwrap()).is_some());
}

#[test]
fn verdict_table() {
    let v = |name: &str| {
        let g = catalog::group(name).unwrap();
        let p = schur::character_profile(&g, DEFAULT_SEED).unwrap();
        schur::lattice_existence_verdict(&p, g.dimension()).unwrap()
    };
    let s3 = v("S3");
    assert!(s3.exists_rank_n && s3.exists_rank_2n && s3.clause == Clause::CI);
    let q8 = v("Q8");
    assert!(!q8.exists_rank_n && q8.exists_rank_2n && q8.clause == Clause::CII);
    let c5 = v("C5");
    assert!(!c5.exists_any && c5.clause == Clause::None);
}

#[test]
fn rank_n_constructions() {
    let s3 = catalog::group("S3").unwrap();
    let w = schur::schur_index(&s3, DEFAULT_SEED).unwrap().witness;
    let l = forge::construct_rank_n(&s3, &w).unwrap();
    assert_eq!(l.rank(), 2);
    assert!(l.invariance_check(&s3));
    // the root lattice, in simple-root coordinates
    assert_eq!(l, z2());

    let b2 = catalog::group("B2").unwrap();
    let l = forge::construct_rank_n(&b2, &[rational_vec(&[1, 0]), rational_vec(&[0, 1])]).unwrap();
    assert_eq!(l, z2());
    let triv = close_group(&[vec![vec![CycNum::one()]]], 1).unwrap();
    let l = forge::construct_rank_n(&triv, &[vec![CycNum::one()]]).unwrap();
    assert_eq!(l, lat(&[vec![CycNum::one()]]));
}

#[test]
fn rank_2n_constructions() {
    assert_eq!(gaussian_square().rank(), 4);
    let a2 = catalog::group("A2").unwrap();
    let l = forge::extend_rank_2n(&z2(), &z(3)).unwrap();
    assert!(l.rank() == 4 && l.invariance_check(&a2));
    let half = CycNum::from_rational(rat(1, 2));
    assert!(matches!(forge::extend_rank_2n(&z2(), &half), Err(Error::Precondition(_))));
}

#[test]
fn order_lattices() {
    let c4 = catalog::group("C4").unwrap();
    let zi = ImaginaryQuadraticOrder::from_discriminant(-4).unwrap();
    let l = forge::orbit_lattice_over_order(&c4, &zi, &[CycNum::one()]).unwrap();
    assert_eq!(l, lat(&[vec![CycNum::one()], vec![z(4)]]));
    let g4 = catalog::group("G4").unwrap();
    let o3 = ImaginaryQuadraticOrder::from_discriminant(-3).unwrap();
    let l = forge::orbit_lattice_from_witness(&g4, &o3, DEFAULT_SEED).unwrap();
    assert!(l.rank() == 4 && l.invariance_check(&g4));
    let (sat, k) = forge::order_saturate(&l, &o3).unwrap();
    assert_eq!((sat, k), (l.clone(), 1.into()));
    let split = forge::split_as_order_module(&l, &o3).unwrap();
    assert_eq!(split.factors.len(), 2);
    for f in &split.factors {
        assert!(f.is_multiplier(&z(3)));
    }
    let s3 = catalog::group("S3").unwrap();
    assert!(matches!(
        forge::orbit_lattice_over_order(&s3, &zi, &rational_vec(&[1, 0])),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn saturation_and_splitting() {
    let zi = ImaginaryQuadraticOrder::from_discriminant(-4).unwrap();
    let l = lat(&[vec![CycNum::one()], vec![z(4).scale(&int(2))]]);
    let (sat, k) = forge::order_saturate(&l, &zi).unwrap();
    assert_eq!(sat, lat(&[vec![CycNum::one()], vec![z(4)]]));
    assert_eq!(k, 2.into());
    let split = forge::split_as_order_module(&gaussian_square(), &zi).unwrap();
    assert_eq!(split.factors.len(), 2);
    assert!(split.factors.iter().all(|f| f.multiplier_ring().discriminant() == Some(-4)));
    let o5 = ImaginaryQuadraticOrder::from_discriminant(-20).unwrap();
    let l5 = lat(&[vec![CycNum::one()], vec![o5.omega.clone()]]);
    assert!(matches!(forge::split_as_order_module(&l5, &o5), Err(Error::OutOfScope(_))));
}

#[test]
fn reflection_pipeline_examples() {
    let b2 = catalog::group("B2").unwrap();
    let refs = reflection::choose_generating_reflections(&b2).unwrap();
    let roots: Vec<CycVec> = refs.iter().map(|r| r.root.clone()).collect();
    let on_line = |v: &CycVec, w: &[i64]| reflection::line_coordinate(v, &rational_vec(w)).is_some();
    assert!(roots.iter().any(|r| on_line(r, &[1, 0])));
    assert!(roots.iter().any(|r| on_line(r, &[1, -1])));

    let rep = reflection::geom_report(&b2, &gaussian_square(), None).unwrap();
    let d = &rep.decomposition;
    assert!(d.graph.connected && !d.graph.edges.is_empty());
    assert!(d.multipliers.iter().all(|m| m.rational));
    let two = d.multipliers.iter().find(|m| m.cycle == vec![0, 1]).unwrap();
    assert_eq!(two.value, CycNum::from_int(2));
    assert!(rep.cm.ring.is_none());
    assert!(rep.cm.line_rings.iter().all(|r| r.discriminant() == Some(-4)));
    assert!(!d.s_determinant.is_zero());

    let g4 = catalog::group("G4").unwrap();
    let o3 = ImaginaryQuadraticOrder::from_discriminant(-3).unwrap();
    let l = forge::orbit_lattice_from_witness(&g4, &o3, DEFAULT_SEED).unwrap();
    let rep = reflection::geom_report(&g4, &l, None).unwrap();
    assert!(rep.decomposition.multipliers.iter().any(|m| !m.rational && m.cycle.len() <= 3));
    assert_eq!(rep.cm.ring.unwrap().field_discriminant(), Some(-3));

    let a2 = catalog::group("A2").unwrap();
    let l = forge::extend_rank_2n(&z2(), &z(3)).unwrap();
    let rep = reflection::geom_report(&a2, &l, None).unwrap();
    assert!(rep.cm.ring.is_none());
    assert_eq!(rep.decomposition.graph.edges.len(), 2);
    assert!(matches!(
        reflection::choose_generating_reflections(&catalog::group("Q8").unwrap()),
        Err(Error::NoWitness(_))
    ));
}

#[test]
fn quaternion_examples() {
    let h = QuatAlgebra::hamilton();
    let q = QuatElement::rational;
    assert_eq!(h.mul(&q([0, 1, 0, 0]), &q([0, 0, 1, 0])), q([0, 0, 0, 1]));
    assert_eq!(h.reduced_norm(&q([1, 1, 1, 1])), CycNum::from_int(4));
    assert_eq!(h.definiteness(), Definiteness::Definite);
    assert_eq!(QuatAlgebra::from_ints(-1, 3).unwrap().definiteness(), Definiteness::Indefinite);
    let w = quaternion::imaginary_quadratic_subfield(&h, 1).unwrap();
    assert_eq!((w.t, w.discriminant), (int(-1), -4));
    let x = q([0, 0, 1, 1]);
    assert_eq!(h.mul(&x, &x), q([-2, 0, 0, 0]));
    let c = quaternion::generic_c();
    assert_eq!(h.mul(&c, &c), q([-1, 0, 0, 0]));
    assert!(c.coords().iter().all(|x| 24 % x.conductor() == 0));
    assert_eq!(c.coords()[2].conductor(), 24);
}

#[test]
fn lattice_json_round_trip_fields() {
    let v = gaussian_square().to_json();
    assert_eq!(v["rank"], 4);
    assert_eq!(v["recipe"], "ds");
    assert!(v["basis"].as_array().unwrap().len() == 4);
    let l = lat(&[vec![CycNum::one()], vec![z(4)]]);
    let m = l.image(&vec![vec![z(4)]]).unwrap();
    assert_eq!(m, l);
    assert_eq!(scale_vec(&z(4), &[z(4)]), vec![CycNum::from_int(-1)]);
    assert_eq!(linalg::rank(&rational_mat(&[&[1, 2], &[2, 4]])), 1);
}
