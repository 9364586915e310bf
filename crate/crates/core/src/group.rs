//! Finite matrix groups over cyclotomic fields: closure, character,
//! irreducibility, invariant Hermitian form and reflections.

use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;

use crate::cyclotomic::{lcm, CycNum, Rational};
use crate::error::{Error, Result};
use crate::linalg;
use crate::vector::{self, CycMat, CycVec};

pub const DEFAULT_CAP: usize = 10_000;

/// A finite subgroup of `GL_n(Q(zeta_N))`, closed under multiplication.
#[derive(Clone, Debug)]
pub struct GroupRep {
    dim: usize,
    conductor: usize,
    elements: Vec<CycMat>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    index: HashMap<Vec<Rational>, usize>,
}

fn key(m: &CycMat, n: usize) -> Vec<Rational> {
    m.iter().flat_map(|r| vector::flatten(r, n)).collect()
}

/// Breadth-first closure of the generated group; fails once more than `cap`
/// elements have been found.
pub fn close_group(generators: &[CycMat], cap: usize) -> Result<GroupRep> {
    let dim = generators.first().map(|g| g.len()).unwrap_or(0);
    if dim == 0 {
        return Err(Error::InvalidInput("at least one nonempty generator is required".into()));
    }
    for g in generators {
        if g.len() != dim || g.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!("generators must be {dim}x{dim}")));
        }
    }
    let conductor = generators
        .iter()
        .fold(1, |acc, g| lcm(acc, vector::conductor_of_mat(g)));
    let gens: Vec<CycMat> = generators
        .iter()
        .map(|g| vector::lift_mat(g, conductor))
        .collect();
    for (i, g) in gens.iter().enumerate() {
        if linalg::rank(g) < dim {
            return Err(Error::NonInvertibleGenerator { index: i });
        }
    }

    let id = vector::lift_mat(&vector::identity_mat(dim), conductor);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(key(&id, conductor), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let h = vector::lift_mat(&linalg::mat_mul(&elements[e], g), conductor);
            let k = key(&h, conductor);
            if !index.contains_key(&k) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                index.insert(k, elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
    }
    let generators = gens
        .iter()
        .map(|g| index[&key(g, conductor)])
        .collect();
    let mut grp = GroupRep {
        dim,
        conductor,
        elements,
        generators,
        inverses: Vec::new(),
        index,
    };
    grp.inverses = (0..grp.order())
        .map(|i| {
            let inv = linalg::inverse(&grp.elements[i]).expect("group elements are invertible");
            grp.index_of(&inv).expect("closed group contains inverses")
        })
        .collect();
    Ok(grp)
}

impl GroupRep {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CycMat] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CycMat {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<&CycMat> {
        self.generators.iter().map(|&i| &self.elements[i]).collect()
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn index_of(&self, m: &CycMat) -> Option<usize> {
        if m.len() != self.dim || self.conductor % vector::conductor_of_mat(m) != 0 {
            return None;
        }
        self.index.get(&key(m, self.conductor)).copied()
    }

    pub fn contains(&self, m: &CycMat) -> bool {
        self.index_of(m).is_some()
    }

    pub fn multiply(&self, i: usize, j: usize) -> usize {
        let p = linalg::mat_mul(&self.elements[i], &self.elements[j]);
        self.index_of(&p).expect("group is closed")
    }

    /// Multiplicative order of element `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.multiply(cur, i);
            k += 1;
        }
        k
    }

    /// `chi(g) = tr(g)` for every element, in element order.
    pub fn character(&self) -> Vec<CycNum> {
        self.elements
            .iter()
            .map(|g| {
                (0..self.dim).fold(CycNum::zero(), |acc, i| acc.add_ref(&g[i][i]))
            })
            .collect()
    }

    /// `<chi, chi> = (1/|G|) sum chi(g) chi(g^-1)`, always a nonnegative integer.
    pub fn character_norm(&self) -> Result<Rational> {
        let chi = self.character();
        let mut acc = CycNum::zero();
        for (i, x) in chi.iter().enumerate() {
            acc = acc.add_ref(&x.mul_ref(&chi[self.inverses[i]]));
        }
        let norm = acc
            .as_rational()
            .ok_or_else(|| Error::Consistency("character norm is not rational".into()))?;
        let norm = norm / BigRational::from_integer(self.order().into());
        if !norm.is_integer() {
            return Err(Error::Consistency(format!("character norm {norm} is not an integer")));
        }
        Ok(norm)
    }

    pub fn irreducibility_check(&self) -> Result<IrreducibilityCertificate> {
        let norm = self.character_norm()?;
        Ok(IrreducibilityCertificate {
            irreducible: norm == Rational::from_integer(1.into()),
            norm,
        })
    }

    /// Fails with [`Error::Reducible`] unless the group acts irreducibly.
    pub fn require_irreducible(&self) -> Result<IrreducibilityCertificate> {
        let cert = self.irreducibility_check()?;
        if !cert.irreducible {
            return Err(Error::Reducible {
                norm: cert.norm.to_string(),
            });
        }
        Ok(cert)
    }

    /// `(1/|G|) sum g^H g`.
    pub fn invariant_hermitian(&self) -> HermitianForm {
        let mut gram = linalg::zeros::<CycNum>(self.dim, self.dim);
        for g in &self.elements {
            gram = linalg::mat_add(&gram, &linalg::mat_mul(&vector::conj_transpose(g), g));
        }
        let scale = CycNum::from_rational(Rational::new(1.into(), (self.order() as i64).into()));
        HermitianForm {
            gram: linalg::mat_scale(&gram, &scale),
        }
    }

    /// Every element with an `(n-1)`-dimensional fixed space, in element order.
    pub fn find_reflections(&self) -> Vec<ReflectionData> {
        let id = vector::identity_mat(self.dim);
        let mut out = Vec::new();
        for (i, g) in self.elements.iter().enumerate().skip(1) {
            let d = linalg::mat_sub(&id, g);
            if linalg::rank(&d) != 1 {
                continue;
            }
            let col = (0..self.dim)
                .map(|j| d.iter().map(|r| r[j].clone()).collect::<CycVec>())
                .find(|c| !vector::is_zero_vec(c))
                .expect("rank one matrix has a nonzero column");
            out.push(ReflectionData {
                element: i,
                root: col,
                eigenvalue: linalg::det(g),
            });
        }
        out
    }

    /// Matrix of the group element on flattened rational coordinates.
    pub fn rational_action(&self, i: usize) -> linalg::Mat<Rational> {
        vector::rational_action(&self.elements[i], self.conductor)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibilityCertificate {
    pub irreducible: bool,
    pub norm: Rational,
}

/// A Hermitian form `<u, v> = v^H gram u`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    pub gram: CycMat,
}

impl HermitianForm {
    pub fn inner(&self, u: &[CycNum], v: &[CycNum]) -> CycNum {
        vector::hermitian(&self.gram, u, v)
    }

    pub fn is_hermitian(&self) -> bool {
        vector::conj_transpose(&self.gram) == self.gram
    }

    pub fn is_invariant(&self, g: &CycMat) -> bool {
        let t = linalg::mat_mul(&linalg::mat_mul(&vector::conj_transpose(g), &self.gram), g);
        t == self.gram
    }

    /// Leading principal minors are real and positive (signs decided exactly).
    pub fn is_positive_definite(&self) -> Result<bool> {
        if !self.is_hermitian() {
            return Ok(false);
        }
        for k in 1..=self.gram.len() {
            let minor: CycMat = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            let d = linalg::det(&minor);
            if !d.is_real() || !d.is_positive_real()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A reflection `r` with root vector `b` spanning `(id - r)(V)` and
/// eigenvalue `theta = det(r)` on that line.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionData {
    pub element: usize,
    pub root: CycVec,
    pub eigenvalue: CycNum,
}

impl ReflectionData {
    /// `r(v) = v - (1 - theta) <v, b>/<b, b> b`, evaluated with the given form.
    pub fn apply_formula(&self, form: &HermitianForm, v: &[CycNum]) -> Result<CycVec> {
        let bb = form.inner(&self.root, &self.root);
        let coef = CycNum::one()
            .sub_ref(&self.eigenvalue)
            .mul_ref(&form.inner(v, &self.root))
            .try_div(&bb)?;
        Ok(vector::sub_vec(v, &vector::scale_vec(&coef, &self.root)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cyclotomic::int;

    #[test]
    fn quaternion_group_closes_to_eight() {
        let g = catalog::group("Q8").unwrap();
        assert_eq!(g.order(), 8);
        let chi = g.character();
        for (i, x) in chi.iter().enumerate() {
            let m = g.element(i);
            if vector::is_identity(m) {
                assert_eq!(*x, CycNum::from_int(2));
            } else if m == &vector::rational_mat(&[&[-1, 0], &[0, -1]]) {
                assert_eq!(*x, CycNum::from_int(-2));
            } else {
                assert!(x.is_zero());
            }
        }
        let cert = g.irreducibility_check().unwrap();
        assert!(cert.irreducible);
        assert_eq!(cert.norm, int(1));
        assert!(g.find_reflections().is_empty());
        assert!(g.invariant_hermitian().gram == vector::identity_mat(2));
    }

    #[test]
    fn trivial_group() {
        let g = close_group(&[vector::identity_mat(3)], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.character(), vec![CycNum::from_int(3)]);
    }

    #[test]
    fn reducible_sum_of_trivials() {
        let g = close_group(&[vector::identity_mat(2)], DEFAULT_CAP).unwrap();
        let cert = g.irreducibility_check().unwrap();
        assert!(!cert.irreducible);
        assert_eq!(cert.norm, int(4));
        assert!(matches!(g.require_irreducible(), Err(Error::Reducible { .. })));
    }

    #[test]
    fn s3_character_and_gram() {
        let g = catalog::group("S3-standard").unwrap();
        assert_eq!(g.order(), 6);
        let chi = g.character();
        let mut twos = 0;
        let mut minus_ones = 0;
        let mut zeros = 0;
        for x in &chi {
            match x.as_rational().unwrap() {
                q if q == int(2) => twos += 1,
                q if q == int(-1) => minus_ones += 1,
                q if q == int(0) => zeros += 1,
                q => panic!("unexpected trace {q}"),
            }
        }
        assert_eq!((twos, minus_ones, zeros), (1, 2, 3));
        assert!(g.irreducibility_check().unwrap().irreducible);
        // invariant form is proportional to the A2 Cartan form
        let h = g.invariant_hermitian();
        let lam = h.gram[0][0].try_div(&CycNum::from_int(2)).unwrap();
        let expected = linalg::mat_scale(&vector::rational_mat(&[&[2, -1], &[-1, 2]]), &lam);
        assert_eq!(h.gram, expected);
        assert!(h.is_positive_definite().unwrap());
    }

    #[test]
    fn weyl_b2_reflections() {
        let g = catalog::group("Weyl-B2").unwrap();
        assert_eq!(g.order(), 8);
        let refl = g.find_reflections();
        assert_eq!(refl.len(), 4);
        assert!(refl.iter().all(|r| r.eigenvalue == CycNum::from_int(-1)));
    }

    #[test]
    fn g4_reflections() {
        let g = catalog::group("G4").unwrap();
        assert_eq!(g.order(), 24);
        let refl = g.find_reflections();
        assert_eq!(refl.len(), 8);
        let w = CycNum::zeta(3);
        let w2 = CycNum::zeta_pow(3, 2);
        assert!(refl.iter().all(|r| r.eigenvalue == w || r.eigenvalue == w2));
        let form = g.invariant_hermitian();
        for r in &refl {
            // r(b) = theta b and the closed formula reproduces r
            let m = g.element(r.element);
            assert_eq!(vector::apply(m, &r.root), vector::scale_vec(&r.eigenvalue, &r.root));
            for e in [vector::rational_vec(&[1, 0]), vector::rational_vec(&[0, 1])] {
                assert_eq!(r.apply_formula(&form, &e).unwrap(), vector::apply(m, &e));
            }
        }
    }

    #[test]
    fn cap_and_singular_generator() {
        // infinite order: [[1,1],[0,1]]
        let shear = vector::rational_mat(&[&[1, 1], &[0, 1]]);
        assert!(matches!(close_group(&[shear], 50), Err(Error::CapExceeded { cap: 50 })));
        let sing = vector::rational_mat(&[&[1, 0], &[0, 0]]);
        assert!(matches!(
            close_group(&[sing], 50),
            Err(Error::NonInvertibleGenerator { index: 0 })
        ));
    }
}
