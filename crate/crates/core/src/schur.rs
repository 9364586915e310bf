//! Character field, Frobenius–Schur type, rational Schur index and the
//! resulting decision on invariant lattices.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::{
    cyclotomic_polynomial, euler_phi, int, quadratic_field_discriminant, CycNum, Rational,
};
use crate::error::{Error, Result};
use crate::group::GroupRep;
use crate::linalg::{self, Mat, RationalSubspaceBasis};
use crate::vector::{self, CycMat, CycVec};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum FieldClass {
    Rational,
    ImaginaryQuadratic { discriminant: i64 },
    Other { degree: usize, real: bool },
}

impl FieldClass {
    pub fn degree(&self) -> usize {
        match self {
            FieldClass::Rational => 1,
            FieldClass::ImaginaryQuadratic { .. } => 2,
            FieldClass::Other { degree, .. } => *degree,
        }
    }
}

/// `Q`-basis of the field generated by `values` inside `Q(zeta_n)`.
pub fn generated_field_basis(values: &[CycNum], n: usize) -> Vec<CycNum> {
    let phi = euler_phi(n);
    let mut distinct: Vec<CycNum> = Vec::new();
    for x in values {
        if !distinct.contains(x) {
            distinct.push(x.clone());
        }
    }
    let mut span = RationalSubspaceBasis::from_vectors(phi, &[CycNum::one().lift(n).coeffs().to_vec()]);
    loop {
        let before = span.dim();
        let current: Vec<CycNum> = span
            .rows()
            .iter()
            .map(|r| CycNum::new(n, r.clone()).expect("phi coordinates"))
            .collect();
        let mut new = span.rows().clone();
        for b in &current {
            for x in &distinct {
                new.push(b.mul_ref(x).lift(n).coeffs().to_vec());
            }
        }
        span = RationalSubspaceBasis::from_vectors(phi, &new);
        if span.dim() == before {
            return current;
        }
    }
}

/// `Q`-basis of the field generated by the character values.
pub fn character_field_basis(g: &GroupRep) -> Vec<CycNum> {
    generated_field_basis(&g.character(), g.conductor())
}

pub fn classify_character_field(g: &GroupRep) -> FieldClass {
    let chi = g.character();
    let basis = character_field_basis(g);
    let real = chi.iter().all(CycNum::is_real);
    match basis.len() {
        1 => FieldClass::Rational,
        2 if !real => {
            let x = chi.iter().find(|x| !x.is_real()).expect("non-real value");
            let p = x.minimal_polynomial();
            debug_assert_eq!(p.len(), 3);
            let d = &p[1] * &p[1] - int(4) * &p[0];
            FieldClass::ImaginaryQuadratic {
                discriminant: quadratic_field_discriminant(&d),
            }
        }
        degree => FieldClass::Other { degree, real },
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BilinearType {
    Orthogonal,
    Symplectic,
    Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilinearCertificate {
    pub kind: BilinearType,
    pub indicator: i64,
    /// Invariant form `B(u, v) = u^T form v`, present when the indicator is nonzero.
    pub form: Option<CycMat>,
}

pub fn frobenius_schur_indicator(g: &GroupRep) -> Result<i64> {
    let chi = g.character();
    let mut acc = CycNum::zero();
    for i in 0..g.order() {
        acc = acc.add_ref(&chi[g.multiply(i, i)]);
    }
    let q = acc
        .as_rational()
        .ok_or_else(|| Error::Consistency("indicator sum is not rational".into()))?
        / Rational::from_integer(g.order().into());
    if !q.is_integer() || q.abs() > Rational::one() {
        return Err(Error::Consistency(format!("indicator {q} outside {{-1,0,1}}")));
    }
    Ok(i64::try_from(q.to_integer()).expect("small"))
}

fn average_bilinear(g: &GroupRep, start: &CycMat) -> CycMat {
    let n = g.dimension();
    let mut acc = linalg::zeros::<CycNum>(n, n);
    for m in g.elements() {
        acc = linalg::mat_add(&acc, &linalg::mat_mul(&linalg::transpose(m), &linalg::mat_mul(start, m)));
    }
    linalg::mat_scale(&acc, &CycNum::from_rational(Rational::new(1.into(), g.order().into())))
}

pub fn bilinear_type(g: &GroupRep) -> Result<BilinearCertificate> {
    let nu = frobenius_schur_indicator(g)?;
    let kind = match nu {
        1 => BilinearType::Orthogonal,
        -1 => BilinearType::Symplectic,
        _ => BilinearType::Complex,
    };
    if nu == 0 {
        return Ok(BilinearCertificate {
            kind,
            indicator: 0,
            form: None,
        });
    }
    let n = g.dimension();
    let sign = CycNum::from_int(nu);
    for a in 0..n {
        for b in a..n {
            if nu == -1 && a == b {
                continue;
            }
            let mut start = linalg::zeros::<CycNum>(n, n);
            start[a][b] = CycNum::one();
            start[b][a] = start[b][a].add_ref(&sign);
            let form = average_bilinear(g, &start);
            if form.iter().flatten().any(|x| !x.is_zero()) {
                if linalg::rank(&form) < n {
                    return Err(Error::Consistency("averaged invariant form is degenerate".into()));
                }
                return Ok(BilinearCertificate {
                    kind,
                    indicator: nu,
                    form: Some(form),
                });
            }
        }
    }
    Err(Error::Consistency("nonzero indicator without an invariant form".into()))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SimplicityCertificate {
    /// `dim_Q = n · [Q(χ):Q]`, the least possible dimension.
    DimensionBound,
    /// The commutant is a field.
    CommutativeCommutant { dimension: usize },
    /// The commutant is the definite quaternion algebra `(a, b)`.
    DefiniteQuaternionCommutant { a: String, b: String },
    /// No certificate; the descent made no progress for this many passes.
    StablePasses { passes: usize },
}

#[derive(Clone, Debug)]
pub struct SchurResult {
    pub m: usize,
    pub simple_dimension: usize,
    pub field_degree: usize,
    /// `Q`-basis of the simple submodule, as vectors of `V`.
    pub witness: Vec<CycVec>,
    pub certificate: SimplicityCertificate,
}

impl SchurResult {
    pub fn is_certified(&self) -> bool {
        !matches!(self.certificate, SimplicityCertificate::StablePasses { .. })
    }
}

struct Module {
    actions: Vec<Mat<Rational>>,
    size: usize,
}

impl Module {
    fn new(g: &GroupRep) -> Module {
        let actions = g.generator_indices().iter().map(|&i| g.rational_action(i)).collect();
        Module {
            actions,
            size: g.dimension() * euler_phi(g.conductor()),
        }
    }

    /// `Q`-span of the orbit of `w` under the generators.
    fn span(&self, w: &[Rational]) -> RationalSubspaceBasis {
        let mut vecs = vec![w.to_vec()];
        let mut span = RationalSubspaceBasis::from_vectors(self.size, &vecs);
        let mut queue = vec![w.to_vec()];
        while let Some(v) = queue.pop() {
            for a in &self.actions {
                let img = linalg::mat_vec(a, &v);
                if !span.contains(&img) {
                    vecs.push(img.clone());
                    span = RationalSubspaceBasis::from_vectors(self.size, &vecs);
                    queue.push(img);
                }
            }
        }
        span
    }

    /// Matrices of the generators on `u` in its echelon coordinates.
    fn restricted(&self, u: &RationalSubspaceBasis) -> Vec<Mat<Rational>> {
        self.actions
            .iter()
            .map(|a| {
                let cols: Vec<Vec<Rational>> = u
                    .rows()
                    .iter()
                    .map(|r| u.coordinates(&linalg::mat_vec(a, r)).expect("submodule is stable"))
                    .collect();
                linalg::transpose(&cols)
            })
            .collect()
    }

    /// Basis of `End_QG(u)` as `k x k` matrices in echelon coordinates.
    fn commutant(&self, u: &RationalSubspaceBasis) -> Vec<Mat<Rational>> {
        let k = u.dim();
        let gens = self.restricted(u);
        // unknown X[i][j] at position i*k + j; equations (R X - X R)[i][j] = 0
        let mut eqs: Mat<Rational> = Vec::new();
        for r in &gens {
            for i in 0..k {
                for j in 0..k {
                    let mut row = vec![Rational::zero(); k * k];
                    for l in 0..k {
                        row[l * k + j] += &r[i][l];
                        row[i * k + l] -= &r[l][j];
                    }
                    eqs.push(row);
                }
            }
        }
        linalg::nullspace(&eqs, k * k)
            .into_iter()
            .map(|x| x.chunks(k).map(<[Rational]>::to_vec).collect())
            .collect()
    }

    /// A proper submodule found as the image of a singular nonzero commutant
    /// element, if one turns up among basis elements and small combinations.
    fn split_by_commutant(&self, u: &RationalSubspaceBasis, rng: &mut ChaCha8Rng) -> Option<RationalSubspaceBasis> {
        let comm = self.commutant(u);
        let k = u.dim();
        let mut candidates: Vec<Mat<Rational>> = comm.clone();
        for _ in 0..8 {
            let mut x = linalg::zeros::<Rational>(k, k);
            for c in &comm {
                let t = int(rng.gen_range(-3..=3));
                x = linalg::mat_add(&x, &linalg::mat_scale(c, &t));
            }
            candidates.push(x);
        }
        // rational eigenvalues give singular shifts
        let mut shifted = Vec::new();
        for x in &candidates {
            for lam in rational_eigenvalues(x) {
                shifted.push(linalg::mat_sub(x, &linalg::mat_scale(&linalg::identity(k), &lam)));
            }
        }
        candidates.extend(shifted);
        for x in candidates {
            let r = linalg::rank(&x);
            if r == 0 || r == k {
                continue;
            }
            // image of x, mapped back to ambient coordinates
            let cols = linalg::transpose(&x);
            let img: Vec<Vec<Rational>> = cols.iter().map(|c| u.combine(c)).collect();
            let sub = RationalSubspaceBasis::from_vectors(self.size, &img);
            if sub.dim() > 0 && sub.dim() < k {
                return Some(sub);
            }
        }
        None
    }

    fn certify(&self, u: &RationalSubspaceBasis, lower: usize) -> Option<SimplicityCertificate> {
        if u.dim() == lower {
            return Some(SimplicityCertificate::DimensionBound);
        }
        let comm = self.commutant(u);
        let commutative = comm.iter().all(|x| {
            comm.iter()
                .all(|y| linalg::mat_mul(x, y) == linalg::mat_mul(y, x))
        });
        if commutative {
            return Some(SimplicityCertificate::CommutativeCommutant { dimension: comm.len() });
        }
        if comm.len() == 4 {
            if let Some((a, b)) = quaternion_parameters(&comm) {
                if a < Rational::zero() && b < Rational::zero() {
                    return Some(SimplicityCertificate::DefiniteQuaternionCommutant {
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
            }
        }
        None
    }

    fn descend(&self, start: &[Rational], lower: usize, seed: u64) -> (RationalSubspaceBasis, SimplicityCertificate) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = self.span(start);
        let mut stable = 0;
        loop {
            if let Some(c) = self.certify(&cur, lower) {
                return (cur, c);
            }
            let mut candidates: Vec<Vec<Rational>> = cur.rows().clone();
            for _ in 0..8 {
                let coeffs: Vec<Rational> = (0..cur.dim()).map(|_| int(rng.gen_range(-3..=3))).collect();
                candidates.push(cur.combine(&coeffs));
            }
            let smaller = candidates
                .iter()
                .filter(|w| w.iter().any(|x| !x.is_zero()))
                .map(|w| self.span(w))
                .find(|s| s.dim() < cur.dim())
                .or_else(|| self.split_by_commutant(&cur, &mut rng));
            match smaller {
                Some(s) => {
                    cur = s;
                    stable = 0;
                }
                None => {
                    stable += 1;
                    if stable >= 2 {
                        return (cur, SimplicityCertificate::StablePasses { passes: stable });
                    }
                }
            }
        }
    }
}

/// Rational roots of the minimal polynomial of a square rational matrix.
fn rational_eigenvalues(x: &Mat<Rational>) -> Vec<Rational> {
    let k = x.len();
    let mut powers: Vec<Vec<Rational>> = vec![linalg::identity::<Rational>(k).concat()];
    let mut cur = linalg::identity::<Rational>(k);
    let poly = loop {
        cur = linalg::mat_mul(&cur, x);
        let flat = cur.concat();
        let sol = linalg::solve_least(&linalg::transpose(&powers), &flat);
        if let Some(sol) = sol {
            let mut p: Vec<Rational> = sol.into_iter().map(|c| -c).collect();
            p.push(Rational::one());
            break p;
        }
        powers.push(flat);
    };
    rational_roots(&poly)
}

/// Rational roots of a polynomial (lowest degree first) by the rational-root test.
pub fn rational_roots(poly: &[Rational]) -> Vec<Rational> {
    use num_bigint::BigInt;
    let den = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[low..];
    let (a0, an) = (ints[0].clone(), ints[ints.len() - 1].clone());
    if ints.len() < 2 {
        return roots;
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = num_traits::Signed::abs(n);
        let Ok(small) = u64::try_from(&n) else { return Vec::new() };
        (1..=small)
            .take_while(|d| d * d <= small)
            .filter(|d| small % d == 0)
            .flat_map(|d| [d, small / d])
            .map(BigInt::from)
            .collect()
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for s in [1, -1] {
                let r = Rational::new(&p * s, q.clone());
                if roots.contains(&r) {
                    continue;
                }
                let val = ints.iter().rev().fold(Rational::zero(), |acc, c| {
                    acc * &r + Rational::from_integer(c.clone())
                });
                if val.is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// Quaternion parameters `(a, b)` of a 4-dimensional central simple algebra
/// given by a matrix basis, via `i' = e - tr/2` and `j' = i'y - yi'`.
fn quaternion_parameters(basis: &[Mat<Rational>]) -> Option<(Rational, Rational)> {
    let k = basis[0].len();
    let id = linalg::identity::<Rational>(k);
    let in_span = |span: &[Mat<Rational>], x: &Mat<Rational>| {
        let rows: Vec<Vec<Rational>> = span.iter().map(|m| m.concat()).collect();
        RationalSubspaceBasis::from_vectors(k * k, &rows).contains(&x.concat())
    };
    let e = basis.iter().find(|x| !in_span(&[id.clone()], x))?;
    // e^2 = t e + s
    let e2 = linalg::mat_mul(e, e);
    let cols = vec![e.concat(), id.concat()];
    let sol = linalg::solve_least(&linalg::transpose(&cols), &e2.concat())?;
    let half_t = &sol[0] / int(2);
    let i1 = linalg::mat_sub(e, &linalg::mat_scale(&id, &half_t));
    let a = scalar_of(&linalg::mat_mul(&i1, &i1))?;
    let y = basis
        .iter()
        .find(|x| !in_span(&[id.clone(), i1.clone()], x))?;
    let j1 = linalg::mat_sub(&linalg::mat_mul(&i1, y), &linalg::mat_mul(y, &i1));
    let b = scalar_of(&linalg::mat_mul(&j1, &j1))?;
    (!a.is_zero() && !b.is_zero()).then_some((a, b))
}

fn scalar_of(m: &Mat<Rational>) -> Option<Rational> {
    let c = m[0][0].clone();
    let ok = m
        .iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { *x == c } else { x.is_zero() }));
    ok.then_some(c)
}

/// Deterministic starting vectors in flattened coordinates: standard basis
/// vectors first, then sums of consecutive ones, then powers `(1, 2^c, 3^c, ...)`.
pub fn starting_vectors(g: &GroupRep, count: usize) -> Vec<Vec<Rational>> {
    let size = g.dimension() * euler_phi(g.conductor());
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); size];
        v[i] = Rational::one();
        v
    };
    let mut out: Vec<Vec<Rational>> = (0..size).map(unit).collect();
    for i in 0..size {
        let mut v = unit(i);
        v[(i + 1) % size] += Rational::one();
        out.push(v);
    }
    // (1, 2^c, 3^c, ...) stays distinct for any size above 1
    for c in 1..=count as u32 {
        let v: Vec<Rational> = (0..size).map(|i| int((i as i64 + 1).pow(c))).collect();
        out.push(v);
    }
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    for v in out {
        if !seen.contains(&v) {
            seen.push(v);
        }
        if seen.len() == count {
            break;
        }
    }
    seen
}

pub fn schur_index_from(g: &GroupRep, start: &[Rational], seed: u64) -> Result<SchurResult> {
    let degree = character_field_basis(g).len();
    let module = Module::new(g);
    if start.len() != module.size || start.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("starting vector must be nonzero".into()));
    }
    let lower = degree * g.dimension();
    let (simple, certificate) = module.descend(start, lower, seed);
    let dim = simple.dim();
    if dim % lower != 0 {
        return Err(Error::Consistency(format!(
            "submodule dimension {dim} is not a multiple of n·[Q(χ):Q] = {lower}"
        )));
    }
    let witness = simple
        .rows()
        .iter()
        .map(|r| vector::unflatten(r, g.dimension(), g.conductor()))
        .collect();
    let m = dim / lower;
    if m > 2 && g.character().iter().all(CycNum::is_real) {
        return Err(Error::Consistency(format!("Schur index {m} > 2 for a real character")));
    }
    Ok(SchurResult {
        m,
        simple_dimension: dim,
        field_degree: degree,
        witness,
        certificate,
    })
}

pub fn schur_index(g: &GroupRep, seed: u64) -> Result<SchurResult> {
    let start = starting_vectors(g, 1).remove(0);
    schur_index_from(g, &start, seed)
}

/// The witness is a `Q(χ)`-form: its `Q`-span is `G`-stable of dimension
/// `n·[Q(χ):Q]` and its `C`-span is `V`.
pub fn is_character_field_form(g: &GroupRep, witness: &[CycVec]) -> bool {
    if vector::cyc_rank(witness) != g.dimension() {
        return false;
    }
    let n = g.conductor();
    let flat: Vec<Vec<Rational>> = witness.iter().map(|w| vector::flatten(w, n)).collect();
    let span = RationalSubspaceBasis::from_vectors(g.dimension() * euler_phi(n), &flat);
    if span.dim() != g.dimension() * character_field_basis(g).len() {
        return false;
    }
    g.generators().iter().all(|m| {
        witness
            .iter()
            .all(|w| span.contains(&vector::flatten(&vector::apply(m, w), n)))
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GcdCertificate {
    pub gcd: usize,
    /// `(operator, dim ker)` pairs that produced the gcd.
    pub kernels: Vec<(String, usize)>,
}

fn kernel_dim(m: &CycMat) -> usize {
    m.len() - linalg::rank(m)
}

fn eval_matrix_poly(poly: &[Rational], g: &CycMat) -> CycMat {
    let n = g.len();
    let mut acc = linalg::zeros::<CycNum>(n, n);
    for c in poly.iter().rev() {
        acc = linalg::mat_add(
            &linalg::mat_mul(&acc, g),
            &linalg::mat_scale(&vector::identity_mat(n), &CycNum::from_rational(c.clone())),
        );
    }
    acc
}

/// Certificate that the Schur index is 1 from kernel dimensions of elements of
/// `QG`: `Φ_k(g)` for each element and each `k` dividing its order, the zero
/// operator, and sums of two generators.
pub fn gcd_kernel_shortcut(g: &GroupRep) -> Option<GcdCertificate> {
    let n = g.dimension();
    let mut gcd = n;
    let mut kernels = vec![("0".to_string(), n)];
    if gcd == 1 {
        return Some(GcdCertificate { gcd, kernels });
    }
    for i in 0..g.order() {
        let ord = g.element_order(i);
        for k in (1..=ord).filter(|k| ord % k == 0) {
            let poly: Vec<Rational> = cyclotomic_polynomial(k).into_iter().map(int).collect();
            let u = eval_matrix_poly(&poly, g.element(i));
            let d = kernel_dim(&u);
            if d == 0 || d == n {
                continue;
            }
            let new = gcd.gcd(&d);
            if new < gcd {
                gcd = new;
                kernels.push((format!("Phi_{k}(g{i})"), d));
                if gcd == 1 {
                    return Some(GcdCertificate { gcd, kernels });
                }
            }
        }
    }
    let gens = g.generator_indices();
    for (a, &x) in gens.iter().enumerate() {
        for &y in &gens[a..] {
            let u = linalg::mat_add(g.element(x), g.element(y));
            let d = kernel_dim(&u);
            if d > 0 && d < n {
                let new = gcd.gcd(&d);
                if new < gcd {
                    gcd = new;
                    kernels.push((format!("g{x} + g{y}"), d));
                    if gcd == 1 {
                        return Some(GcdCertificate { gcd, kernels });
                    }
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CharacterProfile {
    pub field: FieldClass,
    pub field_degree: usize,
    pub bilinear: BilinearType,
    pub indicator: i64,
    pub schur_index: usize,
    pub schur_certificate: SimplicityCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gcd_certificate: Option<GcdCertificate>,
}

pub fn character_profile(g: &GroupRep, seed: u64) -> Result<CharacterProfile> {
    let field = classify_character_field(g);
    let bil = bilinear_type(g)?;
    let schur = schur_index(g, seed)?;
    let gcd = gcd_kernel_shortcut(g);
    if gcd.is_some() && schur.m != 1 {
        return Err(Error::Consistency("gcd certificate contradicts Schur index".into()));
    }
    let real = g.character().iter().all(CycNum::is_real);
    if real != (bil.kind != BilinearType::Complex) {
        return Err(Error::Consistency("indicator disagrees with reality of the character".into()));
    }
    Ok(CharacterProfile {
        field_degree: field.degree(),
        field,
        bilinear: bil.kind,
        indicator: bil.indicator,
        schur_index: schur.m,
        schur_certificate: schur.certificate,
        gcd_certificate: gcd,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    #[serde(rename = "c-i")]
    CI,
    #[serde(rename = "c-ii")]
    CII,
    #[serde(rename = "none")]
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeVerdict {
    pub exists_any: bool,
    pub exists_rank_n: bool,
    pub exists_rank_2n: bool,
    pub clause: Clause,
}

pub fn lattice_existence_verdict(profile: &CharacterProfile, _n: usize) -> Result<LatticeVerdict> {
    let m = profile.schur_index;
    let (any, rank_n, clause) = match (&profile.field, m) {
        (FieldClass::Rational, 1) => (true, true, Clause::CI),
        (FieldClass::ImaginaryQuadratic { .. }, 1) => (true, false, Clause::CI),
        (FieldClass::Rational, 2) => (true, false, Clause::CII),
        _ => (false, false, Clause::None),
    };
    let v = LatticeVerdict {
        exists_any: any,
        exists_rank_n: rank_n,
        exists_rank_2n: any,
        clause,
    };
    if v.exists_any && profile.bilinear == BilinearType::Complex {
        let ok = m == 1 && matches!(profile.field, FieldClass::ImaginaryQuadratic { .. });
        if !ok {
            return Err(Error::Consistency("non-self-dual module with a lattice".into()));
        }
    }
    if m >= 3 && v.exists_any {
        return Err(Error::Consistency("Schur index >= 3 with a lattice".into()));
    }
    Ok(v)
}
