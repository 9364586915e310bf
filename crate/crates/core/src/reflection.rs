//! Reflection groups: line lattices, the sublattice they generate, cycle
//! multipliers, complex multiplication and the isogeny graph.

use std::collections::VecDeque;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::group::{close_group, GroupRep, HermitianForm, ReflectionData};
use crate::lattice::{Index, IsogenyWitness, MultiplierRing, RankTwoLattice, ZLattice};
use crate::linalg;
use crate::schur;
use crate::vector::{self, CycMat, CycVec};

fn combinations(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, n, &mut Vec::new(), &mut out);
    out
}

/// First `n` reflections (in element order) whose roots span `V` and which
/// generate the whole group.
pub fn choose_generating_reflections(g: &GroupRep) -> Result<Vec<ReflectionData>> {
    let refl = g.find_reflections();
    if refl.is_empty() {
        return Err(Error::NoWitness("group contains no reflections".into()));
    }
    let n = g.dimension();
    for combo in combinations(refl.len(), n) {
        let roots: Vec<CycVec> = combo.iter().map(|&i| refl[i].root.clone()).collect();
        if vector::cyc_rank(&roots) < n {
            continue;
        }
        let gens: Vec<CycMat> = combo.iter().map(|&i| g.element(refl[i].element).clone()).collect();
        if close_group(&gens, g.order())?.order() == g.order() {
            return Ok(combo.into_iter().map(|i| refl[i].clone()).collect());
        }
    }
    Err(Error::NoWitness(format!(
        "no {n} reflections generate the group"
    )))
}

fn pivot(b: &[CycNum]) -> usize {
    b.iter().position(|x| !x.is_zero()).expect("nonzero root")
}

/// `t` with `v = t b`, if `v` lies on the line `C b`.
pub fn line_coordinate(v: &[CycNum], b: &[CycNum]) -> Option<CycNum> {
    let p = pivot(b);
    let t = v[p].try_div(&b[p]).ok()?;
    (vector::scale_vec(&t, b) == v).then_some(t)
}

fn id_minus(m: &CycMat) -> CycMat {
    linalg::mat_sub(&vector::identity_mat(m.len()), m)
}

#[derive(Clone, Debug, Serialize)]
pub struct LineLattice {
    pub root: CycVec,
    pub eigenvalue: CycNum,
    pub rank: usize,
    /// Generators in the coordinate along `root`, when the rank is two.
    pub lattice: Option<RankTwoLattice>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierRecord {
    pub cycle: Vec<usize>,
    pub value: CycNum,
    pub rational: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub inner_product: CycNum,
    /// `(id - r_to)` restricted to `l_from`, as multiplication in line coordinates.
    pub map_scalar: CycNum,
    pub index: Index,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsogenyGraph {
    pub edges: Vec<GraphEdge>,
    pub connected: bool,
    /// `isogeny_test` witness `c Λ_k ⊆ Λ_j` for each pair `j < k`.
    pub pairwise: Vec<(usize, usize, Option<IsogenyWitness>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflectionDecomposition {
    #[serde(skip)]
    pub reflections: Vec<ReflectionData>,
    #[serde(skip)]
    pub matrices: Vec<CycMat>,
    #[serde(skip)]
    pub form: HermitianForm,
    pub lines: Vec<LineLattice>,
    pub direct_sum: bool,
    pub lambda0: ZLattice,
    pub index: Index,
    pub s_determinant: CycNum,
    pub multipliers: Vec<MultiplierRecord>,
    pub graph: IsogenyGraph,
}

/// `Λ_j = Λ ∩ C b_j`, `Λ⁰ = Σ Λ_j`, `[Λ : Λ⁰]` and `det s` for
/// `s = Σ (id - r_j)`.
pub fn line_lattice_decomposition(
    lat: &ZLattice,
    g: &GroupRep,
    refs: &[ReflectionData],
    cycle_bound: usize,
) -> Result<ReflectionDecomposition> {
    let n = g.dimension();
    if lat.rank() != 2 * n {
        return Err(Error::Precondition(format!("lattice rank {} != 2n", lat.rank())));
    }
    if !lat.invariance_check(g) {
        return Err(Error::Precondition("lattice is not G-invariant".into()));
    }
    let roots: Vec<CycVec> = refs.iter().map(|r| r.root.clone()).collect();
    let direct_sum = roots.len() == n && vector::cyc_rank(&roots) == n;
    if !direct_sum {
        return Err(Error::Precondition("root lines do not form a direct sum".into()));
    }
    let matrices: Vec<CycMat> = refs.iter().map(|r| g.element(r.element).clone()).collect();

    let mut lines = Vec::new();
    let mut lambda0 = ZLattice::zero(n);
    for r in refs {
        let lj = lat.intersect_complex_span(std::slice::from_ref(&r.root))?;
        let coords: Vec<CycNum> = lj
            .basis_vectors()
            .iter()
            .map(|v| line_coordinate(v, &r.root).expect("vector on the root line"))
            .collect();
        let lattice = match coords.as_slice() {
            [a, b] => Some(RankTwoLattice::new(a.clone(), b.clone())?),
            _ => None,
        };
        if lattice.is_none() {
            return Err(Error::Consistency(format!(
                "line lattice of rank {} in a rank-2n lattice",
                lj.rank()
            )));
        }
        lambda0 = lambda0.sum(&lj)?;
        lines.push(LineLattice {
            root: r.root.clone(),
            eigenvalue: r.eigenvalue.clone(),
            rank: lj.rank(),
            lattice,
        });
    }
    let s = matrices
        .iter()
        .fold(linalg::zeros::<CycNum>(n, n), |acc, m| linalg::mat_add(&acc, &id_minus(m)));
    let s_det = linalg::det(&s);
    if s_det.is_zero() {
        return Err(Error::Consistency("s is degenerate".into()));
    }
    let index = lat.index(&lambda0)?;
    if index == Index::Infinite {
        return Err(Error::Consistency("Λ⁰ has infinite index".into()));
    }
    let form = g.invariant_hermitian();
    let mut dec = ReflectionDecomposition {
        reflections: refs.to_vec(),
        matrices,
        form,
        lines,
        direct_sum,
        lambda0,
        index,
        s_determinant: s_det,
        multipliers: Vec::new(),
        graph: IsogenyGraph {
            edges: Vec::new(),
            connected: false,
            pairwise: Vec::new(),
        },
    };
    dec.multipliers = scan_cycles(&dec, cycle_bound)?;
    dec.graph = isogeny_graph(&dec)?;
    Ok(dec)
}

/// Eigenvalue of `(id - r_j1)(id - r_jm)...(id - r_j2)` on `l_j1`, checked
/// against the trace of the composition.
pub fn cycle_multiplier(matrices: &[CycMat], roots: &[CycVec], cycle: &[usize]) -> Result<CycNum> {
    let Some((&first, rest)) = cycle.split_first() else {
        return Err(Error::InvalidInput("empty cycle".into()));
    };
    if cycle.iter().any(|&j| j >= matrices.len()) {
        return Err(Error::InvalidInput("cycle index out of range".into()));
    }
    let n = matrices[0].len();
    let mut op = vector::identity_mat(n);
    for &j in rest.iter().chain(std::iter::once(&first)) {
        op = linalg::mat_mul(&id_minus(&matrices[j]), &op);
    }
    let b = &roots[first];
    let w = vector::apply(&op, b);
    let c = line_coordinate(&w, b)
        .ok_or_else(|| Error::Consistency("cycle operator leaves the root line".into()))?;
    let trace = (0..n).fold(CycNum::zero(), |acc, i| acc.add_ref(&op[i][i]));
    if trace != c {
        return Err(Error::Consistency("cycle multiplier disagrees with the trace".into()));
    }
    Ok(c)
}

/// Cyclic words `j1..jm` (`m <= bound`) with cyclically distinct neighbours,
/// in lexicographic order within each length.
pub fn cycles(n: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();
    let mut frontier: Vec<Vec<usize>> = out.clone();
    for len in 2..=bound {
        let mut next = Vec::new();
        for w in &frontier {
            for j in 0..n {
                if *w.last().expect("nonempty") != j {
                    let mut v = w.clone();
                    v.push(j);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().filter(|w| w.len() == len && w[0] != w[len - 1]).cloned());
        frontier = next;
    }
    out
}

fn scan_cycles(dec: &ReflectionDecomposition, bound: usize) -> Result<Vec<MultiplierRecord>> {
    let roots: Vec<CycVec> = dec.lines.iter().map(|l| l.root.clone()).collect();
    cycles(roots.len(), bound)
        .into_iter()
        .map(|cycle| {
            let value = cycle_multiplier(&dec.matrices, &roots, &cycle)?;
            Ok(MultiplierRecord {
                rational: value.is_rational(),
                cycle,
                value,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CmDetection {
    /// First non-rational cycle multiplier, with `c Λ_j1 ⊆ Λ_j1` verified.
    pub cycle: Option<Vec<usize>>,
    pub multiplier: Option<CycNum>,
    pub ring: Option<MultiplierRing>,
    /// Multiplier ring of every line lattice.
    pub line_rings: Vec<MultiplierRing>,
}

pub fn cm_detect(dec: &ReflectionDecomposition) -> Result<CmDetection> {
    let line_rings: Vec<MultiplierRing> = dec
        .lines
        .iter()
        .filter_map(|l| l.lattice.as_ref().map(RankTwoLattice::multiplier_ring))
        .collect();
    let mut out = CmDetection {
        cycle: None,
        multiplier: None,
        ring: None,
        line_rings,
    };
    if let Some(rec) = dec.multipliers.iter().find(|r| !r.rational) {
        let j = rec.cycle[0];
        let lj = dec.lines[j]
            .lattice
            .as_ref()
            .ok_or_else(|| Error::Consistency("line lattice missing".into()))?;
        if !lj.is_multiplier(&rec.value) {
            return Err(Error::Consistency("cycle multiplier does not preserve its line lattice".into()));
        }
        let ring = lj.multiplier_ring();
        if !ring.is_cm() {
            return Err(Error::Consistency("non-rational multiplier but trivial multiplier ring".into()));
        }
        out.cycle = Some(rec.cycle.clone());
        out.multiplier = Some(rec.value.clone());
        out.ring = Some(ring);
    }
    Ok(out)
}

pub fn isogeny_graph(dec: &ReflectionDecomposition) -> Result<IsogenyGraph> {
    let k = dec.lines.len();
    let mut edges = Vec::new();
    for j in 0..k {
        for l in 0..k {
            if j == l {
                continue;
            }
            let bj = &dec.lines[j].root;
            let bl = &dec.lines[l].root;
            let ip = dec.form.inner(bj, bl);
            let w = vector::apply(&id_minus(&dec.matrices[l]), bj);
            let mu = line_coordinate(&w, bl)
                .ok_or_else(|| Error::Consistency("(id - r) leaves its root line".into()))?;
            if ip.is_zero() != mu.is_zero() {
                return Err(Error::Consistency("edge criteria disagree".into()));
            }
            if ip.is_zero() {
                continue;
            }
            let (src, dst) = match (&dec.lines[j].lattice, &dec.lines[l].lattice) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Consistency("line lattice missing".into())),
            };
            let (a1, a2) = src.generators();
            let image = RankTwoLattice::new(mu.mul_ref(a1), mu.mul_ref(a2))?;
            let index = dst.to_zlattice().index(&image.to_zlattice()).map_err(|_| {
                Error::Consistency(format!("(id - r_{l}) does not map Λ_{j} into Λ_{l}"))
            })?;
            edges.push(GraphEdge {
                from: j,
                to: l,
                inner_product: ip,
                map_scalar: mu,
                index,
            });
        }
    }
    let mut seen = vec![false; k];
    let mut queue = VecDeque::from([0usize]);
    if k > 0 {
        seen[0] = true;
    }
    while let Some(v) = queue.pop_front() {
        for e in edges.iter().filter(|e| e.from == v) {
            if !seen[e.to] {
                seen[e.to] = true;
                queue.push_back(e.to);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);
    if !connected {
        return Err(Error::Consistency("isogeny graph is disconnected".into()));
    }
    let mut pairwise = Vec::new();
    for j in 0..k {
        for l in j + 1..k {
            let w = match (&dec.lines[j].lattice, &dec.lines[l].lattice) {
                (Some(a), Some(b)) => a.isogeny_test(b),
                _ => None,
            };
            pairwise.push((j, l, w));
        }
    }
    Ok(IsogenyGraph {
        edges,
        connected,
        pairwise,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeomReport {
    pub reflections: Vec<usize>,
    pub decomposition: ReflectionDecomposition,
    pub cm: CmDetection,
    pub weyl: bool,
    /// Degree of the field generated by the scanned cycle multipliers.
    pub multiplier_field_degree: usize,
    pub character_field_degree: usize,
    #[serde(rename = "geom-i")]
    pub geom_i: bool,
    #[serde(rename = "geom-ii")]
    pub geom_ii: bool,
    #[serde(rename = "geom-iii")]
    pub geom_iii: bool,
}

pub fn geom_report(g: &GroupRep, lat: &ZLattice, cycle_bound: Option<usize>) -> Result<GeomReport> {
    g.require_irreducible()?;
    let refs = choose_generating_reflections(g)?;
    let bound = cycle_bound.unwrap_or(g.dimension() + 1);
    let dec = line_lattice_decomposition(lat, g, &refs, bound)?;
    let cm = cm_detect(&dec)?;
    let weyl = g.character().iter().all(CycNum::is_rational);
    let values: Vec<CycNum> = dec.multipliers.iter().map(|m| m.value.clone()).collect();
    let multiplier_field_degree = schur::generated_field_basis(&values, g.conductor()).len();
    let character_field_degree = schur::character_field_basis(g).len();
    if weyl && dec.multipliers.iter().any(|m| !m.rational) {
        return Err(Error::Consistency("non-rational multiplier for a rational character".into()));
    }
    let all_rank_two = dec.lines.iter().all(|l| l.rank == 2);
    let split = all_rank_two && dec.lambda0.rank() == 2 * g.dimension();
    let isogenous = dec.graph.connected && dec.graph.pairwise.iter().all(|(_, _, w)| w.is_some());
    let geom_i = split && isogenous;
    let geom_ii = geom_i && dec.index.finite().is_some();
    let geom_iii = !weyl && cm.ring.is_some();
    Ok(GeomReport {
        reflections: refs.iter().map(|r| r.element).collect(),
        decomposition: dec,
        cm,
        weyl,
        multiplier_field_degree,
        character_field_degree,
        geom_i,
        geom_ii,
        geom_iii,
    })
}

/// Index `[Λ : Λ⁰]` as an integer, for convenience.
pub fn finite_index(dec: &ReflectionDecomposition) -> Option<BigInt> {
    dec.index.finite().cloned()
}
