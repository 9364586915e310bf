//! End-to-end analysis: closure, irreducibility, character profile, lattice
//! existence, constructions, decompositions and the final structure tags.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, EntryKind};
use crate::cyclotomic::{parse_cycnum, CycNum};
use crate::error::{Error, Result};
use crate::forge::{self, ImaginaryQuadraticOrder, OrderSplitting};
use crate::group::{close_group, GroupRep, DEFAULT_CAP};
use crate::lattice::{int_value, RankTwoLattice, ZLattice};
use crate::quaternion::{self, AbelianVerdict, QuatAlgebra, TorusEvidence};
use crate::reflection::{self, GeomReport};
use crate::schur::{self, CharacterProfile, FieldClass, LatticeVerdict, SimplicityCertificate};
use crate::vector::{self, CycMat, CycVec};

pub const SCHEMA: &str = "torus-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Recipe {
    #[serde(rename = "Zn")]
    Zn,
    #[serde(rename = "ds")]
    Ds,
    #[serde(rename = "O")]
    O,
}

impl std::str::FromStr for Recipe {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Zn" | "zn" => Ok(Recipe::Zn),
            "ds" => Ok(Recipe::Ds),
            "O" | "o" => Ok(Recipe::O),
            other => Err(Error::InvalidInput(format!("unknown recipe {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Restrict constructions to one recipe.
    pub recipe: Option<Recipe>,
    /// Scalar for `Λ + cΛ`; defaults to `i`.
    pub c: Option<CycNum>,
    pub cycle_bound: Option<usize>,
    pub seed: u64,
    pub cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            recipe: None,
            c: None,
            cycle_bound: None,
            seed: schur::DEFAULT_SEED,
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Input {
    Catalog(String),
    Generators { label: String, generators: Vec<CycMat> },
}

fn parse_entry(v: &Value) -> Result<CycNum> {
    match v {
        Value::String(s) => parse_cycnum(s),
        Value::Number(n) => n
            .as_i64()
            .map(CycNum::from_int)
            .ok_or_else(|| Error::InvalidInput(format!("non-integer number {n}"))),
        Value::Object(_) => Ok(serde_json::from_value(v.clone())?),
        other => Err(Error::InvalidInput(format!("bad matrix entry {other}"))),
    }
}

/// `{"name": ..., "generators": [[[entry, ...], ...], ...]}` where an entry
/// is an integer, a scalar string such as `"zeta3"`, or a serialized
/// cyclotomic number.
pub fn parse_group_json(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text)?;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("missing \"generators\" array".into()))?;
    let mut out = Vec::new();
    for g in gens {
        let rows = g
            .as_array()
            .ok_or_else(|| Error::InvalidInput("generator must be an array of rows".into()))?;
        let m: CycMat = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::InvalidInput("row must be an array".into()))?
                    .iter()
                    .map(parse_entry)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("generators must be square".into()));
        }
        out.push(m);
    }
    if out.is_empty() || out.iter().any(|m| m.len() != out[0].len()) {
        return Err(Error::InvalidInput("need generators of one common size".into()));
    }
    let label = v.get("name").and_then(Value::as_str).unwrap_or("input").to_string();
    Ok(Input::Generators { label, generators: out })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub dimension: usize,
    pub conductor: usize,
    pub character_norm: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitWitness {
    pub order: ImaginaryQuadraticOrder,
    /// `[Λ' : Λ]` for the saturation `Λ' = Λ + ωΛ`.
    pub saturation_index: Value,
    pub saturated: ZLattice,
    pub splitting: OrderSplitting,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuaternionAnalysis {
    pub algebra: QuatAlgebra,
    pub definiteness: quaternion::Definiteness,
    pub subfields: Vec<quaternion::SubfieldWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus: Option<quaternion::QuatTorus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endomorphisms: Option<quaternion::EndomorphismRing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex_model: Option<SplitWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratl: Option<quaternion::RatLVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremTag {
    pub theorem: &'static str,
    pub conclusions: Vec<String>,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusReport {
    pub schema: &'static str,
    pub input: String,
    pub group: GroupSummary,
    pub profile: CharacterProfile,
    pub verdict: LatticeVerdict,
    pub lattices: Vec<ZLattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplitWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflection: Option<GeomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quaternion: Option<QuaternionAnalysis>,
    pub tags: Vec<TheoremTag>,
}

impl TorusReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn tag(&self, theorem: &str) -> Option<&TheoremTag> {
        self.tags.iter().find(|t| t.theorem == theorem)
    }

    pub fn lattice(&self, recipe: &str) -> Option<&ZLattice> {
        self.lattices.iter().find(|l| l.recipe() == Some(recipe))
    }
}

fn close_input(input: &Input, cap: usize) -> Result<(String, GroupRep, Option<quaternion::QuatTorus>)> {
    match input {
        Input::Catalog(name) => {
            let e = catalog::entry(name).ok_or_else(|| Error::InvalidInput(format!("unknown catalog name {name}")))?;
            match e.kind {
                EntryKind::Group => Ok((e.name.to_string(), close_group(&catalog::generators(e.name)?, cap)?, None)),
                // the unit group of the Lipschitz order acting by left multiplication
                EntryKind::QuaternionTorus => Ok((
                    e.name.to_string(),
                    close_group(&catalog::generators("Q8")?, cap)?,
                    Some(quaternion::preset(e.name)?),
                )),
            }
        }
        Input::Generators { label, generators } => Ok((label.clone(), close_group(generators, cap)?, None)),
    }
}

fn summary(g: &GroupRep, norm: &crate::Rational) -> GroupSummary {
    GroupSummary {
        order: g.order(),
        dimension: g.dimension(),
        conductor: g.conductor(),
        character_norm: norm.to_string(),
    }
}

fn orbit_lattice(g: &GroupRep, witness: &[CycVec]) -> Result<ZLattice> {
    let vecs: Vec<CycVec> = g
        .elements()
        .iter()
        .flat_map(|m| witness.iter().map(move |w| vector::apply(m, w)))
        .collect();
    Ok(ZLattice::from_generators(&vecs)?.with_recipe("orbit"))
}

fn field_order(profile: &CharacterProfile) -> Option<ImaginaryQuadraticOrder> {
    match profile.field {
        FieldClass::ImaginaryQuadratic { discriminant } => ImaginaryQuadraticOrder::from_discriminant(discriminant).ok(),
        _ => None,
    }
}

/// The order `Z[c]` when `c` is an imaginary quadratic integer.
fn order_of_scalar(c: &CycNum) -> Option<ImaginaryQuadraticOrder> {
    let ring = RankTwoLattice::new(CycNum::one(), c.clone()).ok()?.multiplier_ring();
    let d = ring.discriminant()?;
    let o = ImaginaryQuadraticOrder::from_discriminant(d).ok()?;
    o.contains(c).then_some(o)
}

/// Constructed lattices for the given verdict.
pub fn construct(g: &GroupRep, profile: &CharacterProfile, verdict: &LatticeVerdict, opts: &Options) -> Result<Vec<ZLattice>> {
    if !verdict.exists_any {
        return match opts.recipe {
            Some(r) => Err(Error::Precondition(format!("no invariant lattice exists, recipe {r:?} inapplicable"))),
            None => Ok(Vec::new()),
        };
    }
    let want = |r: Recipe| opts.recipe.is_none_or(|x| x == r);
    let c = opts.c.clone().unwrap_or_else(|| CycNum::zeta(4));
    let schur = schur::schur_index(g, opts.seed)?;
    let mut out = Vec::new();
    match (&profile.field, profile.schur_index) {
        (FieldClass::Rational, 1) => {
            if want(Recipe::Zn) || want(Recipe::Ds) {
                let zn = forge::construct_rank_n(g, &schur.witness)?;
                if want(Recipe::Ds) {
                    out.push(forge::extend_rank_2n(&zn, &c)?);
                }
                if want(Recipe::Zn) {
                    out.insert(0, zn);
                }
            }
            if opts.recipe == Some(Recipe::O) {
                return Err(Error::Precondition("recipe O needs an imaginary quadratic character field".into()));
            }
        }
        (FieldClass::ImaginaryQuadratic { .. }, 1) => {
            if opts.recipe.is_some_and(|r| r != Recipe::O) {
                return Err(Error::Precondition(
                    "only recipe O applies to an imaginary quadratic character field".into(),
                ));
            }
            let order = field_order(profile).expect("imaginary quadratic field");
            out.push(forge::orbit_lattice_over_order(g, &order, &schur.witness[0])?);
        }
        (FieldClass::Rational, 2) => {
            if opts.recipe.is_some() {
                return Err(Error::Precondition("recipes Zn, ds, O need Schur index 1".into()));
            }
            out.push(orbit_lattice(g, &schur.witness)?);
        }
        _ => return Err(Error::Consistency("verdict and profile disagree".into())),
    }
    for l in &out {
        if !l.invariance_check(g) {
            return Err(Error::Consistency(format!("{:?} lattice is not G-invariant", l.recipe())));
        }
        if l.rank() != g.dimension() && l.rank() != 2 * g.dimension() {
            return Err(Error::Consistency(format!("lattice rank {} is neither n nor 2n", l.rank())));
        }
    }
    Ok(out)
}

fn split_over(lat: &ZLattice, order: &ImaginaryQuadraticOrder) -> Result<SplitWitness> {
    let (saturated, index) = forge::order_saturate(lat, order)?;
    let splitting = forge::split_as_order_module(&saturated, order)?;
    Ok(SplitWitness {
        order: order.clone(),
        saturation_index: int_value(&index),
        saturated,
        splitting,
    })
}

/// For a rank-2n lattice: saturate and split over an imaginary quadratic
/// order, the field's maximal order when the field is imaginary quadratic,
/// otherwise `Z[c]`, otherwise the first Euclidean order that works.
fn find_splitting(lat: &ZLattice, g: &GroupRep, profile: &CharacterProfile, c: Option<&CycNum>) -> Option<SplitWitness> {
    if lat.rank() != 2 * g.dimension() {
        return None;
    }
    if let Some(o) = field_order(profile) {
        return split_over(lat, &o).ok();
    }
    let mut candidates: Vec<ImaginaryQuadraticOrder> = c.and_then(order_of_scalar).into_iter().collect();
    candidates.extend([-4, -3, -8, -7, -11].iter().filter_map(|&d| ImaginaryQuadraticOrder::from_discriminant(d).ok()));
    candidates.into_iter().find_map(|o| {
        let w = split_over(lat, &o).ok()?;
        w.saturated.invariance_check(g).then_some(w)
    })
}

fn quaternion_for_profile(profile: &CharacterProfile) -> Option<QuatAlgebra> {
    match &profile.schur_certificate {
        SimplicityCertificate::DefiniteQuaternionCommutant { a, b } => {
            QuatAlgebra::new(a.parse().ok()?, b.parse().ok()?).ok()
        }
        _ => None,
    }
}

const SUBFIELD_BOUND: u64 = 1;

pub fn analyze(input: &Input, opts: &Options) -> Result<TorusReport> {
    let (label, g, torus) = close_input(input, opts.cap)?;
    let irr = g.require_irreducible()?;
    let profile = schur::character_profile(&g, opts.seed)?;
    let verdict = schur::lattice_existence_verdict(&profile, g.dimension())?;
    let lattices = construct(&g, &profile, &verdict, opts)?;
    let n = g.dimension();
    let big = lattices.iter().find(|l| l.rank() == 2 * n);
    let c_used = opts.c.clone().unwrap_or_else(|| CycNum::zeta(4));
    let splitting = big.and_then(|l| find_splitting(l, &g, &profile, Some(&c_used)));

    let reflection = match big {
        Some(l) if !g.find_reflections().is_empty() => Some(reflection::geom_report(&g, l, opts.cycle_bound)?),
        _ => None,
    };

    let quaternion = if profile.schur_index == 2 {
        Some(quaternion_section(&profile, n, torus, splitting.as_ref())?)
    } else {
        None
    };

    let tags = theorem_tags(&g, &profile, &verdict, &lattices, splitting.as_ref(), reflection.as_ref(), quaternion.as_ref());
    let report = TorusReport {
        schema: SCHEMA,
        input: label,
        group: summary(&g, &irr.norm),
        profile,
        verdict,
        lattices,
        splitting,
        reflection,
        quaternion,
        tags,
    };
    validate_report(&report.to_json())?;
    Ok(report)
}

fn quaternion_section(
    profile: &CharacterProfile,
    n: usize,
    torus: Option<quaternion::QuatTorus>,
    split: Option<&SplitWitness>,
) -> Result<QuaternionAnalysis> {
    let algebra = match &torus {
        Some(t) => t.algebra.clone(),
        None => quaternion_for_profile(profile).unwrap_or_else(QuatAlgebra::hamilton),
    };
    let subfields = quaternion::imaginary_quadratic_subfields(&algebra, SUBFIELD_BOUND);
    let (endomorphisms, complex_model) = match &torus {
        Some(t) => {
            let e = quaternion::torus_endomorphisms(t)?;
            let cm = match t.direction {
                quaternion::Direction::Rational { .. } => {
                    let (model, splitting) = quaternion::split_rational_direction(t)?;
                    let order = ImaginaryQuadraticOrder::from_discriminant(model.field_discriminant)?;
                    Some(SplitWitness {
                        order,
                        saturation_index: int_value(&BigInt::from(1)),
                        saturated: model.lattice,
                        splitting,
                    })
                }
                quaternion::Direction::Generic => None,
            };
            (Some(e), cm)
        }
        None => (None, None),
    };
    let evidence = match (&endomorphisms, split) {
        (Some(e), _) => Some(TorusEvidence::Endomorphisms {
            tag: e.tag.clone(),
            rank: e.rank,
        }),
        (None, Some(s)) => Some(TorusEvidence::SplitIntoCmCurves {
            field_discriminant: s.order.field_discriminant(),
            factors: s.splitting.factors.len(),
        }),
        (None, None) => None,
    };
    let ratl = Some(quaternion::ratl_verdict(profile, n, evidence)?);
    Ok(QuaternionAnalysis {
        definiteness: algebra.definiteness(),
        algebra,
        subfields,
        torus,
        endomorphisms,
        complex_model,
        ratl,
    })
}

fn split_json(s: &SplitWitness) -> Value {
    json!({
        "order_discriminant": s.order.discriminant,
        "saturation_index": s.saturation_index,
        "factors": s.splitting.factors.len(),
        "factor_discriminants": s.splitting.factors.iter().map(|f| f.multiplier_ring().discriminant()).collect::<Vec<_>>(),
        "isogenies": s.splitting.isogenies.len(),
    })
}

fn theorem_tags(
    g: &GroupRep,
    profile: &CharacterProfile,
    verdict: &LatticeVerdict,
    lattices: &[ZLattice],
    split: Option<&SplitWitness>,
    refl: Option<&GeomReport>,
    quat: Option<&QuaternionAnalysis>,
) -> Vec<TheoremTag> {
    let n = g.dimension();
    let mut tags = Vec::new();
    let ranks: Vec<usize> = lattices.iter().map(ZLattice::rank).collect();
    if !verdict.exists_any {
        return tags;
    }
    if profile.schur_index == 1 {
        let mut conclusions = vec![
            format!("character field: {:?}", profile.field),
            format!("lattice ranks {ranks:?} lie in {{n, 2n}}"),
        ];
        if ranks.contains(&n) {
            conclusions.push("rank n lattice over a rational character; G is defined over Q".into());
        }
        if let Some(s) = split {
            conclusions.push(format!(
                "saturation over the order of discriminant {} splits into {} isogenous CM factors",
                s.order.discriminant,
                s.splitting.factors.len()
            ));
        }
        tags.push(TheoremTag {
            theorem: "main2",
            conclusions,
            witness: json!({
                "field": profile.field,
                "ranks": ranks,
                "splitting": split.map(split_json),
            }),
        });
    }
    if let (FieldClass::ImaginaryQuadratic { discriminant }, Some(s)) = (&profile.field, split) {
        tags.push(TheoremTag {
            theorem: "nonrationalT",
            conclusions: vec![
                format!("character field imaginary quadratic of discriminant {discriminant}"),
                "every constructed lattice has rank 2n".into(),
                "V/Λ' is a product of mutually isogenous CM elliptic curves".into(),
            ],
            witness: json!({"ranks": ranks, "splitting": split_json(s)}),
        });
    }
    if let Some(q) = quat {
        if let Some(v) = &q.ratl {
            tags.push(TheoremTag {
                theorem: "ratL",
                conclusions: vec![
                    "n is even".into(),
                    format!("{:?} type, commutant {:?}", v.bilinear, v.commutant),
                    format!("verdict {:?}", v.verdict),
                ],
                witness: serde_json::to_value(v).expect("serializes"),
            });
        }
    }
    if let Some(r) = refl {
        let mut conclusions = Vec::new();
        if r.geom_i {
            conclusions.push("V/Λ⁰ is a product of mutually isogenous elliptic curves".into());
        }
        if r.geom_ii {
            conclusions.push(format!("[Λ : Λ⁰] = {}; V/Λ is isogenous to a self-product", r.decomposition.index));
        }
        if r.geom_iii {
            conclusions.push("non-Weyl: complex multiplication by an imaginary quadratic order".into());
        }
        tags.push(TheoremTag {
            theorem: "geom",
            conclusions,
            witness: json!({
                "geom-i": r.geom_i,
                "geom-ii": r.geom_ii,
                "geom-iii": r.geom_iii,
                "index": r.decomposition.index,
                "edges": r.decomposition.graph.edges.len(),
                "cm_cycle": r.cm.cycle,
            }),
        });
    }
    // a lattice Δ whose torus is a product of mutually isogenous CM curves
    let delta = split.map(split_json).or_else(|| {
        quat.and_then(|q| q.complex_model.as_ref().map(split_json))
    });
    if let Some(w) = delta {
        let mut witness = json!({"delta": w});
        if let Some(q) = quat {
            witness["subfield"] = serde_json::to_value(q.subfields.first()).expect("serializes");
        }
        tags.push(TheoremTag {
            theorem: "deform",
            conclusions: vec!["an invariant lattice Δ with V/Δ a product of isogenous CM elliptic curves".into()],
            witness,
        });
    }
    tags
}

/// Structural check of a serialized report.
pub fn validate_report(v: &Value) -> Result<()> {
    let bad = |m: &str| Err(Error::Consistency(format!("report schema: {m}")));
    if v.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return bad("schema tag");
    }
    for key in ["input", "group", "profile", "verdict", "lattices", "tags"] {
        if v.get(key).is_none() {
            return bad(key);
        }
    }
    for key in ["order", "dimension", "conductor", "character_norm"] {
        if v["group"].get(key).is_none() {
            return bad(key);
        }
    }
    for key in ["exists_any", "exists_rank_n", "exists_rank_2n", "clause"] {
        if v["verdict"].get(key).is_none() {
            return bad(key);
        }
    }
    let Some(tags) = v["tags"].as_array() else {
        return bad("tags");
    };
    for t in tags {
        let name = t.get("theorem").and_then(Value::as_str).unwrap_or("");
        if !["main2", "nonrationalT", "ratL", "geom", "deform"].contains(&name) {
            return bad("unknown theorem tag");
        }
        if t.get("witness").is_none_or(Value::is_null) {
            return bad("tag without witness");
        }
    }
    for l in v["lattices"].as_array().into_iter().flatten() {
        if l.get("recipe").is_none() || l.get("basis").is_none() {
            return bad("lattice without recipe or basis");
        }
    }
    if contains_float(v) {
        return bad("floating-point value");
    }
    Ok(())
}

fn contains_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(a) => a.iter().any(contains_float),
        Value::Object(o) => o.values().any(contains_float),
        _ => false,
    }
}

/// Reflection decomposition of the first constructed rank-2n lattice.
pub fn decompose(input: &Input, opts: &Options) -> Result<GeomReport> {
    let (_, g, _) = close_input(input, opts.cap)?;
    g.require_irreducible()?;
    let profile = schur::character_profile(&g, opts.seed)?;
    let verdict = schur::lattice_existence_verdict(&profile, g.dimension())?;
    let lattices = construct(&g, &profile, &verdict, opts)?;
    let lat = lattices
        .iter()
        .find(|l| l.rank() == 2 * g.dimension())
        .ok_or_else(|| Error::Precondition("no rank-2n lattice was constructed".into()))?;
    reflection::geom_report(&g, lat, opts.cycle_bound)
}

/// Lattices built by the applicable recipes.
pub fn construct_input(input: &Input, opts: &Options) -> Result<Vec<ZLattice>> {
    let (_, g, _) = close_input(input, opts.cap)?;
    g.require_irreducible()?;
    let profile = schur::character_profile(&g, opts.seed)?;
    let verdict = schur::lattice_existence_verdict(&profile, g.dimension())?;
    construct(&g, &profile, &verdict, opts)
}

/// One-line human summary of a report.
pub fn summary_line(r: &TorusReport) -> String {
    let tags: Vec<&str> = r.tags.iter().map(|t| t.theorem).collect();
    let abelian = r
        .quaternion
        .as_ref()
        .and_then(|q| q.ratl.as_ref())
        .map(|v| format!(" abelian={:?}", v.verdict))
        .unwrap_or_default();
    format!(
        "{}: |G|={} n={} field={:?} m={} {:?} clause={:?} lattices={:?}{} tags={:?}",
        r.input,
        r.group.order,
        r.group.dimension,
        r.profile.field,
        r.profile.schur_index,
        r.profile.bilinear,
        r.verdict.clause,
        r.lattices
            .iter()
            .map(|l| format!("{}:{}", l.recipe().unwrap_or("?"), l.rank()))
            .collect::<Vec<_>>(),
        abelian,
        tags
    )
}

pub fn is_not_abelian(r: &TorusReport) -> bool {
    r.quaternion
        .as_ref()
        .and_then(|q| q.ratl.as_ref())
        .is_some_and(|v| v.verdict == AbelianVerdict::NotAbelian)
}
