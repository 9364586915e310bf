//! Built-in groups and quaternion-torus presets.

use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::group::{close_group, GroupRep, DEFAULT_CAP};
use crate::vector::{rational_mat, CycMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Group,
    QuaternionTorus,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    pub dimension: usize,
    pub source: &'static str,
    pub description: &'static str,
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "S3-standard",
        kind: EntryKind::Group,
        dimension: 2,
        source: "doubly-transitive-permutation",
        description: "S3 on the sum-zero plane, coordinates e1-e2, e2-e3",
    },
    CatalogEntry {
        name: "S4-standard",
        kind: EntryKind::Group,
        dimension: 3,
        source: "doubly-transitive-permutation",
        description: "S4 on the sum-zero hyperplane, simple-root coordinates",
    },
    CatalogEntry {
        name: "Weyl-A2",
        kind: EntryKind::Group,
        dimension: 2,
        source: "reflection-group",
        description: "Weyl group of A2 generated by its simple reflections",
    },
    CatalogEntry {
        name: "Weyl-B2",
        kind: EntryKind::Group,
        dimension: 2,
        source: "reflection-group",
        description: "Weyl group of B2, reflections in e1 and e1-e2",
    },
    CatalogEntry {
        name: "G4",
        kind: EntryKind::Group,
        dimension: 2,
        source: "reflection-group",
        description: "Shephard-Todd G4, two order-3 reflections",
    },
    CatalogEntry {
        name: "Q8",
        kind: EntryKind::Group,
        dimension: 2,
        source: "quaternion-group",
        description: "quaternion group generated by diag(i,-i) and [[0,1],[-1,0]]",
    },
    CatalogEntry {
        name: "C3-zeta3",
        kind: EntryKind::Group,
        dimension: 1,
        source: "cyclic",
        description: "cyclic group of order 3 acting by zeta3",
    },
    CatalogEntry {
        name: "C4-zeta4",
        kind: EntryKind::Group,
        dimension: 1,
        source: "cyclic",
        description: "cyclic group of order 4 acting by i",
    },
    CatalogEntry {
        name: "C5-zeta5",
        kind: EntryKind::Group,
        dimension: 1,
        source: "cyclic",
        description: "cyclic group of order 5 acting by zeta5",
    },
    CatalogEntry {
        name: "example-non-generic",
        kind: EntryKind::QuaternionTorus,
        dimension: 2,
        source: "quaternion-torus",
        description: "Hamilton quaternions mod the Lipschitz order, J = right mult by (i+sqrt2 j)/sqrt3",
    },
    CatalogEntry {
        name: "example-non-c-i",
        kind: EntryKind::QuaternionTorus,
        dimension: 2,
        source: "quaternion-torus",
        description: "Hamilton quaternions mod the Lipschitz order, J = right mult by i",
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    ENTRIES
}

fn canonical_name(name: &str) -> &str {
    match name {
        "S3" => "S3-standard",
        "S4" => "S4-standard",
        "A2" => "Weyl-A2",
        "B2" => "Weyl-B2",
        "C3" => "C3-zeta3",
        "C4" => "C4-zeta4",
        "C5" => "C5-zeta5",
        other => other,
    }
}

pub fn entry(name: &str) -> Option<&'static CatalogEntry> {
    let name = canonical_name(name);
    ENTRIES.iter().find(|e| e.name == name)
}

/// Action of a permutation of `{0..k}` on the sum-zero hyperplane in the
/// basis `a_i = e_i - e_(i+1)`.
pub fn permutation_action(perm: &[usize]) -> CycMat {
    let k = perm.len();
    let mut cols = Vec::with_capacity(k - 1);
    for j in 0..k - 1 {
        let mut x = vec![0i64; k];
        x[perm[j]] += 1;
        x[perm[j + 1]] -= 1;
        // coefficient of a_i is the i-th partial sum
        let mut acc = 0;
        let col: Vec<i64> = (0..k - 1)
            .map(|i| {
                acc += x[i];
                acc
            })
            .collect();
        cols.push(col);
    }
    (0..k - 1)
        .map(|i| (0..k - 1).map(|j| CycNum::from_int(cols[j][i])).collect())
        .collect()
}

pub fn generators(name: &str) -> Result<Vec<CycMat>> {
    let w = CycNum::zeta(3);
    let i = CycNum::zeta(4);
    let gens = match canonical_name(name) {
        "S3-standard" => vec![permutation_action(&[1, 0, 2]), permutation_action(&[1, 2, 0])],
        "S4-standard" => vec![
            permutation_action(&[1, 0, 2, 3]),
            permutation_action(&[1, 2, 3, 0]),
        ],
        "Weyl-A2" => vec![
            rational_mat(&[&[-1, 1], &[0, 1]]),
            rational_mat(&[&[1, 0], &[1, -1]]),
        ],
        "Weyl-B2" => vec![
            rational_mat(&[&[-1, 0], &[0, 1]]),
            rational_mat(&[&[0, 1], &[1, 0]]),
        ],
        "G4" => vec![
            vec![vec![w.clone(), CycNum::from_int(-1)], vec![CycNum::zero(), CycNum::one()]],
            vec![vec![CycNum::one(), CycNum::zero()], vec![w.clone(), w]],
        ],
        "Q8" => vec![
            vec![vec![i.clone(), CycNum::zero()], vec![CycNum::zero(), -&i]],
            rational_mat(&[&[0, 1], &[-1, 0]]),
        ],
        "C3-zeta3" => vec![vec![vec![w]]],
        "C4-zeta4" => vec![vec![vec![i]]],
        "C5-zeta5" => vec![vec![vec![CycNum::zeta(5)]]],
        other => {
            let msg = match entry(other) {
                Some(_) => format!("catalog entry {other} is not a matrix group"),
                None => format!("unknown catalog name {other}"),
            };
            return Err(Error::InvalidInput(msg));
        }
    };
    Ok(gens)
}

pub fn group(name: &str) -> Result<GroupRep> {
    close_group(&generators(name)?, DEFAULT_CAP)
}
