//! The quadratic identity family: every admissible triple of vertices
//! factors as `q_a q_i^{-1} q_j = c · q_a i_k + s · q_l = c · i_k q_j + s · q_l`
//! with a scalar `c` of non-positive lad.
//!
//! The constants are solved for exactly rather than hard-coded, which makes
//! the "analogs with permuted indices, and with all vertices inverted"
//! family executable: enumeration covers the same-sign patterns (`i = 0`)
//! and the alternating patterns (`i > 0`), each in both Galois branches.

use crate::goldfield::{Dyadic5, LadValue};
use crate::quatrep::{Quaternion5, VertexTable};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// One solved identity instance.
///
/// `galois_branch = -1` means every vertex in the pattern is inverted
/// (the image of the `+1` instance under `√5 ↦ -√5`). `residual_sign` is the
/// sign in front of the trailing `q_l`; `l = 0` denotes the scalar residual
/// `±1`, which happens exactly for the same-sign patterns `i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityDecomposition {
    pub a: u8,
    pub i: u8,
    pub j: u8,
    #[serde(rename = "galoisBranch")]
    pub galois_branch: i8,
    pub c: Dyadic5,
    pub k: u8,
    pub l: u8,
    #[serde(rename = "residualSign")]
    pub residual_sign: i8,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("triple (a={a}, i={i}, j={j}, branch={branch}) admits no decomposition")]
    NoDecomposition { a: u8, i: u8, j: u8, branch: i8 },
    #[error("triple (a={a}, i={i}, j={j}, branch={branch}) admits {count} decompositions")]
    Ambiguous {
        a: u8,
        i: u8,
        j: u8,
        branch: i8,
        count: usize,
    },
    #[error("invalid triple (a={a}, i={i}, j={j}): need a in 1..=4, a ≠ i, i ≠ j")]
    InvalidTriple { a: u8, i: u8, j: u8 },
}

/// Vertex `q_idx` in the requested Galois branch; `idx = 0` is 1.
fn branch_vertex(table: &VertexTable, idx: u8, branch: i8) -> Quaternion5 {
    if idx == 0 {
        Quaternion5::one()
    } else if branch > 0 {
        table.vertex(idx).clone()
    } else {
        table.vertex(idx).conj()
    }
}

/// The product the triple denotes: `q_a q_i^{-1} q_j`, all vertices
/// inverted in the `-1` branch.
pub(crate) fn triple_product(table: &VertexTable, a: u8, i: u8, j: u8, branch: i8) -> Quaternion5 {
    let mid = branch_vertex(table, i, branch).conj(); // inverse of a unit
    let left = &branch_vertex(table, a, branch) * &mid;
    &left * &branch_vertex(table, j, branch)
}

/// Checks one stored decomposition against both exact forms. Used by the
/// certificate checker, which must not re-run the solver.
pub(crate) fn identity_instance_holds(table: &VertexTable, id: &IdentityDecomposition) -> bool {
    if id.a == 0 || id.a > 4 || id.i > 4 || id.j > 4 || id.k > 3 || id.l > 4 {
        return false;
    }
    let lhs = triple_product(table, id.a, id.i, id.j, id.galois_branch);
    let residual = branch_vertex(table, id.l, id.galois_branch);
    let residual = if id.residual_sign > 0 {
        residual
    } else {
        -&residual
    };
    let form1 = &(&branch_vertex(table, id.a, id.galois_branch) * table.unit(id.k)).scale(&id.c)
        + &residual;
    let form2 = &(table.unit(id.k) * &branch_vertex(table, id.j, id.galois_branch)).scale(&id.c)
        + &residual;
    let lad_ok = match id.c.lad() {
        LadValue::Finite(v) => v <= 0,
        LadValue::NegInfinity => true,
    };
    lhs == form1 && lhs == form2 && lad_ok
}

/// Solves `q_a q_i^{-1} q_j = c · q_a i_k + s · q_l` for `(c, k, l, s)` by
/// exhaustive search over `k`, `l`, `s`, requiring the second form
/// `c · i_k q_j + s · q_l` and `lad(c) ≤ 0` as well.
pub fn decompose_triple(
    a: u8,
    i: u8,
    j: u8,
    galois_branch: i8,
) -> Result<IdentityDecomposition, IdentityError> {
    decompose_triple_with(VertexTable::standard(), a, i, j, galois_branch)
}

pub fn decompose_triple_with(
    table: &VertexTable,
    a: u8,
    i: u8,
    j: u8,
    galois_branch: i8,
) -> Result<IdentityDecomposition, IdentityError> {
    if !(1..=4).contains(&a) || i > 4 || j > 4 || a == i || i == j {
        return Err(IdentityError::InvalidTriple { a, i, j });
    }
    let lhs = triple_product(table, a, i, j, galois_branch);
    let va = branch_vertex(table, a, galois_branch);
    let mut found: Vec<IdentityDecomposition> = Vec::new();
    for k in 0..4u8 {
        let d = &va * table.unit(k);
        let d_inv = d.conj();
        for l in 0..=4u8 {
            for s in [1i8, -1] {
                let lv = branch_vertex(table, l, galois_branch);
                let lv = if s > 0 { lv } else { -&lv };
                let r = &lhs - &lv;
                let c_quat = &r * &d_inv;
                if !c_quat.is_scalar() {
                    continue;
                }
                let candidate = IdentityDecomposition {
                    a,
                    i,
                    j,
                    galois_branch,
                    c: c_quat.component(0),
                    k,
                    l,
                    residual_sign: s,
                };
                if identity_instance_holds(table, &candidate) {
                    found.push(candidate);
                }
            }
        }
    }
    match found.len() {
        0 => Err(IdentityError::NoDecomposition {
            a,
            i,
            j,
            branch: galois_branch,
        }),
        1 => Ok(found.pop().unwrap()),
        count => Err(IdentityError::Ambiguous {
            a,
            i,
            j,
            branch: galois_branch,
            count,
        }),
    }
}

impl fmt::Display for IdentityDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = if self.galois_branch > 0 { "" } else { "^-1" };
        let co_inv = if self.galois_branch > 0 { "^-1" } else { "" };
        write!(f, "q{}{inv}", self.a)?;
        if self.i > 0 {
            write!(f, "*q{}{co_inv}", self.i)?;
        }
        if self.j > 0 {
            write!(f, "*q{}{inv}", self.j)?;
        }
        write!(f, " = ({})", self.c)?;
        write!(f, "*q{}{inv}", self.a)?;
        if self.k > 0 {
            write!(f, "*i{}", self.k)?;
        }
        let sign = if self.residual_sign > 0 { "+" } else { "-" };
        if self.l > 0 {
            write!(f, " {sign} q{}{inv}", self.l)
        } else {
            write!(f, " {sign} 1")
        }
    }
}

/// Every pattern the induction consumes: same-sign pairs (`i = 0`, any
/// `j` in `1..=4`) and alternating triples (`i` in `1..=4` distinct from
/// `a` and `j`), each in both Galois branches.
pub fn admissible_triples() -> Vec<(u8, u8, u8, i8)> {
    let mut out = Vec::new();
    for branch in [1i8, -1] {
        for a in 1..=4u8 {
            for j in 1..=4u8 {
                out.push((a, 0, j, branch));
            }
            for i in (1..=4u8).filter(|&i| i != a) {
                for j in (1..=4u8).filter(|&j| j != i) {
                    out.push((a, i, j, branch));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyFailure {
    pub a: u8,
    pub i: u8,
    pub j: u8,
    pub branch: i8,
    pub reason: String,
}

/// The solved family plus sanity checks.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub entries: Vec<IdentityDecomposition>,
    /// How often each unit index `k` occurs (the `k = 0` bucket is the
    /// squares-and-returns patterns whose unit factor is 1).
    #[serde(rename = "kHistogram")]
    pub k_histogram: [u64; 4],
    pub failures: Vec<FamilyFailure>,
}

impl FamilyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Solves the whole admissible family and validates the structural laws:
/// `lad(c) ≤ 0` everywhere, the residual-index law `i > 0 ⟺ l > 0`, and
/// Galois pairing (the `-1` branch constant is the conjugate of the `+1`
/// branch constant, with identical `k`, `l`, sign).
pub fn verify_identity_family() -> FamilyReport {
    verify_identity_family_with(VertexTable::standard())
}

pub fn verify_identity_family_with(table: &VertexTable) -> FamilyReport {
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    let mut k_histogram = [0u64; 4];
    for (a, i, j, branch) in admissible_triples() {
        match decompose_triple_with(table, a, i, j, branch) {
            Ok(id) => {
                let lad_ok = matches!(id.c.lad(), LadValue::Finite(v) if v <= 0);
                if !lad_ok {
                    failures.push(FamilyFailure {
                        a,
                        i,
                        j,
                        branch,
                        reason: format!("constant {} has lad > 0 or is zero", id.c),
                    });
                }
                if (i > 0) != (id.l > 0) {
                    failures.push(FamilyFailure {
                        a,
                        i,
                        j,
                        branch,
                        reason: format!("residual index law violated: i={i}, l={}", id.l),
                    });
                }
                k_histogram[id.k as usize] += 1;
                entries.push(id);
            }
            Err(e) => failures.push(FamilyFailure {
                a,
                i,
                j,
                branch,
                reason: e.to_string(),
            }),
        }
    }
    // Galois pairing between the two branches of each triple
    for plus in entries.iter().filter(|e| e.galois_branch > 0) {
        match entries
            .iter()
            .find(|e| e.galois_branch < 0 && (e.a, e.i, e.j) == (plus.a, plus.i, plus.j))
        {
            Some(minus) => {
                if minus.c != plus.c.galois()
                    || minus.k != plus.k
                    || minus.l != plus.l
                    || minus.residual_sign != plus.residual_sign
                {
                    failures.push(FamilyFailure {
                        a: plus.a,
                        i: plus.i,
                        j: plus.j,
                        branch: -1,
                        reason: "branches are not Galois conjugate".into(),
                    });
                }
            }
            None => failures.push(FamilyFailure {
                a: plus.a,
                i: plus.i,
                j: plus.j,
                branch: -1,
                reason: "missing inverted branch".into(),
            }),
        }
    }
    FamilyReport {
        entries,
        k_histogram,
        failures,
    }
}
