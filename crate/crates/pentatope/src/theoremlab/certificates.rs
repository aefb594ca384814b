//! Checkable derivation certificates for the lad/norm equality of a single
//! word and component.
//!
//! A certificate is a tree: leaves evaluate words of length at most two
//! directly; rewrite nodes rotate the word on its clutch necklace until a
//! decomposable leading pattern appears, apply one quadratic identity, and
//! recurse on the two resulting terms. The step is sound because the two
//! terms have strictly different lads, so the lad of their sum is the
//! larger one. Construction is best effort: any pattern the case analysis
//! cannot handle comes back as structured [`UnhandledPattern`] data rather
//! than a panic. [`check_certificate`] re-verifies every identity instance,
//! every dominance inequality, and the root equality in exact arithmetic,
//! without ever calling the solver that built the tree.

use super::identities::{decompose_triple_with, identity_instance_holds, IdentityDecomposition};
use crate::freewords::{is_pi_reduced, pi_reduce, reduced_alt_norm, rotate_clutch, Letter, Word};
use crate::goldfield::LadValue;
use crate::quatrep::{rho_with, VertexTable};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, Serialize)]
#[allow(clippy::large_enum_variant)]
pub enum LadCertificate {
    /// Direct evaluation of a word of length ≤ 2 (the induction base).
    Leaf {
        word: Word,
        k: u8,
        norm: u64,
        lad: LadValue,
    },
    /// One identity rewrite `ρ(w') = c · i_{k'} ρ(u) + s · ρ(r)` after
    /// `rotations` clutch moves, with the strict dominance
    /// `lad(c · i_{k'} ρ(u))_k > lad(ρ(r))_k` justifying the conclusion.
    Rewrite {
        word: Word,
        k: u8,
        rotations: usize,
        rotated: Word,
        identity: IdentityDecomposition,
        /// `i_k · i_{k'} = unit_sign · i_{unit_index}`; the u-branch proves
        /// its claim for component `unit_index`.
        unit_index: u8,
        unit_sign: i8,
        u_word: Word,
        r_word: Word,
        term_u_lad: LadValue,
        term_r_lad: LadValue,
        norm: u64,
        lad: LadValue,
        u_branch: Box<LadCertificate>,
        r_branch: Box<LadCertificate>,
    },
}

impl LadCertificate {
    pub fn word(&self) -> &Word {
        match self {
            LadCertificate::Leaf { word, .. } | LadCertificate::Rewrite { word, .. } => word,
        }
    }

    pub fn k(&self) -> u8 {
        match self {
            LadCertificate::Leaf { k, .. } | LadCertificate::Rewrite { k, .. } => *k,
        }
    }

    /// The certified norm `‖w‖_k`.
    pub fn norm(&self) -> u64 {
        match self {
            LadCertificate::Leaf { norm, .. } | LadCertificate::Rewrite { norm, .. } => *norm,
        }
    }

    /// The certified value `lad(x_k)`.
    pub fn lad(&self) -> LadValue {
        match self {
            LadCertificate::Leaf { lad, .. } | LadCertificate::Rewrite { lad, .. } => *lad,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            LadCertificate::Leaf { .. } => 1,
            LadCertificate::Rewrite {
                u_branch, r_branch, ..
            } => 1 + u_branch.node_count() + r_branch.node_count(),
        }
    }

    fn fmt_tree(&self, f: &mut fmt::Formatter<'_>, label: &str, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match self {
            LadCertificate::Leaf { word, k, norm, lad } => {
                writeln!(f, "{pad}{label}leaf  {word}  k={k}  norm={norm}  lad={lad}")
            }
            LadCertificate::Rewrite {
                word,
                k,
                rotations,
                identity,
                term_u_lad,
                term_r_lad,
                norm,
                lad,
                u_branch,
                r_branch,
                ..
            } => {
                writeln!(
                    f,
                    "{pad}{label}rewrite  {word}  k={k}  norm={norm}  lad={lad}  \
                     [rot={rotations}; {identity}; dominance {term_u_lad} > {term_r_lad}]"
                )?;
                u_branch.fmt_tree(f, "u: ", depth + 1)?;
                r_branch.fmt_tree(f, "r: ", depth + 1)
            }
        }
    }
}

impl fmt::Display for LadCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_tree(f, "", 0)
    }
}

/// A word/component pair the derivation could not handle, with the reason.
#[derive(Clone, Debug, Error, Serialize)]
#[error("no certificate for {word} at k={k}: {reason}")]
pub struct UnhandledPattern {
    pub word: Word,
    pub k: u8,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchStep {
    U,
    R,
}

/// A failed re-verification, locating the first bad node.
#[derive(Clone, Debug, Error)]
#[error("certificate check failed at {}: {message}", format_path(path))]
pub struct CertificateError {
    pub path: Vec<BranchStep>,
    pub message: String,
}

fn format_path(path: &[BranchStep]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|s| match s {
                BranchStep::U => "u",
                BranchStep::R => "r",
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Leading pattern of a rotated word: a same-sign pair `(a, 0, j)` consuming
/// two letters, or an alternating triple `(a, i, j)` consuming three.
fn leading_pattern(letters: &[Letter]) -> Option<(u8, u8, u8, i8, usize)> {
    match letters {
        [x, y, ..] if x.sign() == y.sign() => Some((x.index(), 0, y.index(), x.sign(), 2)),
        [x, y, z, ..] if x.sign() != y.sign() && z.sign() == x.sign() => {
            Some((x.index(), y.index(), z.index(), x.sign(), 3))
        }
        _ => None,
    }
}

/// Derives a certificate for a π_k-reduced word of length ≥ 1.
pub fn derive_lad_certificate(w: &Word, k: u8) -> Result<LadCertificate, UnhandledPattern> {
    derive_lad_certificate_with(VertexTable::standard(), w, k)
}

pub fn derive_lad_certificate_with(
    table: &VertexTable,
    w: &Word,
    k: u8,
) -> Result<LadCertificate, UnhandledPattern> {
    if k > 3 {
        return Err(UnhandledPattern {
            word: w.clone(),
            k,
            reason: "component index out of range".into(),
        });
    }
    if !is_pi_reduced(k, w) {
        return Err(UnhandledPattern {
            word: w.clone(),
            k,
            reason: "word is not π_k-reduced".into(),
        });
    }
    derive_inner(table, w, k)
}

fn derive_inner(table: &VertexTable, w: &Word, k: u8) -> Result<LadCertificate, UnhandledPattern> {
    debug_assert!(is_pi_reduced(k, w));
    if w.len() >= 2 {
        if let Some(cert) = try_rewrite(table, w, k) {
            return Ok(cert);
        }
    }
    if w.len() <= 2 {
        return leaf(table, w, k);
    }
    Err(UnhandledPattern {
        word: w.clone(),
        k,
        reason: "no rotation exposes a decomposable leading pattern".into(),
    })
}

fn leaf(table: &VertexTable, w: &Word, k: u8) -> Result<LadCertificate, UnhandledPattern> {
    let norm = reduced_alt_norm(k, w);
    let lad = rho_with(table, w).component(k).lad();
    if norm >= 1 && lad != LadValue::Finite(norm as i64) {
        // cannot happen for the true vertex table; kept structured
        return Err(UnhandledPattern {
            word: w.clone(),
            k,
            reason: "direct evaluation contradicts the norm at a leaf".into(),
        });
    }
    Ok(LadCertificate::Leaf {
        word: w.clone(),
        k,
        norm,
        lad,
    })
}

fn try_rewrite(table: &VertexTable, w: &Word, k: u8) -> Option<LadCertificate> {
    let mut rotated = w.clone();
    for rot in 0..w.len() {
        if rot > 0 {
            rotated = rotate_clutch(k, &rotated).ok()?;
        }
        if let Some(cert) = try_rewrite_at(table, w, k, rot, &rotated) {
            return Some(cert);
        }
    }
    None
}

/// Splits the rotated word along the identity: `u` keeps the pattern's last
/// letter, `r` substitutes the residual vertex for the consumed prefix.
fn split_words(rotated: &Word, identity: &IdentityDecomposition, consumed: usize) -> (Word, Word) {
    let letters = rotated.letters();
    let u_word = Word::from_reduced_slice(&letters[consumed - 1..]);
    let tail = &letters[consumed..];
    let r_word = if identity.l == 0 {
        Word::from_reduced_slice(tail)
    } else {
        let mut ls = vec![Letter::new(identity.l, identity.galois_branch < 0)];
        ls.extend_from_slice(tail);
        Word::from_letters(ls)
    };
    (u_word, r_word)
}

fn unit_product_sign(table: &VertexTable, k: u8, kp: u8) -> Option<(u8, i8)> {
    let idx = k ^ kp;
    let prod = table.unit(k) * table.unit(kp);
    if prod == *table.unit(idx) {
        Some((idx, 1))
    } else if prod == -table.unit(idx) {
        Some((idx, -1))
    } else {
        None
    }
}

fn try_rewrite_at(
    table: &VertexTable,
    w: &Word,
    k: u8,
    rotations: usize,
    rotated: &Word,
) -> Option<LadCertificate> {
    let (a, i, j, branch, consumed) = leading_pattern(rotated.letters())?;
    let identity = decompose_triple_with(table, a, i, j, branch).ok()?;
    let (u_word, r_word) = split_words(rotated, &identity, consumed);
    let (unit_index, unit_sign) = unit_product_sign(table, k, identity.k)?;

    if !is_pi_reduced(unit_index, &u_word) {
        return None;
    }
    let norm = rotated.alt_norm();
    if norm != reduced_alt_norm(k, w) || reduced_alt_norm(unit_index, &u_word) != norm - 1 {
        return None;
    }

    let u_branch = derive_inner(table, &u_word, unit_index).ok()?;
    let r_red = pi_reduce(k, &r_word);
    let r_branch = derive_inner(table, &r_red, k).ok()?;

    // exact rewrite of the representation
    let rho_rot = rho_with(table, rotated);
    let term_u = (table.unit(identity.k) * &rho_with(table, &u_word)).scale(&identity.c);
    let rho_r = rho_with(table, &r_word);
    let term_r = if identity.residual_sign > 0 {
        rho_r
    } else {
        -&rho_r
    };
    if rho_rot != &term_u + &term_r {
        return None;
    }

    // component-level bookkeeping and dominance
    let a_k = term_u.component(k);
    let b_k = term_r.component(k);
    if rho_rot.component(k) != &a_k + &b_k {
        return None;
    }
    let term_u_lad = a_k.lad();
    let term_r_lad = b_k.lad();
    if term_u_lad != identity.c.lad().product(u_branch.lad()) {
        return None;
    }
    if term_r_lad != r_branch.lad() || term_u_lad <= term_r_lad {
        return None;
    }

    // conclusion, re-derived from the original word
    let x_w = rho_with(table, w).component(k);
    if x_w != rho_rot.component(k) {
        return None;
    }
    let lad = x_w.lad();
    if lad != term_u_lad || lad != LadValue::Finite(norm as i64) {
        return None;
    }

    Some(LadCertificate::Rewrite {
        word: w.clone(),
        k,
        rotations,
        rotated: rotated.clone(),
        identity,
        unit_index,
        unit_sign,
        u_word,
        r_word,
        term_u_lad,
        term_r_lad,
        norm,
        lad,
        u_branch: Box::new(u_branch),
        r_branch: Box::new(r_branch),
    })
}

/// Re-verifies a certificate bottom to top in exact arithmetic.
pub fn check_certificate(cert: &LadCertificate) -> Result<(), CertificateError> {
    check_certificate_with(VertexTable::standard(), cert)
}

pub fn check_certificate_with(
    table: &VertexTable,
    cert: &LadCertificate,
) -> Result<(), CertificateError> {
    let mut path = Vec::new();
    check_node(table, cert, &mut path)
}

fn node_err(path: &[BranchStep], message: impl Into<String>) -> CertificateError {
    CertificateError {
        path: path.to_vec(),
        message: message.into(),
    }
}

fn check_node(
    table: &VertexTable,
    cert: &LadCertificate,
    path: &mut Vec<BranchStep>,
) -> Result<(), CertificateError> {
    macro_rules! ensure {
        ($cond:expr, $msg:expr) => {
            if !$cond {
                return Err(node_err(path, $msg));
            }
        };
    }
    match cert {
        LadCertificate::Leaf { word, k, norm, lad } => {
            ensure!(*k < 4, "component index out of range");
            ensure!(word.len() <= 2, "leaf word longer than two letters");
            ensure!(is_pi_reduced(*k, word), "leaf word is not π_k-reduced");
            ensure!(*norm == reduced_alt_norm(*k, word), "leaf norm mismatch");
            let actual = rho_with(table, word).component(*k).lad();
            ensure!(*lad == actual, "leaf lad does not match direct evaluation");
            if *norm >= 1 {
                ensure!(
                    *lad == LadValue::Finite(*norm as i64),
                    "leaf equality fails"
                );
            }
            Ok(())
        }
        LadCertificate::Rewrite {
            word,
            k,
            rotations,
            rotated,
            identity,
            unit_index,
            unit_sign,
            u_word,
            r_word,
            term_u_lad,
            term_r_lad,
            norm,
            lad,
            u_branch,
            r_branch,
        } => {
            ensure!(*k < 4, "component index out of range");
            ensure!(is_pi_reduced(*k, word), "target word is not π_k-reduced");

            // rotations replay exactly
            let mut cur = word.clone();
            for _ in 0..*rotations {
                cur = rotate_clutch(*k, &cur)
                    .map_err(|e| node_err(path, format!("rotation failed: {e}")))?;
            }
            ensure!(cur == *rotated, "rotated word does not replay");

            // leading pattern matches the recorded identity
            let Some((a, i, j, branch, consumed)) = leading_pattern(rotated.letters()) else {
                return Err(node_err(path, "rotated word has no decomposable pattern"));
            };
            ensure!(
                (a, i, j, branch) == (identity.a, identity.i, identity.j, identity.galois_branch),
                "identity indices do not match the leading pattern"
            );
            ensure!(
                identity_instance_holds(table, identity),
                "identity instance fails exact re-verification"
            );

            // derived words and unit bookkeeping
            let (u_expect, r_expect) = split_words(rotated, identity, consumed);
            ensure!(*u_word == u_expect, "u-word mismatch");
            ensure!(*r_word == r_expect, "r-word mismatch");
            match unit_product_sign(table, *k, identity.k) {
                Some((idx, sign)) => {
                    ensure!(
                        idx == *unit_index && sign == *unit_sign,
                        "unit product bookkeeping mismatch"
                    );
                }
                None => return Err(node_err(path, "unit product is not ± a unit")),
            }

            // branch targets
            ensure!(
                is_pi_reduced(*unit_index, u_word),
                "u-word is not reduced for its component"
            );
            ensure!(
                u_branch.word() == u_word && u_branch.k() == *unit_index,
                "u-branch proves the wrong goal"
            );
            let r_red = pi_reduce(*k, r_word);
            ensure!(
                r_branch.word() == &r_red && r_branch.k() == *k,
                "r-branch proves the wrong goal"
            );

            path.push(BranchStep::U);
            check_node(table, u_branch, path)?;
            path.pop();
            path.push(BranchStep::R);
            check_node(table, r_branch, path)?;
            path.pop();

            // the rewrite itself, in exact arithmetic
            let rho_rot = rho_with(table, rotated);
            let term_u = (table.unit(identity.k) * &rho_with(table, u_word)).scale(&identity.c);
            let rho_r = rho_with(table, r_word);
            let term_r = if identity.residual_sign > 0 {
                rho_r
            } else {
                -&rho_r
            };
            ensure!(
                rho_rot == &term_u + &term_r,
                "representation does not split along the identity"
            );

            let a_k = term_u.component(*k);
            let b_k = term_r.component(*k);
            ensure!(
                rho_rot.component(*k) == &a_k + &b_k,
                "component equation fails"
            );
            ensure!(a_k.lad() == *term_u_lad, "stored u-term lad is wrong");
            ensure!(b_k.lad() == *term_r_lad, "stored r-term lad is wrong");
            ensure!(
                *term_u_lad == identity.c.lad().product(u_branch.lad()),
                "u-term lad does not follow the product law"
            );
            // conjugation invariance ties the r-branch back to the r-term
            ensure!(
                rho_with(table, r_word).component(*k) == rho_with(table, &r_red).component(*k),
                "residual component changes under reduction"
            );
            ensure!(*term_r_lad == r_branch.lad(), "r-term lad mismatch");
            ensure!(term_u_lad > term_r_lad, "dominance is not strict");

            // norms and the root conclusion
            ensure!(
                *norm == reduced_alt_norm(*k, word) && *norm == rotated.alt_norm(),
                "norm bookkeeping mismatch"
            );
            ensure!(*norm == 1 + u_branch.norm(), "norm recursion mismatch");
            ensure!(
                *lad == *term_u_lad && *lad == LadValue::Finite(*norm as i64),
                "conclusion does not follow from dominance"
            );
            let x_w = rho_with(table, word).component(*k);
            ensure!(
                x_w == rho_rot.component(*k),
                "rotation changed the component"
            );
            ensure!(x_w.lad() == *lad, "root equality fails");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freewords::reduced_words;
    use crate::theoremlab::check_word;

    fn w(s: &str) -> Word {
        s.parse().expect("test word")
    }

    #[test]
    fn single_letter_is_a_leaf() {
        for k in 0..4u8 {
            let cert = derive_lad_certificate(&w("g1"), k).unwrap();
            assert!(matches!(cert, LadCertificate::Leaf { .. }));
            assert_eq!(cert.norm(), 1);
            assert_eq!(cert.lad(), LadValue::Finite(1));
            check_certificate(&cert).unwrap();
        }
    }

    #[test]
    fn same_sign_pair_rewrites_with_empty_tail() {
        let cert = derive_lad_certificate(&w("g1*g2"), 0).unwrap();
        let LadCertificate::Rewrite {
            ref identity,
            ref u_word,
            ref r_word,
            ..
        } = cert
        else {
            panic!("expected a rewrite node");
        };
        assert_eq!((identity.a, identity.i, identity.j), (1, 0, 2));
        assert_eq!(u_word, &w("g2"));
        assert_eq!(r_word, &Word::identity());
        assert_eq!(cert.lad(), LadValue::Finite(2));
        check_certificate(&cert).unwrap();
    }

    #[test]
    fn alternating_pair_is_a_leaf() {
        let cert = derive_lad_certificate(&w("g1*g2^-1"), 0).unwrap();
        assert!(matches!(cert, LadCertificate::Leaf { .. }));
        assert_eq!(cert.lad(), LadValue::Finite(1));
        check_certificate(&cert).unwrap();
    }

    #[test]
    fn three_letter_word_matches_check_word() {
        let word = w("g1*g2*g3");
        let cert = derive_lad_certificate(&word, 0).unwrap();
        check_certificate(&cert).unwrap();
        let report = check_word(&word);
        assert_eq!(cert.lad(), report.per_k[0].lad);
        assert_eq!(cert.norm(), report.per_k[0].norm);
    }

    #[test]
    fn rotation_is_used_when_the_front_alternates() {
        // g1 g2^-1 g3^-1 has no leading pattern; one rotation exposes the
        // same-sign pair g2^-1 g3^-1
        let word = w("g1*g2^-1*g3^-1");
        let cert = derive_lad_certificate(&word, 0).unwrap();
        let LadCertificate::Rewrite { rotations, .. } = cert else {
            panic!("expected a rewrite node");
        };
        assert_eq!(rotations, 1);
        check_certificate(&cert).unwrap();
    }

    #[test]
    fn words_up_to_len_three_all_certify() {
        for word in reduced_words(3) {
            for k in 0..4u8 {
                let red = pi_reduce(k, &word);
                if red.is_empty() {
                    continue;
                }
                let cert =
                    derive_lad_certificate(&red, k).unwrap_or_else(|e| panic!("unhandled: {e}"));
                check_certificate(&cert).unwrap_or_else(|e| panic!("{word} k={k}: {e}"));
                let report = check_word(&red);
                assert_eq!(cert.lad(), report.per_k[k as usize].lad);
            }
        }
    }

    #[test]
    fn tampered_constant_is_rejected() {
        let mut cert = derive_lad_certificate(&w("g1*g2*g3"), 0).unwrap();
        if let LadCertificate::Rewrite { identity, .. } = &mut cert {
            identity.c = &identity.c + &identity.c; // c ↦ 2c
        }
        let err = check_certificate(&cert).unwrap_err();
        assert!(err.message.contains("identity instance"), "got: {err}");
    }

    #[test]
    fn tampered_lad_claim_is_rejected() {
        let mut cert = derive_lad_certificate(&w("g1*g2"), 1).unwrap();
        if let LadCertificate::Rewrite {
            lad, term_u_lad, ..
        } = &mut cert
        {
            *lad = LadValue::Finite(99);
            *term_u_lad = LadValue::Finite(99);
        }
        assert!(check_certificate(&cert).is_err());
    }

    #[test]
    fn non_reduced_input_is_structured_data() {
        let err = derive_lad_certificate(&w("g1*g2^-1"), 3).unwrap_err();
        assert_eq!(err.k, 3);
        assert!(err.reason.contains("π_k-reduced"));
    }

    #[test]
    fn display_renders_a_tree() {
        let cert = derive_lad_certificate(&w("g1*g2*g3"), 0).unwrap();
        let text = cert.to_string();
        assert!(text.contains("rewrite"));
        assert!(text.contains("u: "));
        assert!(text.contains("r: "));
    }
}
