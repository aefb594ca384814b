//! Exhaustive verification that the shifted algebraic-denominator logarithm
//! of each representation component equals the corresponding reduced
//! alternating norm, plus the quadratic identity family and derivation
//! certificates.
//!
//! The two sides of the equality come from disjoint code paths: norms walk
//! letters in [`crate::freewords`], lads come from exact quaternion products
//! in [`crate::quatrep`] and [`crate::goldfield`]. The campaign driver
//! partitions the word stream by two-letter prefixes; summaries merge by a
//! commutative fold, so results are identical for any worker count.

mod certificates;
mod identities;

pub use certificates::{
    check_certificate, check_certificate_with, derive_lad_certificate, derive_lad_certificate_with,
    BranchStep, CertificateError, LadCertificate, UnhandledPattern,
};
pub use identities::{
    admissible_triples, decompose_triple, decompose_triple_with, verify_identity_family,
    verify_identity_family_with, FamilyFailure, FamilyReport, IdentityDecomposition, IdentityError,
};

use crate::freewords::{
    alt_norm_slice, is_reduced, reduced_word_count, strip_count, KleinPerm, Letter, Word,
};
use crate::goldfield::LadValue;
use crate::quatrep::{rho_with, Quaternion5, VertexTable};
use serde::Serialize;
use std::time::Instant;

/// Per-`k` slice of a word's report: the π_k-reduced form, its alternating
/// norm, the component `x_k` of the representation, its lad, and the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerK {
    pub k: u8,
    #[serde(rename = "redK")]
    pub red: Word,
    #[serde(rename = "normK")]
    pub norm: u64,
    #[serde(rename = "xK")]
    pub x: crate::goldfield::Dyadic5,
    #[serde(rename = "ladK")]
    pub lad: LadValue,
    pub pass: bool,
}

/// The full four-row record for one word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub word: Word,
    pub rho: Quaternion5,
    #[serde(rename = "perK")]
    pub per_k: Vec<PerK>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.per_k.iter().all(|p| p.pass)
    }
}

/// Evaluates the theorem clause for one word and all `k` in `0..=3`.
///
/// `pass[k]` holds when either the degenerate clause applies (`‖w‖_k = 0`
/// together with `ρ(w) = 1` for `k = 0`, or `x_k = 0` for `k > 0`) or the
/// main equality `lad(x_k) = ‖w‖_k ≥ 1` does.
pub fn check_word(w: &Word) -> TheoremReport {
    check_word_with(VertexTable::standard(), w)
}

pub fn check_word_with(table: &VertexTable, w: &Word) -> TheoremReport {
    let x = rho_with(table, w);
    let per_k = (0..4u8)
        .map(|k| {
            let red = crate::freewords::pi_reduce(k, w);
            let norm = red.alt_norm();
            let xk = x.component(k);
            let lad = xk.lad();
            let pass = if norm == 0 {
                if k == 0 {
                    x.is_one()
                } else {
                    xk.is_zero()
                }
            } else {
                lad == LadValue::Finite(norm as i64)
            };
            PerK {
                k,
                red,
                norm,
                x: xk,
                lad,
                pass,
            }
        })
        .collect();
    TheoremReport {
        word: w.clone(),
        rho: x,
        per_k,
    }
}

/// Outcome of an exhaustive campaign over all reduced words up to a length.
#[derive(Clone, Debug, Serialize)]
pub struct CampaignSummary {
    #[serde(rename = "maxLen")]
    pub max_len: usize,
    #[serde(rename = "wordsChecked")]
    pub words_checked: u64,
    pub failures: Vec<TheoremReport>,
    /// Nontrivial words whose representation is the identity quaternion
    /// (must stay empty; each also shows up in `failures`).
    #[serde(rename = "freenessFailures")]
    pub freeness_failures: Vec<Word>,
    /// Largest |lad| over all finite component lads seen.
    #[serde(rename = "maxAbsLad")]
    pub max_abs_lad: i64,
    #[serde(rename = "elapsedMs")]
    pub elapsed_ms: u128,
}

impl CampaignSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.freeness_failures.is_empty()
    }

    /// The worker-independent content (everything except the timing).
    pub fn deterministic_view(&self) -> (u64, &[TheoremReport], &[Word], i64) {
        (
            self.words_checked,
            &self.failures,
            &self.freeness_failures,
            self.max_abs_lad,
        )
    }
}

/// Campaign summary plus the identity family table; this is the JSON shape
/// the CLI's `verify` emits.
#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    #[serde(rename = "maxLen")]
    pub max_len: usize,
    #[serde(rename = "wordsChecked")]
    pub words_checked: u64,
    pub failures: Vec<TheoremReport>,
    #[serde(rename = "freenessFailures")]
    pub freeness_failures: Vec<Word>,
    #[serde(rename = "identityFamily")]
    pub identity_family: Vec<IdentityDecomposition>,
    #[serde(rename = "identityFailures")]
    pub identity_failures: Vec<FamilyFailure>,
    #[serde(rename = "maxAbsLad")]
    pub max_abs_lad: i64,
    #[serde(rename = "elapsedMs")]
    pub elapsed_ms: u128,
}

impl CampaignReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self.freeness_failures.is_empty()
            && self.identity_failures.is_empty()
    }
}

#[derive(Default)]
struct Accum {
    words: u64,
    failures: Vec<TheoremReport>,
    freeness: Vec<Word>,
    max_abs_lad: i64,
}

impl Accum {
    fn merge(mut self, other: Accum) -> Accum {
        self.words += other.words;
        self.failures.extend(other.failures);
        self.freeness.extend(other.freeness);
        self.max_abs_lad = self.max_abs_lad.max(other.max_abs_lad);
        self
    }
}

/// Checks one word given its letters and precomputed representation.
fn check_node(table: &VertexTable, letters: &[Letter], x: &Quaternion5, acc: &mut Accum) {
    debug_assert!(is_reduced(letters));
    acc.words += 1;
    let mut failed = false;
    for k in 0..4u8 {
        let perm = KleinPerm::new(k);
        let t = strip_count(&perm, letters);
        let norm = alt_norm_slice(&letters[t..letters.len() - t]);
        let xk = x.component(k);
        let lad = xk.lad();
        if let LadValue::Finite(v) = lad {
            acc.max_abs_lad = acc.max_abs_lad.max(v.abs());
        }
        let pass = if norm == 0 {
            if k == 0 {
                x.is_one()
            } else {
                xk.is_zero()
            }
        } else {
            lad == LadValue::Finite(norm as i64)
        };
        if !pass {
            failed = true;
        }
    }
    if !letters.is_empty() && x.is_one() {
        acc.freeness.push(Word::from_reduced_slice(letters));
    }
    if failed {
        acc.failures
            .push(check_word_with(table, &Word::from_reduced_slice(letters)));
    }
}

/// Depth-first scan of all reduced extensions of `letters` up to `max_len`,
/// carrying the quaternion product so each word costs one multiplication.
fn scan_subtree(
    table: &VertexTable,
    letters: &mut Vec<Letter>,
    x: &Quaternion5,
    max_len: usize,
    acc: &mut Accum,
) {
    check_node(table, letters, x, acc);
    if letters.len() >= max_len {
        return;
    }
    let forbidden = letters.last().map(|l| l.inverse());
    for code in 0..8u8 {
        let l = Letter::from_code(code);
        if Some(l) == forbidden {
            continue;
        }
        let next = x * &table.letter_image(l);
        letters.push(l);
        scan_subtree(table, letters, &next, max_len, acc);
        letters.pop();
    }
}

/// The independent root tasks: all length-2 reduced prefixes. Length-1
/// words are handled separately so the split stays a partition.
fn two_letter_prefixes() -> Vec<[Letter; 2]> {
    let mut out = Vec::with_capacity(56);
    for a in 0..8u8 {
        for b in 0..8u8 {
            if b != a ^ 1 {
                out.push([Letter::from_code(a), Letter::from_code(b)]);
            }
        }
    }
    out
}

fn run_prefix_task(table: &VertexTable, prefix: &[Letter], max_len: usize) -> Accum {
    let mut letters: Vec<Letter> = prefix.to_vec();
    let x = letters
        .iter()
        .fold(Quaternion5::one(), |acc, &l| &acc * &table.letter_image(l));
    let mut acc = Accum::default();
    scan_subtree(table, &mut letters, &x, max_len, &mut acc);
    acc
}

fn run_short_words(table: &VertexTable, max_len: usize) -> Accum {
    let mut acc = Accum::default();
    if max_len >= 1 {
        for code in 0..8u8 {
            let l = Letter::from_code(code);
            let x = table.letter_image(l);
            check_node(table, &[l], &x, &mut acc);
        }
    }
    acc
}

/// Progress callback: `(tasks_done, tasks_total)` after each prefix block.
pub type Progress<'a> = &'a (dyn Fn(u64, u64) + Sync);

fn run_tasks_sequential(
    table: &VertexTable,
    prefixes: &[[Letter; 2]],
    max_len: usize,
    progress: Progress,
) -> Accum {
    let total = prefixes.len() as u64;
    prefixes
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let acc = run_prefix_task(table, p, max_len);
            progress(n as u64 + 1, total);
            acc
        })
        .fold(Accum::default(), Accum::merge)
}

#[cfg(feature = "parallel")]
fn run_tasks_parallel(
    table: &VertexTable,
    prefixes: &[[Letter; 2]],
    max_len: usize,
    workers: usize,
    progress: Progress,
) -> Accum {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicU64, Ordering};
    let total = prefixes.len() as u64;
    let done = AtomicU64::new(0);
    let scan = || {
        prefixes
            .par_iter()
            .map(|p| {
                let acc = run_prefix_task(table, p, max_len);
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
                acc
            })
            .reduce(Accum::default, Accum::merge)
    };
    if workers == 0 {
        scan()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("rayon pool");
        pool.install(scan)
    }
}

/// Runs the theorem check over every reduced word of length `1..=max_len`.
///
/// `workers = 0` uses the default thread pool, `workers = 1` forces the
/// sequential scan, anything else sizes a dedicated pool. Without the
/// `parallel` feature the scan is always sequential. The summary content is
/// independent of the worker count.
pub fn verify_theorem(max_len: usize, workers: usize) -> CampaignSummary {
    verify_theorem_with(VertexTable::standard(), max_len, workers)
}

pub fn verify_theorem_with(table: &VertexTable, max_len: usize, workers: usize) -> CampaignSummary {
    verify_theorem_with_progress(table, max_len, workers, &|_, _| {})
}

pub fn verify_theorem_with_progress(
    table: &VertexTable,
    max_len: usize,
    workers: usize,
    progress: Progress,
) -> CampaignSummary {
    let start = Instant::now();
    let mut acc = run_short_words(table, max_len);
    if max_len >= 2 {
        let prefixes = two_letter_prefixes();
        let deep = {
            #[cfg(feature = "parallel")]
            {
                if workers == 1 {
                    run_tasks_sequential(table, &prefixes, max_len, progress)
                } else {
                    run_tasks_parallel(table, &prefixes, max_len, workers, progress)
                }
            }
            #[cfg(not(feature = "parallel"))]
            {
                let _ = workers;
                run_tasks_sequential(table, &prefixes, max_len, progress)
            }
        };
        acc = acc.merge(deep);
    }
    debug_assert_eq!(acc.words, reduced_word_count(max_len));
    // canonical order regardless of merge order
    acc.failures.sort_by(|a, b| a.word.cmp(&b.word));
    acc.freeness.sort();
    CampaignSummary {
        max_len,
        words_checked: acc.words,
        failures: acc.failures,
        freeness_failures: acc.freeness,
        max_abs_lad: acc.max_abs_lad,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Full verification: the word campaign plus the quadratic identity family.
pub fn run_verification(max_len: usize, workers: usize) -> CampaignReport {
    run_verification_with(VertexTable::standard(), max_len, workers)
}

pub fn run_verification_with(
    table: &VertexTable,
    max_len: usize,
    workers: usize,
) -> CampaignReport {
    run_verification_with_progress(table, max_len, workers, &|_, _| {})
}

pub fn run_verification_with_progress(
    table: &VertexTable,
    max_len: usize,
    workers: usize,
    progress: Progress,
) -> CampaignReport {
    let summary = verify_theorem_with_progress(table, max_len, workers, progress);
    let family = verify_identity_family_with(table);
    CampaignReport {
        max_len: summary.max_len,
        words_checked: summary.words_checked,
        failures: summary.failures,
        freeness_failures: summary.freeness_failures,
        identity_family: family.entries,
        identity_failures: family.failures,
        max_abs_lad: summary.max_abs_lad,
        elapsed_ms: summary.elapsed_ms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freewords::reduced_words;
    use crate::goldfield::Dyadic5;

    fn w(s: &str) -> Word {
        s.parse().expect("test word")
    }

    #[test]
    fn check_word_first_worked_example() {
        let r = check_word(&w("g1*g2^-1"));
        let norms: Vec<u64> = r.per_k.iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![1, 1, 1, 0]);
        let lads: Vec<LadValue> = r.per_k.iter().map(|p| p.lad).collect();
        assert_eq!(
            lads,
            vec![
                LadValue::Finite(1),
                LadValue::Finite(1),
                LadValue::Finite(1),
                LadValue::NegInfinity
            ]
        );
        let reds: Vec<Word> = r.per_k.iter().map(|p| p.red.clone()).collect();
        assert_eq!(
            reds,
            vec![w("g1*g2^-1"), w("g1*g2^-1"), w("g1*g2^-1"), w("e")]
        );
        assert!(r.all_pass());
    }

    #[test]
    fn check_word_second_worked_example() {
        let r = check_word(&w("g1*g2"));
        for p in &r.per_k {
            assert_eq!(p.norm, 2);
            assert_eq!(p.lad, LadValue::Finite(2));
            assert!(p.pass);
        }
    }

    #[test]
    fn check_word_single_generator() {
        let r = check_word(&w("g1"));
        for p in &r.per_k {
            assert_eq!(p.norm, 1);
            assert_eq!(p.lad, LadValue::Finite(1));
            assert!(p.pass);
        }
    }

    #[test]
    fn check_word_square() {
        let r = check_word(&w("g1*g1"));
        for p in &r.per_k {
            assert_eq!(p.norm, 2);
            assert_eq!(p.lad, LadValue::Finite(2));
            assert!(p.pass);
        }
    }

    #[test]
    fn check_word_identity() {
        let r = check_word(&Word::identity());
        assert!(r.all_pass());
        for p in &r.per_k {
            assert_eq!(p.norm, 0);
            assert_eq!(
                p.lad,
                if p.k == 0 {
                    LadValue::Finite(-1)
                } else {
                    LadValue::NegInfinity
                }
            );
        }
    }

    #[test]
    fn iff_clauses_separately_small() {
        // norm = 0 ⟺ red = 1 ⟺ the algebraic condition, each direction
        for word in reduced_words(4) {
            let r = check_word(&word);
            for p in &r.per_k {
                assert_eq!(p.norm == 0, p.red.is_identity());
                let algebraic = if p.k == 0 {
                    r.rho.is_one()
                } else {
                    p.x.is_zero()
                };
                assert_eq!(p.red.is_identity(), algebraic, "word {word} k={}", p.k);
            }
        }
    }

    #[test]
    fn campaign_small_counts() {
        let s = verify_theorem(2, 1);
        assert_eq!(s.words_checked, 64);
        assert!(s.ok());
        assert_eq!(s.max_abs_lad, 2);

        let s1 = verify_theorem(1, 1);
        assert_eq!(s1.words_checked, 8);
        assert!(s1.ok());
        assert_eq!(s1.max_abs_lad, 1);
    }

    #[test]
    fn campaign_matches_per_word_checks() {
        let s = verify_theorem(3, 1);
        assert_eq!(s.words_checked, reduced_word_count(3));
        assert!(s.ok());
        for word in reduced_words(3) {
            assert!(check_word(&word).all_pass());
        }
    }

    #[test]
    fn length_one_words_all_have_unit_norms_and_lads() {
        let s = verify_theorem(1, 1);
        assert_eq!(s.words_checked, 8);
        assert!(s.ok());
        for word in reduced_words(1) {
            for p in check_word(&word).per_k {
                assert_eq!(p.norm, 1);
                assert_eq!(p.lad, LadValue::Finite(1));
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn campaign_deterministic_across_workers() {
        let a = verify_theorem(4, 1);
        let b = verify_theorem(4, 4);
        assert_eq!(a.deterministic_view(), b.deterministic_view());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn failure_lists_deterministic_across_workers() {
        // determinism matters most when something breaks: a corrupted table
        // must produce identical, canonically ordered failure lists
        let mut table = VertexTable::standard().clone();
        table.q[2] = table.q[2].conj();
        let a = verify_theorem_with(&table, 3, 1);
        let b = verify_theorem_with(&table, 3, 4);
        assert!(!a.ok());
        assert_eq!(a.deterministic_view(), b.deterministic_view());
        let mut sorted = a.failures.clone();
        sorted.sort_by(|x, y| x.word.cmp(&y.word));
        assert_eq!(
            a.failures.iter().map(|f| &f.word).collect::<Vec<_>>(),
            sorted.iter().map(|f| &f.word).collect::<Vec<_>>()
        );
    }

    #[test]
    fn corrupted_table_produces_failures() {
        let mut table = VertexTable::standard().clone();
        let shift = Quaternion5::new([
            Dyadic5::new(1, 0, 2),
            Dyadic5::zero(),
            Dyadic5::zero(),
            Dyadic5::zero(),
        ]);
        table.q[1] = &table.q[1] + &shift;
        let s = verify_theorem_with(&table, 2, 1);
        assert!(!s.ok());
        assert!(!s.failures.is_empty());
    }

    #[test]
    fn report_serialization_shape() {
        let r = check_word(&w("g1*g2^-1"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["word"], "g1*g2^-1");
        assert_eq!(json["perK"][3]["ladK"], "-inf");
        assert_eq!(json["perK"][0]["normK"], 1);
    }
}
