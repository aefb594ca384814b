//! Reduced words in the rank-4 free group: alternating norm and pairs
//! expression, Klein permutations, clutch (π-) reduction, and deterministic
//! enumeration.
//!
//! A word is a freely reduced sequence of signed generators; the empty word
//! is the identity. The alternating machinery is written against the generic
//! [`GeneratorPerm`] interface, of which [`KleinPerm`] is the only exposed
//! instance (rank is fixed at 4 throughout).

use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A signed generator `g_i^{±1}`, `i` in `1..=4`.
///
/// Internally a single code `(i-1)*2 + inverse`, which makes the canonical
/// lexicographic order `g1 < g1^-1 < g2 < g2^-1 < …` the natural order on
/// codes, and letter inversion a single bit flip.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    code: u8,
}

impl Letter {
    pub fn new(index: u8, inverse: bool) -> Self {
        assert!((1..=4).contains(&index), "generator index out of range");
        Letter {
            code: (index - 1) * 2 + inverse as u8,
        }
    }

    pub(crate) fn from_code(code: u8) -> Self {
        debug_assert!(code < 8);
        Letter { code }
    }

    pub(crate) fn code(&self) -> u8 {
        self.code
    }

    /// Generator index in `1..=4`.
    pub fn index(&self) -> u8 {
        self.code / 2 + 1
    }

    pub fn is_inverse(&self) -> bool {
        self.code & 1 == 1
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(&self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            code: self.code ^ 1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.index())?;
        if self.is_inverse() {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A freely reduced word; the empty word is the identity.
///
/// Every constructor reduces, so the no-adjacent-cancellation invariant
/// always holds. Ordering is by length first, then lexicographic, matching
/// the enumeration order of [`reduced_words`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    /// Builds a word from letters, freely reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Wraps a slice already known to be reduced (subwords of reduced words).
    pub(crate) fn from_reduced_slice(letters: &[Letter]) -> Self {
        debug_assert!(is_reduced(letters));
        Word {
            letters: letters.to_vec(),
        }
    }

    pub fn generator(index: u8) -> Self {
        Word {
            letters: vec![Letter::new(index, false)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reduced concatenation `uv`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Group inverse: reversed order, flipped signs.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Flips every letter's sign in place, keeping the order. A reduced word
    /// stays reduced: an adjacent pair cancels after the flip iff it did
    /// before.
    pub fn invert_letters(&self) -> Word {
        let out = Word {
            letters: self.letters.iter().map(Letter::inverse).collect(),
        };
        debug_assert!(is_reduced(&out.letters));
        out
    }

    /// Number of adjacent positions whose letters have opposite signs.
    pub fn sign_changes(&self) -> usize {
        sign_changes_slice(&self.letters)
    }

    /// The alternating norm `|w| - ⌈s/2⌉` where `s` counts sign changes.
    pub fn alt_norm(&self) -> u64 {
        alt_norm_slice(&self.letters)
    }
}

pub(crate) fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[1] != w[0].inverse())
}

pub(crate) fn sign_changes_slice(letters: &[Letter]) -> usize {
    letters
        .windows(2)
        .filter(|w| w[0].sign() != w[1].sign())
        .count()
}

pub(crate) fn alt_norm_slice(letters: &[Letter]) -> u64 {
    let s = sign_changes_slice(letters);
    (letters.len() - s.div_ceil(2)) as u64
}

impl fmt::Display for Word {
    /// Canonical text form: terms joined by `*`, inverses as `^-1`, the
    /// identity as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

/// Errors from parsing the word grammar `term*`,
/// `term := "g" digit[1-4] ("'" | "^-1" | "^1")?`.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("syntax error at byte {offset}")]
    Syntax { offset: usize },
    #[error("generator index out of range (1..=4) at byte {offset}")]
    IndexOutOfRange { offset: usize },
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Parses the word grammar; `*` and whitespace are separators, `e` or
    /// the empty string is the identity. Free reduction is applied after
    /// parsing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let stripped: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        if stripped.is_empty() || stripped == "e" {
            return Ok(Word::identity());
        }
        let bytes = s.as_bytes();
        let mut letters = Vec::new();
        let mut pos = 0usize;
        while pos < bytes.len() {
            let b = bytes[pos];
            if b == b'*' || b.is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if b != b'g' {
                return Err(WordParseError::Syntax { offset: pos });
            }
            pos += 1;
            let digit = match bytes.get(pos) {
                Some(d @ b'1'..=b'4') => d - b'0',
                Some(b'0') | Some(b'5'..=b'9') => {
                    return Err(WordParseError::IndexOutOfRange { offset: pos })
                }
                _ => return Err(WordParseError::Syntax { offset: pos }),
            };
            pos += 1;
            let mut inverse = false;
            match bytes.get(pos) {
                Some(b'\'') => {
                    inverse = true;
                    pos += 1;
                }
                Some(b'^') => {
                    pos += 1;
                    match bytes.get(pos) {
                        Some(b'-') => {
                            pos += 1;
                            if bytes.get(pos) == Some(&b'1') {
                                inverse = true;
                                pos += 1;
                            } else {
                                return Err(WordParseError::Syntax { offset: pos });
                            }
                        }
                        Some(b'1') => {
                            pos += 1;
                        }
                        _ => return Err(WordParseError::Syntax { offset: pos }),
                    }
                }
                _ => {}
            }
            letters.push(Letter::new(digit, inverse));
        }
        Ok(Word::from_letters(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Klein permutations
// ---------------------------------------------------------------------------

/// A permutation of the generator indices, extended letter-wise to words.
pub trait GeneratorPerm {
    fn image(&self, index: u8) -> u8;

    fn apply_letter(&self, l: Letter) -> Letter {
        Letter::new(self.image(l.index()), l.is_inverse())
    }
}

/// The four permutations `π_0 = id`, `π_1 = (1,3)(2,4)`, `π_2 = (1,4)(2,3)`,
/// `π_3 = (1,2)(3,4)` induced on the vertex indices by conjugation with the
/// quaternion units. They form a Klein four-group; composition is XOR on the
/// index `k`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct KleinPerm {
    k: u8,
}

const KLEIN_TABLES: [[u8; 5]; 4] = [
    [0, 1, 2, 3, 4],
    [0, 3, 4, 1, 2],
    [0, 4, 3, 2, 1],
    [0, 2, 1, 4, 3],
];

impl KleinPerm {
    pub fn new(k: u8) -> Self {
        assert!(k < 4, "Klein permutation index must be in 0..=3");
        KleinPerm { k }
    }

    pub fn all() -> [KleinPerm; 4] {
        [0, 1, 2, 3].map(KleinPerm::new)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn compose(&self, other: &KleinPerm) -> KleinPerm {
        KleinPerm {
            k: self.k ^ other.k,
        }
    }

    /// Letter-wise index permutation; signs are preserved, so a reduced word
    /// stays reduced.
    pub fn apply_word(&self, w: &Word) -> Word {
        let out = Word {
            letters: w.letters.iter().map(|&l| self.apply_letter(l)).collect(),
        };
        debug_assert!(is_reduced(out.letters()));
        out
    }
}

impl GeneratorPerm for KleinPerm {
    fn image(&self, index: u8) -> u8 {
        KLEIN_TABLES[self.k as usize][index as usize]
    }
}

// ---------------------------------------------------------------------------
// Clutch (π-) reduction
// ---------------------------------------------------------------------------

/// For a word starting with letter `first`, the ending letter that would
/// cancel over the clutch: `π(g)^{∓1}`.
fn forbidden_ending<P: GeneratorPerm>(perm: &P, first: Letter) -> Letter {
    Letter::new(perm.image(first.index()), !first.is_inverse())
}

/// Number of letter pairs stripped from both ends by π-reduction, so that
/// `red_π(w) = w[t .. n-t]`. Stripping only ever removes end letters, hence
/// the reduced form is always a contiguous middle slice.
pub(crate) fn strip_count<P: GeneratorPerm>(perm: &P, letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut t = 0;
    while n - 2 * t >= 2 && letters[n - 1 - t] == forbidden_ending(perm, letters[t]) {
        t += 1;
    }
    t
}

pub(crate) fn is_pi_reduced_slice<P: GeneratorPerm>(perm: &P, letters: &[Letter]) -> bool {
    debug_assert!(is_reduced(letters));
    match letters {
        [] => true,
        [first, .., last] => *last != forbidden_ending(perm, *first),
        [_] => true,
    }
}

/// Is `w` shortest among its π-conjugates `u w π(u)^{-1}`? Equivalently: `w`
/// is the identity, or its first letter `g^{±1}` is not matched by a final
/// `π(g)^{∓1}`. For `k = 0` this is cyclic reducedness.
pub fn is_pi_reduced(k: u8, w: &Word) -> bool {
    is_pi_reduced_slice(&KleinPerm::new(k), w.letters())
}

/// The π-reduced form `red_k(w)`: cancels a leading `g^{±1}` against a
/// trailing `π_k(g)^{∓1}` as long as possible.
pub fn pi_reduce(k: u8, w: &Word) -> Word {
    let perm = KleinPerm::new(k);
    let t = strip_count(&perm, w.letters());
    Word::from_reduced_slice(&w.letters()[t..w.len() - t])
}

/// The reduced k-alternating norm `‖w‖_k = |red_k(w)|_alt`.
pub fn reduced_alt_norm(k: u8, w: &Word) -> u64 {
    let perm = KleinPerm::new(k);
    let t = strip_count(&perm, w.letters());
    alt_norm_slice(&w.letters()[t..w.len() - t])
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClutchError {
    #[error("word is not π_{k}-reduced")]
    NotPiReduced { k: u8 },
    #[error("cannot rotate the empty word")]
    EmptyWord,
}

/// Moves the first letter of a π_k-reduced word over the clutch to the end,
/// applying `π_k` to it. Preserves π_k-reducedness and the alternating norm.
pub fn rotate_clutch(k: u8, w: &Word) -> Result<Word, ClutchError> {
    if w.is_empty() {
        return Err(ClutchError::EmptyWord);
    }
    let perm = KleinPerm::new(k);
    if !is_pi_reduced_slice(&perm, w.letters()) {
        return Err(ClutchError::NotPiReduced { k });
    }
    let mut letters: Vec<Letter> = w.letters()[1..].to_vec();
    letters.push(perm.apply_letter(w.letters()[0]));
    // π-reducedness of the input rules out a cancellation at the seam
    debug_assert!(is_reduced(&letters));
    Ok(Word { letters })
}

// ---------------------------------------------------------------------------
// Alternating pairs expression
// ---------------------------------------------------------------------------

/// One pair `(a, b)` denoting `a · b^{-1}`; `None` is the identity slot.
/// With alphabet sign `+1` the slots hold `1, g_1..g_4`; with `-1` they hold
/// `1, g_1^{-1}..g_4^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AltPair {
    pub a: Option<u8>,
    pub b: Option<u8>,
}

/// The unique alternating pairs expression of a nonempty reduced word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltExpression {
    pub alphabet_sign: i8,
    pairs: Vec<AltPair>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("the empty word has no alternating pairs expression")]
pub struct EmptyWordError;

impl AltExpression {
    pub fn pairs(&self) -> &[AltPair] {
        &self.pairs
    }

    pub fn pair_count(&self) -> u64 {
        self.pairs.len() as u64
    }

    /// Rebuilds the word the expression denotes. The slot constraints make
    /// cancellation impossible, so this emits exactly the source letters.
    pub fn product_word(&self) -> Word {
        let neg = self.alphabet_sign < 0;
        let mut letters = Vec::new();
        for pair in &self.pairs {
            if let Some(i) = pair.a {
                letters.push(Letter::new(i, neg));
            }
            if let Some(i) = pair.b {
                letters.push(Letter::new(i, !neg));
            }
        }
        Word::from_letters(letters)
    }
}

impl fmt::Display for AltExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.alphabet_sign < 0;
        for pair in &self.pairs {
            let a = match pair.a {
                Some(i) => Letter::new(i, neg).to_string(),
                None => "1".to_string(),
            };
            let b = match pair.b {
                Some(i) => Letter::new(i, !neg).to_string(),
                None => "1".to_string(),
            };
            write!(f, "({a}*{b})")?;
        }
        Ok(())
    }
}

impl Serialize for AltExpression {
    /// `{"alphabetSign": ±1, "pairs": [[a, b], …]}` with `0` for the
    /// identity slot.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pairs: Vec<[u8; 2]> = self
            .pairs
            .iter()
            .map(|p| [p.a.unwrap_or(0), p.b.unwrap_or(0)])
            .collect();
        let mut s = serializer.serialize_struct("AltExpression", 2)?;
        s.serialize_field("alphabetSign", &self.alphabet_sign)?;
        s.serialize_field("pairs", &pairs)?;
        s.end()
    }
}

/// The left-to-right greedy parse into alternating pairs.
///
/// The alphabet is chosen by the first letter's sign. A letter of alphabet
/// sign opens a pair as the `a` slot and greedily absorbs a following letter
/// of the opposite sign as the `b` slot; a lone opposite-sign letter becomes
/// a `(1, b)` pair. The pair count equals the alternating norm.
pub fn alt_expression(w: &Word) -> Result<AltExpression, EmptyWordError> {
    if w.is_empty() {
        return Err(EmptyWordError);
    }
    let sigma = w.letters()[0].sign();
    let mut pairs = Vec::new();
    let mut it = w.letters().iter().peekable();
    while let Some(&l) = it.next() {
        if l.sign() == sigma {
            let mut b = None;
            if let Some(&&next) = it.peek() {
                if next.sign() != sigma {
                    b = Some(next.index());
                    it.next();
                }
            }
            pairs.push(AltPair {
                a: Some(l.index()),
                b,
            });
        } else {
            pairs.push(AltPair {
                a: None,
                b: Some(l.index()),
            });
        }
    }
    let expr = AltExpression {
        alphabet_sign: sigma,
        pairs,
    };
    debug_assert_eq!(expr.product_word(), *w);
    debug_assert_eq!(expr.pair_count(), w.alt_norm());
    Ok(expr)
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Number of reduced words of length exactly `n`: `8 · 7^(n-1)`.
pub fn reduced_word_count_at(n: usize) -> u64 {
    if n == 0 {
        1
    } else {
        8 * 7u64.pow(n as u32 - 1)
    }
}

/// Cumulative count of reduced words of lengths `1..=max_len`.
pub fn reduced_word_count(max_len: usize) -> u64 {
    (1..=max_len).map(reduced_word_count_at).sum()
}

/// Streams every reduced word of length `1..=max_len` exactly once, in
/// (length, lexicographic) order with `g1 < g1^-1 < g2 < …`.
pub fn reduced_words(max_len: usize) -> ReducedWords {
    ReducedWords {
        prefix: Vec::new(),
        min_len: 1,
        max_len,
        state: None,
        cur_len: 0,
        done: max_len == 0,
    }
}

/// Streams the reduced words of length `1..=max_len` that start with the
/// given prefix (the prefix itself included). Splitting the full stream by
/// first-letter prefixes yields independent sub-streams that partition it.
pub fn reduced_words_with_prefix(prefix: &Word, max_len: usize) -> ReducedWords {
    let n = prefix.len();
    ReducedWords {
        prefix: prefix.letters().to_vec(),
        min_len: n.max(1),
        max_len,
        state: None,
        cur_len: 0,
        done: max_len < n || (max_len == 0),
    }
}

pub struct ReducedWords {
    prefix: Vec<Letter>,
    min_len: usize,
    max_len: usize,
    /// Suffix codes beyond the prefix for the current length.
    state: Option<Vec<u8>>,
    cur_len: usize,
    done: bool,
}

impl ReducedWords {
    fn smallest_after(prev: Option<u8>) -> u8 {
        match prev {
            Some(p) if p ^ 1 == 0 => 1,
            _ => 0,
        }
    }

    fn emit(&self) -> Word {
        let mut letters = self.prefix.clone();
        letters.extend(
            self.state
                .as_ref()
                .unwrap()
                .iter()
                .map(|&c| Letter::from_code(c)),
        );
        debug_assert!(is_reduced(&letters));
        Word { letters }
    }

    fn first_of_len(&mut self, len: usize) -> bool {
        // fill suffix positions with the smallest non-cancelling codes
        let extra = len - self.prefix.len();
        let mut state = Vec::with_capacity(extra);
        for i in 0..extra {
            let prev = if i == 0 {
                self.prefix.last().map(|l| l.code())
            } else {
                state.last().copied()
            };
            state.push(Self::smallest_after(prev));
        }
        self.state = Some(state);
        self.cur_len = len;
        true
    }

    fn advance_within_len(&mut self) -> bool {
        let state = self.state.as_mut().unwrap();
        let mut i = state.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            let prev = if i == 0 {
                self.prefix.last().map(|l| l.code())
            } else {
                Some(state[i - 1])
            };
            let forbidden = prev.map(|p| p ^ 1);
            let mut c = state[i] + 1;
            if Some(c) == forbidden {
                c += 1;
            }
            if c < 8 {
                state[i] = c;
                for j in (i + 1)..state.len() {
                    state[j] = Self::smallest_after(Some(state[j - 1]));
                }
                return true;
            }
        }
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.state.is_none() {
            self.first_of_len(self.min_len);
            return Some(self.emit());
        }
        if self.advance_within_len() {
            return Some(self.emit());
        }
        if self.cur_len < self.max_len {
            let next = self.cur_len + 1;
            self.first_of_len(next);
            return Some(self.emit());
        }
        self.done = true;
        None
    }
}
