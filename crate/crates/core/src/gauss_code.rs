//! Signed Gauss codes: the textual stand-in for a knot diagram.
//!
//! A code is a cyclic word of `2n` visits. Each crossing id in `1..=n` is
//! visited twice, once on the over strand and once on the under strand, and
//! both visits carry the crossing's sign. Text form is whitespace-separated
//! tokens such as `O1+ U2- ...`; the empty word is the unknot.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    Over,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// One passage of the knot through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Visit {
    /// 1-based crossing id.
    pub crossing: usize,
    pub layer: Layer,
    pub sign: Sign,
}

impl Visit {
    pub fn new(crossing: usize, layer: Layer, sign: Sign) -> Self {
        Self {
            crossing,
            layer,
            sign,
        }
    }
}

impl fmt::Display for Visit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layer = match self.layer {
            Layer::Over => 'O',
            Layer::Under => 'U',
        };
        let sign = match self.sign {
            Sign::Positive => '+',
            Sign::Negative => '-',
        };
        write!(f, "{layer}{}{sign}", self.crossing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("crossing {crossing} appears {count} times (expected 2)")]
    WrongMultiplicity { crossing: usize, count: usize },
    #[error("crossing {crossing} appears twice as {layer:?}")]
    RepeatedLayer { crossing: usize, layer: Layer },
    #[error("crossing {crossing} has inconsistent signs")]
    InconsistentSign { crossing: usize },
    #[error("crossing ids are not contiguous 1..{n}: {missing} is missing")]
    NonContiguous { n: usize, missing: usize },
    #[error("crossing id 0 is not allowed (ids are 1-based)")]
    ZeroId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("malformed token {token:?} at position {index}")]
    Syntax { token: String, index: usize },
    #[error("invalid Gauss code: {0}")]
    Invalid(#[from] ValidationError),
    #[error("permutation acts on {perm} crossings but the code has {code}")]
    SizeMismatch { perm: usize, code: usize },
    #[error("insertion position {pos} exceeds word length {len}")]
    InsertPosition { pos: usize, len: usize },
}

/// Validated signed Gauss code. Equality is up to cyclic rotation.
#[derive(Debug, Clone)]
pub struct SignedGaussCode {
    word: Vec<Visit>,
    n: usize,
}

impl SignedGaussCode {
    pub fn unknot() -> Self {
        Self {
            word: Vec::new(),
            n: 0,
        }
    }

    pub fn new(word: Vec<Visit>) -> Result<Self, ValidationError> {
        let max_id = word.iter().map(|v| v.crossing).max().unwrap_or(0);
        if word.iter().any(|v| v.crossing == 0) {
            return Err(ValidationError::ZeroId);
        }
        // Slot per id: the first visit seen, plus a count.
        let mut seen: Vec<(usize, Option<Visit>)> = vec![(0, None); max_id + 1];
        for v in &word {
            let (count, first) = &mut seen[v.crossing];
            *count += 1;
            match first {
                None => *first = Some(*v),
                Some(prev) if *count == 2 => {
                    if prev.layer == v.layer {
                        return Err(ValidationError::RepeatedLayer {
                            crossing: v.crossing,
                            layer: v.layer,
                        });
                    }
                    if prev.sign != v.sign {
                        return Err(ValidationError::InconsistentSign {
                            crossing: v.crossing,
                        });
                    }
                }
                Some(_) => {}
            }
        }
        for (crossing, &(count, _)) in seen.iter().enumerate().skip(1) {
            if count != 0 && count != 2 {
                return Err(ValidationError::WrongMultiplicity { crossing, count });
            }
        }
        let n = word.len() / 2;
        if let Some(missing) = (1..=max_id).find(|&id| seen[id].0 == 0) {
            return Err(ValidationError::NonContiguous { n: max_id, missing });
        }
        Ok(Self { word, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[Visit] {
        &self.word
    }

    pub fn is_unknot_word(&self) -> bool {
        self.word.is_empty()
    }

    /// Sign of crossing `id` (1-based).
    pub fn sign(&self, id: usize) -> Sign {
        self.word
            .iter()
            .find(|v| v.crossing == id)
            .map(|v| v.sign)
            .unwrap_or_else(|| panic!("crossing {id} out of range 1..={}", self.n))
    }

    /// Signs indexed by `id - 1`.
    pub fn signs(&self) -> Vec<Sign> {
        let mut signs = vec![Sign::Positive; self.n];
        for v in &self.word {
            signs[v.crossing - 1] = v.sign;
        }
        signs
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i32 {
        self.signs().iter().map(|s| s.value()).sum()
    }

    /// Word positions of the two visits of each crossing, indexed by `id - 1`,
    /// in increasing order.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut occ = vec![(usize::MAX, usize::MAX); self.n];
        for (pos, v) in self.word.iter().enumerate() {
            let slot = &mut occ[v.crossing - 1];
            if slot.0 == usize::MAX {
                slot.0 = pos;
            } else {
                slot.1 = pos;
            }
        }
        occ
    }

    /// Replaces every crossing id `i` by `perm(i)`; word order is kept.
    pub fn relabel(&self, perm: &CrossingPermutation) -> Result<Self, GaussError> {
        if perm.len() != self.n {
            return Err(GaussError::SizeMismatch {
                perm: perm.len(),
                code: self.n,
            });
        }
        let word = self
            .word
            .iter()
            .map(|v| Visit {
                crossing: perm.apply(v.crossing),
                ..*v
            })
            .collect();
        Ok(Self { word, n: self.n })
    }

    /// Splices `right` into `self` at word position `insert_pos`. The right
    /// code's ids are shifted by `self.n()` and its word is inserted as one
    /// contiguous run.
    pub fn connect_sum(&self, right: &Self, insert_pos: usize) -> Result<Self, GaussError> {
        if insert_pos > self.word.len() {
            return Err(GaussError::InsertPosition {
                pos: insert_pos,
                len: self.word.len(),
            });
        }
        let offset = self.n;
        let mut word = Vec::with_capacity(self.word.len() + right.word.len());
        word.extend_from_slice(&self.word[..insert_pos]);
        word.extend(right.word.iter().map(|v| Visit {
            crossing: v.crossing + offset,
            ..*v
        }));
        word.extend_from_slice(&self.word[insert_pos..]);
        Ok(Self {
            word,
            n: self.n + right.n,
        })
    }

    /// Reflection of the diagram in a line of the projection plane: every
    /// crossing changes sign, the word is unchanged.
    pub fn mirror(&self) -> Self {
        let word = self
            .word
            .iter()
            .map(|v| Visit {
                sign: v.sign.flipped(),
                ..*v
            })
            .collect();
        Self { word, n: self.n }
    }

    /// The same cyclic word read from a different basepoint.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut word = self.word.clone();
        if !word.is_empty() {
            let k = shift % word.len();
            word.rotate_left(k);
        }
        Self { word, n: self.n }
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl PartialEq for SignedGaussCode {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.word.len() != other.word.len() {
            return false;
        }
        if self.word.is_empty() {
            return true;
        }
        let len = self.word.len();
        (0..len).any(|shift| (0..len).all(|k| self.word[(k + shift) % len] == other.word[k]))
    }
}

impl Eq for SignedGaussCode {}

impl fmt::Display for SignedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.word.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn parse_token(token: &str) -> Option<Visit> {
    let bytes = token.as_bytes();
    if bytes.len() < 3 {
        return None;
    }
    let layer = match bytes[0] {
        b'O' => Layer::Over,
        b'U' => Layer::Under,
        _ => return None,
    };
    let sign = match bytes[bytes.len() - 1] {
        b'+' => Sign::Positive,
        b'-' => Sign::Negative,
        _ => return None,
    };
    let digits = &token[1..token.len() - 1];
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let crossing = digits.parse().ok()?;
    Some(Visit {
        crossing,
        layer,
        sign,
    })
}

/// Parses the whitespace-separated token form. Empty (or all-whitespace)
/// input is the unknot.
pub fn parse_gauss(text: &str) -> Result<SignedGaussCode, GaussError> {
    let word = text
        .split_ascii_whitespace()
        .enumerate()
        .map(|(index, token)| {
            parse_token(token).ok_or_else(|| GaussError::Syntax {
                token: token.to_string(),
                index,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignedGaussCode::new(word)?)
}

impl FromStr for SignedGaussCode {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_gauss(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("image {image} is out of range 1..={n}")]
    OutOfRange { image: usize, n: usize },
    #[error("image {image} is hit twice")]
    NotInjective { image: usize },
}

/// Bijection on crossing ids `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossingPermutation {
    // images[i] = perm(i + 1) - 1
    images: Vec<usize>,
}

impl CrossingPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The transposition exchanging ids `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, PermutationError> {
        for id in [i, j] {
            if id == 0 || id > n {
                return Err(PermutationError::OutOfRange { image: id, n });
            }
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, j - 1);
        Ok(Self { images })
    }

    /// `images[k]` is the image of id `k + 1`; all values 1-based.
    pub fn from_images(images: &[usize]) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &image in images {
            if image == 0 || image > n {
                return Err(PermutationError::OutOfRange { image, n });
            }
            if std::mem::replace(&mut hit[image - 1], true) {
                return Err(PermutationError::NotInjective { image });
            }
        }
        Ok(Self {
            images: images.iter().map(|&i| i - 1).collect(),
        })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.iter().enumerate().all(|(k, &v)| k == v)
        });
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 1-based id `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub(crate) fn apply_zero_based(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 1-based images in id order.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Self { images: inv }
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(self.len(), inner.len(), "permutation sizes differ");
        Self {
            images: inner.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// Transpositions `(i, j)` (1-based) whose successive application,
    /// first to last, yields this permutation.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        // (a1 a2 ... am) = (a1 a2)∘(a2 a3)∘...∘(am-1 am); rightmost acts first.
        let mut out = Vec::new();
        for cycle in self.cycles() {
            out.extend(cycle.windows(2).rev().map(|w| (w[0], w[1])));
        }
        out
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest id.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if done[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !done[k] {
                done[k] = true;
                cycle.push(k + 1);
                k = self.images[k];
            }
            cycles.push(cycle);
        }
        cycles
    }
}

impl fmt::Display for CrossingPermutation {
    /// Cycle notation, e.g. `(1 3)`; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}
