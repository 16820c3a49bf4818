//! Set algebra over finite sets of non-negative integers.
//!
//! [`IntSet`] is a bit-vector over `[0, bound]`. Sumsets are computed by
//! shift-or accumulation: for each `a` in `A`, `B` shifted left by `a` is
//! OR-ed into the result. The compatibility machinery ([`CompatibilityTable`]
//! and friends) enumerates `A x B` explicitly and groups pairs by their sum,
//! which gives an independent route to the sumset cardinality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

/// Largest element representable when no bound is configured.
pub const DEFAULT_UNIVERSE_BOUND: u32 = 4096;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("set labels must be non-empty")]
    Empty,
    #[error("element {element} exceeds the universe bound {bound}")]
    BoundExceeded { element: u64, bound: u32 },
    #[error("duplicate element {0} in set literal")]
    Duplicate(u32),
    #[error("set literal must list elements in ascending order ({prev} then {next})")]
    Unsorted { prev: u32, next: u32 },
    #[error("malformed set literal {literal:?}: {reason}")]
    Syntax { literal: String, reason: String },
}

/// A non-empty finite set of non-negative integers, each at most `bound`.
///
/// Equality, hashing and ordering look only at the elements; the bound is
/// configuration carried along so that derived sets can be checked against it.
#[derive(Clone)]
pub struct IntSet {
    // No trailing zero words.
    words: SmallVec<[u64; 2]>,
    len: usize,
    bound: u32,
}

impl IntSet {
    /// Builds a set from elements in any order; repeats collapse.
    pub fn new<I: IntoIterator<Item = u32>>(elements: I, bound: u32) -> Result<Self, SetError> {
        let mut words: SmallVec<[u64; 2]> = SmallVec::new();
        for x in elements {
            if x > bound {
                return Err(SetError::BoundExceeded {
                    element: u64::from(x),
                    bound,
                });
            }
            let (w, b) = (x as usize / WORD_BITS, x as usize % WORD_BITS);
            if words.len() <= w {
                words.resize(w + 1, 0);
            }
            words[w] |= 1u64 << b;
        }
        Self::from_words(words, bound)
    }

    pub fn singleton(x: u32, bound: u32) -> Result<Self, SetError> {
        Self::new([x], bound)
    }

    /// Builds a set whose element `i` is present iff bit `i` of `mask` is set.
    pub fn from_mask(mask: u64, bound: u32) -> Result<Self, SetError> {
        if mask != 0 {
            let top = 63 - mask.leading_zeros();
            if top > bound {
                return Err(SetError::BoundExceeded {
                    element: u64::from(top),
                    bound,
                });
            }
        }
        let mut words = SmallVec::new();
        words.push(mask);
        Self::from_words(words, bound)
    }

    fn from_words(mut words: SmallVec<[u64; 2]>, bound: u32) -> Result<Self, SetError> {
        while words.last() == Some(&0) {
            words.pop();
        }
        if words.is_empty() {
            return Err(SetError::Empty);
        }
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(IntSet { words, len, bound })
    }

    /// Parses a `{a,b,c}` literal; elements must be ascending and distinct.
    pub fn parse_with_bound(text: &str, bound: u32) -> Result<Self, SetError> {
        let syntax = |reason: &str| SetError::Syntax {
            literal: text.to_string(),
            reason: reason.to_string(),
        };
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| syntax("expected braces around the elements"))?;
        if inner.trim().is_empty() {
            return Err(SetError::Empty);
        }
        let mut elements: Vec<u32> = Vec::new();
        for token in inner.split(',') {
            let token = token.trim();
            if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
                return Err(syntax("elements must be non-negative decimal integers"));
            }
            let value: u64 = token.parse().map_err(|_| syntax("element out of range"))?;
            if value > u64::from(bound) {
                return Err(SetError::BoundExceeded {
                    element: value,
                    bound,
                });
            }
            let value = value as u32;
            if let Some(&prev) = elements.last() {
                match prev.cmp(&value) {
                    Ordering::Equal => return Err(SetError::Duplicate(value)),
                    Ordering::Greater => return Err(SetError::Unsorted { prev, next: value }),
                    Ordering::Less => {}
                }
            }
            elements.push(value);
        }
        Self::new(elements, bound)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for the `len`/`is_empty` pairing clippy expects.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_singleton(&self) -> bool {
        self.len == 1
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Returns the same elements under a different bound.
    pub fn with_bound(&self, bound: u32) -> Result<Self, SetError> {
        if self.largest() > bound {
            return Err(SetError::BoundExceeded {
                element: u64::from(self.largest()),
                bound,
            });
        }
        Ok(IntSet {
            bound,
            ..self.clone()
        })
    }

    pub fn smallest(&self) -> u32 {
        let (i, w) = self
            .words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .expect("IntSet is never empty");
        (i * WORD_BITS) as u32 + w.trailing_zeros()
    }

    pub fn largest(&self) -> u32 {
        let i = self.words.len() - 1;
        (i * WORD_BITS) as u32 + (63 - self.words[i].leading_zeros())
    }

    pub fn contains(&self, x: u32) -> bool {
        let (w, b) = (x as usize / WORD_BITS, x as usize % WORD_BITS);
        self.words
            .get(w)
            .is_some_and(|word| word & (1u64 << b) != 0)
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let base = (i * WORD_BITS) as u32;
            BitIter(word).map(move |b| base + b)
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// `{a + b : a in self, b in other}`, checked against the smaller of
    /// the two bounds.
    pub fn sumset(&self, other: &IntSet) -> Result<IntSet, SetError> {
        let bound = self.bound.min(other.bound);
        let top = u64::from(self.largest()) + u64::from(other.largest());
        if top > u64::from(bound) {
            return Err(SetError::BoundExceeded {
                element: top,
                bound,
            });
        }
        // Shift the larger set, iterate the smaller one.
        let (short, long) = if self.len <= other.len {
            (self, other)
        } else {
            (other, self)
        };
        let mut out: SmallVec<[u64; 2]> = SmallVec::from_elem(0, top as usize / WORD_BITS + 1);
        for shift in short.iter() {
            shift_or(&mut out, &long.words, shift as usize);
        }
        Ok(IntSet::from_words(out, bound).expect("sumset of non-empty sets is non-empty"))
    }
}

fn shift_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let (word_shift, bit_shift) = (shift / WORD_BITS, shift % WORD_BITS);
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let j = i + word_shift;
        dst[j] |= w << bit_shift;
        if bit_shift > 0 && j + 1 < dst.len() {
            dst[j + 1] |= w >> (WORD_BITS - bit_shift);
        }
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl PartialEq for IntSet {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl Eq for IntSet {}

impl Hash for IntSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl Ord for IntSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for IntSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with_bound(s, DEFAULT_UNIVERSE_BOUND)
    }
}

// Serialized as a plain ascending array. On the way back in, the bound is
// the default or the largest element, whichever is greater.
impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for IntSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elements = Vec::<u32>::deserialize(deserializer)?;
        let bound = elements
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            .max(DEFAULT_UNIVERSE_BOUND);
        IntSet::new(elements, bound).map_err(serde::de::Error::custom)
    }
}

/// Pairs of `A x B` sharing the sum `sum`, ascending by first coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityClass {
    pub sum: u32,
    pub pairs: Vec<(u32, u32)>,
}

impl CompatibilityClass {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// Pairs beyond the one representative that contributes `sum`.
    pub fn neglecting_number(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.pairs.len() == 1
    }
}

/// The partition of `A x B` into compatibility classes, ascending by sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityTable {
    left: IntSet,
    right: IntSet,
    classes: Vec<CompatibilityClass>,
}

impl CompatibilityTable {
    pub fn new(left: &IntSet, right: &IntSet) -> Result<Self, SetError> {
        let bound = left.bound.min(right.bound);
        let top = u64::from(left.largest()) + u64::from(right.largest());
        if top > u64::from(bound) {
            return Err(SetError::BoundExceeded {
                element: top,
                bound,
            });
        }
        let mut by_sum: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
        for a in left.iter() {
            for b in right.iter() {
                by_sum.entry(a + b).or_default().push((a, b));
            }
        }
        let classes = by_sum
            .into_iter()
            .map(|(sum, pairs)| CompatibilityClass { sum, pairs })
            .collect();
        Ok(CompatibilityTable {
            left: left.clone(),
            right: right.clone(),
            classes,
        })
    }

    pub fn left(&self) -> &IntSet {
        &self.left
    }

    pub fn right(&self) -> &IntSet {
        &self.right
    }

    pub fn classes(&self) -> &[CompatibilityClass] {
        &self.classes
    }

    pub fn class(&self, sum: u32) -> Option<&CompatibilityClass> {
        self.classes
            .binary_search_by_key(&sum, |c| c.sum)
            .ok()
            .map(|i| &self.classes[i])
    }

    /// Number of distinct classes.
    pub fn index(&self) -> usize {
        self.classes.len()
    }

    /// Sum over classes of `size - 1`.
    pub fn neglecting_number(&self) -> usize {
        self.classes
            .iter()
            .map(CompatibilityClass::neglecting_number)
            .sum()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes
            .iter()
            .map(CompatibilityClass::size)
            .max()
            .unwrap_or(0)
    }

    /// Some class reaches `min(|A|, |B|)` pairs.
    pub fn has_saturated_class(&self) -> bool {
        self.max_class_size() == self.left.len().min(self.right.len())
    }

    pub fn all_trivial(&self) -> bool {
        self.classes.iter().all(CompatibilityClass::is_trivial)
    }
}

pub fn sumset(a: &IntSet, b: &IntSet) -> Result<IntSet, SetError> {
    a.sumset(b)
}

pub fn compatibility_table(a: &IntSet, b: &IntSet) -> Result<CompatibilityTable, SetError> {
    CompatibilityTable::new(a, b)
}

pub fn compatibility_index(a: &IntSet, b: &IntSet) -> Result<usize, SetError> {
    Ok(CompatibilityTable::new(a, b)?.index())
}

pub fn neglecting_number(a: &IntSet, b: &IntSet) -> Result<usize, SetError> {
    Ok(CompatibilityTable::new(a, b)?.neglecting_number())
}

pub fn max_class_size(a: &IntSet, b: &IntSet) -> Result<usize, SetError> {
    Ok(CompatibilityTable::new(a, b)?.max_class_size())
}

pub fn has_saturated_class(a: &IntSet, b: &IntSet) -> Result<bool, SetError> {
    Ok(CompatibilityTable::new(a, b)?.has_saturated_class())
}
