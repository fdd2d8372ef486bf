//! Finite binary words.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

/// A finite binary word. `false` is the symbol `0`, `true` is `1`.
///
/// Ordering is lexicographic with a proper prefix sorting before its
/// extensions, so a sorted list of cone addresses is in left-to-right order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<bool>);

/// A character other than `0` or `1` was found while parsing a word.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid symbol {found:?} at offset {offset}: words are made of '0' and '1'")]
pub struct WordError {
    pub offset: usize,
    pub found: char,
}

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Word(bits.into_iter().collect())
    }

    /// Parses a string of `0`/`1` characters. The empty string is ε.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        text.chars()
            .enumerate()
            .map(|(offset, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(WordError { offset, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn bit(b: bool) -> Self {
        Word(alloc::vec![b])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `self · other`
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&other.0);
        Word(out)
    }

    /// `self · b`
    pub fn with(&self, b: bool) -> Word {
        let mut w = self.clone();
        w.push(b);
        w
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// True when one of the two words is a prefix of the other, i.e. the
    /// cones they address intersect.
    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Longest common prefix.
    pub fn lcp(&self, other: &Word) -> Word {
        let n = self.common_prefix_len(other);
        Word(self.0[..n].to_vec())
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// `prefix⁻¹ · self`, or `None` if `prefix` is not a prefix of `self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|s| Word(s.to_vec()))
    }

    /// Drops the first `n` symbols.
    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n.min(self.len())..].to_vec())
    }

    pub fn truncated(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    /// All words of exactly `len` symbols in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(
            len < usize::BITS as usize,
            "word length too large to enumerate"
        );
        (0usize..(1usize << len))
            .map(move |n| Word((0..len).rev().map(|i| (n >> i) & 1 == 1).collect()))
    }

    /// All words of length at most `len`, shortest first.
    pub fn all_up_to(len: usize) -> impl Iterator<Item = Word> {
        (0..=len).flat_map(Word::all_of_length)
    }
}

impl Deref for Word {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl FromIterator<bool> for Word {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("0110").to_string(), "0110");
        assert!(w("").is_empty());
        assert_eq!(
            Word::parse("012").unwrap_err(),
            WordError {
                offset: 2,
                found: '2'
            }
        );
    }

    #[test]
    fn prefix_relations() {
        assert!(w("01").is_prefix_of(&w("011")));
        assert!(w("").is_prefix_of(&w("1")));
        assert!(!w("1").is_prefix_of(&w("01")));
        assert!(w("011").comparable(&w("01")));
        assert!(!w("00").comparable(&w("01")));
        assert_eq!(w("0110").lcp(&w("0101")), w("01"));
        assert_eq!(w("0110").strip_prefix(&w("01")), Some(w("10")));
        assert_eq!(w("0110").strip_prefix(&w("1")), None);
    }

    #[test]
    fn ordering_is_left_to_right() {
        let mut v = alloc::vec![w("1"), w("00"), w("01"), w("0"), w("")];
        v.sort();
        assert_eq!(v, alloc::vec![w(""), w("0"), w("00"), w("01"), w("1")]);
    }

    #[test]
    fn enumeration() {
        let all: alloc::vec::Vec<_> = Word::all_of_length(2).collect();
        assert_eq!(all, alloc::vec![w("00"), w("01"), w("10"), w("11")]);
        assert_eq!(Word::all_up_to(3).count(), 15);
    }
}
