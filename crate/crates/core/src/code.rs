//! Prefix codes over `{0,1}` and the exchange tables of Thompson's group V.
//!
//! A finite set of words is a *complete prefix code* when every infinite
//! sequence starts with exactly one of them, i.e. the cones `I_α` partition
//! the Cantor set.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("empty prefix code")]
    Empty,
    #[error("{0} is a prefix of {1}: code is not prefix-free")]
    NotPrefixFree(Word, Word),
    #[error("cone {0} is not covered: code is not complete")]
    Incomplete(Word),
    #[error("domain has {domain} cones but range has {range}")]
    SizeMismatch { domain: usize, range: usize },
}

/// Sorts `words` and checks that no word is a prefix of another.
fn sorted_antichain(words: &[Word]) -> Result<Vec<Word>, CodeError> {
    let mut sorted = words.to_vec();
    sorted.sort();
    // In sorted order a prefix relation always shows up between neighbours.
    for p in sorted.windows(2) {
        if p[0].is_prefix_of(&p[1]) {
            return Err(CodeError::NotPrefixFree(p[0].clone(), p[1].clone()));
        }
    }
    Ok(sorted)
}

fn proper_prefixes(words: &[Word]) -> BTreeSet<Word> {
    words
        .iter()
        .flat_map(|w| (0..w.len()).map(move |n| w.truncated(n)))
        .collect()
}

/// Checks that `words` is a complete prefix code.
pub fn check_complete_code(words: &[Word]) -> Result<(), CodeError> {
    if words.is_empty() {
        return Err(CodeError::Empty);
    }
    let sorted = sorted_antichain(words)?;
    let inner = proper_prefixes(&sorted);
    let leaves: BTreeSet<&Word> = sorted.iter().collect();
    for u in &inner {
        for b in [false, true] {
            let child = u.with(b);
            if !inner.contains(&child) && !leaves.contains(&child) {
                return Err(CodeError::Incomplete(child));
            }
        }
    }
    Ok(())
}

pub fn is_complete_code(words: &[Word]) -> bool {
    check_complete_code(words).is_ok()
}

pub fn is_antichain(words: &[Word]) -> bool {
    sorted_antichain(words).is_ok()
}

/// The cones that, together with the antichain `words`, partition the
/// Cantor set. Sorted; empty when `words` is already complete.
pub fn complement(words: &[Word]) -> Result<Vec<Word>, CodeError> {
    if words.is_empty() {
        return Ok(alloc::vec![Word::empty()]);
    }
    let sorted = sorted_antichain(words)?;
    let inner = proper_prefixes(&sorted);
    let leaves: BTreeSet<&Word> = sorted.iter().collect();
    let mut out: Vec<Word> = inner
        .iter()
        .flat_map(|u| [u.with(false), u.with(true)])
        .filter(|c| !inner.contains(c) && !leaves.contains(c))
        .collect();
    out.sort();
    Ok(out)
}

/// Replaces the lexicographically last word `w` by `w0, w1`.
pub fn split_last(code: &mut Vec<Word>) {
    code.sort();
    if let Some(last) = code.pop() {
        code.push(last.with(false));
        code.push(last.with(true));
    }
}

/// A complete prefix code of `k ≥ 1` words below `root`.
pub fn subdivide(root: &Word, k: usize) -> Vec<Word> {
    assert!(k >= 1);
    let mut code = alloc::vec![root.clone()];
    while code.len() < k {
        split_last(&mut code);
    }
    code
}

/// A bijection between two complete prefix codes: `αζ ↦ βζ` for each rule
/// `(α, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeTable {
    rules: Vec<(Word, Word)>,
}

impl ExchangeTable {
    pub fn new(mut rules: Vec<(Word, Word)>) -> Result<Self, CodeError> {
        let domain: Vec<Word> = rules.iter().map(|r| r.0.clone()).collect();
        let range: Vec<Word> = rules.iter().map(|r| r.1.clone()).collect();
        check_complete_code(&domain)?;
        check_complete_code(&range)?;
        rules.sort();
        Ok(ExchangeTable { rules })
    }

    /// Pairs the two codes in the given order.
    pub fn from_codes(domain: Vec<Word>, range: Vec<Word>) -> Result<Self, CodeError> {
        if domain.len() != range.len() {
            return Err(CodeError::SizeMismatch {
                domain: domain.len(),
                range: range.len(),
            });
        }
        Self::new(domain.into_iter().zip(range).collect())
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    /// The table of the inverse map.
    pub fn flipped(&self) -> Self {
        let mut rules: Vec<_> = self
            .rules
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        rules.sort();
        ExchangeTable { rules }
    }

    /// Image of a finite word, when the word is long enough to pick a rule.
    pub fn apply(&self, w: &Word) -> Option<Word> {
        self.rules
            .iter()
            .find_map(|(a, b)| w.strip_prefix(a).map(|rest| b.concat(&rest)))
    }
}

impl fmt::Display for ExchangeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::w;
    use alloc::string::ToString;
    use alloc::vec;

    fn ws(v: &[&str]) -> Vec<Word> {
        v.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn complete_codes() {
        assert!(is_complete_code(&ws(&[""])));
        assert!(is_complete_code(&ws(&["00", "01", "1"])));
        assert_eq!(
            check_complete_code(&ws(&["00", "1"])),
            Err(CodeError::Incomplete(w("01")))
        );
        assert_eq!(
            check_complete_code(&ws(&["0", "01", "1"])),
            Err(CodeError::NotPrefixFree(w("0"), w("01")))
        );
        assert_eq!(check_complete_code(&[]), Err(CodeError::Empty));
    }

    #[test]
    fn complement_of_antichain() {
        assert_eq!(complement(&ws(&["01"])).unwrap(), ws(&["00", "1"]));
        assert_eq!(complement(&ws(&["0", "1"])).unwrap(), Vec::<Word>::new());
        assert_eq!(complement(&ws(&["00", "11"])).unwrap(), ws(&["01", "10"]));
        assert_eq!(complement(&[]).unwrap(), ws(&[""]));
    }

    #[test]
    fn subdivision_splits_last() {
        assert_eq!(subdivide(&w("11"), 1), ws(&["11"]));
        assert_eq!(subdivide(&w("11"), 3), ws(&["110", "1110", "1111"]));
    }

    #[test]
    fn exchange_table() {
        let t = ExchangeTable::new(vec![
            (w("00"), w("0")),
            (w("01"), w("10")),
            (w("1"), w("11")),
        ])
        .unwrap();
        assert_eq!(t.apply(&w("01101")), Some(w("10101")));
        assert_eq!(t.apply(&w("0")), None);
        assert_eq!(t.flipped().apply(&w("10101")), Some(w("01101")));
        assert_eq!(t.to_string(), "00->0, 01->10, 1->11");
        assert!(ExchangeTable::new(vec![(w("0"), w("1")), (w("1"), w("1"))]).is_err());
    }
}
