//! Finite bitstrings, the infinite threads they name, and the finite
//! partition of threads induced by a set of used prefixes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A finite sequence of bits. The empty bitstring renders as the empty string.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn empty() -> Self {
        Bitstring(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Bitstring(bits)
    }

    pub fn zeros(len: usize) -> Self {
        Bitstring(vec![false; len])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn pushed(&self, bit: bool) -> Self {
        let mut out = self.clone();
        out.push(bit);
        out
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Bitstring) -> Self {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Bitstring(bits)
    }

    /// `self ≼ other`.
    pub fn is_prefix_of(&self, other: &Bitstring) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Bitstring) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    /// True iff every bit is 0, i.e. the string is a prefix of `000…`.
    pub fn is_all_zeros(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    /// Splits a leading maximal `[01]*` token terminated by `terminator`.
    /// Returns the bitstring and the remainder after the terminator.
    pub fn split_prefix(s: &str, terminator: char) -> Option<(Bitstring, &str)> {
        let end = s
            .char_indices()
            .find(|&(_, c)| c != '0' && c != '1')
            .map(|(i, _)| i)
            .unwrap_or(s.len());
        let rest = &s[end..];
        let rest = rest.strip_prefix(terminator)?;
        let bits = s[..end].chars().map(|c| c == '1').collect();
        Some((Bitstring(bits), rest))
    }

    /// All bitstrings of length at most `max_len`, shortest first, then lexicographic.
    pub fn all_up_to(max_len: usize) -> Vec<Bitstring> {
        let mut out = vec![Bitstring::empty()];
        let mut layer = vec![Bitstring::empty()];
        for _ in 0..max_len {
            let next: Vec<Bitstring> = layer
                .iter()
                .flat_map(|b| [b.pushed(false), b.pushed(true)])
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "{self}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a bitstring: {0:?}")]
pub struct BitstringError(pub String);

impl FromStr for Bitstring {
    type Err = BitstringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" {
            return Ok(Bitstring::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BitstringError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bitstring)
    }
}

impl From<Bitstring> for String {
    fn from(b: Bitstring) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for Bitstring {
    type Error = BitstringError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// An infinite bitstring of the form `stem · 000…`.
///
/// Stems are normalized by stripping trailing zeros, so two representations
/// of the same thread compare equal.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThreadRep {
    stem: Bitstring,
}

impl ThreadRep {
    pub fn new(stem: Bitstring) -> Self {
        let mut bits = stem.0;
        while bits.last() == Some(&false) {
            bits.pop();
        }
        ThreadRep {
            stem: Bitstring(bits),
        }
    }

    /// The all-zeros thread `000…`.
    pub fn zeros() -> Self {
        ThreadRep::default()
    }

    pub fn stem(&self) -> &Bitstring {
        &self.stem
    }

    /// The `i`'th bit (0-based) of the infinite string.
    pub fn bit(&self, i: usize) -> bool {
        self.stem.0.get(i).copied().unwrap_or(false)
    }

    /// `u ≼ self`.
    pub fn has_prefix(&self, u: &Bitstring) -> bool {
        u.0.iter().enumerate().all(|(i, &b)| self.bit(i) == b)
    }
}

impl fmt::Debug for ThreadRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}0…", self.stem)
    }
}

impl fmt::Display for ThreadRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Representatives of the classes of infinite bitstrings that agree on which
/// members of `used` are their prefixes.
///
/// Every infinite bitstring leaves the prefix-closure of `used ∪ {ε}` at some
/// node `v` through a missing child `v·b`; the thread `v·b·000…` then has the
/// same prefix chain. One representative is kept per distinct chain.
pub fn enumerate_thread_classes<'a, I>(used: I) -> Vec<ThreadRep>
where
    I: IntoIterator<Item = &'a Bitstring>,
{
    let used: BTreeSet<&Bitstring> = used.into_iter().collect();
    let mut closure: BTreeSet<Bitstring> = BTreeSet::new();
    closure.insert(Bitstring::empty());
    for w in &used {
        for k in 1..=w.len() {
            closure.insert(Bitstring(w.0[..k].to_vec()));
        }
    }
    let mut by_chain: BTreeMap<Vec<&Bitstring>, ThreadRep> = BTreeMap::new();
    for v in &closure {
        for b in [false, true] {
            let exit = v.pushed(b);
            if closure.contains(&exit) {
                continue;
            }
            let rep = ThreadRep::new(exit);
            let chain: Vec<&Bitstring> = used
                .iter()
                .copied()
                .filter(|w| rep.has_prefix(w))
                .collect();
            by_chain
                .entry(chain)
                .and_modify(|r| {
                    if rep < *r {
                        *r = rep.clone();
                    }
                })
                .or_insert(rep);
        }
    }
    let mut reps: Vec<ThreadRep> = by_chain.into_values().collect();
    reps.sort();
    reps
}

/// The cartesian product of per-slot representative lists, enumerated in
/// lexicographic order. Fails with the product size when it exceeds `cap`.
pub fn class_vectors(slots: &[Vec<ThreadRep>], cap: usize) -> Result<Vec<Vec<ThreadRep>>, usize> {
    let total = slots
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len().max(1)))
        .unwrap_or(usize::MAX);
    if total > cap {
        return Err(total);
    }
    let mut out: Vec<Vec<ThreadRep>> = vec![Vec::with_capacity(slots.len())];
    for slot in slots {
        let mut next = Vec::with_capacity(out.len() * slot.len());
        for prefix in &out {
            for rep in slot {
                let mut v = prefix.clone();
                v.push(rep.clone());
                next.push(v);
            }
        }
        out = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_relation() {
        assert!(bs("").is_prefix_of(&bs("0101")));
        assert!(bs("01").is_prefix_of(&bs("0101")));
        assert!(!bs("011").is_prefix_of(&bs("0101")));
        assert!(bs("01").is_proper_prefix_of(&bs("010")));
        assert!(!bs("01").is_proper_prefix_of(&bs("01")));
    }

    #[test]
    fn split_prefix_takes_maximal_token() {
        assert_eq!(
            Bitstring::split_prefix("001.beta", '.'),
            Some((bs("001"), "beta"))
        );
        assert_eq!(Bitstring::split_prefix(".m", '.'), Some((bs(""), "m")));
        assert_eq!(Bitstring::split_prefix("01.1.m", '.'), Some((bs("01"), "1.m")));
        assert_eq!(Bitstring::split_prefix("0m.x", '.'), None);
        assert_eq!(Bitstring::split_prefix("m", '.'), None);
    }

    #[test]
    fn thread_reps_normalize_trailing_zeros() {
        assert_eq!(ThreadRep::new(bs("0100")), ThreadRep::new(bs("01")));
        assert_eq!(ThreadRep::new(bs("000")), ThreadRep::zeros());
        assert!(ThreadRep::new(bs("1")).has_prefix(&bs("1000")));
        assert!(!ThreadRep::new(bs("1")).has_prefix(&bs("11")));
    }

    #[test]
    fn no_used_prefixes_gives_one_class() {
        let reps = enumerate_thread_classes(std::iter::empty());
        assert_eq!(reps, vec![ThreadRep::zeros()]);
    }

    fn chain_of(used: &[Bitstring], x: &[bool]) -> Vec<Bitstring> {
        used.iter()
            .filter(|w| w.len() <= x.len() && w.bits() == &x[..w.len()])
            .cloned()
            .collect()
    }

    #[test]
    fn eps_and_zero_yields_two_classes_matching_brute_force() {
        let used = vec![bs(""), bs("0")];
        let reps = enumerate_thread_classes(&used);
        // brute force over all depth-3 prefixes
        let mut chains = BTreeSet::new();
        for x in Bitstring::all_up_to(3).into_iter().filter(|b| b.len() == 3) {
            chains.insert(chain_of(&used, x.bits()));
        }
        let rep_chains: BTreeSet<Vec<Bitstring>> = reps
            .iter()
            .map(|r| used.iter().filter(|w| r.has_prefix(w)).cloned().collect())
            .collect();
        assert_eq!(chains, rep_chains);
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn class_vectors_respects_cap() {
        let slot = vec![ThreadRep::zeros(), ThreadRep::new(bs("1"))];
        assert_eq!(class_vectors(&[slot.clone(), slot.clone()], 10).unwrap().len(), 4);
        assert_eq!(class_vectors(&[slot.clone(), slot.clone()], 3), Err(4));
        assert_eq!(class_vectors(&[], 1).unwrap(), vec![Vec::<ThreadRep>::new()]);
    }
}
