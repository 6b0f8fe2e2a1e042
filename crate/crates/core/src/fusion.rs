//! Fusion and defusion: interleaving several bitstrings into one and back.
//!
//! Bit `j` of the `i`'th component (both 1-based) sits at position
//! `j·n − n + i` of a fusion. A fusion must be long enough to carry every
//! bit of every component; the remaining positions below that length are
//! free and enumerated in every combination.

use crate::bitstring::Bitstring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("fusion arity must be at least 1")]
pub struct ZeroArity;

/// Length of every fusion of `xs`.
pub fn fusion_len(xs: &[Bitstring]) -> usize {
    let n = xs.len();
    xs.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_empty())
        .map(|(i, x)| (x.len() - 1) * n + i + 1)
        .max()
        .unwrap_or(0)
}

/// Number of unconstrained positions in a fusion of `xs`; there are
/// `2^free_positions(xs)` fusions.
pub fn free_positions(xs: &[Bitstring]) -> usize {
    fusion_len(xs) - xs.iter().map(Bitstring::len).sum::<usize>()
}

/// All fusions of `xs`, in lexicographic order.
pub fn fuse_n(xs: &[Bitstring]) -> Result<Vec<Bitstring>, ZeroArity> {
    let n = xs.len();
    if n == 0 {
        return Err(ZeroArity);
    }
    let len = fusion_len(xs);
    let mut forced: Vec<Option<bool>> = vec![None; len];
    for (i, x) in xs.iter().enumerate() {
        for (j, &b) in x.bits().iter().enumerate() {
            forced[j * n + i] = Some(b);
        }
    }
    let free: Vec<usize> = (0..len).filter(|&p| forced[p].is_none()).collect();
    let base: Vec<bool> = forced.iter().map(|b| b.unwrap_or(false)).collect();
    // the first free position is the most significant bit of `fill`
    let out = (0u64..1 << free.len())
        .map(|fill| {
            let mut bits = base.clone();
            for (k, &p) in free.iter().enumerate() {
                bits[p] = fill >> (free.len() - 1 - k) & 1 == 1;
            }
            Bitstring::from_bits(bits)
        })
        .collect();
    Ok(out)
}

/// The `n`-defusion of `z`: component `i` collects the bits at positions
/// congruent to `i` modulo `n`.
pub fn defuse_n(z: &Bitstring, n: usize) -> Result<Vec<Bitstring>, ZeroArity> {
    if n == 0 {
        return Err(ZeroArity);
    }
    let mut out = vec![Bitstring::empty(); n];
    for (p, &b) in z.bits().iter().enumerate() {
        out[p % n].push(b);
    }
    Ok(out)
}

pub fn fuse2(x: &Bitstring, y: &Bitstring) -> Vec<Bitstring> {
    fuse_n(&[x.clone(), y.clone()]).expect("arity 2")
}

pub fn defuse2(z: &Bitstring) -> (Bitstring, Bitstring) {
    let mut parts = defuse_n(z, 2).expect("arity 2").into_iter();
    let x = parts.next().unwrap_or_default();
    let y = parts.next().unwrap_or_default();
    (x, y)
}
