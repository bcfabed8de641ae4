//! Set partitions of `[n]`, generic words, the involutions `tau_i` and the orbit
//! partition `o(s)`.
//!
//! A partition is stored as its restricted-growth string: position `x` (1-based)
//! carries the id of its block, and block ids are numbered by first occurrence,
//! which is the same as ordering blocks by their smallest element.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::word::{LengthSeq, Word};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// A partition of `[n]` in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    labels: Vec<usize>,
    blocks: usize,
}

impl SetPartition {
    /// Canonicalizes an arbitrary labelling: positions with equal labels share a block.
    pub fn from_labels<T: Eq + Copy>(labels: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let canon = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(k) => k,
                None => {
                    seen.push(*l);
                    seen.len() - 1
                }
            })
            .collect();
        SetPartition {
            labels: canon,
            blocks: seen.len(),
        }
    }

    /// Faster canonicalization for labels that are small integers.
    pub fn from_dense_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().max().map_or(0, |m| m + 1);
        let mut remap = vec![usize::MAX; bound];
        let mut next = 0;
        let canon = labels
            .iter()
            .map(|&l| {
                if remap[l] == usize::MAX {
                    remap[l] = next;
                    next += 1;
                }
                remap[l]
            })
            .collect();
        SetPartition {
            labels: canon,
            blocks: next,
        }
    }

    /// Builds a partition of `[n]` from 1-based blocks.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition);
            }
            for &x in block {
                if x == 0 || x > n || labels[x - 1] != usize::MAX {
                    return Err(Error::InvalidPartition);
                }
                labels[x - 1] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidPartition);
        }
        Ok(SetPartition::from_dense_labels(&labels))
    }

    /// The equal-letter partition of a word.
    pub fn of_word(w: &Word) -> Self {
        let labels: Vec<usize> = w.letters().iter().map(|&c| usize::from(c)).collect();
        SetPartition::from_dense_labels(&labels)
    }

    /// The partition into singletons.
    pub fn discrete(n: usize) -> Self {
        SetPartition {
            labels: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    /// Canonical block id (0-based) of 1-based position `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x - 1]
    }

    /// Canonical block ids by 0-based position.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Whether 1-based positions `x` and `y` are similar.
    pub fn similar(&self, x: usize, y: usize) -> bool {
        self.labels[x - 1] == self.labels[y - 1]
    }

    /// Blocks as sorted 1-based position lists, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &b) in self.labels.iter().enumerate() {
            out[b].push(x + 1);
        }
        out
    }

    /// Smallest element of every block, in block order.
    pub fn block_minima(&self) -> Vec<usize> {
        let mut out = vec![0; self.blocks];
        for (x, &b) in self.labels.iter().enumerate().rev() {
            out[b] = x + 1;
        }
        out
    }

    /// Image of the partition under a permutation of `[n]` given on 1-based points.
    pub fn permuted(&self, sigma: impl Fn(usize) -> usize) -> Self {
        let mut labels = vec![0; self.labels.len()];
        for (x, &b) in self.labels.iter().enumerate() {
            labels[sigma(x + 1) - 1] = b;
        }
        SetPartition::from_dense_labels(&labels)
    }

    /// Merges blocks according to `groups`, indexed by canonical block id.
    pub fn merged(&self, groups: &[usize]) -> Self {
        let labels: Vec<usize> = self.labels.iter().map(|&b| groups[b]).collect();
        SetPartition::from_dense_labels(&labels)
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `{1,4,6,9},{2,5,7},{3,8},{10}`.
impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (k, x) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Restricted-growth string naming a partition's word class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenericWord {
    rgs: Vec<usize>,
}

impl GenericWord {
    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn to_partition(&self) -> SetPartition {
        SetPartition::from_dense_labels(&self.rgs)
    }
}

/// Symbols `A`, `B`, ... for the first 26 blocks, then `[k]`.
impl fmt::Display for GenericWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &k in &self.rgs {
            if k < 26 {
                fmt::Write::write_char(f, char::from(b'A' + k as u8))?;
            } else {
                write!(f, "[{k}]")?;
            }
        }
        Ok(())
    }
}

pub fn generic_word_of(p: &SetPartition) -> GenericWord {
    GenericWord {
        rgs: p.labels.clone(),
    }
}

/// The involution `tau_i` of `[n]`: swaps `t` and `t + i` for `0 < t < i`.
pub fn tau_apply(i: usize, t: usize, n: usize) -> Result<usize> {
    if i == 0 || t == 0 || t > n || 2 * i > n {
        return Err(Error::TauOutOfRange { i, t, n });
    }
    Ok(tau(i, t))
}

#[inline]
fn tau(i: usize, t: usize) -> usize {
    if t < i {
        t + i
    } else if t > i && t < 2 * i {
        t - i
    } else {
        t
    }
}

/// Whether every block of `p` lies inside a block of `q`.
pub fn refines(p: &SetPartition, q: &SetPartition) -> Result<bool> {
    if p.ground_size() != q.ground_size() {
        return Err(Error::GroundMismatch {
            left: p.ground_size(),
            right: q.ground_size(),
        });
    }
    let mut image = vec![usize::MAX; p.num_blocks()];
    for (&bp, &bq) in p.labels.iter().zip(&q.labels) {
        if image[bp] == usize::MAX {
            image[bp] = bq;
        } else if image[bp] != bq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orbit partition of `[n]` generated by `tau_i` for every `i` in `lengths` (with `2i <= n`).
pub fn orbit_closure_on(lengths: &[usize], n: usize) -> SetPartition {
    let mut uf = UnionFind::new(n);
    for &i in lengths {
        // tau_i only moves t < 2i; it pairs t with t + i for t < i.
        for t in 1..i.min(n.saturating_sub(i) + 1) {
            uf.union(t - 1, t + i - 1);
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    SetPartition::from_dense_labels(&roots)
}

/// `o(s)`: the finest partition of `[2 i_1]` invariant under every `tau_i`, `i` in `s`.
pub fn orbit_closure(s: &LengthSeq) -> SetPartition {
    orbit_closure_on(s.ascending(), s.ground_size())
}

/// Smallest 1-based `j` at which `p` has an `i`-square, if any. Returns `None` when
/// `2i` exceeds the ground size.
pub fn partition_has_square(p: &SetPartition, i: usize) -> Option<usize> {
    let n = p.ground_size();
    if i == 0 || 2 * i > n {
        return None;
    }
    let l = &p.labels;
    // run = number of consecutive matches l[q] == l[q - i] ending at the current q.
    let mut run = 0;
    for q in i..n {
        if l[q] == l[q - i] {
            run += 1;
            if run >= i {
                return Some(q + 2 - 2 * i);
            }
        } else {
            run = 0;
        }
    }
    None
}

pub fn is_partition_s_squarefree(p: &SetPartition, s: &LengthSeq) -> bool {
    s.ascending()
        .iter()
        .all(|&i| partition_has_square(p, i).is_none())
}

/// The pairs of positions that must be dissimilar in a dead-end candidate:
/// `(i_j, i_k)` for `j != k` and `(i_j, 2 i_j)`.
pub fn primary_pairs(s: &LengthSeq) -> Vec<(usize, usize)> {
    let a = s.ascending();
    let mut out = Vec::new();
    for (k, &x) in a.iter().enumerate() {
        for &y in &a[k + 1..] {
            out.push((x, y));
        }
    }
    out.extend(a.iter().map(|&i| (i, 2 * i)));
    out
}

pub fn primary_conditions_ok(p: &SetPartition, s: &LengthSeq) -> bool {
    p.ground_size() >= s.ground_size()
        && primary_pairs(s).into_iter().all(|(x, y)| !p.similar(x, y))
}

/// A dead-end candidate: `s`-squarefree and satisfying the primary conditions.
pub fn is_candidate(p: &SetPartition, s: &LengthSeq) -> bool {
    primary_conditions_ok(p, s) && is_partition_s_squarefree(p, s)
}

/// All partitions obtained by merging the blocks of `p` into exactly `k` groups.
///
/// Merge patterns are restricted-growth strings over `p`'s blocks and come out in
/// lexicographic order; there are `S(|p|, k)` of them.
pub fn coarsenings_with_k_blocks(p: &SetPartition, k: usize) -> Result<Coarsenings<'_>> {
    let m = p.num_blocks();
    if k == 0 || k > m {
        return Err(Error::BlockCount {
            requested: k,
            available: m,
        });
    }
    // Lexicographically first pattern: zeros, then 1..k-1 in the last k-1 slots.
    let mut pattern = vec![0; m];
    for g in 1..k {
        pattern[m - k + g] = g;
    }
    Ok(Coarsenings {
        base: p,
        k,
        pattern,
        done: false,
    })
}

pub struct Coarsenings<'a> {
    base: &'a SetPartition,
    k: usize,
    pattern: Vec<usize>,
    done: bool,
}

impl Coarsenings<'_> {
    /// The merge pattern that will be produced next.
    pub fn pattern(&self) -> &[usize] {
        &self.pattern
    }

    fn advance(&mut self) {
        let m = self.pattern.len();
        let k = self.k;
        // prefix_max[j] = max(pattern[..j]); pattern[j] may rise to prefix_max + 1.
        let mut prefix_max = vec![0; m + 1];
        for j in 0..m {
            prefix_max[j + 1] = prefix_max[j].max(self.pattern[j]);
        }
        for j in (1..m).rev() {
            let cap = (prefix_max[j] + 1).min(k - 1);
            if self.pattern[j] >= cap {
                continue;
            }
            let next = self.pattern[j] + 1;
            let reached = prefix_max[j].max(next);
            let missing = k - 1 - reached;
            if m - 1 - j < missing {
                continue;
            }
            self.pattern[j] = next;
            for slot in &mut self.pattern[j + 1..] {
                *slot = 0;
            }
            for g in 0..missing {
                self.pattern[m - missing + g] = reached + 1 + g;
            }
            return;
        }
        self.done = true;
    }
}

impl Iterator for Coarsenings<'_> {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = self.base.merged(&self.pattern);
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[usize]) -> LengthSeq {
        LengthSeq::from_slice(v).unwrap()
    }

    fn blocks(n: usize, b: &[&[usize]]) -> SetPartition {
        let v: Vec<Vec<usize>> = b.iter().map(|x| x.to_vec()).collect();
        SetPartition::from_blocks(n, &v).unwrap()
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_apply(3, 1, 10), Ok(4));
        assert_eq!(tau_apply(3, 3, 10), Ok(3));
        assert_eq!(tau_apply(3, 5, 10), Ok(2));
        assert_eq!(tau_apply(3, 6, 10), Ok(6));
        assert!(tau_apply(3, 11, 10).is_err());
        assert!(tau_apply(6, 1, 10).is_err());
        assert!(tau_apply(3, 0, 10).is_err());
    }

    #[test]
    fn refines_examples() {
        let fine = SetPartition::discrete(3);
        let coarse = blocks(3, &[&[1, 2], &[3]]);
        assert_eq!(refines(&fine, &coarse), Ok(true));
        assert_eq!(refines(&coarse, &fine), Ok(false));
        let o = orbit_closure(&seq(&[3, 5]));
        let witness = blocks(10, &[&[1, 2, 4, 5, 6, 7, 9], &[3, 8, 10]]);
        assert_eq!(refines(&o, &witness), Ok(true));
        assert_eq!(
            refines(&fine, &SetPartition::discrete(4)),
            Err(Error::GroundMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(
            orbit_closure(&seq(&[3])),
            blocks(6, &[&[1, 4], &[2, 5], &[3], &[6]])
        );
        assert_eq!(
            orbit_closure(&seq(&[3, 5])),
            blocks(10, &[&[1, 4, 6, 9], &[2, 5, 7], &[3, 8], &[10]])
        );
        // tau_1 fixes every point, so o(1) keeps positions 1 and 2 apart.
        assert_eq!(orbit_closure(&seq(&[1])), SetPartition::discrete(2));
    }

    #[test]
    fn generic_word_examples() {
        let p = blocks(6, &[&[1, 3, 4], &[2, 6], &[5]]);
        assert_eq!(generic_word_of(&p).to_string(), "ABAACB");
        assert_eq!(
            generic_word_of(&orbit_closure(&seq(&[3, 5]))).to_string(),
            "ABCABABCAD"
        );
        assert_eq!(
            generic_word_of(&SetPartition::discrete(2)).to_string(),
            "AB"
        );
    }

    #[test]
    fn partition_square_examples() {
        assert!(partition_has_square(&orbit_closure(&seq(&[2, 3, 5])), 2).is_some());
        assert_eq!(partition_has_square(&orbit_closure(&seq(&[3, 5])), 3), None);
        assert_eq!(
            partition_has_square(&blocks(4, &[&[1, 2, 3, 4]]), 1),
            Some(1)
        );
        assert_eq!(partition_has_square(&SetPartition::discrete(3), 2), None);
    }

    #[test]
    fn primary_condition_examples() {
        let s = seq(&[3, 5]);
        assert!(primary_conditions_ok(&orbit_closure(&s), &s));
        assert!(!primary_conditions_ok(
            &blocks(10, &[&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]]),
            &s
        ));
        let d = seq(&[2, 4, 5]);
        let o = orbit_closure(&d);
        assert!(!primary_conditions_ok(&o, &d) || !is_partition_s_squarefree(&o, &d));
    }

    #[test]
    fn coarsening_counts() {
        let p = SetPartition::discrete(4);
        let all: Vec<_> = coarsenings_with_k_blocks(&p, 4).unwrap().collect();
        assert_eq!(all, vec![p.clone()]);
        assert_eq!(coarsenings_with_k_blocks(&p, 2).unwrap().count(), 7);
        assert_eq!(coarsenings_with_k_blocks(&p, 1).unwrap().count(), 1);
        assert!(coarsenings_with_k_blocks(&p, 5).is_err());
        assert!(coarsenings_with_k_blocks(&p, 0).is_err());
    }

    #[test]
    fn coarsenings_contain_the_two_block_witness() {
        let o = orbit_closure(&seq(&[3, 5]));
        let witness = blocks(10, &[&[1, 2, 4, 5, 6, 7, 9], &[3, 8, 10]]);
        assert!(coarsenings_with_k_blocks(&o, 2)
            .unwrap()
            .any(|c| c == witness));
    }

    #[test]
    fn display_forms() {
        let o = orbit_closure(&seq(&[3, 5]));
        assert_eq!(o.to_string(), "{1,4,6,9},{2,5,7},{3,8},{10}");
        assert_eq!(o.block_minima(), vec![1, 2, 3, 10]);
    }
}
