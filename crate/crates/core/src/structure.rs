//! Closed-form results: the `m`-values, conditions C and D, geometric doubling,
//! the recursive generic-word construction and the predicted verdicts for the
//! minimal alphabet size and for dead-ends of the sequential method.
//!
//! All indices here follow the descending convention of [`LengthSeq::get`]:
//! `i_1` is the largest length and `i_r` the smallest.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::partition::{orbit_closure_on, GenericWord, SetPartition};
use crate::word::LengthSeq;

/// Condition C: `i_t > i_{t+1} + ... + i_r` for every `1 <= t <= r - 1`.
pub fn condition_c(s: &LengthSeq) -> bool {
    let a = s.ascending();
    let mut below = 0usize;
    for (k, &i) in a.iter().enumerate() {
        if k > 0 && i <= below {
            return false;
        }
        below += i;
    }
    true
}

/// Condition D: `s` fails condition C only in its top inequality, with
/// `i_2 + ... + i_{r-1} < i_1 < i_2 + ... + i_r`.
pub fn condition_d(s: &LengthSeq) -> bool {
    let r = s.r();
    if r < 2 {
        return false;
    }
    let a = s.ascending();
    let i1 = s.largest();
    let rest: usize = a[..r - 1].iter().sum();
    let middle = rest - a[0];
    let lower = LengthSeq::from_slice(&a[..r - 1]).expect("prefix of an increasing sequence");
    i1 < rest && i1 > middle && condition_c(&lower)
}

/// Whether `s = (i_r, 2 i_r, ..., 2^{r-1} i_r)`. A single length counts as doubling.
pub fn is_geometric_doubling(s: &LengthSeq) -> bool {
    s.ascending().windows(2).all(|w| w[1] == 2 * w[0])
}

/// `m(u, v)` together with its indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MValue {
    pub u: usize,
    pub v: usize,
    pub value: usize,
}

/// `m(u, v)` for `1 <= v <= r`, `1 <= u <= v + 1`; requires condition C.
///
/// `m(v, v) = i_v`, `m(v + 1, v) = 2 i_v` and for `u < v`
/// `m(u, v) = min(i_u - (i_{u+1} + ... + i_v), ..., i_{v-1} - i_v, i_v)`.
pub fn m_value(s: &LengthSeq, u: usize, v: usize) -> Result<usize> {
    let r = s.r();
    if v == 0 || v > r {
        return Err(Error::IndexOutOfRange { index: v, len: r });
    }
    if u == 0 || u > v + 1 {
        return Err(Error::IndexOutOfRange { index: u, len: r });
    }
    if !condition_c(s) {
        return Err(Error::ConditionCRequired);
    }
    Ok(m_unchecked(s, u, v))
}

fn m_unchecked(s: &LengthSeq, u: usize, v: usize) -> usize {
    if u == v + 1 {
        return 2 * s.get(v);
    }
    let mut best = s.get(v);
    let mut tail = s.get(v);
    // tail = i_{k+1} + ... + i_v as k walks down from v-1 to u.
    for k in (u..v).rev() {
        best = best.min(s.get(k) - tail);
        tail += s.get(k);
    }
    best
}

/// Every `m(u, v)` with `1 <= v <= r`, `1 <= u <= v + 1`, ordered by `v` then `u`.
pub fn m_values(s: &LengthSeq) -> Result<Vec<MValue>> {
    if !condition_c(s) {
        return Err(Error::ConditionCRequired);
    }
    let mut out = Vec::new();
    for v in 1..=s.r() {
        for u in 1..=v + 1 {
            out.push(MValue {
                u,
                v,
                value: m_unchecked(s, u, v),
            });
        }
    }
    Ok(out)
}

/// Builds `w(s)` by substitution, starting from `w(i_1)` and folding in
/// `i_2, ..., i_r` one at a time. Requires condition C and all lengths `>= 2`.
///
/// Letters are named by the position of their first occurrence. Adding `i_v` relabels
/// the prefix alphabet `1..=M` with `M = m(1, v-1)`:
/// * if `2 i_v <= M`, label `y` in `(i_v, 2 i_v)` becomes `y - i_v`;
/// * otherwise the first `i_v` labels are folded by the successive maps
///   `y -> ((y - 1) mod m(t, v)) + 1` for `m(t, v) < y < m(t+1, v)`, `t = v-1, ..., 1`,
///   and label `i_v + x` takes the folded label of `x` for `x <= m(1, v)`.
pub fn generic_word_recursive(s: &LengthSeq) -> Result<GenericWord> {
    if !condition_c(s) {
        return Err(Error::ConditionCRequired);
    }
    if s.smallest() < 2 {
        return Err(Error::LengthOneUnsupported);
    }
    let i1 = s.largest();
    let n = 2 * i1;
    let mut labels: Vec<usize> = (1..=n)
        .map(|t| {
            if t <= i1 {
                t
            } else if t < n {
                t - i1
            } else {
                n
            }
        })
        .collect();

    for v in 2..=s.r() {
        let iv = s.get(v);
        let prefix = m_unchecked(s, 1, v - 1);
        let mut relabel: Vec<usize> = (0..=n).collect();
        if 2 * iv <= prefix {
            for (y, slot) in relabel.iter_mut().enumerate().take(2 * iv).skip(iv + 1) {
                *slot = y - iv;
            }
        } else {
            let mut folded: Vec<usize> = (0..=iv).collect();
            for t in (1..v).rev() {
                let period = m_unchecked(s, t, v);
                let upper = m_unchecked(s, t + 1, v);
                for label in folded.iter_mut().skip(1) {
                    if *label > period && *label < upper {
                        *label = (*label - 1) % period + 1;
                    }
                }
            }
            relabel[1..=iv].copy_from_slice(&folded[1..=iv]);
            let tail = prefix - iv;
            relabel[iv + 1..=iv + tail].copy_from_slice(&folded[1..=tail]);
            // The orbit of m(t, v-1) joins the orbit of m(t, v) whenever m(t, v) < i_v;
            // for t >= 2 that label can lie beyond the prefix.
            for t in 1..v {
                let low = m_unchecked(s, t, v);
                if low < iv {
                    relabel[m_unchecked(s, t, v - 1)] = folded[low];
                }
            }
        }
        for label in &mut labels {
            *label = relabel[*label];
        }
    }
    Ok(crate::partition::generic_word_of(
        &SetPartition::from_dense_labels(&labels),
    ))
}

/// Predicted union of `o(i_{r-1}, ..., i_1)`-orbits forming the `o(s)`-orbit of `x`.
///
/// Applies for `0 < x < m(1, r)` and for `x = m(t, r) < m(r, r)`; returns `None`
/// otherwise or when `r < 2`. The result lists positions, sorted.
pub fn orbit_formula(s: &LengthSeq, x: usize) -> Option<Vec<usize>> {
    let r = s.r();
    if r < 2 || !condition_c(s) || s.smallest() < 2 || x == 0 {
        return None;
    }
    let m = |u: usize| m_unchecked(s, u, r);
    let applies = x < m(1) || (1..r).any(|t| x == m(t) && m(t) < m(r));
    if !applies {
        return None;
    }
    let prev = s.top(r - 1);
    let n = s.ground_size();
    let coarse = orbit_closure_on(prev.ascending(), n);
    let mut chosen = vec![false; coarse.num_blocks()];
    for u in 1..=r {
        let step = m(u);
        let bound = m_unchecked(s, u + 1, r);
        let mut y = x;
        while y < bound && y <= n {
            chosen[coarse.block_of(y)] = true;
            y += step;
        }
    }
    Some((1..=n).filter(|&p| chosen[coarse.block_of(p)]).collect())
}

/// Whether some `x` has `x ~ x + 1` in `o(s)`, predicted as
/// `i_s - i_{s+1} - ... - i_t = 1` for some `s < t`.
pub fn adjacent_similarity_predicted(s: &LengthSeq) -> bool {
    let r = s.r();
    (1..r).any(|a| {
        let mut rest = 0i64;
        (a + 1..=r).any(|b| {
            rest += s.get(b) as i64;
            s.get(a) as i64 - rest == 1
        })
    })
}

/// Predicted minimal alphabet size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinAVerdict {
    Finite(usize),
    Infinite,
    /// Undecided by the closed-form results; the value is an upper bound.
    UnknownBounded(usize),
}

impl fmt::Display for MinAVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinAVerdict::Finite(k) => write!(f, "Finite({k})"),
            MinAVerdict::Infinite => write!(f, "Infinite"),
            MinAVerdict::UnknownBounded(k) => write!(f, "UnknownBounded({k})"),
        }
    }
}

/// Predicted `minA(s)`.
///
/// * `r = 1`: 2.
/// * `s` fails condition C: infinite (for `i_r = 1` as well).
/// * `i_r >= 2`: `r + 1` for geometric doubling, `r` otherwise.
/// * `i_r = 1`: 3 for `(1, i_1)`, `r + 1` for `(1, k, 2k, ..., 2^{r-2} k)`, and
///   otherwise only the bound `r + 1` is known.
pub fn predict_min_a(s: &LengthSeq) -> MinAVerdict {
    let r = s.r();
    if r == 1 {
        return MinAVerdict::Finite(2);
    }
    if !condition_c(s) {
        return MinAVerdict::Infinite;
    }
    if s.smallest() >= 2 {
        return if is_geometric_doubling(s) {
            MinAVerdict::Finite(r + 1)
        } else {
            MinAVerdict::Finite(r)
        };
    }
    let rest = LengthSeq::from_slice(&s.ascending()[1..]).expect("tail of an increasing sequence");
    if is_geometric_doubling(&rest) {
        MinAVerdict::Finite(r + 1)
    } else {
        MinAVerdict::UnknownBounded(r + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeadEnds {
    NoDeadEnds,
    HasDeadEnds,
    Unknown,
}

/// Which result settled a [`DeadEndVerdict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeadEndRule {
    /// `r < l`: two letters cannot close squares of the same length.
    FewerLengthsThanLetters,
    /// `r = l` and `minA(s) = r`.
    MinimalAlphabetMatches,
    /// Every length-`l` subsequence has `minA > l`.
    EverySubsequenceExceeds,
    /// Some length-`l` subsequence has `minA = l`, but its candidates may still carry
    /// squares of the remaining lengths.
    SubsequenceUndecided,
    /// Some relevant `minA` is only bounded.
    MinimalAlphabetUnknown,
    /// More lengths than the subsequence analysis accepts.
    TooManyLengths,
}

impl DeadEndRule {
    pub fn describe(self) -> &'static str {
        match self {
            DeadEndRule::FewerLengthsThanLetters => {
                "r < l: no two letters close squares of one length"
            }
            DeadEndRule::MinimalAlphabetMatches => "r = l and minA(s) = l",
            DeadEndRule::EverySubsequenceExceeds => "every length-l subsequence has minA > l",
            DeadEndRule::SubsequenceUndecided => {
                "a length-l subsequence has minA = l (open converse)"
            }
            DeadEndRule::MinimalAlphabetUnknown => "minA of a length-l subsequence is only bounded",
            DeadEndRule::TooManyLengths => "more than 8 lengths",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeadEndVerdict {
    pub kind: DeadEnds,
    pub rule: DeadEndRule,
}

/// Largest `r` accepted by [`theorem1_predict`].
pub const MAX_SUBSEQUENCE_LENGTHS: usize = 8;

/// Predicts whether `G(s)` over `l` letters has dead-ends.
///
/// A dead-end needs `l` distinct lengths of `s`, one per letter, so only length-`l`
/// subsequences `s'` matter: if each has `minA(s') > l` there are none. With `r = l`
/// the only subsequence is `s` itself and `minA(s) = l` gives dead-ends. With `r > l`
/// a subsequence with `minA(s') = l` is left undecided.
pub fn theorem1_predict(s: &LengthSeq, l: usize) -> DeadEndVerdict {
    let r = s.r();
    let verdict = |kind, rule| DeadEndVerdict { kind, rule };
    if r < l {
        return verdict(DeadEnds::NoDeadEnds, DeadEndRule::FewerLengthsThanLetters);
    }
    if r > MAX_SUBSEQUENCE_LENGTHS {
        return verdict(DeadEnds::Unknown, DeadEndRule::TooManyLengths);
    }
    let mut unknown = false;
    let mut matches = false;
    for sub in s.subsequences(l) {
        match predict_min_a(&sub) {
            MinAVerdict::Infinite => {}
            MinAVerdict::Finite(k) if k > l => {}
            MinAVerdict::Finite(_) => matches = true,
            MinAVerdict::UnknownBounded(_) => unknown = true,
        }
    }
    if r == l && matches {
        verdict(DeadEnds::HasDeadEnds, DeadEndRule::MinimalAlphabetMatches)
    } else if unknown {
        verdict(DeadEnds::Unknown, DeadEndRule::MinimalAlphabetUnknown)
    } else if matches {
        verdict(DeadEnds::Unknown, DeadEndRule::SubsequenceUndecided)
    } else {
        verdict(DeadEnds::NoDeadEnds, DeadEndRule::EverySubsequenceExceeds)
    }
}
