//! Exact minimal alphabet sizes.
//!
//! A dead-end candidate for `s` is a coarsening of `o(s)` that is `s`-squarefree and
//! keeps the primary pairs apart. Coarsenings are searched orbit by orbit in
//! restricted-growth order; every constraint is attached to the last orbit it
//! mentions and checked as soon as that orbit receives its group.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::partition::{is_candidate, orbit_closure, primary_pairs, SetPartition};
use crate::word::{square_created_by_prepend, LengthSeq, Word};

/// Graph on the orbits of `o(s)` whose edges join orbits that every candidate must
/// keep apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceGraph {
    /// Smallest element of each orbit; vertex `v` is the orbit containing `orbit_minima[v]`.
    pub orbit_minima: Vec<usize>,
    /// Sorted, deduplicated pairs `(a, b)` with `a < b`.
    pub edges: Vec<(usize, usize)>,
}

impl DifferenceGraph {
    pub fn vertex_count(&self) -> usize {
        self.orbit_minima.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    /// The vertex whose orbit contains 1-based position `x`.
    pub fn vertex_of(&self, o: &SetPartition, x: usize) -> usize {
        o.block_of(x)
    }

    /// Vertices with at least one edge.
    pub fn non_isolated(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count()];
        for &(a, b) in &self.edges {
            seen[a] = true;
            seen[b] = true;
        }
        (0..self.vertex_count()).filter(|&v| seen[v]).collect()
    }
}

/// Difference graph of `o(s)`.
///
/// Edges come from the primary conditions (`i_j` against `i_k`, `i_j` against `2 i_j`)
/// and from every square window of `o(s)` whose position pairs all fall inside one
/// orbit except for a single pair of orbits: that pair must differ or the window is a
/// square. Pairs already inside one orbit are not edges; `o(s)` then has no candidate.
pub fn primary_difference_graph(s: &LengthSeq) -> DifferenceGraph {
    let o = orbit_closure(s);
    let mut edges = Vec::new();
    let mut push = |a: usize, b: usize| {
        if a != b {
            edges.push(if a < b { (a, b) } else { (b, a) });
        }
    };
    for (x, y) in primary_pairs(s) {
        push(o.block_of(x), o.block_of(y));
    }
    for window in square_windows(&o, s) {
        if let [(a, b)] = window.as_slice() {
            push(*a, *b);
        }
    }
    edges.sort_unstable();
    edges.dedup();
    DifferenceGraph {
        orbit_minima: o.block_minima(),
        edges,
    }
}

/// For every window `(i, j)` the distinct unordered orbit pairs `(o(j+t), o(j+t+i))`
/// with different orbits. An empty list means `base` already has that square.
fn square_windows(base: &SetPartition, s: &LengthSeq) -> Vec<Vec<(usize, usize)>> {
    let n = base.ground_size();
    let lab = base.labels();
    let mut out = Vec::new();
    for &i in s.ascending() {
        if 2 * i > n {
            continue;
        }
        for j in 0..=n - 2 * i {
            let mut pairs: Vec<(usize, usize)> = (0..i)
                .filter_map(|t| {
                    let (a, b) = (lab[j + t], lab[j + t + i]);
                    (a != b).then_some(if a < b { (a, b) } else { (b, a) })
                })
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            out.push(pairs);
        }
    }
    out
}

/// Default vertex bound for [`chromatic_number`].
pub const DEFAULT_COLORING_BOUND: usize = 24;

/// Exact chromatic number by branch and bound over vertices in decreasing-degree order.
pub fn chromatic_number(g: &DifferenceGraph, bound: usize) -> Result<usize> {
    let n = g.vertex_count();
    if n > bound || n > 64 {
        return Err(Error::BudgetExceeded {
            what: "difference graph vertices",
            limit: bound as u64,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |v: usize| g.edges.iter().filter(|&&(a, b)| a == v || b == v).count();
    order.sort_by_key(|&v| core::cmp::Reverse(degree(v)));
    let mut rank = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        rank[v] = k;
    }
    // earlier[k] = bitmask of neighbours of order[k] that come before it.
    let mut earlier = vec![0u64; n];
    for &(a, b) in &g.edges {
        let (ra, rb) = (rank[a], rank[b]);
        if ra < rb {
            earlier[rb] |= 1 << ra;
        } else {
            earlier[ra] |= 1 << rb;
        }
    }
    let mut colors = vec![0usize; n];
    let mut k = 1;
    while !colorable(&earlier, &mut colors, 0, 0, k) {
        k += 1;
    }
    Ok(k)
}

fn colorable(earlier: &[u64], colors: &mut [usize], at: usize, used: usize, k: usize) -> bool {
    if at == earlier.len() {
        return true;
    }
    // New colours are symmetric, so only the first unused one is tried.
    for c in 0..(used + 1).min(k) {
        let clash = (0..at).any(|p| earlier[at] >> p & 1 == 1 && colors[p] == c);
        if clash {
            continue;
        }
        colors[at] = c;
        if colorable(earlier, colors, at + 1, used.max(c + 1), k) {
            return true;
        }
    }
    false
}

/// Exact `minA(s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinAValue {
    Finite(usize),
    Infinite,
}

impl fmt::Display for MinAValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinAValue::Finite(k) => write!(f, "Finite({k})"),
            MinAValue::Infinite => write!(f, "Infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinAResult {
    pub value: MinAValue,
    /// First candidate on `value` blocks in canonical search order.
    pub witness: Option<SetPartition>,
    /// `(k, exists)` for `k = 1..=k_max`: whether a candidate with exactly `k` blocks exists.
    pub profile: Vec<(usize, bool)>,
    /// Number of orbits of `o(s)`.
    pub orbits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub k_max: usize,
    /// Cap on search nodes per block count.
    pub node_budget: u64,
}

impl SolverConfig {
    pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

    /// `k_max = r + 2`, which covers every predicted finite value.
    pub fn for_lengths(s: &LengthSeq) -> Self {
        SolverConfig {
            k_max: s.r() + 2,
            node_budget: Self::DEFAULT_NODE_BUDGET,
        }
    }
}

enum Check {
    Differ(usize, usize),
    /// Violated when every listed pair of orbits ends up in one group.
    NotAllMerged(Vec<(usize, usize)>),
}

/// Coarsening search over the blocks of `base`.
struct CandidateSearch {
    base: SetPartition,
    checks: Vec<Vec<Check>>,
    /// A constraint is already violated by `base` itself.
    hopeless: bool,
}

impl CandidateSearch {
    /// Candidates must keep `primary`'s pairs apart and avoid squares of `squarefree`.
    fn new(base: SetPartition, primary: &LengthSeq, squarefree: &LengthSeq) -> Self {
        let mut checks: Vec<Vec<Check>> = (0..base.num_blocks()).map(|_| Vec::new()).collect();
        let mut hopeless = false;
        for (x, y) in primary_pairs(primary) {
            if 2 * primary.largest() > base.ground_size() {
                hopeless = true;
                break;
            }
            let (a, b) = (base.block_of(x), base.block_of(y));
            if a == b {
                hopeless = true;
            } else {
                checks[a.max(b)].push(Check::Differ(a, b));
            }
        }
        for pairs in square_windows(&base, squarefree) {
            match pairs.iter().map(|&(_, b)| b).max() {
                None => hopeless = true,
                Some(last) => checks[last].push(Check::NotAllMerged(pairs)),
            }
        }
        CandidateSearch {
            base,
            checks,
            hopeless,
        }
    }

    /// Visits every candidate with exactly `k` blocks in canonical order until `visit`
    /// returns `false`.
    fn run(&self, k: usize, budget: u64, mut visit: impl FnMut(&[usize]) -> bool) -> Result<()> {
        let m = self.base.num_blocks();
        if self.hopeless || k == 0 || k > m {
            return Ok(());
        }
        let mut groups = vec![0usize; m];
        let mut nodes = 0u64;
        self.descend(0, 0, k, &mut groups, &mut nodes, budget, &mut visit)
            .map(|_| ())
    }

    /// Returns `Ok(false)` once the visitor asks to stop.
    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        at: usize,
        used: usize,
        k: usize,
        groups: &mut [usize],
        nodes: &mut u64,
        budget: u64,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> Result<bool> {
        let m = groups.len();
        if at == m {
            return Ok(used < k || visit(groups));
        }
        let top = if at == 0 { 0 } else { used.min(k - 1) };
        for g in 0..=top {
            let now_used = used.max(g + 1);
            // Every group still missing needs a block of its own.
            if k - now_used > m - at - 1 {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::BudgetExceeded {
                    what: "candidate search nodes",
                    limit: budget,
                });
            }
            groups[at] = g;
            if !self.satisfied(at, groups) {
                continue;
            }
            if !self.descend(at + 1, now_used, k, groups, nodes, budget, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn satisfied(&self, at: usize, groups: &[usize]) -> bool {
        self.checks[at].iter().all(|check| match check {
            Check::Differ(a, b) => groups[*a] != groups[*b],
            Check::NotAllMerged(pairs) => pairs.iter().any(|&(a, b)| groups[a] != groups[b]),
        })
    }
}

/// Exact `minA(s)` with a witness and the candidacy profile for `k = 1..=k_max`.
///
/// `minA(s)` is infinite exactly when `o(s)` itself fails: merging orbits only adds
/// equalities, so no coarsening can undo a square or a merged primary pair.
pub fn min_a_exact(s: &LengthSeq, config: SolverConfig) -> Result<MinAResult> {
    let o = orbit_closure(s);
    let orbits = o.num_blocks();
    if !is_candidate(&o, s) {
        return Ok(MinAResult {
            value: MinAValue::Infinite,
            witness: None,
            profile: Vec::new(),
            orbits,
        });
    }
    let search = CandidateSearch::new(o.clone(), s, s);
    let mut profile = Vec::with_capacity(config.k_max);
    let mut best: Option<(usize, SetPartition)> = None;
    for k in 1..=config.k_max {
        let mut first: Option<Vec<usize>> = None;
        search.run(k, config.node_budget, |groups| {
            first = Some(groups.to_vec());
            false
        })?;
        if let (None, Some(groups)) = (&best, &first) {
            best = Some((k, o.merged(groups)));
        }
        profile.push((k, first.is_some()));
    }
    match best {
        Some((k, witness)) => Ok(MinAResult {
            value: MinAValue::Finite(k),
            witness: Some(witness),
            profile,
            orbits,
        }),
        None => Err(Error::KMaxExceeded {
            k_max: config.k_max,
        }),
    }
}

/// Whether prepending any of the `l` letters to `w` creates a square of `s`.
pub fn is_prepend_dead_end(w: &Word, s: &LengthSeq, l: usize) -> bool {
    (0..l as u8).all(|a| square_created_by_prepend(w, a, s).is_some())
}

/// Dead-end words over `l` letters read off candidate coarsenings.
///
/// For every subsequence `s'` of `s` that keeps `i_1` and has at most `l` lengths, the
/// coarsenings of `o(s')` with at most `l` blocks that are `s`-squarefree and keep the
/// primary pairs of `s'` apart are given letters in every injective way; each word is
/// kept only if every prepended letter creates a square.
pub fn dead_end_words_from(s: &LengthSeq, l: usize, node_budget: u64) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    let i1 = s.largest();
    for size in 1..=l.min(s.r()) {
        for sub in s
            .subsequences(size)
            .into_iter()
            .filter(|sub| sub.largest() == i1)
        {
            let search = CandidateSearch::new(orbit_closure(&sub), &sub, s);
            for k in 1..=l {
                let mut found: Vec<Vec<usize>> = Vec::new();
                search.run(k, node_budget, |groups| {
                    found.push(groups.to_vec());
                    true
                })?;
                for groups in found {
                    let p = search.base.merged(&groups);
                    for_each_injection(k, l, |letters| {
                        let w = Word::new(p.labels().iter().map(|&b| letters[b]).collect());
                        if is_prepend_dead_end(&w, s, l) {
                            out.insert(w);
                        }
                    });
                }
            }
        }
    }
    Ok(out)
}

fn for_each_injection(k: usize, l: usize, mut f: impl FnMut(&[u8])) {
    fn go(
        at: usize,
        k: usize,
        l: usize,
        taken: &mut [bool],
        cur: &mut Vec<u8>,
        f: &mut impl FnMut(&[u8]),
    ) {
        if at == k {
            f(cur);
            return;
        }
        for c in 0..l {
            if !taken[c] {
                taken[c] = true;
                cur.push(c as u8);
                go(at + 1, k, l, taken, cur, f);
                cur.pop();
                taken[c] = false;
            }
        }
    }
    go(
        0,
        k,
        l,
        &mut vec![false; l],
        &mut Vec::with_capacity(k),
        &mut f,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[usize]) -> LengthSeq {
        LengthSeq::from_slice(v).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> DifferenceGraph {
        let mut e = edges.to_vec();
        e.sort_unstable();
        DifferenceGraph {
            orbit_minima: (1..=n).collect(),
            edges: e,
        }
    }

    fn orbit_edge(s: &LengthSeq, g: &DifferenceGraph, x: usize, y: usize) -> bool {
        let o = orbit_closure(s);
        g.has_edge(o.block_of(x), o.block_of(y))
    }

    #[test]
    fn difference_graph_examples() {
        let s = seq(&[3]);
        let g = primary_difference_graph(&s);
        assert_eq!(g.edges.len(), 1);
        assert!(orbit_edge(&s, &g, 3, 6));

        let s = seq(&[2, 4]);
        let g = primary_difference_graph(&s);
        assert_eq!(g.edges.len(), 3);
        for (x, y) in [(2, 4), (2, 8), (4, 8)] {
            assert!(orbit_edge(&s, &g, x, y));
        }

        let s = seq(&[2, 4, 8]);
        let g = primary_difference_graph(&s);
        for (x, y) in [(2, 4), (2, 8), (2, 16), (4, 8), (4, 16), (8, 16)] {
            assert!(orbit_edge(&s, &g, x, y), "missing {x}-{y}");
        }
    }

    #[test]
    fn chromatic_examples() {
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(chromatic_number(&k4, 24), Ok(4));
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(chromatic_number(&path, 24), Ok(2));
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert_eq!(chromatic_number(&c5, 24), Ok(3));
        assert_eq!(chromatic_number(&graph(3, &[]), 24), Ok(1));
        assert!(matches!(
            chromatic_number(&graph(25, &[]), 24),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn min_a_examples() {
        let s = seq(&[3, 5]);
        let res = min_a_exact(
            &s,
            SolverConfig {
                k_max: 4,
                node_budget: 1_000_000,
            },
        )
        .unwrap();
        assert_eq!(res.value, MinAValue::Finite(2));
        let expected =
            SetPartition::from_blocks(10, &[vec![1, 2, 4, 5, 6, 7, 9], vec![3, 8, 10]]).unwrap();
        assert_eq!(res.witness, Some(expected));
        assert_eq!(
            res.profile,
            vec![(1, false), (2, true), (3, true), (4, true)]
        );

        let s = seq(&[2, 4]);
        let res = min_a_exact(
            &s,
            SolverConfig {
                k_max: 4,
                node_budget: 1_000_000,
            },
        )
        .unwrap();
        assert_eq!(res.value, MinAValue::Finite(3));

        let s = seq(&[2, 3, 5]);
        let res = min_a_exact(
            &s,
            SolverConfig {
                k_max: 5,
                node_budget: 1_000_000,
            },
        )
        .unwrap();
        assert_eq!(res.value, MinAValue::Infinite);
    }

    #[test]
    fn min_a_reports_small_k_max() {
        let s = seq(&[2, 4]);
        let res = min_a_exact(
            &s,
            SolverConfig {
                k_max: 2,
                node_budget: 1_000_000,
            },
        );
        assert_eq!(res, Err(Error::KMaxExceeded { k_max: 2 }));
    }

    #[test]
    fn min_a_reports_budget() {
        let s = seq(&[2, 5, 11]);
        let res = min_a_exact(
            &s,
            SolverConfig {
                k_max: 5,
                node_budget: 3,
            },
        );
        assert!(matches!(res, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn dead_end_word_examples() {
        let w = |t: &str| t.parse::<Word>().unwrap();
        let found = dead_end_words_from(&seq(&[3, 5]), 2, 1_000_000).unwrap();
        assert!(found.contains(&w("aabaaaabab")));
        assert!(found.contains(&w("bbabbbbaba")));
        assert!(dead_end_words_from(&seq(&[2, 4]), 2, 1_000_000)
            .unwrap()
            .is_empty());
        let found = dead_end_words_from(&seq(&[2, 4, 5]), 2, 1_000_000).unwrap();
        assert!(found.contains(&w("bbbaabbbab")));
    }
}
