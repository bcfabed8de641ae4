//! The avoidance digraph `G(s)` over `l` letters.
//!
//! Vertices are the `s`-squarefree words of length `N = 2 i_1`, packed base `l` with
//! the first letter most significant. Arcs are implicit: `w -> a w_1 ... w_{N-1}`, so a
//! vertex without out-arcs is a word that every prepended letter turns into a square
//! (a dead-end), and a vertex without in-arcs is one every appended letter does (a
//! dead-start).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::{find_square, LengthSeq, Word};

/// Default cap on `l^N`.
pub const DEFAULT_VERTEX_CAP: u64 = 20_000_000;

/// Largest supported alphabet.
pub const MAX_ALPHABET: usize = 26;

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: u64) -> Self {
        BitSet(vec![0; bits.div_ceil(64) as usize])
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: u64) {
        self.0[(i / 64) as usize] &= !(1 << (i % 64));
    }
}

#[derive(Clone, Debug)]
pub struct AvoidanceGraph {
    s: LengthSeq,
    l: usize,
    n: usize,
    /// `l^(N-1)`.
    high: u64,
    present: BitSet,
    /// Sorted vertex codes.
    vertices: Vec<u64>,
    trimmed: bool,
}

impl PartialEq for AvoidanceGraph {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.l == other.l && self.vertices == other.vertices
    }
}

impl Eq for AvoidanceGraph {}

impl AvoidanceGraph {
    /// Builds `G(s)` over `l` letters, refusing when `l^N` exceeds `vertex_cap`.
    pub fn build(s: &LengthSeq, l: usize, vertex_cap: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if l > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge {
                size: l,
                max: MAX_ALPHABET,
            });
        }
        let n = s.ground_size();
        let total = u32::try_from(n)
            .ok()
            .and_then(|e| (l as u64).checked_pow(e))
            .filter(|&t| t <= vertex_cap)
            .ok_or(Error::BudgetExceeded {
                what: "candidate words l^N",
                limit: vertex_cap,
            })?;
        let mut g = AvoidanceGraph {
            s: s.clone(),
            l,
            n,
            high: total / l as u64,
            present: BitSet::new(total),
            vertices: Vec::new(),
            trimmed: false,
        };
        let lengths = s.ascending().to_vec();
        let mut word = vec![0u8; n];
        // runs[k][p]: how many positions q <= p in a row have word[q] == word[q - i_k].
        let mut runs = vec![vec![0usize; n]; lengths.len()];
        g.extend(&lengths, 0, 0, &mut word, &mut runs);
        Ok(g)
    }

    fn extend(
        &mut self,
        lengths: &[usize],
        depth: usize,
        code: u64,
        word: &mut [u8],
        runs: &mut [Vec<usize>],
    ) {
        if depth == self.n {
            self.present.set(code);
            self.vertices.push(code);
            return;
        }
        'letters: for c in 0..self.l as u8 {
            for (k, &i) in lengths.iter().enumerate() {
                let run = if depth >= i && word[depth - i] == c {
                    if depth > 0 {
                        runs[k][depth - 1] + 1
                    } else {
                        1
                    }
                } else {
                    0
                };
                if run >= i {
                    continue 'letters;
                }
                runs[k][depth] = run;
            }
            word[depth] = c;
            self.extend(
                lengths,
                depth + 1,
                code * self.l as u64 + c as u64,
                word,
                runs,
            );
        }
    }

    pub fn lengths(&self) -> &LengthSeq {
        &self.s
    }

    pub fn alphabet_size(&self) -> usize {
        self.l
    }

    /// Vertex word length `N`.
    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Sorted vertex codes; sorting by code is lexicographic order on words.
    pub fn vertex_codes(&self) -> &[u64] {
        &self.vertices
    }

    pub fn contains_code(&self, code: u64) -> bool {
        code < self.high * self.l as u64 && self.present.get(code)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.encode(w).is_some_and(|c| self.contains_code(c))
    }

    /// Rank of a vertex in [`Self::vertex_codes`].
    pub fn index_of(&self, code: u64) -> Option<usize> {
        self.vertices.binary_search(&code).ok()
    }

    pub fn encode(&self, w: &Word) -> Option<u64> {
        if w.len() != self.n || w.letters().iter().any(|&a| a as usize >= self.l) {
            return None;
        }
        Some(
            w.letters()
                .iter()
                .fold(0, |acc, &a| acc * self.l as u64 + a as u64),
        )
    }

    pub fn decode(&self, mut code: u64) -> Word {
        let mut letters = vec![0u8; self.n];
        for slot in letters.iter_mut().rev() {
            *slot = (code % self.l as u64) as u8;
            code /= self.l as u64;
        }
        Word::new(letters)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Word> + '_ {
        self.vertices.iter().map(|&c| self.decode(c))
    }

    /// Targets `a w_1 ... w_{N-1}` that are vertices.
    pub fn out_neighbors(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        let tail = code / self.l as u64;
        (0..self.l as u64)
            .map(move |a| a * self.high + tail)
            .filter(|&c| self.present.get(c))
    }

    /// Sources `w_2 ... w_N b` that are vertices.
    pub fn in_neighbors(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        let head = (code % self.high) * self.l as u64;
        (0..self.l as u64)
            .map(move |b| head + b)
            .filter(|&c| self.present.get(c))
    }

    pub fn out_degree(&self, code: u64) -> usize {
        self.out_neighbors(code).count()
    }

    pub fn in_degree(&self, code: u64) -> usize {
        self.in_neighbors(code).count()
    }

    pub fn arc_count(&self) -> usize {
        self.vertices.iter().map(|&c| self.out_degree(c)).sum()
    }

    /// Arcs as pairs of vertex ranks, sorted.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.iter().enumerate().flat_map(move |(k, &c)| {
            let mut targets: Vec<usize> = self
                .out_neighbors(c)
                .filter_map(|t| self.index_of(t))
                .collect();
            targets.sort_unstable();
            targets.into_iter().map(move |t| (k, t))
        })
    }

    /// Whether this graph is already its own core.
    pub fn is_trimmed(&self) -> bool {
        self.trimmed
    }
}

/// Vertices without out-arcs: every prepended letter creates a square. Lexicographic order.
pub fn dead_ends(g: &AvoidanceGraph) -> Vec<Word> {
    g.vertices
        .iter()
        .filter(|&&c| g.out_degree(c) == 0)
        .map(|&c| g.decode(c))
        .collect()
}

/// Vertices without in-arcs: every appended letter creates a square. Lexicographic order.
pub fn dead_starts(g: &AvoidanceGraph) -> Vec<Word> {
    g.vertices
        .iter()
        .filter(|&&c| g.in_degree(c) == 0)
        .map(|&c| g.decode(c))
        .collect()
}

/// The largest induced subgraph with every in- and out-degree positive, by trimming
/// sources and sinks to a fixpoint.
pub fn prune_core(g: &AvoidanceGraph) -> AvoidanceGraph {
    let mut alive = g.present.clone();
    let count = g.vertices.len();
    let mut outdeg: Vec<u8> = g.vertices.iter().map(|&c| g.out_degree(c) as u8).collect();
    let mut indeg: Vec<u8> = g.vertices.iter().map(|&c| g.in_degree(c) as u8).collect();
    let mut removed = vec![false; count];
    let mut queue: VecDeque<usize> = (0..count)
        .filter(|&k| outdeg[k] == 0 || indeg[k] == 0)
        .collect();
    let rank = |c: u64| g.vertices.binary_search(&c).expect("neighbour is a vertex");
    let l = g.l as u64;
    while let Some(k) = queue.pop_front() {
        if removed[k] {
            continue;
        }
        removed[k] = true;
        let code = g.vertices[k];
        alive.clear(code);
        let tail = code / l;
        for a in 0..l {
            let t = a * g.high + tail;
            if alive.get(t) {
                let rt = rank(t);
                indeg[rt] -= 1;
                if indeg[rt] == 0 {
                    queue.push_back(rt);
                }
            }
        }
        let head = (code % g.high) * l;
        for b in 0..l {
            let u = head + b;
            if alive.get(u) {
                let ru = rank(u);
                outdeg[ru] -= 1;
                if outdeg[ru] == 0 {
                    queue.push_back(ru);
                }
            }
        }
    }
    let vertices = g
        .vertices
        .iter()
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|(&c, _)| c)
        .collect();
    AvoidanceGraph {
        s: g.s.clone(),
        l: g.l,
        n: g.n,
        high: g.high,
        present: alive,
        vertices,
        trimmed: true,
    }
}

/// Seeded letter stream along the core, in reading order.
///
/// The walk starts at a uniformly chosen core vertex, emits its letters, then keeps
/// appending a uniformly chosen letter whose new window is still a core vertex (an
/// in-neighbour, which the core always provides).
pub struct Walk {
    core: AvoidanceGraph,
    rng: ChaCha8Rng,
    current: u64,
    pending: VecDeque<u8>,
    emitted: u64,
}

impl Walk {
    /// Trims `g` first unless it already is a core.
    pub fn new(g: &AvoidanceGraph, seed: u64) -> Result<Walk> {
        let core = if g.trimmed { g.clone() } else { prune_core(g) };
        if core.is_empty() {
            return Err(Error::EmptyCore);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let current = core.vertices[rng.gen_range(0..core.vertices.len())];
        let pending = core.decode(current).into_letters().into();
        Ok(Walk {
            core,
            rng,
            current,
            pending,
            emitted: 0,
        })
    }

    pub fn steps_emitted(&self) -> u64 {
        self.emitted
    }

    /// Window of the last `N` letters produced so far (or the start vertex).
    pub fn current(&self) -> Word {
        self.core.decode(self.current)
    }
}

impl Iterator for Walk {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let letter = match self.pending.pop_front() {
            Some(a) => a,
            None => {
                let options: Vec<u64> = self.core.in_neighbors(self.current).collect();
                debug_assert!(!options.is_empty(), "core vertex without in-arcs");
                self.current = options[self.rng.gen_range(0..options.len())];
                (self.current % self.core.l as u64) as u8
            }
        };
        self.emitted += 1;
        Some(letter)
    }
}

/// Exactly `n_steps` letters of a seeded core walk.
pub fn random_walk(g: &AvoidanceGraph, seed: u64, n_steps: usize) -> Result<Word> {
    Ok(Word::new(Walk::new(g, seed)?.take(n_steps).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimKind {
    /// Every letter would create a square at position `step` (1-based); `word` is the stuck word.
    DeadEnd {
        step: usize,
        word: Word,
    },
    Survived {
        max_steps: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimOutcome {
    pub kind: SimKind,
    /// Length of the word when the simulation stopped.
    pub trace_len: usize,
}

/// Incremental suffix check used by the sequential method.
#[derive(Clone, Debug)]
pub struct SquareTracker {
    lengths: Vec<usize>,
    word: Vec<u8>,
    /// Run counters at the last position, one per length.
    runs: Vec<usize>,
}

impl SquareTracker {
    pub fn new(s: &LengthSeq) -> Self {
        SquareTracker {
            lengths: s.ascending().to_vec(),
            word: Vec::new(),
            runs: vec![0; s.r()],
        }
    }

    fn next_runs(&self, a: u8) -> impl Iterator<Item = usize> + '_ {
        let p = self.word.len();
        self.lengths.iter().zip(&self.runs).map(move |(&i, &run)| {
            if p >= i && self.word[p - i] == a {
                run + 1
            } else {
                0
            }
        })
    }

    /// Whether appending `a` completes a square.
    pub fn creates_square(&self, a: u8) -> bool {
        self.next_runs(a)
            .zip(&self.lengths)
            .any(|(run, &i)| run >= i)
    }

    /// Appends `a`; returns `false` (and leaves the word unchanged) if that creates a square.
    pub fn push(&mut self, a: u8) -> bool {
        if self.creates_square(a) {
            return false;
        }
        let runs: Vec<usize> = self.next_runs(a).collect();
        self.runs = runs;
        self.word.push(a);
        true
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn allowed(&self, l: usize) -> Vec<u8> {
        (0..l as u8).filter(|&a| !self.creates_square(a)).collect()
    }
}

/// The sequential method from the empty word.
pub fn sequential_simulate(
    s: &LengthSeq,
    l: usize,
    seed: u64,
    max_steps: usize,
) -> Result<SimOutcome> {
    sequential_simulate_from(s, l, &Word::new(Vec::new()), seed, max_steps)
}

/// The sequential method continuing `prefix`; `max_steps` counts appended letters.
pub fn sequential_simulate_from(
    s: &LengthSeq,
    l: usize,
    prefix: &Word,
    seed: u64,
    max_steps: usize,
) -> Result<SimOutcome> {
    if l > MAX_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            size: l,
            max: MAX_ALPHABET,
        });
    }
    if let Some(&a) = prefix.letters().iter().find(|&&a| a as usize >= l) {
        return Err(Error::LetterOutOfRange { letter: a, size: l });
    }
    if let Some(sq) = find_square(prefix, s) {
        return Err(Error::NotSquarefree {
            length: sq.length,
            start: sq.start,
        });
    }
    let mut tracker = SquareTracker::new(s);
    for &a in prefix.letters() {
        tracker.push(a);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_steps {
        let allowed = tracker.allowed(l);
        if allowed.is_empty() {
            let len = tracker.word().len();
            return Ok(SimOutcome {
                kind: SimKind::DeadEnd {
                    step: len + 1,
                    word: Word::new(tracker.word().to_vec()),
                },
                trace_len: len,
            });
        }
        tracker.push(allowed[rng.gen_range(0..allowed.len())]);
    }
    let len = tracker.word().len();
    if tracker.allowed(l).is_empty() {
        return Ok(SimOutcome {
            kind: SimKind::DeadEnd {
                step: len + 1,
                word: Word::new(tracker.word().to_vec()),
            },
            trace_len: len,
        });
    }
    Ok(SimOutcome {
        kind: SimKind::Survived { max_steps },
        trace_len: len,
    })
}

/// Every run of the sequential method at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exploration {
    /// Longest word any choice sequence reaches (capped at the limit).
    pub longest: usize,
    /// Number of distinct stuck words.
    pub dead_ends: usize,
    /// Some choice sequence reached the limit.
    pub reached_limit: bool,
}

/// Explores all choice sequences of the sequential method up to `limit` letters.
pub fn explore_sequential(s: &LengthSeq, l: usize, limit: usize) -> Result<Exploration> {
    if l > MAX_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            size: l,
            max: MAX_ALPHABET,
        });
    }
    fn go(t: &SquareTracker, l: usize, limit: usize, acc: &mut Exploration) {
        let len = t.word().len();
        acc.longest = acc.longest.max(len);
        if len == limit {
            acc.reached_limit = true;
            return;
        }
        let allowed = t.allowed(l);
        if allowed.is_empty() {
            acc.dead_ends += 1;
        }
        for a in allowed {
            let mut next = t.clone();
            next.push(a);
            go(&next, l, limit, acc);
        }
    }
    let mut acc = Exploration {
        longest: 0,
        dead_ends: 0,
        reached_limit: false,
    };
    go(&SquareTracker::new(s), l, limit, &mut acc);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{
        is_s_squarefree, reverse, square_created_by_append, square_created_by_prepend,
    };

    fn seq(v: &[usize]) -> LengthSeq {
        LengthSeq::from_slice(v).unwrap()
    }

    fn w(t: &str) -> Word {
        t.parse().unwrap()
    }

    fn build(v: &[usize], l: usize) -> AvoidanceGraph {
        AvoidanceGraph::build(&seq(v), l, DEFAULT_VERTEX_CAP).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(build(&[1, 2], 2).vertex_count(), 0);
        let g = build(&[1, 2], 3);
        assert!(!g.is_empty());
        assert!(build(&[3, 5], 2).contains(&w("aabaaaabab")));
    }

    #[test]
    fn vertices_match_a_scan() {
        for (v, l) in [
            (&[1, 2][..], 3),
            (&[2, 3][..], 2),
            (&[1, 3][..], 2),
            (&[3][..], 2),
        ] {
            let s = seq(v);
            let g = AvoidanceGraph::build(&s, l, DEFAULT_VERTEX_CAP).unwrap();
            let total = (l as u64).pow(s.ground_size() as u32);
            let scanned: Vec<u64> = (0..total)
                .filter(|&c| is_s_squarefree(&g.decode(c), &s))
                .collect();
            assert_eq!(g.vertex_codes(), &scanned[..]);
        }
    }

    #[test]
    fn budget_guard() {
        let res = AvoidanceGraph::build(&seq(&[3, 5]), 2, 1000);
        assert!(matches!(res, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn dead_end_examples() {
        let ends = dead_ends(&build(&[3, 5], 2));
        assert!(ends.contains(&w("aabaaaabab")));
        assert!(ends.contains(&w("bbabbbbaba")));
        assert!(dead_ends(&build(&[2, 4, 5], 2)).contains(&w("bbbaabbbab")));
        assert!(dead_ends(&build(&[1, 2], 3)).is_empty());
    }

    #[test]
    fn arcs_follow_prepend_and_duality_holds() {
        let s = seq(&[3, 5]);
        let g = build(&[3, 5], 2);
        for v in g.vertices() {
            let stuck_before = (0..2).all(|a| square_created_by_prepend(&v, a, &s).is_some());
            let stuck_after = (0..2).all(|a| square_created_by_append(&v, a, &s).is_some());
            let c = g.encode(&v).unwrap();
            assert_eq!(g.out_degree(c) == 0, stuck_before);
            assert_eq!(g.in_degree(c) == 0, stuck_after);
        }
        let mut reversed: Vec<Word> = dead_ends(&g).iter().map(reverse).collect();
        reversed.sort();
        assert_eq!(dead_starts(&g), reversed);
    }

    #[test]
    fn core_examples() {
        let g = build(&[1, 2], 3);
        assert_eq!(prune_core(&g), g);
        assert!(prune_core(&build(&[1, 2], 2)).is_empty());
        let g = build(&[3, 5], 2);
        let core = prune_core(&g);
        assert!(core.vertex_count() + 2 <= g.vertex_count());
        assert!(!core.contains(&w("aabaaaabab")));
        assert_eq!(prune_core(&core), core);
        for &c in core.vertex_codes() {
            assert!(core.out_degree(c) > 0 && core.in_degree(c) > 0);
        }
    }

    #[test]
    fn walk_examples() {
        let s = seq(&[1, 2]);
        let g = build(&[1, 2], 3);
        let walk = random_walk(&prune_core(&g), 7, 10_000).unwrap();
        assert_eq!(walk.len(), 10_000);
        assert!(is_s_squarefree(&walk, &s));
        assert_eq!(walk, random_walk(&g, 7, 10_000).unwrap());
        assert_eq!(
            random_walk(&build(&[1, 2], 2), 1, 10),
            Err(Error::EmptyCore)
        );
        let short = random_walk(&g, 3, 2).unwrap();
        assert_eq!(short.len(), 2);
    }

    #[test]
    fn simulation_examples() {
        let s = seq(&[1, 2]);
        for seed in 0..20 {
            match sequential_simulate(&s, 2, seed, 100).unwrap().kind {
                SimKind::DeadEnd { step, .. } => assert!(step <= 4),
                other => panic!("{other:?}"),
            }
        }
        let out = sequential_simulate(&s, 3, 1, 100_000).unwrap();
        assert_eq!(out.kind, SimKind::Survived { max_steps: 100_000 });
        assert_eq!(out.trace_len, 100_000);

        let out = sequential_simulate_from(&seq(&[1, 3, 5]), 3, &w("cbacacbac"), 0, 10).unwrap();
        assert_eq!(
            out.kind,
            SimKind::DeadEnd {
                step: 10,
                word: w("cbacacbac")
            }
        );
        assert!(sequential_simulate_from(&s, 3, &w("abab"), 0, 1).is_err());
    }

    #[test]
    fn exploration_examples() {
        let all = explore_sequential(&seq(&[1, 2]), 2, 50).unwrap();
        assert_eq!(
            all,
            Exploration {
                longest: 3,
                dead_ends: 2,
                reached_limit: false
            }
        );
        assert!(
            explore_sequential(&seq(&[1, 2]), 3, 12)
                .unwrap()
                .reached_limit
        );
    }
}
