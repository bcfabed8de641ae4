#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use sqfree_core::partition::{is_partition_s_squarefree, orbit_closure_on};
use sqfree_core::word::{find_square, square_created_by_prepend, squares_created_by_append};
use sqfree_core::*;

fn seq(v: &[usize]) -> LengthSeq {
    LengthSeq::from_slice(v).unwrap()
}

// O(|w|^2) scan: every start, every length in s.
fn naive_has_square(w: &[u8], s: &[usize]) -> bool {
    s.iter()
        .any(|&i| (0..w.len()).any(|j| j + 2 * i <= w.len() && w[j..j + i] == w[j + i..j + 2 * i]))
}

fn lengths() -> impl Strategy<Value = LengthSeq> {
    proptest::collection::btree_set(1usize..8, 1..4)
        .prop_map(|set| LengthSeq::new(set.into_iter().collect()).unwrap())
}

fn word(max_len: usize, l: u8) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..l, 0..max_len).prop_map(Word::new)
}

fn partition(n: usize) -> impl Strategy<Value = SetPartition> {
    proptest::collection::vec(0usize..n, n).prop_map(|labels| SetPartition::from_labels(&labels))
}

proptest! {
    #[test]
    fn reversal_maps_squares(w in word(24, 3), i in 1usize..8) {
        let n = w.len();
        prop_assume!(2 * i <= n);
        let rev = reverse(&w);
        for j in 1..=n + 1 - 2 * i {
            prop_assert_eq!(
                has_square_at(&w, i, j).unwrap(),
                has_square_at(&rev, i, n - (j + 2 * i - 1) + 1).unwrap()
            );
        }
    }

    #[test]
    fn append_check_agrees_with_full_scan(w in word(30, 3), s in lengths(), a in 0u8..3) {
        prop_assume!(is_s_squarefree(&w, &s));
        let extended = w.appended(a);
        prop_assert_eq!(square_created_by_append(&w, a, &s).is_none(), is_s_squarefree(&extended, &s));
        for sq in squares_created_by_append(&w, a, &s) {
            prop_assert_eq!(sq.start + 2 * sq.length - 1, extended.len());
            prop_assert!(has_square_at(&extended, sq.length, sq.start).unwrap());
        }
    }

    #[test]
    fn prepend_check_agrees_with_full_scan(w in word(30, 3), s in lengths(), a in 0u8..3) {
        prop_assume!(is_s_squarefree(&w, &s));
        prop_assert_eq!(square_created_by_prepend(&w, a, &s).is_none(), is_s_squarefree(&w.prepended(a), &s));
    }

    #[test]
    fn word_and_partition_squares_agree(w in word(20, 3), s in lengths()) {
        let p = SetPartition::of_word(&w);
        let by_partition = s.ascending().iter().all(|&i| partition_has_square(&p, i).is_none());
        prop_assert_eq!(is_s_squarefree(&w, &s), by_partition);
        prop_assert_eq!(is_partition_s_squarefree(&p, &s), by_partition);
    }

    #[test]
    fn refines_is_a_partial_order(p in partition(8), q in partition(8), t in partition(8)) {
        prop_assert!(refines(&p, &p).unwrap());
        if refines(&p, &q).unwrap() && refines(&q, &p).unwrap() {
            prop_assert_eq!(&p, &q);
        }
        if refines(&p, &q).unwrap() && refines(&q, &t).unwrap() {
            prop_assert!(refines(&p, &t).unwrap());
        }
        prop_assert!(refines(&SetPartition::discrete(8), &p).unwrap());
    }

    #[test]
    fn generic_word_is_a_complete_invariant(p in partition(8), q in partition(8)) {
        prop_assert_eq!(p == q, generic_word_of(&p) == generic_word_of(&q));
        prop_assert_eq!(generic_word_of(&p).to_partition(), p);
    }

    #[test]
    fn coarsenings_are_refined_by_their_source(p in partition(6), k in 1usize..7) {
        prop_assume!(k <= p.num_blocks());
        for c in coarsenings_with_k_blocks(&p, k).unwrap() {
            prop_assert_eq!(c.num_blocks(), k);
            prop_assert!(refines(&p, &c).unwrap());
        }
    }
}

#[test]
fn exhaustive_scan_agreement_up_to_length_12() {
    let sets: Vec<Vec<usize>> = vec![
        vec![1],
        vec![2],
        vec![3],
        vec![1, 2],
        vec![2, 3],
        vec![1, 3, 5],
        vec![2, 4, 6],
    ];
    let mut words = vec![Vec::<u8>::new()];
    for _ in 0..12 {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..3u8).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
        for letters in &words {
            let w = Word::new(letters.clone());
            for v in &sets {
                let s = seq(v);
                assert_eq!(is_s_squarefree(&w, &s), !naive_has_square(letters, v));
                assert_eq!(find_square(&w, &s).is_some(), naive_has_square(letters, v));
            }
        }
    }
}

#[test]
fn coarsening_counts_are_stirling_numbers() {
    // S(n, k) by the usual recurrence.
    let mut stirling = vec![vec![0usize; 8]; 8];
    stirling[0][0] = 1;
    for n in 1..8 {
        for k in 1..=n {
            stirling[n][k] = k * stirling[n - 1][k] + stirling[n - 1][k - 1];
        }
    }
    for n in 1..8 {
        let p = SetPartition::discrete(n);
        for k in 1..=n {
            let all: Vec<_> = coarsenings_with_k_blocks(&p, k).unwrap().collect();
            assert_eq!(all.len(), stirling[n][k], "S({n},{k})");
            let mut dedup = all.clone();
            dedup.sort_by_key(|c| c.labels().to_vec());
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
    }
}

fn all_increasing(max: usize, r_max: usize) -> Vec<Vec<usize>> {
    (1u32..1 << max)
        .map(|mask| {
            (1..=max)
                .filter(|i| mask >> (i - 1) & 1 == 1)
                .collect::<Vec<_>>()
        })
        .filter(|v| v.len() <= r_max)
        .collect()
}

#[test]
fn tau_is_an_involution() {
    for n in 2..=20 {
        for i in 1..=n / 2 {
            for t in 1..=n {
                assert_eq!(tau_apply(i, tau_apply(i, t, n).unwrap(), n).unwrap(), t);
            }
        }
    }
    assert!(tau_apply(6, 1, 10).is_err());
}

#[test]
fn orbit_closure_is_invariant_and_minimal() {
    for v in all_increasing(10, 4) {
        let s = seq(&v);
        let o = orbit_closure(&s);
        let n = s.ground_size();
        for &i in s.ascending() {
            assert_eq!(
                o.permuted(|t| tau_apply(i, t, n).unwrap()),
                o,
                "tau_{i} on {s}"
            );
        }
        // BFS over the generators from each point recovers exactly its block.
        for x in 1..=n {
            let mut seen = vec![false; n + 1];
            let mut stack = vec![x];
            seen[x] = true;
            while let Some(t) = stack.pop() {
                for &i in s.ascending() {
                    let u = tau_apply(i, t, n).unwrap();
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            for y in 1..=n {
                assert_eq!(seen[y], o.similar(x, y), "{s}: {x} vs {y}");
            }
        }
        assert_eq!(orbit_closure_on(s.ascending(), n), o);
    }
}
