//! The verification suite behind `sqfree verify`.
//!
//! Every check recomputes its claim with an independent method (exhaustive graph
//! builds, naive scans, orbit closure) and records failures instead of stopping.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use sqfree_core::partition::{is_candidate, primary_conditions_ok};
use sqfree_core::structure::{adjacent_similarity_predicted, orbit_formula};
use sqfree_core::Result as CoreResult;
use sqfree_core::*;

use crate::config::Budgets;
use crate::error::CliError;

/// Instance grid: all strictly increasing `s` with at most `r_max` lengths, largest at
/// most `i1_max`, and alphabets `2..=l_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub r_max: usize,
    pub i1_max: usize,
    pub l_max: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            r_max: 3,
            i1_max: 7,
            l_max: 3,
        }
    }
}

impl FromStr for Grid {
    type Err = CliError;

    /// `r<=3,i1<=7,l<=3`; omitted bounds keep their defaults.
    fn from_str(text: &str) -> std::result::Result<Self, CliError> {
        let mut grid = Grid::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once("<=").ok_or_else(|| {
                CliError::usage(format!("grid bound {part:?} must look like key<=value"))
            })?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("grid bound {part:?} needs a number")))?;
            match key.trim() {
                "r" => grid.r_max = value,
                "i1" => grid.i1_max = value,
                "l" => grid.l_max = value,
                other => {
                    return Err(CliError::usage(format!(
                        "unknown grid key {other:?} (use r, i1, l)"
                    )))
                }
            }
        }
        if grid.r_max == 0 || grid.i1_max == 0 || grid.l_max < 2 {
            return Err(CliError::usage("grid needs r>=1, i1>=1 and l>=2"));
        }
        if grid.i1_max > 24 {
            return Err(CliError::usage("grid i1 bound is limited to 24"));
        }
        Ok(grid)
    }
}

impl Grid {
    pub fn lengths(&self) -> Vec<LengthSeq> {
        increasing_sequences(self.i1_max, self.r_max)
    }
}

/// All strictly increasing sequences over `1..=max` with at most `r_max` terms, by
/// largest element, then lexicographically.
pub fn increasing_sequences(max: usize, r_max: usize) -> Vec<LengthSeq> {
    let mut out: Vec<Vec<usize>> = (1u32..1 << max)
        .map(|mask| {
            (1..=max)
                .filter(|i| mask >> (i - 1) & 1 == 1)
                .collect::<Vec<_>>()
        })
        .filter(|v| v.len() <= r_max)
        .collect();
    out.sort_by(|a, b| (a.last(), a.len(), a).cmp(&(b.last(), b.len(), b)));
    out.into_iter()
        .map(|v| LengthSeq::new(v).expect("increasing"))
        .collect()
}

/// Condition-C sequences with every length at least `min`.
pub fn condition_c_sequences(min: usize, i1_max: usize, r_max: usize) -> Vec<LengthSeq> {
    increasing_sequences(i1_max, r_max)
        .into_iter()
        .filter(|s| s.smallest() >= min && condition_c(s))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuditConfig {
    pub grid: Grid,
    pub walk_seed: u64,
    pub walk_steps: usize,
    pub budgets: Budgets,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            grid: Grid::default(),
            walk_seed: 0,
            walk_steps: 10_000,
            budgets: Budgets::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// First few failures.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

const MAX_LISTED_FAILURES: usize = 20;

struct Check {
    name: &'static str,
    description: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str, description: &'static str) -> Self {
        Check {
            name,
            description,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    fn finish(self) -> CheckResult {
        let failure_count = self.failures.len();
        CheckResult {
            name: self.name,
            description: self.description,
            passed: failure_count == 0,
            cases: self.cases,
            failures: self
                .failures
                .into_iter()
                .take(MAX_LISTED_FAILURES)
                .collect(),
            failure_count,
        }
    }
}

/// One `(s, l)` cell of the dead-end audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphRow {
    pub s: Vec<usize>,
    pub l: usize,
    pub verdict: &'static str,
    pub rule: &'static str,
    pub vertices: usize,
    pub dead_ends: usize,
    pub dead_starts: usize,
    /// Dead-ends read off candidate coarsenings.
    pub derived_dead_ends: usize,
    pub core_vertices: usize,
    #[serde(skip)]
    notes: GraphNotes,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct GraphNotes {
    derived_subset: bool,
    duality: bool,
    idempotent: bool,
    core_degrees: bool,
    /// `None` when the core is empty.
    walk: Option<std::result::Result<(), String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// Per `(s, l)` counts behind the dead-end verdict audit.
    pub theorem1: Vec<GraphRow>,
    /// Cells the closed-form verdict leaves open, with what the graph shows.
    pub unknown: Vec<GraphRow>,
}

fn kind_name(kind: DeadEnds) -> &'static str {
    match kind {
        DeadEnds::NoDeadEnds => "no_dead_ends",
        DeadEnds::HasDeadEnds => "has_dead_ends",
        DeadEnds::Unknown => "unknown",
    }
}

fn rule_name(rule: DeadEndRule) -> &'static str {
    match rule {
        DeadEndRule::FewerLengthsThanLetters => "fewer_lengths_than_letters",
        DeadEndRule::MinimalAlphabetMatches => "minimal_alphabet_matches",
        DeadEndRule::EverySubsequenceExceeds => "every_subsequence_exceeds",
        DeadEndRule::SubsequenceUndecided => "subsequence_undecided",
        DeadEndRule::MinimalAlphabetUnknown => "minimal_alphabet_unknown",
        DeadEndRule::TooManyLengths => "too_many_lengths",
    }
}

fn graph_row(s: &LengthSeq, l: usize, cfg: &AuditConfig) -> CoreResult<GraphRow> {
    let g = AvoidanceGraph::build(s, l, cfg.budgets.vertex_cap)?;
    let verdict = theorem1_predict(s, l);
    let ends = dead_ends(&g);
    let starts = dead_starts(&g);
    let brute: BTreeSet<&Word> = ends.iter().collect();
    let derived = dead_end_words_from(s, l, cfg.budgets.node_budget)?;
    let mut reversed: Vec<Word> = ends.iter().map(reverse).collect();
    reversed.sort();
    let core = prune_core(&g);
    let walk = (!core.is_empty()).then(|| {
        let w = random_walk(&core, cfg.walk_seed, cfg.walk_steps).map_err(|e| e.to_string())?;
        match naive_square(w.letters(), s.ascending()) {
            _ if w.len() != cfg.walk_steps => Err(format!("walk emitted {} letters", w.len())),
            Some((i, j)) => Err(format!("{i}-square at offset {j}")),
            None => Ok(()),
        }
    });
    let notes = GraphNotes {
        derived_subset: derived.iter().all(|w| brute.contains(w)),
        duality: starts == reversed,
        idempotent: prune_core(&core) == core,
        core_degrees: core
            .vertex_codes()
            .iter()
            .all(|&c| core.out_degree(c) > 0 && core.in_degree(c) > 0),
        walk,
    };
    Ok(GraphRow {
        s: s.ascending().to_vec(),
        l,
        verdict: kind_name(verdict.kind),
        rule: rule_name(verdict.rule),
        vertices: g.vertex_count(),
        dead_ends: ends.len(),
        dead_starts: starts.len(),
        derived_dead_ends: derived.len(),
        core_vertices: core.vertex_count(),
        notes,
    })
}

/// Quadratic square scan, independent of the word module.
pub fn naive_square(w: &[u8], s: &[usize]) -> Option<(usize, usize)> {
    s.iter().find_map(|&i| {
        (0..w.len())
            .find(|&j| j + 2 * i <= w.len() && w[j..j + i] == w[j + i..j + 2 * i])
            .map(|j| (i, j))
    })
}

/// Minimal alphabet sizes stated in closed form for small cases.
pub fn known_min_a_table() -> Vec<(Vec<usize>, MinAValue)> {
    let mut table = Vec::new();
    for i in 1..=5 {
        table.push((vec![i], MinAValue::Finite(2)));
    }
    for i1 in 3..=9 {
        for i2 in 2..i1 {
            table.push((
                vec![i2, i1],
                MinAValue::Finite(if 2 * i2 == i1 { 3 } else { 2 }),
            ));
        }
    }
    for i1 in 2..=7 {
        table.push((vec![1, i1], MinAValue::Finite(3)));
    }
    table.push((vec![2, 4, 8], MinAValue::Finite(4)));
    table.push((vec![3, 6, 12], MinAValue::Finite(4)));
    for s in condition_c_sequences(2, 11, 3)
        .into_iter()
        .filter(|s| s.r() == 3 && !is_geometric_doubling(s))
    {
        table.push((s.ascending().to_vec(), MinAValue::Finite(3)));
    }
    table.push((vec![1, 2, 5], MinAValue::Finite(4)));
    table.push((vec![1, 3, 5], MinAValue::Finite(3)));
    table.push((vec![2, 3, 5], MinAValue::Infinite));
    table.push((vec![2, 4, 5], MinAValue::Infinite));
    table
}

fn solve(s: &LengthSeq, budgets: &Budgets) -> CoreResult<MinAValue> {
    let config = SolverConfig {
        k_max: s.r() + 2,
        node_budget: budgets.node_budget,
    };
    Ok(min_a_exact(s, config)?.value)
}

fn structure_checks(budgets: &Budgets) -> CoreResult<Vec<CheckResult>> {
    let family = condition_c_sequences(2, 12, 4);

    let mut recursive = Check::new(
        "generic_word_recursive",
        "substitution construction equals the orbit closure",
    );
    let mut formula = Check::new(
        "orbit_formula",
        "orbit membership formula matches the orbit closure",
    );
    let mut cor2 = Check::new(
        "dissimilarity",
        "lengths pairwise dissimilar, i not similar to 2i, and the x~x+1 criterion, under condition C",
    );
    for s in &family {
        let o = orbit_closure(s);
        recursive.case(
            generic_word_recursive(s).ok() == Some(generic_word_of(&o)),
            || format!("{s}"),
        );
        if s.r() >= 2 {
            for x in 1..=s.ground_size() {
                if let Some(orbit) = orbit_formula(s, x) {
                    formula.case(orbit == o.blocks()[o.block_of(x)], || format!("{s} at {x}"));
                }
            }
        }
        let adjacent = (1..s.ground_size()).any(|x| o.similar(x, x + 1));
        cor2.case(
            primary_conditions_ok(&o, s) && adjacent == adjacent_similarity_predicted(s),
            || format!("{s}"),
        );
    }

    let mut equ = Check::new(
        "sum_equality_square",
        "i1 equal to the sum of the other lengths forces a square in o(s)",
    );
    for s in increasing_sequences(20, 4).iter().filter(|s| s.r() >= 3) {
        if 2 * s.largest() == s.ascending().iter().sum::<usize>() {
            let o = orbit_closure(s);
            equ.case(
                s.ascending()
                    .iter()
                    .any(|&i| partition_has_square(&o, i).is_some()),
                || format!("{s}"),
            );
        }
    }
    let mut cond_d = Check::new("condition_d", "condition D rules out o(s) as a candidate");
    for s in increasing_sequences(14, 4)
        .iter()
        .filter(|s| condition_d(s))
    {
        cond_d.case(!is_candidate(&orbit_closure(s), s), || format!("{s}"));
    }

    let mut table = Check::new(
        "min_a_table",
        "exact minimal alphabet sizes equal the closed-form table",
    );
    let rows: Vec<_> = known_min_a_table()
        .into_par_iter()
        .map(|(v, want)| {
            let s = LengthSeq::new(v).expect("table lengths are increasing");
            solve(&s, budgets).map(|got| (s, want, got))
        })
        .collect::<CoreResult<_>>()?;
    for (s, want, got) in rows {
        table.case(got == want, || format!("{s}: exact {got}, expected {want}"));
    }

    let mut predict = Check::new(
        "min_a_prediction",
        "closed-form minA agrees with the exact solver (r<=3, i1<=9)",
    );
    let rows: Vec<_> = increasing_sequences(9, 3)
        .into_par_iter()
        .map(|s| solve(&s, budgets).map(|got| (predict_min_a(&s), got, s)))
        .collect::<CoreResult<_>>()?;
    for (p, got, s) in rows {
        let ok = match (p, got) {
            (MinAVerdict::Finite(a), MinAValue::Finite(b)) => a == b,
            (MinAVerdict::Infinite, MinAValue::Infinite) => true,
            (MinAVerdict::UnknownBounded(bound), MinAValue::Finite(k)) => k <= bound,
            (MinAVerdict::UnknownBounded(_), MinAValue::Infinite) => true,
            _ => false,
        };
        predict.case(ok, || format!("{s}: predicted {p}, exact {got}"));
    }

    Ok(vec![
        recursive.finish(),
        formula.finish(),
        cor2.finish(),
        equ.finish(),
        cond_d.finish(),
        table.finish(),
        predict.finish(),
    ])
}

/// Runs every suite. Errors only when a budget stops a computation.
pub fn run_audit(cfg: &AuditConfig) -> CoreResult<AuditReport> {
    let cells: Vec<(LengthSeq, usize)> = cfg
        .grid
        .lengths()
        .into_iter()
        .flat_map(|s| (2..=cfg.grid.l_max).map(move |l| (s.clone(), l)))
        .collect();
    let rows: Vec<GraphRow> = cells
        .par_iter()
        .map(|(s, l)| graph_row(s, *l, cfg))
        .collect::<CoreResult<_>>()?;

    let label = |r: &GraphRow| format!("{} l={}", LengthSeq::from_slice(&r.s).expect("valid"), r.l);
    let mut verdicts = Check::new(
        "dead_end_verdicts",
        "decided dead-end verdicts match the built graphs",
    );
    let mut derived = Check::new(
        "derived_dead_ends",
        "dead-ends read off candidates are graph dead-ends",
    );
    let mut duality = Check::new("duality", "dead-starts are the reversed dead-ends");
    let mut idempotent = Check::new("core_idempotent", "trimming the core again changes nothing");
    let mut degrees = Check::new("core_degrees", "every core vertex has in- and out-arcs");
    let mut walks = Check::new(
        "walks",
        "seeded core walks have the requested length and no square",
    );
    for r in &rows {
        let ok = match r.verdict {
            "no_dead_ends" => r.dead_ends == 0,
            "has_dead_ends" => r.dead_ends > 0,
            _ => true,
        };
        verdicts.case(ok, || {
            format!("{}: {} but {} dead-ends", label(r), r.verdict, r.dead_ends)
        });
        derived.case(r.notes.derived_subset, || label(r));
        duality.case(r.notes.duality, || label(r));
        idempotent.case(r.notes.idempotent, || label(r));
        degrees.case(r.notes.core_degrees, || label(r));
        if let Some(walk) = &r.notes.walk {
            walks.case(walk.is_ok(), || {
                format!("{}: {}", label(r), walk.clone().unwrap_err())
            });
        }
    }

    let mut checks = vec![
        verdicts.finish(),
        derived.finish(),
        duality.finish(),
        idempotent.finish(),
        degrees.finish(),
        walks.finish(),
    ];
    checks.extend(structure_checks(&cfg.budgets)?);
    let unknown = rows
        .iter()
        .filter(|r| r.verdict == "unknown")
        .cloned()
        .collect();
    Ok(AuditReport {
        config: *cfg,
        passed: checks.iter().all(|c| c.passed),
        checks,
        theorem1: rows,
        unknown,
    })
}

impl AuditReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let g = self.config.grid;
        writeln!(
            out,
            "audit grid: r<={}, i1<={}, l<={}",
            g.r_max, g.i1_max, g.l_max
        )
        .unwrap();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{status} {:<24} {:>6} cases  {}",
                c.name, c.cases, c.description
            )
            .unwrap();
            for f in &c.failures {
                writeln!(out, "     - {f}").unwrap();
            }
            if c.failure_count > c.failures.len() {
                writeln!(out, "     ... {} more", c.failure_count - c.failures.len()).unwrap();
            }
        }
        let count = |verdict: &str, empty: bool| {
            self.theorem1
                .iter()
                .filter(|r| r.verdict == verdict && (r.dead_ends == 0) == empty)
                .count()
        };
        writeln!(out, "dead-end verdicts:").unwrap();
        writeln!(out, "  {:<14} {:>10} {:>10}", "verdict", "none", "some").unwrap();
        for v in ["no_dead_ends", "has_dead_ends", "unknown"] {
            writeln!(
                out,
                "  {:<14} {:>10} {:>10}",
                v,
                count(v, true),
                count(v, false)
            )
            .unwrap();
        }
        writeln!(out, "open cells ({}):", self.unknown.len()).unwrap();
        for r in &self.unknown {
            let s = LengthSeq::from_slice(&r.s).expect("valid");
            writeln!(
                out,
                "  {:<12} l={}  {:<26} dead-ends {}",
                s.to_string(),
                r.l,
                r.rule,
                r.dead_ends
            )
            .unwrap();
        }
        writeln!(
            out,
            "{}",
            if self.passed {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        )
        .unwrap();
        out
    }
}
