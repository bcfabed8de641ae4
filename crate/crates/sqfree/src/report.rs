//! Command results: serializable reports, the JSON envelope and text renderings.

use std::fmt::Write;

use serde::Serialize;
use sqfree_core::structure::MinAVerdict;
use sqfree_core::*;

use crate::config::RunConfig;
use crate::export::Adjacency;

pub const TOOL: &str = "sqfree";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Wraps a result with the tool version and the config it came from.
pub fn envelope<T: Serialize>(config: &RunConfig, result: &T) -> serde_json::Value {
    serde_json::json!({
        "tool": TOOL,
        "version": VERSION,
        "command": config.command,
        "config": config,
        "config_hash": config.hash(),
        "result": result,
    })
}

/// `{1,4,6,9},{2,5,7},...` style block lists.
fn render_blocks(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| {
            format!(
                "{{{}}}",
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitsReport {
    pub s: Vec<usize>,
    pub ground_size: usize,
    pub orbit_count: usize,
    pub blocks: Vec<Vec<usize>>,
    pub generic_word: String,
    /// The substitution construction, when it applies (condition C, lengths at least 2).
    pub generic_word_recursive: Option<String>,
}

impl OrbitsReport {
    pub fn new(s: &LengthSeq) -> Self {
        let o = orbit_closure(s);
        OrbitsReport {
            s: s.ascending().to_vec(),
            ground_size: s.ground_size(),
            orbit_count: o.num_blocks(),
            blocks: o.blocks(),
            generic_word: generic_word_of(&o).to_string(),
            generic_word_recursive: generic_word_recursive(s).ok().map(|w| w.to_string()),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = LengthSeq::from_slice(&self.s).expect("validated");
        writeln!(out, "s = {s}  N = {}", self.ground_size).unwrap();
        writeln!(out, "o(s) = {}", render_blocks(&self.blocks)).unwrap();
        writeln!(out, "w(s) = {}", self.generic_word).unwrap();
        writeln!(out, "orbits: {}", self.orbit_count).unwrap();
        if let Some(w) = &self.generic_word_recursive {
            let agree = if *w == self.generic_word {
                "agrees"
            } else {
                "DIFFERS"
            };
            writeln!(out, "substitution construction: {w} ({agree})").unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictJson {
    Finite { value: usize },
    Infinite,
    UnknownBounded { bound: usize },
}

impl From<MinAVerdict> for VerdictJson {
    fn from(v: MinAVerdict) -> Self {
        match v {
            MinAVerdict::Finite(value) => VerdictJson::Finite { value },
            MinAVerdict::Infinite => VerdictJson::Infinite,
            MinAVerdict::UnknownBounded(bound) => VerdictJson::UnknownBounded { bound },
        }
    }
}

impl From<MinAValue> for VerdictJson {
    fn from(v: MinAValue) -> Self {
        match v {
            MinAValue::Finite(value) => VerdictJson::Finite { value },
            MinAValue::Infinite => VerdictJson::Infinite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub k: usize,
    pub candidate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinAReport {
    pub s: Vec<usize>,
    pub predicted: VerdictJson,
    pub exact: VerdictJson,
    /// `null` when the prediction is only an upper bound.
    pub agree: Option<bool>,
    /// With an upper-bound prediction: whether the exact value respects it.
    pub within_bound: Option<bool>,
    pub witness: Option<Vec<Vec<usize>>>,
    pub profile: Vec<ProfileEntry>,
    pub orbit_count: usize,
    /// Chromatic number of the difference graph, if small enough to colour.
    pub chromatic_lower_bound: Option<usize>,
}

impl MinAReport {
    pub fn new(s: &LengthSeq, config: SolverConfig) -> Result<Self> {
        let predicted = predict_min_a(s);
        let exact = min_a_exact(s, config)?;
        let same = |p: MinAVerdict| match (p, exact.value) {
            (MinAVerdict::Finite(a), MinAValue::Finite(b)) => a == b,
            (MinAVerdict::Infinite, MinAValue::Infinite) => true,
            _ => false,
        };
        let (agree, within_bound) = match predicted {
            MinAVerdict::UnknownBounded(bound) => (
                None,
                Some(matches!(exact.value, MinAValue::Finite(k) if k <= bound)),
            ),
            p => (Some(same(p)), None),
        };
        let chromatic = match exact.value {
            MinAValue::Finite(_) => chromatic_number(&primary_difference_graph(s), 24).ok(),
            MinAValue::Infinite => None,
        };
        Ok(MinAReport {
            s: s.ascending().to_vec(),
            predicted: predicted.into(),
            exact: exact.value.into(),
            agree,
            within_bound,
            witness: exact.witness.map(|w| w.blocks()),
            profile: exact
                .profile
                .iter()
                .map(|&(k, candidate)| ProfileEntry { k, candidate })
                .collect(),
            orbit_count: exact.orbits,
            chromatic_lower_bound: chromatic,
        })
    }

    pub fn render_text(&self) -> String {
        fn verdict(v: &VerdictJson) -> String {
            match v {
                VerdictJson::Finite { value } => format!("Finite({value})"),
                VerdictJson::Infinite => "Infinite".to_string(),
                VerdictJson::UnknownBounded { bound } => format!("UnknownBounded({bound})"),
            }
        }
        let mut out = String::new();
        let s = LengthSeq::from_slice(&self.s).expect("validated");
        writeln!(out, "s = {s}").unwrap();
        writeln!(out, "predicted: {}", verdict(&self.predicted)).unwrap();
        writeln!(out, "exact: {}", verdict(&self.exact)).unwrap();
        match (self.agree, self.within_bound) {
            (Some(a), _) => writeln!(out, "agree: {}", if a { "yes" } else { "NO" }).unwrap(),
            (None, Some(w)) => {
                writeln!(out, "within bound: {}", if w { "yes" } else { "NO" }).unwrap()
            }
            (None, None) => {}
        }
        if let Some(w) = &self.witness {
            writeln!(out, "witness: {}", render_blocks(w)).unwrap();
        }
        if !self.profile.is_empty() {
            let cells: Vec<String> = self
                .profile
                .iter()
                .map(|p| format!("k={} {}", p.k, if p.candidate { "yes" } else { "no" }))
                .collect();
            writeln!(out, "profile: {}", cells.join(", ")).unwrap();
        }
        writeln!(out, "orbits: {}", self.orbit_count).unwrap();
        if let Some(c) = self.chromatic_lower_bound {
            writeln!(out, "difference graph chromatic number: {c}").unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub s: Vec<usize>,
    pub l: usize,
    pub word_length: usize,
    pub vertices: usize,
    pub arcs: usize,
    pub dead_end_count: usize,
    pub dead_start_count: usize,
    pub core_vertices: usize,
    pub core_arcs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dead_ends: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dead_starts: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Adjacency>,
}

impl GraphReport {
    /// Statistics for `g`; `list_*` add the word lists, `adjacency` the exported graph.
    pub fn new(
        g: &AvoidanceGraph,
        list_ends: bool,
        list_starts: bool,
        adjacency: Option<Adjacency>,
    ) -> Self {
        let core = prune_core(g);
        let ends = dead_ends(g);
        let starts = dead_starts(g);
        let words = |ws: &[Word]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        GraphReport {
            s: g.lengths().ascending().to_vec(),
            l: g.alphabet_size(),
            word_length: g.word_length(),
            vertices: g.vertex_count(),
            arcs: g.arc_count(),
            dead_end_count: ends.len(),
            dead_start_count: starts.len(),
            core_vertices: core.vertex_count(),
            core_arcs: core.arc_count(),
            dead_ends: list_ends.then(|| words(&ends)),
            dead_starts: list_starts.then(|| words(&starts)),
            adjacency,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = LengthSeq::from_slice(&self.s).expect("validated");
        writeln!(
            out,
            "G{s} over {} letters, N = {}",
            self.l, self.word_length
        )
        .unwrap();
        writeln!(out, "vertices: {}", self.vertices).unwrap();
        writeln!(out, "arcs: {}", self.arcs).unwrap();
        writeln!(out, "dead-ends: {}", self.dead_end_count).unwrap();
        writeln!(out, "dead-starts: {}", self.dead_start_count).unwrap();
        writeln!(
            out,
            "core: {} vertices, {} arcs",
            self.core_vertices, self.core_arcs
        )
        .unwrap();
        for (title, list) in [
            ("dead-end words", &self.dead_ends),
            ("dead-start words", &self.dead_starts),
        ] {
            if let Some(words) = list {
                writeln!(out, "{title}:").unwrap();
                for w in words {
                    writeln!(out, "  {w}").unwrap();
                }
            }
        }
        if let Some(adj) = &self.adjacency {
            writeln!(out, "adjacency:").unwrap();
            for (k, v) in adj.vertices.iter().enumerate() {
                let targets: Vec<&str> = adj
                    .arcs
                    .iter()
                    .filter(|a| a[0] == k)
                    .map(|a| adj.vertices[a[1]].as_str())
                    .collect();
                writeln!(out, "  {v} -> {}", targets.join(" ")).unwrap();
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub outcome: &'static str,
    /// Position that could not be filled, for dead-ends.
    pub step: Option<usize>,
    pub trace_len: usize,
    /// The stuck word, for dead-ends.
    pub word: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulateReport {
    pub s: Vec<usize>,
    pub l: usize,
    pub prefix: String,
    pub max_steps: usize,
    pub trials: Vec<TrialRow>,
    pub dead_end_count: usize,
    pub survived_count: usize,
}

impl SimulateReport {
    /// Runs `trials` simulations with seeds `seed, seed + 1, ...`.
    pub fn new(
        s: &LengthSeq,
        l: usize,
        prefix: &Word,
        seed: u64,
        max_steps: usize,
        trials: usize,
    ) -> Result<Self> {
        let mut rows = Vec::with_capacity(trials);
        for trial in 0..trials {
            let seed = seed.wrapping_add(trial as u64);
            let out = sequential_simulate_from(s, l, prefix, seed, max_steps)?;
            rows.push(match out.kind {
                SimKind::DeadEnd { step, word } => TrialRow {
                    trial: trial + 1,
                    seed,
                    outcome: "dead_end",
                    step: Some(step),
                    trace_len: out.trace_len,
                    word: Some(word.to_string()),
                },
                SimKind::Survived { .. } => TrialRow {
                    trial: trial + 1,
                    seed,
                    outcome: "survived",
                    step: None,
                    trace_len: out.trace_len,
                    word: None,
                },
            });
        }
        let dead = rows.iter().filter(|r| r.outcome == "dead_end").count();
        Ok(SimulateReport {
            s: s.ascending().to_vec(),
            l,
            prefix: prefix.to_string(),
            max_steps,
            dead_end_count: dead,
            survived_count: rows.len() - dead,
            trials: rows,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = LengthSeq::from_slice(&self.s).expect("validated");
        write!(out, "sequential method for s = {s} over {} letters", self.l).unwrap();
        if !self.prefix.is_empty() {
            write!(out, " from {}", self.prefix).unwrap();
        }
        writeln!(out, ", up to {} steps", self.max_steps).unwrap();
        writeln!(
            out,
            "{:>6} {:>20} {:>9} {:>8} {:>8}  word",
            "trial", "seed", "outcome", "step", "length"
        )
        .unwrap();
        for r in &self.trials {
            let step = r.step.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
            let word = match &r.word {
                Some(w) if w.len() <= 60 => w.clone(),
                Some(w) => format!("...{}", &w[w.len() - 57..]),
                None => String::new(),
            };
            let outcome = if r.outcome == "dead_end" {
                "dead-end"
            } else {
                "survived"
            };
            writeln!(
                out,
                "{:>6} {:>20} {:>9} {:>8} {:>8}  {}",
                r.trial, r.seed, outcome, step, r.trace_len, word
            )
            .unwrap();
        }
        writeln!(
            out,
            "dead-ends: {}, survived: {}",
            self.dead_end_count, self.survived_count
        )
        .unwrap();
        out
    }
}
