//! The staircase transform between partitions and jagged partitions, block
//! grammar validation, and the generating-function reinstatement map.
//!
//! Removing an `s`-staircase from `p_1 + p_2 + ... + p_m` (weakly increasing)
//! gives the sequence `p_1, p_2 - s, p_3 - 2s, ..., p_m - (m-1)s`, which may
//! be non-monotone and non-positive but whose successive differences are at
//! least `-s`. On generating functions, reinstatement is the substitution
//! `x^m -> x^m q^(s m(m-1)/2)`.

use crate::rules::{Partition, RuleSet};
use crate::series::{BivariateSeries, LaurentSeries};
use crate::Error;
use serde::{Deserialize, Serialize};

/// A jagged partition: the image of a partition under staircase removal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JaggedPartition {
    entries: Vec<i64>,
    step: u32,
}

impl JaggedPartition {
    pub fn new(entries: Vec<i64>, step: u32) -> Self {
        assert!(step >= 1);
        assert!(
            entries.windows(2).all(|w| w[1] - w[0] >= -(step as i64)),
            "successive differences must be at least -{step}"
        );
        JaggedPartition { entries, step }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of entries: the original weight minus the removed staircase.
    pub fn weight(&self) -> i64 {
        self.entries.iter().sum()
    }
}

/// `s * m(m-1)/2`: the weight of the staircase removed from `m` parts.
pub fn staircase_weight(s: u32, m: usize) -> i64 {
    let m = m as i64;
    s as i64 * m * (m - 1) / 2
}

/// Remove an `s`-staircase from `pi` (optionally from `0 + pi`).
pub fn remove_staircase(pi: &Partition, s: u32, prepend_zero: bool) -> JaggedPartition {
    let mut seq: Vec<i64> = Vec::with_capacity(pi.len() + 1);
    if prepend_zero {
        seq.push(0);
    }
    seq.extend(pi.parts().iter().map(|&p| p as i64));
    let entries = seq
        .iter()
        .enumerate()
        .map(|(t, &p)| p - s as i64 * t as i64)
        .collect();
    JaggedPartition::new(entries, s)
}

/// Reinstate an `s`-staircase on an x-graded generating function: row `m` is
/// shifted up by `s m(m-1)/2` powers of `q`. Row windows move with it, so a
/// pre-image tracked to order `N - s m(m-1)/2` in row `m` yields a result
/// exact to order `N` everywhere.
pub fn reinstate_staircase(gf: &BivariateSeries, s: u32) -> BivariateSeries {
    let rows = gf
        .rows()
        .iter()
        .enumerate()
        .map(|(m, r)| r.shifted(staircase_weight(s, m)))
        .collect();
    BivariateSeries::from_rows(rows)
}

/// Bivariate generating function of `{remove_staircase(pi, s) : pi accepted}`
/// over all accepted partitions of weight at most `max_n`: row `m` counts
/// jagged weights of the length-`m` partitions. Row `m` is tracked exactly on
/// `[min(m,0) - s m(m-1)/2 .. max_n - s m(m-1)/2]`, the provable window.
pub fn jagged_generating_function(rules: &RuleSet, s: u32, max_n: u32) -> BivariateSeries {
    let max_m = (0..)
        .take_while(|&m| staircase_weight(s, m) <= max_n as i64)
        .last()
        .unwrap();
    let mut rows: Vec<LaurentSeries> = (0..=max_m)
        .map(|m| {
            let shift = staircase_weight(s, m);
            LaurentSeries::zero_on((m as i64 - shift).min(0), max_n as i64 - shift)
        })
        .collect();
    for n in 0..=max_n {
        for pi in rules.enumerate(n) {
            let mu = remove_staircase(&pi, s, false);
            let m = mu.len();
            if m <= max_m {
                *rows[m].coeff_mut(mu.weight()) += 1;
            }
        }
    }
    BivariateSeries::from_rows(rows)
}

/// Which branch of the two-case construction a partition falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case4a {
    /// The jagged partition keeps the fictitious zero (x-degree shifts by 1).
    A,
    /// Plain staircase removal.
    B,
}

/// The two-case jagged image used by the asymmetric identity with a
/// fictitious leading zero: remove a 2-staircase from `0 + pi`; if every `0`
/// in the result is immediately followed by `-1` and no `-1` is immediately
/// followed by `1`, keep it (case a); otherwise remove the staircase from
/// `pi` itself (case b).
pub fn classify_4a(pi: &Partition, rules_4a: &RuleSet) -> Result<(Case4a, JaggedPartition), Error> {
    if !rules_4a.matches(pi) {
        return Err(Error::RuleViolation(pi.to_string()));
    }
    let tilde = remove_staircase(pi, 2, true);
    let e = tilde.entries();
    let mut case_a = true;
    for (t, &v) in e.iter().enumerate() {
        if v == 0 && e.get(t + 1) != Some(&-1) {
            case_a = false;
            break;
        }
        if v == -1 && e.get(t + 1) == Some(&1) {
            case_a = false;
            break;
        }
    }
    if case_a {
        Ok((Case4a::A, tilde))
    } else {
        Ok((Case4a::B, remove_staircase(pi, 2, false)))
    }
}

// ---------------------------------------------------------------------------
// Block grammars
// ---------------------------------------------------------------------------

/// A regular expression over integer sequences. Inside a [`LabelRule`] the
/// literal values are offsets from the block label; inside an
/// [`InitialBlock`] they are absolute entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regex {
    Lit(Vec<i64>),
    Seq(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Opt(Box<Regex>),
}

impl Regex {
    pub fn lit(vals: &[i64]) -> Regex {
        Regex::Lit(vals.to_vec())
    }

    pub fn star(vals: &[i64]) -> Regex {
        Regex::Star(Box::new(Regex::lit(vals)))
    }

    pub fn plus(vals: &[i64]) -> Regex {
        Regex::Plus(Box::new(Regex::lit(vals)))
    }

    pub fn opt(vals: &[i64]) -> Regex {
        Regex::Opt(Box::new(Regex::lit(vals)))
    }

    pub fn seq(items: Vec<Regex>) -> Regex {
        Regex::Seq(items)
    }
}

/// Match `node` against `seq` from `pos`, every literal value shifted by
/// `shift`; `k` is the continuation receiving the end position.
fn match_node(
    node: &Regex,
    seq: &[i64],
    pos: usize,
    shift: i64,
    k: &mut dyn FnMut(usize) -> bool,
) -> bool {
    match node {
        Regex::Lit(vals) => {
            if pos + vals.len() <= seq.len()
                && vals.iter().enumerate().all(|(i, &v)| seq[pos + i] == v + shift)
            {
                k(pos + vals.len())
            } else {
                false
            }
        }
        Regex::Seq(items) => match_seq(items, seq, pos, shift, k),
        Regex::Alt(opts) => opts.iter().any(|o| match_node(o, seq, pos, shift, k)),
        Regex::Opt(inner) => k(pos) || match_node(inner, seq, pos, shift, k),
        Regex::Star(inner) => match_star(inner, seq, pos, shift, k),
        Regex::Plus(inner) => {
            match_node(inner, seq, pos, shift, &mut |p| match_star(inner, seq, p, shift, k))
        }
    }
}

fn match_seq(
    items: &[Regex],
    seq: &[i64],
    pos: usize,
    shift: i64,
    k: &mut dyn FnMut(usize) -> bool,
) -> bool {
    match items.split_first() {
        None => k(pos),
        Some((head, rest)) => {
            match_node(head, seq, pos, shift, &mut |p| match_seq(rest, seq, p, shift, k))
        }
    }
}

fn match_star(
    inner: &Regex,
    seq: &[i64],
    pos: usize,
    shift: i64,
    k: &mut dyn FnMut(usize) -> bool,
) -> bool {
    if k(pos) {
        return true;
    }
    // An empty inner match would loop; require progress.
    match_node(inner, seq, pos, shift, &mut |p| {
        p > pos && match_star(inner, seq, p, shift, k)
    })
}

/// Grammar for the maximal block whose label (first entry) lies in one
/// congruence class and range. Literal values in `body` are offsets from the
/// label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRule {
    pub modulus: u32,
    pub residue: u32,
    pub min_label: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_label: Option<i64>,
    pub body: Regex,
}

impl LabelRule {
    fn applies(&self, label: i64) -> bool {
        label >= self.min_label
            && self.max_label.is_none_or(|m| label <= m)
            && label.rem_euclid(self.modulus as i64) == self.residue as i64
    }
}

/// An exceptional forbidden contiguous string, e.g. a run `j, j+1, j, j-1`
/// that the per-label blocks would otherwise admit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionString {
    /// Offsets from the first entry; `offsets[0] == 0`.
    pub offsets: Vec<i64>,
    pub modulus: u32,
    pub residue: u32,
    pub min_base: i64,
}

/// Absolute-valued grammar for the low-label prefix of a jagged partition
/// (identities whose initial conditions entangle the first two labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialBlock {
    pub body: Regex,
    /// Labels of the blocks following the prefix must exceed this.
    pub label_ceiling: i64,
}

/// The block structure of the jagged partitions of one identity: an optional
/// initial prefix, then maximal blocks with strictly increasing labels, each
/// matching the rule for its label, minus exceptional strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockGrammar {
    pub label_rules: Vec<LabelRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exceptions: Vec<ExceptionString>,
}

impl BlockGrammar {
    /// Does `mu` decompose into label-increasing blocks matching the grammar,
    /// free of exceptional strings?
    pub fn validate_blocks(&self, mu: &JaggedPartition) -> bool {
        let seq = mu.entries();
        for exc in &self.exceptions {
            for t in 0..seq.len() {
                let base = seq[t];
                if base < exc.min_base
                    || base.rem_euclid(exc.modulus as i64) != exc.residue as i64
                {
                    continue;
                }
                if t + exc.offsets.len() <= seq.len()
                    && exc
                        .offsets
                        .iter()
                        .enumerate()
                        .all(|(i, &o)| seq[t + i] == base + o)
                {
                    return false;
                }
            }
        }
        match &self.initial {
            Some(init) => {
                let ceiling = init.label_ceiling;
                match_node(&init.body, seq, 0, 0, &mut |p| {
                    self.parse_blocks(seq, p, ceiling)
                })
            }
            None => self.parse_blocks(seq, 0, i64::MIN),
        }
    }

    fn parse_blocks(&self, seq: &[i64], pos: usize, prev_label: i64) -> bool {
        if pos == seq.len() {
            return true;
        }
        let label = seq[pos];
        if label <= prev_label {
            return false;
        }
        let Some(rule) = self.label_rules.iter().find(|r| r.applies(label)) else {
            return false;
        };
        match_node(&rule.body, seq, pos, label, &mut |p| {
            p > pos && self.parse_blocks(seq, p, label)
        })
    }
}
