//! Declarative forbidden-pattern rule sets for partition-theoretic sum-sides,
//! with two independent counting routes: a backtracking enumerator and a
//! windowed dynamic program. Neither knows anything about analytic sum-sides
//! or products, so they can serve as oracles for both.
//!
//! A pattern is matched against *contiguous* runs of the weakly increasing
//! part list (with optional fictitious zero parts prepended), never against
//! scattered sub-multisets.

use crate::series::{BivariateSeries, LaurentSeries};
use crate::Error;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Largest pattern window (value span plus one) the DP supports.
pub const MAX_WINDOW: usize = 5;

/// A partition with weakly increasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] <= w[1]),
            "parts must be weakly increasing"
        );
        assert!(parts.iter().all(|&p| p >= 1), "parts must be positive");
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(empty)");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join("+"))
    }
}

/// A forbidden contiguous pattern `base+offsets[0], base+offsets[1], ...`,
/// optionally restricted to bases in one congruence class.
///
/// Serialized as `{offsets, base_mod?, base_res?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PatternJson", try_from = "PatternJson")]
pub struct ForbiddenPattern {
    /// Weakly increasing, `offsets[0] == 0`.
    pub offsets: Vec<u32>,
    /// `Some((modulus, residue))` restricts the base part.
    pub base_mod: Option<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    offsets: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_mod: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_res: Option<u32>,
}

impl From<ForbiddenPattern> for PatternJson {
    fn from(p: ForbiddenPattern) -> Self {
        PatternJson {
            offsets: p.offsets,
            base_mod: p.base_mod.map(|(m, _)| m),
            base_res: p.base_mod.map(|(_, r)| r),
        }
    }
}

impl TryFrom<PatternJson> for ForbiddenPattern {
    type Error = String;

    fn try_from(j: PatternJson) -> Result<Self, String> {
        let base_mod = match (j.base_mod, j.base_res) {
            (Some(m), Some(r)) => Some((m, r)),
            (None, None) => None,
            _ => return Err("base_mod and base_res must appear together".into()),
        };
        Ok(ForbiddenPattern {
            offsets: j.offsets,
            base_mod,
        })
    }
}

impl ForbiddenPattern {
    pub fn new(offsets: &[u32]) -> Self {
        ForbiddenPattern {
            offsets: offsets.to_vec(),
            base_mod: None,
        }
    }

    pub fn with_base(offsets: &[u32], modulus: u32, residue: u32) -> Self {
        ForbiddenPattern {
            offsets: offsets.to_vec(),
            base_mod: Some((modulus, residue)),
        }
    }

    /// Span of part values the pattern covers, plus one.
    pub fn window(&self) -> usize {
        *self.offsets.last().unwrap() as usize + 1
    }

    fn base_allowed(&self, base: i64) -> bool {
        match self.base_mod {
            None => true,
            Some((m, r)) => base.rem_euclid(m as i64) == r as i64,
        }
    }
}

/// Initial conditions layered on top of the pattern list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialConstraint {
    PartForbidden { part: u32 },
    PartAtMost { part: u32, count: u32 },
    SmallestAtLeast { part: u32 },
    /// The partition may not begin with exactly these parts (anchored at
    /// position 0 of the real part list).
    PrefixForbidden { prefix: Vec<u32> },
}

/// A partition-theoretic sum-side: forbidden patterns, initial conditions,
/// and the number of virtual zero parts prepended before pattern matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RuleSet {
    pub patterns: Vec<ForbiddenPattern>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial: Vec<InitialConstraint>,
    #[serde(default)]
    pub fictitious_zeros: u8,
}

impl RuleSet {
    pub fn new(patterns: Vec<ForbiddenPattern>) -> Self {
        RuleSet {
            patterns,
            initial: Vec::new(),
            fictitious_zeros: 0,
        }
    }

    pub fn with_initial(mut self, c: InitialConstraint) -> Self {
        self.initial.push(c);
        self
    }

    pub fn with_fictitious_zeros(mut self, n: u8) -> Self {
        self.fictitious_zeros = n;
        self
    }

    /// DP state window: one more than the largest value span any pattern or
    /// prefix constraint inspects.
    fn state_window(&self) -> usize {
        let mut w = 2;
        for p in &self.patterns {
            w = w.max(p.window());
        }
        for c in &self.initial {
            if let InitialConstraint::PrefixForbidden { prefix } = c {
                w = w.max(*prefix.last().unwrap() as usize + 1);
            }
        }
        w
    }

    fn validate(&self) -> Result<(), Error> {
        for p in &self.patterns {
            assert_eq!(p.offsets[0], 0, "pattern offsets must start at 0");
            assert!(p.offsets.windows(2).all(|w| w[0] <= w[1]));
            if p.window() > MAX_WINDOW {
                return Err(Error::WindowTooLarge {
                    got: p.window(),
                    max: MAX_WINDOW,
                });
            }
        }
        for c in &self.initial {
            if let InitialConstraint::PrefixForbidden { prefix } = c {
                assert!(!prefix.is_empty());
                assert!(prefix.windows(2).all(|w| w[0] <= w[1]));
                if *prefix.last().unwrap() as usize + 1 > MAX_WINDOW {
                    return Err(Error::WindowTooLarge {
                        got: *prefix.last().unwrap() as usize + 1,
                        max: MAX_WINDOW,
                    });
                }
            }
        }
        Ok(())
    }

    /// Does `pi` satisfy this rule set?
    pub fn matches(&self, pi: &Partition) -> bool {
        for c in &self.initial {
            let ok = match c {
                InitialConstraint::PartForbidden { part } => !pi.parts.contains(part),
                InitialConstraint::PartAtMost { part, count } => {
                    pi.parts.iter().filter(|&&p| p == *part).count() <= *count as usize
                }
                InitialConstraint::SmallestAtLeast { part } => {
                    pi.parts.first().is_none_or(|&p| p >= *part)
                }
                InitialConstraint::PrefixForbidden { prefix } => {
                    !(pi.parts.len() >= prefix.len() && pi.parts[..prefix.len()] == prefix[..])
                }
            };
            if !ok {
                return false;
            }
        }
        let mut seq: Vec<i64> = vec![0; self.fictitious_zeros as usize];
        seq.extend(pi.parts.iter().map(|&p| p as i64));
        for start in 0..seq.len() {
            for p in &self.patterns {
                let l = p.offsets.len();
                if start + l > seq.len() {
                    continue;
                }
                let base = seq[start];
                if !p.base_allowed(base) {
                    continue;
                }
                if (0..l).all(|t| seq[start + t] == base + p.offsets[t] as i64) {
                    return false;
                }
            }
        }
        true
    }

    /// All accepted partitions of `n`, in standard table order (descending
    /// part lists compared lexicographically, largest first).
    pub fn enumerate(&self, n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut desc: Vec<u32> = Vec::new();
        self.enumerate_rec(n, n, &mut desc, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        remaining: u32,
        max_next: u32,
        desc: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            let pi = Partition::new(desc.iter().rev().copied().collect());
            if self.matches(&pi) {
                out.push(pi);
            }
            return;
        }
        for v in (1..=max_next.min(remaining)).rev() {
            desc.push(v);
            if !self.prune(desc) {
                self.enumerate_rec(remaining - v, v, desc, out);
            }
            desc.pop();
        }
    }

    /// Sound partial rejection of a descending prefix: true if some pattern
    /// anchored at the newly placed smallest part, or a monotone initial
    /// constraint, is already violated. Every completion prepends smaller
    /// parts below the anchor, so the violation survives.
    fn prune(&self, desc: &[u32]) -> bool {
        let v = *desc.last().unwrap();
        for c in &self.initial {
            let bad = match c {
                InitialConstraint::PartForbidden { part } => v == *part,
                InitialConstraint::PartAtMost { part, count } => {
                    v == *part && desc.iter().filter(|&&p| p == *part).count() > *count as usize
                }
                InitialConstraint::SmallestAtLeast { part } => v < *part,
                InitialConstraint::PrefixForbidden { .. } => false,
            };
            if bad {
                return true;
            }
        }
        for p in &self.patterns {
            let l = p.offsets.len();
            if l > desc.len() || !p.base_allowed(v as i64) {
                continue;
            }
            if (0..l).all(|t| desc[desc.len() - 1 - t] == v + p.offsets[t]) {
                return true;
            }
        }
        false
    }

    /// Number of accepted partitions of each weight `0..=order`, by dynamic
    /// programming over (value, recent-count fingerprint) states.
    pub fn count_series(&self, order: i64) -> Result<LaurentSeries, Error> {
        let table = self.count_dp(order, None)?;
        let mut s = LaurentSeries::zero(order);
        for (w, c) in table[0].iter().enumerate() {
            *s.coeff_mut(w as i64) = BigInt::from(*c);
        }
        Ok(s)
    }

    /// Bivariate refinement: row `m` counts accepted partitions with exactly
    /// `m` parts (fictitious zeros excluded). Lengths above `max_x` are
    /// dropped.
    pub fn count_series_bivariate(
        &self,
        order: i64,
        max_x: usize,
    ) -> Result<BivariateSeries, Error> {
        let table = self.count_dp(order, Some(max_x))?;
        let mut rows = Vec::with_capacity(max_x + 1);
        for lens in table.iter().take(max_x + 1) {
            let mut s = LaurentSeries::zero(order);
            for (w, c) in lens.iter().enumerate() {
                *s.coeff_mut(w as i64) = BigInt::from(*c);
            }
            rows.push(s);
        }
        Ok(BivariateSeries::from_rows(rows))
    }

    /// Core DP. Returns `table[len][weight]`; with `track_len = None` all
    /// counts live in `table[0]`.
    ///
    /// State between part values: the counts of the last `window - 1` values,
    /// capped just above the largest multiplicity any pattern inspects. Parts
    /// further below the current value can never re-enter a contiguous
    /// pattern, so the fingerprint is complete.
    fn count_dp(&self, order: i64, track_len: Option<usize>) -> Result<Vec<Vec<i128>>, Error> {
        self.validate()?;
        assert!(order >= 0);
        let n = order as usize;
        let slots = self.state_window() - 1;
        let max_mult = self
            .patterns
            .iter()
            .map(|p| {
                let mut best = 0u32;
                for &o in &p.offsets {
                    let c = p.offsets.iter().filter(|&&x| x == o).count() as u32;
                    best = best.max(c);
                }
                best
            })
            .max()
            .unwrap_or(1);
        // "exactly c" tests on capped counts stay faithful iff cap > c.
        let cap = max_mult + 1;

        let n_len = track_len.map_or(1, |m| m + 1);
        let empty_table = || vec![vec![0i128; n + 1]; n_len];

        // A pattern satisfiable by the fictitious zeros alone rejects every
        // partition including the empty one.
        for p in &self.patterns {
            if p.offsets.iter().all(|&o| o == 0)
                && p.offsets.len() <= self.fictitious_zeros as usize
                && p.base_allowed(0)
            {
                return Ok(empty_table());
            }
        }

        let mut init = vec![0u32; slots];
        init[0] = self.fictitious_zeros as u32; // count of value 0, seen from v = 1
        let mut dp: HashMap<Vec<u32>, Vec<Vec<i128>>> = HashMap::new();
        let mut t0 = empty_table();
        t0[0][0] = 1;
        dp.insert(init, t0);

        for v in 1..=n as i64 {
            let mut next: HashMap<Vec<u32>, Vec<Vec<i128>>> = HashMap::new();
            for (state, table) in &dp {
                let mut m: u32 = 0;
                let mut current = table.clone();
                loop {
                    if !self.placement_allowed(v, m, state) {
                        // A veto is monotone in multiplicity: every check that
                        // involves m is a ">= threshold" or "<= cap" test.
                        break;
                    }
                    let mut new_state = vec![0u32; slots];
                    new_state[0] = m.min(cap);
                    new_state[1..].copy_from_slice(&state[..slots - 1]);
                    let dest = next.entry(new_state).or_insert_with(empty_table);
                    accumulate(dest, &current);

                    m += 1;
                    if (m as i64) * v > order {
                        break;
                    }
                    shift_table(&mut current, v as usize, track_len.is_some());
                    if table_empty(&current) {
                        break;
                    }
                }
            }
            dp = next;
        }

        let mut out = empty_table();
        for table in dp.values() {
            accumulate(&mut out, table);
        }
        Ok(out)
    }

    /// May value `v` appear with multiplicity exactly `m`, as far as the
    /// initial-condition caps go?
    fn multiplicity_allowed(&self, v: i64, m: u32) -> bool {
        for c in &self.initial {
            let ok = match c {
                InitialConstraint::PartForbidden { part } => *part as i64 != v || m == 0,
                InitialConstraint::PartAtMost { part, count } => *part as i64 != v || m <= *count,
                InitialConstraint::SmallestAtLeast { part } => v >= *part as i64 || m == 0,
                InitialConstraint::PrefixForbidden { .. } => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Full legality of closing value `v` at multiplicity `m` against the
    /// state counts of values below `v`: every pattern and prefix whose top
    /// value is `v` must fail to match.
    fn placement_allowed(&self, v: i64, m: u32, state: &[u32]) -> bool {
        if !self.multiplicity_allowed(v, m) {
            return false;
        }
        let count_at = |value: i64| -> u32 {
            if value == v {
                return m;
            }
            let d = v - value;
            if d >= 1 && (d as usize) <= state.len() {
                state[(d - 1) as usize]
            } else {
                0
            }
        };
        for p in &self.patterns {
            let span = *p.offsets.last().unwrap() as i64;
            let base = v - span;
            if base < 0 || !p.base_allowed(base) {
                continue;
            }
            if pattern_counts_match(&p.offsets, base, &count_at) {
                return false;
            }
        }
        for c in &self.initial {
            if let InitialConstraint::PrefixForbidden { prefix } = c {
                if *prefix.last().unwrap() as i64 == v && prefix_counts_match(prefix, &count_at) {
                    return false;
                }
            }
        }
        true
    }
}

/// Does a sorted part list with these value counts contain the contiguous
/// run `base+offsets`? The run's lowest and highest values only need enough
/// copies (the run can start or end inside a block of equal parts); interior
/// values must match exactly and skipped values must be absent, or the run
/// would not be contiguous.
fn pattern_counts_match(offsets: &[u32], base: i64, count_at: &dyn Fn(i64) -> u32) -> bool {
    let span = *offsets.last().unwrap() as usize;
    for o in 0..=span {
        let c = offsets.iter().filter(|&&x| x as usize == o).count() as u32;
        let have = count_at(base + o as i64);
        let ok = if o == 0 || o == span {
            have >= c
        } else {
            have == c
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Anchored version: the partition begins with exactly `prefix`.
fn prefix_counts_match(prefix: &[u32], count_at: &dyn Fn(i64) -> u32) -> bool {
    let lo = prefix[0] as i64;
    let hi = *prefix.last().unwrap() as i64;
    for value in 1..lo {
        if count_at(value) != 0 {
            return false;
        }
    }
    for value in lo..=hi {
        let c = prefix.iter().filter(|&&p| p as i64 == value).count() as u32;
        let have = count_at(value);
        let ok = if value == hi { have >= c } else { have == c };
        if !ok {
            return false;
        }
    }
    true
}

fn accumulate(dest: &mut [Vec<i128>], src: &[Vec<i128>]) {
    for (d, s) in dest.iter_mut().zip(src) {
        for (dv, sv) in d.iter_mut().zip(s) {
            *dv = dv.checked_add(*sv).expect("partition count overflow");
        }
    }
}

/// Multiply the table by one part of value `v`: shift weight by `v` and,
/// when tracked, length by 1. Entries pushed past the bounds are discarded.
fn shift_table(table: &mut [Vec<i128>], v: usize, track_len: bool) {
    if track_len {
        for l in (1..table.len()).rev() {
            let (lo, hi) = table.split_at_mut(l);
            shift_weights(&lo[l - 1], &mut hi[0], v);
        }
        table[0].iter_mut().for_each(|x| *x = 0);
    } else {
        let row = &mut table[0];
        for w in (0..row.len()).rev() {
            row[w] = if w >= v { row[w - v] } else { 0 };
        }
    }
}

fn shift_weights(src: &[i128], dest: &mut [i128], v: usize) {
    for w in (0..dest.len()).rev() {
        dest[w] = if w >= v { src[w - v] } else { 0 };
    }
}

fn table_empty(table: &[Vec<i128>]) -> bool {
    table.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// Cross-check: DP coefficients equal enumeration counts for all `n <= up_to`.
pub fn dp_vs_enumeration_check(rules: &RuleSet, up_to: u32) -> bool {
    let series = match rules.count_series(up_to as i64) {
        Ok(s) => s,
        Err(_) => return false,
    };
    (0..=up_to).all(|n| {
        let expected = rules.enumerate(n).len();
        series.coeff(n as i64) == &BigInt::from(expected)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All partitions of `n`, brute force, ascending parts.
    fn all_partitions(n: u32) -> Vec<Partition> {
        fn rec(remaining: u32, min_next: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition::new(acc.clone()));
                return;
            }
            for v in min_next..=remaining {
                acc.push(v);
                rec(remaining - v, v, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 1, &mut Vec::new(), &mut out);
        out
    }

    /// The three shared A9 difference conditions plus Identity 1's initial
    /// condition, as contiguous patterns.
    fn a9_identity1() -> RuleSet {
        RuleSet::new(vec![
            ForbiddenPattern::new(&[0, 1]),
            ForbiddenPattern::with_base(&[0, 0], 2, 1),
            ForbiddenPattern::with_base(&[0, 0, 0], 2, 0),
            ForbiddenPattern::with_base(&[0, 0, 2], 2, 0),
            ForbiddenPattern::with_base(&[0, 0, 3], 2, 0),
            ForbiddenPattern::with_base(&[0, 2, 2], 2, 0),
            ForbiddenPattern::with_base(&[0, 3, 3], 2, 1),
        ])
        .with_initial(InitialConstraint::PartAtMost { part: 2, count: 1 })
    }

    /// Literal transcription of the prose conditions for the same sum-side:
    /// no consecutive parts, odd parts distinct, evens at most twice, and a
    /// twice-appearing even part 2j excludes 2j+-2 and 2j+-3 anywhere.
    fn a9_identity1_prose(pi: &Partition) -> bool {
        let ps = pi.parts();
        let count = |v: i64| ps.iter().filter(|&&p| p as i64 == v).count();
        if ps.windows(2).any(|w| w[1] - w[0] == 1) {
            return false;
        }
        if ps.iter().any(|&p| p % 2 == 1 && count(p as i64) > 1) {
            return false;
        }
        if ps.iter().any(|&p| p % 2 == 0 && count(p as i64) > 2) {
            return false;
        }
        for &p in ps {
            if p % 2 == 0 && count(p as i64) == 2 {
                for d in [-3i64, -2, 2, 3] {
                    if count(p as i64 + d) > 0 {
                        return false;
                    }
                }
            }
        }
        count(2) <= 1
    }

    /// The "equivalently" formulation: a window of three parts around a
    /// repeated even middle part must span at least 4.
    fn a9_identity1_distance(pi: &Partition) -> bool {
        let ps = pi.parts();
        let count = |v: u32| ps.iter().filter(|&&p| p == v).count();
        if ps.windows(2).any(|w| w[1] - w[0] == 1) {
            return false;
        }
        if ps.iter().any(|&p| p % 2 == 1 && count(p) > 1) {
            return false;
        }
        for w in ps.windows(3) {
            if w[1] % 2 == 0 && count(w[1]) > 1 && w[2] - w[0] < 4 {
                return false;
            }
        }
        count(2) <= 1
    }

    #[test]
    fn identity1_examples_from_table() {
        let rules = a9_identity1();
        assert!(rules.matches(&Partition::new(vec![2, 4, 6])));
        assert!(!rules.matches(&Partition::new(vec![2, 2, 8])));
        assert!(rules.matches(&Partition::empty()));

        let listed = [
            vec![12],
            vec![1, 11],
            vec![2, 10],
            vec![3, 9],
            vec![4, 8],
            vec![1, 3, 8],
            vec![5, 7],
            vec![1, 4, 7],
            vec![6, 6],
            vec![2, 4, 6],
        ];
        let got = rules.enumerate(12);
        assert_eq!(got.len(), 10);
        for (g, l) in got.iter().zip(listed.iter()) {
            assert_eq!(g.parts(), &l[..]);
        }
    }

    #[test]
    fn enumerate_n_zero_is_empty_partition() {
        let rules = a9_identity1();
        assert_eq!(rules.enumerate(0), vec![Partition::empty()]);
    }

    #[test]
    fn formulations_agree() {
        let rules = a9_identity1();
        for n in 0..=32 {
            for pi in all_partitions(n) {
                let a = rules.matches(&pi);
                assert_eq!(a, a9_identity1_prose(&pi), "prose mismatch at {pi}");
                assert_eq!(a, a9_identity1_distance(&pi), "distance mismatch at {pi}");
            }
        }
    }

    #[test]
    fn dp_matches_enumeration_on_identity1() {
        assert!(dp_vs_enumeration_check(&a9_identity1(), 40));
    }

    #[test]
    fn dp_on_empty_ruleset_is_partition_function() {
        let rules = RuleSet::default();
        let s = rules.count_series(20).unwrap();
        for n in 0..=20u32 {
            assert_eq!(s.coeff(n as i64), &BigInt::from(all_partitions(n).len()));
        }
        assert!(dp_vs_enumeration_check(&rules, 20));
    }

    #[test]
    fn rogers_ramanujan_difference_two() {
        let rules = RuleSet::new(vec![
            ForbiddenPattern::new(&[0, 0]),
            ForbiddenPattern::new(&[0, 1]),
        ]);
        let brute: Vec<usize> = (0..=24)
            .map(|n| all_partitions(n).iter().filter(|pi| rules.matches(pi)).count())
            .collect();
        let s = rules.count_series(24).unwrap();
        for (n, &c) in brute.iter().enumerate() {
            assert_eq!(s.coeff(n as i64), &BigInt::from(c), "at n={n}");
        }
        // and the classical product: parts = +-1 mod 5
        let prod = crate::qpoch::expand_product(
            &crate::qpoch::ProductSpec::reciprocal(5, &[1, 4]),
            24,
        );
        assert!(s.eq_to_order(&prod, 24));
    }

    #[test]
    fn fictitious_zeros_encode_initial_conditions() {
        // Pattern (0,1,1) with one fictitious zero forbids a leading 1+1.
        let rules =
            RuleSet::new(vec![ForbiddenPattern::new(&[0, 1, 1])]).with_fictitious_zeros(1);
        assert!(!rules.matches(&Partition::new(vec![1, 1])));
        assert!(rules.matches(&Partition::new(vec![1, 2])));
        assert!(rules.matches(&Partition::new(vec![2, 2])));
        assert!(dp_vs_enumeration_check(&rules, 25));
    }

    #[test]
    fn prefix_constraint_anchors_at_start() {
        let rules = RuleSet::new(vec![]).with_initial(InitialConstraint::PrefixForbidden {
            prefix: vec![1, 2, 2],
        });
        assert!(!rules.matches(&Partition::new(vec![1, 2, 2])));
        assert!(!rules.matches(&Partition::new(vec![1, 2, 2, 5])));
        assert!(rules.matches(&Partition::new(vec![1, 1, 2, 2])));
        assert!(rules.matches(&Partition::new(vec![2, 2])));
        assert!(dp_vs_enumeration_check(&rules, 22));
    }

    #[test]
    fn bivariate_counts_track_length() {
        let rules = a9_identity1();
        let biv = rules.count_series_bivariate(24, 24).unwrap();
        let flat = rules.count_series(24).unwrap();
        assert!(biv.set_x_to_one().eq_to_order(&flat, 24));
        for n in 0..=16u32 {
            let by_len = rules.enumerate(n);
            for len in 0..=n as usize {
                let expect = by_len.iter().filter(|p| p.len() == len).count();
                assert_eq!(
                    biv.row(len).coeff(n as i64),
                    &BigInt::from(expect),
                    "n={n} len={len}"
                );
            }
        }
    }

    #[test]
    fn mutated_rules_change_counts() {
        let rules = a9_identity1();
        let mut corrupted = rules.clone();
        corrupted.patterns.pop();
        let s = rules.count_series(30).unwrap();
        let c = corrupted.count_series(30).unwrap();
        assert!(!s.eq_to_order(&c, 30));
    }

    #[test]
    fn window_limit_enforced() {
        let rules = RuleSet::new(vec![ForbiddenPattern::new(&[0, 5])]);
        assert!(matches!(
            rules.count_series(10),
            Err(Error::WindowTooLarge { got: 6, max: 5 })
        ));
    }

    #[test]
    fn monotone_truncation() {
        let rules = a9_identity1();
        let long = rules.count_series(60).unwrap();
        let short = rules.count_series(35).unwrap();
        assert!(long.truncated(35).eq_to_order(&short, 35));
    }

    #[test]
    fn ruleset_json_round_trip() {
        let rules = a9_identity1().with_fictitious_zeros(1);
        let json = serde_json::to_string(&rules).unwrap();
        let back: RuleSet = serde_json::from_str(&json).unwrap();
        assert_eq!(rules, back);
    }
}
