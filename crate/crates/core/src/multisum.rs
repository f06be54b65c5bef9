//! Exact evaluation of multi-index q-hypergeometric sums: quadratic
//! exponents, per-index sign factors, Pochhammer denominators, and
//! monomial-prefixed branches.
//!
//! Exponent data is stored *doubled* (`quad2`, `linear2`, `const2`), since
//! staircase terms like `m(m-1)/2` have half-integer coefficients; the
//! evaluator halves the assembled exponent and asserts integrality.

use crate::series::{BivariateSeries, LaurentSeries};
use crate::Error;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// One branch of a sum: `coeff * x^(w.idx + x_shift) * q^E(idx)` with
/// `2 E(idx) = idx' quad2 idx + linear2 . idx + const2` (quad2 shared by the
/// whole spec).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumBranch {
    pub coeff: i64,
    #[serde(default)]
    pub x_shift: u32,
    /// Doubled linear exponent coefficients.
    #[serde(rename = "linear")]
    pub linear2: Vec<i64>,
    /// Doubled constant exponent term.
    #[serde(rename = "const", default)]
    pub const2: i64,
}

/// A multi-index sum `sum_{idx >= 0} (+-) x^(...) q^(...) / prod (q^d;q^d)_idx`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSumSpec {
    /// x-degree contributed by each index.
    pub x_weights: Vec<u32>,
    /// Denominator `(q^d; q^d)_idx` steps, one per index.
    pub denom_steps: Vec<u32>,
    /// Indices contributing a `(-1)^idx` sign.
    #[serde(rename = "signs")]
    pub alt_signs: Vec<bool>,
    /// Doubled quadratic form (symmetric, nonnegative entries).
    pub quad2: Vec<Vec<i64>>,
    pub branches: Vec<SumBranch>,
}

impl MultiSumSpec {
    pub fn rank(&self) -> usize {
        self.x_weights.len()
    }

    /// Single-branch constructor; `linear2`/`const2` in doubled units.
    pub fn new(
        x_weights: Vec<u32>,
        denom_steps: Vec<u32>,
        alt_signs: Vec<bool>,
        quad2: Vec<Vec<i64>>,
        linear2: Vec<i64>,
        const2: i64,
    ) -> Self {
        let spec = MultiSumSpec {
            x_weights,
            denom_steps,
            alt_signs,
            quad2,
            branches: vec![SumBranch {
                coeff: 1,
                x_shift: 0,
                linear2,
                const2,
            }],
        };
        spec.check_shape();
        spec
    }

    fn check_shape(&self) {
        let r = self.rank();
        assert_eq!(self.denom_steps.len(), r);
        assert_eq!(self.alt_signs.len(), r);
        assert_eq!(self.quad2.len(), r);
        for (i, row) in self.quad2.iter().enumerate() {
            assert_eq!(row.len(), r);
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, self.quad2[j][i], "quad2 must be symmetric");
            }
        }
        for b in &self.branches {
            assert_eq!(b.linear2.len(), r);
        }
        assert!(self.x_weights.iter().all(|&w| w >= 1));
        assert!(self.denom_steps.iter().all(|&d| d >= 1));
    }

    /// Doubled exponent of one branch at an index tuple.
    fn exponent2(&self, branch: &SumBranch, idx: &[i64]) -> i64 {
        let mut e2 = branch.const2;
        for (a, &ia) in idx.iter().enumerate() {
            e2 += branch.linear2[a] * ia;
            e2 += self.quad2[a][a] * ia * ia;
            for (b, &ib) in idx.iter().enumerate().skip(a + 1) {
                e2 += 2 * self.quad2[a][b] * ia * ib;
            }
        }
        e2
    }

    /// Deepest dip (doubled) of `diag*n^2 + lmin*n` over `n >= 0`,
    /// optionally capped.
    fn dip2(&self, a: usize, n_cap: Option<i64>) -> i64 {
        let diag = self.quad2[a][a];
        let lmin = self.branches.iter().map(|b| b.linear2[a]).min().unwrap();
        if lmin >= 0 {
            return 0;
        }
        let f = |n: i64| diag * n * n + lmin * n;
        if diag == 0 {
            return match n_cap {
                Some(c) => f(c),
                None => i64::MIN, // caught by certification
            };
        }
        let v = -lmin / (2 * diag);
        let mut best = 0;
        for n in [v - 1, v, v + 1, v + 2] {
            let n = n.max(0);
            let n = n_cap.map_or(n, |c| n.min(c));
            best = best.min(f(n));
        }
        best
    }

    /// Refuse specs whose exponent could fail to grow along some index
    /// direction (x -> 1 evaluation would need infinitely many terms).
    fn certify_univariate(&self) -> Result<(), Error> {
        for row in &self.quad2 {
            for &v in row {
                if v < 0 {
                    return Err(Error::UnboundedSum(
                        "negative quadratic cross terms are not supported".into(),
                    ));
                }
            }
        }
        for a in 0..self.rank() {
            let lmin = self.branches.iter().map(|b| b.linear2[a]).min().unwrap();
            if self.quad2[a][a] == 0 && lmin <= 0 {
                return Err(Error::UnboundedSum(format!(
                    "index {a} has zero quadratic diagonal and nonpositive linear term"
                )));
            }
        }
        Ok(())
    }

    /// Exact truncated evaluation at `x = 1`.
    pub fn evaluate(&self, order: i64) -> Result<LaurentSeries, Error> {
        self.certify_univariate()?;
        Ok(self.evaluate_inner(order, None)?.into_series())
    }

    /// Exact bivariate evaluation: rows `0..=max_x`. Always terminates
    /// because every index raises x-degree.
    pub fn evaluate_bivariate(&self, order: i64, max_x: usize) -> Result<BivariateSeries, Error> {
        for row in &self.quad2 {
            if row.iter().any(|&v| v < 0) {
                return Err(Error::UnboundedSum(
                    "negative quadratic cross terms are not supported".into(),
                ));
            }
        }
        Ok(self.evaluate_inner(order, Some(max_x))?.into_bivariate())
    }

    fn evaluate_inner(&self, order: i64, max_x: Option<usize>) -> Result<Accumulator, Error> {
        let r = self.rank();
        // Worst-case dip below zero bounds the Laurent window.
        let dips2: Vec<i64> = (0..r)
            .map(|a| {
                let cap = max_x.map(|m| m as i64 / self.x_weights[a] as i64);
                self.dip2(a, cap)
            })
            .collect();
        let const2_min = self.branches.iter().map(|b| b.const2).min().unwrap();
        let min_exp = (const2_min + dips2.iter().sum::<i64>()).div_euclid(2).min(0);

        let mut acc = Accumulator::new(min_exp, order, max_x);
        let mut idx = vec![0i64; r];
        let denom = LaurentSeries::one(order.max(0) - min_exp);
        self.walk(0, &mut idx, &denom, order, max_x, &dips2, &mut acc);
        Ok(acc)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        level: usize,
        idx: &mut Vec<i64>,
        denom: &LaurentSeries,
        order: i64,
        max_x: Option<usize>,
        dips2: &[i64],
        acc: &mut Accumulator,
    ) {
        let r = self.rank();
        if level == r {
            let parity: i64 = idx
                .iter()
                .zip(&self.alt_signs)
                .filter(|(_, &s)| s)
                .map(|(&i, _)| i)
                .sum();
            let sign = if parity % 2 == 0 { 1 } else { -1 };
            let x_base: i64 = idx
                .iter()
                .zip(&self.x_weights)
                .map(|(&i, &w)| i * w as i64)
                .sum();
            for b in &self.branches {
                let x_deg = x_base + b.x_shift as i64;
                if let Some(m) = max_x {
                    if x_deg > m as i64 {
                        continue;
                    }
                }
                let e2 = self.exponent2(b, idx);
                assert!(e2 % 2 == 0, "assembled exponent must be integral");
                let e = e2 / 2;
                if e > order {
                    continue;
                }
                acc.add_term(denom, e, sign * b.coeff, x_deg as usize);
            }
            return;
        }

        let step = self.denom_steps[level] as i64;
        let remaining_dip2: i64 = dips2[level + 1..].iter().sum();
        let mut n: i64 = 0;
        let mut level_denom = denom.clone();
        let mut prev_lb2 = i64::MIN;
        loop {
            idx[level] = n;
            if let Some(m) = max_x {
                let x_deg: i64 = idx[..=level]
                    .iter()
                    .zip(&self.x_weights)
                    .map(|(&i, &w)| i * w as i64)
                    .sum();
                let shift_min = self.branches.iter().map(|b| b.x_shift).min().unwrap();
                if x_deg + shift_min as i64 > m as i64 {
                    break;
                }
            }
            // Lower bound on any branch exponent with this prefix: remaining
            // indices at their deepest dips, nonnegative cross terms dropped.
            let prefix2 = {
                let saved: Vec<i64> = idx[level + 1..r].to_vec();
                idx[level + 1..r].fill(0);
                let p = self
                    .branches
                    .iter()
                    .map(|b| self.exponent2(b, idx))
                    .min()
                    .unwrap();
                idx[level + 1..r].copy_from_slice(&saved);
                p
            };
            let lb2 = prefix2 + remaining_dip2;
            // Convex in n: once the bound exceeds the order and stops
            // decreasing, no further n at this level can contribute.
            if lb2 > 2 * order && lb2 >= prev_lb2 {
                break;
            }
            prev_lb2 = lb2;
            if n > 0 {
                level_denom.mul_geometric(1, step * n);
            }
            if lb2 <= 2 * order {
                self.walk(level + 1, idx, &level_denom, order, max_x, dips2, acc);
            }
            n += 1;
            assert!(n < 1_000_000, "index bound certification failed");
        }
        idx[level] = 0;
    }

    /// Undo an `s`-staircase on every branch: subtract `s*M(M-1)/2` from the
    /// exponent, `M = w.idx + x_shift`. Evaluating the result bivariate and
    /// reinstating the staircase recovers the original sum.
    pub fn pre_staircase_form(&self, s: u32) -> MultiSumSpec {
        let s = s as i64;
        let r = self.rank();
        let mut quad2 = self.quad2.clone();
        for (a, row) in quad2.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v -= s * self.x_weights[a] as i64 * self.x_weights[b] as i64;
            }
        }
        let branches = self
            .branches
            .iter()
            .map(|br| {
                let shift = br.x_shift as i64;
                SumBranch {
                    coeff: br.coeff,
                    x_shift: br.x_shift,
                    linear2: (0..r)
                        .map(|a| br.linear2[a] - s * self.x_weights[a] as i64 * (2 * shift - 1))
                        .collect(),
                    const2: br.const2 - s * (shift * shift - shift),
                }
            })
            .collect();
        MultiSumSpec {
            x_weights: self.x_weights.clone(),
            denom_steps: self.denom_steps.clone(),
            alt_signs: self.alt_signs.clone(),
            quad2,
            branches,
        }
    }

    /// Reinstate an `s`-staircase at the spec level (inverse of
    /// [`Self::pre_staircase_form`]): add `s*M(M-1)/2`, `M = w.idx + x_shift`.
    pub fn with_staircase(&self, s: u32) -> MultiSumSpec {
        let s = s as i64;
        let r = self.rank();
        let mut quad2 = self.quad2.clone();
        for (a, row) in quad2.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v += s * self.x_weights[a] as i64 * self.x_weights[b] as i64;
            }
        }
        let branches = self
            .branches
            .iter()
            .map(|br| {
                let shift = br.x_shift as i64;
                SumBranch {
                    coeff: br.coeff,
                    x_shift: br.x_shift,
                    linear2: (0..r)
                        .map(|a| br.linear2[a] + s * self.x_weights[a] as i64 * (2 * shift - 1))
                        .collect(),
                    const2: br.const2 + s * (shift * shift - shift),
                }
            })
            .collect();
        MultiSumSpec {
            x_weights: self.x_weights.clone(),
            denom_steps: self.denom_steps.clone(),
            alt_signs: self.alt_signs.clone(),
            quad2,
            branches,
        }
    }
}

/// Accumulates signed, shifted copies of the running denominator product
/// into either a flat series or x-graded rows.
struct Accumulator {
    rows: Vec<LaurentSeries>,
    flat: bool,
}

impl Accumulator {
    fn new(min_exp: i64, order: i64, max_x: Option<usize>) -> Self {
        let n_rows = max_x.map_or(1, |m| m + 1);
        Accumulator {
            rows: vec![LaurentSeries::zero_on(min_exp, order.max(min_exp)); n_rows],
            flat: max_x.is_none(),
        }
    }

    fn add_term(&mut self, denom: &LaurentSeries, e: i64, coeff: i64, x_deg: usize) {
        let row = if self.flat { 0 } else { x_deg };
        let target = &mut self.rows[row];
        let c = BigInt::from(coeff);
        let hi = target.order();
        let mut w = 0i64;
        while e + w <= hi && w <= denom.order() {
            let d = denom.coeff(w);
            if !num_traits::Zero::is_zero(d) {
                *target.coeff_mut(e + w) += d * &c;
            }
            w += 1;
        }
    }

    fn into_bivariate(self) -> BivariateSeries {
        BivariateSeries::from_rows(self.rows)
    }

    fn into_series(self) -> LaurentSeries {
        assert!(self.flat);
        self.rows.into_iter().next().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoch::{expand_product, pochhammer_infinite, ProductSpec};

    /// `sum_n x^n q^(c n) / (q;q)_n` at `x = 1` as a one-index spec.
    fn euler_sum_spec(c: i64) -> MultiSumSpec {
        MultiSumSpec::new(vec![1], vec![1], vec![false], vec![vec![0]], vec![2 * c], 0)
    }

    #[test]
    fn euler_product_identity() {
        // sum q^(cn)/(q;q)_n = 1/(q^c;q)_inf for c = 1, 2, 3
        for c in 1..=3 {
            let lhs = euler_sum_spec(c).evaluate(60).unwrap();
            let rhs = pochhammer_infinite(c, 1, 1, 60).unwrap().invert().unwrap();
            assert!(lhs.eq_to_order(&rhs, 60), "c = {c}");
        }
    }

    #[test]
    fn euler_distinct_identity() {
        // sum q^(cn + n(n-1)/2)/(q;q)_n = (-q^c;q)_inf
        for c in 1..=3 {
            let spec = MultiSumSpec::new(
                vec![1],
                vec![1],
                vec![false],
                vec![vec![1]],
                vec![2 * c - 1],
                0,
            );
            let lhs = spec.evaluate(60).unwrap();
            let rhs = pochhammer_infinite(c, -1, 1, 60).unwrap();
            assert!(lhs.eq_to_order(&rhs, 60), "c = {c}");
        }
    }

    #[test]
    fn alternating_signs_give_euler_function() {
        // sum (-1)^n q^(n(n+1)/2)/(q;q)_n = (q;q)_inf
        let spec = MultiSumSpec::new(vec![1], vec![1], vec![true], vec![vec![1]], vec![1], 0);
        let lhs = spec.evaluate(50).unwrap();
        let rhs = pochhammer_infinite(1, 1, 1, 50).unwrap();
        assert!(lhs.eq_to_order(&rhs, 50));
    }

    #[test]
    fn capparelli_two_index_form() {
        // sum q^(2i^2+6ij+6j^2) / ((q;q)_i (q^3;q^3)_j)
        //   = 1/(q^2,q^3,q^9,q^10;q^12)_inf
        let spec = MultiSumSpec::new(
            vec![1, 2],
            vec![1, 3],
            vec![false, false],
            vec![vec![4, 6], vec![6, 12]],
            vec![0, 0],
            0,
        );
        let lhs = spec.evaluate(40).unwrap();
        let rhs = expand_product(&ProductSpec::reciprocal(12, &[2, 3, 9, 10]), 40);
        assert!(lhs.eq_to_order(&rhs, 40));
        assert_eq!(lhs.coeff(0), &BigInt::from(1));
    }

    #[test]
    fn bivariate_rows_match_series_route() {
        let spec = euler_sum_spec(1);
        let biv = spec.evaluate_bivariate(30, 10).unwrap();
        for m in 0..=10u32 {
            let expect = crate::qpoch::pochhammer_finite(1, 1, 1, m, 30)
                .invert()
                .unwrap()
                .shifted(m as i64)
                .truncated(30);
            assert!(biv.row(m as usize).eq_to_order(&expect, 30), "row {m}");
        }
    }

    #[test]
    fn negative_linear_goes_laurent() {
        // sum q^(n^2 - 2n)/(q;q)_n dips to q^-1 at n = 1
        let spec = MultiSumSpec::new(vec![1], vec![1], vec![false], vec![vec![2]], vec![-4], 0);
        let s = spec.evaluate(20).unwrap();
        assert!(s.min_exp() <= -1);
        assert_eq!(s.coeff(-1), &BigInt::from(1));
    }

    #[test]
    fn unbounded_univariate_rejected() {
        // x-weight-only index (no q growth): fine bivariate, divergent flat.
        let spec = MultiSumSpec::new(vec![2], vec![4], vec![false], vec![vec![0]], vec![0], 0);
        assert!(matches!(spec.evaluate(10), Err(Error::UnboundedSum(_))));
        assert!(spec.evaluate_bivariate(10, 8).is_ok());
    }

    #[test]
    fn pre_staircase_round_trip() {
        // A 2-staircase form and its jagged pre-image agree after
        // reinstatement, and with_staircase inverts pre_staircase_form.
        let spec = MultiSumSpec::new(
            vec![1, 2],
            vec![1, 4],
            vec![false, false],
            vec![vec![2, 4], vec![4, 8]],
            vec![0, 8],
            0,
        );
        let jagged = spec.pre_staircase_form(2);
        assert_eq!(jagged.with_staircase(2), spec);
        let direct = spec.evaluate_bivariate(30, 12).unwrap();
        let via = crate::staircase::reinstate_staircase(&jagged.evaluate_bivariate(30, 12).unwrap(), 2);
        for m in 0..=12 {
            let through = direct.row(m).order().min(via.row(m).order());
            assert!(
                direct.row(m).first_mismatch(via.row(m), through).is_none(),
                "row {m}"
            );
        }
    }

    #[test]
    fn bivariate_collapses_to_flat() {
        let spec = euler_sum_spec(2);
        let a = spec.evaluate(24).unwrap();
        // rows beyond x-degree 24 cannot reach q^24: q-exponent is 2n
        let b = spec.evaluate_bivariate(24, 24).unwrap().set_x_to_one();
        assert!(a.eq_to_order(&b, 24));
    }
}
