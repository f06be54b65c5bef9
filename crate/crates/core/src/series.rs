//! Truncated Laurent series with exact integer coefficients, in one variable
//! (`q`) and two (`x` graded, `q` dense per grade).
//!
//! A [`LaurentSeries`] tracks coefficients on an explicit window
//! `[min_exp, order]`: the series is known to vanish below `min_exp` and is
//! untracked above `order`. Binary operations propagate the window so that a
//! result coefficient is present only if it is exact; reading past the window
//! panics rather than silently returning garbage.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::OnceLock;

fn zero_coeff() -> &'static BigInt {
    static ZERO: OnceLock<BigInt> = OnceLock::new();
    ZERO.get_or_init(BigInt::zero)
}

/// Truncated one-variable Laurent series over arbitrary-precision integers.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    min_exp: i64,
    /// `coeffs[i]` is the coefficient of `q^(min_exp + i)`; never empty.
    coeffs: Vec<BigInt>,
}

impl LaurentSeries {
    /// The zero series tracked on `[min_exp, order]`.
    pub fn zero_on(min_exp: i64, order: i64) -> Self {
        assert!(order >= min_exp, "empty window: [{min_exp}, {order}]");
        LaurentSeries {
            min_exp,
            coeffs: vec![BigInt::zero(); (order - min_exp + 1) as usize],
        }
    }

    /// The zero series on `[0, order]`.
    pub fn zero(order: i64) -> Self {
        Self::zero_on(0, order)
    }

    /// The constant series 1 on `[0, order]`.
    pub fn one(order: i64) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `c * q^exp` tracked on `[min(exp, 0), order]`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64, order: i64) -> Self {
        let mut s = Self::zero_on(exp.min(0), order);
        *s.coeff_mut(exp) = c.into();
        s
    }

    /// Build from an explicit coefficient window.
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "series window must be nonempty");
        LaurentSeries { min_exp, coeffs }
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Highest tracked exponent (inclusive).
    pub fn order(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `q^exp`. Exact zero below the window; panics above it.
    pub fn coeff(&self, exp: i64) -> &BigInt {
        if exp < self.min_exp {
            return zero_coeff();
        }
        assert!(
            exp <= self.order(),
            "coefficient of q^{exp} requested beyond tracked order {}",
            self.order()
        );
        &self.coeffs[(exp - self.min_exp) as usize]
    }

    /// Mutable access to a tracked coefficient (for building series
    /// term by term).
    pub fn coeff_mut(&mut self, exp: i64) -> &mut BigInt {
        assert!(exp >= self.min_exp && exp <= self.order());
        &mut self.coeffs[(exp - self.min_exp) as usize]
    }

    /// True if every tracked coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exponent of the lowest nonzero tracked coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.min_exp + i as i64)
    }

    /// Discard coefficients above `new_order` (window shrink only).
    pub fn truncated(&self, new_order: i64) -> Self {
        assert!(
            new_order <= self.order(),
            "cannot extend order {} to {new_order}",
            self.order()
        );
        assert!(new_order >= self.min_exp);
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs[..(new_order - self.min_exp + 1) as usize].to_vec(),
        }
    }

    /// Multiply by `q^k`: shifts the whole window.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentSeries {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Widen the known-zero region downward (no-op if already lower).
    pub fn with_min_exp(&self, new_min: i64) -> Self {
        if new_min >= self.min_exp {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.min_exp - new_min) as usize];
        coeffs.extend_from_slice(&self.coeffs);
        LaurentSeries {
            min_exp: new_min,
            coeffs,
        }
    }

    /// Exact sum; the result window is the intersection of validity:
    /// `min_exp = min(..)`, `order = min(..)`.
    pub fn add(&self, other: &Self) -> Self {
        let min_exp = self.min_exp.min(other.min_exp);
        let order = self.order().min(other.order());
        assert!(order >= min_exp, "windows do not overlap");
        let mut out = Self::zero_on(min_exp, order);
        for e in min_exp..=order {
            let mut c = if e >= self.min_exp {
                self.coeff(e).clone()
            } else {
                BigInt::zero()
            };
            if e >= other.min_exp {
                c += other.coeff(e);
            }
            *out.coeff_mut(e) = c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    /// Exact Cauchy product. A product coefficient at `e` is exact iff every
    /// split `e = e1 + e2` lies in the operands' windows, so the result is
    /// tracked on `[a.min + b.min, min(a.order + b.min, b.order + a.min)]`.
    pub fn mul(&self, other: &Self) -> Self {
        let min_exp = self.min_exp + other.min_exp;
        let order = (self.order() + other.min_exp).min(other.order() + self.min_exp);
        assert!(order >= min_exp);
        let mut out = Self::zero_on(min_exp, order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.min_exp + i as i64;
            let out_lo = ea + other.min_exp;
            if out_lo > order {
                break;
            }
            let top = ((order - ea - other.min_exp) as usize).min(other.coeffs.len() - 1);
            for (j, b) in other.coeffs[..=top].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let idx = (out_lo - min_exp) as usize + j;
                out.coeffs[idx] += a * b;
            }
        }
        out
    }

    /// In-place multiplication by the sparse factor `(1 - sign * q^g)`, `g >= 1`.
    /// O(window) and allocation-free; the window is unchanged (the factor has
    /// unit constant term).
    pub fn mul_one_minus_monomial(&mut self, sign: i64, g: i64) {
        assert!(g >= 1);
        assert!(sign == 1 || sign == -1);
        let n = self.coeffs.len();
        let g = g as usize;
        if g >= n {
            return;
        }
        for i in (g..n).rev() {
            // c[i] -= sign * c[i - g]
            if sign == 1 {
                let (lo, hi) = self.coeffs.split_at_mut(i);
                hi[0] -= &lo[i - g];
            } else {
                let (lo, hi) = self.coeffs.split_at_mut(i);
                hi[0] += &lo[i - g];
            }
        }
    }

    /// In-place multiplication by `1 / (1 - sign * q^g)`, `g >= 1` (geometric
    /// series), via a running prefix recurrence. O(window).
    pub fn mul_geometric(&mut self, sign: i64, g: i64) {
        assert!(g >= 1);
        assert!(sign == 1 || sign == -1);
        let n = self.coeffs.len();
        let g = g as usize;
        for i in g..n {
            // c[i] += sign * c[i - g]  (c already updated at i - g)
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if sign == 1 {
                hi[0] += &lo[i - g];
            } else {
                hi[0] -= &lo[i - g];
            }
        }
    }

    /// Multiplicative inverse. Requires the lowest nonzero tracked coefficient
    /// to be `+1` or `-1` (a unit up to a monomial); the result is tracked on
    /// `[-e, order - 2e]` where `e` is that coefficient's exponent, so that
    /// `self.mul(&inv)` is exactly 1 on its whole window.
    pub fn invert(&self) -> Result<Self, crate::Error> {
        let e = self.valuation().ok_or(crate::Error::ZeroSeries)?;
        let lead = self.coeff(e).clone();
        if !lead.abs().is_one() {
            return Err(crate::Error::NonInvertible {
                exponent: e,
                leading: lead.to_string(),
            });
        }
        let sign = lead; // +-1
        // u = sign * q^-e * self is a power series with constant term 1.
        let n = (self.order() - e) as usize; // u tracked to order n
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = BigInt::one();
        for m in 1..=n {
            // inv[m] = -sum_{k=1}^{m} u[k] * inv[m-k]
            let mut acc = BigInt::zero();
            for k in 1..=m {
                let uk = self.coeff(e + k as i64);
                if uk.is_zero() {
                    continue;
                }
                acc += uk * &inv[m - k];
            }
            inv[m] = if sign.is_one() { -acc } else { acc };
        }
        if !sign.is_one() {
            for c in inv.iter_mut() {
                *c = -&*c;
            }
        }
        Ok(LaurentSeries {
            min_exp: -e,
            coeffs: inv,
        })
    }

    /// True iff the two series agree everywhere both windows are tracked.
    pub fn eq_on_common_window(&self, other: &Self) -> bool {
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.order().min(other.order());
        (lo..=hi).all(|e| {
            let a = if e >= self.min_exp {
                self.coeff(e)
            } else {
                zero_coeff()
            };
            let b = if e >= other.min_exp {
                other.coeff(e)
            } else {
                zero_coeff()
            };
            a == b
        })
    }

    /// First exponent `<= through` where the series differ, if any.
    /// Panics if either operand is not tracked through `through`.
    pub fn first_mismatch(&self, other: &Self, through: i64) -> Option<i64> {
        assert!(self.order() >= through && other.order() >= through);
        let lo = self.min_exp.min(other.min_exp);
        (lo..=through).find(|&e| self.coeff_or_zero(e) != other.coeff_or_zero(e))
    }

    fn coeff_or_zero(&self, e: i64) -> &BigInt {
        if e < self.min_exp {
            zero_coeff()
        } else {
            self.coeff(e)
        }
    }

    /// Equality of all coefficients up to and including `through`.
    pub fn eq_to_order(&self, other: &Self, through: i64) -> bool {
        self.first_mismatch(other, through).is_none()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.min_exp + i as i64;
            if first {
                first = false;
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            let mag = if first && c.is_negative() {
                format!("-{}", c.magnitude())
            } else {
                c.magnitude().to_string()
            };
            match e {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "q")?,
                1 => write!(f, "{mag}*q")?,
                _ if mag == "1" => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// `x`-graded family of Laurent series: `rows[m]` is the coefficient of
/// `x^m`. Rows may carry different `q`-windows (staircase reinstatement
/// shifts row `m` by a function of `m`). Rows above `max_x` are treated as
/// zero by arithmetic; callers choose `max_x` large enough that dropped rows
/// cannot reach the `q`-window under inspection.
#[derive(Clone, Debug)]
pub struct BivariateSeries {
    rows: Vec<LaurentSeries>,
}

impl BivariateSeries {
    pub fn from_rows(rows: Vec<LaurentSeries>) -> Self {
        assert!(!rows.is_empty());
        BivariateSeries { rows }
    }

    /// Zero series with rows `0..=max_x` on the q-window `[0, order]`.
    pub fn zero(max_x: usize, order: i64) -> Self {
        BivariateSeries {
            rows: vec![LaurentSeries::zero(order); max_x + 1],
        }
    }

    /// The constant 1.
    pub fn one(max_x: usize, order: i64) -> Self {
        let mut s = Self::zero(max_x, order);
        s.rows[0] = LaurentSeries::one(order);
        s
    }

    pub fn max_x(&self) -> usize {
        self.rows.len() - 1
    }

    /// Least tracked q-order over all rows.
    pub fn order(&self) -> i64 {
        self.rows.iter().map(|r| r.order()).min().unwrap()
    }

    pub fn row(&self, m: usize) -> &LaurentSeries {
        &self.rows[m]
    }

    pub fn row_mut(&mut self, m: usize) -> &mut LaurentSeries {
        &mut self.rows[m]
    }

    pub fn rows(&self) -> &[LaurentSeries] {
        &self.rows
    }

    /// Extend with explicit zero rows or drop rows above the cap.
    pub fn with_max_x(&self, max_x: usize, order: i64) -> Self {
        let mut rows = self.rows.clone();
        rows.truncate(max_x + 1);
        while rows.len() <= max_x {
            rows.push(LaurentSeries::zero(order));
        }
        BivariateSeries { rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.rows.len().min(other.rows.len());
        BivariateSeries {
            rows: (0..n).map(|m| self.rows[m].add(&other.rows[m])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.rows.len().min(other.rows.len());
        BivariateSeries {
            rows: (0..n).map(|m| self.rows[m].sub(&other.rows[m])).collect(),
        }
    }

    /// Convolution over the x-grading, each cell an exact `LaurentSeries`
    /// product; rows beyond either operand's `max_x` contribute zero.
    pub fn mul_capped(&self, other: &Self, x_cap: usize) -> Self {
        let rows = (0..=x_cap)
            .map(|m| {
                let mut cell: Option<LaurentSeries> = None;
                for k in 0..=m.min(self.max_x()) {
                    let j = m - k;
                    if j > other.max_x() {
                        continue;
                    }
                    if self.rows[k].is_zero() || other.rows[j].is_zero() {
                        continue;
                    }
                    let term = self.rows[k].mul(&other.rows[j]);
                    cell = Some(match cell {
                        None => term,
                        Some(acc) => acc.add(&term),
                    });
                }
                cell.unwrap_or_else(|| {
                    // No contribution: window from the pessimistic cell bound.
                    let min_exp = self.rows[0].min_exp() + other.rows[0].min_exp();
                    let order = self.order() + other.rows[0].min_exp().min(0);
                    LaurentSeries::zero_on(min_exp.min(0), order.max(min_exp.min(0)))
                })
            })
            .collect();
        BivariateSeries { rows }
    }

    /// Product with the polynomial-semantics cap `a.max_x + b.max_x`.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, self.max_x() + other.max_x())
    }

    /// Multiply x-degree by `x^w q^e` (shift rows upward by `w`).
    pub fn shifted_x(&self, w: usize, e: i64) -> Self {
        let mut rows = Vec::with_capacity(self.rows.len() + w);
        let order = self.order();
        for _ in 0..w {
            rows.push(LaurentSeries::zero_on(
                self.rows[0].min_exp().min(0) + e.min(0),
                order + e,
            ));
        }
        for r in &self.rows {
            rows.push(r.shifted(e));
        }
        BivariateSeries { rows }
    }

    /// Substitute `x := 1`: the row sum, tracked to the least row order.
    pub fn set_x_to_one(&self) -> LaurentSeries {
        let order = self.order();
        let min_exp = self.rows.iter().map(|r| r.min_exp()).min().unwrap();
        let mut out = LaurentSeries::zero_on(min_exp, order);
        for r in &self.rows {
            out = out.add(r);
        }
        out
    }

    /// Rowwise equality through x-degree `max_x` and q-order `through`.
    pub fn eq_to_order(&self, other: &Self, max_x: usize, through: i64) -> bool {
        self.first_mismatch(other, max_x, through).is_none()
    }

    /// First `(x_degree, q_exponent)` mismatch within the window, if any.
    pub fn first_mismatch(
        &self,
        other: &Self,
        max_x: usize,
        through: i64,
    ) -> Option<(usize, i64)> {
        assert!(self.max_x() >= max_x && other.max_x() >= max_x);
        for m in 0..=max_x {
            if let Some(e) = self.rows[m].first_mismatch(&other.rows[m], through) {
                return Some((m, e));
            }
        }
        None
    }
}
