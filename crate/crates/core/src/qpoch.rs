//! q-Pochhammer constructors, periodic-product expansion, and the inverse
//! Euler transform.
//!
//! Convention: `(a;q)_n = prod_{t=0}^{n-1} (1 - a q^t)` and
//! `(a;q)_inf = prod_{t>=0} (1 - a q^t)`, with `a` a signed monomial. Every
//! product in the catalog is built from factors of this shape.

use crate::series::{BivariateSeries, LaurentSeries};
use crate::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// `prod_{t=0}^{n-1} (1 - a_sign * q^(a_exp + t*q_step))`, truncated at `order`.
pub fn pochhammer_finite(a_exp: i64, a_sign: i64, q_step: i64, n: u32, order: i64) -> LaurentSeries {
    assert!(a_sign == 1 || a_sign == -1);
    let mut out = LaurentSeries::one(order);
    for t in 0..n as i64 {
        let e = a_exp + t * q_step;
        out = mul_unit_factor(out, a_sign, e);
    }
    out
}

/// `prod_{t>=0} (1 - a_sign * q^(a_exp + t*q_step))`, truncated at `order`.
/// Factors whose exponent exceeds `order` cannot affect the window and are
/// skipped; a nonpositive step never terminates and is rejected.
pub fn pochhammer_infinite(
    a_exp: i64,
    a_sign: i64,
    q_step: i64,
    order: i64,
) -> Result<LaurentSeries, Error> {
    assert!(a_sign == 1 || a_sign == -1);
    if q_step <= 0 {
        return Err(Error::NonTerminatingProduct);
    }
    assert!(
        a_exp >= 1 || a_exp + q_step >= 1,
        "pochhammer_infinite: exponents must become positive"
    );
    let mut out = LaurentSeries::one(order);
    let mut e = a_exp;
    while e <= out.order() {
        out = mul_unit_factor(out, a_sign, e);
        e += q_step;
    }
    Ok(out)
}

/// Multiply by `(1 - sign * q^e)` for any integer `e` (sparse when `e >= 1`).
fn mul_unit_factor(mut s: LaurentSeries, sign: i64, e: i64) -> LaurentSeries {
    if e >= 1 {
        if e <= s.order() {
            s.mul_one_minus_monomial(sign, e);
        }
        s
    } else {
        let order = s.order().max(e);
        let mut factor = LaurentSeries::monomial(-sign, e, order);
        *factor.coeff_mut(0) += 1;
        s.mul(&factor)
    }
}

/// One residue-class factor of a periodic product:
/// `prod_{m >= 1, m = residue (mod modulus)} (1 -+ q^m)^(-exponent)`.
///
/// `plus_sign = false` gives base `(1 - q^m)`, `true` gives `(1 + q^m)`, so
/// `exponent = 1` with `plus_sign = false` is the usual congruence-class
/// denominator `1/(1-q^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochFactor {
    pub residue: u32,
    pub exponent: i32,
    pub plus_sign: bool,
}

/// An explicit finite Laurent polynomial factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFactor {
    pub min_exp: i64,
    pub coeffs: Vec<i64>,
}

/// A periodic infinite product, the shape of every product side in the
/// catalog: residue-class Pochhammer factors modulo `modulus` plus optional
/// explicit finite factors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProductSpec {
    pub modulus: u32,
    pub factors: Vec<PochFactor>,
    pub extra: Vec<PolyFactor>,
}

impl ProductSpec {
    /// Plain congruence-class product `1 / prod (1 - q^m)` over `residues`.
    pub fn reciprocal(modulus: u32, residues: &[u32]) -> Self {
        ProductSpec {
            modulus,
            factors: residues
                .iter()
                .map(|&r| PochFactor {
                    residue: r,
                    exponent: 1,
                    plus_sign: false,
                })
                .collect(),
            extra: Vec::new(),
        }
    }

    /// Add numerator factors `prod (1 - q^m)` over `residues`.
    pub fn with_numerators(mut self, residues: &[u32]) -> Self {
        for &r in residues {
            self.factors.push(PochFactor {
                residue: r,
                exponent: -1,
                plus_sign: false,
            });
        }
        self
    }

    /// Add numerator factors `prod (1 + q^m)` over `residues`
    /// (distinct-parts style).
    pub fn with_plus_numerators(mut self, residues: &[u32]) -> Self {
        for &r in residues {
            self.factors.push(PochFactor {
                residue: r,
                exponent: -1,
                plus_sign: true,
            });
        }
        self
    }

    /// Add denominator factors `1 / prod (1 + q^m)` over `residues`.
    pub fn with_plus_denominators(mut self, residues: &[u32]) -> Self {
        for &r in residues {
            self.factors.push(PochFactor {
                residue: r,
                exponent: 1,
                plus_sign: true,
            });
        }
        self
    }

    /// The formal reciprocal: flips every exponent.
    pub fn inverse(&self) -> Self {
        ProductSpec {
            modulus: self.modulus,
            factors: self
                .factors
                .iter()
                .map(|f| PochFactor {
                    residue: f.residue,
                    exponent: -f.exponent,
                    plus_sign: f.plus_sign,
                })
                .collect(),
            extra: self
                .extra
                .iter()
                .map(|_| panic!("inverse of explicit polynomial factors is not defined"))
                .collect(),
        }
    }

    /// Residues (mod `modulus`) carrying net exponent `+1` plain factors,
    /// i.e. the allowed congruence classes of a `1/prod(1-q^m)` product.
    pub fn positive_residues(&self) -> Vec<u32> {
        let mut rs: Vec<u32> = self
            .factors
            .iter()
            .filter(|f| f.exponent > 0 && !f.plus_sign)
            .map(|f| f.residue % self.modulus)
            .collect();
        rs.sort_unstable();
        rs
    }
}

/// Expand a [`ProductSpec`] exactly to `order`. The result of any catalog
/// product has `min_exp = 0` and constant term 1.
pub fn expand_product(spec: &ProductSpec, order: i64) -> LaurentSeries {
    assert!(spec.modulus >= 1 || spec.factors.is_empty());
    let mut out = LaurentSeries::one(order);
    for f in &spec.factors {
        let modulus = spec.modulus as i64;
        let mut m = f.residue as i64 % modulus;
        if m == 0 {
            m = modulus;
        }
        let base_sign = if f.plus_sign { -1 } else { 1 };
        while m <= order {
            for _ in 0..f.exponent.unsigned_abs() {
                if f.exponent > 0 {
                    out.mul_geometric(base_sign, m);
                } else {
                    out.mul_one_minus_monomial(base_sign, m);
                }
            }
            m += modulus;
        }
    }
    for p in &spec.extra {
        let coeffs: Vec<BigInt> = p.coeffs.iter().map(|&c| c.into()).collect();
        out = out.mul(&LaurentSeries::from_coeffs(p.min_exp, coeffs));
    }
    out
}

/// The inverse Euler transform: the unique integer sequence `a_1..a_N` with
/// `f = prod_{m>=1} (1-q^m)^(-a_m)` through order `N = f.order()`.
/// Computed by exact factor peeling; requires constant term 1 and no support
/// below `q^0`.
pub fn inverse_euler(f: &LaurentSeries) -> Vec<BigInt> {
    assert_eq!(f.valuation(), Some(0), "inverse Euler needs valuation 0");
    assert!(f.coeff(0).is_one(), "inverse Euler needs constant term 1");
    let n = f.order();
    let mut g = f.clone();
    let mut out = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let am = g.coeff(m).clone();
        peel(&mut g, m, &am);
        out.push(am);
    }
    out
}

/// As [`inverse_euler`], but gives up as soon as some `|a_m| > bound`.
pub fn inverse_euler_bounded(f: &LaurentSeries, bound: u32) -> Option<Vec<i64>> {
    if f.valuation() != Some(0) || !f.coeff(0).is_one() {
        return None;
    }
    let n = f.order();
    let mut g = f.clone();
    let mut out = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let am = g.coeff(m).clone();
        if am.abs() > BigInt::from(bound) {
            return None;
        }
        peel(&mut g, m, &am);
        out.push(am.to_i64().unwrap());
    }
    Some(out)
}

/// Multiply `g` by `(1-q^m)^am`, cancelling its `q^m` coefficient.
fn peel(g: &mut LaurentSeries, m: i64, am: &BigInt) {
    let k = am
        .abs()
        .to_u64()
        .expect("inverse Euler exponent overflows u64");
    for _ in 0..k {
        if am.is_positive() {
            g.mul_one_minus_monomial(1, m);
        } else {
            g.mul_geometric(1, m);
        }
    }
}

/// Check that a transform is periodic with period `modulus` and entries in
/// `{-1, 0, 1}` over its whole length; on success returns the residue map
/// `map[r] = a_m` for `m = r (mod modulus)`. Requires at least two full
/// periods plus `guard` extra entries.
pub fn is_periodic_pm1(a: &[BigInt], modulus: u32, guard: u32) -> Option<Vec<i8>> {
    let modulus = modulus as usize;
    assert!(modulus >= 1);
    assert!(
        a.len() >= 2 * modulus + guard as usize,
        "need at least two periods plus guard"
    );
    let one = BigInt::one();
    for v in a {
        if v.abs() > one {
            return None;
        }
    }
    for i in 0..a.len() - modulus {
        if a[i] != a[i + modulus] {
            return None;
        }
    }
    let mut map = vec![0i8; modulus];
    for (i, v) in a.iter().take(modulus).enumerate() {
        let m = i + 1;
        map[m % modulus] = v.to_i8().unwrap();
    }
    Some(map)
}

// ---------------------------------------------------------------------------
// Bivariate products
// ---------------------------------------------------------------------------

/// One factor `prod_{t>=0} (1 -+ x^w q^(q_exp + t*q_step))^(+-1)` of a
/// bivariate closed form. Each factor raises x-degree, so the expansion is
/// finite per x-row regardless of the q-exponent's sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivarFactor {
    pub x_weight: u32,
    pub q_exp: i64,
    pub q_step: u32,
    /// `true` for `(...)^(-1)` (denominator), `false` for a plain product.
    pub inverted: bool,
    /// `true` for base `(1 + x^w q^e)` instead of `(1 - x^w q^e)`.
    pub plus_sign: bool,
}

/// `coeff * x^x_shift * q^q_shift * prod factors` -- one term of a closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivarTerm {
    pub coeff: i64,
    pub x_shift: u32,
    pub q_shift: i64,
    pub factors: Vec<BivarFactor>,
}

/// A sum of monomial-prefixed products of bivariate Pochhammer factors: the
/// shape of every jagged generating function in the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivarProduct {
    pub terms: Vec<BivarTerm>,
}

impl BivarProduct {
    pub fn single(factors: Vec<BivarFactor>) -> Self {
        BivarProduct {
            terms: vec![BivarTerm {
                coeff: 1,
                x_shift: 0,
                q_shift: 0,
                factors,
            }],
        }
    }

    /// Expand rows `0..=max_x` exactly on `[*, order]`. Negative factor
    /// exponents push row windows downward; the work order is padded so the
    /// requested window is exact.
    pub fn expand(&self, order: i64, max_x: usize) -> BivariateSeries {
        let mut acc: Option<BivariateSeries> = None;
        for term in &self.terms {
            let dip: i64 = term
                .factors
                .iter()
                .map(|f| (-f.q_exp).max(0))
                .max()
                .unwrap_or(0);
            let lo = -(dip * max_x as i64) + term.q_shift.min(0);
            let work_order = order + dip * max_x as i64 + term.q_shift.abs();
            let mut s = BivariateSeries::from_rows(vec![
                LaurentSeries::zero_on(lo.min(0), work_order);
                max_x + 1
            ]);
            *s.row_mut(0) = {
                let mut one = LaurentSeries::zero_on(lo.min(0), work_order);
                *one.coeff_mut(0) = BigInt::one();
                one
            };
            for f in &term.factors {
                apply_bivar_factor(&mut s, f, max_x);
            }
            // x^shift q^shift * coeff, then trim to the requested window.
            let shifted = s.shifted_x(term.x_shift as usize, term.q_shift);
            let mut rows = Vec::with_capacity(max_x + 1);
            for m in 0..=max_x {
                let r = if m <= shifted.max_x() {
                    shifted.row(m).clone()
                } else {
                    LaurentSeries::zero_on(lo.min(0), work_order)
                };
                let r = r.truncated(order.min(r.order())).scale(term.coeff);
                rows.push(r);
            }
            let term_series = BivariateSeries::from_rows(rows);
            acc = Some(match acc {
                None => term_series,
                Some(a) => a.add(&term_series),
            });
        }
        acc.expect("closed form with no terms")
    }
}

/// Multiply `s` in place by one bivariate Pochhammer factor.
fn apply_bivar_factor(s: &mut BivariateSeries, f: &BivarFactor, max_x: usize) {
    assert!(f.x_weight >= 1, "bivariate factors must raise x-degree");
    assert!(f.q_step >= 1);
    let w = f.x_weight as usize;
    let sign: i64 = if f.plus_sign { -1 } else { 1 };
    let mut e = f.q_exp;
    loop {
        // A factor only matters while its monomial can land inside some
        // row's window: the most generous bound uses the lowest row min_exp.
        let lowest = (0..=max_x).map(|m| s.row(m).min_exp()).min().unwrap();
        let highest = (0..=max_x).map(|m| s.row(m).order()).max().unwrap();
        if e + lowest > highest {
            break;
        }
        if f.inverted {
            // geometric recurrence: rows ascending, reusing updated rows
            for m in w..=max_x {
                let add = s.row(m - w).shifted(e).scale(sign);
                *s.row_mut(m) = s.row(m).add(&add);
            }
        } else {
            for m in (w..=max_x).rev() {
                let add = s.row(m - w).shifted(e).scale(-sign);
                *s.row_mut(m) = s.row(m).add(&add);
            }
        }
        e += f.q_step as i64;
    }
}

// Serde: the catalog file stores a product as residue lists, the `_plus`
// variants being factors with base `(1 + q^m)`.
#[derive(Serialize, Deserialize)]
struct ProductSpecJson {
    modulus: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    residues_pos: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    residues_neg: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    residues_pos_plus: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    residues_neg_plus: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    extra: Vec<PolyFactor>,
}

impl Serialize for ProductSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut j = ProductSpecJson {
            modulus: self.modulus,
            residues_pos: vec![],
            residues_neg: vec![],
            residues_pos_plus: vec![],
            residues_neg_plus: vec![],
            extra: self.extra.clone(),
        };
        for f in &self.factors {
            let list = match (f.exponent > 0, f.plus_sign) {
                (true, false) => &mut j.residues_pos,
                (false, false) => &mut j.residues_neg,
                (true, true) => &mut j.residues_pos_plus,
                (false, true) => &mut j.residues_neg_plus,
            };
            for _ in 0..f.exponent.unsigned_abs() {
                list.push(f.residue);
            }
        }
        j.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ProductSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = ProductSpecJson::deserialize(de)?;
        let mut factors = Vec::new();
        let mut push = |rs: &[u32], exponent: i32, plus_sign: bool| {
            for &r in rs {
                factors.push(PochFactor {
                    residue: r,
                    exponent,
                    plus_sign,
                });
            }
        };
        push(&j.residues_pos, 1, false);
        push(&j.residues_neg, -1, false);
        push(&j.residues_pos_plus, 1, true);
        push(&j.residues_neg_plus, -1, true);
        Ok(ProductSpec {
            modulus: j.modulus,
            factors,
            extra: j.extra,
        })
    }
}
