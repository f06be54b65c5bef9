//! The three-way verifier, the intrigue relation (series check plus the
//! explicit bijection), the product relation check, and the linear-term
//! conjecture search.

use crate::catalog::{Catalog, IdentitySpec};
use crate::multisum::MultiSumSpec;
use crate::qpoch::{expand_product, inverse_euler_bounded, is_periodic_pm1};
use crate::rules::{Partition, RuleSet};
use crate::series::LaurentSeries;
use crate::Error;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Result of one pairwise series comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Mismatch {
        exponent: i64,
        lhs: String,
        rhs: String,
    },
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    fn compare(a: &LaurentSeries, b: &LaurentSeries, through: i64) -> Outcome {
        match a.first_mismatch(b, through) {
            None => Outcome::Pass,
            Some(e) => Outcome::Mismatch {
                exponent: e,
                lhs: a.coeff(e).to_string(),
                rhs: b.coeff(e).to_string(),
            },
        }
    }
}

/// Outcome of the three pairwise comparisons for one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub order: i64,
    pub count_order: i64,
    pub sum_vs_product: Outcome,
    pub rules_vs_sum: Outcome,
    pub rules_vs_product: Outcome,
    /// Product-side coefficient at the top checked exponent, as a witness of
    /// how far the window reaches.
    pub coefficient_at_order: String,
    pub wall_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.sum_vs_product.passed()
            && self.rules_vs_sum.passed()
            && self.rules_vs_product.passed()
    }
}

/// Verify one identity: analytic sum against product to `order`, and the
/// partition-count DP against both to `count_order`.
pub fn verify(
    catalog: &Catalog,
    id: &str,
    order: i64,
    count_order: i64,
) -> Result<VerificationReport, Error> {
    verify_entry(catalog.get(id)?, order, count_order)
}

pub fn verify_entry(
    entry: &IdentitySpec,
    order: i64,
    count_order: i64,
) -> Result<VerificationReport, Error> {
    assert!(count_order <= order);
    let start = Instant::now();
    let sum = entry.sum.evaluate(order)?;
    let product = expand_product(&entry.product, order);
    let counts = entry.rules.count_series(count_order)?;
    Ok(VerificationReport {
        id: entry.id.clone(),
        order,
        count_order,
        sum_vs_product: Outcome::compare(&sum, &product, order),
        rules_vs_sum: Outcome::compare(&counts, &sum, count_order),
        rules_vs_product: Outcome::compare(&counts, &product, count_order),
        coefficient_at_order: product.coeff(order).to_string(),
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

// ---------------------------------------------------------------------------
// The intrigue relation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntrigueTag {
    S2,
    S3,
}

/// The weight/length-respecting map behind `S1 = S2 + x q S3`: average out
/// the maximal leading run `1, 3, 5, ...` of consecutive odd parts. An
/// even-length run keeps weight and length (image in S2); an odd-length run
/// drops the leading 1 (image in S3, weight and length one lower).
pub fn intrigue_map(
    pi: &Partition,
    s1_rules: &RuleSet,
) -> Result<(IntrigueTag, Partition), Error> {
    if !s1_rules.matches(pi) {
        return Err(Error::RuleViolation(pi.to_string()));
    }
    let ps = pi.parts();
    let s = ps
        .iter()
        .enumerate()
        .take_while(|&(i, &p)| p == 2 * i as u32 + 1)
        .count();
    let mut out: Vec<u32> = Vec::with_capacity(ps.len());
    if s % 2 == 0 {
        for pair in ps[..s].chunks(2) {
            let avg = (pair[0] + pair[1]) / 2;
            out.push(avg);
            out.push(avg);
        }
        out.extend_from_slice(&ps[s..]);
        Ok((IntrigueTag::S2, Partition::new(out)))
    } else {
        for pair in ps[1..s].chunks(2) {
            let avg = (pair[0] + pair[1]) / 2;
            out.push(avg);
            out.push(avg);
        }
        out.extend_from_slice(&ps[s..]);
        Ok((IntrigueTag::S3, Partition::new(out)))
    }
}

/// Check `S1(x,q) = S2(x,q) + x q S3(x,q)` on the given window from the
/// rules-DP bivariate counts, and certify the map as a bijection with the
/// stated weight/length bookkeeping for all `n <= bijection_n`.
pub fn check_intrigue_sum(
    catalog: &Catalog,
    order: i64,
    max_x: usize,
    bijection_n: u32,
) -> Result<bool, Error> {
    let s1 = catalog.get("A9-1")?;
    let s2 = catalog.get("A9-2")?;
    let s3 = catalog.get("A9-3")?;
    let b1 = s1.rules.count_series_bivariate(order, max_x)?;
    let b2 = s2.rules.count_series_bivariate(order, max_x)?;
    let b3 = s3.rules.count_series_bivariate(order, max_x)?;
    let rhs = b2.add(&b3.shifted_x(1, 1).with_max_x(max_x, order));
    for m in 0..=max_x {
        let through = b1.row(m).order().min(rhs.row(m).order());
        if b1.row(m).first_mismatch(rhs.row(m), through).is_some() {
            return Ok(false);
        }
    }

    for n in 0..=bijection_n {
        let mut images_s2 = Vec::new();
        let mut images_s3 = Vec::new();
        for pi in s1.rules.enumerate(n) {
            let len = pi.len();
            let (tag, image) = intrigue_map(&pi, &s1.rules)?;
            match tag {
                IntrigueTag::S2 => {
                    if image.weight() != n || image.len() != len {
                        return Ok(false);
                    }
                    images_s2.push(image);
                }
                IntrigueTag::S3 => {
                    if image.weight() != n - 1 || image.len() != len - 1 {
                        return Ok(false);
                    }
                    images_s3.push(image);
                }
            }
        }
        images_s2.sort();
        images_s3.sort();
        let mut expect_s2 = s2.rules.enumerate(n);
        expect_s2.sort();
        if images_s2 != expect_s2 {
            return Ok(false);
        }
        let mut expect_s3 = if n == 0 { vec![] } else { s3.rules.enumerate(n - 1) };
        expect_s3.sort();
        if images_s3 != expect_s3 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product-side analogue: `P1 = P2 + q P3` as expanded series.
pub fn check_intrigue_prod(catalog: &Catalog, order: i64) -> Result<bool, Error> {
    let p1 = expand_product(&catalog.get("A9-1")?.product, order);
    let p2 = expand_product(&catalog.get("A9-2")?.product, order);
    let p3 = expand_product(&catalog.get("A9-3")?.product, order);
    let rhs = p2.add(&p3.shifted(1));
    Ok(p1.first_mismatch(&rhs, order).is_none())
}

// ---------------------------------------------------------------------------
// Linear-term search
// ---------------------------------------------------------------------------

/// A linear vector whose sum-side has a periodic +-1 inverse Euler transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub linear: Vec<i64>,
    /// `residues[r]` is the transform entry on the class `m = r (mod modulus)`.
    pub residues: Vec<i8>,
}

/// Try every integer linear vector in the box `lo[a]..=hi[a]` on top of the
/// base form; report those whose series has constant term 1 and an inverse
/// Euler transform that is periodic mod `modulus` with entries in {-1,0,1}.
pub fn search_linear_shifts(
    base: &MultiSumSpec,
    lo: &[i64],
    hi: &[i64],
    order: i64,
    modulus: u32,
) -> Result<Vec<SearchHit>, Error> {
    let r = base.rank();
    assert_eq!(lo.len(), r);
    assert_eq!(hi.len(), r);
    assert_eq!(base.branches.len(), 1, "search bases are single-branch");
    assert!(
        order >= 3 * modulus as i64,
        "periodicity needs at least three periods"
    );
    let mut hits = Vec::new();
    let mut linear = lo.to_vec();
    loop {
        if let Some(hit) = try_candidate(base, &linear, order, modulus)? {
            hits.push(hit);
        }
        // advance the odometer
        let mut a = 0;
        loop {
            if a == r {
                return Ok(hits);
            }
            linear[a] += 1;
            if linear[a] <= hi[a] {
                break;
            }
            linear[a] = lo[a];
            a += 1;
        }
    }
}

fn try_candidate(
    base: &MultiSumSpec,
    linear: &[i64],
    order: i64,
    modulus: u32,
) -> Result<Option<SearchHit>, Error> {
    let mut spec = base.clone();
    for (l2, &l) in spec.branches[0].linear2.iter_mut().zip(linear) {
        *l2 += 2 * l;
    }
    let series = match spec.evaluate(order) {
        Ok(s) => s,
        Err(Error::UnboundedSum(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if series.valuation() != Some(0) || !num_traits::One::is_one(series.coeff(0)) {
        return Ok(None);
    }
    let Some(transform) = inverse_euler_bounded(&series.truncated(order), 1) else {
        return Ok(None);
    };
    let entries: Vec<BigInt> = transform.iter().map(|&v| v.into()).collect();
    let Some(residues) = is_periodic_pm1(&entries, modulus, 0) else {
        return Ok(None);
    };
    Ok(Some(SearchHit {
        linear: linear.to_vec(),
        residues,
    }))
}

// ---------------------------------------------------------------------------
// Witness listings
// ---------------------------------------------------------------------------

/// Partitions of `n` counted by a congruence-class product, in table order:
/// unrestricted parts from the `1/(1-q^m)` classes and distinct parts from
/// the `(1+q^m)` numerator classes. Products with other factor shapes do not
/// count partitions directly and are rejected.
pub fn product_witnesses(
    spec: &crate::qpoch::ProductSpec,
    n: u32,
) -> Result<Vec<Partition>, Error> {
    let modulus = spec.modulus;
    let mut unrestricted = Vec::new();
    let mut distinct = Vec::new();
    for f in &spec.factors {
        match (f.exponent, f.plus_sign) {
            (1, false) => unrestricted.push(f.residue % modulus),
            (-1, true) => distinct.push(f.residue % modulus),
            _ => {
                return Err(Error::Catalog(
                    "product side is not partition-listable for this entry".into(),
                ))
            }
        }
    }
    if !spec.extra.is_empty() {
        return Err(Error::Catalog(
            "product side is not partition-listable for this entry".into(),
        ));
    }
    let allowed = |v: u32| -> Option<bool> {
        let r = v % modulus;
        if unrestricted.contains(&r) {
            Some(false)
        } else if distinct.contains(&r) {
            Some(true)
        } else {
            None
        }
    };
    let mut out = Vec::new();
    let mut desc: Vec<u32> = Vec::new();
    fn rec(
        remaining: u32,
        max_next: u32,
        allowed: &dyn Fn(u32) -> Option<bool>,
        desc: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition::new(desc.iter().rev().copied().collect()));
            return;
        }
        for v in (1..=max_next.min(remaining)).rev() {
            let Some(must_be_distinct) = allowed(v) else {
                continue;
            };
            if must_be_distinct && desc.last() == Some(&v) {
                continue;
            }
            desc.push(v);
            rec(remaining - v, v, allowed, desc, out);
            desc.pop();
        }
    }
    rec(n, n, &allowed, &mut desc, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::search_base_for;

    #[test]
    fn verify_identity1_small_order() {
        let cat = Catalog::builtin();
        let report = verify(&cat, "A9-1", 40, 25).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(verify(&cat, "no-such", 10, 5).is_err());
    }

    #[test]
    fn perturbed_sum_reports_first_mismatch() {
        let cat = Catalog::builtin();
        let mut entry = cat.get("A9-1").unwrap().clone();
        entry.sum.branches[0].linear2[0] += 2; // shift the i-linear term by 1
        let report = verify_entry(&entry, 30, 10).unwrap();
        assert!(!report.passed());
        match report.sum_vs_product {
            Outcome::Mismatch { exponent, .. } => assert!(exponent >= 1),
            Outcome::Pass => panic!("expected a mismatch"),
        }
    }

    #[test]
    fn intrigue_map_examples() {
        let cat = Catalog::builtin();
        let rules = &cat.get("A9-1").unwrap().rules;
        // even-length odd run: 1+3+5+7 averages to 2+2+6+6
        let (tag, image) = intrigue_map(&Partition::new(vec![1, 3, 5, 7, 12]), rules).unwrap();
        assert_eq!(tag, IntrigueTag::S2);
        assert_eq!(image.parts(), &[2, 2, 6, 6, 12]);
        // odd-length run: 1+3+5+7+9 drops the 1 and averages to 4+4+8+8
        let (tag, image) = intrigue_map(&Partition::new(vec![1, 3, 5, 7, 9]), rules).unwrap();
        assert_eq!(tag, IntrigueTag::S3);
        assert_eq!(image.parts(), &[4, 4, 8, 8]);
        // no leading odd run at all
        let (tag, image) = intrigue_map(&Partition::new(vec![2, 4, 6]), rules).unwrap();
        assert_eq!(tag, IntrigueTag::S2);
        assert_eq!(image.parts(), &[2, 4, 6]);
    }

    #[test]
    fn intrigue_checks_small() {
        let cat = Catalog::builtin();
        assert!(check_intrigue_sum(&cat, 24, 12, 18).unwrap());
        assert!(check_intrigue_prod(&cat, 60).unwrap());
    }

    #[test]
    fn intrigue_prod_mutation_fails() {
        // removing the q factor breaks the relation
        let cat = Catalog::builtin();
        let p1 = expand_product(&cat.get("A9-1").unwrap().product, 30);
        let p2 = expand_product(&cat.get("A9-2").unwrap().product, 30);
        let p3 = expand_product(&cat.get("A9-3").unwrap().product, 30);
        assert!(p1.first_mismatch(&p2.add(&p3), 30).is_some());
        // and shifting S3 by q^2 instead of q breaks the sum relation
        let b1 = cat.get("A9-1").unwrap().rules.count_series(20).unwrap();
        let b2 = cat.get("A9-2").unwrap().rules.count_series(20).unwrap();
        let b3 = cat.get("A9-3").unwrap().rules.count_series(20).unwrap();
        let wrong = b2.add(&b3.shifted(2));
        assert!(b1.first_mismatch(&wrong, 18).is_some());
    }

    #[test]
    fn report_json_round_trip() {
        let cat = Catalog::builtin();
        let report = verify(&cat, "A9-1", 30, 15).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn product_witnesses_table_order() {
        let cat = Catalog::builtin();
        let spec = &cat.get("A9-1").unwrap().product;
        let w = product_witnesses(spec, 12).unwrap();
        assert_eq!(w.len(), 10);
        assert_eq!(w[0].parts(), &[1, 11]);
        assert_eq!(w[9].parts(), &[1; 12]);
        // n = 0 lists the empty partition
        assert_eq!(product_witnesses(spec, 0).unwrap(), vec![Partition::empty()]);
        // distinct classes respected
        let cap2 = &cat.get("Capparelli-2-2idx").unwrap().product;
        let w = product_witnesses(cap2, 6).unwrap();
        // 6, 5+1, 3+2+1? (2 not allowed), 3+3? (repeat not allowed)
        let strs: Vec<String> = w.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, vec!["6", "1+5"]);
        // plain numerators are not listable
        let a92 = &cat.get("A9-2").unwrap().product;
        assert!(product_witnesses(a92, 6).is_err());
    }

    #[test]
    fn search_finds_known_vector_in_tiny_box() {
        let cat = Catalog::builtin();
        let base = search_base_for(&cat, "A9-1").unwrap();
        let hits = search_linear_shifts(&base, &[0, 0, 0], &[1, 1, 1], 60, 12).unwrap();
        // the box contains conj +j (identity 4)
        assert!(hits.iter().any(|h| h.linear == vec![0, 1, 0]), "{hits:?}");
        // zero-volume box
        let empty = search_linear_shifts(&base, &[0, 0, 0], &[-1, -1, -1], 60, 12);
        assert!(empty.unwrap().is_empty());
    }
}
