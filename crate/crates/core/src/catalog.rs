//! The identity registry: every identity's three faces (infinite product,
//! multi-index analytic sum, forbidden-pattern rule set) plus its staircase
//! step, block grammar, jagged closed form, and any rejected published
//! variants kept for regression.
//!
//! The built-in catalog is the source of truth; it serializes to and from a
//! single JSON document (see `data/catalog.json`).

use crate::multisum::{MultiSumSpec, SumBranch};
use crate::qpoch::{BivarFactor, BivarProduct, BivarTerm, ProductSpec};
use crate::rules::{ForbiddenPattern, InitialConstraint, RuleSet};
use crate::staircase::{BlockGrammar, ExceptionString, InitialBlock, LabelRule, Regex};
use crate::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Conjecture,
    Theorem,
}

/// Case-split jagged data (the asymmetric identity with a fictitious zero).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSplit {
    pub case_a_grammar: BlockGrammar,
    pub case_a_form: BivarProduct,
    pub case_b_grammar: BlockGrammar,
    pub case_b_form: BivarProduct,
}

/// One identity: all three faces plus staircase metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub id: String,
    pub status: Status,
    /// Staircase removed from the sum-side partitions.
    pub staircase_step: u32,
    /// Extra x-degree carried by some jagged images (1 when a fictitious
    /// zero is counted as a part).
    #[serde(default)]
    pub x_shift: u32,
    pub product: ProductSpec,
    /// Alternative printed forms of the same product, expanded independently.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alt_products: Vec<ProductSpec>,
    pub sum: MultiSumSpec,
    pub rules: RuleSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grammar: Option<BlockGrammar>,
    /// Closed-form generating function of the jagged partitions (the
    /// pre-staircase factorization), where one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jagged_product: Option<BivarProduct>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_split: Option<CaseSplit>,
    /// Published sum-side variants rejected by verification (kept so the
    /// regression suite can show their first mismatch).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected_variants: Vec<MultiSumSpec>,
    pub notes: String,
}

/// The registry; serializes as a bare JSON array of identities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalog {
    pub entries: Vec<IdentitySpec>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Result<&IdentitySpec, Error> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Catalog(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serialization")
    }

    /// The full built-in registry (22 entries).
    pub fn builtin() -> Catalog {
        Catalog {
            entries: vec![
                a9_1(),
                a9_2(),
                a9_3(),
                a9_4(),
                a9_4a(),
                a9_5(),
                a9_5a(),
                a9_6(),
                a9_6a(),
                kr_i5(),
                kr_i6(),
                kr_i6_alt(),
                r_i5a(),
                r_i6a(),
                new_7(),
                new_7a(),
                new_8(),
                new_8a(),
                capparelli_1_4idx(),
                capparelli_1_2idx(),
                capparelli_2_4idx(),
                capparelli_2_2idx(),
            ],
        }
    }
}

// ---------------------------------------------------------------------------
// Shared building blocks
// ---------------------------------------------------------------------------

fn pat(offsets: &[u32]) -> ForbiddenPattern {
    ForbiddenPattern::new(offsets)
}

fn pat_mod(offsets: &[u32], modulus: u32, residue: u32) -> ForbiddenPattern {
    ForbiddenPattern::with_base(offsets, modulus, residue)
}

fn forbid(part: u32) -> InitialConstraint {
    InitialConstraint::PartForbidden { part }
}

fn at_most(part: u32, count: u32) -> InitialConstraint {
    InitialConstraint::PartAtMost { part, count }
}

fn no_prefix(prefix: &[u32]) -> InitialConstraint {
    InitialConstraint::PrefixForbidden {
        prefix: prefix.to_vec(),
    }
}

/// Shared quadratic of the mod-12 three-index family (doubled).
fn a9_quad2() -> Vec<Vec<i64>> {
    vec![vec![2, 4, 6], vec![4, 8, 12], vec![6, 12, 24]]
}

/// `sum (-1)^k x^(i+2j+3k) q^(quad + L.idx) / ((q;q)_i (q^4;q^4)_j (q^6;q^6)_k)`
fn a9_sum(linear: [i64; 3]) -> MultiSumSpec {
    MultiSumSpec::new(
        vec![1, 2, 3],
        vec![1, 4, 6],
        vec![false, false, true],
        a9_quad2(),
        linear.iter().map(|&l| 2 * l).collect(),
        0,
    )
}

/// The three shared A9 difference conditions as contiguous patterns.
fn a9_patterns() -> Vec<ForbiddenPattern> {
    vec![
        pat(&[0, 1]),
        pat_mod(&[0, 0], 2, 1),
        pat_mod(&[0, 0, 0], 2, 0),
        pat_mod(&[0, 0, 2], 2, 0),
        pat_mod(&[0, 0, 3], 2, 0),
        pat_mod(&[0, 2, 2], 2, 0),
        pat_mod(&[0, 3, 3], 2, 1),
    ]
}

fn bf(x_weight: u32, q_exp: i64, q_step: u32, inverted: bool, plus_sign: bool) -> BivarFactor {
    BivarFactor {
        x_weight,
        q_exp,
        q_step,
        inverted,
        plus_sign,
    }
}

fn jp(factors: Vec<BivarFactor>) -> BivarProduct {
    BivarProduct::single(factors)
}

fn rule(modulus: u32, residue: u32, min: i64, max: Option<i64>, body: Regex) -> LabelRule {
    LabelRule {
        modulus,
        residue,
        min_label: min,
        max_label: max,
        body,
    }
}

fn grammar(label_rules: Vec<LabelRule>) -> BlockGrammar {
    BlockGrammar {
        label_rules,
        initial: None,
        exceptions: vec![],
    }
}

/// Conflict string `v, v+1, v-1`: a nonempty singles-block meeting a
/// pair-opening block right above it.
fn pair_conflict(modulus: u32, residue: u32, min_base: i64) -> ExceptionString {
    ExceptionString {
        offsets: vec![0, 1, -1],
        modulus,
        residue,
        min_base,
    }
}

// ---------------------------------------------------------------------------
// The symmetric mod-12 family
// ---------------------------------------------------------------------------

fn a9_1() -> IdentitySpec {
    IdentitySpec {
        id: "A9-1".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 4, 6, 8, 11]),
        alt_products: vec![],
        sum: a9_sum([0, 4, 3]),
        rules: RuleSet::new(a9_patterns()).with_initial(at_most(2, 1)),
        grammar: Some(BlockGrammar {
            label_rules: vec![
                rule(2, 0, 2, Some(2), Regex::star(&[0])),
                rule(2, 0, 4, None, Regex::seq(vec![Regex::star(&[0, -2]), Regex::star(&[0])])),
                rule(2, 1, 1, None, Regex::star(&[0])),
            ],
            initial: None,
            exceptions: vec![pair_conflict(2, 1, 3)],
        }),
        jagged_product: Some(jp(vec![
            bf(1, 1, 1, true, false),
            bf(2, 6, 4, true, false),
            bf(3, 9, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Level-2 vacuum module L(L0+L1) of A9(2); 2-staircase; 2+2 \
                forbidden as a sub-partition."
            .into(),
    }
}

fn a9_2() -> IdentitySpec {
    IdentitySpec {
        id: "A9-2".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[2, 3, 4, 8, 9, 10]).with_numerators(&[6]),
        // (-q^3;q^6) (q^6;q^6) / (q^2;q^2), written mod 6.
        alt_products: vec![ProductSpec::reciprocal(6, &[0, 2, 4])
            .with_numerators(&[0])
            .with_plus_numerators(&[3])],
        sum: a9_sum([1, 0, 3]),
        rules: RuleSet::new(a9_patterns()).with_initial(forbid(1)),
        grammar: Some(BlockGrammar {
            label_rules: vec![
                rule(2, 0, 2, None, Regex::seq(vec![Regex::star(&[0, -2]), Regex::star(&[0])])),
                rule(2, 1, 3, None, Regex::star(&[0])),
            ],
            initial: None,
            exceptions: vec![pair_conflict(2, 1, 3)],
        }),
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, true, false),
            bf(2, 2, 4, true, false),
            bf(3, 9, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Level-2 module L(L3) of A9(2); 2-staircase; no part 1.".into(),
    }
}

fn a9_3() -> IdentitySpec {
    IdentitySpec {
        id: "A9-3".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[4, 5, 6, 7, 8]),
        alt_products: vec![],
        sum: a9_sum([3, 4, 9]),
        rules: RuleSet::new(a9_patterns())
            .with_initial(forbid(1))
            .with_initial(forbid(2))
            .with_initial(forbid(3)),
        grammar: Some(BlockGrammar {
            label_rules: vec![
                rule(2, 0, 4, None, Regex::seq(vec![Regex::star(&[0, -2]), Regex::star(&[0])])),
                rule(2, 1, 5, None, Regex::star(&[0])),
            ],
            initial: None,
            exceptions: vec![pair_conflict(2, 1, 5)],
        }),
        jagged_product: Some(jp(vec![
            bf(1, 4, 1, true, false),
            bf(2, 6, 4, true, false),
            bf(3, 15, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Level-2 module L(L5) of A9(2); 2-staircase; parts 1,2,3 \
                forbidden."
            .into(),
    }
}

// ---------------------------------------------------------------------------
// Asymmetric companions (linear-term variations)
// ---------------------------------------------------------------------------

fn id4_patterns() -> Vec<ForbiddenPattern> {
    vec![
        pat(&[0, 0]),
        pat_mod(&[0, 1], 2, 1),
        pat_mod(&[0, 1, 3], 2, 0),
        pat_mod(&[0, 2, 3], 2, 0),
        pat_mod(&[0, 2, 4], 2, 0),
    ]
}

fn id4_even_body() -> Regex {
    Regex::seq(vec![Regex::star(&[0, -1]), Regex::opt(&[0]), Regex::opt(&[0])])
}

fn a9_4() -> IdentitySpec {
    IdentitySpec {
        id: "A9-4".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 4, 5, 9, 11]),
        alt_products: vec![],
        sum: a9_sum([0, 1, 0]),
        rules: RuleSet::new(id4_patterns()),
        grammar: Some(grammar(vec![
            rule(2, 0, 2, None, id4_even_body()),
            rule(2, 1, 1, None, Regex::star(&[0])),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 1, 1, true, false),
            bf(2, 3, 4, true, false),
            bf(3, 6, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Distinct parts; below an even part the gap exceeds 1; three \
                even-rooted window patterns forbidden."
            .into(),
    }
}

fn a9_4a() -> IdentitySpec {
    IdentitySpec {
        id: "A9-4a".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 1,
        product: ProductSpec::reciprocal(12, &[1, 5, 7, 8, 9]),
        alt_products: vec![],
        sum: a9_sum([1, -3, 0]),
        rules: RuleSet::new(id4_patterns()).with_fictitious_zeros(1),
        grammar: None,
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, true, false),
            bf(2, -1, 4, true, false),
            bf(3, 6, 6, false, false),
        ])),
        case_split: Some(CaseSplit {
            case_a_grammar: BlockGrammar {
                label_rules: vec![
                    rule(1, 0, 0, Some(0), Regex::plus(&[0, -1])),
                    rule(2, 0, 2, None, id4_even_body()),
                    rule(2, 1, 3, None, Regex::star(&[0])),
                ],
                initial: None,
                exceptions: vec![],
            },
            case_a_form: BivarProduct {
                terms: vec![BivarTerm {
                    coeff: 1,
                    x_shift: 2,
                    q_shift: -1,
                    factors: vec![
                        bf(2, -1, 4, true, false),
                        bf(1, 2, 1, true, false),
                        bf(3, 6, 6, false, false),
                    ],
                }],
            },
            case_b_grammar: BlockGrammar {
                label_rules: vec![
                    rule(2, 0, 4, None, id4_even_body()),
                    rule(2, 1, 3, None, Regex::star(&[0])),
                ],
                initial: Some(InitialBlock {
                    body: Regex::seq(vec![
                        Regex::star(&[1, 2]),
                        Regex::Alt(vec![Regex::opt(&[2]), Regex::opt(&[1, 3])]),
                    ]),
                    label_ceiling: 2,
                }),
                exceptions: vec![],
            },
            case_b_form: jp(vec![
                bf(2, 3, 4, true, false),
                bf(1, 2, 1, true, false),
                bf(3, 6, 6, false, false),
            ]),
        }),
        rejected_variants: vec![],
        notes: "Same difference conditions with a fictitious leading zero; \
                the jagged image is case-split, and case-a images carry an \
                extra power of x for the zero entry."
            .into(),
    }
}

fn id5_patterns() -> Vec<ForbiddenPattern> {
    vec![
        pat(&[0, 1]),
        pat_mod(&[0, 0], 2, 0),
        pat_mod(&[0, 0, 0], 2, 1),
        pat_mod(&[0, 0, 2], 2, 1),
        pat_mod(&[0, 0, 3], 2, 1),
        pat_mod(&[0, 2, 2], 2, 1),
        pat_mod(&[0, 2, 4], 2, 1),
    ]
}

fn id5_odd_body() -> Regex {
    Regex::seq(vec![Regex::star(&[0, -2]), Regex::opt(&[0]), Regex::opt(&[0])])
}

fn a9_5() -> IdentitySpec {
    IdentitySpec {
        id: "A9-5".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 2, 5, 6, 9, 10]).with_numerators(&[3]),
        alt_products: vec![],
        sum: a9_sum([0, -2, -3]),
        rules: RuleSet::new(id5_patterns()),
        grammar: Some(grammar(vec![
            rule(2, 1, 1, None, id5_odd_body()),
            rule(2, 0, 2, None, Regex::star(&[0])),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 1, 1, true, false),
            bf(2, 0, 4, true, false),
            bf(3, 3, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Gaps never 1; even parts distinct; odd-rooted window \
                patterns forbidden. Jagged pairs (1,-1) make row windows dip \
                below q^0."
            .into(),
    }
}

fn a9_5a() -> IdentitySpec {
    IdentitySpec {
        id: "A9-5a".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[2, 3, 6, 7, 10, 11]).with_numerators(&[9]),
        alt_products: vec![],
        sum: a9_sum([1, 2, 3]),
        rules: RuleSet::new(id5_patterns()).with_fictitious_zeros(1),
        grammar: Some(grammar(vec![
            rule(2, 1, 3, None, id5_odd_body()),
            rule(2, 0, 2, None, Regex::star(&[0])),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, true, false),
            bf(2, 4, 4, true, false),
            bf(3, 9, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "As A9-5 with a fictitious zero, i.e. no part 1.".into(),
    }
}

fn id6_patterns() -> Vec<ForbiddenPattern> {
    vec![
        pat(&[0, 0]),
        pat_mod(&[0, 1], 2, 0),
        pat_mod(&[0, 2, 4], 2, 0),
        pat_mod(&[0, 1, 3], 2, 1),
        pat_mod(&[0, 2, 3], 2, 1),
    ]
}

fn a9_6() -> IdentitySpec {
    IdentitySpec {
        id: "A9-6".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 3, 7, 8, 11]),
        alt_products: vec![],
        sum: a9_sum([0, -1, 0]),
        rules: RuleSet::new(id6_patterns()),
        grammar: Some(grammar(vec![
            rule(2, 1, 1, None, Regex::seq(vec![Regex::star(&[0, -1]), Regex::star(&[0])])),
            rule(2, 0, 2, None, Regex::seq(vec![Regex::opt(&[0]), Regex::opt(&[0])])),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 1, 1, true, false),
            bf(2, 1, 4, true, false),
            bf(3, 6, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Distinct parts; above an even part the gap exceeds 1; \
                odd-rooted window patterns forbidden."
            .into(),
    }
}

fn a9_6a() -> IdentitySpec {
    IdentitySpec {
        id: "A9-6a".into(),
        status: Status::Conjecture,
        staircase_step: 2,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[3, 4, 5, 7, 11]),
        alt_products: vec![],
        sum: a9_sum([2, 3, 6]),
        rules: RuleSet::new(id6_patterns())
            .with_initial(InitialConstraint::SmallestAtLeast { part: 3 }),
        grammar: Some(grammar(vec![
            rule(2, 1, 3, None, Regex::seq(vec![Regex::star(&[0, -1]), Regex::star(&[0])])),
            rule(2, 0, 4, None, Regex::seq(vec![Regex::opt(&[0]), Regex::opt(&[0])])),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 3, 1, true, false),
            bf(2, 5, 4, true, false),
            bf(3, 12, 6, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "As A9-6 with smallest part at least 3.".into(),
    }
}

// ---------------------------------------------------------------------------
// The 1-staircase mod-12 family with seven residues
// ---------------------------------------------------------------------------

fn kr_quad2() -> Vec<Vec<i64>> {
    vec![vec![1, 2, 3], vec![2, 6, 6], vec![3, 6, 9]]
}

fn kr_sum(linear2: [i64; 3]) -> MultiSumSpec {
    MultiSumSpec::new(
        vec![1, 2, 3],
        vec![1, 2, 3],
        vec![false, false, false],
        kr_quad2(),
        linear2.to_vec(),
        0,
    )
}

fn kr5_patterns() -> Vec<ForbiddenPattern> {
    vec![pat(&[0, 0, 0]), pat(&[0, 1, 1]), pat(&[0, 0, 1, 2]), pat(&[0, 0, 2, 2])]
}

fn kr6_patterns() -> Vec<ForbiddenPattern> {
    vec![pat(&[0, 0, 0]), pat(&[0, 0, 1]), pat(&[0, 1, 2, 2]), pat(&[0, 0, 2, 2])]
}

fn kr5_block_body() -> Regex {
    // [j,j-1,j-1]* [j,j-1]^opt j*
    Regex::seq(vec![
        Regex::star(&[0, -1, -1]),
        Regex::opt(&[0, -1]),
        Regex::star(&[0]),
    ])
}

fn kr6_block_body() -> Regex {
    // [j,j-1]^opt [j,j,j-1]* j*
    Regex::seq(vec![
        Regex::opt(&[0, -1]),
        Regex::star(&[0, 0, -1]),
        Regex::star(&[0]),
    ])
}

fn kr_i5() -> IdentitySpec {
    IdentitySpec {
        id: "KR-I5".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 3, 4, 6, 7, 10, 11]),
        alt_products: vec![],
        sum: kr_sum([1, 2, 5]),
        rules: RuleSet::new(kr5_patterns()).with_initial(at_most(1, 1)),
        grammar: Some(grammar(vec![
            rule(1, 0, 1, Some(1), Regex::star(&[0])),
            rule(1, 0, 2, None, kr5_block_body()),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 1, 1, true, false),
            bf(2, 3, 2, false, true),
            bf(3, 4, 3, true, false),
        ])),
        case_split: None,
        rejected_variants: vec![kr_sum([1, 2, 3])],
        notes: "Difference at least 3 at distance 3 with the mod-3 side \
                condition; at most one part 1. Two published k-linear terms \
                disagree; the +4k form is the one the product certifies, and \
                the +3k form is retained as a rejected variant."
            .into(),
    }
}

fn kr_i6() -> IdentitySpec {
    IdentitySpec {
        id: "KR-I6".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[2, 3, 5, 6, 7, 8, 11]),
        alt_products: vec![],
        sum: kr_sum([3, 6, 7]),
        rules: RuleSet::new(kr6_patterns())
            .with_initial(forbid(1))
            .with_initial(at_most(2, 1)),
        grammar: Some(grammar(vec![
            rule(1, 0, 2, Some(2), Regex::seq(vec![Regex::star(&[0, 0, -1]), Regex::star(&[0])])),
            rule(1, 0, 3, None, kr6_block_body()),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, true, false),
            bf(2, 5, 2, false, true),
            bf(3, 5, 3, true, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Difference at least 3 at distance 3 with the mod-3 side \
                condition; no 1s, at most one 2."
            .into(),
    }
}

fn kr_i6_alt() -> IdentitySpec {
    IdentitySpec {
        id: "KR-I6-alt".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[2, 3, 5, 6, 7, 8, 11]),
        alt_products: vec![],
        sum: MultiSumSpec::new(
            vec![1, 2, 3, 4],
            vec![1, 2, 3, 4],
            vec![false, false, false, true],
            kr4_quad2(),
            vec![3, 8, 7, 12],
            0,
        ),
        rules: RuleSet::new(kr6_patterns())
            .with_initial(forbid(1))
            .with_initial(at_most(2, 1)),
        grammar: None,
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, true, false),
            bf(2, 5, 2, true, false),
            bf(3, 5, 3, true, false),
            bf(4, 10, 4, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Four-index rewriting of KR-I6: the distinct-pair factor \
                expands through (x^4 q^10;q^4)/(x^2 q^5;q^2)."
            .into(),
    }
}

fn r_i5a() -> IdentitySpec {
    let branches = |k2_1: i64, k2_2: i64, k2_3: i64| -> Vec<SumBranch> {
        vec![
            SumBranch {
                coeff: 1,
                x_shift: 0,
                linear2: vec![1, 2, k2_1],
                const2: 0,
            },
            SumBranch {
                coeff: 1,
                x_shift: 2,
                linear2: vec![5, 10, k2_2],
                const2: 4,
            },
            SumBranch {
                coeff: -1,
                x_shift: 3,
                linear2: vec![7, 14, k2_3],
                const2: 10,
            },
        ]
    };
    let sum = MultiSumSpec {
        x_weights: vec![1, 2, 3],
        denom_steps: vec![1, 2, 3],
        alt_signs: vec![false, false, false],
        quad2: kr_quad2(),
        branches: branches(1, 13, 19),
    };
    let rejected = MultiSumSpec {
        branches: branches(7, 19, 19),
        ..sum.clone()
    };
    IdentitySpec {
        id: "R-I5a".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 2, 5, 6, 8, 9, 11]),
        alt_products: vec![],
        sum,
        rules: RuleSet::new(kr6_patterns()).with_initial(no_prefix(&[1, 2, 2])),
        grammar: Some(grammar(vec![
            rule(
                1,
                0,
                1,
                Some(1),
                Regex::seq(vec![
                    Regex::Opt(Box::new(Regex::seq(vec![
                        Regex::lit(&[0, -1]),
                        Regex::star(&[0, 0, -1]),
                    ]))),
                    Regex::star(&[0]),
                ]),
            ),
            rule(1, 0, 2, None, kr6_block_body()),
        ])),
        jagged_product: Some(BivarProduct {
            terms: [(1i64, 0u32, 0i64), (1, 2, 1), (-1, 3, 2)]
                .iter()
                .map(|&(coeff, x_shift, q_shift)| BivarTerm {
                    coeff,
                    x_shift,
                    q_shift,
                    factors: vec![
                        bf(1, 1, 1, true, false),
                        bf(2, 3, 2, false, true),
                        bf(3, 2, 3, true, false),
                    ],
                })
                .collect(),
        }),
        case_split: None,
        rejected_variants: vec![rejected],
        notes: "KR-I6 difference conditions with the prefix 1+2+2 forbidden \
                instead of the part caps. Consecutive published displays \
                disagree on the k-linear term (2k vs 5k); the all-2k \
                branches certify, and the mixed 5k,5k,2k reading is kept as \
                rejected."
            .into(),
    }
}

fn r_i6a() -> IdentitySpec {
    let branches = |k2_1: i64, k2_2: i64| -> Vec<SumBranch> {
        vec![
            SumBranch {
                coeff: 1,
                x_shift: 1,
                linear2: vec![5, 6, k2_1],
                const2: 2,
            },
            SumBranch {
                coeff: 1,
                x_shift: 2,
                linear2: vec![5, 10, k2_2],
                const2: 4,
            },
            SumBranch {
                coeff: 1,
                x_shift: 0,
                linear2: vec![5, 6, 11],
                const2: 0,
            },
        ]
    };
    let sum = MultiSumSpec {
        x_weights: vec![1, 2, 3],
        denom_steps: vec![1, 2, 3],
        alt_signs: vec![false, false, false],
        quad2: kr_quad2(),
        branches: branches(11, 17),
    };
    let rejected = MultiSumSpec {
        branches: branches(17, 23),
        ..sum.clone()
    };
    IdentitySpec {
        id: "R-I6a".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 4, 5, 6, 7, 9, 10]),
        alt_products: vec![],
        sum,
        rules: RuleSet::new(kr5_patterns()).with_initial(forbid(2)),
        grammar: Some(BlockGrammar {
            label_rules: vec![rule(1, 0, 3, None, kr5_block_body())],
            initial: Some(InitialBlock {
                body: Regex::Alt(vec![
                    Regex::seq(vec![
                        Regex::lit(&[1, 0]),
                        Regex::star(&[1]),
                        Regex::star(&[2, 1, 1]),
                        Regex::opt(&[2, 1]),
                        Regex::star(&[2]),
                    ]),
                    Regex::seq(vec![
                        Regex::lit(&[1]),
                        Regex::star(&[2, 1, 1]),
                        Regex::opt(&[2, 1]),
                        Regex::star(&[2]),
                    ]),
                    Regex::lit(&[]),
                ]),
                label_ceiling: 2,
            }),
            exceptions: vec![],
        }),
        jagged_product: Some(BivarProduct {
            terms: vec![
                BivarTerm {
                    coeff: 1,
                    x_shift: 1,
                    q_shift: 1,
                    factors: vec![
                        bf(1, 2, 1, true, false),
                        bf(2, 3, 2, false, true),
                        bf(3, 4, 3, true, false),
                    ],
                },
                BivarTerm {
                    coeff: 1,
                    x_shift: 2,
                    q_shift: 1,
                    factors: vec![
                        bf(1, 1, 1, true, false),
                        bf(2, 3, 2, false, true),
                        bf(3, 4, 3, true, false),
                    ],
                },
                BivarTerm {
                    coeff: 1,
                    x_shift: 0,
                    q_shift: 0,
                    factors: vec![
                        bf(1, 3, 1, true, false),
                        bf(2, 5, 2, false, true),
                        bf(3, 7, 3, true, false),
                    ],
                },
            ],
        }),
        case_split: None,
        rejected_variants: vec![rejected],
        notes: "KR-I5 difference conditions with part 2 forbidden (and 1 \
                allowed to repeat). Branch displays mix cubic-block factors \
                q^4 and q^7; the mixed form as printed certifies, and the \
                uniform-q^7 reading is kept as rejected."
            .into(),
    }
}

// ---------------------------------------------------------------------------
// Four-index companions
// ---------------------------------------------------------------------------

fn kr4_quad2() -> Vec<Vec<i64>> {
    vec![
        vec![1, 2, 3, 4],
        vec![2, 4, 6, 8],
        vec![3, 6, 9, 12],
        vec![4, 8, 12, 20],
    ]
}

fn kr4_sum(linear2: [i64; 4]) -> MultiSumSpec {
    MultiSumSpec::new(
        vec![1, 2, 3, 4],
        vec![1, 2, 3, 4],
        vec![false, false, false, true],
        kr4_quad2(),
        linear2.to_vec(),
        0,
    )
}

fn id7_patterns() -> Vec<ForbiddenPattern> {
    vec![
        pat(&[0, 1, 1]),
        pat(&[0, 0, 1]),
        pat(&[0, 2, 2, 2]),
        pat(&[0, 0, 0, 2]),
        pat(&[0, 0, 0, 0]),
    ]
}

fn id7_block_body() -> Regex {
    // [j,j-1,j-2]* [j,j-1]* j*
    Regex::seq(vec![
        Regex::star(&[0, -1, -2]),
        Regex::star(&[0, -1]),
        Regex::star(&[0]),
    ])
}

/// Forbidden run `j, j+1, j, j-1`: a singles-ending block meeting a
/// triple-opening block right above it.
fn id7_exception(min_base: i64) -> ExceptionString {
    ExceptionString {
        offsets: vec![0, 1, 0, -1],
        modulus: 1,
        residue: 0,
        min_base,
    }
}

fn new_7() -> IdentitySpec {
    IdentitySpec {
        id: "new-7".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 3, 4, 6, 8, 9, 11]),
        alt_products: vec![],
        sum: kr4_sum([1, 4, 9, 8]),
        rules: RuleSet::new(id7_patterns()).with_fictitious_zeros(1),
        grammar: Some(BlockGrammar {
            label_rules: vec![
                rule(1, 0, 1, Some(1), Regex::star(&[0])),
                rule(
                    1,
                    0,
                    2,
                    Some(2),
                    Regex::seq(vec![Regex::star(&[0, -1]), Regex::star(&[0])]),
                ),
                rule(1, 0, 3, None, id7_block_body()),
            ],
            initial: None,
            exceptions: vec![id7_exception(2)],
        }),
        jagged_product: Some(jp(vec![
            bf(1, 1, 1, true, false),
            bf(2, 3, 2, true, false),
            bf(3, 6, 3, true, false),
            bf(4, 8, 4, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Linear-term companion of the four-index family; fictitious \
                zero encodes 1+1 and 2+2+2 forbidden."
            .into(),
    }
}

fn new_7a() -> IdentitySpec {
    IdentitySpec {
        id: "new-7a".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[3, 4, 5, 6, 7, 8, 9]),
        alt_products: vec![],
        sum: kr4_sum([5, 8, 9, 16]),
        rules: RuleSet::new(id7_patterns())
            .with_initial(InitialConstraint::SmallestAtLeast { part: 3 }),
        grammar: Some(BlockGrammar {
            label_rules: vec![rule(1, 0, 3, None, id7_block_body())],
            initial: None,
            exceptions: vec![id7_exception(3)],
        }),
        jagged_product: Some(jp(vec![
            bf(1, 3, 1, true, false),
            bf(2, 5, 2, true, false),
            bf(3, 6, 3, true, false),
            bf(4, 12, 4, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "As new-7 with smallest part at least 3.".into(),
    }
}

fn new_8() -> IdentitySpec {
    IdentitySpec {
        id: "new-8".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[2, 3, 4, 5, 8, 9, 11]),
        alt_products: vec![],
        sum: kr4_sum([3, 4, 7, 8]),
        rules: RuleSet::new(vec![
            pat(&[0, 0, 0]),
            pat(&[0, 0, 1]),
            pat(&[0, 1, 2, 2]),
            pat(&[0, 1, 2, 3]),
            pat(&[0, 1, 1, 3, 3]),
        ])
        .with_fictitious_zeros(2),
        grammar: Some(grammar(vec![rule(
            1,
            0,
            2,
            None,
            Regex::seq(vec![
                Regex::star(&[0, -1]),
                Regex::star(&[0, 0, -1]),
                Regex::opt(&[0]),
                Regex::opt(&[0]),
                Regex::opt(&[0]),
            ]),
        )])),
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, true, false),
            bf(2, 3, 2, true, false),
            bf(3, 5, 3, true, false),
            bf(4, 8, 4, false, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Two fictitious zeros (so no part 1); carries the largest \
                pattern window in the catalog."
            .into(),
    }
}

fn new_8a() -> IdentitySpec {
    let sum = MultiSumSpec {
        x_weights: vec![1, 2, 3, 4],
        denom_steps: vec![1, 2, 3, 4],
        alt_signs: vec![false, false, false, true],
        quad2: kr4_quad2(),
        branches: vec![
            SumBranch {
                coeff: 1,
                x_shift: 0,
                linear2: vec![3, 4, 5, 8],
                const2: 0,
            },
            SumBranch {
                coeff: 1,
                x_shift: 1,
                linear2: vec![5, 8, 11, 16],
                const2: 2,
            },
            SumBranch {
                coeff: 1,
                x_shift: 2,
                linear2: vec![7, 12, 17, 24],
                const2: 6,
            },
            SumBranch {
                coeff: -1,
                x_shift: 3,
                linear2: vec![9, 16, 23, 32],
                const2: 14,
            },
        ],
    };
    IdentitySpec {
        id: "new-8a".into(),
        status: Status::Conjecture,
        staircase_step: 1,
        x_shift: 0,
        product: ProductSpec::reciprocal(12, &[1, 3, 4, 7, 8, 9, 10]),
        alt_products: vec![],
        sum,
        rules: RuleSet::new(vec![
            pat(&[0, 0, 0]),
            pat(&[0, 1, 1]),
            pat(&[0, 0, 1, 2]),
            pat(&[0, 1, 2, 3]),
            pat(&[0, 0, 2, 2, 3]),
        ])
        .with_initial(at_most(1, 1))
        .with_initial(no_prefix(&[1, 2, 3]))
        .with_initial(no_prefix(&[2, 2, 3])),
        grammar: Some(BlockGrammar {
            label_rules: vec![rule(
                1,
                0,
                3,
                None,
                Regex::seq(vec![
                    Regex::star(&[0, -1, -1]),
                    Regex::star(&[0, -1]),
                    Regex::opt(&[0]),
                    Regex::opt(&[0]),
                    Regex::opt(&[0]),
                ]),
            )],
            initial: Some(InitialBlock {
                body: Regex::Alt(vec![
                    Regex::seq(vec![
                        Regex::lit(&[1]),
                        Regex::opt(&[1]),
                        Regex::star(&[2, 1, 1]),
                        Regex::star(&[2, 1]),
                        Regex::opt(&[2]),
                        Regex::opt(&[2]),
                        Regex::opt(&[2]),
                    ]),
                    Regex::seq(vec![
                        Regex::star(&[2, 1]),
                        Regex::opt(&[2]),
                        Regex::opt(&[2]),
                        Regex::opt(&[2]),
                    ]),
                ]),
                label_ceiling: 2,
            }),
            exceptions: vec![],
        }),
        jagged_product: Some(BivarProduct {
            terms: vec![
                BivarTerm {
                    coeff: 1,
                    x_shift: 1,
                    q_shift: 1,
                    factors: vec![
                        bf(1, 2, 1, true, false),
                        bf(2, 3, 2, true, false),
                        bf(3, 4, 3, true, false),
                        bf(4, 8, 4, false, false),
                    ],
                },
                BivarTerm {
                    coeff: 1,
                    x_shift: 2,
                    q_shift: 2,
                    factors: vec![
                        bf(1, 2, 1, true, false),
                        bf(2, 3, 2, true, false),
                        bf(3, 4, 3, true, false),
                        bf(4, 8, 4, false, false),
                    ],
                },
                BivarTerm {
                    coeff: 1,
                    x_shift: 0,
                    q_shift: 0,
                    factors: vec![
                        bf(1, 2, 1, true, false),
                        bf(2, 3, 2, true, false),
                        bf(3, 7, 3, true, false),
                        bf(4, 8, 4, false, false),
                    ],
                },
            ],
        }),
        case_split: None,
        rejected_variants: vec![],
        notes: "Companion whose residues mirror new-8 mod 12; the four-branch \
                sum carries prefactor 1 + xq + x^2q^2 - x^3q^4 (the last \
                branch is negative)."
            .into(),
    }
}

// ---------------------------------------------------------------------------
// Capparelli identities (3-staircase)
// ---------------------------------------------------------------------------

fn cap_patterns() -> Vec<ForbiddenPattern> {
    vec![
        pat(&[0, 0]),
        pat(&[0, 1]),
        pat_mod(&[0, 2], 3, 0),
        pat_mod(&[0, 2], 3, 1),
        pat_mod(&[0, 3], 3, 1),
        pat_mod(&[0, 3], 3, 2),
    ]
}

fn cap_quad2_4idx() -> Vec<Vec<i64>> {
    vec![
        vec![3, 3, 3, 6],
        vec![3, 6, 3, 6],
        vec![3, 3, 6, 6],
        vec![6, 6, 6, 12],
    ]
}

fn cap_product_1() -> ProductSpec {
    ProductSpec::reciprocal(12, &[2, 3, 9, 10])
}

/// Distinct parts in classes 1, 3, 5, 0 (mod 6), as signed Pochhammers.
fn cap_product_2() -> ProductSpec {
    ProductSpec {
        modulus: 6,
        factors: vec![],
        extra: vec![],
    }
    .with_plus_numerators(&[1, 3, 5, 0])
}

fn capparelli_1_4idx() -> IdentitySpec {
    IdentitySpec {
        id: "Capparelli-1-4idx".into(),
        status: Status::Theorem,
        staircase_step: 3,
        x_shift: 0,
        product: cap_product_1(),
        alt_products: vec![],
        sum: MultiSumSpec::new(
            vec![1, 1, 1, 2],
            vec![3, 3, 3, 6],
            vec![false, false, false, false],
            cap_quad2_4idx(),
            vec![3, -2, 2, 0],
            0,
        ),
        rules: RuleSet::new(cap_patterns()).with_initial(forbid(1)),
        grammar: Some(grammar(vec![
            rule(3, 0, 3, None, Regex::star(&[0])),
            rule(3, 1, 4, None, Regex::opt(&[0])),
            rule(3, 2, 2, None, Regex::seq(vec![Regex::star(&[0, -1]), Regex::opt(&[0])])),
        ])),
        jagged_product: Some(jp(vec![
            bf(1, 3, 3, true, false),
            bf(1, 2, 3, false, true),
            bf(1, 4, 3, false, true),
            bf(2, 3, 6, true, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "First Capparelli identity, four-index sum from the \
                3-staircase block structure."
            .into(),
    }
}

fn capparelli_1_2idx() -> IdentitySpec {
    IdentitySpec {
        id: "Capparelli-1-2idx".into(),
        status: Status::Theorem,
        staircase_step: 3,
        x_shift: 0,
        product: cap_product_1(),
        alt_products: vec![],
        sum: MultiSumSpec::new(
            vec![1, 2],
            vec![1, 3],
            vec![false, false],
            vec![vec![4, 6], vec![6, 12]],
            vec![0, 0],
            0,
        ),
        rules: RuleSet::new(cap_patterns()).with_initial(forbid(1)),
        grammar: None,
        jagged_product: Some(jp(vec![
            bf(1, 2, 1, false, true),
            bf(2, 3, 3, true, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "First Capparelli identity, simplified two-index form \
                q^(2i^2+6ij+6j^2)."
            .into(),
    }
}

fn capparelli_2_4idx() -> IdentitySpec {
    IdentitySpec {
        id: "Capparelli-2-4idx".into(),
        status: Status::Theorem,
        staircase_step: 3,
        x_shift: 0,
        product: cap_product_2(),
        alt_products: vec![],
        sum: MultiSumSpec::new(
            vec![1, 1, 1, 2],
            vec![3, 3, 3, 6],
            vec![false, false, false, false],
            cap_quad2_4idx(),
            vec![3, 4, -4, 0],
            0,
        ),
        rules: RuleSet::new(cap_patterns()).with_initial(forbid(2)),
        grammar: Some(BlockGrammar {
            label_rules: vec![
                rule(3, 0, 3, None, Regex::star(&[0])),
                rule(3, 1, 4, None, Regex::opt(&[0])),
                rule(3, 2, 5, None, Regex::seq(vec![Regex::star(&[0, -1]), Regex::opt(&[0])])),
            ],
            initial: Some(InitialBlock {
                body: Regex::Alt(vec![
                    Regex::seq(vec![
                        Regex::lit(&[1]),
                        Regex::star(&[2, 1]),
                        Regex::opt(&[2]),
                    ]),
                    Regex::lit(&[]),
                ]),
                label_ceiling: 2,
            }),
            exceptions: vec![],
        }),
        jagged_product: Some(jp(vec![
            bf(1, 3, 3, true, false),
            bf(1, 5, 3, false, true),
            bf(1, 1, 3, false, true),
            bf(2, 3, 6, true, false),
        ])),
        case_split: None,
        rejected_variants: vec![],
        notes: "Second Capparelli identity, four-index sum. The distinct \
                product classes are 1,3,5,0 mod 6 (the statement's prose; a \
                printed factor -q^4 in place of -q^5 does not match the \
                counts)."
            .into(),
    }
}

fn capparelli_2_2idx() -> IdentitySpec {
    IdentitySpec {
        id: "Capparelli-2-2idx".into(),
        status: Status::Theorem,
        staircase_step: 3,
        x_shift: 0,
        product: cap_product_2(),
        alt_products: vec![],
        sum: MultiSumSpec {
            x_weights: vec![1, 2],
            denom_steps: vec![1, 3],
            alt_signs: vec![false, false],
            quad2: vec![vec![4, 6], vec![6, 12]],
            branches: vec![
                SumBranch {
                    coeff: 1,
                    x_shift: 0,
                    linear2: vec![2, 0],
                    const2: 0,
                },
                SumBranch {
                    coeff: 1,
                    x_shift: 1,
                    linear2: vec![8, 12],
                    const2: 2,
                },
            ],
        },
        rules: RuleSet::new(cap_patterns()).with_initial(forbid(2)),
        grammar: None,
        jagged_product: Some(BivarProduct {
            terms: vec![
                BivarTerm {
                    coeff: 1,
                    x_shift: 0,
                    q_shift: 0,
                    factors: vec![bf(1, 3, 1, false, true), bf(2, 3, 3, true, false)],
                },
                BivarTerm {
                    coeff: 1,
                    x_shift: 1,
                    q_shift: 1,
                    factors: vec![bf(1, 3, 1, false, true), bf(2, 3, 3, true, false)],
                },
            ],
        }),
        case_split: None,
        rejected_variants: vec![],
        notes: "Second Capparelli identity, simplified two-index form with \
                branches q^(2i^2+6ij+6j^2+i) and q^(2i^2+6ij+6j^2+4i+6j+1)."
            .into(),
    }
}

// ---------------------------------------------------------------------------
// Search bases
// ---------------------------------------------------------------------------

/// The base form whose linear term the search varies, for a given identity.
/// Returns the spec with the intrinsic (quadratic-only) exponent; candidate
/// linear vectors are added on top in plain (undoubled) units.
pub fn search_base_for(catalog: &Catalog, id: &str) -> Result<MultiSumSpec, Error> {
    let entry = catalog.get(id)?;
    let intrinsic: Vec<i64> = match entry.sum.rank() {
        // mod-12 three-index family: the exponent is the pure quadratic form
        3 if entry.sum.denom_steps == [1, 4, 6] => vec![0, 0, 0],
        // four-index family: intrinsic part is M(M-1)/2 + 2l^2
        4 if entry.sum.denom_steps == [1, 2, 3, 4] => {
            entry.sum.x_weights.iter().map(|&w| -(w as i64)).collect()
        }
        _ => {
            return Err(Error::Catalog(format!(
                "identity `{id}` is not a linear-term search base"
            )))
        }
    };
    let mut base = entry.sum.clone();
    base.branches = vec![SumBranch {
        coeff: 1,
        x_shift: 0,
        linear2: intrinsic,
        const2: 0,
    }];
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoch::expand_product;
    use num_bigint::BigInt;

    #[test]
    fn builtin_has_all_entries() {
        let cat = Catalog::builtin();
        assert_eq!(cat.entries.len(), 22);
        let ids = cat.ids();
        for id in [
            "A9-1",
            "A9-4a",
            "KR-I6-alt",
            "R-I5a",
            "new-8a",
            "Capparelli-2-2idx",
        ] {
            assert!(ids.contains(&id), "{id} missing");
        }
        assert!(cat.get("no-such").is_err());
    }

    #[test]
    fn identity1_count_at_twelve() {
        let cat = Catalog::builtin();
        let e = cat.get("A9-1").unwrap();
        let prod = expand_product(&e.product, 12);
        assert_eq!(prod.coeff(12), &BigInt::from(10));
        let sum = e.sum.evaluate(12).unwrap();
        assert_eq!(sum.coeff(12), &BigInt::from(10));
        let rules = e.rules.count_series(12).unwrap();
        assert_eq!(rules.coeff(12), &BigInt::from(10));
    }

    #[test]
    fn a9_2_alternate_product_form_agrees() {
        let cat = Catalog::builtin();
        let e = cat.get("A9-2").unwrap();
        let main = expand_product(&e.product, 100);
        let alt = expand_product(&e.alt_products[0], 100);
        assert!(main.eq_to_order(&alt, 100));
    }

    #[test]
    fn paired_products_are_residue_negations() {
        // The asymmetric product sides pair up by negating residues mod 12.
        let cat = Catalog::builtin();
        let pairs = [("A9-4", "A9-6"), ("A9-4a", "A9-6a"), ("A9-5", "A9-5a")];
        for (a, b) in pairs {
            let ra = cat.get(a).unwrap().product.positive_residues();
            let rb = cat.get(b).unwrap().product.positive_residues();
            let negated: Vec<u32> = {
                let mut v: Vec<u32> = ra.iter().map(|&r| (12 - r) % 12).collect();
                v.sort_unstable();
                v
            };
            assert_eq!(negated, rb, "{a} vs {b}");
        }
    }

    #[test]
    fn capparelli_enumeration_matches_brute_filter() {
        fn all_partitions(n: u32) -> Vec<crate::rules::Partition> {
            fn rec(rem: u32, min: u32, acc: &mut Vec<u32>, out: &mut Vec<crate::rules::Partition>) {
                if rem == 0 {
                    out.push(crate::rules::Partition::new(acc.clone()));
                    return;
                }
                for v in min..=rem {
                    acc.push(v);
                    rec(rem - v, v, acc, out);
                    acc.pop();
                }
            }
            let mut out = Vec::new();
            rec(n, 1, &mut Vec::new(), &mut out);
            out
        }
        let cat = Catalog::builtin();
        let rules = &cat.get("Capparelli-1-4idx").unwrap().rules;
        for n in 0..=14u32 {
            let mut filtered: Vec<_> = all_partitions(n)
                .into_iter()
                .filter(|pi| rules.matches(pi))
                .collect();
            filtered.sort();
            let mut enumerated = rules.enumerate(n);
            enumerated.sort();
            assert_eq!(filtered, enumerated, "n = {n}");
        }
    }

    #[test]
    fn pre_staircase_recovers_jagged_exponents() {
        let cat = Catalog::builtin();
        // the symmetric family's jagged exponent i + 6j + 3k^2 + 6k
        // (doubled: 2i + 12j + 6k^2 + 12k)
        let jagged = cat.get("A9-1").unwrap().sum.pre_staircase_form(2);
        assert_eq!(
            jagged.quad2,
            vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 6]]
        );
        assert_eq!(jagged.branches[0].linear2, vec![2, 12, 12]);
        // and 2i + j^2 + 4j + 5k for the 1-staircase family
        let jagged = cat.get("KR-I6").unwrap().sum.pre_staircase_form(1);
        assert_eq!(
            jagged.quad2,
            vec![vec![0, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]
        );
        assert_eq!(jagged.branches[0].linear2, vec![4, 8, 10]);
    }

    #[test]
    fn catalog_json_round_trip() {
        let cat = Catalog::builtin();
        let json = cat.to_json_pretty();
        let back = Catalog::from_json(&json).unwrap();
        assert_eq!(cat, back);
    }

    #[test]
    fn search_bases() {
        let cat = Catalog::builtin();
        let a9 = search_base_for(&cat, "A9-1").unwrap();
        assert_eq!(a9.branches[0].linear2, vec![0, 0, 0]);
        let kr4 = search_base_for(&cat, "KR-I6-alt").unwrap();
        assert_eq!(kr4.branches[0].linear2, vec![-1, -2, -3, -4]);
        assert!(search_base_for(&cat, "Capparelli-1-2idx").is_err());
    }
}
