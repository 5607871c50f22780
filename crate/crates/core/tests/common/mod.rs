//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the engine.
#![allow(dead_code)]

use fpa::{
    ComplexityLevel, ComponentClass, CountSheet, ItemRecord, RcafSheet, SheetDocument,
    WeightMatrix, Weights,
};
use proptest::prelude::*;

/// Weights written out cell by cell, in the standard table's row order.
pub const STANDARD_WEIGHTS: [(&str, [u64; 3]); 5] = [
    ("input", [3, 4, 6]),
    ("output", [4, 5, 7]),
    ("query", [3, 4, 6]),
    ("file", [7, 10, 15]),
    ("interface", [5, 7, 10]),
];

/// Crude function points by plain double loop in 128-bit arithmetic.
pub fn naive_cfp(counts: &[[u64; 3]; 5], weights: &[[u64; 3]; 5]) -> u128 {
    let mut total: u128 = 0;
    for row in 0..5 {
        for col in 0..3 {
            total += counts[row][col] as u128 * weights[row][col] as u128;
        }
    }
    total
}

/// Per-row sums by the same double loop.
pub fn naive_class_sums(counts: &[[u64; 3]; 5], weights: &[[u64; 3]; 5]) -> [u128; 5] {
    let mut sums = [0u128; 5];
    for row in 0..5 {
        for col in 0..3 {
            sums[row] += counts[row][col] as u128 * weights[row][col] as u128;
        }
    }
    sums
}

/// Reads a rendered decimal such as `174.64` or `+6.29` back as hundredths.
/// Exactly two fractional digits are required.
pub fn parse_centi(s: &str) -> Option<i128> {
    let (neg, s) = match s.as_bytes().first()? {
        b'+' => (false, &s[1..]),
        b'-' => (true, &s[1..]),
        _ => (false, s),
    };
    let (int, frac) = s.split_once('.')?;
    if int.is_empty()
        || frac.len() != 2
        || !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let v = int.parse::<i128>().ok()? * 100 + frac.parse::<i128>().ok()?;
    Some(if neg { -v } else { v })
}

/// Straight from the FP definition, in exact rational form: FP × 100.
pub fn naive_fp_centi(cfp: u128, rcaf: u32) -> u128 {
    // 0.65 + 0.01 × rcaf = (65 + rcaf) / 100
    cfp * (65 + rcaf as u128)
}

pub fn rows_of(sheet: &CountSheet) -> [[u64; 3]; 5] {
    ComponentClass::ALL.map(|c| ComplexityLevel::ALL.map(|l| sheet.count(c, l)))
}

pub fn weight_rows(w: &Weights) -> [[u64; 3]; 5] {
    ComponentClass::ALL.map(|c| ComplexityLevel::ALL.map(|l| w.weight(c, l)))
}

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

// ---------------------------------------------------------------------------
// generators

pub fn arb_class() -> impl Strategy<Value = ComponentClass> {
    prop::sample::select(ComponentClass::ALL.to_vec())
}

pub fn arb_level() -> impl Strategy<Value = ComplexityLevel> {
    prop::sample::select(ComplexityLevel::ALL.to_vec())
}

pub fn arb_counts() -> impl Strategy<Value = [[u64; 3]; 5]> {
    prop::array::uniform5(prop::array::uniform3(prop_oneof![
        3 => 0u64..20,
        1 => 0u64..1_000_000_000,
    ]))
}

pub fn arb_weight_row() -> impl Strategy<Value = [u64; 3]> {
    (1u64..50, 0u64..50, 0u64..50).prop_map(|(a, b, c)| [a, a + b, a + b + c])
}

pub fn arb_weights() -> impl Strategy<Value = Weights> {
    prop::array::uniform5(arb_weight_row()).prop_map(|rows| {
        fpa::validate_weights(&WeightMatrix::from_rows(rows)).expect("monotone by construction")
    })
}

pub fn arb_rcaf() -> impl Strategy<Value = RcafSheet> {
    prop_oneof![
        prop::collection::vec(0u32..=5, 14).prop_map(RcafSheet::Itemized),
        (0u32..=70).prop_map(RcafSheet::Declared),
    ]
}

/// Text that survives a trip through the sheet format.
pub fn arb_text() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(String::new()),
        "[A-Za-z0-9][A-Za-z0-9 ,()/_.-]{0,24}[A-Za-z0-9)]",
    ]
}

pub fn arb_item_name() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9 ()-]{0,16}[A-Za-z0-9]"
}

pub fn arb_basis() -> impl Strategy<Value = fpa::ItemBasis> {
    prop_oneof![
        arb_level().prop_map(fpa::ItemBasis::Declared),
        (1u32..80, 0u32..12).prop_map(|(det, refs)| fpa::ItemBasis::Measured { det, refs }),
    ]
}

/// Items with names unique within each class.
pub fn arb_items(max: usize) -> impl Strategy<Value = Vec<ItemRecord>> {
    prop::collection::vec((arb_class(), arb_basis(), arb_item_name()), 0..max).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (class, basis, name))| ItemRecord {
                name: format!("{name} {i}"),
                class,
                basis,
            })
            .collect()
    })
}

pub fn arb_document() -> impl Strategy<Value = SheetDocument> {
    let body = prop_oneof![
        arb_counts().prop_map(|rows| fpa::SheetBody::Counts(CountSheet::from_rows("", "", rows))),
        arb_items(30).prop_map(fpa::SheetBody::Items),
    ];
    (
        arb_text(),
        arb_text(),
        body,
        arb_rcaf(),
        prop::option::of(arb_weights()),
    )
        .prop_map(|(name, approach, body, rcaf, weights)| {
            let body = match body {
                fpa::SheetBody::Counts(mut c) => {
                    c.name.clone_from(&name);
                    c.approach.clone_from(&approach);
                    fpa::SheetBody::Counts(c)
                }
                b => b,
            };
            SheetDocument {
                name,
                approach,
                body,
                rcaf,
                weights,
            }
        })
}
