//! The three-step computation and the analyses built on it.
//!
//! 1. Crude function points: every count is multiplied by its weight and
//!    the products are summed, per class and overall.
//! 2. RCAF: the sum of the fourteen characteristic ratings (0..=70).
//! 3. `FP = CFP × (0.65 + 0.01 × RCAF)`.
//!
//! Step 3 is carried out as `fp_centi = cfp × (65 + rcaf)`, which is FP in
//! exact hundredths. Nothing here touches floating point.

use crate::classifier::{AggregateError, ClassificationMatrix};
use crate::domain::{
    validate_rcaf, CentiDelta, CfpBreakdown, ClassPoints, ComplexityLevel, ComponentClass,
    CountSheet, FpCenti, FpResult, Rcaf, RcafSheet, RcafViolation, Weights, RCAF_FACTOR_COUNT,
    RCAF_MAX_RATING, RCAF_MAX_TOTAL,
};
use crate::sheet::SheetDocument;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("arithmetic overflow while computing function points")]
    Overflow,
    #[error("invalid rcaf: {}", join(.0))]
    Rcaf(Vec<RcafViolation>),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
}

fn join(v: &[RcafViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Weighted points per class and in total.
pub fn compute_cfp(sheet: &CountSheet, w: &Weights) -> Result<CfpBreakdown, EngineError> {
    let mut classes = [ClassPoints {
        class: ComponentClass::ExternalInput,
        counts: [0; 3],
        weights: [0; 3],
        points: [0; 3],
        sum: 0,
    }; 5];
    let mut cfp: u64 = 0;
    for class in ComponentClass::ALL {
        let counts = sheet.row(class);
        let weights = w.row(class);
        let mut points = [0u64; 3];
        let mut sum: u64 = 0;
        for i in 0..3 {
            points[i] = counts[i]
                .checked_mul(weights[i])
                .ok_or(EngineError::Overflow)?;
            sum = sum.checked_add(points[i]).ok_or(EngineError::Overflow)?;
        }
        cfp = cfp.checked_add(sum).ok_or(EngineError::Overflow)?;
        classes[class.index()] = ClassPoints {
            class,
            counts,
            weights,
            points,
            sum,
        };
    }
    Ok(CfpBreakdown { classes, cfp })
}

/// The assessment total.
pub fn compute_rcaf(r: &RcafSheet) -> Result<Rcaf, EngineError> {
    validate_rcaf(r).map_err(EngineError::Rcaf)
}

/// `cfp × (65 + rcaf)` hundredths of a function point. `rcaf` must lie in
/// `0..=70`.
pub fn compute_fp(cfp: u64, rcaf: u32) -> Result<FpCenti, EngineError> {
    let rcaf = Rcaf::new(rcaf).map_err(|v| EngineError::Rcaf(vec![v]))?;
    fp_centi(cfp, rcaf)
}

fn fp_centi(cfp: u64, rcaf: Rcaf) -> Result<FpCenti, EngineError> {
    cfp.checked_mul(65 + rcaf.get() as u64)
        .map(FpCenti)
        .ok_or(EngineError::Overflow)
}

/// Combines a count sheet and an assessment into a finished estimate.
pub fn evaluate_counts(
    sheet: &CountSheet,
    rcaf: &RcafSheet,
    w: &Weights,
) -> Result<FpResult, EngineError> {
    let breakdown = compute_cfp(sheet, w)?;
    let rcaf = compute_rcaf(rcaf)?;
    let fp = fp_centi(breakdown.cfp, rcaf)?;
    Ok(FpResult {
        name: sheet.name.clone(),
        approach: sheet.approach.clone(),
        breakdown,
        rcaf,
        fp,
    })
}

/// Runs the full pipeline on a document. Its own `[weights]` block, when
/// present, takes precedence over `w`; itemized bodies are classified with
/// `m` and tallied first.
pub fn evaluate_document(
    doc: &SheetDocument,
    w: &Weights,
    m: &ClassificationMatrix,
) -> Result<FpResult, EngineError> {
    let sheet = doc.count_sheet(m)?;
    evaluate_counts(&sheet, &doc.rcaf, doc.weights.as_ref().unwrap_or(w))
}

/// Two estimates side by side. Deltas are `right − left`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub left: FpResult,
    pub right: FpResult,
    pub cfp_delta: i128,
    pub rcaf_delta: i64,
    pub fp_delta: CentiDelta,
}

pub fn compare(left: &FpResult, right: &FpResult) -> ComparisonReport {
    ComparisonReport {
        left: left.clone(),
        right: right.clone(),
        cfp_delta: right.cfp() as i128 - left.cfp() as i128,
        rcaf_delta: right.rcaf.get() as i64 - left.rcaf.get() as i64,
        fp_delta: CentiDelta::between(left.fp, right.fp),
    }
}

/// How much the estimate moves per unit change of each input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityReport {
    pub base: FpResult,
    /// Change in hundredths per extra RCAF point; equals the CFP.
    pub per_rcaf_point: FpCenti,
    /// Change in hundredths from one more component in each cell,
    /// `weight × (65 + rcaf)`, indexed `[class][level]`.
    pub marginals: [[FpCenti; 3]; 5],
}

impl SensitivityReport {
    pub fn marginal(&self, class: ComponentClass, level: ComplexityLevel) -> FpCenti {
        self.marginals[class.index()][level.index()]
    }
}

pub fn sensitivity(
    doc: &SheetDocument,
    w: &Weights,
    m: &ClassificationMatrix,
) -> Result<SensitivityReport, EngineError> {
    let base = evaluate_document(doc, w, m)?;
    let w = doc.weights.as_ref().unwrap_or(w);
    let multiplier = 65 + base.rcaf.get() as u64;
    let mut marginals = [[FpCenti(0); 3]; 5];
    for class in ComponentClass::ALL {
        for level in ComplexityLevel::ALL {
            marginals[class.index()][level.index()] = FpCenti(
                w.weight(class, level)
                    .checked_mul(multiplier)
                    .ok_or(EngineError::Overflow)?,
            );
        }
    }
    Ok(SensitivityReport {
        per_rcaf_point: FpCenti(base.cfp()),
        base,
        marginals,
    })
}

/// Which RCAF figure an adjustment touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcafTarget {
    /// 1-based factor number.
    Factor(usize),
    Total,
}

/// One hypothetical change to a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjustment {
    Rcaf {
        target: RcafTarget,
        delta: i64,
    },
    Add {
        class: ComponentClass,
        level: ComplexityLevel,
    },
}

/// Written the way the CLI accepts it: `total=+1`, `f3=-2`, `ILF:high`.
impl std::fmt::Display for Adjustment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Adjustment::Rcaf {
                target: RcafTarget::Total,
                delta,
            } => write!(f, "total={delta:+}"),
            Adjustment::Rcaf {
                target: RcafTarget::Factor(n),
                delta,
            } => write!(f, "f{n}={delta:+}"),
            Adjustment::Add { class, level } => write!(f, "{}:{}", class.code(), level.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WhatIfError {
    #[error("f{0} does not exist (factors are f1..f14)")]
    NoSuchFactor(usize),
    #[error("sheet has only a declared rcaf total; adjust `total` instead of f{0}")]
    FactorsUnavailable(usize),
    #[error("f{factor} would become {value}, outside 0..5")]
    RatingOutOfRange { factor: usize, value: i64 },
    #[error("rcaf total would become {0}, outside 0..70")]
    TotalOutOfRange(i64),
    #[error("count overflow")]
    Overflow,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A what-if failure and, when one is to blame, the index of the
/// adjustment that caused it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{error}")]
pub struct WhatIfFailure {
    pub adjustment: Option<usize>,
    pub error: WhatIfError,
}

impl WhatIfFailure {
    fn at(i: usize) -> impl FnOnce(WhatIfError) -> Self {
        move |error| WhatIfFailure {
            adjustment: Some(i),
            error,
        }
    }
}

impl From<EngineError> for WhatIfFailure {
    fn from(e: EngineError) -> Self {
        WhatIfFailure {
            adjustment: None,
            error: e.into(),
        }
    }
}

/// Applies adjustments in order to the counts and assessment behind `doc`.
pub fn apply_adjustments(
    doc: &SheetDocument,
    adjustments: &[Adjustment],
    m: &ClassificationMatrix,
) -> Result<(CountSheet, RcafSheet), WhatIfFailure> {
    let mut sheet = doc.count_sheet(m).map_err(EngineError::from)?;
    let mut rcaf = doc.rcaf.clone();
    for (i, adj) in adjustments.iter().enumerate() {
        apply_one(&mut sheet, &mut rcaf, *adj).map_err(WhatIfFailure::at(i))?;
    }
    Ok((sheet, rcaf))
}

fn apply_one(
    sheet: &mut CountSheet,
    rcaf: &mut RcafSheet,
    adj: Adjustment,
) -> Result<(), WhatIfError> {
    match adj {
        Adjustment::Add { class, level } => {
            sheet.increment(class, level).ok_or(WhatIfError::Overflow)?;
        }
        Adjustment::Rcaf {
            target: RcafTarget::Total,
            delta,
        } => {
            let value = rcaf.raw_total() as i64 + delta;
            if !(0..=RCAF_MAX_TOTAL as i64).contains(&value) {
                return Err(WhatIfError::TotalOutOfRange(value));
            }
            *rcaf = RcafSheet::Declared(value as u32);
        }
        Adjustment::Rcaf {
            target: RcafTarget::Factor(f),
            delta,
        } => {
            if !(1..=RCAF_FACTOR_COUNT).contains(&f) {
                return Err(WhatIfError::NoSuchFactor(f));
            }
            let RcafSheet::Itemized(ratings) = rcaf else {
                return Err(WhatIfError::FactorsUnavailable(f));
            };
            let value = ratings[f - 1] as i64 + delta;
            if !(0..=RCAF_MAX_RATING as i64).contains(&value) {
                return Err(WhatIfError::RatingOutOfRange { factor: f, value });
            }
            ratings[f - 1] = value as u32;
        }
    }
    Ok(())
}

/// Before and after estimates for a set of adjustments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhatIfReport {
    pub base: FpResult,
    pub adjusted: FpResult,
    pub adjustments: Vec<Adjustment>,
    pub fp_delta: CentiDelta,
}

/// Evaluates `doc` as is and again after `adjustments`, both from scratch.
pub fn what_if(
    doc: &SheetDocument,
    adjustments: &[Adjustment],
    w: &Weights,
    m: &ClassificationMatrix,
) -> Result<WhatIfReport, WhatIfFailure> {
    let base = evaluate_document(doc, w, m)?;
    let (sheet, rcaf) = apply_adjustments(doc, adjustments, m)?;
    let adjusted = evaluate_counts(&sheet, &rcaf, doc.weights.as_ref().unwrap_or(w))?;
    Ok(WhatIfReport {
        fp_delta: CentiDelta::between(base.fp, adjusted.fp),
        base,
        adjusted,
        adjustments: adjustments.to_vec(),
    })
}
