//! Software size estimation by function point analysis.
//!
//! A count is read from a `.fpa` sheet ([`sheet`]), measured items are
//! graded into complexity levels ([`classifier`]), and the estimate is
//! computed exactly in hundredths of a function point ([`engine`]):
//!
//! ```
//! use fpa::{engine, CountSheet, RcafSheet, Weights};
//!
//! let sheet = CountSheet::from_rows(
//!     "Academic System",
//!     "object-oriented",
//!     [[2, 2, 3], [0, 4, 1], [4, 0, 3], [2, 0, 3], [0, 0, 0]],
//! );
//! let r = engine::evaluate_counts(&sheet, &RcafSheet::Declared(53), &Weights::default())?;
//! assert_eq!(r.cfp(), 148);
//! assert_eq!(r.fp.to_string(), "174.64");
//! # Ok::<(), fpa::engine::EngineError>(())
//! ```
//!
//! Results can be rendered as tables, CSV or JSON with [`report`].

pub mod classifier;
pub mod cli;
pub mod domain;
pub mod engine;
pub mod lexer;
pub mod report;
pub mod sheet;

pub use classifier::{aggregate_items, classify, ClassBands, ClassificationMatrix};
pub use domain::{
    default_weights, validate_rcaf, validate_weights, CentiDelta, CfpBreakdown, ClassPoints,
    ComplexityLevel, ComponentClass, CountSheet, FpCenti, FpResult, ItemBasis, ItemRecord, Rcaf,
    RcafSheet, WeightMatrix, Weights,
};
pub use engine::{compare, compute_cfp, compute_fp, compute_rcaf, evaluate_document, sensitivity};
pub use lexer::{Diagnostic, DiagnosticKind, Severity};
pub use report::{render_comparison, render_result, ReportFormat};
pub use sheet::{parse_sheet, render_sheet, SheetBody, SheetDocument};
