//! The user guide under `book/`, one module per chapter, so that
//! `cargo test --doc` runs every snippet in it.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/components.md")]
pub mod components {}
#[doc = include_str!("../../../book/src/rcaf.md")]
pub mod rcaf {}
#[doc = include_str!("../../../book/src/exactness.md")]
pub mod exactness {}
#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}
#[doc = include_str!("../../../book/src/sheet-format.md")]
pub mod sheet_format {}
#[doc = include_str!("../../../book/src/reports.md")]
pub mod reports {}
#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/case-studies.md")]
pub mod case_studies {}
