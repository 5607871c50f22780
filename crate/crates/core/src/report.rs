//! Rendering results as ASCII tables, CSV and JSON.
//!
//! Function point values are always written with exactly two decimals,
//! straight from the integer hundredths. JSON carries them as strings so
//! consumers never re-round them.

use std::fmt::Write as _;

use serde::Serialize;

use crate::domain::{ComplexityLevel, ComponentClass, FpResult};
use crate::engine::{ComparisonReport, SensitivityReport, WhatIfReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
    Json,
}

// ---------------------------------------------------------------------------
// ASCII tables

#[derive(Clone, Copy, PartialEq, Eq)]
enum Align {
    Left,
    Right,
    Center,
}

struct Cell {
    text: String,
    span: usize,
    align: Align,
}

fn left(s: impl Into<String>) -> Cell {
    Cell {
        text: s.into(),
        span: 1,
        align: Align::Left,
    }
}

fn right(s: impl ToString) -> Cell {
    Cell {
        text: s.to_string(),
        span: 1,
        align: Align::Right,
    }
}

fn spanning(s: impl Into<String>, span: usize, align: Align) -> Cell {
    Cell {
        text: s.into(),
        span,
        align,
    }
}

enum Row {
    Cells(Vec<Cell>),
    Rule,
}

struct Table {
    rows: Vec<Row>,
}

impl Table {
    fn new() -> Self {
        Table {
            rows: vec![Row::Rule],
        }
    }

    fn row(&mut self, cells: Vec<Cell>) {
        self.rows.push(Row::Cells(cells));
    }

    fn rule(&mut self) {
        self.rows.push(Row::Rule);
    }

    fn widths(&self) -> Vec<usize> {
        let n = self
            .rows
            .iter()
            .filter_map(|r| match r {
                Row::Cells(c) => Some(c.iter().map(|c| c.span).sum::<usize>()),
                Row::Rule => None,
            })
            .max()
            .unwrap_or(0);
        let mut widths = vec![0; n];
        for row in &self.rows {
            let Row::Cells(cells) = row else { continue };
            let mut col = 0;
            for c in cells {
                if c.span == 1 {
                    widths[col] = widths[col].max(c.text.chars().count());
                }
                col += c.span;
            }
        }
        // widen the last column of a span if its text does not fit
        for row in &self.rows {
            let Row::Cells(cells) = row else { continue };
            let mut col = 0;
            for c in cells {
                if c.span > 1 {
                    let have: usize =
                        widths[col..col + c.span].iter().sum::<usize>() + 3 * (c.span - 1);
                    let need = c.text.chars().count();
                    if need > have {
                        widths[col + c.span - 1] += need - have;
                    }
                }
                col += c.span;
            }
        }
        widths
    }

    fn render(&self, out: &mut String) {
        let widths = self.widths();
        let rule: String = widths
            .iter()
            .map(|w| format!("+{}", "-".repeat(w + 2)))
            .collect::<String>()
            + "+\n";
        for row in &self.rows {
            match row {
                Row::Rule => out.push_str(&rule),
                Row::Cells(cells) => {
                    let mut col = 0;
                    for c in cells {
                        let w = widths[col..col + c.span].iter().sum::<usize>() + 3 * (c.span - 1);
                        let text = &c.text;
                        let _ = match c.align {
                            Align::Left => write!(out, "| {text:<w$} "),
                            Align::Right => write!(out, "| {text:>w$} "),
                            Align::Center => write!(out, "| {text:^w$} "),
                        };
                        col += c.span;
                    }
                    out.push_str("|\n");
                }
            }
        }
    }
}

fn title(r: &FpResult) -> String {
    match (r.name.is_empty(), r.approach.is_empty()) {
        (true, true) => "Function point count".to_string(),
        (false, true) => r.name.clone(),
        (true, false) => format!("({})", r.approach),
        (false, false) => format!("{} ({})", r.name, r.approach),
    }
}

fn short_title(r: &FpResult, fallback: &str) -> String {
    if r.name.is_empty() && r.approach.is_empty() {
        fallback.to_string()
    } else {
        title(r)
    }
}

fn signed(n: impl Into<i128>) -> String {
    let n = n.into();
    if n > 0 {
        format!("+{n}")
    } else {
        n.to_string()
    }
}

fn result_table(r: &FpResult, out: &mut String) {
    let _ = writeln!(out, "{}", title(r));
    let mut t = Table::new();
    let mut group = vec![left("")];
    group.extend(
        ComplexityLevel::ALL
            .iter()
            .map(|l| spanning(l.label(), 3, Align::Center)),
    );
    group.push(left(""));
    t.row(group);
    let mut head = vec![left("Component")];
    for _ in ComplexityLevel::ALL {
        head.extend([left("Count"), left("Weight"), left("Point")]);
    }
    head.push(left("Sum of CFP"));
    t.row(head);
    t.rule();
    for c in &r.breakdown.classes {
        let mut row = vec![left(c.class.label())];
        for i in 0..3 {
            row.extend([right(c.counts[i]), right(c.weights[i]), right(c.points[i])]);
        }
        row.push(right(c.sum));
        t.row(row);
    }
    t.rule();
    t.row(vec![
        left("Sum of CFP"),
        spanning("", 9, Align::Left),
        right(r.cfp()),
    ]);
    t.rule();
    t.render(out);
    let _ = writeln!(out, "RCAF = {}", r.rcaf);
    let _ = writeln!(out, "FP = {} x (0.65 + 0.01 x {})", r.cfp(), r.rcaf);
    let _ = writeln!(out, "FP = {}", r.fp);
}

// ---------------------------------------------------------------------------
// CSV

fn csv_string(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

fn strings<const N: usize>(a: [&dyn ToString; N]) -> Vec<String> {
    a.iter().map(|s| s.to_string()).collect()
}

fn result_csv(r: &FpResult) -> String {
    let e = &"";
    let mut rows = vec![strings([
        &"kind", &"class", &"level", &"count", &"weight", &"value",
    ])];
    rows.push(strings([&"name", e, e, e, e, &r.name]));
    rows.push(strings([&"approach", e, e, e, e, &r.approach]));
    for c in &r.breakdown.classes {
        for level in ComplexityLevel::ALL {
            let i = level.index();
            rows.push(strings([
                &"cell",
                &c.class.code(),
                &level.name(),
                &c.counts[i],
                &c.weights[i],
                &c.points[i],
            ]));
        }
    }
    for c in &r.breakdown.classes {
        rows.push(strings([&"class_sum", &c.class.code(), e, e, e, &c.sum]));
    }
    rows.push(strings([&"cfp", e, e, e, e, &r.cfp()]));
    rows.push(strings([&"rcaf", e, e, e, e, &r.rcaf]));
    rows.push(strings([&"fp", e, e, e, e, &r.fp]));
    csv_string(&rows)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize)]
struct JsonCell {
    class: &'static str,
    level: &'static str,
    count: u64,
    weight: u64,
    points: u64,
}

#[derive(Serialize)]
struct JsonResult<'a> {
    name: &'a str,
    approach: &'a str,
    cfp: u64,
    rcaf: u32,
    fp: String,
    breakdown: Vec<JsonCell>,
}

impl<'a> From<&'a FpResult> for JsonResult<'a> {
    fn from(r: &'a FpResult) -> Self {
        let breakdown = r
            .breakdown
            .classes
            .iter()
            .flat_map(|c| {
                ComplexityLevel::ALL.map(|l| JsonCell {
                    class: c.class.code(),
                    level: l.name(),
                    count: c.counts[l.index()],
                    weight: c.weights[l.index()],
                    points: c.points[l.index()],
                })
            })
            .collect();
        JsonResult {
            name: &r.name,
            approach: &r.approach,
            cfp: r.cfp(),
            rcaf: r.rcaf.get(),
            fp: r.fp.to_string(),
            breakdown,
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Public entry points

/// Renders a single estimate.
pub fn render_result(r: &FpResult, fmt: ReportFormat) -> String {
    match fmt {
        ReportFormat::Table => {
            let mut out = String::new();
            result_table(r, &mut out);
            out
        }
        ReportFormat::Csv => result_csv(r),
        ReportFormat::Json => json(&JsonResult::from(r)),
    }
}

#[derive(Serialize)]
struct JsonComparison<'a> {
    left: JsonResult<'a>,
    right: JsonResult<'a>,
    cfp_delta: i128,
    rcaf_delta: i64,
    fp_delta: String,
}

/// Renders two estimates side by side with signed deltas (right − left).
pub fn render_comparison(c: &ComparisonReport, fmt: ReportFormat) -> String {
    match fmt {
        ReportFormat::Table => {
            let mut t = Table::new();
            t.row(vec![
                left(""),
                left(short_title(&c.left, "left")),
                left(short_title(&c.right, "right")),
                left("Delta"),
            ]);
            t.rule();
            t.row(vec![
                left("CFP"),
                right(c.left.cfp()),
                right(c.right.cfp()),
                right(signed(c.cfp_delta)),
            ]);
            t.row(vec![
                left("RCAF"),
                right(c.left.rcaf),
                right(c.right.rcaf),
                right(signed(c.rcaf_delta)),
            ]);
            t.row(vec![
                left("FP"),
                right(c.left.fp),
                right(c.right.fp),
                right(c.fp_delta),
            ]);
            t.rule();
            let mut out = String::new();
            t.render(&mut out);
            let _ = writeln!(out, "FP delta = {}", c.fp_delta);
            out
        }
        ReportFormat::Csv => csv_string(&[
            strings([
                &"left_name",
                &"right_name",
                &"left_cfp",
                &"right_cfp",
                &"cfp_delta",
                &"left_rcaf",
                &"right_rcaf",
                &"rcaf_delta",
                &"left_fp",
                &"right_fp",
                &"fp_delta",
            ]),
            strings([
                &c.left.name,
                &c.right.name,
                &c.left.cfp(),
                &c.right.cfp(),
                &signed(c.cfp_delta),
                &c.left.rcaf,
                &c.right.rcaf,
                &signed(c.rcaf_delta),
                &c.left.fp,
                &c.right.fp,
                &c.fp_delta,
            ]),
        ]),
        ReportFormat::Json => json(&JsonComparison {
            left: (&c.left).into(),
            right: (&c.right).into(),
            cfp_delta: c.cfp_delta,
            rcaf_delta: c.rcaf_delta,
            fp_delta: c.fp_delta.to_string(),
        }),
    }
}

#[derive(Serialize)]
struct JsonMarginal {
    class: &'static str,
    level: &'static str,
    weight: u64,
    fp_delta: String,
}

#[derive(Serialize)]
struct JsonSensitivity<'a> {
    base: JsonResult<'a>,
    per_rcaf_point: String,
    marginals: Vec<JsonMarginal>,
}

/// Renders per-unit effects on FP.
pub fn render_sensitivity(s: &SensitivityReport, fmt: ReportFormat) -> String {
    let weight = |class: ComponentClass, level: ComplexityLevel| {
        s.base.breakdown.class(class).weights[level.index()]
    };
    match fmt {
        ReportFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{}", title(&s.base));
            let _ = writeln!(out, "FP = {}", s.base.fp);
            let _ = writeln!(out, "Per RCAF point = +{}", s.per_rcaf_point);
            let mut t = Table::new();
            let mut head = vec![left("One more component")];
            head.extend(ComplexityLevel::ALL.map(|l| left(l.label())));
            t.row(head);
            t.rule();
            for class in ComponentClass::ALL {
                let mut row = vec![left(class.label())];
                row.extend(
                    ComplexityLevel::ALL.map(|l| right(format!("+{}", s.marginal(class, l)))),
                );
                t.row(row);
            }
            t.rule();
            t.render(&mut out);
            out
        }
        ReportFormat::Csv => {
            let e = &"";
            let mut rows = vec![strings([&"kind", &"class", &"level", &"weight", &"value"])];
            rows.push(strings([&"base_fp", e, e, e, &s.base.fp]));
            rows.push(strings([&"per_rcaf_point", e, e, e, &s.per_rcaf_point]));
            for class in ComponentClass::ALL {
                for level in ComplexityLevel::ALL {
                    rows.push(strings([
                        &"marginal",
                        &class.code(),
                        &level.name(),
                        &weight(class, level),
                        &s.marginal(class, level),
                    ]));
                }
            }
            csv_string(&rows)
        }
        ReportFormat::Json => json(&JsonSensitivity {
            base: (&s.base).into(),
            per_rcaf_point: s.per_rcaf_point.to_string(),
            marginals: ComponentClass::ALL
                .iter()
                .flat_map(|&class| {
                    ComplexityLevel::ALL.map(|level| JsonMarginal {
                        class: class.code(),
                        level: level.name(),
                        weight: weight(class, level),
                        fp_delta: s.marginal(class, level).to_string(),
                    })
                })
                .collect(),
        }),
    }
}

#[derive(Serialize)]
struct JsonWhatIf<'a> {
    base: JsonResult<'a>,
    adjusted: JsonResult<'a>,
    adjustments: Vec<String>,
    fp_delta: String,
}

/// Renders before/after estimates for a set of adjustments.
pub fn render_what_if(w: &WhatIfReport, fmt: ReportFormat) -> String {
    let adjustments: Vec<String> = w.adjustments.iter().map(ToString::to_string).collect();
    match fmt {
        ReportFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{}", title(&w.base));
            let listed = if adjustments.is_empty() {
                "none".to_string()
            } else {
                adjustments.join(", ")
            };
            let _ = writeln!(out, "Adjustments: {listed}");
            let mut t = Table::new();
            t.row(vec![
                left(""),
                left("Base"),
                left("Adjusted"),
                left("Delta"),
            ]);
            t.rule();
            t.row(vec![
                left("CFP"),
                right(w.base.cfp()),
                right(w.adjusted.cfp()),
                right(signed(w.adjusted.cfp() as i128 - w.base.cfp() as i128)),
            ]);
            t.row(vec![
                left("RCAF"),
                right(w.base.rcaf),
                right(w.adjusted.rcaf),
                right(signed(
                    w.adjusted.rcaf.get() as i64 - w.base.rcaf.get() as i64,
                )),
            ]);
            t.row(vec![
                left("FP"),
                right(w.base.fp),
                right(w.adjusted.fp),
                right(w.fp_delta),
            ]);
            t.rule();
            t.render(&mut out);
            let _ = writeln!(out, "FP = {}", w.adjusted.fp);
            let _ = writeln!(out, "FP delta = {}", w.fp_delta);
            out
        }
        ReportFormat::Csv => csv_string(&[
            strings([
                &"base_cfp",
                &"base_rcaf",
                &"base_fp",
                &"adjusted_cfp",
                &"adjusted_rcaf",
                &"adjusted_fp",
                &"fp_delta",
                &"adjustments",
            ]),
            strings([
                &w.base.cfp(),
                &w.base.rcaf,
                &w.base.fp,
                &w.adjusted.cfp(),
                &w.adjusted.rcaf,
                &w.adjusted.fp,
                &w.fp_delta,
                &adjustments.join(";"),
            ]),
        ]),
        ReportFormat::Json => json(&JsonWhatIf {
            base: (&w.base).into(),
            adjusted: (&w.adjusted).into(),
            adjustments,
            fp_delta: w.fp_delta.to_string(),
        }),
    }
}
