//! The `.fpa` count-sheet file format.
//!
//! ```text
//! # comments run to end of line
//! [meta]
//! name = Academic System
//! approach = object-oriented
//!
//! [counts]            # low average high; omitted keys are 0 0 0
//! input = 2 2 3
//! output = 0 4 1
//!
//! [rcaf]
//! total = 53          # or f1 = .. f14 = , each 0..5
//!
//! [weights]           # optional, all five keys or none
//! input = 3 4 6
//! ...
//! ```
//!
//! Instead of `[counts]` a sheet may list individual components under
//! `[items]`, one per line: `item = <EI|EO|EQ|ILF|EIF> <basis> <name>` where
//! the basis is `low`, `average`, `high` or `det=<n>,refs=<n>`.
//!
//! [`parse_sheet`] keeps going after recoverable errors so one pass reports
//! every problem it can find.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::classifier::{self, AggregateError, ClassificationMatrix};
use crate::domain::{
    validate_rcaf, validate_weights, ComplexityLevel, ComponentClass, CountSheet, ItemBasis,
    ItemRecord, RcafSheet, WeightMatrix, WeightViolationKind, Weights, RCAF_FACTOR_COUNT,
    RCAF_MAX_RATING, RCAF_MAX_TOTAL,
};
use crate::lexer::{self, Diagnostic, Line};

/// Either aggregated counts or the individual items behind them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheetBody {
    Counts(CountSheet),
    Items(Vec<ItemRecord>),
}

/// Everything a count-sheet file says.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetDocument {
    pub name: String,
    pub approach: String,
    pub body: SheetBody,
    pub rcaf: RcafSheet,
    /// Overrides the caller's weights when present.
    pub weights: Option<Weights>,
}

/// A successfully parsed sheet and any warnings raised on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSheet {
    pub document: SheetDocument,
    pub warnings: Vec<Diagnostic>,
}

impl SheetDocument {
    /// A counts-based document; name and approach are taken from `sheet`.
    pub fn from_counts(sheet: CountSheet, rcaf: RcafSheet) -> Self {
        SheetDocument {
            name: sheet.name.clone(),
            approach: sheet.approach.clone(),
            body: SheetBody::Counts(sheet),
            rcaf,
            weights: None,
        }
    }

    pub fn from_items(
        name: impl Into<String>,
        approach: impl Into<String>,
        items: Vec<ItemRecord>,
        rcaf: RcafSheet,
    ) -> Self {
        SheetDocument {
            name: name.into(),
            approach: approach.into(),
            body: SheetBody::Items(items),
            rcaf,
            weights: None,
        }
    }

    /// The counts this document stands for, aggregating items if needed.
    pub fn count_sheet(&self, m: &ClassificationMatrix) -> Result<CountSheet, AggregateError> {
        let mut sheet = match &self.body {
            SheetBody::Counts(c) => c.clone(),
            SheetBody::Items(items) => classifier::aggregate_items(items, m, "", "")?,
        };
        sheet.name.clone_from(&self.name);
        sheet.approach.clone_from(&self.approach);
        Ok(sheet)
    }

    /// Problems that would stop this document from being written out and
    /// read back unchanged.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (what, s) in [("name", &self.name), ("approach", &self.approach)] {
            if !is_representable(s) {
                out.push(format!("{what} {s:?} cannot be written to a sheet"));
            }
        }
        if let SheetBody::Items(items) = &self.body {
            let mut seen = HashSet::new();
            for item in items {
                if item.name.is_empty() || !is_representable(&item.name) {
                    out.push(format!(
                        "item name {:?} cannot be written to a sheet",
                        item.name
                    ));
                }
                if !seen.insert((item.class, item.name.as_str())) {
                    out.push(format!("duplicate item name {:?}", item.name));
                }
                if matches!(item.basis, ItemBasis::Measured { det: 0, .. }) {
                    out.push(format!("item {:?} has det=0", item.name));
                }
            }
        }
        if let Err(errs) = validate_rcaf(&self.rcaf) {
            out.extend(errs.iter().map(ToString::to_string));
        }
        out
    }
}

fn is_representable(s: &str) -> bool {
    s.trim() == s && !s.contains(['#', '\n', '\r'])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Meta,
    Counts,
    Items,
    Rcaf,
    Weights,
}

impl Section {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "meta" => Section::Meta,
            "counts" => Section::Counts,
            "items" => Section::Items,
            "rcaf" => Section::Rcaf,
            "weights" => Section::Weights,
            _ => return None,
        })
    }
}

/// Splits off the first whitespace-delimited token.
fn next_token(s: &str) -> Option<(&str, &str)> {
    let s = s.trim_start();
    if s.is_empty() {
        return None;
    }
    Some(match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    })
}

fn parse_basis(s: &str, line: usize) -> Result<ItemBasis, Diagnostic> {
    if let Some(level) = ComplexityLevel::from_name(s) {
        return Ok(ItemBasis::Declared(level));
    }
    let measured = s
        .split_once(',')
        .and_then(|(d, r)| Some((d.strip_prefix("det=")?, r.strip_prefix("refs=")?)));
    match measured {
        Some((d, r)) => Ok(ItemBasis::Measured {
            det: lexer::parse_uint(d, line)?,
            refs: lexer::parse_uint(r, line)?,
        }),
        None => Err(Diagnostic::syntax(
            line,
            format!("expected low, average, high or det=<n>,refs=<n>, found `{s}`"),
        )),
    }
}

fn parse_item(value: &str, line: usize) -> Result<ItemRecord, Diagnostic> {
    let (class, rest) = next_token(value)
        .ok_or_else(|| Diagnostic::syntax(line, "expected `item = <CLASS> <basis> <name>`"))?;
    let class = ComponentClass::from_code(class).ok_or_else(|| {
        Diagnostic::syntax(
            line,
            format!("unknown component class `{class}` (expected EI, EO, EQ, ILF or EIF)"),
        )
    })?;
    let (basis, name) =
        next_token(rest).ok_or_else(|| Diagnostic::syntax(line, "missing item basis"))?;
    let basis = parse_basis(basis, line)?;
    if name.is_empty() {
        return Err(Diagnostic::syntax(line, "missing item name"));
    }
    Ok(ItemRecord {
        name: name.to_string(),
        class,
        basis,
    })
}

#[derive(Default)]
struct Builder {
    name: Option<String>,
    approach: Option<String>,
    counts: CountSheet,
    items: Vec<ItemRecord>,
    item_keys: HashMap<(ComponentClass, String), usize>,
    item_names: HashMap<String, ComponentClass>,
    factors: [Option<u32>; RCAF_FACTOR_COUNT],
    first_factor_line: Option<usize>,
    total: Option<(u32, usize)>,
    weights: WeightMatrix,
    weight_lines: [Option<usize>; 5],
    weights_broken: bool,
    rcaf_broken: bool,
    section_lines: HashMap<Section, usize>,
    keys_seen: HashSet<(Section, String)>,
}

/// Parses sheet text. On failure every diagnostic found is returned,
/// sorted by line; at least one of them is an error.
pub fn parse_sheet(text: &str) -> Result<ParsedSheet, Vec<Diagnostic>> {
    let (b, mut diags) = collect(text, |_| true);
    let document = b.finish(&mut diags);
    diags.sort_by_key(|d| d.line);
    match document {
        Some(document) if !diags.iter().any(Diagnostic::is_error) => Ok(ParsedSheet {
            document,
            warnings: diags,
        }),
        _ => Err(diags),
    }
}

/// Parses a weight override file: a single complete `[weights]` section.
pub fn parse_weights(text: &str) -> Result<Weights, Vec<Diagnostic>> {
    let (b, mut diags) = collect(text, |s| s == Section::Weights);
    let weights = match b.section_lines.get(&Section::Weights) {
        Some(&header) => b.finish_weights(header, &mut diags).ok().flatten(),
        None => {
            diags.push(Diagnostic::invalid(1, "missing weights section"));
            None
        }
    };
    diags.sort_by_key(|d| d.line);
    match weights {
        Some(w) if !diags.iter().any(Diagnostic::is_error) => Ok(w),
        _ => Err(diags),
    }
}

fn collect(text: &str, allowed: impl Fn(Section) -> bool) -> (Builder, Vec<Diagnostic>) {
    let (lines, mut diags) = lexer::lex(text);
    let mut b = Builder::default();
    // None before the first header; Some(None) inside an unknown section.
    let mut current: Option<Option<Section>> = None;

    for line in lines {
        match line {
            Line::Section { name, line } => {
                match Section::from_name(name).filter(|&s| allowed(s)) {
                    Some(s) => {
                        if let Entry::Vacant(e) = b.section_lines.entry(s) {
                            e.insert(line);
                        } else {
                            diags.push(Diagnostic::invalid(
                                line,
                                format!("duplicate section [{name}]"),
                            ));
                        }
                        current = Some(Some(s));
                    }
                    None => {
                        diags.push(Diagnostic::syntax(
                            line,
                            format!("unknown section [{name}]"),
                        ));
                        current = Some(None);
                    }
                }
            }
            Line::Entry { key, value, line } => match current {
                None => diags.push(Diagnostic::syntax(line, "entry outside of any section")),
                Some(None) => {}
                Some(Some(section)) => {
                    if let Err(d) = b.entry(section, key, value, line, &mut diags) {
                        diags.push(d);
                    }
                }
            },
        }
    }
    (b, diags)
}

impl Builder {
    fn entry(
        &mut self,
        section: Section,
        key: &str,
        value: &str,
        line: usize,
        diags: &mut Vec<Diagnostic>,
    ) -> Result<(), Diagnostic> {
        let known = match section {
            Section::Meta => matches!(key, "name" | "approach"),
            Section::Counts | Section::Weights => ComponentClass::from_sheet_key(key).is_some(),
            Section::Items => key == "item",
            Section::Rcaf => key == "total" || factor_index(key).is_some(),
        };
        if !known {
            return Err(Diagnostic::syntax(line, format!("unknown key `{key}`")));
        }
        if section != Section::Items && !self.keys_seen.insert((section, key.to_string())) {
            return Err(Diagnostic::invalid(line, format!("duplicate key `{key}`")));
        }

        match section {
            Section::Meta => {
                let slot = if key == "name" {
                    &mut self.name
                } else {
                    &mut self.approach
                };
                *slot = Some(value.to_string());
            }
            Section::Counts => {
                let class = ComponentClass::from_sheet_key(key).expect("checked");
                self.counts
                    .set_row(class, lexer::parse_triple(value, line)?);
            }
            Section::Weights => {
                let class = ComponentClass::from_sheet_key(key).expect("checked");
                self.weight_lines[class.index()] = Some(line);
                match lexer::parse_triple(value, line) {
                    Ok(row) => self.weights.set_row(class, row),
                    Err(d) => {
                        self.weights_broken = true;
                        return Err(d);
                    }
                }
            }
            Section::Items => {
                let item = parse_item(value, line)?;
                if let ItemBasis::Measured { det: 0, .. } = item.basis {
                    return Err(Diagnostic::invalid(
                        line,
                        format!("item `{}`: det must be at least 1", item.name),
                    ));
                }
                let key = (item.class, item.name.clone());
                if let Some(first) = self.item_keys.get(&key) {
                    return Err(Diagnostic::invalid(
                        line,
                        format!(
                            "duplicate item name `{}` in class {} (first on line {first})",
                            item.name,
                            item.class.code()
                        ),
                    ));
                }
                match self.item_names.get(&item.name) {
                    Some(other) if *other != item.class => diags.push(Diagnostic::warning(
                        line,
                        format!("item `{}` is also counted as {}", item.name, other.code()),
                    )),
                    Some(_) => {}
                    None => {
                        self.item_names.insert(item.name.clone(), item.class);
                    }
                }
                self.item_keys.insert(key, line);
                self.items.push(item);
            }
            Section::Rcaf => {
                let n: u32 =
                    lexer::parse_uint(value, line).inspect_err(|_| self.rcaf_broken = true)?;
                let out_of_range = if key == "total" {
                    self.total = Some((n, line));
                    (n > RCAF_MAX_TOTAL)
                        .then(|| format!("rcaf total out of range 0..{RCAF_MAX_TOTAL}: {n}"))
                } else {
                    self.factors[factor_index(key).expect("checked")] = Some(n);
                    self.first_factor_line.get_or_insert(line);
                    (n > RCAF_MAX_RATING)
                        .then(|| format!("rating out of range 0..{RCAF_MAX_RATING}: {key} = {n}"))
                };
                if let Some(msg) = out_of_range {
                    self.rcaf_broken = true;
                    return Err(Diagnostic::invalid(line, msg));
                }
            }
        }
        Ok(())
    }

    fn finish(self, diags: &mut Vec<Diagnostic>) -> Option<SheetDocument> {
        let mut ok = true;
        let counts_line = self.section_lines.get(&Section::Counts).copied();
        let items_line = self.section_lines.get(&Section::Items).copied();
        if let (Some(c), Some(i)) = (counts_line, items_line) {
            diags.push(Diagnostic::invalid(
                c.max(i),
                "counts and items are mutually exclusive",
            ));
            ok = false;
        }

        let rcaf = match self.section_lines.get(&Section::Rcaf) {
            None => {
                diags.push(Diagnostic::invalid(1, "missing rcaf section"));
                None
            }
            Some(&header) => self.finish_rcaf(header, diags),
        };

        let weights = match self.section_lines.get(&Section::Weights) {
            None => None,
            Some(&header) => match self.finish_weights(header, diags) {
                Ok(w) => w,
                Err(()) => {
                    ok = false;
                    None
                }
            },
        };

        let name = self.name.unwrap_or_default();
        let approach = self.approach.unwrap_or_default();
        let body = if items_line.is_some() {
            SheetBody::Items(self.items)
        } else {
            let mut c = self.counts;
            c.name.clone_from(&name);
            c.approach.clone_from(&approach);
            SheetBody::Counts(c)
        };
        let rcaf = rcaf?;
        ok.then_some(SheetDocument {
            name,
            approach,
            body,
            rcaf,
            weights,
        })
    }

    /// `Err` when the section is present but unusable; the reasons are
    /// already in `diags`.
    fn finish_weights(
        &self,
        header: usize,
        diags: &mut Vec<Diagnostic>,
    ) -> Result<Option<Weights>, ()> {
        let missing: Vec<&str> = ComponentClass::ALL
            .into_iter()
            .filter(|c| self.weight_lines[c.index()].is_none())
            .map(|c| c.sheet_key())
            .collect();
        if !missing.is_empty() {
            diags.push(Diagnostic::invalid(
                header,
                format!(
                    "weights override must set all five keys; missing: {}",
                    missing.join(", ")
                ),
            ));
            return Err(());
        }
        if self.weights_broken {
            return Err(());
        }
        match validate_weights(&self.weights) {
            Ok(w) => Ok(Some(w)),
            Err(violations) => {
                for v in violations {
                    debug_assert_ne!(v.kind, WeightViolationKind::Missing);
                    let line = self.weight_lines[v.class.index()].unwrap_or(header);
                    diags.push(Diagnostic::invalid(line, v.to_string()));
                }
                Err(())
            }
        }
    }

    fn finish_rcaf(&self, header: usize, diags: &mut Vec<Diagnostic>) -> Option<RcafSheet> {
        if self.rcaf_broken {
            return None;
        }
        let any_factor = self.first_factor_line.is_some();
        match (any_factor, self.total) {
            (true, Some((_, line))) => {
                diags.push(Diagnostic::invalid(
                    line,
                    "rcaf factors and total are mutually exclusive",
                ));
                None
            }
            (false, Some((t, line))) => {
                diags.push(Diagnostic::warning(
                    line,
                    "rcaf given as a declared total; per-factor ratings are not available",
                ));
                Some(RcafSheet::Declared(t))
            }
            (true, None) => {
                let missing: Vec<String> = (0..RCAF_FACTOR_COUNT)
                    .filter(|&i| self.factors[i].is_none())
                    .map(|i| format!("f{}", i + 1))
                    .collect();
                if missing.is_empty() {
                    Some(RcafSheet::Itemized(
                        self.factors.iter().map(|f| f.expect("present")).collect(),
                    ))
                } else {
                    diags.push(Diagnostic::invalid(
                        header,
                        format!("missing rcaf factors: {}", missing.join(", ")),
                    ));
                    None
                }
            }
            (false, None) => {
                diags.push(Diagnostic::invalid(
                    header,
                    "rcaf section needs f1..f14 or total",
                ));
                None
            }
        }
    }
}

fn factor_index(key: &str) -> Option<usize> {
    let n: usize = key.strip_prefix('f')?.parse().ok()?;
    if key.starts_with("f0") || !(1..=RCAF_FACTOR_COUNT).contains(&n) {
        return None;
    }
    Some(n - 1)
}

fn write_rows(out: &mut String, rows: impl Fn(ComponentClass) -> [u64; 3]) {
    for class in ComponentClass::ALL {
        let [l, a, h] = rows(class);
        let _ = writeln!(out, "{} = {l} {a} {h}", class.sheet_key());
    }
}

/// Writes a document in canonical form. Parsing the output yields the same
/// document whenever [`SheetDocument::problems`] is empty.
pub fn render_sheet(doc: &SheetDocument) -> String {
    let mut out = String::new();
    out.push_str("[meta]\n");
    let _ = writeln!(out, "name = {}", doc.name);
    let _ = writeln!(out, "approach = {}", doc.approach);

    match &doc.body {
        SheetBody::Counts(c) => {
            out.push_str("\n[counts]\n");
            write_rows(&mut out, |class| c.row(class));
        }
        SheetBody::Items(items) => {
            out.push_str("\n[items]\n");
            for item in items {
                let basis = match item.basis {
                    ItemBasis::Declared(l) => l.name().to_string(),
                    ItemBasis::Measured { det, refs } => format!("det={det},refs={refs}"),
                };
                let _ = writeln!(out, "item = {} {basis} {}", item.class.code(), item.name);
            }
        }
    }

    out.push_str("\n[rcaf]\n");
    match &doc.rcaf {
        RcafSheet::Declared(t) => {
            let _ = writeln!(out, "total = {t}");
        }
        RcafSheet::Itemized(ratings) => {
            for (i, r) in ratings.iter().enumerate() {
                let _ = writeln!(out, "f{} = {r}", i + 1);
            }
        }
    }

    if let Some(w) = &doc.weights {
        out.push_str("\n[weights]\n");
        write_rows(&mut out, |class| w.row(class));
    }
    out
}
