//! Grading measured items into complexity levels.
//!
//! Each component class has two data-element breakpoints, two reference
//! breakpoints and a 3×3 grid. A breakpoint is the first value of the next
//! band: with `det_breaks = 20 51`, 1–19 is band 0, 20–50 band 1 and 51 or
//! more band 2. The grid is indexed `[ref band][det band]`.
//!
//! The shipped defaults follow common counting practice:
//!
//! | class     | det bands          | ref bands       |
//! |-----------|--------------------|-----------------|
//! | ILF, EIF  | 1–19 / 20–50 / 51+ | 1 / 2–5 / 6+    |
//! | EI        | 1–4 / 5–15 / 16+   | 0–1 / 2 / 3+    |
//! | EO, EQ    | 1–5 / 6–19 / 20+   | 0–1 / 2–3 / 4+  |
//!
//! with grid `l l a / l a h / a h h` for every class.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::domain::{ComplexityLevel, ComponentClass, CountSheet, ItemBasis, ItemRecord};
use crate::lexer::{self, Diagnostic, Line};

use ComplexityLevel::{Average as A, High as H, Low as L};

const DEFAULT_GRID: [[ComplexityLevel; 3]; 3] = [[L, L, A], [L, A, H], [A, H, H]];

/// Banding rules for one component class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassBands {
    det_breaks: [u32; 2],
    ref_breaks: [u32; 2],
    grid: [[ComplexityLevel; 3]; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BandsError {
    #[error("det_breaks must be strictly increasing, got {0} {1}")]
    DetBreaks(u32, u32),
    #[error("ref_breaks must be strictly increasing, got {0} {1}")]
    RefBreaks(u32, u32),
    #[error("grid is not monotone at ref band {ref_band}, det band {det_band}")]
    Grid { ref_band: usize, det_band: usize },
}

impl ClassBands {
    pub fn new(
        det_breaks: [u32; 2],
        ref_breaks: [u32; 2],
        grid: [[ComplexityLevel; 3]; 3],
    ) -> Result<Self, Vec<BandsError>> {
        let mut errs = Vec::new();
        if det_breaks[0] >= det_breaks[1] {
            errs.push(BandsError::DetBreaks(det_breaks[0], det_breaks[1]));
        }
        if ref_breaks[0] >= ref_breaks[1] {
            errs.push(BandsError::RefBreaks(ref_breaks[0], ref_breaks[1]));
        }
        for r in 0..3 {
            for d in 0..3 {
                let left_ok = d == 0 || grid[r][d - 1] <= grid[r][d];
                let up_ok = r == 0 || grid[r - 1][d] <= grid[r][d];
                if !(left_ok && up_ok) {
                    errs.push(BandsError::Grid {
                        ref_band: r,
                        det_band: d,
                    });
                }
            }
        }
        if errs.is_empty() {
            Ok(ClassBands {
                det_breaks,
                ref_breaks,
                grid,
            })
        } else {
            Err(errs)
        }
    }

    pub fn det_breaks(&self) -> [u32; 2] {
        self.det_breaks
    }

    pub fn ref_breaks(&self) -> [u32; 2] {
        self.ref_breaks
    }

    pub fn grid(&self) -> [[ComplexityLevel; 3]; 3] {
        self.grid
    }

    fn band(value: u32, breaks: [u32; 2]) -> usize {
        breaks.iter().filter(|&&b| value >= b).count()
    }

    pub fn det_band(&self, det: u32) -> usize {
        Self::band(det, self.det_breaks)
    }

    pub fn ref_band(&self, refs: u32) -> usize {
        Self::band(refs, self.ref_breaks)
    }

    pub fn level(&self, det: u32, refs: u32) -> ComplexityLevel {
        self.grid[self.ref_band(refs)][self.det_band(det)]
    }
}

/// Banding rules for all five classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassificationMatrix {
    classes: [ClassBands; 5],
}

impl ClassificationMatrix {
    pub fn bands(&self, class: ComponentClass) -> &ClassBands {
        &self.classes[class.index()]
    }

    pub fn set_bands(&mut self, class: ComponentClass, bands: ClassBands) {
        self.classes[class.index()] = bands;
    }
}

impl Default for ClassificationMatrix {
    fn default() -> Self {
        let file = ClassBands {
            det_breaks: [20, 51],
            ref_breaks: [2, 6],
            grid: DEFAULT_GRID,
        };
        let input = ClassBands {
            det_breaks: [5, 16],
            ref_breaks: [2, 3],
            grid: DEFAULT_GRID,
        };
        let output = ClassBands {
            det_breaks: [6, 20],
            ref_breaks: [2, 4],
            grid: DEFAULT_GRID,
        };
        ClassificationMatrix {
            classes: [input, output, output, file, file],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("classification not applicable: item {0:?} has a declared level")]
    NotApplicable(String),
}

/// Grades a measured item.
pub fn classify(
    item: &ItemRecord,
    m: &ClassificationMatrix,
) -> Result<ComplexityLevel, ClassifyError> {
    match item.basis {
        ItemBasis::Measured { det, refs } => Ok(m.bands(item.class).level(det, refs)),
        ItemBasis::Declared(_) => Err(ClassifyError::NotApplicable(item.name.clone())),
    }
}

/// The level an item counts at: declared levels pass through, measured
/// ones are classified.
pub fn effective_level(item: &ItemRecord, m: &ClassificationMatrix) -> ComplexityLevel {
    match item.basis {
        ItemBasis::Declared(level) => level,
        ItemBasis::Measured { det, refs } => m.bands(item.class).level(det, refs),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AggregateError {
    #[error("duplicate item name {name:?} in class {class}")]
    DuplicateItem { class: ComponentClass, name: String },
    #[error("count overflow")]
    Overflow,
}

/// Tallies items into a count sheet, one per item. Names must be unique
/// within a class.
pub fn aggregate_items(
    items: &[ItemRecord],
    m: &ClassificationMatrix,
    name: &str,
    approach: &str,
) -> Result<CountSheet, AggregateError> {
    let mut seen = HashSet::new();
    let mut sheet = CountSheet::new(name, approach);
    for item in items {
        if !seen.insert((item.class, item.name.as_str())) {
            return Err(AggregateError::DuplicateItem {
                class: item.class,
                name: item.name.clone(),
            });
        }
        sheet
            .increment(item.class, effective_level(item, m))
            .ok_or(AggregateError::Overflow)?;
    }
    Ok(sheet)
}

fn parse_grid(s: &str, line: usize) -> Result<[[ComplexityLevel; 3]; 3], Diagnostic> {
    let bad = || {
        Diagnostic::syntax(
            line,
            format!("grid must be three `/`-separated rows of three l/a/h letters, found `{s}`"),
        )
    };
    let rows: Vec<&str> = s.split('/').collect();
    if rows.len() != 3 {
        return Err(bad());
    }
    let mut grid = [[L; 3]; 3];
    for (r, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split_whitespace().collect();
        if cells.len() != 3 {
            return Err(bad());
        }
        for (d, cell) in cells.iter().enumerate() {
            let mut chars = cell.chars();
            grid[r][d] = match (chars.next(), chars.next()) {
                (Some(c), None) => ComplexityLevel::from_letter(c).ok_or_else(bad)?,
                _ => return Err(bad()),
            };
        }
    }
    Ok(grid)
}

fn parse_pair(s: &str, line: usize) -> Result<[u32; 2], Diagnostic> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Diagnostic::syntax(
            line,
            format!("expected two integers, found `{s}`"),
        ));
    }
    Ok([
        lexer::parse_uint(parts[0], line)?,
        lexer::parse_uint(parts[1], line)?,
    ])
}

#[derive(Default)]
struct PendingBands {
    header_line: usize,
    det_breaks: Option<[u32; 2]>,
    ref_breaks: Option<[u32; 2]>,
    grid: Option<[[ComplexityLevel; 3]; 3]>,
    broken: bool,
}

/// Reads a matrix override file made of `[matrix.<CLASS>]` sections, each
/// with `det_breaks`, `ref_breaks` and `grid`. Classes without a section
/// keep their default bands.
pub fn parse_matrix(text: &str) -> Result<ClassificationMatrix, Vec<Diagnostic>> {
    let (lines, mut diags) = lexer::lex(text);
    let mut pending: [Option<PendingBands>; 5] = Default::default();
    let mut current: Option<ComponentClass> = None;
    let mut skipping = false;

    for line in lines {
        match line {
            Line::Section { name, line } => {
                let class = name
                    .strip_prefix("matrix.")
                    .and_then(ComponentClass::from_code);
                match class {
                    Some(c) if pending[c.index()].is_some() => {
                        diags.push(Diagnostic::invalid(
                            line,
                            format!("duplicate section [{name}]"),
                        ));
                        current = None;
                        skipping = true;
                    }
                    Some(c) => {
                        pending[c.index()] = Some(PendingBands {
                            header_line: line,
                            ..Default::default()
                        });
                        current = Some(c);
                        skipping = false;
                    }
                    None => {
                        diags.push(Diagnostic::syntax(
                            line,
                            format!("unknown section [{name}]"),
                        ));
                        current = None;
                        skipping = true;
                    }
                }
            }
            Line::Entry { key, value, line } => {
                let Some(class) = current else {
                    if !skipping {
                        diags.push(Diagnostic::syntax(line, "entry outside of any section"));
                    }
                    continue;
                };
                let p = pending[class.index()].as_mut().expect("section opened");
                let dup = |diags: &mut Vec<Diagnostic>| {
                    diags.push(Diagnostic::invalid(line, format!("duplicate key `{key}`")))
                };
                let parsed = match key {
                    "det_breaks" if p.det_breaks.is_some() => {
                        dup(&mut diags);
                        continue;
                    }
                    "ref_breaks" if p.ref_breaks.is_some() => {
                        dup(&mut diags);
                        continue;
                    }
                    "grid" if p.grid.is_some() => {
                        dup(&mut diags);
                        continue;
                    }
                    "det_breaks" => parse_pair(value, line).map(|v| p.det_breaks = Some(v)),
                    "ref_breaks" => parse_pair(value, line).map(|v| p.ref_breaks = Some(v)),
                    "grid" => parse_grid(value, line).map(|g| p.grid = Some(g)),
                    _ => Err(Diagnostic::syntax(line, format!("unknown key `{key}`"))),
                };
                if let Err(d) = parsed {
                    p.broken = true;
                    diags.push(d);
                }
            }
        }
    }

    let mut matrix = ClassificationMatrix::default();
    for class in ComponentClass::ALL {
        let Some(p) = &pending[class.index()] else {
            continue;
        };
        if p.broken {
            continue;
        }
        match (p.det_breaks, p.ref_breaks, p.grid) {
            (Some(d), Some(r), Some(g)) => {
                match ClassBands::new(d, r, g) {
                    Ok(b) => matrix.set_bands(class, b),
                    Err(errs) => diags.extend(errs.into_iter().map(|e| {
                        Diagnostic::invalid(p.header_line, format!("{}: {e}", class.code()))
                    })),
                }
            }
            _ => diags.push(Diagnostic::invalid(
                p.header_line,
                format!(
                    "[matrix.{}] needs det_breaks, ref_breaks and grid",
                    class.code()
                ),
            )),
        }
    }

    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(matrix)
    }
}

/// Writes a matrix in the override file format.
pub fn render_matrix(m: &ClassificationMatrix) -> String {
    let mut out = String::new();
    for class in ComponentClass::ALL {
        let b = m.bands(class);
        let grid = b
            .grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|l| l.letter().to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" / ");
        let _ = writeln!(out, "[matrix.{}]", class.code());
        let _ = writeln!(out, "det_breaks = {} {}", b.det_breaks[0], b.det_breaks[1]);
        let _ = writeln!(out, "ref_breaks = {} {}", b.ref_breaks[0], b.ref_breaks[1]);
        let _ = writeln!(out, "grid = {grid}");
        if class != ComponentClass::ExternalInterfaceFile {
            out.push('\n');
        }
    }
    out
}
