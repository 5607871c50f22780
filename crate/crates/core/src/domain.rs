//! Value types shared by every stage of a function point count.
//!
//! A count is described by a [`CountSheet`] (how many components of each
//! class were found at each complexity level), a [`Weights`] table that
//! converts those counts into crude function points, and an [`RcafSheet`]
//! holding the fourteen project-characteristic ratings. All of these are
//! plain immutable values.

use std::fmt;

/// The five kinds of user-visible function that are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentClass {
    /// Moves data into the application.
    ExternalInput,
    /// Moves data out to the user, with some processing.
    ExternalOutput,
    /// Moves data out to the user without processing (online query).
    ExternalQuery,
    /// Data kept and maintained inside the application.
    InternalLogicalFile,
    /// Data used by the application but maintained elsewhere.
    ExternalInterfaceFile,
}

impl ComponentClass {
    pub const ALL: [ComponentClass; 5] = [
        ComponentClass::ExternalInput,
        ComponentClass::ExternalOutput,
        ComponentClass::ExternalQuery,
        ComponentClass::InternalLogicalFile,
        ComponentClass::ExternalInterfaceFile,
    ];

    /// Row index into a 5×3 table.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Short code used in item lines: `EI`, `EO`, `EQ`, `ILF`, `EIF`.
    pub fn code(self) -> &'static str {
        match self {
            ComponentClass::ExternalInput => "EI",
            ComponentClass::ExternalOutput => "EO",
            ComponentClass::ExternalQuery => "EQ",
            ComponentClass::InternalLogicalFile => "ILF",
            ComponentClass::ExternalInterfaceFile => "EIF",
        }
    }

    /// Upper-case tag, e.g. `EXTERNAL_INPUT`.
    pub fn tag(self) -> &'static str {
        match self {
            ComponentClass::ExternalInput => "EXTERNAL_INPUT",
            ComponentClass::ExternalOutput => "EXTERNAL_OUTPUT",
            ComponentClass::ExternalQuery => "EXTERNAL_QUERY",
            ComponentClass::InternalLogicalFile => "INTERNAL_LOGICAL_FILE",
            ComponentClass::ExternalInterfaceFile => "EXTERNAL_INTERFACE_FILE",
        }
    }

    /// Key used in the `[counts]` and `[weights]` sections.
    pub fn sheet_key(self) -> &'static str {
        match self {
            ComponentClass::ExternalInput => "input",
            ComponentClass::ExternalOutput => "output",
            ComponentClass::ExternalQuery => "query",
            ComponentClass::InternalLogicalFile => "file",
            ComponentClass::ExternalInterfaceFile => "interface",
        }
    }

    /// Row label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            ComponentClass::ExternalInput => "Input",
            ComponentClass::ExternalOutput => "Output",
            ComponentClass::ExternalQuery => "Online Query",
            ComponentClass::InternalLogicalFile => "Logic File",
            ComponentClass::ExternalInterfaceFile => "External Interface",
        }
    }

    /// Logical files are graded by referenced entity types, transactions by
    /// referenced files.
    pub fn is_file(self) -> bool {
        matches!(
            self,
            ComponentClass::InternalLogicalFile | ComponentClass::ExternalInterfaceFile
        )
    }

    /// Parses a short code, case-insensitively.
    pub fn from_code(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(s))
    }

    pub fn from_sheet_key(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.sheet_key() == s)
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Complexity grade of a single component. Ordered `Low < Average < High`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexityLevel {
    Low,
    Average,
    High,
}

impl ComplexityLevel {
    pub const ALL: [ComplexityLevel; 3] = [
        ComplexityLevel::Low,
        ComplexityLevel::Average,
        ComplexityLevel::High,
    ];

    /// Column index into a 5×3 table.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Lower-case name as written in sheet files.
    pub fn name(self) -> &'static str {
        match self {
            ComplexityLevel::Low => "low",
            ComplexityLevel::Average => "average",
            ComplexityLevel::High => "high",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ComplexityLevel::Low => "LOW",
            ComplexityLevel::Average => "AVERAGE",
            ComplexityLevel::High => "HIGH",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ComplexityLevel::Low => "Low",
            ComplexityLevel::Average => "Average",
            ComplexityLevel::High => "High",
        }
    }

    /// Single letter used in classification grids.
    pub fn letter(self) -> char {
        match self {
            ComplexityLevel::Low => 'l',
            ComplexityLevel::Average => 'a',
            ComplexityLevel::High => 'h',
        }
    }

    /// Parses `low`, `average` or `high`, case-insensitively.
    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.letter() == c.to_ascii_lowercase())
    }
}

impl fmt::Display for ComplexityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A possibly incomplete weight table, as read from configuration.
///
/// Use [`validate_weights`] to turn it into a [`Weights`] table on which
/// every lookup succeeds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightMatrix {
    cells: [[Option<u64>; 3]; 5],
}

impl WeightMatrix {
    /// A matrix with no entries at all.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a complete matrix from rows in [`ComponentClass::ALL`] order,
    /// each row being `[low, average, high]`.
    pub fn from_rows(rows: [[u64; 3]; 5]) -> Self {
        let mut m = Self::empty();
        for class in ComponentClass::ALL {
            m.set_row(class, rows[class.index()]);
        }
        m
    }

    pub fn get(&self, class: ComponentClass, level: ComplexityLevel) -> Option<u64> {
        self.cells[class.index()][level.index()]
    }

    pub fn set(&mut self, class: ComponentClass, level: ComplexityLevel, weight: u64) {
        self.cells[class.index()][level.index()] = Some(weight);
    }

    pub fn set_row(&mut self, class: ComponentClass, row: [u64; 3]) {
        self.cells[class.index()] = row.map(Some);
    }

    pub fn clear(&mut self, class: ComponentClass, level: ComplexityLevel) {
        self.cells[class.index()][level.index()] = None;
    }

    pub fn clear_row(&mut self, class: ComponentClass) {
        self.cells[class.index()] = [None; 3];
    }
}

/// The standard weighting factors.
///
/// | class              | low | average | high |
/// |--------------------|-----|---------|------|
/// | input              | 3   | 4       | 6    |
/// | output             | 4   | 5       | 7    |
/// | online query       | 3   | 4       | 6    |
/// | logical file       | 7   | 10      | 15   |
/// | external interface | 5   | 7       | 10   |
pub fn default_weights() -> WeightMatrix {
    WeightMatrix::from_rows(DEFAULT_WEIGHT_ROWS)
}

const DEFAULT_WEIGHT_ROWS: [[u64; 3]; 5] =
    [[3, 4, 6], [4, 5, 7], [3, 4, 6], [7, 10, 15], [5, 7, 10]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightViolationKind {
    Missing,
    NotPositive,
    NotMonotone,
}

/// One reason a [`WeightMatrix`] is not usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightViolation {
    pub class: ComponentClass,
    pub level: ComplexityLevel,
    pub kind: WeightViolationKind,
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WeightViolationKind::Missing => {
                write!(f, "missing entries: {} {}", self.class, self.level)
            }
            WeightViolationKind::NotPositive => {
                write!(
                    f,
                    "weight must be at least 1: {} {}",
                    self.class, self.level
                )
            }
            WeightViolationKind::NotMonotone => write!(
                f,
                "row not monotone for {}: {} is below the previous level",
                self.class, self.level
            ),
        }
    }
}

/// A complete, validated weight table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weights {
    rows: [[u64; 3]; 5],
}

impl Weights {
    pub fn weight(&self, class: ComponentClass, level: ComplexityLevel) -> u64 {
        self.rows[class.index()][level.index()]
    }

    pub fn row(&self, class: ComponentClass) -> [u64; 3] {
        self.rows[class.index()]
    }

    pub fn to_matrix(&self) -> WeightMatrix {
        WeightMatrix::from_rows(self.rows)
    }
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            rows: DEFAULT_WEIGHT_ROWS,
        }
    }
}

/// Checks completeness, positivity and row monotonicity. Every offending
/// cell is reported.
pub fn validate_weights(m: &WeightMatrix) -> Result<Weights, Vec<WeightViolation>> {
    let mut violations = Vec::new();
    let mut rows = [[0u64; 3]; 5];
    for class in ComponentClass::ALL {
        let mut prev: Option<u64> = None;
        for level in ComplexityLevel::ALL {
            let kind = match m.get(class, level) {
                None => Some(WeightViolationKind::Missing),
                Some(0) => Some(WeightViolationKind::NotPositive),
                Some(w) if prev.is_some_and(|p| w < p) => Some(WeightViolationKind::NotMonotone),
                Some(_) => None,
            };
            if let Some(w) = m.get(class, level) {
                rows[class.index()][level.index()] = w;
                prev = Some(w);
            }
            if let Some(kind) = kind {
                violations.push(WeightViolation { class, level, kind });
            }
        }
    }
    if violations.is_empty() {
        Ok(Weights { rows })
    } else {
        Err(violations)
    }
}

/// Component counts per class and complexity level, plus descriptive
/// metadata. Absent cells are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountSheet {
    pub name: String,
    pub approach: String,
    counts: [[u64; 3]; 5],
}

impl CountSheet {
    pub fn new(name: impl Into<String>, approach: impl Into<String>) -> Self {
        CountSheet {
            name: name.into(),
            approach: approach.into(),
            counts: [[0; 3]; 5],
        }
    }

    /// Builds a sheet from rows in [`ComponentClass::ALL`] order.
    pub fn from_rows(
        name: impl Into<String>,
        approach: impl Into<String>,
        rows: [[u64; 3]; 5],
    ) -> Self {
        CountSheet {
            counts: rows,
            ..CountSheet::new(name, approach)
        }
    }

    pub fn count(&self, class: ComponentClass, level: ComplexityLevel) -> u64 {
        self.counts[class.index()][level.index()]
    }

    pub fn row(&self, class: ComponentClass) -> [u64; 3] {
        self.counts[class.index()]
    }

    pub fn set(&mut self, class: ComponentClass, level: ComplexityLevel, n: u64) {
        self.counts[class.index()][level.index()] = n;
    }

    pub fn set_row(&mut self, class: ComponentClass, row: [u64; 3]) {
        self.counts[class.index()] = row;
    }

    /// Adds one to a cell. Returns `None` on overflow.
    pub fn increment(&mut self, class: ComponentClass, level: ComplexityLevel) -> Option<()> {
        let cell = &mut self.counts[class.index()][level.index()];
        *cell = cell.checked_add(1)?;
        Some(())
    }

    pub fn rows(&self) -> [[u64; 3]; 5] {
        self.counts
    }

    /// Number of counted components across all cells.
    pub fn total_items(&self) -> u128 {
        self.counts.iter().flatten().map(|&n| n as u128).sum()
    }
}

/// How an item's complexity is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemBasis {
    /// The analyst assigned the level directly.
    Declared(ComplexityLevel),
    /// Raw measures to be graded by a classification matrix. `refs` counts
    /// referenced entity types for files and referenced files for
    /// transactions.
    Measured { det: u32, refs: u32 },
}

/// One named functional component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemRecord {
    pub name: String,
    pub class: ComponentClass,
    pub basis: ItemBasis,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("item {name:?}: data element count must be at least 1")]
pub struct ZeroDetError {
    pub name: String,
}

impl ItemRecord {
    pub fn declared(
        name: impl Into<String>,
        class: ComponentClass,
        level: ComplexityLevel,
    ) -> Self {
        ItemRecord {
            name: name.into(),
            class,
            basis: ItemBasis::Declared(level),
        }
    }

    pub fn measured(
        name: impl Into<String>,
        class: ComponentClass,
        det: u32,
        refs: u32,
    ) -> Result<Self, ZeroDetError> {
        let name = name.into();
        if det == 0 {
            return Err(ZeroDetError { name });
        }
        Ok(ItemRecord {
            name,
            class,
            basis: ItemBasis::Measured { det, refs },
        })
    }
}

/// Number of project characteristics rated in an RCAF assessment.
pub const RCAF_FACTOR_COUNT: usize = 14;
/// Highest rating for a single characteristic.
pub const RCAF_MAX_RATING: u32 = 5;
/// Highest possible RCAF total.
pub const RCAF_MAX_TOTAL: u32 = RCAF_FACTOR_COUNT as u32 * RCAF_MAX_RATING;

/// Subjects rated in an RCAF assessment; `f1` is index 0.
pub const RCAF_SUBJECTS: [&str; RCAF_FACTOR_COUNT] = [
    "The level of recovery reliability complexity",
    "The level of data communication complexity",
    "The level of distributed processing complexity",
    "Level of the need for performance complexity",
    "The level of operating environment demand",
    "The level of developer knowledge needs",
    "The level of updating the master file complexity",
    "The level of installation complexity",
    "The level of input, output, online query and file application complexity",
    "The level of data processing complexity",
    "The improbability level of reuse code",
    "The level of customer organization variation",
    "The extent of possible changes",
    "Level of the ease of use demand",
];

/// An RCAF assessment: either fourteen ratings or just the total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RcafSheet {
    Itemized(Vec<u32>),
    Declared(u32),
}

impl RcafSheet {
    /// Sum of the ratings, or the declared total. Not range-checked.
    pub fn raw_total(&self) -> u64 {
        match self {
            RcafSheet::Itemized(r) => r.iter().map(|&x| x as u64).sum(),
            RcafSheet::Declared(t) => *t as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RcafViolation {
    #[error("expected {RCAF_FACTOR_COUNT} factor ratings, found {0}")]
    FactorCount(usize),
    /// `factor` is 1-based.
    #[error("rating out of range 0..5: f{factor} = {rating}")]
    RatingOutOfRange { factor: usize, rating: u32 },
    #[error("rcaf total out of range 0..70: {0}")]
    TotalOutOfRange(u64),
}

/// An RCAF total known to lie in `0..=70`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rcaf(u32);

impl Rcaf {
    pub fn new(total: u32) -> Result<Self, RcafViolation> {
        if total > RCAF_MAX_TOTAL {
            Err(RcafViolation::TotalOutOfRange(total as u64))
        } else {
            Ok(Rcaf(total))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Rcaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Checks an assessment and returns its total.
pub fn validate_rcaf(r: &RcafSheet) -> Result<Rcaf, Vec<RcafViolation>> {
    let mut violations = Vec::new();
    match r {
        RcafSheet::Itemized(ratings) => {
            if ratings.len() != RCAF_FACTOR_COUNT {
                violations.push(RcafViolation::FactorCount(ratings.len()));
            }
            for (i, &rating) in ratings.iter().enumerate() {
                if rating > RCAF_MAX_RATING {
                    violations.push(RcafViolation::RatingOutOfRange {
                        factor: i + 1,
                        rating,
                    });
                }
            }
        }
        RcafSheet::Declared(t) => {
            if *t > RCAF_MAX_TOTAL {
                violations.push(RcafViolation::TotalOutOfRange(*t as u64));
            }
        }
    }
    if violations.is_empty() {
        // in range: at most 14 * 5
        Ok(Rcaf(r.raw_total() as u32))
    } else {
        Err(violations)
    }
}

/// A function point value held in exact hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FpCenti(pub u64);

impl fmt::Display for FpCenti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

/// A signed difference in hundredths. Displays with an explicit sign unless
/// zero: `+6.29`, `-6.29`, `0.00`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CentiDelta(pub i128);

impl CentiDelta {
    pub fn between(from: FpCenti, to: FpCenti) -> Self {
        CentiDelta(to.0 as i128 - from.0 as i128)
    }
}

impl fmt::Display for CentiDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.0.signum() {
            1 => "+",
            -1 => "-",
            _ => "",
        };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

/// Points contributed by one component class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassPoints {
    pub class: ComponentClass,
    pub counts: [u64; 3],
    pub weights: [u64; 3],
    /// `count × weight` per level.
    pub points: [u64; 3],
    /// Sum of `points`.
    pub sum: u64,
}

/// Per-class crude function points and their total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfpBreakdown {
    pub classes: [ClassPoints; 5],
    pub cfp: u64,
}

impl CfpBreakdown {
    pub fn class(&self, class: ComponentClass) -> &ClassPoints {
        &self.classes[class.index()]
    }
}

/// A finished estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpResult {
    pub name: String,
    pub approach: String,
    pub breakdown: CfpBreakdown,
    pub rcaf: Rcaf,
    /// Always `cfp × (65 + rcaf)`.
    pub fp: FpCenti,
}

impl FpResult {
    pub fn cfp(&self) -> u64 {
        self.breakdown.cfp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComplexityLevel::*;
    use ComponentClass::*;

    #[test]
    fn default_weights_match_standard_table() {
        let w = validate_weights(&default_weights()).unwrap();
        assert_eq!(w.weight(ExternalInput, Low), 3);
        assert_eq!(w.weight(InternalLogicalFile, High), 15);
        assert_eq!(w.weight(ExternalInterfaceFile, Average), 7);
        assert_eq!(w, Weights::default());
        assert_eq!(default_weights(), default_weights());
        let all: Vec<u64> = ComponentClass::ALL.iter().flat_map(|&c| w.row(c)).collect();
        assert_eq!(all, [3, 4, 6, 4, 5, 7, 3, 4, 6, 7, 10, 15, 5, 7, 10]);
    }

    #[test]
    fn non_monotone_row_is_reported() {
        let mut m = default_weights();
        m.set(ExternalInput, Low, 6);
        m.set(ExternalInput, High, 3);
        let errs = validate_weights(&m).unwrap_err();
        assert!(errs
            .iter()
            .all(|v| v.class == ExternalInput && v.kind == WeightViolationKind::NotMonotone));
        assert!(errs[0]
            .to_string()
            .contains("row not monotone for EXTERNAL_INPUT"));
    }

    #[test]
    fn missing_row_is_reported_per_cell() {
        let mut m = default_weights();
        m.clear_row(ExternalInterfaceFile);
        let errs = validate_weights(&m).unwrap_err();
        assert_eq!(errs.len(), 3);
        for (v, level) in errs.iter().zip(ComplexityLevel::ALL) {
            assert_eq!(v.class, ExternalInterfaceFile);
            assert_eq!(v.level, level);
            assert!(v.to_string().starts_with("missing entries"));
        }
    }

    #[test]
    fn zero_weight_rejected() {
        let mut m = default_weights();
        m.set(ExternalQuery, Low, 0);
        let errs = validate_weights(&m).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, WeightViolationKind::NotPositive);
    }

    #[test]
    fn rcaf_validation() {
        assert_eq!(
            validate_rcaf(&RcafSheet::Itemized(vec![0; 14]))
                .unwrap()
                .get(),
            0
        );
        assert_eq!(
            validate_rcaf(&RcafSheet::Itemized(vec![5; 14]))
                .unwrap()
                .get(),
            70
        );
        let mut r = vec![1; 14];
        r[2] = 7;
        let errs = validate_rcaf(&RcafSheet::Itemized(r)).unwrap_err();
        assert_eq!(
            errs,
            vec![RcafViolation::RatingOutOfRange {
                factor: 3,
                rating: 7
            }]
        );
        assert!(errs[0].to_string().contains("rating out of range 0..5"));
        assert_eq!(validate_rcaf(&RcafSheet::Declared(53)).unwrap().get(), 53);
        assert!(validate_rcaf(&RcafSheet::Declared(71)).is_err());
        assert_eq!(
            validate_rcaf(&RcafSheet::Itemized(vec![1; 13])).unwrap_err(),
            vec![RcafViolation::FactorCount(13)]
        );
    }

    #[test]
    fn centi_display() {
        assert_eq!(FpCenti(17464).to_string(), "174.64");
        assert_eq!(FpCenti(0).to_string(), "0.00");
        assert_eq!(FpCenti(5).to_string(), "0.05");
        assert_eq!(CentiDelta(629).to_string(), "+6.29");
        assert_eq!(CentiDelta(-629).to_string(), "-6.29");
        assert_eq!(CentiDelta(0).to_string(), "0.00");
        assert_eq!(CentiDelta(-7).to_string(), "-0.07");
    }

    #[test]
    fn measured_item_requires_det() {
        assert!(ItemRecord::measured("x", InternalLogicalFile, 0, 1).is_err());
        assert!(ItemRecord::measured("x", InternalLogicalFile, 1, 0).is_ok());
    }

    #[test]
    fn class_and_level_codes_parse() {
        for c in ComponentClass::ALL {
            assert_eq!(ComponentClass::from_code(c.code()), Some(c));
            assert_eq!(ComponentClass::from_sheet_key(c.sheet_key()), Some(c));
        }
        for l in ComplexityLevel::ALL {
            assert_eq!(ComplexityLevel::from_name(l.name()), Some(l));
            assert_eq!(ComplexityLevel::from_letter(l.letter()), Some(l));
        }
        assert!(Low < Average && Average < High);
    }
}
