//! Assembling, rendering and checking the classification table.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::certificates::{classify_row, ClassificationRow, Route, SeriesTag};
use crate::search::{table_key, SearchDiagnostics, SearchOutcome, SeriesFamily};
use crate::wps::{validate_weights, WeightVector};

/// The expected table, in the same layout that `Format::Table` produces.
pub const BUNDLED_GOLDEN: &str = include_str!("../data/main_table.txt");
/// Results known before this classification (rendered as lowercase `y`).
pub const BUNDLED_ANNOTATIONS: &str = include_str!("../data/known.txt");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("table differs from golden:\n{0}")]
    GoldenMismatch(GoldenDiff),
    #[error("unknown format `{0}` (expected table, csv or json)")]
    UnknownFormat(String),
    #[error("{0}")]
    Render(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub weights: WeightVector,
    pub tiger: bool,
    pub ke: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Annotations(pub Vec<Annotation>);

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

impl Annotations {
    /// One line per tuple: four weights followed by `tiger` and/or `ke`.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut out = Vec::new();
        for (line, l) in data_lines(text) {
            let err = |message: String| TableError::Parse { line, message };
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() < 5 {
                return Err(err(format!("expected 4 weights and at least one column, got `{l}`")));
            }
            let mut a = [0i64; 4];
            for (slot, f) in a.iter_mut().zip(&fields[..4]) {
                *slot = f.parse().map_err(|_| err(format!("bad weight `{f}`")))?;
            }
            let weights = validate_weights(a).map_err(|e| err(e.to_string()))?;
            let (mut tiger, mut ke) = (false, false);
            for f in &fields[4..] {
                match *f {
                    "tiger" => tiger = true,
                    "ke" => ke = true,
                    other => return Err(err(format!("unknown column `{other}`"))),
                }
            }
            out.push(Annotation { weights, tiger, ke });
        }
        Ok(Annotations(out))
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ANNOTATIONS).expect("bundled annotations parse")
    }

    pub fn lookup(&self, w: &WeightVector) -> (bool, bool) {
        self.0.iter().find(|a| a.weights == *w).map_or((false, false), |a| (a.tiger, a.ke))
    }
}

/// One line of the rendered table: weights and degree as text so that series
/// rows (`2k+1`, ...) and sporadic rows share a representation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GoldenRow {
    pub series: bool,
    pub weights: [String; 4],
    pub degree: String,
    pub tiger: char,
    pub ke: char,
}

impl fmt::Display for GoldenRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = &self.weights;
        let kind = if self.series { "series" } else { "" };
        write!(f, "{kind:<7}{a0:>3} {a1:>5} {a2:>5} {a3:>5} {:>5}  {}  {}", self.degree, self.tiger, self.ke)
    }
}

pub const TABLE_HEADER: &str = "#      a0    a1    a2    a3     d  tiger/KE";

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>, TableError> {
    let mut out = Vec::new();
    for (line, l) in data_lines(text) {
        let err = |message: String| TableError::Parse { line, message };
        let mut fields: Vec<&str> = l.split_whitespace().collect();
        let series = fields.first() == Some(&"series");
        if series {
            fields.remove(0);
        }
        if fields.len() != 7 {
            return Err(err(format!("expected 7 columns, got {}", fields.len())));
        }
        let mark = |s: &str| -> Result<char, TableError> {
            match s {
                "Y" | "y" | "N" | "?" => Ok(s.chars().next().unwrap()),
                _ => Err(err(format!("bad mark `{s}`"))),
            }
        };
        if !series {
            for f in &fields[..5] {
                f.parse::<u64>().map_err(|_| err(format!("bad number `{f}`")))?;
            }
        }
        out.push(GoldenRow {
            series,
            weights: std::array::from_fn(|i| fields[i].to_string()),
            degree: fields[4].to_string(),
            tiger: mark(fields[5])?,
            ke: mark(fields[6])?,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenDiff {
    /// In the golden table but not produced.
    pub missing: Vec<GoldenRow>,
    /// Produced but not in the golden table.
    pub unexpected: Vec<GoldenRow>,
}

impl GoldenDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

impl fmt::Display for GoldenDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.missing {
            writeln!(f, "- {r}")?;
        }
        for r in &self.unexpected {
            writeln!(f, "+ {r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub family: SeriesFamily,
    /// Verdicts computed at the first member `k = k_min`.
    pub row: ClassificationRow,
}

/// How often the line-noncontainment hypothesis was needed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteStats {
    pub tiger_strengthened: Vec<WeightVector>,
    pub ke_strengthened: Vec<WeightVector>,
    /// Rows where either certificate used the strengthened bound.
    pub rows_using_strengthened: usize,
    /// Count quoted with the original table.
    pub reference_cases: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(TableError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    /// Sporadic rows sorted by `(a3, a2, a1, a0)`.
    pub rows: Vec<ClassificationRow>,
    pub series: Vec<SeriesEntry>,
    pub diagnostics: SearchDiagnostics,
    pub annotations: Annotations,
    pub route_stats: RouteStats,
}

/// Flat record used for CSV output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub kind: String,
    pub a0: String,
    pub a1: String,
    pub a2: String,
    pub a3: String,
    pub d: String,
    pub tiger: char,
    pub ke: char,
    pub tiger_route: String,
    pub ke_route: String,
}

fn route_name(r: Option<Route>) -> &'static str {
    match r {
        Some(Route::PlainBound) => "plain",
        Some(Route::StrengthenedBound) => "strengthened",
        None => "",
    }
}

impl ClassificationTable {
    pub fn build(outcome: SearchOutcome, annotations: Annotations) -> Self {
        let mut sporadic = outcome.sporadic;
        sporadic.sort_by_key(table_key);
        let rows: Vec<ClassificationRow> = sporadic
            .iter()
            .map(|w| {
                let (t, k) = annotations.lookup(w);
                classify_row(w, None).with_known(t, k)
            })
            .collect();
        let series = outcome
            .series
            .iter()
            .filter_map(|family| {
                let w = family.member(family.k_min)?;
                let tag = SeriesTag { forms: family.forms(), degree: family.degree_form_string(), k: family.k_min };
                Some(SeriesEntry { family: *family, row: classify_row(&w, Some(tag)) })
            })
            .collect();

        let mut stats = RouteStats { reference_cases: 5, ..Default::default() };
        for r in &rows {
            let t = r.tiger_certificate.route == Some(Route::StrengthenedBound);
            let k = r.ke_certificate.route == Some(Route::StrengthenedBound);
            if t {
                stats.tiger_strengthened.push(r.weights);
            }
            if k {
                stats.ke_strengthened.push(r.weights);
            }
            stats.rows_using_strengthened += usize::from(t || k);
        }
        ClassificationTable { rows, series, diagnostics: outcome.diagnostics, annotations, route_stats: stats }
    }

    /// Series rows first, then sporadic rows, as in the printed table.
    pub fn golden_rows(&self) -> Vec<GoldenRow> {
        let mut out: Vec<GoldenRow> = self
            .series
            .iter()
            .map(|s| GoldenRow {
                series: true,
                weights: s.family.forms(),
                degree: s.family.degree_form_string(),
                tiger: s.row.tiger_mark(),
                ke: s.row.ke_mark(),
            })
            .collect();
        out.extend(self.rows.iter().map(|r| GoldenRow {
            series: false,
            weights: r.weights.weights().map(|a| a.to_string()),
            degree: r.degree.to_string(),
            tiger: r.tiger_mark(),
            ke: r.ke_mark(),
        }));
        out
    }

    pub fn csv_records(&self) -> Vec<CsvRecord> {
        let series = self.series.iter().zip(self.golden_rows()).map(|(s, g)| (g, &s.row));
        let sporadic =
            self.rows.iter().zip(self.golden_rows().into_iter().skip(self.series.len())).map(|(r, g)| (g, r));
        series
            .chain(sporadic)
            .map(|(g, row)| {
                let [a0, a1, a2, a3] = g.weights;
                let (tiger_route, ke_route) = if g.series {
                    ("witness".to_string(), "series_proof".to_string())
                } else {
                    (route_name(row.tiger_certificate.route).into(), route_name(row.ke_certificate.route).into())
                };
                CsvRecord {
                    kind: if g.series { "series" } else { "sporadic" }.into(),
                    a0,
                    a1,
                    a2,
                    a3,
                    d: g.degree,
                    tiger: g.tiger,
                    ke: g.ke,
                    tiger_route,
                    ke_route,
                }
            })
            .collect()
    }

    pub fn render(&self, format: Format) -> Result<String, TableError> {
        match format {
            Format::Table => {
                let mut s = String::from(TABLE_HEADER);
                s.push('\n');
                for r in self.golden_rows() {
                    s.push_str(&r.to_string());
                    s.push('\n');
                }
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for rec in self.csv_records() {
                    w.serialize(rec).map_err(|e| TableError::Render(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| TableError::Render(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| TableError::Render(e.to_string()))
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| TableError::Render(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    /// Exact comparison with a golden table, ignoring row order.
    pub fn compare_golden(&self, golden: &[GoldenRow]) -> Result<(), TableError> {
        let produced = self.golden_rows();
        let ours: BTreeSet<&GoldenRow> = produced.iter().collect();
        let theirs: BTreeSet<&GoldenRow> = golden.iter().collect();
        let diff = GoldenDiff {
            missing: theirs.difference(&ours).map(|r| (*r).clone()).collect(),
            unexpected: ours.difference(&theirs).map(|r| (*r).clone()).collect(),
        };
        if diff.is_empty() {
            Ok(())
        } else {
            Err(TableError::GoldenMismatch(diff))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_parse() {
        let golden = parse_golden(BUNDLED_GOLDEN).unwrap();
        assert_eq!(golden.len(), 23);
        assert_eq!(golden.iter().filter(|r| r.series).count(), 1);
        assert_eq!(golden.iter().filter(|r| r.tiger == 'N').count(), 12);
        // 18 rows carry Y or y for KE; 15 of them (all but the first three)
        // are reachable by the certificate.
        assert_eq!(golden.iter().filter(|r| !r.series && matches!(r.ke, 'Y' | 'y')).count(), 18);
        let ann = Annotations::bundled();
        assert_eq!(ann.0.len(), 9);
        assert_eq!(ann.lookup(&validate_weights([9, 15, 17, 20]).unwrap()), (false, true));
        assert_eq!(ann.lookup(&validate_weights([2, 3, 5, 9]).unwrap()), (false, false));
    }

    #[test]
    fn golden_row_round_trip() {
        for r in parse_golden(BUNDLED_GOLDEN).unwrap() {
            assert_eq!(parse_golden(&r.to_string()).unwrap(), vec![r]);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_golden("1 1 1 1 3 y"), Err(TableError::Parse { line: 1, .. })));
        assert!(matches!(parse_golden("\n1 1 1 1 3 y x"), Err(TableError::Parse { line: 2, .. })));
        assert!(Annotations::parse("2 2 2 3 tiger").is_err());
        assert!(Annotations::parse("1 1 1 1 metric").is_err());
        assert!("yaml".parse::<Format>().is_err());
    }
}
