//! Classification of anticanonically embedded quasi-smooth log del Pezzo
//! surfaces `X_d ⊂ P(a0, a1, a2, a3)`, `d = a0+a1+a2+a3-1`, together with
//! certificates for the absence of tigers and for Kähler–Einstein metrics.
//!
//! ```
//! use logdp::{classify_all, search::SearchOptions};
//!
//! let table = classify_all(&SearchOptions::default()).unwrap();
//! assert_eq!(table.rows.len(), 22);
//! assert_eq!(table.series.len(), 1);
//! ```

pub mod certificates;
pub mod quasismooth;
pub mod rational;
pub mod search;
pub mod series;
pub mod table;
pub mod wps;

pub use certificates::{
    classify_row, ke_certificate, line_not_contained, multiplicity_bound, tiger_certificate, CertificateResult,
    ClassificationRow, KeVerdict, TigerVerdict,
};
pub use quasismooth::{is_quasismooth, is_quasismooth_candidate, ConditionReport};
pub use rational::Rational;
pub use search::{brute_force_oracle, run_search, SearchBounds, SearchError, SearchOptions, SeriesFamily};
pub use table::{Annotations, ClassificationTable, Format};
pub use wps::{validate_weights, ExponentVector, WeightError, WeightVector};

/// Full pipeline with the bundled annotations.
pub fn classify_all(opts: &SearchOptions) -> Result<ClassificationTable, SearchError> {
    classify_with_annotations(opts, Annotations::bundled())
}

pub fn classify_with_annotations(
    opts: &SearchOptions,
    annotations: Annotations,
) -> Result<ClassificationTable, SearchError> {
    let outcome = run_search(opts)?;
    Ok(ClassificationTable::build(outcome, annotations))
}
