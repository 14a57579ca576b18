//! Sufficient conditions for "no tiger" and for the existence of a
//! Kähler–Einstein metric, decided by exact integer comparisons.
//!
//! Both rest on the multiplicity estimate for subvarieties of weighted
//! projective space: if `Z ⊂ P(a0..an)` has dimension `dim`, then at any
//! point of any orbifold chart
//!
//! ```text
//! mult Z_i <= (a_n * ... * a_{n-dim}) * (Z . O(1)^dim)
//! ```
//!
//! and the smallest factor `a_{n-dim}` may be replaced by `a_{n-dim-1}` when
//! `Z` is not the coordinate subspace `x_0 = ... = x_{n-dim-1} = 0`.
//! A divisor `D ≡ -K_X` on `X_d` is a curve of degree `d/(a0 a1 a2 a3)`, so its
//! multiplicity is at most `d/(a0 a1)` (or `d/(a0 a2)` if `X` does not contain
//! the line `x0 = x1 = 0`). The pair is klt once this is at most 1, and
//! `(X, (2+ε)/3 D)` is klt once it is below `3/2`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::wps::{has_monomial_supported_on, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("cycle dimension {dim} is out of range for P^{n}")]
    DimensionOutOfRange { dim: usize, n: usize },
    #[error("weights must be positive and sorted ascending")]
    InvalidWeights,
    #[error("cycle degree must be positive")]
    NonPositiveDegree,
}

/// Upper bound for the multiplicity of a `cycle_dim`-dimensional cycle of the
/// given degree at any point of an orbifold chart of `P(weights)`.
pub fn multiplicity_bound(
    weights: &[u64],
    cycle_dim: usize,
    cycle_degree: &Rational,
    strengthened: bool,
) -> Result<Rational, CertificateError> {
    if weights.is_empty() || weights.contains(&0) || weights.windows(2).any(|p| p[0] > p[1]) {
        return Err(CertificateError::InvalidWeights);
    }
    let n = weights.len() - 1;
    if cycle_dim >= n {
        return Err(CertificateError::DimensionOutOfRange { dim: cycle_dim, n });
    }
    if !cycle_degree.is_positive() {
        return Err(CertificateError::NonPositiveDegree);
    }
    // a_n ... a_{n-dim}
    let mut factors: Vec<u64> = weights[n - cycle_dim..].to_vec();
    if strengthened {
        factors[0] = weights[n - cycle_dim - 1];
    }
    let product: BigInt = factors.iter().map(|&a| BigInt::from(a)).product();
    Ok(Rational::from_big(product, BigInt::from(1)) * cycle_degree)
}

/// The general `X_d` does not contain the line `x0 = x1 = 0` iff its equation
/// has a monomial in `x2, x3` alone.
pub fn line_not_contained(w: &WeightVector) -> bool {
    has_monomial_supported_on(w, w.degree() as i64, &[2, 3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Uses the factor `a1`.
    PlainBound,
    /// Uses `a2`; needs the line `x0 = x1 = 0` to be off `X`.
    StrengthenedBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
        })
    }
}

/// `prod(lhs) relation prod(rhs)` over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub route: Route,
    pub lhs: Vec<u64>,
    pub relation: Relation,
    pub rhs: Vec<u64>,
    pub holds: bool,
    /// For example `2*25 < 3*3*7`.
    pub expression: String,
    /// The same with both sides multiplied out, e.g. `50 < 63`.
    pub evaluated: String,
}

fn product(xs: &[u64]) -> u128 {
    xs.iter().map(|&x| x as u128).product()
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join("*")
}

impl Comparison {
    fn new(route: Route, lhs: Vec<u64>, relation: Relation, rhs: Vec<u64>) -> Self {
        let expression = format!("{} {} {}", join(&lhs), relation, join(&rhs));
        let evaluated = format!("{} {} {}", product(&lhs), relation, product(&rhs));
        let mut c = Comparison { route, lhs, relation, rhs, holds: false, expression, evaluated };
        c.holds = c.evaluate();
        c
    }

    /// Recomputes the comparison from the stored factors.
    pub fn evaluate(&self) -> bool {
        let (l, r) = (product(&self.lhs), product(&self.rhs));
        match self.relation {
            Relation::Le => l <= r,
            Relation::Lt => l < r,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.expression, self.evaluated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateResult {
    pub verdict: Verdict,
    /// Route of the successful comparison; `None` when nothing was certified.
    pub route: Option<Route>,
    pub line_not_contained: bool,
    /// Comparisons in the order they were tried. The last one decides.
    pub comparisons: Vec<Comparison>,
}

impl CertificateResult {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn derivation(&self) -> &Comparison {
        self.comparisons.last().expect("at least one comparison")
    }

    /// Certified results must re-evaluate to true.
    pub fn is_consistent(&self) -> bool {
        match self.verdict {
            Verdict::Certified => self.derivation().evaluate() && self.route == Some(self.derivation().route),
            Verdict::Unknown => self.route.is_none() && self.comparisons.iter().all(|c| !c.evaluate()),
        }
    }
}

impl fmt::Display for CertificateResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.verdict, self.route) {
            (Verdict::Certified, Some(Route::PlainBound)) => write!(f, "Certified(Plain: {})", self.derivation()),
            (Verdict::Certified, _) => write!(f, "Certified(Strengthened: {})", self.derivation()),
            (Verdict::Unknown, _) => {
                let tried: Vec<String> = self.comparisons.iter().map(|c| format!("{c} fails")).collect();
                write!(f, "Unknown({})", tried.join("; "))
            }
        }
    }
}

fn certify(w: &WeightVector, build: impl Fn(Route, u64) -> Comparison) -> CertificateResult {
    let [_, a1, a2, _] = w.weights();
    let line_free = line_not_contained(w);
    let mut comparisons = vec![build(Route::PlainBound, a1)];
    if !comparisons[0].holds && line_free {
        comparisons.push(build(Route::StrengthenedBound, a2));
    }
    let last = comparisons.last().unwrap();
    let (verdict, route) = if last.holds { (Verdict::Certified, Some(last.route)) } else { (Verdict::Unknown, None) };
    CertificateResult { verdict, route, line_not_contained: line_free, comparisons }
}

/// `X_d` has no tiger if `d <= a0*a1`, or `d <= a0*a2` when the line
/// `x0 = x1 = 0` is not on `X`.
pub fn tiger_certificate(w: &WeightVector) -> CertificateResult {
    let d = w.degree();
    let a0 = w.weight(0);
    certify(w, |route, a| Comparison::new(route, vec![d], Relation::Le, vec![a0, a]))
}

/// `X_d` admits a Kähler–Einstein metric if `2d < 3*a0*a1`, or
/// `2d < 3*a0*a2` when the line `x0 = x1 = 0` is not on `X`.
pub fn ke_certificate(w: &WeightVector) -> CertificateResult {
    let d = w.degree();
    let a0 = w.weight(0);
    certify(w, |route, a| Comparison::new(route, vec![2, d], Relation::Lt, vec![3, a0, a]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TigerVerdict {
    HasTigerWitness,
    NoTigerCertified,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeVerdict {
    KeCertified,
    KeSeriesProof,
    Unknown,
}

/// Where a table mark comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    CertifiedHere,
    Witness,
    KnownClassical,
    Unknown,
}

/// Marks a row as standing for an affine family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTag {
    pub forms: [String; 4],
    pub degree: String,
    /// Parameter of `weights` in the family.
    pub k: i64,
}

impl SeriesTag {
    /// `X_{8k+4} ⊂ P(2, 2k+1, 2k+1, 4k+1)`, the only family in the table.
    pub fn is_known_family(&self) -> bool {
        self.forms == ["2", "2k+1", "2k+1", "4k+1"] && self.degree == "8k+4"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub weights: WeightVector,
    pub degree: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub series: Option<SeriesTag>,
    pub tiger: TigerVerdict,
    pub ke: KeVerdict,
    pub tiger_certificate: CertificateResult,
    pub ke_certificate: CertificateResult,
    /// External "previously known" annotations; never affect the verdicts.
    pub known_tiger: bool,
    pub known_ke: bool,
}

impl ClassificationRow {
    pub fn with_known(mut self, tiger: bool, ke: bool) -> Self {
        self.known_tiger = tiger;
        self.known_ke = ke;
        self
    }

    pub fn tiger_provenance(&self) -> Provenance {
        match self.tiger {
            TigerVerdict::NoTigerCertified => Provenance::CertifiedHere,
            TigerVerdict::HasTigerWitness => Provenance::Witness,
            TigerVerdict::Unknown if self.known_tiger => Provenance::KnownClassical,
            TigerVerdict::Unknown => Provenance::Unknown,
        }
    }

    pub fn ke_provenance(&self) -> Provenance {
        match self.ke {
            _ if self.known_ke => Provenance::KnownClassical,
            KeVerdict::KeCertified | KeVerdict::KeSeriesProof => Provenance::CertifiedHere,
            KeVerdict::Unknown => Provenance::Unknown,
        }
    }

    /// `N`, `Y`, `y` or `?`. In this column `y`/`Y` mean a tiger exists.
    pub fn tiger_mark(&self) -> char {
        match self.tiger_provenance() {
            Provenance::CertifiedHere => 'N',
            Provenance::Witness => 'Y',
            Provenance::KnownClassical => 'y',
            Provenance::Unknown => '?',
        }
    }

    pub fn ke_mark(&self) -> char {
        match self.ke_provenance() {
            Provenance::KnownClassical => 'y',
            Provenance::CertifiedHere => 'Y',
            _ => '?',
        }
    }
}

/// Assembles the verdicts for one table row. Series rows of the known family
/// get the explicit tiger and the series KE argument; all other rows rely
/// on the two certificates.
pub fn classify_row(w: &WeightVector, series_tag: Option<SeriesTag>) -> ClassificationRow {
    let tiger_cert = tiger_certificate(w);
    let ke_cert = ke_certificate(w);
    let mut tiger = if tiger_cert.is_certified() { TigerVerdict::NoTigerCertified } else { TigerVerdict::Unknown };
    let mut ke = if ke_cert.is_certified() { KeVerdict::KeCertified } else { KeVerdict::Unknown };
    if let Some(tag) = series_tag.as_ref().filter(|t| t.is_known_family() && t.k >= 1) {
        let witness = crate::series::series_tiger_witness(tag.k as u64);
        if witness.anticanonical && witness.exceeds_one {
            tiger = TigerVerdict::HasTigerWitness;
        }
        ke = KeVerdict::KeSeriesProof;
    }
    ClassificationRow {
        weights: *w,
        degree: w.degree(),
        series: series_tag,
        tiger,
        ke,
        tiger_certificate: tiger_cert,
        ke_certificate: ke_cert,
        known_tiger: false,
        known_ke: false,
    }
}
