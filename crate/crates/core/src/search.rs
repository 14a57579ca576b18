//! Enumeration of weight vectors by treating the vertex condition as a
//! linear system in the weights.
//!
//! For every `i` the vertex condition picks a `j = u(i)` and an exponent
//! `m_i` with `m_i*a_i + a_j = d = a0+a1+a2+a3-1`. Written as a matrix
//! equation this is `(M + J + U) a = (-1,-1,-1,-1)^t` with `M = diag(m)`,
//! `J` the all `-1` matrix and `U` the 0/1 matrix with a single unit in every
//! row. For fixed `U` and `m1, m2, m3`, Cramer's rule gives
//!
//! ```text
//! a0 = gamma0 / (m0*alpha + beta),   a_i = (m0*delta_i + gamma_i) / (m0*alpha + beta)
//! ```
//!
//! If `alpha != 0` only finitely many `m0` make `a0` a positive integer. If
//! `alpha == 0` and `beta != 0`, every admissible `m0` gives a solution and the
//! configuration describes a one-parameter series.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quasismooth::is_quasismooth;
use crate::wps::{validate_weights, WeightVector};

/// Raw solution count reported for the finite branch in the literature.
pub const REFERENCE_FINITE_COUNT: usize = 1362;
/// Raw series count reported in the literature.
pub const REFERENCE_SERIES_COUNT: usize = 405;
/// `m3 <= 2` holds for every sorted solution, so that upper bound never
/// signals saturation.
pub const PROVEN_M3_MAX: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("configuration {0} has an undetermined system (alpha = beta = gamma0 = 0)")]
    DegenerateSystem(SearchConfiguration),
    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),
}

/// Inclusive ranges for the exponents `m1, m2, m3` of the vertex monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub m1: (i64, i64),
    pub m2: (i64, i64),
    pub m3: (i64, i64),
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { m1: (1, 14), m2: (1, 6), m3: (1, 2) }
    }
}

impl SearchBounds {
    pub fn ranges(&self) -> [(i64, i64); 3] {
        [self.m1, self.m2, self.m3]
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        for (name, (lo, hi)) in ["m1", "m2", "m3"].iter().zip(self.ranges()) {
            if lo < 1 || hi < lo {
                return Err(SearchError::InvalidBounds(format!("{name}:{lo}..{hi}")));
            }
        }
        Ok(())
    }

    /// Applies `m1:LO..HI,m2:LO..HI,...` on top of `self`; unnamed exponents
    /// keep their current range.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, SearchError> {
        let bad = || SearchError::InvalidBounds(spec.to_string());
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, range) = part.split_once(':').ok_or_else(bad)?;
            let (lo, hi) = range.trim().split_once("..").ok_or_else(bad)?;
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            match name.trim() {
                "m1" => self.m1 = (lo, hi),
                "m2" => self.m2 = (lo, hi),
                "m3" => self.m3 = (lo, hi),
                _ => return Err(bad()),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn configuration_count(&self) -> usize {
        let span = |(lo, hi): (i64, i64)| (hi - lo + 1).max(0) as usize;
        256 * span(self.m1) * span(self.m2) * span(self.m3)
    }

    /// True when a configuration uses the upper end of a range that is not
    /// known to be sufficient.
    pub fn touches_upper_bound(&self, cfg: &SearchConfiguration) -> bool {
        cfg.m[0] == self.m1.1 || cfg.m[1] == self.m2.1 || (cfg.m[2] == self.m3.1 && self.m3.1 < PROVEN_M3_MAX)
    }
}

impl FromStr for SearchBounds {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SearchBounds::default().with_overrides(s)
    }
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m1:{}..{},m2:{}..{},m3:{}..{}", self.m1.0, self.m1.1, self.m2.0, self.m2.1, self.m3.0, self.m3.1)
    }
}

/// How one-parameter families are probed for members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSampling {
    /// Parameter values examined per family.
    pub members: usize,
    /// Largest sub-progression period tried when looking for a family whose
    /// members all pass.
    pub max_period: usize,
    /// Consecutive passing members required before a sub-progression is
    /// accepted as an infinite series.
    pub min_run: usize,
}

impl Default for SeriesSampling {
    fn default() -> Self {
        SeriesSampling { members: 256, max_period: 8, min_run: 16 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub bounds: SearchBounds,
    pub sampling: SeriesSampling,
}

/// One cell of the search: the unit matrix `U`, given by the column of the
/// unit entry in each row, and the exponents `m1, m2, m3`. `m0` stays free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SearchConfiguration {
    pub targets: [usize; 4],
    pub m: [i64; 3],
}

impl fmt::Display for SearchConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u0, u1, u2, u3] = self.targets;
        let [m1, m2, m3] = self.m;
        write!(f, "U=[{u0}{u1}{u2}{u3}] m=(m0,{m1},{m2},{m3})")
    }
}

impl SearchConfiguration {
    pub fn unit_matrix(&self) -> [[i64; 4]; 4] {
        let mut u = [[0; 4]; 4];
        for (row, &col) in self.targets.iter().enumerate() {
            u[row][col] = 1;
        }
        u
    }

    pub fn exponents(&self, m0: i64) -> [i64; 4] {
        [m0, self.m[0], self.m[1], self.m[2]]
    }

    /// `M + J + U` at the given `m0`.
    pub fn matrix(&self, m0: i64) -> [[i64; 4]; 4] {
        let m = self.exponents(m0);
        let u = self.unit_matrix();
        let mut a = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] = if i == j { m[i] } else { 0 } - 1 + u[i][j];
            }
        }
        a
    }

    /// A row with `m_i = 1` and `u(i) != i` reads `a_i + a_j = d`, which
    /// forces the two remaining weights to sum to 1.
    pub fn is_infeasible(&self) -> bool {
        (1..4).any(|i| self.m[i - 1] == 1 && self.targets[i] != i)
    }

    /// Checks `m_i*a_i + a_{u(i)} = a0+a1+a2+a3-1` row by row.
    pub fn is_satisfied_by(&self, a: &[i64; 4], m0: i64) -> bool {
        let d: i64 = a.iter().sum::<i64>() - 1;
        let m = self.exponents(m0);
        (0..4).all(|i| m[i] * a[i] + a[self.targets[i]] == d)
    }
}

/// All 256 unit matrices crossed with the exponent ranges.
pub fn enumerate_configurations(bounds: &SearchBounds) -> impl Iterator<Item = SearchConfiguration> {
    let bounds = *bounds;
    (0..256usize).flat_map(move |code| {
        let targets = [code >> 6 & 3, code >> 4 & 3, code >> 2 & 3, code & 3];
        (bounds.m1.0..=bounds.m1.1).flat_map(move |m1| {
            (bounds.m2.0..=bounds.m2.1).flat_map(move |m2| {
                (bounds.m3.0..=bounds.m3.1).map(move |m3| SearchConfiguration { targets, m: [m1, m2, m3] })
            })
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `alpha != 0`.
    Finite,
    /// `alpha == 0`, `beta != 0`.
    Series,
    /// `alpha == beta == 0`; inconsistent unless `gamma0 == 0`.
    Degenerate,
}

/// Cramer's-rule solution of the system as a function of `m0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicSolution {
    pub alpha: i64,
    pub beta: i64,
    pub gamma0: i64,
    pub delta: [i64; 3],
    pub gamma: [i64; 3],
    pub branch: Branch,
}

impl SymbolicSolution {
    pub fn denominator(&self, m0: i64) -> i64 {
        m0 * self.alpha + self.beta
    }

    /// Numerators of `a0..a3` over the common denominator.
    pub fn numerators(&self, m0: i64) -> [i64; 4] {
        [
            self.gamma0,
            m0 * self.delta[0] + self.gamma[0],
            m0 * self.delta[1] + self.gamma[1],
            m0 * self.delta[2] + self.gamma[2],
        ]
    }

    /// The weights at `m0` if they are all positive integers.
    pub fn positive_integral_at(&self, m0: i64) -> Option<[i64; 4]> {
        let q = self.denominator(m0);
        if q == 0 {
            return None;
        }
        let mut a = [0; 4];
        for (slot, n) in a.iter_mut().zip(self.numerators(m0)) {
            if n % q != 0 || n / q < 1 {
                return None;
            }
            *slot = n / q;
        }
        Some(a)
    }
}

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(m: &[[i64; 4]; 4], row: usize, col: usize) -> [[i64; 3]; 3] {
    let mut out = [[0; 3]; 3];
    for (r, i) in (0..4).filter(|&i| i != row).enumerate() {
        for (c, j) in (0..4).filter(|&j| j != col).enumerate() {
            out[r][c] = m[i][j];
        }
    }
    out
}

fn det4(m: &[[i64; 4]; 4]) -> i64 {
    (0..4).map(|c| if c % 2 == 0 { 1 } else { -1 } * m[0][c] * det3(minor(m, 0, c))).sum()
}

fn with_rhs_column(m: &[[i64; 4]; 4], col: usize) -> [[i64; 4]; 4] {
    let mut out = *m;
    for row in out.iter_mut() {
        row[col] = -1;
    }
    out
}

/// Eliminates `a1, a2, a3` and expresses the solution in `m0`.
///
/// `m0` only occurs in the top-left entry, so every determinant is affine in
/// it and its `m0` coefficient is the lower-right 3x3 minor.
pub fn solve_symbolic(cfg: &SearchConfiguration) -> Result<SymbolicSolution, SearchError> {
    let a = cfg.matrix(0);
    let alpha = det3(minor(&a, 0, 0));
    let beta = det4(&a);
    let gamma0 = det4(&with_rhs_column(&a, 0));
    let mut delta = [0; 3];
    let mut gamma = [0; 3];
    for i in 1..4 {
        let ai = with_rhs_column(&a, i);
        delta[i - 1] = det3(minor(&ai, 0, 0));
        gamma[i - 1] = det4(&ai);
    }
    let branch = match (alpha != 0, beta != 0) {
        (true, _) => Branch::Finite,
        (false, true) => Branch::Series,
        (false, false) if gamma0 == 0 => return Err(SearchError::DegenerateSystem(*cfg)),
        (false, false) => Branch::Degenerate,
    };
    Ok(SymbolicSolution { alpha, beta, gamma0, delta, gamma, branch })
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut p = 1u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            small.push(p as i64);
            if p * p != n {
                large.push((n / p) as i64);
            }
        }
        p += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A finite-branch solution with its originating configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSolution {
    pub config: SearchConfiguration,
    pub m0: i64,
    /// Weights in the order of the system's unknowns.
    pub raw: [i64; 4],
    pub weights: WeightVector,
}

/// All `m0 >= 1` with positive integral weights, before weight validation.
pub fn positive_finite_solutions(sol: &SymbolicSolution) -> Vec<(i64, [i64; 4])> {
    if sol.branch != Branch::Finite || sol.gamma0 == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // m0*alpha + beta = q must divide gamma0; both signs are scanned because
    // the sign of alpha varies between configurations.
    for p in divisors(sol.gamma0) {
        for q in [p, -p] {
            let shifted = q - sol.beta;
            if shifted % sol.alpha != 0 {
                continue;
            }
            let m0 = shifted / sol.alpha;
            if m0 < 1 {
                continue;
            }
            if let Some(a) = sol.positive_integral_at(m0) {
                out.push((m0, a));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Finite-branch solutions whose sorted weights are valid.
pub fn instantiate_finite(sol: &SymbolicSolution, cfg: &SearchConfiguration) -> Vec<FiniteSolution> {
    positive_finite_solutions(sol)
        .into_iter()
        .filter_map(|(m0, raw)| {
            let weights = validate_weights(raw).ok()?;
            Some(FiniteSolution { config: *cfg, m0, raw, weights })
        })
        .collect()
}

/// Weights affine in an integer parameter: `base + step*k` for
/// `k_min <= k <= k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeriesFamily {
    pub base: [i64; 4],
    pub step: [i64; 4],
    pub k_min: i64,
    pub k_max: Option<i64>,
}

fn affine_form(base: i64, step: i64) -> String {
    if step == 0 {
        return base.to_string();
    }
    let coeff = match step {
        1 => String::new(),
        -1 => "-".to_string(),
        s => s.to_string(),
    };
    match base.signum() {
        0 => format!("{coeff}k"),
        1 => format!("{coeff}k+{base}"),
        _ => format!("{coeff}k{base}"),
    }
}

impl SeriesFamily {
    pub fn weights_at(&self, k: i64) -> [i64; 4] {
        std::array::from_fn(|i| self.base[i] + self.step[i] * k)
    }

    pub fn degree_at(&self, k: i64) -> i64 {
        self.weights_at(k).iter().sum::<i64>() - 1
    }

    /// `(base, step)` of the degree `sum(a_i) - 1`.
    pub fn degree_form(&self) -> (i64, i64) {
        (self.base.iter().sum::<i64>() - 1, self.step.iter().sum())
    }

    pub fn contains_parameter(&self, k: i64) -> bool {
        k >= self.k_min && self.k_max.is_none_or(|hi| k <= hi)
    }

    pub fn is_ordered_at(&self, k: i64) -> bool {
        self.weights_at(k).windows(2).all(|p| p[0] <= p[1])
    }

    /// Sorted, validated member at `k`.
    pub fn member(&self, k: i64) -> Option<WeightVector> {
        validate_weights(self.weights_at(k)).ok()
    }

    /// Parameter of `w` in this family, if it is a member in range.
    pub fn parameter_of(&self, w: &WeightVector) -> Option<i64> {
        let target = w.as_i64();
        let i = (0..4).find(|&i| self.step[i] != 0)?;
        let diff = target[i] - self.base[i];
        if diff % self.step[i] != 0 {
            return None;
        }
        let k = diff / self.step[i];
        let mut at = self.weights_at(k);
        at.sort_unstable();
        (self.contains_parameter(k) && at == target).then_some(k)
    }

    /// Members in range with largest weight at most `max_a3`.
    pub fn members_up_to(&self, max_a3: u64) -> Vec<(i64, WeightVector)> {
        let mut out = Vec::new();
        let mut k = self.k_min;
        loop {
            if !self.contains_parameter(k) {
                break;
            }
            let top = *self.weights_at(k).iter().max().unwrap();
            if top > max_a3 as i64 {
                if self.step.iter().all(|&s| s >= 0) {
                    break;
                }
            } else if let Some(w) = self.member(k) {
                out.push((k, w));
            }
            k += 1;
            if self.step.iter().all(|&s| s == 0) {
                break;
            }
        }
        out
    }

    /// Human-readable forms, e.g. `["2", "2k+1", "2k+1", "4k+1"]`.
    pub fn forms(&self) -> [String; 4] {
        std::array::from_fn(|i| affine_form(self.base[i], self.step[i]))
    }

    pub fn degree_form_string(&self) -> String {
        let (b, s) = self.degree_form();
        affine_form(b, s)
    }

    /// Whether every member of `other` is a member of `self`.
    fn contains_family(&self, other: &SeriesFamily) -> bool {
        if other.k_max.is_some() || self.k_max.is_some() {
            return self == other;
        }
        let Some(i) = (0..4).find(|&i| self.step[i] != 0) else { return false };
        if other.step[i] % self.step[i] != 0 {
            return false;
        }
        let ratio = other.step[i] / self.step[i];
        if ratio < 1 || (0..4).any(|j| other.step[j] != ratio * self.step[j]) {
            return false;
        }
        let start = other.weights_at(other.k_min);
        let diff = start[i] - self.base[i];
        if diff % self.step[i] != 0 {
            return false;
        }
        let k = diff / self.step[i];
        k >= self.k_min && self.weights_at(k) == start
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = self.forms();
        write!(f, "({a0},{a1},{a2},{a3}), d={}, k>={}", self.degree_form_string(), self.k_min)?;
        if let Some(hi) = self.k_max {
            write!(f, ", k<={hi}")?;
        }
        Ok(())
    }
}

/// A series-branch configuration restricted to one residue class of `m0`
/// on which all weights are integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSeries {
    pub config: SearchConfiguration,
    /// `m0 = m0_base + m0_step*k`.
    pub m0_base: i64,
    pub m0_step: i64,
    /// Weights in the order of the system's unknowns.
    pub family: SeriesFamily,
}

/// Integral affine families of a series-branch solution, one per admissible
/// residue class of `m0`; families without positive members are dropped.
pub fn instantiate_series(sol: &SymbolicSolution, cfg: &SearchConfiguration) -> Vec<RawSeries> {
    if sol.branch != Branch::Series {
        return Vec::new();
    }
    let beta = sol.beta;
    if sol.gamma0 % beta != 0 || sol.gamma0 / beta < 1 {
        return Vec::new();
    }
    let modulus = beta.abs();
    let mut out = Vec::new();
    for r in 0..modulus {
        let num = sol.numerators(r);
        if num.iter().any(|n| n % beta != 0) {
            continue;
        }
        // m0 = r + |beta|*t
        let base: [i64; 4] = num.map(|n| n / beta);
        let step: [i64; 4] = std::array::from_fn(|i| if i == 0 { 0 } else { sol.delta[i - 1] * modulus / beta });
        // t range from m0 >= 1 and all weights >= 1
        let mut lo = if r >= 1 { 0 } else { 1 };
        let mut hi: Option<i64> = None;
        let mut empty = false;
        for i in 0..4 {
            let (b, s) = (base[i], step[i]);
            match s.cmp(&0) {
                std::cmp::Ordering::Equal => empty |= b < 1,
                std::cmp::Ordering::Greater => lo = lo.max(Integer::div_ceil(&(1 - b), &s)),
                std::cmp::Ordering::Less => {
                    let bound = Integer::div_floor(&(b - 1), &(-s));
                    hi = Some(hi.map_or(bound, |h: i64| h.min(bound)));
                }
            }
        }
        if step.iter().all(|&s| s == 0) {
            // every admissible m0 gives the same tuple
            hi = Some(lo);
        }
        if empty || hi.is_some_and(|h| h < lo) {
            continue;
        }
        out.push(RawSeries {
            config: *cfg,
            m0_base: r,
            m0_step: modulus,
            family: SeriesFamily { base, step, k_min: lo, k_max: hi },
        });
    }
    out
}

/// Sample outcome of a raw family: passing members and any infinite
/// sub-progressions all of whose sampled members pass.
#[derive(Debug, Clone, Default)]
struct SeriesProbe {
    passing: Vec<WeightVector>,
    survivors: Vec<SeriesFamily>,
}

fn canonical_subfamily(base: [i64; 4], step: [i64; 4], verified: usize) -> Option<SeriesFamily> {
    if step.iter().any(|&s| s < 0) {
        return None;
    }
    let mut coords: Vec<(i64, i64)> = step.iter().copied().zip(base.iter().copied()).collect();
    coords.sort_unstable();
    let step: [i64; 4] = std::array::from_fn(|i| coords[i].0);
    let base: [i64; 4] = std::array::from_fn(|i| coords[i].1);
    // shift the parameter so that k = 0 is the first value with all weights
    // positive
    let mut shift = i64::MIN;
    for i in 0..4 {
        if step[i] > 0 {
            shift = shift.max(Integer::div_ceil(&(1 - base[i]), &step[i]));
        }
    }
    let base: [i64; 4] = std::array::from_fn(|i| base[i] + step[i] * shift);
    let mut family = SeriesFamily { base, step, k_min: -shift, k_max: None };
    // members k_min .. k_min+verified-1 are known to pass; extend downwards
    // while members keep passing and stay in ascending order
    let last = family.k_min + verified as i64 - 1;
    let ok = |f: &SeriesFamily, k: i64| f.is_ordered_at(k) && f.member(k).is_some_and(|w| is_quasismooth(&w));
    let mut k = last;
    while k >= 0 && ok(&family, k) {
        k -= 1;
    }
    if k == last {
        return None;
    }
    family.k_min = k + 1;
    Some(family)
}

fn probe_series(raw: &RawSeries, sampling: &SeriesSampling) -> SeriesProbe {
    let fam = &raw.family;
    let last = match fam.k_max {
        Some(hi) => hi.min(fam.k_min + sampling.members as i64 - 1),
        None => fam.k_min + sampling.members as i64 - 1,
    };
    let sample: Vec<Option<WeightVector>> = (fam.k_min..=last).map(|k| fam.member(k).filter(is_quasismooth)).collect();
    let passing: Vec<WeightVector> = sample.iter().flatten().copied().collect();
    let mut survivors = Vec::new();
    if fam.k_max.is_none() && !passing.is_empty() {
        for period in 1..=sampling.max_period {
            for residue in 0..period {
                let sub: Vec<bool> = sample.iter().skip(residue).step_by(period).map(Option::is_some).collect();
                let run = sub.iter().rev().take_while(|&&p| p).count();
                if run < sampling.min_run {
                    continue;
                }
                let start = fam.k_min + (residue + period * (sub.len() - run)) as i64;
                let base = fam.weights_at(start);
                let step = fam.step.map(|s| s * period as i64);
                if let Some(f) = canonical_subfamily(base, step, run) {
                    survivors.push(f);
                }
            }
            if !survivors.is_empty() {
                break;
            }
        }
    }
    SeriesProbe { passing, survivors }
}

/// Counters written to the diagnostics report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    pub bounds: String,
    pub configurations: usize,
    /// Configurations skipped because a row forces two weights to sum to 1.
    pub infeasible_pruned: usize,
    pub finite_configurations: usize,
    pub series_configurations: usize,
    pub degenerate_configurations: usize,
    /// Positive integral finite-branch solutions, one per (configuration, m0).
    pub finite_positive: usize,
    /// Of those, the ones whose sorted weights have coprime triples.
    pub finite_raw: usize,
    /// Of those, the ones already in ascending order.
    pub finite_raw_ascending: usize,
    /// Integral series families, one per (configuration, residue class of m0).
    pub series_raw: usize,
    /// Series-branch configurations with at least one positive member.
    pub series_raw_configurations: usize,
    /// Distinct sorted weight vectors among the finite-branch solutions.
    pub deduped: usize,
    pub final_sporadic: usize,
    pub final_series: usize,
    pub reference_finite_raw: usize,
    pub reference_series_raw: usize,
    pub notes: Vec<String>,
    pub saturation_warnings: Vec<String>,
}

/// Result of the full search before certificates are attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Sorted by `(a3, a2, a1, a0)`.
    pub sporadic: Vec<WeightVector>,
    pub series: Vec<SeriesFamily>,
    pub diagnostics: SearchDiagnostics,
}

impl SearchOutcome {
    /// Sporadic rows and series members with largest weight at most `max_a3`.
    pub fn restricted_to(&self, max_a3: u64) -> BTreeSet<WeightVector> {
        let mut out: BTreeSet<WeightVector> = self.sporadic.iter().copied().filter(|w| w.weight(3) <= max_a3).collect();
        for f in &self.series {
            out.extend(f.members_up_to(max_a3).into_iter().map(|(_, w)| w));
        }
        out
    }

    pub fn series_parameter(&self, w: &WeightVector) -> Option<(usize, i64)> {
        self.series.iter().enumerate().find_map(|(i, f)| f.parameter_of(w).map(|k| (i, k)))
    }
}

/// Ordering used for every emitted table.
pub fn table_key(w: &WeightVector) -> [u64; 4] {
    let [a0, a1, a2, a3] = w.weights();
    [a3, a2, a1, a0]
}

enum ConfigResult {
    Pruned,
    Finite { positive: usize, solutions: Vec<FiniteSolution> },
    Series(Vec<(RawSeries, SeriesProbe)>),
    Degenerate,
}

fn run_configuration(cfg: &SearchConfiguration, sampling: &SeriesSampling) -> Result<ConfigResult, SearchError> {
    if cfg.is_infeasible() {
        return Ok(ConfigResult::Pruned);
    }
    let sol = solve_symbolic(cfg)?;
    Ok(match sol.branch {
        Branch::Finite => {
            let positive = positive_finite_solutions(&sol).len();
            ConfigResult::Finite { positive, solutions: instantiate_finite(&sol, cfg) }
        }
        Branch::Series => ConfigResult::Series(
            instantiate_series(&sol, cfg).into_iter().map(|r| (r, probe_series(&r, sampling))).collect(),
        ),
        Branch::Degenerate => ConfigResult::Degenerate,
    })
}

/// Families on one affine line whose parameter progressions together cover
/// every point from some parameter on are joined into that line. A single
/// configuration only reaches one residue class of the line, so the full
/// family appears as several progressions with different periods.
fn merge_progressions(families: &[(SeriesFamily, bool)]) -> Vec<(SeriesFamily, bool)> {
    // (primitive step, origin) -> (first parameter on the line, period, interior)
    type Progression = (i64, i64, bool);
    let mut lines: BTreeMap<([i64; 4], [i64; 4]), Vec<Progression>> = BTreeMap::new();
    let mut out = families.to_vec();
    for (f, interior) in families {
        if f.k_max.is_some() || f.step == [0; 4] {
            continue;
        }
        let g = f.step.iter().fold(0i64, |acc, &s| acc.gcd(&s.abs()));
        let s0 = f.step.map(|s| s / g);
        let i = (0..4).find(|&i| s0[i] != 0).unwrap();
        let t0 = f.base[i].div_euclid(s0[i]);
        let origin: [i64; 4] = std::array::from_fn(|j| f.base[j] - t0 * s0[j]);
        lines.entry((s0, origin)).or_default().push((t0 + f.k_min * g, g, *interior));
    }
    for ((s0, origin), progs) in lines {
        if progs.len() < 2 {
            continue;
        }
        // the union can only be a progression with the common period
        let p = progs.iter().fold(0i64, |acc, &(_, r, _)| acc.gcd(&r));
        let c = progs[0].0.rem_euclid(p);
        if progs.iter().any(|&(start, _, _)| start.rem_euclid(p) != c) {
            continue;
        }
        let covered = |t: i64| progs.iter().any(|&(start, r, _)| t >= start && (t - start) % r == 0);
        let window = progs.iter().fold(1i64, |acc, &(_, r, _)| acc.lcm(&r));
        let top = progs.iter().map(|q| q.0).max().unwrap();
        if !(top..top + window).step_by(p as usize).all(covered) {
            continue;
        }
        let mut low = top;
        while covered(low - p) {
            low -= p;
        }
        let base = std::array::from_fn(|j| origin[j] + c * s0[j]);
        let step = s0.map(|x| x * p);
        let interior = progs.iter().any(|q| q.2);
        out.push((SeriesFamily { base, step, k_min: (low - c) / p, k_max: None }, interior));
    }
    out
}

/// Enumerate, solve, instantiate, deduplicate and filter.
pub fn run_search(opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let bounds = opts.bounds;
    bounds.validate()?;
    let configs: Vec<SearchConfiguration> = enumerate_configurations(&bounds).collect();
    let results: Vec<ConfigResult> =
        configs.par_iter().map(|cfg| run_configuration(cfg, &opts.sampling)).collect::<Result<_, _>>()?;

    let mut diag = SearchDiagnostics {
        bounds: bounds.to_string(),
        configurations: configs.len(),
        reference_finite_raw: REFERENCE_FINITE_COUNT,
        reference_series_raw: REFERENCE_SERIES_COUNT,
        ..Default::default()
    };
    // candidate -> produced by some configuration away from the upper bounds
    let mut candidates: BTreeMap<WeightVector, bool> = BTreeMap::new();
    let mut finite_distinct: BTreeSet<WeightVector> = BTreeSet::new();
    let mut survivors: Vec<(SeriesFamily, bool)> = Vec::new();

    for (cfg, result) in configs.iter().zip(results) {
        let interior = !bounds.touches_upper_bound(cfg);
        match result {
            ConfigResult::Pruned => diag.infeasible_pruned += 1,
            ConfigResult::Degenerate => diag.degenerate_configurations += 1,
            ConfigResult::Finite { positive, solutions } => {
                diag.finite_configurations += 1;
                diag.finite_positive += positive;
                diag.finite_raw += solutions.len();
                for s in solutions {
                    if s.raw.windows(2).all(|p| p[0] <= p[1]) {
                        diag.finite_raw_ascending += 1;
                    }
                    finite_distinct.insert(s.weights);
                    if is_quasismooth(&s.weights) {
                        *candidates.entry(s.weights).or_insert(false) |= interior;
                    }
                }
            }
            ConfigResult::Series(families) => {
                diag.series_configurations += 1;
                diag.series_raw += families.len();
                if !families.is_empty() {
                    diag.series_raw_configurations += 1;
                }
                for (_, probe) in families {
                    for w in probe.passing {
                        *candidates.entry(w).or_insert(false) |= interior;
                    }
                    survivors.extend(probe.survivors.into_iter().map(|f| (f, interior)));
                }
            }
        }
    }
    diag.deduped = finite_distinct.len();

    // keep maximal families only
    let mut survivors = merge_progressions(&survivors);
    survivors.sort();
    let mut series: Vec<(SeriesFamily, bool)> = Vec::new();
    for (fam, interior) in &survivors {
        if let Some(slot) = series.iter_mut().find(|(f, _)| f.contains_family(fam)) {
            slot.1 |= *interior;
            continue;
        }
        let absorbed: bool = series.iter().filter(|(f, _)| fam.contains_family(f)).any(|(_, i)| *i);
        series.retain(|(f, _)| !fam.contains_family(f));
        series.push((*fam, *interior || absorbed));
    }
    series.sort_by_key(|(f, _)| (f.step, f.base));

    let mut sporadic: Vec<WeightVector> = Vec::new();
    for (w, interior) in &candidates {
        if series.iter().any(|(f, _)| f.parameter_of(w).is_some()) {
            continue;
        }
        sporadic.push(*w);
        if !interior {
            diag.saturation_warnings.push(format!("{w} is only reached with an exponent at its upper bound"));
        }
    }
    for (f, interior) in &series {
        if !interior {
            diag.saturation_warnings.push(format!("series {f} is only reached with an exponent at its upper bound"));
        }
    }
    sporadic.sort_by_key(table_key);

    diag.final_sporadic = sporadic.len();
    diag.final_series = series.len();
    diag.notes.push(format!(
        "raw finite solutions: {} (reference {}); raw series families: {} (reference {}). \
         The reference counts do not state whether permutations or invalid weights are included, \
         so they are compared for information only.",
        diag.finite_raw, REFERENCE_FINITE_COUNT, diag.series_raw, REFERENCE_SERIES_COUNT
    ));
    diag.notes.push(format!(
        "{} configurations pruned as infeasible; no configuration had alpha = beta = gamma0 = 0",
        diag.infeasible_pruned
    ));
    for w in &diag.saturation_warnings {
        log::warn!("{w}");
    }
    log::info!(
        "search: {} configurations, {} sporadic, {} series",
        diag.configurations,
        diag.final_sporadic,
        diag.final_series
    );

    Ok(SearchOutcome { sporadic, series: series.into_iter().map(|(f, _)| f).collect(), diagnostics: diag })
}

/// Direct scan over all sorted weight vectors with `a3 <= max_a3`, keeping
/// the valid quasi-smooth ones. Does not touch the linear-system machinery.
pub fn brute_force_oracle(max_a3: u64) -> BTreeSet<WeightVector> {
    (1..=max_a3)
        .into_par_iter()
        .flat_map_iter(|a3| {
            let mut found = Vec::new();
            for a2 in 1..=a3 {
                for a1 in 1..=a2 {
                    for a0 in 1..=a1 {
                        let d = a0 + a1 + a2 + a3 - 1;
                        // cheap necessary condition: the vertex P3
                        if ![a0, a1, a2, a3].iter().any(|&aj| (d - aj) % a3 == 0) {
                            continue;
                        }
                        let Ok(w) = validate_weights([a0 as i64, a1 as i64, a2 as i64, a3 as i64]) else {
                            continue;
                        };
                        if is_quasismooth(&w) {
                            found.push(w);
                        }
                    }
                }
            }
            found
        })
        .collect()
}
