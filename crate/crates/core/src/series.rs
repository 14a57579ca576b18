//! Exact bookkeeping for the infinite family `X_{8k+4} ⊂ P(2, 2k+1, 2k+1, 4k+1)`.
//!
//! With `x0` of weight 2, the equation is a combination of
//! `x0^{4k+2}`, `x3^2 x0`, `x3 (x1+x2) x0^{k+1}`, `g4(x1,x2)` and
//! `g2(x1,x2) x0^{2k+1}`. The section `x0 = 0` of `O_X(2)` is the curve
//! `C = x3^2 = g4(x1,x2) = 0`, which splits into four lines `C_i` through
//! `P3`. Half of it is an anticanonical tiger of multiplicity 2 at `P3`.
//!
//! Everything here is exact: intersection numbers, the chain of bounds that
//! shows `(X, D)` is log canonical for an effective `D ≡ -K_X`, and the klt
//! threshold test `lc_total < 1` (which fails for `k = 1`).

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::wps::{intersection_degree, validate_weights, ExponentVector, WeightVector};

fn check_k(k: u64) {
    assert!(k >= 1, "series parameter must be at least 1");
}

pub fn series_weights(k: u64) -> WeightVector {
    check_k(k);
    let k = k as i64;
    validate_weights([2, 2 * k + 1, 2 * k + 1, 4 * k + 1]).expect("series weights are well formed")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationTerm {
    pub pattern: String,
    pub monomials: Vec<ExponentVector>,
    /// Weighted degree of each monomial, in order.
    pub degrees: Vec<u64>,
}

pub fn series_equation_terms(k: u64) -> Vec<EquationTerm> {
    let w = series_weights(k);
    let binary = |total: u64, x0: u64| -> Vec<ExponentVector> {
        (0..=total).rev().map(|e| ExponentVector::new([x0, e, total - e, 0])).collect()
    };
    let groups: Vec<(&str, Vec<ExponentVector>)> = vec![
        ("x0^{4k+2}", vec![ExponentVector::new([4 * k + 2, 0, 0, 0])]),
        ("x3^2*x0", vec![ExponentVector::new([1, 0, 0, 2])]),
        ("x3*(x1+x2)*x0^{k+1}", vec![ExponentVector::new([k + 1, 1, 0, 1]), ExponentVector::new([k + 1, 0, 1, 1])]),
        ("g4(x1,x2)", binary(4, 0)),
        ("g2(x1,x2)*x0^{2k+1}", binary(2, 2 * k + 1)),
    ];
    groups
        .into_iter()
        .map(|(pattern, monomials)| EquationTerm {
            pattern: pattern.to_string(),
            degrees: monomials.iter().map(|m| m.weighted_degree(&w)).collect(),
            monomials,
        })
        .collect()
}

/// Intersection numbers on `X` for the components `C_i` of `x0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionNumbers {
    /// `C_i . C_j` for `i != j`: the lines meet only at `P3`.
    pub ci_cj: Rational,
    /// `C_i . O_X(1)`.
    pub ci_o1: Rational,
    /// `C_i^2`, from `C_i . C = C_i . O_X(2)` with `C = sum C_j`.
    pub ci_ci: Rational,
}

pub fn series_intersection_numbers(k: u64) -> IntersectionNumbers {
    check_k(k);
    let k = k as i64;
    let ci_cj = Rational::new(1, 4 * k + 1);
    let ci_o1 = Rational::new(1, (2 * k + 1) * (4 * k + 1));
    let ci_ci = ci_o1.scale(2) - ci_cj.scale(3);
    IntersectionNumbers { ci_cj, ci_o1, ci_ci }
}

/// The chain of bounds for an effective `D ≡ -K_X = O_X(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcChain {
    /// `D . F` for a general `F ∈ |O(2(2k+1))|` through a smooth point.
    pub smooth_mult_bound: Rational,
    pub smooth_ok: bool,
    /// Bound on `mult_{P3} D` from the local chart of index `4k+1`.
    pub p3_mult_bound: Rational,
    /// Bound on the coefficient of any `C_i` in `D`.
    pub ai_bound: Rational,
    /// `mult_{P3} D'` once the `C_i` are removed from `D`.
    pub dprime_bound: Rational,
    /// `mult D'` at the singular points `P_a` of index `2k+1` on `C`.
    pub pa_dprime_bound: Rational,
    pub lc_total: Rational,
    /// `lc_total < 1`, i.e. the pair is klt at `P3` by this argument.
    pub lc_inequality_holds: bool,
}

/// `(X, D)` is log canonical near `P3` since
/// `lc_total = ai_bound + dprime_bound <= 1`, and klt when the inequality is
/// strict.
pub fn series_lc_chain(k: u64) -> LcChain {
    let w = series_weights(k);
    let ki = k as i64;
    let one = Rational::one();
    let idx_p3 = 4 * ki + 1;
    let idx_pa = 2 * ki + 1;

    let smooth_mult_bound = intersection_degree(&w, 1, 2 * (2 * ki + 1));
    let smooth_ok = smooth_mult_bound <= one;
    // In the orbifold chart at P3, cut by a general member of
    // |x0^{2k+1}, x1^2|: the chart has degree 4k+1 and the curve has
    // multiplicity 2 at the origin.
    let p3_mult_bound = Rational::new(idx_p3, 2) * intersection_degree(&w, 1, 2 * (2 * ki + 1));

    // D = sum a_i C_i + D'. Intersect with C_i, scaled by N = (2k+1)(4k+1):
    //   D.C_i * N = 1
    //   = a_i * C_i^2 * N + sum_{j != i} a_j C_j.C_i * N + D'.C_i * N
    //  <= -(6k+1) a_i + (p3_mult_bound - a_i)(2k+1) + (C.D) * N
    // using sum_j a_j <= mult_{P3} D and D'.C_i <= D'.C <= D.C.
    let n = Rational::integer((2 * ki + 1) * idx_p3);
    let xs = series_intersection_numbers(k);
    let self_coeff = -(xs.ci_ci.clone() * &n);
    let cross_coeff = xs.ci_cj.clone() * &n;
    let d_dot = xs.ci_o1.clone() * &n;
    let dprime_term = intersection_degree(&w, 2, 1) * &n;
    let ai_bound = (p3_mult_bound.clone() * &cross_coeff + dprime_term - d_dot) / (self_coeff + cross_coeff);

    // D' shares no component with C, which has multiplicity 4 at P3 in the
    // chart, so mult D' <= (4k+1)/4 * (D'.C) <= (4k+1)/4 * (D.O(2)).
    let d_o2 = intersection_degree(&w, 1, 2);
    let dprime_bound = Rational::new(idx_p3, 4) * &d_o2;
    let pa_dprime_bound = Rational::new(idx_pa, 4) * &d_o2;

    let lc_total = ai_bound.clone() + &dprime_bound;
    let lc_inequality_holds = lc_total < one;
    LcChain {
        smooth_mult_bound,
        smooth_ok,
        p3_mult_bound,
        ai_bound,
        dprime_bound,
        pa_dprime_bound,
        lc_total,
        lc_inequality_holds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TigerWitness {
    pub components: u64,
    pub coefficient: Rational,
    /// Multiplicity of `coefficient * C` at `P3`.
    pub multiplicity: Rational,
    /// `(coefficient * C) . O(1)`; equals `-K_X . O(1)` for a tiger.
    pub degree: Rational,
    pub anticanonical: bool,
    pub exceeds_one: bool,
}

pub fn series_tiger_witness(k: u64) -> TigerWitness {
    let w = series_weights(k);
    let coefficient = Rational::new(1, 2);
    let components = 4u64;
    let multiplicity = coefficient.scale(components as i64);
    let degree = coefficient.clone() * intersection_degree(&w, 2, 1);
    let anticanonical = degree == intersection_degree(&w, 1, 1);
    let exceeds_one = multiplicity > Rational::one();
    TigerWitness { components, coefficient, multiplicity, degree, anticanonical, exceeds_one }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub label: String,
    pub index: u64,
    pub count: u64,
    pub location: String,
}

pub fn series_singular_points(k: u64) -> Vec<SingularPoint> {
    check_k(k);
    vec![
        SingularPoint { label: "P3".into(), index: 4 * k + 1, count: 1, location: "x0=x1=x2=0".into() },
        SingularPoint { label: "P_a".into(), index: 2 * k + 1, count: 4, location: "x0=x3=0, g4(x1,x2)=0".into() },
    ]
}

/// One line of `series` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub k: u64,
    pub weights: WeightVector,
    pub degree: u64,
    pub equation_terms: Vec<EquationTerm>,
    pub ci_cj: Rational,
    pub ci_o1: Rational,
    pub ci_ci: Rational,
    pub smooth_mult_bound: Rational,
    pub p3_mult_bound: Rational,
    pub ai_bound: Rational,
    pub dprime_bound: Rational,
    pub pa_dprime_bound: Rational,
    pub lc_total: Rational,
    pub lc_inequality_holds: bool,
    pub tiger_witness_mult: Rational,
    pub tiger_witness_anticanonical: bool,
    pub singular_points: Vec<SingularPoint>,
}

pub fn report(k: u64) -> SeriesReport {
    let w = series_weights(k);
    let xs = series_intersection_numbers(k);
    let chain = series_lc_chain(k);
    let tiger = series_tiger_witness(k);
    SeriesReport {
        k,
        weights: w,
        degree: w.degree(),
        equation_terms: series_equation_terms(k),
        ci_cj: xs.ci_cj,
        ci_o1: xs.ci_o1,
        ci_ci: xs.ci_ci,
        smooth_mult_bound: chain.smooth_mult_bound,
        p3_mult_bound: chain.p3_mult_bound,
        ai_bound: chain.ai_bound,
        dprime_bound: chain.dprime_bound,
        pa_dprime_bound: chain.pa_dprime_bound,
        lc_total: chain.lc_total,
        lc_inequality_holds: chain.lc_inequality_holds,
        tiger_witness_mult: tiger.multiplicity,
        tiger_witness_anticanonical: tiger.anticanonical,
        singular_points: series_singular_points(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wps::monomials_of_degree;
    use std::collections::BTreeSet;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn terms_are_all_monomials_of_degree_d() {
        for k in 1..=12u64 {
            let w = series_weights(k);
            let terms = series_equation_terms(k);
            let mut seen = BTreeSet::new();
            for t in &terms {
                assert!(t.degrees.iter().all(|&d| d == 8 * k + 4), "{}", t.pattern);
                seen.extend(t.monomials.iter().map(|m| m.b));
            }
            let all: BTreeSet<[u64; 4]> = monomials_of_degree(&w, w.degree() as i64).into_iter().map(|m| m.b).collect();
            assert_eq!(seen, all);
        }
    }

    #[test]
    fn closed_forms() {
        for k in 1..=50i64 {
            let ku = k as u64;
            let n = (2 * k + 1) * (4 * k + 1);
            let xs = series_intersection_numbers(ku);
            assert_eq!(xs.ci_cj, r(1, 4 * k + 1));
            assert_eq!(xs.ci_o1, r(1, n));
            assert_eq!(xs.ci_ci, r(-(6 * k + 1), n));
            // C_i . C = C_i . O(2), not C_i . O(1)
            assert_eq!(xs.ci_ci.clone() + xs.ci_cj.scale(3), xs.ci_o1.scale(2));
            assert_ne!(xs.ci_ci.clone() + xs.ci_cj.scale(3), xs.ci_o1);
            let c = series_lc_chain(ku);
            assert_eq!(c.smooth_mult_bound, r(4, 4 * k + 1));
            assert!(c.smooth_ok);
            assert_eq!(c.p3_mult_bound, Rational::integer(2));
            assert_eq!(c.ai_bound, r(1, 2) + r(2, 4 * k + 1));
            assert_eq!(c.dprime_bound, r(1, 2 * k + 1));
            assert_eq!(c.pa_dprime_bound, r(1, 4 * k + 1));
            assert_eq!(c.lc_inequality_holds, k >= 2);
        }
    }

    #[test]
    fn ai_bound_is_tight() {
        for k in 1..=20i64 {
            let a = series_lc_chain(k as u64).ai_bound;
            let rhs = a.scale(-(6 * k + 1)) + (Rational::integer(2) - a).scale(2 * k + 1) + Rational::integer(4);
            assert_eq!(rhs, Rational::one());
        }
    }

    #[test]
    fn small_k_totals() {
        assert_eq!(series_lc_chain(1).lc_total, r(37, 30));
        assert_eq!(series_lc_chain(2).lc_total, r(83, 90));
    }

    #[test]
    fn tiger_and_points() {
        for k in 1..=10 {
            let t = series_tiger_witness(k);
            assert_eq!(t.multiplicity, Rational::integer(2));
            assert!(t.anticanonical && t.exceeds_one);
            let p = series_singular_points(k);
            assert_eq!(p[0].index, 4 * k + 1);
            assert_eq!((p[1].index, p[1].count), (2 * k + 1, 4));
        }
    }

    #[test]
    fn report_round_trips() {
        let rep = report(3);
        let line = serde_json::to_string(&rep).unwrap();
        assert!(line.contains("\"lc_total\":\"145/182\""));
        let back: SeriesReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, rep);
    }
}
