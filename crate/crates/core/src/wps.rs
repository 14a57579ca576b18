//! Weighted projective 3-space `P(a0,a1,a2,a3)`: weights, monomial bases of
//! `O(m)`, and intersection numbers on anticanonical hypersurfaces.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Number of homogeneous coordinates.
pub const VARS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    /// Carries the smallest offending entry so the error does not depend on
    /// the order the weights were given in.
    #[error("weights must be positive, got {value}")]
    NonPositiveWeight { value: i64 },
    #[error("weights {triple:?} share the common factor {gcd}")]
    TripleGcdViolation { triple: [u64; 3], gcd: u64 },
    #[error("weight arithmetic overflowed")]
    Overflow,
}

/// Weights of `P(a0,a1,a2,a3)`, sorted ascending, any three coprime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[u64; 4]")]
pub struct WeightVector {
    a: [u64; 4],
}

/// Sorts and checks four raw weights.
pub fn validate_weights(raw: [i64; 4]) -> Result<WeightVector, WeightError> {
    if let Some(&value) = raw.iter().filter(|&&x| x < 1).min() {
        return Err(WeightError::NonPositiveWeight { value });
    }
    let mut a = raw.map(|x| x as u64);
    a.sort_unstable();
    // Lexicographically first offending triple of the sorted weights.
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let g = a[i].gcd(&a[j]).gcd(&a[k]);
        if g > 1 {
            return Err(WeightError::TripleGcdViolation { triple: [a[i], a[j], a[k]], gcd: g });
        }
    }
    a.iter()
        .try_fold(0u64, |acc, &x| acc.checked_add(x))
        .filter(|&s| s <= i64::MAX as u64)
        .ok_or(WeightError::Overflow)?;
    Ok(WeightVector { a })
}

impl WeightVector {
    pub fn new(raw: [i64; 4]) -> Result<Self, WeightError> {
        validate_weights(raw)
    }

    pub fn weights(&self) -> [u64; 4] {
        self.a
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.a[i]
    }

    /// Anticanonical degree `a0+a1+a2+a3-1`.
    pub fn degree(&self) -> u64 {
        self.a.iter().sum::<u64>() - 1
    }

    pub fn product(&self) -> u128 {
        self.a.iter().map(|&x| x as u128).product()
    }

    /// Index of the cyclic quotient singularity of the ambient space at the
    /// vertex `P_i`.
    pub fn vertex_index(&self, i: usize) -> u64 {
        self.a[i]
    }

    /// Index of the quotient singularity along the coordinate line through
    /// `P_i` and `P_j`.
    pub fn line_index(&self, i: usize, j: usize) -> u64 {
        self.a[i].gcd(&self.a[j])
    }

    pub fn as_i64(&self) -> [i64; 4] {
        self.a.map(|x| x as i64)
    }
}

impl TryFrom<[i64; 4]> for WeightVector {
    type Error = WeightError;
    fn try_from(raw: [i64; 4]) -> Result<Self, Self::Error> {
        validate_weights(raw)
    }
}

impl From<WeightVector> for [u64; 4] {
    fn from(w: WeightVector) -> Self {
        w.a
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = self.a;
        write!(f, "({a0},{a1},{a2},{a3})")
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightVector{self}")
    }
}

/// Exponents of a monomial `x0^b0 x1^b1 x2^b2 x3^b3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector {
    pub b: [u64; 4],
}

impl ExponentVector {
    pub const ZERO: ExponentVector = ExponentVector { b: [0; 4] };

    pub fn new(b: [u64; 4]) -> Self {
        ExponentVector { b }
    }

    pub fn weighted_degree(&self, w: &WeightVector) -> u64 {
        self.b.iter().zip(w.a.iter()).map(|(b, a)| b * a).sum()
    }

    /// Indices with a nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..VARS).filter(|&i| self.b[i] > 0).collect()
    }

    pub fn is_supported_on(&self, vars: &[usize]) -> bool {
        (0..VARS).all(|i| self.b[i] == 0 || vars.contains(&i))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.b.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Lexicographic walk over the exponent vectors of weighted degree `m`.
pub struct Monomials {
    a: [u64; 4],
    m: u64,
    head: [u64; 3],
    done: bool,
}

impl Monomials {
    pub fn new(w: &WeightVector, m: i64) -> Self {
        Monomials { a: w.a, m: m.max(0) as u64, head: [0; 3], done: m < 0 }
    }

    fn partial(&self, upto: usize) -> u64 {
        (0..upto).map(|i| self.head[i] * self.a[i]).sum()
    }

    fn advance(&mut self) {
        for level in (0..3).rev() {
            self.head[level] += 1;
            if self.partial(level + 1) <= self.m {
                return;
            }
            self.head[level] = 0;
        }
        self.done = true;
    }
}

impl Iterator for Monomials {
    type Item = ExponentVector;

    fn next(&mut self) -> Option<ExponentVector> {
        while !self.done {
            let used = self.partial(3);
            let head = self.head;
            self.advance();
            let rem = self.m - used;
            if rem.is_multiple_of(self.a[3]) {
                return Some(ExponentVector::new([head[0], head[1], head[2], rem / self.a[3]]));
            }
        }
        None
    }
}

/// Basis of the sections of `O(m)`, in lexicographic order of exponents.
pub fn monomials_of_degree(w: &WeightVector, m: i64) -> Vec<ExponentVector> {
    Monomials::new(w, m).collect()
}

/// Lexicographically first monomial of degree `m` using only the variables
/// in `vars`. Indices outside `0..4` are ignored.
pub fn find_monomial_supported_on(w: &WeightVector, m: i64, vars: &[usize]) -> Option<ExponentVector> {
    if m < 0 {
        return None;
    }
    let mut idx: Vec<usize> = vars.iter().copied().filter(|&i| i < VARS).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut b = [0u64; 4];
    if fill(&w.a, m as u64, &idx, &mut b) {
        Some(ExponentVector::new(b))
    } else {
        None
    }
}

fn fill(a: &[u64; 4], rem: u64, vars: &[usize], b: &mut [u64; 4]) -> bool {
    match vars {
        [] => rem == 0,
        [v] => {
            if rem.is_multiple_of(a[*v]) {
                b[*v] = rem / a[*v];
                true
            } else {
                false
            }
        }
        [v, rest @ ..] => {
            for e in 0..=rem / a[*v] {
                if fill(a, rem - e * a[*v], rest, b) {
                    b[*v] = e;
                    return true;
                }
            }
            false
        }
    }
}

pub fn has_monomial_supported_on(w: &WeightVector, m: i64, vars: &[usize]) -> bool {
    find_monomial_supported_on(w, m, vars).is_some()
}

/// `(O(m1)|X . O(m2)|X)` on the anticanonical hypersurface `X_d`, which is
/// `m1*m2*d / (a0*a1*a2*a3)`.
pub fn intersection_degree(w: &WeightVector, m1: i64, m2: i64) -> Rational {
    let num = BigInt::from(m1) * BigInt::from(m2) * BigInt::from(w.degree());
    Rational::from_big(num, BigInt::from(w.product()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(a: [i64; 4]) -> WeightVector {
        validate_weights(a).unwrap()
    }

    #[test]
    fn validates_and_sorts() {
        let v = w([1, 2, 3, 5]);
        assert_eq!(v.weights(), [1, 2, 3, 5]);
        assert_eq!(v.degree(), 10);
        assert_eq!(w([5, 3, 2, 1]), v);
    }

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(validate_weights([2, 2, 2, 3]), Err(WeightError::TripleGcdViolation { triple: [2, 2, 2], gcd: 2 }));
        assert_eq!(validate_weights([0, 1, 1, 1]), Err(WeightError::NonPositiveWeight { value: 0 }));
        assert_eq!(validate_weights([1, -4, 1, -2]), Err(WeightError::NonPositiveWeight { value: -4 }));
        // pairwise common factors are fine
        assert!(validate_weights([2, 3, 3, 5]).is_ok());
        assert!(matches!(
            validate_weights([3, 6, 9, 1]),
            Err(WeightError::TripleGcdViolation { triple: [3, 6, 9], gcd: 3 })
        ));
    }

    #[test]
    fn cubic_surface_basis() {
        let ms = monomials_of_degree(&w([1, 1, 1, 1]), 3);
        assert_eq!(ms.len(), 20);
        assert_eq!(ms[0], ExponentVector::new([0, 0, 0, 3]));
        assert_eq!(ms[19], ExponentVector::new([3, 0, 0, 0]));
        assert!(ms.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sextic_basis_matches_nested_loops() {
        let v = w([1, 1, 2, 3]);
        let mut brute = Vec::new();
        for b0 in 0..=6u64 {
            for b1 in 0..=6 {
                for b2 in 0..=6 {
                    for b3 in 0..=6 {
                        if b0 + b1 + 2 * b2 + 3 * b3 == 6 {
                            brute.push(ExponentVector::new([b0, b1, b2, b3]));
                        }
                    }
                }
            }
        }
        assert_eq!(brute.len(), 23);
        assert_eq!(monomials_of_degree(&v, 6), brute);
    }

    #[test]
    fn negative_and_zero_degree() {
        let v = w([1, 2, 3, 5]);
        assert!(monomials_of_degree(&v, -1).is_empty());
        assert_eq!(monomials_of_degree(&v, 0), vec![ExponentVector::ZERO]);
        assert_eq!(ExponentVector::ZERO.weighted_degree(&v), 0);
    }

    #[test]
    fn supported_monomials() {
        let v = w([3, 5, 7, 11]);
        let m = find_monomial_supported_on(&v, 25, &[2, 3]).unwrap();
        assert_eq!(m, ExponentVector::new([0, 0, 2, 1]));
        assert!(!has_monomial_supported_on(&w([1, 2, 2, 3]), 7, &[1, 2]));
        assert_eq!(find_monomial_supported_on(&w([1, 1, 1, 1]), 3, &[0]), Some(ExponentVector::new([3, 0, 0, 0])));
        assert!(has_monomial_supported_on(&v, 0, &[]));
        assert!(!has_monomial_supported_on(&v, 4, &[]));
        assert!(!has_monomial_supported_on(&v, -3, &[0, 1, 2, 3]));
    }

    #[test]
    fn intersection_numbers() {
        // (2,3,3,5) is the k = 1 member of (2,2k+1,2k+1,4k+1)
        let v = w([2, 3, 3, 5]);
        assert_eq!(intersection_degree(&v, 1, 1), Rational::new(2, 15));
        for k in 1..=20i64 {
            let s = w([2, 2 * k + 1, 2 * k + 1, 4 * k + 1]);
            assert_eq!(intersection_degree(&s, 1, 1), Rational::new(2, (2 * k + 1) * (4 * k + 1)));
            assert_eq!(intersection_degree(&s, 1, 2 * (2 * k + 1)), Rational::new(4, 4 * k + 1));
            assert!(intersection_degree(&s, 0, 7).is_zero());
        }
    }

    #[test]
    fn chart_indices() {
        let v = w([2, 5, 5, 9]);
        assert_eq!(v.vertex_index(3), 9);
        assert_eq!(v.line_index(1, 2), 5);
        assert_eq!(v.line_index(0, 3), 1);
    }

    fn valid_weights() -> impl Strategy<Value = WeightVector> {
        prop::array::uniform4(1i64..60).prop_filter_map("triple gcd", |a| validate_weights(a).ok())
    }

    proptest! {
        #[test]
        fn intersection_is_symmetric_and_bilinear(
            v in valid_weights(), m1 in 0i64..50, m1b in 0i64..50, m2 in 0i64..50
        ) {
            prop_assert_eq!(intersection_degree(&v, m1, m2), intersection_degree(&v, m2, m1));
            prop_assert_eq!(
                intersection_degree(&v, m1 + m1b, m2),
                intersection_degree(&v, m1, m2) + intersection_degree(&v, m1b, m2)
            );
        }

        #[test]
        fn degree_is_linear(v in valid_weights(), b in prop::array::uniform4(0u64..20), c in prop::array::uniform4(0u64..20)) {
            let s = ExponentVector::new([b[0] + c[0], b[1] + c[1], b[2] + c[2], b[3] + c[3]]);
            prop_assert_eq!(
                s.weighted_degree(&v),
                ExponentVector::new(b).weighted_degree(&v) + ExponentVector::new(c).weighted_degree(&v)
            );
        }

        #[test]
        fn every_basis_element_has_the_degree(v in valid_weights(), m in 0i64..80) {
            for e in monomials_of_degree(&v, m) {
                prop_assert_eq!(e.weighted_degree(&v), m as u64);
            }
        }

        #[test]
        fn witness_agrees_with_basis_scan(v in valid_weights(), m in 0i64..120, mask in 1u8..16) {
            let vars: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            let scan = monomials_of_degree(&v, m).into_iter().find(|e| e.is_supported_on(&vars));
            prop_assert_eq!(find_monomial_supported_on(&v, m, &vars), scan);
        }
    }
}
