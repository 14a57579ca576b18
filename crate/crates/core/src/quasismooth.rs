//! Monomial conditions deciding whether the general member of `|O(d)|`,
//! `d = a0+a1+a2+a3-1`, is a quasi-smooth surface not containing any
//! singular line of the ambient space.
//!
//! * vertex condition: for every `i` there is a `j` (possibly `i`) and a
//!   monomial `x_i^{m_i} x_j` of degree `d`;
//! * singular-line condition: if `gcd(a_i, a_j) > 1` there is a monomial of
//!   degree `d` in `x_i, x_j` alone;
//! * axis condition: for every pair `{i, j}` either a monomial in `x_i, x_j`
//!   alone, or both `x_i^c x_j^c' x_k` and `x_i^e x_j^e' x_l`, where
//!   `{k, l}` is the complementary pair.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::wps::{find_monomial_supported_on, ExponentVector, WeightVector};

/// The six unordered index pairs, in lexicographic order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn complement(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexWitness {
    /// Exponent of `x_i`.
    pub m: u64,
    pub j: usize,
    pub monomial: ExponentVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCheck {
    pub i: usize,
    pub witness: Option<VertexWitness>,
}

impl VertexCheck {
    pub fn ok(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCheck {
    pub pair: (usize, usize),
    pub gcd: u64,
    pub witness: Option<ExponentVector>,
}

impl LineCheck {
    /// Only pairs with a common factor are constrained.
    pub fn required(&self) -> bool {
        self.gcd > 1
    }

    pub fn ok(&self) -> bool {
        !self.required() || self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AxisWitness {
    PurePair { monomial: ExponentVector },
    Mixed { with_k: ExponentVector, with_l: ExponentVector },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisCheck {
    pub pair: (usize, usize),
    pub witness: Option<AxisWitness>,
}

impl AxisCheck {
    pub fn ok(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub weights: WeightVector,
    pub degree: u64,
    pub vertices: Vec<VertexCheck>,
    pub lines: Vec<LineCheck>,
    pub axes: Vec<AxisCheck>,
    pub vertex_ok: bool,
    pub lines_ok: bool,
    pub axes_ok: bool,
    pub overall: bool,
}

impl ConditionReport {
    /// Every recorded monomial, for auditing.
    pub fn witnesses(&self) -> Vec<ExponentVector> {
        let mut out = Vec::new();
        out.extend(self.vertices.iter().filter_map(|v| v.witness.as_ref().map(|w| w.monomial)));
        out.extend(self.lines.iter().filter_map(|l| l.witness));
        for a in &self.axes {
            match &a.witness {
                Some(AxisWitness::PurePair { monomial }) => out.push(*monomial),
                Some(AxisWitness::Mixed { with_k, with_l }) => {
                    out.push(*with_k);
                    out.push(*with_l);
                }
                None => {}
            }
        }
        out
    }
}

fn vertex_witness(w: &WeightVector, i: usize) -> Option<VertexWitness> {
    let d = w.degree();
    let ai = w.weight(i);
    (0..4).find_map(|j| {
        let aj = w.weight(j);
        if aj > d || !(d - aj).is_multiple_of(ai) {
            return None;
        }
        let m = (d - aj) / ai;
        let mut b = [0u64; 4];
        b[i] += m;
        b[j] += 1;
        Some(VertexWitness { m, j, monomial: ExponentVector::new(b) })
    })
}

pub fn check_vertex_condition(w: &WeightVector) -> Vec<VertexCheck> {
    (0..4).map(|i| VertexCheck { i, witness: vertex_witness(w, i) }).collect()
}

pub fn check_singular_line_condition(w: &WeightVector) -> Vec<LineCheck> {
    let d = w.degree() as i64;
    PAIRS
        .iter()
        .map(|&(i, j)| {
            let gcd = w.weight(i).gcd(&w.weight(j));
            let witness = if gcd > 1 { find_monomial_supported_on(w, d, &[i, j]) } else { None };
            LineCheck { pair: (i, j), gcd, witness }
        })
        .collect()
}

fn axis_witness(w: &WeightVector, i: usize, j: usize) -> Option<AxisWitness> {
    let d = w.degree() as i64;
    if let Some(monomial) = find_monomial_supported_on(w, d, &[i, j]) {
        return Some(AxisWitness::PurePair { monomial });
    }
    let (k, l) = complement(i, j);
    let mixed = |t: usize| {
        find_monomial_supported_on(w, d - w.weight(t) as i64, &[i, j]).map(|mut e| {
            e.b[t] += 1;
            e
        })
    };
    Some(AxisWitness::Mixed { with_k: mixed(k)?, with_l: mixed(l)? })
}

pub fn check_axis_condition(w: &WeightVector) -> Vec<AxisCheck> {
    PAIRS.iter().map(|&(i, j)| AxisCheck { pair: (i, j), witness: axis_witness(w, i, j) }).collect()
}

/// Full report with witnesses for all three conditions.
pub fn is_quasismooth_candidate(w: &WeightVector) -> ConditionReport {
    let vertices = check_vertex_condition(w);
    let lines = check_singular_line_condition(w);
    let axes = check_axis_condition(w);
    let vertex_ok = vertices.iter().all(VertexCheck::ok);
    let lines_ok = lines.iter().all(LineCheck::ok);
    let axes_ok = axes.iter().all(AxisCheck::ok);
    ConditionReport {
        weights: *w,
        degree: w.degree(),
        vertices,
        lines,
        axes,
        vertex_ok,
        lines_ok,
        axes_ok,
        overall: vertex_ok && lines_ok && axes_ok,
    }
}

/// Short-circuiting equivalent of `is_quasismooth_candidate(w).overall`, for
/// the exhaustive scans.
pub fn is_quasismooth(w: &WeightVector) -> bool {
    let d = w.degree() as i64;
    if !(0..4).all(|i| vertex_witness(w, i).is_some()) {
        return false;
    }
    for &(i, j) in &PAIRS {
        let pure = find_monomial_supported_on(w, d, &[i, j]).is_some();
        if pure {
            continue;
        }
        if w.weight(i).gcd(&w.weight(j)) > 1 {
            return false;
        }
        if axis_witness(w, i, j).is_none() {
            return false;
        }
    }
    true
}
