//! Codimensions of spans and intersections of sublinear series cut out by
//! base-locus multiplicities.
//!
//! A series is determined by the multiplicities it imposes at the support
//! points. Under the degree hypothesis every intersection is nonspecial, so
//! its codimension is the column-wise max of multiplicities; spans then
//! follow by inclusion-exclusion. When the column minima sit on the diagonal
//! the alternating sum collapses to the trace of the matrix, which is the
//! fast path used while building profiles.

use crate::error::{Error, Result};
use crate::filtration::GeometricContext;
use crate::rational::Rat;

/// A sublinear series of degree-`level` sections, recorded by the
/// multiplicity it imposes at each support point plus its weight bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorSeries {
    pub mult: Vec<u64>,
    pub level: u64,
    pub weight: Rat,
}

impl DivisorSeries {
    pub fn new(mult: Vec<u64>, level: u64, weight: Rat) -> Self {
        DivisorSeries { mult, level, weight }
    }

    pub fn codim(&self) -> u64 {
        self.mult.iter().sum()
    }
}

fn check_levels(series: &[DivisorSeries]) -> Result<()> {
    if series.windows(2).any(|w| w[0].level != w[1].level) {
        return Err(Error::IncomparableSeries);
    }
    Ok(())
}

/// True iff Σ_i max_j mult[j][i] < d·m − 2g, the condition under which all
/// intersection codimensions are plain multiplicity sums.
pub fn degree_hypothesis(series: &[DivisorSeries], ctx: &GeometricContext, m: u64) -> Result<bool> {
    check_levels(series)?;
    if let Some(s) = series.first() {
        if s.level != m {
            return Err(Error::IncomparableSeries);
        }
    }
    let total: u64 = column_max_sum(series);
    Ok((total as i64) < (ctx.d * m) as i64 - 2 * ctx.g as i64)
}

fn column_max_sum(series: &[DivisorSeries]) -> u64 {
    let q = series.first().map_or(0, |s| s.mult.len());
    (0..q)
        .map(|i| series.iter().map(|s| s.mult[i]).max().unwrap_or(0))
        .sum()
}

/// Codimension of the intersection: Σ_i max_j mult[j][i].
pub fn intersection_codim(series: &[DivisorSeries]) -> Result<u64> {
    if series.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    check_levels(series)?;
    Ok(column_max_sum(series))
}

/// Exact span codimension by inclusion-exclusion over all nonempty subsets:
/// `codim Span = Σ_{∅≠I} (−1)^{|I|+1} codim ∩_{j∈I}`.
///
/// Exponential in the list length; this is the ground truth the diagonal
/// rule is checked against.
pub fn span_codim_oracle(series: &[DivisorSeries]) -> Result<u64> {
    if series.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    check_levels(series)?;
    let n = series.len();
    if n > 20 {
        return Err(Error::OracleSizeLimit(n));
    }
    let q = series[0].mult.len();
    let mut acc: i64 = 0;
    for mask in 1u32..(1u32 << n) {
        let mut codim: u64 = 0;
        for i in 0..q {
            let mut mx = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                mx = mx.max(series[j].mult[i]);
                bits &= bits - 1;
            }
            codim += mx;
        }
        if mask.count_ones() % 2 == 1 {
            acc += codim as i64;
        } else {
            acc -= codim as i64;
        }
    }
    debug_assert!(acc >= 0);
    Ok(acc as u64)
}

/// Fast span codimension when series `i` minimizes the multiplicity of point
/// `i`: the span has codimension Σ_i mult[i][i].
///
/// With `diag_check` the diagonal-minimality precondition is verified and a
/// violation is an error, never a number.
pub fn span_codim_trace(series: &[DivisorSeries], diag_check: bool) -> Result<u64> {
    if series.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    check_levels(series)?;
    let q = series[0].mult.len();
    if series.len() != q {
        return Err(Error::NotSquare(series.len(), q));
    }
    if diag_check {
        for i in 0..q {
            let col_min = series.iter().map(|s| s.mult[i]).min().unwrap();
            if series[i].mult[i] != col_min {
                return Err(Error::DiagonalMinimality(i));
            }
        }
    }
    Ok((0..q).map(|i| series[i].mult[i]).sum())
}
