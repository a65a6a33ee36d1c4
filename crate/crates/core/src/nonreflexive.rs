//! Executable illustration of why reflexivity is needed: in l¹ the duality
//! map is not surjective, and for the two functionals below no nonzero
//! combination lies in its image.
//!
//! The functionals are L₁ = (1/2, 0, 3/4, 0, …) and L₂ = (0, 2/3, 0, 4/5, …)
//! with entries i/(i+1) on the odd (resp. even) positions. Every entry is
//! strictly below the supremum 1, so on any finite truncation the l^∞ norm
//! is attained at the largest in-class index and the norming basis vector
//! escapes to infinity as the truncation grows: the finite-dimensional
//! shadow of non-attainment.
//!
//! Indexing follows the 1-based formulas above; storage is 0-based with the
//! offset applied at construction and in reported indices.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DemoError {
    #[error("truncation dimension {0} too small; need n >= 2")]
    TooSmall(usize),
    #[error("coefficients (0, 0) rejected; the span point of interest is nonzero")]
    ZeroCoefficients,
}

/// Finite truncation of the two l^∞ functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Truncation {
    n: usize,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl L1Truncation {
    /// Entries (L₁)_i = i/(i+1) for odd i ≤ n (1-based), zero elsewhere;
    /// (L₂)_i likewise on even i.
    pub fn new(n: usize) -> Result<Self, DemoError> {
        if n < 2 {
            return Err(DemoError::TooSmall(n));
        }
        let mut l1 = vec![0.0; n];
        let mut l2 = vec![0.0; n];
        for i in 1..=n {
            let value = i as f64 / (i as f64 + 1.0);
            if i % 2 == 1 {
                l1[i - 1] = value;
            } else {
                l2[i - 1] = value;
            }
        }
        Ok(Self { n, l1, l2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l1(&self) -> &[f64] {
        &self.l1
    }

    pub fn l2(&self) -> &[f64] {
        &self.l2
    }

    /// c₁·L₁ + c₂·L₂.
    pub fn combine(&self, c1: f64, c2: f64) -> Vec<f64> {
        self.l1
            .iter()
            .zip(&self.l2)
            .map(|(a, b)| c1 * a + c2 * b)
            .collect()
    }
}

/// Where a truncated functional attains its l^∞ norm, and how far that norm
/// still is from the supremum 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormingAnalysis {
    pub sup_norm: f64,
    /// Smallest maximising index, 1-based; the l¹ norming vector of the
    /// truncation is the corresponding basis vector.
    pub attaining_index: usize,
    /// 1 − sup_norm, strictly positive for every finite truncation.
    pub gap_to_limit: f64,
}

/// l^∞ analysis of a truncated functional.
pub fn norming_analysis(l: &[f64]) -> NormingAnalysis {
    let mut sup_norm = 0.0_f64;
    let mut attaining_index = 1;
    for (j, &value) in l.iter().enumerate() {
        if value.abs() > sup_norm {
            sup_norm = value.abs();
            attaining_index = j + 1;
        }
    }
    NormingAnalysis {
        sup_norm,
        attaining_index,
        gap_to_limit: 1.0 - sup_norm,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub sup_norm: f64,
    pub attaining_index: usize,
    pub gap_to_limit: f64,
}

/// Truncation scan of one span point c₁·L₁ + c₂·L₂.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanPeakingReport {
    pub c1: f64,
    pub c2: f64,
    pub rows: Vec<ScanRow>,
    /// True when every truncation attains its norm at index ≥ n − 1, the
    /// escape-to-infinity pattern.
    pub escape_verified: bool,
}

/// Track where c₁·L₁ + c₂·L₂ attains its sup-norm as the truncation grows.
///
/// The coefficient magnitudes increase with the index inside each parity
/// class, so the attaining index is always n or n − 1 and the norming mass
/// escapes: no truncation limit produces a norming vector, matching the
/// span-avoids-J(X) statement this module illustrates.
pub fn span_peaking_scan(
    c1: f64,
    c2: f64,
    n_list: &[usize],
) -> Result<SpanPeakingReport, DemoError> {
    if c1 == 0.0 && c2 == 0.0 {
        return Err(DemoError::ZeroCoefficients);
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let truncation = L1Truncation::new(n)?;
        let analysis = norming_analysis(&truncation.combine(c1, c2));
        rows.push(ScanRow {
            n,
            sup_norm: analysis.sup_norm,
            attaining_index: analysis.attaining_index,
            gap_to_limit: analysis.gap_to_limit,
        });
    }
    let escape_verified = rows.iter().all(|row| row.attaining_index >= row.n - 1);
    Ok(SpanPeakingReport {
        c1,
        c2,
        rows,
        escape_verified,
    })
}
