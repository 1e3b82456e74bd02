//! Rectangle counts, density estimates and discrepancy scans.
//!
//! Translating a `p × q` rectangle by `(dx, dy)` only changes its count through
//! `dx + dy`, so all translates of one shape are scanned as a one-dimensional
//! sweep over diagonal bits. The count at anchor diagonal `t` is
//! `Σ_{i<p, j<q} b(t + i + j)`, a trapezoid-weighted window, evaluated in O(1)
//! from second-order prefix sums. [`discrepancy_oracle`] recounts by brute force
//! over an explicit patch and shares none of this machinery.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lift::{LiftError, LiftedSequence};
use crate::number::{AffineValue, Density, QuadValue};
use crate::orbit::{bounds, OrbitError};
use crate::word::{diagonal_bits, LatticeRect, WordError, WordPatch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("shape {p}x{q} does not fit in a {width}x{height} patch")]
    ShapeTooLarge {
        p: u64,
        q: u64,
        width: usize,
        height: usize,
    },
    #[error("shape extents must be positive")]
    EmptyShape,
    #[error("empty diagonal range [{0}, {1})")]
    EmptyRange(i64, i64),
    #[error("the proven envelope is only available for d = 2, got d = {0}")]
    UnsupportedDimension(u32),
}

/// A rectangle shape: `p` cells along the first axis, `q` along the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape {
    pub p: u64,
    pub q: u64,
}

impl Shape {
    pub fn new(p: u64, q: u64) -> Self {
        Shape { p, q }
    }

    /// Number of anti-diagonals the shape meets.
    pub fn span(&self) -> u64 {
        self.p + self.q - 1
    }

    pub fn at(&self, x: i64, y: i64) -> Result<LatticeRect, WordError> {
        LatticeRect::planar(x, y, self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extrema {
    pub max: u64,
    pub min: u64,
}

impl Extrema {
    pub fn discrepancy(&self) -> u64 {
        self.max - self.min
    }
}

/// Half-open range of anchor diagonals `θ(origin)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagRange {
    pub start: i64,
    pub end: i64,
}

impl DiagRange {
    pub fn new(start: i64, end: i64) -> Result<Self, AnalysisError> {
        if start >= end {
            return Err(AnalysisError::EmptyRange(start, end));
        }
        Ok(DiagRange { start, end })
    }

    /// `[-r, r]`.
    pub fn symmetric(r: i64) -> Self {
        DiagRange {
            start: -r,
            end: r + 1,
        }
    }

    pub fn len(&self) -> u64 {
        (self.end - self.start) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }
}

impl std::fmt::Display for DiagRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// Cells of a `p × q` rectangle on its `k`-th anti-diagonal, `0 ≤ k < p + q − 1`.
pub fn multiplicity(shape: Shape, k: u64) -> u64 {
    if k >= shape.span() {
        return 0;
    }
    (k + 1).min(shape.p).min(shape.q).min(shape.span() - k)
}

/// Number of ones of the word inside `rect`.
pub fn rect_count(seq: &LiftedSequence, rect: &LatticeRect) -> Result<u64, AnalysisError> {
    match (seq.dimension(), rect.dim()) {
        (1, 1) => {
            let bits = diagonal_bits(seq, rect.origin()[0], rect.extents()[0] as usize)?;
            Ok(bits.iter().map(|&b| b as u64).sum())
        }
        (2, 2) => {
            let (lo, hi) = rect.diagonal_span();
            let bits = diagonal_bits(seq, lo, (hi - lo + 1) as usize)?;
            let shape = Shape::new(rect.extents()[0], rect.extents()[1]);
            Ok(bits
                .iter()
                .enumerate()
                .map(|(k, &b)| b as u64 * multiplicity(shape, k as u64))
                .sum())
        }
        (d, _) => Err(AnalysisError::UnsupportedDimension(d)),
    }
}

/// `Σ_{g ∈ R} (a − w(g)) = a·|R| − count`.
pub fn rect_sum_h(seq: &LiftedSequence, rect: &LatticeRect) -> Result<AffineValue, AnalysisError> {
    let count = rect_count(seq, rect)?;
    Ok(AffineValue::new(
        -BigInt::from(count),
        BigInt::from(rect.cardinality()),
    ))
}

/// `M = 2^d·‖f‖∞`, the bound on every rectangle sum of `a − w`.
pub fn rectangle_sum_bound(seq: &LiftedSequence) -> QuadValue {
    seq.bound().scale(&(BigInt::from(1) << seq.dimension()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityEstimate {
    pub rect: LatticeRect,
    pub count: u64,
    /// `count / |R|`
    pub estimate: BigRational,
    /// `M / |R|`
    pub error_bound: QuadValue,
}

impl DensityEstimate {
    /// `|estimate − a|`.
    pub fn deviation(&self, a: &Density) -> QuadValue {
        let est = QuadValue::from_rational(&self.estimate, &a.radicand());
        (&est - &a.to_quad()).abs()
    }

    pub fn within_bound(&self, a: &Density) -> bool {
        self.deviation(a) <= self.error_bound
    }
}

pub fn density_estimate(
    seq: &LiftedSequence,
    rect: &LatticeRect,
) -> Result<DensityEstimate, AnalysisError> {
    let count = rect_count(seq, rect)?;
    let size = BigInt::from(rect.cardinality());
    let inv = QuadValue::from_rational(
        &BigRational::new(BigInt::from(1), size.clone()),
        &seq.density().radicand(),
    );
    Ok(DensityEstimate {
        rect: rect.clone(),
        count,
        estimate: BigRational::new(BigInt::from(count), size),
        error_bound: &rectangle_sum_bound(seq) * &inv,
    })
}

/// Second-order prefix sums of diagonal bits starting at diagonal `start`.
#[derive(Debug, Clone)]
pub struct DiagonalProfile {
    start: i64,
    bits: usize,
    pp: Vec<i64>,
}

impl DiagonalProfile {
    pub fn from_bits(start: i64, bits: &[u8]) -> Self {
        let mut pp = Vec::with_capacity(bits.len() + 2);
        let (mut p, mut acc) = (0i64, 0i64);
        pp.push(0);
        // pp[k] = Σ_{u<k} P(u), P(u) = Σ_{v<u} b(v)
        for k in 0..=bits.len() {
            acc += p;
            pp.push(acc);
            if k < bits.len() {
                p += bits[k] as i64;
            }
        }
        DiagonalProfile {
            start,
            bits: bits.len(),
            pp,
        }
    }

    /// Profile wide enough for every anchor in `range` and shapes meeting up to
    /// `max_span` diagonals.
    pub fn new(
        seq: &LiftedSequence,
        range: DiagRange,
        max_span: u64,
    ) -> Result<Self, AnalysisError> {
        let len = range.len() - 1 + max_span;
        let bits = diagonal_bits(seq, range.start, len as usize)?;
        Ok(Self::from_bits(range.start, &bits))
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// First diagonal past the profile.
    pub fn end(&self) -> i64 {
        self.start + self.bits as i64
    }

    /// Count of a `shape` rectangle anchored on diagonal `t`.
    pub fn count(&self, t: i64, shape: Shape) -> u64 {
        let tau = (t - self.start) as usize;
        let (p, q) = (shape.p as usize, shape.q as usize);
        debug_assert!(tau + p + q - 1 <= self.bits, "anchor outside profile");
        let pp = &self.pp;
        (pp[tau + p + q] - pp[tau + q] - pp[tau + p] + pp[tau]) as u64
    }

    pub fn extrema(&self, shape: Shape, range: DiagRange) -> Extrema {
        let mut ext = Extrema {
            max: 0,
            min: u64::MAX,
        };
        for t in range.start..range.end {
            let c = self.count(t, shape);
            ext.max = ext.max.max(c);
            ext.min = ext.min.min(c);
        }
        ext
    }
}

/// Max and min count over all translates of `shape` anchored in `range`.
pub fn discrepancy_scan_fast(
    seq: &LiftedSequence,
    shape: Shape,
    range: DiagRange,
) -> Result<Extrema, AnalysisError> {
    if shape.p == 0 || shape.q == 0 {
        return Err(AnalysisError::EmptyShape);
    }
    if seq.dimension() != 2 {
        return Err(AnalysisError::UnsupportedDimension(seq.dimension()));
    }
    let profile = DiagonalProfile::new(seq, range, shape.span())?;
    Ok(profile.extrema(shape, range))
}

/// Brute-force extrema over every placement of `shape` inside a row-major
/// `width × height` bit matrix, via a 2D prefix-sum table.
pub fn discrepancy_oracle_bits(
    bits: &[u8],
    width: usize,
    height: usize,
    shape: Shape,
) -> Result<Extrema, AnalysisError> {
    let (p, q) = (shape.p as usize, shape.q as usize);
    if p == 0 || q == 0 {
        return Err(AnalysisError::EmptyShape);
    }
    if p > width || q > height {
        return Err(AnalysisError::ShapeTooLarge {
            p: shape.p,
            q: shape.q,
            width,
            height,
        });
    }
    let stride = width + 1;
    let mut table = vec![0u64; stride * (height + 1)];
    for r in 0..height {
        for c in 0..width {
            table[(r + 1) * stride + c + 1] = bits[r * width + c] as u64
                + table[r * stride + c + 1]
                + table[(r + 1) * stride + c]
                - table[r * stride + c];
        }
    }
    let mut ext = Extrema {
        max: 0,
        min: u64::MAX,
    };
    for r in 0..=height - q {
        for c in 0..=width - p {
            let count = table[(r + q) * stride + c + p] + table[r * stride + c]
                - table[r * stride + c + p]
                - table[(r + q) * stride + c];
            ext.max = ext.max.max(count);
            ext.min = ext.min.min(count);
        }
    }
    Ok(ext)
}

pub fn discrepancy_oracle(patch: &WordPatch, shape: Shape) -> Result<Extrema, AnalysisError> {
    discrepancy_oracle_bits(patch.bits(), patch.width(), patch.height(), shape)
}

/// Proven balance constant `⌊2·2^d·max(α, β)⌋`; 0 for the constant endpoint words.
pub fn balance_bound(a: &Density, d: u32) -> Result<u64, AnalysisError> {
    if a.is_endpoint() {
        return Ok(0);
    }
    if d != 2 {
        return Err(AnalysisError::UnsupportedDimension(d));
    }
    let envelope = bounds(a)?.envelope();
    let two_m = envelope.scale(&BigInt::from(2u32 << d));
    Ok(u64::try_from(two_m.floor()).expect("bound is positive and small"))
}

/// Every `(p, q)` with `1 ≤ p, q ≤ max_shape`, then `(p, 1)` and `(1, q)` up to `elongated`.
pub fn default_shapes(max_shape: u64, elongated: u64) -> Vec<Shape> {
    let mut shapes: Vec<Shape> = (1..=max_shape)
        .flat_map(|p| (1..=max_shape).map(move |q| Shape::new(p, q)))
        .collect();
    for k in (max_shape + 1)..=elongated {
        shapes.push(Shape::new(k, 1));
        shapes.push(Shape::new(1, k));
    }
    shapes
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeRecord {
    pub p: u64,
    pub q: u64,
    pub max: u64,
    pub min: u64,
    pub discrepancy: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub density: String,
    pub d: u32,
    pub theoretical_bound: u64,
    pub overall_k: u64,
    pub shapes: Vec<ShapeRecord>,
    pub region: String,
    pub empirical_f_max: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl DiscrepancyReport {
    pub fn within_bound(&self) -> bool {
        self.overall_k <= self.theoretical_bound
    }

    pub fn shape(&self, p: u64, q: u64) -> Option<&ShapeRecord> {
        self.shapes.iter().find(|r| r.p == p && r.q == q)
    }
}

/// Scans every shape over `range` in parallel; the result does not depend on
/// scheduling.
pub fn scan(
    seq: &LiftedSequence,
    density_label: &str,
    shapes: &[Shape],
    range: DiagRange,
) -> Result<DiscrepancyReport, AnalysisError> {
    if seq.dimension() != 2 {
        return Err(AnalysisError::UnsupportedDimension(seq.dimension()));
    }
    if shapes.iter().any(|s| s.p == 0 || s.q == 0) {
        return Err(AnalysisError::EmptyShape);
    }
    let max_span = shapes.iter().map(Shape::span).max().unwrap_or(1);
    let profile = DiagonalProfile::new(seq, range, max_span)?;
    let records: Vec<ShapeRecord> = shapes
        .par_iter()
        .map(|&shape| {
            let ext = profile.extrema(shape, range);
            ShapeRecord {
                p: shape.p,
                q: shape.q,
                max: ext.max,
                min: ext.min,
                discrepancy: ext.discrepancy(),
            }
        })
        .collect();
    let overall_k = records.iter().map(|r| r.discrepancy).max().unwrap_or(0);
    // f enters the differences at indices start..end+d.
    let f_max = seq.empirical_max(profile.start(), profile.end() + seq.dimension() as i64)?;
    Ok(DiscrepancyReport {
        density: density_label.to_string(),
        d: seq.dimension(),
        theoretical_bound: balance_bound(seq.density(), seq.dimension())?,
        overall_k,
        shapes: records,
        region: format!(
            "anchor diagonals {range}, {} shapes, diagonals [{}, {})",
            shapes.len(),
            profile.start(),
            profile.end()
        ),
        empirical_f_max: f_max.to_decimal(6),
        generated_at: None,
    })
}
