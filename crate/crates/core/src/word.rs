//! The balanced word `w(g) = a − ((u − 1)^d·f)(θ(g))` on `Z^d`.
//!
//! `θ` sums coordinates, so the word is constant along anti-diagonals and every
//! query reduces to one difference of the lifted sequence.

use thiserror::Error;

use crate::lift::{LiftError, LiftedSequence};
use crate::number::{AffineValue, Density};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("point has arity {got}, word has dimension {expected}")]
    DimensionMismatch { expected: u32, got: usize },
    #[error("rectangle extents must be positive")]
    EmptyExtent,
    #[error("patches need a two-dimensional word, got dimension {0}")]
    NotPlanar(u32),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Coordinate sum.
pub fn theta(g: &[i64]) -> i64 {
    g.iter().sum()
}

/// `[o_1, o_1 + e_1) × … × [o_d, o_d + e_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeRect {
    origin: Vec<i64>,
    extents: Vec<u64>,
}

impl LatticeRect {
    pub fn new(origin: Vec<i64>, extents: Vec<u64>) -> Result<Self, WordError> {
        if origin.len() != extents.len() {
            return Err(WordError::DimensionMismatch {
                expected: origin.len() as u32,
                got: extents.len(),
            });
        }
        if extents.contains(&0) {
            return Err(WordError::EmptyExtent);
        }
        Ok(LatticeRect { origin, extents })
    }

    /// Planar rectangle: `width` cells along the first axis, `height` along the second.
    pub fn planar(x: i64, y: i64, width: u64, height: u64) -> Result<Self, WordError> {
        Self::new(vec![x, y], vec![width, height])
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn extents(&self) -> &[u64] {
        &self.extents
    }

    pub fn cardinality(&self) -> u128 {
        self.extents.iter().map(|&e| e as u128).product()
    }

    /// Smallest and largest `θ` over the rectangle.
    pub fn diagonal_span(&self) -> (i64, i64) {
        let lo = theta(&self.origin);
        let hi = lo + self.extents.iter().map(|&e| e as i64 - 1).sum::<i64>();
        (lo, hi)
    }
}

/// A planar window of the word, stored row-major: row `n` holds
/// `w(o_1 + m, o_2 + n)` for `m = 0..width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordPatch {
    rect: LatticeRect,
    bits: Vec<u8>,
}

impl WordPatch {
    pub fn from_bits(rect: LatticeRect, bits: Vec<u8>) -> Result<Self, WordError> {
        if rect.dim() != 2 {
            return Err(WordError::NotPlanar(rect.dim() as u32));
        }
        assert_eq!(
            bits.len() as u128,
            rect.cardinality(),
            "bit count must match the rectangle"
        );
        Ok(WordPatch { rect, bits })
    }

    pub fn rect(&self) -> &LatticeRect {
        &self.rect
    }

    pub fn width(&self) -> usize {
        self.rect.extents[0] as usize
    }

    pub fn height(&self) -> usize {
        self.rect.extents[1] as usize
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Bit at offset `(col, row)` from the origin.
    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.bits[row * self.width() + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.bits.chunks(self.width())
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|&b| b as u64).sum()
    }
}

fn endpoint_bit(a: &Density) -> Option<u8> {
    if a.is_zero() {
        Some(0)
    } else if a.is_one() {
        Some(1)
    } else {
        None
    }
}

/// Word value on one anti-diagonal `θ(g) = s`.
pub fn diagonal_bit(seq: &LiftedSequence, s: i64) -> Result<u8, WordError> {
    if let Some(b) = endpoint_bit(seq.density()) {
        return Ok(b);
    }
    Ok(seq.g_at(s)?.bit())
}

/// Bits for the diagonals `start, start + 1, …, start + len − 1`.
pub fn diagonal_bits(seq: &LiftedSequence, start: i64, len: usize) -> Result<Vec<u8>, WordError> {
    (0..len as i64)
        .map(|i| diagonal_bit(seq, start + i))
        .collect()
}

pub fn word_at(seq: &LiftedSequence, g: &[i64]) -> Result<u8, WordError> {
    if g.len() != seq.dimension() as usize {
        return Err(WordError::DimensionMismatch {
            expected: seq.dimension(),
            got: g.len(),
        });
    }
    diagonal_bit(seq, theta(g))
}

/// Evaluates one difference per diagonal crossing `rect` and broadcasts it.
pub fn patch(seq: &LiftedSequence, rect: &LatticeRect) -> Result<WordPatch, WordError> {
    if seq.dimension() != 2 || rect.dim() != 2 {
        return Err(WordError::NotPlanar(seq.dimension()));
    }
    let (lo, hi) = rect.diagonal_span();
    let diag = diagonal_bits(seq, lo, (hi - lo + 1) as usize)?;
    let (w, h) = (rect.extents[0] as usize, rect.extents[1] as usize);
    let mut bits = Vec::with_capacity(w * h);
    for row in 0..h {
        bits.extend_from_slice(&diag[row..row + w]);
    }
    Ok(WordPatch {
        rect: rect.clone(),
        bits,
    })
}

/// `⌊(m + 1)·a⌋ − ⌊m·a⌋`.
pub fn sturmian_word_at(a: &Density, m: i64) -> u8 {
    let lo = a.floor(&AffineValue::new(0, m));
    let hi = a.floor(&AffineValue::new(0, m + 1));
    u8::try_from(hi - lo).expect("floor difference of a density in [0, 1] is 0 or 1")
}
