//! Balanced `{0,1}`-words on `Z^d` of any density `a ∈ [0, 1]`, irrational included.
//!
//! The planar word is built in three layers:
//!
//! 1. [`orbit`] iterates `T(x, y) = (x + y, y + h(x, y))` from the origin, where
//!    `h` picks `a` or `a − 1`; the orbit stays in `[−β, α] × [−1, 1]` with
//!    `α = 1/(1−a) + 2` and `β = 2 + 1/a`.
//! 2. [`lift`] reflects the one-sided sequence `x` onto all of Z. Its second
//!    difference takes only the values `a` and `a − 1`.
//! 3. [`word`] reads that difference along anti-diagonals:
//!    `w(m, n) = a − ((u − 1)²·f)(m + n)`.
//!
//! Every rectangle sum of `a − w` is then bounded by `4·max(α, β)`, so the word is
//! balanced with constant `⌊8·max(α, β)⌋`. [`analysis`] checks those claims
//! numerically. All arithmetic in [`number`] is exact.
//!
//! ```
//! use balword::{number::Density, lift::LiftedSequence, word};
//!
//! let a = Density::parse("(0+1*sqrt(2))/3").unwrap();
//! let seq = LiftedSequence::planar(&a);
//! let bit = word::word_at(&seq, &[3, -1]).unwrap();
//! assert!(bit <= 1);
//! ```

pub mod analysis;
pub mod cli;
pub mod lift;
pub mod number;
pub mod orbit;
pub mod word;

pub use analysis::{DiagRange, DiscrepancyReport, Extrema, Shape};
pub use lift::LiftedSequence;
pub use number::{AffineValue, Density, QuadValue, Sign};
pub use orbit::{OrbitState, Symbol};
pub use word::{LatticeRect, WordPatch};
