//! Two-sided bounded sequences `f: Z → Q(a)` whose `d`-th forward difference
//! takes only the values `a` and `a − 1`.
//!
//! A one-sided sequence `x_1, x_2, …` with `x_1 = … = x_d = 0` extends to the
//! negative integers by `f(m) = ±x_{d+1−m}`, the sign being `−` for odd `d`. The
//! difference coefficients `(−1)^{d−i}·C(d, i)` are (anti)symmetric, which is what
//! keeps the reflected part inside the alphabet.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::number::{AffineValue, Density, QuadValue};
use crate::orbit::{bounds, OrbitCache, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("x_{index} = {value}, but the first {dim} entries must be zero")]
    NonZeroLead {
        index: usize,
        value: String,
        dim: u32,
    },
    #[error("sequence has {available} entries, x_{index} requested")]
    OutOfData { index: u64, available: usize },
    #[error("difference at {s} is {value}, which is neither a nor a-1")]
    NotInAlphabet { s: i64, value: String },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone)]
enum Source {
    /// `f ≡ 0`; the endpoint densities.
    Zero,
    /// `x` is the orbit of the skew-product map.
    Orbit(Arc<OrbitCache>),
    /// `f(n) = {n·a}` on all of Z, no reflection needed.
    Rotation,
    User(Arc<Vec<BigRational>>),
}

/// A bounded `f` on Z together with its declared sup-norm bound.
#[derive(Debug, Clone)]
pub struct LiftedSequence {
    density: Density,
    dim: u32,
    source: Source,
    bound: QuadValue,
}

fn binomial_row(d: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 0..d {
        let next = &row[k as usize] * (d - k) / (k + 1);
        row.push(next);
    }
    row
}

impl LiftedSequence {
    /// The planar (`d = 2`) construction from the orbit, bounded by `max(α, β)`.
    /// Endpoint densities get `f ≡ 0`.
    pub fn planar(a: &Density) -> Self {
        let n = a.radicand();
        if a.is_endpoint() {
            return LiftedSequence {
                density: a.clone(),
                dim: 2,
                source: Source::Zero,
                bound: QuadValue::from_int(0, &n),
            };
        }
        let cache = OrbitCache::new(a).expect("non-endpoint density");
        let bound = bounds(a).expect("non-endpoint density").envelope();
        LiftedSequence {
            density: a.clone(),
            dim: 2,
            source: Source::Orbit(Arc::new(cache)),
            bound,
        }
    }

    /// `d = 1`, `f(n) = {n·a}`, bound 1.
    pub fn sturmian(a: &Density) -> Self {
        LiftedSequence {
            density: a.clone(),
            dim: 1,
            source: Source::Rotation,
            bound: QuadValue::from_int(1, &a.radicand()),
        }
    }

    /// Wraps user data `x_1..x_N`. Alphabet membership is only checked when
    /// [`g_at`](Self::g_at) touches an index.
    pub fn from_values(
        dim: u32,
        a: &Density,
        values: Vec<BigRational>,
        bound: BigRational,
    ) -> Result<Self, LiftError> {
        if dim == 0 {
            return Err(LiftError::ZeroDimension);
        }
        for i in 0..dim as usize {
            match values.get(i) {
                Some(v) if v.is_zero() => {}
                Some(v) => {
                    return Err(LiftError::NonZeroLead {
                        index: i + 1,
                        value: v.to_string(),
                        dim,
                    })
                }
                None => {
                    return Err(LiftError::OutOfData {
                        index: i as u64 + 1,
                        available: values.len(),
                    })
                }
            }
        }
        Ok(LiftedSequence {
            density: a.clone(),
            dim,
            source: Source::User(Arc::new(values)),
            bound: QuadValue::from_rational(&bound, &a.radicand()),
        })
    }

    pub fn load_user_sequence(
        dim: u32,
        a: &Density,
        path: impl AsRef<Path>,
        bound: BigRational,
    ) -> Result<Self, LiftError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| LiftError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_values(dim, a, parse_user_sequence(&text)?, bound)
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn dimension(&self) -> u32 {
        self.dim
    }

    /// Declared sup-norm bound `‖f‖∞`.
    pub fn bound(&self) -> &QuadValue {
        &self.bound
    }

    pub fn is_user_supplied(&self) -> bool {
        matches!(self.source, Source::User(_))
    }

    /// Position in `x` and whether the value is negated.
    fn reflect(&self, m: i64) -> (u64, bool) {
        if m >= 1 {
            (m as u64, false)
        } else {
            ((self.dim as i64 + 1 - m) as u64, self.dim % 2 == 1)
        }
    }

    /// `f(m)` as `p + q·a`, for the built-in sources.
    fn f_affine(&self, m: i64) -> Option<AffineValue> {
        match &self.source {
            Source::Zero => Some(AffineValue::zero()),
            Source::Rotation => {
                let na = AffineValue::new(0, m);
                let fl = self.density.floor(&na);
                Some(AffineValue::new(-fl, m))
            }
            Source::Orbit(cache) => {
                let (n, negate) = self.reflect(m);
                let x = cache.x(n);
                Some(if negate { -x } else { x })
            }
            Source::User(_) => None,
        }
    }

    pub fn f_at(&self, m: i64) -> Result<QuadValue, LiftError> {
        if let Some(v) = self.f_affine(m) {
            return Ok(self.density.eval(&v));
        }
        let Source::User(values) = &self.source else {
            unreachable!("built-in sources are affine")
        };
        let (n, negate) = self.reflect(m);
        let v = values.get((n - 1) as usize).ok_or(LiftError::OutOfData {
            index: n,
            available: values.len(),
        })?;
        let q = QuadValue::from_rational(v, &self.density.radicand());
        Ok(if negate { -q } else { q })
    }

    /// `((u − 1)^d·f)(s) = Σ_i (−1)^{d−i}·C(d, i)·f(s + i)`, classified.
    pub fn g_at(&self, s: i64) -> Result<Symbol, LiftError> {
        let coeffs = binomial_row(self.dim);
        let signed = |i: usize, c: &BigInt| {
            if (self.dim as usize - i) % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            }
        };
        if !self.is_user_supplied() {
            let mut sum = AffineValue::zero();
            for (i, c) in coeffs.iter().enumerate() {
                let f = self.f_affine(s + i as i64).expect("built-in source");
                sum = &sum + &f.scale(signed(i, c));
            }
            return Symbol::classify(&self.density, &sum).ok_or_else(|| LiftError::NotInAlphabet {
                s,
                value: self.density.render(&sum, 12),
            });
        }
        let n = self.density.radicand();
        let mut sum = QuadValue::from_int(0, &n);
        for (i, c) in coeffs.iter().enumerate() {
            sum = &sum + &self.f_at(s + i as i64)?.scale(&signed(i, c));
        }
        let a = self.density.to_quad();
        let a_minus_one = &a - &QuadValue::from_int(1, &n);
        if sum == a {
            Ok(Symbol::A)
        } else if sum == a_minus_one {
            Ok(Symbol::AMinusOne)
        } else {
            Err(LiftError::NotInAlphabet {
                s,
                value: sum.to_string(),
            })
        }
    }

    /// `max |f(m)|` over `m ∈ [lo, hi]`.
    pub fn empirical_max(&self, lo: i64, hi: i64) -> Result<QuadValue, LiftError> {
        let mut best = QuadValue::from_int(0, &self.density.radicand());
        for m in lo..=hi {
            let v = self.f_at(m)?.abs();
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }
}

/// One exact rational per line (`p/q` or an integer); `#` starts a comment.
pub fn parse_user_sequence(text: &str) -> Result<Vec<BigRational>, LiftError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        let value = parse_rational(&compact).ok_or_else(|| LiftError::Parse {
            line: i + 1,
            message: format!("`{line}` is not an exact rational"),
        })?;
        out.push(value);
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (BigInt, BigInt) = (n.parse().ok()?, d.parse().ok()?);
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}
