//! The skew-product map `T(x, y) = (x + y, y + h(x, y))` and its orbit from the origin.
//!
//! States are indexed from 1 with `(x_1, y_1) = (0, 0)`, so `x_1 = x_2 = 0` and the
//! second difference of `x` at step `n` is exactly `h(x_n, y_n)`.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::number::{AffineValue, Density, QuadValue, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("density {0} is an endpoint of [0, 1]; the orbit bounds diverge there")]
    Endpoint(String),
    #[error("period detection needs a rational density, got {0}")]
    Irrational(String),
    #[error("orbit invariant violated at step {step}: {detail}")]
    InvariantViolation { step: u64, detail: String },
}

/// The two values `h` may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// `a`, coded by bit 0.
    A,
    /// `a − 1`, coded by bit 1.
    AMinusOne,
}

impl Symbol {
    /// Word bit `a − value`.
    pub fn bit(self) -> u8 {
        match self {
            Symbol::A => 0,
            Symbol::AMinusOne => 1,
        }
    }

    pub fn value(self) -> AffineValue {
        match self {
            Symbol::A => AffineValue::new(0, 1),
            Symbol::AMinusOne => AffineValue::new(-1, 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Symbol::A => "a",
            Symbol::AMinusOne => "a-1",
        }
    }

    /// `Some` when `v` equals `a` or `a − 1` as a real number.
    pub fn classify(a: &Density, v: &AffineValue) -> Option<Symbol> {
        [Symbol::A, Symbol::AMinusOne]
            .into_iter()
            .find(|s| a.sign(&(v - &s.value())) == Sign::Zero)
    }
}

/// `a − 1` if `y + a > 1`, or if both `x` and `y + a` are positive; `a` otherwise.
pub fn h_value(x: &AffineValue, y: &AffineValue, a: &Density) -> Symbol {
    let shifted = AffineValue {
        p: y.p.clone(),
        q: &y.q + 1,
    };
    let over_one = AffineValue {
        p: &shifted.p - 1,
        q: shifted.q.clone(),
    };
    if a.sign(&over_one).is_positive()
        || (a.sign(x).is_positive() && a.sign(&shifted).is_positive())
    {
        Symbol::AMinusOne
    } else {
        Symbol::A
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitState {
    /// 1-based index.
    pub step: u64,
    pub x: AffineValue,
    pub y: AffineValue,
}

impl OrbitState {
    pub fn origin() -> Self {
        OrbitState {
            step: 1,
            x: AffineValue::zero(),
            y: AffineValue::zero(),
        }
    }
}

pub fn advance(s: &OrbitState, a: &Density) -> OrbitState {
    let h = h_value(&s.x, &s.y, a);
    OrbitState {
        step: s.step + 1,
        x: &s.x + &s.y,
        y: &s.y + &h.value(),
    }
}

/// Proven envelope of the orbit: `−β ≤ x_n ≤ α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// `1/(1 − a) + 2`
    pub alpha: QuadValue,
    /// `2 + 1/a`
    pub beta: QuadValue,
}

impl Bounds {
    /// `max(α, β)`, the sup-norm bound on the lifted sequence.
    pub fn envelope(&self) -> QuadValue {
        self.alpha.clone().max(self.beta.clone())
    }
}

pub fn bounds(a: &Density) -> Result<Bounds, OrbitError> {
    if a.is_endpoint() {
        return Err(OrbitError::Endpoint(a.to_string()));
    }
    let v = a.to_quad();
    let n = v.radicand().clone();
    let one = QuadValue::from_int(1, &n);
    let two = QuadValue::from_int(2, &n);
    let alpha = &(&one - &v).recip().expect("a < 1") + &two;
    let beta = &two + &v.recip().expect("a > 0");
    Ok(Bounds { alpha, beta })
}

struct InvariantChecker {
    alpha: QuadValue,
    neg_beta: QuadValue,
}

impl InvariantChecker {
    fn new(a: &Density) -> Result<Self, OrbitError> {
        let b = bounds(a)?;
        Ok(InvariantChecker {
            alpha: b.alpha,
            neg_beta: -b.beta,
        })
    }

    fn check(&self, a: &Density, s: &OrbitState) -> Result<(), OrbitError> {
        let fail = |detail: String| {
            Err(OrbitError::InvariantViolation {
                step: s.step,
                detail,
            })
        };
        let one = AffineValue::one();
        if a.sign(&(&s.y + &one)).is_negative() || a.sign(&(&one - &s.y)).is_negative() {
            return fail(format!("y = {} outside [-1, 1]", a.render(&s.y, 12)));
        }
        if a.cmp_quad(&s.x, &self.alpha).is_gt() {
            return fail(format!(
                "x = {} exceeds alpha = {}",
                a.render(&s.x, 12),
                self.alpha
            ));
        }
        if a.cmp_quad(&s.x, &self.neg_beta).is_lt() {
            return fail(format!(
                "x = {} below -beta = {}",
                a.render(&s.x, 12),
                self.neg_beta
            ));
        }
        Ok(())
    }
}

/// Streaming orbit from `(0, 0)`, checking the boundedness invariants at every state.
///
/// Yields `Err` once on the first violation and then stops.
pub struct Orbit {
    density: Density,
    next: Option<OrbitState>,
    checker: InvariantChecker,
}

impl Orbit {
    pub fn new(a: &Density) -> Result<Self, OrbitError> {
        Ok(Orbit {
            density: a.clone(),
            next: Some(OrbitState::origin()),
            checker: InvariantChecker::new(a)?,
        })
    }

    pub fn density(&self) -> &Density {
        &self.density
    }
}

impl Iterator for Orbit {
    type Item = Result<OrbitState, OrbitError>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        if let Err(e) = self.checker.check(&self.density, &current) {
            return Some(Err(e));
        }
        let following = advance(&current, &self.density);
        debug_assert_eq!(following.x, &current.x + &current.y);
        debug_assert!(Symbol::classify(&self.density, &(&following.y - &current.y)).is_some());
        self.next = Some(following);
        Some(Ok(current))
    }
}

/// States `1..=n`, every one checked against the proven bounds.
pub fn orbit_prefix(a: &Density, n: usize) -> Result<Vec<OrbitState>, OrbitError> {
    Orbit::new(a)?.take(n).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Period {
    pub preperiod: u64,
    pub period: u64,
}

/// Least `(preperiod, period)` with `state[preperiod + 1 + period] = state[preperiod + 1]`,
/// searching the first `max_steps` states.
pub fn detect_period(a: &Density, max_steps: u64) -> Result<Option<Period>, OrbitError> {
    let ratio = a
        .as_rational()
        .ok_or_else(|| OrbitError::Irrational(a.to_string()))?;
    let (num, den) = (ratio.numer().clone(), ratio.denom().clone());
    // States compared as real numbers: scale both coordinates by the denominator.
    let key = |v: &AffineValue| -> BigInt { &v.p * &den + &v.q * &num };
    let mut seen: HashMap<(BigInt, BigInt), u64> = HashMap::new();
    for state in Orbit::new(a)?.take(max_steps as usize) {
        let state = state?;
        let k = (key(&state.x), key(&state.y));
        if let Some(&first) = seen.get(&k) {
            return Ok(Some(Period {
                preperiod: first - 1,
                period: state.step - first,
            }));
        }
        seen.insert(k, state.step);
    }
    Ok(None)
}

/// Append-only memo of `x_1, x_2, …` for one density.
///
/// Only the integer part `p` of each `x_n = p + q·a` is stored; `q` is always
/// `(n−1)(n−2)/2` because every increment of `y` carries exactly one `a`.
pub struct OrbitCache {
    density: Density,
    inner: RwLock<CacheInner>,
}

struct CacheInner {
    x_p: Vec<i64>,
    orbit: Orbit,
}

const CACHE_CHUNK: u64 = 4096;

impl OrbitCache {
    pub fn new(a: &Density) -> Result<Self, OrbitError> {
        Ok(OrbitCache {
            density: a.clone(),
            inner: RwLock::new(CacheInner {
                x_p: Vec::new(),
                orbit: Orbit::new(a)?,
            }),
        })
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn len(&self) -> u64 {
        self.inner.read().expect("orbit cache poisoned").x_p.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn x_q(n: u64) -> BigInt {
        let m = (n - 1) as u128;
        BigInt::from(m * m.saturating_sub(1) / 2)
    }

    /// Make `x_1..=x_n` available.
    ///
    /// # Panics
    /// On an invariant violation of the orbit; the boundedness theorem rules
    /// these out, so reaching one means a defect in the arithmetic.
    pub fn ensure(&self, n: u64) {
        if self.len() >= n {
            return;
        }
        let mut inner = self.inner.write().expect("orbit cache poisoned");
        let target = n.div_ceil(CACHE_CHUNK) * CACHE_CHUNK;
        while (inner.x_p.len() as u64) < target {
            let state = inner
                .orbit
                .next()
                .expect("orbit is infinite")
                .unwrap_or_else(|e| panic!("orbit of a = {}: {e}", self.density));
            debug_assert_eq!(state.x.q, Self::x_q(state.step));
            let p = state
                .x
                .p
                .to_i64()
                .expect("orbit coordinate exceeds the i64 cache range");
            inner.x_p.push(p);
        }
    }

    /// `x_n` for `n ≥ 1`.
    pub fn x(&self, n: u64) -> AffineValue {
        assert!(n >= 1, "orbit indices start at 1");
        self.ensure(n);
        let inner = self.inner.read().expect("orbit cache poisoned");
        AffineValue {
            p: BigInt::from(inner.x_p[(n - 1) as usize]),
            q: Self::x_q(n),
        }
    }
}

impl std::fmt::Debug for OrbitCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrbitCache")
            .field("density", &self.density.to_string())
            .field("len", &self.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Density {
        Density::parse(s).unwrap()
    }

    fn halves(v: &AffineValue) -> i64 {
        // value·2 for a = 1/2
        let v: BigInt = &v.p * 2 + &v.q;
        v.to_i64().unwrap()
    }

    #[test]
    fn h_cases() {
        let a = d("1/2");
        assert_eq!(
            h_value(&AffineValue::zero(), &AffineValue::zero(), &a),
            Symbol::A
        );
        assert_eq!(
            h_value(&AffineValue::new(0, 1), &AffineValue::one(), &a),
            Symbol::AMinusOne
        );
        assert_eq!(
            h_value(&AffineValue::new(2, 0), &AffineValue::new(0, -1), &a),
            Symbol::A
        );
        for s in ["1/3", "(0+1*sqrt(2))/3", "0.9"] {
            assert_eq!(
                h_value(&AffineValue::zero(), &AffineValue::zero(), &d(s)),
                Symbol::A
            );
        }
    }

    #[test]
    fn advance_examples() {
        let a = d("1/2");
        let s = advance(&OrbitState::origin(), &a);
        assert_eq!((halves(&s.x), halves(&s.y), s.step), (0, 1, 2));
        let s = advance(
            &OrbitState {
                step: 3,
                x: AffineValue::new(0, 1),
                y: AffineValue::one(),
            },
            &a,
        );
        assert_eq!((halves(&s.x), halves(&s.y)), (3, 1));
        let s = advance(
            &OrbitState {
                step: 7,
                x: AffineValue::new(5, 0),
                y: AffineValue::zero(),
            },
            &a,
        );
        assert_eq!(s.x, AffineValue::new(5, 0));
    }

    #[test]
    fn half_orbit_prefix() {
        let states = orbit_prefix(&d("1/2"), 13).unwrap();
        let xs: Vec<i64> = states.iter().map(|s| halves(&s.x)).collect();
        let ys: Vec<i64> = states.iter().map(|s| halves(&s.y)).collect();
        assert_eq!(xs, [0, 0, 1, 3, 4, 4, 3, 3, 2, 2, 1, 1, 0]);
        assert_eq!(ys, [0, 1, 2, 1, 0, -1, 0, -1, 0, -1, 0, -1, 0]);
    }

    #[test]
    fn early_states() {
        for s in ["1/3", "2/3", "(-1+1*sqrt(5))/2", "(0+1*sqrt(2))/3"] {
            let a = d(s);
            let st = orbit_prefix(&a, 3).unwrap();
            assert!(st[0].x.is_zero() && st[1].x.is_zero());
            assert_eq!(a.sign(&(&st[2].x - &AffineValue::a())), Sign::Zero);
        }
    }

    #[test]
    fn bound_values() {
        let n0 = BigInt::from(0);
        let q = |p: i64, r: i64| {
            QuadValue::from_rational(&num_rational::BigRational::new(p.into(), r.into()), &n0)
        };
        let b = bounds(&d("1/2")).unwrap();
        assert_eq!((b.alpha, b.beta), (q(4, 1), q(4, 1)));
        let b = bounds(&d("1/3")).unwrap();
        assert_eq!((b.alpha.clone(), b.beta.clone()), (q(7, 2), q(5, 1)));
        assert_eq!(b.envelope(), q(5, 1));
        let b = bounds(&d("(0+1*sqrt(2))/3")).unwrap();
        assert_eq!(b.alpha.to_decimal(4), "3.8918");
        assert_eq!(b.beta.to_decimal(4), "4.1213");
        assert!(matches!(bounds(&d("0")), Err(OrbitError::Endpoint(_))));
        assert!(matches!(bounds(&d("1")), Err(OrbitError::Endpoint(_))));
    }

    #[test]
    fn periods() {
        assert_eq!(
            detect_period(&d("1/2"), 100).unwrap(),
            Some(Period {
                preperiod: 0,
                period: 12
            })
        );
        assert!(matches!(
            detect_period(&d("1"), 10),
            Err(OrbitError::Endpoint(_))
        ));
        assert!(matches!(
            detect_period(&d("(0+1*sqrt(2))/3"), 10),
            Err(OrbitError::Irrational(_))
        ));
        // period ≤ (⌈α+β⌉·3+1)·(2·3+1) = (⌈17/2⌉·3 + 1)·7 = 196
        let p = detect_period(&d("1/3"), 100_000).unwrap().unwrap();
        assert!(p.period <= 196, "{p:?}");
        assert_eq!(detect_period(&d("1/2"), 12).unwrap(), None);
    }

    #[test]
    fn cache_matches_stream() {
        let a = d("(0+1*sqrt(2))/3");
        let cache = OrbitCache::new(&a).unwrap();
        let states = orbit_prefix(&a, 5000).unwrap();
        for s in states.iter().rev() {
            assert_eq!(cache.x(s.step), s.x);
        }
        assert!(cache.len() >= 5000);
    }

    #[test]
    fn cache_is_shareable_across_threads() {
        let cache = std::sync::Arc::new(OrbitCache::new(&d("2/3")).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let c = cache.clone();
                std::thread::spawn(move || c.x(1000 * (i + 1) + 17))
            })
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        let states = orbit_prefix(&d("2/3"), 4100).unwrap();
        for (i, x) in got.iter().enumerate() {
            assert_eq!(*x, states[1000 * (i + 1) + 16].x);
        }
    }

    #[test]
    fn sign_trapping_on_positive_runs() {
        // While x stays positive, a non-positive y stays non-positive; dually for x ≤ 0.
        for s in ["1/3", "7/10", "(0+1*sqrt(2))/2", "(-1+1*sqrt(5))/2"] {
            let a = d(s);
            let states = orbit_prefix(&a, 20_000).unwrap();
            for w in states.windows(2) {
                let (cur, next) = (&w[0], &w[1]);
                let x_pos = a.sign(&cur.x).is_positive();
                if x_pos && a.sign(&cur.y) != Sign::Positive {
                    assert_ne!(a.sign(&next.y), Sign::Positive, "{s} step {}", cur.step);
                }
                if !x_pos && a.sign(&cur.y) != Sign::Negative {
                    assert_ne!(a.sign(&next.y), Sign::Negative, "{s} step {}", cur.step);
                }
            }
        }
    }
}
