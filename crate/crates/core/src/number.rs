//! Exact arithmetic over `Z + Z·a` and `Q(a)` for a rational or quadratic-surd density `a`.
//!
//! Every strict inequality the orbit map needs is decided here without floating
//! point. Signs of `A + B·√n` are settled by case analysis on the signs of the two
//! parts, falling back to a squared comparison when they disagree. A checked
//! `i128` path handles the common small-magnitude case before touching `BigInt`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use regex::Regex;
use thiserror::Error;

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_int(v: &BigInt) -> Self {
        match v.sign() {
            num_bigint::Sign::Minus => Sign::Negative,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Positive,
        }
    }

    fn of_i128(v: i128) -> Self {
        match v.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("malformed density `{0}`: expected NUM/DEN, a decimal literal, or (P+Q*sqrt(N))/R")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("density {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("radicand {0} is a perfect square or not positive; use the rational form")]
    SquareRadicand(BigInt),
}

/// Sign of `a + b·√n`. `n` must be zero or a positive non-square.
pub fn sign_surd(a: &BigInt, b: &BigInt, n: &BigInt) -> Sign {
    if let (Some(a), Some(b), Some(n)) = (a.to_i128(), b.to_i128(), n.to_i128()) {
        if let Some(s) = sign_surd_i128(a, b, n) {
            return s;
        }
    }
    let sa = Sign::of_int(a);
    let sb = if n.is_zero() {
        Sign::Zero
    } else {
        Sign::of_int(b)
    };
    match (sa, sb) {
        (s, Sign::Zero) => s,
        (Sign::Zero, s) => s,
        (x, y) if x == y => x,
        _ => {
            let lhs = a * a;
            let rhs = b * b * n;
            if lhs > rhs {
                sa
            } else {
                sb
            }
        }
    }
}

fn sign_surd_i128(a: i128, b: i128, n: i128) -> Option<Sign> {
    let sa = Sign::of_i128(a);
    let sb = if n == 0 { Sign::Zero } else { Sign::of_i128(b) };
    Some(match (sa, sb) {
        (s, Sign::Zero) => s,
        (Sign::Zero, s) => s,
        (x, y) if x == y => x,
        _ => {
            let lhs = a.checked_mul(a)?;
            let rhs = b.checked_mul(b)?.checked_mul(n)?;
            if lhs > rhs {
                sa
            } else {
                sb
            }
        }
    })
}

/// `⌊b·√n⌋` for non-square `n > 0` (or `n = 0`).
fn floor_root_term(b: &BigInt, n: &BigInt) -> BigInt {
    if b.is_zero() || n.is_zero() {
        return BigInt::zero();
    }
    let root = (b * b * n).sqrt();
    if b.is_negative() {
        -root - 1
    } else {
        root
    }
}

fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    a.gcd(b).gcd(c)
}

/// An exact element `(a + b·√n)/c` of `Q(√n)`, `c > 0`.
///
/// `n = 0` is the rational field; `b` is then always zero.
#[derive(Debug, Clone)]
pub struct QuadValue {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    n: BigInt,
}

impl QuadValue {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, n: BigInt) -> Self {
        assert!(!c.is_zero(), "QuadValue with zero denominator");
        let (a, b, c) = if c.is_negative() {
            (-a, -b, -c)
        } else {
            (a, b, c)
        };
        let b = if n.is_zero() { BigInt::zero() } else { b };
        let mut v = QuadValue { a, b, c, n };
        v.normalize();
        v
    }

    pub fn from_int(v: impl Into<BigInt>, n: &BigInt) -> Self {
        QuadValue::new(v.into(), BigInt::zero(), BigInt::one(), n.clone())
    }

    pub fn from_rational(r: &BigRational, n: &BigInt) -> Self {
        QuadValue::new(
            r.numer().clone(),
            BigInt::zero(),
            r.denom().clone(),
            n.clone(),
        )
    }

    fn normalize(&mut self) {
        let g = gcd3(&self.a, &self.b, &self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
    }

    /// Rational part numerator, radical coefficient, denominator, radicand.
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.n)
    }

    pub fn radicand(&self) -> &BigInt {
        &self.n
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    pub fn sign(&self) -> Sign {
        sign_surd(&self.a, &self.b, &self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn abs(&self) -> QuadValue {
        if self.sign().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn max(self, other: QuadValue) -> QuadValue {
        if self >= other {
            self
        } else {
            other
        }
    }

    fn field_of(&self, other: &QuadValue) -> BigInt {
        if self.n.is_zero() {
            other.n.clone()
        } else {
            debug_assert!(other.n.is_zero() || other.n == self.n, "mixed radicands");
            self.n.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<QuadValue> {
        if self.is_zero() {
            return None;
        }
        // c / (a + b√n) = c (a − b√n) / (a² − b² n)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.n;
        Some(QuadValue::new(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.n.clone(),
        ))
    }

    pub fn floor(&self) -> BigInt {
        let root = floor_root_term(&self.b, &self.n);
        (&self.a + root).div_floor(&self.c)
    }

    pub fn scale(&self, k: &BigInt) -> QuadValue {
        QuadValue::new(&self.a * k, &self.b * k, self.c.clone(), self.n.clone())
    }

    /// Decimal expansion with `digits` fractional digits, ties rounded away from zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let negative = self.sign().is_negative();
        let mag = self.abs();
        let pow = BigInt::from(10u32).pow(digits as u32);
        let two_pow = &pow * 2u32;
        // ⌊|v|·10^d + 1/2⌋ = ⌊(2·10^d·(a + b√n) + c) / 2c⌋
        let shifted = QuadValue::new(
            &mag.a * &two_pow + &mag.c,
            &mag.b * &two_pow,
            &mag.c * 2u32,
            mag.n.clone(),
        );
        let rounded = shifted.floor();
        format_scaled(&rounded, digits, negative)
    }

    /// Approximate value; display only.
    pub fn to_f64(&self) -> f64 {
        let root = self.n.to_f64().unwrap_or(f64::NAN).sqrt();
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        (a + b * root) / c
    }
}

fn format_scaled(rounded: &BigInt, digits: usize, negative: bool) -> String {
    let text = rounded.to_string();
    let body = if digits == 0 {
        text
    } else {
        let padded = format!("{:0>width$}", text, width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{int}.{frac}")
    };
    if negative && !rounded.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

impl PartialEq for QuadValue {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for QuadValue {}

impl PartialOrd for QuadValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().to_ordering()
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            let op = if self.b.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({}{}{}*sqrt({}))/{}",
                self.a,
                op,
                self.b.abs(),
                self.n,
                self.c
            )
        }
    }
}

impl<'a> Add<&'a QuadValue> for &'a QuadValue {
    type Output = QuadValue;
    fn add(self, rhs: &QuadValue) -> QuadValue {
        let n = self.field_of(rhs);
        if self.c == rhs.c {
            QuadValue::new(&self.a + &rhs.a, &self.b + &rhs.b, self.c.clone(), n)
        } else {
            QuadValue::new(
                &self.a * &rhs.c + &rhs.a * &self.c,
                &self.b * &rhs.c + &rhs.b * &self.c,
                &self.c * &rhs.c,
                n,
            )
        }
    }
}

impl<'a> Sub<&'a QuadValue> for &'a QuadValue {
    type Output = QuadValue;
    fn sub(self, rhs: &QuadValue) -> QuadValue {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QuadValue> for &'a QuadValue {
    type Output = QuadValue;
    fn mul(self, rhs: &QuadValue) -> QuadValue {
        let n = self.field_of(rhs);
        QuadValue::new(
            &self.a * &rhs.a + &self.b * &rhs.b * &n,
            &self.a * &rhs.b + &self.b * &rhs.a,
            &self.c * &rhs.c,
            n,
        )
    }
}

impl Neg for &QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            n: self.n.clone(),
        }
    }
}

impl Neg for QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        -&self
    }
}

impl Add for QuadValue {
    type Output = QuadValue;
    fn add(self, rhs: QuadValue) -> QuadValue {
        &self + &rhs
    }
}

impl Sub for QuadValue {
    type Output = QuadValue;
    fn sub(self, rhs: QuadValue) -> QuadValue {
        &self - &rhs
    }
}

impl Mul for QuadValue {
    type Output = QuadValue;
    fn mul(self, rhs: QuadValue) -> QuadValue {
        &self * &rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum DensityKind {
    Rational(BigRational),
    /// `(p + q·√n)/r` with `q ≠ 0`, `n` non-square, `r > 0`, `gcd(p, q, r) = 1`.
    Surd {
        p: BigInt,
        q: BigInt,
        n: BigInt,
        r: BigInt,
    },
}

/// The target density `a ∈ [0, 1]`, held exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Density {
    kind: DensityKind,
}

impl Density {
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, DensityError> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(DensityError::ZeroDenominator(format!("{num}/{den}")));
        }
        Self::from_ratio(BigRational::new(num, den))
    }

    fn from_ratio(r: BigRational) -> Result<Self, DensityError> {
        if r.is_negative() || r > BigRational::one() {
            return Err(DensityError::OutOfRange(r.to_string()));
        }
        Ok(Density {
            kind: DensityKind::Rational(r),
        })
    }

    /// `(p + q·√n)/r`. Square factors of `n` are pulled into `q`; `q = 0`
    /// yields the rational `p/r`.
    pub fn surd(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        n: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self, DensityError> {
        let (mut p, mut q, mut n, mut r) = (p.into(), q.into(), n.into(), r.into());
        if r.is_zero() {
            return Err(DensityError::ZeroDenominator(format!(
                "({p}+{q}*sqrt({n}))/{r}"
            )));
        }
        if !n.is_positive() || (&n.sqrt() * &n.sqrt()) == n {
            return Err(DensityError::SquareRadicand(n));
        }
        if q.is_zero() {
            return Self::rational(p, r);
        }
        let (k, rest) = extract_square_factor(&n);
        q *= k;
        n = rest;
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = gcd3(&p, &q, &r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        let d = Density {
            kind: DensityKind::Surd { p, q, n, r },
        };
        let v = d.to_quad();
        if v.sign().is_negative()
            || (&v - &QuadValue::from_int(1, v.radicand()))
                .sign()
                .is_positive()
        {
            return Err(DensityError::OutOfRange(d.to_string()));
        }
        Ok(d)
    }

    pub fn parse(text: &str) -> Result<Self, DensityError> {
        text.parse()
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, DensityKind::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.kind {
            DensityKind::Rational(r) => Some(r),
            DensityKind::Surd { .. } => None,
        }
    }

    /// The radicand `n` of `Q(√n)`, zero for rational densities.
    pub fn radicand(&self) -> BigInt {
        match &self.kind {
            DensityKind::Rational(_) => BigInt::zero(),
            DensityKind::Surd { n, .. } => n.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.kind, DensityKind::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.kind, DensityKind::Rational(r) if r.is_one())
    }

    /// `a ∈ {0, 1}`.
    pub fn is_endpoint(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    pub fn to_quad(&self) -> QuadValue {
        match &self.kind {
            DensityKind::Rational(r) => QuadValue::from_rational(r, &BigInt::zero()),
            DensityKind::Surd { p, q, n, r } => {
                QuadValue::new(p.clone(), q.clone(), r.clone(), n.clone())
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_quad().to_f64()
    }

    /// Exact sign of `p + q·a`.
    pub fn sign(&self, v: &AffineValue) -> Sign {
        match &self.kind {
            DensityKind::Rational(r) => {
                if let (Some(p), Some(q), Some(num), Some(den)) = (
                    v.p.to_i128(),
                    v.q.to_i128(),
                    r.numer().to_i128(),
                    r.denom().to_i128(),
                ) {
                    if let Some(s) = p
                        .checked_mul(den)
                        .and_then(|x| q.checked_mul(num).and_then(|y| x.checked_add(y)))
                    {
                        return Sign::of_i128(s);
                    }
                }
                Sign::of_int(&(&v.p * r.denom() + &v.q * r.numer()))
            }
            DensityKind::Surd { p: sp, q: sq, n, r } => {
                // r·(p + q·a) = (p·r + q·sp) + q·sq·√n
                if let (Some(p), Some(q), Some(sp), Some(sq), Some(n), Some(r)) = (
                    v.p.to_i128(),
                    v.q.to_i128(),
                    sp.to_i128(),
                    sq.to_i128(),
                    n.to_i128(),
                    r.to_i128(),
                ) {
                    let rational = p
                        .checked_mul(r)
                        .and_then(|x| q.checked_mul(sp).and_then(|y| x.checked_add(y)));
                    let radical = q.checked_mul(sq);
                    if let (Some(a), Some(b)) = (rational, radical) {
                        if let Some(s) = sign_surd_i128(a, b, n) {
                            return s;
                        }
                    }
                }
                let a = &v.p * r + &v.q * sp;
                let b = &v.q * sq;
                sign_surd(&a, &b, n)
            }
        }
    }

    pub fn cmp_values(&self, u: &AffineValue, v: &AffineValue) -> Ordering {
        self.sign(&(u - v)).to_ordering()
    }

    /// `a = (P + Q·√n)/R`, with `Q = n = 0` for rational densities.
    fn surd_parts(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        match &self.kind {
            DensityKind::Rational(r) => (
                r.numer().clone(),
                BigInt::zero(),
                BigInt::zero(),
                r.denom().clone(),
            ),
            DensityKind::Surd { p, q, n, r } => (p.clone(), q.clone(), n.clone(), r.clone()),
        }
    }

    /// Compares `p + q·a` against an element of `Q(a)`.
    pub fn cmp_quad(&self, v: &AffineValue, w: &QuadValue) -> Ordering {
        let (sp, sq, n, r) = self.surd_parts();
        let (wa, wb, wc, _) = w.parts();
        // C·R·(v − w) = [C·(p·R + q·P) − R·A] + [C·q·Q − R·B]·√n
        let fast = (|| {
            let (p, q) = (v.p.to_i128()?, v.q.to_i128()?);
            let (sp, sq, n, r) = (sp.to_i128()?, sq.to_i128()?, n.to_i128()?, r.to_i128()?);
            let (wa, wb, wc) = (wa.to_i128()?, wb.to_i128()?, wc.to_i128()?);
            let rational = wc
                .checked_mul(p.checked_mul(r)?.checked_add(q.checked_mul(sp)?)?)?
                .checked_sub(r.checked_mul(wa)?)?;
            let radical = wc
                .checked_mul(q.checked_mul(sq)?)?
                .checked_sub(r.checked_mul(wb)?)?;
            sign_surd_i128(rational, radical, n)
        })();
        if let Some(s) = fast {
            return s.to_ordering();
        }
        let rational = wc * (&v.p * &r + &v.q * &sp) - &r * wa;
        let radical = wc * (&v.q * &sq) - &r * wb;
        sign_surd(&rational, &radical, &n).to_ordering()
    }

    /// The real number `p + q·a` as an element of `Q(a)`.
    pub fn eval(&self, v: &AffineValue) -> QuadValue {
        let n = self.radicand();
        let a = self.to_quad();
        &QuadValue::from_int(v.p.clone(), &n) + &a.scale(&v.q)
    }

    pub fn floor(&self, v: &AffineValue) -> BigInt {
        match &self.kind {
            DensityKind::Rational(r) => (&v.p * r.denom() + &v.q * r.numer()).div_floor(r.denom()),
            DensityKind::Surd { .. } => self.eval(v).floor(),
        }
    }

    pub fn to_decimal(&self, v: &AffineValue, digits: usize) -> String {
        self.eval(v).to_decimal(digits)
    }

    /// Exact rendering: a reduced fraction for rational densities, otherwise
    /// the decimal expansion to `digits` places.
    pub fn render(&self, v: &AffineValue, digits: usize) -> String {
        let q = self.eval(v);
        if q.is_rational() {
            q.to_string()
        } else {
            q.to_decimal(digits)
        }
    }
}

fn extract_square_factor(n: &BigInt) -> (BigInt, BigInt) {
    const TRIAL_LIMIT: u64 = 1 << 20;
    let mut rest = n.clone();
    let mut k = BigInt::one();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let dd = BigInt::from(d * d);
        if dd > rest {
            break;
        }
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            k *= d;
        }
        d += 1;
    }
    (k, rest)
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DensityKind::Rational(r) => write!(f, "{r}"),
            DensityKind::Surd { p, q, n, r } => {
                let op = if q.is_negative() { '-' } else { '+' };
                write!(f, "({p}{op}{}*sqrt({n}))/{r}", q.abs())
            }
        }
    }
}

fn surd_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\(([+-]?\d+)([+-])(\d+)\*sqrt\((\d+)\)\)/([+-]?\d+)$").expect("valid regex")
    })
}

fn ratio_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^([+-]?\d+)/([+-]?\d+)$").expect("valid regex"))
}

fn decimal_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^([+-]?)(\d*)(?:\.(\d*))?$").expect("valid regex"))
}

fn int(s: &str) -> BigInt {
    s.parse().expect("regex admits only integer literals")
}

impl FromStr for Density {
    type Err = DensityError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(c) = surd_pattern().captures(&compact) {
            let q = int(&c[3]);
            let q = if &c[2] == "-" { -q } else { q };
            return Density::surd(int(&c[1]), q, int(&c[4]), int(&c[5]));
        }
        if let Some(c) = ratio_pattern().captures(&compact) {
            let den = int(&c[2]);
            if den.is_zero() {
                return Err(DensityError::ZeroDenominator(compact));
            }
            return Density::rational(int(&c[1]), den);
        }
        if let Some(c) = decimal_pattern().captures(&compact) {
            let whole = &c[2];
            let frac = c.get(3).map_or("", |m| m.as_str());
            if whole.is_empty() && frac.is_empty() {
                return Err(DensityError::Malformed(text.to_string()));
            }
            let digits = format!("{whole}{frac}");
            let mut num = int(&digits);
            if &c[1] == "-" {
                num = -num;
            }
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            return Density::rational(num, den);
        }
        Err(DensityError::Malformed(text.to_string()))
    }
}

/// `p + q·a` for the ambient density `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineValue {
    pub p: BigInt,
    pub q: BigInt,
}

impl AffineValue {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        AffineValue {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn zero() -> Self {
        AffineValue::default()
    }

    pub fn one() -> Self {
        AffineValue::new(1, 0)
    }

    /// The density itself, `0 + 1·a`.
    pub fn a() -> Self {
        AffineValue::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        AffineValue {
            p: &self.p * &k,
            q: &self.q * &k,
        }
    }
}

impl fmt::Display for AffineValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_negative() {
            write!(f, "{}-{}a", self.p, self.q.abs())
        } else {
            write!(f, "{}+{}a", self.p, self.q)
        }
    }
}

impl<'a> Add<&'a AffineValue> for &'a AffineValue {
    type Output = AffineValue;
    fn add(self, rhs: &AffineValue) -> AffineValue {
        AffineValue {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl<'a> Sub<&'a AffineValue> for &'a AffineValue {
    type Output = AffineValue;
    fn sub(self, rhs: &AffineValue) -> AffineValue {
        AffineValue {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Add for AffineValue {
    type Output = AffineValue;
    fn add(self, rhs: AffineValue) -> AffineValue {
        AffineValue {
            p: self.p + rhs.p,
            q: self.q + rhs.q,
        }
    }
}

impl Sub for AffineValue {
    type Output = AffineValue;
    fn sub(self, rhs: AffineValue) -> AffineValue {
        AffineValue {
            p: self.p - rhs.p,
            q: self.q - rhs.q,
        }
    }
}

impl Neg for AffineValue {
    type Output = AffineValue;
    fn neg(self) -> AffineValue {
        AffineValue {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl Neg for &AffineValue {
    type Output = AffineValue;
    fn neg(self) -> AffineValue {
        AffineValue {
            p: -&self.p,
            q: -&self.q,
        }
    }
}
