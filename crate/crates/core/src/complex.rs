//! Complex scalars as pairs of reals.
//!
//! Sums and products are the componentwise formulas
//! `(a₁+a₂) + i(b₁+b₂)` and `(a₁a₂-b₁b₂) + i(a₁b₂+a₂b₁)`. Both are exact on
//! integer-valued components (up to 2⁵³), which the rest of the crate relies
//! on for exact identity checks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default comparison tolerance.
pub const DEFAULT_EPSILON: f64 = 1e-9;

static GLOBAL_EPSILON: AtomicU64 = AtomicU64::new(DEFAULT_EPSILON.to_bits());

/// Absolute comparison tolerance, applied per component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tolerance(f64);

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance(0.0);

    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon >= 0.0 {
            Ok(Tolerance(epsilon))
        } else {
            Err(Error::Precondition(format!(
                "tolerance must be finite and non-negative, got {epsilon}"
            )))
        }
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }

    /// The process-wide tolerance used by operations that prune or compare
    /// without an explicit tolerance argument.
    pub fn global() -> Self {
        Tolerance(f64::from_bits(GLOBAL_EPSILON.load(Ordering::Relaxed)))
    }

    pub fn set_global(tol: Tolerance) {
        GLOBAL_EPSILON.store(tol.0.to_bits(), Ordering::Relaxed);
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_EPSILON)
    }
}

impl TryFrom<f64> for Tolerance {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Tolerance::new(value)
    }
}

impl From<Tolerance> for f64 {
    fn from(t: Tolerance) -> f64 {
        t.0
    }
}

/// `re + i·im`.
///
/// `PartialEq` compares components exactly; use [`ComplexValue::approx_eq`]
/// for tolerance-based equality.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Deserialize)]
struct RawComplex {
    re: f64,
    im: f64,
}

impl TryFrom<RawComplex> for ComplexValue {
    type Error = Error;
    fn try_from(raw: RawComplex) -> Result<Self> {
        ComplexValue::new(raw.re, raw.im)
    }
}

impl ComplexValue {
    pub const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };
    pub const ONE: ComplexValue = ComplexValue { re: 1.0, im: 0.0 };
    pub const I: ComplexValue = ComplexValue { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexValue { re, im })
        } else {
            Err(Error::NonFinite("complex value"))
        }
    }

    pub const fn real(re: f64) -> Self {
        ComplexValue { re, im: 0.0 }
    }

    pub const fn from_ints(re: i64, im: i64) -> Self {
        ComplexValue {
            re: re as f64,
            im: im as f64,
        }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// `max(|re|, |im|)`, the norm that tolerances are measured in.
    pub fn max_abs(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }

    pub fn deviation(self, other: ComplexValue) -> f64 {
        (self - other).max_abs()
    }

    pub fn approx_eq(self, other: ComplexValue, tol: Tolerance) -> bool {
        self.deviation(other) <= tol.epsilon()
    }

    pub fn is_zero_within(self, tol: Tolerance) -> bool {
        self.max_abs() <= tol.epsilon()
    }

    pub fn conj(self) -> Self {
        ComplexValue {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        ComplexValue {
            re: self.re * k,
            im: self.im * k,
        }
    }

    /// `(a - ib) / (a² + b²)`.
    pub fn inv(self) -> Result<Self> {
        self.inv_within(Tolerance::global())
    }

    pub fn inv_within(self, tol: Tolerance) -> Result<Self> {
        if self.is_zero_within(tol) {
            return Err(Error::DivisionByZero);
        }
        let d = self.re * self.re + self.im * self.im;
        Ok(ComplexValue {
            re: self.re / d,
            im: -self.im / d,
        })
    }

    /// `self^n` by repeated multiplication; `z⁰ = 1`.
    pub fn powu(self, n: u32) -> Self {
        let mut acc = ComplexValue::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for ComplexValue {
    type Output = ComplexValue;
    fn add(self, rhs: ComplexValue) -> ComplexValue {
        ComplexValue {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ComplexValue {
    type Output = ComplexValue;
    fn sub(self, rhs: ComplexValue) -> ComplexValue {
        ComplexValue {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for ComplexValue {
    type Output = ComplexValue;
    fn mul(self, rhs: ComplexValue) -> ComplexValue {
        ComplexValue {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + rhs.re * self.im,
        }
    }
}

impl Neg for ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl From<f64> for ComplexValue {
    fn from(re: f64) -> Self {
        ComplexValue::real(re)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // +0.0 so that -0 prints as 0
        let re = self.re + 0.0;
        let im = self.im + 0.0;
        match (re == 0.0, im == 0.0) {
            (_, true) => write!(f, "{re}"),
            (true, false) => write!(f, "{im}i"),
            (false, false) if im < 0.0 => write!(f, "{re}-{}i", -im),
            (false, false) => write!(f, "{re}+{im}i"),
        }
    }
}

pub fn c_add(z1: ComplexValue, z2: ComplexValue) -> ComplexValue {
    z1 + z2
}

pub fn c_mul(z1: ComplexValue, z2: ComplexValue) -> ComplexValue {
    z1 * z2
}

pub fn c_inv(z: ComplexValue) -> Result<ComplexValue> {
    z.inv()
}

/// Where random test values are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleDomain {
    /// Integer components in `[-bound, bound]`.
    IntegerGrid { bound: i64 },
    /// Components uniform in `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
}

impl SampleDomain {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ComplexValue {
        match *self {
            SampleDomain::IntegerGrid { bound } => ComplexValue::from_ints(
                rng.gen_range(-bound..=bound),
                rng.gen_range(-bound..=bound),
            ),
            SampleDomain::Uniform { lo, hi } => ComplexValue {
                re: rng.gen_range(lo..hi),
                im: rng.gen_range(lo..hi),
            },
        }
    }
}

/// Pass/fail tally for one algebraic law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawTally {
    pub law: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub worst_deviation: f64,
}

impl LawTally {
    pub fn new(law: &'static str) -> Self {
        LawTally {
            law,
            checked: 0,
            failures: 0,
            worst_deviation: 0.0,
        }
    }

    pub fn record(&mut self, deviation: f64, tol: Tolerance) {
        self.checked += 1;
        if deviation > tol.epsilon() || deviation.is_nan() {
            self.failures += 1;
        }
        if deviation > self.worst_deviation || deviation.is_nan() {
            self.worst_deviation = deviation;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldReport {
    pub domain: SampleDomain,
    pub samples: usize,
    pub tolerance: f64,
    pub laws: Vec<LawTally>,
}

impl FieldReport {
    pub fn failures(&self) -> usize {
        self.laws.iter().map(|l| l.failures).sum()
    }

    pub fn law(&self, name: &str) -> Option<&LawTally> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// Checks the field axioms on `samples` random triples.
pub fn verify_field_axioms<R: Rng + ?Sized>(
    rng: &mut R,
    samples: usize,
    domain: SampleDomain,
    tol: Tolerance,
) -> FieldReport {
    let names = [
        "add_associative",
        "add_commutative",
        "add_identity",
        "add_inverse",
        "mul_associative",
        "mul_commutative",
        "mul_identity",
        "distributive",
        "mul_inverse",
    ];
    let mut laws: Vec<LawTally> = names.iter().map(|n| LawTally::new(n)).collect();
    for _ in 0..samples {
        let (x, y, z) = (domain.sample(rng), domain.sample(rng), domain.sample(rng));
        let devs = [
            ((x + y) + z).deviation(x + (y + z)),
            (x + y).deviation(y + x),
            (x + ComplexValue::ZERO).deviation(x),
            (x + (-x)).deviation(ComplexValue::ZERO),
            ((x * y) * z).deviation(x * (y * z)),
            (x * y).deviation(y * x),
            (x * ComplexValue::ONE).deviation(x),
            (x * (y + z)).deviation(x * y + x * z),
        ];
        for (tally, d) in laws.iter_mut().zip(devs) {
            tally.record(d, tol);
        }
        if let Ok(xi) = x.inv_within(tol) {
            laws[8].record((x * xi).deviation(ComplexValue::ONE), tol);
        }
    }
    FieldReport {
        domain,
        samples,
        tolerance: tol.epsilon(),
        laws,
    }
}
