//! The exterior algebra over ℂ generated by `θ₁, θ₂, …` with
//! `θᵢθⱼ + θⱼθᵢ = 0`.
//!
//! Elements are sparse maps from canonical monomials (strictly increasing
//! generator indices) to coefficients. Products concatenate monomials, sort
//! them back into canonical order and pick up a sign of `(-1)^inversions`;
//! a repeated generator kills the term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::LawTally;
use crate::{ComplexValue, Error, Result, Tolerance};

/// Index `i` of the generator `θᵢ`; always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GeneratorId(u32);

impl GeneratorId {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            Err(Error::Precondition("generator indices start at 1".into()))
        } else {
            Ok(GeneratorId(index))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for GeneratorId {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        GeneratorId::new(v)
    }
}

impl From<GeneratorId> for u32 {
    fn from(g: GeneratorId) -> u32 {
        g.0
    }
}

/// A product of distinct generators in increasing index order. The empty
/// monomial is the scalar `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: GeneratorId) -> Self {
        Monomial(vec![g.0])
    }

    /// Accepts only strictly increasing, nonzero indices.
    pub fn from_indices(indices: Vec<u32>) -> Result<Self> {
        if indices.first() == Some(&0) {
            return Err(Error::Encoding(
                "monomial contains generator index 0".into(),
            ));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Encoding(format!(
                "monomial {indices:?} is not strictly increasing"
            )));
        }
        Ok(Monomial(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    /// Canonical form of `self · other`: the sign and the merged monomial, or
    /// `None` when a generator repeats.
    pub fn product(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let (l, r) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(l.len() + r.len());
        let (mut i, mut j) = (0, 0);
        let mut inversions = 0usize;
        while i < l.len() && j < r.len() {
            match l[i].cmp(&r[j]) {
                std::cmp::Ordering::Less => {
                    out.push(l[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // r[j] jumps over every remaining left generator
                    inversions += l.len() - i;
                    out.push(r[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&l[i..]);
        out.extend_from_slice(&r[j..]);
        Some((inversions % 2 == 1, Monomial(out)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "∧")?;
            }
            write!(f, "θ{i}")?;
        }
        Ok(())
    }
}

/// Sparse element of the exterior algebra, kept in pruned canonical form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrassmannElement {
    terms: BTreeMap<Monomial, ComplexValue>,
}

impl GrassmannElement {
    pub fn zero() -> Self {
        GrassmannElement::default()
    }

    pub fn scalar(c: ComplexValue) -> Self {
        GrassmannElement::from_terms([(Monomial::one(), c)])
    }

    pub fn generator(g: GeneratorId) -> Self {
        GrassmannElement::from_terms([(Monomial::generator(g), ComplexValue::ONE)])
    }

    /// Sums coefficients of repeated monomials and prunes with the global
    /// tolerance.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, ComplexValue)>>(terms: I) -> Self {
        let mut out = GrassmannElement::zero();
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out.pruned(Tolerance::global())
    }

    fn accumulate(&mut self, m: Monomial, c: ComplexValue) {
        let slot = self.terms.entry(m).or_insert(ComplexValue::ZERO);
        *slot = *slot + c;
    }

    /// Drops every coefficient whose magnitude is at most `tol`.
    pub fn pruned(mut self, tol: Tolerance) -> Self {
        self.terms.retain(|_, c| !c.is_zero_within(tol));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ComplexValue)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> ComplexValue {
        self.terms.get(m).copied().unwrap_or(ComplexValue::ZERO)
    }

    pub fn scale(&self, k: ComplexValue) -> Self {
        GrassmannElement::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), *c * k)))
    }

    pub fn grades(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().map(Monomial::grade)
    }

    /// True for the zero element too.
    pub fn is_odd(&self) -> bool {
        self.grades().all(|g| g % 2 == 1)
    }

    pub fn is_homogeneous(&self) -> Option<usize> {
        let mut grades = self.grades();
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// Largest coefficient difference over the union of monomials.
    pub fn deviation(&self, other: &GrassmannElement) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max(c.deviation(other.coefficient(m)));
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.max_abs());
            }
        }
        worst
    }
}

impl Add for &GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: &GrassmannElement) -> GrassmannElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), *c);
        }
        out.pruned(Tolerance::global())
    }
}

impl Add for GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: GrassmannElement) -> GrassmannElement {
        &self + &rhs
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        GrassmannElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect(),
        }
    }
}

impl Neg for GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        -&self
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: &GrassmannElement) -> GrassmannElement {
        self + &(-rhs)
    }
}

impl Sub for GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: GrassmannElement) -> GrassmannElement {
        &self - &rhs
    }
}

impl Mul for &GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: &GrassmannElement) -> GrassmannElement {
        let mut out = GrassmannElement::zero();
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                if let Some((negative, m)) = ml.product(mr) {
                    let c = *cl * *cr;
                    out.accumulate(m, if negative { -c } else { c });
                }
            }
        }
        out.pruned(Tolerance::global())
    }
}

impl Mul for GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: GrassmannElement) -> GrassmannElement {
        &self * &rhs
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (m.grade(), *c == ComplexValue::ONE) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "{m}")?,
                _ if c.im == 0.0 => write!(f, "{c}·{m}")?,
                _ => write!(f, "({c})·{m}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    mono: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for GrassmannElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    mono: m.0.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GrassmannElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ElementRepr::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for t in repr.terms {
            let m = Monomial::from_indices(t.mono).map_err(D::Error::custom)?;
            let c = ComplexValue::new(t.re, t.im).map_err(D::Error::custom)?;
            if terms.insert(m.clone(), c).is_some() {
                return Err(D::Error::custom(format!("duplicate monomial {m}")));
            }
        }
        Ok(GrassmannElement { terms }.pruned(Tolerance::global()))
    }
}

pub fn g_add(x: &GrassmannElement, y: &GrassmannElement) -> GrassmannElement {
    x + y
}

pub fn g_mul(x: &GrassmannElement, y: &GrassmannElement) -> GrassmannElement {
    x * y
}

/// `xy + yx`.
pub fn anticommutator_g(x: &GrassmannElement, y: &GrassmannElement) -> GrassmannElement {
    &(x * y) + &(y * x)
}

/// Splits `x` by monomial length.
pub fn grade_decompose(x: &GrassmannElement) -> BTreeMap<usize, GrassmannElement> {
    let mut parts: BTreeMap<usize, GrassmannElement> = BTreeMap::new();
    for (m, c) in &x.terms {
        parts
            .entry(m.grade())
            .or_default()
            .terms
            .insert(m.clone(), *c);
    }
    parts
}

/// Whether `x·x = 0`; holds for every odd element.
pub fn odd_square_check(x: &GrassmannElement) -> Result<bool> {
    if let Some(grade) = x.grades().find(|g| g % 2 == 0) {
        return Err(Error::NotOddGrade { grade });
    }
    Ok((x * x).is_zero())
}

/// `a₀ + a₁θ` with `a₀ ∈ ℂ` and odd `a₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannPolynomial {
    pub a0: ComplexValue,
    pub a1: GrassmannElement,
    pub theta: GeneratorId,
}

impl GrassmannPolynomial {
    pub fn new(a0: ComplexValue, a1: GrassmannElement, theta: GeneratorId) -> Result<Self> {
        if let Some(grade) = a1.grades().find(|g| g % 2 == 0) {
            return Err(Error::NotOddGrade { grade });
        }
        Ok(GrassmannPolynomial { a0, a1, theta })
    }

    /// Whether `a₁θ` vanishes identically (θ already occurs in every term of
    /// `a₁`).
    pub fn is_degenerate(&self) -> bool {
        (&self.a1 * &GrassmannElement::generator(self.theta)).is_zero()
    }

    pub fn to_element(&self) -> GrassmannElement {
        &GrassmannElement::scalar(self.a0) + &(&self.a1 * &GrassmannElement::generator(self.theta))
    }
}

/// `a₀ + θ_{a1_gen}·θ_{theta}`; requires the two generators to differ.
pub fn poly_make(
    a0: ComplexValue,
    a1_gen: GeneratorId,
    theta: GeneratorId,
) -> Result<GrassmannPolynomial> {
    if a1_gen == theta {
        return Err(Error::Precondition(format!(
            "a1 = θ{} equals θ, so a1·θ vanishes",
            theta.index()
        )));
    }
    GrassmannPolynomial::new(a0, GrassmannElement::generator(a1_gen), theta)
}

pub fn poly_mul(p: &GrassmannPolynomial, q: &GrassmannPolynomial) -> GrassmannElement {
    &p.to_element() * &q.to_element()
}

/// Random odd element over `θ₁ … θ_max_gen`: each odd-grade monomial is
/// present with probability 1/2, with integer real and imaginary parts in
/// `[-coeff_bound, coeff_bound]`.
pub fn random_odd_element<R: Rng + ?Sized>(
    rng: &mut R,
    max_gen: u32,
    coeff_bound: i64,
) -> GrassmannElement {
    let mut terms = Vec::new();
    for mask in 1u32..(1 << max_gen) {
        if mask.count_ones() % 2 == 0 || !rng.gen_bool(0.5) {
            continue;
        }
        let indices = (0..max_gen).filter(|b| mask & (1 << b) != 0).map(|b| b + 1);
        let c = ComplexValue::from_ints(
            rng.gen_range(-coeff_bound..=coeff_bound),
            rng.gen_range(-coeff_bound..=coeff_bound),
        );
        terms.push((Monomial(indices.collect()), c));
    }
    GrassmannElement::from_terms(terms)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnticommutationReport {
    pub generator_bound: u32,
    pub samples: usize,
    pub max_generators: u32,
    pub coeff_bound: i64,
    pub tolerance: f64,
    pub generator_pairs: LawTally,
    pub odd_squares: LawTally,
    pub odd_pairs: LawTally,
}

impl AnticommutationReport {
    pub fn failures(&self) -> usize {
        self.generator_pairs.failures + self.odd_squares.failures + self.odd_pairs.failures
    }
}

/// `θᵢθⱼ + θⱼθᵢ = 0` for `i, j ≤ generator_bound`, then `x² = 0` and
/// `xy + yx = 0` for `samples` random odd elements `x, y`.
pub fn verify_anticommutation<R: Rng + ?Sized>(
    rng: &mut R,
    generator_bound: u32,
    samples: usize,
    max_generators: u32,
    coeff_bound: i64,
    tol: Tolerance,
) -> Result<AnticommutationReport> {
    if generator_bound == 0 || max_generators == 0 || max_generators > 16 {
        return Err(Error::Precondition(
            "generator bounds must be positive and at most 16 generators may be sampled".into(),
        ));
    }
    let mut generator_pairs = LawTally::new("theta_i theta_j + theta_j theta_i = 0");
    for i in 1..=generator_bound {
        for j in 1..=generator_bound {
            let (ti, tj) = (
                GrassmannElement::generator(GeneratorId(i)),
                GrassmannElement::generator(GeneratorId(j)),
            );
            let anti = anticommutator_g(&ti, &tj);
            generator_pairs.record(anti.deviation(&GrassmannElement::zero()), tol);
        }
    }
    let mut odd_squares = LawTally::new("x x = 0 for odd x");
    let mut odd_pairs = LawTally::new("x y + y x = 0 for odd x, y");
    for _ in 0..samples {
        let x = random_odd_element(rng, max_generators, coeff_bound);
        let y = random_odd_element(rng, max_generators, coeff_bound);
        odd_squares.record((&x * &x).deviation(&GrassmannElement::zero()), tol);
        odd_pairs.record(
            anticommutator_g(&x, &y).deviation(&GrassmannElement::zero()),
            tol,
        );
    }
    Ok(AnticommutationReport {
        generator_bound,
        samples,
        max_generators,
        coeff_bound,
        tolerance: tol.epsilon(),
        generator_pairs,
        odd_squares,
        odd_pairs,
    })
}
