//! Complex labels with the product `θ₁*θ₂ = F(z₁ - z₂)` for an odd `F`.
//!
//! Oddness makes `*` anticommute (`θ₁*θ₂ + θ₂*θ₁ = 0`, `θ*θ = 0`), and the
//! commutator `[θᵢ,θⱼ] = 2F(zᵢ-zⱼ)` matches `iΩᵢⱼ` with
//! `Ωᵢⱼ = -2i·F(zᵢ-zⱼ)`. The operation is neither associative nor unital,
//! which [`find_nonassociativity_witness`] and [`find_two_sided_identity`]
//! demonstrate on finite pools.
//!
//! `F` is never an arbitrary closure: every [`OddFunctionSpec`] is a sum of
//! odd powers, so `F(-z) = -F(z)` holds bit-for-bit in floating point.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{LawTally, SampleDomain};
use crate::{ComplexValue, Error, Result, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddCoeff {
    pub power: u32,
    pub re: f64,
    pub im: f64,
}

impl OddCoeff {
    pub fn value(&self) -> ComplexValue {
        ComplexValue {
            re: self.re,
            im: self.im,
        }
    }
}

/// A registered odd function `ℂ → ℂ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawSpec")]
pub enum OddFunctionSpec {
    Identity,
    Cube,
    /// `Σ cₖ z^k` over odd positive powers `k`.
    OddPolynomial {
        odd_coeffs: Vec<OddCoeff>,
    },
    /// `Σ_{k<order} (-1)^k z^{2k+1} / (2k+1)!`.
    SineSeries {
        order: u32,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawSpec {
    Identity,
    Cube,
    OddPolynomial { odd_coeffs: Vec<OddCoeff> },
    SineSeries { order: u32 },
}

impl TryFrom<RawSpec> for OddFunctionSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::Identity => Ok(OddFunctionSpec::Identity),
            RawSpec::Cube => Ok(OddFunctionSpec::Cube),
            RawSpec::OddPolynomial { odd_coeffs } => OddFunctionSpec::odd_polynomial(odd_coeffs),
            RawSpec::SineSeries { order } => OddFunctionSpec::sine_series(order),
        }
    }
}

impl OddFunctionSpec {
    pub fn odd_polynomial(odd_coeffs: Vec<OddCoeff>) -> Result<Self> {
        if odd_coeffs.is_empty() {
            return Err(Error::InvalidOddFunction(
                "odd polynomial needs at least one coefficient".into(),
            ));
        }
        for c in &odd_coeffs {
            if c.power % 2 == 0 {
                return Err(Error::InvalidOddFunction(format!(
                    "power {} is not an odd positive integer",
                    c.power
                )));
            }
            if !c.value().is_finite() {
                return Err(Error::InvalidOddFunction(format!(
                    "coefficient of z^{} is not finite",
                    c.power
                )));
            }
        }
        Ok(OddFunctionSpec::OddPolynomial { odd_coeffs })
    }

    pub fn sine_series(order: u32) -> Result<Self> {
        // 2·order-1 must stay a representable power with a finite factorial
        if order == 0 || order > 80 {
            return Err(Error::InvalidOddFunction(format!(
                "sine series order must be in 1..=80, got {order}"
            )));
        }
        Ok(OddFunctionSpec::SineSeries { order })
    }

    /// All four registry kinds, with representative parameters.
    pub fn registry() -> Vec<OddFunctionSpec> {
        vec![
            OddFunctionSpec::Identity,
            OddFunctionSpec::Cube,
            OddFunctionSpec::OddPolynomial {
                odd_coeffs: vec![
                    OddCoeff {
                        power: 1,
                        re: 1.0,
                        im: 0.0,
                    },
                    OddCoeff {
                        power: 3,
                        re: 0.5,
                        im: 0.0,
                    },
                ],
            },
            OddFunctionSpec::SineSeries { order: 4 },
        ]
    }

    pub fn eval(&self, z: ComplexValue) -> ComplexValue {
        match self {
            OddFunctionSpec::Identity => z,
            OddFunctionSpec::Cube => z * z * z,
            OddFunctionSpec::OddPolynomial { odd_coeffs } => {
                odd_coeffs.iter().fold(ComplexValue::ZERO, |acc, c| {
                    acc + c.value() * z.powu(c.power)
                })
            }
            OddFunctionSpec::SineSeries { order } => {
                let z2 = z * z;
                let mut term = z;
                let mut acc = z;
                for k in 1..*order {
                    let n = f64::from(2 * k);
                    term = (term * z2).scale(-1.0 / (n * (n + 1.0)));
                    acc = acc + term;
                }
                acc
            }
        }
    }
}

impl fmt::Display for OddFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddFunctionSpec::Identity => write!(f, "identity"),
            OddFunctionSpec::Cube => write!(f, "cube"),
            OddFunctionSpec::OddPolynomial { odd_coeffs } => {
                write!(f, "poly:")?;
                for (k, c) in odd_coeffs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}={}", c.power, c.value())?;
                }
                Ok(())
            }
            OddFunctionSpec::SineSeries { order } => write!(f, "sin:{order}"),
        }
    }
}

/// Parses `identity`, `cube`, `poly:1=1,3=0.5+2i`, `sin:<order>` or the JSON
/// object form.
impl FromStr for OddFunctionSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::InvalidOddFunction(e.to_string()));
        }
        if let Some(body) = s.strip_prefix("poly:") {
            let mut coeffs = Vec::new();
            for item in body.split(',') {
                let (p, c) = item.split_once('=').ok_or_else(|| {
                    Error::InvalidOddFunction(format!("expected power=coef, got {item:?}"))
                })?;
                let power: u32 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidOddFunction(format!("bad power {:?}", p.trim())))?;
                let value = crate::expr::parse_complex(c)?;
                coeffs.push(OddCoeff {
                    power,
                    re: value.re,
                    im: value.im,
                });
            }
            return OddFunctionSpec::odd_polynomial(coeffs);
        }
        if let Some(order) = s.strip_prefix("sin:") {
            let order = order
                .trim()
                .parse()
                .map_err(|_| Error::InvalidOddFunction(format!("bad sine order {order:?}")))?;
            return OddFunctionSpec::sine_series(order);
        }
        match s {
            "identity" => Ok(OddFunctionSpec::Identity),
            "cube" => Ok(OddFunctionSpec::Cube),
            other => Err(Error::InvalidOddFunction(format!(
                "unknown function {other:?}; expected identity, cube, poly:<spec> or sin:<order>"
            ))),
        }
    }
}

/// A Grassmann variable carried by a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaLabel {
    pub value: ComplexValue,
}

impl ThetaLabel {
    pub fn new(value: ComplexValue) -> Self {
        ThetaLabel { value }
    }
}

impl From<ComplexValue> for ThetaLabel {
    fn from(value: ComplexValue) -> Self {
        ThetaLabel { value }
    }
}

impl fmt::Display for ThetaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ[{}]", self.value)
    }
}

/// `θ₁*θ₂ = F(z₁ - z₂)`.
pub fn star(f: &OddFunctionSpec, t1: ThetaLabel, t2: ThetaLabel) -> ComplexValue {
    f.eval(t1.value - t2.value)
}

/// `θᵢ*θⱼ - θⱼ*θᵢ`, which equals `2F(zᵢ-zⱼ)`.
pub fn star_commutator(f: &OddFunctionSpec, ti: ThetaLabel, tj: ThetaLabel) -> ComplexValue {
    star(f, ti, tj) - star(f, tj, ti)
}

/// Scalar times label; the result is again a label.
pub fn mixed_product(z: ComplexValue, t: ThetaLabel) -> ThetaLabel {
    ThetaLabel::new(z * t.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddnessReport {
    pub function: String,
    pub samples: usize,
    pub tolerance: f64,
    pub zero_maps_to_zero: bool,
    pub oddness: LawTally,
}

impl OddnessReport {
    pub fn passed(&self) -> bool {
        self.zero_maps_to_zero && self.oddness.failures == 0
    }
}

pub fn check_odd<R: Rng + ?Sized>(
    f: &OddFunctionSpec,
    rng: &mut R,
    samples: usize,
    domain: SampleDomain,
    tol: Tolerance,
) -> Result<OddnessReport> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    let mut oddness = LawTally::new("f(z)+f(-z)=0");
    for _ in 0..samples {
        let z = domain.sample(rng);
        oddness.record((f.eval(z) + f.eval(-z)).max_abs(), tol);
    }
    Ok(OddnessReport {
        function: f.to_string(),
        samples,
        tolerance: tol.epsilon(),
        zero_maps_to_zero: f.eval(ComplexValue::ZERO).is_zero_within(tol),
        oddness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarLawReport {
    pub function: String,
    pub samples: usize,
    pub tolerance: f64,
    pub anticommutation: LawTally,
    pub self_product_zero: LawTally,
    pub commutator_matches_omega: LawTally,
}

impl StarLawReport {
    pub fn failures(&self) -> usize {
        self.anticommutation.failures
            + self.self_product_zero.failures
            + self.commutator_matches_omega.failures
    }
}

/// Checks `t1*t2 + t2*t1 = 0`, `t*t = 0` and `[t1,t2] = iΩ₁₂` on random
/// label pairs.
pub fn verify_star_laws<R: Rng + ?Sized>(
    f: &OddFunctionSpec,
    rng: &mut R,
    samples: usize,
    domain: SampleDomain,
    tol: Tolerance,
) -> StarLawReport {
    let mut anticommutation = LawTally::new("t1*t2+t2*t1=0");
    let mut self_product_zero = LawTally::new("t*t=0");
    let mut commutator_matches_omega = LawTally::new("[t1,t2]=i*omega12");
    for _ in 0..samples {
        let t1 = ThetaLabel::new(domain.sample(rng));
        let t2 = ThetaLabel::new(domain.sample(rng));
        anticommutation.record((star(f, t1, t2) + star(f, t2, t1)).max_abs(), tol);
        self_product_zero.record(star(f, t1, t1).max_abs(), tol);
        let omega12 = omega_entry(f, t1.value, t2.value);
        commutator_matches_omega.record(
            star_commutator(f, t1, t2).deviation(ComplexValue::I * omega12),
            tol,
        );
    }
    StarLawReport {
        function: f.to_string(),
        samples,
        tolerance: tol.epsilon(),
        anticommutation,
        self_product_zero,
        commutator_matches_omega,
    }
}

/// `Ωᵢⱼ = -2i·F(zᵢ-zⱼ)`.
pub fn omega_entry(f: &OddFunctionSpec, zi: ComplexValue, zj: ComplexValue) -> ComplexValue {
    ComplexValue { re: 0.0, im: -2.0 } * f.eval(zi - zj)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaMatrix {
    pub points: Vec<ComplexValue>,
    pub entries: Vec<Vec<ComplexValue>>,
}

impl OmegaMatrix {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexValue {
        self.entries[i][j]
    }
}

/// Builds `Ω` over `points` and checks `iΩᵢⱼ = [θᵢ,θⱼ]` entrywise.
pub fn omega(f: &OddFunctionSpec, points: &[ComplexValue]) -> Result<OmegaMatrix> {
    omega_within(f, points, Tolerance::global())
}

pub fn omega_within(
    f: &OddFunctionSpec,
    points: &[ComplexValue],
    tol: Tolerance,
) -> Result<OmegaMatrix> {
    if points.is_empty() {
        return Err(Error::Precondition("omega needs at least one point".into()));
    }
    let mut entries = Vec::with_capacity(points.len());
    for &zi in points {
        let mut row = Vec::with_capacity(points.len());
        for &zj in points {
            let w = omega_entry(f, zi, zj);
            if !w.is_finite() {
                return Err(Error::NonFinite("omega entry"));
            }
            let comm = star_commutator(f, zi.into(), zj.into());
            if !(ComplexValue::I * w).approx_eq(comm, tol) {
                return Err(Error::Precondition(format!(
                    "i·Ω = {} differs from the star commutator {comm}",
                    ComplexValue::I * w
                )));
            }
            row.push(w);
        }
        entries.push(row);
    }
    Ok(OmegaMatrix {
        points: points.to_vec(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociativityWitness {
    pub indices: [usize; 3],
    pub labels: [ThetaLabel; 3],
    /// `(a*b)*c`
    pub left: ComplexValue,
    /// `a*(b*c)`
    pub right: ComplexValue,
}

/// First ordered triple `(a,b,c)` from `pool` (index-lexicographic) with
/// `(a*b)*c ≠ a*(b*c)` beyond the global tolerance. Intermediate products are
/// re-read as labels.
pub fn find_nonassociativity_witness(
    f: &OddFunctionSpec,
    pool: &[ThetaLabel],
) -> Result<Option<AssociativityWitness>> {
    find_nonassociativity_witness_within(f, pool, Tolerance::global())
}

pub fn find_nonassociativity_witness_within(
    f: &OddFunctionSpec,
    pool: &[ThetaLabel],
    tol: Tolerance,
) -> Result<Option<AssociativityWitness>> {
    if pool.len() < 3 {
        return Err(Error::Precondition(
            "non-associativity search needs a pool of at least 3 labels".into(),
        ));
    }
    let n = pool.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b, c) = (pool[i], pool[j], pool[k]);
                let left = star(f, star(f, a, b).into(), c);
                let right = star(f, a, star(f, b, c).into());
                if !left.approx_eq(right, tol) {
                    return Ok(Some(AssociativityWitness {
                        indices: [i, j, k],
                        labels: [a, b, c],
                        left,
                        right,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Index of a pool element `e` with `e*t = t*e = t` for every `t` in the
/// pool (products compared as labels), if any.
pub fn find_two_sided_identity(
    f: &OddFunctionSpec,
    pool: &[ThetaLabel],
    tol: Tolerance,
) -> Option<usize> {
    pool.iter().position(|&e| {
        pool.iter().all(|&t| {
            star(f, e, t).approx_eq(t.value, tol) && star(f, t, e).approx_eq(t.value, tol)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im).unwrap()
    }

    fn t(re: f64) -> ThetaLabel {
        ThetaLabel::new(ComplexValue::real(re))
    }

    #[test]
    fn check_odd_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let domain = SampleDomain::Uniform { lo: -2., hi: 2. };
        let r = check_odd(
            &OddFunctionSpec::Identity,
            &mut rng,
            100,
            domain,
            Tolerance::EXACT,
        )
        .unwrap();
        assert!(r.passed());

        let z = c(1., 1.);
        let cube = OddFunctionSpec::Cube;
        assert_eq!(cube.eval(z) + cube.eval(-z), ComplexValue::ZERO);

        let poly: OddFunctionSpec = "poly:1=1,3=0.5".parse().unwrap();
        let r = check_odd(&poly, &mut rng, 10_000, domain, Tolerance::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.oddness.worst_deviation, 0.0);
    }

    #[test]
    fn check_odd_needs_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let domain = SampleDomain::Uniform { lo: -1., hi: 1. };
        assert!(check_odd(
            &OddFunctionSpec::Cube,
            &mut rng,
            0,
            domain,
            Tolerance::default()
        )
        .is_err());
    }

    #[test]
    fn star_examples() {
        let id = OddFunctionSpec::Identity;
        assert_eq!(star(&id, t(3.), t(1.)), ComplexValue::real(2.));
        let cube = OddFunctionSpec::Cube;
        assert_eq!(star(&cube, t(2.), t(1.)), ComplexValue::real(1.));
        assert_eq!(star(&cube, t(1.), t(2.)), ComplexValue::real(-1.));
        for f in OddFunctionSpec::registry() {
            let x = ThetaLabel::new(c(0.3, -1.7));
            assert_eq!(star(&f, x, x), ComplexValue::ZERO);
        }
    }

    #[test]
    fn commutator_examples() {
        let id = OddFunctionSpec::Identity;
        assert_eq!(star_commutator(&id, t(1.), t(0.)), ComplexValue::real(2.));
        assert_eq!(star_commutator(&id, t(5.), t(5.)), ComplexValue::ZERO);
        let cube = OddFunctionSpec::Cube;
        let got = star_commutator(&cube, c(1., 1.).into(), c(1., -1.).into());
        assert_eq!(got, c(0., -16.));
    }

    #[test]
    fn omega_examples() {
        let id = OddFunctionSpec::Identity;
        let w = omega(&id, &[c(1., 1.), c(1., -1.)]).unwrap();
        assert_eq!(w.get(0, 1), ComplexValue::real(4.));
        for f in OddFunctionSpec::registry() {
            let w = omega(&f, &[c(0.5, 2.), c(-1., 0.), c(3., 3.)]).unwrap();
            for i in 0..3 {
                assert_eq!(w.get(i, i), ComplexValue::ZERO);
                for j in 0..3 {
                    assert_eq!(w.get(i, j) + w.get(j, i), ComplexValue::ZERO);
                }
            }
        }
        let w = omega(&id, &[ComplexValue::ZERO, ComplexValue::ONE]).unwrap();
        assert_eq!(w.get(0, 1), c(0., 2.));
        assert_eq!(w.get(1, 0), c(0., -2.));
        assert!(omega(&id, &[]).is_err());
    }

    #[test]
    fn mixed_product_examples() {
        assert_eq!(
            mixed_product(ComplexValue::real(2.), c(1., 1.).into()),
            ThetaLabel::new(c(2., 2.))
        );
        let x = ThetaLabel::new(c(-0.5, 4.));
        assert_eq!(mixed_product(ComplexValue::ONE, x), x);
        assert_eq!(
            mixed_product(ComplexValue::ZERO, x).value,
            ComplexValue::ZERO
        );
    }

    #[test]
    fn witness_examples() {
        let id = OddFunctionSpec::Identity;
        let w = find_nonassociativity_witness(&id, &[t(0.), t(0.), t(1.)])
            .unwrap()
            .unwrap();
        assert_eq!(w.left, ComplexValue::real(-1.));
        assert_eq!(w.right, ComplexValue::real(1.));
        assert_eq!(
            w.labels.map(|l| l.value.re),
            [0., 0., 1.],
            "first witness in index order"
        );
        assert_eq!(
            find_nonassociativity_witness(&id, &[t(0.), t(0.), t(0.)]).unwrap(),
            None
        );
        assert!(
            find_nonassociativity_witness(&OddFunctionSpec::Cube, &[t(0.), t(1.), t(2.)])
                .unwrap()
                .is_some()
        );
        assert!(find_nonassociativity_witness(&id, &[t(0.), t(1.)]).is_err());
    }

    #[test]
    fn identity_has_no_unit_on_distinct_pool() {
        let id = OddFunctionSpec::Identity;
        let pool = [t(0.), t(1.), t(-2.5), ThetaLabel::new(c(0., 1.))];
        assert_eq!(
            find_two_sided_identity(&id, &pool, Tolerance::default()),
            None
        );
    }

    #[test]
    fn laws_hold_for_registry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let domain = SampleDomain::Uniform { lo: -2., hi: 2. };
        for f in OddFunctionSpec::registry() {
            let r = verify_star_laws(&f, &mut rng, 2_000, domain, Tolerance::default());
            assert_eq!(r.failures(), 0, "{f}");
        }
    }

    #[test]
    fn sine_series_terms() {
        let s3: OddFunctionSpec = "sin:3".parse().unwrap();
        let x = 0.5_f64;
        let expected = x - x.powi(3) / 6.0 + x.powi(5) / 120.0;
        assert!((s3.eval(ComplexValue::real(x)).re - expected).abs() < 1e-15);
        let s1: OddFunctionSpec = "sin:1".parse().unwrap();
        assert_eq!(s1.eval(c(2., 3.)), c(2., 3.));
        assert!("sin:0".parse::<OddFunctionSpec>().is_err());
    }

    #[test]
    fn spec_parsing_and_json() {
        assert!("poly:2=1".parse::<OddFunctionSpec>().is_err());
        assert!("poly:".parse::<OddFunctionSpec>().is_err());
        assert!("tan".parse::<OddFunctionSpec>().is_err());
        let p: OddFunctionSpec = "poly:1=1,3=0.5+2i".parse().unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(
            js,
            r#"{"kind":"odd_polynomial","odd_coeffs":[{"power":1,"re":1.0,"im":0.0},{"power":3,"re":0.5,"im":2.0}]}"#
        );
        assert_eq!(js.parse::<OddFunctionSpec>().unwrap(), p);
        let bad = r#"{"kind":"odd_polynomial","odd_coeffs":[{"power":4,"re":1,"im":0}]}"#;
        assert!(serde_json::from_str::<OddFunctionSpec>(bad).is_err());
        assert_eq!(
            serde_json::to_string(&OddFunctionSpec::Cube).unwrap(),
            r#"{"kind":"cube"}"#
        );
    }
}
