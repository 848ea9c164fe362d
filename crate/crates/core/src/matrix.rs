//! 2×2 real matrices: the rotation-scaling copy of ℂ and the nilpotent
//! Grassmann candidates `N(a,b) = [[ab, b²], [-a², -ab]]`.
//!
//! For the nilpotent family the anticommutator has the closed form
//! `{N(a,b), N(c,d)} = -(ad-bc)²·I`, so two members anticommute exactly when
//! `ad = bc`, which is also exactly when one is a real multiple of the other.
//! [`lemma_grid_check`] verifies all three statements on an integer grid.

use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{LawTally, SampleDomain};
use crate::{ComplexValue, Error, Result, Tolerance};

/// Row-major 2×2 real matrix. Serializes as `{"m": [[m11,m12],[m21,m22]]}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawMat2")]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

#[derive(Deserialize)]
struct RawMat2 {
    m: [[f64; 2]; 2],
}

impl TryFrom<RawMat2> for Mat2 {
    type Error = Error;
    fn try_from(raw: RawMat2) -> Result<Self> {
        Mat2::new(raw.m[0][0], raw.m[0][1], raw.m[1][0], raw.m[1][1])
    }
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { m: [[0.0; 2]; 2] };
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        let m = Mat2::from_rows([[m11, m12], [m21, m22]]);
        if m.m.iter().flatten().all(|x| x.is_finite()) {
            Ok(m)
        } else {
            Err(Error::NonFinite("matrix"))
        }
    }

    pub const fn from_rows(m: [[f64; 2]; 2]) -> Self {
        Mat2 { m }
    }

    pub fn scale(self, k: f64) -> Self {
        Mat2::from_rows(self.m.map(|row| row.map(|x| x * k)))
    }

    pub fn trace(self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest absolute entry difference.
    pub fn deviation(self, other: Mat2) -> f64 {
        (self - other)
            .m
            .iter()
            .flatten()
            .fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    pub fn approx_eq(self, other: Mat2, tol: Tolerance) -> bool {
        self.deviation(other) <= tol.epsilon()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.m, rhs.m);
        Mat2::from_rows([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.m, rhs.m);
        Mat2::from_rows([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

pub fn m_add(m1: Mat2, m2: Mat2) -> Mat2 {
    m1 + m2
}

pub fn m_mul(m1: Mat2, m2: Mat2) -> Mat2 {
    m1 * m2
}

/// `M1·M2 + M2·M1`.
pub fn anticommutator_m(m1: Mat2, m2: Mat2) -> Mat2 {
    m1 * m2 + m2 * m1
}

/// The matrix `[[a, -b], [b, a]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepMatrix {
    pub a: f64,
    pub b: f64,
}

impl RepMatrix {
    pub fn to_mat2(self) -> Mat2 {
        Mat2::from_rows([[self.a, -self.b], [self.b, self.a]])
    }
}

impl From<RepMatrix> for Mat2 {
    fn from(r: RepMatrix) -> Mat2 {
        r.to_mat2()
    }
}

pub fn phi(z: ComplexValue) -> RepMatrix {
    RepMatrix { a: z.re, b: z.im }
}

pub fn phi_inv(m: Mat2) -> Result<ComplexValue> {
    phi_inv_within(m, Tolerance::global())
}

pub fn phi_inv_within(m: Mat2, tol: Tolerance) -> Result<ComplexValue> {
    let residual = (m.m[0][0] - m.m[1][1])
        .abs()
        .max((m.m[0][1] + m.m[1][0]).abs());
    if residual > tol.epsilon() {
        return Err(Error::NotInRepresentationSubset { residual });
    }
    ComplexValue::new(m.m[0][0], m.m[1][0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomomorphismReport {
    pub domain: SampleDomain,
    pub samples: usize,
    pub tolerance: f64,
    pub additive: LawTally,
    pub multiplicative: LawTally,
}

impl HomomorphismReport {
    pub fn failures(&self) -> usize {
        self.additive.failures + self.multiplicative.failures
    }

    pub fn worst_deviation(&self) -> f64 {
        self.additive
            .worst_deviation
            .max(self.multiplicative.worst_deviation)
    }
}

/// Checks `φ(z₁+z₂) = φ(z₁)+φ(z₂)` and `φ(z₁z₂) = φ(z₁)φ(z₂)` on random pairs.
pub fn verify_phi_homomorphism<R: Rng + ?Sized>(
    rng: &mut R,
    samples: usize,
    domain: SampleDomain,
    tol: Tolerance,
) -> HomomorphismReport {
    let pairs = (0..samples).map(|_| (domain.sample(rng), domain.sample(rng)));
    verify_phi_on_pairs(pairs, domain, tol)
}

pub fn verify_phi_on_pairs<I>(pairs: I, domain: SampleDomain, tol: Tolerance) -> HomomorphismReport
where
    I: IntoIterator<Item = (ComplexValue, ComplexValue)>,
{
    let mut additive = LawTally::new("phi_additive");
    let mut multiplicative = LawTally::new("phi_multiplicative");
    let mut samples = 0;
    for (z1, z2) in pairs {
        samples += 1;
        let (p1, p2) = (phi(z1).to_mat2(), phi(z2).to_mat2());
        additive.record(phi(z1 + z2).to_mat2().deviation(p1 + p2), tol);
        multiplicative.record(phi(z1 * z2).to_mat2().deviation(p1 * p2), tol);
    }
    HomomorphismReport {
        domain,
        samples,
        tolerance: tol.epsilon(),
        additive,
        multiplicative,
    }
}

/// `N(a,b) = [[ab, b²], [-a², -ab]]`; squares to zero for every `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NilpotentCandidate {
    pub a: f64,
    pub b: f64,
}

impl NilpotentCandidate {
    pub fn to_mat2(self) -> Mat2 {
        let NilpotentCandidate { a, b } = self;
        Mat2::from_rows([[a * b, b * b], [-(a * a), -(a * b)]])
    }

    pub fn is_degenerate(self) -> bool {
        self.a == 0.0 || self.b == 0.0
    }
}

impl From<NilpotentCandidate> for Mat2 {
    fn from(n: NilpotentCandidate) -> Mat2 {
        n.to_mat2()
    }
}

pub fn build_nilpotent(a: f64, b: f64) -> NilpotentCandidate {
    NilpotentCandidate { a, b }
}

/// Returns `λ` with `N2 = λ·N1` when the two members anticommute.
///
/// With `N1 = N(a,b)`, `N2 = N(c,d)` and `w = ad`, the scalar is `w²/(ab)²`.
pub fn proportionality_witness(
    n1: NilpotentCandidate,
    n2: NilpotentCandidate,
) -> Result<Option<f64>> {
    proportionality_witness_within(n1, n2, Tolerance::global())
}

pub fn proportionality_witness_within(
    n1: NilpotentCandidate,
    n2: NilpotentCandidate,
    tol: Tolerance,
) -> Result<Option<f64>> {
    if n1.is_degenerate() {
        return Err(Error::DegenerateFamilyMember { a: n1.a, b: n1.b });
    }
    let anti = anticommutator_m(n1.to_mat2(), n2.to_mat2());
    if !anti.approx_eq(Mat2::ZERO, tol) {
        return Ok(None);
    }
    let w = n1.a * n2.b;
    let ab = n1.a * n1.b;
    let lambda = (w * w) / (ab * ab);
    Ok(Some(lambda))
}

/// Integer 2×2 matrix used by the grid check so every comparison is exact.
type IMat = [[i64; 2]; 2];

fn inil(a: i64, b: i64) -> IMat {
    [[a * b, b * b], [-a * a, -a * b]]
}

fn imul(x: IMat, y: IMat) -> IMat {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

fn ianti(x: IMat, y: IMat) -> IMat {
    let (p, q) = (imul(x, y), imul(y, x));
    [
        [p[0][0] + q[0][0], p[0][1] + q[0][1]],
        [p[1][0] + q[1][0], p[1][1] + q[1][1]],
    ]
}

/// `y` is a real multiple of nonzero `x` iff all 2×2 minors of the pair of
/// flattened 4-vectors vanish.
fn iproportional(x: IMat, y: IMat) -> bool {
    let u = [x[0][0], x[0][1], x[1][0], x[1][1]];
    let v = [y[0][0], y[0][1], y[1][0], y[1][1]];
    (0..4).all(|i| (i + 1..4).all(|j| u[i] * v[j] == u[j] * v[i]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCounterexample {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub anticommuting: bool,
    pub ad_eq_bc: bool,
    pub proportional: bool,
    pub closed_form_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridClasses {
    pub anticommuting: usize,
    pub non_anticommuting: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub pairs_checked: usize,
    pub counterexamples: Vec<GridCounterexample>,
    pub classes: GridClasses,
}

/// Exhausts all `(a,b),(c,d)` with nonzero components in `[-g, g]`.
///
/// A pair is a counterexample unless "anticommutator is zero", "ad = bc" and
/// "N(c,d) is a real multiple of N(a,b)" agree, and the anticommutator equals
/// `-(ad-bc)²·I`. Counterexamples are listed in `(a,b,c,d)` order.
pub fn lemma_grid_check(g: u32) -> Result<GridReport> {
    if g == 0 {
        return Err(Error::Precondition("grid bound must be at least 1".into()));
    }
    let g = i64::from(g);
    let axis: Vec<i64> = (-g..=g).filter(|&v| v != 0).collect();
    let mut pairs_checked = 0;
    let mut counterexamples = Vec::new();
    let mut classes = GridClasses {
        anticommuting: 0,
        non_anticommuting: 0,
    };
    for &a in &axis {
        for &b in &axis {
            let n1 = inil(a, b);
            for &c in &axis {
                for &d in &axis {
                    pairs_checked += 1;
                    let n2 = inil(c, d);
                    let anti = ianti(n1, n2);
                    let anticommuting = anti == [[0, 0], [0, 0]];
                    let ad_eq_bc = a * d == b * c;
                    let proportional = iproportional(n1, n2);
                    let s = a * d - b * c;
                    let closed_form_holds = anti == [[-s * s, 0], [0, -s * s]];
                    if anticommuting {
                        classes.anticommuting += 1;
                    } else {
                        classes.non_anticommuting += 1;
                    }
                    let agree = anticommuting == ad_eq_bc && ad_eq_bc == proportional;
                    if !(agree && closed_form_holds) {
                        counterexamples.push(GridCounterexample {
                            a,
                            b,
                            c,
                            d,
                            anticommuting,
                            ad_eq_bc,
                            proportional,
                            closed_form_holds,
                        });
                    }
                }
            }
        }
    }
    Ok(GridReport {
        pairs_checked,
        counterexamples,
        classes,
    })
}

/// Classifies a single integer pair the same way the grid check does.
pub fn classify_pair(a: i64, b: i64, c: i64, d: i64) -> (bool, bool, bool) {
    let (n1, n2) = (inil(a, b), inil(c, d));
    (
        ianti(n1, n2) == [[0, 0], [0, 0]],
        a * d == b * c,
        iproportional(n1, n2),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(r: [[f64; 2]; 2]) -> Mat2 {
        Mat2::from_rows(r)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(
            m_add(Mat2::IDENTITY, m([[0., 1.], [-1., 0.]])),
            m([[1., 1.], [-1., 1.]])
        );
        let x = m([[1., 2.], [3., 4.]]);
        assert_eq!(m_add(x, Mat2::ZERO), x);
        assert_eq!(m_add(x, m([[-1., -2.], [-3., -4.]])), Mat2::ZERO);
    }

    #[test]
    fn multiplication_examples() {
        let x = m([[1., 2.], [3., 4.]]);
        assert_eq!(m_mul(Mat2::IDENTITY, x), x);
        let e = m([[0., 1.], [0., 0.]]);
        assert_eq!(m_mul(e, e), Mat2::ZERO);
        assert_eq!(
            m_mul(m([[1., 1.], [-1., -1.]]), m([[2., 4.], [-1., -2.]])),
            m([[1., 2.], [-1., -2.]])
        );
    }

    #[test]
    fn phi_examples() {
        let c = |re, im| ComplexValue::new(re, im).unwrap();
        assert_eq!(phi(c(1., 0.)).to_mat2(), Mat2::IDENTITY);
        assert_eq!(phi(c(0., 1.)).to_mat2(), m([[0., -1.], [1., 0.]]));
        assert_eq!(phi(c(1., 2.)).to_mat2(), m([[1., -2.], [2., 1.]]));
    }

    #[test]
    fn phi_inv_examples() {
        let c = |re, im| ComplexValue::new(re, im).unwrap();
        assert_eq!(phi_inv(m([[1., -2.], [2., 1.]])).unwrap(), c(1., 2.));
        assert_eq!(phi_inv(Mat2::IDENTITY).unwrap(), c(1., 0.));
        assert!(matches!(
            phi_inv(m([[1., 2.], [3., 4.]])),
            Err(Error::NotInRepresentationSubset { .. })
        ));
    }

    #[test]
    fn homomorphism_exact_on_integer_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = verify_phi_homomorphism(
            &mut rng,
            10_000,
            SampleDomain::IntegerGrid { bound: 10 },
            Tolerance::EXACT,
        );
        assert_eq!(r.failures(), 0);
        assert_eq!(r.worst_deviation(), 0.0);
    }

    #[test]
    fn homomorphism_single_zero_pair() {
        let r = verify_phi_on_pairs(
            [(ComplexValue::ZERO, ComplexValue::ZERO)],
            SampleDomain::IntegerGrid { bound: 0 },
            Tolerance::EXACT,
        );
        assert_eq!(r.samples, 1);
        assert_eq!(r.failures(), 0);
    }

    #[test]
    fn homomorphism_on_floats() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = verify_phi_homomorphism(
            &mut rng,
            10_000,
            SampleDomain::Uniform { lo: -1., hi: 1. },
            Tolerance::default(),
        );
        assert_eq!(r.failures(), 0);
    }

    #[test]
    fn nilpotent_examples() {
        assert_eq!(build_nilpotent(1., 1.).to_mat2(), m([[1., 1.], [-1., -1.]]));
        assert_eq!(build_nilpotent(1., 2.).to_mat2(), m([[2., 4.], [-1., -2.]]));
        assert_eq!(build_nilpotent(0., 1.).to_mat2(), m([[0., 1.], [0., 0.]]));
        for (a, b) in [(1., 1.), (1., 2.), (0., 1.), (-3., 5.)] {
            let n = build_nilpotent(a, b).to_mat2();
            assert_eq!(n * n, Mat2::ZERO);
            assert_eq!(n.trace(), 0.0);
            assert_eq!(n.det(), 0.0);
        }
    }

    #[test]
    fn anticommutator_examples() {
        let n11 = build_nilpotent(1., 1.).to_mat2();
        let n12 = build_nilpotent(1., 2.).to_mat2();
        assert_eq!(anticommutator_m(n11, n11), Mat2::ZERO);
        assert_eq!(anticommutator_m(n11, n12), m([[-1., 0.], [0., -1.]]));
        let x = m([[1., 2.], [3., 4.]]);
        assert_eq!(anticommutator_m(Mat2::IDENTITY, x), x.scale(2.));
    }

    #[test]
    fn witness_examples() {
        let w = proportionality_witness(build_nilpotent(1., 2.), build_nilpotent(2., 4.));
        assert_eq!(w, Ok(Some(4.0)));
        assert_eq!(
            build_nilpotent(2., 4.).to_mat2(),
            build_nilpotent(1., 2.).to_mat2().scale(4.0)
        );
        let none = proportionality_witness(build_nilpotent(1., 1.), build_nilpotent(1., 2.));
        assert_eq!(none, Ok(None));
        let one = proportionality_witness(build_nilpotent(1., 1.), build_nilpotent(1., 1.));
        assert_eq!(one, Ok(Some(1.0)));
    }

    #[test]
    fn witness_rejects_degenerate_first_member() {
        assert!(matches!(
            proportionality_witness(build_nilpotent(0., 1.), build_nilpotent(1., 1.)),
            Err(Error::DegenerateFamilyMember { .. })
        ));
    }

    #[test]
    fn grid_examples() {
        let r5 = lemma_grid_check(5).unwrap();
        assert_eq!(r5.pairs_checked, 10_000);
        assert!(r5.counterexamples.is_empty());
        let r1 = lemma_grid_check(1).unwrap();
        assert_eq!(r1.pairs_checked, 16);
        assert!(r1.counterexamples.is_empty());
        assert_eq!(classify_pair(1, 2, 2, 4), (true, true, true));
        assert!(lemma_grid_check(0).is_err());
    }

    #[test]
    fn grid_report_json_shape() {
        let r = lemma_grid_check(1).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["pairs_checked"], 16);
        assert_eq!(v["counterexamples"], serde_json::json!([]));
        // N(a,b) only depends on (a,b) up to sign, so at G=1 every pair is
        // either ±(1,1) or ±(1,-1)
        assert_eq!(v["classes"]["anticommuting"], 8);
        assert_eq!(v["classes"]["non_anticommuting"], 8);
    }

    #[test]
    fn mat2_json_shape() {
        let x = m([[1., 2.], [3., 4.]]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"m":[[1.0,2.0],[3.0,4.0]]}"#);
        assert_eq!(serde_json::from_str::<Mat2>(&s).unwrap(), x);
    }
}
