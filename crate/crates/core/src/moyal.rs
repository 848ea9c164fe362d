//! Constant-kernel Moyal product on multivariate polynomials:
//!
//! ```text
//! f ⋆ g = Σ_m (1/m!) Σ K_{i₁j₁}…K_{iₘjₘ} (∂_{i₁}…∂_{iₘ} f)(∂_{j₁}…∂_{jₘ} g)
//! ```
//!
//! with `Kᵢⱼ = F(zᵢ - zⱼ)` for an odd `F` and fixed base points. For
//! polynomials the series stops on its own once either factor has been
//! differentiated to a constant, so there is no truncation parameter.
//!
//! The expansion keeps `f ⊗ g` as a ledger of `(exps_f, exps_g) → coeff`
//! pairs, applies the single-step operator `B = Σ Kᵢⱼ ∂ᵢ ⊗ ∂ⱼ` to it `m`
//! times, and contracts at `x = y` after each step.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::star::OddFunctionSpec;
use crate::{ComplexValue, Error, Result, Tolerance};

type Exps = Vec<u32>;

/// Polynomial in `x₁ … xₙ` over ℂ keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exps, ComplexValue>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: ComplexValue) -> Self {
        MultiPoly::from_terms(nvars, [(vec![0; nvars], c)]).expect("length matches")
    }

    /// `x_var` with 1-based `var`.
    pub fn var(nvars: usize, var: usize) -> Result<Self> {
        check_var(nvars, var)?;
        let mut e = vec![0; nvars];
        e[var - 1] = 1;
        MultiPoly::from_terms(nvars, [(e, ComplexValue::ONE)])
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exps, ComplexValue)>,
    {
        let mut out = MultiPoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            out.accumulate(e, c);
        }
        Ok(out.pruned(Tolerance::global()))
    }

    fn accumulate(&mut self, e: Exps, c: ComplexValue) {
        let slot = self.terms.entry(e).or_insert(ComplexValue::ZERO);
        *slot = *slot + c;
    }

    pub fn pruned(mut self, tol: Tolerance) -> Self {
        self.terms.retain(|_, c| !c.is_zero_within(tol));
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &ComplexValue)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> ComplexValue {
        self.terms.get(exps).copied().unwrap_or(ComplexValue::ZERO)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, k: ComplexValue) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), *c * k))
                .collect(),
        }
        .pruned(Tolerance::global())
    }

    pub fn deviation(&self, other: &MultiPoly) -> f64 {
        let mut worst: f64 = 0.0;
        for (e, c) in &self.terms {
            worst = worst.max(c.deviation(other.coefficient(e)));
        }
        for (e, c) in &other.terms {
            if !self.terms.contains_key(e) {
                worst = worst.max(c.max_abs());
            }
        }
        worst
    }

    fn same_dims(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), *c);
        }
        Ok(out.pruned(Tolerance::global()))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_dims(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.accumulate(add_exps(e1, e2), *c1 * *c2);
            }
        }
        Ok(out.pruned(Tolerance::global()))
    }
}

fn check_var(nvars: usize, var: usize) -> Result<()> {
    if var == 0 || var > nvars {
        Err(Error::Precondition(format!(
            "variable index {var} outside 1..={nvars}"
        )))
    } else {
        Ok(())
    }
}

fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Panics on mismatched `nvars`; use [`MultiPoly::try_add`] otherwise.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomials share nvars")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomials share nvars")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomials share nvars")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -*c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest exponent vectors first reads more naturally
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| match p {
                    1 => format!("x{}", i + 1),
                    _ => format!("x{}^{p}", i + 1),
                })
                .collect();
            let coeff = if c.im == 0.0 || c.re == 0.0 {
                c.to_string()
            } else {
                format!("({c})")
            };
            match (mono.is_empty(), *c == ComplexValue::ONE) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{coeff}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTermRepr {
    exps: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    terms: Vec<PolyTermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| PolyTermRepr {
                    exps: e.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolyRepr::deserialize(d)?;
        if repr.nvars == 0 {
            return Err(D::Error::custom("nvars must be positive"));
        }
        let mut terms = BTreeMap::new();
        for t in repr.terms {
            if t.exps.len() != repr.nvars {
                return Err(D::Error::custom(format!(
                    "exponent vector {:?} does not have length {}",
                    t.exps, repr.nvars
                )));
            }
            let c = ComplexValue::new(t.re, t.im).map_err(D::Error::custom)?;
            if terms.insert(t.exps.clone(), c).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate exponents {:?}",
                    t.exps
                )));
            }
        }
        Ok(MultiPoly {
            nvars: repr.nvars,
            terms,
        }
        .pruned(Tolerance::global()))
    }
}

/// `∂f/∂x_var`, 1-based.
pub fn partial_derivative(f: &MultiPoly, var: usize) -> Result<MultiPoly> {
    check_var(f.nvars, var)?;
    let mut out = MultiPoly::zero(f.nvars);
    for (e, c) in &f.terms {
        let p = e[var - 1];
        if p == 0 {
            continue;
        }
        let mut d = e.clone();
        d[var - 1] -= 1;
        out.accumulate(d, c.scale(f64::from(p)));
    }
    Ok(out.pruned(Tolerance::global()))
}

/// `Kᵢⱼ`; square with zero diagonal and `Kᵢⱼ + Kⱼᵢ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarKernel {
    n: usize,
    k: Vec<Vec<ComplexValue>>,
}

impl StarKernel {
    pub fn zero(n: usize) -> Self {
        StarKernel {
            n,
            k: vec![vec![ComplexValue::ZERO; n]; n],
        }
    }

    /// Accepts an explicit matrix; it must be square and antisymmetric within
    /// `tol` (which forces the diagonal to vanish).
    pub fn from_entries(k: Vec<Vec<ComplexValue>>, tol: Tolerance) -> Result<Self> {
        let n = k.len();
        if n == 0 {
            return Err(Error::Precondition(
                "kernel must have at least one row".into(),
            ));
        }
        if let Some(row) = k.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if !(k[i][j] + k[j][i]).is_zero_within(tol) {
                    return Err(Error::Precondition(format!(
                        "kernel is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(StarKernel { n, k })
    }

    /// Two-variable kernel with `K₁₂ = κ`, `K₂₁ = -κ`.
    pub fn planar(kappa: ComplexValue) -> Self {
        StarKernel {
            n: 2,
            k: vec![
                vec![ComplexValue::ZERO, kappa],
                vec![-kappa, ComplexValue::ZERO],
            ],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based entry `K_{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> ComplexValue {
        self.k[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[Vec<ComplexValue>] {
        &self.k
    }

    pub fn is_zero(&self) -> bool {
        self.k.iter().flatten().all(|c| *c == ComplexValue::ZERO)
    }
}

/// `Kᵢⱼ = F(zᵢ - zⱼ)` over the given base points.
pub fn build_kernel(f: &OddFunctionSpec, points: &[ComplexValue]) -> Result<StarKernel> {
    if points.is_empty() {
        return Err(Error::Precondition(
            "kernel needs at least one point".into(),
        ));
    }
    let k: Vec<Vec<ComplexValue>> = points
        .iter()
        .map(|&zi| points.iter().map(|&zj| f.eval(zi - zj)).collect())
        .collect();
    if k.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("kernel entry"));
    }
    Ok(StarKernel { n: points.len(), k })
}

/// The star product together with its per-order contributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoyalExpansion {
    pub product: MultiPoly,
    /// `orders[m]` is the weighted order-`m` term, already divided by `m!`.
    pub orders: Vec<MultiPoly>,
}

type Ledger = BTreeMap<(Exps, Exps), ComplexValue>;

fn apply_bidifferential(ledger: &Ledger, kernel: &StarKernel) -> Ledger {
    let mut out = Ledger::new();
    for ((ef, eg), c) in ledger {
        for i in 0..kernel.n {
            if ef[i] == 0 {
                continue;
            }
            for j in 0..kernel.n {
                let kij = kernel.k[i][j];
                if eg[j] == 0 || kij == ComplexValue::ZERO {
                    continue;
                }
                let mut df = ef.clone();
                df[i] -= 1;
                let mut dg = eg.clone();
                dg[j] -= 1;
                let w = (*c * kij).scale(f64::from(ef[i]) * f64::from(eg[j]));
                let slot = out.entry((df, dg)).or_insert(ComplexValue::ZERO);
                *slot = *slot + w;
            }
        }
    }
    out.retain(|_, c| *c != ComplexValue::ZERO);
    out
}

fn contract(ledger: &Ledger, nvars: usize, divisor: f64) -> MultiPoly {
    let mut out = MultiPoly::zero(nvars);
    for ((ef, eg), c) in ledger {
        out.accumulate(add_exps(ef, eg), *c);
    }
    for c in out.terms.values_mut() {
        *c = ComplexValue {
            re: c.re / divisor,
            im: c.im / divisor,
        };
    }
    out.pruned(Tolerance::global())
}

pub fn moyal_expand(f: &MultiPoly, g: &MultiPoly, kernel: &StarKernel) -> Result<MoyalExpansion> {
    f.same_dims(g)?;
    if kernel.n != f.nvars {
        return Err(Error::DimensionMismatch {
            expected: kernel.n,
            found: f.nvars,
        });
    }
    let mut ledger: Ledger = Ledger::new();
    for (ef, cf) in &f.terms {
        for (eg, cg) in &g.terms {
            ledger.insert((ef.clone(), eg.clone()), *cf * *cg);
        }
    }
    let mut orders = vec![contract(&ledger, f.nvars, 1.0)];
    let mut factorial = 1.0;
    let mut m = 0u32;
    loop {
        ledger = apply_bidifferential(&ledger, kernel);
        if ledger.is_empty() {
            break;
        }
        m += 1;
        factorial *= f64::from(m);
        orders.push(contract(&ledger, f.nvars, factorial));
    }
    let product = orders
        .iter()
        .fold(MultiPoly::zero(f.nvars), |acc, p| &acc + p);
    Ok(MoyalExpansion { product, orders })
}

pub fn moyal_star(f: &MultiPoly, g: &MultiPoly, kernel: &StarKernel) -> Result<MultiPoly> {
    Ok(moyal_expand(f, g, kernel)?.product)
}

/// `f⋆g - g⋆f`.
pub fn moyal_commutator(f: &MultiPoly, g: &MultiPoly, kernel: &StarKernel) -> Result<MultiPoly> {
    moyal_star(f, g, kernel)?.try_sub(&moyal_star(g, f, kernel)?)
}
