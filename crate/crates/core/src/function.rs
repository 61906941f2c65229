//! Functions on a finite group, weights, and the weighted convolution.
//!
//! Sums over `G` use counting measure. Averages over `K` are normalized,
//! `(1/|K|) Σ_{k∈K}`, so the point mass at the identity is the unit of the
//! weighted algebra whenever `ω(e) = 1`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{DoubleCosetPartition, Element, GroupAutomorphism, GroupTable, SubgroupEmbedding};
use crate::Verdict;

/// A strictly positive function on `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    values: Vec<f64>,
}

impl Weight {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) =
            values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NonPositiveWeight { index, value });
        }
        Ok(Weight { values })
    }

    pub fn uniform(order: usize) -> Self {
        Weight { values: vec![1.0; order] }
    }

    /// Weight that takes `coset_values[i]` on the `i`-th double coset.
    pub fn by_double_coset(cosets: &DoubleCosetPartition, coset_values: &[f64]) -> Result<Self> {
        if coset_values.len() != cosets.len() {
            return Err(Error::LengthMismatch { expected: cosets.len(), found: coset_values.len() });
        }
        Self::new(
            (0..cosets.group_order())
                .map(|x| coset_values[cosets.coset_of(x)])
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, x: Element) -> f64 {
        self.values[x]
    }

    /// `ω̌(x) = ω(x⁻¹)`.
    pub fn reflect(&self, group: &GroupTable) -> Weight {
        Weight { values: group.elements().map(|x| self.values[group.inv(x)]).collect() }
    }

    /// Value on a double coset; only meaningful for bi-invariant weights.
    pub fn on_coset(&self, cosets: &DoubleCosetPartition, id: usize) -> f64 {
        self.values[cosets.representative(id)]
    }
}

/// Invariance properties of a weight relative to `K` and optionally `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightFlags {
    pub k_bi_invariant: Verdict<(Element, Element)>,
    pub symmetric: Verdict<Element>,
    pub unit_at_identity: bool,
    pub theta_invariant: Option<Verdict<Element>>,
}

pub fn weight_checks(
    weight: &Weight,
    group: &GroupTable,
    cosets: &DoubleCosetPartition,
    theta: Option<&GroupAutomorphism>,
) -> WeightFlags {
    let k_bi_invariant = cosets
        .cosets()
        .iter()
        .find_map(|c| c.iter().find(|&&x| weight.at(x) != weight.at(c[0])).map(|&x| (c[0], x)))
        .map_or(Verdict::Holds, Verdict::Fails);
    let symmetric = group
        .elements()
        .find(|&x| weight.at(x) != weight.at(group.inv(x)))
        .map_or(Verdict::Holds, Verdict::Fails);
    let theta_invariant = theta.map(|t| {
        group
            .elements()
            .find(|&x| weight.at(t.apply(x)) != weight.at(x))
            .map_or(Verdict::Holds, Verdict::Fails)
    });
    WeightFlags {
        k_bi_invariant,
        symmetric,
        unit_at_identity: weight.at(group.identity()) == 1.0,
        theta_invariant,
    }
}

pub(crate) fn require_bi_invariant(weight: &Weight, cosets: &DoubleCosetPartition) -> Result<()> {
    for c in cosets.cosets() {
        if let Some(&b) = c.iter().find(|&&x| weight.at(x) != weight.at(c[0])) {
            return Err(Error::WeightNotBiInvariant { a: c[0], b });
        }
    }
    Ok(())
}

/// A complex-valued function on `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GFunction {
    values: Vec<Complex64>,
}

impl GFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        GFunction { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        GFunction { values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn zeros(order: usize) -> Self {
        GFunction { values: vec![Complex64::new(0.0, 0.0); order] }
    }

    pub fn constant(order: usize, c: Complex64) -> Self {
        GFunction { values: vec![c; order] }
    }

    /// Point mass at `x`.
    pub fn delta(order: usize, x: Element) -> Self {
        let mut f = Self::zeros(order);
        f.values[x] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, x: Element) -> Complex64 {
        self.values[x]
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_x |f(x) - g(x)|`.
    pub fn max_abs_diff(&self, other: &GFunction) -> f64 {
        assert_eq!(self.len(), other.len(), "functions live on groups of different order");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Element, Complex64) -> Complex64) -> GFunction {
        GFunction { values: self.values.iter().enumerate().map(|(x, &v)| f(x, v)).collect() }
    }

    /// Holds iff `f` is constant on every double coset (within `tol`).
    pub fn bi_invariance(&self, cosets: &DoubleCosetPartition, tol: f64) -> Verdict<(Element, Element)> {
        cosets
            .cosets()
            .iter()
            .find_map(|c| {
                c.iter()
                    .find(|&&x| (self.at(x) - self.at(c[0])).norm() > tol)
                    .map(|&x| (c[0], x))
            })
            .map_or(Verdict::Holds, Verdict::Fails)
    }

    /// Holds iff `f(kx) = f(x)` for all `k ∈ K` (within `tol`).
    pub fn left_invariance(&self, group: &GroupTable, k: &SubgroupEmbedding, tol: f64) -> Verdict<Element> {
        group
            .elements()
            .find(|&x| k.elements().iter().any(|&kk| (self.at(group.mul(kk, x)) - self.at(x)).norm() > tol))
            .map_or(Verdict::Holds, Verdict::Fails)
    }
}

impl Add<&GFunction> for &GFunction {
    type Output = GFunction;
    fn add(self, rhs: &GFunction) -> GFunction {
        assert_eq!(self.len(), rhs.len());
        GFunction { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&GFunction> for &GFunction {
    type Output = GFunction;
    fn sub(self, rhs: &GFunction) -> GFunction {
        assert_eq!(self.len(), rhs.len());
        GFunction { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<Complex64> for &GFunction {
    type Output = GFunction;
    fn mul(self, c: Complex64) -> GFunction {
        GFunction { values: self.values.iter().map(|v| v * c).collect() }
    }
}

/// A `K`-bi-invariant function, stored by its value on each double coset.
#[derive(Debug, Clone, PartialEq)]
pub struct BiInvariantFunction {
    coset_values: Vec<Complex64>,
}

impl BiInvariantFunction {
    pub fn new(coset_values: Vec<Complex64>) -> Self {
        BiInvariantFunction { coset_values }
    }

    pub fn zeros(d: usize) -> Self {
        BiInvariantFunction { coset_values: vec![Complex64::new(0.0, 0.0); d] }
    }

    /// Indicator of double coset `i`.
    pub fn indicator(d: usize, i: usize) -> Self {
        let mut f = Self::zeros(d);
        f.coset_values[i] = Complex64::new(1.0, 0.0);
        f
    }

    /// Reads coset values off a function that must be bi-invariant within `tol`.
    pub fn from_function(f: &GFunction, cosets: &DoubleCosetPartition, tol: f64) -> Result<Self> {
        if f.len() != cosets.group_order() {
            return Err(Error::LengthMismatch { expected: cosets.group_order(), found: f.len() });
        }
        if let Verdict::Fails((a, b)) = f.bi_invariance(cosets, tol) {
            return Err(Error::FunctionNotBiInvariant { a, b });
        }
        Ok(BiInvariantFunction {
            coset_values: (0..cosets.len()).map(|i| f.at(cosets.representative(i))).collect(),
        })
    }

    pub fn expand(&self, cosets: &DoubleCosetPartition) -> GFunction {
        assert_eq!(self.coset_values.len(), cosets.len(), "coset count mismatch");
        GFunction::new(
            (0..cosets.group_order())
                .map(|x| self.coset_values[cosets.coset_of(x)])
                .collect(),
        )
    }

    pub fn coset_values(&self) -> &[Complex64] {
        &self.coset_values
    }

    pub fn len(&self) -> usize {
        self.coset_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coset_values.is_empty()
    }

    #[inline]
    pub fn at(&self, i: usize) -> Complex64 {
        self.coset_values[i]
    }

    pub fn max_abs_diff(&self, other: &BiInvariantFunction) -> f64 {
        assert_eq!(self.len(), other.len());
        self.coset_values
            .iter()
            .zip(&other.coset_values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `‖f‖_{1,ω} = Σ_x |f(x)| ω(x)`.
pub fn weighted_l1_norm(f: &GFunction, weight: &Weight) -> f64 {
    assert_eq!(f.len(), weight.len());
    f.values().iter().zip(weight.values()).map(|(v, w)| v.norm() * w).sum()
}

/// `(f ∗_ω g)(x) = Σ_y f(y) g(y⁻¹x) ω(y) ω(y⁻¹x) / ω(x)`.
pub fn weighted_convolve(group: &GroupTable, f: &GFunction, g: &GFunction, weight: &Weight) -> GFunction {
    let n = group.order();
    assert!(f.len() == n && g.len() == n && weight.len() == n, "length mismatch");
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for y in 0..n {
            let fy = f.at(y);
            if fy == Complex64::new(0.0, 0.0) {
                continue;
            }
            let z = group.mul(group.inv(y), x);
            acc += fy * g.at(z) * (weight.at(y) * weight.at(z));
        }
        out.push(acc / weight.at(x));
    }
    GFunction::new(out)
}

/// `(M_ω f)(x) = ω(x) f(x)`.
pub fn multiplication_operator(f: &GFunction, weight: &Weight) -> GFunction {
    assert_eq!(f.len(), weight.len());
    f.map(|x, v| v * weight.at(x))
}

/// `(τ_s f)(x) = f(s⁻¹x)`.
pub fn translate(group: &GroupTable, f: &GFunction, s: Element) -> GFunction {
    let si = group.inv(s);
    f.map(|x, _| f.at(group.mul(si, x)))
}

/// `Γ^s_ω f = τ_s(M_ω f) / ω`.
pub fn gamma(group: &GroupTable, f: &GFunction, s: Element, weight: &Weight) -> GFunction {
    translate(group, &multiplication_operator(f, weight), s).map(|x, v| v / weight.at(x))
}

/// `f^♯(x) = (1/|K|²) Σ_{k₁,k₂∈K} f(k₁ x k₂)`.
pub fn sharp_projection(group: &GroupTable, k: &SubgroupEmbedding, f: &GFunction) -> GFunction {
    let scale = 1.0 / (k.order() * k.order()) as f64;
    f.map(|x, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &k1 in k.elements() {
            let k1x = group.mul(k1, x);
            for &k2 in k.elements() {
                acc += f.at(group.mul(k1x, k2));
            }
        }
        acc * scale
    })
}

/// `f^θ(x) = f(θ(x))`.
pub fn theta_pullback(f: &GFunction, theta: &GroupAutomorphism) -> GFunction {
    f.map(|x, _| f.at(theta.apply(x)))
}

/// `f̌(x) = f(x⁻¹)`.
pub fn reflect(group: &GroupTable, f: &GFunction) -> GFunction {
    f.map(|x, _| f.at(group.inv(x)))
}
