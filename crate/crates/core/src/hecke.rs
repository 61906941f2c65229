//! The weighted Hecke algebra of `K`-bi-invariant functions and the weighted
//! Gelfand pair test.
//!
//! The algebra is represented on the basis of double-coset indicators
//! `δ_0, …, δ_{d-1}` (coset 0 always contains the identity). Products are
//! encoded by structure constants `δ_i ∗_ω δ_j = Σ_k c[i][j][k] δ_k`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{require_bi_invariant, weight_checks, BiInvariantFunction, Weight};
use crate::group::{
    double_cosets, theta_in_kxinvk, DoubleCosetPartition, Element, GroupAutomorphism, GroupTable,
    SubgroupEmbedding,
};
use crate::Verdict;

/// A subgroup together with its double cosets and a weight on `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPair {
    subgroup: SubgroupEmbedding,
    cosets: DoubleCosetPartition,
    weight: Weight,
}

impl WeightedPair {
    pub fn new(group: &GroupTable, subgroup: SubgroupEmbedding, weight: Weight) -> Result<Self> {
        if weight.len() != group.order() {
            return Err(Error::LengthMismatch { expected: group.order(), found: weight.len() });
        }
        let cosets = double_cosets(group, &subgroup);
        Ok(WeightedPair { subgroup, cosets, weight })
    }

    /// Same subgroup and cosets, different weight.
    pub fn with_weight(&self, weight: Weight) -> Result<Self> {
        if weight.len() != self.weight.len() {
            return Err(Error::LengthMismatch { expected: self.weight.len(), found: weight.len() });
        }
        Ok(WeightedPair { subgroup: self.subgroup.clone(), cosets: self.cosets.clone(), weight })
    }

    pub fn subgroup(&self) -> &SubgroupEmbedding {
        &self.subgroup
    }

    pub fn cosets(&self) -> &DoubleCosetPartition {
        &self.cosets
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// `Σ_{x∈D_i} ω(x) ω(x⁻¹)`, strictly positive for every coset.
    pub fn symmetric_mass(&self, group: &GroupTable, i: usize) -> f64 {
        self.cosets
            .coset(i)
            .iter()
            .map(|&x| self.weight.at(x) * self.weight.at(group.inv(x)))
            .sum()
    }
}

/// `c[i][j][k]` with `δ_i ∗_ω δ_j = Σ_k c[i][j][k] δ_k`.
///
/// Entries are sums of positive weight ratios, hence real and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    d: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.d + j) * self.d + k]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeckeAlgebra {
    pair: WeightedPair,
    constants: StructureConstants,
    symmetric_masses: Vec<f64>,
}

/// Builds the structure constants of `(L¹_ω(K\G/K), ∗_ω)`.
///
/// The weight must be constant on double cosets. Each product of indicators
/// is evaluated on every element of `G`, read off at the smallest element of
/// each output coset, and checked to be constant on the remaining elements.
pub fn hecke_structure_constants(group: &GroupTable, pair: &WeightedPair) -> Result<HeckeAlgebra> {
    let cosets = pair.cosets();
    let weight = pair.weight();
    require_bi_invariant(weight, cosets)?;
    let d = cosets.len();
    let n = group.order();

    let slabs: Vec<Result<Vec<f64>>> = (0..d)
        .into_par_iter()
        .map(|i| {
            // slab[j * d + k] = c[i][j][k]
            let mut slab = vec![0.0; d * d];
            let mut seen = vec![false; d];
            let mut scratch = vec![0.0; d];
            for x in 0..n {
                scratch.iter_mut().for_each(|v| *v = 0.0);
                let wx = weight.at(x);
                for &y in cosets.coset(i) {
                    let z = group.mul(group.inv(y), x);
                    scratch[cosets.coset_of(z)] += weight.at(y) * weight.at(z) / wx;
                }
                let k = cosets.coset_of(x);
                if !seen[k] {
                    seen[k] = true;
                    for j in 0..d {
                        slab[j * d + k] = scratch[j];
                    }
                } else {
                    for j in 0..d {
                        let expected = slab[j * d + k];
                        let scale = expected.abs().max(scratch[j].abs()).max(1.0);
                        if (expected - scratch[j]).abs() > 1e-9 * scale {
                            return Err(Error::ConsistencyViolation(format!(
                                "delta_{i} * delta_{j} is not constant on double coset {k} (element {x})"
                            )));
                        }
                    }
                }
            }
            Ok(slab)
        })
        .collect();

    let mut c = Vec::with_capacity(d * d * d);
    for slab in slabs {
        c.extend(slab?);
    }
    let symmetric_masses = (0..d).map(|i| pair.symmetric_mass(group, i)).collect();
    Ok(HeckeAlgebra { pair: pair.clone(), constants: StructureConstants { d, c }, symmetric_masses })
}

impl HeckeAlgebra {
    pub fn new(group: &GroupTable, pair: &WeightedPair) -> Result<Self> {
        hecke_structure_constants(group, pair)
    }

    pub fn dim(&self) -> usize {
        self.constants.d
    }

    pub fn pair(&self) -> &WeightedPair {
        &self.pair
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn symmetric_mass(&self, i: usize) -> f64 {
        self.symmetric_masses[i]
    }

    /// Constant value of the weight on coset `i`.
    pub fn coset_weight(&self, i: usize) -> f64 {
        self.pair.weight.on_coset(&self.pair.cosets, i)
    }

    /// The unit `δ_0 / (|K| ω(e))` of the algebra.
    pub fn unit(&self) -> BiInvariantFunction {
        let id = self.pair.cosets.identity_coset();
        let scale = 1.0 / (self.pair.subgroup.order() as f64 * self.coset_weight(id));
        let mut values = vec![Complex64::new(0.0, 0.0); self.dim()];
        values[id] = Complex64::new(scale, 0.0);
        BiInvariantFunction::new(values)
    }

    /// `f ∗_ω g` computed in coset coordinates.
    pub fn convolve(&self, f: &BiInvariantFunction, g: &BiInvariantFunction) -> BiInvariantFunction {
        let d = self.dim();
        assert!(f.len() == d && g.len() == d, "coset count mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for i in 0..d {
            let fi = f.at(i);
            if fi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                let fij = fi * g.at(j);
                for (k, o) in out.iter_mut().enumerate() {
                    *o += fij * self.constants.get(i, j, k);
                }
            }
        }
        BiInvariantFunction::new(out)
    }

    /// Matrix of `f ↦ δ_i ∗_ω f`: entry `(k, j)` is `c[i][j][k]`.
    pub fn left_matrix(&self, i: usize) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |k, j| Complex64::new(self.constants.get(i, j, k), 0.0))
    }
}

/// Location where two basis elements fail to commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CommutatorWitness {
    pub i: usize,
    pub j: usize,
    pub x: Element,
}

/// Commutativity of the algebra, tested on all pairs of basis indicators.
///
/// Entries are compared to within `tol` times the largest structure constant.
pub fn is_weighted_gelfand(algebra: &HeckeAlgebra, tol: f64) -> Verdict<CommutatorWitness> {
    let c = &algebra.constants;
    let d = c.d;
    let bound = tol * c.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                if (c.get(i, j, k) - c.get(j, i, k)).abs() > bound {
                    let x = algebra.pair.cosets.representative(k);
                    return Verdict::Fails(CommutatorWitness { i, j, x });
                }
            }
        }
    }
    Verdict::Holds
}

/// The three hypotheses of the involutive-automorphism sufficient condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RapCondition {
    pub weight_bi_invariant: bool,
    pub weight_theta_invariant: bool,
    pub theta_in_kxinvk: Verdict<Element>,
}

impl RapCondition {
    pub fn holds(&self) -> bool {
        self.weight_bi_invariant && self.weight_theta_invariant && self.theta_in_kxinvk.holds()
    }
}

/// Checks that `ω` is `K`-bi-invariant, `ω∘θ = ω`, and `θ(x) ∈ Kx⁻¹K`.
///
/// When all three hold, the algebra is built and its commutativity is
/// confirmed directly; a disagreement is reported as a consistency error.
pub fn check_rap_condition(
    group: &GroupTable,
    pair: &WeightedPair,
    theta: &GroupAutomorphism,
    tol: f64,
) -> Result<RapCondition> {
    if let Some(x) = group.elements().find(|&x| theta.apply(theta.apply(x)) != x) {
        return Err(Error::NotInvolutive { x });
    }
    let flags = weight_checks(pair.weight(), group, pair.cosets(), Some(theta));
    let condition = RapCondition {
        weight_bi_invariant: flags.k_bi_invariant.holds(),
        weight_theta_invariant: flags.theta_invariant.is_some_and(|v| v.holds()),
        theta_in_kxinvk: theta_in_kxinvk(pair.cosets(), group, theta),
    };
    if condition.holds() {
        let algebra = hecke_structure_constants(group, pair)?;
        if let Verdict::Fails(w) = is_weighted_gelfand(&algebra, tol) {
            return Err(Error::ConsistencyViolation(format!(
                "involutive-automorphism condition holds but delta_{} and delta_{} do not commute at {}",
                w.i, w.j, w.x
            )));
        }
    }
    Ok(condition)
}

/// Checks `Σ_x f(x)ω(x)ω(x⁻¹) = Σ_x f(x⁻¹)ω(x⁻¹)ω(x)` for every coset indicator `f`.
///
/// Requires `ω(e) = 1`. Comparison is relative: `|a - b| <= tol * max(1, |a|)`.
pub fn check_unimodularity_identity(group: &GroupTable, pair: &WeightedPair, tol: f64) -> Result<bool> {
    let weight = pair.weight();
    let at_e = weight.at(group.identity());
    if at_e != 1.0 {
        return Err(Error::WeightNotUnitAtIdentity { value: at_e });
    }
    let cosets = pair.cosets();
    let n = group.order();
    let mut lhs = vec![0.0; cosets.len()];
    let mut rhs = vec![0.0; cosets.len()];
    for x in 0..n {
        let xi = group.inv(x);
        let m = weight.at(x) * weight.at(xi);
        lhs[cosets.coset_of(x)] += m;
        // f(x⁻¹) = δ_i(x⁻¹) selects x with x⁻¹ ∈ D_i.
        rhs[cosets.coset_of(xi)] += weight.at(xi) * weight.at(x);
    }
    Ok(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).abs() <= tol * a.abs().max(1.0)))
}

/// Verdict on `(G, K, ω)` together with the sufficient-condition and unimodularity checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GelfandReport {
    pub gelfand: bool,
    pub witness: Option<CommutatorWitness>,
    /// `None` when no automorphism was supplied.
    pub rap: Option<bool>,
    /// `None` when `ω(e) != 1`, where the identity is not asserted.
    pub unimodularity: Option<bool>,
}

/// Runs the commutativity test and the related checks on a built algebra.
///
/// The implications "sufficient condition ⟹ Gelfand" and
/// "Gelfand with ω(e)=1 ⟹ unimodularity identity" are enforced; a violation
/// is returned as [`Error::ConsistencyViolation`].
pub fn gelfand_report(
    group: &GroupTable,
    algebra: &HeckeAlgebra,
    theta: Option<&GroupAutomorphism>,
    tol: f64,
) -> Result<GelfandReport> {
    let verdict = is_weighted_gelfand(algebra, tol);
    let gelfand = verdict.holds();
    let rap = match theta {
        Some(t) => Some(check_rap_condition(group, algebra.pair(), t, tol)?.holds()),
        None => None,
    };
    let unimodularity = if algebra.pair().weight().at(group.identity()) == 1.0 {
        let holds = check_unimodularity_identity(group, algebra.pair(), tol)?;
        if gelfand && !holds {
            return Err(Error::ConsistencyViolation(
                "weighted Gelfand pair violates the unimodularity identity".into(),
            ));
        }
        Some(holds)
    } else {
        None
    };
    Ok(GelfandReport { gelfand, witness: verdict.witness().copied(), rap, unimodularity })
}
