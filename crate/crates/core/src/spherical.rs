//! `ω`-spherical functions of a weighted Gelfand pair.
//!
//! On a finite group the algebra of bi-invariant functions is a commutative
//! semisimple algebra of dimension `d` (the number of double cosets), so it
//! has exactly `d` characters. They are computed by simultaneous
//! diagonalization of the multiplication matrices, and each character `χ` is
//! turned into its spherical function through
//!
//! ```text
//! χ(δ_i) = φ(D_i⁻¹) · Σ_{x∈D_i} ω(x) ω(x⁻¹).
//! ```

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex_serde;
use crate::error::{Error, Result};
use crate::function::{weighted_convolve, BiInvariantFunction, GFunction, Weight};
use crate::group::GroupTable;
use crate::hecke::{is_weighted_gelfand, HeckeAlgebra, WeightedPair};
use crate::linalg::{eigen_decompose, min_separation};
use crate::{Verdict, DEFAULT_SEED, DEFAULT_TOLERANCE};

const MAX_DIAGONALIZATION_ATTEMPTS: usize = 8;
const EIGENVALUE_SEPARATION: f64 = 1e-7;
const CHARACTER_DEDUP: f64 = 1e-7;

/// A bi-invariant function, by its value on each double coset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalFunction {
    #[serde(serialize_with = "complex_serde::serialize_vec")]
    coset_values: Vec<Complex64>,
}

impl SphericalFunction {
    pub fn new(coset_values: Vec<Complex64>) -> Self {
        SphericalFunction { coset_values }
    }

    pub fn coset_values(&self) -> &[Complex64] {
        &self.coset_values
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.coset_values[i]
    }

    pub fn expand(&self, pair: &WeightedPair) -> GFunction {
        BiInvariantFunction::new(self.coset_values.clone()).expand(pair.cosets())
    }

    /// `M_ω φ` is trivially bounded on a finite group.
    pub fn is_bounded(&self) -> bool {
        self.coset_values.iter().all(|v| v.is_finite())
    }
}

/// `χ(δ_i)` for each basis indicator.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Character {
    #[serde(serialize_with = "complex_serde::serialize_vec")]
    values: Vec<Complex64>,
}

impl Character {
    pub fn new(values: Vec<Complex64>) -> Self {
        Character { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    /// `max_{i,j} |χ(δ_i)χ(δ_j) - Σ_k c[i][j][k] χ(δ_k)|`.
    pub fn multiplicativity_residual(&self, algebra: &HeckeAlgebra) -> f64 {
        let c = algebra.constants();
        let d = algebra.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let rhs: Complex64 = (0..d).map(|k| self.values[k] * c.get(i, j, k)).sum();
                worst = worst.max((self.values[i] * self.values[j] - rhs).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalEntry {
    #[serde(flatten)]
    pub function: SphericalFunction,
    pub character: Character,
}

/// All spherical functions of a weighted Gelfand pair with their characters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SphericalSet {
    entries: Vec<SphericalEntry>,
}

impl SphericalSet {
    pub fn new(entries: Vec<SphericalEntry>) -> Self {
        SphericalSet { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SphericalEntry] {
        &self.entries
    }

    pub fn functions(&self) -> impl Iterator<Item = &SphericalFunction> {
        self.entries.iter().map(|e| &e.function)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationOptions {
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { seed: DEFAULT_SEED, tolerance: DEFAULT_TOLERANCE }
    }
}

/// Finds the `d` spherical functions of a weighted Gelfand pair.
///
/// The character vectors are the common eigenvectors of the transposed
/// multiplication matrices `M_i[j][k] = c[i][j][k]`. A random real
/// combination of them is diagonalized, retrying with fresh coefficients
/// when two eigenvalues come closer than `1e-7` (relative to the spectral
/// radius). Every returned function is checked against the functional
/// equation at `options.tolerance`.
///
/// The set is ordered by coset values, descending real part first and
/// imaginary part second.
pub fn enumerate_spherical(
    group: &GroupTable,
    algebra: &HeckeAlgebra,
    options: &EnumerationOptions,
) -> Result<SphericalSet> {
    let pair = algebra.pair();
    let at_e = pair.weight().at(group.identity());
    if at_e != 1.0 {
        return Err(Error::WeightNotUnitAtIdentity { value: at_e });
    }
    if let Verdict::Fails(w) = is_weighted_gelfand(algebra, options.tolerance) {
        return Err(Error::NotCommutative { i: w.i, j: w.j, x: w.x });
    }

    let d = algebra.dim();
    let c = algebra.constants();
    let id = pair.cosets().identity_coset();
    let k_order = pair.subgroup().order() as f64;
    let transposed: Vec<DMatrix<f64>> =
        (0..d).map(|i| DMatrix::from_fn(d, d, |j, k| c.get(i, j, k))).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut last_problem = String::from("no attempt made");
    for _ in 0..MAX_DIAGONALIZATION_ATTEMPTS {
        let mut combo = DMatrix::<f64>::zeros(d, d);
        for m in &transposed {
            combo += m * rng.random_range(-1.0..1.0);
        }
        let combo = combo.map(|v| Complex64::new(v, 0.0));
        let Some((lambdas, vectors)) = eigen_decompose(combo) else {
            last_problem = "Schur decomposition did not converge".into();
            continue;
        };
        let radius = lambdas.iter().map(|l| l.norm()).fold(1.0, f64::max);
        if d > 1 && min_separation(&lambdas) < EIGENVALUE_SEPARATION * radius {
            last_problem = "eigenvalues of the random combination collide".into();
            continue;
        }
        match characters_from_vectors(group, algebra, &vectors, id, k_order, options.tolerance) {
            Ok(mut entries) => {
                entries.sort_by(|a, b| compare_values(a.function.coset_values(), b.function.coset_values()));
                return Ok(SphericalSet { entries });
            }
            Err(problem) => last_problem = problem,
        }
    }
    Err(Error::Degenerate(format!(
        "joint diagonalization failed after {MAX_DIAGONALIZATION_ATTEMPTS} attempts: {last_problem}"
    )))
}

fn characters_from_vectors(
    group: &GroupTable,
    algebra: &HeckeAlgebra,
    vectors: &DMatrix<Complex64>,
    id: usize,
    k_order: f64,
    tol: f64,
) -> std::result::Result<Vec<SphericalEntry>, String> {
    let d = algebra.dim();
    let pair = algebra.pair();
    let mut entries: Vec<SphericalEntry> = Vec::with_capacity(d);
    for s in 0..d {
        let v = vectors.column(s);
        // χ(unit) = 1 forces χ(δ_id) = |K| ω(e) = |K|.
        if v[id].norm() < 1e-12 {
            return Err("eigenvector vanishes on the identity coset".into());
        }
        let scale = Complex64::new(k_order, 0.0) / v[id];
        let chi: Vec<Complex64> = v.iter().map(|z| z * scale).collect();
        let mut phi = vec![Complex64::new(0.0, 0.0); d];
        for (i, &ci) in chi.iter().enumerate() {
            phi[pair.cosets().inverse_coset(i)] = ci / algebra.symmetric_mass(i);
        }
        let function = SphericalFunction::new(phi);
        let character = Character::new(chi);

        let psi_scale = function
            .coset_values()
            .iter()
            .enumerate()
            .map(|(i, v)| v.norm() * algebra.coset_weight(i))
            .fold(1.0, f64::max);
        let residual = verify_functional_equation(group, pair, &function);
        if residual > tol * psi_scale * psi_scale {
            return Err(format!("functional equation residual {residual:.3e} exceeds tolerance"));
        }
        if entries
            .iter()
            .any(|e| max_diff(e.character.values(), character.values()) < CHARACTER_DEDUP)
        {
            return Err("duplicate character".into());
        }
        entries.push(SphericalEntry { function, character });
    }
    Ok(entries)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn compare_values(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x.re - y.re).abs() > CHARACTER_DEDUP {
            return y.re.total_cmp(&x.re);
        }
        if (x.im - y.im).abs() > CHARACTER_DEDUP {
            return y.im.total_cmp(&x.im);
        }
    }
    Ordering::Equal
}

/// `max_{x,y} |(1/|K|) Σ_k (M_ω φ)(xky) - (M_ω φ)(x)(M_ω φ)(y)|`.
pub fn verify_functional_equation(group: &GroupTable, pair: &WeightedPair, phi: &SphericalFunction) -> f64 {
    functional_equation_residual(group, pair, pair.weight(), phi)
}

fn functional_equation_residual(
    group: &GroupTable,
    pair: &WeightedPair,
    weight: &Weight,
    phi: &SphericalFunction,
) -> f64 {
    let psi: Vec<Complex64> = phi
        .expand(pair)
        .values()
        .iter()
        .enumerate()
        .map(|(x, v)| v * weight.at(x))
        .collect();
    let k = pair.subgroup().elements();
    let inv_k = 1.0 / k.len() as f64;
    let mut worst: f64 = 0.0;
    for x in group.elements() {
        let xk: Vec<usize> = k.iter().map(|&kk| group.mul(x, kk)).collect();
        for y in group.elements() {
            let avg: Complex64 = xk.iter().map(|&a| psi[group.mul(a, y)]).sum::<Complex64>() * inv_k;
            worst = worst.max((avg - psi[x] * psi[y]).norm());
        }
    }
    worst
}

/// `χ_{φ,ω}(f) = Σ_x (M_ω f)(x) (M_ω φ)(x⁻¹)`, evaluated on `G`.
pub fn character_value(group: &GroupTable, pair: &WeightedPair, f: &GFunction, phi: &GFunction) -> Complex64 {
    let w = pair.weight();
    group
        .elements()
        .map(|x| {
            let xi = group.inv(x);
            f.at(x) * w.at(x) * phi.at(xi) * w.at(xi)
        })
        .sum()
}

/// Returns `(χ, ‖f ∗_ω φ - χ φ‖_∞)` for a bi-invariant `f`.
///
/// Requires `ω(e) = 1` and `φ(e) = 1`.
pub fn verify_eigen_property(
    group: &GroupTable,
    pair: &WeightedPair,
    f: &BiInvariantFunction,
    phi: &SphericalFunction,
) -> Result<(Complex64, f64)> {
    let at_e = pair.weight().at(group.identity());
    if at_e != 1.0 {
        return Err(Error::WeightNotUnitAtIdentity { value: at_e });
    }
    let phi_e = phi.at(pair.cosets().identity_coset());
    if (phi_e - Complex64::new(1.0, 0.0)).norm() > DEFAULT_TOLERANCE {
        return Err(Error::NotNormalized { value: format!("{phi_e}") });
    }
    let fg = f.expand(pair.cosets());
    let phig = phi.expand(pair);
    let chi = character_value(group, pair, &fg, &phig);
    let lhs = weighted_convolve(group, &fg, &phig, pair.weight());
    Ok((chi, lhs.max_abs_diff(&(&phig * chi))))
}

/// Holds iff `M_ω φ` satisfies the unweighted spherical functional equation.
pub fn classical_correspondence(
    group: &GroupTable,
    pair: &WeightedPair,
    phi: &SphericalFunction,
    tol: f64,
) -> bool {
    // Feed ωφ through the ω ≡ 1 equation.
    let weighted: Vec<Complex64> = phi
        .coset_values()
        .iter()
        .enumerate()
        .map(|(i, v)| v * pair.weight().on_coset(pair.cosets(), i))
        .collect();
    let psi = SphericalFunction::new(weighted);
    let uniform = Weight::uniform(group.order());
    functional_equation_residual(group, pair, &uniform, &psi) < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{double_cosets, subgroup_closure, SubgroupEmbedding, DEFAULT_ELEMENT_CAP};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s3_pair(values: [f64; 2]) -> (GroupTable, WeightedPair) {
        let g = GroupTable::symmetric(3, DEFAULT_ELEMENT_CAP).unwrap();
        let k = subgroup_closure(&g, &[g.index_of_permutation(&[1, 0, 2]).unwrap()]).unwrap();
        let dc = double_cosets(&g, &k);
        let w = Weight::by_double_coset(&dc, &values).unwrap();
        let pair = WeightedPair::new(&g, k, w).unwrap();
        (g, pair)
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert!(max_diff(a, b) < tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn s3_classical_spherical_functions() {
        let (g, pair) = s3_pair([1.0, 1.0]);
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        let set = enumerate_spherical(&g, &a, &EnumerationOptions::default()).unwrap();
        assert_eq!(set.len(), 2);
        assert_close(set.entries()[0].function.coset_values(), &[c(1.0, 0.0), c(1.0, 0.0)], 1e-12);
        assert_close(set.entries()[1].function.coset_values(), &[c(1.0, 0.0), c(-0.5, 0.0)], 1e-12);
        for e in set.entries() {
            assert!(e.character.multiplicativity_residual(&a) < 1e-12);
            assert!(e.function.is_bounded());
        }
    }

    #[test]
    fn s3_weighted_spherical_functions() {
        let (g, pair) = s3_pair([1.0, 2.0]);
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        let set = enumerate_spherical(&g, &a, &EnumerationOptions::default()).unwrap();
        assert_close(set.entries()[0].function.coset_values(), &[c(1.0, 0.0), c(0.5, 0.0)], 1e-12);
        assert_close(set.entries()[1].function.coset_values(), &[c(1.0, 0.0), c(-0.25, 0.0)], 1e-12);
        for phi in set.functions() {
            assert!(classical_correspondence(&g, &pair, phi, 1e-9));
        }
    }

    #[test]
    fn cyclic_four_gives_dft_characters() {
        let g = GroupTable::cyclic(4).unwrap();
        let pair = WeightedPair::new(&g, SubgroupEmbedding::trivial(&g), Weight::uniform(4)).unwrap();
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        let set = enumerate_spherical(&g, &a, &EnumerationOptions::default()).unwrap();
        assert_eq!(set.len(), 4);
        let i = c(0.0, 1.0);
        for j in 0..4 {
            let expected: Vec<Complex64> = (0..4).map(|x| i.powu((j * x) as u32)).collect();
            assert!(set.functions().any(|phi| max_diff(phi.coset_values(), &expected) < 1e-12));
        }
    }

    #[test]
    fn requires_gelfand_and_unit_weight() {
        let g = GroupTable::symmetric(3, DEFAULT_ELEMENT_CAP).unwrap();
        let pair = WeightedPair::new(&g, SubgroupEmbedding::trivial(&g), Weight::uniform(6)).unwrap();
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        assert!(matches!(
            enumerate_spherical(&g, &a, &EnumerationOptions::default()),
            Err(Error::NotCommutative { .. })
        ));
        let (g, pair) = s3_pair([2.0, 1.0]);
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        assert!(matches!(
            enumerate_spherical(&g, &a, &EnumerationOptions::default()),
            Err(Error::WeightNotUnitAtIdentity { .. })
        ));
    }

    #[test]
    fn functional_equation_rejects_wrong_value() {
        let (g, pair) = s3_pair([1.0, 1.0]);
        let wrong = SphericalFunction::new(vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(verify_functional_equation(&g, &pair, &wrong) > 0.1);
        assert!(!classical_correspondence(&g, &pair, &wrong, 1e-9));
        let one = SphericalFunction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(verify_functional_equation(&g, &pair, &one), 0.0);
    }

    #[test]
    fn eigen_property_examples() {
        let (g, pair) = s3_pair([1.0, 1.0]);
        let one = SphericalFunction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let f = BiInvariantFunction::new(vec![c(0.7, -0.2), c(1.5, 0.0)]);
        let (chi, residual) = verify_eigen_property(&g, &pair, &f, &one).unwrap();
        let sum = f.expand(pair.cosets()).sum();
        assert!((chi - sum).norm() < 1e-12 && residual < 1e-12);

        let (chi, residual) = verify_eigen_property(&g, &pair, &BiInvariantFunction::zeros(2), &one).unwrap();
        assert_eq!((chi, residual), (c(0.0, 0.0), 0.0));

        let unnormalized = SphericalFunction::new(vec![c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            verify_eigen_property(&g, &pair, &f, &unnormalized),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn serializes_as_pairs() {
        let (g, pair) = s3_pair([1.0, 1.0]);
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        let set = enumerate_spherical(&g, &a, &EnumerationOptions::default()).unwrap();
        let json = serde_json::to_value(&set).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 2);
        assert_eq!(json[0]["coset_values"][0][0], 1.0);
        assert_eq!(json[0]["character"].as_array().unwrap().len(), 2);
    }
}
