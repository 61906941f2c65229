//! Multipliers of the weighted bi-invariant algebra: linear maps with
//! `T(f ∗_ω g) = Tf ∗_ω g`, and their symbols on the spherical spectrum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex_serde;
use crate::error::{Error, Result};
use crate::fourier::FourierTable;
use crate::function::BiInvariantFunction;
use crate::hecke::HeckeAlgebra;
use crate::{Verdict, DEFAULT_SEED, DEFAULT_TOLERANCE};

const SYMBOL_PROBES: usize = 16;

/// A linear operator on bi-invariant functions in coset coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierOperator {
    matrix: DMatrix<Complex64>,
    kernel: Option<BiInvariantFunction>,
}

impl MultiplierOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Input(format!(
                "operator matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(MultiplierOperator { matrix, kernel: None })
    }

    pub fn identity(d: usize) -> Self {
        MultiplierOperator { matrix: DMatrix::identity(d, d), kernel: None }
    }

    pub fn scalar(d: usize, c: Complex64) -> Self {
        MultiplierOperator { matrix: DMatrix::identity(d, d) * c, kernel: None }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn kernel(&self) -> Option<&BiInvariantFunction> {
        self.kernel.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, f: &BiInvariantFunction) -> BiInvariantFunction {
        assert_eq!(f.len(), self.dim(), "coset count mismatch");
        let d = self.dim();
        BiInvariantFunction::new(
            (0..d).map(|k| (0..d).map(|j| self.matrix[(k, j)] * f.at(j)).sum()).collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MultiplierOperator) -> MultiplierOperator {
        MultiplierOperator { matrix: &self.matrix * &other.matrix, kernel: None }
    }

    pub fn transpose(&self) -> MultiplierOperator {
        MultiplierOperator { matrix: self.matrix.transpose(), kernel: None }
    }
}

/// `f ↦ h ∗_ω f`; column `j` holds the coefficients of `h ∗_ω δ_j`.
pub fn multiplier_from_kernel(algebra: &HeckeAlgebra, h: &BiInvariantFunction) -> MultiplierOperator {
    let d = algebra.dim();
    assert_eq!(h.len(), d, "coset count mismatch");
    let mut matrix = DMatrix::zeros(d, d);
    for j in 0..d {
        let col = algebra.convolve(h, &BiInvariantFunction::indicator(d, j));
        for k in 0..d {
            matrix[(k, j)] = col.at(k);
        }
    }
    MultiplierOperator { matrix, kernel: Some(h.clone()) }
}

fn scaled_bound(tol: f64, a: &BiInvariantFunction, b: &BiInvariantFunction) -> f64 {
    let scale = a
        .coset_values()
        .iter()
        .chain(b.coset_values())
        .map(|v| v.norm())
        .fold(1.0, f64::max);
    tol * scale
}

/// Checks `T(δ_i ∗_ω δ_j) = (Tδ_i) ∗_ω δ_j` on all basis pairs.
pub fn is_multiplier(algebra: &HeckeAlgebra, t: &MultiplierOperator, tol: f64) -> Verdict<(usize, usize)> {
    let d = algebra.dim();
    let basis: Vec<BiInvariantFunction> = (0..d).map(|i| BiInvariantFunction::indicator(d, i)).collect();
    let images: Vec<BiInvariantFunction> = basis.iter().map(|b| t.apply(b)).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = t.apply(&algebra.convolve(&basis[i], &basis[j]));
            let rhs = algebra.convolve(&images[i], &basis[j]);
            if lhs.max_abs_diff(&rhs) > scaled_bound(tol, &lhs, &rhs) {
                return Verdict::Fails((i, j));
            }
        }
    }
    Verdict::Holds
}

/// Value of the symbol at each spherical function, in set order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierSymbol {
    #[serde(rename = "symbol", serialize_with = "complex_serde::serialize_vec")]
    values: Vec<Complex64>,
}

impl MultiplierSymbol {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs_diff(&self, other: &[Complex64]) -> f64 {
        self.values.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolOptions {
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SymbolOptions {
    fn default() -> Self {
        SymbolOptions { seed: DEFAULT_SEED, tolerance: DEFAULT_TOLERANCE }
    }
}

/// Extracts `𝔟` with `𝓕^ω(Tf) = 𝔟 · 𝓕^ω(f)`.
///
/// A random probe `g` whose transform vanishes nowhere gives
/// `𝔟 = 𝓕^ω(Tg) / 𝓕^ω(g)`. The identity is then verified on every basis
/// indicator, and a second independent probe must reproduce `𝔟`.
pub fn extract_symbol(
    t: &MultiplierOperator,
    table: &FourierTable,
    options: &SymbolOptions,
) -> Result<MultiplierSymbol> {
    let d = table.dim();
    if t.dim() != d {
        return Err(Error::LengthMismatch { expected: d, found: t.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let first = symbol_from_probe(t, table, &mut rng)?;
    let tol = options.tolerance;

    for i in 0..d {
        let f = BiInvariantFunction::indicator(d, i);
        let lhs = table.transform(&t.apply(&f));
        let rhs: Vec<Complex64> = table.transform(&f).iter().zip(&first).map(|(a, b)| a * b).collect();
        let scale = lhs.iter().chain(&rhs).map(|v| v.norm()).fold(1.0, f64::max);
        for (s, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
            if (l - r).norm() > tol * scale {
                return Err(Error::NotAMultiplier(format!(
                    "symbol identity fails on basis element {i} at spherical function {s}"
                )));
            }
        }
    }

    let second = symbol_from_probe(t, table, &mut rng)?;
    let scale = first.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if let Some(s) = (0..first.len()).find(|&s| (first[s] - second[s]).norm() > tol * scale) {
        return Err(Error::NotAMultiplier(format!(
            "two probes disagree on the symbol at spherical function {s}"
        )));
    }
    Ok(MultiplierSymbol { values: first })
}

fn symbol_from_probe(t: &MultiplierOperator, table: &FourierTable, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let d = table.dim();
    for _ in 0..SYMBOL_PROBES {
        let g = BiInvariantFunction::new(
            (0..d)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        );
        let tg = table.transform(&g);
        let scale = tg.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if tg.iter().any(|v| v.norm() <= 1e-8 * scale.max(1.0)) {
            continue;
        }
        let ttg = table.transform(&t.apply(&g));
        return Ok(ttg.iter().zip(&tg).map(|(a, b)| a / b).collect());
    }
    Err(Error::Degenerate(format!(
        "no probe with nowhere-vanishing transform found in {SYMBOL_PROBES} draws"
    )))
}

/// `max_{i,j} ‖Tδ_i ∗_ω T'δ_j - T'δ_i ∗_ω Tδ_j‖_∞`.
pub fn verify_commutation(algebra: &HeckeAlgebra, t: &MultiplierOperator, t2: &MultiplierOperator) -> f64 {
    let d = algebra.dim();
    let basis: Vec<BiInvariantFunction> = (0..d).map(|i| BiInvariantFunction::indicator(d, i)).collect();
    let t_img: Vec<_> = basis.iter().map(|b| t.apply(b)).collect();
    let t2_img: Vec<_> = basis.iter().map(|b| t2.apply(b)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let a = algebra.convolve(&t_img[i], &t2_img[j]);
            let b = algebra.convolve(&t2_img[i], &t_img[j]);
            worst = worst.max(a.max_abs_diff(&b));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::spherical_transform;
    use crate::function::Weight;
    use crate::group::{double_cosets, subgroup_closure, GroupTable, DEFAULT_ELEMENT_CAP};
    use crate::hecke::WeightedPair;
    use crate::spherical::{enumerate_spherical, EnumerationOptions};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(weights: [f64; 2]) -> (GroupTable, WeightedPair, HeckeAlgebra, FourierTable) {
        let g = GroupTable::symmetric(3, DEFAULT_ELEMENT_CAP).unwrap();
        let k = subgroup_closure(&g, &[g.index_of_permutation(&[1, 0, 2]).unwrap()]).unwrap();
        let dc = double_cosets(&g, &k);
        let pair = WeightedPair::new(&g, k, Weight::by_double_coset(&dc, &weights).unwrap()).unwrap();
        let a = HeckeAlgebra::new(&g, &pair).unwrap();
        let set = enumerate_spherical(&g, &a, &EnumerationOptions::default()).unwrap();
        let table = FourierTable::build(&g, &pair, &set);
        (g, pair, a, table)
    }

    #[test]
    fn kernel_multiplier_matrix() {
        let (_, _, a, _) = setup([1.0, 1.0]);
        let t = multiplier_from_kernel(&a, &BiInvariantFunction::indicator(2, 1));
        // δ₁∗δ₀ = 2δ₁, δ₁∗δ₁ = 4δ₀ + 2δ₁.
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(4.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
        assert!((t.matrix() - expected).norm() < 1e-12);
        assert!(is_multiplier(&a, &t, DEFAULT_TOLERANCE).holds());

        let unit = multiplier_from_kernel(&a, &a.unit());
        assert!((unit.matrix() - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-12);
        let zero = multiplier_from_kernel(&a, &BiInvariantFunction::zeros(2));
        assert_eq!(zero.matrix().norm(), 0.0);
    }

    #[test]
    fn transpose_of_kernel_multiplier_is_rejected() {
        let (_, _, a, table) = setup([1.0, 1.0]);
        let t = multiplier_from_kernel(&a, &BiInvariantFunction::indicator(2, 1)).transpose();
        assert!(!is_multiplier(&a, &t, DEFAULT_TOLERANCE).holds());
        assert!(matches!(
            extract_symbol(&t, &table, &SymbolOptions::default()),
            Err(Error::NotAMultiplier(_))
        ));
    }

    #[test]
    fn scalar_symbols() {
        let (_, _, a, table) = setup([1.0, 2.0]);
        let id = MultiplierOperator::identity(2);
        let b = extract_symbol(&id, &table, &SymbolOptions::default()).unwrap();
        assert!(b.max_abs_diff(&[c(1.0, 0.0); 2]) < 1e-12);
        let three = MultiplierOperator::scalar(2, c(3.0, 0.0));
        assert!(is_multiplier(&a, &three, DEFAULT_TOLERANCE).holds());
        let b = extract_symbol(&three, &table, &SymbolOptions::default()).unwrap();
        assert!(b.max_abs_diff(&[c(3.0, 0.0); 2]) < 1e-12);
    }

    #[test]
    fn kernel_symbol_is_kernel_transform() {
        let (g, pair, a, table) = setup([1.0, 2.0]);
        let h = BiInvariantFunction::new(vec![c(0.5, 1.0), c(-1.5, 0.25)]);
        let t = multiplier_from_kernel(&a, &h);
        let b = extract_symbol(&t, &table, &SymbolOptions::default()).unwrap();
        let set = enumerate_spherical(&g, &a, &EnumerationOptions::default()).unwrap();
        assert!(b.max_abs_diff(&spherical_transform(&g, &pair, &h, &set)) < 1e-12);
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["symbol"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn commutation_residuals() {
        let (_, _, a, _) = setup([1.0, 2.0]);
        let t = multiplier_from_kernel(&a, &BiInvariantFunction::new(vec![c(1.0, 0.0), c(0.5, -0.5)]));
        assert_eq!(verify_commutation(&a, &t, &t), 0.0);
        assert!(verify_commutation(&a, &t, &MultiplierOperator::identity(2)) < 1e-12);
    }

    #[test]
    fn rejects_non_square_matrix() {
        assert!(MultiplierOperator::from_matrix(DMatrix::zeros(2, 3)).is_err());
    }
}
