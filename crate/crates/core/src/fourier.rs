//! The weighted spherical Fourier transform
//! `𝓕^ω(f)(φ) = Σ_x (M_ω f)(x) (M_ω φ)(x⁻¹)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::function::{weighted_convolve, BiInvariantFunction};
use crate::group::GroupTable;
use crate::hecke::WeightedPair;
use crate::linalg::singular_values;
use crate::spherical::{character_value, SphericalSet};

/// Transform of `f` at every spherical function, in set order. Evaluated
/// as a sum over the whole group.
pub fn spherical_transform(
    group: &GroupTable,
    pair: &WeightedPair,
    f: &BiInvariantFunction,
    set: &SphericalSet,
) -> Vec<Complex64> {
    let fg = f.expand(pair.cosets());
    set.functions()
        .map(|phi| character_value(group, pair, &fg, &phi.expand(pair)))
        .collect()
}

/// `F[i][s] = 𝓕^ω(δ_i)(φ_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    matrix: DMatrix<Complex64>,
}

impl FourierTable {
    pub fn build(group: &GroupTable, pair: &WeightedPair, set: &SphericalSet) -> Self {
        let d = pair.cosets().len();
        let mut matrix = DMatrix::zeros(d, set.len());
        for i in 0..d {
            let row = spherical_transform(group, pair, &BiInvariantFunction::indicator(d, i), set);
            for (s, v) in row.into_iter().enumerate() {
                matrix[(i, s)] = v;
            }
        }
        FourierTable { matrix }
    }

    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Self {
        FourierTable { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Number of basis functions (rows).
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of spherical functions (columns).
    pub fn spectrum_len(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn entry(&self, i: usize, s: usize) -> Complex64 {
        self.matrix[(i, s)]
    }

    /// Transform by linearity: `𝓕^ω(f)(φ_s) = Σ_i f_i F[i][s]`.
    pub fn transform(&self, f: &BiInvariantFunction) -> Vec<Complex64> {
        assert_eq!(f.len(), self.dim(), "coset count mismatch");
        (0..self.spectrum_len())
            .map(|s| (0..self.dim()).map(|i| f.at(i) * self.matrix[(i, s)]).sum())
            .collect()
    }

    pub fn rows_serializable(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| (0..self.spectrum_len()).map(|s| [self.matrix[(i, s)].re, self.matrix[(i, s)].im]).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Injectivity {
    pub rank: usize,
    /// Largest over smallest singular value; infinite when singular.
    pub condition: f64,
}

/// Numerical rank (singular values above `1e-9` of the largest) and
/// condition estimate of the table.
pub fn injectivity_check(table: &FourierTable) -> Injectivity {
    let s = singular_values(table.matrix());
    let Some(&largest) = s.first() else {
        return Injectivity { rank: 0, condition: f64::INFINITY };
    };
    let rank = s.iter().filter(|&&v| v > 1e-9 * largest).count();
    let smallest = *s.last().unwrap();
    let condition = if smallest > 0.0 && s.len() == table.dim() { largest / smallest } else { f64::INFINITY };
    Injectivity { rank, condition }
}

/// `max_s |𝓕^ω(f ∗_ω g)(φ_s) - 𝓕^ω(f)(φ_s) 𝓕^ω(g)(φ_s)|`, with the
/// convolution evaluated on the whole group.
pub fn verify_convolution_theorem(
    group: &GroupTable,
    pair: &WeightedPair,
    set: &SphericalSet,
    f: &BiInvariantFunction,
    g: &BiInvariantFunction,
) -> f64 {
    let fg = weighted_convolve(group, &f.expand(pair.cosets()), &g.expand(pair.cosets()), pair.weight());
    let product = BiInvariantFunction::new(
        (0..pair.cosets().len()).map(|i| fg.at(pair.cosets().representative(i))).collect(),
    );
    let lhs = spherical_transform(group, pair, &product, set);
    let tf = spherical_transform(group, pair, f, set);
    let tg = spherical_transform(group, pair, g, set);
    lhs.iter()
        .zip(tf.iter().zip(&tg))
        .map(|(l, (a, b))| (l - a * b).norm())
        .fold(0.0, f64::max)
}
