use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues and unit eigenvectors (as columns) of a general complex matrix.
///
/// Uses the complex Schur form `A = Q T Q*` and back-substitution on `T`, so
/// the eigenvectors are only reliable when the eigenvalues are distinct.
/// Callers check separation with [`min_separation`].
pub(crate) fn eigen_decompose(a: DMatrix<Complex64>) -> Option<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    let (q, t) = Schur::try_new(a, SCHUR_EPS, SCHUR_MAX_ITER)?.unpack();
    let lambdas: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * y[j];
            }
            let denom = t[(i, i)] - lambdas[k];
            if denom.norm() == 0.0 {
                return None;
            }
            y[i] = -acc / denom;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (r, vr) in v.iter_mut().enumerate() {
            for (j, yj) in y.iter().enumerate().take(k + 1) {
                *vr += q[(r, j)] * yj;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (r, vr) in v.into_iter().enumerate() {
            vectors[(r, k)] = vr / norm;
        }
    }
    Some((lambdas, vectors))
}

pub(crate) fn min_separation(values: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (a, x) in values.iter().enumerate() {
        for y in &values[a + 1..] {
            best = best.min((x - y).norm());
        }
    }
    best
}

pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
