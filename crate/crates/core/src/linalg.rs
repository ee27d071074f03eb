//! Dense complex linear algebra in `f64`, backed by nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex;

use crate::scalar::Real;

type Cf = Complex<f64>;

fn to_matrix<T: Real>(rows: usize, cols: usize, data: &[Complex<T>]) -> DMatrix<Cf> {
    assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
    DMatrix::from_row_iterator(rows, cols, data.iter().map(|z| Cf::new(z.re.as_f64(), z.im.as_f64())))
}

/// Eigenvalues (ascending) of the Hermitian part `(A + A^*) / 2` of a square row-major matrix.
pub fn hermitian_eigenvalues<T: Real>(n: usize, data: &[Complex<T>]) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let a = to_matrix(n, n, data);
    let h = (&a + a.adjoint()) * Cf::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Singular values (descending) of a row-major matrix.
pub fn singular_values<T: Real>(rows: usize, cols: usize, data: &[Complex<T>]) -> Vec<f64> {
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let a = to_matrix(rows, cols, data);
    let mut sv: Vec<f64> = SVD::new(a, false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank with the usual `max(rows, cols) * eps * sigma_max` cutoff.
pub fn numerical_rank<T: Real>(rows: usize, cols: usize, data: &[Complex<T>]) -> usize {
    let sv = singular_values(rows, cols, data);
    let Some(&top) = sv.first() else { return 0 };
    let cutoff = rows.max(cols) as f64 * f64::EPSILON * top;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// 2-norm condition number `sigma_max / sigma_min` of a square matrix.
pub fn condition_number<T: Real>(n: usize, data: &[Complex<T>]) -> f64 {
    let sv = singular_values(n, n, data);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Solves the square system `A x = b` by LU with partial pivoting.
pub fn solve<T: Real>(n: usize, data: &[Complex<T>], rhs: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let a = to_matrix(n, n, data);
    let b = DVector::from_iterator(n, rhs.iter().map(|z| Cf::new(z.re.as_f64(), z.im.as_f64())));
    let x = a.lu().solve(&b)?;
    Some(x.iter().map(|z| Complex::new(T::lit(z.re), T::lit(z.im))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = [Cf::new(2.0, 0.0), Cf::new(0.0, 1.0), Cf::new(0.0, -1.0), Cf::new(2.0, 0.0)];
        let ev = hermitian_eigenvalues(2, &m);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_and_condition() {
        let m = [Cf::new(1.0, 0.0), Cf::new(2.0, 0.0), Cf::new(2.0, 0.0), Cf::new(4.0, 0.0)];
        assert_eq!(numerical_rank(2, 2, &m), 1);
        assert!(condition_number(2, &m) > 1e12);
        let id = [Cf::new(1.0, 0.0), Cf::new(0.0, 0.0), Cf::new(0.0, 0.0), Cf::new(1.0, 0.0)];
        assert!((condition_number(2, &id) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_small_system() {
        let m = [Cf::new(1.0, 0.0), Cf::new(1.0, 0.0), Cf::new(1.0, 0.0), Cf::new(-1.0, 0.0)];
        let x = solve(2, &m, &[Cf::new(3.0, 0.0), Cf::new(1.0, 0.0)]).unwrap();
        assert!((x[0] - Cf::new(2.0, 0.0)).norm() < 1e-14);
        assert!((x[1] - Cf::new(1.0, 0.0)).norm() < 1e-14);
    }
}
