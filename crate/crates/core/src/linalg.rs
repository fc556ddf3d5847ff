//! Small dense complex matrices and the comparisons used throughout the crate.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{iθ}`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn diag2(a: C64, b: C64) -> Mat2 {
    Mat2::new(a, ZERO, ZERO, b)
}

/// Kronecker product `a ⊗ b` with `a` acting on the first (most significant) qubit.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Largest singular value.
pub fn operator_norm<R, C, S>(m: &nalgebra::Matrix<C64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, C>,
{
    let dense = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)]);
    dense.singular_values().max()
}

/// Max-abs entry of `U†U − I`.
pub fn unitarity_defect<R, S>(m: &nalgebra::Matrix<C64, R, R, S>) -> f64
where
    R: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, R>,
{
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += m[(k, i)].conj() * m[(k, j)];
            }
            if i == j {
                acc -= ONE;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

pub fn is_unitary<R, S>(m: &nalgebra::Matrix<C64, R, R, S>, tol: f64) -> bool
where
    R: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, R>,
{
    unitarity_defect(m) < tol
}

/// Max-abs entrywise difference.
pub fn max_abs_diff<R, C, S1, S2>(
    a: &nalgebra::Matrix<C64, R, C, S1>,
    b: &nalgebra::Matrix<C64, R, C, S2>,
) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S1: nalgebra::RawStorage<C64, R, C>,
    S2: nalgebra::RawStorage<C64, R, C>,
{
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Projective fidelity `|Tr(U†V)| / d`.
pub fn trace_fidelity<R, S1, S2>(
    u: &nalgebra::Matrix<C64, R, R, S1>,
    v: &nalgebra::Matrix<C64, R, R, S2>,
) -> f64
where
    R: nalgebra::Dim,
    S1: nalgebra::RawStorage<C64, R, R>,
    S2: nalgebra::RawStorage<C64, R, R>,
{
    let d = u.nrows();
    let mut tr = ZERO;
    for r in 0..d {
        for c in 0..d {
            tr += u[(r, c)].conj() * v[(r, c)];
        }
    }
    tr.norm() / d as f64
}

/// Serializes a complex matrix as rows of `[re, im]` pairs.
pub fn to_grid<R, C, S>(m: &nalgebra::Matrix<C64, R, C, S>) -> Vec<Vec<[f64; 2]>>
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, C>,
{
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Pauli and Clifford reference matrices on one qubit.
pub mod gates {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn identity() -> Mat2 {
        Mat2::identity()
    }

    pub fn x() -> Mat2 {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn z() -> Mat2 {
        diag2(ONE, -ONE)
    }

    pub fn hadamard() -> Mat2 {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Mat2::new(h, h, h, -h)
    }

    pub fn cz() -> Mat4 {
        Mat4::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, ONE, -ONE))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_places_first_factor_on_high_bit() {
        let m = kron(&gates::x(), &gates::identity());
        // |00> -> |10>
        assert_eq!(m[(2, 0)], ONE);
        assert_eq!(m[(0, 0)], ZERO);
    }

    #[test]
    fn operator_norm_of_unitary_is_one() {
        let h = kron(&gates::hadamard(), &gates::z());
        assert!((operator_norm(&h) - 1.0).abs() < 1e-12);
        assert!(is_unitary(&h, 1e-12));
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let u = kron(&gates::hadamard(), &gates::x());
        let v = u * cis(0.7);
        assert!((trace_fidelity(&u, &v) - 1.0).abs() < 1e-12);
        let zi = kron(&gates::z(), &gates::identity());
        let xi = kron(&gates::x(), &gates::identity());
        assert!(trace_fidelity(&zi, &xi).abs() < 1e-15);
    }
}
