//! Dense 8x8 complex matrices over the three-qubit Hilbert space.
//!
//! Basis index of `|q1 q2 q3>` is `4*q1 + 2*q2 + q3`, so qubit 1 is the most
//! significant bit.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hilbert-space dimension of three qubits.
pub const DIM: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, PartialEq)]
pub struct Matrix8([[Complex64; DIM]; DIM]);

impl std::fmt::Debug for Matrix8 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix8 [")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Default for Matrix8 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Matrix8 {
    pub const fn zeros() -> Self {
        Self([[ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::from_diagonal(&[ONE; DIM])
    }

    pub fn from_rows(rows: [[Complex64; DIM]; DIM]) -> Self {
        Self(rows)
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for r in 0..DIM {
            for c in 0..DIM {
                m.0[r][c] = f(r, c);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64; DIM]) -> Self {
        let mut m = Self::zeros();
        for (i, &d) in diag.iter().enumerate() {
            m.0[i][i] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64; DIM]) -> Self {
        Self::from_diagonal(&diag.map(|d| Complex64::new(d, 0.0)))
    }

    pub fn rows(&self) -> &[[Complex64; DIM]; DIM] {
        &self.0
    }

    pub fn diagonal(&self) -> [Complex64; DIM] {
        std::array::from_fn(|i| self.0[i][i])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * k)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs entry difference, the "exact to tol" measure used throughout.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Hermitian part `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_defect();
        if deviation <= tol && self.is_finite() {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_defect();
        if deviation <= tol && self.is_finite() {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }
}

/// `||A - B||_F`.
pub fn operator_distance(a: &Matrix8, b: &Matrix8) -> f64 {
    (*a - *b).frobenius_norm()
}

impl Index<(usize, usize)> for Matrix8 {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Matrix8 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][c]
    }
}

impl Add for Matrix8 {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl AddAssign for Matrix8 {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += *b;
        }
    }
}

impl Sub for Matrix8 {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

impl SubAssign for Matrix8 {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= *b;
        }
    }
}

impl Neg for Matrix8 {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for Matrix8 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..DIM {
            for k in 0..DIM {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for c in 0..DIM {
                    out.0[r][c] += a * rhs.0[k][c];
                }
            }
        }
        out
    }
}

impl Mul<Complex64> for Matrix8 {
    type Output = Self;

    fn mul(self, k: Complex64) -> Self {
        self.scale(k)
    }
}

impl Mul<f64> for Matrix8 {
    type Output = Self;

    fn mul(self, k: f64) -> Self {
        self.scale_real(k)
    }
}

impl std::iter::Sum for Matrix8 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zeros(), |acc, m| acc + m)
    }
}

/// Eigendecomposition `A = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: [f64; DIM],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix8,
}

impl HermitianEigen {
    /// Cyclic complex Jacobi sweeps. Input must be Hermitian.
    pub fn new(a: &Matrix8) -> Result<Self> {
        a.ensure_hermitian(HERMITIAN_TOL)?;
        let mut a = a.hermitian_part();
        let mut v = Matrix8::identity();
        let scale = a.frobenius_norm();

        for _sweep in 0..64 {
            let off: f64 = (0..DIM)
                .flat_map(|r| (0..DIM).filter(move |&c| c != r).map(move |c| (r, c)))
                .map(|(r, c)| a.0[r][c].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
                break;
            }
            for p in 0..DIM - 1 {
                for q in p + 1..DIM {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: [usize; DIM] = std::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
        let values = order.map(|i| a.0[i][i].re);
        let vectors = Matrix8::from_fn(|r, c| v.0[r][order[c]]);
        Ok(Self { values, vectors })
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> Matrix8 {
        let d = self.values.map(f);
        let vd = Matrix8::from_fn(|r, c| self.vectors.0[r][c] * d[c]);
        vd * self.vectors.adjoint()
    }
}

/// Zero the `(p, q)` entry of `a` by a unitary plane rotation, accumulating it in `v`.
fn jacobi_rotate(a: &mut Matrix8, v: &mut Matrix8, p: usize, q: usize) {
    let apq = a.0[p][q];
    let mag = apq.norm();
    if mag <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let tau = (a.0[q][q].re - a.0[p][p].re) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for r in 0..DIM {
        let (x, y) = (a.0[r][p], a.0[r][q]);
        a.0[r][p] = x * g_pp + y * g_qp;
        a.0[r][q] = x * g_pq + y * g_qq;
        let (x, y) = (v.0[r][p], v.0[r][q]);
        v.0[r][p] = x * g_pp + y * g_qp;
        v.0[r][q] = x * g_pq + y * g_qq;
    }
    for c_ in 0..DIM {
        let (x, y) = (a.0[p][c_], a.0[q][c_]);
        a.0[p][c_] = g_pp.conj() * x + g_qp.conj() * y;
        a.0[q][c_] = g_pq.conj() * x + g_qq.conj() * y;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
}

/// Tolerance for accepting an input as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// `exp(-i A t)` for Hermitian `A`, via its eigendecomposition.
pub fn expm_hermitian(a: &Matrix8, t: f64) -> Result<Matrix8> {
    let eig = HermitianEigen::new(a)?;
    Ok(eig.map_spectrum(|lambda| Complex64::from_polar(1.0, -lambda * t)))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues_hermitian(a: &Matrix8) -> Result<[f64; DIM]> {
    HermitianEigen::new(a).map(|e| e.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_norm_is_sqrt_eight() {
        assert!((Matrix8::identity().frobenius_norm() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = expm_hermitian(&Matrix8::zeros(), 3.7).unwrap();
        assert!(u.max_abs_diff(&Matrix8::identity()) < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix8::zeros();
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            expm_hermitian(&m, 1.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_reconstructs_dense_hermitian() {
        let a = Matrix8::from_fn(|r, col| {
            let x = (r * 7 + col * 3) as f64 * 0.37;
            c(x.cos(), (x * 1.3).sin())
        })
        .hermitian_part();
        let eig = HermitianEigen::new(&a).unwrap();
        let back = eig.map_spectrum(|l| c(l, 0.0));
        assert!(back.max_abs_diff(&a) < 1e-13);
        assert!(eig.vectors.is_unitary(1e-13));
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn degenerate_spectrum_is_handled() {
        let a = Matrix8::from_real_diagonal(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 2.0, 2.0]);
        let eig = HermitianEigen::new(&a).unwrap();
        assert_eq!(eig.values, [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 2.0, 2.0]);
    }
}
