//! Small dense linear algebra for 2x2 and 4x4 spin operators.

use num_complex::Complex64;

/// 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2c(pub [[Complex64; 2]; 2]);

impl Mat2c {
    pub fn zero() -> Self {
        Mat2c([[Complex64::ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2c([
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ])
    }

    pub fn pauli_x() -> Self {
        Mat2c([
            [Complex64::ZERO, Complex64::ONE],
            [Complex64::ONE, Complex64::ZERO],
        ])
    }

    pub fn pauli_y() -> Self {
        Mat2c([
            [Complex64::ZERO, Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), Complex64::ZERO],
        ])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2c([
            [m[0][0].into(), m[0][1].into()],
            [m[1][0].into(), m[1][1].into()],
        ])
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Mat2c::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Mat2c([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn mul_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Largest entrywise absolute deviation from another matrix.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).norm());
            }
        }
        d
    }

    /// Largest absolute imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        let mut d = 0.0f64;
        for row in &self.0 {
            for e in row {
                d = d.max(e.im.abs());
            }
        }
        d
    }

    pub fn real_part(&self) -> [[f64; 2]; 2] {
        [
            [self.0[0][0].re, self.0[0][1].re],
            [self.0[1][0].re, self.0[1][1].re],
        ]
    }
}

/// Eigenvalues of a real symmetric 2x2 [[a, b], [b, c]], descending.
pub fn sym2_eigenvalues(a: f64, b: f64, c: f64) -> [f64; 2] {
    let mean = 0.5 * (a + c);
    let r = f64::hypot(0.5 * (a - c), b);
    [mean + r, mean - r]
}

/// Eigenvalues of a real symmetric NxN matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below 1e-13, which is
/// plenty for entropy differences asserted at 1e-10.
pub fn jacobi_eigenvalues<const N: usize>(mut m: [[f64; N]; N]) -> [f64; N] {
    const OFF_TOL: f64 = 1e-13;
    const MAX_SWEEPS: usize = 64;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..N {
            for j in (i + 1)..N {
                off += 2.0 * m[i][j] * m[i][j];
            }
        }
        if off.sqrt() <= OFF_TOL {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = m[p][q];
                if apq.abs() < OFF_TOL / (N * N) as f64 {
                    continue;
                }
                let phi = 0.5 * (m[q][q] - m[p][p]) / apq;
                let t = phi.signum() / (phi.abs() + (phi * phi + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k][p];
                    let akq = m[k][q];
                    m[k][p] = c * akp - s * akq;
                    m[p][k] = m[k][p];
                    m[k][q] = s * akp + c * akq;
                    m[q][k] = m[k][q];
                }
                m[p][p] -= t * apq;
                m[q][q] += t * apq;
                m[p][q] = 0.0;
                m[q][p] = 0.0;
            }
        }
    }

    let mut eigs = [0.0; N];
    for i in 0..N {
        eigs[i] = m[i][i];
    }
    eigs.sort_by(|x, y| y.total_cmp(x));
    eigs
}

/// Kronecker product of two real 2x2 matrices.
pub fn kron2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym2_matches_trace_and_det() {
        let (a, b, c) = (0.7, 0.21, 0.3);
        let [hi, lo] = sym2_eigenvalues(a, b, c);
        assert!((hi + lo - (a + c)).abs() < 1e-14);
        assert!((hi * lo - (a * c - b * b)).abs() < 1e-14);
        assert!(hi >= lo);
    }

    #[test]
    fn jacobi_diagonal_is_identity_map() {
        let eigs = jacobi_eigenvalues([[3.0, 0.0], [0.0, -1.0]]);
        assert_eq!(eigs, [3.0, -1.0]);
    }

    #[test]
    fn jacobi_agrees_with_closed_form_2x2() {
        let m = [[0.62, -0.17], [-0.17, 0.38]];
        let jac = jacobi_eigenvalues(m);
        let closed = sym2_eigenvalues(m[0][0], m[0][1], m[1][1]);
        assert!((jac[0] - closed[0]).abs() < 1e-13);
        assert!((jac[1] - closed[1]).abs() < 1e-13);
    }

    #[test]
    fn jacobi_4x4_known_spectrum() {
        // kron of diag(0.9, 0.1) with a rotated projector: spectrum is the products.
        let th = 0.4f64;
        let proj = [
            [th.cos() * th.cos(), th.cos() * th.sin()],
            [th.cos() * th.sin(), th.sin() * th.sin()],
        ];
        let m = kron2(&[[0.9, 0.0], [0.0, 0.1]], &proj);
        let eigs = jacobi_eigenvalues(m);
        let mut expect: [f64; 4] = [0.9, 0.1, 0.0, 0.0];
        expect.sort_by(|x, y| y.total_cmp(x));
        for (e, x) in eigs.iter().zip(expect.iter()) {
            assert!((e - x).abs() < 1e-13, "eigs {eigs:?}");
        }
    }

    #[test]
    fn pauli_sandwich_keeps_reality() {
        let rho = Mat2c::from_real([[0.7, 0.2], [0.2, 0.3]]);
        let sy = Mat2c::pauli_y();
        let out = sy.mul(&rho).mul(&sy);
        assert!(out.max_imag() < 1e-15);
        let r = out.real_part();
        assert!((r[0][0] - 0.3).abs() < 1e-15);
        assert!((r[0][1] + 0.2).abs() < 1e-15);
    }
}
