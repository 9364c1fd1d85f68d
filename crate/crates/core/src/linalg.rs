//! Small dense linear algebra: complex operators up to 16×16 and real 3×3
//! correlation matrices.
//!
//! Everything here is sized for three-qubit problems, so the routines favour
//! accuracy over asymptotic speed: cyclic Jacobi for symmetric eigenproblems
//! and one-sided Jacobi for the 3×3 SVD (singular values come out as column
//! norms, which keeps tiny singular values accurate to machine precision).

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

/// Real 3×3 matrix, row-major.
pub type Mat3 = [[f64; 3]; 3];

/// Real 3-vector.
pub type Vec3 = [f64; 3];

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match dims");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Kronecker product `self ⊗ other`; `self` supplies the most significant index.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C_ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dims(), other.dims());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |m - m†| over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// The n×n Hermitian `H = A + iB` is embedded as the real symmetric
    /// `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every value
    /// doubled. Only the Hermitian part of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square());
        let n = self.rows;
        let mut sym = vec![0.0; 4 * n * n];
        let dim = 2 * n;
        for i in 0..n {
            for j in 0..n {
                let h = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                sym[i * dim + j] = h.re;
                sym[(i + n) * dim + (j + n)] = h.re;
                sym[i * dim + (j + n)] = -h.im;
                sym[(i + n) * dim + j] = h.im;
            }
        }
        let (mut vals, _) = symmetric_eigen(&sym, dim);
        vals.sort_by(f64::total_cmp);
        vals.into_iter().step_by(2).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut m = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    m.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        m
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dims(), rhs.dims());
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dims(), rhs.dims());
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric `n×n` matrix given
/// row-major. Returns `(eigenvalues, eigenvectors)` with eigenvector `k` stored
/// in column `k` of the row-major `n×n` output. Eigenvalues are unsorted.
pub fn symmetric_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off.sqrt() <= f64::EPSILON * scale * 1e-3 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[i * n + i]).collect(), v)
}

pub fn mat3_zero() -> Mat3 {
    [[0.0; 3]; 3]
}

pub fn mat3_identity() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub fn mat3_diag(d: Vec3) -> Mat3 {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = mat3_zero();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn mat3_transpose(a: &Mat3) -> Mat3 {
    let mut m = mat3_zero();
    for i in 0..3 {
        for j in 0..3 {
            m[j][i] = a[i][j];
        }
    }
    m
}

pub fn mat3_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += b[i][j];
        }
    }
    m
}

pub fn mat3_sub(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] -= b[i][j];
        }
    }
    m
}

pub fn mat3_scale(a: &Mat3, s: f64) -> Mat3 {
    a.map(|row| row.map(|x| x * s))
}

pub fn mat3_trace(a: &Mat3) -> f64 {
    a[0][0] + a[1][1] + a[2][2]
}

pub fn mat3_det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn mat3_apply(a: &Mat3, v: &Vec3) -> Vec3 {
    [0, 1, 2].map(|i| (0..3).map(|k| a[i][k] * v[k]).sum())
}

pub fn mat3_max_abs(a: &Mat3) -> f64 {
    a.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn mat3_max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    mat3_max_abs(&mat3_sub(a, b))
}

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// Singular value decomposition `M = U · diag(sigma) · Vᵀ` of a real 3×3 matrix.
///
/// `u` and `v` are orthogonal (either determinant); `sigma` is non-negative and
/// sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd3 {
    pub u: Mat3,
    pub sigma: Vec3,
    pub v: Mat3,
}

impl Svd3 {
    pub fn reconstruct(&self) -> Mat3 {
        mat3_mul(
            &mat3_mul(&self.u, &mat3_diag(self.sigma)),
            &mat3_transpose(&self.v),
        )
    }

    /// Sign of `det(M)` as seen through the factors, in {−1, 0, +1}.
    pub fn det_sign(&self) -> f64 {
        if self.sigma[2] == 0.0 {
            return 0.0;
        }
        (mat3_det(&self.u) * mat3_det(&self.v)).signum()
    }
}

/// One-sided (Hestenes) Jacobi SVD of a real 3×3 matrix.
pub fn svd3(m: &Mat3) -> Svd3 {
    // Columns of `w` are rotated until mutually orthogonal; w = M·V.
    let mut w = *m;
    let mut v = mat3_identity();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let alpha: f64 = (0..3).map(|k| w[k][p] * w[k][p]).sum();
                let beta: f64 = (0..3).map(|k| w[k][q] * w[k][q]).sum();
                let gamma: f64 = (0..3).map(|k| w[k][p] * w[k][q]).sum();
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..3 {
                    let wp = w[k][p];
                    let wq = w[k][q];
                    w[k][p] = c * wp - s * wq;
                    w[k][q] = s * wp + c * wq;
                    let vp = v[k][p];
                    let vq = v[k][q];
                    v[k][p] = c * vp - s * vq;
                    v[k][q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec3 = [0, 1, 2].map(|j| (0..3).map(|k| w[k][j] * w[k][j]).sum::<f64>().sqrt());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let mut sigma = [0.0; 3];
    let mut u_cols: [Option<Vec3>; 3] = [None; 3];
    let mut v_sorted = mat3_zero();
    let scale = norms[order[0]];
    for (dst, &src) in order.iter().enumerate() {
        sigma[dst] = norms[src];
        for k in 0..3 {
            v_sorted[k][dst] = v[k][src];
        }
        if norms[src] > scale * 1e-13 && norms[src] > 0.0 {
            u_cols[dst] = Some([0, 1, 2].map(|k| w[k][src] / norms[src]));
        }
    }
    let u_cols = complete_orthonormal(u_cols);
    let mut u = mat3_zero();
    for (j, col) in u_cols.iter().enumerate() {
        for k in 0..3 {
            u[k][j] = col[k];
        }
    }
    Svd3 {
        u,
        sigma,
        v: v_sorted,
    }
}

/// Fills missing columns (those whose singular value vanished) so that the
/// three columns form an orthonormal basis. Known columns are leading.
fn complete_orthonormal(cols: [Option<Vec3>; 3]) -> [Vec3; 3] {
    match cols {
        [Some(a), Some(b), Some(c)] => [a, b, c],
        [Some(a), Some(b), None] => {
            let c = cross3(&a, &b);
            let n = norm3(&c);
            [a, b, c.map(|x| x / n)]
        }
        [Some(a), None, None] => {
            let seed = if a[0].abs() < 0.9 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            let b = cross3(&a, &seed);
            let nb = norm3(&b);
            let b = b.map(|x| x / nb);
            let c = cross3(&a, &b);
            [a, b, c]
        }
        _ => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    }
}

/// Trace norm ‖M‖₁ = Tr√(MᵀM), the sum of singular values.
pub fn trace_norm(m: &Mat3) -> f64 {
    let s = svd3(m).sigma;
    s[0] + s[1] + s[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng_mat(seed: u64) -> Mat3 {
        // LCG is enough for a handful of deterministic fixtures.
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        [[next(), next(), next()], [next(), next(), next()], [next(), next(), next()]]
    }

    #[test]
    fn svd_reconstructs_and_is_orthogonal() {
        for seed in 0..50 {
            let m = rng_mat(seed);
            let svd = svd3(&m);
            assert!(mat3_max_abs_diff(&svd.reconstruct(), &m) < 1e-13);
            let utu = mat3_mul(&mat3_transpose(&svd.u), &svd.u);
            let vtv = mat3_mul(&mat3_transpose(&svd.v), &svd.v);
            assert!(mat3_max_abs_diff(&utu, &mat3_identity()) < 1e-13);
            assert!(mat3_max_abs_diff(&vtv, &mat3_identity()) < 1e-13);
            assert!(svd.sigma[0] >= svd.sigma[1] && svd.sigma[1] >= svd.sigma[2]);
            assert!((svd.det_sign() - mat3_det(&m).signum()).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_rank_deficient() {
        let m = mat3_diag([1.0, -1.0, 0.0]);
        let svd = svd3(&m);
        assert_eq!(svd.sigma[2], 0.0);
        assert!(mat3_max_abs_diff(&svd.reconstruct(), &m) < 1e-15);
        assert!((mat3_det(&svd.u).abs() - 1.0).abs() < 1e-14);

        let rank1 = [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [-1.0, -2.0, -3.0]];
        let svd = svd3(&rank1);
        assert!(svd.sigma[1] < 1e-14);
        assert!(mat3_max_abs_diff(&svd.reconstruct(), &rank1) < 1e-13);

        let zero = svd3(&mat3_zero());
        assert_eq!(zero.sigma, [0.0; 3]);
    }

    #[test]
    fn trace_norm_known_values() {
        assert_eq!(trace_norm(&mat3_identity()), 3.0);
        assert!((trace_norm(&mat3_diag([2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0])) - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(trace_norm(&mat3_zero()), 0.0);
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_y() {
        let y = CMatrix::from_rows(&[
            vec![C_ZERO, Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), C_ZERO],
        ]);
        let ev = y.hermitian_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_eigen_reconstructs() {
        let a = [4.0, 1.0, -2.0, 1.0, 2.0, 0.5, -2.0, 0.5, -3.0];
        let (vals, vecs) = symmetric_eigen(&a, 3);
        for k in 0..3 {
            let col = [vecs[k], vecs[3 + k], vecs[6 + k]];
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i * 3 + j] * col[j]).sum();
                assert!((av - vals[k] * col[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kron_orders_most_significant_first() {
        let mut a = CMatrix::zeros(2, 2);
        a[(1, 1)] = C_ONE;
        let b = CMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k[(2, 2)], C_ONE);
        assert_eq!(k[(3, 3)], C_ONE);
        assert_eq!(k[(0, 0)], C_ZERO);
    }
}
