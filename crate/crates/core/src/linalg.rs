//! Small dense eigenvalue routines and deterministic reductions.
//!
//! Everything here operates on tiny matrices (3×3 to ~64×64) or on flat
//! slices, so there is no general linear-algebra dependency.

use alloc::vec;
use alloc::vec::Vec;
use libm::{acos, cos, fabs, sqrt};
use num_complex::Complex64;

/// Below this normalized cubic discriminant the trigonometric 3×3 solver
/// loses accuracy and the Jacobi sweep takes over.
const SYM3_DEGENERATE: f64 = 1e-6;

/// Block length used by [`chunked_dot`]; parallel executors must use the same
/// blocking to reproduce serial results bit for bit.
pub const DOT_CHUNK: usize = 1 << 14;

/// Eigenvalues of a real symmetric 3×3 matrix, sorted descending.
///
/// Uses the trigonometric solution of the characteristic cubic. When two
/// eigenvalues nearly coincide the arccos is ill-conditioned, so the matrix
/// is handed to [`jacobi_eigen`] instead.
pub fn sym3_eigenvalues(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let d0 = a[0][0] - q;
    let d1 = a[1][1] - q;
    let d2 = a[2][2] - q;
    let p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    let scale = fabs(a[0][0]) + fabs(a[1][1]) + fabs(a[2][2]) + sqrt(p1);
    if p2 <= (1e-30 * scale) * (1e-30 * scale) || p2 == 0.0 {
        return [q, q, q];
    }
    let p = sqrt(p2 / 6.0);
    let b = [
        [d0 / p, a[0][1] / p, a[0][2] / p],
        [a[1][0] / p, d1 / p, a[1][2] / p],
        [a[2][0] / p, a[2][1] / p, d2 / p],
    ];
    let r = 0.5 * det3(&b);
    // Normalized discriminant of β³ − 3β − 2r.
    if 1.0 - r * r < SYM3_DEGENERATE {
        let mut m = [
            a[0][0], a[0][1], a[0][2], a[1][0], a[1][1], a[1][2], a[2][0], a[2][1], a[2][2],
        ];
        let mut ev = jacobi_eigen(3, &mut m, None);
        ev.sort_by(|x, y| y.total_cmp(x));
        return [ev[0], ev[1], ev[2]];
    }
    let phi = acos(r.clamp(-1.0, 1.0)) / 3.0;
    let e1 = q + 2.0 * p * cos(phi);
    let e3 = q + 2.0 * p * cos(phi + 2.0 * core::f64::consts::FRAC_PI_3);
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric `n×n` matrix
/// stored row-major in `a` (destroyed on return).
///
/// Returns the eigenvalues in diagonal order (unsorted). If `vectors` is
/// given it receives the eigenvectors as columns of a row-major `n×n` matrix.
pub fn jacobi_eigen(n: usize, a: &mut [f64], mut vectors: Option<&mut [f64]>) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    if let Some(v) = vectors.as_deref_mut() {
        assert_eq!(v.len(), n * n);
        v.fill(0.0);
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            diag += a[i * n + i] * a[i * n + i];
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off <= 1e-34 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Real symmetric 8×8 embedding `[[Re, −Im], [Im, Re]]` of a 4×4 Hermitian
/// matrix. Each eigenvalue of the Hermitian matrix appears twice.
fn embed4(h: &[[Complex64; 4]; 4]) -> [f64; 64] {
    let mut m = [0.0; 64];
    for r in 0..4 {
        for c in 0..4 {
            let z = h[r][c];
            m[r * 8 + c] = z.re;
            m[(r + 4) * 8 + c + 4] = z.re;
            m[(r + 4) * 8 + c] = z.im;
            m[r * 8 + c + 4] = -z.im;
        }
    }
    m
}

/// Eigenvalues of a 4×4 Hermitian matrix, sorted descending.
pub fn hermitian4_eigenvalues(h: &[[Complex64; 4]; 4]) -> [f64; 4] {
    let mut m = embed4(h);
    let mut ev = jacobi_eigen(8, &mut m, None);
    ev.sort_by(|x, y| y.total_cmp(x));
    [ev[0], ev[2], ev[4], ev[6]]
}

/// Principal square root of a positive semidefinite 4×4 Hermitian matrix.
/// Eigenvalues below zero (rounding residue) are clamped.
pub fn hermitian4_sqrt(h: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let mut m = embed4(h);
    let mut w = vec![0.0; 64];
    let ev = jacobi_eigen(8, &mut m, Some(&mut w));
    let roots: Vec<f64> = ev.iter().map(|&x| sqrt(x.max(0.0))).collect();
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut re = 0.0;
            let mut im = 0.0;
            for k in 0..8 {
                re += w[r * 8 + k] * roots[k] * w[c * 8 + k];
                im += w[(r + 4) * 8 + k] * roots[k] * w[c * 8 + k];
            }
            out[r][c] = Complex64::new(re, im);
        }
    }
    out
}

/// 4×4 complex matrix product.
pub fn matmul4(a: &[[Complex64; 4]; 4], b: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                acc += a[r][k] * b[k][c];
            }
            out[r][c] = acc;
        }
    }
    out
}

/// Dot product accumulated in fixed blocks of [`DOT_CHUNK`] entries, block
/// sums added left to right.
pub fn chunked_dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.chunks(DOT_CHUNK)
        .zip(b.chunks(DOT_CHUNK))
        .map(|(x, y)| block_dot(x, y))
        .fold(0.0, |acc, s| acc + s)
}

/// Plain sequential dot product of one block.
#[inline]
pub fn block_dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

/// Eigen-decomposition of a symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`. Returns eigenvalues ascending and the
/// matching eigenvectors (column-major: `vecs[k]` is the k-th vector).
pub fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = alpha.len();
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        a[i * m + i] = alpha[i];
        if i + 1 < m {
            a[i * m + i + 1] = beta[i];
            a[(i + 1) * m + i] = beta[i];
        }
    }
    let mut w = vec![0.0; m * m];
    let ev = jacobi_eigen(m, &mut a, Some(&mut w));
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| ev[x].total_cmp(&ev[y]));
    let values = order.iter().map(|&k| ev[k]).collect();
    let vecs = order
        .iter()
        .map(|&k| (0..m).map(|i| w[i * m + k]).collect())
        .collect();
    (values, vecs)
}
