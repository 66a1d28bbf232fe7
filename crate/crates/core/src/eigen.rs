//! Cyclic Jacobi eigen-decomposition for small dense symmetric matrices.

use alloc::vec::Vec;

use crate::math;

/// Relative threshold below which an eigenvalue counts as zero in [`numerical_rank`].
pub const RANK_REL_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, eigenvalues in decreasing order.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub n: usize,
    pub values: Vec<f64>,
    /// Column `k` (entries `vectors[i * n + k]`) is the eigenvector of `values[k]`.
    pub vectors: Vec<f64>,
}

/// Decomposes the row-major symmetric `n × n` matrix `a` by cyclic Jacobi rotations.
pub fn symmetric_eigen(a: &[f64], n: usize) -> SymmetricEigen {
    assert_eq!(a.len(), n * n, "matrix has wrong size");
    let mut a = a.to_vec();
    let mut v = alloc::vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>();
    let target = frob * 1e-32;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[p * n + q] * a[p * n + q])
            .sum();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (math::abs(theta) + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                rotate(&mut a, n, p, q, c, s);
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = alloc::vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new] = v[k * n + old];
        }
    }
    SymmetricEigen { n, values, vectors }
}

// A <- J^T A J for the rotation in the (p, q) plane.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
}

/// Count of eigenvalues above `rel_tol * max_eig`.
pub fn numerical_rank(values: &[f64], rel_tol: f64) -> usize {
    let max = values.iter().copied().fold(0.0, math::max);
    if max <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&l| l > rel_tol * max).count()
}

impl SymmetricEigen {
    /// Minimum-norm least-squares solution of `A x = b` using the eigenpairs above
    /// `rel_tol * max_eig`.
    pub fn pseudo_solve(&self, b: &[f64], rel_tol: f64) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let max = self.values.iter().copied().fold(0.0, math::max);
        let mut x = alloc::vec![0.0; n];
        for k in 0..n {
            let l = self.values[k];
            if l <= rel_tol * max {
                continue;
            }
            let proj: f64 = (0..n).map(|i| self.vectors[i * n + k] * b[i]).sum();
            for i in 0..n {
                x[i] += self.vectors[i * n + k] * proj / l;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_small_matrix() {
        // eigenvalues 3, 1 for [[2,1],[1,2]]
        let e = symmetric_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_symmetric() {
        let n = 7;
        let mut a = alloc::vec![0.0; n * n];
        let mut seed = 12345u64;
        for i in 0..n {
            for j in i..n {
                seed = seed
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let x = (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let e = symmetric_eigen(&a, n);
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n)
                    .map(|k| e.vectors[i * n + k] * e.values[k] * e.vectors[j * n + k])
                    .sum();
                assert!((r - a[i * n + j]).abs() < 1e-12);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_of_low_rank_gram() {
        // Gram of 5 vectors in R^3
        let pts = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.3, 0.2, 1.0],
            [1.0, -1.0, 2.0],
        ];
        let n = pts.len();
        let mut g = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = (0..3).map(|k| pts[i][k] * pts[j][k]).sum();
            }
        }
        let e = symmetric_eigen(&g, n);
        assert_eq!(numerical_rank(&e.values, RANK_REL_TOL), 3);
        assert_eq!(numerical_rank(&[0.0, 0.0], RANK_REL_TOL), 0);
    }

    #[test]
    fn pseudo_solve_projects() {
        // singular [[1,1],[1,1]], b = (2,0): least squares x = (0.5, 0.5)
        let e = symmetric_eigen(&[1.0, 1.0, 1.0, 1.0], 2);
        let x = e.pseudo_solve(&[2.0, 0.0], 1e-12);
        assert!((x[0] - 0.5).abs() < 1e-14 && (x[1] - 0.5).abs() < 1e-14);
    }
}
