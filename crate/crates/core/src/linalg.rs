//! Small dense linear-algebra helpers.
//!
//! Vectors are plain `Vec<f64>` (or `Vec<T>` for the generic kernels) and
//! matrices are vectors of rows. Problem sizes in this crate are tiny, so
//! clarity wins over blocking or SIMD tricks.

use crate::scalar::Scalar;

/// Euclidean inner product; panics on length mismatch in debug builds.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `a + t * b`.
pub fn axpy(a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * y).collect()
}

/// `t * a`.
pub fn scale(a: &[f64], t: f64) -> Vec<f64> {
    a.iter().map(|x| t * x).collect()
}

/// `a - b`.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + b`.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Kronecker product of two vectors, first factor slowest.
pub fn kron(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Maximum absolute entry.
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Sum of absolute entries.
pub fn norm_1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// Euclidean norm.
pub fn norm_2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The `i`-th standard basis vector of `R^n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// Matrix–vector product for a row-major matrix.
pub fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, x)).collect()
}

/// Rank of a set of row vectors by Gaussian elimination with partial pivoting.
///
/// For `f64` a pivot counts as nonzero when it exceeds `rel_tol` times the
/// largest entry of the input.
pub fn rank<T: Scalar>(rows: &[Vec<T>], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs_val().to_f64())
        .fold(0.0_f64, f64::max);
    let thresh = if T::is_exact() { T::zero() } else { T::from_f64(rel_tol * scale.max(1e-300)) };
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let mut best = r;
        for i in r..m.len() {
            if m[i][c].abs_val() > m[best][c].abs_val() {
                best = i;
            }
        }
        if m[best][c].abs_val() <= thresh {
            continue;
        }
        m.swap(r, best);
        let piv = m[r][c].clone();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..ncols {
                let v = m[r][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
        r += 1;
    }
    r
}

/// Solves the square system `a x = b`; `None` when `a` is (numerically) singular.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs_val().to_f64())
        .fold(0.0_f64, f64::max);
    let thresh = if T::is_exact() { T::zero() } else { T::from_f64(1e-12 * scale.max(1e-300)) };
    for c in 0..n {
        let mut best = c;
        for i in c..n {
            if m[i][c].abs_val() > m[best][c].abs_val() {
                best = i;
            }
        }
        if m[best][c].abs_val() <= thresh {
            return None;
        }
        m.swap(c, best);
        let piv = m[c][c].clone();
        for j in c..=n {
            m[c][j] = m[c][j].clone() / piv.clone();
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let v = m[c][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// Inverse of a square matrix; `None` when singular.
pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![T::zero(); n];
        e[k] = T::one();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rank_detects_dependence() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 1.0]];
        assert_eq!(rank(&rows, 1e-12), 2);
    }

    #[test]
    fn solve_and_inverse_roundtrip() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        let inv = inverse(&a).unwrap();
        let prod = mat_vec(&a, &[inv[0][0], inv[1][0]]);
        assert!((prod[0] - 1.0).abs() < 1e-14 && prod[1].abs() < 1e-14);
    }

    #[test]
    fn exact_inverse() {
        let q = |x: f64| BigRational::from_f64(x);
        let a = vec![vec![q(1.0), q(1.0)], vec![q(1.0), q(-1.0)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], q(0.5));
        assert_eq!(inv[1][1], q(-0.5));
    }

    #[test]
    fn singular_is_none() {
        assert!(solve(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn kron_order_first_factor_slowest() {
        assert_eq!(kron(&[1.0, -1.0], &[1.0, 1.0]), vec![1.0, 1.0, -1.0, -1.0]);
    }
}
