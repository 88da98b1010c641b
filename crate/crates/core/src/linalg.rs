//! Small dense helpers over generic scalars. Matrices are `Vec` of columns or
//! rows as documented per function; dimensions here are tiny (d <= ~10).

use crate::scalar::{RealScalar, Scalar};

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn norm2<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

/// `v - sum_i (b_i . v) b_i` for orthonormal columns `b`.
pub fn reject<S: Scalar>(v: &[S], basis: &[Vec<S>]) -> Vec<S> {
    let mut out = v.to_vec();
    for b in basis {
        let c = dot(b, v);
        for (o, bi) in out.iter_mut().zip(b) {
            *o = o.clone() - c.clone() * bi.clone();
        }
    }
    out
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass. Returns `None`
/// when a column's residual falls below `rel_tol` of its original length.
pub fn orthonormalize<S: RealScalar>(columns: &[Vec<S>], rel_tol: f64) -> Option<Vec<Vec<S>>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(columns.len());
    for col in columns {
        let original = norm2(col).sqrt();
        let mut v = col.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi = *vi - c * *qi;
                }
            }
        }
        let len = norm2(&v).sqrt();
        let tol = S::from_f64(rel_tol).unwrap() * original;
        if original == S::zero() || len <= tol {
            return None;
        }
        out.push(v.into_iter().map(|x| x / len).collect());
    }
    Some(out)
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
///
/// `a` is row-major and symmetric. Returns eigenvalues and the matching
/// eigenvectors (as columns) in the order the diagonal ends up in; callers
/// sort them.
pub fn jacobi_eigen<S: RealScalar>(a: &[Vec<S>]) -> (Vec<S>, Vec<Vec<S>>) {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a.to_vec();
    let mut v: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let two = S::one() + S::one();
    let eps = S::epsilon();
    for _sweep in 0..100 {
        let mut off = S::zero();
        let mut total = S::zero();
        for i in 0..n {
            for j in 0..n {
                let sq = m[i][j] * m[i][j];
                total = total + sq;
                if i != j {
                    off = off + sq;
                }
            }
        }
        if off <= eps * eps * total || off == S::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q] == S::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (two * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let values = (0..n).map(|i| m[i][i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (values, vectors)
}

/// Eigenpairs sorted by descending eigenvalue (stable: ties keep the
/// decomposition's index order), each vector's first largest-magnitude
/// component made positive.
pub fn sorted_eigen<S: RealScalar>(a: &[Vec<S>]) -> (Vec<S>, Vec<Vec<S>>) {
    let (values, vectors) = jacobi_eigen(a);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut vals = Vec::with_capacity(order.len());
    let mut vecs = Vec::with_capacity(order.len());
    for i in order {
        vals.push(values[i]);
        let mut v = vectors[i].clone();
        let mut best = 0;
        for (k, x) in v.iter().enumerate() {
            if x.abs() > v[best].abs() {
                best = k;
            }
        }
        if v[best] < S::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        vecs.push(v);
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalises_symmetric_matrix() {
        let a = vec![vec![4.0, 1.0, 2.0], vec![1.0, 3.0, 0.5], vec![2.0, 0.5, 5.0]];
        let (vals, vecs) = sorted_eigen(&a);
        for (lambda, v) in vals.iter().zip(&vecs) {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * v[j]).sum();
                assert!((av - lambda * v[i]).abs() < 1e-12);
            }
        }
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let trace: f64 = vals.iter().sum();
        assert!((trace - 12.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_detects_rank_deficiency() {
        let cols = vec![vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]];
        assert!(orthonormalize(&cols, 1e-9).is_none());
        let q = orthonormalize(&[vec![2.0f64, 0.0], vec![1.0, 1.0]], 1e-9).unwrap();
        assert_eq!(q[0], vec![1.0, 0.0]);
        assert!((q[1][1] - 1.0).abs() < 1e-15);
    }
}
