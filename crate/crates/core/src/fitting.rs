//! Single-cluster fitting: the best r-flat for a weighted cloud, and exact
//! hyperplanes through rational points.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{homogeneous_row, kernel_vector, rank};
use crate::geometry::{total_cost, AffineFlat, Hyperplane, WeightedPointCloud};
use crate::linalg::sorted_eigen;
use crate::scalar::{Rational, RealScalar, Scalar};

/// Eigenvalues in `[-SPECTRUM_CLAMP, 0)` are reported as zero.
pub const SPECTRUM_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<S> {
    pub flat: AffineFlat<S>,
    pub cost: S,
    /// Scatter-matrix eigenvalues, nonincreasing.
    pub spectrum: Vec<S>,
}

/// Weighted mean of the records; exact for rationals.
pub fn centroid<S: Scalar>(cloud: &WeightedPointCloud<S>) -> Result<Vec<S>> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut sum = vec![S::zero(); cloud.dim()];
    let mut total = S::zero();
    for rec in cloud.records() {
        let w = rec.weight();
        for (s, x) in sum.iter_mut().zip(&rec.coords) {
            *s = s.clone() + w.clone() * x.clone();
        }
        total = total + w;
    }
    Ok(sum.into_iter().map(|s| s / total.clone()).collect())
}

/// Weighted scatter matrix `sum m (x - c)(x - c)^T`, row-major.
pub fn scatter_matrix<S: Scalar>(cloud: &WeightedPointCloud<S>, c: &[S]) -> Vec<Vec<S>> {
    let d = cloud.dim();
    let mut m = vec![vec![S::zero(); d]; d];
    for rec in cloud.records() {
        let w = rec.weight();
        let y: Vec<S> = rec.coords.iter().zip(c).map(|(a, b)| a.clone() - b.clone()).collect();
        for i in 0..d {
            let wy = w.clone() * y[i].clone();
            for j in i..d {
                m[i][j] = m[i][j].clone() + wy.clone() * y[j].clone();
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            m[i][j] = m[j][i].clone();
        }
    }
    m
}

/// Best-fit r-flat: through the centroid, spanned by the top-r principal
/// directions of the weighted scatter matrix.
pub fn best_fit_flat<S: RealScalar>(cloud: &WeightedPointCloud<S>, r: usize) -> Result<FitResult<S>> {
    let d = cloud.dim();
    if r >= d {
        return Err(Error::FlatDimOutOfRange { r, d });
    }
    let c = centroid(cloud)?;
    let scatter = scatter_matrix(cloud, &c);
    let (values, vectors) = sorted_eigen(&scatter);
    let clamp = S::from_f64(SPECTRUM_CLAMP).unwrap();
    let spectrum = values.into_iter().map(|v| if v < S::zero() && v >= -clamp { S::zero() } else { v }).collect();
    let basis: Vec<Vec<S>> = vectors.into_iter().take(r).collect();
    let offset = crate::linalg::reject(&c, &basis);
    let flat = AffineFlat::from_parts_unchecked(basis, offset);
    let cost = total_cost(cloud, std::slice::from_ref(&flat))?;
    Ok(FitResult { flat, cost, spectrum })
}

/// Unique normalised hyperplane through `rows` (homogeneous integer rows of
/// affinely independent points), the hull extended by `e_1, e_2, ..` in
/// order when fewer than `dim` rows are given.
pub fn hyperplane_through_rows(dim: usize, rows: &[Vec<BigInt>]) -> Result<Hyperplane> {
    if rows.len() > dim || rank(rows) < rows.len() {
        return Err(Error::AffinelyDependent);
    }
    let mut m = rows.to_vec();
    for axis in 1..=dim {
        if m.len() == dim {
            break;
        }
        let mut e = vec![BigInt::zero(); dim + 1];
        e[axis] = BigInt::from(1);
        m.push(e);
        if rank(&m) < m.len() {
            m.pop();
        }
    }
    Hyperplane::from_integers(kernel_vector(&m))
}

/// Normalised hyperplane containing up to `d` affinely independent points.
pub fn fit_hyperplane_exact(points: &[Vec<Rational>]) -> Result<Hyperplane> {
    let dim = points.first().ok_or(Error::EmptyCloud)?.len();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
    }
    let rows: Vec<Vec<BigInt>> = points.iter().map(|p| homogeneous_row(p)).collect();
    hyperplane_through_rows(dim, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist2_point_flat, PointRecord};
    use crate::scalar::int;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn centroid_examples() {
        let one = WeightedPointCloud::from_points(2, vec![vec![3.0, -1.0]]).unwrap();
        assert_eq!(centroid(&one).unwrap(), vec![3.0, -1.0]);
        let two = WeightedPointCloud::<f64>::from_points(2, vec![vec![0.0, 0.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(centroid(&two).unwrap(), vec![1.0, 2.0]);
        let weighted = WeightedPointCloud::new(
            2,
            vec![PointRecord::new(vec![int(0), int(0)], 3u32), PointRecord::new(vec![int(4), int(0)], 1u32)],
        )
        .unwrap();
        assert_eq!(centroid(&weighted).unwrap(), vec![int(1), int(0)]);
        let empty = WeightedPointCloud::<f64>::new(2, vec![]).unwrap();
        assert!(matches!(centroid(&empty), Err(Error::EmptyCloud)));
    }

    #[test]
    fn collinear_points_fit_exactly() {
        let pts = (0..5).map(|i| vec![i as f64, 2.0 * i as f64 + 1.0]).collect();
        let cloud = WeightedPointCloud::from_points(2, pts).unwrap();
        let fit = best_fit_flat(&cloud, 1).unwrap();
        assert!(fit.cost < 1e-20);
        for rec in cloud.records() {
            assert!(dist2_point_flat(&rec.coords, &fit.flat).unwrap() < 1e-20);
        }
    }

    #[test]
    fn point_fit_is_centroid_with_variance_cost() {
        let cloud = WeightedPointCloud::<f64>::from_points(2, vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 3.0]]).unwrap();
        let fit = best_fit_flat(&cloud, 0).unwrap();
        assert_eq!(fit.flat.flat_dim(), 0);
        assert!((fit.flat.offset()[0] - 1.0).abs() < 1e-15 && (fit.flat.offset()[1] - 1.0).abs() < 1e-15);
        // 1+1 + 1+1 + 0+4
        assert!((fit.cost - 8.0).abs() < 1e-12);
    }

    #[test]
    fn three_point_line_is_horizontal() {
        let cloud = WeightedPointCloud::<f64>::from_points(2, vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]]).unwrap();
        let fit = best_fit_flat(&cloud, 1).unwrap();
        assert!((fit.cost - 2.0 / 3.0).abs() < 1e-12);
        assert!((fit.flat.basis()[0][0] - 1.0).abs() < 1e-12);
        assert!((fit.flat.offset()[1] - 1.0 / 3.0).abs() < 1e-12);
        let tail: f64 = fit.spectrum[1..].iter().sum();
        assert!((tail - fit.cost).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_r() {
        let cloud = WeightedPointCloud::<f64>::from_points(2, vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(best_fit_flat(&cloud, 2), Err(Error::FlatDimOutOfRange { .. })));
    }

    #[test]
    fn exact_hyperplane_examples() {
        let h = fit_hyperplane_exact(&[vec![int(0), int(0)], vec![int(1), int(1)]]).unwrap();
        assert_eq!(h.coeffs(), ints(&[0, 1, -1]).as_slice());
        let h = fit_hyperplane_exact(&[
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(h.coeffs(), ints(&[-1, 1, 1, 1]).as_slice());
        let h = fit_hyperplane_exact(&[vec![int(2), int(3), int(5)]]).unwrap();
        assert_eq!(h.coeffs(), ints(&[-5, 0, 0, 1]).as_slice());
        let dup = fit_hyperplane_exact(&[vec![int(1), int(1)], vec![int(1), int(1)]]);
        assert!(matches!(dup, Err(Error::AffinelyDependent)));
        let three = fit_hyperplane_exact(&[vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert!(matches!(three, Err(Error::AffinelyDependent)));
    }
}
