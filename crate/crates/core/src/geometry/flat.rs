use crate::error::{Error, Result};
use crate::geometry::cloud::WeightedPointCloud;
use crate::linalg::{dot, norm2, orthonormalize, reject, sub};
use crate::scalar::{RealScalar, Scalar};

/// Default relative tolerance for float comparisons.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// An affine r-flat `{ p + B t }` in canonical form: the columns of `B` are
/// orthonormal and the offset `p` is orthogonal to all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFlat<S> {
    basis: Vec<Vec<S>>,
    offset: Vec<S>,
}

impl<S: Scalar> AffineFlat<S> {
    /// Validates orthonormality and `B^T p = 0` up to `rel_tol` (exactly for
    /// rationals).
    pub fn new(basis: Vec<Vec<S>>, offset: Vec<S>, rel_tol: f64) -> Result<Self> {
        let d = offset.len();
        if d == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if basis.len() >= d {
            return Err(Error::FlatDimOutOfRange { r: basis.len(), d });
        }
        for col in &basis {
            if col.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: col.len() });
            }
        }
        check_orthonormal(&basis, rel_tol)?;
        let scale = norm2(&offset);
        for col in &basis {
            if !within_scale(&dot(col, &offset), &scale, rel_tol) {
                return Err(Error::NotCanonical);
            }
        }
        Ok(Self { basis, offset })
    }

    /// The 0-flat consisting of a single point.
    pub fn point(p: Vec<S>) -> Self {
        Self { basis: Vec::new(), offset: p }
    }

    pub(crate) fn from_parts_unchecked(basis: Vec<Vec<S>>, offset: Vec<S>) -> Self {
        Self { basis, offset }
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn flat_dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis columns.
    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn offset(&self) -> &[S] {
        &self.offset
    }

    /// `p + B t`.
    pub fn point_at(&self, t: &[S]) -> Vec<S> {
        let mut out = self.offset.clone();
        for (col, ti) in self.basis.iter().zip(t) {
            for (o, c) in out.iter_mut().zip(col) {
                *o = o.clone() + c.clone() * ti.clone();
            }
        }
        out
    }

    /// Orthogonal projection of `x` onto the flat.
    pub fn project(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_dim(x)?;
        let y = sub(x, &self.offset);
        let coeffs: Vec<S> = self.basis.iter().map(|b| dot(b, &y)).collect();
        Ok(self.point_at(&coeffs))
    }

    fn check_dim(&self, x: &[S]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: x.len() });
        }
        Ok(())
    }
}

fn within_scale<S: Scalar>(value: &S, scale_sq: &S, rel_tol: f64) -> bool {
    if S::MODE == crate::scalar::ScalarMode::Rational {
        return value.is_zero();
    }
    // |value| <= rel_tol * max(1, |p|); compared in squares to avoid sqrt.
    let v2 = value.clone() * value.clone();
    let one = S::one();
    let scale = if *scale_sq > one { scale_sq.clone() } else { one };
    let tol = S::from_f64(rel_tol * rel_tol).unwrap_or_else(S::zero);
    v2 <= tol * scale
}

fn check_orthonormal<S: Scalar>(columns: &[Vec<S>], rel_tol: f64) -> Result<()> {
    for (i, a) in columns.iter().enumerate() {
        for (j, b) in columns.iter().enumerate().skip(i) {
            let g = dot(a, b);
            let target = if i == j { S::one() } else { S::zero() };
            if !g.approx_eq(&target, rel_tol) {
                return Err(Error::NotOrthonormal);
            }
        }
    }
    Ok(())
}

/// Orthonormalises `raw_basis` in column order and moves the offset into the
/// orthogonal complement; the represented point set is unchanged.
pub fn canonicalize_flat<S: RealScalar>(raw_basis: &[Vec<S>], raw_offset: &[S], rel_tol: f64) -> Result<AffineFlat<S>> {
    let d = raw_offset.len();
    if raw_basis.len() >= d.max(1) {
        return Err(Error::FlatDimOutOfRange { r: raw_basis.len(), d });
    }
    for col in raw_basis {
        if col.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: col.len() });
        }
    }
    let basis = orthonormalize(raw_basis, rel_tol).ok_or(Error::RankDeficient)?;
    let offset = reject(raw_offset, &basis);
    Ok(AffineFlat { basis, offset })
}

impl<S: RealScalar> AffineFlat<S> {
    /// Orthonormal basis of the orthogonal complement of the direction space,
    /// completed from the standard basis in index order.
    pub fn orthogonal_complement(&self) -> Vec<Vec<S>> {
        let d = self.ambient_dim();
        let mut all = self.basis.clone();
        let mut comp = Vec::new();
        for i in 0..d {
            if all.len() == d {
                break;
            }
            let e: Vec<S> = (0..d).map(|k| if k == i { S::one() } else { S::zero() }).collect();
            let mut v = reject(&e, &all);
            v = reject(&v, &all);
            let len = norm2(&v).sqrt();
            if len > S::from_f64(1e-6).unwrap() {
                let v: Vec<S> = v.into_iter().map(|x| x / len).collect();
                all.push(v.clone());
                comp.push(v);
            }
        }
        comp
    }
}

/// Squared Euclidean distance from `x` to the flat: `|(I - B B^T)(x - p)|^2`.
pub fn dist2_point_flat<S: Scalar>(x: &[S], flat: &AffineFlat<S>) -> Result<S> {
    flat.check_dim(x)?;
    let y = sub(x, &flat.offset);
    Ok(norm2(&reject(&y, &flat.basis)))
}

/// Squared distance computed from the complement form: `sum_i (c_i . (x - p))^2`
/// where the columns `c_i` span the normal space of the flat through `p`.
pub fn dist2_point_complement_form<S: Scalar>(x: &[S], complement: &[Vec<S>], p: &[S], rel_tol: f64) -> Result<S> {
    if x.len() != p.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: x.len() });
    }
    for c in complement {
        if c.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), found: c.len() });
        }
    }
    check_orthonormal(complement, rel_tol)?;
    let y = sub(x, p);
    Ok(complement.iter().fold(S::zero(), |acc, c| {
        let v = dot(c, &y);
        acc + v.clone() * v
    }))
}

/// Index of the nearest flat (lowest index on ties) and the squared distance.
pub fn nearest_flat<S: Scalar>(x: &[S], flats: &[AffineFlat<S>]) -> Result<(usize, S)> {
    let mut best: Option<(usize, S)> = None;
    for (j, f) in flats.iter().enumerate() {
        let d2 = dist2_point_flat(x, f)?;
        match &best {
            Some((_, b)) if d2 >= *b => {}
            _ => best = Some((j, d2)),
        }
    }
    best.ok_or(Error::EmptyFlatList)
}

/// `sum_i mult_i * min_j dist^2(x_i, F_j)`.
pub fn total_cost<S: Scalar>(cloud: &WeightedPointCloud<S>, flats: &[AffineFlat<S>]) -> Result<S> {
    if flats.is_empty() {
        return Err(Error::EmptyFlatList);
    }
    for f in flats {
        if f.ambient_dim() != cloud.dim() {
            return Err(Error::DimensionMismatch { expected: cloud.dim(), found: f.ambient_dim() });
        }
    }
    let mut acc = S::zero();
    for rec in cloud.records() {
        let (_, d2) = nearest_flat(&rec.coords, flats)?;
        acc = acc + rec.weight() * d2;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    #[test]
    fn distance_to_x_axis() {
        let f = AffineFlat::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], DEFAULT_REL_TOL).unwrap();
        assert_eq!(dist2_point_flat(&[5.0, 3.0], &f).unwrap(), 9.0);
        assert_eq!(dist2_point_flat(&[-2.0, 0.0], &f).unwrap(), 0.0);
    }

    #[test]
    fn distance_in_plane_matches_normal_projection() {
        // plane z = x + y through the origin; normal n = (1, 1, -1)
        let raw = vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let f = canonicalize_flat(&raw, &[0.0, 0.0, 0.0], DEFAULT_REL_TOL).unwrap();
        let x = [1.0f64, 1.0, 5.0];
        let n = [1.0f64, 1.0, -1.0];
        let oracle = (dot(&n, &x)).powi(2) / norm2(&n);
        let got = dist2_point_flat(&x, &f).unwrap();
        assert!((got - oracle).abs() <= 1e-12 * oracle);
        assert!((oracle - 3.0).abs() < 1e-15);
    }

    #[test]
    fn canonicalize_examples() {
        let f = canonicalize_flat(&[vec![2.0, 0.0]], &[7.0, 3.0], DEFAULT_REL_TOL).unwrap();
        assert_eq!(f.basis(), &[vec![1.0, 0.0]]);
        assert_eq!(f.offset(), &[0.0, 3.0]);
        let again = canonicalize_flat(f.basis(), f.offset(), DEFAULT_REL_TOL).unwrap();
        assert_eq!(again, f);
        assert!(matches!(
            canonicalize_flat(&[vec![1.0, 1.0], vec![2.0, 2.0]], &[0.0, 0.0, 0.0][..2], DEFAULT_REL_TOL),
            Err(Error::FlatDimOutOfRange { .. })
        ));
        assert!(matches!(
            canonicalize_flat(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]], &[0.0; 3], DEFAULT_REL_TOL),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn complement_form_examples() {
        let c = vec![vec![0.0, 1.0]];
        assert_eq!(dist2_point_complement_form(&[5.0, 3.0], &c, &[0.0, 0.0], DEFAULT_REL_TOL).unwrap(), 9.0);
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let d = dist2_point_complement_form(&[4.0, -1.0], &id, &[1.0, 1.0], DEFAULT_REL_TOL).unwrap();
        assert_eq!(d, 13.0);
        let skew = vec![vec![1.0, 1.0]];
        assert!(matches!(
            dist2_point_complement_form(&[0.0, 0.0], &skew, &[0.0, 0.0], DEFAULT_REL_TOL),
            Err(Error::NotOrthonormal)
        ));
    }

    #[test]
    fn total_cost_two_lines() {
        let y0 = AffineFlat::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], DEFAULT_REL_TOL).unwrap();
        let y10 = AffineFlat::new(vec![vec![1.0, 0.0]], vec![0.0, 10.0], DEFAULT_REL_TOL).unwrap();
        let cloud = WeightedPointCloud::new(
            2,
            vec![
                crate::geometry::PointRecord::new(vec![0.0, 1.0], 3u32),
                crate::geometry::PointRecord::new(vec![0.0, 9.0], 2u32),
            ],
        )
        .unwrap();
        assert_eq!(total_cost(&cloud, &[y0, y10]).unwrap(), 5.0);
        assert!(matches!(total_cost(&cloud, &[]), Err(Error::EmptyFlatList)));
    }

    #[test]
    fn exact_flats_need_exact_orthonormality() {
        let basis = vec![vec![Rational::new(3.into(), 5.into()), Rational::new(4.into(), 5.into())]];
        let offset = vec![Rational::new((-4).into(), 1.into()), int(3)];
        let f = AffineFlat::new(basis, offset, 0.0).unwrap();
        // (3,4)/5 direction through (-4,3): the point (-1, 7) lies on it.
        assert_eq!(dist2_point_flat(&[int(-1), int(7)], &f).unwrap(), int(0));
        assert_eq!(dist2_point_flat(&[int(-8), int(6)], &f).unwrap(), int(25));
        let bad = AffineFlat::new(vec![vec![int(1), int(1)]], vec![int(0), int(0)], 0.0);
        assert!(matches!(bad, Err(Error::NotOrthonormal)));
        let offcanon = AffineFlat::new(vec![vec![int(1), int(0)]], vec![int(1), int(0)], 0.0);
        assert!(matches!(offcanon, Err(Error::NotCanonical)));
    }
}
