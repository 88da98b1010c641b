use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{abs_gcd, common_denominator, dot_is_zero, homogeneous_row};
use crate::scalar::{parse_rational, Rational};

/// The hyperplane `c_0 + c_1 x_1 + .. + c_d x_d = 0`, stored as coprime
/// integers whose first nonzero normal coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    coeffs: Vec<BigInt>,
}

impl Hyperplane {
    pub fn from_integers(mut coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: coeffs.len() });
        }
        let lead = coeffs[1..].iter().find(|c| !c.is_zero()).ok_or(Error::DegenerateHyperplane)?;
        let mut g = abs_gcd(&coeffs);
        if lead.is_negative() {
            g = -g;
        }
        for c in coeffs.iter_mut() {
            *c = &*c / &g;
        }
        Ok(Self { coeffs })
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Result<Self> {
        let l = common_denominator(coeffs);
        Self::from_integers(coeffs.iter().map(|q| q.numer() * (&l / q.denom())).collect())
    }

    /// The axis-parallel hyperplane `x[axis] = value` (0-based axis).
    pub fn axis(dim: usize, axis: usize, value: &Rational) -> Result<Self> {
        if axis >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: axis + 1 });
        }
        let mut c = vec![Rational::zero(); dim + 1];
        c[0] = -value.clone();
        c[axis + 1] = Rational::from_integer(1.into());
        Self::from_rationals(&c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        let mut acc = Rational::from_integer(self.coeffs[0].clone());
        for (c, xi) in self.coeffs[1..].iter().zip(x) {
            acc += xi * c;
        }
        Ok(acc)
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(dot_is_zero(&self.coeffs, &homogeneous_row(x)))
    }

    /// Incidence against a precomputed [`homogeneous_row`].
    pub fn contains_row(&self, row: &[BigInt]) -> bool {
        dot_is_zero(&self.coeffs, row)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    /// Parses coefficient strings; rationals are allowed and get normalised.
    pub fn parse(texts: &[String]) -> Result<Self> {
        let q = texts.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>()?;
        Self::from_rationals(&q)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}
