//! Univariate polynomials with rational coefficients, evaluated at matrices.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::rational::{self, Rational};

/// Coefficients indexed by degree; the leading coefficient is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x^k`.
    pub fn power(k: usize) -> Self {
        Self::monomial(k, rational::int(1))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `Some((k, c))` when the polynomial is exactly `c * x^k`.
    pub fn as_monomial(&self) -> Option<(usize, &Rational)> {
        let k = self.valuation()?;
        (k + 1 == self.coeffs.len()).then(|| (k, &self.coeffs[k]))
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `sum_k c_k N^k` with `N^0 = I`, by Horner's rule.
    pub fn eval_matrix(&self, n: &Matrix) -> Result<Matrix> {
        let size = n.rows();
        if !n.is_square() {
            return Err(crate::Error::Shape("polynomial evaluated at a non-square matrix".into()));
        }
        let mut acc = Matrix::zeros(size, size);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(n)?;
            if !c.is_zero() {
                for i in 0..size {
                    acc[(i, i)] += c;
                }
            }
        }
        Ok(acc)
    }
}

/// Serialized as the coefficient list in ascending degree.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.iter().map(rational::to_string).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<serde_json::Value> = Deserialize::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => rational::parse(s).map_err(D::Error::custom),
                serde_json::Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap())),
                other => Err(D::Error::custom(format!("bad coefficient {other}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(coeffs))
    }
}
