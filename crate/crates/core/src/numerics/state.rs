use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::operator::Operator;
use crate::scalar::Scalar;

/// Complex amplitude vector over lattice sites or qubit basis states.
///
/// Constructors check `sum |a_i|^2 = 1` within `1e-10`. Results of [`apply`]
/// are only normalized when the operator is unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionTooSmall { found: 0, min: 1 });
        }
        let state = Self { amplitudes };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::NotNormalized {
                norm_sqr: norm_sqr.to_f64_lossy(),
            });
        }
        Ok(state)
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: (norm * norm).to_f64_lossy(),
            });
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// Localized state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Ok(Self { amplitudes })
    }

    /// Equal-weight superposition with real positive amplitudes.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { found: 0, min: 1 });
        }
        let a = T::one() / T::from_usize_lossy(dim).sqrt();
        Ok(Self {
            amplitudes: vec![Complex::new(a, T::zero()); dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Matrix-vector product `M v`.
pub fn apply<T: Scalar>(m: &Operator<T>, v: &StateVector<T>) -> Result<StateVector<T>> {
    if m.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: v.dim(),
        });
    }
    let amplitudes = (0..m.dim())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Ok(StateVector { amplitudes })
}
