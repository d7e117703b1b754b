use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::eigen::{hermitian_eig, EigenSystem};
use crate::numerics::operator::{Operator, Structure};
use crate::numerics::state::StateVector;
use crate::scalar::{cis, Scalar};

/// Time evolution `exp(-i H t / hbar)` for one fixed Hamiltonian.
///
/// Diagonalizes once; every later call is a spectral sum.
#[derive(Debug, Clone)]
pub struct Propagator<T> {
    eig: EigenSystem<T>,
    hbar: T,
}

impl<T: Scalar> Propagator<T> {
    pub fn new(h: &Operator<T>, hbar: T) -> Result<Self> {
        if !(hbar > T::zero() && hbar.is_finite()) {
            return Err(Error::invalid("hbar", "must be positive and finite"));
        }
        Ok(Self {
            eig: hermitian_eig(h)?,
            hbar,
        })
    }

    pub fn eigensystem(&self) -> &EigenSystem<T> {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    fn phases(&self, t: T) -> Vec<Complex<T>> {
        self.eig
            .values
            .iter()
            .map(|&l| cis(-l * t / self.hbar))
            .collect()
    }

    /// Full unitary at time `t`. `t = 0` returns the identity exactly.
    pub fn operator(&self, t: T) -> Result<Operator<T>> {
        check_time(t)?;
        if t == T::zero() {
            return Ok(Operator::identity(self.dim()));
        }
        let hbar = self.hbar;
        Ok(self
            .eig
            .spectral_map(|l| cis(-l * t / hbar))
            .tagged(Structure::Unitary))
    }

    /// `<target| exp(-i H t / hbar) |source>`, exact at `t = 0`.
    pub fn amplitude(&self, t: T, source: usize, target: usize) -> Result<Complex<T>> {
        check_time(t)?;
        let n = self.dim();
        for index in [source, target] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, dim: n });
            }
        }
        if t == T::zero() {
            return Ok(if source == target {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::zero()
            });
        }
        let v = &self.eig.vectors;
        let phases = self.phases(t);
        let src = v.row(source);
        let tgt = v.row(target);
        Ok((0..n)
            .map(|k| tgt[k] * phases[k] * src[k].conj())
            .fold(Complex::zero(), |a, b| a + b))
    }

    /// `exp(-i H t / hbar) |psi>` without forming the full operator.
    pub fn evolve_state(&self, t: T, psi: &StateVector<T>) -> Result<StateVector<T>> {
        check_time(t)?;
        let n = self.dim();
        if psi.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: psi.dim(),
            });
        }
        let v = &self.eig.vectors;
        let phases = self.phases(t);
        // coefficients in the eigenbasis
        let mut coeff = vec![Complex::<T>::zero(); n];
        for (i, a) in psi.amplitudes().iter().enumerate() {
            for (k, c) in coeff.iter_mut().enumerate() {
                *c = *c + v.get(i, k).conj() * a;
            }
        }
        for (c, p) in coeff.iter_mut().zip(&phases) {
            *c = *c * p;
        }
        let out = (0..n)
            .map(|i| {
                v.row(i)
                    .iter()
                    .zip(&coeff)
                    .fold(Complex::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect();
        StateVector::new(out)
    }
}

fn check_time<T: Scalar>(t: T) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("t", "time must be finite"))
    }
}

/// `exp(-i H t / hbar)` through the spectral theorem.
pub fn evolve<T: Scalar>(h: &Operator<T>, t: T, hbar: T) -> Result<Operator<T>> {
    Propagator::new(h, hbar)?.operator(t)
}
