//! Discrete Weyl pair on `d` sites: cyclic shift, clock, the Fourier
//! ("momentum") basis that diagonalizes the shift, and a Hamiltonian with an
//! equidistant spectrum whose evolution over one time step is the shift.
//!
//! Sign conventions:
//!
//! * `shift |l> = |l + 1 mod d>` and `clock |l> = exp(2 pi i l / d) |l>`.
//! * With these, `shift * clock = exp(-2 pi i / d) clock * shift`.
//!   [`commutation_phase`] reports whatever phase it measures.
//! * Column `j` of [`momentum_basis`] has amplitudes `exp(-2 pi i l j / d) / sqrt(d)`
//!   so that it is a shift eigenvector with eigenvalue `exp(+2 pi i j / d)`.
//! * [`equidistant_hamiltonian`] gives energy `hbar theta j` to the complex
//!   conjugate of column `j`, whose shift eigenvalue is `exp(-2 pi i j / d)`.
//!   Forward evolution for `2 pi / (theta d)` is then the shift itself.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{evolve, Operator, Structure};
use crate::scalar::{root_of_unity, Scalar};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::DimensionTooSmall { found: d, min: 2 })
    } else {
        Ok(())
    }
}

fn check_theta<T: Scalar>(theta: T) -> Result<()> {
    if theta == T::zero() {
        return Err(Error::ZeroTheta);
    }
    if !theta.is_finite() {
        return Err(Error::invalid("theta", "must be finite"));
    }
    Ok(())
}

/// Cyclic shift: `M[(l + 1) mod d][l] = 1`.
pub fn shift_matrix<T: Scalar>(d: usize) -> Result<Operator<T>> {
    check_dim(d)?;
    Ok(Operator::from_fn(d, |i, j| {
        if i == (j + 1) % d {
            Complex::one()
        } else {
            Complex::zero()
        }
    })
    .tagged(Structure::Unitary))
}

/// Clock: `diag(exp(2 pi i l / d))`.
pub fn clock_matrix<T: Scalar>(d: usize) -> Result<Operator<T>> {
    check_dim(d)?;
    let diag: Vec<Complex<T>> = (0..d).map(|l| root_of_unity(l as i64, d)).collect();
    Ok(Operator::diagonal(&diag).tagged(Structure::Unitary))
}

/// Scalar `lambda` with `U V = lambda V U`.
///
/// The phase is read off the largest entry of `V U` and then checked on every
/// entry to `1e-12`.
pub fn commutation_phase<T: Scalar>(u: &Operator<T>, v: &Operator<T>) -> Result<Complex<T>> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    for op in [u, v] {
        let residual = op.unitarity_defect();
        if residual > T::tol(1e-10) {
            return Err(Error::NotUnitary {
                residual: residual.to_f64_lossy(),
            });
        }
    }
    let uv = u.matmul(v)?;
    let vu = v.matmul(u)?;
    let (pivot, _) = vu
        .entries()
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |(bi, bm), (i, z)| {
            if z.norm() > bm {
                (i, z.norm())
            } else {
                (bi, bm)
            }
        });
    let lambda = uv.entries()[pivot] / vu.entries()[pivot];
    let residual = uv.max_abs_diff(&vu.scale(lambda));
    if residual > T::tol(1e-12) || (lambda.norm() - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::NotProportional {
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(lambda)
}

/// Columns `exp(-2 pi i l j / d) / sqrt(d)`, the shift eigenvectors with
/// eigenvalues `exp(2 pi i j / d)` in column order.
pub fn momentum_basis<T: Scalar>(d: usize) -> Result<Operator<T>> {
    check_dim(d)?;
    let norm = T::one() / T::from_usize_lossy(d).sqrt();
    Ok(
        Operator::from_fn(d, |l, j| root_of_unity::<T>(-((l * j) as i64), d) * norm)
            .tagged(Structure::Unitary),
    )
}

/// Hamiltonian with spectrum `{0, hbar theta, ..., (d - 1) hbar theta}` on the
/// Fourier modes, written in the site basis. Every pair of sites is coupled.
pub fn equidistant_hamiltonian<T: Scalar>(d: usize, theta: T, hbar: T) -> Result<Operator<T>> {
    check_dim(d)?;
    check_theta(theta)?;
    let dn = T::from_usize_lossy(d);
    // H[l][m] = (hbar theta / d) sum_j j exp(2 pi i (l - m) j / d)
    let scale = hbar * theta / dn;
    let h = Operator::from_fn(d, |l, m| {
        if m < l {
            return Complex::zero();
        }
        let diff = l as i64 - m as i64;
        let sum: Complex<T> = (0..d)
            .map(|j| root_of_unity::<T>(diff * j as i64, d) * T::from_usize_lossy(j))
            .sum();
        sum * scale
    });
    Ok(h.hermitian_from_upper())
}

/// `2 pi / (theta d)`.
pub fn time_step<T: Scalar>(d: usize, theta: T) -> Result<T> {
    check_dim(d)?;
    check_theta(theta)?;
    if theta < T::zero() {
        return Err(Error::invalid("theta", "time step needs theta > 0"));
    }
    Ok(T::TAU() / (theta * T::from_usize_lossy(d)))
}

/// Outcome of comparing one evolution step with the cyclic shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftIdentity<T> {
    pub holds: bool,
    pub global_phase: Complex<T>,
    pub residual: T,
}

/// Evolve the equidistant Hamiltonian for one time step and compare with the
/// shift up to a global phase. Holds when the residual is at most `1e-10`.
pub fn verify_shift_identity<T: Scalar>(d: usize, theta: T) -> Result<ShiftIdentity<T>> {
    let dt = time_step(d, theta)?;
    let h = equidistant_hamiltonian(d, theta, T::one())?;
    let step = evolve(&h, dt, T::one())?;
    let shift = shift_matrix::<T>(d)?;
    let (global_phase, residual) = match_up_to_phase(&step, &shift);
    Ok(ShiftIdentity {
        holds: residual <= T::tol(1e-10),
        global_phase,
        residual,
    })
}

/// Phase from the largest-magnitude entry of `reference` and the residual
/// `max |actual - phase * reference|`.
pub(crate) fn match_up_to_phase<T: Scalar>(
    actual: &Operator<T>,
    reference: &Operator<T>,
) -> (Complex<T>, T) {
    let mut pivot = 0;
    let mut best = T::neg_infinity();
    for (i, z) in reference.entries().iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            pivot = i;
        }
    }
    let ratio = actual.entries()[pivot] / reference.entries()[pivot];
    let phase = ratio / ratio.norm();
    let residual = actual.max_abs_diff(&reference.scale(phase));
    (phase, residual)
}

/// Shift and clock for one dimension together with their measured
/// commutation phase.
#[derive(Debug, Clone)]
pub struct WeylPair<T> {
    pub d: usize,
    pub shift: Operator<T>,
    pub clock: Operator<T>,
    pub commutation_phase: Complex<T>,
}

/// Residuals certifying a [`WeylPair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylCertificate<T> {
    pub shift_power_residual: T,
    pub clock_power_residual: T,
    /// `|lambda^d - 1|`.
    pub phase_order_residual: T,
    /// Smallest `|lambda^k - 1|` over `k = 1..d-1`; positive iff primitive.
    pub min_lower_power_gap: T,
}

impl<T: Scalar> WeylPair<T> {
    pub fn new(d: usize) -> Result<Self> {
        let shift = shift_matrix(d)?;
        let clock = clock_matrix(d)?;
        let commutation_phase = commutation_phase(&shift, &clock)?;
        Ok(Self {
            d,
            shift,
            clock,
            commutation_phase,
        })
    }

    pub fn certify(&self) -> WeylCertificate<T> {
        let id = Operator::identity(self.d);
        let exponent = self.d as u32;
        let mut power: Complex<T> = Complex::one();
        let mut min_gap = T::infinity();
        for _ in 1..self.d {
            power = power * self.commutation_phase;
            min_gap = min_gap.min((power - Complex::one()).norm());
        }
        power = power * self.commutation_phase;
        WeylCertificate {
            shift_power_residual: self.shift.pow(exponent).max_abs_diff(&id),
            clock_power_residual: self.clock.pow(exponent).max_abs_diff(&id),
            phase_order_residual: (power - Complex::one()).norm(),
            min_lower_power_gap: min_gap,
        }
    }

    /// Powers equal the identity to `1e-10`, `lambda^d = 1` to `1e-12` and no
    /// lower power of `lambda` is within `1e-12` of one.
    pub fn is_valid(&self) -> bool {
        let c = self.certify();
        c.shift_power_residual <= T::tol(1e-10)
            && c.clock_power_residual <= T::tol(1e-10)
            && c.phase_order_residual <= T::tol(1e-12)
            && c.min_lower_power_gap > T::tol(1e-12)
    }
}
