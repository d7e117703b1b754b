use std::fmt;
use std::ops::Mul;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Structural promise attached to an [`Operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Hermitian,
    Unitary,
    General,
}

/// Dense complex square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
    tag: Structure,
}

impl<T: Scalar> Operator<T> {
    /// Untagged operator from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { found: 0, min: 1 });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self {
            dim,
            entries,
            tag: Structure::General,
        })
    }

    /// Operator tagged hermitian after checking
    /// `max |M_ij - conj(M_ji)| <= 1e-12 * max |M_ij|`.
    pub fn hermitian(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        Self::new(dim, entries)?.into_hermitian()
    }

    /// Untagged operator from real row-major entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        let entries = entries.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::new(dim, entries)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self {
            dim,
            entries,
            tag: Structure::General,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Complex::zero())
    }

    pub fn identity(dim: usize) -> Self {
        let mut id = Self::from_fn(dim, |i, j| if i == j { Complex::one() } else { Complex::zero() });
        id.tag = Structure::Unitary;
        id
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { values[i] } else { Complex::zero() })
    }

    pub fn into_hermitian(mut self) -> Result<Self> {
        let asymmetry = self.hermitian_defect();
        let allowed = T::tol(1e-12) * self.max_abs();
        if asymmetry > allowed {
            return Err(Error::NonHermitianInput {
                asymmetry: asymmetry.to_f64_lossy(),
                allowed: allowed.to_f64_lossy(),
            });
        }
        self.tag = Structure::Hermitian;
        Ok(self)
    }

    /// Tag as unitary after checking `max |M^H M - I| <= 1e-10`.
    pub fn into_unitary(mut self) -> Result<Self> {
        let residual = self.unitarity_defect();
        if residual > T::tol(1e-10) {
            return Err(Error::NotUnitary {
                residual: residual.to_f64_lossy(),
            });
        }
        self.tag = Structure::Unitary;
        Ok(self)
    }

    /// Hermitian tag with exact symmetry enforced from the upper triangle.
    pub(crate) fn hermitian_from_upper(mut self) -> Self {
        let n = self.dim;
        for i in 0..n {
            let d = self.entries[i * n + i];
            self.entries[i * n + i] = Complex::new(d.re, T::zero());
            for j in i + 1..n {
                self.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        self.tag = Structure::Hermitian;
        self
    }

    pub(crate) fn tagged(mut self, tag: Structure) -> Self {
        self.tag = tag;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> Structure {
        self.tag
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex<T>] {
        self.tag = Structure::General;
        &mut self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: Complex<T>) {
        self.entries[i * self.dim + j] = value;
        self.tag = Structure::General;
    }

    /// Same operator with a single entry overwritten; the tag is dropped.
    pub fn with_entry(&self, i: usize, j: usize, value: Complex<T>) -> Self {
        let mut out = self.clone();
        out.set(i, j, value);
        out
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// `max |M_ij|`.
    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `max |M^H M - I|`.
    pub fn unitarity_defect(&self) -> T {
        let gram = self.adjoint().matmul_unchecked(self);
        gram.max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= T::tol(1e-12) * self.max_abs()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= T::tol(1e-10)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let out = Self::from_fn(n, |i, j| self.get(j, i).conj());
        out.tagged(self.tag)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let mut out = self.matmul_unchecked(rhs);
        if self.tag == Structure::Unitary && rhs.tag == Structure::Unitary {
            out.tag = Structure::Unitary;
        }
        Ok(out)
    }

    fn matmul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = vec![Complex::zero(); n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.entries[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(rhs_row) {
                    *o = *o + a * b;
                }
            }
        }
        Self {
            dim: n,
            entries: out,
            tag: Structure::General,
        }
    }

    /// Integer matrix power by repeated squaring.
    pub fn pow(&self, mut exponent: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = result.matmul_unchecked(&base);
            }
            base = base.matmul_unchecked(&base);
            exponent >>= 1;
        }
        result.tagged(if self.tag == Structure::Unitary {
            Structure::Unitary
        } else {
            Structure::General
        })
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let entries = self.entries.iter().map(|z| z * factor).collect();
        Self {
            dim: self.dim,
            entries,
            tag: Structure::General,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
            tag: Structure::General,
        })
    }

    /// `U X U^H`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// Commutator `[A, B] = AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.matmul(rhs)?.sub(&rhs.matmul(self)?)
    }
}

impl<'a, T: Scalar> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    /// Panics on dimension mismatch; use [`Operator::matmul`] for a checked product.
    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        self.matmul(rhs).expect("operator dimensions agree")
    }
}

impl<T: fmt::Debug> fmt::Debug for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{}, {:?})", self.dim, self.dim, self.tag)?;
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("({:?}, {:?})", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
