//! Hermitian eigendecomposition.
//!
//! The input is reduced to a complex tridiagonal form by Householder
//! reflections. A diagonal phase change then makes it real symmetric, and
//! the implicit QL iteration with Wilkinson-style shifts diagonalizes it.
//! Rotations are accumulated directly into the complex eigenvector matrix.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::operator::{Operator, Structure};
use crate::scalar::Scalar;

/// Eigenvalues in ascending order and the unitary matrix whose columns are the
/// matching eigenvectors.
///
/// Each eigenvector is phase-fixed so its largest-magnitude entry (first one
/// on ties) is real and positive.
#[derive(Debug, Clone)]
pub struct EigenSystem<T> {
    pub values: Vec<T>,
    pub vectors: Operator<T>,
}

impl<T: Scalar> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    /// `V diag(f(lambda)) V^H`.
    pub fn spectral_map(&self, f: impl Fn(T) -> Complex<T>) -> Operator<T> {
        let n = self.dim();
        let weights: Vec<Complex<T>> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            let vi = v.row(i);
            for j in i..n {
                let vj = v.row(j);
                let mut acc = Complex::zero();
                for k in 0..n {
                    acc = acc + vi[k] * weights[k] * vj[k].conj();
                }
                out.set(i, j, acc);
                if i != j {
                    let mut acc_t = Complex::zero();
                    for k in 0..n {
                        acc_t = acc_t + vj[k] * weights[k] * vi[k].conj();
                    }
                    out.set(j, i, acc_t);
                }
            }
        }
        out
    }

    /// `V diag(lambda) V^H`, symmetrized to exact hermiticity.
    pub fn reconstruct(&self) -> Operator<T> {
        self.spectral_map(|l| Complex::new(l, T::zero()))
            .hermitian_from_upper()
    }

    /// `max |H V - V diag(lambda)|`.
    pub fn residual(&self, h: &Operator<T>) -> T {
        let n = self.dim();
        let hv = h * &self.vectors;
        let mut worst = T::zero();
        for i in 0..n {
            for k in 0..n {
                let lhs = hv.get(i, k);
                let rhs = self.vectors.get(i, k) * self.values[k];
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }
}

/// Diagonalize a hermitian operator.
///
/// Any operator passing the hermiticity check is accepted, whatever its tag.
pub fn hermitian_eig<T: Scalar>(h: &Operator<T>) -> Result<EigenSystem<T>> {
    if h.tag() != Structure::Hermitian && !h.is_hermitian() {
        let asymmetry = h.hermitian_defect();
        return Err(Error::NonHermitianInput {
            asymmetry: asymmetry.to_f64_lossy(),
            allowed: (T::tol(1e-12) * h.max_abs()).to_f64_lossy(),
        });
    }
    if h.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("H", "entries must be finite"));
    }
    let n = h.dim();
    let (diag, off, basis) = tridiagonalize(h);
    // Rows of `rows` are eigenvectors; kept transposed so QL rotations touch
    // contiguous memory.
    let mut rows = basis.transpose();
    let mut values = diag;
    let mut off = off;
    implicit_ql(&mut values, &mut off, rows.entries_mut(), n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite eigenvalues"));
    let sorted_values: Vec<T> = order.iter().map(|&k| values[k]).collect();

    let mut vectors = Operator::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let v = &rows.entries()[k * n..(k + 1) * n];
        let phase = canonical_phase(v);
        for (i, z) in v.iter().enumerate() {
            vectors.set(i, col, z * phase);
        }
    }
    Ok(EigenSystem {
        values: sorted_values,
        vectors: vectors.tagged(Structure::Unitary),
    })
}

/// Conjugate phase that makes the largest-magnitude entry real positive.
fn canonical_phase<T: Scalar>(v: &[Complex<T>]) -> Complex<T> {
    let mut best = 0;
    let mut best_mag = T::neg_infinity();
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best = i;
            best_mag = mag;
        }
    }
    if best_mag > T::zero() {
        v[best].conj() / best_mag
    } else {
        Complex::one()
    }
}

/// Returns the real diagonal, real off-diagonal (last entry zero) and the
/// unitary `B` with `H = B T B^H`.
fn tridiagonalize<T: Scalar>(h: &Operator<T>) -> (Vec<T>, Vec<T>, Operator<T>) {
    let n = h.dim();
    let mut a = h.entries().to_vec();
    let mut q = Operator::<T>::identity(n).entries().to_vec();
    let two = T::lit(2.0);

    for k in 0..n.saturating_sub(2) {
        let norm_x = (k + 1..n)
            .map(|i| a[i * n + k].norm_sqr())
            .sum::<T>()
            .sqrt();
        if norm_x == T::zero() {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let x0_abs = x0.norm();
        let phase = if x0_abs > T::zero() {
            x0 / x0_abs
        } else {
            Complex::one()
        };
        let alpha = -phase * norm_x;

        let mut v = vec![Complex::<T>::zero(); n];
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] = v[k + 1] - alpha;
        let v_norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if v_norm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / v_norm;
        }

        // p = A v, K = v^H p, w = p - K v; A <- A - 2 v w^H - 2 w v^H
        let mut p = vec![Complex::<T>::zero(); n];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[i * n..(i + 1) * n];
            *pi = (k + 1..n).map(|j| row[j] * v[j]).sum();
        }
        let kappa: T = v.iter().zip(&p).map(|(vi, pi)| (vi.conj() * pi).re).sum();
        let w: Vec<Complex<T>> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kappa).collect();
        for i in 0..n {
            for j in 0..n {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                a[i * n + j] = a[i * n + j] - upd * two;
            }
        }
        // Q <- Q (I - 2 v v^H)
        for i in 0..n {
            let row = &mut q[i * n..(i + 1) * n];
            let qv: Complex<T> = (k + 1..n).map(|j| row[j] * v[j]).sum();
            for j in k + 1..n {
                row[j] = row[j] - qv * v[j].conj() * two;
            }
        }
    }

    let diag: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut off = vec![T::zero(); n];
    let mut phases = vec![Complex::<T>::one(); n];
    for i in 0..n.saturating_sub(1) {
        let e = a[(i + 1) * n + i];
        let mag = e.norm();
        off[i] = mag;
        phases[i + 1] = if mag > T::zero() {
            phases[i] * (e / mag)
        } else {
            phases[i]
        };
    }
    // B = Q D
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] = q[i * n + j] * phases[j];
        }
    }
    let basis = Operator::new(n, q).expect("square by construction");
    (diag, off, basis)
}

/// Implicit QL on a real symmetric tridiagonal matrix. `off[i]` couples
/// `i` and `i + 1`; `off[n - 1]` must be zero. Each rotation mixes rows
/// `i` and `i + 1` of `rows`.
fn implicit_ql<T: Scalar>(
    d: &mut [T],
    e: &mut [T],
    rows: &mut [Complex<T>],
    n: usize,
) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let max_sweeps = 60 * n.max(1);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > max_sweeps {
                    return Err(Error::invalid("H", "QL iteration failed to converge"));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (head, tail) = rows.split_at_mut((i + 1) * n);
                    let row_i = &mut head[i * n..];
                    let row_next = &mut tail[..n];
                    for (zi, zn) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let hold = *zn;
                        *zn = *zi * s + hold * c;
                        *zi = *zi * c - hold * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }
    Ok(())
}
