//! Perfect state transfer along a line with couplings `A sqrt(j (d - j))`.
//!
//! The chain Hamiltonian has off-diagonals `vartheta hbar sqrt(j (d - j))`,
//! which is `2 vartheta J_x` for spin `s = (d - 1) / 2`. Its spectrum is
//! evenly spaced with gap `2 vartheta hbar`, an excitation on site 0 reaches
//! site `d - 1` at `t = pi / (2 vartheta)`, and it is back home at
//! `t = pi / vartheta`.
//!
//! Sites are 0-based; bond `j` (1-based) joins sites `j - 1` and `j`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Operator, Propagator};
use crate::scalar::Scalar;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::DimensionTooSmall { found: d, min: 2 })
    } else {
        Ok(())
    }
}

fn check_vartheta<T: Scalar>(vartheta: T) -> Result<()> {
    if vartheta > T::zero() && vartheta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("vartheta", "must be positive and finite"))
    }
}

/// `A sqrt(j (d - j))` for bonds `j = 1..d-1`.
pub fn pst_couplings<T: Scalar>(d: usize, a: T) -> Result<Vec<T>> {
    check_dim(d)?;
    Ok((1..d)
        .map(|j| a * T::from_usize_lossy(j * (d - j)).sqrt())
        .collect())
}

/// Tridiagonal, zero diagonal, off-diagonals `vartheta hbar sqrt(j (d - j))`.
pub fn pst_hamiltonian<T: Scalar>(d: usize, vartheta: T, hbar: T) -> Result<Operator<T>> {
    check_vartheta(vartheta)?;
    let couplings = pst_couplings(d, vartheta * hbar)?;
    Ok(hopping_matrix(&couplings))
}

/// Zero-diagonal tridiagonal matrix with `+c_j` on bond `j`.
pub fn hopping_matrix<T: Scalar>(couplings: &[T]) -> Operator<T> {
    let d = couplings.len() + 1;
    Operator::from_fn(d, |i, j| {
        if j == i + 1 {
            Complex::new(couplings[i], T::zero())
        } else {
            Complex::zero()
        }
    })
    .hermitian_from_upper()
}

/// `exp(-i H t / hbar)` for the perfect-transfer chain.
pub fn evolution<T: Scalar>(d: usize, vartheta: T, t: T, hbar: T) -> Result<Operator<T>> {
    let h = pst_hamiltonian(d, vartheta, hbar)?;
    Propagator::new(&h, hbar)?.operator(t)
}

/// `|<target| exp(-i H t) |source>|^2` with `hbar = 1`.
pub fn transfer_fidelity<T: Scalar>(h: &Operator<T>, t: T, source: usize, target: usize) -> Result<T> {
    check_index(source, h.dim())?;
    check_index(target, h.dim())?;
    let p = Propagator::new(h, T::one())?;
    fidelity_at(&p, t, source, target)
}

fn check_index(index: usize, dim: usize) -> Result<()> {
    if index < dim {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, dim })
    }
}

fn fidelity_at<T: Scalar>(p: &Propagator<T>, t: T, source: usize, target: usize) -> Result<T> {
    Ok(p.amplitude(t, source, target)?.norm_sqr().min(T::one()))
}

/// Transfer probability sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityCurve<T> {
    pub times: Vec<T>,
    pub fidelities: Vec<T>,
    pub source: usize,
    pub target: usize,
}

impl<T: Scalar> FidelityCurve<T> {
    /// Earliest sample with the largest fidelity, as `(time, fidelity)`.
    pub fn peak(&self) -> Option<(T, T)> {
        let mut best: Option<(T, T)> = None;
        for (&t, &f) in self.times.iter().zip(&self.fidelities) {
            if best.is_none_or(|(_, bf)| f > bf) {
                best = Some((t, f));
            }
        }
        best
    }
}

/// Evenly spaced grid of `samples` points on `[start, stop]`, endpoints included.
pub fn linspace<T: Scalar>(start: T, stop: T, samples: usize) -> Vec<T> {
    match samples {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let steps = T::from_usize_lossy(samples - 1);
            (0..samples)
                .map(|i| {
                    let frac = T::from_usize_lossy(i) / steps;
                    start + (stop - start) * frac
                })
                .collect()
        }
    }
}

/// Fidelity at every grid time. Samples are evaluated in parallel and kept
/// in grid order.
pub fn fidelity_curve<T: Scalar>(
    h: &Operator<T>,
    times: &[T],
    source: usize,
    target: usize,
) -> Result<FidelityCurve<T>> {
    check_index(source, h.dim())?;
    check_index(target, h.dim())?;
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("times", "must be finite"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("times", "must be strictly increasing"));
    }
    let p = Propagator::new(h, T::one())?;
    let fidelities = times
        .par_iter()
        .map(|&t| fidelity_at(&p, t, source, target))
        .collect::<Result<Vec<T>>>()?;
    Ok(FidelityCurve {
        times: times.to_vec(),
        fidelities,
        source,
        target,
    })
}

/// Transfer time, peak fidelity and circulation period for one chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferReport<T> {
    pub d: usize,
    pub vartheta: T,
    pub t_star: T,
    pub peak_fidelity: T,
    pub period: T,
}

/// End-to-end transfer at `t_star = pi / (2 vartheta)`; period `pi / vartheta`.
pub fn transfer_time<T: Scalar>(d: usize, vartheta: T) -> Result<TransferReport<T>> {
    let h = pst_hamiltonian(d, vartheta, T::one())?;
    let t_star = T::FRAC_PI_2() / vartheta;
    let peak_fidelity = transfer_fidelity(&h, t_star, 0, d - 1)?;
    Ok(TransferReport {
        d,
        vartheta,
        t_star,
        peak_fidelity,
        period: T::PI() / vartheta,
    })
}

/// `J H J = H` to `1e-12 * max(1, max |H|)`, `J` reversing the site order.
pub fn mirror_check<T: Scalar>(h: &Operator<T>) -> bool {
    let n = h.dim();
    let allowed = T::tol(1e-12) * h.max_abs().max(T::one());
    (0..n).all(|i| (0..n).all(|j| (h.get(n - 1 - i, n - 1 - j) - h.get(i, j)).norm() <= allowed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, ChainSpec, Topology};
    use crate::numerics::hermitian_eig;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn couplings_examples() {
        assert_eq!(pst_couplings(2, 1.0).unwrap(), vec![1.0]);
        let c = pst_couplings(4, 1.0).unwrap();
        let want = [3f64.sqrt(), 2.0, 3f64.sqrt()];
        for (g, w) in c.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        for d in 2..40 {
            let c = pst_couplings(d, 0.7).unwrap();
            let mut r = c.clone();
            r.reverse();
            assert_eq!(c, r);
        }
        assert!(pst_couplings::<f64>(1, 1.0).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let h = pst_hamiltonian(2, 1.0, 1.0).unwrap();
        assert_eq!(h.max_abs_diff(&Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()), 0.0);
        let h3 = pst_hamiltonian(3, 1.0, 1.0).unwrap();
        assert!((h3.get(0, 1).re - 2f64.sqrt()).abs() < 1e-15);
        assert!((h3.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        // first rows of the displayed matrix: sqrt(d-1), sqrt(2(d-2))
        let d = 7;
        let h7 = pst_hamiltonian(d, 1.0, 1.0).unwrap();
        assert!((h7.get(0, 1).re - ((d - 1) as f64).sqrt()).abs() < 1e-15);
        assert!((h7.get(1, 2).re - ((2 * (d - 2)) as f64).sqrt()).abs() < 1e-15);
        assert!(pst_hamiltonian(3, 0.0, 1.0).is_err());
    }

    #[test]
    fn spectrum_is_equidistant() {
        for (d, vt, hbar) in [(2, 1.0, 1.0), (5, 0.3, 1.0), (12, 2.0, 0.5)] {
            let eig = hermitian_eig(&pst_hamiltonian(d, vt, hbar).unwrap()).unwrap();
            for m in 0..d {
                let want = vt * hbar * (2.0 * m as f64 - d as f64 + 1.0);
                assert!((eig.values[m] - want).abs() < 1e-10 * vt * hbar * d as f64);
            }
        }
    }

    #[test]
    fn proportional_to_spin_jx() {
        // J_x for spin s: <m+1|J_x|m> = sqrt(s(s+1) - m(m+1)) / 2, m = -s..s-1
        for d in 2..10 {
            let s = (d as f64 - 1.0) / 2.0;
            let h = pst_hamiltonian(d, 1.0, 1.0).unwrap();
            for k in 0..d - 1 {
                let m = -s + k as f64;
                let jx = (s * (s + 1.0) - m * (m + 1.0)).sqrt() / 2.0;
                assert!((h.get(k, k + 1).re - 2.0 * jx).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn evolution_examples() {
        let u = evolution(4, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(u.max_abs_diff(&Operator::identity(4)), 0.0);
        let u = evolution(2, 1.0, FRAC_PI_2, 1.0).unwrap();
        let want = Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap().scale(Complex::new(0.0, -1.0));
        assert!(u.max_abs_diff(&want) < 1e-12);
        let u = evolution(6, 1.3, FRAC_PI_2 / 1.3, 1.0).unwrap();
        assert!((u.get(5, 0).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_trivial_cases() {
        let h = pst_hamiltonian(5, 1.0, 1.0).unwrap();
        assert_eq!(transfer_fidelity(&h, 0.0, 2, 2).unwrap(), 1.0);
        assert_eq!(transfer_fidelity(&h, 0.0, 0, 3).unwrap(), 0.0);
        assert!(transfer_fidelity(&h, FRAC_PI_2, 0, 4).unwrap() >= 1.0 - 1e-10);
        assert!(matches!(transfer_fidelity(&h, 1.0, 0, 5), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn transfer_time_examples() {
        let r = transfer_time(2, 1.0).unwrap();
        assert!((r.t_star - FRAC_PI_2).abs() < 1e-15);
        assert!((r.peak_fidelity - 1.0).abs() < 1e-12);
        let r = transfer_time(8, 2.0).unwrap();
        assert!((r.t_star - PI / 4.0).abs() < 1e-15);
        assert!(r.peak_fidelity >= 1.0 - 1e-10);
        for (d, vt) in [(3, 0.5f64), (9, 7.0)] {
            let r = transfer_time(d, vt).unwrap();
            assert!((r.period - 2.0 * r.t_star).abs() <= 1e-9 * r.period);
            assert!((r.period - PI / vt).abs() < 1e-14);
        }
    }

    /// Golden-section refinement of a grid maximum.
    fn refine_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) >= f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        (lo + hi) / 2.0
    }

    #[test]
    fn numerical_maximum_confirms_transfer_time() {
        for d in 2..=8 {
            let vt = 1.0f64;
            let h = pst_hamiltonian(d, vt, 1.0).unwrap();
            let p = Propagator::new(&h, 1.0).unwrap();
            let f = |t: f64| p.amplitude(t, 0, d - 1).unwrap().norm_sqr();
            let grid = linspace(0.0, PI / vt, 1001);
            let (mut best_i, mut best) = (0, -1.0);
            for (i, &t) in grid.iter().enumerate() {
                if f(t) > best {
                    best = f(t);
                    best_i = i;
                }
            }
            let t_max = refine_max(f, grid[best_i - 1], grid[best_i + 1]);
            assert!((t_max - FRAC_PI_2 / vt).abs() < 1e-5, "d={d}: {t_max}");
            assert!(f(t_max) > 1.0 - 1e-10);
        }
    }

    #[test]
    fn curve_cases() {
        let zero = Operator::<f64>::zeros(3).into_hermitian().unwrap();
        let grid = linspace(0.0, 5.0, 11);
        let same = fidelity_curve(&zero, &grid, 1, 1).unwrap();
        assert!(same.fidelities.iter().all(|&f| f == 1.0));
        let other = fidelity_curve(&zero, &grid, 0, 2).unwrap();
        assert!(other.fidelities.iter().all(|&f| f == 0.0));

        let h = pst_hamiltonian(4, 1.0, 1.0).unwrap();
        let grid = linspace(0.0, PI, 201);
        let c = fidelity_curve(&h, &grid, 0, 3).unwrap();
        assert!((c.fidelities[100] - 1.0).abs() < 1e-10);
        assert!(c.fidelities[200] < 1e-10);
        let back = fidelity_curve(&h, &grid, 0, 0).unwrap();
        assert!(back.fidelities[200] > 1.0 - 1e-9);

        assert!(fidelity_curve(&h, &[0.0, 0.0], 0, 3).is_err());
        assert!(fidelity_curve(&h, &[1.0, 0.5], 0, 3).is_err());
    }

    #[test]
    fn uniform_chain_falls_short() {
        let spec = ChainSpec::uniform(5, Topology::Line, 0.0, 1.0).unwrap();
        let h = build_hamiltonian(&spec);
        let c = fidelity_curve(&h, &linspace(0.0, 20.0, 2000), 0, 4).unwrap();
        let (_, peak) = c.peak().unwrap();
        assert!(peak < 1.0 - 1e-3);
    }

    #[test]
    fn mirror_examples() {
        for d in 2..12 {
            assert!(mirror_check(&pst_hamiltonian(d, 1.0, 1.0).unwrap()));
        }
        let uniform = build_hamiltonian(&ChainSpec::uniform(6, Topology::Line, 0.0, 1.0).unwrap());
        assert!(mirror_check(&uniform));
        let lopsided = build_hamiltonian(&ChainSpec::new(3, Topology::Line, 0.0, vec![1.0, 2.0]).unwrap());
        assert!(!mirror_check(&lopsided));
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 20.0, 2000);
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1999], 20.0);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
