//! Tight-binding rings and lines with nearest-neighbour hopping.
//!
//! Hopping enters the Hamiltonian as `-A` so a uniform chain with positive
//! amplitude has the band `E0 - 2A cos(k b)`. The lattice constant `b` never
//! appears on its own; only the dimensionless phase `k b` is modelled.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, Operator, StateVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Ring,
    Line,
}

impl Topology {
    /// Couplings needed for `d` sites.
    pub fn bond_count(self, d: usize) -> usize {
        match self {
            Topology::Ring => d,
            Topology::Line => d.saturating_sub(1),
        }
    }
}

/// Chain of `d` sites with one on-site energy and per-bond amplitudes.
///
/// Bond `l` joins sites `l` and `l + 1` (mod `d` on a ring).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec<T> {
    d: usize,
    topology: Topology,
    e0: T,
    couplings: Vec<T>,
}

impl<T: Scalar> ChainSpec<T> {
    pub fn new(d: usize, topology: Topology, e0: T, couplings: Vec<T>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall { found: d, min: 2 });
        }
        let expected = topology.bond_count(d);
        if couplings.len() != expected {
            return Err(Error::BadCouplingCount {
                expected,
                found: couplings.len(),
            });
        }
        if !e0.is_finite() {
            return Err(Error::invalid("E0", "must be finite"));
        }
        if couplings.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("couplings", "must be finite"));
        }
        Ok(Self {
            d,
            topology,
            e0,
            couplings,
        })
    }

    /// Every bond set to `a`.
    pub fn uniform(d: usize, topology: Topology, e0: T, a: T) -> Result<Self> {
        Self::new(d, topology, e0, vec![a; topology.bond_count(d)])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn e0(&self) -> T {
        self.e0
    }

    pub fn couplings(&self) -> &[T] {
        &self.couplings
    }

    /// The common amplitude, if every bond has the same one.
    pub fn uniform_coupling(&self) -> Option<T> {
        let first = *self.couplings.first()?;
        self.couplings.iter().all(|&a| a == first).then_some(first)
    }
}

/// `H[l][l] = E0`, `H[l][l+1] = H[l+1][l] = -A_l`. On a ring the bond
/// `d-1 -> 0` closes the loop; for `d = 2` both ring bonds land on the same
/// entry and add up.
pub fn build_hamiltonian<T: Scalar>(spec: &ChainSpec<T>) -> Operator<T> {
    let d = spec.d;
    let mut h = Operator::zeros(d);
    for l in 0..d {
        h.set(l, l, Complex::new(spec.e0, T::zero()));
    }
    for (l, &a) in spec.couplings.iter().enumerate() {
        let m = (l + 1) % d;
        let (i, j) = if l < m { (l, m) } else { (m, l) };
        let cur = h.get(i, j);
        h.set(i, j, cur - Complex::new(a, T::zero()));
    }
    h.hermitian_from_upper()
}

/// Dimensionless wave phases `k_j b` with their labels: `2 pi j / d` for
/// `j = 0..d-1` on a ring, `pi j / (d + 1)` for `j = 1..d` on a line.
pub fn wave_phases<T: Scalar>(topology: Topology, d: usize) -> Result<Vec<(usize, T)>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { found: d, min: 2 });
    }
    let dn = T::from_usize_lossy(d);
    Ok(match topology {
        Topology::Ring => (0..d)
            .map(|j| (j, T::TAU() * T::from_usize_lossy(j) / dn))
            .collect(),
        Topology::Line => (1..=d)
            .map(|j| (j, T::PI() * T::from_usize_lossy(j) / (dn + T::one())))
            .collect(),
    })
}

/// Closed-form band `E_j = E0 - 2A cos(k_j b)` in label order (not sorted).
pub fn dispersion<T: Scalar>(topology: Topology, d: usize, e0: T, a: T) -> Result<Vec<T>> {
    let two = T::lit(2.0);
    Ok(wave_phases::<T>(topology, d)?
        .into_iter()
        .map(|(_, kb)| e0 - two * a * kb.cos())
        .collect())
}

/// One row of the eigensolver-vs-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRow<T> {
    pub j: usize,
    pub kb: T,
    pub energy: T,
    /// Eigenvalue matched to `energy` after sorting both lists.
    pub eigenvalue: T,
    pub deviation: T,
}

/// Pair the closed-form band with the numerical spectrum as sorted multisets.
pub fn dispersion_table<T: Scalar>(spec: &ChainSpec<T>) -> Result<Vec<DispersionRow<T>>> {
    let a = spec.uniform_coupling().ok_or(Error::NonUniformCouplings)?;
    let phases = wave_phases::<T>(spec.topology, spec.d)?;
    let energies = dispersion(spec.topology, spec.d, spec.e0, a)?;
    let eig = hermitian_eig(&build_hamiltonian(spec))?;

    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&x, &y| energies[x].partial_cmp(&energies[y]).expect("finite band"));
    let mut matched = vec![T::zero(); energies.len()];
    for (rank, &idx) in order.iter().enumerate() {
        matched[idx] = eig.values[rank];
    }
    Ok(phases
        .into_iter()
        .zip(energies)
        .zip(matched)
        .map(|(((j, kb), energy), eigenvalue)| DispersionRow {
            j,
            kb,
            energy,
            eigenvalue,
            deviation: (energy - eigenvalue).abs(),
        })
        .collect())
}

/// `max |sorted eigenvalues - sorted closed-form band|` for a uniform chain.
pub fn dispersion_check<T: Scalar>(spec: &ChainSpec<T>) -> Result<T> {
    Ok(dispersion_table(spec)?
        .iter()
        .fold(T::zero(), |m, r| m.max(r.deviation)))
}

/// Standard deviation of the ring coordinate `q_l = 2 pi l / d` (origin at
/// site 0, `q` in `[0, 2 pi)`) under the site probabilities of `state`.
pub fn ring_position_spread<T: Scalar>(state: &StateVector<T>) -> Result<T> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::NotNormalized {
            norm_sqr: norm_sqr.to_f64_lossy(),
        });
    }
    let d = state.dim();
    let dn = T::from_usize_lossy(d);
    let probs = state.probabilities();
    let q = |l: usize| T::TAU() * T::from_usize_lossy(l) / dn;
    let mean: T = probs.iter().enumerate().map(|(l, &p)| p * q(l)).sum();
    let var: T = probs
        .iter()
        .enumerate()
        .map(|(l, &p)| {
            let dq = q(l) - mean;
            p * dq * dq
        })
        .sum();
    Ok(var.max(T::zero()).sqrt())
}

/// `G H G` with `G = diag((-1)^l)`: flips the sign of every coupling between
/// sites of opposite parity. Transfer probabilities are unchanged.
pub fn sign_gauge<T: Scalar>(h: &Operator<T>) -> Operator<T> {
    let sign = |l: usize| if l.is_multiple_of(2) { T::one() } else { -T::one() };
    let out = Operator::from_fn(h.dim(), |i, j| h.get(i, j) * (sign(i) * sign(j)));
    out.tagged(h.tag())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::momentum_basis;
    use std::f64::consts::PI;

    fn line(d: usize, e0: f64, a: f64) -> ChainSpec<f64> {
        ChainSpec::uniform(d, Topology::Line, e0, a).unwrap()
    }

    fn ring(d: usize, e0: f64, a: f64) -> ChainSpec<f64> {
        ChainSpec::uniform(d, Topology::Ring, e0, a).unwrap()
    }

    #[test]
    fn single_bond() {
        let h = build_hamiltonian(&line(2, 0.0, 1.0));
        let want = Operator::from_real(2, &[0.0, -1.0, -1.0, 0.0]).unwrap();
        assert_eq!(h.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn decoupled_ring() {
        let h = build_hamiltonian(&ring(3, 5.0, 0.0));
        let want = Operator::identity(3).scale(Complex::new(5.0, 0.0));
        assert_eq!(h.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn ring_of_four_spectrum() {
        let eig = hermitian_eig(&build_hamiltonian(&ring(4, 0.0, 1.0))).unwrap();
        for (g, w) in eig.values.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_of_six_matches_cosines() {
        let eig = hermitian_eig(&build_hamiltonian(&ring(6, 0.0, 1.0))).unwrap();
        let mut want: Vec<f64> = (0..6).map(|j| -2.0 * (2.0 * PI * j as f64 / 6.0).cos()).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in eig.values.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn structure_tridiagonal_and_corners() {
        let h = build_hamiltonian(&line(5, 0.0, 1.0));
        let r = build_hamiltonian(&ring(5, 0.0, 1.0));
        for i in 0..5 {
            for j in 0..5 {
                let dist = (i as i64 - j as i64).abs();
                assert_eq!(h.get(i, j).norm() != 0.0, dist == 1, "line ({i},{j})");
                assert_eq!(r.get(i, j).norm() != 0.0, dist == 1 || dist == 4, "ring ({i},{j})");
            }
        }
    }

    #[test]
    fn bad_coupling_count() {
        let err = ChainSpec::new(4, Topology::Line, 0.0, vec![1.0; 4]).unwrap_err();
        assert_eq!(err, Error::BadCouplingCount { expected: 3, found: 4 });
        let err = ChainSpec::new(4, Topology::Ring, 0.0, vec![1.0; 3]).unwrap_err();
        assert_eq!(err, Error::BadCouplingCount { expected: 4, found: 3 });
        assert!(ChainSpec::new(3, Topology::Line, 0.0, vec![1.0, f64::NAN]).is_err());
        assert!(ChainSpec::<f64>::uniform(1, Topology::Line, 0.0, 1.0).is_err());
    }

    #[test]
    fn dispersion_values() {
        let ring6 = dispersion::<f64>(Topology::Ring, 6, 0.0, 1.0).unwrap();
        for (g, w) in ring6.iter().zip([-2.0, -1.0, 1.0, 2.0, 1.0, -1.0]) {
            assert!((g - w).abs() < 1e-12);
        }
        let line2 = dispersion::<f64>(Topology::Line, 2, 0.0, 1.0).unwrap();
        assert!((line2[0] + 1.0).abs() < 1e-12 && (line2[1] - 1.0).abs() < 1e-12);
        for topo in [Topology::Ring, Topology::Line] {
            assert!(dispersion::<f64>(topo, 7, 1.25, 0.0).unwrap().iter().all(|&e| e == 1.25));
        }
        assert!(dispersion::<f64>(Topology::Line, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn dispersion_check_cases() {
        assert!(dispersion_check(&ring(8, 0.0, 1.0)).unwrap() <= 1e-10);
        assert!(dispersion_check(&line(13, 2.0, 0.5)).unwrap() <= 1e-10);
        assert_eq!(dispersion_check(&line(9, 3.0, 0.0)).unwrap(), 0.0);
        assert_eq!(dispersion_check(&ring(9, -1.0, 0.0)).unwrap(), 0.0);
        let uneven = ChainSpec::new(3, Topology::Line, 0.0, vec![1.0, 2.0]).unwrap();
        assert_eq!(dispersion_check(&uneven), Err(Error::NonUniformCouplings));
    }

    #[test]
    fn ring_d2_double_bond() {
        assert!(dispersion_check(&ring(2, 0.5, 0.75)).unwrap() <= 1e-12);
    }

    #[test]
    fn line_spectrum_symmetric() {
        let eig = hermitian_eig(&build_hamiltonian(&line(10, 0.0, 1.3))).unwrap();
        for k in 0..10 {
            assert!((eig.values[k] + eig.values[9 - k]).abs() < 1e-10);
        }
    }

    #[test]
    fn ring_relabeling_keeps_spectrum() {
        let spec = ChainSpec::<f64>::new(6, Topology::Ring, 0.3, vec![1.0, 0.5, 2.0, 0.7, 1.1, 0.2]).unwrap();
        let mut rotated = spec.couplings().to_vec();
        rotated.rotate_left(2);
        let spec2 = ChainSpec::new(6, Topology::Ring, 0.3, rotated).unwrap();
        let a = hermitian_eig(&build_hamiltonian(&spec)).unwrap();
        let b = hermitian_eig(&build_hamiltonian(&spec2)).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn fourier_modes_diagonalize_uniform_ring() {
        let (d, e0, a) = (7, 0.4, 1.3);
        let h = build_hamiltonian(&ring(d, e0, a));
        let f = momentum_basis::<f64>(d).unwrap();
        for j in 0..d {
            let col = StateVector::new(f.column(j)).unwrap();
            let hv = crate::numerics::apply(&h, &col).unwrap();
            let e = e0 - 2.0 * a * (2.0 * PI * j as f64 / d as f64).cos();
            for (x, y) in hv.amplitudes().iter().zip(col.amplitudes()) {
                assert!((x - y * e).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn spread_cases() {
        let point = StateVector::<f64>::basis(11, 4).unwrap();
        assert_eq!(ring_position_spread(&point).unwrap(), 0.0);
        let u = StateVector::<f64>::uniform(201).unwrap();
        let target = PI / 3f64.sqrt();
        assert!((ring_position_spread(&u).unwrap() - target).abs() < 1e-3);
        let doubled = Operator::identity(3).scale(Complex::new(2.0, 0.0));
        let bad = crate::numerics::apply(&doubled, &StateVector::basis(3, 0).unwrap()).unwrap();
        assert!(matches!(ring_position_spread(&bad), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn spread_matches_discrete_uniform_variance() {
        // Var of a discrete uniform on {0, h, ..., (d-1) h} is h^2 (d^2 - 1) / 12.
        for d in [3usize, 4, 10, 57, 301] {
            let h = 2.0 * PI / d as f64;
            let oracle = (h * h * ((d * d - 1) as f64) / 12.0).sqrt();
            let got = ring_position_spread(&StateVector::<f64>::uniform(d).unwrap()).unwrap();
            assert!((got - oracle).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn gauge_flips_neighbour_signs() {
        let h = build_hamiltonian(&line(4, 1.0, 2.0));
        let g = sign_gauge(&h);
        assert_eq!(g.get(0, 1).re, 2.0);
        assert_eq!(g.get(1, 1).re, 1.0);
        assert_eq!(sign_gauge(&g).max_abs_diff(&h), 0.0);
    }
}
