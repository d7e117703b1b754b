//! Qubit registers, ladder operators and the XY exchange chain.
//!
//! Basis states are bit strings with site 0 as the most significant bit, so
//! on `n` qubits the state with only site `k` excited has index
//! `2^(n - 1 - k)`. The chain Hamiltonian is
//! `H = sum_j A_j (a+_j a_{j+1} + a+_{j+1} a_j)`, with no on-site term. It
//! conserves the number of excitations. Its one-excitation block is the
//! `n`-site hopping matrix with `+A_j` off-diagonals.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::Operator;
use crate::scalar::Scalar;

/// Largest register the dense routines accept (`2^12 = 4096` states).
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitRegister {
    n: usize,
}

impl QubitRegister {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { found: 0, min: 1 });
        }
        if n > MAX_QUBITS {
            return Err(Error::RegisterTooLarge {
                qubits: n,
                cap: MAX_QUBITS,
            });
        }
        Ok(Self { n })
    }

    pub fn qubits(self) -> usize {
        self.n
    }

    pub fn dim(self) -> usize {
        1 << self.n
    }

    /// Bit mask of `site` in a basis index.
    pub fn mask(self, site: usize) -> Result<usize> {
        if site >= self.n {
            return Err(Error::IndexOutOfRange {
                index: site,
                dim: self.n,
            });
        }
        Ok(1 << (self.n - 1 - site))
    }
}

/// Basis indices of the one-excitation states, ordered by excited site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorMap {
    n: usize,
    indices: Vec<usize>,
}

impl SectorMap {
    pub fn new(n: usize) -> Result<Self> {
        let reg = QubitRegister::new(n)?;
        let indices = (0..n).map(|k| reg.mask(k)).collect::<Result<_>>()?;
        Ok(Self { n, indices })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Annihilation on one qubit: `a|1> = |0>`, `a|0> = 0`, identity elsewhere.
pub fn lowering_operator<T: Scalar>(n: usize, site: usize) -> Result<Operator<T>> {
    let reg = QubitRegister::new(n)?;
    let mask = reg.mask(site)?;
    Ok(Operator::from_fn(reg.dim(), |i, j| {
        if j & mask != 0 && i == j ^ mask {
            Complex::one()
        } else {
            Complex::zero()
        }
    }))
}

/// Creation on one qubit, the adjoint of [`lowering_operator`].
pub fn raising_operator<T: Scalar>(n: usize, site: usize) -> Result<Operator<T>> {
    Ok(lowering_operator::<T>(n, site)?.adjoint())
}

/// `a^2 = 0`, `(a+)^2 = 0` and `a a+ + a+ a = 1`, each within `1e-14`.
pub fn ladder_relations_hold<T: Scalar>(a: &Operator<T>) -> bool {
    let tol = T::tol(1e-14);
    let dim = a.dim();
    let zero = Operator::zeros(dim);
    let ad = a.adjoint();
    let aa = a * a;
    let adad = &ad * &ad;
    let anti = (a * &ad).add(&(&ad * a)).expect("same dimension");
    aa.max_abs_diff(&zero) <= tol
        && adad.max_abs_diff(&zero) <= tol
        && anti.max_abs_diff(&Operator::identity(dim)) <= tol
}

pub fn ladder_algebra_check(n: usize, site: usize) -> Result<bool> {
    Ok(ladder_relations_hold(&lowering_operator::<f64>(n, site)?))
}

/// `sum_j a+_j a_j`, diagonal with the popcount of each basis index.
pub fn number_operator<T: Scalar>(n: usize) -> Result<Operator<T>> {
    let reg = QubitRegister::new(n)?;
    let diag: Vec<Complex<T>> = (0..reg.dim())
        .map(|i| Complex::new(T::from_usize_lossy(i.count_ones() as usize), T::zero()))
        .collect();
    Ok(Operator::diagonal(&diag))
}

/// XY exchange chain on `couplings.len() + 1` qubits.
///
/// Built directly from bit flips: `a+_j a_{j+1}` moves an excitation from
/// site `j + 1` to site `j`.
pub fn xy_chain_hamiltonian<T: Scalar>(couplings: &[T]) -> Result<Operator<T>> {
    let n = couplings.len() + 1;
    if n < 2 {
        return Err(Error::DimensionTooSmall { found: n, min: 2 });
    }
    let reg = QubitRegister::new(n)?;
    let dim = reg.dim();
    let mut h = Operator::zeros(dim);
    for (j, &a) in couplings.iter().enumerate() {
        let left = reg.mask(j)?;
        let right = reg.mask(j + 1)?;
        let both = left | right;
        for col in 0..dim {
            // exactly one of the two sites excited: hop to the other one
            let bits = col & both;
            if bits == left || bits == right {
                let row = col ^ both;
                h.set(row, col, Complex::new(a, T::zero()));
            }
        }
    }
    Ok(h.hermitian_from_upper())
}

/// Same Hamiltonian assembled from dense ladder-operator products. Slow;
/// used to cross-check [`xy_chain_hamiltonian`] on small registers.
pub fn xy_chain_from_ladders<T: Scalar>(couplings: &[T]) -> Result<Operator<T>> {
    let n = couplings.len() + 1;
    let reg = QubitRegister::new(n)?;
    let mut h = Operator::zeros(reg.dim());
    for (j, &a) in couplings.iter().enumerate() {
        let lower_j = lowering_operator::<T>(n, j)?;
        let lower_k = lowering_operator::<T>(n, j + 1)?;
        let hop = (&lower_j.adjoint() * &lower_k).add(&(&lower_k.adjoint() * &lower_j))?;
        h = h.add(&hop.scale(Complex::new(a, T::zero())))?;
    }
    h.into_hermitian()
}

/// The `n x n` block of `h_full` on the one-excitation states.
pub fn single_excitation_sector<T: Scalar>(h_full: &Operator<T>, map: &SectorMap) -> Result<Operator<T>> {
    let expected = 1usize << map.n;
    if h_full.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: h_full.dim(),
        });
    }
    let idx = map.indices();
    let block = Operator::from_fn(map.n, |i, j| h_full.get(idx[i], idx[j]));
    Ok(match block.clone().into_hermitian() {
        Ok(h) if h_full.is_hermitian() => h,
        _ => block,
    })
}

/// Exponential state count versus the `2N` parameters of `N` classical arrows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalityGap {
    pub quantum: i64,
    pub classical: i64,
    pub gap: i64,
}

/// `(2^N, 2N, 2^N - 2N)` for `1 <= N <= 62`.
pub fn classicality_gap(n: u32) -> Result<ClassicalityGap> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { found: 0, min: 1 });
    }
    let quantum = 1i64.checked_shl(n).filter(|q| *q > 0).ok_or(Error::Overflow(n))?;
    let classical = 2 * i64::from(n);
    Ok(ClassicalityGap {
        quantum,
        classical,
        gap: quantum - classical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, sign_gauge, ChainSpec, Topology};
    use crate::numerics::{apply, StateVector};
    use crate::pst::{pst_couplings, pst_hamiltonian};

    #[test]
    fn single_qubit_action() {
        let a = lowering_operator::<f64>(1, 0).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        let zero = StateVector::basis(2, 0).unwrap();
        assert_eq!(apply(&a, &one).unwrap(), zero);
        assert_eq!(apply(&a, &zero).unwrap().norm_sqr(), 0.0);
        let ad = raising_operator::<f64>(1, 0).unwrap();
        assert_eq!(apply(&ad, &zero).unwrap(), one);
    }

    #[test]
    fn ladder_relations() {
        assert!(ladder_algebra_check(1, 0).unwrap());
        assert!(ladder_algebra_check(3, 1).unwrap());
        for n in 1..=6 {
            for site in 0..n {
                assert!(ladder_algebra_check(n, site).unwrap(), "n={n} site={site}");
            }
        }
    }

    #[test]
    fn perturbed_operator_fails_check() {
        let a = lowering_operator::<f64>(2, 0).unwrap();
        let bumped = a.with_entry(0, 2, Complex::new(1.0 + 1e-6, 0.0));
        assert!(!ladder_relations_hold(&bumped));
    }

    #[test]
    fn ladder_range_checks() {
        assert!(matches!(lowering_operator::<f64>(3, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(lowering_operator::<f64>(13, 0), Err(Error::RegisterTooLarge { .. })));
    }

    #[test]
    fn big_endian_sector_indices() {
        assert_eq!(SectorMap::new(4).unwrap().indices(), &[8, 4, 2, 1]);
    }

    #[test]
    fn two_site_hop() {
        let a = 0.8f64;
        let h = xy_chain_hamiltonian(&[a]).unwrap();
        // |10> has index 2, |01> index 1
        let out = apply(&h, &StateVector::basis(4, 2).unwrap()).unwrap();
        let want = [0.0, a, 0.0, 0.0];
        for (g, w) in out.amplitudes().iter().zip(want) {
            assert_eq!(*g, Complex::new(w, 0.0));
        }
        let explicit = Operator::from_real(
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, a, 0.0, //
                0.0, a, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(h.max_abs_diff(&explicit), 0.0);
    }

    #[test]
    fn vacuum_is_annihilated() {
        let h = xy_chain_hamiltonian(&[1.0, 0.5, 2.0]).unwrap();
        let out = apply(&h, &StateVector::basis(16, 0).unwrap()).unwrap();
        assert_eq!(out.norm_sqr(), 0.0);
    }

    #[test]
    fn direct_build_matches_ladder_products() {
        for couplings in [vec![1.0], vec![0.3, -1.2], vec![1.0, 2.0, 0.5, 0.7]] {
            let direct = xy_chain_hamiltonian::<f64>(&couplings).unwrap();
            let products = xy_chain_from_ladders::<f64>(&couplings).unwrap();
            assert_eq!(direct.max_abs_diff(&products), 0.0);
        }
    }

    #[test]
    fn excitation_sectors_do_not_mix() {
        let h = xy_chain_hamiltonian(&[1.0, 0.4, 1.7, 0.2]).unwrap();
        for i in 0..32usize {
            for j in 0..32usize {
                if i.count_ones() != j.count_ones() {
                    assert_eq!(h.get(i, j), Complex::zero());
                }
            }
        }
        let number = number_operator::<f64>(5).unwrap();
        assert!(h.commutator(&number).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn sector_matches_lattice_up_to_gauge() {
        let a = 1.4f64;
        let n = 5;
        let map = SectorMap::new(n).unwrap();
        let block = single_excitation_sector(&xy_chain_hamiltonian(&vec![a; n - 1]).unwrap(), &map).unwrap();
        let lattice = build_hamiltonian(&ChainSpec::uniform(n, Topology::Line, 0.0, a).unwrap());
        for i in 0..n {
            for j in 0..n {
                assert!((block.get(i, j).norm() - lattice.get(i, j).norm()).abs() <= 1e-12);
            }
        }
        assert_eq!(block.max_abs_diff(&sign_gauge(&lattice)), 0.0);
    }

    #[test]
    fn sector_matches_pst_chain() {
        let (n, a, hbar) = (6, 0.9f64, 1.0);
        let map = SectorMap::new(n).unwrap();
        let block = single_excitation_sector(&xy_chain_hamiltonian(&pst_couplings(n, a).unwrap()).unwrap(), &map)
            .unwrap();
        let pst = pst_hamiltonian(n, a / hbar, hbar).unwrap();
        assert!(block.max_abs_diff(&pst) <= 1e-12);
    }

    #[test]
    fn sector_of_identity_and_mismatch() {
        let map = SectorMap::new(3).unwrap();
        let block = single_excitation_sector(&Operator::<f64>::identity(8), &map).unwrap();
        assert_eq!(block.max_abs_diff(&Operator::identity(3)), 0.0);
        let err = single_excitation_sector(&Operator::<f64>::identity(4), &map).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 8, found: 4 });
    }

    #[test]
    fn gap_values() {
        let g = classicality_gap(1).unwrap();
        assert_eq!((g.quantum, g.classical, g.gap), (2, 2, 0));
        let g = classicality_gap(8).unwrap();
        assert_eq!((g.quantum, g.classical, g.gap), (256, 16, 240));
        let g = classicality_gap(10).unwrap();
        assert_eq!((g.quantum, g.classical, g.gap), (1024, 20, 1004));
        assert!(classicality_gap(62).is_ok());
        assert_eq!(classicality_gap(63), Err(Error::Overflow(63)));
        assert!(classicality_gap(0).is_err());
    }
}
