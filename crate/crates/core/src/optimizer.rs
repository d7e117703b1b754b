//! Derivative-free search for line-chain couplings that maximize end-to-end
//! transfer at a fixed time.
//!
//! Nelder-Mead on the negated fidelity, restarted around the best point with
//! seeded jitter until a whole run stops paying off.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, ChainSpec, Topology};
use crate::pst::transfer_fidelity;
use crate::scalar::Scalar;

/// Search box for each coupling, `|A_j| <= COUPLING_BOUND`.
pub const COUPLING_BOUND: f64 = 10.0;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig<T> {
    pub d: usize,
    pub t_target: T,
    pub max_iters: usize,
    pub tol: T,
    pub seed: u64,
}

impl<T: Scalar> OptimizeConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::DimensionTooSmall { found: self.d, min: 2 });
        }
        if !(self.t_target > T::zero() && self.t_target.is_finite()) {
            return Err(Error::invalid("t_target", "must be positive and finite"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        if !(self.tol > T::zero() && self.tol.is_finite()) {
            return Err(Error::invalid("tol", "must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult<T> {
    /// Best couplings as searched; `fidelity` is their objective value.
    pub couplings: Vec<T>,
    pub fidelity: T,
    /// Simplex iterations over all runs.
    pub iterations: usize,
    pub converged: bool,
    /// Best value after each run, starting with the initial point.
    pub history: Vec<T>,
}

impl<T: Scalar> OptimizeResult<T> {
    /// `|A_j| / max |A|`, which removes the scale and sign copies of a profile.
    pub fn gauge_fixed(&self) -> Vec<T> {
        gauge_fix(&self.couplings)
    }
}

pub fn gauge_fix<T: Scalar>(couplings: &[T]) -> Vec<T> {
    let top = couplings.iter().fold(T::zero(), |m, a| m.max(a.abs()));
    if top == T::zero() {
        return couplings.iter().map(|_| T::zero()).collect();
    }
    couplings.iter().map(|a| a.abs() / top).collect()
}

/// Fidelity of the `0 -> d-1` transfer at time `t` on a line chain with
/// zero on-site energy and `hbar = 1`.
pub fn objective<T: Scalar>(couplings: &[T], t: T, d: usize) -> Result<T> {
    let spec = ChainSpec::new(d, Topology::Line, T::zero(), couplings.to_vec())?;
    transfer_fidelity(&build_hamiltonian(&spec), t, 0, d - 1)
}

struct Search<'a, T> {
    config: &'a OptimizeConfig<T>,
    iterations: usize,
}

impl<T: Scalar> Search<'_, T> {
    fn cost(&self, x: &[T]) -> Result<T> {
        Ok(-objective(x, self.config.t_target, self.config.d)?)
    }

    fn budget_left(&self) -> bool {
        self.iterations < self.config.max_iters
    }

    /// One Nelder-Mead run from `start` with per-coordinate `steps`.
    /// Returns the best vertex and its cost.
    fn run(&mut self, start: &[T], steps: &[T]) -> Result<(Vec<T>, T)> {
        let n = start.len();
        let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
        let x0 = clamp(start.to_vec());
        let f0 = self.cost(&x0)?;
        simplex.push((x0.clone(), f0));
        for (i, &h) in steps.iter().enumerate() {
            let mut x = x0.clone();
            x[i] = x[i] + h;
            let x = clamp(x);
            let f = self.cost(&x)?;
            simplex.push((x, f));
        }

        let spread_tol = self.config.tol * T::lit(1e-2);
        while self.budget_left() {
            // stable: equal costs keep vertex order
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite cost"));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if worst - best <= spread_tol && diameter(&simplex) <= T::tol(1e-9) {
                break;
            }
            if diameter(&simplex) <= T::tol(1e-13) {
                break;
            }
            self.iterations += 1;

            let centroid = centroid(&simplex[..n]);
            let worst_x = simplex[n].0.clone();
            let xr = clamp(blend(&centroid, &worst_x, -REFLECT));
            let fr = self.cost(&xr)?;
            if fr < best {
                let xe = clamp(blend(&centroid, &worst_x, -EXPAND));
                let fe = self.cost(&xe)?;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            // contract toward the better of the reflected and worst points
            let (xc, fc) = if fr < worst {
                let xc = clamp(blend(&centroid, &xr, CONTRACT));
                let fc = self.cost(&xc)?;
                (xc, fc)
            } else {
                let xc = clamp(blend(&centroid, &worst_x, CONTRACT));
                let fc = self.cost(&xc)?;
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x = clamp(blend(&anchor, &vertex.0, SHRINK));
                let f = self.cost(&x)?;
                *vertex = (x, f);
            }
        }
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite cost"));
        Ok(simplex.swap_remove(0))
    }
}

/// `c + s (p - c)`.
fn blend<T: Scalar>(c: &[T], p: &[T], s: f64) -> Vec<T> {
    let s = T::lit(s);
    c.iter().zip(p).map(|(&a, &b)| a + s * (b - a)).collect()
}

fn centroid<T: Scalar>(vertices: &[(Vec<T>, T)]) -> Vec<T> {
    let n = T::from_usize_lossy(vertices.len());
    let mut c = vec![T::zero(); vertices[0].0.len()];
    for (x, _) in vertices {
        for (ci, &xi) in c.iter_mut().zip(x) {
            *ci = *ci + xi;
        }
    }
    c.into_iter().map(|v| v / n).collect()
}

fn diameter<T: Scalar>(simplex: &[(Vec<T>, T)]) -> T {
    let base = &simplex[0].0;
    simplex[1..]
        .iter()
        .flat_map(|(x, _)| x.iter().zip(base).map(|(&a, &b)| (a - b).abs()))
        .fold(T::zero(), T::max)
}

fn clamp<T: Scalar>(mut x: Vec<T>) -> Vec<T> {
    let bound = T::lit(COUPLING_BOUND);
    for v in &mut x {
        *v = v.max(-bound).min(bound);
    }
    x
}

fn initial_steps<T: Scalar>(x: &[T]) -> Vec<T> {
    x.iter().map(|v| T::lit(0.1) * v.abs().max(T::lit(0.5))).collect()
}

/// Maximize [`objective`] at `config.t_target` starting from `initial`.
///
/// Non-convergence is reported through `converged`, not as an error.
pub fn optimize_couplings<T: Scalar>(config: &OptimizeConfig<T>, initial: &[T]) -> Result<OptimizeResult<T>> {
    config.validate()?;
    if initial.len() != config.d - 1 {
        return Err(Error::BadCouplingCount {
            expected: config.d - 1,
            found: initial.len(),
        });
    }
    if initial.iter().any(|a| !a.is_finite()) {
        return Err(Error::invalid("initial", "couplings must be finite"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut search = Search { config, iterations: 0 };
    let mut best_x = clamp(initial.to_vec());
    let mut best_f = search.cost(&best_x)?;
    let mut history = vec![-best_f];
    let mut steps = initial_steps(&best_x);
    let mut converged = false;

    while search.budget_left() {
        let (x, f) = search.run(&best_x, &steps)?;
        let gain = if f < best_f { best_f - f } else { T::zero() };
        if f < best_f {
            best_x = x;
            best_f = f;
        }
        history.push(-best_f);
        if gain < config.tol {
            converged = true;
            break;
        }
        steps = initial_steps(&best_x)
            .into_iter()
            .map(|h| {
                let jitter: f64 = rng.gen_range(0.5..1.5);
                let sign = if rng.gen_bool(0.5) { T::one() } else { -T::one() };
                sign * h * T::lit(jitter)
            })
            .collect();
    }

    Ok(OptimizeResult {
        fidelity: -best_f,
        couplings: best_x,
        iterations: search.iterations,
        converged,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pst::pst_couplings;
    use std::f64::consts::FRAC_PI_2;

    fn config(d: usize, t_target: f64) -> OptimizeConfig<f64> {
        OptimizeConfig {
            d,
            t_target,
            max_iters: 20_000,
            tol: 1e-12,
            seed: 7,
        }
    }

    #[test]
    fn objective_edge_values() {
        let c = pst_couplings(6, 1.0).unwrap();
        assert!(objective(&c, FRAC_PI_2, 6).unwrap() >= 1.0 - 1e-10);
        assert_eq!(objective(&[0.0; 4], 1.3, 5).unwrap(), 0.0);
        let neg: Vec<f64> = c.iter().map(|a| -a).collect();
        let f = objective(&c, 0.7, 6).unwrap();
        assert!((objective(&neg, 0.7, 6).unwrap() - f).abs() <= 1e-12);
        assert!(matches!(objective(&[1.0], 1.0, 4), Err(Error::BadCouplingCount { .. })));
    }

    #[test]
    fn scale_gauge() {
        let c = [0.4, 1.3, 0.9];
        let f = objective(&c, 1.1, 4).unwrap();
        for s in [0.5, 2.0, 3.7] {
            let scaled: Vec<f64> = c.iter().map(|a| a * s).collect();
            assert!((objective(&scaled, 1.1 / s, 4).unwrap() - f).abs() <= 1e-10);
        }
    }

    #[test]
    fn two_sites() {
        let r = optimize_couplings(&config(2, FRAC_PI_2), &[0.5]).unwrap();
        assert!(r.converged);
        assert!(r.fidelity >= 1.0 - 1e-6);
        assert!((r.couplings[0].abs() - 1.0).abs() < 1e-3);
        assert_eq!(r.gauge_fixed(), vec![1.0]);
    }

    #[test]
    fn recovers_perfect_profile_from_uniform() {
        let r = optimize_couplings(&config(4, FRAC_PI_2), &[1.0; 3]).unwrap();
        assert!(r.converged);
        assert!(r.fidelity >= 0.999, "fidelity {}", r.fidelity);
        let want = [3f64.sqrt() / 2.0, 1.0, 3f64.sqrt() / 2.0];
        for (g, w) in r.gauge_fixed().iter().zip(want) {
            assert!((g - w).abs() <= 0.02 * w, "{:?}", r.gauge_fixed());
        }
        assert!((objective(&r.couplings, FRAC_PI_2, 4).unwrap() - r.fidelity).abs() <= 1e-12);
    }

    #[test]
    fn perfect_profile_is_fixed_point() {
        for d in [3, 5, 6] {
            let start = pst_couplings(d, 1.0).unwrap();
            let r = optimize_couplings(&config(d, FRAC_PI_2), &start).unwrap();
            assert!(r.converged);
            assert_eq!(r.history.len(), 2, "one run");
            assert!(r.fidelity >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn best_value_never_drops_and_is_deterministic() {
        let start = [0.3, 1.7, 0.8, 1.1];
        let a = optimize_couplings(&config(5, 1.2), &start).unwrap();
        let b = optimize_couplings(&config(5, 1.2), &start).unwrap();
        assert_eq!(a, b);
        assert!(a.history.windows(2).all(|w| w[1] >= w[0]));
        assert!(a.fidelity >= objective(&start, 1.2, 5).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let mut cfg = config(5, 1.2);
        cfg.max_iters = 3;
        let r = optimize_couplings(&cfg, &[0.3, 1.7, 0.8, 1.1]).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = config(4, FRAC_PI_2);
        cfg.tol = 0.0;
        assert!(optimize_couplings(&cfg, &[1.0; 3]).is_err());
        let mut cfg = config(4, FRAC_PI_2);
        cfg.t_target = -1.0;
        assert!(optimize_couplings(&cfg, &[1.0; 3]).is_err());
        assert!(matches!(
            optimize_couplings(&config(4, FRAC_PI_2), &[1.0; 2]),
            Err(Error::BadCouplingCount { .. })
        ));
    }

    #[test]
    fn search_stays_in_box() {
        let r = optimize_couplings(&config(3, 0.05), &[9.5, 9.5]).unwrap();
        assert!(r.couplings.iter().all(|a| a.abs() <= COUPLING_BOUND));
    }
}
