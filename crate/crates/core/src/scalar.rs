//! Real scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type the simulator can run on: `f32` or `f64`.
///
/// Tolerances in this crate are written for double precision. [`Scalar::tol`]
/// lifts them to a floor proportional to machine epsilon so the same checks
/// stay meaningful in single precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Convert an `f64` literal. Always succeeds for finite inputs.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Convert an index or count.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to float")
    }

    /// `max(base, 32 * epsilon)`.
    fn tol(base: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(32.0);
        Self::lit(base).max(floor)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Unit-modulus complex number `exp(i * angle)`.
pub fn cis<T: Scalar>(angle: T) -> Complex<T> {
    Complex::new(angle.cos(), angle.sin())
}

/// Primitive-root phase `exp(2 pi i k / d)`, with `k` reduced mod `d` first so
/// large exponents do not lose accuracy.
pub fn root_of_unity<T: Scalar>(k: i64, d: usize) -> Complex<T> {
    let d_i = d as i64;
    let k = k.rem_euclid(d_i);
    let angle = T::TAU() * T::from_usize_lossy(k as usize) / T::from_usize_lossy(d);
    cis(angle)
}
