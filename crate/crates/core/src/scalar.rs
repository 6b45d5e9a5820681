//! Scalar abstraction.
//!
//! Everything in the library is generic over the real field backing the
//! complex matrix blocks; `f32` and `f64` both qualify. Concrete `f64`
//! aliases live at the crate root.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type underlying all complex computations.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {}

impl<T: RealField + FromPrimitive + ToPrimitive + Copy> Real for T {}

/// Convert an `f64` constant into the working scalar type.
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("scalar constant out of range")
}

/// Convert the working scalar into `f64` (for reports and serialization).
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("scalar not representable as f64")
}

/// Complex number over the working scalar.
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

/// Default verification tolerance (overridable per call).
pub fn default_tol<T: Real>() -> T {
    real(1e-9)
}
