//! Scalar abstraction shared by every numerical module.
//!
//! All algebra, weight and spectrum code is written against [`Real`], which is
//! implemented for `f32` and `f64`. Dense linear algebra (eigenvalues, SVD)
//! runs in `f64` through [`crate::linalg`] regardless of the working scalar.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::{Fft, FftPlanner};

/// Floating point working scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + std::ops::AddAssign
    + std::ops::SubAssign
    + std::ops::MulAssign
    + std::ops::DivAssign
    + std::ops::RemAssign
    + Send
    + Sync
    + serde::Serialize
    + for<'de> serde::Deserialize<'de>
    + 'static
{
    /// Converts an `f64` literal into the working scalar.
    fn lit(x: f64) -> Self;

    /// Widening conversion used for reporting and dense linear algebra.
    fn as_f64(self) -> f64;

    /// In-place unnormalized DFT of every consecutive chunk of `len` values.
    ///
    /// The forward transform uses the kernel `exp(-2 pi i jk / len)`.
    fn dft_chunks(data: &mut [Complex<Self>], len: usize, inverse: bool);
}

macro_rules! impl_real {
    ($t:ty, $cache:ident) => {
        thread_local! {
            static $cache: RefCell<(FftPlanner<$t>, HashMap<(usize, bool), Arc<dyn Fft<$t>>>)> =
                RefCell::new((FftPlanner::new(), HashMap::new()));
        }

        impl Real for $t {
            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }

            fn dft_chunks(data: &mut [Complex<Self>], len: usize, inverse: bool) {
                if len <= 1 || data.is_empty() {
                    return;
                }
                debug_assert_eq!(data.len() % len, 0);
                let fft = $cache.with(|cell| {
                    let mut cell = cell.borrow_mut();
                    let (planner, plans) = &mut *cell;
                    plans
                        .entry((len, inverse))
                        .or_insert_with(|| {
                            if inverse {
                                planner.plan_fft_inverse(len)
                            } else {
                                planner.plan_fft_forward(len)
                            }
                        })
                        .clone()
                });
                fft.process(data);
            }
        }
    };
}

impl_real!(f32, PLANS_F32);
impl_real!(f64, PLANS_F64);

/// Complex number over the working scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `exp(i theta)`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `ln(sum exp(x_i))` with the usual max shift; `-inf` for an empty input.
pub(crate) fn log_sum_exp<T: Real>(terms: &[T]) -> T {
    let max = terms
        .iter()
        .copied()
        .fold(T::neg_infinity(), |a, b| if b > a { b } else { a });
    if !max.is_finite() {
        return max;
    }
    let s: T = terms.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}
