//! Numerical laboratory for weighted group algebras `l1(G, w)` on finitely
//! generated discrete Abelian groups `G = Z^d x Z_m1 x ... x Z_mk`.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`); the aliases at the crate root fix it to `f64`.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod group;
pub mod linalg;
pub mod representation;
pub mod scalar;
pub mod spectrum;
pub mod weight;

pub use error::{Error, Result};
pub use group::{make_group_spec, op_elements, ElementAction, GroupElement, GroupSpec};
pub use scalar::Real;
pub use weight::Verdict;

pub type Complex64 = num_complex::Complex<f64>;

pub type Weight = weight::Weight<f64>;
pub type AxisWeight = weight::AxisWeight<f64>;
pub type ClassificationReport = weight::ClassificationReport<f64>;
pub type AlgebraElement = algebra::AlgebraElement<f64>;
pub type DualElement = algebra::DualElement<f64>;
pub type Character = spectrum::Character<f64>;
pub type CharacterSpace = spectrum::CharacterSpace<f64>;
pub type SpectralMeasure = representation::SpectralMeasure<f64>;
pub type Functional = representation::Functional<f64>;

pub type WeightF32 = weight::Weight<f32>;
pub type AlgebraElementF32 = algebra::AlgebraElement<f32>;
pub type CharacterF32 = spectrum::Character<f32>;
pub type CharacterSpaceF32 = spectrum::CharacterSpace<f32>;
