pub mod error;
pub mod format;
pub mod rng;
pub mod tensor_core;

pub use error::{GeomError, Result};
pub mod torus_teich;
pub mod harmonic_energy;
pub mod numeric;
pub mod cusp_model;
pub mod funk_metrics;
pub mod cat0_engine;
pub mod coxeter_curves;
pub mod circle_fields;
pub mod verify;

// Book chapters run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tensors.md")]
mod book_tensors {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/torus.md")]
mod book_torus {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/energy.md")]
mod book_energy {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cusp.md")]
mod book_cusp {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/funk.md")]
mod book_funk {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cat0.md")]
mod book_cat0 {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coxeter.md")]
mod book_coxeter {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/circle.md")]
mod book_circle {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
mod book_verification {}
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
