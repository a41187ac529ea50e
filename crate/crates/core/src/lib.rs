//! Regression analysis from least squares to small neural networks.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. Every estimator
//! follows the same three pieces: a regression function, a loss, and a way to
//! estimate parameters (closed form or an iterative optimizer).
//!
//! - [`linalg`]: dense row-major matrices, Cholesky / LU solvers.
//! - [`dataset`]: containers, encodings, standardization and seeded generators.
//! - [`metrics`]: regression and classification error metrics.
//! - [`glm`]: linear, logistic and softmax regression.
//! - [`basis`]: polynomial, RBF, sigmoid and Fourier feature maps.
//! - [`kernel`]: kernel functions, Gram matrices and kernel ridge regression.
//! - [`optim`]: gradient descent with schedules and batching, coordinate descent.
//! - [`regpath`]: ridge / LASSO penalties and regularization paths.
//! - [`nn`]: multilayer perceptrons trained by backpropagation.
//! - [`cv`]: hold-out, k-fold and leave-one-out cross-validation.
//! - [`gradcheck`]: finite-difference checks of every analytic gradient.
//!
//! All arithmetic is `f64`. Transcendental functions come from `libm`, so a
//! given seed produces the same numbers on every platform.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod basis;
pub mod cv;
pub mod dataset;
pub mod glm;
pub mod gradcheck;
pub mod kernel;
pub mod linalg;
pub mod metrics;
pub mod nn;
pub mod optim;
pub mod regpath;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use rng::Rng;
