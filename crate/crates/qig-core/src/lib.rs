#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

//! Monotone Fisher information metrics on finite-dimensional density-matrix
//! manifolds.
//!
//! Every monotone Riemannian metric on the manifold of faithful density
//! matrices is of the form
//!
//! ```text
//! gamma_D(A, B) = Tr A · J_D^{-1}(B),      J_D = R_D^{1/2} f(L_D R_D^{-1}) R_D^{1/2},
//! ```
//!
//! where `L_D`/`R_D` are left/right multiplication by `D` and `f` is an
//! operator monotone function on `(0, ∞)` with `f(1) = 1` and
//! `f(t) = t f(1/t)`. In the eigenbasis of `D` the superoperator `J_D` acts
//! entrywise through the mean multiplier `m(x, y) = y · f(x/y)`, which is what
//! this crate computes with.
//!
//! The crate is organized around that one formula:
//!
//! | module | contents |
//! |--------|----------|
//! | [`matrix`] | dense complex matrices, Jacobi Hermitian eigensolver, LU solves |
//! | [`state`] | validated Hermitian/density/tangent types, traceless bases, seeded generators |
//! | [`monotone`] | the operator monotone function catalog and mean multipliers |
//! | [`metric`] | the `J_D` engine: Fisher pairings, variances, SLD, integral oracles |
//! | [`channel`] | Kraus channels and monotonicity probes under coarse graining |
//! | [`estimation`] | parametric models, Cramér-Rao checks, optimal estimators |
//! | [`divergence`] | quasi-entropies, contrast kernels, Hessian and skew-information bridges |
//! | [`geometry`] | affine charts, finite-difference scalar curvature, Gibbs scans |
//! | [`quadrature`] | adaptive composite Simpson used by the integral oracles |
//! | [`tol`] | the numeric tolerances every contract in the crate is stated against |
//!
//! The core is `no_std`-compatible (with `alloc`); file formats and the
//! command-line front end live in the companion `qig-cli` crate.
//!
//! # Conventions
//!
//! * Density matrices are strictly positive (faithful); constructors reject
//!   anything with an eigenvalue below the positivity floor rather than
//!   repairing it.
//! * `f` is always normalized to `f(1) = 1`, so the commuting case collapses
//!   to the classical Fisher form `Tr D^{-1} A^2` for every catalog function.
//! * Metrics are ordered opposite to their functions: the largest function
//!   `(1+t)/2` generates the smallest (SLD) metric, the smallest function
//!   `2t/(1+t)` the largest.
//!
//! # Example
//!
//! ```
//! use qig_core::monotone::MonotoneFunction;
//! use qig_core::metric::MetricContext;
//! use qig_core::state::{seeded_rng, random_density, random_tangent};
//!
//! let mut rng = seeded_rng(7);
//! let d = random_density(3, 0.05, &mut rng).unwrap();
//! let a = random_tangent(3, &mut rng);
//!
//! let sld = MetricContext::new(d.clone(), MonotoneFunction::Min).unwrap();
//! let km = MetricContext::new(d, MonotoneFunction::KuboMori).unwrap();
//!
//! // The SLD metric is the smallest monotone metric.
//! assert!(sld.fisher_info(&a, &a).unwrap() <= km.fisher_info(&a, &a).unwrap() + 1e-9);
//! ```

extern crate alloc;

pub mod channel;
pub mod divergence;
pub mod estimation;
pub mod geometry;
pub mod matrix;
pub mod metric;
pub mod monotone;
pub mod quadrature;
pub mod state;
pub mod tol;

mod error;

pub use error::{Error, Result};
