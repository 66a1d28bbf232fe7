//! Spherical (t,t)-designs in R^d, C^d and H^d.
//!
//! A finite weighted sequence of vectors is a spherical (t,t)-design when its
//! frame potential `Σ w_j w_k |<v_j,v_k>|^{2t}` meets the lower bound
//! `c_t(F^d) (Σ w_l |v_l|^{2t})^2`. This crate provides
//!
//! - quaternion scalars ([`quat`]) and vectors over the three fields ([`hilbert`]),
//! - closed-form sphere constants and dimension counts ([`moments`]),
//! - a sparse polynomial engine for `Hom(t,t)`, the apolar inner product and exact
//!   sphere integration ([`poly`], [`polyspace`]),
//! - the Jacobi-polynomial (projective design) criterion ([`projective`]),
//! - design verification and the closed-form catalog ([`designs`]),
//! - frame-potential minimisation over products of spheres ([`search`]).
//!
//! The crate is `no_std` (it needs `alloc`); the `std` feature is on by default and only
//! adds `std::error::Error` impls.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod designs;
pub mod eigen;
pub mod hilbert;
pub mod moments;
pub mod poly;
pub mod polyspace;
pub mod projective;
pub mod quat;
pub mod search;

pub use error::{Error, Result};
pub use hilbert::{AngleSpectrum, Configuration, Field, Vector};
pub use poly::{Monomial, Poly};
pub use quat::Quaternion;
