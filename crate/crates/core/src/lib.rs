//! Computational algebra for finite involutive non-degenerate set-theoretic
//! solutions of the Yang-Baxter equation and finite left braces.
//!
//! * [`solution`]: solutions, retraction, multipermutation level, isomorphism.
//! * [`permgrp`]: permutation groups by generators, Engel and nilpotency tests.
//! * [`structure_group`]: the structure group in semidirect form, star
//!   sequences and the embedding of a solution into a finite brace.
//! * [`brace`]: finite left braces, socle, ideals, Rump chains.
//! * [`ring`]: finite rings, group rings and the adjoint operation.
//! * [`census`]: exhaustive enumeration of small solutions.

pub mod brace;
pub mod census;
pub mod error;
pub mod fixtures;
pub mod permgrp;
pub mod ring;
pub mod solution;
pub mod structure_group;

pub use error::{Error, Result};
