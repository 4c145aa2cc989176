//! Inhomogeneous supersymmetric bilinear forms: invariants, classification
//! of the coupling block under `O(k) × Sp(2l)`, and the oscillator
//! superalgebras they define.

pub mod error;
pub mod fock;
pub mod format;
pub mod group;
pub mod invariants;
pub mod matrix;
pub mod reduction;
pub mod scalar;
pub mod superalgebra;
pub mod superspace;
pub mod uea;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{ApproxContext, ApproxScalar, ExactScalar, Scalar};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/oscillator.md")]
    mod oscillator {}
    #[doc = include_str!("../../../book/src/osp.md")]
    mod osp {}
    #[doc = include_str!("../../../book/src/fock.md")]
    mod fock {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
