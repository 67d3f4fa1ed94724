//! Toolkit for mutually unbiased bases (MUBs) and symmetric informationally
//! complete POVMs (SICs) in small complex dimensions.
//!
//! The crate works in two equivalent pictures and keeps both first-class:
//!
//! * the **state picture**, where a candidate is a family of unit vectors in
//!   `C^d` and the quantities of interest are overlap moduli between states;
//! * the **Bloch picture**, where each state is lifted to the `d^2` entries of
//!   its rank-1 projector and the same quantities become real inner products
//!   between lifted vectors.
//!
//! [`mub`] and [`sic`] construct and verify the two kinds of structures in the
//! state picture, [`bloch`] implements the lift, its inverse, and the lifted
//! verifier, and [`search`] minimizes a penalty objective over either picture
//! with a multi-restart gradient descent. [`linalg`] provides the small dense
//! complex vectors and matrices everything else is built on.

pub mod bloch;
pub mod error;
pub mod linalg;
pub mod mub;
pub mod report;
pub mod search;
pub mod sic;

pub use error::{Error, Result};
pub use num_complex::Complex64;
