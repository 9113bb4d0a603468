//! Exact computations around tight contact structures on lens spaces.
//!
//! * [`cfrac`]: negative continued fractions and Riemenschneider duality.
//! * [`lattice`]: linking matrices, the maximal embedding of the dual chain and
//!   its orthogonal complement.
//! * [`tight`]: rotation vectors, Euler classes, `c₁²` and `d₃`.
//! * [`slices`]: the basic-slice decomposition and its signs.
//! * [`covers`]: cyclic covers and whether structures lift tightly.
//! * [`fillings`]: constraints on minimal fillings.
//!
//! All integers are [`BigInt`](num_bigint::BigInt) and all rationals are exact.
//!
//! ```
//! use lenstight::tight::TightStructure;
//!
//! let xi = TightStructure::new(17, 7, vec![1, 0, 2].into())?;
//! assert_eq!(xi.euler_pd().residue, 11.into());
//! # Ok::<(), lenstight::Error>(())
//! ```

pub mod arith;
pub mod cfrac;
pub mod covers;
pub mod error;
pub mod fillings;
pub mod lattice;
pub mod matrix;
pub mod serde_big;
pub mod slices;
pub mod tight;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/cfrac.md")]
    mod cfrac {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/tight.md")]
    mod tight {}
    #[doc = include_str!("../../../book/src/slices.md")]
    mod slices {}
    #[doc = include_str!("../../../book/src/covers.md")]
    mod covers {}
    #[doc = include_str!("../../../book/src/fillings.md")]
    mod fillings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
