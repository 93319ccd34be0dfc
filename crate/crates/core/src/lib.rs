//! Certified binary digits of real algebraic numbers.
//!
//! The main pipeline takes a fixed integer polynomial, strips its rational
//! and repeated roots, isolates every remaining real root in a good interval
//! (exactly one root of `p`, none of `p'` or `p''`), shrinks that interval
//! until Newton-Raphson provably converges quadratically, and then iterates
//! Newton-Raphson in exact rational arithmetic until a Liouville-type gap
//! certifies the requested bit.
//!
//! Alongside it live the auxiliary constructions built from the same parts:
//! BBP-style series digit extraction for pi ([`series`]), bit extraction from
//! ratios of straight-line programs ([`succinct`]), and the mod-p rational
//! digit gadget ([`gadget`]). The [`oracle`] module is an independent
//! bisection engine used to cross-check everything else.

pub mod bits;
pub mod error;
pub mod gadget;
pub mod isolate;
pub mod newton;
pub mod oracle;
pub mod poly;
pub mod prep;
pub mod rat;
pub mod series;
pub mod succinct;

pub use bits::{LiouvilleCert, RootHandle};
pub use error::{Error, Result};
pub use isolate::{ConvergenceCert, GoodInterval, RealRoot};
pub use poly::IntPoly;
pub use rat::{BigRat, RatInterval};
