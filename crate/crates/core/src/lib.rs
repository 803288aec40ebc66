//! Exact piecewise-linear homeomorphisms of `[0, 1]` and the generalized
//! Thompson groups F(N) they generate.
//!
//! All arithmetic is over arbitrary-precision rationals. Words act as
//! composition with the rightmost letter applied first; see
//! [`pl::WORD_ORDER`].

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graphing;
pub mod pl;
pub mod rational;
pub mod words;

pub use error::{Error, Result};
pub use pl::{MembershipCertificate, PLMap, PartialPLMap};
pub use rational::Rational;
pub use words::{Alphabet, GenWord, Letter};
