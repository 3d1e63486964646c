//! Support theory at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`poset`] – finite partial orders, the substrate for everything else.
//! * [`spectral`] – finite posets read as finite spectral spaces (Thomason
//!   sets, Hochster duality, Skula topology, Cantor–Bendixson rank).
//! * [`frames`] – finite frames, points, nuclei, the assembly and the
//!   comparison map into the Skula frame.
//! * [`homalg`] – exact homological algebra over a handful of concrete
//!   commutative rings (Smith normal form, presented modules, complexes,
//!   stable Koszul complexes, derived Hom).
//! * [`support`] – small support, big support, Foxby support and the
//!   property batteries built on top of them.
//! * [`axioms`] – abstract support data and the factorisation through the
//!   localising topology.
//! * [`suite`] – the seeded acceptance battery shared by the CLI and tests.

pub mod axioms;
pub mod bits;
pub mod frames;
pub mod homalg;
pub mod poset;
pub mod spectral;
pub mod suite;
pub mod support;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),
    /// A configured size bound was exceeded.
    #[error("bound `{bound}` exceeded: limit {limit}, required {required}")]
    Bound {
        bound: &'static str,
        limit: usize,
        required: usize,
    },
    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
