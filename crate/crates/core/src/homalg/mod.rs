//! Bounded complexes over `ℤ`, its localizations, `ℤ/n` and local nilpotent
//! algebras `F_p[x₁,…,x_k]/(x₁^{e₁},…,x_k^{e_k})`.
//!
//! Modules are finitely presented: over the integral rings a term is a list
//! of blocks `coker(rel)`, each optionally tagged by extra inverted primes so
//! that stable Koszul complexes stay representable. Over a nilpotent algebra
//! a term is an `F_p`-vector space with commuting nilpotent actions.

pub mod arith;
mod cohomology;
mod complex;
mod fp;
mod hom;
mod koszul;
mod matrix;
mod module;
mod ring;

pub use cohomology::{cohomology, cohomology_all, is_acyclic};
pub use complex::{ChainComplex, ChainMap};
pub use fp::FpMatrix;
pub use hom::{hom_complex_h0, HomReport, HomVerdict};
pub use koszul::{
    derived_tensor_residue, invert_primes, koszul_sequence, koszul_stable, localize_complex, minimal_dims,
    reduce_mod,
};
pub(crate) use koszul::entry_primes;
pub use matrix::{check_snf, image_basis, kernel, smith_normal_form, solve_full_rank, Matrix, Snf};
pub use module::{
    weakly_associated, weakly_associated_form, AbelianForm, Block, ModuleBody, ModuleForm, NilForm, NilModule,
    PresentedModule,
};
pub use ring::{BaseRing, Prime, PrimeSet, RingElement, RingJson, MAX_NILPOTENT_DIM};
