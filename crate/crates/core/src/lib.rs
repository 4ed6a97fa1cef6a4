//! Finite bikei (involutory biquandles), their homology and cohomology with
//! the bikei degenerate subcomplex, and 2-cocycle enhanced counting
//! invariants of unoriented links and marked-vertex surface diagrams.
//!
//! Modules:
//! - [`algebra`]: bikei tables, axiom checking, constructors, enumeration,
//!   homomorphisms and isomorphism classing,
//! - [`intlinalg`]: exact integer linear algebra (Smith normal form, lattice
//!   quotients, solving modulo N),
//! - [`complex`]: the birack chain complex and the degenerate subgroups,
//! - [`homology`]: bikei homology/cohomology and 2-cocycles,
//! - [`diagram`]: semiarc diagrams of links and marked-vertex surfaces,
//!   plus Reidemeister rewrites,
//! - [`invariant`]: colorings, Boltzmann weights, and the counting and
//!   cocycle-enhanced invariants.

pub mod algebra;
pub mod complex;
pub mod diagram;
pub mod homology;
pub mod intlinalg;
pub mod invariant;
