//! Torus-equivariant K-theory of toric varieties via piecewise Laurent
//! polynomials.
//!
//! A rational polyhedral fan determines a toric variety; its equivariant
//! K-theory maps to the ring of integral piecewise Laurent polynomials on the
//! fan. This crate decides, for the fan classes where the answer is known,
//! whether that map is an isomorphism, and constructs the witnesses behind
//! each verdict: boundary preimages, extensions over smooth fans, span
//! indices, and odd K-group ranks.

pub mod classify;
pub mod cone;
pub mod fan;
pub mod fanfile;
pub mod ideal;
pub mod lattice;
pub mod laurent;
pub mod matrix;
pub mod piecewise;
pub mod plpfile;
pub mod ratlp;
pub mod registry;
pub mod report;
