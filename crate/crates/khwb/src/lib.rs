//! Computation workbench for Khovanov homology of Dehn-surgery branch sets.
//!
//! The crate constructs two families of link diagrams — torus knots and
//! rational-tangle closures of the cinqfoil quotient tangle — and computes
//! their reduced Khovanov homology ranks over the two-element field, together
//! with the classical invariants (Goeritz determinants, Kauffman bracket)
//! used to cross-check the homological computations.

pub mod diagram;
pub mod kh;
pub mod generators;
pub mod gf2;
pub mod laurent;
pub mod tangle;

pub use diagram::{parse_pd, Crossing, Diagram, DiagramError};
pub use generators::{braid_closure, seifert_branch_set, torus_knot};
pub use tangle::{attach_rational, continued_fraction, rational_tangle, Slope, TangleTemplate};
