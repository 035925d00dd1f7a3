//! Finite loop theory toolkit.
//!
//! A *loop* is a set with a binary operation whose Cayley table is a Latin
//! square and which has a two-sided identity.  This crate works with finite
//! loops given by explicit tables and provides:
//!
//! - core structure theory: subloops, inner mappings, normality, centres,
//!   quotients, simplicity, isomorphism search ([`loops`]);
//! - equation satisfaction and *propagation* checking — does an identity,
//!   once satisfied by a tuple, hold on the whole subloop that tuple
//!   generates? ([`terms`]);
//! - subdirect products of loops, Goursat-style decomposition of subdirect
//!   products of two factors, and normality criteria inside products
//!   ([`subdirect`]);
//! - Steiner triple systems, their Steiner loops, Pasch configurations,
//!   orientations and the associated loop extensions ([`steiner`]);
//! - central extensions of loops by abelian groups via cocycle tables
//!   ([`extension`]);
//! - a catalog of built-in objects and plain-text file formats
//!   ([`catalog`], [`io`]).
//!
//! The `loopforge` binary exposes the same functionality as a small CLI; the
//! `examples/` directory walks through each capability in runnable form.
//!
//! ```
//! use loopforge::{catalog, terms};
//!
//! let f5 = catalog::builtin_loop("F5").unwrap();
//! let cube = terms::builtin_equation("cube").unwrap();
//! let report = terms::propagates(&cube, &f5).unwrap();
//! assert!(!report.propagates);
//! ```

pub mod catalog;
pub mod cli;
pub mod extension;
pub mod io;
pub mod loops;
pub mod steiner;
pub mod subdirect;
pub mod terms;

pub use extension::{central_extension, cyclic_group, elementary_abelian_2, Cocycle};
pub use loops::{chein_double, loops_isomorphic, Elem, FiniteLoop, LoopHom, Subloop};
pub use steiner::{OrientedSts, Sts};
pub use subdirect::{direct_product, ProductLoop, SubdirectProduct};
pub use terms::{parse_equation, Equation, PropagationReport, Term};
