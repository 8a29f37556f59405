//! Quadratic Dirichlet L-functions attached to hyperelliptic curves
//! y^2 = D(x) over a fixed odd finite field F_q, computed exactly, together
//! with numerical evaluators for the conjectured moment polynomials, ratios
//! formulas and the one-level density of their zeros.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`], [`poly`], [`factor`], [`enumeration`], [`extfield`] — exact
//!   arithmetic in F_q[x] and its extensions;
//! * [`charsym`] — quadratic residue and Jacobi symbols, the character chi_D;
//! * [`ensemble`] — the probability space of monic square-free D;
//! * [`lfun`] — the L-polynomial by two independent algorithms, functional
//!   equation, central values and zeros on the Weil circle;
//! * [`eulerfact`] — degree-indexed truncated Euler products;
//! * [`moments`], [`ratios`], [`density`] — the conjectural formulas and
//!   their empirical counterparts;
//! * [`sweep`] — persisted per-D sweep records (CSV cache).

pub mod charsym;
pub mod density;
pub mod ensemble;
pub mod enumeration;
pub mod error;
pub mod eulerfact;
pub mod extfield;
pub mod factor;
pub mod field;
pub mod lfun;
pub mod moments;
pub mod poly;
pub mod ratios;
pub mod sweep;

pub use error::{Error, Result};
pub use field::FieldCtx;
pub use poly::PolyFq;
