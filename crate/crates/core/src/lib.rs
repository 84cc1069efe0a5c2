//! Exact-arithmetic models of a family of affine crystals, the matching
//! birational torus actions, and the piecewise-linear structures connecting
//! them.
//!
//! The crate has three layers:
//!
//! * combinatorial crystals on two-row arrays ([`pcrystal`]) and their
//!   integer-lattice counterpart ([`udiso`]);
//! * birational torus actions on two rational charts ([`geom`]), built from
//!   the module-level word products in [`fundrep`];
//! * a subtraction-free expression type with a mechanical max-plus rewrite
//!   ([`expr`]) that transports the rational closed forms onto the lattice.
//!
//! All arithmetic is exact (arbitrary-precision rationals or machine
//! integers); every identity the crate claims is checked by its test suites
//! at equality, never within a tolerance.

pub mod cartan;
pub mod error;
pub mod expr;
pub mod fundrep;
pub mod geom;
pub mod pcrystal;
pub mod scalar;
pub mod udiso;

pub use cartan::CartanData;
pub use error::{Error, Result};
pub use expr::{eval_pos, eval_trop, tropicalize, Bindings, PosExpr, TropExpr, Var};
pub use fundrep::{BasisLabel, FundVector};
pub use geom::{CatalogTarget, GeomReport, Suite, TorusPoint};
pub use pcrystal::{CrystalElt, CrystalGraph, Level, PerfectReport};
pub use udiso::{LatticePoint, Region, UdReport};
pub use scalar::Scalar;
