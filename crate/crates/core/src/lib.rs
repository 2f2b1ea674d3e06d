//! A kernel for equivariant cartesian cubical type theory together with a
//! finite combinatorics lab for the cartesian cube category.
//!
//! The kernel pipeline is [`parse`] → [`check`] (bidirectional checking) →
//! [`eval`] / [`quote`] (normalization by evaluation). The `k`-dimensional
//! composition operator lives in [`kan`]; conversion of stuck compositions is
//! decided modulo the action of the symmetric group on their directions.
//!
//! [`cubelab`] works with the cube category directly: cube maps as bipointed
//! function tables, truncated cubical sets, quotients by axis permutations,
//! Eilenberg–Zilber factorization, triangulation and bounded lifting checks.

pub mod check;
pub mod cli;
pub mod cof;
pub mod cubelab;
pub mod domain;
pub mod eval;
pub mod kan;
pub mod parse;
pub mod print;
pub mod quote;
pub mod syntax;

pub use check::{check_module, Diagnostic, DiagnosticCode, ModuleReport};
pub use cli::Config;
pub use parse::{parse_module, parse_term, ParseError};
pub use syntax::{alpha_eq, Cof, Decl, Dim, Term};
