//! Finite combinatorics of cartesian cubes: hom-sets, factorizations,
//! truncated presheaves, triangulation and bounded lifting checks.
//!
//! Every answer about an infinite object is computed on its truncation to
//! dimensions `0..=D` and is reported as a bounded certificate.

pub mod cube;
pub mod lifting;
pub mod presheaf;
pub mod simplex;

use thiserror::Error;

pub use cube::{
    automorphisms, enumerate_hom, ez_factor, find_section, is_cancellable, Coord, CubeMap, EzFactorization, GroupAction,
};
pub use presheaf::{iso_search, Arrow, FinCat, IsoOutcome, Presheaf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} exceeds the supported bound {bound}")]
    BoundExceeded { what: String, bound: usize },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error("not a functor: {0}")]
    NotFunctorial(String),
    #[error("truncation levels differ: {0} and {1}")]
    TruncationMismatch(usize, usize),
}

pub use simplex::{dualize, simplex_power, standard_simplex, triangulate, CubicalSet, SimplexMap, SimplicialSet};

/// The representable cubical set `I^n` truncated at `dmax`, together with
/// the cube map underlying each cell.
pub fn representable(n: usize, dmax: usize) -> (CubicalSet, Vec<Vec<CubeMap>>) {
    Presheaf::representable(FinCat::new(dmax), n)
}

/// The action of axis permutations on the cells of `I^n` by postcomposition.
pub fn permutation_action(cells: &[Vec<CubeMap>], group: &GroupAction) -> Vec<Vec<Vec<usize>>> {
    group
        .elements
        .iter()
        .map(|p| {
            let s = CubeMap::from_permutation(p);
            cells.iter().map(|lv| lv.iter().map(|c| cube::hom_index(&s.after(c))).collect()).collect()
        })
        .collect()
}

/// `I^n / H` truncated at `dmax`.
pub fn cube_quotient(n: usize, group: &GroupAction, dmax: usize) -> Result<CubicalSet, LabError> {
    if group.n != n {
        return Err(LabError::DimensionMismatch { expected: n, found: group.n });
    }
    let (x, cells) = representable(n, dmax);
    Ok(x.quotient(&permutation_action(&cells, group))?.0)
}
