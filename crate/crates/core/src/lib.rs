//! Exact paraunitary construction, matrix spectral factorization and
//! paraunitary completion over towers of quadratic number fields.

pub mod completion;
pub mod error;
pub mod expr;
pub mod field;
pub mod jl;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod ratfn;
pub mod spectral;
pub mod taylor;

pub use completion::{
    build_phi_row, cayley_completion, complete, default_max_degree, phi_row_conditions,
    solve_bezout, solve_corona, unitary_completion_constant, verify_unit_row, CompletionResult,
    CoronaSolution, UnitRow,
};
pub use error::{Error, Result};
pub use expr::{parse_descriptor, parse_element, parse_ratfn, Scope};
pub use field::{FieldDescriptor, FieldElement, FieldRef};
pub use jl::{
    build_column_system, construct_paraunitary, merge_poles, solve_system, JLSystem,
    ParaunitaryResult, PhiRow, UnknownLayout,
};
pub use matrix::{Certificate, Check, RatMatrix};
pub use poly::Poly;
pub use ratfn::{
    pf_to_ratfn, ratfn_to_pf, split_plus_minus, PartialFraction, PoleSpec, PoleTerm, RationalFn,
};
pub use spectral::{
    factorize, split_bottom_row, verify_against_s, FactorizationResult, TriangularFactor,
};
pub use taylor::{apply_transfer, series_power, transfer_matrix, TransferMatrix};
