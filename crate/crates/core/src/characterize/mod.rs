//! Decision procedures for distance-regularity and distance-biregularity.
//!
//! Each spectral route returns a [`Verdict`]; the combinatorial oracle in
//! [`oracle`] counts neighbours directly. [`classify`] runs everything that
//! applies and fails with [`Error::RouteDisagreement`](crate::Error) when a
//! route contradicts the oracle.

mod classify;
mod diametral;
mod excess;
mod girth;
mod halved;
pub mod oracle;
mod pseudo;
mod verdict;

pub use classify::{classify, Classification, ClassifyReport, OracleSummary};
pub use diametral::{check_dbrg_diametral, check_drg_diametral};
pub use excess::{spectral_excess_dbrg, spectral_excess_drg, ExcessReport};
pub use girth::{cospectral_girth_dbrg, predicted_excess};
pub use halved::{halved_route_dbrg, HalvedRoute};
pub use oracle::{locally_distance_regular, Conflict, Intersection, IntersectionNumbers};
pub use pseudo::{pseudo_dr_set, pseudo_dr_vertex};
pub use verdict::{NamedPoly, Outcome, Route, Verdict, Witness};

/// `value` is within `tol · max(1, |value|)` of the integer `actual`.
pub(crate) fn matches_count(actual: usize, value: f64, tol: f64) -> bool {
    let rounded = value.round();
    (value - rounded).abs() <= tol * value.abs().max(1.0) && rounded == actual as f64
}
