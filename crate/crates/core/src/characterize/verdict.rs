use std::fmt;

use serde::{Deserialize, Serialize};

use crate::orthopoly::Poly;

/// Which characterization produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Local adjacency polynomial reaches the Perron bound at one vertex.
    PseudoVertex,
    /// Same, for the averaged measure of a vertex set.
    PseudoSet,
    /// `A_d` is a polynomial in `A`.
    DrgDiametral,
    /// `A_d` restricted to each side is a polynomial in `A`.
    DbrgDiametral,
    /// Every vertex has `p_d(λ)` vertices at distance `d`.
    SpectralExcessDrg,
    /// Side-resolved spectral excess.
    SpectralExcessDbrg,
    /// Both halved graphs distance-regular with matching spectra.
    HalvedDbrg,
    /// Excess predicted from the spectrum and a large girth.
    CospectralGirthDbrg,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::PseudoVertex => "pseudo_vertex",
            Route::PseudoSet => "pseudo_set",
            Route::DrgDiametral => "drg_diametral",
            Route::DbrgDiametral => "dbrg_diametral",
            Route::SpectralExcessDrg => "spectral_excess_drg",
            Route::SpectralExcessDbrg => "spectral_excess_dbrg",
            Route::HalvedDbrg => "halved_dbrg",
            Route::CospectralGirthDbrg => "cospectral_girth_dbrg",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPoly {
    pub name: String,
    pub coeffs: Vec<f64>,
}

impl NamedPoly {
    pub fn new(name: &str, p: &Poly) -> Self {
        NamedPoly {
            name: name.to_string(),
            coeffs: p.coeffs().to_vec(),
        }
    }
}

/// Finite evidence behind a FAIL or NOT_APPLICABLE verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Number of distinct eigenvalues is not diameter + 1.
    EigenvalueCount { eigenvalues: usize, diameter: usize },
    /// Largest deviation of a matrix identity.
    Entry {
        row: usize,
        col: usize,
        expected: f64,
        actual: f64,
    },
    /// Eigenvalue support of a vertex (or set) has the wrong size.
    SupportSize {
        vertex: Option<usize>,
        support: usize,
        eccentricity: usize,
    },
    /// Local adjacency polynomial value short of its bound.
    Bound {
        vertex: Option<usize>,
        value: f64,
        bound: f64,
    },
    /// Vertex whose count at maximal distance differs from the prediction.
    Excess {
        vertex: usize,
        actual: usize,
        predicted: f64,
    },
    /// Two vertices at the same distance from `root` with different
    /// neighbour counts `[closer, level, farther]`.
    Conflict {
        root: usize,
        distance: usize,
        first: usize,
        first_counts: [f64; 3],
        second: usize,
        second_counts: [f64; 3],
    },
    /// A hypothesis of the route does not hold.
    Hypothesis { detail: String },
}

/// Outcome of one route on one subject (a vertex, a side, or the graph).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub theorem: Route,
    pub subject: String,
    pub outcome: Outcome,
    /// Route-specific deviation measure; see each route.
    pub residual: Option<f64>,
    pub tol: f64,
    pub certificate: Vec<NamedPoly>,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn pass(theorem: Route, subject: &str, tol: f64, residual: Option<f64>, certificate: Vec<NamedPoly>) -> Self {
        Verdict {
            theorem,
            subject: subject.to_string(),
            outcome: Outcome::Pass,
            residual,
            tol,
            certificate,
            witness: None,
            note: None,
        }
    }

    pub fn fail(theorem: Route, subject: &str, tol: f64, residual: Option<f64>, witness: Witness) -> Self {
        Verdict {
            theorem,
            subject: subject.to_string(),
            outcome: Outcome::Fail,
            residual,
            tol,
            certificate: Vec::new(),
            witness: Some(witness),
            note: None,
        }
    }

    pub fn not_applicable(theorem: Route, subject: &str, tol: f64, detail: String) -> Self {
        Verdict {
            theorem,
            subject: subject.to_string(),
            outcome: Outcome::NotApplicable,
            residual: None,
            tol,
            certificate: Vec::new(),
            witness: Some(Witness::Hypothesis { detail }),
            note: None,
        }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn applicable(&self) -> bool {
        self.outcome != Outcome::NotApplicable
    }
}
