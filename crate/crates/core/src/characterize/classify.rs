//! Run every applicable route and the oracle, and insist that they agree.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::oracle::{oracle, weighted_conflict};
use super::{
    check_dbrg_diametral, check_drg_diametral, cospectral_girth_dbrg, halved_route_dbrg, pseudo_dr_set,
    pseudo_dr_vertex, spectral_excess_dbrg, spectral_excess_drg, ExcessReport, Route, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::graph::{bipartition, distance_data, semiregular_profile, Bipartition, DistanceData, Graph, Side};
use crate::spectral::{decompose, perron, PerronVector, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Classification {
    Drg,
    Dbrg,
    Both,
    Neither,
}

impl Classification {
    pub fn from_flags(drg: bool, dbrg: bool) -> Self {
        match (drg, dbrg) {
            (true, true) => Classification::Both,
            (true, false) => Classification::Drg,
            (false, true) => Classification::Dbrg,
            (false, false) => Classification::Neither,
        }
    }

    pub fn is_drg(self) -> bool {
        matches!(self, Classification::Drg | Classification::Both)
    }

    pub fn is_dbrg(self) -> bool {
        matches!(self, Classification::Dbrg | Classification::Both)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Drg => "DRG",
            Classification::Dbrg => "DBRG",
            Classification::Both => "BOTH",
            Classification::Neither => "NEITHER",
        })
    }
}

/// What the combinatorial oracle found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub drg: bool,
    pub dbrg: bool,
    /// Plain neighbour counts constant on every sphere around the vertex.
    pub locally_regular: Vec<bool>,
    /// Same with Perron-weighted counts.
    pub weighted_locally_regular: Vec<bool>,
    pub first_conflict: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub classification: Classification,
    pub oracle: OracleSummary,
    pub verdicts: Vec<Verdict>,
    pub excess_drg: Option<ExcessReport>,
    pub excess_dbrg: Option<ExcessReport>,
    pub excess_girth: Option<ExcessReport>,
}

impl ClassifyReport {
    pub fn verdict(&self, route: Route) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.theorem == route)
    }
}

struct Context<'a> {
    g: &'a Graph,
    dec: SpectralDecomposition,
    dd: DistanceData,
    perron: PerronVector,
    part: Option<Bipartition>,
    profile: Option<(usize, usize)>,
    summary: OracleSummary,
    tol: f64,
}

impl Context<'_> {
    /// An applicable verdict must agree with the oracle.
    fn agree(&self, v: &Verdict, expected: bool, property: &str) -> Result<()> {
        if v.applicable() && v.passed() != expected {
            return Err(self.disagreement(v, expected, property));
        }
        Ok(())
    }

    fn disagreement(&self, v: &Verdict, expected: bool, property: &str) -> Error {
        let oracle = match &self.summary.first_conflict {
            Some(w) => format!("oracle says {expected}, first conflict {w:?}"),
            None => format!("oracle says {expected}"),
        };
        Error::RouteDisagreement {
            property: property.to_string(),
            detail: format!("{} on {}: {}; {oracle}; verdict {v:?}", v.theorem, v.subject, v.outcome),
        }
    }

    fn set_verdict(&self, members: &[usize], subject: &str) -> Result<Verdict> {
        match pseudo_dr_set(&self.dec, &self.perron, &self.dd, members, subject, self.tol) {
            Err(Error::UnequalEccentricities { u, ecc_u, v, ecc_v }) => Ok(Verdict::fail(
                Route::PseudoSet,
                subject,
                self.tol,
                None,
                Witness::Hypothesis {
                    detail: format!("eccentricity {ecc_u} at {u} but {ecc_v} at {v}"),
                },
            )),
            other => other,
        }
    }
}

/// Classifies `g` with the oracle and cross-checks every spectral route that
/// applies. Any applicable route contradicting the oracle is
/// [`Error::RouteDisagreement`]; a bipartite semiregular graph with odd
/// diameter, `d + 1` eigenvalues and unequal side degrees is
/// [`Error::InvariantViolation`].
pub fn classify(g: &Graph, tol: f64) -> Result<ClassifyReport> {
    let dec = decompose(g, tol)?;
    let dd = distance_data(g);
    let perron = perron(g, &dec)?;
    let part = bipartition(g).ok();
    let profile = part.as_ref().and_then(|p| semiregular_profile(g, p).ok());
    let report = oracle(g, &dd, part.as_ref());
    let weighted: Vec<Option<Witness>> = (0..g.n())
        .map(|u| weighted_conflict(g, &dd, &perron, u, tol))
        .collect();
    let summary = OracleSummary {
        drg: report.drg,
        dbrg: report.dbrg,
        locally_regular: report.local.iter().map(|r| r.is_ok()).collect(),
        weighted_locally_regular: weighted.iter().map(|w| w.is_none()).collect(),
        first_conflict: report.first_conflict().map(Witness::from),
    };
    let cx = Context {
        g,
        dec,
        dd,
        perron,
        part,
        profile,
        summary,
        tol,
    };
    let (drg, dbrg) = (cx.summary.drg, cx.summary.dbrg);
    let mut verdicts = Vec::new();
    let mut out = ClassifyReport {
        classification: Classification::from_flags(drg, dbrg),
        oracle: cx.summary.clone(),
        verdicts: Vec::new(),
        excess_drg: None,
        excess_dbrg: None,
        excess_girth: None,
    };

    // Vertex level: extremal with the bound attained iff weighted counts are
    // constant on spheres.
    for u in 0..g.n() {
        let v = pseudo_dr_vertex(&cx.dec, &cx.perron, &cx.dd, u, tol)?;
        cx.agree(&v, cx.summary.weighted_locally_regular[u], "pseudo-distance-regular vertex")?;
        verdicts.push(v);
    }

    let diametral = check_drg_diametral(g, &cx.dec, &cx.dd, tol);
    cx.agree(&diametral, drg, "distance-regular")?;
    verdicts.push(diametral);
    if g.regular_degree().is_some() {
        let all: Vec<usize> = (0..g.n()).collect();
        let v = cx.set_verdict(&all, "V")?;
        cx.agree(&v, drg, "distance-regular")?;
        verdicts.push(v);
        let (v, excess) = spectral_excess_drg(g, &cx.dec, &cx.dd, tol)?;
        cx.agree(&v, drg, "distance-regular")?;
        verdicts.push(v);
        out.excess_drg = Some(excess);
    }

    if let Some(part) = &cx.part {
        let v = check_dbrg_diametral(g, &cx.dec, &cx.dd, part, tol);
        cx.agree(&v, dbrg, "distance-biregular")?;
        verdicts.push(v);
    }
    // A single vertex has nothing on side C; the side-wise routes need both.
    if let (Some(part), Some((k, ell)), true) = (&cx.part, cx.profile, g.n() > 1) {
        dbrg_routes(&cx, part, (k, ell), &mut verdicts, &mut out)?;
    }
    out.verdicts = verdicts;
    Ok(out)
}

fn dbrg_routes(
    cx: &Context<'_>,
    part: &Bipartition,
    (k, ell): (usize, usize),
    verdicts: &mut Vec<Verdict>,
    out: &mut ClassifyReport,
) -> Result<()> {
    let (g, tol, dbrg) = (cx.g, cx.tol, cx.summary.dbrg);
    let d = cx.dd.diameter();
    let has_count = cx.dec.len() == d + 1;
    if has_count && d % 2 == 1 && k != ell {
        return Err(Error::InvariantViolation(format!(
            "semiregular bipartite graph with odd diameter {d} and {} eigenvalues has side degrees {k} and {ell}",
            cx.dec.len()
        )));
    }

    let sides = [
        cx.set_verdict(part.members(Side::B), "B")?,
        cx.set_verdict(part.members(Side::C), "C")?,
    ];
    let both = sides.iter().all(Verdict::passed);
    if both != dbrg {
        let culprit = sides.iter().find(|v| !v.passed()).unwrap_or(&sides[0]);
        return Err(cx.disagreement(culprit, dbrg, "distance-biregular"));
    }
    verdicts.extend(sides);

    match spectral_excess_dbrg(g, &cx.dec, &cx.dd, part, tol) {
        Ok((v, excess)) => {
            cx.agree(&v, dbrg, "distance-biregular")?;
            verdicts.push(v);
            out.excess_dbrg = Some(excess);
        }
        Err(Error::EigenvalueCountMismatch { eigenvalues, diameter }) => {
            let v = Verdict::not_applicable(
                Route::SpectralExcessDbrg,
                "B,C",
                tol,
                format!("{eigenvalues} distinct eigenvalues with diameter {diameter}"),
            );
            if dbrg {
                return Err(cx.disagreement(&v, dbrg, "distance-biregular"));
            }
            verdicts.push(v);
        }
        Err(e) => return Err(e),
    }

    let halved = halved_route_dbrg(g, tol)?;
    cx.agree(&halved.verdict, dbrg, "distance-biregular")?;
    verdicts.push(halved.verdict);

    match cospectral_girth_dbrg(g, tol) {
        Ok((v, excess)) => {
            cx.agree(&v, dbrg, "distance-biregular")?;
            verdicts.push(v);
            out.excess_girth = Some(excess);
        }
        Err(e @ (Error::GirthTooSmall { .. } | Error::EigenvalueCountMismatch { .. })) => {
            verdicts.push(Verdict::not_applicable(Route::CospectralGirthDbrg, "B,C", tol, e.to_string()));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}
