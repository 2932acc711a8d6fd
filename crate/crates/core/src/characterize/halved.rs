//! Distance-biregularity through the two halved graphs.

use serde::Serialize;

use super::{check_dbrg_diametral, check_drg_diametral, Route, Verdict, Witness};
use crate::error::{Error, Result};
use crate::graph::{bipartition, distance_data, halved_graphs, semiregular_profile, Graph, HalvedPair};
use crate::spectral::{decompose, SpectralDecomposition};

/// Halved graphs plus the route verdict and the diametral verdicts of each
/// half.
#[derive(Debug, Clone)]
pub struct HalvedRoute {
    pub verdict: Verdict,
    pub pair: HalvedPair,
    pub half_b: Verdict,
    pub half_c: Verdict,
    pub spectrum_b: Vec<(f64, usize)>,
    pub spectrum_c: Vec<(f64, usize)>,
    pub degrees: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
struct Correspondence {
    residual: f64,
    detail: Option<String>,
}

fn expanded(dec: &SpectralDecomposition, scale: f64, shift: f64) -> Vec<f64> {
    dec.eigs()
        .iter()
        .zip(dec.mult())
        .flat_map(|(&t, &m)| std::iter::repeat_n(scale * t + shift, m))
        .collect()
}

/// `{rθ + k} = {sτ + ℓ} ∪ {0^{|B|−|C|}}` as multisets, and the square roots
/// `±√(rθ + k)` give exactly the distinct eigenvalues of `G`.
fn correspondence(
    g_dec: &SpectralDecomposition,
    dec_b: &SpectralDecomposition,
    dec_c: &SpectralDecomposition,
    (r, s): (f64, f64),
    (k, ell): (f64, f64),
    tol: f64,
) -> Correspondence {
    let mut left = expanded(dec_b, r, k);
    let mut right = expanded(dec_c, s, ell);
    right.extend(std::iter::repeat_n(0.0, left.len().saturating_sub(right.len())));
    let by_value = |a: &f64, b: &f64| b.total_cmp(a);
    left.sort_by(by_value);
    right.sort_by(by_value);
    if left.len() != right.len() {
        return Correspondence {
            residual: f64::INFINITY,
            detail: Some(format!("{} values against {}", left.len(), right.len())),
        };
    }
    let scale = left.iter().chain(&right).fold(1.0_f64, |m, x| m.max(x.abs()));
    let mut residual = left
        .iter()
        .zip(&right)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if residual > tol * scale {
        return Correspondence {
            residual,
            detail: Some("halved spectra do not correspond".into()),
        };
    }
    let mut roots: Vec<f64> = left
        .iter()
        .flat_map(|&x| {
            let root = if x.abs() <= tol * scale { 0.0 } else { x.max(0.0).sqrt() };
            [root, -root]
        })
        .collect();
    roots.sort_by(by_value);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol * scale);
    if roots.len() != g_dec.len() {
        return Correspondence {
            residual: f64::INFINITY,
            detail: Some(format!(
                "{} square roots against {} distinct eigenvalues",
                roots.len(),
                g_dec.len()
            )),
        };
    }
    for (a, b) in roots.iter().zip(g_dec.eigs()) {
        residual = residual.max((a - b).abs());
    }
    let detail = (residual > tol * scale).then(|| "square roots miss the spectrum".to_string());
    Correspondence { residual, detail }
}

/// Semiregular bipartite graphs with side degrees `k < ℓ`; `k = ℓ` gives
/// NOT_APPLICABLE. PASS iff both halved graphs pass
/// [`check_drg_diametral`], the constants `r`, `s` of the halved relation
/// exist, and the spectra correspond. A PASS is cross-checked against
/// [`check_dbrg_diametral`] on `G`; disagreement is
/// [`Error::RouteDisagreement`]. The residual is the correspondence
/// deviation.
pub fn halved_route_dbrg(g: &Graph, tol: f64) -> Result<HalvedRoute> {
    let part = bipartition(g)?;
    let (k, ell) = semiregular_profile(g, &part)?;
    let pair = halved_graphs(g, &part)?;
    let dec_b = decompose(&pair.h_b, tol)?;
    let dec_c = decompose(&pair.h_c, tol)?;
    let half_b = check_drg_diametral(&pair.h_b, &dec_b, &distance_data(&pair.h_b), tol);
    let half_c = check_drg_diametral(&pair.h_c, &dec_c, &distance_data(&pair.h_c), tol);
    let spectrum = |d: &SpectralDecomposition| d.eigs().iter().copied().zip(d.mult().iter().copied()).collect();
    let mut out = HalvedRoute {
        verdict: Verdict::not_applicable(Route::HalvedDbrg, "B,C", tol, String::new()),
        spectrum_b: spectrum(&dec_b),
        spectrum_c: spectrum(&dec_c),
        pair,
        half_b,
        half_c,
        degrees: (k, ell),
    };
    let route = Route::HalvedDbrg;
    if k == ell {
        out.verdict = Verdict::not_applicable(
            route,
            "B,C",
            tol,
            format!("side degrees are equal (k = ℓ = {k})"),
        );
        return Ok(out);
    }
    let fail = |detail: String, residual: Option<f64>| {
        Verdict::fail(route, "B,C", tol, residual, Witness::Hypothesis { detail })
    };
    if !out.half_b.passed() || !out.half_c.passed() {
        let which = if out.half_b.passed() { "C" } else { "B" };
        out.verdict = fail(format!("halved graph on {which} is not distance-regular"), None);
        return Ok(out);
    }
    let (Some(r), Some(s)) = (out.pair.r, out.pair.s) else {
        out.verdict = fail("no constant common-neighbour count on one side".into(), None);
        return Ok(out);
    };
    let g_dec = decompose(g, tol)?;
    let corr = correspondence(&g_dec, &dec_b, &dec_c, (r as f64, s as f64), (k as f64, ell as f64), tol);
    if let Some(detail) = corr.detail {
        out.verdict = fail(detail, Some(corr.residual));
        return Ok(out);
    }
    let cross = check_dbrg_diametral(g, &g_dec, &distance_data(g), &part, tol);
    if !cross.passed() {
        return Err(Error::RouteDisagreement {
            property: "distance-biregular".into(),
            detail: format!("halved route passed but the side-diametral check did not: {cross:?}"),
        });
    }
    out.verdict = Verdict::pass(route, "B,C", tol, Some(corr.residual), vec![]);
    Ok(out)
}
