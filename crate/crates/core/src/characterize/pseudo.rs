//! Local adjacency polynomials against the Perron bound, at a vertex and on
//! a vertex set.

use super::{NamedPoly, Route, Verdict, Witness};
use crate::error::{Error, Result};
use crate::graph::DistanceData;
use crate::orthopoly::{adjacency_polynomial_of, excess_bound, orthonormal_sequence, Poly};
use crate::spectral::{eigenvalue_support, local_measure, PerronVector, Scope, SpectralDecomposition};

/// PASS iff `|Φ_u| = e + 1` and `Q_{e−1}(λ)` equals the Perron bound on
/// `N_{e−1}(u)` within `tol` (relative). The residual is the relative gap
/// `(bound − Q_{e−1}(λ)) / bound`.
///
/// On PASS the degree-`e` polynomial `p_e = q_e − Q_{e−1}(λ) Q_{e−1}` is
/// built, where `q_e` is `1/v_u²` at `λ` and vanishes on the rest of `Φ_u`.
/// `p_e(A) e_u` must be `v_v / v_u` on the sphere of radius `e` and zero
/// elsewhere; otherwise [`Error::SupportMismatch`] is returned.
pub fn pseudo_dr_vertex(
    dec: &SpectralDecomposition,
    perron: &PerronVector,
    dd: &DistanceData,
    u: usize,
    tol: f64,
) -> Result<Verdict> {
    let subject = format!("vertex {u}");
    let e = dd.ecc(u);
    let support = eigenvalue_support(dec, u, tol);
    if support.len() != e + 1 {
        return Ok(Verdict::fail(
            Route::PseudoVertex,
            &subject,
            tol,
            None,
            Witness::SupportSize {
                vertex: Some(u),
                support: support.len(),
                eccentricity: e,
            },
        ));
    }
    if e == 0 {
        return Ok(Verdict::pass(Route::PseudoVertex, &subject, tol, Some(0.0), vec![]));
    }
    let measure = local_measure(dec, &Scope::Vertex(u));
    let seq = orthonormal_sequence(&measure)?;
    let (q, value) = adjacency_polynomial_of(&seq, e - 1);
    let bound = excess_bound(perron, dd, u, e - 1);
    let gap = (bound - value) / bound;
    if gap.abs() > tol {
        return Ok(Verdict::fail(
            Route::PseudoVertex,
            &subject,
            tol,
            Some(gap),
            Witness::Bound {
                vertex: Some(u),
                value,
                bound,
            },
        ));
    }

    let vu = perron.at(u);
    let mut values = vec![0.0; dec.len()];
    for &r in &support {
        let top = if r == 0 { 1.0 / (vu * vu) } else { 0.0 };
        values[r] = top - value * q.eval(dec.eigs()[r]);
    }
    let column = dec.apply_values(&values, &[u]);
    let sphere = dd.row(u);
    let expected = |v: usize| if sphere[v] == e { perron.at(v) / vu } else { 0.0 };
    let scale = (0..dd.n()).map(expected).fold(1.0_f64, f64::max);
    for v in 0..dd.n() {
        let got = column[(v, 0)];
        if (got - expected(v)).abs() > tol.sqrt() * scale {
            return Err(Error::SupportMismatch {
                vertex: v,
                detail: format!(
                    "degree-{e} certificate at root {u} is {got:e}, expected {:e}",
                    expected(v)
                ),
            });
        }
    }

    let lambda = dec.lambda();
    let others: Vec<f64> = support.iter().filter(|&&r| r != 0).map(|&r| dec.eigs()[r]).collect();
    let denom: f64 = others.iter().map(|t| lambda - t).product();
    let q_top = Poly::from_roots(&others).scale(1.0 / (vu * vu * denom));
    let p_e = q_top.sub(&q.scale(value));
    Ok(Verdict::pass(
        Route::PseudoVertex,
        &subject,
        tol,
        Some(gap),
        vec![NamedPoly::new("Q_{e-1}", &q), NamedPoly::new("p_e", &p_e)],
    ))
}

/// Set version over `S` (all of one eccentricity `e`): PASS iff `|Φ_S| = e + 1`
/// and `Q^S_{e−1}(λ)` equals the quadratic mean over `S` of the vertex bounds.
/// On PASS, each column of `p_e(A) χ_S` (the degree-`e` member of the
/// `S`-measure predistance sequence) must be supported exactly on the
/// sphere of radius `e`; otherwise [`Error::SupportMismatch`].
pub fn pseudo_dr_set(
    dec: &SpectralDecomposition,
    perron: &PerronVector,
    dd: &DistanceData,
    set: &[usize],
    subject: &str,
    tol: f64,
) -> Result<Verdict> {
    assert!(!set.is_empty(), "pseudo_dr_set needs a nonempty set");
    let first = set[0];
    let e = dd.ecc(first);
    if let Some(&v) = set.iter().find(|&&v| dd.ecc(v) != e) {
        return Err(Error::UnequalEccentricities {
            u: first,
            ecc_u: e,
            v,
            ecc_v: dd.ecc(v),
        });
    }
    let measure = local_measure(dec, &Scope::Set(set.to_vec()));
    if measure.len() != e + 1 {
        return Ok(Verdict::fail(
            Route::PseudoSet,
            subject,
            tol,
            None,
            Witness::SupportSize {
                vertex: None,
                support: measure.len(),
                eccentricity: e,
            },
        ));
    }
    if e == 0 {
        return Ok(Verdict::pass(Route::PseudoSet, subject, tol, Some(0.0), vec![]));
    }
    let seq = orthonormal_sequence(&measure)?;
    let (q, value) = adjacency_polynomial_of(&seq, e - 1);
    let mean_sq: f64 = set
        .iter()
        .map(|&u| excess_bound(perron, dd, u, e - 1).powi(2))
        .sum::<f64>()
        / set.len() as f64;
    let bound = mean_sq.sqrt();
    let gap = (bound - value) / bound;
    if gap.abs() > tol {
        return Ok(Verdict::fail(
            Route::PseudoSet,
            subject,
            tol,
            Some(gap),
            Witness::Bound {
                vertex: None,
                value,
                bound,
            },
        ));
    }

    let p_e = seq.poly(e).scale(seq.values(e)[0]);
    let values: Vec<f64> = dec.eigs().iter().map(|&t| p_e.eval(t)).collect();
    let block = dec.apply_values(&values, set);
    for (j, &u) in set.iter().enumerate() {
        let col = block.column(j);
        let top = col.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let threshold = tol.sqrt() * top.max(1.0);
        if let Some(v) = (0..dd.n()).find(|&v| (col[v].abs() > threshold) != (dd.distance(u, v) == e)) {
            return Err(Error::SupportMismatch {
                vertex: v,
                detail: format!(
                    "set certificate column {u} is {:e} at distance {} (radius {e})",
                    col[v],
                    dd.distance(u, v)
                ),
            });
        }
    }
    Ok(Verdict::pass(
        Route::PseudoSet,
        subject,
        tol,
        Some(gap),
        vec![NamedPoly::new("Q_{e-1}", &q), NamedPoly::new("p_e", &p_e)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, FamilySpec};
    use crate::graph::{bipartition, distance_data, Graph};
    use crate::spectral::{decompose, perron, DEFAULT_TOL};

    fn setup(name: &str, params: &[usize]) -> (Graph, SpectralDecomposition, PerronVector, DistanceData) {
        let g = generate(&FamilySpec::new(name, params)).unwrap();
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let pv = perron(&g, &dec).unwrap();
        let dd = distance_data(&g);
        (g, dec, pv, dd)
    }

    #[test]
    fn cycle_vertices_pass() {
        let (g, dec, pv, dd) = setup("cycle", &[6]);
        for u in 0..g.n() {
            let v = pseudo_dr_vertex(&dec, &pv, &dd, u, DEFAULT_TOL).unwrap();
            assert!(v.passed(), "{v:?}");
            assert_eq!(v.certificate.len(), 2);
        }
        let all: Vec<usize> = (0..g.n()).collect();
        assert!(pseudo_dr_set(&dec, &pv, &dd, &all, "V", DEFAULT_TOL).unwrap().passed());
    }

    #[test]
    fn delorme_vertices_fail_on_the_bound() {
        let (g, dec, pv, dd) = setup("delorme", &[]);
        for u in 0..g.n() {
            let v = pseudo_dr_vertex(&dec, &pv, &dd, u, DEFAULT_TOL).unwrap();
            assert!(matches!(v.witness, Some(Witness::Bound { .. })), "{v:?}");
        }
        let all: Vec<usize> = (0..g.n()).collect();
        assert!(!pseudo_dr_set(&dec, &pv, &dd, &all, "V", DEFAULT_TOL).unwrap().passed());
    }

    #[test]
    fn subdivided_k4_passes_everywhere_and_by_side() {
        let (g, dec, pv, dd) = setup("subdivision_k4", &[]);
        for u in 0..g.n() {
            assert!(pseudo_dr_vertex(&dec, &pv, &dd, u, DEFAULT_TOL).unwrap().passed());
        }
        let part = bipartition(&g).unwrap();
        for (side, name) in [(part.side_b(), "B"), (part.side_c(), "C")] {
            assert!(pseudo_dr_set(&dec, &pv, &dd, side, name, DEFAULT_TOL).unwrap().passed());
        }
    }

    #[test]
    fn star_centre_lacks_support() {
        // Centre of K_{1,4} has eccentricity 1 and |Φ| = 2: spectrally extremal.
        // A leaf has eccentricity 2 and |Φ| = 3.
        let (_, dec, pv, dd) = setup("star", &[4]);
        assert!(pseudo_dr_vertex(&dec, &pv, &dd, 0, DEFAULT_TOL).unwrap().passed());
        assert!(pseudo_dr_vertex(&dec, &pv, &dd, 1, DEFAULT_TOL).unwrap().passed());
    }

    #[test]
    fn path_interior_vertex_fails() {
        let (_, dec, pv, dd) = setup("path", &[5]);
        let v = pseudo_dr_vertex(&dec, &pv, &dd, 1, DEFAULT_TOL).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn unequal_eccentricities() {
        let (_, dec, pv, dd) = setup("path", &[4]);
        assert!(matches!(
            pseudo_dr_set(&dec, &pv, &dd, &[0, 1], "S", DEFAULT_TOL),
            Err(Error::UnequalEccentricities { .. })
        ));
    }
}
