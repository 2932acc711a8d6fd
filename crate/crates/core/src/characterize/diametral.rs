//! Is the distance-`d` matrix (or its restriction to one side) a polynomial
//! in `A`?

use nalgebra::DMatrix;

use super::{NamedPoly, Route, Verdict, Witness};
use crate::graph::{Bipartition, DistanceData, Graph, Side};
use crate::orthopoly::Poly;
use crate::spectral::SpectralDecomposition;

fn count_witness(dec: &SpectralDecomposition, dd: &DistanceData) -> Option<Witness> {
    (dec.len() != dd.diameter() + 1).then(|| Witness::EigenvalueCount {
        eigenvalues: dec.len(),
        diameter: dd.diameter(),
    })
}

/// Largest `|got − want|` over the given columns, with its location.
fn worst_entry(got: &DMatrix<f64>, want: &DMatrix<f64>, cols: &[usize]) -> (f64, Witness) {
    let mut best = (0.0, 0, 0);
    for (j, &col) in cols.iter().enumerate() {
        for row in 0..got.nrows() {
            let dev = (got[(row, j)] - want[(row, col)]).abs();
            if dev > best.0 || (j == 0 && row == 0) {
                best = (dev, row, j);
            }
        }
    }
    let (dev, row, j) = best;
    (
        dev,
        Witness::Entry {
            row,
            col: cols[j],
            expected: want[(row, cols[j])],
            actual: got[(row, j)],
        },
    )
}

/// FAIL when the number of distinct eigenvalues is not `d + 1`. Otherwise
/// the candidate `p` takes the value `tr(E_r A_d) / m_r` at `θ_r` (the
/// Frobenius projection of `A_d` on the span of the idempotents), and the
/// verdict is PASS iff `‖p(A) − A_d‖_max ≤ tol` and `p` has degree `d`.
/// The residual is that max-norm deviation.
pub fn check_drg_diametral(
    g: &Graph,
    dec: &SpectralDecomposition,
    dd: &DistanceData,
    tol: f64,
) -> Verdict {
    let route = Route::DrgDiametral;
    if let Some(w) = count_witness(dec, dd) {
        return Verdict::fail(route, "V", tol, None, w);
    }
    let d = dd.diameter();
    let ad = dd.distance_matrix(d);
    let values: Vec<f64> = (0..dec.len())
        .map(|r| dec.diag_of_product(r, &ad).iter().sum::<f64>() / dec.mult()[r] as f64)
        .collect();
    let all: Vec<usize> = (0..g.n()).collect();
    let (residual, witness) = worst_entry(&dec.apply_values(&values, &all), &ad, &all);
    if residual > tol {
        return Verdict::fail(route, "V", tol, Some(residual), witness);
    }
    let p = Poly::interpolate(dec.eigs(), &values);
    if p.degree() != d || p.coeffs()[d].abs() <= tol {
        return Verdict::fail(
            route,
            "V",
            tol,
            Some(residual),
            Witness::Hypothesis {
                detail: format!("interpolant has degree {} below the diameter {d}", p.degree()),
            },
        );
    }
    Verdict::pass(route, "V", tol, Some(residual), vec![NamedPoly::new("p_d", &p)])
}

/// Side-resolved version: for `S ∈ {B, C}` the candidate `p^S` takes the
/// value `Σ_{v∈S} (E_r A_d)_vv / Σ_{v∈S} (E_r)_vv` at `θ_r` (zero when the
/// denominator is `≤ tol`). PASS iff `‖p^S(A) χ_S − A_d χ_S‖_max ≤ tol` on
/// both sides; the residual is the larger deviation.
pub fn check_dbrg_diametral(
    _g: &Graph,
    dec: &SpectralDecomposition,
    dd: &DistanceData,
    part: &Bipartition,
    tol: f64,
) -> Verdict {
    let route = Route::DbrgDiametral;
    if let Some(w) = count_witness(dec, dd) {
        return Verdict::fail(route, "B,C", tol, None, w);
    }
    let d = dd.diameter();
    let ad = dd.distance_matrix(d);
    let products: Vec<Vec<f64>> = (0..dec.len()).map(|r| dec.diag_of_product(r, &ad)).collect();
    let mut certificate = Vec::new();
    let mut worst: Option<(f64, Witness)> = None;
    for (side, name) in [(Side::B, "p^B"), (Side::C, "p^C")] {
        let members = part.members(side);
        if members.is_empty() {
            continue;
        }
        let values: Vec<f64> = (0..dec.len())
            .map(|r| {
                let den: f64 = members.iter().map(|&v| dec.diag(r)[v]).sum();
                let num: f64 = members.iter().map(|&v| products[r][v]).sum();
                if den > tol {
                    num / den
                } else {
                    0.0
                }
            })
            .collect();
        let (dev, witness) = worst_entry(&dec.apply_values(&values, members), &ad, members);
        if worst.as_ref().is_none_or(|(w, _)| dev > *w) {
            worst = Some((dev, witness));
        }
        certificate.push(NamedPoly::new(name, &Poly::interpolate(dec.eigs(), &values)));
    }
    let (residual, witness) = worst.expect("a bipartition has a nonempty side");
    if residual > tol {
        Verdict::fail(route, "B,C", tol, Some(residual), witness)
    } else {
        Verdict::pass(route, "B,C", tol, Some(residual), certificate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::Outcome;
    use crate::corpus::{generate, FamilySpec};
    use crate::graph::{bipartition, distance_data};
    use crate::spectral::{decompose, DEFAULT_TOL};

    fn run(name: &str, params: &[usize]) -> (Verdict, Option<Verdict>) {
        let g = generate(&FamilySpec::new(name, params)).unwrap();
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let dd = distance_data(&g);
        let drg = check_drg_diametral(&g, &dec, &dd, DEFAULT_TOL);
        let dbrg = bipartition(&g)
            .ok()
            .map(|p| check_dbrg_diametral(&g, &dec, &dd, &p, DEFAULT_TOL));
        (drg, dbrg)
    }

    #[test]
    fn cycle_distance_three_polynomial() {
        let (drg, dbrg) = run("cycle", &[6]);
        assert!(drg.passed());
        // A_3 = (A³ − 3A)/2 on C6: values {1, −1, 1, −1} on {2, 1, −1, −2}.
        let p = Poly::new(drg.certificate[0].coeffs.clone());
        for (x, want) in [(2.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-2.0, -1.0)] {
            assert!((p.eval(x) - want).abs() < 1e-10);
        }
        assert!(dbrg.unwrap().passed());
    }

    #[test]
    fn delorme_fails_both_with_entry_witnesses() {
        let (drg, dbrg) = run("delorme", &[]);
        let dbrg = dbrg.unwrap();
        for v in [&drg, &dbrg] {
            assert_eq!(v.outcome, Outcome::Fail);
            assert!(matches!(v.witness, Some(Witness::Entry { .. })), "{v:?}");
            assert!(v.residual.unwrap() > 0.1);
        }
    }

    #[test]
    fn cay_d8_fails_on_eigenvalue_count() {
        let (drg, _) = run("cay_d8", &[]);
        assert_eq!(
            drg.witness,
            Some(Witness::EigenvalueCount {
                eigenvalues: 6,
                diameter: 4
            })
        );
    }

    #[test]
    fn biregular_fixtures_pass_side_check() {
        for (name, params) in [("complete_bipartite", vec![2, 3]), ("subdivision_k4", vec![])] {
            let (drg, dbrg) = run(name, &params);
            assert!(!drg.passed(), "{name}");
            assert!(dbrg.unwrap().passed(), "{name}");
        }
    }
}
