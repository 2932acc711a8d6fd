//! Spectral decomposition of the adjacency matrix into clustered eigenvalues
//! and their idempotents, plus the measures built from it.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bipartition, Bipartition, Graph, Side};

pub const DEFAULT_TOL: f64 = 1e-8;

/// `A = Σ θ_r E_r` with `θ_0 > θ_1 > … > θ_m`.
///
/// The idempotents are kept factored as `E_r = U_r U_rᵀ` where `U_r` is an
/// orthonormal basis of the eigenspace; entries are assembled on demand.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    n: usize,
    eigs: Vec<f64>,
    mult: Vec<usize>,
    bases: Vec<DMatrix<f64>>,
    /// `diag[r][u] = (E_r)_{uu}`.
    diag: Vec<Vec<f64>>,
    tol: f64,
    scale: f64,
}

/// Largest entrywise deviations of the idempotent identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdempotentResiduals {
    /// `max_r ‖E_r² − E_r‖_max`
    pub idempotent: f64,
    /// `max_{r≠s} ‖E_r E_s‖_max`
    pub orthogonal: f64,
    /// `‖Σ E_r − I‖_max`
    pub resolution: f64,
    /// `‖Σ θ_r E_r − A‖_max`
    pub reconstruction: f64,
    /// `max_r |tr E_r − m_r|`
    pub trace: f64,
}

impl IdempotentResiduals {
    pub fn max(&self) -> f64 {
        [self.idempotent, self.orthogonal, self.resolution, self.reconstruction, self.trace]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn decompose(g: &Graph, tol: f64) -> Result<SpectralDecomposition> {
    assert!(tol > 0.0, "tolerance must be positive");
    let a = g.adjacency_matrix();
    let n = g.n();
    let eigen = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigen.eigenvalues[j].total_cmp(&eigen.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let scale = values.iter().fold(1.0_f64, |m, x| m.max(x.abs()));

    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..n {
        let gap = values[i - 1] - values[i];
        if gap <= tol * scale {
            clusters.last_mut().unwrap().push(i);
        } else if gap <= 10.0 * tol * scale {
            return Err(Error::AmbiguousClustering {
                lo: values[i],
                hi: values[i - 1],
                gap,
            });
        } else {
            clusters.push(vec![i]);
        }
    }

    let mut eigs = Vec::with_capacity(clusters.len());
    let mut mult = Vec::with_capacity(clusters.len());
    let mut bases = Vec::with_capacity(clusters.len());
    for members in &clusters {
        eigs.push(members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64);
        mult.push(members.len());
        let cols: Vec<usize> = members.iter().map(|&i| order[i]).collect();
        bases.push(eigen.eigenvectors.select_columns(&cols));
    }
    let diag = bases
        .iter()
        .map(|u| u.row_iter().map(|row| row.norm_squared()).collect())
        .collect();
    let dec = SpectralDecomposition {
        n,
        eigs,
        mult,
        bases,
        diag,
        tol,
        scale,
    };
    dec.verify(&a)?;
    Ok(dec)
}

impl SpectralDecomposition {
    /// Cheap checks run on every decomposition: orthonormality of the full
    /// eigenbasis (which gives `E_r² = E_r`, `E_r E_s = 0` and `Σ E_r = I`),
    /// reconstruction of `A`, traces, and simplicity of the top eigenvalue.
    fn verify(&self, a: &DMatrix<f64>) -> Result<()> {
        let bound = 10.0 * self.tol;
        let cols: Vec<_> = self.bases.iter().flat_map(|u| u.column_iter()).collect();
        let u = DMatrix::from_columns(&cols);
        let gram = u.transpose() * &u;
        let orth = max_abs(&(gram - DMatrix::identity(self.n, self.n)));
        if orth > bound {
            return Err(Error::InvariantViolation(format!(
                "eigenbasis is not orthonormal (residual {orth:e})"
            )));
        }
        let rec = max_abs(&(self.reconstruct() - a));
        if rec > bound * (1.0 + self.lambda().abs()) {
            return Err(Error::InvariantViolation(format!(
                "Σ θ_r E_r differs from A by {rec:e}"
            )));
        }
        for r in 0..self.len() {
            let trace: f64 = self.diag[r].iter().sum();
            if (trace - self.mult[r] as f64).abs() > bound * self.mult[r] as f64 {
                return Err(Error::InvariantViolation(format!(
                    "trace of E_{r} is {trace}, multiplicity {}",
                    self.mult[r]
                )));
            }
        }
        if self.mult[0] != 1 {
            return Err(Error::InvariantViolation(format!(
                "largest eigenvalue has multiplicity {}",
                self.mult[0]
            )));
        }
        Ok(())
    }

    fn reconstruct(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (theta, u) in self.eigs.iter().zip(&self.bases) {
            out += u * u.transpose() * *theta;
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigs.is_empty()
    }

    pub fn eigs(&self) -> &[f64] {
        &self.eigs
    }

    pub fn mult(&self) -> &[usize] {
        &self.mult
    }

    pub fn lambda(&self) -> f64 {
        self.eigs[0]
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `max(1, spectral radius)`: the scale clustering tolerances are relative to.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Orthonormal basis (`n × m_r`) of the `θ_r` eigenspace.
    pub fn basis(&self, r: usize) -> &DMatrix<f64> {
        &self.bases[r]
    }

    pub fn idempotent(&self, r: usize) -> DMatrix<f64> {
        &self.bases[r] * self.bases[r].transpose()
    }

    pub fn entry(&self, r: usize, u: usize, v: usize) -> f64 {
        self.bases[r].row(u).dot(&self.bases[r].row(v))
    }

    /// Diagonal of `E_r`.
    pub fn diag(&self, r: usize) -> &[f64] {
        &self.diag[r]
    }

    /// Index of the cluster containing `theta`, if any.
    pub fn index_of(&self, theta: f64) -> Option<usize> {
        self.eigs
            .iter()
            .position(|&t| (t - theta).abs() <= self.tol * self.scale)
    }

    /// Diagonal of `E_r M`.
    pub fn diag_of_product(&self, r: usize, m: &DMatrix<f64>) -> Vec<f64> {
        let u = &self.bases[r];
        let t = u.transpose() * m;
        (0..self.n)
            .map(|v| (0..u.ncols()).map(|j| u[(v, j)] * t[(j, v)]).sum())
            .collect()
    }

    /// `Σ_r values[r] · E_r` restricted to the columns `cols`.
    pub fn apply_values(&self, values: &[f64], cols: &[usize]) -> DMatrix<f64> {
        assert_eq!(values.len(), self.len());
        let mut out = DMatrix::zeros(self.n, cols.len());
        for (&value, u) in values.iter().zip(&self.bases) {
            if value == 0.0 {
                continue;
            }
            let rows = u.select_rows(cols);
            out += u * rows.transpose() * value;
        }
        out
    }

    /// Assembles every idempotent and measures the defining identities
    /// directly. Quadratic in the number of eigenvalues; meant for tests and
    /// diagnostics, not for the analysis path.
    pub fn idempotent_residuals(&self, g: &Graph) -> IdempotentResiduals {
        let idem: Vec<DMatrix<f64>> = (0..self.len()).map(|r| self.idempotent(r)).collect();
        let mut res = IdempotentResiduals {
            idempotent: 0.0,
            orthogonal: 0.0,
            resolution: 0.0,
            reconstruction: 0.0,
            trace: 0.0,
        };
        let mut sum = DMatrix::zeros(self.n, self.n);
        let mut weighted = DMatrix::zeros(self.n, self.n);
        for (r, e) in idem.iter().enumerate() {
            res.idempotent = res.idempotent.max(max_abs(&(e * e - e)));
            for f in &idem[r + 1..] {
                res.orthogonal = res.orthogonal.max(max_abs(&(e * f)));
            }
            res.trace = res.trace.max((e.trace() - self.mult[r] as f64).abs());
            sum += e;
            weighted += e * self.eigs[r];
        }
        res.resolution = max_abs(&(sum - DMatrix::identity(self.n, self.n)));
        res.reconstruction = max_abs(&(weighted - g.adjacency_matrix()));
        res
    }
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `Φ_u`: indices `r` with `(E_r)_{uu} > tol`.
pub fn eigenvalue_support(dec: &SpectralDecomposition, u: usize, tol: f64) -> Vec<usize> {
    (0..dec.len()).filter(|&r| dec.diag(r)[u] > tol).collect()
}

/// Positive unit eigenvector of the largest eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronVector {
    pub lambda: f64,
    pub entries: Vec<f64>,
}

impl PerronVector {
    pub fn at(&self, u: usize) -> f64 {
        self.entries[u]
    }
}

/// Uses the closed forms for regular and semiregular graphs and the top
/// eigenvector otherwise.
pub fn perron(g: &Graph, dec: &SpectralDecomposition) -> Result<PerronVector> {
    let n = g.n();
    let pv = if let Some(k) = g.regular_degree() {
        PerronVector {
            lambda: k as f64,
            entries: vec![1.0 / (n as f64).sqrt(); n],
        }
    } else if let Some((part, (k, ell))) = bipartition(g).ok().and_then(|p| p.profile().map(|kl| (p, kl))) {
        let (vb, vc) = ((k as f64).sqrt(), (ell as f64).sqrt());
        let norm = (part.side_b().len() as f64 * vb * vb + part.side_c().len() as f64 * vc * vc).sqrt();
        PerronVector {
            lambda: (k as f64 * ell as f64).sqrt(),
            entries: (0..n)
                .map(|v| match part.side(v) {
                    Side::B => vb / norm,
                    Side::C => vc / norm,
                })
                .collect(),
        }
    } else {
        let col = dec.basis(0).column(0);
        let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
        let entries: Vec<f64> = col.iter().map(|x| x * sign).collect();
        if let Some((vertex, &value)) = entries.iter().enumerate().find(|(_, &x)| x <= 0.0) {
            return Err(Error::NonPositiveEntry { vertex, value });
        }
        PerronVector {
            lambda: dec.lambda(),
            entries,
        }
    };
    if (pv.lambda - dec.lambda()).abs() > 10.0 * dec.tol() * dec.scale() {
        return Err(Error::InvariantViolation(format!(
            "closed-form Perron value {} differs from the largest eigenvalue {}",
            pv.lambda,
            dec.lambda()
        )));
    }
    Ok(pv)
}

/// Which inner product a [`Measure`] represents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Vertex(usize),
    Set(Vec<usize>),
    Global,
}

/// Discrete measure on the eigenvalues, restricted to its support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    pub scope: Scope,
    /// Eigenvalue indices with positive weight, in decreasing eigenvalue order.
    pub support: Vec<usize>,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Measure {
    /// Builds a measure from explicit points and weights; entries with
    /// weight `≤ tol` are dropped.
    pub fn from_points(scope: Scope, points: &[f64], weights: &[f64], tol: f64) -> Self {
        let support: Vec<usize> = (0..points.len()).filter(|&r| weights[r] > tol).collect();
        Measure {
            scope,
            points: support.iter().map(|&r| points[r]).collect(),
            weights: support.iter().map(|&r| weights[r]).collect(),
            support,
        }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ w_r f(θ_r) g(θ_r)` for functions given by their values on the support.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }
}

/// Vertex: `w_r = (E_r)_{uu}`; set: the average of those over `S`;
/// global: `w_r = m_r / n`. Support is `w_r > tol`.
pub fn local_measure(dec: &SpectralDecomposition, scope: &Scope) -> Measure {
    let weights: Vec<f64> = match scope {
        Scope::Vertex(u) => (0..dec.len()).map(|r| dec.diag(r)[*u]).collect(),
        Scope::Set(s) => {
            assert!(!s.is_empty(), "set measure needs a nonempty set");
            (0..dec.len())
                .map(|r| s.iter().map(|&u| dec.diag(r)[u]).sum::<f64>() / s.len() as f64)
                .collect()
        }
        Scope::Global => dec.mult().iter().map(|&m| m as f64 / dec.n() as f64).collect(),
    };
    Measure::from_points(scope.clone(), dec.eigs(), &weights, dec.tol())
}

/// Outcome of the bipartite idempotent identities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    /// `max_θ ‖E_{−θ} − D E_θ D‖_max` with `D = diag(±1)` by side.
    pub pairing: f64,
    /// `max_{θ≠0} |tr B_θ − m_θ/2|, |tr C_θ − m_θ/2|`.
    pub trace: f64,
    pub zero_multiplicity: usize,
    pub side_difference: usize,
}

/// Checks the symmetric spectrum, the sign-flip pairing of idempotents, the
/// half-trace identity on each diagonal block and `mult(0) ≥ ||B| − |C||`.
pub fn bipartite_block_checks(dec: &SpectralDecomposition, part: &Bipartition) -> Result<BlockReport> {
    let bound = 10.0 * dec.tol();
    let n = dec.n();
    let sign: Vec<f64> = (0..n).map(|v| part.sign(v)).collect();
    let mut report = BlockReport {
        pairing: 0.0,
        trace: 0.0,
        zero_multiplicity: dec.index_of(0.0).map_or(0, |r| dec.mult()[r]),
        side_difference: part.side_b().len().abs_diff(part.side_c().len()),
    };
    for r in 0..dec.len() {
        let theta = dec.eigs()[r];
        let Some(s) = dec.index_of(-theta) else {
            return Err(Error::CheckFailed(format!("{theta} has no partner {}", -theta)));
        };
        if dec.mult()[s] != dec.mult()[r] {
            return Err(Error::CheckFailed(format!(
                "{theta} has multiplicity {} but {} has {}",
                dec.mult()[r],
                -theta,
                dec.mult()[s]
            )));
        }
        if s < r {
            continue;
        }
        let e = dec.idempotent(r);
        let f = dec.idempotent(s);
        for v in 0..n {
            for w in 0..n {
                let dev = (f[(v, w)] - sign[v] * sign[w] * e[(v, w)]).abs();
                report.pairing = report.pairing.max(dev);
            }
        }
        if r != s {
            let half = dec.mult()[r] as f64 / 2.0;
            for side in [Side::B, Side::C] {
                let t: f64 = part.members(side).iter().map(|&v| dec.diag(r)[v]).sum();
                report.trace = report.trace.max((t - half).abs());
            }
        }
    }
    if report.pairing > bound {
        return Err(Error::CheckFailed(format!(
            "paired idempotents differ from the sign flip by {:e}",
            report.pairing
        )));
    }
    if report.trace > bound {
        return Err(Error::CheckFailed(format!(
            "block traces deviate from half the multiplicity by {:e}",
            report.trace
        )));
    }
    if report.zero_multiplicity < report.side_difference {
        return Err(Error::CheckFailed(format!(
            "eigenvalue 0 has multiplicity {} below the side difference {}",
            report.zero_multiplicity, report.side_difference
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, FamilySpec};

    fn family(name: &str, params: &[usize]) -> Graph {
        generate(&FamilySpec::new(name, params)).unwrap()
    }

    fn assert_spectrum(dec: &SpectralDecomposition, expected: &[(f64, usize)]) {
        assert_eq!(dec.len(), expected.len(), "eigs {:?}", dec.eigs());
        for (r, &(theta, m)) in expected.iter().enumerate() {
            assert!((dec.eigs()[r] - theta).abs() <= 1e-8, "{} vs {theta}", dec.eigs()[r]);
            assert_eq!(dec.mult()[r], m);
        }
    }

    #[test]
    fn complete_bipartite_spectrum() {
        let dec = decompose(&family("complete_bipartite", &[2, 3]), DEFAULT_TOL).unwrap();
        let s6 = 6f64.sqrt();
        assert_spectrum(&dec, &[(s6, 1), (0.0, 3), (-s6, 1)]);
    }

    #[test]
    fn delorme_spectrum() {
        let dec = decompose(&family("delorme", &[]), DEFAULT_TOL).unwrap();
        let s5 = 5f64.sqrt();
        assert_spectrum(
            &dec,
            &[(3.0, 1), (s5, 6), (1.0, 9), (-1.0, 9), (-s5, 6), (-3.0, 1)],
        );
    }

    #[test]
    fn cay_d8_spectrum() {
        let dec = decompose(&family("cay_d8", &[]), DEFAULT_TOL).unwrap();
        let s3 = 3f64.sqrt();
        assert_spectrum(
            &dec,
            &[(3.0, 1), (s3, 4), (1.0, 3), (-1.0, 3), (-s3, 4), (-3.0, 1)],
        );
    }

    #[test]
    fn idempotent_residuals_are_small() {
        for g in [family("petersen", &[]), family("heawood", &[]), family("path", &[5])] {
            let dec = decompose(&g, DEFAULT_TOL).unwrap();
            assert!(dec.idempotent_residuals(&g).max() <= 1e-10);
        }
    }

    #[test]
    fn star_centre_misses_zero() {
        let g = family("star", &[4]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let zero = dec.index_of(0.0).unwrap();
        let support = eigenvalue_support(&dec, 0, DEFAULT_TOL);
        assert_eq!(support.len(), 2);
        assert!(!support.contains(&zero));
        // Leaves see all three eigenvalues.
        assert_eq!(eigenvalue_support(&dec, 1, DEFAULT_TOL).len(), 3);
    }

    #[test]
    fn perron_closed_forms() {
        let g = family("subdivision_k4", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let pv = perron(&g, &dec).unwrap();
        assert!((pv.lambda - 6f64.sqrt()).abs() < 1e-12);
        let a = g.adjacency_matrix();
        let v = nalgebra::DVector::from_vec(pv.entries.clone());
        assert!((&a * &v - &v * pv.lambda).amax() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        // Branch vertices 0..4 have degree 3, subdivision vertices degree 2.
        assert!((pv.at(0) / pv.at(4) - (1.5f64).sqrt()).abs() < 1e-12);

        let g = family("delorme", &[]);
        let pv = perron(&g, &decompose(&g, DEFAULT_TOL).unwrap()).unwrap();
        assert_eq!(pv.lambda, 3.0);
        assert!(pv.entries.iter().all(|&x| (x - 32f64.sqrt().recip()).abs() < 1e-15));
    }

    #[test]
    fn perron_general_graph() {
        let g = family("path", &[4]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let pv = perron(&g, &dec).unwrap();
        let a = g.adjacency_matrix();
        let v = nalgebra::DVector::from_vec(pv.entries.clone());
        assert!(pv.entries.iter().all(|&x| x > 0.0));
        assert!((&a * &v - &v * pv.lambda).amax() < 1e-10);
    }

    #[test]
    fn measures() {
        let g = family("delorme", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let global = local_measure(&dec, &Scope::Global);
        let expected = [1.0, 6.0, 9.0, 9.0, 6.0, 1.0].map(|m| m / 32.0);
        assert_eq!(global.weights, expected);
        for u in 0..g.n() {
            let m = local_measure(&dec, &Scope::Vertex(u));
            assert!((m.total() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn set_measure_matches_trace_of_diagonal_block() {
        // For θ ≠ 0 the B block of E_θ has trace m_θ / 2; the kernel splits
        // by side dimension, so the weight at 0 is (|B| - |C|)/|B| plus
        // whatever share of the paired kernel B holds.
        let g = family("subdivision_k4", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let part = bipartition(&g).unwrap();
        let m = local_measure(&dec, &Scope::Set(part.side_b().to_vec()));
        for (i, &r) in m.support.iter().enumerate() {
            let brute: f64 = part
                .side_b()
                .iter()
                .map(|&u| dec.idempotent(r)[(u, u)])
                .sum::<f64>()
                / 6.0;
            assert!((m.weights[i] - brute).abs() < 1e-12);
            if dec.eigs()[r].abs() > 1e-6 {
                assert!((m.weights[i] - dec.mult()[r] as f64 / 12.0).abs() < 1e-10);
            }
        }
        let zero = dec.index_of(0.0).unwrap();
        assert!(m.support.contains(&zero));
    }

    #[test]
    fn block_checks() {
        let g = family("delorme", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let report = bipartite_block_checks(&dec, &bipartition(&g).unwrap()).unwrap();
        assert_eq!((report.zero_multiplicity, report.side_difference), (0, 0));

        let g = family("complete_bipartite", &[2, 3]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let report = bipartite_block_checks(&dec, &bipartition(&g).unwrap()).unwrap();
        assert_eq!((report.zero_multiplicity, report.side_difference), (3, 1));
    }

    #[test]
    fn block_checks_reject_non_bipartite_spectrum() {
        // The 6-cycle colouring paired with the spectrum of the 6-cycle plus
        // the chord (0, 2), which has a triangle.
        let c6 = family("cycle", &[6]);
        let part = bipartition(&c6).unwrap();
        let chord = Graph::from_edges(6, c6.edges().iter().copied().chain([(0, 2)])).unwrap();
        let dec = decompose(&chord, DEFAULT_TOL).unwrap();
        assert!(matches!(bipartite_block_checks(&dec, &part), Err(Error::CheckFailed(_))));
    }

    #[test]
    fn ambiguous_clustering_is_reported() {
        // Eigenvalues of P3 are ±√2 and 0, gaps √2 at scale √2: tolerance
        // 0.05 leaves the gap outside the guard band, 0.2 puts it inside.
        let g = family("path", &[3]);
        assert!(decompose(&g, 0.05).is_ok());
        assert!(matches!(decompose(&g, 0.2), Err(Error::AmbiguousClustering { .. })));
    }
}
