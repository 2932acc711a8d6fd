//! Orthogonal polynomials over discrete eigenvalue measures.
//!
//! Sequences are built by Gram–Schmidt in value space (the values of each
//! polynomial on the measure's support points), with the monomial
//! coefficients carried along for reporting and off-support evaluation.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DistanceData;
use crate::spectral::{Measure, PerronVector, SpectralDecomposition};

/// Relative norm below which a Gram–Schmidt step is treated as dependent.
const RANK_TOL: f64 = 1e-10;

/// Real polynomial in the monomial basis, `coeffs[i]` multiplying `x^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Trailing exact zeros are trimmed so the leading coefficient is
    /// nonzero (except for the zero polynomial, stored as `[0]`).
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::new(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `∏ (x − r)` over `roots`.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Poly::new(coeffs)
    }

    /// Interpolating polynomial through `(points[i], values[i])`, via Newton
    /// divided differences.
    pub fn interpolate(points: &[f64], values: &[f64]) -> Self {
        assert_eq!(points.len(), values.len());
        let n = points.len();
        let mut dd = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (points[i] - points[i - level]);
            }
        }
        // Horner on the Newton form, in monomial coefficients.
        let mut acc = Poly::zero();
        for i in (0..n).rev() {
            acc = acc.mul_linear(points[i]).add(&Poly::constant(dd[i]));
        }
        acc
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `Σ |c_k| |x|^k`, the size of the terms summed by [`Poly::eval`].
    pub fn eval_abs(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs())
    }

    pub fn scale(&self, c: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Poly::new((0..len).map(|i| at(self, i) + at(other, i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    /// `(x − r) · self`
    pub fn mul_linear(&self, r: f64) -> Poly {
        Poly::from_roots(&[r]).mul(self)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Coefficients of `x p_i = c_{i+1} p_{i+1} + a_i p_i + b_{i−1} p_{i−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recurrence {
    pub a: f64,
    /// `b_{i−1}`; zero for `i = 0`.
    pub b: f64,
    /// `c_{i+1}`; zero for the last polynomial.
    pub c: f64,
}

/// Orthogonal sequence `p_0, …, p_s` for a measure with `s + 1` support
/// points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolySequence {
    polys: Vec<Poly>,
    /// `values[i][j] = p_i(points[j])`
    values: Vec<Vec<f64>>,
    norms: Vec<f64>,
    recurrence: Vec<Recurrence>,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl PolySequence {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn poly(&self, i: usize) -> &Poly {
        &self.polys[i]
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Values of `p_i` on the support points.
    pub fn values(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// `‖p_i‖²` under the defining measure.
    pub fn norm_sq(&self, i: usize) -> f64 {
        self.norms[i]
    }

    pub fn recurrence(&self) -> &[Recurrence] {
        &self.recurrence
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `p_i(x)` by running the recurrence, which is better conditioned than
    /// the monomial form away from the support.
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = self.polys[0].eval(x);
        for j in 0..i {
            let r = self.recurrence[j];
            let next = ((x - r.a) * cur - r.b * prev) / r.c;
            prev = cur;
            cur = next;
        }
        cur
    }

    fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights.iter().zip(f.iter().zip(g)).map(|(w, (a, b))| w * a * b).sum()
    }

    /// `max_{i≠j} |⟨p_i, p_j⟩| / max_i ‖p_i‖²`.
    pub fn orthogonality_residual(&self) -> f64 {
        let top = self.norms.iter().fold(0.0_f64, |m, &x| m.max(x));
        let mut worst = 0.0_f64;
        for i in 0..self.len() {
            for j in 0..i {
                worst = worst.max(self.inner(&self.values[i], &self.values[j]).abs());
            }
        }
        worst / top
    }

    /// Largest pointwise deviation of the recurrence on the support. Each
    /// deviation is divided by the rounding scale of the terms involved,
    /// `Σ_k |c_k| |x|^k` per polynomial, since the monomial form cancels
    /// heavily at high degree. Coefficients are read off the monomial form so
    /// the stored values are checked independently.
    pub fn recurrence_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, r) in self.recurrence.iter().enumerate() {
            for &x in &self.points {
                let p = &self.polys[i];
                let lhs = x * p.eval(x);
                let mut rhs = r.a * p.eval(x);
                let mut scale = (x.abs() + r.a.abs()) * p.eval_abs(x);
                if i > 0 {
                    rhs += r.b * self.polys[i - 1].eval(x);
                    scale += r.b.abs() * self.polys[i - 1].eval_abs(x);
                }
                if i + 1 < self.len() {
                    rhs += r.c * self.polys[i + 1].eval(x);
                    scale += r.c.abs() * self.polys[i + 1].eval_abs(x);
                }
                worst = worst.max((lhs - rhs).abs() / scale.max(1.0));
            }
        }
        worst
    }

    /// `|‖p_i‖² − p_i(points[0])| / p_i(points[0])`, the defining identity of
    /// the predistance normalisation.
    pub fn normalisation_residual(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.norms[i] - self.values[i][0]).abs() / self.values[i][0].abs())
            .fold(0.0, f64::max)
    }
}

/// Orthonormal sequence `q_0, …, q_s` for `m`.
pub fn orthonormal_sequence(m: &Measure) -> Result<PolySequence> {
    let s1 = m.len();
    if s1 == 0 {
        return Err(Error::DegenerateMeasure { rank: 0, support: 0 });
    }
    let inner = |f: &[f64], g: &[f64]| m.inner(f, g);
    let q0 = 1.0 / m.total().sqrt();
    let mut values = vec![vec![q0; s1]];
    let mut polys = vec![Poly::constant(q0)];
    for i in 1..s1 {
        let mut v: Vec<f64> = m.points.iter().zip(&values[i - 1]).map(|(x, q)| x * q).collect();
        let mut coeffs = polys[i - 1].mul_linear(0.0);
        let raw = inner(&v, &v).sqrt();
        for _ in 0..2 {
            for j in 0..i {
                let c = inner(&v, &values[j]);
                for (vk, qk) in v.iter_mut().zip(&values[j]) {
                    *vk -= c * qk;
                }
                coeffs = coeffs.sub(&polys[j].scale(c));
            }
        }
        let norm = inner(&v, &v).sqrt();
        if norm <= RANK_TOL * raw {
            return Err(Error::DegenerateMeasure { rank: i, support: s1 });
        }
        values.push(v.iter().map(|x| x / norm).collect());
        polys.push(coeffs.scale(1.0 / norm));
    }
    let recurrence = (0..s1)
        .map(|i| {
            let xq: Vec<f64> = m.points.iter().zip(&values[i]).map(|(x, q)| x * q).collect();
            Recurrence {
                a: inner(&xq, &values[i]),
                b: if i > 0 { inner(&xq, &values[i - 1]) } else { 0.0 },
                c: if i + 1 < s1 { inner(&xq, &values[i + 1]) } else { 0.0 },
            }
        })
        .collect();
    Ok(PolySequence {
        polys,
        values,
        norms: vec![1.0; s1],
        recurrence,
        points: m.points.clone(),
        weights: m.weights.clone(),
    })
}

fn check_top(m: &Measure, lambda: f64) -> Result<()> {
    let top = m.points.first().copied();
    match top {
        Some(t) if (t - lambda).abs() <= 1e-8 * lambda.abs().max(1.0) => Ok(()),
        _ => Err(Error::InvariantViolation(format!(
            "{lambda} is not the largest support point of the measure (found {top:?})"
        ))),
    }
}

/// Orthogonal sequence scaled so that `‖p_i‖² = p_i(λ)`.
pub fn predistance_sequence(m: &Measure, lambda: f64) -> Result<PolySequence> {
    check_top(m, lambda)?;
    let mut seq = orthonormal_sequence(m)?;
    let alpha: Vec<f64> = seq.values.iter().map(|v| v[0]).collect();
    for (degree, &a) in alpha.iter().enumerate() {
        if a.abs() <= 1e-12 {
            return Err(Error::ZeroAtLambda { degree });
        }
    }
    for i in 0..seq.len() {
        seq.polys[i] = seq.polys[i].scale(alpha[i]);
        seq.values[i].iter_mut().for_each(|x| *x *= alpha[i]);
        seq.norms[i] = alpha[i] * alpha[i];
        let r = &mut seq.recurrence[i];
        if i > 0 {
            r.b *= alpha[i] / alpha[i - 1];
        }
        if i + 1 < alpha.len() {
            r.c *= alpha[i] / alpha[i + 1];
        }
    }
    Ok(seq)
}

/// `p(A)` restricted to the columns `cols`, evaluated spectrally as
/// `Σ_r p(θ_r) E_r`.
pub fn apply_poly(dec: &SpectralDecomposition, p: &Poly, cols: &[usize]) -> DMatrix<f64> {
    let values: Vec<f64> = dec.eigs().iter().map(|&t| p.eval(t)).collect();
    dec.apply_values(&values, cols)
}

/// The local adjacency polynomial `Q_k` together with `Q_k(λ)`, computed
/// from an orthonormal sequence whose first support point is `λ`.
///
/// `k` beyond the last degree is clamped: on an `s + 1` point support every
/// polynomial agrees with one of degree `≤ s`.
pub fn adjacency_polynomial_of(seq: &PolySequence, k: usize) -> (Poly, f64) {
    let k = k.min(seq.len() - 1);
    let at_top: Vec<f64> = (0..=k).map(|i| seq.values(i)[0]).collect();
    let value = at_top.iter().map(|x| x * x).sum::<f64>().sqrt();
    let q = (0..=k).fold(Poly::zero(), |acc, i| acc.add(&seq.poly(i).scale(at_top[i] / value)));
    (q, value)
}

/// `Q_k`, the degree-`≤ k` polynomial of unit `m`-norm maximising `p(λ)`,
/// and that maximum.
pub fn adjacency_polynomial(m: &Measure, k: usize, lambda: f64) -> Result<(Poly, f64)> {
    check_top(m, lambda)?;
    let seq = orthonormal_sequence(m)?;
    Ok(adjacency_polynomial_of(&seq, k))
}

/// `(1/v_u) √(Σ_{v ∈ N_k(u)} v_v²)`, the upper bound on `Q_k(λ)` at `u`.
pub fn excess_bound(perron: &PerronVector, dd: &DistanceData, u: usize, k: usize) -> f64 {
    let sum: f64 = dd.ball(u, k).iter().map(|&v| perron.at(v).powi(2)).sum();
    sum.sqrt() / perron.at(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, FamilySpec};
    use crate::graph::{distance_data, Graph};
    use crate::spectral::{decompose, local_measure, perron, Scope, DEFAULT_TOL};

    fn family(name: &str, params: &[usize]) -> Graph {
        generate(&FamilySpec::new(name, params)).unwrap()
    }

    fn close(a: &[f64], b: &[f64], eps: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::from_roots(&[1.0, -2.0]);
        assert_eq!(p.coeffs(), &[-2.0, 1.0, 1.0]);
        assert_eq!(p.eval(3.0), 10.0);
        assert_eq!(p.sub(&p), Poly::zero());
        let q = Poly::interpolate(&[0.0, 1.0, 2.0], &[1.0, 2.0, 5.0]);
        assert!(close(q.coeffs(), &[1.0, 0.0, 1.0], 1e-14));
    }

    #[test]
    fn two_point_measure() {
        let m = Measure::from_points(Scope::Global, &[1.0, -1.0], &[0.5, 0.5], 1e-12);
        let seq = orthonormal_sequence(&m).unwrap();
        assert!(close(seq.poly(0).coeffs(), &[1.0], 1e-14));
        assert!(close(seq.poly(1).coeffs(), &[0.0, 1.0], 1e-14));
    }

    #[test]
    fn bipartite_global_measure_has_zero_diagonal_recurrence() {
        let dec = decompose(&family("cycle", &[6]), DEFAULT_TOL).unwrap();
        let seq = orthonormal_sequence(&local_measure(&dec, &Scope::Global)).unwrap();
        assert_eq!(seq.len(), 4);
        assert!(seq.recurrence().iter().all(|r| r.a.abs() < 1e-12));
    }

    #[test]
    fn cube_vertex_measure_is_orthonormal() {
        let dec = decompose(&family("hypercube", &[3]), DEFAULT_TOL).unwrap();
        let seq = orthonormal_sequence(&local_measure(&dec, &Scope::Vertex(5))).unwrap();
        assert!(seq.orthogonality_residual() < 1e-10);
        assert!(seq.recurrence_residual() < 1e-10);
        for i in 0..seq.len() {
            let v = seq.values(i);
            assert!((seq.inner(v, v) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn recurrence_evaluation_matches_monomials() {
        let dec = decompose(&family("petersen", &[]), DEFAULT_TOL).unwrap();
        let seq = orthonormal_sequence(&local_measure(&dec, &Scope::Global)).unwrap();
        for i in 0..seq.len() {
            for x in [-2.5, 0.3, 1.7, 4.0] {
                let (a, b) = (seq.eval(i, x), seq.poly(i).eval(x));
                assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn degenerate_measure() {
        let m = Measure {
            scope: Scope::Global,
            support: vec![0, 1],
            points: vec![1.0, 1.0],
            weights: vec![0.5, 0.5],
        };
        assert_eq!(
            orthonormal_sequence(&m),
            Err(Error::DegenerateMeasure { rank: 1, support: 2 })
        );
    }

    #[test]
    fn delorme_fourth_predistance_polynomial() {
        let g = family("delorme", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let seq = predistance_sequence(&local_measure(&dec, &Scope::Global), dec.lambda()).unwrap();
        assert!(close(seq.poly(4).coeffs(), &[4.5, 0.0, -4.0, 0.0, 0.5], 1e-9));
        assert!(close(seq.poly(0).coeffs(), &[1.0], 1e-12));
        assert!(seq.normalisation_residual() < 1e-10);
        let p4 = apply_poly(&dec, seq.poly(4), &(0..32).collect::<Vec<_>>());
        let a4 = distance_data(&g).distance_matrix(4);
        assert!(crate::spectral::max_abs(&(p4 - a4)) < 1e-8);
    }

    #[test]
    fn cube_antipodal_predistance_value() {
        let dec = decompose(&family("hypercube", &[3]), DEFAULT_TOL).unwrap();
        let seq = predistance_sequence(&local_measure(&dec, &Scope::Global), dec.lambda()).unwrap();
        assert!((seq.values(3)[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn predistance_rejects_wrong_lambda() {
        let dec = decompose(&family("cycle", &[5]), DEFAULT_TOL).unwrap();
        let m = local_measure(&dec, &Scope::Global);
        assert!(predistance_sequence(&m, 1.0).is_err());
    }

    #[test]
    fn apply_identity_and_annihilator() {
        let g = family("heawood", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let all: Vec<usize> = (0..g.n()).collect();
        let x = Poly::new(vec![0.0, 1.0]);
        assert!(crate::spectral::max_abs(&(apply_poly(&dec, &x, &all) - g.adjacency_matrix())) < 1e-10);
        let annihilator = Poly::from_roots(dec.eigs());
        assert!(crate::spectral::max_abs(&apply_poly(&dec, &annihilator, &all)) < 1e-9);
        let block = apply_poly(&dec, &x, &[3, 9]);
        assert_eq!(block.shape(), (14, 2));
        assert!((block[(9, 1)]).abs() < 1e-12);
    }

    /// Maximises `p(λ)` over `‖p‖ ≤ 1` directly in the monomial basis:
    /// the optimum is `√(φᵀ G⁻¹ φ)` with `G` the moment matrix and `φ` the
    /// monomials at `λ`.
    fn brute_force_top(m: &Measure, k: usize) -> f64 {
        let moment = |j: usize| -> f64 {
            m.points.iter().zip(&m.weights).map(|(x, w)| w * x.powi(j as i32)).sum()
        };
        let g = DMatrix::from_fn(k + 1, k + 1, |i, j| moment(i + j));
        let phi = nalgebra::DVector::from_fn(k + 1, |i, _| m.points[0].powi(i as i32));
        let sol = g.lu().solve(&phi).unwrap();
        phi.dot(&sol).sqrt()
    }

    #[test]
    fn adjacency_polynomial_matches_constrained_maximum() {
        let g = family("path", &[5]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        for u in 0..g.n() {
            let m = local_measure(&dec, &Scope::Vertex(u));
            for k in 0..m.len() {
                let (q, value) = adjacency_polynomial(&m, k, dec.lambda()).unwrap();
                let brute = brute_force_top(&m, k);
                assert!((value - brute).abs() < 1e-8 * brute, "u={u} k={k}: {value} vs {brute}");
                assert!((q.eval(dec.lambda()) - value).abs() < 1e-9);
                let vals: Vec<f64> = m.points.iter().map(|&x| q.eval(x)).collect();
                assert!((m.inner(&vals, &vals) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degree_zero_adjacency_polynomial_is_one() {
        let dec = decompose(&family("petersen", &[]), DEFAULT_TOL).unwrap();
        let m = local_measure(&dec, &Scope::Vertex(0));
        let (q, value) = adjacency_polynomial(&m, 0, dec.lambda()).unwrap();
        assert!(close(q.coeffs(), &[1.0], 1e-12));
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn excess_bounds() {
        let g = family("delorme", &[]);
        let dec = decompose(&g, DEFAULT_TOL).unwrap();
        let pv = perron(&g, &dec).unwrap();
        let dd = distance_data(&g);
        for u in 0..g.n() {
            assert!((excess_bound(&pv, &dd, u, dd.ecc(u)) - 32f64.sqrt()).abs() < 1e-12);
            let expected = ((32 - dd.sphere_size(u, 5)) as f64).sqrt();
            assert!((excess_bound(&pv, &dd, u, 4) - expected).abs() < 1e-12);
            for k in 0..=dd.ecc(u) {
                let ball = dd.ball(u, k).len() as f64;
                assert!((excess_bound(&pv, &dd, u, k) - ball.sqrt()).abs() < 1e-12);
            }
        }
    }
}
