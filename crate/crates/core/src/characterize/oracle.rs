//! Combinatorial oracle: neighbour counts sphere by sphere, no spectra.

use serde::Serialize;

use super::Witness;
use crate::graph::{Bipartition, DistanceData, Graph, Side};
use crate::spectral::PerronVector;

/// Neighbours of a vertex at distance `i` from the root that lie at
/// distance `i − 1` (`c`), `i` (`a`) and `i + 1` (`b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Intersection {
    pub c: usize,
    pub a: usize,
    pub b: usize,
}

/// Intersection numbers around `root`, `rows[i]` for distance `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntersectionNumbers {
    pub root: usize,
    pub rows: Vec<Intersection>,
}

impl IntersectionNumbers {
    /// The intersection array `{b_0, …, b_{e−1}; c_1, …, c_e}`.
    pub fn array(&self) -> (Vec<usize>, Vec<usize>) {
        let e = self.rows.len() - 1;
        (
            self.rows[..e].iter().map(|r| r.b).collect(),
            self.rows[1..].iter().map(|r| r.c).collect(),
        )
    }

    fn same_array(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

/// Two vertices in the same sphere around `root` with different counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub root: usize,
    pub distance: usize,
    pub first: usize,
    pub first_counts: Intersection,
    pub second: usize,
    pub second_counts: Intersection,
}

impl From<&Conflict> for Witness {
    fn from(c: &Conflict) -> Self {
        let as_f64 = |i: Intersection| [i.c as f64, i.a as f64, i.b as f64];
        Witness::Conflict {
            root: c.root,
            distance: c.distance,
            first: c.first,
            first_counts: as_f64(c.first_counts),
            second: c.second,
            second_counts: as_f64(c.second_counts),
        }
    }
}

fn counts(g: &Graph, dd: &DistanceData, u: usize, v: usize) -> Intersection {
    let i = dd.distance(u, v);
    let mut out = Intersection { c: 0, a: 0, b: 0 };
    for &w in g.neighbors(v) {
        match dd.distance(u, w) {
            j if j + 1 == i => out.c += 1,
            j if j == i => out.a += 1,
            _ => out.b += 1,
        }
    }
    out
}

/// Checks that the counts `(c, a, b)` depend only on the distance from `u`.
pub fn locally_distance_regular(
    g: &Graph,
    dd: &DistanceData,
    u: usize,
) -> Result<IntersectionNumbers, Conflict> {
    let mut rows = Vec::with_capacity(dd.ecc(u) + 1);
    for i in 0..=dd.ecc(u) {
        let sphere = dd.sphere(u, i);
        let first = sphere[0];
        let expected = counts(g, dd, u, first);
        for &v in &sphere[1..] {
            let got = counts(g, dd, u, v);
            if got != expected {
                return Err(Conflict {
                    root: u,
                    distance: i,
                    first,
                    first_counts: expected,
                    second: v,
                    second_counts: got,
                });
            }
        }
        rows.push(expected);
    }
    Ok(IntersectionNumbers { root: u, rows })
}

/// Oracle verdicts for the whole graph.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub local: Vec<Result<IntersectionNumbers, Conflict>>,
    /// Every vertex locally distance-regular with one common array.
    pub drg: bool,
    /// Bipartite, and every vertex locally distance-regular with one common
    /// array per side.
    pub dbrg: bool,
}

impl OracleReport {
    pub fn first_conflict(&self) -> Option<&Conflict> {
        self.local.iter().find_map(|r| r.as_ref().err())
    }
}

pub fn oracle(g: &Graph, dd: &DistanceData, part: Option<&Bipartition>) -> OracleReport {
    let local: Vec<_> = (0..g.n()).map(|u| locally_distance_regular(g, dd, u)).collect();
    let uniform = |members: &mut dyn Iterator<Item = usize>| -> bool {
        let mut first: Option<&IntersectionNumbers> = None;
        for u in members {
            match (&local[u], first) {
                (Err(_), _) => return false,
                (Ok(x), None) => first = Some(x),
                (Ok(x), Some(f)) if !x.same_array(f) => return false,
                _ => {}
            }
        }
        true
    };
    let drg = uniform(&mut (0..g.n()));
    let dbrg = part.is_some_and(|p| {
        uniform(&mut p.members(Side::B).iter().copied()) && uniform(&mut p.members(Side::C).iter().copied())
    });
    OracleReport { local, drg, dbrg }
}

/// Perron-weighted counts: for `v` at distance `i` from `u`, the sums
/// `(1/v_v) Σ v_w` over neighbours `w` at distances `i − 1`, `i`, `i + 1`.
/// Returns the first pair of same-sphere vertices whose weighted counts
/// differ by more than `tol` (relative), or `None` when all agree.
///
/// On regular and semiregular graphs this reduces to
/// [`locally_distance_regular`].
pub fn weighted_conflict(
    g: &Graph,
    dd: &DistanceData,
    perron: &PerronVector,
    u: usize,
    tol: f64,
) -> Option<Witness> {
    let weighted = |v: usize| -> [f64; 3] {
        let i = dd.distance(u, v);
        let mut out = [0.0; 3];
        for &w in g.neighbors(v) {
            let slot = match dd.distance(u, w) {
                j if j + 1 == i => 0,
                j if j == i => 1,
                _ => 2,
            };
            out[slot] += perron.at(w);
        }
        out.map(|x| x / perron.at(v))
    };
    for i in 0..=dd.ecc(u) {
        let sphere = dd.sphere(u, i);
        let first = sphere[0];
        let expected = weighted(first);
        for &v in &sphere[1..] {
            let got = weighted(v);
            let differs = expected
                .iter()
                .zip(&got)
                .any(|(a, b)| (a - b).abs() > tol * a.abs().max(b.abs()).max(1.0));
            if differs {
                return Some(Witness::Conflict {
                    root: u,
                    distance: i,
                    first,
                    first_counts: expected,
                    second: v,
                    second_counts: got,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, FamilySpec};
    use crate::graph::{bipartition, distance_data};
    use crate::spectral::{decompose, perron, DEFAULT_TOL};

    fn family(name: &str, params: &[usize]) -> Graph {
        generate(&FamilySpec::new(name, params)).unwrap()
    }

    #[test]
    fn cube_intersection_array() {
        let g = family("hypercube", &[3]);
        let dd = distance_data(&g);
        for u in 0..8 {
            let numbers = locally_distance_regular(&g, &dd, u).unwrap();
            assert_eq!(numbers.array(), (vec![3, 2, 1], vec![1, 2, 3]));
            assert!(numbers.rows.iter().all(|r| r.a == 0));
        }
        assert!(oracle(&g, &dd, bipartition(&g).ok().as_ref()).drg);
    }

    #[test]
    fn delorme_black_vertex_conflicts_at_distance_three() {
        let g = family("delorme", &[]);
        let dd = distance_data(&g);
        // Black (2, 2) is vertex 10.
        let conflict = locally_distance_regular(&g, &dd, 10).unwrap_err();
        assert_eq!(conflict.distance, 3);
        assert_ne!(conflict.first_counts, conflict.second_counts);
        let report = oracle(&g, &dd, bipartition(&g).ok().as_ref());
        assert!(!report.drg && !report.dbrg);
    }

    #[test]
    fn complete_bipartite_is_biregular_not_regular() {
        let g = family("complete_bipartite", &[2, 3]);
        let dd = distance_data(&g);
        for u in 0..5 {
            assert!(locally_distance_regular(&g, &dd, u).is_ok());
        }
        let report = oracle(&g, &dd, bipartition(&g).ok().as_ref());
        assert!(!report.drg && report.dbrg);
    }

    #[test]
    fn petersen_is_distance_regular() {
        let g = family("petersen", &[]);
        let dd = distance_data(&g);
        let report = oracle(&g, &dd, None);
        assert!(report.drg && !report.dbrg);
        let (b, c) = report.local[0].as_ref().unwrap().array();
        assert_eq!((b, c), (vec![3, 2], vec![1, 1]));
    }

    #[test]
    fn path_end_is_locally_regular_but_graph_is_not() {
        let g = family("path", &[4]);
        let dd = distance_data(&g);
        assert!(locally_distance_regular(&g, &dd, 0).is_ok());
        assert!(locally_distance_regular(&g, &dd, 1).is_err());
    }

    #[test]
    fn weighted_counts_agree_with_plain_counts_on_semiregular_graphs() {
        for (name, params) in [("subdivision_k4", vec![]), ("complete_bipartite", vec![2, 4]), ("delorme", vec![])] {
            let g = family(name, &params);
            let dd = distance_data(&g);
            let pv = perron(&g, &decompose(&g, DEFAULT_TOL).unwrap()).unwrap();
            for u in 0..g.n() {
                assert_eq!(
                    weighted_conflict(&g, &dd, &pv, u, DEFAULT_TOL).is_none(),
                    locally_distance_regular(&g, &dd, u).is_ok(),
                    "{name} vertex {u}"
                );
            }
        }
    }
}
