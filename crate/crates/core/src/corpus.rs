//! Deterministic graph generators: named families, small bipartite
//! enumeration and random connected graphs.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bipartition, distance_data, halved_graphs, Graph};
use crate::spectral::{decompose, SpectralDecomposition, DEFAULT_TOL};

/// Largest generated graph; dense analysis beyond this is not a goal.
const MAX_VERTICES: usize = 2048;

/// A family name plus its integer parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub params: Vec<usize>,
}

impl FamilySpec {
    pub fn new(name: &str, params: &[usize]) -> Self {
        FamilySpec {
            name: name.to_string(),
            params: params.to_vec(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for p in &self.params {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// `(name, parameter synopsis)` for every family [`generate`] knows.
pub const FAMILIES: &[(&str, &str)] = &[
    ("delorme", ""),
    ("cay_d8", ""),
    ("hypercube", "n"),
    ("cycle", "n"),
    ("complete_bipartite", "m n"),
    ("subdivision_k4", ""),
    ("heawood", ""),
    ("petersen", ""),
    ("path", "n"),
    ("star", "leaves"),
];

pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    let bad = |detail: &str| Error::BadParams {
        family: spec.name.clone(),
        detail: detail.to_string(),
    };
    let arity = FAMILIES
        .iter()
        .find(|(name, _)| *name == spec.name)
        .map(|(_, synopsis)| synopsis.split_whitespace().count())
        .ok_or_else(|| Error::UnknownFamily(spec.name.clone()))?;
    if spec.params.len() != arity {
        return Err(bad(&format!("expected {arity} parameter(s), got {}", spec.params.len())));
    }
    let p = &spec.params;
    let too_big = |n: usize| n > MAX_VERTICES;
    match spec.name.as_str() {
        "delorme" => {
            let g = delorme();
            delorme_gate(&g)?;
            Ok(g)
        }
        "cay_d8" => {
            let g = cay_d8();
            cay_d8_gate(&g)?;
            Ok(g)
        }
        "hypercube" => {
            if p[0] == 0 || too_big(1usize.checked_shl(p[0] as u32).unwrap_or(usize::MAX)) {
                return Err(bad("dimension must be between 1 and 11"));
            }
            Ok(hypercube(p[0]))
        }
        "cycle" => {
            if p[0] < 3 || too_big(p[0]) {
                return Err(bad("length must be at least 3"));
            }
            Graph::from_edges(p[0], (0..p[0]).map(|i| (i, (i + 1) % p[0])))
        }
        "complete_bipartite" => {
            let (m, n) = (p[0], p[1]);
            if m == 0 || n == 0 || too_big(m + n) {
                return Err(bad("both sides must be nonempty"));
            }
            Graph::from_edges(m + n, (0..m).flat_map(|i| (m..m + n).map(move |j| (i, j))))
        }
        "subdivision_k4" => {
            let branch_pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            let edges = branch_pairs
                .iter()
                .enumerate()
                .flat_map(|(i, &(a, b))| [(a, 4 + i), (b, 4 + i)]);
            Graph::from_edges(10, edges)
        }
        "heawood" => {
            let edges = (0..7).flat_map(|i| [i, (i + 1) % 7, (i + 3) % 7].map(|pt| (pt, 7 + i)));
            Graph::from_edges(14, edges)
        }
        "petersen" => {
            let edges = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
            Graph::from_edges(10, edges)
        }
        "path" => {
            if p[0] == 0 || too_big(p[0]) {
                return Err(bad("needs at least one vertex"));
            }
            Graph::from_edges(p[0], (1..p[0]).map(|i| (i - 1, i)))
        }
        "star" => {
            if p[0] == 0 || too_big(p[0] + 1) {
                return Err(bad("needs at least one leaf"));
            }
            Graph::from_edges(p[0] + 1, (1..=p[0]).map(|i| (0, i)))
        }
        _ => unreachable!("family table and generator out of sync"),
    }
}

/// 32 vertices: black `(x, y)` is `4x + y`, white `(x, y)` is `16 + 4x + y`,
/// and white `(x, y)` is adjacent to black `(x, y)`, `(x + 1, y)` and
/// `(x + 1, y + 1)`, coordinates mod 4.
fn delorme() -> Graph {
    let black = |x: usize, y: usize| 4 * (x % 4) + y % 4;
    let white = |x: usize, y: usize| 16 + 4 * x + y;
    let edges = (0..4).flat_map(|x| {
        (0..4).flat_map(move |y| {
            [black(x, y), black(x + 1, y), black(x + 1, y + 1)].map(|b| (white(x, y), b))
        })
    });
    Graph::from_edges(32, edges).expect("delorme construction")
}

/// Dihedral group of order 16 with element `s^f r^i` at index `8f + i`,
/// joined by right multiplication with `s r`, `s r²` and `s r⁴`.
fn cay_d8() -> Graph {
    let mul = |(f1, i1): (usize, usize), (f2, i2): (usize, usize)| {
        if f2 == 1 {
            ((f1 + 1) % 2, (8 + i2 - i1) % 8)
        } else {
            (f1, (i1 + i2) % 8)
        }
    };
    let connection = [(1, 1), (1, 2), (1, 4)];
    let edges = (0..16).flat_map(|g| {
        connection.map(|s| {
            let (f, i) = mul((g / 8, g % 8), s);
            (g, 8 * f + i)
        })
    });
    Graph::from_edges(16, edges).expect("cay_d8 construction")
}

fn hypercube(dim: usize) -> Graph {
    let n = 1 << dim;
    let edges = (0..n).flat_map(|v| (0..dim).map(move |b| (v, v ^ (1 << b))));
    Graph::from_edges(n, edges).expect("hypercube construction")
}

/// True when `dec` has exactly the listed `(eigenvalue, multiplicity)` pairs,
/// in decreasing order, each eigenvalue within `eps`.
pub fn spectrum_matches(dec: &SpectralDecomposition, expected: &[(f64, usize)], eps: f64) -> bool {
    dec.len() == expected.len()
        && dec
            .eigs()
            .iter()
            .zip(dec.mult())
            .zip(expected)
            .all(|((t, m), (et, em))| (t - et).abs() <= eps && m == em)
}

pub fn delorme_spectrum() -> Vec<(f64, usize)> {
    let s5 = 5f64.sqrt();
    vec![(3.0, 1), (s5, 6), (1.0, 9), (-1.0, 9), (-s5, 6), (-3.0, 1)]
}

pub fn cay_d8_spectrum() -> Vec<(f64, usize)> {
    let s3 = 3f64.sqrt();
    vec![(3.0, 1), (s3, 4), (1.0, 3), (-1.0, 3), (-s3, 4), (-3.0, 1)]
}

pub fn cay_d8_halved_spectrum() -> Vec<(f64, usize)> {
    vec![(6.0, 1), (0.0, 4), (-2.0, 3)]
}

/// A vertex with two partners at distance 3: one reached by two walks of
/// length 3 and one reached by a single walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WalkWitness {
    pub root: usize,
    pub two_walks: usize,
    pub one_walk: usize,
}

/// Searches for a [`WalkWitness`]; its existence shows that the number of
/// length-3 walks between vertices at distance 3 is not constant.
pub fn walk_witness(g: &Graph) -> Option<WalkWitness> {
    let a = g.adjacency_matrix();
    let a3: DMatrix<f64> = &a * &a * &a;
    let dd = distance_data(g);
    (0..g.n()).find_map(|root| {
        let at3 = dd.sphere(root, 3);
        let with = |count: f64| at3.iter().copied().find(|&v| a3[(root, v)] == count);
        Some(WalkWitness {
            root,
            two_walks: with(2.0)?,
            one_walk: with(1.0)?,
        })
    })
}

fn gate_failure(family: &str, detail: String) -> Error {
    Error::FixtureGateFailed {
        family: family.to_string(),
        detail,
    }
}

fn delorme_gate(g: &Graph) -> Result<()> {
    let fail = |d: String| gate_failure("delorme", d);
    let dec = decompose(g, DEFAULT_TOL).map_err(|e| fail(e.to_string()))?;
    if !spectrum_matches(&dec, &delorme_spectrum(), 1e-8) {
        return Err(fail(format!("spectrum {:?} with multiplicities {:?}", dec.eigs(), dec.mult())));
    }
    let d = distance_data(g).diameter();
    if d != 5 {
        return Err(fail(format!("diameter {d}, expected 5")));
    }
    // The witness must start at a black vertex.
    match walk_witness(g) {
        Some(w) if w.root < 16 => Ok(()),
        other => Err(fail(format!("no length-3 walk-count witness at a black vertex ({other:?})"))),
    }
}

fn cay_d8_gate(g: &Graph) -> Result<()> {
    let fail = |d: String| gate_failure("cay_d8", d);
    let dec = decompose(g, DEFAULT_TOL).map_err(|e| fail(e.to_string()))?;
    if !spectrum_matches(&dec, &cay_d8_spectrum(), 1e-8) {
        return Err(fail(format!("spectrum {:?} with multiplicities {:?}", dec.eigs(), dec.mult())));
    }
    let d = distance_data(g).diameter();
    if d != 4 {
        return Err(fail(format!("diameter {d}, expected 4")));
    }
    let part = bipartition(g).map_err(|e| fail(e.to_string()))?;
    let halves = halved_graphs(g, &part).map_err(|e| fail(e.to_string()))?;
    for h in [&halves.h_b, &halves.h_c] {
        let hdec = decompose(h, DEFAULT_TOL).map_err(|e| fail(e.to_string()))?;
        if !spectrum_matches(&hdec, &cay_d8_halved_spectrum(), 1e-8) {
            return Err(fail(format!("halved spectrum {:?} / {:?}", hdec.eigs(), hdec.mult())));
        }
    }
    Ok(())
}

/// Named families used as the standing test corpus.
pub fn standard_corpus() -> Vec<FamilySpec> {
    let mut specs: Vec<FamilySpec> = ["delorme", "cay_d8", "subdivision_k4", "heawood", "petersen"]
        .iter()
        .map(|name| FamilySpec::new(name, &[]))
        .collect();
    specs.extend((1..=5).map(|n| FamilySpec::new("hypercube", &[n])));
    specs.extend((3..=10).map(|n| FamilySpec::new("cycle", &[n])));
    specs.extend((1..=7).map(|n| FamilySpec::new("path", &[n])));
    specs.extend((1..=5).map(|n| FamilySpec::new("star", &[n])));
    for m in 1..=4 {
        for n in m..=5 {
            specs.push(FamilySpec::new("complete_bipartite", &[m, n]));
        }
    }
    specs
}

/// Connected bipartite graphs on `2..=max_n` vertices.
///
/// For each split `b + c = n` with `b ≥ c`, yields every `b × c` biadjacency
/// matrix without zero rows or columns whose rows and columns are both in
/// nondecreasing lexicographic order. Every 0/1 matrix can be brought to that
/// form by permuting rows and columns, so every isomorphism class appears at
/// least once; some appear several times.
pub fn enumerate_small_bipartite(max_n: usize) -> impl Iterator<Item = Graph> {
    assert!(max_n <= 12, "enumeration is limited to 12 vertices");
    (2..=max_n).flat_map(|n| {
        (n.div_ceil(2)..n).flat_map(move |b| {
            let c = n - b;
            sorted_biadjacency(b, c)
                .into_iter()
                .filter_map(move |rows| biadjacency_graph(b, c, &rows).ok())
        })
    })
}

/// Bit `c − 1 − j` of a row holds column `j`, so integer order on rows is
/// lexicographic order with column 0 most significant.
fn biadjacency_graph(b: usize, c: usize, rows: &[u32]) -> Result<Graph> {
    let edges = rows.iter().enumerate().flat_map(|(i, &row)| {
        (0..c)
            .filter(move |&j| row >> (c - 1 - j) & 1 == 1)
            .map(move |j| (i, b + j))
    });
    Graph::from_edges(b + c, edges)
}

pub(crate) fn sorted_biadjacency(b: usize, c: usize) -> Vec<Vec<u32>> {
    fn extend(
        b: usize,
        c: usize,
        rows: &mut Vec<u32>,
        ties: u32,
        out: &mut Vec<Vec<u32>>,
    ) {
        if rows.len() == b {
            // Column 0 is the smallest column; nonzero means no empty column.
            if rows.iter().any(|&r| r >> (c - 1) & 1 == 1) {
                out.push(rows.clone());
            }
            return;
        }
        let start = rows.last().copied().unwrap_or(1);
        for row in start..(1u32 << c) {
            // `ties` bit j: columns j and j + 1 agree on every row so far.
            let mut next_ties = ties;
            let mut ok = true;
            for j in 0..c.saturating_sub(1) {
                if ties >> j & 1 == 0 {
                    continue;
                }
                let left = row >> (c - 1 - j) & 1;
                let right = row >> (c - 2 - j) & 1;
                if left > right {
                    ok = false;
                    break;
                }
                if left < right {
                    next_ties &= !(1 << j);
                }
            }
            if ok {
                rows.push(row);
                extend(b, c, rows, next_ties, out);
                rows.pop();
            }
        }
    }
    let mut out = Vec::new();
    let all_tied = (1u32 << c.saturating_sub(1)) - 1;
    extend(b, c, &mut Vec::with_capacity(b), all_tied, &mut out);
    out
}

/// `G(n, p)` conditioned on connectivity by rejection.
pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    assert!(n >= 1 && (0.0..=1.0).contains(&p) && (n == 1 || p > 0.0));
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(n, edges) {
            return g;
        }
    }
}
