use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::Graph;

/// All-pairs hop distances with per-vertex eccentricities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceData {
    n: usize,
    dist: Vec<usize>,
    ecc: Vec<usize>,
    diameter: usize,
    /// `sphere_sizes[u][i]` = number of vertices at distance exactly `i` from `u`.
    sphere_sizes: Vec<Vec<usize>>,
}

fn bfs(g: &Graph, source: usize, dist: &mut [usize]) {
    dist.fill(usize::MAX);
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Runs a BFS from every vertex.
pub fn distance_data(g: &Graph) -> DistanceData {
    let n = g.n();
    let mut dist = vec![0; n * n];
    for (u, row) in dist.chunks_mut(n).enumerate() {
        bfs(g, u, row);
    }
    let ecc: Vec<usize> = dist.chunks(n).map(|row| *row.iter().max().unwrap()).collect();
    let diameter = *ecc.iter().max().unwrap();
    let sphere_sizes = dist
        .chunks(n)
        .zip(&ecc)
        .map(|(row, &e)| {
            let mut sizes = vec![0; e + 1];
            for &d in row {
                sizes[d] += 1;
            }
            sizes
        })
        .collect();
    DistanceData {
        n,
        dist,
        ecc,
        diameter,
        sphere_sizes,
    }
}

impl DistanceData {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[usize] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn ecc(&self, u: usize) -> usize {
        self.ecc[u]
    }

    pub fn eccentricities(&self) -> &[usize] {
        &self.ecc
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// Vertices at distance exactly `i` from `u`, ascending.
    pub fn sphere(&self, u: usize, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.distance(u, v) == i).collect()
    }

    pub fn sphere_size(&self, u: usize, i: usize) -> usize {
        self.sphere_sizes[u].get(i).copied().unwrap_or(0)
    }

    pub fn sphere_sizes(&self, u: usize) -> &[usize] {
        &self.sphere_sizes[u]
    }

    /// Vertices at distance at most `k` from `u`, ascending.
    pub fn ball(&self, u: usize, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.distance(u, v) <= k).collect()
    }

    /// 0/1 matrix of the distance-`i` relation.
    pub fn distance_matrix(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |u, v| {
            if self.distance(u, v) == i {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Length of a shortest cycle, `None` for trees.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for source in 0..n {
        dist.fill(usize::MAX);
        dist[source] = 0;
        parent[source] = usize::MAX;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] >= b) {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, FamilySpec};

    fn family(name: &str, params: &[usize]) -> Graph {
        generate(&FamilySpec::new(name, params)).unwrap()
    }

    #[test]
    fn cycle_metric() {
        let dd = distance_data(&family("cycle", &[6]));
        assert_eq!(dd.diameter(), 3);
        assert!(dd.eccentricities().iter().all(|&e| e == 3));
        assert_eq!(dd.sphere_sizes(0), &[1, 2, 2, 1]);
        assert_eq!(dd.ball(0, 1), vec![0, 1, 5]);
    }

    #[test]
    fn cubic_fixture_diameters() {
        assert_eq!(distance_data(&family("delorme", &[])).diameter(), 5);
        assert_eq!(distance_data(&family("cay_d8", &[])).diameter(), 4);
    }

    #[test]
    fn girths() {
        assert_eq!(girth(&family("cycle", &[6])), Some(6));
        assert_eq!(girth(&family("complete_bipartite", &[2, 3])), Some(4));
        assert_eq!(girth(&family("subdivision_k4", &[])), Some(6));
        assert_eq!(girth(&family("petersen", &[])), Some(5));
        assert_eq!(girth(&family("heawood", &[])), Some(6));
        assert_eq!(girth(&family("path", &[5])), None);
    }

    #[test]
    fn distance_matrices_partition_all_pairs() {
        let dd = distance_data(&family("hypercube", &[3]));
        let total: DMatrix<f64> = (0..=dd.diameter()).map(|i| dd.distance_matrix(i)).sum();
        assert_eq!(total, DMatrix::from_element(8, 8, 1.0));
    }
}
