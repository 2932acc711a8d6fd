use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    B,
    C,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::B => Side::C,
            Side::C => Side::B,
        }
    }
}

/// Proper 2-colouring `(B, C)` of a connected bipartite graph.
///
/// When the graph is semiregular, `k` is the common degree on `B` and `ell`
/// the common degree on `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    side_b: Vec<usize>,
    side_c: Vec<usize>,
    side_of: Vec<Side>,
    k: Option<usize>,
    ell: Option<usize>,
}

impl Bipartition {
    /// Builds the partition whose `B` side is `side_b`, checking that every
    /// edge crosses. Degree fields are filled when both sides are regular.
    pub fn from_side_b(g: &Graph, side_b: &[usize]) -> Result<Self> {
        let mut side_of = vec![Side::C; g.n()];
        for &v in side_b {
            side_of[v] = Side::B;
        }
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| side_of[u] == side_of[v]) {
            return Err(Error::InvariantViolation(format!(
                "edge ({u}, {v}) does not cross the bipartition"
            )));
        }
        let mut part = Self::from_colouring(side_of);
        if let Ok((k, ell)) = semiregular_profile(g, &part) {
            part.k = Some(k);
            part.ell = Some(ell);
        }
        Ok(part)
    }

    fn from_colouring(side_of: Vec<Side>) -> Self {
        let (side_b, side_c) = (0..side_of.len()).partition(|&v| side_of[v] == Side::B);
        Bipartition {
            side_b,
            side_c,
            side_of,
            k: None,
            ell: None,
        }
    }

    fn swapped(self) -> Self {
        Bipartition {
            side_b: self.side_c,
            side_c: self.side_b,
            side_of: self.side_of.into_iter().map(Side::other).collect(),
            k: self.ell,
            ell: self.k,
        }
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn side_c(&self) -> &[usize] {
        &self.side_c
    }

    pub fn members(&self, side: Side) -> &[usize] {
        match side {
            Side::B => &self.side_b,
            Side::C => &self.side_c,
        }
    }

    pub fn side(&self, v: usize) -> Side {
        self.side_of[v]
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn ell(&self) -> Option<usize> {
        self.ell
    }

    /// `(k, ell)` when the graph is semiregular.
    pub fn profile(&self) -> Option<(usize, usize)> {
        self.k.zip(self.ell)
    }

    /// `+1` on `B`, `-1` on `C`.
    pub fn sign(&self, v: usize) -> f64 {
        match self.side_of[v] {
            Side::B => 1.0,
            Side::C => -1.0,
        }
    }
}

/// 2-colours `g` by BFS parity.
///
/// `B` is the side holding vertex 0, except for a semiregular graph with
/// distinct side degrees, where `B` is the side of smaller degree (and hence
/// the larger side).
pub fn bipartition(g: &Graph) -> Result<Bipartition> {
    let n = g.n();
    let mut colour = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    colour[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if colour[w] == usize::MAX {
                colour[w] = 1 - colour[u];
                parent[w] = u;
                queue.push_back(w);
            } else if colour[w] == colour[u] {
                return Err(Error::NotBipartite {
                    cycle: odd_cycle(&parent, u, w),
                });
            }
        }
    }
    let side_of = colour
        .iter()
        .map(|&c| if c == 0 { Side::B } else { Side::C })
        .collect();
    let mut part = Bipartition::from_colouring(side_of);
    if let Ok((k, ell)) = semiregular_profile(g, &part) {
        part.k = Some(k);
        part.ell = Some(ell);
        if k > ell {
            part = part.swapped();
        }
    }
    Ok(part)
}

/// Closes the BFS-tree paths from `u` and `w` (same colour, adjacent) into
/// an odd cycle.
fn odd_cycle(parent: &[usize], u: usize, w: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let mut pu = path_to_root(u);
    let mut pw = path_to_root(w);
    // Strip the shared tail above the lowest common ancestor.
    let mut lca = *pu.last().unwrap();
    while pu.len() > 1 && pw.len() > 1 && pu[pu.len() - 2] == pw[pw.len() - 2] {
        pu.pop();
        pw.pop();
        lca = *pu.last().unwrap();
    }
    pu.pop();
    pw.pop();
    let mut cycle = pu;
    cycle.push(lca);
    cycle.extend(pw.into_iter().rev());
    cycle
}

/// Common degrees `(k, ell)` on the two sides of `part`.
pub fn semiregular_profile(g: &Graph, part: &Bipartition) -> Result<(usize, usize)> {
    let side_degree = |side: Side| -> Result<usize> {
        let members = part.members(side);
        let Some(&first) = members.first() else {
            return Ok(0);
        };
        let k = g.degree(first);
        match members.iter().find(|&&v| g.degree(v) != k) {
            None => Ok(k),
            Some(&v) => Err(Error::NotSemiregular {
                side,
                u: first,
                deg_u: k,
                v,
                deg_v: g.degree(v),
            }),
        }
    };
    Ok((side_degree(Side::B)?, side_degree(Side::C)?))
}

/// Halved graphs of a semiregular bipartite graph with the fitted constants
/// of `N N^T = r A(H_B) + k I` and `N^T N = s A(H_C) + ell I`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalvedPair {
    /// Vertex `i` of `h_b` is vertex `part.side_b()[i]` of the parent graph.
    pub h_b: Graph,
    pub h_c: Graph,
    /// `None` when the off-diagonal entries of `N N^T` take more than one
    /// positive value. An edgeless halved graph satisfies the relation for
    /// every `r`; it is reported as `Some(0)`.
    pub r: Option<u64>,
    pub s: Option<u64>,
}

/// Builds `H_B` and `H_C` from the distance-two relation inside each side.
pub fn halved_graphs(g: &Graph, part: &Bipartition) -> Result<HalvedPair> {
    semiregular_profile(g, part)?;
    let (h_b, r) = halve(g, part.side_b())?;
    let (h_c, s) = halve(g, part.side_c())?;
    Ok(HalvedPair { h_b, h_c, r, s })
}

fn common_neighbours(g: &Graph, a: usize, b: usize) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    let (na, nb) = (g.neighbors(a), g.neighbors(b));
    while i < na.len() && j < nb.len() {
        match na[i].cmp(&nb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn halve(g: &Graph, side: &[usize]) -> Result<(Graph, Option<u64>)> {
    let mut values = Vec::new();
    let half = Graph::from_relation(side, |a, b| {
        let c = common_neighbours(g, a, b);
        if c > 0 {
            values.push(c);
        }
        c > 0
    })?;
    let fit = match values.first() {
        None => Some(0),
        Some(&r) if values.iter().all(|&v| v == r) => Some(r),
        Some(_) => None,
    };
    Ok((half, fit))
}
