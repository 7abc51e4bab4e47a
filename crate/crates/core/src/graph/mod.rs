//! Simple undirected graphs, 3-colorings over {B, R, Y}, and the six color
//! permutations.

mod dimacs;
mod search;

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dimacs::{parse_dimacs, write_dimacs, ParseError, ParseErrorKind};
pub use search::{best_near_coloring, brute_force_3color, NearColoring, MAX_EXHAUSTIVE_VERTICES};

/// An edge `(u, v)` with `u < v`, 0-indexed.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphWarning {
    Disconnected,
    /// The edge count falls outside `n - 1 <= m <= n^2 / 2`.
    EdgeCountOutOfBounds { n: usize, m: usize },
}

impl fmt::Display for GraphWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphWarning::Disconnected => write!(f, "graph is not connected"),
            GraphWarning::EdgeCountOutOfBounds { n, m } => {
                write!(f, "edge count {m} outside [n-1, n^2/2] for n = {n}")
            }
        }
    }
}

impl Graph {
    /// Builds a simple graph. Edge endpoints may come in either order and
    /// are stored as `(min, max)`; self-loops and repeated edges are errors.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Config(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::Config(format!("self-loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::Config(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            out.push(e);
        }
        Ok(Self { n, edges: out })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    /// Cycle on vertices `0..n` plus a hub vertex `n` joined to all of them.
    pub fn wheel(n: usize) -> Self {
        let rim = (0..n).map(|i| (i, (i + 1) % n));
        let spokes = (0..n).map(|i| (i, n));
        Self::new(n + 1, rim.chain(spokes)).expect("wheel is simple")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::new(10, outer.chain(spokes).chain(inner)).expect("petersen is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Non-fatal structural findings. The edge-count bound is only checked
    /// for connected graphs.
    pub fn warnings(&self) -> Vec<GraphWarning> {
        if !self.is_connected() {
            return vec![GraphWarning::Disconnected];
        }
        let (n, m) = (self.n, self.edges.len());
        let lower = n.saturating_sub(1);
        if m < lower || 2 * m > n * n {
            return vec![GraphWarning::EdgeCountOutOfBounds { n, m }];
        }
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    B,
    R,
    Y,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::B, Color::R, Color::Y];

    /// B -> 0, R -> 1, Y -> 2; also the index of the protocol state that
    /// encodes the color.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Color> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Color::B => 'B',
            Color::R => 'R',
            Color::Y => 'Y',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Self(colors)
    }

    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        indices.iter().map(|&i| Color::from_index(i)).collect::<Option<Vec<_>>>().map(Self)
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, vertex: usize) -> Color {
        self.0[vertex]
    }

    /// Edges whose endpoints share a color.
    pub fn monochromatic_edges(&self, g: &Graph) -> Result<Vec<Edge>> {
        check_len(g, self)?;
        Ok(g.edges().iter().copied().filter(|&(u, v)| self.0[u] == self.0[v]).collect())
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn check_len(g: &Graph, c: &Coloring) -> Result<()> {
    if c.len() != g.vertex_count() {
        return Err(Error::ColoringLength { expected: g.vertex_count(), got: c.len() });
    }
    Ok(())
}

pub fn is_valid_3coloring(g: &Graph, c: &Coloring) -> Result<bool> {
    check_len(g, c)?;
    Ok(g.edges().iter().all(|&(u, v)| c.0[u] != c.0[v]))
}

/// One of the six bijections of {B, R, Y}, stored as the images of B, R, Y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation([Color; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([Color::B, Color::R, Color::Y]);

    /// All of S_3 in a fixed order; index 0 is the identity.
    pub const ALL: [Permutation; 6] = {
        use Color::*;
        [
            Permutation([B, R, Y]),
            Permutation([B, Y, R]),
            Permutation([R, B, Y]),
            Permutation([R, Y, B]),
            Permutation([Y, B, R]),
            Permutation([Y, R, B]),
        ]
    };

    pub fn from_images(images: [Color; 3]) -> Option<Self> {
        let p = Permutation(images);
        Self::ALL.contains(&p).then_some(p)
    }

    pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.gen_range(0..6)]
    }

    /// Position of this permutation in [`Permutation::ALL`].
    pub fn ordinal(self) -> usize {
        Self::ALL.iter().position(|&p| p == self).expect("always a member of S_3")
    }

    pub fn apply(self, c: Color) -> Color {
        self.0[c.index()]
    }
}

pub fn permute_colors(c: &Coloring, p: Permutation) -> Coloring {
    Coloring(c.0.iter().map(|&x| p.apply(x)).collect())
}
