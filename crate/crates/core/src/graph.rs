// SPDX-License-Identifier: Apache-2.0
//! Fixed-order simple graphs stored as packed dyad bits.
//!
//! Every edge variable ("dyad") has a canonical row-major index: for
//! directed graphs the ordered pairs `(i, j)`, `i != j`, in row order; for
//! undirected graphs the pairs `i < j` in row order. Bit `k` of the
//! adjacency set is dyad `k`, so for small graphs the bit-set read as an
//! integer doubles as a state index.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// An edge-variable flip. For undirected graphs `(i, j)` and `(j, i)` are
/// the same toggle; [`Toggle::canonical`] folds them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Toggle {
    pub i: usize,
    pub j: usize,
}

impl Toggle {
    pub const fn new(i: usize, j: usize) -> Self {
        Toggle { i, j }
    }

    /// Folds undirected toggles onto `i < j`.
    pub fn canonical(self, directed: bool) -> Self {
        if directed || self.i < self.j {
            self
        } else {
            Toggle { i: self.j, j: self.i }
        }
    }
}

impl fmt::Display for Toggle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// Whether a toggle adds or removes an edge from the current state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighborClass {
    /// Edge absent; toggling adds it.
    HPlus,
    /// Edge present; toggling removes it.
    HMinus,
}

/// Number of edge variables for an order-`n` graph.
pub fn dyad_count(n: usize, directed: bool) -> usize {
    if directed {
        n * n.saturating_sub(1)
    } else {
        n * n.saturating_sub(1) / 2
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    directed: bool,
    bits: Vec<u64>,
}

impl Graph {
    /// The empty graph of order `n`.
    pub fn empty(n: usize, directed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        let words = dyad_count(n, directed).div_ceil(64);
        Ok(Graph {
            n,
            directed,
            bits: vec![0; words],
        })
    }

    pub fn complete(n: usize, directed: bool) -> Result<Self> {
        let mut g = Graph::empty(n, directed)?;
        for d in 0..g.dyad_count() {
            g.set_dyad(d, true);
        }
        Ok(g)
    }

    /// Builds a graph whose dyad bits are the low bits of `code`.
    pub fn from_code(n: usize, directed: bool, code: u64) -> Result<Self> {
        let mut g = Graph::empty(n, directed)?;
        let m = g.dyad_count();
        if m > 64 || (m < 64 && code >> m != 0) {
            return Err(Error::StateCodeOutOfRange { code, dyads: m });
        }
        if m > 0 {
            g.bits[0] = code;
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n, directed)?;
        for &(i, j) in edges {
            let d = g.dyad_index(Toggle::new(i, j))?;
            g.set_dyad(d, true);
        }
        Ok(g)
    }

    /// The dyad bits as an integer; `None` when the graph has more than 64
    /// edge variables.
    pub fn code(&self) -> Option<u64> {
        match self.bits.len() {
            0 => Some(0),
            1 => Some(self.bits[0]),
            _ => None,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn dyad_count(&self) -> usize {
        dyad_count(self.n, self.directed)
    }

    /// Canonical dyad index of a toggle, validating its endpoints.
    pub fn dyad_index(&self, t: Toggle) -> Result<usize> {
        let n = self.n;
        if t.i >= n || t.j >= n {
            return Err(Error::VertexOutOfRange { vertex: t.i.max(t.j), n });
        }
        if t.i == t.j {
            return Err(Error::SelfLoop(t.i));
        }
        Ok(self.dyad_index_unchecked(t.i, t.j))
    }

    #[inline]
    pub(crate) fn dyad_index_unchecked(&self, i: usize, j: usize) -> usize {
        let n = self.n;
        if self.directed {
            i * (n - 1) + if j < i { j } else { j - 1 }
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            a * n - a * (a + 1) / 2 + (b - a - 1)
        }
    }

    /// Inverse of the canonical dyad index.
    pub fn toggle_at(&self, d: usize) -> Toggle {
        let n = self.n;
        if self.directed {
            let i = d / (n - 1);
            let r = d % (n - 1);
            Toggle::new(i, if r < i { r } else { r + 1 })
        } else {
            let mut i = 0;
            let mut start = 0;
            loop {
                let row = n - i - 1;
                if d < start + row {
                    return Toggle::new(i, i + 1 + (d - start));
                }
                start += row;
                i += 1;
            }
        }
    }

    #[inline]
    pub fn has_dyad(&self, d: usize) -> bool {
        self.bits[d >> 6] >> (d & 63) & 1 == 1
    }

    #[inline]
    fn set_dyad(&mut self, d: usize, on: bool) {
        if on {
            self.bits[d >> 6] |= 1 << (d & 63);
        } else {
            self.bits[d >> 6] &= !(1 << (d & 63));
        }
    }

    #[inline]
    pub(crate) fn flip_dyad(&mut self, d: usize) {
        self.bits[d >> 6] ^= 1 << (d & 63);
    }

    /// Edge test without range checks; `i != j` is assumed.
    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.has_dyad(self.dyad_index_unchecked(i, j))
    }

    pub fn contains(&self, t: Toggle) -> Result<bool> {
        Ok(self.has_dyad(self.dyad_index(t)?))
    }

    pub fn classify(&self, t: Toggle) -> Result<NeighborClass> {
        Ok(if self.contains(t)? {
            NeighborClass::HMinus
        } else {
            NeighborClass::HPlus
        })
    }

    /// Flips one edge variable in place.
    pub fn toggle(&mut self, t: Toggle) -> Result<NeighborClass> {
        let d = self.dyad_index(t)?;
        let class = if self.has_dyad(d) {
            NeighborClass::HMinus
        } else {
            NeighborClass::HPlus
        };
        self.flip_dyad(d);
        Ok(class)
    }

    /// Returns `g` with the edge variable `t` flipped.
    pub fn apply_toggle(&self, t: Toggle) -> Result<Graph> {
        let mut g = self.clone();
        g.toggle(t)?;
        Ok(g)
    }

    /// All radius-1 Hamming neighbors, as toggles in canonical order.
    pub fn hamming_neighbors(&self) -> Vec<(Toggle, NeighborClass)> {
        (0..self.dyad_count())
            .map(|d| {
                let class = if self.has_dyad(d) {
                    NeighborClass::HMinus
                } else {
                    NeighborClass::HPlus
                };
                (self.toggle_at(d), class)
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Dyads with both arcs present. Directed graphs only.
    pub fn mutual_count(&self) -> Result<usize> {
        if !self.directed {
            return Err(Error::RequiresDirected("mutual count"));
        }
        let mut count = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) && self.has_edge(j, i) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Number of differing edge variables.
    pub fn hamming_distance(&self, other: &Graph) -> Result<usize> {
        self.check_compatible(other.n, other.directed)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub(crate) fn check_compatible(&self, n: usize, directed: bool) -> Result<()> {
        if self.n != n || self.directed != directed {
            return Err(Error::IncompatibleGraph {
                expected_n: n,
                expected_directed: directed,
                n: self.n,
                directed: self.directed,
            });
        }
        Ok(())
    }

    /// Out-degree for directed graphs, degree for undirected ones.
    pub fn out_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| j != i && self.has_edge(i, j)).count()
    }

    pub fn in_degree(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| i != j && self.has_edge(i, j)).count()
    }

    /// Present edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Toggle> + '_ {
        (0..self.dyad_count())
            .filter(|&d| self.has_dyad(d))
            .map(|d| self.toggle_at(d))
    }

    /// Writes the edge-list text form: a `directed n` / `undirected n`
    /// header followed by one `i j` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let kind = if self.directed { "directed" } else { "undirected" };
        writeln!(w, "{kind} {}", self.n)?;
        for t in self.edges() {
            writeln!(w, "{} {}", t.i, t.j)?;
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
        let mut lines = r
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l))
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let parse_err = |line: usize, msg: &str| Error::EdgeList {
            line,
            message: msg.to_string(),
        };
        let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let header = header?;
        let mut parts = header.split_whitespace();
        let directed = match parts.next() {
            Some("directed") => true,
            Some("undirected") => false,
            _ => return Err(parse_err(lineno, "header must be `directed n` or `undirected n`")),
        };
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(lineno, "bad vertex count"))?;
        if parts.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens in header"));
        }
        let mut g = Graph::empty(n, directed)?;
        for (lineno, line) in lines {
            let line = line?;
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| parse_err(lineno, "bad vertex index")))
                .collect::<Result<_>>()?;
            if v.len() != 2 {
                return Err(parse_err(lineno, "expected `i j`"));
            }
            let d = g.dyad_index(Toggle::new(v[0], v[1]))?;
            g.set_dyad(d, true);
        }
        Ok(g)
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        Graph::read_edge_list(text.as_bytes())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("directed", &self.directed)
            .field("edges", &self.edges().map(|t| (t.i, t.j)).collect::<Vec<_>>())
            .finish()
    }
}
