//! Simple undirected graphs on labeled vertices with bit-vector adjacency
//! rows, deterministic generators, and the edge-list text format.

use num_bigint::BigUint;
use num_traits::Signed;

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::rational::Rat;

/// Immutable simple undirected graph. Adjacency is symmetric, loop-free,
/// and every index lies in `[0, n)`; all constructors enforce this.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BitRow>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BitRow::zeros(n); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (u, v) = (u as usize, v as usize);
        u < self.n && v < self.n && u != v && self.adj[u].test(v)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].count()
    }

    pub fn neighbors(&self, v: u32) -> &BitRow {
        &self.adj[v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitRow::count).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter_ones() {
                if v > u {
                    out.push((u as u32, v as u32));
                }
            }
        }
        out
    }

    fn add_edge_unchecked(&mut self, u: u32, v: u32) {
        self.adj[u as usize].set(v as usize);
        self.adj[v as usize].set(u as usize);
    }

    /// Full-scan consistency check: symmetry and loop-freeness.
    pub fn check_invariants(&self) -> bool {
        for u in 0..self.n {
            if self.adj[u].test(u) {
                return false;
            }
            for v in self.adj[u].iter_ones() {
                if !self.adj[v].test(u) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

/// Builds a graph from an edge list, deduplicating and symmetrizing.
pub fn build_graph(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
    let mut g = Graph::empty(n);
    for &(u, v) in edges {
        if u as usize >= n || v as usize >= n {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) out of range for n = {n}"
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        g.add_edge_unchecked(u, v);
    }
    Ok(g)
}

/// SplitMix64: the fixed generator behind every seeded construction in this
/// crate. The update and output functions are the standard constants, so an
/// independent implementation reproduces the stream exactly.
#[derive(Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Range helper for test/fixture code; rejection-free modulo reduction is
    /// fine at the bias levels relevant here.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Draw convention for probabilities: a draw `w` succeeds iff
/// `w * denom(p) < numer(p) * 2^64`, compared in exact integers.
pub fn draw_bernoulli(rng: &mut SplitMix64, p: &Rat) -> bool {
    let w = rng.next_u64();
    let lhs = BigUint::from(w) * p.denom().magnitude();
    let rhs = p.numer().magnitude() << 64u32;
    !p.numer().is_negative() && lhs < rhs
}

/// G(n, p) with one Bernoulli draw per unordered pair `(u, v)`, `u < v`, in
/// lexicographic order. Identical `(n, p, seed)` yields the identical graph
/// on every platform.
pub fn gen_gnp(n: usize, p: &Rat, seed: u64) -> Result<Graph> {
    if p.is_negative() || *p > Rat::from_integer(1.into()) {
        return Err(Error::invalid(format!(
            "probability out of range: {}",
            crate::rational::fmt_rat(p)
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut g = Graph::empty(n);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if draw_bernoulli(&mut rng, p) {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    Ok(g)
}

/// Complete multipartite graph with consecutive blocks of the given sizes;
/// `u ~ v` iff they lie in different blocks.
pub fn gen_complete_multipartite(sizes: &[usize]) -> Result<Graph> {
    if sizes.is_empty() {
        return Err(Error::invalid("part sizes must be non-empty"));
    }
    if sizes.contains(&0) {
        return Err(Error::invalid("part sizes must be >= 1"));
    }
    let n: usize = sizes.iter().sum();
    let mut block = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat(b).take(s));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if block[u] != block[v] {
                g.add_edge_unchecked(u as u32, v as u32);
            }
        }
    }
    Ok(g)
}

/// Union of `host` with `planted` embedded through an injective vertex map.
pub fn overlay(host: &Graph, planted: &Graph, embedding: &[u32]) -> Result<Graph> {
    if embedding.len() != planted.n() {
        return Err(Error::invalid(format!(
            "embedding covers {} vertices, planted graph has {}",
            embedding.len(),
            planted.n()
        )));
    }
    let mut seen = vec![false; host.n()];
    for &img in embedding {
        let img = img as usize;
        if img >= host.n() {
            return Err(Error::invalid(format!("embedding image {img} out of range")));
        }
        if seen[img] {
            return Err(Error::invalid(format!(
                "embedding is not injective at image {img}"
            )));
        }
        seen[img] = true;
    }
    let mut g = host.clone();
    for (u, v) in planted.edges() {
        g.add_edge_unchecked(embedding[u as usize], embedding[v as usize]);
    }
    Ok(g)
}

/// Parses the edge-list format: header `"n m"`, then `m` lines `"u v"` with
/// `0 <= u < v < n`, no duplicates. Errors carry 1-based line numbers.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(1, "header must be `n m`"))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(1, "header must be `n m`"))?;
    if it.next().is_some() {
        return Err(Error::parse(1, "trailing tokens in header"));
    }
    let mut g = Graph::empty(n);
    let mut count = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected `u v`"))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected `u v`"))?;
        if it.next().is_some() {
            return Err(Error::parse(lineno, "trailing tokens"));
        }
        if u == v {
            return Err(Error::parse(lineno, format!("loop at vertex {u}")));
        }
        if u > v {
            return Err(Error::parse(lineno, "endpoints must satisfy u < v"));
        }
        if v >= n {
            return Err(Error::parse(lineno, format!("vertex {v} out of range")));
        }
        if g.adj[u].test(v) {
            return Err(Error::parse(lineno, format!("duplicate edge {u} {v}")));
        }
        g.add_edge_unchecked(u as u32, v as u32);
        count += 1;
    }
    if count != m {
        return Err(Error::invalid(format!(
            "header promised {m} edges, found {count}"
        )));
    }
    Ok(g)
}

/// Canonical edge-list emission: sorted `u < v` lines, newline-terminated.
/// `parse_edge_list(emit_edge_list(g)) == g`.
pub fn emit_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Sorted duplicate-free vertex collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<u32>,
}

impl VertexSet {
    /// Sorts and validates: duplicates are an input error.
    pub fn new(mut members: Vec<u32>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate vertex in set"));
        }
        Ok(VertexSet { members })
    }

    pub fn from_bits(row: &BitRow) -> Self {
        VertexSet {
            members: row.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.members
    }

    pub fn max(&self) -> Option<u32> {
        self.members.last().copied()
    }

    pub fn disjoint_from(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| !other.contains(v))
    }
}
