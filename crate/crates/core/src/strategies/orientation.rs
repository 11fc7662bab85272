//! Orientations of the binary `n`-cube built from a Hamming code.
//!
//! Edges touching a codeword point away from it. What is left is an even
//! graph on the non-codewords, and each of its components is oriented along
//! an eulerian circuit.

use crate::codes::{hamming_code, Code};
use crate::error::{bail, Result};

/// A direction for every edge of `{0,1}^n`.
///
/// Vertices are configuration ranks; coordinate `i` (1-based) is bit
/// `n - i`. For each vertex `v` with that bit clear, `up[v * n + (i - 1)]`
/// records whether the edge `{v, v | bit}` points at the upper end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    n: usize,
    codewords: Vec<u64>,
    up: Vec<bool>,
}

impl Orientation {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The codewords whose incident edges all point outward.
    pub fn codewords(&self) -> &[u64] {
        &self.codewords
    }

    fn bit(&self, coordinate: usize) -> u64 {
        1u64 << (self.n - coordinate)
    }

    /// Head of the edge leaving `v` along `coordinate` (1-based).
    pub fn head(&self, v: u64, coordinate: usize) -> u64 {
        let bit = self.bit(coordinate);
        let low = v & !bit;
        if self.up[low as usize * self.n + coordinate - 1] {
            low | bit
        } else {
            low
        }
    }

    pub fn indegree(&self, v: u64) -> usize {
        (1..=self.n).filter(|&i| self.head(v, i) == v).count()
    }

    pub fn edge_count(&self) -> usize {
        self.n << (self.n - 1)
    }
}

/// Iterative Hierholzer walk over the undirected graph stored as sorted
/// adjacency lists. Every edge is oriented in the direction it is walked.
/// Neighbours are taken in increasing rank; each circuit starts at the least
/// vertex that still has unused edges.
fn orient_eulerian(adjacency: &[Vec<u64>], mut orient: impl FnMut(u64, u64)) {
    let mut used: Vec<Vec<bool>> = adjacency.iter().map(|a| vec![false; a.len()]).collect();
    let mut cursor = vec![0usize; adjacency.len()];
    for start in 0..adjacency.len() {
        let mut stack = vec![start as u64];
        while let Some(&v) = stack.last() {
            let vi = v as usize;
            while cursor[vi] < adjacency[vi].len() && used[vi][cursor[vi]] {
                cursor[vi] += 1;
            }
            if cursor[vi] == adjacency[vi].len() {
                stack.pop();
                continue;
            }
            let slot = cursor[vi];
            let w = adjacency[vi][slot];
            used[vi][slot] = true;
            let back = adjacency[w as usize].binary_search(&v).expect("undirected edge");
            used[w as usize][back] = true;
            orient(v, w);
            stack.push(w);
        }
    }
}

/// Orientation of `{0,1}^n`, `n = 2^m - 1`, derived from the Hamming code.
pub fn berlekamp_orientation(m: u32) -> Result<Orientation> {
    if !(2..=3).contains(&m) {
        bail!(Unsupported, "orientations are built for m in 2..=3, got {m}");
    }
    orientation_from_code(&hamming_code(m)?)
}

/// Orientation built from any binary code at minimum distance three whose
/// leftover graph is even, which holds for perfect single-error codes.
pub fn orientation_from_code(code: &Code) -> Result<Orientation> {
    if code.q() != 2 {
        bail!(Unsupported, "orientations need a binary code");
    }
    let n = code.n();
    let vertices = 1usize << n;
    let mut up = vec![false; vertices * n];
    let mut adjacency: Vec<Vec<u64>> = vec![Vec::new(); vertices];
    for v in 0..vertices as u64 {
        for i in 1..=n {
            let bit = 1u64 << (n - i);
            if v & bit != 0 {
                continue;
            }
            let w = v | bit;
            match (code.contains_rank(v), code.contains_rank(w)) {
                (true, true) => bail!(Precondition, "codewords {v} and {w} are adjacent"),
                (true, false) => up[v as usize * n + i - 1] = true,
                (false, true) => {}
                (false, false) => {
                    adjacency[v as usize].push(w);
                    adjacency[w as usize].push(v);
                }
            }
        }
    }
    if let Some(v) = adjacency.iter().position(|a| a.len() % 2 == 1) {
        bail!(Precondition, "vertex {v} has odd degree once codeword edges are removed");
    }
    for a in adjacency.iter_mut() {
        a.sort_unstable();
    }
    orient_eulerian(&adjacency, |tail, head| {
        let low = tail.min(head);
        let i = n - (tail ^ head).trailing_zeros() as usize;
        up[low as usize * n + i - 1] = head > tail;
    });
    Ok(Orientation { n, codewords: code.ranks().collect(), up })
}
