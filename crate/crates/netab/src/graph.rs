//! Undirected unweighted networks: construction, synthetic generation,
//! and edge-list ingestion.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// An immutable simple graph. Vertices are `0..n`, every vertex has
/// degree >= 1, edges are stored as `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    edges: Vec<(u32, u32)>,
    neighbors: Vec<Vec<u32>>,
    degrees: Vec<u32>,
}

impl Network {
    /// Builds a network from an explicit edge set. Edges are deduplicated
    /// and symmetrized; self-loops, out-of-range endpoints, and isolated
    /// vertices are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoopEdge { vertex: a });
            }
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            canon.push((lo as u32, hi as u32));
        }
        canon.sort_unstable();
        canon.dedup();

        let mut neighbors = vec![Vec::new(); n];
        let mut degrees = vec![0u32; n];
        for &(a, b) in &canon {
            neighbors[a as usize].push(b);
            neighbors[b as usize].push(a);
            degrees[a as usize] += 1;
            degrees[b as usize] += 1;
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedVertex { vertex: v });
        }

        Ok(Network {
            n,
            edges: canon,
            neighbors,
            degrees,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges, m.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    /// 2m / (n (n - 1)).
    pub fn density(&self) -> f64 {
        let n = self.n as f64;
        2.0 * self.edges.len() as f64 / (n * (n - 1.0))
    }

    /// True when all degrees are equal.
    pub fn is_regular(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }

    /// Edge-list text: one `i j` line per edge, sorted, newline-terminated.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_edge_list_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Samples a Bernoulli(p) graph on `n_target` vertices, removes isolated
/// vertices, trims to even size by dropping the minimum-degree survivor
/// (ties broken by lowest index), and reindexes densely. Deterministic
/// given `seed`.
pub fn generate_er(n_target: usize, p: f64, seed: u64) -> Result<Network> {
    if n_target < 4 {
        return Err(Error::InvalidConfig(format!(
            "n_target must be at least 4, got {n_target}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "edge probability must be in (0, 1), got {p}"
        )));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for i in 0..n_target {
        for j in (i + 1)..n_target {
            if rng.gen::<f64>() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }

    let mut alive = vec![true; n_target];
    let mut degrees = vec![0u32; n_target];
    for &(a, b) in &edges {
        degrees[a as usize] += 1;
        degrees[b as usize] += 1;
    }
    // Dropping a vertex can isolate a neighbor, so alternate the two
    // removal rules until the survivor set is even with no isolated
    // vertices.
    loop {
        let mut changed = false;
        for v in 0..n_target {
            if alive[v] && degrees[v] == 0 {
                alive[v] = false;
                changed = true;
            }
        }
        let count = alive.iter().filter(|&&a| a).count();
        if count % 2 == 1 {
            let drop = (0..n_target)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (degrees[v], v))
                .expect("odd count implies at least one survivor");
            alive[drop] = false;
            for &(a, b) in &edges {
                let (a, b) = (a as usize, b as usize);
                if a == drop && alive[b] {
                    degrees[b] -= 1;
                }
                if b == drop && alive[a] {
                    degrees[a] -= 1;
                }
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let survivors: Vec<usize> = (0..n_target).filter(|&v| alive[v]).collect();
    if survivors.len() < 4 {
        return Err(Error::DegenerateNetwork {
            survivors: survivors.len(),
        });
    }
    let mut remap = vec![usize::MAX; n_target];
    for (new, &old) in survivors.iter().enumerate() {
        remap[old] = new;
    }
    let kept = edges
        .iter()
        .filter(|&&(a, b)| alive[a as usize] && alive[b as usize])
        .map(|&(a, b)| (remap[a as usize], remap[b as usize]));
    Network::from_edges(survivors.len(), kept)
}

/// `k` disjoint connected pairs: vertices `2i` and `2i+1` share an edge.
pub fn pairs_network(k: usize) -> Network {
    assert!(k >= 1, "pairs_network needs k >= 1");
    Network::from_edges(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1)))
        .expect("disjoint pairs are always valid")
}

/// Loads an undirected edge list: one `i j` pair of non-negative integers
/// per line, `#`-prefixed lines and blank lines ignored. Vertex ids are
/// compacted to `0..n` in first-appearance order; duplicate edges are
/// collapsed.
pub fn load_edge_list(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, path)
}

fn parse_edge_list(text: &str, path: &Path) -> Result<Network> {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::ParseEdge {
                    path: path.to_path_buf(),
                    line,
                    content: trimmed.to_string(),
                })
            }
        };
        let parse = |tok: &str| -> Result<u64> {
            tok.parse().map_err(|_| Error::ParseEdge {
                path: path.to_path_buf(),
                line,
                content: trimmed.to_string(),
            })
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a == b {
            return Err(Error::SelfLoop {
                path: path.to_path_buf(),
                line,
                vertex: a,
            });
        }
        let mut intern = |id: u64| -> usize {
            let next = ids.len();
            *ids.entry(id).or_insert(next)
        };
        let (a, b) = (intern(a), intern(b));
        edges.push((a, b));
    }
    Network::from_edges(ids.len(), edges)
}
