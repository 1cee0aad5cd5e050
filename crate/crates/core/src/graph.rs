//! Simple undirected graphs, the Hamiltonian-cycle oracle and instance families.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_ORACLE_CAP: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    Duplicate { line: usize, u: usize, v: usize },
    #[error("graph has {n} vertices, oracle limit is {cap}")]
    BoundExceeded { n: usize, cap: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
}

impl Graph {
    /// Graph on `n >= 1` vertices. Panics on invalid edges; use
    /// [`Graph::try_new`] for untrusted input.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        Graph::try_new(n, edges).expect("valid graph")
    }

    pub fn try_new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Malformed {
                line: 1,
                message: "vertex count must be at least 1".into(),
            });
        }
        let mut g = Graph {
            n,
            edges: BTreeSet::new(),
        };
        for (u, v) in edges {
            g.add_edge(u, v, 0)?;
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize, line: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::OutOfRange {
                    line,
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        if !self.edges.insert((u.min(v), u.max(v))) {
            return Err(GraphError::Duplicate { line, u, v });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n)
            .filter(|&u| u != v && self.adjacent(u, v))
            .count()
    }

    /// Edge-list text: first line `n`, then one `u v` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// All graphs on `n` vertices, in order of the bitmask over sorted vertex pairs.
    pub fn all_on(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        assert!(pairs.len() < 32, "too many graphs to enumerate");
        (0u32..(1 << pairs.len()))
            .map(|mask| {
                Graph::new(
                    n,
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &e)| e),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first_line, first) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    let n: usize = first.parse().map_err(|_| GraphError::Malformed {
        line: first_line,
        message: format!("expected vertex count, found `{first}`"),
    })?;
    let mut g = Graph::try_new(n, []).map_err(|_| GraphError::Malformed {
        line: first_line,
        message: "vertex count must be at least 1".into(),
    })?;
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
        match parsed.as_deref() {
            Some([u, v]) => g.add_edge(*u, *v, line)?,
            _ => {
                return Err(GraphError::Malformed {
                    line,
                    message: format!("expected `u v`, found `{l}`"),
                })
            }
        }
    }
    Ok(g)
}

/// Exhaustive backtracking over vertex orderings that start at vertex 0.
pub fn is_hamiltonian(g: &Graph) -> Result<bool, GraphError> {
    is_hamiltonian_capped(g, DEFAULT_ORACLE_CAP)
}

pub fn is_hamiltonian_capped(g: &Graph, cap: usize) -> Result<bool, GraphError> {
    if g.n > cap {
        return Err(GraphError::BoundExceeded { n: g.n, cap });
    }
    if g.n <= 2 {
        return Ok(false);
    }
    let adj: Vec<Vec<bool>> = (0..g.n)
        .map(|u| (0..g.n).map(|v| g.adjacent(u, v)).collect())
        .collect();
    if (0..g.n).any(|v| adj[v].iter().filter(|&&a| a).count() < 2) {
        return Ok(false);
    }
    let mut used = vec![false; g.n];
    used[0] = true;
    Ok(extend(&adj, &mut used, 0, 1))
}

fn extend(adj: &[Vec<bool>], used: &mut [bool], last: usize, placed: usize) -> bool {
    let n = adj.len();
    if placed == n {
        return adj[last][0];
    }
    for v in 1..n {
        if !used[v] && adj[last][v] {
            used[v] = true;
            if extend(adj, used, v, placed + 1) {
                return true;
            }
            used[v] = false;
        }
    }
    false
}

pub const FAMILIES: [&str; 5] = ["cycle", "path", "complete", "petersen", "random"];

/// Deterministic instance generator. `petersen` ignores `n`; `random` draws
/// each edge with probability 1/2 from a generator seeded by `(seed, n)`.
pub fn family(name: &str, n: usize, seed: u64) -> Result<Graph, GraphError> {
    let n = n.max(1);
    match name {
        "cycle" => Ok(if n < 3 {
            path(n)
        } else {
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }),
        "path" => Ok(path(n)),
        "complete" => Ok(Graph::new(
            n,
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
        )),
        "petersen" => Ok(petersen()),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            Ok(Graph::new(n, edges))
        }
        other => Err(GraphError::UnknownFamily(other.to_string())),
    }
}

fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i)))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    // independent oracle: every permutation of the vertices
    fn hamiltonian_by_permutations(g: &Graph) -> bool {
        fn permute(order: &mut Vec<usize>, k: usize, g: &Graph) -> bool {
            let n = order.len();
            if k == n {
                return (0..n).all(|i| g.adjacent(order[i], order[(i + 1) % n]));
            }
            for i in k..n {
                order.swap(k, i);
                if permute(order, k + 1, g) {
                    return true;
                }
                order.swap(k, i);
            }
            false
        }
        if g.n() <= 2 {
            return false;
        }
        let mut order: Vec<usize> = (0..g.n()).collect();
        permute(&mut order, 0, g)
    }

    #[test]
    fn parses_edge_lists() {
        let k3 = parse_graph("3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(k3.edge_count(), 3);
        let p3 = parse_graph("3\n0 1\n1 2").unwrap();
        assert_eq!(p3.edge_count(), 2);
        assert_eq!(
            parse_graph("2\n0 0").unwrap_err(),
            GraphError::SelfLoop { line: 2, vertex: 0 }
        );
        assert!(matches!(
            parse_graph("2\n0 5"),
            Err(GraphError::OutOfRange { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("3\n0 1\n1 0"),
            Err(GraphError::Duplicate { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("3\n0 1 2"),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert!(parse_graph("").is_err());
        assert!(parse_graph("0").is_err());
    }

    #[test]
    fn small_cases() {
        let k3 = family("complete", 3, 0).unwrap();
        assert!(is_hamiltonian(&k3).unwrap());
        assert!(!is_hamiltonian(&family("path", 3, 0).unwrap()).unwrap());
        assert!(!is_hamiltonian(&petersen()).unwrap());
        assert!(!is_hamiltonian(&family("complete", 2, 0).unwrap()).unwrap());
        assert!(!is_hamiltonian(&Graph::new(1, [])).unwrap());
        assert!(is_hamiltonian(&family("cycle", 4, 0).unwrap()).unwrap());
        assert!(!is_hamiltonian(&family("path", 4, 0).unwrap()).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let g = family("cycle", 13, 0).unwrap();
        assert!(matches!(
            is_hamiltonian(&g),
            Err(GraphError::BoundExceeded { n: 13, cap: 12 })
        ));
        assert!(is_hamiltonian_capped(&g, 13).unwrap());
    }

    #[test]
    fn families_are_deterministic() {
        assert_eq!(
            family("random", 5, 7).unwrap(),
            family("random", 5, 7).unwrap()
        );
        assert!(family("wheel", 5, 0).is_err());
        assert_eq!(petersen().edge_count(), 15);
        for n in 3..9 {
            assert!(is_hamiltonian(&family("cycle", n, 0).unwrap()).unwrap());
            assert!(!is_hamiltonian(&family("path", n, 0).unwrap()).unwrap());
        }
    }

    #[test]
    fn oracle_matches_permutation_enumeration() {
        for n in 1..=5 {
            for g in Graph::all_on(n) {
                assert_eq!(
                    is_hamiltonian(&g).unwrap(),
                    hamiltonian_by_permutations(&g),
                    "{g:?}"
                );
            }
        }
        for n in 6..=7 {
            for seed in 0..40 {
                let g = family("random", n, seed).unwrap();
                assert_eq!(
                    is_hamiltonian(&g).unwrap(),
                    hamiltonian_by_permutations(&g),
                    "{g:?}"
                );
            }
        }
    }

    #[test]
    fn random_family_answer_is_pinned() {
        let g = family("random", 5, 7).unwrap();
        assert_eq!(is_hamiltonian(&g).unwrap(), hamiltonian_by_permutations(&g));
    }
}
