//! Graph automorphism search by individualization and equitable
//! refinement, with vertex-/edge-transitivity and semisymmetry predicates.
//!
//! This is a desk-scale oracle for explicit simple undirected graphs: it
//! computes generators of the full automorphism group by backtracking over
//! the refinement stabilizer tree, pruning sibling branches through
//! already-found automorphisms that fix the individualized prefix. Every
//! decision is deterministic — the individualization target is the smallest
//! non-singleton cell (earliest position on ties) and branch vertices are
//! taken in ascending order — so repeated runs explore the same tree.
//!
//! An explicit node budget turns pathological inputs into clean errors
//! instead of silent stalls.

use std::collections::HashMap;

use thiserror::Error;

use crate::bicoset::BiCosetGraph;
use crate::factnum::FactoredNat;
use crate::permcore::{Perm, PermError, PermGroup};

/// Errors from graph analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    /// The graph datum violates simplicity or indexing rules.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    ParseError(String),
    /// The automorphism search exceeded its node budget.
    #[error("search budget of {budget} nodes exceeded")]
    SearchBudgetExceeded {
        /// The configured budget.
        budget: u64,
    },
    /// Underlying permutation error.
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Default automorphism-search node budget.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// A finite simple undirected graph with sorted adjacency lists.
/// Vertices are `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list. Loops, duplicate edges, and
    /// out-of-range endpoints are rejected.
    pub fn new(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::InvalidGraph(format!("loop at vertex {u}")));
            }
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(GraphError::InvalidGraph(format!(
                    "edge ({u}, {v}) exceeds vertex count {vertex_count}"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::InvalidGraph(format!(
                    "duplicate edge at vertex {u}"
                )));
            }
        }
        Ok(Graph { adj })
    }

    /// The complete bipartite graph `K_{a,b}` (left part `0..a`).
    pub fn complete_bipartite(a: u32, b: u32) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::new((a + b) as usize, &edges).expect("valid by construction")
    }

    /// The cycle `C_n` (`n ≥ 3`).
    pub fn cycle(n: u32) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n as usize, &edges).expect("valid by construction")
    }

    /// Converts an explicit bi-coset graph (right vertices offset by the
    /// left part size).
    pub fn from_bicoset(graph: &BiCosetGraph) -> Graph {
        let n_left = graph.n_left();
        let mut edges = Vec::new();
        for (u, nbrs) in graph.adjacency().iter().enumerate() {
            for &v in nbrs {
                edges.push((u as u32, (n_left + v) as u32));
            }
        }
        Graph::new(n_left + graph.n_right(), &edges).expect("bi-coset graphs are simple")
    }

    /// Parses the bi-coset edge-list format: a header `n_left n_right m`
    /// followed by `m` lines `u v` (right endpoints offset by `n_left`).
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GraphError::ParseError("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::ParseError(format!(
                "header must be 'n_left n_right m', got '{header}'"
            )));
        }
        let parse_num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| GraphError::ParseError(format!("bad number '{s}'")))
        };
        let n_left = parse_num(fields[0])?;
        let n_right = parse_num(fields[1])?;
        let m = parse_num(fields[2])?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let pair: Vec<&str> = line.split_whitespace().collect();
            if pair.len() != 2 {
                return Err(GraphError::ParseError(format!("bad edge line '{line}'")));
            }
            let u = parse_num(pair[0])? as u32;
            let v = parse_num(pair[1])? as u32;
            if (u as usize) >= n_left || (v as usize) < n_left {
                return Err(GraphError::ParseError(format!(
                    "edge ({u}, {v}) does not go from the left part to the right part"
                )));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::ParseError(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n_left + n_right, &edges)
    }

    /// Parses the one-graph-per-line format: the vertex count followed by
    /// whitespace-separated `u-v` edge tokens, e.g. `5 0-1 1-2 2-3 3-4 4-0`.
    pub fn parse_adjacency_line(line: &str) -> Result<Graph, GraphError> {
        let mut tokens = line.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| GraphError::ParseError("empty line".into()))?
            .parse()
            .map_err(|_| GraphError::ParseError("bad vertex count".into()))?;
        let mut edges = Vec::new();
        for tok in tokens {
            let (u, v) = tok
                .split_once('-')
                .ok_or_else(|| GraphError::ParseError(format!("bad edge token '{tok}'")))?;
            let u: u32 = u
                .parse()
                .map_err(|_| GraphError::ParseError(format!("bad endpoint '{u}'")))?;
            let v: u32 = v
                .parse()
                .map_err(|_| GraphError::ParseError(format!("bad endpoint '{v}'")))?;
            edges.push((u, v));
        }
        Graph::new(n, &edges)
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    /// The edges as sorted pairs `(u, v)` with `u < v`, in lexicographic
    /// order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    /// Whether all vertex degrees coincide.
    pub fn is_regular(&self) -> bool {
        self.adj.windows(2).all(|w| w[0].len() == w[1].len())
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Whether the 0-based image table defines an automorphism.
    fn is_automorphism(&self, images: &[u32]) -> bool {
        for (u, nbrs) in self.adj.iter().enumerate() {
            let iu = images[u];
            if self.adj[iu as usize].len() != nbrs.len() {
                return false;
            }
            for &v in nbrs {
                if !self.has_edge(iu, images[v as usize]) {
                    return false;
                }
            }
        }
        true
    }

    /// The coarsest equitable ordered partition refining `initial`: in the
    /// result, any two vertices sharing a cell have equally many neighbors
    /// in every cell. Cell order is deterministic — a split replaces a cell
    /// in place by its fragments in ascending neighbor-count order.
    pub fn refine(&self, initial: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut cells: Vec<Vec<u32>> = initial
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        let n = self.vertex_count();
        'stabilize: loop {
            let mut membership = vec![0usize; n];
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    membership[v as usize] = i;
                }
            }
            for s_idx in 0..cells.len() {
                for c_idx in 0..cells.len() {
                    if cells[c_idx].len() <= 1 {
                        continue;
                    }
                    // Count each vertex's neighbors inside the splitter.
                    let counts: Vec<usize> = cells[c_idx]
                        .iter()
                        .map(|&v| {
                            self.adj[v as usize]
                                .iter()
                                .filter(|&&w| membership[w as usize] == s_idx)
                                .count()
                        })
                        .collect();
                    if counts.windows(2).all(|w| w[0] == w[1]) {
                        continue;
                    }
                    let mut groups: std::collections::BTreeMap<usize, Vec<u32>> =
                        std::collections::BTreeMap::new();
                    for (&v, &c) in cells[c_idx].iter().zip(&counts) {
                        groups.entry(c).or_default().push(v);
                    }
                    let fragments: Vec<Vec<u32>> = groups.into_values().collect();
                    cells.splice(c_idx..=c_idx, fragments);
                    continue 'stabilize;
                }
            }
            return cells;
        }
    }
}

/// Depth-first individualization-refinement search state.
struct AutSearch<'a> {
    graph: &'a Graph,
    budget: u64,
    nodes: u64,
    /// Vertex order of the first discrete partition reached.
    base: Option<Vec<u32>>,
    /// Automorphisms found so far (each verified directly).
    gens: Vec<Perm>,
}

impl<'a> AutSearch<'a> {
    /// Orbit of `targets` under the found generators that fix `prefix`
    /// pointwise, as a membership mask.
    fn pruned_mask(&self, prefix: &[u32], targets: &[u32]) -> Vec<bool> {
        let n = self.graph.vertex_count();
        let fixing: Vec<&Perm> = self
            .gens
            .iter()
            .filter(|p| prefix.iter().all(|&v| p.image_of(v + 1) == v + 1))
            .collect();
        let mut mask = vec![false; n];
        let mut queue: Vec<u32> = Vec::new();
        for &t in targets {
            mask[t as usize] = true;
            queue.push(t);
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for p in &fixing {
                let w = p.image_of(v + 1) - 1;
                if !mask[w as usize] {
                    mask[w as usize] = true;
                    queue.push(w);
                }
            }
        }
        mask
    }

    fn recurse(&mut self, cells: Vec<Vec<u32>>, prefix: &mut Vec<u32>) -> Result<(), GraphError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(GraphError::SearchBudgetExceeded { budget: self.budget });
        }
        if cells.iter().all(|c| c.len() == 1) {
            let labeling: Vec<u32> = cells.iter().map(|c| c[0]).collect();
            match &self.base {
                None => self.base = Some(labeling),
                Some(base) => {
                    let mut images = vec![0u32; labeling.len()];
                    let mut identity = true;
                    for (b, l) in base.iter().zip(&labeling) {
                        images[*b as usize] = *l;
                        identity &= b == l;
                    }
                    if !identity && self.graph.is_automorphism(&images) {
                        let one_based: Vec<u32> = images.iter().map(|&v| v + 1).collect();
                        self.gens.push(
                            Perm::from_images_one_based(&one_based)
                                .expect("discrete labeling is a bijection"),
                        );
                    }
                }
            }
            return Ok(());
        }
        // Individualization target: smallest non-singleton cell, earliest
        // position on ties.
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
            .expect("a non-singleton cell exists");
        let branch_vertices = cells[target].clone();
        let mut processed: Vec<u32> = Vec::new();
        for &v in &branch_vertices {
            if !processed.is_empty() {
                // Skip branches reachable from an explored sibling by a
                // known automorphism fixing the individualized prefix: such
                // a subtree is the image of an explored one and generates
                // nothing new.
                let mask = self.pruned_mask(prefix, &processed);
                if mask[v as usize] {
                    continue;
                }
            }
            let mut child: Vec<Vec<u32>> = Vec::with_capacity(cells.len() + 1);
            for (i, cell) in cells.iter().enumerate() {
                if i == target {
                    child.push(vec![v]);
                    child.push(cell.iter().copied().filter(|&w| w != v).collect());
                } else {
                    child.push(cell.clone());
                }
            }
            let refined = self.graph.refine(&child);
            prefix.push(v);
            let result = self.recurse(refined, prefix);
            prefix.pop();
            result?;
            processed.push(v);
        }
        Ok(())
    }
}

/// A full symmetry analysis of a graph.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    /// Verified generators of the automorphism group.
    pub generators: Vec<Perm>,
    /// `|Aut|` as an exact factored integer.
    pub aut_order: FactoredNat,
    /// Vertex orbits (each sorted; orbits ordered by least element).
    pub vertex_orbits: Vec<Vec<u32>>,
    /// Edge orbits (edges as sorted pairs; orbits ordered by least edge).
    pub edge_orbits: Vec<Vec<(u32, u32)>>,
    /// All vertex degrees coincide.
    pub regular: bool,
    /// The automorphism group is transitive on vertices.
    pub vertex_transitive: bool,
    /// The automorphism group is transitive on edges.
    pub edge_transitive: bool,
    /// Regular, edge-transitive, and not vertex-transitive.
    pub semisymmetric: bool,
}

/// Generators of the automorphism group, under the default node budget.
pub fn automorphism_generators(graph: &Graph) -> Result<Vec<Perm>, GraphError> {
    automorphism_generators_with_budget(graph, DEFAULT_SEARCH_BUDGET)
}

/// Generators of the automorphism group with an explicit node budget.
///
/// Every returned permutation is directly verified to preserve adjacency.
/// The search is deterministic, so the generator list is reproducible.
pub fn automorphism_generators_with_budget(
    graph: &Graph,
    budget: u64,
) -> Result<Vec<Perm>, GraphError> {
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let unit: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    let root = graph.refine(&unit);
    let mut search = AutSearch { graph, budget, nodes: 0, base: None, gens: Vec::new() };
    let mut prefix = Vec::new();
    search.recurse(root, &mut prefix)?;
    debug_assert!(search.gens.iter().all(|p| {
        let images: Vec<u32> = (0..n as u32).map(|v| p.image_of(v + 1) - 1).collect();
        graph.is_automorphism(&images)
    }));
    Ok(search.gens)
}

/// The automorphism group as a permutation group on `1..=n`.
pub fn automorphism_group(graph: &Graph) -> Result<PermGroup, GraphError> {
    let gens = automorphism_generators(graph)?;
    let degree = graph.vertex_count().max(1) as u32;
    Ok(PermGroup::from_generators(degree, gens)?)
}

/// Orbits of `0..n` under 0-based vertex images of the generators.
fn vertex_orbits(n: usize, gens: &[Perm]) -> Vec<Vec<u32>> {
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<u32>> = Vec::new();
    for start in 0..n as u32 {
        if orbit_of[start as usize] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        orbit_of[start as usize] = id;
        let mut head = 0;
        while head < orbit.len() {
            let v = orbit[head];
            head += 1;
            for p in gens {
                let w = p.image_of(v + 1) - 1;
                if orbit_of[w as usize] == usize::MAX {
                    orbit_of[w as usize] = id;
                    orbit.push(w);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Computes the full symmetry report under the given node budget (the
/// default when `None`).
pub fn analyze(graph: &Graph, budget: Option<u64>) -> Result<SymmetryReport, GraphError> {
    let n = graph.vertex_count();
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let generators = automorphism_generators_with_budget(graph, budget)?;
    let aut_order = if n == 0 {
        FactoredNat::one()
    } else {
        PermGroup::from_generators(n as u32, generators.clone())
            .map_err(GraphError::from)?
            .order()
            .clone()
    };
    let v_orbits = vertex_orbits(n, &generators);

    // Edge orbits under the induced action on sorted pairs.
    let edges = graph.edges();
    let edge_index: HashMap<(u32, u32), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut orbit_of = vec![usize::MAX; edges.len()];
    let mut e_orbits: Vec<Vec<(u32, u32)>> = Vec::new();
    for start in 0..edges.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = e_orbits.len();
        let mut orbit_ids = vec![start];
        orbit_of[start] = id;
        let mut head = 0;
        while head < orbit_ids.len() {
            let (u, v) = edges[orbit_ids[head]];
            head += 1;
            for p in &generators {
                let iu = p.image_of(u + 1) - 1;
                let iv = p.image_of(v + 1) - 1;
                let key = (iu.min(iv), iu.max(iv));
                let j = edge_index[&key];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    orbit_ids.push(j);
                }
            }
        }
        let mut orbit: Vec<(u32, u32)> = orbit_ids.iter().map(|&i| edges[i]).collect();
        orbit.sort_unstable();
        e_orbits.push(orbit);
    }

    let regular = graph.is_regular();
    let vertex_transitive = v_orbits.len() <= 1;
    let edge_transitive = e_orbits.len() <= 1;
    let semisymmetric = regular && edge_transitive && !vertex_transitive;
    Ok(SymmetryReport {
        generators,
        aut_order,
        vertex_orbits: v_orbits,
        edge_orbits: e_orbits,
        regular,
        vertex_transitive,
        edge_transitive,
        semisymmetric,
    })
}

/// Whether the automorphism group is transitive on vertices.
pub fn is_vertex_transitive(graph: &Graph) -> Result<bool, GraphError> {
    Ok(analyze(graph, None)?.vertex_transitive)
}

/// Whether the automorphism group is transitive on edges.
pub fn is_edge_transitive(graph: &Graph) -> Result<bool, GraphError> {
    Ok(analyze(graph, None)?.edge_transitive)
}

/// Whether the graph is regular, edge-transitive, and not
/// vertex-transitive.
pub fn is_semisymmetric(graph: &Graph) -> Result<bool, GraphError> {
    Ok(analyze(graph, None)?.semisymmetric)
}

/// All automorphisms by exhaustive search over every vertex bijection.
/// Usable only for tiny graphs (at most 8 vertices); serves as the
/// independent oracle for the backtracking search.
pub fn brute_force_automorphisms(graph: &Graph) -> Vec<Perm> {
    let n = graph.vertex_count();
    assert!(n <= 8, "exhaustive search only below 9 vertices");
    let mut result = Vec::new();
    let mut images: Vec<u32> = (0..n as u32).collect();
    fn permute(images: &mut Vec<u32>, k: usize, graph: &Graph, result: &mut Vec<Perm>) {
        if k == images.len() {
            if graph.is_automorphism(images) {
                let one_based: Vec<u32> = images.iter().map(|&v| v + 1).collect();
                result.push(Perm::from_images_one_based(&one_based).unwrap());
            }
            return;
        }
        for i in k..images.len() {
            images.swap(k, i);
            permute(images, k + 1, graph, result);
            images.swap(k, i);
        }
    }
    permute(&mut images, 0, graph, &mut result);
    result.sort();
    result
}
