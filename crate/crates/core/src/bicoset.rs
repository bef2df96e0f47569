//! Explicit bi-coset graphs at small coset index.
//!
//! The bi-coset graph of a group `G`, subgroups `L` and `R`, and a union of
//! double cosets `D = ∪ R dᵢ L` is the bipartite graph on the right coset
//! spaces `[G:L] ⊔ [G:R]` with `Lx` adjacent to `Ry` exactly when
//! `y x⁻¹ ∈ D`. This module materializes such graphs when both indices are
//! small, exposes the classical structure predicates (regularity,
//! connectivity, edge-transitivity of the defining action, a sufficient
//! vertex-transitivity condition, faithfulness of the coset actions), and
//! exports a plain edge-list format.
//!
//! Cosets are represented by the full image table of their canonical
//! representative, so vertex enumeration touches the coset space, never the
//! group itself, and vertex order is lexicographic on those tables — builds
//! are byte-reproducible.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::factnum::FactoredNat;
use crate::permcore::{Perm, PermError, PermGroup};

/// Errors from bi-coset graph construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiCosetError {
    /// A coset space exceeds the configured bound.
    #[error("coset index exceeds the bound {bound}")]
    IndexBoundExceeded {
        /// The configured bound.
        bound: usize,
    },
    /// A claimed subgroup or connection element lies outside the group.
    #[error("not contained in the ambient group: {0}")]
    NotSubgroup(String),
    /// No connection representatives were given.
    #[error("the connection set needs at least one representative")]
    EmptyConnectionSet,
    /// Underlying permutation error.
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Default bound on either coset index.
pub const DEFAULT_INDEX_BOUND: usize = 100_000;

/// An explicit bi-coset graph.
///
/// Left vertices are the cosets `Lx` (indexed `0..n_left`), right vertices
/// the cosets `Ry` (indexed `0..n_right`), both sorted lexicographically by
/// the image table of the canonical coset representative.
#[derive(Debug, Clone)]
pub struct BiCosetGraph {
    group: PermGroup,
    left: PermGroup,
    right: PermGroup,
    d_reps: Vec<Perm>,
    left_reps: Vec<Perm>,
    right_reps: Vec<Perm>,
    right_index: HashMap<Vec<u32>, usize>,
    left_index: HashMap<Vec<u32>, usize>,
    /// Sorted neighbor lists per left vertex.
    adjacency: Vec<Vec<usize>>,
    /// Canonical representatives of the right cosets of `R` inside `D`.
    d_coset_reps: Vec<Perm>,
    /// All given representatives lie in a single double coset.
    single_double_coset: bool,
    /// `D = D⁻¹`.
    d_symmetric: bool,
}

/// Enumerates the right cosets of `sub` in `group` by breadth-first orbit of
/// the identity coset under right multiplication by the group's generators.
/// Returns canonical representatives sorted by their image tables.
fn enumerate_cosets(
    group: &PermGroup,
    sub: &PermGroup,
    bound: usize,
) -> Result<Vec<Perm>, BiCosetError> {
    let start = sub.coset_canonical_rep(&Perm::identity(group.degree()));
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(sub.coset_key(&start));
    let mut queue = vec![start];
    let mut head = 0;
    while head < queue.len() {
        let rep = queue[head].clone();
        head += 1;
        for s in group.generators() {
            let next = sub.coset_canonical_rep(&rep.mul(s));
            if seen.insert(sub.coset_key(&next)) {
                if seen.len() > bound {
                    return Err(BiCosetError::IndexBoundExceeded { bound });
                }
                queue.push(next);
            }
        }
    }
    queue.sort();
    Ok(queue)
}

/// Enumerates the right cosets of `r` inside the double coset `R d L` as
/// canonical representatives, by orbit of `Rd` under right multiplication by
/// the generators of `l`.
fn double_coset_right_cosets(
    r: &PermGroup,
    l: &PermGroup,
    d: &Perm,
    bound: usize,
) -> Result<Vec<Perm>, BiCosetError> {
    let start = r.coset_canonical_rep(d);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(r.coset_key(&start));
    let mut queue = vec![start];
    let mut head = 0;
    while head < queue.len() {
        let rep = queue[head].clone();
        head += 1;
        for s in l.generators() {
            let next = r.coset_canonical_rep(&rep.mul(s));
            if seen.insert(r.coset_key(&next)) {
                if seen.len() > bound {
                    return Err(BiCosetError::IndexBoundExceeded { bound });
                }
                queue.push(next);
            }
        }
    }
    Ok(queue)
}

impl BiCosetGraph {
    /// Builds the bi-coset graph of `group`, `left`, `right`, and the union
    /// of double cosets `D = ∪ right·d·left` over the given representatives.
    ///
    /// Both coset indices must stay within `index_bound`
    /// ([`DEFAULT_INDEX_BOUND`] when `None`). The subgroups and all
    /// representatives must lie in `group`.
    pub fn build(
        group: PermGroup,
        left: PermGroup,
        right: PermGroup,
        d_reps: Vec<Perm>,
        index_bound: Option<usize>,
    ) -> Result<BiCosetGraph, BiCosetError> {
        let bound = index_bound.unwrap_or(DEFAULT_INDEX_BOUND);
        if d_reps.is_empty() {
            return Err(BiCosetError::EmptyConnectionSet);
        }
        for gen in left.generators() {
            if !group.contains(gen)? {
                return Err(BiCosetError::NotSubgroup(format!("left generator {gen}")));
            }
        }
        for gen in right.generators() {
            if !group.contains(gen)? {
                return Err(BiCosetError::NotSubgroup(format!("right generator {gen}")));
            }
        }
        for d in &d_reps {
            if !group.contains(d)? {
                return Err(BiCosetError::NotSubgroup(format!("connection representative {d}")));
            }
        }

        let left_reps = enumerate_cosets(&group, &left, bound)?;
        let right_reps = enumerate_cosets(&group, &right, bound)?;
        let left_index: HashMap<Vec<u32>, usize> = left_reps
            .iter()
            .enumerate()
            .map(|(i, rep)| (left.coset_key(rep), i))
            .collect();
        let right_index: HashMap<Vec<u32>, usize> = right_reps
            .iter()
            .enumerate()
            .map(|(i, rep)| (right.coset_key(rep), i))
            .collect();

        // The right cosets of R carving up D, one batch per representative.
        let mut d_keys: HashSet<Vec<u32>> = HashSet::new();
        let mut d_coset_reps: Vec<Perm> = Vec::new();
        let mut first_batch_keys: HashSet<Vec<u32>> = HashSet::new();
        let mut single_double_coset = true;
        for (i, d) in d_reps.iter().enumerate() {
            if i > 0 && first_batch_keys.contains(&right.coset_key(d)) {
                continue; // same double coset as the first; nothing new
            }
            if i > 0 {
                single_double_coset = false;
            }
            let batch = double_coset_right_cosets(&right, &left, d, bound)?;
            for rep in batch {
                let key = right.coset_key(&rep);
                if i == 0 {
                    first_batch_keys.insert(key.clone());
                }
                if d_keys.insert(key) {
                    d_coset_reps.push(rep);
                }
            }
        }
        d_coset_reps.sort();
        let d_symmetric = d_reps
            .iter()
            .all(|d| d_keys.contains(&right.coset_key(&d.inverse())));

        // Neighbors of Lx are exactly the cosets R(δx) over the D-coset
        // representatives δ: distinct δ-cosets give distinct neighbors, so
        // every left vertex has degree |D|/|R|.
        let mut adjacency = Vec::with_capacity(left_reps.len());
        for x in &left_reps {
            let mut nbrs: Vec<usize> = d_coset_reps
                .iter()
                .map(|delta| right_index[&right.coset_key(&delta.mul(x))])
                .collect();
            nbrs.sort_unstable();
            debug_assert!(nbrs.windows(2).all(|w| w[0] != w[1]));
            adjacency.push(nbrs);
        }

        Ok(BiCosetGraph {
            group,
            left,
            right,
            d_reps,
            left_reps,
            right_reps,
            right_index,
            left_index,
            adjacency,
            d_coset_reps,
            single_double_coset,
            d_symmetric,
        })
    }

    /// Number of left vertices, `|G:L|`.
    pub fn n_left(&self) -> usize {
        self.left_reps.len()
    }

    /// Number of right vertices, `|G:R|`.
    pub fn n_right(&self) -> usize {
        self.right_reps.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Number of right cosets of `R` inside `D`, i.e. `|D|/|R|`.
    pub fn d_coset_count(&self) -> usize {
        self.d_coset_reps.len()
    }

    /// `|D|` as an exact factored integer (`|D|/|R| · |R|`).
    pub fn d_size(&self) -> FactoredNat {
        FactoredNat::from_u64(self.d_coset_reps.len() as u64)
            .expect("positive count")
            .mul(self.right.order())
    }

    /// Sorted neighbor lists, one per left vertex.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Canonical representatives of the left-part cosets, in vertex order.
    pub fn left_reps(&self) -> &[Perm] {
        &self.left_reps
    }

    /// Canonical representatives of the right-part cosets, in vertex order.
    pub fn right_reps(&self) -> &[Perm] {
        &self.right_reps
    }

    /// The ambient group.
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// The left subgroup.
    pub fn left(&self) -> &PermGroup {
        &self.left
    }

    /// The right subgroup.
    pub fn right(&self) -> &PermGroup {
        &self.right
    }

    /// The connection-set representatives.
    pub fn d_reps(&self) -> &[Perm] {
        &self.d_reps
    }

    /// Index of the left vertex holding `x` (the coset `Lx`), if the
    /// element belongs to the group.
    pub fn left_vertex_of(&self, x: &Perm) -> Option<usize> {
        self.left_index.get(&self.left.coset_key(x)).copied()
    }

    /// Index of the right vertex holding `y` (the coset `Ry`).
    pub fn right_vertex_of(&self, y: &Perm) -> Option<usize> {
        self.right_index.get(&self.right.coset_key(y)).copied()
    }

    /// Whether all vertex degrees coincide, checked on the explicit graph.
    /// Equivalent to `|L| = |R|`.
    pub fn is_regular(&self) -> bool {
        let left_degree = self.d_coset_reps.len();
        let mut right_degrees = vec![0usize; self.right_reps.len()];
        for nbrs in &self.adjacency {
            for &v in nbrs {
                right_degrees[v] += 1;
            }
        }
        right_degrees.iter().all(|&deg| deg == left_degree)
    }

    /// Whether the graph is connected, by breadth-first search. Equivalent
    /// to `⟨D⁻¹D⟩ = G` (see [`BiCosetGraph::connectivity_criterion`]).
    pub fn is_connected(&self) -> bool {
        let n = self.n_left() + self.n_right();
        if n == 0 {
            return true;
        }
        // Right-vertex adjacency, for the reverse direction.
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.n_right()];
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                rev[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = vec![0usize]; // left vertex 0
        seen[0] = true;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let (nbrs, offset): (&[usize], usize) = if u < self.n_left() {
                (&self.adjacency[u], self.n_left())
            } else {
                (&rev[u - self.n_left()], 0)
            };
            for &v in nbrs {
                let vid = v + offset;
                if !seen[vid] {
                    seen[vid] = true;
                    queue.push(vid);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The group-theoretic connectivity criterion: `⟨D⁻¹D⟩ = G`, with
    /// `⟨D⁻¹D⟩ = ⟨L ∪ d₁⁻¹Rd₁ ∪ {d₁⁻¹dⱼ}⟩`.
    pub fn connectivity_criterion(&self) -> Result<bool, BiCosetError> {
        let d1 = &self.d_reps[0];
        let d1_inv = d1.inverse();
        let mut gens: Vec<Perm> = self.left.generators().to_vec();
        for r in self.right.generators() {
            gens.push(d1_inv.mul(r).mul(d1));
        }
        for dj in &self.d_reps[1..] {
            gens.push(d1_inv.mul(dj));
        }
        let generated = PermGroup::from_generators(self.group.degree(), gens)?;
        Ok(generated.order() == self.group.order())
    }

    /// Whether the defining group acts transitively on the edge set:
    /// true exactly when all connection representatives lie in one double
    /// coset `R d L`.
    pub fn is_g_edge_transitive(&self) -> bool {
        self.single_double_coset
    }

    /// The sufficient condition for vertex-transitivity: `L = R` as groups
    /// and `D = D⁻¹`. A `true` here guarantees a part-swapping graph
    /// automorphism; `false` draws no conclusion.
    pub fn sufficient_vertex_transitive(&self) -> Result<bool, BiCosetError> {
        if self.left.order() != self.right.order() {
            return Ok(false);
        }
        if !self.left.contains_group(&self.right)? {
            return Ok(false);
        }
        Ok(self.d_symmetric)
    }

    /// Plain edge-list rendering: a header `n_left n_right m`, then one
    /// `u v` line per edge with `u` a left vertex (`0`-based) and `v` the
    /// right endpoint offset by `n_left`. Lines are sorted; the output is
    /// byte-reproducible.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n_left(), self.n_right(), self.edge_count());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                out.push_str(&format!("{} {}\n", u, v + self.n_left()));
            }
        }
        out
    }
}

/// Whether `group` acts faithfully on both coset spaces `[G:L]` and
/// `[G:R]` — equivalently, the cores of both subgroups are trivial. The
/// kernel of each coset action is tested by comparing the order of the
/// induced permutation group on the cosets with the order of the group.
pub fn faithfulness_check(
    group: &PermGroup,
    left: &PermGroup,
    right: &PermGroup,
    index_bound: Option<usize>,
) -> Result<bool, BiCosetError> {
    Ok(coset_action_faithful(group, left, index_bound)?
        && coset_action_faithful(group, right, index_bound)?)
}

/// Whether the action of `group` on the right cosets of `sub` is faithful.
fn coset_action_faithful(
    group: &PermGroup,
    sub: &PermGroup,
    index_bound: Option<usize>,
) -> Result<bool, BiCosetError> {
    let bound = index_bound.unwrap_or(DEFAULT_INDEX_BOUND);
    for gen in sub.generators() {
        if !group.contains(gen)? {
            return Err(BiCosetError::NotSubgroup(format!("subgroup generator {gen}")));
        }
    }
    let reps = enumerate_cosets(group, sub, bound)?;
    let index: HashMap<Vec<u32>, usize> = reps
        .iter()
        .enumerate()
        .map(|(i, rep)| (sub.coset_key(rep), i))
        .collect();
    let n = reps.len() as u32;
    let mut action_gens = Vec::with_capacity(group.generators().len());
    for s in group.generators() {
        let images: Vec<u32> = reps
            .iter()
            .map(|rep| index[&sub.coset_key(&rep.mul(s))] as u32 + 1)
            .collect();
        action_gens.push(Perm::from_images_one_based(&images)?);
    }
    let image = PermGroup::from_generators(n.max(1), action_gens)?;
    Ok(image.order() == group.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{product_of_cycles, transposition};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn group_of(degree: u32, cycles: &[&str]) -> PermGroup {
        let gens: Vec<Perm> =
            cycles.iter().map(|c| Perm::parse(c, degree).unwrap()).collect();
        PermGroup::from_generators(degree, gens).unwrap()
    }

    #[test]
    fn complete_bipartite_from_full_connection_set() {
        // D = S_3 (two double cosets of the order-2 subgroup) gives K_{3,3}.
        let g = PermGroup::symmetric(3);
        let l = group_of(3, &["(1,2)"]);
        let graph = BiCosetGraph::build(
            g,
            l.clone(),
            l.clone(),
            vec![Perm::identity(3), Perm::parse("(1,2,3)", 3).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(graph.n_left(), 3);
        assert_eq!(graph.n_right(), 3);
        assert_eq!(graph.edge_count(), 9);
        assert_eq!(graph.d_coset_count(), 3);
        for nbrs in graph.adjacency() {
            assert_eq!(nbrs, &[0, 1, 2]);
        }
        assert!(graph.is_regular());
        assert!(graph.is_connected());
        assert!(!graph.is_g_edge_transitive());
    }

    #[test]
    fn single_edge_from_full_subgroups() {
        let g = PermGroup::symmetric(3);
        let graph = BiCosetGraph::build(
            g.clone(),
            g.clone(),
            g,
            vec![Perm::identity(3)],
            None,
        )
        .unwrap();
        assert_eq!(graph.n_left(), 1);
        assert_eq!(graph.n_right(), 1);
        assert_eq!(graph.edge_count(), 1);
        assert!(graph.is_connected());
        assert!(graph.is_regular());
        assert!(graph.is_g_edge_transitive());
    }

    #[test]
    fn degree_four_instance_has_expected_edge_count() {
        // G = S_4, L = R = <(1,2),(3,4)> of order 4, D = R(1,3)L of size 16:
        // 6 + 6 vertices and 6·16/4 = 24 edges.
        let g = PermGroup::symmetric(4);
        let l = group_of(4, &["(1,2)", "(3,4)"]);
        let graph = BiCosetGraph::build(
            g,
            l.clone(),
            l,
            vec![transposition(4, 1, 3)],
            None,
        )
        .unwrap();
        assert_eq!(graph.n_left(), 6);
        assert_eq!(graph.n_right(), 6);
        assert_eq!(graph.d_size(), FactoredNat::from_u64(16).unwrap());
        assert_eq!(graph.edge_count(), 24);
        assert!(graph.is_regular());
        assert!(graph.is_g_edge_transitive());
    }

    #[test]
    fn irregular_when_subgroup_orders_differ() {
        // L of order 2, R = A_3 of order 3, D = R·e·L = S_3.
        let g = PermGroup::symmetric(3);
        let l = group_of(3, &["(1,2)"]);
        let r = group_of(3, &["(1,2,3)"]);
        let graph =
            BiCosetGraph::build(g, l, r, vec![Perm::identity(3)], None).unwrap();
        assert_eq!(graph.n_left(), 3);
        assert_eq!(graph.n_right(), 2);
        assert_eq!(graph.d_size(), FactoredNat::from_u64(6).unwrap());
        assert_eq!(graph.edge_count(), 6);
        assert!(!graph.is_regular());
        assert!(graph.is_g_edge_transitive());
        assert!(graph.is_connected());
    }

    #[test]
    fn matching_is_disconnected() {
        // L = R = D = <(1,2)> in S_4: a perfect matching on 12+12 vertices.
        let g = PermGroup::symmetric(4);
        let l = group_of(4, &["(1,2)"]);
        let graph = BiCosetGraph::build(
            g,
            l.clone(),
            l,
            vec![Perm::identity(4)],
            None,
        )
        .unwrap();
        assert_eq!(graph.n_left(), 12);
        assert_eq!(graph.n_right(), 12);
        assert_eq!(graph.edge_count(), 12);
        assert!(!graph.is_connected());
        assert!(!graph.connectivity_criterion().unwrap());
    }

    #[test]
    fn build_input_validation() {
        let g = PermGroup::alternating(4);
        let l = group_of(4, &["(1,2)"]); // odd: not inside A_4
        assert!(matches!(
            BiCosetGraph::build(
                g.clone(),
                l.clone(),
                l.clone(),
                vec![Perm::identity(4)],
                None
            ),
            Err(BiCosetError::NotSubgroup(_))
        ));
        let v4 = group_of(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        assert!(matches!(
            BiCosetGraph::build(
                g.clone(),
                v4.clone(),
                v4.clone(),
                vec![transposition(4, 1, 2)],
                None
            ),
            Err(BiCosetError::NotSubgroup(_))
        ));
        assert!(matches!(
            BiCosetGraph::build(g.clone(), v4.clone(), v4.clone(), vec![], None),
            Err(BiCosetError::EmptyConnectionSet)
        ));
        // Index bound: |A_4 : V_4| = 3 > 2.
        assert!(matches!(
            BiCosetGraph::build(g, v4.clone(), v4, vec![Perm::identity(4)], Some(2)),
            Err(BiCosetError::IndexBoundExceeded { bound: 2 })
        ));
    }

    /// Pool of random small instances for the biconditional tests.
    fn random_instances(count: usize, seed: u64) -> Vec<BiCosetGraph> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ambients = [PermGroup::symmetric(4), PermGroup::alternating(4), PermGroup::symmetric(3)];
        let mut graphs = Vec::new();
        while graphs.len() < count {
            let g = ambients.iter().choose(&mut rng).unwrap().clone();
            let n = g.degree();
            let sub_of = |rng: &mut ChaCha8Rng| {
                // A subgroup generated by one or two random group elements.
                let mut gens = Vec::new();
                for _ in 0..rng.random_range(1..=2usize) {
                    // Random member: random word in the generators.
                    let mut w = Perm::identity(n);
                    for _ in 0..rng.random_range(0..6usize) {
                        let s = g.generators().iter().choose(rng).unwrap();
                        w = w.mul(s);
                    }
                    gens.push(w);
                }
                PermGroup::from_generators(n, gens).unwrap()
            };
            let l = sub_of(&mut rng);
            let r = sub_of(&mut rng);
            let mut d_reps = Vec::new();
            for _ in 0..rng.random_range(1..=2usize) {
                let mut w = Perm::identity(n);
                for _ in 0..rng.random_range(0..6usize) {
                    let s = g.generators().iter().choose(&mut rng).unwrap();
                    w = w.mul(s);
                }
                d_reps.push(w);
            }
            graphs.push(BiCosetGraph::build(g, l, r, d_reps, None).unwrap());
        }
        graphs
    }

    #[test]
    fn regularity_iff_equal_subgroup_orders() {
        for graph in random_instances(200, 101) {
            assert_eq!(
                graph.is_regular(),
                graph.left().order() == graph.right().order(),
                "regularity mismatch: |L|={} |R|={}",
                graph.left().order(),
                graph.right().order()
            );
        }
    }

    #[test]
    fn connectivity_iff_generated_by_connection_quotients() {
        let mut connected = 0;
        let mut disconnected = 0;
        for graph in random_instances(120, 103) {
            let bfs = graph.is_connected();
            assert_eq!(bfs, graph.connectivity_criterion().unwrap());
            if bfs {
                connected += 1;
            } else {
                disconnected += 1;
            }
        }
        assert!(connected > 0, "sample never connected");
        assert!(disconnected > 0, "sample never disconnected");
    }

    #[test]
    fn edge_count_identity_both_sides() {
        for graph in random_instances(60, 107) {
            let m = FactoredNat::from_u64(graph.edge_count() as u64).unwrap();
            // |E| = |G:L| · |D| / |R|  ⟺  |E|·|R| = |G:L|·|D|.
            let index_l = FactoredNat::from_u64(graph.n_left() as u64).unwrap();
            assert_eq!(m.mul(graph.right().order()), index_l.mul(&graph.d_size()));
            // |E| = |G:R| · |D| / |L|  ⟺  |E|·|L| = |G:R|·|D|.
            let index_r = FactoredNat::from_u64(graph.n_right() as u64).unwrap();
            assert_eq!(m.mul(graph.left().order()), index_r.mul(&graph.d_size()));
        }
    }

    #[test]
    fn right_multiplication_preserves_adjacency() {
        for graph in random_instances(20, 109) {
            for s in graph.group().generators() {
                // Vertex maps induced by right multiplication.
                let left_map: Vec<usize> = graph
                    .left_reps()
                    .iter()
                    .map(|x| graph.left_vertex_of(&x.mul(s)).unwrap())
                    .collect();
                let right_map: Vec<usize> = graph
                    .right_reps()
                    .iter()
                    .map(|y| graph.right_vertex_of(&y.mul(s)).unwrap())
                    .collect();
                // Both maps are bijections.
                let mut lm = left_map.clone();
                lm.sort_unstable();
                assert!(lm.iter().enumerate().all(|(i, &v)| i == v));
                // Edges map onto edges.
                for (u, nbrs) in graph.adjacency().iter().enumerate() {
                    for &v in nbrs {
                        assert!(
                            graph.adjacency()[left_map[u]]
                                .binary_search(&right_map[v])
                                .is_ok(),
                            "edge image missing"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn edge_transitivity_iff_single_double_coset() {
        // Single representative: always transitive on edges.
        let g = PermGroup::symmetric(4);
        let l = group_of(4, &["(1,2)", "(3,4)"]);
        let single = BiCosetGraph::build(
            g.clone(),
            l.clone(),
            l.clone(),
            vec![transposition(4, 1, 3)],
            None,
        )
        .unwrap();
        assert!(single.is_g_edge_transitive());
        // Two representatives in different double cosets: not transitive.
        let double = BiCosetGraph::build(
            g.clone(),
            l.clone(),
            l.clone(),
            vec![Perm::identity(4), transposition(4, 1, 3)],
            None,
        )
        .unwrap();
        assert!(!double.is_g_edge_transitive());
        // Two representatives of the SAME double coset: still transitive.
        let rep2 = Perm::parse("(1,2)", 4).unwrap().mul(&transposition(4, 1, 3));
        let same = BiCosetGraph::build(
            g,
            l.clone(),
            l,
            vec![transposition(4, 1, 3), rep2],
            None,
        )
        .unwrap();
        assert!(same.is_g_edge_transitive());
        assert_eq!(same.edge_count(), single.edge_count());
    }

    #[test]
    fn edge_orbit_covers_all_edges_iff_edge_transitive() {
        for graph in random_instances(40, 113) {
            // Orbit of the first edge under right multiplication by the
            // group generators.
            let first = (0usize, graph.adjacency()[0][0]);
            let mut seen = HashSet::new();
            seen.insert(first);
            let mut queue = vec![first];
            let mut head = 0;
            while head < queue.len() {
                let (u, v) = queue[head];
                head += 1;
                for s in graph.group().generators() {
                    let uu = graph
                        .left_vertex_of(&graph.left_reps()[u].mul(s))
                        .unwrap();
                    let vv = graph
                        .right_vertex_of(&graph.right_reps()[v].mul(s))
                        .unwrap();
                    if seen.insert((uu, vv)) {
                        queue.push((uu, vv));
                    }
                }
            }
            let covered_all = seen.len() == graph.edge_count();
            assert_eq!(covered_all, graph.is_g_edge_transitive());
        }
    }

    #[test]
    fn vertex_transitive_sufficient_condition() {
        let g = PermGroup::symmetric(4);
        let r = group_of(4, &["(1,2)"]);
        // D = RgR ∪ Rg⁻¹R is symmetric by construction.
        let four_cycle = product_of_cycles(4, &[vec![1, 2, 3, 4]]);
        let sym = BiCosetGraph::build(
            g.clone(),
            r.clone(),
            r.clone(),
            vec![four_cycle.clone(), four_cycle.inverse()],
            None,
        )
        .unwrap();
        assert!(sym.sufficient_vertex_transitive().unwrap());
        // D = RgR alone with g⁻¹ ∉ RgR fails the condition.
        let asym = BiCosetGraph::build(
            g.clone(),
            r.clone(),
            r.clone(),
            vec![four_cycle],
            None,
        )
        .unwrap();
        assert!(!asym.sufficient_vertex_transitive().unwrap());
        // An involution makes D symmetric on its own.
        let inv = BiCosetGraph::build(
            g.clone(),
            r.clone(),
            r.clone(),
            vec![transposition(4, 1, 3)],
            None,
        )
        .unwrap();
        assert!(inv.sufficient_vertex_transitive().unwrap());
        // Different subgroups fail regardless of D.
        let other = group_of(4, &["(3,4)"]);
        let diff = BiCosetGraph::build(
            g,
            r,
            other,
            vec![transposition(4, 1, 3)],
            None,
        )
        .unwrap();
        assert!(!diff.sufficient_vertex_transitive().unwrap());
    }

    #[test]
    fn faithfulness_examples() {
        let s4 = PermGroup::symmetric(4);
        // Point stabilizer of 4 in S_4: core-free, faithful on 4 cosets.
        let s3 = group_of(4, &["(1,2)", "(1,2,3)"]);
        assert!(faithfulness_check(&s4, &s3, &s3, None).unwrap());
        // A_4 is normal and proper in S_4: core = A_4, not faithful.
        let a4 = PermGroup::alternating(4);
        assert!(!faithfulness_check(&s4, &a4, &s3, None).unwrap());
        assert!(!faithfulness_check(&s4, &s3, &a4, None).unwrap());
        // A_3 inside S_3.
        let s3_amb = PermGroup::symmetric(3);
        let a3 = group_of(3, &["(1,2,3)"]);
        assert!(!faithfulness_check(&s3_amb, &a3, &a3, None).unwrap());
    }

    #[test]
    fn edge_list_format_and_reproducibility() {
        let build = || {
            let g = PermGroup::symmetric(3);
            let l = group_of(3, &["(1,2)"]);
            BiCosetGraph::build(
                g,
                l.clone(),
                l,
                vec![Perm::identity(3), Perm::parse("(1,2,3)", 3).unwrap()],
                None,
            )
            .unwrap()
        };
        let text = build().to_edge_list();
        let again = build().to_edge_list();
        assert_eq!(text, again, "builds must be byte-reproducible");
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("3 3 9"));
        let edges: Vec<&str> = lines.collect();
        assert_eq!(edges.len(), 9);
        assert_eq!(edges[0], "0 3");
        // All right endpoints are offset by n_left = 3.
        for e in &edges {
            let v: usize = e.split_whitespace().nth(1).unwrap().parse().unwrap();
            assert!((3..6).contains(&v));
        }
    }

    #[test]
    fn conjugated_data_gives_graph_with_same_profile() {
        // (L, R, D) ↦ (Lᵃ, Rᵇ, b⁻¹Da) yields an isomorphic graph; here we
        // check the cheap isomorphism invariants (full isomorphism is
        // exercised through the canonical forms of the graph-symmetry
        // module).
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        for graph in random_instances(20, 127) {
            let n = graph.group().degree();
            // Random members of G as conjugators.
            let a = {
                let mut w = Perm::identity(n);
                for _ in 0..rng.random_range(0..6usize) {
                    w = w.mul(graph.group().generators().iter().choose(&mut rng).unwrap());
                }
                w
            };
            let b = {
                let mut w = Perm::identity(n);
                for _ in 0..rng.random_range(0..6usize) {
                    w = w.mul(graph.group().generators().iter().choose(&mut rng).unwrap());
                }
                w
            };
            let conj = |h: &PermGroup, c: &Perm| {
                let gens: Vec<Perm> =
                    h.generators().iter().map(|s| s.conjugated_by(c)).collect();
                PermGroup::from_generators(n, gens).unwrap()
            };
            let l2 = conj(graph.left(), &a);
            let r2 = conj(graph.right(), &b);
            let d2: Vec<Perm> = graph
                .d_reps()
                .iter()
                .map(|d| b.inverse().mul(d).mul(&a))
                .collect();
            let other = BiCosetGraph::build(
                graph.group().clone(),
                l2,
                r2,
                d2,
                None,
            )
            .unwrap();
            assert_eq!(other.n_left(), graph.n_left());
            assert_eq!(other.n_right(), graph.n_right());
            assert_eq!(other.edge_count(), graph.edge_count());
            assert_eq!(other.is_connected(), graph.is_connected());
            assert_eq!(other.is_regular(), graph.is_regular());
            assert_eq!(
                other.is_g_edge_transitive(),
                graph.is_g_edge_transitive()
            );
            // Degree multisets agree.
            let degrees = |g: &BiCosetGraph| {
                let mut right = vec![0usize; g.n_right()];
                for nbrs in g.adjacency() {
                    for &v in nbrs {
                        right[v] += 1;
                    }
                }
                let mut all: Vec<usize> =
                    g.adjacency().iter().map(Vec::len).chain(right).collect();
                all.sort_unstable();
                all
            };
            assert_eq!(degrees(&other), degrees(&graph));
        }
    }

    #[test]
    fn random_adjacency_matches_membership_definition() {
        // {Lx, Ry} adjacent iff y·x⁻¹ ∈ D, checked against element-level
        // membership on a small instance.
        let g = PermGroup::symmetric(4);
        let l = group_of(4, &["(1,2)"]);
        let r = group_of(4, &["(3,4)"]);
        let d_rep = Perm::parse("(1,3)", 4).unwrap();
        let graph = BiCosetGraph::build(
            g.clone(),
            l.clone(),
            r.clone(),
            vec![d_rep.clone()],
            None,
        )
        .unwrap();
        // Enumerate D = R·d·L explicitly.
        let r_elems = r.enumerate_small(100).unwrap();
        let l_elems = l.enumerate_small(100).unwrap();
        let mut d_set = HashSet::new();
        for re in &r_elems {
            for le in &l_elems {
                d_set.insert(re.mul(&d_rep).mul(le));
            }
        }
        assert_eq!(
            FactoredNat::from_u64(d_set.len() as u64).unwrap(),
            graph.d_size()
        );
        for (u, x) in graph.left_reps().iter().enumerate() {
            for (v, y) in graph.right_reps().iter().enumerate() {
                let member = d_set.contains(&y.mul(&x.inverse()));
                let adjacent = graph.adjacency()[u].binary_search(&v).is_ok();
                assert_eq!(member, adjacent, "u={u} v={v}");
            }
        }
    }
}
