//! Graph representation and the neighbourhood-parity machinery.
//!
//! Graphs are simple and undirected, stored as one neighbourhood bitset per
//! vertex. Everything downstream (losing sets, quantum constraint systems,
//! odd-domination searches) is driven by `odd_neighbourhood` and the
//! enumeration of vertex sets whose induced subgraph has all even degrees.

use crate::bits::{subsets_of, VertexSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {0} outside supported range 1..=64")]
    UnsupportedOrder(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("vertex {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// A simple undirected graph on at most 64 vertices.
///
/// Invariants: `adj[v]` never contains `v`, `u ∈ adj[v] ⟺ v ∈ adj[u]`, and
/// no bit at position `>= n` is ever set.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    vertex_transitive: bool,
}

impl Graph {
    /// Edgeless graph on `n` vertices. Panics unless `1 <= n <= 64`.
    pub fn new(n: usize) -> Graph {
        assert!(
            (1..=VertexSet::MAX_VERTICES).contains(&n),
            "graph order must be in 1..=64, got {n}"
        );
        Graph {
            n,
            adj: vec![VertexSet::EMPTY; n],
            vertex_transitive: false,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if !(1..=VertexSet::MAX_VERTICES).contains(&n) {
            return Err(GraphError::UnsupportedOrder(n));
        }
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Adds the edge `{u, v}`. Panics on out-of-range vertices or `u == v`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in 0..u {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Cycle `0-1-..-(n-1)-0`. Panics unless `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::new(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    /// Path `0-1-..-(n-1)`.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// Paley graph on a prime `n ≡ 1 (mod 4)`: vertices are residues mod `n`,
    /// and `a ~ b` iff `a - b` is a nonzero quadratic residue.
    ///
    /// Prime powers are rejected: the subtraction-based definition only
    /// yields the right graph over a prime field.
    pub fn paley(n: u64) -> Result<Graph, GraphError> {
        if n == 0 || n as usize > VertexSet::MAX_VERTICES {
            return Err(GraphError::UnsupportedOrder(n as usize));
        }
        if !is_prime(n) {
            return Err(GraphError::NotPrime(n));
        }
        if n % 4 != 1 {
            return Err(GraphError::NotOneModFour(n));
        }
        let mut residues = VertexSet::EMPTY;
        for m in 1..n {
            residues.insert((m * m % n) as usize);
        }
        let mut g = Graph::new(n as usize);
        for a in 0..n {
            for b in 0..a {
                // n ≡ 1 (mod 4) makes -1 a residue, so testing a-b suffices
                if residues.contains(((a - b) % n) as usize) {
                    g.add_edge(a as usize, b as usize);
                }
            }
        }
        g.vertex_transitive = true;
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// The full vertex set `{0, .., n-1}`.
    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbourhood(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// True when the graph was built by a constructor whose translation
    /// symmetry is known (currently only `paley`). Never inferred.
    #[inline]
    pub fn is_vertex_transitive_by_construction(&self) -> bool {
        self.vertex_transitive
    }

    /// `Odd(D)`: the vertices with an odd number of neighbours in `D`.
    ///
    /// Equals the GF(2) product of the adjacency matrix with the indicator
    /// of `D`, i.e. the symmetric difference of the neighbourhoods of `D`.
    pub fn odd_neighbourhood(&self, d: VertexSet) -> VertexSet {
        let mut odd = VertexSet::EMPTY;
        for v in d {
            odd ^= self.adj[v];
        }
        odd
    }

    /// `Even(D)`: complement of `Odd(D)` within the vertex set.
    pub fn even_neighbourhood(&self, d: VertexSet) -> VertexSet {
        self.odd_neighbourhood(d).complement_within(self.n)
    }

    /// True iff every vertex of `D` has an even number of neighbours inside
    /// `D`, i.e. the subgraph induced by `D` has all even degrees. This is
    /// the `D ⊆ Even(D)` condition.
    #[inline]
    pub fn is_eulerian_induced(&self, d: VertexSet) -> bool {
        (d & self.odd_neighbourhood(d)).is_empty()
    }

    /// All `D ⊆ restrict_to` with `is_eulerian_induced(D)`, in ascending
    /// numeric order (the empty set comes first).
    pub fn eulerian_subsets(&self, restrict_to: VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
        debug_assert!(restrict_to.is_subset_of(self.vertices()));
        subsets_of(restrict_to).filter(move |&d| self.is_eulerian_induced(d))
    }

    /// Number of edges with both endpoints in `D`.
    pub fn induced_edge_count(&self, d: VertexSet) -> usize {
        d.iter().map(|v| (self.adj[v] & d).len()).sum::<usize>() / 2
    }

    /// Breadth-first two-colouring over every connected component.
    pub fn is_bipartite(&self) -> bool {
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = Vec::new();
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            queue.push(start);
            while let Some(v) = queue.pop() {
                let cv = colour[v].unwrap();
                for u in self.adj[v] {
                    match colour[u] {
                        None => {
                            colour[u] = Some(!cv);
                            queue.push(u);
                        }
                        Some(cu) if cu == cv => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = VertexSet::singleton(0);
        let mut frontier = VertexSet::singleton(0);
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next |= self.adj[v];
            }
            frontier = next - seen;
            seen |= next;
        }
        seen == self.vertices()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for v in 0..self.n {
            g.adj[v] = self.adj[v].complement_within(self.n).without(v);
        }
        g
    }

    /// Image of the graph under the vertex relabeling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::new(self.n);
        for v in 0..self.n {
            for u in self.adj[v] {
                if perm[v] < perm[u] {
                    g.add_edge(perm[v], perm[u]);
                }
            }
        }
        g
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}", self.n)?;
        let mut first = true;
        write!(f, ", edges=[")?;
        for v in 0..self.n {
            for u in self.adj[v] {
                if u > v {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}-{u}")?;
                    first = false;
                }
            }
        }
        write!(f, "])")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All graphs on `n` labeled vertices, enumerated by edge bitmask with the
/// pairs `(0,1),(0,2),..,(0,n-1),(1,2),..` as bit positions. Order is the
/// ascending edge mask. Intended for small exhaustive sweeps (`n <= 7`).
pub fn enumerate_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!((1..=8).contains(&n), "exhaustive graph enumeration supports n in 1..=8");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    (0u32..1 << m).map(move |mask| {
        let mut g = Graph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn paley_5_is_the_5_cycle() {
        let g = Graph::paley(5).unwrap();
        assert_eq!(g.neighbourhood(0).to_vec(), vec![1, 4]);
        let c5 = Graph::cycle(5);
        assert_eq!(g.adj, c5.adj);
    }

    #[test]
    fn paley_13_neighbourhood_of_zero() {
        // quadratic residues mod 13, from m^2 for m = 1..12
        let g = Graph::paley(13).unwrap();
        assert_eq!(g.neighbourhood(0).to_vec(), vec![1, 3, 4, 9, 10, 12]);
        assert!((0..13).all(|v| g.degree(v) == 6));
    }

    #[test]
    fn paley_rejects_bad_orders() {
        assert_eq!(Graph::paley(7), Err(GraphError::NotOneModFour(7)));
        assert_eq!(Graph::paley(9), Err(GraphError::NotPrime(9)));
        assert_eq!(Graph::paley(25), Err(GraphError::NotPrime(25)));
        assert_eq!(Graph::paley(1), Err(GraphError::NotPrime(1)));
        assert_eq!(Graph::paley(65), Err(GraphError::UnsupportedOrder(65)));
    }

    #[test]
    fn odd_neighbourhood_on_c5() {
        let g = Graph::cycle(5);
        let d0: VertexSet = [0].into_iter().collect();
        assert_eq!(g.odd_neighbourhood(d0).to_vec(), vec![1, 4]);
        let d01: VertexSet = [0, 1].into_iter().collect();
        assert_eq!(g.odd_neighbourhood(d01).to_vec(), vec![0, 1, 2, 4]);
        assert_eq!(g.odd_neighbourhood(VertexSet::EMPTY), VertexSet::EMPTY);
    }

    #[test]
    fn eulerian_induced_examples() {
        let k3 = Graph::complete(3);
        assert!(k3.is_eulerian_induced(VertexSet::full(3)));
        assert!(!k3.is_eulerian_induced([0, 1].into_iter().collect()));
        let c5 = Graph::cycle(5);
        assert!(c5.is_eulerian_induced(VertexSet::EMPTY));
    }

    #[test]
    fn eulerian_enumeration_on_c5_and_k3() {
        let c5 = Graph::cycle(5);
        let sets: Vec<VertexSet> = c5.eulerian_subsets(c5.vertices()).collect();
        assert_eq!(sets.len(), 12);
        // empty, 5 singletons, 5 non-adjacent pairs, the whole cycle
        assert_eq!(sets[0], VertexSet::EMPTY);
        assert_eq!(sets[sets.len() - 1], VertexSet::full(5));
        assert_eq!(sets.iter().filter(|s| s.len() == 1).count(), 5);
        assert_eq!(sets.iter().filter(|s| s.len() == 2).count(), 5);

        let k3 = Graph::complete(3);
        let sets: Vec<usize> = k3
            .eulerian_subsets(k3.vertices())
            .map(|s| s.len())
            .collect();
        assert_eq!(sets, vec![0, 1, 1, 1, 3]);

        let none: Vec<VertexSet> = c5.eulerian_subsets(VertexSet::EMPTY).collect();
        assert_eq!(none, vec![VertexSet::EMPTY]);
    }

    #[test]
    fn induced_edge_counts() {
        let k3 = Graph::complete(3);
        assert_eq!(k3.induced_edge_count(VertexSet::full(3)), 3);
        for n in 3..=6 {
            let kn = Graph::complete(n);
            for d in subsets_of(kn.vertices()) {
                let k = d.len();
                assert_eq!(kn.induced_edge_count(d), k * k.saturating_sub(1) / 2);
            }
        }
        let c5 = Graph::cycle(5);
        assert_eq!(c5.induced_edge_count([0, 2].into_iter().collect()), 0);
    }

    #[test]
    fn bipartiteness() {
        assert!(Graph::path(4).is_bipartite());
        assert!(!Graph::cycle(5).is_bipartite());
        // {0,1,4} is a triangle in paley(13): 1, 3, 4 are residues
        let p13 = Graph::paley(13).unwrap();
        assert!(p13.has_edge(0, 1) && p13.has_edge(1, 4) && p13.has_edge(0, 4));
        assert!(!p13.is_bipartite());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::new(1).is_connected());
        assert!(!Graph::new(2).is_connected());
        assert!(Graph::cycle(6).is_connected());
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        assert!(!g.is_connected());
    }

    #[test]
    fn paley_is_vertex_transitive_under_translation() {
        for n in [5usize, 13, 17] {
            let g = Graph::paley(n as u64).unwrap();
            let perm: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
            let shifted = g.relabel(&perm);
            assert_eq!(shifted.adj, g.adj, "translation must fix paley({n})");
        }
    }

    #[test]
    fn paley_13_self_complementary_via_nonresidue_scaling() {
        // 2 is not a residue mod 13, so x -> 2x maps the complement back
        let g = Graph::paley(13).unwrap();
        let perm: Vec<usize> = (0..13).map(|v| v * 2 % 13).collect();
        assert_eq!(g.complement().relabel(&perm).adj, g.adj);
    }

    #[test]
    fn paley_13_strongly_regular() {
        let g = Graph::paley(13).unwrap();
        for v in 0..13 {
            assert_eq!(g.degree(v), 6);
        }
        for u in 0..13 {
            for v in 0..u {
                let common = (g.neighbourhood(u) & g.neighbourhood(v)).len();
                if g.has_edge(u, v) {
                    assert_eq!(common, 2);
                } else {
                    assert_eq!(common, 3);
                }
            }
        }
    }

    #[test]
    fn enumerate_graph_counts() {
        assert_eq!(enumerate_graphs(3).count(), 8);
        assert_eq!(enumerate_graphs(4).filter(|g| g.is_connected()).count(), 38);
        assert_eq!(enumerate_graphs(5).filter(|g| g.is_connected()).count(), 728);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n)
            .prop_flat_map(|n| {
                let m = n * (n - 1) / 2;
                (Just(n), proptest::collection::vec(any::<bool>(), m))
            })
            .prop_map(|(n, edge_bits)| {
                let mut g = Graph::new(n);
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if edge_bits[i] {
                            g.add_edge(u, v);
                        }
                        i += 1;
                    }
                }
                g
            })
    }

    proptest! {
        #[test]
        fn odd_neighbourhood_is_gf2_linear(g in arb_graph(10), d_bits in any::<u64>(), e_bits in any::<u64>()) {
            let d = VertexSet::from_bits(d_bits) & g.vertices();
            let e = VertexSet::from_bits(e_bits) & g.vertices();
            prop_assert_eq!(
                g.odd_neighbourhood(d ^ e),
                g.odd_neighbourhood(d) ^ g.odd_neighbourhood(e)
            );
            // symmetric difference of the individual neighbourhoods
            let mut acc = VertexSet::EMPTY;
            for v in d {
                acc ^= g.neighbourhood(v);
            }
            prop_assert_eq!(acc, g.odd_neighbourhood(d));
        }

        #[test]
        fn eulerian_matches_degree_oracle(g in arb_graph(10), d_bits in any::<u64>()) {
            let d = VertexSet::from_bits(d_bits) & g.vertices();
            let all_even = d.iter().all(|v| (g.neighbourhood(v) & d).len() % 2 == 0);
            prop_assert_eq!(g.is_eulerian_induced(d), all_even);
        }
    }
}
