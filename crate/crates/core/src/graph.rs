//! Finite simple graphs with a fixed vertex order, plus the clique/module
//! machinery: maximal cliques, modules, modular partitions and quotients,
//! T0/T1 tests, the T0 quotient, and (co-)components.
//!
//! Vertex ids are opaque strings. The order in which vertices are listed at
//! construction is the total order used everywhere else in the crate (normal
//! forms, deterministic set output), so all set-valued results come back
//! sorted by that order.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("edge endpoint `{0}` is not a listed vertex")]
    UnknownEndpoint(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("block {{{0}}} is not a module")]
    NotModular(String),
    #[error("invalid partition: {0}")]
    BadPartition(String),
}

/// Finite simple graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Builds a validated graph. The given vertex order is kept and becomes
    /// the total order used by every other operation.
    pub fn new<S, T>(
        vertices: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (T, T)>,
    ) -> Result<Self, GraphError>
    where
        S: Into<String>,
        T: AsRef<str>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut adj = vec![BTreeSet::new(); vertices.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let &u = index
                .get(a)
                .ok_or_else(|| GraphError::UnknownEndpoint(a.to_string()))?;
            let &v = index
                .get(b)
                .ok_or_else(|| GraphError::UnknownEndpoint(b.to_string()))?;
            if u == v {
                return Err(GraphError::SelfLoop(a.to_string()));
            }
            if !adj[u].insert(v) {
                return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
            }
            adj[v].insert(u);
        }
        Ok(Graph {
            vertices,
            index,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn id_of(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    /// Edges as index pairs (u, v) with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertices.len() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Resolves a collection of vertex ids into an index set.
    pub fn resolve<S: AsRef<str>>(
        &self,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<BTreeSet<usize>, GraphError> {
        ids.into_iter().map(|id| self.index_of(id.as_ref())).collect()
    }

    /// Renders an index set back to ids, in vertex order.
    pub fn ids_of(&self, set: &BTreeSet<usize>) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Complement graph on the same vertex list.
    pub fn complement(&self) -> Graph {
        let n = self.vertices.len();
        let mut adj = vec![BTreeSet::new(); n];
        for u in 0..n {
            for v in 0..n {
                if u != v && !self.adj[u].contains(&v) {
                    adj[u].insert(v);
                }
            }
        }
        Graph {
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            adj,
        }
    }

    /// True iff the vertices of `xs` are pairwise adjacent.
    pub fn is_complete(&self, xs: &BTreeSet<usize>) -> bool {
        let v: Vec<usize> = xs.iter().copied().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if !self.has_edge(v[i], v[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// All maximal cliques (as vertex index sets), sorted lexicographically.
    /// An isolated vertex yields a singleton clique; the empty graph has none.
    pub fn cliques(&self) -> Vec<BTreeSet<usize>> {
        let n = self.vertices.len();
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let p: BTreeSet<usize> = (0..n).collect();
        self.bron_kerbosch(BTreeSet::new(), p, BTreeSet::new(), &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(
        &self,
        r: BTreeSet<usize>,
        mut p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        // pivot on the candidate with most neighbors in p
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| self.adj[u].intersection(&p).count())
            .unwrap();
        let todo: Vec<usize> = p.iter().copied().filter(|v| !self.adj[pivot].contains(v)).collect();
        for v in todo {
            let mut r2 = r.clone();
            r2.insert(v);
            let p2 = p.intersection(&self.adj[v]).copied().collect();
            let x2 = x.intersection(&self.adj[v]).copied().collect();
            self.bron_kerbosch(r2, p2, x2, out);
            p.remove(&v);
            x.insert(v);
        }
    }

    /// True iff every vertex outside `xs` is adjacent to all of `xs` or to
    /// none of it. The whole vertex set and the empty set are vacuously
    /// modules.
    pub fn is_module(&self, xs: &BTreeSet<usize>) -> bool {
        for v in 0..self.vertices.len() {
            if xs.contains(&v) {
                continue;
            }
            let mut it = xs.iter();
            if let Some(&first) = it.next() {
                let hit = self.has_edge(v, first);
                if it.any(|&w| self.has_edge(v, w) != hit) {
                    return false;
                }
            }
        }
        true
    }

    /// Id-based wrapper for [`Graph::is_module`].
    pub fn is_module_ids<S: AsRef<str>>(
        &self,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<bool, GraphError> {
        Ok(self.is_module(&self.resolve(ids)?))
    }

    /// Connected components, as a modular partition.
    pub fn components(&self) -> Partition {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut block = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                block.insert(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            blocks.push(block);
        }
        Partition::new(blocks, n).expect("components form a partition")
    }

    /// Components of the complement graph.
    pub fn co_components(&self) -> Partition {
        self.complement().components()
    }

    /// No edge is a module.
    pub fn is_t0(&self) -> bool {
        self.edges()
            .into_iter()
            .all(|(u, v)| !self.is_module(&BTreeSet::from([u, v])))
    }

    /// For every edge {u, v} and each ordering of its endpoints there is a
    /// third vertex adjacent to one endpoint but not the other.
    pub fn is_t1(&self) -> bool {
        self.edges().into_iter().all(|(u, v)| {
            self.distinguisher(u, v) && self.distinguisher(v, u)
        })
    }

    /// Some w outside {u, v} with w ~ u but w !~ v.
    fn distinguisher(&self, u: usize, v: usize) -> bool {
        self.adj[u]
            .iter()
            .any(|&w| w != v && !self.adj[v].contains(&w))
    }

    /// Set of cliques (by position in `cliques()`) containing each vertex.
    fn clique_signatures(&self) -> Vec<BTreeSet<usize>> {
        let cliques = self.cliques();
        let mut sig = vec![BTreeSet::new(); self.vertices.len()];
        for (ci, c) in cliques.iter().enumerate() {
            for &v in c {
                sig[v].insert(ci);
            }
        }
        sig
    }

    /// Groups vertices that belong to exactly the same cliques and quotients
    /// by that partition. The result always satisfies [`Graph::is_t0`].
    pub fn t0_quotient(&self) -> (Partition, Graph) {
        let sig = self.clique_signatures();
        let mut by_sig: HashMap<&BTreeSet<usize>, BTreeSet<usize>> = HashMap::new();
        for v in 0..self.vertices.len() {
            by_sig.entry(&sig[v]).or_default().insert(v);
        }
        let blocks: Vec<BTreeSet<usize>> = by_sig.into_values().collect();
        let p = Partition::new(blocks, self.vertices.len()).expect("classes form a partition");
        let q = self
            .quotient(&p)
            .expect("clique-equivalence classes are modules");
        (p, q)
    }

    /// Quotient by a modular partition. Fails with `NotModular` if some
    /// block is not a module. Each quotient vertex is named after the
    /// lexicographically least id in its block, and blocks keep the order
    /// of their earliest member.
    pub fn quotient(&self, p: &Partition) -> Result<Graph, GraphError> {
        p.check_covers(self.vertices.len())
            .map_err(GraphError::BadPartition)?;
        for block in p.blocks() {
            if !self.is_module(block) {
                return Err(GraphError::NotModular(
                    self.ids_of(block).join(", "),
                ));
            }
        }
        let names: Vec<String> = p
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&v| self.vertices[v].clone())
                    .min()
                    .expect("blocks are nonempty")
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..p.blocks().len() {
            for j in i + 1..p.blocks().len() {
                let u = *p.blocks()[i].iter().next().unwrap();
                let v = *p.blocks()[j].iter().next().unwrap();
                if self.has_edge(u, v) {
                    edges.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        Graph::new(names, edges)
    }

    /// Stable hash of the vertex list and edge set; used to detect values
    /// built against a different graph. Not part of any certificate.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.vertices.hash(&mut h);
        self.edges().hash(&mut h);
        h.finish()
    }
}

/// Partition of the vertex index set into nonempty disjoint blocks.
/// Blocks are kept sorted by their least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<BTreeSet<usize>>,
    size: usize,
}

impl Partition {
    pub fn new(mut blocks: Vec<BTreeSet<usize>>, size: usize) -> Result<Self, GraphError> {
        let mut seen = vec![false; size];
        for b in &blocks {
            if b.is_empty() {
                return Err(GraphError::BadPartition("empty block".into()));
            }
            for &v in b {
                if v >= size {
                    return Err(GraphError::BadPartition(format!(
                        "element {v} out of range"
                    )));
                }
                if seen[v] {
                    return Err(GraphError::BadPartition(format!(
                        "element {v} in two blocks"
                    )));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::BadPartition("blocks do not cover".into()));
        }
        blocks.sort_by_key(|b| *b.iter().next().unwrap());
        Ok(Partition { blocks, size })
    }

    /// The partition of `0..n` into singletons.
    pub fn identity(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|v| BTreeSet::from([v])).collect(),
            size: n,
        }
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&v))
            .expect("partition covers all vertices")
    }

    fn check_covers(&self, n: usize) -> Result<(), String> {
        if self.size != n {
            return Err(format!("partition of {} vertices applied to {n}", self.size));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap()
    }

    fn k(n: usize) -> Graph {
        let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
        Graph::new(ids, edges).unwrap()
    }

    fn discrete(n: usize) -> Graph {
        let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        Graph::new(ids, Vec::<(String, String)>::new()).unwrap()
    }

    /// Brute-force maximal complete subsets, for checking `cliques`.
    fn brute_cliques(g: &Graph) -> Vec<BTreeSet<usize>> {
        let n = g.vertex_count();
        let mut complete: Vec<BTreeSet<usize>> = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: BTreeSet<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if g.is_complete(&set) {
                complete.push(set);
            }
        }
        let mut out: Vec<BTreeSet<usize>> = complete
            .iter()
            .filter(|c| !complete.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
            .cloned()
            .collect();
        out.sort();
        out
    }

    use crate::selfcheck::all_graphs;

    #[test]
    fn build_and_errors() {
        let g = p3();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));

        assert_eq!(
            Graph::new(["a"], [("a", "a")]).unwrap_err(),
            GraphError::SelfLoop("a".into())
        );
        assert_eq!(
            Graph::new(["a", "b"], [("a", "d")]).unwrap_err(),
            GraphError::UnknownEndpoint("d".into())
        );
        assert_eq!(
            Graph::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err(),
            GraphError::DuplicateEdge("b".into(), "a".into())
        );
        assert_eq!(
            Graph::new(["a", "a"], Vec::<(&str, &str)>::new()).unwrap_err(),
            GraphError::DuplicateVertex("a".into())
        );
    }

    #[test]
    fn cliques_examples() {
        let g = p3();
        let cl: Vec<Vec<String>> = g.cliques().iter().map(|c| g.ids_of(c)).collect();
        assert_eq!(cl, vec![vec!["a", "b"], vec!["b", "c"]]);

        assert_eq!(discrete(3).cliques().len(), 3);
        assert_eq!(k(3).cliques(), vec![BTreeSet::from([0, 1, 2])]);
        assert!(discrete(0).cliques().is_empty());
    }

    #[test]
    fn cliques_match_brute_force_exhaustively() {
        for n in 0..=4 {
            for g in all_graphs(n) {
                assert_eq!(g.cliques(), brute_cliques(&g));
            }
        }
    }

    #[test]
    fn module_examples() {
        let g = p3();
        assert!(g.is_module_ids(["a", "c"]).unwrap());
        assert!(!g.is_module_ids(["a", "b"]).unwrap());
        assert!(g.is_module_ids(["a", "b", "c"]).unwrap());
        assert!(g.is_module_ids(["b"]).unwrap());
        assert_eq!(
            g.is_module_ids(["z"]).unwrap_err(),
            GraphError::UnknownVertex("z".into())
        );
    }

    #[test]
    fn quotient_examples() {
        let g = p3();
        let p = Partition::new(
            vec![BTreeSet::from([0, 2]), BTreeSet::from([1])],
            3,
        )
        .unwrap();
        let q = g.quotient(&p).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edge_count(), 1);
        assert_eq!(q.vertex_ids(), ["a", "b"]);

        let id = Partition::identity(3);
        let q = g.quotient(&id).unwrap();
        assert_eq!(q.vertex_ids(), g.vertex_ids());
        assert_eq!(q.edges(), g.edges());

        let bad = Partition::new(vec![BTreeSet::from([0, 1]), BTreeSet::from([2])], 3).unwrap();
        assert!(matches!(g.quotient(&bad), Err(GraphError::NotModular(_))));
    }

    #[test]
    fn t0_t1_examples() {
        assert!(p3().is_t0());
        assert!(!p3().is_t1());
        assert!(!k(2).is_t0());

        let c5 = Graph::new(
            ["a", "b", "c", "d", "e"],
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
        )
        .unwrap();
        assert!(c5.is_t1());
        assert!(c5.is_t0());

        // vacuously true on the empty and one-vertex graphs
        assert!(discrete(0).is_t0() && discrete(0).is_t1());
        assert!(discrete(1).is_t0() && discrete(1).is_t1());
    }

    #[test]
    fn t0_iff_clique_signatures_injective() {
        for n in 0..=5 {
            for g in all_graphs(n) {
                let sig = g.clique_signatures();
                let mut uniq: Vec<_> = sig.clone();
                uniq.sort();
                uniq.dedup();
                assert_eq!(g.is_t0(), uniq.len() == sig.len(), "graph {:?}", g.edges());
            }
        }
    }

    #[test]
    fn t1_iff_vertices_are_clique_intersections() {
        for n in 0..=5 {
            for g in all_graphs(n) {
                let cliques = g.cliques();
                let by_def = (0..n).all(|v| {
                    let mut inter: Option<BTreeSet<usize>> = None;
                    for c in cliques.iter().filter(|c| c.contains(&v)) {
                        inter = Some(match inter {
                            None => c.clone(),
                            Some(i) => i.intersection(c).copied().collect(),
                        });
                    }
                    inter.map_or(true, |i| i == BTreeSet::from([v]))
                });
                assert_eq!(g.is_t1(), by_def, "graph {:?}", g.edges());
                if g.is_t1() {
                    assert!(g.is_t0());
                }
            }
        }
    }

    #[test]
    fn t0_quotient_examples() {
        let (p, q) = k(2).t0_quotient();
        assert_eq!(p.blocks().len(), 1);
        assert_eq!(q.vertex_count(), 1);

        let (p, q) = p3().t0_quotient();
        assert_eq!(p.blocks().len(), 3);
        assert_eq!(q.edges(), p3().edges());

        let (p, q) = k(4).t0_quotient();
        assert_eq!(p.blocks().len(), 1);
        assert_eq!(q.vertex_count(), 1);
    }

    #[test]
    fn t0_quotient_properties() {
        for n in 0..=5 {
            for g in all_graphs(n) {
                let (p, q) = g.t0_quotient();
                assert!(q.is_t0(), "graph {:?}", g.edges());
                for b in p.blocks() {
                    assert!(g.is_module(b));
                    assert!(g.is_complete(b));
                }
            }
        }
    }

    #[test]
    fn components_examples() {
        assert_eq!(p3().components().blocks().len(), 1);
        assert_eq!(discrete(3).components().blocks().len(), 3);
        assert_eq!(k(3).co_components().blocks().len(), 3);
        for n in 0..=5 {
            for g in all_graphs(n) {
                for b in g.components().blocks() {
                    assert!(g.is_module(b));
                }
                for b in g.co_components().blocks() {
                    assert!(g.is_module(b));
                }
            }
        }
    }

    mod random_graphs {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (2..=max_n).prop_flat_map(|n| {
                let pairs = n * (n - 1) / 2;
                proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for i in 0..n {
                        for j in i + 1..n {
                            if bits[k] {
                                edges.push((ids[i].clone(), ids[j].clone()));
                            }
                            k += 1;
                        }
                    }
                    Graph::new(ids, edges).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn cliques_match_brute_force(g in arb_graph(8)) {
                prop_assert_eq!(g.cliques(), brute_cliques(&g));
            }

            #[test]
            fn t1_implies_t0(g in arb_graph(8)) {
                if g.is_t1() {
                    prop_assert!(g.is_t0());
                }
            }

            #[test]
            fn t0_quotient_is_t0_with_complete_module_blocks(g in arb_graph(8)) {
                let (p, q) = g.t0_quotient();
                prop_assert!(q.is_t0());
                for b in p.blocks() {
                    prop_assert!(g.is_module(b));
                    prop_assert!(g.is_complete(b));
                }
            }
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![BTreeSet::new()], 0).is_err());
        assert!(Partition::new(vec![BTreeSet::from([0])], 2).is_err());
        assert!(
            Partition::new(vec![BTreeSet::from([0]), BTreeSet::from([0, 1])], 2).is_err()
        );
        let p = Partition::new(vec![BTreeSet::from([1]), BTreeSet::from([0])], 2).unwrap();
        assert_eq!(p.block_of(0), 0);
    }
}
