//! Canonical forms for graph-of-groups presentations.
//!
//! Replacing a vertex by a complete module of its direct factors does not
//! change the graph product, and with every vertex group directly
//! indecomposable the presentation is unique up to isomorphism. So:
//! refine every vertex group into its Remak factors, color the refined
//! vertices by the canonical tables of their groups, canonically label the
//! colored graph, and serialize. Two presentations define isomorphic graph
//! products exactly when those byte strings agree.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Partition};
use crate::group::{FiniteGroup, GroupError};
use crate::word::{GraphOfGroups, WordError};
use crate::Caps;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigidityError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("refined graph has {vertices} vertices, above the labeling cap {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
    #[error("vertex set {{{0}}} is not a complete module")]
    NotACompleteModule(String),
}

/// Deterministic byte string naming the isomorphism class of a graph
/// product presentation. Layout: the header `GPRC1`; the refined vertex
/// count (big-endian u16); per canonical vertex its group order (u8)
/// followed by the canonical table (row-major bytes); then the adjacency
/// bits for pairs (0,1), (0,2), (1,2), (0,3), ... packed most significant
/// bit first, zero-filled to a byte boundary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02X}")).collect()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A witness that two graphs of groups are isomorphic: a vertex bijection
/// preserving adjacency, with a group isomorphism at every vertex.
#[derive(Debug, Clone)]
pub struct GogIsomorphism {
    /// Pairs (vertex of x, matching vertex of y), in x's vertex order.
    pub vertex_map: Vec<(String, String)>,
    /// For each pair, the element bijection between the vertex groups.
    pub group_maps: Vec<Vec<u16>>,
}

/// Splits every vertex into its Remak factors. A vertex with k factors
/// becomes k mutually adjacent vertices named `v.1 .. v.k` (ordered by
/// factor canonical key), each inheriting all of v's outside adjacencies.
/// The returned partition groups the refined vertices by original vertex;
/// its blocks are complete modules of the refined graph.
pub fn remak_refine(
    gog: &GraphOfGroups,
    caps: &Caps,
) -> Result<(GraphOfGroups, Partition), RigidityError> {
    let graph = gog.graph();
    let mut ids = Vec::new();
    let mut groups = Vec::new();
    let mut blocks: Vec<BTreeSet<usize>> = Vec::new();
    let mut owner: Vec<usize> = Vec::new(); // refined index -> original index
    for v in 0..gog.vertex_count() {
        let factors = gog.group(v).remak_decomposition(caps)?;
        let mut block = BTreeSet::new();
        for (k, f) in factors.iter().enumerate() {
            block.insert(ids.len());
            owner.push(v);
            ids.push(format!("{}.{}", graph.id_of(v), k + 1));
            groups.push(f.to_group());
        }
        blocks.push(block);
    }
    let mut edges = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let adjacent = if owner[i] == owner[j] {
                true
            } else {
                graph.has_edge(owner[i], owner[j])
            };
            if adjacent {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let refined_graph = Graph::new(ids, edges)?;
    let partition = Partition::new(blocks, refined_graph.vertex_count())?;
    let refined = GraphOfGroups::new(refined_graph, groups)?;
    Ok((refined, partition))
}

/// Computes the certificate: Remak-refine, color vertices by canonical
/// group tables, canonically label the colored graph, serialize.
pub fn canonicalize(gog: &GraphOfGroups, caps: &Caps) -> Result<Certificate, RigidityError> {
    let (refined, _) = remak_refine(gog, caps)?;
    let n = refined.vertex_count();
    if n > caps.canonical_vertices {
        return Err(RigidityError::TooManyVertices {
            vertices: n,
            cap: caps.canonical_vertices,
        });
    }
    let colors: Vec<Vec<u8>> = refined
        .groups()
        .iter()
        .map(|g| g.canonical_table(caps))
        .collect::<Result<_, _>>()?;
    let order = canonical_order(refined.graph(), &colors);

    let mut bytes = Vec::new();
    bytes.extend_from_slice(b"GPRC1");
    bytes.extend_from_slice(&(n as u16).to_be_bytes());
    for &v in &order {
        bytes.extend_from_slice(&colors[v]);
    }
    let mut bit_acc: u8 = 0;
    let mut bit_count = 0;
    for k in 1..n {
        for i in 0..k {
            bit_acc <<= 1;
            if refined.graph().has_edge(order[i], order[k]) {
                bit_acc |= 1;
            }
            bit_count += 1;
            if bit_count == 8 {
                bytes.push(bit_acc);
                bit_acc = 0;
                bit_count = 0;
            }
        }
    }
    if bit_count > 0 {
        bytes.push(bit_acc << (8 - bit_count));
    }
    Ok(Certificate(bytes))
}

/// Finds the vertex order that sorts colors and, within that constraint,
/// minimizes the adjacency bitstring read in the pair order (0,1), (0,2),
/// (1,2), (0,3), ... over all color-preserving arrangements.
fn canonical_order(graph: &Graph, colors: &[Vec<u8>]) -> Vec<usize> {
    let n = graph.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    // target color sequence: sorted colors
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by(|&a, &b| colors[a].cmp(&colors[b]));
    let target: Vec<&Vec<u8>> = sorted.iter().map(|&v| &colors[v]).collect();

    // seed with the sorted order itself, then search for the minimum
    let bits = |order: &[usize]| -> Vec<bool> {
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for k in 1..n {
            for i in 0..k {
                out.push(graph.has_edge(order[i], order[k]));
            }
        }
        out
    };
    let mut best_order = sorted.clone();
    let mut best_bits = bits(&sorted);
    let mut prefix: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search_order(
        graph,
        colors,
        &target,
        &mut prefix,
        &mut used,
        0,
        false,
        &mut best_bits,
        &mut best_order,
    );
    best_order
}

#[allow(clippy::too_many_arguments)]
fn search_order(
    graph: &Graph,
    colors: &[Vec<u8>],
    target: &[&Vec<u8>],
    prefix: &mut Vec<usize>,
    used: &mut Vec<bool>,
    bit_pos: usize,
    mut less: bool,
    best_bits: &mut Vec<bool>,
    best_order: &mut Vec<usize>,
) -> bool {
    let n = target.len();
    let k = prefix.len();
    if k == n {
        if less {
            *best_bits = {
                let mut out = Vec::with_capacity(bit_pos);
                for kk in 1..n {
                    for i in 0..kk {
                        out.push(graph.has_edge(prefix[i], prefix[kk]));
                    }
                }
                out
            };
            *best_order = prefix.clone();
        }
        return less;
    }
    let mut improved = false;
    let mut tried: Vec<usize> = Vec::new();
    for v in 0..n {
        if used[v] || colors[v] != *target[k] {
            continue;
        }
        // twin pruning: skip v if swapping it with an already tried
        // candidate is an automorphism of the colored graph
        let twin = tried.iter().any(|&u| {
            graph
                .neighbors(u)
                .iter()
                .filter(|&&w| w != v)
                .eq(graph.neighbors(v).iter().filter(|&&w| w != u))
        });
        if twin {
            continue;
        }
        tried.push(v);
        // compare the k new bits (prefix[i] ~ v) against the best
        let mut state_less = less;
        let mut prune = false;
        for (i, &p) in prefix.iter().enumerate() {
            let bit = graph.has_edge(p, v);
            if !state_less {
                let b = best_bits[bit_pos + i];
                if bit && !b {
                    prune = true;
                    break;
                }
                if !bit && b {
                    state_less = true;
                }
            }
        }
        if prune {
            continue;
        }
        prefix.push(v);
        used[v] = true;
        if search_order(
            graph, colors, target, prefix, used, bit_pos + k, state_less, best_bits, best_order,
        ) {
            improved = true;
            less = false;
        }
        prefix.pop();
        used[v] = false;
    }
    improved
}

/// Searches for an isomorphism of graphs of groups: a vertex bijection
/// preserving adjacency with isomorphic groups at matched vertices.
/// Deterministic: vertices of `x` are matched in order against the least
/// available vertex of `y`.
pub fn gog_isomorphic(x: &GraphOfGroups, y: &GraphOfGroups) -> Option<GogIsomorphism> {
    let n = x.vertex_count();
    if n != y.vertex_count() || x.graph().edge_count() != y.graph().edge_count() {
        return None;
    }
    // candidate sets via pairwise group isomorphism
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let c: Vec<usize> = (0..n)
            .filter(|&u| x.group(v).isomorphism_to(y.group(u)).is_some())
            .collect();
        if c.is_empty() {
            return None;
        }
        candidates.push(c);
    }
    let mut assignment: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if !assign_vertices(x.graph(), y.graph(), &candidates, &mut assignment, &mut used) {
        return None;
    }
    let vertex_map: Vec<(String, String)> = assignment
        .iter()
        .enumerate()
        .map(|(v, &u)| {
            (
                x.graph().id_of(v).to_string(),
                y.graph().id_of(u).to_string(),
            )
        })
        .collect();
    let group_maps: Vec<Vec<u16>> = assignment
        .iter()
        .enumerate()
        .map(|(v, &u)| {
            x.group(v)
                .isomorphism_to(y.group(u))
                .expect("candidate filter guarantees a group isomorphism")
        })
        .collect();
    Some(GogIsomorphism {
        vertex_map,
        group_maps,
    })
}

fn assign_vertices(
    gx: &Graph,
    gy: &Graph,
    candidates: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let v = assignment.len();
    if v == candidates.len() {
        return true;
    }
    for &u in &candidates[v] {
        if used[u] {
            continue;
        }
        let consistent = (0..v).all(|w| gx.has_edge(w, v) == gy.has_edge(assignment[w], u));
        if !consistent {
            continue;
        }
        assignment.push(u);
        used[u] = true;
        if assign_vertices(gx, gy, candidates, assignment, used) {
            return true;
        }
        assignment.pop();
        used[u] = false;
    }
    false
}

/// Certificates decide isomorphism of the presented graph products.
pub fn decide_graph_product_isomorphism(
    x: &GraphOfGroups,
    y: &GraphOfGroups,
    caps: &Caps,
) -> Result<bool, RigidityError> {
    Ok(canonicalize(x, caps)? == canonicalize(y, caps)?)
}

/// Merges a complete module into a single vertex carrying the direct
/// product of its groups (in vertex order). The merged vertex is named by
/// the lexicographically least member id and sits at the position of the
/// earliest member. Presentation-preserving: the result defines an
/// isomorphic graph product.
pub fn merge_module(
    gog: &GraphOfGroups,
    module: &BTreeSet<usize>,
) -> Result<GraphOfGroups, RigidityError> {
    let graph = gog.graph();
    if module.is_empty() || !graph.is_module(module) || !graph.is_complete(module) {
        return Err(RigidityError::NotACompleteModule(
            graph.ids_of(module).join(", "),
        ));
    }
    let mut product: Option<FiniteGroup> = None;
    for &v in module {
        product = Some(match product {
            None => gog.group(v).clone(),
            Some(p) => p.direct_product(gog.group(v))?,
        });
    }
    let merged_group = product.expect("module is nonempty");
    let merged_id = module
        .iter()
        .map(|&v| graph.id_of(v).to_string())
        .min()
        .unwrap();
    let anchor = *module.iter().next().unwrap();

    let mut ids = Vec::new();
    let mut groups = Vec::new();
    for v in 0..gog.vertex_count() {
        if v == anchor {
            ids.push(merged_id.clone());
            groups.push(merged_group.clone());
        } else if !module.contains(&v) {
            ids.push(graph.id_of(v).to_string());
            groups.push(gog.group(v).clone());
        }
    }
    let mut edges = Vec::new();
    let keep: Vec<usize> = (0..gog.vertex_count())
        .filter(|v| *v == anchor || !module.contains(v))
        .collect();
    for (i, &vi) in keep.iter().enumerate() {
        for (j, &vj) in keep.iter().enumerate().skip(i + 1) {
            // the module sees the rest uniformly, so any member's adjacency works
            if graph.has_edge(vi, vj) {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let graph = Graph::new(ids, edges)?;
    Ok(GraphOfGroups::new(graph, groups)?)
}

/// All complete modules with at least two vertices, in deterministic order.
fn nontrivial_complete_modules(graph: &Graph) -> Vec<BTreeSet<usize>> {
    let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for clique in graph.cliques() {
        let items: Vec<usize> = clique.iter().copied().collect();
        for mask in 1u64..(1 << items.len()) {
            if (mask as u64).count_ones() < 2 {
                continue;
            }
            let set: BTreeSet<usize> = items
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if graph.is_module(&set) {
                out.insert(set);
            }
        }
    }
    out.into_iter().collect()
}

/// Produces an alternative presentation of the same graph product: a
/// seed-determined sequence of complete-module merges (skipped when the
/// merged order would exceed `caps.search_order`), followed by a
/// permutation of vertex ids and positions and a random relabeling of
/// every vertex group's elements.
pub fn obfuscate(
    gog: &GraphOfGroups,
    seed: u64,
    caps: &Caps,
) -> Result<GraphOfGroups, RigidityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = gog.clone();

    let merges = rng.gen_range(0..=2usize);
    for _ in 0..merges {
        let mods: Vec<BTreeSet<usize>> = nontrivial_complete_modules(current.graph())
            .into_iter()
            .filter(|m| {
                m.iter()
                    .map(|&v| current.group(v).order())
                    .product::<usize>()
                    <= caps.search_order
            })
            .collect();
        if mods.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..mods.len());
        current = merge_module(&current, &mods[pick])?;
    }

    // permute vertex ids among vertices, and shuffle the vertex order
    let n = current.vertex_count();
    let mut id_perm: Vec<usize> = (0..n).collect();
    id_perm.shuffle(&mut rng);
    let mut position: Vec<usize> = (0..n).collect();
    position.shuffle(&mut rng);

    let old = current.graph();
    let ids: Vec<String> = position
        .iter()
        .map(|&v| old.id_of(id_perm[v]).to_string())
        .collect();
    let edges: Vec<(String, String)> = old
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let pu = position.iter().position(|&p| p == u).unwrap();
            let pv = position.iter().position(|&p| p == v).unwrap();
            (ids[pu].clone(), ids[pv].clone())
        })
        .collect();
    let graph = Graph::new(ids, edges)?;
    let mut groups = Vec::with_capacity(n);
    for &v in &position {
        let g = current.group(v);
        let mut perm: Vec<u16> = (0..g.order() as u16).collect();
        perm[1..].shuffle(&mut rng);
        groups.push(g.relabel(&perm)?);
    }
    Ok(GraphOfGroups::new(graph, groups)?)
}
