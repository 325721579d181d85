//! The partially ordered set of conjugacy classes of standard subgroups
//! with complete carrier.
//!
//! A complete vertex subset C names the conjugacy class of the subgroup it
//! generates, and no two distinct complete subsets name the same class, so
//! classes are represented purely by their carriers. Order is carrier
//! inclusion, meet is intersection, and join is union when the union is
//! complete; otherwise there is no common upper bound at all.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::Graph;
use crate::word::GraphOfGroups;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("carrier {{{0}}} is not complete")]
    NotComplete(String),
    #[error("classes belong to different graphs")]
    GraphMismatch,
}

/// The conjugacy class of the standard subgroup over a complete carrier.
/// The empty carrier is the class of the trivial subgroup, the bottom of
/// the poset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SphericalClass {
    carrier: BTreeSet<usize>,
    graph_fp: u64,
}

impl SphericalClass {
    pub fn new(graph: &Graph, carrier: BTreeSet<usize>) -> Result<Self, LatticeError> {
        if !graph.is_complete(&carrier) {
            return Err(LatticeError::NotComplete(
                graph.ids_of(&carrier).join(", "),
            ));
        }
        Ok(SphericalClass {
            carrier,
            graph_fp: graph.fingerprint(),
        })
    }

    pub fn from_ids<S: AsRef<str>>(
        graph: &Graph,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<Self, LatticeError> {
        let carrier = graph
            .resolve(ids)
            .map_err(|e| LatticeError::NotComplete(e.to_string()))?;
        Self::new(graph, carrier)
    }

    pub fn carrier(&self) -> &BTreeSet<usize> {
        &self.carrier
    }

    fn same_graph(&self, other: &Self) -> Result<(), LatticeError> {
        if self.graph_fp != other.graph_fp {
            return Err(LatticeError::GraphMismatch);
        }
        Ok(())
    }

    /// The class order: true iff some conjugate of this subgroup lies in
    /// the other, which for complete carriers happens exactly when the
    /// carriers nest.
    pub fn leq(&self, other: &Self) -> Result<bool, LatticeError> {
        self.same_graph(other)?;
        Ok(self.carrier.is_subset(&other.carrier))
    }

    /// Greatest lower bound: the class of the carrier intersection.
    pub fn meet(&self, other: &Self) -> Result<SphericalClass, LatticeError> {
        self.same_graph(other)?;
        Ok(SphericalClass {
            carrier: self.carrier.intersection(&other.carrier).copied().collect(),
            graph_fp: self.graph_fp,
        })
    }

    /// Least upper bound: the class of the union when the union is
    /// complete; `None` when the two classes have no common upper bound.
    pub fn join(&self, other: &Self, graph: &Graph) -> Result<Option<SphericalClass>, LatticeError> {
        self.same_graph(other)?;
        if graph.fingerprint() != self.graph_fp {
            return Err(LatticeError::GraphMismatch);
        }
        let union: BTreeSet<usize> = self.carrier.union(&other.carrier).copied().collect();
        Ok(if graph.is_complete(&union) {
            Some(SphericalClass {
                carrier: union,
                graph_fp: self.graph_fp,
            })
        } else {
            None
        })
    }

    /// Product of the vertex-group orders over the carrier: the order of
    /// the (finite) subgroup the class names.
    pub fn subgroup_order(&self, gog: &GraphOfGroups) -> usize {
        self.carrier
            .iter()
            .map(|&v| gog.group(v).order())
            .product()
    }
}

/// Every complete vertex subset of the graph, as classes, sorted. Includes
/// the empty class.
pub fn spherical_classes(graph: &Graph) -> Vec<SphericalClass> {
    let mut carriers: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    carriers.insert(BTreeSet::new());
    for clique in graph.cliques() {
        let items: Vec<usize> = clique.iter().copied().collect();
        for mask in 1u64..(1 << items.len()) {
            carriers.insert(
                items
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect(),
            );
        }
    }
    let fp = graph.fingerprint();
    carriers
        .into_iter()
        .map(|carrier| SphericalClass {
            carrier,
            graph_fp: fp,
        })
        .collect()
}

/// One class per clique: the conjugacy classes of the maximal finite
/// subgroups of the graph product.
pub fn maximal_finite_classes(gog: &GraphOfGroups) -> Vec<SphericalClass> {
    let fp = gog.graph().fingerprint();
    gog.graph()
        .cliques()
        .into_iter()
        .map(|carrier| SphericalClass {
            carrier,
            graph_fp: fp,
        })
        .collect()
}
