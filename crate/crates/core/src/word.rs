//! Elements of a graph product as words of syllables with a canonical
//! normal form.
//!
//! A syllable is a pair (vertex, nonidentity element of that vertex's
//! group). Two syllables commute when their vertices are adjacent. The
//! canonical form of a word is the unique representative that is reduced
//! (no identity syllables, no two same-vertex syllables separated only by
//! syllables commuting with that vertex) and lexicographically least under
//! the graph's vertex order among all commutation-equivalent reduced
//! sequences.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::group::FiniteGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex index {0} out of range")]
    UnknownVertex(usize),
    #[error("element {element} out of range for the group at vertex `{vertex}`")]
    ElementOutOfRange { vertex: String, element: u16 },
    #[error("graph has {vertices} vertices but {groups} groups were supplied")]
    GroupCountMismatch { vertices: usize, groups: usize },
    #[error("vertex `{0}` carries a trivial group; vertex groups must have order >= 2")]
    TrivialVertexGroup(String),
    #[error("cannot parse word token `{0}`")]
    BadToken(String),
}

/// A finite simple graph together with a finite group of order at least 2
/// on each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOfGroups {
    graph: Graph,
    groups: Vec<FiniteGroup>,
}

/// One letter of a word: a group element sitting at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub vertex: usize,
    pub element: u16,
}

/// A sequence of syllables. Operations on a [`GraphOfGroups`] keep words in
/// normal form; raw words (with identity syllables or unmerged repeats) are
/// accepted as input everywhere.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Syllable>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<(usize, u16)>> for Word {
    fn from(v: Vec<(usize, u16)>) -> Self {
        Word(
            v.into_iter()
                .map(|(vertex, element)| Syllable { vertex, element })
                .collect(),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}^{}", s.vertex, s.element)?;
        }
        Ok(())
    }
}

impl GraphOfGroups {
    pub fn new(graph: Graph, groups: Vec<FiniteGroup>) -> Result<Self, WordError> {
        if graph.vertex_count() != groups.len() {
            return Err(WordError::GroupCountMismatch {
                vertices: graph.vertex_count(),
                groups: groups.len(),
            });
        }
        for (v, g) in groups.iter().enumerate() {
            if g.order() < 2 {
                return Err(WordError::TrivialVertexGroup(graph.id_of(v).to_string()));
            }
        }
        Ok(GraphOfGroups { graph, groups })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn group(&self, v: usize) -> &FiniteGroup {
        &self.groups[v]
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn vertex_count(&self) -> usize {
        self.groups.len()
    }

    /// Checks that every syllable references a listed vertex and an element
    /// inside that vertex's group.
    pub fn validate(&self, w: &Word) -> Result<(), WordError> {
        for s in &w.0 {
            if s.vertex >= self.groups.len() {
                return Err(WordError::UnknownVertex(s.vertex));
            }
            if s.element as usize >= self.groups[s.vertex].order() {
                return Err(WordError::ElementOutOfRange {
                    vertex: self.graph.id_of(s.vertex).to_string(),
                    element: s.element,
                });
            }
        }
        Ok(())
    }

    /// The canonical representative of the element `w` denotes.
    /// Idempotent, and length-minimal among equivalent words.
    pub fn normal_form(&self, w: &Word) -> Result<Word, WordError> {
        self.validate(w)?;
        let mut syl = w.0.clone();
        self.reduce(&mut syl);
        self.sort_commuting(&mut syl);
        Ok(Word(syl))
    }

    /// Deletes identity syllables and merges same-vertex syllables whose
    /// separators all commute with that vertex, until no move applies.
    fn reduce(&self, syl: &mut Vec<Syllable>) {
        loop {
            syl.retain(|s| s.element != 0);
            if !self.merge_once(syl) {
                break;
            }
        }
    }

    /// Merges the first mergeable same-vertex pair; true if a merge happened.
    fn merge_once(&self, syl: &mut Vec<Syllable>) -> bool {
        for i in 0..syl.len() {
            let v = syl[i].vertex;
            for j in i + 1..syl.len() {
                if syl[j].vertex == v {
                    let product = self.groups[v].mul(syl[i].element, syl[j].element);
                    syl[i].element = product;
                    syl.remove(j);
                    if product == 0 {
                        syl.remove(i);
                    }
                    return true;
                }
                if !self.graph.has_edge(syl[j].vertex, v) {
                    break; // blocked: nothing past here can reach syllable i
                }
            }
        }
        false
    }

    /// Rewrites a reduced word as the lexicographically least of its
    /// shuffles: the least topological order of the occurrence dependence
    /// relation (occurrence i must stay before occurrence j > i when their
    /// vertices are equal or non-adjacent). Greedily emitting the least
    /// currently-unblocked vertex yields exactly that order.
    fn sort_commuting(&self, syl: &mut Vec<Syllable>) {
        let n = syl.len();
        let blocks = |a: usize, b: usize| a == b || !self.graph.has_edge(a, b);
        let mut taken = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut pick: Option<usize> = None;
            'scan: for k in 0..n {
                if taken[k] {
                    continue;
                }
                for j in 0..k {
                    if !taken[j] && blocks(syl[j].vertex, syl[k].vertex) {
                        continue 'scan;
                    }
                }
                if pick.map_or(true, |p| syl[k].vertex < syl[p].vertex) {
                    pick = Some(k);
                }
            }
            let k = pick.expect("some occurrence is always unblocked");
            taken[k] = true;
            out.push(syl[k]);
        }
        *syl = out;
    }

    /// Normal form of the concatenation `u v`.
    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word, WordError> {
        let mut syl = u.0.clone();
        syl.extend_from_slice(&v.0);
        self.normal_form(&Word(syl))
    }

    /// Normal form of the inverse (reversed word with inverted elements).
    pub fn invert(&self, u: &Word) -> Result<Word, WordError> {
        self.validate(u)?;
        let syl: Vec<Syllable> = u
            .0
            .iter()
            .rev()
            .map(|s| Syllable {
                vertex: s.vertex,
                element: self.groups[s.vertex].inv(s.element),
            })
            .collect();
        self.normal_form(&Word(syl))
    }

    /// Normal form of `g x g^-1`.
    pub fn conjugate(&self, g: &Word, x: &Word) -> Result<Word, WordError> {
        let gx = self.multiply(g, x)?;
        self.multiply(&gx, &self.invert(g)?)
    }

    /// True iff `u` and `v` denote the same group element.
    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool, WordError> {
        Ok(self.normal_form(u)? == self.normal_form(v)?)
    }

    /// The retraction onto the standard subgroup over `a`: deletes every
    /// syllable outside `a`, then normalizes. A group homomorphism that
    /// fixes words supported in `a`.
    pub fn retraction(&self, a: &BTreeSet<usize>, w: &Word) -> Result<Word, WordError> {
        for &v in a {
            if v >= self.groups.len() {
                return Err(WordError::UnknownVertex(v));
            }
        }
        self.validate(w)?;
        let syl: Vec<Syllable> = w
            .0
            .iter()
            .copied()
            .filter(|s| a.contains(&s.vertex))
            .collect();
        self.normal_form(&Word(syl))
    }

    /// Vertices that appear in the normal form of `w`.
    pub fn support(&self, w: &Word) -> Result<BTreeSet<usize>, WordError> {
        Ok(self
            .normal_form(w)?
            .0
            .iter()
            .map(|s| s.vertex)
            .collect())
    }

    /// Membership in the standard subgroup over `a`: support(w) inside `a`.
    pub fn in_parabolic(&self, w: &Word, a: &BTreeSet<usize>) -> Result<bool, WordError> {
        for &v in a {
            if v >= self.groups.len() {
                return Err(WordError::UnknownVertex(v));
            }
        }
        Ok(self.support(w)?.is_subset(a))
    }

    /// Deterministic seeded word: uniform length in `0..=max_len`, then
    /// uniform nonidentity syllables, normalized. Same seed, same word.
    pub fn random_word(&self, seed: u64, max_len: usize) -> Word {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_word_with(&mut rng, max_len)
    }

    /// As [`GraphOfGroups::random_word`] but drawing from a caller-owned
    /// stream.
    pub fn random_word_with(&self, rng: &mut impl Rng, max_len: usize) -> Word {
        if self.groups.is_empty() {
            return Word::empty();
        }
        let len = rng.gen_range(0..=max_len);
        let syl: Vec<Syllable> = (0..len)
            .map(|_| {
                let vertex = rng.gen_range(0..self.groups.len());
                let element = rng.gen_range(1..self.groups[vertex].order()) as u16;
                Syllable { vertex, element }
            })
            .collect();
        self.normal_form(&Word(syl)).expect("generated syllables are valid")
    }

    /// Parses the `vertex^k` token syntax: whitespace-separated syllables,
    /// `^1` optional, empty string for the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut syl = Vec::new();
        for token in text.split_whitespace() {
            let (id, elem) = match token.rsplit_once('^') {
                Some((id, k)) if !id.is_empty() => match k.parse::<u16>() {
                    Ok(e) => (id, e),
                    Err(_) => return Err(WordError::BadToken(token.to_string())),
                },
                _ => (token, 1),
            };
            let vertex = self.graph.index_of(id)?;
            syl.push(Syllable {
                vertex,
                element: elem,
            });
        }
        let w = Word(syl);
        self.validate(&w)?;
        Ok(w)
    }

    /// Renders a word in the `vertex^k` syntax (`^1` omitted).
    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|s| {
                let id = self.graph.id_of(s.vertex);
                if s.element == 1 {
                    id.to_string()
                } else {
                    format!("{id}^{}", s.element)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    /// P3 = a - b - c with cyclic(2) everywhere.
    fn p3_z2() -> GraphOfGroups {
        let g = Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        GraphOfGroups::new(g, vec![z2.clone(), z2.clone(), z2]).unwrap()
    }

    fn w(pairs: &[(usize, u16)]) -> Word {
        Word::from(pairs.to_vec())
    }

    #[test]
    fn construction_errors() {
        let g = Graph::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        let z1 = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(
            GraphOfGroups::new(g.clone(), vec![z1]).unwrap_err(),
            WordError::TrivialVertexGroup("a".into())
        );
        assert!(matches!(
            GraphOfGroups::new(g, vec![]).unwrap_err(),
            WordError::GroupCountMismatch { .. }
        ));
    }

    #[test]
    fn normal_form_examples() {
        let gog = p3_z2();
        // a, b adjacent: a b a -> b
        let nf = gog.normal_form(&w(&[(0, 1), (1, 1), (0, 1)])).unwrap();
        assert_eq!(nf, w(&[(1, 1)]));
        assert_eq!(nf, oracle::canonical(&gog, &w(&[(0, 1), (1, 1), (0, 1)])));

        // a, c not adjacent: a c a irreducible
        let aca = w(&[(0, 1), (2, 1), (0, 1)]);
        assert_eq!(gog.normal_form(&aca).unwrap(), aca);
        assert_eq!(oracle::canonical(&gog, &aca), aca);

        assert_eq!(gog.normal_form(&Word::empty()).unwrap(), Word::empty());

        // commuting pair sorts into vertex order: b a -> a b
        let ba = w(&[(1, 1), (0, 1)]);
        let ab = w(&[(0, 1), (1, 1)]);
        assert_eq!(gog.normal_form(&ba).unwrap(), ab);
        assert_eq!(oracle::canonical(&gog, &ba), ab);

        // identity syllables vanish
        assert_eq!(gog.normal_form(&w(&[(0, 0), (1, 0)])).unwrap(), Word::empty());
    }

    #[test]
    fn normal_form_is_idempotent() {
        let gog = p3_z2();
        for seed in 0..50 {
            let r = gog.random_word(seed, 8);
            let nf = gog.normal_form(&r).unwrap();
            assert_eq!(gog.normal_form(&nf).unwrap(), nf);
            assert!(gog.words_equal(&r, &nf).unwrap());
        }
    }

    #[test]
    fn multiply_invert_conjugate() {
        let gog = p3_z2();
        // x * x = 1 in Z2
        assert_eq!(
            gog.multiply(&w(&[(0, 1)]), &w(&[(0, 1)])).unwrap(),
            Word::empty()
        );
        // [a, c] refuses to commute
        let ac = w(&[(0, 1), (2, 1)]);
        let ca = w(&[(2, 1), (0, 1)]);
        assert_eq!(gog.invert(&ac).unwrap(), ca);
        assert!(!gog.words_equal(&ac, &ca).unwrap());
        // b a b^-1 = a since a, b commute
        assert_eq!(
            gog.conjugate(&w(&[(1, 1)]), &w(&[(0, 1)])).unwrap(),
            w(&[(0, 1)])
        );
        // u * u^-1 = 1 on random words
        for seed in 0..40 {
            let u = gog.random_word(seed, 6);
            assert_eq!(gog.multiply(&u, &gog.invert(&u).unwrap()).unwrap(), Word::empty());
        }
    }

    #[test]
    fn words_equal_examples() {
        let gog = p3_z2();
        assert!(gog
            .words_equal(&w(&[(0, 1), (1, 1), (0, 1)]), &w(&[(1, 1)]))
            .unwrap());
        assert!(gog.words_equal(&w(&[(0, 1), (0, 1)]), &Word::empty()).unwrap());
        assert!(!gog
            .words_equal(&w(&[(0, 1), (2, 1)]), &w(&[(2, 1), (0, 1)]))
            .unwrap());
    }

    #[test]
    fn retraction_examples() {
        let gog = p3_z2();
        // drop the c syllable from a c b
        let got = gog
            .retraction(&BTreeSet::from([0, 1]), &w(&[(0, 1), (2, 1), (1, 1)]))
            .unwrap();
        assert_eq!(got, w(&[(0, 1), (1, 1)]));
        // retraction onto V is the normal form
        let full: BTreeSet<usize> = (0..3).collect();
        for seed in 0..20 {
            let u = gog.random_word(seed, 6);
            assert_eq!(gog.retraction(&full, &u).unwrap(), gog.normal_form(&u).unwrap());
            assert_eq!(gog.retraction(&BTreeSet::new(), &u).unwrap(), Word::empty());
        }
    }

    #[test]
    fn retraction_is_a_homomorphism() {
        let gog = p3_z2();
        let sets: Vec<BTreeSet<usize>> = vec![
            BTreeSet::new(),
            BTreeSet::from([0]),
            BTreeSet::from([0, 1]),
            BTreeSet::from([0, 2]),
            BTreeSet::from([0, 1, 2]),
        ];
        for seed in 0..30 {
            let u = gog.random_word(crate::derive_seed(seed, 0), 6);
            let v = gog.random_word(crate::derive_seed(seed, 1), 6);
            for a in &sets {
                let lhs = gog.retraction(a, &gog.multiply(&u, &v).unwrap()).unwrap();
                let rhs = gog
                    .multiply(&gog.retraction(a, &u).unwrap(), &gog.retraction(a, &v).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
                for b in &sets {
                    let ab: BTreeSet<usize> = a.intersection(b).copied().collect();
                    let composed = gog.retraction(a, &gog.retraction(b, &u).unwrap()).unwrap();
                    assert_eq!(composed, gog.retraction(&ab, &u).unwrap());
                }
            }
        }
    }

    #[test]
    fn support_and_parabolic() {
        let gog = p3_z2();
        assert_eq!(
            gog.support(&w(&[(0, 1), (1, 1), (0, 1)])).unwrap(),
            BTreeSet::from([1])
        );
        assert_eq!(gog.support(&Word::empty()).unwrap(), BTreeSet::new());
        assert_eq!(
            gog.support(&w(&[(0, 1), (2, 1), (0, 1)])).unwrap(),
            BTreeSet::from([0, 2])
        );
        assert!(gog
            .in_parabolic(&w(&[(1, 1)]), &BTreeSet::from([0, 1]))
            .unwrap());
        assert!(!gog
            .in_parabolic(&w(&[(0, 1), (2, 1), (0, 1)]), &BTreeSet::from([0, 1]))
            .unwrap());
        assert!(gog.in_parabolic(&Word::empty(), &BTreeSet::new()).unwrap());
    }

    #[test]
    fn random_word_behaviour() {
        let gog = p3_z2();
        assert_eq!(gog.random_word(7, 0), Word::empty());
        for seed in 0..20 {
            assert_eq!(gog.random_word(seed, 8), gog.random_word(seed, 8));
            assert!(gog.random_word(seed, 5).len() <= 5);
        }
    }

    #[test]
    fn validation_errors() {
        let gog = p3_z2();
        assert_eq!(
            gog.normal_form(&w(&[(9, 1)])).unwrap_err(),
            WordError::UnknownVertex(9)
        );
        assert_eq!(
            gog.normal_form(&w(&[(0, 2)])).unwrap_err(),
            WordError::ElementOutOfRange {
                vertex: "a".into(),
                element: 2
            }
        );
        assert!(matches!(
            gog.retraction(&BTreeSet::from([5]), &Word::empty()).unwrap_err(),
            WordError::UnknownVertex(5)
        ));
    }

    #[test]
    fn word_syntax_round_trip() {
        let gog = p3_z2();
        let parsed = gog.parse_word("a b^1 a").unwrap();
        assert_eq!(parsed, w(&[(0, 1), (1, 1), (0, 1)]));
        assert_eq!(gog.parse_word("").unwrap(), Word::empty());
        assert_eq!(gog.format_word(&w(&[(0, 1), (1, 1)])), "a b");
        assert!(matches!(
            gog.parse_word("a^x").unwrap_err(),
            WordError::BadToken(_)
        ));
        assert!(matches!(
            gog.parse_word("d").unwrap_err(),
            WordError::Graph(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            gog.parse_word("a^5").unwrap_err(),
            WordError::ElementOutOfRange { .. }
        ));
        // ^0 is a legal input syllable and normalizes away
        let zero = gog.parse_word("a^0 b").unwrap();
        assert_eq!(gog.normal_form(&zero).unwrap(), w(&[(1, 1)]));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Syllable soup over P3 with cyclic(3) on the ends, cyclic(2)
        /// in the middle; identity elements included.
        fn arb_word() -> impl Strategy<Value = Word> {
            proptest::collection::vec((0..3usize, 0..3u16), 0..7).prop_map(|pairs| {
                Word(
                    pairs
                        .into_iter()
                        .map(|(vertex, element)| Syllable {
                            vertex,
                            element: if vertex == 1 { element.min(1) } else { element },
                        })
                        .collect(),
                )
            })
        }

        fn mixed_gog() -> GraphOfGroups {
            let g = Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
            GraphOfGroups::new(
                g,
                vec![
                    FiniteGroup::cyclic(3).unwrap(),
                    FiniteGroup::cyclic(2).unwrap(),
                    FiniteGroup::cyclic(3).unwrap(),
                ],
            )
            .unwrap()
        }

        proptest! {
            #[test]
            fn normal_form_matches_oracle(w in arb_word()) {
                let gog = mixed_gog();
                prop_assert_eq!(gog.normal_form(&w).unwrap(), oracle::canonical(&gog, &w));
            }

            #[test]
            fn normal_form_idempotent_and_equal(w in arb_word()) {
                let gog = mixed_gog();
                let nf = gog.normal_form(&w).unwrap();
                prop_assert_eq!(gog.normal_form(&nf).unwrap(), nf.clone());
                prop_assert!(gog.words_equal(&w, &nf).unwrap());
            }

            #[test]
            fn multiplication_is_associative(u in arb_word(), v in arb_word(), w in arb_word()) {
                let gog = mixed_gog();
                let left = gog.multiply(&gog.multiply(&u, &v).unwrap(), &w).unwrap();
                let right = gog.multiply(&u, &gog.multiply(&v, &w).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn inverse_cancels(u in arb_word()) {
                let gog = mixed_gog();
                prop_assert_eq!(gog.multiply(&u, &gog.invert(&u).unwrap()).unwrap(), Word::empty());
                prop_assert_eq!(gog.multiply(&gog.invert(&u).unwrap(), &u).unwrap(), Word::empty());
            }
        }
    }

    #[test]
    fn complete_graph_is_a_direct_product() {
        // K3 with Z2, Z3, Z4: normal forms sort with one syllable per vertex
        let g = Graph::new(["x", "y", "z"], [("x", "y"), ("x", "z"), ("y", "z")]).unwrap();
        let gog = GraphOfGroups::new(
            g,
            vec![
                FiniteGroup::cyclic(2).unwrap(),
                FiniteGroup::cyclic(3).unwrap(),
                FiniteGroup::cyclic(4).unwrap(),
            ],
        )
        .unwrap();
        let mut seen = BTreeSet::new();
        for seed in 0..200 {
            let u = gog.random_word(seed, 10);
            let vertices: Vec<usize> = u.0.iter().map(|s| s.vertex).collect();
            let mut sorted = vertices.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(vertices, sorted, "complete product must sort and merge");
            seen.insert(u);
        }
        assert!(seen.len() <= 24);
    }
}
