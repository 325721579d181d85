//! Breadth-first reference oracle for the word problem.
//!
//! The oracle explores the rewrite relation on raw syllable sequences:
//! delete an identity syllable, merge two adjacent same-vertex syllables,
//! or swap two adjacent syllables whose vertices are adjacent in the graph.
//! Swaps are reversible and merges only shorten, so the set of words
//! reachable from `w` is finite and contains every reduced representative
//! of the element `w` denotes. It deliberately shares no code with the
//! normal-form routine it is used to check.

use std::collections::{HashSet, VecDeque};

use crate::word::{GraphOfGroups, Syllable, Word};

/// All words reachable from `w` by single rewrite moves (including `w`).
pub fn closure(gog: &GraphOfGroups, w: &Word) -> HashSet<Vec<Syllable>> {
    let mut seen: HashSet<Vec<Syllable>> = HashSet::new();
    let mut queue: VecDeque<Vec<Syllable>> = VecDeque::new();
    seen.insert(w.0.clone());
    queue.push_back(w.0.clone());
    while let Some(cur) = queue.pop_front() {
        for next in moves(gog, &cur) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

fn moves(gog: &GraphOfGroups, cur: &[Syllable]) -> Vec<Vec<Syllable>> {
    let mut out = Vec::new();
    for k in 0..cur.len() {
        if cur[k].element == 0 {
            let mut next = cur.to_vec();
            next.remove(k);
            out.push(next);
        }
    }
    for k in 0..cur.len().saturating_sub(1) {
        let (a, b) = (cur[k], cur[k + 1]);
        if a.vertex == b.vertex {
            let mut next = cur.to_vec();
            next[k].element = gog.group(a.vertex).mul(a.element, b.element);
            next.remove(k + 1);
            out.push(next);
        } else if gog.graph().has_edge(a.vertex, b.vertex) {
            let mut next = cur.to_vec();
            next.swap(k, k + 1);
            out.push(next);
        }
    }
    out
}

/// The least member of the closure by (length, syllable sequence): the
/// expected canonical normal form.
pub fn canonical(gog: &GraphOfGroups, w: &Word) -> Word {
    let best = closure(gog, w)
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .expect("closure contains the word itself");
    Word(best)
}

/// True iff `u` and `v` denote the same element: their closures meet.
pub fn equal(gog: &GraphOfGroups, u: &Word, v: &Word) -> bool {
    let cu = closure(gog, u);
    if cu.contains(&v.0) {
        return true;
    }
    // explore from v, stopping as soon as we touch u's closure
    let mut seen: HashSet<Vec<Syllable>> = HashSet::new();
    let mut queue: VecDeque<Vec<Syllable>> = VecDeque::new();
    seen.insert(v.0.clone());
    queue.push_back(v.0.clone());
    while let Some(cur) = queue.pop_front() {
        for next in moves(gog, &cur) {
            if cu.contains(&next) {
                return true;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    false
}
