//! Finite groups given by multiplication tables, with element 0 pinned as
//! the identity. Provides the presets used as a test corpus, isomorphism
//! search by generator images, normal-subgroup enumeration, internal direct
//! (Remak) factorization into directly indecomposable factors, and a
//! canonical table that is a cross-run key for the isomorphism class.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::Caps;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("empty multiplication table")]
    Empty,
    #[error("table row {0} is not the same length as the table")]
    NotSquare(usize),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("{} {index} of the table is not a permutation", if *.row { "row" } else { "column" })]
    NotClosed { index: usize, row: bool },
    #[error("associativity fails at ({a}, {b}, {c})")]
    NotAssociative { a: u16, b: u16, c: u16 },
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("relabeling is not a permutation fixing the identity")]
    BadRelabeling,
}

/// Order cap for the preset constructors.
pub const PRESET_ORDER_CAP: usize = 64;

/// A finite group as a validated multiplication table.
///
/// `table[i][j]` is the index of the product `i * j`; element 0 is the
/// identity. The optional name is display metadata only and is ignored by
/// equality.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: Option<String>,
    n: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a multiplication table: square, identity at 0, every row
    /// and column a permutation, associative.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > u16::MAX as usize {
            return Err(GroupError::OrderCapExceeded {
                order: n,
                cap: u16::MAX as usize,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare(i));
            }
            for (_, &x) in row.iter().enumerate() {
                if x >= n {
                    return Err(GroupError::NotClosed { index: i, row: true });
                }
                table.push(x as u16);
            }
        }
        for i in 0..n {
            if table[i] != i as u16 || table[i * n] != i as u16 {
                return Err(GroupError::NoIdentity);
            }
        }
        for i in 0..n {
            let mut seen = vec![false; n];
            for j in 0..n {
                let x = table[i * n + j] as usize;
                if seen[x] {
                    return Err(GroupError::NotClosed { index: i, row: true });
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                let x = table[i * n + j] as usize;
                if seen[x] {
                    return Err(GroupError::NotClosed { index: j, row: false });
                }
                seen[x] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(GroupError::NotAssociative {
                            a: a as u16,
                            b: b as u16,
                            c: c as u16,
                        });
                    }
                }
            }
        }
        let mut inverse = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverse[a] = b as u16;
                    break;
                }
            }
        }
        Ok(FiniteGroup {
            name: None,
            n,
            table,
            inverse,
        })
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::from_table(&rows)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inverse[a as usize]
    }

    pub fn conjugate(&self, g: u16, x: u16) -> u16 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u16) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n as u16).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders; a cheap isomorphism invariant.
    fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.n as u16).map(|a| self.element_order(a)).collect();
        p.sort_unstable();
        p
    }

    fn check_preset_cap(order: usize) -> Result<(), GroupError> {
        if order > PRESET_ORDER_CAP {
            return Err(GroupError::OrderCapExceeded {
                order,
                cap: PRESET_ORDER_CAP,
            });
        }
        Ok(())
    }

    /// Cyclic group of order n.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("cyclic(0)".into()));
        }
        Self::check_preset_cap(n)?;
        Ok(Self::from_fn(n, |i, j| (i + j) % n)?.with_name(format!("C{n}")))
    }

    /// Dihedral group of order 2n (symmetries of the n-gon; n = 1, 2 give
    /// C2 and the Klein four group).
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("dihedral(0)".into()));
        }
        Self::check_preset_cap(2 * n)?;
        // element k = (flip, shift): x -> shift +- x; index = flip * n + shift
        let g = Self::from_fn(2 * n, |a, b| {
            let (fa, sa) = (a / n, a % n);
            let (fb, sb) = (b / n, b % n);
            let flip = (fa + fb) % 2;
            let shift = if fa == 0 { (sa + sb) % n } else { (sa + n - sb % n) % n };
            flip * n + shift
        })?;
        Ok(g.with_name(format!("D{n}")))
    }

    /// Symmetric group on n letters, order n!. Permutations are indexed in
    /// lexicographic order, so the identity gets index 0.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        let mut order: usize = 1;
        for k in 2..=n {
            order = order.saturating_mul(k);
        }
        Self::check_preset_cap(order)?;
        let perms = lex_permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let g = Self::from_fn(order, |a, b| {
            // (p * q)(x) = p(q(x))
            let comp: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
            index(&comp)
        })?;
        Ok(g.with_name(format!("S{n}")))
    }

    /// The quaternion group of order 8: {1, -1, i, -i, j, -j, k, -k}.
    pub fn quaternion8() -> Self {
        // element 2m + s is (-1)^s * basis[m] with basis = [1, i, j, k]
        let mul_basis = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) => (x, 0),
                (x, 0) => (x, 0),
                (x, y) if x == y => (0, 1), // i*i = j*j = k*k = -1
                (1, 2) => (3, 0),           // ij = k
                (2, 3) => (1, 0),           // jk = i
                (3, 1) => (2, 0),           // ki = j
                (2, 1) => (3, 1),           // ji = -k
                (3, 2) => (1, 1),           // kj = -i
                (1, 3) => (2, 1),           // ik = -j
                _ => unreachable!(),
            }
        };
        Self::from_fn(8, |a, b| {
            let (ba, sa) = (a / 2, a % 2);
            let (bb, sb) = (b / 2, b % 2);
            let (basis, s) = mul_basis(ba, bb);
            basis * 2 + (sa + sb + s) % 2
        })
        .expect("quaternion table is a group")
        .with_name("Q8")
    }

    /// Direct product with componentwise multiplication. The pair (i, j)
    /// becomes index `i * |other| + j`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self, GroupError> {
        let order = self
            .n
            .checked_mul(other.n)
            .filter(|&m| m <= u16::MAX as usize)
            .ok_or(GroupError::OrderCapExceeded {
                order: usize::MAX,
                cap: u16::MAX as usize,
            })?;
        let m = other.n;
        let g = Self::from_fn(order, |a, b| {
            let (a1, a2) = (a / m, a % m);
            let (b1, b2) = (b / m, b % m);
            self.mul(a1 as u16, b1 as u16) as usize * m
                + other.mul(a2 as u16, b2 as u16) as usize
        })?;
        let name = match (self.name(), other.name()) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        Ok(match name {
            Some(n) => g.with_name(n),
            None => g,
        })
    }

    /// Rebuilds the table under a relabeling of elements. `perm[old]` is the
    /// new index; the identity must stay at 0.
    pub fn relabel(&self, perm: &[u16]) -> Result<Self, GroupError> {
        if perm.len() != self.n || perm.first() != Some(&0) {
            return Err(GroupError::BadRelabeling);
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if (p as usize) >= self.n || seen[p as usize] {
                return Err(GroupError::BadRelabeling);
            }
            seen[p as usize] = true;
        }
        let mut table = vec![0u16; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                table[perm[i] as usize * self.n + perm[j] as usize] =
                    perm[self.table[i * self.n + j] as usize];
            }
        }
        let rows: Vec<Vec<usize>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| table[i * self.n + j] as usize).collect())
            .collect();
        Self::from_table(&rows)
    }

    /// Greedy generating sequence: scan elements in index order and keep
    /// those not generated by the ones already kept.
    fn generating_sequence(&self) -> Vec<u16> {
        let mut gens = Vec::new();
        let mut closed = vec![false; self.n];
        closed[0] = true;
        let mut members: Vec<u16> = vec![0];
        for x in 1..self.n as u16 {
            if closed[x as usize] {
                continue;
            }
            gens.push(x);
            // close members under multiplication with everything kept so far
            let mut queue: VecDeque<u16> = VecDeque::from([x]);
            closed[x as usize] = true;
            members.push(x);
            while let Some(y) = queue.pop_front() {
                let snapshot: Vec<u16> = members.clone();
                for z in snapshot {
                    for p in [self.mul(y, z), self.mul(z, y)] {
                        if !closed[p as usize] {
                            closed[p as usize] = true;
                            members.push(p);
                            queue.push_back(p);
                        }
                    }
                }
            }
        }
        gens
    }

    /// Searches for an isomorphism onto `other` by backtracking over
    /// generator images. Returns the element bijection (`map[x]` is the
    /// image of `x`) of the first isomorphism in the canonical search
    /// order, or `None`.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<u16>> {
        if self.n != other.n {
            return None;
        }
        if self.order_profile() != other.order_profile() {
            return None;
        }
        let gens = self.generating_sequence();
        let mut img: Vec<Option<u16>> = vec![None; self.n];
        let mut used = vec![false; self.n];
        img[0] = Some(0);
        used[0] = true;
        // known: elements of the subgroup generated by assigned generators,
        // in discovery order
        let mut known: Vec<u16> = vec![0];
        self.extend_isomorphism(other, &gens, 0, &mut img, &mut used, &mut known)
            .map(|()| img.into_iter().map(Option::unwrap).collect())
    }

    fn extend_isomorphism(
        &self,
        other: &FiniteGroup,
        gens: &[u16],
        next: usize,
        img: &mut Vec<Option<u16>>,
        used: &mut Vec<bool>,
        known: &mut Vec<u16>,
    ) -> Option<()> {
        if next == gens.len() {
            return (known.len() == self.n).then_some(());
        }
        let g = gens[next];
        let g_order = self.element_order(g);
        for h in 1..self.n as u16 {
            if used[h as usize] || other.element_order(h) != g_order {
                continue;
            }
            let save_known = known.len();
            let mut added: Vec<u16> = Vec::new();
            img[g as usize] = Some(h);
            used[h as usize] = true;
            known.push(g);
            added.push(g);
            // close the partial map under products; fail on any clash
            let mut ok = true;
            let mut frontier = save_known;
            'close: while frontier < known.len() {
                let x = known[frontier];
                frontier += 1;
                let fx = img[x as usize].unwrap();
                let mut i = 0;
                while i < known.len() {
                    let y = known[i];
                    i += 1;
                    let fy = img[y as usize].unwrap();
                    for (p, fp) in [
                        (self.mul(x, y), other.mul(fx, fy)),
                        (self.mul(y, x), other.mul(fy, fx)),
                    ] {
                        match img[p as usize] {
                            Some(q) if q == fp => {}
                            Some(_) => {
                                ok = false;
                                break 'close;
                            }
                            None => {
                                if used[fp as usize] {
                                    ok = false;
                                    break 'close;
                                }
                                img[p as usize] = Some(fp);
                                used[fp as usize] = true;
                                known.push(p);
                                added.push(p);
                            }
                        }
                    }
                }
            }
            if ok
                && self
                    .extend_isomorphism(other, gens, next + 1, img, used, known)
                    .is_some()
            {
                return Some(());
            }
            for x in added {
                let fx = img[x as usize].take().unwrap();
                used[fx as usize] = false;
            }
            known.truncate(save_known);
        }
        None
    }

    fn require_cap(&self, cap: usize) -> Result<(), GroupError> {
        if self.n > cap {
            return Err(GroupError::OrderCapExceeded {
                order: self.n,
                cap,
            });
        }
        Ok(())
    }

    /// Every subgroup, found by closing the lattice generated by the cyclic
    /// subgroups. Sorted by (order, element list).
    pub fn subgroups(&self, caps: &Caps) -> Result<Vec<Subgroup<'_>>, GroupError> {
        self.require_cap(caps.search_order.min(128))?;
        let cyclics: BTreeSet<u128> = (1..self.n as u16)
            .map(|x| self.cyclic_mask(x))
            .collect();
        let mut subs: BTreeSet<u128> = BTreeSet::from([1u128]);
        subs.extend(cyclics.iter().copied());
        let mut queue: Vec<u128> = subs.iter().copied().collect();
        let mut tried: HashSet<u128> = HashSet::new();
        while let Some(s) = queue.pop() {
            for &c in &cyclics {
                if c & !s == 0 {
                    continue;
                }
                let union = s | c;
                if !tried.insert(union) {
                    continue;
                }
                let closed = self.close_mask(union);
                if subs.insert(closed) {
                    queue.push(closed);
                }
            }
        }
        let mut out: Vec<Subgroup<'_>> = subs
            .into_iter()
            .map(|mask| Subgroup::from_mask(self, mask))
            .collect();
        out.sort_by(|a, b| {
            a.elements
                .len()
                .cmp(&b.elements.len())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        Ok(out)
    }

    /// Subgroups invariant under conjugation, sorted by (order, element
    /// list).
    pub fn normal_subgroups(&self, caps: &Caps) -> Result<Vec<Subgroup<'_>>, GroupError> {
        Ok(self
            .subgroups(caps)?
            .into_iter()
            .filter(Subgroup::is_normal)
            .collect())
    }

    fn cyclic_mask(&self, x: u16) -> u128 {
        let mut mask = 1u128;
        let mut y = x;
        while y != 0 {
            mask |= 1 << y;
            y = self.mul(y, x);
        }
        mask
    }

    /// Closure of an element mask under multiplication.
    fn close_mask(&self, mask: u128) -> u128 {
        let mut members: Vec<u16> =
            (0..self.n as u16).filter(|&x| mask >> x & 1 == 1).collect();
        let mut closed = mask;
        let mut frontier = 0;
        while frontier < members.len() {
            let x = members[frontier];
            frontier += 1;
            for i in 0..members.len() {
                let y = members[i];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if closed >> p & 1 == 0 {
                        closed |= 1 << p;
                        members.push(p);
                    }
                }
            }
        }
        closed
    }

    /// Internal direct factors, each directly indecomposable, product equal
    /// to the whole group. Returns a single factor iff the group is
    /// directly indecomposable. Factors are sorted by canonical key, then
    /// element list.
    pub fn remak_decomposition(&self, caps: &Caps) -> Result<Vec<Subgroup<'_>>, GroupError> {
        self.require_cap(caps.search_order.min(128))?;
        let full = if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        };
        let masks = self.split_indecomposable(full, caps)?;
        if masks.len() == 1 {
            return Ok(vec![Subgroup::from_mask(self, masks[0])]);
        }
        let mut factors: Vec<(Vec<u8>, Subgroup<'_>)> = masks
            .into_iter()
            .map(|m| {
                let sub = Subgroup::from_mask(self, m);
                let key = sub.to_group().canonical_bytes();
                (key, sub)
            })
            .collect();
        factors.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.elements.cmp(&b.1.elements)));
        Ok(factors.into_iter().map(|(_, s)| s).collect())
    }

    /// Splits the subgroup `mask` into indecomposable internal direct
    /// factors, recursing on the first split found.
    fn split_indecomposable(&self, mask: u128, caps: &Caps) -> Result<Vec<u128>, GroupError> {
        let sub = Subgroup::from_mask(self, mask);
        if sub.elements.len() == 1 {
            return Ok(vec![mask]);
        }
        let local = sub.to_group();
        let normals = local.normal_subgroups(caps)?;
        let order = local.order();
        for i in 0..normals.len() {
            let a = &normals[i];
            if a.order() == 1 || a.order() == order {
                continue;
            }
            for b in normals.iter().skip(i + 1) {
                if b.order() == 1 || b.order() == order {
                    continue;
                }
                if a.order() * b.order() != order {
                    continue;
                }
                if a.mask & b.mask != 1 {
                    continue;
                }
                let commute = a.elements.iter().all(|&x| {
                    b.elements
                        .iter()
                        .all(|&y| local.mul(x, y) == local.mul(y, x))
                });
                if !commute {
                    continue;
                }
                // map the local pair back into parent element indices
                let lift = |s: &Subgroup<'_>| -> u128 {
                    s.elements
                        .iter()
                        .map(|&x| 1u128 << sub.elements[x as usize])
                        .fold(0, |m, b| m | b)
                };
                let left = self.split_indecomposable(lift(a), caps)?;
                let right = self.split_indecomposable(lift(b), caps)?;
                return Ok(left.into_iter().chain(right).collect());
            }
        }
        Ok(vec![mask])
    }

    /// The lexicographically least multiplication table over all
    /// relabelings that keep the identity at 0, serialized as
    /// `[order, row-major entries...]`. Equal byte strings iff isomorphic.
    pub fn canonical_table(&self, caps: &Caps) -> Result<Vec<u8>, GroupError> {
        self.require_cap(caps.canonical_order.min(255))?;
        Ok(self.canonical_bytes())
    }

    /// Uncapped canonical serialization; used internally where the inputs
    /// are already bounded (e.g. Remak factors of a capped group).
    pub(crate) fn canonical_bytes(&self) -> Vec<u8> {
        debug_assert!(self.n <= 255);
        let table = self.minimal_table();
        let mut out = Vec::with_capacity(1 + self.n * self.n);
        out.push(self.n as u8);
        out.extend(table.iter().map(|&x| x as u8));
        out
    }

    /// Backtracking search for the lexicographically least relabeled table.
    ///
    /// Labels are assigned on demand while the table is scanned row by row;
    /// when a product has no label yet it is forced to take the next free
    /// one (which is what the minimal completion does), and prefixes that
    /// compare above the best completed table are cut.
    fn minimal_table(&self) -> Vec<u16> {
        let n = self.n;
        if n == 1 {
            return vec![0];
        }
        let mut best: Vec<u16> = self.table.clone();
        let mut old_of_new: Vec<u16> = vec![0; n];
        let mut new_of_old: Vec<Option<u16>> = vec![None; n];
        new_of_old[0] = Some(0);
        let mut state = SearchState {
            group: self,
            best: &mut best,
            old_of_new: &mut old_of_new,
            new_of_old: &mut new_of_old,
        };
        state.scan_cell(1, 1, 1, false);
        best
    }
}

struct SearchState<'a> {
    group: &'a FiniteGroup,
    best: &'a mut Vec<u16>,
    old_of_new: &'a mut Vec<u16>,
    new_of_old: &'a mut Vec<Option<u16>>,
}

impl SearchState<'_> {
    /// Recursion over table cells (i, j), i, j >= 1, in row-major order.
    /// `assigned` is the number of labels already fixed; `less` records that
    /// the current prefix is strictly below the best table. Returns true if
    /// the subtree improved the best table, in which case the prefix up to
    /// here matches the new best exactly and the caller must fall back to
    /// equal-comparison mode.
    fn scan_cell(&mut self, i: usize, j: usize, assigned: usize, mut less: bool) -> bool {
        let n = self.group.n;
        if i == n {
            if less {
                for a in 0..n {
                    for b in 0..n {
                        let p = self.group.mul(self.old_of_new[a], self.old_of_new[b]);
                        self.best[a * n + b] = self.new_of_old[p as usize].unwrap();
                    }
                }
            }
            return less;
        }
        let (ni, nj) = if j + 1 == n { (i + 1, 1) } else { (i, j + 1) };
        let need = i.max(j);
        if need >= assigned {
            debug_assert_eq!(need, assigned);
            // branch over every unlabeled element for the next label
            let mut improved = false;
            for cand in 1..n as u16 {
                if self.new_of_old[cand as usize].is_some() {
                    continue;
                }
                self.new_of_old[cand as usize] = Some(assigned as u16);
                self.old_of_new[assigned] = cand;
                if self.scan_cell(i, j, assigned + 1, less) {
                    improved = true;
                    less = false;
                }
                self.new_of_old[cand as usize] = None;
            }
            return improved;
        }
        let p = self
            .group
            .mul(self.old_of_new[i], self.old_of_new[j]);
        let (value, forced) = match self.new_of_old[p as usize] {
            Some(v) => (v, false),
            None => {
                self.new_of_old[p as usize] = Some(assigned as u16);
                self.old_of_new[assigned] = p;
                (assigned as u16, true)
            }
        };
        let next_assigned = assigned + usize::from(forced);
        let best_value = self.best[i * self.group.n + j];
        let improved = if less || value < best_value {
            self.scan_cell(ni, nj, next_assigned, true)
        } else if value == best_value {
            self.scan_cell(ni, nj, next_assigned, false)
        } else {
            false
        };
        if forced {
            self.new_of_old[p as usize] = None;
        }
        improved
    }
}

/// A subgroup of a parent group, stored as a sorted element list (always
/// containing the identity 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup<'a> {
    parent: &'a FiniteGroup,
    elements: Vec<u16>,
    mask: u128,
}

impl<'a> Subgroup<'a> {
    fn from_mask(parent: &'a FiniteGroup, mask: u128) -> Self {
        let elements = (0..parent.n as u16).filter(|&x| mask >> x & 1 == 1).collect();
        Subgroup {
            parent,
            elements,
            mask,
        }
    }

    /// Checks closure and builds the subgroup.
    pub fn new(parent: &'a FiniteGroup, elements: &[u16]) -> Result<Self, GroupError> {
        if parent.n > 128 {
            return Err(GroupError::OrderCapExceeded {
                order: parent.n,
                cap: 128,
            });
        }
        let mut mask = 0u128;
        for &x in elements {
            if x as usize >= parent.n {
                return Err(GroupError::InvalidParameter(format!(
                    "element {x} out of range"
                )));
            }
            mask |= 1 << x;
        }
        mask |= 1;
        if parent.close_mask(mask) != mask {
            return Err(GroupError::InvalidParameter(
                "element set is not closed".into(),
            ));
        }
        Ok(Self::from_mask(parent, mask))
    }

    pub fn parent(&self) -> &'a FiniteGroup {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u16] {
        &self.elements
    }

    pub fn contains(&self, x: u16) -> bool {
        self.mask >> x & 1 == 1
    }

    pub fn is_normal(&self) -> bool {
        (0..self.parent.n as u16).all(|g| {
            self.elements
                .iter()
                .all(|&s| self.contains(self.parent.conjugate(g, s)))
        })
    }

    /// Re-indexes the subgroup as a standalone group. Elements keep their
    /// sorted order, so the identity stays at 0.
    pub fn to_group(&self) -> FiniteGroup {
        let k = self.elements.len();
        let pos = |x: u16| self.elements.binary_search(&x).unwrap();
        let rows: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| pos(self.parent.mul(self.elements[i], self.elements[j])))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&rows).expect("closed subset of a group is a group")
    }
}

/// All permutations of 0..n in lexicographic order.
fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    #[test]
    fn table_validation() {
        let z2 = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        let z3 = FiniteGroup::from_table(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(z3.order(), 3);

        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err(),
            GroupError::NotClosed { index: 1, row: true }
        );
        assert_eq!(
            FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).unwrap_err(),
            GroupError::NoIdentity
        );
        assert_eq!(FiniteGroup::from_table(&[]).unwrap_err(), GroupError::Empty);
        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1]]).unwrap_err(),
            GroupError::NotSquare(1)
        );
        // a Latin square with identity that is not associative
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(&rows).unwrap_err(),
            GroupError::NotAssociative { .. }
        ));
    }

    #[test]
    fn presets() {
        assert_eq!(z(1).order(), 1);
        assert_eq!(z(6).element_order(1), 6);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        let q8 = FiniteGroup::quaternion8();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        // exactly one involution in Q8
        assert_eq!(
            (0..8).filter(|&x| q8.element_order(x) == 2).count(),
            1
        );
        assert!(matches!(
            FiniteGroup::symmetric(5).unwrap_err(),
            GroupError::OrderCapExceeded { .. }
        ));
        assert!(matches!(
            FiniteGroup::cyclic(0).unwrap_err(),
            GroupError::InvalidParameter(_)
        ));
        assert_eq!(z(2).direct_product(&z(3)).unwrap().order(), 6);
    }

    #[test]
    fn isomorphism_examples() {
        let z6 = z(6);
        let z2x3 = z(2).direct_product(&z(3)).unwrap();
        let phi = z6.isomorphism_to(&z2x3).expect("Z6 ~ Z2 x Z3");
        for a in 0..6u16 {
            for b in 0..6u16 {
                assert_eq!(phi[z6.mul(a, b) as usize], z2x3.mul(phi[a as usize], phi[b as usize]));
            }
        }
        assert!(z6.isomorphism_to(&FiniteGroup::symmetric(3).unwrap()).is_none());
        assert!(z(4).isomorphism_to(&z(2).direct_product(&z(2)).unwrap()).is_none());
        let d2 = FiniteGroup::dihedral(2).unwrap();
        assert!(d2.isomorphism_to(&z(2).direct_product(&z(2)).unwrap()).is_some());
        // D3 ~ S3
        assert!(FiniteGroup::dihedral(3)
            .unwrap()
            .isomorphism_to(&FiniteGroup::symmetric(3).unwrap())
            .is_some());
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric() {
        let corpus = small_corpus(12);
        for g in &corpus {
            assert!(g.isomorphism_to(g).is_some());
        }
        for g in &corpus {
            for h in &corpus {
                assert_eq!(
                    g.isomorphism_to(h).is_some(),
                    h.isomorphism_to(g).is_some(),
                    "{:?} vs {:?}",
                    g.name(),
                    h.name()
                );
            }
        }
    }

    #[test]
    fn subgroup_counts() {
        let c = caps();
        assert_eq!(z(4).normal_subgroups(&c).unwrap().len(), 3);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let sizes: Vec<usize> = s3
            .normal_subgroups(&c)
            .unwrap()
            .iter()
            .map(Subgroup::order)
            .collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        assert_eq!(z(1).normal_subgroups(&c).unwrap().len(), 1);
        // all 6 subgroups of S3, only 3 normal
        assert_eq!(s3.subgroups(&c).unwrap().len(), 6);
        // brute force cross-check on a couple of groups
        for g in [z(8), z(2).direct_product(&z(4)).unwrap(), FiniteGroup::dihedral(4).unwrap()] {
            let found = g.subgroups(&c).unwrap().len();
            assert_eq!(found, brute_subgroup_count(&g), "{:?}", g.name());
        }
    }

    /// Independent subgroup count: closures of all subsets are too many, so
    /// close all subsets of size <= 3 (every subgroup of a group of order
    /// <= 16 that needs more than 3 generators is the whole 2-group (Z2)^4,
    /// which the chosen test groups avoid).
    fn brute_subgroup_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        let mut subs: BTreeSet<Vec<u16>> = BTreeSet::new();
        let mut close = |gens: Vec<u16>| {
            let mut set: BTreeSet<u16> = gens.iter().copied().collect();
            set.insert(0);
            loop {
                let mut new = Vec::new();
                for &a in &set {
                    for &b in &set {
                        let p = g.mul(a, b);
                        if !set.contains(&p) {
                            new.push(p);
                        }
                    }
                }
                if new.is_empty() {
                    break;
                }
                set.extend(new);
            }
            subs.insert(set.into_iter().collect());
        };
        close(vec![]);
        for a in 1..n as u16 {
            close(vec![a]);
            for b in a + 1..n as u16 {
                close(vec![a, b]);
                for c in b + 1..n as u16 {
                    close(vec![a, b, c]);
                }
            }
        }
        subs.len()
    }

    fn small_corpus(max_order: usize) -> Vec<FiniteGroup> {
        let mut out = Vec::new();
        for n in 1..=max_order {
            out.push(z(n));
        }
        for n in 1..=max_order / 2 {
            out.push(FiniteGroup::dihedral(n).unwrap());
        }
        if max_order >= 8 {
            out.push(FiniteGroup::quaternion8());
        }
        if max_order >= 6 {
            out.push(FiniteGroup::symmetric(3).unwrap());
        }
        for (a, b) in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 6), (2, 5)] {
            if a * b <= max_order {
                out.push(z(a).direct_product(&z(b)).unwrap());
            }
        }
        out
    }

    #[test]
    fn remak_examples() {
        let c = caps();
        let z6 = z(6);
        let factors = z6.remak_decomposition(&c).unwrap();
        let mut orders: Vec<usize> = factors.iter().map(Subgroup::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3]);

        assert_eq!(z(4).remak_decomposition(&c).unwrap().len(), 1);
        assert_eq!(FiniteGroup::quaternion8().remak_decomposition(&c).unwrap().len(), 1);
        assert_eq!(z(1).remak_decomposition(&c).unwrap().len(), 1);
        assert_eq!(
            FiniteGroup::symmetric(3).unwrap().remak_decomposition(&c).unwrap().len(),
            1
        );

        let v4xz3 = z(2)
            .direct_product(&z(2))
            .unwrap()
            .direct_product(&z(3))
            .unwrap();
        let factors = v4xz3.remak_decomposition(&c).unwrap();
        let mut orders: Vec<usize> = factors.iter().map(Subgroup::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 2, 3]);
    }

    #[test]
    fn remak_reconstructs_the_group() {
        let c = caps();
        for g in small_corpus(16) {
            let factors = g.remak_decomposition(&c).unwrap();
            // every element splits uniquely as an ordered product
            let mut count = 1usize;
            for f in &factors {
                count *= f.order();
            }
            assert_eq!(count, g.order(), "{:?}", g.name());
            let mut products = BTreeSet::new();
            let mut stack = vec![(0usize, 0u16)];
            while let Some((level, acc)) = stack.pop() {
                if level == factors.len() {
                    products.insert(acc);
                    continue;
                }
                for &x in factors[level].elements() {
                    stack.push((level + 1, g.mul(acc, x)));
                }
            }
            assert_eq!(products.len(), g.order(), "{:?}", g.name());
            // factors are fixed points of the decomposition
            for f in &factors {
                assert_eq!(f.to_group().remak_decomposition(&c).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn canonical_table_examples() {
        let c = caps();
        let z6 = z(6);
        let z2x3 = z(2).direct_product(&z(3)).unwrap();
        assert_eq!(z6.canonical_table(&c).unwrap(), z2x3.canonical_table(&c).unwrap());
        assert_eq!(z6.canonical_table(&c).unwrap(), z6.canonical_table(&c).unwrap());
        assert_ne!(
            z(4).canonical_table(&c).unwrap(),
            z(2).direct_product(&z(2)).unwrap().canonical_table(&c).unwrap()
        );
        assert!(matches!(
            z(2).direct_product(&z(16)).unwrap().canonical_table(&c),
            Err(GroupError::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn canonical_table_matches_isomorphism() {
        let c = caps();
        let corpus = small_corpus(12);
        let keys: Vec<Vec<u8>> = corpus
            .iter()
            .map(|g| g.canonical_table(&c).unwrap())
            .collect();
        for i in 0..corpus.len() {
            for j in i..corpus.len() {
                let iso = corpus[i].isomorphism_to(&corpus[j]).is_some();
                assert_eq!(
                    iso,
                    keys[i] == keys[j],
                    "{:?} vs {:?}",
                    corpus[i].name(),
                    corpus[j].name()
                );
            }
        }
    }

    #[test]
    fn canonical_table_is_relabeling_invariant() {
        let c = caps();
        let g = FiniteGroup::dihedral(4).unwrap();
        // rotate the non-identity labels
        let mut perm: Vec<u16> = (0..8).collect();
        perm[1..].rotate_left(3);
        let h = g.relabel(&perm).unwrap();
        assert_eq!(g.canonical_table(&c).unwrap(), h.canonical_table(&c).unwrap());
    }

    #[test]
    fn relabel_validation() {
        let g = z(4);
        assert!(matches!(
            g.relabel(&[1, 0, 2, 3]).unwrap_err(),
            GroupError::BadRelabeling
        ));
        assert!(matches!(
            g.relabel(&[0, 1, 1, 3]).unwrap_err(),
            GroupError::BadRelabeling
        ));
        assert!(g.relabel(&[0, 2, 1, 3]).is_ok());
    }

    #[test]
    fn subgroup_construction() {
        let g = z(6);
        let s = Subgroup::new(&g, &[0, 2, 4]).unwrap();
        assert_eq!(s.order(), 3);
        assert!(s.is_normal());
        assert!(Subgroup::new(&g, &[0, 2, 3]).is_err());
        assert_eq!(s.to_group().order(), 3);
        assert!(s.to_group().isomorphism_to(&z(3)).is_some());
    }
}
