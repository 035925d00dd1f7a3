//! Finite loops as explicit Cayley tables, and their structure theory.
//!
//! Elements are `0..order` with the identity always at index `0`.  Every
//! value is immutable after construction, so everything here is a pure
//! function of its inputs.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Index of a loop element in its Cayley table.
pub type Elem = usize;

/// Identity element index; every loop here keeps its identity at 0.
pub const IDENTITY: Elem = 0;

#[derive(Debug, Error)]
pub enum LoopError {
    #[error("table row {row} has {found} entries, expected {expected}")]
    BadDimensions {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry at ({row},{col}) is {value}, out of range for order {order}")]
    ValueOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("{kind} {index} is not a permutation; table is not a Latin square")]
    NotLatin { kind: &'static str, index: usize },
    #[error("element 0 is not a two-sided identity (fails at {index})")]
    NoIdentity { index: usize },
    #[error("order 0 tables are not loops")]
    Empty,
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("set of {size} elements is not closed under the loop operations")]
    NotClosed { size: usize },
    #[error("subset does not contain the identity")]
    MissingIdentity,
    #[error("subloop is not normal")]
    NotNormal,
    #[error("loop is not associative, refusing to treat it as a group")]
    NotAGroup,
    #[error("order {order} exceeds the configured limit {limit}")]
    OrderLimit { order: usize, limit: usize },
    #[error("map is not a homomorphism at ({x},{y})")]
    NotAHomomorphism { x: Elem, y: Elem },
    #[error("map is not a bijection")]
    NotBijective,
    #[error("map has {found} entries, expected {expected}")]
    BadMapLength { expected: usize, found: usize },
}

/// A finite loop: a Latin-square Cayley table with identity at index 0.
///
/// Left and right division tables are derived at construction, so `mul`,
/// `ldiv` and `rdiv` are all O(1) lookups.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLoop {
    order: usize,
    table: Vec<Elem>,
    ldiv: Vec<Elem>,
    rdiv: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteLoop(order={})", self.order)
    }
}

impl FiniteLoop {
    /// Builds a loop from a flat row-major table, validating the loop axioms.
    pub fn from_flat(order: usize, table: Vec<Elem>) -> Result<Self, LoopError> {
        if order == 0 {
            return Err(LoopError::Empty);
        }
        if table.len() != order * order {
            return Err(LoopError::BadDimensions {
                row: 0,
                expected: order * order,
                found: table.len(),
            });
        }
        for (pos, &v) in table.iter().enumerate() {
            if v >= order {
                return Err(LoopError::ValueOutOfRange {
                    row: pos / order,
                    col: pos % order,
                    value: v,
                    order,
                });
            }
        }
        // Latin square: every row and every column is a permutation.
        let mut seen = vec![false; order];
        for r in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..order {
                let v = table[r * order + c];
                if seen[v] {
                    return Err(LoopError::NotLatin {
                        kind: "row",
                        index: r,
                    });
                }
                seen[v] = true;
            }
        }
        for c in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..order {
                let v = table[r * order + c];
                if seen[v] {
                    return Err(LoopError::NotLatin {
                        kind: "column",
                        index: c,
                    });
                }
                seen[v] = true;
            }
        }
        for x in 0..order {
            if table[x] != x {
                return Err(LoopError::NoIdentity { index: x });
            }
            if table[x * order] != x {
                return Err(LoopError::NoIdentity { index: x });
            }
        }
        // x\y = z iff x*z = y;  x/y = z iff z*y = x.
        let mut ldiv = vec![0; order * order];
        let mut rdiv = vec![0; order * order];
        for x in 0..order {
            for z in 0..order {
                let y = table[x * order + z];
                ldiv[x * order + y] = z;
                rdiv[y * order + z] = x;
            }
        }
        Ok(FiniteLoop {
            order,
            table,
            ldiv,
            rdiv,
            labels: None,
        })
    }

    /// Builds a loop from table rows.
    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self, LoopError> {
        let order = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(LoopError::BadDimensions {
                    row: r,
                    expected: order,
                    found: row.len(),
                });
            }
        }
        FiniteLoop::from_flat(order, rows.concat())
    }

    /// Attaches element labels (one per element, identity first).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LoopError> {
        if labels.len() != self.order {
            return Err(LoopError::LabelCount {
                expected: self.order,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Re-checks all construction invariants; used by fuzz-style tests.
    pub fn validate(&self) -> Result<(), LoopError> {
        let rebuilt = FiniteLoop::from_flat(self.order, self.table.clone())?;
        if rebuilt.ldiv != self.ldiv || rebuilt.rdiv != self.rdiv {
            return Err(LoopError::NotLatin {
                kind: "division table",
                index: 0,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// x·y
    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x * self.order + y]
    }

    /// x\y, the unique z with x·z = y.
    #[inline]
    pub fn ldiv(&self, x: Elem, y: Elem) -> Elem {
        self.ldiv[x * self.order + y]
    }

    /// x/y, the unique z with z·y = x.
    #[inline]
    pub fn rdiv(&self, x: Elem, y: Elem) -> Elem {
        self.rdiv[x * self.order + y]
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label for an element: its assigned label, or the index.
    pub fn label(&self, x: Elem) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// True when the two loops have identical tables (labels ignored).
    pub fn same_table(&self, other: &FiniteLoop) -> bool {
        self.order == other.order && self.table == other.table
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order;
        for x in 0..n {
            for y in (x + 1)..n {
                if self.mul(x, y) != self.mul(y, x) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order;
        for x in 1..n {
            for y in 1..n {
                let xy = self.mul(x, y);
                for z in 1..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_abelian_group(&self) -> bool {
        self.is_commutative() && self.is_associative()
    }

    /// Applies the permutation `perm` to elements; `perm[old] = new`.
    /// `perm[x]` must move the identity to 0 for the result to validate.
    pub fn relabel(&self, perm: &[Elem]) -> Result<FiniteLoop, LoopError> {
        if perm.len() != self.order {
            return Err(LoopError::BadMapLength {
                expected: self.order,
                found: perm.len(),
            });
        }
        let n = self.order;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        let mut out = FiniteLoop::from_flat(n, table)?;
        if let Some(old) = &self.labels {
            let mut labels = vec![String::new(); n];
            for x in 0..n {
                labels[perm[x]] = old[x].clone();
            }
            out = out.with_labels(labels)?;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Inner mappings
// ---------------------------------------------------------------------------

/// Standard generators of the inner mapping group.
///
/// `L{x,y}`: z ↦ (yx)\(y(xz));  `R{x,y}`: z ↦ ((zx)y)/(xy);
/// `T{x}`: z ↦ (xz)/x.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerGenerator {
    L { x: Elem, y: Elem },
    R { x: Elem, y: Elem },
    T { x: Elem },
}

impl FiniteLoop {
    /// Evaluates an inner mapping generator at z.
    pub fn apply_inner(&self, g: InnerGenerator, z: Elem) -> Elem {
        match g {
            InnerGenerator::L { x, y } => {
                let yx = self.mul(y, x);
                self.ldiv(yx, self.mul(y, self.mul(x, z)))
            }
            InnerGenerator::R { x, y } => {
                let xy = self.mul(x, y);
                self.rdiv(self.mul(self.mul(z, x), y), xy)
            }
            InnerGenerator::T { x } => self.rdiv(self.mul(x, z), x),
        }
    }

    /// All standard inner generators, parameters ranging over the whole loop.
    pub fn inner_generators(&self) -> impl Iterator<Item = InnerGenerator> {
        let n = self.order;
        let ls = (0..n).flat_map(move |x| (0..n).map(move |y| InnerGenerator::L { x, y }));
        let rs = (0..n).flat_map(move |x| (0..n).map(move |y| InnerGenerator::R { x, y }));
        let ts = (0..n).map(move |x| InnerGenerator::T { x });
        ls.chain(rs).chain(ts)
    }

    /// True when every inner generator fixes z.
    pub fn is_central_element(&self, z: Elem) -> bool {
        self.inner_generators().all(|g| self.apply_inner(g, z) == z)
    }
}

// ---------------------------------------------------------------------------
// Subloops
// ---------------------------------------------------------------------------

/// A subloop of some parent loop, stored as a sorted element list.
///
/// Instances always contain the identity and are closed under the parent's
/// multiplication and divisions; constructors enforce this.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subloop {
    elements: Vec<Elem>,
}

impl fmt::Debug for Subloop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subloop{:?}", self.elements)
    }
}

impl Subloop {
    /// The one-element subloop {e}.
    pub fn trivial() -> Self {
        Subloop { elements: vec![IDENTITY] }
    }

    /// The improper subloop consisting of all of `l`.
    pub fn whole(l: &FiniteLoop) -> Self {
        Subloop {
            elements: l.elements().collect(),
        }
    }

    /// Wraps an explicit element set, validating identity and closure.
    pub fn from_elements<I: IntoIterator<Item = Elem>>(
        l: &FiniteLoop,
        elems: I,
    ) -> Result<Self, LoopError> {
        let mut v: Vec<Elem> = elems.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.binary_search(&IDENTITY).is_err() {
            return Err(LoopError::MissingIdentity);
        }
        // Finite plus Latin means multiplicative closure already gives
        // closure under both divisions.
        for &a in &v {
            for &b in &v {
                if v.binary_search(&l.mul(a, b)).is_err() {
                    return Err(LoopError::NotClosed { size: v.len() });
                }
            }
        }
        Ok(Subloop { elements: v })
    }

    fn from_sorted_unchecked(elements: Vec<Elem>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.first() == Some(&IDENTITY));
        Subloop { elements }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // subloops always contain the identity
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_whole(&self, l: &FiniteLoop) -> bool {
        self.elements.len() == l.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Re-indexes the subloop as a standalone loop.
    ///
    /// Returns the loop together with the embedding map: entry `i` is the
    /// parent element that became element `i`.  The identity stays at 0
    /// because element lists are sorted and contain 0.
    pub fn to_loop(&self, parent: &FiniteLoop) -> (FiniteLoop, Vec<Elem>) {
        let k = self.elements.len();
        let mut index_of = vec![usize::MAX; parent.order()];
        for (i, &e) in self.elements.iter().enumerate() {
            index_of[e] = i;
        }
        let mut table = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                let p = parent.mul(self.elements[i], self.elements[j]);
                debug_assert!(index_of[p] != usize::MAX, "subloop not closed");
                table[i * k + j] = index_of[p];
            }
        }
        let mut l = FiniteLoop::from_flat(k, table).expect("closed subset forms a loop");
        if parent.labels().is_some() {
            let labels = self.elements.iter().map(|&e| parent.label(e)).collect();
            l = l.with_labels(labels).unwrap();
        }
        (l, self.elements.clone())
    }
}

// ---------------------------------------------------------------------------
// Closure and subloop generation
// ---------------------------------------------------------------------------

/// Fixed-capacity bitset over loop elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct ElemSet {
    words: Vec<u64>,
}

impl ElemSet {
    pub(crate) fn new(capacity: usize) -> Self {
        ElemSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, 1u64 << (x % 64));
        if self.words[w] & b == 0 {
            self.words[w] |= b;
            true
        } else {
            false
        }
    }

    #[inline]
    pub(crate) fn contains(&self, x: usize) -> bool {
        self.words[x / 64] & (1 << (x % 64)) != 0
    }
}

/// Multiplicative closure of `seed ∪ {e}`.  Returns sorted elements.
///
/// In a finite loop a multiplicatively closed subset is automatically closed
/// under both divisions (translations restrict to bijections), so this is the
/// full subloop closure.
fn close(l: &FiniteLoop, seed: impl IntoIterator<Item = Elem>) -> Vec<Elem> {
    let mut set = ElemSet::new(l.order());
    let mut members: Vec<Elem> = Vec::new();
    set.insert(IDENTITY);
    members.push(IDENTITY);
    for s in seed {
        if set.insert(s) {
            members.push(s);
        }
    }
    close_from(l, &mut set, &mut members, 0);
    members.sort_unstable();
    members
}

/// Pairwise-product worklist starting at position `from`: positions before
/// `from` are assumed mutually closed already.
fn close_from(l: &FiniteLoop, set: &mut ElemSet, members: &mut Vec<Elem>, from: usize) {
    let mut i = from;
    while i < members.len() {
        let a = members[i];
        for j in 0..=i {
            let b = members[j];
            let p = l.mul(a, b);
            if set.insert(p) {
                members.push(p);
            }
            let q = l.mul(b, a);
            if set.insert(q) {
                members.push(q);
            }
        }
        i += 1;
    }
}

impl FiniteLoop {
    /// Smallest subloop containing the given generators.
    pub fn generated_subloop(&self, gens: &[Elem]) -> Subloop {
        Subloop::from_sorted_unchecked(close(self, gens.iter().copied()))
    }

    /// All subloops, by breadth-first single-generator extension.
    ///
    /// Every subloop is reachable by adding one generator at a time, so the
    /// enumeration is complete.  Refuses loops larger than `limit`.
    pub fn all_subloops(&self, limit: usize) -> Result<Vec<Subloop>, LoopError> {
        if self.order > limit {
            return Err(LoopError::OrderLimit {
                order: self.order,
                limit,
            });
        }
        let mut found: HashSet<Vec<Elem>> = HashSet::new();
        let mut queue: Vec<Vec<Elem>> = Vec::new();
        let start = close(self, []);
        found.insert(start.clone());
        queue.push(start);
        let mut qi = 0;
        while qi < queue.len() {
            let base = queue[qi].clone();
            qi += 1;
            let mut base_set = ElemSet::new(self.order);
            for &e in &base {
                base_set.insert(e);
            }
            for x in self.elements() {
                if base_set.contains(x) {
                    continue;
                }
                let mut set = base_set.clone();
                let mut members = base.clone();
                set.insert(x);
                members.push(x);
                close_from(self, &mut set, &mut members, base.len());
                members.sort_unstable();
                if found.insert(members.clone()) {
                    queue.push(members);
                }
            }
        }
        let mut subs: Vec<Subloop> = queue
            .into_iter()
            .map(Subloop::from_sorted_unchecked)
            .collect();
        subs.sort_by(|a, b| (a.len(), a.elements()).cmp(&(b.len(), b.elements())));
        Ok(subs)
    }

    /// True when A is invariant under every standard inner generator.
    pub fn is_normal(&self, a: &Subloop) -> bool {
        let n = self.order;
        let mut set = ElemSet::new(n);
        for &e in a.elements() {
            set.insert(e);
        }
        for x in 0..n {
            for y in 0..n {
                for &z in a.elements() {
                    if !set.contains(self.apply_inner(InnerGenerator::L { x, y }, z)) {
                        return false;
                    }
                    if !set.contains(self.apply_inner(InnerGenerator::R { x, y }, z)) {
                        return false;
                    }
                }
            }
            for &z in a.elements() {
                if !set.contains(self.apply_inner(InnerGenerator::T { x }, z)) {
                    return false;
                }
            }
        }
        true
    }

    /// Elements fixed by every inner mapping; always a normal subloop.
    pub fn center(&self) -> Subloop {
        let elems: Vec<Elem> = self
            .elements()
            .filter(|&z| self.is_central_element(z))
            .collect();
        let c = Subloop::from_elements(self, elems).expect("centre is a subloop");
        debug_assert!(self.is_normal(&c));
        c
    }

    /// Smallest normal subloop containing the given set.
    pub fn normal_closure(&self, seed: &[Elem]) -> Subloop {
        let mut members = close(self, seed.iter().copied());
        loop {
            let mut set = ElemSet::new(self.order);
            for &e in &members {
                set.insert(e);
            }
            let mut extra: Vec<Elem> = Vec::new();
            for g in self.inner_generators() {
                for &z in &members {
                    let img = self.apply_inner(g, z);
                    if !set.contains(img) {
                        set.insert(img);
                        extra.push(img);
                    }
                }
            }
            if extra.is_empty() {
                members.sort_unstable();
                let s = Subloop::from_sorted_unchecked(members);
                debug_assert!(self.is_normal(&s));
                return s;
            }
            members.extend(extra);
            members = close(self, members);
        }
    }

    /// True when the only normal subloops are {e} and the whole loop, and the
    /// loop is nontrivial.
    pub fn is_simple(&self) -> bool {
        if self.order == 1 {
            return false;
        }
        for x in 1..self.order {
            if !self.normal_closure(&[x]).is_whole(self) {
                return false;
            }
        }
        true
    }

    /// Every normal subloop, via join-saturation of singleton normal closures.
    ///
    /// The join of two normal subloops is the subloop their union generates
    /// (congruences of loops permute), and every normal subloop is a join of
    /// normal closures of its elements, so saturating the atom set under
    /// pairwise joins enumerates the whole normal subloop lattice.
    pub fn all_normal_subloops(&self, limit: usize) -> Result<Vec<Subloop>, LoopError> {
        if self.order > limit {
            return Err(LoopError::OrderLimit {
                order: self.order,
                limit,
            });
        }
        let mut found: HashSet<Vec<Elem>> = HashSet::new();
        let mut list: Vec<Vec<Elem>> = Vec::new();
        let mut push = |v: Vec<Elem>, list: &mut Vec<Vec<Elem>>| {
            if found.insert(v.clone()) {
                list.push(v);
            }
        };
        push(vec![IDENTITY], &mut list);
        for x in 1..self.order {
            push(self.normal_closure(&[x]).elements.clone(), &mut list);
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..i {
                let merged: Vec<Elem> = {
                    let (a, b) = (&list[i], &list[j]);
                    if a.iter().all(|e| b.binary_search(e).is_ok())
                        || b.iter().all(|e| a.binary_search(e).is_ok())
                    {
                        continue;
                    }
                    close(self, a.iter().chain(b.iter()).copied())
                };
                debug_assert!(self.is_normal(&Subloop::from_sorted_unchecked(merged.clone())));
                push(merged, &mut list);
            }
            i += 1;
        }
        let mut subs: Vec<Subloop> = list.into_iter().map(Subloop::from_sorted_unchecked).collect();
        subs.sort_by(|a, b| (a.len(), a.elements()).cmp(&(b.len(), b.elements())));
        Ok(subs)
    }
}

// ---------------------------------------------------------------------------
// Quotients and homomorphisms
// ---------------------------------------------------------------------------

/// A homomorphism between two concrete loops, stored as an element map.
#[derive(Clone, PartialEq, Eq)]
pub struct LoopHom {
    domain: FiniteLoop,
    codomain: FiniteLoop,
    map: Vec<Elem>,
}

impl fmt::Debug for LoopHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LoopHom({} -> {}, {:?})",
            self.domain.order(),
            self.codomain.order(),
            self.map
        )
    }
}

impl LoopHom {
    /// Validates `map` as a homomorphism and wraps it.
    pub fn new(
        domain: FiniteLoop,
        codomain: FiniteLoop,
        map: Vec<Elem>,
    ) -> Result<Self, LoopError> {
        if map.len() != domain.order() {
            return Err(LoopError::BadMapLength {
                expected: domain.order(),
                found: map.len(),
            });
        }
        for &v in &map {
            if v >= codomain.order() {
                return Err(LoopError::ValueOutOfRange {
                    row: 0,
                    col: 0,
                    value: v,
                    order: codomain.order(),
                });
            }
        }
        for x in domain.elements() {
            for y in domain.elements() {
                if map[domain.mul(x, y)] != codomain.mul(map[x], map[y]) {
                    return Err(LoopError::NotAHomomorphism { x, y });
                }
            }
        }
        debug_assert_eq!(map[IDENTITY], IDENTITY, "loop homs fix the identity");
        Ok(LoopHom {
            domain,
            codomain,
            map,
        })
    }

    pub fn domain(&self) -> &FiniteLoop {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteLoop {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain.order() != self.codomain.order() {
            return false;
        }
        let mut seen = vec![false; self.codomain.order()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// Preimage of the identity.
    pub fn kernel(&self) -> Subloop {
        let elems: Vec<Elem> = self
            .domain
            .elements()
            .filter(|&x| self.map[x] == IDENTITY)
            .collect();
        Subloop::from_elements(&self.domain, elems).expect("kernels are subloops")
    }

    /// Image as a subloop of the codomain.
    pub fn image(&self) -> Subloop {
        let mut v: Vec<Elem> = self.map.clone();
        v.sort_unstable();
        v.dedup();
        Subloop::from_elements(&self.codomain, v).expect("images are subloops")
    }
}

impl FiniteLoop {
    /// Quotient by a normal subloop.
    ///
    /// Cosets are represented by their least element; coset 0 is N itself.
    /// Returns the quotient loop and the projection homomorphism.
    pub fn quotient(&self, n_sub: &Subloop) -> Result<(FiniteLoop, LoopHom), LoopError> {
        if !self.is_normal(n_sub) {
            return Err(LoopError::NotNormal);
        }
        let n = self.order;
        let mut block = vec![usize::MAX; n];
        let mut reps: Vec<Elem> = Vec::new();
        for x in 0..n {
            if block[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &m in n_sub.elements() {
                let c = self.mul(x, m);
                // Normality makes the coset partition well defined.
                assert!(
                    block[c] == usize::MAX,
                    "coset partition violated; normality check is broken"
                );
                block[c] = id;
            }
        }
        let k = reps.len();
        let mut table = vec![0; k * k];
        for b1 in 0..k {
            for b2 in 0..k {
                table[b1 * k + b2] = block[self.mul(reps[b1], reps[b2])];
            }
        }
        // The projection must be a homomorphism onto the rep-table.
        for x in 0..n {
            for y in 0..n {
                assert!(
                    block[self.mul(x, y)] == table[block[x] * k + block[y]],
                    "quotient multiplication is not well defined"
                );
            }
        }
        let mut q = FiniteLoop::from_flat(k, table)?;
        if self.labels.is_some() {
            let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
            q = q.with_labels(labels)?;
        }
        let hom = LoopHom::new(self.clone(), q.clone(), block)?;
        Ok((q, hom))
    }
}

// ---------------------------------------------------------------------------
// Power sets, exponent, diassociativity
// ---------------------------------------------------------------------------

impl FiniteLoop {
    /// All values of n-fold products of x under every parenthesization.
    ///
    /// `P_1 = {x}`, `P_n = ∪_{i+j=n} P_i · P_j`.  Returned sorted.
    pub fn power_set(&self, x: Elem, n: usize) -> Vec<Elem> {
        assert!(n >= 1, "powers start at 1");
        let order = self.order;
        // levels[k] = membership mask of P_k; lists[k] = its elements.
        let mut lists: Vec<Vec<Elem>> = vec![Vec::new(); n + 1];
        lists[1] = vec![x];
        for k in 2..=n {
            let mut mask = vec![false; order];
            for i in 1..k {
                let j = k - i;
                for a in 0..lists[i].len() {
                    for b in 0..lists[j].len() {
                        mask[self.mul(lists[i][a], lists[j][b])] = true;
                    }
                }
            }
            lists[k] = (0..order).filter(|&e| mask[e]).collect();
        }
        lists[n].clone()
    }

    /// True when every n-fold product of every element is the identity.
    pub fn has_exponent(&self, n: usize) -> bool {
        self.elements().all(|x| self.power_set(x, n) == [IDENTITY])
    }

    /// Least n ≤ max_n with `has_exponent(n)`, if any.
    pub fn exponent_within(&self, max_n: usize) -> Option<usize> {
        (1..=max_n).find(|&n| self.has_exponent(n))
    }

    /// Least exponent searched up to the default bound of 2·order.
    pub fn exponent(&self) -> Option<usize> {
        self.exponent_within(2 * self.order)
    }

    /// True when every 2-generated subloop is associative.
    pub fn is_diassociative(&self) -> bool {
        for x in self.elements() {
            for y in x..self.order {
                let s = self.generated_subloop(&[x, y]);
                let e = s.elements();
                for &a in e {
                    for &b in e {
                        let ab = self.mul(a, b);
                        for &c in e {
                            if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Per-element invariant fingerprints, comparable across loops of one run.
fn fingerprints(l: &FiniteLoop) -> Vec<u64> {
    let n = l.order();
    let base: Vec<u64> = (0..n)
        .map(|x| {
            let gen = l.generated_subloop(&[x]).len();
            let p2 = l.power_set(x, 2).len();
            let p3 = l.power_set(x, 3).len();
            let p4 = l.power_set(x, 4).len();
            hash_of(&(gen, p2, p3, p4))
        })
        .collect();
    // One refinement round over row profiles.
    (0..n)
        .map(|x| {
            let mut row: Vec<(u64, u64)> = (0..n).map(|y| (base[y], base[l.mul(x, y)])).collect();
            row.sort_unstable();
            hash_of(&(base[x], row))
        })
        .collect()
}

struct IsoSearch<'a> {
    a: &'a FiniteLoop,
    b: &'a FiniteLoop,
    fp_a: Vec<u64>,
    fp_b: Vec<u64>,
    gens: Vec<Elem>,
    all: bool,
    solutions: Vec<Vec<Elem>>,
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a FiniteLoop, b: &'a FiniteLoop, all: bool) -> Option<Self> {
        if a.order() != b.order() {
            return None;
        }
        let fp_a = fingerprints(a);
        let fp_b = fingerprints(b);
        let mut sa = fp_a.clone();
        let mut sb = fp_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        // Greedy generating sequence: repeatedly add the element with the
        // fewest fingerprint twins that is outside the current closure.
        let mut gens: Vec<Elem> = Vec::new();
        let mut closed = a.generated_subloop(&[]);
        while !closed.is_whole(a) {
            let next = a
                .elements()
                .filter(|&x| !closed.contains(x))
                .min_by_key(|&x| (fp_b.iter().filter(|&&f| f == fp_a[x]).count(), x))
                .unwrap();
            gens.push(next);
            let mut seed = closed.elements().to_vec();
            seed.push(next);
            closed = a.generated_subloop(&seed);
        }
        Some(IsoSearch {
            a,
            b,
            fp_a,
            fp_b,
            gens,
            all,
            solutions: Vec::new(),
        })
    }

    /// Assigns map[d]=i and propagates products to a fixpoint.
    fn extend(&self, map: &mut Vec<Option<Elem>>, used: &mut Vec<bool>, d: Elem, i: Elem) -> bool {
        let mut defined: Vec<Elem> = (0..self.a.order()).filter(|&x| map[x].is_some()).collect();
        let mut stack = vec![(d, i)];
        while let Some((d, i)) = stack.pop() {
            match map[d] {
                Some(j) => {
                    if j != i {
                        return false;
                    }
                    continue;
                }
                None => {
                    if used[i] || self.fp_a[d] != self.fp_b[i] {
                        return false;
                    }
                    map[d] = Some(i);
                    used[i] = true;
                    for &d2 in &defined {
                        let i2 = map[d2].unwrap();
                        stack.push((self.a.mul(d, d2), self.b.mul(i, i2)));
                        stack.push((self.a.mul(d2, d), self.b.mul(i2, i)));
                    }
                    stack.push((self.a.mul(d, d), self.b.mul(i, i)));
                    defined.push(d);
                }
            }
        }
        true
    }

    fn dfs(&mut self, map: Vec<Option<Elem>>, used: Vec<bool>) -> bool {
        let next = self.gens.iter().copied().find(|&g| map[g].is_none());
        let g = match next {
            Some(g) => g,
            None => {
                // Generators force everything; map must now be total.
                debug_assert!(map.iter().all(|m| m.is_some()));
                self.solutions
                    .push(map.iter().map(|m| m.unwrap()).collect());
                return !self.all;
            }
        };
        for h in self.b.elements() {
            if used[h] || self.fp_b[h] != self.fp_a[g] {
                continue;
            }
            let mut m2 = map.clone();
            let mut u2 = used.clone();
            if self.extend(&mut m2, &mut u2, g, h) && self.dfs(m2, u2) {
                return true;
            }
        }
        false
    }

    fn run(&mut self) {
        let mut map = vec![None; self.a.order()];
        let mut used = vec![false; self.b.order()];
        if self.extend(&mut map, &mut used, IDENTITY, IDENTITY) {
            self.dfs(map, used);
        }
    }
}

/// Searches for an isomorphism between two loops.
///
/// Backtracking over images of a generating sequence, pruned by element
/// fingerprints (orders of generated subloops, power-set growth, row
/// profiles); partial maps are closed under products as they grow.
pub fn loops_isomorphic(a: &FiniteLoop, b: &FiniteLoop) -> Option<LoopHom> {
    let mut search = IsoSearch::new(a, b, false)?;
    search.run();
    search.solutions.pop().map(|map| {
        LoopHom::new(a.clone(), b.clone(), map).expect("search produced a homomorphism")
    })
}

/// All automorphisms of a loop, as permutation maps.
pub fn automorphisms(l: &FiniteLoop) -> Vec<Vec<Elem>> {
    let mut search = IsoSearch::new(l, l, true).expect("loop is isomorphic to itself");
    search.run();
    search.solutions.sort_unstable();
    search.solutions
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// Chein double M(G,2): G ∪ Gu with u-twisted multiplication.
///
/// For a group G the result is a Moufang loop of order 2|G|; it fails to be
/// associative exactly when G is nonabelian.  The Moufang identity is
/// verified exhaustively before returning.
pub fn chein_double(g: &FiniteLoop) -> Result<FiniteLoop, LoopError> {
    if !g.is_associative() {
        return Err(LoopError::NotAGroup);
    }
    let n = g.order();
    let m = 2 * n;
    let inv = |h: Elem| g.ldiv(h, IDENTITY);
    let mut table = vec![0; m * m];
    for x in 0..m {
        for y in 0..m {
            let v = match (x < n, y < n) {
                (true, true) => g.mul(x, y),
                (true, false) => n + g.mul(y - n, x),
                (false, true) => n + g.mul(x - n, inv(y)),
                (false, false) => g.mul(inv(y - n), x - n),
            };
            table[x * m + y] = v;
        }
    }
    let out = FiniteLoop::from_flat(m, table)?;
    for x in 0..m {
        for y in 0..m {
            let xy = out.mul(x, y);
            for z in 0..m {
                assert!(
                    out.mul(out.mul(xy, x), z) == out.mul(x, out.mul(y, out.mul(x, z))),
                    "Chein double lost the Moufang identity"
                );
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Subloop classification
// ---------------------------------------------------------------------------

/// Structural class of a subloop, viewed as a loop in its own right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubloopClass {
    AbelianGroup,
    NonabelianSimple,
    Other,
}

/// Classification of every subloop of a loop.
pub struct SubloopClassification {
    pub entries: Vec<(Subloop, SubloopClass)>,
}

impl SubloopClassification {
    pub fn count(&self, class: SubloopClass) -> usize {
        self.entries.iter().filter(|(_, c)| *c == class).count()
    }
}

/// Enumerates all subloops and classifies each as abelian group,
/// nonabelian simple, or other.
pub fn classify_subloops(
    l: &FiniteLoop,
    limit: usize,
) -> Result<SubloopClassification, LoopError> {
    let subs = l.all_subloops(limit)?;
    let entries = subs
        .into_iter()
        .map(|s| {
            let (as_loop, _) = s.to_loop(l);
            let class = if as_loop.is_abelian_group() {
                SubloopClass::AbelianGroup
            } else if as_loop.is_simple() {
                SubloopClass::NonabelianSimple
            } else {
                SubloopClass::Other
            };
            (s, class)
        })
        .collect();
    Ok(SubloopClassification { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extension::{cyclic_group, elementary_abelian_2};

    fn f5() -> FiniteLoop {
        catalog::builtin_loop("F5").unwrap()
    }

    // Independent oracle: naive fixed-point closure under mul and both divisions.
    fn naive_closure(l: &FiniteLoop, seed: &[Elem]) -> Vec<Elem> {
        let mut s: std::collections::BTreeSet<Elem> = seed.iter().copied().collect();
        s.insert(IDENTITY);
        loop {
            let mut next = s.clone();
            for &a in &s {
                for &b in &s {
                    next.insert(l.mul(a, b));
                    next.insert(l.ldiv(a, b));
                    next.insert(l.rdiv(a, b));
                }
            }
            if next.len() == s.len() {
                return s.into_iter().collect();
            }
            s = next;
        }
    }

    #[test]
    fn f5_table_ops() {
        let l = f5();
        // labels: e a b c d = 0 1 2 3 4
        assert_eq!(l.mul(1, 2), 4, "a*b = d");
        assert_eq!(l.ldiv(1, 0), 3, "a\\e = c since a*c = e");
        assert_eq!(l.rdiv(l.mul(1, 2), 1), 3);
        for x in l.elements() {
            assert_eq!(l.mul(0, x), x);
            assert_eq!(l.mul(x, 0), x);
            for y in l.elements() {
                assert_eq!(l.mul(x, l.ldiv(x, y)), y);
                assert_eq!(l.mul(l.rdiv(x, y), y), x);
            }
        }
    }

    #[test]
    fn f5_cube_pattern() {
        let l = f5();
        let cube = |x: Elem| l.mul(l.mul(x, x), x);
        assert_eq!(cube(1), 0, "(aa)a = e");
        assert_eq!(cube(2), 1, "(bb)b = a, not e");
    }

    #[test]
    fn rejects_non_latin_and_missing_identity() {
        assert!(matches!(
            FiniteLoop::from_rows(&[vec![0, 1], vec![0, 1]]),
            Err(LoopError::NotLatin { .. })
        ));
        // Latin square with no identity at 0.
        assert!(matches!(
            FiniteLoop::from_rows(&[vec![1, 0], vec![0, 1]]),
            Err(LoopError::NoIdentity { .. })
        ));
        assert!(matches!(
            FiniteLoop::from_flat(0, vec![]),
            Err(LoopError::Empty)
        ));
    }

    #[test]
    fn generated_subloop_matches_naive_closure() {
        for (_, l) in catalog::corpus_loops(10) {
            for x in l.elements() {
                for y in l.elements() {
                    let fast = l.generated_subloop(&[x, y]);
                    assert_eq!(fast.elements(), naive_closure(&l, &[x, y]).as_slice());
                }
            }
        }
    }

    #[test]
    fn f5_single_generators() {
        let l = f5();
        assert_eq!(l.generated_subloop(&[]).elements(), &[0]);
        let a = l.generated_subloop(&[1]);
        assert_eq!(a.len(), 5, "a generates everything");
        assert!(a.contains(0) && a.contains(1) && a.contains(2));
    }

    #[test]
    fn inner_mappings_on_f5() {
        let l = f5();
        // T_a(b) = (ab)/a = c; same value as a\(ba) on this table.
        assert_eq!(l.apply_inner(InnerGenerator::T { x: 1 }, 2), 3);
        assert_eq!(l.ldiv(1, l.mul(2, 1)), 3);
        // T_e is the identity map.
        for z in l.elements() {
            assert_eq!(l.apply_inner(InnerGenerator::T { x: 0 }, z), z);
        }
    }

    #[test]
    fn inner_mappings_fix_everything_in_abelian_groups() {
        let z6 = cyclic_group(6);
        for g in z6.inner_generators() {
            for z in z6.elements() {
                assert_eq!(z6.apply_inner(g, z), z);
            }
        }
    }

    #[test]
    fn center_matches_commute_associate_oracle() {
        // z is central iff it commutes with everything and associates in
        // every position with every pair.
        for (_, l) in catalog::corpus_loops(16) {
            let naive: Vec<Elem> = l
                .elements()
                .filter(|&z| {
                    l.elements().all(|x| l.mul(z, x) == l.mul(x, z))
                        && l.elements().all(|x| {
                            l.elements().all(|y| {
                                l.mul(z, l.mul(x, y)) == l.mul(l.mul(z, x), y)
                                    && l.mul(x, l.mul(z, y)) == l.mul(l.mul(x, z), y)
                                    && l.mul(x, l.mul(y, z)) == l.mul(l.mul(x, y), z)
                            })
                        })
                })
                .collect();
            assert_eq!(l.center().elements(), naive.as_slice(), "order {}", l.order());
        }
    }

    #[test]
    fn f5_is_simple_with_two_subloops() {
        let l = f5();
        assert!(l.is_simple());
        let subs = l.all_subloops(64).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(l.all_normal_subloops(64).unwrap().len(), 2);
    }

    #[test]
    fn normal_subloop_counts_in_small_groups() {
        let cases: Vec<(FiniteLoop, usize)> = vec![
            (elementary_abelian_2(2), 5),
            (cyclic_group(4), 3),
            (cyclic_group(3), 2),
            (catalog::builtin_loop("S3").unwrap(), 3),
        ];
        for (l, expected) in cases {
            assert_eq!(l.all_normal_subloops(64).unwrap().len(), expected);
        }
    }

    #[test]
    fn normal_closure_in_z4() {
        let z4 = cyclic_group(4);
        assert_eq!(z4.normal_closure(&[2]).elements(), &[0, 2]);
        assert_eq!(z4.normal_closure(&[]).elements(), &[0]);
        assert_eq!(z4.normal_closure(&[1]).len(), 4);
    }

    #[test]
    fn s3_normality() {
        let s3 = catalog::builtin_loop("S3").unwrap();
        let subs = s3.all_subloops(64).unwrap();
        assert_eq!(subs.len(), 6);
        let normal: Vec<usize> = subs
            .iter()
            .filter(|s| s3.is_normal(s))
            .map(|s| s.len())
            .collect();
        assert_eq!(normal, vec![1, 3, 6], "only {{e}}, A3, S3 are normal");
        assert!(!s3.is_simple());
        assert_eq!(s3.center().len(), 1);
    }

    #[test]
    fn quotient_by_trivial_and_whole() {
        let l = f5();
        let (q, pi) = l.quotient(&Subloop::trivial()).unwrap();
        assert!(q.same_table(&l));
        assert!(pi.is_bijective());
        let (q, pi) = l.quotient(&Subloop::whole(&l)).unwrap();
        assert_eq!(q.order(), 1);
        assert_eq!(pi.kernel().len(), 5);
    }

    #[test]
    fn quotient_of_z4() {
        let z4 = cyclic_group(4);
        let n = Subloop::from_elements(&z4, [0, 2]).unwrap();
        let (q, pi) = z4.quotient(&n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(pi.apply(1), pi.apply(3));
        assert_eq!(pi.kernel().elements(), &[0, 2]);
        assert!(z4.quotient(&Subloop::from_elements(&z4, [0]).unwrap()).is_ok());
        // Non-normal input is rejected: use a subset that is not closed.
        assert!(Subloop::from_elements(&z4, [0, 1]).is_err());
    }

    #[test]
    fn power_sets_and_exponent() {
        let z3 = cyclic_group(3);
        assert_eq!(z3.exponent(), Some(3));
        assert_eq!(cyclic_group(4).exponent(), Some(4));
        assert!(!cyclic_group(4).has_exponent(2));
        assert_eq!(f5().power_set(1, 1), vec![1]);
        // In F5, P_3(a) = {(aa)a, a(aa)} = {e, d}.
        assert_eq!(f5().power_set(1, 3), vec![0, 4]);
        assert_eq!(f5().exponent(), None);
    }

    #[test]
    fn power_set_is_pointwise_superadditive() {
        // P_m · P_n ⊆ P_{m+n}
        let l = catalog::builtin_loop("M12").unwrap();
        for x in l.elements().step_by(3) {
            for m in 1..4 {
                for n in 1..4 {
                    let pm = l.power_set(x, m);
                    let pn = l.power_set(x, n);
                    let pmn = l.power_set(x, m + n);
                    for &a in &pm {
                        for &b in &pn {
                            assert!(pmn.contains(&l.mul(a, b)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diassociativity() {
        assert!(cyclic_group(6).is_diassociative());
        assert!(catalog::builtin_loop("S3").unwrap().is_diassociative());
        assert!(catalog::builtin_loop("M12").unwrap().is_diassociative());
        assert!(!f5().is_diassociative());
    }

    #[test]
    fn isomorphism_search_basics() {
        let z4 = cyclic_group(4);
        let k4 = elementary_abelian_2(2);
        assert!(loops_isomorphic(&z4, &k4).is_none());
        assert!(loops_isomorphic(&z4, &cyclic_group(5)).is_none());
        let id = loops_isomorphic(&z4, &z4).unwrap();
        assert!(id.is_bijective());
        // Z4 relabeled by a transposition of 1 and 3 is still Z4.
        let rel = z4.relabel(&[0, 3, 2, 1]).unwrap();
        assert!(loops_isomorphic(&z4, &rel).is_some());
    }

    #[test]
    fn automorphism_counts_of_small_groups() {
        assert_eq!(automorphisms(&cyclic_group(4)).len(), 2);
        assert_eq!(automorphisms(&elementary_abelian_2(2)).len(), 6);
        assert_eq!(automorphisms(&catalog::builtin_loop("S3").unwrap()).len(), 6);
        for map in automorphisms(&elementary_abelian_2(2)) {
            let l = elementary_abelian_2(2);
            assert!(LoopHom::new(l.clone(), l, map).is_ok());
        }
    }

    #[test]
    fn chein_double_of_abelian_is_group() {
        let m = chein_double(&cyclic_group(3)).unwrap();
        assert_eq!(m.order(), 6);
        assert!(m.is_associative());
        assert!(!m.is_commutative(), "inversion twists the double");
        let m2 = chein_double(&cyclic_group(1)).unwrap();
        assert!(loops_isomorphic(&m2, &cyclic_group(2)).is_some());
        assert!(chein_double(&f5()).is_err());
    }

    #[test]
    fn chein_double_of_s3_is_m12() {
        let m12 = chein_double(&catalog::builtin_loop("S3").unwrap()).unwrap();
        assert_eq!(m12.order(), 12);
        assert!(!m12.is_associative());
        assert!(m12.same_table(&catalog::builtin_loop("M12").unwrap()));
    }

    #[test]
    fn classify_subloops_of_steiner_10() {
        let l = catalog::builtin_loop("S10").unwrap();
        let c = classify_subloops(&l, 64).unwrap();
        assert_eq!(c.entries.len(), 23, "1 trivial + 9 pairs + 12 blocks + whole");
        assert_eq!(c.count(SubloopClass::NonabelianSimple), 1);
        assert_eq!(c.count(SubloopClass::AbelianGroup), 22);
        assert!(l.is_simple());
    }

    #[test]
    fn fano_loop_has_sixteen_subloops() {
        let l = catalog::builtin_loop("S8").unwrap();
        let subs = l.all_subloops(64).unwrap();
        assert_eq!(subs.len(), 16);
        let by_len = |k: usize| subs.iter().filter(|s| s.len() == k).count();
        assert_eq!((by_len(1), by_len(2), by_len(4), by_len(8)), (1, 7, 7, 1));
    }

    #[test]
    fn order_limit_is_enforced() {
        let l = catalog::builtin_loop("K28").unwrap();
        assert!(matches!(
            l.all_subloops(16),
            Err(LoopError::OrderLimit { order: 28, limit: 16 })
        ));
    }

    #[test]
    fn subloop_to_loop_roundtrip() {
        let s3 = catalog::builtin_loop("S3").unwrap();
        for sub in s3.all_subloops(64).unwrap() {
            let (l, embed) = sub.to_loop(&s3);
            l.validate().unwrap();
            for i in l.elements() {
                for j in l.elements() {
                    assert_eq!(embed[l.mul(i, j)], s3.mul(embed[i], embed[j]));
                }
            }
        }
    }

    #[test]
    fn hom_validation() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let pi = LoopHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(pi.kernel().elements(), &[0, 2]);
        assert_eq!(pi.image().len(), 2);
        assert!(LoopHom::new(z4.clone(), z2.clone(), vec![0, 1, 1, 0]).is_err());
        assert!(LoopHom::new(z4, z2, vec![0, 1]).is_err());
    }
}
