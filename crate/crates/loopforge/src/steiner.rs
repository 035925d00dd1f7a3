//! Steiner triple systems, their loops, Pasch configurations, subsystem
//! structure, and orientations.
//!
//! A Steiner triple system on n points partitions all unordered point pairs
//! into 3-element blocks.  Adjoining an identity with x·x = e and
//! x·y = third block point yields a *Steiner loop*: a commutative loop
//! satisfying x(xy) = y.  Orienting every block cyclically produces a
//! Z₂-valued cocycle over that loop; the resulting central extensions are
//! the *oriented Steiner loops*, which have exponent 2 or 4 depending on
//! the cocycle diagonal.

use std::collections::HashSet;

use thiserror::Error;

use crate::extension::{central_extension, cyclic_group, Cocycle, ExtensionError};
use crate::loops::{loops_isomorphic, Elem, FiniteLoop, LoopError, IDENTITY};

const NO_THIRD: usize = usize::MAX;

#[derive(Debug, Error)]
pub enum SteinerError {
    #[error("point {point} out of range for {n} points")]
    BadPoint { point: usize, n: usize },
    #[error("block {index} has a repeated point")]
    RepeatedPoint { index: usize },
    #[error("pair {{{x},{y}}} lies in more than one block")]
    PairCoveredTwice { x: usize, y: usize },
    #[error("pair {{{x},{y}}} lies in no block")]
    PairUncovered { x: usize, y: usize },
    #[error("expected {n} point labels, found {found}")]
    LabelCount { n: usize, found: usize },
    #[error("loop is not a Steiner loop")]
    NotSteinerLoop,
    #[error("block {index}: cyclic order is not a permutation of the block")]
    BadOrientation { index: usize },
    #[error("expected one cyclic order per block ({blocks}), found {found}")]
    OrientationCount { blocks: usize, found: usize },
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// A Steiner triple system: every pair of distinct points lies in exactly
/// one block.
#[derive(Clone)]
pub struct Sts {
    n: usize,
    blocks: Vec<[usize; 3]>,
    /// third[x·n + y] = the third point of the block through {x, y}.
    third: Vec<usize>,
    /// block_of[x·n + y] = index into `blocks` of the block through {x, y}.
    block_of: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Sts {
    /// Validates the exactly-once pair cover and builds lookup tables.
    /// Blocks are stored sorted (within each block and as a list).
    pub fn from_blocks(n: usize, blocks: Vec<[usize; 3]>) -> Result<Self, SteinerError> {
        let mut sorted: Vec<[usize; 3]> = Vec::with_capacity(blocks.len());
        for (index, b) in blocks.iter().enumerate() {
            let mut b = *b;
            b.sort_unstable();
            if b[0] == b[1] || b[1] == b[2] {
                return Err(SteinerError::RepeatedPoint { index });
            }
            for &p in &b {
                if p >= n {
                    return Err(SteinerError::BadPoint { point: p, n });
                }
            }
            sorted.push(b);
        }
        sorted.sort_unstable();
        let mut third = vec![NO_THIRD; n * n];
        let mut block_of = vec![NO_THIRD; n * n];
        for (bi, b) in sorted.iter().enumerate() {
            for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                let (x, y, z) = (b[i], b[j], b[k]);
                if third[x * n + y] != NO_THIRD {
                    return Err(SteinerError::PairCoveredTwice { x, y });
                }
                third[x * n + y] = z;
                third[y * n + x] = z;
                block_of[x * n + y] = bi;
                block_of[y * n + x] = bi;
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if third[x * n + y] == NO_THIRD {
                    return Err(SteinerError::PairUncovered { x, y });
                }
            }
        }
        Ok(Sts {
            n,
            blocks: sorted,
            third,
            block_of,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, SteinerError> {
        if labels.len() != self.n {
            return Err(SteinerError::LabelCount {
                n: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[[usize; 3]] {
        &self.blocks
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, p: usize) -> String {
        match &self.labels {
            Some(l) => l[p].clone(),
            None => p.to_string(),
        }
    }

    /// The third point of the block through two distinct points.
    #[inline]
    pub fn third(&self, x: usize, y: usize) -> usize {
        debug_assert_ne!(x, y);
        self.third[x * self.n + y]
    }

    /// Index of the block through two distinct points.
    #[inline]
    pub fn block_index(&self, x: usize, y: usize) -> usize {
        debug_assert_ne!(x, y);
        self.block_of[x * self.n + y]
    }

    pub fn is_block(&self, x: usize, y: usize, z: usize) -> bool {
        x != y && z != x && z != y && self.third(x, y) == z
    }

    /// Smallest point set containing `points` and closed under third points.
    pub fn closure(&self, points: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.n];
        let mut out: Vec<usize> = Vec::new();
        for &p in points {
            assert!(p < self.n, "point out of range");
            if !in_set[p] {
                in_set[p] = true;
                out.push(p);
            }
        }
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for j in 0..i {
                let t = self.third(out[j], x);
                if !in_set[t] {
                    in_set[t] = true;
                    out.push(t);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subsystem on a closed point set, reindexed to 0..|points|−1.
    pub fn induced(&self, points: &[usize]) -> Result<Self, SteinerError> {
        let mut index = vec![NO_THIRD; self.n];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let mut blocks = Vec::new();
        for b in &self.blocks {
            if b.iter().all(|&p| index[p] != NO_THIRD) {
                blocks.push([index[b[0]], index[b[1]], index[b[2]]]);
            }
        }
        let induced = Sts::from_blocks(points.len(), blocks)?;
        match &self.labels {
            Some(l) => induced.with_labels(points.iter().map(|&p| l[p].clone()).collect()),
            None => Ok(induced),
        }
    }

    /// All Pasch configurations: quadruples of distinct blocks of shape
    /// {a,b,c}, {a,d,f}, {g,b,d}, {g,c,f} on six distinct points, reported
    /// as sorted quadruples of block indices.
    ///
    /// The search runs over ordered pairs of blocks meeting in one point and
    /// completes the other two blocks by third-point lookups.
    pub fn pasch_configurations(&self) -> Vec<[usize; 4]> {
        let mut found: HashSet<[usize; 4]> = HashSet::new();
        let nb = self.blocks.len();
        for b1 in 0..nb {
            for b2 in 0..nb {
                if b1 == b2 {
                    continue;
                }
                let block1 = self.blocks[b1];
                let block2 = self.blocks[b2];
                let common: Vec<usize> = block1
                    .iter()
                    .copied()
                    .filter(|p| block2.contains(p))
                    .collect();
                if common.len() != 1 {
                    continue;
                }
                let a = common[0];
                let [b, c] = two_others(&block1, a);
                let [d, f] = two_others(&block2, a);
                // Complete {?, b, d} and {?, c, f}; a Pasch configuration
                // needs both completions to be the same sixth point g.
                for (d, f) in [(d, f), (f, d)] {
                    let g = self.third(b, d);
                    if g == a || g == c || g == f {
                        continue;
                    }
                    if self.third(c, f) != g {
                        continue;
                    }
                    let b3 = self.block_index(b, d);
                    let b4 = self.block_index(c, f);
                    let mut quad = [b1, b2, b3, b4];
                    quad.sort_unstable();
                    found.insert(quad);
                }
            }
        }
        let mut out: Vec<[usize; 4]> = found.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn is_anti_pasch(&self) -> bool {
        self.pasch_configurations().is_empty()
    }

    /// A system is minimal when every proper subsystem is at most one block,
    /// i.e. every 4-point subset closes to the whole point set.
    pub fn is_minimal(&self) -> bool {
        if self.n <= 3 {
            return true;
        }
        let mut quad = [0usize; 4];
        for a in 0..self.n {
            quad[0] = a;
            for b in a + 1..self.n {
                quad[1] = b;
                for c in b + 1..self.n {
                    quad[2] = c;
                    for d in c + 1..self.n {
                        quad[3] = d;
                        if self.closure(&quad).len() != self.n {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// A Hall system: every non-collinear triple generates a 9-point
    /// subsystem (necessarily the affine plane of order 3).
    pub fn is_hall(&self) -> bool {
        let mut nine_point: HashSet<Vec<usize>> = HashSet::new();
        let mut saw_noncollinear = false;
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if self.is_block(a, b, c) {
                        continue;
                    }
                    saw_noncollinear = true;
                    let cl = self.closure(&[a, b, c]);
                    if cl.len() != 9 {
                        return false;
                    }
                    nine_point.insert(cl);
                }
            }
        }
        if !saw_noncollinear {
            return false;
        }
        let canonical = affine_triple_system();
        nine_point.iter().all(|cl| {
            let sub = self.induced(cl).expect("closures are closed");
            sts_isomorphic(&sub, &canonical)
        })
    }
}

fn two_others(block: &[usize; 3], skip: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut i = 0;
    for &p in block {
        if p != skip {
            out[i] = p;
            i += 1;
        }
    }
    out
}

/// The 12-line affine plane of order 3 (rows, columns, diagonals and
/// anti-diagonals of a 3×3 grid): the unique 9-point system.
fn affine_triple_system() -> Sts {
    let mut blocks = Vec::new();
    for i in 0..3 {
        blocks.push([3 * i, 3 * i + 1, 3 * i + 2]);
        blocks.push([i, i + 3, i + 6]);
    }
    for s in 0..3usize {
        // Lines of slope 1 and slope 2 through (0, s): cell (r, c) = 3r + c.
        blocks.push([s, 3 + (s + 1) % 3, 6 + (s + 2) % 3]);
        blocks.push([s, 3 + (s + 2) % 3, 6 + (s + 4) % 3]);
    }
    Sts::from_blocks(9, blocks).expect("affine plane is a valid system")
}

/// Isomorphism of systems, via their loops: bijections of points preserving
/// blocks correspond exactly to loop isomorphisms fixing the identity.
pub fn sts_isomorphic(a: &Sts, b: &Sts) -> bool {
    a.n == b.n
        && a.blocks.len() == b.blocks.len()
        && loops_isomorphic(&steiner_loop(a), &steiner_loop(b)).is_some()
}

/// The Steiner loop of a system: identity adjoined as element 0, point p
/// becomes element p+1, with x·x = e and x·y = third point.
pub fn steiner_loop(s: &Sts) -> FiniteLoop {
    let n = s.n + 1;
    let mut table = vec![0; n * n];
    for x in 0..n {
        table[x] = x;
        table[x * n] = x;
    }
    for x in 1..n {
        for y in 1..n {
            table[x * n + y] = if x == y { 0 } else { s.third(x - 1, y - 1) + 1 };
        }
    }
    let l = FiniteLoop::from_flat(n, table).expect("pair cover gives a Latin square");
    match &s.labels {
        Some(pts) => {
            let mut labels = vec!["e".to_string()];
            labels.extend(pts.iter().cloned());
            l.with_labels(labels).expect("one label per element")
        }
        None => l,
    }
}

/// The idempotent Steiner quasigroup table of a system (no identity):
/// x∘x = x and x∘y = third point, returned as a flat n×n row-major table.
pub fn steiner_quasigroup(s: &Sts) -> Vec<usize> {
    let n = s.n;
    let mut table = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = if x == y { x } else { s.third(x, y) };
        }
    }
    table
}

/// Commutative and satisfies x(xy) = y.  (x·x = e follows.)
pub fn is_steiner_loop(l: &FiniteLoop) -> bool {
    if !l.is_commutative() {
        return false;
    }
    for x in l.elements() {
        for y in l.elements() {
            if l.mul(x, l.mul(x, y)) != y {
                return false;
            }
        }
    }
    true
}

/// Reads the system back off a Steiner loop: point p = element p+1, blocks
/// {x, y, xy} over distinct nonidentity x, y.
pub fn loop_to_sts(l: &FiniteLoop) -> Result<Sts, SteinerError> {
    if !is_steiner_loop(l) {
        return Err(SteinerError::NotSteinerLoop);
    }
    let n = l.order() - 1;
    let mut blocks = Vec::new();
    for x in 1..l.order() {
        for y in x + 1..l.order() {
            let z = l.mul(x, y);
            if z > y {
                blocks.push([x - 1, y - 1, z - 1]);
            }
        }
    }
    let s = Sts::from_blocks(n, blocks)?;
    match l.labels() {
        Some(labels) => s.with_labels(labels[1..].to_vec()),
        None => Ok(s),
    }
}

// ---------------------------------------------------------------------------
// Orientations
// ---------------------------------------------------------------------------

/// A system with a cyclic order on each block and the derived orientation
/// function d: d(x,y) = 0 exactly when (x,y,·) follows the block's cyclic
/// order, so d(x,y) + d(y,x) = 1 for all distinct points.
#[derive(Clone)]
pub struct OrientedSts {
    base: Sts,
    orders: Vec<[usize; 3]>,
    d: Vec<u8>,
}

impl OrientedSts {
    /// `orders[i]` must be a permutation of block i; rotations of the same
    /// cyclic order are equivalent.
    pub fn new(base: Sts, orders: Vec<[usize; 3]>) -> Result<Self, SteinerError> {
        if orders.len() != base.blocks.len() {
            return Err(SteinerError::OrientationCount {
                blocks: base.blocks.len(),
                found: orders.len(),
            });
        }
        let n = base.n;
        let mut d = vec![0u8; n * n];
        for (index, ord) in orders.iter().enumerate() {
            let mut sorted = *ord;
            sorted.sort_unstable();
            if sorted != base.blocks[index] {
                return Err(SteinerError::BadOrientation { index });
            }
            let [x, y, z] = *ord;
            for (u, v) in [(x, y), (y, z), (z, x)] {
                d[u * n + v] = 0;
                d[v * n + u] = 1;
            }
        }
        Ok(OrientedSts { base, orders, d })
    }

    /// Orientation from one bit per block: false keeps the sorted block
    /// (a,b,c), true flips it to (a,c,b).
    pub fn from_bits(base: Sts, bits: &[bool]) -> Result<Self, SteinerError> {
        if bits.len() != base.blocks.len() {
            return Err(SteinerError::OrientationCount {
                blocks: base.blocks.len(),
                found: bits.len(),
            });
        }
        let orders = base
            .blocks
            .iter()
            .zip(bits)
            .map(|(&[a, b, c], &flip)| if flip { [a, c, b] } else { [a, b, c] })
            .collect();
        Self::new(base, orders)
    }

    pub fn base(&self) -> &Sts {
        &self.base
    }

    pub fn orders(&self) -> &[[usize; 3]] {
        &self.orders
    }

    /// d on distinct points.
    #[inline]
    pub fn d(&self, x: usize, y: usize) -> u8 {
        debug_assert_ne!(x, y);
        self.d[x * self.base.n + y]
    }
}

/// The Z₂ cocycle of an orientation over the base's Steiner loop:
/// f(e,·) = f(·,e) = 0, f(x,x) = diag off the identity, and f(x,y) = d(x,y)
/// for distinct nonidentity x, y.
pub fn oriented_cocycle(o: &OrientedSts, diag: u8) -> Cocycle {
    assert!(diag <= 1, "diagonal value is a Z2 element");
    let l = steiner_loop(&o.base);
    let n = l.order();
    let mut values = vec![0; n * n];
    for x in 1..n {
        for y in 1..n {
            values[x * n + y] = if x == y {
                diag as Elem
            } else {
                o.d(x - 1, y - 1) as Elem
            };
        }
    }
    Cocycle::new(cyclic_group(2), l, values).expect("orientation cocycles are normalized")
}

/// The oriented Steiner loop of an orientation: the central extension of
/// the base's Steiner loop by the orientation cocycle.  Order 2(n+1);
/// exponent 2 when diag = 0 and 4 when diag = 1; never commutative once
/// the base has a block.
pub fn oriented_steiner_loop(o: &OrientedSts, diag: u8) -> FiniteLoop {
    central_extension(&oriented_cocycle(o, diag))
        .expect("orientation cocycles are valid")
        .total
}

/// The five-way disjunction deciding, over an anti-Pasch base, whether every
/// lift of the base triple (x, y, z) associates in the oriented loop with
/// the given diagonal: some coordinate is the identity; x = y ≠ e with
/// diag 1; y = z ≠ e with diag 1; x = z; or {x, y, z} is a block.
///
/// Arguments are Steiner-loop elements (0 = identity, point p = p+1).
pub fn lifted_assoc_predicate(o: &OrientedSts, diag: u8, x: Elem, y: Elem, z: Elem) -> bool {
    if x == IDENTITY || y == IDENTITY || z == IDENTITY {
        return true;
    }
    if x == y && diag == 1 {
        return true;
    }
    if y == z && diag == 1 {
        return true;
    }
    if x == z {
        return true;
    }
    x != y && y != z && o.base.is_block(x - 1, y - 1, z - 1)
}
