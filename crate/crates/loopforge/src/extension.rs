//! Central extensions of loops by abelian groups, driven by cocycle tables.
//!
//! Given an abelian group Z, a loop F and a map f: F×F → Z vanishing on the
//! identity row and column, the extension multiplies pairs by
//! (a,x)·(b,y) = (a+b+f(x,y), xy) on Z×F.  The embedded copy Z×{e} is always
//! central and the quotient by it recovers F; both facts are re-verified on
//! every construction.

use thiserror::Error;

use crate::loops::{self, Elem, FiniteLoop, LoopError, LoopHom, Subloop, IDENTITY};

/// Cyclic group of order n, written additively.
pub fn cyclic_group(n: usize) -> FiniteLoop {
    assert!(n >= 1);
    let mut table = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = (i + j) % n;
        }
    }
    FiniteLoop::from_flat(n, table).expect("cyclic tables are loops")
}

/// Elementary abelian 2-group of order 2^k (k = 2 gives the Klein four-group).
pub fn elementary_abelian_2(k: u32) -> FiniteLoop {
    let n = 1usize << k;
    let mut table = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = i ^ j;
        }
    }
    FiniteLoop::from_flat(n, table).expect("xor tables are loops")
}

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error("coefficient loop is not an abelian group")]
    CoefficientsNotAbelian,
    #[error("cocycle table has {found} entries, expected {expected}")]
    BadTableSize { expected: usize, found: usize },
    #[error("cocycle value {value} at ({x},{y}) is out of range for |Z| = {z_order}")]
    ValueOutOfRange {
        x: Elem,
        y: Elem,
        value: usize,
        z_order: usize,
    },
    #[error("cocycle is not normalized: f({x},{y}) must be 0 on the identity row and column")]
    NotNormalized { x: Elem, y: Elem },
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// Structural report from [`Cocycle::diagnostics`].
#[derive(Debug, Clone)]
pub struct CocycleDiagnostics {
    pub valid: bool,
    pub issues: Vec<String>,
}

/// A normalized cocycle f: F×F → Z with Z an abelian group.
#[derive(Clone)]
pub struct Cocycle {
    z: FiniteLoop,
    base: FiniteLoop,
    values: Vec<Elem>,
}

impl Cocycle {
    /// Wraps a full |F|×|F| value table, validating normalization.
    pub fn new(z: FiniteLoop, base: FiniteLoop, values: Vec<Elem>) -> Result<Self, ExtensionError> {
        let c = Cocycle { z, base, values };
        let d = c.diagnostics();
        if !d.valid {
            // Re-derive the first issue as a typed error.
            return Err(c.first_error());
        }
        Ok(c)
    }

    /// Builds from sparse (x, y, value) entries; missing entries are 0.
    /// With `symmetric`, each entry also sets the transposed position.
    pub fn from_entries(
        z: FiniteLoop,
        base: FiniteLoop,
        entries: &[(Elem, Elem, Elem)],
        symmetric: bool,
    ) -> Result<Self, ExtensionError> {
        let n = base.order();
        let mut values = vec![0; n * n];
        for &(x, y, v) in entries {
            if x >= n || y >= n {
                return Err(ExtensionError::ValueOutOfRange {
                    x,
                    y,
                    value: v,
                    z_order: z.order(),
                });
            }
            values[x * n + y] = v;
            if symmetric {
                values[y * n + x] = v;
            }
        }
        Cocycle::new(z, base, values)
    }

    fn first_error(&self) -> ExtensionError {
        if !self.z.is_abelian_group() {
            return ExtensionError::CoefficientsNotAbelian;
        }
        let n = self.base.order();
        if self.values.len() != n * n {
            return ExtensionError::BadTableSize {
                expected: n * n,
                found: self.values.len(),
            };
        }
        for x in 0..n {
            for y in 0..n {
                let v = self.values[x * n + y];
                if v >= self.z.order() {
                    return ExtensionError::ValueOutOfRange {
                        x,
                        y,
                        value: v,
                        z_order: self.z.order(),
                    };
                }
                if (x == IDENTITY || y == IDENTITY) && v != 0 {
                    return ExtensionError::NotNormalized { x, y };
                }
            }
        }
        unreachable!("diagnostics reported an issue but none was found")
    }

    /// Non-failing validation; lists every problem found.
    pub fn diagnostics(&self) -> CocycleDiagnostics {
        let mut issues = Vec::new();
        if !self.z.is_abelian_group() {
            issues.push("coefficient loop is not an abelian group".to_string());
        }
        let n = self.base.order();
        if self.values.len() != n * n {
            issues.push(format!(
                "value table has {} entries, expected {}",
                self.values.len(),
                n * n
            ));
        } else {
            for x in 0..n {
                for y in 0..n {
                    let v = self.values[x * n + y];
                    if v >= self.z.order() {
                        issues.push(format!("f({x},{y}) = {v} is outside Z"));
                    } else if (x == IDENTITY || y == IDENTITY) && v != 0 {
                        issues.push(format!("f({x},{y}) = {v} breaks normalization"));
                    }
                }
            }
        }
        CocycleDiagnostics {
            valid: issues.is_empty(),
            issues,
        }
    }

    pub fn z_group(&self) -> &FiniteLoop {
        &self.z
    }

    pub fn base(&self) -> &FiniteLoop {
        &self.base
    }

    #[inline]
    pub fn value(&self, x: Elem, y: Elem) -> Elem {
        self.values[x * self.base.order() + y]
    }

    /// True when f(x,y) = f(y,x) everywhere.
    pub fn is_symmetric(&self) -> bool {
        let n = self.base.order();
        (0..n).all(|x| (x..n).all(|y| self.values[x * n + y] == self.values[y * n + x]))
    }

    /// Nonzero entries as (x, y, value) triples in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(Elem, Elem, Elem)> {
        let n = self.base.order();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let v = self.values[x * n + y];
                if v != 0 {
                    out.push((x, y, v));
                }
            }
        }
        out
    }
}

/// A constructed central extension: the total loop together with the
/// central embedding of Z and the projection back onto the base.
pub struct CentralExtension {
    pub total: FiniteLoop,
    pub embed_center: LoopHom,
    pub onto_base: LoopHom,
}

impl CentralExtension {
    /// The embedded copy Z×{e} as a subloop of the total loop.
    pub fn embedded_center(&self) -> Subloop {
        self.embed_center.image()
    }
}

/// Builds the central extension of `c.base()` by `c.z_group()` along `c`.
///
/// Elements are pairs (a, x) encoded as a·|F| + x.  Construction fails only
/// on size overflow; centrality of Z×{e} and the isomorphism of the quotient
/// with the base are asserted, since a normalized cocycle guarantees both.
pub fn central_extension(c: &Cocycle) -> Result<CentralExtension, ExtensionError> {
    let zn = c.z_group().order();
    let fn_ = c.base().order();
    let n = zn * fn_;
    let z = c.z_group();
    let f = c.base();
    let mut table = vec![0; n * n];
    for a in 0..zn {
        for x in 0..fn_ {
            let row = a * fn_ + x;
            for b in 0..zn {
                for y in 0..fn_ {
                    let coef = z.mul(z.mul(a, b), c.value(x, y));
                    table[row * n + (b * fn_ + y)] = coef * fn_ + f.mul(x, y);
                }
            }
        }
    }
    let mut total = FiniteLoop::from_flat(n, table)?;
    if f.labels().is_some() || z.labels().is_some() {
        let labels = (0..n)
            .map(|i| format!("({},{})", z.label(i / fn_), f.label(i % fn_)))
            .collect();
        total = total.with_labels(labels)?;
    }

    let embed = LoopHom::new(z.clone(), total.clone(), (0..zn).map(|a| a * fn_).collect())?;
    for a in 0..zn {
        assert!(
            total.is_central_element(a * fn_),
            "embedded coefficient group must be central"
        );
    }
    let onto_base = LoopHom::new(total.clone(), f.clone(), (0..n).map(|i| i % fn_).collect())?;

    // The quotient by the embedded Z must recover the base, up to isomorphism.
    let kernel = embed.image();
    let (q, _) = total.quotient(&kernel)?;
    assert!(
        loops::loops_isomorphic(&q, f).is_some(),
        "quotient by the embedded centre must be the base loop"
    );

    Ok(CentralExtension {
        total,
        embed_center: embed,
        onto_base,
    })
}
