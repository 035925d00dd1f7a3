//! Direct products, subdirect products and their structure.
//!
//! A subloop A ≤ X₁×…×Xₖ is *subdirect* when every projection pᵢ(A) is all
//! of Xᵢ.  For two factors, subdirect products are classified by Goursat
//! triples (N₁, N₂, φ): two normal subloops with isomorphic quotients and an
//! isomorphism between them; the subdirect product is the lifted graph of φ.

use std::collections::HashSet;

use thiserror::Error;

use crate::loops::{Elem, FiniteLoop, LoopError, LoopHom, Subloop, IDENTITY};

/// Default ceiling on the order of a materialized product loop.
pub const DEFAULT_MAX_PRODUCT_ORDER: usize = 1024;

/// Default ceiling on loop order for subloop enumeration.
pub const DEFAULT_MAX_ENUM_ORDER: usize = 256;

#[derive(Debug, Error)]
pub enum SubdirectError {
    #[error("products need at least one factor")]
    NoFactors,
    #[error("product order {order} exceeds the limit {limit}")]
    ProductTooLarge { order: usize, limit: usize },
    #[error("projection to factor {factor} is not surjective; not a subdirect product")]
    NotSubdirect { factor: usize },
    #[error("operation requires exactly two factors, found {found}")]
    NotTwoFactors { found: usize },
    #[error("factor index {index} out of range for arity {arity}")]
    BadFactor { index: usize, arity: usize },
    #[error("index classes must partition 0..{arity}")]
    BadPartition { arity: usize },
    #[error("map {index} is not an automorphism of the factor")]
    NotAutomorphism { index: usize },
    #[error("subloop {n} of factor {factor} is not normal")]
    FactorSubloopNotNormal { factor: usize, n: String },
    #[error("map is not an isomorphism between the two quotients")]
    NotQuotientIso,
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// A direct product of loops with its mixed-radix element codec.
///
/// The underlying Cayley table is materialized, so the product can be used
/// anywhere a plain loop is expected; `encode`/`decode` translate between
/// product elements and coordinate tuples.  The first factor is the most
/// significant digit.
pub struct ProductLoop {
    factors: Vec<FiniteLoop>,
    strides: Vec<usize>,
    underlying: FiniteLoop,
}

impl ProductLoop {
    pub fn new(factors: Vec<FiniteLoop>) -> Result<Self, SubdirectError> {
        ProductLoop::with_limit(factors, DEFAULT_MAX_PRODUCT_ORDER)
    }

    pub fn with_limit(factors: Vec<FiniteLoop>, limit: usize) -> Result<Self, SubdirectError> {
        if factors.is_empty() {
            return Err(SubdirectError::NoFactors);
        }
        let mut order = 1usize;
        for f in &factors {
            order = order
                .checked_mul(f.order())
                .filter(|&o| o <= limit)
                .ok_or(SubdirectError::ProductTooLarge {
                    order: usize::MAX,
                    limit,
                })?;
        }
        if order > limit {
            return Err(SubdirectError::ProductTooLarge { order, limit });
        }
        let k = factors.len();
        let mut strides = vec![1; k];
        for i in (0..k - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].order();
        }
        let mut table = vec![0; order * order];
        let mut xs = vec![0; k];
        let mut ys = vec![0; k];
        for x in 0..order {
            Self::decode_into(&strides, &factors, x, &mut xs);
            for y in 0..order {
                Self::decode_into(&strides, &factors, y, &mut ys);
                let mut v = 0;
                for i in 0..k {
                    v += factors[i].mul(xs[i], ys[i]) * strides[i];
                }
                table[x * order + y] = v;
            }
        }
        let mut underlying = FiniteLoop::from_flat(order, table)?;
        if factors.iter().any(|f| f.labels().is_some()) {
            let labels = (0..order)
                .map(|x| {
                    let mut t = vec![0; k];
                    Self::decode_into(&strides, &factors, x, &mut t);
                    let parts: Vec<String> =
                        (0..k).map(|i| factors[i].label(t[i])).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            underlying = underlying.with_labels(labels)?;
        }
        Ok(ProductLoop {
            factors,
            strides,
            underlying,
        })
    }

    fn decode_into(strides: &[usize], factors: &[FiniteLoop], x: usize, out: &mut [usize]) {
        for i in 0..factors.len() {
            out[i] = (x / strides[i]) % factors[i].order();
        }
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &FiniteLoop {
        &self.factors[i]
    }

    pub fn factors(&self) -> &[FiniteLoop] {
        &self.factors
    }

    /// The product as a plain loop.
    pub fn underlying(&self) -> &FiniteLoop {
        &self.underlying
    }

    pub fn order(&self) -> usize {
        self.underlying.order()
    }

    pub fn encode(&self, tuple: &[Elem]) -> Elem {
        debug_assert_eq!(tuple.len(), self.arity());
        tuple
            .iter()
            .zip(&self.strides)
            .map(|(&x, &s)| x * s)
            .sum()
    }

    pub fn decode(&self, x: Elem) -> Vec<Elem> {
        let mut out = vec![0; self.arity()];
        Self::decode_into(&self.strides, &self.factors, x, &mut out);
        out
    }

    #[inline]
    pub fn coordinate(&self, x: Elem, i: usize) -> Elem {
        (x / self.strides[i]) % self.factors[i].order()
    }

    /// Indices where the element differs from the identity.
    pub fn support(&self, x: Elem) -> Vec<usize> {
        (0..self.arity())
            .filter(|&i| self.coordinate(x, i) != IDENTITY)
            .collect()
    }

    /// Projection p_J(A) into the product of the factors named by `indices`.
    ///
    /// Returns the target product and the image subloop inside it.
    pub fn project(
        &self,
        a: &Subloop,
        indices: &[usize],
    ) -> Result<(ProductLoop, Subloop), SubdirectError> {
        for &i in indices {
            if i >= self.arity() {
                return Err(SubdirectError::BadFactor {
                    index: i,
                    arity: self.arity(),
                });
            }
        }
        let target = ProductLoop::new(indices.iter().map(|&i| self.factors[i].clone()).collect())?;
        let mut image: Vec<Elem> = a
            .elements()
            .iter()
            .map(|&x| {
                let t: Vec<Elem> = indices.iter().map(|&i| self.coordinate(x, i)).collect();
                target.encode(&t)
            })
            .collect();
        image.sort_unstable();
        image.dedup();
        let sub = Subloop::from_elements(target.underlying(), image)
            .expect("projection of a subloop is a subloop");
        Ok((target, sub))
    }

    /// Projection to a single factor, as a subloop of that factor.
    pub fn project_to_factor(&self, a: &Subloop, i: usize) -> Result<Subloop, SubdirectError> {
        if i >= self.arity() {
            return Err(SubdirectError::BadFactor {
                index: i,
                arity: self.arity(),
            });
        }
        let mut image: Vec<Elem> = a.elements().iter().map(|&x| self.coordinate(x, i)).collect();
        image.sort_unstable();
        image.dedup();
        Ok(Subloop::from_elements(&self.factors[i], image)
            .expect("projection of a subloop is a subloop"))
    }

    /// Restriction A[J]: elements of A supported inside `indices`.
    pub fn restrict(&self, a: &Subloop, indices: &[usize]) -> Subloop {
        let keep: Vec<Elem> = a
            .elements()
            .iter()
            .copied()
            .filter(|&x| self.support(x).iter().all(|i| indices.contains(i)))
            .collect();
        Subloop::from_elements(&self.underlying, keep)
            .expect("restriction of a subloop is a subloop")
    }

    /// A[i]_i: the restriction to coordinate i, viewed inside factor i.
    pub fn restriction_in_factor(&self, a: &Subloop, i: usize) -> Result<Subloop, SubdirectError> {
        let r = self.restrict(a, &[i]);
        self.project_to_factor(&r, i)
    }

    /// True when A has trivial restriction in every coordinate.
    pub fn is_flat(&self, a: &Subloop) -> bool {
        a.elements()
            .iter()
            .all(|&x| x == IDENTITY || self.support(x).len() >= 2)
    }

    /// True when every projection of A is the full factor.
    pub fn is_subdirect(&self, a: &Subloop) -> bool {
        (0..self.arity()).all(|i| {
            let mut seen = vec![false; self.factors[i].order()];
            let mut count = 0;
            for &x in a.elements() {
                let c = self.coordinate(x, i);
                if !seen[c] {
                    seen[c] = true;
                    count += 1;
                }
            }
            count == self.factors[i].order()
        })
    }
}

/// A subloop of a product that projects onto every factor.
pub struct SubdirectProduct<'a> {
    product: &'a ProductLoop,
    carrier: Subloop,
}

impl<'a> SubdirectProduct<'a> {
    pub fn new(product: &'a ProductLoop, carrier: Subloop) -> Result<Self, SubdirectError> {
        for i in 0..product.arity() {
            let p = product.project_to_factor(&carrier, i)?;
            if p.len() != product.factor(i).order() {
                return Err(SubdirectError::NotSubdirect { factor: i });
            }
        }
        Ok(SubdirectProduct { product, carrier })
    }

    pub fn product(&self) -> &'a ProductLoop {
        self.product
    }

    pub fn carrier(&self) -> &Subloop {
        &self.carrier
    }

    pub fn is_flat(&self) -> bool {
        self.product.is_flat(&self.carrier)
    }
}

/// Convenience direct-product constructor over borrowed factors.
pub fn direct_product(factors: &[&FiniteLoop]) -> Result<ProductLoop, SubdirectError> {
    ProductLoop::new(factors.iter().map(|f| (*f).clone()).collect())
}

// ---------------------------------------------------------------------------
// Goursat decomposition for two factors
// ---------------------------------------------------------------------------

/// Decomposition data of a subdirect product A ≤ X₁×X₂.
///
/// Nᵢ = A[i]_i is normal in Xᵢ, and φ is the induced isomorphism
/// X₁/N₁ → X₂/N₂.  Quotient elements are cosets represented by their least
/// member, and `proj1`, `proj2` are the projections of the factors onto the
/// quotients.
pub struct GoursatData {
    pub n1: Subloop,
    pub n2: Subloop,
    pub quotient1: FiniteLoop,
    pub quotient2: FiniteLoop,
    pub proj1: LoopHom,
    pub proj2: LoopHom,
    pub phi: LoopHom,
}

/// Decomposes a two-factor subdirect product into its Goursat data.
pub fn goursat_decompose(sd: &SubdirectProduct<'_>) -> Result<GoursatData, SubdirectError> {
    let product = sd.product();
    if product.arity() != 2 {
        return Err(SubdirectError::NotTwoFactors {
            found: product.arity(),
        });
    }
    let x1 = product.factor(0);
    let x2 = product.factor(1);
    let n1 = product.restriction_in_factor(sd.carrier(), 0)?;
    let n2 = product.restriction_in_factor(sd.carrier(), 1)?;
    // Restrictions of subdirect products are normal in their factor.
    assert!(x1.is_normal(&n1), "A[1]_1 must be normal in X1");
    assert!(x2.is_normal(&n2), "A[2]_2 must be normal in X2");
    let (quotient1, proj1) = x1.quotient(&n1)?;
    let (quotient2, proj2) = x2.quotient(&n2)?;

    let mut map: Vec<Option<Elem>> = vec![None; quotient1.order()];
    for &p in sd.carrier().elements() {
        let (a, b) = (product.coordinate(p, 0), product.coordinate(p, 1));
        let (qa, qb) = (proj1.apply(a), proj2.apply(b));
        match map[qa] {
            None => map[qa] = Some(qb),
            // Well-definedness is Goursat's lemma; a failure here means the
            // carrier was not a subloop.
            Some(prev) => assert!(prev == qb, "induced quotient map is not well defined"),
        }
    }
    let map: Vec<Elem> = map
        .into_iter()
        .map(|m| m.expect("subdirectness hits every coset"))
        .collect();
    let phi = LoopHom::new(quotient1.clone(), quotient2.clone(), map)?;
    assert!(phi.is_bijective(), "induced quotient map must be bijective");
    Ok(GoursatData {
        n1,
        n2,
        quotient1,
        quotient2,
        proj1,
        proj2,
        phi,
    })
}

/// Lifted isomorphism graph: the subdirect product {(x₁,x₂) : φ(x₁N₁) = x₂N₂}.
///
/// `phi` must be an isomorphism X₁/N₁ → X₂/N₂ for the quotients computed with
/// least-member coset representatives (as produced by [`goursat_decompose`]).
pub fn lifted_graph<'a>(
    product: &'a ProductLoop,
    n1: &Subloop,
    n2: &Subloop,
    phi: &LoopHom,
) -> Result<SubdirectProduct<'a>, SubdirectError> {
    if product.arity() != 2 {
        return Err(SubdirectError::NotTwoFactors {
            found: product.arity(),
        });
    }
    let x1 = product.factor(0);
    let x2 = product.factor(1);
    if !x1.is_normal(n1) {
        return Err(SubdirectError::FactorSubloopNotNormal {
            factor: 0,
            n: format!("{:?}", n1.elements()),
        });
    }
    if !x2.is_normal(n2) {
        return Err(SubdirectError::FactorSubloopNotNormal {
            factor: 1,
            n: format!("{:?}", n2.elements()),
        });
    }
    let (q1, p1) = x1.quotient(n1)?;
    let (q2, p2) = x2.quotient(n2)?;
    if !phi.domain().same_table(&q1) || !phi.codomain().same_table(&q2) || !phi.is_bijective() {
        return Err(SubdirectError::NotQuotientIso);
    }
    let mut carrier = Vec::new();
    for a in x1.elements() {
        let target = phi.apply(p1.apply(a));
        for b in x2.elements() {
            if p2.apply(b) == target {
                carrier.push(product.encode(&[a, b]));
            }
        }
    }
    let sub = Subloop::from_elements(product.underlying(), carrier)
        .expect("lifted graphs are subloops");
    SubdirectProduct::new(product, sub)
}

// ---------------------------------------------------------------------------
// Normality in a two-factor product
// ---------------------------------------------------------------------------

/// Evidence for the structural normality criterion on A ≤ X₁×X₂:
/// with Mᵢ = pᵢ(A) and Nᵢ = A[i]_i, A is normal in the product iff both Mᵢ
/// and Nᵢ are normal in Xᵢ and Mᵢ/Nᵢ is central in Xᵢ/Nᵢ.
pub struct NormalityCriterion {
    pub m: [Subloop; 2],
    pub n: [Subloop; 2],
    pub m_normal: [bool; 2],
    pub n_normal: [bool; 2],
    /// Centrality of Mᵢ/Nᵢ in Xᵢ/Nᵢ; None when Nᵢ is not normal.
    pub central: [Option<bool>; 2],
    pub satisfied: bool,
}

/// Evaluates the structural criterion (no direct normality scan).
pub fn normality_criterion(
    product: &ProductLoop,
    a: &Subloop,
) -> Result<NormalityCriterion, SubdirectError> {
    if product.arity() != 2 {
        return Err(SubdirectError::NotTwoFactors {
            found: product.arity(),
        });
    }
    let mut m = Vec::new();
    let mut n = Vec::new();
    let mut m_normal = [false; 2];
    let mut n_normal = [false; 2];
    let mut central = [None; 2];
    for i in 0..2 {
        let x = product.factor(i);
        let mi = product.project_to_factor(a, i)?;
        let ni = product.restriction_in_factor(a, i)?;
        m_normal[i] = x.is_normal(&mi);
        n_normal[i] = x.is_normal(&ni);
        if n_normal[i] {
            let (q, pi) = x.quotient(&ni)?;
            let centre = q.center();
            central[i] = Some(mi.elements().iter().all(|&e| centre.contains(pi.apply(e))));
        }
        m.push(mi);
        n.push(ni);
    }
    let satisfied = (0..2).all(|i| m_normal[i] && n_normal[i] && central[i] == Some(true));
    Ok(NormalityCriterion {
        m: [m.remove(0), m.remove(0)],
        n: [n.remove(0), n.remove(0)],
        m_normal,
        n_normal,
        central,
        satisfied,
    })
}

/// Normality of A in X₁×X₂, computed both directly (inner mappings on the
/// product) and through the structural criterion.
///
/// The two answers agreeing is a theorem; a mismatch is an internal error
/// and panics.
pub fn is_normal_in_product(
    product: &ProductLoop,
    a: &Subloop,
) -> Result<(bool, NormalityCriterion), SubdirectError> {
    let direct = product.underlying().is_normal(a);
    let criterion = normality_criterion(product, a)?;
    assert!(
        direct == criterion.satisfied,
        "structural normality criterion disagrees with the direct check: \
         direct={} criterion={} carrier={:?}",
        direct,
        criterion.satisfied,
        a.elements()
    );
    Ok((direct, criterion))
}

// ---------------------------------------------------------------------------
// Synchronized powers S_X(φ₁,…,φₖ) over an index partition
// ---------------------------------------------------------------------------

/// The subdirect product of Xᵏ cut out by automorphism agreement along an
/// index partition: tuples with φᵢ(xᵢ) = φⱼ(xⱼ) whenever i and j share a
/// class.  With ℓ classes the carrier is isomorphic to X^ℓ.
pub struct SyncedPower {
    pub product: ProductLoop,
    pub carrier: Subloop,
    pub classes: Vec<Vec<usize>>,
    pub autos: Vec<Vec<Elem>>,
}

/// Builds the synchronized power of X for the given partition and
/// automorphisms (one per index).
pub fn synced_power(
    x: &FiniteLoop,
    classes: &[Vec<usize>],
    autos: &[Vec<Elem>],
) -> Result<SyncedPower, SubdirectError> {
    let k = autos.len();
    let mut seen = vec![false; k];
    for class in classes {
        for &i in class {
            if i >= k || seen[i] {
                return Err(SubdirectError::BadPartition { arity: k });
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&s| s) || classes.iter().any(|c| c.is_empty()) {
        return Err(SubdirectError::BadPartition { arity: k });
    }
    for (index, map) in autos.iter().enumerate() {
        let ok = map.len() == x.order()
            && LoopHom::new(x.clone(), x.clone(), map.clone())
                .map(|h| h.is_bijective())
                .unwrap_or(false);
        if !ok {
            return Err(SubdirectError::NotAutomorphism { index });
        }
    }
    let product = ProductLoop::new(vec![x.clone(); k])?;
    let mut carrier = Vec::new();
    'outer: for p in 0..product.order() {
        for class in classes {
            let lead = class[0];
            let v = autos[lead][product.coordinate(p, lead)];
            for &i in &class[1..] {
                if autos[i][product.coordinate(p, i)] != v {
                    continue 'outer;
                }
            }
        }
        carrier.push(p);
    }
    let carrier = Subloop::from_elements(product.underlying(), carrier)
        .expect("synchronized powers are subloops");
    debug_assert!(product.is_subdirect(&carrier));
    Ok(SyncedPower {
        product,
        carrier,
        classes: classes.to_vec(),
        autos: autos.to_vec(),
    })
}

impl SyncedPower {
    /// The explicit isomorphism X^ℓ → carrier given by free choice of one
    /// coordinate per class, everything else forced by agreement.
    ///
    /// Returns the domain power loop and the carrier-element image of each
    /// of its elements.
    pub fn free_isomorphism(&self) -> Result<(ProductLoop, Vec<Elem>), SubdirectError> {
        let x = self.product.factor(0);
        let inverses: Vec<Vec<Elem>> = self
            .autos
            .iter()
            .map(|a| {
                let mut inv = vec![0; a.len()];
                for (src, &dst) in a.iter().enumerate() {
                    inv[dst] = src;
                }
                inv
            })
            .collect();
        let domain = ProductLoop::new(vec![x.clone(); self.classes.len()])?;
        let mut images = Vec::with_capacity(domain.order());
        let mut full = vec![0; self.product.arity()];
        for p in 0..domain.order() {
            for (ci, class) in self.classes.iter().enumerate() {
                let free = domain.coordinate(p, ci);
                let lead = class[0];
                let shared = self.autos[lead][free];
                for &i in class {
                    full[i] = inverses[i][shared];
                }
            }
            // Renormalize the lead coordinate: the free choice is the lead's
            // own value, so shared = φ_lead(free) and x_lead = free.
            images.push(self.product.encode(&full));
        }
        Ok((domain, images))
    }
}

// ---------------------------------------------------------------------------
// Enumeration and structure verification
// ---------------------------------------------------------------------------

/// All subdirect products inside a product loop, by filtering the full
/// subloop lattice of the underlying loop.
pub fn enumerate_subdirect_products<'a>(
    product: &'a ProductLoop,
    max_order: usize,
) -> Result<Vec<SubdirectProduct<'a>>, SubdirectError> {
    let subs = product.underlying().all_subloops(max_order)?;
    Ok(subs
        .into_iter()
        .filter(|s| product.is_subdirect(s))
        .map(|carrier| SubdirectProduct { product, carrier })
        .collect())
}

/// Checks that the normal subloops of Xᵏ×Y are exactly the products
/// M₁×…×Mₖ×N with every Mᵢ ∈ {{e}, X} and N normal in Y.
///
/// X must be a nonabelian simple loop; that hypothesis is what forces the
/// rectangular shape.  Returns true when predicted and actual sets agree.
pub fn verify_simple_power_normals(
    x: &FiniteLoop,
    k: usize,
    y: &FiniteLoop,
    max_order: usize,
) -> Result<bool, SubdirectError> {
    if !x.is_simple() || x.is_abelian_group() {
        return Err(SubdirectError::NotAutomorphism { index: usize::MAX });
    }
    let mut factors = vec![x.clone(); k];
    factors.push(y.clone());
    let product = ProductLoop::new(factors)?;
    let actual: HashSet<Vec<Elem>> = product
        .underlying()
        .all_normal_subloops(max_order)?
        .into_iter()
        .map(|s| s.elements().to_vec())
        .collect();

    let y_normals = y.all_normal_subloops(max_order)?;
    let mut predicted: HashSet<Vec<Elem>> = HashSet::new();
    for mask in 0..(1usize << k) {
        for n in &y_normals {
            let mut members: Vec<Vec<Elem>> = vec![vec![]];
            for i in 0..k {
                let choices: Vec<Elem> = if mask & (1 << i) != 0 {
                    x.elements().collect()
                } else {
                    vec![IDENTITY]
                };
                members = members
                    .into_iter()
                    .flat_map(|m| {
                        choices.iter().map(move |&c| {
                            let mut m2 = m.clone();
                            m2.push(c);
                            m2
                        })
                    })
                    .collect();
            }
            let mut carrier: Vec<Elem> = Vec::with_capacity(members.len() * n.len());
            for m in &members {
                for &ny in n.elements() {
                    let mut t = m.clone();
                    t.push(ny);
                    carrier.push(product.encode(&t));
                }
            }
            carrier.sort_unstable();
            predicted.insert(carrier);
        }
    }
    Ok(actual == predicted)
}

/// Image of a carrier under coordinatewise quotient maps, as a subloop of
/// the product of the quotients.
pub fn map_into_quotients(
    product: &ProductLoop,
    a: &Subloop,
    ns: &[Subloop],
) -> Result<(ProductLoop, Subloop), SubdirectError> {
    assert_eq!(ns.len(), product.arity());
    let mut quotients = Vec::new();
    let mut projs = Vec::new();
    for i in 0..product.arity() {
        let (q, p) = product.factor(i).quotient(&ns[i])?;
        quotients.push(q);
        projs.push(p);
    }
    let target = ProductLoop::new(quotients)?;
    let mut image: Vec<Elem> = a
        .elements()
        .iter()
        .map(|&x| {
            let t: Vec<Elem> = (0..product.arity())
                .map(|i| projs[i].apply(product.coordinate(x, i)))
                .collect();
            target.encode(&t)
        })
        .collect();
    image.sort_unstable();
    image.dedup();
    let sub = Subloop::from_elements(target.underlying(), image)
        .expect("homomorphic images of subloops are subloops");
    Ok((target, sub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extension::{cyclic_group, elementary_abelian_2};
    use crate::loops::automorphisms;

    fn diagonal(product: &ProductLoop) -> Subloop {
        let x = product.factor(0);
        let carrier: Vec<Elem> = x.elements().map(|a| product.encode(&[a, a])).collect();
        Subloop::from_elements(product.underlying(), carrier).unwrap()
    }

    #[test]
    fn product_codec_roundtrip() {
        let p = ProductLoop::new(vec![cyclic_group(4), cyclic_group(2), cyclic_group(3)]).unwrap();
        assert_eq!(p.order(), 24);
        for x in 0..p.order() {
            assert_eq!(p.encode(&p.decode(x)), x);
        }
        assert_eq!(p.encode(&[1, 0, 2]), 1 * 6 + 0 * 3 + 2);
        assert_eq!(p.support(p.encode(&[1, 0, 2])), vec![0, 2]);
        assert_eq!(p.support(0), Vec::<usize>::new());
    }

    #[test]
    fn product_with_trivial_factor_is_the_other_factor() {
        let f5 = catalog::builtin_loop("F5").unwrap();
        let p = direct_product(&[&cyclic_group(1), &f5]).unwrap();
        assert!(p.underlying().same_table(&f5));
        let p = direct_product(&[&f5, &cyclic_group(3)]).unwrap();
        assert!(!p.underlying().is_commutative());
        assert_eq!(p.order(), 15);
    }

    #[test]
    fn size_limit_is_enforced() {
        let z = cyclic_group(40);
        assert!(matches!(
            direct_product(&[&z, &z]),
            Err(SubdirectError::ProductTooLarge { .. })
        ));
    }

    #[test]
    fn projection_and_restriction_of_the_diagonal() {
        let z2 = cyclic_group(2);
        let p = direct_product(&[&z2, &z2]).unwrap();
        let d = diagonal(&p);
        assert!(p.is_subdirect(&d));
        assert!(p.is_flat(&d));
        assert_eq!(p.project_to_factor(&d, 0).unwrap().len(), 2);
        assert_eq!(p.restriction_in_factor(&d, 0).unwrap().elements(), &[0]);
        assert_eq!(p.restrict(&d, &[0]).elements(), &[0]);
        let whole = Subloop::whole(p.underlying());
        assert!(!p.is_flat(&whole));
        assert_eq!(p.restriction_in_factor(&whole, 1).unwrap().len(), 2);
    }

    #[test]
    fn projection_to_multiple_indices() {
        let z2 = cyclic_group(2);
        let p = ProductLoop::new(vec![z2.clone(), z2.clone(), z2.clone()]).unwrap();
        // Carrier: (a, a, b) — subdirect, flat in nothing.
        let carrier: Vec<Elem> = (0..2)
            .flat_map(|a| (0..2).map(move |b| a * 4 + a * 2 + b))
            .collect();
        let sub = Subloop::from_elements(p.underlying(), carrier).unwrap();
        let (q, img) = p.project(&sub, &[0, 1]).unwrap();
        assert_eq!(q.arity(), 2);
        assert_eq!(img.len(), 2, "first two coordinates are locked together");
        let (_, img01) = p.project(&sub, &[1, 2]).unwrap();
        assert_eq!(img01.len(), 4);
    }

    #[test]
    fn goursat_on_the_mod2_graph() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let p = direct_product(&[&z4, &z2]).unwrap();
        let carrier: Vec<Elem> = z4.elements().map(|x| p.encode(&[x, x % 2])).collect();
        let sd = SubdirectProduct::new(&p, Subloop::from_elements(p.underlying(), carrier).unwrap())
            .unwrap();
        let g = goursat_decompose(&sd).unwrap();
        assert_eq!(g.n1.elements(), &[0, 2]);
        assert_eq!(g.n2.elements(), &[0]);
        assert_eq!(g.quotient1.order(), 2);
        assert_eq!(g.quotient2.order(), 2);
        assert_eq!(g.phi.map(), &[0, 1]);

        let lifted = lifted_graph(&p, &g.n1, &g.n2, &g.phi).unwrap();
        assert_eq!(lifted.carrier().elements(), sd.carrier().elements());
    }

    #[test]
    fn goursat_of_full_product_and_diagonal() {
        let z2 = cyclic_group(2);
        let p = direct_product(&[&z2, &z2]).unwrap();
        let whole = SubdirectProduct::new(&p, Subloop::whole(p.underlying())).unwrap();
        let g = goursat_decompose(&whole).unwrap();
        assert_eq!(g.n1.len(), 2);
        assert_eq!(g.quotient1.order(), 1);
        let d = SubdirectProduct::new(&p, diagonal(&p)).unwrap();
        let g = goursat_decompose(&d).unwrap();
        assert_eq!(g.n1.len(), 1);
        assert_eq!(g.quotient1.order(), 2);
        assert!(g.phi.is_bijective());
    }

    #[test]
    fn lifted_graph_rejects_non_iso() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let p = direct_product(&[&z4, &z2]).unwrap();
        let n1 = Subloop::trivial();
        let n2 = Subloop::trivial();
        // Quotients have different orders: no isomorphism possible.
        let (q1, _) = z4.quotient(&n1).unwrap();
        let (q2, _) = z2.quotient(&n2).unwrap();
        let bad = LoopHom::new(q2.clone(), q2.clone(), vec![0, 1]).unwrap();
        assert!(lifted_graph(&p, &n1, &n2, &bad).is_err());
        drop(q1);
    }

    #[test]
    fn roundtrip_over_all_subdirect_products_of_z2xz4() {
        let z2 = cyclic_group(2);
        let z4 = cyclic_group(4);
        let p = direct_product(&[&z2, &z4]).unwrap();
        let sds = enumerate_subdirect_products(&p, 64).unwrap();
        assert!(!sds.is_empty());
        for sd in &sds {
            let g = goursat_decompose(sd).unwrap();
            let lifted = lifted_graph(&p, &g.n1, &g.n2, &g.phi).unwrap();
            assert_eq!(lifted.carrier().elements(), sd.carrier().elements());
        }
    }

    #[test]
    fn subdirect_counts_on_small_products() {
        let z2 = cyclic_group(2);
        let z3 = cyclic_group(3);
        let p22 = direct_product(&[&z2, &z2]).unwrap();
        assert_eq!(enumerate_subdirect_products(&p22, 64).unwrap().len(), 2);
        let p23 = direct_product(&[&z2, &z3]).unwrap();
        assert_eq!(enumerate_subdirect_products(&p23, 64).unwrap().len(), 1);
    }

    #[test]
    fn normality_criterion_agrees_on_z2xz2() {
        let z2 = cyclic_group(2);
        let p = direct_product(&[&z2, &z2]).unwrap();
        for sub in p.underlying().all_subloops(64).unwrap() {
            let (normal, crit) = is_normal_in_product(&p, &sub).unwrap();
            assert!(normal, "everything is normal in an abelian group");
            assert!(crit.satisfied);
        }
    }

    #[test]
    fn graph_of_identity_is_not_normal_in_s10_squared() {
        let x = catalog::builtin_loop("S10").unwrap();
        let p = direct_product(&[&x, &x]).unwrap();
        let d = diagonal(&p);
        let (normal, crit) = is_normal_in_product(&p, &d).unwrap();
        assert!(!normal, "diagonal of a nonabelian simple loop");
        assert_eq!(crit.central, [Some(false), Some(false)]);
        // {e} × X is normal.
        let carrier: Vec<Elem> = x.elements().map(|b| p.encode(&[0, b])).collect();
        let sub = Subloop::from_elements(p.underlying(), carrier).unwrap();
        let (normal, crit) = is_normal_in_product(&p, &sub).unwrap();
        assert!(normal);
        assert!(crit.satisfied);
    }

    #[test]
    fn synced_power_sizes_and_free_isomorphism() {
        let x = catalog::builtin_loop("S10").unwrap();
        let id: Vec<Elem> = x.elements().collect();
        // Partition {{0,1},{2}}: carrier should be |X|² = 100.
        let sp = synced_power(&x, &[vec![0, 1], vec![2]], &[id.clone(), id.clone(), id.clone()])
            .unwrap();
        assert_eq!(sp.carrier.len(), 100);
        assert!(sp.product.is_subdirect(&sp.carrier));

        let (domain, images) = sp.free_isomorphism().unwrap();
        assert_eq!(domain.order(), 100);
        // Injective, lands in the carrier, and is a homomorphism.
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), images.len());
        assert_eq!(sorted, sp.carrier.elements());
        let u = domain.underlying();
        let t = sp.product.underlying();
        for a in 0..40 {
            for b in 0..u.order() {
                assert_eq!(images[u.mul(a, b)], t.mul(images[a], images[b]));
            }
        }
    }

    #[test]
    fn synced_power_with_nontrivial_automorphism() {
        let z4 = cyclic_group(4);
        let inv: Vec<Elem> = vec![0, 3, 2, 1];
        let id: Vec<Elem> = z4.elements().collect();
        let sp = synced_power(&z4, &[vec![0, 1]], &[id.clone(), inv.clone()]).unwrap();
        // Carrier = {(x, y) : x = inv(y)} = graph of inversion.
        assert_eq!(sp.carrier.len(), 4);
        for &p in sp.carrier.elements() {
            let t = sp.product.decode(p);
            assert_eq!(t[0], inv[t[1]]);
        }
        // Full-partition synced powers over automorphism pairs are exactly
        // the automorphism graphs.
        for map in automorphisms(&z4) {
            let sp = synced_power(&z4, &[vec![0, 1]], &[id.clone(), map]).unwrap();
            assert_eq!(sp.carrier.len(), 4);
        }
    }

    #[test]
    fn synced_power_rejects_bad_input() {
        let z4 = cyclic_group(4);
        let id: Vec<Elem> = z4.elements().collect();
        assert!(matches!(
            synced_power(&z4, &[vec![0, 0]], &[id.clone()]),
            Err(SubdirectError::BadPartition { .. })
        ));
        assert!(matches!(
            synced_power(&z4, &[vec![0]], &[vec![0, 1, 1, 3]]),
            Err(SubdirectError::NotAutomorphism { .. })
        ));
        // A permutation that is not a homomorphism.
        assert!(matches!(
            synced_power(&z4, &[vec![0]], &[vec![0, 2, 1, 3]]),
            Err(SubdirectError::NotAutomorphism { .. })
        ));
    }

    #[test]
    fn simple_power_normals_with_small_y() {
        let x = catalog::builtin_loop("S10").unwrap();
        assert!(verify_simple_power_normals(&x, 1, &cyclic_group(1), 256).unwrap());
        assert!(verify_simple_power_normals(&x, 1, &cyclic_group(2), 256).unwrap());
        assert!(verify_simple_power_normals(&cyclic_group(4), 1, &cyclic_group(2), 256).is_err());
    }

    #[test]
    fn restrictions_multiply_into_the_carrier() {
        // ∏ A[i]_i ⊆ A for subdirect products.
        let z2 = cyclic_group(2);
        let z4 = cyclic_group(4);
        for (a, b) in [(&z2, &z4), (&z4, &z4)] {
            let p = direct_product(&[a, b]).unwrap();
            for sd in enumerate_subdirect_products(&p, 64).unwrap() {
                let n1 = p.restrict(sd.carrier(), &[0]);
                let n2 = p.restrict(sd.carrier(), &[1]);
                for &u in n1.elements() {
                    for &v in n2.elements() {
                        let prod = p.underlying().mul(u, v);
                        assert!(sd.carrier().contains(prod));
                    }
                }
            }
        }
    }

    #[test]
    fn factoring_by_restrictions_flattens() {
        let z4 = cyclic_group(4);
        let p = direct_product(&[&z4, &z4]).unwrap();
        for sd in enumerate_subdirect_products(&p, 64).unwrap() {
            let n1 = p.restriction_in_factor(sd.carrier(), 0).unwrap();
            let n2 = p.restriction_in_factor(sd.carrier(), 1).unwrap();
            let (q, img) = map_into_quotients(&p, sd.carrier(), &[n1, n2]).unwrap();
            assert!(q.is_flat(&img));
            assert!(q.is_subdirect(&img));
        }
    }

    #[test]
    fn graph_in_graph_normality_depends_on_centrality() {
        // gr(id) sits inside A = {(x,y) : x ≡ y mod N}; it is normal there
        // iff N is central in the first factor.
        let z4 = cyclic_group(4);
        let p = direct_product(&[&z4, &z4]).unwrap();
        let n = Subloop::from_elements(&z4, [0, 2]).unwrap();
        let (q1, _) = z4.quotient(&n).unwrap();
        let phi = LoopHom::new(q1.clone(), q1.clone(), vec![0, 1]).unwrap();
        let a = lifted_graph(&p, &n, &n, &phi).unwrap();
        let (a_loop, embed) = a.carrier().to_loop(p.underlying());
        let gr: Vec<Elem> = z4.elements().map(|x| p.encode(&[x, x])).collect();
        let gr_in_a: Vec<Elem> = gr
            .iter()
            .map(|g| embed.iter().position(|e| e == g).unwrap())
            .collect();
        let gr_sub = Subloop::from_elements(&a_loop, gr_in_a).unwrap();
        assert!(a_loop.is_normal(&gr_sub), "Z4 is abelian, so N is central");
        let (quot, _) = a_loop.quotient(&gr_sub).unwrap();
        assert_eq!(quot.order(), n.len(), "A/gr(φ) has the order of N");

        // Same setup over S3: N = A3 is not central, so gr(id) is not normal.
        let s3 = catalog::builtin_loop("S3").unwrap();
        let ps = direct_product(&[&s3, &s3]).unwrap();
        let a3 = Subloop::from_elements(&s3, [0, 3, 4]).unwrap();
        let (q1, _) = s3.quotient(&a3).unwrap();
        let phi = LoopHom::new(q1.clone(), q1.clone(), vec![0, 1]).unwrap();
        let a = lifted_graph(&ps, &a3, &a3, &phi).unwrap();
        let (a_loop, embed) = a.carrier().to_loop(ps.underlying());
        let gr: Vec<Elem> = s3.elements().map(|x| ps.encode(&[x, x])).collect();
        let gr_in_a: Vec<Elem> = gr
            .iter()
            .map(|g| embed.iter().position(|e| e == g).unwrap())
            .collect();
        let gr_sub = Subloop::from_elements(&a_loop, gr_in_a).unwrap();
        assert!(!a_loop.is_normal(&gr_sub));
    }

    #[test]
    fn simple_quotients_of_small_subdirect_products() {
        // Simple homomorphic images of a subdirect product of two factors
        // are abelian or quotients of a factor.
        let s3 = catalog::builtin_loop("S3").unwrap();
        let z4 = cyclic_group(4);
        let pairs: Vec<(&FiniteLoop, &FiniteLoop)> = vec![(&s3, &s3), (&z4, &z4)];
        for (x1, x2) in pairs {
            let p = direct_product(&[x1, x2]).unwrap();
            for sd in enumerate_subdirect_products(&p, 64).unwrap() {
                let (a_loop, _) = sd.carrier().to_loop(p.underlying());
                for c in a_loop.all_normal_subloops(64).unwrap() {
                    let (q, _) = a_loop.quotient(&c).unwrap();
                    if !q.is_simple() {
                        continue;
                    }
                    let explained = q.is_abelian_group()
                        || [x1, x2].iter().any(|x| {
                            x.all_normal_subloops(64).unwrap().iter().any(|n| {
                                let (xq, _) = x.quotient(n).unwrap();
                                crate::loops::loops_isomorphic(&xq, &q).is_some()
                            })
                        });
                    assert!(explained);
                }
            }
        }
    }

    #[test]
    fn elementary_abelian_cube_subdirects() {
        // Sanity check of enumeration on a three-factor product.
        let z2 = cyclic_group(2);
        let p = ProductLoop::new(vec![z2.clone(), z2.clone(), z2.clone()]).unwrap();
        let sds = enumerate_subdirect_products(&p, 64).unwrap();
        // Subdirect products of Z2³: carriers of sizes 2 (diagonal), 4, 8.
        assert!(sds.iter().any(|s| s.carrier().len() == 2));
        assert!(sds.iter().any(|s| s.carrier().len() == 8));
        for sd in &sds {
            for i in 0..3 {
                assert_eq!(p.project_to_factor(sd.carrier(), i).unwrap().len(), 2);
            }
        }
        // Projections of subdirect products onto index pairs stay subdirect.
        for sd in &sds {
            let (q, img) = p.project(sd.carrier(), &[0, 2]).unwrap();
            assert!(q.is_subdirect(&img));
        }
        let _ = elementary_abelian_2(3);
    }
}
