//! Powers of a simple loop: for nonabelian simple X, the subdirect products
//! of X x X are the graphs of automorphisms plus the full product, and the
//! normal subloops of X^k x Y all have rectangular shape.
//!
//! Run with: cargo run --example simple_powers

use loopforge::catalog;
use loopforge::loops::automorphisms;
use loopforge::subdirect::{
    direct_product, enumerate_subdirect_products, is_normal_in_product,
    verify_simple_power_normals,
};

fn main() {
    // S10, the Steiner loop of STS(9), is simple and nonabelian.
    let s10 = catalog::builtin_loop("S10").unwrap();
    println!(
        "S10: order {}, simple: {}, commutative: {}, associative: {}",
        s10.order(),
        s10.is_simple(),
        s10.is_commutative(),
        s10.is_associative()
    );

    let auts = automorphisms(&s10);
    println!("automorphism group size: {}", auts.len());

    // Subdirect products of S10 x S10: one graph per automorphism, and the
    // whole product. Nothing else fits.
    let p = direct_product(&[&s10, &s10]).unwrap();
    let subdirect = enumerate_subdirect_products(&p, p.order()).unwrap();
    println!(
        "subdirect products of S10 x S10: {} = {} graphs + the full product",
        subdirect.len(),
        auts.len()
    );

    // Normal subloops of the product: only {e}x{e}, {e}xS10, S10x{e}, and
    // S10 x S10 — rectangles built from the trivial and full subloops.
    let normals: Vec<_> = p
        .underlying()
        .all_subloops(p.order())
        .unwrap()
        .into_iter()
        .filter(|a| {
            let (normal, criterion) = is_normal_in_product(&p, a).unwrap();
            assert_eq!(normal, criterion.satisfied);
            normal
        })
        .collect();
    println!("normal subloops of S10 x S10: {}", normals.len());
    for n in &normals {
        let shape: Vec<usize> = (0..2)
            .map(|i| p.restriction_in_factor(n, i).unwrap().len())
            .collect();
        println!("  size {:3}, factor shape {:?}", n.len(), shape);
    }

    // The rectangle law holds across X^k x Y for small Y.
    let z2 = catalog::builtin_loop("Z2").unwrap();
    let ok = verify_simple_power_normals(&s10, 1, &z2, 512).unwrap();
    println!("normals of S10 x Z2 are exactly the rectangles: {ok}");
}
