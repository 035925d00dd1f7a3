//! Goursat decomposition: every subdirect product A <= X1 x X2 is the
//! lifted graph of an isomorphism between quotients X1/N1 and X2/N2.
//!
//! Run with: cargo run --example goursat

use loopforge::catalog;
use loopforge::loops::Subloop;
use loopforge::subdirect::{
    direct_product, enumerate_subdirect_products, goursat_decompose, lifted_graph,
    SubdirectProduct,
};

fn main() {
    // The mod-2 pairing inside Z4 x Z2: {(x, x mod 2)}.
    let z4 = catalog::builtin_loop("Z4").unwrap();
    let z2 = catalog::builtin_loop("Z2").unwrap();
    let p = direct_product(&[&z4, &z2]).unwrap();
    let carrier: Vec<_> = (0..4).map(|x| p.encode(&[x, x % 2])).collect();
    let a = SubdirectProduct::new(
        &p,
        Subloop::from_elements(p.underlying(), carrier).unwrap(),
    )
    .unwrap();

    let d = goursat_decompose(&a).unwrap();
    println!("A = {{(x, x mod 2)}} inside Z4 x Z2:");
    println!(
        "  N1 (first coordinates paired with the second identity): {:?}",
        d.n1.elements()
    );
    println!(
        "  N2 (second coordinates paired with the first identity): {:?}",
        d.n2.elements()
    );
    println!("  common quotient order: {}", d.phi.domain().order());

    // The decomposition is faithful: lifting the graph of phi recovers A.
    let lifted = lifted_graph(&p, &d.n1, &d.n2, &d.phi).unwrap();
    println!(
        "  lifted graph reproduces the carrier: {}",
        lifted.carrier().elements() == a.carrier().elements()
    );

    // Counting subdirect products of S3 x S3: graphs of quotient
    // isomorphisms at every level of the normal lattice, plus the full
    // product itself.
    let s3 = catalog::builtin_loop("S3").unwrap();
    let q = direct_product(&[&s3, &s3]).unwrap();
    let all = enumerate_subdirect_products(&q, q.order()).unwrap();
    println!("subdirect products inside S3 x S3: {}", all.len());
    let mut by_size = std::collections::BTreeMap::new();
    for s in &all {
        *by_size.entry(s.carrier().len()).or_insert(0) += 1;
    }
    for (size, count) in by_size {
        println!("  carrier size {size:2}: {count}");
    }

    // Every one of them round-trips through its Goursat data.
    let ok = all.iter().all(|s| {
        let d = goursat_decompose(s).unwrap();
        let l = lifted_graph(&q, &d.n1, &d.n2, &d.phi).unwrap();
        l.carrier().elements() == s.carrier().elements()
    });
    println!("  all decompose and lift back exactly: {ok}");
}
