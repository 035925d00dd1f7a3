//! Central extensions from cocycles: build a loop of order 28 over a
//! Steiner loop of order 14 and watch a property hold upstairs that the
//! quotient downstairs lacks.
//!
//! Run with: cargo run --example central_extensions

use loopforge::catalog;
use loopforge::extension::central_extension;
use loopforge::steiner::is_steiner_loop;
use loopforge::terms::{builtin_equation, propagates};

fn main() {
    let c = catalog::builtin_cocycle("COCYCLE28").unwrap();
    println!(
        "cocycle: Z{} valued, over a base of order {}, {} nonzero entries, symmetric: {}",
        c.z_group().order(),
        c.base().order(),
        c.nonzero_entries().len(),
        c.is_symmetric()
    );

    let ext = central_extension(&c).unwrap();
    let k28 = &ext.total;
    println!("extension K28: order {}", k28.order());

    // The copy of Z2 sits inside the center of the extension.
    let z = ext.embedded_center();
    let center = k28.center();
    println!(
        "embedded Z2: {:?}, center: {:?}",
        z.elements(),
        center.elements()
    );
    assert!(z.elements().iter().all(|&x| center.contains(x)));

    // K28 is itself a Steiner loop, and associativity propagates in it.
    let assoc = builtin_equation("assoc").unwrap();
    println!("K28 is a Steiner loop: {}", is_steiner_loop(k28));
    println!(
        "associativity propagates in K28: {}",
        propagates(&assoc, k28).unwrap().propagates
    );

    // Its quotient by the center is a Steiner loop of order 14 where
    // associativity does NOT propagate: propagation is not inherited
    // downward through central quotients.
    let (q, _) = k28.quotient(&center).unwrap();
    println!(
        "quotient by the center: order {}, Steiner loop: {}",
        q.order(),
        is_steiner_loop(&q)
    );
    println!(
        "associativity propagates in the quotient: {}",
        propagates(&assoc, &q).unwrap().propagates
    );
}
