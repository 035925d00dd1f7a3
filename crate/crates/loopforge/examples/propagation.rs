//! Equation propagation: an identity holding on a set of generators either
//! spreads to the whole generated subloop or breaks somewhere inside it.
//!
//! Run with: cargo run --example propagation

use loopforge::catalog;
use loopforge::terms::{builtin_equation, parse_equation, propagates};

fn main() {
    // F5 is the smallest loop where x^3 = e fails to propagate: the cube
    // identity holds for single elements that nevertheless generate the
    // whole loop, where it breaks.
    let f5 = catalog::builtin_loop("F5").unwrap();
    let cube = builtin_equation("cube").unwrap();
    let report = propagates(&cube, &f5).unwrap();
    println!("F5, (x*x)*x = e:");
    println!("  propagates: {}", report.propagates);
    if let (Some(w), Some(f)) = (&report.witness, &report.failure) {
        let w: Vec<String> = w.iter().map(|&x| f5.label(x)).collect();
        let f: Vec<String> = f.iter().map(|&x| f5.label(x)).collect();
        println!(
            "  ({}) satisfies it but generates a subloop of size {} where ({}) does not",
            w.join(", "),
            report.subloop_size.unwrap(),
            f.join(", ")
        );
    }

    // X15 satisfies the same identity globally, so propagation is vacuous.
    let x15 = catalog::builtin_loop("X15").unwrap();
    let report = propagates(&cube, &x15).unwrap();
    println!("X15, (x*x)*x = e:");
    println!("  propagates: {} (holds everywhere)", report.propagates);

    // Associativity propagates in the Moufang loop M12 even though M12
    // itself is not associative: every triple that associates generates a
    // subloop that is a group.
    let m12 = catalog::builtin_loop("M12").unwrap();
    let assoc = builtin_equation("assoc").unwrap();
    let report = propagates(&assoc, &m12).unwrap();
    println!("M12, x*(y*z) = (x*y)*z:");
    println!("  associative: {}", m12.is_associative());
    println!("  propagates:  {}", report.propagates);
    println!(
        "  checked {} tuples, verified {} generated subloops",
        report.witnesses_checked, report.subloops_verified
    );

    // Equations are plain text in the signature (*, \, /, e).
    let eq = parse_equation("x*(y*x) = (x*y)*x").unwrap();
    let report = propagates(&eq, &m12).unwrap();
    println!("M12, {eq}:");
    println!("  propagates: {}", report.propagates);
}
