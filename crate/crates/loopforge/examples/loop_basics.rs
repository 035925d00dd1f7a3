//! Core loop machinery: Cayley tables, divisions, subloops, normality,
//! centers, quotients, and isomorphism testing.
//!
//! Run with: cargo run --example loop_basics

use loopforge::catalog;
use loopforge::loops::{chein_double, loops_isomorphic, FiniteLoop};

fn main() {
    // A loop is a finite Cayley table that is a Latin square with a
    // two-sided identity at index 0. Divisions come from row and column
    // inverses of the table.
    let f5 = catalog::builtin_loop("F5").unwrap();
    let (a, b) = (1, 2);
    println!("F5: order {}", f5.order());
    println!(
        "  {} * {} = {}",
        f5.label(a),
        f5.label(b),
        f5.label(f5.mul(a, b))
    );
    println!(
        "  {} \\ {} = {}   (left division)",
        f5.label(a),
        f5.label(b),
        f5.label(f5.ldiv(a, b))
    );
    println!(
        "  {} / {} = {}   (right division)",
        f5.label(b),
        f5.label(a),
        f5.label(f5.rdiv(b, a))
    );

    // Subloop lattice, normality, center.
    let m12 = catalog::builtin_loop("M12").unwrap();
    let subs = m12.all_subloops(m12.order()).unwrap();
    let normal = subs.iter().filter(|s| m12.is_normal(s)).count();
    println!(
        "M12: {} subloops, {} of them normal, center size {}",
        subs.len(),
        normal,
        m12.center().len()
    );

    // Quotient by a normal subloop; cosets are labeled by least members.
    let n = m12
        .all_normal_subloops(m12.order())
        .unwrap()
        .into_iter()
        .filter(|s| s.len() > 1 && s.len() < m12.order())
        .min_by_key(|s| s.len())
        .unwrap();
    let (q, pi) = m12.quotient(&n).unwrap();
    println!(
        "  quotient by a normal subloop of size {}: order {}, associative: {}",
        n.len(),
        q.order(),
        q.is_associative()
    );
    println!("  the projection sends 5 to coset {}", pi.apply(5));

    // M12 is the Chein double of S3: take a group, adjoin a twisted copy.
    let s3 = catalog::builtin_loop("S3").unwrap();
    let doubled = chein_double(&s3).unwrap();
    println!(
        "Chein double of S3 is isomorphic to M12: {}",
        loops_isomorphic(&doubled, &m12).is_some()
    );

    // Tables can be built directly from rows.
    let z3 = FiniteLoop::from_rows(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
    println!(
        "hand-built Z3: abelian group: {}, exponent {:?}",
        z3.is_abelian_group(),
        z3.exponent()
    );
}
