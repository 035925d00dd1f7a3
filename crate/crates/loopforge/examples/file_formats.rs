//! The three text formats: loop tables, triple systems (plain and
//! oriented), and cocycles. Everything round-trips bit-exactly.
//!
//! Run with: cargo run --example file_formats

use loopforge::{catalog, io};

fn main() {
    // Loop tables: an order line, then the Cayley rows, then an optional
    // "# labels:" line. Comments and blank lines are ignored on input.
    let f5 = catalog::builtin_loop("F5").unwrap();
    let text = io::write_loop(&f5);
    println!("--- loop file (F5) ---\n{text}");
    let (back, warnings) = io::parse_loop(&text).unwrap();
    assert!(back.same_table(&f5) && warnings.is_empty());

    // Tables whose identity is not at index 0 are re-indexed on input,
    // with a warning describing the move.
    let shifted = "3\n1 2 0\n2 0 1\n0 1 2\n";
    let (l, warnings) = io::parse_loop(shifted).unwrap();
    println!("--- shifted identity ---");
    println!("parsed order {}, warnings: {:?}", l.order(), warnings);

    // Triple systems: a point count line, then one block per line. Points
    // may be names; unnamed numeric points keep their values as labels.
    let sts7 = catalog::builtin_sts("STS7").unwrap();
    let text = io::write_sts(&sts7);
    println!("--- sts file (STS7) ---\n{text}");
    let back = io::parse_sts(&text).unwrap();
    assert_eq!(back.blocks(), sts7.blocks());

    // Oriented systems list each block in its cyclic order; token order on
    // the line is the orientation.
    let o = loopforge::steiner::OrientedSts::from_bits(sts7, &[true; 7]).unwrap();
    let text = io::write_oriented_sts(&o);
    println!("--- oriented sts file ---\n{text}");
    let back = io::parse_oriented_sts(&text).unwrap();
    assert_eq!(back.orders(), o.orders());

    // Cocycles: the value group, a base-loop reference (builtin: name or a
    // relative path), then x y value entries.
    let c = catalog::builtin_cocycle("COCYCLE15").unwrap();
    let text = io::write_cocycle(&c, "builtin:F5");
    println!("--- cocycle file (COCYCLE15) ---\n{text}");
}
