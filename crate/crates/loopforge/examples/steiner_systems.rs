//! Steiner triple systems: Pasch configurations, anti-Pasch and minimal
//! systems, and the loop attached to every system.
//!
//! Run with: cargo run --example steiner_systems

use loopforge::catalog;
use loopforge::steiner::{loop_to_sts, steiner_loop};

fn main() {
    // The 7-point system is unique and packed with Pasch configurations:
    // quadrilaterals of four blocks on six points.
    let sts7 = catalog::builtin_sts("STS7").unwrap();
    let pasch = sts7.pasch_configurations();
    println!("STS(7): {} blocks, {} Pasch configurations", sts7.blocks().len(), pasch.len());
    for p in &pasch {
        let blocks: Vec<String> = p
            .iter()
            .map(|&b| {
                let [x, y, z] = sts7.blocks()[b];
                format!("{{{x} {y} {z}}}")
            })
            .collect();
        println!("  {}", blocks.join(" "));
    }

    // STS(13): minimal (no proper subsystem on more than three points)
    // but not anti-Pasch.
    let sts13 = catalog::builtin_sts("STS13").unwrap();
    println!(
        "STS(13): minimal: {}, anti-Pasch: {}, Hall: {}",
        sts13.is_minimal(),
        sts13.is_anti_pasch(),
        sts13.is_hall()
    );

    // A 15-point system that avoids Pasch configurations entirely.
    let ap = catalog::builtin_sts("STS15AP").unwrap();
    println!(
        "STS(15) anti-Pasch: minimal: {}, anti-Pasch: {}",
        ap.is_minimal(),
        ap.is_anti_pasch()
    );

    // Every system on n points yields a loop of order n+1: adjoin an
    // identity, let distinct points multiply to the third point of their
    // block. The loop remembers the system exactly.
    let l14 = steiner_loop(&sts13);
    println!(
        "loop of STS(13): order {}, commutative: {}, associative: {}",
        l14.order(),
        l14.is_commutative(),
        l14.is_associative()
    );
    let back = loop_to_sts(&l14).unwrap();
    println!("loop_to_sts inverts steiner_loop: {}", back.blocks() == sts13.blocks());

    // Subloops correspond to subsystems (plus the identity), so a minimal
    // system gives a loop whose proper subloops all have size <= 4.
    let subs = l14.all_subloops(l14.order()).unwrap();
    let max_proper = subs
        .iter()
        .map(|s| s.len())
        .filter(|&n| n < l14.order())
        .max()
        .unwrap();
    println!(
        "subloops of the order-14 loop: {}, largest proper size: {}",
        subs.len(),
        max_proper
    );
}
