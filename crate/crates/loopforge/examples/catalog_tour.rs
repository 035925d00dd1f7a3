//! A walk through the builtin catalog: every named loop, triple system,
//! and cocycle, with a one-line structural readout per loop.
//!
//! Run with: cargo run --example catalog_tour

use loopforge::catalog::{self, EntryKind};
use loopforge::steiner::is_steiner_loop;

fn main() {
    for entry in catalog::entries() {
        println!("{:10} {:8} {}", entry.name, entry.kind.as_str(), entry.summary);
        match entry.kind {
            // Family entries like Zn are templates, not loadable names.
            EntryKind::Loop if catalog::builtin_loop(entry.name).is_err() => {}
            EntryKind::Loop => {
                let l = catalog::builtin_loop(entry.name).unwrap();
                let center = l.center();
                println!(
                    "           order {}, {}{}{}center {}, exponent {:?}",
                    l.order(),
                    if l.is_associative() { "associative, " } else { "" },
                    if l.is_commutative() { "commutative, " } else { "" },
                    if is_steiner_loop(&l) { "Steiner, " } else { "" },
                    center.len(),
                    l.exponent(),
                );
            }
            EntryKind::Sts => {
                let s = catalog::builtin_sts(entry.name).unwrap();
                println!(
                    "           {} points, {} blocks, anti-Pasch: {}, minimal: {}",
                    s.n(),
                    s.blocks().len(),
                    s.is_anti_pasch(),
                    s.is_minimal(),
                );
            }
            EntryKind::Cocycle => {
                let c = catalog::builtin_cocycle(entry.name).unwrap();
                println!(
                    "           Z{} over a base of order {}, {} nonzero entries",
                    c.z_group().order(),
                    c.base().order(),
                    c.nonzero_entries().len(),
                );
            }
        }
    }
}
