//! Built-in catalog: named loops, triple systems, and cocycles used across
//! the examples, the test corpus, and the CLI.

use thiserror::Error;

use crate::extension::{central_extension, cyclic_group, Cocycle, ExtensionError};
use crate::loops::{chein_double, Elem, FiniteLoop, LoopError};
use crate::steiner::{steiner_loop, Sts, SteinerError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown {kind} `{name}`; available: {available}")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("cyclic-group order {order} exceeds the catalog limit {limit}")]
    CyclicTooLarge { order: usize, limit: usize },
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// Largest n accepted for the Zn family.
pub const MAX_CYCLIC_ORDER: usize = 512;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EntryKind {
    Loop,
    Sts,
    Cocycle,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Loop => "loop",
            EntryKind::Sts => "sts",
            EntryKind::Cocycle => "cocycle",
        }
    }
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    pub summary: &'static str,
}

/// Every named catalog entry, in listing order.  `Zn` stands for the whole
/// cyclic family (Z1, Z2, …).
pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "F5",
            kind: EntryKind::Loop,
            summary: "nonassociative loop of order 5: (x*x)*x = e holds at a \
                      generator but fails on its square, so the equation does \
                      not propagate",
        },
        CatalogEntry {
            name: "X15",
            kind: EntryKind::Loop,
            summary: "central extension of F5 by Z3 via COCYCLE15; (x*x)*x = e \
                      propagates here without holding globally",
        },
        CatalogEntry {
            name: "S3",
            kind: EntryKind::Loop,
            summary: "symmetric group on three letters (order 6), the smallest \
                      nonabelian group",
        },
        CatalogEntry {
            name: "M12",
            kind: EntryKind::Loop,
            summary: "Chein double of S3: the smallest nonassociative Moufang \
                      loop (order 12)",
        },
        CatalogEntry {
            name: "S8",
            kind: EntryKind::Loop,
            summary: "Steiner loop of STS7; the 7-point system is the binary \
                      projective plane, so this is the elementary abelian \
                      group of order 8",
        },
        CatalogEntry {
            name: "S10",
            kind: EntryKind::Loop,
            summary: "Steiner loop of STS9: nonabelian and simple with every \
                      proper subloop abelian",
        },
        CatalogEntry {
            name: "F14",
            kind: EntryKind::Loop,
            summary: "Steiner loop of STS13 (order 14); associativity does not \
                      propagate in it",
        },
        CatalogEntry {
            name: "K28",
            kind: EntryKind::Loop,
            summary: "central extension of F14 by Z2 via COCYCLE28: a Steiner \
                      loop of order 28 with two-element center in which \
                      associativity propagates",
        },
        CatalogEntry {
            name: "S16",
            kind: EntryKind::Loop,
            summary: "Steiner loop of STS15AP: nonabelian and simple with \
                      every proper subloop abelian",
        },
        CatalogEntry {
            name: "Zn",
            kind: EntryKind::Loop,
            summary: "cyclic group family: any name Z<n> with 1 <= n <= 512, \
                      e.g. Z4",
        },
        CatalogEntry {
            name: "STS7",
            kind: EntryKind::Sts,
            summary: "the unique 7-point triple system (binary projective \
                      plane); minimal but not anti-Pasch",
        },
        CatalogEntry {
            name: "STS9",
            kind: EntryKind::Sts,
            summary: "the unique 9-point triple system (affine plane of order \
                      3); anti-Pasch, Hall, and minimal",
        },
        CatalogEntry {
            name: "STS13",
            kind: EntryKind::Sts,
            summary: "a 13-point triple system on points 0-9,a,b,c given by an \
                      explicit 26-block list",
        },
        CatalogEntry {
            name: "STS15AP",
            kind: EntryKind::Sts,
            summary: "the unique anti-Pasch 15-point triple system, developed \
                      from base blocks {0,1,4}, {0,2,9} and short orbit \
                      {0,5,10} modulo 15; minimal",
        },
        CatalogEntry {
            name: "COCYCLE15",
            kind: EntryKind::Cocycle,
            summary: "Z3-valued cocycle over F5 with f(x,y) = 1 exactly when \
                      x = y != e; builds X15",
        },
        CatalogEntry {
            name: "COCYCLE28",
            kind: EntryKind::Cocycle,
            summary: "symmetric Z2-valued cocycle over F14 with fifteen listed \
                      nonzero pairs; builds K28",
        },
    ]
}

fn available(kind: EntryKind) -> String {
    entries()
        .iter()
        .filter(|e| e.kind == kind)
        .map(|e| e.name)
        .collect::<Vec<_>>()
        .join(", ")
}

fn unknown(kind: &'static str, name: &str, k: EntryKind) -> CatalogError {
    CatalogError::Unknown {
        kind,
        name: name.to_string(),
        available: available(k),
    }
}

/// The order-5 loop with elements e, a, b, c, d.
fn f5() -> FiniteLoop {
    let rows = [
        [0, 1, 2, 3, 4],
        [1, 2, 4, 0, 3],
        [2, 0, 3, 4, 1],
        [3, 4, 1, 2, 0],
        [4, 3, 0, 1, 2],
    ];
    FiniteLoop::from_rows(&rows.map(|r| r.to_vec()))
        .expect("table is a loop")
        .with_labels(["e", "a", "b", "c", "d"].map(String::from).to_vec())
        .expect("five labels")
}

/// S3 as permutation composition; permutations of (0,1,2) in lexicographic
/// order, so the identity comes first.
fn s3() -> FiniteLoop {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
        // x·y acts as "x first, then y".
        [q[p[0]], q[p[1]], q[p[2]]]
    };
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let mut rows = Vec::new();
    for p in &perms {
        rows.push(
            perms
                .iter()
                .map(|q| index_of(&compose(p, q)))
                .collect::<Vec<_>>(),
        );
    }
    let labels = ["id", "(12)", "(01)", "(012)", "(021)", "(02)"]
        .map(String::from)
        .to_vec();
    FiniteLoop::from_rows(&rows)
        .expect("composition table is a group")
        .with_labels(labels)
        .expect("six labels")
}

fn sts7() -> Sts {
    let blocks = vec![
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ];
    Sts::from_blocks(7, blocks).expect("7-point system")
}

fn sts9() -> Sts {
    let mut blocks = Vec::new();
    for i in 0..3 {
        blocks.push([3 * i, 3 * i + 1, 3 * i + 2]);
        blocks.push([i, i + 3, i + 6]);
    }
    for s in 0..3usize {
        let mut b1 = [s, 3 + (s + 1) % 3, 6 + (s + 2) % 3];
        let mut b2 = [s, 3 + (s + 2) % 3, 6 + (s + 4) % 3];
        b1.sort_unstable();
        b2.sort_unstable();
        blocks.push(b1);
        blocks.push(b2);
    }
    Sts::from_blocks(9, blocks).expect("affine plane of order 3")
}

/// 26 blocks on points 0–9, a, b, c (a = 10, b = 11, c = 12).
const STS13_BLOCKS: [[usize; 3]; 26] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 5, 6],
    [0, 7, 12],
    [0, 8, 11],
    [0, 9, 10],
    [1, 3, 5],
    [1, 4, 7],
    [1, 6, 8],
    [1, 9, 11],
    [1, 10, 12],
    [2, 3, 6],
    [2, 4, 10],
    [2, 5, 12],
    [2, 7, 11],
    [2, 8, 9],
    [3, 7, 8],
    [3, 9, 12],
    [3, 10, 11],
    [4, 5, 11],
    [4, 6, 9],
    [4, 8, 12],
    [5, 7, 9],
    [5, 8, 10],
    [6, 7, 10],
    [6, 11, 12],
];

fn sts13() -> Sts {
    let labels: Vec<String> = (0..10)
        .map(|i: usize| i.to_string())
        .chain(["a", "b", "c"].map(String::from))
        .collect();
    Sts::from_blocks(13, STS13_BLOCKS.to_vec())
        .expect("13-point system")
        .with_labels(labels)
        .expect("thirteen labels")
}

/// The anti-Pasch 15-point system from the cyclic difference family
/// {0,1,4}, {0,2,9} (full orbits) and {0,5,10} (short orbit) modulo 15.
fn sts15_anti_pasch() -> Sts {
    let mut blocks = Vec::new();
    for base in [[0usize, 1, 4], [0, 2, 9]] {
        for s in 0..15 {
            blocks.push([(base[0] + s) % 15, (base[1] + s) % 15, (base[2] + s) % 15]);
        }
    }
    for s in 0..5 {
        blocks.push([s, s + 5, s + 10]);
    }
    Sts::from_blocks(15, blocks).expect("difference family covers all pairs")
}

/// f(x,y) = 1 exactly when x = y is a nonidentity element of F5.
fn cocycle15() -> Cocycle {
    let entries: Vec<(Elem, Elem, Elem)> = (1..5).map(|x| (x, x, 1)).collect();
    Cocycle::from_entries(cyclic_group(3), f5(), &entries, false)
        .expect("diagonal cocycle is normalized")
}

/// The fifteen symmetric nonzero pairs over F14, written as point pairs of
/// STS13 (a = 10, b = 11, c = 12); loop element = point + 1.
const COCYCLE28_PAIRS: [(usize, usize); 15] = [
    (0, 5),
    (0, 6),
    (1, 9),
    (1, 10),
    (1, 11),
    (1, 12),
    (3, 10),
    (3, 11),
    (4, 8),
    (4, 12),
    (5, 6),
    (8, 12),
    (9, 11),
    (10, 11),
    (10, 12),
];

fn cocycle28() -> Cocycle {
    let entries: Vec<(Elem, Elem, Elem)> = COCYCLE28_PAIRS
        .iter()
        .map(|&(x, y)| (x + 1, y + 1, 1))
        .collect();
    Cocycle::from_entries(cyclic_group(2), steiner_loop(&sts13()), &entries, true)
        .expect("pair list is normalized")
}

/// Looks up a loop by name: a fixed catalog name or Z<n> for a cyclic group.
/// Names are matched case-insensitively.
pub fn builtin_loop(name: &str) -> Result<FiniteLoop, CatalogError> {
    let upper = name.to_ascii_uppercase();
    if let Some(digits) = upper.strip_prefix('Z') {
        if let Ok(n) = digits.parse::<usize>() {
            if n == 0 || n > MAX_CYCLIC_ORDER {
                return Err(CatalogError::CyclicTooLarge {
                    order: n,
                    limit: MAX_CYCLIC_ORDER,
                });
            }
            return Ok(cyclic_group(n));
        }
    }
    match upper.as_str() {
        "F5" => Ok(f5()),
        "X15" => Ok(central_extension(&cocycle15())?.total),
        "S3" => Ok(s3()),
        "M12" => Ok(chein_double(&s3())?),
        "S8" => Ok(steiner_loop(&sts7())),
        "S10" => Ok(steiner_loop(&sts9())),
        "F14" => Ok(steiner_loop(&sts13())),
        "K28" => Ok(central_extension(&cocycle28())?.total),
        "S16" => Ok(steiner_loop(&sts15_anti_pasch())),
        _ => Err(unknown("loop", name, EntryKind::Loop)),
    }
}

pub fn builtin_sts(name: &str) -> Result<Sts, CatalogError> {
    match name.to_ascii_uppercase().as_str() {
        "STS7" => Ok(sts7()),
        "STS9" => Ok(sts9()),
        "STS13" => Ok(sts13()),
        "STS15AP" => Ok(sts15_anti_pasch()),
        _ => Err(unknown("sts", name, EntryKind::Sts)),
    }
}

pub fn builtin_cocycle(name: &str) -> Result<Cocycle, CatalogError> {
    match name.to_ascii_uppercase().as_str() {
        "COCYCLE15" => Ok(cocycle15()),
        "COCYCLE28" => Ok(cocycle28()),
        _ => Err(unknown("cocycle", name, EntryKind::Cocycle)),
    }
}

/// Catalog name of the base loop a builtin cocycle extends, as a
/// `builtin:` reference suitable for cocycle files.
pub fn cocycle_base_ref(name: &str) -> Option<&'static str> {
    match name.to_ascii_uppercase().as_str() {
        "COCYCLE15" => Some("builtin:F5"),
        "COCYCLE28" => Some("builtin:F14"),
        _ => None,
    }
}

/// The standing test corpus: all named catalog loops plus a few small
/// abelian groups, restricted to `max_order`, sorted by order then name.
pub fn corpus_loops(max_order: usize) -> Vec<(String, FiniteLoop)> {
    let mut out: Vec<(String, FiniteLoop)> = Vec::new();
    for n in [1usize, 2, 3, 4, 5, 6, 8] {
        out.push((format!("Z{n}"), cyclic_group(n)));
    }
    out.push((
        "Z2xZ2".to_string(),
        crate::extension::elementary_abelian_2(2),
    ));
    for name in ["S3", "F5", "S8", "S10", "M12", "F14", "X15", "S16", "K28"] {
        let l = builtin_loop(name).expect("catalog names resolve");
        out.push((name.to_string(), l));
    }
    out.retain(|(_, l)| l.order() <= max_order);
    out.sort_by(|a, b| a.1.order().cmp(&b.1.order()).then(a.0.cmp(&b.0)));
    out
}
