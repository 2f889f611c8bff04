//! Trivalent diagram calculus over Q[δ].
//!
//! Four-leg basis (boundary points 0..3 read x, y, z, w):
//! `tree_01_23 = V(0,1,r)V(r,2,3)`, `tree_12_30 = V(1,2,r)V(r,3,0)`,
//! `pair_02_13 = (02)(13)`, `pair_03_12 = (03)(12)`, `pair_01_23 = (01)(23)`, and the third
//! tree `tree_20_13 = V(2,0,r)V(r,1,3)`. A quarter rotation swaps tree_01_23/tree_12_30 and
//! pair_03_12/pair_01_23 and fixes pair_02_13.

pub mod canon;
pub mod census;
pub mod classify;
pub mod combo;
pub mod derive;
pub mod graph;
pub mod probe;
pub mod rules;
pub mod tensor;

pub use canon::{canonicalize, CanonicalForm};
pub use census::closed_diagrams;
pub use classify::{classify, CaseTree};
pub use combo::LinearCombo;
pub use derive::{derive_hurwitz, HurwitzDerivation};
pub use graph::{Diagram, DiagramBuilder, DiagramError, DiagramJson, Endpoint, Leg};
pub use probe::{confluence_probe, ProbeReport};
pub use rules::{evaluate_closed, normalize, RuleMode, RuleSet};
pub use tensor::{evaluate_concrete, gram_rank, Tensor};

use graph::{diagram, Leg::*};

pub fn edge() -> Diagram {
    diagram(2, &[], &[(0, 1)], 0)
}

pub fn vertex() -> Diagram {
    diagram(3, &[[B(0), B(1), B(2)]], &[], 0)
}

pub fn free_loop() -> Diagram {
    Diagram::empty().with_loops(1)
}

/// Two vertices joined by three edges, with opposite cyclic orders (the
/// planar theta).
pub fn theta() -> Diagram {
    diagram(0, &[[E(0), E(1), E(2)], [E(2), E(1), E(0)]], &[], 0)
}

/// Tree `V(a,b,r)V(r,c,d)`.
pub fn tree(a: usize, b: usize, c: usize, d: usize) -> Diagram {
    diagram(4, &[[B(a), B(b), E(0)], [E(0), B(c), B(d)]], &[], 0)
}

pub fn pairing(a: usize, b: usize, c: usize, d: usize) -> Diagram {
    diagram(4, &[], &[(a, b), (c, d)], 0)
}

pub fn tree_01_23() -> Diagram {
    tree(0, 1, 2, 3)
}

pub fn tree_12_30() -> Diagram {
    tree(1, 2, 3, 0)
}

pub fn pair_02_13() -> Diagram {
    pairing(0, 2, 1, 3)
}

pub fn pair_03_12() -> Diagram {
    pairing(0, 3, 1, 2)
}

pub fn pair_01_23() -> Diagram {
    pairing(0, 1, 2, 3)
}

pub fn tree_20_13() -> Diagram {
    tree(2, 0, 1, 3)
}

/// `k`-cycle with one leg per vertex; vertex `i` has slots
/// (edge to `i-1`, leg `i`, edge to `i+1`).
pub fn cycle(k: usize) -> Diagram {
    assert!(k >= 1);
    let verts: Vec<[Leg; 3]> = (0..k).map(|i| [E((i + k - 1) % k), B(i), E(i)]).collect();
    diagram(k, &verts, &[], 0)
}

/// Composition of four-leg diagrams read as maps from legs (0,1) to (3,2):
/// legs 3, 2 of `a` are glued to legs 0, 1 of `b`.
pub fn compose4(a: &Diagram, b: &Diagram) -> Diagram {
    assert!(a.n_boundary() == 4 && b.n_boundary() == 4);
    a.disjoint_union(b).join_boundary(3, 4).join_boundary(2, 3)
}

pub fn compose4_combo(a: &LinearCombo, b: &LinearCombo) -> LinearCombo {
    let mut out = LinearCombo::zero(4);
    for (da, ca) in a.terms() {
        for (db, cb) in b.terms() {
            out.add_diagram(&compose4(da, db), &(ca * cb));
        }
    }
    out
}

/// Name of a four-leg basis diagram, up to sign, if it is one.
pub fn basis_name(d: &Diagram) -> Option<(&'static str, i8)> {
    if d.n_boundary() != 4 {
        return None;
    }
    let c = canonicalize(d);
    let named: [(&str, fn() -> Diagram); 6] = [
        ("tree_01_23", tree_01_23),
        ("tree_12_30", tree_12_30),
        ("pair_02_13", pair_02_13),
        ("pair_03_12", pair_03_12),
        ("pair_01_23", pair_01_23),
        ("tree_20_13", tree_20_13),
    ];
    named.iter().find_map(|(name, f)| {
        let b = canonicalize(&f());
        (b.bytes() == c.bytes()).then_some((*name, c.sign * b.sign))
    })
}

/// Short human-readable form: named basis diagram or edge list.
pub fn describe(d: &Diagram) -> String {
    if d.n_vertices() == 0 && d.n_boundary() == 0 {
        return if d.free_loops() == 0 {
            "1".into()
        } else {
            format!("loop^{}", d.free_loops())
        };
    }
    if d.free_loops() == 0 {
        if let Some((name, sign)) = basis_name(d) {
            return if sign > 0 { name.into() } else { format!("-{name}") };
        }
    }
    let ep = |e: Endpoint| match e {
        Endpoint::Boundary(i) => format!("b{i}"),
        Endpoint::Slot(v, s) => format!("v{v}.{s}"),
    };
    let mut s: Vec<String> = d.edges().into_iter().map(|(a, b)| format!("{}-{}", ep(a), ep(b))).collect();
    if d.free_loops() > 0 {
        s.push(format!("loops={}", d.free_loops()));
    }
    s.join(" ")
}
