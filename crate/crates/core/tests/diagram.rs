use num_traits::Zero;
use hurwitz::algebra::build_named;
use hurwitz::diagram::graph::{diagram, Leg::*};
use hurwitz::diagram::probe::{random_diagram, random_small_diagram};
use hurwitz::diagram::tensor::evaluate_combo;
use hurwitz::diagram::*;
use hurwitz::scalars::{rat, DeltaPoly};
use hurwitz::vpa::{imaginary_part, VectorProductAlgebra};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn im(name: &str) -> VectorProductAlgebra {
    imaginary_part(&build_named(name).unwrap()).unwrap()
}

fn poly(c: &[i64]) -> DeltaPoly {
    DeltaPoly::from_ints(c)
}

fn nf(d: &Diagram, rules: &RuleSet) -> LinearCombo {
    normalize(&LinearCombo::from_diagram(d), rules)
}

fn petersen() -> Diagram {
    // outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5
    let mut vs = Vec::new();
    for i in 0..5 {
        vs.push([E(i), E((i + 4) % 5), E(10 + i)]);
    }
    for i in 0..5 {
        vs.push([E(10 + i), E(20 + i), E(20 + (i + 3) % 5)]);
    }
    diagram(0, &vs, &[], 0)
}

fn heawood() -> Diagram {
    // 14-cycle with chords 2i -- 2i+5; girth 6
    let mut vs = Vec::new();
    for i in 0..14 {
        let chord = if i % 2 == 0 { 100 + i } else { 100 + (i + 9) % 14 };
        vs.push([E((i + 13) % 14), E(i), E(chord)]);
    }
    diagram(0, &vs, &[], 0)
}

fn dodecahedron() -> Diagram {
    // outer pentagon a, ten-cycle b/c, inner pentagon d
    let (aa, ab, bc, cb, cd, dd) = (0, 10, 20, 30, 40, 50);
    let mut vs = Vec::new();
    for i in 0..5 {
        vs.push([E(aa + i), E(ab + i), E(aa + (i + 4) % 5)]);
    }
    for i in 0..5 {
        vs.push([E(ab + i), E(cb + (i + 4) % 5), E(bc + i)]);
    }
    for i in 0..5 {
        vs.push([E(bc + i), E(cd + i), E(cb + i)]);
    }
    for i in 0..5 {
        vs.push([E(cd + i), E(dd + (i + 4) % 5), E(dd + i)]);
    }
    diagram(0, &vs, &[], 0)
}

#[test]
fn canonicalize_examples() {
    let e = canonicalize(&edge());
    assert_eq!(e.sign, 1);
    assert_eq!(e.bytes(), canonicalize(&edge()).bytes());
    let v012 = diagram(3, &[[B(0), B(1), B(2)]], &[], 0);
    let v021 = diagram(3, &[[B(0), B(2), B(1)]], &[], 0);
    let (a, b) = (canonicalize(&v012), canonicalize(&v021));
    assert_eq!(a.bytes(), b.bytes());
    assert_eq!(a.sign, -b.sign);
    let t1 = diagram(4, &[[B(0), B(1), E(7)], [E(7), B(2), B(3)]], &[], 0);
    let t2 = diagram(4, &[[E(3), B(2), B(3)], [B(0), B(1), E(3)]], &[], 0);
    assert_eq!(canonicalize(&t1).bytes(), canonicalize(&t2).bytes());
}

#[test]
fn canonical_bytes_are_stable() {
    // hash keys must not change between runs or builds
    assert_eq!(canonicalize(&edge()).bytes(), vec![0, 2, 0, 0, 0, 0, 0, 1, 0, 0]);
    assert_eq!(
        canonicalize(&vertex()).code(),
        &[3, 1, 0, 3, 4, 5, 0, 1, 2]
    );
}

fn transpose_legs(d: &Diagram, v: usize, a: usize, b: usize) -> Diagram {
    let mut order = [0, 1, 2];
    order.swap(a, b);
    d.permute_slots(v, order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpositions_flip_sign(seed in any::<u64>(), swaps in prop::collection::vec((0usize..8, 0usize..3, 0usize..3), 0..6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_small_diagram(&mut rng, 4, 6);
        let c0 = canonicalize(&d);
        let mut cur = d.clone();
        let mut parity = 1i8;
        for (v, a, b) in swaps {
            if d.n_vertices() == 0 || a == b {
                continue;
            }
            cur = transpose_legs(&cur, v % d.n_vertices(), a, b);
            parity = -parity;
        }
        let c1 = canonicalize(&cur);
        prop_assert_eq!(c0.bytes(), c1.bytes());
        prop_assert_eq!(c1.sign, c0.sign * parity);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_small_diagram(&mut rng, 4, 6);
        for rules in [RuleSet::generic(), RuleSet::g2()] {
            let once = nf(&d, &rules);
            prop_assert_eq!(normalize(&once, &rules), once);
        }
    }
}

#[test]
fn normalize_examples() {
    let g = RuleSet::generic();
    assert_eq!(nf(&free_loop(), &g), LinearCombo::from_diagram(&Diagram::empty()).scale(&DeltaPoly::delta()));
    let bubble = cycle(2);
    assert_eq!(nf(&bubble, &g), LinearCombo::from_diagram(&edge()).scale(&poly(&[1, -1])));
    assert_eq!(nf(&cycle(3), &g), LinearCombo::from_diagram(&vertex()).scale(&poly(&[-4, 1])));
    let tadpole = diagram(1, &[[E(0), E(0), B(0)]], &[], 0);
    assert!(nf(&tadpole, &g).is_zero());
}

#[test]
fn evaluate_closed_examples() {
    let g = RuleSet::generic();
    assert_eq!(evaluate_closed(&free_loop(), &g).unwrap(), DeltaPoly::delta());
    assert_eq!(evaluate_closed(&theta(), &g).unwrap(), poly(&[0, 1, -1]));
    assert_eq!(evaluate_closed(&Diagram::empty(), &g).unwrap(), DeltaPoly::int(1));
    // the Petersen graph has an odd automorphism
    assert!(canonicalize(&petersen()).is_zero());
    assert!(evaluate_closed(&petersen(), &g).unwrap().is_zero());
    // girth 5 and nonzero: no generic rule applies
    let dodeca = dodecahedron();
    assert!(!canonicalize(&dodeca).is_zero());
    assert!(matches!(evaluate_closed(&dodeca, &g), Err(DiagramError::Irreducible(1))));
    let p = evaluate_closed(&dodeca, &RuleSet::g2()).unwrap();
    let direct = evaluate_concrete(&dodeca, &im("octonions"));
    assert!(!p.is_zero());
    assert_eq!(vec![p.as_constant().unwrap()], direct.data);
    // girth 6 and nonplanar: g2 still reaches a scalar
    let h = heawood();
    assert!(matches!(evaluate_closed(&h, &g), Err(DiagramError::Irreducible(1))));
    let p = evaluate_closed(&h, &RuleSet::g2()).unwrap();
    assert_eq!(p, DeltaPoly::int(-87696));
    assert!(evaluate_closed(&edge(), &g).is_err());
}

#[test]
fn derive_hurwitz_examples() {
    let h = derive_hurwitz().unwrap();
    let coeff = |c: &LinearCombo, d: Diagram| c.coefficient(&d);
    assert_eq!(coeff(&h.sq1, tree_01_23()), poly(&[6, -1]));
    assert_eq!(coeff(&h.sq1, tree_12_30()), poly(&[-1]));
    assert_eq!(coeff(&h.sq1, pair_03_12()), poly(&[4]));
    assert_eq!(coeff(&h.sq1, pair_01_23()), poly(&[-3, 1]));
    assert_eq!(coeff(&h.sq1, pair_02_13()), poly(&[-2]));
    assert_eq!(h.sq1.len(), 5);
    let q = &h.miracle_quotient;
    assert_eq!(
        (coeff(q, tree_12_30()), coeff(q, tree_01_23()), coeff(q, pair_03_12()), coeff(q, pair_01_23())),
        (poly(&[1]), poly(&[-1]), poly(&[-1]), poly(&[1]))
    );
    assert_eq!(h.miracle, h.sq1.sub(&h.sq2));

    let rot = |c: &LinearCombo| derive::rotate_square_rule(c);
    let half = rot(&rot(&h.sq1));
    assert_eq!(half, h.sq1.map_diagrams(4, |d| d.rotate(2)).scale(&DeltaPoly::int(
        // a half turn of the square pattern is an even relabelling
        if canonicalize(&cycle(4)).sign == canonicalize(&cycle(4).rotate(2)).sign { 1 } else { -1 }
    )));
    assert_eq!(rot(&rot(&half)), h.sq1);
    assert_eq!(rot(&h.sq1), h.sq2);
}

#[test]
fn classify_examples() {
    let t = classify().unwrap();
    let mut ds = t.leaf_deltas();
    ds.sort();
    assert_eq!(ds, vec![rat(0), rat(1), rat(3), rat(7)]);
    assert_eq!(t.leaf(3).unwrap().relations[0].name, "associative");
    assert_eq!(t.leaf(3).unwrap().relations[0].combo, derive::ass_combo());
    let l1 = t.leaf(1).unwrap();
    assert!(l1.relations.iter().any(|r| r.combo == LinearCombo::from_diagram(&vertex())));
    // at δ=1 the pairing relations make pair_02_13, pair_03_12, pair_01_23 equal
    let rel: Vec<_> = l1.relations.iter().filter(|r| r.name.starts_with("pairing")).collect();
    for r in &rel {
        let s: DeltaPoly = [pair_02_13(), pair_03_12(), pair_01_23()].iter().map(|b| r.combo.coefficient(b)).fold(DeltaPoly::int(0), |a, b| a + b);
        assert_eq!(s, DeltaPoly::int(0));
    }
    assert_eq!(rel.len(), 2);
}

#[test]
fn evaluate_concrete_examples() {
    let h = im("quaternions");
    let e = evaluate_concrete(&edge(), &h);
    assert_eq!(e.data, hurwitz::linalg::Matrix::identity(3).data);
    let v = evaluate_concrete(&vertex(), &h);
    let s = v.get(&[0, 1, 2]).clone();
    assert!(s == rat(1) || s == rat(-1));
    assert_eq!(v.get(&[2, 1, 0]), &-s);
    assert_eq!(evaluate_concrete(&free_loop(), &im("octonions")).data, vec![rat(7)]);
}

#[test]
fn gram_rank_examples() {
    let o = im("octonions");
    let basis = [tree_01_23(), tree_12_30(), pair_02_13(), pair_03_12(), pair_01_23()];
    assert_eq!(gram_rank(4, &o, &basis).unwrap(), 4);
    assert_eq!(gram_rank(2, &o, &[edge()]).unwrap(), 1);
    let tadpole = diagram(1, &[[E(0), E(0), B(0)]], &[], 0);
    assert_eq!(gram_rank(1, &o, &[tadpole]).unwrap(), 0);
    assert!(matches!(gram_rank(4, &o, &[edge()]), Err(DiagramError::BoundaryMismatch { .. })));
    // the g2 normal-form basis is independent
    assert_eq!(gram_rank(4, &o, &[tree_01_23(), tree_12_30(), pair_03_12(), pair_01_23()]).unwrap(), 4);
}

#[test]
fn confluence_probe_examples() {
    let g2 = RuleSet::g2();
    assert!(confluence_probe(&g2, 8, 500, 7).is_clean());
    assert!(confluence_probe(&g2, 0, 50, 7).is_clean());
    let broken = RuleSet::generic().without("triangle");
    assert!(!confluence_probe(&broken, 6, 500, 7).is_clean());
}

fn assert_sound(d: &Diagram, rules: &RuleSet, v: &VectorProductAlgebra, delta: i64) {
    let lhs = evaluate_concrete(d, v);
    let rhs = evaluate_combo(&nf(d, rules), v, &rat(delta));
    assert_eq!(lhs, rhs, "{}", describe(d));
}

#[test]
fn rewriting_is_sound_on_random_diagrams() {
    let (o, h) = (im("octonions"), im("quaternions"));
    let (g, g2) = (RuleSet::generic(), RuleSet::g2());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..120 {
        let d = random_small_diagram(&mut rng, 4, 8);
        assert_sound(&d, &g, &o, 7);
        assert_sound(&d, &g, &h, 3);
        assert_sound(&d, &g2, &o, 7);
    }
}

/// Every perfect matching of the given ports.
fn all_matchings(ports: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if ports.is_empty() {
        return vec![vec![]];
    }
    let first = ports[0];
    let mut out = Vec::new();
    for i in 1..ports.len() {
        let rest: Vec<usize> = ports[1..].iter().copied().filter(|&p| p != ports[i]).collect();
        for mut m in all_matchings(&rest) {
            m.push((first, ports[i]));
            out.push(m);
        }
    }
    out
}

fn all_diagrams(n: usize, v: usize) -> Vec<Diagram> {
    let ports: Vec<usize> = (0..n + 3 * v).collect();
    all_matchings(&ports)
        .into_iter()
        .map(|m| {
            let ep = |p: usize| if p < n { Endpoint::Boundary(p) } else { Endpoint::Slot((p - n) / 3, (p - n) % 3) };
            let edges: Vec<_> = m.iter().map(|&(a, b)| (ep(a), ep(b))).collect();
            Diagram::new(n, v, &edges, 0).unwrap()
        })
        .collect()
}

#[test]
fn rewriting_is_sound_on_all_small_diagrams() {
    let (o, h) = (im("octonions"), im("quaternions"));
    let g = RuleSet::generic();
    for n in 0..=4 {
        for v in 0..=2 {
            if (n + 3 * v) % 2 == 1 {
                continue;
            }
            for d in all_diagrams(n, v) {
                assert_sound(&d, &g, &o, 7);
                assert_sound(&d, &g, &h, 3);
            }
        }
    }
}

#[test]
fn g2_closed_diagrams_reduce_to_scalars() {
    let g2 = RuleSet::g2();
    let o = im("octonions");
    for v in [0, 2, 4] {
        for d in all_diagrams(0, v) {
            let s = evaluate_closed(&d, &g2).unwrap();
            assert!(s.as_constant().is_some());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for v in [6, 8, 10] {
        for i in 0..40 {
            let d = random_diagram(&mut rng, 0, v, 0);
            let s = evaluate_closed(&d, &g2).unwrap();
            if i < 3 {
                assert_eq!(vec![s.as_constant().unwrap()], evaluate_concrete(&d, &o).data);
            }
        }
    }
}

#[test]
fn pentagon_rule_matches_golden() {
    let golden: hurwitz::diagram::combo::LinearComboJson =
        serde_json::from_str(include_str!("golden/pentagon.json")).unwrap();
    let derived = derive::derive_pentagon().unwrap();
    assert_eq!(derived, golden.to_combo().unwrap());
    let rule = RuleSet::g2();
    assert_eq!(rule.rule("pentagon").unwrap().rhs, derived);
    let o = im("octonions");
    assert_eq!(evaluate_concrete(&cycle(5), &o), evaluate_combo(&derived, &o, &rat(7)));
    // planar basis, unit coefficients
    assert_eq!(derived.len(), 10);
    assert!(derived.terms().all(|(_, c)| c.as_constant().map(|k| k == rat(1) || k == rat(-1)) == Some(true)));
}

#[test]
fn idempotent_is_a_projection() {
    let g2 = RuleSet::g2();
    let e = derive::g2_idempotent();
    let ee = compose4_combo(&e, &e);
    assert_eq!(normalize(&ee, &g2), normalize(&e, &g2));
}

#[test]
fn diagram_json_roundtrip() {
    let d = petersen();
    let j = serde_json::to_string(&d.to_json()).unwrap();
    let back: DiagramJson = serde_json::from_str(&j).unwrap();
    assert_eq!(Diagram::from_json(&back).unwrap(), d);
    let bad: DiagramJson = serde_json::from_str(r#"{"n_boundary":2,"vertices":[],"edges":[[["b",0],["b",0]]]}"#).unwrap();
    assert!(matches!(Diagram::from_json(&bad), Err(DiagramError::Malformed(_))));
}

