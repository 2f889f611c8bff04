//! Mechanical derivation of the reduction rules from the fundamental
//! relation `tree_01_23 + tree_12_30 = 2 pair_02_13 - pair_03_12 - pair_01_23` and antisymmetry.
//!
//! A rule for a pattern `P` comes from expanding one internal edge of `P`
//! with the fundamental relation, normalizing with the rules found so far,
//! and solving `P = c P + rest` for `P`.

use num_traits::Zero;
use serde::Serialize;

use super::canon::canonicalize;
use super::combo::{LinearCombo, LinearComboJson};
use super::graph::{diagram, Diagram, DiagramError, Leg::*};
use super::rules::{evaluate_closed, Normalizer, Rule, RuleKind, RuleMode, RuleSet};
use super::{cycle, edge, tree_20_13, tree_01_23, tree_12_30, pair_02_13, pair_03_12, pair_01_23, vertex};
use crate::linalg::Matrix;
use crate::scalars::{frac, rat, DeltaPoly, Rational};

/// Right-hand side of the fundamental relation solved for `tree_01_23`.
pub fn fund_rhs() -> LinearCombo {
    LinearCombo::from_terms(4, &[(-1, &tree_12_30()), (2, &pair_02_13()), (-1, &pair_03_12()), (-1, &pair_01_23())])
}

/// `tree_01_23 + tree_12_30 - 2 pair_02_13 + pair_03_12 + pair_01_23`, which vanishes.
pub fn fund_relation() -> LinearCombo {
    LinearCombo::from_diagram(&tree_01_23()).sub(&fund_rhs())
}

/// Rewrites `d` at the internal edge leaving slot `slot` of vertex `u`.
/// The two remaining slots of `u` play (x, y) in slot order, swapped when
/// `swap` is set; those of the other endpoint play (z, w).
pub fn fund_expand(d: &Diagram, u: usize, slot: usize, swap: bool) -> Result<LinearCombo, DiagramError> {
    let a = d.slot_port(u, slot);
    let b = d.mate(a);
    let v = match d.owner(b) {
        Some(v) if v != u => v,
        _ => return Err(DiagramError::Malformed("edge is not between two distinct vertices".into())),
    };
    let sb = b - d.slot_port(v, 0);
    let mut xy: Vec<usize> = (0..3).filter(|&s| s != slot).map(|s| d.slot_port(u, s)).collect();
    if swap {
        xy.swap(0, 1);
    }
    let zw: Vec<usize> = (0..3).filter(|&s| s != sb).map(|s| d.slot_port(v, s)).collect();
    let legs = [xy[0], xy[1], zw[0], zw[1]];
    let h = d.extract(&[u, v], &legs)?;
    let (ch, c5) = (canonicalize(&h), canonicalize(&tree_01_23()));
    if ch.bytes() != c5.bytes() || ch.is_zero() {
        return Err(DiagramError::Malformed("edge neighbourhood is not an H".into()));
    }
    let sigma = DeltaPoly::int((ch.sign * c5.sign) as i64);
    let mut out = LinearCombo::zero(d.n_boundary());
    for (t, c) in fund_rhs().terms() {
        out.add_diagram(&d.substitute(&[u, v], &legs, t), &(c * &sigma));
    }
    Ok(out)
}

/// Solves `pattern = c pattern + rest` where the right side is the normal
/// form of `expansion`; requires `1 - c` to be a nonzero constant and, when
/// `shrink` is set, every term of `rest` to have fewer vertices.
pub fn solve_for(
    pattern: &Diagram,
    expansion: &LinearCombo,
    rules: &RuleSet,
    shrink: bool,
) -> Result<LinearCombo, DiagramError> {
    let nf = Normalizer::new(rules).normalize(expansion);
    let c = nf.coefficient(pattern);
    let mut rest = nf.clone();
    rest.add_diagram(pattern, &-c.clone());
    let denom = (DeltaPoly::int(1) - c.clone()).as_constant().filter(|x| !x.is_zero());
    let Some(denom) = denom else {
        return Err(DiagramError::DerivationMismatch(format!(
            "pattern reappears with coefficient {c}"
        )));
    };
    if shrink && rest.terms().any(|(t, _)| t.n_vertices() >= pattern.n_vertices()) {
        return Err(DiagramError::DerivationMismatch("expansion is not smaller than the pattern".into()));
    }
    Ok(rest.scale(&DeltaPoly::constant(denom.recip())))
}

/// Derives a cycle rule by expanding the edge between cycle vertices 0 and
/// 1, trying both assignments of (x, y).
pub fn derive_cycle_rule(k: usize, rules: &RuleSet) -> Result<LinearCombo, DiagramError> {
    let pattern = cycle(k);
    let mut last = None;
    for swap in [false, true] {
        let exp = fund_expand(&pattern, 0, 2, swap)?;
        match solve_for(&pattern, &exp, rules, true) {
            Ok(rhs) => return Ok(rhs),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("two attempts"))
}

/// Solves a vanishing relation for the coefficient of `target`.
pub fn solve_relation(relation: &LinearCombo, target: &Diagram) -> Result<LinearCombo, DiagramError> {
    let c = relation
        .coefficient(target)
        .as_constant()
        .filter(|x| !x.is_zero())
        .ok_or_else(|| DiagramError::DerivationMismatch("target absent from relation".into()))?;
    let mut rest = relation.clone();
    rest.add_diagram(target, &-DeltaPoly::constant(c.clone()));
    Ok(rest.scale(&DeltaPoly::constant(-c.recip())))
}

fn expect_equal(what: &str, got: &LinearCombo, want: &LinearCombo) -> Result<(), DiagramError> {
    if got == want {
        Ok(())
    } else {
        Err(DiagramError::DerivationMismatch(format!("{what}: derived {got}, expected {want}")))
    }
}

fn poly(c: &[i64]) -> DeltaPoly {
    DeltaPoly::from_ints(c)
}

fn combo(n: usize, terms: &[(DeltaPoly, Diagram)]) -> LinearCombo {
    let mut out = LinearCombo::zero(n);
    for (c, d) in terms {
        out.add_diagram(d, c);
    }
    out
}

/// Rule right-hand sides of the generic derivation and the miracle.
#[derive(Clone, Debug)]
pub struct HurwitzDerivation {
    pub bubble: LinearCombo,
    pub triangle: LinearCombo,
    pub tree_flip: LinearCombo,
    pub sq1: LinearCombo,
    pub sq2: LinearCombo,
    pub miracle: LinearCombo,
    /// `miracle / (δ - 7)`.
    pub miracle_quotient: LinearCombo,
}

#[derive(Serialize)]
pub struct HurwitzDerivationJson {
    pub bubble: LinearComboJson,
    pub triangle: LinearComboJson,
    pub tree_flip: LinearComboJson,
    pub sq1: LinearComboJson,
    pub sq2: LinearComboJson,
    pub miracle: LinearComboJson,
    pub miracle_quotient: LinearComboJson,
}

impl HurwitzDerivation {
    pub fn to_json(&self) -> HurwitzDerivationJson {
        HurwitzDerivationJson {
            bubble: self.bubble.to_json(),
            triangle: self.triangle.to_json(),
            tree_flip: self.tree_flip.to_json(),
            sq1: self.sq1.to_json(),
            sq2: self.sq2.to_json(),
            miracle: self.miracle.to_json(),
            miracle_quotient: self.miracle_quotient.to_json(),
        }
    }
}

/// Quarter rotation of a square rule: the pattern rotated is the pattern up
/// to a sign, so the rotated right-hand side is again a rule for it.
pub fn rotate_square_rule(rhs: &LinearCombo) -> LinearCombo {
    let sq = cycle(4);
    let (a, b) = (canonicalize(&sq), canonicalize(&sq.rotate(1)));
    debug_assert_eq!(a.bytes(), b.bytes());
    let s = DeltaPoly::int((a.sign * b.sign) as i64);
    rhs.map_diagrams(4, |d| d.rotate(1)).scale(&s)
}

fn cycle_rule(name: &str, k: usize, rhs: LinearCombo) -> Rule {
    Rule::new(name, RuleKind::Cycle(k), cycle(k), rhs)
}

pub fn derive_hurwitz() -> Result<HurwitzDerivation, DiagramError> {
    let mut rules = vec![cycle_rule("tadpole", 1, LinearCombo::zero(1))];

    let bubble = derive_cycle_rule(2, &RuleSet::new(RuleMode::Generic, rules.clone()))?;
    expect_equal("bubble", &bubble, &combo(2, &[(poly(&[1, -1]), edge())]))?;
    rules.push(cycle_rule("bubble", 2, bubble.clone()));

    let triangle = derive_cycle_rule(3, &RuleSet::new(RuleMode::Generic, rules.clone()))?;
    expect_equal("triangle", &triangle, &combo(3, &[(poly(&[-4, 1]), vertex())]))?;
    rules.push(cycle_rule("triangle", 3, triangle.clone()));

    let flip_exp = fund_expand(&tree_20_13(), 0, 2, false)?;
    let tree_flip = solve_for(&tree_20_13(), &flip_exp, &RuleSet::new(RuleMode::Generic, rules.clone()), false)?;
    expect_equal(
        "tree_flip",
        &tree_flip,
        &LinearCombo::from_terms(4, &[(1, &tree_01_23()), (2, &pair_03_12()), (-1, &pair_02_13()), (-1, &pair_01_23())]),
    )?;
    rules.push(Rule::new("tree_flip", RuleKind::Whole, tree_20_13(), tree_flip.clone()));

    let sq1 = derive_cycle_rule(4, &RuleSet::new(RuleMode::Generic, rules.clone()))?;
    let want_sq1 = combo(
        4,
        &[
            (poly(&[6, -1]), tree_01_23()),
            (poly(&[-1]), tree_12_30()),
            (poly(&[4]), pair_03_12()),
            (poly(&[-3, 1]), pair_01_23()),
            (poly(&[-2]), pair_02_13()),
        ],
    );
    expect_equal("square", &sq1, &want_sq1)?;
    let sq2 = rotate_square_rule(&sq1);
    let miracle = sq1.sub(&sq2);
    let seven = rat(7);
    let mut quotient = LinearCombo::zero(4);
    for (d, c) in miracle.terms() {
        let q = c
            .divide_linear(&seven)
            .map_err(|e| DiagramError::DerivationMismatch(format!("miracle not divisible by δ-7: {e}")))?;
        quotient.add_diagram(d, &q);
    }
    expect_equal("miracle/(δ-7)", &quotient, &ass_combo())?;
    Ok(HurwitzDerivation {
        bubble,
        triangle,
        tree_flip,
        sq1,
        sq2,
        miracle,
        miracle_quotient: quotient,
    })
}

/// `tree_12_30 - tree_01_23 - pair_03_12 + pair_01_23`; its vanishing is associativity.
pub fn ass_combo() -> LinearCombo {
    LinearCombo::from_terms(4, &[(1, &tree_12_30()), (-1, &tree_01_23()), (-1, &pair_03_12()), (1, &pair_01_23())])
}

pub fn generic_rules() -> Result<RuleSet, DiagramError> {
    let h = derive_hurwitz()?;
    Ok(RuleSet::new(
        RuleMode::Generic,
        vec![
            cycle_rule("tadpole", 1, LinearCombo::zero(1)),
            cycle_rule("bubble", 2, h.bubble),
            cycle_rule("triangle", 3, h.triangle),
            Rule::new("tree_flip", RuleKind::Whole, tree_20_13(), h.tree_flip),
            cycle_rule("square", 4, h.sq1),
        ],
    ))
}

/// Right-hand side of the crossing rule: `pair_02_13` in terms of the other four.
pub fn crossing_rhs() -> Result<LinearCombo, DiagramError> {
    solve_relation(&fund_relation(), &pair_02_13())
}

/// g2 rules without the pentagon: used to derive it.
fn g2_base() -> Result<Vec<Rule>, DiagramError> {
    let generic = RuleSet::generic();
    let mut rules: Vec<Rule> = ["tadpole", "bubble", "triangle", "tree_flip"]
        .iter()
        .map(|n| generic.rule(n).expect("generic rule").clone())
        .collect();
    let crossing = crossing_rhs()?;
    expect_equal(
        "crossing",
        &crossing,
        &LinearCombo::from_terms(4, &[(1, &tree_01_23()), (1, &tree_12_30()), (1, &pair_03_12()), (1, &pair_01_23())])
            .scale(&DeltaPoly::constant(frac(1, 2))),
    )?;
    rules.push(Rule::new("crossing", RuleKind::Whole, pair_02_13(), crossing));
    let forest = RuleSet::new(RuleMode::G2, rules.clone());
    let square = generic.rule("square").expect("square").rhs.at_delta(&rat(7));
    let square_g2 = Normalizer::new(&forest).normalize(&square);
    expect_equal(
        "square_g2",
        &square_g2,
        &LinearCombo::from_terms(4, &[(-2, &tree_01_23()), (-2, &tree_12_30()), (3, &pair_03_12()), (3, &pair_01_23())]),
    )?;
    rules.push(cycle_rule("square_g2", 4, square_g2));
    Ok(rules)
}

/// Planar five-leg diagrams: an adjacent pair beside a vertex, and the
/// three-vertex trees, each in all five rotations.
pub fn planar_five_leg_basis() -> Vec<Diagram> {
    let mut out = Vec::new();
    for i in 0..5 {
        let l = |k: usize| (i + k) % 5;
        out.push(diagram(5, &[[B(l(2)), B(l(3)), B(l(4))]], &[(l(0), l(1))], 0));
    }
    for i in 0..5 {
        let l = |k: usize| (i + k) % 5;
        out.push(diagram(
            5,
            &[[B(l(0)), B(l(1)), E(0)], [E(0), B(l(2)), E(1)], [E(1), B(l(3)), B(l(4))]],
            &[],
            0,
        ));
    }
    out
}

/// Glues leg `i` of `a` to leg `i` of `b` for every `i`.
fn close_against(a: &Diagram, b: &Diagram) -> Diagram {
    let mut d = a.disjoint_union(b);
    for k in (1..=a.n_boundary()).rev() {
        d = d.join_boundary(k - 1, 2 * k - 1);
    }
    d
}

fn pair_with(a: &Diagram, c: &LinearCombo, rules: &RuleSet) -> Result<Rational, DiagramError> {
    let mut total = Rational::zero();
    for (d, k) in c.terms() {
        let v = evaluate_closed(&close_against(a, d), rules)?;
        total += v.as_constant().expect("constant at fixed δ") * k.as_constant().expect("constant at fixed δ");
    }
    Ok(total)
}

/// Rewrites a five-leg combination at δ = 7 in the planar basis by solving
/// the Gram system; all pairings are closed diagrams on at most six vertices.
pub fn to_planar_basis(c: &LinearCombo, rules: &RuleSet) -> Result<LinearCombo, DiagramError> {
    let basis = planar_five_leg_basis();
    let mut gram = Vec::new();
    let mut rhs = Vec::new();
    for p in &basis {
        let row = basis
            .iter()
            .map(|q| pair_with(p, &LinearCombo::from_diagram(q), rules))
            .collect::<Result<Vec<_>, _>>()?;
        gram.push(row);
        rhs.push(pair_with(p, c, rules)?);
    }
    let inv = Matrix::from_rows(gram)
        .inverse()
        .ok_or_else(|| DiagramError::DerivationMismatch("planar five-leg Gram matrix is singular".into()))?;
    let mut out = LinearCombo::zero(5);
    for (q, k) in basis.iter().zip(inv.mul_vec(&rhs)) {
        out.add_diagram(q, &DeltaPoly::constant(k));
    }
    Ok(out)
}

/// Pentagon rule at δ = 7: the fundamental relation on one pentagon edge and
/// the other g2 rules, rewritten in the planar basis so that substitution
/// keeps planar diagrams planar.
pub fn derive_pentagon() -> Result<LinearCombo, DiagramError> {
    let base = RuleSet::new(RuleMode::G2, g2_base()?);
    let raw = derive_cycle_rule(5, &base)?;
    to_planar_basis(&raw, &base)
}

pub fn g2_rules() -> Result<RuleSet, DiagramError> {
    let mut rules = g2_base()?;
    rules.push(cycle_rule("pentagon", 5, derive_pentagon()?));
    Ok(RuleSet::new(RuleMode::G2, rules))
}

/// Derivation-algebra projection idempotent `½pair_03_12 − ½pair_02_13 + ⅙tree_01_23`.
pub fn g2_idempotent() -> LinearCombo {
    let mut e = LinearCombo::zero(4);
    e.add_diagram(&pair_03_12(), &DeltaPoly::constant(frac(1, 2)));
    e.add_diagram(&pair_02_13(), &DeltaPoly::constant(frac(-1, 2)));
    e.add_diagram(&tree_01_23(), &DeltaPoly::constant(frac(1, 6)));
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_named;
    use crate::diagram::tensor::evaluate_combo;
    use crate::vpa::imaginary_part;

    #[test]
    fn fundamental_relation_holds_concretely() {
        for (name, delta) in [("octonions", 7), ("quaternions", 3), ("split_octonions", 7)] {
            let v = imaginary_part(&build_named(name).unwrap()).unwrap();
            let t = evaluate_combo(&fund_relation(), &v, &rat(delta));
            assert!(t.is_zero(), "{name}");
        }
    }

    #[test]
    fn hurwitz_derivation() {
        let h = derive_hurwitz().unwrap();
        assert_eq!(h.miracle_quotient, ass_combo());
    }

    fn assert_rules_sound(rules: &RuleSet, name: &str, delta: i64) {
        let v = imaginary_part(&build_named(name).unwrap()).unwrap();
        for r in rules.rules() {
            let lhs = crate::diagram::evaluate_concrete(&r.pattern, &v);
            let rhs = evaluate_combo(&r.rhs, &v, &rat(delta));
            assert_eq!(lhs, rhs, "rule {} in {name}", r.name);
        }
    }

    #[test]
    fn generic_rules_are_sound() {
        let g = RuleSet::generic();
        assert_rules_sound(&g, "octonions", 7);
        assert_rules_sound(&g, "quaternions", 3);
    }

    #[test]
    fn g2_rules_are_sound() {
        let g2 = RuleSet::g2();
        assert_eq!(g2.rules().len(), 7);
        assert_rules_sound(&g2, "octonions", 7);
        assert_rules_sound(&g2, "split_octonions", 7);
    }

    #[test]
    fn idempotent_projects() {
        let g2 = RuleSet::g2();
        let e = g2_idempotent();
        let ee = crate::diagram::compose4_combo(&e, &e);
        let lhs = crate::diagram::normalize(&ee, &g2);
        let rhs = crate::diagram::normalize(&e, &g2);
        assert_eq!(lhs, rhs);
        // trace of the projection is the dimension of the derivation algebra
        let tr = e.map_diagrams(0, |d| d.join_boundary(1, 2).join_boundary(0, 1));
        let t = crate::diagram::normalize(&tr, &g2);
        assert_eq!(t.as_scalar(), Some(DeltaPoly::int(14)));
    }
}
