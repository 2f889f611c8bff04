//! The case analysis forcing δ ∈ {0, 1, 3, 7}.
//!
//! Each step exhibits `p(δ)·D = 0` for a linear `p` and a nonzero basic
//! diagram `D`: either δ is the root of `p`, or the relation `D = 0` holds
//! and feeds the next step.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::combo::{LinearCombo, LinearComboJson};
use super::derive::{derive_hurwitz, fund_relation};
use super::graph::{Diagram, DiagramError};
use super::rules::{normalize, RuleSet};
use super::{describe, edge, pair_02_13, pair_03_12, pair_01_23, vertex};
use crate::linalg::Matrix;
use crate::scalars::{format_rational, rat, DeltaPoly, Rational};

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    /// The combination asserted to vanish.
    pub combo: LinearCombo,
}

#[derive(Clone, Debug)]
pub struct Step {
    /// Relation assumed on entering this step (none for the first).
    pub assuming: Option<String>,
    /// `factor · combo = 0` was derived.
    pub factor: DeltaPoly,
    pub combo: LinearCombo,
    pub root: Rational,
}

#[derive(Clone, Debug)]
pub struct Leaf {
    pub delta: Rational,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug)]
pub struct CaseTree {
    pub steps: Vec<Step>,
    pub leaves: Vec<Leaf>,
}

impl CaseTree {
    pub fn leaf_deltas(&self) -> Vec<Rational> {
        self.leaves.iter().map(|l| l.delta.clone()).collect()
    }

    pub fn leaf(&self, delta: i64) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.delta == rat(delta))
    }
}

fn linear_root(p: &DeltaPoly) -> Result<Rational, DiagramError> {
    match p.coeffs() {
        [c0, c1] => Ok(-c0 / c1),
        _ => Err(DiagramError::DerivationMismatch(format!("expected a linear factor, got {p}"))),
    }
}

/// Reads `p·target` off a normalized combination.
fn single_multiple(c: &LinearCombo, target: &Diagram) -> Result<DeltaPoly, DiagramError> {
    let p = c.coefficient(target);
    if c.len() != 1 || p.is_zero() {
        return Err(DiagramError::DerivationMismatch(format!(
            "expected a multiple of {}, got {c}",
            describe(target)
        )));
    }
    Ok(p)
}

/// Relations among `pair_02_13, pair_03_12, pair_01_23` at δ = 1 with vertices set to zero:
/// the fundamental relation without its tree terms, under all relabellings
/// of the legs, reduced to echelon form.
fn pairing_relations() -> Vec<LinearCombo> {
    let basis = [pair_02_13(), pair_03_12(), pair_01_23()];
    let mut reduced = LinearCombo::zero(4);
    for (d, c) in fund_relation().terms() {
        if d.n_vertices() == 0 {
            reduced.add_diagram(d, c);
        }
    }
    let mut rows = Vec::new();
    for perm in permutations(4) {
        let r = reduced.map_diagrams(4, |d| d.permute_boundary(&perm));
        rows.push(basis.iter().map(|b| r.coefficient(b).eval(&rat(1))).collect::<Vec<_>>());
    }
    let mut m = Matrix::from_rows(rows);
    let pivots = m.rref();
    (0..pivots.len())
        .map(|i| {
            let mut c = LinearCombo::zero(4);
            for (j, b) in basis.iter().enumerate() {
                c.add_diagram(b, &DeltaPoly::constant(m[(i, j)].clone()));
            }
            c
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn classify() -> Result<CaseTree, DiagramError> {
    let generic = RuleSet::generic();
    let h = derive_hurwitz()?;
    let mut steps = Vec::new();
    let mut leaves = Vec::new();

    // miracle: (δ-7)·A = 0
    let ass = h.miracle_quotient.clone();
    steps.push(Step {
        assuming: None,
        factor: DeltaPoly::linear(rat(7)),
        combo: ass.clone(),
        root: rat(7),
    });
    leaves.push(Leaf {
        delta: rat(7),
        relations: Vec::new(),
    });

    // associativity: capping two legs of A with a vertex leaves a multiple of the vertex
    let capped = normalize(&ass.map_diagrams(3, |d| d.cap_with_vertex(2, 3)), &generic);
    let p = single_multiple(&capped, &vertex())?;
    let r3 = linear_root(&p)?;
    steps.push(Step {
        assuming: Some("associative".into()),
        factor: p,
        combo: LinearCombo::from_diagram(&vertex()),
        root: r3.clone(),
    });
    let ass_rel = Relation {
        name: "associative".into(),
        combo: ass,
    };
    leaves.push(Leaf {
        delta: r3,
        relations: vec![ass_rel.clone()],
    });

    // commutativity: vertex = 0, so the fundamental relation loses its trees
    let mut pair_only = LinearCombo::zero(4);
    for (d, c) in fund_relation().terms() {
        if d.n_vertices() == 0 {
            pair_only.add_diagram(d, c);
        }
    }
    let closed = normalize(&pair_only.map_diagrams(2, |d| d.join_boundary(2, 3)), &generic);
    let q = single_multiple(&closed, &edge())?;
    let r1 = linear_root(&q)?;
    steps.push(Step {
        assuming: Some("commutative".into()),
        factor: q,
        combo: LinearCombo::from_diagram(&edge()),
        root: r1.clone(),
    });
    let comm = Relation {
        name: "commutative".into(),
        combo: LinearCombo::from_diagram(&vertex()),
    };
    let mut rel1 = vec![comm];
    for (i, c) in pairing_relations().into_iter().enumerate() {
        rel1.push(Relation {
            name: format!("pairing{}", i + 1),
            combo: c,
        });
    }
    leaves.push(Leaf {
        delta: r1,
        relations: rel1,
    });

    // edge = 0 kills everything; the loop is then 0
    leaves.push(Leaf {
        delta: rat(0),
        relations: vec![Relation {
            name: "edge".into(),
            combo: LinearCombo::from_diagram(&edge()),
        }],
    });
    Ok(CaseTree { steps, leaves })
}

#[derive(Serialize)]
pub struct StepJson {
    pub assuming: Option<String>,
    pub factor: DeltaPoly,
    pub combo: String,
    #[serde(with = "crate::scalars::rational_str")]
    pub root: Rational,
}

#[derive(Serialize)]
pub struct RelationJson {
    pub name: String,
    pub vanishing: LinearComboJson,
    pub text: String,
}

#[derive(Serialize)]
pub struct LeafJson {
    #[serde(with = "crate::scalars::rational_str")]
    pub delta: Rational,
    pub relations: Vec<RelationJson>,
}

#[derive(Serialize)]
pub struct CaseTreeJson {
    pub steps: Vec<StepJson>,
    pub leaves: Vec<LeafJson>,
}

impl CaseTree {
    pub fn to_json(&self) -> CaseTreeJson {
        CaseTreeJson {
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    assuming: s.assuming.clone(),
                    factor: s.factor.clone(),
                    combo: s.combo.to_string(),
                    root: s.root.clone(),
                })
                .collect(),
            leaves: self
                .leaves
                .iter()
                .map(|l| LeafJson {
                    delta: l.delta.clone(),
                    relations: l
                        .relations
                        .iter()
                        .map(|r| RelationJson {
                            name: r.name.clone(),
                            vanishing: r.combo.to_json(),
                            text: format!("{} = 0", r.combo),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for CaseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (depth, s) in self.steps.iter().enumerate() {
            let pad = "  ".repeat(depth);
            let ctx = s.assuming.as_deref().map(|a| format!("[{a}] ")).unwrap_or_default();
            writeln!(f, "{pad}{ctx}({})·[{}] = 0", s.factor, s.combo)?;
            writeln!(f, "{pad}├─ δ = {}", format_rational(&s.root))?;
        }
        let pad = "  ".repeat(self.steps.len());
        writeln!(f, "{pad}└─ δ = 0 (all diagrams vanish)")?;
        for l in &self.leaves {
            let rels: Vec<String> = l.relations.iter().map(|r| format!("{}: {} = 0", r.name, r.combo)).collect();
            let rels = if rels.is_empty() { "none".to_string() } else { rels.join("; ") };
            writeln!(f, "leaf δ = {}: {rels}", format_rational(&l.delta))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_leaves() {
        let t = classify().unwrap();
        let mut ds = t.leaf_deltas();
        ds.sort();
        assert_eq!(ds, vec![rat(0), rat(1), rat(3), rat(7)]);
        assert_eq!(t.leaf(3).unwrap().relations[0].name, "associative");
        let l1 = t.leaf(1).unwrap();
        assert_eq!(l1.relations[0].combo, LinearCombo::from_diagram(&vertex()));
        // pairings all equal at δ = 1
        let rels: Vec<&LinearCombo> = l1.relations[1..].iter().map(|r| &r.combo).collect();
        assert_eq!(rels.len(), 2);
        let h78 = LinearCombo::from_diagram(&pair_02_13()).sub(&LinearCombo::from_diagram(&pair_03_12()));
        let h79 = LinearCombo::from_diagram(&pair_02_13()).sub(&LinearCombo::from_diagram(&pair_01_23()));
        let span = |c: &LinearCombo| {
            let basis = [pair_02_13(), pair_03_12(), pair_01_23()];
            basis.iter().map(|b| c.coefficient(b).eval(&rat(1))).collect::<Vec<_>>()
        };
        let m = Matrix::from_rows(vec![span(rels[0]), span(rels[1]), span(&h78), span(&h79)]);
        assert_eq!(m.rank(), 2);
    }
}
