//! Rewrite rules, matching, and normalization.
//!
//! Cycle rules replace a `k`-cycle (legs read in cycle order) by a
//! combination of diagrams on `k` legs. Whole-diagram rules fire only when
//! the entire diagram matches the pattern; they rewrite four-leg forests to
//! a chosen basis.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::Zero;
use rand::Rng;

use super::canon::canonicalize;
use super::combo::LinearCombo;
use super::graph::{Diagram, DiagramError};
use super::tree_01_23;
use crate::scalars::{rat, DeltaPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleMode {
    Generic,
    /// δ = 7 substituted everywhere.
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Cycle(usize),
    Whole,
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub name: String,
    pub kind: RuleKind,
    pub pattern: Diagram,
    pub rhs: LinearCombo,
    key: Vec<u8>,
    sign: i8,
}

impl Rule {
    pub fn new(name: &str, kind: RuleKind, pattern: Diagram, rhs: LinearCombo) -> Self {
        assert_eq!(pattern.n_boundary(), rhs.n_boundary());
        let c = canonicalize(&pattern);
        Self {
            name: name.to_string(),
            kind,
            pattern,
            rhs,
            key: c.bytes(),
            sign: c.sign,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RuleSet {
    mode: RuleMode,
    rules: Vec<Rule>,
    index: HashMap<Vec<u8>, usize>,
    max_cycle: usize,
}

impl RuleSet {
    pub fn new(mode: RuleMode, rules: Vec<Rule>) -> Self {
        let mut rules = rules;
        if mode == RuleMode::G2 {
            let seven = rat(7);
            for r in &mut rules {
                r.rhs = r.rhs.at_delta(&seven);
            }
        }
        let index = rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.sign != 0)
            .map(|(i, r)| (r.key.clone(), i))
            .collect();
        let max_cycle = rules
            .iter()
            .filter_map(|r| match r.kind {
                RuleKind::Cycle(k) => Some(k),
                RuleKind::Whole => None,
            })
            .max()
            .unwrap_or(0);
        Self {
            mode,
            rules,
            index,
            max_cycle,
        }
    }

    /// Only the loop value; used to bootstrap derivations.
    pub fn loops_only() -> Self {
        Self::new(RuleMode::Generic, Vec::new())
    }

    /// Rules for indeterminate δ: tadpole, bubble, triangle, tree flip, square.
    pub fn generic() -> RuleSet {
        static GENERIC: OnceLock<RuleSet> = OnceLock::new();
        GENERIC
            .get_or_init(|| super::derive::generic_rules().expect("generic rule derivation"))
            .clone()
    }

    /// Rules at δ = 7: generic cycle rules, crossing, square, pentagon.
    pub fn g2() -> RuleSet {
        static G2: OnceLock<RuleSet> = OnceLock::new();
        G2.get_or_init(|| super::derive::g2_rules().expect("g2 rule derivation")).clone()
    }

    pub fn mode(&self) -> RuleMode {
        self.mode
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn with_rule(&self, rule: Rule) -> RuleSet {
        let mut rules = self.rules.clone();
        rules.retain(|r| r.name != rule.name);
        rules.push(rule);
        RuleSet::new(self.mode, rules)
    }

    pub fn without(&self, name: &str) -> RuleSet {
        let rules = self.rules.iter().filter(|r| r.name != name).cloned().collect();
        RuleSet::new(self.mode, rules)
    }

    pub fn loop_value(&self) -> DeltaPoly {
        match self.mode {
            RuleMode::Generic => DeltaPoly::delta(),
            RuleMode::G2 => DeltaPoly::int(7),
        }
    }

    /// The value of δ when it is fixed by the mode.
    pub fn fixed_delta(&self) -> Option<crate::scalars::Rational> {
        match self.mode {
            RuleMode::Generic => None,
            RuleMode::G2 => Some(rat(7)),
        }
    }
}

/// An applicable rewrite: the rule, the host vertices it consumes, the host
/// ports playing the pattern's boundary, and the relative sign.
#[derive(Clone, Debug)]
pub struct Match {
    pub rule: usize,
    pub vertices: Vec<usize>,
    pub legs: Vec<usize>,
    pub sign: i8,
}

/// All cycles of length `<= max_len`, each as (vertices, legs) in cycle
/// order, starting at its lowest vertex, in both directions.
pub fn cycles(d: &Diagram, max_len: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for v0 in 0..d.n_vertices() {
        for out0 in 0..3 {
            let mut path = vec![(v0, out0)];
            walk(d, v0, out0, max_len, &mut path, &mut Vec::new(), &mut out);
        }
    }
    out.sort_by_key(|(vs, _)| vs.len());
    out
}

// path holds (vertex, out slot); ins holds the in slot of path[i+1]
fn walk(
    d: &Diagram,
    v0: usize,
    out0: usize,
    max_len: usize,
    path: &mut Vec<(usize, usize)>,
    ins: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    let &(u, o) = path.last().expect("nonempty path");
    let m = d.mate(d.slot_port(u, o));
    let Some(w) = d.owner(m) else { return };
    let s_in = m - d.slot_port(w, 0);
    if w == v0 {
        if s_in == out0 {
            return;
        }
        // closing slot of v0 is its in slot; its leg is the third slot
        let mut vertices = Vec::with_capacity(path.len());
        let mut legs = Vec::with_capacity(path.len());
        for (i, &(x, xo)) in path.iter().enumerate() {
            let xi = if i == 0 { s_in } else { ins[i - 1] };
            let leg = 3 - xi - xo;
            vertices.push(x);
            legs.push(d.slot_port(x, leg));
        }
        out.push((vertices, legs));
        return;
    }
    if w < v0 || path.len() >= max_len || path.iter().any(|&(x, _)| x == w) {
        return;
    }
    for o2 in 0..3 {
        if o2 == s_in {
            continue;
        }
        path.push((w, o2));
        ins.push(s_in);
        walk(d, v0, out0, max_len, path, ins, out);
        path.pop();
        ins.pop();
    }
}

impl RuleSet {
    fn lookup(&self, extracted: &Diagram) -> Option<(usize, i8)> {
        let c = canonicalize(extracted);
        if c.is_zero() {
            return None;
        }
        let &i = self.index.get(&c.bytes())?;
        Some((i, c.sign * self.rules[i].sign))
    }

    /// All applicable rewrites. Cycle matches come shortest first.
    pub fn matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for (vertices, legs) in cycles(d, self.max_cycle) {
            let Ok(e) = d.extract(&vertices, &legs) else { continue };
            if let Some((rule, sign)) = self.lookup(&e) {
                if matches!(self.rules[rule].kind, RuleKind::Cycle(_)) {
                    out.push(Match {
                        rule,
                        vertices,
                        legs,
                        sign,
                    });
                }
            }
        }
        out.extend(self.whole_match(d));
        out
    }

    fn whole_match(&self, d: &Diagram) -> Option<Match> {
        if d.free_loops() != 0 {
            return None;
        }
        let (rule, sign) = self.lookup(d)?;
        (self.rules[rule].kind == RuleKind::Whole).then(|| Match {
            rule,
            vertices: (0..d.n_vertices()).collect(),
            legs: (0..d.n_boundary()).collect(),
            sign,
        })
    }

    /// Closed diagrams of girth 6 or more have no cycle match. Reading the
    /// tree flip backwards on an edge of a shortest cycle puts both cycle legs
    /// on one vertex, so the cycle shortens by one. G2 mode only.
    fn shorten_girth(&self, d: &Diagram) -> Option<LinearCombo> {
        if self.mode != RuleMode::G2 || d.n_boundary() != 0 || d.n_vertices() == 0 || d.free_loops() != 0 {
            return None;
        }
        let flip = self.rule("tree_flip")?;
        let t = tree_01_23();
        let c5 = flip.rhs.coefficient(&t).as_constant()?;
        if c5.is_zero() {
            return None;
        }
        let (cyc, _) = (2..=d.n_vertices()).find_map(|k| cycles(d, k).into_iter().next())?;
        if cyc.len() < 3 {
            return None;
        }
        let (c0, c1, c2, cl) = (cyc[0], cyc[1], cyc[2], cyc[cyc.len() - 1]);
        let toward = |u: usize, w: usize| (0..3).find(|&s| d.owner(d.mate(d.slot_port(u, s))) == Some(w));
        let (in0, out0) = (toward(c0, cl)?, toward(c0, c1)?);
        let (in1, out1) = (toward(c1, c0)?, toward(c1, c2)?);
        // legs (x, y | z, w) with the cycle through x and z
        let legs = [
            d.slot_port(c0, in0),
            d.slot_port(c0, 3 - in0 - out0),
            d.slot_port(c1, out1),
            d.slot_port(c1, 3 - in1 - out1),
        ];
        let (e, ct) = (canonicalize(&d.extract(&[c0, c1], &legs).ok()?), canonicalize(&t));
        if e.bytes() != ct.bytes() {
            return None;
        }
        // tree_01_23 = (pattern - rhs + c5 tree_01_23) / c5
        let mut repl = LinearCombo::from_diagram(&flip.pattern).sub(&flip.rhs);
        repl.add_diagram(&t, &DeltaPoly::constant(c5.clone()));
        let factor = DeltaPoly::constant(Rational::from_integer((e.sign * ct.sign).into()) / c5);
        let mut out = LinearCombo::zero(0);
        for (term, k) in repl.terms() {
            out.add_diagram(&d.substitute(&[c0, c1], &legs, term), &(k * &factor));
        }
        Some(out)
    }

    /// First match in canonical order: shortest cycle, lowest start vertex.
    pub fn first_match(&self, d: &Diagram) -> Option<Match> {
        for (vertices, legs) in cycles(d, self.max_cycle) {
            let Ok(e) = d.extract(&vertices, &legs) else { continue };
            if let Some((rule, sign)) = self.lookup(&e) {
                if matches!(self.rules[rule].kind, RuleKind::Cycle(_)) {
                    return Some(Match {
                        rule,
                        vertices,
                        legs,
                        sign,
                    });
                }
            }
        }
        self.whole_match(d)
    }

    /// Rewrites one match; the result equals `d`.
    pub fn apply(&self, d: &Diagram, m: &Match) -> LinearCombo {
        let rule = &self.rules[m.rule];
        let mut out = LinearCombo::zero(d.n_boundary());
        let sign = DeltaPoly::int(m.sign as i64);
        for (t, c) in rule.rhs.terms() {
            let replaced = if rule.kind == RuleKind::Whole {
                t.with_loops(t.free_loops() + d.free_loops())
            } else {
                d.substitute(&m.vertices, &m.legs, t)
            };
            out.add_diagram(&replaced, &(c * &sign));
        }
        out
    }
}

/// Memoizing normalizer for the deterministic strategy.
pub struct Normalizer<'a> {
    rules: &'a RuleSet,
    memo: HashMap<Vec<u8>, LinearCombo>,
}

impl<'a> Normalizer<'a> {
    pub fn new(rules: &'a RuleSet) -> Self {
        Self {
            rules,
            memo: HashMap::new(),
        }
    }

    pub fn normalize(&mut self, c: &LinearCombo) -> LinearCombo {
        let mut out = LinearCombo::zero(c.n_boundary());
        for (d, k) in c.terms() {
            let nf = self.normalize_diagram(d);
            out.add_combo(&nf, k);
        }
        out
    }

    /// Normal form of a single diagram.
    pub fn normalize_diagram(&mut self, d: &Diagram) -> LinearCombo {
        let c = canonicalize(d);
        if c.is_zero() {
            return LinearCombo::zero(d.n_boundary());
        }
        let loops = c.diagram.free_loops();
        let bare = c.diagram.with_loops(0);
        let key = canonicalize(&bare).bytes();
        let nf = match self.memo.get(&key) {
            Some(nf) => nf.clone(),
            None => {
                let nf = match self.rules.first_match(&bare) {
                    None => match self.rules.shorten_girth(&bare) {
                        Some(step) => self.normalize(&step),
                        None => LinearCombo::from_diagram(&bare),
                    },
                    Some(m) => {
                        let step = self.rules.apply(&bare, &m);
                        self.normalize(&step)
                    }
                };
                self.memo.insert(key, nf.clone());
                nf
            }
        };
        let factor = self.rules.loop_value().pow(loops) * DeltaPoly::int(c.sign as i64);
        nf.scale(&factor)
    }
}

/// Deterministic normal form (leftmost-innermost on canonical order).
pub fn normalize(c: &LinearCombo, rules: &RuleSet) -> LinearCombo {
    Normalizer::new(rules).normalize(c)
}

/// Normal form choosing uniformly among all applicable rewrites at each step.
pub fn normalize_random<R: Rng>(c: &LinearCombo, rules: &RuleSet, rng: &mut R) -> LinearCombo {
    let mut work = c.clone();
    let mut out = LinearCombo::zero(c.n_boundary());
    while let Some((d, k)) = work.pop_first() {
        if d.free_loops() > 0 {
            let factor = rules.loop_value().pow(d.free_loops());
            work.add_diagram(&d.with_loops(0), &(&k * &factor));
            continue;
        }
        let ms = rules.matches(&d);
        if ms.is_empty() {
            match rules.shorten_girth(&d) {
                Some(step) => work.add_combo(&step, &k),
                None => out.add_diagram(&d, &k),
            }
            continue;
        }
        let mut m = ms[rng.gen_range(0..ms.len())].clone();
        if rules.rules[m.rule].kind != RuleKind::Whole {
            // start the cycle at a random vertex
            let r = rng.gen_range(0..m.vertices.len());
            m.vertices.rotate_left(r);
            m.legs.rotate_left(r);
            let e = d.extract(&m.vertices, &m.legs).expect("cycle extracts");
            let (rule, sign) = rules.lookup(&e).expect("rotated cycle matches");
            m.rule = rule;
            m.sign = sign;
        }
        work.add_combo(&rules.apply(&d, &m), &k);
    }
    out
}

/// Scalar value of a closed diagram.
pub fn evaluate_closed(d: &Diagram, rules: &RuleSet) -> Result<DeltaPoly, DiagramError> {
    if d.n_boundary() != 0 {
        return Err(DiagramError::BoundaryMismatch {
            expected: 0,
            found: d.n_boundary(),
        });
    }
    let nf = normalize(&LinearCombo::from_diagram(d), rules);
    let empty = Diagram::empty();
    let scalar = nf.coefficient(&empty);
    let residual = nf.len() - usize::from(!scalar.is_zero());
    if residual > 0 {
        return Err(DiagramError::Irreducible(residual));
    }
    Ok(scalar)
}

impl LinearCombo {
    /// The constant coefficient of the empty diagram, if this is a scalar.
    pub fn as_scalar(&self) -> Option<DeltaPoly> {
        if self.n_boundary() != 0 {
            return None;
        }
        match self.len() {
            0 => Some(DeltaPoly::zero()),
            1 => {
                let (d, c) = self.terms().next().expect("one term");
                (d.n_vertices() == 0 && d.free_loops() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }
}
