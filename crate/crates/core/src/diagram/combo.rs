//! Formal linear combinations of canonical diagrams with coefficients in Q[δ].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::canon::canonicalize;
use super::graph::{Diagram, DiagramJson};
use crate::scalars::DeltaPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCombo {
    n_boundary: usize,
    terms: BTreeMap<Vec<u8>, (Diagram, DeltaPoly)>,
}

impl LinearCombo {
    pub fn zero(n_boundary: usize) -> Self {
        Self {
            n_boundary,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let mut c = Self::zero(d.n_boundary());
        c.add_diagram(d, &DeltaPoly::one());
        c
    }

    pub fn from_terms(n_boundary: usize, terms: &[(i64, &Diagram)]) -> Self {
        let mut c = Self::zero(n_boundary);
        for (k, d) in terms {
            c.add_diagram(d, &DeltaPoly::int(*k));
        }
        c
    }

    pub fn n_boundary(&self) -> usize {
        self.n_boundary
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order; diagrams are canonical representatives.
    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &DeltaPoly)> {
        self.terms.values().map(|(d, c)| (d, c))
    }

    pub fn keyed_terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Diagram, &DeltaPoly)> {
        self.terms.iter().map(|(k, (d, c))| (k, d, c))
    }

    pub(crate) fn pop_first(&mut self) -> Option<(Diagram, DeltaPoly)> {
        self.terms.pop_first().map(|(_, t)| t)
    }

    pub fn add_diagram(&mut self, d: &Diagram, coeff: &DeltaPoly) {
        assert_eq!(d.n_boundary(), self.n_boundary, "boundary mismatch in combination");
        if coeff.is_zero() {
            return;
        }
        let c = canonicalize(d);
        if c.is_zero() {
            return;
        }
        let coeff = if c.sign < 0 { -coeff.clone() } else { coeff.clone() };
        self.add_canonical(c.bytes(), c.diagram, coeff);
    }

    fn add_canonical(&mut self, key: Vec<u8>, d: Diagram, coeff: DeltaPoly) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert((d, coeff));
            }
            Entry::Occupied(mut e) => {
                e.get_mut().1 += &coeff;
                if e.get().1.is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_combo(&mut self, other: &LinearCombo, factor: &DeltaPoly) {
        assert_eq!(other.n_boundary, self.n_boundary, "boundary mismatch in combination");
        if factor.is_zero() {
            return;
        }
        for (k, (d, c)) in &other.terms {
            self.add_canonical(k.clone(), d.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &DeltaPoly) -> LinearCombo {
        let mut out = Self::zero(self.n_boundary);
        out.add_combo(self, factor);
        out
    }

    pub fn sub(&self, other: &LinearCombo) -> LinearCombo {
        let mut out = self.clone();
        out.add_combo(other, &DeltaPoly::int(-1));
        out
    }

    /// Coefficient of `d` (after canonicalization, sign included).
    pub fn coefficient(&self, d: &Diagram) -> DeltaPoly {
        let c = canonicalize(d);
        if c.is_zero() {
            return DeltaPoly::zero();
        }
        match self.terms.get(&c.bytes()) {
            Some((_, k)) if c.sign > 0 => k.clone(),
            Some((_, k)) => -k.clone(),
            None => DeltaPoly::zero(),
        }
    }

    /// Applies a map to every diagram (e.g. boundary relabelling).
    pub fn map_diagrams(&self, n_boundary: usize, f: impl Fn(&Diagram) -> Diagram) -> LinearCombo {
        let mut out = Self::zero(n_boundary);
        for (d, c) in self.terms() {
            out.add_diagram(&f(d), c);
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&DeltaPoly) -> DeltaPoly) -> LinearCombo {
        let mut out = Self::zero(self.n_boundary);
        for (k, (d, c)) in &self.terms {
            let nc = f(c);
            if !nc.is_zero() {
                out.terms.insert(k.clone(), (d.clone(), nc));
            }
        }
        out
    }

    /// Substitutes a value for δ in every coefficient.
    pub fn at_delta(&self, delta: &crate::scalars::Rational) -> LinearCombo {
        self.map_coefficients(|c| DeltaPoly::constant(c.eval(delta)))
    }

    pub fn to_json(&self) -> LinearComboJson {
        LinearComboJson {
            n_boundary: self.n_boundary,
            terms: self
                .terms()
                .map(|(d, c)| TermJson {
                    coeff: c.clone(),
                    diagram: d.to_json(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct TermJson {
    pub coeff: DeltaPoly,
    pub diagram: DiagramJson,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct LinearComboJson {
    pub n_boundary: usize,
    pub terms: Vec<TermJson>,
}

impl LinearComboJson {
    pub fn to_combo(&self) -> Result<LinearCombo, super::graph::DiagramError> {
        let mut c = LinearCombo::zero(self.n_boundary);
        for t in &self.terms {
            c.add_diagram(&Diagram::from_json(&t.diagram)?, &t.coeff);
        }
        Ok(c)
    }
}

impl fmt::Display for LinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(d, c)| match super::basis_name(d) {
                Some((name, sign)) if d.free_loops() == 0 => {
                    let c = if sign < 0 { -c.clone() } else { c.clone() };
                    format!("({c})*[{name}]")
                }
                _ => format!("({c})*[{}]", super::describe(d)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::graph::{diagram, Leg::*};

    #[test]
    fn signs_cancel() {
        let v = diagram(3, &[[B(0), B(1), B(2)]], &[], 0);
        let w = diagram(3, &[[B(1), B(0), B(2)]], &[], 0);
        let mut c = LinearCombo::from_diagram(&v);
        c.add_diagram(&w, &DeltaPoly::one());
        assert!(c.is_zero());
        let mut c = LinearCombo::from_diagram(&v);
        c.add_diagram(&w, &DeltaPoly::int(-1));
        assert_eq!(c.coefficient(&v), DeltaPoly::int(2));
        assert_eq!(c.coefficient(&w), DeltaPoly::int(-2));
    }

    #[test]
    fn json_roundtrip() {
        let v = diagram(3, &[[B(0), B(1), B(2)]], &[], 0);
        let c = LinearCombo::from_diagram(&v).scale(&DeltaPoly::linear(crate::scalars::rat(3)));
        let j = serde_json::to_string(&c.to_json()).unwrap();
        let back: LinearComboJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_combo().unwrap(), c);
    }
}
