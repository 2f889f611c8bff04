use serde::Serialize;

use crate::scalars::{format_rational, Rational};

/// One failed identity: which basis indices, which check, and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: String,
    pub indices: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of an exhaustive identity scan. `passed` iff no witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: usize,
    pub witnesses: Vec<Witness>,
}

/// Witness lists are capped so a badly broken table doesn't produce
/// megabytes of output; `checks` still counts every comparison.
pub const MAX_WITNESSES: usize = 16;

impl VerificationReport {
    pub fn new() -> Self {
        Self {
            passed: true,
            checks: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records a comparison of two vectors; mismatches become witnesses.
    pub fn compare(&mut self, check: &str, indices: &[usize], lhs: &[Rational], rhs: &[Rational]) {
        self.checks += 1;
        if lhs != rhs {
            self.fail(check, indices, fmt_vec(lhs), fmt_vec(rhs));
        }
    }

    pub fn compare_scalar(&mut self, check: &str, indices: &[usize], lhs: &Rational, rhs: &Rational) {
        self.checks += 1;
        if lhs != rhs {
            self.fail(check, indices, format_rational(lhs), format_rational(rhs));
        }
    }

    pub fn fail(&mut self, check: &str, indices: &[usize], lhs: String, rhs: String) {
        self.passed = false;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                check: check.to_string(),
                indices: indices.to_vec(),
                lhs,
                rhs,
            });
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.passed &= other.passed;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

pub(crate) fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", parts.join(","))
}
