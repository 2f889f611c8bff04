//! Randomized confluence evidence: normal forms under the deterministic
//! strategy against normal forms under random rewrite orders.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::canon::canonicalize;
use super::combo::{LinearCombo, LinearComboJson};
use super::graph::{Diagram, DiagramJson};
use super::rules::{normalize_random, Normalizer, RuleSet};

/// Uniformly random perfect matching on the ports.
pub fn random_diagram<R: Rng>(rng: &mut R, n_boundary: usize, n_vertices: usize, free_loops: u32) -> Diagram {
    let total = n_boundary + 3 * n_vertices;
    assert!(total.is_multiple_of(2), "odd number of ports");
    let mut ports: Vec<usize> = (0..total).collect();
    ports.shuffle(rng);
    let mut mate = vec![0; total];
    for pair in ports.chunks(2) {
        mate[pair[0]] = pair[1];
        mate[pair[1]] = pair[0];
    }
    Diagram::from_parts(n_boundary, n_vertices, mate, free_loops)
}

/// Random diagram with at most `max_boundary` legs and `max_vertices`
/// vertices, resampled a few times to avoid diagrams that vanish by
/// antisymmetry.
pub fn random_small_diagram<R: Rng>(rng: &mut R, max_boundary: usize, max_vertices: usize) -> Diagram {
    let mut d = random_any_diagram(rng, max_boundary, max_vertices);
    for _ in 0..32 {
        if !canonicalize(&d).is_zero() {
            break;
        }
        d = random_any_diagram(rng, max_boundary, max_vertices);
    }
    d
}

fn random_any_diagram<R: Rng>(rng: &mut R, max_boundary: usize, max_vertices: usize) -> Diagram {
    let n = rng.gen_range(0..=max_boundary);
    let choices: Vec<usize> = (0..=max_vertices).filter(|v| (n + 3 * v) % 2 == 0).collect();
    let v = match choices.choose(rng) {
        Some(&v) => v,
        None => return random_any_diagram(rng, max_boundary, max_vertices),
    };
    let loops = rng.gen_range(0..=1);
    random_diagram(rng, n, v, loops)
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub diagram: DiagramJson,
    pub deterministic: LinearComboJson,
    pub randomized: LinearComboJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub orders_per_trial: usize,
    pub mismatch_count: usize,
    /// First few mismatches.
    pub mismatches: Vec<Mismatch>,
}

impl ProbeReport {
    pub fn is_clean(&self) -> bool {
        self.mismatch_count == 0
    }
}

const ORDERS: usize = 2;
const KEEP: usize = 8;

/// Normalizes random diagrams (≤ 4 legs, ≤ `size_bound` vertices) under
/// the deterministic order and under random orders and reports disagreements.
pub fn confluence_probe(rules: &RuleSet, size_bound: usize, trials: usize, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut det = Normalizer::new(rules);
    let mut report = ProbeReport {
        trials,
        orders_per_trial: ORDERS,
        mismatch_count: 0,
        mismatches: Vec::new(),
    };
    for _ in 0..trials {
        let d = random_small_diagram(&mut rng, 4, size_bound);
        let start = LinearCombo::from_diagram(&d);
        let reference = det.normalize(&start);
        for _ in 0..ORDERS {
            let other = normalize_random(&start, rules, &mut rng);
            if other != reference {
                report.mismatch_count += 1;
                if report.mismatches.len() < KEEP {
                    report.mismatches.push(Mismatch {
                        diagram: d.to_json(),
                        deterministic: reference.to_json(),
                        randomized: other.to_json(),
                    });
                }
                break;
            }
        }
    }
    report
}
