//! Exhaustive list of closed diagrams up to isomorphism.
//!
//! Every closed trivalent diagram on `n + 2` vertices arises from one on
//! `n` vertices, plus at most two free loops, by putting a point on two
//! edges (or loops) and joining the points by a new edge: delete any
//! non-loop edge and smooth its ends to go back.

use std::collections::HashSet;

use super::canon::canonicalize;
use super::graph::Diagram;

/// Closed diagrams without free loops, indexed by vertex count (odd counts
/// are empty). Diagrams that vanish by antisymmetry are included.
pub fn closed_diagrams(max_vertices: usize) -> Vec<Vec<Diagram>> {
    let mut out: Vec<Vec<Diagram>> = vec![Vec::new(); max_vertices + 1];
    out[0].push(Diagram::empty());
    for n in (2..=max_vertices).step_by(2) {
        let mut seen = HashSet::new();
        let mut level = Vec::new();
        for h in &out[n - 2] {
            for g in grow(h) {
                if seen.insert(canonicalize(&g).bytes()) {
                    level.push(g);
                }
            }
        }
        out[n] = level;
    }
    out
}

// all insertions of one edge into h plus up to two free loops, using every loop
fn grow(h: &Diagram) -> Vec<Diagram> {
    let n = h.n_vertices();
    let base: Vec<usize> = (0..3 * n).map(|p| h.mate(p)).collect();
    let edges: Vec<(usize, usize)> = (0..3 * n).filter(|&p| p < base[p]).map(|p| (p, base[p])).collect();
    let (p, q) = (3 * n, 3 * n + 3);
    let mut out = Vec::new();
    let mut emit = |pairs: &[(usize, usize)]| {
        let mut mate = base.clone();
        mate.resize(3 * n + 6, usize::MAX);
        for &(a, b) in pairs {
            mate[a] = b;
            mate[b] = a;
        }
        out.push(Diagram::from_parts(0, n + 2, mate, 0));
    };
    for (i, &(x1, y1)) in edges.iter().enumerate() {
        // both points on one edge
        emit(&[(p, x1), (p + 1, q), (q + 1, y1), (p + 2, q + 2)]);
        for &(x2, y2) in &edges[i + 1..] {
            emit(&[(p, x1), (p + 1, y1), (q, x2), (q + 1, y2), (p + 2, q + 2)]);
        }
        // the other point on a free loop
        emit(&[(p, x1), (p + 1, y1), (q, q + 1), (p + 2, q + 2)]);
    }
    // theta and dumbbell components
    emit(&[(p, q), (p + 1, q + 1), (p + 2, q + 2)]);
    emit(&[(p, p + 1), (q, q + 1), (p + 2, q + 2)]);
    out
}

/// Whether the vertices form one connected component.
pub fn is_connected(d: &Diagram) -> bool {
    let n = d.n_vertices();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for s in 0..3 {
            if let Some(w) = d.owner(d.mate(d.slot_port(v, s))) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen.into_iter().all(|b| b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_counts() {
        // connected cubic multigraphs with loops on 2, 4, 6, 8 vertices
        let all = closed_diagrams(8);
        let counts: Vec<usize> = [2, 4, 6, 8].iter().map(|&n| all[n].iter().filter(|d| is_connected(d)).count()).collect();
        assert_eq!(counts, vec![2, 5, 17, 71]);
    }

    #[test]
    fn connected_count_ten() {
        let all = closed_diagrams(10);
        assert_eq!(all[10].iter().filter(|d| is_connected(d)).count(), 388);
    }
}
