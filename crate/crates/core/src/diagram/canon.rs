//! Canonical labelling of diagrams up to isomorphism, tracking the sign
//! picked up from reordering antisymmetric vertex slots.
//!
//! Colour refinement first, then a breadth-first relabelling from the
//! boundary that branches only on ties and keeps the lexicographically
//! smallest code. Two minimal labellings with opposite signs mean the
//! diagram equals its own negative, hence zero.

use std::cmp::Ordering;

use super::graph::Diagram;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Relabelled representative; `original = sign * diagram`.
    pub diagram: Diagram,
    /// `+1`, `-1`, or `0` when the diagram is forced to vanish.
    pub sign: i8,
    code: Vec<u16>,
}

impl CanonicalForm {
    /// Big-endian serialization of the code; byte order agrees with code order.
    pub fn bytes(&self) -> Vec<u8> {
        self.code.iter().flat_map(|c| c.to_be_bytes()).collect()
    }

    pub fn code(&self) -> &[u16] {
        &self.code
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

pub fn canonicalize(d: &Diagram) -> CanonicalForm {
    let comps = closed_components(d);
    if comps.len() >= 2 {
        return canonicalize_split(d, &comps);
    }
    canonicalize_connected(d)
}

/// Closed components are labelled separately and sorted by code; searching
/// them jointly multiplies their automorphism counts.
fn canonicalize_split(d: &Diagram, comps: &[Vec<usize>]) -> CanonicalForm {
    let mut closed = vec![false; d.n_vertices()];
    comps.iter().flatten().for_each(|&v| closed[v] = true);
    let rest: Vec<usize> = (0..d.n_vertices()).filter(|&v| !closed[v]).collect();
    let head = canonicalize_connected(&induced(d, &rest, true));
    let mut parts: Vec<CanonicalForm> = comps.iter().map(|c| canonicalize_connected(&induced(d, c, false))).collect();
    parts.sort_by(|a, b| a.code.cmp(&b.code));
    let mut diagram = head.diagram;
    let mut code = vec![u16::MAX - 1];
    code.extend(&head.code);
    let mut sign = head.sign;
    for p in parts {
        diagram = diagram.disjoint_union(&p.diagram);
        code.push(u16::MAX);
        code.extend(&p.code);
        sign *= p.sign;
    }
    CanonicalForm { diagram, sign, code }
}

fn closed_components(d: &Diagram) -> Vec<Vec<usize>> {
    let nv = d.n_vertices();
    let mut comp = vec![usize::MAX; nv];
    let mut out = Vec::new();
    let starts = (0..d.n_boundary()).filter_map(|i| d.owner(d.mate(i))).map(|v| (v, false));
    for (root, closed) in starts.chain((0..nv).map(|v| (v, true))) {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for s in 0..3 {
                if let Some(w) = d.owner(d.mate(d.slot_port(v, s))) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
        }
        members.sort_unstable();
        out.push((closed, members));
    }
    out.into_iter().filter(|(c, _)| *c).map(|(_, m)| m).collect()
}

// the subdiagram on `keep`, with the boundary and free loops when `boundary`
fn induced(d: &Diagram, keep: &[usize], boundary: bool) -> Diagram {
    let n = if boundary { d.n_boundary() } else { 0 };
    let mut pos = vec![usize::MAX; d.n_ports()];
    for (i, p) in pos.iter_mut().enumerate().take(n) {
        *p = i;
    }
    for (k, &v) in keep.iter().enumerate() {
        for s in 0..3 {
            pos[d.slot_port(v, s)] = n + 3 * k + s;
        }
    }
    let mut mate = vec![0; n + 3 * keep.len()];
    for p in 0..d.n_ports() {
        if pos[p] != usize::MAX {
            mate[pos[p]] = pos[d.mate(p)];
        }
    }
    let loops = if boundary { d.free_loops() } else { 0 };
    Diagram::from_parts(n, keep.len(), mate, loops)
}

fn canonicalize_connected(d: &Diagram) -> CanonicalForm {
    let colors = refine_colors(d, vec![0; d.n_vertices()]);
    let mut search = Search {
        d,
        colors,
        best: None,
        conflict: false,
    };
    let nv = d.n_vertices();
    let st = State {
        order: Vec::with_capacity(nv),
        index: vec![usize::MAX; nv],
        perm: vec![[0, 1, 2]; nv],
        processed: 0,
        boundary_done: false,
        code: vec![d.n_boundary() as u16, nv as u16, d.free_loops() as u16],
    };
    search.step(st);
    let best = search.best.expect("search always completes one labelling");
    let diagram = relabel(d, &best);
    let sign = if search.conflict { 0 } else { best_sign(&best) };
    CanonicalForm {
        diagram,
        sign,
        code: best.code,
    }
}

fn refine_colors(d: &Diagram, mut color: Vec<u32>) -> Vec<u32> {
    let nv = d.n_vertices();
    let mut classes = {
        let mut c = color.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(u32, [(u8, u32); 3])> = (0..nv)
            .map(|v| {
                let mut desc = [(0u8, 0u32); 3];
                for (s, slot) in desc.iter_mut().enumerate() {
                    let m = d.mate(d.slot_port(v, s));
                    *slot = match d.owner(m) {
                        None => (0, m as u32),
                        Some(w) => (1, color[w]),
                    };
                }
                desc.sort_unstable();
                (color[v], desc)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort_unstable();
        uniq.dedup();
        for v in 0..nv {
            color[v] = uniq.binary_search(&sigs[v]).expect("present") as u32;
        }
        if uniq.len() == classes {
            return color;
        }
        classes = uniq.len();
    }
}

#[derive(Clone, Debug)]
struct State {
    order: Vec<usize>,
    index: Vec<usize>,
    /// `perm[v][t]` is the original slot placed at local position `t`.
    perm: Vec<[u8; 3]>,
    processed: usize,
    boundary_done: bool,
    code: Vec<u16>,
}

impl State {
    fn local_pos(&self, v: usize, s: usize) -> usize {
        self.perm[v].iter().position(|&x| x as usize == s).expect("slot")
    }
}

struct Search<'a> {
    d: &'a Diagram,
    colors: Vec<u32>,
    best: Option<State>,
    conflict: bool,
}

impl Search<'_> {
    fn encode(&self, st: &State, port: usize) -> u16 {
        let d = self.d;
        match d.owner(port) {
            None => port as u16,
            Some(w) => {
                let s = port - d.slot_port(w, 0);
                (d.n_boundary() + 3 * st.index[w] + st.local_pos(w, s)) as u16
            }
        }
    }

    /// Order key for a slot's mate while vertex `w` is being discovered.
    fn slot_key(&self, st: &State, w: usize, s: usize) -> (u8, u32) {
        let d = self.d;
        let m = d.mate(d.slot_port(w, s));
        match d.owner(m) {
            None => (0, m as u32),
            Some(u) if u == w => (3, 0),
            Some(u) if st.index[u] != usize::MAX => {
                let t = m - d.slot_port(u, 0);
                (1, (3 * st.index[u] + st.local_pos(u, t)) as u32)
            }
            Some(u) => (2, self.colors[u]),
        }
    }

    fn discover_options(&self, st: &State, w: usize, entry: usize) -> Vec<State> {
        let others: Vec<usize> = (0..3).filter(|&s| s != entry).collect();
        let (p, q) = (others[0], others[1]);
        let (kp, kq) = (self.slot_key(st, w, p), self.slot_key(st, w, q));
        let orders: Vec<[usize; 2]> = match kp.cmp(&kq) {
            Ordering::Less => vec![[p, q]],
            Ordering::Greater => vec![[q, p]],
            Ordering::Equal => vec![[p, q], [q, p]],
        };
        orders
            .into_iter()
            .map(|[a, b]| {
                let mut next = st.clone();
                next.perm[w] = [entry as u8, a as u8, b as u8];
                next.index[w] = next.order.len();
                next.order.push(w);
                next
            })
            .collect()
    }

    fn prefix_cmp(&self, code: &[u16]) -> Ordering {
        match &self.best {
            None => Ordering::Less,
            Some(b) => code.cmp(&b.code[..code.len().min(b.code.len())]),
        }
    }

    fn step(&mut self, mut st: State) {
        let d = self.d;
        let n = d.n_boundary();
        loop {
            if !st.boundary_done {
                let pending = (0..n).find_map(|i| {
                    let m = d.mate(i);
                    d.owner(m)
                        .filter(|&w| st.index[w] == usize::MAX)
                        .map(|w| (w, m - d.slot_port(w, 0)))
                });
                if let Some((w, entry)) = pending {
                    for next in self.discover_options(&st, w, entry) {
                        self.step(next);
                    }
                    return;
                }
                for i in 0..n {
                    let e = self.encode(&st, d.mate(i));
                    st.code.push(e);
                }
                st.boundary_done = true;
                if self.prefix_cmp(&st.code) == Ordering::Greater {
                    return;
                }
                continue;
            }
            if st.processed < st.order.len() {
                let v = st.order[st.processed];
                let pending = (0..3).find_map(|t| {
                    let s = st.perm[v][t] as usize;
                    let m = d.mate(d.slot_port(v, s));
                    d.owner(m)
                        .filter(|&w| st.index[w] == usize::MAX)
                        .map(|w| (w, m - d.slot_port(w, 0)))
                });
                if let Some((w, entry)) = pending {
                    for next in self.discover_options(&st, w, entry) {
                        self.step(next);
                    }
                    return;
                }
                for t in 0..3 {
                    let s = st.perm[v][t] as usize;
                    let e = self.encode(&st, d.mate(d.slot_port(v, s)));
                    st.code.push(e);
                }
                st.processed += 1;
                if self.prefix_cmp(&st.code) == Ordering::Greater {
                    return;
                }
                continue;
            }
            if st.order.len() < d.n_vertices() {
                let min_color = (0..d.n_vertices())
                    .filter(|&w| st.index[w] == usize::MAX)
                    .map(|w| self.colors[w])
                    .min()
                    .expect("undiscovered vertex");
                // separator between components keeps codes prefix-free
                st.code.push(u16::MAX);
                let roots: Vec<usize> = (0..d.n_vertices())
                    .filter(|&w| st.index[w] == usize::MAX && self.colors[w] == min_color)
                    .collect();
                let saved = self.colors.clone();
                for w in roots {
                    // refine again with the root individualized to cut ties
                    let mut init = saved.clone();
                    init[w] = u32::MAX;
                    self.colors = refine_colors(d, init);
                    for entry in 0..3 {
                        for next in self.discover_options(&st, w, entry) {
                            self.step(next);
                        }
                    }
                }
                self.colors = saved;
                return;
            }
            self.finish(st);
            return;
        }
    }

    fn finish(&mut self, st: State) {
        match self.prefix_cmp(&st.code) {
            Ordering::Less => {
                self.best = Some(st);
                self.conflict = false;
            }
            Ordering::Equal => {
                let best = self.best.as_ref().expect("equal implies best");
                if best_sign(best) != best_sign(&st) {
                    self.conflict = true;
                }
            }
            Ordering::Greater => {}
        }
    }
}

fn parity(p: [u8; 3]) -> i8 {
    match p {
        [0, 1, 2] | [1, 2, 0] | [2, 0, 1] => 1,
        _ => -1,
    }
}

fn best_sign(st: &State) -> i8 {
    st.perm.iter().map(|&p| parity(p)).product()
}

fn relabel(d: &Diagram, st: &State) -> Diagram {
    let n = d.n_boundary();
    let map = |port: usize| -> usize {
        match d.owner(port) {
            None => port,
            Some(w) => n + 3 * st.index[w] + st.local_pos(w, port - d.slot_port(w, 0)),
        }
    };
    let mut mate = vec![0; d.n_ports()];
    for p in 0..d.n_ports() {
        mate[map(p)] = map(d.mate(p));
    }
    Diagram::from_parts(n, d.n_vertices(), mate, d.free_loops())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::graph::{diagram, Leg::*};

    #[test]
    fn slot_swap_flips_sign() {
        let v = diagram(3, &[[B(0), B(1), B(2)]], &[], 0);
        let w = v.permute_slots(0, [1, 0, 2]);
        let (cv, cw) = (canonicalize(&v), canonicalize(&w));
        assert_eq!(cv.bytes(), cw.bytes());
        assert_eq!(cv.sign, -cw.sign);
        let r = v.permute_slots(0, [1, 2, 0]);
        assert_eq!(canonicalize(&r).sign, cv.sign);
    }

    #[test]
    fn tadpole_and_symmetric_graphs_vanish() {
        let tadpole = diagram(1, &[[E(0), E(0), B(0)]], &[], 0);
        assert!(canonicalize(&tadpole).is_zero());
        // theta graph: swapping the two vertices is an odd relabelling
        let theta = diagram(0, &[[E(0), E(1), E(2)], [E(0), E(1), E(2)]], &[], 0);
        let c = canonicalize(&theta);
        assert!(!c.is_zero());
        let k4 = diagram(
            0,
            &[[E(0), E(1), E(2)], [E(0), E(3), E(4)], [E(1), E(5), E(3)], [E(2), E(4), E(5)]],
            &[],
            0,
        );
        assert!(!canonicalize(&k4).is_zero());
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let d = diagram(
            4,
            &[[B(2), E(0), B(0)], [E(1), E(0), B(3)], [E(1), B(1), E(2)], [E(2), E(3), E(3)]],
            &[],
            1,
        );
        let c = canonicalize(&d);
        let again = canonicalize(&c.diagram);
        assert_eq!(again.bytes(), c.bytes());
        assert_eq!(again.diagram, c.diagram);
        assert!(again.sign == 1 || again.sign == 0);
    }

    #[test]
    fn vertex_renumbering_is_invisible() {
        let a = diagram(4, &[[B(0), B(1), E(0)], [E(0), B(2), B(3)]], &[], 0);
        let b = diagram(4, &[[E(0), B(2), B(3)], [B(0), B(1), E(0)]], &[], 0);
        let (ca, cb) = (canonicalize(&a), canonicalize(&b));
        assert_eq!(ca.bytes(), cb.bytes());
        assert_eq!(ca.sign, cb.sign);
        let c = diagram(4, &[[B(1), B(2), E(0)], [E(0), B(3), B(0)]], &[], 0);
        assert_ne!(canonicalize(&c).bytes(), ca.bytes());
    }

    #[test]
    fn closed_components_commute() {
        let theta = diagram(0, &[[E(0), E(1), E(2)], [E(0), E(1), E(2)]], &[], 0);
        let bell = diagram(0, &[[E(0), E(0), E(1)], [E(2), E(2), E(1)]], &[], 0);
        let edge = diagram(2, &[], &[(0, 1)], 1);
        let a = edge.disjoint_union(&theta).disjoint_union(&bell).disjoint_union(&theta);
        let b = edge.disjoint_union(&theta).disjoint_union(&theta).disjoint_union(&bell);
        let (ca, cb) = (canonicalize(&a), canonicalize(&b));
        assert_eq!(ca.bytes(), cb.bytes());
        assert_eq!(ca.sign, cb.sign);
        // the dumbbell has an odd automorphism
        assert!(canonicalize(&bell).is_zero());
        assert!(ca.is_zero());
        let c = edge.disjoint_union(&theta).disjoint_union(&theta.permute_slots(0, [1, 0, 2]));
        let cc = canonicalize(&c);
        assert_eq!(cc.sign, -canonicalize(&theta).sign * canonicalize(&theta).sign);
        let again = canonicalize(&cc.diagram);
        assert_eq!(again.diagram, cc.diagram);
        assert_eq!(again.sign, 1);
    }
}
