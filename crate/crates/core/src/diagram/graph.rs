//! Trivalent diagrams as a fixed-point-free involution on ports.
//!
//! Port numbering: boundary point `i` is port `i`; slot `s` of vertex `v`
//! is port `n_boundary + 3v + s`. Slot order is the (antisymmetric) tensor
//! index order of the vertex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("expected {expected} boundary points, found {found}")]
    BoundaryMismatch { expected: usize, found: usize },
    #[error("closed diagram did not reduce to a scalar ({0} residual terms)")]
    Irreducible(usize),
    #[error("derivation mismatch: {0}")]
    DerivationMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Boundary(usize),
    Slot(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    n_boundary: usize,
    n_vertices: usize,
    mate: Vec<usize>,
    free_loops: u32,
}

/// One leg of a vertex in [`DiagramBuilder::vertex`]: a boundary point or an
/// internal edge label that must occur exactly twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    B(usize),
    E(usize),
}

#[derive(Debug, Default)]
pub struct DiagramBuilder {
    n_boundary: usize,
    vertices: Vec<[Leg; 3]>,
    pairs: Vec<(usize, usize)>,
    loops: u32,
}

impl DiagramBuilder {
    pub fn new(n_boundary: usize) -> Self {
        Self {
            n_boundary,
            ..Default::default()
        }
    }

    pub fn vertex(mut self, legs: [Leg; 3]) -> Self {
        self.vertices.push(legs);
        self
    }

    /// Edge joining two boundary points directly.
    pub fn pair(mut self, a: usize, b: usize) -> Self {
        self.pairs.push((a, b));
        self
    }

    pub fn loops(mut self, k: u32) -> Self {
        self.loops += k;
        self
    }

    pub fn build(self) -> Result<Diagram, DiagramError> {
        let mut edges = Vec::new();
        let mut labels: std::collections::BTreeMap<usize, Vec<Endpoint>> = Default::default();
        for (v, legs) in self.vertices.iter().enumerate() {
            for (s, leg) in legs.iter().enumerate() {
                match *leg {
                    Leg::B(i) => edges.push((Endpoint::Boundary(i), Endpoint::Slot(v, s))),
                    Leg::E(l) => labels.entry(l).or_default().push(Endpoint::Slot(v, s)),
                }
            }
        }
        for (l, ends) in labels {
            if ends.len() != 2 {
                return Err(DiagramError::Malformed(format!(
                    "edge label {l} used {} times",
                    ends.len()
                )));
            }
            edges.push((ends[0], ends[1]));
        }
        for (a, b) in self.pairs {
            edges.push((Endpoint::Boundary(a), Endpoint::Boundary(b)));
        }
        Diagram::new(self.n_boundary, self.vertices.len(), &edges, self.loops)
    }
}

/// Shorthand for tests and fixed patterns; panics on malformed input.
pub fn diagram(n_boundary: usize, vertices: &[[Leg; 3]], pairs: &[(usize, usize)], loops: u32) -> Diagram {
    let mut b = DiagramBuilder::new(n_boundary).loops(loops);
    for v in vertices {
        b = b.vertex(*v);
    }
    for &(x, y) in pairs {
        b = b.pair(x, y);
    }
    b.build().expect("well-formed fixed diagram")
}

impl Diagram {
    pub fn new(
        n_boundary: usize,
        n_vertices: usize,
        edges: &[(Endpoint, Endpoint)],
        free_loops: u32,
    ) -> Result<Self, DiagramError> {
        let total = n_boundary + 3 * n_vertices;
        let mut mate = vec![usize::MAX; total];
        let port = |e: Endpoint| -> Result<usize, DiagramError> {
            match e {
                Endpoint::Boundary(i) if i < n_boundary => Ok(i),
                Endpoint::Slot(v, s) if v < n_vertices && s < 3 => Ok(n_boundary + 3 * v + s),
                other => Err(DiagramError::Malformed(format!("endpoint {other:?} out of range"))),
            }
        };
        for &(a, b) in edges {
            let (pa, pb) = (port(a)?, port(b)?);
            if pa == pb || mate[pa] != usize::MAX || mate[pb] != usize::MAX {
                return Err(DiagramError::Malformed(format!("endpoint reused in edge {a:?}-{b:?}")));
            }
            mate[pa] = pb;
            mate[pb] = pa;
        }
        if let Some(p) = mate.iter().position(|&m| m == usize::MAX) {
            return Err(DiagramError::Malformed(format!("port {p} is not covered by an edge")));
        }
        Ok(Self {
            n_boundary,
            n_vertices,
            mate,
            free_loops,
        })
    }

    pub(crate) fn from_parts(n_boundary: usize, n_vertices: usize, mate: Vec<usize>, free_loops: u32) -> Self {
        debug_assert_eq!(mate.len(), n_boundary + 3 * n_vertices);
        debug_assert!(mate.iter().enumerate().all(|(p, &m)| m != p && mate[m] == p));
        Self {
            n_boundary,
            n_vertices,
            mate,
            free_loops,
        }
    }

    pub fn empty() -> Self {
        Self::from_parts(0, 0, Vec::new(), 0)
    }

    pub fn n_boundary(&self) -> usize {
        self.n_boundary
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn with_loops(&self, k: u32) -> Self {
        Self {
            free_loops: k,
            ..self.clone()
        }
    }

    pub fn n_ports(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, port: usize) -> usize {
        self.mate[port]
    }

    pub fn slot_port(&self, v: usize, s: usize) -> usize {
        self.n_boundary + 3 * v + s
    }

    pub fn endpoint(&self, port: usize) -> Endpoint {
        if port < self.n_boundary {
            Endpoint::Boundary(port)
        } else {
            let q = port - self.n_boundary;
            Endpoint::Slot(q / 3, q % 3)
        }
    }

    /// Vertex owning a port, `None` for boundary ports.
    pub fn owner(&self, port: usize) -> Option<usize> {
        (port >= self.n_boundary).then(|| (port - self.n_boundary) / 3)
    }

    /// Each edge once, as endpoint pairs ordered by lower port.
    pub fn edges(&self) -> Vec<(Endpoint, Endpoint)> {
        (0..self.n_ports())
            .filter(|&p| p < self.mate[p])
            .map(|p| (self.endpoint(p), self.endpoint(self.mate[p])))
            .collect()
    }

    /// Relabels boundary point `i` as `perm[i]`.
    pub fn permute_boundary(&self, perm: &[usize]) -> Diagram {
        assert_eq!(perm.len(), self.n_boundary);
        let n = self.n_boundary;
        let map = |p: usize| if p < n { perm[p] } else { p };
        let mut mate = vec![0; self.n_ports()];
        for p in 0..self.n_ports() {
            mate[map(p)] = map(self.mate[p]);
        }
        Self::from_parts(n, self.n_vertices, mate, self.free_loops)
    }

    /// Boundary point `i` becomes `i + k (mod n)`.
    pub fn rotate(&self, k: usize) -> Diagram {
        let n = self.n_boundary;
        let perm: Vec<usize> = (0..n).map(|i| (i + k) % n).collect();
        self.permute_boundary(&perm)
    }

    /// Reorders the slots of vertex `v`: new slot `t` is old slot `order[t]`.
    pub fn permute_slots(&self, v: usize, order: [usize; 3]) -> Diagram {
        let base = self.slot_port(v, 0);
        let mut map: Vec<usize> = (0..self.n_ports()).collect();
        for (t, &s) in order.iter().enumerate() {
            map[base + s] = base + t;
        }
        let mut mate = vec![0; self.n_ports()];
        for p in 0..self.n_ports() {
            mate[map[p]] = map[self.mate[p]];
        }
        Self::from_parts(self.n_boundary, self.n_vertices, mate, self.free_loops)
    }

    /// Joins boundary points `i` and `j` by an edge; the remaining boundary
    /// points keep their relative order.
    pub fn join_boundary(&self, i: usize, j: usize) -> Diagram {
        assert!(i != j && i < self.n_boundary && j < self.n_boundary);
        let n = self.n_boundary;
        let keep: Vec<usize> = (0..n).filter(|&b| b != i && b != j).collect();
        let new_n = n - 2;
        let map = |p: usize| -> usize {
            if p < n {
                keep.iter().position(|&b| b == p).expect("kept boundary")
            } else {
                p - n + new_n
            }
        };
        let mut mate = vec![usize::MAX; new_n + 3 * self.n_vertices];
        let mut loops = self.free_loops;
        for p in 0..self.n_ports() {
            if p == i || p == j {
                continue;
            }
            let mut q = self.mate[p];
            if q == i || q == j {
                let other = if q == i { j } else { i };
                q = self.mate[other];
            }
            mate[map(p)] = map(q);
        }
        if self.mate[i] == j {
            loops += 1;
        }
        Self::from_parts(new_n, self.n_vertices, mate, loops)
    }

    /// Attaches a new vertex with slots `(i, j, new)` to boundary points
    /// `i` and `j`; the new leg takes the position of `min(i, j)`.
    pub fn cap_with_vertex(&self, i: usize, j: usize) -> Diagram {
        assert!(i != j && i < self.n_boundary && j < self.n_boundary);
        let n = self.n_boundary;
        let new_n = n - 1;
        let lo = i.min(j);
        let hi = i.max(j);
        let bmap = |b: usize| -> usize {
            if b < hi {
                b
            } else {
                b - 1
            }
        };
        let nv = self.n_vertices + 1;
        let new_vertex_slot = |s: usize| new_n + 3 * self.n_vertices + s;
        let map = |p: usize| -> usize {
            if p < n {
                bmap(p)
            } else {
                p - n + new_n
            }
        };
        let mut mate = vec![usize::MAX; new_n + 3 * nv];
        for p in 0..self.n_ports() {
            if p == i || p == j {
                continue;
            }
            let q = self.mate[p];
            let target = if q == i {
                new_vertex_slot(0)
            } else if q == j {
                new_vertex_slot(1)
            } else {
                map(q)
            };
            mate[map(p)] = target;
            mate[target] = map(p);
        }
        if self.mate[i] == j {
            mate[new_vertex_slot(0)] = new_vertex_slot(1);
            mate[new_vertex_slot(1)] = new_vertex_slot(0);
        }
        mate[new_vertex_slot(2)] = lo;
        mate[lo] = new_vertex_slot(2);
        Self::from_parts(new_n, nv, mate, self.free_loops)
    }

    /// Disjoint union; boundary points of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Diagram) -> Diagram {
        let (n1, n2) = (self.n_boundary, other.n_boundary);
        let n = n1 + n2;
        let map1 = |p: usize| if p < n1 { p } else { p - n1 + n };
        let map2 = |p: usize| {
            if p < n2 {
                n1 + p
            } else {
                n + 3 * self.n_vertices + (p - n2)
            }
        };
        let mut mate = vec![0; n + 3 * (self.n_vertices + other.n_vertices)];
        for p in 0..self.n_ports() {
            mate[map1(p)] = map1(self.mate[p]);
        }
        for p in 0..other.n_ports() {
            mate[map2(p)] = map2(other.mate[p]);
        }
        Self::from_parts(n, self.n_vertices + other.n_vertices, mate, self.free_loops + other.free_loops)
    }

    /// Subdiagram on `vertices` whose boundary point `i` is the host port
    /// `legs[i]`. Every other port of those vertices must be mated inside
    /// the set.
    pub fn extract(&self, vertices: &[usize], legs: &[usize]) -> Result<Diagram, DiagramError> {
        let k = legs.len();
        let local = |v: usize| vertices.iter().position(|&w| w == v);
        let map = |p: usize| -> Option<usize> {
            if let Some(i) = legs.iter().position(|&l| l == p) {
                return Some(usize::MAX - i);
            }
            let v = self.owner(p)?;
            let lv = local(v)?;
            Some(k + 3 * lv + (p - self.slot_port(v, 0)))
        };
        let mut mate = vec![usize::MAX; k + 3 * vertices.len()];
        for (lv, &v) in vertices.iter().enumerate() {
            for s in 0..3 {
                let p = self.slot_port(v, s);
                let me = k + 3 * lv + s;
                if let Some(i) = legs.iter().position(|&l| l == p) {
                    mate[me] = i;
                    mate[i] = me;
                    continue;
                }
                match map(self.mate[p]) {
                    Some(q) if q < usize::MAX - k => mate[me] = q,
                    _ => {
                        return Err(DiagramError::Malformed(format!(
                            "port {p} leaves the extracted vertex set"
                        )))
                    }
                }
            }
        }
        if mate.contains(&usize::MAX) {
            return Err(DiagramError::Malformed("extraction legs do not match vertex set".into()));
        }
        Ok(Self::from_parts(k, vertices.len(), mate, 0))
    }

    /// Replaces the vertices `removed` by `term`, identifying boundary point
    /// `i` of `term` with host port `legs[i]` (a port of a removed vertex).
    /// Chains of identified legs are traced through, closed chains become
    /// free loops.
    pub fn substitute(&self, removed: &[usize], legs: &[usize], term: &Diagram) -> Diagram {
        assert_eq!(legs.len(), term.n_boundary);
        let n = self.n_boundary;
        let kept: Vec<usize> = (0..self.n_vertices).filter(|v| !removed.contains(v)).collect();
        let mut new_index = vec![usize::MAX; self.n_vertices];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i;
        }
        let nv = kept.len() + term.n_vertices;
        let host_map = |p: usize| -> Option<usize> {
            if p < n {
                return Some(p);
            }
            let v = self.owner(p)?;
            (new_index[v] != usize::MAX).then(|| n + 3 * new_index[v] + (p - self.slot_port(v, 0)))
        };
        let term_map = |p: usize| n + 3 * (kept.len() + (p - term.n_boundary) / 3) + (p - term.n_boundary) % 3;
        let leg_of = |p: usize| legs.iter().position(|&l| l == p);

        #[derive(Clone, Copy)]
        enum Side {
            Host(usize),
            Term(usize),
        }
        // follow from a port until a terminal port is reached; returns the
        // terminal in new numbering and marks traversed legs
        let walk = |start: Side, seen: &mut Vec<bool>| -> usize {
            let mut cur = start;
            loop {
                match cur {
                    Side::Host(p) => {
                        let q = self.mate[p];
                        if let Some(i) = leg_of(q) {
                            seen[i] = true;
                            cur = Side::Term(i);
                        } else {
                            return host_map(q).expect("non-leg port of removed vertex escaped");
                        }
                    }
                    Side::Term(b) => {
                        let q = term.mate(b);
                        if q < term.n_boundary {
                            seen[q] = true;
                            cur = Side::Host(legs[q]);
                        } else {
                            return term_map(q);
                        }
                    }
                }
            }
        };

        let mut mate = vec![usize::MAX; n + 3 * nv];
        let mut seen = vec![false; legs.len()];
        for p in 0..self.n_ports() {
            if let Some(np) = host_map(p) {
                mate[np] = walk(Side::Host(p), &mut seen);
            }
        }
        for p in term.n_boundary..term.n_ports() {
            let q = term.mate(p);
            mate[term_map(p)] = if q < term.n_boundary {
                seen[q] = true;
                walk(Side::Host(legs[q]), &mut seen)
            } else {
                term_map(q)
            };
        }
        // remaining legs lie on closed chains
        let mut loops = self.free_loops + term.free_loops;
        for i in 0..legs.len() {
            if seen[i] {
                continue;
            }
            loops += 1;
            let mut b = i;
            loop {
                seen[b] = true;
                let hq = self.mate[legs[b]];
                let j = leg_of(hq).expect("closed chain through legs");
                seen[j] = true;
                b = term.mate(j);
                debug_assert!(b < term.n_boundary);
                if seen[b] {
                    break;
                }
            }
        }
        Self::from_parts(n, nv, mate, loops)
    }
}

/// Exchange format: endpoints are `["b", i]` or `["v", id, slot]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub n_boundary: usize,
    pub vertices: Vec<Vec<serde_json::Value>>,
    pub edges: Vec<[serde_json::Value; 2]>,
    #[serde(default)]
    pub free_loops: u32,
}

fn endpoint_json(e: Endpoint) -> serde_json::Value {
    match e {
        Endpoint::Boundary(i) => serde_json::json!(["b", i]),
        Endpoint::Slot(v, s) => serde_json::json!(["v", v, s]),
    }
}

fn endpoint_from_json(v: &serde_json::Value) -> Result<Endpoint, DiagramError> {
    let bad = || DiagramError::Malformed(format!("bad endpoint {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    let num = |i: usize| -> Result<usize, DiagramError> {
        arr.get(i).and_then(|x| x.as_u64()).map(|x| x as usize).ok_or_else(bad)
    };
    match (arr.first().and_then(|t| t.as_str()), arr.len()) {
        (Some("b"), 2) => Ok(Endpoint::Boundary(num(1)?)),
        (Some("v"), 3) => Ok(Endpoint::Slot(num(1)?, num(2)?)),
        _ => Err(bad()),
    }
}

impl Diagram {
    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            n_boundary: self.n_boundary,
            vertices: (0..self.n_vertices)
                .map(|v| (0..3).map(|s| endpoint_json(Endpoint::Slot(v, s))).collect())
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [endpoint_json(a), endpoint_json(b)])
                .collect(),
            free_loops: self.free_loops,
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Diagram, DiagramError> {
        let edges = j
            .edges
            .iter()
            .map(|[a, b]| Ok((endpoint_from_json(a)?, endpoint_from_json(b)?)))
            .collect::<Result<Vec<_>, DiagramError>>()?;
        Diagram::new(j.n_boundary, j.vertices.len(), &edges, j.free_loops)
    }
}
