//! Concrete evaluation of diagrams in a vector product algebra.
//!
//! A vertex is the lowered tensor `T(a,b,c) = <a×b, c>`, an internal edge
//! contracts with the inverse metric, an edge between two boundary points
//! is the metric itself. Results are fully covariant.

use std::collections::HashMap;

use num_traits::Zero;

use super::combo::LinearCombo;
use super::graph::{Diagram, DiagramError};
use crate::linalg::Matrix;
use crate::scalars::{rat, Rational};
use crate::vpa::VectorProductAlgebra;

/// Dense `dim^rank` array, row-major in boundary order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub rank: usize,
    pub dim: usize,
    pub data: Vec<Rational>,
}

impl Tensor {
    pub fn zeros(rank: usize, dim: usize) -> Self {
        Self {
            rank,
            dim,
            data: vec![Rational::zero(); dim.pow(rank as u32)],
        }
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.data[self.offset(idx)]
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Rational) {
        assert_eq!((self.rank, self.dim), (other.rank, other.dim));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }

    /// Applies `m` to every index: `out[..i..] = sum_j m[i][j] self[..j..]`.
    fn transform_all(&self, m: &Matrix) -> Tensor {
        let mut cur = self.clone();
        let d = self.dim;
        for axis in 0..self.rank {
            let stride = d.pow((self.rank - 1 - axis) as u32);
            let mut next = Tensor::zeros(self.rank, d);
            for (pos, v) in cur.data.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let j = (pos / stride) % d;
                let base = pos - j * stride;
                for i in 0..d {
                    let c = &m[(i, j)];
                    if !c.is_zero() {
                        next.data[base + i * stride] += c * v;
                    }
                }
            }
            cur = next;
        }
        cur
    }
}

type Entries = HashMap<Vec<u8>, Rational>;

struct Factor {
    vars: Vec<usize>,
    entries: Entries,
}

fn contract(a: &Factor, b: &Factor, keep: &dyn Fn(usize) -> bool) -> Factor {
    let shared: Vec<usize> = a.vars.iter().copied().filter(|v| b.vars.contains(v)).collect();
    let a_sh: Vec<usize> = shared.iter().map(|v| a.vars.iter().position(|x| x == v).unwrap()).collect();
    let b_sh: Vec<usize> = shared.iter().map(|v| b.vars.iter().position(|x| x == v).unwrap()).collect();
    let mut out_vars: Vec<usize> = Vec::new();
    let mut picks: Vec<(bool, usize)> = Vec::new();
    for (i, &v) in a.vars.iter().enumerate() {
        if (!shared.contains(&v) || keep(v)) && !out_vars.contains(&v) {
            out_vars.push(v);
            picks.push((true, i));
        }
    }
    for (i, &v) in b.vars.iter().enumerate() {
        if !shared.contains(&v) && !out_vars.contains(&v) {
            out_vars.push(v);
            picks.push((false, i));
        }
    }
    let mut index: HashMap<Vec<u8>, Vec<(&Vec<u8>, &Rational)>> = HashMap::new();
    for (k, val) in &b.entries {
        let key: Vec<u8> = b_sh.iter().map(|&i| k[i]).collect();
        index.entry(key).or_default().push((k, val));
    }
    let mut entries: Entries = HashMap::new();
    for (ka, va) in &a.entries {
        let key: Vec<u8> = a_sh.iter().map(|&i| ka[i]).collect();
        let Some(matches) = index.get(&key) else { continue };
        for (kb, vb) in matches {
            let idx: Vec<u8> = picks.iter().map(|&(from_a, i)| if from_a { ka[i] } else { kb[i] }).collect();
            let e = entries.entry(idx).or_insert_with(Rational::zero);
            *e += va * *vb;
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Factor { vars: out_vars, entries }
}

/// Sums out a variable that occurs in no other factor and is not output.
fn sum_out(f: Factor, var: usize) -> Factor {
    let pos = f.vars.iter().position(|&v| v == var).expect("variable present");
    let mut vars = f.vars.clone();
    vars.remove(pos);
    let mut entries: Entries = HashMap::new();
    for (mut k, v) in f.entries {
        k.remove(pos);
        let e = entries.entry(k).or_insert_with(Rational::zero);
        *e += v;
    }
    entries.retain(|_, v| !v.is_zero());
    Factor { vars, entries }
}

pub fn evaluate_concrete(d: &Diagram, v: &VectorProductAlgebra) -> Tensor {
    let dim = v.dim();
    let n = d.n_boundary();
    let g = v.dot_matrix();
    let ginv = g.inverse().expect("nondegenerate form");
    let factor_of = |m: &Matrix, a: usize, b: usize| -> Factor {
        let mut entries = Entries::new();
        for i in 0..dim {
            for j in 0..dim {
                if !m[(i, j)].is_zero() {
                    entries.insert(vec![i as u8, j as u8], m[(i, j)].clone());
                }
            }
        }
        Factor { vars: vec![a, b], entries }
    };

    // variable per port; a boundary port shares the variable of its mate
    let var = |p: usize| -> usize {
        let m = d.mate(p);
        if p >= n && m < n {
            m
        } else {
            p
        }
    };
    let mut factors: Vec<Factor> = Vec::new();
    let mut vt = Entries::new();
    for a in 0..dim {
        for b in 0..dim {
            let c = v.basis_cross(a, b);
            for k in 0..dim {
                let t: Rational = (0..dim).map(|j| &c[j] * &g[(j, k)]).sum();
                if !t.is_zero() {
                    vt.insert(vec![a as u8, b as u8, k as u8], t);
                }
            }
        }
    }
    for w in 0..d.n_vertices() {
        let vars: Vec<usize> = (0..3).map(|s| var(d.slot_port(w, s))).collect();
        factors.push(Factor {
            vars,
            entries: vt.clone(),
        });
    }
    for p in 0..d.n_ports() {
        let q = d.mate(p);
        if p > q {
            continue;
        }
        if p < n && q < n {
            factors.push(factor_of(g, p, q));
        } else if p >= n && q >= n {
            factors.push(factor_of(&ginv, p, q));
        }
    }

    let is_output = |x: usize| x < n;
    while factors.len() > 1 {
        // pick the pair sharing a variable with the smallest product size
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if !factors[i].vars.iter().any(|x| factors[j].vars.contains(x)) {
                    continue;
                }
                let cost = factors[i].entries.len().max(1) * factors[j].entries.len().max(1);
                if best.is_none_or(|(_, _, c)| cost < c) {
                    best = Some((i, j, cost));
                }
            }
        }
        let (i, j) = match best {
            Some((i, j, _)) => (i, j),
            None => (0, 1),
        };
        let b = factors.swap_remove(j);
        let a = factors.swap_remove(i);
        let others: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
        let keep = |x: usize| is_output(x) || others.contains(&x);
        let mut c = contract(&a, &b, &keep);
        let drop: Vec<usize> = c.vars.iter().copied().filter(|&x| !keep(x)).collect();
        for x in drop {
            c = sum_out(c, x);
        }
        factors.push(c);
    }
    let mut total = match factors.pop() {
        Some(f) => f,
        None => {
            let mut e = Entries::new();
            e.insert(Vec::new(), rat(1));
            Factor { vars: vec![], entries: e }
        }
    };
    let inner: Vec<usize> = total.vars.iter().copied().filter(|&x| !is_output(x)).collect();
    for x in inner {
        total = sum_out(total, x);
    }
    let loops = rat(dim as i64).pow(d.free_loops() as i32);
    let mut out = Tensor::zeros(n, dim);
    let pos: Vec<usize> = (0..n).map(|b| total.vars.iter().position(|&x| x == b).expect("output var")).collect();
    for (k, val) in total.entries {
        let idx: Vec<usize> = pos.iter().map(|&p| k[p] as usize).collect();
        let o = out.offset(&idx);
        out.data[o] = &val * &loops;
    }
    out
}

/// Evaluates a combination after substituting `delta` for δ.
pub fn evaluate_combo(c: &LinearCombo, v: &VectorProductAlgebra, delta: &Rational) -> Tensor {
    let mut out = Tensor::zeros(c.n_boundary(), v.dim());
    for (d, k) in c.terms() {
        out.add_scaled(&evaluate_concrete(d, v), &k.eval(delta));
    }
    out
}

/// Rank of the Gram matrix of full contractions (indices raised with the
/// inverse metric).
pub fn gram_rank(k: usize, v: &VectorProductAlgebra, diagrams: &[Diagram]) -> Result<usize, DiagramError> {
    if let Some(bad) = diagrams.iter().find(|d| d.n_boundary() != k) {
        return Err(DiagramError::BoundaryMismatch {
            expected: k,
            found: bad.n_boundary(),
        });
    }
    let ginv = v.dot_matrix().inverse().expect("nondegenerate form");
    let tensors: Vec<Tensor> = diagrams.iter().map(|d| evaluate_concrete(d, v)).collect();
    let raised: Vec<Tensor> = tensors.iter().map(|t| t.transform_all(&ginv)).collect();
    let rows: Vec<Vec<Rational>> = tensors
        .iter()
        .map(|a| {
            raised
                .iter()
                .map(|b| a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(rows).rank())
}
