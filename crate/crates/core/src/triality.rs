//! Trialities: three spaces with forms and a trilinear form whose induced
//! maps give Clifford actions. Built from composition algebras and back.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::CompositionAlgebra;
use crate::linalg::Matrix;
use crate::report::VerificationReport;
use crate::scalars::{format_rational, rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrialityError {
    #[error("base point in V{space} is isotropic")]
    IsotropicBasePoint { space: usize },
    #[error("malformed triality: {0}")]
    Malformed(String),
}

/// A vector space with a symmetric bilinear form (Gram matrix on the basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    pub dim: usize,
    pub form: Matrix,
}

impl FormSpace {
    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.form.mul_vec(y))
    }
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triality {
    pub spaces: [FormSpace; 3],
    /// `trilinear[(i * d2 + j) * d3 + k] = T(e_i, f_j, g_k)`.
    pub trilinear: Vec<Rational>,
}

impl Triality {
    pub fn new(spaces: [FormSpace; 3], trilinear: Vec<Rational>) -> Result<Self, TrialityError> {
        for (i, s) in spaces.iter().enumerate() {
            if s.form.rows != s.dim || s.form.cols != s.dim {
                return Err(TrialityError::Malformed(format!("form of V{} is not {}x{}", i + 1, s.dim, s.dim)));
            }
            if s.form != s.form.transpose() {
                return Err(TrialityError::Malformed(format!("form of V{} is not symmetric", i + 1)));
            }
            if s.form.determinant().is_zero() {
                return Err(TrialityError::Malformed(format!("form of V{} is degenerate", i + 1)));
            }
        }
        let n: usize = spaces.iter().map(|s| s.dim).product();
        if trilinear.len() != n {
            return Err(TrialityError::Malformed(format!(
                "trilinear tensor has {} entries, expected {n}",
                trilinear.len()
            )));
        }
        Ok(Self { spaces, trilinear })
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.spaces[0].dim, self.spaces[1].dim, self.spaces[2].dim]
    }

    /// `T` on basis vectors.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Rational {
        let [_, d2, d3] = self.dims();
        &self.trilinear[(i * d2 + j) * d3 + k]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Rational {
        let [_, d2, d3] = self.dims();
        &mut self.trilinear[(i * d2 + j) * d3 + k]
    }

    /// `T` with its arguments given by space: `args[s]` is a basis index of `V_{s+1}`.
    fn entry_by_space(&self, args: [usize; 3]) -> &Rational {
        self.entry(args[0], args[1], args[2])
    }

    /// The map `V_i ⊗ V_j → V_k` defined by `<m(x, y), z>_k = T(x, y, z)`
    /// (arguments placed in their own spaces). Returns `m(e_a, f_b)`.
    pub fn induced(&self, i: usize, j: usize, a: usize, b: usize) -> Vec<Rational> {
        let k = 3 - i - j;
        let dk = self.spaces[k].dim;
        let mut t = vec![Rational::zero(); dk];
        for (c, tc) in t.iter_mut().enumerate() {
            let mut args = [0; 3];
            args[i] = a;
            args[j] = b;
            args[k] = c;
            *tc = self.entry_by_space(args).clone();
        }
        inverse_form(&self.spaces[k]).mul_vec(&t)
    }

    /// Bilinear extension of [`Triality::induced`].
    pub fn induced_vec(&self, i: usize, j: usize, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let dk = self.spaces[3 - i - j].dim;
        let mut out = vec![Rational::zero(); dk];
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let f = xa * yb;
                for (o, m) in out.iter_mut().zip(self.induced(i, j, a, b)) {
                    *o += &f * m;
                }
            }
        }
        out
    }
}

fn inverse_form(s: &FormSpace) -> Matrix {
    s.form.inverse().expect("forms are non-degenerate")
}

/// `ρ(a)` for each basis vector `a`, acting on `K ⊕ K` with coordinates `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoAction {
    pub dim: usize,
    pub matrices: Vec<Matrix>,
}

impl RhoAction {
    /// `ρ` at an arbitrary element, by linearity.
    pub fn at(&self, a: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(2 * self.dim, 2 * self.dim);
        for (c, r) in a.iter().zip(&self.matrices) {
            if !c.is_zero() {
                m = m.add(&r.scale(c));
            }
        }
        m
    }
}

/// `ρ(a)(x, y) = (ā ȳ, x̄ ā)`.
pub fn spin_rep(a: &CompositionAlgebra) -> RhoAction {
    let n = a.dim();
    let matrices = (0..n)
        .map(|i| {
            let abar = a.conj_vec(&a.basis(i));
            let mut m = Matrix::zeros(2 * n, 2 * n);
            for j in 0..n {
                let ebar = a.conj_vec(&a.basis(j));
                // y = e_j lands in the x slot, x = e_j in the y slot
                for (k, c) in a.mul_vec(&abar, &ebar).into_iter().enumerate() {
                    m[(k, n + j)] = c;
                }
                for (k, c) in a.mul_vec(&ebar, &abar).into_iter().enumerate() {
                    m[(n + k, j)] = c;
                }
            }
            m
        })
        .collect();
    RhoAction { dim: n, matrices }
}

/// `ρ(a)ρ(b) + ρ(b)ρ(a) = 2<a,b>·id` on all basis pairs.
pub fn verify_clifford_rho(a: &CompositionAlgebra) -> VerificationReport {
    let rho = spin_rep(a);
    let n = a.dim();
    let id = Matrix::identity(2 * n);
    let mut rep = VerificationReport::new();
    for i in 0..n {
        for j in i..n {
            let (ri, rj) = (&rho.matrices[i], &rho.matrices[j]);
            let lhs = ri.mul(rj).add(&rj.mul(ri));
            let rhs = id.scale(&(&a.form()[(i, j)] * rat(2)));
            rep.compare("ρ(a)ρ(b) + ρ(b)ρ(a) = 2<a,b>", &[i, j], &lhs.data, &rhs.data);
        }
    }
    rep
}

/// `T(x, y, z) = <xy, z̄>`, the real part of `xyz`; cyclic in its arguments.
pub fn triality_from_algebra(a: &CompositionAlgebra) -> Triality {
    let n = a.dim();
    let space = FormSpace {
        dim: n,
        form: a.form().clone(),
    };
    let zbar: Vec<Vec<Rational>> = (0..n).map(|k| a.conj_vec(&a.basis(k))).collect();
    let mut t = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let xy = a.basis_product(i, j);
            for zk in &zbar {
                t.push(a.inner_vec(xy, zk));
            }
        }
    }
    Triality {
        spaces: [space.clone(), space.clone(), space],
        trilinear: t,
    }
}

pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Clifford check for one permutation `(i, j, k)`.
#[derive(Clone, Debug, Serialize)]
pub struct PermutationReport {
    /// One-based space labels.
    pub permutation: [usize; 3],
    pub report: VerificationReport,
}

/// Matrix of `a ∈ V_i` (basis index) on `V_j ⊕ V_k`:
/// `(y, z) ↦ (m_ik(a, z), m_ij(a, y))`.
pub fn clifford_action(t: &Triality, perm: [usize; 3], a: usize) -> Matrix {
    let [i, j, k] = perm;
    let (dj, dk) = (t.spaces[j].dim, t.spaces[k].dim);
    let mut m = Matrix::zeros(dj + dk, dj + dk);
    for b in 0..dj {
        for (r, c) in t.induced(i, j, a, b).into_iter().enumerate() {
            m[(dj + r, b)] = c;
        }
    }
    for c in 0..dk {
        for (r, v) in t.induced(i, k, a, c).into_iter().enumerate() {
            m[(r, dj + c)] = v;
        }
    }
    m
}

pub fn verify_triality_by_permutation(t: &Triality) -> Vec<PermutationReport> {
    PERMUTATIONS
        .iter()
        .map(|&perm| {
            let [i, j, k] = perm;
            let di = t.spaces[i].dim;
            let id = Matrix::identity(t.spaces[j].dim + t.spaces[k].dim);
            let acts: Vec<Matrix> = (0..di).map(|a| clifford_action(t, perm, a)).collect();
            let mut rep = VerificationReport::new();
            let label = format!("V{} on V{}+V{}: ρ(a)ρ(b) + ρ(b)ρ(a) = 2<a,b>", i + 1, j + 1, k + 1);
            for a in 0..di {
                for b in a..di {
                    let lhs = acts[a].mul(&acts[b]).add(&acts[b].mul(&acts[a]));
                    let rhs = id.scale(&(&t.spaces[i].form[(a, b)] * rat(2)));
                    rep.compare(&label, &[a, b], &lhs.data, &rhs.data);
                }
            }
            PermutationReport {
                permutation: [i + 1, j + 1, k + 1],
                report: rep,
            }
        })
        .collect()
}

/// All six permutations merged into one report.
pub fn verify_triality(t: &Triality) -> VerificationReport {
    let mut rep = VerificationReport::new();
    for p in verify_triality_by_permutation(t) {
        rep.merge(p.report);
    }
    rep
}

/// `T(x,y,z) = T(y,z,x)` on all basis triples (equal dimensions only).
pub fn check_cyclic(t: &Triality) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let [d1, d2, d3] = t.dims();
    if d1 != d2 || d2 != d3 {
        rep.fail("cyclic", &[], format!("dims {d1},{d2},{d3}"), "equal dims".into());
        return rep;
    }
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d1 {
                rep.compare_scalar("T(x,y,z) = T(y,z,x)", &[i, j, k], t.entry(i, j, k), t.entry(j, k, i));
            }
        }
    }
    rep
}

/// Solves `M x = y` for square invertible `M`.
fn solve(m: &Matrix, y: &[Rational]) -> Result<Vec<Rational>, TrialityError> {
    let inv = m
        .inverse()
        .ok_or_else(|| TrialityError::Malformed("multiplication by a base point is not invertible".into()))?;
    Ok(inv.mul_vec(y))
}

/// Composition algebra on `V_3` with unit `e3 = m(e1, e2)`.
///
/// With `R(x) = m(x, e2)` and `L(y) = m(e1, y)` the product is
/// `x · y = m(R⁻¹y, L⁻¹x)` and the form is `<,>_3 / <e3, e3>_3`. The result is
/// written in a basis whose first vector is `e3`.
pub fn algebra_from_triality(
    t: &Triality,
    e1: &[Rational],
    e2: &[Rational],
) -> Result<CompositionAlgebra, TrialityError> {
    let n = t.spaces[0].dim;
    if t.dims() != [n, n, n] {
        return Err(TrialityError::Malformed("spaces have different dimensions".into()));
    }
    if e1.len() != n || e2.len() != n {
        return Err(TrialityError::Malformed("base point has the wrong length".into()));
    }
    if t.spaces[0].inner(e1, e1).is_zero() {
        return Err(TrialityError::IsotropicBasePoint { space: 1 });
    }
    if t.spaces[1].inner(e2, e2).is_zero() {
        return Err(TrialityError::IsotropicBasePoint { space: 2 });
    }
    let e3 = t.induced_vec(0, 1, e1, e2);
    let n3 = t.spaces[2].inner(&e3, &e3);
    if n3.is_zero() {
        return Err(TrialityError::IsotropicBasePoint { space: 3 });
    }
    let unit_basis = |i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    };
    let cols = |f: &dyn Fn(&[Rational]) -> Vec<Rational>| {
        let images: Vec<Vec<Rational>> = (0..n).map(|i| f(&unit_basis(i))).collect();
        Matrix::from_rows(images).transpose()
    };
    let r = cols(&|x| t.induced_vec(0, 1, x, e2));
    let l = cols(&|y| t.induced_vec(0, 1, e1, y));
    let product = |x: &[Rational], y: &[Rational]| -> Result<Vec<Rational>, TrialityError> {
        Ok(t.induced_vec(0, 1, &solve(&r, y)?, &solve(&l, x)?))
    };

    // new basis: e3 replaces the first old basis vector it involves
    let p = e3.iter().position(|c| !c.is_zero()).expect("e3 is not isotropic, hence nonzero");
    let mut basis = vec![e3.clone()];
    basis.extend((0..n).filter(|&i| i != p).map(unit_basis));
    let change = Matrix::from_rows(basis.clone()).transpose();
    let back = change.inverse().expect("basis change is invertible");

    let form = change
        .transpose()
        .mul(&t.spaces[2].form)
        .mul(&change)
        .scale(&(Rational::one() / &n3));
    let mut mul = Vec::with_capacity(n * n * n);
    for bi in &basis {
        for bj in &basis {
            mul.extend(back.mul_vec(&product(bi, bj)?));
        }
    }
    // conj(x) = 2<x, 1> 1 - x in the new basis, where 1 = e_0
    let mut conj = Matrix::identity(n).scale(&rat(-1));
    for i in 0..n {
        conj[(0, i)] += &form[(0, i)] * rat(2);
    }
    CompositionAlgebra::new("from_triality", n, mul, form, conj).map_err(|e| TrialityError::Malformed(e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct FormSpaceJson {
    pub dim: usize,
    pub form: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct TrialityJson {
    pub spaces: Vec<FormSpaceJson>,
    /// `trilinear[i][j][k]`.
    pub trilinear: Vec<Vec<Vec<String>>>,
}

impl Triality {
    pub fn to_json(&self) -> TrialityJson {
        let [d1, d2, d3] = self.dims();
        TrialityJson {
            spaces: self
                .spaces
                .iter()
                .map(|s| FormSpaceJson {
                    dim: s.dim,
                    form: s.form.to_strings(),
                })
                .collect(),
            trilinear: (0..d1)
                .map(|i| {
                    (0..d2)
                        .map(|j| (0..d3).map(|k| format_rational(self.entry(i, j, k))).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_named, check_composition, NAMED_ALGEBRAS};

    #[test]
    fn rho_on_reals_is_the_swap() {
        let r = spin_rep(&build_named("reals").unwrap());
        assert_eq!(r.matrices[0], Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]));
    }

    #[test]
    fn rho_squares_to_the_norm() {
        for name in NAMED_ALGEBRAS {
            let a = build_named(name).unwrap();
            let rho = spin_rep(&a);
            for (i, m) in rho.matrices.iter().enumerate() {
                let norm = a.norm_vec(&a.basis(i));
                assert_eq!(m.mul(m), Matrix::identity(2 * a.dim()).scale(&norm), "{name} e{i}");
            }
        }
    }

    #[test]
    fn induced_maps_of_the_algebra_triality() {
        // m_12(x, y) = conj(xy)
        let a = build_named("octonions").unwrap();
        let t = triality_from_algebra(&a);
        for i in 0..8 {
            for j in 0..8 {
                let want = a.conj_vec(a.basis_product(i, j));
                assert_eq!(t.induced(0, 1, i, j), want);
            }
        }
    }

    #[test]
    fn roundtrip_is_exact() {
        for name in NAMED_ALGEBRAS {
            let a = build_named(name).unwrap();
            let t = triality_from_algebra(&a);
            let b = algebra_from_triality(&t, &a.unit(), &a.unit()).unwrap();
            assert_eq!(b.mul_table(), a.mul_table(), "{name}");
            assert_eq!(b.form(), a.form(), "{name}");
            assert_eq!(b.conj_matrix(), a.conj_matrix(), "{name}");
        }
    }

    #[test]
    fn non_unit_base_points_give_composition_algebras() {
        let a = build_named("quaternions").unwrap();
        let t = triality_from_algebra(&a);
        let e1 = vec![rat(1), rat(2), rat(0), rat(0)];
        let e2 = vec![rat(0), rat(1), rat(1), rat(-1)];
        let b = algebra_from_triality(&t, &e1, &e2).unwrap();
        assert!(check_composition(&b).passed);
    }
}
