//! Vector product algebras: alternating products with an associative
//! symmetric form, their relation to composition algebras, and the
//! Clifford action on `F ⊕ V`.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{bilinear, CompositionAlgebra};
use crate::linalg::Matrix;
use crate::report::VerificationReport;
use crate::scalars::{format_rational, rat, Rational};

#[derive(Debug, Error)]
pub enum VpaError {
    #[error("form restricted to the complement of the unit is degenerate")]
    DegenerateComplement,
    #[error("not a vector product algebra ({} failed checks)", .0.witnesses.len())]
    InvalidVpa(VerificationReport),
}

/// `cross[(i*dim + j)*dim + k]` is the coefficient of `f_k` in `f_i × f_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorProductAlgebra {
    dim: usize,
    cross: Vec<Rational>,
    dot: Matrix,
}

impl VectorProductAlgebra {
    pub fn new(dim: usize, cross: Vec<Rational>, dot: Matrix) -> Self {
        assert_eq!(cross.len(), dim * dim * dim);
        assert_eq!((dot.rows, dot.cols), (dim, dim));
        Self { dim, cross, dot }
    }

    /// The zero-dimensional algebra.
    pub fn zero() -> Self {
        Self::new(0, Vec::new(), Matrix::zeros(0, 0))
    }

    /// `Q³` with the standard dot and cross products.
    pub fn cross3() -> Self {
        let mut cross = vec![Rational::zero(); 27];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            cross[(i * 3 + j) * 3 + k] = rat(1);
            cross[(j * 3 + i) * 3 + k] = rat(-1);
        }
        Self::new(3, cross, Matrix::identity(3))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cross_table(&self) -> &[Rational] {
        &self.cross
    }

    pub fn dot_matrix(&self) -> &Matrix {
        &self.dot
    }

    pub fn cross_constant_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Rational {
        &mut self.cross[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    pub fn basis_cross(&self, i: usize, j: usize) -> &[Rational] {
        let s = (i * self.dim + j) * self.dim;
        &self.cross[s..s + self.dim]
    }

    pub fn cross_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = xi * yj;
                for (k, m) in self.basis_cross(i, j).iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn dot_vec(&self, x: &[Rational], y: &[Rational]) -> Rational {
        bilinear(&self.dot, x, y)
    }
}

/// Restriction to the orthogonal complement of the unit. The product is the
/// projection of `uv` onto that complement, so `uv = u × v - <u,v>·1` for
/// imaginary `u, v`; the scalar part carries a minus sign.
pub fn imaginary_part(a: &CompositionAlgebra) -> Result<VectorProductAlgebra, VpaError> {
    let n = a.dim();
    let unit = a.unit();
    let uu = a.norm_vec(&unit);
    if uu.is_zero() {
        return Err(VpaError::DegenerateComplement);
    }
    // f_i = e_i - (<e_i,1>/<1,1>) 1 for i >= 1
    let f: Vec<Vec<Rational>> = (1..n)
        .map(|i| {
            let mut v = a.basis(i);
            let c = a.inner_vec(&v, &unit) / &uu;
            v[0] -= c;
            v
        })
        .collect();
    let m = n - 1;
    let mut cross = vec![Rational::zero(); m * m * m];
    let mut dot = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let w = a.mul_vec(&f[i], &f[j]);
            // the e_k coordinates (k >= 1) are the f-coordinates of the projection
            for k in 0..m {
                cross[(i * m + j) * m + k] = w[k + 1].clone();
            }
            dot[(i, j)] = a.inner_vec(&f[i], &f[j]);
        }
    }
    if m > 0 && dot.determinant().is_zero() {
        return Err(VpaError::DegenerateComplement);
    }
    Ok(VectorProductAlgebra::new(m, cross, dot))
}

/// Symmetry, alternation, associativity of the form, and the polarised
/// identity `(x×y)×z + (z×y)×x = 2<x,z>y - <x,y>z - <z,y>x` on all basis
/// triples.
pub fn verify_vpa(v: &VectorProductAlgebra) -> VerificationReport {
    let n = v.dim;
    let mut rep = VerificationReport::new();
    if n > 0 {
        rep.checks += 1;
        if v.dot.determinant().is_zero() {
            rep.fail("form non-degenerate", &[], "det = 0".into(), "det != 0".into());
        }
    }
    let e: Vec<Vec<Rational>> = (0..n).map(|i| v.basis(i)).collect();
    let zero = vec![Rational::zero(); n];
    for i in 0..n {
        rep.compare("x × x = 0", &[i], v.basis_cross(i, i), &zero);
        for j in 0..n {
            rep.compare_scalar("<x,y> = <y,x>", &[i, j], &v.dot[(i, j)], &v.dot[(j, i)]);
            let neg: Vec<Rational> = v.basis_cross(j, i).iter().map(|c| -c).collect();
            rep.compare("x × y = -y × x", &[i, j], v.basis_cross(i, j), &neg);
            for k in 0..n {
                let lhs = v.dot_vec(&e[i], v.basis_cross(j, k));
                let rhs = v.dot_vec(v.basis_cross(i, j), &e[k]);
                rep.compare_scalar("<x, y×z> = <x×y, z>", &[i, j, k], &lhs, &rhs);

                let a = v.cross_vec(v.basis_cross(i, j), &e[k]);
                let b = v.cross_vec(v.basis_cross(k, j), &e[i]);
                let lhs: Vec<Rational> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
                let two_xz = &v.dot[(i, k)] * rat(2);
                let rhs: Vec<Rational> = (0..n)
                    .map(|t| &two_xz * &e[j][t] - &v.dot[(i, j)] * &e[k][t] - &v.dot[(k, j)] * &e[i][t])
                    .collect();
                rep.compare("polarised vector product identity", &[i, j, k], &lhs, &rhs);
            }
        }
    }
    rep
}

/// Composition algebra on `F ⊕ V`:
/// `(s,u)(t,v) = (st - u.v, sv + tu + u×v)`, conjugation `(s,-v)`,
/// form `st + u.v`.
pub fn adjoin_unit(v: &VectorProductAlgebra) -> Result<CompositionAlgebra, VpaError> {
    let rep = verify_vpa(v);
    if !rep.passed {
        return Err(VpaError::InvalidVpa(rep));
    }
    let m = v.dim;
    let n = m + 1;
    let mut mul = vec![Rational::zero(); n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    mul[idx(0, 0, 0)] = rat(1);
    for i in 0..m {
        mul[idx(0, i + 1, i + 1)] = rat(1);
        mul[idx(i + 1, 0, i + 1)] = rat(1);
        for j in 0..m {
            mul[idx(i + 1, j + 1, 0)] = -v.dot[(i, j)].clone();
            for k in 0..m {
                mul[idx(i + 1, j + 1, k + 1)] = v.basis_cross(i, j)[k].clone();
            }
        }
    }
    let mut form = Matrix::zeros(n, n);
    let mut conj = Matrix::zeros(n, n);
    form[(0, 0)] = rat(1);
    conj[(0, 0)] = rat(1);
    for i in 0..m {
        conj[(i + 1, i + 1)] = rat(-1);
        for j in 0..m {
            form[(i + 1, j + 1)] = v.dot[(i, j)].clone();
        }
    }
    let name = match m {
        0 => "reals".to_string(),
        _ => format!("unital({m})"),
    };
    Ok(CompositionAlgebra::new(name, n, mul, form, conj).expect("well formed"))
}

/// `L(u): (a, w) ↦ (-u.w, a u + u × w)` on `F ⊕ V`, coordinates `(a, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMap {
    pub matrix: Matrix,
}

pub fn l_map(v: &VectorProductAlgebra, u: &[Rational]) -> LMap {
    let m = v.dim;
    let mut mat = Matrix::zeros(m + 1, m + 1);
    for (k, uk) in u.iter().enumerate() {
        // image of (1, 0)
        mat[(k + 1, 0)] = uk.clone();
    }
    for j in 0..m {
        let w = v.basis(j);
        mat[(0, j + 1)] = -v.dot_vec(u, &w);
        for (k, c) in v.cross_vec(u, &w).into_iter().enumerate() {
            mat[(k + 1, j + 1)] = c;
        }
    }
    LMap { matrix: mat }
}

/// `L(u)L(v) + L(v)L(u) = -2<u,v>·id` on all basis pairs; with `u = v` this is
/// `L(u)² = -(u.u)·id`.
pub fn clifford_check(v: &VectorProductAlgebra) -> VerificationReport {
    let m = v.dim;
    let mut rep = VerificationReport::new();
    let ls: Vec<Matrix> = (0..m).map(|i| l_map(v, &v.basis(i)).matrix).collect();
    let id = Matrix::identity(m + 1);
    for i in 0..m {
        for j in i..m {
            let lhs = ls[i].mul(&ls[j]).add(&ls[j].mul(&ls[i]));
            let rhs = id.scale(&(&v.dot[(i, j)] * rat(-2)));
            rep.compare("L(u)L(v) + L(v)L(u) = -2<u,v>", &[i, j], &lhs.data, &rhs.data);
        }
    }
    rep
}

#[derive(Debug, Serialize)]
pub struct VpaJson {
    pub dim: usize,
    pub cross_table: Vec<Vec<Vec<String>>>,
    pub dot: Vec<Vec<String>>,
}

impl VectorProductAlgebra {
    pub fn to_json(&self) -> VpaJson {
        let n = self.dim;
        VpaJson {
            dim: n,
            cross_table: (0..n)
                .map(|i| (0..n).map(|j| self.basis_cross(i, j).iter().map(format_rational).collect()).collect())
                .collect(),
            dot: (0..n).map(|i| (0..n).map(|j| format_rational(&self.dot[(i, j)])).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_named, check_composition, derivation_algebra, derivations_of_table, NAMED_ALGEBRAS};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn im(name: &str) -> VectorProductAlgebra {
        imaginary_part(&build_named(name).unwrap()).unwrap()
    }

    #[test]
    fn imaginary_part_dimensions() {
        let dims: Vec<usize> = NAMED_ALGEBRAS.iter().map(|n| im(n).dim()).collect();
        assert_eq!(dims, vec![0, 1, 3, 7, 1, 3, 7]);
    }

    #[test]
    fn imaginary_quaternions_are_the_cross_product_up_to_orientation() {
        let v = im("quaternions");
        let c = VectorProductAlgebra::cross3();
        // doubling orientation: e1 × e2 = -e3
        let flipped: Vec<Rational> = c.cross_table().iter().map(|x| -x).collect();
        assert_eq!(v.cross_table(), flipped.as_slice());
        assert_eq!(v.dot_matrix(), c.dot_matrix());
    }

    #[test]
    fn imaginary_products_have_negative_scalar_part() {
        // uv = u×v - <u,v>·1 on the imaginary part; the opposite sign breaks
        // the adjunction round trip
        for name in NAMED_ALGEBRAS {
            let a = build_named(name).unwrap();
            for i in 1..a.dim() {
                for j in 1..a.dim() {
                    assert_eq!(a.basis_product(i, j)[0], -a.form()[(i, j)].clone(), "{name}");
                }
            }
        }
    }

    #[test]
    fn all_imaginary_parts_are_vpas() {
        for name in NAMED_ALGEBRAS {
            let rep = verify_vpa(&im(name));
            assert!(rep.passed, "{name}: {:?}", rep.witnesses);
        }
        assert!(verify_vpa(&VectorProductAlgebra::cross3()).passed);
        assert!(verify_vpa(&VectorProductAlgebra::zero()).passed);
    }

    #[test]
    fn sign_flip_breaks_vpa() {
        let mut v = VectorProductAlgebra::cross3();
        *v.cross_constant_mut(0, 1, 2) = rat(-1);
        let rep = verify_vpa(&v);
        assert!(!rep.passed);
        assert!(rep.witnesses.iter().any(|w| w.indices.len() == 3 || w.indices.len() == 2));
        assert!(matches!(adjoin_unit(&v), Err(VpaError::InvalidVpa(_))));
    }

    #[test]
    fn adjunction_inverts_imaginary_part() {
        assert_eq!(adjoin_unit(&VectorProductAlgebra::zero()).unwrap(), build_named("reals").unwrap());
        for name in NAMED_ALGEBRAS {
            let a = build_named(name).unwrap();
            let back = adjoin_unit(&imaginary_part(&a).unwrap()).unwrap();
            assert_eq!(back.mul_table(), a.mul_table(), "{name}");
            assert_eq!(back.form(), a.form(), "{name}");
            assert_eq!(back.conj_matrix(), a.conj_matrix(), "{name}");
            assert!(check_composition(&back).passed);
            let v = imaginary_part(&a).unwrap();
            assert_eq!(imaginary_part(&back).unwrap(), v);
        }
    }

    #[test]
    fn cross3_gives_quaternion_shape() {
        let h = adjoin_unit(&VectorProductAlgebra::cross3()).unwrap();
        assert!(check_composition(&h).passed);
        assert_eq!(h.basis_product(1, 2), h.basis(3).as_slice());
        assert_eq!(derivation_algebra(&h).len(), 3);
    }

    #[test]
    fn clifford_relations() {
        assert!(clifford_check(&VectorProductAlgebra::cross3()).passed);
        for name in NAMED_ALGEBRAS {
            assert!(clifford_check(&im(name)).passed, "{name}");
        }
        let mut v = im("octonions");
        let old = v.cross_constant_mut(0, 1, 2).clone();
        *v.cross_constant_mut(0, 1, 2) = -old.clone();
        *v.cross_constant_mut(1, 0, 2) = old;
        assert!(!clifford_check(&v).passed);
    }

    #[test]
    fn l_squared_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in NAMED_ALGEBRAS {
            let v = im(name);
            let id = Matrix::identity(v.dim() + 1);
            for _ in 0..50 {
                let u: Vec<Rational> = (0..v.dim())
                    .map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
                    .collect();
                let l = l_map(&v, &u).matrix;
                assert_eq!(l.mul(&l), id.scale(&-v.dot_vec(&u, &u)), "{name}");
            }
        }
    }

    #[test]
    fn derivations_agree_with_imaginary_part() {
        // one-dimensional imaginary parts have zero product, so every map is
        // a derivation there while der(C) = 0
        for name in ["complexes", "split_complexes"] {
            let v = im(name);
            assert_eq!(derivations_of_table(v.dim(), v.cross_table()).len(), 1);
            assert_eq!(derivation_algebra(&build_named(name).unwrap()).len(), 0);
        }
        for name in NAMED_ALGEBRAS.iter().filter(|n| build_named(n).unwrap().dim() >= 4) {
            let a = build_named(name).unwrap();
            let v = imaginary_part(&a).unwrap();
            assert_eq!(
                derivation_algebra(&a).len(),
                derivations_of_table(v.dim(), v.cross_table()).len(),
                "{name}"
            );
        }
    }

    #[test]
    fn degenerate_complement() {
        // unit of zero norm
        let mut a = build_named("complexes").unwrap();
        let mut form = a.form().clone();
        form[(0, 0)] = rat(0);
        a = CompositionAlgebra::new("bad", 2, a.mul_table().to_vec(), form, a.conj_matrix().clone()).unwrap();
        assert!(matches!(imaginary_part(&a), Err(VpaError::DegenerateComplement)));
    }
}
