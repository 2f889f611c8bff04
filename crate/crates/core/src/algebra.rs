//! Composition algebras given by exact structure constants.
//!
//! Basis convention: `e_0` is always the unit. Cayley–Dickson doubling orders
//! the new basis as the first copy followed by the second copy.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::report::VerificationReport;
use crate::scalars::{format_rational, frac, parse_rational, rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown algebra name {0:?}")]
    UnknownName(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("malformed algebra data: {0}")]
    Malformed(String),
}

/// The seven real composition algebras, realised over the rationals.
pub const NAMED_ALGEBRAS: [&str; 7] = [
    "reals",
    "complexes",
    "quaternions",
    "octonions",
    "split_complexes",
    "split_quaternions",
    "split_octonions",
];

/// Finite-dimensional unital algebra with a symmetric form and a conjugation.
///
/// `mul[(i * dim + j) * dim + k]` is the coefficient of `e_k` in `e_i e_j`;
/// `conj` acts on coordinate columns (`conj(x) = C x`).
#[derive(Clone, PartialEq, Eq)]
pub struct CompositionAlgebra {
    name: String,
    dim: usize,
    mul: Vec<Rational>,
    form: Matrix,
    conj: Matrix,
}

impl fmt::Debug for CompositionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompositionAlgebra({}, dim {})", self.name, self.dim)
    }
}

impl CompositionAlgebra {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        mul: Vec<Rational>,
        form: Matrix,
        conj: Matrix,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::Malformed("dimension must be positive".into()));
        }
        if mul.len() != dim * dim * dim {
            return Err(AlgebraError::Malformed(format!(
                "structure constant table has {} entries, expected {}",
                mul.len(),
                dim * dim * dim
            )));
        }
        for (what, m) in [("form", &form), ("conjugation", &conj)] {
            if m.rows != dim || m.cols != dim {
                return Err(AlgebraError::Malformed(format!("{what} is not {dim}x{dim}")));
            }
        }
        Ok(Self {
            name: name.into(),
            dim,
            mul,
            form,
            conj,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul_table(&self) -> &[Rational] {
        &self.mul
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn conj_matrix(&self) -> &Matrix {
        &self.conj
    }

    /// Mutable access to a structure constant, for building negative controls.
    pub fn structure_constant_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Rational {
        &mut self.mul[(i * self.dim + j) * self.dim + k]
    }

    pub fn conj_matrix_mut(&mut self) -> &mut Matrix {
        &mut self.conj
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.mul[start..start + self.dim]
    }

    pub fn basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    pub fn unit(&self) -> Vec<Rational> {
        self.basis(0)
    }

    pub fn mul_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = xi * yj;
                for (k, m) in self.basis_product(i, j).iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn conj_vec(&self, x: &[Rational]) -> Vec<Rational> {
        self.conj.mul_vec(x)
    }

    pub fn inner_vec(&self, x: &[Rational], y: &[Rational]) -> Rational {
        bilinear(&self.form, x, y)
    }

    pub fn norm_vec(&self, x: &[Rational]) -> Rational {
        self.inner_vec(x, x)
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<Element<'_>, AlgebraError> {
        if coords.len() != self.dim {
            return Err(AlgebraError::Malformed(format!(
                "element has {} coordinates, algebra has dimension {}",
                coords.len(),
                self.dim
            )));
        }
        Ok(Element { algebra: self, coords })
    }

    pub fn basis_element(&self, i: usize) -> Element<'_> {
        Element {
            algebra: self,
            coords: self.basis(i),
        }
    }
}

pub(crate) fn bilinear(form: &Matrix, x: &[Rational], y: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let g = &form[(i, j)];
            if !g.is_zero() {
                acc += xi * g * yj;
            }
        }
    }
    acc
}

/// An element together with the algebra it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<'a> {
    algebra: &'a CompositionAlgebra,
    coords: Vec<Rational>,
}

impl<'a> Element<'a> {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    fn same(&self, other: &Element<'_>) -> Result<(), AlgebraError> {
        if std::ptr::eq(self.algebra, other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn mul(&self, other: &Element<'_>) -> Result<Element<'a>, AlgebraError> {
        self.same(other)?;
        Ok(Element {
            algebra: self.algebra,
            coords: self.algebra.mul_vec(&self.coords, &other.coords),
        })
    }

    pub fn conjugate(&self) -> Element<'a> {
        Element {
            algebra: self.algebra,
            coords: self.algebra.conj_vec(&self.coords),
        }
    }

    pub fn inner(&self, other: &Element<'_>) -> Result<Rational, AlgebraError> {
        self.same(other)?;
        Ok(self.algebra.inner_vec(&self.coords, &other.coords))
    }

    pub fn norm(&self) -> Rational {
        self.algebra.norm_vec(&self.coords)
    }
}

/// The ground field as a one-dimensional composition algebra.
pub fn build_base() -> CompositionAlgebra {
    CompositionAlgebra::new(
        "reals",
        1,
        vec![rat(1)],
        Matrix::identity(1),
        Matrix::identity(1),
    )
    .expect("base algebra is well formed")
}

/// `(a,b)(c,d) = (ac - d b̄, ā d + c b)`, conjugation `(ā, -b)`,
/// form `<a,c> + <b,d>`.
pub fn cayley_dickson_double(a: &CompositionAlgebra) -> CompositionAlgebra {
    let n = a.dim;
    let d = 2 * n;
    let mut mul = vec![Rational::zero(); d * d * d];
    let conj_basis: Vec<Vec<Rational>> = (0..n).map(|i| a.conj_vec(&a.basis(i))).collect();
    let mut put = |i: usize, j: usize, offset: usize, v: &[Rational], sign: i64| {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                mul[(i * d + j) * d + offset + k] += c * rat(sign);
            }
        }
    };
    for i in 0..n {
        for j in 0..n {
            // (e_i,0)(e_j,0) = (e_i e_j, 0)
            put(i, j, 0, a.basis_product(i, j), 1);
            // (e_i,0)(0,e_j) = (0, conj(e_i) e_j)
            put(i, n + j, n, &a.mul_vec(&conj_basis[i], &a.basis(j)), 1);
            // (0,e_i)(e_j,0) = (0, e_j e_i)
            put(n + i, j, n, a.basis_product(j, i), 1);
            // (0,e_i)(0,e_j) = (-e_j conj(e_i), 0)
            put(n + i, n + j, 0, &a.mul_vec(&a.basis(j), &conj_basis[i]), -1);
        }
    }
    let mut form = Matrix::zeros(d, d);
    let mut conj = Matrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            form[(i, j)] = a.form[(i, j)].clone();
            form[(n + i, n + j)] = a.form[(i, j)].clone();
            conj[(i, j)] = a.conj[(i, j)].clone();
        }
        conj[(n + i, n + i)] = rat(-1);
    }
    let name = match a.name.as_str() {
        "reals" => "complexes".to_string(),
        "complexes" => "quaternions".to_string(),
        "quaternions" => "octonions".to_string(),
        "octonions" => "sedenions".to_string(),
        other => format!("double({other})"),
    };
    CompositionAlgebra::new(name, d, mul, form, conj).expect("double is well formed")
}

/// Form determined by the conjugation: `<a,b> e_0 = (a b̄ + b ā) / 2`.
fn form_from_conj(dim: usize, mul: &[Rational], conj: &Matrix) -> Matrix {
    let tmp = CompositionAlgebra {
        name: String::new(),
        dim,
        mul: mul.to_vec(),
        form: Matrix::identity(dim),
        conj: conj.clone(),
    };
    let mut form = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let a = tmp.basis(i);
            let b = tmp.basis(j);
            let ab = tmp.mul_vec(&a, &tmp.conj_vec(&b));
            let ba = tmp.mul_vec(&b, &tmp.conj_vec(&a));
            form[(i, j)] = (&ab[0] + &ba[0]) * frac(1, 2);
        }
    }
    form
}

/// `R ⊕ R` in the basis `e_0 = (1,1)`, `e_1 = (1,-1)`; conjugation swaps
/// the two components.
pub fn build_split_complexes() -> CompositionAlgebra {
    // e1^2 = e0
    let mul = vec![rat(1), rat(0), rat(0), rat(1), rat(0), rat(1), rat(1), rat(0)];
    let conj = Matrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(-1)]]);
    let form = form_from_conj(2, &mul, &conj);
    CompositionAlgebra::new("split_complexes", 2, mul, form, conj).expect("well formed")
}

type Mat2 = [[Rational; 2]; 2];

fn mat2(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
    [[rat(a), rat(b)], [rat(c), rat(d)]]
}

fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// 2×2 matrices over the rationals. Basis `I`, `E11 - E22`, `E12 + E21`,
/// `E12 - E21`; conjugation is the adjugate `tr(x) I - x`, so the norm is
/// the determinant.
pub fn build_split_quaternions() -> CompositionAlgebra {
    let basis = [mat2(1, 0, 0, 1), mat2(1, 0, 0, -1), mat2(0, 1, 1, 0), mat2(0, 1, -1, 0)];
    // coordinates of [[p,q],[r,s]] in that basis
    let coords = |m: &Mat2| -> Vec<Rational> {
        let half = frac(1, 2);
        vec![
            (&m[0][0] + &m[1][1]) * &half,
            (&m[0][0] - &m[1][1]) * &half,
            (&m[0][1] + &m[1][0]) * &half,
            (&m[0][1] - &m[1][0]) * &half,
        ]
    };
    let mut mul = Vec::with_capacity(64);
    for x in &basis {
        for y in &basis {
            mul.extend(coords(&mat2_mul(x, y)));
        }
    }
    let mut conj = Matrix::zeros(4, 4);
    for (i, m) in basis.iter().enumerate() {
        let adj = [
            [m[1][1].clone(), -m[0][1].clone()],
            [-m[1][0].clone(), m[0][0].clone()],
        ];
        for (k, c) in coords(&adj).into_iter().enumerate() {
            conj[(k, i)] = c;
        }
    }
    let form = form_from_conj(4, &mul, &conj);
    CompositionAlgebra::new("split_quaternions", 4, mul, form, conj).expect("well formed")
}

/// A Zorn vector matrix `[[a, u], [v, b]]` with `u, v` in Q³.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZornMatrix {
    pub a: Rational,
    pub b: Rational,
    pub u: [Rational; 3],
    pub v: [Rational; 3],
}

fn dot3(x: &[Rational; 3], y: &[Rational; 3]) -> Rational {
    &x[0] * &y[0] + &x[1] * &y[1] + &x[2] * &y[2]
}

fn cross3(x: &[Rational; 3], y: &[Rational; 3]) -> [Rational; 3] {
    [
        &x[1] * &y[2] - &x[2] * &y[1],
        &x[2] * &y[0] - &x[0] * &y[2],
        &x[0] * &y[1] - &x[1] * &y[0],
    ]
}

fn add3(x: [Rational; 3], y: [Rational; 3]) -> [Rational; 3] {
    let [a, b, c] = x;
    let [d, e, f] = y;
    [a + d, b + e, c + f]
}

fn scale3(s: &Rational, x: &[Rational; 3]) -> [Rational; 3] {
    [s * &x[0], s * &x[1], s * &x[2]]
}

impl ZornMatrix {
    pub fn mul(&self, o: &ZornMatrix) -> ZornMatrix {
        let neg = |x: [Rational; 3]| x.map(|c| -c);
        ZornMatrix {
            a: &self.a * &o.a + dot3(&self.u, &o.v),
            u: add3(
                add3(scale3(&self.a, &o.u), scale3(&o.b, &self.u)),
                cross3(&self.v, &o.v),
            ),
            v: add3(
                add3(scale3(&o.a, &self.v), scale3(&self.b, &o.v)),
                neg(cross3(&self.u, &o.u)),
            ),
            b: &self.b * &o.b + dot3(&self.v, &o.u),
        }
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.b - dot3(&self.u, &self.v)
    }

    pub fn conjugate(&self) -> ZornMatrix {
        ZornMatrix {
            a: self.b.clone(),
            b: self.a.clone(),
            u: self.u.clone().map(|c| -c),
            v: self.v.clone().map(|c| -c),
        }
    }

    /// Coordinates in the algebra basis `(1, diag(1,-1), u1..u3, v1..v3)`.
    pub fn to_coords(&self) -> Vec<Rational> {
        let half = frac(1, 2);
        let mut c = vec![(&self.a + &self.b) * &half, (&self.a - &self.b) * &half];
        c.extend(self.u.iter().cloned());
        c.extend(self.v.iter().cloned());
        c
    }

    pub fn from_coords(c: &[Rational]) -> ZornMatrix {
        assert_eq!(c.len(), 8);
        ZornMatrix {
            a: &c[0] + &c[1],
            b: &c[0] - &c[1],
            u: [c[2].clone(), c[3].clone(), c[4].clone()],
            v: [c[5].clone(), c[6].clone(), c[7].clone()],
        }
    }
}

/// Split octonions as Zorn vector matrices. The unit must be `e_0`, so the
/// diagonal slots `(a, b)` are spanned by `e_0 = diag(1,1)` and
/// `e_1 = diag(1,-1)`; `e_2..e_4` are the `u` slot and `e_5..e_7` the `v`
/// slot.
pub fn build_zorn() -> CompositionAlgebra {
    let basis: Vec<ZornMatrix> = (0..8)
        .map(|i| {
            let mut c = vec![rat(0); 8];
            c[i] = rat(1);
            ZornMatrix::from_coords(&c)
        })
        .collect();
    let mut mul = Vec::with_capacity(512);
    for x in &basis {
        for y in &basis {
            mul.extend(x.mul(y).to_coords());
        }
    }
    let mut conj = Matrix::zeros(8, 8);
    for (i, m) in basis.iter().enumerate() {
        for (k, c) in m.conjugate().to_coords().into_iter().enumerate() {
            conj[(k, i)] = c;
        }
    }
    let form = form_from_conj(8, &mul, &conj);
    CompositionAlgebra::new("split_octonions", 8, mul, form, conj).expect("well formed")
}

pub fn build_named(name: &str) -> Result<CompositionAlgebra, AlgebraError> {
    let doubled = |times: usize| {
        (0..times).fold(build_base(), |a, _| cayley_dickson_double(&a))
    };
    Ok(match name {
        "reals" => build_base(),
        "complexes" => doubled(1),
        "quaternions" => doubled(2),
        "octonions" => doubled(3),
        "split_complexes" => build_split_complexes(),
        "split_quaternions" => build_split_quaternions(),
        "split_octonions" => build_zorn(),
        other => return Err(AlgebraError::UnknownName(other.to_string())),
    })
}

/// Exhaustive check of the composition algebra axioms on basis elements:
/// unit, conjugation formula, `a b̄ + b ā = 2<a,b>`, the polarised
/// composition law on all quadruples, symmetry and non-degeneracy of the form.
pub fn check_composition(a: &CompositionAlgebra) -> VerificationReport {
    let n = a.dim;
    let mut rep = VerificationReport::new();
    let unit = a.unit();
    let basis: Vec<Vec<Rational>> = (0..n).map(|i| a.basis(i)).collect();
    let conj: Vec<Vec<Rational>> = basis.iter().map(|b| a.conj_vec(b)).collect();

    let det = a.form.determinant();
    rep.checks += 1;
    if det.is_zero() {
        rep.fail("form non-degenerate", &[], "det = 0".into(), "det != 0".into());
    }
    for i in 0..n {
        rep.compare("unit left", &[i], &a.mul_vec(&unit, &basis[i]), &basis[i]);
        rep.compare("unit right", &[i], &a.mul_vec(&basis[i], &unit), &basis[i]);
        let two_t = a.inner_vec(&basis[i], &unit) * rat(2);
        let expect: Vec<Rational> = (0..n)
            .map(|k| -&basis[i][k] + &two_t * &unit[k])
            .collect();
        rep.compare("conjugation", &[i], &conj[i], &expect);
        for j in 0..n {
            rep.compare_scalar("form symmetric", &[i, j], &a.form[(i, j)], &a.form[(j, i)]);
            let lhs: Vec<Rational> = a
                .mul_vec(&basis[i], &conj[j])
                .into_iter()
                .zip(a.mul_vec(&basis[j], &conj[i]))
                .map(|(x, y)| x + y)
                .collect();
            let two_g = &a.form[(i, j)] * rat(2);
            let rhs: Vec<Rational> = unit.iter().map(|u| u * &two_g).collect();
            rep.compare("a conj(b) + b conj(a) = 2<a,b>", &[i, j], &lhs, &rhs);
        }
    }

    // products of basis pairs, then <e_a e_c, e_b e_d> for every quadruple
    let prods: Vec<Vec<Rational>> = (0..n * n)
        .map(|ij| a.basis_product(ij / n, ij % n).to_vec())
        .collect();
    let sparse: Vec<Vec<(usize, Rational)>> = prods
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect()
        })
        .collect();
    let ip = |p: usize, q: usize| -> Rational {
        let mut acc = Rational::zero();
        for (k, x) in &sparse[p] {
            for (l, y) in &sparse[q] {
                let g = &a.form[(*k, *l)];
                if !g.is_zero() {
                    acc += x * g * y;
                }
            }
        }
        acc
    };
    let mut gram = vec![Rational::zero(); n * n * n * n];
    for p in 0..n * n {
        for q in 0..n * n {
            gram[p * n * n + q] = ip(p, q);
        }
    }
    let g = |p: usize, q: usize| &gram[p * n * n + q];
    for ia in 0..n {
        for ib in 0..n {
            for ic in 0..n {
                for id in 0..n {
                    let lhs = &a.form[(ia, ib)] * &a.form[(ic, id)] * rat(2);
                    let rhs = g(ia * n + ic, ib * n + id) + g(ia * n + id, ib * n + ic);
                    rep.compare_scalar("2<a,b><c,d> = <ac,bd> + <ad,bc>", &[ia, ib, ic, id], &lhs, &rhs);
                }
            }
        }
    }
    rep
}

/// Result of brute-force basis scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub associative: bool,
    pub commutative: bool,
    pub alternative: bool,
}

pub fn properties(a: &CompositionAlgebra) -> Properties {
    let n = a.dim;
    let basis: Vec<Vec<Rational>> = (0..n).map(|i| a.basis(i)).collect();
    let mut commutative = true;
    let mut alternative = true;
    for x in &basis {
        let xx = a.mul_vec(x, x);
        for y in &basis {
            let xy = a.mul_vec(x, y);
            let yx = a.mul_vec(y, x);
            commutative &= xy == yx;
            alternative &= a.mul_vec(&xx, y) == a.mul_vec(x, &xy);
            alternative &= a.mul_vec(&yx, x) == a.mul_vec(y, &xx);
        }
    }
    // alternativity is a multilinear identity after polarisation; checking
    // sums of basis elements as well catches the cross terms
    for i in 0..n {
        for j in 0..n {
            let x: Vec<Rational> = basis[i].iter().zip(&basis[j]).map(|(p, q)| p + q).collect();
            let xx = a.mul_vec(&x, &x);
            for y in &basis {
                alternative &= a.mul_vec(&xx, y) == a.mul_vec(&x, &a.mul_vec(&x, y));
                alternative &= a.mul_vec(&a.mul_vec(y, &x), &x) == a.mul_vec(y, &xx);
            }
        }
    }
    let mut associative = true;
    'outer: for x in &basis {
        for y in &basis {
            let xy = a.mul_vec(x, y);
            for z in &basis {
                if a.mul_vec(&xy, z) != a.mul_vec(x, &a.mul_vec(y, z)) {
                    associative = false;
                    break 'outer;
                }
            }
        }
    }
    Properties {
        associative,
        commutative,
        alternative,
    }
}

/// Basis of the Lie algebra of derivations of an arbitrary bilinear product
/// given by structure constants `mul[(i*dim + j)*dim + k]`. Each returned
/// matrix `D` has `D[(k, i)]` = coefficient of `e_k` in `D(e_i)`.
pub fn derivations_of_table(dim: usize, mul: &[Rational]) -> Vec<Matrix> {
    let n = dim;
    if n == 0 {
        return Vec::new();
    }
    let c = |i: usize, j: usize, k: usize| &mul[(i * n + j) * n + k];
    let var = |k: usize, i: usize| k * n + i;
    // D(e_i e_j) - D(e_i) e_j - e_i D(e_j) = 0, component m
    let mut sys = Matrix::zeros(n * n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let row = (i * n + j) * n + m;
                for k in 0..n {
                    if !c(i, j, k).is_zero() {
                        sys[(row, var(m, k))] += c(i, j, k);
                    }
                    if !c(k, j, m).is_zero() {
                        sys[(row, var(k, i))] -= c(k, j, m);
                    }
                    if !c(i, k, m).is_zero() {
                        sys[(row, var(k, j))] -= c(i, k, m);
                    }
                }
            }
        }
    }
    sys.nullspace()
        .into_iter()
        .map(|v| Matrix {
            rows: n,
            cols: n,
            data: v,
        })
        .collect()
}

pub fn derivation_algebra(a: &CompositionAlgebra) -> Vec<Matrix> {
    derivations_of_table(a.dim, &a.mul)
}

/// Checks the Leibniz rule for `d` on all basis pairs of a product table.
pub fn is_derivation(dim: usize, mul: &[Rational], d: &Matrix) -> bool {
    let n = dim;
    let prod = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let s = &x[i] * &y[j];
                if s.is_zero() {
                    continue;
                }
                for k in 0..n {
                    out[k] += &s * &mul[(i * n + j) * n + k];
                }
            }
        }
        out
    };
    let e = |i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    };
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = d.mul_vec(&prod(&e(i), &e(j)));
            let a = prod(&d.mul_vec(&e(i)), &e(j));
            let b = prod(&e(i), &d.mul_vec(&e(j)));
            lhs.iter().zip(a.iter().zip(&b)).all(|(l, (x, y))| *l == x + y)
        })
    })
}

/// JSON form: `mul_table[i][j]` holds the coordinates of `e_i e_j`,
/// `conj[i]` the coordinates of `conj(e_i)`.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub dim: usize,
    pub mul_table: Vec<Vec<Vec<String>>>,
    pub form: Vec<Vec<String>>,
    pub conj: Vec<Vec<String>>,
}

impl CompositionAlgebra {
    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim;
        let s = |r: &Rational| format_rational(r);
        AlgebraJson {
            name: self.name.clone(),
            dim: n,
            mul_table: (0..n)
                .map(|i| (0..n).map(|j| self.basis_product(i, j).iter().map(s).collect()).collect())
                .collect(),
            form: (0..n).map(|i| (0..n).map(|j| s(&self.form[(i, j)])).collect()).collect(),
            conj: (0..n).map(|i| (0..n).map(|k| s(&self.conj[(k, i)])).collect()).collect(),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self, AlgebraError> {
        let n = j.dim;
        let p = |s: &String| parse_rational(s).map_err(|e| AlgebraError::Malformed(e.to_string()));
        let bad = || AlgebraError::Malformed("table shape does not match dim".into());
        if j.mul_table.len() != n || j.form.len() != n || j.conj.len() != n {
            return Err(bad());
        }
        let mut mul = Vec::with_capacity(n * n * n);
        for row in &j.mul_table {
            if row.len() != n {
                return Err(bad());
            }
            for v in row {
                if v.len() != n {
                    return Err(bad());
                }
                for c in v {
                    mul.push(p(c)?);
                }
            }
        }
        let mut form = Matrix::zeros(n, n);
        let mut conj = Matrix::zeros(n, n);
        for i in 0..n {
            if j.form[i].len() != n || j.conj[i].len() != n {
                return Err(bad());
            }
            for k in 0..n {
                form[(i, k)] = p(&j.form[i][k])?;
                conj[(k, i)] = p(&j.conj[i][k])?;
            }
        }
        CompositionAlgebra::new(j.name.clone(), n, mul, form, conj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> Vec<CompositionAlgebra> {
        NAMED_ALGEBRAS.iter().map(|n| build_named(n).unwrap()).collect()
    }

    #[test]
    fn base_algebra() {
        let r = build_base();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.basis_product(0, 0), &[rat(1)]);
        assert_eq!(r.conj_matrix(), &Matrix::identity(1));
        assert_eq!(r.form()[(0, 0)], rat(1));
    }

    #[test]
    fn doubling_reals_gives_i_squared_minus_one() {
        let c = cayley_dickson_double(&build_base());
        assert_eq!(c.dim(), 2);
        assert_eq!(c.basis_product(1, 1), &[rat(-1), rat(0)]);
    }

    #[test]
    fn quaternion_products() {
        let h = build_named("quaternions").unwrap();
        // (i,0)(0,1) = (0, conj(i)) = -(0,i) under the doubling formula
        let minus_e3: Vec<Rational> = h.basis(3).iter().map(|c| -c).collect();
        assert_eq!(h.basis_product(1, 2), minus_e3.as_slice());
        assert_eq!(h.basis_product(2, 1), h.basis(3).as_slice());
        let x = h.element(vec![rat(1), rat(2), frac(1, 3), rat(-1)]).unwrap();
        assert_eq!(h.basis_element(0).mul(&x).unwrap(), x);
    }

    #[test]
    fn octonion_basis_norms() {
        let o = build_named("octonions").unwrap();
        for i in 0..8 {
            assert_eq!(o.basis_element(i).norm(), rat(1));
        }
    }

    #[test]
    fn element_mismatch() {
        let h = build_named("quaternions").unwrap();
        let c = build_named("complexes").unwrap();
        assert_eq!(
            h.basis_element(1).mul(&c.basis_element(1)),
            Err(AlgebraError::AlgebraMismatch)
        );
        assert!(h.element(vec![rat(1)]).is_err());
    }

    #[test]
    fn unknown_name() {
        assert_eq!(build_named("bogus"), Err(AlgebraError::UnknownName("bogus".into())));
    }

    #[test]
    fn seven_algebras_compose() {
        for a in all() {
            let rep = check_composition(&a);
            assert!(rep.passed, "{}: {:?}", a.name(), rep.witnesses);
        }
    }

    #[test]
    fn sedenions_fail_with_witness() {
        let s = cayley_dickson_double(&build_named("octonions").unwrap());
        assert_eq!(s.dim(), 16);
        let rep = check_composition(&s);
        assert!(!rep.passed);
        assert!(rep.witnesses.iter().any(|w| w.indices.len() == 4));
    }

    #[test]
    fn double_composes_iff_associative() {
        for name in ["reals", "complexes", "quaternions", "octonions"] {
            let a = build_named(name).unwrap();
            let d = cayley_dickson_double(&a);
            assert_eq!(check_composition(&d).passed, properties(&a).associative, "{name}");
        }
    }

    #[test]
    fn property_scans() {
        let p = |n: &str| properties(&build_named(n).unwrap());
        let t = |a, c, l| Properties { associative: a, commutative: c, alternative: l };
        assert_eq!(p("reals"), t(true, true, true));
        assert_eq!(p("complexes"), t(true, true, true));
        assert_eq!(p("quaternions"), t(true, false, true));
        assert_eq!(p("octonions"), t(false, false, true));
        assert_eq!(p("split_octonions"), t(false, false, true));
        let s = cayley_dickson_double(&build_named("octonions").unwrap());
        assert!(!properties(&s).alternative);
    }

    #[test]
    fn split_complexes_zero_divisors() {
        let s = build_named("split_complexes").unwrap();
        let p = s.element(vec![frac(1, 2), frac(1, 2)]).unwrap();
        let q = s.element(vec![frac(1, 2), frac(-1, 2)]).unwrap();
        assert!(p.mul(&q).unwrap().coords().iter().all(Zero::is_zero));
        assert_eq!(p.norm(), rat(0));
    }

    #[test]
    fn signatures() {
        let sig = |n: &str| build_named(n).unwrap().form().signature();
        assert_eq!(sig("octonions"), (8, 0));
        assert_eq!(sig("split_complexes"), (1, 1));
        assert_eq!(sig("split_quaternions"), (2, 2));
        assert_eq!(sig("split_octonions"), (4, 4));
    }

    #[test]
    fn zorn_unit_and_cross_terms() {
        let z = build_zorn();
        let one = ZornMatrix::from_coords(&z.unit());
        assert_eq!((one.a.clone(), one.b.clone()), (rat(1), rat(1)));
        // u-slot times u-slot lands in the v-slot as -u x u'
        let mut c1 = vec![rat(0); 8];
        c1[2] = rat(1);
        let mut c2 = vec![rat(0); 8];
        c2[3] = rat(1);
        let p = ZornMatrix::from_coords(&z.mul_vec(&c1, &c2));
        assert_eq!(p.v, [rat(0), rat(0), rat(-1)]);
        assert_eq!(p.u, [rat(0), rat(0), rat(0)]);
        // norm matches the determinant
        let x = ZornMatrix {
            a: rat(2),
            b: rat(3),
            u: [rat(1), rat(0), rat(-1)],
            v: [rat(4), frac(1, 2), rat(1)],
        };
        assert_eq!(z.norm_vec(&x.to_coords()), x.det());
    }

    #[test]
    fn matrix_algebra_embeds_in_zorn() {
        let embed = |m: &Mat2| ZornMatrix {
            a: m[0][0].clone(),
            b: m[1][1].clone(),
            u: [m[0][1].clone(), rat(0), rat(0)],
            v: [m[1][0].clone(), rat(0), rat(0)],
        };
        let xs = [mat2(1, 2, 3, 4), mat2(0, -1, 5, 2), mat2(3, 0, 1, -2)];
        for x in &xs {
            for y in &xs {
                assert_eq!(embed(x).mul(&embed(y)), embed(&mat2_mul(x, y)));
            }
        }
    }

    #[test]
    fn conjugation_is_anti_involution() {
        for a in all() {
            let n = a.dim();
            for i in 0..n {
                let x = a.basis(i);
                assert_eq!(a.conj_vec(&a.conj_vec(&x)), x);
                for j in 0..n {
                    let y = a.basis(j);
                    assert_eq!(
                        a.conj_vec(&a.mul_vec(&x, &y)),
                        a.mul_vec(&a.conj_vec(&y), &a.conj_vec(&x)),
                        "{}",
                        a.name()
                    );
                }
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_on_basis() {
        for a in all() {
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    let x = a.basis(i);
                    let y = a.basis(j);
                    assert_eq!(a.norm_vec(&a.mul_vec(&x, &y)), a.norm_vec(&x) * a.norm_vec(&y));
                }
            }
        }
    }

    #[test]
    fn derivation_dimensions() {
        let dims: Vec<usize> = NAMED_ALGEBRAS
            .iter()
            .map(|n| derivation_algebra(&build_named(n).unwrap()).len())
            .collect();
        assert_eq!(dims, vec![0, 0, 3, 14, 0, 3, 14]);
    }

    #[test]
    fn derivations_satisfy_leibniz() {
        let o = build_named("octonions").unwrap();
        for d in derivation_algebra(&o) {
            assert!(is_derivation(8, o.mul_table(), &d));
        }
    }

    #[test]
    fn json_roundtrip() {
        let z = build_zorn();
        let js = serde_json::to_string(&z.to_json()).unwrap();
        let back: AlgebraJson = serde_json::from_str(&js).unwrap();
        assert_eq!(CompositionAlgebra::from_json(&back).unwrap(), z);
    }
}
