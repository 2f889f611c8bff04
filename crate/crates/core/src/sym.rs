//! Super-Yang–Mills systems from composition algebras: the Clifford action
//! of `V = K ⊕ H` on `K⁴`, the pairing of `S` with `S*`, the symmetric map
//! `Γ: S ⊗ S → V`, and the quartic condition that makes a system special.
//!
//! Coordinates on `K⁴` are `(u, v, x, y)`, four blocks of `dim K`. `S` is the
//! `(u, y)` summand and `S*` the `(v, x)` summand. The basis of `V` is the
//! basis of `K` followed by `α`, `β`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::CompositionAlgebra;
use crate::linalg::Matrix;
use crate::report::{VerificationReport, Witness};
use crate::scalars::{frac, rat, Rational};
use crate::triality::{verify_triality, FormSpace, Triality};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymError {
    #[error("system is not special: {0}")]
    NotSpecial(String),
}

/// Two-dimensional space with isotropic basis `α, β` and quadratic form
/// `λα + μβ ↦ λμ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicSpace {
    pub form: Matrix,
}

impl HyperbolicSpace {
    pub fn new() -> Self {
        let h = frac(1, 2);
        Self {
            form: Matrix::from_rows(vec![vec![rat(0), h.clone()], vec![h, rat(0)]]),
        }
    }

    pub fn quadratic(&self, lambda: &Rational, mu: &Rational) -> Rational {
        lambda * mu
    }
}

impl Default for HyperbolicSpace {
    fn default() -> Self {
        Self::new()
    }
}

/// Which reading of the pairing and `Γ` formulas a system was built with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// `P((v,x), (u',y')) = <v,y'> - <x,u'>` and
    /// `Γ = conj(u y' + u' y) - 2<u,u'> α + 2<y,y'> β`; satisfies every check.
    Consistent,
    /// The formulas with conjugations as displayed:
    /// `P = -<u', x̄> + <v, ȳ'>` and `Γ = (u'y + y'u) - <u,u'> α + <y,y'> β`.
    Displayed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    /// `dim K`.
    pub n: usize,
    pub reading: Reading,
    /// Gram matrix of `V = K ⊕ H`.
    pub v_form: Matrix,
    /// `ρ` of each basis vector of `V`, on `K⁴`.
    pub rho: Vec<Matrix>,
    /// `pairing[(b, a)]` pairs basis `b` of `S*` with basis `a` of `S`.
    pub pairing: Matrix,
    /// `gamma[(a * dim S + b) * dim V + μ]`: coordinate `μ` of `Γ(s_a, s_b)`.
    pub gamma: Vec<Rational>,
}

impl System {
    pub fn dim_v(&self) -> usize {
        self.n + 2
    }

    pub fn dim_s(&self) -> usize {
        2 * self.n
    }

    /// Position in `K⁴` of basis vector `a` of `S`.
    pub fn s_index(&self, a: usize) -> usize {
        if a < self.n {
            a
        } else {
            3 * self.n + (a - self.n)
        }
    }

    /// Position in `K⁴` of basis vector `b` of `S*`.
    pub fn s_star_index(&self, b: usize) -> usize {
        if b < self.n {
            self.n + b
        } else {
            2 * self.n + (b - self.n)
        }
    }

    pub fn gamma_at(&self, a: usize, b: usize) -> &[Rational] {
        let (ds, dv) = (self.dim_s(), self.dim_v());
        let start = (a * ds + b) * dv;
        &self.gamma[start..start + dv]
    }

    fn v_inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.v_form.mul_vec(y))
    }
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn build_system(a: &CompositionAlgebra) -> System {
    build_system_with(a, Reading::Consistent)
}

pub fn build_system_with(a: &CompositionAlgebra, reading: Reading) -> System {
    let n = a.dim();
    let e = |i: usize| a.basis(i);
    let bar = |x: &[Rational]| a.conj_vec(x);

    let mut v_form = Matrix::zeros(n + 2, n + 2);
    for i in 0..n {
        for j in 0..n {
            v_form[(i, j)] = a.form()[(i, j)].clone();
        }
    }
    let h = HyperbolicSpace::new();
    for i in 0..2 {
        for j in 0..2 {
            v_form[(n + i, n + j)] = h.form[(i, j)].clone();
        }
    }

    // ρ(a)(u,v,x,y) = (ā v̄, ū ā, -ā ȳ, -x̄ ā)
    let mut rho = Vec::with_capacity(n + 2);
    for i in 0..n {
        let abar = bar(&e(i));
        let mut m = Matrix::zeros(4 * n, 4 * n);
        for j in 0..n {
            let jbar = bar(&e(j));
            let left = a.mul_vec(&abar, &jbar);
            let right = a.mul_vec(&jbar, &abar);
            for k in 0..n {
                m[(k, n + j)] = left[k].clone();
                m[(n + k, j)] = right[k].clone();
                m[(2 * n + k, 3 * n + j)] = -&left[k];
                m[(3 * n + k, 2 * n + j)] = -&right[k];
            }
        }
        rho.push(m);
    }
    // ρ(α)(u,v,x,y) = (x, y, 0, 0), ρ(β)(u,v,x,y) = (0, 0, u, v)
    let mut ra = Matrix::zeros(4 * n, 4 * n);
    let mut rb = Matrix::zeros(4 * n, 4 * n);
    for k in 0..n {
        ra[(k, 2 * n + k)] = Rational::one();
        ra[(n + k, 3 * n + k)] = Rational::one();
        rb[(2 * n + k, k)] = Rational::one();
        rb[(3 * n + k, n + k)] = Rational::one();
    }
    rho.push(ra);
    rho.push(rb);

    // S* basis (v, x), S basis (u', y')
    let mut pairing = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (vy, xu) = match reading {
                Reading::Consistent => (a.inner_vec(&e(i), &e(j)), -a.inner_vec(&e(i), &e(j))),
                Reading::Displayed => (a.inner_vec(&e(i), &bar(&e(j))), -a.inner_vec(&e(j), &bar(&e(i)))),
            };
            pairing[(i, n + j)] = vy;
            pairing[(n + i, j)] = xu;
        }
    }

    let ds = 2 * n;
    let dv = n + 2;
    let zero = vec![Rational::zero(); n];
    let split = |s: usize| if s < n { (e(s), zero.clone()) } else { (zero.clone(), e(s - n)) };
    let mut gamma = Vec::with_capacity(ds * ds * dv);
    for sa in 0..ds {
        let (u, y) = split(sa);
        for sb in 0..ds {
            let (u2, y2) = split(sb);
            let (kpart, la, mb) = match reading {
                Reading::Consistent => {
                    let s: Vec<Rational> = a
                        .mul_vec(&u, &y2)
                        .into_iter()
                        .zip(a.mul_vec(&u2, &y))
                        .map(|(p, q)| p + q)
                        .collect();
                    (bar(&s), a.inner_vec(&u, &u2) * rat(-2), a.inner_vec(&y, &y2) * rat(2))
                }
                Reading::Displayed => {
                    let s: Vec<Rational> = a
                        .mul_vec(&u2, &y)
                        .into_iter()
                        .zip(a.mul_vec(&y2, &u))
                        .map(|(p, q)| p + q)
                        .collect();
                    (s, -a.inner_vec(&u, &u2), a.inner_vec(&y, &y2))
                }
            };
            gamma.extend(kpart);
            gamma.push(la);
            gamma.push(mb);
        }
    }
    System {
        n,
        reading,
        v_form,
        rho,
        pairing,
        gamma,
    }
}

/// Outcome of [`verify_system`] and [`verify_special`].
#[derive(Clone, Debug, Serialize)]
pub struct SpecialReport {
    pub reading: Reading,
    pub clifford_ok: bool,
    pub symmetry_ok: bool,
    pub eq_ok: bool,
    pub index_ok: bool,
    /// `None` until the quartic condition has been checked.
    pub special_ok: Option<bool>,
    pub witnesses: Vec<Witness>,
    pub checks: usize,
}

impl SpecialReport {
    /// All checks run so far passed.
    pub fn passed(&self) -> bool {
        self.system_ok() && self.special_ok.unwrap_or(true)
    }

    pub fn system_ok(&self) -> bool {
        self.clifford_ok && self.symmetry_ok && self.eq_ok && self.index_ok
    }

    fn absorb(&mut self, r: VerificationReport) -> bool {
        self.checks += r.checks;
        self.witnesses.extend(r.witnesses);
        r.passed
    }
}

/// `ρ(p)ρ(q) + ρ(q)ρ(p) = 2<p,q>·id` over a basis of `V`.
fn check_clifford(sys: &System) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let id = Matrix::identity(4 * sys.n);
    for p in 0..sys.dim_v() {
        for q in p..sys.dim_v() {
            let lhs = sys.rho[p].mul(&sys.rho[q]).add(&sys.rho[q].mul(&sys.rho[p]));
            let rhs = id.scale(&(&sys.v_form[(p, q)] * rat(2)));
            rep.compare("ρ(p)ρ(q) + ρ(q)ρ(p) = 2<p,q>", &[p, q], &lhs.data, &rhs.data);
        }
    }
    rep
}

fn check_symmetry(sys: &System) -> VerificationReport {
    let mut rep = VerificationReport::new();
    for a in 0..sys.dim_s() {
        for b in a + 1..sys.dim_s() {
            rep.compare("Γ(s,t) = Γ(t,s)", &[a, b], sys.gamma_at(a, b), sys.gamma_at(b, a));
        }
    }
    rep
}

/// Image of basis `a` of `S` under `ρ(w_μ)`, split into its `S*` coordinates
/// and whatever leaks into `S`.
fn rho_on_s(sys: &System, mu: usize, a: usize) -> (Vec<Rational>, Vec<Rational>) {
    let col: Vec<Rational> = (0..4 * sys.n).map(|r| sys.rho[mu][(r, sys.s_index(a))].clone()).collect();
    let star = (0..sys.dim_s()).map(|b| col[sys.s_star_index(b)].clone()).collect();
    let leak = (0..sys.dim_s()).map(|b| col[sys.s_index(b)].clone()).collect();
    (star, leak)
}

/// `<ρ(w)s, t> = (Γ(s, t), w)` for all basis `s, t ∈ S`, `w ∈ V`, and `ρ(w)` maps `S` into `S*`.
fn check_eq(sys: &System) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let (ds, dv) = (sys.dim_s(), sys.dim_v());
    let zero = vec![Rational::zero(); ds];
    for mu in 0..dv {
        let w: Vec<Rational> = (0..dv).map(|k| if k == mu { Rational::one() } else { Rational::zero() }).collect();
        for a in 0..ds {
            let (star, leak) = rho_on_s(sys, mu, a);
            rep.compare("ρ(w) maps S into S*", &[mu, a], &leak, &zero);
            for b in 0..ds {
                let lhs: Rational = (0..ds).map(|c| &star[c] * &sys.pairing[(c, b)]).sum();
                let rhs = sys.v_inner(sys.gamma_at(a, b), &w);
                rep.compare_scalar("<ρ(w)s, t> = (Γ(s,t), w)", &[mu, a, b], &lhs, &rhs);
            }
        }
    }
    rep
}

/// `Γ^μ_{ab} Γ^{ν bc} + Γ^ν_{ab} Γ^{μ bc} = 2 g^{μν} δ_a^c`, where the upper
/// `S`-indices use the basis of `S*` dual under the pairing and `Γ^{ν bc}`
/// is read off `ρ(w^ν): S* → S`.
fn check_index_identity(sys: &System) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let (ds, dv, n4) = (sys.dim_s(), sys.dim_v(), 4 * sys.n);
    let Some(ginv) = sys.v_form.inverse() else {
        rep.fail("g invertible", &[], "singular".into(), "invertible".into());
        return rep;
    };
    let Some(pinv) = sys.pairing.inverse() else {
        rep.fail("pairing non-degenerate", &[], "singular".into(), "invertible".into());
        return rep;
    };
    // lower[μ][(a, b)] = Γ^μ_{ab}
    let lower: Vec<Matrix> = (0..dv)
        .map(|mu| {
            let mut m = Matrix::zeros(ds, ds);
            for a in 0..ds {
                for b in 0..ds {
                    m[(a, b)] = sys.gamma_at(a, b)[mu].clone();
                }
            }
            m
        })
        .collect();
    // dual basis f^b = Σ pinv[(b, b')] f_b' of S*, embedded in K⁴
    let dual: Vec<Vec<Rational>> = (0..ds)
        .map(|b| {
            let mut v = vec![Rational::zero(); n4];
            for bp in 0..ds {
                v[sys.s_star_index(bp)] = pinv[(b, bp)].clone();
            }
            v
        })
        .collect();
    let upper: Vec<Matrix> = (0..dv)
        .map(|nu| {
            let mut r = Matrix::zeros(n4, n4);
            for lam in 0..dv {
                if !ginv[(nu, lam)].is_zero() {
                    r = r.add(&sys.rho[lam].scale(&ginv[(nu, lam)]));
                }
            }
            let mut m = Matrix::zeros(ds, ds);
            for (b, f) in dual.iter().enumerate() {
                let img = r.mul_vec(f);
                for c in 0..ds {
                    m[(b, c)] = img[sys.s_index(c)].clone();
                }
            }
            m
        })
        .collect();
    let id = Matrix::identity(ds);
    for mu in 0..dv {
        for nu in mu..dv {
            let lhs = lower[mu].mul(&upper[nu]).add(&lower[nu].mul(&upper[mu]));
            let rhs = id.scale(&(&ginv[(mu, nu)] * rat(2)));
            rep.compare("Γ^μΓ^ν + Γ^νΓ^μ = 2g^{μν}", &[mu, nu], &lhs.data, &rhs.data);
        }
    }
    rep
}

/// Clifford relations, `Γ` symmetry, the compatibility of `ρ`, the pairing
/// and `Γ`, and the index identity.
pub fn verify_system(sys: &System) -> SpecialReport {
    let mut r = SpecialReport {
        reading: sys.reading,
        clifford_ok: false,
        symmetry_ok: false,
        eq_ok: false,
        index_ok: false,
        special_ok: None,
        witnesses: Vec::new(),
        checks: 0,
    };
    r.clifford_ok = r.absorb(check_clifford(sys));
    r.symmetry_ok = r.absorb(check_symmetry(sys));
    r.eq_ok = r.absorb(check_eq(sys));
    r.index_ok = r.absorb(check_index_identity(sys));
    r
}

/// Number of random spinors for the `(Γ(s,s), Γ(s,s)) = 0` spot check.
pub const SPOT_CHECKS: usize = 100;

/// [`verify_system`] plus the quartic condition on all basis quadruples of
/// `S` and a seeded spot check of `(Γ(s,s), Γ(s,s)) = 0`.
pub fn verify_special(sys: &System) -> SpecialReport {
    verify_special_seeded(sys, 0)
}

pub fn verify_special_seeded(sys: &System, seed: u64) -> SpecialReport {
    let mut r = verify_system(sys);
    let ds = sys.dim_s();
    let pairs = ds * ds;
    // gram[(s,t), (u,v)] = (Γ(s,t), Γ(u,v))
    let lowered: Vec<Vec<Rational>> = (0..pairs)
        .map(|p| sys.v_form.mul_vec(sys.gamma_at(p / ds, p % ds)))
        .collect();
    let mut gram = vec![Rational::zero(); pairs * pairs];
    for p in 0..pairs {
        for q in p..pairs {
            let g = dot(sys.gamma_at(p / ds, p % ds), &lowered[q]);
            gram[q * pairs + p] = g.clone();
            gram[p * pairs + q] = g;
        }
    }
    let g = |s: usize, t: usize, u: usize, v: usize| &gram[(s * ds + t) * pairs + u * ds + v];
    let mut rep = VerificationReport::new();
    let zero = Rational::zero();
    for s in 0..ds {
        for t in 0..ds {
            for u in 0..ds {
                for v in 0..ds {
                    let sum = g(s, t, u, v) + g(s, u, t, v) + g(s, v, t, u);
                    rep.compare_scalar("(Γ(s,t),Γ(u,v)) + (Γ(s,u),Γ(t,v)) + (Γ(s,v),Γ(t,u)) = 0", &[s, t, u, v], &sum, &zero);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..SPOT_CHECKS {
        let s: Vec<Rational> = (0..ds).map(|_| frac(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        let mut gs = vec![Rational::zero(); sys.dim_v()];
        for a in 0..ds {
            for b in 0..ds {
                let c = &s[a] * &s[b];
                if c.is_zero() {
                    continue;
                }
                for (o, x) in gs.iter_mut().zip(sys.gamma_at(a, b)) {
                    *o += &c * x;
                }
            }
        }
        rep.compare_scalar("(Γ(s,s), Γ(s,s)) = 0 at a random s", &[i], &sys.v_inner(&gs, &gs), &zero);
    }
    r.special_ok = Some(r.absorb(rep));
    r
}

/// The triality `(W, S⁺, S⁻)` of a special system.
///
/// The idempotents `ρ(α)ρ(β)` and `ρ(β)ρ(α)` split `K⁴` into `(u, v)` and
/// `(x, y)`. `W` is the `K` part of `V`, `S⁺` the `u` block of `S` and `S⁻`
/// the `v` block of `S*`. The form on `S⁺` is read off the `α` coefficient
/// of `Γ`, that on `S⁻` is transported from the `y` block through the
/// pairing, and `T(a, s, t) = <ρ(a)s, t>_{S⁻}`.
pub fn extract_triality(sys: &System) -> Result<Triality, SymError> {
    let report = verify_special(sys);
    if !report.passed() {
        let first = report
            .witnesses
            .first()
            .map(|w| format!("{} at {:?}", w.check, w.indices))
            .unwrap_or_default();
        return Err(SymError::NotSpecial(first));
    }
    let n = sys.n;
    let (ia, ib) = (n, n + 1);
    let e = sys.rho[ia].mul(&sys.rho[ib]);
    // the (u, v) half is the image of ρ(α)ρ(β)
    for k in 0..2 * n {
        if e[(k, k)] != Rational::one() {
            return Err(SymError::NotSpecial("ρ(α)ρ(β) is not the projection onto (u, v)".into()));
        }
    }

    let w_form = Matrix::from_rows((0..n).map(|i| (0..n).map(|j| sys.v_form[(i, j)].clone()).collect()).collect());
    // <u, u'>_{S⁺} = -½ · (α coefficient of Γ(u, u'))
    let plus_form = Matrix::from_rows(
        (0..n)
            .map(|i| (0..n).map(|j| &sys.gamma_at(i, j)[ia] * frac(-1, 2)).collect())
            .collect(),
    );
    // <y, y'> = ½ · (β coefficient of Γ(y, y')), moved to the v block by the pairing
    let y_form = Matrix::from_rows(
        (0..n)
            .map(|i| (0..n).map(|j| &sys.gamma_at(n + i, n + j)[ib] * frac(1, 2)).collect())
            .collect(),
    );
    let p_vy = Matrix::from_rows((0..n).map(|i| (0..n).map(|j| sys.pairing[(i, n + j)].clone()).collect()).collect());
    let y_inv = y_form
        .inverse()
        .ok_or_else(|| SymError::NotSpecial("form on the y block is degenerate".into()))?;
    let minus_form = p_vy.mul(&y_inv).mul(&p_vy.transpose());

    let mut t = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for s in 0..n {
            // ρ(a) u_s lands in the v block
            let img: Vec<Rational> = (0..n).map(|k| sys.rho[a][(n + k, s)].clone()).collect();
            let lowered = minus_form.mul_vec(&img);
            t.extend(lowered);
        }
    }
    let space = |form: Matrix| FormSpace { dim: n, form };
    let tri = Triality::new([space(w_form), space(plus_form), space(minus_form)], t)
        .map_err(|e| SymError::NotSpecial(e.to_string()))?;
    let check = verify_triality(&tri);
    if !check.passed {
        return Err(SymError::NotSpecial("extracted triality fails its Clifford conditions".into()));
    }
    Ok(tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_named;

    #[test]
    fn hyperbolic_plane() {
        let h = HyperbolicSpace::new();
        assert_eq!(h.form.determinant(), frac(-1, 4));
        assert_eq!(h.quadratic(&rat(2), &rat(3)), rat(6));
        assert_eq!(h.form[(0, 0)], rat(0));
    }

    #[test]
    fn reals_system_is_special() {
        let s = build_system(&build_named("reals").unwrap());
        assert_eq!(s.dim_v(), 3);
        let r = verify_special(&s);
        assert!(r.passed(), "{:?}", r.witnesses);
    }
}
