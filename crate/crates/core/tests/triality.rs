use hurwitz::algebra::{build_named, check_composition, NAMED_ALGEBRAS};
use hurwitz::linalg::Matrix;
use hurwitz::scalars::{frac, rat, Rational};
use hurwitz::triality::*;
use proptest::prelude::*;

#[test]
fn spin_rep_examples() {
    let r = spin_rep(&build_named("reals").unwrap());
    let swap = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
    assert_eq!(r.matrices[0], swap);

    let c = spin_rep(&build_named("complexes").unwrap());
    let ri = &c.matrices[1];
    assert_eq!(ri.mul(ri), Matrix::identity(4));

    let o = build_named("octonions").unwrap();
    let rho = spin_rep(&o);
    for (i, m) in rho.matrices.iter().enumerate() {
        assert_eq!(m.mul(m), Matrix::identity(16).scale(&o.norm_vec(&o.basis(i))));
    }
}

#[test]
fn spin_rep_is_linear() {
    let o = build_named("octonions").unwrap();
    let rho = spin_rep(&o);
    let a: Vec<Rational> = (0..8).map(|i| frac(i as i64 - 3, 2)).collect();
    let direct = rho.at(&a);
    // ρ(a)² = |a|·id checks linearity against the quadratic form
    assert_eq!(direct.mul(&direct), Matrix::identity(16).scale(&o.norm_vec(&a)));
}

#[test]
fn verify_clifford_rho_examples() {
    for name in NAMED_ALGEBRAS {
        let r = verify_clifford_rho(&build_named(name).unwrap());
        assert!(r.passed, "{name}: {:?}", r.witnesses);
    }
    let mut bad = build_named("octonions").unwrap();
    let c = bad.conj_matrix_mut();
    c[(3, 3)] = -c[(3, 3)].clone();
    let r = verify_clifford_rho(&bad);
    assert!(!r.passed);
    assert!(!r.witnesses.is_empty());
}

#[test]
fn triality_from_algebra_examples() {
    let r = triality_from_algebra(&build_named("reals").unwrap());
    assert_eq!(r.trilinear, vec![rat(1)]);

    for name in ["quaternions", "octonions", "split_octonions"] {
        let a = build_named(name).unwrap();
        let t = triality_from_algebra(&a);
        let n = a.dim();
        // T(1, x, z) = <x, z̄>: with z = x̄ this is the form
        for x in 0..n {
            for z in 0..n {
                let zbar = a.conj_vec(&a.basis(z));
                assert_eq!(t.entry(0, x, z), &a.inner_vec(&a.basis(x), &zbar));
            }
            let xbar = a.conj_vec(&a.basis(x));
            let tv: Rational = (0..n).map(|z| t.entry(0, x, z) * &xbar[z]).sum();
            assert_eq!(tv, a.norm_vec(&a.basis(x)));
        }
        assert!(check_cyclic(&t).passed, "{name}");
    }
}

#[test]
fn verify_triality_examples() {
    for name in NAMED_ALGEBRAS {
        let t = triality_from_algebra(&build_named(name).unwrap());
        let per = verify_triality_by_permutation(&t);
        assert_eq!(per.len(), 6);
        for p in &per {
            assert!(p.report.passed, "{name} {:?}", p.permutation);
        }
        assert!(verify_triality(&t).passed);
    }
    let mut t = triality_from_algebra(&build_named("quaternions").unwrap());
    *t.entry_mut(1, 2, 3) += rat(1);
    assert!(!verify_triality(&t).passed);
    assert!(verify_triality_by_permutation(&t).iter().all(|p| !p.report.passed));
}

#[test]
fn algebra_from_triality_examples() {
    for name in NAMED_ALGEBRAS {
        let a = build_named(name).unwrap();
        let b = algebra_from_triality(&triality_from_algebra(&a), &a.unit(), &a.unit()).unwrap();
        assert_eq!(b.mul_table(), a.mul_table(), "{name}");
    }
    // (1, 0) in the split complexes is the idempotent ½(e0 + e1), of norm 0
    let s = build_named("split_complexes").unwrap();
    let t = triality_from_algebra(&s);
    let idem = vec![frac(1, 2), frac(1, 2)];
    assert_eq!(s.norm_vec(&idem), rat(0));
    assert_eq!(
        algebra_from_triality(&t, &idem, &s.unit()),
        Err(TrialityError::IsotropicBasePoint { space: 1 })
    );
    assert_eq!(
        algebra_from_triality(&t, &s.unit(), &idem),
        Err(TrialityError::IsotropicBasePoint { space: 2 })
    );
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(rat).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn anisotropic_base_points_give_composition_algebras(e1 in small_vec(8), e2 in small_vec(8)) {
        let a = build_named("octonions").unwrap();
        prop_assume!(a.norm_vec(&e1) != rat(0) && a.norm_vec(&e2) != rat(0));
        let b = algebra_from_triality(&triality_from_algebra(&a), &e1, &e2).unwrap();
        prop_assert!(check_composition(&b).passed);
    }

    #[test]
    fn trilinear_is_cyclic(name in prop::sample::select(NAMED_ALGEBRAS.to_vec()), x in 0usize..8, y in 0usize..8, z in 0usize..8) {
        let t = triality_from_algebra(&build_named(name).unwrap());
        let n = t.dims()[0];
        let (x, y, z) = (x % n, y % n, z % n);
        prop_assert_eq!(t.entry(x, y, z), t.entry(y, z, x));
        prop_assert_eq!(t.entry(x, y, z), t.entry(z, x, y));
    }
}
