use super::rigidity::{critical_points, fallback_search};
use super::*;
use crate::fixtures;
use crate::moebius::ExtendedParameter as P;
use crate::C64;

fn disk(re: f64, im: f64) -> P {
    P::Disk(DiskPoint::from_re_im(re, im).unwrap())
}

fn circle(angle: f64) -> P {
    P::Circle(UnimodularConstant::from_angle(angle))
}

fn assert_sound(q: &IsoQuery, d: &IsoDecision) {
    if let Some(r) = reverify(q, d) {
        assert!(r < TOL_ACCEPT, "fresh-sample residual {r:e}");
    }
    if d.verdict.is_equivalent() {
        let (_, res) = spatial_unitary(q, d).unwrap().unwrap();
        assert!(res < 1e-8, "span residual {res:e}");
    }
}

#[test]
fn circle_parameters_compare_by_kappa() {
    let z3 = FiniteBlaschkeProduct::monomial(3);
    let q = IsoQuery::same(&z3, circle(0.0), circle(std::f64::consts::FRAC_PI_2));
    let d = decide(&q);
    assert_eq!(d.verdict, Verdict::Equivalent(Certificate::Kappa(KappaInvariant { epsilon: 0, n: Some(3) })));
    assert_sound(&q, &d);
    let q = IsoQuery::new(z3, circle(0.0), FiniteBlaschkeProduct::monomial(2), circle(1.0));
    assert_eq!(decide(&q).verdict, Verdict::NotEquivalent(Reason::KappaMismatch));
}

#[test]
fn kappa_counts_atoms() {
    let z3 = FiniteBlaschkeProduct::monomial(3);
    for angle in [0.0, 0.4, 2.0] {
        let m = z3.clark_measure(UnimodularConstant::from_angle(angle)).unwrap();
        assert_eq!(kappa(&m), KappaInvariant { epsilon: 0, n: Some(3) });
    }
}

#[test]
fn circle_against_off_circle_is_never_equivalent() {
    for (_, t) in fixtures::standard() {
        for other in [disk(0.3, 0.0), P::Infinity, P::from_complex(C64::new(2.0, 0.0))] {
            let q = IsoQuery::same(&t, circle(0.0), other);
            assert_eq!(decide(&q).verdict, Verdict::NotEquivalent(Reason::NormalVsNonnormal));
            assert_eq!(decide(&q.swapped()).verdict, Verdict::NotEquivalent(Reason::NormalVsNonnormal));
        }
    }
}

#[test]
fn monomial_modulus_law() {
    let z3 = FiniteBlaschkeProduct::monomial(3);
    let rot = C64::from_polar(0.3, std::f64::consts::PI / 5.0);
    let q = IsoQuery::same(&z3, disk(0.3, 0.0), P::from_complex(rot));
    let d = decide(&q);
    let w = d.verdict.witness().expect("witness");
    assert!(w.residual < 1e-12);
    assert_sound(&q, &d);
    let q = IsoQuery::same(&z3, disk(0.3, 0.0), disk(0.5, 0.0));
    assert_eq!(decide(&q).verdict, Verdict::NotEquivalent(Reason::ModulusLaw));
}

#[test]
fn monomial_exterior_and_mixed_cases() {
    let z2 = FiniteBlaschkeProduct::monomial(2);
    let cases = [
        (P::from_complex(C64::new(2.0, 0.0)), P::from_complex(C64::new(0.0, -2.0)), true),
        (P::from_complex(C64::new(2.0, 0.0)), P::from_complex(C64::new(3.0, 0.0)), false),
        (disk(0.5, 0.0), P::from_complex(C64::new(0.0, 2.0)), true),
        (disk(0.4, 0.0), P::from_complex(C64::new(0.0, 2.0)), false),
        (disk(0.0, 0.0), P::Infinity, true),
    ];
    for (a1, a2, expect) in cases {
        let q = IsoQuery::same(&z2, a1, a2);
        let d = decide(&q);
        assert_eq!(d.verdict.is_equivalent(), expect, "{a1} vs {a2}: {:?}", d.verdict);
        assert_sound(&q, &d);
    }
}

#[test]
fn identical_queries_give_identity_witness() {
    let t = fixtures::random(3, 11);
    let d = functional_equation_solve(&t, &t, DiskPoint::from_re_im(0.2, -0.1).unwrap(), DiskPoint::from_re_im(0.2, -0.1).unwrap());
    let w = d.verdict.witness().expect("witness");
    assert!(w.residual < 1e-12);
    assert!((w.zeta.value() - 1.0).norm() < 1e-10);
    assert!(w.psi.is_identity(1e-10));
}

#[test]
fn odd_function_swaps_a_and_minus_a() {
    let t = fixtures::odd();
    for c in [C64::new(0.3, 0.1), C64::new(-0.5, 0.2)] {
        let q = IsoQuery::same(&t, P::from_complex(c), P::from_complex(-c));
        let d = decide(&q);
        assert!(d.verdict.is_equivalent(), "{:?}", d.verdict);
        assert_sound(&q, &d);
    }
}

#[test]
fn same_argument_zeros_relate_zero_and_infinity() {
    let t = fixtures::same_argument();
    let q = IsoQuery::same(&t, disk(0.0, 0.0), P::Infinity);
    let d = decide(&q);
    assert!(d.verdict.is_equivalent(), "{:?}", d.verdict);
    assert_eq!(d.reduction, Reduction { sharp1: false, sharp2: true });
    assert_sound(&q, &d);
}

#[test]
fn cube_root_example_has_rotated_parameters() {
    let t = fixtures::cube_roots();
    let a = C64::new(0.25, 0.1);
    let u = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let q = IsoQuery::same(&t, P::from_complex(a), P::from_complex(a * u.conj()));
    let d = decide(&q);
    assert!(d.verdict.is_equivalent());
    assert_sound(&q, &d);
}

#[test]
fn degree_mismatch_is_immediate() {
    let q = IsoQuery::new(FiniteBlaschkeProduct::monomial(2), disk(0.1, 0.0), fixtures::random(3, 11), disk(0.1, 0.0));
    assert_eq!(decide(&q).verdict, Verdict::NotEquivalent(Reason::DegreeMismatch));
}

#[test]
fn generic_distinct_parameters_are_not_equivalent() {
    let t = fixtures::random(3, 23);
    let q = IsoQuery::same(&t, disk(0.1, 0.2), disk(-0.3, 0.0));
    let d = decide(&q);
    assert_eq!(d.verdict, Verdict::NotEquivalent(Reason::LevelSetInvariant));
    assert_eq!(decide(&q.swapped()).verdict, d.verdict);
}

#[test]
fn loose_reject_threshold_yields_undetermined() {
    let t = fixtures::random(3, 23);
    let q = IsoQuery::same(&t, disk(0.1, 0.2), disk(-0.3, 0.0));
    let opts = DecideOptions { tol_reject: 1e3, grid: GridSpec { angles: 1, radii: 1 }, ..Default::default() };
    let d = decide_with(&q, &opts);
    assert!(matches!(d.verdict, Verdict::Undetermined { starts: 1, .. }), "{:?}", d.verdict);
    assert_eq!(d.verdict.exit_code(), 2);
}

#[test]
fn cross_function_equivalence_via_precomposition() {
    // Θ₂ = Θ₁∘ψ⁻¹ gives B^a_{Θ₁} ≅ B^a_{Θ₂}
    let t1 = fixtures::random(3, 11);
    let psi = MoebiusAutomorphism::new(UnimodularConstant::from_angle(0.9), DiskPoint::from_re_im(0.2, 0.3).unwrap());
    let t2 = t1.pre_compose(&psi.inverse()).unwrap();
    let a = disk(0.15, -0.2);
    let q = IsoQuery::new(t1, a, t2, a);
    let d = decide(&q);
    assert!(d.verdict.is_equivalent());
    assert_sound(&q, &d);
    assert_eq!(decide(&q.swapped()).verdict.label(), "equivalent");
}

#[test]
fn witnesses_compose() {
    let t = fixtures::cube_roots();
    let u = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let a = C64::new(0.25, 0.1);
    let (p1, p2, p3) = (a, a * u.conj(), a * u.conj() * u.conj());
    let d12 = decide(&IsoQuery::same(&t, P::from_complex(p1), P::from_complex(p2)));
    let d23 = decide(&IsoQuery::same(&t, P::from_complex(p2), P::from_complex(p3)));
    let w = compose_witnesses(d12.verdict.witness().unwrap(), d23.verdict.witness().unwrap());
    let r = equation_residual(
        &t,
        DiskPoint::new(p1).unwrap(),
        &t,
        DiskPoint::new(p3).unwrap(),
        w.zeta,
        &w.psi,
        &fresh_samples(256),
    );
    assert!(r < 1e-6, "{r:e}");
}

#[test]
fn exterior_instances_follow_the_sharp_reduction() {
    let t = fixtures::odd();
    let a = C64::new(1.5, 1.0);
    let q = IsoQuery::same(&t, P::from_complex(a), P::from_complex(-a));
    let d = decide(&q);
    let reduced = IsoQuery::new(t.sharp(), P::from_complex(a.inv()), t.sharp(), P::from_complex(-a.inv()));
    assert!(d.verdict.same_outcome(&decide(&reduced).verdict));
    assert!(d.verdict.is_equivalent());
    assert_sound(&q, &d);
}

#[test]
fn equivalent_unitary_transports_idempotents() {
    let t = fixtures::odd();
    let q = IsoQuery::same(&t, disk(0.3, 0.1), disk(-0.3, -0.1));
    let d = decide(&q);
    let (v, _) = spatial_unitary(&q, &d).unwrap().unwrap();
    assert!(idempotent_transport_residual(&q, &v).unwrap() < 1e-8);
}

#[test]
fn critical_points_of_monomial_sit_at_zero() {
    let c = critical_points(&FiniteBlaschkeProduct::monomial(4)).unwrap();
    assert_eq!(c.len(), 3);
    assert!(c.iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn rigidity_examples() {
    for n in 2..=4 {
        assert_eq!(rigidity_check(&FiniteBlaschkeProduct::monomial(n)).as_bool(), Some(false));
    }
    assert_eq!(rigidity_check(&fixtures::cube_roots()).as_bool(), Some(false));
    assert_eq!(rigidity_check(&fixtures::odd()).as_bool(), Some(false));
    let generic = fixtures::random(5, 37);
    let r = rigidity_check(&generic);
    assert_ne!(r.as_bool(), Some(false), "{r:?}");
    if r.as_bool() == Some(true) {
        for (a, b) in [(C64::new(0.1, 0.0), C64::new(-0.2, 0.1)), (C64::new(0.3, 0.3), C64::new(0.3, -0.3))] {
            let q = IsoQuery::same(&generic, P::from_complex(a), P::from_complex(b));
            assert_eq!(decide(&q).verdict.label(), "not-equivalent");
        }
    }
}

#[test]
fn degree_three_symmetry_moves_parameters() {
    // the involution exchanging the two critical points lifts to a symmetry
    let t = fixtures::random(3, 11);
    let Rigidity::Symmetric(s) = rigidity_check(&t) else { panic!("degree three is never rigid") };
    assert!(!s.sharp);
    let a = DiskPoint::from_re_im(0.2, -0.1).unwrap();
    let (_, a2) = crate::moebius::decompose_with_prefix(a, &s.phi.inverse());
    assert!((a2.value() - a.value()).norm() > 1e-3);
    let q = IsoQuery::same(&t, P::Disk(a), P::Disk(a2));
    let d = decide(&q);
    assert!(d.verdict.is_equivalent(), "{:?}", d.verdict);
    assert_sound(&q, &d);
}

#[test]
fn symmetric_witnesses_solve_their_equations() {
    let t = fixtures::cube_roots();
    let Rigidity::Symmetric(s) = rigidity_check(&t) else { panic!("expected a symmetry") };
    let target = if s.sharp { t.sharp() } else { t.clone() };
    for z in fresh_samples(128) {
        assert!((s.phi.eval(t.eval_unchecked(z)) - target.eval_unchecked(s.psi.eval(z))).norm() < 1e-8);
    }
    assert!(!s.phi.is_identity(1e-6));
}

#[test]
fn fallback_search_finds_monomial_symmetry() {
    let (found, _) = fallback_search(&FiniteBlaschkeProduct::monomial(2), 2, 1);
    let s = found.expect("rotation symmetry of z^2");
    assert!(s.residual < 1e-8);
}

#[test]
fn decisions_are_symmetric_on_fixture_pairs() {
    let t = fixtures::odd();
    let pairs = [(disk(0.2, 0.1), disk(-0.2, -0.1)), (disk(0.2, 0.1), disk(0.1, 0.2)), (disk(0.0, 0.0), P::Infinity)];
    for (a1, a2) in pairs {
        let q = IsoQuery::same(&t, a1, a2);
        assert!(decide(&q).verdict.same_outcome(&decide(&q.swapped()).verdict), "{a1} {a2}");
    }
}
