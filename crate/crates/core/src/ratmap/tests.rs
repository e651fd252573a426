use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::polycore::{AffineMap, Polynomial};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real(coeffs: &[f64]) -> Polynomial {
    Polynomial::from_real(coeffs)
}

/// `z (z^n - 1)`.
fn z_zn_minus_1(n: usize) -> Polynomial {
    let mut coeffs = vec![0.0; n + 2];
    coeffs[1] = -1.0;
    coeffs[n + 1] = 1.0;
    real(&coeffs)
}

fn probe_points() -> Vec<Complex64> {
    (0..40)
        .map(|k| {
            let t = k as f64 * 0.37 + 0.1;
            Complex64::from_polar(0.15 + 0.06 * k as f64, t * 2.3)
        })
        .collect()
}

fn assert_same_map(a: &RationalMap, b: &RationalMap, tol: f64) {
    for z in probe_points() {
        let (va, vb) = (a.eval(z).unwrap(), b.eval(z).unwrap());
        assert!(va.relative_error(&vb) < tol, "at {z}: {va} vs {vb}");
    }
}

#[test]
fn halley_cubic_with_origin_root_matches_closed_form() {
    let h = halley_of(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    let closed = RationalMap::new(real(&[0.0, 0.0, 0.0, 1.0, 0.0, 3.0]), real(&[1.0, 0.0, -3.0, 0.0, 6.0])).unwrap();
    assert_eq!(h.degree(), 5);
    assert!(h.is_reduced());
    assert_same_map(&h, &closed, 1e-12);
}

#[test]
fn halley_double_root_cubic_is_reduced() {
    let h = halley_of(&real(&[0.0, 1.0, -2.0, 1.0])).unwrap();
    assert_eq!((h.num().deg(), h.den().deg()), (3, 2));
    let closed = RationalMap::new(real(&[0.0, 0.0, 0.0, 3.0]), real(&[1.0, -4.0, 6.0])).unwrap();
    assert_same_map(&h, &closed, 1e-12);
}

#[test]
fn halley_z_z7_minus_1_matches_closed_form() {
    let h = halley_of(&z_zn_minus_1(7)).unwrap();
    // 7 z^8 (4 z^7 + 3) / (6 z^7 + 1)^2
    let mut num = vec![0.0; 16];
    num[8] = 21.0;
    num[15] = 28.0;
    let mut den = vec![0.0; 15];
    den[0] = 1.0;
    den[7] = 12.0;
    den[14] = 36.0;
    let closed = RationalMap::new(real(&num), real(&den)).unwrap();
    assert_eq!(h.degree(), 15);
    assert_same_map(&h, &closed, 1e-11);
}

#[test]
fn single_root_is_degenerate() {
    let p = Polynomial::from_roots(&[(c(1.0, 1.0), 3)], c(1.0, 0.0));
    assert!(matches!(halley_of(&p), Err(MapError::DegenerateMap { distinct_roots: 1 })));
    assert!(matches!(konig_of(&p, 4), Err(MapError::DegenerateMap { .. })));
    assert!(matches!(halley_of(&Polynomial::zero()), Err(MapError::DegenerateMap { .. })));
}

#[test]
fn konig_order_two_is_newton() {
    let n = konig_of(&real(&[-1.0, 0.0, 1.0]), 2).unwrap();
    let newton = RationalMap::new(real(&[1.0, 0.0, 1.0]), real(&[0.0, 2.0])).unwrap();
    assert_same_map(&n, &newton, 1e-13);
    assert!(matches!(konig_of(&real(&[-1.0, 0.0, 1.0]), 1), Err(MapError::InvalidOrder(1))));
}

#[test]
fn konig_three_and_chebyshev_half_are_halley() {
    for p in [real(&[0.0, -1.0, 0.0, 1.0]), real(&[-1.0, 0.0, 0.0, 1.0]), real(&[0.0, 1.0, -2.0, 1.0])] {
        let h = halley_of(&p).unwrap();
        assert_same_map(&konig_of(&p, 3).unwrap(), &h, 1e-11);
        assert_same_map(&chebyshev_halley_of(&p, c(0.5, 0.0)).unwrap(), &h, 1e-11);
    }
}

#[test]
fn chebyshev_sigma_zero_by_hand() {
    let g = chebyshev_halley_of(&real(&[-1.0, 0.0, 1.0]), c(0.0, 0.0)).unwrap();
    let v = g.eval(c(2.0, 0.0)).unwrap().finite().unwrap();
    assert!((v - c(1.109375, 0.0)).norm() < 1e-14);
}

#[test]
fn sphere_evaluation() {
    let h2 = halley_of(&real(&[-1.0, 0.0, 1.0])).unwrap();
    assert_eq!(h2.eval_sphere(SpherePoint::Infinity).unwrap(), SpherePoint::Infinity);
    let h = halley_of(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    assert_eq!(h.eval_sphere(SpherePoint::Finite(c(0.0, 0.0))).unwrap(), SpherePoint::Finite(c(0.0, 0.0)));
    let v = h.eval(c(2.0, 0.0)).unwrap().finite().unwrap();
    assert!((v - c(104.0 / 85.0, 0.0)).norm() < 1e-14);
}

#[test]
fn evaluation_past_handoff_radius_uses_reciprocal_chart() {
    let h = halley_of(&real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
    let big = c(3e9, -2e9);
    let v = h.eval(big).unwrap().finite().unwrap();
    // z (z^3 + 2) / (2 z^3 + 1) ~ z / 2
    assert!((v / big - c(0.5, 0.0)).norm() < 1e-9);
}

#[test]
fn pole_evaluates_to_infinity_and_unreduced_is_indeterminate() {
    let h = halley_of(&real(&[-1.0, 0.0, 1.0])).unwrap();
    let pole = c(0.0, 1.0 / 3f64.sqrt());
    assert_eq!(h.eval(pole).unwrap(), SpherePoint::Infinity);
    let raw = RationalMap::new(real(&[-1.0, 0.0, 1.0]), real(&[-1.0, 1.0])).unwrap();
    assert_eq!(raw.eval(c(1.0, 0.0)), Err(MapError::Indeterminate));
}

fn contains(points: &[SpherePoint], z: SpherePoint) -> bool {
    points.iter().any(|p| p.chordal_distance(&z) < 1e-9)
}

#[test]
fn fixed_points_of_odd_cubic() {
    let h = halley_of(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    let fp = fixed_points(&h).unwrap();
    assert_eq!(fp.len(), 6);
    let s = 1.0 / 3f64.sqrt();
    for z in [0.0, 1.0, -1.0, s, -s] {
        assert!(contains(&fp, SpherePoint::Finite(c(z, 0.0))), "missing {z}");
    }
    assert_eq!(fp.last(), Some(&SpherePoint::Infinity));
}

#[test]
fn fixed_points_of_double_root_cubic() {
    let h = halley_of(&real(&[0.0, 1.0, -2.0, 1.0])).unwrap();
    let fp = fixed_points(&h).unwrap();
    assert_eq!(fp.len(), 4);
    for z in [0.0, 1.0, 1.0 / 3.0] {
        assert!(contains(&fp, SpherePoint::Finite(c(z, 0.0))));
    }
}

#[test]
fn extraneous_fixed_point_of_zn_times_linear() {
    for n in 2..6 {
        let p = Polynomial::from_roots(&[(c(0.0, 0.0), n), (c(1.0, 0.0), 1)], c(1.0, 0.0));
        let fp = fixed_points(&halley_of(&p).unwrap()).unwrap();
        let e = n as f64 / (n as f64 + 1.0);
        assert!(contains(&fp, SpherePoint::Finite(c(e, 0.0))), "n = {n}: {fp:?}");
        let m = multiplier_at(&halley_of(&p).unwrap(), SpherePoint::Finite(c(e, 0.0))).unwrap();
        assert!((m - c(3.0, 0.0)).norm() < 1e-8);
    }
}

#[test]
fn multipliers_match_closed_forms() {
    let h = halley_of(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    assert!(multiplier_at(&h, SpherePoint::Finite(c(1.0, 0.0))).unwrap().norm() < 1e-12);
    let inf = multiplier_at(&h, SpherePoint::Infinity).unwrap();
    assert!((inf - c(2.0, 0.0)).norm() < 1e-12);

    let h2 = halley_of(&real(&[0.0, 1.0, -2.0, 1.0])).unwrap();
    let m = multiplier_at(&h2, SpherePoint::Finite(c(1.0 / 3.0, 0.0))).unwrap();
    assert!((m - c(3.0, 0.0)).norm() < 1e-10);
    assert!(matches!(multiplier_at(&h2, SpherePoint::Finite(c(0.5, 0.0))), Err(MapError::NotFixed { .. })));
}

/// Independent route to the multiplier at infinity: Richardson-extrapolated
/// difference quotient of `w -> 1/R(1/w)` at `w = 1e-6`.
fn richardson_multiplier_at_infinity(r: &RationalMap) -> Complex64 {
    let g = |w: f64| -> Complex64 {
        let v = r.eval(c(1.0 / w, 0.0)).unwrap().finite().unwrap();
        v.inv()
    };
    let h = 1e-6;
    let d1 = g(h) / h;
    let d2 = g(h / 2.0) / (h / 2.0);
    d2 * 2.0 - d1
}

#[test]
fn infinity_multiplier_agrees_with_richardson() {
    for d in 2..=7 {
        let mut coeffs = vec![0.0; d + 1];
        coeffs[0] = -1.0;
        coeffs[1] = 0.3;
        coeffs[d] = 1.0;
        let h = halley_of(&real(&coeffs)).unwrap();
        let exact = multiplier_at(&h, SpherePoint::Infinity).unwrap();
        let expected = (d as f64 + 1.0) / (d as f64 - 1.0);
        assert!((exact.re - expected).abs() < 1e-10);
        assert!((richardson_multiplier_at_infinity(&h) - exact).norm() < 1e-6);
    }
}

#[test]
fn critical_points_of_named_examples() {
    let unicritical = halley_of(&real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
    let crit = critical_points(&unicritical).unwrap();
    let roots: Vec<Complex64> =
        (0..3).map(|k| Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 3.0)).collect();
    let (at_roots, free) = partition_critical(&crit, &roots);
    assert!(free.is_empty(), "{free:?}");
    assert_eq!(at_roots.iter().map(|c| c.multiplicity).sum::<usize>(), 6);

    let h = halley_of(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    let (_, free) = partition_critical(&critical_points(&h).unwrap(), &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
    assert_eq!(free.len(), 2);
    for f in &free {
        assert!((f.location.norm() - 1.0 / 6f64.sqrt()).abs() < 1e-10 && f.location.re.abs() < 1e-10);
    }

    let h3 = halley_of(&z_zn_minus_1(3)).unwrap();
    let mut roots3 = vec![c(0.0, 0.0)];
    roots3.extend(roots.iter().copied());
    let (_, free) = partition_critical(&critical_points(&h3).unwrap(), &roots3);
    assert_eq!(free.len(), 3);
    for f in &free {
        assert!((f.location.powi(3) - c(-0.2, 0.0)).norm() < 1e-10);
    }
}

#[test]
fn poles_of_named_examples() {
    for k in 1..=3usize {
        let p = Polynomial::from_roots(&[(c(1.0, 0.0), k), (c(-1.0, 0.0), k)], c(1.0, 0.0));
        let ps = poles(&halley_of(&p).unwrap()).unwrap();
        assert_eq!(ps.len(), 2);
        for pole in ps {
            assert!((pole.location.powi(2) + 1.0 / (2.0 * k as f64 + 1.0)).norm() < 1e-10);
        }
    }
    let ps = poles(&halley_of(&z_zn_minus_1(7)).unwrap()).unwrap();
    assert_eq!(ps.len(), 7);
    for pole in &ps {
        assert_eq!(pole.multiplicity, 2);
        assert!((pole.location.powi(7) + 1.0 / 6.0).norm() < 1e-9);
    }
    let ps = poles(&halley_of(&real(&[-1.0, 0.0, 0.0, 1.0])).unwrap()).unwrap();
    assert_eq!(ps.len(), 3);
    for pole in ps {
        assert!((pole.location.powi(3) + 0.5).norm() < 1e-12);
    }
}

#[test]
fn local_degrees() {
    let h = halley_of(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap();
    assert!(local_degree_at(&h, c(1.0, 0.0)).unwrap() >= 3);
    assert_eq!(local_degree_at(&h, c(1.0 / 3f64.sqrt(), 0.0)).unwrap(), 1);
    let h2 = halley_of(&real(&[-1.0, 0.0, 1.0])).unwrap();
    assert_eq!(local_degree_at(&h2, c(1.0, 0.0)).unwrap(), 3);
    assert!(local_degree_at(&h2, c(0.5, 0.0)).is_err());
}

#[test]
fn degree_census_examples() {
    let census = degree_census(&real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
    assert_eq!(census.predicted_degree, 4);
    assert_eq!((census.special_critical, census.special_multiplicity), (1, 2));
    let census = degree_census(&real(&[0.0, 0.0, -1.0, 0.0, 1.0])).unwrap();
    assert_eq!(
        census,
        DegreeCensus { distinct_roots: 3, special_critical: 0, special_multiplicity: 0, predicted_degree: 5 }
    );
    assert_eq!(degree_census(&real(&[0.0, -1.0, 0.0, 1.0])).unwrap().predicted_degree, 5);
    for p in [real(&[-1.0, 0.0, 0.0, 1.0]), real(&[0.0, 0.0, -1.0, 0.0, 1.0]), real(&[0.0, 1.0, -2.0, 1.0])] {
        assert_eq!(halley_of(&p).unwrap().degree(), degree_census(&p).unwrap().predicted_degree);
    }
}

#[test]
fn scaling_property() {
    let p = real(&[0.0, -1.0, 0.0, 1.0]);
    assert!(scaling_check(&p, &AffineMap::identity(), c(1.0, 0.0), 20, 1).unwrap());

    let a = c(0.8, -1.3);
    let q = Polynomial::new(vec![-a * a, c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(scaling_check(&q, &AffineMap::scaling(a).unwrap(), (a * a).inv(), 20, 2).unwrap());

    let pb = real(&[3.5, 6.0, 0.0, 1.0]);
    let flip = AffineMap::scaling(c(-1.0, 0.0)).unwrap();
    assert!(scaling_check(&pb, &flip, c(-1.0, 0.0), 20, 3).unwrap());
    assert!(matches!(scaling_check(&pb, &flip, c(0.0, 0.0), 5, 3), Err(MapError::ZeroScale)));
}

#[test]
fn real_polynomials_commute_with_conjugation() {
    let h = halley_of(&real(&[2.0, -1.0, 0.5, 0.0, 1.0])).unwrap();
    for z in probe_points() {
        let a = h.eval(z.conj()).unwrap().finite().unwrap();
        let b = h.eval(z).unwrap().finite().unwrap().conj();
        assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn rotation_equivariance_of_z_zn_minus_1() {
    for n in [2usize, 3, 5, 7] {
        let h = halley_of(&z_zn_minus_1(n)).unwrap();
        let lambda = Complex64::from_polar(1.0, std::f64::consts::TAU / n as f64);
        for z in probe_points() {
            let a = h.eval(lambda * z).unwrap().finite().unwrap();
            let b = lambda * h.eval(z).unwrap().finite().unwrap();
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0), "n = {n} at {z}");
        }
    }
}

fn root_strategy() -> impl Strategy<Value = Vec<(f64, f64, usize)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64, 1usize..=2), 2..=4).prop_filter("separated", |rs| {
        rs.iter()
            .enumerate()
            .all(|(i, a)| rs.iter().skip(i + 1).all(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() > 0.4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn halley_degree_matches_census(roots in root_strategy()) {
        let pairs: Vec<(Complex64, usize)> = roots.iter().map(|&(x, y, k)| (c(x, y), k)).collect();
        let p = Polynomial::from_roots(&pairs, c(1.0, 0.5));
        let h = halley_of(&p).unwrap();
        prop_assert_eq!(h.degree(), degree_census(&p).unwrap().predicted_degree);
    }

    // Expanded coefficients of the family members differ in degree and
    // conditioning, so agreement is checked against a product-form oracle at
    // a tolerance that allows for clustered multiple roots.
    #[test]
    fn family_members_coincide(roots in root_strategy()) {
        let pairs: Vec<(Complex64, usize)> = roots.iter().map(|&(x, y, k)| (c(x, y), k)).collect();
        let p = Polynomial::from_roots(&pairs, c(-0.7, 1.1));
        let h = halley_of(&p).unwrap();
        let k3 = konig_of(&p, 3).unwrap();
        let g = chebyshev_halley_of(&p, c(0.5, 0.0)).unwrap();
        for z in probe_points() {
            let s1: Complex64 = pairs.iter().map(|&(r, k)| k as f64 / (z - r)).sum();
            let s2: Complex64 = pairs.iter().map(|&(r, k)| k as f64 / ((z - r) * (z - r))).sum();
            let expected = SpherePoint::from(z - 2.0 * s1 / (s1 * s1 + s2));
            for map in [&h, &k3, &g] {
                let got = map.eval(z).unwrap();
                prop_assert!(got.relative_error(&expected) < 1e-7, "{} vs {} at {}", got, expected, z);
            }
        }
    }
}
