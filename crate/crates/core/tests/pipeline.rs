//! Cross-module integration: the public API driven end to end on the worked
//! examples, including the places where one module's certificate gates the
//! next module's behavior.

use leafdyn::classify::{classify, classify_matrix, multiplicative_independence};
use leafdyn::embedding::build_frame;
use leafdyn::error::Error;
use leafdyn::harmonic::{cesaro_scan, gamma_character_average, Character};
use leafdyn::math::{self, Complex};
use leafdyn::measures::{
    estimate_leaf_profile, sample_invariant, tau_point, InvariantKind, WeightedPointMeasure,
};
use leafdyn::poly::poly_parse;
use leafdyn::rng::Rng;
use leafdyn::torus::{apply_alpha, leaf_point, TorusPoint};
use leafdyn::IntMatrix;

#[test]
fn matrix_to_frame_to_leaf_pipeline() {
    // The 6×6 companion-form matrix of the second worked example.
    let b = IntMatrix::from_rows(&[
        vec![0, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 1],
        vec![-1, 1, 1, 1, 1, 1],
    ])
    .unwrap();
    let report = classify_matrix(&b).unwrap();
    assert_eq!(report.s0_count, 2);
    assert_eq!(report.central_real_dim, 4);

    let frame = build_frame(&report.input, 128).unwrap();
    assert_eq!(frame.s, 2);
    assert!(frame.independent);

    // Leaf translation in two central places, norms preserved by α.
    let x = TorusPoint::new(vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
    let w = vec![Complex::new(0.05, -0.02), Complex::new(-0.03, 0.04)];
    let y = leaf_point(&frame, &x, &w).unwrap();
    let ay = apply_alpha(&frame, &y, 1).unwrap();
    let ax = apply_alpha(&frame, &x, 1).unwrap();
    let xi = frame.central_rotation(1);
    let rotated: Vec<Complex> = w.iter().zip(&xi).map(|(z, g)| *z * *g).collect();
    let expect = leaf_point(&frame, &ax, &rotated).unwrap();
    assert!(ay.dist_sup(&expect) < 1e-9);
}

#[test]
fn degenerate_unit_polynomial_blocks_gamma_quadrature() {
    // Roots come in ± pairs (ratio −1): the frame builds, but Γ is a proper
    // subgroup and the full-torus quadrature must refuse.
    let f = poly_parse("u^8 - u^6 - u^4 - u^2 + 1").unwrap();
    let r = classify(&f).unwrap();
    assert!(r.irreducible && r.ergodic && r.algebraic_unit);
    assert!(!r.totally_irreducible);
    assert_eq!(r.s0_count, 2);
    assert!(!multiplicative_independence(&f).unwrap());

    let frame = build_frame(&f, 128).unwrap();
    assert!(!frame.independent);
    let a = Character::new(vec![1, 0, 0, 0, 0, 0, 0, 0]);
    let w = vec![Complex::new(1.0, 0.0), Complex::new(0.5, 0.5)];
    assert!(matches!(
        gamma_character_average(&frame, &a, &w, 64),
        Err(Error::IndependenceRequired)
    ));
}

#[test]
fn virtually_hyperbolic_witness() {
    // A measure whose support meets each central leaf in one point (a graph
    // over the complement directions) makes τ constant along leaf
    // translates.
    let frame = build_frame(&poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), 128).unwrap();
    let x = TorusPoint::new(vec![0.31, 0.17, 0.55, 0.73]);
    let graph_point = vec![0.04, -0.09]; // leaf coordinates of the support atom over x
    let rho_x = WeightedPointMeasure::dirac(graph_point.clone());
    let tau_x = tau_point(&frame, &rho_x, &x, 1.0).unwrap();
    let mut rng = Rng::stream(77, "pipeline/vh-witness");
    for _ in 0..25 {
        let w = Complex::new(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        let y = leaf_point(&frame, &x, &[w]).unwrap();
        // Along the leaf the graph measure shifts by −w.
        let rho_y = rho_x.map_points(|p| vec![p[0] - w.re, p[1] - w.im]);
        let tau_y = tau_point(&frame, &rho_y, &y, 1.0).unwrap();
        assert!(tau_y.dist_sup(&tau_x) < 1e-9, "τ moved along the leaf");
    }
}

#[test]
fn periodic_orbit_profile_is_finite_diagnostic_input() {
    let frame = build_frame(&poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), 128).unwrap();
    let sample = sample_invariant(
        &frame,
        &InvariantKind::PeriodicOrbit { numerators: vec![1, 0, 0, 0], denominator: 5 },
        100_000,
        0,
    )
    .unwrap();
    // The orbit is a finite invariant set; its leaf profile around one of
    // its own points exists and the masses are nondecreasing.
    let x = TorusPoint::new(sample.support()[0].clone());
    let radii: Vec<f64> = (0..6).map(|i| 0.05 * math::pow(10.0, i as f64 / 5.0)).collect();
    let profile = estimate_leaf_profile(&frame, &sample, &x, &radii, 0.05).unwrap();
    for w in profile.masses.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

#[test]
fn cesaro_with_nonzero_base_point() {
    let frame = build_frame(&poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), 128).unwrap();
    let a = Character::new(vec![0, 0, 0, 0]);
    let tau = WeightedPointMeasure::dirac(vec![0.2, -0.1]);
    let x0 = TorusPoint::new(vec![0.3, 0.1, 0.7, 0.9]);
    // Trivial character: mean 1 regardless of the base orbit.
    let scan = cesaro_scan(&frame, &a, &tau, &x0, 10, 200).unwrap();
    assert!((scan.terminal.mean - Complex::ONE).norm() < 1e-12);
    // Nontrivial character at a nonzero base point: well-defined and bounded.
    let a = Character::new(vec![1, 0, 0, 0]);
    let scan = cesaro_scan(&frame, &a, &tau, &x0, 10, 200).unwrap();
    assert!(scan.terminal.mean.norm() <= 1.0 + 1e-12);
    assert!(scan.window_max_square <= 1.0 + 1e-12);
}
