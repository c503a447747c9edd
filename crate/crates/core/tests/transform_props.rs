use rdkernel::transform::{
    apply_transform, build_quadrature, eigenfunction, eigenvalue, gram_matrix,
    hankel_laguerre_check, moment_error, reproducing_kernel_check, transform_norm_ratio,
    verify_eigenrelation, DEFAULT_MAX_MOMENT,
};
use rdkernel::verify::off_diagonal_mass;
use rdkernel::{Complex64, DeformParams64, EigenIndex, Harmonic};

fn samples() -> Vec<(f64, f64)> {
    (0..24)
        .map(|i| (0.1 + 0.15 * i as f64, 0.2 + 1.3 * i as f64))
        .collect()
}

#[test]
fn eigenvalues_snap_to_quarter_turns() {
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    for n in 1..=6 {
        let params = DeformParams64::from_n(n, 2).unwrap();
        for idx in EigenIndex::all_up_to(4, 4) {
            let ev = eigenvalue(&params, &idx);
            assert!(units.contains(&ev), "n={n} {idx:?} {ev}");
            let want = rdkernel::Complex64::from_polar(
                1.0,
                -std::f64::consts::PI * (idx.j as f64 + idx.k as f64 * n as f64 / 2.0),
            );
            assert!((ev - want).norm() < 1e-12);
        }
    }
}

#[test]
fn moment_invariant_holds_for_several_parameters() {
    for a in [2.0, 1.5, 1.0, 2.0 / 3.0, 0.5, 0.4] {
        let params = DeformParams64::new(a, 2).unwrap();
        let quad = build_quadrature(&params, 16, 1e-10).unwrap();
        for p in 0..=DEFAULT_MAX_MOMENT {
            assert!(
                moment_error(&params, &quad, p).unwrap() < 1e-10,
                "a={a} p={p}"
            );
        }
        let nodes = quad.radial_nodes();
        assert!(nodes[0] > 0.0 && *nodes.last().unwrap() < quad.r_cutoff());
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(quad.radial_weights().iter().all(|&w| w > 0.0));
    }
}

#[test]
fn eigenrelation_for_an_irrational_parameter() {
    let params = DeformParams64::new(0.8, 2).unwrap();
    let quad = build_quadrature(&params, 16, 1e-10).unwrap();
    for idx in [
        EigenIndex::cos(0, 0),
        EigenIndex::cos(1, 1),
        EigenIndex::new(0, 2, Harmonic::Sin).unwrap(),
    ] {
        let res = verify_eigenrelation(&params, &idx, &quad, &samples()).unwrap();
        assert!(res < 1e-6, "{idx:?} {res}");
    }
}

#[test]
fn transform_examples() {
    let p2 = DeformParams64::new(2.0, 2).unwrap();
    let quad = build_quadrature(&p2, 16, 1e-10).unwrap();
    let phi10 = |r: f64, t: f64| eigenfunction(&p2, &EigenIndex::cos(1, 0), r, t).unwrap();
    let y = (1.3, 0.4);
    let v = apply_transform(&p2, phi10, &quad, y).unwrap();
    assert!((v + phi10(y.0, y.1)).norm() < 1e-10);

    let p23 = DeformParams64::from_n(3, 2).unwrap();
    let quad = build_quadrature(&p23, 16, 1e-10).unwrap();
    let idx = EigenIndex::cos(0, 1);
    assert_eq!(eigenvalue(&p23, &idx), Complex64::new(0.0, 1.0));
    let phi = |r: f64, t: f64| eigenfunction(&p23, &idx, r, t).unwrap();
    let v = apply_transform(&p23, phi, &quad, y).unwrap();
    assert!((v - Complex64::new(0.0, phi(y.0, y.1))).norm() < 1e-10);
    assert_eq!(
        eigenvalue(&p23, &EigenIndex::cos(1, 1)),
        Complex64::new(0.0, -1.0)
    );
}

#[test]
fn norm_is_preserved() {
    for a in [2.0, 1.0, 2.0 / 3.0] {
        let params = DeformParams64::new(a, 2).unwrap();
        let quad = build_quadrature(&params, 16, 1e-10).unwrap();
        for idx in EigenIndex::all_up_to(2, 2) {
            let ratio = transform_norm_ratio(&params, &idx, &quad).unwrap();
            assert!((ratio - 1.0).abs() < 1e-6, "a={a} {idx:?} {ratio}");
        }
    }
}

#[test]
fn gram_matrix_is_diagonal() {
    for a in [2.0, 1.0, 2.0 / 3.0, 0.9] {
        let params = DeformParams64::new(a, 2).unwrap();
        let quad = build_quadrature(&params, 16, 1e-10).unwrap();
        let gram = gram_matrix(&params, &quad, &EigenIndex::all_up_to(3, 3)).unwrap();
        assert!(off_diagonal_mass(&gram) < 1e-8, "a={a}");
    }
}

#[test]
fn structural_identities() {
    for j in 0..=5 {
        for alpha in [0.0, 0.5, 1.0, 2.0, 3.7] {
            for s in [0.5, 1.0, 2.0, 3.0] {
                assert!(
                    hankel_laguerre_check(j, alpha, s).unwrap() < 1e-8,
                    "j={j} α={alpha} s={s}"
                );
            }
        }
    }
    for m in [2, 3] {
        for k in 0..=6 {
            for l in 0..=6 {
                assert!(
                    reproducing_kernel_check::<f64>(k, l, m).unwrap() < 1e-10,
                    "m={m} k={k} l={l}"
                );
            }
        }
    }
}

#[test]
fn higher_dimensions_are_rejected() {
    let p3 = DeformParams64::new(2.0, 3).unwrap();
    assert!(build_quadrature(&p3, 16, 1e-10).is_err());
    let p2 = DeformParams64::new(2.0, 2).unwrap();
    let quad = build_quadrature(&p2, 16, 1e-10).unwrap();
    assert!(apply_transform(&p3, |_, _| 1.0, &quad, (1.0, 0.0)).is_err());
    assert!(verify_eigenrelation(&p3, &EigenIndex::cos(0, 0), &quad, &samples()).is_err());
}
