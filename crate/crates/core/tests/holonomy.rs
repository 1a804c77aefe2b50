use holokernel::exterior::{basis_blades, KForm, OrientedPlane};
use holokernel::holonomy::metric::{
    hitchin_endomorphism, hitchin_invariant, standard_complex_structure, three_form_bilinear,
};
use holokernel::holonomy::planes::{cayley_transform, random_exact_cayley_plane, random_skew, reference_cayley_plane};
use holokernel::holonomy::standard;
use holokernel::holonomy::standard::{kahler0, omega0, phi0, rho1_0, rho2_0, sigma0};
use holokernel::holonomy::*;
use holokernel::linalg::RatMatrix;
use holokernel::par::stream_rng;
use holokernel::scalar::{frac, int};
use num::Zero;

fn random_frame(n: usize, seed: u64) -> RatMatrix {
    let mut rng = stream_rng(seed, 0);
    loop {
        let s = random_skew(&mut rng, n, 2);
        let q = cayley_transform(&s);
        let d = RatMatrix::from_fn(n, n, |i, j| {
            if i == j {
                int(1 + (i as i64 % 3))
            } else if j == i + 1 {
                frac(1, 2)
            } else {
                int(0)
            }
        });
        let g = &d * &q;
        if g.determinant() > int(0) {
            return g;
        }
    }
}

#[test]
fn standard_forms_shape() {
    assert_eq!(omega0().len(), 14);
    assert_eq!(phi0().len(), 7);
    assert_eq!(phi0().star(), sigma0());
    let w = omega0();
    assert_eq!(w.wedge(&w).unwrap(), KForm::volume(8).scale(&int(14)));
    assert_eq!(w.star(), w);
}

#[test]
fn contraction_of_phi() {
    let expected = &standard::self_dual(7, 3, 0) + &KForm::from_int_terms(7, 2, &[(&[2, 3], 1)]);
    assert_eq!(phi0().contract_basis(1), expected);
}

#[test]
fn restriction_examples() {
    let r41 = OrientedPlane::coordinate(8, &[1, 2, 3, 4]);
    assert_eq!(omega0().restrict(&r41).unwrap(), KForm::volume(4));
    let xs = OrientedPlane::coordinate(7, &[4, 5, 6]);
    assert!(phi0().restrict(&xs).unwrap().is_zero());
    let three = OrientedPlane::coordinate(8, &[1, 2, 3]);
    assert!(omega0().restrict(&three).unwrap().is_zero());
}

#[test]
fn decompositions_have_expected_ranks() {
    let (s7, g2, su3) = standard_models();
    let d8 = s7.decomposition();
    assert_eq!(d8.ranks(), vec![7, 21]);
    assert!(d8.is_complete_orthogonal());
    let d7 = g2.decomposition();
    assert_eq!(d7.ranks(), vec![7, 14]);
    assert!(d7.is_complete_orthogonal());
    let d6 = su3.decomposition();
    assert_eq!(d6.ranks(), vec![1, 6, 8]);
    assert!(d6.is_complete_orthogonal());
    let parts = d6.project(su3.omega()).unwrap();
    assert_eq!(&parts[0], su3.omega());
}

#[test]
fn contractions_of_phi_lie_in_seven_part() {
    let g2 = G2Model::standard();
    let d = g2.decomposition();
    let t = g2.wedge_star_operator();
    for i in 1..=7 {
        let b = phi0().contract_basis(i);
        let parts = d.project(&b).unwrap();
        assert_eq!(parts[0], b);
        assert!(parts[1].is_zero());
        let tb = KForm::from_vector(7, 2, &t.mul_vec(&b.to_vector()));
        assert_eq!(tb, b.scale(&int(2)));
    }
}

#[test]
fn spin_algebra_annihilates_omega() {
    let s7 = Spin7Model::standard();
    let d = s7.decomposition();
    let blades = basis_blades(8, 2);
    for b in d.orthogonal_basis("21", s7.metric()) {
        let mut acc = KForm::zero(8, 4);
        for (k, bl) in blades.iter().enumerate() {
            let c = b.to_vector()[k].clone();
            if c.is_zero() {
                continue;
            }
            let idx = holokernel::exterior::blade_indices(*bl);
            let (i, j) = (idx[0] - 1, idx[1] - 1);
            acc = &acc + &omega0().gl_derivative(i, j).scale(&c);
            acc = &acc - &omega0().gl_derivative(j, i).scale(&c);
        }
        assert!(acc.is_zero());
    }
}

#[test]
fn orbit_ranks() {
    let (s7, g2, su3) = standard_models();
    let r = orbit_rank_spin7(&s7);
    assert_eq!(r.action_rank, 43);
    assert_eq!(r.cayley_rank, Some(4));
    assert_eq!(r.cayley_locus_dim, Some(12));
    let r = orbit_rank_g2(&g2);
    assert_eq!(r.action_rank, 35);
    assert!(r.is_open());
    assert_eq!(orbit_rank_su3(&su3).action_rank, 20);
}

#[test]
fn transported_models_keep_orbit_data() {
    let g = random_frame(8, 3);
    let m = Spin7Model::from_frame(g).unwrap();
    let r = orbit_rank_spin7(&m);
    assert_eq!((r.action_rank, r.cayley_rank), (43, Some(4)));
    let plane = reference_cayley_plane(&m);
    assert_eq!(classify_cayley(&plane, &m).unwrap().kind, PlaneKind::Cayley);
    let d = m.decomposition();
    assert_eq!(d.ranks(), vec![7, 21]);
}

#[test]
fn energy_identity() {
    let s7 = Spin7Model::standard();
    let d = s7.decomposition();
    for b in d.orthogonal_basis("21", s7.metric()) {
        assert!(s7.energy_identity_residual(&b, &d).unwrap().is_zero());
    }
    let mixed = &KForm::from_int_terms(8, 2, &[(&[1, 2], 3), (&[5, 7], -2)]) + &phi_like();
    assert!(s7.energy_identity_residual(&mixed, &d).unwrap().is_zero());
}

fn phi_like() -> KForm {
    KForm::from_int_terms(8, 2, &[(&[1, 8], 1), (&[3, 4], 5)])
}

#[test]
fn seven_part_squares_sum_to_three_halves_omega() {
    let s7 = Spin7Model::standard();
    let d = s7.decomposition();
    assert_eq!(s7.seven_part_square_sum(&d), omega0().scale(&frac(3, 2)));
}

#[test]
fn cylinder_lifts() {
    let (s7, g2, su3) = standard_models();
    let lifted = cylinder_lift_7to8(&g2).unwrap();
    assert_eq!(lifted.omega(), s7.omega());
    let g2b = cylinder_lift_6to7(&su3).unwrap();
    assert_eq!(g2b.phi(), g2.phi());
    assert_eq!(g2b.sigma(), g2.sigma());
    let lam = int(2);
    let scaled = G2Model::from_frame(RatMatrix::identity(7).scale(&lam)).unwrap();
    assert_eq!(scaled.sigma(), &sigma0().scale(&int(16)));
    let l = cylinder_lift_7to8(&scaled).unwrap();
    assert_eq!(l.omega(), &omega0().pullback(l.frame()).unwrap());
}

#[test]
fn lifts_of_transported_models() {
    let b = random_frame(6, 11);
    let su3 = SU3Model::from_frame(b).unwrap();
    let g2 = cylinder_lift_6to7(&su3).unwrap();
    let s7 = cylinder_lift_7to8(&g2).unwrap();
    assert_eq!(orbit_rank_spin7(&s7).action_rank, 43);
}

#[test]
fn su3_standard_and_failures() {
    let su3 = SU3Model::standard();
    let i = su3.complex_structure();
    assert_eq!(&(i * i), &RatMatrix::identity(6).scale(&int(-1)));
    assert_eq!(&-&rho1_0().pullback(i).unwrap(), &rho2_0());
    let k = hitchin_endomorphism(&rho1_0());
    assert_eq!(hitchin_invariant(&k), int(-4));
    assert_eq!(standard_complex_structure(), *i);
    let v = su3_check(&kahler0(), &rho1_0());
    assert!(v.passes());
    assert_eq!(v.complex_structure.as_ref(), Some(i));

    let perturbed = &kahler0() + &KForm::from_int_terms(6, 2, &[(&[3, 5], 1), (&[4, 6], -1)]);
    assert!(!perturbed.wedge(&rho1_0()).unwrap().is_zero());
    let v = su3_check(&perturbed, &rho1_0());
    assert!(!v.compatible && !v.passes());

    let dec = KForm::from_int_terms(6, 3, &[(&[3, 4, 5], 1)]);
    let v = su3_check(&kahler0(), &dec);
    assert_eq!(v.lambda, int(0));
    assert!(!v.positive);
}

#[test]
fn metric_from_standard_and_scaled_phi() {
    assert_eq!(three_form_bilinear(&phi0()), RatMatrix::identity(7).scale(&int(6)));
    match metric_from_3form(&phi0()) {
        ThreeFormMetric::Positive {
            metric,
            volume,
            orientation,
        } => {
            assert!(metric.is_euclidean());
            assert_eq!(volume, int(1));
            assert_eq!(orientation, 1);
        }
        other => panic!("{other:?}"),
    }
    let m = metric_from_3form(&phi0().scale(&int(8)));
    assert_eq!(m.metric().unwrap().matrix(), &RatMatrix::identity(7).scale(&int(4)));
    let dec = KForm::from_int_terms(7, 3, &[(&[4, 5, 6], 1)]);
    assert!(!metric_from_3form(&dec).is_positive());
}

#[test]
fn metric_equivariance() {
    let g0 = metric_from_3form(&phi0());
    for seed in 0..5 {
        let a = random_frame(7, seed);
        let m = metric_from_3form(&phi0().pullback(&a).unwrap());
        let expected = &(&a.transpose() * g0.metric().unwrap().matrix()) * &a;
        assert_eq!(m.metric().unwrap().matrix(), &expected);
    }
}

#[test]
fn plane_classification() {
    let (s7, g2, _) = standard_models();
    let r41 = OrientedPlane::coordinate(8, &[1, 2, 3, 4]);
    let c = classify_cayley(&r41, &s7).unwrap();
    assert_eq!(c.kind, PlaneKind::Cayley);
    assert!(c.defect.iter().all(Zero::is_zero));
    let flipped = OrientedPlane::new(&r41.vectors(), -1).unwrap();
    assert_eq!(classify_cayley(&flipped, &s7).unwrap().kind, PlaneKind::None);
    let bad = OrientedPlane::coordinate(8, &[1, 2, 3, 5]);
    assert_eq!(classify_cayley(&bad, &s7).unwrap().kind, PlaneKind::None);

    let ys = OrientedPlane::coordinate(7, &[1, 2, 3]);
    assert_eq!(classify_g2(&ys, &g2).unwrap().kind, PlaneKind::Associative);
    let xs = OrientedPlane::coordinate(7, &[4, 5, 6, 7]);
    assert_eq!(classify_g2(&xs, &g2).unwrap().kind, PlaneKind::Coassociative);
    let mixed = OrientedPlane::coordinate(7, &[1, 4, 6]);
    assert_eq!(classify_g2(&mixed, &g2).unwrap().kind, PlaneKind::None);
}

#[test]
fn exact_cayley_planes_from_triples() {
    let s7 = Spin7Model::standard();
    let mut rng = stream_rng(5, 1);
    for _ in 0..10 {
        let p = random_exact_cayley_plane(&s7, &mut rng);
        assert_eq!(classify_cayley(&p, &s7).unwrap().kind, PlaneKind::Cayley);
    }
    let m = Spin7Model::from_frame(random_frame(8, 9)).unwrap();
    let p = random_exact_cayley_plane(&m, &mut rng);
    assert_eq!(classify_cayley(&p, &m).unwrap().kind, PlaneKind::Cayley);
}

#[test]
fn taming_examples() {
    let s7 = Spin7Model::standard();
    let cfg = SamplingConfig {
        samples: 500,
        ..Default::default()
    };
    let cert = taming_check(&omega0(), &s7, &cfg).unwrap();
    assert!(cert.tamed);
    assert_eq!(cert.relative, RatMatrix::identity(21).scale(&int(-1)));
    let cert = taming_check(&-&omega0(), &s7, &cfg).unwrap();
    assert!(!cert.tamed);
    let eps = KForm::from_terms(8, 4, [(&[1usize, 2, 3, 4][..], frac(1, 100))]).unwrap();
    let cert = taming_check(&(&omega0() + &eps), &s7, &cfg).unwrap();
    assert!(cert.tamed);
    let cert = taming_check_pair(&phi0(), &sigma0(), &G2Model::standard(), &cfg).unwrap();
    assert!(cert.tamed);
}

#[test]
fn calibration_inequality_on_random_planes() {
    let s7 = Spin7Model::standard();
    let cfg = SamplingConfig {
        samples: 2000,
        ..Default::default()
    };
    let r = calibration_sampling(&s7, &cfg, 10, 1e-9);
    assert!(r.passes(), "{r:?}");
    assert!(r.max_ratio < 1.0 && r.max_ratio > 0.5);
    let m = Spin7Model::from_frame(random_frame(8, 3)).unwrap();
    let r = calibration_sampling(&m, &cfg, 3, 1e-9);
    assert!(r.passes(), "{r:?}");
}
