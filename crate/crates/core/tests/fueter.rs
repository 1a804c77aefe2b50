use holokernel::fueter::*;
use holokernel::par::stream_rng;
use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

fn q(w: f64, i: f64, j: f64, k: f64) -> Quaternion {
    Quaternion::new(w, i, j, k)
}

#[test]
fn quaternion_table() {
    let [i, j, k] = units();
    let minus_one = q(-1.0, 0.0, 0.0, 0.0);
    assert_eq!(i * i, minus_one);
    assert_eq!(j * j, minus_one);
    assert_eq!(k * k, minus_one);
    assert_eq!(i * j, k);
    assert_eq!(j * k, i);
    assert_eq!(k * i, j);
    assert_eq!(j * i, -k);
}

#[test]
fn fueter_examples() {
    let c = QuaternionField::constant(7, q(1.0, 2.0, -3.0, 0.5)).unwrap();
    assert_eq!(fueter_apply(&c).sup_norm(), 0.0);
    assert_eq!(fueter_square_residual(&c), 0.0);

    let n = 9;
    let saw = QuaternionField::from_fn(n, |y| q(y[0], 0.0, 0.0, 0.0)).unwrap();
    let d = fueter_apply(&saw);
    for a in 1..n - 1 {
        for b in 0..n {
            for c in 0..n {
                let v = d.at(a, b, c);
                assert!((v - units()[0]).coords.amax() < 1e-12);
            }
        }
    }

    let unit = q(0.3, -0.2, 0.5, 0.7);
    let wave = QuaternionField::from_fn(n, |y| unit * (2.0 * PI * y[0]).cos()).unwrap();
    let sine = QuaternionField::from_fn(n, |y| units()[0] * unit * (2.0 * PI * y[0]).sin()).unwrap();
    let h = 1.0 / n as f64;
    let symbol = (2.0 * PI / n as f64).sin() / h;
    let residual = fueter_apply(&wave).add(&sine.scale(symbol)).unwrap().sup_norm();
    assert!(residual <= 1e-10 * symbol, "{residual}");

    // linearity
    let f = QuaternionField::random(5, 1).unwrap();
    let g = QuaternionField::random(5, 2).unwrap();
    let lhs = fueter_apply(&f.scale(2.0).add(&g.scale(-3.0)).unwrap());
    let rhs = fueter_apply(&f).scale(2.0).add(&fueter_apply(&g).scale(-3.0)).unwrap();
    assert!(lhs.sub(&rhs).unwrap().sup_norm() < 1e-10);
}

#[test]
fn square_identity() {
    let [i, j, k] = units();
    for seed in 0..50 {
        let f = QuaternionField::random(9, seed).unwrap();
        assert!(fueter_square_residual(&f) <= 1e-12 * f.sup_norm());
    }
    for order in [[j, i, k], [k, j, i], [i, k, j]] {
        let op = FueterOperator::with_units(order);
        let f = QuaternionField::random(9, 77).unwrap();
        assert!(op.square_residual(&f) <= 1e-12 * f.sup_norm());
    }
    let pure_i = QuaternionField::from_fn(9, |y| q(0.0, (y[0] * 3.0).sin() + y[1] * y[2], 0.0, 0.0)).unwrap();
    assert!(fueter_square_residual(&pure_i) <= 1e-12 * pure_i.sup_norm());
}

#[test]
fn kernel_dimensions() {
    for n in [3, 5, 7, 9, 11] {
        assert_eq!(kernel_dimension(n).unwrap(), 4);
    }
    assert_eq!(kernel_dimension(4), Err(FueterError::EvenLattice(4)));
    assert!(QuaternionField::zeros(6).is_err());

    let m = FueterOperator::default().matrix(5).unwrap();
    assert_eq!((&m - m.transpose()).amax(), 0.0);
    let sv = m.clone().singular_values();
    let top = sv.max();
    let nullity = sv.iter().filter(|&&s| s <= 1e-9 * top).count();
    assert_eq!(nullity, 4);

    let f = QuaternionField::random(5, 3).unwrap();
    let via_matrix = &m * nalgebra::DVector::from_vec(f.to_vector());
    let direct = fueter_apply(&f).to_vector();
    assert!(via_matrix.iter().zip(&direct).all(|(a, b)| (a - b).abs() < 1e-10));
}

#[test]
fn eigen_residuals() {
    let c = QuaternionField::constant(5, q(1.0, 0.0, 0.0, 0.0)).unwrap();
    assert_eq!(nonlinear_eigen_residual(&c, 0.0).unwrap(), 0.0);
    assert_eq!(
        nonlinear_eigen_residual(&QuaternionField::zeros(5).unwrap(), 1.0),
        Err(FueterError::ZeroField)
    );
    let f = QuaternionField::random(5, 4).unwrap();
    assert!(nonlinear_eigen_residual(&f, 1.0).unwrap() > 1e-3);

    let m = FueterOperator::default().matrix(5).unwrap();
    let eig = nalgebra::SymmetricEigen::new(m);
    for k in [0, 17, 250, 499] {
        let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        let field = QuaternionField::from_vector(5, &v).unwrap();
        let r = nonlinear_eigen_residual(&field, eig.eigenvalues[k]).unwrap();
        assert!(r <= 1e-8, "{k}: {r}");
    }
}

#[test]
fn spectral_flow_examples() {
    let one = |x: f64| DMatrix::from_element(1, 1, x);
    let fam = SelfAdjointFamily::real(vec![-1.0, 1.0], vec![one(-1.0), one(1.0)]).unwrap();
    let r = spectral_flow(&fam).unwrap();
    assert_eq!(r.flow, 1);
    assert_eq!(r.crossings.len(), 1);
    assert!(r.crossings[0].t.abs() < 1e-9);
    assert_eq!(spectral_flow(&fam.reversed()).unwrap().flow, -1);

    let singular = SelfAdjointFamily::real(vec![0.0, 1.0], vec![one(0.0), one(1.0)]).unwrap();
    assert!(matches!(
        spectral_flow(&singular),
        Err(FueterError::SingularEndpoint { .. })
    ));
    let asym = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
    assert!(matches!(
        SelfAdjointFamily::real(vec![0.0, 1.0], vec![asym.clone(), asym]),
        Err(FueterError::NotSelfAdjoint { .. })
    ));

    // one eigenvalue crossing up, then back down
    let fam = SelfAdjointFamily::real(vec![0.0, 1.0, 2.0], vec![one(-1.0), one(1.0), one(-1.0)]).unwrap();
    let r = spectral_flow(&fam).unwrap();
    assert_eq!(r.flow, 0);
    assert_eq!(r.crossings.len(), 2);

    // crossings 1e-4 apart start in one grid cell
    let diag = |a: f64, b: f64| DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![a, b]));
    let close = SelfAdjointFamily::real(vec![0.0, 1.0], vec![diag(-0.3, -0.3001), diag(0.7, 0.6999)]).unwrap();
    let r = spectral_flow(&close).unwrap();
    assert_eq!(r.flow, 2);
    assert_eq!(r.crossings.len(), 2);
    assert!((r.crossings[1].t - r.crossings[0].t - 1e-4).abs() < 1e-8);
}

fn random_symmetric(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

fn random_hermitian(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn invertible_symmetric(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    loop {
        let m = random_symmetric(rng, n);
        if sym_eigs(&m).iter().all(|e| e.abs() > 1e-3) {
            return m;
        }
    }
}

fn invertible_hermitian(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    loop {
        let m = random_hermitian(rng, n);
        if herm_eigs(&m).iter().all(|e| e.abs() > 1e-3) {
            return m;
        }
    }
}

fn sym_eigs(m: &DMatrix<f64>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

fn herm_eigs(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

#[test]
fn spectral_flow_is_additive_and_antisymmetric() {
    for seed in 0..100 {
        let mut rng = stream_rng(seed, 8);
        let n = rng.random_range(1..=8);
        let mut mats: Vec<DMatrix<f64>> = Vec::new();
        for k in 0..5 {
            let m = if k == 0 || k == 2 || k == 4 {
                invertible_symmetric(&mut rng, n)
            } else {
                random_symmetric(&mut rng, n)
            };
            mats.push(m);
        }
        let a = SelfAdjointFamily::real(vec![0.0, 0.5, 1.0], mats[0..3].to_vec()).unwrap();
        let b = SelfAdjointFamily::real(vec![0.0, 0.7, 1.0], mats[2..5].to_vec()).unwrap();
        let fa = spectral_flow(&a).unwrap().flow;
        let fb = spectral_flow(&b).unwrap().flow;
        let ab = spectral_flow(&a.concat(&b).unwrap()).unwrap().flow;
        assert_eq!(ab, fa + fb, "seed {seed}");
        assert_eq!(spectral_flow(&a.reversed()).unwrap().flow, -fa);
        let net = |m: &DMatrix<f64>| sym_eigs(m).iter().filter(|&&e| e < 0.0).count() as i64;
        assert_eq!(fa, net(&mats[0]) - net(&mats[2]));
    }
}

#[test]
fn realified_complex_flow_is_even() {
    let mut nonzero = 0;
    for seed in 0..40 {
        let mut rng = stream_rng(seed, 13);
        let n = rng.random_range(1..=4);
        let start = invertible_hermitian(&mut rng, n);
        let mid = random_hermitian(&mut rng, n);
        let end = invertible_hermitian(&mut rng, n);
        let fam = SelfAdjointFamily::complex(vec![0.0, 1.0, 2.0], vec![start.clone(), mid, end]).unwrap();
        let complex = spectral_flow(&fam).unwrap().flow;
        let real = spectral_flow(&fam.realified()).unwrap().flow;
        assert_eq!(real, 2 * complex);
        nonzero += (complex != 0) as usize;

        let back = random_hermitian(&mut rng, n);
        let lp = SelfAdjointFamily::complex(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![start.clone(), random_hermitian(&mut rng, n), back, start],
        )
        .unwrap();
        let loop_flow = spectral_flow(&lp.realified()).unwrap().flow;
        assert_eq!(loop_flow % 2, 0);
    }
    assert!(nonzero > 5);
}
