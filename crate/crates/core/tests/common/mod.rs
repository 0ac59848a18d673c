//! Shared oracles for the integration suites: brute-force grid quadrature,
//! seeded random state batteries, and hand-built reference states. Everything
//! here is deliberately independent of the closed-form paths it checks.

#![allow(dead_code)]

use cvsep::mat::Mat;
use cvsep::poly::Poly;
use cvsep::symplectic::{mode_rotation, mode_squeeze, tms_symplectic, CovarianceMatrix};
use cvsep::wigner::{fock_wigner, gaussian_wigner, PGSum, PolyGaussian};
use rand::Rng;

pub fn approx(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} (|diff| = {:.3e} > {tol:.1e})",
        (a - b).abs()
    );
}

/// Trapezoid quadrature of (2π)^N ∫ W₁W₂ on [−8, 8]^(2N); the brute-force
/// counterpart of the Wick-expansion overlap.
pub fn overlap_by_quadrature(w1: &PGSum<f64>, w2: &PGSum<f64>, points: usize) -> f64 {
    assert_eq!(w1.modes(), w2.modes());
    let modes = w1.modes();
    let extent = 8.0;
    let h = 2.0 * extent / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| -extent + h * i as f64).collect();
    let wt = |i: usize| if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
    let mut acc = 0.0;
    if modes == 1 {
        for (i, &x) in xs.iter().enumerate() {
            for (j, &p) in xs.iter().enumerate() {
                acc += wt(i) * wt(j) * w1.eval(&[x, p]) * w2.eval(&[x, p]);
            }
        }
        return acc * h * h * 2.0 * std::f64::consts::PI;
    }
    for (i, &x1) in xs.iter().enumerate() {
        for (j, &p1) in xs.iter().enumerate() {
            let wij = wt(i) * wt(j);
            for (k, &x2) in xs.iter().enumerate() {
                let wijk = wij * wt(k);
                for (l, &p2) in xs.iter().enumerate() {
                    let r = [x1, p1, x2, p2];
                    acc += wijk * wt(l) * w1.eval(&r) * w2.eval(&r);
                }
            }
        }
    }
    acc * h.powi(4) * (2.0 * std::f64::consts::PI).powi(2)
}

/// Plain ∫ f(x, p) W dxdp on a grid, for radial-moment style checks.
pub fn weighted_integral_by_quadrature(
    w: &PolyGaussian<f64>,
    f: impl Fn(f64, f64) -> f64,
    points: usize,
) -> f64 {
    let extent = 8.0;
    let h = 2.0 * extent / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| -extent + h * i as f64).collect();
    let wt = |i: usize| if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &p) in xs.iter().enumerate() {
            acc += wt(i) * wt(j) * w.eval(&[x, p]) * f(x, p);
        }
    }
    acc * h * h
}

/// Tr[ρ_fock(n) ρ_th(a)] by the Fock-basis sum: the thermal state of variance
/// a has ⟨n|ρ_th|n⟩ = (2/(a+1)) ((a−1)/(a+1))ⁿ.
pub fn fock_thermal_trace(n: usize, a: f64) -> f64 {
    2.0 / (a + 1.0) * ((a - 1.0) / (a + 1.0)).powi(n as i32)
}

/// Random one-mode Gaussian unitary (rotation · squeeze · rotation) embedded
/// on the chosen mode of a two-mode system.
pub fn random_local_symplectic(rng: &mut impl Rng, mode: usize) -> Mat<f64> {
    let r1 = mode_rotation(rng.gen::<f64>() * std::f64::consts::TAU, mode);
    let s = mode_squeeze(0.5 + rng.gen::<f64>(), mode).unwrap();
    let r2 = mode_rotation(rng.gen::<f64>() * std::f64::consts::TAU, mode);
    r1.mat().matmul(s.mat()).matmul(r2.mat())
}

/// Random two-mode Gaussian unitary built from local operations and a
/// two-mode squeezer.
pub fn random_two_mode_symplectic(rng: &mut impl Rng) -> Mat<f64> {
    let local1 = random_local_symplectic(rng, 0);
    let local2 = random_local_symplectic(rng, 1);
    let tms = tms_symplectic(0.7 * rng.gen::<f64>()).unwrap();
    local1.matmul(tms.mat()).matmul(&local2)
}

/// Random one-mode Gaussian unitary as a bare 2×2 map.
pub fn random_one_mode_symplectic(rng: &mut impl Rng) -> Mat<f64> {
    let th1 = rng.gen::<f64>() * std::f64::consts::TAU;
    let th2 = rng.gen::<f64>() * std::f64::consts::TAU;
    let s = 0.5 + rng.gen::<f64>();
    let rot = |t: f64| Mat::from_rows(&[&[t.cos(), t.sin()], &[-t.sin(), t.cos()]]);
    rot(th1)
        .matmul(&Mat::diagonal(&[s, 1.0 / s]))
        .matmul(&rot(th2))
}

/// A battery of normalized non-Gaussian (and one Gaussian) one-mode states.
pub fn one_mode_battery() -> Vec<(&'static str, PGSum<f64>)> {
    let p = 1.0 / (2.0 * 2.0f64.sqrt());
    vec![
        ("fock1", PGSum::from_state(fock_wigner(1).unwrap())),
        ("fock2", PGSum::from_state(fock_wigner(2).unwrap())),
        (
            "counterexample",
            PGSum::from_terms(vec![
                (1.0 - p, fock_wigner(0).unwrap()),
                (p, fock_wigner(2).unwrap()),
            ])
            .unwrap(),
        ),
        (
            "thermal",
            PGSum::from_state(gaussian_wigner(&CovarianceMatrix::isotropic(1, 1.8)).unwrap()),
        ),
        (
            "fock_mix",
            PGSum::from_terms(vec![
                (0.55, fock_wigner(0).unwrap()),
                (0.3, fock_wigner(1).unwrap()),
                (0.15, fock_wigner(3).unwrap()),
            ])
            .unwrap(),
        ),
    ]
}

/// A battery of normalized two-mode test states.
pub fn two_mode_battery() -> Vec<(&'static str, PGSum<f64>)> {
    let vac = gaussian_wigner(&CovarianceMatrix::identity(1)).unwrap();
    let squeezer = tms_symplectic(0.45f64).unwrap();
    let photon_epr = PGSum::from_state(
        fock_wigner(1)
            .unwrap()
            .tensor(&vac)
            .unwrap()
            .linear_substitute(squeezer.mat())
            .unwrap(),
    );
    let noisy = photon_epr
        .gaussian_convolve(
            &CovarianceMatrix::new(Mat::diagonal(&[0.3, 0.3, 0.6, 0.6])).unwrap(),
        )
        .unwrap();
    vec![
        ("photon_epr", photon_epr),
        ("noisy_photon_epr", noisy),
        (
            "path_state",
            PGSum::from_state(cvsep::path_state_wigner(1.0, 1.4).unwrap()),
        ),
        (
            "gaussian_epr",
            PGSum::from_state(
                gaussian_wigner(&cvsep::circuit_covariance(
                    &cvsep::CircuitParams::new(1.0, 0.5, 0.2, 0.1).unwrap(),
                ))
                .unwrap(),
            ),
        ),
    ]
}

/// Wigner function of the two-mode superposition (|n0⟩ + |0n⟩)/√2. Its
/// covariance matrix is diagonal, (n+1)·𝟙, for n ≥ 2.
pub fn noon_wigner(n: usize) -> PGSum<f64> {
    let vac = gaussian_wigner(&CovarianceMatrix::identity(1)).unwrap();
    let fock = fock_wigner::<f64>(n).unwrap();
    let direct1 = fock.tensor(&vac).unwrap();
    let direct2 = vac.tensor(&fock).unwrap();
    // interference term: Re[((x1 - i p1)(x2 + i p2))^n] · 2^n/n! on the
    // two-mode vacuum envelope
    let mut re = Poly::constant(4, 1.0);
    let mut im = Poly::new(4);
    let mut a = Poly::new(4); // x1 x2 + p1 p2
    a.add_term([1, 0, 1, 0], 1.0);
    a.add_term([0, 1, 0, 1], 1.0);
    let mut b = Poly::new(4); // x1 p2 − p1 x2
    b.add_term([1, 0, 0, 1], 1.0);
    b.add_term([0, 1, 1, 0], -1.0);
    for _ in 0..n {
        let new_re = {
            let mut t = re.mul(&a);
            t.add_assign(&im.mul(&b).scaled(-1.0));
            t
        };
        let new_im = {
            let mut t = re.mul(&b);
            t.add_assign(&im.mul(&a));
            t
        };
        re = new_re;
        im = new_im;
    }
    let mut scale = 1.0;
    for k in 1..=n {
        scale *= 2.0 / k as f64;
    }
    let cross_poly = re.scaled(scale);
    let vac2 = gaussian_wigner(&CovarianceMatrix::identity(2)).unwrap();
    let cross = vac2.with_poly(cross_poly).unwrap();
    PGSum::from_terms(vec![(0.5, direct1), (0.5, direct2), (1.0, cross)]).unwrap()
}
