//! Exact phase-space calculus for Wigner functions of the form
//! polynomial × Gaussian, and finite mixtures of such terms.
//!
//! A state with covariance matrix γ has a Gaussian Wigner envelope of
//! covariance γ/2, so the vacuum Wigner function is (1/π)·exp(−x²−p²) and
//! `(2π)^N ∫ W₁W₂` equals Tr[ρ₁ρ₂] exactly. All operations used by the
//! entanglement analysis (symplectic substitution, reflection, Gaussian
//! convolution, marginalization, overlaps, moments) stay inside this family
//! and are evaluated in closed form through Wick pairings — no quadrature on
//! the main path.
//!
//! All states handled here are centered; first moments are irrelevant for the
//! separability analysis and every constructor produces a zero-mean state.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::poly::{Exps, GaussianMoments, Poly};
use crate::scalar::{binomial, factorial, Real};
use crate::symplectic::{balanced_beam_splitter, CovarianceMatrix};

/// Cap on the total polynomial degree of a single term (2·n_max + 4 with the
/// default Fock truncation n_max = 30). Operations that would exceed it fail
/// rather than truncate.
pub const MAX_TOTAL_DEGREE: usize = 64;

/// Wigner function W(r) = P(r) · N(r; 0, Σ) with N a normalized centered
/// Gaussian density.
#[derive(Clone, Debug)]
pub struct PolyGaussian<T> {
    modes: usize,
    sigma: Mat<T>,
    poly: Poly<T>,
}

impl<T: Real> PolyGaussian<T> {
    fn check_degree(poly: &Poly<T>) -> Result<()> {
        let d = poly.degree();
        if d > MAX_TOTAL_DEGREE {
            return Err(Error::DegreeCap { degree: d, cap: MAX_TOTAL_DEGREE });
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Envelope covariance (the state covariance is twice this).
    pub fn sigma(&self) -> &Mat<T> {
        &self.sigma
    }

    pub fn poly(&self) -> &Poly<T> {
        &self.poly
    }

    /// Phase-space integral ∫ W.
    pub fn integral(&self) -> T {
        GaussianMoments::new(&self.sigma).expect(&self.poly)
    }

    /// ∫ r^exponents · W(r) dr in closed form.
    pub fn moment(&self, exponents: Exps) -> T {
        let p = self.poly.mul_monomial(exponents);
        GaussianMoments::new(&self.sigma).expect(&p)
    }

    /// Covariance matrix extracted from second moments (state must be
    /// normalized for this to be meaningful).
    pub fn covariance(&self) -> Result<CovarianceMatrix<T>> {
        let d = 2 * self.modes;
        let two = T::of(2.0);
        let mut m = Mat::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut e = [0u8; 4];
                e[i] += 1;
                e[j] += 1;
                let v = two * self.moment(e);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        CovarianceMatrix::new(m)
    }

    /// Same Gaussian envelope with a different polynomial factor; the
    /// escape hatch for states assembled from known expansions.
    pub fn with_poly(&self, poly: Poly<T>) -> Result<Self> {
        if poly.nvars() != 2 * self.modes {
            return Err(Error::Dimension("polynomial variable count mismatch".into()));
        }
        Self::check_degree(&poly)?;
        Ok(PolyGaussian { modes: self.modes, sigma: self.sigma.clone(), poly })
    }

    /// Pointwise value W(r); used by the quadrature cross-checks.
    pub fn eval(&self, r: &[T]) -> T {
        let d = 2 * self.modes;
        debug_assert_eq!(r.len(), d);
        let inv = self.sigma.inverse().expect("positive definite envelope");
        let mut q = T::zero();
        for i in 0..d {
            for j in 0..d {
                q += r[i] * inv[(i, j)] * r[j];
            }
        }
        let norm = self.gaussian_height();
        self.poly.eval(r) * norm * (-q * T::of(0.5)).exp()
    }

    /// Normalization constant of the Gaussian envelope, N(0; 0, Σ).
    pub fn gaussian_height(&self) -> T {
        let det = self.sigma.det();
        let two_pi = T::of(2.0) * T::PI();
        T::one() / (two_pi.powi(self.modes as i32) * det.sqrt())
    }

    /// Product state on the joint phase space, modes concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let modes = self.modes + other.modes;
        if modes > 2 {
            return Err(Error::Dimension("at most two modes are supported".into()));
        }
        let d1 = 2 * self.modes;
        let d = 2 * modes;
        let mut sigma = Mat::zeros(d);
        sigma.set_block(0, 0, &self.sigma);
        sigma.set_block(d1, d1, &other.sigma);
        let mut poly = Poly::new(d);
        for (ea, &ca) in self.poly.terms() {
            for (eb, &cb) in other.poly.terms() {
                let mut e = [0u8; 4];
                e[..d1].copy_from_slice(&ea[..d1]);
                for k in 0..(d - d1) {
                    e[d1 + k] = eb[k];
                }
                poly.add_term(e, ca * cb);
            }
        }
        Self::check_degree(&poly)?;
        Ok(PolyGaussian { modes, sigma, poly })
    }

    /// Push-forward along an invertible phase-space map: returns W ∘ M⁻¹
    /// with the Jacobian factor, so normalization is preserved exactly.
    pub fn linear_substitute(&self, m: &Mat<T>) -> Result<Self> {
        let d = 2 * self.modes;
        if m.dim() != d {
            return Err(Error::Dimension(format!(
                "map is {}x{}, state has {} phase-space coordinates",
                m.dim(),
                m.dim(),
                d
            )));
        }
        let minv = m.inverse().ok_or(Error::Singular("linear_substitute"))?;
        let sigma = m.congruence(&self.sigma).symmetrized();
        let forms: Vec<Vec<T>> = (0..d).map(|i| minv.row(i).to_vec()).collect();
        let poly = self.poly.substitute(&forms, d);
        Ok(PolyGaussian { modes: self.modes, sigma, poly })
    }

    /// Convolution with a centered Gaussian of state covariance `noise`
    /// (envelope covariance noise/2); the extracted covariance matrix grows
    /// by exactly `noise`.
    pub fn gaussian_convolve(&self, noise: &CovarianceMatrix<T>) -> Result<Self> {
        let d = 2 * self.modes;
        if noise.dim() != d {
            return Err(Error::Dimension("noise dimension mismatch".into()));
        }
        let min = noise.min_eigenvalue();
        if min < -T::of(1e-12) * noise.mat().max_abs().max(T::one()) {
            return Err(Error::InvalidParameter(format!(
                "noise covariance is indefinite (eigenvalue {:.3e})",
                min.to_f64()
            )));
        }
        if noise.mat().max_abs() == T::zero() {
            return Ok(self.clone());
        }
        let t = noise.mat().scale(T::of(0.5));
        let sum = self.sigma.add(&t);
        let sum_inv = sum.inverse().ok_or(Error::Singular("gaussian_convolve"))?;
        let a = self.sigma.matmul(&sum_inv);
        let post = self.sigma.sub(&a.matmul(&self.sigma)).symmetrized();
        let heated = self.poly.heat(&post);
        let forms: Vec<Vec<T>> = (0..d).map(|i| a.row(i).to_vec()).collect();
        let poly = heated.substitute(&forms, d);
        Ok(PolyGaussian { modes: self.modes, sigma: sum.symmetrized(), poly })
    }

    /// Integrate out one mode (0-based index) of a two-mode state.
    pub fn marginalize(&self, mode: usize) -> Result<Self> {
        if self.modes != 2 {
            return Err(Error::Dimension("marginalize needs a two-mode state".into()));
        }
        if mode > 1 {
            return Err(Error::InvalidParameter(format!("mode index {mode} out of range")));
        }
        let dropped = [2 * mode, 2 * mode + 1];
        let kept = [2 * (1 - mode), 2 * (1 - mode) + 1];
        let skk = Mat::from_fn(2, |i, j| self.sigma[(kept[i], kept[j])]);
        let sdk = Mat::from_fn(2, |i, j| self.sigma[(dropped[i], kept[j])]);
        let sdd = Mat::from_fn(2, |i, j| self.sigma[(dropped[i], dropped[j])]);
        let skk_inv = skk.inverse().ok_or(Error::Singular("marginalize"))?;
        let b = sdk.matmul(&skk_inv);
        let cond = sdd.sub(&b.matmul(&sdk.transpose())).symmetrized();
        // conditional spread enters on the dropped coordinates only
        let mut heat_c = Mat::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                heat_c[(dropped[i], dropped[j])] = cond[(i, j)];
            }
        }
        let heated = self.poly.heat(&heat_c);
        let mut forms = vec![vec![T::zero(); 2]; 4];
        for i in 0..2 {
            forms[kept[i]][i] = T::one();
            forms[dropped[i]] = b.row(i).to_vec();
        }
        let poly = heated.substitute(&forms, 2);
        Ok(PolyGaussian { modes: 1, sigma: skk, poly })
    }

    /// (2π)^N ∫ W₁ W₂ = Tr[ρ₁ρ₂], via Wick expansion against the combined
    /// Gaussian.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.modes != other.modes {
            return Err(Error::Dimension("overlap of states with different mode counts".into()));
        }
        let sum = self.sigma.add(&other.sigma);
        let det = sum.det();
        if !(det > T::zero()) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: det.to_f64() });
        }
        let sum_inv = sum.inverse().ok_or(Error::Singular("overlap"))?;
        let combined = self
            .sigma
            .matmul(&sum_inv)
            .matmul(&other.sigma)
            .symmetrized();
        let prod = self.poly.mul(&other.poly);
        let e = GaussianMoments::new(&combined).expect(&prod);
        Ok(e / det.sqrt())
    }

    /// Phase-averaged radial moment ∫ W(x, p) (x²+p²)^{k/2} dx dp for odd k,
    /// in closed form. Requires a one-mode state with an isotropic Gaussian
    /// envelope (all states this estimator targets have one).
    pub fn radial_moment(&self, k: usize) -> Result<T> {
        if self.modes != 1 {
            return Err(Error::Dimension("radial moments of a one-mode state".into()));
        }
        if k % 2 == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "radial moment defined for odd k >= 1, got {k}"
            )));
        }
        let s2 = self.sigma[(0, 0)];
        let iso = (self.sigma[(0, 0)] - self.sigma[(1, 1)])
            .abs()
            .max(self.sigma[(0, 1)].abs());
        if iso > T::of(1e-10) * s2.max(T::one()) {
            return Err(Error::Anisotropic { deviation: iso.to_f64() });
        }
        let two_pi = T::of(2.0) * T::PI();
        let mut acc = T::zero();
        for (e, &c) in self.poly.terms() {
            let (a, b) = (e[0] as usize, e[1] as usize);
            if a % 2 == 1 || b % 2 == 1 {
                continue;
            }
            // angular: 2 Γ((a+1)/2) Γ((b+1)/2) / Γ((a+b)/2 + 1)
            let ang = T::of(2.0) * gamma_half(a + 1) * gamma_half(b + 1)
                / gamma_half(a + b + 2);
            // radial: ∫ r^m exp(−r²/(2σ²)) dr with m = a + b + k + 1
            let m = a + b + k + 1;
            let rad = T::of(0.5)
                * (T::of(2.0) * s2).powf(T::of_usize(m + 1) / T::of(2.0))
                * gamma_half(m + 1);
            acc += c * ang * rad;
        }
        Ok(acc / (two_pi * s2))
    }
}

/// Γ(n/2) for positive integer n.
fn gamma_half<T: Real>(n: usize) -> T {
    assert!(n >= 1);
    if n % 2 == 0 {
        factorial(n / 2 - 1)
    } else {
        // Γ(1/2 + k) = (2k)! √π / (4^k k!)
        let k = n / 2;
        let mut acc = T::PI().sqrt();
        for i in 0..k {
            acc = acc * (T::of(0.5) + T::of_usize(i));
        }
        acc
    }
}

/// Gaussian state with covariance matrix γ: envelope γ/2, unit polynomial.
/// Accepts any positive-definite γ, physical or not.
pub fn gaussian_wigner<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<PolyGaussian<T>> {
    let min = gamma.min_eigenvalue();
    if !(min > T::zero()) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min.to_f64() });
    }
    let modes = gamma.modes();
    Ok(PolyGaussian {
        modes,
        sigma: gamma.mat().scale(T::of(0.5)),
        poly: Poly::constant(2 * modes, T::one()),
    })
}

/// Wigner function of the n-photon Fock state:
/// W_n(x, p) = ((−1)ⁿ/π) L_n(2(x²+p²)) exp(−(x²+p²)),
/// stored as a degree-2n polynomial on the vacuum envelope. Its covariance
/// matrix is (2n+1)𝟙.
pub fn fock_wigner<T: Real>(n: usize) -> Result<PolyGaussian<T>> {
    if 2 * n > MAX_TOTAL_DEGREE {
        return Err(Error::DegreeCap { degree: 2 * n, cap: MAX_TOTAL_DEGREE });
    }
    let sign = if n % 2 == 0 { T::one() } else { -T::one() };
    let mut poly = Poly::new(2);
    for k in 0..=n {
        // Laguerre: L_n(y) = Σ_k C(n,k) (−1)^k y^k / k!, here y = 2(x²+p²)
        let lag_sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let ck = sign * lag_sign * binomial::<T>(n, k) * T::of(2.0).powi(k as i32)
            / factorial::<T>(k);
        for j in 0..=k {
            let c = ck * binomial::<T>(k, j);
            poly.add_term([(2 * j) as u8, (2 * (k - j)) as u8, 0, 0], c);
        }
    }
    Ok(PolyGaussian { modes: 1, sigma: Mat::identity(2).scale(T::of(0.5)), poly })
}

/// Two-mode Wigner function of the pure state produced by squeezing a single
/// photon (factor `s_plus`) and the vacuum (factor `s_minus`) and mixing them
/// on a balanced beam splitter.
pub fn path_state_wigner<T: Real>(s_plus: T, s_minus: T) -> Result<PolyGaussian<T>> {
    if !(s_plus > T::zero() && s_minus > T::zero()) {
        return Err(Error::InvalidParameter(
            "squeezing factors must be strictly positive".into(),
        ));
    }
    let photon = fock_wigner::<T>(1)?
        .linear_substitute(&Mat::diagonal(&[s_plus, T::one() / s_plus]))?;
    let vac = gaussian_wigner(&CovarianceMatrix::new(Mat::diagonal(&[
        s_minus * s_minus,
        T::one() / (s_minus * s_minus),
    ]))?)?;
    let rotated = photon.tensor(&vac)?;
    // the beam splitter maps lab coordinates onto the squeezed-mode pair
    let bs = balanced_beam_splitter::<T>();
    rotated.linear_substitute(&bs.mat().transpose())
}

/// Finite mixture of polynomial-Gaussian terms.
#[derive(Clone, Debug)]
pub struct PGSum<T> {
    modes: usize,
    terms: Vec<(T, PolyGaussian<T>)>,
}

impl<T: Real> PGSum<T> {
    pub fn from_state(w: PolyGaussian<T>) -> Self {
        PGSum { modes: w.modes(), terms: vec![(T::one(), w)] }
    }

    pub fn from_terms(terms: Vec<(T, PolyGaussian<T>)>) -> Result<Self> {
        let modes = terms
            .first()
            .map(|(_, w)| w.modes())
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        if terms.iter().any(|(_, w)| w.modes() != modes) {
            return Err(Error::Dimension("mixture terms with different mode counts".into()));
        }
        Ok(PGSum { modes, terms })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> &[(T, PolyGaussian<T>)] {
        &self.terms
    }

    pub fn integral(&self) -> T {
        self.terms.iter().map(|(w, pg)| *w * pg.integral()).sum()
    }

    pub fn moment(&self, exponents: Exps) -> T {
        self.terms.iter().map(|(w, pg)| *w * pg.moment(exponents)).sum()
    }

    pub fn covariance(&self) -> Result<CovarianceMatrix<T>> {
        let d = 2 * self.modes;
        let two = T::of(2.0);
        let mut m = Mat::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut e = [0u8; 4];
                e[i] += 1;
                e[j] += 1;
                let v = two * self.moment(e);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        CovarianceMatrix::new(m)
    }

    pub fn tensor(&self, other: &PolyGaussian<T>) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(w, pg)| Ok((*w, pg.tensor(other)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(terms)
    }

    pub fn linear_substitute(&self, m: &Mat<T>) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(w, pg)| Ok((*w, pg.linear_substitute(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(terms)
    }

    pub fn gaussian_convolve(&self, noise: &CovarianceMatrix<T>) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(w, pg)| Ok((*w, pg.gaussian_convolve(noise)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(terms)
    }

    pub fn marginalize(&self, mode: usize) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(w, pg)| Ok((*w, pg.marginalize(mode)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(terms)
    }

    /// (2π)^N ∫ W₁W₂, bilinear in the mixture weights.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.modes != other.modes {
            return Err(Error::Dimension("overlap of states with different mode counts".into()));
        }
        let mut acc = T::zero();
        for (wa, pa) in &self.terms {
            for (wb, pb) in &other.terms {
                acc += *wa * *wb * pa.overlap(pb)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, r: &[T]) -> T {
        self.terms.iter().map(|(w, pg)| *w * pg.eval(r)).sum()
    }
}
