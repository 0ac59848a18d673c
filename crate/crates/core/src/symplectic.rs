//! Covariance-matrix and symplectic algebra for one- and two-mode states.
//!
//! Quadratures are ordered (x₁, p₁, x₂, p₂) and the covariance matrix is
//! normalized so that the vacuum state has γ = 𝟙, i.e. ⟨x²⟩ = 1/2 per
//! quadrature. Under this convention a physical state satisfies ν₋ ≥ 1 and
//! the EPR-variance bound saturates on vacuum at |α| = 1 simultaneously.

use crate::error::{Error, Result};
use crate::mat::{dot, norm, Mat};
use crate::scalar::Real;

/// Relative symmetry tolerance accepted when constructing covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Residual accepted on S Ω Sᵀ − Ω for symplectic matrices.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Absolute slack on ν₋ ≥ 1 when deciding physicality.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Real symmetric matrix of symmetrized second moments, vacuum = identity.
#[derive(Clone, Debug)]
pub struct CovarianceMatrix<T> {
    mat: Mat<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Wrap a symmetric 2N×2N matrix (N = 1 or 2).
    pub fn new(mat: Mat<T>) -> Result<Self> {
        let n = mat.dim();
        if n != 2 && n != 4 {
            return Err(Error::Dimension(format!(
                "covariance matrix must be 2x2 or 4x4, got {n}x{n}"
            )));
        }
        let asym = mat.asymmetry();
        let scale = mat.max_abs().max(T::one());
        if asym > T::of(SYMMETRY_TOL) * scale {
            return Err(Error::NotSymmetric { asymmetry: asym.to_f64() });
        }
        Ok(CovarianceMatrix { mat: mat.symmetrized() })
    }

    pub fn identity(modes: usize) -> Self {
        CovarianceMatrix { mat: Mat::identity(2 * modes) }
    }

    /// c·𝟙 (a thermal-state covariance for c ≥ 1).
    pub fn isotropic(modes: usize, c: T) -> Self {
        CovarianceMatrix { mat: Mat::identity(2 * modes).scale(c) }
    }

    pub fn modes(&self) -> usize {
        self.mat.dim() / 2
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.mat[(i, j)]
    }

    /// Eigenvalues of γ (not symplectic eigenvalues); used for definiteness
    /// checks.
    pub fn min_eigenvalue(&self) -> T {
        self.mat.sym_eigen().0[0]
    }
}

/// Linear phase-space map S with S Ω Sᵀ = Ω.
#[derive(Clone, Debug)]
pub struct SymplecticMatrix<T> {
    mat: Mat<T>,
}

impl<T: Real> SymplecticMatrix<T> {
    pub fn new(mat: Mat<T>) -> Result<Self> {
        let n = mat.dim();
        if n % 2 != 0 || n == 0 || n > 4 {
            return Err(Error::Dimension(format!("symplectic matrix of size {n}x{n}")));
        }
        let om = omega::<T>(n / 2);
        let res = mat.congruence(&om).max_abs_diff(&om);
        if res > T::of(SYMPLECTIC_TOL) * mat.max_abs().max(T::one()) {
            return Err(Error::InvalidParameter(format!(
                "matrix is not symplectic (residual {:.3e})",
                res.to_f64()
            )));
        }
        Ok(SymplecticMatrix { mat })
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Symplectic inverse S⁻¹ = Ω Sᵀ Ωᵀ (exact, no elimination).
    pub fn inverse(&self) -> Self {
        let om = omega::<T>(self.mat.dim() / 2);
        let inv = om.matmul(&self.mat.transpose()).matmul(&om.transpose());
        SymplecticMatrix { mat: inv }
    }

    /// S γ Sᵀ.
    pub fn transform(&self, gamma: &CovarianceMatrix<T>) -> CovarianceMatrix<T> {
        CovarianceMatrix { mat: self.mat.congruence(gamma.mat()).symmetrized() }
    }
}

/// Symplectic form Ω: block-diagonal copies of [[0, 1], [−1, 0]].
pub fn omega<T: Real>(modes: usize) -> Mat<T> {
    let mut m = Mat::zeros(2 * modes);
    for k in 0..modes {
        m[(2 * k, 2 * k + 1)] = T::one();
        m[(2 * k + 1, 2 * k)] = -T::one();
    }
    m
}

/// Mirror reflection Λ = diag(1, 1, 1, −1): partial transposition of mode 2
/// in phase space.
pub fn reflection<T: Real>() -> Mat<T> {
    Mat::diagonal(&[T::one(), T::one(), T::one(), -T::one()])
}

/// Parameters of the state-preparation circuit: a Fock-diagonal input of
/// variance `a` and vacuum are mixed by a two-mode squeezer of parameter
/// `lambda`, then each mode passes through an additive Gaussian noise channel
/// of variance `eta` (mode 1) and `mu` (mode 2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitParams<T> {
    a: T,
    lambda: T,
    eta: T,
    mu: T,
}

impl<T: Real> CircuitParams<T> {
    pub fn new(a: T, lambda: T, eta: T, mu: T) -> Result<Self> {
        if !(a >= T::one()) {
            return Err(Error::InvalidParameter(format!("input variance a = {a} must be >= 1")));
        }
        if !(lambda >= T::zero() && lambda < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "squeezer parameter lambda = {lambda} must lie in [0, 1)"
            )));
        }
        if !(eta >= T::zero()) {
            return Err(Error::InvalidParameter(format!("noise eta = {eta} must be >= 0")));
        }
        if !(mu >= T::zero()) {
            return Err(Error::InvalidParameter(format!("noise mu = {mu} must be >= 0")));
        }
        Ok(CircuitParams { a, lambda, eta, mu })
    }

    pub fn a(&self) -> T {
        self.a
    }
    pub fn lambda(&self) -> T {
        self.lambda
    }
    pub fn eta(&self) -> T {
        self.eta
    }
    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn with_a(&self, a: T) -> Result<Self> {
        Self::new(a, self.lambda, self.eta, self.mu)
    }
    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.a, lambda, self.eta, self.mu)
    }
    pub fn with_eta(&self, eta: T) -> Result<Self> {
        Self::new(self.a, self.lambda, eta, self.mu)
    }
    pub fn with_mu(&self, mu: T) -> Result<Self> {
        Self::new(self.a, self.lambda, self.eta, mu)
    }
}

/// EPR-variance test result: Δ against the separability bound (α² + α⁻²)/2.
#[derive(Clone, Copy, Debug)]
pub struct DuanResult<T> {
    pub delta: T,
    pub bound: T,
    pub alpha: T,
}

/// Covariance matrix of the circuit output state.
///
/// Diagonal blocks ((a+λ²)/(1−λ²) + η)𝟙 and ((aλ²+1)/(1−λ²) + μ)𝟙, with
/// off-diagonal coupling ((a+1)λ/(1−λ²))σ_z.
pub fn circuit_covariance<T: Real>(params: &CircuitParams<T>) -> CovarianceMatrix<T> {
    let (a, l, eta, mu) = (params.a, params.lambda, params.eta, params.mu);
    let one = T::one();
    let denom = one - l * l;
    let d1 = (a + l * l) / denom + eta;
    let d2 = (a * l * l + one) / denom + mu;
    let c = (a + one) * l / denom;
    let mut m = Mat::zeros(4);
    m.set_block(0, 0, &Mat::identity(2).scale(d1));
    m.set_block(2, 2, &Mat::identity(2).scale(d2));
    let sz = Mat::diagonal(&[c, -c]);
    m.set_block(0, 2, &sz);
    m.set_block(2, 0, &sz);
    CovarianceMatrix { mat: m }
}

/// Λ γ Λ: sign-flip of the (p₂, ·) row and column. Involutive.
pub fn partial_transpose<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<CovarianceMatrix<T>> {
    if gamma.dim() != 4 {
        return Err(Error::Dimension("partial transposition needs a two-mode matrix".into()));
    }
    let l = reflection::<T>();
    Ok(CovarianceMatrix { mat: l.congruence(gamma.mat()) })
}

/// γ^{-1/2} for symmetric positive definite γ, via the eigendecomposition.
fn inv_sqrt<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<Mat<T>> {
    let (vals, q) = gamma.mat().sym_eigen();
    let min = vals[0];
    if min <= T::of(1e-13) * vals[vals.len() - 1].max(T::one()) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min.to_f64() });
    }
    let d: Vec<T> = vals.iter().map(|&x| T::one() / x.sqrt()).collect();
    Ok(q.matmul(&Mat::diagonal(&d)).matmul(&q.transpose()))
}

/// Canonical antisymmetric form of γ^{-1/2} Ω γ^{-1/2}: an orthogonal basis of
/// paired rows (v_j, u_j) per mode, with the associated symplectic eigenvalues
/// sorted descending. Shared by the spectrum and the full diagonalization.
fn canonical_pairs<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<(Mat<T>, Vec<T>, Mat<T>)> {
    let gm12 = inv_sqrt(gamma)?;
    let modes = gamma.modes();
    let mp = {
        let m = gm12.matmul(&omega::<T>(modes)).matmul(&gm12);
        m.sub(&m.transpose()).scale(T::of(0.5))
    };
    let b = mp.matmul(&mp.transpose());
    let (_vals, vecs) = b.sym_eigen(); // ascending 1/ν² — largest ν first
    let dim = 2 * modes;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(dim);
    let mut nus: Vec<T> = Vec::with_capacity(modes);
    for _ in 0..modes {
        // next eigenvector not already spanned by the accepted rows
        let mut u = None;
        for c in 0..dim {
            let mut cand: Vec<T> = (0..dim).map(|r| vecs[(r, c)]).collect();
            for row in &rows {
                let proj = dot(&cand, row);
                for (x, &r) in cand.iter_mut().zip(row.iter()) {
                    *x = *x - proj * r;
                }
            }
            let nrm = norm(&cand);
            if nrm > T::of(1e-6) {
                for x in cand.iter_mut() {
                    *x = *x / nrm;
                }
                u = Some(cand);
                break;
            }
        }
        let u = u.ok_or(Error::Convergence {
            context: "symplectic pairing",
            residual: f64::NAN,
        })?;
        let w = mp.matvec(&u);
        let k = norm(&w);
        if !(k > T::zero()) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: 0.0 });
        }
        let v: Vec<T> = w.iter().map(|&x| x / k).collect();
        nus.push(T::one() / k);
        rows.push(v);
        rows.push(u);
    }
    let basis = Mat::from_fn(dim, |i, j| rows[i][j]);
    Ok((basis, nus, gm12))
}

/// Symplectic eigenvalues (ν₊, ν₋) of a symmetric positive-definite 4×4
/// matrix: the moduli of the eigenvalues of iΩγ, each of multiplicity two.
pub fn symplectic_spectrum<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<(T, T)> {
    if gamma.dim() != 4 {
        return Err(Error::Dimension("symplectic spectrum of a two-mode matrix".into()));
    }
    let (_, nus, _) = canonical_pairs(gamma)?;
    Ok((nus[0], nus[1]))
}

/// Symplectic diagonalization: S with S γ Sᵀ = diag(ν₊𝟙, ν₋𝟙) and
/// S Ω Sᵀ = Ω. The ν₊ block always comes first, so mode 2 of the transformed
/// state carries ν₋.
pub fn williamson<T: Real>(
    gamma: &CovarianceMatrix<T>,
) -> Result<(SymplecticMatrix<T>, T, T)> {
    if gamma.dim() != 4 {
        return Err(Error::Dimension("williamson form of a two-mode matrix".into()));
    }
    let (basis, nus, gm12) = canonical_pairs(gamma)?;
    let d12 = Mat::diagonal(&[nus[0].sqrt(), nus[0].sqrt(), nus[1].sqrt(), nus[1].sqrt()]);
    let s = d12.matmul(&basis).matmul(&gm12);
    let target = Mat::diagonal(&[nus[0], nus[0], nus[1], nus[1]]);
    let scale = gamma.mat().max_abs().max(T::one());
    let recon = s.congruence(gamma.mat()).max_abs_diff(&target);
    let om = omega::<T>(2);
    let symp = s.congruence(&om).max_abs_diff(&om);
    let tol = T::of(SYMPLECTIC_TOL) * scale;
    if recon > tol || symp > tol {
        return Err(Error::Convergence {
            context: "williamson diagonalization",
            residual: recon.max(symp).to_f64(),
        });
    }
    Ok((SymplecticMatrix { mat: s }, nus[0], nus[1]))
}

/// ν± of the partially transposed circuit state, evaluated in closed form.
/// Agrees with `symplectic_spectrum(partial_transpose(circuit_covariance(..)))`.
pub fn nu_pm_closed_form<T: Real>(params: &CircuitParams<T>) -> (T, T) {
    let (a, l, eta, mu) = (params.a, params.lambda, params.eta, params.mu);
    let one = T::one();
    let denom = one - l * l;
    let half = T::of(0.5);
    let front = (a + one) * (one + l * l) / denom + eta + mu;
    let d = a - one + eta - mu;
    let coup = T::of(4.0) * (a + one) * (a + one) * l * l / (denom * denom);
    let root = (d * d + coup).sqrt();
    (half * (front + root), half * (front - root))
}

/// Two-mode squeezing symplectic: (1/√(1−λ²)) [[𝟙, λσ_z], [λσ_z, 𝟙]].
pub fn tms_symplectic<T: Real>(lambda: T) -> Result<SymplecticMatrix<T>> {
    if !(lambda.abs() < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "two-mode squeezer parameter |{lambda}| must be < 1"
        )));
    }
    let c = T::one() / (T::one() - lambda * lambda).sqrt();
    let mut m = Mat::identity(4).scale(c);
    let sz = Mat::diagonal(&[c * lambda, -c * lambda]);
    m.set_block(0, 2, &sz);
    m.set_block(2, 0, &sz);
    Ok(SymplecticMatrix { mat: m })
}

/// Balanced beam-splitter symplectic mixing modes 1 and 2 (an orthogonal map).
pub fn balanced_beam_splitter<T: Real>() -> SymplecticMatrix<T> {
    let s = T::one() / T::of(2.0).sqrt();
    let mut m = Mat::zeros(4);
    m[(0, 0)] = s;
    m[(0, 2)] = s;
    m[(1, 1)] = s;
    m[(1, 3)] = s;
    m[(2, 0)] = s;
    m[(2, 2)] = -s;
    m[(3, 1)] = s;
    m[(3, 3)] = -s;
    SymplecticMatrix { mat: m }
}

/// Phase rotation by `theta` on a single mode of a two-mode system.
pub fn mode_rotation<T: Real>(theta: T, mode: usize) -> SymplecticMatrix<T> {
    assert!(mode < 2);
    let (c, s) = (theta.cos(), theta.sin());
    let mut m = Mat::identity(4);
    let o = 2 * mode;
    m[(o, o)] = c;
    m[(o, o + 1)] = s;
    m[(o + 1, o)] = -s;
    m[(o + 1, o + 1)] = c;
    SymplecticMatrix { mat: m }
}

/// Single-mode squeeze diag(s, 1/s) acting on one mode of a two-mode system.
pub fn mode_squeeze<T: Real>(s: T, mode: usize) -> Result<SymplecticMatrix<T>> {
    if !(s > T::zero()) {
        return Err(Error::InvalidParameter(format!("squeeze factor {s} must be > 0")));
    }
    assert!(mode < 2);
    let mut m = Mat::identity(4);
    let o = 2 * mode;
    m[(o, o)] = s;
    m[(o + 1, o + 1)] = T::one() / s;
    Ok(SymplecticMatrix { mat: m })
}

/// Add independent Gaussian noise of variance `eta` to mode 1 and `mu` to
/// mode 2.
pub fn add_noise<T: Real>(
    gamma: &CovarianceMatrix<T>,
    eta: T,
    mu: T,
) -> Result<CovarianceMatrix<T>> {
    if gamma.dim() != 4 {
        return Err(Error::Dimension("add_noise needs a two-mode matrix".into()));
    }
    if !(eta >= T::zero() && mu >= T::zero()) {
        return Err(Error::InvalidParameter("noise variances must be >= 0".into()));
    }
    let noise = Mat::diagonal(&[eta, eta, mu, mu]);
    Ok(CovarianceMatrix { mat: gamma.mat().add(&noise) })
}

/// Whether γ is the covariance matrix of a physical state: ν₋ ≥ 1 within
/// [`PHYSICALITY_TOL`].
pub fn is_physical<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<bool> {
    let (_, nu_minus) = symplectic_spectrum(gamma)?;
    Ok(nu_minus >= T::one() - T::of(PHYSICALITY_TOL))
}

/// EPR variance Δ of û = |α|x̂₁ + x̂₂/α, v̂ = |α|p̂₁ − p̂₂/α, with the
/// separability bound (α² + α⁻²)/2.
pub fn epr_variance<T: Real>(gamma: &CovarianceMatrix<T>, alpha: T) -> Result<DuanResult<T>> {
    if gamma.dim() != 4 {
        return Err(Error::Dimension("EPR variance needs a two-mode matrix".into()));
    }
    if alpha == T::zero() {
        return Err(Error::InvalidParameter("alpha must be nonzero".into()));
    }
    let a2 = alpha * alpha;
    let inv_a2 = T::one() / a2;
    let sign = if alpha > T::zero() { T::one() } else { -T::one() };
    let g = gamma.mat();
    let quarter = T::of(0.25);
    let half = T::of(0.5);
    // <dr_i dr_j> = γ_ij / 2
    let delta = quarter * (a2 * (g[(0, 0)] + g[(1, 1)]) + inv_a2 * (g[(2, 2)] + g[(3, 3)]))
        + half * sign * (g[(0, 2)] - g[(1, 3)]);
    let bound = half * (a2 + inv_a2);
    Ok(DuanResult { delta, bound, alpha })
}

/// Golden-section minimization of a smooth unimodal function on [lo, hi].
fn golden_min<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> T, tol: T) -> (T, T) {
    let phi = (T::of(5.0).sqrt() - T::one()) * T::of(0.5);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (hi - lo).abs() < tol && (fc - fd).abs() < tol {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Whether the EPR-variance criterion detects entanglement: true iff
/// min_α (Δ(α) − bound(α)) < 0, searched over both signs of α with a
/// golden-section scan on log|α| ∈ [−5, 5].
pub fn duan_detects<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<bool> {
    let objective = |alpha: T| -> T {
        let r = epr_variance(gamma, alpha).expect("alpha != 0");
        r.delta - r.bound
    };
    let tol = T::of(1e-10);
    let mut best = T::infinity();
    for sign in [T::one(), -T::one()] {
        let f = |t: T| objective(sign * t.exp());
        let (_, fmin) = golden_min(T::of(-5.0), T::of(5.0), f, tol);
        best = best.min(fmin);
    }
    Ok(best < -T::of(1e-12))
}
