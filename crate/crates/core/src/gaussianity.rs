//! Degree of Gaussianity and the Gaussianity-bounded detection threshold.
//!
//! The degree of Gaussianity of a state ρ with covariance matrix γ is
//! g = Tr[ρ ρ^G] / Tr[ρ^G ρ^G], where ρ^G is the Gaussian state with the same
//! covariance matrix. Gaussian states have g = 1, but so do some non-Gaussian
//! mixtures; the threshold curve ν_th(g) bounds the smallest symplectic
//! eigenvalue any physical single-mode state of Gaussianity g can have, which
//! is what sharpens the plain ν₋ ≥ 1 physicality test into a stronger
//! entanglement criterion.
//!
//! Three independent routes to g₂ are provided: the exact phase-space overlap
//! through the analyzing pipeline, an all-Gaussian dual-circuit evaluation
//! specialized to circuit-generated states, and a grid-quadrature variant used
//! for cross-checks.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::poly::Poly;
use crate::scalar::{factorial, Real};
use crate::symplectic::{
    circuit_covariance, partial_transpose, reflection, tms_symplectic, williamson,
    CircuitParams, CovarianceMatrix,
};
use crate::wigner::{gaussian_wigner, PGSum, PolyGaussian};

/// How a degree-of-Gaussianity value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussianityMethod {
    WignerOverlap,
    DualCircuit,
    Quadrature,
    RadialSeries,
}

impl GaussianityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            GaussianityMethod::WignerOverlap => "wigner_overlap",
            GaussianityMethod::DualCircuit => "dual_circuit",
            GaussianityMethod::Quadrature => "quadrature",
            GaussianityMethod::RadialSeries => "radial_series",
        }
    }
}

impl std::str::FromStr for GaussianityMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wigner_overlap" | "overlap" => Ok(GaussianityMethod::WignerOverlap),
            "dual_circuit" | "dual" => Ok(GaussianityMethod::DualCircuit),
            "quadrature" => Ok(GaussianityMethod::Quadrature),
            "radial_series" | "radial" => Ok(GaussianityMethod::RadialSeries),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

/// Convergence metadata attached to a computed g value.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics<T> {
    pub terms_used: Option<usize>,
    pub last_term: Option<T>,
    pub residual: Option<T>,
    pub isotropy_deviation: Option<T>,
    pub grid_disagreement: Option<T>,
}

#[derive(Clone, Debug)]
pub struct GaussianityResult<T> {
    pub g: T,
    pub method: GaussianityMethod,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Real> GaussianityResult<T> {
    fn plain(g: T, method: GaussianityMethod) -> Self {
        GaussianityResult { g, method, diagnostics: Diagnostics::default() }
    }
}

/// Truncated weight sequence φ_n of a Fock-diagonal single-mode state.
#[derive(Clone, Debug)]
pub struct FockDiagonalSpec<T> {
    weights: Vec<T>,
}

impl<T: Real> FockDiagonalSpec<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty weight sequence".into()));
        }
        if weights.iter().any(|&w| w < T::zero()) {
            return Err(Error::InvalidParameter("negative Fock weight".into()));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::of(1e-10) {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, expected 1 within 1e-10"
            )));
        }
        Ok(FockDiagonalSpec { weights })
    }

    pub fn vacuum() -> Self {
        FockDiagonalSpec { weights: vec![T::one()] }
    }

    pub fn pure_fock(n: usize) -> Self {
        let mut weights = vec![T::zero(); n + 1];
        weights[n] = T::one();
        FockDiagonalSpec { weights }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn max_n(&self) -> usize {
        self.weights.len() - 1
    }

    /// a = Σ φ_n (2n + 1).
    pub fn variance(&self) -> T {
        self.weights
            .iter()
            .enumerate()
            .map(|(n, &w)| w * T::of_usize(2 * n + 1))
            .sum()
    }

    /// 1 − Σ φ_n: mass lost to truncation.
    pub fn tail_deficit(&self) -> T {
        T::one() - self.weights.iter().copied().sum()
    }

    /// Mixture of Fock Wigner functions with these weights.
    pub fn wigner(&self) -> Result<PGSum<T>> {
        let terms = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != T::zero())
            .map(|(n, &w)| Ok((w, crate::wigner::fock_wigner::<T>(n)?)))
            .collect::<Result<Vec<_>>>()?;
        PGSum::from_terms(terms)
    }
}

/// Gaussian state with the same (zero) mean and covariance matrix as `w`.
pub fn gaussian_associate<T: Real>(w: &PGSum<T>) -> Result<PolyGaussian<T>> {
    let norm = w.integral();
    let dev = (norm - T::one()).abs();
    if dev > T::of(1e-8) {
        return Err(Error::Unnormalized { deviation: dev.to_f64() });
    }
    gaussian_wigner(&w.covariance()?)
}

/// g = Tr[ρ ρ^G] / Tr[ρ^G ρ^G] via exact phase-space overlaps.
pub fn degree_of_gaussianity<T: Real>(w: &PGSum<T>) -> Result<GaussianityResult<T>> {
    let assoc = PGSum::from_state(gaussian_associate(w)?);
    let num = w.overlap(&assoc)?;
    let den = assoc.overlap(&assoc)?;
    Ok(GaussianityResult::plain(num / den, GaussianityMethod::WignerOverlap))
}

/// Closed form for Fock-diagonal single-mode states:
/// g = a · (2/(a+1)) Σ_n φ_n ((a−1)/(a+1))ⁿ with a = Σ φ_n (2n+1).
pub fn gaussianity_fock_diagonal<T: Real>(spec: &FockDiagonalSpec<T>) -> T {
    let a = spec.variance();
    let q = (a - T::one()) / (a + T::one());
    let mut qn = T::one();
    let mut acc = T::zero();
    for &w in spec.weights() {
        acc += w * qn;
        qn = qn * q;
    }
    a * (T::of(2.0) / (a + T::one())) * acc
}

/// Residual of the g = 1 root condition for the binary mixture
/// p·|n⟩⟨n| + (1−p)·|0⟩⟨0|: (1+2np)(np)ⁿ − (1+2np−n)(1+np)ⁿ.
/// Each root with p in (0, 1) yields a non-Gaussian state with g = 1.
pub fn counterexample_root_residual<T: Real>(n: usize, p: T) -> T {
    debug_assert!(n >= 1);
    let np = T::of_usize(n) * p;
    let lead = T::one() + T::of(2.0) * np;
    lead * np.powi(n as i32)
        - (lead - T::of_usize(n)) * (T::one() + np).powi(n as i32)
}

/// All roots of the residual in the open interval (0, 1), located by a dense
/// sign scan followed by bisection. For n = 1 the residual is −p, so there
/// are none.
pub fn counterexample_roots<T: Real>(n: usize) -> Vec<T> {
    let grid = 4096usize;
    let eps = T::of(1e-9);
    let lo_all = eps;
    let hi_all = T::one() - eps;
    let step = (hi_all - lo_all) / T::of_usize(grid);
    let mut roots = Vec::new();
    let mut prev_p = lo_all;
    let mut prev_v = counterexample_root_residual(n, prev_p);
    for i in 1..=grid {
        let p = lo_all + step * T::of_usize(i);
        let v = counterexample_root_residual(n, p);
        if prev_v == T::zero() {
            roots.push(prev_p);
        } else if prev_v * v < T::zero() {
            let (mut a, mut b) = (prev_p, p);
            let mut fa = prev_v;
            for _ in 0..200 {
                let m = (a + b) * T::of(0.5);
                let fm = counterexample_root_residual(n, m);
                if fm == T::zero() || (b - a) < T::of(1e-15) {
                    a = m;
                    break;
                }
                if fa * fm < T::zero() {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push((a + b) * T::of(0.5));
        }
        prev_p = p;
        prev_v = v;
    }
    roots
}

/// One sampled point of the threshold curve.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdPoint<T> {
    pub g: T,
    pub nu_th: T,
    /// (segment index n, mixing parameter r) of the binary Fock mixture
    /// realizing the bound; absent on the g ≥ 1 branch where the parametric
    /// family does not apply.
    pub segment: Option<(u32, T)>,
    /// Number of parametric solutions found across segments (the bound is
    /// their minimum; more than one signals overlapping segments).
    pub candidates: usize,
}

/// Parametric segment value: for segment n and r ∈ [0, 1),
/// ν = 2n + 3 − 2r and g = [2ν(ν−1)ⁿ/(ν+1)ⁿ⁺¹]·[(ν−1)(1−r)/(ν+1) + r].
pub fn threshold_segment_g<T: Real>(n: u32, r: T) -> T {
    let nu = T::of_usize(2 * n as usize + 3) - T::of(2.0) * r;
    let one = T::one();
    let lead = T::of(2.0) * nu * (nu - one).powi(n as i32) / (nu + one).powi(n as i32 + 1);
    lead * ((nu - one) * (one - r) / (nu + one) + r)
}

const SEGMENT_SCAN_MAX: u32 = 50;

/// All parametric solutions (n, r, ν) with threshold_segment_g(n, r) = g,
/// scanned over segments n = 0..=50.
fn threshold_candidates<T: Real>(g: T) -> Vec<(u32, T, T)> {
    let mut out = Vec::new();
    let grid = 512usize;
    for n in 0..=SEGMENT_SCAN_MAX {
        let step = T::one() / T::of_usize(grid);
        let mut prev_r = T::zero();
        let mut prev_v = threshold_segment_g(n, prev_r) - g;
        for i in 1..=grid {
            let r = if i == grid {
                T::one() - T::of(1e-12)
            } else {
                step * T::of_usize(i)
            };
            let v = threshold_segment_g(n, r) - g;
            if prev_v == T::zero() || prev_v * v < T::zero() {
                let (mut a, mut b) = (prev_r, r);
                let mut fa = prev_v;
                for _ in 0..100 {
                    let m = (a + b) * T::of(0.5);
                    let fm = threshold_segment_g(n, m) - g;
                    if fm == T::zero() {
                        a = m;
                        b = m;
                        break;
                    }
                    if fa * fm < T::zero() {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                let root = (a + b) * T::of(0.5);
                let nu = T::of_usize(2 * n as usize + 3) - T::of(2.0) * root;
                out.push((n, root, nu));
            }
            prev_r = r;
            prev_v = v;
        }
    }
    out
}

/// Threshold on ν₋ for a single-mode state of Gaussianity g: physical states
/// satisfy ν₋ ≥ ν_th(g).
///
/// For g ≥ 1 the curve is g/(2−g); on 3/4 ≤ g < 1 it is the closed form
/// (2 − g + 2√(1−g))/g of the first parametric segment; below 3/4 the
/// parametric family is inverted segment by segment and the minimum ν over
/// all solutions is returned.
pub fn nu_threshold<T: Real>(g: T) -> Result<T> {
    Ok(threshold_point(g)?.nu_th)
}

/// As [`nu_threshold`], with the realizing segment attached.
pub fn threshold_point<T: Real>(g: T) -> Result<ThresholdPoint<T>> {
    if !(g > T::zero()) {
        return Err(Error::InvalidParameter(format!("gaussianity g = {g} must be > 0")));
    }
    if g >= T::of(2.0) {
        return Err(Error::InvalidParameter(format!(
            "gaussianity g = {g} out of range: the threshold diverges as g -> 2"
        )));
    }
    let one = T::one();
    if g >= one {
        let nu = g / (T::of(2.0) - g);
        return Ok(ThresholdPoint { g, nu_th: nu, segment: None, candidates: 0 });
    }
    if g >= T::of(0.75) {
        let nu = (T::of(2.0) - g + T::of(2.0) * (one - g).sqrt()) / g;
        let r = (T::of(3.0) - nu) * T::of(0.5);
        return Ok(ThresholdPoint { g, nu_th: nu, segment: Some((0, r)), candidates: 1 });
    }
    let cands = threshold_candidates(g);
    let best = cands
        .iter()
        .copied()
        .min_by(|a, b| a.2.partial_cmp(&b.2).expect("finite nu"))
        .ok_or(Error::ThresholdUnattainable { g: g.to_f64() })?;
    Ok(ThresholdPoint {
        g,
        nu_th: best.2,
        segment: Some((best.0, best.1)),
        candidates: cands.len(),
    })
}

/// Sampled threshold curve over [g_min, g_max], inclusive.
pub fn threshold_curve<T: Real>(
    g_min: T,
    g_max: T,
    steps: usize,
) -> Result<Vec<ThresholdPoint<T>>> {
    if !(g_min > T::zero() && g_min < g_max && g_max < T::of(2.0)) {
        return Err(Error::InvalidParameter(format!(
            "curve range ({g_min}, {g_max}) must satisfy 0 < g_min < g_max < 2"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let h = (g_max - g_min) / T::of_usize(steps - 1);
    (0..steps)
        .map(|i| threshold_point(g_min + h * T::of_usize(i)))
        .collect()
}

/// Output of the entanglement analyzing pipeline applied to a two-mode state:
/// reflect mode 2, rotate into the symplectic eigenbasis of the reflected
/// covariance matrix (ν₊ mode first), trace out mode 1, and score the
/// Gaussianity of what remains.
#[derive(Clone, Debug)]
pub struct BoxAnalysis<T> {
    pub nu_plus: T,
    pub nu_minus: T,
    pub sigma2: PGSum<T>,
    pub g2: GaussianityResult<T>,
}

/// Full phase-space route: g₂ = ν₋ · (2π)∫ W̃₂ W^G_{ν₋}, using
/// Tr[σ₂^G σ₂^G] = 1/ν₋ for the denominator.
pub fn analyzing_box_wigner<T: Real>(w: &PGSum<T>) -> Result<BoxAnalysis<T>> {
    analyzing_box_impl(w, false)
}

/// Same pipeline with the final overlap evaluated by grid quadrature on
/// [−8, 8]²; two refinements must agree within 1e−6. Cross-check route.
pub fn g2_quadrature<T: Real>(w: &PGSum<T>) -> Result<GaussianityResult<T>> {
    Ok(analyzing_box_impl(w, true)?.g2)
}

fn analyzing_box_impl<T: Real>(w: &PGSum<T>, quadrature: bool) -> Result<BoxAnalysis<T>> {
    if w.modes() != 2 {
        return Err(Error::Dimension("analyzing box needs a two-mode state".into()));
    }
    let norm_dev = (w.integral() - T::one()).abs();
    if norm_dev > T::of(1e-8) {
        return Err(Error::Unnormalized { deviation: norm_dev.to_f64() });
    }
    let gamma = w.covariance()?;
    let gamma_pt = partial_transpose(&gamma)?;
    let (s, nu_plus, nu_minus) = williamson(&gamma_pt)?;
    let reflected = w.linear_substitute(&reflection())?;
    let rotated = reflected.linear_substitute(s.mat())?;
    let sigma2 = rotated.marginalize(0)?;
    let target = gaussian_wigner(&CovarianceMatrix::isotropic(1, nu_minus))?;
    let g2 = if quadrature {
        let coarse = overlap_on_grid(&sigma2, &target, 201);
        let fine = overlap_on_grid(&sigma2, &target, 401);
        let dis = (coarse - fine).abs();
        if dis > T::of(1e-6) {
            return Err(Error::GridResolution { disagreement: dis.to_f64() });
        }
        let mut diag = Diagnostics::default();
        diag.grid_disagreement = Some(dis);
        GaussianityResult {
            g: nu_minus * fine,
            method: GaussianityMethod::Quadrature,
            diagnostics: diag,
        }
    } else {
        let num = sigma2.overlap(&PGSum::from_state(target))?;
        GaussianityResult::plain(nu_minus * num, GaussianityMethod::WignerOverlap)
    };
    Ok(BoxAnalysis { nu_plus, nu_minus, sigma2, g2 })
}

/// 2π ∬ W_sum · W_target over [−8, 8]² by the trapezoid rule with `n` points
/// per axis.
fn overlap_on_grid<T: Real>(sum: &PGSum<T>, target: &PolyGaussian<T>, n: usize) -> T {
    let extent = T::of(8.0);
    let h = (extent + extent) / T::of_usize(n - 1);
    let xs: Vec<T> = (0..n).map(|i| -extent + h * T::of_usize(i)).collect();
    let max_deg = sum
        .terms()
        .iter()
        .map(|(_, pg)| pg.poly().degree())
        .max()
        .unwrap_or(0);
    let mut powers = vec![vec![T::one(); n]; max_deg + 1];
    for d in 1..=max_deg {
        for i in 0..n {
            powers[d][i] = powers[d - 1][i] * xs[i];
        }
    }
    let mut field = vec![T::zero(); n * n];
    for (wk, pg) in sum.terms() {
        // contract the polynomial against the grid one axis at a time
        let deg = pg.poly().degree();
        let mut rows = vec![vec![T::zero(); n]; deg + 1];
        for (e, &c) in pg.poly().terms() {
            let (a, b) = (e[0] as usize, e[1] as usize);
            for j in 0..n {
                rows[a][j] += c * powers[b][j];
            }
        }
        let inv = pg.sigma().inverse().expect("positive definite envelope");
        let height = pg.gaussian_height();
        let half = T::of(0.5);
        for i in 0..n {
            let xi = xs[i];
            let mut poly_row = vec![T::zero(); n];
            for (a, row) in rows.iter().enumerate() {
                let pa = powers[a][i];
                if row.iter().all(|&v| v == T::zero()) {
                    continue;
                }
                for j in 0..n {
                    poly_row[j] += pa * row[j];
                }
            }
            for j in 0..n {
                let pj = xs[j];
                let q = inv[(0, 0)] * xi * xi
                    + T::of(2.0) * inv[(0, 1)] * xi * pj
                    + inv[(1, 1)] * pj * pj;
                field[i * n + j] += *wk * poly_row[j] * height * (-half * q).exp();
            }
        }
    }
    let mut acc = T::zero();
    for i in 0..n {
        let wi = if i == 0 || i == n - 1 { T::of(0.5) } else { T::one() };
        for j in 0..n {
            let wj = if j == 0 || j == n - 1 { T::of(0.5) } else { T::one() };
            acc += wi * wj * field[i * n + j] * target.eval(&[xs[i], xs[j]]);
        }
    }
    T::of(2.0) * T::PI() * acc * h * h
}

/// Grid of auxiliary variances used for the dual-circuit limit.
const DUAL_V_GRID: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];

/// All-Gaussian evaluation of g₂ for a circuit-generated state.
///
/// The trace against the reduced mode is rewritten as a trace against the
/// input state after pulling the whole analysis circuit through to the other
/// side: the identity on mode 1 is approached by (V+1)/2 times a thermal
/// state of variance V, the resulting Gaussian covariance is propagated
/// backwards through the adjoint circuit, and the limit V → ∞ is taken by
/// polynomial extrapolation in 1/V over V = 10²…10⁶.
pub fn g2_dual_circuit<T: Real>(
    spec: &FockDiagonalSpec<T>,
    params: &CircuitParams<T>,
) -> Result<GaussianityResult<T>> {
    let a_spec = spec.variance();
    if (a_spec - params.a()).abs() > T::of(1e-8) * params.a() {
        return Err(Error::InvalidParameter(format!(
            "input variance mismatch: weights give a = {a_spec}, circuit has a = {}",
            params.a()
        )));
    }
    let gamma_pt = partial_transpose(&circuit_covariance(params))?;
    let (s, _nu_plus, nu_minus) = williamson(&gamma_pt)?;
    let s_inv = s.inverse();
    let back_squeezer = tms_symplectic(-params.lambda())?;
    let lambda_refl = reflection::<T>();
    let noise = Mat::diagonal(&[params.eta(), params.eta(), params.mu(), params.mu()]);
    let half = T::of(0.5);
    let mut worst_iso = T::zero();
    let mut fs = Vec::with_capacity(DUAL_V_GRID.len());
    for &v in DUAL_V_GRID.iter() {
        let v = T::of(v);
        let d = Mat::diagonal(&[v, v, nu_minus, nu_minus]);
        let core = s_inv.mat().congruence(&d);
        let core = lambda_refl.congruence(&core).add(&noise);
        let gamma_star = back_squeezer.mat().congruence(&core);
        let sg = gamma_star.scale(half);
        let s11 = sg.block(0, 0, 2);
        let s12 = sg.block(0, 2, 2);
        let s22 = sg.block(2, 2, 2);
        let s11_inv = s11.inverse().ok_or(Error::Singular("dual circuit"))?;
        let a_map = s12.transpose().matmul(&s11_inv);
        let cond = s22.sub(&a_map.matmul(&s12)).symmetrized();
        let t_vac = Mat::identity(2).scale(half);
        let mix = t_vac.add(&cond);
        let mix_inv = mix.inverse().ok_or(Error::Singular("dual circuit"))?;
        let prec = s11_inv.add(
            &a_map.transpose().matmul(&mix_inv).matmul(&a_map),
        );
        let k = prec.inverse().ok_or(Error::Singular("dual circuit"))?;
        let m = k[(0, 0)] + k[(1, 1)];
        let iso = (k[(0, 0)] - k[(1, 1)]).abs().max(k[(0, 1)].abs());
        if iso > T::of(1e-8) * m.max(T::one()) {
            return Err(Error::Anisotropic { deviation: iso.to_f64() });
        }
        worst_iso = worst_iso.max(iso);
        let c = m / (T::of(2.0) * (s11.det() * mix.det()).sqrt());
        let q = (m - T::one()) / (m + T::one());
        let mut qn = T::one();
        let mut trace = T::zero();
        for &w in spec.weights() {
            trace += w * qn;
            qn = qn * q;
        }
        trace = trace * T::of(2.0) / (m + T::one()) * c;
        fs.push((v + T::one()) * half * trace);
    }
    let hs: Vec<T> = DUAL_V_GRID.iter().map(|&v| T::one() / T::of(v)).collect();
    let (limit, residual) = neville_to_zero(&hs, &fs);
    if residual > T::of(1e-8) {
        return Err(Error::Convergence {
            context: "dual-circuit extrapolation",
            residual: residual.to_f64(),
        });
    }
    let mut diagnostics = Diagnostics::default();
    diagnostics.terms_used = Some(DUAL_V_GRID.len());
    diagnostics.residual = Some(residual);
    diagnostics.isotropy_deviation = Some(worst_iso);
    Ok(GaussianityResult {
        g: nu_minus * limit,
        method: GaussianityMethod::DualCircuit,
        diagnostics,
    })
}

/// Neville extrapolation of samples (h_i, f_i) to h = 0, with the change
/// between the last two tableau stages as the residual estimate.
fn neville_to_zero<T: Real>(hs: &[T], fs: &[T]) -> (T, T) {
    let n = hs.len();
    let mut cur = fs.to_vec();
    let mut prev_top = cur[0];
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for i in 0..(n - k) {
            let num = hs[i] * cur[i + 1] - hs[i + k] * cur[i];
            next.push(num / (hs[i] - hs[i + k]));
        }
        prev_top = cur[0];
        cur = next;
    }
    let value = cur[0];
    (value, (value - prev_top).abs())
}

/// Radial-moment estimator of g for a one-mode state with covariance matrix
/// a𝟙: an alternating series over phase-averaged radial moments of the
/// Wigner function, summed with repeated averaging so that the
/// boundary-of-convergence Gaussian case comes out exact.
pub fn radial_series_g<T: Real>(
    w: &PolyGaussian<T>,
    terms: usize,
) -> Result<GaussianityResult<T>> {
    if w.modes() != 1 {
        return Err(Error::Dimension("radial series needs a one-mode state".into()));
    }
    if terms == 0 {
        return Err(Error::InvalidParameter("need at least one series term".into()));
    }
    let cm = w.covariance()?;
    let a = (cm.entry(0, 0) + cm.entry(1, 1)) * T::of(0.5);
    let iso = (cm.entry(0, 0) - cm.entry(1, 1)).abs().max(cm.entry(0, 1).abs());
    if iso > T::of(1e-8) * a.max(T::one()) {
        return Err(Error::Anisotropic { deviation: iso.to_f64() });
    }
    // phase-averaged odd radial moments against dr dφ equal the plain even
    // planar moments M_{2n} = ∫ W r^{2n} d²r, evaluated in closed form
    let r2 = {
        let mut p = Poly::new(2);
        p.add_term([2, 0, 0, 0], T::one());
        p.add_term([0, 2, 0, 0], T::one());
        p
    };
    let mut series = Vec::with_capacity(terms);
    let mut r2n = Poly::constant(2, T::one());
    let mut engine = crate::poly::GaussianMoments::new(w.sigma());
    let two = T::of(2.0);
    for n in 0..terms {
        if n > 0 {
            r2n = r2n.mul(&r2);
        }
        let m2n = engine.expect(&r2n.mul(w.poly()));
        let sign = if n % 2 == 0 { T::one() } else { -T::one() };
        series.push(two * sign * m2n / (factorial::<T>(n) * a.powi(n as i32)));
    }
    let mut partial = Vec::with_capacity(terms);
    let mut acc = T::zero();
    for &t in &series {
        acc += t;
        partial.push(acc);
    }
    let mut prev_head = partial[0];
    while partial.len() > 1 {
        prev_head = partial[0];
        for i in 0..partial.len() - 1 {
            partial[i] = (partial[i] + partial[i + 1]) * T::of(0.5);
        }
        partial.pop();
    }
    let value = partial[0];
    let mut diagnostics = Diagnostics::default();
    diagnostics.terms_used = Some(terms);
    diagnostics.last_term = Some(series[terms - 1]);
    diagnostics.residual = Some((value - prev_head).abs());
    diagnostics.isotropy_deviation = Some(iso);
    Ok(GaussianityResult { g: value, method: GaussianityMethod::RadialSeries, diagnostics })
}
