//! End-to-end entanglement detection for the supported state families:
//! build the two-mode state, run the analyzing pipeline, compare ν₋ against
//! the Gaussianity-bounded threshold, and classify.

use crate::error::{Error, Result};
use crate::gaussianity::{
    analyzing_box_wigner, g2_dual_circuit, g2_quadrature, nu_threshold, Diagnostics,
    FockDiagonalSpec, GaussianityMethod,
};
use crate::mat::Mat;
use crate::scalar::{factorial, Real};
use crate::symplectic::{
    nu_pm_closed_form, partial_transpose, symplectic_spectrum, tms_symplectic,
    CircuitParams, CovarianceMatrix, PHYSICALITY_TOL,
};
use crate::wigner::{gaussian_wigner, path_state_wigner, PGSum};

/// Noise variance at and above which an additive Gaussian channel breaks all
/// entanglement with the other mode.
pub const ENTANGLEMENT_BREAKING_NOISE: f64 = 2.0;
/// Squeezer strength above which the preparation stops being experimentally
/// reasonable; exceeding it only triggers a warning.
pub const FEASIBLE_LAMBDA: f64 = 0.8;
/// Largest Fock index retained when truncating Poissonian mixtures by tail
/// mass.
pub const DEFAULT_MAX_FOCK: usize = 30;

/// Input state placed on mode 1 of the preparation circuit, or the
/// beam-splitter path state analyzed on its own.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamily<T> {
    Vacuum,
    Fock(usize),
    Pdc { a: T },
    CustomFockDiagonal(Vec<T>),
    PathState { s_plus: T, s_minus: T },
}

impl<T: Real> StateFamily<T> {
    /// Covariance of the one-mode input, a = Σ φ_n (2n+1).
    pub fn input_variance(&self) -> Result<T> {
        Ok(self.fock_diagonal(DEFAULT_MAX_FOCK)?.variance())
    }

    /// Fock-diagonal weight sequence of the input state. Not defined for the
    /// path state, which is not prepared by the circuit.
    pub fn fock_diagonal(&self, n_max: usize) -> Result<FockDiagonalSpec<T>> {
        match self {
            StateFamily::Vacuum => Ok(FockDiagonalSpec::vacuum()),
            StateFamily::Fock(n) => Ok(FockDiagonalSpec::pure_fock(*n)),
            StateFamily::Pdc { a } => pdc_weights(*a, pdc_default_n_max(*a, n_max)?),
            StateFamily::CustomFockDiagonal(w) => FockDiagonalSpec::new(w.clone()),
            StateFamily::PathState { .. } => Err(Error::InvalidParameter(
                "the path state is not a Fock-diagonal circuit input".into(),
            )),
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            StateFamily::Vacuum => "vacuum",
            StateFamily::Fock(_) => "fock",
            StateFamily::Pdc { .. } => "pdc",
            StateFamily::CustomFockDiagonal(_) => "custom",
            StateFamily::PathState { .. } => "path_state",
        }
    }
}

/// Poissonian Fock weights of a phase-diffused coherent state of variance a:
/// φ_k = e^{−(a−1)/2} ((a−1)/2)^k / k!.
pub fn pdc_weights<T: Real>(a: T, n_max: usize) -> Result<FockDiagonalSpec<T>> {
    if !(a >= T::one()) {
        return Err(Error::InvalidParameter(format!("variance a = {a} must be >= 1")));
    }
    let mean = (a - T::one()) * T::of(0.5);
    let mut weights = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        let w = (-mean).exp() * mean.powi(k as i32) / factorial::<T>(k);
        weights.push(w);
    }
    FockDiagonalSpec::new(weights)
}

/// Smallest truncation depth (capped at `cap`) whose Poisson tail mass is
/// below 1e−12.
fn pdc_default_n_max<T: Real>(a: T, cap: usize) -> Result<usize> {
    if !(a >= T::one()) {
        return Err(Error::InvalidParameter(format!("variance a = {a} must be >= 1")));
    }
    let mean = (a - T::one()) * T::of(0.5);
    let mut cum = T::zero();
    let mut w = (-mean).exp();
    for k in 0..=cap {
        cum += w;
        if (T::one() - cum) < T::of(1e-12) {
            return Ok(k);
        }
        w = w * mean / T::of_usize(k + 1);
    }
    Err(Error::InvalidParameter(format!(
        "Poisson tail of a = {a} still above 1e-12 at truncation {cap}; raise the truncation"
    )))
}

/// Detection outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zone {
    DuanDetected,
    ImprovedDetected,
    Undetected,
}

impl Zone {
    pub fn as_str(&self) -> &'static str {
        match self {
            Zone::DuanDetected => "duan_detected",
            Zone::ImprovedDetected => "improved_detected",
            Zone::Undetected => "undetected",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DetectionVerdict<T> {
    pub nu_minus: T,
    pub g2: T,
    pub nu_th: T,
    pub zone: Zone,
    pub eb_flag: bool,
    pub method: GaussianityMethod,
    pub diagnostics: Diagnostics<T>,
    pub warnings: Vec<String>,
}

/// Strict-inequality classification: ties at either boundary count as the
/// weaker verdict.
fn classify<T: Real>(nu_minus: T, nu_th: T, eb_flag: bool) -> Zone {
    let tol = T::of(PHYSICALITY_TOL);
    if eb_flag {
        return Zone::Undetected;
    }
    if nu_minus < T::one() - tol {
        Zone::DuanDetected
    } else if nu_minus < nu_th - tol {
        Zone::ImprovedDetected
    } else {
        Zone::Undetected
    }
}

/// Two-mode Wigner function at the circuit output for a Fock-diagonal input.
pub fn circuit_output_wigner<T: Real>(
    spec: &FockDiagonalSpec<T>,
    params: &CircuitParams<T>,
) -> Result<PGSum<T>> {
    let vacuum = gaussian_wigner(&CovarianceMatrix::identity(1))?;
    let squeezer = tms_symplectic(params.lambda())?;
    let noise = CovarianceMatrix::new(Mat::diagonal(&[
        params.eta(),
        params.eta(),
        params.mu(),
        params.mu(),
    ]))?;
    spec.wigner()?
        .tensor(&vacuum)?
        .linear_substitute(squeezer.mat())?
        .gaussian_convolve(&noise)
}

/// Run the full analysis of a circuit-prepared state.
pub fn analyze<T: Real>(
    family: &StateFamily<T>,
    params: &CircuitParams<T>,
    method: GaussianityMethod,
) -> Result<DetectionVerdict<T>> {
    analyze_with_truncation(family, params, method, DEFAULT_MAX_FOCK)
}

/// As [`analyze`], with an explicit cap on the Fock truncation used for
/// Poissonian inputs.
pub fn analyze_with_truncation<T: Real>(
    family: &StateFamily<T>,
    params: &CircuitParams<T>,
    method: GaussianityMethod,
    n_max: usize,
) -> Result<DetectionVerdict<T>> {
    if let StateFamily::PathState { .. } = family {
        return Err(Error::InvalidParameter(
            "the path state is not prepared by the circuit; use the path-state analysis".into(),
        ));
    }
    if method == GaussianityMethod::RadialSeries {
        return Err(Error::InvalidParameter(
            "the radial series scores one-mode inputs, not the two-mode analysis".into(),
        ));
    }
    let spec = family.fock_diagonal(n_max)?;
    let a_spec = spec.variance();
    if (a_spec - params.a()).abs() > T::of(1e-8) * params.a().max(T::one()) {
        return Err(Error::InvalidParameter(format!(
            "input variance mismatch: family gives a = {a_spec}, circuit has a = {}",
            params.a()
        )));
    }
    let mut warnings = Vec::new();
    let eb_flag = params.eta() >= T::of(ENTANGLEMENT_BREAKING_NOISE)
        || params.mu() >= T::of(ENTANGLEMENT_BREAKING_NOISE);
    if eb_flag {
        warnings.push(
            "additive noise at or above 2 vacuum units breaks all entanglement".to_string(),
        );
    }
    if params.lambda() > T::of(FEASIBLE_LAMBDA) {
        warnings.push(format!(
            "squeezer parameter {} exceeds the feasible-range guidance of {FEASIBLE_LAMBDA}",
            params.lambda()
        ));
    }
    let w = circuit_output_wigner(&spec, params)?;
    let gamma_pt = partial_transpose(&w.covariance()?)?;
    let (_, nu_minus) = symplectic_spectrum(&gamma_pt)?;
    let g2 = match method {
        GaussianityMethod::WignerOverlap => analyzing_box_wigner(&w)?.g2,
        GaussianityMethod::DualCircuit => g2_dual_circuit(&spec, params)?,
        GaussianityMethod::Quadrature => g2_quadrature(&w)?,
        GaussianityMethod::RadialSeries => unreachable!("rejected above"),
    };
    let nu_th = nu_threshold(g2.g)?;
    Ok(DetectionVerdict {
        nu_minus,
        g2: g2.g,
        nu_th,
        zone: classify(nu_minus, nu_th, eb_flag),
        eb_flag,
        method,
        diagnostics: g2.diagnostics,
        warnings,
    })
}

/// Wigner-pipeline value of g₂ for the path state, in closed form constant
/// along the family.
const PATH_G2: f64 = 0.918_558_653_543_691_9;

/// Analyze the squeezed-photon path state. ν₋ = √3 · min(s₊/s₋, s₋/s₊) and
/// g₂ is constant along the family; both are recomputed from the full
/// pipeline and verified to 1e−8 before classification.
///
/// At s₊ = s₋ the two symplectic eigenvalues of the reflected state collide
/// and the symplectic eigenbasis is no longer unique, so the reduced mode is
/// basis-dependent there. The Gaussianity score is then taken from a nearby
/// member of the same family (the score is constant along it), which is the
/// continuous extension through the degenerate point.
pub fn analyze_path_state<T: Real>(s_plus: T, s_minus: T) -> Result<DetectionVerdict<T>> {
    if !(s_plus > T::zero() && s_minus > T::zero()) {
        return Err(Error::InvalidParameter(
            "squeezing factors must be strictly positive".into(),
        ));
    }
    let w = PGSum::from_state(path_state_wigner(s_plus, s_minus)?);
    let gamma_pt = partial_transpose(&w.covariance()?)?;
    let (nu_plus, nu_minus) = symplectic_spectrum(&gamma_pt)?;
    let ratio = s_minus / s_plus;
    let min_ratio = ratio.min(T::one() / ratio);
    let mut warnings = Vec::new();
    let degenerate = (nu_plus - nu_minus).abs() < T::of(1e-4) * nu_plus;
    let g2 = if degenerate {
        warnings.push(
            "degenerate symplectic spectrum: Gaussianity evaluated on a nearby family member"
                .to_string(),
        );
        let detuned = path_state_wigner(s_plus, s_plus * T::of(1.001))?;
        analyzing_box_wigner(&PGSum::from_state(detuned))?.g2
    } else {
        let out = analyzing_box_wigner(&w)?;
        if (out.nu_minus - nu_minus).abs() > T::of(1e-10) * nu_plus {
            return Err(Error::Convergence {
                context: "path-state spectrum consistency",
                residual: (out.nu_minus - nu_minus).abs().to_f64(),
            });
        }
        out.g2
    };
    // verified family constants
    let nu_expected = T::of(3.0).sqrt() * min_ratio;
    let nu_dev = (nu_minus - nu_expected).abs();
    if nu_dev > T::of(1e-8) * nu_plus.max(T::one()) {
        return Err(Error::Convergence {
            context: "path-state symplectic eigenvalue relation",
            residual: nu_dev.to_f64(),
        });
    }
    let g2_dev = (g2.g - T::of(PATH_G2)).abs();
    if g2_dev > T::of(1e-8) {
        return Err(Error::Convergence {
            context: "path-state Gaussianity constant",
            residual: g2_dev.to_f64(),
        });
    }
    let nu_th = nu_threshold(g2.g)?;
    let mut diagnostics = g2.diagnostics;
    diagnostics.residual = Some(nu_dev.max(g2_dev));
    Ok(DetectionVerdict {
        nu_minus,
        g2: g2.g,
        nu_th,
        zone: classify(nu_minus, nu_th, false),
        eb_flag: false,
        method: g2.method,
        diagnostics,
        warnings,
    })
}

/// One row of the built-in reference table of circuit configurations.
#[derive(Clone, Debug)]
pub struct Table1Row<T> {
    pub kind: &'static str,
    pub a: T,
    pub lambda: T,
    pub eta: T,
    pub mu: T,
    /// ν₋ as published (two rows are two-decimal roundings).
    pub nu_ref: T,
    /// Full-precision ν₋ implied by the exact parameters.
    pub nu_ref_exact: T,
    /// g₂ as published, five decimals.
    pub g2_ref: T,
    pub nu_minus: T,
    pub g2: T,
}

impl<T: Real> Table1Row<T> {
    pub fn dev_nu(&self) -> T {
        self.nu_minus - self.nu_ref
    }
    pub fn dev_g2(&self) -> T {
        self.g2 - self.g2_ref
    }
    /// ν₋ must match the exact value to 1e−9 and the published display after
    /// rounding; g₂ must match the published five decimals to 1e−5.
    pub fn within_tolerance(&self) -> bool {
        (self.nu_minus - self.nu_ref_exact).abs() <= T::of(1e-9)
            && (self.nu_minus - self.nu_ref).abs() < T::of(5e-3)
            && self.dev_g2().abs() <= T::of(1e-5)
    }
}

struct RefRow {
    fock: bool,
    a: f64,
    lambda: f64,
    eta: (f64, f64),
    mu: (f64, f64),
    nu_ref: f64,
    nu_ref_exact: f64,
    g2_ref: f64,
}

/// Parameters exactly as published; the noise fractions were chosen to land
/// ν₋ on round values. Two ν₋ entries (the 1.04 rows) are two-decimal
/// roundings of the value the parameters actually produce, recorded here at
/// full precision.
const REFERENCE_ROWS: [RefRow; 10] = [
    RefRow { fock: true, a: 3.0, lambda: 0.6, eta: (1.0, 13.0), mu: (1.0, 1.0), nu_ref: 1.0, nu_ref_exact: 1.0, g2_ref: 0.99541 },
    RefRow { fock: true, a: 3.0, lambda: 0.3, eta: (0.1, 1.0), mu: (228.0, 757.0), nu_ref: 1.0, nu_ref_exact: 1.0, g2_ref: 0.99780 },
    RefRow { fock: true, a: 3.0, lambda: 0.5, eta: (0.1, 1.0), mu: (0.9, 1.0), nu_ref: 1.1, nu_ref_exact: 1.1, g2_ref: 0.99492 },
    RefRow { fock: true, a: 3.0, lambda: 0.5, eta: (0.1, 1.0), mu: (0.8, 1.0), nu_ref: 1.04, nu_ref_exact: 1.038590884375488, g2_ref: 0.99521 },
    RefRow { fock: false, a: 2.0, lambda: 0.3, eta: (0.1, 1.0), mu: (513.0, 1271.0), nu_ref: 1.0, nu_ref_exact: 1.0, g2_ref: 0.99798 },
    RefRow { fock: false, a: 2.0, lambda: 0.7, eta: (0.1, 1.0), mu: (931.0, 677.0), nu_ref: 1.0, nu_ref_exact: 1.0, g2_ref: 0.99850 },
    RefRow { fock: false, a: 3.0, lambda: 0.6, eta: (1.0, 13.0), mu: (1.0, 1.0), nu_ref: 1.0, nu_ref_exact: 1.0, g2_ref: 0.99781 },
    RefRow { fock: false, a: 3.0, lambda: 0.3, eta: (0.1, 1.0), mu: (228.0, 757.0), nu_ref: 1.0, nu_ref_exact: 1.0, g2_ref: 0.99893 },
    RefRow { fock: false, a: 3.0, lambda: 0.5, eta: (0.1, 1.0), mu: (0.9, 1.0), nu_ref: 1.1, nu_ref_exact: 1.1, g2_ref: 0.99758 },
    RefRow { fock: false, a: 3.0, lambda: 0.5, eta: (0.1, 1.0), mu: (0.8, 1.0), nu_ref: 1.04, nu_ref_exact: 1.038590884375488, g2_ref: 0.99771 },
];

/// Reproduce every row of the reference table with the selected g₂ method.
pub fn reproduce_table1<T: Real>(method: GaussianityMethod) -> Result<Vec<Table1Row<T>>> {
    REFERENCE_ROWS
        .iter()
        .map(|row| {
            let a = T::of(row.a);
            let lambda = T::of(row.lambda);
            let eta = T::of(row.eta.0) / T::of(row.eta.1);
            let mu = T::of(row.mu.0) / T::of(row.mu.1);
            let params = CircuitParams::new(a, lambda, eta, mu)?;
            let family = if row.fock {
                StateFamily::Fock(((row.a as usize) - 1) / 2)
            } else {
                StateFamily::Pdc { a }
            };
            let verdict = analyze(&family, &params, method)?;
            Ok(Table1Row {
                kind: if row.fock { "fock" } else { "pdc" },
                a,
                lambda,
                eta,
                mu,
                nu_ref: T::of(row.nu_ref),
                nu_ref_exact: T::of(row.nu_ref_exact),
                g2_ref: T::of(row.g2_ref),
                nu_minus: verdict.nu_minus,
                g2: verdict.g2,
            })
        })
        .collect()
}

/// Which circuit parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    A,
    Lambda,
    Eta,
    Mu,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::A => "a",
            SweepParameter::Lambda => "lambda",
            SweepParameter::Eta => "eta",
            SweepParameter::Mu => "mu",
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(SweepParameter::A),
            "lambda" => Ok(SweepParameter::Lambda),
            "eta" => Ok(SweepParameter::Eta),
            "mu" => Ok(SweepParameter::Mu),
            other => Err(Error::InvalidParameter(format!("unknown sweep parameter '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepPoint<T> {
    pub value: T,
    pub nu_minus: T,
    pub g2: T,
    pub nu_th: T,
    pub zone: Zone,
}

fn family_at<T: Real>(
    family: &StateFamily<T>,
    vary: SweepParameter,
    value: T,
) -> Result<(StateFamily<T>, bool)> {
    if vary != SweepParameter::A {
        return Ok((family.clone(), false));
    }
    match family {
        StateFamily::Fock(_) => {
            let rounded = value.round();
            let n_twice = rounded - T::one();
            let odd_int = (value - rounded).abs() < T::of(1e-12)
                && (n_twice * T::of(0.5)).fract() == T::zero()
                && rounded >= T::one();
            if !odd_int {
                return Err(Error::InvalidParameter(format!(
                    "Fock inputs only admit odd integer variances, got a = {value}"
                )));
            }
            let n = (rounded.to_f64() as usize - 1) / 2;
            Ok((StateFamily::Fock(n), true))
        }
        StateFamily::Pdc { .. } => Ok((StateFamily::Pdc { a: value }, true)),
        _ => Err(Error::InvalidParameter(
            "varying the input variance is only defined for Fock and Poissonian inputs".into(),
        )),
    }
}

/// Evaluate the detection pipeline along one varying circuit parameter, the
/// others held at `base`.
pub fn sweep<T: Real>(
    family: &StateFamily<T>,
    base: &CircuitParams<T>,
    vary: SweepParameter,
    values: &[T],
    method: GaussianityMethod,
) -> Result<Vec<SweepPoint<T>>> {
    values
        .iter()
        .map(|&v| {
            let (fam, _) = family_at(family, vary, v)?;
            let params = match vary {
                SweepParameter::A => base.with_a(v)?,
                SweepParameter::Lambda => base.with_lambda(v)?,
                SweepParameter::Eta => base.with_eta(v)?,
                SweepParameter::Mu => base.with_mu(v)?,
            };
            let verdict = analyze(&fam, &params, method)?;
            Ok(SweepPoint {
                value: v,
                nu_minus: verdict.nu_minus,
                g2: verdict.g2,
                nu_th: verdict.nu_th,
                zone: verdict.zone,
            })
        })
        .collect()
}

/// Parameter value at which the verdict leaves the detected region, located
/// by bisection on the margin ν_th(g₂) − ν₋. The margin must change sign
/// between `lo` and `hi`.
pub fn detection_crossing<T: Real>(
    family: &StateFamily<T>,
    base: &CircuitParams<T>,
    vary: SweepParameter,
    lo: T,
    hi: T,
    method: GaussianityMethod,
) -> Result<T> {
    if vary == SweepParameter::A {
        if let StateFamily::Fock(_) = family {
            return Err(Error::InvalidParameter(
                "the Fock input variance is discrete; no continuous crossing exists".into(),
            ));
        }
    }
    let margin = |v: T| -> Result<T> {
        let pts = sweep(family, base, vary, &[v], method)?;
        Ok(pts[0].nu_th - pts[0].nu_minus)
    };
    let (mut a, mut b) = (lo, hi);
    let mut fa = margin(a)?;
    let fb = margin(b)?;
    if fa * fb > T::zero() {
        return Err(Error::InvalidParameter(format!(
            "margin does not change sign on [{lo}, {hi}]"
        )));
    }
    for _ in 0..60 {
        let m = (a + b) * T::of(0.5);
        let fm = margin(m)?;
        if fm == T::zero() || (b - a).abs() < T::of(1e-10) {
            return Ok(m);
        }
        if fa * fm < T::zero() {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok((a + b) * T::of(0.5))
}

/// Closed-form consistency check used by callers that want it: ν₋ from the
/// pipeline against the analytic expression for the circuit family.
pub fn closed_form_nu_minus<T: Real>(params: &CircuitParams<T>) -> T {
    nu_pm_closed_form(params).1
}
