// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Concurrence measures, sudden-death/revival time estimates, and event
//! detection on sampled concurrence series.
//!
//! Two independent routes to the concurrence are provided and cross-checked
//! in the test suites: the general Wootters construction on product-basis
//! matrices ([`wootters_concurrence`]) and the closed-form bounds
//! [`concurrence_c1`]/[`concurrence_c2`] valid for X-form states in the
//! collective basis.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::dynamics::{
    dicke_basis_change, evolve_closed_form, CollectiveDensityMatrix, LEVEL_ANTISYMMETRIC,
    LEVEL_EXCITED, LEVEL_GROUND, LEVEL_SYMMETRIC,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, hermitize, sqrt_psd, CMatrix4};
use crate::rates::RateSet;

/// Off-diagonal magnitude above which a state no longer counts as X-form.
const XFORM_TOL: f64 = 1e-9;
/// Eigenvalue clip for the spin-flipped product inside Wootters' formula.
const WOOTTERS_EIG_FLOOR: f64 = 1e-12;
/// Relative bisection tolerance for event refinement.
const BISECT_REL_TOL: f64 = 1e-12;

/// Wootters concurrence of an arbitrary two-qubit density matrix in the
/// product basis (|ee⟩, |eg⟩, |ge⟩, |gg⟩).
///
/// Computed through the Hermitian form: the eigenvalues of ρρ̃ equal those
/// of √ρ·ρ̃·√ρ, which is Hermitian positive semidefinite, so no general
/// complex eigensolver is needed. Eigenvalues in [−1e-12, 0) are clipped to
/// zero before the square root; anything more negative is a numeric error.
pub fn wootters_concurrence(rho_product: &CMatrix4) -> Result<f64> {
    let defect = hermiticity_defect(rho_product);
    if !(defect <= 1e-9) {
        return Err(Error::InvalidState(format!(
            "concurrence input is not Hermitian (defect {defect:.3e})"
        )));
    }
    let tr = rho_product.trace();
    if !((tr.re - 1.0).abs() <= 1e-9 && tr.im.abs() <= 1e-9) {
        return Err(Error::InvalidState(format!(
            "concurrence input has trace {tr} instead of 1"
        )));
    }
    let rho = hermitize(rho_product);
    // ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y); the flip matrix is the real
    // anti-diagonal (−1, 1, 1, −1).
    let flip = spin_flip_matrix();
    let rho_tilde = flip * rho.map(|z| z.conj()) * flip;
    let root = sqrt_psd(&rho, 1e-8)?;
    let product = hermitize(&(root * rho_tilde * root));
    let eigs = hermitian_eigenvalues(&product);
    let mut lambdas = [0.0f64; 4];
    for (slot, &e) in lambdas.iter_mut().zip(eigs.iter()) {
        if e < -WOOTTERS_EIG_FLOOR {
            return Err(Error::Numerical(format!(
                "spin-flipped spectrum has eigenvalue {e:.3e} below the clip floor"
            )));
        }
        *slot = e.max(0.0).sqrt();
    }
    // `hermitian_eigenvalues` returns ascending order.
    Ok((lambdas[3] - lambdas[2] - lambdas[1] - lambdas[0]).max(0.0))
}

fn spin_flip_matrix() -> CMatrix4 {
    let mut y = Matrix4::zeros();
    y[(0, 3)] = Complex64::new(-1.0, 0.0);
    y[(1, 2)] = Complex64::new(1.0, 0.0);
    y[(2, 1)] = Complex64::new(1.0, 0.0);
    y[(3, 0)] = Complex64::new(-1.0, 0.0);
    y
}

fn require_xform(rho: &CollectiveDensityMatrix) -> Result<()> {
    let checks = [
        (LEVEL_EXCITED, LEVEL_SYMMETRIC),
        (LEVEL_EXCITED, LEVEL_ANTISYMMETRIC),
        (LEVEL_SYMMETRIC, LEVEL_GROUND),
        (LEVEL_ANTISYMMETRIC, LEVEL_GROUND),
        (LEVEL_SYMMETRIC, LEVEL_ANTISYMMETRIC),
    ];
    for (i, j) in checks {
        let mag = rho.element(i, j).norm();
        if mag > XFORM_TOL {
            return Err(Error::InvalidState(format!(
                "state is not X-form: |ρ({i},{j})| = {mag:.3e}"
            )));
        }
    }
    Ok(())
}

/// Signed contribution of the doubly-excited/ground coherence to the
/// concurrence of an X-form collective-basis state:
/// C₁ = 2|ρ_ge| − (ρ_++ + ρ_−−). Positive values are the concurrence when
/// this branch dominates; negative values certify that this coherence does
/// not entangle the pair.
pub fn concurrence_c1(rho: &CollectiveDensityMatrix) -> Result<f64> {
    require_xform(rho)?;
    let coherence = rho.element(LEVEL_GROUND, LEVEL_EXCITED).norm();
    let [_, pp, mm, _] = rho.populations();
    Ok(2.0 * coherence - (pp + mm))
}

/// Signed contribution of the single-excitation imbalance:
/// C₂ = |ρ_++ − ρ_−−| − 2√(ρ_ee·ρ_gg) for an X-form collective-basis state.
pub fn concurrence_c2(rho: &CollectiveDensityMatrix) -> Result<f64> {
    require_xform(rho)?;
    let [ee, pp, mm, gg] = rho.populations();
    Ok((pp - mm).abs() - 2.0 * (ee.max(0.0) * gg.max(0.0)).sqrt())
}

/// Concurrence of an X-form collective-basis state:
/// max(0, C₁, C₂). Agrees with [`wootters_concurrence`] after the change to
/// the product basis.
pub fn xstate_concurrence(rho: &CollectiveDensityMatrix) -> Result<f64> {
    let c1 = concurrence_c1(rho)?;
    let c2 = concurrence_c2(rho)?;
    Ok(c1.max(c2).max(0.0))
}

fn validated_gamma(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "decay rate γ must be positive and finite, got {gamma}"
        )));
    }
    Ok(gamma)
}

fn validated_alpha_open(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "state parameter α must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(alpha)
}

/// Sudden-death time of the pure entangled preparation
/// √α|e⟩ + √(1−α)|g⟩ under independent decay:
/// t = ln(α/(α − √(α(1−α))))/γ, defined only for α > 1/2 (below the
/// threshold the concurrence stays positive for all finite times).
pub fn death_time_entangled(alpha: f64, gamma: f64) -> Result<Option<f64>> {
    let a = validated_alpha_open(alpha)?;
    let g = validated_gamma(gamma)?;
    let root = (a * (1.0 - a)).sqrt();
    if a - root <= 0.0 {
        return Ok(None);
    }
    let arg = a / (a - root);
    if arg <= 1.0 {
        return Ok(None);
    }
    Ok(Some(arg.ln() / g))
}

/// Exact α threshold above which [`death_time_entangled`] is finite:
/// the root of α = √(α(1−α)), i.e. α = 1/2.
pub fn entangled_death_threshold() -> f64 {
    0.5
}

/// Revival-time estimate after a collective sudden death:
/// t = (2/(3Γ))·ln(4γ/(√α(γ − Γ))). Requires Γ ≠ 0 (no revival without the
/// collective channel) and Γ < γ; meaningful when the result is positive.
pub fn revival_time(alpha: f64, gamma: f64, collective_damping: f64) -> Result<f64> {
    let a = validated_alpha_open(alpha)?;
    let g = validated_gamma(gamma)?;
    if collective_damping == 0.0 {
        return Err(Error::domain(
            "revival requires a nonzero collective damping rate".to_string(),
        ));
    }
    if !(collective_damping < g) {
        return Err(Error::domain(format!(
            "revival estimate requires Γ < γ, got Γ = {collective_damping}, γ = {g}"
        )));
    }
    let arg = 4.0 * g / (a.sqrt() * (g - collective_damping));
    Ok(2.0 / (3.0 * collective_damping) * arg.ln())
}

/// Sudden-death time estimate for the diagonal mixture
/// (1/3)·diag(α, 2, 0, 1−α) under independent decay:
/// t = ln(α/(√(3α² + 5α) − (1 + α)))/γ, defined when the logarithm's
/// argument exceeds 1 (α above ≈ 0.2808).
///
/// This is the printed estimate of the source formula; it does not coincide
/// with the numeric zero of C₂ along the actual trajectory (the discrepancy
/// is pinned by a dedicated test). Event detection always uses the numeric
/// zero.
pub fn death_time_mixed(alpha: f64, gamma: f64) -> Result<Option<f64>> {
    let a = validated_alpha_open(alpha)?;
    let g = validated_gamma(gamma)?;
    let denom = (3.0 * a * a + 5.0 * a).sqrt() - (1.0 + a);
    if denom <= 0.0 {
        return Ok(None);
    }
    let arg = a / denom;
    if arg <= 1.0 {
        return Ok(None);
    }
    Ok(Some(arg.ln() / g))
}

/// Exact α threshold above which [`death_time_mixed`] is finite: the root
/// of 2α² + 3α − 1 = 0, i.e. (√17 − 3)/4 ≈ 0.280776.
pub fn mixed_death_threshold() -> f64 {
    (17.0f64.sqrt() - 3.0) / 4.0
}

/// One sample of a concurrence time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceSample {
    /// Sample time.
    pub t: f64,
    /// Clipped concurrence max(0, C₁, C₂).
    pub concurrence: f64,
    /// Signed coherence branch C₁.
    pub c1_raw: f64,
    /// Signed population-imbalance branch C₂.
    pub c2_raw: f64,
}

impl ConcurrenceSample {
    /// Signed envelope whose zero crossings are the death/revival events.
    pub fn signed_envelope(&self) -> f64 {
        self.c1_raw.max(self.c2_raw)
    }
}

/// A strictly time-ordered set of concurrence samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceSeries {
    samples: Vec<ConcurrenceSample>,
}

impl ConcurrenceSeries {
    /// Wraps samples after checking strict time ordering and the clipping
    /// invariant concurrence = max(0, C₁, C₂).
    pub fn from_samples(samples: Vec<ConcurrenceSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain(
                "a concurrence series needs at least two samples".to_string(),
            ));
        }
        for pair in samples.windows(2) {
            if !(pair[1].t > pair[0].t) {
                return Err(Error::domain(format!(
                    "sample times must increase strictly ({} then {})",
                    pair[0].t, pair[1].t
                )));
            }
        }
        for s in &samples {
            let expect = s.c1_raw.max(s.c2_raw).max(0.0);
            if (s.concurrence - expect).abs() > 1e-9 {
                return Err(Error::domain(format!(
                    "sample at t = {} violates concurrence = max(0, C₁, C₂)",
                    s.t
                )));
            }
        }
        Ok(ConcurrenceSeries { samples })
    }

    /// Evaluates the closed-form evolution of `rho0` at the given times and
    /// records both concurrence branches. Times must be strictly
    /// increasing and non-negative.
    pub fn from_closed_form(
        rho0: &CollectiveDensityMatrix,
        rates: &RateSet,
        times: &[f64],
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(times.len());
        for &t in times {
            let state = evolve_closed_form(rho0, t, rates)?;
            let c1 = concurrence_c1(&state)?;
            let c2 = concurrence_c2(&state)?;
            samples.push(ConcurrenceSample {
                t,
                concurrence: c1.max(c2).max(0.0),
                c1_raw: c1,
                c2_raw: c2,
            });
        }
        Self::from_samples(samples)
    }

    /// The samples in time order.
    pub fn samples(&self) -> &[ConcurrenceSample] {
        &self.samples
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// True when the series holds no samples (never, post-construction).
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Uniform sample grid on [0, t_end] with `n ≥ 2` points.
pub fn uniform_times(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || n < 2 {
        return Err(Error::domain(
            "uniform grid needs t_end > 0 and at least two points".to_string(),
        ));
    }
    let dt = t_end / (n - 1) as f64;
    Ok((0..n).map(|i| i as f64 * dt).collect())
}

/// Detected entanglement events: sudden deaths, revivals, and the dark
/// intervals they bound. Events alternate; a trailing death without a
/// revival closes its dark period at the final sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct EventReport {
    /// Times at which the concurrence reaches zero (sudden deaths).
    pub deaths: Vec<f64>,
    /// Times at which the concurrence returns from zero (revivals).
    pub revivals: Vec<f64>,
    /// Dark periods (death, end) — end is the matching revival or the last
    /// sample time when no revival follows.
    pub dark_periods: Vec<(f64, f64)>,
    /// Concurrence at the first sample.
    pub initial_concurrence: f64,
}

/// Number of consecutive confirming samples required on each side of a
/// candidate crossing before an event is accepted.
const CONFIRM_RUN: usize = 5;

/// Detects sudden-death and revival events from a sampled series alone.
/// Candidate events come from threshold crossings of the clipped
/// concurrence confirmed by [`CONFIRM_RUN`] consecutive samples; each event
/// is then anchored to a sign change of the signed envelope
/// max(C₁, C₂) and refined by linear interpolation between the bracketing
/// samples. Dips below the threshold with no sign change (asymptotic decay
/// toward zero from above) are rejected, not reported as deaths.
pub fn detect_events(series: &ConcurrenceSeries, threshold: f64) -> Result<EventReport> {
    detect_events_impl(series, threshold, None)
}

/// [`detect_events`] with bisection refinement on a continuous signed
/// envelope `f(t) = max(C₁(t), C₂(t))` (typically the closed-form
/// evolution), giving event times at the bisection tolerance rather than
/// the sampling resolution.
pub fn detect_events_with<F>(
    series: &ConcurrenceSeries,
    threshold: f64,
    envelope: F,
) -> Result<EventReport>
where
    F: Fn(f64) -> f64,
{
    detect_events_impl(series, threshold, Some(&envelope))
}

/// Signed-envelope closure for [`detect_events_with`] backed by the
/// closed-form evolution of `rho0`. Rates and state are validated up
/// front so the closure itself cannot fail.
pub fn closed_form_envelope(
    rho0: &CollectiveDensityMatrix,
    rates: &RateSet,
) -> Result<impl Fn(f64) -> f64> {
    // Validate once: a zero-time evolution checks rates and X-form shape.
    let probe = evolve_closed_form(rho0, 0.0, rates)?;
    concurrence_c1(&probe)?;
    let rho0 = rho0.clone();
    let rates = *rates;
    Ok(move |t: f64| {
        let state = evolve_closed_form(&rho0, t, &rates)
            .expect("rates and state were validated when the envelope was built");
        let c1 = concurrence_c1(&state).expect("X-form is preserved by the closed form");
        let c2 = concurrence_c2(&state).expect("X-form is preserved by the closed form");
        c1.max(c2)
    })
}

fn detect_events_impl(
    series: &ConcurrenceSeries,
    threshold: f64,
    envelope: Option<&dyn Fn(f64) -> f64>,
) -> Result<EventReport> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::domain(format!(
            "event threshold must be positive, got {threshold}"
        )));
    }
    let samples = series.samples();
    let n = samples.len();
    let t_end = samples[n - 1].t;
    let refine = |lo: usize, hi: usize| -> f64 {
        // Bracket [t_lo, t_hi] with envelope sign change f(lo) and f(hi) of
        // opposite (non-strict) signs.
        let (t0, f0) = (samples[lo].t, samples[lo].signed_envelope());
        let (t1, f1) = (samples[hi].t, samples[hi].signed_envelope());
        match envelope {
            Some(f) => bisect_zero(f, t0, t1, BISECT_REL_TOL * t_end.max(1.0)),
            None => {
                if f0 == f1 {
                    0.5 * (t0 + t1)
                } else {
                    t0 + (t1 - t0) * f0 / (f0 - f1)
                }
            }
        }
    };

    let mut deaths = Vec::new();
    let mut revivals = Vec::new();
    let mut alive = samples[0].concurrence >= threshold;
    let mut i = 1;
    while i < n {
        if alive && samples[i].concurrence < threshold {
            // Candidate death: need CONFIRM_RUN sub-threshold samples.
            if i + CONFIRM_RUN > n {
                break;
            }
            if !samples[i..i + CONFIRM_RUN]
                .iter()
                .all(|s| s.concurrence < threshold)
            {
                i += 1;
                continue;
            }
            // Anchor to the envelope sign change; scan while sub-threshold.
            let mut k = i;
            let mut found = None;
            while k < n && samples[k].concurrence < threshold {
                if samples[k].signed_envelope() <= 0.0 {
                    found = Some(k);
                    break;
                }
                k += 1;
            }
            match found {
                Some(k) => {
                    deaths.push(refine(k - 1, k));
                    alive = false;
                    i = k + 1;
                }
                None => {
                    // Sub-threshold but never non-positive: not a death.
                    i = k;
                }
            }
        } else if !alive && samples[i].concurrence >= threshold {
            // Candidate revival: need CONFIRM_RUN above-threshold samples.
            if i + CONFIRM_RUN > n {
                break;
            }
            if !samples[i..i + CONFIRM_RUN]
                .iter()
                .all(|s| s.concurrence >= threshold)
            {
                i += 1;
                continue;
            }
            // The envelope is ≥ threshold > 0 at i; find the last
            // non-positive sample before it.
            let mut k = i;
            while k > 0 && samples[k - 1].signed_envelope() > 0.0 {
                k -= 1;
            }
            if k == 0 {
                // The envelope never reached zero (initially dead sample
                // below threshold but positive): anchor to the threshold
                // crossing instead.
                let t = match envelope {
                    Some(f) => bisect_zero(
                        &|t| f(t) - threshold,
                        samples[i - 1].t,
                        samples[i].t,
                        BISECT_REL_TOL * t_end.max(1.0),
                    ),
                    None => samples[i].t,
                };
                revivals.push(t);
            } else {
                revivals.push(refine(k - 1, k));
            }
            alive = true;
            i += 1;
        } else {
            i += 1;
        }
    }

    let mut dark_periods = Vec::new();
    for (idx, &d) in deaths.iter().enumerate() {
        let end = revivals.get(idx).copied().unwrap_or(t_end);
        dark_periods.push((d, end));
    }
    Ok(EventReport {
        deaths,
        revivals,
        dark_periods,
        initial_concurrence: samples[0].concurrence,
    })
}

/// Bisection for a sign change of `f` on [a, b] to absolute tolerance
/// `tol` in t. The bracket may be non-strict on either side.
fn bisect_zero(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    if f_lo.signum() == f_hi.signum() {
        // No sign change inside the bracket (sampling placed the root at a
        // boundary): fall back to the midpoint.
        return 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Convenience: product-basis matrix of a collective-basis state, for
/// feeding [`wootters_concurrence`].
pub fn product_matrix(rho: &CollectiveDensityMatrix) -> CMatrix4 {
    dicke_basis_change(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::InitialState;
    use crate::rates::RateSet;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn cr(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rates(gamma: f64, cross: f64, shift: f64) -> RateSet {
        RateSet::from_values(gamma, cross, shift).unwrap()
    }

    fn entangled(alpha: f64) -> CollectiveDensityMatrix {
        InitialState::EntangledPure { alpha }
            .density_matrix()
            .unwrap()
    }

    fn mixed(alpha: f64) -> CollectiveDensityMatrix {
        InitialState::MixedDiagonal { alpha }
            .density_matrix()
            .unwrap()
    }

    #[test]
    fn wootters_fixed_points() {
        // Symmetric single-excitation state is maximally entangled.
        let mut plus = CMatrix4::zeros();
        plus[(1, 1)] = cr(1.0);
        let plus = CollectiveDensityMatrix::new(plus).unwrap();
        assert_relative_eq!(
            wootters_concurrence(&product_matrix(&plus)).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        // Ground state is separable.
        let ground = entangled(0.0);
        assert_relative_eq!(
            wootters_concurrence(&product_matrix(&ground)).unwrap(),
            0.0,
            epsilon = 1e-12
        );

        // Werner family: p·|Φ⟩⟨Φ| + (1 − p)·I/4 with Φ = (|ee⟩ + |gg⟩)/√2
        // has concurrence max(0, (3p − 1)/2).
        for p in [0.2, 1.0 / 3.0, 0.5, 0.9] {
            let mut phi = CMatrix4::zeros();
            for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
                phi[(i, j)] = cr(0.5);
            }
            let werner = phi * cr(p) + CMatrix4::identity() * cr((1.0 - p) / 4.0);
            let expect = (0.0f64).max((3.0 * p - 1.0) / 2.0);
            assert_relative_eq!(
                wootters_concurrence(&werner).unwrap(),
                expect,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn wootters_rejects_malformed_input() {
        let mut skew = CMatrix4::identity() * cr(0.25);
        skew[(0, 1)] = cr(0.1); // not Hermitian
        assert!(wootters_concurrence(&skew).is_err());

        let double = CMatrix4::identity() * cr(0.5); // trace 2
        assert!(wootters_concurrence(&double).is_err());
    }

    #[test]
    fn closed_form_branches_match_examples() {
        // Pure entangled preparation at t = 0: C = C₁ = 2√(α(1−α)).
        let rho = entangled(0.36);
        assert_relative_eq!(concurrence_c1(&rho).unwrap(), 0.96, epsilon = 1e-12);
        assert_relative_eq!(xstate_concurrence(&rho).unwrap(), 0.96, epsilon = 1e-12);

        let half = entangled(0.5);
        assert_relative_eq!(concurrence_c1(&half).unwrap(), 1.0, epsilon = 1e-12);

        // No coherence, equal single-excitation populations 0.1:
        // C₁ = −0.2.
        let mut m = CMatrix4::zeros();
        m[(0, 0)] = cr(0.4);
        m[(1, 1)] = cr(0.1);
        m[(2, 2)] = cr(0.1);
        m[(3, 3)] = cr(0.4);
        let rho = CollectiveDensityMatrix::new(m).unwrap();
        assert_relative_eq!(concurrence_c1(&rho).unwrap(), -0.2, epsilon = 1e-12);

        // Pure symmetric state: C₂ = 1.
        let mut plus = CMatrix4::zeros();
        plus[(1, 1)] = cr(1.0);
        let plus = CollectiveDensityMatrix::new(plus).unwrap();
        assert_relative_eq!(concurrence_c2(&plus).unwrap(), 1.0, epsilon = 1e-12);

        // Mixed preparation at t = 0: C₂ = 2(1 − √(α(1−α)))/3.
        for alpha in [0.4, 0.5, 0.94] {
            let rho = mixed(alpha);
            let expect = 2.0 * (1.0 - (alpha * (1.0 - alpha)).sqrt()) / 3.0;
            assert_relative_eq!(concurrence_c2(&rho).unwrap(), expect, epsilon = 1e-12);
        }

        // Maximally mixed state carries no entanglement.
        let iso = CollectiveDensityMatrix::new(CMatrix4::identity() * cr(0.25)).unwrap();
        assert_relative_eq!(xstate_concurrence(&iso).unwrap(), 0.0);
    }

    #[test]
    fn xform_shape_is_enforced() {
        let mut m = CMatrix4::zeros();
        m[(0, 0)] = cr(0.4);
        m[(1, 1)] = cr(0.1);
        m[(2, 2)] = cr(0.1);
        m[(3, 3)] = cr(0.4);
        m[(0, 1)] = cr(1e-3);
        m[(1, 0)] = cr(1e-3);
        let rho = CollectiveDensityMatrix::new(m).unwrap();
        assert!(concurrence_c1(&rho).is_err());
        assert!(concurrence_c2(&rho).is_err());
        assert!(xstate_concurrence(&rho).is_err());
    }

    #[test]
    fn xstate_matches_wootters_along_evolution() {
        // The evolved states are rank-deficient at t = 0 (pure), where the
        // eigensolve inside the Wootters route turns O(machine-eps) noise
        // on the zero eigenvalues into O(√eps) ≈ 1e-8 spread after the
        // square root; full-rank random X-states agree to 1e-10 and are
        // exercised separately.
        let r = rates(1.0, 0.245445, 0.433150);
        let rho0 = entangled(0.25);
        for t in [0.0, 0.8, 3.0, 7.0] {
            let state = evolve_closed_form(&rho0, t, &r).unwrap();
            let direct = xstate_concurrence(&state).unwrap();
            let general = wootters_concurrence(&product_matrix(&state)).unwrap();
            assert!(
                (direct - general).abs() < 3e-8,
                "t = {t}: {direct} vs {general}"
            );
        }
    }

    #[test]
    fn entangled_death_time_formula() {
        // α = 0.8: √(α(1−α)) = 0.4 so the argument is 2 → t = ln 2/γ.
        let t = death_time_entangled(0.8, 1.0).unwrap().unwrap();
        assert_relative_eq!(t, std::f64::consts::LN_2, epsilon = 1e-14);
        // Rate scaling.
        let t2 = death_time_entangled(0.8, 2.0).unwrap().unwrap();
        assert_relative_eq!(t2, std::f64::consts::LN_2 / 2.0, epsilon = 1e-14);
        // At and below the threshold the state never dies.
        assert!(death_time_entangled(0.5, 1.0).unwrap().is_none());
        assert!(death_time_entangled(0.3, 1.0).unwrap().is_none());
        assert_relative_eq!(entangled_death_threshold(), 0.5);
        // Domain checks.
        assert!(death_time_entangled(-0.1, 1.0).is_err());
        assert!(death_time_entangled(0.8, 0.0).is_err());
    }

    #[test]
    fn revival_time_formula() {
        // γ = 1, Γ = 1/2, α = 1/4: (4/3)·ln 16.
        let t = revival_time(0.25, 1.0, 0.5).unwrap();
        assert_relative_eq!(t, 4.0 / 3.0 * 16.0f64.ln(), epsilon = 1e-14);
        assert!(revival_time(0.25, 1.0, 0.0).is_err());
        assert!(revival_time(0.25, 1.0, 1.0).is_err());
        // Negative Γ yields a negative (unphysical) estimate but is defined.
        assert!(revival_time(0.25, 1.0, -0.3).unwrap() < 0.0);
    }

    #[test]
    fn mixed_death_time_formula() {
        let t = death_time_mixed(0.5, 1.0).unwrap().unwrap();
        assert_relative_eq!(t, 0.501_616, epsilon = 1e-5);
        let t = death_time_mixed(1.0, 1.0).unwrap().unwrap();
        assert_relative_eq!(t, 0.188_231, epsilon = 1e-5);
        assert!(death_time_mixed(0.2, 1.0).unwrap().is_none());

        // The threshold is exactly the positive root of 2α² + 3α − 1.
        let thr = mixed_death_threshold();
        assert_relative_eq!(2.0 * thr * thr + 3.0 * thr - 1.0, 0.0, epsilon = 1e-14);
        assert!(death_time_mixed(thr + 1e-6, 1.0).unwrap().is_some());
        assert!(death_time_mixed(thr - 1e-6, 1.0).unwrap().is_none());
    }

    #[test]
    fn mixed_formula_disagrees_with_numeric_zero() {
        // The printed mixed-state death-time estimate does not locate the
        // numeric zero of C₂ along the actual evolution: for α = 1/2 the
        // formula gives ≈ 0.502/γ while C₂ crosses zero at ≈ 1.038/γ. Both
        // values are pinned here so any future change to either side is
        // caught. The exact crossing solves αx² − 2(1+α)x + (α+3) = 3 − ...
        // — equivalently x = [(1+α) − √(α² − α + 2)]/α with x = e^{−γt}.
        let alpha: f64 = 0.5;
        let formula = death_time_mixed(alpha, 1.0).unwrap().unwrap();
        let x = ((1.0 + alpha) - (alpha * alpha - alpha + 2.0f64).sqrt()) / alpha;
        let exact = -x.ln();
        assert_relative_eq!(exact, 1.037_79, epsilon = 1e-4);

        // Cross-check the root against the evolved state itself.
        let rho0 = mixed(alpha);
        let r = rates(1.0, 0.0, 0.0);
        let c2_at = |t: f64| {
            concurrence_c2(&evolve_closed_form(&rho0, t, &r).unwrap()).unwrap()
        };
        assert!(c2_at(exact - 1e-6) > 0.0);
        assert!(c2_at(exact + 1e-6) < 0.0);

        // And document the discrepancy.
        assert!((exact - formula).abs() > 0.5);
    }

    #[test]
    fn series_validation() {
        let good = vec![
            ConcurrenceSample {
                t: 0.0,
                concurrence: 0.5,
                c1_raw: 0.5,
                c2_raw: -0.1,
            },
            ConcurrenceSample {
                t: 1.0,
                concurrence: 0.2,
                c1_raw: 0.2,
                c2_raw: -0.2,
            },
        ];
        assert!(ConcurrenceSeries::from_samples(good.clone()).is_ok());

        let mut unsorted = good.clone();
        unsorted.swap(0, 1);
        assert!(ConcurrenceSeries::from_samples(unsorted).is_err());

        let mut inconsistent = good;
        inconsistent[0].concurrence = 0.9;
        assert!(ConcurrenceSeries::from_samples(inconsistent).is_err());

        assert!(ConcurrenceSeries::from_samples(vec![]).is_err());
    }

    #[test]
    fn independent_decay_death_detected_at_formula_time() {
        let rho0 = entangled(0.8);
        let r = rates(1.0, 0.0, 0.0);
        let times = uniform_times(20.0, 2001).unwrap();
        let series = ConcurrenceSeries::from_closed_form(&rho0, &r, &times).unwrap();

        // Sampled-only detection is accurate to the interpolation error.
        let report = detect_events(&series, 1e-6).unwrap();
        assert_eq!(report.deaths.len(), 1);
        assert!((report.deaths[0] - std::f64::consts::LN_2).abs() < 1e-4);
        assert!(report.revivals.is_empty());
        assert_eq!(report.dark_periods.len(), 1);
        assert_relative_eq!(report.dark_periods[0].1, 20.0);
        assert_relative_eq!(report.initial_concurrence, 0.8, epsilon = 1e-12);

        // Bisection on the closed form recovers the formula time sharply.
        let envelope = closed_form_envelope(&rho0, &r).unwrap();
        let refined = detect_events_with(&series, 1e-6, envelope).unwrap();
        assert!((refined.deaths[0] - std::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn collective_decay_death_and_revival() {
        // Frozen event times for α = 1/4 at the reference collective rate
        // Γ/γ = 0.245445 (separation 1.2 healing lengths): death 6.7156/γ,
        // revival 7.9223/γ.
        let rho0 = entangled(0.25);
        let r = rates(1.0, 0.245445, 0.433150);
        let times = uniform_times(12.0, 1201).unwrap();
        let series = ConcurrenceSeries::from_closed_form(&rho0, &r, &times).unwrap();
        let envelope = closed_form_envelope(&rho0, &r).unwrap();
        let report = detect_events_with(&series, 1e-6, envelope).unwrap();
        assert_eq!(report.deaths.len(), 1, "deaths: {:?}", report.deaths);
        assert_eq!(report.revivals.len(), 1, "revivals: {:?}", report.revivals);
        assert!((report.deaths[0] - 6.7156).abs() < 2e-3);
        assert!((report.revivals[0] - 7.9223).abs() < 2e-3);
        let (d, rv) = report.dark_periods[0];
        assert_relative_eq!(d, report.deaths[0]);
        assert_relative_eq!(rv, report.revivals[0]);
        // Events alternate.
        assert!(report.deaths[0] < report.revivals[0]);
    }

    #[test]
    fn subthreshold_decay_without_zero_is_not_a_death() {
        // α ≤ 1/2 under independent decay: the envelope stays positive for
        // all finite times even though the concurrence sinks below any
        // threshold — no event may be reported.
        let rho0 = entangled(0.45);
        let r = rates(1.0, 0.0, 0.0);
        let times = uniform_times(20.0, 2001).unwrap();
        let series = ConcurrenceSeries::from_closed_form(&rho0, &r, &times).unwrap();
        let report = detect_events(&series, 1e-6).unwrap();
        assert!(report.deaths.is_empty(), "deaths: {:?}", report.deaths);
        assert!(report.revivals.is_empty());
        assert!(report.dark_periods.is_empty());
    }

    #[test]
    fn revival_estimate_anticipates_detected_revival() {
        // The logarithmic revival estimate lands within ~20% of the
        // detected revival for the reference scenario; keep a generous
        // bound so the check pins the scale, not the approximation error.
        let gamma = 1.0;
        let cross = 0.245445;
        let estimate = revival_time(0.25, gamma, cross).unwrap();
        assert!((estimate - 7.9223).abs() / 7.9223 < 0.3);
    }
}
