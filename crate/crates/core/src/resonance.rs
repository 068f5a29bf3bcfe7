//! Numeric evaluation and inequality scanning for the resonance functions
//! and multiplier bounds that organize the interaction analysis.
//!
//! The pair form is `p_{(θ₀,θ₁)}(ξ,η) = θ₀⟨ξ⟩ - θ₁⟨ξ-η⟩` with
//! `m = ∇_ξ p = θ₀ ξ/⟨ξ⟩ - θ₁ (ξ-η)/⟨ξ-η⟩`; the four-sign form is
//! `p_Θ = θ₀⟨ξ⟩ - θ₁⟨ξ+η⟩ - θ₂⟨ξ+σ⟩ + θ₃⟨ξ+η+σ⟩`. Everything here is
//! pointwise arithmetic plus seeded sampling, so scans are deterministic
//! and reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirac::{Sign, SignTuple};
use crate::error::Error;
use crate::field::{littlewood_paley_scalar, ScalarField, SpinorField};
use crate::grid::{bracket, norm};
use crate::hartree::inner_density;
use crate::scalar::{r, Scalar, C};
use crate::Result;

/// `v(u) = u/⟨u⟩`, the group-velocity map.
#[inline]
pub fn velocity<T: Scalar>(u: [T; 3]) -> [T; 3] {
    let inv = bracket(u).recip();
    [u[0] * inv, u[1] * inv, u[2] * inv]
}

#[inline]
fn add<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
fn sub<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn scale<T: Scalar>(a: [T; 3], s: T) -> [T; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
fn dot<T: Scalar>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Value and analytic gradients of a resonance function at one frequency
/// configuration.
#[derive(Debug, Clone)]
pub struct ResonanceEval<T> {
    pub value: T,
    pub grad_xi: [T; 3],
    pub grad_eta: [T; 3],
    pub grad_sigma: Option<[T; 3]>,
}

/// Pair resonance `p_{(θ₀,θ₁)}(ξ,η) = θ₀⟨ξ⟩ - θ₁⟨ξ-η⟩`.
pub fn resonance_pair<T: Scalar>(
    xi: [T; 3],
    eta: [T; 3],
    theta0: Sign,
    theta1: Sign,
) -> ResonanceEval<T> {
    let t0: T = theta0.as_scalar();
    let t1: T = theta1.as_scalar();
    let shifted = sub(xi, eta);
    let value = t0 * bracket(xi) - t1 * bracket(shifted);
    let v_shifted = velocity(shifted);
    ResonanceEval {
        value,
        grad_xi: sub(scale(velocity(xi), t0), scale(v_shifted, t1)),
        grad_eta: scale(v_shifted, t1),
        grad_sigma: None,
    }
}

/// The multiplier `m(ξ,η) = ∇_ξ p_{(θ₀,θ₁)}`.
pub fn pair_multiplier<T: Scalar>(xi: [T; 3], eta: [T; 3], theta0: Sign, theta1: Sign) -> [T; 3] {
    resonance_pair(xi, eta, theta0, theta1).grad_xi
}

/// Four-sign resonance `p_Θ = θ₀⟨ξ⟩ - θ₁⟨ξ+η⟩ - θ₂⟨ξ+σ⟩ + θ₃⟨ξ+η+σ⟩`.
pub fn resonance_four<T: Scalar>(
    xi: [T; 3],
    eta: [T; 3],
    sigma: [T; 3],
    signs: SignTuple,
) -> ResonanceEval<T> {
    let [s0, s1, s2, s3] = signs.0;
    let (t0, t1, t2, t3): (T, T, T, T) = (
        s0.as_scalar(),
        s1.as_scalar(),
        s2.as_scalar(),
        s3.as_scalar(),
    );
    let a = add(xi, eta);
    let b = add(xi, sigma);
    let c = add(a, sigma);
    let value = t0 * bracket(xi) - t1 * bracket(a) - t2 * bracket(b) + t3 * bracket(c);
    let (va, vb, vc) = (velocity(a), velocity(b), velocity(c));
    let grad_xi = add(
        sub(scale(velocity(xi), t0), scale(va, t1)),
        sub(scale(vc, t3), scale(vb, t2)),
    );
    let grad_eta = sub(scale(vc, t3), scale(va, t1));
    let grad_sigma = sub(scale(vc, t3), scale(vb, t2));
    ResonanceEval {
        value,
        grad_xi,
        grad_eta,
        grad_sigma: Some(grad_sigma),
    }
}

/// Leading linear term of `p_Ξ` in η for aligned sign pairs:
/// `q_{(θ₀,θ₂)} = -η·(θ₀ ξ/⟨ξ⟩ - θ₂ (ξ+σ)/⟨ξ+σ⟩)`.
pub fn quadratic_leading_term<T: Scalar>(
    xi: [T; 3],
    eta: [T; 3],
    sigma: [T; 3],
    theta0: Sign,
    theta2: Sign,
) -> T {
    let t0: T = theta0.as_scalar();
    let t2: T = theta2.as_scalar();
    let zeta = sub(scale(velocity(xi), t0), scale(velocity(add(xi, sigma)), t2));
    -dot(eta, zeta)
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

fn sample_direction<T: Scalar>(rng: &mut ChaCha8Rng) -> [T; 3] {
    loop {
        let p = [
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        ];
        let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if n2 > 1e-6 && n2 <= 1.0 {
            let inv = n2.sqrt().recip();
            return [r(p[0] * inv), r(p[1] * inv), r(p[2] * inv)];
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen::<f64>() * (hi.ln() - lo.ln()) + lo.ln()).exp()
}

/// Scan of the aligned-sign multiplier magnitude: the ratio
/// `|m(ξ,η)|·⟨ξ⟩/|η|` over samples with `|η| ≤ |ξ|/8`, plus
/// finite-difference first-derivative variants.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplierBoundReport {
    pub samples: usize,
    pub ratio_sup: f64,
    pub ratio_inf: f64,
    /// sup of |∇_ξ m|·⟨ξ⟩²/|η| (finite differences).
    pub grad_xi_sup: f64,
    /// sup of |∇_η m|·⟨ξ⟩ (finite differences).
    pub grad_eta_sup: f64,
}

pub fn scan_m_bound(samples: usize, seed: u64) -> MultiplierBoundReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup = f64::MIN;
    let mut inf = f64::MAX;
    let mut gx_sup = 0.0f64;
    let mut ge_sup = 0.0f64;
    for _ in 0..samples {
        let radius = log_uniform(&mut rng, 0.5, 50.0);
        let dir = sample_direction::<f64>(&mut rng);
        let xi = scale(dir, radius);
        let eta_len = rng.gen::<f64>() * radius / 8.0 + 1e-6;
        let eta_dir = sample_direction::<f64>(&mut rng);
        let eta = scale(eta_dir, eta_len);
        let theta = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
        let m = pair_multiplier(xi, eta, theta, theta);
        let ratio = norm(m) * bracket(xi) / norm(eta);
        sup = sup.max(ratio);
        inf = inf.min(ratio);

        let h = 1e-5 * radius.max(1.0);
        for axis in 0..3 {
            let mut dv = [0.0; 3];
            dv[axis] = h;
            let mp = pair_multiplier(add(xi, dv), eta, theta, theta);
            let mm = pair_multiplier(sub(xi, dv), eta, theta, theta);
            let d = norm(sub(mp, mm)) / (2.0 * h);
            gx_sup = gx_sup.max(d * bracket(xi).powi(2) / norm(eta));
            let ep = pair_multiplier(xi, add(eta, dv), theta, theta);
            let em = pair_multiplier(xi, sub(eta, dv), theta, theta);
            let de = norm(sub(ep, em)) / (2.0 * h);
            ge_sup = ge_sup.max(de * bracket(xi));
        }
    }
    MultiplierBoundReport {
        samples,
        ratio_sup: sup,
        ratio_inf: inf,
        grad_xi_sup: gx_sup,
        grad_eta_sup: ge_sup,
    }
}

/// Scan of the velocity-separation lower bound
/// `|η/⟨η⟩ ± σ/⟨σ⟩| ≳ ||η|-|σ|| / (min⟨·⟩ · max⟨·⟩²)`.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseLowerBoundReport {
    pub samples: usize,
    pub evaluated: usize,
    pub min_ratio: f64,
    /// Samples where the reference scale vanished but the left side did
    /// not (reported as unbounded ratios, not minima).
    pub sentinel_count: usize,
}

pub fn phase_lower_bound_check(samples: usize, seed: u64) -> PhaseLowerBoundReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::MAX;
    let mut evaluated = 0usize;
    let mut sentinels = 0usize;
    for _ in 0..samples {
        let eta = scale(
            sample_direction::<f64>(&mut rng),
            log_uniform(&mut rng, 1e-2, 1e2),
        );
        let sigma = scale(
            sample_direction::<f64>(&mut rng),
            log_uniform(&mut rng, 1e-2, 1e2),
        );
        for pm in [1.0f64, -1.0] {
            let lhs = norm(add(velocity(eta), scale(velocity(sigma), pm)));
            let be = bracket(eta);
            let bs = bracket(sigma);
            let rhs = (norm(eta) - norm(sigma)).abs() / (be.min(bs) * be.max(bs).powi(2));
            if rhs < 1e-14 {
                if lhs < 1e-12 {
                    // Degenerate configuration (e.g. η = ∓σ): excluded.
                    continue;
                }
                sentinels += 1;
                continue;
            }
            evaluated += 1;
            min_ratio = min_ratio.min(lhs / rhs);
        }
    }
    PhaseLowerBoundReport {
        samples,
        evaluated,
        min_ratio,
        sentinel_count: sentinels,
    }
}

/// Scan of the quadratic remainder `|p_Ξ - q_{(θ₀,θ₂)}| / |η|²` for small η.
#[derive(Debug, Clone, Serialize)]
pub struct QuadraticRemainderReport {
    pub samples: usize,
    pub eta_scale: f64,
    pub max_ratio: f64,
}

pub fn quadratic_remainder_check(samples: usize, eta_scale: f64, seed: u64) -> QuadraticRemainderReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = 0.0f64;
    for _ in 0..samples {
        let xi = scale(sample_direction::<f64>(&mut rng), rng.gen::<f64>());
        let sigma = scale(sample_direction::<f64>(&mut rng), rng.gen::<f64>());
        let eta = scale(sample_direction::<f64>(&mut rng), eta_scale);
        for (t0, t2) in [
            (Sign::Plus, Sign::Plus),
            (Sign::Plus, Sign::Minus),
            (Sign::Minus, Sign::Plus),
            (Sign::Minus, Sign::Minus),
        ] {
            let signs = SignTuple([t0, t0, t2, t2]);
            let p = resonance_four(xi, eta, sigma, signs).value;
            let q = quadratic_leading_term(xi, eta, sigma, t0, t2);
            let ratio = (p - q).abs() / (eta_scale * eta_scale);
            max_ratio = max_ratio.max(ratio);
        }
    }
    QuadraticRemainderReport {
        samples,
        eta_scale,
        max_ratio,
    }
}

// ---------------------------------------------------------------------------
// Bilinear null gain on fields
// ---------------------------------------------------------------------------

/// `⟨Mψ₁, ψ₂⟩ - ⟨ψ₁, Mψ₂⟩` for a real scalar multiplier `M` (physical
/// output). With ψ₁ = ψ₂ and M = 1 this vanishes identically.
pub fn commutator_density<T: Scalar>(
    psi1: &SpinorField<T>,
    psi2: &SpinorField<T>,
    symbol: impl Fn([T; 3]) -> T + Sync + Copy,
) -> Result<ScalarField<T>> {
    let mut m1 = psi1.clone();
    m1.apply_multiplier(|xi| C::new(symbol(xi), T::zero()))?;
    let m1 = m1.physical();
    let mut m2 = psi2.clone();
    m2.apply_multiplier(|xi| C::new(symbol(xi), T::zero()))?;
    let m2 = m2.physical();
    let p1 = psi1.clone().physical();
    let p2 = psi2.clone().physical();
    let first = inner_density(&m1, &p2)?;
    let second = inner_density(&p1, &m2)?;
    let mut out = first;
    for (a, b) in out.values.iter_mut().zip(second.values.iter()) {
        *a -= *b;
    }
    Ok(out)
}

/// Small-N scaling of shell-localized bilinear densities: the mixed-sign
/// pairing `⟨Π₊ψ, Π₋ψ⟩` gains one power of N over the same-sign pairing,
/// and the dispersion-weight commutator shows the same gain.
#[derive(Debug, Clone, Serialize)]
pub struct NullGainReport {
    pub scales: Vec<f64>,
    pub mixed_sup: Vec<f64>,
    pub same_sup: Vec<f64>,
    pub commutator_sup: Vec<f64>,
    pub mixed_exponent: f64,
    pub same_exponent: f64,
    pub commutator_exponent: f64,
}

pub fn bilinear_null_gain<T: Scalar>(psi: &SpinorField<T>, scales: &[T]) -> Result<NullGainReport> {
    let grid = &psi.grid;
    let lo = grid.dxi() * r(2.0);
    let hi = grid.xi_max_axis();
    for &s in scales {
        if s < lo || s > hi {
            return Err(Error::InvalidConfig {
                key: "scales".into(),
                reason: format!(
                    "dyadic scale {} outside resolved range [{}, {}]",
                    s.to_f64_lossy(),
                    lo.to_f64_lossy(),
                    hi.to_f64_lossy()
                ),
            });
        }
    }
    let plus = crate::dirac::project(psi, Sign::Plus).physical();
    let minus = crate::dirac::project(psi, Sign::Minus).physical();
    let mixed = inner_density(&plus, &minus)?;
    let mut same = inner_density(&plus, &plus)?;
    // Use the full same-sign density ⟨ψ,ψ⟩-style pairing for the baseline.
    let mm = inner_density(&minus, &minus)?;
    for (a, b) in same.values.iter_mut().zip(mm.values.iter()) {
        *a += *b;
    }
    let comm = commutator_density(psi, psi, |xi| bracket(xi))?;

    let sup_of = |f: &ScalarField<T>, s: T| -> f64 {
        let mut shell = littlewood_paley_scalar(f, s);
        shell.to_physical();
        shell.linf_norm().to_f64_lossy()
    };
    let mut report = NullGainReport {
        scales: scales.iter().map(|s| s.to_f64_lossy()).collect(),
        mixed_sup: vec![],
        same_sup: vec![],
        commutator_sup: vec![],
        mixed_exponent: 0.0,
        same_exponent: 0.0,
        commutator_exponent: 0.0,
    };
    for &s in scales {
        report.mixed_sup.push(sup_of(&mixed, s));
        report.same_sup.push(sup_of(&same, s));
        report.commutator_sup.push(sup_of(&comm, s));
    }
    let fit = |vals: &[f64]| -> f64 {
        let xs: Vec<f64> = report.scales.iter().map(|s| s.ln()).collect();
        let ys: Vec<f64> = vals.iter().map(|v| v.max(1e-300).ln()).collect();
        crate::fit::linear_fit(&xs, &ys).0
    };
    report.mixed_exponent = fit(&report.mixed_sup);
    report.same_exponent = fit(&report.same_sup);
    report.commutator_exponent = fit(&report.commutator_sup);
    Ok(report)
}
