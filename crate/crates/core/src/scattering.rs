//! Interaction profiles, the accumulated log-phase correction, corrected
//! profiles, and the drift metrics that quantify profile convergence.
//!
//! The profile of branch θ is `f̂_θ(t,ξ) = e^{θit⟨ξ⟩} ψ̂_θ(t,ξ)`; it is
//! constant in time for free flow. For the interacting equation its phase
//! grows like `B(t,θξ)·log`-rate, where the per-branch parts are
//!
//! ```text
//! B_θ(t,u) = c₁/(2π)³ ∫₀ᵗ ∫ |u/⟨u⟩ ∓ θσ/⟨σ⟩|⁻¹ |ψ̂_θ(s,σ)|² dσ ρ(s^{-e}u)/⟨s⟩ ds,
//! ```
//!
//! accumulated here as a trapezoid rule over snapshot times with the
//! σ-integral realized as a lattice sum (singular nodes skipped and their
//! weight reported). Both kernel sign conventions (`∓`) are accumulated in
//! one pass; which one drives an analysis is selected by [`KernelSign`].
//!
//! The corrected profile is `g_θ(t,ξ) = e^{-iB(t,θξ)} f̂_θ(t,ξ)`: the sign
//! in the exponent is fixed by requiring that the correction cancel the
//! measured phase growth (a positive potential advances the phase, so the
//! correction must rotate it back). `|g_θ| = |f̂_θ|` pointwise.
//!
//! Dropping the Coulomb zero mode makes every potential mean-free, which
//! differs from the whole-space potential by a spatially uniform phase.
//! Drift metrics therefore align snapshots by the phase at a reference
//! lattice node before differencing; slope fits use phases relative to the
//! same reference node. Both are exactly invariant under a common uniform
//! phase.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dirac::{project, Sign};
use crate::error::Error;
use crate::field::SpinorField;
use crate::fit::{linear_fit, unwrap_phases};
use crate::grid::{bracket, bump_radial, norm, FourierGrid};
use crate::scalar::{cis, r, Scalar, C};
use crate::Result;

/// Sign convention inside the interaction kernel `|v(ξ) ∓ θ v(σ)|⁻¹`.
/// The two appear in different places in the underlying analysis; both are
/// accumulated and compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelSign {
    Minus,
    Plus,
}

impl KernelSign {
    pub fn label(self) -> &'static str {
        match self {
            KernelSign::Minus => "minus",
            KernelSign::Plus => "plus",
        }
    }
}

/// Whether the σ-weights evolve with the run or stay frozen at the first
/// observed profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileMode {
    Evolving,
    Frozen,
}

/// Threshold below which a kernel denominator counts as singular and the
/// node is skipped (its weight is reported instead).
const SINGULAR_DENOMINATOR: f64 = 1e-8;

/// Relative weight floor for the σ-sum support; nodes carrying less than
/// this fraction of the peak weight are dropped from the lattice sum.
const SIGMA_WEIGHT_FLOOR: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

/// Spectral snapshot of one branch's interaction profile.
#[derive(Debug, Clone)]
pub struct ProfileSnapshot<T: Scalar> {
    pub time: T,
    pub sign: Sign,
    pub field: SpinorField<T>,
}

/// `f̂_θ(t,ξ) = e^{θit⟨ξ⟩} (Π_θ ψ)^(ξ)`.
pub fn interaction_profile<T: Scalar>(
    psi: &SpinorField<T>,
    t: T,
    sign: Sign,
) -> ProfileSnapshot<T> {
    let mut field = project(psi, sign);
    field.to_spectral();
    let th: T = sign.as_scalar();
    field
        .apply_multiplier(|xi| cis(th * t * bracket(xi)))
        .expect("profile phase is finite");
    ProfileSnapshot { time: t, sign, field }
}

// ---------------------------------------------------------------------------
// Phase tables
// ---------------------------------------------------------------------------

/// Accumulated `B` on the wavenumber lattice for one kernel convention,
/// split into the per-branch parts.
#[derive(Debug, Clone)]
pub struct PhaseTable<T: Scalar> {
    pub grid: Arc<FourierGrid<T>>,
    pub kernel_sign: KernelSign,
    pub cutoff_exponent: T,
    pub b_plus: Vec<T>,
    pub b_minus: Vec<T>,
    /// Snapshot times the trapezoid accumulation has seen.
    pub times: Vec<f64>,
    /// Worst per-node fraction of σ-weight skipped at singular denominators.
    pub skipped_weight_max: f64,
}

impl<T: Scalar> PhaseTable<T> {
    fn zeros(grid: &Arc<FourierGrid<T>>, kernel_sign: KernelSign, cutoff_exponent: T) -> Self {
        Self {
            grid: grid.clone(),
            kernel_sign,
            cutoff_exponent,
            b_plus: vec![T::zero(); grid.node_count()],
            b_minus: vec![T::zero(); grid.node_count()],
            times: vec![],
            skipped_weight_max: 0.0,
        }
    }

    pub fn time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// `B(t,ξ) = B₊(t,ξ) + B₋(t,ξ)` at a lattice node.
    pub fn total_at(&self, node: usize) -> T {
        self.b_plus[node] + self.b_minus[node]
    }

    /// `B(t, θξ)`: the branch-dependent lookup used by the corrected
    /// profile; θ = minus reads the negated node.
    pub fn total_at_signed(&self, node: usize, sign: Sign) -> T {
        match sign {
            Sign::Plus => self.total_at(node),
            Sign::Minus => self.total_at(self.grid.neg_index(node)),
        }
    }
}

/// The cutoff factor `ρ(s^{-e}ξ)`, with the `s → 0⁺` limit (1 at ξ = 0,
/// else 0) handled explicitly.
fn cutoff_factor<T: Scalar>(s: T, e: T, xi_norm: T) -> T {
    if xi_norm == T::zero() {
        return T::one();
    }
    if s <= T::zero() {
        return T::zero();
    }
    bump_radial(s.powf(-e) * xi_norm)
}

struct SigmaSupport<T> {
    vx: Vec<T>,
    vy: Vec<T>,
    vz: Vec<T>,
    w_plus: Vec<T>,
    w_minus: Vec<T>,
}

fn spinor_weight<T: Scalar>(f: &SpinorField<T>, i: usize) -> T {
    f.comps[0][i].norm_sqr()
        + f.comps[1][i].norm_sqr()
        + f.comps[2][i].norm_sqr()
        + f.comps[3][i].norm_sqr()
}

fn sigma_support<T: Scalar>(
    grid: &FourierGrid<T>,
    f_plus: &SpinorField<T>,
    f_minus: &SpinorField<T>,
) -> SigmaSupport<T> {
    let nodes = grid.node_count();
    let mut peak = T::zero();
    for i in 0..nodes {
        peak = peak.max(spinor_weight(f_plus, i) + spinor_weight(f_minus, i));
    }
    let floor = peak * r(SIGMA_WEIGHT_FLOOR);
    let mut out = SigmaSupport {
        vx: vec![],
        vy: vec![],
        vz: vec![],
        w_plus: vec![],
        w_minus: vec![],
    };
    for i in 0..nodes {
        let wp = spinor_weight(f_plus, i);
        let wm = spinor_weight(f_minus, i);
        if wp + wm >= floor {
            let sigma = grid.xi_at(i);
            let inv_br = bracket(sigma).recip();
            out.vx.push(sigma[0] * inv_br);
            out.vy.push(sigma[1] * inv_br);
            out.vz.push(sigma[2] * inv_br);
            out.w_plus.push(wp);
            out.w_minus.push(wm);
        }
    }
    out
}

/// Rate integrands at one wavenumber: `G_θ(ξ)` for both kernel signs, plus
/// the fraction of σ-weight skipped at singular denominators.
#[derive(Debug, Clone, Copy, Default)]
pub struct RateSample<T> {
    pub minus_plus: T,
    pub minus_minus: T,
    pub plus_plus: T,
    pub plus_minus: T,
    pub skipped_fraction: f64,
}

fn rate_at<T: Scalar>(
    v_xi: [T; 3],
    support: &SigmaSupport<T>,
    prefactor: T,
) -> RateSample<T> {
    let thresh2 = r::<T>(SINGULAR_DENOMINATOR * SINGULAR_DENOMINATOR);
    let mut am = T::zero(); // minus variant, θ = +  : |v(ξ) - v(σ)|⁻¹ w₊
    let mut bm = T::zero(); // minus variant, θ = -  : |v(ξ) + v(σ)|⁻¹ w₋
    let mut ap = T::zero(); // plus variant,  θ = +  : |v(ξ) + v(σ)|⁻¹ w₊
    let mut bp = T::zero(); // plus variant,  θ = -  : |v(ξ) - v(σ)|⁻¹ w₋
    let mut skipped = T::zero();
    let mut total = T::zero();
    let m = support.vx.len();
    for k in 0..m {
        let dxm = v_xi[0] - support.vx[k];
        let dym = v_xi[1] - support.vy[k];
        let dzm = v_xi[2] - support.vz[k];
        let dxp = v_xi[0] + support.vx[k];
        let dyp = v_xi[1] + support.vy[k];
        let dzp = v_xi[2] + support.vz[k];
        let d2m = dxm * dxm + dym * dym + dzm * dzm;
        let d2p = dxp * dxp + dyp * dyp + dzp * dzp;
        let wp = support.w_plus[k];
        let wm = support.w_minus[k];
        total += wp + wm;
        if d2m <= thresh2 {
            skipped += wp + wm;
        } else {
            let inv = d2m.sqrt().recip();
            am += wp * inv;
            bp += wm * inv;
        }
        if d2p <= thresh2 {
            skipped += wp + wm;
        } else {
            let inv = d2p.sqrt().recip();
            bm += wm * inv;
            ap += wp * inv;
        }
    }
    RateSample {
        minus_plus: am * prefactor,
        minus_minus: bm * prefactor,
        plus_plus: ap * prefactor,
        plus_minus: bp * prefactor,
        skipped_fraction: if total > T::zero() {
            (skipped / total).to_f64_lossy()
        } else {
            0.0
        },
    }
}

/// Evaluate the σ-lattice rate integrand at arbitrary wavenumbers from one
/// pair of branch profiles (used for slope predictions).
pub fn rate_at_wavenumbers<T: Scalar>(
    grid: &Arc<FourierGrid<T>>,
    c1: T,
    f_plus: &SpinorField<T>,
    f_minus: &SpinorField<T>,
    wavenumbers: &[[T; 3]],
) -> Vec<RateSample<T>> {
    let support = sigma_support(grid, f_plus, f_minus);
    let two_pi = r::<T>(2.0) * T::PI();
    let prefactor = c1 / (two_pi * two_pi * two_pi) * grid.dxi3();
    wavenumbers
        .iter()
        .map(|&xi| {
            let inv_br = bracket(xi).recip();
            rate_at([xi[0] * inv_br, xi[1] * inv_br, xi[2] * inv_br], &support, prefactor)
        })
        .collect()
}

/// Incremental trapezoid accumulation of both kernel-sign tables over the
/// snapshot sequence of a run.
#[derive(Debug)]
pub struct PhaseAccumulator<T: Scalar> {
    grid: Arc<FourierGrid<T>>,
    c1: T,
    cutoff_exponent: T,
    profile_mode: ProfileMode,
    /// Lattice nodes inside the cutoff support at the final time; `B` is
    /// identically zero beyond them because `ρ(s^{-e}ξ)` vanishes there for
    /// every s ≤ t_final.
    support_nodes: Vec<usize>,
    pub minus: PhaseTable<T>,
    pub plus: PhaseTable<T>,
    last: Option<LastEval<T>>,
    frozen_weights: Option<(SpinorField<T>, SpinorField<T>)>,
    checkpoint_times: Vec<f64>,
    checkpoints: Vec<(f64, PhaseTable<T>, PhaseTable<T>)>,
}

#[derive(Debug)]
struct LastEval<T> {
    time: T,
    rates: Vec<RateSample<T>>,
}

impl<T: Scalar> PhaseAccumulator<T> {
    pub fn new(
        grid: &Arc<FourierGrid<T>>,
        c1: T,
        cutoff_exponent: T,
        t_final: T,
        profile_mode: ProfileMode,
    ) -> Self {
        // ρ(s^{-e}ξ) vanishes for |ξ| ≥ 2·s^e; take the widest support over
        // the run.
        let t_cap = t_final.max(T::one());
        let radius = r::<T>(2.0) * t_cap.powf(cutoff_exponent);
        let support_nodes: Vec<usize> = (0..grid.node_count())
            .filter(|&i| norm(grid.xi_at(i)) < radius)
            .collect();
        Self {
            grid: grid.clone(),
            c1,
            cutoff_exponent,
            profile_mode,
            support_nodes,
            minus: PhaseTable::zeros(grid, KernelSign::Minus, cutoff_exponent),
            plus: PhaseTable::zeros(grid, KernelSign::Plus, cutoff_exponent),
            last: None,
            frozen_weights: None,
            checkpoint_times: vec![],
            checkpoints: vec![],
        }
    }

    /// Request table copies whenever accumulation passes these times.
    pub fn checkpoint_at(&mut self, times: &[T]) {
        self.checkpoint_times = times.iter().map(|t| t.to_f64_lossy()).collect();
    }

    pub fn table(&self, sign: KernelSign) -> &PhaseTable<T> {
        match sign {
            KernelSign::Minus => &self.minus,
            KernelSign::Plus => &self.plus,
        }
    }

    /// Table copies captured at a checkpoint time.
    pub fn checkpoint(&self, time: f64, sign: KernelSign) -> Option<&PhaseTable<T>> {
        self.checkpoints
            .iter()
            .find(|(t, _, _)| (t - time).abs() < 1e-9)
            .map(|(_, m, p)| match sign {
                KernelSign::Minus => m,
                KernelSign::Plus => p,
            })
    }

    /// Feed the branch profiles at snapshot time `s`; the first call sets
    /// the baseline, later calls add one trapezoid panel per call.
    pub fn observe(&mut self, s: T, f_plus: &SpinorField<T>, f_minus: &SpinorField<T>) {
        if self.profile_mode == ProfileMode::Frozen && self.frozen_weights.is_none() {
            self.frozen_weights = Some((f_plus.clone(), f_minus.clone()));
        }
        let (wp, wm): (&SpinorField<T>, &SpinorField<T>) = match self.profile_mode {
            ProfileMode::Evolving => (f_plus, f_minus),
            ProfileMode::Frozen => {
                let (a, b) = self.frozen_weights.as_ref().unwrap();
                (a, b)
            }
        };
        let support = sigma_support(&self.grid, wp, wm);
        let two_pi = r::<T>(2.0) * T::PI();
        let prefactor = self.c1 / (two_pi * two_pi * two_pi) * self.grid.dxi3();
        let grid = self.grid.clone();
        let rates: Vec<RateSample<T>> = self
            .support_nodes
            .par_iter()
            .map(|&node| {
                let xi = grid.xi_at(node);
                let inv_br = bracket(xi).recip();
                rate_at(
                    [xi[0] * inv_br, xi[1] * inv_br, xi[2] * inv_br],
                    &support,
                    prefactor,
                )
            })
            .collect();

        let skipped = rates
            .iter()
            .map(|r| r.skipped_fraction)
            .fold(0.0f64, f64::max);
        self.minus.skipped_weight_max = self.minus.skipped_weight_max.max(skipped);
        self.plus.skipped_weight_max = self.plus.skipped_weight_max.max(skipped);

        if let Some(prev) = &self.last {
            let ds = s - prev.time;
            assert!(ds > T::zero(), "snapshots must advance in time");
            let e = self.cutoff_exponent;
            let half = r::<T>(0.5);
            for (slot, &node) in self.support_nodes.iter().enumerate() {
                let xi_norm = norm(self.grid.xi_at(node));
                let w_prev =
                    cutoff_factor(prev.time, e, xi_norm) / bracket_scalar(prev.time);
                let w_now = cutoff_factor(s, e, xi_norm) / bracket_scalar(s);
                let old = &prev.rates[slot];
                let new = &rates[slot];
                self.minus.b_plus[node] +=
                    half * ds * (old.minus_plus * w_prev + new.minus_plus * w_now);
                self.minus.b_minus[node] +=
                    half * ds * (old.minus_minus * w_prev + new.minus_minus * w_now);
                self.plus.b_plus[node] +=
                    half * ds * (old.plus_plus * w_prev + new.plus_plus * w_now);
                self.plus.b_minus[node] +=
                    half * ds * (old.plus_minus * w_prev + new.plus_minus * w_now);
            }
        }
        self.minus.times.push(s.to_f64_lossy());
        self.plus.times.push(s.to_f64_lossy());
        self.last = Some(LastEval { time: s, rates });

        let sf = s.to_f64_lossy();
        if self
            .checkpoint_times
            .iter()
            .any(|t| (t - sf).abs() < 1e-9)
        {
            self.checkpoints
                .push((sf, self.minus.clone(), self.plus.clone()));
        }
    }
}

fn bracket_scalar<T: Scalar>(s: T) -> T {
    (T::one() + s * s).sqrt()
}

// ---------------------------------------------------------------------------
// Corrected profiles and drift metrics
// ---------------------------------------------------------------------------

/// `g_θ(t,ξ) = e^{-iB(t,θξ)} f̂_θ(t,ξ)`; the table must be accumulated
/// exactly through the snapshot time.
pub fn corrected_profile<T: Scalar>(
    snapshot: &ProfileSnapshot<T>,
    table: &PhaseTable<T>,
) -> Result<SpinorField<T>> {
    let snap_t = snapshot.time.to_f64_lossy();
    if (snap_t - table.time()).abs() > 1e-9 {
        return Err(Error::TimeMismatch {
            snapshot: snap_t,
            table: table.time(),
        });
    }
    let mut out = snapshot.field.clone();
    out.to_spectral();
    let sign = snapshot.sign;
    let nodes = out.grid.node_count();
    for i in 0..nodes {
        let b = table.total_at_signed(i, sign);
        if b != T::zero() {
            let factor = cis(-b);
            for c in 0..4 {
                out.comps[c][i] *= factor;
            }
        }
    }
    Ok(out)
}

/// Component with the largest modulus at a node (used to fix the gauge
/// alignment component once per analysis).
pub fn dominant_component<T: Scalar>(field: &SpinorField<T>, node: usize) -> usize {
    (0..4)
        .max_by(|&a, &b| {
            field.comps[a][node]
                .norm()
                .partial_cmp(&field.comps[b][node].norm())
                .unwrap()
        })
        .unwrap()
}

/// Remove the spatially uniform gauge phase: multiply the snapshot by the
/// unit conjugate of its value at the reference node (given component).
pub fn align_gauge<T: Scalar>(field: &SpinorField<T>, ref_node: usize, comp: usize) -> SpinorField<T> {
    let v = field.comps[comp][ref_node];
    let mut out = field.clone();
    let mag = v.norm();
    if mag > T::zero() {
        out.scale(v.conj() / C::new(mag, T::zero()));
    }
    out
}

/// `max_ξ ⟨ξ⟩^w |a(ξ) - b(ξ)|` over the lattice (spectral snapshots).
pub fn drift_metric<T: Scalar>(a: &SpinorField<T>, b: &SpinorField<T>, weight: T) -> T {
    assert_eq!(a.grid.node_count(), b.grid.node_count());
    let g = a.grid.clone();
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .chunks(8192)
        .map(|idx| {
            idx.into_iter()
                .map(|i| {
                    let mut d2 = T::zero();
                    for c in 0..4 {
                        d2 += (a.comps[c][i] - b.comps[c][i]).norm_sqr();
                    }
                    bracket(g.xi_at(i)).powf(weight) * d2.sqrt()
                })
                .fold(T::zero(), T::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(T::zero(), T::max)
}

/// Gauge-aligned drift between two spectral snapshots.
pub fn drift_metric_aligned<T: Scalar>(
    a: &SpinorField<T>,
    b: &SpinorField<T>,
    weight: T,
    ref_node: usize,
    comp: usize,
) -> T {
    let aa = align_gauge(a, ref_node, comp);
    let bb = align_gauge(b, ref_node, comp);
    drift_metric(&aa, &bb, weight)
}

// ---------------------------------------------------------------------------
// Log-phase slope
// ---------------------------------------------------------------------------

/// Relative-phase history of one lattice node against a reference node,
/// sampled at snapshot times.
#[derive(Debug, Clone)]
pub struct PhaseTrack {
    pub node: usize,
    pub ref_node: usize,
    pub comp: usize,
    pub sign: Sign,
    /// `(t, Re z, Im z)` with `z = f̂(t,ξ*)·conj(f̂(t,ξ_ref))` in the fixed
    /// component.
    pub samples: Vec<(f64, f64, f64)>,
}

impl PhaseTrack {
    pub fn new(node: usize, ref_node: usize, comp: usize, sign: Sign) -> Self {
        Self {
            node,
            ref_node,
            comp,
            sign,
            samples: vec![],
        }
    }

    pub fn push<T: Scalar>(&mut self, snapshot: &ProfileSnapshot<T>) {
        debug_assert_eq!(snapshot.sign, self.sign);
        let z = snapshot.field.comps[self.comp][self.node]
            * snapshot.field.comps[self.comp][self.ref_node].conj();
        self.samples
            .push((snapshot.time.to_f64_lossy(), z.re.to_f64_lossy(), z.im.to_f64_lossy()));
    }

    /// Least-squares slope of the unwrapped relative phase against `log t`
    /// over `[t_lo, t_hi]`.
    pub fn measured_slope(&self, t_lo: f64, t_hi: f64) -> Result<f64> {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|(t, _, _)| *t >= t_lo && *t <= t_hi)
            .map(|&(t, re, img)| (t, img.atan2(re)))
            .collect();
        if pts.len() < 5 {
            return Err(Error::InsufficientSnapshots {
                need: 5,
                have: pts.len(),
            });
        }
        let mut phases: Vec<f64> = pts.iter().map(|p| p.1).collect();
        unwrap_phases(&mut phases, 0.15)?;
        let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
        Ok(linear_fit(&xs, &phases).0)
    }
}

/// Slope of `arg f̂_θ(t,ξ*)` against `log t` implied by the accumulated
/// phase-rate integrand, evaluated from one profile pair (normally the
/// final snapshot) and differenced against the reference node.
#[allow(clippy::too_many_arguments)]
pub fn predicted_log_phase_slope<T: Scalar>(
    grid: &Arc<FourierGrid<T>>,
    c1: T,
    kernel_sign: KernelSign,
    cutoff_exponent: T,
    f_plus: &SpinorField<T>,
    f_minus: &SpinorField<T>,
    t_eval: T,
    sign: Sign,
    node: usize,
    ref_node: usize,
) -> f64 {
    let lookup = |i: usize| match sign {
        Sign::Plus => i,
        Sign::Minus => grid.neg_index(i),
    };
    let xi_a = grid.xi_at(lookup(node));
    let xi_b = grid.xi_at(lookup(ref_node));
    let rates = rate_at_wavenumbers(grid, c1, f_plus, f_minus, &[xi_a, xi_b]);
    let total = |s: &RateSample<T>| match kernel_sign {
        KernelSign::Minus => s.minus_plus + s.minus_minus,
        KernelSign::Plus => s.plus_plus + s.plus_minus,
    };
    let e = cutoff_exponent;
    let g_a = total(&rates[0]) * cutoff_factor(t_eval, e, norm(xi_a));
    let g_b = total(&rates[1]) * cutoff_factor(t_eval, e, norm(xi_b));
    // d(arg)/d log t = t · ∂_t B = t/⟨t⟩ · G at the evaluation time.
    let t_over_bracket = t_eval / bracket_scalar(t_eval);
    ((g_a - g_b) * t_over_bracket).to_f64_lossy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Representation;
    use crate::propagator::free_dirac;

    fn grid(n: usize, l: f64) -> Arc<FourierGrid<f64>> {
        FourierGrid::make(n, l).unwrap()
    }

    fn smooth_state(g: &Arc<FourierGrid<f64>>) -> SpinorField<f64> {
        let mut f = SpinorField::random_smooth(g, 31, 1.0);
        f.scale(C::new(0.05, 0.0));
        f.physical()
    }

    #[test]
    fn profile_at_time_zero_is_projected_data() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let prof = interaction_profile(&psi, 0.0, Sign::Plus);
        let direct = project(&psi, Sign::Plus).spectral();
        assert!(crate::field::l2_distance(&prof.field, &direct) < 1e-13 * direct.l2_norm());
    }

    #[test]
    fn profile_is_static_under_free_flow() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let p0 = interaction_profile(&psi, 0.0, Sign::Plus);
        let norm0 = p0.field.l2_norm();
        for &t in &[0.7, 2.3, 4.9] {
            let evolved = free_dirac(&psi, t).physical();
            let pt = interaction_profile(&evolved, t, Sign::Plus);
            assert!(crate::field::l2_distance(&pt.field, &p0.field) < 1e-12 * norm0);
            assert!((pt.field.l2_norm() - norm0).abs() < 1e-12 * norm0);
        }
    }

    #[test]
    fn zero_profile_gives_zero_increment() {
        let g = grid(12, 10.0);
        let zero = SpinorField::zeros(&g, Representation::Spectral);
        let mut acc = PhaseAccumulator::new(&g, 0.08, 0.01, 8.0, ProfileMode::Evolving);
        acc.observe(0.0, &zero, &zero);
        acc.observe(1.0, &zero, &zero);
        assert!(acc.minus.b_plus.iter().all(|&b| b == 0.0));
        assert!(acc.plus.b_minus.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn increment_scales_linearly_in_weight_and_c1() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let f_p = interaction_profile(&psi, 0.0, Sign::Plus).field;
        let f_m = interaction_profile(&psi, 0.0, Sign::Minus).field;

        let run = |c1: f64, scale: f64| {
            let mut fp = f_p.clone();
            let mut fm = f_m.clone();
            fp.scale(C::new(scale, 0.0));
            fm.scale(C::new(scale, 0.0));
            let mut acc = PhaseAccumulator::new(&g, c1, 0.01, 4.0, ProfileMode::Evolving);
            acc.observe(0.0, &fp, &fm);
            acc.observe(1.0, &fp, &fm);
            acc.minus.b_plus[0]
        };
        let base = run(0.08, 1.0);
        assert!(base > 0.0);
        // Doubling |f̂|² doubles the increment; |f̂| scale √2 does that.
        let doubled_weight = run(0.08, std::f64::consts::SQRT_2);
        assert!((doubled_weight / base - 2.0).abs() < 1e-10);
        let doubled_c1 = run(0.16, 1.0);
        assert!((doubled_c1 / base - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tables_are_nonnegative_and_nondecreasing() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let f_p = interaction_profile(&psi, 0.0, Sign::Plus).field;
        let f_m = interaction_profile(&psi, 0.0, Sign::Minus).field;
        let mut acc = PhaseAccumulator::new(&g, 0.08, 0.01, 4.0, ProfileMode::Evolving);
        acc.checkpoint_at(&[1.0, 2.0]);
        acc.observe(0.0, &f_p, &f_m);
        acc.observe(1.0, &f_p, &f_m);
        let b1: Vec<f64> = acc.minus.b_plus.clone();
        acc.observe(2.0, &f_p, &f_m);
        for (now, before) in acc.minus.b_plus.iter().zip(&b1) {
            assert!(*now >= *before);
            assert!(*now >= 0.0);
        }
        assert!(acc.checkpoint(1.0, KernelSign::Minus).is_some());
        assert!(acc.checkpoint(1.5, KernelSign::Minus).is_none());
    }

    #[test]
    fn block_accumulation_is_additive() {
        // Feeding 0→1→2 in one accumulator equals feeding the same panels
        // into a fresh table: the trapezoid is additive across blocks.
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let f_p = interaction_profile(&psi, 0.0, Sign::Plus).field;
        let f_m = interaction_profile(&psi, 0.0, Sign::Minus).field;
        let mut whole = PhaseAccumulator::new(&g, 0.08, 0.01, 4.0, ProfileMode::Evolving);
        for &t in &[0.0, 1.0, 2.0] {
            whole.observe(t, &f_p, &f_m);
        }
        let mut first = PhaseAccumulator::new(&g, 0.08, 0.01, 4.0, ProfileMode::Evolving);
        first.observe(0.0, &f_p, &f_m);
        first.observe(1.0, &f_p, &f_m);
        let mut second = PhaseAccumulator::new(&g, 0.08, 0.01, 4.0, ProfileMode::Evolving);
        second.observe(1.0, &f_p, &f_m);
        second.observe(2.0, &f_p, &f_m);
        for i in 0..g.node_count() {
            let split = first.minus.b_plus[i] + second.minus.b_plus[i];
            assert!((whole.minus.b_plus[i] - split).abs() < 1e-14);
        }
    }

    #[test]
    fn corrected_profile_identities() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let prof = interaction_profile(&psi, 2.0, Sign::Plus);

        // B ≡ 0 leaves the profile unchanged.
        let mut table = PhaseTable::zeros(&g, KernelSign::Minus, 0.01);
        table.times.push(2.0);
        let gfield = corrected_profile(&prof, &table).unwrap();
        assert!(crate::field::l2_distance(&gfield, &prof.field) < 1e-14);

        // Unimodular correction: |g| = |f̂| pointwise.
        let f_m = interaction_profile(&psi, 2.0, Sign::Minus).field;
        let mut acc = PhaseAccumulator::new(&g, 0.3, 0.01, 4.0, ProfileMode::Evolving);
        acc.observe(0.0, &prof.field, &f_m);
        acc.observe(2.0, &prof.field, &f_m);
        let gfield = corrected_profile(&prof, &acc.minus).unwrap();
        for c in 0..4 {
            for i in 0..g.node_count() {
                assert!((gfield.comps[c][i].norm() - prof.field.comps[c][i].norm()).abs() < 1e-13);
            }
        }

        // Time mismatch is rejected.
        let late = interaction_profile(&psi, 3.0, Sign::Plus);
        assert!(matches!(
            corrected_profile(&late, &acc.minus),
            Err(Error::TimeMismatch { .. })
        ));
    }

    #[test]
    fn drift_metric_basics_and_gauge_invariance() {
        let g = grid(12, 10.0);
        let a = SpinorField::random_smooth(&g, 41, 1.5);
        assert_eq!(drift_metric(&a, &a, 10.0), 0.0);

        let b = SpinorField::random_smooth(&g, 42, 1.5);
        let base = drift_metric_aligned(&a, &b, 10.0, 0, 0);
        let mut rotated = b.clone();
        rotated.scale(cis(1.234));
        let rot = drift_metric_aligned(&a, &rotated, 10.0, 0, 0);
        assert!((base - rot).abs() < 1e-10 * base.max(1e-30));
    }

    #[test]
    fn linear_run_has_zero_drift_without_coupling() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let p0 = interaction_profile(&psi, 0.0, Sign::Plus);
        let evolved = free_dirac(&psi, 3.0).physical();
        let p1 = interaction_profile(&evolved, 3.0, Sign::Plus);
        // With c1 = 0 the table is identically zero and g = f̂ is frozen.
        let mut acc = PhaseAccumulator::new(&g, 0.0, 0.01, 4.0, ProfileMode::Evolving);
        acc.observe(0.0, &p0.field, &p0.field);
        acc.observe(3.0, &p1.field, &p1.field);
        let g1 = corrected_profile(&p1, &acc.minus).unwrap();
        let d = drift_metric(&g1, &p0.field, 10.0);
        let scale = p0.field.xi_weighted_sup(10.0);
        assert!(d < 1e-9 * scale, "drift {d} vs scale {scale}");
    }

    #[test]
    fn prediction_is_linear_in_coupling() {
        let g = grid(12, 10.0);
        let psi = smooth_state(&g);
        let f_p = interaction_profile(&psi, 4.0, Sign::Plus).field;
        let f_m = interaction_profile(&psi, 4.0, Sign::Minus).field;
        let node = g.index_of_mode([2, 0, 0]);
        let base = predicted_log_phase_slope(
            &g, 0.08, KernelSign::Minus, 0.01, &f_p, &f_m, 4.0, Sign::Plus, node, 0,
        );
        let double = predicted_log_phase_slope(
            &g, 0.16, KernelSign::Minus, 0.01, &f_p, &f_m, 4.0, Sign::Plus, node, 0,
        );
        assert!((double / base - 2.0).abs() < 1e-12);
    }

    #[test]
    fn measured_slope_of_synthetic_log_phase() {
        // arg z(t) = 0.4·ln t should fit slope 0.4 exactly.
        let mut track = PhaseTrack::new(1, 0, 0, Sign::Plus);
        for i in 0..40 {
            let t = 2.0 + i as f64 * 0.5;
            let phase = 0.4 * t.ln();
            track.samples.push((t, phase.cos(), phase.sin()));
        }
        let slope = track.measured_slope(2.0, 22.0).unwrap();
        assert!((slope - 0.4).abs() < 1e-9);
    }

    #[test]
    fn measured_slope_flags_sparse_sampling() {
        let mut track = PhaseTrack::new(1, 0, 0, Sign::Plus);
        for i in 0..8 {
            let t = 1.0 + i as f64;
            let phase = 3.0 * t; // ~3 rad per step: ambiguous
            track.samples.push((t, phase.cos(), phase.sin()));
        }
        assert!(track.measured_slope(1.0, 8.0).is_err());
    }
}
