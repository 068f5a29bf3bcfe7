//! Time evolution by Strang splitting with exact substeps.
//!
//! The flow is split into the free Dirac group `A(τ) = U(τ)` (a unimodular
//! spectral multiplier) and the potential flow `P(τ): ψ ↦ e^{i c₁ V τ} ψ`
//! with `V = |x|⁻¹ ∗ |ψ|²` frozen over the substep. `P` solves its subflow
//! exactly because `V` depends on ψ only through `|ψ|²`, which a pointwise
//! phase rotation leaves invariant. Both substeps preserve the L² norm
//! exactly, so mass conservation holds to roundoff regardless of dt.
//!
//! Inside [`evolve`] consecutive half steps `A(dt/2)·A(dt/2)` are merged
//! into `A(dt)`; snapshots branch off a copy with the trailing `A(dt/2)`
//! applied, which reproduces the textbook composition bit-for-bit.

use serde::Serialize;

use crate::dirac::{project, Sign};
use crate::error::Error;
use crate::field::{Representation, SpinorField};
use crate::grid::FourierGrid;
use crate::hartree::{
    coulomb_potential, density_of, hartree_term, truncate_two_thirds, ZeroModeConvention,
};
use crate::propagator::apply_free_dirac_spectral;
use crate::scalar::{cis, r, Scalar, C};
use crate::scattering::{interaction_profile, KernelSign, PhaseAccumulator, ProfileMode};
use crate::Result;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Projection {
    None,
    Plus,
    Minus,
}

/// Modulated Gaussian initial data, optionally restricted to one branch.
#[derive(Debug, Clone)]
pub struct InitialData<T: Scalar> {
    pub width: T,
    pub modulation: [T; 3],
    pub spinor: [C<T>; 4],
    pub projection: Projection,
}

impl<T: Scalar> InitialData<T> {
    pub fn gaussian(width: T) -> Self {
        Self {
            width,
            modulation: [T::zero(); 3],
            spinor: [
                C::new(T::one(), T::zero()),
                C::new(T::zero(), T::zero()),
                C::new(T::zero(), T::zero()),
                C::new(T::zero(), T::zero()),
            ],
            projection: Projection::None,
        }
    }
}

/// Convention knobs threaded through the scattering analysis.
#[derive(Debug, Clone)]
pub struct Conventions<T: Scalar> {
    pub kernel_sign: KernelSign,
    pub cutoff_exponent: T,
    pub drift_weight: T,
    pub profile_mode: ProfileMode,
    pub zero_mode: ZeroModeConvention<T>,
}

impl<T: Scalar> Default for Conventions<T> {
    fn default() -> Self {
        Self {
            kernel_sign: KernelSign::Minus,
            cutoff_exponent: r(0.01),
            drift_weight: r(10.0),
            profile_mode: ProfileMode::Evolving,
            zero_mode: ZeroModeConvention::Drop,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig<T: Scalar> {
    pub n: usize,
    pub box_length: T,
    pub eps0: T,
    /// Coupling g; the equation coefficient is c₁ = g²/4π (mass m = 1).
    pub coupling_g: T,
    pub dt: T,
    pub t_final: T,
    pub snapshot_dt: T,
    pub data: InitialData<T>,
    pub conventions: Conventions<T>,
    /// Accumulate the log-phase tables during the run.
    pub accumulate_phase: bool,
    /// Times at which the accumulator stores table copies for later
    /// corrected-profile evaluation.
    pub phase_checkpoints: Vec<T>,
    /// Record ‖𝒩(ψ,ψ,ψ)‖_{W^{2,∞}} per snapshot (costly; decay studies).
    pub record_hartree_norm: bool,
    pub dealias: bool,
    /// Diagnostic Sobolev order for the H^k column.
    pub sobolev_k: T,
    pub seed: u64,
}

impl<T: Scalar> RunConfig<T> {
    pub fn new(n: usize, box_length: T) -> Self {
        Self {
            n,
            box_length,
            eps0: r(0.05),
            coupling_g: T::one(),
            dt: r(0.02),
            t_final: box_length * r(0.25),
            snapshot_dt: T::one(),
            data: InitialData::gaussian(T::one()),
            conventions: Conventions::default(),
            accumulate_phase: false,
            phase_checkpoints: vec![],
            record_hartree_norm: false,
            dealias: false,
            sobolev_k: r(8.0),
            seed: 0,
        }
    }

    /// `c₁ = g²/4π`.
    pub fn c1(&self) -> T {
        self.coupling_g * self.coupling_g / (r::<T>(4.0) * T::PI())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, reason: String| Error::InvalidConfig {
            key: key.into(),
            reason,
        };
        if self.n < 8 || self.n % 2 != 0 {
            return Err(bad("n", format!("must be even and at least 8, got {}", self.n)));
        }
        if !(self.box_length > T::zero()) {
            return Err(bad("L", "must be positive".into()));
        }
        if !(self.dt > T::zero()) || self.dt > r(0.1) {
            return Err(bad("dt", "must satisfy 0 < dt <= 0.1".into()));
        }
        if self.t_final < T::zero() {
            return Err(bad("t_final", "must be nonnegative".into()));
        }
        if self.t_final > self.box_length * r(0.5) {
            return Err(bad(
                "t_final",
                format!(
                    "exceeds the wrap-around horizon L/2 = {}; dispersive waves re-enter the box beyond it",
                    (self.box_length * r(0.5)).to_f64_lossy()
                ),
            ));
        }
        if self.eps0 < T::zero() {
            return Err(bad("eps0", "must be nonnegative".into()));
        }
        if !(self.coupling_g >= T::zero()) {
            return Err(bad("g", "must be nonnegative".into()));
        }
        if !(self.snapshot_dt > T::zero()) {
            return Err(bad("snapshot_dt", "must be positive".into()));
        }
        if !(self.data.width > T::zero()) {
            return Err(bad("data_width", "must be positive".into()));
        }
        if !(self.conventions.cutoff_exponent > T::zero()) {
            return Err(bad("cutoff_exponent", "must be positive".into()));
        }
        let ratio = (self.snapshot_dt / self.dt).to_f64_lossy();
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(bad("snapshot_dt", "must be an integer multiple of dt".into()));
        }
        if self.t_final > T::zero() {
            let steps = (self.t_final / self.dt).to_f64_lossy();
            if (steps - steps.round()).abs() > 1e-9 {
                return Err(bad("t_final", "must be an integer multiple of dt".into()));
            }
        }
        Ok(())
    }

    pub fn make_grid(&self) -> Result<std::sync::Arc<FourierGrid<T>>> {
        FourierGrid::make(self.n, self.box_length)
    }

    /// Synthesize the configured initial data on the grid.
    pub fn initial_data(&self, grid: &std::sync::Arc<FourierGrid<T>>) -> SpinorField<T> {
        let d = &self.data;
        let inv_two_w2 = (r::<T>(2.0) * d.width * d.width).recip();
        let eps = self.eps0;
        let spinor = d.spinor;
        let k0 = d.modulation;
        let psi = SpinorField::from_fn_physical(grid, |x| {
            let q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            let envelope = eps * (-q * inv_two_w2).exp();
            let phase = cis(x[0] * k0[0] + x[1] * k0[1] + x[2] * k0[2]);
            let amp = phase * envelope;
            [amp * spinor[0], amp * spinor[1], amp * spinor[2], amp * spinor[3]]
        });
        match d.projection {
            Projection::None => psi,
            Projection::Plus => project(&psi, Sign::Plus),
            Projection::Minus => project(&psi, Sign::Minus),
        }
    }
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// One diagnostics row per snapshot; all values in f64 for stable CSV.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsRow {
    pub time: f64,
    pub l2: f64,
    pub l2_plus: f64,
    pub l2_minus: f64,
    pub linf: f64,
    pub hk: f64,
    pub w1h2_plus: f64,
    pub w1h2_minus: f64,
    pub w2h2_plus: f64,
    pub w2h2_minus: f64,
    pub xi10_plus: f64,
    pub xi10_minus: f64,
    pub mass_drift: f64,
    pub hartree_w2inf: Option<f64>,
}

/// Everything the integrator knows at a snapshot time, lent to the caller.
pub struct SnapshotView<'a, T: Scalar> {
    pub time: T,
    /// ψ(t) in physical representation.
    pub psi: &'a SpinorField<T>,
    /// Interaction profiles in spectral representation.
    pub f_plus: &'a SpinorField<T>,
    pub f_minus: &'a SpinorField<T>,
    pub row: &'a DiagnosticsRow,
}

pub struct Trajectory<T: Scalar> {
    pub psi: SpinorField<T>,
    pub time: T,
    pub rows: Vec<DiagnosticsRow>,
    pub phase: Option<PhaseAccumulator<T>>,
    pub initial_mass: T,
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

/// Potential kick `ψ ← e^{i c₁ V τ} ψ` with `V` computed from ψ itself.
fn potential_kick<T: Scalar>(
    psi: &mut SpinorField<T>,
    c1: T,
    tau: T,
    dealias: bool,
    zero_mode: ZeroModeConvention<T>,
) -> Result<()> {
    use rayon::prelude::*;
    debug_assert_eq!(psi.representation(), Representation::Physical);
    let density = density_of(psi);
    let mut potential = coulomb_potential(&density)?;
    if dealias {
        truncate_two_thirds(&mut potential);
    }
    let shift = match zero_mode {
        ZeroModeConvention::Drop => T::zero(),
        ZeroModeConvention::MeanFieldShift { lambda } => {
            let mass = density.values.iter().map(|v| v.re).fold(T::zero(), |a, b| a + b)
                * psi.grid.dx3();
            lambda * mass / psi.grid.volume()
        }
    };
    let rot = c1 * tau;
    for comp in &mut psi.comps {
        comp.par_iter_mut()
            .zip(potential.values.par_iter())
            .for_each(|(v, p)| *v *= cis(rot * (p.re + shift)));
    }
    Ok(())
}

/// One Strang step `A(τ/2) P(τ) A(τ/2)`. Negative `τ` runs the exact
/// time-reversed step.
pub fn strang_step<T: Scalar>(
    psi: &SpinorField<T>,
    tau: T,
    c1: T,
    dealias: bool,
    zero_mode: ZeroModeConvention<T>,
) -> Result<SpinorField<T>> {
    let mut state = psi.clone();
    state.to_spectral();
    apply_free_dirac_spectral(&mut state, tau * r(0.5));
    state.to_physical();
    potential_kick(&mut state, c1, tau, dealias, zero_mode)?;
    state.to_spectral();
    apply_free_dirac_spectral(&mut state, tau * r(0.5));
    state.to_physical();
    if !state.is_finite() {
        return Err(Error::NonFiniteField {
            context: "strang_step output".into(),
        });
    }
    Ok(state)
}

/// Advance the configured run to `t_final`, invoking `on_snapshot` at every
/// snapshot time (including t = 0 and t_final).
pub fn evolve<T: Scalar>(
    config: &RunConfig<T>,
    mut on_snapshot: impl FnMut(SnapshotView<'_, T>) -> Result<()>,
) -> Result<Trajectory<T>> {
    config.validate()?;
    let grid = config.make_grid()?;
    let c1 = config.c1();
    let psi0 = config.initial_data(&grid);
    if !psi0.is_finite() {
        return Err(Error::NonFiniteField {
            context: "initial data".into(),
        });
    }
    let initial_mass = psi0.l2_norm();
    let steps = (config.t_final / config.dt).to_f64_lossy().round() as usize;
    let snap_every = (config.snapshot_dt / config.dt).to_f64_lossy().round() as usize;

    let mut phase = if config.accumulate_phase {
        let mut acc = PhaseAccumulator::new(
            &grid,
            c1,
            config.conventions.cutoff_exponent,
            config.t_final,
            config.conventions.profile_mode,
        );
        acc.checkpoint_at(&config.phase_checkpoints);
        Some(acc)
    } else {
        None
    };
    let mut rows = Vec::new();

    let mut emit = |time: T,
                    psi_phys: &SpinorField<T>,
                    psi_hat: &SpinorField<T>,
                    phase: &mut Option<PhaseAccumulator<T>>,
                    rows: &mut Vec<DiagnosticsRow>|
     -> Result<()> {
        let f_plus = interaction_profile(psi_hat, time, Sign::Plus);
        let f_minus = interaction_profile(psi_hat, time, Sign::Minus);
        let row = diagnostics_row(config, time, psi_phys, psi_hat, &f_plus.field, &f_minus.field, initial_mass)?;
        if let Some(acc) = phase.as_mut() {
            acc.observe(time, &f_plus.field, &f_minus.field);
        }
        let view = SnapshotView {
            time,
            psi: psi_phys,
            f_plus: &f_plus.field,
            f_minus: &f_minus.field,
            row: &row,
        };
        on_snapshot(view)?;
        rows.push(row);
        Ok(())
    };

    // t = 0 snapshot.
    let psi0_hat = psi0.clone().spectral();
    emit(T::zero(), &psi0, &psi0_hat, &mut phase, &mut rows)?;

    if steps == 0 {
        return Ok(Trajectory {
            psi: psi0,
            time: T::zero(),
            rows,
            phase,
            initial_mass,
        });
    }

    // Merged-half-step stream: stream = A(dt/2) applied to the current
    // post-kick state; kicks happen in physical space.
    let dt = config.dt;
    let mut stream = psi0_hat;
    apply_free_dirac_spectral(&mut stream, dt * r(0.5));

    let mut final_state: Option<(SpinorField<T>, SpinorField<T>)> = None;
    for step in 1..=steps {
        let mut phys = stream.clone();
        phys.to_physical();
        potential_kick(
            &mut phys,
            c1,
            dt,
            config.dealias,
            config.conventions.zero_mode,
        )?;
        stream = phys.spectral();

        let time = dt * r(step as f64);
        let at_snapshot = step % snap_every == 0 || step == steps;
        if at_snapshot {
            let mut snap_hat = stream.clone();
            apply_free_dirac_spectral(&mut snap_hat, dt * r(0.5));
            let snap_phys = snap_hat.clone().physical();
            if !snap_phys.is_finite() {
                return Err(Error::NonFiniteField {
                    context: format!("state at t = {}", time.to_f64_lossy()),
                });
            }
            let mass = snap_hat.l2_norm();
            let growth = ((mass - initial_mass) / initial_mass).to_f64_lossy();
            if growth > 0.1 {
                return Err(Error::Instability {
                    time: time.to_f64_lossy(),
                    growth,
                });
            }
            emit(time, &snap_phys, &snap_hat, &mut phase, &mut rows)?;
            if step == steps {
                final_state = Some((snap_phys, snap_hat));
            }
        }
        if step < steps {
            apply_free_dirac_spectral(&mut stream, dt);
        }
    }

    let (psi_final, _) = final_state.expect("final step always snapshots");
    Ok(Trajectory {
        psi: psi_final,
        time: config.t_final,
        rows,
        phase,
        initial_mass,
    })
}

fn diagnostics_row<T: Scalar>(
    config: &RunConfig<T>,
    time: T,
    psi_phys: &SpinorField<T>,
    psi_hat: &SpinorField<T>,
    f_plus: &SpinorField<T>,
    f_minus: &SpinorField<T>,
    initial_mass: T,
) -> Result<DiagnosticsRow> {
    let l2 = psi_hat.l2_norm();
    let mass_drift = if initial_mass > T::zero() {
        ((l2 - initial_mass) / initial_mass).abs().to_f64_lossy()
    } else {
        0.0
    };
    let ten = r::<T>(10.0);
    let two = r::<T>(2.0);
    let plus_phys = f_plus.clone().physical();
    let minus_phys = f_minus.clone().physical();
    let hartree_w2inf = if config.record_hartree_norm {
        let term = hartree_term(psi_phys, psi_phys, psi_phys)?;
        Some(w2inf_norm(&term).to_f64_lossy())
    } else {
        None
    };
    Ok(DiagnosticsRow {
        time: time.to_f64_lossy(),
        l2: l2.to_f64_lossy(),
        l2_plus: f_plus.l2_norm().to_f64_lossy(),
        l2_minus: f_minus.l2_norm().to_f64_lossy(),
        linf: psi_phys.linf_norm().to_f64_lossy(),
        hk: psi_hat.sobolev_norm(config.sobolev_k).to_f64_lossy(),
        w1h2_plus: plus_phys.weighted_norm(1, two).to_f64_lossy(),
        w1h2_minus: minus_phys.weighted_norm(1, two).to_f64_lossy(),
        w2h2_plus: plus_phys.weighted_norm(2, two).to_f64_lossy(),
        w2h2_minus: minus_phys.weighted_norm(2, two).to_f64_lossy(),
        xi10_plus: f_plus.xi_weighted_sup(ten).to_f64_lossy(),
        xi10_minus: f_minus.xi_weighted_sup(ten).to_f64_lossy(),
        mass_drift,
        hartree_w2inf,
    })
}

/// `‖f‖_{W^{2,∞}} = Σ_{|α|≤2} ‖∂^α f‖_{L^∞}` through spectral derivatives.
pub fn w2inf_norm<T: Scalar>(field: &SpinorField<T>) -> T {
    let spectral = field.clone().spectral();
    let orders: [[i32; 3]; 10] = [
        [0, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [2, 0, 0],
        [0, 2, 0],
        [0, 0, 2],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
    ];
    let mut total = T::zero();
    for alpha in orders {
        let mut d = spectral.clone();
        d.apply_multiplier(|xi| {
            let mut m = C::new(T::one(), T::zero());
            for (axis, &p) in alpha.iter().enumerate() {
                for _ in 0..p {
                    m *= C::new(T::zero(), xi[axis]);
                }
            }
            m
        })
        .expect("derivative symbol is finite");
        total += d.physical().linf_norm();
    }
    total
}

/// Fitted decay exponents from a trajectory's diagnostics rows.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub psi_linf_slope: f64,
    pub hartree_w2inf_slope: Option<f64>,
    pub window: (f64, f64),
}

/// Least-squares log-log slopes of the sup-norm (and, when recorded, the
/// Hartree-term W^{2,∞} norm) over the fit window.
pub fn nonlinear_decay_scan(rows: &[DiagnosticsRow], t_lo: f64, t_hi: f64) -> Result<DecayFit> {
    let psi_samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.time, r.linf)).collect();
    let psi_linf_slope = crate::fit::log_log_slope(&psi_samples, t_lo, t_hi)?;
    let hartree_samples: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.hartree_w2inf.map(|h| (r.time, h)))
        .collect();
    let hartree_w2inf_slope = if hartree_samples.len() >= 5 {
        Some(crate::fit::log_log_slope(&hartree_samples, t_lo, t_hi)?)
    } else {
        None
    };
    Ok(DecayFit {
        psi_linf_slope,
        hartree_w2inf_slope,
        window: (t_lo, t_hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::l2_distance;
    use crate::propagator::free_dirac;

    fn small_config() -> RunConfig<f64> {
        let mut c = RunConfig::new(12, 12.0);
        c.dt = 0.05;
        c.t_final = 1.0;
        c.snapshot_dt = 0.5;
        c.eps0 = 0.1;
        c.data.width = 1.5;
        c
    }

    #[test]
    fn free_limit_matches_exact_propagator() {
        let c = small_config();
        let grid = c.make_grid().unwrap();
        let psi = c.initial_data(&grid);
        let stepped = strang_step(&psi, 0.05, 0.0, false, ZeroModeConvention::Drop).unwrap();
        let exact = free_dirac(&psi, 0.05).physical();
        assert!(l2_distance(&stepped, &exact) < 1e-12 * psi.l2_norm());
    }

    #[test]
    fn zero_field_stays_zero() {
        let c = small_config();
        let grid = c.make_grid().unwrap();
        let zero = SpinorField::zeros(&grid, Representation::Physical);
        let stepped = strang_step(&zero, 0.05, c.c1(), false, ZeroModeConvention::Drop).unwrap();
        assert_eq!(stepped.l2_norm(), 0.0);
    }

    #[test]
    fn step_rejects_non_finite_input() {
        let c = small_config();
        let grid = c.make_grid().unwrap();
        let mut psi = c.initial_data(&grid);
        psi.comps[0][3] = C::new(f64::NAN, 0.0);
        assert!(strang_step(&psi, 0.05, c.c1(), false, ZeroModeConvention::Drop).is_err());
    }

    #[test]
    fn reversed_step_undoes_a_step() {
        let mut c = small_config();
        c.n = 16;
        c.eps0 = 0.2;
        let grid = c.make_grid().unwrap();
        let psi = c.initial_data(&grid);
        let fwd = strang_step(&psi, 0.01, c.c1(), false, ZeroModeConvention::Drop).unwrap();
        let back = strang_step(&fwd, -0.01, c.c1(), false, ZeroModeConvention::Drop).unwrap();
        assert!(l2_distance(&back, &psi) < 1e-10 * psi.l2_norm());
    }

    #[test]
    fn evolve_zero_amplitude() {
        let mut c = small_config();
        c.eps0 = 0.0;
        let traj = evolve(&c, |_| Ok(())).unwrap();
        assert_eq!(traj.psi.l2_norm(), 0.0);
        assert!(traj.rows.iter().all(|r| r.l2 == 0.0));
    }

    #[test]
    fn evolve_conserves_mass_and_reports_rows() {
        let c = small_config();
        let mut seen = 0usize;
        let traj = evolve(&c, |view| {
            seen += 1;
            assert!(view.row.time >= 0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, traj.rows.len());
        assert_eq!(traj.rows.len(), 3); // t = 0, 0.5, 1.0
        for row in &traj.rows {
            assert!(row.mass_drift < 1e-12, "drift {} at t={}", row.mass_drift, row.time);
        }
        // Time column monotone.
        for w in traj.rows.windows(2) {
            assert!(w[1].time > w[0].time);
        }
    }

    #[test]
    fn gauge_covariance_under_constant_phase() {
        let c = small_config();
        let grid = c.make_grid().unwrap();
        let psi = c.initial_data(&grid);
        let mut rotated = psi.clone();
        rotated.scale(cis(0.83));
        let a = strang_step(&psi, 0.05, c.c1(), false, ZeroModeConvention::Drop).unwrap();
        let b = strang_step(&rotated, 0.05, c.c1(), false, ZeroModeConvention::Drop).unwrap();
        let da = density_of(&a);
        let db = density_of(&b);
        for (x, y) in da.values.iter().zip(&db.values) {
            assert!((x.re - y.re).abs() < 1e-13);
        }
    }

    #[test]
    fn branch_populations_stay_within_factor_two() {
        let mut c = small_config();
        c.t_final = 3.0;
        c.eps0 = 0.1;
        let traj = evolve(&c, |_| Ok(())).unwrap();
        let first = &traj.rows[0];
        for row in &traj.rows[1..] {
            assert!(row.l2_plus / first.l2_plus < 2.0 && row.l2_plus / first.l2_plus > 0.5);
            assert!(row.l2_minus / first.l2_minus < 2.0 && row.l2_minus / first.l2_minus > 0.5);
        }
    }

    #[test]
    fn validation_names_offending_keys() {
        let mut c = small_config();
        c.dt = 0.0;
        match c.validate() {
            Err(Error::InvalidConfig { key, .. }) => assert_eq!(key, "dt"),
            other => panic!("expected config error, got {other:?}"),
        }
        let mut c = small_config();
        c.t_final = 100.0;
        match c.validate() {
            Err(Error::InvalidConfig { key, reason }) => {
                assert_eq!(key, "t_final");
                assert!(reason.contains("horizon"));
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn self_convergence_is_second_order() {
        let mut c = small_config();
        c.n = 16;
        c.box_length = 12.0;
        c.eps0 = 0.2;
        c.t_final = 1.0;
        let run = |dt: f64| {
            let mut cc = c.clone();
            cc.dt = dt;
            cc.snapshot_dt = 1.0;
            evolve(&cc, |_| Ok(())).unwrap().psi
        };
        let a = run(0.1);
        let b = run(0.05);
        let d = run(0.025);
        let e1 = l2_distance(&a, &b);
        let e2 = l2_distance(&b, &d);
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "observed ratio {ratio}");
    }
}
