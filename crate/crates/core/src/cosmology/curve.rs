//! Dense scale-factor curves and quadrature against them.

use super::model::CosmologyModel;
use super::ode::{integrate, OdeKnots, SolverSettings};
use super::CosmologyError;
use crate::numeric::NeumaierSum;

/// Tolerances driving the curve solve and the horizon quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridControl {
    /// Relative tolerance of the embedded Runge-Kutta pair.
    pub ode_rel_tol: f64,
    /// Absolute tolerance of the embedded Runge-Kutta pair.
    pub ode_abs_tol: f64,
    /// Midpoint ODE-residual tolerance of the dense interpolant, relative
    /// to the local derivative scale.
    pub residual_rel_tol: f64,
    /// Relative tolerance of the horizon quadrature.
    pub quad_rel_tol: f64,
}

impl Default for GridControl {
    fn default() -> Self {
        Self {
            ode_rel_tol: 1e-10,
            ode_abs_tol: 1e-12,
            residual_rel_tol: 1e-8,
            quad_rel_tol: 1e-9,
        }
    }
}

impl GridControl {
    /// Every tolerance halved; used by refinement-convergence checks.
    pub fn halved(&self) -> Self {
        Self {
            ode_rel_tol: self.ode_rel_tol / 2.0,
            ode_abs_tol: self.ode_abs_tol / 2.0,
            residual_rel_tol: self.residual_rel_tol / 2.0,
            quad_rel_tol: self.quad_rel_tol / 2.0,
        }
    }
}

/// Global ODE error is bounded by this multiple of the local relative
/// tolerance when folded into quadrature error estimates.
const CURVE_ERROR_SAFETY: f64 = 100.0;

/// Gauss-Legendre 7-point nodes (positive half) and weights on [-1, 1].
const GL7_NODES: [f64; 3] = [
    0.405845151377397166907,
    0.741531185599394439864,
    0.949107912342758524526,
];
const GL7_WEIGHTS: [f64; 4] = [
    0.417959183673469387755, // center
    0.381830050505118944950,
    0.279705391489276667901,
    0.129484966168869693271,
];

const QUAD_MAX_DEPTH: usize = 40;

/// Monotone a(t) on [t_i, t_f]: dense Runge-Kutta knots in scaled time
/// tau = H0 (t - t_i), evaluated between knots by cubic Hermite
/// interpolation with the exact ODE derivatives (clamped, in the rare
/// under-resolved case, to keep the interpolant monotone).
#[derive(Debug, Clone)]
pub struct ScaleFactorCurve {
    model: CosmologyModel,
    t_start: f64,
    t_end: f64,
    taus: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    control: GridControl,
}

/// Integrates da/dt = a H(a) from (t_i, a_i) adaptively and returns the
/// dense curve. Tolerances come from `control`; the returned curve also
/// carries them for downstream quadrature.
pub fn solve_scale_factor(
    model: &CosmologyModel,
    t_i: f64,
    t_f: f64,
    a_i: f64,
    control: GridControl,
) -> Result<ScaleFactorCurve, CosmologyError> {
    assert!(t_i < t_f, "need t_i < t_f");
    assert!(a_i > 0.0, "need a_i > 0");
    let tau_end = model.hubble0() * (t_f - t_i);
    let settings = SolverSettings {
        rel_tol: control.ode_rel_tol,
        abs_tol: control.ode_abs_tol,
        residual_rel_tol: control.residual_rel_tol,
    };
    // In tau units the RHS is the dimensionless a E(a).
    let rhs = |a: f64| -> Result<f64, CosmologyError> { Ok(a * model.dimensionless_hubble(a)?) };
    let OdeKnots {
        taus,
        values,
        mut derivs,
    } = integrate(rhs, tau_end, a_i, &settings)?;

    clamp_derivatives_monotone(&taus, &values, &mut derivs);

    Ok(ScaleFactorCurve {
        model: *model,
        t_start: t_i,
        t_end: t_f,
        taus,
        values,
        derivs,
        control,
    })
}

/// Fritsch-Carlson-style safety clamp: with exact ODE derivatives on a
/// resolved mesh the condition d <= 3 min(adjacent slopes) already holds,
/// so this is a no-op except on pathologically coarse segments.
fn clamp_derivatives_monotone(taus: &[f64], values: &[f64], derivs: &mut [f64]) {
    let n = taus.len();
    for i in 0..n {
        let left = if i > 0 {
            Some((values[i] - values[i - 1]) / (taus[i] - taus[i - 1]))
        } else {
            None
        };
        let right = if i + 1 < n {
            Some((values[i + 1] - values[i]) / (taus[i + 1] - taus[i]))
        } else {
            None
        };
        let bound = match (left, right) {
            (Some(l), Some(r)) => 3.0 * l.min(r),
            (Some(l), None) => 3.0 * l,
            (None, Some(r)) => 3.0 * r,
            (None, None) => f64::INFINITY,
        };
        if derivs[i] > bound {
            derivs[i] = bound.max(0.0);
        }
        if derivs[i] < 0.0 {
            derivs[i] = 0.0;
        }
    }
}

impl ScaleFactorCurve {
    pub fn model(&self) -> &CosmologyModel {
        &self.model
    }

    pub fn start_time(&self) -> f64 {
        self.t_start
    }

    pub fn end_time(&self) -> f64 {
        self.t_end
    }

    pub fn control(&self) -> &GridControl {
        &self.control
    }

    pub fn knot_count(&self) -> usize {
        self.taus.len()
    }

    /// Knots as (t, a, da/dt) rows.
    pub fn knots(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let h0 = self.model.hubble0();
        self.taus
            .iter()
            .zip(&self.values)
            .zip(&self.derivs)
            .map(move |((&tau, &a), &d)| (self.t_start + tau / h0, a, d * h0))
    }

    fn check_range(&self, t: f64) -> Result<(), CosmologyError> {
        if t < self.t_start || t > self.t_end || !t.is_finite() {
            return Err(CosmologyError::TimeOutOfRange {
                time: t,
                start: self.t_start,
                end: self.t_end,
            });
        }
        Ok(())
    }

    fn tau_of(&self, t: f64) -> f64 {
        (self.model.hubble0() * (t - self.t_start)).clamp(0.0, *self.taus.last().unwrap())
    }

    /// Index of the knot interval containing tau.
    fn segment_of(&self, tau: f64) -> usize {
        match self
            .taus
            .binary_search_by(|probe| probe.partial_cmp(&tau).unwrap())
        {
            Ok(i) => i.min(self.taus.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.taus.len() - 2),
        }
    }

    fn hermite_value(&self, seg: usize, tau: f64) -> f64 {
        let (t0, t1) = (self.taus[seg], self.taus[seg + 1]);
        let h = t1 - t0;
        let s = (tau - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.values[seg]
            + h10 * h * self.derivs[seg]
            + h01 * self.values[seg + 1]
            + h11 * h * self.derivs[seg + 1]
    }

    fn hermite_derivative(&self, seg: usize, tau: f64) -> f64 {
        let (t0, t1) = (self.taus[seg], self.taus[seg + 1]);
        let h = t1 - t0;
        let s = (tau - t0) / h;
        let s2 = s * s;
        (6.0 * s2 - 6.0 * s) / h * (self.values[seg] - self.values[seg + 1])
            + (3.0 * s2 - 4.0 * s + 1.0) * self.derivs[seg]
            + (3.0 * s2 - 2.0 * s) * self.derivs[seg + 1]
    }

    /// Interpolated a(t).
    pub fn scale_factor(&self, t: f64) -> Result<f64, CosmologyError> {
        self.check_range(t)?;
        let tau = self.tau_of(t);
        Ok(self.hermite_value(self.segment_of(tau), tau))
    }

    /// Interpolated da/dt.
    pub fn scale_factor_derivative(&self, t: f64) -> Result<f64, CosmologyError> {
        self.check_range(t)?;
        let tau = self.tau_of(t);
        Ok(self.hermite_derivative(self.segment_of(tau), tau) * self.model.hubble0())
    }

    /// H(a(t)) in the model's units.
    pub fn hubble(&self, t: f64) -> Result<f64, CosmologyError> {
        self.model.hubble_rate(self.scale_factor(t)?)
    }

    /// Integral of 1/a over solver time [0, tau(t)] with an error estimate.
    ///
    /// The estimate sums the per-interval refinement differences and folds
    /// in the curve's own accuracy at [`CURVE_ERROR_SAFETY`] times the ODE
    /// relative tolerance; see the refinement-convergence contract.
    pub(crate) fn integrate_inverse_to(&self, t: f64) -> Result<(f64, f64), CosmologyError> {
        self.check_range(t)?;
        let tau_target = self.tau_of(t);
        if tau_target == 0.0 {
            return Ok((0.0, 0.0));
        }

        // Coarse pass fixes the tolerance budget scale.
        let mut coarse = NeumaierSum::new();
        let mut seg = 0;
        while seg + 1 < self.taus.len() && self.taus[seg] < tau_target {
            let hi = self.taus[seg + 1].min(tau_target);
            coarse.add(self.gl7_segment(seg, self.taus[seg], hi));
            seg += 1;
        }
        let budget = self.control.quad_rel_tol * coarse.total().abs();

        let mut value = NeumaierSum::new();
        let mut err = NeumaierSum::new();
        let mut seg = 0;
        while seg + 1 < self.taus.len() && self.taus[seg] < tau_target {
            let lo = self.taus[seg];
            let hi = self.taus[seg + 1].min(tau_target);
            let local_tol = budget * (hi - lo) / tau_target;
            let (v, e) = self.refine_segment(seg, lo, hi, local_tol, 0);
            value.add(v);
            err.add(e);
            seg += 1;
        }

        let integral = value.total();
        let estimate = err.total() + CURVE_ERROR_SAFETY * self.control.ode_rel_tol * integral.abs();
        Ok((integral, estimate))
    }

    fn gl7_segment(&self, seg: usize, lo: f64, hi: f64) -> f64 {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut total = GL7_WEIGHTS[0] / self.hermite_value(seg, center);
        for (i, &node) in GL7_NODES.iter().enumerate() {
            let x = half * node;
            total += GL7_WEIGHTS[i + 1]
                * (1.0 / self.hermite_value(seg, center - x)
                    + 1.0 / self.hermite_value(seg, center + x));
        }
        total * half
    }

    fn refine_segment(&self, seg: usize, lo: f64, hi: f64, tol: f64, depth: usize) -> (f64, f64) {
        let whole = self.gl7_segment(seg, lo, hi);
        let mid = 0.5 * (lo + hi);
        let left = self.gl7_segment(seg, lo, mid);
        let right = self.gl7_segment(seg, mid, hi);
        let split = left + right;
        let diff = (split - whole).abs();
        if diff <= tol || depth >= QUAD_MAX_DEPTH {
            return (split, diff);
        }
        let (lv, le) = self.refine_segment(seg, lo, mid, tol / 2.0, depth + 1);
        let (rv, re) = self.refine_segment(seg, mid, hi, tol / 2.0, depth + 1);
        (lv + rv, le + re)
    }
}
