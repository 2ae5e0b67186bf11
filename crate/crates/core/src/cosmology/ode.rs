//! Embedded Dormand-Prince 5(4) integrator for the scale-factor ODE.
//!
//! Scalar, adaptive, FSAL; the right-hand side is autonomous so no stage
//! times are needed. Accepted steps additionally have to pass a midpoint
//! residual check against the cubic Hermite interpolant the curve will use
//! between knots, so the dense output inherits the solver's accuracy
//! contract instead of just its knot accuracy.

use super::CosmologyError;

const STAGES: usize = 7;

const A: [[f64; 6]; STAGES] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// Fifth-order weights equal the last A row (FSAL); these are the
// fourth-order companion weights for the error estimate.
const B4: [f64; STAGES] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Accepted integration knots in solver time, with derivatives.
#[derive(Debug, Clone)]
pub(crate) struct OdeKnots {
    pub taus: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
}

pub(crate) struct SolverSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub residual_rel_tol: f64,
}

/// Integrates dy/dtau = rhs(y) from (0, y0) to tau_end > 0.
pub(crate) fn integrate<F>(
    mut rhs: F,
    tau_end: f64,
    y0: f64,
    settings: &SolverSettings,
) -> Result<OdeKnots, CosmologyError>
where
    F: FnMut(f64) -> Result<f64, CosmologyError>,
{
    debug_assert!(tau_end > 0.0 && y0 > 0.0);
    let h_max = tau_end / 10.0;
    let h_min = tau_end * 1e-14;
    let mut h = (tau_end / 1000.0).min(h_max);

    let mut tau = 0.0f64;
    let mut y = y0;
    let mut f_here = rhs(y)?;

    let mut knots = OdeKnots {
        taus: vec![0.0],
        values: vec![y0],
        derivs: vec![f_here],
    };

    let mut k = [0.0f64; STAGES];
    loop {
        if h < h_min {
            return Err(CosmologyError::StiffnessFailure { time: tau, step: h });
        }
        let last = tau + h >= tau_end;
        if last {
            h = tau_end - tau;
        }

        k[0] = f_here;
        let mut stage_failed = false;
        for stage in 1..STAGES {
            let mut increment = 0.0;
            for (j, kj) in k.iter().enumerate().take(stage) {
                increment += A[stage][j] * kj;
            }
            let y_stage = y + h * increment;
            if y_stage <= 0.0 {
                stage_failed = true;
                break;
            }
            match rhs(y_stage) {
                Ok(f) => k[stage] = f,
                // A trial stage overshot into a forbidden region; retry
                // smaller. Genuinely invalid models fail at an accepted
                // point (or exhaust h and report stiffness).
                Err(CosmologyError::NegativeRadicand { .. }) => {
                    stage_failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if stage_failed {
            h *= 0.5;
            continue;
        }

        // FSAL: the last stage evaluates the fifth-order solution, so its
        // slope seeds the next step.
        let y_next = y
            + h * (A[6][0] * k[0]
                + A[6][2] * k[2]
                + A[6][3] * k[3]
                + A[6][4] * k[4]
                + A[6][5] * k[5]);
        let f_next = k[6];

        if !(y_next > 0.0) {
            h *= 0.5;
            continue;
        }

        let mut y4 = y;
        for (j, kj) in k.iter().enumerate() {
            y4 += h * B4[j] * kj;
        }

        let scale = settings.abs_tol + settings.rel_tol * y.abs().max(y_next.abs());
        let err = ((y_next - y4) / scale).abs();
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
            continue;
        }

        // Midpoint residual of the Hermite segment the curve will expose.
        let mid_value = 0.5 * (y + y_next) + h * (f_here - f_next) / 8.0;
        let mid_deriv = 1.5 * (y_next - y) / h - 0.25 * (f_here + f_next);
        let residual_ok = if mid_value > 0.0 {
            match rhs(mid_value) {
                Ok(target) => {
                    (mid_deriv - target).abs()
                        <= settings.residual_rel_tol * target.abs() + settings.abs_tol
                }
                Err(CosmologyError::NegativeRadicand { .. }) => false,
                Err(e) => return Err(e),
            }
        } else {
            false
        };
        if !residual_ok {
            h *= 0.5;
            continue;
        }

        y = y_next;
        f_here = f_next;
        if last {
            knots.taus.push(tau_end);
            knots.values.push(y);
            knots.derivs.push(f_here);
            break;
        }
        tau += h;
        knots.taus.push(tau);
        knots.values.push(y);
        knots.derivs.push(f_here);

        h = (h * (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)).min(h_max);
    }

    Ok(knots)
}
