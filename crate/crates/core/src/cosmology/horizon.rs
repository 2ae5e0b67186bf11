//! Particle horizon and the holographic-bound ratio.

use super::curve::ScaleFactorCurve;
use super::CosmologyError;

/// Particle horizon at one time.
///
/// Conventions: `comoving_radius` is chi(t) = integral of c ds/a(s) over
/// [t_i, t] and carries length units; `proper_radius` = a(t) chi(t). The
/// error estimate is on the proper radius and already folds in the curve's
/// own accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonResult {
    pub time: f64,
    pub proper_radius: f64,
    pub comoving_radius: f64,
    pub quadrature_error_estimate: f64,
}

/// R_P(t) = a(t) * integral of c/a(s) ds from the curve's start to t.
pub fn particle_horizon(
    curve: &ScaleFactorCurve,
    t: f64,
) -> Result<HorizonResult, CosmologyError> {
    let model = curve.model();
    // chi = (c/H0) * integral in solver time; c enters as a pure prefactor,
    // so rescaling the light speed rescales every radius exactly.
    let prefactor = model.light_speed() / model.hubble0();
    let (integral, estimate) = curve.integrate_inverse_to(t)?;
    let a = curve.scale_factor(t)?;
    let comoving_radius = prefactor * integral;
    Ok(HorizonResult {
        time: t,
        proper_radius: a * comoving_radius,
        comoving_radius,
        quadrature_error_estimate: a * prefactor * estimate,
    })
}

/// Fischler-Susskind ratio S / (A/4).
///
/// Entropy model: a comoving entropy density held constant in time,
/// S = sigma V_comoving(chi(t)); horizon area in Planck units,
/// A = 4 pi R_P^2 / l_P^2. The bound holds iff the ratio is at most 1.
/// At t = t_i both sides vanish and the ratio is reported as 0.
pub fn holographic_ratio(
    curve: &ScaleFactorCurve,
    t: f64,
    comoving_entropy_density: f64,
    planck_length: f64,
) -> Result<f64, CosmologyError> {
    assert!(
        comoving_entropy_density >= 0.0,
        "entropy density must be nonnegative"
    );
    assert!(planck_length > 0.0, "Planck length must be positive");
    let horizon = particle_horizon(curve, t)?;
    if horizon.proper_radius == 0.0 {
        return Ok(0.0);
    }
    let volume = curve.model().comoving_volume(horizon.comoving_radius)?;
    let entropy = comoving_entropy_density * volume;
    let quarter_area =
        std::f64::consts::PI * horizon.proper_radius * horizon.proper_radius
            / (planck_length * planck_length);
    Ok(entropy / quarter_area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmology::{solve_scale_factor, CosmologyModel, GridControl};
    use approx::assert_relative_eq;

    fn eds_curve(t_i: f64, t_f: f64) -> ScaleFactorCurve {
        let model = CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let a_i = (1.5 * t_i).powf(2.0 / 3.0);
        solve_scale_factor(&model, t_i, t_f, a_i, GridControl::default()).unwrap()
    }

    #[test]
    fn eds_horizon_matches_closed_form() {
        // R_P(t) = 3 c t (1 - (t_i/t)^(1/3)); at t_i/t = 1e-3 this is 2.7 c t.
        let t = 1.0;
        let t_i = t / 1000.0;
        let curve = eds_curve(t_i, t);
        let r = particle_horizon(&curve, t).unwrap();
        assert_relative_eq!(r.proper_radius, 2.7, max_relative = 1e-6);
        for frac in [0.01, 0.1, 0.5, 1.0] {
            let tt = t_i + (t - t_i) * frac;
            let r = particle_horizon(&curve, tt).unwrap();
            let exact = 3.0 * tt * (1.0 - (t_i / tt).powf(1.0 / 3.0));
            assert_relative_eq!(r.proper_radius, exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn horizon_vanishes_at_start_time() {
        let curve = eds_curve(0.25, 1.0);
        let r = particle_horizon(&curve, 0.25).unwrap();
        assert_eq!(r.proper_radius, 0.0);
        assert_eq!(r.comoving_radius, 0.0);
        assert_eq!(r.quadrature_error_estimate, 0.0);
    }

    #[test]
    fn de_sitter_horizon_matches_closed_form() {
        let model = CosmologyModel::new(1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let curve = solve_scale_factor(&model, 0.0, 4.0, 1.0, GridControl::default()).unwrap();
        for t in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let r = particle_horizon(&curve, t).unwrap();
            let exact = t.exp() - 1.0;
            assert_relative_eq!(r.proper_radius, exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn comoving_radius_strictly_increasing() {
        let curve = eds_curve(1e-3, 1.0);
        let mut prev = -1.0;
        for i in 0..=60 {
            let t = 1e-3 * (1000.0f64).powf(i as f64 / 60.0);
            let chi = particle_horizon(&curve, t).unwrap().comoving_radius;
            assert!(chi > prev, "chi({t}) = {chi} not increasing past {prev}");
            prev = chi;
        }
    }

    #[test]
    fn light_speed_scaling_is_exact() {
        let t_i = 1e-2f64;
        let t_f = 1.0;
        let a_i = (1.5 * t_i).powf(2.0 / 3.0);
        let base = CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let doubled = CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 2.0).unwrap();
        let c1 = solve_scale_factor(&base, t_i, t_f, a_i, GridControl::default()).unwrap();
        let c2 = solve_scale_factor(&doubled, t_i, t_f, a_i, GridControl::default()).unwrap();
        for t in [0.02, 0.1, 0.37, 1.0] {
            let r1 = particle_horizon(&c1, t).unwrap();
            let r2 = particle_horizon(&c2, t).unwrap();
            // Doubling c is a power-of-two prefactor: bit-exact.
            assert_eq!(r2.proper_radius, 2.0 * r1.proper_radius);
            assert_eq!(r2.comoving_radius, 2.0 * r1.comoving_radius);
        }
    }

    #[test]
    fn refinement_convergence_bounded_by_estimate() {
        let t_i = 1e-3f64;
        let t_f = 1.0;
        let a_i = (1.5 * t_i).powf(2.0 / 3.0);
        let model = CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let control = GridControl::default();
        let coarse = solve_scale_factor(&model, t_i, t_f, a_i, control).unwrap();
        let fine = solve_scale_factor(&model, t_i, t_f, a_i, control.halved()).unwrap();
        for t in [0.01, 0.1, 0.5, 1.0] {
            let rc = particle_horizon(&coarse, t).unwrap();
            let rf = particle_horizon(&fine, t).unwrap();
            assert!(
                (rc.proper_radius - rf.proper_radius).abs() <= rc.quadrature_error_estimate,
                "t = {t}: shift {} over estimate {}",
                (rc.proper_radius - rf.proper_radius).abs(),
                rc.quadrature_error_estimate
            );
        }
    }

    #[test]
    fn zero_entropy_density_gives_zero_ratio() {
        let curve = eds_curve(1e-2, 1.0);
        let ratio = holographic_ratio(&curve, 0.5, 0.0, 1.0).unwrap();
        assert_eq!(ratio, 0.0);
    }

    #[test]
    fn ratio_linear_in_entropy_density() {
        let curve = eds_curve(1e-2, 1.0);
        let r1 = holographic_ratio(&curve, 0.5, 1.0, 1.0).unwrap();
        let r2 = holographic_ratio(&curve, 0.5, 2.0, 1.0).unwrap();
        let r3 = holographic_ratio(&curve, 0.5, 3.0, 1.0).unwrap();
        assert_eq!(r2, 2.0 * r1);
        assert_relative_eq!(r3, 3.0 * r1, max_relative = 1e-15);
    }

    #[test]
    fn doubling_planck_length_quadruples_ratio() {
        let curve = eds_curve(1e-2, 1.0);
        let r1 = holographic_ratio(&curve, 0.5, 1.0, 1.0).unwrap();
        let r2 = holographic_ratio(&curve, 0.5, 1.0, 2.0).unwrap();
        assert_eq!(r2, 4.0 * r1);
    }

    #[test]
    fn eds_ratio_follows_inverse_time_scaling() {
        // Flat EdS: ratio = (4/3) sigma l_P^2 chi / a^2; for t >> t_i,
        // chi ~ t^(1/3) and a ~ t^(2/3), so the ratio falls like 1/t.
        let t_i = 1e-6;
        let curve = eds_curve(t_i, 1.0);
        let exact = |t: f64| {
            let chi = particle_horizon(&curve, t).unwrap().comoving_radius;
            let a = curve.scale_factor(t).unwrap();
            (4.0 / 3.0) * chi / (a * a)
        };
        // chi = 3 (t^(1/3) - t_i^(1/3)) / 1.5^(2/3) and a = (1.5 t)^(2/3)
        // give ratio = 4 (t^(1/3) - t_i^(1/3)) / (2.25 t^(4/3)), which is
        // the 1/t law once t >> t_i.
        let closed_form = |t: f64| {
            4.0 * (t.powf(1.0 / 3.0) - t_i.powf(1.0 / 3.0)) / (2.25 * t.powf(4.0 / 3.0))
        };
        let mut prev_ratio = f64::INFINITY;
        for t in [1e-3, 1e-2, 1e-1, 1.0] {
            let ratio = holographic_ratio(&curve, t, 1.0, 1.0).unwrap();
            // Identity form of the adopted convention.
            assert_relative_eq!(ratio, exact(t), max_relative = 1e-12);
            assert_relative_eq!(ratio, closed_form(t), max_relative = 1e-6);
            assert!(ratio < prev_ratio, "ratio must decrease monotonically");
            prev_ratio = ratio;
        }
        // Power law with the t_i offset divided out: exactly 1/t.
        let r1 = holographic_ratio(&curve, 1e-2, 1.0, 1.0).unwrap();
        let r2 = holographic_ratio(&curve, 1e-1, 1.0, 1.0).unwrap();
        let offset = |t: f64| 1.0 - (t_i / t).powf(1.0 / 3.0);
        assert_relative_eq!(
            r1 * 1e-2 / offset(1e-2),
            r2 * 1e-1 / offset(1e-1),
            max_relative = 1e-6
        );
    }
}
