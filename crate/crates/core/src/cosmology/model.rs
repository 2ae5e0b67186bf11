//! Cosmological parameter sets and the Friedmann closure.

use super::CosmologyError;

/// |1 - omega_m - omega_r - omega_lambda| at or below this classifies flat.
pub const CURVATURE_TOLERANCE: f64 = 1e-12;

/// Grid used to screen H^2(a) >= 0; models that go negative anywhere on it
/// (all of them recollapse eventually) are rejected up front. The screen is
/// a sampled check: a sign dip strictly between grid points surfaces later
/// as `NegativeRadicand` during integration.
const RECOLLAPSE_SCAN_MIN: f64 = 1e-4;
const RECOLLAPSE_SCAN_MAX: f64 = 1e4;
const RECOLLAPSE_SCAN_POINTS: usize = 4096;

/// Sign of the spatial curvature k; opposite in sign to omega_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSign {
    /// k = -1 (omega_k > 0)
    Open,
    /// k = 0
    Flat,
    /// k = +1 (omega_k < 0)
    Closed,
}

impl CurvatureSign {
    pub fn as_i8(&self) -> i8 {
        match self {
            Self::Open => -1,
            Self::Flat => 0,
            Self::Closed => 1,
        }
    }
}

/// Density parameters, curvature and boundary unit scales of an FLRW model.
///
/// `omega_k` is always the derived value `1 - omega_m - omega_r -
/// omega_lambda`; it is never stored independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosmologyModel {
    hubble0: f64,
    omega_m: f64,
    omega_r: f64,
    omega_lambda: f64,
    omega_k: f64,
    curvature_sign: CurvatureSign,
    light_speed: f64,
}

impl CosmologyModel {
    /// Validates parameters, derives curvature, and rejects any model whose
    /// H^2(a) dips negative on the scan range (recollapse).
    pub fn new(
        hubble0: f64,
        omega_m: f64,
        omega_r: f64,
        omega_lambda: f64,
        light_speed: f64,
    ) -> Result<Self, CosmologyError> {
        if !(hubble0 > 0.0) {
            return Err(CosmologyError::NonPositiveHubble(hubble0));
        }
        if !(omega_m >= 0.0) {
            return Err(CosmologyError::NegativeDensity {
                name: "omega_m",
                value: omega_m,
            });
        }
        if !(omega_r >= 0.0) {
            return Err(CosmologyError::NegativeDensity {
                name: "omega_r",
                value: omega_r,
            });
        }
        if !omega_lambda.is_finite() {
            return Err(CosmologyError::NegativeDensity {
                name: "omega_lambda",
                value: omega_lambda,
            });
        }
        if !(light_speed > 0.0) {
            return Err(CosmologyError::NonPositiveLightSpeed(light_speed));
        }

        let omega_k = 1.0 - omega_m - omega_r - omega_lambda;
        let curvature_sign = if omega_k.abs() <= CURVATURE_TOLERANCE {
            CurvatureSign::Flat
        } else if omega_k > 0.0 {
            CurvatureSign::Open
        } else {
            CurvatureSign::Closed
        };

        let model = Self {
            hubble0,
            omega_m,
            omega_r,
            omega_lambda,
            omega_k,
            curvature_sign,
            light_speed,
        };
        model.screen_recollapse()?;
        Ok(model)
    }

    fn screen_recollapse(&self) -> Result<(), CosmologyError> {
        let ln_min = RECOLLAPSE_SCAN_MIN.ln();
        let ln_max = RECOLLAPSE_SCAN_MAX.ln();
        for i in 0..RECOLLAPSE_SCAN_POINTS {
            let frac = i as f64 / (RECOLLAPSE_SCAN_POINTS - 1) as f64;
            let a = (ln_min + frac * (ln_max - ln_min)).exp();
            // a^4 H^2/H0^2, same sign as the radicand but polynomial in a.
            let g = self.omega_r
                + self.omega_m * a
                + self.omega_k * a * a
                + self.omega_lambda * a * a * a * a;
            if g < 0.0 {
                return Err(CosmologyError::UnsupportedRecollapse { scale_factor: a });
            }
        }
        Ok(())
    }

    pub fn hubble0(&self) -> f64 {
        self.hubble0
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    pub fn omega_lambda(&self) -> f64 {
        self.omega_lambda
    }

    pub fn omega_k(&self) -> f64 {
        self.omega_k
    }

    pub fn curvature_sign(&self) -> CurvatureSign {
        self.curvature_sign
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    /// E(a) = H(a)/H0, the dimensionless Friedmann factor.
    pub fn dimensionless_hubble(&self, a: f64) -> Result<f64, CosmologyError> {
        debug_assert!(a > 0.0, "scale factor must be positive");
        let a2 = a * a;
        let radicand =
            self.omega_r / (a2 * a2) + self.omega_m / (a2 * a) + self.omega_k / a2 + self.omega_lambda;
        if radicand < 0.0 {
            return Err(CosmologyError::NegativeRadicand { scale_factor: a });
        }
        Ok(radicand.sqrt())
    }

    /// H(a) = H0 sqrt(omega_r a^-4 + omega_m a^-3 + omega_k a^-2 + omega_lambda).
    pub fn hubble_rate(&self, a: f64) -> Result<f64, CosmologyError> {
        Ok(self.hubble0 * self.dimensionless_hubble(a)?)
    }

    /// Comoving curvature radius c/(H0 sqrt(omega_k)) for open models.
    pub fn curvature_radius(&self) -> Option<f64> {
        match self.curvature_sign {
            CurvatureSign::Open => Some(self.light_speed / (self.hubble0 * self.omega_k.sqrt())),
            _ => None,
        }
    }

    /// Comoving volume of a sphere of comoving radius `chi`.
    ///
    /// Flat: (4 pi / 3) chi^3. Open: pi R^3 (sinh(2 chi/R) - 2 chi/R) with
    /// R the comoving curvature radius. Closed models are out of scope.
    pub fn comoving_volume(&self, chi: f64) -> Result<f64, CosmologyError> {
        assert!(chi >= 0.0, "comoving radius must be nonnegative");
        match self.curvature_sign {
            CurvatureSign::Flat => Ok(4.0 * std::f64::consts::PI / 3.0 * chi * chi * chi),
            CurvatureSign::Open => {
                let r = self.curvature_radius().expect("open model has a curvature radius");
                let x = chi / r;
                Ok(std::f64::consts::PI * r * r * r * sinh2x_minus_2x(x))
            }
            CurvatureSign::Closed => Err(CosmologyError::ClosedUniverseUnsupported),
        }
    }
}

/// sinh(2x) - 2x, with the cancellation-prone small-x region handled by its
/// series (4/3)x^3 (1 + (2x)^2/20 + (2x)^4/840).
fn sinh2x_minus_2x(x: f64) -> f64 {
    if x < 1e-3 {
        let u = 2.0 * x;
        let u2 = u * u;
        (4.0 / 3.0) * x * x * x * (1.0 + u2 / 20.0 + u2 * u2 / 840.0)
    } else {
        (2.0 * x).sinh() - 2.0 * x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn einstein_de_sitter_is_flat() {
        let m = CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(m.omega_k(), 0.0);
        assert_eq!(m.curvature_sign(), CurvatureSign::Flat);
        assert_eq!(m.curvature_sign().as_i8(), 0);
    }

    #[test]
    fn low_density_model_is_open() {
        let m = CosmologyModel::new(1.0, 0.3, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(m.omega_k(), 0.7, max_relative = 1e-15);
        assert_eq!(m.curvature_sign(), CurvatureSign::Open);
        assert_eq!(m.curvature_sign().as_i8(), -1);
    }

    #[test]
    fn negative_lambda_recollapse_rejected() {
        // H^2(a) = 0.3 a^-3 + 5.7 a^-2 - 5 crosses zero before a = 2.
        let err = CosmologyModel::new(1.0, 0.3, 0.0, -5.0, 1.0).unwrap_err();
        match err {
            CosmologyError::UnsupportedRecollapse { scale_factor } => {
                assert!(scale_factor < 2.0, "detected at a = {scale_factor}");
            }
            other => panic!("expected recollapse rejection, got {other}"),
        }
    }

    #[test]
    fn closed_non_recollapsing_model_is_accepted() {
        let m = CosmologyModel::new(1.0, 0.3, 0.0, 0.8, 1.0).unwrap();
        assert_eq!(m.curvature_sign(), CurvatureSign::Closed);
        assert_relative_eq!(m.omega_k(), -0.1, max_relative = 1e-12);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(matches!(
            CosmologyModel::new(0.0, 1.0, 0.0, 0.0, 1.0),
            Err(CosmologyError::NonPositiveHubble(_))
        ));
        assert!(matches!(
            CosmologyModel::new(1.0, -0.1, 0.0, 0.0, 1.0),
            Err(CosmologyError::NegativeDensity { name: "omega_m", .. })
        ));
        assert!(matches!(
            CosmologyModel::new(1.0, 0.0, -0.2, 0.0, 1.0),
            Err(CosmologyError::NegativeDensity { name: "omega_r", .. })
        ));
        assert!(matches!(
            CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 0.0),
            Err(CosmologyError::NonPositiveLightSpeed(_))
        ));
    }

    #[test]
    fn curvature_tolerance_boundary() {
        let just_flat = CosmologyModel::new(1.0, 1.0 - 5e-13, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(just_flat.curvature_sign(), CurvatureSign::Flat);
        let open = CosmologyModel::new(1.0, 1.0 - 1e-9, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(open.curvature_sign(), CurvatureSign::Open);
    }

    #[test]
    fn hubble_rate_matter_model() {
        let m = CosmologyModel::new(2.5, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(m.hubble_rate(1.0).unwrap(), 2.5, max_relative = 1e-15);
        assert_relative_eq!(m.hubble_rate(4.0).unwrap(), 2.5 / 8.0, max_relative = 1e-15);
    }

    #[test]
    fn hubble_rate_pure_lambda_constant() {
        let m = CosmologyModel::new(3.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        for a in [0.1, 1.0, 7.3, 120.0] {
            assert_relative_eq!(m.hubble_rate(a).unwrap(), 3.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn flat_volume_is_sphere_volume() {
        let m = CosmologyModel::new(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            m.comoving_volume(1.0).unwrap(),
            4.18879020478639,
            max_relative = 1e-14
        );
    }

    #[test]
    fn open_volume_with_unit_curvature_radius() {
        // omega_k = 1 and h0 = c = 1 gives R = 1; V(1) = pi (sinh 2 - 2).
        let m = CosmologyModel::new(1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(m.curvature_radius(), Some(1.0));
        let v = m.comoving_volume(1.0).unwrap();
        assert_relative_eq!(
            v,
            std::f64::consts::PI * (2.0f64.sinh() - 2.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(v, 5.1109, max_relative = 1e-4);
    }

    #[test]
    fn open_volume_approaches_flat_for_small_radius() {
        let m = CosmologyModel::new(1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        for chi in [1e-2, 1e-4, 1e-6] {
            let flat = 4.0 * std::f64::consts::PI / 3.0 * chi * chi * chi;
            let ratio = m.comoving_volume(chi).unwrap() / flat;
            assert!((ratio - 1.0).abs() < 2.0 * chi * chi, "chi = {chi}: ratio {ratio}");
        }
    }

    #[test]
    fn closed_volume_unsupported() {
        let m = CosmologyModel::new(1.0, 0.3, 0.0, 0.8, 1.0).unwrap();
        assert_eq!(
            m.comoving_volume(1.0).unwrap_err(),
            CosmologyError::ClosedUniverseUnsupported
        );
    }

    #[test]
    fn series_and_direct_sinh_agree_at_the_switch() {
        for x in [9e-4, 1e-3, 1.1e-3] {
            let direct = (2.0f64 * x).sinh() - 2.0 * x;
            assert_relative_eq!(sinh2x_minus_2x(x), direct, max_relative = 1e-12);
        }
    }
}
