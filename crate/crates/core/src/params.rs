//! The two equivalent parameterizations of the model and the quantities that
//! depend only on parameters: conditional tie log-odds by dyad class and the
//! homogeneous Bernoulli bounds on marginal tie probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ClassGroup, DyadClass};

/// Natural parameters `(theta_e, theta_c)` weighting edge count and
/// concurrent-vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub theta_e: f64,
    pub theta_c: f64,
}

/// Physical form: edge temperature `T` and concurrency energy `phi_c`, with the
/// edge energy and Boltzmann constant both fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub temperature: f64,
    pub phi_c: f64,
}

impl ModelParams {
    pub const fn new(theta_e: f64, theta_c: f64) -> Self {
        Self { theta_e, theta_c }
    }

    /// `theta . delta` for a change-score pair.
    #[inline]
    pub fn dot(&self, delta_e: i64, delta_c: i64) -> f64 {
        self.theta_e * delta_e as f64 + self.theta_c * delta_c as f64
    }

    pub fn to_physical(&self) -> Result<PhysicalParams> {
        if self.theta_e == 0.0 {
            return Err(Error::InfiniteTemperature);
        }
        Ok(PhysicalParams {
            temperature: -1.0 / self.theta_e,
            phi_c: self.theta_c / self.theta_e,
        })
    }

    /// Log-odds of the tie given the rest of the graph, for a dyad of class `c`.
    pub fn conditional_tie_logodds(&self, c: DyadClass) -> f64 {
        self.group_logodds(c.group())
    }

    pub fn group_logodds(&self, g: ClassGroup) -> f64 {
        self.theta_e + self.theta_c * g.pendant_count() as f64
    }

    pub fn conditional_tie_prob(&self, c: DyadClass) -> f64 {
        inv_logit(self.conditional_tie_logodds(c))
    }

    /// Marginal tie-probability bounds from the extreme change scores.
    ///
    /// For `theta_c <= 0` the lower bound is `logit^-1(theta_e + 2 theta_c)`
    /// and the upper is `logit^-1(theta_e)`. For `theta_c > 0` the two roles
    /// swap, so the returned pair is always ordered `lower <= upper`.
    pub fn bernoulli_bounds(&self) -> (f64, f64) {
        let a = inv_logit(self.theta_e + 2.0 * self.theta_c);
        let b = inv_logit(self.theta_e);
        if self.theta_c <= 0.0 {
            (a, b)
        } else {
            (b, a)
        }
    }
}

impl PhysicalParams {
    pub fn new(temperature: f64, phi_c: f64) -> Result<Self> {
        if temperature == 0.0 || !temperature.is_finite() {
            return Err(Error::InvalidTemperature(temperature));
        }
        Ok(Self { temperature, phi_c })
    }

    pub fn to_model(&self) -> ModelParams {
        ModelParams {
            theta_e: -1.0 / self.temperature,
            theta_c: -self.phi_c / self.temperature,
        }
    }

    /// Energy `phi . t` in edge units.
    #[inline]
    pub fn energy(&self, edges: f64, concurrent: f64) -> f64 {
        edges + self.phi_c * concurrent
    }
}

#[inline]
pub fn inv_logit(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const REFERENCE: ModelParams = ModelParams::new(-1.631, -5.502);

    #[test]
    fn logodds_by_class() {
        assert_relative_eq!(REFERENCE.conditional_tie_logodds(DyadClass::II), -1.631);
        assert_relative_eq!(REFERENCE.conditional_tie_prob(DyadClass::II), 0.163_68, epsilon = 1e-4);
        assert_relative_eq!(REFERENCE.conditional_tie_logodds(DyadClass::PP), -12.635, epsilon = 1e-12);
        assert_relative_eq!(REFERENCE.conditional_tie_logodds(DyadClass::PC), -7.133, epsilon = 1e-12);
        let zero = ModelParams::new(0.0, 0.0);
        for c in DyadClass::ALL {
            assert_eq!(zero.conditional_tie_logodds(c), 0.0);
            assert_eq!(zero.conditional_tie_prob(c), 0.5);
        }
    }

    #[test]
    fn bounds() {
        let (lo, hi) = REFERENCE.bernoulli_bounds();
        assert_relative_eq!(lo, (-12.635f64).exp() / (1.0 + (-12.635f64).exp()), max_relative = 1e-12);
        assert!((lo / 3.27e-6 - 1.0).abs() < 0.01);
        assert_relative_eq!(hi, 0.163_68, epsilon = 1e-4);
        assert_eq!(ModelParams::new(0.0, 0.0).bernoulli_bounds(), (0.5, 0.5));

        let (lo, hi) = ModelParams::new(-6.0, -1.0).bernoulli_bounds();
        let ratio = lo / hi;
        let target = (-2.0f64).exp();
        assert!((ratio / target - 1.0).abs() < 0.15, "ratio {ratio}");
    }

    #[test]
    fn bounds_swap_for_pendant_avoidance() {
        let p = ModelParams::new(-1.0, 0.5);
        let (lo, hi) = p.bernoulli_bounds();
        assert!(lo < hi);
        assert_relative_eq!(lo, inv_logit(-1.0));
        assert_relative_eq!(hi, inv_logit(0.0));
    }

    #[test]
    fn physical_conversion() {
        let pp = REFERENCE.to_physical().unwrap();
        assert_relative_eq!(pp.temperature, 0.6131, epsilon = 1e-4);
        assert_relative_eq!(pp.phi_c, 3.373, epsilon = 1e-3);

        let pp = ModelParams::new(-1.0, 0.0).to_physical().unwrap();
        assert_eq!(pp.temperature, 1.0);
        assert_eq!(pp.phi_c, 0.0);

        assert!(matches!(
            ModelParams::new(0.0, -1.0).to_physical(),
            Err(Error::InfiniteTemperature)
        ));
        assert!(PhysicalParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn round_trip_grid() {
        for a in 0..10 {
            for b in 0..10 {
                let p = ModelParams::new(-6.0 + 1.3 * a as f64 + 0.01, -7.0 + 1.55 * b as f64);
                let q = p.to_physical().unwrap().to_model();
                assert_relative_eq!(p.theta_e, q.theta_e, max_relative = 1e-12);
                assert_relative_eq!(p.theta_c, q.theta_c, max_relative = 1e-12, epsilon = 1e-300);
            }
        }
    }

    #[test]
    fn inv_logit_extremes() {
        assert_eq!(inv_logit(-800.0), 0.0);
        assert_eq!(inv_logit(800.0), 1.0);
        assert_relative_eq!(inv_logit(-40.0), (-40.0f64).exp(), max_relative = 1e-12);
    }
}
