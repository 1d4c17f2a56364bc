//! Unit conventions and the Bose–Einstein map between mean occupation and
//! temperature.
//!
//! Temperatures are absolute and measured in the same unit as `theta0`, the
//! level spacing ħω₀ expressed as a temperature (ħω₀/k). Times are measured in
//! whatever unit `gamma` is the inverse of. No physical constants appear.

use crate::{Error, Result};

/// Level spacing as a temperature and the bare decay constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    theta0: f64,
    gamma: f64,
}

impl PhysicalScales {
    pub fn new(theta0: f64, gamma: f64) -> Result<Self> {
        if !(theta0.is_finite() && theta0 > 0.0) {
            return Err(Error::domain(format!(
                "theta0 must be positive and finite, got {theta0}"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        Ok(PhysicalScales { theta0, gamma })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Mean excitation number of a bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Occupation(f64);

impl Occupation {
    pub fn new(n_bar: f64) -> Result<Self> {
        if !(n_bar.is_finite() && n_bar >= 0.0) {
            return Err(Error::domain(format!(
                "occupation must be finite and >= 0, got {n_bar}"
            )));
        }
        Ok(Occupation(n_bar))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Absolute temperature in units of `theta0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be finite, got {value}"
            )));
        }
        Ok(Temperature(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn require_positive(self) -> Result<f64> {
        if self.0 > 0.0 {
            Ok(self.0)
        } else {
            Err(Error::domain(format!(
                "temperature must be positive to map onto an occupation, got {}",
                self.0
            )))
        }
    }
}

/// Bose–Einstein occupation `1 / (exp(theta0 / T) - 1)`.
pub fn occupation_from_temperature(t: Temperature, scales: &PhysicalScales) -> Result<Occupation> {
    let t = t.require_positive()?;
    let n = 1.0 / (scales.theta0 / t).exp_m1();
    Occupation::new(n)
}

/// Exact inverse of [`occupation_from_temperature`].
pub fn temperature_from_occupation(n: Occupation, scales: &PhysicalScales) -> Result<Temperature> {
    if n.0 <= 0.0 {
        return Err(Error::domain(
            "zero occupation corresponds to T = 0, which is not representable",
        ));
    }
    Temperature::new(scales.theta0 / (1.0 / n.0).ln_1p())
}

/// High-temperature (classical) limit `T / theta0`.
pub fn high_temp_occupation(t: Temperature, scales: &PhysicalScales) -> Result<Occupation> {
    let t = t.require_positive()?;
    Occupation::new(t / scales.theta0)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit() -> PhysicalScales {
        PhysicalScales::new(1.0, 1.0).unwrap()
    }

    fn temp(v: f64) -> Temperature {
        Temperature::new(v).unwrap()
    }

    #[test]
    fn ln2_temperature_gives_unit_occupation() {
        let n = occupation_from_temperature(temp(1.0 / 2f64.ln()), &unit()).unwrap();
        assert_relative_eq!(n.value(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn occupation_at_200_and_2000() {
        let n200 = occupation_from_temperature(temp(200.0), &unit())
            .unwrap()
            .value();
        // 1 / (e^0.005 - 1)
        assert!((n200 - 199.500_416_7).abs() < 1e-6, "{n200}");
        let n2000 = occupation_from_temperature(temp(2000.0), &unit())
            .unwrap()
            .value();
        assert!((n2000 - 1999.5).abs() < 1e-3);
        let classical = high_temp_occupation(temp(2000.0), &unit()).unwrap().value();
        assert_eq!(classical, 2000.0);
        assert!((classical - n2000).abs() / n2000 < 3e-4);
    }

    #[test]
    fn inverse_map_examples() {
        let t = temperature_from_occupation(Occupation::new(1.0).unwrap(), &unit()).unwrap();
        assert_relative_eq!(t.value(), 1.442_695_040_888_963, max_relative = 1e-14);
        let t = temperature_from_occupation(Occupation::new(199.50).unwrap(), &unit()).unwrap();
        assert!((t.value() - 200.0).abs() < 1e-3);
    }

    #[test]
    fn high_temp_limit_examples() {
        let s = PhysicalScales::new(2.0, 1.0).unwrap();
        assert_eq!(high_temp_occupation(temp(2.0), &s).unwrap().value(), 1.0);
        // theta0 / T = 0.1: 10 vs 1 / (e^0.1 - 1) = 9.508..., about 5 %
        let exact = occupation_from_temperature(temp(10.0), &unit())
            .unwrap()
            .value();
        let approx = high_temp_occupation(temp(10.0), &unit()).unwrap().value();
        let rel = (approx - exact) / exact;
        assert!((rel - 0.0517).abs() < 1e-3, "{rel}");
    }

    #[test]
    fn domain_errors() {
        assert!(occupation_from_temperature(temp(0.0), &unit()).is_err());
        assert!(occupation_from_temperature(temp(-3.0), &unit()).is_err());
        assert!(Temperature::new(f64::NAN).is_err());
        assert!(temperature_from_occupation(Occupation::new(0.0).unwrap(), &unit()).is_err());
        assert!(Occupation::new(-1e-3).is_err());
        assert!(PhysicalScales::new(0.0, 1.0).is_err());
        assert!(PhysicalScales::new(1.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_over_range(log_t in (0.01f64).ln()..(1e4f64).ln(), theta0 in 0.1f64..10.0) {
            let s = PhysicalScales::new(theta0, 1.0).unwrap();
            let t = theta0 * log_t.exp();
            let n = occupation_from_temperature(temp(t), &s).unwrap();
            let back = temperature_from_occupation(n, &s).unwrap().value();
            prop_assert!(((back - t) / t).abs() < 1e-12);
        }

        #[test]
        fn occupation_is_increasing(t in 0.05f64..1e3, dt in 1e-6f64..10.0) {
            let a = occupation_from_temperature(temp(t), &unit()).unwrap().value();
            let b = occupation_from_temperature(temp(t + dt), &unit()).unwrap().value();
            prop_assert!(b > a);
        }

        #[test]
        fn classical_limit_within_one_percent(ratio in 50.0f64..1e5) {
            let exact = occupation_from_temperature(temp(ratio), &unit()).unwrap().value();
            let approx = high_temp_occupation(temp(ratio), &unit()).unwrap().value();
            prop_assert!((approx - exact).abs() / exact < 0.01);
        }
    }
}
