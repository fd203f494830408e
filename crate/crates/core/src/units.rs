//! Conversion between micromolar concentrations and molecule counts.
//!
//! The conversion factor is `alpha = 1 / (N_A · 1e-6 · V)` for a volume `V`
//! in liters, so one molecule corresponds to `alpha` µM.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const AVOGADRO: f64 = 6.022_140_76e23;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitError {
    #[error("volume must be positive, got {0}")]
    Volume(f64),
    #[error("alpha must be positive, got {0}")]
    Alpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityRole {
    Concentration,
    UnimolecularRate,
    BimolecularRate,
    ZerothOrderRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToCounts,
    ToConcentration,
}

pub fn compute_alpha(volume_liters: f64) -> Result<f64, UnitError> {
    if !(volume_liters > 0.0) || !volume_liters.is_finite() {
        return Err(UnitError::Volume(volume_liters));
    }
    Ok(1.0 / (AVOGADRO * 1e-6 * volume_liters))
}

/// Converts `value` between concentration and count units.
///
/// Concentrations and zeroth-order rates divide by alpha on the way to
/// counts; bimolecular constants multiply; first-order constants are unit-free
/// with respect to volume.
pub fn convert_units(value: f64, role: QuantityRole, alpha: f64, direction: Direction) -> Result<f64, UnitError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(UnitError::Alpha(alpha));
    }
    let out = match (role, direction) {
        (QuantityRole::UnimolecularRate, _) => value,
        (QuantityRole::Concentration | QuantityRole::ZerothOrderRate, Direction::ToCounts) => value / alpha,
        (QuantityRole::Concentration | QuantityRole::ZerothOrderRate, Direction::ToConcentration) => value * alpha,
        (QuantityRole::BimolecularRate, Direction::ToCounts) => value * alpha,
        (QuantityRole::BimolecularRate, Direction::ToConcentration) => value / alpha,
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn femtoliter_alpha() {
        let a = compute_alpha(1e-15).unwrap();
        assert!((a - 1.660_539e-3).abs() < 1e-8);
        let b = compute_alpha(1e-14).unwrap();
        assert!((b - 1.660_539e-4).abs() < 1e-9);
    }

    #[test]
    fn table_alpha_volume() {
        let a = compute_alpha(9.95e-16).unwrap();
        assert!((a - 0.00167).abs() < 1e-5, "{a}");
    }

    #[test]
    fn km_to_counts() {
        let km = convert_units(0.5, QuantityRole::Concentration, 0.00167, Direction::ToCounts).unwrap();
        assert!((km - 299.4).abs() < 0.1);
        assert_eq!(km.round(), 299.0);
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(compute_alpha(0.0), Err(UnitError::Volume(0.0)));
        assert_eq!(compute_alpha(-1.0), Err(UnitError::Volume(-1.0)));
        assert!(convert_units(1.0, QuantityRole::Concentration, 0.0, Direction::ToCounts).is_err());
        assert!(convert_units(1.0, QuantityRole::Concentration, -2.0, Direction::ToCounts).is_err());
    }

    #[test]
    fn unimolecular_rates_pass_through() {
        let v = convert_units(99.0, QuantityRole::UnimolecularRate, 0.00167, Direction::ToCounts).unwrap();
        assert_eq!(v, 99.0);
    }

    fn role() -> impl Strategy<Value = QuantityRole> {
        prop_oneof![
            Just(QuantityRole::Concentration),
            Just(QuantityRole::UnimolecularRate),
            Just(QuantityRole::BimolecularRate),
            Just(QuantityRole::ZerothOrderRate),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(value in 1e-6f64..1e6, alpha in 1e-8f64..1.0, role in role()) {
            let there = convert_units(value, role, alpha, Direction::ToCounts).unwrap();
            let back = convert_units(there, role, alpha, Direction::ToConcentration).unwrap();
            prop_assert!(((back - value) / value).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn alpha_inverts_volume_product(v in 1e-20f64..1e-6) {
            let a = compute_alpha(v).unwrap();
            prop_assert!((a * (AVOGADRO * 1e-6 * v) - 1.0).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn alpha_decreases_with_volume(v in 1e-18f64..1e-10, f in 1.001f64..100.0) {
            prop_assert!(compute_alpha(v * f).unwrap() < compute_alpha(v).unwrap());
        }
    }
}
