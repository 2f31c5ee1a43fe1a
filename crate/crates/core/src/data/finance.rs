use crate::error::ValidationError;

/// `r(1+r)^n / ((1+r)^n − 1)`, or `1/n` at a zero rate.
pub fn capital_recovery_factor(lifetime_years: f64, discount_rate: f64) -> f64 {
    if discount_rate == 0.0 {
        return 1.0 / lifetime_years;
    }
    let g = (1.0 + discount_rate).powf(lifetime_years);
    discount_rate * g / (g - 1.0)
}

/// Spreads an overnight capital cost into equal real annual payments.
pub fn annualize_capital(capital: f64, lifetime_years: f64, discount_rate: f64) -> f64 {
    capital * capital_recovery_factor(lifetime_years, discount_rate)
}

/// Linear loss over distance; lines that would lose everything are rejected.
pub fn derive_link_loss(loss_rate_per_1000km: f64, length_km: f64) -> Result<f64, ValidationError> {
    if loss_rate_per_1000km < 0.0 || length_km < 0.0 {
        return Err(ValidationError::new("loss rate and length must be non-negative"));
    }
    let loss = loss_rate_per_1000km * length_km / 1000.0;
    if loss >= 1.0 {
        return Err(ValidationError::new(format!(
            "loss fraction {loss} over {length_km} km is not below 1 (link too long)"
        )));
    }
    Ok(loss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Present value of an n-year annuity of 1, summed term by term.
    fn annuity_oracle(n: u32, r: f64) -> f64 {
        (1..=n).map(|k| (1.0 + r).powi(-(k as i32))).sum()
    }

    #[test]
    fn electrolyzer_2020_capital() {
        let crf = 1.0 / annuity_oracle(25, 0.08);
        assert!((crf - 0.09368).abs() < 5e-6);
        let annual = annualize_capital(1245.0, 25.0, 0.08);
        assert!((annual - 116.63).abs() < 5e-3, "{annual}");
        assert!((annual - 1245.0 * crf).abs() < 1e-9);
    }

    #[test]
    fn battery_energy_2050_capital() {
        let crf = 1.0 / annuity_oracle(15, 0.08);
        assert!((crf - 0.11683).abs() < 5e-6);
        let annual = annualize_capital(111.0, 15.0, 0.08);
        assert!((annual - 12.97).abs() < 5e-3, "{annual}");
    }

    #[test]
    fn one_year_at_zero_rate_recovers_capital() {
        assert_eq!(annualize_capital(1234.5, 1.0, 0.0), 1234.5);
        assert_eq!(capital_recovery_factor(20.0, 0.0), 0.05);
    }

    #[test]
    fn loss_scaling() {
        assert!((derive_link_loss(0.053, 1000.0).unwrap() - 0.053).abs() < 1e-15);
        assert!((derive_link_loss(0.013, 500.0).unwrap() - 0.0065).abs() < 1e-15);
        assert_eq!(derive_link_loss(0.3, 0.0).unwrap(), 0.0);
        assert!(derive_link_loss(0.053, 20_000.0).is_err());
        assert!(derive_link_loss(-0.1, 10.0).is_err());
    }

    proptest! {
        #[test]
        fn homogeneous_in_capital(c in 0.0f64..1e6, k in 0.0f64..10.0, n in 1.0f64..100.0, r in 0.0f64..0.3) {
            let lhs = annualize_capital(k * c, n, r);
            let rhs = k * annualize_capital(c, n, r);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }

        #[test]
        fn monotone_in_rate(n in 1.0f64..100.0, r in 0.0f64..0.3, dr in 0.0f64..0.1) {
            prop_assert!(capital_recovery_factor(n, r + dr) >= capital_recovery_factor(n, r) - 1e-12);
        }

        #[test]
        fn matches_annuity_oracle(n in 1u32..80, r in 0.001f64..0.3) {
            let crf = capital_recovery_factor(n as f64, r);
            prop_assert!((crf * annuity_oracle(n, r) - 1.0).abs() < 1e-9);
        }
    }
}
