//! Stepsize schedules for the value updates.
//!
//! The harmonic and polynomial kinds satisfy the stochastic-approximation
//! pair Σα_k = ∞ and Σα_k² < ∞. The constant kind deliberately violates the
//! square-summability condition; it is allowed for finite-episode experiments
//! where comparable learning curves matter more than asymptotics.

use super::RlError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepsizeSchedule {
    /// α_k = α₀ for every k.
    Constant { base: f64 },
    /// α_k = α₀ / k.
    Harmonic { base: f64 },
    /// α_k = α₀ / k^p with 0.5 < p ≤ 1.
    Polynomial { base: f64, exponent: f64 },
}

impl StepsizeSchedule {
    pub fn constant(base: f64) -> Result<Self, RlError> {
        check_base(base)?;
        Ok(Self::Constant { base })
    }

    pub fn harmonic(base: f64) -> Result<Self, RlError> {
        check_base(base)?;
        Ok(Self::Harmonic { base })
    }

    pub fn polynomial(base: f64, exponent: f64) -> Result<Self, RlError> {
        check_base(base)?;
        if !(exponent > 0.5 && exponent <= 1.0) {
            return Err(RlError::InvalidStepsizeExponent(exponent));
        }
        Ok(Self::Polynomial { base, exponent })
    }

    /// The stepsize for update number k, counted from 1.
    pub fn stepsize(&self, k: u64) -> f64 {
        debug_assert!(k >= 1, "stepsize index counts from 1");
        match *self {
            Self::Constant { base } => base,
            Self::Harmonic { base } => base / k as f64,
            Self::Polynomial { base, exponent } => base / (k as f64).powf(exponent),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), RlError> {
        match *self {
            Self::Constant { base } | Self::Harmonic { base } => check_base(base),
            Self::Polynomial { base, exponent } => {
                check_base(base)?;
                if !(exponent > 0.5 && exponent <= 1.0) {
                    return Err(RlError::InvalidStepsizeExponent(exponent));
                }
                Ok(())
            }
        }
    }
}

fn check_base(base: f64) -> Result<(), RlError> {
    if !(base > 0.0 && base <= 1.0) {
        return Err(RlError::InvalidStepsizeBase(base));
    }
    Ok(())
}
