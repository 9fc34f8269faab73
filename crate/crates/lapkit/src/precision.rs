use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Working precision for jet arithmetic and series evaluation.
///
/// `significand_bits` is the binary precision of every coefficient,
/// `jet_order` the default truncation order of power-series arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    pub significand_bits: usize,
    pub jet_order: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            significand_bits: 256,
            jet_order: 64,
        }
    }
}

impl PrecisionConfig {
    pub fn new(significand_bits: usize, jet_order: usize) -> Result<Self> {
        if significand_bits < 64 {
            return Err(Error::Config(format!(
                "significand_bits must be >= 64, got {significand_bits}"
            )));
        }
        if jet_order < 1 {
            return Err(Error::Config("jet_order must be >= 1".into()));
        }
        Ok(PrecisionConfig {
            significand_bits,
            jet_order,
        })
    }

    /// Same significand width, different series order.
    pub fn with_order(&self, jet_order: usize) -> Self {
        PrecisionConfig {
            significand_bits: self.significand_bits,
            jet_order,
        }
    }

    pub fn bits(&self) -> usize {
        self.significand_bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_too_small() {
        assert!(PrecisionConfig::new(32, 8).is_err());
        assert!(PrecisionConfig::new(64, 0).is_err());
        assert!(PrecisionConfig::new(64, 1).is_ok());
    }

    #[test]
    fn default_is_256_64() {
        let p = PrecisionConfig::default();
        assert_eq!(p.significand_bits, 256);
        assert_eq!(p.jet_order, 64);
    }
}
