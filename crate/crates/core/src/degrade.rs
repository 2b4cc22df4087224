//! Synthetic low-contrast degrader: `x -> clamp(bias + gain * x^gamma, 0, 1)`
//! in the unit domain, then quantized back to 8 bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{quantize, RgbImage8};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegradeParams {
    pub gain: f64,
    pub bias: f64,
    pub gamma: f64,
}

impl Default for DegradeParams {
    /// Compresses the full range into `[0.3, 0.7]`.
    fn default() -> Self {
        Self {
            gain: 0.4,
            bias: 0.3,
            gamma: 1.0,
        }
    }
}

impl DegradeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain > 0.0 && self.gain.is_finite()) {
            return Err(Error::InvalidConfig(format!("gain must be positive, got {}", self.gain)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidConfig(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !self.bias.is_finite() {
            return Err(Error::InvalidConfig(format!("bias must be finite, got {}", self.bias)));
        }
        Ok(())
    }

    /// Lookup table over the 256 input levels.
    pub fn lut(&self) -> [u8; 256] {
        std::array::from_fn(|v| {
            let x = v as f64 / 255.0;
            quantize((self.bias + self.gain * x.powf(self.gamma)).clamp(0.0, 1.0))
        })
    }
}

pub fn degrade(img: &RgbImage8, params: &DegradeParams) -> Result<RgbImage8> {
    params.validate()?;
    let lut = params.lut();
    let [r, g, b] = img.planes().map(|p| p.map_levels(&lut));
    RgbImage8::new(r, g, b)
}
