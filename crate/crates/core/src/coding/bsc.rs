use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CodingError;

/// Crossover probability of a binary symmetric channel.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BscParams(f64);

impl BscParams {
    pub fn new(p: f64) -> Result<Self, CodingError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(CodingError::OutOfRange { name: "p", value: p });
        }
        Ok(Self(p))
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BscParams {
    type Error = CodingError;
    fn try_from(p: f64) -> Result<Self, Self::Error> {
        Self::new(p)
    }
}

impl From<BscParams> for f64 {
    fn from(p: BscParams) -> f64 {
        p.0
    }
}

/// `m ⊕ 1` with probability `p`, otherwise `m`.
pub fn bsc_transmit<R: Rng + ?Sized>(m: u8, params: BscParams, rng: &mut R) -> u8 {
    let flip = rng.random_bool(params.p());
    (m & 1) ^ u8::from(flip)
}

/// Two-way controlled channel: carries `a` when `b' = 1`, `b` otherwise.
pub fn bsc_controlled<R: Rng + ?Sized>(a: u8, b: u8, b_prime: u8, params: BscParams, rng: &mut R) -> u8 {
    let m = if b_prime == 1 { a } else { b };
    bsc_transmit(m, params, rng)
}
