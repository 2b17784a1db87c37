//! Binary symmetric channel parameters and finite-blocklength estimates.
//!
//! All logarithms are base 2, so every quantity is in bits.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::CodingError;

fn check_probability(name: &'static str, p: f64) -> Result<(), CodingError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CodingError::OutOfRange { name, value: p });
    }
    Ok(())
}

fn check_open_probability(name: &'static str, p: f64) -> Result<(), CodingError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(CodingError::OutOfRange { name, value: p });
    }
    Ok(())
}

fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `h(p) = -p log p - (1-p) log(1-p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64, CodingError> {
    check_probability("p", p)?;
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// `C = 1 - h(p)`.
pub fn channel_capacity(p: f64) -> Result<f64, CodingError> {
    Ok(1.0 - binary_entropy(p)?)
}

/// `V = p(1-p) [log((1-p)/p)]²`; the endpoints take the limit 0.
pub fn channel_dispersion(p: f64) -> Result<f64, CodingError> {
    check_probability("p", p)?;
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let l = ((1.0 - p) / p).log2();
    Ok(p * (1.0 - p) * l * l)
}

/// Gaussian tail `Q(x) = 1 - Φ(x)`.
pub fn gaussian_q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of the standard normal CDF by Acklam's rational approximation
/// (relative error about 1.15e-9), refined by one Halley step on `erfc`.
fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let x = if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    };

    let e = 0.5 * erfc(-x / std::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// `Q⁻¹(ε)` for `ε ∈ (0, 1)`.
pub fn gaussian_q_inv(epsilon: f64) -> Result<f64, CodingError> {
    check_open_probability("epsilon", epsilon)?;
    if epsilon == 0.5 {
        return Ok(0.0);
    }
    Ok(-inverse_normal_cdf(epsilon))
}

/// Normal approximation `nC - √(nV) Q⁻¹(ε) + ½ log n` of the largest
/// reliably decodable payload at blocklength `n`.
pub fn ppv_max_payload(n: u64, epsilon: f64, p: f64) -> Result<f64, CodingError> {
    if n == 0 {
        return Err(CodingError::ZeroLength("n"));
    }
    let n_f = n as f64;
    Ok(n_f * channel_capacity(p)? - (n_f * channel_dispersion(p)?).sqrt() * gaussian_q_inv(epsilon)?
        + 0.5 * n_f.log2())
}

/// `C_S = h(p_E) - h(p)`.
pub fn secrecy_capacity(p: f64, p_eve: f64) -> Result<f64, CodingError> {
    Ok(binary_entropy(p_eve)? - binary_entropy(p)?)
}

/// `ℓ ≈ kC_S - √(kV) Q⁻¹(ε) - √(kV_E) Q⁻¹(δ) + ½ log k`.
pub fn extractable_key_length(k: u64, epsilon: f64, delta: f64, p: f64, p_eve: f64) -> Result<f64, CodingError> {
    if k == 0 {
        return Err(CodingError::ZeroLength("k"));
    }
    let k_f = k as f64;
    let v = channel_dispersion(p)?;
    let v_eve = channel_dispersion(p_eve)?;
    Ok(k_f * secrecy_capacity(p, p_eve)? - (k_f * v).sqrt() * gaussian_q_inv(epsilon)?
        - (k_f * v_eve).sqrt() * gaussian_q_inv(delta)?
        + 0.5 * k_f.log2())
}

/// `P(X ≤ t)` for `X ~ Binomial(n, p)`: the chance that a bounded-distance
/// decoder of radius `t` sees a correctable block.
pub fn block_success_probability(n: u32, t: u32, p: f64) -> Result<f64, CodingError> {
    check_probability("p", p)?;
    if t > n {
        return Err(CodingError::OutOfRange {
            name: "t",
            value: t as f64,
        });
    }
    if t == n {
        return Ok(1.0);
    }
    let mut coeff = 1.0f64;
    let mut total = 0.0;
    for k in 0..=t {
        if k > 0 {
            coeff *= (n - k + 1) as f64 / k as f64;
        }
        total += coeff * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
    }
    Ok(total.min(1.0))
}

/// Inputs of the finite-blocklength sizing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FblInputs {
    pub n: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub p: f64,
    pub p_eve: f64,
    pub k: u64,
}

impl FblInputs {
    pub fn validate(&self) -> Result<(), CodingError> {
        if self.n == 0 {
            return Err(CodingError::ZeroLength("n"));
        }
        if self.k == 0 {
            return Err(CodingError::ZeroLength("k"));
        }
        check_open_probability("epsilon", self.epsilon)?;
        check_open_probability("delta", self.delta)?;
        check_probability("p", self.p)?;
        check_probability("p_eve", self.p_eve)?;
        if self.p > self.p_eve || self.p_eve > 0.5 {
            return Err(CodingError::OutOfRange {
                name: "p_eve",
                value: self.p_eve,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FblReport {
    pub capacity: f64,
    pub dispersion: f64,
    pub payload: f64,
    pub secrecy_capacity: f64,
    pub eve_dispersion: f64,
    pub key_length: f64,
}

pub fn fbl_report(inputs: &FblInputs) -> Result<FblReport, CodingError> {
    inputs.validate()?;
    Ok(FblReport {
        capacity: channel_capacity(inputs.p)?,
        dispersion: channel_dispersion(inputs.p)?,
        payload: ppv_max_payload(inputs.n, inputs.epsilon, inputs.p)?,
        secrecy_capacity: secrecy_capacity(inputs.p, inputs.p_eve)?,
        eve_dispersion: channel_dispersion(inputs.p_eve)?,
        key_length: extractable_key_length(inputs.k, inputs.epsilon, inputs.delta, inputs.p, inputs.p_eve)?,
    })
}
