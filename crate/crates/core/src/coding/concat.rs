//! BCH blocks under a majority-vote inner code.
//!
//! A message is split into `K`-bit blocks, each block is BCH encoded, the
//! concatenation is tripled bit by bit. Decoding takes the majority of every
//! triple first and then decodes each BCH block on its own.

use serde::Serialize;

use super::bch::BchCode;
use super::bits::BitString;
use super::mvc::{mvc_decode, mvc_encode};
use super::{CodeParams, CodingError, DecodeResult, DecodeStatus};

/// Number of BCH(31, 11) blocks needed for a 256-bit key (24 · 11 = 264).
pub const KEY_BLOCKS: usize = 24;

#[derive(Clone, Debug)]
pub struct ConcatenatedCode {
    inner: BchCode,
    blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcatDecodeResult {
    pub message: BitString,
    pub corrected_errors: usize,
    pub status: DecodeStatus,
    pub block_status: Vec<DecodeStatus>,
    pub failed_blocks: Vec<usize>,
}

impl ConcatenatedCode {
    pub fn new(inner: BchCode, blocks: usize) -> Self {
        Self { inner, blocks }
    }

    /// The 2232-bit code carrying 264 message bits.
    pub fn key_code() -> Self {
        Self::new(BchCode::bch_31_11(), KEY_BLOCKS)
    }

    pub fn message_len(&self) -> usize {
        self.blocks * self.inner.params().k
    }

    pub fn codeword_len(&self) -> usize {
        3 * self.blocks * self.inner.params().n
    }

    pub fn inner(&self) -> &BchCode {
        &self.inner
    }

    pub fn encode(&self, message: &BitString) -> Result<BitString, CodingError> {
        if message.len() != self.message_len() {
            return Err(CodingError::LengthMismatch {
                expected: self.message_len(),
                actual: message.len(),
            });
        }
        let k = self.inner.params().k;
        let mut outer = BitString::new();
        for block in message.chunks(k) {
            outer = outer.concat(&self.inner.encode(&block)?);
        }
        Ok(mvc_encode(&outer))
    }

    pub fn decode(&self, word: &BitString) -> Result<ConcatDecodeResult, CodingError> {
        if word.len() != self.codeword_len() {
            return Err(CodingError::LengthMismatch {
                expected: self.codeword_len(),
                actual: word.len(),
            });
        }
        let (outer, majority_fixes) = mvc_decode(word)?;
        let n = self.inner.params().n;
        let mut message = BitString::new();
        let mut corrected = majority_fixes;
        let mut block_status = Vec::with_capacity(self.blocks);
        let mut failed_blocks = Vec::new();
        for (i, block) in outer.chunks(n).enumerate() {
            let r = self.inner.decode(&block)?;
            if r.status == DecodeStatus::Uncorrectable {
                failed_blocks.push(i);
            }
            corrected += r.corrected_errors * 3;
            block_status.push(r.status);
            message = message.concat(&r.message);
        }
        let status = if failed_blocks.is_empty() {
            DecodeStatus::Ok
        } else {
            DecodeStatus::Uncorrectable
        };
        Ok(ConcatDecodeResult {
            message,
            corrected_errors: corrected,
            status,
            block_status,
            failed_blocks,
        })
    }
}

/// One BCH block under the majority-vote code, used as the protocol's unit
/// codeword: `(3n, k)` with guaranteed radius `2t + 1`.
#[derive(Clone, Debug)]
pub struct MajorityBch {
    inner: BchCode,
}

impl MajorityBch {
    pub fn new(inner: BchCode) -> Self {
        Self { inner }
    }

    pub fn params(&self) -> CodeParams {
        let p = self.inner.params();
        // t+1 broken triples need at least 2(t+1) flips
        CodeParams {
            n: 3 * p.n,
            k: p.k,
            t: 2 * p.t + 1,
        }
    }

    pub fn inner(&self) -> &BchCode {
        &self.inner
    }

    pub fn encode(&self, message: &BitString) -> Result<BitString, CodingError> {
        Ok(mvc_encode(&self.inner.encode(message)?))
    }

    pub fn decode(&self, word: &BitString) -> Result<DecodeResult, CodingError> {
        let expected = self.params().n;
        if word.len() != expected {
            return Err(CodingError::LengthMismatch {
                expected,
                actual: word.len(),
            });
        }
        let (outer, fixes) = mvc_decode(word)?;
        let r = self.inner.decode(&outer)?;
        Ok(DecodeResult {
            corrected_errors: fixes + 3 * r.corrected_errors,
            ..r
        })
    }
}

/// `concat_encode` for the 264 → 2232 key code.
pub fn concat_encode(message: &BitString) -> Result<BitString, CodingError> {
    ConcatenatedCode::key_code().encode(message)
}

/// `concat_decode` for the 2232 → 264 key code.
pub fn concat_decode(word: &BitString) -> Result<ConcatDecodeResult, CodingError> {
    ConcatenatedCode::key_code().decode(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{block_success_probability, bsc_transmit, mvc_effective_ber, BscParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lengths() {
        let code = ConcatenatedCode::key_code();
        assert_eq!(code.message_len(), 264);
        assert_eq!(code.codeword_len(), 2232);
        assert!(concat_encode(&BitString::zeros(263)).is_err());
        assert!(concat_decode(&BitString::zeros(2231)).is_err());
    }

    #[test]
    fn noiseless_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(264);
        let m = BitString::random(264, &mut rng);
        let c = concat_encode(&m).unwrap();
        let d = concat_decode(&c).unwrap();
        assert_eq!(d.status, DecodeStatus::Ok);
        assert_eq!(d.message, m);
        assert_eq!(d.corrected_errors, 0);
    }

    #[test]
    fn reports_failed_blocks() {
        let m = BitString::zeros(264);
        let mut c = concat_encode(&m).unwrap();
        // break 6 triples inside block 3: two flips each
        for j in 0..6 {
            let pos = 3 * (3 * 31 + j);
            c.flip(pos);
            c.flip(pos + 1);
        }
        let d = concat_decode(&c).unwrap();
        assert_eq!(d.status, DecodeStatus::Uncorrectable);
        assert!(d.failed_blocks.iter().all(|&b| b == 3));
    }

    #[test]
    fn majority_block_matches_binomial_tail() {
        let block = MajorityBch::new(BchCode::bch_31_11());
        assert_eq!(block.params(), CodeParams { n: 93, k: 11, t: 11 });
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let p = BscParams::new(0.1465).unwrap();
        let trials = 20_000;
        let mut correct = 0usize;
        for _ in 0..trials {
            let m = BitString::random(11, &mut rng);
            let c = block.encode(&m).unwrap();
            let noisy: BitString = c.iter().map(|b| bsc_transmit(b, p, &mut rng)).collect();
            let d = block.decode(&noisy).unwrap();
            correct += usize::from(d.status == DecodeStatus::Ok && d.message == m);
        }
        let rate = correct as f64 / trials as f64;
        let theory = block_success_probability(31, 5, mvc_effective_ber(0.1465)).unwrap();
        // σ ≈ 6.3e-4 at 2·10⁴ trials; miscorrections only lower the rate
        assert!((rate - theory).abs() < 0.004, "rate {rate} theory {theory}");
    }
}
