//! Toeplitz hashing over GF(2).
//!
//! `T[i][j] = seed[(n-1) + i - j]`, so `seed[n-1]` sits on the main diagonal,
//! `seed[0]` in the top-right corner and `seed[l+n-2]` in the bottom-left.
//! Output bit `i` is the parity of row `i` against the input.

use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::coding::BitString;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToeplitzSpec {
    pub out_len: usize,
    pub in_len: usize,
    pub seed: BitString,
}

impl ToeplitzSpec {
    pub fn new(out_len: usize, in_len: usize, seed: BitString) -> Result<Self, ProtocolError> {
        if out_len == 0 || in_len == 0 {
            return Err(ProtocolError::Config("Toeplitz dimensions must be positive".into()));
        }
        let expected = out_len + in_len - 1;
        if seed.len() != expected {
            return Err(ProtocolError::ToeplitzSeed {
                expected,
                actual: seed.len(),
            });
        }
        Ok(Self { out_len, in_len, seed })
    }

    pub fn random<R: rand::Rng + ?Sized>(out_len: usize, in_len: usize, rng: &mut R) -> Result<Self, ProtocolError> {
        Self::new(out_len, in_len, BitString::random((out_len + in_len).saturating_sub(1), rng))
    }
}

fn pack(bits: impl Iterator<Item = u8>, len: usize) -> Vec<u64> {
    let mut words = vec![0u64; len.div_ceil(64) + 1];
    for (k, b) in bits.enumerate() {
        words[k / 64] |= u64::from(b) << (k % 64);
    }
    words
}

fn window(words: &[u64], offset: usize) -> u64 {
    let (w, s) = (offset / 64, offset % 64);
    if s == 0 {
        words[w]
    } else {
        (words[w] >> s) | (words.get(w + 1).copied().unwrap_or(0) << (64 - s))
    }
}

pub fn toeplitz_extract(spec: &ToeplitzSpec, input: &BitString) -> Result<BitString, ProtocolError> {
    let (l, n) = (spec.out_len, spec.in_len);
    if input.len() != n {
        return Err(crate::coding::CodingError::LengthMismatch {
            expected: n,
            actual: input.len(),
        }
        .into());
    }
    // with R[k] = seed[L-1-k], row i is the slice R[l-1-i ..][..n]
    let total = spec.seed.len();
    let reversed = pack(spec.seed.bits().iter().rev().copied(), total);
    let x = pack(input.iter(), n);
    let tail = n % 64;
    let out = (0..l)
        .map(|i| {
            let start = l - 1 - i;
            let mut acc = 0u64;
            for (w, &xw) in x.iter().enumerate().take(n.div_ceil(64)) {
                let mut r = window(&reversed, start + 64 * w);
                if tail != 0 && w == n / 64 {
                    r &= (1u64 << tail) - 1;
                }
                acc ^= r & xw;
            }
            (acc.count_ones() & 1) as u8
        })
        .collect();
    Ok(out)
}
