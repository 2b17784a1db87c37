//! 2-out-of-3 majority-vote (triple repetition) code.

use super::bits::BitString;
use super::CodingError;

/// Repeats every bit three times in place: `b0 b0 b0 b1 b1 b1 …`.
pub fn mvc_encode(message: &BitString) -> BitString {
    message.iter().flat_map(|b| [b, b, b]).collect()
}

/// Majority decision per triple. Also returns how many received bits
/// disagreed with the majority of their triple.
pub fn mvc_decode(word: &BitString) -> Result<(BitString, usize), CodingError> {
    if !word.len().is_multiple_of(3) {
        return Err(CodingError::LengthMismatch {
            expected: word.len().next_multiple_of(3),
            actual: word.len(),
        });
    }
    let mut disagreements = 0;
    let decoded = word
        .bits()
        .chunks_exact(3)
        .map(|triple| {
            let ones = triple.iter().filter(|&&b| b == 1).count();
            let bit = u8::from(ones >= 2);
            disagreements += if bit == 1 { 3 - ones } else { ones };
            bit
        })
        .collect();
    Ok((decoded, disagreements))
}

/// Bit error rate after majority decoding: `3p²(1-p) + p³`.
pub fn mvc_effective_ber(p: f64) -> f64 {
    3.0 * p * p * (1.0 - p) + p * p * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn effective_ber_values() {
        assert_abs_diff_eq!(mvc_effective_ber(0.1465), 0.058_098_3, epsilon = 1e-7);
        assert_eq!(mvc_effective_ber(0.0), 0.0);
        assert_abs_diff_eq!(mvc_effective_ber(0.5), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn corrects_one_flip_per_triple() {
        let m: BitString = "1011".parse().unwrap();
        let mut c = mvc_encode(&m);
        assert_eq!(c.to_string(), "111000111111");
        for triple in 0..4 {
            c.flip(triple * 3 + triple % 3);
        }
        let (d, fixed) = mvc_decode(&c).unwrap();
        assert_eq!(d, m);
        assert_eq!(fixed, 4);
    }

    #[test]
    fn rejects_partial_triples() {
        assert!(mvc_decode(&"1101".parse().unwrap()).is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn decode_inverts_encode(bits in proptest::collection::vec(0u8..2, 0..64), flips in proptest::collection::vec(0usize..3, 64)) {
                let m = BitString::from_bits(&bits).unwrap();
                let mut c = mvc_encode(&m);
                for (i, f) in flips.iter().take(m.len()).enumerate() {
                    c.flip(i * 3 + f);
                }
                prop_assert_eq!(mvc_decode(&c).unwrap().0, m);
            }
        }
    }
}
