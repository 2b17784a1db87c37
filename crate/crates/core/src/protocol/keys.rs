use serde::{Deserialize, Serialize};

use super::toeplitz::{toeplitz_extract, ToeplitzSpec};
use super::ProtocolError;
use crate::coding::BitString;

/// Privacy amplification settings. The extractor seed is public and drawn
/// per session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivacyAmplification {
    pub enabled: bool,
    pub out_len: usize,
}

impl PrivacyAmplification {
    pub fn disabled() -> Self {
        Self::default()
    }

    pub fn to(out_len: usize) -> Self {
        Self { enabled: true, out_len }
    }
}

/// Optionally hashes each component, then splits both in half:
/// `K0 = A_low ‖ B_low`, `K1 = A_high ‖ B_high`.
pub fn finalize_keys(
    comp_a: &BitString,
    comp_b: &BitString,
    extractor: Option<&ToeplitzSpec>,
) -> Result<(BitString, BitString), ProtocolError> {
    let (a, b) = match extractor {
        Some(spec) => (toeplitz_extract(spec, comp_a)?, toeplitz_extract(spec, comp_b)?),
        None => (comp_a.clone(), comp_b.clone()),
    };
    if a.len() != b.len() || a.len() % 2 != 0 {
        return Err(ProtocolError::OddKeyLength {
            left: a.len(),
            right: b.len(),
        });
    }
    let h = a.len() / 2;
    let k0 = a.slice(0, h).concat(&b.slice(0, h));
    let k1 = a.slice(h, a.len()).concat(&b.slice(h, b.len()));
    Ok((k0, k1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn direct_concatenation() {
        let (k0, k1) = finalize_keys(&"0011".parse().unwrap(), &"1100".parse().unwrap(), None).unwrap();
        assert_eq!(k0.to_string(), "0011");
        assert_eq!(k1.to_string(), "1100");
    }

    #[test]
    fn odd_or_unequal_lengths_fail() {
        assert!(finalize_keys(&"001".parse().unwrap(), &"110".parse().unwrap(), None).is_err());
        assert!(finalize_keys(&"0011".parse().unwrap(), &"11".parse().unwrap(), None).is_err());
    }

    #[test]
    fn extraction_to_256_bit_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(538);
        let spec = ToeplitzSpec::random(256, 538, &mut rng).unwrap();
        let a = BitString::random(538, &mut rng);
        let b = BitString::random(538, &mut rng);
        let (k0, k1) = finalize_keys(&a, &b, Some(&spec)).unwrap();
        assert_eq!((k0.len(), k1.len()), (256, 256));
        let again = finalize_keys(&a, &b, Some(&spec)).unwrap();
        assert_eq!((k0, k1), again);
    }
}
