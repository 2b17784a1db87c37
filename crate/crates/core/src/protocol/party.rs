use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ProtocolError;
use crate::coding::{BitString, Codec};
use crate::quantum::Party;

/// How many ones and zeros the sender must collect for one codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodewordTarget {
    pub ones: usize,
    pub zeros: usize,
}

#[derive(Clone, Debug)]
pub struct PartyState {
    pub role: Party,
    pub seed: BitString,
    /// The concatenation of all encoded seed blocks.
    pub seed_ecc: BitString,
    pub codewords: Vec<BitString>,
    pub targets: Vec<CodewordTarget>,
    /// Rounds in which this party sent 0 / 1 for the current codeword.
    pub zero_set: Vec<usize>,
    pub one_set: Vec<usize>,
    /// Bits received from the other party, by round index.
    pub received_table: BTreeMap<usize, u8>,
    pub current: usize,
    /// Messages decoded from the other party's codewords.
    pub decoded: Vec<BitString>,
    rng: ChaCha8Rng,
}

/// Encodes `seed` block by block. The party's private randomness for
/// round bits and permutation draws comes from `rng_seed`.
pub fn setup_party(role: Party, seed: BitString, codec: &Codec, rng_seed: u64) -> Result<PartyState, ProtocolError> {
    let k = codec.params().k;
    if seed.is_empty() || !seed.len().is_multiple_of(k) {
        return Err(ProtocolError::SeedNotDivisible { n: seed.len(), k });
    }
    let codewords = seed.chunks(k).map(|m| codec.encode(&m)).collect::<Result<Vec<_>, _>>()?;
    let targets = codewords
        .iter()
        .map(|c| CodewordTarget {
            ones: c.count_ones(),
            zeros: c.count_zeros(),
        })
        .collect();
    let seed_ecc = codewords.iter().fold(BitString::new(), |acc, c| acc.concat(c));
    Ok(PartyState {
        role,
        seed,
        seed_ecc,
        codewords,
        targets,
        zero_set: Vec::new(),
        one_set: Vec::new(),
        received_table: BTreeMap::new(),
        current: 0,
        decoded: Vec::new(),
        rng: ChaCha8Rng::seed_from_u64(rng_seed),
    })
}

impl PartyState {
    /// Generates a fresh random seed of `n` bits from the party's own randomness.
    pub fn random(role: Party, n: usize, codec: &Codec, rng_seed: u64) -> Result<Self, ProtocolError> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let seed = BitString::random(n, &mut rng);
        let mut state = setup_party(role, seed, codec, rng_seed)?;
        state.rng = rng;
        Ok(state)
    }

    pub fn finished(&self) -> bool {
        self.current >= self.codewords.len()
    }

    /// Coded bits carried per party over the whole session.
    pub fn coded_len(&self) -> usize {
        self.seed_ecc.len()
    }

    pub fn current_codeword(&self) -> Option<&BitString> {
        self.codewords.get(self.current)
    }

    /// True once enough zeros and ones are stored for the current codeword.
    pub fn ready(&self) -> bool {
        self.targets
            .get(self.current)
            .is_some_and(|t| self.zero_set.len() >= t.zeros && self.one_set.len() >= t.ones)
    }

    /// A uniformly random bit for the next round in which this party sends.
    pub fn next_bit(&mut self) -> u8 {
        u8::from(self.rng.random_bool(0.5))
    }

    pub fn store_sent(&mut self, round: usize, bit: u8) {
        if bit == 0 {
            self.zero_set.push(round);
        } else {
            self.one_set.push(round);
        }
    }

    pub fn store_received(&mut self, round: usize, bit: u8) {
        self.received_table.insert(round, bit);
    }

    /// Leftover indices are dropped and the party moves to its next codeword.
    pub fn advance(&mut self) {
        self.zero_set.clear();
        self.one_set.clear();
        self.current += 1;
    }

    /// Clears collected indices but keeps the same codeword.
    pub fn restart_codeword(&mut self) {
        self.zero_set.clear();
        self.one_set.clear();
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// The other party's seed as reconstructed from decoded codewords.
    pub fn decoded_component(&self) -> BitString {
        self.decoded.iter().fold(BitString::new(), |acc, m| acc.concat(m))
    }
}
