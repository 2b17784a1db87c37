use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::coding::{bsc_controlled, BscParams};
use crate::quantum::{ProcessKind, RoundSampler};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ChannelMode {
    /// Classical abstraction: the receiver's bit is flipped with probability `p`.
    Bsc { p: f64 },
    /// Each round is sampled from the process with the fixed instruments.
    ExactQuantum { process: ProcessKind },
}

impl ChannelMode {
    pub fn build(&self) -> Result<Channel, ProtocolError> {
        Ok(match *self {
            ChannelMode::Bsc { p } => Channel::Bsc(BscParams::new(p)?),
            ChannelMode::ExactQuantum { process } => Channel::Quantum(Box::new(RoundSampler::new(&process.build()))),
        })
    }
}

#[derive(Clone, Debug)]
pub enum Channel {
    Bsc(BscParams),
    Quantum(Box<RoundSampler>),
}

impl Channel {
    /// One bit-exchange round. Returns `(K_A, K_B)`: the sender's key bit
    /// is its input, the receiver's is what it read.
    pub fn exchange<R: Rng + ?Sized>(&self, a: u8, b: u8, b_prime: u8, rng: &mut R) -> (u8, u8) {
        match self {
            Channel::Bsc(params) => {
                let received = bsc_controlled(a, b, b_prime, *params, rng);
                if b_prime == 1 {
                    (a, received)
                } else {
                    (received, b)
                }
            }
            Channel::Quantum(sampler) => {
                let o = sampler.sample(a, b, b_prime, rng);
                (o.key_alice, o.key_bob)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn compliance(channel: &Channel, rounds: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let agree = (0..rounds)
            .filter(|_| {
                let (a, b, bp) = (rng.random_range(0..2), rng.random_range(0..2), rng.random_range(0..2));
                let (ka, kb) = channel.exchange(a, b, bp, &mut rng);
                ka == kb
            })
            .count();
        agree as f64 / rounds as f64
    }

    #[test]
    fn quantum_and_bsc_compliance_agree() {
        let q = ChannelMode::ExactQuantum {
            process: ProcessKind::Wcns,
        }
        .build()
        .unwrap();
        let c = ChannelMode::Bsc { p: 0.1465 }.build().unwrap();
        let cq = compliance(&q, 100_000, 1);
        let cb = compliance(&c, 100_000, 2);
        assert!((cq - 0.8535).abs() < 0.003, "{cq}");
        assert!((cb - 0.8535).abs() < 0.003, "{cb}");
    }

    #[test]
    fn noiseless_bsc_is_exact() {
        assert_eq!(compliance(&ChannelMode::Bsc { p: 0.0 }.build().unwrap(), 1000, 3), 1.0);
    }

    #[test]
    fn rejects_bad_crossover() {
        assert!(ChannelMode::Bsc { p: 1.5 }.build().is_err());
    }

    #[test]
    fn mode_serializes_with_tag() {
        let json = serde_json::to_string(&ChannelMode::ExactQuantum {
            process: ProcessKind::WcnsIntercepted,
        })
        .unwrap();
        assert_eq!(json, r#"{"mode":"exact-quantum","process":"wcns-intercepted"}"#);
    }
}
