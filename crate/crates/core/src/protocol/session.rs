use rand::Rng;
use serde::{Deserialize, Serialize};

use super::channel::{Channel, ChannelMode};
use super::detection::{detect_eavesdropping, Detection, ErrorObservation, DEFAULT_ACCEPTANCE};
use super::keys::{finalize_keys, PrivacyAmplification};
use super::party::PartyState;
use super::permutation::{build_permutation, decode_and_verify, recover_codeword, PermutationMessage};
use super::toeplitz::ToeplitzSpec;
use super::transcript::{RoundRecord, SessionObserver, StoredSet};
use super::ProtocolError;
use crate::coding::{BitString, Codec, CodecSpec, DecodeStatus};
use crate::quantum::Party;

/// Sessions stop after this many times the minimum round count.
pub const DEFAULT_ROUND_CAP_FACTOR: usize = 10;

const QUANTUM_BOUND: f64 = 0.853_553_390_593_273_8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RetryPolicy {
    /// Stop the session at the first uncorrectable codeword.
    #[default]
    Abort,
    /// Collect fresh indices and send the same codeword again.
    Retransmit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Seed bits per party.
    pub n: usize,
    pub codec: CodecSpec,
    pub channel: ChannelMode,
    pub q0: f64,
    pub alice_seed: u64,
    pub bob_seed: u64,
    pub privacy_amplification: PrivacyAmplification,
    /// `None` means [`DEFAULT_ROUND_CAP_FACTOR`] times the minimum.
    pub round_cap: Option<usize>,
    pub retry: RetryPolicy,
}

impl SessionConfig {
    /// One raw 1990-bit sequence per party, no decoding.
    pub fn ideal(p: f64) -> Self {
        Self {
            n: 1990,
            codec: CodecSpec::Ideal { len: 1990 },
            ..Self::concatenated(p)
        }
    }

    /// 24 majority-voted BCH(31,11) blocks per party, 2232 coded bits.
    pub fn concatenated(p: f64) -> Self {
        Self {
            n: 264,
            codec: "mvc-bch:31:11".parse().expect("built-in codec"),
            channel: ChannelMode::Bsc { p },
            q0: DEFAULT_ACCEPTANCE,
            alice_seed: 1,
            bob_seed: 2,
            privacy_amplification: PrivacyAmplification::disabled(),
            round_cap: None,
            retry: RetryPolicy::Abort,
        }
    }

    pub fn validate(&self) -> Result<Codec, ProtocolError> {
        if !(0.5..QUANTUM_BOUND).contains(&self.q0) {
            return Err(ProtocolError::Config(format!(
                "acceptance level {} outside [0.5, {QUANTUM_BOUND:.6})",
                self.q0
            )));
        }
        let codec = self.codec.build()?;
        let k = codec.params().k;
        if self.n == 0 || !self.n.is_multiple_of(k) {
            return Err(ProtocolError::SeedNotDivisible { n: self.n, k });
        }
        let pa = self.privacy_amplification;
        let key_len = if pa.enabled { pa.out_len } else { self.n };
        if pa.enabled && (pa.out_len == 0 || pa.out_len > self.n) {
            return Err(ProtocolError::Config(format!(
                "extractor output {} must lie in 1..={}",
                pa.out_len, self.n
            )));
        }
        if key_len % 2 != 0 {
            return Err(ProtocolError::OddKeyLength {
                left: key_len,
                right: key_len,
            });
        }
        if self.round_cap == Some(0) {
            return Err(ProtocolError::Config("round cap must be positive".into()));
        }
        Ok(codec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionStatus {
    Ok,
    Timeout,
    CodewordFailure,
    Rejected,
    KeyMismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodewordReport {
    pub sender: Party,
    pub index: usize,
    pub round: usize,
    pub errors: usize,
    pub status: DecodeStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionStats {
    pub status: SessionStatus,
    pub success: bool,
    pub rounds: usize,
    /// `2l`, with `l` coded bits per party.
    pub min_rounds: usize,
    /// `rounds - min_rounds`.
    pub overhead: i64,
    /// Received-table entries never referenced by a permutation, `[alice, bob]`.
    pub bit_overhead: [usize; 2],
    pub codewords: Vec<CodewordReport>,
    pub compliance: Option<f64>,
    pub eavesdropping_detected: bool,
    pub key0: Option<BitString>,
    pub key1: Option<BitString>,
}

/// One round: Bob picks the direction, the sender files the round under the
/// bit it sent, the receiver records what it read.
pub fn execute_round<R: Rng + ?Sized>(
    alice: &mut PartyState,
    bob: &mut PartyState,
    channel: &Channel,
    round: usize,
    rng: &mut R,
) -> RoundRecord {
    let b_prime = u8::from(rng.random_bool(0.5));
    let a = alice.next_bit();
    let b = bob.next_bit();
    let (ka, kb) = channel.exchange(a, b, b_prime, rng);
    let (sender, receiver, sent, received) = if b_prime == 1 {
        (alice, bob, a, kb)
    } else {
        (bob, alice, b, ka)
    };
    let stored_set = if sender.finished() {
        StoredSet::None
    } else {
        sender.store_sent(round, sent);
        if sent == 0 {
            StoredSet::Zero
        } else {
            StoredSet::One
        }
    };
    receiver.store_received(round, received);
    RoundRecord {
        round,
        b_prime,
        sender: sender.role,
        stored_set,
        received_bit: received,
    }
}

impl PartyState {
    fn send_current(&mut self) -> Result<(BitString, PermutationMessage), ProtocolError> {
        let codeword = self.current_codeword().expect("ready implies pending").clone();
        let (role, index) = (self.role, self.current);
        let mut zeros = std::mem::take(&mut self.zero_set);
        let mut ones = std::mem::take(&mut self.one_set);
        let message = build_permutation(&codeword, &mut zeros, &mut ones, role, index, self.rng());
        Ok((codeword, message?))
    }
}

pub fn run_session<R: Rng + ?Sized>(config: &SessionConfig, rng: &mut R) -> Result<SessionStats, ProtocolError> {
    run_session_observed(config, rng, &mut ())
}

pub fn run_session_observed<R: Rng + ?Sized, O: SessionObserver + ?Sized>(
    config: &SessionConfig,
    rng: &mut R,
    observer: &mut O,
) -> Result<SessionStats, ProtocolError> {
    let codec = config.validate()?;
    let channel = config.channel.build()?;
    let mut alice = PartyState::random(Party::Alice, config.n, &codec, config.alice_seed)?;
    let mut bob = PartyState::random(Party::Bob, config.n, &codec, config.bob_seed)?;
    let min_rounds = alice.coded_len() + bob.coded_len();
    let cap = config.round_cap.unwrap_or(DEFAULT_ROUND_CAP_FACTOR * min_rounds);

    let mut codewords = Vec::new();
    let mut observations = Vec::new();
    let mut used = [0usize; 2];
    let mut status = None;
    let mut round = 0;
    while !(alice.finished() && bob.finished()) {
        if round >= cap {
            status = Some(SessionStatus::Timeout);
            break;
        }
        let record = execute_round(&mut alice, &mut bob, &channel, round, rng);
        observer.on_round(&record)?;
        round += 1;

        let (sender, receiver) = match record.sender {
            Party::Alice => (&mut alice, &mut bob),
            Party::Bob => (&mut bob, &mut alice),
        };
        if record.stored_set == StoredSet::None || !sender.ready() {
            continue;
        }
        let (codeword, message) = sender.send_current()?;
        observer.on_permutation(&message)?;
        let recovered = recover_codeword(&message, &receiver.received_table)?;
        let verified = decode_and_verify(&codeword, &recovered, &codec)?;
        codewords.push(CodewordReport {
            sender: sender.role,
            index: message.codeword,
            round: record.round,
            errors: verified.errors,
            status: verified.status,
        });
        if verified.status == DecodeStatus::Ok {
            used[receiver_slot(receiver.role)] += codeword.len();
            observations.push(ErrorObservation {
                errors: verified.errors,
                bits: codeword.len(),
            });
            receiver.decoded.push(verified.message);
            sender.advance();
        } else {
            match config.retry {
                RetryPolicy::Abort => {
                    status = Some(SessionStatus::CodewordFailure);
                    break;
                }
                RetryPolicy::Retransmit => sender.restart_codeword(),
            }
        }
    }

    let bit_overhead = [
        alice.received_table.len() - used[0],
        bob.received_table.len() - used[1],
    ];
    let mut stats = SessionStats {
        status: SessionStatus::Ok,
        success: false,
        rounds: round,
        min_rounds,
        overhead: round as i64 - min_rounds as i64,
        bit_overhead,
        codewords,
        compliance: None,
        eavesdropping_detected: false,
        key0: None,
        key1: None,
    };
    if let Some(s) = status {
        stats.status = s;
        return Ok(stats);
    }

    let detection = detect_eavesdropping(&observations, config.q0)?;
    stats.compliance = Some(detection.compliance());
    if let Detection::Reject { .. } = detection {
        stats.eavesdropping_detected = true;
        stats.status = SessionStatus::Rejected;
        return Ok(stats);
    }

    let pa = config.privacy_amplification;
    let extractor = if pa.enabled {
        Some(ToeplitzSpec::random(pa.out_len, config.n, rng)?)
    } else {
        None
    };
    let alice_keys = finalize_keys(&alice.seed, &alice.decoded_component(), extractor.as_ref())?;
    let bob_keys = finalize_keys(&bob.decoded_component(), &bob.seed, extractor.as_ref())?;
    if alice_keys != bob_keys {
        stats.status = SessionStatus::KeyMismatch;
        return Ok(stats);
    }
    stats.success = true;
    stats.key0 = Some(alice_keys.0);
    stats.key1 = Some(alice_keys.1);
    Ok(stats)
}

fn receiver_slot(role: Party) -> usize {
    match role {
        Party::Alice => 0,
        Party::Bob => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::JsonLinesTranscript;
    use crate::quantum::ProcessKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small(p: f64) -> SessionConfig {
        SessionConfig {
            n: 44,
            ..SessionConfig::concatenated(p)
        }
    }

    #[test]
    fn round_bookkeeping() {
        let codec = Codec::Ideal { len: 8 };
        let mut alice = PartyState::random(Party::Alice, 8, &codec, 1).unwrap();
        let mut bob = PartyState::random(Party::Bob, 8, &codec, 2).unwrap();
        let channel = ChannelMode::Bsc { p: 0.0 }.build().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for round in 0..50 {
            let r = execute_round(&mut alice, &mut bob, &channel, round, &mut rng);
            let (sender, receiver) = if r.b_prime == 1 { (&alice, &bob) } else { (&bob, &alice) };
            assert_eq!(r.sender, sender.role);
            let in_zero = sender.zero_set.contains(&round);
            let in_one = sender.one_set.contains(&round);
            assert!(in_zero ^ in_one);
            assert_eq!(receiver.received_table[&round], u8::from(in_one));
        }
        assert_eq!(alice.received_table.len() + bob.received_table.len(), 50);
    }

    #[test]
    fn noiseless_session_succeeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let stats = run_session(&small(0.0), &mut rng).unwrap();
        assert_eq!(stats.status, SessionStatus::Ok);
        assert!(stats.success);
        assert_eq!(stats.compliance, Some(1.0));
        assert_eq!(stats.min_rounds, 2 * 4 * 93);
        assert!(stats.overhead >= 0);
        assert_eq!(stats.bit_overhead.iter().sum::<usize>() as i64, stats.overhead);
        assert_eq!(stats.key0.as_ref().unwrap().len(), 44);
        assert!(stats.codewords.iter().all(|c| c.errors == 0));
    }

    #[test]
    fn replay_is_identical() {
        let config = small(0.1465);
        let a = run_session(&config, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = run_session(&config, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let mut ta = JsonLinesTranscript::new(Vec::new());
        let mut tb = JsonLinesTranscript::new(Vec::new());
        run_session_observed(&config, &mut ChaCha8Rng::seed_from_u64(9), &mut ta).unwrap();
        run_session_observed(&config, &mut ChaCha8Rng::seed_from_u64(9), &mut tb).unwrap();
        let (ta, tb) = (ta.into_inner(), tb.into_inner());
        assert!(!ta.is_empty());
        assert_eq!(ta, tb);
    }

    #[test]
    fn ideal_mode_keys_match_under_noise() {
        let stats = run_session(&SessionConfig::ideal(0.1465), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(stats.status, SessionStatus::Ok);
        assert!(stats.rounds >= 3980);
        let c = stats.compliance.unwrap();
        assert!((c - 0.8535).abs() < 0.025, "{c}");
    }

    #[test]
    fn intercept_resend_is_detected() {
        let config = SessionConfig {
            channel: ChannelMode::ExactQuantum {
                process: ProcessKind::WcnsIntercepted,
            },
            ..SessionConfig::ideal(0.0)
        };
        let stats = run_session(&config, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(stats.status, SessionStatus::Rejected);
        assert!(stats.eavesdropping_detected);
        assert!(stats.key0.is_none());
    }

    #[test]
    fn round_cap_times_out() {
        let config = SessionConfig {
            round_cap: Some(100),
            ..small(0.0)
        };
        let stats = run_session(&config, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(stats.status, SessionStatus::Timeout);
        assert_eq!(stats.rounds, 100);
        assert!(!stats.success);
    }

    #[test]
    fn abort_and_retransmit_policies() {
        // at p = 0.3 almost every block fails
        let abort = run_session(&small(0.3), &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(abort.status, SessionStatus::CodewordFailure);
        let retry = SessionConfig {
            retry: RetryPolicy::Retransmit,
            round_cap: Some(3000),
            ..small(0.3)
        };
        let stats = run_session(&retry, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_ne!(stats.status, SessionStatus::CodewordFailure);
        assert!(stats.codewords.iter().any(|c| c.status == DecodeStatus::Uncorrectable));
    }

    #[test]
    fn privacy_amplification_path() {
        let config = SessionConfig {
            privacy_amplification: PrivacyAmplification::to(40),
            ..small(0.0)
        };
        let stats = run_session(&config, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(stats.success);
        assert_eq!(stats.key0.unwrap().len(), 40);
    }

    #[test]
    fn config_validation() {
        let bad_q0 = SessionConfig { q0: 0.9, ..small(0.0) };
        assert!(bad_q0.validate().is_err());
        let bad_n = SessionConfig { n: 45, ..small(0.0) };
        assert!(matches!(bad_n.validate(), Err(ProtocolError::SeedNotDivisible { .. })));
        let odd_pa = SessionConfig {
            privacy_amplification: PrivacyAmplification::to(41),
            ..small(0.0)
        };
        assert!(odd_pa.validate().is_err());
        let long_pa = SessionConfig {
            privacy_amplification: PrivacyAmplification::to(46),
            ..small(0.0)
        };
        assert!(long_pa.validate().is_err());
        assert!(SessionConfig::ideal(0.1).validate().is_ok());
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = SessionConfig::concatenated(0.1465);
        let json = serde_json::to_string(&config).unwrap();
        let back: SessionConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(config, back);
    }
}
