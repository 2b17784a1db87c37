use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::session::{run_session, SessionConfig, SessionStats, SessionStatus};
use super::ProtocolError;

/// First eight bytes (little endian) of `SHA-256(master_le ‖ index_le)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Runs one session from a single seed `s`: the channel is driven by
/// `derive_seed(s, 0)`, Alice and Bob by `derive_seed(s, 1)` and `derive_seed(s, 2)`.
pub fn run_seeded(config: &SessionConfig, s: u64) -> Result<SessionStats, ProtocolError> {
    run_session(&seeded_config(config, s), &mut seeded_rng(s))
}

pub fn seeded_config(config: &SessionConfig, s: u64) -> SessionConfig {
    SessionConfig {
        alice_seed: derive_seed(s, 1),
        bob_seed: derive_seed(s, 2),
        ..config.clone()
    }
}

pub fn seeded_rng(s: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(s, 0))
}

/// Round statistics are taken over successful sessions only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub mean: Option<f64>,
    /// Sample standard deviation.
    pub stddev: Option<f64>,
    pub mean_overhead: Option<f64>,
    pub timeouts: usize,
    pub rejected: usize,
    pub codeword_failures: usize,
    pub key_mismatches: usize,
}

/// Runs `trials` independent sessions, trial `t` via [`run_seeded`] with
/// `derive_seed(master, t)`.
pub fn run_experiment(trials: usize, config: &SessionConfig, master: u64) -> Result<ExperimentReport, ProtocolError> {
    config.validate()?;
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let stats = run_seeded(config, derive_seed(master, t))?;
            Ok((stats.status, stats.rounds, stats.overhead))
        })
        .collect::<Result<Vec<_>, ProtocolError>>()?;

    let count = |s: SessionStatus| outcomes.iter().filter(|o| o.0 == s).count();
    let ok: Vec<(usize, i64)> = outcomes
        .iter()
        .filter(|o| o.0 == SessionStatus::Ok)
        .map(|o| (o.1, o.2))
        .collect();
    let k = ok.len();
    let mean = (k > 0).then(|| ok.iter().map(|o| o.0 as f64).sum::<f64>() / k as f64);
    let stddev = mean.filter(|_| k > 1).map(|m| {
        let ss: f64 = ok.iter().map(|o| (o.0 as f64 - m).powi(2)).sum();
        (ss / (k - 1) as f64).sqrt()
    });
    Ok(ExperimentReport {
        trials,
        successes: k,
        success_rate: (trials > 0).then(|| k as f64 / trials as f64),
        min: ok.iter().map(|o| o.0).min(),
        max: ok.iter().map(|o| o.0).max(),
        mean,
        stddev,
        mean_overhead: (k > 0).then(|| ok.iter().map(|o| o.1 as f64).sum::<f64>() / k as f64),
        timeouts: count(SessionStatus::Timeout),
        rejected: count(SessionStatus::Rejected),
        codeword_failures: count(SessionStatus::CodewordFailure),
        key_mismatches: count(SessionStatus::KeyMismatch),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_derivation_is_fixed() {
        assert_eq!(derive_seed(0, 0), derive_seed(0, 0));
        assert_ne!(derive_seed(0, 0), derive_seed(0, 1));
        assert_ne!(derive_seed(0, 1), derive_seed(1, 0));
    }

    #[test]
    fn run_seeded_replays_a_trial() {
        let config = SessionConfig::concatenated(0.1465);
        let one = run_experiment(1, &config, 8).unwrap();
        let stats = run_seeded(&config, derive_seed(8, 0)).unwrap();
        assert_eq!(one.successes, usize::from(stats.success));
        if stats.success {
            assert_eq!(one.min, Some(stats.rounds));
        }
    }

    #[test]
    fn empty_experiment() {
        let r = run_experiment(0, &SessionConfig::ideal(0.1465), 1).unwrap();
        assert_eq!(r.trials, 0);
        assert_eq!(r.success_rate, None);
        assert_eq!(r.mean, None);
        assert_eq!(serde_json::to_value(&r).unwrap()["stddev"], serde_json::Value::Null);
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let config = SessionConfig {
            n: 66,
            ..SessionConfig::concatenated(0.1465)
        };
        let parallel = run_experiment(40, &config, 77).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| run_experiment(40, &config, 77).unwrap());
        assert_eq!(parallel, serial);
        assert_eq!(
            parallel.successes + parallel.timeouts + parallel.rejected + parallel.codeword_failures + parallel.key_mismatches,
            40
        );
    }

    #[test]
    fn ideal_mode_small_sample() {
        let r = run_experiment(200, &SessionConfig::ideal(0.1465), 2024).unwrap();
        assert_eq!(r.successes, 200);
        assert!(r.min.unwrap() >= 3980);
        let mean = r.mean.unwrap();
        assert!((mean - 4149.0).abs() < 0.02 * 4149.0, "{mean}");
    }
}
