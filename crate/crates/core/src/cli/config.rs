use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use super::CliError;
use crate::coding::CodecSpec;
use crate::protocol::{seeded_config, ChannelMode, PrivacyAmplification, RetryPolicy, SessionConfig};
use crate::quantum::ProcessKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One raw 1990-bit sequence per party.
    Ideal,
    /// 24 majority-voted BCH(31,11) blocks per party.
    Concatenated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    Bsc,
    ExactQuantum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RetryKind {
    Abort,
    Retransmit,
}

/// Session settings. A flat TOML file supplies defaults, flags override it.
#[derive(Clone, Debug, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Flat TOML file with the same keys as the flags (snake_case).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub channel: Option<ChannelKind>,
    /// Crossover probability of the BSC channel.
    #[arg(long)]
    pub p: Option<f64>,
    /// Process used by the exact-quantum channel.
    #[arg(long)]
    pub process: Option<ProcessKind>,
    /// Seed bits per party.
    #[arg(long)]
    pub n: Option<usize>,
    /// `ideal:N`, `bch:N:K`, `mvc-bch:N:K` or `concatenated`.
    #[arg(long)]
    pub codec: Option<CodecSpec>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Acceptance level for the observed compliance.
    #[arg(long)]
    pub q0: Option<f64>,
    /// Privacy-amplification output length per component.
    #[arg(long)]
    pub pa_out_len: Option<usize>,
    #[arg(long)]
    pub round_cap: Option<usize>,
    #[arg(long, value_enum)]
    pub retry: Option<RetryKind>,
    /// Write JSON here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Line-delimited JSON transcript of a single run.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($flags:ident, $file:ident, $($f:ident),*) => {
        RunConfig { config: None, $($f: $flags.$f.clone().or($file.$f),)* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    /// Flag values win over the file named by `--config`.
    pub fn resolve(&self) -> Result<Self, CliError> {
        let file = match &self.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        let flags = self;
        Ok(merge_fields!(
            flags, file, mode, channel, p, process, n, codec, trials, seed, q0, pa_out_len, round_cap, retry, output,
            transcript
        ))
    }

    pub fn master_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Builds and validates the session. Party seeds follow the same
    /// derivation as experiment trials, so `run --seed s` replays any trial
    /// whose derived seed is `s`.
    pub fn session(&self) -> Result<SessionConfig, CliError> {
        let p = self.p.unwrap_or(0.1465);
        let mut config = match self.mode.unwrap_or(Mode::Ideal) {
            Mode::Ideal => SessionConfig::ideal(p),
            Mode::Concatenated => SessionConfig::concatenated(p),
        };
        if let Some(codec) = self.codec {
            config.codec = codec;
            if self.n.is_none() {
                config.n = codec.build().map_err(|e| CliError::Validation(e.to_string()))?.params().k;
            }
        }
        if let Some(n) = self.n {
            config.n = n;
        }
        config.channel = match self.channel.unwrap_or(ChannelKind::Bsc) {
            ChannelKind::Bsc => {
                if self.process.is_some() {
                    return Err(CliError::Validation("--process requires --channel exact-quantum".into()));
                }
                ChannelMode::Bsc { p }
            }
            ChannelKind::ExactQuantum => ChannelMode::ExactQuantum {
                process: self.process.unwrap_or(ProcessKind::Wcns),
            },
        };
        if let Some(q0) = self.q0 {
            config.q0 = q0;
        }
        if let Some(len) = self.pa_out_len {
            config.privacy_amplification = PrivacyAmplification::to(len);
        }
        config.round_cap = self.round_cap;
        config.retry = match self.retry.unwrap_or(RetryKind::Abort) {
            RetryKind::Abort => RetryPolicy::Abort,
            RetryKind::Retransmit => RetryPolicy::Retransmit,
        };
        let config = seeded_config(&config, self.master_seed());
        config.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::derive_seed;
    use std::io::Write;

    #[test]
    fn flags_override_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "mode = \"concatenated\"\np = 0.1\ntrials = 5\nseed = 9").unwrap();
        let flags = RunConfig {
            config: Some(file.path().to_path_buf()),
            p: Some(0.2),
            ..Default::default()
        };
        let r = flags.resolve().unwrap();
        assert_eq!(r.mode, Some(Mode::Concatenated));
        assert_eq!(r.p, Some(0.2));
        assert_eq!(r.trials, Some(5));
        let s = r.session().unwrap();
        assert_eq!(s.n, 264);
        assert_eq!(s.channel, ChannelMode::Bsc { p: 0.2 });
        assert_eq!(s.alice_seed, derive_seed(9, 1));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "modee = \"ideal\"").unwrap();
        let flags = RunConfig {
            config: Some(file.path().to_path_buf()),
            ..Default::default()
        };
        assert!(matches!(flags.resolve(), Err(CliError::Validation(_))));
    }

    #[test]
    fn codec_sets_default_seed_length() {
        let r = RunConfig {
            codec: Some("bch:7:4".parse().unwrap()),
            ..Default::default()
        };
        assert_eq!(r.session().unwrap().n, 4);
        let bad = RunConfig {
            process: Some(ProcessKind::Wcns),
            ..Default::default()
        };
        assert!(bad.session().is_err());
    }
}
