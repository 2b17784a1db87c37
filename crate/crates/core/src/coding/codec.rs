use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bch::{BchCode, BchEncoding};
use super::bits::BitString;
use super::concat::MajorityBch;
use super::{CodeParams, CodingError, DecodeResult, DecodeStatus};

/// Textual codec description used in configuration files and on the
/// command line:
///
/// * `ideal:<N>`: identity code of length `N`, standing in for an ideal
///   code in round-count experiments
/// * `bch:<N>:<K>[:polynomial]`
/// * `mvc-bch:<N>:<K>[:polynomial]`: one BCH block under the majority-vote
///   code (`3N` bits per codeword); `concatenated` is short for `mvc-bch:31:11`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodecSpec {
    Ideal { len: usize },
    Bch { n: usize, k: usize, encoding: BchEncoding },
    MajorityBch { n: usize, k: usize, encoding: BchEncoding },
}

impl CodecSpec {
    pub fn build(&self) -> Result<Codec, CodingError> {
        Ok(match *self {
            CodecSpec::Ideal { len } => {
                if len == 0 {
                    return Err(CodingError::ZeroLength("codec length"));
                }
                Codec::Ideal { len }
            }
            CodecSpec::Bch { n, k, encoding } => Codec::Bch(BchCode::from_lengths(n, k, encoding)?),
            CodecSpec::MajorityBch { n, k, encoding } => {
                Codec::MajorityBch(MajorityBch::new(BchCode::from_lengths(n, k, encoding)?))
            }
        })
    }
}

impl fmt::Display for CodecSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |e: BchEncoding| match e {
            BchEncoding::Systematic => "",
            BchEncoding::Polynomial => ":polynomial",
        };
        match *self {
            CodecSpec::Ideal { len } => write!(f, "ideal:{len}"),
            CodecSpec::Bch { n, k, encoding } => write!(f, "bch:{n}:{k}{}", suffix(encoding)),
            CodecSpec::MajorityBch { n, k, encoding } => write!(f, "mvc-bch:{n}:{k}{}", suffix(encoding)),
        }
    }
}

impl FromStr for CodecSpec {
    type Err = CodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodingError::UnsupportedCode(format!("cannot parse codec {s:?}"));
        if s == "concatenated" {
            return Ok(CodecSpec::MajorityBch {
                n: 31,
                k: 11,
                encoding: BchEncoding::Systematic,
            });
        }
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| parts.get(i).and_then(|p| p.parse::<usize>().ok()).ok_or_else(bad);
        let encoding = match parts.get(3).copied() {
            None | Some("systematic") => BchEncoding::Systematic,
            Some("polynomial") => BchEncoding::Polynomial,
            Some(_) => return Err(bad()),
        };
        match parts[0] {
            "ideal" if parts.len() == 2 => Ok(CodecSpec::Ideal { len: num(1)? }),
            "bch" if (3..=4).contains(&parts.len()) => Ok(CodecSpec::Bch {
                n: num(1)?,
                k: num(2)?,
                encoding,
            }),
            "mvc-bch" if (3..=4).contains(&parts.len()) => Ok(CodecSpec::MajorityBch {
                n: num(1)?,
                k: num(2)?,
                encoding,
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for CodecSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CodecSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A block code used by the protocol for each transmitted codeword.
#[derive(Clone, Debug)]
pub enum Codec {
    /// Identity map. The protocol decodes it with the sender's codeword as
    /// a reference, modelling an ideal code with no residual errors.
    Ideal { len: usize },
    Bch(BchCode),
    MajorityBch(MajorityBch),
}

impl Codec {
    pub fn params(&self) -> CodeParams {
        match self {
            Codec::Ideal { len } => CodeParams {
                n: *len,
                k: *len,
                t: *len,
            },
            Codec::Bch(c) => c.params(),
            Codec::MajorityBch(c) => c.params(),
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, Codec::Ideal { .. })
    }

    pub fn encode(&self, message: &BitString) -> Result<BitString, CodingError> {
        match self {
            Codec::Ideal { len } => {
                if message.len() != *len {
                    return Err(CodingError::LengthMismatch {
                        expected: *len,
                        actual: message.len(),
                    });
                }
                Ok(message.clone())
            }
            Codec::Bch(c) => c.encode(message),
            Codec::MajorityBch(c) => c.encode(message),
        }
    }

    pub fn decode(&self, word: &BitString) -> Result<DecodeResult, CodingError> {
        match self {
            Codec::Ideal { len } => {
                if word.len() != *len {
                    return Err(CodingError::LengthMismatch {
                        expected: *len,
                        actual: word.len(),
                    });
                }
                Ok(DecodeResult {
                    message: word.clone(),
                    corrected_errors: 0,
                    status: DecodeStatus::Ok,
                })
            }
            Codec::Bch(c) => c.decode(word),
            Codec::MajorityBch(c) => c.decode(word),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!("ideal:1990".parse::<CodecSpec>().unwrap(), CodecSpec::Ideal { len: 1990 });
        let concat: CodecSpec = "concatenated".parse().unwrap();
        assert_eq!(concat.to_string(), "mvc-bch:31:11");
        let poly: CodecSpec = "bch:7:4:polynomial".parse().unwrap();
        assert_eq!(poly.to_string(), "bch:7:4:polynomial");
        for bad in ["", "bch:7", "bch:x:4", "ldpc:10:5", "bch:7:4:other", "ideal"] {
            assert!(bad.parse::<CodecSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn build_specs() {
        let c = "mvc-bch:31:11".parse::<CodecSpec>().unwrap().build().unwrap();
        assert_eq!(c.params(), CodeParams { n: 93, k: 11, t: 11 });
        let c = "bch:7:4".parse::<CodecSpec>().unwrap().build().unwrap();
        assert_eq!(c.params(), CodeParams { n: 7, k: 4, t: 1 });
        assert!("bch:31:12".parse::<CodecSpec>().unwrap().build().is_err());
        assert!("ideal:0".parse::<CodecSpec>().unwrap().build().is_err());
    }
}
