use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CodingError;

/// An ordered sequence of bits, one `u8` (0 or 1) per position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// Accepts any slice of `0`/`1` values; other values are an error.
    pub fn from_bits(bits: &[u8]) -> Result<Self, CodingError> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(CodingError::NotABit(bad));
        }
        Ok(Self(bits.to_vec()))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random_range(0..2u8)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: u8) {
        self.0.push(bit & 1);
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    pub fn hamming_distance(&self, other: &Self) -> Option<usize> {
        (self.len() == other.len()).then(|| self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    pub fn xor(&self, other: &Self) -> Option<Self> {
        (self.len() == other.len()).then(|| Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn chunks(&self, size: usize) -> impl Iterator<Item = BitString> + '_ {
        self.0.chunks(size).map(|c| Self(c.to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl FromIterator<u8> for BitString {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Self(iter.into_iter().map(|b| b & 1).collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = CodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(CodingError::ParseBits(other)),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Self)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let b: BitString = "0011010".parse().unwrap();
        assert_eq!(b.bits(), &[0, 0, 1, 1, 0, 1, 0]);
        assert_eq!(b.to_string(), "0011010");
        assert_eq!((b.count_ones(), b.count_zeros()), (3, 4));
        assert!("01x".parse::<BitString>().is_err());
        assert!(BitString::from_bits(&[0, 2]).is_err());
    }

    #[test]
    fn distance_requires_equal_length() {
        let a: BitString = "0111010".parse().unwrap();
        let b: BitString = "0011010".parse().unwrap();
        assert_eq!(a.hamming_distance(&b), Some(1));
        assert_eq!(a.hamming_distance(&BitString::zeros(3)), None);
    }
}
