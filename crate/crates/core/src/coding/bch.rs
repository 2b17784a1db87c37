//! Narrow-sense primitive binary BCH codes.
//!
//! Bit `i` of a codeword is the coefficient of `x^i`. Decoding computes the
//! `2t` syndromes, runs Berlekamp–Massey for the error locator and finds its
//! roots by Chien search. Anything outside the radius `t` is reported as
//! uncorrectable rather than guessed at.

use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::{CodeParams, CodingError, DecodeResult, DecodeStatus};

/// How messages map to codewords.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BchEncoding {
    /// `x^{n-k} m(x) + (x^{n-k} m(x) mod g(x))`: parity in the low
    /// positions, message bit `j` at position `n - k + j`.
    #[default]
    Systematic,
    /// `m(x) g(x)`, the generator-matrix encoding.
    Polynomial,
}

/// Arithmetic tables for GF(2^m).
#[derive(Clone, Debug)]
struct GaloisField {
    order: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl GaloisField {
    /// `None` unless `poly` (with the `x^m` bit set) is primitive.
    fn new(m: u32, poly: u32) -> Option<Self> {
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().enumerate().take(order) {
            if i > 0 && x == 1 {
                return None;
            }
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return None;
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Some(Self { order, exp, log })
    }

    fn alpha_pow(&self, e: usize) -> u16 {
        self.exp[e % self.order]
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    fn div(&self, a: u16, b: u16) -> u16 {
        assert!(b != 0, "division by zero in GF(2^m)");
        if a == 0 {
            return 0;
        }
        let e = self.log[a as usize] as usize + self.order - self.log[b as usize] as usize;
        self.exp[e % self.order]
    }
}

/// Lexicographically smallest primitive polynomial of degree `m`, as a bit mask.
pub fn smallest_primitive_polynomial(m: u32) -> Option<u32> {
    if !(2..=16).contains(&m) {
        return None;
    }
    let top = 1u32 << m;
    (0..top)
        .map(|low| top | low)
        .filter(|p| p & 1 == 1)
        .find(|&p| GaloisField::new(m, p).is_some())
}

fn poly_mul_gf2(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Remainder of `dividend mod divisor` over GF(2); coefficients ascending.
fn poly_rem_gf2(dividend: &[u8], divisor: &[u8]) -> Vec<u8> {
    let deg = divisor.len() - 1;
    let mut r = dividend.to_vec();
    for i in (deg..r.len()).rev() {
        if r[i] == 1 {
            for (j, &g) in divisor.iter().enumerate() {
                r[i - deg + j] ^= g;
            }
        }
    }
    r.truncate(deg);
    r
}

/// Exact quotient over GF(2); the remainder is dropped.
fn poly_div_gf2(dividend: &[u8], divisor: &[u8]) -> Vec<u8> {
    let deg = divisor.len() - 1;
    let mut r = dividend.to_vec();
    let mut q = vec![0u8; dividend.len().saturating_sub(deg)];
    for i in (deg..r.len()).rev() {
        if r[i] == 1 {
            q[i - deg] = 1;
            for (j, &g) in divisor.iter().enumerate() {
                r[i - deg + j] ^= g;
            }
        }
    }
    q
}

#[derive(Clone, Debug)]
pub struct BchCode {
    m: u32,
    n: usize,
    k: usize,
    t: usize,
    primitive_poly: u32,
    field: GaloisField,
    generator: Vec<u8>,
    encoding: BchEncoding,
}

impl BchCode {
    /// Narrow-sense code of length `2^m - 1` with designed radius `t`.
    pub fn new(m: u32, t: usize, primitive_poly: Option<u32>, encoding: BchEncoding) -> Result<Self, CodingError> {
        let poly = match primitive_poly {
            Some(p) => p,
            None => smallest_primitive_polynomial(m).ok_or(CodingError::UnsupportedCode(format!("GF(2^{m})")))?,
        };
        let field = GaloisField::new(m, poly)
            .ok_or_else(|| CodingError::UnsupportedCode(format!("{poly:#x} is not primitive of degree {m}")))?;
        let n = field.order;
        if t == 0 || 2 * t >= n {
            return Err(CodingError::UnsupportedCode(format!("radius {t} for length {n}")));
        }

        // product of the distinct minimal polynomials of α^1 … α^{2t}
        let mut covered = vec![false; n];
        let mut generator = vec![1u8];
        for i in 1..=2 * t {
            if covered[i % n] {
                continue;
            }
            let mut coset = Vec::new();
            let mut e = i % n;
            while !covered[e] {
                covered[e] = true;
                coset.push(e);
                e = (e * 2) % n;
            }
            // ∏ (x - α^e) over the coset, computed in GF(2^m)
            let mut minimal = vec![1u16];
            for &e in &coset {
                let root = field.alpha_pow(e);
                let mut next = vec![0u16; minimal.len() + 1];
                for (j, &c) in minimal.iter().enumerate() {
                    next[j + 1] ^= c;
                    next[j] ^= field.mul(c, root);
                }
                minimal = next;
            }
            let minimal: Vec<u8> = minimal
                .iter()
                .map(|&c| {
                    debug_assert!(c <= 1, "minimal polynomial must be binary");
                    c as u8
                })
                .collect();
            generator = poly_mul_gf2(&generator, &minimal);
        }
        let k = n - (generator.len() - 1);
        Ok(Self {
            m,
            n,
            k,
            t,
            primitive_poly: poly,
            field,
            generator,
            encoding,
        })
    }

    /// Finds the radius that yields an `(n, k)` code, using the default field polynomial.
    pub fn from_lengths(n: usize, k: usize, encoding: BchEncoding) -> Result<Self, CodingError> {
        let m = (n + 1).trailing_zeros();
        if n < 3 || (1usize << m) != n + 1 {
            return Err(CodingError::UnsupportedCode(format!("length {n} is not 2^m - 1")));
        }
        // several designed radii can share one generator; keep the largest
        let mut found = None;
        for t in 1..=(n - 1) / 2 {
            match Self::new(m, t, None, encoding) {
                Ok(code) if code.k == k => found = Some(code),
                Ok(code) if code.k < k => break,
                Ok(_) => continue,
                Err(_) => break,
            }
        }
        found.ok_or_else(|| CodingError::UnsupportedCode(format!("no narrow-sense BCH code ({n}, {k})")))
    }

    /// BCH(31, 11), radius 5, over GF(2^5) with `x^5 + x^2 + 1`.
    pub fn bch_31_11() -> Self {
        Self::new(5, 5, Some(0b100101), BchEncoding::Systematic).expect("valid parameters")
    }

    /// BCH(7, 4), radius 1, over GF(2^3) with `x^3 + x + 1`.
    pub fn bch_7_4() -> Self {
        Self::new(3, 1, Some(0b1011), BchEncoding::Systematic).expect("valid parameters")
    }

    pub fn with_encoding(mut self, encoding: BchEncoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n,
            k: self.k,
            t: self.t,
        }
    }

    pub fn field_degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_polynomial(&self) -> u32 {
        self.primitive_poly
    }

    /// Generator coefficients, ascending.
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    pub fn encoding(&self) -> BchEncoding {
        self.encoding
    }

    pub fn encode(&self, message: &BitString) -> Result<BitString, CodingError> {
        if message.len() != self.k {
            return Err(CodingError::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        let parity_len = self.n - self.k;
        let bits = match self.encoding {
            BchEncoding::Systematic => {
                let mut shifted = vec![0u8; self.n];
                shifted[parity_len..].copy_from_slice(message.bits());
                let rem = poly_rem_gf2(&shifted, &self.generator);
                shifted[..parity_len].copy_from_slice(&rem);
                shifted
            }
            BchEncoding::Polynomial => {
                let mut c = poly_mul_gf2(message.bits(), &self.generator);
                c.resize(self.n, 0);
                c
            }
        };
        Ok(bits.into_iter().collect())
    }

    fn extract_message(&self, codeword: &[u8]) -> BitString {
        match self.encoding {
            BchEncoding::Systematic => codeword[self.n - self.k..].iter().copied().collect(),
            BchEncoding::Polynomial => {
                let mut q = poly_div_gf2(codeword, &self.generator);
                q.resize(self.k, 0);
                q.into_iter().collect()
            }
        }
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u16> {
        (1..=2 * self.t)
            .map(|j| {
                word.iter()
                    .enumerate()
                    .filter(|(_, &b)| b == 1)
                    .fold(0u16, |acc, (i, _)| acc ^ self.field.alpha_pow(i * j))
            })
            .collect()
    }

    /// Error-locator polynomial by Berlekamp–Massey; coefficients ascending.
    fn berlekamp_massey(&self, syndromes: &[u16]) -> (Vec<u16>, usize) {
        let f = &self.field;
        let mut locator = vec![1u16];
        let mut previous = vec![1u16];
        let mut degree = 0usize;
        let mut shift = 1usize;
        let mut last_discrepancy = 1u16;
        for r in 0..syndromes.len() {
            let mut d = syndromes[r];
            for i in 1..=degree.min(locator.len() - 1) {
                d ^= f.mul(locator[i], syndromes[r - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let scale = f.div(d, last_discrepancy);
            let mut updated = locator.clone();
            if updated.len() < previous.len() + shift {
                updated.resize(previous.len() + shift, 0);
            }
            for (i, &c) in previous.iter().enumerate() {
                updated[i + shift] ^= f.mul(scale, c);
            }
            if 2 * degree <= r {
                previous = locator;
                degree = r + 1 - degree;
                last_discrepancy = d;
                shift = 1;
            } else {
                shift += 1;
            }
            locator = updated;
        }
        while locator.len() > 1 && *locator.last().unwrap() == 0 {
            locator.pop();
        }
        (locator, degree)
    }

    /// Positions `i` with `Λ(α^{-i}) = 0`.
    fn chien_search(&self, locator: &[u16]) -> Vec<usize> {
        let f = &self.field;
        (0..self.n)
            .filter(|&i| {
                let inv = (f.order - i % f.order) % f.order;
                let value = locator
                    .iter()
                    .enumerate()
                    .fold(0u16, |acc, (j, &c)| acc ^ f.mul(c, f.alpha_pow(inv * j)));
                value == 0
            })
            .collect()
    }

    pub fn decode(&self, received: &BitString) -> Result<DecodeResult, CodingError> {
        if received.len() != self.n {
            return Err(CodingError::LengthMismatch {
                expected: self.n,
                actual: received.len(),
            });
        }
        let mut word = received.bits().to_vec();
        let syndromes = self.syndromes(&word);
        if syndromes.iter().all(|&s| s == 0) {
            return Ok(DecodeResult {
                message: self.extract_message(&word),
                corrected_errors: 0,
                status: DecodeStatus::Ok,
            });
        }
        let uncorrectable = |word: &[u8]| DecodeResult {
            message: self.extract_message(word),
            corrected_errors: 0,
            status: DecodeStatus::Uncorrectable,
        };
        let (locator, degree) = self.berlekamp_massey(&syndromes);
        if degree == 0 || degree > self.t || locator.len() - 1 != degree {
            return Ok(uncorrectable(&word));
        }
        let positions = self.chien_search(&locator);
        if positions.len() != degree {
            return Ok(uncorrectable(&word));
        }
        for &i in &positions {
            word[i] ^= 1;
        }
        if self.syndromes(&word).iter().any(|&s| s != 0) {
            return Ok(uncorrectable(received.bits()));
        }
        Ok(DecodeResult {
            message: self.extract_message(&word),
            corrected_errors: degree,
            status: DecodeStatus::Ok,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn default_field_polynomials() {
        assert_eq!(smallest_primitive_polynomial(3), Some(0b1011));
        assert_eq!(smallest_primitive_polynomial(4), Some(0b10011));
        assert_eq!(smallest_primitive_polynomial(5), Some(0b100101));
        assert_eq!(smallest_primitive_polynomial(8), Some(0x11d));
    }

    #[test]
    fn known_generators() {
        // g(x) = 1 + x + x^3
        assert_eq!(BchCode::bch_7_4().generator(), &[1, 1, 0, 1]);
        let code = BchCode::bch_31_11();
        assert_eq!(code.params(), CodeParams { n: 31, k: 11, t: 5 });
        assert_eq!(code.generator().len(), 21);
        let (n15, k15) = {
            let c = BchCode::from_lengths(15, 7, BchEncoding::Systematic).unwrap();
            (c.params().n, c.params().t)
        };
        assert_eq!((n15, k15), (15, 2));
        assert!(BchCode::from_lengths(31, 12, BchEncoding::Systematic).is_err());
        assert!(BchCode::from_lengths(30, 11, BchEncoding::Systematic).is_err());
    }

    #[test]
    fn worked_example_same_message() {
        for encoding in [BchEncoding::Systematic, BchEncoding::Polynomial] {
            let code = BchCode::bch_7_4().with_encoding(encoding);
            let alice = code.decode(&bits("0111010")).unwrap();
            let bob = code.decode(&bits("0011010")).unwrap();
            assert_eq!(alice.status, DecodeStatus::Ok);
            assert_eq!(bob.status, DecodeStatus::Ok);
            assert_eq!(alice.message, bob.message);
            assert_eq!((alice.corrected_errors, bob.corrected_errors), (1, 0));
        }
        // the generator-matrix encoding reproduces the worked message bit for bit
        let code = BchCode::bch_7_4().with_encoding(BchEncoding::Polynomial);
        assert_eq!(code.decode(&bits("0111010")).unwrap().message, bits("0010"));
        assert_eq!(code.encode(&bits("0010")).unwrap(), bits("0011010"));
    }

    #[test]
    fn exhaustive_round_trip_small_codes() {
        for code in [
            BchCode::bch_7_4(),
            BchCode::bch_7_4().with_encoding(BchEncoding::Polynomial),
            BchCode::bch_31_11(),
            BchCode::bch_31_11().with_encoding(BchEncoding::Polynomial),
        ] {
            let k = code.params().k;
            for word in 0u32..(1 << k) {
                let m: BitString = (0..k).map(|i| ((word >> i) & 1) as u8).collect();
                let c = code.encode(&m).unwrap();
                let d = code.decode(&c).unwrap();
                assert_eq!(d.status, DecodeStatus::Ok);
                assert_eq!(d.message, m);
                assert_eq!(d.corrected_errors, 0);
            }
        }
    }

    #[test]
    fn random_corrections_within_radius() {
        let code = BchCode::bch_31_11();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..2000 {
            let m = BitString::random(11, &mut rng);
            let mut c = code.encode(&m).unwrap();
            let weight = trial % 6;
            for i in sample(&mut rng, 31, weight) {
                c.flip(i);
            }
            let d = code.decode(&c).unwrap();
            assert_eq!(d.status, DecodeStatus::Ok);
            assert_eq!(d.message, m);
            assert_eq!(d.corrected_errors, weight);
        }
    }

    #[test]
    fn length_errors() {
        let code = BchCode::bch_7_4();
        assert!(code.encode(&bits("101")).is_err());
        assert!(code.decode(&bits("101")).is_err());
    }
}
