use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::ProtocolError;
use crate::coding::{BitString, Codec, DecodeStatus};
use crate::quantum::Party;

/// Public announcement of a codeword as an ordered list of earlier rounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationMessage {
    pub codeword: usize,
    pub indices: Vec<usize>,
    pub sender: Party,
}

fn build_with<F>(
    codeword: &BitString,
    zero_set: &mut Vec<usize>,
    one_set: &mut Vec<usize>,
    sender: Party,
    index: usize,
    mut draw: F,
) -> Result<PermutationMessage, ProtocolError>
where
    F: FnMut(u8, &mut Vec<usize>) -> Result<usize, ProtocolError>,
{
    let (ones, zeros) = (codeword.count_ones(), codeword.count_zeros());
    for (bit, needed, available) in [(0u8, zeros, zero_set.len()), (1u8, ones, one_set.len())] {
        if available < needed {
            return Err(ProtocolError::InsufficientIndices {
                party: sender,
                bit,
                needed,
                available,
            });
        }
    }
    let indices = codeword
        .iter()
        .map(|c| draw(c, if c == 0 { &mut *zero_set } else { &mut *one_set }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PermutationMessage {
        codeword: index,
        indices,
        sender,
    })
}

/// Each position `k` takes a random unused index from the zero set if
/// `c_k = 0`, else from the one set. Drawn indices are removed.
pub fn build_permutation<R: Rng + ?Sized>(
    codeword: &BitString,
    zero_set: &mut Vec<usize>,
    one_set: &mut Vec<usize>,
    sender: Party,
    index: usize,
    rng: &mut R,
) -> Result<PermutationMessage, ProtocolError> {
    build_with(codeword, zero_set, one_set, sender, index, |_, set| {
        let pos = rng.random_range(0..set.len());
        Ok(set.swap_remove(pos))
    })
}

/// Same as [`build_permutation`] with the drawn round indices given in order.
pub fn build_permutation_scripted(
    codeword: &BitString,
    zero_set: &mut Vec<usize>,
    one_set: &mut Vec<usize>,
    sender: Party,
    index: usize,
    draws: &[usize],
) -> Result<PermutationMessage, ProtocolError> {
    if draws.len() != codeword.len() {
        return Err(ProtocolError::Config(format!(
            "{} scripted draws for a {}-bit codeword",
            draws.len(),
            codeword.len()
        )));
    }
    let mut script = draws.iter().copied();
    build_with(codeword, zero_set, one_set, sender, index, |bit, set| {
        let want = script.next().expect("length checked");
        let pos = set
            .iter()
            .position(|&i| i == want)
            .ok_or(ProtocolError::BadScriptedDraw { index: want, bit })?;
        Ok(set.remove(pos))
    })
}

/// Reads the received bit of every announced round.
pub fn recover_codeword(message: &PermutationMessage, table: &BTreeMap<usize, u8>) -> Result<BitString, ProtocolError> {
    message
        .indices
        .iter()
        .map(|i| table.get(i).copied().ok_or(ProtocolError::Desync(*i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verified {
    pub message: BitString,
    /// Positions where the received word differs from the re-encoded message.
    pub errors: usize,
    pub status: DecodeStatus,
}

/// Decodes `recovered` and counts how many of its bits were wrong. The
/// ideal codec has no decoder, the sender's codeword is taken as the
/// reference instead.
pub fn decode_and_verify(sender_codeword: &BitString, recovered: &BitString, codec: &Codec) -> Result<Verified, ProtocolError> {
    if codec.is_ideal() {
        let errors = sender_codeword.hamming_distance(recovered).ok_or(crate::coding::CodingError::LengthMismatch {
            expected: sender_codeword.len(),
            actual: recovered.len(),
        })?;
        return Ok(Verified {
            message: sender_codeword.clone(),
            errors,
            status: DecodeStatus::Ok,
        });
    }
    let decoded = codec.decode(recovered)?;
    if decoded.status == DecodeStatus::Uncorrectable {
        return Ok(Verified {
            message: decoded.message,
            errors: 0,
            status: DecodeStatus::Uncorrectable,
        });
    }
    let reencoded = codec.encode(&decoded.message)?;
    let errors = reencoded.hamming_distance(recovered).expect("codec preserves length");
    Ok(Verified {
        message: decoded.message,
        errors,
        status: DecodeStatus::Ok,
    })
}
