use std::io::Write;

use serde::Serialize;

use super::permutation::PermutationMessage;
use crate::quantum::Party;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StoredSet {
    Zero,
    One,
    /// The sender had no pending codeword, the round carried a dummy bit.
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub b_prime: u8,
    pub sender: Party,
    pub stored_set: StoredSet,
    pub received_bit: u8,
}

/// Hooks called by a running session.
pub trait SessionObserver {
    fn on_round(&mut self, _record: &RoundRecord) -> std::io::Result<()> {
        Ok(())
    }

    fn on_permutation(&mut self, _message: &PermutationMessage) -> std::io::Result<()> {
        Ok(())
    }
}

impl SessionObserver for () {}

/// Writes one JSON object per line, tagged `round` or `permutation`.
pub struct JsonLinesTranscript<W: Write> {
    out: W,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line<'a> {
    Round(&'a RoundRecord),
    Permutation(&'a PermutationMessage),
}

impl<W: Write> JsonLinesTranscript<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }

    fn write(&mut self, line: &Line<'_>) -> std::io::Result<()> {
        serde_json::to_writer(&mut self.out, line)?;
        self.out.write_all(b"\n")
    }
}

impl<W: Write> SessionObserver for JsonLinesTranscript<W> {
    fn on_round(&mut self, record: &RoundRecord) -> std::io::Result<()> {
        self.write(&Line::Round(record))
    }

    fn on_permutation(&mut self, message: &PermutationMessage) -> std::io::Result<()> {
        self.write(&Line::Permutation(message))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_are_tagged_json() {
        let mut t = JsonLinesTranscript::new(Vec::new());
        t.on_round(&RoundRecord {
            round: 4,
            b_prime: 1,
            sender: Party::Alice,
            stored_set: StoredSet::One,
            received_bit: 0,
        })
        .unwrap();
        t.on_permutation(&PermutationMessage {
            codeword: 0,
            indices: vec![2, 0],
            sender: Party::Bob,
        })
        .unwrap();
        let text = String::from_utf8(t.into_inner()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            r#"{"kind":"round","round":4,"b_prime":1,"sender":"alice","stored_set":"one","received_bit":0}"#
        );
        assert_eq!(lines[1], r#"{"kind":"permutation","codeword":0,"indices":[2,0],"sender":"bob"}"#);
    }
}
