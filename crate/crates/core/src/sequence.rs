//! HP residue strings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HpError, Result};

/// Shortest sequence that has a scorable pair (`j >= i + 3`).
pub const MIN_SEQUENCE_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Residue {
    H,
    P,
}

impl Residue {
    pub fn is_hydrophobic(self) -> bool {
        self == Residue::H
    }

    pub fn letter(self) -> char {
        match self {
            Residue::H => 'h',
            Residue::P => 'p',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HpSequence {
    residues: Vec<Residue>,
}

impl HpSequence {
    pub fn new(residues: Vec<Residue>) -> Result<Self> {
        if residues.len() < MIN_SEQUENCE_LEN {
            return Err(HpError::SequenceTooShort { len: residues.len() });
        }
        Ok(Self { residues })
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    /// Always false for a constructed sequence; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn hydrophobic_mask(&self) -> Vec<bool> {
        self.residues.iter().map(|r| r.is_hydrophobic()).collect()
    }

    pub fn count_h(&self) -> usize {
        self.residues.iter().filter(|r| r.is_hydrophobic()).count()
    }
}

impl FromStr for HpSequence {
    type Err = HpError;

    fn from_str(s: &str) -> Result<Self> {
        parse_sequence(s)
    }
}

impl fmt::Display for HpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residues {
            write!(f, "{}", r.letter())?;
        }
        Ok(())
    }
}

/// Case-insensitive parse of an `h`/`p` string. Surrounding whitespace is trimmed.
pub fn parse_sequence(text: &str) -> Result<HpSequence> {
    let residues = text
        .trim()
        .chars()
        .enumerate()
        .map(|(index, ch)| match ch.to_ascii_lowercase() {
            'h' => Ok(Residue::H),
            'p' => Ok(Residue::P),
            _ => Err(HpError::InvalidResidue { index, ch }),
        })
        .collect::<Result<Vec<_>>>()?;
    HpSequence::new(residues)
}

/// Sequence file: one sequence per line, `#` comment lines and blank lines skipped.
pub fn parse_sequence_file(text: &str) -> Result<Vec<HpSequence>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_sequence)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Residue::{H, P};

    #[test]
    fn parses_lower_and_upper_case() {
        assert_eq!(parse_sequence("hphh").unwrap().residues(), &[H, P, H, H]);
        assert_eq!(parse_sequence("HPHH").unwrap().residues(), &[H, P, H, H]);
    }

    #[test]
    fn reports_bad_character_index() {
        assert_eq!(
            parse_sequence("hpxh").unwrap_err(),
            HpError::InvalidResidue { index: 2, ch: 'x' }
        );
    }

    #[test]
    fn rejects_short_sequences() {
        assert_eq!(parse_sequence("hph").unwrap_err(), HpError::SequenceTooShort { len: 3 });
    }

    #[test]
    fn accepts_benchmark_length() {
        let s = parse_sequence("hphhpphhhhphhhpphhpphphhhphphhpphhppphpppppppphh").unwrap();
        assert_eq!(s.len(), 48);
    }

    #[test]
    fn file_format_skips_comments() {
        let seqs = parse_sequence_file("# header\nhpph\n\n  HHPP  \n# tail\n").unwrap();
        assert_eq!(seqs.len(), 2);
        assert_eq!(seqs[1].to_string(), "hhpp");
    }
}
