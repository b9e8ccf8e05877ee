//! Fiducial marker bit dictionaries.
//!
//! A marker family is an `n x n` bit matrix per id (1 = white cell), framed by
//! an all-black border ring when printed. The bundled family is the canonical
//! 4x4 grid, 50-entry table; custom families load from the same JSON schema:
//! `{ "grid": 4, "codes": { "<id>": [[bit, ...], ...] } }`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("dictionary JSON: {0}")]
    Parse(String),
    #[error("grid must be >= 2, got {0}")]
    Grid(usize),
    #[error("code {id} is {got} bits, expected {expected}")]
    CodeShape { id: u32, got: usize, expected: usize },
    #[error("code bits must be 0 or 1")]
    BitValue,
    #[error("dictionary is empty")]
    Empty,
    #[error(
        "codes {a} and {b} are only {distance} bit flips apart under rotation; \
         correcting {correction} errors needs at least {needed}"
    )]
    Ambiguous { a: u32, b: u32, distance: u32, correction: u32, needed: u32 },
}

const BUNDLED_JSON: &str = include_str!("../../data/aruco_4x4_50.json");

#[derive(Deserialize)]
struct DictionaryFile {
    grid: usize,
    #[serde(default = "default_correction")]
    max_hamming_correction: u32,
    codes: BTreeMap<String, Vec<Vec<u8>>>,
}

fn default_correction() -> u32 {
    1
}

/// Marker bit family with rotation-aware matching.
#[derive(Debug, Clone)]
pub struct MarkerDictionary {
    grid: usize,
    max_hamming_correction: u32,
    /// id -> row-major n*n bits as seen in the canonical orientation.
    codes: BTreeMap<u32, Vec<u8>>,
}

/// Row-major 90-degree counterclockwise rotation of an `n x n` bit matrix.
pub(crate) fn rotate90_ccw(bits: &[u8], n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = bits[c * n + (n - 1 - r)];
        }
    }
    out
}

fn hamming(a: &[u8], b: &[u8]) -> u32 {
    a.iter().zip(b).map(|(x, y)| u32::from(x != y)).sum()
}

impl MarkerDictionary {
    /// Parse and validate a dictionary from its JSON form.
    pub fn from_json(json: &str) -> Result<Self, DictionaryError> {
        let file: DictionaryFile =
            serde_json::from_str(json).map_err(|e| DictionaryError::Parse(e.to_string()))?;
        if file.grid < 2 {
            return Err(DictionaryError::Grid(file.grid));
        }
        let n = file.grid;
        let mut codes = BTreeMap::new();
        for (key, rows) in file.codes {
            let id: u32 = key.parse().map_err(|_| DictionaryError::Parse(format!("id '{key}'")))?;
            let flat: Vec<u8> = rows.into_iter().flatten().collect();
            if flat.len() != n * n {
                return Err(DictionaryError::CodeShape { id, got: flat.len(), expected: n * n });
            }
            if flat.iter().any(|&b| b > 1) {
                return Err(DictionaryError::BitValue);
            }
            codes.insert(id, flat);
        }
        if codes.is_empty() {
            return Err(DictionaryError::Empty);
        }
        let dict = Self { grid: n, max_hamming_correction: file.max_hamming_correction, codes };
        dict.validate_distances()?;
        Ok(dict)
    }

    /// The bundled canonical 4x4, 50-entry family.
    pub fn bundled() -> &'static MarkerDictionary {
        static DICT: OnceLock<MarkerDictionary> = OnceLock::new();
        DICT.get_or_init(|| {
            MarkerDictionary::from_json(BUNDLED_JSON).expect("bundled dictionary is valid")
        })
    }

    /// Unique decoding with `t`-bit correction needs every pair of codes
    /// (and every code against its own rotations) at rotation-aware distance
    /// `>= 2t + 1`.
    fn validate_distances(&self) -> Result<(), DictionaryError> {
        let needed = 2 * self.max_hamming_correction + 1;
        let ids: Vec<u32> = self.codes.keys().copied().collect();
        for (i, &a) in ids.iter().enumerate() {
            let ca = &self.codes[&a];
            for &b in ids.iter().skip(i) {
                let mut rotated = self.codes[&b].clone();
                for rot in 0..4 {
                    if rot > 0 {
                        rotated = rotate90_ccw(&rotated, self.grid);
                    }
                    if a == b && rot == 0 {
                        continue;
                    }
                    let d = hamming(ca, &rotated);
                    if d < needed {
                        return Err(DictionaryError::Ambiguous {
                            a,
                            b,
                            distance: d,
                            correction: self.max_hamming_correction,
                            needed,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn max_hamming_correction(&self) -> u32 {
        self.max_hamming_correction
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Canonical bits for one id.
    pub fn code(&self, id: u32) -> Option<&[u8]> {
        self.codes.get(&id).map(Vec::as_slice)
    }

    /// Match sampled inner bits against the family under all four rotations.
    ///
    /// Returns `(id, rotation, hamming)` where `rotation` is the number of
    /// counterclockwise quarter turns that bring the sampled matrix into the
    /// canonical orientation. Distance validation guarantees at most one
    /// match within the correction budget.
    pub fn match_bits(&self, sampled: &[u8]) -> Option<(u32, u8, u32)> {
        assert_eq!(sampled.len(), self.grid * self.grid);
        let mut view = sampled.to_vec();
        for rot in 0u8..4 {
            if rot > 0 {
                view = rotate90_ccw(&view, self.grid);
            }
            for (&id, code) in &self.codes {
                let d = hamming(&view, code);
                if d <= self.max_hamming_correction {
                    return Some((id, rot, d));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_family_shape() {
        let dict = MarkerDictionary::bundled();
        assert_eq!(dict.grid(), 4);
        assert_eq!(dict.len(), 50);
        assert_eq!(dict.max_hamming_correction(), 1);
        assert!(dict.code(0).is_some());
        assert!(dict.code(49).is_some());
        assert!(dict.code(50).is_none());
    }

    #[test]
    fn exact_and_corrected_matches() {
        let dict = MarkerDictionary::bundled();
        for id in 0..10u32 {
            let code = dict.code(id).unwrap().to_vec();
            assert_eq!(dict.match_bits(&code), Some((id, 0, 0)));

            // One flipped bit still decodes.
            let mut dirty = code.clone();
            dirty[5] ^= 1;
            let (got, rot, d) = dict.match_bits(&dirty).unwrap();
            assert_eq!((got, rot, d), (id, 0, 1));
        }
    }

    #[test]
    fn rotated_bits_decode_with_rotation_count() {
        let dict = MarkerDictionary::bundled();
        let code = dict.code(7).unwrap().to_vec();
        // Physically rotating the marker clockwise makes the sampled matrix a
        // CW rotation of the code; k CCW turns undo it.
        let cw = |bits: &[u8]| -> Vec<u8> {
            let mut out = bits.to_vec();
            for _ in 0..3 {
                out = rotate90_ccw(&out, 4);
            }
            out
        };
        let mut sampled = code.clone();
        for expected_rot in 0u8..4 {
            let got = dict.match_bits(&sampled).unwrap();
            assert_eq!(got, (7, expected_rot, 0));
            sampled = cw(&sampled);
        }
    }

    #[test]
    fn garbage_bits_do_not_decode() {
        let dict = MarkerDictionary::bundled();
        assert_eq!(dict.match_bits(&[0u8; 16]), None);
        assert_eq!(dict.match_bits(&[1u8; 16]), None);
    }

    #[test]
    fn ambiguous_dictionary_rejected() {
        // Two codes one flip apart cannot support 1-bit correction.
        let json = r#"{
            "grid": 2,
            "codes": { "0": [[0,0],[0,1]], "1": [[0,0],[1,1]] }
        }"#;
        assert!(matches!(
            MarkerDictionary::from_json(json),
            Err(DictionaryError::Ambiguous { .. })
        ));
    }

    #[test]
    fn malformed_dictionaries_rejected() {
        assert!(matches!(MarkerDictionary::from_json("{"), Err(DictionaryError::Parse(_))));
        let bad_grid = r#"{ "grid": 1, "codes": { "0": [[0]] } }"#;
        assert!(matches!(MarkerDictionary::from_json(bad_grid), Err(DictionaryError::Grid(1))));
        let bad_shape = r#"{ "grid": 3, "codes": { "0": [[0, 1], [1, 0]] } }"#;
        assert!(matches!(
            MarkerDictionary::from_json(bad_shape),
            Err(DictionaryError::CodeShape { .. })
        ));
        let empty = r#"{ "grid": 4, "codes": {} }"#;
        assert!(matches!(MarkerDictionary::from_json(empty), Err(DictionaryError::Empty)));
    }

    #[test]
    fn rotation_helper_is_a_quarter_turn() {
        let bits: Vec<u8> = (0..16).map(|i| u8::from(i % 3 == 0)).collect();
        let mut r = bits.clone();
        for _ in 0..4 {
            r = rotate90_ccw(&r, 4);
        }
        assert_eq!(r, bits);
    }
}
