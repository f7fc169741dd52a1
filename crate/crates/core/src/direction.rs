//! Sign vectors selecting which coordinates are reversed.
//!
//! A direction `α ∈ {-1, +1}^d` splits the coordinates into `I` (the `-1`
//! entries) and `J` (the `+1` entries). Text form is one character per
//! coordinate, `+` or `-`, e.g. `-++-`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest dimension for which all `2^d` directions are enumerated.
pub const MAX_ENUMERATION_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    // true = +1
    signs: Vec<bool>,
}

impl Direction {
    /// Builds a direction from `±1` entries.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::InvalidDirection {
                input: format!("{signs:?}"),
                reason: "dimension must be at least 2".into(),
            });
        }
        let mut out = Vec::with_capacity(signs.len());
        for &s in signs {
            match s {
                1 => out.push(true),
                -1 => out.push(false),
                _ => {
                    return Err(Error::InvalidDirection {
                        input: format!("{signs:?}"),
                        reason: format!("entry {s} is not -1 or +1"),
                    })
                }
            }
        }
        Ok(Direction { signs: out })
    }

    pub fn from_bools(positive: Vec<bool>) -> Result<Self> {
        if positive.len() < 2 {
            return Err(Error::InvalidDirection {
                input: format!("{positive:?}"),
                reason: "dimension must be at least 2".into(),
            });
        }
        Ok(Direction { signs: positive })
    }

    /// `(1, …, 1)`.
    pub fn upper(d: usize) -> Self {
        Direction {
            signs: vec![true; d.max(2)],
        }
    }

    /// `(-1, …, -1)`.
    pub fn lower(d: usize) -> Self {
        Direction {
            signs: vec![false; d.max(2)],
        }
    }

    /// The direction with exactly the coordinates in `positive` set to `+1`.
    pub fn with_positive(d: usize, positive: &[usize]) -> Result<Self> {
        let mut signs = vec![false; d];
        for &i in positive {
            if i >= d {
                return Err(Error::InvalidDirection {
                    input: format!("{positive:?}"),
                    reason: format!("index {i} out of range for d = {d}"),
                });
            }
            signs[i] = true;
        }
        Self::from_bools(signs)
    }

    /// All `2^d` directions in lexicographic order with `-` before `+`.
    pub fn all(d: usize) -> Result<Vec<Direction>> {
        if !(2..=MAX_ENUMERATION_DIM).contains(&d) {
            return Err(Error::invalid(format!(
                "direction enumeration needs 2 <= d <= {MAX_ENUMERATION_DIM}, got {d}"
            )));
        }
        Ok((0..1usize << d)
            .map(|code| Direction {
                signs: (0..d).map(|i| code >> (d - 1 - i) & 1 == 1).collect(),
            })
            .collect())
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn sign(&self, i: usize) -> i8 {
        if self.signs[i] {
            1
        } else {
            -1
        }
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.signs[i]
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.dim()).map(|i| self.sign(i)).collect()
    }

    /// Indices with sign `-1` (zero-based).
    pub fn negative_set(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.signs[i]).collect()
    }

    /// Indices with sign `+1` (zero-based).
    pub fn positive_set(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.signs[i]).collect()
    }

    /// `|I|`, the number of `-1` entries.
    pub fn count_negative(&self) -> usize {
        self.signs.iter().filter(|s| !**s).count()
    }

    /// `|J|`, the number of `+1` entries.
    pub fn count_positive(&self) -> usize {
        self.signs.iter().filter(|s| **s).count()
    }

    pub fn is_extreme(&self) -> bool {
        let j = self.count_positive();
        j == 0 || j == self.dim()
    }

    pub fn negated(&self) -> Direction {
        Direction {
            signs: self.signs.iter().map(|s| !s).collect(),
        }
    }

    /// Reorders coordinates: entry `k` of the result is entry `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Direction {
        Direction {
            signs: perm.iter().map(|&p| self.signs[p]).collect(),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            f.write_str(if s { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut signs = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '+' => signs.push(true),
                '-' => signs.push(false),
                other => {
                    return Err(Error::InvalidDirection {
                        input: s.to_string(),
                        reason: format!("unexpected character `{other}`; use `+` and `-`"),
                    })
                }
            }
        }
        if signs.len() < 2 {
            return Err(Error::InvalidDirection {
                input: s.to_string(),
                reason: "dimension must be at least 2".into(),
            });
        }
        Ok(Direction { signs })
    }
}
