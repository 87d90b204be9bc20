//! Demand vectors: which file each user requests.

use itertools::Itertools;

use crate::{Error, Result};

/// A demand vector `d`, where entry k (1-based) is the file requested by
/// user k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Demand {
    files: Vec<u32>,
}

impl Demand {
    pub fn new(files: Vec<u32>) -> Self {
        Demand { files }
    }

    pub fn users(&self) -> u32 {
        self.files.len() as u32
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.files
    }

    /// File requested by `user` (1-based).
    pub fn file_for(&self, user: u32) -> Result<u32> {
        self.files
            .get(user as usize - 1)
            .copied()
            .ok_or(Error::UserOutOfRange {
                user,
                users: self.users(),
            })
    }

    /// True iff the demand is a permutation of [1, K]: every user requests
    /// a different file.
    pub fn is_permutation(&self) -> bool {
        let k = self.files.len();
        let mut seen = vec![false; k];
        for &f in &self.files {
            if f < 1 || f as usize > k || seen[f as usize - 1] {
                return false;
            }
            seen[f as usize - 1] = true;
        }
        true
    }

    /// Every entry lies in [1, files].
    pub fn in_range(&self, files: u32) -> bool {
        self.files.iter().all(|&f| f >= 1 && f <= files)
    }

    pub fn identity(users: u32) -> Self {
        Demand {
            files: (1..=users).collect(),
        }
    }

    /// The cyclic-shift demand d^i: user k requests file ((i+k−2) mod K)+1,
    /// so d^1 is the identity and under d^i user K+1−i requests file K.
    pub fn rotation(users: u32, i: u32) -> Self {
        Demand {
            files: (1..=users).map(|k| (i + k - 2) % users + 1).collect(),
        }
    }

    /// All K! permutation demands in lexicographic order.
    pub fn all_permutations(users: u32) -> Vec<Demand> {
        (1..=users)
            .permutations(users as usize)
            .map(Demand::new)
            .collect()
    }
}
