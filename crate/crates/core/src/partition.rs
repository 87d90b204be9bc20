//! Subfile index space and byte-level file partitioning.
//!
//! Each of the N files is split into K(K−1) subfiles, one per (unordered
//! user pair, tag user within the pair) combination. The canonical order
//! (file, min(pair), max(pair), tag) fixes which byte range of a file maps
//! to which subfile, and doubles as the column order of the global GF(2)
//! subfile basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::gf2::{BasisVector, Block};
use crate::{Error, Result};

/// Identifies one of the N·K(K−1) subfiles: (file, unordered user pair,
/// tag user inside the pair). Indices are 1-based; `lo < hi` always holds,
/// so the derived ordering is the canonical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubfileId {
    pub file: u32,
    pub lo: u32,
    pub hi: u32,
    pub tag: u32,
}

impl SubfileId {
    pub fn new(file: u32, pair: (u32, u32), tag: u32) -> Result<Self> {
        let (lo, hi) = if pair.0 < pair.1 {
            (pair.0, pair.1)
        } else {
            (pair.1, pair.0)
        };
        if lo == hi || lo == 0 {
            return Err(Error::InvalidSubfileId(format!(
                "pair {{{},{}}} must hold two distinct users >= 1",
                pair.0, pair.1
            )));
        }
        if tag != lo && tag != hi {
            return Err(Error::InvalidSubfileId(format!(
                "tag {} not in pair {{{},{}}}",
                tag, lo, hi
            )));
        }
        Ok(SubfileId { file, lo, hi, tag })
    }

    pub fn pair(&self) -> (u32, u32) {
        (self.lo, self.hi)
    }

    /// The pair member that is not the tag.
    pub fn other(&self) -> u32 {
        if self.tag == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn pair_contains(&self, user: u32) -> bool {
        self.lo == user || self.hi == user
    }
}

impl fmt::Display for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "subfile(file={}, pair={{{},{}}}, tag={})",
            self.file, self.lo, self.hi, self.tag
        )
    }
}

/// The pair {k−1, k} used by user k's coded cache entries, with index 0
/// wrapping around to K: user 1's anchor pair is {1, K}.
pub fn normalize_anchor_pair(user: u32, users: u32) -> Result<(u32, u32)> {
    if user < 1 || user > users {
        return Err(Error::UserOutOfRange { user, users });
    }
    if user == 1 {
        Ok((1, users))
    } else {
        Ok((user - 1, user))
    }
}

/// The anchor-pair member other than `user` itself.
pub fn anchor_mate(user: u32, users: u32) -> Result<u32> {
    let (lo, hi) = normalize_anchor_pair(user, users)?;
    Ok(if lo == user { hi } else { lo })
}

/// Session-wide partition parameters: K users, N files, file size in bits.
///
/// `file_bits` must split into K(K−1) byte-aligned subfiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSpec {
    users: u32,
    files: u32,
    file_bits: u64,
}

impl PartitionSpec {
    pub fn new(users: u32, files: u32, file_bits: u64) -> Result<Self> {
        if users < 2 {
            return Err(Error::TooFewUsers(users));
        }
        if files == 0 {
            return Err(Error::InvalidParameter("file count must be >= 1".into()));
        }
        let required = Self::bits_multiple(users);
        if file_bits == 0 || file_bits % required != 0 {
            return Err(Error::IndivisibleFileSize {
                file_bits,
                required_bits: required,
            });
        }
        Ok(PartitionSpec {
            users,
            files,
            file_bits,
        })
    }

    /// Smallest valid file size: one byte per subfile.
    pub fn auto(users: u32, files: u32) -> Result<Self> {
        Self::new(users, files, Self::bits_multiple(users))
    }

    /// Smallest valid file size that is at least `hint_bits`.
    pub fn with_min_file_bits(users: u32, files: u32, hint_bits: u64) -> Result<Self> {
        let step = Self::bits_multiple(users);
        let mult = hint_bits.div_ceil(step).max(1);
        Self::new(users, files, step * mult)
    }

    /// Every valid file size is a multiple of this: 8·K(K−1) bits.
    pub fn bits_multiple(users: u32) -> u64 {
        8 * u64::from(users) * u64::from(users - 1)
    }

    pub fn users(&self) -> u32 {
        self.users
    }

    pub fn files(&self) -> u32 {
        self.files
    }

    pub fn file_bits(&self) -> u64 {
        self.file_bits
    }

    pub fn file_bytes(&self) -> usize {
        (self.file_bits / 8) as usize
    }

    pub fn subfiles_per_file(&self) -> u32 {
        self.users * (self.users - 1)
    }

    pub fn subfile_bits(&self) -> u64 {
        self.file_bits / u64::from(self.subfiles_per_file())
    }

    pub fn subfile_bytes(&self) -> usize {
        (self.subfile_bits() / 8) as usize
    }

    /// Dimension of the global subfile basis: N·K(K−1).
    pub fn basis_dim(&self) -> usize {
        self.files as usize * self.subfiles_per_file() as usize
    }

    fn check_file_index(&self, file: u32) -> Result<()> {
        if file < 1 || file > self.files {
            return Err(Error::FileOutOfRange {
                file,
                files: self.files,
            });
        }
        Ok(())
    }

    /// All K(K−1) subfile ids of one file, in canonical order.
    pub fn enumerate_subfiles(&self, file: u32) -> Result<Vec<SubfileId>> {
        self.check_file_index(file)?;
        let k = self.users;
        let mut out = Vec::with_capacity(self.subfiles_per_file() as usize);
        for lo in 1..k {
            for hi in (lo + 1)..=k {
                for tag in [lo, hi] {
                    out.push(SubfileId { file, lo, hi, tag });
                }
            }
        }
        Ok(out)
    }

    /// Position of `id` within its file's canonical enumeration.
    pub fn offset_within_file(&self, id: &SubfileId) -> usize {
        let k = self.users as usize;
        let (lo, hi) = (id.lo as usize, id.hi as usize);
        let pairs_before = (lo - 1) * k - lo * (lo - 1) / 2 + (hi - lo - 1);
        2 * pairs_before + usize::from(id.tag == id.hi)
    }

    /// Global column of `id` in the subfile basis.
    pub fn column(&self, id: &SubfileId) -> usize {
        (id.file as usize - 1) * self.subfiles_per_file() as usize + self.offset_within_file(id)
    }

    pub fn unit(&self, id: &SubfileId) -> BasisVector {
        BasisVector::unit(self.column(id) as u32)
    }

    /// Unit vectors of all subfiles of one file.
    pub fn file_units(&self, file: u32) -> Result<Vec<BasisVector>> {
        Ok(self
            .enumerate_subfiles(file)?
            .iter()
            .map(|id| self.unit(id))
            .collect())
    }
}

/// Splits a file into its K(K−1) subfile blocks along the canonical layout.
pub fn split_file(
    bytes: &[u8],
    spec: &PartitionSpec,
    file: u32,
) -> Result<BTreeMap<SubfileId, Block>> {
    if bytes.len() != spec.file_bytes() {
        return Err(Error::WrongFileLength {
            expected: spec.file_bytes(),
            actual: bytes.len(),
        });
    }
    let sz = spec.subfile_bytes();
    let mut parts = BTreeMap::new();
    for id in spec.enumerate_subfiles(file)? {
        let off = spec.offset_within_file(&id) * sz;
        parts.insert(id, Block::new(bytes[off..off + sz].to_vec()));
    }
    Ok(parts)
}

/// Rebuilds a file from its subfile blocks; the inverse of [`split_file`].
pub fn reassemble(
    parts: &BTreeMap<SubfileId, Block>,
    spec: &PartitionSpec,
    file: u32,
) -> Result<Vec<u8>> {
    let ids = spec.enumerate_subfiles(file)?;
    let missing: Vec<String> = ids
        .iter()
        .filter(|id| !parts.contains_key(id))
        .map(|id| id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSubfiles { file, ids: missing });
    }
    let mut out = Vec::with_capacity(spec.file_bytes());
    for id in &ids {
        let block = &parts[id];
        if block.len() != spec.subfile_bytes() {
            return Err(Error::BlockSizeMismatch {
                left: block.len(),
                right: spec.subfile_bytes(),
            });
        }
        out.extend_from_slice(block.as_bytes());
    }
    Ok(out)
}
