//! Persistent cache for computed subgroup lattices.
//!
//! One binary file per group. Layout:
//!
//! ```text
//! magic   "BLAT1"                      5 bytes
//! version u32 LE                        = 1
//! order   u32 LE                       element count of the group
//! count   u32 LE                       number of subgroups
//! checksum u64 LE                      FNV-1a over the payload
//! payload:
//!   count × mask     (ceil(order/64) u64 LE words each)
//!   count × poset row (ceil(count/64) u64 LE words each; bit j of row i set
//!                      when subgroup i is contained in subgroup j)
//! ```
//!
//! Any structural mismatch or checksum failure is reported as a corrupt
//! entry and treated as a miss by callers. Writes go through a temp file and
//! an atomic rename.

use crate::bitset::ElemSet;
use crate::group::{Group, Subgroup};
use crate::lattice::SubgroupLattice;
use crate::Result;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

const MAGIC: &[u8; 5] = b"BLAT1";
const VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "BLAT_CACHE_DIR";

/// Outcome of a cache lookup.
pub enum CacheOutcome {
    Hit(SubgroupLattice),
    Miss,
    /// Present but unreadable (bad magic, version, checksum, or shape).
    Corrupt,
}

pub struct LatticeCache {
    dir: PathBuf,
}

impl LatticeCache {
    pub fn new(dir: impl Into<PathBuf>) -> LatticeCache {
        LatticeCache { dir: dir.into() }
    }

    /// Cache rooted at `$BLAT_CACHE_DIR`, when set.
    pub fn from_env() -> Option<LatticeCache> {
        std::env::var_os(CACHE_DIR_ENV).map(LatticeCache::new)
    }

    /// Cache key: canonical name plus a hash of the generator images, so a
    /// renamed or regenerated group never aliases another entry.
    pub fn key_for(group: &Group) -> String {
        let mut hasher = Fnv::new();
        hasher.write_usize(group.degree());
        for &gen in group.generators() {
            for &img in group.perm(gen).images() {
                hasher.write_u16(img);
            }
        }
        let sanitized: String = group
            .name()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        format!("{}-{:016x}.blat", sanitized, hasher.finish())
    }

    fn path_for(&self, group: &Group) -> PathBuf {
        self.dir.join(Self::key_for(group))
    }

    pub fn store(&self, lattice: &SubgroupLattice) -> Result<()> {
        let group = lattice.group();
        let order = group.order();
        let count = lattice.len();
        let mask_words = order.div_ceil(64);
        let row_words = count.div_ceil(64);

        let mut payload: Vec<u8> = Vec::with_capacity(8 * count * (mask_words + row_words));
        for i in 0..count {
            for w in lattice.subgroup(i).mask().words() {
                payload.extend_from_slice(&w.to_le_bytes());
            }
        }
        for i in 0..count {
            let mut row = vec![0u64; row_words];
            for (j, word) in row.iter_mut().enumerate() {
                for b in 0..64 {
                    let k = j * 64 + b;
                    if k < count && lattice.leq(i, k) {
                        *word |= 1 << b;
                    }
                }
            }
            for w in row {
                payload.extend_from_slice(&w.to_le_bytes());
            }
        }

        let mut bytes = Vec::with_capacity(payload.len() + 25);
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&VERSION.to_le_bytes());
        bytes.extend_from_slice(&(order as u32).to_le_bytes());
        bytes.extend_from_slice(&(count as u32).to_le_bytes());
        bytes.extend_from_slice(&fnv1a(&payload).to_le_bytes());
        bytes.extend_from_slice(&payload);

        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(group);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(&bytes)?;
            file.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Loads the lattice of `group` if a valid entry exists. I/O errors
    /// other than absence are surfaced; malformed content is `Corrupt`.
    pub fn load(&self, group: &Arc<Group>) -> Result<CacheOutcome> {
        let path = self.path_for(group);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(CacheOutcome::Miss),
            Err(e) => return Err(e.into()),
        };
        match decode(group, &bytes) {
            Some(lat) => Ok(CacheOutcome::Hit(lat)),
            None => Ok(CacheOutcome::Corrupt),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

fn decode(group: &Arc<Group>, bytes: &[u8]) -> Option<SubgroupLattice> {
    if bytes.len() < 25 || &bytes[..5] != MAGIC {
        return None;
    }
    let version = u32::from_le_bytes(bytes[5..9].try_into().ok()?);
    let order = u32::from_le_bytes(bytes[9..13].try_into().ok()?) as usize;
    let count = u32::from_le_bytes(bytes[13..17].try_into().ok()?) as usize;
    let checksum = u64::from_le_bytes(bytes[17..25].try_into().ok()?);
    if version != VERSION || order != group.order() {
        return None;
    }
    let payload = &bytes[25..];
    if fnv1a(payload) != checksum {
        return None;
    }
    let mask_words = order.div_ceil(64);
    let row_words = count.div_ceil(64);
    if payload.len() != 8 * count * (mask_words + row_words) {
        return None;
    }

    let word_at = |idx: usize| -> u64 {
        u64::from_le_bytes(payload[8 * idx..8 * idx + 8].try_into().unwrap())
    };

    let mut subs = Vec::with_capacity(count);
    for i in 0..count {
        let words: Vec<u64> = (0..mask_words).map(|w| word_at(i * mask_words + w)).collect();
        // Reject masks naming elements outside the universe.
        if order % 64 != 0 {
            let top = words.last().copied().unwrap_or(0);
            if top >> (order % 64) != 0 {
                return None;
            }
        }
        subs.push(Subgroup::from_mask(ElemSet::from_words(order, words)));
    }

    let lattice = SubgroupLattice::from_subgroups(group.clone(), subs).ok()?;

    // The stored poset rows must match the recomputed ones.
    let base = count * mask_words;
    for i in 0..count {
        for j in 0..count {
            let w = word_at(base + i * row_words + j / 64);
            let stored = w >> (j % 64) & 1 == 1;
            if stored != lattice.leq(i, j) {
                return None;
            }
        }
    }
    Some(lattice)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = Fnv::new();
    for &b in bytes {
        h.write_u8(b);
    }
    h.finish()
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Fnv {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write_u8(&mut self, b: u8) {
        self.0 ^= b as u64;
        self.0 = self.0.wrapping_mul(0x1_0000_0000_01b3);
    }

    fn write_u16(&mut self, v: u16) {
        for b in v.to_le_bytes() {
            self.write_u8(b);
        }
    }

    fn write_usize(&mut self, v: usize) {
        for b in (v as u64).to_le_bytes() {
            self.write_u8(b);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::construct;

    fn lattice_of(spec: &str) -> SubgroupLattice {
        SubgroupLattice::build(Arc::new(construct(spec).unwrap())).unwrap()
    }

    #[test]
    fn store_then_load_s5_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LatticeCache::new(dir.path());
        let lat = lattice_of("S5");
        assert_eq!(lat.len(), 156);
        cache.store(&lat).unwrap();

        let group = lat.group().clone();
        match cache.load(&group).unwrap() {
            CacheOutcome::Hit(loaded) => {
                assert_eq!(loaded.len(), 156);
                for i in 0..loaded.len() {
                    assert_eq!(loaded.subgroup(i).mask(), lat.subgroup(i).mask());
                }
            }
            _ => panic!("expected a cache hit"),
        }
    }

    #[test]
    fn absent_key_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LatticeCache::new(dir.path());
        let lat = lattice_of("S3");
        match cache.load(lat.group()).unwrap() {
            CacheOutcome::Miss => {}
            _ => panic!("expected a miss"),
        }
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LatticeCache::new(dir.path());
        let lat = lattice_of("S3");
        cache.store(&lat).unwrap();
        let path = dir.path().join(LatticeCache::key_for(lat.group()));
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        match cache.load(lat.group()).unwrap() {
            CacheOutcome::Corrupt => {}
            _ => panic!("expected corruption to be detected"),
        }
    }

    #[test]
    fn flipped_payload_bit_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LatticeCache::new(dir.path());
        let lat = lattice_of("C12");
        cache.store(&lat).unwrap();
        let path = dir.path().join(LatticeCache::key_for(lat.group()));
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 1;
        fs::write(&path, &bytes).unwrap();
        match cache.load(lat.group()).unwrap() {
            CacheOutcome::Corrupt => {}
            _ => panic!("expected corruption to be detected"),
        }
    }

    #[test]
    fn different_generators_use_different_keys() {
        let a = construct("C6").unwrap();
        let b = construct("C2 x C3").unwrap();
        assert_ne!(LatticeCache::key_for(&a), LatticeCache::key_for(&b));
    }
}
