//! On-disk index container.
//!
//! ```text
//! "CDBG"  version:u8  k:u16  sections:u16
//! { tag:[u8; 4]  len:u64  payload }*
//! crc32:u32   (over every preceding byte)
//! ```
//!
//! Integers are little endian. Unknown sections are skipped.

use std::fs;
use std::path::Path;

use crate::boss::BossIndex;
use crate::coloring::mark_colorable;
use crate::colors::CompressedColors;
use crate::error::{Error, Result};
use crate::index::{ColoredIndex, IndexMeta};
use crate::succinct::{codec, Persist};

pub const MAGIC: &[u8; 4] = b"CDBG";
pub const VERSION: u8 = 1;

const SEC_BOSS: &[u8; 4] = b"BOSS";
const SEC_COLORS: &[u8; 4] = b"COLR";
const SEC_META: &[u8; 4] = b"META";

fn meta_bytes(m: &IndexMeta) -> Vec<u8> {
    let mut out = Vec::with_capacity(48);
    for v in [m.reads, m.plain_bytes, m.rejected_non_acgt, m.rejected_short, m.duplicates, m.skipped_short] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn parse_meta(mut bytes: &[u8]) -> Result<IndexMeta> {
    let r = &mut bytes;
    Ok(IndexMeta {
        reads: codec::get_u64(r)?,
        plain_bytes: codec::get_u64(r)?,
        rejected_non_acgt: codec::get_u64(r)?,
        rejected_short: codec::get_u64(r)?,
        duplicates: codec::get_u64(r)?,
        skipped_short: codec::get_u64(r)?,
    })
}

fn persist_bytes<T: Persist>(value: &T) -> Vec<u8> {
    let mut out = Vec::with_capacity(value.serialized_len());
    value.write_to(&mut out).expect("writing to memory cannot fail");
    out
}

pub fn to_bytes(index: &ColoredIndex) -> Vec<u8> {
    let sections: [(&[u8; 4], Vec<u8>); 3] = [
        (SEC_BOSS, persist_bytes(&index.boss)),
        (SEC_COLORS, persist_bytes(&index.colors)),
        (SEC_META, meta_bytes(&index.meta)),
    ];
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(index.k() as u16).to_le_bytes());
    out.extend_from_slice(&(sections.len() as u16).to_le_bytes());
    for (tag, payload) in &sections {
        out.extend_from_slice(*tag);
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(payload);
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn take<'a>(bytes: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Integrity("container is truncated".into()));
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

pub fn from_bytes(bytes: &[u8]) -> Result<ColoredIndex> {
    if bytes.len() < MAGIC.len() + 9 || &bytes[..4] != MAGIC {
        return Err(Error::Integrity("not an index container".into()));
    }
    let (body, crc) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(crc.try_into().unwrap());
    if crc32fast::hash(body) != stored {
        return Err(Error::Integrity("checksum mismatch".into()));
    }
    let mut rest = &body[4..];
    let version = take(&mut rest, 1)?[0];
    if version != VERSION {
        return Err(Error::Integrity(format!("unsupported container version {version}")));
    }
    let k = u16::from_le_bytes(take(&mut rest, 2)?.try_into().unwrap()) as usize;
    let count = u16::from_le_bytes(take(&mut rest, 2)?.try_into().unwrap());
    let (mut boss, mut colors, mut meta) = (None, None, None);
    for _ in 0..count {
        let tag: [u8; 4] = take(&mut rest, 4)?.try_into().unwrap();
        let len = u64::from_le_bytes(take(&mut rest, 8)?.try_into().unwrap());
        let len = usize::try_from(len).map_err(|_| Error::Integrity("section too large".into()))?;
        let mut payload = take(&mut rest, len)?;
        match &tag {
            SEC_BOSS => boss = Some(BossIndex::read_from(&mut payload)?),
            SEC_COLORS => colors = Some(CompressedColors::read_from(&mut payload)?),
            SEC_META => meta = Some(parse_meta(payload)?),
            _ => continue,
        }
        if !payload.is_empty() && &tag != SEC_META {
            return Err(Error::CorruptIndex(format!("trailing bytes in section {}", String::from_utf8_lossy(&tag))));
        }
    }
    if !rest.is_empty() {
        return Err(Error::Integrity("bytes after the last section".into()));
    }
    let boss = boss.ok_or_else(|| Error::CorruptIndex("missing graph section".into()))?;
    let colors = colors.ok_or_else(|| Error::CorruptIndex("missing color section".into()))?;
    if boss.k() != k {
        return Err(Error::CorruptIndex(format!("header k = {k} but graph has k = {}", boss.k())));
    }
    if mark_colorable(&boss)?.bits() != colors.colorable().bits() {
        return Err(Error::CorruptIndex("colored nodes do not match the graph".into()));
    }
    Ok(ColoredIndex { boss, colors, meta: meta.unwrap_or_default() })
}

pub fn save(index: &ColoredIndex, path: &Path) -> Result<u64> {
    let bytes = to_bytes(index);
    fs::write(path, &bytes)?;
    Ok(bytes.len() as u64)
}

/// Loads a container; also returns its size in bytes.
pub fn load(path: &Path) -> Result<(ColoredIndex, u64)> {
    let bytes = fs::read(path)?;
    Ok((from_bytes(&bytes)?, bytes.len() as u64))
}
