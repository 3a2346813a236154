//! Little-endian fixed-width encoding shared by every persisted structure.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};

/// A structure with a versioned, deterministic binary form.
pub trait Persist: Sized {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()>;
    fn read_from<R: Read>(r: &mut R) -> Result<Self>;

    /// Number of bytes `write_to` produces.
    fn serialized_len(&self) -> usize {
        let mut counter = Counter(0);
        self.write_to(&mut counter).expect("counting never fails");
        counter.0
    }
}

struct Counter(usize);

impl Write for Counter {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0 += buf.len();
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

pub fn put_u8<W: Write>(w: &mut W, v: u8) -> io::Result<()> {
    w.write_all(&[v])
}

pub fn put_u32<W: Write>(w: &mut W, v: u32) -> io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

pub fn put_u64<W: Write>(w: &mut W, v: u64) -> io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

pub fn put_usize<W: Write>(w: &mut W, v: usize) -> io::Result<()> {
    put_u64(w, v as u64)
}

pub fn put_words<W: Write>(w: &mut W, words: &[u64]) -> io::Result<()> {
    put_usize(w, words.len())?;
    for &x in words {
        put_u64(w, x)?;
    }
    Ok(())
}

pub fn put_u32s<W: Write>(w: &mut W, values: &[u32]) -> io::Result<()> {
    put_usize(w, values.len())?;
    for &x in values {
        put_u32(w, x)?;
    }
    Ok(())
}

pub fn get_u8<R: Read>(r: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)?;
    Ok(b[0])
}

pub fn get_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn get_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn get_usize<R: Read>(r: &mut R) -> Result<usize> {
    let v = get_u64(r)?;
    usize::try_from(v).map_err(|_| Error::CorruptIndex(format!("length {v} overflows usize")))
}

/// Reads a length prefix, refusing absurd values before allocating.
fn get_len<R: Read>(r: &mut R, elem_bytes: usize) -> Result<usize> {
    const LIMIT: usize = 1 << 40;
    let n = get_usize(r)?;
    if n.saturating_mul(elem_bytes) > LIMIT {
        return Err(Error::CorruptIndex(format!("implausible array length {n}")));
    }
    Ok(n)
}

pub fn get_words<R: Read>(r: &mut R) -> Result<Vec<u64>> {
    let n = get_len(r, 8)?;
    (0..n).map(|_| get_u64(r)).collect()
}

pub fn get_u32s<R: Read>(r: &mut R) -> Result<Vec<u32>> {
    let n = get_len(r, 4)?;
    (0..n).map(|_| get_u32(r)).collect()
}

pub fn expect_tag<R: Read>(r: &mut R, tag: u8, what: &str) -> Result<()> {
    let got = get_u8(r)?;
    if got != tag {
        return Err(Error::CorruptIndex(format!(
            "{what}: expected tag {tag:#04x}, found {got:#04x}"
        )));
    }
    Ok(())
}
