//! Binary sample-set cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic        4 bytes  "UGSS"
//! version      u16      1
//! flags        u16      bit 0: seed present
//! fingerprint  16 bytes ASCII hex graph fingerprint
//! seed         u64      0 when absent
//! start        u64      stream index of the first world
//! nodes        u32
//! worlds       u64
//! labels       worlds * nodes * u32, one label array per world
//! ```

use super::world::{PossibleWorld, SampleSet};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"UGSS";
const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 2 + 16 + 8 + 8 + 4 + 8;

pub fn encode_sample_set(r: &SampleSet) -> Vec<u8> {
    let n = crate::signature::Connectivity::node_count(r);
    let mut out = Vec::with_capacity(HEADER_LEN + r.len() * n * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(r.seed().is_some() as u16).to_le_bytes());
    let mut fp = [b'0'; 16];
    let src = r.fingerprint().as_bytes();
    fp[..src.len().min(16)].copy_from_slice(&src[..src.len().min(16)]);
    out.extend_from_slice(&fp);
    out.extend_from_slice(&r.seed().unwrap_or(0).to_le_bytes());
    out.extend_from_slice(&r.start().to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(r.len() as u64).to_le_bytes());
    for w in r.worlds() {
        for &l in w.labels() {
            out.extend_from_slice(&l.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Cache(format!("truncated at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Decodes a cache produced by [`encode_sample_set`]. Rejects anything
/// malformed without panicking.
pub fn decode_sample_set(bytes: &[u8]) -> Result<SampleSet> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let flags = r.u16()?;
    if flags & !1 != 0 {
        return Err(Error::Cache(format!("unknown flags {flags:#x}")));
    }
    let fp = r.take(16)?;
    if !fp.iter().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
        return Err(Error::Cache("fingerprint is not lowercase hex".into()));
    }
    let fingerprint = String::from_utf8(fp.to_vec()).expect("ascii");
    let seed = r.u64()?;
    let start = r.u64()?;
    let n = r.u32()? as usize;
    let count = r.u64()?;
    if n == 0 {
        return Err(Error::Cache("zero nodes".into()));
    }
    if flags & 1 == 0 && seed != 0 {
        return Err(Error::Cache("seed stored without the seed flag".into()));
    }
    let body = (count as u128) * (n as u128) * 4;
    if body != (bytes.len() - r.pos) as u128 {
        return Err(Error::Cache(format!(
            "{count} worlds of {n} nodes need {body} bytes, found {}",
            bytes.len() - r.pos
        )));
    }
    let mut worlds = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let labels = (0..n).map(|_| r.u32()).collect::<Result<Vec<u32>>>()?;
        // Labels number components in order of first appearance, so each
        // label is at most one past the largest seen so far.
        let mut fresh = 0u32;
        for &l in &labels {
            if l > fresh {
                return Err(Error::Cache(format!("label {l} is not in first-appearance order")));
            }
            if l == fresh {
                fresh += 1;
            }
        }
        worlds.push(PossibleWorld::from_labels(labels)?);
    }
    let seed = if flags & 1 != 0 { Some(seed) } else { None };
    SampleSet::from_parts(fingerprint, n, seed, start, worlds)
}
