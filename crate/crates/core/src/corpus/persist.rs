//! Flat index file format, all integers little-endian:
//!
//! ```text
//! header  magic "INTRAGIX" (8) | format u32 | dimension u32 | count u64
//!         | index version u64 | FNV-1a 64 checksum of body u64
//! body    per entry:
//!           id: u32 len + UTF-8
//!           vector: dimension x f32
//!           modality u8 (0 text, 1 table, 2 image)
//!           doc_id: u32 len + UTF-8
//!           original_text: u32 len + UTF-8
//!           summary: u8 flag, then u32 len + UTF-8 when flag = 1
//! ```

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::index::{EmbeddedNode, Payload, VectorIndex};
use super::Modality;
use crate::{Error, Result};

pub const INDEX_MAGIC: &[u8; 8] = b"INTRAGIX";
const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 8 + 8 + 8;

fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(*b)).wrapping_mul(0x0000_0100_0000_01b3))
}

fn put_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u32).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

pub fn encode_index(index: &VectorIndex) -> Vec<u8> {
    let mut body = Vec::new();
    for e in index.entries() {
        put_str(&mut body, &e.node_id);
        for x in &e.vector {
            body.extend_from_slice(&x.to_le_bytes());
        }
        body.push(match e.payload.modality {
            Modality::Text => 0,
            Modality::Table => 1,
            Modality::Image => 2,
        });
        put_str(&mut body, &e.payload.doc_id);
        put_str(&mut body, &e.payload.original_text);
        match &e.payload.summary_text {
            Some(s) => {
                body.push(1);
                put_str(&mut body, s);
            }
            None => body.push(0),
        }
    }
    let mut out = Vec::with_capacity(HEADER_LEN + body.len());
    out.extend_from_slice(INDEX_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(index.dimension() as u32).to_le_bytes());
    out.extend_from_slice(&(index.len() as u64).to_le_bytes());
    out.extend_from_slice(&index.version().to_le_bytes());
    out.extend_from_slice(&fnv1a64(&body).to_le_bytes());
    out.extend_from_slice(&body);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::CorruptIndex("unexpected end of data".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| Error::CorruptIndex("invalid UTF-8".into()))
    }
}

pub fn decode_index(bytes: &[u8]) -> Result<VectorIndex> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::CorruptIndex("truncated header".into()));
    }
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(8)? != INDEX_MAGIC {
        return Err(Error::CorruptIndex("bad magic".into()));
    }
    let format = r.u32()?;
    if format != FORMAT_VERSION {
        return Err(Error::CorruptIndex(format!("unsupported format version {format}")));
    }
    let dimension = r.u32()? as usize;
    let count = r.u64()?;
    let version = r.u64()?;
    let checksum = r.u64()?;
    if fnv1a64(&bytes[HEADER_LEN..]) != checksum {
        return Err(Error::CorruptIndex("checksum mismatch".into()));
    }
    let mut entries = Vec::new();
    for _ in 0..count {
        let node_id = r.string()?;
        let raw = r.take(dimension * 4)?;
        let vector = raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
        let modality = match r.u8()? {
            0 => Modality::Text,
            1 => Modality::Table,
            2 => Modality::Image,
            m => return Err(Error::CorruptIndex(format!("unknown modality tag {m}"))),
        };
        let doc_id = r.string()?;
        let original_text = r.string()?;
        let summary_text = match r.u8()? {
            0 => None,
            1 => Some(r.string()?),
            f => return Err(Error::CorruptIndex(format!("bad summary flag {f}"))),
        };
        entries.push(EmbeddedNode {
            node_id,
            vector,
            payload: Payload { original_text, summary_text, modality, doc_id },
        });
    }
    if r.pos != bytes.len() {
        return Err(Error::CorruptIndex("trailing bytes after last entry".into()));
    }
    VectorIndex::from_parts(dimension, version, entries)
}

/// Write the index through a temporary file and rename, so readers never see
/// a partial file.
pub fn persist_index(index: &VectorIndex, path: &Path) -> Result<()> {
    let bytes = encode_index(index);
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_index(path: &Path) -> Result<VectorIndex> {
    match fs::read(path) {
        Ok(bytes) => decode_index(&bytes),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Err(Error::IndexNotFound(path.to_path_buf())),
        Err(e) => Err(e.into()),
    }
}
