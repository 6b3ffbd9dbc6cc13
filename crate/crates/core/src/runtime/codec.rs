//! Wire format for pair batches.
//!
//! A batch is written as one or more frames. Each frame is an 8-byte
//! little-endian payload length followed by the payload:
//!
//! ```text
//! origin   u32 LE   sending partition; bit 31 set when more frames follow
//! count    u64 LE   number of records in this frame
//! records  count × (key u64 LE, value)
//! ```
//!
//! Values use the algorithm's [`WireValue`] encoding.

use std::io::{self, Read, Write};

use crate::graph::{PartitionId, VertexId};

/// Pairs per frame before a batch is split.
pub const MAX_PAIRS_PER_FRAME: usize = 1 << 16;

const CONTINUATION: u32 = 1 << 31;

#[derive(Debug, thiserror::Error)]
pub enum CodecError {
    #[error("truncated payload")]
    Truncated,
    #[error("frame declares {declared} records but payload holds trailing bytes")]
    TrailingBytes { declared: u64 },
    #[error("origin partition {0} out of range")]
    BadOrigin(u32),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub trait WireValue: Sized {
    fn encode(&self, out: &mut Vec<u8>);
    fn decode(buf: &mut &[u8]) -> Result<Self, CodecError>;
}

fn take<const N: usize>(buf: &mut &[u8]) -> Result<[u8; N], CodecError> {
    if buf.len() < N {
        return Err(CodecError::Truncated);
    }
    let (head, rest) = buf.split_at(N);
    *buf = rest;
    Ok(head.try_into().expect("length checked"))
}

impl WireValue for u64 {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn decode(buf: &mut &[u8]) -> Result<Self, CodecError> {
        Ok(u64::from_le_bytes(take(buf)?))
    }
}

impl WireValue for f64 {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_bits().to_le_bytes());
    }

    fn decode(buf: &mut &[u8]) -> Result<Self, CodecError> {
        Ok(f64::from_bits(u64::from_le_bytes(take(buf)?)))
    }
}

/// Length-prefixed (u32 LE) sequence of i64 LE counters.
impl WireValue for Vec<i64> {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.len() as u32).to_le_bytes());
        for x in self {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }

    fn decode(buf: &mut &[u8]) -> Result<Self, CodecError> {
        let len = u32::from_le_bytes(take(buf)?) as usize;
        if buf.len() < len * 8 {
            return Err(CodecError::Truncated);
        }
        (0..len)
            .map(|_| Ok(i64::from_le_bytes(take(buf)?)))
            .collect()
    }
}

/// Encodes one frame (length prefix included).
pub fn encode_frame<V: WireValue>(
    origin: PartitionId,
    more: bool,
    pairs: &[(VertexId, V)],
) -> Vec<u8> {
    let mut buf = vec![0u8; 8];
    let tag = origin as u32 | if more { CONTINUATION } else { 0 };
    buf.extend_from_slice(&tag.to_le_bytes());
    buf.extend_from_slice(&(pairs.len() as u64).to_le_bytes());
    for (k, v) in pairs {
        buf.extend_from_slice(&k.to_le_bytes());
        v.encode(&mut buf);
    }
    let len = (buf.len() - 8) as u64;
    buf[..8].copy_from_slice(&len.to_le_bytes());
    buf
}

pub struct Frame<V> {
    pub origin: PartitionId,
    pub more: bool,
    pub pairs: Vec<(VertexId, V)>,
}

/// Decodes a frame payload (without its length prefix).
pub fn decode_payload<V: WireValue>(mut payload: &[u8]) -> Result<Frame<V>, CodecError> {
    let buf = &mut payload;
    let tag = u32::from_le_bytes(take(buf)?);
    let count = u64::from_le_bytes(take(buf)?);
    let mut pairs = Vec::with_capacity(count.min(MAX_PAIRS_PER_FRAME as u64) as usize);
    for _ in 0..count {
        let k = u64::from_le_bytes(take(buf)?);
        pairs.push((k, V::decode(buf)?));
    }
    if !buf.is_empty() {
        return Err(CodecError::TrailingBytes { declared: count });
    }
    Ok(Frame {
        origin: (tag & !CONTINUATION) as PartitionId,
        more: tag & CONTINUATION != 0,
        pairs,
    })
}

/// Writes a whole batch, split into frames of at most
/// [`MAX_PAIRS_PER_FRAME`] pairs. An empty batch is one empty frame.
pub fn write_batch<V: WireValue, W: Write>(
    w: &mut W,
    origin: PartitionId,
    pairs: &[(VertexId, V)],
) -> io::Result<()> {
    if pairs.is_empty() {
        return w.write_all(&encode_frame::<V>(origin, false, &[]));
    }
    let chunks = pairs.chunks(MAX_PAIRS_PER_FRAME);
    let last = chunks.len() - 1;
    for (i, chunk) in chunks.enumerate() {
        w.write_all(&encode_frame(origin, i < last, chunk))?;
    }
    Ok(())
}

/// Reads one frame; `Ok(None)` on a clean end of stream before any byte.
pub fn read_frame<V: WireValue, R: Read>(r: &mut R) -> Result<Option<Frame<V>>, CodecError> {
    let mut len = [0u8; 8];
    let mut got = 0;
    while got < 8 {
        match r.read(&mut len[got..])? {
            0 if got == 0 => return Ok(None),
            0 => return Err(CodecError::Truncated),
            k => got += k,
        }
    }
    let len = u64::from_le_bytes(len) as usize;
    let mut payload = vec![0u8; len];
    r.read_exact(&mut payload).map_err(|e| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            CodecError::Truncated
        } else {
            CodecError::Io(e)
        }
    })?;
    decode_payload(&payload).map(Some)
}

/// A batch with the partition that sent it.
pub type OriginBatch<V> = (PartitionId, Vec<(VertexId, V)>);

/// Reads frames until the end of one batch.
pub fn read_batch<V: WireValue, R: Read>(r: &mut R) -> Result<Option<OriginBatch<V>>, CodecError> {
    let Some(first) = read_frame::<V, _>(r)? else {
        return Ok(None);
    };
    let origin = first.origin;
    let mut pairs = first.pairs;
    let mut more = first.more;
    while more {
        let frame = read_frame::<V, _>(r)?.ok_or(CodecError::Truncated)?;
        if frame.origin != origin {
            return Err(CodecError::BadOrigin(frame.origin as u32));
        }
        pairs.extend(frame.pairs);
        more = frame.more;
    }
    Ok(Some((origin, pairs)))
}
