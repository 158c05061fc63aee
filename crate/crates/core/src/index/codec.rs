//! Little-endian index file.
//!
//! ```text
//! "RLC1"  u32 version  u16 k  u64 n  u64 |labels|
//! labels      |labels| × (u32 byte length, UTF-8 bytes)
//! order       n × u64          vertex at access id 0, 1, ...
//! dictionary  u64 count, then per repeat: u16 length, length × u32 label id
//! entries     per vertex: u64 count, count × (u64 hub aid, u32 repeat id) for
//!             the in-list, then the same for the out-list
//! names       optional: u64 count, count × (u32 byte length, UTF-8 bytes)
//! ```
//!
//! The trailing name section maps internal vertex ids back to external
//! identifiers. Files without it decode with decimal ids as names.

use std::fs;
use std::path::Path;

use super::{IndexEntry, MrDictionary, RlcIndex};
use crate::error::{Result, RlcError};
use crate::graph::{Interner, VertexOrder};
use crate::labelseq::{minimum_repeat_len, Label};

pub const MAGIC: &[u8; 4] = b"RLC1";
pub const FORMAT_VERSION: u32 = 1;

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.buf.extend_from_slice(s.as_bytes());
    }
    fn entries(&mut self, list: &[IndexEntry]) {
        self.u64(list.len() as u64);
        for e in list {
            self.u64(e.hub as u64);
            self.u32(e.mr);
        }
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

fn corrupt(msg: impl Into<String>) -> RlcError {
    RlcError::CorruptIndex(msg.into())
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&end| end <= self.data.len())
            .ok_or_else(|| corrupt(format!("truncated while reading {what} at byte {}", self.pos)))?;
        let out = &self.data[self.pos..end];
        self.pos = end;
        Ok(out)
    }
    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }
    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }
    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
    fn count(&mut self, what: &str, max: usize) -> Result<usize> {
        let c = self.u64(what)?;
        if c > max as u64 {
            return Err(corrupt(format!("{what} count {c} exceeds limit {max}")));
        }
        Ok(c as usize)
    }
    fn str(&mut self, what: &str) -> Result<String> {
        let len = self.u32(what)? as usize;
        let bytes = self.take(len, what)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| corrupt(format!("{what} is not UTF-8")))
    }
    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }
}

impl RlcIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer { buf: Vec::with_capacity(self.serialized_len()) };
        w.buf.extend_from_slice(MAGIC);
        w.u32(FORMAT_VERSION);
        w.u16(self.k as u16);
        w.u64(self.num_vertices() as u64);
        w.u64(self.labels.len() as u64);
        for name in self.labels.names() {
            w.str(name);
        }
        for &v in self.order.as_slice() {
            w.u64(v as u64);
        }
        w.u64(self.dict.len() as u64);
        for (_, seq) in self.dict.iter() {
            w.u16(seq.len() as u16);
            for l in seq.labels() {
                w.u32(l.0);
            }
        }
        for v in 0..self.num_vertices() {
            w.entries(&self.l_in[v]);
            w.entries(&self.l_out[v]);
        }
        w.u64(self.vertices.len() as u64);
        for name in self.vertices.names() {
            w.str(name);
        }
        w.buf
    }

    pub(crate) fn serialized_len(&self) -> usize {
        let strings = |t: &Interner| t.names().iter().map(|s| 4 + s.len()).sum::<usize>();
        let dict: usize = self.dict.iter().map(|(_, s)| 2 + 4 * s.len()).sum();
        let entries: usize = self.l_in.iter().chain(&self.l_out).map(|l| 8 + 12 * l.len()).sum();
        4 + 4
            + 2
            + 8
            + 8
            + strings(&self.labels)
            + 8 * self.num_vertices()
            + 8
            + dict
            + entries
            + 8
            + strings(&self.vertices)
    }

    pub fn from_bytes(data: &[u8]) -> Result<RlcIndex> {
        let mut r = Reader { data, pos: 0 };
        if r.take(4, "magic").map_err(|_| corrupt("missing magic"))? != MAGIC {
            return Err(corrupt("bad magic"));
        }
        let version = r.u32("version")?;
        if version != FORMAT_VERSION {
            return Err(corrupt(format!("unsupported version {version}")));
        }
        let k = r.u16("k")? as usize;
        if k == 0 {
            return Err(corrupt("k must be positive"));
        }
        // every count is bounded by what the remaining bytes could possibly hold
        let n = r.count("vertex", u32::MAX as usize)?;
        let num_labels = r.count("label", r.remaining() / 4)?;
        let mut labels = Vec::with_capacity(num_labels);
        for _ in 0..num_labels {
            labels.push(r.str("label name")?);
        }
        let labels = Interner::from_names(labels);
        if labels.len() != num_labels {
            return Err(corrupt("duplicate label names"));
        }

        if n > r.remaining() / 8 {
            return Err(corrupt("truncated vertex order"));
        }
        let mut by_rank = Vec::with_capacity(n);
        for _ in 0..n {
            let v = r.u64("vertex order")?;
            if v >= n as u64 {
                return Err(corrupt(format!("vertex {v} out of range in order")));
            }
            by_rank.push(v as u32);
        }
        let order = VertexOrder::from_sequence(by_rank)?;

        let dict_len = r.count("dictionary", r.remaining() / 2)?;
        let mut dict = MrDictionary::new();
        for i in 0..dict_len {
            let len = r.u16("repeat length")? as usize;
            if len == 0 || len > k {
                return Err(corrupt(format!("repeat #{i} has length {len} (k = {k})")));
            }
            let mut seq = Vec::with_capacity(len);
            for _ in 0..len {
                let l = r.u32("repeat label")?;
                if l as usize >= num_labels {
                    return Err(corrupt(format!("repeat #{i} uses unknown label {l}")));
                }
                seq.push(Label(l));
            }
            if minimum_repeat_len(&seq) != len {
                return Err(corrupt(format!("repeat #{i} is not primitive")));
            }
            if dict.intern(&seq) as usize != i {
                return Err(corrupt(format!("repeat #{i} is a duplicate")));
            }
        }

        let read_list = |r: &mut Reader<'_>| -> Result<Vec<IndexEntry>> {
            let count = r.count("entry", r.remaining() / 12)?;
            let mut list = Vec::with_capacity(count);
            for _ in 0..count {
                let hub = r.u64("entry hub")?;
                let mr = r.u32("entry repeat")?;
                if hub >= n as u64 || mr as usize >= dict_len {
                    return Err(corrupt(format!("entry ({hub}, {mr}) out of range")));
                }
                let e = IndexEntry { hub: hub as u32, mr };
                if list.last().is_some_and(|prev| *prev >= e) {
                    return Err(corrupt("entry list not strictly sorted"));
                }
                list.push(e);
            }
            Ok(list)
        };
        let mut l_in = Vec::with_capacity(n);
        let mut l_out = Vec::with_capacity(n);
        for _ in 0..n {
            l_in.push(read_list(&mut r)?);
            l_out.push(read_list(&mut r)?);
        }

        let vertices = if r.remaining() == 0 {
            Interner::from_names((0..n).map(|v| v.to_string()).collect())
        } else {
            let count = r.count("vertex name", n)?;
            if count != n {
                return Err(corrupt(format!("{count} vertex names for {n} vertices")));
            }
            let mut names = Vec::with_capacity(n);
            for _ in 0..n {
                names.push(r.str("vertex name")?);
            }
            let table = Interner::from_names(names);
            if table.len() != n {
                return Err(corrupt("duplicate vertex names"));
            }
            table
        };
        if r.remaining() != 0 {
            return Err(corrupt(format!("{} trailing bytes", r.remaining())));
        }

        Ok(RlcIndex { k, order, dict, labels, vertices, l_in, l_out })
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<RlcIndex> {
        RlcIndex::from_bytes(&fs::read(path)?)
    }
}
