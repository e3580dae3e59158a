//! On-disk cache for Kloosterman tables and group censuses.
//!
//! Files live in `$KLOOS_CACHE_DIR` (no caching when unset). Layout, all
//! integers little-endian:
//!
//! | offset | size | field |
//! |---|---|---|
//! | 0 | 4 | magic `KLOS` |
//! | 4 | 2 | format version (1) |
//! | 6 | 2 | payload kind: 1 Kloosterman table, 2 census |
//! | 8 | 4 | r |
//! | 12 | 4 | modulus |
//! | 16 | 4 | group: 0 none, 1 SO⁺(2), 2 O⁺(2), 3 SO⁺(4), 4 O⁺(4) |
//! | 20 | 8 | record count |
//! | 28 | .. | records: `i32` sums indexed by `a`, or ascending `u64` packed elements |

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use kloos_core::expsum::KloostermanTable;
use kloos_core::ogroup::{GroupCensus, GroupKind};
use kloos_core::FieldCtx;

use crate::error::{CliError, CliResult};

pub const CACHE_ENV: &str = "KLOOS_CACHE_DIR";
pub const MAGIC: [u8; 4] = *b"KLOS";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u16)]
pub enum PayloadKind {
    Kloosterman = 1,
    Census = 2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub kind: PayloadKind,
    pub r: u32,
    pub modulus: u32,
    pub group: u32,
    pub count: u64,
}

impl Header {
    fn encode(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4..6].copy_from_slice(&VERSION.to_le_bytes());
        b[6..8].copy_from_slice(&(self.kind as u16).to_le_bytes());
        b[8..12].copy_from_slice(&self.r.to_le_bytes());
        b[12..16].copy_from_slice(&self.modulus.to_le_bytes());
        b[16..20].copy_from_slice(&self.group.to_le_bytes());
        b[20..28].copy_from_slice(&self.count.to_le_bytes());
        b
    }

    fn decode(bytes: &[u8]) -> Result<Self, String> {
        if bytes.len() < HEADER_LEN {
            return Err("truncated header".into());
        }
        if bytes[0..4] != MAGIC {
            return Err("bad magic".into());
        }
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let version = u16_at(4);
        if version != VERSION {
            return Err(format!("unsupported version {version}"));
        }
        let kind = match u16_at(6) {
            1 => PayloadKind::Kloosterman,
            2 => PayloadKind::Census,
            k => return Err(format!("unknown payload kind {k}")),
        };
        Ok(Header {
            kind,
            r: u32_at(8),
            modulus: u32_at(12),
            group: u32_at(16),
            count: u64::from_le_bytes(bytes[20..28].try_into().unwrap()),
        })
    }
}

fn group_code(kind: GroupKind) -> u32 {
    GroupKind::ALL.iter().position(|&k| k == kind).unwrap() as u32 + 1
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn kloosterman_path(dir: &Path, ctx: &FieldCtx) -> PathBuf {
    dir.join(format!("ksum-r{}-m{:x}.bin", ctx.r(), ctx.modulus()))
}

pub fn census_path(dir: &Path, ctx: &FieldCtx, kind: GroupKind) -> PathBuf {
    dir.join(format!("census-{}-r{}-m{:x}.bin", kind.slug(), ctx.r(), ctx.modulus()))
}

fn write_atomic(path: &Path, header: &Header, payload: &[u8]) -> CliResult<()> {
    let io = |e| CliError::io(path.display().to_string(), e);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let file = fs::File::create(&tmp).map_err(io)?;
        let mut w = BufWriter::new(file);
        w.write_all(&header.encode()).map_err(io)?;
        w.write_all(payload).map_err(io)?;
        w.flush().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

/// Reads and validates a cache file; `Ok(None)` if it does not exist.
fn read_checked(path: &Path, expect: &Header, record: usize) -> CliResult<Option<Vec<u8>>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(CliError::io(path.display().to_string(), e)),
    };
    let bad = |reason: String| CliError::Cache { path: path.display().to_string(), reason };
    let header = Header::decode(&bytes).map_err(bad)?;
    if (header.kind, header.r, header.modulus, header.group) != (expect.kind, expect.r, expect.modulus, expect.group) {
        return Err(bad(format!("header {header:?} does not match the requested data")));
    }
    let payload = &bytes[HEADER_LEN..];
    if payload.len() as u64 != header.count * record as u64 {
        return Err(bad(format!("{} payload bytes for {} records", payload.len(), header.count)));
    }
    Ok(Some(payload.to_vec()))
}

pub fn write_kloosterman(path: &Path, ctx: &FieldCtx, table: &KloostermanTable) -> CliResult<()> {
    let header = Header {
        kind: PayloadKind::Kloosterman,
        r: ctx.r(),
        modulus: ctx.modulus(),
        group: 0,
        count: table.values().len() as u64,
    };
    let payload: Vec<u8> = table.values().iter().flat_map(|&v| (v as i32).to_le_bytes()).collect();
    write_atomic(path, &header, &payload)
}

pub fn read_kloosterman(path: &Path, ctx: &FieldCtx) -> CliResult<Option<KloostermanTable>> {
    let expect = Header { kind: PayloadKind::Kloosterman, r: ctx.r(), modulus: ctx.modulus(), group: 0, count: 0 };
    let Some(payload) = read_checked(path, &expect, 4)? else {
        return Ok(None);
    };
    let values: Vec<i64> =
        payload.chunks_exact(4).map(|c| i32::from_le_bytes(c.try_into().unwrap()) as i64).collect();
    if values.len() != ctx.q() as usize {
        return Err(CliError::Cache { path: path.display().to_string(), reason: "wrong record count".into() });
    }
    Ok(Some(KloostermanTable::from_values(ctx.q(), values)?))
}

pub fn write_census(path: &Path, ctx: &FieldCtx, census: &GroupCensus) -> CliResult<()> {
    let elements = census
        .packed()
        .ok_or_else(|| CliError::Usage("census was built without stored elements".into()))?;
    let header = Header {
        kind: PayloadKind::Census,
        r: ctx.r(),
        modulus: ctx.modulus(),
        group: group_code(census.kind()),
        count: elements.len() as u64,
    };
    let payload: Vec<u8> = elements.iter().flat_map(|v| v.to_le_bytes()).collect();
    write_atomic(path, &header, &payload)
}

/// Loads a census; the element list must be strictly ascending.
pub fn read_census(path: &Path, ctx: &FieldCtx, kind: GroupKind) -> CliResult<Option<GroupCensus>> {
    let expect =
        Header { kind: PayloadKind::Census, r: ctx.r(), modulus: ctx.modulus(), group: group_code(kind), count: 0 };
    let Some(payload) = read_checked(path, &expect, 8)? else {
        return Ok(None);
    };
    let elements: Vec<u64> = payload.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
    if elements.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Cache { path: path.display().to_string(), reason: "elements not sorted".into() });
    }
    Ok(Some(GroupCensus::from_packed(ctx, kind, elements, true)?))
}
