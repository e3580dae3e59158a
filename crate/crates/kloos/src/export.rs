//! Plain-text census export: one ascending packed element per line, as
//! lowercase hex zero-padded to `d²·w/4` digits (`d` = matrix size, `w` =
//! bits per entry). The first matrix entry is the most significant digit
//! group, rows in order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use kloos_core::ogroup::GroupCensus;

use crate::error::{CliError, CliResult};

pub fn hex_digits(census: &GroupCensus) -> usize {
    let d = 2 * census.kind().n();
    d * d * census.width() as usize / 4
}

pub fn write_hex<W: Write>(census: &GroupCensus, mut out: W) -> std::io::Result<u64> {
    let digits = hex_digits(census);
    let mut n = 0;
    for &p in census.packed().unwrap_or_default() {
        writeln!(out, "{p:0digits$x}")?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}

pub fn export_census(census: &GroupCensus, path: &Path) -> CliResult<u64> {
    if census.packed().is_none() {
        return Err(CliError::Usage("census was built without stored elements".into()));
    }
    let io = |e| CliError::io(path.display().to_string(), e);
    let file = File::create(path).map_err(io)?;
    write_hex(census, BufWriter::new(file)).map_err(io)
}
