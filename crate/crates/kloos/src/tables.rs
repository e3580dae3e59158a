//! Weight-distribution tables for C(SO⁺(2,16)) and C(SO⁺(2,32)), and
//! the Kloosterman moment tables over F_16 and F_32, checked against the
//! golden copies under `fixtures/`.

use std::str::FromStr;

use kloos_core::codes::{build_code_spec, weight_distribution_dp};
use kloos_core::moments::{mk_recursive, MomentVariant, DEFAULT_H_MAX};
use kloos_core::FieldCtx;
use num_bigint::BigInt;

use crate::error::{CliError, CliResult};
use crate::render::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableId {
    I,
    II,
    III,
    IV,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::I, TableId::II, TableId::III, TableId::IV];

    pub fn name(self) -> &'static str {
        match self {
            TableId::I => "I",
            TableId::II => "II",
            TableId::III => "III",
            TableId::IV => "IV",
        }
    }

    pub fn r(self) -> u32 {
        match self {
            TableId::I | TableId::II => 4,
            TableId::III | TableId::IV => 5,
        }
    }

    fn is_weights(self) -> bool {
        matches!(self, TableId::I | TableId::III)
    }

    pub fn caption(self) -> String {
        let q = 1u32 << self.r();
        if self.is_weights() {
            format!("Weight distribution of C(SO+(2,{q}))")
        } else {
            format!("Kloosterman moments MK^i over GF({q}), i = 0..{DEFAULT_H_MAX}")
        }
    }

    pub fn columns(self) -> [&'static str; 2] {
        if self.is_weights() {
            ["w", "frequency"]
        } else {
            ["i", "MK^i"]
        }
    }

    fn md_pairs(self) -> usize {
        if self.is_weights() {
            4
        } else {
            3
        }
    }

    pub fn fixture(self) -> &'static str {
        match self {
            TableId::I => include_str!("../fixtures/table_i.tsv"),
            TableId::II => include_str!("../fixtures/table_ii.tsv"),
            TableId::III => include_str!("../fixtures/table_iii.tsv"),
            TableId::IV => include_str!("../fixtures/table_iv.tsv"),
        }
    }
}

impl FromStr for TableId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CliError::Usage(format!("unknown table {s:?}; expected I, II, III, IV or all")))
    }
}

/// `(index, value)` pairs in table order.
pub fn compute(id: TableId) -> CliResult<Vec<(u64, BigInt)>> {
    let ctx = FieldCtx::new(id.r())?;
    let spec = build_code_spec(&ctx, 1)?;
    if id.is_weights() {
        let dist = weight_distribution_dp(&spec, None)?;
        Ok(dist.freqs().iter().enumerate().map(|(w, f)| (w as u64, BigInt::from(f.clone()))).collect())
    } else {
        let dist = weight_distribution_dp(&spec, Some(DEFAULT_H_MAX as u64))?;
        let series = mk_recursive(&ctx, MomentVariant::A, DEFAULT_H_MAX, &dist)?;
        Ok(series.values.into_iter().enumerate().map(|(i, v)| (i as u64, v)).collect())
    }
}

pub fn parse_fixture(id: TableId) -> CliResult<Vec<(u64, BigInt)>> {
    let mut lines = id.fixture().lines();
    let header = lines.next().unwrap_or_default();
    if header.split('\t').collect::<Vec<_>>() != id.columns() {
        return Err(CliError::Fixture(format!("table {}: bad header {header:?}", id.name())));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let bad = || CliError::Fixture(format!("table {}: bad row {l:?}", id.name()));
            let (k, v) = l.split_once('\t').ok_or_else(bad)?;
            Ok((k.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?))
        })
        .collect()
}

/// Line-per-difference report; empty when the rows agree.
pub fn diff(id: TableId, computed: &[(u64, BigInt)], expected: &[(u64, BigInt)]) -> String {
    let mut out = String::new();
    if computed.len() != expected.len() {
        out.push_str(&format!(
            "table {}: {} computed rows, {} fixture rows\n",
            id.name(),
            computed.len(),
            expected.len()
        ));
    }
    for (c, e) in computed.iter().zip(expected) {
        if c != e {
            out.push_str(&format!("table {} row {}: computed {}, fixture {} ({})\n", id.name(), e.0, c.1, e.1, c.0));
        }
    }
    out
}

/// Computes the table, compares it with the fixture, and renders it.
pub fn table_report(id: TableId) -> CliResult<Report> {
    let computed = compute(id)?;
    let expected = parse_fixture(id)?;
    let d = diff(id, &computed, &expected);
    if !d.is_empty() {
        return Err(CliError::Fixture(d));
    }
    let ctx = FieldCtx::new(id.r())?;
    let mut rep = Report::new(id.caption())
        .field(&ctx)
        .param("table", id.name())
        .method("route", if id.is_weights() { "dp" } else { "mk_recursive(a) over dp truncated at 29" })
        .method("fixture", "match")
        .columns(&id.columns());
    rep.md_pairs = Some(id.md_pairs());
    for (k, v) in computed {
        rep.row(vec![Cell::from(k), Cell::from(v)]);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(parse_fixture(TableId::I).unwrap().len(), 16);
        assert_eq!(parse_fixture(TableId::III).unwrap().len(), 32);
        assert_eq!(parse_fixture(TableId::II).unwrap().len(), 30);
        assert_eq!(parse_fixture(TableId::IV).unwrap()[9].1, BigInt::from(613044481u64));
    }

    #[test]
    fn diff_reports_mismatch() {
        let a = vec![(0, BigInt::from(1)), (1, BigInt::from(2))];
        let b = vec![(0, BigInt::from(1)), (1, BigInt::from(3))];
        assert!(diff(TableId::I, &a, &a).is_empty());
        assert!(diff(TableId::I, &a, &b).contains("row 1"));
    }
}
