//! Argument parsing and subcommand dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kloos_core::codes::{
    build_code_spec_with_table, code_spec_from_census, dual_kernel_check, weight_distribution_bruteforce,
    weight_distribution_dp, weight_distribution_macwilliams, CodeSpec, WeightDistribution,
};
use kloos_core::expsum::{kloosterman_gl, kloosterman_m, value_set_report, GlMethod, KloostermanTable};
use kloos_core::moments::{mk_recursive, moments_bruteforce, MomentVariant, DEFAULT_H_MAX};
use kloos_core::ogroup::{
    enumerate_closure, gauss_sum_enumerated, gauss_sum_formula, group_order_formula, o_plus_2_elements,
    so_plus_2_elements, trace_histogram_formula_with, GroupCensus, GroupKind, Traversal,
};
use kloos_core::{FieldCtx, FieldElement};
use serde_json::{Map, Value};

use crate::cache;
use crate::error::{CliError, CliResult};
use crate::export::export_census;
use crate::par::{kloosterman_table_par, thread_pool};
use crate::render::{Cell, Format, Report};
use crate::tables::{table_report, TableId};
use crate::verify::{run_suite, suite_report, DEFAULT_MAX_R};

#[derive(Debug, Parser)]
#[command(name = "kloos", version, about = "Kloosterman sums, orthogonal-group codes and power moments over GF(2^r)")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct FieldArgs {
    /// Extension degree, 1..=16.
    #[arg(long)]
    pub r: u32,
    /// Irreducible modulus in hex, e.g. 0x13.
    #[arg(long, value_parser = parse_hex)]
    pub modulus: Option<u32>,
}

impl FieldArgs {
    pub fn ctx(&self) -> CliResult<FieldCtx> {
        Ok(match self.modulus {
            Some(m) => FieldCtx::with_modulus(self.r, m)?,
            None => FieldCtx::new(self.r)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeMethod {
    Dp,
    Macwilliams,
    Brute,
}

impl CodeMethod {
    fn name(self) -> &'static str {
        match self {
            CodeMethod::Dp => "dp",
            CodeMethod::Macwilliams => "macwilliams",
            CodeMethod::Brute => "brute",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field parameters.
    Field(FieldArgs),
    /// Kloosterman sums K_m(a), their table, value set, or GL(t) sums.
    Ksum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_hex)]
        a: Option<u32>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Emit every a with its value.
        #[arg(long)]
        table: bool,
        /// Attained values against class numbers.
        #[arg(long)]
        value_set: bool,
        /// K_GL(t,q)(λ; a) instead of K_m.
        #[arg(long)]
        gl: Option<u32>,
    },
    /// Enumerate an orthogonal group.
    Group {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_group)]
        which: GroupKind,
        #[arg(long)]
        histogram: bool,
        /// Gauss sum Σ λ(a·Tr w) for this a (hex).
        #[arg(long, value_parser = parse_hex)]
        gauss: Option<u32>,
        /// Write the sorted packed elements as hex, one per line.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Weight distribution of code 1, 2 or 3.
    Code {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[arg(long, value_enum, default_value_t = CodeMethod::Dp)]
        method: CodeMethod,
        #[arg(long)]
        max_weight: Option<u64>,
    },
    /// Power moments by one of the recursions or by direct summation.
    Moments {
        #[command(flatten)]
        field: FieldArgs,
        /// a, b, c2, cK or brute.
        #[arg(long)]
        variant: String,
        /// K_m for the brute variant.
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_H_MAX)]
        hmax: u32,
    },
    /// Reproduce the reference tables and compare with the bundled copies.
    Tables {
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Run the identity suite; nonzero exit if any check fails.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Permit r above the default limit.
        #[arg(long)]
        allow_large: bool,
    },
}

fn parse_hex(s: &str) -> Result<u32, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| format!("{s:?} is not hex: {e}"))
}

fn parse_group(s: &str) -> Result<GroupKind, String> {
    GroupKind::from_slug(s).ok_or_else(|| format!("unknown group {s:?}; expected so2, o2, so4 or o4"))
}

/// Rendered output plus the error (if any) that decides the exit status.
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let pool = thread_pool(cli.threads)?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let f = cli.format;
    match &cli.command {
        Command::Field(field) => Ok(cmd_field(&field.ctx()?).render(f).into()),
        Command::Ksum { field, a, m, table, value_set, gl } => {
            Ok(cmd_ksum(&field.ctx()?, *a, *m, *table, *value_set, *gl)?.render(f).into())
        }
        Command::Group { field, which, histogram, gauss, export } => {
            Ok(cmd_group(&field.ctx()?, *which, *histogram, *gauss, export.as_ref())?.render(f).into())
        }
        Command::Code { field, which, method, max_weight } => {
            Ok(cmd_code(&field.ctx()?, *which, *method, *max_weight)?.render(f).into())
        }
        Command::Moments { field, variant, m, hmax } => Ok(cmd_moments(&field.ctx()?, variant, *m, *hmax)?.render(f).into()),
        Command::Tables { which } => cmd_tables(which, f).map(Outcome::from),
        Command::Verify { field, allow_large } => {
            if field.r > DEFAULT_MAX_R && !allow_large {
                return Err(CliError::Usage(format!(
                    "verify runs r <= {DEFAULT_MAX_R} by default; pass --allow-large for r = {}",
                    field.r
                )));
            }
            let ctx = field.ctx()?;
            let results = run_suite(&ctx);
            let failed = results.iter().filter(|c| c.outcome.label() == "FAIL").count();
            let text = suite_report(&ctx, &results).render(f);
            Ok(Outcome { text, failure: (failed > 0).then_some(CliError::Verification { failed }) })
        }
    }
}

fn hex(e: FieldElement) -> String {
    format!("{:#x}", e.bits())
}

pub fn cmd_field(ctx: &FieldCtx) -> Report {
    let mut rep = Report::new(format!("GF({})", ctx.q())).field(ctx).param("r", ctx.r()).method("tables", "log/antilog");
    rep.scalar("q", ctx.q());
    rep.scalar("modulus", format!("{:#x}", ctx.modulus()));
    rep.scalar("generator", hex(ctx.generator()));
    rep.scalar("trace_zero_count", ctx.trace_zero_count());
    rep
}

/// The Kloosterman table, through the cache directory when one is set.
pub fn cached_kloosterman_table(ctx: &FieldCtx) -> CliResult<KloostermanTable> {
    let Some(dir) = cache::cache_dir() else {
        return Ok(kloosterman_table_par(ctx));
    };
    let path = cache::kloosterman_path(&dir, ctx);
    if let Some(t) = cache::read_kloosterman(&path, ctx)? {
        return Ok(t);
    }
    let t = kloosterman_table_par(ctx);
    cache::write_kloosterman(&path, ctx, &t)?;
    Ok(t)
}

fn element(ctx: &FieldCtx, bits: u32) -> CliResult<FieldElement> {
    Ok(ctx.element(bits)?)
}

pub fn cmd_ksum(
    ctx: &FieldCtx,
    a: Option<u32>,
    m: u32,
    table: bool,
    value_set: bool,
    gl: Option<u32>,
) -> CliResult<Report> {
    let base = |title: String| Report::new(title).field(ctx).param("m", m);
    if let Some(bits) = a {
        let a = element(ctx, bits)?;
        let mut rep = base(format!("Kloosterman sum at a = {}", hex(a))).param("a", hex(a));
        match gl {
            Some(t) => {
                rep = rep.param("gl", t).method("route", "three-term recursion");
                rep.scalar("a", hex(a));
                rep.scalar("value", kloosterman_gl(ctx, t, a, GlMethod::Recursive)?);
            }
            None => {
                rep = rep.method("route", if m <= 1 { "direct sum" } else { "peeled recursion" });
                rep.scalar("a", hex(a));
                rep.scalar("value", kloosterman_m(ctx, m, a)?);
            }
        }
        return Ok(rep);
    }
    if gl.is_some() || m != 1 {
        return Err(CliError::Usage("--gl and --m > 1 need --a".into()));
    }
    let t = cached_kloosterman_table(ctx)?;
    if value_set {
        let mut rep = base(format!("Kloosterman value set over GF({})", ctx.q()))
            .method("class_numbers", "reduced forms")
            .columns(&["t", "multiplicity", "H(t^2-4q)", "H(t^2-q)"]);
        for row in value_set_report(&t) {
            let hq = row.class_number_q.map_or(Cell::from("-"), Cell::from);
            rep.row(vec![row.t.into(), row.multiplicity.into(), row.class_number_4q.into(), hq]);
        }
        return Ok(rep);
    }
    let mut rep = base(format!("Kloosterman sums over GF({})", ctx.q())).method("route", "direct sum");
    rep.scalar("sum", t.values()[1..].iter().sum::<i64>());
    rep.scalar("distinct_values", t.summary().len());
    rep.scalar("weil_bound", if t.within_weil_bound() { "holds" } else { "violated" });
    if table {
        rep = rep.param("table", true).columns(&["a", "K(a)"]);
        for a in ctx.nonzero() {
            rep.row(vec![hex(a).into(), t.value(a).into()]);
        }
    } else {
        rep = rep.columns(&["value", "multiplicity"]);
        for &(v, n) in t.summary() {
            rep.row(vec![v.into(), n.into()]);
        }
    }
    Ok(rep)
}

fn build_census(ctx: &FieldCtx, kind: GroupKind, store: bool) -> CliResult<GroupCensus> {
    match kind {
        GroupKind::So2 => return Ok(so_plus_2_elements(ctx)),
        GroupKind::O2 => return Ok(o_plus_2_elements(ctx)),
        _ => {}
    }
    let dir = cache::cache_dir().filter(|_| store);
    if let Some(dir) = &dir {
        if let Some(c) = cache::read_census(&cache::census_path(dir, ctx, kind), ctx, kind)? {
            return Ok(c);
        }
    }
    let census = enumerate_closure(ctx, kind, store, Traversal::BreadthFirst)?;
    if let Some(dir) = &dir {
        cache::write_census(&cache::census_path(dir, ctx, kind), ctx, &census)?;
    }
    Ok(census)
}

pub fn cmd_group(
    ctx: &FieldCtx,
    kind: GroupKind,
    histogram: bool,
    gauss: Option<u32>,
    export: Option<&PathBuf>,
) -> CliResult<Report> {
    let store = export.is_some() || cache::cache_dir().is_some();
    let census = build_census(ctx, kind, store)?;
    census.verify(ctx, (census.order() / 100_000).max(1) as usize)?;
    let mut rep = Report::new(format!("{} over GF({})", kind.name(), ctx.q()))
        .field(ctx)
        .param("which", kind.slug())
        .method("enumeration", if kind.n() == 1 { "explicit" } else { "closure from the parabolic subgroup" });
    rep.scalar("order", census.order());
    rep.scalar("order_formula", group_order_formula(ctx.q() as u64, kind.n() as u32, kind.variant()));
    if let Some(path) = export {
        let n = export_census(&census, path)?;
        rep = rep.param("export", path.display().to_string());
        rep.scalar("exported", n);
    }
    if let Some(bits) = gauss {
        let a = element(ctx, bits)?;
        rep = rep.param("gauss", hex(a));
        rep.scalar("gauss_enumerated", gauss_sum_enumerated(ctx, &census, a)?);
        rep.scalar("gauss_formula", gauss_sum_formula(ctx, kind.n() as u32, kind.variant(), a)?);
    }
    if histogram {
        let formula = match kind {
            GroupKind::O4 => None,
            _ => Some(trace_histogram_formula_with(ctx, kind, &cached_kloosterman_table(ctx)?)?),
        };
        rep = rep.param("histogram", true).columns(&["beta", "count", "formula"]);
        for (beta, &n) in ctx.elements().zip(census.histogram()) {
            let want = formula.as_ref().map_or(Cell::from("-"), |h| Cell::from(h[beta.index()]));
            rep.row(vec![hex(beta).into(), n.into(), want]);
        }
    }
    Ok(rep)
}

fn code_spec(ctx: &FieldCtx, which: u8) -> CliResult<CodeSpec> {
    let table = cached_kloosterman_table(ctx)?;
    match which {
        1 | 2 => Ok(build_code_spec_with_table(ctx, which, &table)?),
        _ if ctx.q() <= 16 && cache::cache_dir().is_some() => {
            Ok(code_spec_from_census(ctx, &build_census(ctx, GroupKind::So4, true)?)?)
        }
        _ => Ok(build_code_spec_with_table(ctx, which, &table)?),
    }
}

fn distribution(ctx: &FieldCtx, spec: &CodeSpec, method: CodeMethod, max: Option<u64>) -> CliResult<WeightDistribution> {
    Ok(match method {
        CodeMethod::Dp => weight_distribution_dp(spec, max)?,
        CodeMethod::Macwilliams => weight_distribution_macwilliams(ctx, spec, max)?,
        CodeMethod::Brute => {
            let full = weight_distribution_bruteforce(spec)?;
            match max {
                Some(h) => full.truncated(h),
                None => full,
            }
        }
    })
}

pub fn cmd_code(ctx: &FieldCtx, which: u8, method: CodeMethod, max_weight: Option<u64>) -> CliResult<Report> {
    let spec = code_spec(ctx, which)?;
    let dist = distribution(ctx, &spec, method, max_weight)?;
    let kernel = dual_kernel_check(ctx, &spec);
    let mut rep = Report::new(format!("Weight distribution of C({})", spec.kind().name()))
        .field(ctx)
        .param("which", which)
        .method("route", method.name())
        .columns(&["w", "frequency"]);
    if let Some(h) = max_weight {
        rep = rep.param("max_weight", h);
    }
    rep.scalar("length", spec.length());
    rep.scalar("dual_dimension", kernel.dual_dimension(ctx.r()));
    if dist.is_complete() {
        rep.scalar("codewords", dist.total());
    }
    for (w, c) in dist.freqs().iter().enumerate() {
        rep.row(vec![w.into(), c.into()]);
    }
    rep.md_pairs = Some(4);
    Ok(rep)
}

pub fn cmd_moments(ctx: &FieldCtx, variant: &str, m: u32, hmax: u32) -> CliResult<Report> {
    let base = Report::new(format!("Kloosterman power moments over GF({})", ctx.q())).field(ctx).param("hmax", hmax);
    let (series, rep) = if variant.eq_ignore_ascii_case("brute") {
        (moments_bruteforce(ctx, m, hmax)?, base.param("variant", "brute").param("m", m).method("route", "direct sum"))
    } else {
        let v = MomentVariant::from_slug(variant)
            .ok_or_else(|| CliError::Usage(format!("unknown variant {variant:?}; expected a, b, c2, cK or brute")))?;
        let code = code_spec(ctx, v.code_index())?;
        let dist = weight_distribution_dp(&code, Some(hmax as u64))?;
        let rep = base
            .param("variant", v.slug())
            .method("route", format!("recursion over the weights of code {}", v.code_index()));
        (mk_recursive(ctx, v, hmax, &dist)?, rep)
    };
    let label = match (series.m, series.stride) {
        (1, 1) => "MK^h",
        (2, _) => "MK_2^h",
        _ => "MK^(2h)",
    };
    let mut rep = rep.columns(&["h", label]);
    for (h, v) in series.values.iter().enumerate() {
        rep.row(vec![h.into(), v.into()]);
    }
    rep.md_pairs = Some(3);
    Ok(rep)
}

pub fn cmd_tables(which: &str, format: Format) -> CliResult<String> {
    let ids: Vec<TableId> = if which.eq_ignore_ascii_case("all") { TableId::ALL.to_vec() } else { vec![which.parse()?] };
    let reports = ids.into_iter().map(table_report).collect::<CliResult<Vec<_>>>()?;
    if reports.len() == 1 {
        return Ok(reports[0].render(format));
    }
    Ok(match format {
        Format::Json => {
            let mut results = Map::new();
            results.insert("tables".into(), reports.iter().map(Report::to_json).collect());
            let mut params = Map::new();
            params.insert("which".into(), "all".into());
            let mut prov = Map::new();
            prov.insert("fixture".into(), "match".into());
            let root = serde_json::json!({
                "field": Value::Null,
                "parameters": params,
                "results": results,
                "provenance": prov,
            });
            serde_json::to_string_pretty(&root).expect("json values serialize") + "\n"
        }
        _ => reports.iter().map(|r| r.render(format)).collect::<Vec<_>>().join("\n"),
    })
}
