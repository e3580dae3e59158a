//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::time::{Duration, Instant};

use kloos::tables::{parse_fixture, TableId};
use kloos::verify::{run_suite, Outcome};
use kloos_core::codes::{
    build_code_spec, weight_distribution_bruteforce, weight_distribution_dp, weight_distribution_macwilliams,
    WeightDistribution,
};
use kloos_core::expsum::{kloosterman, kloosterman_m_table, kloosterman_table, predicted_value_set, value_set_report};
use kloos_core::moments::{mk_recursive, moments_bruteforce, MomentVariant, DEFAULT_H_MAX};
use kloos_core::ogroup::{
    enumerate_o_plus_4, enumerate_so_plus_4, gauss_sum_enumerated, gauss_sum_formula, o_plus_2_elements,
    so_plus_2_elements, trace_histogram, trace_histogram_formula, GroupCensus, GroupKind, Variant,
};
use kloos_core::{FieldCtx, FieldElement};
use num_bigint::BigInt;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn field(r: u32) -> FieldCtx {
    FieldCtx::new(r).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let el = t.elapsed();
    ensure(el < limit, || format!("{what} took {el:.1?}, limit {limit:?}"))?;
    Ok(el)
}

fn fixture_weights(id: TableId) -> Vec<BigInt> {
    parse_fixture(id).unwrap().into_iter().map(|(_, v)| v).collect()
}

fn as_ints(d: &WeightDistribution) -> Vec<BigInt> {
    d.freqs().iter().cloned().map(BigInt::from).collect()
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn table_i() -> Check {
    let t = Instant::now();
    let spec = build_code_spec(&field(4), 1).map_err(e)?;
    let want = fixture_weights(TableId::I);
    let dp = weight_distribution_dp(&spec, None).map_err(e)?;
    let mw = weight_distribution_macwilliams(&field(4), &spec, None).map_err(e)?;
    let brute = weight_distribution_bruteforce(&spec).map_err(e)?;
    for (name, d) in [("dp", &dp), ("macwilliams", &mw), ("brute", &brute)] {
        ensure(as_ints(d) == want, || format!("{name} differs from the 16 reference values"))?;
    }
    ensure(want[7] == BigInt::from(403), || "C_7 != 403".into())?;
    let el = within(t, Duration::from_secs(5), "table I")?;
    Ok(format!("16 values by dp, MacWilliams and brute force in {el:.2?}"))
}

fn table_iii() -> Check {
    let t = Instant::now();
    let ctx = field(5);
    let spec = build_code_spec(&ctx, 1).map_err(e)?;
    let want = fixture_weights(TableId::III);
    let dp = weight_distribution_dp(&spec, None).map_err(e)?;
    let mw = weight_distribution_macwilliams(&ctx, &spec, None).map_err(e)?;
    ensure(as_ints(&dp) == want, || "dp differs".into())?;
    ensure(as_ints(&mw) == want, || "macwilliams differs".into())?;
    ensure(want[15] == BigInt::from(9_392_163) && want[16] == want[15], || "C_15/C_16".into())?;
    let brute = weight_distribution_bruteforce(&spec).map_err(e)?;
    ensure(as_ints(&brute) == want, || "brute force differs".into())?;
    let el = within(t, Duration::from_secs(30), "table III")?;
    Ok(format!("32 values by dp, MacWilliams and brute force in {el:.2?}"))
}

fn moment_tables() -> Check {
    let t = Instant::now();
    for (id, r) in [(TableId::II, 4), (TableId::IV, 5)] {
        let ctx = field(r);
        let want: Vec<BigInt> = parse_fixture(id).unwrap().into_iter().map(|(_, v)| v).collect();
        ensure(want.len() == DEFAULT_H_MAX as usize + 1, || "fixture length".into())?;
        let spec = build_code_spec(&ctx, 1).map_err(e)?;
        let dist = weight_distribution_dp(&spec, Some(DEFAULT_H_MAX as u64)).map_err(e)?;
        let rec = mk_recursive(&ctx, MomentVariant::A, DEFAULT_H_MAX, &dist).map_err(e)?;
        let brute = moments_bruteforce(&ctx, 1, DEFAULT_H_MAX).map_err(e)?;
        ensure(rec.values == want, || format!("recursion differs from table {}", id.name()))?;
        ensure(brute.values == want, || format!("direct sums differ from table {}", id.name()))?;
    }
    let iv = fixture_weights(TableId::IV);
    ensure(iv[3] == BigInt::from(-959) && iv[5] == BigInt::from(-63359), || "MK^3/MK^5 over F_32".into())?;
    let el = within(t, Duration::from_secs(5), "tables II/IV")?;
    Ok(format!("h = 0..29 over F_16 and F_32, recursion and direct, in {el:.2?}"))
}

fn histogram_matches(ctx: &FieldCtx, census: &GroupCensus) -> Result<(), String> {
    let formula = trace_histogram_formula(ctx, census.kind()).map_err(e)?;
    ensure(census.histogram() == formula.as_slice(), || {
        format!("{} over GF({}): histogram differs from the closed form", census.kind().name(), ctx.q())
    })?;
    ensure(trace_histogram(census) == census.histogram(), || "recount differs".into())
}

fn census_certificates() -> Check {
    let t = Instant::now();
    for r in 1..=3 {
        let ctx = field(r);
        let q = ctx.q() as u64;
        let census = enumerate_so_plus_4(&ctx, true).map_err(e)?;
        ensure(census.order() == q * q * (q * q - 1) * (q * q - 1), || format!("|SO+(4,{q})| = {}", census.order()))?;
        census.verify(&ctx, 1).map_err(e)?;
        histogram_matches(&ctx, &census)?;
    }
    for r in 1..=5 {
        let ctx = field(r);
        histogram_matches(&ctx, &so_plus_2_elements(&ctx))?;
        histogram_matches(&ctx, &o_plus_2_elements(&ctx))?;
    }
    let small = within(t, Duration::from_secs(10), "q <= 8 censuses")?;
    let t = Instant::now();
    let ctx = field(4);
    let census = enumerate_so_plus_4(&ctx, false).map_err(e)?;
    ensure(census.order() == 16_646_400, || format!("|SO+(4,16)| = {}", census.order()))?;
    histogram_matches(&ctx, &census)?;
    let big = within(t, Duration::from_secs(300), "q = 16 census")?;
    let peak = peak_rss_kb();
    if let Some(kb) = peak {
        ensure(kb < 1 << 20, || format!("peak resident memory {kb} kB"))?;
    }
    let peak = peak.map_or("unknown".to_string(), |kb| format!("{} MB", kb / 1024));
    Ok(format!("q = 2,4,8 in {small:.2?}; q = 16 (16646400 elements) in {big:.1?}, peak RSS {peak}"))
}

fn gauss_sums() -> Check {
    for r in 2..=4 {
        let ctx = field(r);
        let q = BigInt::from(ctx.q());
        let q2 = &q * &q;
        let k2 = kloosterman_m_table(&ctx, 2).map_err(e)?;
        let so2 = so_plus_2_elements(&ctx);
        let o2 = o_plus_2_elements(&ctx);
        let so4 = enumerate_so_plus_4(&ctx, r <= 3).map_err(e)?;
        let o4 = if r <= 3 { Some(enumerate_o_plus_4(&ctx, true).map_err(e)?) } else { None };
        for a in ctx.nonzero() {
            let k = BigInt::from(kloosterman(&ctx, a, FieldElement::ONE).map_err(e)?);
            let g1 = gauss_sum_enumerated(&ctx, &so2, a).map_err(e)?;
            let g2 = gauss_sum_enumerated(&ctx, &o2, a).map_err(e)?;
            let g4 = gauss_sum_enumerated(&ctx, &so4, a).map_err(e)?;
            let fail = |what: &str| format!("{what} at q = {q}, a = {a:?}");
            ensure(g1 == k, || fail("SO+(2) vs K"))?;
            ensure(g2 == &k + &q - 1, || fail("O+(2) vs K + q - 1"))?;
            ensure(g4 == &q2 * (&k * &k + &q2 * &q - &q), || fail("SO+(4) vs q^2(K^2 + q^3 - q)"))?;
            ensure(g4 == &q2 * (BigInt::from(k2[a.index()]) + &q2 * &q), || fail("SO+(4) vs q^2(K_2 + q^3)"))?;
            ensure(g1 == gauss_sum_formula(&ctx, 1, Variant::SO, a).map_err(e)?, || fail("SO+(2) formula"))?;
            ensure(g2 == gauss_sum_formula(&ctx, 1, Variant::O, a).map_err(e)?, || fail("O+(2) formula"))?;
            if let Some(o4) = &o4 {
                ensure(g4 == gauss_sum_formula(&ctx, 2, Variant::SO, a).map_err(e)?, || fail("SO+(4) formula"))?;
                let g = gauss_sum_enumerated(&ctx, o4, a).map_err(e)?;
                ensure(g == gauss_sum_formula(&ctx, 2, Variant::O, a).map_err(e)?, || fail("O+(4) formula"))?;
            }
        }
    }
    Ok("closed forms at q = 4,8,16; general formula n = 1 at q = 4,8,16 and n = 2 at q = 4,8".into())
}

fn c_recursions_at_q4() -> Check {
    let t = Instant::now();
    let ctx = field(2);
    let spec = build_code_spec(&ctx, 3).map_err(e)?;
    ensure(spec.length() == 3600, || format!("N = {}", spec.length()))?;
    let dist = weight_distribution_dp(&spec, None).map_err(e)?;
    ensure(dist.is_complete(), || "distribution is truncated".into())?;
    let mw = weight_distribution_macwilliams(&ctx, &spec, None).map_err(e)?;
    ensure(mw == dist, || "dp and MacWilliams differ on N = 3600".into())?;
    let h = 8;
    let c2 = mk_recursive(&ctx, MomentVariant::C2, h, &dist).map_err(e)?;
    let ck = mk_recursive(&ctx, MomentVariant::CK, h, &dist).map_err(e)?;
    let brute2 = moments_bruteforce(&ctx, 2, h).map_err(e)?;
    let brute1 = moments_bruteforce(&ctx, 1, 2 * h).map_err(e)?.even_orders();
    ensure(c2.values == brute2.values, || "MK_2^h differs".into())?;
    ensure(ck.values == brute1.values, || "MK^{2h} differs".into())?;
    let el = within(t, Duration::from_secs(600), "c2/cK recursions")?;
    Ok(format!("c2 and cK for h = 1..{h} from the complete N = 3600 distribution in {el:.2?}"))
}

const REQUIRED_IDENTITIES: &[&str] = &[
    "Carlitz K_2 = K^2 - q",
    "Frobenius invariance",
    "twisted sum m=1",
    "twisted sum m=2",
    "twisted sum m=3",
    "Artin-Schreier sum",
    "irreducible quadratic sum",
    "Weil bound",
    "Salie identity",
    "Pless code 1",
    "Pless code 2",
    "Pless code 3",
    "symmetry code 1",
    "symmetry code 2",
    "Delsarte code 1",
    "Delsarte code 2",
    "K_GL recursive = explicit",
];

fn identity_suite() -> Check {
    let mut counted = 0;
    for r in 2..=5 {
        let results = run_suite(&field(r));
        for c in &results {
            if let Outcome::Fail(d) = &c.outcome {
                return Err(format!("q = {}: {} failed: {d}", 1 << r, c.name));
            }
        }
        for name in REQUIRED_IDENTITIES {
            let c = results.iter().find(|c| c.name == *name).ok_or_else(|| format!("missing check {name}"))?;
            ensure(matches!(c.outcome, Outcome::Pass(_)), || {
                format!("q = {}: {name} did not run: {}", 1 << r, c.outcome.detail())
            })?;
            counted += 1;
        }
    }
    Ok(format!("{counted} required identities pass over q = 4,8,16,32, no failures elsewhere"))
}

fn value_sets() -> Check {
    let mut notes = Vec::new();
    for r in 2..=5 {
        let ctx = field(r);
        let rows = value_set_report(&kloosterman_table(&ctx));
        let attained: Vec<i64> = rows.iter().filter(|r| r.multiplicity > 0).map(|r| r.t).collect();
        ensure(attained == predicted_value_set(ctx.q()), || format!("q = {}: attained {attained:?}", ctx.q()))?;
        for row in &rows {
            ensure(row.multiplicity == row.class_number_4q, || {
                format!("q = {}, t = {}: {} vs H(t^2-4q) = {}", ctx.q(), row.t, row.multiplicity, row.class_number_4q)
            })?;
        }
        if r == 4 {
            let m: Vec<u64> = rows.iter().map(|r| r.multiplicity).collect();
            ensure(m == [4, 5, 4, 2], || format!("q = 16 multiplicities {m:?}"))?;
        }
        let differ = rows.iter().filter(|r| r.class_number_q != Some(r.multiplicity)).count();
        notes.push(format!("q={}: H(t^2-q) differs at {differ}/{}", ctx.q(), rows.len()));
    }
    Ok(format!("multiplicities = H(t^2-4q); {}", notes.join(", ")))
}

fn fingerprint(ctx: &FieldCtx) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut k: Vec<i64> = kloosterman_table(ctx).values()[1..].to_vec();
    k.sort_unstable();
    out.push(format!("{k:?}"));
    for which in 1..=3u8 {
        let spec = build_code_spec(ctx, which).map_err(e)?;
        let cap = if which == 3 { Some(8) } else { None };
        out.push(format!("{:?}", weight_distribution_dp(&spec, cap).map_err(e)?.freqs()));
        let mut hist = spec.histogram()[1..].to_vec();
        hist.sort_unstable();
        out.push(format!("{} {hist:?}", spec.histogram()[0]));
    }
    for kind in [GroupKind::So2, GroupKind::O2] {
        let census = if kind == GroupKind::So2 { so_plus_2_elements(ctx) } else { o_plus_2_elements(ctx) };
        let mut h = census.histogram()[1..].to_vec();
        h.sort_unstable();
        out.push(format!("{h:?}"));
    }
    let spec1 = build_code_spec(ctx, 1).map_err(e)?;
    let d1 = weight_distribution_dp(&spec1, Some(DEFAULT_H_MAX as u64)).map_err(e)?;
    out.push(format!("{:?}", mk_recursive(ctx, MomentVariant::A, DEFAULT_H_MAX, &d1).map_err(e)?.values));
    out.push(format!("{:?}", moments_bruteforce(ctx, 1, DEFAULT_H_MAX).map_err(e)?.values));
    out.push(format!("{:?}", moments_bruteforce(ctx, 2, 10).map_err(e)?.values));
    let spec3 = build_code_spec(ctx, 3).map_err(e)?;
    let d3 = weight_distribution_dp(&spec3, Some(8)).map_err(e)?;
    out.push(format!("{:?}", mk_recursive(ctx, MomentVariant::C2, 8, &d3).map_err(e)?.values));
    Ok(out)
}

fn modulus_independence() -> Check {
    let moduli = [0x13, 0x19, 0x1f];
    let base = fingerprint(&FieldCtx::with_modulus(4, moduli[0]).map_err(e)?)?;
    for &m in &moduli[1..] {
        let other = fingerprint(&FieldCtx::with_modulus(4, m).map_err(e)?)?;
        if let Some(i) = base.iter().zip(&other).position(|(a, b)| a != b) {
            return Err(format!("output {i} differs between 0x13 and {m:#x}"));
        }
    }
    Ok(format!("{} multiset outputs agree under 0x13, 0x19, 0x1f", base.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("weight distribution of C(SO+(2,16))", table_i),
        ("weight distribution of C(SO+(2,32))", table_iii),
        ("moment tables over F_16 and F_32", moment_tables),
        ("SO+(4,q) census certificates", census_certificates),
        ("Gauss-sum equivalence", gauss_sums),
        ("SO+(4,4) recursions c2/cK", c_recursions_at_q4),
        ("identity suite", identity_suite),
        ("Kloosterman value sets", value_sets),
        ("modulus independence", modulus_independence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = f();
        let el = t.elapsed();
        match result {
            Ok(msg) => println!("PASS [{}] {name}: {msg} ({el:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg} ({el:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
