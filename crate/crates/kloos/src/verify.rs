//! The identity suite behind `kloos verify`: every check runs against one
//! field and reports PASS, FAIL or SKIPPED.

use std::sync::OnceLock;

use kloos_core::codes::{
    build_code_spec_with_table, delsarte_check, dual_codeword, dual_kernel_check, dual_weight, dual_weight_from_histogram,
    dual_weights_with_table, weight_distribution_bruteforce, weight_distribution_dp, weight_distribution_macwilliams,
    CodeSpec, WeightDistribution,
};
use kloos_core::expsum::{
    artin_schreier_sum, gl_explicit, gl_recursive, irreducible_quadratic_sum, kloosterman_gl,
    kloosterman_m_table, predicted_value_set, twisted_sum, twisted_sum_closed_form,
    value_set_report, GlMethod, KloostermanTable,
};
use kloos_core::gf2r::{default_modulus, is_irreducible};
use kloos_core::moments::{
    carlitz_expand, low_order_check, mk_recursive, moments_bruteforce, pless_check, salie_identity_check, MomentSeries,
    MomentVariant, PlessInputs, DEFAULT_H_MAX,
};
use kloos_core::ogroup::{
    enumerate_o_plus_4, enumerate_so_plus_4, gauss_sum_enumerated, gauss_sum_formula, o_plus_2_elements,
    so_plus_2_elements, trace_histogram, trace_histogram_formula_with, GroupCensus, GroupKind,
};
use kloos_core::{Error as CoreError, FieldCtx, FieldElement};

use crate::error::{CliError, CliResult};
use crate::par::{kloosterman_table_par, run_ordered};
use crate::render::{Cell, Report};

/// Largest r the suite runs without `--allow-large`.
pub const DEFAULT_MAX_R: u32 = 5;
/// O⁺(4,q) is enumerated only up to this q.
pub const O4_MAX_Q: u32 = 8;
const PLESS_H: u32 = 10;
const SALIE_H: u32 = 5;
const GL_MAX_T: u32 = 5;
const C_VARIANT_H: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass(String),
    Fail(String),
    Skipped(String),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass(_) => "PASS",
            Outcome::Fail(_) => "FAIL",
            Outcome::Skipped(_) => "SKIPPED",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Outcome::Pass(s) | Outcome::Fail(s) | Outcome::Skipped(s) => s,
        }
    }
}

fn pass_if(ok: bool, pass: impl Into<String>, fail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Pass(pass.into())
    } else {
        Outcome::Fail(fail.into())
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Outcome,
}

/// Shared, lazily built inputs for one field.
pub struct Env {
    pub ctx: FieldCtx,
    table: KloostermanTable,
    specs: [OnceLock<Result<CodeSpec, String>>; 3],
    so4: OnceLock<Result<GroupCensus, CoreError>>,
    o4: OnceLock<Result<GroupCensus, CoreError>>,
}

impl Env {
    pub fn new(ctx: FieldCtx) -> Self {
        let table = kloosterman_table_par(&ctx);
        Env { ctx, table, specs: Default::default(), so4: OnceLock::new(), o4: OnceLock::new() }
    }

    fn q(&self) -> u32 {
        self.ctx.q()
    }

    fn k(&self, a: FieldElement) -> i64 {
        self.table.value(a)
    }

    fn spec(&self, which: u8) -> CliResult<&CodeSpec> {
        self.specs[which as usize - 1]
            .get_or_init(|| build_code_spec_with_table(&self.ctx, which, &self.table).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| CliError::Core(CoreError::Consistency(e.clone())))
    }

    fn census4(&self, kind: GroupKind) -> CliResult<&GroupCensus> {
        let cell = if kind == GroupKind::So4 { &self.so4 } else { &self.o4 };
        let store = self.q() <= 16;
        cell.get_or_init(|| {
            if kind == GroupKind::So4 {
                enumerate_so_plus_4(&self.ctx, store)
            } else {
                enumerate_o_plus_4(&self.ctx, store)
            }
        })
        .as_ref()
        .map_err(|e| CliError::Core(e.clone()))
    }
}

type CheckFn = fn(&Env) -> CliResult<Outcome>;

fn checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("field laws", check_field_laws),
        ("Artin-Schreier image", check_hilbert90),
        ("Weil bound", check_weil),
        ("Frobenius invariance", check_frobenius),
        ("value set", check_value_set),
        ("Carlitz K_2 = K^2 - q", check_carlitz_pointwise),
        ("twisted sum m=1", |e| check_twisted(e, 1)),
        ("twisted sum m=2", |e| check_twisted(e, 2)),
        ("twisted sum m=3", |e| check_twisted(e, 3)),
        ("Artin-Schreier sum", check_artin_schreier),
        ("irreducible quadratic sum", check_irreducible_quadratic),
        ("K_GL recursive = explicit", check_gl),
        ("K_GL brute force", check_gl_bruteforce),
        ("Salie identity", check_salie),
        ("dual weights code 1", |e| check_dual_weights(e, 1)),
        ("dual weights code 2", |e| check_dual_weights(e, 2)),
        ("dual kernel code 1", |e| check_kernel(e, 1)),
        ("dual kernel code 2", |e| check_kernel(e, 2)),
        ("dual kernel code 3", |e| check_kernel(e, 3)),
        ("Pless code 1", |e| check_pless(e, 1)),
        ("Pless code 2", |e| check_pless(e, 2)),
        ("Pless code 3", |e| check_pless(e, 3)),
        ("symmetry code 1", |e| check_symmetry(e, 1)),
        ("symmetry code 2", |e| check_symmetry(e, 2)),
        ("symmetry code 3", |e| check_symmetry(e, 3)),
        ("dp = MacWilliams code 1", |e| check_macwilliams(e, 1)),
        ("dp = MacWilliams code 2", |e| check_macwilliams(e, 2)),
        ("dp = MacWilliams code 3", |e| check_macwilliams(e, 3)),
        ("dp = brute force code 1", |e| check_brute(e, 1)),
        ("dp = brute force code 2", |e| check_brute(e, 2)),
        ("Delsarte code 1", |e| check_delsarte(e, 1)),
        ("Delsarte code 2", |e| check_delsarte(e, 2)),
        ("census SO+(2,q)", |e| check_census(e, GroupKind::So2)),
        ("census O+(2,q)", |e| check_census(e, GroupKind::O2)),
        ("census SO+(4,q)", |e| check_census(e, GroupKind::So4)),
        ("census O+(4,q)", |e| check_census(e, GroupKind::O4)),
        ("Gauss sums n=1", check_gauss_n1),
        ("Gauss sums n=2", check_gauss_n2),
        ("recursion a", |e| check_recursion(e, MomentVariant::A)),
        ("recursion b", |e| check_recursion(e, MomentVariant::B)),
        ("recursion c2", |e| check_recursion(e, MomentVariant::C2)),
        ("recursion cK", |e| check_recursion(e, MomentVariant::CK)),
        ("Carlitz expansion", check_carlitz_expansion),
        ("low-order moments", check_low_orders),
        ("modulus independence", check_modulus_independence),
    ]
}

pub fn check_names() -> Vec<&'static str> {
    checks().into_iter().map(|(n, _)| n).collect()
}

fn classify(result: CliResult<Outcome>) -> Outcome {
    match result {
        Ok(o) => o,
        Err(CliError::Core(e @ CoreError::Resource { .. })) => Outcome::Skipped(e.to_string()),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

/// Runs the whole suite; results come back in the fixed check order.
pub fn run_suite(ctx: &FieldCtx) -> Vec<CheckResult> {
    let env = Env::new(ctx.clone());
    // the 4×4 censuses dominate; build them before fanning out
    let _ = env.census4(GroupKind::So4);
    if env.q() <= O4_MAX_Q {
        let _ = env.census4(GroupKind::O4);
    }
    run_ordered(checks(), |(name, f)| CheckResult { name: name.to_string(), outcome: classify(f(&env)) })
}

pub fn suite_report(ctx: &FieldCtx, results: &[CheckResult]) -> Report {
    let mut rep = Report::new(format!("Identity checks over GF({})", ctx.q()))
        .field(ctx)
        .param("r", ctx.r())
        .method("suite", "verify")
        .columns(&["check", "status", "detail"]);
    for c in results {
        rep.row(vec![Cell::from(c.name.as_str()), Cell::from(c.outcome.label()), Cell::from(c.outcome.detail())]);
    }
    let count = |l: &str| results.iter().filter(|c| c.outcome.label() == l).count();
    rep.scalar("passed", count("PASS"));
    rep.scalar("failed", count("FAIL"));
    rep.scalar("skipped", count("SKIPPED"));
    rep
}

/// An irreducible modulus of degree r other than `modulus`, if one exists.
pub fn alternate_modulus(r: u32, modulus: u32) -> Option<u32> {
    let default = default_modulus(r).ok()?;
    if default != modulus {
        return Some(default);
    }
    ((1u32 << r) + 1..(1u32 << (r + 1))).rev().step_by(2).find(|&p| p != modulus && is_irreducible(p))
}

// ---- field ----

fn sample(env: &Env) -> Vec<FieldElement> {
    let q = env.q();
    let step = (q / 256).max(1);
    (0..q).step_by(step as usize).map(|v| FieldElement(v as u16)).collect()
}

fn check_field_laws(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let ys = sample(env);
    let z = f.generator();
    for x in f.elements() {
        for &y in &ys {
            if f.mul(x, y) != f.mul(y, x) || f.mul(x, y) != f.mul_clmul(x, y) {
                return Ok(Outcome::Fail(format!("multiplication disagrees at {x:?}·{y:?}")));
            }
            if f.mul(x, f.add(y, z)) != f.add(f.mul(x, y), f.mul(x, z)) {
                return Ok(Outcome::Fail(format!("distributivity fails at {x:?}")));
            }
            if f.trace(f.add(x, y)) != f.trace(x) ^ f.trace(y) {
                return Ok(Outcome::Fail("trace is not additive".into()));
            }
        }
        if !x.is_zero() && (f.inv(x)? != f.inv_euclid(x)? || f.mul(x, f.inv(x)?) != FieldElement::ONE) {
            return Ok(Outcome::Fail(format!("inverse routes disagree at {x:?}")));
        }
    }
    let order = (1..f.q()).find(|&k| f.pow(z, k as u64) == FieldElement::ONE);
    Ok(pass_if(
        order == Some(f.q() - 1),
        format!("generator {:#x} has order {}", z.bits(), f.q() - 1),
        format!("generator order {order:?}"),
    ))
}

fn check_hilbert90(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let image = f.artin_schreier_image();
    let half = f.q() as usize / 2;
    let ok = image.len() == half && image.iter().all(|&x| f.trace(x) == 0) && f.trace_zero_count() as usize == half;
    Ok(pass_if(ok, format!("{{x^2 + x}} = ker tr, {half} elements"), format!("image has {} elements", image.len())))
}

// ---- Kloosterman sums ----

fn check_weil(env: &Env) -> CliResult<Outcome> {
    let max = env.table.values().iter().map(|v| v.abs()).max().unwrap_or(0);
    Ok(pass_if(env.table.within_weil_bound(), format!("max |K| = {max}"), format!("max |K| = {max} exceeds 2√q")))
}

fn check_frobenius(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let bad = f.nonzero().find(|&a| env.k(f.square(a)) != env.k(a));
    Ok(pass_if(bad.is_none(), "K(a^2) = K(a) for all a", format!("fails at {bad:?}")))
}

fn check_value_set(env: &Env) -> CliResult<Outcome> {
    if env.ctx.r() < 2 {
        return Ok(Outcome::Skipped("the congruence K ≡ 3 mod 4 needs r >= 2".into()));
    }
    let rows = value_set_report(&env.table);
    let attained: Vec<i64> = rows.iter().filter(|r| r.multiplicity > 0).map(|r| r.t).collect();
    if attained != predicted_value_set(env.q()) {
        return Ok(Outcome::Fail(format!("attained {attained:?}")));
    }
    if let Some(r) = rows.iter().find(|r| r.multiplicity != r.class_number_4q) {
        return Ok(Outcome::Fail(format!("t = {}: multiplicity {} but H(t^2-4q) = {}", r.t, r.multiplicity, r.class_number_4q)));
    }
    let differ = rows.iter().filter(|r| r.class_number_q != Some(r.multiplicity)).count();
    Ok(Outcome::Pass(format!(
        "{} values, multiplicities = H(t^2-4q); H(t^2-q) differs at {differ}",
        attained.len()
    )))
}

fn check_carlitz_pointwise(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let k2 = kloosterman_m_table(f, 2)?;
    let q = env.q() as i64;
    let bad = f.nonzero().find(|&a| k2[a.index()] != env.k(a) * env.k(a) - q);
    Ok(pass_if(bad.is_none(), "all a", format!("fails at {bad:?}")))
}

fn check_twisted(env: &Env, m: u32) -> CliResult<Outcome> {
    let f = &env.ctx;
    let km = kloosterman_m_table(f, m)?;
    let prev = if m > 1 { kloosterman_m_table(f, m - 1)? } else { Vec::new() };
    let bad = f.elements().find(|&b| twisted_sum(f, &km, b) != twisted_sum_closed_form(f, m, &prev, b));
    Ok(pass_if(bad.is_none(), "all β", format!("fails at β = {bad:?}")))
}

fn check_artin_schreier(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let bad = f.nonzero().find(|&b| artin_schreier_sum(f, b) != env.k(b) - 1);
    Ok(pass_if(bad.is_none(), "equals K(β) - 1 for all β", format!("fails at β = {bad:?}")))
}

fn check_irreducible_quadratic(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let cs: Vec<FieldElement> = f.elements().filter(|&c| f.trace(c) == 1).take(4).collect();
    if cs.is_empty() {
        return Ok(Outcome::Skipped("no element of trace 1".into()));
    }
    for &c in &cs {
        for b in f.nonzero() {
            if irreducible_quadratic_sum(f, b, c)? != -env.k(b) - 1 {
                return Ok(Outcome::Fail(format!("fails at β = {b:?}, c = {c:?}")));
            }
        }
    }
    Ok(Outcome::Pass(format!("equals -K(β) - 1 for {} choices of c", cs.len())))
}

fn check_gl(env: &Env) -> CliResult<Outcome> {
    let q = env.q() as u64;
    for a in env.ctx.nonzero() {
        for t in 0..=GL_MAX_T {
            if gl_recursive(q, t, env.k(a)) != gl_explicit(q, t, env.k(a)) {
                return Ok(Outcome::Fail(format!("t = {t}, a = {a:?}")));
            }
        }
    }
    Ok(Outcome::Pass(format!("t <= {GL_MAX_T}, all a")))
}

fn check_gl_bruteforce(env: &Env) -> CliResult<Outcome> {
    let f = &env.ctx;
    let mut t_done = 0;
    for t in 1..=2 {
        for a in f.nonzero() {
            let brute = match kloosterman_gl(f, t, a, GlMethod::BruteForce) {
                Ok(v) => v,
                Err(CoreError::Resource { .. }) if t > 1 => return Ok(Outcome::Pass(format!("t <= {t_done}; larger t over budget"))),
                Err(e) => return Err(e.into()),
            };
            if brute != kloosterman_gl(f, t, a, GlMethod::Recursive)? {
                return Ok(Outcome::Fail(format!("t = {t}, a = {a:?}")));
            }
        }
        t_done = t;
    }
    Ok(Outcome::Pass(format!("t <= {t_done}, all a")))
}

fn check_salie(env: &Env) -> CliResult<Outcome> {
    let rows = salie_identity_check(&env.ctx, SALIE_H)?;
    let bad = rows.iter().find(|r| !r.holds());
    Ok(pass_if(bad.is_none(), format!("h <= {SALIE_H}, both forms"), format!("fails at h = {:?}", bad.map(|r| r.h))))
}

// ---- codes ----

fn check_dual_weights(env: &Env, which: u8) -> CliResult<Outcome> {
    let f = &env.ctx;
    let spec = env.spec(which)?;
    let with_words = spec.coordinates().is_some();
    for a in f.nonzero() {
        let formula = dual_weight(f, spec, a)?;
        let from_hist = dual_weight_from_histogram(f, spec, a);
        let popcount = if with_words { dual_codeword(f, spec, a)?.weight() } else { from_hist };
        if formula != from_hist.into() || popcount != from_hist {
            return Ok(Outcome::Fail(format!("a = {a:?}: formula {formula}, histogram {from_hist}, codeword {popcount}")));
        }
    }
    Ok(Outcome::Pass("(q-1-K)/2 = histogram count = codeword weight".into()))
}

fn check_kernel(env: &Env, which: u8) -> CliResult<Outcome> {
    let rep = dual_kernel_check(&env.ctx, env.spec(which)?);
    let k = rep.dual_dimension(env.ctx.r());
    if env.ctx.r() >= 3 {
        Ok(pass_if(rep.injective, "a ↦ c(a) is injective", format!("kernel of size {}", rep.kernel_size)))
    } else {
        Ok(pass_if(
            rep.kernel_size.is_power_of_two(),
            format!("kernel size {}, dual dimension {k}", rep.kernel_size),
            format!("kernel size {}", rep.kernel_size),
        ))
    }
}

fn truncated_dp(env: &Env, which: u8, h: u32) -> CliResult<WeightDistribution> {
    Ok(weight_distribution_dp(env.spec(which)?, Some(h as u64))?)
}

fn check_pless(env: &Env, which: u8) -> CliResult<Outcome> {
    let spec = env.spec(which)?;
    let dist = truncated_dp(env, which, PLESS_H)?;
    let dual = dual_weights_with_table(spec, &env.table)?;
    let k = dual_kernel_check(&env.ctx, spec).dual_dimension(env.ctx.r());
    let inputs = PlessInputs::new(PLESS_H);
    for h in 0..=PLESS_H {
        if !pless_check(&inputs, &dual, &dist, k, h)?.holds() {
            return Ok(Outcome::Fail(format!("h = {h}")));
        }
    }
    Ok(Outcome::Pass(format!("h <= {PLESS_H}, N = {}, dual dimension {k}", spec.length())))
}

fn check_symmetry(env: &Env, which: u8) -> CliResult<Outcome> {
    let dist = weight_distribution_dp(env.spec(which)?, None)?;
    Ok(pass_if(dist.is_symmetric() == Some(true), format!("C_j = C_{{N-j}}, N = {}", dist.length()), "asymmetric"))
}

fn check_macwilliams(env: &Env, which: u8) -> CliResult<Outcome> {
    let spec = env.spec(which)?;
    let dp = weight_distribution_dp(spec, None)?;
    let mw = weight_distribution_macwilliams(&env.ctx, spec, None)?;
    Ok(pass_if(dp == mw, format!("N = {}", spec.length()), "distributions differ"))
}

fn check_brute(env: &Env, which: u8) -> CliResult<Outcome> {
    let spec = env.spec(which)?;
    let brute = weight_distribution_bruteforce(spec)?;
    let dp = weight_distribution_dp(spec, None)?;
    Ok(pass_if(brute == dp, format!("N = {}", spec.length()), "distributions differ"))
}

fn check_delsarte(env: &Env, which: u8) -> CliResult<Outcome> {
    Ok(pass_if(delsarte_check(&env.ctx, env.spec(which)?)?, "every c(a) is orthogonal to the code", "orthogonality fails"))
}

// ---- groups ----

fn histogram_outcome(census: &GroupCensus, formula: Option<Vec<u64>>) -> Outcome {
    let recount = trace_histogram(census);
    if recount != census.histogram() {
        return Outcome::Fail("recounted histogram differs from the stored one".into());
    }
    match formula {
        Some(h) if h != recount => Outcome::Fail("trace histogram differs from the closed form".into()),
        Some(_) => Outcome::Pass(format!("order {}, histogram matches the closed form", census.order())),
        None => Outcome::Pass(format!("order {}", census.order())),
    }
}

fn check_census(env: &Env, kind: GroupKind) -> CliResult<Outcome> {
    let f = &env.ctx;
    if kind == GroupKind::O4 && env.q() > O4_MAX_Q {
        return Ok(Outcome::Skipped(format!("O+(4,q) is enumerated only for q <= {O4_MAX_Q}")));
    }
    let owned;
    let census = match kind {
        GroupKind::So2 => {
            owned = so_plus_2_elements(f);
            &owned
        }
        GroupKind::O2 => {
            owned = o_plus_2_elements(f);
            &owned
        }
        _ => env.census4(kind)?,
    };
    let stride = (census.order() / 200_000).max(1) as usize;
    census.verify(f, stride)?;
    let formula = match kind {
        GroupKind::O4 => None,
        _ => Some(trace_histogram_formula_with(f, kind, &env.table)?),
    };
    Ok(histogram_outcome(census, formula))
}

fn gauss_outcome(env: &Env, censuses: &[&GroupCensus], n: u32) -> CliResult<Outcome> {
    let f = &env.ctx;
    for census in censuses {
        for a in f.nonzero() {
            let enumerated = gauss_sum_enumerated(f, census, a)?;
            let formula = gauss_sum_formula(f, n, census.kind().variant(), a)?;
            if enumerated != formula {
                return Ok(Outcome::Fail(format!("{} at a = {a:?}: {enumerated} vs {formula}", census.kind().name())));
            }
        }
    }
    let names: Vec<&str> = censuses.iter().map(|c| c.kind().name()).collect();
    Ok(Outcome::Pass(format!("{} for all a", names.join(", "))))
}

fn check_gauss_n1(env: &Env) -> CliResult<Outcome> {
    let so = so_plus_2_elements(&env.ctx);
    let o = o_plus_2_elements(&env.ctx);
    gauss_outcome(env, &[&so, &o], 1)
}

fn check_gauss_n2(env: &Env) -> CliResult<Outcome> {
    let mut list = vec![env.census4(GroupKind::So4)?];
    if env.q() <= O4_MAX_Q {
        list.push(env.census4(GroupKind::O4)?);
    }
    gauss_outcome(env, &list, 2)
}

// ---- moments ----

fn recursion_h(variant: MomentVariant) -> u32 {
    match variant {
        MomentVariant::A | MomentVariant::B => DEFAULT_H_MAX,
        MomentVariant::C2 | MomentVariant::CK => C_VARIANT_H,
    }
}

fn recursion_series(env: &Env, variant: MomentVariant) -> CliResult<MomentSeries> {
    let h = recursion_h(variant);
    let dist = truncated_dp(env, variant.code_index(), h)?;
    Ok(mk_recursive(&env.ctx, variant, h, &dist)?)
}

fn brute_series(env: &Env, variant: MomentVariant) -> CliResult<MomentSeries> {
    let h = recursion_h(variant);
    Ok(match variant {
        MomentVariant::A | MomentVariant::B => moments_bruteforce(&env.ctx, 1, h)?,
        MomentVariant::C2 => moments_bruteforce(&env.ctx, 2, h)?,
        MomentVariant::CK => moments_bruteforce(&env.ctx, 1, 2 * h)?.even_orders(),
    })
}

fn check_recursion(env: &Env, variant: MomentVariant) -> CliResult<Outcome> {
    if env.ctx.r() < variant.min_r() {
        return Ok(Outcome::Skipped(format!("variant {} needs r >= {}", variant.slug(), variant.min_r())));
    }
    let rec = recursion_series(env, variant)?;
    let brute = brute_series(env, variant)?;
    let bad = rec.values.iter().zip(&brute.values).position(|(a, b)| a != b);
    Ok(pass_if(
        bad.is_none() && rec.values.len() == brute.values.len(),
        format!("h <= {} against direct sums", rec.h_max()),
        format!("first difference at h = {bad:?}"),
    ))
}

fn check_carlitz_expansion(env: &Env) -> CliResult<Outcome> {
    if env.ctx.r() < MomentVariant::C2.min_r() {
        return Ok(Outcome::Skipped("needs r >= 2".into()));
    }
    let expanded = carlitz_expand(&recursion_series(env, MomentVariant::C2)?)?;
    let direct = recursion_series(env, MomentVariant::CK)?;
    Ok(pass_if(expanded.values == direct.values, "MK_2 expanded = MK^{2h} from cK", "series differ"))
}

fn check_low_orders(env: &Env) -> CliResult<Outcome> {
    let series = moments_bruteforce(&env.ctx, 1, 2)?;
    Ok(match low_order_check(&series) {
        Some(true) => Outcome::Pass("MK^1 = 1, MK^2 = q^2 - q - 1".into()),
        Some(false) => Outcome::Fail(format!("MK^1 = {}, MK^2 = {}", series.values[1], series.values[2])),
        None => Outcome::Skipped("series too short".into()),
    })
}

/// Modulus-free fingerprint: sorted multisets and moment series.
fn fingerprint(env: &Env) -> CliResult<Vec<String>> {
    let mut out = vec![format!("{:?}", env.table.summary())];
    for which in 1..=3 {
        let spec = env.spec(which)?;
        let h = if which == 3 { C_VARIANT_H } else { spec.length() as u32 };
        out.push(format!("{:?}", truncated_dp(env, which, h)?.freqs()));
        let mut hist = spec.histogram()[1..].to_vec();
        hist.sort_unstable();
        out.push(format!("{} {hist:?}", spec.histogram()[0]));
    }
    out.push(format!("{:?}", moments_bruteforce(&env.ctx, 1, DEFAULT_H_MAX)?.values));
    if env.ctx.r() >= MomentVariant::A.min_r() {
        out.push(format!("{:?}", recursion_series(env, MomentVariant::A)?.values));
    }
    Ok(out)
}

fn check_modulus_independence(env: &Env) -> CliResult<Outcome> {
    let r = env.ctx.r();
    let Some(other) = alternate_modulus(r, env.ctx.modulus()) else {
        return Ok(Outcome::Skipped(format!("GF(2^{r}) has a single irreducible modulus")));
    };
    let alt = Env::new(FieldCtx::with_modulus(r, other)?);
    let (a, b) = (fingerprint(env)?, fingerprint(&alt)?);
    Ok(pass_if(
        a == b,
        format!("{:#x} and {other:#x} agree on {} outputs", env.ctx.modulus(), a.len()),
        format!("{:#x} and {other:#x} differ", env.ctx.modulus()),
    ))
}
