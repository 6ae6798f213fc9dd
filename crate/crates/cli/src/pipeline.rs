//! Runs the claims of a corpus entry in dependency order.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polarlift_core::algebra::{build_classical, LieAlgebra};
use polarlift_core::bundle::{
    bracket_formula_check, build_bar_model, make_symmetric_pair, metric_gs, split_isotropy, BarModel, BundleSplit,
    MetricGs,
};
use polarlift_core::holonomy::{
    center_check, fixed_set_adk, holonomy_algebra, irreducibility_check, natural_reductivity_check,
    transvection_algebra,
};
use polarlift_core::isotropy::{isotropy_generators, KChoice};
use polarlift_core::polar::{
    check_section_hypothesis, horizontality_check, maximal_abelian_in_p1, orthogonality_probe, perturbed_subspace,
    polarity_check, real_section, section_algebra, section_span, torus_action, verticality_claim_check, ActionSpec,
    SectionCandidate,
};
use polarlift_core::Error;

use crate::corpus::{Claim, ControlSpec, CorpusEntry, EntryKind, EntrySpec, SectionSpec};
use crate::report::{ClaimRecord, RunReport, Status, VerificationReport, SCHEMA_VERSION};

/// Random samples drawn for the bracket identities.
pub const BRACKET_SAMPLES: usize = 100;

/// Rotation angle, in radians, of the corrupted-section control.
pub const CORRUPTION_ANGLE: f64 = 0.6;

pub const REGULAR_PROXY: &str = "orbit dimension equals the maximum over the sampled points";

/// Default thresholds, each replaced by `--tol` when given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub algebraic: f64,
    pub orthogonality: f64,
    pub invariant_subspace: f64,
    pub verticality: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { algebraic: 1e-10, orthogonality: 1e-8, invariant_subspace: 1e-8, verticality: 1e-10 }
    }
}

impl Thresholds {
    pub fn uniform(tol: f64) -> Self {
        Thresholds { algebraic: tol, orthogonality: tol, invariant_subspace: tol, verticality: tol }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub samples: usize,
    /// Replaces every threshold when set.
    pub tolerance: Option<f64>,
    /// Restricts the claims of every entry.
    pub claims: Option<Vec<Claim>>,
    /// Replaces the `s` values of every entry.
    pub s_values: Option<Vec<f64>>,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, samples: 20, tolerance: None, claims: None, s_values: None, timing: false }
    }
}

impl RunOptions {
    fn thresholds(&self) -> Thresholds {
        self.tolerance.map_or_else(Thresholds::default, Thresholds::uniform)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Seed for one claim of one entry at one `s`, independent of run order.
pub fn sub_seed(seed: u64, entry_id: &str, s: f64, claim: Claim) -> u64 {
    [fnv1a(entry_id), s.to_bits(), claim as u64].into_iter().fold(splitmix(seed), |acc, x| splitmix(acc ^ x))
}

fn error_residual(e: &Error) -> Option<f64> {
    match e {
        Error::ExpansionResidual { residual }
        | Error::NotContained { residual }
        | Error::NotSymmetric { residual }
        | Error::NotIdeal { residual }
        | Error::NotReductive { residual }
        | Error::NotInP1 { residual }
        | Error::HypothesisNotVerified { residual }
        | Error::NotSubalgebra { residual }
        | Error::NotOrthogonal { residual } => Some(*residual),
        _ => None,
    }
}

struct Rejection {
    stage: Claim,
    error: Error,
}

fn reject(stage: Claim) -> impl FnOnce(Error) -> Rejection {
    move |error| Rejection { stage, error }
}

fn build_algebra(spec: &EntrySpec) -> Result<LieAlgebra, Error> {
    let mut parts = spec.group.iter().map(|&(family, n)| build_classical(family, n));
    let first = parts.next().expect("group has at least one summand")?;
    parts.try_fold(first, |acc, next| Ok(acc.direct_sum(&next?)))
}

/// The `s`-independent constructions with their claim records.
struct Base {
    split: BundleSplit,
    pair_record: ClaimRecord,
    split_record: ClaimRecord,
}

fn construct(entry: &CorpusEntry, spec: &EntrySpec, th: &Thresholds) -> Result<Base, Rejection> {
    let ex = &entry.expected;
    let g = Arc::new(build_algebra(spec).map_err(reject(Claim::Pair))?);
    let gens = isotropy_generators(&g, spec.isotropy).map_err(reject(Claim::Pair))?;
    let pair = make_symmetric_pair(Arc::clone(&g), &gens.h).map_err(reject(Claim::Pair))?;
    let mut pair_record = ClaimRecord::new(Claim::Pair.name());
    let r = pair.residuals();
    pair_record
        .metric("jacobi", g.jacobi_residual(), th.algebraic)
        .metric("ad_invariance", g.ad_invariance_residual(), th.algebraic)
        .metric("h_h", r.h_h, th.algebraic)
        .metric("h_p1", r.h_p1, th.algebraic)
        .metric("p1_p1", r.p1_p1, th.algebraic)
        .metric("h_perp_p1", r.orthogonality, th.algebraic)
        .dim("dim_g", ex.dim("dim_g"), g.dim())
        .dim("dim_h", ex.dim("dim_h"), pair.h().dim())
        .dim("dim_p1", ex.dim("dim_p1"), pair.p1().dim());

    let split = split_isotropy(&pair, gens.k(spec.k)).map_err(reject(Claim::Split))?;
    let mut split_record = ClaimRecord::new(Claim::Split.name());
    let r = split.residuals();
    split_record
        .metric("k_in_h", r.k_in_h, th.algebraic)
        .metric("k_k", r.k_k, th.algebraic)
        .metric("p2_p2", r.p2_p2, th.algebraic)
        .metric("k_p2", r.k_p2, th.algebraic)
        .dim("dim_k", ex.dim("dim_k"), split.k().dim())
        .dim("dim_p2", ex.dim("dim_p2"), split.p2().dim())
        .dim("dim_q", ex.dim("dim_q"), split.q().dim());
    if spec.k == KChoice::Trivial {
        split_record.notes.push("k = 0, the bundle is G -> G/H".into());
    }
    Ok(Base { split, pair_record: pair_record.settle(), split_record: split_record.settle() })
}

struct Context<'a> {
    entry: &'a CorpusEntry,
    spec: &'a EntrySpec,
    split: &'a BundleSplit,
    metric: &'a MetricGs,
    bar: &'a BarModel,
    s: f64,
    seed: u64,
    samples: usize,
    th: Thresholds,
}

impl Context<'_> {
    fn rng(&self, claim: Claim) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(sub_seed(self.seed, &self.entry.id, self.s, claim))
    }

    fn expect(&self, key: &str) -> Option<usize> {
        self.entry.expected.dim(key)
    }

    fn simple(&self) -> bool {
        self.split.g().is_simple_classical()
    }
}

fn brackets(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::Brackets.name());
    let report = bracket_formula_check(cx.bar, BRACKET_SAMPLES, &mut cx.rng(Claim::Brackets));
    rec.metric("kbar_action", report.kbar_action, cx.th.algebraic)
        .metric("p1_bracket", report.p1_bracket, cx.th.algebraic)
        .metric("p2_bracket", report.p2_bracket, cx.th.algebraic)
        .metric("gbar_jacobi", cx.bar.gbar().jacobi_residual(), cx.th.algebraic)
        .dim("dim_gbar", None, cx.bar.gbar().dim());
    rec.samples = report.samples;
    rec.settle()
}

fn reductive(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::Reductive.name());
    let nr = natural_reductivity_check(cx.bar);
    let r = cx.bar.residuals();
    rec.metric("lambda_qbar_skew", nr.lambda_qbar, cx.th.algebraic)
        .metric("ad_kbar_skew", nr.ad_kbar, cx.th.algebraic)
        .metric("kbar_closed", r.kbar_closed, cx.th.algebraic)
        .metric("kbar_qbar_invariant", r.reductive, cx.th.algebraic)
        .metric("metric_pullback", cx.metric.pullback_residual(), cx.th.algebraic);
    rec.settle()
}

fn irreducible(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::Irreducible.name());
    let hol = holonomy_algebra(cx.bar);
    rec.metric("holonomy_skew", hol.skew_residual(), cx.th.algebraic)
        .metric("holonomy_closure", hol.closure_residual(), cx.th.algebraic)
        .dim("holonomy_dim", None, hol.dim());
    let irr = match irreducibility_check(&hol, &mut cx.rng(Claim::Irreducible)) {
        Ok(irr) => irr,
        Err(e) => return rec.fail(e.to_string()).clone(),
    };
    let expected = cx.entry.expected.irreducible.unwrap_or(cx.simple());
    rec.dim("commutant_dim", cx.expect("commutant_dim"), irr.commutant_dim);
    if expected {
        rec.dim("commutant_dim_irreducible", Some(1), irr.commutant_dim);
    } else {
        rec.metric("invariant_subspaces", irr.invariance_residual, cx.th.invariant_subspace);
        let total: usize = irr.invariant_dims.iter().sum();
        rec.dim("invariant_dims_total", Some(hol.carrier_dim()), total);
        rec.notes.push(format!("invariant subspace dimensions {:?}", irr.invariant_dims));
        if irr.commutant_dim < 2 || irr.projectors.len() < 2 {
            rec.fail(format!("expected a reducible holonomy, commutant has dimension {}", irr.commutant_dim));
        }
    }
    rec.settle()
}

fn is_round(s: f64) -> bool {
    (s - 1.0).abs() <= 1e-12
}

fn transvection(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::Transvection.name());
    let tr = transvection_algebra(cx.bar);
    let (dim_g, dim_gbar) = (cx.split.g().dim(), cx.bar.gbar().dim());
    let (key, natural) = if is_round(cx.s) { ("tr_s1", dim_g) } else { ("tr_generic", dim_gbar) };
    let expected = cx.expect(key).or(cx.simple().then_some(natural));
    rec.dim("transvection", expected, tr.dim()).dim("span_before_closure", None, tr.span_dim);
    rec.settle()
}

fn fixed_set(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::FixedSet.name());
    let f = match fixed_set_adk(cx.split) {
        Ok(f) => f,
        Err(e) => return rec.fail(e.to_string()).clone(),
    };
    rec.dim("fixed_dim", cx.expect("fixed_dim"), f.dim());
    if f.vacuous {
        rec.dim("fixed_equals_q", Some(cx.split.q().dim()), f.dim());
    } else {
        rec.metric("fixed_equals_p2", f.p2_residual, cx.th.algebraic);
        rec.dim("fixed_dim_p2", Some(cx.split.p2().dim()), f.dim());
    }
    rec.settle()
}

fn center(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::Center.name());
    match center_check(cx.bar) {
        Ok(c) => {
            rec.dim("center_dim", cx.expect("center_dim"), c.dim_center)
                .dim("center_dim_quotient", None, c.dim_center_quotient)
                .metric("center_g_part", c.g_part, cx.th.algebraic);
        }
        Err(e) => {
            rec.fail(e.to_string());
        }
    }
    rec.settle()
}

/// Polarity, horizontality and verticality of the lifted `action` with
/// section `sc`.
fn lifted_suite(cx: &Context, rec: &mut ClaimRecord, action: &ActionSpec, sc: &SectionCandidate, claim: Claim) {
    let mut rng = cx.rng(claim);
    let hyp = match check_section_hypothesis(cx.split, sc.m()) {
        Ok(h) => h,
        Err(e) => {
            rec.fail(e.to_string());
            return;
        }
    };
    rec.metric("mm_in_k", hyp.residual, cx.th.algebraic);
    let polar = match polarity_check(cx.split, cx.metric, action, sc, cx.samples, &mut rng) {
        Ok(p) => p,
        Err(e) => {
            rec.fail(e.to_string());
            return;
        }
    };
    record_polarity(rec, &polar, cx);
    match horizontality_check(cx.split, cx.metric, sc, cx.samples, &mut rng) {
        Ok(h) => {
            rec.metric("horizontality", h.max(), cx.th.orthogonality);
        }
        Err(e) => {
            rec.fail(e.to_string());
        }
    }
    match verticality_claim_check(cx.split, cx.metric, action, sc, cx.samples, &mut rng) {
        Ok(v) => {
            rec.metric("verticality", v.max_regular(), cx.th.verticality).dim("verticality_regular_samples", None, v.regular_samples());
        }
        Err(e) => {
            rec.fail(e.to_string());
        }
    }
    rec.samples = cx.samples;
}

fn record_polarity(rec: &mut ClaimRecord, polar: &polarlift_core::polar::PolarityReport, cx: &Context) {
    rec.metric("orthogonality", polar.orthogonality(), cx.th.orthogonality)
        .dim("regular_orbit_dim", Some(polar.dim_q - polar.dim_m), polar.regular_orbit_dim)
        .dim("regular_samples", None, polar.regular_samples)
        .dim("transversality_failures", Some(0), polar.transversality_failures)
        .dim("section_dim_failures", Some(0), polar.section_dim_failures);
    if polar.regular_samples == 0 {
        rec.fail("no regular samples");
    }
}

fn lift_hyperpolar(cx: &Context) -> ClaimRecord {
    let mut rec = ClaimRecord::new(Claim::LiftHyperpolar.name());
    let mut rng = cx.rng(Claim::LiftHyperpolar);
    let pair = cx.split.pair();
    let m = maximal_abelian_in_p1(pair, &mut rng);
    rec.dim("rank", cx.expect("rank"), m.dim());
    let action = ActionSpec::isotropy(pair, true);
    if cx.spec.control == Some(ControlSpec::CorruptedSection) {
        rec.notes.push(format!("section rotated by {CORRUPTION_ANGLE} rad inside p1"));
        let probe = perturbed_subspace(pair, &m, CORRUPTION_ANGLE, &mut rng)
            .and_then(|bent| section_span(cx.split, &bent))
            .and_then(|sc| orthogonality_probe(cx.split, cx.metric, &action, &sc, cx.samples, &mut rng));
        match probe {
            Ok(polar) => {
                record_polarity(&mut rec, &polar, cx);
                rec.samples = cx.samples;
            }
            Err(e) => {
                rec.fail(e.to_string());
            }
        }
        return rec.settle();
    }
    match section_algebra(cx.split, &m) {
        Ok(sc) => {
            rec.dim("section_alg_dim_flat", Some(m.dim()), sc.s_alg().dim());
            lifted_suite(cx, &mut rec, &action, &sc, Claim::LiftHyperpolar);
        }
        Err(e) => {
            rec.fail(e.to_string());
        }
    }
    rec.settle()
}

fn lift_section(cx: &Context) -> ClaimRecord {
    let claim = Claim::LiftSection.name();
    let Some(SectionSpec::RealPoints) = cx.spec.section else {
        return ClaimRecord::skipped(claim, "no alternative section configured");
    };
    let mut rec = ClaimRecord::new(claim);
    let built = real_section(cx.split.pair())
        .and_then(|m| section_algebra(cx.split, &m))
        .and_then(|sc| torus_action(cx.split.g(), true).map(|a| (sc, a)));
    match built {
        Ok((sc, action)) => {
            rec.dim("section_dim", cx.expect("section_dim"), sc.m().dim())
                .dim("section_alg_dim", cx.expect("section_alg_dim"), sc.s_alg().dim());
            rec.notes.push(format!(
                "diagonal torus with gauge, {} section",
                if sc.flat() { "flat" } else { "nonflat" }
            ));
            lifted_suite(cx, &mut rec, &action, &sc, Claim::LiftSection);
        }
        Err(e) => {
            rec.fail(e.to_string());
        }
    }
    rec.settle()
}

fn run_claim(cx: &Context, claim: Claim) -> ClaimRecord {
    match claim {
        Claim::Pair | Claim::Split => unreachable!("recorded during construction"),
        Claim::Brackets => brackets(cx),
        Claim::Reductive => reductive(cx),
        Claim::Irreducible => irreducible(cx),
        Claim::Transvection => transvection(cx),
        Claim::FixedSet => fixed_set(cx),
        Claim::Center => center(cx),
        Claim::LiftHyperpolar => lift_hyperpolar(cx),
        Claim::LiftSection => lift_section(cx),
    }
}

/// Claim records for a run that stopped at `stage`: the stage fails and
/// every later claim is skipped.
fn rejected_claims(
    plan: &[Claim],
    stage: Claim,
    error: &Error,
    th: &Thresholds,
    done: Vec<ClaimRecord>,
) -> Vec<ClaimRecord> {
    let mut out = done;
    for &c in plan {
        if out.iter().any(|r| r.claim == c.name()) {
            continue;
        }
        if c == stage {
            let mut r = ClaimRecord::new(c.name());
            if let Some(res) = error_residual(error) {
                r.metric("rejection_residual", res, th.algebraic);
            }
            r.fail(error.to_string());
            out.push(r);
        } else {
            out.push(ClaimRecord::skipped(c.name(), format!("not run, construction rejected at {stage}")));
        }
    }
    out
}

fn plan_for(entry: &CorpusEntry, opts: &RunOptions) -> Vec<Claim> {
    opts.claims.clone().unwrap_or_else(|| entry.default_claims())
}

/// Reports for one entry, one per `s` unless construction stops first.
pub fn run_entry(entry: &CorpusEntry, opts: &RunOptions) -> Vec<VerificationReport> {
    let plan = plan_for(entry, opts);
    let th = opts.thresholds();
    let started = Instant::now();
    let elapsed = |t: Instant| opts.timing.then(|| t.elapsed().as_millis() as u64);
    let base_report = |s: Option<f64>, normalization: String, status: Status, claims: Vec<ClaimRecord>| VerificationReport {
        entry_id: entry.id.clone(),
        s,
        seed: opts.seed,
        normalization,
        status,
        claims,
        wall_time_ms: None,
    };
    let spec = match &entry.kind {
        EntryKind::Supported(spec) => spec,
        EntryKind::Skipped { reason, group, isotropy } => {
            let claims = plan.iter().map(|c| ClaimRecord::skipped(c.name(), reason.clone())).collect();
            let mut r = base_report(None, String::new(), Status::Skipped { reason: format!("{reason}: {group} / {isotropy}") }, claims);
            r.wall_time_ms = elapsed(started);
            return vec![r];
        }
    };
    let base = match construct(entry, spec, &th) {
        Ok(base) => base,
        Err(Rejection { stage, error }) => {
            let status = Status::Rejected {
                stage: stage.name().to_string(),
                residual: error_residual(&error),
                message: error.to_string(),
            };
            let mut r = base_report(None, String::new(), status, rejected_claims(&plan, stage, &error, &th, Vec::new()));
            r.wall_time_ms = elapsed(started);
            return vec![r];
        }
    };
    let normalization = base.split.g().normalization();
    let s_values = opts.s_values.clone().unwrap_or_else(|| entry.s_values.clone());
    s_values
        .into_iter()
        .map(|s| {
            let t = Instant::now();
            let mut claims = Vec::new();
            for &c in plan.iter().filter(|c| matches!(c, Claim::Pair | Claim::Split)) {
                claims.push(if c == Claim::Pair { base.pair_record.clone() } else { base.split_record.clone() });
            }
            let built = metric_gs(&base.split, s)
                .map_err(reject(Claim::Brackets))
                .and_then(|metric| build_bar_model(&base.split, s).map(|bar| (metric, bar)).map_err(reject(Claim::Brackets)));
            let mut report = match built {
                Ok((metric, bar)) => {
                    let cx = Context {
                        entry,
                        spec,
                        split: &base.split,
                        metric: &metric,
                        bar: &bar,
                        s,
                        seed: opts.seed,
                        samples: opts.samples,
                        th,
                    };
                    for &c in plan.iter().filter(|c| !matches!(c, Claim::Pair | Claim::Split)) {
                        claims.push(run_claim(&cx, c));
                    }
                    base_report(Some(s), normalization.clone(), Status::Completed, claims)
                }
                Err(Rejection { stage, error }) => {
                    let status = Status::Rejected {
                        stage: "bar-model".into(),
                        residual: error_residual(&error),
                        message: error.to_string(),
                    };
                    base_report(Some(s), normalization.clone(), status, rejected_claims(&plan, stage, &error, &th, claims))
                }
            };
            claims_in_plan_order(&mut report, &plan);
            report.wall_time_ms = elapsed(t);
            report
        })
        .collect()
}

fn claims_in_plan_order(report: &mut VerificationReport, plan: &[Claim]) {
    report.claims.sort_by_key(|r| plan.iter().position(|c| c.name() == r.claim));
}

/// Runs every entry, or only `only` when given.
pub fn run_corpus(entries: &[CorpusEntry], only: Option<&str>, opts: &RunOptions) -> RunReport {
    let reports = entries
        .iter()
        .filter(|e| only.is_none_or(|id| e.id == id))
        .flat_map(|e| run_entry(e, opts))
        .collect();
    RunReport {
        schema_version: SCHEMA_VERSION,
        seed: opts.seed,
        samples: opts.samples,
        tolerance_override: opts.tolerance,
        regular_proxy: REGULAR_PROXY.to_string(),
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::report::Verdict;

    const CP2: &str = "[entry cp2]\ngroup = su 3\nisotropy = su-block 2 1\nk = first\ns = 0.5\nexpect.dim_p2 = 1\n";

    #[test]
    fn sub_seeds_differ_by_claim_and_entry() {
        let a = sub_seed(1, "x", 0.5, Claim::Brackets);
        assert_ne!(a, sub_seed(1, "x", 0.5, Claim::Irreducible));
        assert_ne!(a, sub_seed(1, "y", 0.5, Claim::Brackets));
        assert_ne!(a, sub_seed(1, "x", 2.0, Claim::Brackets));
        assert_eq!(a, sub_seed(1, "x", 0.5, Claim::Brackets));
    }

    #[test]
    fn transvection_on_cp2_at_round_metric_is_dim_g() {
        let entries = parse_corpus(&CP2.replace("s = 0.5", "s = 1")).unwrap();
        let opts = RunOptions { claims: Some(vec![Claim::Transvection]), ..Default::default() };
        let reports = run_entry(&entries[0], &opts);
        let c = reports[0].claim("transvection").unwrap();
        assert_eq!(c.dimensions["transvection"].got, 8);
        assert_eq!(c.verdict, Verdict::Pass);
    }

    #[test]
    fn plan_lists_each_claim_once() {
        let entries = parse_corpus(CP2).unwrap();
        let opts = RunOptions { claims: Some(vec![Claim::Pair, Claim::Split, Claim::Center, Claim::LiftSection]), ..Default::default() };
        let r = &run_entry(&entries[0], &opts)[0];
        let names: Vec<_> = r.claims.iter().map(|c| c.claim.as_str()).collect();
        assert_eq!(names, ["pair", "split", "center", "lift-section"]);
        assert_eq!(r.claims[3].verdict, Verdict::Skipped);
    }

    #[test]
    fn wrong_expectation_fails() {
        let entries = parse_corpus(&CP2.replace("dim_p2 = 1", "dim_p2 = 2")).unwrap();
        let opts = RunOptions { claims: Some(vec![Claim::Split]), ..Default::default() };
        let report = run_corpus(&entries, None, &opts);
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn non_ideal_k_is_rejected() {
        let text = "[entry bad]\ngroup = su 4\nisotropy = su-real-leading\nk = first\n";
        let report = run_corpus(&parse_corpus(text).unwrap(), None, &RunOptions::default());
        assert_eq!(report.exit_code(), 2);
        let Status::Rejected { stage, residual, .. } = &report.reports[0].status else { panic!() };
        assert_eq!(stage, "split");
        assert!(residual.unwrap() > 1e-2);
        assert_eq!(report.reports[0].claims.len(), Claim::ALL.len() - 1);
    }
}
