//! Aggregation over an enumeration, the determinism digest, and rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::recheck::recheck;
use super::{default_budget, evaluate, Binding, ClaimId, ClaimResult, Verdict, Witness};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::mask::SetMask;
use crate::par::map_ordered;
use crate::search::{all_families, enumerate_parallel, EnumerationLimit};

/// Quasiminimal candidates examined per family when `n >= 4`.
pub const DEFAULT_QUASIMINIMAL_BUDGET: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConfig {
    pub n: usize,
    pub claims: Vec<ClaimId>,
    /// `0` uses every core, `1` runs sequentially.
    pub jobs: usize,
    /// `None` means exhaustive.
    pub quasiminimal_budget: Option<usize>,
    pub limit: EnumerationLimit,
}

impl AuditConfig {
    pub fn new(n: usize) -> Self {
        AuditConfig {
            n,
            claims: ClaimId::ALL.to_vec(),
            jobs: 1,
            quasiminimal_budget: default_budget(n),
            limit: EnumerationLimit::Standard,
        }
    }

    pub fn claims(mut self, claims: &[ClaimId]) -> Self {
        self.claims = claims.to_vec();
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }
}

/// A counterexample as stored in the report: enough to re-run the check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub family: Vec<SetMask>,
    pub params: Binding,
    pub witness: Option<Witness>,
    /// Verdict of the independent re-evaluation.
    pub recheck: Option<Verdict>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    /// Families the claim was run on.
    pub families: u64,
    /// Parameter bindings evaluated over all those families.
    pub instances_checked: u64,
    pub holds: u64,
    pub preconditions_skipped: u64,
    /// Failures confirmed by the independent re-evaluation.
    pub failures: Vec<FailureRecord>,
    /// Failures the re-evaluation did not confirm. Nonempty means the two
    /// code paths disagree, which is a defect of this tool.
    #[serde(default)]
    pub unconfirmed: Vec<FailureRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub version: String,
    pub n: usize,
    pub claims: BTreeMap<ClaimId, ClaimSummary>,
    /// Union-closed families enumerated.
    pub families: u64,
    /// Arbitrary families additionally supplied to L1 and L3.
    pub arbitrary_families: u64,
    pub quasiminimal_budget: Option<usize>,
    /// Families whose quasiminimal scan hit the budget.
    pub budget_truncations: u64,
    pub digest: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl AuditReport {
    pub fn failure_count(&self) -> usize {
        self.claims
            .values()
            .map(|s| s.failures.len() + s.unconfirmed.len())
            .sum()
    }

    pub fn all_hold(&self) -> bool {
        self.failure_count() == 0
    }
}

struct FamilyOutcome {
    /// Indexed like the claim list: (bindings, holds, skipped).
    counts: Vec<[u64; 3]>,
    failures: Vec<(usize, FailureRecord, bool)>,
    digest: [u8; 32],
    truncated: bool,
}

#[derive(Serialize)]
struct DigestLine<'a> {
    claim: ClaimId,
    family: &'a [SetMask],
    params: &'a Binding,
    verdict: Verdict,
}

fn run_family(family: &Family, claims: &[ClaimId], budget: Option<usize>) -> FamilyOutcome {
    let eval = evaluate(family, claims, budget);
    let mut counts = vec![[0u64; 3]; claims.len()];
    let mut failures = Vec::new();
    let mut hasher = Sha256::new();
    for r in eval.results {
        let k = claims
            .iter()
            .position(|&c| c == r.claim)
            .expect("requested claim");
        counts[k][0] += 1;
        match r.verdict {
            Verdict::Holds => counts[k][1] += 1,
            Verdict::PreconditionNotMet => counts[k][2] += 1,
            Verdict::Fails => {}
        }
        let line = DigestLine {
            claim: r.claim,
            family: family.members(),
            params: &r.params,
            verdict: r.verdict,
        };
        hasher.update(serde_json::to_vec(&line).expect("serialisable"));
        hasher.update(b"\n");
        if r.verdict == Verdict::Fails {
            failures.push(failure_record(k, r));
        }
    }
    FamilyOutcome {
        counts,
        failures,
        digest: hasher.finalize().into(),
        truncated: eval.truncated,
    }
}

fn failure_record(k: usize, r: ClaimResult) -> (usize, FailureRecord, bool) {
    let n = r.family.universe_size();
    let again = recheck(r.claim, n, r.family.members(), &r.params);
    let record = FailureRecord {
        family: r.family.members().to_vec(),
        params: r.params,
        witness: r.witness,
        recheck: again,
    };
    (k, record, again == Some(Verdict::Fails))
}

fn sorted_claims(claims: &[ClaimId]) -> Vec<ClaimId> {
    let mut c = claims.to_vec();
    c.sort();
    c.dedup();
    c
}

/// Runs every requested claim over all union-closed families on `[n]` and,
/// for L1 and L3 at `n <= 3`, over every nonempty subfamily of `A`.
pub fn audit_all(config: &AuditConfig) -> Result<AuditReport> {
    let started = Instant::now();
    let n = config.n;
    let claims = sorted_claims(&config.claims);
    if claims.is_empty() {
        return Err(Error::PreconditionNotMet("no claims requested".into()));
    }
    let budget = config.quasiminimal_budget;
    let families = enumerate_parallel(n, config.limit, config.jobs)?;

    let arbitrary: Vec<Family> = if n <= 3 && claims.iter().any(|c| c.accepts_arbitrary()) {
        all_families(n)?.collect()
    } else {
        Vec::new()
    };
    // With the arbitrary supply in place, L1 and L3 see every union-closed
    // family there already.
    let uc_claims: Vec<ClaimId> = claims
        .iter()
        .copied()
        .filter(|c| arbitrary.is_empty() || !c.accepts_arbitrary())
        .collect();
    let ar_claims: Vec<ClaimId> = claims
        .iter()
        .copied()
        .filter(|c| c.accepts_arbitrary())
        .collect();

    let uc = map_ordered(&families, config.jobs, |f| {
        run_family(f, &uc_claims, budget)
    });
    let ar = map_ordered(&arbitrary, config.jobs, |f| {
        run_family(f, &ar_claims, budget)
    });

    let mut summaries: BTreeMap<ClaimId, ClaimSummary> = claims
        .iter()
        .map(|&c| (c, ClaimSummary::default()))
        .collect();
    let mut hasher = Sha256::new();
    hasher.update(format!("n={n};claims={claims:?};budget={budget:?}\n").as_bytes());
    let mut truncations = 0;
    for (list, outcomes) in [(&uc_claims, &uc), (&ar_claims, &ar)] {
        for o in outcomes.iter() {
            hasher.update(o.digest);
            truncations += u64::from(o.truncated);
            for (k, &claim) in list.iter().enumerate() {
                let s = summaries.get_mut(&claim).expect("requested claim");
                s.families += 1;
                s.instances_checked += o.counts[k][0];
                s.holds += o.counts[k][1];
                s.preconditions_skipped += o.counts[k][2];
            }
            for (k, record, confirmed) in &o.failures {
                let s = summaries.get_mut(&list[*k]).expect("requested claim");
                if *confirmed {
                    s.failures.push(record.clone());
                } else {
                    s.unconfirmed.push(record.clone());
                }
            }
        }
    }

    Ok(AuditReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        n,
        claims: summaries,
        families: families.len() as u64,
        arbitrary_families: arbitrary.len() as u64,
        quasiminimal_budget: budget,
        budget_truncations: truncations,
        digest: hex::encode(hasher.finalize()),
        elapsed: started.elapsed(),
    })
}

/// [`audit_all`] with default budget and the standard enumeration limit.
pub fn audit_all_claims(n: usize, claims: &[ClaimId], jobs: usize) -> Result<AuditReport> {
    audit_all(&AuditConfig::new(n).claims(claims).jobs(jobs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

fn show_family(members: &[SetMask]) -> String {
    let parts: Vec<String> = members.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_params(b: &Binding) -> String {
    let mut parts = Vec::new();
    if let Some(i) = b.element {
        parts.push(format!("i={i}"));
    }
    if let Some(x) = b.set {
        parts.push(format!("set={x}"));
    }
    if let Some(y) = b.y1 {
        parts.push(format!("y1={y}"));
    }
    if let Some(y) = b.y2 {
        parts.push(format!("y2={y}"));
    }
    if let Some(s) = b.strategy {
        parts.push(format!(
            "strategy={}",
            serde_json::to_value(s)
                .expect("serialisable")
                .as_str()
                .unwrap_or("?")
        ));
    }
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" ")
    }
}

fn text_report(r: &AuditReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ucsets {} audit n={}", r.version, r.n);
    let _ = writeln!(
        out,
        "families: {} union-closed, {} arbitrary",
        r.families, r.arbitrary_families
    );
    let budget = r
        .quasiminimal_budget
        .map_or("exhaustive".to_string(), |b| b.to_string());
    let _ = writeln!(
        out,
        "quasiminimal budget: {budget} ({} families truncated)",
        r.budget_truncations
    );
    let _ = writeln!(
        out,
        "{:<5} {:>9} {:>12} {:>10} {:>10} {:>9}",
        "claim", "families", "bindings", "holds", "skipped", "failures"
    );
    for (claim, s) in &r.claims {
        let _ = writeln!(
            out,
            "{:<5} {:>9} {:>12} {:>10} {:>10} {:>9}",
            claim.as_str(),
            s.families,
            s.instances_checked,
            s.holds,
            s.preconditions_skipped,
            s.failures.len() + s.unconfirmed.len()
        );
    }
    for (claim, s) in &r.claims {
        for (label, list) in [
            ("failure", &s.failures),
            ("UNCONFIRMED failure", &s.unconfirmed),
        ] {
            for f in list {
                let _ = writeln!(out);
                let _ = writeln!(out, "{label}: {claim} ({})", claim.summary());
                let _ = writeln!(out, "  family: {}", show_family(&f.family));
                let _ = writeln!(out, "  params: {}", show_params(&f.params));
                if let Some(w) = &f.witness {
                    let _ = writeln!(
                        out,
                        "  witness: {}",
                        serde_json::to_string(w).expect("serialisable")
                    );
                }
                let recheck = f
                    .recheck
                    .map_or("not applicable".to_string(), |v| v.to_string());
                let _ = writeln!(out, "  recheck: {recheck}");
            }
        }
    }
    let _ = writeln!(out);
    let status = if r.all_hold() {
        "all audited claims hold"
    } else {
        "counterexamples found"
    };
    let _ = writeln!(out, "result: {status}");
    let _ = writeln!(out, "digest: {}", r.digest);
    out
}

/// Renders without the elapsed time so output depends only on the inputs.
pub fn render_report(report: &AuditReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => text_report(report),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serialisable");
            s.push('\n');
            s
        }
    }
}

pub fn parse_report(json: &str) -> std::result::Result<AuditReport, serde_json::Error> {
    serde_json::from_str(json)
}

/// Re-runs the independent check on every recorded failure, in report
/// order; `true` where it still says `fails`.
pub fn reverify_failures(report: &AuditReport) -> Vec<(ClaimId, bool)> {
    let mut out = Vec::new();
    for (&claim, s) in &report.claims {
        for f in s.failures.iter().chain(&s.unconfirmed) {
            let v = recheck(claim, report.n, &f.family, &f.params);
            out.push((claim, v == Some(Verdict::Fails)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_all_claims() {
        let r = audit_all(&AuditConfig::new(1)).unwrap();
        assert_eq!(r.families, 1);
        assert_eq!(r.claims[&ClaimId::T1].instances_checked, 1);
        assert!(r.claims[&ClaimId::T1].failures.is_empty());
    }

    #[test]
    fn n2_t1_counts_and_digest() {
        let a = audit_all_claims(2, &[ClaimId::T1], 1).unwrap();
        assert_eq!(a.claims[&ClaimId::T1].instances_checked, 6);
        assert_eq!(a.failure_count(), 0);
        let b = audit_all_claims(2, &[ClaimId::T1], 3).unwrap();
        assert_eq!(a.digest, b.digest);
        assert_eq!(
            render_report(&a, ReportFormat::Json),
            render_report(&b, ReportFormat::Json)
        );
    }

    #[test]
    fn json_round_trip() {
        let r = audit_all(&AuditConfig::new(3)).unwrap();
        let json = render_report(&r, ReportFormat::Json);
        let back = parse_report(&json).unwrap();
        assert_eq!(render_report(&back, ReportFormat::Json), json);
        assert!(reverify_failures(&back).iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn empty_claim_list_is_rejected() {
        assert!(audit_all(&AuditConfig::new(2).claims(&[])).is_err());
    }
}
