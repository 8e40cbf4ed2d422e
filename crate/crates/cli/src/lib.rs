//! Command implementations behind the `innerrate` binary.
//!
//! Every command returns a [`RunReport`]; the binary prints it as text or
//! JSON and exits with [`RunReport::exit_code`].

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use innerrate_core::oracle::{verify_ideal, Check, OracleError};
use innerrate_core::toric::{
    complete_system, integral_closure, invariants_at_ray, named_ideals, random_corpus,
    required_rays, resolution_chain, triple_of_ideal,
};
use innerrate_core::{
    canonical_key, fmt_rat, DecoratedTriple, GraphError, IdealResolution, MonomialIdeal, Ray,
    RayInvariants, ToricError,
};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x1A7E_5EED;

/// Largest `n` accepted by [`cmd_family`].
pub const FAMILY_MAX: u32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("NotPrimary: {0}")]
    NotPrimary(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("family size must lie in 1..={FAMILY_MAX}, got {0}")]
    FamilyRange(u32),
    #[error("engine error: {0}")]
    Engine(String),
}

impl CliError {
    /// 1 for bad input, 2 for anything the engine itself rejects.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotPrimary(_) | CliError::Parse(_) | CliError::FamilyRange(_) => 1,
            CliError::Engine(_) => 2,
        }
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        match e {
            ToricError::NotPrimary(s) => CliError::NotPrimary(s),
            ToricError::Parse(s) => CliError::Parse(s),
            other => CliError::Engine(other.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Engine(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Toric(t) => t.into(),
            other => CliError::Engine(other.to_string()),
        }
    }
}

/// Parses an ideal given as generators (`"x^2, xy, y^2"`), as JSON
/// (`{"gens": [[2,0],[0,2]]}`), or as `I_n` / `m^n` for the `n`-th power of
/// the maximal ideal.
pub fn parse_ideal(spec: &str) -> Result<MonomialIdeal, CliError> {
    let s = spec.trim();
    for prefix in ["I_", "m^"] {
        if let Some(n) = s.strip_prefix(prefix) {
            let n: u32 = n
                .parse()
                .map_err(|_| CliError::Parse(format!("bad power in '{s}'")))?;
            if n == 0 {
                return Err(CliError::Parse(
                    "power of the maximal ideal must be positive".into(),
                ));
            }
            return Ok(MonomialIdeal::power_of_maximal(n));
        }
    }
    Ok(MonomialIdeal::parse(s)?)
}

pub fn hex(bytes: &[u8]) -> String {
    bytes
        .iter()
        .fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayRow {
    pub ray: String,
    pub m: i64,
    pub nu: i64,
    pub q: String,
}

impl From<&RayInvariants> for RayRow {
    fn from(r: &RayInvariants) -> Self {
        RayRow {
            ray: r.ray.to_string(),
            m: r.m,
            nu: r.nu,
            q: fmt_rat(&r.q),
        }
    }
}

/// Engine output for one ideal.
#[derive(Debug, Clone, Serialize)]
pub struct IdealReport {
    pub ideal: String,
    pub chain: Vec<String>,
    pub self_intersections: Vec<i64>,
    pub rays: Vec<RayRow>,
    #[serde(rename = "L")]
    pub l: Vec<u64>,
    #[serde(rename = "P")]
    pub p: Vec<u64>,
    pub key: String,
    pub complete_system_size: usize,
    pub triple: serde_json::Value,
    #[serde(skip)]
    pub dot: String,
}

impl IdealReport {
    pub fn from_resolution(res: &IdealResolution) -> Result<Self, CliError> {
        Ok(IdealReport {
            ideal: res.ideal.to_string(),
            chain: res.chain.rays().iter().map(Ray::to_string).collect(),
            self_intersections: res
                .triple
                .graph
                .vertices()
                .iter()
                .map(|v| v.self_int)
                .collect(),
            rays: res.rows.iter().map(RayRow::from).collect(),
            l: res.triple.l.clone(),
            p: res.triple.p.clone(),
            key: hex(&canonical_key(&res.triple)?),
            complete_system_size: complete_system(&res.ideal).len(),
            triple: res.triple.to_json(),
            dot: res.triple.to_dot(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub joint_chain: Vec<String>,
    pub rates_a: Vec<RayRow>,
    pub rates_b: Vec<RayRow>,
    pub triples_equal: bool,
    pub profiles_equal: bool,
    pub closures_equal: bool,
    /// "profiles equal implies closures equal"; false means an engine bug.
    pub implication_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyRow {
    pub n: u32,
    #[serde(rename = "L")]
    pub l: Vec<u64>,
    #[serde(rename = "P")]
    pub p: Vec<u64>,
    pub q_11: String,
    pub q_21: String,
    pub key: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub rows: Vec<FamilyRow>,
    pub keys_distinct: bool,
    pub rows_match_closed_form: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "MISMATCH")]
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub ideals: Vec<IdealReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl RunReport {
    fn new(command: String, seed: u64) -> Self {
        RunReport {
            command,
            seed,
            ideals: Vec::new(),
            compare: None,
            family: None,
            checks: Vec::new(),
            verdict: Verdict::Ok,
        }
    }

    fn settle(mut self) -> Self {
        let bad_checks = self.checks.iter().any(|c| !c.passed);
        let bad_compare = self.compare.as_ref().is_some_and(|c| !c.implication_holds);
        let bad_family = self
            .family
            .as_ref()
            .is_some_and(|f| !f.keys_distinct || !f.rows_match_closed_form);
        if bad_checks || bad_compare || bad_family {
            self.verdict = Verdict::Mismatch;
        }
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Ok => 0,
            Verdict::Mismatch => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// DOT of every triple in the report, one graph after another.
    pub fn to_dot(&self) -> String {
        self.ideals.iter().map(|r| r.dot.as_str()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "seed: {}", self.seed);
        // The family table already summarizes its triples.
        let ideals = if self.family.is_some() {
            &[][..]
        } else {
            &self.ideals[..]
        };
        for r in ideals {
            let _ = writeln!(out, "\nideal {}", r.ideal);
            let _ = writeln!(out, "  chain: {}", r.chain.join(" "));
            let _ = writeln!(out, "  {:<10} {:>5} {:>5} {:>8}", "ray", "m", "nu", "q");
            for row in &r.rays {
                let _ = writeln!(
                    out,
                    "  {:<10} {:>5} {:>5} {:>8}",
                    row.ray, row.m, row.nu, row.q
                );
            }
            let _ = writeln!(out, "  E^2 = {:?}", r.self_intersections);
            let _ = writeln!(out, "  L = {:?}", r.l);
            let _ = writeln!(out, "  P = {:?}", r.p);
            let _ = writeln!(out, "  complete system size: {}", r.complete_system_size);
            let _ = writeln!(out, "  key: {}", r.key);
        }
        if let Some(c) = &self.compare {
            let _ = writeln!(out, "\njoint chain: {}", c.joint_chain.join(" "));
            let _ = writeln!(out, "  {:<10} {:>8} {:>8}", "ray", "q(A)", "q(B)");
            for (a, b) in c.rates_a.iter().zip(&c.rates_b) {
                let _ = writeln!(out, "  {:<10} {:>8} {:>8}", a.ray, a.q, b.q);
            }
            let _ = writeln!(out, "triples equal: {}", c.triples_equal);
            let _ = writeln!(out, "rate profiles equal: {}", c.profiles_equal);
            let _ = writeln!(out, "integral closures equal: {}", c.closures_equal);
            if !c.implication_holds {
                let _ = writeln!(out, "ENGINE BUG: equal profiles but different closures");
            }
        }
        if let Some(f) = &self.family {
            let _ = writeln!(
                out,
                "\n{:>3} {:>6} {:>6} {:>8} {:>8}",
                "n", "L", "P", "q(1,1)", "q(2,1)"
            );
            for row in &f.rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>6} {:>6} {:>8} {:>8}",
                    row.n,
                    format!("{:?}", row.l),
                    format!("{:?}", row.p),
                    row.q_11,
                    row.q_21
                );
            }
            let _ = writeln!(out, "pairwise distinct keys: {}", f.keys_distinct);
        }
        for c in &self.checks {
            let status = if c.passed { "ok" } else { "FAILED" };
            let retry = if c.retried { " (retried)" } else { "" };
            let _ = write!(out, "check {:<14} {status}{retry} seed={}", c.name, c.seed);
            if !c.detail.is_empty() {
                let _ = write!(out, " [{}]", c.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "verdict: {}",
            match self.verdict {
                Verdict::Ok => "OK",
                Verdict::Mismatch => "MISMATCH",
            }
        );
        out
    }
}

fn run_checks(i: &MonomialIdeal, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = verify_ideal(i, seed)?;
    let label = i.to_string();
    for c in &mut checks {
        c.name = format!("{} {}", c.name, label);
    }
    Ok(checks)
}

/// Engine output for one ideal, optionally cross-checked by the oracles.
pub fn cmd_triple(spec: &str, verify: bool, seed: u64) -> Result<RunReport, CliError> {
    let i = parse_ideal(spec)?;
    let res = triple_of_ideal(&i)?;
    let mut report = RunReport::new(
        format!("triple \"{spec}\"{}", if verify { " --verify" } else { "" }),
        seed,
    );
    report.ideals.push(IdealReport::from_resolution(&res)?);
    if verify {
        report.checks = run_checks(&i, seed)?;
    }
    Ok(report.settle())
}

/// Triples, rate profiles on the joint chain, and integral closures of two
/// ideals.
pub fn cmd_compare(spec_a: &str, spec_b: &str, seed: u64) -> Result<RunReport, CliError> {
    let a = parse_ideal(spec_a)?;
    let b = parse_ideal(spec_b)?;
    let (ra, rb) = (triple_of_ideal(&a)?, triple_of_ideal(&b)?);
    let mut report = RunReport::new(format!("compare \"{spec_a}\" \"{spec_b}\""), seed);
    report.ideals.push(IdealReport::from_resolution(&ra)?);
    report.ideals.push(IdealReport::from_resolution(&rb)?);

    let mut required = required_rays(&a);
    required.extend(required_rays(&b));
    let joint = resolution_chain(&required);
    let rows = |i: &MonomialIdeal| -> Result<Vec<RayInvariants>, CliError> {
        Ok(joint
            .interior()
            .iter()
            .map(|&r| invariants_at_ray(i, r))
            .collect::<Result<_, _>>()?)
    };
    let (rows_a, rows_b) = (rows(&a)?, rows(&b)?);
    let profiles_equal = rows_a
        .iter()
        .zip(&rows_b)
        .all(|(x, y)| x.m == y.m && x.q == y.q);
    let closures_equal = integral_closure(&a) == integral_closure(&b);
    let triples_equal = report.ideals[0].key == report.ideals[1].key;
    report.compare = Some(CompareReport {
        joint_chain: joint.rays().iter().map(Ray::to_string).collect(),
        rates_a: rows_a.iter().map(RayRow::from).collect(),
        rates_b: rows_b.iter().map(RayRow::from).collect(),
        triples_equal,
        profiles_equal,
        closures_equal,
        implication_holds: !profiles_equal || closures_equal,
    });
    Ok(report.settle())
}

/// The family `I_n = (x, y)^n` for `n = 1 ..= n_max`.
pub fn cmd_family(n_max: u32, seed: u64) -> Result<RunReport, CliError> {
    if !(1..=FAMILY_MAX).contains(&n_max) {
        return Err(CliError::FamilyRange(n_max));
    }
    let mut report = RunReport::new(format!("family {n_max}"), seed);
    let diag = Ray::new(1, 1).expect("primitive");
    let steep = Ray::new(2, 1).expect("primitive");
    let mut rows = Vec::new();
    let mut closed_form = true;
    for n in 1..=n_max {
        let i = MonomialIdeal::power_of_maximal(n);
        let res = triple_of_ideal(&i)?;
        let ideal = IdealReport::from_resolution(&res)?;
        let q11 = invariants_at_ray(&i, diag)?.q;
        let q21 = invariants_at_ray(&i, steep)?.q;
        let n64 = u64::from(n);
        closed_form &= ideal.l == [n64]
            && ideal.p == [2 * n64 - 2]
            && q11 == innerrate_core::exactalg::rat(1, 1)
            && q21 == innerrate_core::exactalg::rat(i64::from(n) + 1, i64::from(n));
        rows.push(FamilyRow {
            n,
            l: ideal.l.clone(),
            p: ideal.p.clone(),
            q_11: fmt_rat(&q11),
            q_21: fmt_rat(&q21),
            key: ideal.key.clone(),
        });
        report.ideals.push(ideal);
    }
    let mut keys: Vec<&str> = rows.iter().map(|r| r.key.as_str()).collect();
    keys.sort_unstable();
    keys.dedup();
    report.family = Some(FamilyReport {
        keys_distinct: keys.len() == rows.len(),
        rows_match_closed_form: closed_form,
        rows,
    });
    Ok(report.settle())
}

/// The named ideals plus twenty pseudo-random ones with exponents at most 6.
pub fn default_corpus(seed: u64) -> Vec<MonomialIdeal> {
    let mut out = named_ideals();
    out.extend(random_corpus(20, 6, seed));
    out
}

/// Runs every oracle cross-check on the given ideals, or on
/// [`default_corpus`] when none are given.
pub fn cmd_verify(specs: &[String], seed: u64) -> Result<RunReport, CliError> {
    let ideals = if specs.is_empty() {
        default_corpus(seed)
    } else {
        specs
            .iter()
            .map(|s| parse_ideal(s))
            .collect::<Result<_, _>>()?
    };
    let command = if specs.is_empty() {
        "verify".to_string()
    } else {
        let quoted: Vec<String> = specs.iter().map(|s| format!("\"{s}\"")).collect();
        format!("verify {}", quoted.join(" "))
    };
    let mut report = RunReport::new(command, seed);
    for (k, i) in ideals.iter().enumerate() {
        let res = triple_of_ideal(i)?;
        report.ideals.push(IdealReport::from_resolution(&res)?);
        report
            .checks
            .extend(run_checks(i, seed.wrapping_add(k as u64))?);
    }
    Ok(report.settle())
}

/// DOT rendering of the triple of one ideal.
pub fn cmd_dot(spec: &str, seed: u64) -> Result<RunReport, CliError> {
    let i = parse_ideal(spec)?;
    let res = triple_of_ideal(&i)?;
    let mut report = RunReport::new(format!("dot \"{spec}\""), seed);
    report.ideals.push(IdealReport::from_resolution(&res)?);
    Ok(report.settle())
}

/// Rebuilds a triple from its JSON and returns its canonical key in hex.
pub fn key_of_triple_json(value: &serde_json::Value) -> Result<String, CliError> {
    let t = DecoratedTriple::from_json(value)?;
    Ok(hex(&canonical_key(&t)?))
}
