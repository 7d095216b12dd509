//! Randomized cross-validation of the reasoning engines.
//!
//! Each case draws a small consistent theory with basic deontic defaults and
//! a query, then checks the solver against the exhaustive oracle, the
//! Lindenbaum construction against direct entailment, and the relations
//! between the two default semantics and their certificates.

pub mod generate;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::ideal_meet_trivial;
use crate::defaults::{
    algebraic_extensions_in, algebraic_witness_in, basic_defaults, build_default_proof,
    credulous_entails, is_fixpoint_in, verify_default_proof, AlgebraicConfig, ExtensionPair,
};
use crate::entailment::{entails_from, oracle_entails, satisfies, Prover, ORACLE_MAX_ACTIONS};
use crate::error::{Error, Result};
use crate::lindenbaum::Lindenbaum;
use crate::syntax::{parse_formula, parse_theory, ActionTerm, Formula, Modality, Theory};

/// Draws per case before giving up on finding a consistent theory.
const MAX_DRAWS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrosscheckConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_actions: usize,
    pub max_defaults: usize,
    pub max_facts: usize,
    /// Mutation hook: run the algebraic search without the dual check.
    pub drop_dual_check: bool,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        CrosscheckConfig {
            seed: 42,
            cases: 100,
            max_actions: 3,
            max_defaults: 4,
            max_facts: 4,
            drop_dual_check: false,
        }
    }
}

impl CrosscheckConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, limit: usize| {
            Err(Error::Config(format!("{what} must be at most {limit}")))
        };
        if self.max_actions == 0 || self.max_actions > ORACLE_MAX_ACTIONS {
            return Err(Error::Config(format!(
                "max_actions must be between 1 and {ORACLE_MAX_ACTIONS}"
            )));
        }
        if self.max_defaults > 4 {
            return bad("max_defaults", 4);
        }
        if self.max_facts > 4 {
            return bad("max_facts", 4);
        }
        Ok(())
    }

    fn algebraic(&self) -> AlgebraicConfig {
        AlgebraicConfig {
            check_duals: !self.drop_dual_check,
        }
    }
}

/// Invariants checked on every case, in report order.
pub const INVARIANTS: [&str; 9] = [
    "oracle agreement",
    "deontic axioms",
    "quotient laws",
    "credulous iff certified",
    "algebraic implies credulous",
    "no default-derived falsum",
    "algebraic extensions exist",
    "extension pairs are disjoint fixpoints",
    "interpretation (entailed implies credulous)",
];

/// A generated case.
#[derive(Debug, Clone)]
pub struct Instance {
    pub theory: Theory,
    pub query: Formula,
    /// Inconsistent theories drawn and discarded before this one.
    pub discarded: usize,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}query {}", self.theory, self.query)
    }
}

/// Seed of case `index`, so a single case can be replayed.
pub fn case_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 step over the combined value
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn generate_instance(cfg: &CrosscheckConfig, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for discarded in 0..MAX_DRAWS {
        let v = generate::vocabulary(&mut rng, cfg.max_actions);
        let nfacts = rng.gen_range(0..=cfg.max_facts);
        let facts = (0..nfacts).map(|_| generate::fact(&mut rng, &v)).collect();
        let mut theory = Theory::with_facts(v.clone(), facts);
        let ndefaults = rng.gen_range(0..=cfg.max_defaults);
        theory.defaults = (0..ndefaults)
            .map(|_| generate::basic_default(&mut rng, &v))
            .collect();
        let query = generate::query(&mut rng, &v);
        if Prover::for_theory(&theory)?.consistent() {
            return Ok(Instance {
                theory,
                query,
                discarded,
            });
        }
    }
    Err(Error::Config(format!(
        "no consistent theory after {MAX_DRAWS} draws"
    )))
}

/// Outcome of one case.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub index: usize,
    pub seed: u64,
    pub instance: Instance,
    /// One entry per invariant, in `INVARIANTS` order.
    pub checks: Vec<std::result::Result<(), String>>,
    /// Credulous consequence that is not an algebraic one.
    pub non_converse: bool,
}

/// No negation and no equation anywhere in `f`.
pub fn is_negation_free(f: &Formula) -> bool {
    match f {
        Formula::Perm(_) | Formula::Forb(_) | Formula::Top | Formula::Bottom => true,
        Formula::And(l, r) | Formula::Or(l, r) => is_negation_free(l) && is_negation_free(r),
        _ => false,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail(e: Error) -> String {
    format!("engine error: {e}")
}

fn check_oracle(inst: &Instance) -> std::result::Result<(), String> {
    let t = &inst.theory;
    let prover = Prover::for_theory(t).map_err(fail)?;
    let mut queries = vec![inst.query.clone()];
    queries.extend(t.facts.iter().map(|f| Formula::not(f.clone())));
    for q in &queries {
        let verdict = prover.entails(q).map_err(fail)?;
        let oracle = oracle_entails(&t.vocabulary, &t.facts, q).map_err(fail)?;
        ensure(verdict.holds == oracle.is_none(), || {
            format!(
                "solver says {} but oracle says {} for `{q}`",
                verdict.holds,
                oracle.is_none()
            )
        })?;
        if let Some(cm) = &verdict.countermodel {
            ensure(
                !cm.is_degenerate()
                    && t.facts.iter().all(|f| satisfies(cm, f))
                    && !satisfies(cm, q),
                || format!("countermodel for `{q}` does not re-check: {cm}"),
            )?;
        }
    }
    Ok(())
}

/// Instances of D1, D2, D3, non-degeneracy and substitution of equals at
/// the terms `x` and `y`.
pub fn axiom_instances(x: &ActionTerm, y: &ActionTerm) -> Vec<Formula> {
    let (x, y) = (x.clone(), y.clone());
    let join = ActionTerm::join(x.clone(), y.clone());
    vec![
        Formula::iff(
            Formula::perm(join.clone()),
            Formula::and(Formula::perm(x.clone()), Formula::perm(y.clone())),
        ),
        Formula::iff(
            Formula::forb(join),
            Formula::and(Formula::forb(x.clone()), Formula::forb(y.clone())),
        ),
        Formula::iff(
            Formula::eq(x.clone(), ActionTerm::Zero),
            Formula::and(Formula::perm(x.clone()), Formula::forb(x.clone())),
        ),
        Formula::not(Formula::eq(ActionTerm::Zero, ActionTerm::One)),
        Formula::implies(
            Formula::eq(x.clone(), y.clone()),
            Formula::iff(Formula::perm(x.clone()), Formula::perm(y.clone())),
        ),
        Formula::implies(
            Formula::eq(x.clone(), y.clone()),
            Formula::iff(Formula::forb(x), Formula::forb(y)),
        ),
    ]
}

fn check_axioms<R: Rng>(rng: &mut R, t: &Theory) -> std::result::Result<(), String> {
    let v = &t.vocabulary;
    let x = generate::term(rng, v, 2);
    let y = generate::term(rng, v, 2);
    for ax in &axiom_instances(&x, &y) {
        ensure(entails_from(v, &[], ax).map_err(fail)?, || {
            format!("`{ax}` is not valid")
        })?;
    }
    Ok(())
}

fn check_quotient<R: Rng>(
    rng: &mut R,
    t: &Theory,
    lt: &Lindenbaum,
) -> std::result::Result<(), String> {
    let v = &t.vocabulary;
    let p = Prover::for_theory(t).map_err(fail)?;
    let q = &lt.quotient;
    let x = generate::term(rng, v, 2);
    let y = generate::term(rng, v, 2);
    let provably_equal = p.proves(&Formula::eq(x.clone(), y.clone())).map_err(fail)?;
    ensure(provably_equal == (q.class_of(&x) == q.class_of(&y)), || {
        format!("quotient disagrees with provable equality of `{x}` and `{y}`")
    })?;
    let e = q.class_of(&x);
    let ct = q.canonical_term(e);
    for m in [Modality::Perm, Modality::Forb] {
        let proves = p.proves(&m.apply(ct.clone())).map_err(fail)?;
        ensure(lt.provable_ideal(m).contains(e) == proves, || {
            format!("provable ideal membership of `{ct}` under {m:?} is wrong")
        })?;
        ensure(
            lt.dual(m)
                .members()
                .iter()
                .all(|d| !lt.provable_ideal(m).contains(*d)),
            || format!("{m:?} dual meets the provable ideal"),
        )?;
        let not_x = p.proves(&Formula::not(m.apply(x.clone()))).map_err(fail)?;
        if not_x {
            let above = ActionTerm::join(x.clone(), y.clone());
            ensure(
                p.proves(&Formula::not(m.apply(above.clone())))
                    .map_err(fail)?,
                || format!("non-{m:?} of `{x}` does not lift to `{above}`"),
            )?;
        }
    }
    ensure(
        ideal_meet_trivial(&lt.p_lt, &lt.f_lt).map_err(fail)?,
        || "provable ideals overlap".to_string(),
    )
}

fn check_pairs(
    lt: &Lindenbaum,
    inst: &Instance,
    pairs: &[ExtensionPair],
    cfg: AlgebraicConfig,
) -> std::result::Result<(), String> {
    let defaults = basic_defaults(&inst.theory).map_err(fail)?;
    let q = &lt.quotient;
    for pair in pairs {
        ensure(ideal_meet_trivial(&pair.p, &pair.f).map_err(fail)?, || {
            format!(
                "pair ({}, {}) overlaps",
                q.label(pair.p.generator()),
                q.label(pair.f.generator())
            )
        })?;
        ensure(is_fixpoint_in(lt, &defaults, &pair.p, &pair.f, cfg), || {
            format!(
                "pair ({}, {}) is not a fixpoint",
                q.label(pair.p.generator()),
                q.label(pair.f.generator())
            )
        })?;
        // replay provenance: every step enlarges exactly one generator
        let (mut gp, mut gf) = (lt.p_lt.generator().bits(), lt.f_lt.generator().bits());
        for &i in &pair.provenance {
            let d = &defaults[i];
            let c = q.class_of(&d.consequent).bits();
            let (own, other) = match d.modality {
                Modality::Perm => (&mut gp, gf),
                Modality::Forb => (&mut gf, gp),
            };
            ensure(c & !*own != 0 && (*own | c) & other == 0, || {
                format!("applying `{d}` does not grow a generator consistently")
            })?;
            *own |= c;
        }
        ensure(
            (gp, gf) == (pair.p.generator().bits(), pair.f.generator().bits()),
            || "provenance does not reproduce the pair".to_string(),
        )?;
    }
    Ok(())
}

pub fn run_case(cfg: &CrosscheckConfig, index: usize) -> Result<CaseOutcome> {
    let seed = case_seed(cfg.seed, index);
    let inst = generate_instance(cfg, seed)?;
    // separate stream for auxiliary terms
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let t = &inst.theory;
    let phi = &inst.query;
    let mut checks = Vec::with_capacity(INVARIANTS.len());

    checks.push(check_oracle(&inst));
    checks.push(check_axioms(&mut rng, t));

    let lt = Lindenbaum::build(t)?;
    checks.push(check_quotient(&mut rng, t, &lt));

    let credulous = credulous_entails(t, phi)?;
    let certificate = match build_default_proof(t, phi) {
        Ok(p) => Some(p),
        Err(Error::NotAConsequence) => None,
        Err(e) => return Err(e),
    };
    checks.push(match (&certificate, credulous) {
        (Some(p), true) => {
            verify_default_proof(t, p, phi).map_err(|r| format!("certificate rejected: {r}\n{p}"))
        }
        (None, false) => Ok(()),
        (Some(p), false) => Err(format!("certificate for a non-consequence:\n{p}")),
        (None, true) => Err("credulous consequence without certificate".to_string()),
    });

    let defaults = basic_defaults(t)?;
    let acfg = cfg.algebraic();
    let pairs = algebraic_extensions_in(&lt, &defaults, acfg);
    let algebraic = algebraic_witness_in(&lt, &pairs, phi)?;
    checks.push(match (&algebraic, credulous) {
        (Some(pair), false) => Err(format!(
            "algebraic consequence via P = {}, F = {} is not credulous",
            lt.quotient.label(pair.p.generator()),
            lt.quotient.label(pair.f.generator())
        )),
        _ => Ok(()),
    });

    let falsum = credulous_entails(t, &Formula::Bottom)?;
    checks.push(ensure(!falsum, || {
        "falsum is a credulous consequence".to_string()
    }));

    checks.push(ensure(!pairs.is_empty(), || {
        "no algebraic extension".to_string()
    }));
    checks.push(check_pairs(&lt, &inst, &pairs, acfg));

    let entailed = Prover::for_theory(t)?.proves(phi)?;
    checks.push(ensure(!entailed || credulous, || {
        "classical consequence is not credulous".to_string()
    }));

    Ok(CaseOutcome {
        index,
        seed,
        non_converse: credulous && algebraic.is_none(),
        instance: inst,
        checks,
    })
}

pub const DRIVING: &str = "actions d o\nfact (d == o) = 0\nfact P(d)\ndefault P: d ~> o\n";

/// The worked example with `~P(o)` added: its only algebraic extension is
/// the provable pair and `P(d + o)` is not an algebraic consequence.
pub fn driving_regression(cfg: AlgebraicConfig) -> std::result::Result<(), String> {
    let run = || -> Result<std::result::Result<(), String>> {
        let t = parse_theory(&format!("{DRIVING}fact ~P(o)")).map_err(Error::from)?;
        let lt = Lindenbaum::build(&t)?;
        let pairs = algebraic_extensions_in(&lt, &basic_defaults(&t)?, cfg);
        let goal = parse_formula("P(d + o)", &t.vocabulary)?;
        if pairs.len() != 1 || pairs[0].p != lt.p_lt || pairs[0].f != lt.f_lt {
            let shown: Vec<String> = pairs
                .iter()
                .map(|p| {
                    format!(
                        "({}, {})",
                        lt.quotient.label(p.p.generator()),
                        lt.quotient.label(p.f.generator())
                    )
                })
                .collect();
            return Ok(Err(format!(
                "expected the single extension (P_LT, F_LT), got [{}]",
                shown.join(", ")
            )));
        }
        if algebraic_witness_in(&lt, &pairs, &goal)?.is_some() {
            return Ok(Err("P(d + o) became an algebraic consequence".to_string()));
        }
        Ok(Ok(()))
    };
    run().unwrap_or_else(|e| Err(fail(e)))
}

#[derive(Debug, Clone)]
pub struct Tally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub case: usize,
    pub case_seed: u64,
    pub invariant: &'static str,
    pub detail: String,
    pub instance: String,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub config: CrosscheckConfig,
    pub tallies: Vec<Tally>,
    pub failures: Vec<Failure>,
    pub non_converse: usize,
    /// Failures of "algebraic implies credulous" on negation-free queries.
    pub negation_free_violations: usize,
    pub discarded: usize,
    pub regression: std::result::Result<(), String>,
}

impl CrosscheckReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.regression.is_ok()
    }

    pub fn failed(&self, invariant: &str) -> usize {
        self.tallies
            .iter()
            .find(|t| t.name == invariant)
            .map_or(0, |t| t.failed)
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

/// Failures listed in full in the text report.
const SHOWN_FAILURES: usize = 5;

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "crosscheck seed={} cases={} max_actions={} max_defaults={} max_facts={}",
            c.seed, c.cases, c.max_actions, c.max_defaults, c.max_facts
        )?;
        if c.drop_dual_check {
            writeln!(f, "mutant: dual check disabled")?;
        }
        for t in &self.tallies {
            writeln!(
                f,
                "  {:<52} pass {:>5}  fail {:>5}",
                t.name, t.passed, t.failed
            )?;
        }
        writeln!(f, "  credulous but not algebraic: {}", self.non_converse)?;
        writeln!(
            f,
            "  algebraic-not-credulous on negation-free queries: {}",
            self.negation_free_violations
        )?;
        writeln!(f, "  inconsistent theories discarded: {}", self.discarded)?;
        match &self.regression {
            Ok(()) => writeln!(f, "  worked-example regression: pass")?,
            Err(e) => writeln!(f, "  worked-example regression: FAIL ({e})")?,
        }
        if let Some(first) = self.first_failure() {
            writeln!(
                f,
                "first failure: case {} (case seed {:#018x}), {}",
                first.case, first.case_seed, first.invariant
            )?;
        }
        for fl in self.failures.iter().take(SHOWN_FAILURES) {
            writeln!(f, "--- case {} [{}]", fl.case, fl.invariant)?;
            writeln!(f, "{}", fl.instance)?;
            writeln!(f, "{}", fl.detail)?;
        }
        if self.failures.len() > SHOWN_FAILURES {
            writeln!(
                f,
                "({} more failures not shown)",
                self.failures.len() - SHOWN_FAILURES
            )?;
        }
        write!(f, "{}", if self.all_passed() { "PASS" } else { "FAIL" })
    }
}

pub fn run_crosscheck(cfg: &CrosscheckConfig) -> Result<CrosscheckReport> {
    cfg.validate()?;
    let outcomes: Vec<CaseOutcome> = (0..cfg.cases)
        .into_par_iter()
        .map(|i| run_case(cfg, i))
        .collect::<Result<_>>()?;
    let mut tallies: Vec<Tally> = INVARIANTS
        .iter()
        .map(|&name| Tally {
            name,
            passed: 0,
            failed: 0,
        })
        .collect();
    let mut failures = Vec::new();
    let mut non_converse = 0;
    let mut discarded = 0;
    let mut negation_free_violations = 0;
    for o in &outcomes {
        if o.checks[4].is_err() && is_negation_free(&o.instance.query) {
            negation_free_violations += 1;
        }
        discarded += o.instance.discarded;
        non_converse += usize::from(o.non_converse);
        for (k, check) in o.checks.iter().enumerate() {
            match check {
                Ok(()) => tallies[k].passed += 1,
                Err(detail) => {
                    tallies[k].failed += 1;
                    failures.push(Failure {
                        case: o.index,
                        case_seed: o.seed,
                        invariant: INVARIANTS[k],
                        detail: detail.clone(),
                        instance: o.instance.to_string(),
                    });
                }
            }
        }
    }
    Ok(CrosscheckReport {
        config: *cfg,
        tallies,
        failures,
        non_converse,
        negation_free_violations,
        discarded,
        regression: driving_regression(cfg.algebraic()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cases_pass_trivially() {
        let cfg = CrosscheckConfig {
            cases: 0,
            ..Default::default()
        };
        let report = run_crosscheck(&cfg).unwrap();
        assert!(report.all_passed());
    }

    #[test]
    fn bounds_are_enforced() {
        let cfg = CrosscheckConfig {
            max_actions: 4,
            ..Default::default()
        };
        assert!(matches!(run_crosscheck(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn regression_detects_the_mutant() {
        assert!(driving_regression(AlgebraicConfig::default()).is_ok());
        assert!(driving_regression(AlgebraicConfig { check_duals: false }).is_err());
    }

    #[test]
    fn instances_are_reproducible() {
        let cfg = CrosscheckConfig::default();
        let a = generate_instance(&cfg, case_seed(7, 3))
            .unwrap()
            .to_string();
        let b = generate_instance(&cfg, case_seed(7, 3))
            .unwrap()
            .to_string();
        assert_eq!(a, b);
    }
}
