use std::collections::HashSet;
use std::fmt;

use super::reiter::MAX_DEFAULTS;
use crate::algebra::{AtomSet, Ideal};
use crate::entailment::{self, check_formula, Frame, Prover};
use crate::error::{Error, Result};
use crate::lindenbaum::{dual_below, Lindenbaum, QuotientAlgebra};
use crate::syntax::{BasicDeonticDefault, Formula, Modality, Theory};

/// Knobs for the extension search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraicConfig {
    /// Block defaults whose consequent lies above a deontic dual member.
    pub check_duals: bool,
}

impl Default for AlgebraicConfig {
    fn default() -> Self {
        AlgebraicConfig { check_duals: true }
    }
}

/// A pair of ideals over the quotient algebra, with the defaults applied to
/// reach it from the provable ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPair {
    pub p: Ideal,
    pub f: Ideal,
    /// Positions in the theory's default list, in application order.
    pub provenance: Vec<usize>,
}

impl ExtensionPair {
    fn key(&self) -> (u64, u64) {
        (self.p.generator().bits(), self.f.generator().bits())
    }
}

/// Theory defaults as basic deontic defaults.
pub fn basic_defaults(theory: &Theory) -> Result<Vec<BasicDeonticDefault>> {
    let ds = theory
        .basic_defaults()
        .map_err(|d| Error::NotBasicDefault(d.to_string()))?;
    if ds.len() > MAX_DEFAULTS {
        return Err(Error::TooManyDefaults {
            actual: ds.len(),
            limit: MAX_DEFAULTS,
        });
    }
    Ok(ds)
}

/// A default with its antecedent and consequent classes.
#[derive(Debug, Clone, Copy)]
struct Rule {
    modality: Modality,
    antecedent: u64,
    consequent: u64,
}

fn rules(lt: &Lindenbaum, defaults: &[BasicDeonticDefault]) -> Vec<Rule> {
    defaults
        .iter()
        .map(|d| Rule {
            modality: d.modality,
            antecedent: lt.quotient.class_of(&d.antecedent).bits(),
            consequent: lt.quotient.class_of(&d.consequent).bits(),
        })
        .collect()
}

/// Pairs are `(permitted generator, forbidden generator)`.
type Pair = (u64, u64);

/// Whether `rule` fires at `current`, with consistency judged against
/// `against`.
fn fires(lt: &Lindenbaum, rule: &Rule, current: Pair, against: Pair, cfg: AlgebraicConfig) -> bool {
    let arity = lt.quotient.alive().arity();
    let (own, other_against, own_against) = match rule.modality {
        Modality::Perm => (current.0, against.1, against.0),
        Modality::Forb => (current.1, against.0, against.1),
    };
    rule.antecedent & !own == 0
        && (own_against | rule.consequent) & other_against == 0
        && !(cfg.check_duals
            && dual_below(AtomSet::new(arity, rule.consequent), lt.dual(rule.modality)))
}

fn apply(rule: &Rule, pair: Pair) -> Pair {
    match rule.modality {
        Modality::Perm => (pair.0 | rule.consequent, pair.1),
        Modality::Forb => (pair.0, pair.1 | rule.consequent),
    }
}

fn adds_something(rule: &Rule, pair: Pair) -> bool {
    let own = match rule.modality {
        Modality::Perm => pair.0,
        Modality::Forb => pair.1,
    };
    rule.consequent & !own != 0
}

fn start(lt: &Lindenbaum) -> Pair {
    (lt.p_lt.generator().bits(), lt.f_lt.generator().bits())
}

fn to_pair(lt: &Lindenbaum, (gp, gf): Pair, provenance: Vec<usize>) -> ExtensionPair {
    let arity = lt.quotient.alive().arity();
    ExtensionPair {
        p: lt
            .quotient
            .ideal(AtomSet::new(arity, gp))
            .expect("within the quotient"),
        f: lt
            .quotient
            .ideal(AtomSet::new(arity, gf))
            .expect("within the quotient"),
        provenance,
    }
}

/// Terminal pairs of the iteration from the provable ideals, over every
/// order of default application, sorted by generators.
pub fn algebraic_extensions_in(
    lt: &Lindenbaum,
    defaults: &[BasicDeonticDefault],
    cfg: AlgebraicConfig,
) -> Vec<ExtensionPair> {
    let rules = rules(lt, defaults);
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    let mut path = Vec::new();
    search(lt, &rules, cfg, start(lt), &mut path, &mut seen, &mut found);
    found.sort_by_key(ExtensionPair::key);
    found.dedup_by_key(|e| e.key());
    found
}

fn search(
    lt: &Lindenbaum,
    rules: &[Rule],
    cfg: AlgebraicConfig,
    pair: Pair,
    path: &mut Vec<usize>,
    seen: &mut HashSet<Pair>,
    found: &mut Vec<ExtensionPair>,
) {
    if !seen.insert(pair) {
        return;
    }
    let mut terminal = true;
    for (i, r) in rules.iter().enumerate() {
        if adds_something(r, pair) && fires(lt, r, pair, pair, cfg) {
            terminal = false;
            path.push(i);
            search(lt, rules, cfg, apply(r, pair), path, seen, found);
            path.pop();
        }
    }
    if terminal {
        found.push(to_pair(lt, pair, path.clone()));
    }
}

pub fn algebraic_extensions(theory: &Theory) -> Result<Vec<ExtensionPair>> {
    let defaults = basic_defaults(theory)?;
    let lt = Lindenbaum::build(theory)?;
    Ok(algebraic_extensions_in(
        &lt,
        &defaults,
        AlgebraicConfig::default(),
    ))
}

/// Whether `(p, f)` is a fixed point: it contains the provable ideals, its
/// ideals are disjoint, and it is exactly the least pair closed under the
/// defaults whose consistency and dual conditions hold against `(p, f)`.
pub fn is_fixpoint_in(
    lt: &Lindenbaum,
    defaults: &[BasicDeonticDefault],
    p: &Ideal,
    f: &Ideal,
    cfg: AlgebraicConfig,
) -> bool {
    let alive = lt.quotient.alive();
    if p.universe() != alive || f.universe() != alive {
        return false;
    }
    let candidate = (p.generator().bits(), f.generator().bits());
    let (lp, lf) = start(lt);
    if lp & !candidate.0 != 0 || lf & !candidate.1 != 0 || candidate.0 & candidate.1 != 0 {
        return false;
    }
    let rules = rules(lt, defaults);
    let mut pair = (lp, lf);
    loop {
        let next = rules
            .iter()
            .filter(|r| fires(lt, r, pair, candidate, cfg))
            .fold(pair, |acc, r| apply(r, acc));
        if next == pair {
            break;
        }
        pair = next;
    }
    pair == candidate
}

pub fn is_fixpoint(theory: &Theory, p: &Ideal, f: &Ideal) -> Result<bool> {
    let defaults = basic_defaults(theory)?;
    let lt = Lindenbaum::build(theory)?;
    Ok(is_fixpoint_in(
        &lt,
        &defaults,
        p,
        f,
        AlgebraicConfig::default(),
    ))
}

/// Satisfaction in the quotient algebra with ideals `p` and `f` and the
/// canonical valuation `a ↦ [a]`.
pub fn satisfies_in_algebra(
    q: &QuotientAlgebra,
    p: &Ideal,
    f: &Ideal,
    phi: &Formula,
) -> Result<bool> {
    check_formula(phi, q.vocabulary())?;
    if p.universe() != q.alive() || f.universe() != q.alive() {
        return Err(Error::UniverseMismatch);
    }
    if p.generator().bits() & f.generator().bits() != 0 {
        return Err(Error::OverlappingIdeals);
    }
    let d = crate::algebra::Denoter::new(q.vocabulary())?;
    Ok(entailment::eval(
        phi,
        &d,
        q.alive().bits(),
        p.generator().bits(),
        f.generator().bits(),
    ))
}

/// Whether every disjoint ideal pair above `(p, f)` satisfies `phi`.
pub fn robustly_satisfies(
    q: &QuotientAlgebra,
    p: &Ideal,
    f: &Ideal,
    phi: &Formula,
) -> Result<bool> {
    Ok(robust_countermodel(q, p, f, phi)?.is_none())
}

/// A disjoint ideal pair above `(p, f)` falsifying `phi`, as `(P', F')`.
pub fn robust_countermodel(
    q: &QuotientAlgebra,
    p: &Ideal,
    f: &Ideal,
    phi: &Formula,
) -> Result<Option<(Ideal, Ideal)>> {
    let alive = q.alive();
    let frame = Frame {
        dead: !alive.bits() & AtomSet::full(alive.arity()).bits(),
        alive: alive.bits(),
        permitted: p.generator().bits(),
        forbidden: f.generator().bits(),
    };
    let prover = Prover::with_frame(q.vocabulary(), &[], frame)?;
    let verdict = prover.entails(phi)?;
    Ok(verdict.countermodel.map(|m| {
        (
            q.ideal(m.permitted()).expect("permitted atoms are alive"),
            q.ideal(m.forbidden()).expect("forbidden atoms are alive"),
        )
    }))
}

/// The first extension (in canonical order) robustly satisfying `phi`.
pub fn algebraic_witness_in(
    lt: &Lindenbaum,
    extensions: &[ExtensionPair],
    phi: &Formula,
) -> Result<Option<ExtensionPair>> {
    for e in extensions {
        if robustly_satisfies(&lt.quotient, &e.p, &e.f, phi)? {
            return Ok(Some(e.clone()));
        }
    }
    Ok(None)
}

pub fn algebraic_entails(theory: &Theory, phi: &Formula) -> Result<bool> {
    let defaults = basic_defaults(theory)?;
    let lt = Lindenbaum::build(theory)?;
    let ext = algebraic_extensions_in(&lt, &defaults, AlgebraicConfig::default());
    Ok(algebraic_witness_in(&lt, &ext, phi)?.is_some())
}

/// Display helper listing the generators of an extension pair.
pub struct PairDisplay<'a> {
    pub quotient: &'a QuotientAlgebra,
    pub pair: &'a ExtensionPair,
    pub defaults: &'a [BasicDeonticDefault],
}

impl fmt::Display for PairDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.quotient;
        let gp = self.pair.p.generator();
        let gf = self.pair.f.generator();
        writeln!(
            f,
            "P generated by {} = {}",
            q.label(gp),
            q.canonical_term(gp)
        )?;
        writeln!(
            f,
            "F generated by {} = {}",
            q.label(gf),
            q.canonical_term(gf)
        )?;
        if self.pair.provenance.is_empty() {
            write!(f, "applied: none")
        } else {
            let applied: Vec<String> = self
                .pair
                .provenance
                .iter()
                .map(|&i| self.defaults[i].to_string())
                .collect();
            write!(f, "applied: {}", applied.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_theory};

    const DRIVING: &str = "actions d o\nfact (d == o) = 0\nfact P(d)\ndefault P: d ~> o\n";

    fn f(t: &Theory, s: &str) -> Formula {
        parse_formula(s, &t.vocabulary).unwrap()
    }

    #[test]
    fn driving_extension_is_everything_permitted() {
        let t = parse_theory(DRIVING).unwrap();
        let lt = Lindenbaum::build(&t).unwrap();
        let ext = algebraic_extensions(&t).unwrap();
        assert_eq!(ext.len(), 1);
        assert!(ext[0].p.is_whole());
        assert!(ext[0].f.is_trivial());
        assert_eq!(ext[0].provenance, vec![0]);
        assert!(is_fixpoint(&t, &ext[0].p, &ext[0].f).unwrap());
        assert!(!is_fixpoint(&t, &lt.p_lt, &lt.f_lt).unwrap());
        let zero = Ideal::zero(lt.quotient.alive());
        assert!(!is_fixpoint(&t, &zero, &zero).unwrap());
        assert!(algebraic_entails(&t, &f(&t, "P(d + o)")).unwrap());
        assert!(algebraic_entails(&t, &f(&t, "P(0)")).unwrap());
        assert!(
            satisfies_in_algebra(&lt.quotient, &ext[0].p, &ext[0].f, &f(&t, "P(d + o)")).unwrap()
        );
        assert!(satisfies_in_algebra(&lt.quotient, &lt.p_lt, &lt.f_lt, &f(&t, "0 = 0")).unwrap());
    }

    #[test]
    fn non_permission_keeps_the_provable_ideals() {
        let t = parse_theory(&format!("{DRIVING}fact ~P(o)")).unwrap();
        let lt = Lindenbaum::build(&t).unwrap();
        let ext = algebraic_extensions(&t).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].p, lt.p_lt);
        assert_eq!(ext[0].f, lt.f_lt);
        assert!(ext[0].provenance.is_empty());
        assert!(!algebraic_entails(&t, &f(&t, "P(d + o)")).unwrap());
        // enlarging P by [o] falsifies the fact ~P(o)
        let o = lt.quotient.class_of(&crate::syntax::ActionTerm::basic("o"));
        let bigger = lt
            .quotient
            .ideal(AtomSet::new(2, lt.p_lt.generator().bits() | o.bits()))
            .unwrap();
        assert!(!satisfies_in_algebra(&lt.quotient, &bigger, &lt.f_lt, &f(&t, "~P(o)")).unwrap());
    }

    #[test]
    fn dropping_the_dual_check_changes_the_outcome() {
        let t = parse_theory(&format!("{DRIVING}fact ~P(o)")).unwrap();
        let lt = Lindenbaum::build(&t).unwrap();
        let ds = basic_defaults(&t).unwrap();
        let mutant = algebraic_extensions_in(&lt, &ds, AlgebraicConfig { check_duals: false });
        assert_eq!(mutant.len(), 1);
        assert!(mutant[0].p.is_whole());
    }

    #[test]
    fn no_defaults_gives_the_provable_pair() {
        let t = parse_theory("actions a b\nfact P(a)\nfact F(b)").unwrap();
        let lt = Lindenbaum::build(&t).unwrap();
        let ext = algebraic_extensions(&t).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!((ext[0].p, ext[0].f), (lt.p_lt, lt.f_lt));
    }

    #[test]
    fn general_defaults_are_refused() {
        let t = parse_theory("actions a\ndefault true => P(a)").unwrap();
        assert!(matches!(
            algebraic_extensions(&t),
            Err(Error::NotBasicDefault(_))
        ));
    }

    #[test]
    fn conflicting_defaults_give_two_extensions() {
        let t = parse_theory("actions a\nfact P(0)\ndefault P: 0 ~> a\ndefault F: 0 ~> a").unwrap();
        let ext = algebraic_extensions(&t).unwrap();
        assert_eq!(ext.len(), 2);
        for e in &ext {
            assert!(is_fixpoint(&t, &e.p, &e.f).unwrap());
            assert_eq!(e.p.generator().bits() & e.f.generator().bits(), 0);
        }
    }

    #[test]
    fn quotient_can_separate_what_models_identify() {
        // Nothing forces `a` to be non-zero, so no model of F(a) refutes P(a),
        // yet [a] is a non-zero class of the quotient.
        let t = parse_theory("actions a\ndefault F: 0 ~> a").unwrap();
        let phi = f(&t, "~P(a)");
        assert!(algebraic_entails(&t, &phi).unwrap());
        assert!(!crate::defaults::credulous_entails(&t, &phi).unwrap());
    }

    #[test]
    fn disjunctive_facts_do_not_block_algebraic_defaults() {
        let t = parse_theory(
            "actions a b\nfact ~P(a * !b) \\/ ~F(!a * b)\n\
             default P: 0 ~> a * !b\ndefault F: 0 ~> !a * b",
        )
        .unwrap();
        let phi = f(&t, "P(a * !b) /\\ F(!a * b)");
        assert!(algebraic_entails(&t, &phi).unwrap());
        assert!(!crate::defaults::credulous_entails(&t, &phi).unwrap());
    }
}
