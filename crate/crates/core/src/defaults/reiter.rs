use std::collections::HashSet;
use std::fmt;

use crate::entailment::Prover;
use crate::error::{Error, Result};
use crate::syntax::{Formula, NormalDefault, Theory};

/// Largest default set explored exhaustively.
pub const MAX_DEFAULTS: usize = 8;

/// An application order of defaults, each prerequisite derivable and the
/// accumulated consequents consistent with the facts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratingSequence {
    /// Positions in the theory's default list.
    pub indices: Vec<usize>,
    pub steps: Vec<NormalDefault>,
    pub closed: bool,
}

impl GeneratingSequence {
    pub fn consequents(&self) -> impl Iterator<Item = &Formula> {
        self.steps.iter().map(|d| &d.consequent)
    }
}

impl fmt::Display for GeneratingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("[]");
        }
        let parts: Vec<String> = self.steps.iter().map(|d| format!("({d})")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `Cn(facts ∪ consequents)` of a closed generating sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntacticExtension {
    pub generators: Vec<Formula>,
    pub witness: GeneratingSequence,
}

impl SyntacticExtension {
    pub fn prover(&self, theory: &Theory) -> Result<Prover> {
        Prover::new(&theory.vocabulary, &self.generators)
    }

    /// The consequents the witness added to the facts.
    pub fn added(&self) -> impl Iterator<Item = &Formula> {
        self.witness.consequents()
    }
}

pub(crate) fn checked_defaults(theory: &Theory) -> Result<Vec<NormalDefault>> {
    let defaults = theory.normal_defaults();
    if defaults.len() > MAX_DEFAULTS {
        return Err(Error::TooManyDefaults {
            actual: defaults.len(),
            limit: MAX_DEFAULTS,
        });
    }
    Ok(defaults)
}

fn generators(theory: &Theory, defaults: &[NormalDefault], order: &[usize]) -> Vec<Formula> {
    let mut out = theory.facts.clone();
    out.extend(order.iter().map(|&i| defaults[i].consequent.clone()));
    out
}

/// Defaults that extend the sequence `order`: prerequisite derivable,
/// consequent consistent and not yet derivable.
fn productive(theory: &Theory, defaults: &[NormalDefault], order: &[usize]) -> Result<Vec<usize>> {
    let base = generators(theory, defaults, order);
    let prover = Prover::new(&theory.vocabulary, &base)?;
    let mut out = Vec::new();
    for (i, d) in defaults.iter().enumerate() {
        if order.contains(&i) || !prover.proves(&d.prerequisite)? {
            continue;
        }
        if prover.proves(&d.consequent)? {
            continue;
        }
        if prover
            .find_model(std::slice::from_ref(&d.consequent))?
            .is_some()
        {
            out.push(i);
        }
    }
    Ok(out)
}

/// All closed generating sequences, one per reachable set of applied
/// defaults, in lexicographic order of default positions.
pub fn generating_sequences(theory: &Theory) -> Result<Vec<GeneratingSequence>> {
    let defaults = checked_defaults(theory)?;
    if !Prover::for_theory(theory)?.consistent() {
        return Err(Error::InconsistentTheory);
    }
    let mut seen: HashSet<u32> = HashSet::new();
    let mut found = Vec::new();
    let mut order = Vec::new();
    explore(theory, &defaults, &mut order, 0, &mut seen, &mut found)?;
    found.sort();
    Ok(found)
}

fn explore(
    theory: &Theory,
    defaults: &[NormalDefault],
    order: &mut Vec<usize>,
    applied: u32,
    seen: &mut HashSet<u32>,
    found: &mut Vec<GeneratingSequence>,
) -> Result<()> {
    if !seen.insert(applied) {
        return Ok(());
    }
    let next = productive(theory, defaults, order)?;
    if next.is_empty() {
        found.push(GeneratingSequence {
            indices: order.clone(),
            steps: order.iter().map(|&i| defaults[i].clone()).collect(),
            closed: true,
        });
        return Ok(());
    }
    for i in next {
        order.push(i);
        explore(theory, defaults, order, applied | 1 << i, seen, found)?;
        order.pop();
    }
    Ok(())
}

fn mutually_entail(theory: &Theory, a: &[Formula], b: &[Formula]) -> Result<bool> {
    let pa = Prover::new(&theory.vocabulary, a)?;
    for f in b {
        if !pa.proves(f)? {
            return Ok(false);
        }
    }
    let pb = Prover::new(&theory.vocabulary, b)?;
    for f in a {
        if !pb.proves(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reiter extensions of the theory, one per distinct deductive closure.
pub fn reiter_extensions(theory: &Theory) -> Result<Vec<SyntacticExtension>> {
    let defaults = checked_defaults(theory)?;
    let mut out: Vec<SyntacticExtension> = Vec::new();
    for seq in generating_sequences(theory)? {
        let gens = generators(theory, &defaults, &seq.indices);
        let mut duplicate = false;
        for e in &out {
            if mutually_entail(theory, &e.generators, &gens)? {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            out.push(SyntacticExtension {
                generators: gens,
                witness: seq,
            });
        }
    }
    Ok(out)
}

/// The first extension (in canonical order) containing `phi`.
pub fn credulous_witness(theory: &Theory, phi: &Formula) -> Result<Option<SyntacticExtension>> {
    for e in reiter_extensions(theory)? {
        if e.prover(theory)?.proves(phi)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Whether `phi` holds in some extension.
pub fn credulous_entails(theory: &Theory, phi: &Formula) -> Result<bool> {
    Ok(credulous_witness(theory, phi)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_theory};

    pub(crate) const DRIVING: &str =
        "actions d o\nfact (d == o) = 0\nfact P(d)\ndefault P: d ~> o\n";
    pub(crate) const COMPETING: &str = "actions a b c\nfact P(a)\nfact ~P(b) \\/ ~P(c)\n\
                                          default P(a) => P(b)\ndefault P(a) => P(c)\n";

    fn f(t: &Theory, s: &str) -> Formula {
        parse_formula(s, &t.vocabulary).unwrap()
    }

    #[test]
    fn driving_has_one_extension() {
        let t = parse_theory(DRIVING).unwrap();
        let seqs = generating_sequences(&t).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].indices, vec![0]);
        assert!(seqs[0].closed);
        let ext = reiter_extensions(&t).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(
            ext[0].added().cloned().collect::<Vec<_>>(),
            vec![f(&t, "P(o)")]
        );
        assert!(credulous_entails(&t, &f(&t, "P(d + o)")).unwrap());
        assert!(credulous_entails(&t, &f(&t, "P(d)")).unwrap());
    }

    #[test]
    fn non_permission_blocks_the_default() {
        let t = parse_theory(&format!("{DRIVING}fact ~P(o)")).unwrap();
        let ext = reiter_extensions(&t).unwrap();
        assert_eq!(ext.len(), 1);
        assert!(ext[0].witness.steps.is_empty());
        assert!(!credulous_entails(&t, &f(&t, "P(d + o)")).unwrap());
    }

    #[test]
    fn no_defaults() {
        let t = parse_theory("actions a\nfact P(a)").unwrap();
        let seqs = generating_sequences(&t).unwrap();
        assert_eq!(seqs.len(), 1);
        assert!(seqs[0].steps.is_empty());
    }

    #[test]
    fn competing_defaults() {
        let t = parse_theory(COMPETING).unwrap();
        let ext = reiter_extensions(&t).unwrap();
        assert_eq!(ext.len(), 2);
        assert_eq!(
            ext[0].added().cloned().collect::<Vec<_>>(),
            vec![f(&t, "P(b)")]
        );
        assert_eq!(
            ext[1].added().cloned().collect::<Vec<_>>(),
            vec![f(&t, "P(c)")]
        );
        assert!(credulous_entails(&t, &f(&t, "P(b)")).unwrap());
        assert!(credulous_entails(&t, &f(&t, "P(c)")).unwrap());
        assert!(!credulous_entails(&t, &f(&t, "P(b) /\\ P(c)")).unwrap());
    }

    #[test]
    fn inconsistent_theories_are_rejected() {
        let t = parse_theory("actions a\nfact 0 = 1").unwrap();
        assert!(matches!(
            reiter_extensions(&t),
            Err(Error::InconsistentTheory)
        ));
    }

    #[test]
    fn equivalent_orders_collapse() {
        let t = parse_theory(
            "actions a b\ndefault true => P(a)\ndefault true => P(b)\ndefault true => P(a + b)",
        )
        .unwrap();
        let ext = reiter_extensions(&t).unwrap();
        assert_eq!(ext.len(), 1);
    }
}
