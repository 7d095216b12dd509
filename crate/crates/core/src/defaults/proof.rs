use std::collections::HashMap;
use std::fmt;

use super::reiter::{checked_defaults, credulous_witness};
use crate::entailment::{entails_from, Prover};
use crate::error::{Error, ParseError, Result};
use crate::syntax::{
    parse_default, parse_formula, ActionTerm, DefaultRule, Formula, NormalDefault, Theory,
};

/// Why a proof line is there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Premise,
    /// `D1`, `D2`, `D3`, `nondegenerate`, or `valid` for any other
    /// classical validity.
    Axiom(String),
    ModusPonens {
        minor: usize,
        major: usize,
    },
    DefaultDetachment {
        from: usize,
        default: DefaultRule,
    },
    /// Classically entailed by the cited lines.
    Entailed(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

/// A default proof; line references are zero-based internally and printed
/// one-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DefaultProof {
    pub lines: Vec<ProofLine>,
}

impl DefaultProof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn detachments(&self) -> usize {
        self.lines
            .iter()
            .filter(|l| matches!(l.justification, Justification::DefaultDetachment { .. }))
            .count()
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine {
            formula,
            justification,
        });
        self.lines.len() - 1
    }

    /// Reads the text format produced by `Display`.
    pub fn parse(text: &str, theory: &Theory) -> std::result::Result<Self, ParseError> {
        let vocab = &theory.vocabulary;
        let mut proof = DefaultProof::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let err = |message: String| ParseError::Syntax {
                line,
                column: 1,
                message,
            };
            let (head, tag) = content
                .rsplit_once(';')
                .ok_or_else(|| err("expected `<formula> ; <tag>`".into()))?;
            let (index, formula_src) = head
                .split_once('.')
                .ok_or_else(|| err("expected a line number".into()))?;
            let index: usize = index
                .trim()
                .parse()
                .map_err(|_| err(format!("bad line number `{}`", index.trim())))?;
            if index != proof.lines.len() + 1 {
                return Err(err(format!(
                    "expected line {}, found {index}",
                    proof.lines.len() + 1
                )));
            }
            let formula =
                parse_formula(formula_src.trim(), vocab).map_err(|e| relocate(e, line))?;
            let justification = parse_tag(tag.trim(), theory, line)?;
            proof.push(formula, justification);
        }
        Ok(proof)
    }
}

fn relocate(e: ParseError, line: usize) -> ParseError {
    match e {
        ParseError::Syntax {
            column, message, ..
        } => ParseError::Syntax {
            line,
            column,
            message,
        },
        ParseError::UndeclaredSymbol { column, symbol, .. } => ParseError::UndeclaredSymbol {
            line,
            column,
            symbol,
        },
        other => other,
    }
}

fn parse_tag(
    tag: &str,
    theory: &Theory,
    line: usize,
) -> std::result::Result<Justification, ParseError> {
    let err = |message: String| ParseError::Syntax {
        line,
        column: 1,
        message,
    };
    let reference = |s: &str| -> std::result::Result<usize, ParseError> {
        match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(err(format!("bad line reference `{s}`"))),
        }
    };
    let mut words = tag.split_whitespace();
    match words.next() {
        Some("premise") if words.next().is_none() => Ok(Justification::Premise),
        Some("axiom") => match (words.next(), words.next()) {
            (Some(name), None) => Ok(Justification::Axiom(name.to_string())),
            _ => Err(err("expected `axiom <name>`".into())),
        },
        Some("mp") => match (words.next(), words.next(), words.next()) {
            (Some(i), Some(j), None) => Ok(Justification::ModusPonens {
                minor: reference(i)?,
                major: reference(j)?,
            }),
            _ => Err(err("expected `mp <i> <j>`".into())),
        },
        Some("entailed") => Ok(Justification::Entailed(
            words
                .map(reference)
                .collect::<std::result::Result<_, _>>()?,
        )),
        Some("detach") => {
            let rest = tag["detach".len()..].trim_start();
            let (from, default_src) = rest
                .split_once(" by ")
                .ok_or_else(|| err("expected `detach <j> by <default>`".into()))?;
            let default = parse_default(default_src.trim(), &theory.vocabulary)
                .map_err(|e| relocate(e, line))?;
            Ok(Justification::DefaultDetachment {
                from: reference(from.trim())?,
                default,
            })
        }
        _ => Err(err(format!("unknown justification `{tag}`"))),
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Premise => f.write_str("premise"),
            Justification::Axiom(name) => write!(f, "axiom {name}"),
            Justification::ModusPonens { minor, major } => {
                write!(f, "mp {} {}", minor + 1, major + 1)
            }
            Justification::DefaultDetachment { from, default } => {
                write!(f, "detach {} by {default}", from + 1)
            }
            Justification::Entailed(refs) => {
                f.write_str("entailed")?;
                for r in refs {
                    write!(f, " {}", r + 1)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for DefaultProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, l.formula, l.justification)?;
        }
        Ok(())
    }
}

/// Name of the deontic axiom `f` instantiates, accepting either direction of
/// the biconditionals.
pub fn axiom_name(f: &Formula) -> Option<&'static str> {
    let (l, r) = match f {
        Formula::Iff(l, r) | Formula::Implies(l, r) => (&**l, &**r),
        Formula::Not(inner) => {
            return match &**inner {
                Formula::Eq(ActionTerm::Zero, ActionTerm::One) => Some("nondegenerate"),
                _ => None,
            }
        }
        _ => return None,
    };
    deontic_instance(l, r).or_else(|| deontic_instance(r, l))
}

/// `whole <-> parts` for D1, D2 or D3.
fn deontic_instance(whole: &Formula, parts: &Formula) -> Option<&'static str> {
    let Formula::And(x, y) = parts else {
        return None;
    };
    match (whole, &**x, &**y) {
        (Formula::Perm(j), Formula::Perm(a), Formula::Perm(b))
            if *j == ActionTerm::join(a.clone(), b.clone()) =>
        {
            Some("D1")
        }
        (Formula::Forb(j), Formula::Forb(a), Formula::Forb(b))
            if *j == ActionTerm::join(a.clone(), b.clone()) =>
        {
            Some("D2")
        }
        (Formula::Eq(a, ActionTerm::Zero), Formula::Perm(b), Formula::Forb(c))
            if a == b && b == c =>
        {
            Some("D3")
        }
        _ => None,
    }
}

fn axiom_line(f: Formula) -> (Formula, Justification) {
    let name = axiom_name(&f).unwrap_or("valid").to_string();
    (f, Justification::Axiom(name))
}

/// Drops members of `support` while the rest still entails `goal`.
fn minimize(theory: &Theory, support: Vec<Formula>, goal: &Formula) -> Result<Vec<Formula>> {
    let mut kept = support;
    let mut i = 0;
    while i < kept.len() {
        let mut without = kept.clone();
        without.remove(i);
        if entails_from(&theory.vocabulary, &without, goal)? {
            kept = without;
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// Source of a support formula: a fact or the consequent of step `k`.
#[derive(Clone, Copy)]
enum Source {
    Fact,
    Step(usize),
}

struct Builder<'a> {
    theory: &'a Theory,
    steps: Vec<(DefaultRule, NormalDefault)>,
    proof: DefaultProof,
    detached: HashMap<usize, usize>,
}

impl Builder<'_> {
    fn sources(&self, upto: usize) -> Vec<(Formula, Source)> {
        let mut out: Vec<(Formula, Source)> = self
            .theory
            .facts
            .iter()
            .map(|f| (f.clone(), Source::Fact))
            .collect();
        out.extend(
            self.steps[..upto]
                .iter()
                .enumerate()
                .map(|(k, (_, d))| (d.consequent.clone(), Source::Step(k))),
        );
        out
    }

    fn support(&self, upto: usize, goal: &Formula) -> Result<Vec<(Formula, Source)>> {
        let all = self.sources(upto);
        let formulas: Vec<Formula> = all.iter().map(|(f, _)| f.clone()).collect();
        let kept = minimize(self.theory, formulas, goal)?;
        let mut out = Vec::new();
        for f in kept {
            let source = all.iter().find(|(g, _)| *g == f).map(|(_, s)| *s).unwrap();
            out.push((f, source));
        }
        Ok(out)
    }

    /// Line holding the consequent of step `k`, detaching it if needed.
    fn detach(&mut self, k: usize) -> Result<usize> {
        if let Some(&line) = self.detached.get(&k) {
            return Ok(line);
        }
        let (rule, default) = self.steps[k].clone();
        let from = self.derive(k, &default.prerequisite)?;
        let line = self.proof.push(
            default.consequent.clone(),
            Justification::DefaultDetachment {
                from,
                default: rule,
            },
        );
        self.detached.insert(k, line);
        Ok(line)
    }

    /// Line holding `goal`, derived from the facts and the consequents of
    /// the first `upto` steps.
    fn derive(&mut self, upto: usize, goal: &Formula) -> Result<usize> {
        let support = self.support(upto, goal)?;
        if let [(f, source)] = support.as_slice() {
            if f == goal {
                return match source {
                    Source::Fact => Ok(self.proof.push(goal.clone(), Justification::Premise)),
                    Source::Step(k) => self.detach(*k),
                };
            }
        }
        if support.is_empty() {
            let (f, j) = axiom_line(goal.clone());
            return Ok(self.proof.push(f, j));
        }
        let mut refs = Vec::new();
        for (f, source) in &support {
            let line = match source {
                Source::Fact => self.proof.push(f.clone(), Justification::Premise),
                Source::Step(k) => self.detach(*k)?,
            };
            refs.push(line);
        }
        refs.sort_unstable();
        Ok(self.proof.push(goal.clone(), Justification::Entailed(refs)))
    }

    /// The closing segment: consequents, premises, their conjunction, the
    /// implication to the goal, and modus ponens.
    fn conclude(&mut self, upto: usize, goal: &Formula) -> Result<()> {
        let support = self.support(upto, goal)?;
        match support.as_slice() {
            [] => {
                let (f, j) = axiom_line(goal.clone());
                self.proof.push(f, j);
                return Ok(());
            }
            [(f, Source::Fact)] if f == goal => {
                self.proof.push(goal.clone(), Justification::Premise);
                return Ok(());
            }
            [(f, Source::Step(k))] if f == goal => {
                self.detach(*k)?;
                return Ok(());
            }
            _ => {}
        }
        let mut consequent_lines = Vec::new();
        for (_, source) in &support {
            if let Source::Step(k) = source {
                consequent_lines.push(self.detach(*k)?);
            }
        }
        let mut ordered = Vec::new();
        let mut refs = consequent_lines.clone();
        for (f, source) in &support {
            if let Source::Fact = source {
                refs.push(self.proof.push(f.clone(), Justification::Premise));
                ordered.push(f.clone());
            }
        }
        for (f, source) in &support {
            if let Source::Step(_) = source {
                ordered.push(f.clone());
            }
        }
        refs.sort_unstable();
        let (minor, antecedent) = if ordered.len() == 1 {
            (refs[0], ordered.remove(0))
        } else {
            let conj = ordered
                .into_iter()
                .reduce(Formula::and)
                .expect("support is not empty");
            (
                self.proof.push(conj.clone(), Justification::Entailed(refs)),
                conj,
            )
        };
        let (imp, tag) = axiom_line(Formula::implies(antecedent, goal.clone()));
        let major = self.proof.push(imp, tag);
        self.proof
            .push(goal.clone(), Justification::ModusPonens { minor, major });
        Ok(())
    }
}

/// A certificate that `phi` is a credulous consequence, following a
/// generating sequence of an extension containing it.
pub fn build_default_proof(theory: &Theory, phi: &Formula) -> Result<DefaultProof> {
    let ext = credulous_witness(theory, phi)?.ok_or(Error::NotAConsequence)?;
    let steps: Vec<(DefaultRule, NormalDefault)> = ext
        .witness
        .indices
        .iter()
        .map(|&i| (theory.defaults[i].clone(), theory.defaults[i].to_normal()))
        .collect();
    let mut upto = 0;
    loop {
        let mut base = theory.facts.clone();
        base.extend(steps[..upto].iter().map(|(_, d)| d.consequent.clone()));
        if entails_from(&theory.vocabulary, &base, phi)? {
            break;
        }
        upto += 1;
    }
    let mut b = Builder {
        theory,
        steps,
        proof: DefaultProof::default(),
        detached: HashMap::new(),
    };
    b.conclude(upto, phi)?;
    Ok(b.proof)
}

/// Reason a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// Zero-based line, if the problem is local to one line.
    pub line: Option<usize>,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}: {}", l + 1, self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

fn reject(line: Option<usize>, reason: impl Into<String>) -> Rejection {
    Rejection {
        line,
        reason: reason.into(),
    }
}

/// Checks every line's justification, the conclusion, and that the facts
/// together with all lines are consistent.
pub fn verify_default_proof(
    theory: &Theory,
    proof: &DefaultProof,
    phi: &Formula,
) -> std::result::Result<(), Rejection> {
    let defaults = checked_defaults(theory).map_err(|e| reject(None, e.to_string()))?;
    let vocab = &theory.vocabulary;
    let internal = |e: Error| reject(None, e.to_string());
    match proof.conclusion() {
        None => return Err(reject(None, "empty proof")),
        Some(last) if last != phi => {
            return Err(reject(
                Some(proof.lines.len() - 1),
                format!("concludes `{last}`, not `{phi}`"),
            ))
        }
        _ => {}
    }
    for (k, line) in proof.lines.iter().enumerate() {
        let earlier = |i: usize| -> std::result::Result<&Formula, Rejection> {
            if i < k {
                Ok(&proof.lines[i].formula)
            } else {
                Err(reject(
                    Some(k),
                    format!("reference to line {} is not earlier", i + 1),
                ))
            }
        };
        let f = &line.formula;
        match &line.justification {
            Justification::Premise => {
                if !theory.facts.contains(f) {
                    return Err(reject(Some(k), "not a fact of the theory"));
                }
            }
            Justification::Axiom(name) => {
                let ok = match name.as_str() {
                    "D1" | "D2" | "D3" | "nondegenerate" => axiom_name(f) == Some(name.as_str()),
                    "valid" => entails_from(vocab, &[], f).map_err(internal)?,
                    _ => false,
                };
                if !ok {
                    return Err(reject(Some(k), format!("not an instance of axiom {name}")));
                }
            }
            Justification::ModusPonens { minor, major } => {
                let a = earlier(*minor)?;
                let imp = earlier(*major)?;
                if *imp != Formula::implies(a.clone(), f.clone()) {
                    return Err(reject(Some(k), "modus ponens premises do not match"));
                }
            }
            Justification::DefaultDetachment { from, default } => {
                let pre = earlier(*from)?;
                let normal = default.to_normal();
                if !defaults.contains(&normal) {
                    return Err(reject(
                        Some(k),
                        format!("`{default}` is not a default of the theory"),
                    ));
                }
                if normal.prerequisite != *pre || normal.consequent != *f {
                    return Err(reject(
                        Some(k),
                        format!("`{default}` does not detach this line"),
                    ));
                }
            }
            Justification::Entailed(refs) => {
                let mut premises = Vec::new();
                for &r in refs {
                    premises.push(earlier(r)?.clone());
                }
                if !entails_from(vocab, &premises, f).map_err(internal)? {
                    return Err(reject(Some(k), "not entailed by the cited lines"));
                }
            }
        }
    }
    let mut all = theory.facts.clone();
    all.extend(proof.lines.iter().map(|l| l.formula.clone()));
    let consistent = Prover::new(vocab, &all).map_err(internal)?.consistent();
    if !consistent {
        return Err(reject(
            None,
            "facts and proof lines are jointly inconsistent",
        ));
    }
    Ok(())
}

pub fn check_default_proof(theory: &Theory, proof: &DefaultProof, phi: &Formula) -> bool {
    verify_default_proof(theory, proof, phi).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_theory;

    const DRIVING: &str = "actions d o\nfact (d == o) = 0\nfact P(d)\ndefault P: d ~> o\n";

    fn f(t: &Theory, s: &str) -> Formula {
        parse_formula(s, &t.vocabulary).unwrap()
    }

    #[test]
    fn driving_certificate() {
        let t = parse_theory(DRIVING).unwrap();
        let goal = f(&t, "P(d + o)");
        let proof = build_default_proof(&t, &goal).unwrap();
        let text = proof.to_string();
        assert_eq!(
            text,
            "1. P(d) ; premise\n\
             2. P(o) ; detach 1 by P: d ~> o\n\
             3. P(d) ; premise\n\
             4. P(d) /\\ P(o) ; entailed 2 3\n\
             5. P(d) /\\ P(o) -> P(d + o) ; axiom D1\n\
             6. P(d + o) ; mp 4 5\n"
        );
        assert!(check_default_proof(&t, &proof, &goal));
        assert_eq!(DefaultProof::parse(&text, &t).unwrap(), proof);
    }

    #[test]
    fn short_certificates() {
        let t = parse_theory(DRIVING).unwrap();
        let proof = build_default_proof(&t, &f(&t, "P(d)")).unwrap();
        assert_eq!(proof.to_string(), "1. P(d) ; premise\n");
        let proof = build_default_proof(&t, &f(&t, "P(o)")).unwrap();
        assert_eq!(proof.lines.len(), 2);
        assert_eq!(proof.detachments(), 1);
        let proof = build_default_proof(&t, &f(&t, "P(0)")).unwrap();
        assert_eq!(proof.to_string(), "1. P(0) ; axiom valid\n");
        assert!(check_default_proof(&t, &proof, &f(&t, "P(0)")));
    }

    #[test]
    fn blocked_goal_has_no_certificate() {
        let t = parse_theory(&format!("{DRIVING}fact ~P(o)")).unwrap();
        assert!(matches!(
            build_default_proof(&t, &f(&t, "P(d + o)")),
            Err(Error::NotAConsequence)
        ));
    }

    #[test]
    fn mutations_are_rejected() {
        let t = parse_theory(DRIVING).unwrap();
        let goal = f(&t, "P(d + o)");
        let good = build_default_proof(&t, &goal).unwrap().to_string();
        let wrong_default = good.replace("by P: d ~> o", "by P: o ~> d");
        let early = good.replace("detach 1 by", "detach 2 by");
        let unknown = good.replace("by P: d ~> o", "by F: d ~> o");
        for bad in [wrong_default, early, unknown] {
            if let Ok(p) = DefaultProof::parse(&bad, &t) {
                assert!(!check_default_proof(&t, &p, &goal), "{bad}");
            }
        }
        let t2 = parse_theory(&format!("{DRIVING}fact ~P(o)")).unwrap();
        let inconsistent = "1. P(d) ; premise\n2. P(o) ; detach 1 by P: d ~> o\n";
        let p = DefaultProof::parse(inconsistent, &t2).unwrap();
        assert!(!check_default_proof(&t2, &p, &f(&t2, "P(o)")));
    }

    #[test]
    fn literal_consistency_is_not_enough() {
        // the lines alone are consistent; with the facts they are not
        let t = parse_theory("actions a b\nfact P(a)\nfact ~P(b)\ndefault P(a) => P(b)").unwrap();
        let p = DefaultProof::parse(
            "1. P(a) ; premise\n2. P(b) ; detach 1 by P(a) => P(b)\n",
            &t,
        )
        .unwrap();
        assert!(!check_default_proof(&t, &p, &f(&t, "P(b)")));
    }

    #[test]
    fn axiom_recognition() {
        let t = parse_theory("actions a b").unwrap();
        assert_eq!(axiom_name(&f(&t, "P(a + b) <-> P(a) /\\ P(b)")), Some("D1"));
        assert_eq!(axiom_name(&f(&t, "F(a) /\\ F(b) -> F(a + b)")), Some("D2"));
        assert_eq!(axiom_name(&f(&t, "a = 0 -> P(a) /\\ F(a)")), Some("D3"));
        assert_eq!(axiom_name(&f(&t, "~(0 = 1)")), Some("nondegenerate"));
        assert_eq!(axiom_name(&f(&t, "P(a) -> P(a)")), None);
    }

    #[test]
    fn competing_defaults_certificate() {
        let t = parse_theory(
            "actions a b c\nfact P(a)\nfact ~P(b) \\/ ~P(c)\ndefault P(a) => P(b)\ndefault P(a) => P(c)",
        )
        .unwrap();
        let goal = f(&t, "P(b)");
        let proof = build_default_proof(&t, &goal).unwrap();
        assert_eq!(proof.detachments(), 1);
        assert!(check_default_proof(&t, &proof, &goal));
    }
}
