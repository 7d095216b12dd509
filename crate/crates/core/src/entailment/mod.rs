//! Classical DAL consequence, decided semantically over finite deontic
//! action algebras.
//!
//! A model is a [`StatusModel`]: each atom of the free algebra is dead
//! (denotes `0`), permitted, forbidden or neutral. Alive atoms form the
//! algebra generated by the valuation; the permitted and forbidden ideals
//! are generated by the atoms carrying those statuses. At least one atom
//! must be alive (the algebra is non-degenerate, so `0 ≠ 1`).

mod oracle;
pub(crate) mod solver;

use std::fmt;

use crate::algebra::{self, Atom, AtomSet, Denoter};
use crate::error::{Error, ParseError, Result};
use crate::syntax::{ActionTerm, Formula, Theory, Vocabulary};

pub use oracle::{oracle_entails, oracle_models, ORACLE_MAX_ACTIONS};

use solver::{Assignment, Cube, Node};

/// Status of one atom in a finite model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Dead,
    Permitted,
    Forbidden,
    Neutral,
}

impl Status {
    pub const ALL: [Status; 4] = [
        Status::Dead,
        Status::Permitted,
        Status::Forbidden,
        Status::Neutral,
    ];

    pub fn is_alive(self) -> bool {
        self != Status::Dead
    }

    fn name(self) -> &'static str {
        match self {
            Status::Dead => "dead",
            Status::Permitted => "permitted",
            Status::Forbidden => "forbidden",
            Status::Neutral => "neutral",
        }
    }
}

/// A finite deontic action algebra together with its valuation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatusModel {
    vocabulary: Vocabulary,
    status: Vec<Status>,
}

impl StatusModel {
    /// `status` must list one entry per atom, in atom index order.
    pub fn new(vocabulary: Vocabulary, status: Vec<Status>) -> Result<Self> {
        algebra::check_cap(&vocabulary)?;
        if status.len() != 1 << vocabulary.len() {
            return Err(Error::WidthMismatch {
                left: vocabulary.len(),
                right: status.len().trailing_zeros() as usize,
            });
        }
        Ok(StatusModel { vocabulary, status })
    }

    pub fn uniform(vocabulary: Vocabulary, status: Status) -> Result<Self> {
        let n = 1 << vocabulary.len();
        StatusModel::new(vocabulary, vec![status; n])
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn status(&self, atom: Atom) -> Status {
        self.status[atom.index]
    }

    pub fn statuses(&self) -> &[Status] {
        &self.status
    }

    fn mask(&self, pred: impl Fn(Status) -> bool) -> u64 {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, s)| pred(**s))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn alive(&self) -> AtomSet {
        AtomSet::new(self.vocabulary.len(), self.mask(Status::is_alive))
    }

    pub fn permitted(&self) -> AtomSet {
        AtomSet::new(self.vocabulary.len(), self.mask(|s| s == Status::Permitted))
    }

    pub fn forbidden(&self) -> AtomSet {
        AtomSet::new(self.vocabulary.len(), self.mask(|s| s == Status::Forbidden))
    }

    /// All atoms dead: the one-element algebra, which is excluded.
    pub fn is_degenerate(&self) -> bool {
        self.alive().is_empty()
    }

    fn from_assignment(vocabulary: &Vocabulary, a: &Assignment) -> Self {
        let n = 1usize << vocabulary.len();
        let status = (0..n)
            .map(|i| {
                let q = (a.q_known & a.q_val) >> i & 1 == 1;
                let r = (a.r_known & a.r_val) >> i & 1 == 1;
                match (q, r) {
                    (true, true) => Status::Dead,
                    (true, false) => Status::Permitted,
                    (false, true) => Status::Forbidden,
                    (false, false) => Status::Neutral,
                }
            })
            .collect();
        StatusModel {
            vocabulary: vocabulary.clone(),
            status,
        }
    }
}

impl fmt::Display for StatusModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .status
            .iter()
            .enumerate()
            .map(|(i, s)| {
                format!(
                    "{}: {}",
                    Atom { index: i }.label(&self.vocabulary),
                    s.name()
                )
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Satisfaction in a status model, evaluated directly on the quotient by
/// dead atoms.
pub fn satisfies(m: &StatusModel, phi: &Formula) -> bool {
    let d = Denoter::new(&m.vocabulary).expect("model vocabulary within cap");
    let alive = m.alive().bits();
    let perm = m.permitted().bits();
    let forb = m.forbidden().bits();
    eval(phi, &d, alive, perm, forb)
}

pub(crate) fn eval(phi: &Formula, d: &Denoter, alive: u64, perm: u64, forb: u64) -> bool {
    let ev = |f: &Formula| eval(f, d, alive, perm, forb);
    match phi {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(g) => !ev(g),
        Formula::Or(l, r) => ev(l) || ev(r),
        Formula::And(l, r) => ev(l) && ev(r),
        Formula::Implies(l, r) => !ev(l) || ev(r),
        Formula::Iff(l, r) => ev(l) == ev(r),
        Formula::Eq(a, b) => (d.bits(a) ^ d.bits(b)) & alive == 0,
        Formula::Perm(a) => d.bits(a) & alive & !perm == 0,
        Formula::Forb(a) => d.bits(a) & alive & !forb == 0,
    }
}

/// Outcome of an entailment query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentVerdict {
    pub holds: bool,
    /// A model of the facts falsifying the query, present iff `!holds`.
    pub countermodel: Option<StatusModel>,
}

pub(crate) fn check_formula(f: &Formula, vocab: &Vocabulary) -> Result<()> {
    let mut terms: Vec<&ActionTerm> = Vec::new();
    f.action_terms(&mut terms);
    let mut syms = Vec::new();
    for t in terms {
        t.symbols(&mut syms);
    }
    match syms.into_iter().find(|s| !vocab.contains(s)) {
        Some(bad) => Err(Error::Parse(ParseError::UndeclaredSymbol {
            line: 0,
            column: 0,
            symbol: bad.to_string(),
        })),
        None => Ok(()),
    }
}

/// Model class restricting which statuses each atom may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Frame {
    /// Atoms forced dead.
    pub dead: u64,
    /// Atoms that may not be dead.
    pub alive: u64,
    /// Atoms forced permitted (implies alive).
    pub permitted: u64,
    /// Atoms forced forbidden (implies alive).
    pub forbidden: u64,
}

impl Frame {
    fn start(&self) -> Assignment {
        let q_true = self.dead | self.permitted;
        let r_true = self.dead | self.forbidden;
        let q_known = self.dead | self.permitted | self.forbidden;
        let r_known = q_known;
        Assignment {
            q_known,
            q_val: q_true,
            r_known,
            r_val: r_true,
            alive: self.alive | self.permitted | self.forbidden,
        }
    }
}

/// A compiled set of facts that answers repeated queries.
#[derive(Debug, Clone)]
pub struct Prover {
    denoter: Denoter,
    facts: Vec<Node>,
    frame: Frame,
}

impl Prover {
    pub fn new(vocab: &Vocabulary, facts: &[Formula]) -> Result<Self> {
        Prover::with_frame(vocab, facts, Frame::default())
    }

    pub fn for_theory(theory: &Theory) -> Result<Self> {
        Prover::new(&theory.vocabulary, &theory.facts)
    }

    /// Restricts the model class to `frame`.
    pub fn with_frame(vocab: &Vocabulary, facts: &[Formula], frame: Frame) -> Result<Self> {
        let denoter = Denoter::new(vocab)?;
        for f in facts {
            check_formula(f, vocab)?;
        }
        let mut nodes: Vec<Node> = facts.iter().map(|f| solver::compile(f, &denoter)).collect();
        // non-degeneracy: some atom is alive
        let full = denoter.full();
        nodes.push(Node::Lit {
            positive: false,
            cube: Cube { q: full, r: full },
        });
        Ok(Prover {
            denoter,
            facts: nodes,
            frame,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        self.denoter.vocabulary()
    }

    pub fn denoter(&self) -> &Denoter {
        &self.denoter
    }

    /// A model of the facts plus `extra`, if one exists.
    pub fn find_model(&self, extra: &[Formula]) -> Result<Option<StatusModel>> {
        let mut nodes = self.facts.clone();
        for f in extra {
            check_formula(f, self.vocabulary())?;
            nodes.push(solver::compile(f, &self.denoter));
        }
        Ok(solver::solve(&nodes, self.frame.start())
            .map(|a| StatusModel::from_assignment(self.vocabulary(), &a)))
    }

    pub fn entails(&self, phi: &Formula) -> Result<EntailmentVerdict> {
        let negated = Formula::not(phi.clone());
        let countermodel = self.find_model(std::slice::from_ref(&negated))?;
        Ok(EntailmentVerdict {
            holds: countermodel.is_none(),
            countermodel,
        })
    }

    /// Shorthand for `entails(phi)?.holds`.
    pub fn proves(&self, phi: &Formula) -> Result<bool> {
        Ok(self.entails(phi)?.holds)
    }

    pub fn consistent(&self) -> bool {
        solver::solve(&self.facts, self.frame.start()).is_some()
    }
}

/// Whether the facts of `theory` entail `phi`.
pub fn entails(theory: &Theory, phi: &Formula) -> Result<EntailmentVerdict> {
    Prover::for_theory(theory)?.entails(phi)
}

/// Whether some model satisfies every fact of `theory`.
pub fn consistent(theory: &Theory) -> Result<bool> {
    Ok(Prover::for_theory(theory)?.consistent())
}

/// Consequence from an arbitrary formula set.
pub fn entails_from(vocab: &Vocabulary, facts: &[Formula], phi: &Formula) -> Result<bool> {
    Ok(Prover::new(vocab, facts)?.entails(phi)?.holds)
}

/// Consistency of an arbitrary formula set.
pub fn consistent_set(vocab: &Vocabulary, facts: &[Formula]) -> Result<bool> {
    Ok(Prover::new(vocab, facts)?.consistent())
}
