use std::fmt;

use crate::error::ParseError;

/// Tokens that can never name a basic action.
pub const RESERVED: &[&str] = &["0", "1", "P", "F", "true", "false"];

/// The ordered, finite set of basic action symbols a theory talks about.
///
/// Declaration order fixes atom indexing: bit `i` of an atom index is the
/// polarity of `symbols[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: Vec<String>,
}

impl Vocabulary {
    pub fn new<I, S>(symbols: I) -> Result<Self, ParseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for s in symbols {
            let s = s.into();
            if RESERVED.contains(&s.as_str()) {
                return Err(ParseError::ReservedIdentifier { line: 0, symbol: s });
            }
            if !is_identifier(&s) {
                return Err(ParseError::InvalidIdentifier { line: 0, symbol: s });
            }
            if out.contains(&s) {
                return Err(ParseError::DuplicateSymbol { line: 0, symbol: s });
            }
            out.push(s);
        }
        if out.is_empty() {
            return Err(ParseError::Syntax {
                line: 0,
                column: 0,
                message: "vocabulary must declare at least one action".into(),
            });
        }
        Ok(Vocabulary { symbols: out })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index_of(symbol).is_some()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Action terms over the vocabulary's basic actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionTerm {
    Basic(String),
    Join(Box<ActionTerm>, Box<ActionTerm>),
    Meet(Box<ActionTerm>, Box<ActionTerm>),
    Complement(Box<ActionTerm>),
    Zero,
    One,
}

impl ActionTerm {
    pub fn basic(s: impl Into<String>) -> Self {
        ActionTerm::Basic(s.into())
    }

    pub fn join(l: ActionTerm, r: ActionTerm) -> Self {
        ActionTerm::Join(Box::new(l), Box::new(r))
    }

    pub fn meet(l: ActionTerm, r: ActionTerm) -> Self {
        ActionTerm::Meet(Box::new(l), Box::new(r))
    }

    pub fn complement(t: ActionTerm) -> Self {
        ActionTerm::Complement(Box::new(t))
    }

    /// Visits every basic symbol occurrence.
    pub fn symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ActionTerm::Basic(s) => out.push(s),
            ActionTerm::Join(l, r) | ActionTerm::Meet(l, r) => {
                l.symbols(out);
                r.symbols(out);
            }
            ActionTerm::Complement(t) => t.symbols(out),
            ActionTerm::Zero | ActionTerm::One => {}
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ActionTerm::Basic(_) | ActionTerm::Zero | ActionTerm::One => 0,
            ActionTerm::Join(l, r) | ActionTerm::Meet(l, r) => 1 + l.depth().max(r.depth()),
            ActionTerm::Complement(t) => 1 + t.depth(),
        }
    }
}

/// DAL formulas. `And`, `Implies`, `Iff`, `Top` and `Bottom` are derived
/// connectives kept for faithful printing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Eq(ActionTerm, ActionTerm),
    Perm(ActionTerm),
    Forb(ActionTerm),
    Top,
    Bottom,
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn eq(l: ActionTerm, r: ActionTerm) -> Self {
        Formula::Eq(l, r)
    }

    pub fn perm(a: ActionTerm) -> Self {
        Formula::Perm(a)
    }

    pub fn forb(a: ActionTerm) -> Self {
        Formula::Forb(a)
    }

    /// Left-nested conjunction; `Top` for an empty list.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    pub fn action_terms<'a>(&'a self, out: &mut Vec<&'a ActionTerm>) {
        match self {
            Formula::Not(f) => f.action_terms(out),
            Formula::Or(l, r)
            | Formula::And(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.action_terms(out);
                r.action_terms(out);
            }
            Formula::Eq(a, b) => {
                out.push(a);
                out.push(b);
            }
            Formula::Perm(a) | Formula::Forb(a) => out.push(a),
            Formula::Top | Formula::Bottom => {}
        }
    }

    /// True when every basic symbol is declared in `vocab`.
    pub fn is_over(&self, vocab: &Vocabulary) -> bool {
        let mut terms = Vec::new();
        self.action_terms(&mut terms);
        let mut syms = Vec::new();
        for t in terms {
            t.symbols(&mut syms);
        }
        syms.iter().all(|s| vocab.contains(s))
    }
}

/// Which deontic operator a basic default talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Perm,
    Forb,
}

impl Modality {
    pub fn apply(self, a: ActionTerm) -> Formula {
        match self {
            Modality::Perm => Formula::Perm(a),
            Modality::Forb => Formula::Forb(a),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Modality::Perm => 'P',
            Modality::Forb => 'F',
        }
    }
}

/// A normal default `prerequisite => consequent`; the justification is the
/// consequent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalDefault {
    pub prerequisite: Formula,
    pub consequent: Formula,
}

impl NormalDefault {
    pub fn new(prerequisite: Formula, consequent: Formula) -> Self {
        NormalDefault {
            prerequisite,
            consequent,
        }
    }

    pub fn justification(&self) -> &Formula {
        &self.consequent
    }

    /// Recognizes `P(a) => P(b)` and `F(a) => F(b)`.
    pub fn as_basic(&self) -> Option<BasicDeonticDefault> {
        match (&self.prerequisite, &self.consequent) {
            (Formula::Perm(a), Formula::Perm(b)) => Some(BasicDeonticDefault::new(
                Modality::Perm,
                a.clone(),
                b.clone(),
            )),
            (Formula::Forb(a), Formula::Forb(b)) => Some(BasicDeonticDefault::new(
                Modality::Forb,
                a.clone(),
                b.clone(),
            )),
            _ => None,
        }
    }
}

/// `P: a ~> b` or `F: a ~> b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicDeonticDefault {
    pub modality: Modality,
    pub antecedent: ActionTerm,
    pub consequent: ActionTerm,
}

impl BasicDeonticDefault {
    pub fn new(modality: Modality, antecedent: ActionTerm, consequent: ActionTerm) -> Self {
        BasicDeonticDefault {
            modality,
            antecedent,
            consequent,
        }
    }

    pub fn to_normal(&self) -> NormalDefault {
        NormalDefault::new(
            self.modality.apply(self.antecedent.clone()),
            self.modality.apply(self.consequent.clone()),
        )
    }
}

/// A default as written in a theory file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DefaultRule {
    Basic(BasicDeonticDefault),
    General(NormalDefault),
}

impl DefaultRule {
    pub fn to_normal(&self) -> NormalDefault {
        match self {
            DefaultRule::Basic(b) => b.to_normal(),
            DefaultRule::General(n) => n.clone(),
        }
    }

    pub fn as_basic(&self) -> Option<BasicDeonticDefault> {
        match self {
            DefaultRule::Basic(b) => Some(b.clone()),
            DefaultRule::General(n) => n.as_basic(),
        }
    }
}

/// Facts and defaults over a declared vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub vocabulary: Vocabulary,
    pub facts: Vec<Formula>,
    pub defaults: Vec<DefaultRule>,
}

impl Theory {
    pub fn new(vocabulary: Vocabulary) -> Self {
        Theory {
            vocabulary,
            facts: Vec::new(),
            defaults: Vec::new(),
        }
    }

    pub fn with_facts(vocabulary: Vocabulary, facts: Vec<Formula>) -> Self {
        Theory {
            vocabulary,
            facts,
            defaults: Vec::new(),
        }
    }

    /// Same vocabulary and defaults, one more fact.
    pub fn with_fact(&self, fact: Formula) -> Self {
        let mut t = self.clone();
        t.facts.push(fact);
        t
    }

    pub fn normal_defaults(&self) -> Vec<NormalDefault> {
        self.defaults.iter().map(DefaultRule::to_normal).collect()
    }

    /// All defaults as basic deontic defaults, or the first one that is not.
    pub fn basic_defaults(&self) -> Result<Vec<BasicDeonticDefault>, NormalDefault> {
        self.defaults
            .iter()
            .map(|d| d.as_basic().ok_or_else(|| d.to_normal()))
            .collect()
    }
}

impl fmt::Display for ActionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::render_action(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::render_formula(self))
    }
}

impl fmt::Display for NormalDefault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.prerequisite, self.consequent)
    }
}

impl fmt::Display for BasicDeonticDefault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ~> {}",
            self.modality.letter(),
            self.antecedent,
            self.consequent
        )
    }
}

impl fmt::Display for DefaultRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefaultRule::Basic(b) => b.fmt(f),
            DefaultRule::General(n) => n.fmt(f),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "actions {}", self.vocabulary.symbols().join(" "))?;
        for fact in &self.facts {
            writeln!(f, "fact {fact}")?;
        }
        for d in &self.defaults {
            writeln!(f, "default {d}")?;
        }
        Ok(())
    }
}
