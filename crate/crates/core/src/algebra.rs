//! Finite Boolean algebras over a vocabulary.
//!
//! The free algebra on `n` basic actions has `2^n` atoms; an atom is a total
//! in/out assignment and its index packs that assignment, bit `i` being the
//! polarity of vocabulary symbol `i`. Every element is the join of the atoms
//! below it, so elements are stored as bit sets over atom indices (one `u64`
//! for `n <= 6`). Ideals of a finite algebra are principal and are stored by
//! their generator.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{ActionTerm, Vocabulary};

/// Largest vocabulary the engine accepts (64 atoms, one machine word).
pub const MAX_ACTIONS: usize = 6;

/// Bit mask with the low `2^n` bits set.
pub fn full_mask(n: usize) -> u64 {
    let width = 1usize << n;
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub(crate) fn check_cap(vocab: &Vocabulary) -> Result<()> {
    if vocab.len() > MAX_ACTIONS {
        return Err(Error::VocabularyTooLarge {
            actual: vocab.len(),
            limit: MAX_ACTIONS,
        });
    }
    Ok(())
}

/// Iterates over all sub-masks of `mask`, from `mask` down to `0`.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A minimal non-zero element of the free algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub index: usize,
}

impl Atom {
    /// Whether vocabulary symbol `symbol` is "in" for this atom.
    pub fn includes(self, symbol: usize) -> bool {
        self.index >> symbol & 1 == 1
    }

    /// The meet of literals naming this atom, in vocabulary order.
    pub fn term(self, vocab: &Vocabulary) -> ActionTerm {
        vocab
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let lit = ActionTerm::basic(s.as_str());
                if self.includes(i) {
                    lit
                } else {
                    ActionTerm::complement(lit)
                }
            })
            .reduce(ActionTerm::meet)
            .unwrap_or(ActionTerm::One)
    }

    /// Compact name such as `d!o`.
    pub fn label(self, vocab: &Vocabulary) -> String {
        vocab
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if self.includes(i) {
                    s.clone()
                } else {
                    format!("!{s}")
                }
            })
            .collect()
    }
}

/// All `2^n` atoms in index order.
pub fn atoms(vocab: &Vocabulary) -> Result<Vec<Atom>> {
    check_cap(vocab)?;
    Ok((0..1usize << vocab.len())
        .map(|index| Atom { index })
        .collect())
}

/// An element of the free algebra over `arity` basic actions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet {
    bits: u64,
    arity: u8,
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = 1usize << self.arity;
        write!(f, "AtomSet({:0w$b})", self.bits, w = width)
    }
}

impl AtomSet {
    pub fn new(arity: usize, bits: u64) -> Self {
        debug_assert!(arity <= MAX_ACTIONS);
        AtomSet {
            bits: bits & full_mask(arity),
            arity: arity as u8,
        }
    }

    pub fn empty(arity: usize) -> Self {
        AtomSet::new(arity, 0)
    }

    pub fn full(arity: usize) -> Self {
        AtomSet::new(arity, full_mask(arity))
    }

    pub fn from_atoms(arity: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let bits = atoms.into_iter().fold(0u64, |acc, a| acc | 1 << a.index);
        AtomSet::new(arity, bits)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn arity(self) -> usize {
        self.arity as usize
    }

    pub fn width(self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, atom: Atom) -> bool {
        atom.index < self.width() && self.bits >> atom.index & 1 == 1
    }

    pub fn atoms(self) -> impl Iterator<Item = Atom> {
        bits(self.bits).map(|index| Atom { index })
    }

    fn same_width(self, other: AtomSet) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::WidthMismatch {
                left: self.arity(),
                right: other.arity(),
            });
        }
        Ok(())
    }

    pub fn union(self, other: AtomSet) -> Result<AtomSet> {
        self.same_width(other)?;
        Ok(AtomSet::new(self.arity(), self.bits | other.bits))
    }

    pub fn intersection(self, other: AtomSet) -> Result<AtomSet> {
        self.same_width(other)?;
        Ok(AtomSet::new(self.arity(), self.bits & other.bits))
    }

    pub fn difference(self, other: AtomSet) -> Result<AtomSet> {
        self.same_width(other)?;
        Ok(AtomSet::new(self.arity(), self.bits & !other.bits))
    }

    pub fn complement(self) -> AtomSet {
        AtomSet::new(self.arity(), !self.bits)
    }

    pub fn is_subset(self, other: AtomSet) -> Result<bool> {
        self.same_width(other)?;
        Ok(self.bits & !other.bits == 0)
    }
}

/// Precomputed denotations of the basic actions of a vocabulary.
#[derive(Debug, Clone)]
pub struct Denoter {
    vocab: Vocabulary,
    basics: Vec<u64>,
    full: u64,
}

impl Denoter {
    pub fn new(vocab: &Vocabulary) -> Result<Self> {
        check_cap(vocab)?;
        let n = vocab.len();
        let basics = (0..n)
            .map(|i| {
                (0..1usize << n)
                    .filter(|a| a >> i & 1 == 1)
                    .fold(0u64, |acc, a| acc | 1 << a)
            })
            .collect();
        Ok(Denoter {
            vocab: vocab.clone(),
            basics,
            full: full_mask(n),
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn full(&self) -> u64 {
        self.full
    }

    /// Raw denotation. Symbols outside the vocabulary denote `0`; callers
    /// validate terms first.
    pub fn bits(&self, t: &ActionTerm) -> u64 {
        match t {
            ActionTerm::Zero => 0,
            ActionTerm::One => self.full,
            ActionTerm::Basic(s) => self.vocab.index_of(s).map_or(0, |i| self.basics[i]),
            ActionTerm::Join(l, r) => self.bits(l) | self.bits(r),
            ActionTerm::Meet(l, r) => self.bits(l) & self.bits(r),
            ActionTerm::Complement(c) => !self.bits(c) & self.full,
        }
    }

    pub fn denote(&self, t: &ActionTerm) -> AtomSet {
        AtomSet::new(self.vocab.len(), self.bits(t))
    }
}

/// The set of atoms below `term`.
pub fn denote(term: &ActionTerm, vocab: &Vocabulary) -> Result<AtomSet> {
    let mut syms = Vec::new();
    term.symbols(&mut syms);
    if let Some(bad) = syms.iter().find(|s| !vocab.contains(s)) {
        return Err(Error::Parse(crate::error::ParseError::UndeclaredSymbol {
            line: 0,
            column: 0,
            symbol: (*bad).to_string(),
        }));
    }
    Ok(Denoter::new(vocab)?.denote(term))
}

/// The order of the algebra: `e1 ⊑ e2` iff `e1 = e1 · e2`.
pub fn leq(e1: AtomSet, e2: AtomSet) -> Result<bool> {
    e1.is_subset(e2)
}

/// Join of the atom terms below `e`, in index order; `0` for the empty set.
pub fn canonical_term(e: AtomSet, vocab: &Vocabulary) -> ActionTerm {
    e.atoms()
        .map(|a| a.term(vocab))
        .reduce(ActionTerm::join)
        .unwrap_or(ActionTerm::Zero)
}

/// A (necessarily principal) ideal of the algebra of subsets of `universe`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    generator: AtomSet,
    universe: AtomSet,
}

impl Ideal {
    pub fn principal(generator: AtomSet, universe: AtomSet) -> Result<Self> {
        if !generator.is_subset(universe)? {
            return Err(Error::OutsideUniverse);
        }
        Ok(Ideal {
            generator,
            universe,
        })
    }

    /// The ideal `{0}`.
    pub fn zero(universe: AtomSet) -> Self {
        Ideal {
            generator: AtomSet::empty(universe.arity()),
            universe,
        }
    }

    pub fn generator(&self) -> AtomSet {
        self.generator
    }

    pub fn universe(&self) -> AtomSet {
        self.universe
    }

    /// Membership law: `e ∈ I` iff `e ⊑ generator`.
    pub fn contains(&self, e: AtomSet) -> bool {
        e.arity == self.generator.arity && e.bits & !self.generator.bits == 0
    }

    pub fn is_whole(&self) -> bool {
        self.generator == self.universe
    }

    pub fn is_trivial(&self) -> bool {
        self.generator.is_empty()
    }

    /// Number of members, `2^|generator|`.
    pub fn size(&self) -> u128 {
        1u128 << self.generator.len()
    }

    pub fn members(&self) -> impl Iterator<Item = AtomSet> {
        let arity = self.generator.arity();
        submasks(self.generator.bits).map(move |b| AtomSet::new(arity, b))
    }
}

/// The smallest ideal containing every element of `base`.
pub fn generated_ideal(base: &[AtomSet], universe: AtomSet) -> Result<Ideal> {
    let mut gen = AtomSet::empty(universe.arity());
    for &e in base {
        if !e.is_subset(universe)? {
            return Err(Error::OutsideUniverse);
        }
        gen = gen.union(e)?;
    }
    Ideal::principal(gen, universe)
}

/// Whether two ideals share only the zero element.
pub fn ideal_meet_trivial(i: &Ideal, j: &Ideal) -> Result<bool> {
    if i.universe != j.universe {
        return Err(Error::UniverseMismatch);
    }
    Ok(i.generator.bits & j.generator.bits == 0)
}

/// Visual attributes of one node of a Hasse diagram.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeStyle {
    pub fill: Option<String>,
    pub outline: bool,
}

/// Largest universe `hasse_dot` will draw (64 nodes).
pub const MAX_DOT_ATOMS: usize = 6;

/// DOT text for the Hasse diagram of the subsets of `universe`: one node per
/// element labelled by `label`, one edge per cover pair.
pub fn hasse_dot(
    name: &str,
    universe: AtomSet,
    label: impl Fn(AtomSet) -> String,
    style: impl Fn(AtomSet) -> NodeStyle,
) -> Result<String> {
    if universe.len() > MAX_DOT_ATOMS {
        return Err(Error::AlgebraTooLarge {
            alive: universe.len(),
            limit: MAX_DOT_ATOMS,
        });
    }
    let arity = universe.arity();
    let mut elements: Vec<u64> = submasks(universe.bits).collect();
    elements.sort_by_key(|b| (b.count_ones(), *b));
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", name.replace('"', "\\\"")));
    out.push_str("  rankdir=BT;\n  node [shape=box, style=rounded];\n");
    for &b in &elements {
        let e = AtomSet::new(arity, b);
        let st = style(e);
        let mut attrs = vec![format!("label=\"{}\"", label(e).replace('"', "\\\""))];
        let mut styles = vec!["rounded"];
        if let Some(fill) = &st.fill {
            styles.push("filled");
            attrs.push(format!("fillcolor=\"{fill}\""));
        }
        if st.outline {
            styles.push("bold");
            attrs.push("penwidth=3".to_string());
        }
        attrs.push(format!("style=\"{}\"", styles.join(",")));
        out.push_str(&format!("  e{b} [{}];\n", attrs.join(", ")));
    }
    for &b in &elements {
        for a in bits(universe.bits & !b) {
            out.push_str(&format!("  e{b} -> e{};\n", b | 1 << a));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(names: &[&str]) -> Vocabulary {
        Vocabulary::new(names.iter().copied()).unwrap()
    }

    fn b(s: &str) -> ActionTerm {
        ActionTerm::basic(s)
    }

    #[test]
    fn atom_enumeration() {
        let v = vocab(&["d", "o"]);
        let labels: Vec<String> = atoms(&v).unwrap().iter().map(|a| a.label(&v)).collect();
        assert_eq!(labels, ["!d!o", "d!o", "!do", "do"]);
        assert_eq!(atoms(&vocab(&["a"])).unwrap().len(), 2);
        assert_eq!(atoms(&vocab(&["a", "b", "c"])).unwrap().len(), 8);
        let big = vocab(&["a", "b", "c", "d", "e", "f", "g"]);
        assert!(matches!(atoms(&big), Err(Error::VocabularyTooLarge { .. })));
    }

    #[test]
    fn denotations() {
        let v = vocab(&["d", "o"]);
        assert!(denote(&ActionTerm::Zero, &v).unwrap().is_empty());
        assert_eq!(denote(&ActionTerm::One, &v).unwrap().bits(), 0b1111);
        assert_eq!(
            denote(&ActionTerm::join(b("d"), b("o")), &v)
                .unwrap()
                .bits(),
            0b1110
        );
        assert_eq!(
            denote(
                &ActionTerm::complement(ActionTerm::join(b("d"), b("o"))),
                &v
            )
            .unwrap()
            .bits(),
            0b0001
        );
        assert!(denote(&b("x"), &v).is_err());
    }

    #[test]
    fn atom_terms_denote_themselves() {
        let v = vocab(&["a", "b", "c"]);
        for a in atoms(&v).unwrap() {
            assert_eq!(denote(&a.term(&v), &v).unwrap().bits(), 1 << a.index);
        }
    }

    #[test]
    fn order() {
        let e = |bits| AtomSet::new(2, bits);
        assert!(leq(e(0), e(0b1010)).unwrap());
        assert!(leq(e(0b0010), e(0b1010)).unwrap());
        assert!(!leq(e(0b0110), e(0b0010)).unwrap());
        assert!(matches!(
            leq(AtomSet::new(1, 1), AtomSet::new(2, 1)),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn generated_ideals() {
        let u = AtomSet::full(2);
        let e = |bits| AtomSet::new(2, bits);
        let i = generated_ideal(&[], u).unwrap();
        assert!(i.is_trivial());
        assert_eq!(i.members().collect::<Vec<_>>(), vec![e(0)]);
        let i = generated_ideal(&[e(0b0010)], u).unwrap();
        assert_eq!(i.generator(), e(0b0010));
        assert_eq!(i.size(), 2);
        let i = generated_ideal(&[e(0b0010), e(0b0100)], u).unwrap();
        assert_eq!(i.generator(), e(0b0110));
        assert_eq!(i.members().count(), 4);
        let small = AtomSet::new(2, 0b0011);
        assert_eq!(
            generated_ideal(&[e(0b0100)], small),
            Err(Error::OutsideUniverse)
        );
    }

    #[test]
    fn meet_triviality() {
        let u = AtomSet::full(2);
        let id = |bits| Ideal::principal(AtomSet::new(2, bits), u).unwrap();
        assert!(ideal_meet_trivial(&id(0b0010), &id(0b0100)).unwrap());
        assert!(!ideal_meet_trivial(&id(0b1010), &id(0b1000)).unwrap());
        assert!(ideal_meet_trivial(&id(0), &id(0b1111)).unwrap());
        let other = Ideal::zero(AtomSet::new(2, 0b0111));
        assert_eq!(
            ideal_meet_trivial(&id(0), &other),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn canonical_terms() {
        let v = vocab(&["d", "o"]);
        assert_eq!(canonical_term(AtomSet::empty(2), &v), ActionTerm::Zero);
        assert_eq!(
            canonical_term(AtomSet::new(2, 0b0110), &v).to_string(),
            "d * !o + !d * o"
        );
    }

    #[test]
    fn dot_diamond() {
        let u = AtomSet::full(1);
        let v = vocab(&["a"]);
        let dot = hasse_dot(
            "free",
            u,
            |e| canonical_term(e, &v).to_string(),
            |_| NodeStyle::default(),
        )
        .unwrap();
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(dot.matches(" -> ").count(), 4);
        assert!(dot.starts_with("digraph"));
    }
}
