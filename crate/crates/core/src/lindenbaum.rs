//! The Lindenbaum-Tarski algebra of a consistent theory.
//!
//! Classes of action terms are sets of alive atoms: an atom is dead when the
//! theory proves its term equal to `0`, and two terms are provably equal
//! exactly when they agree on the alive atoms.

use crate::algebra::{self, AtomSet, Denoter, Ideal, NodeStyle};
use crate::entailment::Prover;
use crate::error::{Error, Result};
use crate::syntax::{ActionTerm, Formula, Modality, Theory, Vocabulary};

fn prover(theory: &Theory) -> Result<Prover> {
    let p = Prover::for_theory(theory)?;
    if !p.consistent() {
        return Err(Error::InconsistentTheory);
    }
    Ok(p)
}

fn dead_with(p: &Prover) -> Result<AtomSet> {
    let v = p.vocabulary();
    let mut dead = AtomSet::empty(v.len());
    for atom in algebra::atoms(v)? {
        let zero = Formula::eq(atom.term(v), ActionTerm::Zero);
        if p.proves(&zero)? {
            dead = AtomSet::new(v.len(), dead.bits() | 1 << atom.index);
        }
    }
    Ok(dead)
}

/// Atoms whose term the theory proves equal to `0`.
pub fn dead_atoms(theory: &Theory) -> Result<AtomSet> {
    dead_with(&prover(theory)?)
}

/// The quotient of the free algebra by provable equality.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    theory: Theory,
    denoter: Denoter,
    alive: AtomSet,
}

/// Builds the quotient algebra of a consistent theory.
pub fn quotient(theory: &Theory) -> Result<QuotientAlgebra> {
    let p = prover(theory)?;
    let dead = dead_with(&p)?;
    Ok(QuotientAlgebra {
        theory: theory.clone(),
        denoter: p.denoter().clone(),
        alive: dead.complement(),
    })
}

impl QuotientAlgebra {
    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.theory.vocabulary
    }

    /// The top element `[1]`.
    pub fn alive(&self) -> AtomSet {
        self.alive
    }

    pub fn zero(&self) -> AtomSet {
        AtomSet::empty(self.alive.arity())
    }

    /// `[α]`, the alive atoms below `α`.
    pub fn class_of(&self, term: &ActionTerm) -> AtomSet {
        AtomSet::new(
            self.alive.arity(),
            self.denoter.bits(term) & self.alive.bits(),
        )
    }

    pub fn contains(&self, e: AtomSet) -> bool {
        e.arity() == self.alive.arity() && e.bits() & !self.alive.bits() == 0
    }

    /// Number of elements, `2^|alive|`.
    pub fn size(&self) -> u128 {
        1u128 << self.alive.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = AtomSet> {
        let arity = self.alive.arity();
        algebra::submasks(self.alive.bits()).map(move |b| AtomSet::new(arity, b))
    }

    pub fn canonical_term(&self, e: AtomSet) -> ActionTerm {
        algebra::canonical_term(e, self.vocabulary())
    }

    /// Short human label for an element: `0`, `1`, or its atom labels.
    pub fn label(&self, e: AtomSet) -> String {
        if e.is_empty() {
            "0".to_string()
        } else if e == self.alive {
            "1".to_string()
        } else {
            let labels: Vec<String> = e.atoms().map(|a| a.label(self.vocabulary())).collect();
            labels.join(" + ")
        }
    }

    pub fn whole(&self) -> Ideal {
        Ideal::principal(self.alive, self.alive).expect("alive is within itself")
    }

    pub fn ideal(&self, generator: AtomSet) -> Result<Ideal> {
        Ideal::principal(generator, self.alive)
    }
}

fn provable_ideal(q: &QuotientAlgebra, modality: Modality) -> Result<Ideal> {
    let p = prover(&q.theory)?;
    let v = q.vocabulary();
    let mut gen = 0u64;
    for atom in q.alive.atoms() {
        if p.proves(&modality.apply(atom.term(v)))? {
            gen |= 1 << atom.index;
        }
    }
    q.ideal(AtomSet::new(v.len(), gen))
}

/// The ideal of classes the theory proves permitted.
pub fn p_lt(q: &QuotientAlgebra) -> Result<Ideal> {
    provable_ideal(q, Modality::Perm)
}

/// The ideal of classes the theory proves forbidden.
pub fn f_lt(q: &QuotientAlgebra) -> Result<Ideal> {
    provable_ideal(q, Modality::Forb)
}

/// Classes lying below some provably non-permitted (or non-forbidden)
/// class, minus the corresponding provable ideal.
///
/// Provable non-permission is upward closed, so the members are either
/// nothing or every element outside the ideal, depending on whether the
/// theory proves `~P(1)` (resp. `~F(1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeonticDual {
    modality: Modality,
    universe: AtomSet,
    excluded: AtomSet,
    active: bool,
}

impl DeonticDual {
    pub fn modality(&self) -> Modality {
        self.modality
    }

    pub fn is_empty(&self) -> bool {
        !self.active || self.excluded == self.universe
    }

    pub fn contains(&self, e: AtomSet) -> bool {
        self.active
            && e.arity() == self.universe.arity()
            && e.bits() & !self.universe.bits() == 0
            && e.bits() & !self.excluded.bits() != 0
    }

    /// Members in increasing bit order.
    pub fn members(&self) -> Vec<AtomSet> {
        let arity = self.universe.arity();
        let mut out: Vec<AtomSet> = algebra::submasks(self.universe.bits())
            .map(|b| AtomSet::new(arity, b))
            .filter(|e| self.contains(*e))
            .collect();
        out.sort_by_key(|e| e.bits());
        out
    }
}

pub fn deontic_dual(q: &QuotientAlgebra, modality: Modality) -> Result<DeonticDual> {
    let p = prover(&q.theory)?;
    let ideal = provable_ideal(q, modality)?;
    let active = p.proves(&Formula::not(modality.apply(ActionTerm::One)))?;
    Ok(DeonticDual {
        modality,
        universe: q.alive,
        excluded: ideal.generator(),
        active,
    })
}

/// `e ≼ D`: some element below `e` belongs to `D`.
pub fn dual_below(e: AtomSet, d: &DeonticDual) -> bool {
    // members are upward closed within the universe
    d.contains(AtomSet::new(e.arity(), e.bits() & d.universe.bits()))
}

/// Quotient algebra together with its provable ideals and duals.
#[derive(Debug, Clone)]
pub struct Lindenbaum {
    pub quotient: QuotientAlgebra,
    pub p_lt: Ideal,
    pub f_lt: Ideal,
    pub p_dual: DeonticDual,
    pub f_dual: DeonticDual,
}

impl Lindenbaum {
    pub fn build(theory: &Theory) -> Result<Self> {
        let quotient = quotient(theory)?;
        Ok(Lindenbaum {
            p_lt: p_lt(&quotient)?,
            f_lt: f_lt(&quotient)?,
            p_dual: deontic_dual(&quotient, Modality::Perm)?,
            f_dual: deontic_dual(&quotient, Modality::Forb)?,
            quotient,
        })
    }

    pub fn provable_ideal(&self, m: Modality) -> &Ideal {
        match m {
            Modality::Perm => &self.p_lt,
            Modality::Forb => &self.f_lt,
        }
    }

    pub fn dual(&self, m: Modality) -> &DeonticDual {
        match m {
            Modality::Perm => &self.p_dual,
            Modality::Forb => &self.f_dual,
        }
    }

    /// Hasse diagram of the quotient with the provable ideals shaded and
    /// dual members outlined.
    pub fn to_dot(&self) -> Result<String> {
        let q = &self.quotient;
        algebra::hasse_dot(
            "quotient",
            q.alive,
            |e| q.label(e),
            |e| {
                let fill = match (self.p_lt.contains(e), self.f_lt.contains(e)) {
                    (true, true) => None,
                    (true, false) => Some("lightgray".to_string()),
                    (false, true) => Some("lightpink".to_string()),
                    (false, false) => None,
                };
                NodeStyle {
                    fill,
                    outline: self.p_dual.contains(e) || self.f_dual.contains(e),
                }
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_theory;

    const DRIVING: &str = "actions d o\nfact (d == o) = 0\nfact P(d)\ndefault P: d ~> o\n";

    fn term(src: &str, v: &Vocabulary) -> ActionTerm {
        crate::syntax::parse_action(src, v).unwrap()
    }

    #[test]
    fn driving_quotient() {
        let t = parse_theory(DRIVING).unwrap();
        let v = t.vocabulary.clone();
        // atoms: 0 = !d!o, 1 = d!o, 2 = !do, 3 = do
        assert_eq!(dead_atoms(&t).unwrap().bits(), 0b1001);
        let lt = Lindenbaum::build(&t).unwrap();
        let q = &lt.quotient;
        assert_eq!(q.alive().bits(), 0b0110);
        assert_eq!(q.size(), 4);
        assert_eq!(q.class_of(&term("d", &v)), q.class_of(&term("d * !o", &v)));
        assert_eq!(q.class_of(&term("d =/= o", &v)), q.alive());
        assert_eq!(lt.p_lt.generator(), q.class_of(&term("d", &v)));
        assert!(lt.f_lt.is_trivial());
        assert!(lt.p_dual.is_empty() && lt.f_dual.is_empty());
    }

    #[test]
    fn driving_with_non_permission() {
        let t = parse_theory(&format!("{DRIVING}fact ~P(o)")).unwrap();
        let v = t.vocabulary.clone();
        let lt = Lindenbaum::build(&t).unwrap();
        let o = lt.quotient.class_of(&term("o", &v));
        assert_eq!(lt.p_lt.generator(), lt.quotient.class_of(&term("d", &v)));
        assert!(lt.f_lt.is_trivial());
        assert!(lt.p_dual.contains(o));
        // literal reading also admits the top
        assert!(lt.p_dual.contains(lt.quotient.alive()));
        assert_eq!(lt.p_dual.members(), vec![o, lt.quotient.alive()]);
        assert!(dual_below(o, &lt.p_dual));
        assert!(!dual_below(
            lt.quotient.class_of(&term("d", &v)),
            &lt.p_dual
        ));
        assert!(lt.f_dual.is_empty());
    }

    #[test]
    fn free_and_degenerate_cases() {
        let t = parse_theory("actions d o").unwrap();
        assert!(dead_atoms(&t).unwrap().is_empty());
        let lt = Lindenbaum::build(&t).unwrap();
        assert_eq!(lt.quotient.size(), 16);
        assert!(lt.p_lt.is_trivial() && lt.f_lt.is_trivial());

        let t = parse_theory("actions a b\nfact a = 0").unwrap();
        assert_eq!(dead_atoms(&t).unwrap().bits(), 0b1010);

        let t = parse_theory("actions a\nfact a = 1").unwrap();
        assert_eq!(quotient(&t).unwrap().size(), 2);

        let t = parse_theory("actions a\nfact F(a)").unwrap();
        assert!(Lindenbaum::build(&t).unwrap().f_dual.is_empty());

        let t = parse_theory("actions a\nfact 0 = 1").unwrap();
        assert!(matches!(quotient(&t), Err(Error::InconsistentTheory)));
    }

    #[test]
    fn dual_matches_literal_definition() {
        for src in [
            "actions a b\nfact ~P(a)",
            "actions a b\nfact P(b)\nfact ~P(a + b)",
            "actions a b\nfact ~F(a * b) \\/ a = 0",
            "actions a b\nfact P(a) \\/ ~P(b)",
            "actions a b c\nfact ~P(a * c)\nfact P(b)\nfact (a == b) = 0",
        ] {
            let t = parse_theory(src).unwrap();
            let lt = Lindenbaum::build(&t).unwrap();
            let p = Prover::for_theory(&t).unwrap();
            let q = &lt.quotient;
            for m in [Modality::Perm, Modality::Forb] {
                let ideal = lt.provable_ideal(m);
                let not_m: Vec<AtomSet> = q
                    .elements()
                    .filter(|x| {
                        p.proves(&Formula::not(m.apply(q.canonical_term(*x))))
                            .unwrap()
                    })
                    .collect();
                let mut literal: Vec<AtomSet> = q
                    .elements()
                    .filter(|e| not_m.iter().any(|x| e.bits() & !x.bits() == 0))
                    .filter(|e| !ideal.contains(*e))
                    .collect();
                literal.sort_by_key(|e| e.bits());
                assert_eq!(lt.dual(m).members(), literal, "{src} {m:?}");
                for e in q.elements() {
                    let brute = literal.iter().any(|d| d.bits() & !e.bits() == 0);
                    assert_eq!(dual_below(e, lt.dual(m)), brute);
                }
            }
        }
    }

    #[test]
    fn ideal_membership_law() {
        let t = parse_theory("actions a b c\nfact P(a + b) \\/ F(c)\nfact P(a * c)\nfact F(b * c)")
            .unwrap();
        let lt = Lindenbaum::build(&t).unwrap();
        let p = Prover::for_theory(&t).unwrap();
        let q = &lt.quotient;
        for e in q.elements() {
            let ct = q.canonical_term(e);
            assert_eq!(
                lt.p_lt.contains(e),
                p.proves(&Formula::perm(ct.clone())).unwrap()
            );
            assert_eq!(lt.f_lt.contains(e), p.proves(&Formula::forb(ct)).unwrap());
        }
        assert!(algebra::ideal_meet_trivial(&lt.p_lt, &lt.f_lt).unwrap());
    }

    #[test]
    fn dot_export() {
        let t = parse_theory(DRIVING).unwrap();
        let dot = Lindenbaum::build(&t).unwrap().to_dot().unwrap();
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("fillcolor=\"lightgray\""));
    }
}
