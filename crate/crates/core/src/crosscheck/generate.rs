use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{ActionTerm, BasicDeonticDefault, DefaultRule, Formula, Modality, Vocabulary};

const NAMES: [&str; 3] = ["a", "b", "c"];

pub fn vocabulary<R: Rng>(rng: &mut R, max_actions: usize) -> Vocabulary {
    let n = rng.gen_range(1..=max_actions);
    Vocabulary::new(NAMES[..n].iter().copied()).expect("fixed names are valid")
}

/// Action term of depth at most `depth`.
pub fn term<R: Rng>(rng: &mut R, v: &Vocabulary, depth: usize) -> ActionTerm {
    let leaf = |rng: &mut R| match rng.gen_range(0..10) {
        0 => ActionTerm::Zero,
        1 => ActionTerm::One,
        _ => ActionTerm::basic(v.symbols().choose(rng).expect("non-empty").clone()),
    };
    if depth == 0 || rng.gen_bool(0.4) {
        return leaf(rng);
    }
    match rng.gen_range(0..3) {
        0 => ActionTerm::join(term(rng, v, depth - 1), term(rng, v, depth - 1)),
        1 => ActionTerm::meet(term(rng, v, depth - 1), term(rng, v, depth - 1)),
        _ => ActionTerm::complement(term(rng, v, depth - 1)),
    }
}

/// `P(t)`, `F(t)`, their negations, or `t = t'`.
pub fn literal<R: Rng>(rng: &mut R, v: &Vocabulary) -> Formula {
    let t = term(rng, v, 2);
    match rng.gen_range(0..5) {
        0 => Formula::perm(t),
        1 => Formula::forb(t),
        2 => Formula::not(Formula::perm(t)),
        3 => Formula::not(Formula::forb(t)),
        _ => Formula::eq(t, term(rng, v, 2)),
    }
}

/// A literal or a disjunction of two.
pub fn fact<R: Rng>(rng: &mut R, v: &Vocabulary) -> Formula {
    if rng.gen_bool(0.25) {
        Formula::or(literal(rng, v), literal(rng, v))
    } else {
        literal(rng, v)
    }
}

/// A fact-shaped formula, or a conjunction of two.
pub fn query<R: Rng>(rng: &mut R, v: &Vocabulary) -> Formula {
    if rng.gen_bool(0.2) {
        Formula::and(fact(rng, v), fact(rng, v))
    } else {
        fact(rng, v)
    }
}

pub fn basic_default<R: Rng>(rng: &mut R, v: &Vocabulary) -> DefaultRule {
    let modality = if rng.gen_bool(0.5) {
        Modality::Perm
    } else {
        Modality::Forb
    };
    DefaultRule::Basic(BasicDeonticDefault::new(
        modality,
        term(rng, v, 2),
        term(rng, v, 2),
    ))
}
