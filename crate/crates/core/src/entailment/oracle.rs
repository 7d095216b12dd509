//! Exhaustive reference semantics for small vocabularies.
//!
//! Enumerates every non-degenerate status model and evaluates formulas with
//! an element-wise interpretation that shares no code with the solver.

use super::{check_formula, Status, StatusModel};
use crate::error::{Error, Result};
use crate::syntax::{ActionTerm, Formula, Vocabulary};

pub const ORACLE_MAX_ACTIONS: usize = 3;

/// Every model with at least one alive atom.
pub fn oracle_models(vocab: &Vocabulary) -> Result<Vec<StatusModel>> {
    if vocab.len() > ORACLE_MAX_ACTIONS {
        return Err(Error::VocabularyTooLarge {
            actual: vocab.len(),
            limit: ORACLE_MAX_ACTIONS,
        });
    }
    let atoms = 1usize << vocab.len();
    let total = 1usize << (2 * atoms);
    let mut out = Vec::new();
    for code in 0..total {
        let status: Vec<Status> = (0..atoms)
            .map(|i| Status::ALL[code >> (2 * i) & 3])
            .collect();
        if status.iter().all(|s| !s.is_alive()) {
            continue;
        }
        out.push(StatusModel {
            vocabulary: vocab.clone(),
            status,
        });
    }
    Ok(out)
}

/// Membership of each atom in the denotation of `t`.
fn atoms_of(t: &ActionTerm, vocab: &Vocabulary) -> Vec<bool> {
    let n = 1usize << vocab.len();
    match t {
        ActionTerm::Zero => vec![false; n],
        ActionTerm::One => vec![true; n],
        ActionTerm::Basic(s) => {
            let i = vocab.index_of(s).expect("checked symbol");
            (0..n).map(|a| a >> i & 1 == 1).collect()
        }
        ActionTerm::Join(l, r) => atoms_of(l, vocab)
            .into_iter()
            .zip(atoms_of(r, vocab))
            .map(|(x, y)| x || y)
            .collect(),
        ActionTerm::Meet(l, r) => atoms_of(l, vocab)
            .into_iter()
            .zip(atoms_of(r, vocab))
            .map(|(x, y)| x && y)
            .collect(),
        ActionTerm::Complement(c) => atoms_of(c, vocab).into_iter().map(|x| !x).collect(),
    }
}

fn holds(m: &StatusModel, f: &Formula) -> bool {
    let v = &m.vocabulary;
    let live = |t: &ActionTerm| -> Vec<Status> {
        atoms_of(t, v)
            .into_iter()
            .zip(&m.status)
            .filter(|(inside, s)| *inside && s.is_alive())
            .map(|(_, s)| *s)
            .collect()
    };
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(g) => !holds(m, g),
        Formula::Or(l, r) => holds(m, l) || holds(m, r),
        Formula::And(l, r) => holds(m, l) && holds(m, r),
        Formula::Implies(l, r) => !holds(m, l) || holds(m, r),
        Formula::Iff(l, r) => holds(m, l) == holds(m, r),
        Formula::Eq(a, b) => {
            let (x, y) = (atoms_of(a, v), atoms_of(b, v));
            m.status
                .iter()
                .enumerate()
                .all(|(i, s)| !s.is_alive() || x[i] == y[i])
        }
        Formula::Perm(a) => live(a).iter().all(|s| *s == Status::Permitted),
        Formula::Forb(a) => live(a).iter().all(|s| *s == Status::Forbidden),
    }
}

/// Entailment by enumeration of all models over at most three actions.
/// Returns the first countermodel found, if any.
pub fn oracle_entails(
    vocab: &Vocabulary,
    facts: &[Formula],
    phi: &Formula,
) -> Result<Option<StatusModel>> {
    for f in facts.iter().chain(std::iter::once(phi)) {
        check_formula(f, vocab)?;
    }
    Ok(oracle_models(vocab)?
        .into_iter()
        .find(|m| facts.iter().all(|f| holds(m, f)) && !holds(m, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn model_count() {
        let v = Vocabulary::new(["a"]).unwrap();
        // 4^2 assignments minus the all-dead one
        assert_eq!(oracle_models(&v).unwrap().len(), 15);
    }

    #[test]
    fn agrees_with_direct_evaluation() {
        let v = Vocabulary::new(["a", "b"]).unwrap();
        let f = parse_formula("P(a) \\/ F(a * !b) -> a = b", &v).unwrap();
        for m in oracle_models(&v).unwrap() {
            assert_eq!(holds(&m, &f), super::super::satisfies(&m, &f), "{m}");
        }
    }

    #[test]
    fn refuses_large_vocabularies() {
        let v = Vocabulary::new(["a", "b", "c", "d"]).unwrap();
        assert!(oracle_entails(&v, &[], &Formula::Top).is_err());
    }
}
