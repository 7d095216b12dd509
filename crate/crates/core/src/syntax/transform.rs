use super::ast::{ActionTerm, Formula};

/// `α ≡ β` as `(α * β) + (!α * !β)`.
pub fn desugar_equiv(a: &ActionTerm, b: &ActionTerm) -> ActionTerm {
    ActionTerm::join(
        ActionTerm::meet(a.clone(), b.clone()),
        ActionTerm::meet(
            ActionTerm::complement(a.clone()),
            ActionTerm::complement(b.clone()),
        ),
    )
}

/// `α ≢ β` as `(α * !β) + (!α * β)`.
pub fn desugar_nequiv(a: &ActionTerm, b: &ActionTerm) -> ActionTerm {
    ActionTerm::join(
        ActionTerm::meet(a.clone(), ActionTerm::complement(b.clone())),
        ActionTerm::meet(ActionTerm::complement(a.clone()), b.clone()),
    )
}

fn verum() -> Formula {
    Formula::eq(ActionTerm::Zero, ActionTerm::Zero)
}

/// Rewrites `And`, `Implies`, `Iff`, `Top` and `Bottom` into `Not`/`Or`.
/// `Top` becomes `0 = 0`.
pub fn desugar_derived(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => Formula::not(desugar_derived(g)),
        Formula::Or(l, r) => Formula::or(desugar_derived(l), desugar_derived(r)),
        Formula::And(l, r) => Formula::not(Formula::or(
            Formula::not(desugar_derived(l)),
            Formula::not(desugar_derived(r)),
        )),
        Formula::Implies(l, r) => Formula::or(Formula::not(desugar_derived(l)), desugar_derived(r)),
        Formula::Iff(l, r) => {
            let (l, r) = (desugar_derived(l), desugar_derived(r));
            let forward = Formula::or(Formula::not(l.clone()), r.clone());
            let backward = Formula::or(Formula::not(r), l);
            Formula::not(Formula::or(Formula::not(forward), Formula::not(backward)))
        }
        Formula::Top => verum(),
        Formula::Bottom => Formula::not(verum()),
        atom @ (Formula::Eq(..) | Formula::Perm(_) | Formula::Forb(_)) => atom.clone(),
    }
}

/// Negation normal form: `Not` appears only directly above `=`, `P` or `F`
/// atoms, and only `Not`, `Or`, `And` are used.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Not(g) => nnf(g, !positive),
        Formula::Or(l, r) if positive => Formula::or(nnf(l, true), nnf(r, true)),
        Formula::Or(l, r) => Formula::and(nnf(l, false), nnf(r, false)),
        Formula::And(l, r) if positive => Formula::and(nnf(l, true), nnf(r, true)),
        Formula::And(l, r) => Formula::or(nnf(l, false), nnf(r, false)),
        Formula::Implies(l, r) if positive => Formula::or(nnf(l, false), nnf(r, true)),
        Formula::Implies(l, r) => Formula::and(nnf(l, true), nnf(r, false)),
        Formula::Iff(l, r) if positive => Formula::or(
            Formula::and(nnf(l, true), nnf(r, true)),
            Formula::and(nnf(l, false), nnf(r, false)),
        ),
        Formula::Iff(l, r) => Formula::or(
            Formula::and(nnf(l, true), nnf(r, false)),
            Formula::and(nnf(l, false), nnf(r, true)),
        ),
        Formula::Top => nnf(&verum(), positive),
        Formula::Bottom => nnf(&verum(), !positive),
        atom => {
            if positive {
                atom.clone()
            } else {
                Formula::not(atom.clone())
            }
        }
    }
}

/// True when `f` is in the shape `to_nnf` produces.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::Perm(_) | Formula::Forb(_) => true,
        Formula::Not(g) => matches!(**g, Formula::Eq(..) | Formula::Perm(_) | Formula::Forb(_)),
        Formula::And(l, r) | Formula::Or(l, r) => is_nnf(l) && is_nnf(r),
        _ => false,
    }
}

/// True when only `Not`, `Or` and atoms occur.
pub fn is_primitive(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::Perm(_) | Formula::Forb(_) => true,
        Formula::Not(g) => is_primitive(g),
        Formula::Or(l, r) => is_primitive(l) && is_primitive(r),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> ActionTerm {
        ActionTerm::basic(s)
    }

    #[test]
    fn equiv_shapes() {
        let e = desugar_equiv(&b("d"), &b("o"));
        assert_eq!(e.to_string(), "d * o + !d * !o");
        let n = desugar_nequiv(&b("d"), &b("o"));
        assert_eq!(n.to_string(), "d * !o + !d * o");
    }

    #[test]
    fn nnf_examples() {
        let pa = Formula::perm(b("a"));
        let fb = Formula::forb(b("b"));
        assert_eq!(
            to_nnf(&Formula::not(Formula::or(pa.clone(), fb.clone()))),
            Formula::and(Formula::not(pa.clone()), Formula::not(fb.clone()))
        );
        assert_eq!(to_nnf(&Formula::not(Formula::not(pa.clone()))), pa);
        assert_eq!(
            to_nnf(&Formula::not(Formula::implies(pa.clone(), fb.clone()))),
            Formula::and(pa, Formula::not(fb))
        );
    }

    #[test]
    fn shapes_are_recognized() {
        let f = Formula::iff(
            Formula::Top,
            Formula::not(Formula::and(Formula::perm(b("a")), Formula::Bottom)),
        );
        assert!(is_nnf(&to_nnf(&f)));
        assert!(is_primitive(&desugar_derived(&f)));
        assert!(!is_nnf(&f));
    }
}
