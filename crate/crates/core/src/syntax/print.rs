use super::ast::{ActionTerm, Formula};

// Binding strength; a child printed below its required level is parenthesized.
const A_JOIN: u8 = 1;
const A_MEET: u8 = 2;
const A_UNARY: u8 = 3;

const F_IFF: u8 = 1;
const F_IMPLIES: u8 = 2;
const F_OR: u8 = 3;
const F_AND: u8 = 4;
const F_UNARY: u8 = 5;

pub fn render_action(t: &ActionTerm) -> String {
    let mut out = String::new();
    write_action(&mut out, t, 0);
    out
}

pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0);
    out
}

fn wrap(out: &mut String, needed: bool, body: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
    }
    body(out);
    if needed {
        out.push(')');
    }
}

fn write_action(out: &mut String, t: &ActionTerm, min: u8) {
    match t {
        ActionTerm::Basic(s) => out.push_str(s),
        ActionTerm::Zero => out.push('0'),
        ActionTerm::One => out.push('1'),
        ActionTerm::Complement(c) => {
            out.push('!');
            write_action(out, c, A_UNARY);
        }
        ActionTerm::Join(l, r) => wrap(out, min > A_JOIN, |out| {
            write_action(out, l, A_JOIN);
            out.push_str(" + ");
            write_action(out, r, A_MEET);
        }),
        ActionTerm::Meet(l, r) => wrap(out, min > A_MEET, |out| {
            write_action(out, l, A_MEET);
            out.push_str(" * ");
            write_action(out, r, A_UNARY);
        }),
    }
}

fn write_binary(
    out: &mut String,
    l: &Formula,
    op: &str,
    r: &Formula,
    levels: (u8, u8, u8),
    min: u8,
) {
    let (own, left, right) = levels;
    wrap(out, min > own, |out| {
        write_formula(out, l, left);
        out.push_str(op);
        write_formula(out, r, right);
    });
}

fn write_formula(out: &mut String, f: &Formula, min: u8) {
    match f {
        Formula::Top => out.push_str("true"),
        Formula::Bottom => out.push_str("false"),
        Formula::Perm(a) => {
            out.push_str("P(");
            write_action(out, a, 0);
            out.push(')');
        }
        Formula::Forb(a) => {
            out.push_str("F(");
            write_action(out, a, 0);
            out.push(')');
        }
        Formula::Eq(a, b) => {
            write_action(out, a, 0);
            out.push_str(" = ");
            write_action(out, b, 0);
        }
        Formula::Not(inner) => {
            out.push('~');
            if let Formula::Eq(..) = **inner {
                out.push('(');
                write_formula(out, inner, 0);
                out.push(')');
            } else {
                write_formula(out, inner, F_UNARY);
            }
        }
        Formula::And(l, r) => write_binary(out, l, " /\\ ", r, (F_AND, F_AND, F_UNARY), min),
        Formula::Or(l, r) => write_binary(out, l, " \\/ ", r, (F_OR, F_OR, F_AND), min),
        Formula::Implies(l, r) => {
            write_binary(out, l, " -> ", r, (F_IMPLIES, F_OR, F_IMPLIES), min)
        }
        Formula::Iff(l, r) => write_binary(out, l, " <-> ", r, (F_IFF, F_IFF, F_IMPLIES), min),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::Vocabulary;
    use crate::syntax::parse::{parse_action, parse_formula};

    fn b(s: &str) -> ActionTerm {
        ActionTerm::basic(s)
    }

    #[test]
    fn simple_renderings() {
        assert_eq!(
            render_formula(&Formula::perm(ActionTerm::join(b("d"), b("o")))),
            "P(d + o)"
        );
        assert_eq!(
            render_formula(&Formula::eq(ActionTerm::Zero, ActionTerm::One)),
            "0 = 1"
        );
        assert_eq!(
            render_action(&ActionTerm::complement(ActionTerm::join(b("a"), b("b")))),
            "!(a + b)"
        );
        assert_eq!(
            render_formula(&Formula::not(Formula::eq(b("a"), b("b")))),
            "~(a = b)"
        );
    }

    #[test]
    fn associativity_is_preserved() {
        let vocab = Vocabulary::new(["a", "b", "c"]).unwrap();
        for src in [
            "a + (b + c)",
            "(a + b) + c",
            "a * (b + c)",
            "!(a * b) * c",
            "a + b * c",
        ] {
            let t = parse_action(src, &vocab).unwrap();
            assert_eq!(
                parse_action(&render_action(&t), &vocab).unwrap(),
                t,
                "{src}"
            );
        }
        for src in [
            "(P(a) -> P(b)) -> P(c)",
            "P(a) -> P(b) -> P(c)",
            "P(a) <-> (P(b) <-> P(c))",
            "P(a) /\\ (P(b) /\\ P(c))",
            "~(P(a) \\/ F(b))",
            "~~P(a)",
            "(P(a) \\/ P(b)) /\\ a = b",
        ] {
            let f = parse_formula(src, &vocab).unwrap();
            assert_eq!(
                parse_formula(&render_formula(&f), &vocab).unwrap(),
                f,
                "{src}"
            );
        }
        assert_eq!(
            render_formula(&parse_formula("P(a) /\\ P(b) /\\ P(c)", &vocab).unwrap()),
            "P(a) /\\ P(b) /\\ P(c)"
        );
    }
}
