//! Recursive-descent parser for the line-oriented theory format.
//!
//! Precedence, tightest first: actions `!` > `*` > `+` > `==`/`=/=`;
//! formulas `~` > `/\` > `\/` > `->` (right-assoc) > `<->`.
//! A parenthesis in formula position is ambiguous between an action operand
//! of `=` and a grouped formula, so atoms try the equality reading first and
//! backtrack.

use crate::error::ParseError;

use super::ast::{
    is_identifier, ActionTerm, BasicDeonticDefault, DefaultRule, Formula, Modality, NormalDefault,
    Theory, Vocabulary, RESERVED,
};
use super::transform::{desugar_equiv, desugar_nequiv};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Plus,
    Star,
    Bang,
    LParen,
    RParen,
    Tilde,
    AndOp,
    OrOp,
    Arrow,
    DoubleArrow,
    Equals,
    Equiv,
    NotEquiv,
    DefaultArrow,
    LeadsTo,
    Colon,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::AndOp => "`/\\`".into(),
            Tok::OrOp => "`\\/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Equiv => "`==`".into(),
            Tok::NotEquiv => "`=/=`".into(),
            Tok::DefaultArrow => "`=>`".into(),
            Tok::LeadsTo => "`~>`".into(),
            Tok::Colon => "`:`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    column: usize,
}

fn lex(src: &str, line: usize) -> Result<Vec<Spanned>, ParseError> {
    const SYMBOLS: &[(&str, Tok)] = &[
        ("<->", Tok::DoubleArrow),
        ("=/=", Tok::NotEquiv),
        ("==", Tok::Equiv),
        ("=>", Tok::DefaultArrow),
        ("->", Tok::Arrow),
        ("~>", Tok::LeadsTo),
        ("/\\", Tok::AndOp),
        ("\\/", Tok::OrOp),
        ("=", Tok::Equals),
        ("~", Tok::Tilde),
        ("+", Tok::Plus),
        ("*", Tok::Star),
        ("!", Tok::Bang),
        ("(", Tok::LParen),
        (")", Tok::RParen),
        (":", Tok::Colon),
    ];
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let column = i + 1;
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let tok = match text.as_str() {
                "0" => Tok::Zero,
                "1" => Tok::One,
                _ => {
                    return Err(ParseError::Syntax {
                        line,
                        column,
                        message: format!("unexpected `{text}`; only 0 and 1 are constants"),
                    })
                }
            };
            out.push(Spanned { tok, column });
            continue;
        }
        for (sym, tok) in SYMBOLS {
            let n = sym.chars().count();
            if i + n <= chars.len() && chars[i..i + n].iter().copied().eq(sym.chars()) {
                out.push(Spanned {
                    tok: tok.clone(),
                    column,
                });
                i += n;
                continue 'outer;
            }
        }
        return Err(ParseError::Syntax {
            line,
            column,
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_column: usize,
    vocab: Option<&'a Vocabulary>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &str, line: usize, vocab: Option<&'a Vocabulary>) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src, line)?,
            pos: 0,
            line,
            end_column: src.chars().count() + 1,
            vocab,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn column_of(err: &ParseError) -> usize {
        match err {
            ParseError::Syntax { column, .. } | ParseError::UndeclaredSymbol { column, .. } => {
                *column
            }
            _ => 0,
        }
    }

    // ---- actions ----

    fn action(&mut self) -> PResult<ActionTerm> {
        let mut lhs = self.join()?;
        loop {
            if self.eat(&Tok::Equiv) {
                let rhs = self.join()?;
                lhs = desugar_equiv(&lhs, &rhs);
            } else if self.eat(&Tok::NotEquiv) {
                let rhs = self.join()?;
                lhs = desugar_nequiv(&lhs, &rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn join(&mut self) -> PResult<ActionTerm> {
        let mut lhs = self.meet()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.meet()?;
            lhs = ActionTerm::join(lhs, rhs);
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> PResult<ActionTerm> {
        let mut lhs = self.action_unary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.action_unary()?;
            lhs = ActionTerm::meet(lhs, rhs);
        }
        Ok(lhs)
    }

    fn action_unary(&mut self) -> PResult<ActionTerm> {
        let column = self.column();
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(ActionTerm::complement(self.action_unary()?))
            }
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(ActionTerm::Zero)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(ActionTerm::One)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.action()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                if RESERVED.contains(&name.as_str()) {
                    return Err(self.error(format!("`{name}` is reserved, not an action")));
                }
                if let Some(v) = self.vocab {
                    if !v.contains(&name) {
                        return Err(ParseError::UndeclaredSymbol {
                            line: self.line,
                            column,
                            symbol: name,
                        });
                    }
                }
                self.pos += 1;
                Ok(ActionTerm::Basic(name))
            }
            _ => Err(self.unexpected("an action")),
        }
    }

    // ---- formulas ----

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DoubleArrow) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::OrOp) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.formula_unary()?;
        while self.eat(&Tok::AndOp) {
            let rhs = self.formula_unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn formula_unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.formula_unary()?));
        }
        self.formula_atom()
    }

    fn modal(&mut self, m: Modality) -> PResult<Formula> {
        self.pos += 2;
        let a = self.action()?;
        self.expect(Tok::RParen)?;
        Ok(m.apply(a))
    }

    fn formula_atom(&mut self) -> PResult<Formula> {
        match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Ident(s)), _) if s == "true" => {
                self.pos += 1;
                return Ok(Formula::Top);
            }
            (Some(Tok::Ident(s)), _) if s == "false" => {
                self.pos += 1;
                return Ok(Formula::Bottom);
            }
            (Some(Tok::Ident(s)), Some(Tok::LParen)) if s == "P" => {
                return self.modal(Modality::Perm)
            }
            (Some(Tok::Ident(s)), Some(Tok::LParen)) if s == "F" => {
                return self.modal(Modality::Forb)
            }
            _ => {}
        }
        let start = self.pos;
        let eq_err = match self.equality() {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        if matches!(eq_err, ParseError::UndeclaredSymbol { .. }) {
            return Err(eq_err);
        }
        self.pos = start;
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let grouped = self.formula().and_then(|f| {
                self.expect(Tok::RParen)?;
                Ok(f)
            });
            match grouped {
                Ok(f) => Ok(f),
                Err(e) => {
                    if Self::column_of(&e) >= Self::column_of(&eq_err) {
                        Err(e)
                    } else {
                        Err(eq_err)
                    }
                }
            }
        } else {
            Err(eq_err)
        }
    }

    fn equality(&mut self) -> PResult<Formula> {
        let lhs = self.action()?;
        if !self.eat(&Tok::Equals) {
            return Err(self.unexpected("`=`"));
        }
        let rhs = self.action()?;
        Ok(Formula::eq(lhs, rhs))
    }
}

fn with_line(err: ParseError, line: usize) -> ParseError {
    match err {
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
        ParseError::DuplicateVocabulary { .. } => ParseError::DuplicateVocabulary { line },
        ParseError::MissingVocabulary { .. } => ParseError::MissingVocabulary { line },
        ParseError::ReservedIdentifier { symbol, .. } => {
            ParseError::ReservedIdentifier { line, symbol }
        }
        ParseError::DuplicateSymbol { symbol, .. } => ParseError::DuplicateSymbol { line, symbol },
        ParseError::InvalidIdentifier { symbol, .. } => {
            ParseError::InvalidIdentifier { line, symbol }
        }
    }
}

/// Parses a single formula over `vocab`.
pub fn parse_formula(src: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src, 1, Some(vocab))?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a single action term over `vocab`.
pub fn parse_action(src: &str, vocab: &Vocabulary) -> Result<ActionTerm, ParseError> {
    let mut p = Parser::new(src, 1, Some(vocab))?;
    let a = p.action()?;
    p.finish()?;
    Ok(a)
}

/// Parses the body of a `default` line (without the keyword).
pub fn parse_default(src: &str, vocab: &Vocabulary) -> Result<DefaultRule, ParseError> {
    let mut p = Parser::new(src, 1, Some(vocab))?;
    let d = default_body(&mut p)?;
    p.finish()?;
    Ok(d)
}

fn default_body(p: &mut Parser<'_>) -> PResult<DefaultRule> {
    let modality = match (p.peek(), p.peek_at(1)) {
        (Some(Tok::Ident(s)), Some(Tok::Colon)) if s == "P" => Some(Modality::Perm),
        (Some(Tok::Ident(s)), Some(Tok::Colon)) if s == "F" => Some(Modality::Forb),
        _ => None,
    };
    if let Some(m) = modality {
        p.pos += 2;
        let ante = p.action()?;
        p.expect(Tok::LeadsTo)?;
        let cons = p.action()?;
        return Ok(DefaultRule::Basic(BasicDeonticDefault::new(m, ante, cons)));
    }
    let pre = p.formula()?;
    p.expect(Tok::DefaultArrow)?;
    let cons = p.formula()?;
    Ok(DefaultRule::General(NormalDefault::new(pre, cons)))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses a whole theory file.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut vocab: Option<Vocabulary> = None;
    let mut facts = Vec::new();
    let mut defaults = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let keyword_end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let keyword = &trimmed[..keyword_end];
        // column offset of the remainder within the original line
        let offset = line.chars().count() - trimmed[keyword_end..].chars().count();
        let rest = &trimmed[keyword_end..];
        let shift = |e: ParseError| -> ParseError {
            match with_line(e, line_no) {
                ParseError::Syntax {
                    line,
                    column,
                    message,
                } => ParseError::Syntax {
                    line,
                    column: column + offset,
                    message,
                },
                ParseError::UndeclaredSymbol {
                    line,
                    column,
                    symbol,
                } => ParseError::UndeclaredSymbol {
                    line,
                    column: column + offset,
                    symbol,
                },
                other => other,
            }
        };
        match keyword {
            "actions" => {
                if vocab.is_some() {
                    return Err(ParseError::DuplicateVocabulary { line: line_no });
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.is_empty() {
                    return Err(ParseError::Syntax {
                        line: line_no,
                        column: offset + 1,
                        message: "`actions` needs at least one identifier".into(),
                    });
                }
                for n in &names {
                    if RESERVED.contains(n) {
                        return Err(ParseError::ReservedIdentifier {
                            line: line_no,
                            symbol: (*n).to_string(),
                        });
                    }
                    if !is_identifier(n) {
                        return Err(ParseError::InvalidIdentifier {
                            line: line_no,
                            symbol: (*n).to_string(),
                        });
                    }
                }
                vocab = Some(Vocabulary::new(names).map_err(|e| with_line(e, line_no))?);
            }
            "fact" | "default" => {
                let v = vocab
                    .as_ref()
                    .ok_or(ParseError::MissingVocabulary { line: line_no })?;
                let mut p = Parser::new(rest, line_no, Some(v)).map_err(shift)?;
                if keyword == "fact" {
                    let f = p.formula().map_err(shift)?;
                    p.finish().map_err(shift)?;
                    facts.push(f);
                } else {
                    let d = default_body(&mut p).map_err(shift)?;
                    p.finish().map_err(shift)?;
                    defaults.push(d);
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: line.chars().count() - trimmed.chars().count() + 1,
                    message: format!(
                        "unknown directive `{other}` (expected actions, fact or default)"
                    ),
                })
            }
        }
    }
    let vocabulary = vocab.ok_or(ParseError::MissingVocabulary { line: 0 })?;
    Ok(Theory {
        vocabulary,
        facts,
        defaults,
    })
}
