use thiserror::Error;

use super::{Formula, Signature, SignatureError, SymbolKind, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("lexical error at byte {offset}: unexpected character `{ch}`")]
    Lexical { offset: usize, ch: char },
    #[error("arity mismatch at byte {offset}: {source}")]
    Arity {
        offset: usize,
        source: SignatureError,
    },
    #[error("unbound symbol `{name}` at byte {offset}")]
    UnboundSymbol { offset: usize, name: String },
    #[error("malformed quantifier at byte {offset}: {msg}")]
    MalformedQuantifier { offset: usize, msg: String },
    #[error("syntax error at byte {offset}: expected {expected}")]
    Unexpected { offset: usize, expected: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Lexical { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::UnboundSymbol { offset, .. }
            | ParseError::MalformedQuantifier { offset, .. }
            | ParseError::Unexpected { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Eq,
    Neq,
    ExistsBang,
    Forall,
    Exists,
    Turnstile,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let rest = &text[i..];
        let symbols: &[(&str, Tok)] = &[
            ("<->", Tok::Iff),
            ("|-", Tok::Turnstile),
            ("=>", Tok::Turnstile),
            ("->", Tok::Imp),
            ("!=", Tok::Neq),
            ("E!", Tok::ExistsBang),
            ("∃!", Tok::ExistsBang),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBrack),
            ("]", Tok::RBrack),
            (",", Tok::Comma),
            (".", Tok::Dot),
            ("~", Tok::Not),
            ("¬", Tok::Not),
            ("&", Tok::And),
            ("∧", Tok::And),
            ("|", Tok::Or),
            ("∨", Tok::Or),
            ("→", Tok::Imp),
            ("↔", Tok::Iff),
            ("=", Tok::Eq),
            ("≠", Tok::Neq),
            ("⇒", Tok::Turnstile),
            ("⊢", Tok::Turnstile),
            ("∀", Tok::Forall),
            ("∃", Tok::Exists),
        ];
        if let Some((sym, tok)) = symbols.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((tok.clone(), i));
            for _ in 0..sym.chars().count() {
                it.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = j + d.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            let word = &text[i..end];
            let tok = match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((tok, i));
            continue;
        }
        return Err(ParseError::Lexical { offset: i, ch: c });
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Recursive-descent parser over one input string.
///
/// In strict mode every symbol must already be declared in the signature.
/// In inferring mode unseen symbols are declared on first use; arity
/// conflicts are still errors.
pub struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'s mut Signature,
    infer: bool,
    bound: Vec<String>,
}

impl<'s> Parser<'s> {
    pub fn new(
        text: &str,
        sig: &'s mut Signature,
        infer: bool,
        free_vars: &[String],
    ) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig,
            infer,
            bound: free_vars.to_vec(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::Unexpected {
            offset: self.offset(),
            expected: what.to_string(),
        }
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Tok::End)
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn use_symbol(&mut self, name: &str, kind: SymbolKind, offset: usize) -> Result<(), ParseError> {
        match self.sig.kind_of(name) {
            Some(k) if k == kind => Ok(()),
            Some(_) => {
                // reuse the signature's own conflict report
                let mut probe = self.sig.clone();
                Err(ParseError::Arity {
                    offset,
                    source: probe.declare(name, kind).unwrap_err(),
                })
            }
            None if self.infer => self
                .sig
                .declare(name, kind)
                .map_err(|source| ParseError::Arity { offset, source }),
            None => Err(ParseError::UnboundSymbol {
                offset,
                name: name.to_string(),
            }),
        }
    }

    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.implication()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Ident(x) => Ok(x),
            _ => Err(ParseError::MalformedQuantifier {
                offset,
                msg: "expected a bound variable".into(),
            }),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = matches!(self.bump(), Tok::Forall);
                let x = self.binder()?;
                self.eat(&Tok::Dot);
                self.bound.push(x.clone());
                let body = self.formula();
                self.bound.pop();
                let body = body?;
                Ok(if universal {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                })
            }
            Tok::Ident(ref w)
                if w == "I"
                    && matches!(self.peek_at(1), Tok::Ident(_))
                    && matches!(self.peek_at(2), Tok::LBrack) =>
            {
                self.bump();
                let x = self.binder()?;
                self.bump();
                self.bound.push(x.clone());
                let parts = (|| {
                    let a = self.formula()?;
                    if !self.eat(&Tok::Comma) {
                        return Err(ParseError::MalformedQuantifier {
                            offset: self.offset(),
                            msg: "expected `,` between the two I-operands".into(),
                        });
                    }
                    let b = self.formula()?;
                    if !self.eat(&Tok::RBrack) {
                        return Err(ParseError::MalformedQuantifier {
                            offset: self.offset(),
                            msg: "expected `]` closing the I-operands".into(),
                        });
                    }
                    Ok((a, b))
                })();
                self.bound.pop();
                let (a, b) = parts?;
                Ok(Formula::iq(x, a, b))
            }
            Tok::LParen => {
                // `(` may open a parenthesized formula or a term in `(t) = s`;
                // terms never start with `(` so it is always a formula
                self.bump();
                let a = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            Tok::ExistsBang => {
                self.bump();
                Ok(Formula::Exists(self.term()?))
            }
            Tok::Ident(_) => self.atom(),
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        let Tok::Ident(name) = self.bump() else {
            unreachable!()
        };
        let args = if self.peek() == &Tok::LParen {
            Some(self.arguments()?)
        } else {
            None
        };
        if matches!(self.peek(), Tok::Eq | Tok::Neq) {
            let lhs = self.finish_term(name, args, offset)?;
            let negated = matches!(self.bump(), Tok::Neq);
            let rhs = self.term()?;
            let eq = Formula::Eq(lhs, rhs);
            return Ok(if negated { Formula::not(eq) } else { eq });
        }
        match args {
            Some(args) => {
                self.use_symbol(&name, SymbolKind::Predicate(args.len()), offset)?;
                Ok(Formula::Pred(name, args))
            }
            None => Err(ParseError::Unexpected {
                offset: self.offset(),
                expected: format!("`(` or `=` after `{name}`"),
            }),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn finish_term(
        &mut self,
        name: String,
        args: Option<Vec<Term>>,
        offset: usize,
    ) -> Result<Term, ParseError> {
        match args {
            Some(args) => {
                self.use_symbol(&name, SymbolKind::Function(args.len()), offset)?;
                Ok(Term::App(name, args))
            }
            None if self.bound.contains(&name) => Ok(Term::Var(name)),
            None => {
                self.use_symbol(&name, SymbolKind::Constant, offset)?;
                Ok(Term::Const(name))
            }
        }
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Ident(name) => {
                let args = if self.peek() == &Tok::LParen {
                    Some(self.arguments()?)
                } else {
                    None
                };
                self.finish_term(name, args, offset)
            }
            _ => Err(ParseError::Unexpected {
                offset,
                expected: "a term".into(),
            }),
        }
    }

    /// Comma-separated formulas up to the turnstile or the end.
    pub fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::End) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while self.eat(&Tok::Comma) {
            out.push(self.formula()?);
        }
        Ok(out)
    }

    pub fn sequent(&mut self) -> Result<(Vec<Formula>, Vec<Formula>), ParseError> {
        let ante = self.formula_list()?;
        self.expect(Tok::Turnstile, "`|-`")?;
        let succ = self.formula_list()?;
        self.finish()?;
        Ok((ante, succ))
    }
}

/// Parses a closed formula; all symbols must be declared in `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut sig = sig.clone();
    let mut p = Parser::new(text, &mut sig, false, &[])?;
    let a = p.formula()?;
    p.finish()?;
    Ok(a)
}

/// Parses a formula, declaring unseen symbols in `sig`. Identifiers listed in
/// `free_vars` are read as variables.
pub fn parse_formula_in(
    text: &str,
    sig: &mut Signature,
    free_vars: &[String],
) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, sig, true, free_vars)?;
    let a = p.formula()?;
    p.finish()?;
    Ok(a)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut sig = sig.clone();
    let mut p = Parser::new(text, &mut sig, false, &[])?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term_in(
    text: &str,
    sig: &mut Signature,
    free_vars: &[String],
) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig, true, free_vars)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses `A1, ..., An |- B1, ..., Bm`, declaring unseen symbols in `sig`.
pub fn parse_sequent_parts(
    text: &str,
    sig: &mut Signature,
) -> Result<(Vec<Formula>, Vec<Formula>), ParseError> {
    Parser::new(text, sig, true, &[])?.sequent()
}
