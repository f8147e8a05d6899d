//! Surface syntax: declarations `name : T.` (optionally `def`), rewrite
//! rules `[x,y] lhs --> rhs.`, arrows, named products, lambdas
//! `x : A => t`, the sort `Type`, wildcards `_` and nestable comments
//! `(; ... ;)`.

use std::fmt;

use thiserror::Error;

use crate::signature::{arity_of, final_codomain, Level, Signature, SymbolInfo};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub def_flag: bool,
    pub name: String,
    pub type_expr: Term,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRule {
    /// Variables as written between the brackets; wildcard freshes are
    /// not listed here.
    pub bound_vars: Vec<String>,
    pub lhs: Term,
    pub rhs: Term,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Declaration(Declaration),
    Rule(RawRule),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

impl SourceFile {
    pub fn declarations(&self) -> impl Iterator<Item = &Declaration> {
        self.items.iter().filter_map(|i| match i {
            Item::Declaration(d) => Some(d),
            _ => None,
        })
    }

    pub fn rules(&self) -> impl Iterator<Item = &RawRule> {
        self.items.iter().filter_map(|i| match i {
            Item::Rule(r) => Some(r),
            _ => None,
        })
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match item {
                Item::Declaration(d) => {
                    if d.def_flag {
                        write!(f, "def ")?;
                    }
                    writeln!(f, "{} : {}.", d.name, d.type_expr)?;
                }
                Item::Rule(r) => {
                    // materialize wildcard freshes so the rule reparses
                    let mut vars = r.bound_vars.clone();
                    for v in r.lhs.free_vars() {
                        if !vars.contains(&v) {
                            vars.push(v);
                        }
                    }
                    writeln!(f, "[{}] {} --> {}.", vars.join(","), r.lhs, r.rhs)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {} but found {found}", expected.join(" or "))]
    Unexpected {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: duplicate rule variable `{name}`")]
    DuplicateBinder {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: unterminated comment")]
    UnterminatedComment { line: usize, col: usize },
    #[error("{line}:{col}: stray character `{ch}`")]
    StrayCharacter { line: usize, col: usize, ch: char },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Def,
    Type,
    Wildcard,
    Colon,
    Dot,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Arrow,     // ->
    LongArrow, // -->
    FatArrow,  // =>
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Def => write!(f, "`def`"),
            Tok::Type => write!(f, "`Type`"),
            Tok::Wildcard => write!(f, "`_`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::LongArrow => write!(f, "`-->`"),
            Tok::FatArrow => write!(f, "`=>`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    loop {
        let (tl, tc) = (line, col);
        let Some(&c) = chars.peek() else {
            out.push(Spanned {
                tok: Tok::Eof,
                line: tl,
                col: tc,
            });
            return Ok(out);
        };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '(' => {
                bump!();
                if chars.peek() == Some(&';') {
                    bump!();
                    let mut depth = 1usize;
                    loop {
                        match bump!() {
                            Some(';') if chars.peek() == Some(&')') => {
                                bump!();
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            Some('(') if chars.peek() == Some(&';') => {
                                bump!();
                                depth += 1;
                            }
                            Some(_) => {}
                            None => {
                                return Err(ParseError::UnterminatedComment { line: tl, col: tc })
                            }
                        }
                    }
                } else {
                    out.push(Spanned {
                        tok: Tok::LParen,
                        line: tl,
                        col: tc,
                    });
                }
            }
            ')' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::RParen,
                    line: tl,
                    col: tc,
                });
            }
            '[' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::LBracket,
                    line: tl,
                    col: tc,
                });
            }
            ']' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::RBracket,
                    line: tl,
                    col: tc,
                });
            }
            ',' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Comma,
                    line: tl,
                    col: tc,
                });
            }
            ':' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Colon,
                    line: tl,
                    col: tc,
                });
            }
            '.' => {
                bump!();
                out.push(Spanned {
                    tok: Tok::Dot,
                    line: tl,
                    col: tc,
                });
            }
            '-' => {
                bump!();
                match (chars.peek() == Some(&'-'), ()) {
                    (true, ()) => {
                        bump!();
                        if bump!() == Some('>') {
                            out.push(Spanned {
                                tok: Tok::LongArrow,
                                line: tl,
                                col: tc,
                            });
                        } else {
                            return Err(ParseError::StrayCharacter {
                                line: tl,
                                col: tc,
                                ch: '-',
                            });
                        }
                    }
                    (false, ()) => {
                        if chars.peek() == Some(&'>') {
                            bump!();
                            out.push(Spanned {
                                tok: Tok::Arrow,
                                line: tl,
                                col: tc,
                            });
                        } else {
                            return Err(ParseError::StrayCharacter {
                                line: tl,
                                col: tc,
                                ch: '-',
                            });
                        }
                    }
                }
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push(Spanned {
                        tok: Tok::FatArrow,
                        line: tl,
                        col: tc,
                    });
                } else {
                    return Err(ParseError::StrayCharacter {
                        line: tl,
                        col: tc,
                        ch: '=',
                    });
                }
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_char(c) {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let tok = match s.as_str() {
                    "def" => Tok::Def,
                    "Type" => Tok::Type,
                    "_" => Tok::Wildcard,
                    _ => Tok::Ident(s),
                };
                out.push(Spanned {
                    tok,
                    line: tl,
                    col: tc,
                });
            }
            other => {
                return Err(ParseError::StrayCharacter {
                    line: tl,
                    col: tc,
                    ch: other,
                })
            }
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    /// Rule variables of the item being parsed; lambda/product binders
    /// stack on top.
    scope: Vec<String>,
    /// Wildcard counter, reset per item; freshes skip declared binders.
    fresh: usize,
    rule_vars: Vec<String>,
}

impl Parser {
    fn new(tokens: Vec<Spanned>) -> Parser {
        Parser {
            tokens,
            pos: 0,
            scope: Vec::new(),
            fresh: 0,
            rule_vars: Vec::new(),
        }
    }

    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_at(&self, off: usize) -> &Spanned {
        &self.tokens[(self.pos + off).min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let s = self.peek();
        ParseError::Unexpected {
            line: s.line,
            col: s.col,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        match &self.peek().tok {
            Tok::Ident(_) => {
                let s = self.advance();
                match s.tok {
                    Tok::Ident(name) => Ok((name, s.line, s.col)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn fresh_wildcard(&mut self) -> String {
        loop {
            self.fresh += 1;
            let name = format!("_{}", self.fresh);
            if !self.rule_vars.contains(&name) {
                return name;
            }
        }
    }

    fn resolve(&self, name: String) -> Term {
        if self.scope.iter().any(|s| s == &name) {
            Term::Var(name)
        } else {
            Term::Symbol(name)
        }
    }

    /// term := prod
    fn term(&mut self) -> Result<Term, ParseError> {
        self.prod()
    }

    /// prod := app ("->" prod)? | "(" IDENT ":" term ")" "->" prod
    fn prod(&mut self) -> Result<Term, ParseError> {
        // the named-product head `( IDENT :` overlaps with parenthesized
        // lambdas; commit only once `) ->` has been seen
        if self.peek().tok == Tok::LParen {
            if let (Tok::Ident(_), Tok::Colon) =
                (&self.peek_at(1).tok, &self.peek_at(2).tok)
            {
                let save = (self.pos, self.fresh);
                if let Some(t) = self.try_named_product()? {
                    return Ok(t);
                }
                (self.pos, self.fresh) = save;
            }
        }
        let lhs = self.app()?;
        if self.peek().tok == Tok::Arrow {
            self.advance();
            let rhs = self.prod()?;
            Ok(Term::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn try_named_product(&mut self) -> Result<Option<Term>, ParseError> {
        self.advance(); // (
        let (name, _, _) = self.expect_ident()?;
        self.advance(); // :
        let domain = match self.term() {
            Ok(t) => t,
            Err(_) => return Ok(None),
        };
        if self.peek().tok != Tok::RParen {
            return Ok(None);
        }
        self.advance();
        if self.peek().tok != Tok::Arrow {
            return Ok(None);
        }
        self.advance();
        self.scope.push(name.clone());
        let codomain = self.prod();
        self.scope.pop();
        Ok(Some(Term::product(name, domain, codomain?)))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek().tok,
            Tok::Ident(_) | Tok::Wildcard | Tok::Type | Tok::LParen
        )
    }

    /// app := atom+
    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    /// atom := IDENT | "_" | "Type" | "(" term ")" | IDENT ":" atom "=>" term
    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                if self.peek_at(1).tok == Tok::Colon {
                    self.advance();
                    self.advance();
                    let annotation = self.atom()?;
                    self.expect(Tok::FatArrow, "`=>`")?;
                    self.scope.push(name.clone());
                    let body = self.term();
                    self.scope.pop();
                    Ok(Term::lambda(name, annotation, body?))
                } else {
                    self.advance();
                    Ok(self.resolve(name))
                }
            }
            Tok::Wildcard => {
                self.advance();
                Ok(Term::Var(self.fresh_wildcard()))
            }
            Tok::Type => {
                self.advance();
                Ok(Term::Sort)
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error(&["a term"])),
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        self.fresh = 0;
        self.rule_vars.clear();
        self.scope.clear();
        match self.peek().tok.clone() {
            Tok::Def => {
                let line = self.peek().line;
                self.advance();
                let (name, _, _) = self.expect_ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let type_expr = self.term()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Item::Declaration(Declaration {
                    def_flag: true,
                    name,
                    type_expr,
                    line,
                }))
            }
            Tok::Ident(_) => {
                let line = self.peek().line;
                let (name, _, _) = self.expect_ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let type_expr = self.term()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Item::Declaration(Declaration {
                    def_flag: false,
                    name,
                    type_expr,
                    line,
                }))
            }
            Tok::LBracket => {
                let line = self.peek().line;
                self.advance();
                let mut bound_vars: Vec<String> = Vec::new();
                if self.peek().tok != Tok::RBracket {
                    loop {
                        let (name, vl, vc) = self.expect_ident()?;
                        if bound_vars.contains(&name) {
                            return Err(ParseError::DuplicateBinder {
                                line: vl,
                                col: vc,
                                name,
                            });
                        }
                        bound_vars.push(name);
                        if self.peek().tok == Tok::Comma {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket, "`]`")?;
                self.rule_vars = bound_vars.clone();
                self.scope = bound_vars.clone();
                let lhs = self.term()?;
                self.expect(Tok::LongArrow, "`-->`")?;
                let rhs = self.term()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Item::Rule(RawRule {
                    bound_vars,
                    lhs,
                    rhs,
                    line,
                }))
            }
            _ => Err(self.error(&["a declaration", "a rule", "end of input"])),
        }
    }
}

/// Parse a whole source file.
pub fn parse(text: &str) -> Result<SourceFile, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(tokens);
    let mut items = Vec::new();
    while p.peek().tok != Tok::Eof {
        items.push(p.item()?);
    }
    Ok(SourceFile { items })
}

/// Parse a single term; names listed in `scope` become variables. Used
/// by tests and diagnostics.
pub fn parse_term(text: &str, scope: &[&str]) -> Result<Term, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(tokens);
    p.scope = scope.iter().map(|s| s.to_string()).collect();
    p.rule_vars = p.scope.clone();
    let t = p.term()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(t)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("line {line}: duplicate declaration of `{name}`")]
    DuplicateDeclaration { name: String, line: usize },
    #[error("line {line}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize },
    #[error("line {line}: rule head `{name}` is not declared")]
    RuleHeadUndeclared { name: String, line: usize },
    #[error("line {line}: free variable `{name}` in a declared type")]
    FreeVariableInType { name: String, line: usize },
}

fn check_names_declared(
    t: &Term,
    sig: &Signature,
    line: usize,
) -> Result<(), SignatureError> {
    match t {
        Term::Var(_) | Term::Sort => Ok(()),
        Term::Symbol(name) => {
            if sig.contains(name) {
                Ok(())
            } else {
                Err(SignatureError::UnknownSymbol {
                    name: name.clone(),
                    line,
                })
            }
        }
        Term::App(h, a) => {
            check_names_declared(h, sig, line)?;
            check_names_declared(a, sig, line)
        }
        Term::Lambda {
            annotation, body, ..
        } => {
            check_names_declared(annotation, sig, line)?;
            check_names_declared(body, sig, line)
        }
        Term::Product {
            domain, codomain, ..
        } => {
            check_names_declared(domain, sig, line)?;
            check_names_declared(codomain, sig, line)
        }
    }
}

/// Build the signature from a parsed file: single pass over the items
/// (symbols must be declared before use), then level and constructor
/// classification once all rule heads are known.
pub fn build_signature(file: &SourceFile) -> Result<Signature, SignatureError> {
    let mut sig = Signature::new();
    let mut rule_heads: Vec<(String, usize)> = Vec::new();

    for item in &file.items {
        match item {
            Item::Declaration(d) => {
                if sig.contains(&d.name) {
                    return Err(SignatureError::DuplicateDeclaration {
                        name: d.name.clone(),
                        line: d.line,
                    });
                }
                if let Some(v) = d.type_expr.free_vars().first() {
                    return Err(SignatureError::FreeVariableInType {
                        name: v.clone(),
                        line: d.line,
                    });
                }
                check_names_declared(&d.type_expr, &sig, d.line)?;
                sig.insert(SymbolInfo {
                    name: d.name.clone(),
                    declared_type: d.type_expr.clone(),
                    level: Level::ObjectFun, // fixed up below
                    arity: arity_of(&d.type_expr),
                    definable: d.def_flag,
                    is_constructor: false,
                });
            }
            Item::Rule(r) => {
                let (head, _) = r.lhs.spine();
                if let Term::Symbol(name) = head {
                    if !sig.contains(name) {
                        return Err(SignatureError::RuleHeadUndeclared {
                            name: name.clone(),
                            line: r.line,
                        });
                    }
                    rule_heads.push((name.clone(), r.line));
                }
                check_names_declared(&r.lhs, &sig, r.line)?;
                check_names_declared(&r.rhs, &sig, r.line)?;
            }
        }
    }

    for (head, _) in &rule_heads {
        if let Some(info) = sig.get_mut(head) {
            info.definable = true;
        }
    }

    let names: Vec<String> = sig.iter().map(|i| i.name.clone()).collect();
    for name in &names {
        let info = sig.get(name).expect("just listed");
        let level = if matches!(final_codomain(&info.declared_type), Term::Sort) {
            if info.definable {
                Level::TypeFun
            } else {
                Level::TypeConst
            }
        } else {
            Level::ObjectFun
        };
        sig.get_mut(name).expect("just listed").level = level;
    }
    for name in &names {
        let info = sig.get(name).expect("just listed");
        let is_ctor = info.level == Level::ObjectFun
            && sig
                .constructor_shaped(&info.declared_type)
                .unwrap_or(false);
        sig.get_mut(name).expect("just listed").is_constructor = is_ctor;
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declaration_with_arrow() {
        let file = parse("def F : Nat -> Type.").unwrap();
        assert_eq!(file.items.len(), 1);
        match &file.items[0] {
            Item::Declaration(d) => {
                assert!(d.def_flag);
                assert_eq!(d.name, "F");
                assert_eq!(
                    d.type_expr,
                    Term::arrow(Term::symbol("Nat"), Term::Sort)
                );
            }
            _ => panic!("expected declaration"),
        }
    }

    #[test]
    fn parses_type_level_rule() {
        let file = parse("[n] F (S n) --> Nat -> (F n).").unwrap();
        match &file.items[0] {
            Item::Rule(r) => {
                assert_eq!(r.bound_vars, vec!["n".to_string()]);
                let lhs = Term::apply(
                    Term::symbol("F"),
                    [Term::apply(Term::symbol("S"), [Term::var("n")])],
                );
                assert_eq!(r.lhs, lhs);
                let rhs = Term::arrow(
                    Term::symbol("Nat"),
                    Term::apply(Term::symbol("F"), [Term::var("n")]),
                );
                assert_eq!(r.rhs, rhs);
            }
            _ => panic!("expected rule"),
        }
    }

    #[test]
    fn parses_object_rule() {
        let file = parse("[x] S (P x) --> x.").unwrap();
        match &file.items[0] {
            Item::Rule(r) => {
                let lhs = Term::apply(
                    Term::symbol("S"),
                    [Term::apply(Term::symbol("P"), [Term::var("x")])],
                );
                assert_eq!(r.lhs, lhs);
                assert_eq!(r.rhs, Term::var("x"));
            }
            _ => panic!("expected rule"),
        }
    }

    #[test]
    fn wildcards_are_fresh_per_rule() {
        let file = parse("[] mult 0 _ --> 0.\n[] f _ _ --> 0.").unwrap();
        let rules: Vec<_> = file.rules().collect();
        let (_, args0) = rules[0].lhs.spine();
        assert_eq!(args0[1], &Term::var("_1"));
        let (_, args1) = rules[1].lhs.spine();
        assert_eq!(args1[0], &Term::var("_1"));
        assert_eq!(args1[1], &Term::var("_2"));
    }

    #[test]
    fn wildcard_freshes_skip_declared_binders() {
        let file = parse("[_1] f _1 _ --> _1.").unwrap();
        let rule = file.rules().next().unwrap();
        let (_, args) = rule.lhs.spine();
        assert_eq!(args[0], &Term::var("_1"));
        assert_eq!(args[1], &Term::var("_2"));
    }

    #[test]
    fn duplicate_binder_rejected() {
        let err = parse("[x,x] f x --> x.").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateBinder { .. }));
    }

    #[test]
    fn identifiers_allow_digits_and_primes() {
        let file = parse("Nat : Type.\n0 : Nat.\n[x'] f x' --> 0.").unwrap();
        let rule = file.rules().next().unwrap();
        assert_eq!(rule.bound_vars, vec!["x'".to_string()]);
        let (_, args) = rule.lhs.spine();
        assert_eq!(args[0], &Term::var("x'"));
    }

    #[test]
    fn nested_comments() {
        let file = parse("(; outer (; inner ;) still out ;) A : Type.").unwrap();
        assert_eq!(file.items.len(), 1);
        assert!(matches!(
            parse("(; never closed"),
            Err(ParseError::UnterminatedComment { .. })
        ));
    }

    #[test]
    fn lambda_and_redex() {
        let file = parse("[x] g x --> (y : Nat => y) x.").unwrap();
        let rule = file.rules().next().unwrap();
        let expected = Term::App(
            Box::new(Term::lambda("y", Term::symbol("Nat"), Term::var("y"))),
            Box::new(Term::var("x")),
        );
        assert_eq!(rule.rhs, expected);
    }

    #[test]
    fn named_product_vs_parenthesized_lambda() {
        let t = parse_term("(x : Nat) -> Vec x", &[]).unwrap();
        assert_eq!(
            t,
            Term::product(
                "x",
                Term::symbol("Nat"),
                Term::apply(Term::symbol("Vec"), [Term::var("x")])
            )
        );
        let l = parse_term("(x : Nat => x)", &[]).unwrap();
        assert_eq!(l, Term::lambda("x", Term::symbol("Nat"), Term::var("x")));
    }

    #[test]
    fn arrow_is_right_associative_and_binds_looser_than_app() {
        let t = parse_term("F n -> F n -> Type", &["n"]).unwrap();
        let fn_ = Term::apply(Term::symbol("F"), [Term::var("n")]);
        assert_eq!(
            t,
            Term::arrow(fn_.clone(), Term::arrow(fn_, Term::Sort))
        );
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse("A : Type\nB : Type.").unwrap_err();
        match err {
            ParseError::Unexpected { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_builds_empty_signature() {
        let sig = build_signature(&parse("").unwrap()).unwrap();
        assert!(sig.is_empty());
    }

    #[test]
    fn integer_signature_classification() {
        let src = "\
Int : Type.
0 : Int.
def S : Int -> Int.
def P : Int -> Int.
def returnZero : Int -> Int.
def aux : Int -> Int.
[x] S (P x) --> x.
";
        let sig = build_signature(&parse(src).unwrap()).unwrap();
        let int = sig.get("Int").unwrap();
        assert_eq!(int.level, Level::TypeConst);
        assert_eq!(int.arity, 0);
        let zero = sig.get("0").unwrap();
        assert!(zero.is_constructor);
        assert_eq!(zero.arity, 0);
        assert!(!zero.definable);
        for name in ["S", "P"] {
            let info = sig.get(name).unwrap();
            assert!(info.is_constructor, "{name} should be a constructor");
            assert!(info.definable, "{name} should be definable");
            assert_eq!(info.arity, 1);
        }
    }

    #[test]
    fn type_function_classification() {
        let src = "Nat : Type.\ndef F : Nat -> Type.\n";
        let sig = build_signature(&parse(src).unwrap()).unwrap();
        let f = sig.get("F").unwrap();
        assert_eq!(f.level, Level::TypeFun);
        assert_eq!(f.arity, 1);
        assert!(!f.is_constructor);
    }

    #[test]
    fn rules_make_heads_definable() {
        // a type-level symbol with rules becomes a type function even
        // without the def marker
        let src = "Nat : Type.\nG : Type.\n[] G --> Nat -> Nat.\n";
        let sig = build_signature(&parse(src).unwrap()).unwrap();
        assert_eq!(sig.get("G").unwrap().level, Level::TypeFun);
        assert!(sig.get("G").unwrap().definable);
    }

    #[test]
    fn use_before_declaration_is_an_error() {
        let err = build_signature(&parse("f : Nat -> Nat.\nNat : Type.").unwrap())
            .unwrap_err();
        assert!(matches!(err, SignatureError::UnknownSymbol { .. }));
        let err =
            build_signature(&parse("Nat : Type.\n[x] f x --> x.\ndef f : Nat -> Nat.").unwrap())
                .unwrap_err();
        assert!(matches!(err, SignatureError::RuleHeadUndeclared { .. }));
    }

    #[test]
    fn duplicate_declaration_is_an_error() {
        let err = build_signature(&parse("A : Type.\nA : Type.").unwrap()).unwrap_err();
        assert!(matches!(err, SignatureError::DuplicateDeclaration { .. }));
    }

    #[test]
    fn unknown_symbol_in_rule_body() {
        let err = build_signature(
            &parse("Nat : Type.\ndef f : Nat -> Nat.\n[x] f x --> g x.").unwrap(),
        )
        .unwrap_err();
        match err {
            SignatureError::UnknownSymbol { name, .. } => assert_eq!(name, "g"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn wildcard_in_declared_type_is_rejected() {
        let err = build_signature(&parse("Nat : Type.\ndef f : _ -> Nat.").unwrap())
            .unwrap_err();
        assert!(matches!(err, SignatureError::FreeVariableInType { .. }));
    }

    #[test]
    fn printed_file_reparses_alpha_equal() {
        let src = "\
Nat : Type.
0 : Nat.
S : Nat -> Nat.
def plus : Nat -> Nat -> Nat.
[n] plus 0 n --> n.
[m,n] plus (S m) n --> S (plus m n).
[] plus _ 0 --> 0.
";
        let file = parse(src).unwrap();
        let printed = file.to_string();
        let reparsed = parse(&printed).unwrap();
        assert_eq!(file.items.len(), reparsed.items.len());
        for (a, b) in file.items.iter().zip(reparsed.items.iter()) {
            match (a, b) {
                (Item::Declaration(x), Item::Declaration(y)) => {
                    assert_eq!(x.name, y.name);
                    assert_eq!(x.def_flag, y.def_flag);
                    assert!(x.type_expr.alpha_eq(&y.type_expr));
                }
                (Item::Rule(x), Item::Rule(y)) => {
                    assert!(x.lhs.alpha_eq(&y.lhs), "{} vs {}", x.lhs, y.lhs);
                    assert!(x.rhs.alpha_eq(&y.rhs));
                }
                _ => panic!("item kinds diverged"),
            }
        }
    }
}
