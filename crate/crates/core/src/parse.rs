//! Lexer and recursive-descent parser for `.ectt` files.
//!
//! Names are resolved while parsing: the output is already in de Bruijn
//! form, so unbound identifiers and misuse of interval variables in term
//! positions (and vice versa) are reported here.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use crate::syntax::{Branch, Cof, Comp, Decl, DeclKind, Dim, Name, Pos, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ParseErrorKind {
    Syntax,
    Unbound,
    /// Wrong number of directions / endpoints, or `comp^0`.
    Arity,
    /// A tube guard refers to one of the composition's own directions.
    GuardMentionsDirection,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Universe(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Backslash,
    Dot,
    Proj(u8),
    Colon,
    Arrow,
    Star,
    Comma,
    At,
    Bar,
    Equals,
    And,
    Or,
    Squiggle,
    Caret,
    KwDef,
    KwPostulate,
    KwLet,
    KwIn,
    KwPath,
    KwComp,
    KwTt,
    KwFf,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::Universe(n) => return write!(f, "`U{n}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Backslash => "\\",
            Tok::Dot => ".",
            Tok::Proj(1) => ".1",
            Tok::Proj(_) => ".2",
            Tok::Colon => ":",
            Tok::Arrow => "->",
            Tok::Star => "*",
            Tok::Comma => ",",
            Tok::At => "@",
            Tok::Bar => "|",
            Tok::Equals => "=",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Squiggle => "~>",
            Tok::Caret => "^",
            Tok::KwDef => "def",
            Tok::KwPostulate => "postulate",
            Tok::KwLet => "let",
            Tok::KwIn => "in",
            Tok::KwPath => "Path",
            Tok::KwComp => "comp",
            Tok::KwTt => "tt",
            Tok::KwFf => "ff",
            Tok::Eof => return write!(f, "end of input"),
        };
        write!(f, "`{s}`")
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let at = |i: usize| chars.get(i).copied();
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && at(i + 1) == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let sym2 = match two.as_str() {
            "->" => Some(Tok::Arrow),
            "/\\" => Some(Tok::And),
            "\\/" => Some(Tok::Or),
            "~>" => Some(Tok::Squiggle),
            _ => None,
        };
        if let Some(t) = sym2 {
            out.push((t, pos));
            i += 2;
            col += 2;
            continue;
        }
        if c == '.' {
            if let Some(d @ ('1' | '2')) = at(i + 1) {
                if !at(i + 2).is_some_and(is_ident_char) {
                    out.push((Tok::Proj(if d == '1' { 1 } else { 2 }), pos));
                    i += 2;
                    col += 2;
                    continue;
                }
            }
        }
        let sym1 = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '\\' | 'λ' => Some(Tok::Backslash),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '*' => Some(Tok::Star),
            ',' => Some(Tok::Comma),
            '@' => Some(Tok::At),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Equals),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = sym1 {
            out.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let n = text.parse().map_err(|_| ParseError {
                kind: ParseErrorKind::Syntax,
                message: format!("number `{text}` out of range"),
                pos,
            })?;
            out.push((Tok::Num(n), pos));
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while at(i).is_some_and(is_ident_char) {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match text.as_str() {
                "def" => Tok::KwDef,
                "postulate" => Tok::KwPostulate,
                "let" => Tok::KwLet,
                "in" => Tok::KwIn,
                "Path" => Tok::KwPath,
                "comp" => Tok::KwComp,
                "tt" => Tok::KwTt,
                "ff" => Tok::KwFf,
                _ => match text.strip_prefix('U').and_then(|n| {
                    (!n.is_empty() && n.chars().all(|c| c.is_ascii_digit())).then(|| n.parse::<u32>().ok()).flatten()
                }) {
                    Some(l) => Tok::Universe(l),
                    None => Tok::Ident(text),
                },
            };
            out.push((tok, pos));
            continue;
        }
        return Err(ParseError { kind: ParseErrorKind::Syntax, message: format!("unexpected character `{c}`"), pos });
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Term,
    Dim,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    scope: Vec<(Name, Kind)>,
    globals: HashSet<String>,
    /// Direction names of enclosing comps whose guards are being parsed.
    guard_forbidden: Vec<Name>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.at + n).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at < self.toks.len() - 1 {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, kind: ParseErrorKind, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { kind, message: message.into(), pos: self.pos() })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.err(ParseErrorKind::Syntax, format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s.into())
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn idents(&mut self) -> PResult<Vec<Name>> {
        let mut names = vec![self.ident()?];
        while let Tok::Ident(_) = self.peek() {
            names.push(self.ident()?);
        }
        Ok(names)
    }

    fn with_binders<T>(&mut self, names: &[Name], kind: Kind, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let depth = self.scope.len();
        self.scope.extend(names.iter().map(|n| (n.clone(), kind)));
        let r = f(self);
        self.scope.truncate(depth);
        r
    }

    fn resolve(&self, name: &str) -> Option<(usize, Kind)> {
        self.scope.iter().rev().position(|(n, _)| &**n == name).map(|ix| (ix, self.scope[self.scope.len() - 1 - ix].1))
    }

    // ---- interval and cofibration expressions ----

    fn dim(&mut self) -> PResult<Dim> {
        match self.peek().clone() {
            Tok::Num(0) => {
                self.bump();
                Ok(Dim::Zero)
            }
            Tok::Num(1) => {
                self.bump();
                Ok(Dim::One)
            }
            Tok::Ident(name) => {
                if self.guard_forbidden.iter().any(|d| **d == *name) {
                    return self.err(
                        ParseErrorKind::GuardMentionsDirection,
                        format!("tube guard mentions the composition direction `{name}`"),
                    );
                }
                match self.resolve(&name) {
                    Some((ix, Kind::Dim)) => {
                        self.bump();
                        Ok(Dim::Var(ix))
                    }
                    Some((_, Kind::Term)) => self.err(
                        ParseErrorKind::Unbound,
                        format!("`{name}` is a term variable, expected an interval variable"),
                    ),
                    None => self.err(ParseErrorKind::Unbound, format!("unbound interval variable `{name}`")),
                }
            }
            _ => self.unexpected("interval expression (`0`, `1` or a variable)"),
        }
    }

    fn cof(&mut self) -> PResult<Cof> {
        let mut c = self.cof_and()?;
        while self.eat(&Tok::Or) {
            c = Cof::or(c, self.cof_and()?);
        }
        Ok(c)
    }

    fn cof_and(&mut self) -> PResult<Cof> {
        let mut c = self.cof_atom()?;
        while self.eat(&Tok::And) {
            c = Cof::and(c, self.cof_atom()?);
        }
        Ok(c)
    }

    fn cof_atom(&mut self) -> PResult<Cof> {
        match self.peek() {
            Tok::KwTt => {
                self.bump();
                Ok(Cof::Top)
            }
            Tok::KwFf => {
                self.bump();
                Ok(Cof::Bot)
            }
            Tok::LParen => {
                self.bump();
                let c = self.cof()?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            _ => {
                let r = self.dim()?;
                self.expect(Tok::Equals)?;
                let s = self.dim()?;
                Ok(Cof::Eq(r, s))
            }
        }
    }

    fn dim_tuple(&mut self, k: usize) -> PResult<Vec<Dim>> {
        let pos = self.pos();
        let dims = if self.eat(&Tok::LParen) {
            let mut ds = vec![self.dim()?];
            while self.eat(&Tok::Comma) {
                ds.push(self.dim()?);
            }
            self.expect(Tok::RParen)?;
            ds
        } else {
            vec![self.dim()?]
        };
        if dims.len() != k {
            return Err(ParseError {
                kind: ParseErrorKind::Arity,
                message: format!("expected {k} interval expression(s), found {}", dims.len()),
                pos,
            });
        }
        Ok(dims)
    }

    // ---- terms ----

    fn expr(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Backslash => {
                if *self.peek_at(1) == Tok::LParen && self.binder_group_ahead(2) {
                    self.bump();
                    return self.pi_or_sigma();
                }
                self.bump();
                let names = self.idents()?;
                self.expect(Tok::Dot)?;
                let body = self.with_binders(&names, Kind::Term, |p| p.expr())?;
                Ok(names.iter().rev().fold(body, |b, x| Term::Lam(x.clone(), Rc::new(b))))
            }
            Tok::Lt => {
                self.bump();
                let names = self.idents()?;
                self.expect(Tok::Gt)?;
                let body = self.with_binders(&names, Kind::Dim, |p| p.expr())?;
                Ok(names.iter().rev().fold(body, |b, i| Term::PLam(i.clone(), Rc::new(b))))
            }
            Tok::KwLet => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                self.expect(Tok::Equals)?;
                let bound = self.expr()?;
                self.expect(Tok::KwIn)?;
                let body = self.with_binders(std::slice::from_ref(&x), Kind::Term, |p| p.expr())?;
                Ok(Term::Let(x, Rc::new(ty), Rc::new(bound), Rc::new(body)))
            }
            Tok::KwComp => self.comp(),
            _ => self.pi_or_sigma(),
        }
    }

    /// `( x y : ...` starting at lookahead offset `n` (just after the paren).
    fn binder_group_ahead(&self, n: usize) -> bool {
        let mut j = n;
        if !matches!(self.peek_at(j), Tok::Ident(_)) {
            return false;
        }
        while let Tok::Ident(_) = self.peek_at(j) {
            j += 1;
        }
        *self.peek_at(j) == Tok::Colon
    }

    fn pi_or_sigma(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::LParen && self.binder_group_ahead(1) {
            let start = self.at;
            let mut groups: Vec<(Vec<Name>, Term)> = Vec::new();
            let depth = self.scope.len();
            while *self.peek() == Tok::LParen && self.binder_group_ahead(1) {
                self.bump();
                let names = self.idents()?;
                self.expect(Tok::Colon)?;
                let ty = match self.expr() {
                    Ok(t) => t,
                    Err(e) => {
                        self.scope.truncate(depth);
                        return Err(e);
                    }
                };
                self.expect(Tok::RParen)?;
                self.scope.extend(names.iter().map(|n| (n.clone(), Kind::Term)));
                groups.push((names, ty));
            }
            let former = match self.peek() {
                Tok::Arrow => Some(true),
                Tok::Star => Some(false),
                _ => None,
            };
            let Some(is_pi) = former else {
                // A parenthesised annotation-like expression that is not a binder.
                self.scope.truncate(depth);
                self.at = start;
                return self.unexpected("`->` or `*` after binder group");
            };
            self.bump();
            let cod = self.expr();
            self.scope.truncate(depth);
            let mut out = cod?;
            for (names, ty) in groups.into_iter().rev() {
                // `(x y : A)`: the type of y is A shifted past x.
                for (m, x) in names.into_iter().enumerate().rev() {
                    let dom = Rc::new(ty.shifted(m));
                    out = if is_pi { Term::Pi(x, dom, Rc::new(out)) } else { Term::Sigma(x, dom, Rc::new(out)) };
                }
            }
            return Ok(out);
        }
        let lhs = self.product()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.with_binders(&["_".into()], Kind::Term, |p| p.expr())?;
            return Ok(Term::Pi("_".into(), Rc::new(lhs), Rc::new(rhs)));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Term> {
        let lhs = self.app()?;
        if self.eat(&Tok::Star) {
            let rhs = self.with_binders(&["_".into()], Kind::Term, |p| {
                if *p.peek() == Tok::LParen && p.binder_group_ahead(1) {
                    p.pi_or_sigma()
                } else {
                    p.product()
                }
            })?;
            return Ok(Term::Sigma("_".into(), Rc::new(lhs), Rc::new(rhs)));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Universe(_) | Tok::LParen | Tok::KwPath)
    }

    fn app(&mut self) -> PResult<Term> {
        let mut head = self.postfix()?;
        loop {
            if self.eat(&Tok::At) {
                let r = self.dim()?;
                head = Term::PApp(Rc::new(head), r);
            } else if self.starts_atom() {
                let arg = self.postfix()?;
                head = Term::App(Rc::new(head), Rc::new(arg));
            } else {
                return Ok(head);
            }
        }
    }

    fn postfix(&mut self) -> PResult<Term> {
        let mut t = self.atom()?;
        while let Tok::Proj(n) = *self.peek() {
            self.bump();
            t = if n == 1 { Term::Fst(Rc::new(t)) } else { Term::Snd(Rc::new(t)) };
        }
        Ok(t)
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(name) => match self.resolve(&name) {
                Some((ix, Kind::Term)) => {
                    self.bump();
                    Ok(Term::Var(ix))
                }
                Some((_, Kind::Dim)) => {
                    self.err(ParseErrorKind::Unbound, format!("`{name}` is an interval variable, expected a term"))
                }
                None if self.globals.contains(&name) => {
                    self.bump();
                    Ok(Term::Global(name.into()))
                }
                None => self.err(ParseErrorKind::Unbound, format!("unbound identifier `{name}`")),
            },
            Tok::Universe(l) => {
                self.bump();
                Ok(Term::Universe(l))
            }
            Tok::LParen => {
                self.bump();
                let t = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let u = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Term::Pair(Rc::new(t), Rc::new(u)));
                }
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::KwPath => {
                self.bump();
                let (name, line) = if *self.peek() == Tok::LParen
                    && matches!(self.peek_at(1), Tok::Ident(_))
                    && *self.peek_at(2) == Tok::Dot
                {
                    self.bump();
                    let i = self.ident()?;
                    self.expect(Tok::Dot)?;
                    let line = self.with_binders(std::slice::from_ref(&i), Kind::Dim, |p| p.expr())?;
                    self.expect(Tok::RParen)?;
                    (i, line)
                } else {
                    ("_".into(), self.postfix()?.shifted(1))
                };
                let a = self.postfix()?;
                let b = self.postfix()?;
                Ok(Term::Path(name, Rc::new(line), Rc::new(a), Rc::new(b)))
            }
            _ => self.unexpected("a term"),
        }
    }

    fn comp(&mut self) -> PResult<Term> {
        let comp_pos = self.pos();
        self.expect(Tok::KwComp)?;
        self.expect(Tok::Caret)?;
        let k = match self.bump() {
            Tok::Num(n) => n as usize,
            _ => {
                self.at -= 1;
                return self.unexpected("dimension after `comp^`");
            }
        };
        if k == 0 {
            return Err(ParseError {
                kind: ParseErrorKind::Arity,
                message: "comp^0 is not allowed: a composition needs at least one direction".into(),
                pos: comp_pos,
            });
        }
        self.expect(Tok::LParen)?;
        let dirs_pos = self.pos();
        let dirs = self.idents()?;
        if dirs.len() != k {
            return Err(ParseError {
                kind: ParseErrorKind::Arity,
                message: format!("comp^{k} binds {} direction(s)", dirs.len()),
                pos: dirs_pos,
            });
        }
        self.expect(Tok::Dot)?;
        let line = self.with_binders(&dirs, Kind::Dim, |p| p.expr())?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::LBrack)?;
        let mut tube = Vec::new();
        if *self.peek() != Tok::RBrack {
            loop {
                self.guard_forbidden.extend(dirs.iter().cloned());
                let guard = self.cof();
                self.guard_forbidden.truncate(self.guard_forbidden.len() - dirs.len());
                let guard = guard?;
                self.expect(Tok::Arrow)?;
                let bpos = self.pos();
                let binders = self.idents()?;
                if binders.len() != k {
                    return Err(ParseError {
                        kind: ParseErrorKind::Arity,
                        message: format!("tube branch binds {} direction(s), expected {k}", binders.len()),
                        pos: bpos,
                    });
                }
                self.expect(Tok::Dot)?;
                let body = self.with_binders(&binders, Kind::Dim, |p| p.expr())?;
                tube.push(Branch { guard, binders, body: Rc::new(body) });
                if !self.eat(&Tok::Bar) {
                    break;
                }
            }
        }
        self.expect(Tok::RBrack)?;
        let cap = self.expr()?;
        self.expect(Tok::Colon)?;
        let src = self.dim_tuple(k)?;
        self.expect(Tok::Squiggle)?;
        let tgt = self.dim_tuple(k)?;
        Ok(Term::Comp(Rc::new(Comp { dirs, line: Rc::new(line), src, tgt, tube, cap: Rc::new(cap) })))
    }

    fn decl(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        match self.bump() {
            Tok::KwDef => {
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                self.expect(Tok::Equals)?;
                let body = self.expr()?;
                Ok(Decl { name, kind: DeclKind::Def { ty: Rc::new(ty), body: Rc::new(body) }, pos })
            }
            Tok::KwPostulate => {
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                Ok(Decl { name, kind: DeclKind::Postulate { ty: Rc::new(ty) }, pos })
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                self.unexpected("`def` or `postulate`")
            }
        }
    }
}

/// One top-level item: a declaration, or the error that stopped it.
#[derive(Clone, Debug)]
pub enum Item {
    Decl(Decl),
    Error { name: Option<Name>, error: ParseError },
}

/// Parse a whole file, recovering at the next `def`/`postulate` after an
/// error so later declarations still get parsed.
pub fn parse_items(src: &str) -> Vec<Item> {
    let toks = match lex(src) {
        Ok(t) => t,
        Err(error) => return vec![Item::Error { name: None, error }],
    };
    let mut p = Parser { toks, at: 0, scope: Vec::new(), globals: HashSet::new(), guard_forbidden: Vec::new() };
    let mut items = Vec::new();
    while *p.peek() != Tok::Eof {
        let start = p.at;
        let name = match p.peek_at(1) {
            Tok::Ident(n) if matches!(p.peek(), Tok::KwDef | Tok::KwPostulate) => Some(Name::from(n.as_str())),
            _ => None,
        };
        p.scope.clear();
        let result = p.decl();
        if let Some(n) = &name {
            p.globals.insert(n.to_string());
        }
        match result {
            Ok(d) => items.push(Item::Decl(d)),
            Err(error) => {
                items.push(Item::Error { name, error });
                if p.at == start {
                    p.bump();
                }
                while !matches!(p.peek(), Tok::KwDef | Tok::KwPostulate | Tok::Eof) {
                    p.bump();
                }
            }
        }
    }
    items
}

/// Parse a file; fails on the first error.
pub fn parse_module(src: &str) -> Result<Vec<Decl>, ParseError> {
    parse_items(src)
        .into_iter()
        .map(|it| match it {
            Item::Decl(d) => Ok(d),
            Item::Error { error, .. } => Err(error),
        })
        .collect()
}

/// Parse a closed term that may refer to the given globals.
pub fn parse_term(src: &str, globals: &[&str]) -> Result<Term, ParseError> {
    parse_term_in(src, globals, &[])
}

/// Parse a term under a context of named variables (outermost first);
/// names listed in `dims` are interval variables.
pub fn parse_term_in(src: &str, globals: &[&str], ctx: &[(&str, bool)]) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let globals: HashSet<String> = globals.iter().map(|s| s.to_string()).collect();
    let scope = ctx.iter().map(|(n, is_dim)| (Name::from(*n), if *is_dim { Kind::Dim } else { Kind::Term })).collect();
    let mut p = Parser { toks, at: 0, scope, globals, guard_forbidden: Vec::new() };
    let t = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(t)
}

/// Parse a cofibration over free interval names; returns the formula with
/// `Dim::Var(n)` referring to `names[n]` (names in order of first use).
pub fn parse_cof_free(src: &str, names: &mut Vec<String>) -> Result<Cof, ParseError> {
    let toks = lex(src)?;
    for (t, _) in &toks {
        if let Tok::Ident(n) = t {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    let globals = HashSet::new();
    let scope = names.iter().map(|n| (Name::from(n.as_str()), Kind::Dim)).collect();
    let mut p = Parser { toks, at: 0, scope, globals, guard_forbidden: Vec::new() };
    let c = p.cof()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    // Convert de Bruijn indices into positions in `names`.
    let n = names.len();
    Ok(c.map_dims(&mut |d| match d {
        Dim::Var(ix) => Dim::Var(n - 1 - ix),
        d => d,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_pi_sugar() {
        let t = parse_term("\\(A : U0) -> A", &[]).unwrap();
        assert_eq!(t, Term::pi("A", Term::Universe(0), Term::Var(0)));
        let t = parse_term("(A : U0) -> A", &[]).unwrap();
        assert_eq!(t, Term::pi("A", Term::Universe(0), Term::Var(0)));
    }

    #[test]
    fn comp_k1() {
        let t = parse_term_in(
            "comp^1 (i. A) [phi_r = 0 -> i. u] a0 : r ~> s",
            &[],
            &[("A", false), ("u", false), ("a0", false), ("phi_r", true), ("r", true), ("s", true)],
        )
        .unwrap();
        let Term::Comp(c) = t else { panic!("not a comp") };
        assert_eq!(c.arity(), 1);
        assert_eq!(c.src, vec![Dim::Var(1)]);
        assert_eq!(c.tgt, vec![Dim::Var(0)]);
        assert_eq!(c.tube.len(), 1);
        // A is under one direction binder: index 6 outside + 1
        assert_eq!(*c.line, Term::Var(6));
    }

    #[test]
    fn comp_zero_rejected() {
        let e = parse_term_in("comp^0 (i. A) [] a : 0 ~> 1", &[], &[("A", false), ("a", false)]).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Arity);
    }

    #[test]
    fn guard_mentioning_direction() {
        let e =
            parse_term_in("comp^1 (i. A) [i = 0 -> i. a] a : 0 ~> 1", &[], &[("A", false), ("a", false)]).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::GuardMentionsDirection);
    }

    #[test]
    fn unbound_identifier_has_position() {
        let e = parse_module("def f : U1 =\n  nope").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbound);
        assert_eq!(e.pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn telescope_and_projections() {
        let t = parse_term("\\p. p.1", &[]).unwrap();
        assert_eq!(t, Term::lam("p", Term::Fst(Rc::new(Term::Var(0)))));
        let t = parse_term("(A B : U0) -> A", &[]).unwrap();
        assert_eq!(t, Term::pi("A", Term::Universe(0), Term::pi("B", Term::Universe(0), Term::Var(1))));
    }

    #[test]
    fn recovers_after_bad_decl() {
        let items = parse_items("postulate A : U0\ndef x : A = y\npostulate a : A\n");
        assert_eq!(items.len(), 3);
        assert!(matches!(items[1], Item::Error { .. }));
        assert!(matches!(items[2], Item::Decl(_)));
    }

    #[test]
    fn free_cof() {
        let mut names = Vec::new();
        let c = parse_cof_free("i = 0 \\/ j = i", &mut names).unwrap();
        assert_eq!(names, vec!["i", "j"]);
        assert_eq!(c, Cof::or(Cof::Eq(Dim::Var(0), Dim::Zero), Cof::Eq(Dim::Var(1), Dim::Var(0))));
    }
}
