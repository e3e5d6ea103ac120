//! Lexer and recursive-descent parser for the surface syntax.
//!
//! The surface grammar in brief:
//!
//! ```text
//! program  := decls '::' stmts
//! decls    := (decl (',' decl)* ','?)?
//! decl     := 'decl' NAME '(' 'qs' ')' '{' stmts '}'
//! stmt     := 'skip' ';'
//!           | qubit '*=' GATE phase? ('(' int ')')? ';'
//!           | 'if' bool 'then' stmts 'else' stmts
//!           | 'qcase' set '[' int (',' int)* ']' 'of' '{' branches '}'
//!           | 'call' NAME '(' set ')' ';'
//!           | MACRO '(' args ')' ';'
//!           | '{' stmts '}'
//! branches := (BITS '->' stmts ','?)+
//! set      := 'qs' ('-' '[' int (',' int)* ']')*
//! qubit    := set '[' int ']'
//! int      := (INT | '-' INT | '|' set '|') (('+'|'-') INT)*
//! bool     := or-of and-of ('!'? (cmp | '(' bool ')'))
//! phase    := '^{' ('-'? INT '*')? 'pi' ('/' (INT | '2^(x' (('+'|'-') INT)? ')'))? '}'
//! ```
//!
//! Line comments start with `//`.  Statement sequences need no separator:
//! a sequence simply ends at the first token that cannot start a statement
//! (`else`, a branch label, `}`, `,`, `::`, end of input).

use crate::ast::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("parse error at {line}:{col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("duplicate declaration of procedure `{name}`")]
    DuplicateDecl { name: String },
    #[error("call to undeclared procedure `{name}`")]
    UndeclaredProc { name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int { value: i64, raw: String },
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Arrow,
    ColonColon,
    MulAssign,
    Star,
    Slash,
    Pipe,
    Plus,
    Minus,
    Caret,
    AndAnd,
    OrOr,
    Bang,
    Ge,
    Le,
    EqEq,
    Lt,
    Gt,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int { raw, .. } => format!("`{raw}`"),
            Tok::Eof => "end of input".to_string(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::ColonColon => "`::`".into(),
            Tok::MulAssign => "`*=`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Caret => "`^`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Le => "`<=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.peek2() == Some(b'/') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line,
                    col,
                });
                return Ok(out);
            };
            let tok = match c {
                b'0'..=b'9' => {
                    let mut raw = String::new();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_digit() {
                            raw.push(d as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let value = raw.parse::<i64>().map_err(|_| ParseError::Syntax {
                        line,
                        col,
                        msg: format!("integer literal `{raw}` out of range"),
                    })?;
                    Tok::Int { value, raw }
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let mut raw = String::new();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_alphanumeric() || d == b'_' {
                            raw.push(d as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(raw)
                }
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b';' => {
                    self.bump();
                    Tok::Semi
                }
                b'^' => {
                    self.bump();
                    Tok::Caret
                }
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                // `//` was already consumed as a comment by skip_trivia.
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'!' => {
                    self.bump();
                    Tok::Bang
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                b':' => {
                    self.bump();
                    if self.peek() == Some(b':') {
                        self.bump();
                        Tok::ColonColon
                    } else {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            msg: "expected `::`".into(),
                        });
                    }
                }
                b'*' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::MulAssign
                    } else {
                        Tok::Star
                    }
                }
                b'|' => {
                    self.bump();
                    if self.peek() == Some(b'|') {
                        self.bump();
                        Tok::OrOr
                    } else {
                        Tok::Pipe
                    }
                }
                b'&' => {
                    self.bump();
                    if self.peek() == Some(b'&') {
                        self.bump();
                        Tok::AndAnd
                    } else {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            msg: "expected `&&`".into(),
                        });
                    }
                }
                b'>' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Ge
                    } else {
                        Tok::Gt
                    }
                }
                b'<' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Le
                    } else {
                        Tok::Lt
                    }
                }
                b'=' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                    }
                    Tok::EqEq
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push(Spanned { tok, line, col });
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (u32, u32) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", self.peek().describe()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            other => self.err(format!("expected `{kw}`, found {}", other.describe())),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected {what}, found {}", other.describe())),
        }
    }

    fn int_lit(&mut self, what: &str) -> Result<i64, ParseError> {
        let neg = if matches!(self.peek(), Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int { value, .. } => {
                self.bump();
                Ok(if neg { -value } else { value })
            }
            other => self.err(format!("expected {what}, found {}", other.describe())),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut decls = Vec::new();
        while matches!(self.peek(), Tok::Ident(s) if s == "decl") {
            decls.push(self.decl()?);
            if matches!(self.peek(), Tok::Comma) {
                self.bump();
            }
        }
        self.expect(&Tok::ColonColon, "`::`")?;
        let body = self.stmt_seq()?;
        if !matches!(self.peek(), Tok::Eof) {
            return self.err(format!(
                "expected end of input, found {}",
                self.peek().describe()
            ));
        }
        let program = Program { decls, body };
        check_names(&program)?;
        Ok(program)
    }

    fn decl(&mut self) -> Result<Decl, ParseError> {
        self.expect_keyword("decl")?;
        let name = self.ident("procedure name")?;
        if is_reserved(&name) {
            return self.err(format!("`{name}` cannot be used as a procedure name"));
        }
        self.expect(&Tok::LParen, "`(`")?;
        self.expect_keyword("qs")?;
        self.expect(&Tok::RParen, "`)`")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let body = self.stmt_seq()?;
        self.expect(&Tok::RBrace, "`}`")?;
        Ok(Decl { name, body })
    }

    /// Whether the next token can begin a statement.
    fn at_stmt_start(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => s != "else" && s != "then" && s != "of" && s != "decl",
            Tok::LBrace => true,
            _ => false,
        }
    }

    fn stmt_seq(&mut self) -> Result<Statement, ParseError> {
        let mut stmts = Vec::new();
        while self.at_stmt_start() {
            stmts.push(self.stmt()?);
        }
        Ok(Statement::seq_of(stmts))
    }

    /// An `if` branch: either one braced block, which delimits the branch
    /// exactly, or an unbraced statement sequence extending as far as the
    /// grammar allows.
    fn branch(&mut self) -> Result<Statement, ParseError> {
        if matches!(self.peek(), Tok::LBrace) {
            self.bump();
            let inner = self.stmt_seq()?;
            self.expect(&Tok::RBrace, "`}`")?;
            Ok(inner)
        } else {
            self.stmt_seq()
        }
    }

    fn stmt(&mut self) -> Result<Statement, ParseError> {
        if matches!(self.peek(), Tok::LBrace) {
            self.bump();
            let inner = self.stmt_seq()?;
            self.expect(&Tok::RBrace, "`}`")?;
            return Ok(inner);
        }
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            other => return self.err(format!("expected a statement, found {}", other.describe())),
        };
        match name.as_str() {
            "skip" => {
                self.bump();
                self.expect(&Tok::Semi, "`;`")?;
                Ok(Statement::Skip)
            }
            "if" => {
                self.bump();
                let cond = self.bool_expr()?;
                self.expect_keyword("then")?;
                let then_branch = self.branch()?;
                self.expect_keyword("else")?;
                let else_branch = self.branch()?;
                Ok(Statement::If {
                    cond,
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                })
            }
            "qcase" => self.qcase(),
            "call" => {
                self.bump();
                let proc = self.ident("procedure name")?;
                self.expect(&Tok::LParen, "`(`")?;
                let arg = self.set_expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                self.expect(&Tok::Semi, "`;`")?;
                Ok(Statement::Call { proc, arg })
            }
            "qs" => self.unitary(),
            _ => {
                if let Some(mac) = MacroName::parse(&name) {
                    self.macro_call(mac)
                } else {
                    self.err(format!("unknown statement starting with `{name}`"))
                }
            }
        }
    }

    fn qcase(&mut self) -> Result<Statement, ParseError> {
        self.expect_keyword("qcase")?;
        let set = self.set_expr()?;
        self.expect(&Tok::LBracket, "`[`")?;
        let mut indices = vec![self.int_expr()?];
        while matches!(self.peek(), Tok::Comma) {
            self.bump();
            indices.push(self.int_expr()?);
        }
        self.expect(&Tok::RBracket, "`]`")?;
        self.expect_keyword("of")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let mut branches = Vec::new();
        while let Tok::Int { raw, .. } = self.peek().clone() {
            let (line, col) = self.here();
            self.bump();
            let mut bits = Vec::with_capacity(raw.len());
            for ch in raw.chars() {
                match ch {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    _ => {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            msg: format!("branch label `{raw}` must be a bitstring"),
                        })
                    }
                }
            }
            self.expect(&Tok::Arrow, "`->`")?;
            let body = self.stmt_seq()?;
            branches.push((bits, body));
            if matches!(self.peek(), Tok::Comma) {
                self.bump();
            }
        }
        self.expect(&Tok::RBrace, "`}`")?;
        if branches.is_empty() {
            return self.err("qcase needs at least one branch");
        }
        if indices.len() == 1 && branches.len() == 2 && branches.iter().all(|(b, _)| b.len() == 1)
        {
            let mut zero = None;
            let mut one = None;
            for (bits, s) in branches {
                let slot = if bits[0] { &mut one } else { &mut zero };
                if slot.is_some() {
                    return self.err("duplicate qcase branch label");
                }
                *slot = Some(s);
            }
            match (zero, one) {
                (Some(z), Some(o)) => {
                    return Ok(Statement::QCase {
                        control: QubitExpr {
                            set,
                            index: indices.pop().unwrap(),
                        },
                        zero: Box::new(z),
                        one: Box::new(o),
                    })
                }
                _ => return self.err("qcase needs branches for both 0 and 1"),
            }
        }
        Ok(Statement::MultiQCase {
            set,
            indices,
            branches,
        })
    }

    fn unitary(&mut self) -> Result<Statement, ParseError> {
        let target = self.qubit_expr()?;
        self.expect(&Tok::MulAssign, "`*=`")?;
        let gname = self.ident("gate name")?;
        let Some(gate) = GateName::parse(&gname) else {
            return self.err(format!("unknown gate `{gname}`"));
        };
        let phase = if matches!(self.peek(), Tok::Caret) {
            self.bump();
            self.expect(&Tok::LBrace, "`{`")?;
            let p = self.phase_fn()?;
            self.expect(&Tok::RBrace, "`}`")?;
            Some(p)
        } else {
            None
        };
        let arg = if matches!(self.peek(), Tok::LParen) {
            self.bump();
            let e = self.int_expr()?;
            self.expect(&Tok::RParen, "`)`")?;
            Some(e)
        } else {
            None
        };
        self.expect(&Tok::Semi, "`;`")?;
        if gate.takes_phase() && phase.is_none() {
            return self.err(format!("gate `{gname}` needs a phase, e.g. `^{{pi/2}}`"));
        }
        if !gate.takes_phase() && phase.is_some() {
            return self.err(format!("gate `{gname}` does not take a phase"));
        }
        if matches!(phase, Some(PhaseFn::Dyadic { .. })) && arg.is_none() {
            return self.err("a phase of the form `pi/2^(x+c)` needs an integer argument");
        }
        if phase.is_none() && arg.is_some() {
            return self.err(format!("gate `{gname}` does not take an integer argument"));
        }
        Ok(Statement::Unitary {
            target,
            gate,
            phase,
            arg,
        })
    }

    fn macro_call(&mut self, name: MacroName) -> Result<Statement, ParseError> {
        self.bump();
        self.expect(&Tok::LParen, "`(`")?;
        let mut qubits = Vec::new();
        for i in 0..name.qubit_arity() {
            if i > 0 {
                self.expect(&Tok::Comma, "`,`")?;
            }
            qubits.push(self.qubit_expr()?);
        }
        let int_arg = if name == MacroName::Cphase {
            self.expect(&Tok::Comma, "`,`")?;
            Some(self.int_expr()?)
        } else {
            None
        };
        self.expect(&Tok::RParen, "`)`")?;
        self.expect(&Tok::Semi, "`;`")?;
        Ok(Statement::MacroCall {
            name,
            qubits,
            int_arg,
        })
    }

    fn phase_fn(&mut self) -> Result<PhaseFn, ParseError> {
        // ('-'? INT '*')? 'pi' ('/' (INT | '2' '^' '(' 'x' (('+'|'-') INT)? ')'))?
        let mut num = 1i64;
        let has_coef = match (self.peek(), self.peek2()) {
            (Tok::Int { .. }, _) => true,
            (Tok::Minus, Tok::Int { .. }) => true,
            _ => false,
        };
        if has_coef {
            num = self.int_lit("phase coefficient")?;
            self.expect(&Tok::Star, "`*`")?;
        }
        self.expect_keyword("pi")?;
        if !matches!(self.peek(), Tok::Slash) {
            return Ok(PhaseFn::Const { num, den: 1 });
        }
        self.bump();
        if matches!(self.peek2(), Tok::Caret) {
            let base = self.int_lit("`2`")?;
            if base != 2 {
                return self.err("dyadic phase denominators must use base 2");
            }
            self.expect(&Tok::Caret, "`^`")?;
            self.expect(&Tok::LParen, "`(`")?;
            self.expect_keyword("x")?;
            let shift = match self.peek() {
                Tok::Plus => {
                    self.bump();
                    self.int_lit("integer offset")?
                }
                Tok::Minus => {
                    self.bump();
                    -self.int_lit("integer offset")?
                }
                _ => 0,
            };
            self.expect(&Tok::RParen, "`)`")?;
            Ok(PhaseFn::Dyadic { num, shift })
        } else {
            let den = self.int_lit("phase denominator")?;
            if den == 0 {
                return self.err("phase denominator must be nonzero");
            }
            Ok(PhaseFn::Const { num, den })
        }
    }

    fn set_expr(&mut self) -> Result<SortedSetExpr, ParseError> {
        self.expect_keyword("qs")?;
        let mut out = SortedSetExpr::Var;
        loop {
            // A removal is `- [ ... ]`; a following `[` without `-` is a
            // qubit index and belongs to the caller.
            if matches!(self.peek(), Tok::Minus) && matches!(self.peek2(), Tok::LBracket) {
                self.bump();
                self.bump();
                let first = self.int_expr()?;
                if matches!(self.peek(), Tok::Comma) {
                    let mut lits = vec![literal_only(&first).ok_or_else(|| {
                        self.mk_err("multi-index removal needs integer literals")
                    })?];
                    while matches!(self.peek(), Tok::Comma) {
                        self.bump();
                        let e = self.int_expr()?;
                        lits.push(literal_only(&e).ok_or_else(|| {
                            self.mk_err("multi-index removal needs integer literals")
                        })?);
                    }
                    self.expect(&Tok::RBracket, "`]`")?;
                    out = SortedSetExpr::MultiRemove(Box::new(out), lits);
                } else {
                    self.expect(&Tok::RBracket, "`]`")?;
                    out = SortedSetExpr::Remove(Box::new(out), first);
                }
            } else {
                return Ok(out);
            }
        }
    }

    fn mk_err(&self, msg: &str) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn qubit_expr(&mut self) -> Result<QubitExpr, ParseError> {
        let set = self.set_expr()?;
        self.expect(&Tok::LBracket, "`[`")?;
        let index = self.int_expr()?;
        self.expect(&Tok::RBracket, "`]`")?;
        Ok(QubitExpr { set, index })
    }

    fn int_expr(&mut self) -> Result<IntExpr, ParseError> {
        let mut base = match self.peek().clone() {
            Tok::Int { value, .. } => {
                self.bump();
                IntExpr::Lit(value)
            }
            Tok::Minus => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int { value, .. } => {
                        self.bump();
                        IntExpr::Lit(-value)
                    }
                    other => {
                        return self
                            .err(format!("expected integer, found {}", other.describe()))
                    }
                }
            }
            Tok::Pipe => {
                self.bump();
                let s = self.set_expr()?;
                self.expect(&Tok::Pipe, "`|`")?;
                IntExpr::Size(Box::new(s))
            }
            other => {
                return self.err(format!(
                    "expected an integer expression, found {}",
                    other.describe()
                ))
            }
        };
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1i64,
                Tok::Minus => -1i64,
                _ => break,
            };
            // only `i +/- literal` is in the grammar
            if let Tok::Int { value, .. } = self.peek2().clone() {
                self.bump();
                self.bump();
                base = IntExpr::Shift(Box::new(base), sign * value);
            } else {
                break;
            }
        }
        Ok(base)
    }

    fn bool_expr(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.bool_and()?;
        while matches!(self.peek(), Tok::OrOr) {
            self.bump();
            let rhs = self.bool_and()?;
            lhs = BoolExpr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn bool_and(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.bool_atom()?;
        while matches!(self.peek(), Tok::AndAnd) {
            self.bump();
            let rhs = self.bool_atom()?;
            lhs = BoolExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn bool_atom(&mut self) -> Result<BoolExpr, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(BoolExpr::Not(Box::new(self.bool_atom()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.bool_expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => {
                let lhs = self.int_expr()?;
                let op = match self.peek() {
                    Tok::Ge => CmpOp::Ge,
                    Tok::Gt => CmpOp::Gt,
                    Tok::EqEq => CmpOp::Eq,
                    Tok::Lt => CmpOp::Lt,
                    Tok::Le => CmpOp::Le,
                    other => {
                        let d = other.describe();
                        return self.err(format!("expected a comparison operator, found {d}"));
                    }
                };
                self.bump();
                let rhs = self.int_expr()?;
                Ok(BoolExpr::Cmp(op, lhs, rhs))
            }
        }
    }
}

fn literal_only(e: &IntExpr) -> Option<i64> {
    match e {
        IntExpr::Lit(n) => Some(*n),
        _ => None,
    }
}

fn is_reserved(name: &str) -> bool {
    matches!(
        name,
        "decl" | "skip" | "if" | "then" | "else" | "qcase" | "of" | "call" | "qs" | "pi" | "x"
    ) || GateName::parse(name).is_some()
        || MacroName::parse(name).is_some()
}

fn check_names(p: &Program) -> Result<(), ParseError> {
    for (i, d) in p.decls.iter().enumerate() {
        if p.decls[..i].iter().any(|e| e.name == d.name) {
            return Err(ParseError::DuplicateDecl {
                name: d.name.clone(),
            });
        }
    }
    let mut missing = None;
    for (_, stmt) in p.statements() {
        visit_calls(stmt, &mut |name, _| {
            if missing.is_none() && p.decl_index(name).is_none() {
                missing = Some(name.to_string());
            }
        });
    }
    match missing {
        Some(name) => Err(ParseError::UndeclaredProc { name }),
        None => Ok(()),
    }
}

/// Parse a program from surface syntax.  Sugar (macros, multi-qubit
/// `qcase`, negative indices) is kept; run [`crate::desugar::desugar`]
/// to lower it.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let toks = Lexer::new(source).tokenize()?;
    let mut p = Parser { toks, pos: 0 };
    p.program()
}
