use thiserror::Error;

use super::ast::{ArithOp, Binding, CmpOp, Decl, Expr, ExprKind, FunDecl, Param, Program};
use super::lexer::{Keyword, Pos, Punct, Token, TokenKind};

/// Limit on expression tree height, keeping evaluation and drop recursion
/// within a bounded stack.
pub const MAX_EXPR_DEPTH: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: expected {expected}, found {found}")]
pub struct ParseError {
    pub pos: Pos,
    pub expected: String,
    pub found: String,
}

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    end: Pos,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a TokenKind> {
        self.toks.get(self.i).map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn error<T>(&self, expected: impl Into<String>) -> PResult<T> {
        let found = self.peek().map_or_else(|| "end of input".to_string(), |k| k.to_string());
        Err(ParseError { pos: self.pos(), expected: expected.into(), found })
    }

    fn at_punct(&self, p: Punct) -> bool {
        self.peek() == Some(&TokenKind::Punct(p))
    }

    fn at_kw(&self, k: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Keyword(k))
    }

    fn eat_punct(&mut self, p: Punct) -> bool {
        let hit = self.at_punct(p);
        self.i += usize::from(hit);
        hit
    }

    fn eat_kw(&mut self, k: Keyword) -> bool {
        let hit = self.at_kw(k);
        self.i += usize::from(hit);
        hit
    }

    fn expect_punct(&mut self, p: Punct) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(format!("`{}`", p.as_str()))
        }
    }

    fn expect_kw(&mut self, k: Keyword) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.error(format!("`{}`", k.as_str()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                self.i += 1;
                Ok(name.clone())
            }
            _ => self.error("identifier"),
        }
    }

    fn node(&self, kind: ExprKind, pos: Pos) -> PResult<Expr> {
        let e = Expr::new(kind, pos);
        if e.depth() > MAX_EXPR_DEPTH {
            return Err(ParseError {
                pos,
                expected: format!("an expression nested at most {MAX_EXPR_DEPTH} deep"),
                found: "a deeper one".into(),
            });
        }
        Ok(e)
    }

    fn program(&mut self) -> PResult<Program> {
        let mut decls = Vec::new();
        while self.peek().is_some() {
            decls.push(self.decl()?);
        }
        Ok(Program { decls })
    }

    fn decl(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        let d = if self.eat_kw(Keyword::Open) {
            Decl::Open { name: self.ident()?, pos }
        } else if self.at_kw(Keyword::Fun) {
            Decl::Fun(self.fun_decl()?)
        } else if self.eat_kw(Keyword::Val) {
            let name = self.ident()?;
            self.expect_punct(Punct::Eq)?;
            Decl::Val { name, expr: self.expr()?, pos }
        } else {
            Decl::Expr(self.expr()?)
        };
        self.expect_punct(Punct::Semi)?;
        Ok(d)
    }

    fn fun_decl(&mut self) -> PResult<FunDecl> {
        let pos = self.pos();
        self.expect_kw(Keyword::Fun)?;
        let name = self.ident()?;
        let mut params = vec![self.param()?];
        while !self.at_punct(Punct::Eq) {
            params.push(self.param()?);
        }
        self.expect_punct(Punct::Eq)?;
        Ok(FunDecl { name, params, body: self.expr()?, pos })
    }

    fn param(&mut self) -> PResult<Param> {
        if self.eat_punct(Punct::LParen) {
            let mut names = vec![self.ident()?];
            while self.eat_punct(Punct::Comma) {
                names.push(self.ident()?);
            }
            self.expect_punct(Punct::RParen)?;
            Ok(Param::Tuple(names))
        } else if let Some(TokenKind::Ident(_)) = self.peek() {
            Ok(Param::Name(self.ident()?))
        } else {
            self.error("parameter or `=`")
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.expr_inner())
    }

    fn expr_inner(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        if self.eat_kw(Keyword::Let) {
            let mut bindings = Vec::new();
            loop {
                let bpos = self.pos();
                if self.at_kw(Keyword::Fun) {
                    bindings.push(Binding::Fun(self.fun_decl()?));
                } else if self.eat_kw(Keyword::Val) {
                    let name = self.ident()?;
                    self.expect_punct(Punct::Eq)?;
                    bindings.push(Binding::Val { name, expr: self.expr()?, pos: bpos });
                } else {
                    break;
                }
                self.eat_punct(Punct::Semi);
            }
            if !self.at_kw(Keyword::In) {
                return self.error("`val`, `fun` or `in`");
            }
            self.i += 1;
            let body_pos = self.pos();
            let mut body = vec![self.expr()?];
            while self.eat_punct(Punct::Semi) {
                body.push(self.expr()?);
            }
            self.expect_kw(Keyword::End)?;
            let body = if body.len() == 1 { body.pop().unwrap() } else { self.node(ExprKind::Seq(body), body_pos)? };
            self.node(ExprKind::Let(bindings, Box::new(body)), pos)
        } else if self.eat_kw(Keyword::If) {
            let c = self.expr()?;
            self.expect_kw(Keyword::Then)?;
            let t = self.expr()?;
            self.expect_kw(Keyword::Else)?;
            let e = self.expr()?;
            self.node(ExprKind::If(Box::new(c), Box::new(t), Box::new(e)), pos)
        } else {
            self.orelse()
        }
    }

    fn orelse(&mut self) -> PResult<Expr> {
        let mut lhs = self.andalso()?;
        while self.at_kw(Keyword::OrElse) {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.andalso()?;
            lhs = self.node(ExprKind::OrElse(Box::new(lhs), Box::new(rhs)), pos)?;
        }
        Ok(lhs)
    }

    fn andalso(&mut self) -> PResult<Expr> {
        let mut lhs = self.cmp()?;
        while self.at_kw(Keyword::AndAlso) {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.cmp()?;
            lhs = self.node(ExprKind::AndAlso(Box::new(lhs), Box::new(rhs)), pos)?;
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> PResult<Expr> {
        let lhs = self.add()?;
        let op = match self.peek() {
            Some(TokenKind::Punct(Punct::Eq)) => CmpOp::Eq,
            Some(TokenKind::Punct(Punct::Ne)) => CmpOp::Ne,
            Some(TokenKind::Punct(Punct::Lt)) => CmpOp::Lt,
            Some(TokenKind::Punct(Punct::Le)) => CmpOp::Le,
            Some(TokenKind::Punct(Punct::Gt)) => CmpOp::Gt,
            Some(TokenKind::Punct(Punct::Ge)) => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        let pos = self.pos();
        self.i += 1;
        let rhs = self.add()?;
        self.node(ExprKind::Cmp(op, Box::new(lhs), Box::new(rhs)), pos)
    }

    fn add(&mut self) -> PResult<Expr> {
        let mut lhs = self.mul()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Punct(Punct::Plus)) => ArithOp::Add,
                Some(TokenKind::Punct(Punct::Minus)) => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.i += 1;
            let rhs = self.mul()?;
            lhs = self.node(ExprKind::Arith(op, Box::new(lhs), Box::new(rhs)), pos)?;
        }
    }

    fn mul(&mut self) -> PResult<Expr> {
        let mut lhs = self.app()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Punct(Punct::Star)) => ArithOp::Mul,
                Some(TokenKind::Keyword(Keyword::Div)) => ArithOp::Div,
                Some(TokenKind::Keyword(Keyword::Mod)) => ArithOp::Mod,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.i += 1;
            let rhs = self.app()?;
            lhs = self.node(ExprKind::Arith(op, Box::new(lhs), Box::new(rhs)), pos)?;
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                TokenKind::Int(_)
                    | TokenKind::Str(_)
                    | TokenKind::Ident(_)
                    | TokenKind::Punct(Punct::LParen | Punct::Tilde)
                    | TokenKind::Keyword(Keyword::True | Keyword::False)
            )
        )
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let pos = f.pos;
            let arg = self.atom()?;
            f = self.node(ExprKind::Apply(Box::new(f), Box::new(arg)), pos)?;
        }
        Ok(f)
    }

    fn int(&self, magnitude: u64, negative: bool, pos: Pos) -> PResult<i64> {
        let value = if negative { 0i64.checked_sub_unsigned(magnitude) } else { i64::try_from(magnitude).ok() };
        value.ok_or_else(|| ParseError {
            pos,
            expected: "an integer within 64-bit range".into(),
            found: format!("integer `{magnitude}`"),
        })
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let kind = match self.peek() {
            Some(TokenKind::Int(n)) => {
                self.i += 1;
                ExprKind::Int(self.int(*n, false, pos)?)
            }
            Some(TokenKind::Str(s)) => {
                self.i += 1;
                ExprKind::Str(s.clone())
            }
            Some(TokenKind::Ident(name)) => {
                self.i += 1;
                ExprKind::Var(name.clone())
            }
            Some(TokenKind::Keyword(k @ (Keyword::True | Keyword::False))) => {
                self.i += 1;
                ExprKind::Bool(*k == Keyword::True)
            }
            Some(TokenKind::Punct(Punct::Tilde)) => {
                self.i += 1;
                if let Some(TokenKind::Int(n)) = self.peek() {
                    self.i += 1;
                    ExprKind::Int(self.int(*n, true, pos)?)
                } else {
                    let inner = stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.atom())?;
                    ExprKind::Neg(Box::new(inner))
                }
            }
            Some(TokenKind::Punct(Punct::LParen)) => {
                self.i += 1;
                if self.eat_punct(Punct::RParen) {
                    return self.node(ExprKind::Unit, pos);
                }
                let first = self.expr()?;
                if self.eat_punct(Punct::RParen) {
                    return Ok(first);
                }
                let sep = if self.at_punct(Punct::Comma) { Punct::Comma } else { Punct::Semi };
                if !self.at_punct(sep) {
                    return self.error("`)`, `,` or `;`");
                }
                let mut items = vec![first];
                while self.eat_punct(sep) {
                    items.push(self.expr()?);
                }
                self.expect_punct(Punct::RParen)?;
                if sep == Punct::Comma {
                    ExprKind::Tuple(items)
                } else {
                    ExprKind::Seq(items)
                }
            }
            _ => return self.error("expression"),
        };
        self.node(kind, pos)
    }
}

/// Parses a token stream. `end` is reported for errors at end of input.
pub fn parse(tokens: &[Token], end: Pos) -> Result<Program, ParseError> {
    Parser { toks: tokens, i: 0, end }.program()
}
