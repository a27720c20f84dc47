//! The brick language: an SML subset with curried application, `let`
//! blocks, conditionals, and a tiered library of placement builtins opened
//! with `open Level_k`.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod pretty;

use std::sync::Arc;

use thiserror::Error;

use crate::palette::Palette;

pub use ast::{ArithOp, Binding, CmpOp, Decl, Expr, ExprKind, FunDecl, Param, Program};
pub use eval::{evaluate, Directive, EvalError, EvalErrorKind, EvalOptions, EvalResult, ShowTarget};
pub use lexer::{tokenize, Keyword, LexError, Pos, Token, TokenClass, TokenKind};
pub use parser::{parse, ParseError, MAX_EXPR_DEPTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("lex error at {0}")]
    Lex(#[from] LexError),
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error("evaluation error at {0}")]
    Eval(#[from] EvalError),
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            Self::Lex(e) => e.pos,
            Self::Parse(e) => e.pos,
            Self::Eval(e) => e.pos,
        }
    }

    /// True for errors raised before evaluation begins.
    pub fn is_syntax(&self) -> bool {
        !matches!(self, Self::Eval(_))
    }
}

pub fn parse_source(src: &str) -> Result<Program, DslError> {
    let tokens = tokenize(src)?;
    Ok(parse(&tokens, lexer::end_pos(src))?)
}

pub fn run(src: &str, palette: Arc<Palette>) -> Result<EvalResult, DslError> {
    run_with(src, palette, EvalOptions::default())
}

pub fn run_with(src: &str, palette: Arc<Palette>, opts: EvalOptions) -> Result<EvalResult, DslError> {
    let program = parse_source(src)?;
    Ok(evaluate(&program, palette, opts)?)
}
