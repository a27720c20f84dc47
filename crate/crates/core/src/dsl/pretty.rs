//! Source rendering of ASTs. Output reparses to an equal tree.

use std::fmt::Write;

use super::ast::{Binding, Decl, Expr, ExprKind, FunDecl, Param, Program};

// Binding strength of each grammar layer; higher binds tighter.
const EXPR: u8 = 0;
const ORELSE: u8 = 1;
const ANDALSO: u8 = 2;
const CMP: u8 = 3;
const ADD: u8 = 4;
const MUL: u8 = 5;
const APP: u8 = 6;
const ATOM: u8 = 7;

fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Let(..) | ExprKind::If(..) => EXPR,
        ExprKind::OrElse(..) => ORELSE,
        ExprKind::AndAlso(..) => ANDALSO,
        ExprKind::Cmp(..) => CMP,
        ExprKind::Arith(op, ..) if op.is_additive() => ADD,
        ExprKind::Arith(..) => MUL,
        ExprKind::Apply(..) => APP,
        _ => ATOM,
    }
}

pub fn program(p: &Program) -> String {
    let mut out = String::new();
    for d in &p.decls {
        match d {
            Decl::Open { name, .. } => write!(out, "open {name}").unwrap(),
            Decl::Fun(f) => fun(&mut out, f),
            Decl::Val { name, expr: e, .. } => {
                write!(out, "val {name} = ").unwrap();
                expr_at(&mut out, e, EXPR);
            }
            Decl::Expr(e) => expr_at(&mut out, e, EXPR),
        }
        out.push_str(";\n");
    }
    out
}

pub fn expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_at(&mut out, e, EXPR);
    out
}

fn fun(out: &mut String, f: &FunDecl) {
    write!(out, "fun {}", f.name).unwrap();
    for p in &f.params {
        match p {
            Param::Name(n) => write!(out, " {n}").unwrap(),
            Param::Tuple(ns) => write!(out, " ({})", ns.join(", ")).unwrap(),
        }
    }
    out.push_str(" = ");
    expr_at(out, &f.body, EXPR);
}

fn string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if c.is_ascii_control() => write!(out, "\\{:03}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn list(out: &mut String, items: &[Expr], sep: &str) {
    out.push('(');
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        expr_at(out, e, EXPR);
    }
    out.push(')');
}

fn expr_at(out: &mut String, e: &Expr, min: u8) {
    if level(e) < min {
        out.push('(');
        expr_at(out, e, EXPR);
        out.push(')');
        return;
    }
    match &e.kind {
        ExprKind::Int(n) if *n < 0 => write!(out, "~{}", n.unsigned_abs()).unwrap(),
        ExprKind::Int(n) => write!(out, "{n}").unwrap(),
        ExprKind::Bool(b) => write!(out, "{b}").unwrap(),
        ExprKind::Str(s) => string(out, s),
        ExprKind::Unit => out.push_str("()"),
        ExprKind::Var(v) => out.push_str(v),
        ExprKind::Tuple(items) => list(out, items, ", "),
        ExprKind::Seq(items) => list(out, items, "; "),
        ExprKind::Neg(inner) => {
            out.push('~');
            // `~5` would read back as a literal, so keep the node visible.
            if matches!(inner.kind, ExprKind::Int(n) if n >= 0) {
                out.push('(');
                expr_at(out, inner, EXPR);
                out.push(')');
            } else {
                expr_at(out, inner, ATOM);
            }
        }
        ExprKind::Apply(f, a) => {
            expr_at(out, f, APP);
            out.push(' ');
            expr_at(out, a, ATOM);
        }
        ExprKind::Arith(op, l, r) => {
            let lvl = if op.is_additive() { ADD } else { MUL };
            expr_at(out, l, lvl);
            write!(out, " {} ", op.symbol()).unwrap();
            expr_at(out, r, lvl + 1);
        }
        ExprKind::Cmp(op, l, r) => {
            expr_at(out, l, ADD);
            write!(out, " {} ", op.symbol()).unwrap();
            expr_at(out, r, ADD);
        }
        ExprKind::AndAlso(l, r) => {
            expr_at(out, l, ANDALSO);
            out.push_str(" andalso ");
            expr_at(out, r, CMP);
        }
        ExprKind::OrElse(l, r) => {
            expr_at(out, l, ORELSE);
            out.push_str(" orelse ");
            expr_at(out, r, ANDALSO);
        }
        ExprKind::If(c, t, f) => {
            out.push_str("if ");
            expr_at(out, c, EXPR);
            out.push_str(" then ");
            expr_at(out, t, EXPR);
            out.push_str(" else ");
            expr_at(out, f, EXPR);
        }
        ExprKind::Let(bindings, body) => {
            out.push_str("let");
            for b in bindings {
                out.push(' ');
                match b {
                    Binding::Val { name, expr: e, .. } => {
                        write!(out, "val {name} = ").unwrap();
                        expr_at(out, e, EXPR);
                    }
                    Binding::Fun(f) => fun(out, f),
                }
            }
            out.push_str(" in ");
            match &body.kind {
                ExprKind::Seq(items) => {
                    for (i, e) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str("; ");
                        }
                        expr_at(out, e, EXPR);
                    }
                }
                _ => expr_at(out, body, EXPR),
            }
            out.push_str(" end");
        }
    }
}
