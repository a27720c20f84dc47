use super::lexer::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Add => "+",
            Self::Sub => "-",
            Self::Mul => "*",
            Self::Div => "div",
            Self::Mod => "mod",
        }
    }

    pub fn is_additive(self) -> bool {
        matches!(self, Self::Add | Self::Sub)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Eq => "=",
            Self::Ne => "<>",
            Self::Lt => "<",
            Self::Le => "<=",
            Self::Gt => ">",
            Self::Ge => ">=",
        }
    }
}

/// A function parameter: a name, or a tuple of names destructuring one
/// argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Name(String),
    Tuple(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct FunDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub body: Expr,
    pub pos: Pos,
}

impl PartialEq for FunDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params && self.body == other.body
    }
}

#[derive(Debug, Clone)]
pub enum Binding {
    Val { name: String, expr: Expr, pos: Pos },
    Fun(FunDecl),
}

impl PartialEq for Binding {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Val { name: n1, expr: e1, .. }, Self::Val { name: n2, expr: e2, .. }) => n1 == n2 && e1 == e2,
            (Self::Fun(a), Self::Fun(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Str(String),
    Unit,
    Var(String),
    Tuple(Vec<Expr>),
    Apply(Box<Expr>, Box<Expr>),
    Seq(Vec<Expr>),
    Let(Vec<Binding>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    AndAlso(Box<Expr>, Box<Expr>),
    OrElse(Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

/// An expression node. Equality compares structure only, not positions.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
    depth: u32,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        let child = |e: &Expr| e.depth;
        let max = |it: &mut dyn Iterator<Item = u32>| it.max().unwrap_or(0);
        let below = match &kind {
            ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Str(_) | ExprKind::Unit | ExprKind::Var(_) => 0,
            ExprKind::Tuple(es) | ExprKind::Seq(es) => max(&mut es.iter().map(child)),
            ExprKind::Apply(a, b)
            | ExprKind::AndAlso(a, b)
            | ExprKind::OrElse(a, b)
            | ExprKind::Arith(_, a, b)
            | ExprKind::Cmp(_, a, b) => a.depth.max(b.depth),
            ExprKind::If(a, b, c) => a.depth.max(b.depth).max(c.depth),
            ExprKind::Neg(a) => a.depth,
            ExprKind::Let(bs, body) => {
                let bound = bs.iter().map(|b| match b {
                    Binding::Val { expr, .. } => expr.depth,
                    Binding::Fun(f) => f.body.depth,
                });
                max(&mut bound.chain(std::iter::once(body.depth)))
            }
        };
        Self { kind, pos, depth: below + 1 }
    }

    /// Height of the tree rooted here; leaves have depth 1.
    pub fn depth(&self) -> u32 {
        self.depth
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Int(a), Int(b)) => a == b,
            (Bool(a), Bool(b)) => a == b,
            (Str(a), Str(b)) | (Var(a), Var(b)) => a == b,
            (Unit, Unit) => true,
            (Tuple(a), Tuple(b)) | (Seq(a), Seq(b)) => a == b,
            (Apply(f1, a1), Apply(f2, a2))
            | (AndAlso(f1, a1), AndAlso(f2, a2))
            | (OrElse(f1, a1), OrElse(f2, a2)) => f1 == f2 && a1 == a2,
            (Arith(o1, l1, r1), Arith(o2, l2, r2)) => o1 == o2 && l1 == l2 && r1 == r2,
            (Cmp(o1, l1, r1), Cmp(o2, l2, r2)) => o1 == o2 && l1 == l2 && r1 == r2,
            (Let(b1, e1), Let(b2, e2)) => b1 == b2 && e1 == e2,
            (If(c1, t1, e1), If(c2, t2, e2)) => c1 == c2 && t1 == t2 && e1 == e2,
            (Neg(a), Neg(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Decl {
    Open { name: String, pos: Pos },
    Fun(FunDecl),
    Val { name: String, expr: Expr, pos: Pos },
    Expr(Expr),
}

impl PartialEq for Decl {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Open { name: a, .. }, Self::Open { name: b, .. }) => a == b,
            (Self::Fun(a), Self::Fun(b)) => a == b,
            (Self::Val { name: n1, expr: e1, .. }, Self::Val { name: n2, expr: e2, .. }) => n1 == n2 && e1 == e2,
            (Self::Expr(a), Self::Expr(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub decls: Vec<Decl>,
}
