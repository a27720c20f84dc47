//! Tree-walking evaluator.
//!
//! Values are dynamically typed. Builtins are curried: each takes its
//! arguments one at a time and fires once the last one arrives.

use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use super::ast::{ArithOp, Binding, CmpOp, Decl, Expr, ExprKind, FunDecl, Param, Program};
use super::lexer::Pos;
use crate::export::Artifact;
use crate::palette::{BrickName, Palette};
use crate::space::{Coord2, Coord3, Dim2, Dim3, Region2, Region3, Space2D, Space3D, SpaceError};

/// Highest `Level_k` library.
pub const MAX_LEVEL: u8 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Maximum nesting of function applications.
    pub max_depth: usize,
    /// Maximum number of evaluation steps before giving up.
    pub max_steps: u64,
    /// Maximum cells a single placement may touch.
    pub work_limit: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { max_depth: 10_000, max_steps: 50_000_000, work_limit: 16_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShowTarget {
    Show2D,
    Show3D,
    Minecraft,
    Stl,
    LDraw,
    Binvox,
}

impl ShowTarget {
    pub const ALL: [ShowTarget; 6] =
        [Self::Show2D, Self::Show3D, Self::Minecraft, Self::Stl, Self::LDraw, Self::Binvox];

    pub fn builtin_name(self) -> &'static str {
        match self {
            Self::Show2D => "show2D",
            Self::Show3D => "show3D",
            Self::Minecraft => "showMC",
            Self::Stl => "showSTL",
            Self::LDraw => "showLDraw",
            Self::Binvox => "showBinvox",
        }
    }
}

/// A recorded request to output the artifact under a name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub target: ShowTarget,
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub space: Option<Artifact>,
    pub directives: Vec<Directive>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("unknown library `{0}` (expected Level_1 to Level_{MAX_LEVEL})")]
    UnknownLevel(String),
    #[error("{context}: expected {expected}, found {found}")]
    Type { context: String, expected: &'static str, found: &'static str },
    #[error("{context}: expected a {expected}-tuple, found a {found}-tuple")]
    Arity { context: String, expected: usize, found: usize },
    #[error("{0} used before the space is built")]
    NoSpace(&'static str),
    #[error("{0} called after the space was already built")]
    AlreadyBuilt(&'static str),
    #[error("{op} needs a {expected} space")]
    WrongSpace { op: &'static str, expected: &'static str },
    #[error("{0} cannot place EMPTY; it is only valid as a brick function result")]
    EmptyPlacement(&'static str),
    #[error("{0} cannot be used inside a brick function")]
    InBrickFunction(&'static str),
    #[error("brick function failed at {coord}: {source}")]
    BrickFunction { coord: String, source: Box<EvalErrorKind> },
    #[error("division by zero")]
    DivByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("recursion deeper than {0} calls")]
    DepthLimit(usize),
    #[error("evaluation exceeded {0} steps")]
    StepLimit(u64),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct EvalError {
    pub pos: Pos,
    pub kind: EvalErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Builtin {
    Not,
    Build2D,
    Put2D,
    Line2D,
    Circle2D,
    Ring2D,
    SetMySpace2D,
    ClearMySpace2D,
    Build3D,
    Put3D,
    SetMySpace3D,
    ClearMySpace3D,
    TraverseWithin,
    Show(ShowTarget),
}

impl Builtin {
    const LIBRARY: [Builtin; 13] = [
        Self::Build2D,
        Self::Put2D,
        Self::Line2D,
        Self::Circle2D,
        Self::Ring2D,
        Self::SetMySpace2D,
        Self::ClearMySpace2D,
        Self::Build3D,
        Self::Put3D,
        Self::SetMySpace3D,
        Self::ClearMySpace3D,
        Self::TraverseWithin,
        Self::Show(ShowTarget::Show2D),
    ];

    fn name(self) -> &'static str {
        match self {
            Self::Not => "not",
            Self::Build2D => "build2D",
            Self::Put2D => "put2D",
            Self::Line2D => "line2D",
            Self::Circle2D => "circle2D",
            Self::Ring2D => "ring2D",
            Self::SetMySpace2D => "setMySpace2D",
            Self::ClearMySpace2D => "clearMySpace2D",
            Self::Build3D => "build3D",
            Self::Put3D => "put3D",
            Self::SetMySpace3D => "setMySpace3D",
            Self::ClearMySpace3D => "clearMySpace3D",
            Self::TraverseWithin => "traverseWithin",
            Self::Show(t) => t.builtin_name(),
        }
    }

    fn arity(self) -> usize {
        match self {
            Self::Not | Self::Build2D | Self::Build3D | Self::ClearMySpace2D | Self::ClearMySpace3D | Self::Show(_) => 1,
            Self::SetMySpace2D | Self::SetMySpace3D => 2,
            Self::Put2D | Self::Line2D | Self::Circle2D | Self::Ring2D | Self::Put3D | Self::TraverseWithin => 3,
        }
    }

    /// The first `Level_k` library that exports this builtin.
    fn level(self) -> u8 {
        match self {
            Self::Not => 0,
            Self::Build2D | Self::Put2D | Self::Show(_) => 1,
            Self::Line2D => 2,
            Self::Circle2D | Self::Ring2D | Self::SetMySpace2D | Self::ClearMySpace2D => 3,
            Self::Build3D | Self::Put3D | Self::SetMySpace3D | Self::ClearMySpace3D => 4,
            Self::TraverseWithin => 5,
        }
    }

    fn all() -> impl Iterator<Item = Builtin> {
        Self::LIBRARY
            .into_iter()
            .chain(ShowTarget::ALL[1..].iter().map(|&t| Self::Show(t)))
            .chain(std::iter::once(Self::Not))
    }
}

pub struct Closure<'a> {
    fun: &'a FunDecl,
    env: Env<'a>,
    args: Vec<Value<'a>>,
}

pub struct Partial<'a> {
    op: Builtin,
    args: Vec<Value<'a>>,
}

#[derive(Clone)]
pub enum Value<'a> {
    Int(i64),
    Bool(bool),
    Str(Rc<str>),
    Tuple(Rc<[Value<'a>]>),
    Brick(BrickName),
    Empty,
    Unit,
    Closure(Rc<Closure<'a>>),
    Builtin(Rc<Partial<'a>>),
}

impl Value<'_> {
    pub fn type_name(&self) -> &'static str {
        match self {
            Self::Int(_) => "int",
            Self::Bool(_) => "bool",
            Self::Str(_) => "string",
            Self::Tuple(_) => "tuple",
            Self::Brick(_) => "brick",
            Self::Empty => "EMPTY",
            Self::Unit => "unit",
            Self::Closure(_) | Self::Builtin(_) => "function",
        }
    }
}

impl fmt::Debug for Value<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(n) => write!(f, "{n}"),
            Self::Bool(b) => write!(f, "{b}"),
            Self::Str(s) => write!(f, "{s:?}"),
            Self::Tuple(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v:?}")?;
                }
                f.write_str(")")
            }
            Self::Brick(b) => write!(f, "{b}"),
            Self::Empty => f.write_str("EMPTY"),
            Self::Unit => f.write_str("()"),
            Self::Closure(c) => write!(f, "<fn {}>", c.fun.name),
            Self::Builtin(p) => write!(f, "<builtin {}>", p.op.name()),
        }
    }
}

struct Frame<'a> {
    name: &'a str,
    value: Value<'a>,
    next: Env<'a>,
}

/// Persistent linked environment; extending never disturbs captured copies.
#[derive(Clone, Default)]
pub struct Env<'a>(Option<Rc<Frame<'a>>>);

impl<'a> Env<'a> {
    fn bind(&self, name: &'a str, value: Value<'a>) -> Self {
        Env(Some(Rc::new(Frame { name, value, next: self.clone() })))
    }

    fn lookup(&self, name: &str) -> Option<&Value<'a>> {
        let mut cur = self.0.as_deref();
        while let Some(frame) = cur {
            if frame.name == name {
                return Some(&frame.value);
            }
            cur = frame.next.0.as_deref();
        }
        None
    }
}

impl Drop for Env<'_> {
    // Unlink iteratively so that long environments do not overflow the stack.
    fn drop(&mut self) {
        let mut next = self.0.take();
        while let Some(rc) = next {
            match Rc::try_unwrap(rc) {
                Ok(mut frame) => next = frame.next.0.take(),
                Err(_) => break,
            }
        }
    }
}

type Res<T> = Result<T, EvalErrorKind>;

fn type_error<T>(context: impl Into<String>, expected: &'static str, found: &Value) -> Res<T> {
    Err(EvalErrorKind::Type { context: context.into(), expected, found: found.type_name() })
}

fn int(v: &Value, context: &str) -> Res<i64> {
    match v {
        Value::Int(n) => Ok(*n),
        _ => type_error(context, "int", v),
    }
}

fn ints<const N: usize>(v: &Value, context: &str) -> Res<[i64; N]> {
    let Value::Tuple(items) = v else {
        return type_error(context, "tuple of ints", v);
    };
    if items.len() != N {
        return Err(EvalErrorKind::Arity { context: context.into(), expected: N, found: items.len() });
    }
    let mut out = [0; N];
    for (slot, item) in out.iter_mut().zip(items.iter()) {
        *slot = int(item, context)?;
    }
    Ok(out)
}

fn coord2(v: &Value, context: &str) -> Res<Coord2> {
    let [x, y] = ints::<2>(v, context)?;
    Ok(Coord2::new(x, y))
}

fn coord3(v: &Value, context: &str) -> Res<Coord3> {
    let [x, y, z] = ints::<3>(v, context)?;
    Ok(Coord3::new(x, y, z))
}

fn dim2(v: &Value, context: &str) -> Res<Dim2> {
    let [w, d] = ints::<2>(v, context)?;
    Ok(Dim2::new(w, d)?)
}

fn dim3(v: &Value, context: &str) -> Res<Dim3> {
    let [w, h, d] = ints::<3>(v, context)?;
    Ok(Dim3::new(w, h, d)?)
}

fn brick(v: &Value, op: &'static str) -> Res<BrickName> {
    match v {
        Value::Brick(b) => Ok(b.clone()),
        Value::Empty => Err(EvalErrorKind::EmptyPlacement(op)),
        _ => type_error(op, "brick", v),
    }
}

fn string(v: &Value, op: &str) -> Res<String> {
    match v {
        Value::Str(s) => Ok(s.to_string()),
        _ => type_error(op, "string", v),
    }
}

fn unit(v: &Value, op: &str) -> Res<()> {
    match v {
        Value::Unit => Ok(()),
        _ => type_error(op, "()", v),
    }
}

fn coord_value<'a>(axes: &[i64]) -> Value<'a> {
    Value::Tuple(axes.iter().map(|&a| Value::Int(a)).collect())
}

fn equal(a: &Value, b: &Value) -> Res<bool> {
    use Value::*;
    Ok(match (a, b) {
        (Int(x), Int(y)) => x == y,
        (Bool(x), Bool(y)) => x == y,
        (Str(x), Str(y)) => x == y,
        (Brick(x), Brick(y)) => x == y,
        (Empty, Empty) | (Unit, Unit) => true,
        (Brick(_), Empty) | (Empty, Brick(_)) => false,
        (Tuple(xs), Tuple(ys)) => {
            if xs.len() != ys.len() {
                return Err(EvalErrorKind::Arity { context: "comparison".into(), expected: xs.len(), found: ys.len() });
            }
            for (x, y) in xs.iter().zip(ys.iter()) {
                if !equal(x, y)? {
                    return Ok(false);
                }
            }
            true
        }
        (Closure(_) | Builtin(_), _) => return type_error("comparison", "a comparable value", a),
        _ => return type_error("comparison", a.type_name(), b),
    })
}

/// SML `div`: rounds towards negative infinity.
fn floor_div(a: i64, b: i64) -> Res<i64> {
    if b == 0 {
        return Err(EvalErrorKind::DivByZero);
    }
    let q = a.checked_div(b).ok_or(EvalErrorKind::Overflow)?;
    Ok(if a % b != 0 && ((a < 0) != (b < 0)) { q - 1 } else { q })
}

/// SML `mod`: the result takes the sign of the divisor.
fn floor_mod(a: i64, b: i64) -> Res<i64> {
    if b == 0 {
        return Err(EvalErrorKind::DivByZero);
    }
    let r = a.checked_rem(b).unwrap_or(0);
    Ok(if r != 0 && ((r < 0) != (b < 0)) { r + b } else { r })
}

fn arith(op: ArithOp, a: i64, b: i64) -> Res<i64> {
    let r = match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => return floor_div(a, b),
        ArithOp::Mod => return floor_mod(a, b),
    };
    r.ok_or(EvalErrorKind::Overflow)
}

enum TraverseFail {
    Space(SpaceError),
    Eval(EvalError),
}

impl From<SpaceError> for TraverseFail {
    fn from(e: SpaceError) -> Self {
        Self::Space(e)
    }
}

struct Interp {
    palette: Arc<Palette>,
    opts: EvalOptions,
    space: Option<Artifact>,
    in_brick_fn: bool,
    directives: Vec<Directive>,
    depth: usize,
    steps: u64,
}

impl Interp {
    fn tick(&mut self) -> Res<()> {
        self.steps += 1;
        if self.steps > self.opts.max_steps {
            return Err(EvalErrorKind::StepLimit(self.opts.max_steps));
        }
        Ok(())
    }

    fn eval<'a>(&mut self, e: &'a Expr, env: &Env<'a>) -> Result<Value<'a>, EvalError> {
        stacker::maybe_grow(128 * 1024, 2 * 1024 * 1024, || self.eval_inner(e, env))
    }

    fn eval_inner<'a>(&mut self, e: &'a Expr, env: &Env<'a>) -> Result<Value<'a>, EvalError> {
        let at = |kind: EvalErrorKind| EvalError { pos: e.pos, kind };
        self.tick().map_err(at)?;
        Ok(match &e.kind {
            ExprKind::Int(n) => Value::Int(*n),
            ExprKind::Bool(b) => Value::Bool(*b),
            ExprKind::Str(s) => Value::Str(s.as_str().into()),
            ExprKind::Unit => Value::Unit,
            ExprKind::Var(name) => self.lookup(name, env).map_err(at)?,
            ExprKind::Tuple(items) => {
                let values = items.iter().map(|i| self.eval(i, env)).collect::<Result<Vec<_>, _>>()?;
                Value::Tuple(values.into())
            }
            ExprKind::Seq(items) => {
                let mut last = Value::Unit;
                for item in items {
                    last = self.eval(item, env)?;
                }
                last
            }
            ExprKind::Apply(f, arg) => {
                let fv = self.eval(f, env)?;
                let av = self.eval(arg, env)?;
                self.apply(fv, av, e.pos)?
            }
            ExprKind::Let(bindings, body) => {
                let mut scope = env.clone();
                for b in bindings {
                    scope = match b {
                        Binding::Val { name, expr, .. } => {
                            let v = self.eval(expr, &scope)?;
                            scope.bind(name, v)
                        }
                        Binding::Fun(f) => scope.bind(&f.name, closure(f, &scope)),
                    };
                }
                self.eval(body, &scope)?
            }
            ExprKind::If(c, t, f) => {
                if self.condition(c, env, "if condition")? {
                    self.eval(t, env)?
                } else {
                    self.eval(f, env)?
                }
            }
            ExprKind::AndAlso(l, r) => {
                Value::Bool(self.condition(l, env, "andalso")? && self.condition(r, env, "andalso")?)
            }
            ExprKind::OrElse(l, r) => {
                Value::Bool(self.condition(l, env, "orelse")? || self.condition(r, env, "orelse")?)
            }
            ExprKind::Arith(op, l, r) => {
                let a = self.eval(l, env)?;
                let b = self.eval(r, env)?;
                let a = int(&a, op.symbol()).map_err(at)?;
                let b = int(&b, op.symbol()).map_err(at)?;
                Value::Int(arith(*op, a, b).map_err(at)?)
            }
            ExprKind::Cmp(op, l, r) => {
                let a = self.eval(l, env)?;
                let b = self.eval(r, env)?;
                Value::Bool(compare(*op, &a, &b).map_err(at)?)
            }
            ExprKind::Neg(inner) => {
                let v = self.eval(inner, env)?;
                let n = int(&v, "~").map_err(at)?;
                Value::Int(n.checked_neg().ok_or(EvalErrorKind::Overflow).map_err(at)?)
            }
        })
    }

    fn condition<'a>(&mut self, e: &'a Expr, env: &Env<'a>, context: &str) -> Result<bool, EvalError> {
        match self.eval(e, env)? {
            Value::Bool(b) => Ok(b),
            other => type_error(context, "bool", &other).map_err(|kind| EvalError { pos: e.pos, kind }),
        }
    }

    fn lookup<'a>(&self, name: &str, env: &Env<'a>) -> Res<Value<'a>> {
        if let Some(v) = env.lookup(name) {
            return Ok(v.clone());
        }
        if name == "EMPTY" {
            return Ok(Value::Empty);
        }
        if let Ok(def) = self.palette.lookup(name) {
            return Ok(Value::Brick(def.name.clone()));
        }
        Err(EvalErrorKind::Unbound(name.to_string()))
    }

    fn apply<'a>(&mut self, f: Value<'a>, arg: Value<'a>, pos: Pos) -> Result<Value<'a>, EvalError> {
        let at = |kind: EvalErrorKind| EvalError { pos, kind };
        match f {
            Value::Closure(c) => {
                let mut args = c.args.clone();
                args.push(arg);
                if args.len() < c.fun.params.len() {
                    return Ok(Value::Closure(Rc::new(Closure { fun: c.fun, env: c.env.clone(), args })));
                }
                let fresh = Value::Closure(Rc::new(Closure { fun: c.fun, env: c.env.clone(), args: Vec::new() }));
                let mut env = c.env.bind(&c.fun.name, fresh);
                for (param, value) in c.fun.params.iter().zip(args) {
                    env = bind_param(&env, param, value, &c.fun.name).map_err(at)?;
                }
                if self.depth >= self.opts.max_depth {
                    return Err(at(EvalErrorKind::DepthLimit(self.opts.max_depth)));
                }
                self.depth += 1;
                let result = self.eval(&c.fun.body, &env);
                self.depth -= 1;
                result
            }
            Value::Builtin(p) => {
                let mut args = p.args.clone();
                args.push(arg);
                if args.len() < p.op.arity() {
                    return Ok(Value::Builtin(Rc::new(Partial { op: p.op, args })));
                }
                self.call_builtin(p.op, &args, pos)
            }
            other => type_error("application", "function", &other).map_err(at),
        }
    }

    fn require_space(&mut self, op: &'static str) -> Res<&mut Artifact> {
        if self.in_brick_fn {
            return Err(EvalErrorKind::InBrickFunction(op));
        }
        self.space.as_mut().ok_or(EvalErrorKind::NoSpace(op))
    }

    fn flat(&mut self, op: &'static str) -> Res<&mut Space2D> {
        match self.require_space(op)? {
            Artifact::Flat(s) => Ok(s),
            Artifact::Solid(_) => Err(EvalErrorKind::WrongSpace { op, expected: "2D" }),
        }
    }

    fn solid(&mut self, op: &'static str) -> Res<&mut Space3D> {
        match self.require_space(op)? {
            Artifact::Solid(s) => Ok(s),
            Artifact::Flat(_) => Err(EvalErrorKind::WrongSpace { op, expected: "3D" }),
        }
    }

    fn build(&mut self, op: &'static str, artifact: Artifact) -> Res<()> {
        if self.in_brick_fn {
            return Err(EvalErrorKind::InBrickFunction(op));
        }
        if self.space.is_some() {
            return Err(EvalErrorKind::AlreadyBuilt(op));
        }
        self.space = Some(artifact);
        Ok(())
    }

    fn call_builtin<'a>(&mut self, op: Builtin, args: &[Value<'a>], pos: Pos) -> Result<Value<'a>, EvalError> {
        let at = |kind: EvalErrorKind| EvalError { pos, kind };
        let name = op.name();
        match op {
            Builtin::Not => match &args[0] {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                other => type_error(name, "bool", other).map_err(at),
            },
            Builtin::TraverseWithin => self.traverse(&args[0], &args[1], &args[2], pos),
            _ => {
                self.placement(op, args).map_err(at)?;
                if let Builtin::Show(_) = op {
                    self.directives.last_mut().expect("show records a directive").pos = pos;
                }
                Ok(Value::Unit)
            }
        }
    }

    fn placement(&mut self, op: Builtin, args: &[Value]) -> Res<()> {
        let name = op.name();
        let limit = Some(self.opts.work_limit);
        match op {
            Builtin::Build2D => {
                let mut s = Space2D::with_palette(dim2(&args[0], name)?, self.palette.clone());
                s.set_work_limit(limit);
                self.build(name, s.into())?;
            }
            Builtin::Build3D => {
                let mut s = Space3D::with_palette(dim3(&args[0], name)?, self.palette.clone());
                s.set_work_limit(limit);
                self.build(name, s.into())?;
            }
            Builtin::Put2D => {
                let (size, b, origin) = (dim2(&args[0], name)?, brick(&args[1], name)?, coord2(&args[2], name)?);
                self.flat(name)?.put(size, &b, origin)?;
            }
            Builtin::Put3D => {
                let (size, b, origin) = (dim3(&args[0], name)?, brick(&args[1], name)?, coord3(&args[2], name)?);
                self.solid(name)?.put(size, &b, origin)?;
            }
            Builtin::Line2D => {
                let (b, p0, p1) = (brick(&args[0], name)?, coord2(&args[1], name)?, coord2(&args[2], name)?);
                self.flat(name)?.line(&b, p0, p1)?;
            }
            Builtin::Circle2D | Builtin::Ring2D => {
                let (r, b, c) = (int(&args[0], name)?, brick(&args[1], name)?, coord2(&args[2], name)?);
                let space = self.flat(name)?;
                if op == Builtin::Circle2D {
                    space.circle(r, &b, c)?;
                } else {
                    space.ring(r, &b, c)?;
                }
            }
            Builtin::SetMySpace2D => {
                let region = Region2::new(coord2(&args[0], name)?, dim2(&args[1], name)?);
                self.flat(name)?.set_region(region)?;
            }
            Builtin::SetMySpace3D => {
                let region = Region3::new(coord3(&args[0], name)?, dim3(&args[1], name)?);
                self.solid(name)?.set_region(region)?;
            }
            Builtin::ClearMySpace2D => {
                unit(&args[0], name)?;
                self.flat(name)?.clear_region();
            }
            Builtin::ClearMySpace3D => {
                unit(&args[0], name)?;
                self.solid(name)?.clear_region();
            }
            Builtin::Show(target) => {
                let artifact_name = string(&args[0], name)?;
                if self.in_brick_fn {
                    return Err(EvalErrorKind::InBrickFunction(name));
                }
                match (&self.space, target) {
                    (None, _) => return Err(EvalErrorKind::NoSpace(name)),
                    (Some(Artifact::Solid(_)), ShowTarget::Show2D) => {
                        return Err(EvalErrorKind::WrongSpace { op: name, expected: "2D" })
                    }
                    (Some(Artifact::Flat(_)), ShowTarget::Show3D) => {
                        return Err(EvalErrorKind::WrongSpace { op: name, expected: "3D" })
                    }
                    _ => {}
                }
                self.directives.push(Directive { target, name: artifact_name, pos: Pos::default() });
            }
            Builtin::Not | Builtin::TraverseWithin => unreachable!("handled by call_builtin"),
        }
        Ok(())
    }

    fn traverse<'a>(&mut self, lo: &Value<'a>, hi: &Value<'a>, f: &Value<'a>, pos: Pos) -> Result<Value<'a>, EvalError> {
        enum Bounds {
            Flat(Coord2, Coord2),
            Solid(Coord3, Coord3),
        }
        let at = |kind: EvalErrorKind| EvalError { pos, kind };
        let name = "traverseWithin";
        let bounds = match self.require_space(name).map_err(at)? {
            Artifact::Flat(_) => Bounds::Flat(coord2(lo, name).map_err(at)?, coord2(hi, name).map_err(at)?),
            Artifact::Solid(_) => Bounds::Solid(coord3(lo, name).map_err(at)?, coord3(hi, name).map_err(at)?),
        };
        if !matches!(f, Value::Closure(_) | Value::Builtin(_)) {
            return type_error(name, "brick function", f).map_err(at);
        }

        let mut space = self.space.take().expect("checked above");
        self.in_brick_fn = true;
        let result = match (&mut space, bounds) {
            (Artifact::Flat(s), Bounds::Flat(lo, hi)) => {
                s.traverse_within(lo, hi, |c| self.brick_at(f, coord_value(&[c.x, c.y]), c.to_string(), pos))
            }
            (Artifact::Solid(s), Bounds::Solid(lo, hi)) => s.traverse_within(lo, hi, |c| {
                self.brick_at(f, coord_value(&[c.x, c.y, c.z]), c.to_string(), pos)
            }),
            _ => unreachable!("bounds follow the space kind"),
        };
        self.in_brick_fn = false;
        self.space = Some(space);
        match result {
            Ok(_) => Ok(Value::Unit),
            Err(TraverseFail::Space(e)) => Err(at(e.into())),
            Err(TraverseFail::Eval(e)) => Err(e),
        }
    }

    fn brick_at<'a>(
        &mut self,
        f: &Value<'a>,
        coord: Value<'a>,
        label: String,
        pos: Pos,
    ) -> Result<Option<BrickName>, TraverseFail> {
        let wrap = |e: EvalError| {
            TraverseFail::Eval(EvalError {
                pos: e.pos,
                kind: EvalErrorKind::BrickFunction { coord: label.clone(), source: Box::new(e.kind) },
            })
        };
        match self.apply(f.clone(), coord, pos).map_err(wrap)? {
            Value::Brick(b) => Ok(Some(b)),
            Value::Empty => Ok(None),
            other => Err(wrap(EvalError {
                pos,
                kind: EvalErrorKind::Type {
                    context: "brick function result".into(),
                    expected: "brick or EMPTY",
                    found: other.type_name(),
                },
            })),
        }
    }

    fn open<'a>(&self, name: &str, env: Env<'a>) -> Res<Env<'a>> {
        let level = name
            .strip_prefix("Level_")
            .and_then(|k| k.parse::<u8>().ok())
            .filter(|k| (1..=MAX_LEVEL).contains(k))
            .ok_or_else(|| EvalErrorKind::UnknownLevel(name.to_string()))?;
        Ok(Builtin::all().filter(|b| b.level() >= 1 && b.level() <= level).fold(env, |env, b| {
            env.bind(b.name(), Value::Builtin(Rc::new(Partial { op: b, args: Vec::new() })))
        }))
    }
}

fn compare(op: CmpOp, a: &Value, b: &Value) -> Res<bool> {
    use std::cmp::Ordering;
    let ord = match op {
        CmpOp::Eq => return equal(a, b),
        CmpOp::Ne => return equal(a, b).map(|e| !e),
        _ => match (a, b) {
            (Value::Int(x), Value::Int(y)) => x.cmp(y),
            (Value::Str(x), Value::Str(y)) => x.cmp(y),
            (Value::Int(_) | Value::Str(_), _) => return type_error(op.symbol(), a.type_name(), b),
            _ => return type_error(op.symbol(), "int or string", a),
        },
    };
    Ok(match op {
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
        CmpOp::Eq | CmpOp::Ne => unreachable!(),
    })
}

fn closure<'a>(fun: &'a FunDecl, env: &Env<'a>) -> Value<'a> {
    Value::Closure(Rc::new(Closure { fun, env: env.clone(), args: Vec::new() }))
}

fn bind_param<'a>(env: &Env<'a>, param: &'a Param, value: Value<'a>, fun: &str) -> Res<Env<'a>> {
    match param {
        Param::Name(n) => Ok(env.bind(n, value)),
        Param::Tuple(names) if names.len() == 1 => Ok(env.bind(&names[0], value)),
        Param::Tuple(names) => {
            let Value::Tuple(items) = &value else {
                return type_error(format!("argument of {fun}"), "tuple", &value);
            };
            if items.len() != names.len() {
                return Err(EvalErrorKind::Arity {
                    context: format!("argument of {fun}"),
                    expected: names.len(),
                    found: items.len(),
                });
            }
            Ok(names.iter().zip(items.iter()).fold(env.clone(), |env, (n, v)| env.bind(n, v.clone())))
        }
    }
}

/// Evaluates a program's declarations in order.
pub fn evaluate(program: &Program, palette: Arc<Palette>, opts: EvalOptions) -> Result<EvalResult, EvalError> {
    let mut interp = Interp { palette, opts, space: None, in_brick_fn: false, directives: Vec::new(), depth: 0, steps: 0 };
    let not = Builtin::Not;
    let mut env = Env::default().bind(not.name(), Value::Builtin(Rc::new(Partial { op: not, args: Vec::new() })));
    for decl in &program.decls {
        match decl {
            Decl::Open { name, pos } => env = interp.open(name, env).map_err(|kind| EvalError { pos: *pos, kind })?,
            Decl::Fun(f) => env = env.bind(&f.name, closure(f, &env)),
            Decl::Val { name, expr, .. } => {
                let v = interp.eval(expr, &env)?;
                env = env.bind(name, v);
            }
            Decl::Expr(e) => {
                interp.eval(e, &env)?;
            }
        }
    }
    drop(env);
    Ok(EvalResult { space: interp.space, directives: interp.directives })
}
