use std::collections::BTreeMap;
use std::sync::Arc;

use brickforge::dsl::{
    self, parse_source, pretty, run, run_with, Binding, CmpOp, Decl, DslError, EvalErrorKind, EvalOptions, Expr,
    ExprKind, FunDecl, Param, Pos, Program, ShowTarget,
};
use brickforge::export::Artifact;
use brickforge::{Coord2, Palette, SpaceError};
use proptest::prelude::*;

const FLAG: &str = include_str!("../../../programs/flag.bl");

fn palette() -> Arc<Palette> {
    Palette::shared_default()
}

fn eval_ok(src: &str) -> dsl::EvalResult {
    run(src, palette()).unwrap_or_else(|e| panic!("{e}"))
}

fn eval_err(src: &str) -> (Pos, EvalErrorKind) {
    match run(src, palette()) {
        Err(DslError::Eval(e)) => (e.pos, e.kind),
        other => panic!("expected evaluation error, got {other:?}"),
    }
}

fn flat(result: &dsl::EvalResult) -> BTreeMap<Coord2, String> {
    match &result.space {
        Some(Artifact::Flat(s)) => s.iter().map(|(c, b)| (c, b.to_string())).collect(),
        other => panic!("expected a 2D space, got {other:?}"),
    }
}

/// Paints rectangles into a dense grid, later ones winning.
fn rect_oracle(w: i64, d: i64, rects: &[((i64, i64), &str, (i64, i64))]) -> BTreeMap<Coord2, String> {
    let mut grid = vec![vec![None; d as usize]; w as usize];
    for &((sw, sd), brick, (ox, oy)) in rects {
        for x in ox..ox + sw {
            for y in oy..oy + sd {
                if (0..w).contains(&x) && (0..d).contains(&y) {
                    grid[x as usize][y as usize] = Some(brick);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (x, col) in grid.iter().enumerate() {
        for (y, cell) in col.iter().enumerate() {
            if let Some(b) = cell {
                out.insert(Coord2::new(x as i64, y as i64), b.to_string());
            }
        }
    }
    out
}

#[test]
fn flag_program() {
    let result = eval_ok(FLAG);
    let Some(Artifact::Flat(space)) = &result.space else { panic!() };
    assert_eq!((space.dims().width(), space.dims().depth()), (64, 64));
    let cells = flat(&result);
    let oracle = rect_oracle(64, 64, &[((37, 28), "RED", (0, 0)), ((4, 28), "WHITE", (12, 0)), ((37, 4), "WHITE", (0, 12))]);
    assert_eq!(cells, oracle);
    assert_eq!(cells.len(), 1036);
    assert_eq!(cells.values().filter(|b| *b == "RED").count(), 792);
    assert_eq!(cells.values().filter(|b| *b == "WHITE").count(), 244);
    assert_eq!(result.directives.len(), 1);
    assert_eq!(result.directives[0].target, ShowTarget::Show2D);
    assert_eq!(result.directives[0].name, "flag");
    assert_eq!(result.directives[0].pos.line, 16);
}

#[test]
fn show_before_build() {
    let (pos, kind) = eval_err("open Level_3; show2D \"x\";");
    assert_eq!(kind, EvalErrorKind::NoSpace("show2D"));
    assert_eq!((pos.line, pos.column), (1, 15));
}

#[test]
fn traverse_is_gated_on_level_5() {
    let body = "build2D (8,8); fun g (x,y) = if (x+y) mod 2 = 0 then BLACK else WHITE; traverseWithin (0,0) (7,7) g; show2D \"cb\";";
    let (_, kind) = eval_err(&format!("open Level_3; {body}"));
    assert_eq!(kind, EvalErrorKind::Unbound("traverseWithin".into()));
    let cells = flat(&eval_ok(&format!("open Level_5; {body}")));
    assert_eq!(cells.len(), 64);
    assert_eq!(cells.values().filter(|b| *b == "BLACK").count(), 32);
    for (c, b) in &cells {
        assert_eq!(b == "BLACK", (c.x + c.y) % 2 == 0);
    }
}

#[test]
fn levels_are_cumulative_and_checked() {
    let (_, kind) = eval_err("open Level_1; build2D (4,4); line2D RED (0,0) (3,3);");
    assert_eq!(kind, EvalErrorKind::Unbound("line2D".into()));
    assert_eq!(flat(&eval_ok("open Level_2; build2D (4,4); line2D RED (0,0) (3,3);")).len(), 4);
    let (_, kind) = eval_err("open Level_9;");
    assert_eq!(kind, EvalErrorKind::UnknownLevel("Level_9".into()));
    let (_, kind) = eval_err("open Level_3; build3D (2,2,2);");
    assert_eq!(kind, EvalErrorKind::Unbound("build3D".into()));
}

#[test]
fn lexical_scoping_and_shadowing() {
    let src = "open Level_1; build2D (10,10);
        val x = 1;
        fun at y = put2D (1,1) RED (x, y);
        val x = 5;
        let val x = 2 val y = let val x = 3 in x end in put2D (1,1) BLUE (x, y) end;
        at 7;
        put2D (1,1) GREEN (x, 0);";
    let cells = flat(&eval_ok(src));
    assert_eq!(cells.get(&Coord2::new(2, 3)).map(String::as_str), Some("BLUE"));
    assert_eq!(cells.get(&Coord2::new(1, 7)).map(String::as_str), Some("RED"));
    assert_eq!(cells.get(&Coord2::new(5, 0)).map(String::as_str), Some("GREEN"));
    assert_eq!(cells.len(), 3);
}

#[test]
fn short_circuit() {
    let src = "open Level_1; build2D (4,4);
        val a = false andalso 1 div 0 = 0;
        val b = true orelse undefinedName;
        if not a andalso b then put2D (1,1) RED (0,0) else ();";
    assert_eq!(flat(&eval_ok(src)).len(), 1);
    let (_, kind) = eval_err("val a = true andalso 1 div 0 = 0;");
    assert_eq!(kind, EvalErrorKind::DivByZero);
    let (_, kind) = eval_err("val b = false orelse nope;");
    assert_eq!(kind, EvalErrorKind::Unbound("nope".into()));
}

#[test]
fn recursion_and_currying() {
    let src = "open Level_2; build2D (40,3);
        fun fact n = if n = 0 then 1 else n * fact (n - 1);
        fun row b y n = if n = 0 then () else (put2D (1,1) b (n - 1, y); row b y (n - 1));
        val redRow = row RED;
        redRow 0 (fact 4);
        val dot = put2D (1,1) BLUE;
        dot (0, 2);";
    let cells = flat(&eval_ok(src));
    assert_eq!(cells.len(), 25);
    assert_eq!(cells.values().filter(|b| *b == "RED").count(), 24);
}

#[test]
fn sml_integer_division() {
    let src = "open Level_1; build2D (20,20);
        fun check b = if b then () else put2D (1,1) RED (0,0);
        check (~7 div 2 = ~4); check (~7 mod 2 = 1); check (7 mod ~2 = ~1); check (7 div ~2 = ~4);
        check (6 div 3 = 2); check (~(3) = ~3); check (1 + 2 * 3 - 4 = 3); check (10 - 2 - 3 = 5);";
    assert!(flat(&eval_ok(src)).is_empty());
    assert_eq!(eval_err("val x = 9223372036854775807 + 1;").1, EvalErrorKind::Overflow);
    assert_eq!(eval_err("val x = ~9223372036854775808 div ~1;").1, EvalErrorKind::Overflow);
    assert_eq!(eval_err("val x = 3 mod 0;").1, EvalErrorKind::DivByZero);
}

#[test]
fn runaway_recursion_hits_depth_limit() {
    let (_, kind) = eval_err("fun f x = f (x + 1); f 0;");
    assert_eq!(kind, EvalErrorKind::DepthLimit(10_000));
    let opts = EvalOptions { max_steps: 10_000, ..EvalOptions::default() };
    let err = run_with("fun f n = if n = 0 then 0 else f (n - 1) + f (n - 1); f 40;", palette(), opts).unwrap_err();
    assert!(matches!(err, DslError::Eval(e) if e.kind == EvalErrorKind::StepLimit(10_000)));
}

#[test]
fn placement_errors() {
    assert_eq!(eval_err("open Level_1; put2D (1,1) RED (0,0);").1, EvalErrorKind::NoSpace("put2D"));
    assert_eq!(eval_err("open Level_1; build2D (2,2); build2D (2,2);").1, EvalErrorKind::AlreadyBuilt("build2D"));
    assert_eq!(eval_err("open Level_1; build2D (2,2); put2D (1,1) EMPTY (0,0);").1, EvalErrorKind::EmptyPlacement("put2D"));
    assert!(matches!(
        eval_err("open Level_1; build2D (0,2);").1,
        EvalErrorKind::Space(SpaceError::Dimension { .. })
    ));
    assert!(matches!(
        eval_err("open Level_3; build2D (4,4); circle2D ~1 RED (0,0);").1,
        EvalErrorKind::Space(SpaceError::NegativeRadius(-1))
    ));
    assert!(matches!(eval_err("open Level_4; build2D (4,4); put3D (1,1,1) RED (0,0,0);").1, EvalErrorKind::WrongSpace { .. }));
    assert!(matches!(eval_err("open Level_1; build2D (4,4); show3D \"x\";").1, EvalErrorKind::WrongSpace { .. }));
}

#[test]
fn type_and_arity_errors_carry_positions() {
    let (pos, kind) = eval_err("open Level_1;\nbuild2D (4,4);\nput2D (1,1) 7 (0,0);");
    assert!(matches!(kind, EvalErrorKind::Type { expected: "brick", found: "int", .. }));
    assert_eq!((pos.line, pos.column), (3, 1));
    let (pos, kind) = eval_err("open Level_1;\nbuild2D (4,4,4);");
    assert!(matches!(kind, EvalErrorKind::Arity { expected: 2, found: 3, .. }));
    assert_eq!(pos.line, 2);
    let (_, kind) = eval_err("fun f (a,b) = a; f (1,2,3);");
    assert!(matches!(kind, EvalErrorKind::Arity { expected: 2, found: 3, .. }));
    let (_, kind) = eval_err("val x = 1 2;");
    assert!(matches!(kind, EvalErrorKind::Type { expected: "function", .. }));
    let (_, kind) = eval_err("val x = if 1 then 2 else 3;");
    assert!(matches!(kind, EvalErrorKind::Type { expected: "bool", .. }));
    let (_, kind) = eval_err("val x = (1, 2) = (1, 2, 3);");
    assert!(matches!(kind, EvalErrorKind::Arity { .. }));
}

#[test]
fn brick_functions() {
    let (_, kind) = eval_err(
        "open Level_5; build2D (4,4); fun g (x,y) = (put2D (1,1) RED (0,0); RED); traverseWithin (0,0) (1,1) g;",
    );
    assert!(matches!(kind, EvalErrorKind::BrickFunction { ref source, .. } if **source == EvalErrorKind::InBrickFunction("put2D")));
    let (_, kind) = eval_err("open Level_5; build2D (4,4); fun g (x,y) = if 10 div (x - 2) > 0 then RED else EMPTY; traverseWithin (0,0) (3,0) g;");
    match kind {
        EvalErrorKind::BrickFunction { coord, source } => {
            assert_eq!(coord, "(2,0)");
            assert_eq!(*source, EvalErrorKind::DivByZero);
        }
        other => panic!("{other:?}"),
    }
    let (_, kind) = eval_err("open Level_5; build2D (4,4); fun g c = 3; traverseWithin (0,0) (3,0) g;");
    assert!(matches!(kind, EvalErrorKind::BrickFunction { .. }));
    assert!(flat(&eval_ok("open Level_5; build2D (4,4); fun g c = EMPTY; traverseWithin (0,0) (3,3) g;")).is_empty());
    let one = eval_ok("open Level_5; build2D (4,4); fun g c = RED; traverseWithin (0,0) (0,0) g;");
    assert_eq!(flat(&one).len(), 1);
    assert!(matches!(
        eval_err("open Level_5; build2D (4,4); fun g c = RED; traverseWithin (2,0) (1,0) g;").1,
        EvalErrorKind::Space(SpaceError::Range { .. })
    ));
}

#[test]
fn three_dimensional_program() {
    let src = "open Level_5; build3D (4,4,4);
        put3D (4,1,4) GRAY (0,0,0);
        fun pillar (x,y,z) = if x = z andalso y > 0 then RED else EMPTY;
        traverseWithin (0,0,0) (3,3,3) pillar;
        setMySpace3D (1,1,1) (2,2,2); put3D (5,5,5) BLUE (0,0,0); clearMySpace3D ();
        showLDraw \"tower\"; showSTL \"tower\";";
    let result = eval_ok(src);
    let Some(Artifact::Solid(s)) = &result.space else { panic!() };
    assert_eq!(s.count_of("GRAY"), 16);
    assert_eq!(s.count_of("BLUE"), 8);
    // Diagonal pillars at heights 1..3, minus those inside the blue cube.
    assert_eq!(s.count_of("RED"), 12 - 2 * 2);
    let targets: Vec<_> = result.directives.iter().map(|d| d.target).collect();
    assert_eq!(targets, vec![ShowTarget::LDraw, ShowTarget::Stl]);
}

#[test]
fn regions_translate_and_clip() {
    let src = "open Level_3; build2D (64,64); setMySpace2D (10,10) (5,5); put2D (10,10) RED (0,0); clearMySpace2D (); put2D (1,1) BLUE (0,0);";
    let cells = flat(&eval_ok(src));
    assert_eq!(cells.len(), 26);
    assert!(cells.iter().filter(|(_, b)| *b == "RED").all(|(c, _)| (10..15).contains(&c.x) && (10..15).contains(&c.y)));
    assert_eq!(cells.get(&Coord2::new(0, 0)).map(String::as_str), Some("BLUE"));
    assert!(matches!(eval_err("open Level_3; build2D (64,64); setMySpace2D (60,60) (10,10);").1, EvalErrorKind::Space(SpaceError::Region { .. })));
}

#[test]
fn bundled_programs_run() {
    for (name, src) in [
        ("olympic", include_str!("../../../programs/olympic.bl")),
        ("checkerboard", include_str!("../../../programs/checkerboard.bl")),
        ("tower", include_str!("../../../programs/tower.bl")),
    ] {
        let result = run(src, palette()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(result.space.is_some(), "{name}");
        assert!(!result.directives.is_empty(), "{name}");
    }
}

#[test]
fn errors_have_positions() {
    for src in ["(* open", "put2D (1,;", "val x = \"abc", "build2D (1,1) $", "open Level_1; nope;"] {
        let err = run(src, palette()).unwrap_err();
        assert!(err.pos().line >= 1 && err.pos().column >= 1, "{src}: {err}");
    }
}

// Round-trip property over generated ASTs.

const NAMES: [&str; 6] = ["x", "y", "flag", "put2D", "RED", "a_1'"];

fn at(kind: ExprKind) -> Expr {
    Expr::new(kind, Pos::START)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        any::<i64>().prop_map(|n| at(ExprKind::Int(n))),
        any::<bool>().prop_map(|b| at(ExprKind::Bool(b))),
        "[ -~\\n\\t]{0,8}".prop_map(|s| at(ExprKind::Str(s))),
        Just(at(ExprKind::Unit)),
        prop::sample::select(&NAMES[..]).prop_map(|n| at(ExprKind::Var(n.into()))),
    ]
}

fn params() -> impl Strategy<Value = Vec<Param>> {
    let name = prop::sample::select(&NAMES[..3]).prop_map(String::from);
    let param = prop_oneof![
        name.clone().prop_map(Param::Name),
        prop::collection::vec(name, 1..4).prop_map(Param::Tuple),
    ];
    prop::collection::vec(param, 1..3)
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 4, |inner| {
        let b = |e: Expr| Box::new(e);
        let op = prop::sample::select(&[
            brickforge::dsl::ArithOp::Add,
            brickforge::dsl::ArithOp::Sub,
            brickforge::dsl::ArithOp::Mul,
            brickforge::dsl::ArithOp::Div,
            brickforge::dsl::ArithOp::Mod,
        ][..]);
        let cmp = prop::sample::select(&[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge][..]);
        let binding = prop_oneof![
            (prop::sample::select(&NAMES[..3]), inner.clone())
                .prop_map(|(n, e)| Binding::Val { name: n.into(), expr: e, pos: Pos::START }),
            (prop::sample::select(&NAMES[..3]), params(), inner.clone()).prop_map(|(n, ps, e)| Binding::Fun(FunDecl {
                name: n.into(),
                params: ps,
                body: e,
                pos: Pos::START
            })),
        ];
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| at(ExprKind::Tuple(v))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| at(ExprKind::Seq(v))),
            (inner.clone(), inner.clone()).prop_map(move |(f, a)| at(ExprKind::Apply(b(f), b(a)))),
            (prop::collection::vec(binding, 0..3), inner.clone()).prop_map(move |(bs, e)| at(ExprKind::Let(bs, b(e)))),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(move |(c, t, e)| at(ExprKind::If(b(c), b(t), b(e)))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| at(ExprKind::AndAlso(b(l), b(r)))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| at(ExprKind::OrElse(b(l), b(r)))),
            (op, inner.clone(), inner.clone()).prop_map(move |(o, l, r)| at(ExprKind::Arith(o, b(l), b(r)))),
            (cmp, inner.clone(), inner.clone()).prop_map(move |(o, l, r)| at(ExprKind::Cmp(o, b(l), b(r)))),
            inner.prop_map(move |e| at(ExprKind::Neg(b(e)))),
        ]
    })
}

fn decl() -> impl Strategy<Value = Decl> {
    let name = prop::sample::select(&NAMES[..3]).prop_map(String::from);
    prop_oneof![
        Just(Decl::Open { name: "Level_3".into(), pos: Pos::START }),
        (name.clone(), params(), expr())
            .prop_map(|(name, params, body)| Decl::Fun(FunDecl { name, params, body, pos: Pos::START })),
        (name, expr()).prop_map(|(name, expr)| Decl::Val { name, expr, pos: Pos::START }),
        expr().prop_map(Decl::Expr),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pretty_print_round_trips(decls in prop::collection::vec(decl(), 1..5)) {
        let program = Program { decls };
        let text = pretty::program(&program);
        let reparsed = parse_source(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(reparsed, program, "{}", text);
    }
}
