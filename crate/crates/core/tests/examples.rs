//! End-to-end runs on the corpus signatures.

use lfhohh::hohh::{validate_solution, Limits, Status};
use lfhohh::lf::{check_object, parse_object, Context};
use lfhohh::pipeline::Pipeline;
use lfhohh::translate::Mode;

fn corpus(name: &str) -> String {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn pipeline(name: &str, mode: Mode) -> Pipeline {
    Pipeline::new(&corpus(name), mode, true).unwrap()
}

#[test]
fn closed_append_query() {
    for mode in [Mode::Optimized, Mode::Naive] {
        let p = pipeline("append.elf", mode);
        let plan = p.query("append (cons z nil) nil (cons z nil)").unwrap();
        let s = p.solver(&plan, Limits { max_depth: 16 }).next().expect("a solution");
        assert!(validate_solution(&p.program, &plan.goal, &s));
        let a = p.answer(&plan, &s).unwrap();
        let expected = parse_object("appCons z nil nil nil (appNil nil)", &p.sig).unwrap();
        assert_eq!(a.inhabitant, expected);
        check_object(&p.sig, &Context::new(), &a.inhabitant).unwrap();
    }
}

#[test]
fn existential_append_query() {
    let p = pipeline("append.elf", Mode::Optimized);
    let plan = p.query("append (cons (s z) nil) (cons z nil) L").unwrap();
    let s = p.solver(&plan, Limits { max_depth: 8 }).next().expect("a solution");
    assert_eq!(s.cost, 2);
    let a = p.answer(&plan, &s).unwrap();
    assert_eq!(a.bindings[0].1, parse_object("cons (s z) (cons z nil)", &p.sig).unwrap());
    let expected =
        parse_object("appCons (s z) nil (cons z nil) (cons z nil) (appNil (cons z nil))", &p.sig).unwrap();
    assert_eq!(a.inhabitant, expected);
}

#[test]
fn first_foo_fails_finitely() {
    let p = pipeline("foo1.elf", Mode::Optimized);
    let plan = p.query("bar z").unwrap();
    let mut solver = p.solver(&plan, Limits::default());
    assert!(solver.next().is_none());
    assert_eq!(solver.status(), Status::Exhausted);
}

#[test]
fn second_foo_leaves_argument_free() {
    let p = pipeline("foo2.elf", Mode::Optimized);
    let plan = p.query("bar Y").unwrap();
    let s = p.solver(&plan, Limits::default()).next().expect("a solution");
    assert!(validate_solution(&p.program, &plan.goal, &s));
    let y = s.get("Y").unwrap();
    assert_eq!(s.free.len(), 1);
    assert_eq!(s.get("M").unwrap().to_string(), format!("foo {y}"));
    assert!(p.answer(&plan, &s).is_err());
}

#[test]
fn fy_example() {
    let p = pipeline("foo-fy.elf", Mode::Optimized);
    let plan = p.query("bar z").unwrap();
    let sols: Vec<_> = p.solver(&plan, Limits { max_depth: 4 }).collect();
    let shown: Vec<String> = sols.iter().map(|s| p.answer(&plan, s).unwrap().inhabitant.to_string()).collect();
    assert!(shown.len() >= 2, "{shown:?}");
    for s in &sols {
        assert!(validate_solution(&p.program, &plan.goal, s));
    }
    println!("{shown:?}");
}
