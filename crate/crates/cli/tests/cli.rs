//! Runs the command line front end on the corpus.

use std::path::Path;

use lfhohh::hohh::Limits;
use lfhohh::pipeline::Pipeline;
use lfhohh::translate::{parse_lambdaprolog, Mode};
use lfhohh_cli::{run, Outcome};

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn lfhohh(args: &[&str]) -> Outcome {
    run(std::iter::once("lfhohh").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lfhohh(&["check", &corpus("natlist.elf")]).code, 0);
    assert_eq!(lfhohh(&["check", &write(dir.path(), "empty.elf", "")]).code, 0);

    let dup = lfhohh(&["check", &write(dir.path(), "dup.elf", "nat : type. z : nat. z : nat.")]);
    assert_eq!(dup.code, 1);
    assert!(dup.stderr.contains("duplicate declaration"), "{}", dup.stderr);

    let bad = lfhohh(&["check", &write(dir.path(), "bad.elf", "nat : type. z : nat. w : nat z.")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("`w`"), "{}", bad.stderr);

    assert_eq!(lfhohh(&["check", &dir.path().join("missing.elf").to_string_lossy()]).code, 2);
    assert_eq!(lfhohh(&["frobnicate"]).code, 2);
}

#[test]
fn translate_is_deterministic() {
    for flag in ["--naive", "--optimized", "--no-simplify", "--explain-strictness"] {
        let a = lfhohh(&["translate", &corpus("natlist.elf"), flag]);
        let b = lfhohh(&["translate", &corpus("natlist.elf"), flag]);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
        parse_lambdaprolog(&a.stdout).unwrap();
    }
}

#[test]
fn translate_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("append.lp");
    let o = lfhohh(&["translate", &corpus("append.elf"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let single = std::fs::read_to_string(&out).unwrap();
    assert_eq!(single, lfhohh(&["translate", &corpus("append.elf")]).stdout);

    let base = dir.path().join("append");
    let o = lfhohh(&["translate", &corpus("append.elf"), "--split-sig-mod", "-o", base.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let sig = std::fs::read_to_string(dir.path().join("append.sig")).unwrap();
    let module = std::fs::read_to_string(dir.path().join("append.mod")).unwrap();
    assert!(sig.starts_with("sig append."));
    assert!(module.starts_with("module append."));
    assert_eq!(parse_lambdaprolog(&format!("{sig}\n{module}")).unwrap(), parse_lambdaprolog(&single).unwrap());
}

#[test]
fn no_simplify_keeps_true_premises() {
    let kept = lfhohh(&["translate", &corpus("append.elf"), "--no-simplify"]).stdout;
    let simplified = lfhohh(&["translate", &corpus("append.elf")]).stdout;
    assert!(kept.contains("true =>"));
    assert!(!simplified.contains("true =>"));
}

#[test]
fn explain_strictness_comments() {
    let o = lfhohh(&["translate", &corpus("strict-f.elf"), "--explain-strictness"]);
    assert!(o.stdout.lines().any(|l| l.starts_with("%   x: strict by CTX_t")), "{}", o.stdout);
    let s = lfhohh(&["strictness", &corpus("append.elf")]);
    assert_eq!(s.code, 0);
    assert!(s.stdout.contains("appNil\n  l: strict by APP_t(append, arg 2) > INIT_o\n"), "{}", s.stdout);
    assert!(s.stdout.contains("  #5: not strict"));
}

#[test]
fn solve_examples() {
    let o = lfhohh(&["solve", &corpus("append.elf"), "append (cons z nil) nil (cons z nil)"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("  M = appCons z nil nil nil (appNil nil)\n"), "{}", o.stdout);

    let o = lfhohh(&["solve", &corpus("append.elf"), "append (cons (s z) nil) (cons z nil) L"]);
    assert!(o.stdout.contains("  L = cons (s z) (cons z nil)\n"), "{}", o.stdout);

    let o = lfhohh(&["solve", &corpus("foo1.elf"), "bar z"]);
    assert_eq!((o.code, o.stdout.as_str()), (1, "no\n"));

    let o = lfhohh(&["solve", &corpus("foo2.elf"), "bar Y"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("  M = foo Y\n") && o.stdout.contains("answer not closed"), "{}", o.stdout);
}

#[test]
fn solve_limits() {
    let q = "plus (s (s (s z))) z N";
    let o = lfhohh(&["solve", &corpus("natlist.elf"), q, "--depth", "2"]);
    assert_eq!((o.code, o.stdout.as_str()), (1, "depth exhausted\n"));
    assert_eq!(lfhohh(&["solve", &corpus("natlist.elf"), q, "--depth", "4"]).code, 0);

    let all = lfhohh(&["solve", &corpus("append.elf"), "append L K (cons z (cons z nil))", "-n", "0"]);
    assert_eq!(all.stdout.matches("solution ").count(), 3, "{}", all.stdout);
    let two = lfhohh(&["solve", &corpus("append.elf"), "append L K (cons z (cons z nil))", "-n", "2"]);
    assert_eq!(two.stdout.matches("solution ").count(), 2);
    assert!(all.stdout.starts_with(&two.stdout));
    assert_eq!(lfhohh(&["solve", &corpus("append.elf"), "append L", "-n", "0"]).code, 1);
}

#[test]
fn solve_is_deterministic() {
    let file = corpus("foo-fy.elf");
    for mode in [&[][..], &["--naive"][..]] {
        let args: Vec<&str> = [&["solve", &file, "bar z", "-n", "0", "--depth", "5"][..], mode].concat();
        let first = lfhohh(&args);
        assert_eq!(first.code, 0);
        assert_eq!(first, lfhohh(&args));
    }
}

/// Every answer, declared at its query type, checks as part of the signature.
#[test]
fn pipeline_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let queries = [
        ("append.elf", "append L K (cons z (cons (s z) nil))"),
        ("natlist.elf", "plus N (s z) (s (s z))"),
        ("natlist.elf", "append (cons z nil) nil (cons z nil)"),
        ("foo-fy.elf", "bar (s z)"),
    ];
    for (file, q) in queries {
        let src = std::fs::read_to_string(corpus(file)).unwrap();
        let cli = lfhohh(&["solve", &corpus(file), q, "-n", "0", "--depth", "6"]);
        assert_eq!(cli.code, 0, "{q}: {}", cli.stdout);
        let p = Pipeline::new(&src, Mode::Optimized, true).unwrap();
        let plan = p.query(q).unwrap();
        for (i, s) in p.solver(&plan, Limits { max_depth: 6 }).enumerate() {
            let a = p.answer(&plan, &s).unwrap();
            assert!(cli.stdout.contains(&format!("  M = {}\n", a.inhabitant)));
            let extended = format!("{src}\nanswer_type : {} -> type.\nanswer_ok : answer_type ({}).\n", a.ty, a.inhabitant);
            let o = lfhohh(&["check", &write(dir.path(), &format!("answer{i}.elf"), &extended)]);
            assert_eq!(o.code, 0, "{q}: {}", o.stderr);
        }
    }
}
