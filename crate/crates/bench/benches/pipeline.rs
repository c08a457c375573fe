use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lfhohh::hohh::Limits;
use lfhohh::lf::{check_signature, parse_signature};
use lfhohh::pipeline::Pipeline;
use lfhohh::translate::{emit_lambdaprolog, simplify_program, translate_signature, Mode};

fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn check(c: &mut Criterion) {
    let src = corpus("natlist.elf");
    c.bench_function("parse and check natlist", |b| {
        b.iter(|| check_signature(&parse_signature(black_box(&src)).unwrap()).unwrap())
    });
}

fn translate(c: &mut Criterion) {
    let sig = parse_signature(&corpus("strict-f.elf")).unwrap();
    for mode in [Mode::Naive, Mode::Optimized] {
        c.bench_function(&format!("translate strict-f {mode:?}"), |b| {
            b.iter(|| emit_lambdaprolog(&simplify_program(&translate_signature(black_box(&sig), mode))))
        });
    }
}

fn solve(c: &mut Criterion) {
    let src = corpus("natlist.elf");
    let queries = [
        ("append split", "append L K (cons z (cons (s z) (cons z nil)))"),
        ("plus inverse", "plus N (s z) (s (s (s z)))"),
    ];
    for mode in [Mode::Naive, Mode::Optimized] {
        let p = Pipeline::new(&src, mode, true).unwrap();
        for (name, q) in queries {
            let plan = p.query(q).unwrap();
            c.bench_function(&format!("solve {name} {mode:?}"), |b| {
                b.iter(|| p.solver(&plan, Limits { max_depth: 20 }).take(4).count())
            });
        }
    }
}

criterion_group!(benches, check, translate, solve);
criterion_main!(benches);
