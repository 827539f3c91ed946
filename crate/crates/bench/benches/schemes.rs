use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use humancomp::adversary::exhaust::exhaust_seeds;
use humancomp::adversary::guess_solve::guess_and_solve;
use humancomp::prg::{prg1, Generator};
use humancomp::schemas::{letter_substitution, stml, stml_eval};
use humancomp::Alphabet;
use humancomp_bench::{challenge, digit_key, letter_key, seed};

fn schemas(c: &mut Criterion) {
    let key = letter_key(1);
    let text = challenge(10, 1);
    let symbols = Alphabet::LATIN.parse(&text, false).unwrap();
    c.bench_function("letter_substitution/10", |b| b.iter(|| letter_substitution(black_box(&text), &key).unwrap()));
    c.bench_function("stml_machine/10", |b| b.iter(|| stml(black_box(&text), &key, None).unwrap()));
    c.bench_function("stml_eval/10", |b| b.iter(|| stml_eval(black_box(&symbols), &key, None)));
}

fn generators(c: &mut Criterion) {
    let key = digit_key(2);
    let s = seed(10, 2);
    c.bench_function("prg1/10", |b| b.iter(|| prg1(black_box(&s), &key).unwrap()));
    c.bench_function("prg2_fast/10", |b| b.iter(|| Generator::Prg2.generate(black_box(&s), &key).unwrap()));
}

fn attacks(c: &mut Criterion) {
    let key = digit_key(3);
    let s = seed(6, 3);
    let y1 = Generator::Prg1.generate(&s, &key).unwrap();
    let y2 = Generator::Prg2.generate(&s, &key).unwrap();
    let mut group = c.benchmark_group("attacks");
    group.sample_size(10);
    group.bench_function("guess_and_solve/6", |b| b.iter(|| guess_and_solve(black_box(&y1), 6, &key, Generator::Prg1, 1e7).unwrap()));
    group.bench_function("exhaust/6", |b| b.iter(|| exhaust_seeds(black_box(&y2), &key, 6, Generator::Prg2, 1e7).unwrap()));
    group.finish();
}

criterion_group!(benches, schemas, generators, attacks);
criterion_main!(benches);
