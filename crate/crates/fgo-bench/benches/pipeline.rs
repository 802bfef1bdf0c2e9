use criterion::{criterion_group, criterion_main, Criterion};

use fgo_core::bisim::{bisim_run, DEFAULT_FUEL};
use fgo_core::enumerate::enumerate;
use fgo_core::fgg_eval::{run_fgg, RunOptions};
use fgo_core::fgg_typing::check_program_fgg;
use fgo_core::instances::{omega, DISPATCHER};
use fgo_core::monomorphise::mono_program;
use fgo_core::{parse_program, ParseOptions, Program};

const LISTS: &str = r#"package main

type Any interface {}
type Function(type a Any, b Any) interface {
	Apply(x a) b
}
type incr struct { n int }
func (this incr) Apply(x int) int {
	return x + this.n
}
type pos struct {}
func (this pos) Apply(x int) bool {
	return x > 0
}
type List(type a Any) interface {
	Map(type b Any)(f Function(a, b)) List(b)
}
type Nil(type a Any) struct {}
type Cons(type a Any) struct {
	head a
	tail List(a)
}
func (xs Nil(type a Any)) Map(type b Any)(f Function(a, b)) List(b) {
	return Nil(b){}
}
func (xs Cons(type a Any)) Map(type b Any)(f Function(a, b)) List(b) {
	return Cons(b){f.Apply(xs.head), xs.tail.Map(b)(f)}
}
func main() {
	var xs List(int) = Cons(int){3, Cons(int){6, Nil(int){}}}
	var ys List(int) = xs.Map(int)(incr{-5})
	var _ List(bool) = ys.Map(bool)(pos{})
}
"#;

fn checked(src: &str) -> Program {
    check_program_fgg(&parse_program(src, ParseOptions::fgg().extended()).unwrap()).unwrap()
}

fn bench_pipeline(c: &mut Criterion) {
    let dispatcher = checked(DISPATCHER);
    let lists = checked(LISTS);

    c.bench_function("parse+check lists", |b| b.iter(|| checked(LISTS)));
    c.bench_function("omega dispatcher", |b| b.iter(|| omega(&dispatcher).unwrap()));
    c.bench_function("mono lists", |b| b.iter(|| mono_program(&lists).unwrap()));
    c.bench_function("eval lists", |b| {
        b.iter(|| {
            run_fgg(
                &lists,
                &lists.main,
                RunOptions { fuel: Some(DEFAULT_FUEL), dynamic_checks: false },
            )
        })
    });
    c.bench_function("bisim lists", |b| b.iter(|| bisim_run(&lists, DEFAULT_FUEL).unwrap()));
    c.bench_function("enumerate bound 9", |b| b.iter(|| enumerate(9).count()));
}

criterion_group!(benches, bench_pipeline);
criterion_main!(benches);
