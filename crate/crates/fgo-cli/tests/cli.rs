use std::io::Write;
use std::process::{Command, Stdio};

const DISPATCHER: &str = "package main\n\
    type Any interface {}\n\
    type Int struct {}\n\
    type Event interface { Process(type b Any)(y b) Int }\n\
    type UIEvent struct {}\n\
    func (x UIEvent) Process(type b Any)(y b) Int { return Int{} }\n\
    type Dispatcher struct {}\n\
    func (x Dispatcher) Dispatch(y Event) Int { return y.Process(Int)(Int{}) }\n\
    func main() { _ = Dispatcher{}.Dispatch(UIEvent{}) }\n";

fn fgo(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fgo"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn check_and_run_via_stdin() {
    let (code, out, _) = fgo(&["check-fgg", "-"], DISPATCHER);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "ok");

    let (code, out, _) = fgo(&["run-fgg", "-"], DISPATCHER);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "Int{}");
}

#[test]
fn json_output_and_exit_codes() {
    let (code, out, _) = fgo(&["check-fgg", "--json", "-"], DISPATCHER);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], true);

    // ill-typed program: exit 1, structured errors
    let bad = "package main\ntype A struct { f B }\nfunc main() { _ = A{} }\n";
    let (code, out, _) = fgo(&["check-fg", "--json", "-"], bad);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], false);

    // unparseable input: exit 2
    let (code, _, err) = fgo(&["check-fg", "-"], "not a program");
    assert_eq!(code, 2);
    assert!(err.contains("error"));
}

#[test]
fn mono_emits_fg_and_omega() {
    let (code, out, _) = fgo(&["mono", "--emit-omega", "-"], DISPATCHER);
    assert_eq!(code, 0);
    assert!(out.contains("// Dispatcher.Dispatch()"));
    assert!(out.contains("type Top struct"));
    assert!(out.contains("Process<Int>"));

    let (code, out, _) = fgo(&["mono", "--go-compat", "-"], DISPATCHER);
    assert_eq!(code, 0);
    assert!(out.contains("Process\u{1438}Int\u{1433}"));
}

#[test]
fn nomono_reports_witness_with_exit_1() {
    let bad = "package main\n\
        type Any interface {}\n\
        type Box(type a Any) struct { v a }\n\
        func (b Box(type a Any)) Nest() Any { return Box(Box(a)){b}.Nest() }\n\
        type unit struct {}\n\
        func main() { _ = unit{} }\n";
    let (code, out, _) = fgo(&["nomono", "-"], bad);
    assert_eq!(code, 1);
    assert!(out.contains("Box.Nest"));

    let (code, out, _) = fgo(&["nomono", "-"], DISPATCHER);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "monomorphisable");
}

#[test]
fn enumerate_count_and_fuel_env() {
    let (code, out, _) = fgo(&["enumerate", "--bound", "8", "--count-only"], "");
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "15");

    // diverging program: FGO_FUEL caps the run
    let spin = "package main\n\
        type Any interface {}\n\
        type S struct {}\n\
        func (x S) Spin() Any { return x.Spin() }\n\
        func main() { _ = S{}.Spin() }\n";
    let mut child = Command::new(env!("CARGO_BIN_EXE_fgo"))
        .args(["run-fg", "-"])
        .env("FGO_FUEL", "10")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(spin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code().unwrap(), 1);
    assert!(String::from_utf8(out.stdout).unwrap().contains("10 steps"));
}
