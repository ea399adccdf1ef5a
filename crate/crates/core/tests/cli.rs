use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvaluation")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const ID: &str = "piecewise { [0,1] inc: x }";

#[test]
fn integrate_prints_the_refinement_table() {
    let o = run(&["integrate", "--fn", ID, "--eps", "1/4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,lo,hi,width\n0,0,1,1\n1,1/4,3/4,1/2\n2,3/8,5/8,1/4\n");

    let o = run(&["integrate", "--fn", ID, "--eps", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["converged"], true);
    assert_eq!(json["depth"], 2);
    assert_eq!(json["rows"][2]["lo"], "3/8");
    assert_eq!(json["rows"][2]["hi"], "5/8");
}

#[test]
fn integrate_reads_function_files() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "piecewise {{\n  [0,1] inc: x^2\n}}").unwrap();
    let o = run(&["integrate", "--fn", file.path().to_str().unwrap(), "--eps", "1/2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // ℓ₁(x²) = ½([0,1/4] + [1/4,1])
    assert_eq!(stdout(&o), "n,lo,hi,width\n0,0,1,1\n1,1/8,5/8,1/2\n");
}

#[test]
fn approximate_columns_round_outward() {
    let tent = "piecewise { [0,1/2] inc: 2*x; [1/2,1] dec: 2 - 2*x }";
    let o = run(&["integrate", "--fn", tent, "--eps", "1/2", "--format", "csv", "--approx-decimals", "1"]);
    assert_eq!(o.status.code(), Some(0));
    // ℓ₂ = [1/4,3/4]
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "n,lo,hi,width,lo_approx,hi_approx,width_approx");
    assert_eq!(lines[3], "2,1/4,3/4,1/2,0.2,0.8,0.5");
}

#[test]
fn malformed_function_is_an_input_error() {
    let o = run(&["integrate", "--fn", "piecewise { [0,1] inc: x + }", "--eps", "1/4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).starts_with("error: --fn <inline>:1:"), "{}", stderr(&o));

    let o = run(&["integrate", "--fn", "piecewise { [0,1/2] inc: x }", "--eps", "1/4"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["integrate", "--fn", ID, "--eps", "0"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["integrate", "--fn", ID, "--eps", "1/4", "--depth-cap", "31"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn depth_cap_prints_partial_table_and_exits_2() {
    let o = run(&["integrate", "--fn", ID, "--eps", "1/64", "--depth-cap", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 5);
    assert!(stderr(&o).contains("1/8"), "{}", stderr(&o));
}

#[test]
fn eval_valuation_and_measure() {
    let poset = "poset { x; y; x <= y }";
    let h = "fn h { x -> [1,3]; y -> [2,2] }";
    let o = run(&["eval", "--poset", poset, "--val", "[1/2,1/2]@x; [1,2]@y", "--fn", h]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // [1/2,3/2] + [2,4]
    assert_eq!(stdout(&o).trim(), "[5/2,11/2]");

    let o = run(&["eval", "--poset", poset, "--measure", "measure { 1 @ x; 1 @ y }", "--fn", h, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "lo,hi\n3,5\n");

    let o = run(&["eval", "--poset", poset, "--val", "[1,1]@z", "--fn", h]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--val"), "{}", stderr(&o));

    // not monotone for the information order
    let o = run(&["eval", "--poset", poset, "--val", "[1,1]@x", "--fn", "x -> [1,1]; y -> [1,3]"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn laws_pass_and_injected_faults_exit_3() {
    let o = run(&["laws", "--family", "drag", "--family", "choquet", "--cases", "20", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("PASS").count(), 2, "{text}");

    let o = run(&["laws", "--family", "drag", "--cases", "20", "--inject-fault", "mul-right-as-left"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("counterexample in"), "{}", stdout(&o));

    let o = run(&["laws", "--family", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn laws_json_is_reproducible() {
    let args = ["laws", "--family", "rval", "--cases", "30", "--seed", "11", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(json.is_object() || json.is_array());
    assert_eq!(a.stdout, b.stdout);
}
