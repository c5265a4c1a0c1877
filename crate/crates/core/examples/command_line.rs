// The `foliate` commands driven in-process: build, profile, check.

use foliation::cli::run_with;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("foliate").chain(args.iter().copied()), &mut out, &mut err);
    let mut text = String::from_utf8(out).unwrap();
    text.push_str(&String::from_utf8(err).unwrap());
    (code, text)
}

pub fn run_example() {
    let dir = std::env::temp_dir().join(format!("foliation-example-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let (code, text) = call(&["build", "--samples", "1024", "--out", d]);
    println!("$ foliate build (exit {code})\n{text}");
    let leaf = dir.join("leaf.txt");
    let l = leaf.to_str().unwrap();
    for args in [
        vec!["distortion", l, "--out", d],
        vec!["check", l, "expbound"],
        vec!["check", "hyperbolic-circle", "monotone"],
        vec!["check", "figure-eight", "intersect"],
    ] {
        let (code, text) = call(&args);
        println!("$ foliate {} (exit {code})\n{text}", args.join(" "));
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
