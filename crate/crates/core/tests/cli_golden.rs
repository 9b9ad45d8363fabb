use std::process::Command;

fn rmtorus(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rmtorus")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = rmtorus(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

#[test]
fn cfrac() {
    assert_eq!(ok(&["cfrac", "--", "-1,2,1"]), "{\"P\":-1,\"D\":2,\"Q\":1,\"preperiod\":[0],\"period\":[2]}\n");
    assert_eq!(ok(&["cfrac", "1,5,2"]), "{\"P\":1,\"D\":5,\"Q\":2,\"preperiod\":[],\"period\":[1]}\n");
}

#[test]
fn matrix_and_unit() {
    assert_eq!(ok(&["matrix", "-1,3,1"]), "{\"period\":[1,2],\"A\":[[3,1],[2,1]],\"trace\":4,\"det\":1}\n");
    assert_eq!(ok(&["unit", "-1,2,1"]), "{\"x\":2,\"y\":1,\"norm\":-1}\n");
    assert_eq!(ok(&["unit", "-1,5,2", "--conductor", "2"]), "{\"x\":3,\"y\":2,\"norm\":-1}\n");
}

#[test]
fn pi_and_lp() {
    assert_eq!(ok(&["pi", "-1,2,1", "--p", "3"]), "{\"pi\":4,\"trace_Apow\":34}\n");
    assert_eq!(
        ok(&["lp", "--", "-1,2,1", "--p", "3"]),
        "{\"pi\":4,\"T\":34,\"Lp\":[[31,3],[30,3]],\"detImL\":-30,\"group\":[1,30]}\n"
    );
    assert_eq!(
        ok(&["lp", "-1,5,2", "--p", "2"]),
        "{\"pi\":3,\"T\":4,\"Lp\":[[2,2],[1,2]],\"detImL\":-1,\"group\":[1,1]}\n"
    );
    assert_eq!(
        ok(&["lp", "-1,2,1", "--p", "3", "--output", "tsv"]),
        "pi\tT\tLp\tdetImL\tgroup\n4\t34\t[[31,3],[30,3]]\t-30\t[1,30]\n"
    );
}

#[test]
fn group_and_count() {
    assert_eq!(
        ok(&["group", "--matrix", "1,0,0,1"]),
        "{\"L\":[[1,0],[0,1]],\"ImL\":[[0,0],[0,0]],\"group\":[0,0],\"order\":null}\n"
    );
    assert_eq!(ok(&["count", "--curve", "-1,0", "--p", "7"]), "{\"a\":-1,\"b\":0,\"p\":7,\"count\":8,\"a_p\":0}\n");
}

#[test]
fn match_lines() {
    let (code, out, err) = rmtorus(&["match", "--", "-1,2,1", "--curve", "-1,0", "--primes", "3,5"]);
    assert_eq!(code, 0);
    assert!(err.contains("skipped bad primes"));
    assert_eq!(
        out,
        "{\"curve\":[-1,0],\"p\":5,\"pi\":3,\"T\":14,\"detImL\":-8,\"group\":[1,8],\"ec_count\":8,\"match\":true}\n"
    );
}

#[test]
fn algebra_checks() {
    assert_eq!(ok(&["star-check", "--p", "1,0", "--q", "0,1"]), "{\"coherent\":false}\n");
    assert_eq!(ok(&["star-check", "--p", "-2,0", "--q", "1/3,0"]), "{\"coherent\":true}\n");
    assert_eq!(ok(&["ustar-check"]), "{\"preserved\":false,\"residual\":\"x1^2 - x2^2\"}\n");
    assert!(ok(&["skew-demo"]).contains("X1*X2 - X2*X1 - X1^2 = 0: true"));
}

#[test]
fn failures() {
    assert_eq!(rmtorus(&["cfrac", "1,4,1"]).0, 2);
    assert_eq!(rmtorus(&["unit", "0,3,1", "--conductor", "0"]).0, 2);
    assert_eq!(rmtorus(&["star-check", "--p", "0,0", "--q", "1,0"]).0, 2);
    assert_eq!(rmtorus(&["pi", "-1,2,1", "--p", "13", "--cap", "3"]).0, 3);
}
