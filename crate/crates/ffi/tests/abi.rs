use arrowlab_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

const CHAIN3: &str = r#"{"kind":"frame","name":"c3","elements":["0","1","2"],"leq":{"hasse":[["0","1"],["1","2"]]}}"#;
const TWO: &str = r#"{"kind":"frame","name":"two","elements":["0","1"],"leq":{"hasse":[["0","1"]]}}"#;
const CHI: &str = r#"{"kind":"morphism","name":"chi","from":"c3","to":"two","table":{"0":"0","1":"0","2":"1"}}"#;
const BAD_MAP: &str = r#"{"kind":"morphism","name":"bad","from":"two","to":"c3","table":{"0":"2","1":"0"}}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(arrowlab_last_error()).to_string_lossy().into_owned() }
}

fn loaded() -> *mut ArrowlabWorkspace {
    let ws = arrowlab_workspace_new(3);
    for (json, stem) in [(CHAIN3, "c3"), (TWO, "two"), (CHI, "chi")] {
        let st = unsafe { arrowlab_workspace_load_json(ws, c(json).as_ptr(), c(stem).as_ptr()) };
        assert_eq!(st, ArrowlabStatus::Ok, "{}", last_error());
    }
    ws
}

#[test]
fn load_check_and_free() {
    let ws = loaded();
    let mut size = 0usize;
    assert_eq!(unsafe { arrowlab_workspace_size(ws, c("c3").as_ptr(), &mut size) }, ArrowlabStatus::Ok);
    assert_eq!(size, 3);

    let mut rep: *mut ArrowlabReport = ptr::null_mut();
    let st = unsafe { arrowlab_workspace_check(ws, c("chi").as_ptr(), c("implicative").as_ptr(), &mut rep) };
    assert_eq!(st, ArrowlabStatus::Ok);
    unsafe {
        assert_eq!(arrowlab_report_status(rep), 0);
        assert_eq!(arrowlab_report_len(rep), 3);
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(arrowlab_report_json(rep, &mut json), ArrowlabStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        assert!(text.contains("implicative.uniform"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["status"], "pass");
        arrowlab_string_free(json);
        arrowlab_report_free(rep);
        arrowlab_workspace_free(ws);
    }
}

#[test]
fn violations_are_reported_not_errors() {
    let ws = loaded();
    unsafe {
        assert_eq!(arrowlab_workspace_load_json(ws, c(BAD_MAP).as_ptr(), c("bad").as_ptr()), ArrowlabStatus::Ok);
        let mut rep: *mut ArrowlabReport = ptr::null_mut();
        let st = arrowlab_workspace_check(ws, c("bad").as_ptr(), c("implicative.separator").as_ptr(), &mut rep);
        assert_eq!(st, ArrowlabStatus::LawViolation);
        assert_eq!(arrowlab_report_status(rep), 1);
        arrowlab_report_free(rep);
        arrowlab_workspace_free(ws);
    }
}

#[test]
fn input_errors_set_the_message() {
    let ws = loaded();
    unsafe {
        let st = arrowlab_workspace_load_json(ws, c("{ nope").as_ptr(), c("x").as_ptr());
        assert_eq!(st, ArrowlabStatus::InputError);
        assert!(last_error().contains("parse error"), "{}", last_error());
        let st = arrowlab_workspace_load_json(ws, c(CHAIN3).as_ptr(), c("again").as_ptr());
        assert_eq!(st, ArrowlabStatus::InputError);
        assert!(last_error().contains("duplicate"));
        let mut rep: *mut ArrowlabReport = ptr::null_mut();
        assert_eq!(arrowlab_workspace_check(ws, c("chi").as_ptr(), c("no.such-law").as_ptr(), &mut rep), ArrowlabStatus::InputError);
        assert!(rep.is_null());
        assert_eq!(arrowlab_workspace_check(ptr::null_mut(), c("chi").as_ptr(), ptr::null(), &mut rep), ArrowlabStatus::NullPointer);
        assert_eq!(arrowlab_workspace_set_cap(ws, c("bogus=1").as_ptr()), ArrowlabStatus::InputError);
        arrowlab_workspace_free(ws);
    }
}

#[test]
fn derive_and_evaluate() {
    let ws = loaded();
    unsafe {
        let args = [c("two")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let st = arrowlab_workspace_derive(ws, c("sierpinski").as_ptr(), argv.as_ptr(), argv.len(), c("s2").as_ptr());
        assert_eq!(st, ArrowlabStatus::Ok, "{}", last_error());
        let mut size = 0;
        arrowlab_workspace_size(ws, c("s2").as_ptr(), &mut size);
        assert_eq!(size, 3);

        let args = [c("chi")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        assert_eq!(arrowlab_workspace_derive(ws, c("adjoint").as_ptr(), argv.as_ptr(), 1, c("h").as_ptr()), ArrowlabStatus::Ok);

        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(arrowlab_lambda_eval(ws, c("c3").as_ptr(), c(r"\x. x").as_ptr(), &mut out), ArrowlabStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "2");
        arrowlab_string_free(out);
        arrowlab_workspace_free(ws);
    }
}

#[test]
fn suite_family_is_deterministic() {
    let run = || unsafe {
        let ws = arrowlab_workspace_new(11);
        let mut rep: *mut ArrowlabReport = ptr::null_mut();
        assert_eq!(arrowlab_run_suite(ws, c("frames").as_ptr(), &mut rep), ArrowlabStatus::Ok);
        let mut json: *mut c_char = ptr::null_mut();
        arrowlab_report_json(rep, &mut json);
        let s = CStr::from_ptr(json).to_str().unwrap().to_string();
        arrowlab_string_free(json);
        arrowlab_report_free(rep);
        arrowlab_workspace_free(ws);
        s
    };
    assert_eq!(run(), run());
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/arrowlab.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["arrowlab_workspace_new", "arrowlab_workspace_check", "arrowlab_report_free", "arrowlab_last_error", "ARROWLAB_STATUS_LAW_VIOLATION"] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let Ok(out) =
        std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-"]).stdin(std::process::Stdio::piped()).spawn().and_then(
            |mut child| {
                use std::io::Write;
                writeln!(child.stdin.take().unwrap(), "#include \"{header}\"\nint main(void) {{ return arrowlab_workspace_new(1) == 0; }}")?;
                child.wait_with_output()
            },
        )
    else {
        eprintln!("no C compiler; skipped the compile step");
        return;
    };
    assert!(out.status.success());
}
