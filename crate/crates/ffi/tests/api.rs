use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use robinson_embed_ffi::*;

const MATRIX_A: &str = "5 2\n2 2 1 0 0\n2 2 2 1 1\n1 2 2 2 1\n0 1 2 2 2\n0 1 1 2 2\n";
const MATRIX_B: &str =
    "6 2\n2 2 1 0 0 0\n2 2 2 1 1 1\n1 2 2 2 1 1\n0 1 2 2 2 1\n0 1 1 2 2 2\n0 1 1 1 2 2\n";

fn parse(text: &str) -> (RbeStatus, *mut RbeMatrix) {
    let text = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    let status = unsafe { rbe_matrix_parse(text.as_ptr(), &mut m) };
    (status, m)
}

fn last_error() -> String {
    let p = rbe_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { rbe_string_free(p) };
    s
}

#[test]
fn solve_feasible_matrix() {
    let (status, a) = parse(MATRIX_A);
    assert_eq!(status, RbeStatus::Ok);
    unsafe {
        assert_eq!((rbe_matrix_n(a), rbe_matrix_k(a)), (5, 2));
        let mut o = ptr::null_mut();
        assert_eq!(rbe_solve(a, RbeMethod::General, &mut o), RbeStatus::Ok);
        assert!(rbe_outcome_is_feasible(o));
        let mut d = [0.0; 2];
        let mut pi = [0.0; 5];
        assert_eq!(
            rbe_outcome_values(o, d.as_mut_ptr(), 2, pi.as_mut_ptr(), 5),
            RbeStatus::Ok
        );
        assert!(d[0] > d[1] && d[1] > 0.0);
        assert!(pi.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            rbe_outcome_values(o, d.as_mut_ptr(), 1, ptr::null_mut(), 0),
            RbeStatus::Usage
        );
        assert!(last_error().contains("needs 2"));

        // The JSON round-trips through the verifier.
        let json = take_string(rbe_outcome_to_json(o));
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        let embedding = serde_json::json!({"d": doc["d"], "pi": doc["pi"]}).to_string();
        let embedding = CString::new(embedding).unwrap();
        assert_eq!(rbe_verify_json(a, embedding.as_ptr()), RbeStatus::Ok);
        rbe_outcome_free(o);
        rbe_matrix_free(a);
    }
}

#[test]
fn infeasible_matrix_keeps_certificate() {
    let (_, b) = parse(MATRIX_B);
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(rbe_solve(b, RbeMethod::Auto, &mut o), RbeStatus::Infeasible);
        assert!(!o.is_null() && !rbe_outcome_is_feasible(o));
        let json = take_string(rbe_outcome_to_json(o));
        assert!(json.contains(r#""status":"infeasible""#), "{json}");
        assert_eq!(
            rbe_outcome_values(o, ptr::null_mut(), 0, ptr::null_mut(), 0),
            RbeStatus::Infeasible
        );
        rbe_outcome_free(o);
        rbe_matrix_free(b);
    }
}

#[test]
fn verify_known_embedding() {
    let (_, a) = parse(MATRIX_A);
    let owned: Vec<CString> = ["8", "6", "0", "5", "6.5", "11.75", "12.75"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const std::ffi::c_char> = owned.iter().map(|s| s.as_ptr()).collect();
    unsafe {
        assert_eq!(
            rbe_verify(a, ptrs.as_ptr(), 2, ptrs[2..].as_ptr(), 5),
            RbeStatus::Ok
        );
        assert_eq!(
            rbe_verify(a, ptrs.as_ptr(), 2, ptrs[2..].as_ptr(), 4),
            RbeStatus::Usage
        );
        let swapped = [ptrs[1], ptrs[0]];
        assert_eq!(
            rbe_verify(a, swapped.as_ptr(), 2, ptrs[2..].as_ptr(), 5),
            RbeStatus::Usage
        );
        let moved =
            CString::new(r#"{"d":["8","6"],"pi":["0","6","6.5","11.75","12.75"]}"#).unwrap();
        assert_eq!(rbe_verify_json(a, moved.as_ptr()), RbeStatus::Infeasible);
        assert!(last_error().contains("pair (1, 2)"));
        rbe_matrix_free(a);
    }
}

#[test]
fn matrix_errors_and_null_pointers() {
    let (status, m) = parse("3 2\n2 1 2\n1 2 1\n2 1 2\n");
    assert_eq!(status, RbeStatus::InvalidMatrix);
    assert!(m.is_null());
    assert!(last_error().contains("(1,2,3)"));
    let (status, _) = parse("3 2\n2 1\n");
    assert_eq!(status, RbeStatus::Usage);

    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            rbe_matrix_parse(ptr::null(), &mut m),
            RbeStatus::NullPointer
        );
        assert_eq!(
            rbe_matrix_parse(c"1 1\n1\n".as_ptr(), ptr::null_mut()),
            RbeStatus::NullPointer
        );
        let mut o = ptr::null_mut();
        assert_eq!(
            rbe_solve(ptr::null(), RbeMethod::Auto, &mut o),
            RbeStatus::NullPointer
        );
        assert!(rbe_outcome_to_json(ptr::null()).is_null());
        assert_eq!(rbe_matrix_n(ptr::null()), 0);
        rbe_matrix_free(ptr::null_mut());
        rbe_outcome_free(ptr::null_mut());
        rbe_string_free(ptr::null_mut());

        let levels = [2i64, 1, 1, 2];
        assert_eq!(
            rbe_matrix_from_levels(2, 2, levels.as_ptr(), &mut m),
            RbeStatus::Ok
        );
        assert_eq!(rbe_solve(m, RbeMethod::Ratio, &mut o), RbeStatus::Ok);
        rbe_outcome_free(o);
        rbe_matrix_free(m);
        let three = [3i64, 1, 1, 3];
        assert_eq!(
            rbe_matrix_from_levels(2, 3, three.as_ptr(), &mut m),
            RbeStatus::Ok
        );
        assert_eq!(rbe_solve(m, RbeMethod::Ratio, &mut o), RbeStatus::Usage);
        assert!(o.is_null());
        rbe_matrix_free(m);
    }
}

#[test]
fn success_clears_the_last_error() {
    let _ = parse("x");
    assert!(!rbe_last_error().is_null());
    let (status, m) = parse(MATRIX_A);
    assert_eq!(status, RbeStatus::Ok);
    assert!(rbe_last_error().is_null());
    unsafe { rbe_matrix_free(m) };
}

#[test]
fn header_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/robinson_embed.h");
    let text = std::fs::read_to_string(header).unwrap();
    for symbol in [
        "typedef struct RbeMatrix RbeMatrix;",
        "typedef struct RbeOutcome RbeOutcome;",
        "RBE_STATUS_NULL_POINTER = 5",
        "rbe_matrix_parse(",
        "rbe_solve(",
        "rbe_verify_json(",
        "rbe_string_free(",
        "rbe_last_error(void)",
    ] {
        assert!(text.contains(symbol), "missing {symbol}");
    }
}

/// Compiles `tests/c/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|deps| deps.parent()).unwrap();
    let lib = profile_dir.join("librobinson_embed_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("robinson_embed_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
